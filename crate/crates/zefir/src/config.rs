/// Default coefficient prime ell.
pub const DEFAULT_ELL: u64 = 3;
/// Default ell-adic precision exponent N (ring is a quotient mod ell^N).
pub const DEFAULT_ELL_PREC: u32 = 6;
/// Default residue prime p of the local field (kept small so the cyclotomic
/// extensions demanded by additive characters stay desk-scale).
pub const DEFAULT_P: u64 = 2;
/// Default working p-adic precision exponent M.
pub const DEFAULT_P_PREC: u32 = 12;
/// Extra precision added on top of the largest valuation seen in a run.
pub const P_PREC_PAD: u32 = 8;
/// Default number of extra stream rows checked beyond the explicit window.
pub const DEFAULT_MARGIN: usize = 8;
/// Default kernel exponent of the additive character: trivial on p*Z_p,
/// nontrivial on Z_p.
pub const DEFAULT_PSI_KERNEL: i64 = 1;

/// Tunable knobs threaded through stream construction and verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tuning {
    pub margin: usize,
    /// Explicit window rows kept beyond the expected denominator degree.
    pub window_pad: usize,
}

impl Default for Tuning {
    fn default() -> Self {
        Tuning {
            margin: DEFAULT_MARGIN,
            window_pad: 4,
        }
    }
}
