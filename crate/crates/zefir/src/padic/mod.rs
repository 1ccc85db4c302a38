//! Exact Q_p arithmetic. A value is an honest rational viewed p-adically;
//! valuations and unit parts are computed on demand, so arithmetic never
//! loses digits and the working precision only limits how many digits a
//! caller may extract at once (u64 windows).

pub mod chars;
pub mod matrix;
pub mod measure;

pub use chars::{element_of_order, gauss_sum, AdditiveCharacter, MultiplicativeCharacter};
pub use matrix::PAdicMatrix;
pub use measure::{integrate_units, HaarMeasure, Normalization};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdic {
    p: u64,
    x: BigRational,
}

/// v_p of a nonzero integer.
fn val_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0i64;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&m, &pb);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Inverse mod m for m not necessarily prime; a must be coprime to m.
fn inv_mod_u64(a: u64, m: u64) -> Result<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NotAUnit(format!("{a} has no inverse mod {m}")));
    }
    Ok(t0.rem_euclid(m as i128) as u64)
}

fn checked_p_pow(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k).ok_or_else(|| {
        Error::PrecisionExhausted(format!("{p}^{k} exceeds the u64 digit window"))
    })
}

impl PAdic {
    pub fn new(p: u64, x: BigRational) -> PAdic {
        debug_assert!(p >= 2);
        PAdic { p, x }
    }

    pub fn zero(p: u64) -> PAdic {
        PAdic::new(p, BigRational::zero())
    }

    pub fn one(p: u64) -> PAdic {
        PAdic::new(p, BigRational::one())
    }

    pub fn from_i64(p: u64, v: i64) -> PAdic {
        PAdic::new(p, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(p: u64, num: i64, den: i64) -> Result<PAdic> {
        if den == 0 {
            return Err(Error::precondition("zero denominator"));
        }
        Ok(PAdic::new(
            p,
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        ))
    }

    /// p^k, any sign of k.
    pub fn p_pow(p: u64, k: i64) -> PAdic {
        let pk = BigInt::from(p).pow(k.unsigned_abs() as u32);
        let x = if k >= 0 {
            BigRational::from_integer(pk)
        } else {
            BigRational::new(BigInt::one(), pk)
        };
        PAdic::new(p, x)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rational(&self) -> &BigRational {
        &self.x
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    /// None is the valuation of zero.
    pub fn val(&self) -> Option<i64> {
        if self.x.is_zero() {
            return None;
        }
        Some(val_int(self.x.numer(), self.p) - val_int(self.x.denom(), self.p))
    }

    pub fn is_integral(&self) -> bool {
        self.val().map_or(true, |v| v >= 0)
    }

    pub fn is_unit(&self) -> bool {
        self.val() == Some(0)
    }

    /// The unit part x / p^v as a residue mod p^k. Nonzero x only.
    pub fn unit_mod(&self, k: u32) -> Result<u64> {
        let v = self
            .val()
            .ok_or_else(|| Error::precondition("unit part of zero"))?;
        if k == 0 {
            return Ok(0);
        }
        let pk = checked_p_pow(self.p, k)?;
        let shift = BigRational::from_integer(BigInt::from(self.p).pow(v.unsigned_abs() as u32));
        let u = if v >= 0 { &self.x / shift } else { &self.x * shift };
        let pkb = BigInt::from(pk);
        let a = ((u.numer() % &pkb) + &pkb) % &pkb;
        let b = ((u.denom() % &pkb) + &pkb) % &pkb;
        let a64: u64 = a.try_into().expect("reduced residue fits u64");
        let b64: u64 = b.try_into().expect("reduced residue fits u64");
        Ok((a64 as u128 * inv_mod_u64(b64, pk)? as u128 % pk as u128) as u64)
    }

    /// x mod p^k for p-integral x, as a residue in [0, p^k).
    pub fn residue_mod(&self, k: u32) -> Result<u64> {
        if self.is_zero() {
            return Ok(0);
        }
        let v = self.val().unwrap();
        if v < 0 {
            return Err(Error::precondition(format!(
                "residue of a non-integral value (v = {v})"
            )));
        }
        let pk = checked_p_pow(self.p, k)?;
        if v as u32 >= k {
            return Ok(0);
        }
        let u = self.unit_mod(k - v as u32)?;
        Ok((u as u128 * checked_p_pow(self.p, v as u32)? as u128 % pk as u128) as u64)
    }

    pub fn inv(&self) -> Result<PAdic> {
        if self.is_zero() {
            return Err(Error::NotAUnit("inverse of zero in Q_p".into()));
        }
        Ok(PAdic::new(self.p, self.x.recip()))
    }

    pub fn pow_i64(&self, e: i64) -> Result<PAdic> {
        if e < 0 && self.is_zero() {
            return Err(Error::NotAUnit("negative power of zero".into()));
        }
        Ok(PAdic::new(self.p, self.x.pow(e as i32)))
    }

    fn assert_same_p(&self, rhs: &PAdic) {
        assert!(
            self.p == rhs.p,
            "mixed residue characteristics {} and {}",
            self.p,
            rhs.p
        );
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.x)
    }
}

impl std::ops::Add for &PAdic {
    type Output = PAdic;
    fn add(self, rhs: &PAdic) -> PAdic {
        self.assert_same_p(rhs);
        PAdic::new(self.p, &self.x + &rhs.x)
    }
}

impl std::ops::Sub for &PAdic {
    type Output = PAdic;
    fn sub(self, rhs: &PAdic) -> PAdic {
        self.assert_same_p(rhs);
        PAdic::new(self.p, &self.x - &rhs.x)
    }
}

impl std::ops::Mul for &PAdic {
    type Output = PAdic;
    fn mul(self, rhs: &PAdic) -> PAdic {
        self.assert_same_p(rhs);
        PAdic::new(self.p, &self.x * &rhs.x)
    }
}

impl std::ops::Neg for &PAdic {
    type Output = PAdic;
    fn neg(self) -> PAdic {
        PAdic::new(self.p, -&self.x)
    }
}

#[cfg(test)]
mod tests;
