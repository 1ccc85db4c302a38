//! Additive and multiplicative characters of Q_p with values in a
//! coefficient ring, and Gauss sums. Roots of unity are located inside the
//! ring deterministically: prime-to-ell orders through the Teichmueller
//! group, ell-power orders through powers of the presentation generator.

use super::PAdic;
use crate::error::{Error, Result};
use crate::fpoly::{self, FPoly};
use crate::rings::{mult_order, Presentation, Ring, RingElement};

const GENERATOR_SEARCH_CAP: u64 = 1 << 20;
const WILD_POWER_CAP: u64 = 1 << 12;

/// An element of exact multiplicative order d, found deterministically.
/// Fiber components are aligned so the pair glues over the common residue.
pub fn element_of_order(ring: &Ring, d: u64) -> Result<RingElement> {
    if d == 0 {
        return Err(Error::precondition("order 0 requested"));
    }
    if d == 1 {
        return Ok(ring.one());
    }
    match ring.pres() {
        Presentation::Local(_) => local_element_of_order(ring, d),
        Presentation::Product(cs) => {
            let parts: Result<Vec<RingElement>> =
                cs.iter().map(|c| element_of_order(c, d)).collect();
            ring.tuple(parts?)
        }
        Presentation::Fiber(f) => {
            let zl = element_of_order(&f.left, d)?;
            let zr = element_of_order(&f.right, d)?;
            let rl = f.left.residue_map()?;
            let rr = f.right.residue_map()?;
            let target = rl.apply(&zl)?;
            // the residues may differ by an automorphism of mu_d; fix it by
            // an exponent coprime to d (the ell-part is residually invisible
            // and untouched by the constraint)
            for e in 1..=d {
                if num_integer::gcd(e, d) != 1 {
                    continue;
                }
                let cand = zr.pow(e);
                if rr.apply(&cand)? == target {
                    return ring.pair(zl, cand);
                }
            }
            Err(Error::MissingRoots(format!(
                "mu_{d} halves of {} cannot be glued",
                ring.label()
            )))
        }
    }
}

fn local_element_of_order(ring: &Ring, d: u64) -> Result<RingElement> {
    let ell = ring.ell();
    let mut dt = d;
    let mut lk = 1u64;
    while dt % ell == 0 {
        dt /= ell;
        lk *= ell;
    }
    let mut out = ring.one();
    if dt > 1 {
        out = &out * &teich_element_of_order(ring, dt)?;
    }
    if lk > 1 {
        out = &out * &wild_element_of_order(ring, lk)?;
    }
    Ok(out)
}

/// Order prime to ell: generator of the residue field units, Teichmueller
/// lift, cofactor power.
fn teich_element_of_order(ring: &Ring, dt: u64) -> Result<RingElement> {
    let l = ring.local_pres()?;
    let f = fpoly::deg(&l.j).unwrap() as u32;
    let q1: u64 = (l.ell as u128)
        .pow(f)
        .checked_sub(1)
        .and_then(|v| v.try_into().ok())
        .ok_or_else(|| {
            Error::Unsupported(format!("residue field of {} too large to search", ring.label()))
        })?;
    if q1 % dt != 0 {
        return Err(Error::MissingRoots(format!(
            "mu_{dt} does not live in the residue field of {} (order {q1})",
            ring.label()
        )));
    }
    let gamma = residue_generator(&l.j, l.ell, q1)?;
    let lift = lift_residue_poly(ring, &gamma)?;
    let t = ring.teichmuller(&lift)?;
    Ok(t.pow(q1 / dt))
}

/// Lexicographically first multiplicative generator of F_{ell^f} = F_ell[t]/j.
fn residue_generator(j: &FPoly, ell: u64, q1: u64) -> Result<FPoly> {
    let f = fpoly::deg(j).unwrap();
    let primes = fpoly::prime_factors(q1);
    let mut idx: u64 = 1;
    let cap = GENERATOR_SEARCH_CAP;
    while idx < cap {
        let mut digits = Vec::with_capacity(f);
        let mut m = idx;
        for _ in 0..f {
            digits.push(m % ell);
            m /= ell;
        }
        if m == 0 {
            let cand: FPoly = digits;
            let ok = primes.iter().all(|&r| {
                let pw = fpoly::powmod(&cand, q1 / r, j, ell);
                pw != vec![1]
            });
            if ok {
                return Ok(cand);
            }
        }
        idx += 1;
    }
    Err(Error::MissingRoots(
        "no generator of the residue field found within the search cap".into(),
    ))
}

fn lift_residue_poly(ring: &Ring, c: &FPoly) -> Result<RingElement> {
    let gen = ring.gen()?;
    let mut acc = ring.zero();
    for &coef in c.iter().rev() {
        acc = &(&acc * &gen) + &ring.from_i64(coef as i64);
    }
    Ok(acc)
}

/// Order ell^k: roots this deep are not Teichmueller; they exist only in
/// suitably ramified presentations, as powers of the ring generator.
fn wild_element_of_order(ring: &Ring, lk: u64) -> Result<RingElement> {
    let ell = ring.ell();
    let one = ring.one();
    let g = ring.gen()?;
    if ring.is_unit(&g).is_some() {
        let mut x = one.clone();
        for _ in 1..=WILD_POWER_CAP {
            x = &x * &g;
            if x.pow(lk) == one && x.pow(lk / ell) != one {
                return Ok(x);
            }
        }
    }
    Err(Error::MissingRoots(format!(
        "no element of order {lk} among generator powers of {}; construct the ring from a suitable cyclotomic modulus",
        ring.label()
    )))
}

/// psi: Q_p -> A^x with kernel exactly p^c Z_p, supported on arguments of
/// valuation at least c - depth. The twist psi_b is carried as a scale.
#[derive(Debug, Clone)]
pub struct AdditiveCharacter {
    ring: Ring,
    p: u64,
    c: i64,
    depth: u32,
    zeta: RingElement,
    scale: PAdic,
}

impl AdditiveCharacter {
    pub fn new(ring: &Ring, p: u64, c: i64, depth: u32) -> Result<AdditiveCharacter> {
        if p == ring.ell() {
            return Err(Error::precondition(format!(
                "p = {p} must differ from the coefficient characteristic"
            )));
        }
        let order = (p as u128).checked_pow(depth).and_then(|v| u64::try_from(v).ok());
        let order =
            order.ok_or_else(|| Error::PrecisionExhausted(format!("p^{depth} overflows")))?;
        let zeta = element_of_order(ring, order)?;
        Ok(AdditiveCharacter {
            ring: ring.clone(),
            p,
            c,
            depth,
            zeta,
            scale: PAdic::one(p),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Exponent of the exact kernel, the twist included.
    pub fn kernel_exponent(&self) -> i64 {
        self.c - self.scale.val().expect("twist scale is nonzero")
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn zeta(&self) -> &RingElement {
        &self.zeta
    }

    /// psi_b(x) = psi(b x).
    pub fn twist(&self, b: &PAdic) -> Result<AdditiveCharacter> {
        if b.is_zero() {
            return Err(Error::precondition("twist by zero"));
        }
        let mut out = self.clone();
        out.scale = &self.scale * b;
        Ok(out)
    }

    pub fn eval(&self, x: &PAdic) -> Result<RingElement> {
        let y = &self.scale * x;
        let v = match y.val() {
            None => return Ok(self.ring.one()),
            Some(v) => v,
        };
        if v >= self.c {
            return Ok(self.ring.one());
        }
        let d = (self.c - v) as u32;
        if d > self.depth {
            return Err(Error::MissingRoots(format!(
                "psi at valuation {v} needs mu_{}^{d} but carries depth {}; extend the coefficient ring or deepen psi",
                self.p, self.depth
            )));
        }
        let k = y.unit_mod(d)?;
        let e = k * self.p.pow(self.depth - d);
        Ok(self.zeta.pow(e))
    }
}

/// chi: Q_p^x -> A^x, split as chi(p)^v times a finite table on the units
/// mod p^conductor.
#[derive(Debug, Clone)]
pub struct MultiplicativeCharacter {
    ring: Ring,
    p: u64,
    chi_pi: RingElement,
    conductor: u32,
    table: Vec<Option<RingElement>>,
}

impl MultiplicativeCharacter {
    pub fn unramified(ring: &Ring, p: u64, chi_pi: RingElement) -> Result<MultiplicativeCharacter> {
        if ring.is_unit(&chi_pi).is_none() {
            return Err(Error::NotAUnit(format!("chi(p) = {chi_pi}")));
        }
        Ok(MultiplicativeCharacter {
            ring: ring.clone(),
            p,
            chi_pi,
            conductor: 0,
            table: vec![],
        })
    }

    /// Build the unit table from values on generators, verifying closure,
    /// consistency, full coverage of (Z/p^a)^x, and conductor exactness.
    pub fn from_gen_values(
        ring: &Ring,
        p: u64,
        conductor: u32,
        chi_pi: RingElement,
        gens: &[(u64, RingElement)],
    ) -> Result<MultiplicativeCharacter> {
        if conductor == 0 {
            return MultiplicativeCharacter::unramified(ring, p, chi_pi);
        }
        if ring.is_unit(&chi_pi).is_none() {
            return Err(Error::NotAUnit(format!("chi(p) = {chi_pi}")));
        }
        let pa = super::checked_p_pow(p, conductor)?;
        let mut table: Vec<Option<RingElement>> = vec![None; pa as usize];
        table[1] = Some(ring.one());
        for (g, val) in gens {
            if g % p == 0 {
                return Err(Error::precondition(format!("generator {g} is not a unit")));
            }
            if ring.is_unit(val).is_none() {
                return Err(Error::NotAUnit(format!("chi({g}) = {val}")));
            }
        }
        let mut queue: Vec<u64> = vec![1];
        while let Some(u) = queue.pop() {
            let base = table[u as usize].clone().unwrap();
            for (g, val) in gens {
                let w = (u as u128 * (*g as u128) % pa as u128) as u64;
                let cand = &base * val;
                match &table[w as usize] {
                    None => {
                        table[w as usize] = Some(cand);
                        queue.push(w);
                    }
                    Some(existing) => {
                        if existing != &cand {
                            return Err(Error::precondition(format!(
                                "generator values are inconsistent at residue {w}"
                            )));
                        }
                    }
                }
            }
        }
        let unit_count = (1..pa).filter(|u| u % p != 0).count();
        let assigned = table.iter().filter(|t| t.is_some()).count();
        if assigned != unit_count {
            return Err(Error::precondition(format!(
                "generators reach {assigned} of {unit_count} unit classes mod {p}^{conductor}"
            )));
        }
        // conductor exactness: chi must be nontrivial one level up
        let deeper = if conductor == 1 { 1 } else { pa / p };
        let one = ring.one();
        let exact = (1..pa)
            .filter(|u| u % p != 0 && u % deeper == 1 % deeper)
            .any(|u| table[u as usize].as_ref() != Some(&one));
        if !exact {
            return Err(Error::precondition(format!(
                "declared conductor {conductor} is not exact"
            )));
        }
        Ok(MultiplicativeCharacter {
            ring: ring.clone(),
            p,
            chi_pi,
            conductor,
            table,
        })
    }

    /// Tamely ramified character pinned by its value on the least primitive
    /// root mod p.
    pub fn tame(
        ring: &Ring,
        p: u64,
        chi_pi: RingElement,
        value_on_generator: RingElement,
    ) -> Result<MultiplicativeCharacter> {
        let g = (2..p)
            .find(|&g| mult_order(g, p).map_or(false, |o| o == p - 1))
            .ok_or_else(|| Error::precondition(format!("no primitive root mod {p}")))?;
        MultiplicativeCharacter::from_gen_values(ring, p, 1, chi_pi, &[(g, value_on_generator)])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn chi_pi(&self) -> &RingElement {
        &self.chi_pi
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_ramified(&self) -> bool {
        self.conductor > 0
    }

    /// Value on a unit, given any representative of its class mod p^a.
    pub fn eval_unit(&self, u: u64) -> Result<RingElement> {
        if u % self.p == 0 {
            return Err(Error::precondition(format!("{u} is not a p-adic unit")));
        }
        if self.conductor == 0 {
            return Ok(self.ring.one());
        }
        let pa = super::checked_p_pow(self.p, self.conductor)?;
        Ok(self.table[(u % pa) as usize]
            .clone()
            .expect("unit table is total"))
    }

    pub fn eval(&self, x: &PAdic) -> Result<RingElement> {
        let v = x
            .val()
            .ok_or_else(|| Error::precondition("chi(0) is undefined"))?;
        let from_pi = self.chi_pi.pow_i64(v)?;
        if self.conductor == 0 {
            return Ok(from_pi);
        }
        let u = x.unit_mod(self.conductor)?;
        Ok(&from_pi * &self.eval_unit(u)?)
    }
}

/// Sum over units mod p^a of chi(u) psi(u p^(c-a)), the additive твist
/// normalized so the inner character has conductor exactly p^a.
pub fn gauss_sum(chi: &MultiplicativeCharacter, psi: &AdditiveCharacter) -> Result<RingElement> {
    if chi.ring() != psi.ring() {
        return Err(Error::mismatch("chi and psi value rings differ"));
    }
    if chi.p() != psi.p() {
        return Err(Error::mismatch("chi and psi live over different p"));
    }
    let a = chi.conductor();
    if a == 0 {
        return Err(Error::precondition(
            "Gauss sum needs a ramified chi (trivial on units has conductor 0)",
        ));
    }
    let p = chi.p();
    let c = psi.kernel_exponent();
    let pa = super::checked_p_pow(p, a)?;
    let shift = PAdic::p_pow(p, c - a as i64);
    let mut acc = chi.ring().zero();
    for u in 1..pa {
        if u % p == 0 {
            continue;
        }
        let arg = &PAdic::from_i64(p, u as i64) * &shift;
        let term = &chi.eval_unit(u)? * &psi.eval(&arg)?;
        acc = &acc + &term;
    }
    Ok(acc)
}
