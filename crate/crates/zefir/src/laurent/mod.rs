//! Laurent polynomials A[X, 1/X], the multiplicative set S of polynomials
//! whose first and last coefficients are units, and the fraction ring
//! S^-1 A[X, 1/X]. Fractions are kept canonical: denominator supported in
//! degrees >= 0 with constant coefficient exactly 1. Canonical denominators
//! are invertible power series, hence regular, so equality by
//! cross-multiplication is sound over non-domains.

mod stream;

pub use stream::RecurrentStream;

use crate::error::{Error, Result};
use crate::rings::{Ring, RingElement, RingMap};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    ring: Ring,
    /// exponent of the first stored coefficient; irrelevant when zero
    low: i64,
    /// trimmed: empty iff the polynomial is zero, else first/last nonzero
    coeffs: Vec<RingElement>,
}

impl LaurentPoly {
    pub fn new(ring: Ring, mut low: i64, mut coeffs: Vec<RingElement>) -> LaurentPoly {
        debug_assert!(coeffs.iter().all(|c| c.ring() == &ring));
        while coeffs.first().map_or(false, |c| c.is_zero()) {
            coeffs.remove(0);
            low += 1;
        }
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            low = 0;
        }
        LaurentPoly { ring, low, coeffs }
    }

    pub fn zero(ring: Ring) -> LaurentPoly {
        LaurentPoly::new(ring, 0, vec![])
    }

    pub fn one(ring: Ring) -> LaurentPoly {
        let one = ring.one();
        LaurentPoly::new(ring, 0, vec![one])
    }

    pub fn x(ring: Ring) -> LaurentPoly {
        let one = ring.one();
        LaurentPoly::new(ring, 1, vec![one])
    }

    /// Monomial c X^k.
    pub fn monomial(c: RingElement, k: i64) -> LaurentPoly {
        let ring = c.ring().clone();
        LaurentPoly::new(ring, k, vec![c])
    }

    pub fn from_i64_coeffs(ring: &Ring, low: i64, cs: &[i64]) -> LaurentPoly {
        let coeffs = cs.iter().map(|&c| ring.from_i64(c)).collect();
        LaurentPoly::new(ring.clone(), low, coeffs)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent (0 for the zero polynomial).
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest exponent, or None when zero.
    pub fn high(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.low + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, k: i64) -> RingElement {
        if k < self.low || k >= self.low + self.coeffs.len() as i64 {
            return self.ring.zero();
        }
        self.coeffs[(k - self.low) as usize].clone()
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn first(&self) -> Option<&RingElement> {
        self.coeffs.first()
    }

    pub fn last(&self) -> Option<&RingElement> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &LaurentPoly) -> LaurentPoly {
        assert!(self.ring == rhs.ring, "laurent add across rings");
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high().unwrap().max(rhs.high().unwrap());
        let mut out = Vec::with_capacity((high - low + 1) as usize);
        for k in low..=high {
            out.push(&self.coeff(k) + &rhs.coeff(k));
        }
        LaurentPoly::new(self.ring.clone(), low, out)
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly::new(
            self.ring.clone(),
            self.low,
            self.coeffs.iter().map(|c| -c).collect(),
        )
    }

    pub fn sub(&self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &LaurentPoly) -> LaurentPoly {
        assert!(self.ring == rhs.ring, "laurent mul across rings");
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero(self.ring.clone());
        }
        let mut out = vec![self.ring.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        LaurentPoly::new(self.ring.clone(), self.low + rhs.low, out)
    }

    pub fn scale(&self, c: &RingElement) -> LaurentPoly {
        LaurentPoly::new(
            self.ring.clone(),
            self.low,
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    /// Multiply by X^k.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            ring: self.ring.clone(),
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// X -> 1/(q^n X): c_k X^k becomes c_k q^(-nk) X^(-k).
    pub fn substitute_inverse(&self, q: &RingElement, n: i64) -> Result<LaurentPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let high = match self.high() {
            None => return Ok(self.clone()),
            Some(h) => h,
        };
        // new low exponent is -high; iterate old exponents downward
        for k in (self.low..=high).rev() {
            let c = self.coeff(k);
            let factor = q.pow_i64(-n * k)?;
            out.push(&c * &factor);
        }
        Ok(LaurentPoly::new(self.ring.clone(), -high, out))
    }

    pub fn map_coefficients(&self, phi: &RingMap) -> Result<LaurentPoly> {
        if phi.src() != &self.ring {
            return Err(Error::mismatch("coefficient map source mismatch"));
        }
        let coeffs: Result<Vec<RingElement>> =
            self.coeffs.iter().map(|c| phi.apply(c)).collect();
        Ok(LaurentPoly::new(phi.dst().clone(), self.low, coeffs?))
    }
}

/// A Laurent polynomial together with verified unit witnesses for its first
/// and last coefficients: an element of the multiplicative set S.
#[derive(Debug, Clone, PartialEq)]
pub struct SWitness {
    poly: LaurentPoly,
    first_inv: RingElement,
    last_inv: RingElement,
}

impl SWitness {
    pub fn new(poly: LaurentPoly) -> Result<SWitness> {
        let ring = poly.ring().clone();
        let first = poly
            .first()
            .ok_or_else(|| Error::NotAUnit("zero polynomial is not in S".into()))?;
        let last = poly.last().unwrap();
        let first_inv = ring
            .is_unit(first)
            .ok_or_else(|| Error::NotAUnit(format!("first coefficient {first} of S-candidate")))?;
        let last_inv = ring
            .is_unit(last)
            .ok_or_else(|| Error::NotAUnit(format!("last coefficient {last} of S-candidate")))?;
        Ok(SWitness {
            poly,
            first_inv,
            last_inv,
        })
    }

    /// Product without re-deriving witnesses: edge coefficients multiply.
    fn mul(&self, rhs: &SWitness) -> SWitness {
        SWitness {
            poly: self.poly.mul(&rhs.poly),
            first_inv: &self.first_inv * &rhs.first_inv,
            last_inv: &self.last_inv * &rhs.last_inv,
        }
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn first_inv(&self) -> &RingElement {
        &self.first_inv
    }
}

/// The exponents of the first and last unit coefficients of p, checking
/// that every coefficient outside that window is nilpotent. Such a p is an
/// A[X,1/X]-unit multiple of an honest S element supported on the window.
fn unit_window(p: &LaurentPoly) -> Result<(i64, i64)> {
    let ring = p.ring().clone();
    let high = p
        .high()
        .ok_or_else(|| Error::NotAUnit("zero polynomial is not in S".into()))?;
    let mut first = None;
    let mut last = None;
    for k in p.low()..=high {
        if ring.is_unit(&p.coeff(k)).is_some() {
            if first.is_none() {
                first = Some(k);
            }
            last = Some(k);
        }
    }
    let (a, b) = match (first, last) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::NotAUnit(format!(
                "denominator {p} has no unit coefficient"
            )))
        }
    };
    for k in p.low()..=high {
        if (k < a || k > b) && !ring.is_nilpotent(&p.coeff(k)) {
            return Err(Error::NotAUnit(format!(
                "denominator {p}: coefficient at X^{k} is neither inside the unit window nor nilpotent"
            )));
        }
    }
    Ok((a, b))
}

/// Multiply num/den by units of A[X,1/X] until den is supported exactly on
/// its unit window [a, b]. One step divides the stray tail by the window
/// part (unit edge coefficient), which squares the tail's nilpotency order,
/// so convergence is quadratic. Upper strips cannot regrow the lower tail
/// and vice versa once the upper one is gone.
fn strip_nilpotent_tails(
    mut num: LaurentPoly,
    mut den: LaurentPoly,
    a: i64,
    b: i64,
) -> Result<(LaurentPoly, LaurentPoly)> {
    let ring = den.ring().clone();
    // upper tail
    for _ in 0..64 {
        let high = den.high().unwrap();
        if high <= b {
            break;
        }
        let head = LaurentPoly::new(
            ring.clone(),
            den.low(),
            (den.low()..=b).map(|k| den.coeff(k)).collect(),
        );
        let lead_inv = ring
            .is_unit(&head.coeff(b))
            .expect("unit window edge must stay a unit");
        // divide the tail from the top by head (leading exponent b)
        let mut tail = LaurentPoly::new(
            ring.clone(),
            b + 1,
            (b + 1..=high).map(|k| den.coeff(k)).collect(),
        );
        let mut q = LaurentPoly::zero(ring.clone());
        while let Some(t) = tail.high() {
            if t <= b {
                break;
            }
            let c = &tail.coeff(t) * &lead_inv;
            let mono = LaurentPoly::monomial(c, t - b);
            q = q.add(&mono);
            tail = tail.sub(&mono.mul(&head));
        }
        // multiplier M = 1 - q; den(1-q) = head + R - tail*q with R = leftover
        let m = LaurentPoly::one(ring.clone()).sub(&q);
        den = den.mul(&m);
        num = num.mul(&m);
    }
    if den.high().unwrap() > b {
        return Err(Error::VerificationFailed(
            "nilpotent upper-tail stripping did not converge".into(),
        ));
    }
    // lower tail: same dance from below; multipliers live in negative
    // degrees so the upper edge cannot regrow
    for _ in 0..64 {
        let low = den.low();
        if low >= a {
            break;
        }
        let head = LaurentPoly::new(
            ring.clone(),
            a,
            (a..=den.high().unwrap()).map(|k| den.coeff(k)).collect(),
        );
        let lead_inv = ring
            .is_unit(&head.coeff(a))
            .expect("unit window edge must stay a unit");
        let mut tail = LaurentPoly::new(
            ring.clone(),
            low,
            (low..a).map(|k| den.coeff(k)).collect(),
        );
        let mut q = LaurentPoly::zero(ring.clone());
        while !tail.is_zero() && tail.low() < a {
            let t = tail.low();
            let c = &tail.coeff(t) * &lead_inv;
            let mono = LaurentPoly::monomial(c, t - a);
            q = q.add(&mono);
            tail = tail.sub(&mono.mul(&head));
        }
        let m = LaurentPoly::one(ring.clone()).sub(&q);
        den = den.mul(&m);
        num = num.mul(&m);
    }
    if den.low() < a {
        return Err(Error::VerificationFailed(
            "nilpotent lower-tail stripping did not converge".into(),
        ));
    }
    Ok((num, den))
}

/// Element of S^-1 A[X, 1/X] in canonical form: den.low = 0, den[0] = 1.
#[derive(Debug, Clone)]
pub struct FractionS {
    num: LaurentPoly,
    den: SWitness,
}

impl FractionS {
    /// Build and canonicalize num/den. Denominators only need to be unit
    /// multiples of S elements: nilpotent tails outside the unit coefficient
    /// window (for example 3X in 1+3X over Z/9) are stripped exactly.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<FractionS> {
        if num.ring() != den.ring() {
            return Err(Error::mismatch("fraction pieces in different rings"));
        }
        let (a, b) = unit_window(&den)?;
        let (num, den) = if den.low() < a || den.high().unwrap() > b {
            strip_nilpotent_tails(num, den, a, b)?
        } else {
            (num, den)
        };
        let den_w = SWitness::new(den)?;
        Ok(FractionS::from_parts(num, den_w))
    }

    fn from_parts(num: LaurentPoly, den: SWitness) -> FractionS {
        // shift so den.low = 0, scale so den[0] = 1
        let s = den.poly.low();
        let u = den.first_inv.clone();
        let den_poly = den.poly.shift(-s).scale(&u);
        let num = num.shift(-s).scale(&u);
        let first_inv = den_poly.ring().one();
        // last coefficient of u*den is u * old_last; its inverse is old_first * old_last_inv
        let last_inv = den
            .poly
            .first()
            .map(|f| f * &den.last_inv)
            .unwrap_or_else(|| den_poly.ring().one());
        debug_assert_eq!(den_poly.low(), 0);
        debug_assert_eq!(den_poly.coeff(0), den_poly.ring().one());
        debug_assert_eq!(
            den_poly.last().map(|l| l * &last_inv),
            Some(den_poly.ring().one())
        );
        FractionS {
            num,
            den: SWitness {
                poly: den_poly,
                first_inv,
                last_inv,
            },
        }
    }

    pub fn from_laurent(p: LaurentPoly) -> FractionS {
        let den = SWitness {
            poly: LaurentPoly::one(p.ring().clone()),
            first_inv: p.ring().one(),
            last_inv: p.ring().one(),
        };
        FractionS { num: p, den }
    }

    pub fn from_i64(ring: &Ring, c: i64) -> FractionS {
        FractionS::from_laurent(LaurentPoly::from_i64_coeffs(ring, 0, &[c]))
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den.poly
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &FractionS) -> FractionS {
        let num = self
            .num
            .mul(&rhs.den.poly)
            .add(&rhs.num.mul(&self.den.poly));
        FractionS::from_parts(num, self.den.mul(&rhs.den))
    }

    pub fn neg(&self) -> FractionS {
        FractionS {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &FractionS) -> FractionS {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &FractionS) -> FractionS {
        FractionS::from_parts(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    /// Multiplicative inverse; needs the numerator in S too.
    pub fn inv(&self) -> Result<FractionS> {
        let num_w = SWitness::new(self.num.clone())?;
        Ok(FractionS::from_parts(self.den.poly.clone(), num_w))
    }

    /// Equality by cross-multiplication (sound: canonical denominators are
    /// power-series units, hence regular).
    pub fn eq(&self, rhs: &FractionS) -> bool {
        if self.ring() != rhs.ring() {
            return false;
        }
        self.num.mul(&rhs.den.poly) == rhs.num.mul(&self.den.poly)
    }

    /// Laurent expansion on [lo, hi] via power-series inversion of the
    /// denominator (constant coefficient 1 by canonicity).
    pub fn expand(&self, lo: i64, hi: i64) -> Vec<RingElement> {
        let ring = self.ring().clone();
        if hi < lo {
            return vec![];
        }
        if self.num.is_zero() {
            return vec![ring.zero(); (hi - lo + 1) as usize];
        }
        let num_low = self.num.low();
        // need denominator-inverse coefficients e_0..e_(hi - num_low)
        let top = (hi - num_low).max(0) as usize;
        let d = &self.den.poly;
        let mut e = Vec::with_capacity(top + 1);
        e.push(ring.one());
        for k in 1..=top {
            let mut acc = ring.zero();
            let dmax = d.high().unwrap() as usize;
            for i in 1..=dmax.min(k) {
                let di = d.coeff(i as i64);
                if di.is_zero() {
                    continue;
                }
                acc = &acc + &(&di * &e[k - i]);
            }
            e.push(-&acc);
        }
        (lo..=hi)
            .map(|m| {
                let mut acc = ring.zero();
                for (j, c) in self.num.coeffs().iter().enumerate() {
                    let idx = m - (num_low + j as i64);
                    if idx >= 0 && (idx as usize) < e.len() {
                        acc = &acc + &(c * &e[idx as usize]);
                    }
                }
                acc
            })
            .collect()
    }

    /// X -> 1/(q^n X), renormalized to canonical form.
    pub fn substitute_inverse(&self, q: &RingElement, n: i64) -> Result<FractionS> {
        let num = self.num.substitute_inverse(q, n)?;
        let den = self.den.poly.substitute_inverse(q, n)?;
        FractionS::new(num, den)
    }

    pub fn map_coefficients(&self, phi: &RingMap) -> Result<FractionS> {
        let num = self.num.map_coefficients(phi)?;
        let den = self.den.poly.map_coefficients(phi)?;
        FractionS::new(num, den)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(fm, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(fm, " + ")?;
            }
            first = false;
            let k = self.low + i as i64;
            if k == 0 {
                write!(fm, "{c}")?;
            } else {
                write!(fm, "{c}*X^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for FractionS {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "({}) / ({})", self.num, self.den.poly)
    }
}

#[cfg(test)]
mod tests;
