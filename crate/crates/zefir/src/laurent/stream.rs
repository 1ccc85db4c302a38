//! Recurrent coefficient streams: finitely many explicit values above a
//! support floor plus a declared tail recurrence. The recurrence must be
//! declared by the provider (inference over non-field rings is unreliable);
//! construction verifies it on the trailing margin rows and rationalize
//! re-expands its output against the stream as a final check.

use super::{FractionS, LaurentPoly};
use crate::error::{Error, Result};
use crate::rings::{Ring, RingElement, RingMap};

#[derive(Debug, Clone)]
pub struct RecurrentStream {
    ring: Ring,
    /// b_m = 0 for m < floor
    floor: i64,
    /// explicit values b_floor .. b_(floor + len - 1), margin rows included
    values: Vec<RingElement>,
    /// tail recurrence b_m = sum_i rec[i-1] * b_(m-i); empty means the
    /// stream vanishes beyond the explicit window
    rec: Vec<RingElement>,
    margin: usize,
}

impl RecurrentStream {
    pub fn new(
        ring: Ring,
        floor: i64,
        values: Vec<RingElement>,
        rec: Vec<RingElement>,
        margin: usize,
    ) -> Result<RecurrentStream> {
        if values.iter().chain(rec.iter()).any(|v| v.ring() != &ring) {
            return Err(Error::mismatch("stream data in the wrong ring"));
        }
        let r = rec.len();
        if r > 0 {
            if margin == 0 {
                return Err(Error::precondition(
                    "a nontrivial tail recurrence needs a verification margin",
                ));
            }
            if values.len() < r + margin {
                return Err(Error::precondition(format!(
                    "stream window of {} rows cannot verify order-{r} recurrence with margin {margin}",
                    values.len()
                )));
            }
            if ring.is_unit(&rec[r - 1]).is_none() {
                return Err(Error::NotAUnit(format!(
                    "top recurrence coefficient {}",
                    rec[r - 1]
                )));
            }
            // the last `margin` rows must satisfy the declared recurrence
            for m in (values.len() - margin)..values.len() {
                let mut acc = ring.zero();
                for (i, a) in rec.iter().enumerate() {
                    acc = &acc + &(a * &values[m - i - 1]);
                }
                if acc != values[m] {
                    return Err(Error::VerificationFailed(format!(
                        "declared recurrence fails at stream row {}",
                        floor + m as i64
                    )));
                }
            }
        }
        Ok(RecurrentStream {
            ring,
            floor,
            values,
            rec,
            margin,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn rec(&self) -> &[RingElement] {
        &self.rec
    }

    pub fn window_top(&self) -> i64 {
        self.floor + self.values.len() as i64 - 1
    }

    /// b_m anywhere: zero below the floor, explicit inside the window,
    /// recurrence-generated above it.
    pub fn value_at(&self, m: i64) -> RingElement {
        if m < self.floor {
            return self.ring.zero();
        }
        let idx = (m - self.floor) as usize;
        if idx < self.values.len() {
            return self.values[idx].clone();
        }
        if self.rec.is_empty() {
            return self.ring.zero();
        }
        let mut ext = self.values.clone();
        while ext.len() <= idx {
            let mut acc = self.ring.zero();
            for (i, a) in self.rec.iter().enumerate() {
                acc = &acc + &(a * &ext[ext.len() - i - 1]);
            }
            ext.push(acc);
        }
        ext[idx].clone()
    }

    /// Values on [lo, hi] inclusive.
    pub fn values_on(&self, lo: i64, hi: i64) -> Vec<RingElement> {
        (lo..=hi).map(|m| self.value_at(m)).collect()
    }

    /// Sum P(X) = sum_m (b_m - sum_i a_i b_(m-i)) X^m over the window, with
    /// D(X) = 1 - a_1 X - ... - a_r X^r: then stream = P/D as Laurent series.
    /// The result is re-expanded and compared against the stream over the
    /// window plus margin, so a wrong declaration cannot slip through.
    pub fn rationalize(&self) -> Result<FractionS> {
        let ring = self.ring.clone();
        let r = self.rec.len();
        let mut den_coeffs = vec![ring.one()];
        for a in &self.rec {
            den_coeffs.push(-a);
        }
        let den = LaurentPoly::new(ring.clone(), 0, den_coeffs);
        let mut num_coeffs = Vec::with_capacity(self.values.len());
        for m in 0..self.values.len() {
            let mut acc = self.values[m].clone();
            for i in 1..=r.min(m) {
                acc = &acc - &(&self.rec[i - 1] * &self.values[m - i]);
            }
            num_coeffs.push(acc);
        }
        let num = LaurentPoly::new(ring.clone(), self.floor, num_coeffs);
        let f = FractionS::new(num, den)?;
        // final guard: the fraction must reproduce the stream
        let lo = self.floor - 2;
        let hi = self.window_top() + self.margin as i64;
        let got = f.expand(lo, hi);
        for (k, gv) in got.iter().enumerate() {
            let m = lo + k as i64;
            if *gv != self.value_at(m) {
                return Err(Error::VerificationFailed(format!(
                    "rationalization disagrees with the stream at row {m}"
                )));
            }
        }
        Ok(f)
    }

    /// Push the stream along a coefficient map; the image is re-verified by
    /// the constructor (a homomorphism preserves the recurrence rows).
    pub fn map_coefficients(&self, phi: &RingMap) -> Result<RecurrentStream> {
        let values: Result<Vec<RingElement>> =
            self.values.iter().map(|v| phi.apply(v)).collect();
        let rec: Result<Vec<RingElement>> = self.rec.iter().map(|v| phi.apply(v)).collect();
        RecurrentStream::new(
            phi.dst().clone(),
            self.floor,
            values?,
            rec?,
            self.margin,
        )
    }
}
