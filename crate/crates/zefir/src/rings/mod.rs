//! Desk-scale models of Noetherian W(k)-algebras: finite-precision local
//! rings Z[t]/(ell^N, g(t)), their products, and fiber products over a shared
//! residue field. All arithmetic is exact in the quotient.
//!
//! A local presentation requires g monic with g mod ell = j^e for a single
//! irreducible j. That one shape covers unramified rings (e = 1), totally
//! ramified ones (deg j = 1), and mixed ones like Z[t]/(ell^N, Phi_21) at
//! ell = 3, whose residue field is F_729.

mod map;
pub mod parse;

pub use map::RingMap;

use crate::error::{Error, Result};
use crate::fpoly::{self, FPoly};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct LocalPres {
    pub ell: u64,
    pub prec: u32,
    /// ell^prec; every coefficient lives in [0, ell_n)
    pub ell_n: u64,
    /// monic structure polynomial, coefficients mod ell_n, little-endian
    pub modulus: Vec<u64>,
    /// the irreducible j with modulus = j^e mod ell
    pub j: FPoly,
    pub e: u32,
    /// display name only; excluded from equality
    pub label: String,
}

impl PartialEq for LocalPres {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell && self.prec == other.prec && self.modulus == other.modulus
    }
}
impl Eq for LocalPres {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberPres {
    pub left: Ring,
    pub right: Ring,
    pub residue: Ring,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Presentation {
    Local(LocalPres),
    Product(Vec<Ring>),
    Fiber(FiberPres),
}

/// A coefficient ring. Cheap to clone; equality is structural on the
/// presentation, with a pointer fast path.
#[derive(Debug, Clone, Eq)]
pub struct Ring(Arc<Presentation>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElemData {
    /// local: coefficient vector of length deg(modulus), entries mod ell_n
    Coeffs(Vec<u64>),
    /// product: one element per component ring
    Tuple(Vec<RingElement>),
    /// fiber product: (left, right), congruent in the shared residue field
    Pair(Box<(RingElement, RingElement)>),
}

#[derive(Debug, Clone, Eq)]
pub struct RingElement {
    pub(crate) ring: Ring,
    pub(crate) data: ElemData,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.data == other.data
    }
}

fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Unsupported(format!("{base}^{exp} exceeds u64 working range")))
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    fn new(pres: Presentation) -> Ring {
        Ring(Arc::new(pres))
    }

    pub fn pres(&self) -> &Presentation {
        &self.0
    }

    /// General local quotient Z[t]/(ell^prec, g(t)). g must be monic and its
    /// reduction mod ell must be a power of one irreducible.
    pub fn local(ell: u64, prec: u32, g: &[i64], label: Option<String>) -> Result<Ring> {
        if !is_prime(ell) || ell == 2 {
            return Err(Error::precondition(format!("ell = {ell} must be an odd prime")));
        }
        if prec == 0 {
            return Err(Error::precondition("precision exponent must be >= 1"));
        }
        let ell_n = checked_pow(ell, prec)?;
        if g.len() < 2 {
            return Err(Error::precondition("structure polynomial must have degree >= 1"));
        }
        let modulus: Vec<u64> = g
            .iter()
            .map(|&c| (c.rem_euclid(ell_n as i64)) as u64)
            .collect();
        if *modulus.last().unwrap() != 1 {
            return Err(Error::precondition("structure polynomial must be monic"));
        }
        let mut gbar: FPoly = modulus.iter().map(|&c| c % ell).collect();
        fpoly::trim(&mut gbar);
        if fpoly::deg(&gbar) != Some(modulus.len() - 1) {
            return Err(Error::precondition(
                "structure polynomial must stay monic of the same degree mod ell",
            ));
        }
        let j = fpoly::radical(&gbar, ell);
        let dj = fpoly::deg(&j).unwrap();
        if dj == 0 || !(dj == 1 || fpoly::is_irreducible(&j, ell)) {
            return Err(Error::precondition(
                "reduction mod ell must be a power of a single irreducible",
            ));
        }
        let dg = modulus.len() - 1;
        if dg % dj != 0 {
            return Err(Error::precondition(
                "reduction mod ell must be a power of a single irreducible",
            ));
        }
        let e = (dg / dj) as u32;
        let mut pw = vec![1u64];
        for _ in 0..e {
            pw = fpoly::mul(&pw, &j, ell);
        }
        if pw != gbar {
            return Err(Error::precondition(
                "reduction mod ell must be a power of a single irreducible",
            ));
        }
        let label = label.unwrap_or_else(|| {
            let gs: Vec<String> = g.iter().map(|c| c.to_string()).collect();
            format!("ram({ell},{prec},[{}])", gs.join(","))
        });
        Ok(Ring::new(Presentation::Local(LocalPres {
            ell,
            prec,
            ell_n,
            modulus,
            j,
            e,
            label,
        })))
    }

    /// Unramified extension of residue degree f, with the deterministic
    /// modulus pick from `fpoly::first_irreducible`.
    pub fn unramified(ell: u64, prec: u32, f: u32) -> Result<Ring> {
        if f == 0 {
            return Err(Error::precondition("residue degree must be >= 1"));
        }
        let g: Vec<i64> = fpoly::first_irreducible(ell, f)
            .into_iter()
            .map(|c| c as i64)
            .collect();
        Ring::local(ell, prec, &g, Some(format!("unram({ell},{prec},{f})")))
    }

    /// Z[t]/(ell^prec, Phi_n(t)).
    pub fn cyclotomic_local(ell: u64, prec: u32, n: u64) -> Result<Ring> {
        let g = fpoly::cyclotomic(n);
        Ring::local(ell, prec, &g, Some(format!("ram({ell},{prec},cyclo({n}))")))
    }

    pub fn product(components: Vec<Ring>) -> Result<Ring> {
        if components.len() < 2 {
            return Err(Error::precondition("product needs >= 2 components"));
        }
        Ok(Ring::new(Presentation::Product(components)))
    }

    /// Fiber product {(a, b) : a = b in the shared residue field}. Both
    /// components must be local over the same ell with the same residue
    /// presentation j.
    pub fn fiber(left: Ring, right: Ring) -> Result<Ring> {
        let (lp, rp) = match (left.pres(), right.pres()) {
            (Presentation::Local(l), Presentation::Local(r)) => (l, r),
            _ => return Err(Error::precondition("fiber components must be local rings")),
        };
        if lp.ell != rp.ell || lp.j != rp.j {
            return Err(Error::precondition(
                "fiber components must share ell and the residue presentation",
            ));
        }
        let residue = left.residue_field()?;
        Ok(Ring::new(Presentation::Fiber(FiberPres {
            left,
            right,
            residue,
        })))
    }

    pub fn label(&self) -> String {
        match self.pres() {
            Presentation::Local(l) => l.label.clone(),
            Presentation::Product(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.label()).collect();
                format!("prod({})", parts.join(","))
            }
            Presentation::Fiber(f) => format!("fiber({},{})", f.left.label(), f.right.label()),
        }
    }

    pub fn is_local(&self) -> bool {
        matches!(self.pres(), Presentation::Local(_))
    }

    pub fn local_pres(&self) -> Result<&LocalPres> {
        match self.pres() {
            Presentation::Local(l) => Ok(l),
            _ => Err(Error::precondition(format!(
                "{} is not a local presentation",
                self.label()
            ))),
        }
    }

    /// The prime ell of the coefficient world (shared by all components).
    pub fn ell(&self) -> u64 {
        match self.pres() {
            Presentation::Local(l) => l.ell,
            Presentation::Product(cs) => cs[0].ell(),
            Presentation::Fiber(f) => f.left.ell(),
        }
    }

    /// Max precision exponent across components (used for congruence depth).
    pub fn prec(&self) -> u32 {
        match self.pres() {
            Presentation::Local(l) => l.prec,
            Presentation::Product(cs) => cs.iter().map(|c| c.prec()).max().unwrap(),
            Presentation::Fiber(f) => f.left.prec().max(f.right.prec()),
        }
    }

    pub fn zero(&self) -> RingElement {
        let data = match self.pres() {
            Presentation::Local(l) => ElemData::Coeffs(vec![0; l.modulus.len() - 1]),
            Presentation::Product(cs) => ElemData::Tuple(cs.iter().map(|c| c.zero()).collect()),
            Presentation::Fiber(f) => {
                ElemData::Pair(Box::new((f.left.zero(), f.right.zero())))
            }
        };
        RingElement {
            ring: self.clone(),
            data,
        }
    }

    pub fn one(&self) -> RingElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, c: i64) -> RingElement {
        let data = match self.pres() {
            Presentation::Local(l) => {
                let mut v = vec![0u64; l.modulus.len() - 1];
                v[0] = c.rem_euclid(l.ell_n as i64) as u64;
                ElemData::Coeffs(v)
            }
            Presentation::Product(cs) => {
                ElemData::Tuple(cs.iter().map(|r| r.from_i64(c)).collect())
            }
            Presentation::Fiber(f) => {
                ElemData::Pair(Box::new((f.left.from_i64(c), f.right.from_i64(c))))
            }
        };
        RingElement {
            ring: self.clone(),
            data,
        }
    }

    pub fn from_u64(&self, c: u64) -> RingElement {
        let data = match self.pres() {
            Presentation::Local(l) => {
                let mut v = vec![0u64; l.modulus.len() - 1];
                v[0] = c % l.ell_n;
                ElemData::Coeffs(v)
            }
            Presentation::Product(cs) => {
                ElemData::Tuple(cs.iter().map(|r| r.from_u64(c)).collect())
            }
            Presentation::Fiber(f) => {
                ElemData::Pair(Box::new((f.left.from_u64(c), f.right.from_u64(c))))
            }
        };
        RingElement {
            ring: self.clone(),
            data,
        }
    }

    /// The class of t in a local presentation.
    pub fn gen(&self) -> Result<RingElement> {
        let l = self.local_pres()?;
        let d = l.modulus.len() - 1;
        let mut v = vec![0u64; d];
        if d >= 2 {
            v[1] = 1;
        }
        // d == 1 means modulus = t + c, so t = -c as a constant
        if d == 1 {
            v[0] = (l.ell_n - l.modulus[0] % l.ell_n) % l.ell_n;
        }
        Ok(RingElement {
            ring: self.clone(),
            data: ElemData::Coeffs(v),
        })
    }

    /// Element from an explicit coefficient list (local presentations).
    /// Lists longer than the presentation degree are reduced by the modulus.
    pub fn from_coeffs(&self, cs: &[i64]) -> Result<RingElement> {
        let l = self.local_pres()?;
        let d = l.modulus.len() - 1;
        let mut v: Vec<u64> = cs
            .iter()
            .map(|&c| c.rem_euclid(l.ell_n as i64) as u64)
            .collect();
        if v.len() < d {
            v.resize(d, 0);
        }
        let v = reduce_by_modulus(v, &l.modulus, l.ell_n, d);
        Ok(RingElement {
            ring: self.clone(),
            data: ElemData::Coeffs(v),
        })
    }

    /// Fiber element from its two coordinates; the residue congruence is
    /// checked here and this is the only way to make one from raw parts.
    pub fn pair(&self, a: RingElement, b: RingElement) -> Result<RingElement> {
        let f = match self.pres() {
            Presentation::Fiber(f) => f,
            _ => return Err(Error::precondition("pair() needs a fiber ring")),
        };
        if a.ring != f.left || b.ring != f.right {
            return Err(Error::mismatch("pair coordinates belong to the wrong rings"));
        }
        let ra = f.left.residue_map()?.apply(&a)?;
        let rb = f.right.residue_map()?.apply(&b)?;
        if ra != rb {
            return Err(Error::precondition(
                "fiber coordinates disagree in the residue field",
            ));
        }
        Ok(RingElement {
            ring: self.clone(),
            data: ElemData::Pair(Box::new((a, b))),
        })
    }

    pub fn tuple(&self, parts: Vec<RingElement>) -> Result<RingElement> {
        let cs = match self.pres() {
            Presentation::Product(cs) => cs,
            _ => return Err(Error::precondition("tuple() needs a product ring")),
        };
        if parts.len() != cs.len() || parts.iter().zip(cs).any(|(x, r)| &x.ring != r) {
            return Err(Error::mismatch("tuple coordinates belong to the wrong rings"));
        }
        Ok(RingElement {
            ring: self.clone(),
            data: ElemData::Tuple(parts),
        })
    }

    fn check_owns(&self, x: &RingElement) -> Result<()> {
        if &x.ring == self {
            Ok(())
        } else {
            Err(Error::mismatch(format!(
                "element of {} used in {}",
                x.ring.label(),
                self.label()
            )))
        }
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check_owns(a)?;
        self.check_owns(b)?;
        Ok(a + b)
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check_owns(a)?;
        self.check_owns(b)?;
        Ok(a - b)
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check_owns(a)?;
        self.check_owns(b)?;
        Ok(a * b)
    }

    pub fn neg(&self, a: &RingElement) -> Result<RingElement> {
        self.check_owns(a)?;
        Ok(-a)
    }

    /// Residue of a local-ring element in F_ell[t]/(j), as a trimmed FPoly.
    pub fn residue_poly(&self, x: &RingElement) -> Result<FPoly> {
        let l = self.local_pres()?;
        let cs = match &x.data {
            ElemData::Coeffs(cs) => cs,
            _ => return Err(Error::mismatch("element data does not match presentation")),
        };
        let mut r: FPoly = cs.iter().map(|&c| c % l.ell).collect();
        fpoly::trim(&mut r);
        Ok(fpoly::rem(&r, &l.j, l.ell))
    }

    /// The residue field as a Ring (precision-1 local presentation over j).
    pub fn residue_field(&self) -> Result<Ring> {
        match self.pres() {
            Presentation::Local(l) => {
                let g: Vec<i64> = l.j.iter().map(|&c| c as i64).collect();
                Ring::local(
                    l.ell,
                    1,
                    &g,
                    Some(format!("res({})", l.label)),
                )
            }
            Presentation::Fiber(f) => Ok(f.residue.clone()),
            Presentation::Product(_) => Err(Error::precondition(
                "product rings have no single residue field",
            )),
        }
    }

    pub fn is_unit(&self, x: &RingElement) -> Option<RingElement> {
        match (self.pres(), &x.data) {
            (Presentation::Local(l), ElemData::Coeffs(_)) => {
                let res = self.residue_poly(x).ok()?;
                if fpoly::is_zero(&res) {
                    return None;
                }
                let (g, u, _) = fpoly::ext_gcd(&res, &l.j, l.ell);
                debug_assert_eq!(g, vec![1]);
                let mut y = self
                    .from_coeffs(&u.iter().map(|&c| c as i64).collect::<Vec<_>>())
                    .ok()?;
                let one = self.one();
                // Newton: y <- y(2 - xy); the error 1 - xy squares each pass
                for _ in 0..64 {
                    let err = &one - &(x * &y);
                    if err.is_zero() {
                        return Some(y);
                    }
                    y = &y * &(&one + &err);
                }
                unreachable!("unit inverse lifting did not converge");
            }
            (Presentation::Product(_), ElemData::Tuple(parts)) => {
                let inv: Option<Vec<RingElement>> =
                    parts.iter().map(|p| p.ring.is_unit(p)).collect();
                Some(RingElement {
                    ring: self.clone(),
                    data: ElemData::Tuple(inv?),
                })
            }
            (Presentation::Fiber(f), ElemData::Pair(ab)) => {
                let ia = f.left.is_unit(&ab.0)?;
                let ib = f.right.is_unit(&ab.1)?;
                Some(RingElement {
                    ring: self.clone(),
                    data: ElemData::Pair(Box::new((ia, ib))),
                })
            }
            _ => unreachable!("element data does not match presentation"),
        }
    }

    pub fn inv(&self, x: &RingElement) -> Result<RingElement> {
        self.is_unit(x)
            .ok_or_else(|| Error::NotAUnit(format!("{x}")))
    }

    /// Nilpotence test. In a local presentation the maximal ideal (ell, j)
    /// is nilpotent, so nilpotent = zero residue; products and fiber
    /// products go componentwise (a product element can be neither a unit
    /// nor nilpotent).
    pub fn is_nilpotent(&self, x: &RingElement) -> bool {
        match (self.pres(), &x.data) {
            (Presentation::Local(_), ElemData::Coeffs(_)) => self
                .residue_poly(x)
                .map(|r| fpoly::is_zero(&r))
                .unwrap_or(false),
            (Presentation::Product(_), ElemData::Tuple(ps)) => {
                ps.iter().all(|p| p.ring.is_nilpotent(p))
            }
            (Presentation::Fiber(f), ElemData::Pair(ab)) => {
                f.left.is_nilpotent(&ab.0) && f.right.is_nilpotent(&ab.1)
            }
            _ => unreachable!("element data does not match presentation"),
        }
    }

    /// Teichmueller representative: the unique root of unity of order
    /// dividing (residue cardinality - 1) with the same residue as x.
    pub fn teichmuller(&self, x: &RingElement) -> Result<RingElement> {
        match (self.pres(), &x.data) {
            (Presentation::Local(l), ElemData::Coeffs(_)) => {
                if self.is_unit(x).is_none() {
                    return Err(Error::NotAUnit(format!("{x}")));
                }
                let fdeg = fpoly::deg(&l.j).unwrap() as u32;
                let d = (l.modulus.len() - 1) as u32;
                let cap = l.prec * d + 2;
                let mut y = x.clone();
                for _ in 0..cap {
                    let mut z = y.clone();
                    for _ in 0..fdeg {
                        z = z.pow(l.ell);
                    }
                    if z == y {
                        return Ok(y);
                    }
                    y = z;
                }
                unreachable!("teichmuller iteration did not stabilize");
            }
            (Presentation::Product(_), ElemData::Tuple(parts)) => {
                let ts: Result<Vec<RingElement>> =
                    parts.iter().map(|p| p.ring.teichmuller(p)).collect();
                Ok(RingElement {
                    ring: self.clone(),
                    data: ElemData::Tuple(ts?),
                })
            }
            (Presentation::Fiber(f), ElemData::Pair(ab)) => {
                let ta = f.left.teichmuller(&ab.0)?;
                let tb = f.right.teichmuller(&ab.1)?;
                // teich commutes with residue maps, so the pair stays glued
                Ok(RingElement {
                    ring: self.clone(),
                    data: ElemData::Pair(Box::new((ta, tb))),
                })
            }
            _ => unreachable!("element data does not match presentation"),
        }
    }

    /// All solutions of e^2 = e. Local rings are connected by construction;
    /// fiber products are searched through component idempotents under the
    /// gluing constraint; products split.
    pub fn idempotents(&self) -> Vec<RingElement> {
        match self.pres() {
            Presentation::Local(_) => vec![self.zero(), self.one()],
            Presentation::Product(cs) => {
                let mut acc: Vec<Vec<RingElement>> = vec![vec![]];
                for c in cs {
                    let opts = c.idempotents();
                    let mut next = vec![];
                    for prefix in &acc {
                        for o in &opts {
                            let mut v = prefix.clone();
                            v.push(o.clone());
                            next.push(v);
                        }
                    }
                    acc = next;
                }
                acc.into_iter()
                    .map(|parts| RingElement {
                        ring: self.clone(),
                        data: ElemData::Tuple(parts),
                    })
                    .collect()
            }
            Presentation::Fiber(f) => {
                let mut out = vec![];
                for ea in f.left.idempotents() {
                    for eb in f.right.idempotents() {
                        if let Ok(p) = self.pair(ea.clone(), eb.clone()) {
                            let sq = &p * &p;
                            debug_assert!(sq == p);
                            out.push(p);
                        }
                    }
                }
                out
            }
        }
    }

    /// Smallest unramified extension containing mu_{p^m} in its Teichmueller
    /// group, with the inclusion. Identity when the residue field is already
    /// big enough (that covers all ramified rings this crate constructs).
    pub fn required_cyclotomic_extension(&self, p: u64, m: u32) -> Result<(Ring, RingMap)> {
        let l = self.local_pres()?;
        if m == 0 {
            return Ok((self.clone(), RingMap::identity(self.clone())));
        }
        if !is_prime(p) || p == l.ell {
            return Err(Error::precondition(format!(
                "p = {p} must be a prime different from ell = {}",
                l.ell
            )));
        }
        let pm = checked_pow(p, m)?;
        let need = mult_order(l.ell % pm, pm)?;
        let f0 = fpoly::deg(&l.j).unwrap() as u64;
        if f0 % need == 0 {
            return Ok((self.clone(), RingMap::identity(self.clone())));
        }
        if l.e != 1 {
            return Err(Error::Unsupported(format!(
                "{} is ramified and its residue field lacks mu_{p}^{m}; construct the ring with a larger residue field directly",
                self.label()
            )));
        }
        let f = lcm(f0, need);
        let target = Ring::unramified(l.ell, l.prec, f as u32)?;
        let img = target.embed_root_of(&l.modulus.iter().map(|&c| c as i64).collect::<Vec<_>>())?;
        let incl = RingMap::local_gen(self.clone(), target.clone(), img)?;
        Ok((target, incl))
    }

    /// Find a root of the (integer-coefficient) polynomial g in this local
    /// ring: enumerate residue-field roots lexicographically, Hensel-lift the
    /// first one. Deterministic; errors if none exists or the search space
    /// exceeds the cap.
    pub fn embed_root_of(&self, g: &[i64]) -> Result<RingElement> {
        let l = self.local_pres()?;
        let gbar: FPoly = {
            let mut v: FPoly = g
                .iter()
                .map(|&c| c.rem_euclid(l.ell as i64) as u64)
                .collect();
            fpoly::trim(&mut v);
            v
        };
        let dj = fpoly::deg(&l.j).unwrap();
        let space = (l.ell as u128).checked_pow(dj as u32).unwrap_or(u128::MAX);
        if space > 1 << 20 {
            return Err(Error::Unsupported(format!(
                "residue root search over {space} elements exceeds the cap"
            )));
        }
        let mut counter = vec![0u64; dj];
        loop {
            // evaluate gbar at the residue element given by `counter`
            let x: FPoly = {
                let mut v = counter.clone();
                fpoly::trim(&mut v);
                v
            };
            let mut acc: FPoly = vec![];
            for &c in gbar.iter().rev() {
                acc = fpoly::mul(&acc, &x, l.ell);
                if c != 0 {
                    acc = fpoly::add(&acc, &vec![c], l.ell);
                }
                acc = fpoly::rem(&acc, &l.j, l.ell);
            }
            if fpoly::is_zero(&acc) {
                let x0 = self.from_coeffs(
                    &counter.iter().map(|&c| c as i64).collect::<Vec<_>>(),
                )?;
                return self.hensel_lift_root(g, x0);
            }
            let mut i = 0;
            loop {
                if i == dj {
                    return Err(Error::precondition(
                        "polynomial has no residue root in this ring",
                    ));
                }
                counter[i] += 1;
                if counter[i] < l.ell {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
        }
    }

    fn hensel_lift_root(&self, g: &[i64], mut x: RingElement) -> Result<RingElement> {
        let eval = |x: &RingElement, cs: &[i64]| -> RingElement {
            let mut acc = self.zero();
            for &c in cs.iter().rev() {
                acc = &(&acc * x) + &self.from_i64(c);
            }
            acc
        };
        let dg: Vec<i64> = g
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c.checked_mul(i as i64).expect("derivative overflow"))
            .collect();
        for _ in 0..64 {
            let gx = eval(&x, g);
            if gx.is_zero() {
                return Ok(x);
            }
            let dgx = eval(&x, &dg);
            let inv = self.inv(&dgx).map_err(|_| {
                Error::precondition("residue root is not simple; cannot Hensel-lift")
            })?;
            x = &x - &(&gx * &inv);
        }
        Err(Error::VerificationFailed(
            "Hensel lifting did not converge".into(),
        ))
    }

    /// Number of elements (u128; errors past 2^127).
    pub fn size(&self) -> Result<u128> {
        match self.pres() {
            Presentation::Local(l) => {
                let d = (l.modulus.len() - 1) as u32;
                (l.ell_n as u128)
                    .checked_pow(d)
                    .ok_or_else(|| Error::Unsupported("ring too large to size".into()))
            }
            Presentation::Product(cs) => {
                let mut acc: u128 = 1;
                for c in cs {
                    acc = acc
                        .checked_mul(c.size()?)
                        .ok_or_else(|| Error::Unsupported("ring too large to size".into()))?;
                }
                Ok(acc)
            }
            Presentation::Fiber(f) => {
                let res = f.residue.size()?;
                Ok(f.left.size()? * (f.right.size()? / res))
            }
        }
    }

    /// Deterministic sample stream for property tests. The closure supplies
    /// raw u64s; fiber coordinates are resampled onto the gluing locus.
    pub fn sample_element(&self, next: &mut dyn FnMut() -> u64) -> RingElement {
        match self.pres() {
            Presentation::Local(l) => {
                let d = l.modulus.len() - 1;
                let cs: Vec<u64> = (0..d).map(|_| next() % l.ell_n).collect();
                RingElement {
                    ring: self.clone(),
                    data: ElemData::Coeffs(cs),
                }
            }
            Presentation::Product(cs) => {
                let parts = cs.iter().map(|c| c.sample_element(next)).collect();
                RingElement {
                    ring: self.clone(),
                    data: ElemData::Tuple(parts),
                }
            }
            Presentation::Fiber(f) => {
                let a = f.left.sample_element(next);
                let mut b = f.right.sample_element(next);
                // push b onto the gluing locus: correct its residue to match a
                let ra = f.left.residue_poly(&a).expect("local");
                let rb = f.right.residue_poly(&b).expect("local");
                let diff = fpoly::sub(&ra, &rb, f.left.ell());
                let corr = f
                    .right
                    .from_coeffs(&diff.iter().map(|&c| c as i64).collect::<Vec<_>>())
                    .expect("local");
                b = &b + &corr;
                self.pair(a, b).expect("glued sample")
            }
        }
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

/// Multiplicative order of a mod m (a coprime to m).
pub fn mult_order(a: u64, m: u64) -> Result<u64> {
    if m == 1 {
        return Ok(1);
    }
    if gcd_u64(a % m, m) != 1 {
        return Err(Error::precondition(format!("{a} is not a unit mod {m}")));
    }
    let mut acc = a % m;
    let mut k = 1u64;
    while acc != 1 {
        acc = fpoly::mulmod(acc, a % m, m);
        k += 1;
        if k > m {
            unreachable!("order search exceeded the group size");
        }
    }
    Ok(k)
}

/// Reduce a (possibly long) coefficient vector by the monic modulus, mod
/// ell_n, returning exactly `d` coefficients.
fn reduce_by_modulus(mut v: Vec<u64>, modulus: &[u64], ell_n: u64, d: usize) -> Vec<u64> {
    while v.len() > d {
        let top = v.len() - 1;
        let c = v[top];
        v.pop();
        if c == 0 {
            continue;
        }
        // subtract c * t^(top-d) * modulus (minus its leading term)
        for k in 0..d {
            let sub = fpoly::mulmod(c, modulus[k], ell_n);
            let idx = top - d + k;
            v[idx] = (v[idx] + ell_n - sub) % ell_n;
        }
    }
    v.resize(d, 0);
    v
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn data(&self) -> &ElemData {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            ElemData::Coeffs(cs) => cs.iter().all(|&c| c == 0),
            ElemData::Tuple(ps) => ps.iter().all(|p| p.is_zero()),
            ElemData::Pair(ab) => ab.0.is_zero() && ab.1.is_zero(),
        }
    }

    pub fn pow(&self, mut e: u64) -> RingElement {
        let mut acc = self.ring.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// x^e for signed e; negative exponents require a unit.
    pub fn pow_i64(&self, e: i64) -> Result<RingElement> {
        if e >= 0 {
            return Ok(self.pow(e as u64));
        }
        let inv = self.ring.inv(self)?;
        Ok(inv.pow(e.unsigned_abs()))
    }

    /// Coordinates of a product/fiber element.
    pub fn component(&self, i: usize) -> Result<RingElement> {
        match &self.data {
            ElemData::Tuple(ps) => ps
                .get(i)
                .cloned()
                .ok_or_else(|| Error::precondition("component index out of range")),
            ElemData::Pair(ab) => match i {
                0 => Ok(ab.0.clone()),
                1 => Ok(ab.1.clone()),
                _ => Err(Error::precondition("fiber elements have components 0 and 1")),
            },
            ElemData::Coeffs(_) => Err(Error::precondition("local elements have no components")),
        }
    }
}

fn bin_op(
    a: &RingElement,
    b: &RingElement,
    f_local: &dyn Fn(&LocalPres, &[u64], &[u64]) -> Vec<u64>,
    name: &str,
) -> RingElement {
    assert!(
        a.ring == b.ring,
        "{name} across different rings: {} vs {}",
        a.ring.label(),
        b.ring.label()
    );
    let data = match (a.ring.pres(), &a.data, &b.data) {
        (Presentation::Local(l), ElemData::Coeffs(x), ElemData::Coeffs(y)) => {
            ElemData::Coeffs(f_local(l, x, y))
        }
        (Presentation::Product(_), ElemData::Tuple(xs), ElemData::Tuple(ys)) => ElemData::Tuple(
            xs.iter()
                .zip(ys)
                .map(|(x, y)| bin_op(x, y, f_local, name))
                .collect(),
        ),
        (Presentation::Fiber(_), ElemData::Pair(x), ElemData::Pair(y)) => ElemData::Pair(
            Box::new((bin_op(&x.0, &y.0, f_local, name), bin_op(&x.1, &y.1, f_local, name))),
        ),
        _ => unreachable!("element data does not match presentation"),
    };
    RingElement {
        ring: a.ring.clone(),
        data,
    }
}

impl std::ops::Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        bin_op(
            self,
            rhs,
            &|l, x, y| {
                x.iter()
                    .zip(y)
                    .map(|(&a, &b)| (a + b) % l.ell_n)
                    .collect()
            },
            "add",
        )
    }
}

impl std::ops::Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        bin_op(
            self,
            rhs,
            &|l, x, y| {
                x.iter()
                    .zip(y)
                    .map(|(&a, &b)| (a + l.ell_n - b) % l.ell_n)
                    .collect()
            },
            "sub",
        )
    }
}

impl std::ops::Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        bin_op(
            self,
            rhs,
            &|l, x, y| {
                let d = l.modulus.len() - 1;
                if d == 0 {
                    return vec![];
                }
                let mut conv = vec![0u64; 2 * d - 1];
                for (i, &a) in x.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    for (j, &b) in y.iter().enumerate() {
                        conv[i + j] =
                            ((conv[i + j] as u128 + a as u128 * b as u128) % l.ell_n as u128) as u64;
                    }
                }
                reduce_by_modulus(conv, &l.modulus, l.ell_n, d)
            },
            "mul",
        )
    }
}

impl std::ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        let zero = self.ring.zero();
        &zero - self
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.data {
            ElemData::Coeffs(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(fm, "[{}]", parts.join(","))
            }
            ElemData::Tuple(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(fm, "({})", parts.join("; "))
            }
            ElemData::Pair(ab) => write!(fm, "({} | {})", ab.0, ab.1),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{}", self.label())
    }
}

#[cfg(test)]
mod tests;
