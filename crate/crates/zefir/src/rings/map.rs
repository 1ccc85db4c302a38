//! Ring homomorphisms between presentations. A map out of a local ring is
//! pinned down by the image of t; the construction checks the two defining
//! relations (ell^N maps to 0, the structure polynomial kills the image), so
//! every constructed map is a verified homomorphism, not a promise.

use super::{ElemData, Presentation, Ring, RingElement};
use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct RingMap(Arc<MapRepr>);

#[derive(Debug)]
struct MapRepr {
    src: Ring,
    dst: Ring,
    kind: MapKind,
}

#[derive(Debug)]
enum MapKind {
    Identity,
    /// src local; t goes to img, constants through the Z-algebra structure
    LocalGen { img: RingElement },
    ProjFactor(usize),
    FiberLeft,
    FiberRight,
    IntoFiber { left: RingMap, right: RingMap },
    IntoProduct(Vec<RingMap>),
    Compose { first: RingMap, then: RingMap },
}

fn horner_u64(coeffs: &[u64], img: &RingElement, dst: &Ring) -> RingElement {
    let mut acc = dst.zero();
    for &c in coeffs.iter().rev() {
        acc = &(&acc * img) + &dst.from_u64(c);
    }
    acc
}

impl RingMap {
    pub fn identity(r: Ring) -> RingMap {
        RingMap(Arc::new(MapRepr {
            src: r.clone(),
            dst: r,
            kind: MapKind::Identity,
        }))
    }

    /// The map Z[t]/(ell^N, g) -> dst sending t to img. Well-defined iff
    /// ell^N * 1 = 0 in dst and g(img) = 0; both are checked here.
    pub fn local_gen(src: Ring, dst: Ring, img: RingElement) -> Result<RingMap> {
        let l = src.local_pres()?;
        if img.ring() != &dst {
            return Err(Error::mismatch("generator image lives in the wrong ring"));
        }
        let elln_img = {
            // ell^N as repeated addition-safe powering in dst
            dst.from_u64(l.ell).pow(l.prec as u64)
        };
        if !elln_img.is_zero() {
            return Err(Error::precondition(format!(
                "ell^N = {}^{} is nonzero in {}; map not defined",
                l.ell,
                l.prec,
                dst.label()
            )));
        }
        let g_at_img = horner_u64(&l.modulus, &img, &dst);
        if !g_at_img.is_zero() {
            return Err(Error::precondition(
                "generator image does not satisfy the structure polynomial",
            ));
        }
        Ok(RingMap(Arc::new(MapRepr {
            src,
            dst,
            kind: MapKind::LocalGen { img },
        })))
    }

    pub fn proj_factor(src: Ring, i: usize) -> Result<RingMap> {
        let dst = match src.pres() {
            Presentation::Product(cs) => cs
                .get(i)
                .cloned()
                .ok_or_else(|| Error::precondition("factor index out of range"))?,
            _ => return Err(Error::precondition("proj_factor needs a product ring")),
        };
        Ok(RingMap(Arc::new(MapRepr {
            src,
            dst,
            kind: MapKind::ProjFactor(i),
        })))
    }

    pub fn fiber_left(src: Ring) -> Result<RingMap> {
        let dst = match src.pres() {
            Presentation::Fiber(f) => f.left.clone(),
            _ => return Err(Error::precondition("fiber_left needs a fiber ring")),
        };
        Ok(RingMap(Arc::new(MapRepr {
            src,
            dst,
            kind: MapKind::FiberLeft,
        })))
    }

    pub fn fiber_right(src: Ring) -> Result<RingMap> {
        let dst = match src.pres() {
            Presentation::Fiber(f) => f.right.clone(),
            _ => return Err(Error::precondition("fiber_right needs a fiber ring")),
        };
        Ok(RingMap(Arc::new(MapRepr {
            src,
            dst,
            kind: MapKind::FiberRight,
        })))
    }

    /// Glue two maps with common source into the fiber ring of their targets.
    /// Images are paired per element; the fiber congruence is enforced by the
    /// pair constructor on every application.
    pub fn into_fiber(dst: Ring, left: RingMap, right: RingMap) -> Result<RingMap> {
        let f = match dst.pres() {
            Presentation::Fiber(f) => f,
            _ => return Err(Error::precondition("into_fiber needs a fiber target")),
        };
        if left.src() != right.src() {
            return Err(Error::mismatch("into_fiber legs have different sources"));
        }
        if left.dst() != &f.left || right.dst() != &f.right {
            return Err(Error::mismatch("into_fiber legs do not match the target components"));
        }
        let src = left.src().clone();
        Ok(RingMap(Arc::new(MapRepr {
            src,
            dst,
            kind: MapKind::IntoFiber { left, right },
        })))
    }

    pub fn into_product(dst: Ring, legs: Vec<RingMap>) -> Result<RingMap> {
        let cs = match dst.pres() {
            Presentation::Product(cs) => cs,
            _ => return Err(Error::precondition("into_product needs a product target")),
        };
        if legs.len() != cs.len() {
            return Err(Error::mismatch("leg count does not match the target"));
        }
        if legs.is_empty() {
            return Err(Error::precondition("into_product needs legs"));
        }
        let src = legs[0].src().clone();
        for (leg, c) in legs.iter().zip(cs) {
            if leg.src() != &src || leg.dst() != c {
                return Err(Error::mismatch("into_product leg sources/targets mismatch"));
            }
        }
        Ok(RingMap(Arc::new(MapRepr {
            src,
            dst,
            kind: MapKind::IntoProduct(legs),
        })))
    }

    pub fn compose(first: RingMap, then: RingMap) -> Result<RingMap> {
        if first.dst() != then.src() {
            return Err(Error::mismatch("compose: inner target differs from outer source"));
        }
        Ok(RingMap(Arc::new(MapRepr {
            src: first.src().clone(),
            dst: then.dst().clone(),
            kind: MapKind::Compose { first, then },
        })))
    }

    pub fn src(&self) -> &Ring {
        &self.0.src
    }

    pub fn dst(&self) -> &Ring {
        &self.0.dst
    }

    pub fn apply(&self, x: &RingElement) -> Result<RingElement> {
        if x.ring() != self.src() {
            return Err(Error::mismatch(format!(
                "map source is {}, element lives in {}",
                self.src().label(),
                x.ring().label()
            )));
        }
        match (&self.0.kind, &x.data) {
            (MapKind::Identity, _) => Ok(x.clone()),
            (MapKind::LocalGen { img }, ElemData::Coeffs(cs)) => {
                Ok(horner_u64(cs, img, self.dst()))
            }
            (MapKind::ProjFactor(i), ElemData::Tuple(ps)) => Ok(ps[*i].clone()),
            (MapKind::FiberLeft, ElemData::Pair(ab)) => Ok(ab.0.clone()),
            (MapKind::FiberRight, ElemData::Pair(ab)) => Ok(ab.1.clone()),
            (MapKind::IntoFiber { left, right }, _) => {
                let a = left.apply(x)?;
                let b = right.apply(x)?;
                self.dst().pair(a, b)
            }
            (MapKind::IntoProduct(legs), _) => {
                let parts: Result<Vec<RingElement>> =
                    legs.iter().map(|leg| leg.apply(x)).collect();
                self.dst().tuple(parts?)
            }
            (MapKind::Compose { first, then }, _) => then.apply(&first.apply(x)?),
            _ => Err(Error::mismatch("element data does not match the map source")),
        }
    }
}

impl fmt::Display for RingMap {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            MapKind::Identity => write!(fm, "id"),
            MapKind::LocalGen { img } => write!(fm, "t->{img}"),
            MapKind::ProjFactor(i) => write!(fm, "proj{i}"),
            MapKind::FiberLeft => write!(fm, "left"),
            MapKind::FiberRight => write!(fm, "right"),
            MapKind::IntoFiber { .. } => write!(fm, "glue"),
            MapKind::IntoProduct(_) => write!(fm, "tuple"),
            MapKind::Compose { first, then } => write!(fm, "{first};{then}"),
        }
    }
}

impl Ring {
    /// The canonical reduction onto the residue field.
    pub fn residue_map(&self) -> Result<RingMap> {
        match self.pres() {
            Presentation::Local(_) => {
                let res = self.residue_field()?;
                let img = res.gen()?;
                RingMap::local_gen(self.clone(), res, img)
            }
            Presentation::Fiber(_) => {
                let left = RingMap::fiber_left(self.clone())?;
                let inner = left.dst().residue_map()?;
                RingMap::compose(left, inner)
            }
            Presentation::Product(_) => Err(Error::precondition(
                "product rings have no single residue field",
            )),
        }
    }
}
