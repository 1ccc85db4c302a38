//! GL_n(Q_p) matrices with exact entries and the Iwasawa decomposition
//! g = n t k used to evaluate spherical Whittaker functions anywhere:
//! n upper unipotent, t a diagonal of pure p-powers, k in GL_n(Z_p).

use super::PAdic;
use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicMatrix {
    p: u64,
    n: usize,
    a: Vec<PAdic>,
}

impl PAdicMatrix {
    pub fn identity(p: u64, n: usize) -> PAdicMatrix {
        let mut a = vec![PAdic::zero(p); n * n];
        for i in 0..n {
            a[i * n + i] = PAdic::one(p);
        }
        PAdicMatrix { p, n, a }
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<PAdic>>) -> PAdicMatrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrices only");
        let a = rows.into_iter().flatten().collect();
        PAdicMatrix { p, n, a }
    }

    pub fn diag(p: u64, parts: &[PAdic]) -> PAdicMatrix {
        let n = parts.len();
        let mut m = PAdicMatrix::identity(p, n);
        for i in 0..n {
            m.set(i, i, parts[i].clone());
        }
        m
    }

    /// I + x E_{ij}, i != j.
    pub fn elementary(p: u64, n: usize, i: usize, j: usize, x: PAdic) -> PAdicMatrix {
        assert!(i != j && i < n && j < n);
        let mut m = PAdicMatrix::identity(p, n);
        m.set(i, j, x);
        m
    }

    /// The signed antidiagonal driving the tilde transform:
    /// w[i][n-1-i] = (-1)^i.
    pub fn w_matrix(p: u64, n: usize) -> PAdicMatrix {
        let mut m = PAdicMatrix {
            p,
            n,
            a: vec![PAdic::zero(p); n * n],
        };
        for i in 0..n {
            let s = if i % 2 == 0 { 1 } else { -1 };
            m.set(i, n - 1 - i, PAdic::from_i64(p, s));
        }
        m
    }

    /// (-1)^n in the corner, signed antidiagonal on the lower-right block;
    /// the identity when n = 2.
    pub fn w_prime_matrix(p: u64, n: usize) -> PAdicMatrix {
        assert!(n >= 2);
        let mut m = PAdicMatrix {
            p,
            n,
            a: vec![PAdic::zero(p); n * n],
        };
        let corner = if n % 2 == 0 { 1 } else { -1 };
        m.set(0, 0, PAdic::from_i64(p, corner));
        for r in 1..n {
            let s = if (n - 1 - r) % 2 == 0 { 1 } else { -1 };
            m.set(r, n - r, PAdic::from_i64(p, s));
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &PAdic {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: PAdic) {
        self.a[i * self.n + j] = x;
    }

    pub fn mul(&self, rhs: &PAdicMatrix) -> PAdicMatrix {
        assert!(self.n == rhs.n && self.p == rhs.p);
        let n = self.n;
        let mut out = PAdicMatrix {
            p: self.p,
            n,
            a: vec![PAdic::zero(self.p); n * n],
        };
        for i in 0..n {
            for j in 0..n {
                let mut acc = PAdic::zero(self.p);
                for k in 0..n {
                    acc = &acc + &(self.entry(i, k) * rhs.entry(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn transpose(&self) -> PAdicMatrix {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.entry(j, i).clone());
            }
        }
        out
    }

    pub fn det(&self) -> PAdic {
        // exact fraction Gauss with row swaps
        let n = self.n;
        let mut m = self.clone();
        let mut det = PAdic::one(self.p);
        for col in 0..n {
            let piv = (col..n).find(|&r| !m.entry(r, col).is_zero());
            let piv = match piv {
                Some(r) => r,
                None => return PAdic::zero(self.p),
            };
            if piv != col {
                for j in 0..n {
                    let tmp = m.entry(piv, j).clone();
                    m.set(piv, j, m.entry(col, j).clone());
                    m.set(col, j, tmp);
                }
                det = &det * &PAdic::from_i64(self.p, -1);
            }
            let d = m.entry(col, col).clone();
            det = &det * &d;
            let dinv = d.inv().unwrap();
            for r in col + 1..n {
                let f = m.entry(r, col) * &dinv;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let upd = m.entry(r, j) - &(&f * m.entry(col, j));
                    m.set(r, j, upd);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<PAdicMatrix> {
        let n = self.n;
        let mut m = self.clone();
        let mut inv = PAdicMatrix::identity(self.p, n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !m.entry(r, col).is_zero())
                .ok_or_else(|| Error::precondition("matrix is singular"))?;
            if piv != col {
                for j in 0..n {
                    let tmp = m.entry(piv, j).clone();
                    m.set(piv, j, m.entry(col, j).clone());
                    m.set(col, j, tmp);
                    let tmp = inv.entry(piv, j).clone();
                    inv.set(piv, j, inv.entry(col, j).clone());
                    inv.set(col, j, tmp);
                }
            }
            let dinv = m.entry(col, col).inv()?;
            for j in 0..n {
                let u = m.entry(col, j) * &dinv;
                m.set(col, j, u);
                let u = inv.entry(col, j) * &dinv;
                inv.set(col, j, u);
            }
            for r in 0..n {
                if r == col || m.entry(r, col).is_zero() {
                    continue;
                }
                let f = m.entry(r, col).clone();
                for j in 0..n {
                    let u = m.entry(r, j) - &(&f * m.entry(col, j));
                    m.set(r, j, u);
                    let u = inv.entry(r, j) - &(&f * inv.entry(col, j));
                    inv.set(r, j, u);
                }
            }
        }
        Ok(inv)
    }

    /// g^iota = transpose-inverse, the involution behind the tilde transform.
    pub fn iota(&self) -> Result<PAdicMatrix> {
        Ok(self.inverse()?.transpose())
    }

    pub fn is_upper_unipotent(&self) -> bool {
        let one = PAdic::one(self.p);
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.entry(i, j);
                if i == j && e != &one {
                    return false;
                }
                if i > j && !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn entries_integral(&self) -> bool {
        self.a.iter().all(|e| e.is_integral())
    }

    /// Sum of the superdiagonal, the standard character coordinate of an
    /// upper unipotent: psi(u) = psi(u_12 + ... + u_{n-1,n}).
    pub fn superdiagonal_sum(&self) -> PAdic {
        let mut acc = PAdic::zero(self.p);
        for i in 0..self.n.saturating_sub(1) {
            acc = &acc + self.entry(i, i + 1);
        }
        acc
    }

    /// g = n t k with n upper unipotent, t a diagonal of exact p-powers and
    /// k integral with unit determinant. Column reduction over Z_p from the
    /// bottom row up, pivoting on minimal valuation; unit diagonal parts are
    /// pushed into k so t is canonical.
    pub fn iwasawa_decompose(&self) -> Result<(PAdicMatrix, Vec<PAdic>, PAdicMatrix)> {
        let n = self.n;
        let p = self.p;
        let mut b = self.clone();
        let mut k = PAdicMatrix::identity(p, n);
        // invariant: self == b * k
        for i in (0..n).rev() {
            let mut piv: Option<(usize, i64)> = None;
            for j in 0..=i {
                if let Some(v) = b.entry(i, j).val() {
                    if piv.map_or(true, |(_, pv)| v < pv) {
                        piv = Some((j, v));
                    }
                }
            }
            let (jstar, _) = piv.ok_or_else(|| Error::precondition("matrix is singular"))?;
            if jstar != i {
                for r in 0..n {
                    let tmp = b.entry(r, jstar).clone();
                    b.set(r, jstar, b.entry(r, i).clone());
                    b.set(r, i, tmp);
                }
                for c in 0..n {
                    let tmp = k.entry(jstar, c).clone();
                    k.set(jstar, c, k.entry(i, c).clone());
                    k.set(i, c, tmp);
                }
            }
            let pinv = b.entry(i, i).inv()?;
            for j in 0..i {
                let r = b.entry(i, j) * &pinv;
                debug_assert!(r.is_integral(), "pivot was not minimal");
                if r.is_zero() {
                    continue;
                }
                // b.col(j) -= r * b.col(i)  paired with  k.row(i) += r * k.row(j)
                for row in 0..n {
                    let u = b.entry(row, j) - &(&r * b.entry(row, i));
                    b.set(row, j, u);
                }
                for c in 0..n {
                    let u = k.entry(i, c) + &(&r * k.entry(j, c));
                    k.set(i, c, u);
                }
            }
        }
        // b is upper triangular; factor b = nu * diag(d_j), then push the
        // unit part of each d_j into k so t is a pure p-power diagonal
        let mut t = Vec::with_capacity(n);
        let mut nu = PAdicMatrix::identity(p, n);
        for j in 0..n {
            let d = b.entry(j, j).clone();
            let v = d
                .val()
                .ok_or_else(|| Error::precondition("matrix is singular"))?;
            let tj = PAdic::p_pow(p, v);
            let dinv = d.inv().unwrap();
            let u = &d * &tj.inv().unwrap();
            for c in 0..n {
                let s = &u * k.entry(j, c);
                k.set(j, c, s);
            }
            for i in 0..j {
                let e = b.entry(i, j) * &dinv;
                nu.set(i, j, e);
            }
            t.push(tj);
        }
        if !k.entries_integral() || !k.det().is_unit() {
            return Err(Error::VerificationFailed(
                "iwasawa factor k left GL_n(Z_p)".into(),
            ));
        }
        debug_assert!(nu.is_upper_unipotent());
        Ok((nu, t, k))
    }
}

impl fmt::Display for PAdicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
