//! Dense univariate polynomials over the prime field F_ell.
//!
//! Coefficient vectors are little-endian and trimmed: the vector is empty iff
//! the polynomial is zero, otherwise the last entry is nonzero. All functions
//! take the prime modulus `ell` explicitly; coefficients live in [0, ell).

pub type FPoly = Vec<u64>;

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod_scalar(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Inverse of a mod m for m prime (or a coprime to m); panics on non-unit.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert!(r0 == 1, "inv_mod of non-unit {a} mod {m}");
    (s0.rem_euclid(m as i128)) as u64
}

pub fn trim(p: &mut FPoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub fn is_zero(p: &FPoly) -> bool {
    p.is_empty()
}

/// Degree, or None for the zero polynomial.
pub fn deg(p: &FPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn add(a: &FPoly, b: &FPoly, ell: u64) -> FPoly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = (out[i] + c) % ell;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = (out[i] + c) % ell;
    }
    trim(&mut out);
    out
}

pub fn sub(a: &FPoly, b: &FPoly, ell: u64) -> FPoly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = (out[i] + c) % ell;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = (out[i] + ell - (c % ell)) % ell;
    }
    trim(&mut out);
    out
}

pub fn mul(a: &FPoly, b: &FPoly, ell: u64) -> FPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % ell as u128;
        }
    }
    let mut out: FPoly = out.into_iter().map(|c| c as u64).collect();
    trim(&mut out);
    out
}

pub fn scale(a: &FPoly, c: u64, ell: u64) -> FPoly {
    let mut out: FPoly = a.iter().map(|&x| mulmod(x, c, ell)).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder by a nonzero divisor (leading coefficient inverted
/// mod ell).
pub fn divrem(a: &FPoly, b: &FPoly, ell: u64) -> (FPoly, FPoly) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], ell);
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = mulmod(r[dr], lead_inv, ell);
        q[dr - db] = c;
        for (i, &bc) in b.iter().enumerate() {
            let idx = dr - db + i;
            r[idx] = (r[idx] + ell - mulmod(c, bc, ell)) % ell;
        }
        trim(&mut r);
    }
    (q, r)
}

pub fn rem(a: &FPoly, m: &FPoly, ell: u64) -> FPoly {
    divrem(a, m, ell).1
}

pub fn monic(a: &FPoly, ell: u64) -> FPoly {
    match a.last() {
        None => vec![],
        Some(&lc) => scale(a, inv_mod(lc, ell), ell),
    }
}

/// Monic gcd.
pub fn gcd(a: &FPoly, b: &FPoly, ell: u64) -> FPoly {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    while !r1.is_empty() {
        let r = rem(&r0, &r1, ell);
        r0 = r1;
        r1 = r;
    }
    monic(&r0, ell)
}

/// Extended gcd: returns (g, u, v) monic g with u*a + v*b = g.
pub fn ext_gcd(a: &FPoly, b: &FPoly, ell: u64) -> (FPoly, FPoly, FPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, ell);
        let ns = sub(&s0, &mul(&q, &s1, ell), ell);
        let nt = sub(&t0, &mul(&q, &t1, ell), ell);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, ns);
        t0 = std::mem::replace(&mut t1, nt);
    }
    if let Some(&lc) = r0.last() {
        let inv = inv_mod(lc, ell);
        return (scale(&r0, inv, ell), scale(&s0, inv, ell), scale(&t0, inv, ell));
    }
    (vec![], vec![], vec![])
}

pub fn powmod(base: &FPoly, mut e: u64, m: &FPoly, ell: u64) -> FPoly {
    let mut acc = rem(&vec![1], m, ell);
    let mut b = rem(base, m, ell);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, ell), m, ell);
        }
        b = rem(&mul(&b, &b, ell), m, ell);
        e >>= 1;
    }
    acc
}

/// base^(ell^k) mod m, by k-fold Frobenius powering (avoids huge exponents).
pub fn frobenius_pow(base: &FPoly, k: u32, m: &FPoly, ell: u64) -> FPoly {
    let mut h = rem(base, m, ell);
    for _ in 0..k {
        h = powmod(&h, ell, m, ell);
    }
    h
}

pub fn derivative(a: &FPoly, ell: u64) -> FPoly {
    if a.len() <= 1 {
        return vec![];
    }
    let mut out: FPoly = a[1..]
        .iter()
        .enumerate()
        .map(|(i, &c)| mulmod((i as u64 + 1) % ell, c, ell))
        .collect();
    trim(&mut out);
    out
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin irreducibility test for monic g of degree >= 1 over F_ell.
pub fn is_irreducible(g: &FPoly, ell: u64) -> bool {
    let f = match deg(g) {
        None | Some(0) => return false,
        Some(d) => d as u32,
    };
    let t = vec![0, 1];
    // t^(ell^f) == t mod g
    let h = frobenius_pow(&t, f, g, ell);
    if h != rem(&t, g, ell) {
        return false;
    }
    for r in prime_factors(f as u64) {
        let h = frobenius_pow(&t, f / r as u32, g, ell);
        let d = sub(&h, &t, ell);
        if deg(&gcd(&d, g, ell)) != Some(0) {
            return false;
        }
    }
    true
}

/// For g with g' = 0 (all exponents divisible by ell): the s with s^ell = g.
/// Over the prime field the coefficientwise ell-th root is the identity.
fn ell_th_root(g: &FPoly, ell: u64) -> FPoly {
    let mut out = vec![];
    for (i, &c) in g.iter().enumerate() {
        if c != 0 {
            assert!(i as u64 % ell == 0, "ell_th_root of non-p-power");
        }
        if i as u64 % ell == 0 {
            out.push(c);
        }
    }
    trim(&mut out);
    out
}

/// Product of the distinct monic irreducible factors of g.
pub fn radical(g: &FPoly, ell: u64) -> FPoly {
    let g = monic(g, ell);
    match deg(&g) {
        None => panic!("radical of zero"),
        Some(0) => return vec![1],
        _ => {}
    }
    let gp = derivative(&g, ell);
    if gp.is_empty() {
        return radical(&ell_th_root(&g, ell), ell);
    }
    let d = gcd(&g, &gp, ell);
    if deg(&d) == Some(0) {
        return g;
    }
    let w = divrem(&g, &d, ell).0;
    // strip every factor of w out of d, then recurse on what's left
    let mut rest = d;
    loop {
        let c = gcd(&rest, &w, ell);
        if deg(&c) == Some(0) {
            break;
        }
        rest = divrem(&rest, &c, ell).0;
    }
    monic(&mul(&w, &radical(&rest, ell), ell), ell)
}

/// Deterministic pick: the first monic irreducible of degree f, scanning
/// lower-coefficient vectors as little-endian counters.
pub fn first_irreducible(ell: u64, f: u32) -> FPoly {
    assert!(f >= 1);
    if f == 1 {
        return vec![0, 1]; // t itself: residue ring is the prime field
    }
    let f = f as usize;
    let mut counter = vec![0u64; f];
    loop {
        let mut g = counter.clone();
        g.push(1);
        if is_irreducible(&g, ell) {
            return g;
        }
        let mut i = 0;
        loop {
            counter[i] += 1;
            if counter[i] < ell {
                break;
            }
            counter[i] = 0;
            i += 1;
            assert!(i < f, "no irreducible of degree {f} found: impossible");
        }
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![];
    for d in 1..=n {
        if n % d == 0 {
            out.push(d);
        }
    }
    out
}

fn int_poly_divexact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut r = num.to_vec();
    while r.last() == Some(&0) {
        r.pop();
    }
    let mut d = den.to_vec();
    while d.last() == Some(&0) {
        d.pop();
    }
    assert!(!d.is_empty(), "integer division by zero");
    let db = d.len() - 1;
    if r.is_empty() {
        return vec![];
    }
    let mut q = vec![0i128; r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        assert!(r[dr] % d[db] == 0, "non-exact integer division");
        let c = r[dr] / d[db];
        q[dr - db] = c;
        for (i, &bc) in d.iter().enumerate() {
            r[dr - db + i] -= c * bc;
        }
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    assert!(r.is_empty(), "non-exact integer division: remainder");
    q
}

/// n-th cyclotomic polynomial with integer coefficients (little-endian).
pub fn cyclotomic(n: u64) -> Vec<i64> {
    assert!(n >= 1 && n <= 10_000);
    fn inner(n: u64, memo: &mut std::collections::BTreeMap<u64, Vec<i128>>) -> Vec<i128> {
        if let Some(v) = memo.get(&n) {
            return v.clone();
        }
        // x^n - 1 divided by the product of all proper-divisor cyclotomics
        let mut num = vec![0i128; n as usize + 1];
        num[0] = -1;
        num[n as usize] = 1;
        let mut den = vec![1i128];
        for d in divisors(n) {
            if d == n {
                continue;
            }
            let phi_d = inner(d, memo);
            let mut prod = vec![0i128; den.len() + phi_d.len() - 1];
            for (i, &x) in den.iter().enumerate() {
                for (j, &y) in phi_d.iter().enumerate() {
                    prod[i + j] += x * y;
                }
            }
            den = prod;
        }
        let q = int_poly_divexact(&num, &den);
        memo.insert(n, q.clone());
        q
    }
    let mut memo = std::collections::BTreeMap::new();
    inner(n, &mut memo)
        .into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        let ell = 7;
        let a = vec![3, 1, 4, 1, 5, 6];
        let b = vec![2, 0, 1];
        let (q, r) = divrem(&a, &b, ell);
        let back = add(&mul(&q, &b, ell), &r, ell);
        assert_eq!(back, a);
        assert!(deg(&r).map_or(true, |d| d < 2));
    }

    #[test]
    fn ext_gcd_bezout() {
        let ell = 5;
        let a = vec![1, 2, 3, 1];
        let b = vec![4, 0, 1];
        let (g, u, v) = ext_gcd(&a, &b, ell);
        let lhs = add(&mul(&u, &a, ell), &mul(&v, &b, ell), ell);
        assert_eq!(lhs, g);
    }

    #[test]
    fn irreducibility_small() {
        // t^2+t+1: irreducible mod 2 and mod 5 (no roots); (t-1)^2 mod 3;
        // has the root 2 mod 7
        let g = vec![1, 1, 1];
        assert!(is_irreducible(&g, 2));
        assert!(is_irreducible(&g, 5));
        assert!(!is_irreducible(&g, 3));
        assert!(!is_irreducible(&g, 7));
        // t^2+1: reducible mod 5, irreducible mod 3
        let h = vec![1, 0, 1];
        assert!(!is_irreducible(&h, 5));
        assert!(is_irreducible(&h, 3));
    }

    #[test]
    fn first_irreducible_is_irreducible() {
        for ell in [2u64, 3, 5, 13] {
            for f in 1..=6u32 {
                let g = first_irreducible(ell, f);
                assert_eq!(deg(&g), Some(f as usize));
                if f > 1 {
                    assert!(is_irreducible(&g, ell));
                }
            }
        }
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic(7), vec![1, 1, 1, 1, 1, 1, 1]);
        // phi(21) = 12; phi_21(x) = x^12 - x^11 + x^9 - x^8 + x^6 - x^4 + x^3 - x + 1
        assert_eq!(
            cyclotomic(21),
            vec![1, -1, 0, 1, -1, 0, 1, 0, -1, 1, 0, -1, 1]
        );
    }

    #[test]
    fn radical_of_prime_power() {
        // phi_21 mod 3 should be an irreducible of degree 6, squared
        let phi: FPoly = cyclotomic(21)
            .into_iter()
            .map(|c| c.rem_euclid(3) as u64)
            .collect();
        let j = radical(&phi, 3);
        assert_eq!(deg(&j), Some(6));
        assert!(is_irreducible(&j, 3));
        let sq = mul(&j, &j, 3);
        assert_eq!(monic(&sq, 3), monic(&phi, 3));
        // phi_3 = t^2+t+1 mod 3 = (t-1)^2
        let j3 = radical(&vec![1, 1, 1], 3);
        assert_eq!(j3, vec![2, 1]); // t + 2 = t - 1
    }

    #[test]
    fn frobenius_matches_powmod() {
        let g = first_irreducible(3, 4);
        let base = vec![1, 2, 0, 1];
        // ell^3 = 27 fits in u64, compare the two routes
        assert_eq!(
            frobenius_pow(&base, 3, &g, 3),
            powmod(&base, 27, &g, 3)
        );
    }
}
