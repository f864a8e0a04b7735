//! Minimal F_q = F_p[x]/(f) arithmetic used by the twisted Laurent family.
//!
//! Polynomials are little-endian coefficient vectors over F_p with no
//! trailing zeros. The modulus is the lexicographically first monic
//! irreducible of the requested degree, so a given q always produces the
//! same field presentation.

use crate::error::{Error, Result};
use crate::field::is_prime;

type Poly = Vec<u32>;

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn deg(p: &Poly) -> Option<usize> {
    if p.is_empty() { None } else { Some(p.len() - 1) }
}

fn poly_mul(a: &Poly, b: &Poly, p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|v| v as u32).collect())
}

fn poly_rem(a: &Poly, m: &Poly, p: u32) -> Poly {
    let mut r = a.clone();
    let md = deg(m).expect("nonzero modulus");
    let lead_inv = inv_mod(m[md], p);
    while let Some(rd) = deg(&r) {
        if rd < md {
            break;
        }
        let factor = (r[rd] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = rd - md;
        for (i, &mc) in m.iter().enumerate() {
            let sub = (factor as u64 * mc as u64) % p as u64;
            let cur = r[i + shift] as u64;
            r[i + shift] = ((cur + p as u64 - sub % p as u64) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut old_r, mut r) = (a as i64, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(p as i64) as u32
}

fn poly_gcd(a: &Poly, b: &Poly, p: u32) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// g^p mod m by square-and-multiply on the exponent p.
fn poly_pow_p(g: &Poly, m: &Poly, p: u32) -> Poly {
    let mut result = vec![1u32];
    let mut base = poly_rem(g, m, p);
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(&poly_mul(&result, &base, p), m, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), m, p);
        e >>= 1;
    }
    result
}

/// x^(p^k) mod m, iterating the p-th power map.
fn x_frobenius_power(m: &Poly, p: u32, k: usize) -> Poly {
    let mut g = vec![0u32, 1]; // x
    for _ in 0..k {
        g = poly_pow_p(&g, m, p);
    }
    g
}

fn is_irreducible(f: &Poly, p: u32) -> bool {
    let n = match deg(f) {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    // x^(p^n) must equal x mod f
    let xq = x_frobenius_power(f, p, n);
    let x: Poly = vec![0, 1];
    if poly_rem(&xq, f, p) != poly_rem(&x, f, p) {
        return false;
    }
    // for each prime divisor r of n, gcd(x^(p^(n/r)) - x, f) must be 1
    let mut divs = vec![];
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            divs.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        divs.push(m);
    }
    for r in divs {
        let xe = x_frobenius_power(f, p, n / r);
        let minus_x: Poly = {
            let mut v = xe.clone();
            while v.len() < 2 {
                v.push(0);
            }
            v[1] = (v[1] + p - 1) % p;
            trim(v)
        };
        let g = poly_gcd(&minus_x, f, p);
        if deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Presentation of F_q with precomputed Frobenius powers and a full
/// multiplication table on the monomial basis {1, x, ..., x^(n-1)}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqData {
    pub p: u32,
    pub n: usize,
    pub modulus: Poly,
    /// frobenius_pow[a][j] = coefficient vector of (x^j)^(p^a) mod f.
    frobenius_pow: Vec<Vec<Vec<u32>>>,
    /// basis_mul[i][j] = coefficient vector of x^i * x^j mod f.
    basis_mul: Vec<Vec<Vec<u32>>>,
}

impl FqData {
    pub fn new(q: u64) -> Result<FqData> {
        let (p, n) = factor_prime_power(q)
            .ok_or_else(|| Error::Schema(format!("q = {q} is not a prime power")))?;
        if p > (1 << 31) {
            return Err(Error::Schema(format!("characteristic {p} exceeds 2^31")));
        }
        let p = p as u32;
        let modulus = find_irreducible(p, n);
        let mut fq = FqData { p, n, modulus, frobenius_pow: vec![], basis_mul: vec![] };
        let mut frob = Vec::with_capacity(n);
        for a in 0..n {
            let mut cols = Vec::with_capacity(n);
            for j in 0..n {
                let xj: Poly = trim(std::iter::repeat(0).take(j).chain([1]).collect());
                let img = x_frobenius_power_of(&xj, &fq.modulus, p, a);
                cols.push(fq.pad(img));
            }
            frob.push(cols);
        }
        fq.frobenius_pow = frob;
        let mut table = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut prod = vec![0u32; i + j + 1];
                prod[i + j] = 1;
                let red = poly_rem(&trim(prod), &fq.modulus, p);
                row.push(fq.pad(red));
            }
            table.push(row);
        }
        fq.basis_mul = table;
        Ok(fq)
    }

    fn pad(&self, v: Poly) -> Vec<u32> {
        let mut v = v;
        v.resize(self.n, 0);
        v
    }

    /// Coefficients of x^i * phi^a(x^j) where phi is the p-power Frobenius.
    /// `a` may be negative; phi has order n.
    pub fn twisted_product(&self, i: usize, a: i64, j: usize) -> Vec<u32> {
        let a = a.rem_euclid(self.n as i64) as usize;
        let phi_xj = &self.frobenius_pow[a][j];
        let mut acc = vec![0u64; self.n];
        for (k, &c) in phi_xj.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (l, &m) in self.basis_mul[i][k].iter().enumerate() {
                acc[l] = (acc[l] + c as u64 * m as u64) % self.p as u64;
            }
        }
        acc.into_iter().map(|v| v as u32).collect()
    }
}

fn x_frobenius_power_of(g: &Poly, m: &Poly, p: u32, k: usize) -> Poly {
    let mut g = poly_rem(g, m, p);
    for _ in 0..k {
        g = poly_pow_p(&g, m, p);
    }
    g
}

fn factor_prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut n = 0;
            let mut m = q;
            while m % p == 0 {
                m /= p;
                n += 1;
            }
            return if m == 1 { Some((p, n)) } else { None };
        }
        p += 1;
    }
    if is_prime(q.try_into().ok()?) { Some((q, 1)) } else { None }
}

fn find_irreducible(p: u32, n: usize) -> Poly {
    // monic x^n + sum c_i x^i, scanning constants first
    let mut coeffs = vec![0u32; n];
    loop {
        let mut f: Poly = coeffs.clone();
        f.push(1);
        let f = trim(f);
        if deg(&f) == Some(n) && is_irreducible(&f, p) {
            return f;
        }
        // increment the coefficient vector like a base-p counter
        let mut pos = 0;
        loop {
            assert!(pos < n, "no irreducible polynomial found, impossible");
            coeffs[pos] += 1;
            if coeffs[pos] < p {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
    }
}
