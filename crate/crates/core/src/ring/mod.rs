//! Z-graded ring models presented through structure constants.
//!
//! A model exposes, for every degree n it can enumerate, a finite basis of
//! the component R_n and the multiplication R_n x R_m -> R_{n+m} on basis
//! elements. The built-in families (Laurent, twisted Laurent, checkerboard,
//! polynomial) enumerate every degree; table models carry a declared window
//! and refuse degrees outside it rather than truncating silently.

mod fq;
pub mod ops;

pub use fq::FqData;
pub use ops::*;

use crate::error::{Error, Result};
use crate::field::{FieldTag, Scalar};
use crate::matrix::Matrix;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Checkerboard weight vector; deg(e_ij t^s) = 2s + V[i] - V[j].
const CHECKER_V: [i64; 3] = [0, 0, 1];

/// User-supplied structure constants on a finite degree window.
#[derive(Debug, Clone, PartialEq)]
pub struct TableData {
    pub window: (i64, i64),
    pub dims: BTreeMap<i64, usize>,
    /// (n, i, m, j) -> dense coefficient vector over basis(n + m).
    /// Missing keys mean the product of those basis elements is zero.
    pub mul: BTreeMap<(i64, usize, i64, usize), Vec<Scalar>>,
    /// Coordinates of 1 in basis(0).
    pub unit: Vec<Scalar>,
}

/// Central idempotent data for semisimple R_0, used for K0 bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Idempotent {
    /// Coordinates in basis(0).
    pub coeffs: Vec<Scalar>,
    /// k0-dimension of the simple right module of the corresponding block.
    pub simple_dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Family {
    Laurent,
    Polynomial,
    Checkerboard,
    TwistedLaurent(FqData),
    Table(TableData),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradedRing {
    field: FieldTag,
    family: Family,
    idempotents: Option<Vec<Idempotent>>,
}

/// Degree window validated at construction for the built-in families.
const BUILTIN_VALIDATION_WINDOW: (i64, i64) = (-6, 6);

impl GradedRing {
    pub fn laurent(field: FieldTag) -> Result<Arc<Self>> {
        let one = vec![Scalar::one(field)];
        let ring = GradedRing {
            field,
            family: Family::Laurent,
            idempotents: Some(vec![Idempotent { coeffs: one, simple_dim: 1 }]),
        };
        ring.finish_builtin()
    }

    pub fn polynomial(field: FieldTag) -> Result<Arc<Self>> {
        let one = vec![Scalar::one(field)];
        let ring = GradedRing {
            field,
            family: Family::Polynomial,
            idempotents: Some(vec![Idempotent { coeffs: one, simple_dim: 1 }]),
        };
        ring.finish_builtin()
    }

    pub fn checkerboard(field: FieldTag) -> Result<Arc<Self>> {
        // R_0 has basis e11, e12, e21, e22, e33 and splits as M_2 x k0.
        let mk = |pattern: [i64; 5]| pattern.iter().map(|&c| Scalar::from_i64(field, c)).collect();
        let ring = GradedRing {
            field,
            family: Family::Checkerboard,
            idempotents: Some(vec![
                Idempotent { coeffs: mk([1, 0, 0, 1, 0]), simple_dim: 2 },
                Idempotent { coeffs: mk([0, 0, 0, 0, 1]), simple_dim: 1 },
            ]),
        };
        ring.finish_builtin()
    }

    /// Twisted Laurent ring over F_p with coefficients in F_q, q = p^n;
    /// multiplication is (x u^a)(y u^b) = x phi^a(y) u^(a+b) with phi the
    /// p-power Frobenius.
    pub fn twisted_laurent(q: u64) -> Result<Arc<Self>> {
        let fq = FqData::new(q)?;
        let field = FieldTag::Fp(fq.p);
        let n = fq.n;
        let mut one = vec![Scalar::zero(field); n];
        one[0] = Scalar::one(field);
        let ring = GradedRing {
            field,
            family: Family::TwistedLaurent(fq),
            idempotents: Some(vec![Idempotent { coeffs: one, simple_dim: n }]),
        };
        ring.finish_builtin()
    }

    pub fn from_table(field: FieldTag, data: TableData) -> Result<Arc<Self>> {
        if data.window.0 > 0 || data.window.1 < 0 {
            return Err(Error::Schema("table window must contain degree 0".into()));
        }
        if data.unit.len() != data.dims.get(&0).copied().unwrap_or(0) {
            return Err(Error::Schema("unit coordinates do not match dim of degree 0".into()));
        }
        let window = data.window;
        let ring = GradedRing { field, family: Family::Table(data), idempotents: None };
        ring.validate_window(window.0, window.1)?;
        Ok(Arc::new(ring))
    }

    fn finish_builtin(self) -> Result<Arc<Self>> {
        self.validate_window(BUILTIN_VALIDATION_WINDOW.0, BUILTIN_VALIDATION_WINDOW.1)?;
        self.validate_idempotents()?;
        Ok(Arc::new(self))
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    /// Enumerable degree window; `None` means every degree is available.
    pub fn window(&self) -> Option<(i64, i64)> {
        match &self.family {
            Family::Table(t) => Some(t.window),
            _ => None,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match &self.family {
            Family::Laurent => "laurent",
            Family::Polynomial => "polynomial",
            Family::Checkerboard => "checkerboard",
            Family::TwistedLaurent(_) => "twisted_laurent",
            Family::Table(_) => "table",
        }
    }

    fn check_degree(&self, n: i64) -> Result<()> {
        if let Some((lo, hi)) = self.window() {
            if n < lo || n > hi {
                return Err(Error::WindowTooSmall { degree: n });
            }
        }
        Ok(())
    }

    pub fn dim(&self, n: i64) -> Result<usize> {
        self.check_degree(n)?;
        Ok(match &self.family {
            Family::Laurent => 1,
            Family::Polynomial => usize::from(n >= 0),
            Family::Checkerboard => checker_basis(n).len(),
            Family::TwistedLaurent(fq) => fq.n,
            Family::Table(t) => t.dims.get(&n).copied().unwrap_or(0),
        })
    }

    /// Sparse coordinates of e_i^(n) * e_j^(m) in basis(n + m).
    pub fn mul_basis(&self, n: i64, i: usize, m: i64, j: usize) -> Result<Vec<(usize, Scalar)>> {
        self.check_degree(n)?;
        self.check_degree(m)?;
        self.check_degree(n + m)?;
        debug_assert!(i < self.dim(n)? && j < self.dim(m)?);
        Ok(match &self.family {
            Family::Laurent => vec![(0, Scalar::one(self.field))],
            Family::Polynomial => vec![(0, Scalar::one(self.field))],
            Family::Checkerboard => {
                let (bi, bj, _s) = checker_basis(n)[i];
                let (ci, cj, _r) = checker_basis(m)[j];
                if bj != ci {
                    vec![]
                } else {
                    let target = checker_basis(n + m);
                    let pos = target
                        .iter()
                        .position(|&(x, y, _)| x == bi && y == cj)
                        .expect("checkerboard grading is closed under products");
                    vec![(pos, Scalar::one(self.field))]
                }
            }
            Family::TwistedLaurent(fq) => fq
                .twisted_product(i, n, j)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .map(|(k, c)| (k, Scalar::from_i64(self.field, c as i64)))
                .collect(),
            Family::Table(t) => match t.mul.get(&(n, i, m, j)) {
                None => vec![],
                Some(v) => v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect(),
            },
        })
    }

    /// Coordinates of 1 in basis(0).
    pub fn unit_coeffs(&self) -> Vec<Scalar> {
        match &self.family {
            Family::Laurent | Family::Polynomial => vec![Scalar::one(self.field)],
            Family::Checkerboard => [1, 0, 0, 1, 1].iter().map(|&c| Scalar::from_i64(self.field, c)).collect(),
            Family::TwistedLaurent(fq) => {
                let mut v = vec![Scalar::zero(self.field); fq.n];
                v[0] = Scalar::one(self.field);
                v
            }
            Family::Table(t) => t.unit.clone(),
        }
    }

    pub fn idempotents(&self) -> Option<&[Idempotent]> {
        self.idempotents.as_deref()
    }

    pub fn label(&self, n: i64, i: usize) -> String {
        match &self.family {
            Family::Laurent | Family::Polynomial => match n {
                0 => "1".into(),
                1 => "t".into(),
                _ => format!("t^{n}"),
            },
            Family::Checkerboard => {
                let (r, c, s) = checker_basis(n)[i];
                match s {
                    0 => format!("e{r}{c}"),
                    1 => format!("e{r}{c}*t"),
                    _ => format!("e{r}{c}*t^{s}"),
                }
            }
            Family::TwistedLaurent(_) => {
                let coeff = match i {
                    0 => "1".to_string(),
                    1 => "x".to_string(),
                    _ => format!("x^{i}"),
                };
                match (n, i) {
                    (0, _) => coeff,
                    (1, 0) => "u".into(),
                    (1, _) => format!("{coeff}*u"),
                    (_, 0) => format!("u^{n}"),
                    _ => format!("{coeff}*u^{n}"),
                }
            }
            Family::Table(_) => format!("b{n}_{i}"),
        }
    }

    /// Matrix of left multiplication by the homogeneous element with
    /// coordinates `coeffs` in basis(d), as a map R_m -> R_{m+d}.
    pub fn left_mul_matrix(&self, d: i64, coeffs: &[Scalar], m: i64) -> Result<Matrix> {
        let dm = self.dim(m)?;
        let dt = self.dim(m + d)?;
        let mut out = Matrix::zeros(self.field, dt, dm);
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..dm {
                for (k, s) in self.mul_basis(d, i, m, j)? {
                    let cur = out.get(k, j).add(&c.mul(&s));
                    out.set(k, j, cur);
                }
            }
        }
        Ok(out)
    }

    /// Matrix of right multiplication on R_n by the degree-0 element with
    /// coordinates `coeffs`; this is the right R_0-action on the component.
    pub fn right_mul_matrix(&self, n: i64, coeffs: &[Scalar]) -> Result<Matrix> {
        let dn = self.dim(n)?;
        let mut out = Matrix::zeros(self.field, dn, dn);
        for (a, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..dn {
                for (k, s) in self.mul_basis(n, j, 0, a)? {
                    let cur = out.get(k, j).add(&c.mul(&s));
                    out.set(k, j, cur);
                }
            }
        }
        Ok(out)
    }

    /// Checks associativity, unit and grading of the structure constants on
    /// every triple of degrees whose partial sums stay inside [lo, hi].
    pub fn validate_window(&self, lo: i64, hi: i64) -> Result<()> {
        let inside = |d: i64| d >= lo && d <= hi;
        let unit = self.unit_coeffs();
        if unit.len() != self.dim(0)? {
            return Err(Error::Schema("unit length does not match dim(0)".into()));
        }
        // unit law on every enumerated component
        for n in lo..=hi {
            let dn = self.dim(n)?;
            for i in 0..dn {
                let left = self.mul_coeffs(0, &sparse_from_dense(&unit), n, &[(i, Scalar::one(self.field))])?;
                let right = self.mul_coeffs(n, &[(i, Scalar::one(self.field))], 0, &sparse_from_dense(&unit))?;
                let expect = vec![(i, Scalar::one(self.field))];
                if normalize(left) != expect || normalize(right) != expect {
                    return Err(Error::Schema(format!("unit law fails on basis {i} of degree {n}")));
                }
            }
        }
        // associativity
        for n in lo..=hi {
            for m in lo..=hi {
                if !inside(n + m) {
                    continue;
                }
                for p in lo..=hi {
                    if !inside(m + p) || !inside(n + m + p) {
                        continue;
                    }
                    let (dn, dm, dp) = (self.dim(n)?, self.dim(m)?, self.dim(p)?);
                    for i in 0..dn {
                        for j in 0..dm {
                            let ij = self.mul_basis(n, i, m, j)?;
                            for k in 0..dp {
                                let jk = self.mul_basis(m, j, p, k)?;
                                let left = self.mul_coeffs(n + m, &ij, p, &[(k, Scalar::one(self.field))])?;
                                let right = self.mul_coeffs(n, &[(i, Scalar::one(self.field))], m + p, &jk)?;
                                if normalize(left) != normalize(right) {
                                    return Err(Error::Schema(format!(
                                        "associativity fails at degrees ({n}, {m}, {p}), basis ({i}, {j}, {k})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_idempotents(&self) -> Result<()> {
        let Some(idems) = &self.idempotents else { return Ok(()) };
        let d0 = self.dim(0)?;
        let unit = self.unit_coeffs();
        let mut total = vec![Scalar::zero(self.field); d0];
        for (a, e) in idems.iter().enumerate() {
            if e.coeffs.len() != d0 {
                return Err(Error::Schema("idempotent has wrong length".into()));
            }
            for (t, c) in total.iter_mut().zip(&e.coeffs) {
                *t = t.add(c);
            }
            for (b, f) in idems.iter().enumerate() {
                let prod = self.mul_coeffs(0, &sparse_from_dense(&e.coeffs), 0, &sparse_from_dense(&f.coeffs))?;
                let expect = if a == b { normalize(sparse_from_dense(&e.coeffs)) } else { vec![] };
                if normalize(prod) != expect {
                    return Err(Error::Schema("idempotents are not orthogonal idempotents".into()));
                }
            }
            // centrality inside R_0
            for i in 0..d0 {
                let ei = [(i, Scalar::one(self.field))];
                let le = self.mul_coeffs(0, &sparse_from_dense(&e.coeffs), 0, &ei)?;
                let re = self.mul_coeffs(0, &ei, 0, &sparse_from_dense(&e.coeffs))?;
                if normalize(le) != normalize(re) {
                    return Err(Error::Schema("idempotent is not central in degree 0".into()));
                }
            }
        }
        let total_sparse = normalize(sparse_from_dense(&total));
        if total_sparse != normalize(sparse_from_dense(&unit)) {
            return Err(Error::Schema("idempotents do not sum to the unit".into()));
        }
        Ok(())
    }

    /// Sparse product of sparse coordinate vectors in degrees n and m.
    fn mul_coeffs(
        &self,
        n: i64,
        a: &[(usize, Scalar)],
        m: i64,
        b: &[(usize, Scalar)],
    ) -> Result<Vec<(usize, Scalar)>> {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, c) in a {
            for (j, d) in b {
                let cd = c.mul(d);
                if cd.is_zero() {
                    continue;
                }
                for (k, s) in self.mul_basis(n, *i, m, *j)? {
                    let entry = acc.entry(k).or_insert_with(|| Scalar::zero(self.field));
                    *entry = entry.add(&cd.mul(&s));
                }
            }
        }
        Ok(acc.into_iter().collect())
    }
}

fn sparse_from_dense(v: &[Scalar]) -> Vec<(usize, Scalar)> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

fn normalize(v: Vec<(usize, Scalar)>) -> Vec<(usize, Scalar)> {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, c) in v {
        let tag = c.tag();
        let entry = acc.entry(i).or_insert_with(|| Scalar::zero(tag));
        *entry = entry.add(&c);
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Ordered basis of the checkerboard component: matrix positions (i, j)
/// in row-major order whose weight parity matches n, with the t-exponent
/// forced by the degree.
fn checker_basis(n: i64) -> Vec<(usize, usize, i64)> {
    let mut out = Vec::new();
    for i in 1..=3usize {
        for j in 1..=3usize {
            let w = n - CHECKER_V[i - 1] + CHECKER_V[j - 1];
            if w % 2 == 0 {
                out.push((i, j, w / 2));
            }
        }
    }
    out
}

/// Element of a graded ring: finitely many nonzero homogeneous components,
/// each stored as dense coordinates over the component basis.
#[derive(Debug, Clone)]
pub struct RingElement {
    ring: Arc<GradedRing>,
    support: BTreeMap<i64, Vec<Scalar>>,
}

impl RingElement {
    pub fn zero(ring: &Arc<GradedRing>) -> Self {
        RingElement { ring: ring.clone(), support: BTreeMap::new() }
    }

    pub fn unit(ring: &Arc<GradedRing>) -> Self {
        let coeffs = ring.unit_coeffs();
        RingElement::homogeneous(ring, 0, coeffs).expect("unit coordinates are valid")
    }

    pub fn homogeneous(ring: &Arc<GradedRing>, n: i64, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != ring.dim(n)? {
            return Err(Error::DimensionMismatch(format!(
                "degree {n} component has dimension {}, got {} coordinates",
                ring.dim(n)?,
                coeffs.len()
            )));
        }
        let mut e = RingElement::zero(ring);
        if coeffs.iter().any(|c| !c.is_zero()) {
            e.support.insert(n, coeffs);
        }
        Ok(e)
    }

    pub fn basis(ring: &Arc<GradedRing>, n: i64, i: usize) -> Result<Self> {
        let d = ring.dim(n)?;
        if i >= d {
            return Err(Error::DimensionMismatch(format!("basis index {i} out of range for degree {n}")));
        }
        let mut coeffs = vec![Scalar::zero(ring.field()); d];
        coeffs[i] = Scalar::one(ring.field());
        RingElement::homogeneous(ring, n, coeffs)
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support_degrees(&self) -> Vec<i64> {
        self.support.keys().copied().collect()
    }

    pub fn component(&self, n: i64) -> Option<&[Scalar]> {
        self.support.get(&n).map(|v| v.as_slice())
    }

    pub fn components(&self) -> impl Iterator<Item = (i64, &[Scalar])> {
        self.support.iter().map(|(n, v)| (*n, v.as_slice()))
    }

    fn same_ring(&self, other: &RingElement) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    fn prune(&mut self) {
        self.support.retain(|_, v| v.iter().any(|c| !c.is_zero()));
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (n, v) in &other.support {
            match out.support.get_mut(n) {
                None => {
                    out.support.insert(*n, v.clone());
                }
                Some(cur) => {
                    for (c, d) in cur.iter_mut().zip(v) {
                        *c = c.add(d);
                    }
                }
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn neg(&self) -> RingElement {
        let mut out = self.clone();
        for v in out.support.values_mut() {
            for c in v.iter_mut() {
                *c = c.neg();
            }
        }
        out
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> RingElement {
        if s.is_zero() {
            return RingElement::zero(&self.ring);
        }
        let mut out = self.clone();
        for v in out.support.values_mut() {
            for c in v.iter_mut() {
                *c = c.mul(s);
            }
        }
        out
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        let field = self.ring.field();
        let mut out: BTreeMap<i64, Vec<Scalar>> = BTreeMap::new();
        for (&n, a) in &self.support {
            for (&m, b) in &other.support {
                let target = out
                    .entry(n + m)
                    .or_insert_with(|| vec![Scalar::zero(field); self.ring.dim(n + m).unwrap_or(0)]);
                if target.len() != self.ring.dim(n + m)? {
                    return Err(Error::WindowTooSmall { degree: n + m });
                }
                for (i, c) in a.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (j, d) in b.iter().enumerate() {
                        if d.is_zero() {
                            continue;
                        }
                        let cd = c.mul(d);
                        for (k, s) in self.ring.mul_basis(n, i, m, j)? {
                            target[k] = target[k].add(&cd.mul(&s));
                        }
                    }
                }
            }
        }
        let mut e = RingElement { ring: self.ring.clone(), support: out };
        e.prune();
        Ok(e)
    }

    pub fn is_unit_element(&self) -> bool {
        *self == RingElement::unit(&self.ring)
    }
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.support == other.support
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, v) in &self.support {
            for (i, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                let label = self.ring.label(*n, i);
                if c.is_one() {
                    write!(f, "{label}")?;
                } else if label == "1" {
                    write!(f, "{c}")?;
                } else {
                    write!(f, "{c}*{label}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldTag;

    fn q() -> FieldTag {
        FieldTag::Q
    }

    #[test]
    fn laurent_components_are_lines() {
        let r = GradedRing::laurent(q()).unwrap();
        for n in -5..=5 {
            assert_eq!(r.dim(n).unwrap(), 1);
        }
        let t2 = RingElement::basis(&r, 2, 0).unwrap();
        let t3 = RingElement::basis(&r, 3, 0).unwrap();
        let t5 = RingElement::basis(&r, 5, 0).unwrap();
        assert_eq!(t2.mul(&t3).unwrap(), t5);
        let tm2 = RingElement::basis(&r, -2, 0).unwrap();
        assert!(t2.mul(&tm2).unwrap().is_unit_element());
    }

    #[test]
    fn polynomial_has_no_negative_degrees() {
        let r = GradedRing::polynomial(q()).unwrap();
        assert_eq!(r.dim(-1).unwrap(), 0);
        assert_eq!(r.dim(0).unwrap(), 1);
        assert_eq!(r.dim(4).unwrap(), 1);
        let t = RingElement::basis(&r, 1, 0).unwrap();
        assert_eq!(t.mul(&t).unwrap(), RingElement::basis(&r, 2, 0).unwrap());
    }

    #[test]
    fn checkerboard_dims_alternate_five_four() {
        let r = GradedRing::checkerboard(q()).unwrap();
        for n in -6..=6 {
            let expect = if n % 2 == 0 { 5 } else { 4 };
            assert_eq!(r.dim(n).unwrap(), expect, "degree {n}");
        }
        // even basis order: e11, e12, e21, e22, e33
        assert_eq!(r.label(0, 0), "e11");
        assert_eq!(r.label(0, 4), "e33");
        // odd basis order: e13, e23, e31, e32
        assert_eq!(r.label(1, 0), "e13*t");
        assert_eq!(r.label(1, 2), "e31");
        assert_eq!(r.label(-1, 0), "e13");
        assert_eq!(r.label(-1, 2), "e31*t^-1");
    }

    #[test]
    fn checkerboard_products_follow_matrix_units() {
        let r = GradedRing::checkerboard(q()).unwrap();
        // e13*t in degree 1 is index 0; e31*t^-1 in degree -1 is index 2.
        let a = RingElement::basis(&r, 1, 0).unwrap();
        let b = RingElement::basis(&r, -1, 2).unwrap();
        let e11 = RingElement::basis(&r, 0, 0).unwrap();
        assert_eq!(a.mul(&b).unwrap(), e11);
        // orthogonal pair: e13 * e23 = 0
        let c = RingElement::basis(&r, -1, 0).unwrap();
        let d = RingElement::basis(&r, -1, 1).unwrap();
        assert!(c.mul(&d).unwrap().is_zero());
    }

    #[test]
    fn twisted_laurent_f4_squares_coefficients() {
        let r = GradedRing::twisted_laurent(4).unwrap();
        assert_eq!(r.field(), FieldTag::Fp(2));
        for n in -4..=4 {
            assert_eq!(r.dim(n).unwrap(), 2);
        }
        // (x u)(x u) = x phi(x) u^2 = x(x+1) u^2 = (x^2 + x) u^2 = u^2
        // since x^2 = x + 1 in F_4, so x^2 + x = 1.
        let xu = RingElement::basis(&r, 1, 1).unwrap();
        let u2 = RingElement::basis(&r, 2, 0).unwrap();
        assert_eq!(xu.mul(&xu).unwrap(), u2);
        // u * x = phi(x) u = (x + 1) u
        let u = RingElement::basis(&r, 1, 0).unwrap();
        let x = RingElement::basis(&r, 0, 1).unwrap();
        let one_u = RingElement::basis(&r, 1, 0).unwrap();
        let x_u = RingElement::basis(&r, 1, 1).unwrap();
        assert_eq!(u.mul(&x).unwrap(), one_u.add(&x_u).unwrap());
    }

    #[test]
    fn ring_mismatch_is_rejected() {
        let a = GradedRing::laurent(q()).unwrap();
        let b = GradedRing::checkerboard(q()).unwrap();
        let x = RingElement::basis(&a, 1, 0).unwrap();
        let y = RingElement::basis(&b, 1, 0).unwrap();
        assert!(matches!(x.mul(&y), Err(Error::ModelMismatch)));
    }

    #[test]
    fn idempotents_validate() {
        let r = GradedRing::checkerboard(q()).unwrap();
        let idems = r.idempotents().unwrap();
        assert_eq!(idems.len(), 2);
        assert_eq!(idems[0].simple_dim, 2);
        assert_eq!(idems[1].simple_dim, 1);
    }

    #[test]
    fn left_mul_matrix_matches_element_product() {
        let r = GradedRing::checkerboard(q()).unwrap();
        // multiply by e13*t + e23*t on the degree -1 component
        let mut coeffs = vec![Scalar::zero(q()); 4];
        coeffs[0] = Scalar::one(q());
        coeffs[1] = Scalar::one(q());
        let m = r.left_mul_matrix(1, &coeffs, -1).unwrap();
        assert_eq!((m.rows(), m.cols()), (5, 4));
        let elt = RingElement::homogeneous(&r, 1, coeffs).unwrap();
        for j in 0..4 {
            let b = RingElement::basis(&r, -1, j).unwrap();
            let prod = elt.mul(&b).unwrap();
            let col = m.column(j);
            let expect = prod.component(0).map(|v| v.to_vec()).unwrap_or_else(|| vec![Scalar::zero(q()); 5]);
            assert_eq!(col, expect, "column {j}");
        }
    }

    #[test]
    fn table_round_trip_of_laurent_window() {
        let r = table_laurent((-3, 3));
        assert_eq!(r.dim(2).unwrap(), 1);
        assert!(matches!(r.dim(4), Err(Error::WindowTooSmall { degree: 4 })));
        let t = RingElement::basis(&r, 1, 0).unwrap();
        let t2 = RingElement::basis(&r, 2, 0).unwrap();
        assert_eq!(t.mul(&t).unwrap(), t2);
        assert!(matches!(t2.mul(&t2), Err(Error::WindowTooSmall { degree: 4 })));
    }

    #[test]
    fn table_rejects_broken_associativity() {
        let mut data = table_laurent_data((-2, 2));
        // corrupt one product: t * t = 2 t^2
        data.mul.insert((1, 0, 1, 0), vec![Scalar::from_i64(q(), 2)]);
        let err = GradedRing::from_table(q(), data).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    pub(crate) fn table_laurent_data(window: (i64, i64)) -> TableData {
        let mut dims = BTreeMap::new();
        let mut mul = BTreeMap::new();
        for n in window.0..=window.1 {
            dims.insert(n, 1usize);
            for m in window.0..=window.1 {
                if n + m >= window.0 && n + m <= window.1 {
                    mul.insert((n, 0, m, 0), vec![Scalar::one(q())]);
                }
            }
        }
        TableData { window, dims, mul, unit: vec![Scalar::one(q())] }
    }

    fn table_laurent(window: (i64, i64)) -> Arc<GradedRing> {
        GradedRing::from_table(q(), table_laurent_data(window)).unwrap()
    }
}
