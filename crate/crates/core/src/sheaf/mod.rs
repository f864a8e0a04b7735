//! Finite direct sums of twisting sheaves O(k, l) on the projective line of
//! a graded ring, morphisms between them, bounded chain complexes, cones and
//! the twist functors.
//!
//! A morphism O(k_j, l_j) -> O(k_i, l_i) is left multiplication by a ring
//! element supported in degrees [l_j - l_i, k_i - k_j]; that interval is
//! exactly what makes left multiplication carry the defining submodules of
//! the source into those of the target. Morphisms between sums are matrices
//! of such elements.

pub mod random;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::ring::{GradedRing, RingElement};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Formal direct sum of twisting sheaves, identified by twist parameters.
/// The empty sum is the zero object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistSum {
    summands: Vec<(i64, i64)>,
}

impl TwistSum {
    pub fn new(summands: Vec<(i64, i64)>) -> Self {
        TwistSum { summands }
    }

    pub fn zero() -> Self {
        TwistSum { summands: Vec::new() }
    }

    pub fn single(k: i64, l: i64) -> Self {
        TwistSum { summands: vec![(k, l)] }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn summands(&self) -> &[(i64, i64)] {
        &self.summands
    }

    pub fn twist(&self, a: i64, b: i64) -> TwistSum {
        TwistSum { summands: self.summands.iter().map(|&(k, l)| (k + a, l + b)).collect() }
    }

    pub fn direct_sum(&self, other: &TwistSum) -> TwistSum {
        let mut summands = self.summands.clone();
        summands.extend_from_slice(&other.summands);
        TwistSum { summands }
    }
}

/// A ring element together with the degree interval its support must stay
/// inside. Intervals may be empty (lo > hi), in which case only the zero
/// element fits.
#[derive(Debug, Clone, PartialEq)]
pub struct RangedElement {
    element: RingElement,
    lo: i64,
    hi: i64,
}

impl RangedElement {
    pub fn new(element: RingElement, lo: i64, hi: i64) -> Result<Self> {
        for n in element.support_degrees() {
            if n < lo || n > hi {
                return Err(Error::RangeViolation { row: 0, col: 0, lo, hi });
            }
        }
        Ok(RangedElement { element, lo, hi })
    }

    pub fn element(&self) -> &RingElement {
        &self.element
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn in_range(&self) -> bool {
        self.element.support_degrees().iter().all(|&n| n >= self.lo && n <= self.hi)
    }
}

/// Basis of the morphism space O(k, l) -> O(k2, l2): one ranged element per
/// component basis vector in the admissible degree interval.
pub fn hom_basis(
    ring: &Arc<GradedRing>,
    (k, l): (i64, i64),
    (k2, l2): (i64, i64),
) -> Result<Vec<RangedElement>> {
    let lo = l - l2;
    let hi = k2 - k;
    let mut out = Vec::new();
    for n in lo..=hi {
        for i in 0..ring.dim(n)? {
            out.push(RangedElement::new(RingElement::basis(ring, n, i)?, lo, hi)?);
        }
    }
    Ok(out)
}

/// Morphism between twist sums: a target x source matrix of ranged
/// multiplication elements.
#[derive(Debug, Clone, PartialEq)]
pub struct SheafMorphism {
    ring: Arc<GradedRing>,
    source: TwistSum,
    target: TwistSum,
    entries: Vec<Vec<RangedElement>>,
}

impl SheafMorphism {
    pub(crate) fn mandated_range(target: (i64, i64), source: (i64, i64)) -> (i64, i64) {
        (source.1 - target.1, target.0 - source.0)
    }

    /// Builds a morphism from raw entry elements, enforcing the range
    /// condition on every entry.
    pub fn new(
        ring: &Arc<GradedRing>,
        source: TwistSum,
        target: TwistSum,
        raw: Vec<Vec<RingElement>>,
    ) -> Result<Self> {
        if raw.len() != target.len() || raw.iter().any(|row| row.len() != source.len()) {
            return Err(Error::ShapeMismatch(format!(
                "entry matrix must be {} x {}",
                target.len(),
                source.len()
            )));
        }
        let mut entries = Vec::with_capacity(target.len());
        for (i, row) in raw.into_iter().enumerate() {
            let mut out_row = Vec::with_capacity(source.len());
            for (j, element) in row.into_iter().enumerate() {
                if element.ring() != ring {
                    return Err(Error::ModelMismatch);
                }
                let (lo, hi) = Self::mandated_range(target.summands[i], source.summands[j]);
                let ranged = RangedElement::new(element, lo, hi)
                    .map_err(|_| Error::RangeViolation { row: i, col: j, lo, hi })?;
                out_row.push(ranged);
            }
            entries.push(out_row);
        }
        Ok(SheafMorphism { ring: ring.clone(), source, target, entries })
    }

    /// Builds a morphism without checking ranges; `validate` reports the
    /// violations afterwards. Intended for tests of the validator itself.
    pub fn new_unchecked(
        ring: &Arc<GradedRing>,
        source: TwistSum,
        target: TwistSum,
        raw: Vec<Vec<RingElement>>,
    ) -> Result<Self> {
        if raw.len() != target.len() || raw.iter().any(|row| row.len() != source.len()) {
            return Err(Error::ShapeMismatch(format!(
                "entry matrix must be {} x {}",
                target.len(),
                source.len()
            )));
        }
        let entries = raw
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, element)| {
                        let (lo, hi) = Self::mandated_range(target.summands[i], source.summands[j]);
                        RangedElement { element, lo, hi }
                    })
                    .collect()
            })
            .collect();
        Ok(SheafMorphism { ring: ring.clone(), source, target, entries })
    }

    pub fn zero(ring: &Arc<GradedRing>, source: TwistSum, target: TwistSum) -> Self {
        let entries = target
            .summands
            .iter()
            .map(|&t| {
                source
                    .summands
                    .iter()
                    .map(|&s| {
                        let (lo, hi) = Self::mandated_range(t, s);
                        RangedElement { element: RingElement::zero(ring), lo, hi }
                    })
                    .collect()
            })
            .collect();
        SheafMorphism { ring: ring.clone(), source, target, entries }
    }

    pub fn identity(ring: &Arc<GradedRing>, sum: &TwistSum) -> Self {
        let mut m = Self::zero(ring, sum.clone(), sum.clone());
        for i in 0..sum.len() {
            m.entries[i][i].element = RingElement::unit(ring);
        }
        m
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn source(&self) -> &TwistSum {
        &self.source
    }

    pub fn target(&self) -> &TwistSum {
        &self.target
    }

    pub fn entry(&self, i: usize, j: usize) -> &RangedElement {
        &self.entries[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|row| row.iter().all(|e| e.element.is_zero()))
    }

    /// Re-checks the range condition on every entry.
    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if !e.in_range() {
                    return Err(Error::RangeViolation { row: i, col: j, lo: e.lo, hi: e.hi });
                }
            }
        }
        Ok(())
    }

    /// Matrix composition g.compose(f) = g after f; entries multiply in the
    /// ring. The result's ranges are implied by the outer shapes and are
    /// re-verified.
    pub fn compose(&self, f: &SheafMorphism) -> Result<SheafMorphism> {
        if f.target.summands != self.source.summands {
            return Err(Error::ShapeMismatch("inner shapes differ in composition".into()));
        }
        let mut raw = Vec::with_capacity(self.target.len());
        for i in 0..self.target.len() {
            let mut row = Vec::with_capacity(f.source.len());
            for j in 0..f.source.len() {
                let mut acc = RingElement::zero(&self.ring);
                for m in 0..self.source.len() {
                    acc = acc.add(&self.entries[i][m].element.mul(&f.entries[m][j].element)?)?;
                }
                row.push(acc);
            }
            raw.push(row);
        }
        SheafMorphism::new(&self.ring, f.source.clone(), self.target.clone(), raw)
    }

    pub fn add(&self, other: &SheafMorphism) -> Result<SheafMorphism> {
        if self.source.summands != other.source.summands || self.target.summands != other.target.summands {
            return Err(Error::ShapeMismatch("sum of morphisms with different shapes".into()));
        }
        let mut out = self.clone();
        for (row, orow) in out.entries.iter_mut().zip(&other.entries) {
            for (e, oe) in row.iter_mut().zip(orow) {
                e.element = e.element.add(&oe.element)?;
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> SheafMorphism {
        let mut out = self.clone();
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                e.element = e.element.neg();
            }
        }
        out
    }

    pub fn sub(&self, other: &SheafMorphism) -> Result<SheafMorphism> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> SheafMorphism {
        let mut out = self.clone();
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                e.element = e.element.scale(s);
            }
        }
        out
    }

    /// Twist functor on morphisms: shapes shift, entries stay.
    pub fn twist(&self, a: i64, b: i64) -> SheafMorphism {
        let mut out = self.clone();
        out.source = self.source.twist(a, b);
        out.target = self.target.twist(a, b);
        out
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &SheafMorphism) -> SheafMorphism {
        let source = self.source.direct_sum(&other.source);
        let target = self.target.direct_sum(&other.target);
        let mut out = Self::zero(&self.ring, source, target);
        for i in 0..self.target.len() {
            for j in 0..self.source.len() {
                out.entries[i][j].element = self.entries[i][j].element.clone();
            }
        }
        let (ro, co) = (self.target.len(), self.source.len());
        for i in 0..other.target.len() {
            for j in 0..other.source.len() {
                out.entries[ro + i][co + j].element = other.entries[i][j].element.clone();
            }
        }
        out
    }
}

/// Bounded chain complex of twist sums; the differential d_n maps level n to
/// level n - 1 and d o d = 0 is verified at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SheafComplex {
    ring: Arc<GradedRing>,
    levels: BTreeMap<i64, TwistSum>,
    diffs: BTreeMap<i64, SheafMorphism>,
}

impl SheafComplex {
    pub fn new(
        ring: &Arc<GradedRing>,
        levels: BTreeMap<i64, TwistSum>,
        diffs: BTreeMap<i64, SheafMorphism>,
    ) -> Result<Self> {
        let mut levels: BTreeMap<i64, TwistSum> =
            levels.into_iter().filter(|(_, s)| !s.is_empty()).collect();
        let mut kept = BTreeMap::new();
        for (n, d) in diffs {
            let src = levels.get(&n).cloned().unwrap_or_else(TwistSum::zero);
            let tgt = levels.get(&(n - 1)).cloned().unwrap_or_else(TwistSum::zero);
            if d.source.summands != src.summands || d.target.summands != tgt.summands {
                return Err(Error::ShapeMismatch(format!(
                    "differential at level {n} does not match the adjacent levels"
                )));
            }
            if d.ring() != ring {
                return Err(Error::ModelMismatch);
            }
            d.validate()?;
            if src.is_empty() || tgt.is_empty() || d.is_zero() {
                continue;
            }
            kept.insert(n, d);
        }
        let complex = SheafComplex { ring: ring.clone(), levels: std::mem::take(&mut levels), diffs: kept };
        complex.check_squares()?;
        Ok(complex)
    }

    fn check_squares(&self) -> Result<()> {
        for (&n, d) in &self.diffs {
            if let Some(prev) = self.diffs.get(&(n - 1)) {
                if !prev.compose(d)?.is_zero() {
                    return Err(Error::NotComplex { level: n });
                }
            }
        }
        Ok(())
    }

    /// Single object placed at one level.
    pub fn single(ring: &Arc<GradedRing>, level: i64, k: i64, l: i64) -> Self {
        let mut levels = BTreeMap::new();
        levels.insert(level, TwistSum::single(k, l));
        SheafComplex { ring: ring.clone(), levels, diffs: BTreeMap::new() }
    }

    /// Two-term complex spanning levels (top, top - 1) with the given
    /// differential.
    pub fn from_morphism(top: i64, d: SheafMorphism) -> Result<Self> {
        let ring = d.ring().clone();
        let mut levels = BTreeMap::new();
        levels.insert(top, d.source().clone());
        levels.insert(top - 1, d.target().clone());
        let mut diffs = BTreeMap::new();
        diffs.insert(top, d);
        SheafComplex::new(&ring, levels, diffs)
    }

    pub fn zero_complex(ring: &Arc<GradedRing>) -> Self {
        SheafComplex { ring: ring.clone(), levels: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> impl Iterator<Item = (i64, &TwistSum)> {
        self.levels.iter().map(|(n, s)| (*n, s))
    }

    pub fn level(&self, n: i64) -> TwistSum {
        self.levels.get(&n).cloned().unwrap_or_else(TwistSum::zero)
    }

    pub fn min_level(&self) -> Option<i64> {
        self.levels.keys().next().copied()
    }

    pub fn max_level(&self) -> Option<i64> {
        self.levels.keys().next_back().copied()
    }

    pub fn diff(&self, n: i64) -> Option<&SheafMorphism> {
        self.diffs.get(&n)
    }

    /// The differential at level n, materialized with correct shapes even
    /// when absent (zero).
    pub fn diff_or_zero(&self, n: i64) -> SheafMorphism {
        match self.diffs.get(&n) {
            Some(d) => d.clone(),
            None => SheafMorphism::zero(&self.ring, self.level(n), self.level(n - 1)),
        }
    }

    pub fn twist(&self, a: i64, b: i64) -> SheafComplex {
        SheafComplex {
            ring: self.ring.clone(),
            levels: self.levels.iter().map(|(&n, s)| (n, s.twist(a, b))).collect(),
            diffs: self.diffs.iter().map(|(&n, d)| (n, d.twist(a, b))).collect(),
        }
    }

    /// Homological shift: level n of the result is level n - s of the input;
    /// differentials pick up the sign (-1)^s.
    pub fn shift(&self, s: i64) -> SheafComplex {
        let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
        let levels = self.levels.iter().map(|(&n, x)| (n + s, x.clone())).collect();
        let diffs = self
            .diffs
            .iter()
            .map(|(&n, d)| (n + s, if sign == 1 { d.clone() } else { d.neg() }))
            .collect();
        SheafComplex { ring: self.ring.clone(), levels, diffs }
    }

    pub fn direct_sum(&self, other: &SheafComplex) -> Result<SheafComplex> {
        if self.ring != other.ring {
            return Err(Error::ModelMismatch);
        }
        let mut levels = BTreeMap::new();
        let lo = self.min_level().into_iter().chain(other.min_level()).min();
        let hi = self.max_level().into_iter().chain(other.max_level()).max();
        let (Some(lo), Some(hi)) = (lo, hi) else { return Ok(self.clone()) };
        for n in lo..=hi {
            let s = self.level(n).direct_sum(&other.level(n));
            if !s.is_empty() {
                levels.insert(n, s);
            }
        }
        let mut diffs = BTreeMap::new();
        for n in lo..=hi {
            if self.diffs.contains_key(&n) || other.diffs.contains_key(&n) {
                diffs.insert(n, self.diff_or_zero(n).direct_sum(&other.diff_or_zero(n)));
            }
        }
        SheafComplex::new(&self.ring, levels, diffs)
    }

    /// Checks that every summand (k, l) at every level satisfies k + l >= 0,
    /// the region where global sections see the whole object.
    pub fn check_nonnegative_twists(&self) -> Result<()> {
        for (&n, sum) in &self.levels {
            for (idx, &(k, l)) in sum.summands().iter().enumerate() {
                if k + l < 0 {
                    return Err(Error::NotVect0 { level: n, index: idx, sum: k + l });
                }
            }
        }
        Ok(())
    }

    /// Re-runs all construction-time validation.
    pub fn validate(&self) -> Result<()> {
        for (&n, d) in &self.diffs {
            d.validate()?;
            if d.source().summands != self.level(n).summands
                || d.target().summands != self.level(n - 1).summands
            {
                return Err(Error::ShapeMismatch(format!("differential shape at level {n}")));
            }
        }
        self.check_squares()
    }
}

/// Degreewise map of complexes commuting with the differentials.
#[derive(Debug, Clone)]
pub struct ChainMap {
    source: SheafComplex,
    target: SheafComplex,
    maps: BTreeMap<i64, SheafMorphism>,
}

impl ChainMap {
    pub fn new(
        source: SheafComplex,
        target: SheafComplex,
        maps: BTreeMap<i64, SheafMorphism>,
    ) -> Result<Self> {
        let maps: BTreeMap<i64, SheafMorphism> =
            maps.into_iter().filter(|(_, f)| !f.source().is_empty() && !f.target().is_empty()).collect();
        for (&n, f) in &maps {
            if f.source().summands != source.level(n).summands
                || f.target().summands != target.level(n).summands
            {
                return Err(Error::ShapeMismatch(format!("chain map component at level {n}")));
            }
            f.validate()?;
        }
        let cm = ChainMap { source, target, maps };
        cm.check_commutes()?;
        Ok(cm)
    }

    pub fn zero(source: SheafComplex, target: SheafComplex) -> Self {
        ChainMap { source, target, maps: BTreeMap::new() }
    }

    /// The identity chain map on a complex.
    pub fn identity(c: &SheafComplex) -> Self {
        let maps = c
            .levels()
            .map(|(n, s)| (n, SheafMorphism::identity(c.ring(), s)))
            .collect();
        ChainMap { source: c.clone(), target: c.clone(), maps }
    }

    pub fn source(&self) -> &SheafComplex {
        &self.source
    }

    pub fn target(&self) -> &SheafComplex {
        &self.target
    }

    pub fn map_or_zero(&self, n: i64) -> SheafMorphism {
        match self.maps.get(&n) {
            Some(f) => f.clone(),
            None => SheafMorphism::zero(self.source.ring(), self.source.level(n), self.target.level(n)),
        }
    }

    fn check_commutes(&self) -> Result<()> {
        let levels: Vec<i64> = self
            .source
            .levels()
            .map(|(n, _)| n)
            .chain(self.target.levels().map(|(n, _)| n))
            .collect();
        for &n in &levels {
            let lhs = self.target.diff_or_zero(n).compose(&self.map_or_zero(n))?;
            let rhs = self.map_or_zero(n - 1).compose(&self.source.diff_or_zero(n))?;
            if !lhs.sub(&rhs)?.is_zero() {
                return Err(Error::NotChainMap);
            }
        }
        Ok(())
    }
}

/// Mapping cone: level n is target_n ++ source_{n-1}, with differential
/// (y, x) -> (d y + f x, -d x).
pub fn cone(f: &ChainMap) -> Result<SheafComplex> {
    let ring = f.source.ring().clone();
    let lo = [f.source.min_level().map(|m| m + 1), f.target.min_level()]
        .into_iter()
        .flatten()
        .min();
    let hi = [f.source.max_level().map(|m| m + 1), f.target.max_level()]
        .into_iter()
        .flatten()
        .max();
    let (Some(lo), Some(hi)) = (lo, hi) else { return Ok(SheafComplex::zero_complex(&ring)) };
    let mut levels = BTreeMap::new();
    for n in lo..=hi {
        let s = f.target.level(n).direct_sum(&f.source.level(n - 1));
        if !s.is_empty() {
            levels.insert(n, s);
        }
    }
    let mut diffs = BTreeMap::new();
    for n in lo..=hi {
        let src = f.target.level(n).direct_sum(&f.source.level(n - 1));
        let tgt = f.target.level(n - 1).direct_sum(&f.source.level(n - 2));
        if src.is_empty() || tgt.is_empty() {
            continue;
        }
        let dy = f.target.diff_or_zero(n);
        let fx = f.map_or_zero(n - 1);
        let dx = f.source.diff_or_zero(n - 1).neg();
        let (ty, sy) = (f.target.level(n - 1).len(), f.target.level(n).len());
        let (tx, sx) = (f.source.level(n - 2).len(), f.source.level(n - 1).len());
        let mut raw = vec![vec![RingElement::zero(&ring); sy + sx]; ty + tx];
        for i in 0..ty {
            for j in 0..sy {
                raw[i][j] = dy.entry(i, j).element().clone();
            }
            for j in 0..sx {
                raw[i][sy + j] = fx.entry(i, j).element().clone();
            }
        }
        for i in 0..tx {
            for j in 0..sx {
                raw[ty + i][sy + j] = dx.entry(i, j).element().clone();
            }
        }
        diffs.insert(n, SheafMorphism::new(&ring, src, tgt, raw)?);
    }
    SheafComplex::new(&ring, levels, diffs)
}

/// Bounded complex of finite-rank free modules over the degree-0 component,
/// with differentials given by matrices of degree-0 ring elements.
#[derive(Debug, Clone, PartialEq)]
pub struct R0FreeComplex {
    ring: Arc<GradedRing>,
    ranks: BTreeMap<i64, usize>,
    diffs: BTreeMap<i64, Vec<Vec<RingElement>>>,
}

impl R0FreeComplex {
    pub fn new(
        ring: &Arc<GradedRing>,
        ranks: BTreeMap<i64, usize>,
        diffs: BTreeMap<i64, Vec<Vec<RingElement>>>,
    ) -> Result<Self> {
        let ranks: BTreeMap<i64, usize> = ranks.into_iter().filter(|(_, r)| *r > 0).collect();
        let rank_of = |n: i64| ranks.get(&n).copied().unwrap_or(0);
        let mut kept = BTreeMap::new();
        for (n, m) in diffs {
            if m.len() != rank_of(n - 1) || m.iter().any(|row| row.len() != rank_of(n)) {
                return Err(Error::ShapeMismatch(format!("differential shape at level {n}")));
            }
            for row in &m {
                for e in row {
                    if e.ring() != ring {
                        return Err(Error::ModelMismatch);
                    }
                    if e.support_degrees().iter().any(|&d| d != 0) {
                        return Err(Error::ShapeMismatch(
                            "free-module differential entries must be homogeneous of degree 0".into(),
                        ));
                    }
                }
            }
            if rank_of(n) > 0 && rank_of(n - 1) > 0 {
                kept.insert(n, m);
            }
        }
        Ok(R0FreeComplex { ring: ring.clone(), ranks, diffs: kept })
    }

    /// Rank-one free module concentrated in level 0.
    pub fn point(ring: &Arc<GradedRing>) -> Self {
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 1);
        R0FreeComplex { ring: ring.clone(), ranks, diffs: BTreeMap::new() }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn ranks(&self) -> &BTreeMap<i64, usize> {
        &self.ranks
    }

    pub fn diffs(&self) -> &BTreeMap<i64, Vec<Vec<RingElement>>> {
        &self.diffs
    }
}

/// The canonical-sheaves functor: tensors a free-module complex with
/// O(k, l), sending a rank-r level to O(k, l)^r and keeping the matrices.
pub fn psi(k: i64, l: i64, c: &R0FreeComplex) -> Result<SheafComplex> {
    let ring = c.ring().clone();
    let levels: BTreeMap<i64, TwistSum> = c
        .ranks()
        .iter()
        .map(|(&n, &r)| (n, TwistSum::new(vec![(k, l); r])))
        .collect();
    let mut diffs = BTreeMap::new();
    for (&n, m) in c.diffs() {
        let src = levels.get(&n).cloned().unwrap_or_else(TwistSum::zero);
        let tgt = levels.get(&(n - 1)).cloned().unwrap_or_else(TwistSum::zero);
        diffs.insert(n, SheafMorphism::new(&ring, src, tgt, m.clone())?);
    }
    SheafComplex::new(&ring, levels, diffs)
}

/// The three-term sequence O(k,l) -> O(k+1,l) (+) O(k,l+1) -> O(k+1,l+1)
/// with unit inclusions and the sign pattern (top: (1,1); bottom: (-1,1)),
/// together with an exactness verdict obtained degreewise on a window
/// covering [-|k|-|l|-3, |k|+|l|+3].
pub fn cartesian_sequence(ring: &Arc<GradedRing>, k: i64, l: i64) -> Result<(SheafComplex, bool)> {
    let one = RingElement::unit(ring);
    let top = TwistSum::single(k, l);
    let mid = TwistSum::new(vec![(k + 1, l), (k, l + 1)]);
    let bot = TwistSum::single(k + 1, l + 1);
    let d2 = SheafMorphism::new(ring, top.clone(), mid.clone(), vec![vec![one.clone()], vec![one.clone()]])?;
    let d1 = SheafMorphism::new(ring, mid.clone(), bot.clone(), vec![vec![one.neg(), one.clone()]])?;
    let mut levels = BTreeMap::new();
    levels.insert(2, top);
    levels.insert(1, mid);
    levels.insert(0, bot);
    let mut diffs = BTreeMap::new();
    diffs.insert(2, d2);
    diffs.insert(1, d1);
    let complex = SheafComplex::new(ring, levels, diffs)?;
    let radius = k.abs() + l.abs() + 3;
    let exact = sequence_is_exact(&complex, -radius, radius)?;
    Ok((complex, exact))
}

#[derive(Clone, Copy)]
enum Decoration {
    Minus,
    Zero,
    Plus,
}

fn decorated_includes(decor: Decoration, (k, l): (i64, i64), n: i64) -> bool {
    match decor {
        Decoration::Minus => n <= k,
        Decoration::Zero => true,
        Decoration::Plus => n >= -l,
    }
}

/// Matrix of the degree-n strand of a morphism whose entries are homogeneous
/// of degree 0, restricted to one defining submodule of each side.
fn decorated_matrix(f: &SheafMorphism, decor: Decoration, n: i64) -> Result<Matrix> {
    let ring = f.ring();
    let d = ring.dim(n)?;
    let src: Vec<usize> = (0..f.source().len())
        .filter(|&j| decorated_includes(decor, f.source().summands()[j], n))
        .collect();
    let tgt: Vec<usize> = (0..f.target().len())
        .filter(|&i| decorated_includes(decor, f.target().summands()[i], n))
        .collect();
    let mut out = Matrix::zeros(ring.field(), tgt.len() * d, src.len() * d);
    for (bi, &i) in tgt.iter().enumerate() {
        for (bj, &j) in src.iter().enumerate() {
            let e = f.entry(i, j).element();
            debug_assert!(e.support_degrees().iter().all(|&m| m == 0));
            let Some(coeffs) = e.component(0) else { continue };
            let block = ring.left_mul_matrix(0, coeffs, n)?;
            for r in 0..d {
                for c in 0..d {
                    let v = block.get(r, c).clone();
                    if !v.is_zero() {
                        out.set(bi * d + r, bj * d + c, v);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Degreewise exactness of a three-term complex (levels 2, 1, 0) with
/// degree-0 differential entries: injective at the top, image = kernel in
/// the middle, surjective at the bottom, on each strand of each defining
/// submodule over [lo, hi].
fn sequence_is_exact(c: &SheafComplex, lo: i64, hi: i64) -> Result<bool> {
    let d2 = c.diff_or_zero(2);
    let d1 = c.diff_or_zero(1);
    for n in lo..=hi {
        for decor in [Decoration::Minus, Decoration::Zero, Decoration::Plus] {
            let m2 = decorated_matrix(&d2, decor, n)?;
            let m1 = decorated_matrix(&d1, decor, n)?;
            let (r2, r1) = (m2.rank(), m1.rank());
            if r2 != m2.cols() || r1 != m1.rows() || r2 + r1 != m2.rows() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
