//! Hypercohomology of bounded complexes of twist sums.
//!
//! The covering of the projective line resolves every twist sum O by
//! 0 -> H^0(O) -> O^- (+) O^+ -> O^0 -> H^1(O) -> 0, and the homology of a
//! complex Y of twist sums is the homology of the totalisation of that
//! two-row double complex.  The rows are infinite-dimensional, so they are
//! truncated to a finite internal-degree window; stability of the answer
//! under enlarging the window certifies the truncation.
//!
//! Instead of materialising the truncated total complex this module cancels
//! the contractible part first.  The column at level j retracts onto
//! H^0(L_j) (+) H^1(L_j), and transferring the horizontal differential along
//! the retraction leaves the small complex
//!
//!   R_j = H^0(L_j) (+) H^1(L_{j+1})
//!
//! with differential blocks H^0 -> H^0 (plain multiplication), H^1 -> H^1
//! (multiplication followed by the band projection, negated), and one
//! correction term H^1(L_{j+1}) -> H^0(L_{j-1}): multiply by d_{j+1}, keep
//! the part in degrees above the middle band, multiply by d_j and read off
//! the band coordinates.  All higher correction terms vanish because the
//! splitting of the column map has no overlap with itself, so the small
//! complex has exactly the homology of the truncated totalisation.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{
    band0, band1, collect_classes, complex_homology_dims, mult_into, K0Class, SpaceLayout,
};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::GradedRing;
use crate::sheaf::{SheafComplex, SheafMorphism, TwistSum};

/// Per-total-degree homology of a complex of twist sums, with the window on
/// which the answer was certified stable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypercohResult {
    pub dims: BTreeMap<i64, usize>,
    pub classes: BTreeMap<i64, K0Class>,
    pub window: (i64, i64),
}

const DEFAULT_CAP: i64 = 16;

/// Initial truncation window: the span of the summand parameters padded by
/// the total degree spread of the differentials plus one.
pub fn initial_window(y: &SheafComplex) -> (i64, i64) {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for (_, sum) in y.levels() {
        for &(k, l) in sum.summands() {
            lo = lo.min(-l);
            hi = hi.max(k);
        }
    }
    if lo == i64::MAX {
        return (0, -1);
    }
    let mut spread = 0i64;
    for (n, _) in y.levels() {
        if let Some(d) = y.diff(n) {
            let mut width = 0i64;
            for &t in d.target().summands() {
                for &s in d.source().summands() {
                    let (rl, rh) = SheafMorphism::mandated_range(t, s);
                    if rl <= rh {
                        width = width.max(rh - rl + 1);
                    }
                }
            }
            spread += width;
        }
    }
    (lo - spread - 1, hi + spread + 1)
}

/// Hypercohomology with the default window policy: start from
/// `initial_window`, certify by recomputation at the enlarged window, give
/// up after growing each end by 16.
pub fn hypercoh(y: &SheafComplex) -> Result<HypercohResult> {
    hypercoh_windowed(y, initial_window(y), DEFAULT_CAP)
}

/// Hypercohomology over an explicit starting window.  The window grows by 4
/// on each side until two consecutive computations report the same
/// dimensions; growing past `cap` raises TruncationUnstable.
pub fn hypercoh_windowed(y: &SheafComplex, window: (i64, i64), cap: i64) -> Result<HypercohResult> {
    let mut w = window;
    let mut cur = reduced_homology(y, w)?;
    let mut extra = 0i64;
    loop {
        let w2 = (w.0 - 4, w.1 + 4);
        let next = reduced_homology(y, w2)?;
        if cur.0 == next.0 {
            return Ok(HypercohResult { dims: next.0, classes: next.1, window: w2 });
        }
        extra += 4;
        if extra > cap {
            return Err(Error::TruncationUnstable);
        }
        w = w2;
        cur = next;
    }
}

fn clip(iv: (i64, i64), w: (i64, i64)) -> (i64, i64) {
    (iv.0.max(w.0), iv.1.min(w.1))
}

fn band_layout(
    ring: &Arc<GradedRing>,
    sum: &TwistSum,
    q: u8,
    w: (i64, i64),
) -> Result<SpaceLayout> {
    let intervals: Vec<(i64, i64)> = sum
        .summands()
        .iter()
        .map(|&(k, l)| clip(if q == 0 { band0(k, l) } else { band1(k, l) }, w))
        .collect();
    SpaceLayout::new(ring, &intervals)
}

/// Degrees of the middle level that the correction term can pass through:
/// per summand, the part of the covering image above the section band that
/// products out of the upper H^1 band can reach.
fn correction_layout(
    ring: &Arc<GradedRing>,
    mid: &TwistSum,
    upper: &TwistSum,
    w: (i64, i64),
) -> Result<SpaceLayout> {
    let mut intervals = Vec::with_capacity(mid.summands().len());
    for &(k, l) in mid.summands() {
        let mut reach: Option<(i64, i64)> = None;
        for &s in upper.summands() {
            let (blo, bhi) = band1(s.0, s.1);
            if blo > bhi {
                continue;
            }
            let (rl, rh) = SheafMorphism::mandated_range((k, l), s);
            if rl > rh {
                continue;
            }
            let iv = (blo + rl, bhi + rh);
            reach = Some(match reach {
                None => iv,
                Some((a, b)) => (a.min(iv.0), b.max(iv.1)),
            });
        }
        let plus_start = (k + 1).max(-l);
        intervals.push(match reach {
            Some((a, b)) => clip((a.max(plus_start), b), w),
            None => (1, 0),
        });
    }
    SpaceLayout::new(ring, &intervals)
}

type Reduced = (BTreeMap<i64, usize>, BTreeMap<i64, K0Class>);

fn reduced_homology(y: &SheafComplex, w: (i64, i64)) -> Result<Reduced> {
    let ring = y.ring();
    let (min_l, max_l) = match (y.min_level(), y.max_level()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok((BTreeMap::new(), BTreeMap::new())),
    };
    let mut h0: BTreeMap<i64, SpaceLayout> = BTreeMap::new();
    let mut h1: BTreeMap<i64, SpaceLayout> = BTreeMap::new();
    for j in (min_l - 1)..=max_l {
        h0.insert(j, band_layout(ring, &y.level(j), 0, w)?);
    }
    for j in min_l..=(max_l + 1) {
        h1.insert(j, band_layout(ring, &y.level(j), 1, w)?);
    }
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for j in (min_l - 1)..=max_l {
        dims.insert(j, h0[&j].total() + h1[&(j + 1)].total());
    }
    let mut diffs: BTreeMap<i64, Matrix> = BTreeMap::new();
    for j in min_l..=max_l {
        let rows = dims[&(j - 1)];
        let cols = dims[&j];
        if rows == 0 || cols == 0 {
            continue;
        }
        let dj = y.diff_or_zero(j);
        let dj1 = y.diff_or_zero(j + 1);
        let a = mult_into(&dj, &h0[&j], &h0[&(j - 1)])?;
        let b = mult_into(&dj1, &h1[&(j + 1)], &h1[&j])?;
        let c = if h1[&(j + 1)].total() == 0 || h0[&(j - 1)].total() == 0 {
            Matrix::zeros(ring.field(), h0[&(j - 1)].total(), h1[&(j + 1)].total())
        } else {
            let mid = correction_layout(ring, &y.level(j), &y.level(j + 1), w)?;
            let up = mult_into(&dj1, &h1[&(j + 1)], &mid)?;
            let down = mult_into(&dj, &mid, &h0[&(j - 1)])?;
            down.mul(&up)
        };
        let zero = Matrix::zeros(ring.field(), h1[&j].total(), h0[&j].total());
        let d = a.hstack(&c).vstack(&zero.hstack(&b.neg()));
        diffs.insert(j, d);
    }
    #[cfg(debug_assertions)]
    for j in min_l..=max_l {
        if let (Some(d), Some(up)) = (diffs.get(&j), diffs.get(&(j + 1))) {
            debug_assert!(d.mul(up).is_zero(), "transferred differential does not square to zero at level {j}");
        }
    }
    let hom = complex_homology_dims(&dims, &diffs);
    let classes = collect_classes(ring, &dims, &diffs, |coeffs| {
        let mut out = BTreeMap::new();
        for (&j, l0) in &h0 {
            let p0 = l0.right_action(coeffs).expect("components were already enumerated");
            let p1 = h1[&(j + 1)].right_action(coeffs).expect("components were already enumerated");
            out.insert(j, p0.direct_sum(&p1));
        }
        out
    })?;
    Ok((hom, classes))
}
