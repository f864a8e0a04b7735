//! Seeded generators for test data: random morphisms, automorphisms built
//! from unipotent and diagonal parts (with exact inverses), and random
//! bounded complexes whose d o d = 0 holds by construction. A complex is
//! generated as a direct sum of split pieces and then conjugated levelwise
//! by random automorphisms, so validity never depends on rejection sampling.

use crate::error::{Error, Result};
use crate::field::{random_scalar, FieldTag, Scalar};
use crate::ring::{GradedRing, RingElement};
use crate::sheaf::{hom_basis, ChainMap, SheafComplex, SheafMorphism, TwistSum};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Random element of the morphism space between two twisting sheaves:
/// a small-coefficient combination of the hom basis.
pub fn random_hom_element(
    ring: &Arc<GradedRing>,
    rng: &mut ChaCha8Rng,
    src: (i64, i64),
    tgt: (i64, i64),
) -> Result<RingElement> {
    let mut acc = RingElement::zero(ring);
    for b in hom_basis(ring, src, tgt)? {
        let c = random_scalar(rng, ring.field());
        if !c.is_zero() {
            acc = acc.add(&b.element().scale(&c))?;
        }
    }
    Ok(acc)
}

/// Random morphism between two twist sums.
pub fn random_morphism(
    ring: &Arc<GradedRing>,
    rng: &mut ChaCha8Rng,
    source: &TwistSum,
    target: &TwistSum,
) -> Result<SheafMorphism> {
    let mut raw = Vec::with_capacity(target.len());
    for &t in target.summands() {
        let mut row = Vec::with_capacity(source.len());
        for &s in source.summands() {
            row.push(random_hom_element(ring, rng, s, t)?);
        }
        raw.push(row);
    }
    SheafMorphism::new(ring, source.clone(), target.clone(), raw)
}

fn random_unit(rng: &mut ChaCha8Rng, field: FieldTag) -> Scalar {
    loop {
        let c = random_scalar(rng, field);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Random automorphism of a twist sum together with its exact inverse:
/// a diagonal of nonzero scalars composed with a unipotent upper-triangular
/// morphism I + N, inverted through the finite geometric series.
pub fn random_automorphism(
    ring: &Arc<GradedRing>,
    rng: &mut ChaCha8Rng,
    sum: &TwistSum,
) -> Result<(SheafMorphism, SheafMorphism)> {
    let n = sum.len();
    let id = SheafMorphism::identity(ring, sum);
    // strictly upper-triangular part
    let mut raw = vec![vec![RingElement::zero(ring); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            raw[i][j] = random_hom_element(ring, rng, sum.summands()[j], sum.summands()[i])?;
        }
    }
    let nil = SheafMorphism::new(ring, sum.clone(), sum.clone(), raw)?;
    let unipotent = id.add(&nil)?;
    // (I + N)^{-1} = I - N + N^2 - ...
    let mut inv = id.clone();
    let mut term = nil.clone();
    let mut sign = true;
    for _ in 1..n {
        if term.is_zero() {
            break;
        }
        inv = if sign { inv.sub(&term)? } else { inv.add(&term)? };
        sign = !sign;
        term = term.compose(&nil)?;
    }
    // diagonal of units
    let mut draw = vec![vec![RingElement::zero(ring); n]; n];
    let mut draw_inv = vec![vec![RingElement::zero(ring); n]; n];
    for i in 0..n {
        let c = random_unit(rng, ring.field());
        draw[i][i] = RingElement::unit(ring).scale(&c);
        draw_inv[i][i] = RingElement::unit(ring).scale(&c.inv());
    }
    let diag = SheafMorphism::new(ring, sum.clone(), sum.clone(), draw)?;
    let diag_inv = SheafMorphism::new(ring, sum.clone(), sum.clone(), draw_inv)?;
    let u = diag.compose(&unipotent)?;
    let u_inv = inv.compose(&diag_inv)?;
    debug_assert!(u.compose(&u_inv)?.sub(&id)?.is_zero());
    Ok((u, u_inv))
}

fn random_twist(rng: &mut ChaCha8Rng, bounds: (i64, i64), nonnegative_sum: bool) -> (i64, i64) {
    let (lo, hi) = bounds;
    if nonnegative_sum {
        let k = rng.gen_range(lo.max(-hi)..=hi);
        let l = rng.gen_range(lo.max(-k)..=hi);
        (k, l)
    } else {
        (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi))
    }
}

fn random_complex_impl(
    ring: &Arc<GradedRing>,
    length: i64,
    max_summands: usize,
    twist_bounds: (i64, i64),
    seed: u64,
    nonnegative_sum: bool,
) -> Result<SheafComplex> {
    let (lo, hi) = twist_bounds;
    if lo > hi || (nonnegative_sum && hi < 0) {
        return Err(Error::Schema("twist bounds leave no admissible summand".into()));
    }
    let length = length.max(0);
    let max_summands = max_summands.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    let mut acc = SheafComplex::zero_complex(ring);
    let budget = rng.gen_range(1..=max_summands.max(2));
    for attempt in 0..(budget * 3) {
        let make_pair = length > 0 && rng.gen_bool(0.6);
        if make_pair {
            let top = rng.gen_range(1..=length);
            if *counts.get(&top).unwrap_or(&0) >= max_summands
                || *counts.get(&(top - 1)).unwrap_or(&0) >= max_summands
            {
                continue;
            }
            let s = random_twist(&mut rng, twist_bounds, nonnegative_sum);
            let t = random_twist(&mut rng, twist_bounds, nonnegative_sum);
            let entry = random_hom_element(ring, &mut rng, s, t)?;
            let d = SheafMorphism::new(ring, TwistSum::single(s.0, s.1), TwistSum::single(t.0, t.1), vec![vec![entry]])?;
            let piece = SheafComplex::from_morphism(top, d)?;
            acc = acc.direct_sum(&piece)?;
            *counts.entry(top).or_insert(0) += 1;
            *counts.entry(top - 1).or_insert(0) += 1;
        } else {
            let level = rng.gen_range(0..=length);
            if *counts.get(&level).unwrap_or(&0) >= max_summands {
                continue;
            }
            let (k, l) = random_twist(&mut rng, twist_bounds, nonnegative_sum);
            acc = acc.direct_sum(&SheafComplex::single(ring, level, k, l))?;
            *counts.entry(level).or_insert(0) += 1;
        }
        if counts.values().sum::<usize>() >= budget || attempt + 1 == budget * 3 {
            break;
        }
    }
    if acc.is_zero() {
        let (k, l) = random_twist(&mut rng, (lo, hi), nonnegative_sum);
        acc = SheafComplex::single(ring, 0, k, l);
    }
    conjugate_levelwise(&acc, &mut rng)
}

/// Replaces d_n by U_{n-1} d_n U_n^{-1} for random automorphisms U_n of each
/// level, producing an isomorphic but non-split presentation.
fn conjugate_levelwise(c: &SheafComplex, rng: &mut ChaCha8Rng) -> Result<SheafComplex> {
    let ring = c.ring().clone();
    let mut autos: BTreeMap<i64, (SheafMorphism, SheafMorphism)> = BTreeMap::new();
    for (n, sum) in c.levels() {
        autos.insert(n, random_automorphism(&ring, rng, sum)?);
    }
    let mut levels = BTreeMap::new();
    for (n, sum) in c.levels() {
        levels.insert(n, sum.clone());
    }
    let mut diffs = BTreeMap::new();
    for (n, _) in c.levels() {
        let Some(d) = c.diff(n) else { continue };
        let u_tgt = &autos.get(&(n - 1)).expect("target level exists").0;
        let u_src_inv = &autos.get(&n).expect("source level exists").1;
        diffs.insert(n, u_tgt.compose(d)?.compose(u_src_inv)?);
    }
    SheafComplex::new(&ring, levels, diffs)
}

/// Reproducible pseudo-random valid complex spanning levels [0, length].
pub fn random_complex(
    ring: &Arc<GradedRing>,
    length: i64,
    max_summands: usize,
    twist_bounds: (i64, i64),
    seed: u64,
) -> Result<SheafComplex> {
    random_complex_impl(ring, length, max_summands, twist_bounds, seed, false)
}

/// Like `random_complex` but every summand (k, l) satisfies k + l >= 0.
pub fn random_nonnegative_complex(
    ring: &Arc<GradedRing>,
    length: i64,
    max_summands: usize,
    twist_bounds: (i64, i64),
    seed: u64,
) -> Result<SheafComplex> {
    random_complex_impl(ring, length, max_summands, twist_bounds, seed, true)
}

/// A random isomorphism out of the given complex: conjugates the target
/// presentation levelwise and uses the conjugating maps as the components.
/// The cone of the result is always acyclic.
pub fn random_isomorphism(x: &SheafComplex, seed: u64) -> Result<ChainMap> {
    let ring = x.ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut autos: BTreeMap<i64, (SheafMorphism, SheafMorphism)> = BTreeMap::new();
    for (n, sum) in x.levels() {
        autos.insert(n, random_automorphism(&ring, &mut rng, sum)?);
    }
    let mut levels = BTreeMap::new();
    for (n, sum) in x.levels() {
        levels.insert(n, sum.clone());
    }
    let mut diffs = BTreeMap::new();
    for (n, _) in x.levels() {
        let Some(d) = x.diff(n) else { continue };
        let u_tgt = &autos.get(&(n - 1)).expect("target level exists").0;
        let u_src_inv = &autos.get(&n).expect("source level exists").1;
        diffs.insert(n, u_tgt.compose(d)?.compose(u_src_inv)?);
    }
    let y = SheafComplex::new(&ring, levels, diffs)?;
    let maps = autos.into_iter().map(|(n, (u, _))| (n, u)).collect();
    ChainMap::new(x.clone(), y, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldTag;
    use crate::sheaf::cone;
    use std::sync::OnceLock;

    fn laurent() -> Arc<GradedRing> {
        static R: OnceLock<Arc<GradedRing>> = OnceLock::new();
        R.get_or_init(|| GradedRing::laurent(FieldTag::Q).unwrap()).clone()
    }

    fn checkerboard() -> Arc<GradedRing> {
        static R: OnceLock<Arc<GradedRing>> = OnceLock::new();
        R.get_or_init(|| GradedRing::checkerboard(FieldTag::Q).unwrap()).clone()
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let r = checkerboard();
        let a = random_complex(&r, 2, 3, (-2, 2), 17).unwrap();
        let b = random_complex(&r, 2, 3, (-2, 2), 17).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generated_complexes_validate() {
        for ring in [laurent(), checkerboard()] {
            for seed in 0..10 {
                let c = random_complex(&ring, 3, 3, (-2, 2), seed).unwrap();
                c.validate().unwrap();
            }
        }
    }

    #[test]
    fn length_zero_has_no_differentials() {
        let r = laurent();
        let c = random_complex(&r, 0, 4, (-2, 2), 5).unwrap();
        assert_eq!(c.min_level(), Some(0));
        assert_eq!(c.max_level(), Some(0));
        assert!(c.diff(0).is_none() && c.diff(1).is_none());
    }

    #[test]
    fn nonnegative_variant_obeys_constraint() {
        for ring in [laurent(), checkerboard()] {
            for seed in 0..10 {
                let c = random_nonnegative_complex(&ring, 2, 3, (-2, 2), seed).unwrap();
                c.check_nonnegative_twists().unwrap();
            }
        }
    }

    #[test]
    fn automorphism_inverse_is_exact() {
        let r = checkerboard();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sum = TwistSum::new(vec![(0, 0), (1, -1), (2, 0)]);
        let (u, v) = random_automorphism(&r, &mut rng, &sum).unwrap();
        let id = SheafMorphism::identity(&r, &sum);
        assert_eq!(u.compose(&v).unwrap(), id);
        assert_eq!(v.compose(&u).unwrap(), id);
    }

    #[test]
    fn isomorphism_chain_map_commutes() {
        let r = laurent();
        for seed in 0..5 {
            let x = random_complex(&r, 2, 3, (-2, 2), seed).unwrap();
            let f = random_isomorphism(&x, seed + 100).unwrap();
            let c = cone(&f).unwrap();
            c.validate().unwrap();
        }
    }
}
