//! JSON input formats.
//!
//! Ring model:
//! ```json
//! {"family": "laurent", "field": "Q"}
//! {"family": "twisted_laurent", "q": 4}
//! {"family": "table", "field": "Fp:5", "table": {
//!     "window": [-2, 2],
//!     "dims": {"-1": 1, "0": 1, "1": 1},
//!     "mul": [[0, 0, 0, 0, [1]], [1, 0, -1, 0, [1]]],
//!     "unit": [1]}}
//! ```
//! `field` is `"Q"` or `"Fp:<prime>"`.  A `mul` row `[n, i, m, j, coeffs]`
//! gives the coordinates of basis(n)[i] * basis(m)[j] over basis(n+m);
//! missing rows mean the product vanishes.  Coefficients are integers or
//! strings `"a"` / `"a/b"`.
//!
//! Complex:
//! ```json
//! {"ring": "laurent.json",
//!  "levels": {"1": [[0, 0]], "0": [[1, 0]]},
//!  "differentials": {"1": [[0, 0, {"1": [1], "0": [-1]}]]}}
//! ```
//! `ring` is either a path (resolved against the complex file's directory)
//! or an inline ring object.  A differential entry `[i, j, parts]` fills row
//! i (target summand), column j (source summand) with the element whose
//! degree-d component has the listed coordinates.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use p1k_core::field::is_prime;
use p1k_core::ring::TableData;
use p1k_core::{
    Error, FieldTag, GradedRing, Result, RingElement, Scalar, SheafComplex, SheafMorphism,
    TwistSum,
};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RingSpec {
    family: String,
    #[serde(default)]
    field: Option<String>,
    #[serde(default)]
    q: Option<u64>,
    #[serde(default)]
    table: Option<TableSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableSpec {
    window: (i64, i64),
    dims: BTreeMap<String, usize>,
    mul: Vec<(i64, usize, i64, usize, Vec<Coeff>)>,
    unit: Vec<Coeff>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coeff {
    Int(i64),
    Str(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RingRef {
    Path(String),
    Inline(RingSpec),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexSpec {
    ring: RingRef,
    #[serde(default)]
    levels: BTreeMap<String, Vec<(i64, i64)>>,
    #[serde(default)]
    differentials: BTreeMap<String, Vec<(usize, usize, BTreeMap<String, Vec<Coeff>>)>>,
}

fn schema_err(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn parse_field(s: &str) -> Result<FieldTag> {
    if s == "Q" {
        return Ok(FieldTag::Q);
    }
    if let Some(p) = s.strip_prefix("Fp:") {
        let p: u32 =
            p.parse().map_err(|_| schema_err(format!("bad prime in field {s:?}")))?;
        if !is_prime(p) {
            return Err(schema_err(format!("{p} is not prime")));
        }
        return Ok(FieldTag::Fp(p));
    }
    Err(schema_err(format!("unknown field {s:?}; expected \"Q\" or \"Fp:<p>\"")))
}

fn parse_degree(key: &str) -> Result<i64> {
    key.parse().map_err(|_| schema_err(format!("bad degree key {key:?}")))
}

fn parse_coeff(tag: FieldTag, c: &Coeff) -> Result<Scalar> {
    match c {
        Coeff::Int(n) => Ok(Scalar::from_i64(tag, *n)),
        Coeff::Str(s) => {
            let body = s.trim();
            let (a, b) = match body.split_once('/') {
                None => (body, "1"),
                Some((a, b)) => (a.trim(), b.trim()),
            };
            let a: i64 = a.parse().map_err(|_| schema_err(format!("bad coefficient {s:?}")))?;
            let b: i64 = b.parse().map_err(|_| schema_err(format!("bad coefficient {s:?}")))?;
            if b == 0 {
                return Err(schema_err(format!("zero denominator in {s:?}")));
            }
            if let FieldTag::Fp(p) = tag {
                if b.rem_euclid(p as i64) == 0 {
                    return Err(schema_err(format!("denominator of {s:?} vanishes mod {p}")));
                }
            }
            Ok(Scalar::fraction(tag, a, b))
        }
    }
}

fn parse_coeffs(tag: FieldTag, cs: &[Coeff]) -> Result<Vec<Scalar>> {
    cs.iter().map(|c| parse_coeff(tag, c)).collect()
}

fn build_ring(spec: RingSpec) -> Result<Arc<GradedRing>> {
    let field = spec.field.as_deref().map(parse_field).transpose()?;
    let reject = |name: &str, present: bool| {
        if present {
            Err(schema_err(format!("{name:?} does not apply to family {:?}", spec.family)))
        } else {
            Ok(())
        }
    };
    match spec.family.as_str() {
        "laurent" | "polynomial" | "checkerboard" => {
            reject("q", spec.q.is_some())?;
            reject("table", spec.table.is_some())?;
            let f = field.ok_or_else(|| schema_err("\"field\" is required"))?;
            match spec.family.as_str() {
                "laurent" => GradedRing::laurent(f),
                "polynomial" => GradedRing::polynomial(f),
                _ => GradedRing::checkerboard(f),
            }
        }
        "twisted_laurent" => {
            reject("field", field.is_some())?;
            reject("table", spec.table.is_some())?;
            let q = spec.q.ok_or_else(|| schema_err("\"q\" is required for twisted_laurent"))?;
            GradedRing::twisted_laurent(q)
        }
        "table" => {
            reject("q", spec.q.is_some())?;
            let f = field.ok_or_else(|| schema_err("\"field\" is required"))?;
            let t = spec.table.ok_or_else(|| schema_err("\"table\" is required"))?;
            let mut dims = BTreeMap::new();
            for (key, dim) in &t.dims {
                dims.insert(parse_degree(key)?, *dim);
            }
            let mut mul = BTreeMap::new();
            for (n, i, m, j, coeffs) in &t.mul {
                if mul.insert((*n, *i, *m, *j), parse_coeffs(f, coeffs)?).is_some() {
                    return Err(schema_err(format!("duplicate mul row for ({n}, {i}, {m}, {j})")));
                }
            }
            let unit = parse_coeffs(f, &t.unit)?;
            GradedRing::from_table(f, TableData { window: t.window, dims, mul, unit })
        }
        other => Err(schema_err(format!("unknown family {other:?}"))),
    }
}

pub fn ring_from_str(s: &str) -> Result<Arc<GradedRing>> {
    let spec: RingSpec = serde_json::from_str(s).map_err(|e| schema_err(e.to_string()))?;
    build_ring(spec)
}

pub fn ring_from_path(path: &Path) -> Result<Arc<GradedRing>> {
    let text = fs::read_to_string(path)
        .map_err(|e| schema_err(format!("{}: {e}", path.display())))?;
    ring_from_str(&text)
}

/// Parses a complex; a ring path reference is resolved against `base`.
pub fn complex_from_str(s: &str, base: Option<&Path>) -> Result<SheafComplex> {
    let spec: ComplexSpec = serde_json::from_str(s).map_err(|e| schema_err(e.to_string()))?;
    let ring = match &spec.ring {
        RingRef::Path(p) => {
            let path = match base {
                Some(b) => b.join(p),
                None => PathBuf::from(p),
            };
            ring_from_path(&path)?
        }
        RingRef::Inline(_) => {
            let RingRef::Inline(inner) = spec.ring else { unreachable!() };
            build_ring(inner)?
        }
    };
    let tag = ring.field();

    let mut levels: BTreeMap<i64, TwistSum> = BTreeMap::new();
    for (key, sums) in &spec.levels {
        levels.insert(parse_degree(key)?, TwistSum::new(sums.clone()));
    }
    let level_of =
        |n: i64| levels.get(&n).cloned().unwrap_or_else(TwistSum::zero);

    let mut diffs = BTreeMap::new();
    for (key, entries) in &spec.differentials {
        let n = parse_degree(key)?;
        let source = level_of(n);
        let target = level_of(n - 1);
        let mut raw = vec![vec![RingElement::zero(&ring); source.len()]; target.len()];
        for (i, j, parts) in entries {
            if *i >= target.len() || *j >= source.len() {
                return Err(schema_err(format!(
                    "entry ({i}, {j}) outside the {}x{} differential at level {n}",
                    target.len(),
                    source.len()
                )));
            }
            let mut e = RingElement::zero(&ring);
            for (deg_key, coeffs) in parts {
                let d = parse_degree(deg_key)?;
                e = e.add(&RingElement::homogeneous(&ring, d, parse_coeffs(tag, coeffs)?)?)?;
            }
            raw[*i][*j] = e;
        }
        diffs.insert(n, SheafMorphism::new(&ring, source, target, raw)?);
    }
    SheafComplex::new(&ring, levels, diffs)
}

pub fn complex_from_path(path: &Path) -> Result<SheafComplex> {
    let text = fs::read_to_string(path)
        .map_err(|e| schema_err(format!("{}: {e}", path.display())))?;
    complex_from_str(&text, path.parent())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_families_parse() {
        let r = ring_from_str(r#"{"family": "laurent", "field": "Q"}"#).unwrap();
        assert_eq!(r.family_name(), "laurent");
        assert_eq!(r.field(), FieldTag::Q);

        let r = ring_from_str(r#"{"family": "checkerboard", "field": "Fp:7"}"#).unwrap();
        assert_eq!(r.field(), FieldTag::Fp(7));

        let r = ring_from_str(r#"{"family": "twisted_laurent", "q": 4}"#).unwrap();
        assert_eq!(r.family_name(), "twisted_laurent");
    }

    #[test]
    fn schema_violations_are_rejected() {
        for bad in [
            r#"{"family": "laurent"}"#,
            r#"{"family": "laurent", "field": "Q", "q": 4}"#,
            r#"{"family": "laurent", "field": "R"}"#,
            r#"{"family": "laurent", "field": "Fp:6"}"#,
            r#"{"family": "twisted_laurent", "q": 4, "field": "Q"}"#,
            r#"{"family": "nope", "field": "Q"}"#,
            r#"{"family": "laurent", "field": "Q", "extra": 1}"#,
        ] {
            assert!(matches!(ring_from_str(bad), Err(Error::Schema(_))), "{bad}");
        }
    }

    #[test]
    fn table_ring_round_trip() {
        let text = r#"{
            "family": "table", "field": "Q",
            "table": {
                "window": [-2, 2],
                "dims": {"-2": 1, "-1": 1, "0": 1, "1": 1, "2": 1},
                "mul": [
                    [0, 0, 0, 0, [1]], [0, 0, 1, 0, [1]], [1, 0, 0, 0, [1]],
                    [0, 0, -1, 0, [1]], [-1, 0, 0, 0, [1]],
                    [1, 0, -1, 0, [1]], [-1, 0, 1, 0, [1]],
                    [1, 0, 1, 0, [1]], [-1, 0, -1, 0, [1]],
                    [2, 0, 0, 0, [1]], [0, 0, 2, 0, [1]],
                    [-2, 0, 0, 0, [1]], [0, 0, -2, 0, [1]],
                    [2, 0, -1, 0, [1]], [-1, 0, 2, 0, [1]],
                    [1, 0, -2, 0, [1]], [-2, 0, 1, 0, [1]],
                    [2, 0, -2, 0, [1]], [-2, 0, 2, 0, [1]]
                ],
                "unit": [1]
            }
        }"#;
        let r = ring_from_str(text).unwrap();
        assert_eq!(r.dim(1).unwrap(), 1);
        assert_eq!(r.dim(3).unwrap_err(), Error::WindowTooSmall { degree: 3 });
    }

    #[test]
    fn fraction_coefficients() {
        let q = parse_coeff(FieldTag::Q, &Coeff::Str("-2/3".into())).unwrap();
        assert_eq!(q, Scalar::fraction(FieldTag::Q, -2, 3));
        let p = parse_coeff(FieldTag::Fp(5), &Coeff::Str("1/2".into())).unwrap();
        assert_eq!(p, Scalar::fraction(FieldTag::Fp(5), 1, 2));
        assert!(parse_coeff(FieldTag::Fp(5), &Coeff::Str("1/5".into())).is_err());
        assert!(parse_coeff(FieldTag::Q, &Coeff::Str("1/0".into())).is_err());
        assert!(parse_coeff(FieldTag::Q, &Coeff::Str("x".into())).is_err());
    }

    #[test]
    fn complex_with_inline_ring() {
        let text = r#"{
            "ring": {"family": "laurent", "field": "Q"},
            "levels": {"1": [[0, 0]], "0": [[1, 0]]},
            "differentials": {"1": [[0, 0, {"1": [1], "0": [-1]}]]}
        }"#;
        let y = complex_from_str(text, None).unwrap();
        assert_eq!(y.min_level(), Some(0));
        assert_eq!(y.max_level(), Some(1));
        let g = p1k_core::sections_complex(&y).unwrap();
        assert_eq!(g.homology_dims(), std::iter::once((0, 1)).collect());
    }

    #[test]
    fn complex_rejects_bad_entries() {
        let text = r#"{
            "ring": {"family": "laurent", "field": "Q"},
            "levels": {"1": [[0, 0]], "0": [[1, 0]]},
            "differentials": {"1": [[0, 1, {"1": [1]}]]}
        }"#;
        assert!(matches!(complex_from_str(text, None), Err(Error::Schema(_))));

        let range_violation = r#"{
            "ring": {"family": "laurent", "field": "Q"},
            "levels": {"1": [[0, 0]], "0": [[1, 0]]},
            "differentials": {"1": [[0, 0, {"2": [1]}]]}
        }"#;
        assert!(matches!(
            complex_from_str(range_violation, None),
            Err(Error::RangeViolation { .. })
        ));
    }

    #[test]
    fn complex_with_ring_path() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("ring.json"), r#"{"family": "laurent", "field": "Q"}"#)
            .unwrap();
        let path = dir.path().join("complex.json");
        fs::write(&path, r#"{"ring": "ring.json", "levels": {"0": [[2, 1]]}}"#).unwrap();
        let y = complex_from_path(&path).unwrap();
        assert_eq!(y.level(0).summands(), &[(2, 1)]);
    }
}
