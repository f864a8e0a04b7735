//! Exact scalar arithmetic over the two supported coefficient fields:
//! arbitrary-precision rationals and prime fields F_p with p < 2^31.
//!
//! Every operation is exact; there is no floating point anywhere in the
//! crate. Rationals are kept in lowest terms with positive denominator
//! (the invariant `num::BigRational` maintains), F_p values as canonical
//! residues in [0, p).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;

/// Identifies which field a scalar or matrix lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Q,
    Fp(u32),
}

impl FieldTag {
    pub fn is_prime_field(self) -> bool {
        matches!(self, FieldTag::Fp(_))
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => write!(f, "Q"),
            FieldTag::Fp(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact field element. Mixing scalars from different fields is a
/// programming error and panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u32, val: u32 },
}

/// Small random scalar for randomized searches and generators: integers in
/// [-2, 2] over Q, uniform residues over F_p.
pub fn random_scalar<R: rand::Rng>(rng: &mut R, tag: FieldTag) -> Scalar {
    match tag {
        FieldTag::Q => Scalar::from_i64(tag, rng.gen_range(-2..=2)),
        FieldTag::Fp(p) => Scalar::from_i64(tag, rng.gen_range(0..p as i64)),
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    let n = n as u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Scalar {
    pub fn zero(tag: FieldTag) -> Self {
        match tag {
            FieldTag::Q => Scalar::Q(BigRational::zero()),
            FieldTag::Fp(p) => Scalar::Fp { p, val: 0 },
        }
    }

    pub fn one(tag: FieldTag) -> Self {
        match tag {
            FieldTag::Q => Scalar::Q(BigRational::one()),
            FieldTag::Fp(p) => Scalar::Fp { p, val: 1 },
        }
    }

    pub fn from_i64(tag: FieldTag, n: i64) -> Self {
        match tag {
            FieldTag::Q => Scalar::Q(BigRational::from(BigInt::from(n))),
            FieldTag::Fp(p) => {
                let val = n.rem_euclid(p as i64) as u32;
                Scalar::Fp { p, val }
            }
        }
    }

    /// Rational a/b; panics if b = 0 or the tag is a prime field and b = 0 mod p.
    pub fn fraction(tag: FieldTag, a: i64, b: i64) -> Self {
        assert!(b != 0, "zero denominator");
        match tag {
            FieldTag::Q => Scalar::Q(BigRational::new(BigInt::from(a), BigInt::from(b))),
            FieldTag::Fp(_) => {
                let num = Scalar::from_i64(tag, a);
                let den = Scalar::from_i64(tag, b);
                num.div(&den)
            }
        }
    }

    pub fn tag(&self) -> FieldTag {
        match self {
            Scalar::Q(_) => FieldTag::Q,
            Scalar::Fp { p, .. } => FieldTag::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { val, .. } => *val == 1,
        }
    }

    fn check_tags(&self, other: &Scalar) {
        assert_eq!(self.tag(), other.tag(), "scalars from different fields");
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.check_tags(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => {
                let s = (*a as u64 + *b as u64) % *p as u64;
                Scalar::Fp { p: *p, val: s as u32 }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, val } => {
                let v = if *val == 0 { 0 } else { p - val };
                Scalar::Fp { p: *p, val: v }
            }
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.check_tags(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => {
                let m = (*a as u64 * *b as u64) % *p as u64;
                Scalar::Fp { p: *p, val: m as u32 }
            }
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { p, val } => Scalar::Fp { p: *p, val: fp_inv(*val, *p) },
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }
}

/// Inverse in F_p by the extended Euclidean algorithm.
fn fp_inv(a: u32, p: u32) -> u32 {
    let (mut old_r, mut r) = (a as i64, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "{a} is not invertible mod {p}");
    old_s.rem_euclid(p as i64) as u32
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}

/// True if the rational scalar is a (possibly negative) integer; F_p values
/// are always integral. Used when exact integer division is required.
pub fn scalar_to_i64(s: &Scalar) -> Option<i64> {
    match s {
        Scalar::Q(r) => {
            if r.denom().is_one() {
                let n = r.numer();
                if n.abs() <= BigInt::from(i64::MAX) {
                    let digits = n.to_string();
                    digits.parse().ok()
                } else {
                    None
                }
            } else {
                None
            }
        }
        Scalar::Fp { val, .. } => Some(*val as i64),
    }
}
