//! Exact scalar arithmetic: the rationals and prime fields 𝔽p.
//!
//! Everything downstream is generic over [`Scalar`]. Two implementations are
//! provided: [`Rat`] (arbitrary-precision rationals) and [`Fp`] (integers mod a
//! prime below 2^31). Both are exact; there is no floating point anywhere.

use num::{BigInt, BigRational};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Which exact field computations run over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    /// `p` must be prime and below 2^31.
    PrimeField(u32),
}

impl FieldSpec {
    pub fn is_valid(&self) -> bool {
        match self {
            FieldSpec::Rationals => true,
            FieldSpec::PrimeField(p) => *p >= 2 && is_prime_u32(*p),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "QQ"),
            FieldSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime_u32(n: u32) -> bool {
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

/// An exact field element.
///
/// `Zero::zero` and `One::one` construct literals without knowing the field;
/// for 𝔽p these stay "unbound" until they meet a bound element or are passed
/// through [`Scalar::bind`]. Containers normalize their entries on
/// construction, so stored data is always bound.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    /// The element n/d of the given field. Panics if d maps to zero.
    fn from_ratio(spec: &FieldSpec, n: i64, d: i64) -> Self;

    /// Normalize into the given field (reduces unbound 𝔽p literals).
    fn bind(&self, spec: &FieldSpec) -> Self;

    /// Canonical printable form, stable across runs; used for hashing.
    fn canon_string(&self) -> String;
}

/// Arbitrary-precision rational scalar.
pub type Rat = BigRational;

impl Scalar for Rat {
    fn inv(&self) -> Self {
        if self.is_zero() {
            panic!("inverse of zero");
        }
        self.recip()
    }

    fn from_ratio(spec: &FieldSpec, n: i64, d: i64) -> Self {
        debug_assert!(matches!(spec, FieldSpec::Rationals));
        assert!(d != 0, "zero denominator");
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn bind(&self, _spec: &FieldSpec) -> Self {
        self.clone()
    }

    fn canon_string(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Element of a prime field 𝔽p.
///
/// `modulus == 0` marks an unbound literal produced by `zero()`/`one()` (and
/// their negations); such values carry only −1, 0 or 1 and acquire a modulus on
/// first contact with a bound element. Combining two unbound values is allowed
/// only while the result stays in {−1, 0, 1}.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    val: i64,
    modulus: u32,
}

impl Fp {
    pub fn new(val: i64, p: u32) -> Self {
        assert!(p >= 2, "modulus must be at least 2");
        Fp { val: val.rem_euclid(p as i64), modulus: p }
    }

    fn reduce(val: i64, p: u32) -> Self {
        Fp { val: val.rem_euclid(p as i64), modulus: p }
    }

    fn unify(a: Fp, b: Fp) -> (i64, i64, u32) {
        match (a.modulus, b.modulus) {
            (0, 0) => (a.val, b.val, 0),
            (0, p) => (a.val.rem_euclid(p as i64), b.val, p),
            (p, 0) => (a.val, b.val.rem_euclid(p as i64), p),
            (p, q) => {
                assert!(p == q, "mixed moduli {p} and {q}");
                (a.val, b.val, p)
            }
        }
    }

    fn make(val: i64, p: u32) -> Self {
        if p == 0 {
            assert!(
                (-1..=1).contains(&val),
                "unbound prime-field literal out of range; bind values before arithmetic"
            );
            Fp { val, modulus: 0 }
        } else {
            Fp::reduce(val, p)
        }
    }

    pub fn value(&self) -> i64 {
        self.val
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = Fp::unify(*self, *other);
        a == b
    }
}

impl Eq for Fp {}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let (a, b, p) = Fp::unify(self, rhs);
        Fp::make(a + b, p)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let (a, b, p) = Fp::unify(self, rhs);
        Fp::make(a - b, p)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let (a, b, p) = Fp::unify(self, rhs);
        if p == 0 {
            Fp::make(a * b, 0)
        } else {
            Fp::reduce((a as i128 * b as i128).rem_euclid(p as i128) as i64, p)
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::make(-self.val, self.modulus)
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp { val: 0, modulus: 0 }
    }
    fn is_zero(&self) -> bool {
        self.val == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp { val: 1, modulus: 0 }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.val)
    }
}

impl Scalar for Fp {
    fn inv(&self) -> Self {
        let p = self.modulus;
        assert!(p != 0, "cannot invert an unbound prime-field literal other than ±1");
        assert!(self.val != 0, "inverse of zero");
        // Fermat: val^(p-2) mod p.
        let mut base = self.val as i128;
        let mut exp = (p - 2) as u64;
        let m = p as i128;
        let mut acc: i128 = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Fp::reduce(acc as i64, p)
    }

    fn from_ratio(spec: &FieldSpec, n: i64, d: i64) -> Self {
        let p = match spec {
            FieldSpec::PrimeField(p) => *p,
            FieldSpec::Rationals => panic!("prime-field scalar bound to the rationals"),
        };
        let den = Fp::reduce(d, p);
        assert!(!den.is_zero(), "denominator vanishes mod {p}");
        Fp::reduce(n, p) * den.inv()
    }

    fn bind(&self, spec: &FieldSpec) -> Self {
        let p = match spec {
            FieldSpec::PrimeField(p) => *p,
            FieldSpec::Rationals => panic!("prime-field scalar bound to the rationals"),
        };
        if self.modulus == 0 {
            Fp::reduce(self.val, p)
        } else {
            assert!(self.modulus == p, "mixed moduli {} and {p}", self.modulus);
            *self
        }
    }

    fn canon_string(&self) -> String {
        self.val.to_string()
    }
}

/// Special case of `inv` for ±1 unbound literals, used by `Neg` paths: an
/// unbound ±1 is its own inverse.
impl Fp {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }
}

/// Convenience: the rational n/1.
pub fn rat(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_arithmetic_wraps() {
        let a = Fp::new(3, 5);
        let b = Fp::new(4, 5);
        assert_eq!(a + b, Fp::new(2, 5));
        assert_eq!(a * b, Fp::new(2, 5));
        assert_eq!(-a, Fp::new(2, 5));
        assert_eq!(a.inv() * a, Fp::new(1, 5));
    }

    #[test]
    fn fp_unbound_literals_unify() {
        let one: Fp = One::one();
        let bound = Fp::new(6, 7);
        assert_eq!(one + bound, Fp::new(0, 7));
        assert_eq!((-one) * bound, Fp::new(1, 7));
        assert!((one - one).is_zero());
    }

    #[test]
    #[should_panic]
    fn fp_unbound_overflow_panics() {
        let one: Fp = One::one();
        let _ = one + one;
    }

    #[test]
    fn rational_from_ratio() {
        let x = Rat::from_ratio(&FieldSpec::Rationals, 3, -6);
        assert_eq!(x.canon_string(), "-1/2");
        assert_eq!(x.inv().canon_string(), "-2");
    }

    #[test]
    fn primality_guard() {
        assert!(FieldSpec::PrimeField(2).is_valid());
        assert!(FieldSpec::PrimeField(2147483629).is_valid());
        assert!(!FieldSpec::PrimeField(9).is_valid());
        assert!(!FieldSpec::PrimeField(1).is_valid());
    }
}
