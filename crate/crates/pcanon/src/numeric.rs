//! Scalar backends: exact rationals and tolerance-based complex doubles.
//!
//! Every other module is generic over [`Field`]. The exact backend ignores
//! tolerances entirely; the approximate backend routes every equality and
//! pruning decision through a [`TolerancePolicy`]. Mixing scalars from the
//! two backends is ruled out statically: there is no common type for them.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Equality policy for the approximate backend.
///
/// Two values compare equal when `|a - b| <= abs_eps + rel_eps * max(|a|, |b|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl TolerancePolicy {
    pub fn new(abs_eps: f64, rel_eps: f64) -> Self {
        assert!(abs_eps >= 0.0 && rel_eps >= 0.0, "tolerances must be nonnegative");
        TolerancePolicy { abs_eps, rel_eps }
    }

    /// The bound `abs_eps + rel_eps * scale` for a comparison at magnitude `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.abs_eps + self.rel_eps * scale
    }

    /// Exact comparisons: both tolerances zero.
    pub fn exact() -> Self {
        TolerancePolicy { abs_eps: 0.0, rel_eps: 0.0 }
    }
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy { abs_eps: 1e-9, rel_eps: 1e-9 }
    }
}

/// A field scalar the whole pipeline can be generic over.
///
/// Arithmetic comes from the operator supertraits; the rest is the minimal
/// surface the canonical-form machinery needs: inversion, a magnitude for
/// pivoting and pruning, tolerance-aware equality, and a total order used
/// only for deterministic printing.
pub trait Field:
    Clone
    + PartialEq
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
    /// True for backends whose equality is structural, independent of tolerances.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    /// Needed for Stirling-number and binomial tables, which outgrow `i64`.
    fn from_i128(n: i128) -> Self;

    /// Multiplicative inverse, `None` for (structural) zero.
    fn inv(&self) -> Option<Self>;

    /// `|x|` as a double; used for pivot choice and pruning thresholds.
    fn magnitude(&self) -> f64;

    /// Backend equality: exact scalars ignore `pol`, approximate ones apply it.
    fn eq_with(&self, other: &Self, pol: &TolerancePolicy) -> bool;

    /// Whether this value should be pruned as noise at the given scale.
    ///
    /// Exact backend: structural zero test. Approximate backend:
    /// `|x| < abs_eps * (1 + scale)`.
    fn is_negligible(&self, pol: &TolerancePolicy, scale: f64) -> bool;

    /// Total order used for canonical term ordering and deterministic output.
    fn canonical_cmp(&self, other: &Self) -> Ordering;

    /// The serialized literal: `"p/q"` for rationals, `[re, im]` for complex.
    fn literal(&self) -> String;
}

/// Backend-aware scalar equality.
///
/// The exact backend compares canonically and ignores the policy; the
/// approximate backend applies it. Comparing scalars from different backends
/// is a usage error that the type system rejects at compile time.
pub fn field_equal<F: Field>(a: &F, b: &F, pol: &TolerancePolicy) -> bool {
    a.eq_with(b, pol)
}

// ---------------------------------------------------------------------------
// Exact backend
// ---------------------------------------------------------------------------

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    /// Normalizes `num/den`: reduces by the gcd and moves the sign to the
    /// numerator. `den = 0` is a division-by-zero error.
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn from_integers(num: i64, den: i64) -> Result<Self> {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `"p/q"` or a bare integer `"p"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |_| Error::Parse(format!("invalid rational literal {s:?}"));
        match s.split_once('/') {
            Some((num, den)) => {
                let num = BigInt::from_str(num.trim()).map_err(bad)?;
                let den = BigInt::from_str(den.trim()).map_err(bad)?;
                Rational::new(num, den)
            }
            None => Ok(Rational(BigRational::from_integer(
                BigInt::from_str(s).map_err(bad)?,
            ))),
        }
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.0.is_zero(), "division by zero rational");
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(BigRational::one())
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rational::integer(n)
    }

    fn from_i128(n: i128) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    fn magnitude(&self) -> f64 {
        self.0.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }

    fn eq_with(&self, other: &Self, _pol: &TolerancePolicy) -> bool {
        self == other
    }

    fn is_negligible(&self, _pol: &TolerancePolicy, _scale: f64) -> bool {
        self.0.is_zero()
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }

    fn literal(&self) -> String {
        self.to_string()
    }
}

// ---------------------------------------------------------------------------
// Approximate backend
// ---------------------------------------------------------------------------

/// Complex double. Finiteness is checked where values enter the pipeline
/// (parsing) and wherever invariants are validated; intermediate arithmetic
/// is plain IEEE.
#[derive(Clone, Copy, PartialEq)]
pub struct ApproxComplex(Complex64);

impl ApproxComplex {
    pub fn new(re: f64, im: f64) -> Self {
        ApproxComplex(Complex64::new(re, im))
    }

    /// Parse-time constructor: rejects NaN and infinities.
    pub fn finite(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(Self::new(re, im))
        } else {
            Err(Error::NonFinite(format!("[{re}, {im}]")))
        }
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    pub fn conj(&self) -> Self {
        ApproxComplex(self.0.conj())
    }

    /// Modulus.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> f64 {
        self.0.arg()
    }

    pub fn is_finite(&self) -> bool {
        self.0.re.is_finite() && self.0.im.is_finite()
    }
}

impl fmt::Display for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im == 0.0 {
            write!(f, "{}", self.0.re)
        } else {
            write!(f, "[{}, {}]", self.0.re, self.0.im)
        }
    }
}

impl fmt::Debug for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! complex_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ApproxComplex {
            type Output = ApproxComplex;
            fn $method(self, rhs: ApproxComplex) -> ApproxComplex {
                ApproxComplex((self.0).$method(rhs.0))
            }
        }
    };
}

complex_binop!(Add, add);
complex_binop!(Sub, sub);
complex_binop!(Mul, mul);

impl Div for ApproxComplex {
    type Output = ApproxComplex;
    fn div(self, rhs: ApproxComplex) -> ApproxComplex {
        ApproxComplex(self.0 / rhs.0)
    }
}

impl Neg for ApproxComplex {
    type Output = ApproxComplex;
    fn neg(self) -> ApproxComplex {
        ApproxComplex(-self.0)
    }
}

impl Zero for ApproxComplex {
    fn zero() -> Self {
        ApproxComplex(Complex64::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for ApproxComplex {
    fn one() -> Self {
        ApproxComplex(Complex64::one())
    }
}

impl Field for ApproxComplex {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        ApproxComplex::new(n as f64, 0.0)
    }

    fn from_i128(n: i128) -> Self {
        ApproxComplex::new(n as f64, 0.0)
    }

    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(ApproxComplex(self.0.inv()))
        }
    }

    fn magnitude(&self) -> f64 {
        self.0.norm()
    }

    fn eq_with(&self, other: &Self, pol: &TolerancePolicy) -> bool {
        let diff = (self.0 - other.0).norm();
        diff <= pol.bound(self.0.norm().max(other.0.norm()))
    }

    fn is_negligible(&self, pol: &TolerancePolicy, scale: f64) -> bool {
        self.0.norm() < pol.abs_eps * (1.0 + scale)
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.0
            .re
            .total_cmp(&other.0.re)
            .then(self.0.im.total_cmp(&other.0.im))
    }

    fn literal(&self) -> String {
        format!("[{}, {}]", self.0.re, self.0.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from_integers(n, d).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(rat(4, -8), rat(-1, 2));
        assert_eq!(rat(4, -8).to_string(), "-1/2");
        assert_eq!(rat(0, 7).to_string(), "0");
        assert_eq!(rat(0, 7).denom(), &BigInt::from(1));
        assert_eq!(rat(-6, -4), rat(3, 2));
        assert!(matches!(
            Rational::from_integers(1, 0),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn rational_equality_is_canonical() {
        let pol = TolerancePolicy::default();
        assert!(field_equal(&rat(1, 2), &rat(2, 4), &pol));
        assert!(!field_equal(&rat(1, 3), &rat(3333, 10000), &pol));
    }

    #[test]
    fn complex_equality_within_tolerance() {
        let pol = TolerancePolicy::new(1e-9, 0.0);
        let a = ApproxComplex::new(1.0, 0.0);
        let b = ApproxComplex::new(1.0, 1e-12);
        assert!(field_equal(&a, &b, &pol));
        assert!(!field_equal(&a, &ApproxComplex::new(1.0, 1e-6), &pol));
    }

    #[test]
    fn parsing_round_trips() {
        let r: Rational = "-22/7".parse().unwrap();
        assert_eq!(r, rat(-22, 7));
        assert_eq!(r.literal(), "-22/7");
        let n: Rational = "5".parse().unwrap();
        assert_eq!(n, rat(5, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
    }

    #[test]
    fn finite_constructor_rejects_nan() {
        assert!(ApproxComplex::finite(f64::NAN, 0.0).is_err());
        assert!(ApproxComplex::finite(0.0, f64::INFINITY).is_err());
        assert!(ApproxComplex::finite(1.0, -2.0).is_ok());
    }

    prop_compose! {
        fn arb_rational()(n in -1000i64..1000, d in 1i64..200, neg in any::<bool>()) -> Rational {
            rat(n, if neg { -d } else { d })
        }
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            // associativity and distributivity, exact
            prop_assert_eq!(
                (a.clone() + b.clone()) + c.clone(),
                a.clone() + (b.clone() + c.clone())
            );
            prop_assert_eq!(
                (a.clone() * b.clone()) * c.clone(),
                a.clone() * (b.clone() * c.clone())
            );
            prop_assert_eq!(
                a.clone() * (b.clone() + c.clone()),
                a.clone() * b.clone() + a.clone() * c
            );
            if !a.is_zero() {
                prop_assert_eq!(a.clone() * a.inv().unwrap(), Rational::one());
            }
        }

        #[test]
        fn approx_equality_reflexive_symmetric(re in -1e6f64..1e6, im in -1e6f64..1e6) {
            let pol = TolerancePolicy::default();
            let z = ApproxComplex::new(re, im);
            let w = ApproxComplex::new(im, re);
            prop_assert!(field_equal(&z, &z, &pol));
            prop_assert_eq!(field_equal(&z, &w, &pol), field_equal(&w, &z, &pol));
        }
    }
}
