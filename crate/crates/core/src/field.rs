//! Exact scalar fields.
//!
//! Everything downstream is generic over [`Field`]. Two implementations are
//! provided: [`Rational`] (exact rationals, the default) and [`Fp`], a prime
//! field whose characteristic is a const parameter.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

/// An exact field.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Human-readable field name, e.g. `rational` or `fp:7`.
    fn name() -> String;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// JSON rendering: integers as numbers, everything else as strings.
    fn to_json(&self) -> serde_json::Value {
        let s = self.to_string();
        match s.parse::<i64>() {
            Ok(v) => serde_json::Value::from(v),
            Err(_) => serde_json::Value::from(s),
        }
    }
}

/// Exact rational number.
///
/// Small values live in an `i64` ratio; an operation that would overflow
/// promotes to a big rational. Values that fit are always stored small, so
/// structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rational {
    fn big(&self) -> BigRational {
        match self {
            Rational::Small(r) => BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Rational::Big(b) => b.clone(),
        }
    }

    fn from_big(b: BigRational) -> Self {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(Ratio::new_raw(n, d)),
            _ => Rational::Big(b),
        }
    }

    pub fn new(numer: i64, denom: i64) -> Self {
        Rational::Small(Ratio::new(numer, denom))
    }

    fn binop(
        &self,
        other: &Self,
        small: impl Fn(&Ratio<i64>, &Ratio<i64>) -> Option<Ratio<i64>>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Self {
        if let (Rational::Small(a), Rational::Small(b)) = (self, other) {
            if let Some(r) = small(a, b) {
                return Rational::Small(r);
            }
        }
        Rational::from_big(big(self.big(), other.big()))
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(r) => write!(f, "{r}"),
            Rational::Big(b) => write!(f, "{b}"),
        }
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::Small(Ratio::zero())
    }
    fn one() -> Self {
        Rational::Small(Ratio::one())
    }
    fn from_i64(v: i64) -> Self {
        Rational::Small(Ratio::from_integer(v))
    }
    fn is_zero(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_zero(),
            Rational::Big(b) => b.is_zero(),
        }
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        self.binop(other, |a, b| a.checked_add(b), |a, b| a + b)
    }
    fn sub(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        self.binop(other, |a, b| a.checked_sub(b), |a, b| a - b)
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        self.binop(other, |a, b| a.checked_mul(b), |a, b| a * b)
    }
    fn neg(&self) -> Self {
        match self {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(-*r),
            _ => Rational::from_big(-self.big()),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(r.recip()),
            _ => Rational::from_big(self.big().recip()),
        })
    }
    fn name() -> String {
        "rational".to_string()
    }
}

impl Rational {
    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_negative(),
            Rational::Big(b) => b.is_negative(),
        }
    }
}

/// Prime field `Z/P`. `P` must be an odd prime; this is checked when the
/// first element is built.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    const CHECKED: () = assert!(P > 2 && is_prime(P), "Fp requires an odd prime modulus");

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::CHECKED;
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P as u128;
            }
            base = base * base % P as u128;
            e >>= 1;
        }
        Fp(acc as u64)
    }
}

/// Trial-division primality, used for modulus checks.
pub const fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp::new(0)
    }
    fn one() -> Self {
        Fp::new(1)
    }
    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 + other.0 as u128) % P as u128) as u64)
    }
    fn sub(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 + P as u128 - other.0 as u128) % P as u128) as u64)
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 * other.0 as u128) % P as u128) as u64)
    }
    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn name() -> String {
        format!("fp:{P}")
    }
}

/// Primes accepted by [`FieldMode::parse`].
pub const SUPPORTED_PRIMES: &[u64] = &[3, 5, 7, 101, 10007, 65521, 2_147_483_647];

/// Runtime choice of scalar field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum FieldMode {
    Rational,
    Prime(u64),
}

impl FieldMode {
    /// `rational` or `fp:<p>` with `p` in [`SUPPORTED_PRIMES`].
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        if text == "rational" {
            return Ok(FieldMode::Rational);
        }
        let p = text
            .strip_prefix("fp:")
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| format!("unknown field {text:?}, expected rational or fp:<p>"))?;
        if SUPPORTED_PRIMES.contains(&p) {
            Ok(FieldMode::Prime(p))
        } else {
            Err(format!("unsupported prime {p}, supported: {SUPPORTED_PRIMES:?}"))
        }
    }
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMode::Rational => write!(f, "rational"),
            FieldMode::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// Runs `$body` with `$F` bound to the field type selected by a [`FieldMode`].
#[macro_export]
macro_rules! with_field {
    ($mode:expr, $F:ident => $body:expr) => {
        match $mode {
            $crate::field::FieldMode::Rational => {
                type $F = $crate::field::Rational;
                $body
            }
            $crate::field::FieldMode::Prime(3) => {
                type $F = $crate::field::Fp<3>;
                $body
            }
            $crate::field::FieldMode::Prime(5) => {
                type $F = $crate::field::Fp<5>;
                $body
            }
            $crate::field::FieldMode::Prime(7) => {
                type $F = $crate::field::Fp<7>;
                $body
            }
            $crate::field::FieldMode::Prime(101) => {
                type $F = $crate::field::Fp<101>;
                $body
            }
            $crate::field::FieldMode::Prime(10007) => {
                type $F = $crate::field::Fp<10007>;
                $body
            }
            $crate::field::FieldMode::Prime(65521) => {
                type $F = $crate::field::Fp<65521>;
                $body
            }
            $crate::field::FieldMode::Prime(2_147_483_647) => {
                type $F = $crate::field::Fp<2_147_483_647>;
                $body
            }
            $crate::field::FieldMode::Prime(p) => panic!("unsupported prime {p}"),
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_promotes_on_overflow() {
        let a = Rational::from_i64(i64::MAX);
        let b = a.add(&a);
        assert!(matches!(b, Rational::Big(_)));
        let back = b.sub(&a);
        assert_eq!(back, a);
        assert!(matches!(back, Rational::Small(_)));
    }

    #[test]
    fn fp_inverse() {
        for v in 1..7 {
            let x = Fp::<7>::new(v);
            assert!(x.mul(&x.inv().unwrap()).is_one());
        }
        assert!(Fp::<7>::zero().inv().is_none());
        assert_eq!(Fp::<7>::new(-1).value(), 6);
    }

    #[test]
    fn json_rendering() {
        assert_eq!(Rational::new(3, 1).to_json(), serde_json::json!(3));
        assert_eq!(Rational::new(1, 2).to_json(), serde_json::json!("1/2"));
    }

    #[test]
    fn field_modes() {
        assert_eq!(FieldMode::parse("rational"), Ok(FieldMode::Rational));
        assert_eq!(FieldMode::parse("fp:101"), Ok(FieldMode::Prime(101)));
        assert!(FieldMode::parse("fp:4").is_err());
        assert!(FieldMode::parse("real").is_err());
        for &p in SUPPORTED_PRIMES {
            let name = crate::with_field!(FieldMode::Prime(p), F => F::name());
            assert_eq!(name, format!("fp:{p}"));
        }
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, b + 1);
            prop_assert!(x.add(&x.neg()).is_zero());
            if !x.is_zero() {
                prop_assert!(x.mul(&x.inv().unwrap()).is_one());
            }
            prop_assert_eq!(x.add(&y).sub(&y), x.clone());
            prop_assert_eq!(x.mul(&y), y.mul(&x));
        }

        #[test]
        fn fp_field_axioms(a in 0i64..10007, b in 0i64..10007) {
            let x = Fp::<10007>::new(a);
            let y = Fp::<10007>::new(b);
            prop_assert!(x.add(&x.neg()).is_zero());
            if !x.is_zero() {
                prop_assert!(x.mul(&x.inv().unwrap()).is_one());
            }
            prop_assert_eq!(x.add(&y).sub(&y), x);
        }
    }
}
