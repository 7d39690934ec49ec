//! Exact rationals, divisor classes and symmetric trilinear forms on
//! lattices of rank 1 or 2.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{FanoError, Result};

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(FanoError::InvalidInput("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// The value as an `i64`, if it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Rational {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rational> {
        if self.is_zero() {
            return Err(FanoError::InvalidInput("reciprocal of zero".into()));
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::integer(n as i64)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl FromStr for Rational {
    type Err = FanoError;

    /// Accepts `n` or `n/d`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || FanoError::InvalidInput(format!("not a rational number: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rational::from_big(n, d)
            }
            None => s.parse::<BigInt>().map(Rational::from).map_err(|_| bad()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: String,
    den: String,
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalRepr { num: self.0.numer().to_string(), den: self.0.denom().to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = RationalRepr::deserialize(d)?;
        let num: BigInt = repr.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = repr.den.parse().map_err(D::Error::custom)?;
        Rational::from_big(num, den).map_err(D::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl $trait<i64> for Rational {
            type Output = Rational;
            fn $method(self, rhs: i64) -> Rational {
                self.$method(Rational::integer(rhs))
            }
        }
        impl $trait<i64> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: i64) -> Rational {
                self.$method(Rational::integer(rhs))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0.clone())
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// Which basis a divisor class or a rank-2 form is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisTag {
    /// (-K, E): anticanonical class and exceptional divisor.
    KE,
    /// (M, F): tautological class and fiber, or a pair of contraction pullbacks.
    MF,
    /// The fundamental divisor H of a rank-1 lattice.
    #[serde(rename = "H_only")]
    HOnly,
}

/// An exact coefficient vector in a declared basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    pub basis: BasisTag,
    pub coords: Vec<Rational>,
}

impl DivisorClass {
    pub fn new(basis: BasisTag, coords: Vec<Rational>) -> Result<Self> {
        let expected = if basis == BasisTag::HOnly { 1 } else { 2 };
        if coords.len() != expected {
            return Err(FanoError::Basis(format!(
                "{basis:?} classes carry {expected} coordinates, got {}",
                coords.len()
            )));
        }
        Ok(DivisorClass { basis, coords })
    }

    pub fn ke(k: impl Into<Rational>, e: impl Into<Rational>) -> Self {
        DivisorClass { basis: BasisTag::KE, coords: vec![k.into(), e.into()] }
    }

    pub fn mf(m: impl Into<Rational>, f: impl Into<Rational>) -> Self {
        DivisorClass { basis: BasisTag::MF, coords: vec![m.into(), f.into()] }
    }

    pub fn h(h: impl Into<Rational>) -> Self {
        DivisorClass { basis: BasisTag::HOnly, coords: vec![h.into()] }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        check_basis(self.basis, other.basis)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(DivisorClass { basis: self.basis, coords })
    }

    pub fn sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        check_basis(self.basis, other.basis)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(DivisorClass { basis: self.basis, coords })
    }

    pub fn scale(&self, s: &Rational) -> DivisorClass {
        DivisorClass { basis: self.basis, coords: self.coords.iter().map(|c| c * s).collect() }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(Rational::is_integer)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: &[&str] = match self.basis {
            BasisTag::KE => &["(-K)", "E"],
            BasisTag::MF => &["M", "F"],
            BasisTag::HOnly => &["H"],
        };
        let mut wrote = false;
        for (c, name) in self.coords.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", c.abs()) } else { ("+", c.clone()) };
            if wrote {
                write!(f, " {sign} ")?;
            } else if sign == "-" {
                write!(f, "-")?;
            }
            if mag == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}{name}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn check_basis(a: BasisTag, b: BasisTag) -> Result<()> {
    if a != b {
        return Err(FanoError::Basis(format!("basis mismatch: {a:?} vs {b:?}")));
    }
    Ok(())
}

/// A symmetric multilinear intersection form, stored by its values on
/// basis monomials.
///
/// For rank 2 the values are `[x^3, x^2 y, x y^2, y^3]` where `(x, y)` is
/// the basis named by `basis`. For rank 1 the form is `H^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rank")]
pub enum TrilinearForm {
    #[serde(rename = "1")]
    Rank1 { dim: u32, top: Rational },
    #[serde(rename = "2")]
    Rank2 { basis: BasisTag, values: [Rational; 4] },
}

impl TrilinearForm {
    /// A rank-2 form on `(-K, E)`.
    pub fn ke(c30: impl Into<Rational>, c21: impl Into<Rational>, c12: impl Into<Rational>, c03: impl Into<Rational>) -> Self {
        TrilinearForm::Rank2 { basis: BasisTag::KE, values: [c30.into(), c21.into(), c12.into(), c03.into()] }
    }

    pub fn mf(c30: impl Into<Rational>, c21: impl Into<Rational>, c12: impl Into<Rational>, c03: impl Into<Rational>) -> Self {
        TrilinearForm::Rank2 { basis: BasisTag::MF, values: [c30.into(), c21.into(), c12.into(), c03.into()] }
    }

    pub fn rank1(dim: u32, top: impl Into<Rational>) -> Self {
        TrilinearForm::Rank1 { dim, top: top.into() }
    }

    pub fn basis(&self) -> BasisTag {
        match self {
            TrilinearForm::Rank1 { .. } => BasisTag::HOnly,
            TrilinearForm::Rank2 { basis, .. } => *basis,
        }
    }

    /// The stored monomial values for a rank-2 form.
    pub fn values(&self) -> Option<&[Rational; 4]> {
        match self {
            TrilinearForm::Rank2 { values, .. } => Some(values),
            TrilinearForm::Rank1 { .. } => None,
        }
    }

    /// Number of slots the form takes.
    pub fn arity(&self) -> usize {
        match self {
            TrilinearForm::Rank1 { dim, .. } => *dim as usize,
            TrilinearForm::Rank2 { .. } => 3,
        }
    }

    /// Full multilinear expansion over the stored monomial values.
    pub fn eval(&self, classes: &[&DivisorClass]) -> Result<Rational> {
        if classes.len() != self.arity() {
            return Err(FanoError::Arity { expected: self.arity(), got: classes.len() });
        }
        for c in classes {
            check_basis(self.basis(), c.basis)?;
        }
        match self {
            TrilinearForm::Rank1 { top, .. } => {
                Ok(classes.iter().fold(top.clone(), |acc, c| acc * &c.coords[0]))
            }
            TrilinearForm::Rank2 { values, .. } => {
                let mut total = Rational::zero();
                for i in 0..2 {
                    for j in 0..2 {
                        for k in 0..2 {
                            let coeff = &classes[0].coords[i] * &classes[1].coords[j] * &classes[2].coords[k];
                            if !coeff.is_zero() {
                                total = total + coeff * &values[i + j + k];
                            }
                        }
                    }
                }
                Ok(total)
            }
        }
    }

    pub fn cube(&self, d: &DivisorClass) -> Result<Rational> {
        eval_form(self, d, d, d)
    }

    /// Rewrites a rank-2 form in the basis `new_basis`, whose vectors are
    /// given in the current basis and must have integer coordinates.
    pub fn change_basis(&self, new_basis: [&DivisorClass; 2], new_tag: BasisTag) -> Result<TrilinearForm> {
        if matches!(self, TrilinearForm::Rank1 { .. }) || new_tag == BasisTag::HOnly {
            return Err(FanoError::Basis("change of basis needs a rank-2 form".into()));
        }
        let [u, v] = new_basis;
        for w in [u, v] {
            check_basis(self.basis(), w.basis)?;
            if !w.is_integral() {
                return Err(FanoError::Basis(format!("basis vector {w} has non-integer coordinates")));
            }
        }
        let det = &u.coords[0] * &v.coords[1] - &u.coords[1] * &v.coords[0];
        if det.is_zero() {
            return Err(FanoError::Basis("basis vectors are linearly dependent".into()));
        }
        let values = [
            eval_form(self, u, u, u)?,
            eval_form(self, u, u, v)?,
            eval_form(self, u, v, v)?,
            eval_form(self, v, v, v)?,
        ];
        Ok(TrilinearForm::Rank2 { basis: new_tag, values })
    }
}

impl fmt::Display for TrilinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrilinearForm::Rank1 { dim, top } => write!(f, "H^{dim} = {top}"),
            TrilinearForm::Rank2 { values, .. } => {
                write!(f, "({}, {}, {}, {})", values[0], values[1], values[2], values[3])
            }
        }
    }
}

/// Evaluates a three-slot form on three classes.
pub fn eval_form(form: &TrilinearForm, d1: &DivisorClass, d2: &DivisorClass, d3: &DivisorClass) -> Result<Rational> {
    form.eval(&[d1, d2, d3])
}

/// Greatest common divisor of a slice of positive integers; 0 for an empty slice.
pub fn gcd_all(xs: &[u64]) -> u64 {
    xs.iter().fold(0u64, |g, &x| g.gcd(&x))
}

pub fn lcm_all(xs: &[u64]) -> u64 {
    xs.iter().fold(1u64, |l, &x| l.lcm(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::integer(n)
    }

    #[test]
    fn rational_lowest_terms() {
        let x = Rational::new(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!("-3/2".parse::<Rational>().unwrap(), x);
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn rational_json_shape() {
        let s = serde_json::to_string(&Rational::new(1, 2)).unwrap();
        assert_eq!(s, r#"{"num":"1","den":"2"}"#);
        let back: Rational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, Rational::new(1, 2));
    }

    #[test]
    fn cube_of_anticanonical() {
        let f = TrilinearForm::ke(18, 3, -2, 1);
        let k = DivisorClass::ke(1, 0);
        assert_eq!(eval_form(&f, &k, &k, &k).unwrap(), r(18));
    }

    #[test]
    fn zero_class_kills_everything() {
        let f = TrilinearForm::ke(18, 3, -2, 1);
        let z = DivisorClass::ke(0, 0);
        let k = DivisorClass::ke(1, 0);
        assert_eq!(eval_form(&f, &z, &k, &k).unwrap(), r(0));
    }

    #[test]
    fn mixed_expansion_by_hand() {
        // (-K - E)^2 (-K) = c30 - 2 c21 + c12
        let f = TrilinearForm::ke(18, 3, -2, 1);
        let m = DivisorClass::ke(1, -1);
        let k = DivisorClass::ke(1, 0);
        assert_eq!(eval_form(&f, &m, &m, &k).unwrap(), r(10));
    }

    #[test]
    fn basis_mismatch_is_rejected() {
        let f = TrilinearForm::ke(18, 3, -2, 1);
        let k = DivisorClass::ke(1, 0);
        let m = DivisorClass::mf(1, 0);
        assert!(matches!(eval_form(&f, &k, &k, &m), Err(FanoError::Basis(_))));
    }

    #[test]
    fn change_basis_identity() {
        let f = TrilinearForm::ke(18, 3, -2, 1);
        let g = f.change_basis([&DivisorClass::ke(1, 0), &DivisorClass::ke(0, 1)], BasisTag::KE).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn change_basis_line_link() {
        let f = TrilinearForm::ke(18, 3, -2, 1);
        let m = DivisorClass::ke(1, -1);
        let fb = DivisorClass::ke(3, -4);
        let g = f.change_basis([&m, &fb], BasisTag::MF).unwrap();
        assert_eq!(g.values().unwrap()[0], r(2));
        assert_eq!(g.values().unwrap()[0], eval_form(&f, &m, &m, &m).unwrap());
    }

    #[test]
    fn change_basis_rejects_bad_vectors() {
        let f = TrilinearForm::ke(22, 4, -2, 1);
        let half = DivisorClass::ke(Rational::new(1, 2), 0);
        let e = DivisorClass::ke(0, 1);
        assert!(f.change_basis([&half, &e], BasisTag::MF).is_err());
        let k = DivisorClass::ke(1, 0);
        let k2 = DivisorClass::ke(2, 0);
        assert!(f.change_basis([&k, &k2], BasisTag::MF).is_err());
    }

    #[test]
    fn rank1_eval() {
        let f = TrilinearForm::rank1(3, Rational::new(1, 6));
        let h = DivisorClass::h(6);
        assert_eq!(f.eval(&[&h, &h, &h]).unwrap(), r(36));
        assert!(f.eval(&[&h, &h]).is_err());
    }

    #[test]
    fn class_display() {
        assert_eq!(DivisorClass::ke(3, -4).to_string(), "3(-K) - 4E");
        assert_eq!(DivisorClass::ke(1, -1).to_string(), "(-K) - E");
        assert_eq!(DivisorClass::mf(0, 0).to_string(), "0");
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-30i64..30, 1i64..7).prop_map(|(n, d)| Rational::new(n, d))
    }

    fn class() -> impl Strategy<Value = DivisorClass> {
        (small_rat(), small_rat()).prop_map(|(a, b)| DivisorClass::ke(a, b))
    }

    fn form() -> impl Strategy<Value = TrilinearForm> {
        (small_rat(), small_rat(), small_rat(), small_rat()).prop_map(|(a, b, c, d)| TrilinearForm::ke(a, b, c, d))
    }

    proptest! {
        #[test]
        fn eval_is_symmetric(f in form(), x in class(), y in class(), z in class()) {
            let base = eval_form(&f, &x, &y, &z).unwrap();
            for (a, b, c) in [(&x, &z, &y), (&y, &x, &z), (&y, &z, &x), (&z, &x, &y), (&z, &y, &x)] {
                prop_assert_eq!(eval_form(&f, a, b, c).unwrap(), base.clone());
            }
        }

        #[test]
        fn eval_is_linear_in_first_slot(f in form(), x in class(), x2 in class(), y in class(), z in class(), s in small_rat()) {
            let lhs = eval_form(&f, &x.add(&x2.scale(&s)).unwrap(), &y, &z).unwrap();
            let rhs = eval_form(&f, &x, &y, &z).unwrap() + s * eval_form(&f, &x2, &y, &z).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn change_basis_commutes_with_eval(
            f in form(),
            (p, q, r0, s) in (-5i64..6, -5i64..6, -5i64..6, -5i64..6)
                .prop_filter("det in {±1, ±2}", |(p, q, r0, s)| matches!(p * s - q * r0, -2 | -1 | 1 | 2)),
            (a, b, c) in ((-4i64..5, -4i64..5), (-4i64..5, -4i64..5), (-4i64..5, -4i64..5)),
        ) {
            let u = DivisorClass::ke(p, q);
            let v = DivisorClass::ke(r0, s);
            let g = f.change_basis([&u, &v], BasisTag::MF).unwrap();
            let to_old = |(x, y): (i64, i64)| u.scale(&Rational::integer(x)).add(&v.scale(&Rational::integer(y))).unwrap();
            let new = |(x, y): (i64, i64)| DivisorClass::mf(x, y);
            let lhs = eval_form(&g, &new(a), &new(b), &new(c)).unwrap();
            let rhs = eval_form(&f, &to_old(a), &to_old(b), &to_old(c)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
