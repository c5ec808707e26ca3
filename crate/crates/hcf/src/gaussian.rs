//! Exact arithmetic over Gaussian integers and Gaussian rationals, the
//! Hurwitz nearest-integer floor, and the two norms used throughout.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A Gaussian integer: a lattice point of Z[i], identified with Z^2.
///
/// Doubles as a continued-fraction digit and as a pattern point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new<R: Into<BigInt>, I: Into<BigInt>>(re: R, im: I) -> Self {
        GaussianInt { re: re.into(), im: im.into() }
    }

    pub fn zero() -> Self {
        GaussianInt::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// re^2 + im^2, the squared modulus; zero iff self is zero.
    pub fn norm_sq(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// max(|re|, |im|).
    pub fn norm_inf(&self) -> BigInt {
        self.re.abs().max(self.im.abs())
    }

    pub fn conj(&self) -> Self {
        GaussianInt { re: self.re.clone(), im: -&self.im }
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        GaussianInt { re: &self.re * n, im: &self.im * n }
    }
}

impl Add for &GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt { re: -&self.re, im: -&self.im }
    }
}

impl fmt::Debug for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

// Wire form: [re, im], as JSON numbers while they fit 64 bits and as
// decimal strings beyond that.
fn serialize_coord<S: Serializer>(v: &BigInt, seq: &mut S::SerializeSeq) -> std::result::Result<(), S::Error> {
    match v.to_i64() {
        Some(small) => seq.serialize_element(&small),
        None => seq.serialize_element(&v.to_string()),
    }
}

impl Serialize for GaussianInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        serialize_coord::<S>(&self.re, &mut seq)?;
        serialize_coord::<S>(&self.im, &mut seq)?;
        seq.end()
    }
}

struct GaussianIntVisitor;

impl<'de> Visitor<'de> for GaussianIntVisitor {
    type Value = GaussianInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a [re, im] pair of integers or decimal strings")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<GaussianInt, A::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coord {
            Small(i64),
            Big(String),
        }
        fn to_big<E: de::Error>(c: Coord) -> std::result::Result<BigInt, E> {
            match c {
                Coord::Small(v) => Ok(BigInt::from(v)),
                Coord::Big(s) => s.parse().map_err(|_| E::custom("invalid integer string")),
            }
        }
        let re = to_big(seq.next_element::<Coord>()?.ok_or_else(|| de::Error::invalid_length(0, &self))?)?;
        let im = to_big(seq.next_element::<Coord>()?.ok_or_else(|| de::Error::invalid_length(1, &self))?)?;
        if seq.next_element::<serde_json::Value>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        Ok(GaussianInt { re, im })
    }
}

impl<'de> Deserialize<'de> for GaussianInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<GaussianInt, D::Error> {
        deserializer.deserialize_seq(GaussianIntVisitor)
    }
}

/// An exact complex rational, the value carrier for finite expansions and
/// convergents p_n/q_n.
///
/// Internally each coordinate is a reduced `BigRational`, which makes the
/// canonical form unique by construction: two constructions of the same
/// complex value compare (and hash) equal. The public numerator /
/// denominator view uses a real positive common denominator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn from_coords(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(g: &GaussianInt) -> Self {
        GaussianRational {
            re: BigRational::from(g.re.clone()),
            im: BigRational::from(g.im.clone()),
        }
    }

    /// Build num/den with a Gaussian-integer denominator; den must be nonzero.
    pub fn new(num: GaussianInt, den: GaussianInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        // num/den = num * conj(den) / |den|^2
        let d = den.norm_sq();
        let n = &num * &den.conj();
        Ok(GaussianRational {
            re: BigRational::new(n.re, d.clone()),
            im: BigRational::new(n.im, d),
        })
    }

    pub fn zero() -> Self {
        GaussianRational::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    /// Numerator over the real positive common denominator.
    pub fn numerator(&self) -> GaussianInt {
        let d = self.common_denominator();
        GaussianInt {
            re: (&self.re * BigRational::from(d.clone())).to_integer(),
            im: (&self.im * BigRational::from(d)).to_integer(),
        }
    }

    /// The real positive common denominator (lcm of coordinate denominators).
    pub fn common_denominator(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    /// |z|^2, exact.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// max(|Re z|, |Im z|), exact.
    pub fn norm_inf(&self) -> BigRational {
        self.re.abs().max(self.im.abs())
    }

    /// 1/z; z must be nonzero.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let d = self.abs_sq();
        Ok(GaussianRational { re: &self.re / &d, im: -&self.im / &d })
    }

    /// The unique Gaussian integer g with z - g in U, i.e. round-half-up
    /// per coordinate (ties go toward +inf, matching the half-open box).
    pub fn hurwitz_floor(&self) -> GaussianInt {
        GaussianInt {
            re: round_half_up(&self.re),
            im: round_half_up(&self.im),
        }
    }

    /// Membership in the half-open fundamental box
    /// U = [-1/2, 1/2) x [-1/2, 1/2).
    pub fn in_box_u(&self) -> bool {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let neg_half = -&half;
        self.re >= neg_half && self.re < half && self.im >= neg_half && self.im < half
    }

    /// Membership in the closed box cl(U) = [-1/2, 1/2]^2.
    pub fn in_closed_box_u(&self) -> bool {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        self.re.abs() <= half && self.im.abs() <= half
    }
}

/// floor(x + 1/2) computed exactly: floor((2p + q) / (2q)) with q > 0.
fn round_half_up(x: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    (BigInt::from(2) * x.numer() + x.denom()).div_floor(&(two * x.denom()))
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{}{}i)/{}", self.numerator().re, if self.numerator().im.is_negative() { "" } else { "+" }, self.numerator().im, self.common_denominator())
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("GaussianRational", 2)?;
        st.serialize_field("num", &self.numerator())?;
        st.serialize_field("den", &GaussianInt::new(self.common_denominator(), 0))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<GaussianRational, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            num: GaussianInt,
            den: GaussianInt,
        }
        let w = Wire::deserialize(deserializer)?;
        GaussianRational::new(w.num, w.den).map_err(|e| de::Error::custom(e.to_string()))
    }
}

/// Parse "p/q" (or a plain integer) into an exact rational.
pub fn parse_fraction(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| format!("invalid numerator {num:?}"))?;
    let d: BigInt = den.parse().map_err(|_| format!("invalid denominator {den:?}"))?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn gr(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational::from_coords(rat(re.0, re.1), rat(im.0, im.1))
    }

    #[test]
    fn hurwitz_floor_examples() {
        assert_eq!(GaussianRational::zero().hurwitz_floor(), GaussianInt::new(0, 0));
        // 2/5 - 7/10 i -> 0 - 1 i
        assert_eq!(gr((2, 5), (-7, 10)).hurwitz_floor(), GaussianInt::new(0, -1));
        // 3/2 + 1/5 i -> 2 + 0 i (half-points round up)
        assert_eq!(gr((3, 2), (1, 5)).hurwitz_floor(), GaussianInt::new(2, 0));
    }

    #[test]
    fn norms_examples() {
        let z = GaussianRational::from_int(&GaussianInt::new(3, 4));
        assert_eq!(z.norm_inf(), rat(4, 1));
        assert_eq!(z.abs_sq(), rat(25, 1));
        let zero = GaussianRational::zero();
        assert_eq!(zero.norm_inf(), rat(0, 1));
        assert_eq!(zero.abs_sq(), rat(0, 1));
        // smallest-modulus D2 shell point
        let z = GaussianRational::from_int(&GaussianInt::new(-2, 2));
        assert_eq!(z.norm_inf(), rat(2, 1));
        assert_eq!(z.abs_sq(), rat(8, 1));
    }

    #[test]
    fn canonical_equality() {
        let a = GaussianRational::new(GaussianInt::new(2, -2), GaussianInt::new(8, 0)).unwrap();
        let b = GaussianRational::from_coords(rat(1, 4), rat(-1, 4));
        assert_eq!(a, b);
        // Gaussian denominator: (1 - i)/(2 + 2i) = -i/2
        let c = GaussianRational::new(GaussianInt::new(1, -1), GaussianInt::new(2, 2)).unwrap();
        assert_eq!(c, gr((0, 1), (-1, 2)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            GaussianRational::new(GaussianInt::new(1, 0), GaussianInt::zero()),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn recip_roundtrip() {
        let z = gr((3, 7), (-2, 5));
        let back = z.recip().unwrap().recip().unwrap();
        assert_eq!(z, back);
        assert_eq!(GaussianRational::zero().recip(), Err(Error::ZeroInput));
    }

    #[test]
    fn serde_roundtrip_with_big_coordinates() {
        let g = GaussianInt::new(BigInt::from(3).pow(100), BigInt::from(-7));
        let js = serde_json::to_string(&g).unwrap();
        assert!(js.contains('"')); // big coordinate rendered as string
        let back: GaussianInt = serde_json::from_str(&js).unwrap();
        assert_eq!(g, back);

        let z = gr((18, 61), (-15, 61));
        let js = serde_json::to_string(&z).unwrap();
        assert_eq!(js, r#"{"num":[18,-15],"den":[61,0]}"#);
        let back: GaussianRational = serde_json::from_str(&js).unwrap();
        assert_eq!(z, back);
    }

    #[test]
    fn parse_fraction_forms() {
        assert_eq!(parse_fraction("18/61").unwrap(), rat(18, 61));
        assert_eq!(parse_fraction("-3").unwrap(), rat(-3, 1));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("x").is_err());
    }
}
