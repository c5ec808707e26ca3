//! The Hurwitz continued-fraction expansion, digit admissibility classes,
//! the convergent recursion and exact reconstruction.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::gaussian::{GaussianInt, GaussianRational};
use crate::{Error, Result};

/// Default digit budget for [`expand`]. Denominators grow roughly squared
/// per digit, so memory is bounded explicitly by digit count.
pub const DEFAULT_MAX_DIGITS: usize = 64;

/// Admissibility class of a digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DigitClass {
    /// norm_sq in [2, 8): valid Hurwitz digit, outside the extracted IFS.
    D1Only,
    /// norm_sq >= 8: indexes the IFS maps.
    D2,
}

/// A continued-fraction digit together with its admissibility class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digit {
    value: GaussianInt,
    class: DigitClass,
}

impl Digit {
    /// Requires norm_sq >= 2 (D1 membership excludes 0, ±1, ±i).
    pub fn new(value: GaussianInt) -> Result<Self> {
        let ns = value.norm_sq();
        if ns < BigInt::from(2) {
            return Err(Error::InadmissibleDigit(value.to_string()));
        }
        let class = if ns >= BigInt::from(8) { DigitClass::D2 } else { DigitClass::D1Only };
        Ok(Digit { value, class })
    }

    pub fn value(&self) -> &GaussianInt {
        &self.value
    }

    pub fn class(&self) -> DigitClass {
        self.class
    }

    pub fn is_d2(&self) -> bool {
        self.class == DigitClass::D2
    }
}

pub fn is_d1(g: &GaussianInt) -> bool {
    g.norm_sq() >= BigInt::from(2)
}

pub fn is_d2(g: &GaussianInt) -> bool {
    g.norm_sq() >= BigInt::from(8)
}

/// A finite word of Hurwitz digits. `exhausted` marks an expansion that
/// terminated at a rational (remainder exactly zero).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigitSequence {
    digits: Vec<GaussianInt>,
    pub exhausted: bool,
}

impl DigitSequence {
    /// Every digit must be D1-admissible.
    pub fn new(digits: Vec<GaussianInt>, exhausted: bool) -> Result<Self> {
        for d in &digits {
            if !is_d1(d) {
                return Err(Error::InadmissibleDigit(d.to_string()));
            }
        }
        Ok(DigitSequence { digits, exhausted })
    }

    pub fn empty() -> Self {
        DigitSequence { digits: Vec::new(), exhausted: false }
    }

    pub fn digits(&self) -> &[GaussianInt] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn all_d2(&self) -> bool {
        self.digits.iter().all(is_d2)
    }
}

/// Exact convergent (p_n, q_n) at index n, from the recursion
/// p_j = c_j p_{j-1} + p_{j-2}, q_j = c_j q_{j-1} + q_{j-2}
/// with seeds p_{-1} = 1, p_0 = 0, q_{-1} = 0, q_0 = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentPair {
    pub p: GaussianInt,
    pub q: GaussianInt,
    pub index: usize,
}

impl ConvergentPair {
    pub fn value(&self) -> Result<GaussianRational> {
        GaussianRational::new(self.p.clone(), self.q.clone())
    }
}

/// Expand z in U into its Hurwitz digits: c_n = floor(1 / H^{n-1}(z))
/// with H(z) = 1/z - floor(1/z). All arithmetic is exact; the expansion
/// of a Gaussian rational always terminates (denominator-norm descent),
/// `exhausted` records whether it did before `max_digits`.
pub fn expand(z: &GaussianRational, max_digits: usize) -> Result<DigitSequence> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !z.in_box_u() {
        return Err(Error::InputOutsideU);
    }
    let mut digits = Vec::new();
    let mut rem = z.clone();
    let mut exhausted = false;
    while digits.len() < max_digits {
        if rem.is_zero() {
            exhausted = true;
            break;
        }
        let inv = rem.recip()?;
        let c = inv.hurwitz_floor();
        rem = &inv - &GaussianRational::from_int(&c);
        debug_assert!(rem.in_box_u());
        digits.push(c);
    }
    if rem.is_zero() {
        exhausted = true;
    }
    DigitSequence::new(digits, exhausted)
}

/// Exact (p_j, q_j) for 1 <= j <= n via the recursion.
pub fn convergents(seq: &DigitSequence) -> Result<Vec<ConvergentPair>> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut out = Vec::with_capacity(seq.len());
    let mut p_prev2 = GaussianInt::new(1, 0);
    let mut p_prev1 = GaussianInt::zero();
    let mut q_prev2 = GaussianInt::zero();
    let mut q_prev1 = GaussianInt::new(1, 0);
    for (j, c) in seq.digits().iter().enumerate() {
        let p = &(c * &p_prev1) + &p_prev2;
        let q = &(c * &q_prev1) + &q_prev2;
        out.push(ConvergentPair { p: p.clone(), q: q.clone(), index: j + 1 });
        p_prev2 = p_prev1;
        p_prev1 = p;
        q_prev2 = q_prev1;
        q_prev1 = q;
    }
    Ok(out)
}

/// Exact value p_n/q_n of the finite continued fraction; equals the image
/// of 0 under the composed inverse-branch maps of the word.
pub fn reconstruct(seq: &DigitSequence) -> Result<GaussianRational> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let last = convergents(seq)?.pop().expect("nonempty");
    last.value()
}

/// The unique digit i with z in U_i, i.e. floor(1/z), classified.
pub fn region_of(z: &GaussianRational) -> Result<Digit> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !z.in_box_u() {
        return Err(Error::InputOutsideU);
    }
    Digit::new(z.recip()?.hurwitz_floor())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    fn rational(nre: i64, nim: i64, d: i64) -> GaussianRational {
        GaussianRational::new(g(nre, nim), g(d, 0)).unwrap()
    }

    fn seq(digits: &[(i64, i64)]) -> DigitSequence {
        DigitSequence::new(digits.iter().map(|&(a, b)| g(a, b)).collect(), false).unwrap()
    }

    #[test]
    fn expand_examples() {
        // 1/4 - 1/4 i: 1/z = 2 + 2i exactly
        let got = expand(&rational(2, -2, 8), 16).unwrap();
        assert_eq!(got.digits(), &[g(2, 2)]);
        assert!(got.exhausted);

        // (18 - 15i)/61 -> [2+2i, 3i]
        let got = expand(&rational(18, -15, 61), 16).unwrap();
        assert_eq!(got.digits(), &[g(2, 2), g(0, 3)]);
        assert!(got.exhausted);

        assert_eq!(expand(&GaussianRational::zero(), 16), Err(Error::ZeroInput));
        assert_eq!(expand(&rational(2, 0, 3), 16), Err(Error::InputOutsideU));
    }

    #[test]
    fn convergents_examples() {
        let c = convergents(&seq(&[(2, 2)])).unwrap();
        assert_eq!((&c[0].p, &c[0].q), (&g(1, 0), &g(2, 2)));

        let c = convergents(&seq(&[(2, 2), (0, 3)])).unwrap();
        assert_eq!((&c[1].p, &c[1].q), (&g(0, 3), &g(-5, 6)));
        assert_eq!(c[1].value().unwrap(), rational(18, -15, 61));

        // |q_n| strictly increasing
        let c = convergents(&seq(&[(3, 4), (3, 4), (3, 4)])).unwrap();
        assert!(c[0].q.norm_sq() < c[1].q.norm_sq());
        assert!(c[1].q.norm_sq() < c[2].q.norm_sq());

        assert_eq!(convergents(&DigitSequence::empty()), Err(Error::EmptySequence));
    }

    #[test]
    fn reconstruct_examples() {
        assert_eq!(reconstruct(&seq(&[(2, 2)])).unwrap(), rational(1, -1, 4));
        assert_eq!(reconstruct(&seq(&[(2, 2), (0, 3)])).unwrap(), rational(18, -15, 61));

        let w = seq(&[(3, 3), (-3, 3), (5, 0)]);
        let v = reconstruct(&w).unwrap();
        let back = expand(&v, 16).unwrap();
        assert_eq!(back.digits(), w.digits());
        assert!(back.exhausted);

        assert_eq!(reconstruct(&DigitSequence::empty()), Err(Error::EmptySequence));
        assert!(DigitSequence::new(vec![g(1, 0)], false).is_err());
    }

    #[test]
    fn region_of_examples() {
        let d = region_of(&rational(1, -1, 4)).unwrap();
        assert_eq!(d.value(), &g(2, 2));
        assert_eq!(d.class(), DigitClass::D2);

        // 1/z = 2 + 0.1 i at z = (200 - 10i)/401
        let z = rational(200, -10, 401);
        let inv = z.recip().unwrap();
        assert_eq!(inv.re(), &BigRational::from(BigInt::from(2)));
        let d = region_of(&z).unwrap();
        assert_eq!(d.value(), &g(2, 0));
        assert_eq!(d.class(), DigitClass::D1Only);

        // a point outside the fundamental box is rejected
        assert_eq!(region_of(&rational(28, -6, 41)).unwrap_err(), Error::InputOutsideU);

        assert_eq!(region_of(&GaussianRational::zero()).unwrap_err(), Error::ZeroInput);
    }

    #[test]
    fn floor_translation_invariance() {
        let z = rational(7, -9, 20);
        let shift = g(3, -2);
        let shifted = &z + &GaussianRational::from_int(&shift);
        assert_eq!(shifted.hurwitz_floor(), &z.hurwitz_floor() + &shift);
    }

    fn d2_digit() -> impl Strategy<Value = GaussianInt> {
        (-30i64..=30, -30i64..=30)
            .prop_filter("D2", |(a, b)| a * a + b * b >= 8)
            .prop_map(|(a, b)| g(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Round-trip of D2 words: expand(reconstruct(w)) == w, exhausted.
        #[test]
        fn d2_word_roundtrip(word in prop::collection::vec(d2_digit(), 1..=12)) {
            let w = DigitSequence::new(word, false).unwrap();
            let v = reconstruct(&w).unwrap();
            let back = expand(&v, w.len() + 4).unwrap();
            prop_assert!(back.exhausted);
            prop_assert_eq!(back.digits(), w.digits());
        }

        // Determinant identity p_{j-1} q_j - p_j q_{j-1} = (-1)^j.
        #[test]
        fn determinant_identity(word in prop::collection::vec(d2_digit(), 1..=8)) {
            let w = DigitSequence::new(word, false).unwrap();
            let conv = convergents(&w).unwrap();
            let mut p_prev = GaussianInt::zero();
            let mut q_prev = GaussianInt::new(1, 0);
            for c in &conv {
                let det = &(&p_prev * &c.q) - &(&c.p * &q_prev);
                let expected = if c.index % 2 == 0 { g(1, 0) } else { g(-1, 0) };
                prop_assert_eq!(det, expected);
                p_prev = c.p.clone();
                q_prev = c.q.clone();
            }
        }

        // z - floor(z) always lies in the half-open box; floor is
        // invariant under Gaussian-integer translation.
        #[test]
        fn floor_box_membership(a in -400i64..400, b in -400i64..400, d in 1i64..60) {
            let z = GaussianRational::new(g(a, b), g(d, 0)).unwrap();
            let f = z.hurwitz_floor();
            let frac = &z - &GaussianRational::from_int(&f);
            prop_assert!(frac.in_box_u());
        }

        // Exact-rational form of norm comparability.
        #[test]
        fn norm_comparability(a in -50i64..50, b in -50i64..50, d in 1i64..20) {
            let z = GaussianRational::new(g(a, b), g(d, 0)).unwrap();
            let inf = z.norm_inf();
            let inf_sq = &inf * &inf;
            let abs2 = z.abs_sq();
            prop_assert!(inf_sq <= abs2);
            prop_assert!(abs2 <= BigRational::from(num_bigint::BigInt::from(2)) * &inf_sq);
        }
    }
}
