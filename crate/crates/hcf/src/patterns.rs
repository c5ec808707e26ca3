//! Homothetic-copy detection: given a finite pattern A in Z^2 and a
//! finite point set, find all copies v + nA with integer translation v
//! and positive integer scale n.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::gaussian::GaussianInt;
use crate::hurwitz::DigitSequence;
use crate::seedset::{self, InsertionSchedule};
use crate::{Error, Result};

/// A finite lattice pattern, stored in canonical translate: deduplicated,
/// sorted, with the coordinatewise minimum corner at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticePattern {
    points: Vec<GaussianInt>,
}

impl LatticePattern {
    pub fn new(points: Vec<GaussianInt>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let min_re = points.iter().map(|p| p.re.clone()).min().unwrap();
        let min_im = points.iter().map(|p| p.im.clone()).min().unwrap();
        let corner = GaussianInt { re: min_re, im: min_im };
        let mut pts: Vec<GaussianInt> = points.iter().map(|p| p - &corner).collect();
        pts.sort();
        pts.dedup();
        Ok(LatticePattern { points: pts })
    }

    pub fn points(&self) -> &[GaussianInt] {
        &self.points
    }

    pub fn is_singleton(&self) -> bool {
        self.points.len() == 1
    }

    /// The fixed search anchor: the lexicographically smallest point.
    pub fn anchor(&self) -> &GaussianInt {
        &self.points[0]
    }

    /// Coordinatewise extents (max re, max im); the canonical corner is 0.
    pub fn extents(&self) -> (BigInt, BigInt) {
        let re = self.points.iter().map(|p| p.re.clone()).max().unwrap();
        let im = self.points.iter().map(|p| p.im.clone()).max().unwrap();
        (re, im)
    }
}

/// A verified homothetic copy v + nA. `scale_independent` marks singleton
/// patterns, which admit every scale and are reported once at n = 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotheticCopy {
    pub v: GaussianInt,
    pub n: u64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub scale_independent: bool,
}

fn scaled_point(p: &GaussianInt, n: u64) -> GaussianInt {
    p.scale(&BigInt::from(n))
}

/// All (v, n) with 1 <= n <= n_max and v + nA contained in S.
///
/// Anchored search: every copy places the pattern anchor on some s in S,
/// so v = s - n * anchor and the remaining |A| - 1 memberships are hash
/// lookups.
pub fn find_copies(
    pattern: &LatticePattern,
    set: &[GaussianInt],
    n_max: u64,
) -> Result<Vec<HomotheticCopy>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let lookup: HashSet<&GaussianInt> = set.iter().collect();
    let mut out = Vec::new();
    if pattern.is_singleton() {
        let mut points: Vec<&GaussianInt> = lookup.into_iter().collect();
        points.sort();
        for s in points {
            out.push(HomotheticCopy { v: s - pattern.anchor(), n: 1, scale_independent: true });
        }
        return Ok(out);
    }
    let anchor = pattern.anchor();
    let mut seen = HashSet::new();
    for s in set {
        if !seen.insert(s) {
            continue; // duplicate input point
        }
        for n in 1..=n_max {
            let v = s - &scaled_point(anchor, n);
            let ok = pattern
                .points()
                .iter()
                .all(|p| lookup.contains(&(&v + &scaled_point(p, n))));
            if ok {
                out.push(HomotheticCopy { v, n, scale_independent: false });
            }
        }
    }
    out.sort_by(|a, b| (&a.v, a.n).cmp(&(&b.v, b.n)));
    Ok(out)
}

/// Copies of A inside the integer square W_k, without materializing W_k
/// into a hash: membership in an axis-aligned grid is a coordinate test.
/// Scales run up to the geometric maximum floor((s - 1) / width(A)).
pub fn copies_in_square(
    pattern: &LatticePattern,
    k: usize,
    schedule: &InsertionSchedule,
) -> Result<Vec<HomotheticCopy>> {
    let sq = seedset::square(k, schedule)?;
    let side = sq.side;
    if pattern.is_singleton() {
        return Ok(sq
            .points
            .iter()
            .map(|p| HomotheticCopy { v: p.clone(), n: 1, scale_independent: true })
            .collect());
    }
    let (ext_re, ext_im) = pattern.extents();
    let width = ext_re.clone().max(ext_im.clone());
    let width = match width.to_u64() {
        Some(w) if w < side => w,
        _ => return Ok(Vec::new()), // pattern wider than the square
    };
    let (ext_re, ext_im) = (ext_re.to_u64().unwrap(), ext_im.to_u64().unwrap());
    let n_max = (side - 1) / width.max(1);
    let mut out = Vec::new();
    for n in 1..=n_max {
        let span_re = side - 1 - n * ext_re;
        let span_im = side - 1 - n * ext_im;
        for b in 0..=span_im {
            for a in 0..=span_re {
                out.push(HomotheticCopy {
                    v: &sq.anchor + &GaussianInt::new(a, b),
                    n,
                    scale_independent: false,
                });
            }
        }
    }
    Ok(out)
}

/// Incremental scan of a digit stream: reports every copy of A completed
/// by the latest digit, tagged with the completing 1-based position.
pub fn scan_digit_stream(
    pattern: &LatticePattern,
    digits: &DigitSequence,
    n_max: u64,
) -> Vec<(usize, HomotheticCopy)> {
    let mut set: HashSet<GaussianInt> = HashSet::new();
    let mut reported: HashSet<(GaussianInt, u64)> = HashSet::new();
    let mut out = Vec::new();
    for (idx, d) in digits.digits().iter().enumerate() {
        if !set.insert(d.clone()) {
            continue;
        }
        if pattern.is_singleton() {
            out.push((
                idx + 1,
                HomotheticCopy { v: d - pattern.anchor(), n: 1, scale_independent: true },
            ));
            continue;
        }
        // every copy completed now must use the new point as one of its
        // pattern positions
        for p0 in pattern.points() {
            for n in 1..=n_max {
                let v = d - &scaled_point(p0, n);
                if reported.contains(&(v.clone(), n)) {
                    continue;
                }
                let ok = pattern
                    .points()
                    .iter()
                    .all(|p| set.contains(&(&v + &scaled_point(p, n))));
                if ok {
                    reported.insert((v.clone(), n));
                    out.push((idx + 1, HomotheticCopy { v, n, scale_independent: false }));
                }
            }
        }
    }
    out
}

/// Exhaustive reference search over the Minkowski-feasible translation
/// box; quadratic and only meant to cross-check [`find_copies`] on small
/// instances.
pub fn find_copies_brute_force(
    pattern: &LatticePattern,
    set: &[GaussianInt],
    n_max: u64,
) -> Result<Vec<HomotheticCopy>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let lookup: HashSet<&GaussianInt> = set.iter().collect();
    if pattern.is_singleton() {
        return find_copies(pattern, set, n_max);
    }
    let min_re = set.iter().map(|p| p.re.clone()).min().unwrap();
    let max_re = set.iter().map(|p| p.re.clone()).max().unwrap();
    let min_im = set.iter().map(|p| p.im.clone()).min().unwrap();
    let max_im = set.iter().map(|p| p.im.clone()).max().unwrap();
    let mut out = Vec::new();
    for n in 1..=n_max {
        let (ext_re, ext_im) = pattern.extents();
        let lo_re = &min_re - &(ext_re * BigInt::from(n));
        let lo_im = &min_im - &(ext_im * BigInt::from(n));
        let mut re = lo_re.clone();
        while re <= max_re {
            let mut im = lo_im.clone();
            while im <= max_im {
                let v = GaussianInt { re: re.clone(), im: im.clone() };
                let ok = pattern
                    .points()
                    .iter()
                    .all(|p| lookup.contains(&(&v + &scaled_point(p, n))));
                if ok {
                    out.push(HomotheticCopy { v, n, scale_independent: false });
                }
                im += 1;
            }
            re += 1;
        }
    }
    out.sort_by(|a, b| (&a.v, a.n).cmp(&(&b.v, b.n)));
    Ok(out)
}
