//! Numerical diagnostics mirroring the dimension arguments: box-counting
//! estimation, mass-distribution scaling, covering-word statistics and
//! the Hölder-exponent diagnostic for the elimination map.
//!
//! Distances between constructed points are always handled through
//! cylinder-diameter bounds in the log domain; the magnitudes involved
//! (3^(-n^2) for depth-n seed words) pass below double-precision range
//! within a handful of digits.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gaussian::{GaussianInt, GaussianRational};
use crate::hurwitz::{self, DigitSequence};
use crate::ifs::{self, PropertyCheck};
use crate::logdomain::{ln_abs_minus_one, ln_abs_plus_one, ln_bigint, ln_ratio, ratio_to_f64};
use crate::seedset::{self, InsertionSchedule, SHELL_BASE};
use crate::{Error, Result};

/// A sampled complex value with an enclosure radius (0 for exact points).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EnclosedPoint {
    pub re: f64,
    pub im: f64,
    pub rad: f64,
}

/// Result of one grid count.
#[derive(Debug, Clone, Serialize)]
pub struct BoxCount {
    pub count: usize,
    /// Points whose enclosure straddles a grid line; each is counted once.
    pub boundary_ambiguous: usize,
}

/// Number of r-grid boxes hit by at least one point. Requires every
/// enclosure diameter below r/10 so box assignment is unambiguous up to
/// the reported boundary count.
pub fn box_count(points: &[EnclosedPoint], r: f64) -> Result<BoxCount> {
    if points.iter().any(|p| 2.0 * p.rad >= r / 10.0) {
        return Err(Error::ScaleTooSmall(r));
    }
    let mut boxes: HashSet<(i64, i64)> = HashSet::new();
    let mut ambiguous = 0usize;
    for p in points {
        let ix = (p.re / r).floor() as i64;
        let iy = (p.im / r).floor() as i64;
        let cross_x = ((p.re - p.rad) / r).floor() as i64 != ((p.re + p.rad) / r).floor() as i64;
        let cross_y = ((p.im - p.rad) / r).floor() as i64 != ((p.im + p.rad) / r).floor() as i64;
        if cross_x || cross_y {
            ambiguous += 1;
        }
        boxes.insert((ix, iy));
    }
    Ok(BoxCount { count: boxes.len(), boundary_ambiguous: ambiguous })
}

/// Scales, counts and the least-squares fit of log N against log(1/r).
#[derive(Debug, Clone, Serialize)]
pub struct DimensionScan {
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub method: String,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return (0.0, my, 1.0);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Run [`box_count`] over a log-spaced grid of scales and fit the slope.
pub fn dimension_scan(
    points: &[EnclosedPoint],
    r_min: f64,
    r_max: f64,
    steps: usize,
) -> Result<DimensionScan> {
    if !(r_min < r_max) || steps < 2 {
        return Err(Error::InsufficientSamples("need r_min < r_max and steps >= 2".into()));
    }
    let mut scales = Vec::with_capacity(steps);
    for i in 0..steps {
        let t = i as f64 / (steps - 1) as f64;
        // descending from r_max to r_min
        scales.push((r_max.ln() * (1.0 - t) + r_min.ln() * t).exp());
    }
    let mut counts = Vec::with_capacity(steps);
    for &r in &scales {
        counts.push(box_count(points, r)?.count);
    }
    let xs: Vec<f64> = scales.iter().map(|r| (1.0 / r).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let (slope, intercept, r_squared) = least_squares(&xs, &ys);
    Ok(DimensionScan { scales, counts, slope, intercept, r_squared, method: "boxcount".into() })
}

/// Depth-d orbit of 0 under the four-corner similarity IFS on the unit
/// square (ratio 1/4, maps x -> x/4 + 3c/4 for the corners c): the
/// known-dimension-1 calibration set. Coordinates are exact dyadics.
pub fn calibration_ifs_points(depth: usize) -> Vec<EnclosedPoint> {
    let corners = [(0.0, 0.0), (0.75, 0.0), (0.0, 0.75), (0.75, 0.75)];
    let mut pts = vec![(0.0f64, 0.0f64)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(pts.len() * 4);
        for &(cx, cy) in &corners {
            for &(x, y) in &pts {
                next.push((x * 0.25 + cx, y * 0.25 + cy));
            }
        }
        pts = next;
    }
    pts.into_iter().map(|(re, im)| EnclosedPoint { re, im, rad: 0.0 }).collect()
}

/// Convergent points of random seed words, with the cylinder upper bound
/// as enclosure radius.
pub fn seed_set_points(depth: usize, count: usize, seed: u64) -> Vec<EnclosedPoint> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let w = seedset::sample_seed_word(depth, seed ^ i.wrapping_mul(0x9e3779b97f4a7c15));
            let v = hurwitz::reconstruct(&w).expect("seed word");
            let rad = ifs::cylinder(&w).expect("seed word").log_diam_hi.exp();
            EnclosedPoint { re: ratio_to_f64(v.re()), im: ratio_to_f64(v.im()), rad }
        })
        .collect()
}

/// One (center, radius) cell of the mass-distribution estimate.
#[derive(Debug, Clone, Serialize)]
pub struct MassCell {
    pub center_index: usize,
    pub r: f64,
    pub hits: usize,
    pub fraction: f64,
    pub used_in_fit: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MassDistReport {
    pub epsilon: f64,
    pub depth: usize,
    pub samples: usize,
    pub alpha: f64,
    /// alpha is compared against 1 - epsilon with this tolerance.
    pub tolerance: f64,
    pub pass: bool,
    pub cells: Vec<MassCell>,
}

const MASS_MIN_HITS: usize = 20;
const MASS_CENTERS: usize = 5;
const MASS_TOLERANCE: f64 = 0.1;

/// Monte-Carlo check of the mass-distribution scaling: estimate
/// mu(B(x, r)) as the empirical fraction of independent seed-word
/// convergents within r of x and fit the exponent alpha in
/// mu(B(x, r)) ~ r^alpha against 1 - epsilon.
///
/// Centers come from one RNG stream and mass samples from an independent
/// one, avoiding selection bias.
pub fn mass_distribution_check(
    epsilon: f64,
    depth: usize,
    samples: usize,
    radii: &[f64],
    seed: u64,
) -> Result<MassDistReport> {
    if samples == 0 {
        return Err(Error::InsufficientSamples("samples must be >= 1".into()));
    }
    if depth == 0 || radii.is_empty() {
        return Err(Error::InsufficientSamples("need depth >= 1 and a radius panel".into()));
    }
    let centers: Vec<(f64, f64)> = (0..MASS_CENTERS as u64)
        .map(|i| {
            let w = seedset::sample_seed_word(depth, seed.wrapping_mul(31).wrapping_add(i) ^ 0xc0ffee);
            let v = hurwitz::reconstruct(&w).expect("seed word");
            (ratio_to_f64(v.re()), ratio_to_f64(v.im()))
        })
        .collect();
    let points: Vec<(f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let w = seedset::sample_seed_word(depth, seed ^ i.wrapping_mul(0x9e3779b97f4a7c15));
            let v = hurwitz::reconstruct(&w).expect("seed word");
            (ratio_to_f64(v.re()), ratio_to_f64(v.im()))
        })
        .collect();

    let diam_u = std::f64::consts::SQRT_2; // diameter of the unit box
    let mut cells = Vec::new();
    let mut per_center_alphas = Vec::new();
    for (ci, &(cx, cy)) in centers.iter().enumerate() {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &r in radii {
            let hits = points
                .iter()
                .filter(|&&(px, py)| {
                    let (dx, dy) = (px - cx, py - cy);
                    (dx * dx + dy * dy).sqrt() < r
                })
                .count();
            let fraction = hits as f64 / samples as f64;
            // r beyond diam(U) has fraction 1 by construction; excluded
            let usable = hits >= MASS_MIN_HITS && fraction < 1.0 && r < diam_u;
            cells.push(MassCell { center_index: ci, r, hits, fraction, used_in_fit: usable });
            if usable {
                xs.push(r.ln());
                ys.push(fraction.ln());
            }
        }
        if xs.len() >= 2 {
            per_center_alphas.push(least_squares(&xs, &ys).0);
        }
    }
    if per_center_alphas.is_empty() {
        return Err(Error::InsufficientSamples(format!(
            "no center accumulated {MASS_MIN_HITS} hits on two or more radii"
        )));
    }
    let alpha = per_center_alphas.iter().sum::<f64>() / per_center_alphas.len() as f64;
    let pass = alpha >= 1.0 - epsilon - MASS_TOLERANCE;
    Ok(MassDistReport {
        epsilon,
        depth,
        samples,
        alpha,
        tolerance: MASS_TOLERANCE,
        pass,
        cells,
    })
}

/// Covering words of B(x, r): the branch-and-bound enumeration of words
/// whose cylinders meet the ball at the derivative threshold r, plus the
/// prefix-pruned antichain V*.
#[derive(Debug, Clone)]
pub struct CoverStats {
    pub r: f64,
    /// V(x, r): all threshold words meeting the ball (conservative test).
    pub words: Vec<DigitSequence>,
    /// V*(x, r): prefix-free subset actually used by the covering bound.
    pub pruned: Vec<DigitSequence>,
    pub max_len: usize,
    pub count: usize,
    /// Set when the enumeration budget was exhausted.
    pub truncated: bool,
}

/// r0 = min over shell 1 of |D phi_i(0)| = 1/50 (largest shell-1 squared
/// modulus is 5^2 + 5^2).
pub fn cover_radius_floor() -> f64 {
    1.0 / 50.0
}

struct CoverNode {
    word: Vec<GaussianInt>,
    p_prev: GaussianInt,
    p: GaussianInt,
    q_prev: GaussianInt,
    q: GaussianInt,
    sum_ln_minus: f64, // sum of ln(|c_j| - 1)
}

impl CoverNode {
    fn log_dphi(&self) -> f64 {
        // |D phi_w(0)| = 1/|q_n|^2
        if self.word.is_empty() {
            0.0
        } else {
            -ln_bigint(&self.q.norm_sq())
        }
    }

    fn extend(&self, c: GaussianInt) -> CoverNode {
        let p = &(&c * &self.p) + &self.p_prev;
        let q = &(&c * &self.q) + &self.q_prev;
        let sum_ln_minus = self.sum_ln_minus + ln_abs_minus_one(&c.norm_sq());
        let mut word = self.word.clone();
        word.push(c);
        CoverNode { word, p_prev: self.p.clone(), p, q_prev: self.q.clone(), q, sum_ln_minus }
    }

    /// Conservative ball-intersection test: center distance against
    /// r + diam upper bound.
    fn meets_ball(&self, x: &GaussianRational, r: f64) -> bool {
        if self.word.is_empty() {
            return true;
        }
        let center = GaussianRational::new(self.p.clone(), self.q.clone()).expect("q != 0");
        let diff = &center - x;
        let d2 = diff.abs_sq();
        let diam_hi = (std::f64::consts::LN_2 - 2.0 * self.sum_ln_minus).exp();
        let bound = r + diam_hi + 1e-12;
        if d2 == BigRational::from(BigInt::from(0)) {
            return true;
        }
        0.5 * ln_ratio(&d2) <= bound.ln()
    }

    /// Threshold condition: the largest-modulus member of the next shell
    /// pushes the derivative below r.
    fn next_shell_escapes(&self, r: f64) -> bool {
        let m = self.word.len() as u64 + 1;
        let corner = &seedset::shell_high(m) - &BigInt::from(1);
        let a = GaussianInt { re: corner.clone(), im: corner };
        let q_next = &(&a * &self.q) + &self.q_prev;
        -ln_bigint(&q_next.norm_sq()) < r.ln()
    }
}

/// Enumerate V(x, r) and V*(x, r) for a point x given by a seed word.
///
/// The word must be deep enough that the derivative threshold r is
/// reached along x's own trajectory.
pub fn cover_words(x_word: &DigitSequence, r: f64, budget: usize) -> Result<CoverStats> {
    let r0 = cover_radius_floor();
    if !(r > 0.0) || r >= r0 {
        return Err(Error::RadiusTooLarge(r, r0));
    }
    seedset::word_weight(x_word).map_err(|e| match e {
        Error::NotSeedWord(m) => Error::NotSeedWord(m),
        other => other,
    })?;
    let x = hurwitz::reconstruct(x_word)?;
    let x_depth_dphi = {
        let conv = hurwitz::convergents(x_word)?;
        -ln_bigint(&conv.last().unwrap().q.norm_sq())
    };
    if x_depth_dphi >= r.ln() {
        return Err(Error::InsufficientSamples(format!(
            "seed word of depth {} has not reached the derivative threshold {r}",
            x_word.len()
        )));
    }

    let root = CoverNode {
        word: Vec::new(),
        p_prev: GaussianInt::new(1, 0),
        p: GaussianInt::zero(),
        q_prev: GaussianInt::zero(),
        q: GaussianInt::new(1, 0),
        sum_ln_minus: 0.0,
    };
    let mut frontier = vec![root];
    let mut words: Vec<Vec<GaussianInt>> = Vec::new();
    let mut evaluated = 0usize;
    let mut truncated = false;
    'bfs: while let Some(node) = frontier.pop() {
        let level = node.word.len() as u64 + 1;
        let members: Vec<GaussianInt> = match seedset::shell_members(level) {
            Ok(it) => it.collect(),
            Err(_) => {
                truncated = true;
                break;
            }
        };
        for c in members {
            evaluated += 1;
            if evaluated > budget {
                truncated = true;
                break 'bfs;
            }
            let child = node.extend(c);
            if child.log_dphi() < r.ln() || !child.meets_ball(&x, r) {
                continue;
            }
            // |D phi| >= r and the cylinder meets the ball; the child is
            // in V iff the next shell crosses the threshold, and is
            // extended regardless (deeper V words may coexist).
            if child.next_shell_escapes(r) {
                words.push(child.word.clone());
            }
            frontier.push(child);
        }
    }

    // prune prefix-extensions: V* keeps only words with no proper prefix
    // also in V
    let word_set: HashSet<&[GaussianInt]> = words.iter().map(|w| w.as_slice()).collect();
    let pruned: Vec<Vec<GaussianInt>> = words
        .iter()
        .filter(|w| !(1..w.len()).any(|k| word_set.contains(&w[..k])))
        .cloned()
        .collect();

    let max_len = words.iter().map(|w| w.len()).max().unwrap_or(0);
    let to_seq =
        |w: Vec<GaussianInt>| DigitSequence::new(w, false).expect("shell digits are admissible");
    let pruned: Vec<DigitSequence> = pruned.into_iter().map(to_seq).collect();
    let count = pruned.len();
    Ok(CoverStats {
        r,
        words: words.into_iter().map(to_seq).collect(),
        pruned,
        max_len,
        count,
        truncated,
    })
}

/// One sampled Hölder pair: log-domain distance bounds for the inserted
/// points (x side) and their seed preimages (y side).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HolderPair {
    pub split: u64,
    pub log_x_lo: f64,
    pub log_y_hi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HolderFit {
    pub epsilon: f64,
    /// 1/(1 + 5 epsilon), the exponent of the proposition.
    pub exponent: f64,
    /// Slope of log|y1-y2| against log|x1-x2| over deep-split pairs.
    pub fitted_exponent: f64,
    /// ln of the witness constant C: every sampled pair satisfies
    /// log|y1-y2| <= exponent * log|x1-x2| + witness_log_c.
    pub witness_log_c: f64,
    /// Fraction of freshly resampled pairs respecting the same witness.
    pub stability_fraction: f64,
    /// Smallest x-side distance bound among pairs split before n_1; the
    /// separate finite-infimum branch of the proposition.
    pub floor_branch_min_log: Option<f64>,
    pub pairs: Vec<HolderPair>,
}

fn sample_holder_pair(
    schedule: &InsertionSchedule,
    block_cost_prefix: &[f64],
    gamma_ln: f64,
    idx: u64,
    seed: u64,
) -> HolderPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ idx.wrapping_mul(0x9e3779b97f4a7c15));
    let n_limit = *schedule.levels.last().unwrap();
    let split = rng.gen_range(0..=n_limit);

    // shared prefix c_1..c_split, then a differing digit at split+1
    let mut sum_plus = 0.0; // sum_{j<=split+1} ln(|c_j|+1), y1's digits
    let mut sum_minus = 0.0; // sum_{j<=split} ln(|c_j|-1)
    for j in 1..=split {
        let c = seedset::random_shell_digit(j, &mut rng);
        sum_plus += ln_abs_plus_one(&c.norm_sq());
        sum_minus += ln_abs_minus_one(&c.norm_sq());
    }
    let d1 = seedset::random_shell_digit(split + 1, &mut rng);
    loop {
        let d2 = seedset::random_shell_digit(split + 1, &mut rng);
        if d2 != d1 {
            break;
        }
    }
    sum_plus += ln_abs_plus_one(&d1.norm_sq());

    // blocks W_k with n_k <= split are shared by the x-side prefix
    let blocks: f64 = schedule
        .levels
        .iter()
        .zip(block_cost_prefix)
        .filter(|(&nk, _)| nk <= split)
        .map(|(_, &cost)| cost)
        .last()
        .unwrap_or(0.0);

    // |x1 - x2| >= gamma * prod_{j <= split + blocks + 1} (|c_j(x)|+1)^-2
    let log_x_lo = gamma_ln - 2.0 * (sum_plus + blocks);
    // |y1 - y2| <= 2 * prod_{j <= split} (|c_j(y)|-1)^-2
    let log_y_hi = std::f64::consts::LN_2 - 2.0 * sum_minus;
    HolderPair { split, log_x_lo, log_y_hi }
}

/// Sample pairs of seed words sharing a random-length prefix, bound the
/// distances of the pair and of their insert-images through cylinder
/// diameters, and exhibit a witness constant for the Hölder inequality
/// |f(x1) - f(x2)| <= C |x1 - x2|^(1/(1+5 eps)).
pub fn holder_diagnostic(
    epsilon: f64,
    schedule: &InsertionSchedule,
    pairs: usize,
    seed: u64,
) -> Result<HolderFit> {
    schedule.verify().map_err(|_| Error::ScheduleUnverified)?;
    if pairs == 0 {
        return Err(Error::InsufficientSamples("pairs must be >= 1".into()));
    }
    let exponent = 1.0 / (1.0 + 5.0 * epsilon);
    let gamma_ln = ifs::derived_constants().gamma_lower().ln();

    // cumulative per-level block cost: sum_{k' <= k} sum_{i in W_k'} ln(|i|+1)
    let mut block_cost_prefix = Vec::with_capacity(schedule.levels.len());
    let mut acc = 0.0;
    for k in 1..=schedule.levels.len() {
        for p in &seedset::square(k, schedule)?.points {
            acc += ln_abs_plus_one(&p.norm_sq());
        }
        block_cost_prefix.push(acc);
    }

    let sample_batch = |count: usize, salt: u64| -> Vec<HolderPair> {
        (0..count as u64)
            .into_par_iter()
            .map(|i| sample_holder_pair(schedule, &block_cost_prefix, gamma_ln, i, seed ^ salt))
            .collect()
    };

    let batch = sample_batch(pairs, 0);
    let n1 = schedule.levels[0];
    let witness_log_c = batch
        .iter()
        .map(|p| p.log_y_hi - exponent * p.log_x_lo)
        .fold(f64::NEG_INFINITY, f64::max);
    let deep: Vec<&HolderPair> = batch.iter().filter(|p| p.split >= n1).collect();
    let fitted_exponent = if deep.len() >= 2 {
        let xs: Vec<f64> = deep.iter().map(|p| p.log_x_lo).collect();
        let ys: Vec<f64> = deep.iter().map(|p| p.log_y_hi).collect();
        least_squares(&xs, &ys).0
    } else {
        f64::NAN
    };
    let floor_branch_min_log = batch
        .iter()
        .filter(|p| p.split < n1)
        .map(|p| p.log_x_lo)
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))));

    // stability: a fresh sample should respect the same witness constant
    let fresh = sample_batch(pairs, 0x5eed);
    let ok = fresh
        .iter()
        .filter(|p| p.log_y_hi <= exponent * p.log_x_lo + witness_log_c + 1e-9)
        .count();
    let stability_fraction = ok as f64 / fresh.len() as f64;

    Ok(HolderFit {
        epsilon,
        exponent,
        fitted_exponent,
        witness_log_c,
        stability_fraction,
        floor_branch_min_log,
        pairs: batch,
    })
}

/// Machine-readable outcome of the full lemma battery.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaReport {
    pub trials: usize,
    pub checks: Vec<PropertyCheck>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| !c.failed())
    }
}

fn check(name: &str, pass: bool, witness: String, margin: Option<f64>) -> PropertyCheck {
    PropertyCheck {
        name: name.into(),
        status: if pass { "pass" } else { "fail" }.into(),
        worst_witness: witness,
        margin,
    }
}

/// Corner points of cl(U) plus the center; images under a word sample the
/// cylinder and lower-bound its true diameter.
fn closed_box_corners() -> Vec<GaussianRational> {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut out = Vec::new();
    for sr in [-1i64, 1] {
        for si in [-1i64, 1] {
            out.push(GaussianRational::from_coords(
                &half * BigRational::from(BigInt::from(sr)),
                &half * BigRational::from(BigInt::from(si)),
            ));
        }
    }
    out.push(GaussianRational::zero());
    out
}

/// ln of the max pairwise distance among the images of the box corners:
/// an exact-rational lower estimate of the cylinder diameter, evaluated
/// in the log domain.
pub fn sampled_diameter_log(word: &DigitSequence) -> Result<f64> {
    let corners = closed_box_corners();
    let images: Vec<GaussianRational> = corners
        .iter()
        .map(|v| ifs::apply_word(word, v))
        .collect::<Result<_>>()?;
    let mut best: Option<BigRational> = None;
    for i in 0..images.len() {
        for j in (i + 1)..images.len() {
            let d2 = (&images[i] - &images[j]).abs_sq();
            if best.as_ref().map_or(true, |b| &d2 > b) {
                best = Some(d2);
            }
        }
    }
    Ok(0.5 * ln_ratio(&best.expect("multiple corners")))
}

/// Diameter sandwich and |q_n| monotonicity for one word with an explicit
/// gamma (negative controls corrupt it); returns an error message on
/// violation.
pub fn sandwich_violation(word: &DigitSequence, gamma: f64) -> Result<Option<String>> {
    let info = ifs::cylinder_with_gamma(word, gamma)?;
    let sampled = sampled_diameter_log(word)?;
    if !(info.log_diam_lo < sampled) {
        return Ok(Some(format!("lower bound {} >= sampled {}", info.log_diam_lo, sampled)));
    }
    if !(sampled <= info.log_diam_hi) {
        return Ok(Some(format!("sampled {} > upper bound {}", sampled, info.log_diam_hi)));
    }
    let conv = hurwitz::convergents(word)?;
    for w in conv.windows(2) {
        if w[0].q.norm_sq() >= w[1].q.norm_sq() {
            return Ok(Some(format!("|q| not increasing at index {}", w[1].index)));
        }
    }
    Ok(None)
}

/// ln C_n for the measure-vs-diameter bound: C_n = (1/gamma) *
/// prod_{j<=n} (sqrt(8) 3^j + 1)^2 / #I^(j).
pub fn measure_bound_log_c(depth: usize) -> f64 {
    let mut ln_c = -ifs::derived_constants().gamma_lower().ln();
    for j in 1..=depth as u64 {
        let shell_sq = BigInt::from(8) * BigInt::from(9u32).pow(j as u32);
        ln_c += 2.0 * ln_abs_plus_one(&shell_sq);
        ln_c -= ln_bigint(&seedset::shell_cardinality(j).expect("j >= 1"));
    }
    ln_c
}

/// The full property battery behind the dimension lemmas. Every check is
/// deterministic in (trials, seed).
pub fn verify_lemmas(trials: usize, seed: u64) -> LemmaReport {
    let trials = trials.max(1);
    let mut checks = Vec::new();
    let gamma = ifs::derived_constants().gamma_lower();

    // shell cardinality formula vs enumeration
    {
        let mut worst = String::new();
        let mut pass = true;
        for n in 1..=4u64 {
            let formula = seedset::shell_cardinality(n).unwrap();
            let counted = seedset::shell_members(n).unwrap().count();
            if formula != BigInt::from(counted) {
                pass = false;
                worst = format!("n={n}: formula {formula} vs enumeration {counted}");
            }
        }
        checks.push(check("shell_cardinality", pass, worst, None));
    }

    // diameter sandwich + |q_n| monotonicity on random seed words
    {
        let failures: Vec<String> = (0..trials.min(2000) as u64)
            .into_par_iter()
            .filter_map(|i| {
                let depth = 1 + (i % 20) as usize;
                let w = seedset::sample_seed_word(depth, seed ^ i.wrapping_mul(0x2545f4914f6cdd1d));
                sandwich_violation(&w, gamma).ok().flatten()
            })
            .collect();
        checks.push(check(
            "diameter_sandwich",
            failures.is_empty(),
            failures.first().cloned().unwrap_or_default(),
            None,
        ));
    }

    // measure bound: log mu([w]) <= ln C + log_diam_lo(w)
    {
        let worst = (0..trials.min(2000) as u64)
            .into_par_iter()
            .map(|i| {
                let depth = 1 + (i % 10) as usize;
                let w = seedset::sample_seed_word(depth, seed ^ i.wrapping_mul(0x9e3779b97f4a7c15));
                let mu = seedset::word_weight(&w).unwrap();
                let lo = ifs::cylinder(&w).unwrap().log_diam_lo;
                let margin = measure_bound_log_c(depth) + lo - mu;
                (margin, format!("depth {depth} word, margin {margin}"))
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("trials >= 1");
        checks.push(check("measure_vs_diameter", worst.0 >= 0.0, worst.1, Some(worst.0)));
    }

    // schedule inequalities across an epsilon panel
    {
        let mut pass = true;
        let mut worst = String::new();
        for eps in [0.05, 0.1, 0.5, 1.0] {
            match seedset::make_schedule(eps, 6, None).and_then(|s| s.verify().map(|_| s)) {
                Ok(_) => {}
                Err(e) => {
                    pass = false;
                    worst = format!("eps={eps}: {e}");
                }
            }
        }
        checks.push(check("schedule_inequalities", pass, worst, None));
    }

    // square chain separation, insertion round trip, distinctness, lemesti1
    {
        let schedule = seedset::make_schedule(1.0, 6, None).expect("feasible");
        let mut pass = true;
        let mut worst = String::new();

        for k in 1..schedule.levels.len() {
            let a = seedset::square(k, &schedule).unwrap();
            let b = seedset::square(k + 1, &schedule).unwrap();
            let max_a = a.points.iter().map(|p| p.norm_inf()).max().unwrap();
            let min_b = b.points.iter().map(|p| p.norm_inf()).min().unwrap();
            if max_a >= min_b {
                pass = false;
                worst = format!("squares {k} and {} overlap in max-norm", k + 1);
            }
        }
        checks.push(check("square_disjointness", pass, worst, None));

        let roundtrip_fail = (0..trials.min(500) as u64)
            .into_par_iter()
            .find_map_any(|i| {
                let depth = (i % (schedule.levels[2] + 1)) as usize;
                let y = seedset::sample_seed_word(depth, seed ^ i.wrapping_mul(0x6a09e667f3bcc909));
                let x = seedset::insert(&y, &schedule).ok()?;
                let mut seen = HashSet::new();
                if !x.digits().iter().all(|d| seen.insert(d.clone())) {
                    return Some(format!("inserted word of depth {depth} repeats a digit"));
                }
                match seedset::eliminate(&x, &schedule) {
                    Ok(back) if back == y => None,
                    Ok(_) => Some(format!("round trip mismatch at depth {depth}")),
                    Err(e) => Some(format!("eliminate failed at depth {depth}: {e}")),
                }
            });
        checks.push(check(
            "insert_eliminate_roundtrip",
            roundtrip_fail.is_none(),
            roundtrip_fail.unwrap_or_default(),
            None,
        ));

        let mut pass = true;
        let mut margin = f64::INFINITY;
        let mut worst = String::new();
        for q in 1..=schedule.levels.len() {
            let (lhs, rhs) = seedset::lemesti1_log_sides(&schedule, q).unwrap();
            if lhs - rhs < margin {
                margin = lhs - rhs;
                worst = format!("q={q}: lhs {lhs}, rhs {rhs}");
            }
            pass &= lhs >= rhs;
        }
        checks.push(check("lemesti1_modification_cost", pass, worst, Some(margin)));

        // homothetic copies inside W_k
        let two_by_two = crate::patterns::LatticePattern::new(vec![
            GaussianInt::new(0, 0),
            GaussianInt::new(1, 0),
            GaussianInt::new(0, 1),
            GaussianInt::new(1, 1),
        ])
        .unwrap();
        let reference = InsertionSchedule { epsilon: 1.0, t: SHELL_BASE, levels: vec![16], verified_to: 160 };
        let copies = crate::patterns::copies_in_square(&two_by_two, 1, &reference).unwrap();
        checks.push(check(
            "pattern_copies_in_square",
            copies.len() == 14,
            format!("side-4 square holds {} copies of the 2x2 pattern", copies.len()),
            None,
        ));
    }

    LemmaReport { trials, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_count_basics() {
        let p = EnclosedPoint { re: 0.3, im: 0.4, rad: 0.0 };
        assert_eq!(box_count(&[p], 0.25).unwrap().count, 1);
        // duplicates do not change the count
        assert_eq!(box_count(&[p, p, p], 0.25).unwrap().count, 1);
        // coarse enclosure rejected
        let fat = EnclosedPoint { re: 0.0, im: 0.0, rad: 0.2 };
        assert!(matches!(box_count(&[fat], 0.25), Err(Error::ScaleTooSmall(_))));
        // straddling enclosures are flagged
        let edge = EnclosedPoint { re: 0.2501, im: 0.1, rad: 0.001 };
        assert_eq!(box_count(&[edge], 0.25).unwrap().boundary_ambiguous, 1);
    }

    #[test]
    fn calibration_slope_is_one() {
        let pts = calibration_ifs_points(9);
        assert_eq!(pts.len(), 4usize.pow(9));
        let scan = dimension_scan(&pts, 4f64.powi(-8), 4f64.powi(-3), 6).unwrap();
        assert!((scan.slope - 1.0).abs() < 0.05, "slope = {}", scan.slope);
        assert!(scan.r_squared > 0.99);
        // counts nondecreasing as r decreases
        assert!(scan.counts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn single_point_slope_is_zero() {
        let pts = [EnclosedPoint { re: 0.1, im: 0.1, rad: 0.0 }];
        let scan = dimension_scan(&pts, 1e-4, 1e-2, 5).unwrap();
        assert_eq!(scan.slope, 0.0);
    }

    #[test]
    fn mass_distribution_small_run() {
        let radii: Vec<f64> = (0..6).map(|i| 0.1 * 0.5f64.powi(i)).collect();
        let report = mass_distribution_check(0.2, 4, 20_000, &radii, 11).unwrap();
        assert!(report.pass, "alpha = {}", report.alpha);
        assert!(report.alpha > 0.7 && report.alpha < 1.4, "alpha = {}", report.alpha);
        // errors
        assert!(mass_distribution_check(0.2, 4, 0, &radii, 1).is_err());
        // a radius beyond diam(U) is excluded from the fit
        let wide = mass_distribution_check(0.2, 3, 5_000, &[2.0, 0.05, 0.02], 1).unwrap();
        assert!(wide.cells.iter().filter(|c| c.r == 2.0).all(|c| !c.used_in_fit));
    }

    #[test]
    fn cover_words_near_threshold() {
        // r just below r0: every covering word has length 1
        let x = seedset::sample_seed_word(6, 5);
        let stats = cover_words(&x, 0.9 * cover_radius_floor(), 1_000_000).unwrap();
        assert!(!stats.truncated);
        assert!(stats.max_len <= 1, "max_len = {}", stats.max_len);
        assert!(stats.count >= 1 && stats.count <= 96);
        // length bound |w| <= sqrt(2 ln(1/r))
        let bound = (2.0 * (1.0 / stats.r).ln()).sqrt();
        assert!(stats.max_len as f64 <= bound);
        // antichain
        for a in &stats.pruned {
            for b in &stats.pruned {
                if a.len() < b.len() {
                    assert_ne!(a.digits(), &b.digits()[..a.len()]);
                }
            }
        }
        // radius at or above r0 rejected
        assert!(matches!(
            cover_words(&x, cover_radius_floor(), 1000),
            Err(Error::RadiusTooLarge(_, _))
        ));
        // too-shallow word rejected
        let shallow = seedset::sample_seed_word(1, 5);
        assert!(cover_words(&shallow, 1e-6, 1000).is_err());
    }

    #[test]
    fn cover_words_budget_truncates() {
        let x = seedset::sample_seed_word(6, 5);
        let stats = cover_words(&x, 1e-4, 50).unwrap();
        assert!(stats.truncated);
    }

    #[test]
    fn holder_diagnostic_small_run() {
        let schedule = seedset::make_schedule(0.1, 3, None).unwrap();
        let fit = holder_diagnostic(0.1, &schedule, 300, 17).unwrap();
        assert!((fit.exponent - 1.0 / 1.5).abs() < 1e-12);
        assert!(fit.witness_log_c.is_finite());
        assert!(fit.stability_fraction >= 0.99, "stability {}", fit.stability_fraction);
        // every pair satisfies the inequality with the witness constant
        for p in &fit.pairs {
            assert!(p.log_y_hi <= fit.exponent * p.log_x_lo + fit.witness_log_c + 1e-9);
        }
        if let Some(floor) = fit.floor_branch_min_log {
            assert!(floor.is_finite());
        }
        // unverified schedule rejected
        let mut bad = schedule.clone();
        bad.levels[0] = 2;
        assert_eq!(holder_diagnostic(0.1, &bad, 10, 1).unwrap_err(), Error::ScheduleUnverified);
    }

    #[test]
    fn lemma_battery_passes() {
        let report = verify_lemmas(200, 23);
        assert!(report.all_pass(), "{:?}", report.checks);
        // trivially small run is still a valid report
        let tiny = verify_lemmas(1, 23);
        assert!(tiny.all_pass());
    }

    #[test]
    fn corrupted_gamma_breaks_the_sandwich() {
        // negative control: inflating gamma invalidates the lower bound
        // on deep cylinders
        let violations = (0..40u64)
            .filter_map(|i| {
                let w = seedset::sample_seed_word(12, i);
                let gamma = ifs::derived_constants().gamma * 40.0;
                sandwich_violation(&w, gamma).unwrap()
            })
            .count();
        assert!(violations > 0);
    }
}
