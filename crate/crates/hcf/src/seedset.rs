//! The seed-set construction: digit shells I^(n), the finite-depth product
//! measure, insertion schedules {n_k}, the integer squares W_k and the
//! digit-level insertion / elimination maps.

use num_bigint::{BigInt, RandBigInt};
use num_traits::{Signed, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gaussian::GaussianInt;
use crate::hurwitz::DigitSequence;
use crate::logdomain::ln_bigint;
use crate::{Error, Result};

/// The fixed shell base t = 3. The cardinality formula and every schedule
/// inequality below are instantiated at this value.
pub const SHELL_BASE: u32 = 3;

fn t_pow(n: u64) -> BigInt {
    BigInt::from(SHELL_BASE).pow(n as u32)
}

/// Lower max-norm bound of shell n: 3^n.
pub fn shell_low(n: u64) -> BigInt {
    t_pow(n)
}

/// Exclusive upper max-norm bound of shell n: 2 * 3^n.
pub fn shell_high(n: u64) -> BigInt {
    BigInt::from(2) * t_pow(n)
}

/// Whether a digit lies in shell n: 3^n <= max(|k|, |l|) < 2 * 3^n.
pub fn in_shell(n: u64, g: &GaussianInt) -> bool {
    let inf = g.norm_inf();
    inf >= shell_low(n) && inf < shell_high(n)
}

/// #I^(n) = 12 * 3^(2n) - 4 * 3^n.
pub fn shell_cardinality(n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidShellLevel);
    }
    let t = t_pow(n);
    Ok(BigInt::from(12) * &t * &t - BigInt::from(4) * &t)
}

/// Enumerate shell n exactly. Only small levels are enumerable; the
/// cardinality grows as 12 * 9^n.
pub fn shell_members(n: u64) -> Result<impl Iterator<Item = GaussianInt>> {
    if n == 0 {
        return Err(Error::InvalidShellLevel);
    }
    let low = shell_low(n).to_i64().ok_or(Error::ShellTooLarge(n))?;
    let high = 2i64.checked_mul(low).ok_or(Error::ShellTooLarge(n))?;
    Ok((-(high - 1)..high).flat_map(move |k| {
        (-(high - 1)..high).filter_map(move |l| {
            let inf = k.abs().max(l.abs());
            (inf >= low && inf < high).then(|| GaussianInt::new(k, l))
        })
    }))
}

/// A uniform draw from shell n, by rejection from the bounding box
/// (acceptance rate ~ 3/4 independent of n).
pub fn random_shell_digit(n: u64, rng: &mut ChaCha8Rng) -> GaussianInt {
    let low = shell_low(n);
    let box_lo = BigInt::from(1) - shell_high(n);
    let box_hi = shell_high(n); // exclusive
    loop {
        let k = rng.gen_bigint_range(&box_lo, &box_hi);
        let l = rng.gen_bigint_range(&box_lo, &box_hi);
        if k.abs().max(l.abs()) >= low {
            return GaussianInt { re: k, im: l };
        }
    }
}

/// Draw a seed word: coordinate j sampled uniformly and independently
/// from shell j, the finite-depth marginal of the product measure.
pub fn sample_seed_word(depth: usize, seed: u64) -> DigitSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_seed_word_rng(depth, &mut rng)
}

pub fn sample_seed_word_rng(depth: usize, rng: &mut ChaCha8Rng) -> DigitSequence {
    let digits = (1..=depth as u64).map(|j| random_shell_digit(j, rng)).collect();
    DigitSequence::new(digits, false).expect("shell digits are D2")
}

/// log mu([w]) = -sum_j ln #I^(j): the exact log-probability of a seed
/// word under the uniform per-shell marginals.
pub fn word_weight(word: &DigitSequence) -> Result<f64> {
    let mut sum = 0.0;
    for (idx, d) in word.digits().iter().enumerate() {
        let j = idx as u64 + 1;
        if !in_shell(j, d) {
            return Err(Error::NotSeedWord(format!("digit {} at position {} is not in shell {}", d, j, j)));
        }
        sum -= ln_bigint(&shell_cardinality(j)?);
    }
    Ok(sum)
}

/// A verified insertion schedule: epsilon plus strictly increasing levels
/// n_1 < ... < n_K satisfying the three schedule inequalities, with
/// the quadratic-growth inequality checked exhaustively up to
/// `verified_to`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InsertionSchedule {
    pub epsilon: f64,
    pub t: u32,
    pub levels: Vec<u64>,
    pub verified_to: u64,
}

/// Log-domain form of the growth inequality tying the shell products to
/// the (1 + 5 epsilon) exponent:
///   prod_{j<=n+1} (sqrt(2) t^{j+1})^{-1} * t^{-2 eps n^2}
///     >= (prod_{j<=n} t^{-2(j-1)})^{1+5 eps}.
fn equanew_holds(epsilon: f64, n: u64) -> bool {
    let n = n as f64;
    let ln_t = (SHELL_BASE as f64).ln();
    let lhs = -(n + 1.0) * std::f64::consts::LN_2 / 2.0
        - ln_t * ((n + 2.0) * (n + 3.0) / 2.0 - 1.0)
        - 2.0 * epsilon * n * n * ln_t;
    let rhs = -(1.0 + 5.0 * epsilon) * n * (n - 1.0) * ln_t;
    lhs >= rhs
}

/// t^{n_k + 1} > 2 t^{n_k} + sqrt(2 eps n_k); equivalently
/// t^{n_k} > sqrt(2 eps n_k). The margin is astronomically wide for any
/// level >= 1, so a log comparison suffices.
fn h_ineq_holds(epsilon: f64, n_k: u64) -> bool {
    let lhs_ln = n_k as f64 * (SHELL_BASE as f64).ln();
    let rhs = 2.0 * epsilon * n_k as f64;
    lhs_ln > rhs.ln() / 2.0
}

/// sum_{j<=k} eps n_j (n_j + 2) <= 2 eps n_k^2 for every k; epsilon
/// cancels, leaving an exact integer comparison.
fn h_ineq2_holds(levels: &[u64]) -> bool {
    let mut sum: u128 = 0;
    for (k, &nk) in levels.iter().enumerate() {
        sum += nk as u128 * (nk as u128 + 2);
        if sum > 2 * (nk as u128) * (nk as u128) {
            return false;
        }
        let _ = k;
    }
    true
}

/// Brute-force scan for the minimal n1 such that the growth inequality
/// holds on all of [n1, n_max].
pub fn minimal_n1(epsilon: f64, n_max: u64) -> Option<u64> {
    let mut candidate: Option<u64> = None;
    for n in 2..=n_max {
        if equanew_holds(epsilon, n) {
            candidate.get_or_insert(n);
        } else {
            candidate = None;
        }
    }
    candidate
}

impl InsertionSchedule {
    /// Independent re-validation of all three inequality families.
    pub fn verify(&self) -> Result<()> {
        if self.t != SHELL_BASE {
            return Err(Error::ScheduleInfeasible(format!("unsupported base t = {}", self.t)));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::ScheduleInfeasible("epsilon must be positive".into()));
        }
        if self.levels.is_empty() || self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ScheduleInfeasible("levels must be nonempty and strictly increasing".into()));
        }
        let n1 = self.levels[0];
        if self.verified_to < *self.levels.last().unwrap() {
            return Err(Error::ScheduleInfeasible("verification horizon below last level".into()));
        }
        for n in n1..=self.verified_to {
            if !equanew_holds(self.epsilon, n) {
                return Err(Error::ScheduleInfeasible(format!("growth inequality fails at n = {n}")));
            }
        }
        for &nk in &self.levels {
            if !h_ineq_holds(self.epsilon, nk) {
                return Err(Error::ScheduleInfeasible(format!("separation inequality fails at n_k = {nk}")));
            }
        }
        if !h_ineq2_holds(&self.levels) {
            return Err(Error::ScheduleInfeasible("level-sum inequality fails".into()));
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.levels.len()
    }
}

/// Build a schedule: find the minimal n1 from the exhaustive scan, extend
/// by doubling (n_k = 2 n_{k-1}) and re-verify everything.
///
/// `verify_to` defaults to max(10 * n1, last level).
pub fn make_schedule(epsilon: f64, horizon: usize, verify_to: Option<u64>) -> Result<InsertionSchedule> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::ScheduleInfeasible("epsilon must be positive and finite".into()));
    }
    if horizon == 0 {
        return Err(Error::ScheduleInfeasible("horizon must be >= 1".into()));
    }
    // The scan horizon only needs to comfortably exceed the true n1; the
    // leading log-coefficients (1/2 + 2 eps vs 1 + 5 eps) guarantee the
    // inequality eventually turns true and stays true.
    let scan_to = verify_to.unwrap_or(4096).max(4096);
    let n1 = minimal_n1(epsilon, scan_to)
        .ok_or_else(|| Error::ScheduleInfeasible("no feasible n1 within scan horizon".into()))?;
    let levels: Vec<u64> = (0..horizon).map(|k| n1 << k).collect();
    let verified_to = verify_to.unwrap_or(10 * n1).max(*levels.last().unwrap());
    let schedule = InsertionSchedule { epsilon, t: SHELL_BASE, levels, verified_to };
    schedule.verify()?;
    Ok(schedule)
}

/// The integer square W_k: side-s grid of lattice points anchored at
/// 2 t^{n_k} (1 + i), enumerated row-major (a ascending within b).
#[derive(Debug, Clone, Serialize)]
pub struct IntegerSquare {
    pub k: usize,
    pub anchor: GaussianInt,
    pub side: u64,
    pub points: Vec<GaussianInt>,
}

/// Side length floor(sqrt(eps n_k) - 1) + 1, clamped to >= 1 (the
/// max-norm constraint is vacuous when eps n_k < 1, but W_k must not be
/// empty).
fn square_side(epsilon: f64, n_k: u64) -> u64 {
    let v = (epsilon * n_k as f64).sqrt() - 1.0;
    if v < 0.0 {
        1
    } else {
        v.floor() as u64 + 1
    }
}

/// Materialize W_k (1-based k).
pub fn square(k: usize, schedule: &InsertionSchedule) -> Result<IntegerSquare> {
    if k == 0 || k > schedule.levels.len() {
        return Err(Error::IndexOutOfSchedule(k));
    }
    let n_k = schedule.levels[k - 1];
    let anchor_coord = BigInt::from(2) * t_pow(n_k);
    let anchor = GaussianInt { re: anchor_coord.clone(), im: anchor_coord };
    let side = square_side(schedule.epsilon, n_k);
    let mut points = Vec::with_capacity((side * side) as usize);
    for b in 0..side {
        for a in 0..side {
            points.push(&anchor + &GaussianInt::new(a, b));
        }
    }
    Ok(IntegerSquare { k, anchor, side, points })
}

fn check_seed_word(word: &DigitSequence) -> Result<()> {
    for (idx, d) in word.digits().iter().enumerate() {
        let j = idx as u64 + 1;
        if !in_shell(j, d) {
            return Err(Error::NotSeedWord(format!("digit {} at position {} outside shell {}", d, j, j)));
        }
    }
    Ok(())
}

/// Splice the squares W_k into a seed word after each position n_k <= |y|.
pub fn insert(word: &DigitSequence, schedule: &InsertionSchedule) -> Result<DigitSequence> {
    check_seed_word(word)?;
    let len = word.len() as u64;
    let last = *schedule.levels.last().unwrap();
    if len > last {
        return Err(Error::ScheduleTooShort(word.len(), last));
    }
    let mut out = Vec::with_capacity(word.len());
    for (idx, d) in word.digits().iter().enumerate() {
        out.push(d.clone());
        let pos = idx as u64 + 1;
        if let Some(k) = schedule.levels.iter().position(|&nk| nk == pos) {
            out.extend(square(k + 1, schedule)?.points);
        }
    }
    DigitSequence::new(out, word.exhausted)
}

/// Remove exactly the spliced blocks: the inverse of [`insert`] on seed
/// words. The block structure is verified digit by digit.
pub fn eliminate(word: &DigitSequence, schedule: &InsertionSchedule) -> Result<DigitSequence> {
    let digits = word.digits();
    let mut out = Vec::new();
    let mut pos = 0usize; // input cursor
    let mut seed_count = 0u64;
    let mut next_level = 0usize; // index into schedule.levels
    while pos < digits.len() {
        let d = &digits[pos];
        if !in_shell(seed_count + 1, d) {
            return Err(Error::NotInImage(format!(
                "digit {} at input position {} is not a shell-{} seed digit",
                d,
                pos + 1,
                seed_count + 1
            )));
        }
        out.push(d.clone());
        seed_count += 1;
        pos += 1;
        if next_level < schedule.levels.len() && seed_count == schedule.levels[next_level] {
            // A block must follow whenever a level boundary is reached.
            let block = square(next_level + 1, schedule)?;
            for expected in &block.points {
                match digits.get(pos) {
                    Some(got) if got == expected => pos += 1,
                    Some(got) => {
                        return Err(Error::NotInImage(format!(
                            "block W_{} mismatch at input position {}: expected {}, got {}",
                            next_level + 1,
                            pos + 1,
                            expected,
                            got
                        )))
                    }
                    None => {
                        return Err(Error::NotInImage(format!(
                            "input ends inside block W_{}",
                            next_level + 1
                        )))
                    }
                }
            }
            next_level += 1;
        }
    }
    DigitSequence::new(out, word.exhausted)
}

/// Both sides of the modification-cost bound
///   sum_{k<=q} sum_{i in W_k} ln 1/(|i|+1) >= -2 eps n_q^2 ln t,
/// returned as (lhs, rhs) in the natural-log domain.
pub fn lemesti1_log_sides(schedule: &InsertionSchedule, q: usize) -> Result<(f64, f64)> {
    if q == 0 || q > schedule.levels.len() {
        return Err(Error::IndexOutOfSchedule(q));
    }
    let mut lhs = 0.0;
    for k in 1..=q {
        for p in &square(k, schedule)?.points {
            lhs -= crate::logdomain::ln_abs_plus_one(&p.norm_sq());
        }
    }
    let n_q = schedule.levels[q - 1] as f64;
    let rhs = -2.0 * schedule.epsilon * n_q * n_q * (SHELL_BASE as f64).ln();
    Ok((lhs, rhs))
}
