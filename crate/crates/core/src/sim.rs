//! Classical simulation of the Grover-based permutation-testing algorithm.
//!
//! The algorithm queries a uniform sample `S` of `s` positions, rejects on a
//! collision inside `S`, and otherwise runs `R` Grover searches over the
//! remaining positions for one whose value already occurs in `phi(S)`. Grover
//! is modeled by its closed-form success probability. The iteration count
//! uses the number of marked positions `M` when it is at least the promised
//! floor `M0 = max(1, ceil((1 - alpha) s / 2))`, and `M0` otherwise; on
//! permutations (`M = 0`) this caps each search at
//! `floor((pi/4) sqrt((n - s) / M0))` iterations instead of a full
//! `sqrt(n - s)` scan.
//!
//! Randomness: every run draws from a ChaCha8 generator seeded by
//! [`derive_seed`] from the master seed and the run's coordinates, so serial
//! and parallel sweeps agree bit for bit.

use std::f64::consts::FRAC_PI_4;

use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::DomainPoint;
use crate::error::{Error, Result};
use crate::rational::{floor_to_usize, format_rational, int, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct AlgoParams {
    pub n: usize,
    pub alpha: Rational,
    pub s: usize,
    pub eps: Rational,
    pub seed: u64,
}

impl AlgoParams {
    fn validate(&self) -> Result<()> {
        if self.s == 0 || self.s > self.n {
            return Err(Error::InvalidParameter(format!("need 1 <= s <= n, got s={}, n={}", self.s, self.n)));
        }
        check_alpha(&self.alpha)?;
        check_eps(&self.eps)
    }
}

fn check_alpha(alpha: &Rational) -> Result<()> {
    if *alpha <= Rational::zero() || *alpha >= Rational::one() {
        return Err(Error::InvalidParameter(format!("alpha = {} must lie in (0,1)", format_rational(alpha))));
    }
    Ok(())
}

fn check_eps(eps: &Rational) -> Result<()> {
    if *eps <= Rational::zero() || *eps > Rational::new(1.into(), 3.into()) {
        return Err(Error::InvalidParameter(format!("eps = {} must lie in (0,1/3]", format_rational(eps))));
    }
    Ok(())
}

/// `sin^2((2t+1) asin(sqrt(M/N)))`, and 0 when nothing is marked.
pub fn grover_success_prob(n_items: u64, marked: u64, t: u64) -> f64 {
    if marked == 0 || n_items == 0 {
        return 0.0;
    }
    let theta = (marked.min(n_items) as f64 / n_items as f64).sqrt().asin();
    let s = ((2 * t + 1) as f64 * theta).sin();
    (s * s).clamp(0.0, 1.0)
}

/// Least `R` with `3^R eps >= 1`, i.e. `ceil(log_3(1/eps))`.
pub fn repetitions(eps: &Rational) -> usize {
    let mut r = 0;
    let mut acc = eps.clone();
    while acc < Rational::one() {
        acc *= int(3);
        r += 1;
    }
    r
}

/// Promised floor on the number of marked positions for sample size `s`.
pub fn marked_floor(alpha: &Rational, s: usize) -> u64 {
    let v = (Rational::one() - alpha) * int(s as i64) / int(2);
    v.ceil().to_integer().to_u64().unwrap_or(u64::MAX).max(1)
}

/// Grover iterations used for one search over `n - s` items.
pub fn iterations(n: usize, s: usize, marked: u64, floor: u64) -> u64 {
    let m = marked.max(floor).max(1) as f64;
    (FRAC_PI_4 * ((n - s) as f64 / m).sqrt()).floor() as u64
}

/// Upper bound on the queries of one run.
pub fn max_queries_bound(n: usize, s: usize, alpha: &Rational, eps: &Rational) -> u64 {
    if s == n {
        return s as u64;
    }
    let t = iterations(n, s, 0, marked_floor(alpha, s));
    s as u64 + repetitions(eps) as u64 * (t + 1) + 1
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the stream identified by `tags` under `master`:
/// `h_0 = mix(master)`, `h_{i+1} = mix(h_i ^ mix(tag_i))`.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(mix(master), |h, &t| mix(h ^ mix(t)))
}

pub fn stream(master: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, tags))
}

/// Uniform permutation of `[n]`.
pub fn sample_yes_instance<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DomainPoint {
    let mut v: Vec<u16> = (0..n as u16).collect();
    v.shuffle(rng);
    DomainPoint::new(v)
}

/// Zero-truncated Poisson with mean `mu > 1`: rate and a CDF table.
struct TruncatedPoisson {
    cdf: Vec<f64>,
    pmf: Vec<f64>,
    pmf_max: f64,
}

impl TruncatedPoisson {
    fn with_mean(mu: f64, cap: usize) -> Self {
        // Solve lambda / (1 - e^-lambda) = mu by bisection.
        let (mut lo, mut hi) = (1e-12, mu.max(1.0) + 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid / (1.0 - (-mid).exp()) < mu {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        let mut pmf = vec![0.0; cap + 1];
        let mut term = (-lambda).exp() / (1.0 - (-lambda).exp());
        for (c, slot) in pmf.iter_mut().enumerate().skip(1) {
            term *= lambda / c as f64;
            *slot = term;
        }
        let mut cdf = Vec::with_capacity(cap + 1);
        let mut acc = 0.0;
        for p in &pmf {
            acc += p;
            cdf.push(acc);
        }
        let pmf_max = pmf.iter().cloned().fold(0.0, f64::max);
        TruncatedPoisson { cdf, pmf, pmf_max }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        // Mass sits on the first few values, so a linear scan beats bisection.
        let last = self.cdf.len() - 1;
        let u: f64 = rng.gen::<f64>() * self.cdf[last];
        let mut c = 1;
        while c < last && self.cdf[c] <= u {
            c += 1;
        }
        c
    }
}

/// A uniformly random map `[n] -> [n]` with image exactly `floor(alpha n)`.
///
/// The image `T` is a uniform subset. The fiber sizes of a uniform
/// surjection onto `T` are i.i.d. zero-truncated Poisson variables conditioned
/// on summing to `n`, for any rate; with the rate matching the mean `n/|T|`,
/// we draw all but the last, and accept the forced last size `c` with
/// probability `p(c)/max p`. The positions are then shuffled.
pub fn sample_no_instance<R: Rng + ?Sized>(n: usize, alpha: &Rational, rng: &mut R) -> Result<DomainPoint> {
    check_alpha(alpha)?;
    let m = floor_to_usize(&(alpha * int(n as i64)));
    if n < 2 || m == 0 {
        return Err(Error::InvalidParameter(format!(
            "no instance needs n >= 2 and floor(alpha n) >= 1, got n={n}"
        )));
    }
    let cols = rand::seq::index::sample(rng, n, m).into_vec();
    let counts = surjection_counts(n, m, rng);
    let mut v: Vec<u16> = Vec::with_capacity(n);
    for (col, &c) in cols.iter().zip(&counts) {
        v.extend(std::iter::repeat_n(*col as u16, c));
    }
    v.shuffle(rng);
    Ok(DomainPoint::new(v))
}

fn surjection_counts<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Vec<usize> {
    if m == 1 {
        return vec![n];
    }
    let dist = TruncatedPoisson::with_mean(n as f64 / m as f64, n - m + 1);
    let mut counts = vec![0usize; m];
    loop {
        let mut total = 0;
        let mut ok = true;
        for slot in counts.iter_mut().take(m - 1) {
            *slot = dist.draw(rng);
            total += *slot;
            if total + 1 > n {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let last = n - total;
        if last > n - m + 1 {
            continue;
        }
        if rng.gen::<f64>() * dist.pmf_max < dist.pmf[last] {
            counts[m - 1] = last;
            return counts;
        }
    }
}

/// An input with its column counts and promise check done once, so repeated
/// runs cost `O(s)` each.
#[derive(Clone, Debug)]
pub struct Instance {
    phi: Vec<u16>,
    counts: Vec<u32>,
    permutation: bool,
}

impl Instance {
    pub fn new(phi: &DomainPoint, alpha: &Rational) -> Result<Self> {
        let n = phi.rows();
        let mut counts = vec![0u32; n];
        for &c in phi.as_slice() {
            let c = c as usize;
            if c >= n {
                return Err(Error::Dimension(format!("column {} exceeds n = {n}", c + 1)));
            }
            counts[c] += 1;
        }
        let image = counts.iter().filter(|&&c| c > 0).count();
        let cap = floor_to_usize(&(alpha * int(n as i64)));
        if image != n && image > cap {
            return Err(Error::OutOfPromise(format!(
                "image size {image} is neither {n} nor at most {cap}"
            )));
        }
        Ok(Instance {
            phi: phi.as_slice().to_vec(),
            counts,
            permutation: image == n,
        })
    }

    pub fn n(&self) -> usize {
        self.phi.len()
    }

    pub fn is_permutation(&self) -> bool {
        self.permutation
    }
}

/// Reusable buffers for sampling `S` and detecting collisions.
pub struct Scratch {
    perm: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        Scratch {
            perm: (0..n as u32).collect(),
            stamp: vec![0; n],
            epoch: 0,
        }
    }
}

/// The random part of one run, shared by every error target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Trace {
    pub s: usize,
    pub collision: bool,
    pub marked: u64,
    pub iterations: u64,
    /// Index of the first successful search among `max_searches`.
    pub first_success: Option<usize>,
}

impl Trace {
    /// Decision and query count when `repetitions` searches are allowed.
    pub fn outcome(&self, repetitions: usize) -> (bool, u64) {
        let s = self.s as u64;
        if self.collision {
            return (false, s);
        }
        match self.first_success {
            Some(i) if i < repetitions => (false, s + (i as u64 + 1) * (self.iterations + 1) + 1),
            _ => (true, s + repetitions as u64 * (self.iterations + 1)),
        }
    }
}

/// Samples `S`, checks injectivity on it and draws up to `max_searches`
/// Grover outcomes.
pub fn simulate<R: Rng + ?Sized>(
    inst: &Instance,
    s: usize,
    alpha: &Rational,
    max_searches: usize,
    scratch: &mut Scratch,
    rng: &mut R,
) -> Trace {
    let n = inst.n();
    // Partial Fisher-Yates on the shared buffer, undone afterwards.
    let mut swaps = Vec::with_capacity(s);
    for i in 0..s {
        let j = rng.gen_range(i..n);
        scratch.perm.swap(i, j);
        swaps.push(j);
    }
    scratch.epoch = scratch.epoch.wrapping_add(1);
    if scratch.epoch == 0 {
        scratch.stamp.iter_mut().for_each(|v| *v = 0);
        scratch.epoch = 1;
    }
    let mut collision = false;
    let mut hit = 0u64;
    for &i in &scratch.perm[..s] {
        let v = inst.phi[i as usize] as usize;
        if scratch.stamp[v] == scratch.epoch {
            collision = true;
            break;
        }
        scratch.stamp[v] = scratch.epoch;
        hit += inst.counts[v] as u64;
    }
    for i in (0..s).rev() {
        scratch.perm.swap(i, swaps[i]);
    }
    if collision {
        return Trace {
            s,
            collision,
            marked: 0,
            iterations: 0,
            first_success: None,
        };
    }
    if s == n {
        return Trace {
            s,
            collision,
            marked: 0,
            iterations: 0,
            first_success: None,
        };
    }
    let marked = hit - s as u64;
    let t = iterations(n, s, marked, marked_floor(alpha, s));
    let p = grover_success_prob((n - s) as u64, marked, t);
    let first_success = (0..max_searches).find(|_| rng.gen::<f64>() < p);
    Trace {
        s,
        collision,
        marked,
        iterations: t,
        first_success,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub accept: bool,
    pub queries: u64,
}

/// One run of the algorithm on `phi`.
pub fn run_ptp_algorithm<R: Rng + ?Sized>(phi: &DomainPoint, params: &AlgoParams, rng: &mut R) -> Result<RunResult> {
    params.validate()?;
    if phi.rows() != params.n {
        return Err(Error::Dimension(format!("input has {} rows, expected {}", phi.rows(), params.n)));
    }
    let inst = Instance::new(phi, &params.alpha)?;
    let reps = repetitions(&params.eps);
    let mut scratch = Scratch::new(params.n);
    let trace = simulate(&inst, params.s, &params.alpha, reps, &mut scratch, rng);
    let (accept, queries) = trace.outcome(reps);
    Ok(RunResult { accept, queries })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub params: AlgoParams,
    pub trials: usize,
    pub yes_errors: u64,
    pub no_errors: u64,
    /// Sum of queries over all YES and NO runs.
    pub total_queries: u64,
    pub max_queries: u64,
}

impl SimReport {
    pub fn yes_error_rate(&self) -> Rational {
        Rational::new(self.yes_errors.into(), (self.trials as u64).into())
    }

    pub fn no_error_rate(&self) -> Rational {
        Rational::new(self.no_errors.into(), (self.trials as u64).into())
    }

    pub fn mean_queries(&self) -> f64 {
        self.total_queries as f64 / (2 * self.trials) as f64
    }

    fn feasible(&self) -> bool {
        let eps = &self.params.eps;
        self.yes_error_rate() <= *eps && self.no_error_rate() <= *eps
    }

    pub fn csv_row(&self) -> String {
        let p = &self.params;
        format!(
            "{},{},{},{},{},{},{:.6},{:.6},{:.3},{}",
            p.n,
            format_rational(&p.alpha),
            p.eps.numer(),
            p.eps.denom(),
            p.s,
            self.trials,
            self.yes_errors as f64 / self.trials as f64,
            self.no_errors as f64 / self.trials as f64,
            self.mean_queries(),
            self.max_queries
        )
    }
}

pub const SWEEP_CSV_HEADER: &str = "n,alpha,eps_num,eps_den,s,trials,yes_err,no_err,mean_queries,max_queries";

/// Geometric sample-size grid `1 = s_0 < s_1 < ... = n` with
/// `s_{i+1} = max(s_i + 1, ceil(ratio s_i))`.
pub fn s_grid(n: usize, ratio: f64) -> Vec<usize> {
    let mut out = vec![1];
    while *out.last().unwrap() < n {
        let s = *out.last().unwrap();
        let next = ((s as f64 * ratio).ceil() as usize).max(s + 1).min(n);
        out.push(next);
    }
    out
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub n_list: Vec<usize>,
    pub alpha: Rational,
    pub eps_list: Vec<Rational>,
    pub trials: usize,
    pub seed: u64,
    pub grid_ratio: f64,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    /// Every grid point, grouped by `n`, then `eps`, then ascending `s`.
    pub grid: Vec<SimReport>,
    /// Cheapest feasible grid point for each `(n, eps)`, in the same order.
    pub optimal: Vec<SimReport>,
    /// Least-squares slope of `ln(cost)` against `ln(n)` at the first `eps`.
    pub fitted_exponent: Option<f64>,
}

const YES: u64 = 0;
const NO: u64 = 1;

#[derive(Clone)]
struct Acc {
    yes_err: Vec<u64>,
    no_err: Vec<u64>,
    total: Vec<u64>,
    max: Vec<u64>,
}

impl Acc {
    fn new(len: usize) -> Self {
        Acc {
            yes_err: vec![0; len],
            no_err: vec![0; len],
            total: vec![0; len],
            max: vec![0; len],
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        for i in 0..self.total.len() {
            self.yes_err[i] += other.yes_err[i];
            self.no_err[i] += other.no_err[i];
            self.total[i] += other.total[i];
            self.max[i] = self.max[i].max(other.max[i]);
        }
        self
    }
}

/// For every `n`, every trial draws one YES and one NO instance and runs the
/// algorithm at every grid size; all error targets share the same runs.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if cfg.eps_list.is_empty() || cfg.n_list.is_empty() {
        return Err(Error::InvalidParameter("need at least one n and one eps".into()));
    }
    if cfg.grid_ratio.is_nan() || cfg.grid_ratio <= 1.0 {
        return Err(Error::InvalidParameter("grid ratio must exceed 1".into()));
    }
    check_alpha(&cfg.alpha)?;
    for eps in &cfg.eps_list {
        check_eps(eps)?;
    }
    let reps: Vec<usize> = cfg.eps_list.iter().map(repetitions).collect();
    let max_reps = *reps.iter().max().unwrap();
    let ne = cfg.eps_list.len();
    let mut grid = Vec::new();
    let mut optimal = Vec::new();
    for &n in &cfg.n_list {
        if n < 2 || n > u16::MAX as usize {
            return Err(Error::InvalidParameter(format!("n = {n} must lie in [2, 65535]")));
        }
        let sizes = s_grid(n, cfg.grid_ratio);
        let cells = sizes.len() * ne;
        let acc = (0..cfg.trials)
            .into_par_iter()
            .fold(
                || (Acc::new(cells), Scratch::new(n)),
                |(mut acc, mut scratch), trial| {
                    let tag = [n as u64, trial as u64];
                    let yes = sample_yes_instance(n, &mut stream(cfg.seed, &[tag[0], tag[1], YES]));
                    let no = sample_no_instance(n, &cfg.alpha, &mut stream(cfg.seed, &[tag[0], tag[1], NO]))
                        .expect("parameters validated");
                    for (kind, phi) in [(YES, &yes), (NO, &no)] {
                        let inst = Instance::new(phi, &cfg.alpha).expect("sampled inside the promise");
                        for (si, &s) in sizes.iter().enumerate() {
                            let mut rng = stream(cfg.seed, &[tag[0], tag[1], kind, 2 + si as u64]);
                            let trace = simulate(&inst, s, &cfg.alpha, max_reps, &mut scratch, &mut rng);
                            for (ei, &r) in reps.iter().enumerate() {
                                let cell = ei * sizes.len() + si;
                                let (accept, q) = trace.outcome(r);
                                if kind == YES && !accept {
                                    acc.yes_err[cell] += 1;
                                }
                                if kind == NO && accept {
                                    acc.no_err[cell] += 1;
                                }
                                acc.total[cell] += q;
                                acc.max[cell] = acc.max[cell].max(q);
                            }
                        }
                    }
                    (acc, scratch)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(|| Acc::new(cells), Acc::merge);
        for (ei, eps) in cfg.eps_list.iter().enumerate() {
            let mut best: Option<SimReport> = None;
            for (si, &s) in sizes.iter().enumerate() {
                let cell = ei * sizes.len() + si;
                let report = SimReport {
                    params: AlgoParams {
                        n,
                        alpha: cfg.alpha.clone(),
                        s,
                        eps: eps.clone(),
                        seed: cfg.seed,
                    },
                    trials: cfg.trials,
                    yes_errors: acc.yes_err[cell],
                    no_errors: acc.no_err[cell],
                    total_queries: acc.total[cell],
                    max_queries: acc.max[cell],
                };
                if report.feasible() && best.as_ref().is_none_or(|b| report.total_queries < b.total_queries) {
                    best = Some(report.clone());
                }
                grid.push(report);
            }
            optimal.push(best.ok_or_else(|| Error::Internal("s = n is always feasible".into()))?);
        }
    }
    let first = &cfg.eps_list[0];
    let points: Vec<(f64, f64)> = optimal
        .iter()
        .filter(|r| r.params.eps == *first)
        .map(|r| ((r.params.n as f64).ln(), r.mean_queries().ln()))
        .collect();
    Ok(SweepResult {
        grid,
        optimal,
        fitted_exponent: fit_slope(&points),
    })
}

/// Least-squares slope, `None` with fewer than two distinct abscissae.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let k = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn grover_closed_form() {
        assert_eq!(grover_success_prob(5, 5, 0), 1.0);
        assert!((grover_success_prob(4, 1, 1) - 1.0).abs() < 1e-12);
        assert!((grover_success_prob(2, 1, 0) - 0.5).abs() < 1e-12);
        assert_eq!(grover_success_prob(10, 0, 3), 0.0);
    }

    #[test]
    fn repetition_counts() {
        assert_eq!(repetitions(&rat(1, 3)), 1);
        assert_eq!(repetitions(&rat(1, 4)), 2);
        assert_eq!(repetitions(&rat(1, 9)), 2);
        assert_eq!(repetitions(&rat(1, 81)), 4);
    }

    #[test]
    fn samplers_respect_the_promise() {
        let mut rng = stream(7, &[1]);
        for n in [4, 5, 16, 100] {
            let yes = sample_yes_instance(n, &mut rng);
            assert!(yes.is_injective());
            let no = sample_no_instance(n, &rat(1, 2), &mut rng).unwrap();
            assert_eq!(no.image_size(), n / 2);
            assert!(Instance::new(&no, &rat(1, 2)).is_ok());
        }
    }

    #[test]
    fn full_sample_decides_exactly() {
        let params = AlgoParams {
            n: 4,
            alpha: rat(1, 2),
            s: 4,
            eps: rat(1, 3),
            seed: 0,
        };
        let mut rng = stream(3, &[]);
        let perm = DomainPoint::new(vec![2, 0, 3, 1]);
        let no = DomainPoint::new(vec![0, 1, 1, 0]);
        for _ in 0..50 {
            assert!(run_ptp_algorithm(&perm, &params, &mut rng).unwrap().accept);
            let r = run_ptp_algorithm(&no, &params, &mut rng).unwrap();
            assert!(!r.accept);
            assert_eq!(r.queries, 4);
        }
        let bad = DomainPoint::new(vec![0, 1, 2, 2]);
        assert!(matches!(run_ptp_algorithm(&bad, &params, &mut rng), Err(Error::OutOfPromise(_))));
    }

    #[test]
    fn query_bound_holds() {
        let alpha = rat(1, 2);
        let eps = rat(1, 9);
        let mut rng = stream(11, &[]);
        for s in [1, 3, 10, 40] {
            let params = AlgoParams {
                n: 64,
                alpha: alpha.clone(),
                s,
                eps: eps.clone(),
                seed: 0,
            };
            let bound = max_queries_bound(64, s, &alpha, &eps);
            for _ in 0..100 {
                let phi = sample_no_instance(64, &alpha, &mut rng).unwrap();
                let r = run_ptp_algorithm(&phi, &params, &mut rng).unwrap();
                assert!(r.queries >= s as u64 && r.queries <= bound);
                let yes = sample_yes_instance(64, &mut rng);
                let r = run_ptp_algorithm(&yes, &params, &mut rng).unwrap();
                assert!(r.accept && r.queries <= bound);
            }
        }
    }

    #[test]
    fn grid_and_fit() {
        assert_eq!(s_grid(10, 2.0), vec![1, 2, 4, 8, 10]);
        let pts = [(0.0, 1.0), (1.0, 1.5), (2.0, 2.0)];
        assert!((fit_slope(&pts).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sweep_is_deterministic() {
        let cfg = SweepConfig {
            n_list: vec![32, 64],
            alpha: rat(1, 2),
            eps_list: vec![rat(1, 3), rat(1, 9)],
            trials: 200,
            seed: 5,
            grid_ratio: 1.5,
        };
        let a = sweep(&cfg).unwrap();
        let b = sweep(&cfg).unwrap();
        assert_eq!(a.grid, b.grid);
        assert!(a.optimal.iter().all(|r| r.yes_errors == 0));
    }
}
