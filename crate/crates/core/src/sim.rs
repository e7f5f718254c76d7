//! Monte-Carlo frame-error-rate harness for syndrome decoding.
//!
//! Errors are sampled on one side of a CSS code through a binary symmetric
//! channel, decoded from their syndrome, and the estimate is classified
//! against the stabilizer and logical structure: an exact match, a
//! degenerate match (residual in the stabilizer rowspace — a success for
//! the quantum code, a miss for a classical reading), a logical error, or
//! a syndrome mismatch.
//!
//! Every trial derives its RNG seed from the base seed and the trial index
//! alone, and sweeps advance in fixed-size batches, so results are
//! bit-identical for any worker count.

use crate::codes::{CssCode, Side};
use crate::decoder::{DecodeResult, DecoderSpec, SyndromeDecoder};
use crate::gf2::Echelon;
use crate::tanner::TannerGraph;
use crate::{BitMatrix, BitVec, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Default failure quota per swept point before moving on.
pub const DEFAULT_MIN_FAILURES: u64 = 100;
/// Trials evaluated between stopping-rule checks. The trial count of every
/// point is a whole number of batches (or the trial cap), which keeps
/// results independent of scheduling.
pub const TRIAL_BATCH: u64 = 1024;

/// How one decoded trial ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeKind {
    ConvergedExact,
    ConvergedDegenerate,
    LogicalError,
    NotMatched,
}

impl OutcomeKind {
    pub fn label(self) -> &'static str {
        match self {
            OutcomeKind::ConvergedExact => "converged_exact",
            OutcomeKind::ConvergedDegenerate => "converged_degenerate",
            OutcomeKind::LogicalError => "logical_error",
            OutcomeKind::NotMatched => "not_matched",
        }
    }

    /// Failure for the quantum code: unmatched syndrome or logical error.
    pub fn is_failure(self) -> bool {
        matches!(self, OutcomeKind::LogicalError | OutcomeKind::NotMatched)
    }

    /// Failure when degenerate matches also count as misses.
    pub fn is_classical_failure(self) -> bool {
        self.is_failure() || self == OutcomeKind::ConvergedDegenerate
    }
}

impl std::fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Outcome of a single trial with the iteration count the decoder used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub kind: OutcomeKind,
    pub iters: usize,
}

/// SplitMix64 finalizer: decorrelates consecutive trial indices into
/// independent stream seeds.
pub fn mix_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// I.i.d. Bernoulli(`p_prime`) error vector from a seeded stream cipher.
pub fn sample_error(n: usize, p_prime: f64, seed: u64) -> Result<BitVec> {
    if !(0.0..1.0).contains(&p_prime) {
        return Err(Error::InvalidArgument(format!(
            "crossover probability must be in [0,1), got {p_prime}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = BitVec::zeros(n);
    for i in 0..n {
        if rng.gen::<f64>() < p_prime {
            e.set(i, true);
        }
    }
    Ok(e)
}

/// Precomputed classification context for one side of a code: the reduced
/// same-type stabilizer rowspace and the opposite-type logical matrix.
pub struct Classifier {
    stabilizer: Echelon,
    logical: BitMatrix,
    check: BitMatrix,
}

impl Classifier {
    pub fn new(code: &CssCode, side: Side) -> Self {
        Self {
            stabilizer: code.stabilizer_matrix(side).echelon(),
            logical: code.logical_matrix(side).clone(),
            check: code.decoding_matrix(side).clone(),
        }
    }

    /// Classifies an estimate. The residual of any matched estimate lies in
    /// the kernel of the check matrix, so it is either a stabilizer element
    /// (degenerate) or detected by a logical generator.
    pub fn classify_estimate(
        &self,
        e: &BitVec,
        e_hat: &BitVec,
        matched: bool,
        iters: usize,
    ) -> TrialOutcome {
        let kind = if !matched {
            OutcomeKind::NotMatched
        } else {
            let mut r = e.clone();
            r.xor_assign(e_hat);
            debug_assert!(
                self.check
                    .mul_vec(&r)
                    .map(|s| s.is_zero())
                    .unwrap_or(false),
                "matched estimate must preserve the syndrome"
            );
            if r.is_zero() {
                OutcomeKind::ConvergedExact
            } else if self.stabilizer.contains(&r) {
                OutcomeKind::ConvergedDegenerate
            } else if (0..self.logical.rows()).any(|i| self.logical.row(i).dot(&r)) {
                OutcomeKind::LogicalError
            } else {
                // Unreachable for syndrome-consistent inputs; a residual in
                // the kernel that trips no logical generator is a stabilizer.
                debug_assert!(false, "kernel residual escaped both cosets");
                OutcomeKind::ConvergedDegenerate
            }
        };
        TrialOutcome { kind, iters }
    }
}

/// One-shot classification of a decode result against a code.
pub fn classify(code: &CssCode, side: Side, e: &BitVec, result: &DecodeResult) -> TrialOutcome {
    Classifier::new(code, side).classify_estimate(e, &result.e_hat, result.matched, result.iters_used)
}

/// Aggregated result of one swept channel point.
#[derive(Clone, Debug, PartialEq)]
pub struct FerPoint {
    /// Physical (depolarizing) error probability, 3/2 of the crossover.
    pub p: f64,
    /// BSC crossover probability actually simulated.
    pub p_prime: f64,
    pub trials: u64,
    pub exact: u64,
    pub degenerate: u64,
    pub logical_errors: u64,
    pub not_matched: u64,
    pub seed: u64,
}

impl FerPoint {
    /// Quantum failures: unmatched syndromes plus logical errors.
    pub fn failures(&self) -> u64 {
        self.not_matched + self.logical_errors
    }

    /// Failures under the classical reading (degenerate matches count too).
    pub fn classical_failures(&self) -> u64 {
        self.failures() + self.degenerate
    }

    pub fn fer_quantum(&self) -> f64 {
        self.failures() as f64 / self.trials as f64
    }

    pub fn fer_classical(&self) -> f64 {
        self.classical_failures() as f64 / self.trials as f64
    }
}

#[derive(Clone, Copy, Default)]
struct Counts {
    exact: u64,
    degenerate: u64,
    logical: u64,
    not_matched: u64,
}

impl Counts {
    fn add(&mut self, kind: OutcomeKind) {
        match kind {
            OutcomeKind::ConvergedExact => self.exact += 1,
            OutcomeKind::ConvergedDegenerate => self.degenerate += 1,
            OutcomeKind::LogicalError => self.logical += 1,
            OutcomeKind::NotMatched => self.not_matched += 1,
        }
    }

    fn merge(mut self, other: Counts) -> Counts {
        self.exact += other.exact;
        self.degenerate += other.degenerate;
        self.logical += other.logical;
        self.not_matched += other.not_matched;
        self
    }

    fn failures(&self) -> u64 {
        self.logical + self.not_matched
    }
}

fn run_batch(
    graph: &TannerGraph,
    spec: &DecoderSpec,
    classifier: &Classifier,
    p_prime: f64,
    base_seed: u64,
    range: std::ops::Range<u64>,
) -> Result<Counts> {
    range
        .into_par_iter()
        .map_init(
            || SyndromeDecoder::new(graph, spec),
            |decoder, idx| {
                let decoder = decoder.as_mut().map_err(|e| e.clone_msg())?;
                let e = sample_error(graph.n_vns(), p_prime, mix_seed(base_seed, idx))?;
                let sigma = graph.syndrome(&e)?;
                let result = decoder.decode(&sigma)?;
                let outcome =
                    classifier.classify_estimate(&e, &result.e_hat, result.matched, result.iters_used);
                let mut c = Counts::default();
                c.add(outcome.kind);
                Ok(c)
            },
        )
        .try_reduce(Counts::default, |a, b| Ok(a.merge(b)))
}

/// Sweeps crossover probabilities, accumulating whole batches per point
/// until `min_failures` quantum failures are seen or `max_trials` is hit.
/// The decoder's channel prior follows each swept crossover.
pub fn fer_sweep(
    code: &CssCode,
    side: Side,
    spec: &DecoderSpec,
    p_list: &[f64],
    min_failures: u64,
    max_trials: u64,
    base_seed: u64,
) -> Result<Vec<FerPoint>> {
    if max_trials == 0 {
        return Err(Error::InvalidArgument("max_trials must be positive".into()));
    }
    let graph = TannerGraph::from_parity(code.decoding_matrix(side));
    let classifier = Classifier::new(code, side);
    let mut points = Vec::with_capacity(p_list.len());
    for &p_prime in p_list {
        let mut point_spec = spec.clone();
        point_spec.channel_p = p_prime;
        point_spec.validate()?;
        let mut counts = Counts::default();
        let mut trials = 0u64;
        while trials < max_trials {
            let end = (trials + TRIAL_BATCH).min(max_trials);
            let batch = run_batch(&graph, &point_spec, &classifier, p_prime, base_seed, trials..end)?;
            counts = counts.merge(batch);
            trials = end;
            if counts.failures() >= min_failures {
                break;
            }
        }
        points.push(FerPoint {
            p: 1.5 * p_prime,
            p_prime,
            trials,
            exact: counts.exact,
            degenerate: counts.degenerate,
            logical_errors: counts.logical,
            not_matched: counts.not_matched,
            seed: base_seed,
        });
    }
    Ok(points)
}

/// One row of the iteration-resolved experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct IterFerRow {
    pub iters: usize,
    pub trials: u64,
    pub failures: u64,
    pub classical_failures: u64,
}

impl IterFerRow {
    pub fn fer_quantum(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }

    pub fn fer_classical_like(&self) -> f64 {
        self.classical_failures as f64 / self.trials as f64
    }
}

/// Decodes each trial once with the largest grid iteration count and
/// classifies the recorded estimate trajectory at every grid point. The
/// decoder spec must have trajectory recording enabled.
pub fn fer_vs_iterations(
    code: &CssCode,
    side: Side,
    spec: &DecoderSpec,
    p_prime: f64,
    iter_grid: &[usize],
    trials: u64,
    base_seed: u64,
) -> Result<Vec<IterFerRow>> {
    if !spec.record_trajectory {
        return Err(Error::InvalidArgument(
            "iteration-resolved FER needs trajectory recording enabled".into(),
        ));
    }
    let mut grid: Vec<usize> = iter_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    if grid.is_empty() || grid[0] == 0 {
        return Err(Error::InvalidArgument(
            "iteration grid must contain positive iteration counts".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let mut run_spec = spec.clone();
    run_spec.max_iters = *grid.last().unwrap();
    run_spec.channel_p = p_prime;
    run_spec.validate()?;
    let graph = TannerGraph::from_parity(code.decoding_matrix(side));
    let classifier = Classifier::new(code, side);
    let zero = BitVec::zeros(graph.n_vns());
    let counts: Vec<(u64, u64)> = (0..trials)
        .into_par_iter()
        .map_init(
            || SyndromeDecoder::new(&graph, &run_spec),
            |decoder, idx| {
                let decoder = decoder.as_mut().map_err(|e| e.clone_msg())?;
                let e = sample_error(graph.n_vns(), p_prime, mix_seed(base_seed, idx))?;
                let sigma = graph.syndrome(&e)?;
                let result = decoder.decode(&sigma)?;
                let traj = result
                    .trajectory
                    .as_ref()
                    .expect("trajectory enabled by construction");
                let mut per_grid = Vec::with_capacity(grid.len());
                for &g in &grid {
                    // Estimate after iteration g: the trajectory freezes
                    // once the decoder halts.
                    let e_hat = if traj.is_empty() {
                        &zero
                    } else {
                        &traj[g.min(traj.len()) - 1]
                    };
                    let matched_here = result.matched && result.iters_used <= g;
                    let outcome =
                        classifier.classify_estimate(&e, e_hat, matched_here, g.min(result.iters_used));
                    per_grid.push((
                        outcome.kind.is_failure() as u64,
                        outcome.kind.is_classical_failure() as u64,
                    ));
                }
                Ok::<_, Error>(per_grid)
            },
        )
        .try_reduce(
            || vec![(0u64, 0u64); grid.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    x.0 += y.0;
                    x.1 += y.1;
                }
                Ok(a)
            },
        )?;
    Ok(grid
        .iter()
        .zip(&counts)
        .map(|(&iters, &(failures, classical_failures))| IterFerRow {
            iters,
            trials,
            failures,
            classical_failures,
        })
        .collect())
}

/// Renders sweep points as CSV (callers prepend '#' header lines).
pub fn fer_csv(points: &[FerPoint]) -> String {
    let mut out = String::from(
        "p,p_prime,trials,failures,logical_errors,degenerate,exact,fer_quantum,fer_classical,seed\n",
    );
    for pt in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            pt.p,
            pt.p_prime,
            pt.trials,
            pt.failures(),
            pt.logical_errors,
            pt.degenerate,
            pt.exact,
            pt.fer_quantum(),
            pt.fer_classical(),
            pt.seed
        ));
    }
    out
}

/// Renders iteration-resolved rows as CSV.
pub fn iter_fer_csv(rows: &[IterFerRow]) -> String {
    let mut out = String::from("iters,trials,failures,classical_failures,fer_quantum,fer_classical_like\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.iters,
            r.trials,
            r.failures,
            r.classical_failures,
            r.fer_quantum(),
            r.fer_classical_like()
        ));
    }
    out
}

impl Error {
    /// Clones an error for use inside `map_init` closures where the
    /// original must stay behind a mutable borrow.
    fn clone_msg(&self) -> Error {
        Error::InvalidArgument(self.to_string())
    }
}
