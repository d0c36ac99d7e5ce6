//! Search harness for the open question: generating vectors whose Hankel
//! matrices are *not* all PSD but whose Hankel tensors nevertheless fit as
//! sums of mth powers.
//!
//! The fitter is a heuristic. A converged fit is numerical evidence that a
//! decomposition exists; a non-converged fit concludes nothing. Reports are
//! deterministic given seeds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combin::multiset_count;
use crate::error::{Error, Result};
use crate::psd::{strong_hankel_check, StrongHankelCertificate, DEFAULT_PSD_TOL};
use crate::sequence::GeneratingVector;
use crate::tensor::{hankel_tensor, rank_one_sum, RankOneTerm, SymmetricTensor};

/// Default relative fit tolerance (max-norm residual).
pub const DEFAULT_FIT_TOL: f64 = 1e-8;

/// Values a truncated family assigns to its sparsity pattern.
#[derive(Debug, Clone, PartialEq)]
pub enum ValueSource {
    /// One value list per pattern index; candidates are the Cartesian
    /// product, enumerated with the last index fastest.
    Grid(Vec<Vec<f64>>),
    /// `count` vectors with entries drawn uniformly from `[low, high)`.
    Random { count: usize, low: f64, high: f64 },
}

/// A family of generating vectors supported on a fixed sparsity pattern,
/// with length `m_max (n-1) + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedFamily {
    pub dimension: usize,
    pub max_order: usize,
    pub pattern: Vec<usize>,
    pub values: ValueSource,
    pub seed: u64,
}

impl TruncatedFamily {
    /// Largest index the family's vectors carry: `m_max (n-1)`.
    pub fn top_index(&self) -> usize {
        self.max_order * (self.dimension - 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension < 2 || self.max_order < 1 {
            return Err(Error::Domain(format!(
                "family needs n >= 2 and m_max >= 1, got n={}, m_max={}",
                self.dimension, self.max_order
            )));
        }
        if self.pattern.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "pattern indices must be strictly increasing".into(),
            ));
        }
        if let Some(&top) = self.pattern.last() {
            if top > self.top_index() {
                return Err(Error::Domain(format!(
                    "pattern index {top} exceeds m_max (n-1) = {}",
                    self.top_index()
                )));
            }
        }
        if let ValueSource::Grid(grids) = &self.values {
            if grids.len() != self.pattern.len() {
                return Err(Error::Domain(format!(
                    "grid has {} value lists for {} pattern indices",
                    grids.len(),
                    self.pattern.len()
                )));
            }
            if grids.iter().any(|g| g.is_empty()) {
                return Err(Error::Domain("empty grid value list".into()));
            }
        }
        Ok(())
    }

    /// The shipped starting point: ends pinned to 1, a signed grid on the
    /// middle index. Makes no claim beyond being a reasonable place to look.
    pub fn preset(dimension: usize, max_order: usize) -> Self {
        let top = max_order * (dimension - 1);
        Self {
            dimension,
            max_order,
            pattern: vec![0, top / 2, top],
            values: ValueSource::Grid(vec![vec![1.0], vec![-1.0, -0.5, 0.5], vec![1.0]]),
            seed: 0,
        }
    }
}

/// Deterministic enumeration of the family's generating vectors.
pub fn truncated_vectors(family: &TruncatedFamily) -> Result<Vec<GeneratingVector<f64>>> {
    family.validate()?;
    let len = family.top_index() + 1;
    let assemble = |assignment: &[f64]| -> Result<GeneratingVector<f64>> {
        let mut values = vec![0.0; len];
        for (&k, &v) in family.pattern.iter().zip(assignment) {
            values[k] = v;
        }
        GeneratingVector::new(values)
    };
    match &family.values {
        ValueSource::Grid(grids) => {
            let total: usize = grids.iter().map(|g| g.len()).product();
            let mut out = Vec::with_capacity(total);
            let mut odometer = vec![0usize; grids.len()];
            for _ in 0..total {
                let assignment: Vec<f64> = odometer.iter().zip(grids).map(|(&i, g)| g[i]).collect();
                out.push(assemble(&assignment)?);
                for pos in (0..odometer.len()).rev() {
                    odometer[pos] += 1;
                    if odometer[pos] < grids[pos].len() {
                        break;
                    }
                    odometer[pos] = 0;
                }
            }
            Ok(out)
        }
        ValueSource::Random { count, low, high } => {
            if low.is_nan() || high.is_nan() || low >= high {
                return Err(Error::Domain(format!(
                    "random range [{low}, {high}) is empty"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(family.seed);
            (0..*count)
                .map(|_| {
                    let assignment: Vec<f64> = family
                        .pattern
                        .iter()
                        .map(|_| rng.gen_range(*low..*high))
                        .collect();
                    assemble(&assignment)
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 2000,
            tolerance: DEFAULT_FIT_TOL,
            seed: 0,
        }
    }
}

/// Outcome of a rank-`r` fit. `residual` is the relative max-norm residual
/// recomputed from `terms`; `objective_history` tracks the Frobenius
/// objective over accepted line-search steps of the best restart and is
/// non-increasing by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub rank: usize,
    pub terms: Vec<RankOneTerm<f64>>,
    pub residual: f64,
    pub converged: bool,
    pub restarts_used: usize,
    pub iterations: usize,
    pub objective_history: Vec<f64>,
}

/// Minimizes `||A - sum_{k<=r} u_k^{(x)m}||_F^2` over unconstrained vectors
/// by gradient descent with an adaptive step and multi-start. The gradient
/// of each term is `-2m * E(u_k^{m-1})`, obtained by contraction. Converged
/// means the relative max-norm residual reached `opts.tolerance`; a
/// non-converged result is inconclusive evidence, never a refutation.
pub fn cd_fit(tensor: &SymmetricTensor<f64>, rank: usize, opts: &FitOptions) -> FitResult {
    assert!(rank >= 1, "fit rank must be >= 1");
    let m = tensor.order();
    let denom = 1f64.max(tensor.max_abs());
    let init_scale = tensor.max_abs().powf(1.0 / m as f64);

    let mut best: Option<FitResult> = None;
    let mut restarts_used = 0;
    for restart in 0..opts.restarts.max(1) {
        restarts_used = restart + 1;
        let seed = derive_seed(opts.seed, &[0x66697421, restart as u64]);
        let run = fit_single_start(tensor, rank, opts, seed, init_scale, denom);
        let improved = match &best {
            None => true,
            Some(b) => run.residual < b.residual,
        };
        if improved {
            best = Some(run);
        }
        if best.as_ref().is_some_and(|b| b.converged) {
            break;
        }
    }
    let mut result = best.expect("at least one restart");
    result.restarts_used = restarts_used;
    result
}

fn fit_single_start(
    tensor: &SymmetricTensor<f64>,
    rank: usize,
    opts: &FitOptions,
    seed: u64,
    init_scale: f64,
    denom: f64,
) -> FitResult {
    let m = tensor.order();
    let n = tensor.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors: Vec<Vec<f64>> = (0..rank)
        .map(|_| random_unit(&mut rng, n, init_scale))
        .collect();

    let evaluate = |vectors: &[Vec<f64>]| -> (SymmetricTensor<f64>, f64, f64) {
        let terms: Vec<RankOneTerm<f64>> = vectors
            .iter()
            .map(|u| RankOneTerm::from_vector(u.clone()))
            .collect();
        let model = rank_one_sum(&terms, m, n).expect("shape fixed");
        let residual_tensor = tensor.sub(&model).expect("shape fixed");
        let objective = residual_tensor
            .inner(&residual_tensor)
            .expect("shape fixed");
        let max_rel = residual_tensor.max_abs() / denom;
        (residual_tensor, objective, max_rel)
    };

    let (mut residual_tensor, mut objective, mut max_rel) = evaluate(&vectors);
    let mut history = vec![objective];
    let mut step = 1e-2;
    let mut iterations = 0usize;
    // previous iterate and gradient for the Barzilai-Borwein step proposal
    type Snapshot = (Vec<Vec<f64>>, Vec<Vec<f64>>);
    let mut previous: Option<Snapshot> = None;

    while iterations < opts.max_iterations && max_rel > opts.tolerance {
        // gradient of the Frobenius objective
        let gradient: Vec<Vec<f64>> = vectors
            .iter()
            .map(|u| {
                let contracted = residual_tensor.contract_gradient(u).expect("shape fixed");
                contracted
                    .into_iter()
                    .map(|gi| -2.0 * m as f64 * gi)
                    .collect()
            })
            .collect();
        let grad_norm_sq: f64 = gradient.iter().flat_map(|g| g.iter()).map(|g| g * g).sum();
        if grad_norm_sq == 0.0 {
            break; // stationary point
        }
        // adaptive step: spectral (Barzilai-Borwein) proposal when the
        // curvature estimate is positive, otherwise grow the last step;
        // poorly conditioned basins need far fewer iterations this way
        if let Some((prev_u, prev_g)) = &previous {
            let mut sy = 0.0;
            let mut ss = 0.0;
            for ((u_row, pu_row), (g_row, pg_row)) in
                vectors.iter().zip(prev_u).zip(gradient.iter().zip(prev_g))
            {
                for ((u, pu), (g, pg)) in u_row.iter().zip(pu_row).zip(g_row.iter().zip(pg_row)) {
                    let s = u - pu;
                    let y = g - pg;
                    sy += s * y;
                    ss += s * s;
                }
            }
            if sy > 0.0 && ss > 0.0 {
                step = ss / sy;
            } else {
                step *= 1.25;
            }
        } else {
            step *= 1.25;
        }
        step = step.clamp(1e-300, 1e12);
        // monotone backtracking: accept any strict decrease
        let mut accepted = false;
        for _ in 0..80 {
            let trial: Vec<Vec<f64>> = vectors
                .iter()
                .zip(&gradient)
                .map(|(u, g)| u.iter().zip(g).map(|(ui, gi)| ui - step * gi).collect())
                .collect();
            let (trial_tensor, trial_objective, trial_rel) = evaluate(&trial);
            if trial_objective < objective {
                previous = Some((std::mem::replace(&mut vectors, trial), gradient));
                residual_tensor = trial_tensor;
                objective = trial_objective;
                max_rel = trial_rel;
                accepted = true;
                break;
            }
            step *= 0.5;
            if step < 1e-300 {
                break;
            }
        }
        if !accepted {
            break; // no descent at machine precision
        }
        iterations += 1;
        history.push(objective);
    }

    let terms: Vec<RankOneTerm<f64>> = vectors.into_iter().map(RankOneTerm::from_vector).collect();
    FitResult {
        rank,
        terms,
        residual: max_rel,
        converged: max_rel <= opts.tolerance,
        restarts_used: 1,
        iterations,
        objective_history: history,
    }
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm * scale).collect();
        }
    }
}

/// SplitMix64-style seed derivation; stable across platforms.
fn derive_seed(root: u64, parts: &[u64]) -> u64 {
    let mut x = root ^ 0x5851_F42D_4C95_7F2D;
    for &p in parts {
        x = x.wrapping_add(p).wrapping_add(0x9E37_79B9_7F4A_7C15);
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^= x >> 31;
    }
    x
}

/// Fail evidence of the strong-Hankel check, flattened for reports.
#[derive(Debug, Clone, PartialEq)]
pub struct StrongCheckSummary {
    pub p: usize,
    pub verdict: String,
    pub rank: usize,
    pub lambda_min: Option<f64>,
}

impl StrongCheckSummary {
    fn from_certificate(cert: &StrongHankelCertificate<f64>) -> Self {
        Self {
            p: cert.p_checked,
            verdict: cert.report.verdict.as_str().to_string(),
            rank: cert.report.rank,
            lambda_min: cert.report.lambda_min,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitSummary {
    pub order: usize,
    pub rank: usize,
    pub residual: f64,
    pub converged: bool,
}

/// One qualifying candidate: a vector whose strong-Hankel check failed,
/// with fit outcomes per requested order.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateOutcome {
    pub id: usize,
    pub vector: Vec<f64>,
    pub strong_check: StrongCheckSummary,
    pub fits: Vec<FitSummary>,
    pub all_converged: bool,
    pub worst_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub evaluated: usize,
    pub qualifying: usize,
    pub candidates: Vec<CandidateOutcome>,
}

/// Runs the counterexample hunt: candidates must *fail* the strong-Hankel
/// check to qualify; each qualifying candidate is fitted at every order in
/// `orders` with rank growing from the Hankel-matrix rank up to the dense
/// symmetric dimension, stopping at the first converged rank. Candidates
/// are ranked fully-converged first, by worst residual. The report is
/// numerical evidence, not proof.
pub fn search_counterexample(
    family: &TruncatedFamily,
    orders: &[usize],
    opts: &FitOptions,
) -> Result<SearchReport> {
    family.validate()?;
    if orders.is_empty() {
        return Err(Error::Domain("need at least one order to fit".into()));
    }
    if let Some(&bad) = orders.iter().find(|&&m| m < 1 || m > family.max_order) {
        return Err(Error::Domain(format!(
            "order {bad} outside family range 1..={}",
            family.max_order
        )));
    }
    let vectors = truncated_vectors(family)?;
    let evaluated = vectors.len();
    let mut candidates = Vec::new();

    for (id, vector) in vectors.into_iter().enumerate() {
        let cert =
            strong_hankel_check(&vector, family.dimension, family.max_order, DEFAULT_PSD_TOL)?;
        if !cert.is_refuted() {
            continue; // strong or indeterminate vectors are out of scope
        }
        let rank_floor = cert.report.rank.max(1);
        let mut fits = Vec::with_capacity(orders.len());
        for &m in orders {
            let tensor = hankel_tensor(vector.clone(), family.dimension, m)?.densify();
            let rank_ceil = multiset_count(family.dimension, m);
            let mut best: Option<FitSummary> = None;
            for r in rank_floor.min(rank_ceil)..=rank_ceil {
                let fit_opts = FitOptions {
                    seed: derive_seed(opts.seed, &[id as u64, m as u64, r as u64]),
                    ..opts.clone()
                };
                let fit = cd_fit(&tensor, r, &fit_opts);
                let summary = FitSummary {
                    order: m,
                    rank: r,
                    residual: fit.residual,
                    converged: fit.converged,
                };
                let better = best.as_ref().is_none_or(|b| summary.residual < b.residual);
                let converged = summary.converged;
                if better {
                    best = Some(summary);
                }
                if converged {
                    break;
                }
            }
            fits.push(best.expect("at least one rank attempted"));
        }
        let all_converged = fits.iter().all(|f| f.converged);
        let worst_residual = fits.iter().map(|f| f.residual).fold(0.0f64, f64::max);
        candidates.push(CandidateOutcome {
            id,
            vector: vector.values().to_vec(),
            strong_check: StrongCheckSummary::from_certificate(&cert),
            fits,
            all_converged,
            worst_residual,
        });
    }

    let qualifying = candidates.len();
    // fully-converged candidates first, then by worst residual; stable in id
    candidates.sort_by(|a, b| {
        b.all_converged
            .cmp(&a.all_converged)
            .then(
                a.worst_residual
                    .partial_cmp(&b.worst_residual)
                    .expect("finite"),
            )
            .then(a.id.cmp(&b.id))
    });
    Ok(SearchReport {
        evaluated,
        qualifying,
        candidates,
    })
}
