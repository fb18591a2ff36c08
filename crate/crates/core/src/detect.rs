//! Detection procedures: top-eigenvalue PCA, score-transformed PCA,
//! exhaustive MLE for the Wishart model, and the point-mass test for atomic
//! noise.
//!
//! Every detector is a deterministic function of (sample, parameters) and
//! consumes the revealed matrix Y only.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::ensembles::{ModelDescriptor, ScaledWignerSample, SymmetricMatrixSample};
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::numeric::bisect;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Spiked,
    Unspiked,
}

/// Outcome of one detector run. `decision == Spiked` iff the statistic lies on
/// the rejection side of the threshold.
#[derive(Debug, Clone, Serialize)]
pub struct DetectionReport {
    pub detector: String,
    pub decision: Decision,
    pub statistic: f64,
    pub threshold: f64,
    /// `⟨v,x⟩²` against the planted spike, when the truth is available.
    pub spike_correlation: Option<f64>,
    /// Correlation guarantee `(λ − 1/√F_P)²/λ²` for transform-PCA runs.
    pub correlation_floor: Option<f64>,
    pub elapsed_secs: f64,
}

// ---------------------------------------------------------------------------
// eigensolvers

const LANCZOS_DENSE_CUTOFF: usize = 64;
const LANCZOS_MAX_ITERS: usize = 600;
const LANCZOS_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-8;

/// Largest eigenvalue and a unit eigenvector of a symmetric matrix.
///
/// Lanczos with full reorthogonalization (deterministic start vector), with a
/// dense fallback for small matrices; the returned pair satisfies
/// `‖Yv − λv‖ ≤ 1e−8·‖Y‖`.
pub fn top_eig(matrix: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    let n = matrix.nrows();
    if n <= LANCZOS_DENSE_CUTOFF {
        return Ok(top_eig_dense(matrix));
    }
    lanczos_top(matrix)
}

/// Smallest eigenvalue and a unit eigenvector.
pub fn min_eig(matrix: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    let neg = -matrix;
    let (lam, v) = top_eig(&neg)?;
    Ok((-lam, v))
}

/// Full spectrum (ascending) by dense symmetric eigendecomposition — the
/// reference path, also used for bulk histograms.
pub fn spectrum(matrix: &DMatrix<f64>) -> Vec<f64> {
    let eig = matrix.clone().symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Dense reference top eigenpair.
pub fn top_eig_dense(matrix: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = matrix.clone().symmetric_eigen();
    let mut best = 0;
    for i in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    let mut v = eig.eigenvectors.column(best).into_owned();
    v /= v.norm();
    (eig.eigenvalues[best], v)
}

fn lanczos_top(matrix: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    let n = matrix.nrows();
    let max_iters = LANCZOS_MAX_ITERS.min(n);

    // deterministic start vector: reproducibility of detector output
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x545f_05ed);
    let mut v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
    v /= v.norm();

    let mut basis: Vec<DVector<f64>> = vec![v.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut last_residual = f64::INFINITY;

    for j in 0..max_iters {
        let mut w = matrix * &basis[j];
        let alpha = basis[j].dot(&w);
        alphas.push(alpha);
        w.axpy(-alpha, &basis[j], 1.0);
        if j > 0 {
            let b = betas[j - 1];
            w.axpy(-b, &basis[j - 1], 1.0);
        }
        // full reorthogonalization, two passes
        for _ in 0..2 {
            for u in &basis {
                let c = u.dot(&w);
                w.axpy(-c, u, 1.0);
            }
        }
        let beta = w.norm();

        let breakdown = beta < 1e-13 * alphas.iter().fold(0.0f64, |a, &x| a.max(x.abs())).max(1.0);
        let check = breakdown || j + 1 == max_iters || (j + 1) % 10 == 0;
        if check {
            let (theta, ritz, norm_est) = tridiag_top(&alphas, &betas);
            let residual_est = beta * ritz[ritz.len() - 1].abs();
            last_residual = residual_est;
            if breakdown || residual_est <= LANCZOS_TOL * norm_est.max(1e-300) {
                let mut x = DVector::zeros(n);
                for (s, u) in ritz.iter().zip(&basis) {
                    x.axpy(*s, u, 1.0);
                }
                x /= x.norm();
                let r = (matrix * &x - theta * &x).norm();
                if r <= RESIDUAL_TOL * norm_est {
                    return Ok((theta, x));
                }
                last_residual = r;
                if breakdown {
                    return Err(Error::EigenNoConvergence {
                        iterations: j + 1,
                        residual: r,
                        n,
                    });
                }
            }
        }

        if j + 1 < max_iters {
            betas.push(beta);
            basis.push(&w / beta);
        }
    }
    Err(Error::EigenNoConvergence {
        iterations: max_iters,
        residual: last_residual,
        n,
    })
}

/// Top eigenpair of the symmetric tridiagonal (alphas, betas), plus a spectral
/// norm estimate (max |Ritz value|).
fn tridiag_top(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>, f64) {
    let m = alphas.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let mut best = 0;
    let mut norm_est = 0.0f64;
    for i in 0..m {
        norm_est = norm_est.max(eig.eigenvalues[i].abs());
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    let ritz: Vec<f64> = eig.eigenvectors.column(best).iter().cloned().collect();
    (eig.eigenvalues[best], ritz, norm_est)
}

// ---------------------------------------------------------------------------
// bulk edges and margins

pub fn wigner_bulk_edge() -> f64 {
    2.0
}

/// Marchenko–Pastur upper bulk edge `(1+√γ)²`.
pub fn mp_upper_edge(gamma: f64) -> f64 {
    (1.0 + gamma.sqrt()).powi(2)
}

/// Marchenko–Pastur lower bulk edge `(1−√γ)²`.
pub fn mp_lower_edge(gamma: f64) -> f64 {
    (1.0 - gamma.sqrt()).powi(2)
}

/// Default detection margin: 4·n^{−2/3} times the edge scale (the
/// Tracy–Widom fluctuation order at the bulk edge).
pub fn default_margin(edge_scale: f64, n: usize) -> f64 {
    4.0 * (n as f64).powf(-2.0 / 3.0) * edge_scale
}

// ---------------------------------------------------------------------------
// PCA tests

/// Which bulk edge the PCA test compares against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PcaMode {
    Wigner,
    Wishart { negative_spike: bool },
}

/// Top-eigenvalue (or, for negative Wishart spikes, bottom-eigenvalue) test
/// against the bulk edge plus a margin.
pub fn pca_test(
    sample: &SymmetricMatrixSample,
    mode: PcaMode,
    margin: f64,
) -> Result<DetectionReport> {
    if margin <= 0.0 {
        return Err(Error::Domain(format!("margin must be positive, got {margin}")));
    }
    let t0 = Instant::now();
    let (detector, statistic, threshold, spiked, v) = match mode {
        PcaMode::Wigner => {
            let (lam, v) = top_eig(&sample.entries)?;
            let thr = wigner_bulk_edge() + margin;
            ("pca", lam, thr, lam > thr, v)
        }
        PcaMode::Wishart { negative_spike } => {
            let gamma = match &sample.model {
                ModelDescriptor::Wishart { gamma_actual, .. } => *gamma_actual,
                other => {
                    return Err(Error::Domain(format!(
                        "wishart PCA mode needs a wishart sample, got {other:?}"
                    )))
                }
            };
            if negative_spike {
                if gamma >= 1.0 {
                    return Err(Error::Domain(format!(
                        "negative-spike PCA needs γ < 1 (bulk away from 0), got γ = {gamma}"
                    )));
                }
                let (lam, v) = min_eig(&sample.entries)?;
                let thr = mp_lower_edge(gamma) - margin;
                ("pca-min", lam, thr, lam < thr, v)
            } else {
                let (lam, v) = top_eig(&sample.entries)?;
                let thr = mp_upper_edge(gamma) + margin;
                ("pca", lam, thr, lam > thr, v)
            }
        }
    };
    Ok(DetectionReport {
        detector: detector.into(),
        decision: if spiked { Decision::Spiked } else { Decision::Unspiked },
        statistic,
        threshold,
        spike_correlation: correlation(&v, sample),
        correlation_floor: None,
        elapsed_secs: t0.elapsed().as_secs_f64(),
    })
}

// ---------------------------------------------------------------------------
// score-transformed PCA

/// Apply the score `f(w) = −p′(w)/p(w)` entrywise to `√n·Y`, zero the
/// diagonal, and rescale by `1/√n`, so the usual Wigner PCA applies with bulk
/// edge `2√F_P`.
pub fn pretransform(sample: &SymmetricMatrixSample, noise: &NoiseModel) -> SymmetricMatrixSample {
    let n = sample.n;
    let sqrt_n = (n as f64).sqrt();
    let mut entries = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = noise.score(sqrt_n * sample.entries[(i, j)]) / sqrt_n;
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }
    SymmetricMatrixSample {
        n,
        entries,
        model: ModelDescriptor::PreTransformed {
            base: Box::new(sample.model.clone()),
            noise: noise.descriptor(),
        },
        seed: sample.seed,
        spike: sample.spike.clone(),
        samples_matrix: None,
    }
}

/// PCA on the score-transformed matrix: reject iff
/// `(1/√n)·λ_max(f(√n·Y)) > 2√F_P + margin`.
pub fn pretransformed_pca_test(
    sample: &SymmetricMatrixSample,
    noise: &NoiseModel,
    margin: f64,
) -> Result<DetectionReport> {
    if margin <= 0.0 {
        return Err(Error::Domain(format!("margin must be positive, got {margin}")));
    }
    let t0 = Instant::now();
    let fisher = noise.fisher_information()?;
    let transformed = pretransform(sample, noise);
    let (lam, v) = top_eig(&transformed.entries)?;
    let threshold = 2.0 * fisher.sqrt() + margin;

    let lambda = match &sample.model {
        ModelDescriptor::Wigner { lambda, .. } | ModelDescriptor::GaussianWigner { lambda, .. } => {
            Some(*lambda)
        }
        _ => None,
    };
    let floor = lambda.filter(|&l| l > 0.0).map(|l| {
        let d = l - 1.0 / fisher.sqrt();
        d * d / (l * l)
    });

    Ok(DetectionReport {
        detector: "transform-pca".into(),
        decision: if lam > threshold { Decision::Spiked } else { Decision::Unspiked },
        statistic: lam,
        threshold,
        spike_correlation: correlation(&v, sample),
        correlation_floor: floor,
        elapsed_secs: t0.elapsed().as_secs_f64(),
    })
}

// ---------------------------------------------------------------------------
// exhaustive MLE for Wishart

/// Candidate-spike enumerations for the exhaustive MLE.
#[derive(Debug, Clone)]
pub enum SupportSet {
    /// All `±1/√n` sign vectors up to global sign (2^{n−1} candidates),
    /// walked by Gray code with O(n) quadratic-form updates.
    RademacherSigns { max_n: usize },
}

impl Default for SupportSet {
    fn default() -> Self {
        SupportSet::RademacherSigns { max_n: 24 }
    }
}

/// Exhaustive-search MLE test: extremize `v⊤Yv/‖v‖²` over the prior support.
/// For `β < 0` reject when the minimum falls below `1+β+ε`; for `β > 0`
/// reject when the maximum exceeds `1+β−ε`.
pub fn mle_wishart_test(
    sample: &SymmetricMatrixSample,
    support: &SupportSet,
    beta: f64,
    epsilon: f64,
) -> Result<DetectionReport> {
    if beta == 0.0 || beta < -1.0 {
        return Err(Error::Domain(format!("need β ∈ [−1,0)∪(0,∞), got {beta}")));
    }
    if epsilon <= 0.0 {
        return Err(Error::Domain(format!("need ε > 0, got {epsilon}")));
    }
    let SupportSet::RademacherSigns { max_n } = support;
    let n = sample.n;
    if n > *max_n {
        return Err(Error::SupportTooLarge(format!(
            "2^{} sign vectors at n = {n} exceeds the cap (max_n = {max_n}); reduce n",
            n - 1
        )));
    }
    let t0 = Instant::now();
    let y = &sample.entries;

    // v = all ones; w = Yv; q = v⊤Yv
    let mut v = vec![1.0f64; n];
    let mut w = y * DVector::from_element(n, 1.0);
    let mut q = w.sum();

    let minimize = beta < 0.0;
    let mut best_q = q;
    let mut best_v = v.clone();
    let total = 1u64 << (n - 1);
    for k in 1..total {
        let flip = 1 + k.trailing_zeros() as usize; // v[0] pinned to +1
        let vk = v[flip];
        q += -4.0 * vk * w[flip] + 4.0 * y[(flip, flip)];
        w.axpy(-2.0 * vk, &y.column(flip).into_owned(), 1.0);
        v[flip] = -vk;
        if (minimize && q < best_q) || (!minimize && q > best_q) {
            best_q = q;
            best_v = v.clone();
        }
    }

    let statistic = best_q / n as f64;
    let (threshold, spiked) = if minimize {
        let thr = 1.0 + beta + epsilon;
        (thr, statistic < thr)
    } else {
        let thr = 1.0 + beta - epsilon;
        (thr, statistic > thr)
    };

    let correlation = sample.spike.as_ref().map(|x| {
        let dot: f64 = best_v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
        (dot * dot) / (n as f64 * x.norm_squared())
    });

    Ok(DetectionReport {
        detector: "mle".into(),
        decision: if spiked { Decision::Spiked } else { Decision::Unspiked },
        statistic,
        threshold,
        spike_correlation: correlation,
        correlation_floor: None,
        elapsed_secs: t0.elapsed().as_secs_f64(),
    })
}

/// Feasible ε interval for the MLE threshold, from the error-exponent
/// condition `2γ log c − β − ε + log(1+β+ε) < 0` (mirrored for β > 0), with
/// the tail-bound side constraint `ε < |β|`. Returns `None` when the MLE
/// condition `2γ log c < β − log(1+β)` itself fails.
pub fn mle_feasible_epsilon(beta: f64, gamma: f64, log_c: f64) -> Result<Option<(f64, f64)>> {
    if beta == 0.0 || beta < -1.0 {
        return Err(Error::Domain(format!("need β ∈ [−1,0)∪(0,∞), got {beta}")));
    }
    if gamma <= 0.0 || log_c <= 0.0 {
        return Err(Error::Domain("need γ > 0 and log c > 0".into()));
    }
    let h: Box<dyn Fn(f64) -> f64> = if beta < 0.0 {
        Box::new(move |eps: f64| 2.0 * gamma * log_c - beta - eps + (1.0 + beta + eps).ln())
    } else {
        Box::new(move |eps: f64| 2.0 * gamma * log_c - beta + eps + (1.0 + beta - eps).ln())
    };
    if h(0.0) >= 0.0 {
        return Ok(None);
    }
    let hi = beta.abs();
    let root = bisect(&|e| h(e), 0.0, hi, 1e-12)?;
    Ok(Some((0.0, root)))
}

// ---------------------------------------------------------------------------
// point-mass test

/// Fraction of off-diagonal entries of `√n·Y` exactly equal to the atom `c`
/// (bit-exact on the scale the entries were generated); reject (spiked) when
/// the fraction drops to `m − ε` or below.
pub fn point_mass_test(
    sample: &ScaledWignerSample,
    c: f64,
    mass: f64,
    epsilon: f64,
) -> Result<DetectionReport> {
    if mass <= 0.0 {
        return Err(Error::Domain("atom mass must be positive".into()));
    }
    if epsilon <= 0.0 || epsilon >= mass {
        return Err(Error::Domain(format!(
            "need ε ∈ (0, m), got ε = {epsilon}, m = {mass}"
        )));
    }
    let t0 = Instant::now();
    let n = sample.n;
    let mut hits = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i != j && sample.entries[(i, j)] == c {
                hits += 1;
            }
        }
    }
    let statistic = hits as f64 / (n * (n - 1)) as f64;
    let threshold = mass - epsilon;
    Ok(DetectionReport {
        detector: "point-mass".into(),
        decision: if statistic <= threshold { Decision::Spiked } else { Decision::Unspiked },
        statistic,
        threshold,
        spike_correlation: None,
        correlation_floor: None,
        elapsed_secs: t0.elapsed().as_secs_f64(),
    })
}

// ---------------------------------------------------------------------------
// χ² Chernoff bound

/// Chernoff bound `exp(k·½(1−z+log z))` on `Pr[χ²_k < zk]` (z < 1) or
/// `Pr[χ²_k > zk]` (z > 1); the side follows from z.
pub fn chi2_chernoff(z: f64, k: u32) -> Result<f64> {
    if z <= 0.0 {
        return Err(Error::Domain(format!("need z > 0, got {z}")));
    }
    if k == 0 {
        return Err(Error::Domain("need k ≥ 1".into()));
    }
    Ok((k as f64 * 0.5 * (1.0 - z + z.ln())).exp())
}

fn correlation(v: &DVector<f64>, sample: &SymmetricMatrixSample) -> Option<f64> {
    sample.spike.as_ref().map(|x| {
        let d = v.dot(x);
        d * d / x.norm_squared()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_gwig, sample_wishart};
    use crate::priors::SpikePrior;

    #[test]
    fn top_eig_diagonal() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 1.0]));
        let (lam, v) = top_eig(&m).unwrap();
        assert!((lam - 3.0).abs() < 1e-12);
        assert!((v[0].abs() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn top_eig_rank_one() {
        let mut rng = crate::rng::stream(3, &[]);
        let x = SpikePrior::spherical().sample_spike(80, &mut rng).unwrap();
        let m = &x * x.transpose();
        let (lam, v) = top_eig(&m).unwrap();
        assert!((lam - 1.0).abs() < 1e-9);
        assert!((v.dot(&x).abs() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn lanczos_matches_dense() {
        let s = sample_gwig(1.4, &SpikePrior::spherical(), 200, 21).unwrap();
        let (lam, v) = lanczos_top(&s.entries).unwrap();
        let (lam_d, v_d) = top_eig_dense(&s.entries);
        assert!((lam - lam_d).abs() < 1e-8, "lanczos {lam} dense {lam_d}");
        assert!((v.dot(&v_d).abs() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn min_eig_is_negated_top() {
        let s = sample_gwig(0.0, &SpikePrior::spherical(), 120, 5).unwrap();
        let (lo, _) = min_eig(&s.entries).unwrap();
        let vals = spectrum(&s.entries);
        assert!((lo - vals[0]).abs() < 1e-8);
    }

    #[test]
    fn pca_detects_supercritical_wigner() {
        let prior = SpikePrior::spherical();
        let n = 300;
        let margin = default_margin(wigner_bulk_edge(), n);
        let spiked = sample_gwig(1.8, &prior, n, 1).unwrap();
        let r = pca_test(&spiked, PcaMode::Wigner, margin).unwrap();
        assert_eq!(r.decision, Decision::Spiked);
        assert!(r.spike_correlation.unwrap() > 0.4);

        let null = sample_gwig(0.0, &prior, n, 2).unwrap();
        let r = pca_test(&null, PcaMode::Wigner, margin).unwrap();
        assert_eq!(r.decision, Decision::Unspiked);
        assert!(r.spike_correlation.is_none());
    }

    #[test]
    fn pca_negative_wishart_needs_small_gamma() {
        let prior = SpikePrior::rademacher();
        let s = sample_wishart(1.25, -0.5, &prior, 40, 3, false).unwrap().sample().unwrap();
        let err = pca_test(&s, PcaMode::Wishart { negative_spike: true }, 0.05);
        assert!(err.is_err());
    }

    #[test]
    fn gaussian_pretransform_is_decision_equivalent() {
        let noise = NoiseModel::standard_gaussian();
        let s = sample_gwig(1.6, &SpikePrior::spherical(), 150, 8).unwrap();
        let t = pretransform(&s, &noise);
        // identity score: off-diagonals agree, diagonal zeroed
        for i in 0..s.n {
            assert_eq!(t.entries[(i, i)], 0.0);
            for j in (i + 1)..s.n {
                assert!((t.entries[(i, j)] - s.entries[(i, j)]).abs() < 1e-14);
            }
        }
        let (a, _) = top_eig(&s.entries).unwrap();
        let (b, _) = top_eig(&t.entries).unwrap();
        let max_diag = (0..s.n).map(|i| s.entries[(i, i)].abs()).fold(0.0, f64::max);
        assert!((a - b).abs() <= max_diag + 1e-10);
    }

    #[test]
    fn mle_exact_orthogonality_at_beta_minus_one() {
        let prior = SpikePrior::rademacher();
        let s = sample_wishart(0.5, -1.0, &prior, 12, 4, false).unwrap().sample().unwrap();
        let r = mle_wishart_test(&s, &SupportSet::default(), -1.0, 0.05).unwrap();
        assert!(r.statistic.abs() < 1e-10, "T = {:.3e}", r.statistic);
        assert_eq!(r.decision, Decision::Spiked);
        assert!((r.spike_correlation.unwrap() - 1.0).abs() < 1e-9);
        assert!(mle_wishart_test(&s, &SupportSet::default(), 0.0, 0.05).is_err());
    }

    #[test]
    fn mle_statistic_matches_brute_force() {
        let prior = SpikePrior::rademacher();
        let s = sample_wishart(0.9, -0.6, &prior, 10, 17, false).unwrap().sample().unwrap();
        let r = mle_wishart_test(&s, &SupportSet::default(), -0.6, 0.01).unwrap();
        // brute force over all 2^9 sign vectors with v[0] = +1
        let n = 10;
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << (n - 1)) {
            let v = DVector::from_fn(n, |i, _| {
                if i == 0 || mask >> (i - 1) & 1 == 0 { 1.0 } else { -1.0 }
            });
            let q = (v.transpose() * &s.entries * &v)[(0, 0)] / n as f64;
            best = best.min(q);
        }
        assert!((r.statistic - best).abs() < 1e-10);
    }

    #[test]
    fn mle_rejects_oversized_support() {
        let prior = SpikePrior::rademacher();
        let s = sample_wishart(0.9, -0.6, &prior, 30, 1, false).unwrap().sample().unwrap();
        match mle_wishart_test(&s, &SupportSet::default(), -0.6, 0.01) {
            Err(Error::SupportTooLarge(msg)) => assert!(msg.contains("reduce n")),
            other => panic!("expected SupportTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn feasible_epsilon_interval() {
        // β = −0.9, γ = 18/19, c = 2: condition has ~6% slack, root ≈ 0.0106
        let iv = mle_feasible_epsilon(-0.9, 18.0 / 19.0, std::f64::consts::LN_2)
            .unwrap()
            .unwrap();
        assert!(iv.0 == 0.0);
        assert!((iv.1 - 0.0106).abs() < 5e-4, "ε_max = {}", iv.1);
        // infeasible once γ exceeds (β − log(1+β))/(2 log 2) ≈ 1.0118
        assert!(mle_feasible_epsilon(-0.9, 1.05, std::f64::consts::LN_2).unwrap().is_none());
        // positive side
        let iv = mle_feasible_epsilon(1.0, 0.1, std::f64::consts::LN_2).unwrap().unwrap();
        assert!(iv.1 > 0.0 && iv.1 < 1.0);
    }

    #[test]
    fn chi2_chernoff_values() {
        assert_eq!(chi2_chernoff(1.0, 7).unwrap(), 1.0);
        let b = chi2_chernoff(0.5, 100).unwrap();
        assert!((b - 6.4055e-5).abs() / b < 1e-3, "bound {b}");
        assert!(chi2_chernoff(-0.5, 10).is_err());
        assert!(chi2_chernoff(2.0, 50).unwrap() < 1.0);
    }
}
