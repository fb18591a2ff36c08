//! Likelihood-ratio second moments: Monte Carlo estimators over the overlap
//! law, the exact confluent-hypergeometric value for the spherical prior, the
//! boundedness limit, and the hypothesis-testing power bound.

use rand::Rng;

use crate::error::{Error, Result};
use crate::priors::SpikePrior;

/// A Monte Carlo second-moment estimate with heavy-tail diagnostics.
///
/// Second moments of likelihood ratios are ≥ 1; near-threshold estimates are
/// dominated by rare large overlaps, so the mass fraction carried by the top
/// 1% of terms is reported and flagged above 50%.
#[derive(Debug, Clone)]
pub struct MomentEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: usize,
    /// Terms that hit the singular guard (Wishart: `β²⟨x,x′⟩² ≥ 1`), excluded
    /// from the mean.
    pub diverged_count: usize,
    /// Fraction of the total mass in the largest 1% of terms.
    pub top1pct_mass: f64,
}

impl MomentEstimate {
    pub fn diverged(&self) -> bool {
        self.diverged_count > 0
    }

    pub fn heavy_tail(&self) -> bool {
        self.top1pct_mass > 0.5
    }

    /// Build the estimate from raw terms (exposed so parallel drivers can
    /// merge per-worker term blocks deterministically).
    pub fn from_terms(terms: &[f64], diverged_count: usize) -> MomentEstimate {
        let (value, std_error) = crate::numeric::mean_and_se(terms);
        MomentEstimate {
            value,
            std_error,
            trials: terms.len() + diverged_count,
            diverged_count,
            top1pct_mass: top_mass_fraction(terms, 0.01),
        }
    }
}

fn top_mass_fraction(terms: &[f64], fraction: f64) -> f64 {
    if terms.is_empty() {
        return 0.0;
    }
    let k = ((terms.len() as f64 * fraction).ceil() as usize).clamp(1, terms.len());
    let mut sorted = terms.to_vec();
    sorted.sort_by(f64::total_cmp);
    let total: f64 = sorted.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let top: f64 = sorted[sorted.len() - k..].iter().sum();
    top / total
}

/// Terms `exp(nλ²⟨x,x′⟩²/2)` of the Gaussian Wigner second moment.
pub fn gwig_second_moment_terms<R: Rng + ?Sized>(
    lambda: f64,
    prior: &SpikePrior,
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let overlaps = prior.overlap_samples(n, trials, rng)?;
    let half_n_l2 = 0.5 * n as f64 * lambda * lambda;
    Ok(overlaps.iter().map(|&o| (half_n_l2 * o * o).exp()).collect())
}

/// Monte Carlo second moment of the spiked vs unspiked Gaussian Wigner pair:
/// mean of `exp(nλ²⟨x,x′⟩²/2)` over independent spike pairs.
pub fn gwig_second_moment_mc<R: Rng + ?Sized>(
    lambda: f64,
    prior: &SpikePrior,
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<MomentEstimate> {
    if trials < 1000 {
        return Err(Error::Domain(format!("need ≥ 1000 trials, got {trials}")));
    }
    let terms = gwig_second_moment_terms(lambda, prior, n, trials, rng)?;
    Ok(MomentEstimate::from_terms(&terms, 0))
}

/// Exact spherical-prior second moment `₁F₁(1/2; n/2; nλ²/2)` by Kummer
/// series (positive terms, no cancellation), with the term recurrence run in
/// log space. The argument is capped at 700 to stay inside f64 range.
pub fn gwig_second_moment_spherical_exact(lambda: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!("need n ≥ 3, got {n}")));
    }
    if lambda < 0.0 {
        return Err(Error::Domain(format!("need λ ≥ 0, got {lambda}")));
    }
    let z = 0.5 * n as f64 * lambda * lambda;
    if z > 700.0 {
        return Err(Error::Overflow(format!(
            "Kummer argument nλ²/2 = {z:.1} > 700; for λ < 1 use the limit (1−λ²)^(−1/2)"
        )));
    }
    let a = 0.5;
    let b = 0.5 * n as f64;
    let mut log_term = 0.0f64; // log of the k-th term, k = 0
    let mut sum = 1.0f64;
    for k in 0..100_000 {
        let kf = k as f64;
        log_term += ((a + kf) / (b + kf)).ln() + z.ln() - (kf + 1.0).ln();
        let term = log_term.exp();
        sum += term;
        if term / sum < 1e-16 {
            return Ok(sum);
        }
    }
    Err(Error::Quadrature("Kummer series did not converge".into()))
}

/// Limit of the (conditional) second moment below threshold: `(1−λ²)^{−1/2}`.
pub fn second_moment_limit(lambda: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::Domain(format!(
            "second moment limit needs λ ∈ [0,1), got {lambda}"
        )));
    }
    Ok(1.0 / (1.0 - lambda * lambda).sqrt())
}

/// Wishart second-moment terms `(1−β²⟨x,x′⟩²)^{−N/2}`; draws with
/// `β²⟨x,x′⟩² ≥ 1` are diverged and excluded.
pub fn wishart_second_moment_terms<R: Rng + ?Sized>(
    beta: f64,
    num_samples: usize,
    overlaps: &[f64],
) -> (Vec<f64>, usize) {
    let half_n = 0.5 * num_samples as f64;
    let mut terms = Vec::with_capacity(overlaps.len());
    let mut diverged = 0usize;
    for &o in overlaps {
        let x = beta * beta * o * o;
        if x >= 1.0 {
            diverged += 1;
        } else {
            terms.push((-half_n * (-x).ln_1p()).exp());
        }
    }
    (terms, diverged)
}

/// Monte Carlo second moment of the spiked vs unspiked Wishart pair:
/// mean of `(1−β²⟨x,x′⟩²)^{−N/2}` with `N = round(n/γ)` (|β| < 1).
///
/// The unconditioned estimator reproduces the limit `(1−β²/γ)^{−1/2}` only
/// below the spectral threshold; approaching `β → √γ` the mean is dominated
/// by rare overlaps and the heavy-tail diagnostics fire instead.
pub fn wishart_second_moment_mc<R: Rng + ?Sized>(
    beta: f64,
    gamma: f64,
    prior: &SpikePrior,
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<MomentEstimate> {
    if beta.abs() >= 1.0 {
        return Err(Error::Domain(format!("need |β| < 1, got {beta}")));
    }
    if gamma <= 0.0 {
        return Err(Error::Domain(format!("need γ > 0, got {gamma}")));
    }
    if trials < 1000 {
        return Err(Error::Domain(format!("need ≥ 1000 trials, got {trials}")));
    }
    let num_samples = (n as f64 / gamma + 0.5).floor() as usize;
    let overlaps = prior.overlap_samples(n, trials, rng)?;
    let (terms, diverged) = wishart_second_moment_terms::<R>(beta, num_samples, &overlaps);
    Ok(MomentEstimate::from_terms(&terms, diverged))
}

/// Minimal type-II error `b` compatible with a second moment `S` at type-I
/// level `a`: the smaller root of `(1−b)²/a + b²/(1−a) = S`, clamped to
/// `[0, 1−a]`. `S = 1` forces `b = 1−a` (random guessing); `S ≥ 1/a` allows
/// a perfect test.
pub fn power_bound(second_moment: f64, type1: f64) -> Result<f64> {
    if !(0.0 < type1 && type1 < 1.0) {
        return Err(Error::Domain(format!("need α ∈ (0,1), got {type1}")));
    }
    if second_moment < 1.0 {
        return Err(Error::Domain(format!(
            "second moments of likelihood ratios are ≥ 1, got {second_moment}"
        )));
    }
    let a = type1;
    // (1−b)²(1−a) + b²a = S·a(1−a)  ⇒  b² − 2(1−a)b + (1−a)(1 − S·a) = 0
    let disc = (1.0 - a) * a * (second_moment - 1.0);
    let b = (1.0 - a) - disc.sqrt();
    Ok(b.clamp(0.0, 1.0 - a))
}
