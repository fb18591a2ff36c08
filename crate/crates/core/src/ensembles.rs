//! Samplers for spiked Gaussian Wigner, general Wigner, and Wishart
//! ensembles.
//!
//! Every sampler is a pure function of (parameters, seed): the RNG stream and
//! the fill order (spike first, then the upper triangle row-major) are fixed,
//! so identical inputs give bit-identical matrices.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::priors::SpikePrior;
use crate::rng;

/// Which model produced a sample, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelDescriptor {
    GaussianWigner {
        lambda: f64,
        prior: String,
    },
    Wigner {
        lambda: f64,
        prior: String,
        noise: String,
    },
    Wishart {
        beta: f64,
        gamma: f64,
        gamma_actual: f64,
        num_samples: usize,
        prior: String,
    },
    DiscreteWigner {
        lambda: f64,
        prior: String,
        atoms: Vec<(f64, f64)>,
    },
    PreTransformed {
        base: Box<ModelDescriptor>,
        noise: String,
    },
}

/// An n×n symmetric matrix with provenance.
#[derive(Debug, Clone)]
pub struct SymmetricMatrixSample {
    pub n: usize,
    pub entries: DMatrix<f64>,
    pub model: ModelDescriptor,
    pub seed: u64,
    /// The planted spike, present iff the model was spiked.
    pub spike: Option<DVector<f64>>,
    /// The n×N Wishart sample matrix X, when requested.
    pub samples_matrix: Option<DMatrix<f64>>,
}

/// Wishart sampling either yields a sample or the failure event ⊥
/// (negative spike with `|β|·‖x‖² > 1`, covariance not PSD).
#[derive(Debug)]
pub enum WishartOutcome {
    Sample(SymmetricMatrixSample),
    Failure,
}

impl WishartOutcome {
    pub fn sample(self) -> Option<SymmetricMatrixSample> {
        match self {
            WishartOutcome::Sample(s) => Some(s),
            WishartOutcome::Failure => None,
        }
    }
}

/// Spiked Gaussian Wigner `Y = λxx⊤ + W/√n`, W from the GOE (off-diagonal
/// N(0,1), diagonal N(0,2)). `λ = 0` omits the spike.
pub fn sample_gwig(
    lambda: f64,
    prior: &SpikePrior,
    n: usize,
    seed: u64,
) -> Result<SymmetricMatrixSample> {
    if n < 2 {
        return Err(Error::Domain(format!("need n ≥ 2, got {n}")));
    }
    if lambda < 0.0 {
        return Err(Error::Domain(format!("need λ ≥ 0, got {lambda}")));
    }
    let mut rng = rng::stream(seed, &[]);
    let spike = if lambda > 0.0 {
        Some(prior.sample_spike(n, &mut rng)?)
    } else {
        None
    };
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let entries = fill_symmetric(n, |i, j, rng: &mut _| {
        let w: f64 = if i == j {
            std::f64::consts::SQRT_2 * rng.sample::<f64, _>(StandardNormal)
        } else {
            rng.sample(StandardNormal)
        };
        spike_term(&spike, lambda, i, j) + w * inv_sqrt_n
    }, &mut rng);
    Ok(SymmetricMatrixSample {
        n,
        entries,
        model: ModelDescriptor::GaussianWigner { lambda, prior: prior.descriptor() },
        seed,
        spike,
        samples_matrix: None,
    })
}

/// Spiked Wigner with general noise: off-diagonal entries from the noise law,
/// diagonal from its diagonal law.
pub fn sample_wig(
    lambda: f64,
    noise: &NoiseModel,
    prior: &SpikePrior,
    n: usize,
    seed: u64,
) -> Result<SymmetricMatrixSample> {
    if n < 2 {
        return Err(Error::Domain(format!("need n ≥ 2, got {n}")));
    }
    if lambda < 0.0 {
        return Err(Error::Domain(format!("need λ ≥ 0, got {lambda}")));
    }
    let mut rng = rng::stream(seed, &[]);
    let spike = if lambda > 0.0 {
        Some(prior.sample_spike(n, &mut rng)?)
    } else {
        None
    };
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let entries = fill_symmetric(n, |i, j, rng: &mut _| {
        let w = if i == j { noise.sample_diagonal(rng) } else { noise.sample(rng) };
        spike_term(&spike, lambda, i, j) + w * inv_sqrt_n
    }, &mut rng);
    Ok(SymmetricMatrixSample {
        n,
        entries,
        model: ModelDescriptor::Wigner {
            lambda,
            prior: prior.descriptor(),
            noise: noise.descriptor(),
        },
        seed,
        spike,
        samples_matrix: None,
    })
}

/// Spiked Wishart `Y = XX⊤/N`, columns of X iid `N(0, I + βxx⊤)`,
/// `N = round(n/γ)` (half-up). Returns ⊥ iff `1 + β‖x‖² < 0`.
///
/// Columns are formed by the rank-one update
/// `y = g + (√(1+β‖x‖²) − 1)·(⟨g,x⟩/‖x‖²)·x`, avoiding any matrix square
/// root. Values of `1+β‖x‖²` within −1e−12 of zero are clamped to 0 so that
/// β = −1 with exact-unit-norm priors stays sampleable.
pub fn sample_wishart(
    gamma: f64,
    beta: f64,
    prior: &SpikePrior,
    n: usize,
    seed: u64,
    keep_samples: bool,
) -> Result<WishartOutcome> {
    if n < 2 {
        return Err(Error::Domain(format!("need n ≥ 2, got {n}")));
    }
    if gamma <= 0.0 {
        return Err(Error::Domain(format!("need γ > 0, got {gamma}")));
    }
    if beta < -1.0 {
        return Err(Error::Domain(format!("need β ≥ −1, got {beta}")));
    }
    let num_samples = (n as f64 / gamma + 0.5).floor() as usize;
    if num_samples < 2 {
        return Err(Error::Domain(format!(
            "N = round(n/γ) = {num_samples} < 2 (n = {n}, γ = {gamma})"
        )));
    }
    let mut rng = rng::stream(seed, &[]);
    let spike = if beta != 0.0 {
        Some(prior.sample_spike(n, &mut rng)?)
    } else {
        None
    };

    let (coef, x) = match &spike {
        Some(x) => {
            let norm_sq = x.norm_squared();
            let s = 1.0 + beta * norm_sq;
            if s < -1e-12 {
                return Ok(WishartOutcome::Failure);
            }
            ((s.max(0.0).sqrt() - 1.0) / norm_sq, Some(x))
        }
        None => (0.0, None),
    };

    let mut samples = DMatrix::<f64>::zeros(n, num_samples);
    for k in 0..num_samples {
        let mut g = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        if let Some(x) = x {
            let proj = g.dot(x);
            g.axpy(coef * proj, x, 1.0);
        }
        samples.set_column(k, &g);
    }

    let mut entries = &samples * samples.transpose();
    entries /= num_samples as f64;
    // enforce exact symmetry against matmul roundoff
    for i in 0..n {
        for j in (i + 1)..n {
            entries[(j, i)] = entries[(i, j)];
        }
    }

    Ok(WishartOutcome::Sample(SymmetricMatrixSample {
        n,
        entries,
        model: ModelDescriptor::Wishart {
            beta,
            gamma,
            gamma_actual: n as f64 / num_samples as f64,
            num_samples,
            prior: prior.descriptor(),
        },
        seed,
        spike,
        samples_matrix: if keep_samples { Some(samples) } else { None },
    }))
}

/// Atomic (point-mass) noise law for the point-mass detector. Kept apart from
/// [`NoiseModel`], which requires a density.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteNoise {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteNoise {
    /// Atoms `(value, prob)` with mean 0 and variance 1.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() || atoms.iter().any(|&(_, p)| p < 0.0) {
            return Err(Error::InvalidNoise("bad discrete atoms".into()));
        }
        let total: f64 = atoms.iter().map(|&(_, p)| p).sum();
        let mean: f64 = atoms.iter().map(|&(v, p)| v * p).sum();
        let var: f64 = atoms.iter().map(|&(v, p)| v * v * p).sum();
        if (total - 1.0).abs() > 1e-12 || mean.abs() > 1e-12 || (var - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidNoise(format!(
                "discrete atoms need total 1, mean 0, variance 1 (got {total}, {mean}, {var})"
            )));
        }
        Ok(DiscreteNoise { atoms })
    }

    /// The `±1` coin, the canonical point-mass noise.
    pub fn rademacher() -> Self {
        DiscreteNoise::new(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap()
    }

    /// Parse `discrete:v1@p1,v2@p2,...`.
    pub fn parse(descriptor: &str) -> Result<Self> {
        let list = descriptor
            .trim()
            .strip_prefix("discrete:")
            .ok_or_else(|| Error::InvalidNoise(format!("unknown discrete noise {descriptor:?}")))?;
        let mut atoms = Vec::new();
        for part in list.split(',') {
            let (v, p) = part
                .split_once('@')
                .ok_or_else(|| Error::InvalidNoise(format!("bad atom {part:?}")))?;
            let v: f64 = v.parse().map_err(|_| Error::InvalidNoise(format!("bad value {v:?}")))?;
            let p: f64 = p.parse().map_err(|_| Error::InvalidNoise(format!("bad prob {p:?}")))?;
            atoms.push((v, p));
        }
        DiscreteNoise::new(atoms)
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Mass at `value` (exact comparison).
    pub fn mass_at(&self, value: f64) -> f64 {
        self.atoms.iter().filter(|&&(v, _)| v == value).map(|&(_, p)| p).sum()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for &(v, p) in &self.atoms {
            acc += p;
            if u < acc {
                return v;
            }
        }
        self.atoms.last().unwrap().0
    }
}

/// A Wigner sample kept on the `√n·Y` scale, where discrete noise entries are
/// exact atom values. Input to the point-mass detector, which needs bit-exact
/// comparisons.
#[derive(Debug, Clone)]
pub struct ScaledWignerSample {
    pub n: usize,
    /// `√n·Y_ij = √n·λ·x_i·x_j + w_ij` with `w` drawn from the atoms.
    pub entries: DMatrix<f64>,
    pub lambda: f64,
    pub seed: u64,
    pub spike: Option<DVector<f64>>,
    pub atoms: Vec<(f64, f64)>,
}

/// Spiked Wigner with atomic noise, generated and kept on the `√n·Y` scale
/// (diagonal uses the same law).
pub fn sample_wig_scaled_discrete(
    lambda: f64,
    noise: &DiscreteNoise,
    prior: &SpikePrior,
    n: usize,
    seed: u64,
) -> Result<ScaledWignerSample> {
    if n < 2 {
        return Err(Error::Domain(format!("need n ≥ 2, got {n}")));
    }
    if lambda < 0.0 {
        return Err(Error::Domain(format!("need λ ≥ 0, got {lambda}")));
    }
    let mut rng = rng::stream(seed, &[]);
    let spike = if lambda > 0.0 {
        Some(prior.sample_spike(n, &mut rng)?)
    } else {
        None
    };
    let sqrt_n = (n as f64).sqrt();
    let entries = fill_symmetric(n, |i, j, rng: &mut _| {
        sqrt_n * spike_term(&spike, lambda, i, j) + noise.sample(rng)
    }, &mut rng);
    Ok(ScaledWignerSample {
        n,
        entries,
        lambda,
        seed,
        spike,
        atoms: noise.atoms.clone(),
    })
}

fn spike_term(spike: &Option<DVector<f64>>, lambda: f64, i: usize, j: usize) -> f64 {
    match spike {
        Some(x) => lambda * x[i] * x[j],
        None => 0.0,
    }
}

/// Fill the upper triangle row-major and mirror, so symmetry is exact.
fn fill_symmetric<R: Rng, F: FnMut(usize, usize, &mut R) -> f64>(
    n: usize,
    mut entry: F,
    rng: &mut R,
) -> DMatrix<f64> {
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = entry(i, j, rng);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gwig_is_deterministic_and_symmetric() {
        let p = SpikePrior::spherical();
        let a = sample_gwig(1.2, &p, 40, 7).unwrap();
        let b = sample_gwig(1.2, &p, 40, 7).unwrap();
        assert_eq!(a.entries, b.entries);
        assert_eq!(a.spike.as_ref().unwrap(), b.spike.as_ref().unwrap());
        for i in 0..40 {
            for j in 0..40 {
                assert_eq!(a.entries[(i, j)], a.entries[(j, i)]);
            }
        }
        assert!(sample_gwig(0.0, &p, 40, 7).unwrap().spike.is_none());
    }

    #[test]
    fn wig_and_wishart_deterministic() {
        let p = SpikePrior::rademacher();
        let noise = NoiseModel::bimodal();
        let a = sample_wig(0.5, &noise, &p, 30, 11).unwrap();
        let b = sample_wig(0.5, &noise, &p, 30, 11).unwrap();
        assert_eq!(a.entries, b.entries);

        let a = sample_wishart(0.5, 0.7, &p, 20, 3, true).unwrap().sample().unwrap();
        let b = sample_wishart(0.5, 0.7, &p, 20, 3, true).unwrap().sample().unwrap();
        assert_eq!(a.entries, b.entries);
        assert_eq!(a.samples_matrix.as_ref().unwrap(), b.samples_matrix.as_ref().unwrap());
    }

    #[test]
    fn goe_diagonal_variance() {
        let p = SpikePrior::spherical();
        let mut diags = Vec::new();
        for seed in 0..7 {
            let n = 4000;
            let s = sample_gwig(0.0, &p, n, 100 + seed).unwrap();
            let sqrt_n = (n as f64).sqrt();
            for i in 0..n {
                diags.push(s.entries[(i, i)] * sqrt_n);
            }
        }
        let mean = diags.iter().sum::<f64>() / diags.len() as f64;
        let var = diags.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (diags.len() - 1) as f64;
        assert!((var - 2.0).abs() < 0.1, "diag variance {var}");
    }

    #[test]
    fn wishart_matches_retained_samples() {
        let p = SpikePrior::spherical();
        let s = sample_wishart(0.4, 0.8, &p, 25, 9, true).unwrap().sample().unwrap();
        let x = s.samples_matrix.as_ref().unwrap();
        let y = x * x.transpose() / (x.ncols() as f64);
        let max_diff = (&s.entries - &y).abs().max();
        assert!(max_diff < 1e-10, "‖Y − XX⊤/N‖∞ = {max_diff}");
    }

    #[test]
    fn wishart_sample_count_rounds_half_up() {
        let p = SpikePrior::spherical();
        // n/γ = 10/0.8 = 12.5 → N = 13
        let s = sample_wishart(0.8, 0.0, &p, 10, 1, false).unwrap().sample().unwrap();
        match s.model {
            ModelDescriptor::Wishart { num_samples, .. } => assert_eq!(num_samples, 13),
            _ => unreachable!(),
        }
    }

    #[test]
    fn wishart_beta_minus_one_annihilates_spike() {
        let p = SpikePrior::rademacher();
        let s = sample_wishart(0.5, -1.0, &p, 24, 5, false).unwrap().sample().unwrap();
        let x = s.spike.as_ref().unwrap();
        let q = (x.transpose() * &s.entries * x)[(0, 0)];
        assert!(q.abs() < 1e-10, "x⊤Yx = {q:.3e}");
    }

    #[test]
    fn wishart_failure_is_reachable() {
        // sparse ρ = 0.02, n = 100: ‖x‖² = K/2 with K ~ Binomial(100, 0.02);
        // β = −1 fails exactly when K ≥ 3.
        let p = SpikePrior::sparse_rademacher(0.02).unwrap();
        let mut failures = 0;
        let mut successes = 0;
        for seed in 0..200 {
            match sample_wishart(0.5, -1.0, &p, 100, seed, false).unwrap() {
                WishartOutcome::Failure => failures += 1,
                WishartOutcome::Sample(_) => successes += 1,
            }
        }
        assert!(failures > 0 && successes > 0, "{failures} ⊥ / {successes} ok");
    }

    #[test]
    fn wishart_quadratic_form_mean() {
        let p = SpikePrior::rademacher();
        let beta = 0.5;
        let mut vals = Vec::new();
        for seed in 0..30 {
            let s = sample_wishart(0.25, beta, &p, 200, 40 + seed, false)
                .unwrap()
                .sample()
                .unwrap();
            let x = s.spike.as_ref().unwrap();
            vals.push((x.transpose() * &s.entries * x)[(0, 0)] / x.norm_squared());
        }
        let (mean, se) = crate::numeric::mean_and_se(&vals);
        // x⊤Yx/‖x‖² ~ (1+β‖x‖²)·χ²_N/N
        assert!((mean - (1.0 + beta)).abs() < 3.0 * se + 1e-9, "mean {mean}, se {se}");
    }

    #[test]
    fn discrete_wigner_entries_are_exact_atoms_when_unspiked() {
        let dn = DiscreteNoise::rademacher();
        let p = SpikePrior::rademacher();
        let s = sample_wig_scaled_discrete(0.0, &dn, &p, 50, 2).unwrap();
        for i in 0..50 {
            for j in 0..50 {
                let v = s.entries[(i, j)];
                assert!(v == 1.0 || v == -1.0);
            }
        }
    }

    #[test]
    fn discrete_noise_validation() {
        assert!(DiscreteNoise::new(vec![(1.0, 0.5), (-1.0, 0.4)]).is_err());
        assert!(DiscreteNoise::parse("discrete:1@0.5,-1@0.5").is_ok());
        assert!(DiscreteNoise::parse("discrete:2@0.5,-2@0.5").is_err());
        assert_eq!(DiscreteNoise::rademacher().mass_at(1.0), 0.5);
    }
}
