//! Univariate noise densities for the non-Gaussian Wigner model: Gaussian
//! mixtures with evaluators for `p`, `p′`, `p″`, the score `f = −p′/p`, the
//! Fisher information `F_P = ∫ p′²/p`, and the translation function
//! `τ(a,b) = log E[p(z−a)p(z−b)/p(z)²]`.
//!
//! All mixture evaluations go through log-space responsibilities; `p`
//! underflows far in the tails and the score is a ratio best formed there.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, log_sum_exp};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const MOMENT_TOL: f64 = 1e-12;
const QUAD_TOL: f64 = 1e-11;

/// One Gaussian mixture component.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

/// The underlying density family.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseKind {
    StandardGaussian,
    GaussianMixture(Vec<MixtureComponent>),
}

/// A unit-variance, mean-zero off-diagonal noise law, plus an optional
/// distinct diagonal law.
///
/// When no diagonal law is set, the Gaussian case uses N(0, 2) (the GOE
/// convention) and mixtures reuse the off-diagonal law; the score
/// pre-transform zeroes the diagonal, so the choice never affects detection.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    kind: NoiseKind,
    diagonal: Option<NoiseKind>,
}

impl NoiseModel {
    pub fn standard_gaussian() -> Self {
        NoiseModel {
            kind: NoiseKind::StandardGaussian,
            diagonal: None,
        }
    }

    /// The default strongly-bimodal mixture `½N(−0.9, 0.19) + ½N(0.9, 0.19)`
    /// (component variance 0.19, total variance 0.81 + 0.19 = 1).
    pub fn bimodal() -> Self {
        let sd = 0.19f64.sqrt();
        NoiseModel::mixture(vec![
            MixtureComponent { weight: 0.5, mean: -0.9, sd },
            MixtureComponent { weight: 0.5, mean: 0.9, sd },
        ])
        .expect("bimodal mixture is valid")
    }

    /// Build a mixture noise; weights must sum to 1, every `sd > 0`, and the
    /// law must have mean 0 and variance 1 (both to 1e−12).
    pub fn mixture(components: Vec<MixtureComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidNoise("empty mixture".into()));
        }
        if components.iter().any(|c| c.weight <= 0.0) {
            return Err(Error::InvalidNoise("non-positive mixture weight".into()));
        }
        if components.iter().any(|c| c.sd <= 0.0) {
            return Err(Error::InvalidNoise("non-positive component sd".into()));
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > MOMENT_TOL {
            return Err(Error::InvalidNoise(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        let mean: f64 = components.iter().map(|c| c.weight * c.mean).sum();
        if mean.abs() > MOMENT_TOL {
            return Err(Error::InvalidNoise(format!("mixture mean {mean:.3e} ≠ 0")));
        }
        let var: f64 = components
            .iter()
            .map(|c| c.weight * (c.mean * c.mean + c.sd * c.sd))
            .sum();
        if (var - 1.0).abs() > MOMENT_TOL {
            return Err(Error::InvalidNoise(format!("mixture variance {var} ≠ 1")));
        }
        Ok(NoiseModel {
            kind: NoiseKind::GaussianMixture(components),
            diagonal: None,
        })
    }

    /// Override the diagonal law.
    pub fn with_diagonal(mut self, kind: NoiseKind) -> Self {
        self.diagonal = Some(kind);
        self
    }

    /// Parse `gaussian`, `bimodal`, or `mix:w1@m1@s1,w2@m2@s2,...`.
    pub fn parse(descriptor: &str) -> Result<Self> {
        let d = descriptor.trim();
        match d {
            "gaussian" => return Ok(NoiseModel::standard_gaussian()),
            "bimodal" => return Ok(NoiseModel::bimodal()),
            _ => {}
        }
        if let Some(list) = d.strip_prefix("mix:") {
            let mut components = Vec::new();
            for part in list.split(',') {
                let fields: Vec<&str> = part.split('@').collect();
                if fields.len() != 3 {
                    return Err(Error::InvalidNoise(format!(
                        "component {part:?} is not w@m@s"
                    )));
                }
                let parse = |s: &str| -> Result<f64> {
                    s.parse()
                        .map_err(|_| Error::InvalidNoise(format!("bad number {s:?} in {d:?}")))
                };
                components.push(MixtureComponent {
                    weight: parse(fields[0])?,
                    mean: parse(fields[1])?,
                    sd: parse(fields[2])?,
                });
            }
            return NoiseModel::mixture(components);
        }
        Err(Error::InvalidNoise(format!("unknown noise {d:?}")))
    }

    pub fn descriptor(&self) -> String {
        match &self.kind {
            NoiseKind::StandardGaussian => "gaussian".into(),
            NoiseKind::GaussianMixture(c) => {
                let b = NoiseModel::bimodal();
                if *self == b {
                    return "bimodal".into();
                }
                let parts: Vec<String> = c
                    .iter()
                    .map(|c| format!("{}@{}@{}", c.weight, c.mean, c.sd))
                    .collect();
                format!("mix:{}", parts.join(","))
            }
        }
    }

    pub fn is_gaussian(&self) -> bool {
        self.kind == NoiseKind::StandardGaussian
    }

    pub fn log_pdf(&self, w: f64) -> f64 {
        log_pdf_of(&self.kind, w)
    }

    pub fn pdf(&self, w: f64) -> f64 {
        self.log_pdf(w).exp()
    }

    /// `p′(w)`.
    pub fn dpdf(&self, w: f64) -> f64 {
        -self.pdf(w) * self.score(w)
    }

    /// `p″(w)`.
    pub fn d2pdf(&self, w: f64) -> f64 {
        let (s, ratio2) = self.score_and_d2ratio(w);
        let _ = s;
        self.pdf(w) * ratio2
    }

    /// Score `f(w) = −p′(w)/p(w)`; the identity for standard Gaussian noise.
    pub fn score(&self, w: f64) -> f64 {
        match &self.kind {
            NoiseKind::StandardGaussian => w,
            NoiseKind::GaussianMixture(c) => {
                let r = responsibilities(c, w);
                c.iter()
                    .zip(&r)
                    .map(|(c, &ri)| ri * (w - c.mean) / (c.sd * c.sd))
                    .sum()
            }
        }
    }

    /// `f′(w) = −p″/p + (p′/p)²`.
    pub fn score_deriv(&self, w: f64) -> f64 {
        match &self.kind {
            NoiseKind::StandardGaussian => 1.0,
            NoiseKind::GaussianMixture(_) => {
                let (score, d2ratio) = self.score_and_d2ratio(w);
                -d2ratio + score * score
            }
        }
    }

    /// `(f(w), p″(w)/p(w))` in one pass over the responsibilities.
    fn score_and_d2ratio(&self, w: f64) -> (f64, f64) {
        match &self.kind {
            NoiseKind::StandardGaussian => (w, w * w - 1.0),
            NoiseKind::GaussianMixture(c) => {
                let r = responsibilities(c, w);
                let mut score = 0.0;
                let mut d2 = 0.0;
                for (c, &ri) in c.iter().zip(&r) {
                    let s2 = c.sd * c.sd;
                    let d = w - c.mean;
                    score += ri * d / s2;
                    d2 += ri * (d * d / (s2 * s2) - 1.0 / s2);
                }
                (score, d2)
            }
        }
    }

    /// Half-width enclosing all but ≲1e−12 of the mass of `p′²/p`.
    fn support_radius(&self) -> f64 {
        match &self.kind {
            NoiseKind::StandardGaussian => 12.0,
            NoiseKind::GaussianMixture(c) => {
                let m = c.iter().map(|c| c.mean.abs()).fold(0.0, f64::max);
                let s = c.iter().map(|c| c.sd).fold(0.0, f64::max);
                m + 12.0 * s
            }
        }
    }

    /// Fisher information `F_P = ∫ p′(w)²/p(w) dw = E[f(W)²]`.
    ///
    /// Always ≥ 1 for unit-variance laws, with equality exactly for the
    /// standard Gaussian.
    pub fn fisher_information(&self) -> Result<f64> {
        let t = self.support_radius();
        adaptive_simpson(
            &|w| {
                let f = self.score(w);
                f * f * self.pdf(w)
            },
            -t,
            t,
            QUAD_TOL,
        )
    }

    /// `E[f(W)]` by quadrature (0 for any valid noise).
    pub fn score_mean(&self) -> Result<f64> {
        let t = self.support_radius();
        adaptive_simpson(&|w| self.score(w) * self.pdf(w), -t, t, QUAD_TOL)
    }

    /// `E[f′(W)]` by quadrature (equals `F_P`).
    pub fn score_deriv_mean(&self) -> Result<f64> {
        let t = self.support_radius();
        adaptive_simpson(&|w| self.score_deriv(w) * self.pdf(w), -t, t, QUAD_TOL)
    }

    /// Translation function `τ(a,b) = log ∫ p(z−a)p(z−b)/p(z) dz`.
    pub fn translation_fn(&self, a: f64, b: f64) -> Result<f64> {
        let t = self.support_radius() + a.abs() + b.abs() + 2.0;
        let integral = adaptive_simpson(
            &|z| (self.log_pdf(z - a) + self.log_pdf(z - b) - self.log_pdf(z)).exp(),
            -t,
            t,
            QUAD_TOL,
        )?;
        if !(integral.is_finite() && integral > 0.0) {
            return Err(Error::Quadrature(format!(
                "translation integral diverged at a={a}, b={b}"
            )));
        }
        Ok(integral.ln())
    }

    /// `(λ*_X/√F_P, 1/√F_P)`: detection is impossible below the first value,
    /// score-transformed PCA succeeds above the second.
    pub fn nongaussian_thresholds(&self, lambda_star: f64) -> Result<(f64, f64)> {
        if !(lambda_star > 0.0 && lambda_star <= 1.0) {
            return Err(Error::Domain(format!(
                "lambda_star must lie in (0,1], got {lambda_star}"
            )));
        }
        let f = self.fisher_information()?;
        Ok((lambda_star / f.sqrt(), 1.0 / f.sqrt()))
    }

    /// Draw from the off-diagonal law.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        sample_kind(&self.kind, rng)
    }

    /// Draw from the diagonal law (N(0,2) for Gaussian, the off-diagonal law
    /// for mixtures, unless overridden).
    pub fn sample_diagonal<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.diagonal {
            Some(kind) => sample_kind(kind, rng),
            None => match &self.kind {
                NoiseKind::StandardGaussian => {
                    std::f64::consts::SQRT_2 * rng.sample::<f64, _>(StandardNormal)
                }
                kind => sample_kind(kind, rng),
            },
        }
    }
}

fn sample_kind<R: Rng + ?Sized>(kind: &NoiseKind, rng: &mut R) -> f64 {
    match kind {
        NoiseKind::StandardGaussian => rng.sample(StandardNormal),
        NoiseKind::GaussianMixture(components) => {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            for c in components {
                acc += c.weight;
                if u < acc {
                    return c.mean + c.sd * rng.sample::<f64, _>(StandardNormal);
                }
            }
            let c = components.last().unwrap();
            c.mean + c.sd * rng.sample::<f64, _>(StandardNormal)
        }
    }
}

fn log_pdf_of(kind: &NoiseKind, w: f64) -> f64 {
    match kind {
        NoiseKind::StandardGaussian => -0.5 * w * w - HALF_LN_2PI,
        NoiseKind::GaussianMixture(components) => {
            let terms: Vec<f64> = components
                .iter()
                .map(|c| {
                    let z = (w - c.mean) / c.sd;
                    c.weight.ln() - 0.5 * z * z - c.sd.ln() - HALF_LN_2PI
                })
                .collect();
            log_sum_exp(&terms)
        }
    }
}

fn responsibilities(components: &[MixtureComponent], w: f64) -> Vec<f64> {
    let logs: Vec<f64> = components
        .iter()
        .map(|c| {
            let z = (w - c.mean) / c.sd;
            c.weight.ln() - 0.5 * z * z - c.sd.ln()
        })
        .collect();
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logs.iter().map(|&l| (l - m).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.iter().map(|&e| e / total).collect()
}
