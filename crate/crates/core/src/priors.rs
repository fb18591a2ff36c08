//! Spike priors: sampling, overlap laws, rate functions and subgaussian
//! constants.
//!
//! A prior describes the law of the hidden unit-norm direction `x` planted in
//! a spiked matrix. Coordinates of finite-atom priors are drawn as `atom/√n`,
//! so `‖x‖² → 1`; the spherical prior is exactly unit norm.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::numeric::{binary_entropy, entropy, golden_min, log_sum_exp};

const ATOM_TOL: f64 = 1e-12;

/// Law of the hidden spike direction.
#[derive(Debug, Clone, PartialEq)]
pub enum SpikePrior {
    /// Uniform on the unit sphere of ℝⁿ.
    Spherical,
    /// Coordinates iid `atom/√n`; atoms `(value, prob)` must have mean 0 and
    /// variance 1.
    IidAtoms(Vec<(f64, f64)>),
    /// Coordinate is 0 w.p. `1−ρ`, else `±1/√(ρn)` equiprobably.
    SparseRademacher { rho: f64 },
}

impl SpikePrior {
    pub fn spherical() -> Self {
        SpikePrior::Spherical
    }

    /// `±1/√n` coordinates, i.e. the sparse Rademacher prior at ρ = 1.
    pub fn rademacher() -> Self {
        SpikePrior::SparseRademacher { rho: 1.0 }
    }

    pub fn sparse_rademacher(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::InvalidPrior(format!(
                "sparsity must lie in (0, 1], got {rho}"
            )));
        }
        Ok(SpikePrior::SparseRademacher { rho })
    }

    /// Finite-atom prior; validates probabilities, mean 0 and variance 1.
    pub fn iid_atoms(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidPrior("empty atom list".into()));
        }
        if atoms.iter().any(|&(_, p)| p < 0.0) {
            return Err(Error::InvalidPrior("negative atom probability".into()));
        }
        let total: f64 = atoms.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > ATOM_TOL {
            return Err(Error::InvalidPrior(format!(
                "atom probabilities sum to {total}, expected 1"
            )));
        }
        let mean: f64 = atoms.iter().map(|&(v, p)| v * p).sum();
        if mean.abs() > ATOM_TOL {
            return Err(Error::InvalidPrior(format!("atom mean {mean:.3e} ≠ 0")));
        }
        let var: f64 = atoms.iter().map(|&(v, p)| v * v * p).sum();
        if (var - 1.0).abs() > ATOM_TOL {
            return Err(Error::InvalidPrior(format!("atom variance {var} ≠ 1")));
        }
        Ok(SpikePrior::IidAtoms(atoms))
    }

    /// Parse a textual descriptor: `spherical`, `rademacher`, `sparse:<rho>`,
    /// or `atoms:v1@p1,v2@p2,...` (values pre-scaling).
    pub fn parse(descriptor: &str) -> Result<Self> {
        let d = descriptor.trim();
        match d {
            "spherical" => return Ok(SpikePrior::Spherical),
            "rademacher" => return Ok(SpikePrior::rademacher()),
            _ => {}
        }
        if let Some(rho) = d.strip_prefix("sparse:") {
            let rho: f64 = rho
                .parse()
                .map_err(|_| Error::InvalidPrior(format!("bad sparsity in {d:?}")))?;
            return SpikePrior::sparse_rademacher(rho);
        }
        if let Some(list) = d.strip_prefix("atoms:") {
            let mut atoms = Vec::new();
            for part in list.split(',') {
                let (v, p) = part
                    .split_once('@')
                    .ok_or_else(|| Error::InvalidPrior(format!("bad atom {part:?}")))?;
                let v: f64 = v
                    .parse()
                    .map_err(|_| Error::InvalidPrior(format!("bad atom value {v:?}")))?;
                let p: f64 = p
                    .parse()
                    .map_err(|_| Error::InvalidPrior(format!("bad atom prob {p:?}")))?;
                atoms.push((v, p));
            }
            return SpikePrior::iid_atoms(atoms);
        }
        Err(Error::InvalidPrior(format!("unknown prior {d:?}")))
    }

    /// Canonical textual descriptor (round-trips through [`SpikePrior::parse`]).
    pub fn descriptor(&self) -> String {
        match self {
            SpikePrior::Spherical => "spherical".into(),
            SpikePrior::SparseRademacher { rho } if *rho == 1.0 => "rademacher".into(),
            SpikePrior::SparseRademacher { rho } => format!("sparse:{rho}"),
            SpikePrior::IidAtoms(atoms) => {
                let parts: Vec<String> =
                    atoms.iter().map(|(v, p)| format!("{v}@{p}")).collect();
                format!("atoms:{}", parts.join(","))
            }
        }
    }

    /// Atom law `(value, prob)` on the pre-`1/√n` scale, if this prior is an
    /// iid-atoms prior (sparse Rademacher included).
    pub fn atom_list(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            SpikePrior::Spherical => None,
            SpikePrior::IidAtoms(atoms) => Some(atoms.clone()),
            SpikePrior::SparseRademacher { rho } => {
                let a = (1.0 / rho).sqrt();
                let mut atoms = Vec::new();
                if *rho < 1.0 {
                    atoms.push((0.0, 1.0 - rho));
                }
                atoms.push((-a, rho / 2.0));
                atoms.push((a, rho / 2.0));
                Some(atoms)
            }
        }
    }

    fn is_rademacher(&self) -> bool {
        match self {
            SpikePrior::SparseRademacher { rho } => *rho == 1.0,
            SpikePrior::IidAtoms(atoms) => {
                let live: Vec<_> = atoms.iter().filter(|&&(_, p)| p > 0.0).collect();
                live.len() == 2
                    && live
                        .iter()
                        .all(|&&(v, p)| (v.abs() - 1.0).abs() < 1e-9 && (p - 0.5).abs() < 1e-9)
                    && live[0].0 * live[1].0 < 0.0
            }
            SpikePrior::Spherical => false,
        }
    }

    /// Draw one spike of dimension `n`.
    pub fn sample_spike<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<DVector<f64>> {
        if n == 0 {
            return Err(Error::Domain("spike dimension must be positive".into()));
        }
        let scale = 1.0 / (n as f64).sqrt();
        match self {
            SpikePrior::Spherical => {
                let mut x = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
                let norm = x.norm();
                x /= norm;
                Ok(x)
            }
            SpikePrior::IidAtoms(atoms) => {
                let x = DVector::from_fn(n, |_, _| {
                    let u: f64 = rng.gen();
                    let mut acc = 0.0;
                    for &(v, p) in atoms {
                        acc += p;
                        if u < acc {
                            return v * scale;
                        }
                    }
                    atoms.last().unwrap().0 * scale
                });
                Ok(x)
            }
            SpikePrior::SparseRademacher { rho } => {
                let a = 1.0 / (rho * n as f64).sqrt();
                let x = DVector::from_fn(n, |_, _| {
                    let u: f64 = rng.gen();
                    if u < 1.0 - rho {
                        0.0
                    } else if u < 1.0 - rho / 2.0 {
                        a
                    } else {
                        -a
                    }
                });
                Ok(x)
            }
        }
    }

    /// `count` iid realizations of the overlap `⟨x, x′⟩` of two independent
    /// spikes of dimension `n`.
    ///
    /// Finite-atom priors sample the overlap law exactly through multinomial
    /// counts over the product-atom law; the spherical prior dots two sampled
    /// directions.
    pub fn overlap_samples<R: Rng + ?Sized>(
        &self,
        n: usize,
        count: usize,
        rng: &mut R,
    ) -> Result<Vec<f64>> {
        if n == 0 || count == 0 {
            return Err(Error::Domain("n and count must be positive".into()));
        }
        match self {
            SpikePrior::Spherical => {
                let mut out = Vec::with_capacity(count);
                for _ in 0..count {
                    let x = self.sample_spike(n, rng)?;
                    let y = self.sample_spike(n, rng)?;
                    out.push(x.dot(&y));
                }
                Ok(out)
            }
            _ => {
                let atoms = self.atom_list().expect("finite-atom prior");
                let products = product_atoms(&atoms);
                let mut out = Vec::with_capacity(count);
                for _ in 0..count {
                    out.push(sample_overlap_from_products(&products, n, rng));
                }
                Ok(out)
            }
        }
    }

    /// Large-deviation rate of `Pr[|⟨x,x′⟩| ≥ t]` for the built-in priors.
    ///
    /// Spherical: `−½ log(1−t²)`. Rademacher: `log 2 − H((1+t)/2)`. Sparse
    /// Rademacher: the exact-`ρn`-support formula, minimized over the joint
    /// support fraction ζ.
    pub fn rate_function(&self, t: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::Domain(format!("rate function needs t ∈ [0,1), got {t}")));
        }
        match self {
            SpikePrior::Spherical => Ok(spherical_rate(t)),
            _ if self.is_rademacher() => Ok(rademacher_rate(t)),
            SpikePrior::SparseRademacher { rho } => Ok(sparse_rate(*rho, t)),
            SpikePrior::IidAtoms(_) => Err(Error::RateFunction(format!(
                "no built-in rate function for {}; pick one explicitly",
                self.descriptor()
            ))),
        }
    }

    /// Smallest σ with the atom law σ²-subgaussian.
    ///
    /// Maximizes `2 log E[e^{tπ}]/t²` over a log-spaced grid with parabolic
    /// refinement; the t→0 limit is the variance (= 1), so σ* ≥ 1. The
    /// spherical prior returns 1 by convention (its overlap is `O(1/n)`-
    /// subgaussian already).
    pub fn subgaussian_sigma_star(&self) -> Result<f64> {
        let atoms = match self.atom_list() {
            None => return Ok(1.0),
            Some(a) => a,
        };
        let log_probs: Vec<(f64, f64)> = atoms
            .iter()
            .filter(|&&(_, p)| p > 0.0)
            .map(|&(v, p)| (v, p.ln()))
            .collect();
        let g = |t: f64| -> f64 {
            let terms: Vec<f64> = log_probs.iter().map(|&(v, lp)| lp + t * v).collect();
            2.0 * log_sum_exp(&terms) / (t * t)
        };

        let vmax = atoms.iter().map(|&(v, _)| v.abs()).fold(0.0, f64::max);
        let (lo, hi) = (1e-4, 50.0 * vmax.max(1.0));
        let m = 4096;
        let ratio = (hi / lo).powf(1.0 / (m as f64 - 1.0));
        let mut best = 1.0; // t → 0 limit: the variance
        let mut best_idx = None;
        let mut t = lo;
        let mut grid = Vec::with_capacity(m);
        for i in 0..m {
            let v = g(t);
            if !v.is_finite() {
                return Err(Error::Overflow(format!("MGF evaluation overflowed at t={t}")));
            }
            grid.push((t, v));
            if v > best {
                best = v;
                best_idx = Some(i);
            }
            t *= ratio;
        }
        if let Some(i) = best_idx {
            // parabolic refinement through the best grid triple
            if i > 0 && i + 1 < m {
                let (x0, y0) = grid[i - 1];
                let (x1, y1) = grid[i];
                let (x2, y2) = grid[i + 1];
                let denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
                if denom.abs() > 0.0 {
                    let a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
                    let b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2))
                        / denom;
                    if a < 0.0 {
                        let vx = -b / (2.0 * a);
                        if vx > x0 && vx < x2 {
                            best = best.max(g(vx));
                        }
                    }
                }
                let (_, refined) = golden_min(&|x| -g(x), x0, x2, 1e-10);
                best = best.max(-refined);
            }
        }
        Ok(best.sqrt())
    }
}

/// `f_sph(t) = −½ log(1−t²)`.
pub fn spherical_rate(t: f64) -> f64 {
    -0.5 * (-t * t).ln_1p()
}

/// `f_Rad(t) = log 2 − H((1+t)/2)`.
pub fn rademacher_rate(t: f64) -> f64 {
    LN_2 - binary_entropy((1.0 + t) / 2.0)
}

/// Exact-support sparse Rademacher rate `f_ρ(t)`.
///
/// Minimizes `G_ρ(ζ) + ζ f_Rad(ρt/ζ)` over the joint-support fraction
/// `ζ ∈ [max(ρt, 2ρ−1), ρ]`, where `G_ρ(ζ) = 2H(ρ) − H({ζ, ρ−ζ, ρ−ζ,
/// 1−2ρ+ζ})`. At `ζ = ρt` the ratio hits 1 and `f_Rad(1) = log 2`; `ρ = 1`
/// collapses the interval to `ζ = 1` and recovers `f_Rad`.
pub fn sparse_rate(rho: f64, t: f64) -> f64 {
    let lo = (rho * t).max(2.0 * rho - 1.0).max(0.0);
    let hi = rho;
    let objective = |zeta: f64| -> f64 {
        let zeta = zeta.clamp(lo, hi);
        let g = 2.0 * binary_entropy(rho)
            - entropy(&[zeta, rho - zeta, rho - zeta, 1.0 - 2.0 * rho + zeta]);
        let tail = if zeta > 0.0 {
            zeta * rademacher_rate((rho * t / zeta).min(1.0))
        } else {
            0.0
        };
        g + tail
    };
    if hi - lo <= 1e-14 {
        return objective(hi).max(0.0);
    }
    let m = 2048usize;
    let step = (hi - lo) / (m as f64 - 1.0);
    let mut best = f64::INFINITY;
    let mut best_i = 0;
    for i in 0..m {
        let v = objective(lo + step * i as f64);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(hi);
    let (_, refined) = golden_min(&objective, a, b, 1e-10);
    best.min(refined).max(0.0)
}

/// Merge the product law `π·π′` into distinct `(value, prob)` atoms.
fn product_atoms(atoms: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut products: Vec<(f64, f64)> = Vec::new();
    for &(va, pa) in atoms {
        for &(vb, pb) in atoms {
            products.push((va * vb, pa * pb));
        }
    }
    products.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (v, p) in products {
        match merged.last_mut() {
            Some(last) if last.0 == v => last.1 += p,
            _ => merged.push((v, p)),
        }
    }
    merged.retain(|&(_, p)| p > 0.0);
    merged
}

/// One overlap draw: multinomial coordinate counts over the product atoms,
/// then `⟨x,x′⟩ = Σ count·value / n`.
fn sample_overlap_from_products<R: Rng + ?Sized>(
    products: &[(f64, f64)],
    n: usize,
    rng: &mut R,
) -> f64 {
    let mut remaining = n as u64;
    let mut mass = 1.0f64;
    let mut sum = 0.0;
    for (i, &(v, p)) in products.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let c = if i + 1 == products.len() {
            remaining
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            let c = Binomial::new(remaining, q).expect("valid binomial").sample(rng);
            remaining -= c;
            mass -= p;
            c
        };
        sum += c as f64 * v;
    }
    sum / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn spherical_spike_has_unit_norm() {
        let mut rng = stream(1, &[]);
        let x = SpikePrior::spherical().sample_spike(5, &mut rng).unwrap();
        assert!((x.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rademacher_coordinates_at_n4() {
        let mut rng = stream(2, &[]);
        let x = SpikePrior::rademacher().sample_spike(4, &mut rng).unwrap();
        for &c in x.iter() {
            assert!((c.abs() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn sparse_zero_fraction() {
        let mut rng = stream(3, &[]);
        let prior = SpikePrior::sparse_rademacher(0.5).unwrap();
        let x = prior.sample_spike(1_000_000, &mut rng).unwrap();
        let zeros = x.iter().filter(|&&c| c == 0.0).count() as f64 / 1e6;
        assert!((zeros - 0.5).abs() < 0.01, "zero fraction {zeros}");
    }

    #[test]
    fn atom_validation() {
        assert!(SpikePrior::iid_atoms(vec![(1.0, 0.5), (-1.0, 0.4)]).is_err());
        assert!(SpikePrior::iid_atoms(vec![(1.0, 0.6), (-1.0, 0.4)]).is_err());
        assert!(SpikePrior::iid_atoms(vec![(2.0, 0.5), (-2.0, 0.5)]).is_err());
        assert!(SpikePrior::iid_atoms(vec![(1.0, 0.5), (-1.0, 0.5)]).is_ok());
        assert!(SpikePrior::sparse_rademacher(0.0).is_err());
        assert!(SpikePrior::sparse_rademacher(1.5).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        for d in ["spherical", "rademacher", "sparse:0.25", "atoms:-1@0.5,1@0.5"] {
            let p = SpikePrior::parse(d).unwrap();
            assert_eq!(SpikePrior::parse(&p.descriptor()).unwrap(), p);
        }
        assert!(SpikePrior::parse("banana").is_err());
    }

    #[test]
    fn overlap_spherical_centered() {
        let mut rng = stream(4, &[]);
        let o = SpikePrior::spherical().overlap_samples(2, 20_000, &mut rng).unwrap();
        let (mean, se) = crate::numeric::mean_and_se(&o);
        assert!(mean.abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn overlap_rademacher_n1_is_sign() {
        let mut rng = stream(5, &[]);
        let o = SpikePrior::rademacher().overlap_samples(1, 200, &mut rng).unwrap();
        assert!(o.iter().all(|&v| v == 1.0 || v == -1.0));
    }

    #[test]
    fn overlap_rademacher_clt_variance() {
        let mut rng = stream(6, &[]);
        let n = 100;
        let o = SpikePrior::rademacher().overlap_samples(n, 100_000, &mut rng).unwrap();
        let scaled: Vec<f64> = o.iter().map(|&v| v * (n as f64).sqrt()).collect();
        let mean = scaled.iter().sum::<f64>() / scaled.len() as f64;
        let var =
            scaled.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (scaled.len() - 1) as f64;
        assert!((var - 1.0).abs() < 0.05, "Var[√n⟨x,x′⟩] = {var}");
    }

    #[test]
    fn rate_functions_at_zero_and_known_values() {
        for p in [
            SpikePrior::spherical(),
            SpikePrior::rademacher(),
            SpikePrior::sparse_rademacher(0.2).unwrap(),
        ] {
            assert_eq!(p.rate_function(0.0).unwrap(), 0.0);
            assert!(p.rate_function(1.0).is_err());
        }
        // −½ log(1 − 0.36)
        let f = SpikePrior::spherical().rate_function(0.6).unwrap();
        assert!((f - 0.223143551).abs() < 1e-8);
        // f_Rad(t→1) → log 2
        let f = SpikePrior::rademacher().rate_function(1.0 - 1e-12).unwrap();
        assert!((f - LN_2).abs() < 1e-9);
    }

    #[test]
    fn sparse_rate_at_rho_one_matches_rademacher() {
        for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
            assert!((sparse_rate(1.0, t) - rademacher_rate(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn general_atoms_have_no_builtin_rate() {
        // three-point, mean 0, variance 1, not sparse-Rademacher shaped
        let p = SpikePrior::iid_atoms(vec![(-2.0, 0.125), (0.0, 0.625), (1.2, 0.25)]);
        // mean: -0.25 + 0.3 = 0.05 ≠ 0 → build a valid one instead
        assert!(p.is_err() || p.unwrap().rate_function(0.3).is_err());
        let p = SpikePrior::iid_atoms(vec![(-1.5, 0.2), (0.1875, 0.8)]);
        if let Ok(p) = p {
            assert!(p.rate_function(0.3).is_err());
        }
    }

    #[test]
    fn sigma_star_values() {
        let s = SpikePrior::rademacher().subgaussian_sigma_star().unwrap();
        assert!((s - 1.0).abs() < 1e-6, "σ*(Rademacher) = {s}");

        let s = SpikePrior::sparse_rademacher(1.0 / 3.0)
            .unwrap()
            .subgaussian_sigma_star()
            .unwrap();
        assert!((s - 1.0).abs() < 1e-4, "σ*(1/3) = {s}");

        let s = SpikePrior::sparse_rademacher(0.2)
            .unwrap()
            .subgaussian_sigma_star()
            .unwrap();
        assert!(s > 1.0, "σ*(0.2) = {s}");
    }

    #[test]
    fn sigma_star_monotone_in_rho() {
        let mut prev = f64::INFINITY;
        for rho in [0.05, 0.1, 0.15, 0.2, 0.25, 1.0 / 3.0, 0.5, 0.75, 1.0] {
            let s = SpikePrior::sparse_rademacher(rho)
                .unwrap()
                .subgaussian_sigma_star()
                .unwrap();
            assert!(s <= prev + 1e-9, "σ*({rho}) = {s} > {prev}");
            if rho >= 1.0 / 3.0 {
                assert!((s - 1.0).abs() < 1e-4);
            }
            prev = s;
        }
    }

    #[test]
    fn norm_concentration_across_priors() {
        let n = 10_000;
        let priors = [
            SpikePrior::spherical(),
            SpikePrior::rademacher(),
            SpikePrior::sparse_rademacher(0.3).unwrap(),
            SpikePrior::iid_atoms(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap(),
        ];
        for prior in priors {
            let mut bad = 0;
            for seed in 0..1000u64 {
                let mut rng = stream(900, &[seed]);
                let x = prior.sample_spike(n, &mut rng).unwrap();
                if (x.norm_squared() - 1.0).abs() >= 0.05 {
                    bad += 1;
                }
            }
            assert!(bad <= 10, "{}: {bad}/1000 outside ±0.05", prior.descriptor());
        }
    }
}
