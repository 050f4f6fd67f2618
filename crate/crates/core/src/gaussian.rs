//! Monte-Carlo generating functionals `F(φ) = E[e^{i⟨u,φ⟩}]`, `u ~ N(0, Σ)`.
//!
//! Sampling is split into fixed-size chunks; chunk `c` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `c`, so results depend only on
//! `(seed, samples)` and not on the thread count.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};

pub const MIN_SAMPLES: usize = 10_000;
pub const CHUNK: usize = 4096;
/// PSD tolerance on the covariance, relative to its largest eigenvalue.
pub const COVARIANCE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSpec {
    d: usize,
    covariance: Vec<Vec<f64>>,
    /// Lower factor with `Σ = F Fᵀ`.
    factor: Vec<Vec<f64>>,
}

impl GaussianSpec {
    pub fn new(covariance: Vec<Vec<f64>>) -> Result<Self> {
        let d = covariance.len();
        if d == 0 || covariance.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput("covariance must be a non-empty square matrix".into()));
        }
        let m = CMatrix::from_fn(d, d, |i, j| Complex::new(covariance[i][j], 0.0));
        let eig = hermitian_eigen(&m, 1e-12)
            .map_err(|_| Error::InvalidInput("covariance must be symmetric".into()))?;
        if eig.min() < -COVARIANCE_TOL * eig.max().abs().max(1.0) {
            return Err(Error::NotPositive { min_eigenvalue: eig.min() });
        }
        // F = V·sqrt(Λ⁺) handles semidefinite Σ without pivoting
        let factor = (0..d)
            .map(|i| {
                (0..d)
                    .map(|k| eig.vectors[(i, k)].re * eig.values[k].max(0.0).sqrt())
                    .collect()
            })
            .collect();
        Ok(Self { d, covariance, factor })
    }

    /// `Σ = s·I`.
    pub fn isotropic(d: usize, s: f64) -> Result<Self> {
        Self::new((0..d).map(|i| (0..d).map(|j| if i == j { s } else { 0.0 }).collect()).collect())
    }

    /// `Σ = (l²/2)·I`, whose functional is `e^{−l²‖φ‖²/4}`.
    pub fn quasifree(d: usize, l: f64) -> Result<Self> {
        Self::isotropic(d, l * l / 2.0)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn covariance(&self) -> &[Vec<f64>] {
        &self.covariance
    }

    /// `φᵀΣψ`.
    pub fn bilinear(&self, phi: &[f64], psi: &[f64]) -> f64 {
        (0..self.d)
            .map(|i| phi[i] * (0..self.d).map(|j| self.covariance[i][j] * psi[j]).sum::<f64>())
            .sum()
    }

    /// `exp(−φᵀΣφ/2)`.
    pub fn functional(&self, phi: &[f64]) -> f64 {
        (-self.bilinear(phi, phi) / 2.0).exp()
    }

    fn check(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: v.len() });
        }
        Ok(())
    }

    fn sample_into(&self, rng: &mut ChaCha8Rng, z: &mut [f64], u: &mut [f64]) {
        for zi in z.iter_mut() {
            *zi = StandardNormal.sample(rng);
        }
        for (i, ui) in u.iter_mut().enumerate() {
            *ui = self.factor[i].iter().zip(z.iter()).map(|(f, z)| f * z).sum();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex<f64>> for ComplexValue {
    fn from(c: Complex<f64>) -> Self {
        Self { re: c.re, im: c.im }
    }
}

impl ComplexValue {
    pub fn to_complex(self) -> Complex<f64> {
        Complex::new(self.re, self.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub target: ComplexValue,
    pub estimate: ComplexValue,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McReport {
    pub fn error(&self) -> f64 {
        (self.estimate.to_complex() - self.target.to_complex()).norm()
    }

    /// `|estimate − target| ≤ k·stderr`.
    pub fn within_sigmas(&self, k: f64) -> bool {
        self.error() <= k * self.stderr
    }
}

/// Sample mean and `sqrt(E|X − m|² / N)` of a complex statistic, chunked as described above.
fn chunked_mean(samples: usize, seed: u64, stat: impl Fn(&mut ChaCha8Rng) -> Complex<f64> + Sync) -> (Complex<f64>, f64) {
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<(Complex<f64>, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(samples - c * CHUNK);
            let mut sum = Complex::new(0.0, 0.0);
            let mut sq = 0.0;
            for _ in 0..len {
                let x = stat(&mut rng);
                sum += x;
                sq += x.norm_sqr();
            }
            (sum, sq)
        })
        .collect();
    let (sum, sq) = partial.iter().fold((Complex::new(0.0, 0.0), 0.0), |(s, q), (a, b)| (s + a, q + b));
    let n = samples as f64;
    let mean = sum / n;
    let var = (sq / n - mean.norm_sqr()).max(0.0);
    (mean, (var / n).sqrt())
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    Ok(())
}

/// Estimate of `E[e^{i⟨u,φ⟩}]` against `exp(−φᵀΣφ/2)`.
pub fn gaussian_mc_functional(spec: &GaussianSpec, phi: &[f64], samples: usize, seed: u64) -> Result<McReport> {
    spec.check(phi)?;
    check_samples(samples)?;
    let d = spec.d;
    let (mean, stderr) = chunked_mean(samples, seed, |rng| {
        let mut z = vec![0.0; d];
        let mut u = vec![0.0; d];
        spec.sample_into(rng, &mut z, &mut u);
        let t: f64 = u.iter().zip(phi).map(|(a, b)| a * b).sum();
        Complex::from_polar(1.0, t)
    });
    Ok(McReport {
        target: Complex::new(spec.functional(phi), 0.0).into(),
        estimate: mean.into(),
        stderr,
        samples,
        seed,
    })
}

/// Estimate of `E[⟨u,φ⟩⟨u,ψ⟩]` against `φᵀΣψ`.
pub fn moment_check(spec: &GaussianSpec, phi: &[f64], psi: &[f64], samples: usize, seed: u64) -> Result<McReport> {
    spec.check(phi)?;
    spec.check(psi)?;
    check_samples(samples)?;
    let d = spec.d;
    let (mean, stderr) = chunked_mean(samples, seed, |rng| {
        let mut z = vec![0.0; d];
        let mut u = vec![0.0; d];
        spec.sample_into(rng, &mut z, &mut u);
        let a: f64 = u.iter().zip(phi).map(|(x, y)| x * y).sum();
        let b: f64 = u.iter().zip(psi).map(|(x, y)| x * y).sum();
        Complex::new(a * b, 0.0)
    });
    Ok(McReport {
        target: Complex::new(spec.bilinear(phi, psi), 0.0).into(),
        estimate: mean.into(),
        stderr,
        samples,
        seed,
    })
}

/// Estimate of `E[e^{i(⟨u,φ₁⟩ + ⟨v,φ₂⟩)}]`, `u ~ ν₁`, `v ~ ν₂` independent,
/// against the product of the two closed forms.
pub fn product_form_check(
    spec1: &GaussianSpec,
    spec2: &GaussianSpec,
    phi1: &[f64],
    phi2: &[f64],
    samples: usize,
    seed: u64,
) -> Result<McReport> {
    spec1.check(phi1)?;
    spec2.check(phi2)?;
    check_samples(samples)?;
    let (mean, stderr) = product_mean(spec1, spec2, phi1, phi2, samples, seed);
    Ok(McReport {
        target: Complex::new(spec1.functional(phi1) * spec2.functional(phi2), 0.0).into(),
        estimate: mean.into(),
        stderr,
        samples,
        seed,
    })
}

fn product_mean(
    spec1: &GaussianSpec,
    spec2: &GaussianSpec,
    phi1: &[f64],
    phi2: &[f64],
    samples: usize,
    seed: u64,
) -> (Complex<f64>, f64) {
    let (d1, d2) = (spec1.d, spec2.d);
    chunked_mean(samples, seed, |rng| {
        let (mut z1, mut u) = (vec![0.0; d1], vec![0.0; d1]);
        let (mut z2, mut v) = (vec![0.0; d2], vec![0.0; d2]);
        spec1.sample_into(rng, &mut z1, &mut u);
        spec2.sample_into(rng, &mut z2, &mut v);
        let t: f64 = u.iter().zip(phi1).map(|(a, b)| a * b).sum::<f64>()
            + v.iter().zip(phi2).map(|(a, b)| a * b).sum::<f64>();
        Complex::from_polar(1.0, t)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchVariance {
    /// `E|m_b − m̄|²` over batch means.
    pub observed: f64,
    /// `(1 − |F|²)/batch_size` for independent sampling.
    pub predicted: f64,
    pub ratio: f64,
}

/// Compares the spread of batch means under the product law with the
/// independent-sampling prediction. Batch `b` uses seed `seed + b`.
pub fn batch_variance_check(
    spec1: &GaussianSpec,
    spec2: &GaussianSpec,
    phi1: &[f64],
    phi2: &[f64],
    batches: usize,
    batch_size: usize,
    seed: u64,
) -> Result<BatchVariance> {
    spec1.check(phi1)?;
    spec2.check(phi2)?;
    if batches < 2 || batch_size == 0 {
        return Err(Error::InvalidInput("need at least two non-empty batches".into()));
    }
    let means: Vec<Complex<f64>> = (0..batches)
        .map(|b| product_mean(spec1, spec2, phi1, phi2, batch_size, seed.wrapping_add(b as u64)).0)
        .collect();
    let grand = means.iter().sum::<Complex<f64>>() / batches as f64;
    let observed = means.iter().map(|m| (m - grand).norm_sqr()).sum::<f64>() / (batches - 1) as f64;
    let f = spec1.functional(phi1) * spec2.functional(phi2);
    let predicted = (1.0 - f * f) / batch_size as f64;
    Ok(BatchVariance { observed, predicted, ratio: observed / predicted })
}
