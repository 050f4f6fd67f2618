//! Atomic measures on ℝᵈ, their Fourier / co-Fourier transforms and the
//! subspace identities for a split `S = K × L` with dual `L^⊥ × K^⊥`.
//!
//! Conventions: `F̂μ(u) = Σ w e^{−i⟨u,x⟩}` on the primal side,
//! `ν̃(φ) = Σ v e^{i⟨u,φ⟩}` on the dual side, and `F̂ν(φ) := ν̃(−φ)`.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Atom<T> {
    pub x: Vec<T>,
    pub weight: Complex<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure<T> {
    d: usize,
    atoms: Vec<Atom<T>>,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

impl<T: Real> AtomicMeasure<T> {
    pub fn new(d: usize, atoms: Vec<Atom<T>>) -> Result<Self> {
        for a in &atoms {
            if a.x.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: a.x.len() });
            }
            if a.x.iter().any(|v| !v.is_finite()) || !a.weight.re.is_finite() || !a.weight.im.is_finite() {
                return Err(Error::InvalidInput("atoms must be finite".into()));
            }
        }
        Ok(Self { d, atoms })
    }

    pub fn from_pairs(d: usize, atoms: impl IntoIterator<Item = (Vec<T>, Complex<T>)>) -> Result<Self> {
        Self::new(d, atoms.into_iter().map(|(x, weight)| Atom { x, weight }).collect())
    }

    pub fn zero(d: usize) -> Self {
        Self { d, atoms: Vec::new() }
    }

    /// Unit point mass at the origin.
    pub fn dirac(d: usize) -> Self {
        Self::point(vec![T::zero(); d], Complex::one())
    }

    pub fn point(x: Vec<T>, weight: Complex<T>) -> Self {
        Self { d: x.len(), atoms: vec![Atom { x, weight }] }
    }

    /// `n` atoms with coordinates uniform in `[−r, r]` and complex weights in the unit square.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, r: f64) -> Self {
        let atoms = (0..n)
            .map(|_| Atom {
                x: (0..d).map(|_| T::of(rng.random_range(-r..=r))).collect(),
                weight: Complex::new(T::of(rng.random_range(-1.0..=1.0)), T::of(rng.random_range(-1.0..=1.0))),
            })
            .collect();
        Self { d, atoms }
    }

    /// Like [`random`](Self::random) with weights in `(0, 1]`.
    pub fn random_positive<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, r: f64) -> Self {
        let mut m = Self::random(rng, d, n, r);
        for a in &mut m.atoms {
            a.weight = Complex::new(T::of(rng.random_range(0.05..=1.0)), T::zero());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn total_mass(&self) -> Complex<T> {
        self.atoms.iter().fold(Complex::zero(), |acc, a| acc + a.weight)
    }

    pub fn total_variation(&self) -> T {
        self.atoms.iter().fold(T::zero(), |acc, a| acc + a.weight.norm())
    }

    /// Weights real and non-negative.
    pub fn is_positive(&self) -> bool {
        self.atoms.iter().all(|a| a.weight.im == T::zero() && a.weight.re >= T::zero())
    }

    /// Mass of the single point `x` (exact location match).
    pub fn mass_at(&self, x: &[T]) -> Complex<T> {
        self.atoms.iter().filter(|a| a.x == x).fold(Complex::zero(), |acc, a| acc + a.weight)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let atoms = self.atoms.iter().map(|a| Atom { x: a.x.clone(), weight: a.weight * s }).collect();
        Self { d: self.d, atoms }
    }

    /// Merges atoms at identical locations, drops zero weights and sorts by location.
    pub fn canonical(&self) -> Self {
        let mut atoms: Vec<Atom<T>> = Vec::new();
        for a in &self.atoms {
            match atoms.iter_mut().find(|b| b.x == a.x) {
                Some(b) => b.weight = b.weight + a.weight,
                None => atoms.push(a.clone()),
            }
        }
        atoms.retain(|a| !a.weight.is_zero());
        atoms.sort_by(|a, b| {
            a.x.iter()
                .zip(&b.x)
                .map(|(p, q)| p.as_f64().total_cmp(&q.as_f64()))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Self { d: self.d, atoms }
    }

    /// Largest weight difference between the canonical forms, counting
    /// unmatched atoms with their full weight.
    pub fn max_weight_deviation(&self, other: &Self) -> Result<T> {
        self.check_dim(other.d)?;
        let a = self.canonical();
        let b = other.canonical();
        let mut worst = T::zero();
        for x in a.atoms.iter().chain(&b.atoms) {
            worst = worst.max((a.mass_at(&x.x) - b.mass_at(&x.x)).norm());
        }
        Ok(worst)
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: d });
        }
        Ok(())
    }

    /// `μ ⊗ ν`, atoms `(x, y)` with weight `w·v`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut atoms = Vec::with_capacity(self.atoms.len() * other.atoms.len());
        for a in &self.atoms {
            for b in &other.atoms {
                let mut x = a.x.clone();
                x.extend_from_slice(&b.x);
                atoms.push(Atom { x, weight: a.weight * b.weight });
            }
        }
        Self { d: self.d + other.d, atoms }
    }

    /// `μ * ν`, atoms `x + y` with weight `w·v`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.d)?;
        let mut atoms = Vec::with_capacity(self.atoms.len() * other.atoms.len());
        for a in &self.atoms {
            for b in &other.atoms {
                let x = a.x.iter().zip(&b.x).map(|(&p, &q)| p + q).collect();
                atoms.push(Atom { x, weight: a.weight * b.weight });
            }
        }
        Ok(Self { d: self.d, atoms })
    }
}

/// `F̂μ(u) = Σ w e^{−i⟨u,x⟩}`.
pub fn fourier_atomic<T: Real>(mu: &AtomicMeasure<T>, u: &[T]) -> Result<Complex<T>> {
    mu.check_dim(u.len())?;
    Ok(mu
        .atoms
        .iter()
        .fold(Complex::zero(), |acc, a| acc + a.weight * Complex::from_polar(T::one(), -dot(u, &a.x))))
}

/// `ν̃(φ) = Σ v e^{i⟨u,φ⟩}`.
pub fn cofourier_atomic<T: Real>(nu: &AtomicMeasure<T>, phi: &[T]) -> Result<Complex<T>> {
    nu.check_dim(phi.len())?;
    Ok(nu
        .atoms
        .iter()
        .fold(Complex::zero(), |acc, a| acc + a.weight * Complex::from_polar(T::one(), dot(&a.x, phi))))
}

/// `|⟨F̂μ, ν⟩ − ⟨μ, F̂ν⟩|` with `F̂ν(φ) = ν̃(−φ)`.
pub fn duality_check<T: Real>(mu: &AtomicMeasure<T>, nu: &AtomicMeasure<T>) -> Result<T> {
    mu.check_dim(nu.d)?;
    let mut lhs: Complex<T> = Complex::zero();
    for b in &nu.atoms {
        lhs = lhs + b.weight * fourier_atomic(mu, &b.x)?;
    }
    let mut rhs: Complex<T> = Complex::zero();
    for a in &mu.atoms {
        let neg: Vec<T> = a.x.iter().map(|&v| -v).collect();
        rhs = rhs + a.weight * cofourier_atomic(nu, &neg)?;
    }
    Ok((lhs - rhs).norm())
}

/// `f·μ`: each weight multiplied by `f` at its atom.
pub fn multiply_function_measure<T: Real>(
    f: impl Fn(&[T]) -> Complex<T>,
    mu: &AtomicMeasure<T>,
) -> AtomicMeasure<T> {
    let atoms = mu.atoms.iter().map(|a| Atom { x: a.x.clone(), weight: a.weight * f(&a.x) }).collect();
    AtomicMeasure { d: mu.d, atoms }
}

/// `(f * ρ)(u) = Σ w f(u − v)`.
pub fn convolve_function_measure<T: Real>(
    f: impl Fn(&[T]) -> Complex<T>,
    rho: &AtomicMeasure<T>,
    u: &[T],
) -> Result<Complex<T>> {
    rho.check_dim(u.len())?;
    Ok(rho.atoms.iter().fold(Complex::zero(), |acc, a| {
        let diff: Vec<T> = u.iter().zip(&a.x).map(|(&p, &q)| p - q).collect();
        acc + a.weight * f(&diff)
    }))
}

/// `S = K × L ≅ ℝ^{d1} × ℝ^{d2}`, dual `L^⊥ × K^⊥ ≅ ℝ^{d1} × ℝ^{d2}`.
/// Points are stored with the first `d1` coordinates first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpace {
    pub d1: usize,
    pub d2: usize,
}

impl SplitSpace {
    pub fn new(d1: usize, d2: usize) -> Self {
        Self { d1, d2 }
    }

    pub fn dim(&self) -> usize {
        self.d1 + self.d2
    }

    pub fn split<'a, T>(&self, x: &'a [T]) -> (&'a [T], &'a [T]) {
        x.split_at(self.d1)
    }

    pub fn join<T: Clone>(&self, a: &[T], b: &[T]) -> Vec<T> {
        a.iter().chain(b).cloned().collect()
    }

    /// `g₀ = 1_L` on the primal side: the `K` block vanishes.
    pub fn indicator_l<T: Real>(&self, x: &[T]) -> Complex<T> {
        if self.split(x).0.iter().all(|v| v.is_zero()) {
            Complex::one()
        } else {
            Complex::zero()
        }
    }

    /// `h₀ = 1_{L^⊥}` on the dual side: the `K^⊥` block vanishes.
    pub fn indicator_l_perp<T: Real>(&self, u: &[T]) -> Complex<T> {
        if self.split(u).1.iter().all(|v| v.is_zero()) {
            Complex::one()
        } else {
            Complex::zero()
        }
    }

    fn check(&self, what: &str, m_dim: usize, expected: usize) -> Result<()> {
        if m_dim != expected {
            return Err(Error::InvalidInput(format!(
                "{what} has dimension {m_dim}, split expects {expected}"
            )));
        }
        Ok(())
    }
}

/// `g₀μ` against `μ₁({0})(δ₀ ⊗ μ₂)` for `μ = μ₁ ⊗ μ₂`; max atom-weight difference.
pub fn product_lemma_check<T: Real>(
    split: SplitSpace,
    mu1: &AtomicMeasure<T>,
    mu2: &AtomicMeasure<T>,
) -> Result<T> {
    split.check("mu1", mu1.d, split.d1)?;
    split.check("mu2", mu2.d, split.d2)?;
    let mu = mu1.tensor(mu2);
    let lhs = multiply_function_measure(|x| split.indicator_l(x), &mu);
    let origin = vec![T::zero(); split.d1];
    let rhs = AtomicMeasure::dirac(split.d1).tensor(mu2).scale(mu1.mass_at(&origin));
    lhs.max_weight_deviation(&rhs)
}

/// `max_u |F̂(g₀μ)(u₁,u₂) − F̂μ₂(u₂)|` for `μ = δ₀ ⊗ μ₂`.
pub fn identity21_check<T: Real>(split: SplitSpace, mu2: &AtomicMeasure<T>, dual_samples: &[Vec<T>]) -> Result<T> {
    split.check("mu2", mu2.d, split.d2)?;
    let mu = AtomicMeasure::dirac(split.d1).tensor(mu2);
    let g0mu = multiply_function_measure(|x| split.indicator_l(x), &mu);
    let mut worst = T::zero();
    for u in dual_samples {
        split.check("dual sample", u.len(), split.dim())?;
        let lhs = fourier_atomic(&g0mu, u)?;
        let rhs = fourier_atomic(mu2, split.split(u).1)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// `max_u |‖ρ‖·F̂(g₀μ)(u) − ((h₀ρ) * F̂μ)(u)|` for `μ = δ₀ ⊗ μ₂`, `ρ = ρ₁ ⊗ δ₀`
/// with `ρ₁` positive.
pub fn identity23_check<T: Real>(
    split: SplitSpace,
    mu2: &AtomicMeasure<T>,
    rho1: &AtomicMeasure<T>,
    dual_samples: &[Vec<T>],
) -> Result<T> {
    split.check("mu2", mu2.d, split.d2)?;
    split.check("rho1", rho1.d, split.d1)?;
    if !rho1.is_positive() {
        return Err(Error::InvalidInput("rho1 must be a positive measure".into()));
    }
    let mu = AtomicMeasure::dirac(split.d1).tensor(mu2);
    let g0mu = multiply_function_measure(|x| split.indicator_l(x), &mu);
    let rho = rho1.tensor(&AtomicMeasure::dirac(split.d2));
    let norm = rho.total_mass().re;
    let h0rho = multiply_function_measure(|u| split.indicator_l_perp(u), &rho);
    let fmu = |v: &[T]| fourier_atomic(&mu, v).expect("dimension checked");
    let mut worst = T::zero();
    for u in dual_samples {
        split.check("dual sample", u.len(), split.dim())?;
        let lhs = fourier_atomic(&g0mu, u)?.scale(norm);
        let rhs = convolve_function_measure(fmu, &h0rho, u)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = AtomicMeasure<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn transform_examples() {
        let d0 = M::dirac(2);
        assert_eq!(fourier_atomic(&d0, &[1.3, -0.2]).unwrap(), c(1.0, 0.0));
        let a = [0.5, 2.0];
        let u = [1.5, -0.25];
        let single = M::point(a.to_vec(), c(1.0, 0.0));
        let expected = Complex::from_polar(1.0, -(0.75 - 0.5));
        assert!((fourier_atomic(&single, &u).unwrap() - expected).norm() < 1e-15);
        let sym = M::from_pairs(2, [(a.to_vec(), c(0.5, 0.0)), (vec![-0.5, -2.0], c(0.5, 0.0))]).unwrap();
        assert!((fourier_atomic(&sym, &u).unwrap() - c(0.25f64.cos(), 0.0)).norm() < 1e-15);
        assert!(fourier_atomic(&sym, &[1.0]).is_err());
    }

    #[test]
    fn duality_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let nu = M::random(&mut rng, 3, 5, 2.0);
        let mu = M::random(&mut rng, 3, 5, 2.0);
        assert!(duality_check(&M::dirac(3), &nu).unwrap() < 1e-15);
        assert!((fourier_atomic(&M::dirac(3), &[0.0; 3]).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(duality_check(&mu, &M::dirac(3)).unwrap() < 1e-15);
        assert!(duality_check(&mu, &nu).unwrap() < 1e-12);
    }

    #[test]
    fn function_measure_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = M::random(&mut rng, 2, 4, 1.0);
        assert_eq!(multiply_function_measure(|_| c(1.0, 0.0), &rho), rho);
        let v = convolve_function_measure(|_| c(1.0, 0.0), &rho, &[0.3, 0.1]).unwrap();
        assert!((v - rho.total_mass()).norm() < 1e-15);

        let split = SplitSpace::new(1, 1);
        let off = M::from_pairs(2, [(vec![1.0, 0.0], c(1.0, 0.0)), (vec![-2.0, 3.0], c(0.0, 1.0))]).unwrap();
        assert!(multiply_function_measure(|x| split.indicator_l(x), &off).canonical().atoms().is_empty());

        let mu2 = M::random(&mut rng, 2, 3, 1.0);
        let f = |u: &[f64]| fourier_atomic(&mu2, u).unwrap();
        let u = [0.7, -1.1];
        assert!((convolve_function_measure(f, &M::dirac(2), &u).unwrap() - f(&u)).norm() < 1e-15);
    }

    #[test]
    fn product_lemma_examples() {
        let split = SplitSpace::new(1, 1);
        let mu1 = M::from_pairs(1, [(vec![0.0], c(0.3, 0.0)), (vec![1.0], c(0.7, 0.0))]).unwrap();
        let mu2 = M::from_pairs(1, [(vec![2.0], c(0.5, 0.5))]).unwrap();
        assert_eq!(product_lemma_check(split, &mu1, &mu2).unwrap(), 0.0);
        let lhs = multiply_function_measure(|x| split.indicator_l(x), &mu1.tensor(&mu2)).canonical();
        assert_eq!(lhs.atoms().len(), 1);
        assert!((lhs.atoms()[0].weight - c(0.15, 0.15)).norm() < 1e-15);

        let no_origin = M::from_pairs(1, [(vec![1.0], c(1.0, 0.0))]).unwrap();
        assert_eq!(product_lemma_check(split, &no_origin, &mu2).unwrap(), 0.0);
        assert!(product_lemma_check(split, &mu2, &M::dirac(2)).is_err());
    }

    #[test]
    fn identity_examples() {
        let split = SplitSpace::new(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples: Vec<Vec<f64>> = (0..20).map(|_| vec![rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]).collect();
        assert!(identity21_check(split, &M::dirac(1), &samples).unwrap() < 1e-15);
        let mu2 = M::random(&mut rng, 1, 2, 2.0);
        let rho1 = M::random_positive(&mut rng, 1, 3, 2.0);
        assert!(identity21_check(split, &mu2, &samples).unwrap() < 1e-12);
        assert!(identity23_check(split, &mu2, &rho1, &samples).unwrap() < 1e-12);
        let doubled = rho1.scale(c(2.0, 0.0));
        assert!(identity23_check(split, &mu2, &doubled, &samples).unwrap() < 1e-12);
        assert!(identity23_check(split, &mu2, &mu2, &samples).is_err());
    }

    proptest! {
        #[test]
        fn fourier_is_multiplicative_on_convolutions(seed in any::<u64>(), d in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = M::random(&mut rng, d, 4, 2.0);
            let b = M::random(&mut rng, d, 3, 2.0);
            let ab = a.convolve(&b).unwrap();
            let u: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
            let lhs = fourier_atomic(&ab, &u).unwrap();
            let rhs = fourier_atomic(&a, &u).unwrap() * fourier_atomic(&b, &u).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn duality_holds_for_random_pairs(seed in any::<u64>(), d in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mu = M::random(&mut rng, d, 5, 2.0);
            let nu = M::random(&mut rng, d, 5, 2.0);
            prop_assert!(duality_check(&mu, &nu).unwrap() < 1e-12);
        }
    }
}
