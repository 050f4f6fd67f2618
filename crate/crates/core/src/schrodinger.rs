//! Grid discretization of the Schrödinger representation at `n = 1`:
//!
//! `(W(z)ψ)(x) = e^{iz₁z₂/2} e^{iz₂x} ψ(x + z₁)`,
//!
//! i.e. `W(z) = exp(i(z₂X + z₁P))`, which gives `W(y)W(z) = e^{iβ(y,z)}W(y+z)`
//! with `β(y,z) = ½(y₁z₂ − y₂z₁)`. Translations are spectral (FFT) with
//! periodic wrap, so ψ must be negligible near the window boundary.

use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, unit_phase, Real};
use crate::symplectic::PhasePoint;

/// Allowed deviation of `‖ξ‖` from 1 in [`vector_function`].
pub const NORM_TOL: f64 = 1e-8;

#[derive(Clone)]
pub struct GridRep<T: Real> {
    n: usize,
    half_width: T,
    grid: Vec<T>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for GridRep<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GridRep").field("n", &self.n).field("half_width", &self.half_width).finish()
    }
}

impl<T: Real> GridRep<T> {
    /// `n` samples of `[−X, X)`; `n` must be a power of two.
    pub fn new(n: usize, half_width: T) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!("grid size must be a power of two ≥ 2, got {n}")));
        }
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(Error::InvalidInput("grid half-width must be positive".into()));
        }
        let dx = T::of(2.0) * half_width / T::of(n as f64);
        let grid = (0..n).map(|j| -half_width + dx * T::of(j as f64)).collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            half_width,
            grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn spacing(&self) -> T {
        T::of(2.0) * self.half_width / T::of(self.n as f64)
    }

    /// Samples `f` on the grid.
    pub fn sample(&self, f: impl Fn(T) -> Complex<T>) -> Vec<Complex<T>> {
        self.grid.iter().map(|&x| f(x)).collect()
    }

    /// `Ω(x) = π^{−1/4} e^{−x²/2}`.
    pub fn vacuum(&self) -> Vec<Complex<T>> {
        let c = T::PI().powf(T::of(-0.25));
        self.sample(|x| Complex::new(c * (-x * x / T::of(2.0)).exp(), T::zero()))
    }

    /// `Σ conj(a)·b·dx`.
    pub fn inner(&self, a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
        let s = a.iter().zip(b).fold(Complex::zero(), |acc: Complex<T>, (x, y)| acc + x.conj() * y);
        s.scale(self.spacing())
    }

    pub fn norm(&self, a: &[Complex<T>]) -> T {
        self.inner(a, a).re.max(T::zero()).sqrt()
    }

    fn check_len(&self, psi: &[Complex<T>]) -> Result<()> {
        if psi.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: psi.len() });
        }
        Ok(())
    }

    /// `x ↦ ψ(x + a)` by spectral interpolation.
    pub fn translate(&self, psi: &[Complex<T>], a: T) -> Result<Vec<Complex<T>>> {
        self.check_len(psi)?;
        let mut buf = psi.to_vec();
        self.forward.process(&mut buf);
        let n = self.n as i64;
        let k0 = T::PI() / self.half_width;
        for (j, c) in buf.iter_mut().enumerate() {
            let signed = if (j as i64) < n / 2 { j as i64 } else { j as i64 - n };
            let k = k0 * T::of(signed as f64);
            *c = *c * Complex::from_polar(T::one(), k * a);
        }
        self.inverse.process(&mut buf);
        let inv_n = T::one() / T::of(self.n as f64);
        Ok(buf.into_iter().map(|c| c.scale(inv_n)).collect())
    }

    /// `W(z)ψ` for real `z = (z₁, z₂)`.
    pub fn apply_real(&self, z1: T, z2: T, psi: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if z1.abs() > self.half_width / T::of(2.0) {
            return Err(Error::InvalidInput(format!(
                "shift {z1} exceeds half the grid half-width {}",
                self.half_width
            )));
        }
        let shifted = self.translate(psi, z1)?;
        let c = z1 * z2 / T::of(2.0);
        Ok(shifted
            .into_iter()
            .zip(&self.grid)
            .map(|(v, &x)| v * Complex::from_polar(T::one(), c + z2 * x))
            .collect())
    }
}

fn split_point<T: Real>(z: &PhasePoint) -> Result<(T, T)> {
    if z.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: z.dim() });
    }
    Ok((T::of(rational_to_f64(&z.first()[0])), T::of(rational_to_f64(&z.second()[0]))))
}

/// `π(W(z))ψ` on the grid.
pub fn grid_weyl_apply<T: Real>(rep: &GridRep<T>, z: &PhasePoint, psi: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let (z1, z2) = split_point(z)?;
    rep.apply_real(z1, z2, psi)
}

/// `‖W(y)W(z)ψ − e^{iβ(y,z)}W(y+z)ψ‖`.
pub fn grid_weyl_relation_deviation<T: Real>(
    rep: &GridRep<T>,
    y: &PhasePoint,
    z: &PhasePoint,
    psi: &[Complex<T>],
) -> Result<T> {
    let beta = crate::symplectic::SymplecticSpace::standard(1).phase_angle(y, z)?;
    let lhs = grid_weyl_apply(rep, y, &grid_weyl_apply(rep, z, psi)?)?;
    let rhs = grid_weyl_apply(rep, &(y + z), psi)?;
    let phase: Complex<T> = unit_phase(beta);
    let diff: Vec<Complex<T>> = lhs.iter().zip(&rhs).map(|(a, b)| *a - phase * b).collect();
    Ok(rep.norm(&diff))
}

fn check_unit<T: Real>(rep: &GridRep<T>, xi: &[Complex<T>]) -> Result<()> {
    rep.check_len(xi)?;
    let norm = rep.norm(xi);
    if (norm - T::one()).abs() > T::of(NORM_TOL) {
        return Err(Error::InvalidInput(format!("vector must have unit norm, got {norm}")));
    }
    Ok(())
}

/// `f_ξ(z) = ⟨ξ, π(W(z))ξ⟩` for each `z`.
pub fn vector_function<T: Real>(
    rep: &GridRep<T>,
    xi: &[Complex<T>],
    z_list: &[PhasePoint],
) -> Result<Vec<Complex<T>>> {
    check_unit(rep, xi)?;
    z_list
        .iter()
        .map(|z| Ok(rep.inner(xi, &grid_weyl_apply(rep, z, xi)?)))
        .collect()
}

fn vector_function_real<T: Real>(rep: &GridRep<T>, xi: &[Complex<T>], z1: T, z2: T) -> Result<Complex<T>> {
    Ok(rep.inner(xi, &rep.apply_real(z1, z2, xi)?))
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct DecayRow {
    pub radius: f64,
    pub max_abs_h: f64,
}

/// Number of directions sampled on each circle `‖z‖ = R`.
pub const SPHERE_SAMPLES: usize = 64;

/// `max |Σ p_k f_{ξ_k}(z)|` over `‖z‖ = R` for each radius.
pub fn c0_decay_scan<T: Real>(
    rep: &GridRep<T>,
    mixture: &[(T, Vec<Complex<T>>)],
    radius_grid: &[T],
) -> Result<Vec<DecayRow>> {
    if mixture.is_empty() {
        return Err(Error::InvalidInput("empty mixture".into()));
    }
    if mixture.iter().any(|(p, _)| !(*p >= T::zero())) {
        return Err(Error::InvalidInput("mixture weights must be non-negative".into()));
    }
    let total = mixture.iter().fold(T::zero(), |acc, (p, _)| acc + *p);
    if (total - T::one()).abs() > T::of(1e-12) {
        return Err(Error::InvalidInput(format!("mixture weights sum to {total}, expected 1")));
    }
    for (_, xi) in mixture {
        check_unit(rep, xi)?;
    }
    let h = |z1: T, z2: T| -> Result<Complex<T>> {
        mixture.iter().try_fold(Complex::zero(), |acc, (p, xi)| {
            Ok(acc + vector_function_real(rep, xi, z1, z2)?.scale(*p))
        })
    };
    radius_grid
        .iter()
        .map(|&r| {
            let samples = if r == T::zero() { 1 } else { SPHERE_SAMPLES };
            let mut worst = T::zero();
            for s in 0..samples {
                let angle = T::of(2.0 * std::f64::consts::PI * s as f64 / SPHERE_SAMPLES as f64);
                worst = worst.max(h(r * angle.cos(), r * angle.sin())?.norm());
            }
            Ok(DecayRow { radius: r.as_f64(), max_abs_h: worst.as_f64() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep() -> GridRep<f64> {
        GridRep::new(1024, 16.0).unwrap()
    }

    fn pt(a: (i64, i64), b: (i64, i64)) -> PhasePoint {
        PhasePoint::from_fracs(&[a], &[b]).unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridRep::<f64>::new(1000, 16.0).is_err());
        assert!(GridRep::<f64>::new(1024, 0.0).is_err());
    }

    #[test]
    fn zero_is_identity_and_unitary() {
        let r = rep();
        let omega = r.vacuum();
        assert!((r.norm(&omega) - 1.0).abs() < 1e-12);
        let out = grid_weyl_apply(&r, &PhasePoint::zero(1), &omega).unwrap();
        assert!(out.iter().zip(&omega).all(|(a, b)| (a - b).norm() < 1e-14));
        let moved = grid_weyl_apply(&r, &pt((3, 2), (-7, 5)), &omega).unwrap();
        assert!((r.norm(&moved) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn translation_moves_the_peak() {
        let r = rep();
        let moved = r.translate(&r.vacuum(), 2.0).unwrap();
        // ψ(x + 2) peaks at x = −2
        let peak = moved.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap().0;
        assert!((r.grid()[peak] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn weyl_relation_on_grid() {
        let r = rep();
        let omega = r.vacuum();
        let dev = grid_weyl_relation_deviation(&r, &pt((1, 1), (1, 2)), &pt((-3, 4), (5, 3)), &omega).unwrap();
        assert!(dev < 1e-8);
        // the opposite phase convention must fail this test
        let y = pt((1, 1), (0, 1));
        let z = pt((0, 1), (1, 1));
        let lhs = grid_weyl_apply(&r, &y, &grid_weyl_apply(&r, &z, &omega).unwrap()).unwrap();
        let rhs = grid_weyl_apply(&r, &(&y + &z), &omega).unwrap();
        let wrong: Vec<_> = lhs.iter().zip(&rhs).map(|(a, b)| a - Complex::from_polar(1.0, -0.5) * b).collect();
        assert!(r.norm(&wrong) > 0.1);
    }

    #[test]
    fn vacuum_function_is_fock() {
        let r = rep();
        let zs = [PhasePoint::zero(1), pt((1, 1), (1, 1)), pt((2, 1), (-3, 1))];
        let f = vector_function(&r, &r.vacuum(), &zs).unwrap();
        assert!((f[0] - Complex::new(1.0, 0.0)).norm() < 1e-12);
        assert!((f[1] - Complex::new((-0.5f64).exp(), 0.0)).norm() < 1e-6);
        assert!((f[2] - Complex::new((-13.0f64 / 4.0).exp(), 0.0)).norm() < 1e-6);
    }

    #[test]
    fn displaced_vacuum_has_same_modulus() {
        let r = rep();
        let x = pt((1, 1), (-1, 2));
        let xi = grid_weyl_apply(&r, &x, &r.vacuum()).unwrap();
        let space = crate::symplectic::SymplecticSpace::standard(1);
        for z in [pt((1, 2), (1, 1)), pt((-2, 1), (3, 2))] {
            let f = vector_function(&r, &xi, std::slice::from_ref(&z)).unwrap()[0];
            let beta = space.phase_angle(&x, &z).unwrap();
            let expected = Complex::from_polar((-rational_to_f64(&z.norm_sq()) / 4.0).exp(), -2.0 * beta);
            assert!((f - expected).norm() < 1e-6);
        }
    }

    #[test]
    fn decay_scan_of_vacuum() {
        let r = rep();
        let rows = c0_decay_scan(&r, &[(1.0, r.vacuum())], &[0.0, 2.0, 4.0]).unwrap();
        assert!((rows[0].max_abs_h - 1.0).abs() < 1e-12);
        assert!((rows[1].max_abs_h - (-1.0f64).exp()).abs() < 1e-6);
        assert!((rows[2].max_abs_h - (-4.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn decay_scan_of_mixture() {
        let r = rep();
        let omega = r.vacuum();
        let shifted = r.apply_real(1.0, 0.5, &omega).unwrap();
        let rows = c0_decay_scan(&r, &[(0.5, omega), (0.5, shifted)], &[0.0, 4.0, 8.0]).unwrap();
        assert!((rows[0].max_abs_h - 1.0).abs() < 1e-10);
        assert!(rows[1].max_abs_h <= (-4.0f64).exp() + 1e-6);
        assert!(rows[2].max_abs_h < 0.01);
        assert!(c0_decay_scan(&r, &[(0.7, r.vacuum())], &[1.0]).is_err());
    }

    #[test]
    fn shift_limit() {
        let r = rep();
        assert!(grid_weyl_apply(&r, &pt((9, 1), (0, 1)), &r.vacuum()).is_err());
    }
}
