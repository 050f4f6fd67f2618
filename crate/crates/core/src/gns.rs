//! GNS geometry on a finite span `{W(x_j)}`: Gram matrix, numerical null
//! space and the cyclic-vector fixpoint residual.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::scalar::{unit_phase, Rational, Real};
use crate::state::{GeneratingFunction, HERMITIAN_TOL};
use crate::symplectic::PhasePoint;

/// Null-space threshold, relative to the largest Gram eigenvalue.
pub const NULL_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct GnsSpan<T> {
    g: GeneratingFunction<T>,
    points: Vec<PhasePoint>,
    gram: CMatrix<T>,
    spectrum: Vec<T>,
    null_basis: Vec<Vec<Complex<T>>>,
}

impl<T: Real> GnsSpan<T> {
    pub fn generating_function(&self) -> &GeneratingFunction<T> {
        &self.g
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    /// `G_jk = ω(W(x_j)* W(x_k))`.
    pub fn gram(&self) -> &CMatrix<T> {
        &self.gram
    }

    /// Gram eigenvalues, ascending.
    pub fn spectrum(&self) -> &[T] {
        &self.spectrum
    }

    /// Orthonormal coefficient vectors `c` with `c*Gc ≈ 0`.
    pub fn null_basis(&self) -> &[Vec<Complex<T>>] {
        &self.null_basis
    }

    /// Dimension of the quotient span.
    pub fn rank(&self) -> usize {
        self.points.len() - self.null_basis.len()
    }

    /// `⟨A, B⟩ = c_A* G c_B` for coefficient vectors over the span points.
    pub fn inner(&self, a: &[Complex<T>], b: &[Complex<T>]) -> Result<Complex<T>> {
        let n = self.points.len();
        if a.len() != n || b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: a.len().min(b.len()) });
        }
        let gb = self.gram.matvec(b);
        Ok(a.iter().zip(&gb).fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * y))
    }
}

/// `G_jk = e^{−iβ(x_j,x_k)} g(x_k − x_j)`.
pub fn gram_matrix<T: Real>(g: &GeneratingFunction<T>, points: &[PhasePoint]) -> Result<CMatrix<T>> {
    let space = g.space();
    let mut m = CMatrix::zeros(points.len(), points.len());
    for (j, xj) in points.iter().enumerate() {
        for (k, xk) in points.iter().enumerate() {
            let phase: Complex<T> = unit_phase(-space.phase_angle(xj, xk)?);
            m[(j, k)] = g.eval(&(xk - xj))? * phase;
        }
    }
    Ok(m)
}

/// Builds the Gram matrix and its null space (`λ < tol·λ_max`). An
/// eigenvalue below `−tol·max(λ_max, 1)` means `g` is not a state on these
/// points and is rejected.
pub fn gns_build<T: Real>(g: &GeneratingFunction<T>, points: &[PhasePoint], tol: T) -> Result<GnsSpan<T>> {
    for (i, x) in points.iter().enumerate() {
        if points[..i].contains(x) {
            return Err(Error::InvalidInput(format!("duplicate span point {x}")));
        }
    }
    let gram = gram_matrix(g, points)?;
    let eig = hermitian_eigen(&gram, T::of(HERMITIAN_TOL))?;
    let scale = eig.max().max(T::one());
    if eig.min() < -tol * scale {
        return Err(Error::NotPositive { min_eigenvalue: eig.min().as_f64() });
    }
    let cut = tol * eig.max().max(T::zero());
    let null_basis = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < cut || v <= T::zero())
        .map(|(k, _)| eig.vectors.column(k))
        .collect();
    Ok(GnsSpan { g: g.clone(), points: points.to_vec(), gram, spectrum: eig.values, null_basis })
}

/// `‖π(W(y))Ω − Ω‖² = 2 − 2ℜ g(y)`.
pub fn gns_fixpoint_residual<T: Real>(g: &GeneratingFunction<T>, y: &PhasePoint) -> Result<T> {
    let v = g.eval(y)?;
    Ok((T::of(2.0) - T::of(2.0) * v.re).max(T::zero()))
}

#[derive(Clone, Debug)]
pub struct OrthogonalityScan<T> {
    /// Number of distinct first blocks among the points.
    pub classes: usize,
    /// Largest `|G_jk|` with `x_j`, `x_k` in different classes.
    pub cross_class_max: T,
    /// Largest `||G_jk| − 1|` within a class.
    pub within_class_deviation: T,
    pub rank: usize,
}

/// Gram structure of a `g₀` span: orthogonal across first blocks, unimodular within.
pub fn gns_orthogonality_scan<T: Real>(span: &GnsSpan<T>) -> Result<OrthogonalityScan<T>> {
    if !span.g.is_dirac_g0() {
        return Err(Error::Unsupported("orthogonality scan needs the g0 state".into()));
    }
    let mut class_of: BTreeMap<Vec<Rational>, usize> = BTreeMap::new();
    let labels: Vec<usize> = span
        .points
        .iter()
        .map(|x| {
            let next = class_of.len();
            *class_of.entry(x.first().to_vec()).or_insert(next)
        })
        .collect();
    let mut cross = T::zero();
    let mut within = T::zero();
    for (j, &a) in labels.iter().enumerate() {
        for (k, &b) in labels.iter().enumerate() {
            let v = span.gram[(j, k)].norm();
            if a == b {
                within = within.max((v - T::one()).abs());
            } else {
                cross = cross.max(v);
            }
        }
    }
    Ok(OrthogonalityScan {
        classes: class_of.len(),
        cross_class_max: cross,
        within_class_deviation: within,
        rank: span.rank(),
    })
}
