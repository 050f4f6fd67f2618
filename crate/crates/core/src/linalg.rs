//! Dense complex matrices and a Hermitian eigen-solver.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Complex::zero(), |acc, j| acc + self[(i, j)] * v[j]))
            .collect()
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Integer power; negative exponents use the adjoint, so only valid for unitaries.
    pub fn unitary_pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.adjoint() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::identity(self.rows);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&sq);
            }
            sq = sq.matmul(&sq);
            e >>= 1;
        }
        acc
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|x| x.norm()).fold(T::zero(), T::max)
    }

    /// `max |M − M*|`.
    pub fn hermitian_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |M*M − I|`.
    pub fn unitarity_deviation(&self) -> T {
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.cols))
    }

    /// Quadratic form `c* M c`.
    pub fn quadratic_form(&self, c: &[Complex<T>]) -> Complex<T> {
        let mc = self.matvec(c);
        c.iter().zip(&mc).fold(Complex::zero(), |acc, (&a, &b)| acc + a.conj() * b)
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    /// Ascending.
    pub values: Vec<T>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn min(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }
}

/// Cyclic complex Jacobi. Rejects input whose Hermitian deviation exceeds `herm_tol`.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>, herm_tol: T) -> Result<HermitianEigen<T>> {
    let dev = m.hermitian_deviation();
    if !(dev <= herm_tol) {
        return Err(Error::NotHermitian { deviation: dev.as_f64() });
    }
    let n = m.rows();
    // symmetrize so the rotations see an exactly Hermitian matrix
    let half = T::of(0.5);
    let mut a = CMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()).scale(half));
    let mut v = CMatrix::identity(n);

    let frob = |a: &CMatrix<T>| a.data.iter().fold(T::zero(), |s, x| s + x.norm_sqr()).sqrt();
    let scale = frob(&a).max(T::min_positive_value());
    let eps = T::epsilon();

    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= eps * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let h = a[(p, q)];
                let r = h.norm();
                if r <= eps * eps * scale {
                    continue;
                }
                let e = h.unscale(r);
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (r + r);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                // U acts on the (p, q) plane: phase to a real off-diagonal, then rotate
                let upp = Complex::new(c, T::zero());
                let upq = Complex::new(s, T::zero());
                let uqp = -e.conj().scale(s);
                let uqq = e.conj().scale(c);
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * upp + akq * uqp;
                    a[(k, q)] = akp * upq + akq * uqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
                    a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
                }
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * upp + vkq * uqp;
                    v[(k, q)] = vkp * upq + vkq * uqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn two_by_two_eigenvalues() {
        // [[1, a], [a, 1]] has eigenvalues 1 ± a
        let a = 0.3;
        let m = CMatrix::from_fn(2, 2, |i, j| if i == j { c(1.0, 0.0) } else { c(a, 0.0) });
        let eig = hermitian_eigen(&m, 1e-12).unwrap();
        assert!((eig.values[0] - 0.7).abs() < 1e-14);
        assert!((eig.values[1] - 1.3).abs() < 1e-14);
    }

    #[test]
    fn complex_off_diagonal() {
        // [[2, i], [-i, 2]] → 1, 3
        let m = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(0.0, 1.0),
            (1, 0) => c(0.0, -1.0),
            _ => c(2.0, 0.0),
        });
        let eig = hermitian_eigen(&m, 1e-12).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_fn(2, 2, |i, j| if i < j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(matches!(hermitian_eigen(&m, 1e-10), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn unitary_pow_negative_is_inverse() {
        let u = CMatrix::diagonal(&[c(0.0, 1.0), c(-1.0, 0.0)]);
        let p = u.unitary_pow(3).matmul(&u.unitary_pow(-3));
        assert!(p.max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }

    fn hermitian_strategy() -> impl Strategy<Value = CMatrix<f64>> {
        (1usize..12).prop_flat_map(|n| {
            proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |raw| {
                let b = CMatrix::from_fn(n, n, |i, j| c(raw[i * n + j].0, raw[i * n + j].1));
                b.add(&b.adjoint())
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn eigenpairs_reconstruct(m in hermitian_strategy()) {
            let eig = hermitian_eigen(&m, 1e-12).unwrap();
            let n = m.rows();
            let v = &eig.vectors;
            prop_assert!(v.unitarity_deviation() < 1e-12);
            let lam = CMatrix::diagonal(&eig.values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
            let recon = v.matmul(&lam).matmul(&v.adjoint());
            prop_assert!(recon.max_abs_diff(&m) < 1e-11 * (n as f64));
            for w in eig.values.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
            let tr: f64 = eig.values.iter().sum();
            prop_assert!((tr - m.trace().re).abs() < 1e-11 * (n as f64));
        }
    }
}
