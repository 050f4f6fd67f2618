//! Clock-and-shift representation of the θ-deformed torus algebra at
//! rational `θ = πp/q`.
//!
//! `C = diag(ω^k)` with `ω = e^{2iθ}` and `S e_k = e_{k+1 mod q}`, so that
//! `C·S = e^{2iθ} S·C`. The represented generator is
//! `T(m) = e^{−iθm₁m₂} C^{m₁} S^{m₂}`, which satisfies
//! `T(m)T(n) = e^{iθ(m₁n₂ − m₂n₁)} T(m + n)`.
//!
//! The representation is finite, hence not faithful: `C^{ord(ω)} = S^q = 1`.
//! Trace evaluation is only offered inside the window where it is faithful.

use num_complex::Complex;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{unit_phase, Real};
use crate::symplectic::{PhasePoint, SymplecticSpace};
use crate::weyl::WeylElement;

const SELF_CHECK_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct TorusRep<T> {
    p: i64,
    q: usize,
    theta: f64,
    clock: CMatrix<T>,
    shift: CMatrix<T>,
}

impl<T: Real> TorusRep<T> {
    /// Builds and self-verifies the representation for `θ = πp/q`.
    pub fn build(p: i64, q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInput("torus modulus q must be at least 1".into()));
        }
        let theta = std::f64::consts::PI * p as f64 / q as f64;
        // ω^k with the exponent reduced mod q keeps the angles small and exact in p, k
        let clock_diag: Vec<Complex<T>> = (0..q as i64)
            .map(|k| {
                let r = (2 * p * k).rem_euclid(2 * q as i64);
                unit_phase(std::f64::consts::PI * r as f64 / q as f64)
            })
            .collect();
        let clock = CMatrix::diagonal(&clock_diag);
        let shift = CMatrix::from_fn(q, q, |i, j| {
            if i == (j + 1) % q {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::zero()
            }
        });
        let rep = Self { p, q, theta, clock, shift };
        rep.self_check()?;
        Ok(rep)
    }

    fn self_check(&self) -> Result<()> {
        let tol = T::of(SELF_CHECK_TOL);
        if self.clock.unitarity_deviation() > tol || self.shift.unitarity_deviation() > tol {
            return Err(Error::Representation("clock or shift is not unitary".into()));
        }
        let lhs = self.clock.matmul(&self.shift);
        let rhs = self.shift.matmul(&self.clock).scale(unit_phase(2.0 * self.theta));
        if lhs.max_abs_diff(&rhs) > tol {
            return Err(Error::Representation("clock/shift commutation phase is not e^{2iθ}".into()));
        }
        let window = (self.q as i64).min(2);
        let dev = self.relation_deviation(window);
        if dev > tol {
            return Err(Error::Representation(format!(
                "bicharacter relation fails by {:e}",
                dev.as_f64()
            )));
        }
        Ok(())
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn clock(&self) -> &CMatrix<T> {
        &self.clock
    }

    pub fn shift(&self) -> &CMatrix<T> {
        &self.shift
    }

    /// The abstract algebra this represents.
    pub fn space(&self) -> SymplecticSpace {
        SymplecticSpace::LatticeZ2 { theta: self.theta }
    }

    /// `T(m) = e^{−iθm₁m₂} C^{m₁} S^{m₂}`.
    pub fn apply(&self, m: (i64, i64)) -> CMatrix<T> {
        let phase = unit_phase(-self.theta * (m.0 as f64) * (m.1 as f64));
        self.clock.unitary_pow(m.0).matmul(&self.shift.unitary_pow(m.1)).scale(phase)
    }

    /// Worst deviation of `T(m)T(n) − e^{iθ(m₁n₂−m₂n₁)}T(m+n)` over `|mᵢ|, |nᵢ| ≤ window`.
    pub fn relation_deviation(&self, window: i64) -> T {
        let range: Vec<i64> = (-window..=window).collect();
        let mut worst = T::zero();
        for &m1 in &range {
            for &m2 in &range {
                let tm = self.apply((m1, m2));
                for &n1 in &range {
                    for &n2 in &range {
                        let lhs = tm.matmul(&self.apply((n1, n2)));
                        let angle = self.theta * (m1 * n2 - m2 * n1) as f64;
                        let rhs = self.apply((m1 + n1, m2 + n2)).scale(unit_phase(angle));
                        worst = worst.max(lhs.max_abs_diff(&rhs));
                    }
                }
            }
        }
        worst
    }

    /// `(|m₁|, |m₂|)` bounds (exclusive) of the window where the trace is faithful.
    pub fn trace_window(&self) -> (i64, i64) {
        let q = self.q as i64;
        let clock_order = q / self.p.gcd(&q).max(1);
        (clock_order, q)
    }

    /// Represents a finite sum `Σ c_m W(m)` from the lattice algebra.
    pub fn represent(&self, element: &WeylElement<T>) -> Result<CMatrix<T>> {
        self.check_space(element)?;
        let mut out = CMatrix::zeros(self.q, self.q);
        for (m, &c) in element.terms() {
            out = out.add(&self.apply(lattice_index(m)?).scale(c));
        }
        Ok(out)
    }

    /// Normalized trace `(1/q)·tr` of the represented element; equals `c_(0,0)` inside the window.
    pub fn trace_state(&self, element: &WeylElement<T>) -> Result<Complex<T>> {
        self.check_space(element)?;
        let window = self.trace_window();
        for m in element.support() {
            let idx = lattice_index(m)?;
            if idx.0.abs() >= window.0 || idx.1.abs() >= window.1 {
                return Err(Error::OutsideWindow { index: idx, window });
            }
        }
        let tr = self.represent(element)?.trace();
        Ok(tr.unscale(T::of(self.q as f64)))
    }

    fn check_space(&self, element: &WeylElement<T>) -> Result<()> {
        match element.space() {
            SymplecticSpace::LatticeZ2 { theta } if (theta - self.theta).abs() <= 1e-15 => Ok(()),
            _ => Err(Error::SpaceMismatch),
        }
    }
}

fn lattice_index(m: &PhasePoint) -> Result<(i64, i64)> {
    let conv = |r: &crate::scalar::Rational| {
        if !r.is_integer() {
            return Err(Error::InvalidInput(format!("lattice index {m} is not integral")));
        }
        r.to_integer()
            .to_i64()
            .ok_or_else(|| Error::InvalidInput(format!("lattice index {m} overflows i64")))
    };
    Ok((conv(&m.first()[0])?, conv(&m.second()[0])?))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Rep = TorusRep<f64>;

    fn elem(rep: &Rep, terms: &[((i64, i64), Complex<f64>)]) -> WeylElement<f64> {
        WeylElement::from_terms(
            rep.space(),
            terms.iter().map(|&((a, b), c)| (PhasePoint::from_ints(&[a], &[b]).unwrap(), c)),
        )
        .unwrap()
    }

    #[test]
    fn rejects_zero_modulus() {
        assert!(Rep::build(1, 0).is_err());
    }

    #[test]
    fn commutative_case() {
        let rep = Rep::build(0, 3).unwrap();
        for m in [(1, 0), (0, 1), (2, -1)] {
            for n in [(1, 1), (-1, 2)] {
                let lhs = rep.apply(m).matmul(&rep.apply(n));
                let rhs = rep.apply((m.0 + n.0, m.1 + n.1));
                assert!(lhs.max_abs_diff(&rhs) < 1e-13);
            }
        }
    }

    #[test]
    fn quarter_turn_phase_is_i() {
        let rep = Rep::build(1, 2).unwrap();
        let lhs = rep.apply((1, 0)).matmul(&rep.apply((0, 1)));
        let rhs = rep.apply((1, 1)).scale(Complex::new(0.0, 1.0));
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn full_clock_period_is_scalar() {
        for (p, q) in [(1, 3), (2, 5), (1, 4)] {
            let rep = Rep::build(p, q).unwrap();
            let t = rep.apply((q as i64, 0));
            let phase = t[(0, 0)];
            assert!((phase.norm() - 1.0).abs() < 1e-14);
            assert!(t.max_abs_diff(&CMatrix::identity(q).scale(phase)) < 1e-13);
        }
    }

    #[test]
    fn trace_state_examples() {
        let rep = Rep::build(1, 3).unwrap();
        let one = elem(&rep, &[((0, 0), Complex::new(1.0, 0.0))]);
        assert!((rep.trace_state(&one).unwrap() - Complex::new(1.0, 0.0)).norm() < 1e-14);
        let u = elem(&rep, &[((1, 0), Complex::new(1.0, 0.0))]);
        assert!(rep.trace_state(&u).unwrap().norm() < 1e-14);
        let mix = elem(&rep, &[((0, 0), Complex::new(3.0, 0.0)), ((1, 1), Complex::new(0.0, 2.0))]);
        assert!((rep.trace_state(&mix).unwrap() - Complex::new(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn trace_state_rejects_outside_window() {
        let rep = Rep::build(1, 3).unwrap();
        let far = elem(&rep, &[((3, 0), Complex::new(1.0, 0.0))]);
        assert!(matches!(rep.trace_state(&far), Err(Error::OutsideWindow { .. })));
    }

    #[test]
    fn non_coprime_window_shrinks() {
        // θ = π/2 with (p, q) = (2, 4): ω = −1 so C² = 1 and tr(C²) ≠ 0
        let rep = Rep::build(2, 4).unwrap();
        assert_eq!(rep.trace_window(), (2, 4));
        let c2 = elem(&rep, &[((2, 0), Complex::new(1.0, 0.0))]);
        assert!(rep.trace_state(&c2).is_err());
        assert!((rep.represent(&c2).unwrap().trace().norm() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn representation_is_multiplicative_on_window() {
        let rep = Rep::build(2, 5).unwrap();
        let a = elem(&rep, &[((1, 0), Complex::new(0.5, 0.1)), ((0, 2), Complex::new(-1.0, 0.0))]);
        let b = elem(&rep, &[((1, 1), Complex::new(0.0, 1.0)), ((-1, 0), Complex::new(2.0, 0.0))]);
        let ab = a.weyl_mul(&b).unwrap();
        let lhs = rep.represent(&a).unwrap().matmul(&rep.represent(&b).unwrap());
        let rhs = rep.represent(&ab).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let adj = rep.represent(&a.adjoint()).unwrap();
        assert!(adj.max_abs_diff(&rep.represent(&a).unwrap().adjoint()) < 1e-12);
    }
}
