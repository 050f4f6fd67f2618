//! Finite sums `Σ c_z W(z)` with the twisted product
//! `W(y)W(z) = e^{iβ(y,z)} W(y + z)` and `W(z)* = W(−z)`.
//!
//! Support points are exact map keys; only the coefficients are floating.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{unit_phase, Real};
use crate::symplectic::{PhasePoint, SymplecticSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct WeylElement<T> {
    space: SymplecticSpace,
    terms: BTreeMap<PhasePoint, Complex<T>>,
}

impl<T: Real> WeylElement<T> {
    pub fn zero(space: SymplecticSpace) -> Self {
        Self { space, terms: BTreeMap::new() }
    }

    pub fn unit(space: SymplecticSpace) -> Self {
        Self::generator(space, PhasePoint::zero(space.dim())).expect("origin lies in every space")
    }

    /// `W(z)`.
    pub fn generator(space: SymplecticSpace, z: PhasePoint) -> Result<Self> {
        Self::from_terms(space, [(z, Complex::one())])
    }

    /// Sums coefficients of repeated points and drops exact zeros.
    pub fn from_terms(
        space: SymplecticSpace,
        terms: impl IntoIterator<Item = (PhasePoint, Complex<T>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(space);
        for (z, c) in terms {
            space.check_point(&z)?;
            out.accumulate(z, c);
        }
        out.prune_exact();
        Ok(out)
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PhasePoint, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &PhasePoint> {
        self.terms.keys()
    }

    pub fn coefficient(&self, z: &PhasePoint) -> Complex<T> {
        self.terms.get(z).copied().unwrap_or_else(Complex::zero)
    }

    fn accumulate(&mut self, z: PhasePoint, c: Complex<T>) {
        let entry = self.terms.entry(z).or_insert_with(Complex::zero);
        *entry = *entry + c;
    }

    fn prune_exact(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn pruned(&self, tol: T) -> Self {
        let mut out = self.clone();
        out.terms.retain(|_, c| c.norm() > tol);
        out
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (z, &c) in &other.terms {
            out.accumulate(z.clone(), c);
        }
        out.prune_exact();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-Complex::one()))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = Self {
            space: self.space,
            terms: self.terms.iter().map(|(z, &c)| (z.clone(), c * s)).collect(),
        };
        out.prune_exact();
        out
    }

    /// Bilinear extension of `W(y)W(z) = e^{iβ(y,z)} W(y + z)`.
    pub fn weyl_mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = Self::zero(self.space);
        for (y, &a) in &self.terms {
            for (z, &b) in &other.terms {
                let phase: Complex<T> = unit_phase(self.space.phase_angle(y, z)?);
                out.accumulate(y + z, a * b * phase);
            }
        }
        out.prune_exact();
        Ok(out)
    }

    /// `(z ↦ c)` becomes `(−z ↦ c̄)`.
    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space,
            terms: self.terms.iter().map(|(z, c)| (-z, c.conj())).collect(),
        }
    }

    /// `Σ |c_z|`, a submultiplicative norm dominating every state evaluation.
    pub fn l1_norm(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, c| acc + c.norm())
    }

    /// True if both elements have the same support and coefficients agree to `tol`.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.space == other.space
            && self.terms.len() == other.terms.len()
            && self.max_coefficient_deviation(other).is_some_and(|d| d <= tol)
    }

    /// `max |c_z − c'_z|` when the supports coincide exactly, `None` otherwise.
    pub fn max_coefficient_deviation(&self, other: &Self) -> Option<T> {
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let mut worst = T::zero();
        for ((za, ca), (zb, cb)) in self.terms.iter().zip(&other.terms) {
            if za != zb {
                return None;
            }
            worst = worst.max((*ca - *cb).norm());
        }
        Some(worst)
    }

    /// Largest coefficient modulus (0 for the zero element).
    pub fn max_abs_coefficient(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, c| acc.max(c.norm()))
    }

    /// Converts coefficients to another scalar type.
    pub fn cast<U: Real>(&self) -> WeylElement<U> {
        WeylElement {
            space: self.space,
            terms: self
                .terms
                .iter()
                .map(|(z, c)| (z.clone(), Complex::new(U::of(c.re.as_f64()), U::of(c.im.as_f64()))))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational_from_frac;

    type W = WeylElement<f64>;

    fn space1() -> SymplecticSpace {
        SymplecticSpace::standard(1)
    }

    fn w(a: i64, b: i64) -> W {
        W::generator(space1(), PhasePoint::from_ints(&[a], &[b]).unwrap()).unwrap()
    }

    #[test]
    fn product_of_conjugate_generators() {
        let p = w(1, 0).weyl_mul(&w(0, 1)).unwrap();
        let z = PhasePoint::from_ints(&[1], &[1]).unwrap();
        assert_eq!(p.len(), 1);
        let c = p.coefficient(&z);
        assert!((c - Complex::from_polar(1.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn generator_times_inverse_is_unit() {
        let z = PhasePoint::from_fracs(&[(3, 7)], &[(-5, 2)]).unwrap();
        let a = W::generator(space1(), z.clone()).unwrap();
        let b = W::generator(space1(), -&z).unwrap();
        let p = a.weyl_mul(&b).unwrap();
        assert_eq!(p.support().cloned().collect::<Vec<_>>(), vec![PhasePoint::zero(1)]);
        assert!((p.coefficient(&PhasePoint::zero(1)) - Complex::one()).norm() < 1e-12);
    }

    #[test]
    fn adjoint_of_generator() {
        let z = PhasePoint::from_fracs(&[(1, 3)], &[(2, 5)]).unwrap();
        let a = W::generator(space1(), z.clone()).unwrap();
        assert_eq!(a.adjoint(), W::generator(space1(), -&z).unwrap());
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn l1_examples() {
        assert_eq!(w(2, 3).l1_norm(), 1.0);
        let t = w(1, 0).sub(&W::unit(space1())).unwrap();
        assert_eq!(t.l1_norm(), 2.0);
        assert_eq!(W::unit(space1()).sub(&W::unit(space1())).unwrap().l1_norm(), 0.0);
    }

    #[test]
    fn space_mismatch_is_rejected() {
        let a = W::unit(SymplecticSpace::standard(1));
        let b = W::unit(SymplecticSpace::standard(2));
        assert_eq!(a.weyl_mul(&b), Err(Error::SpaceMismatch));
        assert_eq!(a.add(&b), Err(Error::SpaceMismatch));
    }

    #[test]
    fn repeated_points_are_merged_and_zeros_pruned() {
        let z = PhasePoint::from_ints(&[1], &[2]).unwrap();
        let e = W::from_terms(
            space1(),
            [(z.clone(), Complex::new(1.0, 0.0)), (z.clone(), Complex::new(-1.0, 0.0))],
        )
        .unwrap();
        assert!(e.is_empty());
        let half = PhasePoint::pair(rational_from_frac(1, 2), rational_from_frac(0, 1));
        assert!(W::generator(space1(), half).is_ok());
    }

    #[test]
    fn lattice_product_uses_theta() {
        let theta = 0.7;
        let s = SymplecticSpace::LatticeZ2 { theta };
        let m = WeylElement::<f64>::generator(s, PhasePoint::from_ints(&[1], &[0]).unwrap()).unwrap();
        let n = WeylElement::<f64>::generator(s, PhasePoint::from_ints(&[0], &[1]).unwrap()).unwrap();
        let p = m.weyl_mul(&n).unwrap();
        let c = p.coefficient(&PhasePoint::from_ints(&[1], &[1]).unwrap());
        assert!((c - Complex::from_polar(1.0, theta)).norm() < 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let s = space1();
        let y = WeylElement::<f32>::generator(s, PhasePoint::from_fracs(&[(1, 3)], &[(2, 1)]).unwrap()).unwrap();
        let p = y.weyl_mul(&y.adjoint()).unwrap();
        assert_eq!(p.len(), 1);
        assert!((p.coefficient(&PhasePoint::zero(1)) - Complex::new(1.0f32, 0.0)).norm() < 1e-6);
    }
}
