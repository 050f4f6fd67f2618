//! Finite-dimensional symplectic spaces with exact rational coordinates.
//!
//! A point `z = (z₁, z₂)` carries two blocks of equal length `n`. On
//! [`SymplecticSpace::StandardPairs`] the form is
//! `β(y, z) = ½(⟨y₁, z₂⟩ − ⟨y₂, z₁⟩)`, evaluated exactly. On
//! [`SymplecticSpace::LatticeZ2`] points are integer pairs `m = (m₁, m₂)`
//! and the twisting phase is `θ(m₁n₂ − m₂n₁)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rational_from_frac, rational_to_f64, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhasePoint {
    first: Vec<Rational>,
    second: Vec<Rational>,
}

impl PhasePoint {
    pub fn new(first: Vec<Rational>, second: Vec<Rational>) -> Result<Self> {
        if first.is_empty() {
            return Err(Error::InvalidInput("phase point blocks must be non-empty".into()));
        }
        if first.len() != second.len() {
            return Err(Error::DimensionMismatch { expected: first.len(), found: second.len() });
        }
        Ok(Self { first, second })
    }

    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "block dimension must be at least 1");
        Self { first: vec![Rational::zero(); n], second: vec![Rational::zero(); n] }
    }

    /// Point with integer coordinates.
    pub fn from_ints(first: &[i64], second: &[i64]) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        Self::new(conv(first), conv(second))
    }

    /// Point from `(numerator, denominator)` pairs.
    pub fn from_fracs(first: &[(i64, i64)], second: &[(i64, i64)]) -> Result<Self> {
        let conv = |v: &[(i64, i64)]| v.iter().map(|&(p, q)| rational_from_frac(p, q)).collect();
        Self::new(conv(first), conv(second))
    }

    /// One-degree-of-freedom point `((a), (b))`.
    pub fn pair(a: Rational, b: Rational) -> Self {
        Self { first: vec![a], second: vec![b] }
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    pub fn first(&self) -> &[Rational] {
        &self.first
    }

    pub fn second(&self) -> &[Rational] {
        &self.second
    }

    pub fn is_zero(&self) -> bool {
        self.first_is_zero() && self.second.iter().all(Zero::is_zero)
    }

    pub fn first_is_zero(&self) -> bool {
        self.first.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            first: self.first.iter().map(|x| x * r).collect(),
            second: self.second.iter().map(|x| x * r).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(self + other)
    }

    pub fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    /// `‖z₁‖²`, exact.
    pub fn first_norm_sq(&self) -> Rational {
        self.first.iter().map(|x| x * x).fold(Rational::zero(), |a, b| a + b)
    }

    /// `‖z₂‖²`, exact.
    pub fn second_norm_sq(&self) -> Rational {
        self.second.iter().map(|x| x * x).fold(Rational::zero(), |a, b| a + b)
    }

    /// Standard Euclidean `‖z‖² = ‖z₁‖² + ‖z₂‖²`, exact.
    pub fn norm_sq(&self) -> Rational {
        self.first_norm_sq() + self.second_norm_sq()
    }

    pub fn to_f64(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.first.iter().map(rational_to_f64).collect(),
            self.second.iter().map(rational_to_f64).collect(),
        )
    }

    /// All `2n` coordinates, first block then second.
    pub fn coords(&self) -> impl Iterator<Item = &Rational> {
        self.first.iter().chain(self.second.iter())
    }

    /// Builds a point from `2n` coordinates, first block then second.
    pub fn from_coords(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() || !coords.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "a phase point needs an even, non-zero number of coordinates, got {}",
                coords.len()
            )));
        }
        let n = coords.len() / 2;
        let mut first = coords;
        let second = first.split_off(n);
        Self::new(first, second)
    }

    /// Random point whose coordinates are `p/q` with `|p| ≤ max_num`, `1 ≤ q ≤ max_den`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, max_num: i64, max_den: i64) -> Self {
        let mut coord = || {
            let p = rng.random_range(-max_num..=max_num);
            let q = rng.random_range(1..=max_den);
            rational_from_frac(p, q)
        };
        let first = (0..n).map(|_| coord()).collect();
        let second = (0..n).map(|_| coord()).collect();
        Self { first, second }
    }
}

impl Add for &PhasePoint {
    type Output = PhasePoint;

    /// Panics on dimension mismatch; use [`PhasePoint::checked_add`] for untrusted input.
    fn add(self, rhs: &PhasePoint) -> PhasePoint {
        assert_eq!(self.dim(), rhs.dim(), "phase point dimension mismatch");
        PhasePoint {
            first: self.first.iter().zip(&rhs.first).map(|(a, b)| a + b).collect(),
            second: self.second.iter().zip(&rhs.second).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &PhasePoint {
    type Output = PhasePoint;

    fn sub(self, rhs: &PhasePoint) -> PhasePoint {
        self + &(-rhs)
    }
}

impl Neg for &PhasePoint {
    type Output = PhasePoint;

    fn neg(self) -> PhasePoint {
        PhasePoint {
            first: self.first.iter().map(|x| -x).collect(),
            second: self.second.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Debug for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let block = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "(({}), ({}))", block(&self.first), block(&self.second))
    }
}

/// Complex number with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalComplex {
    pub re: Rational,
    pub im: Rational,
}

impl RationalComplex {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn i() -> Self {
        Self { re: Rational::zero(), im: Rational::one() }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SymplecticSpace {
    /// `ℝⁿ × ℝⁿ` with `β(y, z) = ½(⟨y₁, z₂⟩ − ⟨y₂, z₁⟩)`.
    StandardPairs { n: usize },
    /// `ℤ²` with bicharacter `e^{iθ(m₁n₂ − m₂n₁)}`.
    LatticeZ2 { theta: f64 },
}

impl SymplecticSpace {
    pub fn standard(n: usize) -> Self {
        SymplecticSpace::StandardPairs { n }
    }

    /// Block dimension of the points on this space.
    pub fn dim(&self) -> usize {
        match self {
            SymplecticSpace::StandardPairs { n } => *n,
            SymplecticSpace::LatticeZ2 { .. } => 1,
        }
    }

    pub fn is_standard(&self) -> bool {
        matches!(self, SymplecticSpace::StandardPairs { .. })
    }

    pub fn check_point(&self, z: &PhasePoint) -> Result<()> {
        if z.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: z.dim() });
        }
        if let SymplecticSpace::LatticeZ2 { .. } = self {
            if !z.coords().all(|c| c.is_integer()) {
                return Err(Error::InvalidInput(format!("lattice point {z} is not integral")));
            }
        }
        Ok(())
    }

    /// Exact value of the form. On the lattice this is the integer
    /// `m₁n₂ − m₂n₁`; the twisting angle is `θ` times it.
    pub fn beta(&self, y: &PhasePoint, z: &PhasePoint) -> Result<Rational> {
        self.check_point(y)?;
        self.check_point(z)?;
        Ok(match self {
            SymplecticSpace::StandardPairs { .. } => half_form(y, z),
            SymplecticSpace::LatticeZ2 { .. } => {
                &y.first[0] * &z.second[0] - &y.second[0] * &z.first[0]
            }
        })
    }

    /// Angle of the twisting phase in `W(y)W(z) = e^{i·angle} W(y+z)`.
    pub fn phase_angle(&self, y: &PhasePoint, z: &PhasePoint) -> Result<f64> {
        let b = rational_to_f64(&self.beta(y, z)?);
        Ok(match self {
            SymplecticSpace::StandardPairs { .. } => b,
            SymplecticSpace::LatticeZ2 { theta } => theta * b,
        })
    }

    /// Unit vectors `e_1..e_2n` (first block, then second).
    pub fn basis(&self) -> Vec<PhasePoint> {
        let n = self.dim();
        (0..2 * n)
            .map(|k| {
                let mut coords = vec![Rational::zero(); 2 * n];
                coords[k] = Rational::one();
                PhasePoint::from_coords(coords).expect("basis vector has 2n coordinates")
            })
            .collect()
    }

    /// True iff `β(gᵢ, gⱼ) = 0` for all pairs, i.e. `span(L) ⊆ L^β`.
    pub fn isotropy_check(&self, generators: &[PhasePoint]) -> Result<bool> {
        Ok(self.first_non_isotropic_pair(generators)?.is_none())
    }

    /// First pair `(i, j, β(gᵢ, gⱼ))` with non-zero form, if any.
    pub fn first_non_isotropic_pair(
        &self,
        generators: &[PhasePoint],
    ) -> Result<Option<(usize, usize, Rational)>> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("isotropy check needs at least one generator".into()));
        }
        for (i, gi) in generators.iter().enumerate() {
            for (j, gj) in generators.iter().enumerate().skip(i + 1) {
                let b = self.beta(gi, gj)?;
                if !b.is_zero() {
                    return Ok(Some((i, j, b)));
                }
            }
        }
        // diagonal terms vanish by skew-symmetry, but validate dimensions anyway
        self.check_point(&generators[0])?;
        Ok(None)
    }

    /// Exact basis of `L^β = { z | β(z, g) = 0 for every generator g }`.
    pub fn beta_annihilator(&self, generators: &[PhasePoint]) -> Result<Vec<PhasePoint>> {
        let n = match self {
            SymplecticSpace::StandardPairs { n } => *n,
            SymplecticSpace::LatticeZ2 { .. } => {
                return Err(Error::Unsupported("beta annihilator on the lattice".into()))
            }
        };
        let half = rational_from_frac(1, 2);
        // β(z, g) = ½⟨z₁, g₂⟩ − ½⟨z₂, g₁⟩, one row per generator
        let mut rows = Vec::with_capacity(generators.len());
        for g in generators {
            self.check_point(g)?;
            let row: Vec<Rational> = g
                .second
                .iter()
                .map(|c| c * &half)
                .chain(g.first.iter().map(|c| -(c * &half)))
                .collect();
            rows.push(row);
        }
        null_space(rows, 2 * n)
            .into_iter()
            .map(PhasePoint::from_coords)
            .collect()
    }

    /// Scalar action of `r + is` on `z`: `(r z₁ − s z₂, s z₁ + r z₂)`.
    pub fn complex_scale(&self, z: &PhasePoint, scalar: &RationalComplex) -> Result<PhasePoint> {
        self.require_standard()?;
        self.check_point(z)?;
        let (r, s) = (&scalar.re, &scalar.im);
        let first = z.first.iter().zip(&z.second).map(|(a, b)| r * a - s * b).collect();
        let second = z.first.iter().zip(&z.second).map(|(a, b)| s * a + r * b).collect();
        PhasePoint::new(first, second)
    }

    /// `(y, z)_ℂ := β(y, iz) + iβ(y, z)`; the real part is half the Euclidean product.
    pub fn complex_inner(&self, y: &PhasePoint, z: &PhasePoint) -> Result<RationalComplex> {
        let iz = self.complex_scale(z, &RationalComplex::i())?;
        Ok(RationalComplex::new(self.beta(y, &iz)?, self.beta(y, z)?))
    }

    /// Standard inner product `⟨y₁, z₁⟩ + ⟨y₂, z₂⟩`.
    pub fn euclidean_inner(&self, y: &PhasePoint, z: &PhasePoint) -> Result<Rational> {
        self.check_point(y)?;
        self.check_point(z)?;
        Ok(dot(&y.first, &z.first) + dot(&y.second, &z.second))
    }

    fn require_standard(&self) -> Result<()> {
        if self.is_standard() {
            Ok(())
        } else {
            Err(Error::Unsupported("complex structure on the lattice".into()))
        }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rational::zero(), |s, t| s + t)
}

fn half_form(y: &PhasePoint, z: &PhasePoint) -> Rational {
    (dot(&y.first, &z.second) - dot(&y.second, &z.first)) * rational_from_frac(1, 2)
}

/// Null space of a rational matrix (rows × `cols`) by exact Gauss-Jordan.
pub(crate) fn null_space(mut rows: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[row][f].clone();
            }
            v
        })
        .collect()
}

/// Rank of the span of a list of points, exact.
pub fn span_rank(points: &[PhasePoint]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let cols = 2 * first.dim();
    let rows: Vec<Vec<Rational>> = points.iter().map(|p| p.coords().cloned().collect()).collect();
    // rank(A) = cols − dim ker(A)
    cols - null_space(rows, cols).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: (i64, i64), b: (i64, i64)) -> PhasePoint {
        PhasePoint::from_fracs(&[a], &[b]).unwrap()
    }

    #[test]
    fn beta_examples() {
        let s = SymplecticSpace::standard(1);
        let y = PhasePoint::from_ints(&[1], &[0]).unwrap();
        let z = PhasePoint::from_ints(&[0], &[1]).unwrap();
        assert_eq!(s.beta(&y, &z).unwrap(), rational_from_frac(1, 2));
        let y = PhasePoint::from_ints(&[2], &[3]).unwrap();
        let z = PhasePoint::from_ints(&[5], &[7]).unwrap();
        assert_eq!(s.beta(&y, &z).unwrap(), rational_from_frac(-1, 2));
        assert!(s.beta(&z, &z).unwrap().is_zero());
    }

    #[test]
    fn beta_rejects_dimension_mismatch() {
        let s = SymplecticSpace::standard(2);
        let y = PhasePoint::zero(2);
        let z = PhasePoint::zero(1);
        assert!(matches!(s.beta(&y, &z), Err(Error::DimensionMismatch { .. })));
        assert!(PhasePoint::from_ints(&[1, 2], &[3]).is_err());
    }

    #[test]
    fn complex_structure_examples() {
        let s = SymplecticSpace::standard(1);
        let y = PhasePoint::from_ints(&[1], &[0]).unwrap();
        let iy = s.complex_scale(&y, &RationalComplex::i()).unwrap();
        assert_eq!(iy, PhasePoint::from_ints(&[0], &[1]).unwrap());

        let yy = s.complex_inner(&y, &y).unwrap();
        assert_eq!(yy, RationalComplex::real(rational_from_frac(1, 2)));

        let yz = s.complex_inner(&y, &iy).unwrap();
        assert_eq!(yz, RationalComplex::new(Rational::zero(), rational_from_frac(1, 2)));
        // half of the Euclidean product
        assert_eq!(s.euclidean_inner(&y, &y).unwrap(), Rational::one());
    }

    #[test]
    fn isotropy_examples() {
        let s = SymplecticSpace::standard(1);
        assert!(s.isotropy_check(&[p((0, 1), (1, 1))]).unwrap());
        assert!(!s.isotropy_check(&[p((1, 1), (0, 1)), p((0, 1), (1, 1))]).unwrap());
        assert!(s.isotropy_check(&[PhasePoint::zero(1)]).unwrap());
        assert!(s.isotropy_check(&[]).is_err());
    }

    #[test]
    fn annihilator_examples() {
        let s = SymplecticSpace::standard(1);
        let l = [p((0, 1), (1, 1))];
        assert_eq!(s.beta_annihilator(&l).unwrap(), vec![p((0, 1), (1, 1))]);

        let whole = s.beta_annihilator(&[PhasePoint::zero(1)]).unwrap();
        assert_eq!(whole.len(), 2);

        let none = s.beta_annihilator(&[p((1, 1), (0, 1)), p((0, 1), (1, 1))]).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn annihilator_of_lagrangian_in_two_dims() {
        let s = SymplecticSpace::standard(2);
        let l = [
            PhasePoint::from_ints(&[0, 0], &[1, 0]).unwrap(),
            PhasePoint::from_ints(&[0, 0], &[0, 1]).unwrap(),
        ];
        let ann = s.beta_annihilator(&l).unwrap();
        assert_eq!(ann.len(), 2);
        for a in &ann {
            assert!(a.first_is_zero());
            for g in &l {
                assert!(s.beta(a, g).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn nondegenerate_on_basis() {
        for n in 1..=4 {
            let s = SymplecticSpace::standard(n);
            let basis = s.basis();
            for e in &basis {
                assert!(basis.iter().any(|f| !s.beta(e, f).unwrap().is_zero()));
            }
        }
    }

    #[test]
    fn lattice_form_is_integer_determinant() {
        let s = SymplecticSpace::LatticeZ2 { theta: 0.3 };
        let m = PhasePoint::from_ints(&[2], &[1]).unwrap();
        let k = PhasePoint::from_ints(&[-1], &[3]).unwrap();
        assert_eq!(s.beta(&m, &k).unwrap(), Rational::from_integer(7.into()));
        assert!((s.phase_angle(&m, &k).unwrap() - 2.1).abs() < 1e-15);
        let frac = p((1, 2), (0, 1));
        assert!(s.check_point(&frac).is_err());
    }

    #[test]
    fn span_rank_counts_independent_points() {
        let pts = [p((1, 1), (0, 1)), p((2, 1), (0, 1)), p((0, 1), (3, 1))];
        assert_eq!(span_rank(&pts), 2);
        assert_eq!(span_rank(&[]), 0);
    }
}
