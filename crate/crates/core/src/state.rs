//! States given by generating functions `g(z) = ω(W(z))`.
//!
//! A function `g` with `g(0) = 1` defines a state on `span{W(z)}` exactly
//! when the kernel `h(x, y) = g(x − y)·e^{−iβ(x,y)}` is positive
//! semidefinite. Everything here works on finite point sets.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::scalar::{rational_from_f64, rational_from_int, rational_to_real, unit_phase, Real};
use crate::symplectic::{PhasePoint, SymplecticSpace};
use crate::weyl::WeylElement;

/// Tolerance for "equals 1" in Dirac diagnostics.
pub const DIRAC_TOL: f64 = 1e-12;
/// Default PSD tolerance on the smallest eigenvalue.
pub const PSD_TOL: f64 = 1e-9;
/// Hermiticity required before an eigen-solve.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Jump threshold of the regularity classifier.
pub const JUMP_THRESHOLD: f64 = 0.5;
/// Number of random points used to vet a custom generating function.
pub const CUSTOM_SPOT_CHECKS: usize = 100;

pub type Callback<T> = Arc<dyn Fn(&PhasePoint) -> Complex<T> + Send + Sync>;

#[derive(Clone)]
pub enum Variant<T> {
    /// `g₀(z) = 1` if `z₁ = 0`, else `0`: the Dirac state for `L = {0} × Q`.
    DiracG0,
    /// `g_l(z) = exp(−(l²/4)‖z₁‖² − ‖z₂‖²/(4l²))`.
    Quasifree(T),
    /// `exp(−‖z‖²/4)`.
    Fock,
    Custom(Callback<T>),
}

impl<T: fmt::Debug> fmt::Debug for Variant<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::DiracG0 => write!(f, "DiracG0"),
            Variant::Quasifree(l) => write!(f, "Quasifree({l:?})"),
            Variant::Fock => write!(f, "Fock"),
            Variant::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratingFunction<T> {
    variant: Variant<T>,
    space: SymplecticSpace,
}

impl<T: Real> GeneratingFunction<T> {
    pub fn dirac_g0(n: usize) -> Self {
        Self { variant: Variant::DiracG0, space: SymplecticSpace::standard(n) }
    }

    pub fn quasifree(n: usize, l: T) -> Result<Self> {
        if !(l > T::zero()) || !l.is_finite() {
            return Err(Error::InvalidInput(format!("quasifree parameter must be positive, got {l}")));
        }
        Ok(Self { variant: Variant::Quasifree(l), space: SymplecticSpace::standard(n) })
    }

    pub fn fock(n: usize) -> Self {
        Self { variant: Variant::Fock, space: SymplecticSpace::standard(n) }
    }

    /// Wraps a user function after spot-checking `g(0) = 1`, `g(−z) = conj g(z)`
    /// and `|g| ≤ 1` on [`CUSTOM_SPOT_CHECKS`] seeded random points.
    /// Positivity is not checked here; run [`positivity_check`] for that.
    pub fn custom(
        n: usize,
        f: impl Fn(&PhasePoint) -> Complex<T> + Send + Sync + 'static,
        seed: u64,
    ) -> Result<Self> {
        let g = Self { variant: Variant::Custom(Arc::new(f)), space: SymplecticSpace::standard(n) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<PhasePoint> =
            (0..CUSTOM_SPOT_CHECKS).map(|_| PhasePoint::random(&mut rng, n, 8, 4)).collect();
        g.invariant_violation(&points, T::of(1e-12))
            .map_or(Ok(g), |msg| Err(Error::InvalidGeneratingFunction(msg)))
    }

    pub fn variant(&self) -> &Variant<T> {
        &self.variant
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn is_dirac_g0(&self) -> bool {
        matches!(self.variant, Variant::DiracG0)
    }

    pub fn name(&self) -> String {
        match &self.variant {
            Variant::DiracG0 => "g0".into(),
            Variant::Quasifree(l) => format!("g_l(l={l})"),
            Variant::Fock => "fock".into(),
            Variant::Custom(_) => "custom".into(),
        }
    }

    /// `g(z)`.
    pub fn eval(&self, z: &PhasePoint) -> Result<Complex<T>> {
        self.space.check_point(z)?;
        Ok(self.eval_unchecked(z))
    }

    fn eval_unchecked(&self, z: &PhasePoint) -> Complex<T> {
        match &self.variant {
            Variant::DiracG0 => {
                if z.first_is_zero() {
                    Complex::one()
                } else {
                    Complex::zero()
                }
            }
            Variant::Quasifree(l) => {
                let a: T = rational_to_real(&z.first_norm_sq());
                let b: T = rational_to_real(&z.second_norm_sq());
                let four = T::of(4.0);
                let l2 = *l * *l;
                Complex::new((-(l2 / four) * a - b / (four * l2)).exp(), T::zero())
            }
            Variant::Fock => {
                let r: T = rational_to_real(&z.norm_sq());
                Complex::new((-r / T::of(4.0)).exp(), T::zero())
            }
            Variant::Custom(f) => f(z),
        }
    }

    /// Coefficient `c` in `g(φ) = exp(−c‖φ‖²)` along real-part directions, when `g` is Gaussian there.
    pub fn real_gaussian_coefficient(&self) -> Option<T> {
        match &self.variant {
            Variant::Quasifree(l) => Some(*l * *l / T::of(4.0)),
            Variant::Fock => Some(T::of(0.25)),
            _ => None,
        }
    }

    /// First violated invariant among `g(0) = 1`, hermiticity and `|g| ≤ 1`.
    pub fn invariant_violation(&self, points: &[PhasePoint], tol: T) -> Option<String> {
        let g0 = self.eval_unchecked(&PhasePoint::zero(self.space.dim()));
        if (g0 - Complex::one()).norm() > tol {
            return Some(format!("g(0) = {g0}, expected 1"));
        }
        for z in points {
            if self.space.check_point(z).is_err() {
                return Some(format!("point {z} does not belong to the space"));
            }
            let v = self.eval_unchecked(z);
            if !(v.norm() <= T::one() + tol) {
                return Some(format!("|g({z})| = {} exceeds 1", v.norm()));
            }
            let w = self.eval_unchecked(&-z);
            if (w - v.conj()).norm() > tol {
                return Some(format!("g(-z) != conj g(z) at z = {z}"));
            }
        }
        None
    }
}

/// `ω(A) = Σ c_z g(z)`.
pub fn evaluate_state<T: Real>(g: &GeneratingFunction<T>, a: &WeylElement<T>) -> Result<Complex<T>> {
    if a.space() != g.space() {
        return Err(Error::SpaceMismatch);
    }
    Ok(a.terms().fold(Complex::zero(), |acc, (z, &c)| acc + c * g.eval_unchecked(z)))
}

/// `M_jk = g(x_j − x_k)·e^{−iβ(x_j, x_k)}`.
pub fn kernel_matrix<T: Real>(g: &GeneratingFunction<T>, points: &[PhasePoint]) -> Result<CMatrix<T>> {
    let space = g.space();
    for x in points {
        space.check_point(x)?;
    }
    let mut m = CMatrix::zeros(points.len(), points.len());
    for (j, xj) in points.iter().enumerate() {
        for (k, xk) in points.iter().enumerate() {
            let phase: Complex<T> = unit_phase(-space.phase_angle(xj, xk)?);
            m[(j, k)] = g.eval_unchecked(&(xj - xk)) * phase;
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PSD")]
    Psd,
    Indefinite,
}

#[derive(Clone, Debug)]
pub struct PositivityReport<T> {
    pub points: Vec<PhasePoint>,
    pub min_eigenvalue: T,
    pub tolerance: T,
    pub verdict: Verdict,
}

/// Smallest eigenvalue of a Hermitian matrix and the PSD verdict `min ≥ −tol`.
pub fn positivity_check<T: Real>(m: &CMatrix<T>, tol: T) -> Result<PositivityReport<T>> {
    let eig = hermitian_eigen(m, T::of(HERMITIAN_TOL))?;
    let min_eigenvalue = eig.min();
    let verdict = if min_eigenvalue >= -tol { Verdict::Psd } else { Verdict::Indefinite };
    Ok(PositivityReport { points: Vec::new(), min_eigenvalue, tolerance: tol, verdict })
}

/// [`kernel_matrix`] followed by [`positivity_check`], keeping the points in the report.
pub fn kernel_positivity<T: Real>(
    g: &GeneratingFunction<T>,
    points: &[PhasePoint],
    tol: T,
) -> Result<PositivityReport<T>> {
    let m = kernel_matrix(g, points)?;
    let mut report = positivity_check(&m, tol)?;
    report.points = points.to_vec();
    Ok(report)
}

/// True iff `g(y) = 1` (to [`DIRAC_TOL`]) for every integer combination of the
/// generators with coefficients in `[−radius, radius]`.
pub fn dirac_check<T: Real>(
    g: &GeneratingFunction<T>,
    generators: &[PhasePoint],
    radius: u32,
) -> Result<bool> {
    let space = g.space();
    if let Some((i, j, value)) = space.first_non_isotropic_pair(generators)? {
        return Err(Error::NotIsotropic { i, j, value: value.to_string() });
    }
    let tol = T::of(DIRAC_TOL);
    let r = radius as i64;
    let mut coeffs = vec![-r; generators.len()];
    loop {
        let y = generators
            .iter()
            .zip(&coeffs)
            .fold(PhasePoint::zero(space.dim()), |acc, (gen, &c)| &acc + &gen.scale(&rational_from_int(c)));
        if (g.eval_unchecked(&y) - Complex::one()).norm() > tol {
            return Ok(false);
        }
        // odometer over [−r, r]^k
        let mut idx = 0;
        loop {
            if idx == coeffs.len() {
                return Ok(true);
            }
            if coeffs[idx] < r {
                coeffs[idx] += 1;
                break;
            }
            coeffs[idx] = -r;
            idx += 1;
        }
    }
}

/// `max(|ω(A W(y)) − ω(A)|, |ω(W(y) A) − ω(A)|)`.
pub fn dirac_invariance_check<T: Real>(
    g: &GeneratingFunction<T>,
    a: &WeylElement<T>,
    y: &PhasePoint,
) -> Result<T> {
    let wy = WeylElement::generator(g.space(), y.clone())?;
    let base = evaluate_state(g, a)?;
    let right = evaluate_state(g, &a.weyl_mul(&wy)?)?;
    let left = evaluate_state(g, &wy.weyl_mul(a)?)?;
    Ok((right - base).norm().max((left - base).norm()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    ContinuousAt0,
    JumpAt0,
}

#[derive(Clone, Debug)]
pub struct RegularityProbe<T> {
    pub classification: Regularity,
    /// `(t, g(tz))` in grid order.
    pub samples: Vec<(f64, Complex<T>)>,
    /// Largest `|g(tz) − 1|` over the near-zero window.
    pub window_max_deviation: T,
}

/// Samples `t ↦ g(tz)` and classifies the behaviour at `t = 0`.
///
/// The near-zero window is the finest quarter (at least one) of the
/// non-zero grid values by `|t|`. `ContinuousAt0` iff `|g(tz) − 1| ≤ 1/2`
/// throughout the window.
pub fn regularity_probe<T: Real>(
    g: &GeneratingFunction<T>,
    z: &PhasePoint,
    t_grid: &[f64],
) -> Result<RegularityProbe<T>> {
    g.space().check_point(z)?;
    if !t_grid.contains(&0.0) {
        return Err(Error::InvalidInput("regularity grid must contain t = 0".into()));
    }
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let tr = rational_from_f64(t)
            .ok_or_else(|| Error::InvalidInput(format!("grid value {t} is not finite")))?;
        samples.push((t, g.eval_unchecked(&z.scale(&tr))));
    }
    let mut near: Vec<&(f64, Complex<T>)> = samples.iter().filter(|(t, _)| *t != 0.0).collect();
    if near.is_empty() {
        return Err(Error::InvalidInput("regularity grid needs non-zero values".into()));
    }
    near.sort_by(|a, b| a.0.abs().total_cmp(&b.0.abs()));
    let window = (near.len() / 4).max(1);
    let window_max_deviation = near[..window]
        .iter()
        .map(|(_, v)| (*v - Complex::one()).norm())
        .fold(T::zero(), T::max);
    let classification = if window_max_deviation <= T::of(JUMP_THRESHOLD) {
        Regularity::ContinuousAt0
    } else {
        Regularity::JumpAt0
    };
    Ok(RegularityProbe { classification, samples, window_max_deviation })
}

/// `t ∈ {0, ±2^{−k} : 0 ≤ k ≤ k_max}`.
pub fn dyadic_grid(k_max: u32) -> Vec<f64> {
    let mut grid = vec![0.0];
    for k in 0..=k_max {
        let t = 2f64.powi(-(k as i32));
        grid.push(t);
        grid.push(-t);
    }
    grid
}

#[derive(Clone, Debug)]
pub struct PhaseIdentity<T> {
    /// Max over the grid of both `|e^{∓itβ(y₀,z₀)} g(z₀ + ty₀) − g(z₀)|`.
    pub max_deviation: T,
    /// `g(z₀)`, forced to vanish when the deviation does.
    pub value_at_z0: Complex<T>,
}

/// The two-sided phase identity a Dirac state must satisfy along `y₀ ∈ L`.
pub fn phase_identity_check<T: Real>(
    g: &GeneratingFunction<T>,
    y0: &PhasePoint,
    z0: &PhasePoint,
    t_grid: &[f64],
) -> Result<PhaseIdentity<T>> {
    let space = g.space();
    let beta = space.phase_angle(y0, z0)?;
    if beta == 0.0 {
        return Err(Error::VacuousPhaseIdentity);
    }
    if !dirac_check(g, std::slice::from_ref(y0), 2)? {
        return Err(Error::InvalidInput(format!("g is not Dirac along y0 = {y0}")));
    }
    let gz0 = g.eval_unchecked(z0);
    let mut worst = T::zero();
    for &t in t_grid {
        let tr = rational_from_f64(t)
            .ok_or_else(|| Error::InvalidInput(format!("grid value {t} is not finite")))?;
        let shifted = g.eval_unchecked(&(z0 + &y0.scale(&tr)));
        let minus: Complex<T> = unit_phase(-t * beta);
        let plus: Complex<T> = unit_phase(t * beta);
        worst = worst.max((minus * shifted - gz0).norm()).max((plus * shifted - gz0).norm());
    }
    Ok(PhaseIdentity { max_deviation: worst, value_at_z0: gz0 })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow<T> {
    pub l: T,
    pub value: T,
    pub deviation: T,
}

/// `(l, g_l(ψ), |g_l(ψ) − g₀(ψ)|)` for increasing `l`.
pub fn quasifree_convergence<T: Real>(psi: &PhasePoint, l_values: &[T]) -> Result<Vec<ConvergenceRow<T>>> {
    if l_values.iter().any(|&l| !(l > T::zero())) {
        return Err(Error::InvalidInput("quasifree parameters must be positive".into()));
    }
    if l_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput("quasifree parameters must be increasing".into()));
    }
    let n = psi.dim();
    let g0 = GeneratingFunction::<T>::dirac_g0(n).eval(psi)?;
    l_values
        .iter()
        .map(|&l| {
            let v = GeneratingFunction::quasifree(n, l)?.eval(psi)?;
            Ok(ConvergenceRow { l, value: v.re, deviation: (v - g0).norm() })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Negligibility {
    Negligible,
    NotNegligible,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaledValue {
    pub eps: f64,
    /// `ln g = −c·ε^{−n}‖φ‖²`; kept in log form since the value underflows quickly.
    pub log_value: f64,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderFit {
    pub m: u32,
    /// `ln C_m = max over the grid of (ln g − m ln ε)`.
    pub log_constant: f64,
    /// Grid points where `g ≤ ε^m` holds with `C_m = 1`.
    pub unit_constant_holds: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColombeauReport {
    pub rows: Vec<ScaledValue>,
    pub orders: Vec<OrderFit>,
    /// Log-log slope of `g` against `ε` at the finest end of the grid.
    pub fitted_order: f64,
    pub verdict: Negligibility,
}

impl ColombeauReport {
    /// True iff `g(ε) ≤ ε^m` holds on the whole grid for every tested `m`.
    pub fn unit_constant_bound_holds(&self) -> bool {
        self.orders.iter().all(|o| o.unit_constant_holds.iter().all(|&b| b))
    }
}

/// Moderateness test of `exp(−c‖φ_ε‖²)` for the scaled mollifier
/// `‖φ_ε‖² = ε^{−n}‖φ‖²`.
///
/// The verdict is `Negligible` iff the fitted order at the finest end of
/// the grid is at least `m_max`, i.e. the value decays faster than every
/// `ε^m`, `m ≤ m_max`, as `ε → 0`.
pub fn colombeau_scaling_test(
    exponent_coefficient: f64,
    mollifier_norm_sq: f64,
    n: u32,
    eps_grid: &[f64],
    m_max: u32,
) -> Result<ColombeauReport> {
    if eps_grid.is_empty() {
        return Err(Error::InvalidInput("empty epsilon grid".into()));
    }
    if eps_grid.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::InvalidInput("epsilon grid must lie in (0, 1]".into()));
    }
    if m_max < 1 {
        return Err(Error::InvalidInput("m_max must be at least 1".into()));
    }
    let log_value = |eps: f64| -exponent_coefficient * eps.powi(-(n as i32)) * mollifier_norm_sq;
    let mut rows: Vec<ScaledValue> = eps_grid
        .iter()
        .map(|&eps| {
            let lv = log_value(eps);
            ScaledValue { eps, log_value: lv, value: lv.exp() }
        })
        .collect();
    rows.sort_by(|a, b| b.eps.total_cmp(&a.eps));

    let orders = (1..=m_max)
        .map(|m| {
            let margins: Vec<f64> = rows.iter().map(|r| r.log_value - m as f64 * r.eps.ln()).collect();
            OrderFit {
                m,
                log_constant: margins.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                unit_constant_holds: margins.iter().map(|&x| x <= 0.0).collect(),
            }
        })
        .collect();

    let fitted_order = match rows.as_slice() {
        [.., a, b] if a.eps != b.eps => (a.log_value - b.log_value) / (a.eps.ln() - b.eps.ln()),
        // single point: exact local slope d ln g / d ln ε of the closed form
        _ => {
            let last = rows.last().expect("non-empty grid");
            n as f64 * exponent_coefficient * mollifier_norm_sq * last.eps.powi(-(n as i32))
        }
    };
    let verdict = if fitted_order >= m_max as f64 {
        Negligibility::Negligible
    } else {
        Negligibility::NotNegligible
    };
    Ok(ColombeauReport { rows, orders, fitted_order, verdict })
}

impl<T: Real> GeneratingFunction<T> {
    /// [`colombeau_scaling_test`] with the coefficient read off a Gaussian-type `g`.
    pub fn colombeau_scaling_test(
        &self,
        mollifier_norm_sq: f64,
        n: u32,
        eps_grid: &[f64],
        m_max: u32,
    ) -> Result<ColombeauReport> {
        let c = self.real_gaussian_coefficient().ok_or_else(|| {
            Error::Unsupported(format!("{} has no closed-form Gaussian exponent", self.name()))
        })?;
        colombeau_scaling_test(c.as_f64(), mollifier_norm_sq, n, eps_grid, m_max)
    }
}
