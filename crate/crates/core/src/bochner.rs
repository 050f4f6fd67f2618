//! Finite-dimensional pairing `⟨δ_{L₀}, F̂φ⟩ = (2π)^{dim L₀} ⟨δ_{L₀^⊥}, φ⟩`
//! for axis-aligned `L₀` and a centred Gaussian `φ(ξ) = exp(−½ Σ ξᵢ²/sᵢ)`.
//!
//! Both sides are computed by trapezoid quadrature (spectrally accurate for
//! Gaussians); `F̂φ` itself is a quadrature, not the closed form.

use serde::Serialize;

use crate::error::{Error, Result};

/// Half-width of every quadrature window in standard deviations.
pub const WINDOW_SIGMAS: f64 = 12.0;
/// Quadrature nodes per unit standard deviation.
pub const NODES_PER_SIGMA: usize = 24;

#[derive(Clone, Debug, Serialize)]
pub struct BochnerReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `(2π)^{|L₀|} Π_{i∉L₀} √(2π sᵢ)`.
    pub closed_form: f64,
    pub relative_deviation: f64,
}

fn trapezoid(f: impl Fn(f64) -> f64, half_width: f64, nodes: usize) -> f64 {
    let h = 2.0 * half_width / nodes as f64;
    let inner: f64 = (1..nodes).map(|k| f(-half_width + h * k as f64)).sum();
    h * (inner + 0.5 * (f(-half_width) + f(half_width)))
}

fn nodes_for(width_in_sigmas: f64) -> usize {
    (width_in_sigmas * NODES_PER_SIGMA as f64).ceil() as usize
}

/// `F̂φᵢ(x) = ∫ e^{−ixξ} e^{−ξ²/(2s)} dξ` by quadrature (the sine part vanishes by symmetry).
fn axis_transform(s: f64, x: f64) -> f64 {
    let sigma = s.sqrt();
    trapezoid(|xi| (x * xi).cos() * (-xi * xi / (2.0 * s)).exp(), WINDOW_SIGMAS * sigma, nodes_for(2.0 * WINDOW_SIGMAS))
}

fn axis_integral(s: f64) -> f64 {
    let sigma = s.sqrt();
    trapezoid(|xi| (-xi * xi / (2.0 * s)).exp(), WINDOW_SIGMAS * sigma, nodes_for(2.0 * WINDOW_SIGMAS))
}

/// Checks the pairing for `φ` with diagonal variances `variances` and `L₀`
/// spanned by the coordinate axes in `l0_axes`.
pub fn finite_bochner_check(variances: &[f64], l0_axes: &[usize]) -> Result<BochnerReport> {
    let d = variances.len();
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    if variances.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::InvalidInput("variances must be positive".into()));
    }
    let mut in_l0 = vec![false; d];
    for &i in l0_axes {
        if i >= d || in_l0[i] {
            return Err(Error::InvalidInput(format!("invalid or repeated axis {i} for d = {d}")));
        }
        in_l0[i] = true;
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut lhs = 1.0;
    let mut rhs = 1.0;
    let mut closed_form = 1.0;
    for (i, &s) in variances.iter().enumerate() {
        if in_l0[i] {
            // ∫ F̂φᵢ(x) dx over the axis; F̂φᵢ has width 1/σ
            let width = WINDOW_SIGMAS / s.sqrt();
            lhs *= trapezoid(|x| axis_transform(s, x), width, nodes_for(2.0 * WINDOW_SIGMAS));
            rhs *= two_pi;
            closed_form *= two_pi;
        } else {
            // F̂φᵢ at 0 on the left, ∫φᵢ on the right
            lhs *= axis_transform(s, 0.0);
            rhs *= axis_integral(s);
            closed_form *= (two_pi * s).sqrt();
        }
    }
    Ok(BochnerReport { lhs, rhs, closed_form, relative_deviation: (lhs - rhs).abs() / rhs.abs() })
}
