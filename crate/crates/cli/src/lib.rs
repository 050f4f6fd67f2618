//! Verification suites behind the `weyl-lab verify` command.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use weyl_lab_core::bochner::finite_bochner_check;
use weyl_lab_core::gaussian::{gaussian_mc_functional, moment_check, product_form_check};
use weyl_lab_core::gns::{gns_build, gns_fixpoint_residual, gns_orthogonality_scan, gram_matrix, NULL_TOL};
use weyl_lab_core::measure::{
    duality_check, fourier_atomic, identity21_check, identity23_check, product_lemma_check,
};
use weyl_lab_core::scalar::{rational_from_f64, rational_from_frac, rational_from_int, rational_to_f64};
use weyl_lab_core::schrodinger::{c0_decay_scan, grid_weyl_relation_deviation, vector_function};
use weyl_lab_core::state::{
    dirac_check, dirac_invariance_check, dyadic_grid, evaluate_state, kernel_matrix, kernel_positivity,
    phase_identity_check, quasifree_convergence, regularity_probe, Negligibility, Regularity, Verdict, PSD_TOL,
};
use weyl_lab_core::{
    AtomicMeasure, GaussianSpec, GeneratingFunction, GridRep, PhasePoint, SplitSpace, SymplecticSpace, TorusRep,
    WeylElement,
};

pub const SCHEMA_VERSION: &str = "1";

type G = GeneratingFunction<f64>;
type W = WeylElement<f64>;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("unknown suite {0:?} (expected weyl, states, gns, torus, measures or all)")]
    UnknownSuite(String),
    #[error("unknown check {0:?} in tolerance override")]
    UnknownCheck(String),
    #[error("tolerance for {name} must be positive and finite, got {value}")]
    BadTolerance { name: String, value: f64 },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{check}: {source}")]
    Check { check: String, source: weyl_lab_core::Error },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Weyl,
    States,
    Gns,
    Torus,
    Measures,
    All,
}

impl Suite {
    pub const MODULES: [Suite; 5] = [Suite::Weyl, Suite::States, Suite::Gns, Suite::Torus, Suite::Measures];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Weyl => "weyl",
            Suite::States => "states",
            Suite::Gns => "gns",
            Suite::Torus => "torus",
            Suite::Measures => "measures",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        Ok(match s {
            "weyl" => Suite::Weyl,
            "states" => Suite::States,
            "gns" => Suite::Gns,
            "torus" => Suite::Torus,
            "measures" => Suite::Measures,
            "all" => Suite::All,
            other => return Err(HarnessError::UnknownSuite(other.into())),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub points: Option<Vec<PhasePoint>>,
    pub measure: Option<AtomicMeasure<f64>>,
}

impl SuiteConfig {
    pub fn new(suite: Suite, seed: u64) -> Self {
        Self { suite, seed, tolerances: BTreeMap::new(), points: None, measure: None }
    }

    /// Validates tolerance overrides against the known check ids.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let known: Vec<&str> = all_checks().iter().map(|c| c.id).collect();
        for (name, &value) in &self.tolerances {
            if !known.contains(&name.as_str()) {
                return Err(HarnessError::UnknownCheck(name.clone()));
            }
            if !(value > 0.0 && value.is_finite()) {
                return Err(HarnessError::BadTolerance { name: name.clone(), value });
            }
        }
        if let Some(points) = &self.points {
            if points.is_empty() {
                return Err(HarnessError::Input("point file contains no points".into()));
            }
            let n = points[0].dim();
            if points.iter().any(|p| p.dim() != n) {
                return Err(HarnessError::Input("points in the point file differ in dimension".into()));
            }
            for (i, p) in points.iter().enumerate() {
                if points[..i].contains(p) {
                    return Err(HarnessError::Input(format!("duplicate point {p} in point file")));
                }
            }
        }
        if let Some(m) = &self.measure {
            if m.atoms().is_empty() {
                return Err(HarnessError::Input("measure file has no atoms".into()));
            }
        }
        Ok(())
    }
}

/// Parses `name=value`.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), HarnessError> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| HarnessError::Input(format!("tolerance override {s:?} is not name=value")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| HarnessError::Input(format!("tolerance value {value:?} is not a number")))?;
    Ok((name.trim().to_string(), value))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The identity under test, as a formula.
    pub anchor: String,
    pub verdict: Outcome,
    pub extremal_value: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stderr: Option<f64>,
    pub runtime_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: String,
    pub suite: Suite,
    pub seed: u64,
    pub overall: Outcome,
    pub records: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.overall == Outcome::Pass
    }

    /// Copy with every runtime zeroed, for determinism comparisons.
    pub fn without_runtimes(&self) -> Self {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.runtime_ms = 0.0;
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    CsvSummary,
}

impl FromStr for Format {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "json" => Ok(Format::Json),
            "csv-summary" => Ok(Format::CsvSummary),
            other => Err(HarnessError::Input(format!("unknown format {other:?} (json or csv-summary)"))),
        }
    }
}

pub fn emit_report(report: &SuiteReport, format: Format) -> Result<String, HarnessError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| HarnessError::Input(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::CsvSummary => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| HarnessError::Input(e.to_string());
            w.write_record(["id", "verdict", "extremal_value", "tolerance", "stderr", "runtime_ms", "anchor"])
                .map_err(io)?;
            for r in &report.records {
                let verdict = match r.verdict {
                    Outcome::Pass => "pass",
                    Outcome::Fail => "fail",
                };
                w.write_record([
                    r.id.clone(),
                    verdict.to_string(),
                    format!("{:e}", r.extremal_value),
                    format!("{:e}", r.tolerance),
                    r.stderr.map(|s| format!("{s:e}")).unwrap_or_default(),
                    format!("{:.3}", r.runtime_ms),
                    r.anchor.clone(),
                ])
                .map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| HarnessError::Input(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| HarnessError::Input(e.to_string()))
        }
    }
}

/// What a check measured. `pass` is decided against the effective tolerance.
struct Measured {
    value: f64,
    stderr: Option<f64>,
    rule: Rule,
}

enum Rule {
    /// `value ≤ tol`.
    AtMost,
    /// `value < −tol` (a certificate of indefiniteness).
    BelowNegative,
}

impl Measured {
    fn at_most(value: f64) -> Self {
        Self { value, stderr: None, rule: Rule::AtMost }
    }

    fn count(failures: usize) -> Self {
        Self::at_most(failures as f64)
    }
}

type CheckResult = Result<Measured, weyl_lab_core::Error>;

struct Context<'a> {
    config: &'a SuiteConfig,
}

impl Context<'_> {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.config.seed);
        r.set_stream(stream);
        r
    }
}

struct Check {
    id: &'static str,
    suite: Suite,
    anchor: &'static str,
    tolerance: f64,
    run: fn(&Context, &mut ChaCha8Rng) -> CheckResult,
}

fn coeff(r: &mut ChaCha8Rng) -> Complex<f64> {
    Complex::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

fn element(r: &mut ChaCha8Rng, s: SymplecticSpace, terms: usize) -> W {
    let n = s.dim();
    let t: Vec<_> = (0..terms).map(|_| (PhasePoint::random(r, n, 9, 5), coeff(r))).collect();
    W::from_terms(s, t).expect("random points lie in the space")
}

fn point_in_l(r: &mut ChaCha8Rng, n: usize) -> PhasePoint {
    let second = (0..n).map(|_| rational_from_frac(r.random_range(-9..=9), r.random_range(1..=5))).collect();
    PhasePoint::new(vec![rational_from_int(0); n], second).expect("blocks have equal length")
}

fn off_l_point(r: &mut ChaCha8Rng, n: usize) -> PhasePoint {
    loop {
        let p = PhasePoint::random(r, n, 9, 5);
        if !p.first_is_zero() {
            return p;
        }
    }
}

fn deviation(a: &W, b: &W) -> f64 {
    a.pruned(1e-13).max_coefficient_deviation(&b.pruned(1e-13)).unwrap_or(f64::INFINITY)
}

fn random_points(r: &mut ChaCha8Rng, n: usize, size: usize) -> Vec<PhasePoint> {
    let mut pts: Vec<PhasePoint> = Vec::with_capacity(size);
    while pts.len() < size {
        let p = if !pts.is_empty() && r.random_bool(0.5) {
            let base = pts[r.random_range(0..pts.len())].first().to_vec();
            PhasePoint::new(base, PhasePoint::random(r, n, 9, 4).second().to_vec()).expect("equal blocks")
        } else {
            PhasePoint::random(r, n, 9, 4)
        };
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

/// Point sets for kernel checks: the user's file if given, otherwise random sets.
fn point_sets(ctx: &Context, r: &mut ChaCha8Rng) -> Vec<Vec<PhasePoint>> {
    match &ctx.config.points {
        Some(p) => vec![p.clone()],
        None => (0..10).map(|k| random_points(r, 1 + k % 4, 8 + 5 * k)).collect(),
    }
}

fn all_checks() -> Vec<Check> {
    vec![
        // weyl
        Check {
            id: "weyl.unitarity",
            suite: Suite::Weyl,
            anchor: "W(z)* W(z) = W(0)",
            tolerance: 1e-12,
            run: |_, r| {
                let mut worst = 0.0f64;
                for k in 0..200 {
                    let s = SymplecticSpace::standard(1 + k % 4);
                    let z = W::generator(s, PhasePoint::random(r, s.dim(), 9, 7))?;
                    worst = worst.max(deviation(&z.adjoint().weyl_mul(&z)?, &W::unit(s)));
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "weyl.involution",
            suite: Suite::Weyl,
            anchor: "(AB)* = B* A*",
            tolerance: 1e-12,
            run: |_, r| {
                let mut worst = 0.0f64;
                for k in 0..200 {
                    let s = SymplecticSpace::standard(1 + k % 4);
                    let (a, b) = (element(r, s, 3), element(r, s, 3));
                    if a.adjoint().adjoint() != a {
                        worst = f64::INFINITY;
                    }
                    worst = worst.max(deviation(&a.weyl_mul(&b)?.adjoint(), &b.adjoint().weyl_mul(&a.adjoint())?));
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "weyl.associativity",
            suite: Suite::Weyl,
            anchor: "(AB)C = A(BC)",
            tolerance: 1e-12,
            run: |_, r| {
                let mut worst = 0.0f64;
                for k in 0..200 {
                    let s = SymplecticSpace::standard(1 + k % 4);
                    let (a, b, c) = (element(r, s, 2), element(r, s, 2), element(r, s, 2));
                    worst = worst.max(deviation(&a.weyl_mul(&b)?.weyl_mul(&c)?, &a.weyl_mul(&b.weyl_mul(&c)?)?));
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "weyl.cocycle",
            suite: Suite::Weyl,
            anchor: "β(y,z) + β(y+z,w) = β(z,w) + β(y,z+w)",
            tolerance: 0.0,
            run: |_, r| {
                let mut failures = 0;
                for k in 0..200 {
                    let s = SymplecticSpace::standard(1 + k % 4);
                    let n = s.dim();
                    let (y, z, w) = (PhasePoint::random(r, n, 9, 7), PhasePoint::random(r, n, 9, 7), PhasePoint::random(r, n, 9, 7));
                    let lhs = s.beta(&y, &z)? + s.beta(&(&y + &z), &w)?;
                    let rhs = s.beta(&z, &w)? + s.beta(&y, &(&z + &w))?;
                    failures += usize::from(lhs != rhs);
                }
                Ok(Measured::count(failures))
            },
        },
        Check {
            id: "weyl.commutator",
            suite: Suite::Weyl,
            anchor: "W(y)D − DW(y) = (W(y) − 1)D − D(W(y) − 1)",
            tolerance: 1e-12,
            run: |_, r| {
                let mut worst = 0.0f64;
                for k in 0..200 {
                    let s = SymplecticSpace::standard(1 + k % 4);
                    let wy = W::generator(s, PhasePoint::random(r, s.dim(), 9, 7))?;
                    let d = element(r, s, 4);
                    let t = wy.sub(&W::unit(s))?;
                    let lhs = wy.weyl_mul(&d)?.sub(&d.weyl_mul(&wy)?)?;
                    let rhs = t.weyl_mul(&d)?.sub(&d.weyl_mul(&t)?)?;
                    worst = worst.max(deviation(&lhs, &rhs));
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "weyl.l1_submultiplicative",
            suite: Suite::Weyl,
            anchor: "‖AB‖₁ ≤ ‖A‖₁ ‖B‖₁",
            tolerance: 1e-12,
            run: |_, r| {
                let mut worst = f64::NEG_INFINITY;
                for k in 0..200 {
                    let s = SymplecticSpace::standard(1 + k % 4);
                    let (a, b) = (element(r, s, 3), element(r, s, 3));
                    worst = worst.max(a.weyl_mul(&b)?.l1_norm() - a.l1_norm() * b.l1_norm());
                }
                Ok(Measured::at_most(worst.max(0.0)))
            },
        },
        // states
        Check {
            id: "states.kernel_psd",
            suite: Suite::States,
            anchor: "Σ c_j c̄_k g(x_j − x_k) e^{−iβ(x_j,x_k)} ≥ 0",
            tolerance: PSD_TOL,
            run: |ctx, r| {
                let mut min_eig = f64::INFINITY;
                for pts in point_sets(ctx, r) {
                    let n = pts[0].dim();
                    let mut gs = vec![G::dirac_g0(n), G::fock(n)];
                    for l in [1.0, 2.0, 4.0] {
                        gs.push(G::quasifree(n, l)?);
                    }
                    for g in &gs {
                        min_eig = min_eig.min(kernel_positivity(g, &pts, PSD_TOL)?.min_eigenvalue);
                    }
                }
                Ok(Measured::at_most((-min_eig).max(0.0)))
            },
        },
        Check {
            id: "states.constant_indefinite",
            suite: Suite::States,
            anchor: "g ≡ 1 on {0, y, z}, β(y,z) ≈ π/2: min eigenvalue < 0",
            tolerance: PSD_TOL,
            run: |_, _| {
                let one = G::custom(1, |_| Complex::new(1.0, 0.0), 0)?;
                let pts = [
                    PhasePoint::zero(1),
                    PhasePoint::from_ints(&[1], &[0])?,
                    PhasePoint::from_fracs(&[(0, 1)], &[(355, 113)])?,
                ];
                let rep = kernel_positivity(&one, &pts, PSD_TOL)?;
                let value = if rep.verdict == Verdict::Indefinite { rep.min_eigenvalue } else { rep.min_eigenvalue.max(0.0) };
                Ok(Measured { value, stderr: None, rule: Rule::BelowNegative })
            },
        },
        Check {
            id: "states.kernel_hermitian",
            suite: Suite::States,
            anchor: "h(x,y) = conj h(y,x)",
            tolerance: 1e-12,
            run: |ctx, r| {
                let mut worst = 0.0f64;
                for pts in point_sets(ctx, r) {
                    let n = pts[0].dim();
                    for g in [G::dirac_g0(n), G::fock(n), G::quasifree(n, 2.0)?] {
                        worst = worst.max(kernel_matrix(&g, &pts)?.hermitian_deviation());
                    }
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "states.dirac_lattice",
            suite: Suite::States,
            anchor: "g₀(y) = 1 on L = {0} × Q",
            tolerance: 0.0,
            run: |_, _| {
                let mut failures = 0;
                for n in 1..=3usize {
                    let gens: Vec<PhasePoint> = (0..n)
                        .map(|i| {
                            let mut second = vec![rational_from_int(0); n];
                            second[i] = rational_from_frac(1, i as i64 + 1);
                            PhasePoint::new(vec![rational_from_int(0); n], second)
                        })
                        .collect::<Result<_, _>>()?;
                    failures += usize::from(!dirac_check(&G::dirac_g0(n), &gens, 5)?);
                }
                Ok(Measured::count(failures))
            },
        },
        Check {
            id: "states.dirac_invariance",
            suite: Suite::States,
            anchor: "ω(A W(y)) = ω(A) = ω(W(y) A), y ∈ L",
            tolerance: 1e-12,
            run: |_, r| {
                let mut worst = 0.0f64;
                for k in 0..100 {
                    let n = 1 + k % 3;
                    let s = SymplecticSpace::standard(n);
                    let a = element(r, s, 3).add(&W::from_terms(s, [(point_in_l(r, n), coeff(r))])?)?;
                    worst = worst.max(dirac_invariance_check(&G::dirac_g0(n), &a, &point_in_l(r, n))?);
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "states.phase_identity",
            suite: Suite::States,
            anchor: "e^{∓itβ(y₀,z₀)} ω(W(z₀ + ty₀)) = ω(W(z₀)) forces ω(W(z₀)) = 0",
            tolerance: 1e-12,
            run: |_, r| {
                let grid = dyadic_grid(10);
                let mut worst = 0.0f64;
                for k in 0..50 {
                    let n = 1 + k % 3;
                    let z0 = off_l_point(r, n);
                    let j = z0.first().iter().position(|c| *c != rational_from_int(0)).expect("off L");
                    let mut second = vec![rational_from_int(0); n];
                    second[j] = rational_from_int(1);
                    let y0 = PhasePoint::new(vec![rational_from_int(0); n], second)?;
                    let res = phase_identity_check(&G::dirac_g0(n), &y0, &z0, &grid)?;
                    worst = worst.max(res.max_deviation).max(res.value_at_z0.norm());
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "states.regularity",
            suite: Suite::States,
            anchor: "lim_{t→0} ω(W(tz)) = 1 for Fock, jump for g₀ off L",
            tolerance: 0.0,
            run: |_, r| {
                let grid = dyadic_grid(20);
                let mut failures = 0;
                for k in 0..20 {
                    let n = 1 + k % 3;
                    let z = off_l_point(r, n);
                    failures += usize::from(regularity_probe(&G::fock(n), &z, &grid)?.classification != Regularity::ContinuousAt0);
                    failures += usize::from(regularity_probe(&G::dirac_g0(n), &z, &grid)?.classification != Regularity::JumpAt0);
                }
                Ok(Measured::count(failures))
            },
        },
        Check {
            id: "states.quasifree_convergence",
            suite: Suite::States,
            anchor: "|g_l(ψ) − g₀(ψ)| = e^{−l²/4}, ψ = ((1),(0))",
            tolerance: 1e-15,
            run: |_, _| {
                let rows = quasifree_convergence(&PhasePoint::from_ints(&[1], &[0])?, &[1.0f64, 2.0, 4.0, 8.0])?;
                let mut worst = rows.iter().map(|x| (x.deviation - (-x.l * x.l / 4.0).exp()).abs()).fold(0.0, f64::max);
                if rows.windows(2).any(|w| w[1].deviation >= w[0].deviation) {
                    worst = f64::INFINITY;
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "states.colombeau_order",
            suite: Suite::States,
            anchor: "exp(−ε^{−n}‖φ‖²/4) has fitted order ≥ 10 as ε → 0",
            tolerance: 0.0,
            run: |_, _| {
                let mut failures = 0;
                for n in [1, 2] {
                    let rep = G::quasifree(1, 1.0)?.colombeau_scaling_test(1.0, n, &[1e-2, 1e-3, 1e-4], 10)?;
                    failures += usize::from(rep.verdict != Negligibility::Negligible);
                }
                Ok(Measured::count(failures))
            },
        },
        Check {
            id: "states.linearity",
            suite: Suite::States,
            anchor: "ω(αA + B) = αω(A) + ω(B)",
            tolerance: 1e-12,
            run: |_, r| {
                let mut worst = 0.0f64;
                for k in 0..100 {
                    let n = 1 + k % 3;
                    let s = SymplecticSpace::standard(n);
                    let (a, b, alpha) = (element(r, s, 4), element(r, s, 4), coeff(r));
                    for g in [G::dirac_g0(n), G::fock(n), G::quasifree(n, 1.5)?] {
                        let lhs = evaluate_state(&g, &a.scale(alpha).add(&b)?)?;
                        let rhs = alpha * evaluate_state(&g, &a)? + evaluate_state(&g, &b)?;
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
                Ok(Measured::at_most(worst))
            },
        },
        // gns
        Check {
            id: "gns.fixpoint_residual",
            suite: Suite::Gns,
            anchor: "ω((W(y) − 1)*(W(y) − 1)) = 2 − 2ℜω(W(y))",
            tolerance: 1e-12,
            run: |_, r| {
                let mut worst = 0.0f64;
                for k in 0..200 {
                    let n = 1 + k % 4;
                    let s = SymplecticSpace::standard(n);
                    let y = if k % 2 == 0 { point_in_l(r, n) } else { PhasePoint::random(r, n, 9, 5) };
                    for g in [G::dirac_g0(n), G::fock(n), G::quasifree(n, 2.0)?] {
                        let t = W::generator(s, y.clone())?.sub(&W::unit(s))?;
                        let direct = evaluate_state(&g, &t.adjoint().weyl_mul(&t)?)?;
                        worst = worst.max((direct - Complex::new(gns_fixpoint_residual(&g, &y)?, 0.0)).norm());
                    }
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "gns.g0_rank",
            suite: Suite::Gns,
            anchor: "rank G = number of distinct first blocks (g₀)",
            tolerance: 0.0,
            run: |_, r| {
                let mut failures = 0;
                for k in 1..=16usize {
                    let n = 1 + k % 2;
                    let mut pts = Vec::new();
                    for class in 0..k {
                        let mut first = vec![rational_from_int(0); n];
                        first[0] = rational_from_int(class as i64);
                        for j in 0..r.random_range(1..=3) {
                            let mut second = vec![rational_from_frac(r.random_range(-9..=9), 4); n];
                            second[n - 1] = rational_from_int(10 * j);
                            pts.push(PhasePoint::new(first.clone(), second)?);
                        }
                    }
                    let span = gns_build(&G::dirac_g0(n), &pts, NULL_TOL)?;
                    let scan = gns_orthogonality_scan(&span)?;
                    failures += usize::from(span.rank() != k || scan.cross_class_max > 1e-12);
                }
                Ok(Measured::count(failures))
            },
        },
        Check {
            id: "gns.gram_kernel_relation",
            suite: Suite::Gns,
            anchor: "G(x)_{jk} = h(−x)_{jk}",
            tolerance: 1e-12,
            run: |ctx, r| {
                let mut worst = 0.0f64;
                for pts in point_sets(ctx, r) {
                    let n = pts[0].dim();
                    let neg: Vec<PhasePoint> = pts.iter().map(|p| -p).collect();
                    for g in [G::dirac_g0(n), G::fock(n), G::quasifree(n, 0.5)?] {
                        worst = worst.max(gram_matrix(&g, &pts)?.max_abs_diff(&kernel_matrix(&g, &neg)?));
                    }
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "gns.grid_weyl_relation",
            suite: Suite::Gns,
            anchor: "π(W(y))π(W(z)) = e^{iβ(y,z)} π(W(y+z)) on the grid",
            tolerance: 1e-8,
            run: |_, r| {
                let rep = GridRep::<f64>::new(1024, 16.0)?;
                let omega = rep.vacuum();
                let mut worst = 0.0f64;
                let mut small = || loop {
                    let p = PhasePoint::random(r, 1, 14, 10);
                    if rational_to_f64(&p.norm_sq()) <= 4.0 {
                        return p;
                    }
                };
                for _ in 0..50 {
                    let (y, z) = (small(), small());
                    worst = worst.max(grid_weyl_relation_deviation(&rep, &y, &z, &omega)?);
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "gns.vacuum_function",
            suite: Suite::Gns,
            anchor: "⟨Ω, π(W(z))Ω⟩ = e^{−‖z‖²/4}",
            tolerance: 1e-6,
            run: |_, _| {
                let rep = GridRep::<f64>::new(1024, 16.0)?;
                let mut zs = Vec::new();
                for i in 0..=8 {
                    for j in 0..16 {
                        let (rad, ang) = (0.5 * i as f64, std::f64::consts::PI * j as f64 / 8.0);
                        let c = |v: f64| rational_from_f64(v).expect("finite");
                        zs.push(PhasePoint::from_coords(vec![c(rad * ang.cos()), c(rad * ang.sin())])?);
                    }
                }
                let f = vector_function(&rep, &rep.vacuum(), &zs)?;
                let worst = zs
                    .iter()
                    .zip(&f)
                    .map(|(z, v)| (v - Complex::new((-rational_to_f64(&z.norm_sq()) / 4.0).exp(), 0.0)).norm())
                    .fold(0.0, f64::max);
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "gns.c0_decay",
            suite: Suite::Gns,
            anchor: "max_{‖z‖=4} |⟨Ω, π(W(z))Ω⟩|",
            tolerance: 0.02,
            run: |_, _| {
                let rep = GridRep::<f64>::new(1024, 16.0)?;
                let rows = c0_decay_scan(&rep, &[(1.0, rep.vacuum())], &[4.0])?;
                Ok(Measured::at_most(rows[0].max_abs_h))
            },
        },
        // torus
        Check {
            id: "torus.relation",
            suite: Suite::Torus,
            anchor: "W(m)W(n) = e^{iθ(m₁n₂ − m₂n₁)} W(m+n)",
            tolerance: 1e-12,
            run: |_, _| {
                let mut worst = 0.0f64;
                for (p, q) in [(1, 2), (1, 3), (2, 5)] {
                    let rep = TorusRep::<f64>::build(p, q)?;
                    worst = worst.max(rep.relation_deviation(q as i64));
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "torus.trace_state",
            suite: Suite::Torus,
            anchor: "(1/q) tr π(Σ c_m W(m)) = c_0",
            tolerance: 1e-12,
            run: |_, r| {
                let mut worst = 0.0f64;
                for (p, q) in [(1, 2), (1, 3), (2, 5)] {
                    let rep = TorusRep::<f64>::build(p, q)?;
                    let (w1, w2) = rep.trace_window();
                    for _ in 0..50 {
                        let terms: Vec<_> = (0..r.random_range(1..=6))
                            .map(|_| {
                                let m = [r.random_range(-(w1 - 1)..=w1 - 1), r.random_range(-(w2 - 1)..=w2 - 1)];
                                Ok((PhasePoint::from_ints(&m[..1], &m[1..])?, coeff(r)))
                            })
                            .collect::<Result<_, weyl_lab_core::Error>>()?;
                        let e = W::from_terms(rep.space(), terms)?;
                        worst = worst.max((rep.trace_state(&e)? - e.coefficient(&PhasePoint::zero(1))).norm());
                    }
                }
                Ok(Measured::at_most(worst))
            },
        },
        // measures
        Check {
            id: "measures.duality",
            suite: Suite::Measures,
            anchor: "⟨F̂μ, ν⟩ = ⟨μ, F̂ν⟩",
            tolerance: 1e-12,
            run: |ctx, r| {
                let mut worst = 0.0f64;
                for k in 0..50 {
                    let (mu, d) = match &ctx.config.measure {
                        Some(m) => (m.clone(), m.dim()),
                        None => {
                            let d = 1 + k % 4;
                            (AtomicMeasure::random(r, d, 5, 2.0), d)
                        }
                    };
                    let nu = AtomicMeasure::random(r, d, 5, 2.0);
                    worst = worst.max(duality_check(&mu, &nu)?);
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "measures.convolution_homomorphism",
            suite: Suite::Measures,
            anchor: "F̂(μ * ν) = F̂μ · F̂ν",
            tolerance: 1e-12,
            run: |ctx, r| {
                let mut worst = 0.0f64;
                for k in 0..50 {
                    let mu = ctx.config.measure.clone().unwrap_or_else(|| AtomicMeasure::random(r, 1 + k % 4, 4, 2.0));
                    let d = mu.dim();
                    let nu = AtomicMeasure::random(r, d, 3, 2.0);
                    let u: Vec<f64> = (0..d).map(|_| r.random_range(-3.0..3.0)).collect();
                    let lhs = fourier_atomic(&mu.convolve(&nu)?, &u)?;
                    worst = worst.max((lhs - fourier_atomic(&mu, &u)? * fourier_atomic(&nu, &u)?).norm());
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "measures.product_lemma",
            suite: Suite::Measures,
            anchor: "g₀μ = μ₁({0})(δ₀ ⊗ μ₂)",
            tolerance: 1e-12,
            run: |_, r| {
                let mut worst = 0.0f64;
                for _ in 0..50 {
                    let split = SplitSpace::new(r.random_range(1..=3), r.random_range(1..=3));
                    let base = AtomicMeasure::<f64>::random(r, split.d1, 3, 2.0);
                    let mut pairs: Vec<_> = base.atoms().iter().map(|a| (a.x.clone(), a.weight)).collect();
                    pairs.push((vec![0.0; split.d1], coeff(r)));
                    let mu1 = AtomicMeasure::from_pairs(split.d1, pairs)?;
                    let mu2 = AtomicMeasure::random(r, split.d2, 3, 2.0);
                    worst = worst.max(product_lemma_check(split, &mu1, &mu2)?);
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "measures.identity_transform",
            suite: Suite::Measures,
            anchor: "F̂(g₀μ)(u₁,u₂) = F̂μ₂(u₂)",
            tolerance: 1e-12,
            run: |_, r| {
                let mut worst = 0.0f64;
                for _ in 0..50 {
                    let split = SplitSpace::new(r.random_range(1..=3), r.random_range(1..=3));
                    let samples: Vec<Vec<f64>> =
                        (0..20).map(|_| (0..split.dim()).map(|_| r.random_range(-3.0..3.0)).collect()).collect();
                    let mu2 = AtomicMeasure::random(r, split.d2, 3, 2.0);
                    worst = worst.max(identity21_check(split, &mu2, &samples)?);
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "measures.identity_convolution",
            suite: Suite::Measures,
            anchor: "‖ρ‖ F̂(g₀μ) = (h₀ρ) * F̂μ",
            tolerance: 1e-12,
            run: |_, r| {
                let mut worst = 0.0f64;
                for _ in 0..50 {
                    let split = SplitSpace::new(r.random_range(1..=3), r.random_range(1..=3));
                    let samples: Vec<Vec<f64>> =
                        (0..20).map(|_| (0..split.dim()).map(|_| r.random_range(-3.0..3.0)).collect()).collect();
                    let mu2 = AtomicMeasure::random(r, split.d2, 3, 2.0);
                    let rho1 = AtomicMeasure::random_positive(r, split.d1, 3, 2.0);
                    worst = worst.max(identity23_check(split, &mu2, &rho1, &samples)?);
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "measures.finite_bochner",
            suite: Suite::Measures,
            anchor: "⟨δ_{L₀}, F̂φ⟩ = (2π)^{dim L₀} ⟨δ_{L₀^⊥}, φ⟩",
            tolerance: 1e-6,
            run: |_, _| {
                let mut worst = 0.0f64;
                for (vars, axes) in [(vec![1.0, 1.0], vec![0]), (vec![1.0, 2.0], vec![]), (vec![0.5, 3.0, 1.0], vec![0, 1, 2])] {
                    worst = worst.max(finite_bochner_check(&vars, &axes)?.relative_deviation);
                }
                Ok(Measured::at_most(worst))
            },
        },
        Check {
            id: "measures.mc_functional",
            suite: Suite::Measures,
            anchor: "∫ e^{i⟨u,φ⟩} dν(u) = e^{−l²‖φ‖²/4}, Σ = (l²/2)I; value in standard errors",
            tolerance: 4.0,
            run: |ctx, r| mc_sigmas(ctx, r, false),
        },
        Check {
            id: "measures.mc_moment",
            suite: Suite::Measures,
            anchor: "∫ ⟨u,φ⟩⟨u,ψ⟩ dν(u) = φᵀΣψ; value in standard errors",
            tolerance: 4.0,
            run: |ctx, r| mc_sigmas(ctx, r, true),
        },
        Check {
            id: "measures.mc_product_form",
            suite: Suite::Measures,
            anchor: "∫ e^{i(⟨u,φ₁⟩+⟨v,φ₂⟩)} d(ν₁ ⊗ ν₂) = F₁(φ₁) F₂(φ₂); value in standard errors",
            tolerance: 4.0,
            run: |ctx, _| {
                let s = GaussianSpec::isotropic(2, 1.0)?;
                let rep = product_form_check(&s, &s, &[1.0, 0.0], &[1.0, 0.0], 100_000, ctx.config.seed)?;
                Ok(Measured { value: rep.error() / rep.stderr, stderr: Some(rep.stderr), rule: Rule::AtMost })
            },
        },
    ]
}

fn mc_sigmas(ctx: &Context, r: &mut ChaCha8Rng, moment: bool) -> CheckResult {
    let mut worst = 0.0f64;
    let mut worst_stderr = 0.0f64;
    for l in [1.0, 2.0] {
        for d in [1usize, 2, 4, 8] {
            let spec = GaussianSpec::quasifree(d, l)?;
            let phi: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0) / (l * (d as f64).sqrt())).collect();
            let psi: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
            let rep = if moment {
                moment_check(&spec, &phi, &psi, 100_000, ctx.config.seed)?
            } else {
                gaussian_mc_functional(&spec, &phi, 100_000, ctx.config.seed)?
            };
            let sig = if rep.stderr > 0.0 { rep.error() / rep.stderr } else if rep.error() == 0.0 { 0.0 } else { f64::INFINITY };
            if sig >= worst {
                worst = sig;
                worst_stderr = rep.stderr;
            }
        }
    }
    Ok(Measured { value: worst, stderr: Some(worst_stderr), rule: Rule::AtMost })
}

/// Check ids belonging to a suite, in report order.
pub fn check_ids(suite: Suite) -> Vec<&'static str> {
    all_checks().into_iter().filter(|c| suite == Suite::All || c.suite == suite).map(|c| c.id).collect()
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, HarnessError> {
    config.validate()?;
    let ctx = Context { config };
    let mut records = Vec::new();
    for (stream, check) in all_checks().into_iter().enumerate() {
        if config.suite != Suite::All && check.suite != config.suite {
            continue;
        }
        let tolerance = config.tolerances.get(check.id).copied().unwrap_or(check.tolerance);
        let mut rng = ctx.rng(stream as u64);
        let start = Instant::now();
        let measured =
            (check.run)(&ctx, &mut rng).map_err(|source| HarnessError::Check { check: check.id.into(), source })?;
        let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        let pass = match measured.rule {
            Rule::AtMost => measured.value <= tolerance,
            Rule::BelowNegative => measured.value < -tolerance,
        };
        records.push(CheckRecord {
            id: check.id.into(),
            anchor: check.anchor.into(),
            verdict: if pass { Outcome::Pass } else { Outcome::Fail },
            extremal_value: measured.value,
            tolerance,
            stderr: measured.stderr,
            runtime_ms,
        });
    }
    let overall = if records.iter().all(|r| r.verdict == Outcome::Pass) { Outcome::Pass } else { Outcome::Fail };
    Ok(SuiteReport { schema_version: SCHEMA_VERSION.into(), suite: config.suite, seed: config.seed, overall, records })
}
