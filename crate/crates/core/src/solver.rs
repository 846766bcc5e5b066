//! Numerical search for solutions of the matrix equation.
//!
//! The nine complex unknowns are split into 18 real ones, interleaved as
//! `(Re a₁₁, Im a₁₁, Re a₁₂, …)` in row-major order; residual entries use
//! the same layout. Since the residual is holomorphic, each complex
//! derivative `c` contributes the real block `[[Re c, −Im c], [Im c, Re c]]`.

use std::collections::BTreeMap;

use nalgebra::{SMatrix, SVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::json::{complex_value_to_json, mat_to_json};
use crate::linalg::Mat3;
use crate::mateq::{classify, residual, ClassificationReport, FamilyTag, DEFAULT_TOL};
use crate::scalar::{Complex64, ComplexValue, Scalar};

pub type Jacobian = SMatrix<f64, 18, 18>;
type RealVec = SVector<f64, 18>;

pub const DEFAULT_SOLVE_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100;
pub const DEFAULT_RADIUS: f64 = 2.0;
pub const POLISH_STEPS: usize = 20;
const TIKHONOV_SHIFT: f64 = 1e-10;
const MIN_DAMPING: f64 = 1.0 / (1 << 20) as f64;

fn to_real(a: &Mat3<Complex64>) -> RealVec {
    RealVec::from_fn(|r, _| {
        let z = a.m[r / 6][(r / 2) % 3];
        if r % 2 == 0 {
            z.re
        } else {
            z.im
        }
    })
}

fn from_real(x: &RealVec) -> Mat3<Complex64> {
    Mat3::from_fn(|i, j| {
        let k = 2 * (3 * i + j);
        Complex64::new(x[k], x[k + 1])
    })
}

fn unit(p: usize, q: usize) -> Mat3<Complex64> {
    let mut e = Mat3::zero();
    e.m[p][q] = Complex64::one();
    e
}

/// Derivative of the residual in direction `e`: the product rule on
/// `A′((tr A + 1)I − A)` plus the polarized adjugate, exact because the
/// adjugate of a 3×3 matrix is quadratic.
fn directional_derivative(a: &Mat3<Complex64>, e: &Mat3<Complex64>) -> Mat3<Complex64> {
    let id = Mat3::identity();
    let shifted = &id.scale(&(a.trace() + Complex64::one())) - a;
    let d_shifted = &id.scale(&e.trace()) - e;
    let d_adj = &(&(a + e).adjugate() - &a.adjugate()) - &e.adjugate();
    &(&(&e.transpose() * &shifted) + &(&a.transpose() * &d_shifted)) - &d_adj
}

/// Real 18×18 Jacobian of `entries(A) ↦ entries(residual(A))`.
pub fn residual_jacobian(a: &Mat3<Complex64>) -> Jacobian {
    let mut jac = Jacobian::zeros();
    for p in 0..3 {
        for q in 0..3 {
            let d = directional_derivative(a, &unit(p, q));
            let col = 2 * (3 * p + q);
            for i in 0..3 {
                for j in 0..3 {
                    let row = 2 * (3 * i + j);
                    let c = d.m[i][j];
                    jac[(row, col)] = c.re;
                    jac[(row, col + 1)] = -c.im;
                    jac[(row + 1, col)] = c.im;
                    jac[(row + 1, col + 1)] = c.re;
                }
            }
        }
    }
    jac
}

/// Central finite-difference Jacobian with step `h`, for checking
/// [`residual_jacobian`].
pub fn finite_difference_jacobian(a: &Mat3<Complex64>, h: f64) -> Jacobian {
    let x = to_real(a);
    let mut jac = Jacobian::zeros();
    for k in 0..18 {
        let mut plus = x;
        let mut minus = x;
        plus[k] += h;
        minus[k] -= h;
        let col = (to_real(&residual(&from_real(&plus))) - to_real(&residual(&from_real(&minus))))
            / (2.0 * h);
        jac.set_column(k, &col);
    }
    jac
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub a_final: Mat3<Complex64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Present for converged points the classifier accepts.
    pub classification: Option<ClassificationReport>,
}

fn newton_step(a: &Mat3<Complex64>, r: &RealVec, tikhonov: bool) -> Option<RealVec> {
    let jac = residual_jacobian(a);
    let step = if tikhonov {
        let normal = jac.tr_mul(&jac) + Jacobian::identity() * TIKHONOV_SHIFT;
        normal.cholesky()?.solve(&(-jac.tr_mul(r)))
    } else {
        jac.lu().solve(&(-r))?
    };
    step.iter().all(|v| v.is_finite()).then_some(step)
}

/// One damped step from `a`, accepted only if it lowers the residual norm.
fn damped_step(a: &Mat3<Complex64>, norm: f64) -> Option<(Mat3<Complex64>, f64)> {
    let r = to_real(&residual(a));
    let x = to_real(a);
    for tikhonov in [false, true] {
        let Some(step) = newton_step(a, &r, tikhonov) else {
            continue;
        };
        let mut alpha = 1.0;
        while alpha >= MIN_DAMPING {
            let candidate = from_real(&(x + step * alpha));
            let n = residual(&candidate).frobenius_norm();
            if n < norm {
                return Some((candidate, n));
            }
            alpha /= 2.0;
        }
    }
    None
}

/// Damped Newton iteration from `a0`.
///
/// Each step tries the full Newton direction, halving the step until the
/// residual norm decreases (down to a factor `2⁻²⁰`). When the Jacobian is
/// singular or the Newton direction fails to decrease the residual, the
/// Tikhonov-regularized least-squares direction with shift `1e−10` is used.
/// Once below `tol`, up to [`POLISH_STEPS`] further steps run while they
/// still lower the residual; near singular points of the solution set a
/// small residual alone leaves the point comparatively far from it.
pub fn newton_solve(a0: &Mat3<Complex64>, max_iter: usize, tol: f64) -> SolveResult {
    let mut a = a0.clone();
    let mut norm = residual(&a).frobenius_norm();
    let mut iterations = 0;
    while norm >= tol && iterations < max_iter && norm.is_finite() {
        iterations += 1;
        match damped_step(&a, norm) {
            Some((next, n)) => {
                a = next;
                norm = n;
            }
            None => break,
        }
    }
    if norm < tol {
        for _ in 0..POLISH_STEPS {
            match damped_step(&a, norm) {
                Some((next, n)) => {
                    a = next;
                    norm = n;
                }
                None => break,
            }
        }
    }
    let converged = norm < tol;
    let classification = if converged {
        classify(&a, DEFAULT_TOL).ok()
    } else {
        None
    };
    SolveResult {
        a_final: a,
        residual_norm: norm,
        iterations,
        converged,
        classification,
    }
}

/// Settings for [`multistart_with`].
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    pub starts: usize,
    pub seed: u64,
    pub radius: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            starts: 200,
            seed: 0,
            radius: DEFAULT_RADIUS,
            tol: DEFAULT_SOLVE_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

pub const FAMILY_NAMES: [&str; 5] = [
    "Zero",
    "MinusIdentity",
    "TraceMinus2",
    "KFamily",
    "NonSymRank1",
];

#[derive(Clone, Debug, PartialEq)]
pub struct SurveyReport {
    pub starts: usize,
    pub converged_count: usize,
    /// Converged points per family name.
    pub family_histogram: BTreeMap<String, usize>,
    /// Parameters of every KFamily hit, in start order.
    pub k_values: Vec<ComplexValue>,
    /// Starts that did not converge.
    pub failures: usize,
    /// Converged points the classifier rejected.
    pub unclassified: usize,
}

impl SurveyReport {
    /// Number of KFamily parameters that differ pairwise by more than `sep`.
    pub fn distinct_k_count(&self, sep: f64) -> usize {
        let mut reps: Vec<Complex64> = Vec::new();
        for k in &self.k_values {
            let z = k.to_c64();
            if reps.iter().all(|r| (r - z).norm() > sep) {
                reps.push(z);
            }
        }
        reps.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "starts": self.starts,
            "converged_count": self.converged_count,
            "family_histogram": self.family_histogram,
            "k_values": self.k_values.iter().map(complex_value_to_json).collect::<Vec<_>>(),
            "distinct_k": self.distinct_k_count(1e-3),
            "failures": self.failures,
            "unclassified": self.unclassified,
        })
    }
}

/// Start `index` of a survey: entries uniform in the complex disk of the
/// given radius, from a generator keyed by `(seed, index)`.
pub fn start_point(seed: u64, index: usize, radius: f64) -> Mat3<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    Mat3::from_fn(|_, _| {
        let r = radius * rng.random::<f64>().sqrt();
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(r, theta)
    })
}

pub fn multistart(n_starts: usize, seed: u64, radius: f64) -> SurveyReport {
    multistart_with(&SearchOptions {
        starts: n_starts,
        seed,
        radius,
        ..SearchOptions::default()
    })
}

/// Runs [`newton_solve`] from every start and tallies the families found.
/// Starts run in parallel; the report does not depend on scheduling.
pub fn multistart_with(opts: &SearchOptions) -> SurveyReport {
    let results: Vec<SolveResult> = (0..opts.starts)
        .into_par_iter()
        .map(|i| {
            newton_solve(
                &start_point(opts.seed, i, opts.radius),
                opts.max_iter,
                opts.tol,
            )
        })
        .collect();
    survey(&results)
}

/// Tallies a list of solve results.
pub fn survey(results: &[SolveResult]) -> SurveyReport {
    let mut report = SurveyReport {
        starts: results.len(),
        converged_count: 0,
        family_histogram: FAMILY_NAMES.iter().map(|n| (n.to_string(), 0)).collect(),
        k_values: Vec::new(),
        failures: 0,
        unclassified: 0,
    };
    for r in results {
        if !r.converged {
            report.failures += 1;
            continue;
        }
        report.converged_count += 1;
        match &r.classification {
            Some(c) => {
                *report
                    .family_histogram
                    .entry(c.tag.name().to_string())
                    .or_default() += 1;
                if let FamilyTag::KFamily(k) = &c.tag {
                    report.k_values.push(k.clone());
                }
            }
            None => report.unclassified += 1,
        }
    }
    report
}

/// JSON for a single solve.
pub fn solve_result_json(r: &SolveResult) -> Value {
    let mut v = json!({
        "a_final": mat_to_json(&r.a_final),
        "residual_norm": r.residual_norm,
        "iterations": r.iterations,
        "converged": r.converged,
    });
    if let Some(c) = &r.classification {
        v["classification"] = c.to_json();
    }
    v
}
