//! Generic f-divergence engine: convex generators with analytic derivatives,
//! the divergence sum C_f, its derivative bound rho, and the secant/curvature
//! bound set over a ratio range.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::sum_terms;
use crate::simplex::{Distribution, RatioRange};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A convex normalized generator `f` with analytic first and second
/// derivatives, defined on (0, inf).
///
/// Derivatives are supplied in closed form rather than differentiated
/// numerically; [`check_generator`] guards against transcription errors with
/// a finite-difference sweep.
#[derive(Clone)]
pub struct Generator {
    id: String,
    f: ScalarFn,
    f1: ScalarFn,
    f2: ScalarFn,
}

impl fmt::Debug for Generator {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.debug_struct("Generator").field("id", &self.id).finish()
    }
}

impl Generator {
    pub fn new(
        id: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            f: Arc::new(f),
            f1: Arc::new(f1),
            f2: Arc::new(f2),
        }
    }

    /// Generator of the triangular discrimination: f(x) = (x-1)^2/(x+1).
    pub fn triangular() -> Self {
        Self::new(
            "triangular",
            |x| (x - 1.0) * (x - 1.0) / (x + 1.0),
            |x| (x - 1.0) * (x + 3.0) / ((x + 1.0) * (x + 1.0)),
            |x| 8.0 / (x + 1.0).powi(3),
        )
    }

    /// Generator of the symmetric chi-square: f(x) = (x-1)^2 (x+1)/x.
    pub fn symmetric_chi_square() -> Self {
        Self::new(
            "sym_chi2",
            |x| (x - 1.0) * (x - 1.0) * (x + 1.0) / x,
            |x| (x - 1.0) * (2.0 * x * x + x + 1.0) / (x * x),
            |x| 2.0 * (x * x * x + 1.0) / (x * x * x),
        )
    }

    /// Generator of the relative information of type s.
    ///
    /// Normalized so that f(1) = 0 and f'(1) = 0, which gives
    /// f''(x) = x^(s-2) on all three branches:
    ///   s not in {0,1}:  [x^s - 1 - s(x - 1)] / (s(s-1))
    ///   s = 0:           -ln x + x - 1
    ///   s = 1:           x ln x - x + 1
    pub fn type_s(s: f64) -> Self {
        let id = format!("type_s({})", format_s(s));
        if s == 0.0 {
            Self::new(id, |x| -x.ln() + x - 1.0, |x| 1.0 - 1.0 / x, |x| x.powi(-2))
        } else if s == 1.0 {
            Self::new(id, |x| x * x.ln() - x + 1.0, |x| x.ln(), |x| 1.0 / x)
        } else {
            Self::new(
                id,
                move |x| ((s * x.ln()).exp() - 1.0 - s * (x - 1.0)) / (s * (s - 1.0)),
                move |x| (((s - 1.0) * x.ln()).exp() - 1.0) / (s - 1.0),
                move |x| ((s - 2.0) * x.ln()).exp(),
            )
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn f(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn f1(&self, x: f64) -> f64 {
        (self.f1)(x)
    }

    pub fn f2(&self, x: f64) -> f64 {
        (self.f2)(x)
    }
}

/// Render an order parameter compactly ("2", "-1", "0.5").
pub fn format_s(s: f64) -> String {
    if s == s.trunc() && s.abs() < 1e15 {
        format!("{}", s as i64)
    } else {
        format!("{s}")
    }
}

fn check_pair(p: &Distribution, q: &Distribution) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(())
}

/// C_f(P||Q) = sum q_i f(p_i/q_i).
pub fn c_f(gen: &Generator, p: &Distribution, q: &Distribution) -> Result<f64> {
    check_pair(p, q)?;
    let value = sum_terms(p.probs(), q.probs(), |pi, qi| qi * gen.f(pi / qi));
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteResult { context: "c_f" })
    }
}

/// rho_{C_f}(P||Q) = sum (p_i - q_i) f'(p_i/q_i); an upper bound on C_f for
/// differentiable convex normalized generators.
pub fn rho_c_f(gen: &Generator, p: &Distribution, q: &Distribution) -> Result<f64> {
    check_pair(p, q)?;
    let value = sum_terms(p.probs(), q.probs(), |pi, qi| (pi - qi) * gen.f1(pi / qi));
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteResult { context: "rho_c_f" })
    }
}

/// The (alpha, beta, gamma) closed-form upper bounds on C_f over a ratio
/// range: beta is the secant value at 1, gamma the mean curvature, and
/// alpha = (R-r)^2 gamma / 4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSet {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub range: RatioRange,
}

/// Evaluate the bound set for a generator over a ratio range.
///
/// The degenerate range r = R = 1 takes the limit values (0, 0, f''(1)).
pub fn bound_set(gen: &Generator, range: &RatioRange) -> BoundSet {
    let (r, big_r) = (range.lower, range.upper);
    if range.is_degenerate() {
        return BoundSet {
            alpha: 0.0,
            beta: 0.0,
            gamma: gen.f2(1.0),
            range: *range,
        };
    }
    let width = big_r - r;
    let beta = ((big_r - 1.0) * gen.f(r) + (1.0 - r) * gen.f(big_r)) / width;
    let gamma = (gen.f1(big_r) - gen.f1(r)) / width;
    BoundSet {
        alpha: 0.25 * width * width * gamma,
        beta,
        gamma,
        range: *range,
    }
}

/// Secant bound for the type-s family in closed form (matches
/// `bound_set(&Generator::type_s(s), range).beta`).
pub fn beta_phi_s(s: f64, range: &RatioRange) -> f64 {
    let (r, big_r) = (range.lower, range.upper);
    if range.is_degenerate() {
        return 0.0;
    }
    let width = big_r - r;
    if s == 0.0 {
        ((big_r - 1.0) * (1.0 / r).ln() + (1.0 - r) * (1.0 / big_r).ln()) / width
    } else if s == 1.0 {
        ((big_r - 1.0) * r * r.ln() + (1.0 - r) * big_r * big_r.ln()) / width
    } else {
        ((big_r - 1.0) * (r.powf(s) - 1.0) + (1.0 - r) * (big_r.powf(s) - 1.0))
            / (width * s * (s - 1.0))
    }
}

/// Mean curvature for the type-s family in closed form.
pub fn gamma_phi_s(s: f64, range: &RatioRange) -> f64 {
    let (r, big_r) = (range.lower, range.upper);
    if range.is_degenerate() {
        return 1.0; // f''(1) = 1 for every s
    }
    let width = big_r - r;
    if s == 1.0 {
        (big_r.ln() - r.ln()) / width
    } else {
        (big_r.powf(s - 1.0) - r.powf(s - 1.0)) / (width * (s - 1.0))
    }
}

/// Diagnostic report from [`check_generator`].
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorReport {
    pub id: String,
    pub f_at_one: f64,
    pub f2_at_one: f64,
    pub min_f2_on_grid: f64,
    pub max_f1_fd_error: f64,
    pub max_f2_fd_error: f64,
    pub failures: Vec<String>,
}

impl GeneratorReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

const CHECK_GRID_POINTS: usize = 200;
const CHECK_GRID_LO: f64 = 1e-3;
const CHECK_GRID_HI: f64 = 1e3;
const NORMALIZATION_TOL: f64 = 1e-12;
const DERIVATIVE_TOL: f64 = 1e-6;

/// Verify the convexity and normalization hypotheses on a generator, and
/// cross-check its analytic derivatives against central finite differences
/// on a log-spaced grid.
pub fn check_generator(gen: &Generator) -> GeneratorReport {
    let mut min_f2 = f64::INFINITY;
    let mut max_f1_err = 0.0f64;
    let mut max_f2_err = 0.0f64;
    let log_lo = CHECK_GRID_LO.ln();
    let log_hi = CHECK_GRID_HI.ln();
    for i in 0..CHECK_GRID_POINTS {
        let t = i as f64 / (CHECK_GRID_POINTS - 1) as f64;
        let x = (log_lo + t * (log_hi - log_lo)).exp();
        let h = x * 1e-6;
        min_f2 = min_f2.min(gen.f2(x));

        let fd1 = (gen.f(x + h) - gen.f(x - h)) / (2.0 * h);
        let f1 = gen.f1(x);
        max_f1_err = max_f1_err.max((fd1 - f1).abs() / f1.abs().max(1.0));

        let fd2 = (gen.f1(x + h) - gen.f1(x - h)) / (2.0 * h);
        let f2 = gen.f2(x);
        max_f2_err = max_f2_err.max((fd2 - f2).abs() / f2.abs().max(1.0));
    }

    let f_at_one = gen.f(1.0);
    let mut failures = Vec::new();
    if f_at_one.abs() > NORMALIZATION_TOL {
        failures.push(format!("NormalizationViolation: f(1) = {f_at_one}"));
    }
    if !(min_f2 > 0.0) {
        failures.push(format!("ConvexityViolation: min f'' on grid = {min_f2}"));
    }
    if max_f1_err > DERIVATIVE_TOL {
        failures.push(format!(
            "FirstDerivativeMismatch: max relative error {max_f1_err}"
        ));
    }
    if max_f2_err > DERIVATIVE_TOL {
        failures.push(format!(
            "SecondDerivativeMismatch: max relative error {max_f2_err}"
        ));
    }

    GeneratorReport {
        id: gen.id().to_string(),
        f_at_one,
        f2_at_one: gen.f2(1.0),
        min_f2_on_grid: min_f2,
        max_f1_fd_error: max_f1_err,
        max_f2_fd_error: max_f2_err,
        failures,
    }
}
