//! Composite Gauss-Legendre quadrature on intervals, planar regions and boundary paths.
//!
//! Every integral is computed twice, on `n` panels and on `n / refine_factor` panels;
//! the fine value is returned and the difference is the error estimate. Panel sums are
//! reduced in a fixed order, so results are bit-for-bit reproducible.

use crate::error::{Error, Result};
use crate::geometry::{cosine_map, BoundaryPath, PlanarRegion, Vec2};
use crate::scalar::Scalar;
use crate::stokes::PullbackOneForm;

/// Quadrature resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre nodes per panel.
    pub order: usize,
    /// Panels per 1D integral (and per boundary segment).
    pub panels_1d: usize,
    /// Panels per axis of a 2D integral.
    pub panels_2d: usize,
    /// Ratio between the fine and the coarse panel count of the error estimate.
    pub refine_factor: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            order: 8,
            panels_1d: 256,
            panels_2d: 128,
            refine_factor: 2,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::Quadrature(format!(
                "order must be >= 2, got {}",
                self.order
            )));
        }
        if self.panels_1d < 1 || self.panels_2d < 1 {
            return Err(Error::Quadrature("panel counts must be >= 1".into()));
        }
        if self.refine_factor < 2 {
            return Err(Error::Quadrature("refine_factor must be >= 2".into()));
        }
        Ok(())
    }

    fn coarse(&self, panels: usize) -> usize {
        (panels / self.refine_factor).max(1)
    }
}

/// Integral value with its refinement error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult<T> {
    pub value: T,
    /// `|value - value on coarser panels|`.
    pub error_estimate: T,
    /// Integrand evaluations spent, fine and coarse passes together.
    pub evaluations: usize,
}

impl<T: Scalar> IntegralResult<T> {
    /// A closed-form value wrapped as a result with zero error.
    pub fn exact(value: T) -> Self {
        Self {
            value,
            error_estimate: T::zero(),
            evaluations: 1,
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> GaussLegendre<T> {
    /// Roots of `P_n` by Newton iteration from the Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        }
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node positions and weights of the rule mapped to `[a, b]`.
    fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) * T::lit(0.5);
        let mid = a + half;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn check_finite<T: Scalar>(y: T, location: impl FnOnce() -> String) -> Result<T> {
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Evaluation {
            location: location(),
        })
    }
}

/// Composite rule on `[a, b]` with `panels` panels; returns `(value, evaluations)`.
fn composite_1d<T, F>(
    rule: &GaussLegendre<T>,
    f: &mut F,
    a: T,
    b: T,
    panels: usize,
) -> Result<(T, usize)>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    let width = (b - a) / T::lit(panels as f64);
    let mut total = T::zero();
    for k in 0..panels {
        let lo = a + width * T::lit(k as f64);
        let hi = if k + 1 == panels { b } else { lo + width };
        let mut panel = T::zero();
        for (x, w) in rule.mapped(lo, hi) {
            let y = check_finite(f(x)?, || format!("x = {x}"))?;
            panel = panel + w * y;
        }
        total = total + panel;
    }
    Ok((total, panels * rule.len()))
}

fn check_interval<T: Scalar>(a: T, b: T) -> Result<()> {
    if a < b && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::Quadrature(format!(
            "interval needs a < b, got [{a}, {b}]"
        )))
    }
}

/// Fallible integrand version of [`integrate_1d`].
pub fn try_integrate_1d<T, F>(
    mut f: F,
    a: T,
    b: T,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    spec.validate()?;
    check_interval(a, b)?;
    let rule = GaussLegendre::new(spec.order);
    let (fine, n1) = composite_1d(&rule, &mut f, a, b, spec.panels_1d)?;
    let (coarse, n2) = composite_1d(&rule, &mut f, a, b, spec.coarse(spec.panels_1d))?;
    Ok(IntegralResult {
        value: fine,
        error_estimate: (fine - coarse).abs(),
        evaluations: n1 + n2,
    })
}

/// `integral_a^b f(x) dx`.
pub fn integrate_1d<T, F>(f: F, a: T, b: T, spec: &QuadratureSpec) -> Result<IntegralResult<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    try_integrate_1d(|x| Ok(f(x)), a, b, spec)
}

/// Like [`integrate_1d`] after the substitution `x = a + (b - a)(1 - cos(pi s))/2`,
/// which clusters nodes at both ends. Used for integrands with square-root endpoint
/// behaviour, e.g. the width of a disc.
pub fn integrate_1d_smoothed<T, F>(
    f: F,
    a: T,
    b: T,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    check_interval(a, b)?;
    integrate_1d(
        |s| {
            let (x, dx) = cosine_map(a, b, s);
            f(x) * dx
        },
        T::zero(),
        T::one(),
        spec,
    )
}

fn composite_2d<T, F>(
    rule: &GaussLegendre<T>,
    f: &mut F,
    region: &PlanarRegion<T>,
    panels: usize,
) -> Result<(T, usize)>
where
    T: Scalar,
    F: FnMut(Vec2<T>) -> Result<T>,
{
    let mut evals = 0usize;
    let mut at = |p: Vec2<T>, evals: &mut usize| -> Result<T> {
        *evals += 1;
        check_finite(f(p)?, || format!("(u, v) = {p}"))
    };
    let mut total = T::zero();
    match region {
        PlanarRegion::Rectangle { u, v } => {
            let wu = (u.1 - u.0) / T::lit(panels as f64);
            let wv = (v.1 - v.0) / T::lit(panels as f64);
            for i in 0..panels {
                let ulo = u.0 + wu * T::lit(i as f64);
                let uhi = if i + 1 == panels { u.1 } else { ulo + wu };
                for (x, wx) in rule.mapped(ulo, uhi) {
                    let mut inner = T::zero();
                    for j in 0..panels {
                        let vlo = v.0 + wv * T::lit(j as f64);
                        let vhi = if j + 1 == panels { v.1 } else { vlo + wv };
                        let mut panel = T::zero();
                        for (y, wy) in rule.mapped(vlo, vhi) {
                            panel = panel + wy * at(Vec2::new(x, y), &mut evals)?;
                        }
                        inner = inner + panel;
                    }
                    total = total + wx * inner;
                }
            }
        }
        PlanarRegion::TypeI { a, b, lower, upper }
        | PlanarRegion::TypeII { a, b, lower, upper } => {
            let transposed = matches!(region, PlanarRegion::TypeII { .. });
            let ws = T::one() / T::lit(panels as f64);
            for i in 0..panels {
                let slo = ws * T::lit(i as f64);
                let shi = if i + 1 == panels { T::one() } else { slo + ws };
                for (s, w_s) in rule.mapped(slo, shi) {
                    let (x, dx) = cosine_map(*a, *b, s);
                    let (g1, g2) = (lower.eval(x), upper.eval(x));
                    if !(g2 > g1) {
                        continue;
                    }
                    let wy = (g2 - g1) / T::lit(panels as f64);
                    let mut inner = T::zero();
                    for j in 0..panels {
                        let ylo = g1 + wy * T::lit(j as f64);
                        let yhi = if j + 1 == panels { g2 } else { ylo + wy };
                        let mut panel = T::zero();
                        for (y, w_y) in rule.mapped(ylo, yhi) {
                            let p = if transposed {
                                Vec2::new(y, x)
                            } else {
                                Vec2::new(x, y)
                            };
                            panel = panel + w_y * at(p, &mut evals)?;
                        }
                        inner = inner + panel;
                    }
                    total = total + w_s * dx * inner;
                }
            }
        }
    }
    Ok((total, evals))
}

/// Fallible integrand version of [`integrate_2d`].
pub fn try_integrate_2d<T, F>(
    mut f: F,
    region: &PlanarRegion<T>,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<T>>
where
    T: Scalar,
    F: FnMut(Vec2<T>) -> Result<T>,
{
    spec.validate()?;
    let rule = GaussLegendre::new(spec.order);
    let (fine, n1) = composite_2d(&rule, &mut f, region, spec.panels_2d)?;
    let (coarse, n2) = composite_2d(&rule, &mut f, region, spec.coarse(spec.panels_2d))?;
    Ok(IntegralResult {
        value: fine,
        error_estimate: (fine - coarse).abs(),
        evaluations: n1 + n2,
    })
}

/// `iint_D f(u, v) du dv`. Rectangles use a tensor-product rule; for simple regions
/// the outer axis is cosine-substituted and the inner axis spans `[g1, g2]` affinely.
pub fn integrate_2d<T, F>(
    f: F,
    region: &PlanarRegion<T>,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<T>>
where
    T: Scalar,
    F: Fn(Vec2<T>) -> T,
{
    try_integrate_2d(|p| Ok(f(p)), region, spec)
}

/// `oint P du + Q dv` along `path`: per segment, `integral_0^1 P u' + Q v' dt`.
pub fn integrate_path<T: Scalar>(
    form: &PullbackOneForm<T>,
    path: &BoundaryPath<T>,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<T>> {
    spec.validate()?;
    let rule = GaussLegendre::new(spec.order);
    let mut fine = T::zero();
    let mut coarse = T::zero();
    let mut evals = 0;
    for seg in path.segments() {
        let mut integrand = |t: T| -> Result<T> {
            let p = seg.point(t);
            let d = seg.tangent(t);
            Ok(form.p(p)? * d.u + form.q(p)? * d.v)
        };
        let (f, n1) = composite_1d(&rule, &mut integrand, T::zero(), T::one(), spec.panels_1d)?;
        let (c, n2) = composite_1d(
            &rule,
            &mut integrand,
            T::zero(),
            T::one(),
            spec.coarse(spec.panels_1d),
        )?;
        fine = fine + f;
        coarse = coarse + c;
        evals += n1 + n2;
    }
    Ok(IntegralResult {
        value: fine,
        error_estimate: (fine - coarse).abs(),
        evaluations: evals,
    })
}
