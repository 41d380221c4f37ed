//! Green's theorem and the parametric forms of Stokes' theorem.
//!
//! The line integral over an image curve `C = r(dD)` is always computed through the
//! pullback `oint_dD (G . r_u) du + (G . r_v) dv`, so self-intersecting images need no
//! special treatment. Three identities are checked:
//!
//! * Green: `oint_dD P du + Q dv = iint_D (Q_u - P_v)`,
//! * general form: `oint_C G . dr = iint_D (G_u . r_v - G_v . r_u)` for any `G` on `U`,
//! * curl form: `oint_C F . dr = iint_D (curl F)(r) . (r_u x r_v)` with `G = F o r`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{ParamSurface, PlanarRegion, Vec2, Vec3};
use crate::quadrature::{self, IntegralResult, QuadratureSpec};
use crate::scalar::Scalar;

/// Row-major 3x3 matrix; `m[i][j]` is the derivative of component `i` along axis `j`
/// when used as a Jacobian.
pub type Mat3<T> = [[T; 3]; 3];

type Field3Fn<T> = Arc<dyn Fn(Vec3<T>) -> Vec3<T> + Send + Sync>;
type JacobianFn<T> = Arc<dyn Fn(Vec3<T>) -> Mat3<T> + Send + Sync>;
type GuardFn<T> = Arc<dyn Fn(Vec3<T>) -> bool + Send + Sync>;
type Field2Fn<T> = Arc<dyn Fn(Vec2<T>) -> Result<Vec3<T>> + Send + Sync>;
type Field2PartialsFn<T> = Arc<dyn Fn(Vec2<T>) -> Result<(Vec3<T>, Vec3<T>)> + Send + Sync>;
type FormFn<T> = Arc<dyn Fn(Vec2<T>) -> Result<T> + Send + Sync>;

/// Vector field `F` on (part of) image space.
#[derive(Clone)]
pub struct VectorField3<T> {
    eval: Field3Fn<T>,
    jacobian: Option<JacobianFn<T>>,
    curl: Option<Field3Fn<T>>,
    guard: Option<GuardFn<T>>,
}

impl<T> fmt::Debug for VectorField3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField3")
            .field("analytic_jacobian", &self.jacobian.is_some())
            .field("analytic_curl", &self.curl.is_some())
            .field("guarded", &self.guard.is_some())
            .finish()
    }
}

impl<T: Scalar> VectorField3<T> {
    pub fn new(f: impl Fn(Vec3<T>) -> Vec3<T> + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(f),
            jacobian: None,
            curl: None,
            guard: None,
        }
    }

    pub fn constant(c: Vec3<T>) -> Self {
        Self::new(move |_| c)
            .with_jacobian(|_| [[T::zero(); 3]; 3])
            .with_curl(|_| Vec3::zero())
    }

    pub fn with_jacobian(mut self, j: impl Fn(Vec3<T>) -> Mat3<T> + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(j));
        self
    }

    pub fn with_curl(mut self, c: impl Fn(Vec3<T>) -> Vec3<T> + Send + Sync + 'static) -> Self {
        self.curl = Some(Arc::new(c));
        self
    }

    /// Restricts the field to points where `guard` holds.
    pub fn with_guard(mut self, g: impl Fn(Vec3<T>) -> bool + Send + Sync + 'static) -> Self {
        self.guard = Some(Arc::new(g));
        self
    }

    /// Drops the closed-form Jacobian and curl.
    pub fn without_derivatives(mut self) -> Self {
        self.jacobian = None;
        self.curl = None;
        self
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn is_defined(&self, x: Vec3<T>) -> bool {
        x.is_finite() && self.guard.as_ref().is_none_or(|g| g(x))
    }

    fn check(&self, x: Vec3<T>) -> Result<()> {
        if self.is_defined(x) {
            Ok(())
        } else {
            Err(Error::FieldDomain {
                x: x.x.as_f64(),
                y: x.y.as_f64(),
                z: x.z.as_f64(),
            })
        }
    }

    pub fn eval(&self, x: Vec3<T>) -> Result<Vec3<T>> {
        self.check(x)?;
        Ok((self.eval)(x))
    }

    /// Jacobian at `x`; central differences when no closed form was supplied.
    pub fn jacobian(&self, x: Vec3<T>) -> Result<Mat3<T>> {
        self.check(x)?;
        match &self.jacobian {
            Some(j) => Ok(j(x)),
            None => self.fd_jacobian(x),
        }
    }

    fn fd_jacobian(&self, x: Vec3<T>) -> Result<Mat3<T>> {
        let h = T::fd_step(x.max_abs());
        let mut m = [[T::zero(); 3]; 3];
        for j in 0..3 {
            let mut e = [T::zero(); 3];
            e[j] = h;
            let e = Vec3::from_array(e);
            let d = (self.eval(x + e)? - self.eval(x - e)?) / (h + h);
            let d = d.to_array();
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = d[i];
            }
        }
        Ok(m)
    }

    /// `curl F (x)`: closed form when supplied, else from the Jacobian.
    pub fn curl(&self, x: Vec3<T>) -> Result<Vec3<T>> {
        self.check(x)?;
        if let Some(c) = &self.curl {
            return Ok(c(x));
        }
        Ok(curl_of_jacobian(&self.jacobian(x)?))
    }
}

/// `(dF3/dy - dF2/dz, dF1/dz - dF3/dx, dF2/dx - dF1/dy)`.
pub fn curl_of_jacobian<T: Scalar>(m: &Mat3<T>) -> Vec3<T> {
    Vec3::new(m[2][1] - m[1][2], m[0][2] - m[2][0], m[1][0] - m[0][1])
}

fn mat_vec<T: Scalar>(m: &Mat3<T>, v: Vec3<T>) -> Vec3<T> {
    let r = |i: usize| m[i][0] * v.x + m[i][1] * v.y + m[i][2] * v.z;
    Vec3::new(r(0), r(1), r(2))
}

/// Curl of `f` at `x`.
pub fn curl<T: Scalar>(f: &VectorField3<T>, x: Vec3<T>) -> Result<Vec3<T>> {
    f.curl(x)
}

/// Vector field `G` on the parameter neighbourhood `U`.
#[derive(Clone)]
pub struct VectorField2to3<T> {
    eval: Field2Fn<T>,
    partials: Option<Field2PartialsFn<T>>,
}

impl<T> fmt::Debug for VectorField2to3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField2to3")
            .field("analytic_partials", &self.partials.is_some())
            .finish()
    }
}

impl<T: Scalar> VectorField2to3<T> {
    pub fn new(g: impl Fn(Vec2<T>) -> Vec3<T> + Send + Sync + 'static) -> Self {
        Self::try_new(move |p| Ok(g(p)))
    }

    pub fn try_new(g: impl Fn(Vec2<T>) -> Result<Vec3<T>> + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(g),
            partials: None,
        }
    }

    pub fn constant(c: Vec3<T>) -> Self {
        Self::new(move |_| c).with_partials(|_| (Vec3::zero(), Vec3::zero()))
    }

    pub fn with_partials(
        self,
        d: impl Fn(Vec2<T>) -> (Vec3<T>, Vec3<T>) + Send + Sync + 'static,
    ) -> Self {
        self.try_with_partials(move |p| Ok(d(p)))
    }

    pub fn try_with_partials(
        mut self,
        d: impl Fn(Vec2<T>) -> Result<(Vec3<T>, Vec3<T>)> + Send + Sync + 'static,
    ) -> Self {
        self.partials = Some(Arc::new(d));
        self
    }

    pub fn without_partials(mut self) -> Self {
        self.partials = None;
        self
    }

    pub fn has_analytic_partials(&self) -> bool {
        self.partials.is_some()
    }

    pub fn eval(&self, p: Vec2<T>) -> Result<Vec3<T>> {
        (self.eval)(p)
    }

    /// `(G_u, G_v)`; central differences when no closed form was supplied.
    pub fn partials(&self, p: Vec2<T>) -> Result<(Vec3<T>, Vec3<T>)> {
        match &self.partials {
            Some(d) => d(p),
            None => self.fd_partials(p, T::fd_step(p.max_abs())),
        }
    }

    pub fn fd_partials(&self, p: Vec2<T>, h: T) -> Result<(Vec3<T>, Vec3<T>)> {
        let du = Vec2::new(h, T::zero());
        let dv = Vec2::new(T::zero(), h);
        let two_h = h + h;
        Ok((
            (self.eval(p + du)? - self.eval(p - du)?) / two_h,
            (self.eval(p + dv)? - self.eval(p - dv)?) / two_h,
        ))
    }
}

/// The one-form `P du + Q dv` on the parameter plane.
#[derive(Clone)]
pub struct PullbackOneForm<T> {
    p: FormFn<T>,
    q: FormFn<T>,
    /// Optional closed forms of `P_v` and `Q_u`.
    dp_dv: Option<FormFn<T>>,
    dq_du: Option<FormFn<T>>,
}

impl<T> fmt::Debug for PullbackOneForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PullbackOneForm")
            .field(
                "analytic_partials",
                &(self.dp_dv.is_some() && self.dq_du.is_some()),
            )
            .finish()
    }
}

impl<T: Scalar> PullbackOneForm<T> {
    pub fn new(
        p: impl Fn(Vec2<T>) -> T + Send + Sync + 'static,
        q: impl Fn(Vec2<T>) -> T + Send + Sync + 'static,
    ) -> Self {
        Self::try_new(move |x| Ok(p(x)), move |x| Ok(q(x)))
    }

    pub fn try_new(
        p: impl Fn(Vec2<T>) -> Result<T> + Send + Sync + 'static,
        q: impl Fn(Vec2<T>) -> Result<T> + Send + Sync + 'static,
    ) -> Self {
        Self {
            p: Arc::new(p),
            q: Arc::new(q),
            dp_dv: None,
            dq_du: None,
        }
    }

    pub fn zero() -> Self {
        Self::new(|_| T::zero(), |_| T::zero()).with_partials(|_| T::zero(), |_| T::zero())
    }

    /// Supplies `P_v` and `Q_u` in closed form.
    pub fn with_partials(
        mut self,
        dp_dv: impl Fn(Vec2<T>) -> T + Send + Sync + 'static,
        dq_du: impl Fn(Vec2<T>) -> T + Send + Sync + 'static,
    ) -> Self {
        self.dp_dv = Some(Arc::new(move |x| Ok(dp_dv(x))));
        self.dq_du = Some(Arc::new(move |x| Ok(dq_du(x))));
        self
    }

    pub fn p(&self, x: Vec2<T>) -> Result<T> {
        (self.p)(x)
    }

    pub fn q(&self, x: Vec2<T>) -> Result<T> {
        (self.q)(x)
    }

    /// `Q_u - P_v`, the Green integrand.
    pub fn exterior_derivative(&self, x: Vec2<T>) -> Result<T> {
        match (&self.dp_dv, &self.dq_du) {
            (Some(pv), Some(qu)) => Ok(qu(x)? - pv(x)?),
            _ => {
                let h = T::fd_step(x.max_abs());
                let du = Vec2::new(h, T::zero());
                let dv = Vec2::new(T::zero(), h);
                let qu = (self.q(x + du)? - self.q(x - du)?) / (h + h);
                let pv = (self.p(x + dv)? - self.p(x - dv)?) / (h + h);
                Ok(qu - pv)
            }
        }
    }
}

/// `P = G . r_u`, `Q = G . r_v`.
pub fn pullback<T: Scalar>(g: &VectorField2to3<T>, s: &ParamSurface<T>) -> PullbackOneForm<T> {
    let (g1, s1) = (g.clone(), s.clone());
    let (g2, s2) = (g.clone(), s.clone());
    PullbackOneForm::try_new(
        move |p| Ok(g1.eval(p)?.dot(s1.partials(p)?.0)),
        move |p| Ok(g2.eval(p)?.dot(s2.partials(p)?.1)),
    )
}

/// `G = F o r`. Partials follow the chain rule when both the Jacobian of `F` and the
/// partials of `r` are closed-form, otherwise central differences in `(u, v)`.
pub fn compose_field<T: Scalar>(f: &VectorField3<T>, s: &ParamSurface<T>) -> VectorField2to3<T> {
    let (fe, se) = (f.clone(), s.clone());
    let g = VectorField2to3::try_new(move |p| fe.eval(se.eval(p)?));
    if f.has_analytic_jacobian() && s.has_analytic_partials() {
        let (f, s) = (f.clone(), s.clone());
        g.try_with_partials(move |p| {
            let j = f.jacobian(s.eval(p)?)?;
            let (ru, rv) = s.partials(p)?;
            Ok((mat_vec(&j, ru), mat_vec(&j, rv)))
        })
    } else {
        g
    }
}

/// Left side of Green's theorem: the path integral over the counterclockwise boundary.
pub fn greens_lhs<T: Scalar>(
    form: &PullbackOneForm<T>,
    d: &PlanarRegion<T>,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<T>> {
    quadrature::integrate_path(form, &d.boundary_path(), spec)
}

/// Right side of Green's theorem: `iint_D (Q_u - P_v)`.
pub fn greens_rhs<T: Scalar>(
    form: &PullbackOneForm<T>,
    d: &PlanarRegion<T>,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<T>> {
    quadrature::try_integrate_2d(|p| form.exterior_derivative(p), d, spec)
}

/// `oint_C G . dr`, computed as the pullback integral over `dD`.
pub fn stokes_general_lhs<T: Scalar>(
    g: &VectorField2to3<T>,
    s: &ParamSurface<T>,
    d: &PlanarRegion<T>,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<T>> {
    greens_lhs(&pullback(g, s), d, spec)
}

/// `G_u . r_v - G_v . r_u` at `p`.
pub fn general_integrand<T: Scalar>(
    g: &VectorField2to3<T>,
    s: &ParamSurface<T>,
    p: Vec2<T>,
) -> Result<T> {
    let (gu, gv) = g.partials(p)?;
    let (ru, rv) = s.partials(p)?;
    Ok(gu.dot(rv) - gv.dot(ru))
}

/// `iint_D (G_u . r_v - G_v . r_u) du dv`.
pub fn stokes_general_rhs<T: Scalar>(
    g: &VectorField2to3<T>,
    s: &ParamSurface<T>,
    d: &PlanarRegion<T>,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<T>> {
    quadrature::try_integrate_2d(|p| general_integrand(g, s, p), d, spec)
}

/// `(curl F)(r(p)) . (r_u x r_v)(p)`.
pub fn curl_integrand<T: Scalar>(
    f: &VectorField3<T>,
    s: &ParamSurface<T>,
    p: Vec2<T>,
) -> Result<T> {
    let x = s.eval(p)?;
    let (ru, rv) = s.partials(p)?;
    Ok(f.curl(x)?.dot(ru.cross(rv)))
}

/// `iint_D (curl F)(r) . (r_u x r_v) du dv`. A guard failure at any node fails the
/// whole integral.
pub fn stokes_curl_rhs<T: Scalar>(
    f: &VectorField3<T>,
    s: &ParamSurface<T>,
    d: &PlanarRegion<T>,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<T>> {
    quadrature::try_integrate_2d(|p| curl_integrand(f, s, p), d, spec)
}

/// `|(G_u . r_v - G_v . r_u) - (curl F)(r) . (r_u x r_v)|` at `p` with `G = F o r`.
pub fn integrand_identity_gap<T: Scalar>(
    f: &VectorField3<T>,
    s: &ParamSurface<T>,
    p: Vec2<T>,
) -> Result<T> {
    let g = compose_field(f, s);
    let general = general_integrand(&g, s, p)?;
    let curl = curl_integrand(f, s, p)?;
    Ok((general - curl).abs())
}

/// Side-by-side comparison of the two sides of an identity.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport<T> {
    pub scenario_name: String,
    pub lhs: Option<IntegralResult<T>>,
    pub rhs: Option<IntegralResult<T>>,
    /// `|lhs - rhs|`, absent when a side failed.
    pub abs_diff: Option<T>,
    pub tolerance: T,
    /// Closed-form value both sides are additionally checked against.
    pub expected: Option<T>,
    pub pass: bool,
    pub parameters: BTreeMap<String, T>,
    pub error: Option<String>,
}

impl<T: Scalar> VerificationReport<T> {
    /// Builds a report; `pass` holds iff both sides exist and agree within `tolerance`.
    pub fn from_sides(
        name: impl Into<String>,
        lhs: Result<IntegralResult<T>>,
        rhs: Result<IntegralResult<T>>,
        tolerance: T,
    ) -> Self {
        let mut report = Self {
            scenario_name: name.into(),
            lhs: None,
            rhs: None,
            abs_diff: None,
            tolerance,
            expected: None,
            pass: false,
            parameters: BTreeMap::new(),
            error: None,
        };
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                let diff = (l.value - r.value).abs();
                report.lhs = Some(l);
                report.rhs = Some(r);
                report.abs_diff = Some(diff);
            }
            (l, r) => {
                let errors: Vec<String> = [l.as_ref().err(), r.as_ref().err()]
                    .into_iter()
                    .flatten()
                    .map(|e| e.to_string())
                    .collect();
                report.lhs = l.ok();
                report.rhs = r.ok();
                report.error = Some(errors.join("; "));
            }
        }
        report.update_pass();
        report
    }

    /// A report that failed before either side could be computed.
    pub fn failed(name: impl Into<String>, error: &Error, tolerance: T) -> Self {
        Self::from_sides(name, Err(error.clone()), Err(error.clone()), tolerance)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.scenario_name = name.into();
        self
    }

    pub fn with_parameter(mut self, key: impl Into<String>, value: T) -> Self {
        self.parameters.insert(key.into(), value);
        self
    }

    /// Also requires both sides to match `expected` within the tolerance.
    pub fn with_expected(mut self, expected: T) -> Self {
        self.expected = Some(expected);
        self.update_pass();
        self
    }

    /// Deviation of the worse side from the expected value.
    pub fn expected_diff(&self) -> Option<T> {
        let e = self.expected?;
        let l = self.lhs?.value;
        let r = self.rhs?.value;
        Some((l - e).abs().max((r - e).abs()))
    }

    fn update_pass(&mut self) {
        let sides_ok = self.error.is_none() && self.abs_diff.is_some_and(|d| d <= self.tolerance);
        let expected_ok = match self.expected {
            None => true,
            Some(_) => self.expected_diff().is_some_and(|d| d <= self.tolerance),
        };
        self.pass = sides_ok && expected_ok;
    }
}

/// General form: pullback path integral versus `iint (G_u . r_v - G_v . r_u)`.
pub fn verify_general<T: Scalar>(
    g: &VectorField2to3<T>,
    s: &ParamSurface<T>,
    d: &PlanarRegion<T>,
    spec: &QuadratureSpec,
    tol: T,
) -> VerificationReport<T> {
    VerificationReport::from_sides(
        "general",
        stokes_general_lhs(g, s, d, spec),
        stokes_general_rhs(g, s, d, spec),
        tol,
    )
}

/// Curl form: pullback path integral of `F o r` versus the curl flux through `r(D)`.
pub fn verify_curl_form<T: Scalar>(
    f: &VectorField3<T>,
    s: &ParamSurface<T>,
    d: &PlanarRegion<T>,
    spec: &QuadratureSpec,
    tol: T,
) -> VerificationReport<T> {
    let g = compose_field(f, s);
    VerificationReport::from_sides(
        "curl-form",
        stokes_general_lhs(&g, s, d, spec),
        stokes_curl_rhs(f, s, d, spec),
        tol,
    )
}

/// Green's theorem on a planar region.
pub fn verify_green<T: Scalar>(
    form: &PullbackOneForm<T>,
    d: &PlanarRegion<T>,
    spec: &QuadratureSpec,
    tol: T,
) -> VerificationReport<T> {
    VerificationReport::from_sides(
        "green",
        greens_lhs(form, d, spec),
        greens_rhs(form, d, spec),
        tol,
    )
}
