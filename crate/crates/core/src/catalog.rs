//! Named surfaces, fields and scenarios built around the Möbius strip
//!
//! `r(u, v) = ((1 + v cos(u/2)) cos u, (1 + v cos(u/2)) sin u, v sin(u/2))`
//!
//! over `D_delta = [0, 2 pi] x [-delta, delta]`, its boundary curve `B`, and the orientable
//! ruled surface `S^` spanning `B`.

use std::fmt;

use crate::analysis;
use crate::error::{Error, Result};
use crate::geometry::{ParamBox, ParamSurface, PlanarRegion, Profile, Vec2, Vec3};
use crate::quadrature::{self, IntegralResult, QuadratureSpec};
use crate::scalar::Scalar;
use crate::stokes::{
    compose_field, greens_lhs, greens_rhs, stokes_curl_rhs, stokes_general_lhs, stokes_general_rhs,
    Mat3, PullbackOneForm, VectorField2to3, VectorField3, VerificationReport,
};

pub const DEFAULT_DELTA: f64 = 0.3;

/// Stable scenario identifiers, in registry (and report) order.
pub const SCENARIO_NAMES: [&str; 8] = [
    "moebius-general-u2",
    "moebius-pullback-singular",
    "boundary-B-4pi",
    "spanning-linear",
    "spanning-zaxis",
    "self-intersect-delta3",
    "green-square",
    "green-triangle",
];

/// Matrix used by the `spanning-linear` scenario.
pub const SPANNING_LINEAR_MATRIX: [[f64; 3]; 3] = [
    [0.25, 0.75, -0.5],
    [-0.5, 0.125, 0.375],
    [0.625, -0.25, -1.0],
];

fn positive_delta<T: Scalar>(delta: T) -> Result<()> {
    if delta > T::zero() && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "half-width delta must be positive, got {delta}"
        )))
    }
}

/// Möbius map.
#[inline]
pub fn moebius_point<T: Scalar>(u: T, v: T) -> Vec3<T> {
    let half = T::lit(0.5);
    let (s, c) = (u * half).sin_cos();
    let rho = T::one() + v * c;
    Vec3::new(rho * u.cos(), rho * u.sin(), v * s)
}

/// `(r_u, r_v)` of the Möbius map.
#[inline]
pub fn moebius_partials<T: Scalar>(u: T, v: T) -> (Vec3<T>, Vec3<T>) {
    let half = T::lit(0.5);
    let (s, c) = (u * half).sin_cos();
    let (su, cu) = u.sin_cos();
    let rho = T::one() + v * c;
    let ru = Vec3::new(
        -(v * s * half) * cu - rho * su,
        -(v * s * half) * su + rho * cu,
        v * c * half,
    );
    let rv = Vec3::new(c * cu, c * su, s);
    (ru, rv)
}

/// Möbius strip of half-width `delta` and its parameter rectangle.
pub fn moebius<T: Scalar>(delta: T) -> Result<(ParamSurface<T>, PlanarRegion<T>)> {
    positive_delta(delta)?;
    let two_pi = T::TAU();
    let region = PlanarRegion::rectangle(T::zero(), two_pi, -delta, delta)?;
    let surface = ParamSurface::new(
        ParamBox::new(T::zero(), two_pi, -delta, delta),
        |p: Vec2<T>| moebius_point(p.u, p.v),
    )
    .with_partials(|p| moebius_partials(p.u, p.v));
    Ok((surface, region))
}

/// `F(x, y, z) = (-y, x, 0) / (x^2 + y^2)`, undefined on the z-axis, curl-free elsewhere.
pub fn singular_field<T: Scalar>() -> VectorField3<T> {
    VectorField3::new(|p: Vec3<T>| {
        let rho2 = p.x * p.x + p.y * p.y;
        Vec3::new(-p.y / rho2, p.x / rho2, T::zero())
    })
    .with_jacobian(|p| {
        let rho2 = p.x * p.x + p.y * p.y;
        let rho4 = rho2 * rho2;
        let two = T::lit(2.0);
        let xy = two * p.x * p.y / rho4;
        let d = (p.y * p.y - p.x * p.x) / rho4;
        let z = T::zero();
        [[xy, d, z], [d, -xy, z], [z, z, z]]
    })
    .with_curl(|_| Vec3::zero())
    .with_guard(|p| p.x * p.x + p.y * p.y != T::zero())
}

/// The boundary `B` of the Möbius strip, `u -> r(u, delta)` on `[0, 4 pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCurve<T> {
    delta: T,
}

impl<T: Scalar> BoundaryCurve<T> {
    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn period(&self) -> T {
        T::TAU() + T::TAU()
    }

    pub fn point(&self, u: T) -> Vec3<T> {
        moebius_point(u, self.delta)
    }

    pub fn tangent(&self, u: T) -> Vec3<T> {
        moebius_partials(u, self.delta).0
    }
}

/// `B` for `0 < delta < 1`, where it stays off the z-axis.
pub fn boundary_curve_b<T: Scalar>(delta: T) -> Result<BoundaryCurve<T>> {
    positive_delta(delta)?;
    if delta >= T::one() {
        return Err(Error::Parameter(format!(
            "boundary curve B needs delta < 1 to avoid the z-axis, got {delta}"
        )));
    }
    Ok(BoundaryCurve { delta })
}

/// `integral_0^{4 pi} F(r~(u)) . r~'(u) du`.
pub fn line_integral_over_b<T: Scalar>(
    f: &VectorField3<T>,
    delta: T,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<T>> {
    let b = boundary_curve_b(delta)?;
    quadrature::try_integrate_1d(
        |u| Ok(f.eval(b.point(u))?.dot(b.tangent(u))),
        T::zero(),
        b.period(),
        spec,
    )
}

/// Ruled surface `(1 - t) r(u, delta) + t r(2 pi - u, delta)` over `[-pi, pi] x [0, 1]`.
pub fn spanning_surface<T: Scalar>(delta: T) -> Result<(ParamSurface<T>, PlanarRegion<T>)> {
    positive_delta(delta)?;
    let pi = T::PI();
    let region = PlanarRegion::rectangle(-pi, pi, T::zero(), T::one())?;
    let surface = ParamSurface::new(
        ParamBox::new(-pi, pi, T::zero(), T::one()),
        move |p: Vec2<T>| {
            let a = moebius_point(p.u, delta);
            let b = moebius_point(T::TAU() - p.u, delta);
            a * (T::one() - p.v) + b * p.v
        },
    )
    .with_partials(move |p: Vec2<T>| {
        let w = T::TAU() - p.u;
        let (au, _) = moebius_partials(p.u, delta);
        let (bu, _) = moebius_partials(w, delta);
        let ru = au * (T::one() - p.v) - bu * p.v;
        let rt = moebius_point(w, delta) - moebius_point(p.u, delta);
        (ru, rt)
    });
    Ok((surface, region))
}

/// `G(u, v) = (u^2, 0, 0)`.
pub fn u_squared_field<T: Scalar>() -> VectorField2to3<T> {
    VectorField2to3::new(|p: Vec2<T>| Vec3::new(p.u * p.u, T::zero(), T::zero()))
        .with_partials(|p| (Vec3::new(p.u + p.u, T::zero(), T::zero()), Vec3::zero()))
}

/// `F(x) = A x`.
pub fn linear_field<T: Scalar>(a: Mat3<T>) -> VectorField3<T> {
    VectorField3::new(move |p: Vec3<T>| {
        let r = |i: usize| a[i][0] * p.x + a[i][1] * p.y + a[i][2] * p.z;
        Vec3::new(r(0), r(1), r(2))
    })
    .with_jacobian(move |_| a)
    .with_curl(move |_| Vec3::new(a[2][1] - a[1][2], a[0][2] - a[2][0], a[1][0] - a[0][1]))
}

/// Field whose components are polynomials of total degree at most two:
/// `F_i(x) = c_i + sum_j b_ij x_j + x^T M_i x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticField<T> {
    pub constant: [T; 3],
    pub linear: Mat3<T>,
    pub quadratic: [Mat3<T>; 3],
}

impl<T: Scalar> QuadraticField<T> {
    pub fn eval(&self, p: Vec3<T>) -> Vec3<T> {
        let x = p.to_array();
        let mut out = [T::zero(); 3];
        for (i, o) in out.iter_mut().enumerate() {
            let mut s = self.constant[i];
            for j in 0..3 {
                s = s + self.linear[i][j] * x[j];
                for k in 0..3 {
                    s = s + self.quadratic[i][j][k] * x[j] * x[k];
                }
            }
            *o = s;
        }
        Vec3::from_array(out)
    }

    pub fn jacobian(&self, p: Vec3<T>) -> Mat3<T> {
        let x = p.to_array();
        let mut m = self.linear;
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                for k in 0..3 {
                    *entry = *entry + (self.quadratic[i][j][k] + self.quadratic[i][k][j]) * x[k];
                }
            }
        }
        m
    }

    /// The field with closed-form Jacobian (and hence curl).
    pub fn to_field(self) -> VectorField3<T> {
        VectorField3::new(move |p| self.eval(p)).with_jacobian(move |p| self.jacobian(p))
    }
}

/// Closed form of both sides of the curl-form identity for `F = A x` on `S^`:
/// `-pi (2 + delta^2)(a12 - a21) - (pi delta^2 / 2)(a13 - a31)`.
pub fn spanning_linear_closed_form<T: Scalar>(a: &Mat3<T>, delta: T) -> T {
    let pi = T::PI();
    let d2 = delta * delta;
    -(pi * (T::lit(2.0) + d2) * (a[0][1] - a[1][0])) - pi * d2 * T::lit(0.5) * (a[0][2] - a[2][0])
}

/// Value of both sides of the general form for `G = (u^2, 0, 0)` on the strip.
pub fn moebius_u2_closed_form<T: Scalar>(delta: T) -> T {
    -T::lit(160.0) * delta / T::lit(9.0)
}

/// Closed-form value a scenario is checked against, with where it comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expected<T> {
    pub value: T,
    pub provenance: &'static str,
}

/// What a scenario compares.
#[derive(Clone)]
pub enum ScenarioKind<T> {
    /// Pullback path integral versus `iint (G_u . r_v - G_v . r_u)`.
    General {
        field: VectorField2to3<T>,
        surface: ParamSurface<T>,
        region: PlanarRegion<T>,
    },
    /// Pullback path integral of `F o r` versus the curl flux.
    CurlForm {
        field: VectorField3<T>,
        surface: ParamSurface<T>,
        region: PlanarRegion<T>,
    },
    Green {
        form: PullbackOneForm<T>,
        region: PlanarRegion<T>,
    },
    /// Direct integral along `B` on `[0, 4 pi]` versus the pullback integral of `F o r^`
    /// around the boundary of the spanning rectangle.
    BoundaryLoop { field: VectorField3<T>, delta: T },
    /// Numerically located intersections of `S^` with the z-axis versus `+-delta/sqrt 2`.
    AxisCrossing { delta: T },
}

impl<T> fmt::Debug for ScenarioKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ScenarioKind::General { .. } => "General",
            ScenarioKind::CurlForm { .. } => "CurlForm",
            ScenarioKind::Green { .. } => "Green",
            ScenarioKind::BoundaryLoop { .. } => "BoundaryLoop",
            ScenarioKind::AxisCrossing { .. } => "AxisCrossing",
        };
        f.write_str(s)
    }
}

/// A named, parameterized verification.
#[derive(Debug, Clone)]
pub struct Scenario<T> {
    pub name: String,
    pub kind: ScenarioKind<T>,
    pub expected: Option<Expected<T>>,
    pub tolerance: T,
    pub parameters: Vec<(String, T)>,
    /// Parameter points where the field must be defined before integrating.
    pub guard_probes: Vec<Vec2<T>>,
}

/// Builds the scenario `name` for half-width `delta`. `self-intersect-delta3` always
/// uses `delta = 3`.
pub fn scenario<T: Scalar>(name: &str, delta: T) -> Result<Scenario<T>> {
    positive_delta(delta)?;
    let lit = T::lit;
    let mk = |kind, expected, tolerance: f64, parameters: Vec<(&str, T)>| Scenario {
        name: name.to_string(),
        kind,
        expected,
        tolerance: lit(tolerance),
        parameters: parameters
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        guard_probes: Vec::new(),
    };
    let sc = match name {
        "moebius-general-u2" => {
            let (surface, region) = moebius(delta)?;
            mk(
                ScenarioKind::General {
                    field: u_squared_field(),
                    surface,
                    region,
                },
                Some(Expected {
                    value: moebius_u2_closed_form(delta),
                    provenance:
                        "-160 delta / 9; oracle: u-factor integral -80/9 times strip width 2 delta",
                }),
                1e-8,
                vec![("delta", delta)],
            )
        }
        "moebius-pullback-singular" => {
            let (surface, region) = moebius(delta)?;
            let field = compose_field(&singular_field(), &surface);
            let mut sc = mk(
                ScenarioKind::General {
                    field,
                    surface,
                    region,
                },
                Some(Expected {
                    value: T::zero(),
                    provenance: "curl-free field on a strip avoiding the z-axis",
                }),
                1e-8,
                vec![("delta", delta)],
            );
            // r(0, -1) = 0 lies on the z-axis once delta >= 1
            if delta >= T::one() {
                sc.guard_probes.push(Vec2::new(T::zero(), -T::one()));
            }
            sc
        }
        "boundary-B-4pi" => {
            boundary_curve_b(delta)?;
            mk(
                ScenarioKind::BoundaryLoop {
                    field: singular_field(),
                    delta,
                },
                Some(Expected {
                    value: lit(4.0) * T::PI(),
                    provenance: "B winds twice around the z-axis",
                }),
                1e-8,
                vec![("delta", delta)],
            )
        }
        "spanning-linear" => {
            let a = SPANNING_LINEAR_MATRIX.map(|row| row.map(lit));
            let (surface, region) = spanning_surface(delta)?;
            mk(
                ScenarioKind::CurlForm { field: linear_field(a), surface, region },
                Some(Expected {
                    value: spanning_linear_closed_form(&a, delta),
                    provenance: "-pi(2+delta^2)(a12-a21) - (pi delta^2/2)(a13-a31), from the projected area swept by B",
                }),
                1e-6,
                vec![
                    ("delta", delta),
                    ("a12", a[0][1]),
                    ("a13", a[0][2]),
                    ("a21", a[1][0]),
                    ("a31", a[2][0]),
                ],
            )
        }
        "spanning-zaxis" => {
            if delta >= T::one() {
                return Err(Error::Parameter(format!(
                    "z-axis crossings of the spanning surface are located for delta < 1, got {delta}"
                )));
            }
            mk(
                ScenarioKind::AxisCrossing { delta },
                Some(Expected {
                    value: delta / lit(2.0).sqrt(),
                    provenance: "u = +-pi/2, t = (1 + delta/sqrt 2)/2",
                }),
                1e-9,
                vec![("delta", delta)],
            )
        }
        "self-intersect-delta3" => {
            let delta = lit(3.0);
            let (surface, region) = moebius(delta)?;
            mk(
                ScenarioKind::General {
                    field: u_squared_field(),
                    surface,
                    region,
                },
                Some(Expected {
                    value: moebius_u2_closed_form(delta),
                    provenance: "-160 delta / 9 at delta = 3; the image self-intersects",
                }),
                1e-8,
                vec![("delta", delta)],
            )
        }
        "green-square" => mk(
            ScenarioKind::Green {
                form: PullbackOneForm::new(|p: Vec2<T>| -p.v * T::lit(0.5), |p| p.u * T::lit(0.5))
                    .with_partials(|_| -T::lit(0.5), |_| T::lit(0.5)),
                region: PlanarRegion::unit_square(),
            },
            Some(Expected {
                value: T::one(),
                provenance: "area of the unit square",
            }),
            1e-10,
            vec![],
        ),
        "green-triangle" => mk(
            ScenarioKind::Green {
                form: PullbackOneForm::new(|_| T::zero(), |p: Vec2<T>| p.u)
                    .with_partials(|_| T::zero(), |_| T::one()),
                region: PlanarRegion::type_i(
                    T::zero(),
                    T::one(),
                    Profile::constant(T::zero()),
                    Profile::linear(T::one(), T::zero()),
                )?,
            },
            Some(Expected {
                value: lit(0.5),
                provenance: "Q_u - P_v = 1 over a triangle of area 1/2",
            }),
            1e-8,
            vec![],
        ),
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    Ok(sc)
}

/// All registered scenarios, in registry order.
pub fn registry<T: Scalar>(delta: T) -> Result<Vec<Scenario<T>>> {
    SCENARIO_NAMES.iter().map(|n| scenario(n, delta)).collect()
}

impl<T: Scalar> Scenario<T> {
    pub fn with_tolerance(mut self, tol: T) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn run(&self, spec: &QuadratureSpec) -> VerificationReport<T> {
        let mut report = match self.probe() {
            Err(e) => VerificationReport::failed(&self.name, &e, self.tolerance),
            Ok(()) => self.compare(spec),
        };
        report.scenario_name = self.name.clone();
        for (k, v) in &self.parameters {
            report.parameters.insert(k.clone(), *v);
        }
        if self.name == "self-intersect-delta3" {
            report = annotate_self_intersection(report);
        }
        match self.expected {
            Some(e) => report.with_expected(e.value),
            None => report,
        }
    }

    fn probe(&self) -> Result<()> {
        if let ScenarioKind::General { field, .. } = &self.kind {
            for p in &self.guard_probes {
                field.eval(*p)?;
            }
        }
        Ok(())
    }

    fn compare(&self, spec: &QuadratureSpec) -> VerificationReport<T> {
        let tol = self.tolerance;
        match &self.kind {
            ScenarioKind::General {
                field,
                surface,
                region,
            } => VerificationReport::from_sides(
                &self.name,
                stokes_general_lhs(field, surface, region, spec),
                stokes_general_rhs(field, surface, region, spec),
                tol,
            ),
            ScenarioKind::CurlForm {
                field,
                surface,
                region,
            } => {
                let g = compose_field(field, surface);
                VerificationReport::from_sides(
                    &self.name,
                    stokes_general_lhs(&g, surface, region, spec),
                    stokes_curl_rhs(field, surface, region, spec),
                    tol,
                )
            }
            ScenarioKind::Green { form, region } => VerificationReport::from_sides(
                &self.name,
                greens_lhs(form, region, spec),
                greens_rhs(form, region, spec),
                tol,
            ),
            ScenarioKind::BoundaryLoop { field, delta } => {
                let spanning = spanning_surface(*delta).map(|(s, d)| {
                    let g = compose_field(field, &s);
                    stokes_general_lhs(&g, &s, &d, spec)
                });
                VerificationReport::from_sides(
                    &self.name,
                    line_integral_over_b(field, *delta, spec),
                    spanning.and_then(|r| r),
                    tol,
                )
            }
            ScenarioKind::AxisCrossing { delta } => axis_crossing_report(&self.name, *delta, tol),
        }
    }
}

fn axis_crossing_report<T: Scalar>(name: &str, delta: T, tol: T) -> VerificationReport<T> {
    let crossings = match analysis::z_axis_crossings(delta, T::lit(1e-12)) {
        Ok(c) => c,
        Err(e) => return VerificationReport::failed(name, &e, tol),
    };
    let closed = delta / T::lit(2.0).sqrt();
    let found = crossings.len();
    let upper = crossings
        .iter()
        .map(|c| c.point)
        .fold(None, |acc: Option<Vec3<T>>, p| match acc {
            Some(q) if q.z >= p.z => Some(q),
            _ => Some(p),
        });
    let lower = crossings
        .iter()
        .map(|c| c.point)
        .fold(None, |acc: Option<Vec3<T>>, p| match acc {
            Some(q) if q.z <= p.z => Some(q),
            _ => Some(p),
        });
    let (Some(upper), Some(lower)) = (upper, lower) else {
        let e = Error::Parameter("no z-axis crossing found".into());
        return VerificationReport::failed(name, &e, tol);
    };
    let side = |p: Vec3<T>| IntegralResult {
        value: p.z,
        error_estimate: p.x.abs().max(p.y.abs()),
        evaluations: found,
    };
    let mut report = VerificationReport::from_sides(
        name,
        Ok(side(upper)),
        Ok(IntegralResult::exact(closed)),
        tol,
    )
    .with_parameter("points_found", T::lit(found as f64))
    .with_parameter("z_lower", lower.z);
    if found != 2 || (lower.z + closed).abs() > tol {
        report.error = Some(format!(
            "expected exactly two crossings at z = +-{closed}, found {found}"
        ));
        report.pass = false;
    }
    report
}

/// Records a closed-form self-intersection witness and the jump of `G = (u^2, 0, 0)`
/// across it, which rules out writing `G` as `F o r`.
fn annotate_self_intersection<T: Scalar>(
    mut report: VerificationReport<T>,
) -> VerificationReport<T> {
    let delta = T::lit(3.0);
    let u = T::lit(0.1);
    match analysis::closed_form_witness(delta, u, analysis::Branch::Minus) {
        Ok(w) => {
            let g = u_squared_field::<T>();
            let jump = match (g.eval(w.p1), g.eval(w.p2)) {
                (Ok(a), Ok(b)) => (a - b).norm(),
                _ => T::nan(),
            };
            report = report
                .with_parameter("witness_residual", w.residual)
                .with_parameter("witness_field_jump", jump);
            if !(w.residual <= T::lit(1e-12)) || !(jump > T::zero()) {
                report.error = Some("self-intersection witness check failed".into());
                report.pass = false;
            }
        }
        Err(e) => {
            report.error = Some(e.to_string());
            report.pass = false;
        }
    }
    report
}
