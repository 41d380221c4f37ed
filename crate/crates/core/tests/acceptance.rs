//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! The `oracle` module re-derives the surfaces and integrands by hand and integrates
//! them with plain midpoint sums; nothing in it calls into the library.

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stokes_core::analysis::{self, Branch};
use stokes_core::catalog::{self, QuadraticField};
use stokes_core::cli;
use stokes_core::stokes::{self, PullbackOneForm};
use stokes_core::{PlanarRegion, Profile, QuadratureSpec, Surface, Vec2, Vec3};

type M3 = [[f64; 3]; 3];
type Criterion = Box<dyn Fn(&mut Check, &mut Computed)>;

#[derive(Default)]
struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(format!("ok    {what}"));
        } else {
            self.notes.push(format!("FAIL  {what}"));
            self.failures.push(what);
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(format!("      {}", what.into()));
    }

    fn close(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        let diff = (got - want).abs();
        self.expect(
            diff <= tol,
            format!("{label}: {got:.15e} vs {want:.15e}, |diff| = {diff:.3e} <= {tol:e}"),
        );
    }
}

/// Values computed by the library in criteria 1 to 4, replayed against the oracle in 9.
#[derive(Default)]
struct Computed {
    moebius_u2: Vec<(f64, f64, f64)>,
    singular: (f64, f64),
    boundary_b: f64,
    spanning: Vec<(M3, f64, f64)>,
}

mod oracle {
    use super::M3;
    use std::f64::consts::PI;

    pub const CELLS_2D: usize = 2000;
    pub const SAMPLES_1D: usize = 2_000_000;

    pub fn midpoint_1d(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let [s] = midpoint_1d_many(|x| [f(x)], a, b);
        s
    }

    /// Midpoint sums of several integrands at once over `[a, b]`.
    pub fn midpoint_1d_many<const K: usize>(
        f: impl Fn(f64) -> [f64; K],
        a: f64,
        b: f64,
    ) -> [f64; K] {
        let h = (b - a) / SAMPLES_1D as f64;
        let mut acc = [0.0; K];
        for i in 0..SAMPLES_1D {
            for (s, x) in acc.iter_mut().zip(f(a + (i as f64 + 0.5) * h)) {
                *s += x;
            }
        }
        acc.map(|s| s * h)
    }

    /// Midpoint sums of several integrands at once over `[a, b] x [c, d]`.
    pub fn midpoint_2d<const K: usize>(
        f: impl Fn(f64, f64) -> [f64; K],
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    ) -> [f64; K] {
        let n = CELLS_2D;
        let (hu, hv) = ((b - a) / n as f64, (d - c) / n as f64);
        let mut acc = [0.0; K];
        for i in 0..n {
            let u = a + (i as f64 + 0.5) * hu;
            let mut row = [0.0; K];
            for j in 0..n {
                let v = c + (j as f64 + 0.5) * hv;
                for (r, x) in row.iter_mut().zip(f(u, v)) {
                    *r += x;
                }
            }
            for (s, r) in acc.iter_mut().zip(row) {
                *s += r;
            }
        }
        acc.map(|s| s * hu * hv)
    }

    fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    pub fn strip(u: f64, v: f64) -> [f64; 3] {
        let w = 1.0 + v * (u / 2.0).cos();
        [w * u.cos(), w * u.sin(), v * (u / 2.0).sin()]
    }

    pub fn strip_u(u: f64, v: f64) -> [f64; 3] {
        let (c, s) = ((u / 2.0).cos(), (u / 2.0).sin());
        let w = 1.0 + v * c;
        [
            -0.5 * v * s * u.cos() - w * u.sin(),
            -0.5 * v * s * u.sin() + w * u.cos(),
            0.5 * v * c,
        ]
    }

    pub fn strip_v(u: f64, _v: f64) -> [f64; 3] {
        let c = (u / 2.0).cos();
        [c * u.cos(), c * u.sin(), (u / 2.0).sin()]
    }

    /// Counterclockwise boundary integral of `p du + q dv` around `[a, b] x [c, d]`.
    pub fn loop_integral(
        p: impl Fn(f64, f64) -> f64,
        q: impl Fn(f64, f64) -> f64,
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    ) -> f64 {
        midpoint_1d(|u| p(u, c), a, b) + midpoint_1d(|v| q(b, v), c, d)
            - midpoint_1d(|u| p(u, d), a, b)
            - midpoint_1d(|v| q(a, v), c, d)
    }

    /// `G = (u^2, 0, 0)` on the strip: (pullback loop, double integral of `2u x_v`).
    pub fn moebius_u2(delta: f64) -> (f64, f64) {
        let lhs = loop_integral(
            |u, v| u * u * strip_u(u, v)[0],
            |u, v| u * u * strip_v(u, v)[0],
            0.0,
            2.0 * PI,
            -delta,
            delta,
        );
        let [rhs] = midpoint_2d(
            |u, v| [2.0 * u * strip_v(u, v)[0]],
            0.0,
            2.0 * PI,
            -delta,
            delta,
        );
        (lhs, rhs)
    }

    fn swirl(x: [f64; 3]) -> [f64; 3] {
        let r2 = x[0] * x[0] + x[1] * x[1];
        [-x[1] / r2, x[0] / r2, 0.0]
    }

    fn swirl_jacobian(x: [f64; 3]) -> M3 {
        let r2 = x[0] * x[0] + x[1] * x[1];
        let r4 = r2 * r2;
        let (xy, d) = (x[0] * x[1], x[1] * x[1] - x[0] * x[0]);
        [
            [2.0 * xy / r4, d / r4, 0.0],
            [d / r4, -2.0 * xy / r4, 0.0],
            [0.0; 3],
        ]
    }

    fn apply(m: &M3, x: [f64; 3]) -> [f64; 3] {
        [dot(m[0], x), dot(m[1], x), dot(m[2], x)]
    }

    /// `G = F o r` for the swirl field on the strip: (pullback loop, `iint G_u . r_v - G_v . r_u`).
    pub fn singular(delta: f64) -> (f64, f64) {
        let p = |u, v| dot(swirl(strip(u, v)), strip_u(u, v));
        let q = |u, v| dot(swirl(strip(u, v)), strip_v(u, v));
        let lhs = loop_integral(p, q, 0.0, 2.0 * PI, -delta, delta);
        let [rhs] = midpoint_2d(
            |u, v| {
                let j = swirl_jacobian(strip(u, v));
                let (ru, rv) = (strip_u(u, v), strip_v(u, v));
                [dot(apply(&j, ru), rv) - dot(apply(&j, rv), ru)]
            },
            0.0,
            2.0 * PI,
            -delta,
            delta,
        );
        (lhs, rhs)
    }

    pub fn boundary_b(delta: f64) -> f64 {
        midpoint_1d(
            |u| dot(swirl(strip(u, delta)), strip_u(u, delta)),
            0.0,
            4.0 * PI,
        )
    }

    fn chord(u: f64, t: f64, delta: f64) -> ([f64; 3], [f64; 3], [f64; 3]) {
        let (a, b) = (strip(u, delta), strip(2.0 * PI - u, delta));
        let (au, bu) = (strip_u(u, delta), strip_u(2.0 * PI - u, delta));
        let x = std::array::from_fn(|i| (1.0 - t) * a[i] + t * b[i]);
        let xu = std::array::from_fn(|i| (1.0 - t) * au[i] - t * bu[i]);
        let xt = std::array::from_fn(|i| b[i] - a[i]);
        (x, xu, xt)
    }

    /// `F = A x` on the spanning surface: (pullback loop, curl flux) for each matrix.
    pub fn spanning<const K: usize>(mats: &[M3; K], delta: f64) -> [(f64, f64); K] {
        let curls = mats.map(|a| [a[2][1] - a[1][2], a[0][2] - a[2][0], a[1][0] - a[0][1]]);
        let flux = midpoint_2d(
            |u, t| {
                let (_, xu, xt) = chord(u, t, delta);
                let n = cross(xu, xt);
                curls.map(|c| dot(c, n))
            },
            -PI,
            PI,
            0.0,
            1.0,
        );
        let p = |u, t| {
            let (x, xu, _) = chord(u, t, delta);
            mats.map(|a| dot(apply(&a, x), xu))
        };
        let q = |u, t| {
            let (x, _, xt) = chord(u, t, delta);
            mats.map(|a| dot(apply(&a, x), xt))
        };
        let bottom = midpoint_1d_many(|u| p(u, 0.0), -PI, PI);
        let right = midpoint_1d_many(|t| q(PI, t), 0.0, 1.0);
        let top = midpoint_1d_many(|u| p(u, 1.0), -PI, PI);
        let left = midpoint_1d_many(|t| q(-PI, t), 0.0, 1.0);
        let mut out = [(0.0, 0.0); K];
        for k in 0..K {
            out[k] = (bottom[k] + right[k] - top[k] - left[k], flux[k]);
        }
        out
    }

    /// `iint_T 1` over the triangle `0 <= v <= u <= 1`: midpoint cells weighted by the
    /// covered fraction along each column.
    pub fn triangle_area() -> f64 {
        let n = CELLS_2D;
        let h = 1.0 / n as f64;
        (0..n).map(|i| (i as f64 + 0.5) * h).sum::<f64>() * h
    }
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn random_matrices(rng: &mut ChaCha8Rng) -> [M3; 10] {
    std::array::from_fn(|_| {
        std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-1.0..=1.0)))
    })
}

fn criterion_1(c: &mut Check, out: &mut Computed) {
    for delta in [0.3, 0.1, 0.9] {
        let (s, d) = catalog::moebius(delta).unwrap();
        let g = catalog::u_squared_field();
        let lhs = stokes::stokes_general_lhs(&g, &s, &d, &spec())
            .unwrap()
            .value;
        let rhs = stokes::stokes_general_rhs(&g, &s, &d, &spec())
            .unwrap()
            .value;
        let want = -160.0 * delta / 9.0;
        c.close(&format!("delta {delta} lhs"), lhs, want, 1e-8);
        c.close(&format!("delta {delta} rhs"), rhs, want, 1e-8);
        c.close(&format!("delta {delta} lhs - rhs"), lhs, rhs, 1e-9);
        out.moebius_u2.push((delta, lhs, rhs));
    }
}

fn criterion_2(c: &mut Check, out: &mut Computed) {
    let (s, d) = catalog::moebius(0.3).unwrap();
    let g = stokes::compose_field(&catalog::singular_field(), &s);
    let lhs = stokes::stokes_general_lhs(&g, &s, &d, &spec())
        .unwrap()
        .value;
    let rhs = stokes::stokes_general_rhs(&g, &s, &d, &spec())
        .unwrap()
        .value;
    c.close("lhs", lhs, 0.0, 1e-8);
    c.close("rhs", rhs, 0.0, 1e-8);
    out.singular = (lhs, rhs);
}

fn criterion_3(c: &mut Check, out: &mut Computed) {
    let v = catalog::line_integral_over_b(&catalog::singular_field(), 0.3, &spec())
        .unwrap()
        .value;
    c.close("oint_B F . dr", v, 4.0 * PI, 1e-8);
    out.boundary_b = v;
}

fn criterion_4(c: &mut Check, out: &mut Computed) {
    let delta = 0.3;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (s, d) = catalog::spanning_surface(delta).unwrap();
    let (mut worst_sides, mut worst_closed) = (0.0f64, 0.0f64);
    for a in random_matrices(&mut rng) {
        let f = catalog::linear_field(a);
        let g = stokes::compose_field(&f, &s);
        let lhs = stokes::stokes_general_lhs(&g, &s, &d, &spec())
            .unwrap()
            .value;
        let rhs = stokes::stokes_curl_rhs(&f, &s, &d, &spec()).unwrap().value;
        let stated = 2.0 * PI * (2.0 + delta * delta) * (a[0][1] - a[1][0])
            + PI * delta * delta * (a[0][2] - a[2][0]);
        c.close(
            "lhs vs 2pi(2+d^2)(a12-a21) + pi d^2 (a13-a31)",
            lhs,
            stated,
            1e-6,
        );
        c.close(
            "rhs vs 2pi(2+d^2)(a12-a21) + pi d^2 (a13-a31)",
            rhs,
            stated,
            1e-6,
        );
        worst_sides = worst_sides.max((lhs - rhs).abs());
        worst_closed =
            worst_closed.max((lhs - catalog::spanning_linear_closed_form(&a, delta)).abs());
        out.spanning.push((a, lhs, rhs));
    }
    c.note(format!(
        "max |lhs - rhs| over the 10 matrices: {worst_sides:.3e}"
    ));
    c.note(format!(
        "max |lhs - (-pi(2+d^2)(a12-a21) - (pi d^2/2)(a13-a31))|: {worst_closed:.3e}; the stated closed form is off by a factor -2"
    ));
}

fn criterion_5(c: &mut Check) {
    for delta in [0.3, 0.5] {
        let pts = analysis::z_axis_intersections(delta, 1e-12).unwrap();
        c.expect(
            pts.len() == 2,
            format!("delta {delta}: {} points found", pts.len()),
        );
        let z = delta / 2f64.sqrt();
        for (p, want) in pts.iter().zip([-z, z]) {
            let err = (*p - Vec3::new(0.0, 0.0, want)).max_abs();
            c.expect(
                err <= 1e-9,
                format!("delta {delta}: {p:?} vs (0, 0, {want:.15}), error {err:.3e}"),
            );
        }
    }
}

fn criterion_6(c: &mut Check) {
    let (delta, u) = (3.0f64, 0.1f64);
    let (s, d) = catalog::moebius(delta).unwrap();
    let found = analysis::find_self_intersections(&s, &d, 64, 1e-6).unwrap();
    c.note(format!("grid 64 scan: {} witnesses", found.len()));
    for (branch, sign) in [(Branch::Minus, -1.0), (Branch::Plus, 1.0)] {
        let w = analysis::closed_form_witness(delta, u, branch).unwrap();
        c.expect(
            w.residual <= 1e-12,
            format!("{branch:?}: closed-form residual {:.3e}", w.residual),
        );
        let image = Vec3::new(-1.0, sign * u.tan(), sign * u.tan());
        c.expect(
            w.image == image,
            format!("{branch:?}: image {:?} equals {image:?}", w.image),
        );
        let nearest = found
            .iter()
            .min_by(|x, y| x.param_distance(&w).total_cmp(&y.param_distance(&w)));
        match nearest {
            Some(n) => {
                let dist = n.param_distance(&w);
                c.expect(
                    dist <= 0.05 && n.residual <= 1e-6,
                    format!("{branch:?}: scan witness at parameter distance {dist:.3e}, residual {:.3e}", n.residual),
                );
            }
            None => c.expect(false, format!("{branch:?}: no witness found")),
        }
    }
}

fn random_quadratic(rng: &mut ChaCha8Rng) -> QuadraticField<f64> {
    let mut r = || rng.gen_range(-1.0..=1.0);
    QuadraticField {
        constant: std::array::from_fn(|_| r()),
        linear: std::array::from_fn(|_| std::array::from_fn(|_| r())),
        quadratic: std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| r()))),
    }
}

fn criterion_7(c: &mut Check) {
    let delta = 0.3;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (s, d): (Surface, PlanarRegion<f64>) = catalog::moebius(delta).unwrap();
    let points: Vec<Vec2<f64>> = (0..200)
        .map(|_| Vec2::new(rng.gen_range(0.0..2.0 * PI), rng.gen_range(-delta..delta)))
        .filter(|p| p.u > 0.0 && p.v.abs() < delta)
        .collect();
    for k in 0..5 {
        let q = random_quadratic(&mut rng);
        let analytic = q.to_field();
        let fd = q.to_field().without_derivatives();
        let gap = |f| {
            points
                .iter()
                .map(|p| stokes::integrand_identity_gap(f, &s, *p).unwrap())
                .fold(0.0, f64::max)
        };
        let (ga, gf) = (gap(&analytic), gap(&fd));
        c.expect(
            gf <= 1e-6,
            format!("field {k}: max fd gap {gf:.3e} <= 1e-6"),
        );
        c.expect(
            ga <= 1e-10,
            format!("field {k}: max analytic gap {ga:.3e} <= 1e-10"),
        );
        let general =
            stokes::stokes_general_rhs(&stokes::compose_field(&analytic, &s), &s, &d, &spec())
                .unwrap()
                .value;
        let curl = stokes::stokes_curl_rhs(&analytic, &s, &d, &spec())
            .unwrap()
            .value;
        c.close(
            &format!("field {k}: general rhs vs curl rhs"),
            general,
            curl,
            1e-7,
        );
    }
}

fn criterion_8(c: &mut Check) {
    let square = PlanarRegion::unit_square();
    let form = PullbackOneForm::new(|p: Vec2<f64>| -p.v / 2.0, |p| p.u / 2.0);
    let lhs = stokes::greens_lhs(&form, &square, &spec()).unwrap().value;
    let rhs = stokes::greens_rhs(&form, &square, &spec()).unwrap().value;
    c.close("square lhs", lhs, 1.0, 1e-10);
    c.close("square rhs", rhs, 1.0, 1e-10);

    let tri =
        PlanarRegion::type_i(0.0, 1.0, Profile::constant(0.0), Profile::linear(1.0, 0.0)).unwrap();
    let form = PullbackOneForm::new(|_: Vec2<f64>| 0.0, |p| p.u);
    let want = oracle::triangle_area();
    c.note(format!("midpoint oracle for the triangle: {want:.15}"));
    let lhs = stokes::greens_lhs(&form, &tri, &spec()).unwrap().value;
    let rhs = stokes::greens_rhs(&form, &tri, &spec()).unwrap().value;
    c.close("triangle lhs", lhs, want, 1e-8);
    c.close("triangle rhs", rhs, want, 1e-8);
}

fn criterion_9(c: &mut Check, got: &Computed) {
    let tol = 1e-4;
    for &(delta, lhs, rhs) in &got.moebius_u2 {
        let (ol, or) = oracle::moebius_u2(delta);
        c.close(&format!("u^2 on strip, delta {delta}: lhs"), lhs, ol, tol);
        c.close(&format!("u^2 on strip, delta {delta}: rhs"), rhs, or, tol);
    }
    let (ol, or) = oracle::singular(0.3);
    c.close("swirl on strip: lhs", got.singular.0, ol, tol);
    c.close("swirl on strip: rhs", got.singular.1, or, tol);
    c.close(
        "swirl along B",
        got.boundary_b,
        oracle::boundary_b(0.3),
        tol,
    );
    if got.spanning.len() == 10 {
        let mats: [M3; 10] = std::array::from_fn(|k| got.spanning[k].0);
        for (k, (ol, or)) in oracle::spanning(&mats, 0.3).into_iter().enumerate() {
            c.close(
                &format!("linear field {k} on spanning surface: lhs"),
                got.spanning[k].1,
                ol,
                tol,
            );
            c.close(
                &format!("linear field {k} on spanning surface: rhs"),
                got.spanning[k].2,
                or,
                tol,
            );
        }
    } else {
        c.expect(
            false,
            "spanning-surface values from criterion 4 are missing",
        );
    }
}

fn criterion_10(c: &mut Check) {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_stokes");
    let json = dir.path().join("all.json");
    let status = Command::new(bin)
        .args(["run", "all", "--delta", "0.3", "-o"])
        .arg(&json)
        .status()
        .unwrap();
    c.expect(
        status.code() == Some(0),
        format!("run all exit status {:?}", status.code()),
    );
    let text = fs::read_to_string(&json).unwrap_or_default();
    match cli::from_json(&text) {
        Ok(records) => {
            let passing = records.iter().filter(|r| r.pass).count();
            c.expect(
                records.len() == 8 && passing == 8,
                format!("{} reports, {passing} passing", records.len()),
            );
            c.expect(
                cli::to_json(&records) == text,
                "json report re-serializes byte-identically",
            );
            let csv = dir.path().join("all.csv");
            let status = Command::new(bin)
                .args(["run", "all", "--format", "csv", "-o"])
                .arg(&csv)
                .status()
                .unwrap();
            let csv_text = fs::read_to_string(&csv).unwrap_or_default();
            let back = cli::from_csv(&csv_text);
            c.expect(
                status.code() == Some(0)
                    && back
                        .as_ref()
                        .is_ok_and(|b| cli::to_csv(b).is_ok_and(|t| t == csv_text)),
                "csv report re-serializes byte-identically",
            );
        }
        Err(e) => c.expect(false, format!("report parses: {e}")),
    }

    let counts = |path: &std::path::Path| {
        let t = fs::read_to_string(path).unwrap_or_default();
        (
            t.lines().filter(|l| l.starts_with("v ")).count(),
            t.lines().filter(|l| l.starts_with("f ")).count(),
        )
    };
    for (surface, nu, nv, extra) in [
        ("moebius", 200usize, 20usize, 0usize),
        ("spanning", 120, 12, 2),
    ] {
        let path = dir.path().join(format!("{surface}.obj"));
        let status = Command::new(bin)
            .args([
                "mesh",
                surface,
                "--delta",
                "0.3",
                "--nu",
                &nu.to_string(),
                "--nv",
                &nv.to_string(),
                "--z-stretch",
                "4",
                "-o",
            ])
            .arg(&path)
            .status()
            .unwrap();
        let (v, f) = counts(&path);
        c.expect(
            status.code() == Some(0) && v == (nu + 1) * (nv + 1) + extra && f == 2 * nu * nv,
            format!("{surface} {nu}x{nv}: {v} vertices, {f} faces"),
        );
    }
    let sq = PlanarRegion::unit_square();
    let flat = Surface::over(&sq, |p| Vec3::new(p.u, p.v, 0.0));
    let m = cli::grid_mesh(&flat, &sq, 2, 2, 1.0).unwrap();
    c.expect(
        m.vertices.len() == 9 && m.faces.len() == 8,
        format!(
            "flat square 2x2: {} vertices, {} faces",
            m.vertices.len(),
            m.faces.len()
        ),
    );
}

fn main() -> ExitCode {
    let mut computed = Computed::default();
    let criteria: [(&str, Criterion); 10] = [
        (
            "Moebius strip, general form, G = (u^2, 0, 0)",
            Box::new(criterion_1),
        ),
        (
            "Moebius strip, pullback of the swirl field",
            Box::new(criterion_2),
        ),
        (
            "swirl field along the boundary curve B",
            Box::new(criterion_3),
        ),
        ("spanning surface, linear fields", Box::new(criterion_4)),
        (
            "z-axis crossings of the spanning surface",
            Box::new(|c, _| criterion_5(c)),
        ),
        (
            "self-intersection witnesses at delta = 3",
            Box::new(|c, _| criterion_6(c)),
        ),
        (
            "integrand identity for quadratic fields",
            Box::new(|c, _| criterion_7(c)),
        ),
        (
            "Green's theorem on a square and a triangle",
            Box::new(|c, _| criterion_8(c)),
        ),
        (
            "midpoint oracle agreement",
            Box::new(|c, out| criterion_9(c, out)),
        ),
        ("command line contract", Box::new(|c, _| criterion_10(c))),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let mut check = Check::default();
        let start = Instant::now();
        run(&mut check, &mut computed);
        let secs = start.elapsed().as_secs_f64();
        let verdict = if check.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("criterion {:>2} {verdict}  {title} ({secs:.2} s)", i + 1);
        for n in &check.notes {
            println!("    {n}");
        }
        if !check.failures.is_empty() {
            failed += 1;
        }
    }
    println!("\n{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
