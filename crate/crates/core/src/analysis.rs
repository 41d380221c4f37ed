//! Geometric diagnostics: self-intersection witnesses of surface maps, crossings of the
//! spanning surface with the z-axis, and a single-chart normal probe.

use std::collections::{BTreeSet, HashMap};

use crate::catalog::{moebius_point, spanning_surface};
use crate::error::{Error, Result};
use crate::geometry::{ParamSurface, PlanarRegion, Vec2, Vec3};
use crate::scalar::Scalar;

/// Two distinct parameter points with (numerically) the same image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionWitness<T> {
    pub p1: Vec2<T>,
    pub p2: Vec2<T>,
    pub image: Vec3<T>,
    /// `|r(p1) - r(p2)|`.
    pub residual: T,
}

impl<T: Scalar> IntersectionWitness<T> {
    /// Distance between two witnesses as unordered pairs of parameter points.
    pub fn param_distance(&self, other: &Self) -> T {
        let direct = (self.p1 - other.p1).norm().max((self.p2 - other.p2).norm());
        let swapped = (self.p1 - other.p2).norm().max((self.p2 - other.p1).norm());
        direct.min(swapped)
    }

    fn canonical(mut self) -> Self {
        if self.p2.lex_lt(self.p1) {
            std::mem::swap(&mut self.p1, &mut self.p2);
        }
        self
    }
}

/// Family of closed-form self-intersections of the Möbius map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `(u, -2cos(u/2)/cos u)` and `(u + pi, -2sin(u/2)/cos u)`, image `(-1, -tan u, -tan u)`.
    Minus,
    /// `(2pi - u, 2cos(u/2)/cos u)` and `(pi - u, 2sin(u/2)/cos u)`, image `(-1, tan u, tan u)`.
    Plus,
    /// Seam pairing `(0, v)` and `(2 pi, -v)`, image `(1 + v, 0, 0)`; the argument is `v`.
    Edge,
}

/// Self-intersection witness of the Möbius strip of half-width `delta`.
///
/// For [`Branch::Minus`] and [`Branch::Plus`] the argument is a small `u > 0` and both
/// `|v_i|` must fit in `delta`, which needs `delta > 2`. For [`Branch::Edge`] it is `v`.
pub fn closed_form_witness<T: Scalar>(
    delta: T,
    arg: T,
    branch: Branch,
) -> Result<IntersectionWitness<T>> {
    if !(delta > T::zero()) {
        return Err(Error::Parameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let two = T::lit(2.0);
    let pi = T::PI();
    let (p1, p2, image) = match branch {
        Branch::Edge => {
            let v = arg;
            if v.abs() > delta {
                return Err(Error::Parameter(format!(
                    "|v| = {} exceeds delta = {delta}",
                    v.abs()
                )));
            }
            (
                Vec2::new(T::zero(), v),
                Vec2::new(T::TAU(), -v),
                Vec3::new(T::one() + v, T::zero(), T::zero()),
            )
        }
        Branch::Minus | Branch::Plus => {
            let u = arg;
            if !(u > T::zero()) {
                return Err(Error::Parameter(format!("u must be positive, got {u}")));
            }
            let (s, c) = (u / two).sin_cos();
            let cu = u.cos();
            let sign = if branch == Branch::Minus {
                -T::one()
            } else {
                T::one()
            };
            let v1 = sign * two * c / cu;
            let v2 = sign * two * s / cu;
            if !(v1.abs() <= delta && v2.abs() <= delta) {
                return Err(Error::Parameter(format!(
                    "u = {u} is too large for delta = {delta}: |v1| = {}, |v2| = {}",
                    v1.abs(),
                    v2.abs()
                )));
            }
            let tan = u.tan();
            if branch == Branch::Minus {
                (
                    Vec2::new(u, v1),
                    Vec2::new(u + pi, v2),
                    Vec3::new(-T::one(), -tan, -tan),
                )
            } else {
                (
                    Vec2::new(T::TAU() - u, v1),
                    Vec2::new(pi - u, v2),
                    Vec3::new(-T::one(), tan, tan),
                )
            }
        }
    };
    let residual = (moebius_point(p1.u, p1.v) - moebius_point(p2.u, p2.v)).norm();
    Ok(IntersectionWitness {
        p1,
        p2,
        image,
        residual,
    })
}

/// Knobs of [`find_self_intersections_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions<T> {
    /// Samples per axis, at least 8.
    pub grid: usize,
    /// Largest accepted residual `|r(p1) - r(p2)|`.
    pub tol: T,
    /// Sample the region boundary too; when false, witnesses touching the boundary
    /// (within a quarter cell) are dropped.
    pub include_edges: bool,
    /// Gauss-Newton iteration cap.
    pub max_iterations: usize,
}

impl<T: Scalar> ScanOptions<T> {
    pub fn new(grid: usize, tol: T) -> Self {
        Self {
            grid,
            tol,
            include_edges: true,
            max_iterations: 50,
        }
    }

    pub fn interior_only(mut self) -> Self {
        self.include_edges = false;
        self
    }
}

/// Grid scan for self-intersections of `s` over `d`, boundary included.
pub fn find_self_intersections<T: Scalar>(
    s: &ParamSurface<T>,
    d: &PlanarRegion<T>,
    grid: usize,
    tol: T,
) -> Result<Vec<IntersectionWitness<T>>> {
    find_self_intersections_with(s, d, &ScanOptions::new(grid, tol))
}

/// Samples `grid x grid` points, pairs each with its nearest image neighbour among
/// points at least `0.05 diam(D)` away in parameter space, and polishes every candidate
/// pair with damped Gauss-Newton on `|r(p1) - r(p2)|^2`. Output is deduplicated and
/// sorted lexicographically by `p1`, with `p1 < p2` in every witness.
pub fn find_self_intersections_with<T: Scalar>(
    s: &ParamSurface<T>,
    d: &PlanarRegion<T>,
    opts: &ScanOptions<T>,
) -> Result<Vec<IntersectionWitness<T>>> {
    let n = opts.grid;
    if n < 8 {
        return Err(Error::Parameter(format!(
            "grid must be at least 8, got {n}"
        )));
    }
    let unit = |i: usize| -> T {
        if opts.include_edges {
            T::lit(i as f64) / T::lit((n - 1) as f64)
        } else {
            (T::lit(i as f64) + T::lit(0.5)) / T::lit(n as f64)
        }
    };
    let mut params = Vec::with_capacity(n * n);
    let mut images = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let p = d.map_unit(unit(i), unit(j));
            params.push(p);
            images.push(s.eval(p)?);
        }
    }
    let idx = |i: usize, j: usize| i * n + j;
    let mut spacing = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i + 1 < n {
                spacing = spacing.max((images[idx(i + 1, j)] - images[idx(i, j)]).norm());
            }
            if j + 1 < n {
                spacing = spacing.max((images[idx(i, j + 1)] - images[idx(i, j)]).norm());
            }
        }
    }
    let threshold = T::lit(1.5) * spacing;
    if !(threshold > T::zero()) {
        return Ok(Vec::new());
    }
    let diam = d.diameter();
    let sep = T::lit(0.05) * diam;
    let bbox = d.bounding_box();
    let cell_u = (bbox.u_max - bbox.u_min) / T::lit(n as f64);
    let cell_v = (bbox.v_max - bbox.v_min) / T::lit(n as f64);
    let dedup = T::lit(0.25) * cell_u.min(cell_v);

    // spatial hash with cells of the candidate threshold
    let inv = 1.0 / threshold.as_f64();
    let key = |x: Vec3<T>| -> (i64, i64, i64) {
        (
            (x.x.as_f64() * inv).floor() as i64,
            (x.y.as_f64() * inv).floor() as i64,
            (x.z.as_f64() * inv).floor() as i64,
        )
    };
    let mut buckets: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    for (k, x) in images.iter().enumerate() {
        buckets.entry(key(*x)).or_default().push(k);
    }
    let mut candidates = BTreeSet::new();
    for (a, xa) in images.iter().enumerate() {
        let (ki, kj, kk) = key(*xa);
        let mut best: Option<(T, usize)> = None;
        for di in -1..=1 {
            for dj in -1..=1 {
                for dk in -1..=1 {
                    let Some(cell) = buckets.get(&(ki + di, kj + dj, kk + dk)) else {
                        continue;
                    };
                    for &b in cell {
                        if b == a || (params[a] - params[b]).norm() < sep {
                            continue;
                        }
                        let dist = (images[b] - *xa).norm();
                        if dist <= threshold && best.is_none_or(|(bd, _)| dist < bd) {
                            best = Some((dist, b));
                        }
                    }
                }
            }
        }
        if let Some((_, b)) = best {
            candidates.insert((a.min(b), a.max(b)));
        }
    }

    let mut found: Vec<IntersectionWitness<T>> = Vec::new();
    for (a, b) in candidates {
        let Some(w) = refine_pair(s, d, params[a], params[b], opts) else {
            continue;
        };
        if (w.p1 - w.p2).norm() < sep {
            continue;
        }
        if !opts.include_edges
            && (touches_edge(d, w.p1, cell_u, cell_v) || touches_edge(d, w.p2, cell_u, cell_v))
        {
            continue;
        }
        let w = w.canonical();
        if found.iter().all(|f| f.param_distance(&w) > dedup) {
            found.push(w);
        }
    }
    found.sort_by(|x, y| {
        x.p1.u
            .partial_cmp(&y.p1.u)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                x.p1.v
                    .partial_cmp(&y.p1.v)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
    Ok(found)
}

fn touches_edge<T: Scalar>(d: &PlanarRegion<T>, p: Vec2<T>, cell_u: T, cell_v: T) -> bool {
    let (outer, inner) = d.edge_distances(p);
    let q = T::lit(0.25);
    let (co, ci) = match d {
        PlanarRegion::TypeII { .. } => (cell_v, cell_u),
        _ => (cell_u, cell_v),
    };
    outer < q * co || inner < q * ci
}

/// Solves the 3x3 system `m y = r` by Cramer's rule.
fn solve3<T: Scalar>(m: [[T; 3]; 3], r: [T; 3]) -> Option<[T; 3]> {
    let det = |a: [[T; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(m);
    if d == T::zero() || !d.is_finite() {
        return None;
    }
    let mut y = [T::zero(); 3];
    for (col, yc) in y.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = r[row];
        }
        *yc = det(mc) / d;
    }
    Some(y)
}

/// Damped minimum-norm Gauss-Newton on `r(p1) - r(p2) = 0`, projected onto `d`.
fn refine_pair<T: Scalar>(
    s: &ParamSurface<T>,
    d: &PlanarRegion<T>,
    mut p1: Vec2<T>,
    mut p2: Vec2<T>,
    opts: &ScanOptions<T>,
) -> Option<IntersectionWitness<T>> {
    let residual =
        |a: Vec2<T>, b: Vec2<T>| -> Option<Vec3<T>> { Some(s.eval(a).ok()? - s.eval(b).ok()?) };
    let mut r = residual(p1, p2)?;
    let mut res = r.norm();
    let target = opts.tol * T::lit(1e-3);
    for _ in 0..opts.max_iterations {
        if res <= target {
            break;
        }
        let (ru1, rv1) = s.partials(p1).ok()?;
        let (ru2, rv2) = s.partials(p2).ok()?;
        let cols = [ru1, rv1, -ru2, -rv2].map(|c| c.to_array());
        let mut jjt = [[T::zero(); 3]; 3];
        for c in &cols {
            for i in 0..3 {
                for j in 0..3 {
                    jjt[i][j] = jjt[i][j] + c[i] * c[j];
                }
            }
        }
        let trace = jjt[0][0] + jjt[1][1] + jjt[2][2];
        for (i, row) in jjt.iter_mut().enumerate() {
            row[i] = row[i] + trace * T::lit(1e-14);
        }
        let y = solve3(jjt, r.to_array())?;
        let step: Vec<T> = cols
            .iter()
            .map(|c| -(c[0] * y[0] + c[1] * y[1] + c[2] * y[2]))
            .collect();
        let mut alpha = T::one();
        let mut accepted = false;
        while alpha > T::lit(1e-10) {
            let q1 = d.clamp(p1 + Vec2::new(step[0], step[1]) * alpha);
            let q2 = d.clamp(p2 + Vec2::new(step[2], step[3]) * alpha);
            if let Some(rn) = residual(q1, q2) {
                let rn_norm = rn.norm();
                if rn_norm < res {
                    p1 = q1;
                    p2 = q2;
                    r = rn;
                    res = rn_norm;
                    accepted = true;
                    break;
                }
            }
            alpha = alpha * T::lit(0.5);
        }
        if !accepted {
            break;
        }
    }
    if res <= opts.tol {
        let image = (s.eval(p1).ok()? + s.eval(p2).ok()?) * T::lit(0.5);
        Some(IntersectionWitness {
            p1,
            p2,
            image,
            residual: res,
        })
    } else {
        None
    }
}

/// A point where the spanning surface meets the z-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisCrossing<T> {
    pub preimage: Vec2<T>,
    pub point: Vec3<T>,
}

const AXIS_SEEDS: usize = 16;
const AXIS_DEDUP: f64 = 1e-4;

/// Solves `x(u, t) = y(u, t) = 0` on the spanning rectangle by Newton iteration from a
/// seed grid; crossings closer than `1e-4` in image space are merged. Sorted by `z`.
pub fn z_axis_crossings<T: Scalar>(delta: T, tol: T) -> Result<Vec<AxisCrossing<T>>> {
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::Parameter(format!(
            "z-axis search needs 0 < delta < 1, got {delta}"
        )));
    }
    let (s, d) = spanning_surface(delta)?;
    let mut out: Vec<AxisCrossing<T>> = Vec::new();
    for i in 0..AXIS_SEEDS {
        for j in 0..AXIS_SEEDS {
            let su = (T::lit(i as f64) + T::lit(0.5)) / T::lit(AXIS_SEEDS as f64);
            let st = (T::lit(j as f64) + T::lit(0.5)) / T::lit(AXIS_SEEDS as f64);
            let Some(p) = newton_axis(&s, &d, d.map_unit(su, st)) else {
                continue;
            };
            let x = s.eval(p)?;
            if x.x.abs() > tol || x.y.abs() > tol {
                continue;
            }
            if out
                .iter()
                .all(|c| (c.point - x).norm() > T::lit(AXIS_DEDUP))
            {
                out.push(AxisCrossing {
                    preimage: p,
                    point: x,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        a.point
            .z
            .partial_cmp(&b.point.z)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

/// Image points of [`z_axis_crossings`].
pub fn z_axis_intersections<T: Scalar>(delta: T, tol: T) -> Result<Vec<Vec3<T>>> {
    Ok(z_axis_crossings(delta, tol)?
        .into_iter()
        .map(|c| c.point)
        .collect())
}

fn newton_axis<T: Scalar>(
    s: &ParamSurface<T>,
    d: &PlanarRegion<T>,
    mut p: Vec2<T>,
) -> Option<Vec2<T>> {
    let f = |q: Vec2<T>| s.eval(q).ok().map(|x| Vec2::new(x.x, x.y));
    let mut fp = f(p)?;
    for _ in 0..60 {
        let res = fp.max_abs();
        if res <= T::epsilon() {
            break;
        }
        let (ru, rt) = s.partials(p).ok()?;
        let det = ru.x * rt.y - rt.x * ru.y;
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        let step = Vec2::new(
            -(rt.y * fp.u - rt.x * fp.v) / det,
            -(-ru.y * fp.u + ru.x * fp.v) / det,
        );
        let mut alpha = T::one();
        let mut moved = false;
        while alpha > T::lit(1e-8) {
            let q = d.clamp(p + step * alpha);
            if let Some(fq) = f(q) {
                if fq.max_abs() < res {
                    p = q;
                    fp = fq;
                    moved = true;
                    break;
                }
            }
            alpha = alpha * T::lit(0.5);
        }
        if !moved {
            break;
        }
    }
    Some(p)
}

/// Outcome of [`orientability_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport<T> {
    /// Sample points where `|r_u x r_v|` is at or below the degeneracy threshold.
    pub degenerate_points: Vec<Vec2<T>>,
    /// Smallest `|r_u x r_v|` over interior samples.
    pub min_interior_norm: T,
    pub samples: usize,
}

/// Evaluates `|r_u x r_v|` on the interior nodes of a `grid x grid` lattice over `d`
/// (and on its boundary nodes when `include_edges`). A single chart with a nowhere
/// vanishing normal is a necessary condition only; this does not decide orientability
/// of the image.
pub fn orientability_probe<T: Scalar>(
    s: &ParamSurface<T>,
    d: &PlanarRegion<T>,
    grid: usize,
    include_edges: bool,
) -> Result<ProbeReport<T>> {
    if grid < 8 {
        return Err(Error::Parameter(format!(
            "grid must be at least 8, got {grid}"
        )));
    }
    let eps = T::lit(T::DEGENERACY_EPS);
    let g = T::lit(grid as f64);
    let mut report = ProbeReport {
        degenerate_points: Vec::new(),
        min_interior_norm: T::infinity(),
        samples: 0,
    };
    for i in 0..=grid {
        for j in 0..=grid {
            let edge = i == 0 || j == 0 || i == grid || j == grid;
            if edge && !include_edges {
                continue;
            }
            let p = d.map_unit(T::lit(i as f64) / g, T::lit(j as f64) / g);
            let norm = s.normal_vector(p)?.norm();
            report.samples += 1;
            if !edge {
                report.min_interior_norm = report.min_interior_norm.min(norm);
            }
            if norm <= eps {
                report.degenerate_points.push(p);
            }
        }
    }
    Ok(report)
}
