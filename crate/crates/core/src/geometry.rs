//! Parameter-space regions, their oriented boundaries, and parametric surface maps.
//!
//! A [`ParamSurface`] is a map `r: U -> R^3` defined on a padded box `U` around the
//! parameter region `D`. Its first partials come either from user supplied closures or
//! from central differences. A [`PlanarRegion`] is a rectangle or a simple region of
//! type I / type II, and [`PlanarRegion::boundary_path`] traverses its boundary
//! counterclockwise.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureSpec};
use crate::scalar::Scalar;

/// Point or vector in the parameter plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<T> {
    pub u: T,
    pub v: T,
}

/// Point or vector in image space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Vec2<T> {
    #[inline]
    pub fn new(u: T, v: T) -> Self {
        Self { u, v }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.u * o.u + self.v * o.v
    }

    #[inline]
    pub fn norm(self) -> T {
        self.u.hypot(self.v)
    }

    #[inline]
    pub fn max_abs(self) -> T {
        self.u.abs().max(self.v.abs())
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    /// Lexicographic order on `(u, v)`.
    pub fn lex_lt(self, o: Self) -> bool {
        self.u < o.u || (self.u == o.u && self.v < o.v)
    }
}

impl<T: Scalar> Vec3<T> {
    #[inline]
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn max_abs(self) -> T {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

macro_rules! impl_vec_ops {
    ($ty:ident { $($f:ident),+ }) => {
        impl<T: Scalar> Add for $ty<T> {
            type Output = Self;
            #[inline]
            fn add(self, o: Self) -> Self { Self { $($f: self.$f + o.$f),+ } }
        }
        impl<T: Scalar> Sub for $ty<T> {
            type Output = Self;
            #[inline]
            fn sub(self, o: Self) -> Self { Self { $($f: self.$f - o.$f),+ } }
        }
        impl<T: Scalar> Neg for $ty<T> {
            type Output = Self;
            #[inline]
            fn neg(self) -> Self { Self { $($f: -self.$f),+ } }
        }
        impl<T: Scalar> Mul<T> for $ty<T> {
            type Output = Self;
            #[inline]
            fn mul(self, s: T) -> Self { Self { $($f: self.$f * s),+ } }
        }
        impl<T: Scalar> Div<T> for $ty<T> {
            type Output = Self;
            #[inline]
            fn div(self, s: T) -> Self { Self { $($f: self.$f / s),+ } }
        }
        impl<T: Scalar> AddAssign for $ty<T> {
            #[inline]
            fn add_assign(&mut self, o: Self) { $(self.$f = self.$f + o.$f;)+ }
        }
        impl<T: Scalar> SubAssign for $ty<T> {
            #[inline]
            fn sub_assign(&mut self, o: Self) { $(self.$f = self.$f - o.$f;)+ }
        }
    };
}

impl_vec_ops!(Vec2 { u, v });
impl_vec_ops!(Vec3 { x, y, z });

impl<T: Scalar> fmt::Display for Vec2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl<T: Scalar> fmt::Display for Vec3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
pub type CurveFn<T> = Arc<dyn Fn(T) -> Vec2<T> + Send + Sync>;
pub type MapFn<T> = Arc<dyn Fn(Vec2<T>) -> Vec3<T> + Send + Sync>;
pub type PartialsFn<T> = Arc<dyn Fn(Vec2<T>) -> (Vec3<T>, Vec3<T>) + Send + Sync>;

/// Continuously differentiable bounding function `g` of a simple region.
#[derive(Clone)]
pub struct Profile<T> {
    value: ScalarFn<T>,
    derivative: Option<ScalarFn<T>>,
}

impl<T: Scalar> Profile<T> {
    pub fn new(f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self {
            value: Arc::new(f),
            derivative: None,
        }
    }

    pub fn with_derivative(mut self, df: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(df));
        self
    }

    pub fn constant(c: T) -> Self {
        Self::new(move |_| c).with_derivative(|_| T::zero())
    }

    /// `g(t) = slope * t + intercept`.
    pub fn linear(slope: T, intercept: T) -> Self {
        Self::new(move |t| slope * t + intercept).with_derivative(move |_| slope)
    }

    #[inline]
    pub fn eval(&self, t: T) -> T {
        (self.value)(t)
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn derivative(&self, t: T) -> Option<T> {
        self.derivative.as_ref().map(|d| d(t))
    }
}

impl<T> fmt::Debug for Profile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Profile")
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

/// Axis-aligned box `[u_min, u_max] x [v_min, v_max]` in the parameter plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamBox<T> {
    pub u_min: T,
    pub u_max: T,
    pub v_min: T,
    pub v_max: T,
}

impl<T: Scalar> ParamBox<T> {
    pub fn new(u_min: T, u_max: T, v_min: T, v_max: T) -> Self {
        Self {
            u_min,
            u_max,
            v_min,
            v_max,
        }
    }

    pub fn contains(&self, p: Vec2<T>, pad: T) -> bool {
        p.u >= self.u_min - pad
            && p.u <= self.u_max + pad
            && p.v >= self.v_min - pad
            && p.v <= self.v_max + pad
    }

    pub fn diameter(&self) -> T {
        (self.u_max - self.u_min).hypot(self.v_max - self.v_min)
    }
}

/// A simple planar region `D`.
///
/// Type I is `{a <= u <= b, lower(u) <= v <= upper(u)}`, type II is
/// `{a <= v <= b, lower(v) <= u <= upper(v)}`.
#[derive(Debug, Clone)]
pub enum PlanarRegion<T> {
    Rectangle {
        u: (T, T),
        v: (T, T),
    },
    TypeI {
        a: T,
        b: T,
        lower: Profile<T>,
        upper: Profile<T>,
    },
    TypeII {
        a: T,
        b: T,
        lower: Profile<T>,
        upper: Profile<T>,
    },
}

const PROFILE_SAMPLES: usize = 1024;

impl<T: Scalar> PlanarRegion<T> {
    /// `[a, b] x [c, d]`.
    pub fn rectangle(a: T, b: T, c: T, d: T) -> Result<Self> {
        if !(a < b)
            || !(c < d)
            || !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite())
        {
            return Err(Error::Region(format!(
                "rectangle needs a < b and c < d, got [{a}, {b}] x [{c}, {d}]"
            )));
        }
        Ok(Self::Rectangle {
            u: (a, b),
            v: (c, d),
        })
    }

    pub fn unit_square() -> Self {
        Self::Rectangle {
            u: (T::zero(), T::one()),
            v: (T::zero(), T::one()),
        }
    }

    pub fn type_i(a: T, b: T, lower: Profile<T>, upper: Profile<T>) -> Result<Self> {
        validate_profiles(a, b, &lower, &upper)?;
        Ok(Self::TypeI { a, b, lower, upper })
    }

    pub fn type_ii(a: T, b: T, lower: Profile<T>, upper: Profile<T>) -> Result<Self> {
        validate_profiles(a, b, &lower, &upper)?;
        Ok(Self::TypeII { a, b, lower, upper })
    }

    /// Area by quadrature of `upper - lower` (exact for rectangles).
    pub fn area(&self) -> T {
        match self {
            Self::Rectangle { u, v } => (u.1 - u.0) * (v.1 - v.0),
            Self::TypeI { a, b, lower, upper } | Self::TypeII { a, b, lower, upper } => {
                profile_area(*a, *b, lower, upper)
            }
        }
    }

    /// Bounding box; profile extrema are sampled, so the box may miss an extremum by a
    /// tiny amount that the surface padding absorbs.
    pub fn bounding_box(&self) -> ParamBox<T> {
        match self {
            Self::Rectangle { u, v } => ParamBox::new(u.0, u.1, v.0, v.1),
            Self::TypeI { a, b, lower, upper } => {
                let (lo, hi) = profile_range(*a, *b, lower, upper);
                ParamBox::new(*a, *b, lo, hi)
            }
            Self::TypeII { a, b, lower, upper } => {
                let (lo, hi) = profile_range(*a, *b, lower, upper);
                ParamBox::new(lo, hi, *a, *b)
            }
        }
    }

    pub fn diameter(&self) -> T {
        self.bounding_box().diameter()
    }

    /// Maps the unit square onto the region: the outer coordinate `s` runs along
    /// `u` (rectangle, type I) or `v` (type II), the inner `t` spans the fibre affinely.
    pub fn map_unit(&self, s: T, t: T) -> Vec2<T> {
        match self {
            Self::Rectangle { u, v } => Vec2::new(u.0 + (u.1 - u.0) * s, v.0 + (v.1 - v.0) * t),
            Self::TypeI { a, b, lower, upper } => {
                let x = *a + (*b - *a) * s;
                let (g1, g2) = (lower.eval(x), upper.eval(x));
                Vec2::new(x, g1 + (g2 - g1) * t)
            }
            Self::TypeII { a, b, lower, upper } => {
                let y = *a + (*b - *a) * s;
                let (g1, g2) = (lower.eval(y), upper.eval(y));
                Vec2::new(g1 + (g2 - g1) * t, y)
            }
        }
    }

    /// Nearest point of the region in the fibre sense: clamp the outer coordinate to
    /// `[a, b]`, then the inner coordinate to the fibre at that outer value.
    pub fn clamp(&self, p: Vec2<T>) -> Vec2<T> {
        match self {
            Self::Rectangle { u, v } => Vec2::new(clamp(p.u, u.0, u.1), clamp(p.v, v.0, v.1)),
            Self::TypeI { a, b, lower, upper } => {
                let x = clamp(p.u, *a, *b);
                Vec2::new(x, clamp(p.v, lower.eval(x), upper.eval(x)))
            }
            Self::TypeII { a, b, lower, upper } => {
                let y = clamp(p.v, *a, *b);
                Vec2::new(clamp(p.u, lower.eval(y), upper.eval(y)), y)
            }
        }
    }

    /// Distances from `p` to the outer and inner bounds of the region, `(outer, inner)`.
    pub(crate) fn edge_distances(&self, p: Vec2<T>) -> (T, T) {
        let (o, i, a, b, g1, g2) = match self {
            Self::Rectangle { u, v } => (p.u, p.v, u.0, u.1, v.0, v.1),
            Self::TypeI { a, b, lower, upper } => {
                (p.u, p.v, *a, *b, lower.eval(p.u), upper.eval(p.u))
            }
            Self::TypeII { a, b, lower, upper } => {
                (p.v, p.u, *a, *b, lower.eval(p.v), upper.eval(p.v))
            }
        };
        ((o - a).min(b - o), (i - g1).min(g2 - i))
    }

    /// Counterclockwise boundary. Rectangles are traversed bottom, right, top, left
    /// starting at `(a, c)`.
    pub fn boundary_path(&self) -> BoundaryPath<T> {
        match self {
            Self::Rectangle { u, v } => {
                let (a, b, c, d) = (u.0, u.1, v.0, v.1);
                BoundaryPath::new(vec![
                    Segment::line(Vec2::new(a, c), Vec2::new(b, c)),
                    Segment::line(Vec2::new(b, c), Vec2::new(b, d)),
                    Segment::line(Vec2::new(b, d), Vec2::new(a, d)),
                    Segment::line(Vec2::new(a, d), Vec2::new(a, c)),
                ])
            }
            Self::TypeI { a, b, lower, upper } => {
                let (a, b) = (*a, *b);
                BoundaryPath::new(vec![
                    Segment::graph(a, b, lower.clone(), false, false),
                    Segment::line(Vec2::new(b, lower.eval(b)), Vec2::new(b, upper.eval(b))),
                    Segment::graph(a, b, upper.clone(), true, false),
                    Segment::line(Vec2::new(a, upper.eval(a)), Vec2::new(a, lower.eval(a))),
                ])
            }
            Self::TypeII { a, b, lower, upper } => {
                let (a, b) = (*a, *b);
                BoundaryPath::new(vec![
                    Segment::graph(a, b, upper.clone(), false, true),
                    Segment::line(Vec2::new(upper.eval(b), b), Vec2::new(lower.eval(b), b)),
                    Segment::graph(a, b, lower.clone(), true, true),
                    Segment::line(Vec2::new(lower.eval(a), a), Vec2::new(upper.eval(a), a)),
                ])
            }
        }
    }
}

#[inline]
fn clamp<T: Scalar>(x: T, lo: T, hi: T) -> T {
    x.max(lo).min(hi)
}

fn validate_profiles<T: Scalar>(a: T, b: T, lower: &Profile<T>, upper: &Profile<T>) -> Result<()> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Region(format!(
            "simple region needs a < b, got [{a}, {b}]"
        )));
    }
    let n = T::lit(PROFILE_SAMPLES as f64);
    for i in 0..=PROFILE_SAMPLES {
        let x = a + (b - a) * T::lit(i as f64) / n;
        let (g1, g2) = (lower.eval(x), upper.eval(x));
        if !g1.is_finite() || !g2.is_finite() {
            return Err(Error::Region(format!("profile not finite at {x}")));
        }
        if g1 > g2 {
            return Err(Error::Region(format!(
                "lower profile exceeds upper profile at {x}: {g1} > {g2}"
            )));
        }
    }
    if !(profile_area(a, b, lower, upper) > T::zero()) {
        return Err(Error::Region("region has zero area".into()));
    }
    Ok(())
}

fn profile_area<T: Scalar>(a: T, b: T, lower: &Profile<T>, upper: &Profile<T>) -> T {
    let (lower, upper) = (lower.clone(), upper.clone());
    quadrature::integrate_1d_smoothed(
        move |x| upper.eval(x) - lower.eval(x),
        a,
        b,
        &QuadratureSpec::default(),
    )
    .map(|r| r.value)
    .unwrap_or_else(|_| T::nan())
}

fn profile_range<T: Scalar>(a: T, b: T, lower: &Profile<T>, upper: &Profile<T>) -> (T, T) {
    let n = T::lit(PROFILE_SAMPLES as f64);
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..=PROFILE_SAMPLES {
        let x = a + (b - a) * T::lit(i as f64) / n;
        lo = lo.min(lower.eval(x));
        hi = hi.max(upper.eval(x));
    }
    (lo, hi)
}

/// `s -> a + (b - a)(1 - cos(pi s))/2`, a smooth reparametrization of `[0, 1]` onto
/// `[a, b]` with vanishing speed at both ends. Graph edges of profile regions use it so
/// profiles with square-root endpoints (discs, ellipses) integrate to full accuracy.
#[inline]
pub(crate) fn cosine_map<T: Scalar>(a: T, b: T, s: T) -> (T, T) {
    let half = T::lit(0.5);
    let pi = T::PI();
    let x = a + (b - a) * half * (T::one() - (pi * s).cos());
    let dx = (b - a) * half * pi * (pi * s).sin();
    (x, dx)
}

/// One piece `[0, 1] -> R^2` of a boundary path.
#[derive(Clone)]
pub struct Segment<T> {
    point: CurveFn<T>,
    tangent: Option<CurveFn<T>>,
}

impl<T: Scalar> Segment<T> {
    pub fn new(point: impl Fn(T) -> Vec2<T> + Send + Sync + 'static) -> Self {
        Self {
            point: Arc::new(point),
            tangent: None,
        }
    }

    pub fn with_tangent(mut self, tangent: impl Fn(T) -> Vec2<T> + Send + Sync + 'static) -> Self {
        self.tangent = Some(Arc::new(tangent));
        self
    }

    /// Straight segment from `p0` to `p1`.
    pub fn line(p0: Vec2<T>, p1: Vec2<T>) -> Self {
        let d = p1 - p0;
        Self::new(move |t| p0 + d * t).with_tangent(move |_| d)
    }

    /// Graph of a profile traversed from `a` to `b` (or reversed), with the profile on
    /// the second coordinate (`transposed == false`) or the first.
    fn graph(a: T, b: T, g: Profile<T>, reversed: bool, transposed: bool) -> Self {
        let orient = move |s: T| if reversed { T::one() - s } else { s };
        let sign = if reversed { -T::one() } else { T::one() };
        let place = move |outer: T, inner: T| {
            if transposed {
                Vec2::new(inner, outer)
            } else {
                Vec2::new(outer, inner)
            }
        };
        let gp = g.clone();
        let seg = Self::new(move |s| {
            let (x, _) = cosine_map(a, b, orient(s));
            place(x, gp.eval(x))
        });
        if g.has_derivative() {
            seg.with_tangent(move |s| {
                let (x, dx) = cosine_map(a, b, orient(s));
                let dg = g.derivative(x).unwrap_or_else(T::nan);
                place(dx * sign, dg * dx * sign)
            })
        } else {
            seg
        }
    }

    #[inline]
    pub fn point(&self, t: T) -> Vec2<T> {
        (self.point)(t)
    }

    /// Analytic tangent when available, else a central difference in `t`.
    pub fn tangent(&self, t: T) -> Vec2<T> {
        match &self.tangent {
            Some(d) => d(t),
            None => {
                let h = T::fd_step(T::one());
                (self.point(t + h) - self.point(t - h)) / (h + h)
            }
        }
    }

    pub fn start(&self) -> Vec2<T> {
        self.point(T::zero())
    }

    pub fn end(&self) -> Vec2<T> {
        self.point(T::one())
    }
}

impl<T> fmt::Debug for Segment<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Segment")
            .field("analytic_tangent", &self.tangent.is_some())
            .finish()
    }
}

/// Closed, counterclockwise, piecewise-C1 boundary of a region.
#[derive(Debug, Clone)]
pub struct BoundaryPath<T> {
    segments: Vec<Segment<T>>,
}

impl<T: Scalar> BoundaryPath<T> {
    pub fn new(segments: Vec<Segment<T>>) -> Self {
        Self { segments }
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    /// Largest gap between consecutive segment endpoints, including last-to-first.
    pub fn closure_gap(&self) -> T {
        let n = self.segments.len();
        (0..n)
            .map(|i| (self.segments[i].end() - self.segments[(i + 1) % n].start()).norm())
            .fold(T::zero(), T::max)
    }

    pub fn is_closed(&self, tol: T) -> bool {
        !self.segments.is_empty() && self.closure_gap() <= tol
    }

    /// `1/2 * integral of (u dv - v du)`; positive for counterclockwise traversal.
    pub fn signed_area(&self, spec: &QuadratureSpec) -> Result<T> {
        let mut total = T::zero();
        for seg in &self.segments {
            let r = quadrature::integrate_1d(
                |t| {
                    let p = seg.point(t);
                    let d = seg.tangent(t);
                    p.u * d.v - p.v * d.u
                },
                T::zero(),
                T::one(),
                spec,
            )?;
            total = total + r.value;
        }
        Ok(total * T::lit(0.5))
    }
}

/// Result of [`ParamSurface::normal_field`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normal<T> {
    Unit(Vec3<T>),
    /// `|r_u x r_v|` fell to or below the degeneracy threshold.
    Degenerate {
        norm: T,
    },
}

impl<T: Scalar> Normal<T> {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Normal::Degenerate { .. })
    }

    pub fn unit(self) -> Option<Vec3<T>> {
        match self {
            Normal::Unit(n) => Some(n),
            Normal::Degenerate { .. } => None,
        }
    }
}

pub const DEFAULT_DOMAIN_PADDING: f64 = 1e-3;

/// Twice continuously differentiable map from a padded parameter box into `R^3`.
#[derive(Clone)]
pub struct ParamSurface<T> {
    map: MapFn<T>,
    partials: Option<PartialsFn<T>>,
    domain: ParamBox<T>,
    padding: T,
}

impl<T> fmt::Debug for ParamSurface<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamSurface")
            .field("domain", &self.domain)
            .field("padding", &self.padding)
            .field("analytic_partials", &self.partials.is_some())
            .finish()
    }
}

impl<T: Scalar> ParamSurface<T> {
    pub fn new(
        domain: ParamBox<T>,
        map: impl Fn(Vec2<T>) -> Vec3<T> + Send + Sync + 'static,
    ) -> Self {
        Self {
            map: Arc::new(map),
            partials: None,
            domain,
            padding: T::lit(DEFAULT_DOMAIN_PADDING),
        }
    }

    /// Surface over the bounding box of `region`.
    pub fn over(
        region: &PlanarRegion<T>,
        map: impl Fn(Vec2<T>) -> Vec3<T> + Send + Sync + 'static,
    ) -> Self {
        Self::new(region.bounding_box(), map)
    }

    /// Supplies `(r_u, r_v)` in closed form.
    pub fn with_partials(
        mut self,
        partials: impl Fn(Vec2<T>) -> (Vec3<T>, Vec3<T>) + Send + Sync + 'static,
    ) -> Self {
        self.partials = Some(Arc::new(partials));
        self
    }

    /// Drops analytic partials so every derivative goes through finite differences.
    pub fn without_partials(mut self) -> Self {
        self.partials = None;
        self
    }

    pub fn with_padding(mut self, padding: T) -> Self {
        self.padding = padding;
        self
    }

    pub fn domain(&self) -> ParamBox<T> {
        self.domain
    }

    pub fn padding(&self) -> T {
        self.padding
    }

    pub fn has_analytic_partials(&self) -> bool {
        self.partials.is_some()
    }

    fn check(&self, p: Vec2<T>) -> Result<()> {
        if p.is_finite() && self.domain.contains(p, self.padding) {
            Ok(())
        } else {
            Err(Error::Domain {
                u: p.u.as_f64(),
                v: p.v.as_f64(),
            })
        }
    }

    /// Evaluates the raw map without the domain check.
    #[inline]
    pub fn map_unchecked(&self, p: Vec2<T>) -> Vec3<T> {
        (self.map)(p)
    }

    /// `r(p)`, for `p` inside the padded domain.
    pub fn eval(&self, p: Vec2<T>) -> Result<Vec3<T>> {
        self.check(p)?;
        Ok((self.map)(p))
    }

    /// `(r_u, r_v)` at `p`; central differences when no closed form was supplied.
    pub fn partials(&self, p: Vec2<T>) -> Result<(Vec3<T>, Vec3<T>)> {
        self.check(p)?;
        match &self.partials {
            Some(d) => Ok(d(p)),
            None => self.fd_partials(p, T::fd_step(p.max_abs())),
        }
    }

    /// Central-difference partials with an explicit step.
    pub fn fd_partials(&self, p: Vec2<T>, h: T) -> Result<(Vec3<T>, Vec3<T>)> {
        let du = Vec2::new(h, T::zero());
        let dv = Vec2::new(T::zero(), h);
        let two_h = h + h;
        let ru = (self.eval(p + du)? - self.eval(p - du)?) / two_h;
        let rv = (self.eval(p + dv)? - self.eval(p - dv)?) / two_h;
        Ok((ru, rv))
    }

    /// `(d/dv r_u, d/du r_v)` by central differences of the first partials with step `h`.
    /// The two agree for a C2 map.
    pub fn mixed_partials(&self, p: Vec2<T>, h: T) -> Result<(Vec3<T>, Vec3<T>)> {
        let first = |q: Vec2<T>| -> Result<(Vec3<T>, Vec3<T>)> {
            match &self.partials {
                Some(d) => {
                    self.check(q)?;
                    Ok(d(q))
                }
                None => self.fd_partials(q, h),
            }
        };
        let du = Vec2::new(h, T::zero());
        let dv = Vec2::new(T::zero(), h);
        let two_h = h + h;
        let ru_v = (first(p + dv)?.0 - first(p - dv)?.0) / two_h;
        let rv_u = (first(p + du)?.1 - first(p - du)?.1) / two_h;
        Ok((ru_v, rv_u))
    }

    /// `r_u x r_v` at `p`.
    pub fn normal_vector(&self, p: Vec2<T>) -> Result<Vec3<T>> {
        let (ru, rv) = self.partials(p)?;
        Ok(ru.cross(rv))
    }

    /// Unit normal `c / |c|` with `c = r_u x r_v`, or a degeneracy flag.
    pub fn normal_field(&self, p: Vec2<T>) -> Result<Normal<T>> {
        let c = self.normal_vector(p)?;
        let n = c.norm();
        if n <= T::lit(T::DEGENERACY_EPS) {
            Ok(Normal::Degenerate { norm: n })
        } else {
            Ok(Normal::Unit(c / n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn flat() -> ParamSurface<f64> {
        ParamSurface::new(ParamBox::new(-1.0, 2.0, -1.0, 2.0), |p| {
            Vec3::new(p.u, p.v, 0.0)
        })
    }

    #[test]
    fn vector_algebra() {
        let a = Vec3::new(1.0f64, 2.0, 3.0);
        let b = Vec3::new(-2.0, 0.5, 4.0);
        let c = a.cross(b);
        assert!(c.dot(a).abs() < 1e-14 && c.dot(b).abs() < 1e-14);
        assert_eq!(a + b - b, a);
        assert_eq!((a * 2.0).x, 2.0);
        assert_eq!(
            Vec3::new(1.0, 0.0, 0.0).cross(Vec3::new(0.0, 1.0, 0.0)),
            Vec3::new(0.0, 0.0, 1.0)
        );
    }

    #[test]
    fn constant_and_identity_partials() {
        let c = ParamSurface::new(ParamBox::new(0.0, 1.0, 0.0, 1.0), |_| {
            Vec3::new(1.0, 2.0, 3.0)
        });
        let (ru, rv) = c.partials(Vec2::new(0.5, 0.5)).unwrap();
        assert_eq!(ru, Vec3::zero());
        assert_eq!(rv, Vec3::zero());

        let (ru, rv) = flat().partials(Vec2::new(0.3, 0.7)).unwrap();
        assert!((ru - Vec3::new(1.0, 0.0, 0.0)).max_abs() < 1e-9);
        assert!((rv - Vec3::new(0.0, 1.0, 0.0)).max_abs() < 1e-9);
    }

    #[test]
    fn out_of_domain_is_reported() {
        let s = flat();
        match s.eval(Vec2::new(5.0, 0.0)) {
            Err(Error::Domain { u, v }) => assert_eq!((u, v), (5.0, 0.0)),
            other => panic!("expected domain error, got {other:?}"),
        }
        // inside the padding is fine
        assert!(s.eval(Vec2::new(2.0005, 0.0)).is_ok());
        assert!(s.eval(Vec2::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn fd_step_leaving_neighbourhood_is_domain_error() {
        let s = flat().with_padding(0.0);
        assert!(s.partials(Vec2::new(2.0, 0.0)).is_err());
        assert!(s.partials(Vec2::new(1.9, 0.0)).is_ok());
    }

    #[test]
    fn flat_normal_is_k() {
        let n = flat()
            .normal_field(Vec2::new(0.2, 0.9))
            .unwrap()
            .unit()
            .unwrap();
        assert!((n - Vec3::new(0.0, 0.0, 1.0)).max_abs() < 1e-9);
    }

    #[test]
    fn degenerate_normal_is_flagged() {
        let s = ParamSurface::new(ParamBox::new(0.0, 1.0, 0.0, 1.0), |p| {
            Vec3::new(p.u, p.u, 0.0)
        })
        .with_partials(|_| (Vec3::new(1.0, 1.0, 0.0), Vec3::zero()));
        assert!(s.normal_field(Vec2::new(0.5, 0.5)).unwrap().is_degenerate());
    }

    #[test]
    fn rectangle_boundary_order_and_area() {
        let d = 0.3;
        let r = PlanarRegion::rectangle(0.0, 2.0 * PI, -d, d).unwrap();
        let path = r.boundary_path();
        assert_eq!(path.segments().len(), 4);
        assert_eq!(path.closure_gap(), 0.0);
        let area = path.signed_area(&QuadratureSpec::default()).unwrap();
        assert!((area - 4.0 * PI * d).abs() < 1e-12);

        let sq = PlanarRegion::<f64>::unit_square().boundary_path();
        assert_eq!(sq.segments()[0].start(), Vec2::new(0.0, 0.0));
        assert_eq!(sq.segments()[0].end(), Vec2::new(1.0, 0.0));
        assert_eq!(sq.segments()[1].end(), Vec2::new(1.0, 1.0));
    }

    #[test]
    fn triangle_boundary_area() {
        let tri = PlanarRegion::type_i(
            0.0f64,
            1.0,
            Profile::constant(0.0),
            Profile::linear(1.0, 0.0),
        )
        .unwrap();
        let path = tri.boundary_path();
        assert!(path.is_closed(1e-12));
        let area = path.signed_area(&QuadratureSpec::default()).unwrap();
        assert!((area - 0.5).abs() < 1e-12, "{area}");
        assert!((tri.area() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn type_ii_boundary_is_counterclockwise() {
        // {0 <= v <= 1, v^2 <= u <= 1}: area 2/3
        let r = PlanarRegion::type_ii(
            0.0,
            1.0,
            Profile::new(|v: f64| v * v),
            Profile::constant(1.0),
        )
        .unwrap();
        let path = r.boundary_path();
        assert!(path.is_closed(1e-12));
        let a = path.signed_area(&QuadratureSpec::default()).unwrap();
        assert!((a - 2.0 / 3.0).abs() < 1e-8, "{a}");
    }

    #[test]
    fn disc_boundary_without_derivative() {
        let disc = PlanarRegion::type_i(
            -1.0,
            1.0,
            Profile::new(|x: f64| -(1.0 - x * x).max(0.0).sqrt()),
            Profile::new(|x: f64| (1.0 - x * x).max(0.0).sqrt()),
        )
        .unwrap();
        let a = disc
            .boundary_path()
            .signed_area(&QuadratureSpec::default())
            .unwrap();
        assert!((a - PI).abs() < 1e-6, "{a}");
        assert!((disc.area() - PI).abs() < 1e-6);
    }

    #[test]
    fn invalid_regions_are_rejected() {
        assert!(PlanarRegion::rectangle(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(PlanarRegion::rectangle(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(
            PlanarRegion::type_i(0.0, 1.0, Profile::constant(1.0), Profile::constant(0.0)).is_err()
        );
        assert!(
            PlanarRegion::type_i(0.0, 1.0, Profile::constant(0.5), Profile::constant(0.5)).is_err()
        );
    }

    #[test]
    fn mixed_partials_agree_for_smooth_map() {
        let s = ParamSurface::new(ParamBox::new(0.0, 1.0, 0.0, 1.0), |p: Vec2<f64>| {
            Vec3::new(p.u.sin() * p.v.cos(), (p.u * p.v).exp(), p.u * p.v * p.v)
        });
        let (a, b) = s.mixed_partials(Vec2::new(0.4, 0.6), 1e-4).unwrap();
        assert!((a - b).max_abs() < 1e-6);
    }

    #[test]
    fn clamp_and_map_unit() {
        let tri = PlanarRegion::type_i(0.0, 1.0, Profile::constant(0.0), Profile::linear(1.0, 0.0))
            .unwrap();
        assert_eq!(tri.map_unit(0.5, 1.0), Vec2::new(0.5, 0.5));
        assert_eq!(tri.clamp(Vec2::new(0.5, 0.9)), Vec2::new(0.5, 0.5));
        assert_eq!(tri.clamp(Vec2::new(-1.0, 0.2)), Vec2::new(0.0, 0.0));
    }

    #[test]
    fn generic_over_f32() {
        let s = ParamSurface::<f32>::new(ParamBox::new(0.0, 1.0, 0.0, 1.0), |p| {
            Vec3::new(p.u, p.v, p.u * p.v)
        });
        let (ru, rv) = s.partials(Vec2::new(0.5, 0.25)).unwrap();
        assert!((ru.z - 0.25).abs() < 1e-3 && (rv.z - 0.5).abs() < 1e-3);
    }
}
