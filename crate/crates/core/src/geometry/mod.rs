//! Exact rational geometry on the line and in the plane.
//!
//! Every predicate here is evaluated over [`Rational`]; there is no floating
//! point anywhere. Intervals are treated as lying on the x-axis whenever a
//! planar view is needed, so a 1D coordinate `t` is the point `(t, 0)` and the
//! lexicographic order on points restricts to the usual order on the line.

mod line;
mod polygon;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use line::Line;
pub use polygon::ConvexPolygon;

/// Exact rational scalar. Always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// `n / d` as an exact rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch {
        expected: Dimension,
        found: Dimension,
    },
    #[error("operation requires at least one body")]
    EmptyInput,
    #[error("interval has lo > hi")]
    InvalidInterval,
    #[error("polygon needs at least one vertex")]
    NoVertices,
    #[error("vertices are not in convex position")]
    NotConvex,
    #[error("line coefficients a and b are both zero")]
    DegenerateLine,
    #[error("bodies intersect; no separating line exists")]
    Intersecting,
    #[error("operation is only defined in dimension {0}")]
    Unsupported(Dimension),
}

/// Ambient dimension of a body or family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dimension {
    One,
    Two,
}

impl Dimension {
    pub fn as_usize(self) -> usize {
        match self {
            Dimension::One => 1,
            Dimension::Two => 2,
        }
    }

    pub fn from_usize(d: usize) -> Option<Self> {
        match d {
            1 => Some(Dimension::One),
            2 => Some(Dimension::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_usize())
    }
}

/// A point of the plane. The derived order is lexicographic (x first, then y),
/// which is a total order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    /// Integer coordinates.
    pub fn ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    /// A coordinate on the real line, embedded on the x-axis.
    pub fn on_axis(t: Rational) -> Self {
        Point::new(t, Rational::zero())
    }

    pub(crate) fn sub(&self, other: &Point) -> (Rational, Rational) {
        (&self.x - &other.x, &self.y - &other.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `(b - a) x (c - a)`: positive when `a, b, c` turn counter-clockwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Rational {
    let (ux, uy) = b.sub(a);
    let (vx, vy) = c.sub(a);
    ux * vy - uy * vx
}

/// A compact nonempty segment of the real line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, GeometryError> {
        if lo > hi {
            return Err(GeometryError::InvalidInterval);
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(t: Rational) -> Self {
        Interval {
            lo: t.clone(),
            hi: t,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.lo <= t && t <= &self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

/// A compact convex set in dimension 1 or 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConvexBody {
    Interval(Interval),
    Polygon(ConvexPolygon),
}

impl ConvexBody {
    pub fn interval(lo: Rational, hi: Rational) -> Result<Self, GeometryError> {
        Interval::new(lo, hi).map(ConvexBody::Interval)
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        ConvexPolygon::new(vertices).map(ConvexBody::Polygon)
    }

    /// Axis-parallel rectangle `[x0, x1] x [y0, y1]`.
    pub fn rect(
        x0: Rational,
        y0: Rational,
        x1: Rational,
        y1: Rational,
    ) -> Result<Self, GeometryError> {
        if x0 > x1 || y0 > y1 {
            return Err(GeometryError::InvalidInterval);
        }
        ConvexPolygon::hull([
            Point::new(x0.clone(), y0.clone()),
            Point::new(x1.clone(), y0),
            Point::new(x1, y1.clone()),
            Point::new(x0, y1),
        ])
        .map(ConvexBody::Polygon)
    }

    pub fn dimension(&self) -> Dimension {
        match self {
            ConvexBody::Interval(_) => Dimension::One,
            ConvexBody::Polygon(_) => Dimension::Two,
        }
    }

    /// Extreme points of the body in the plane (intervals sit on the x-axis).
    pub fn planar_vertices(&self) -> Vec<Point> {
        match self {
            ConvexBody::Interval(iv) => {
                if iv.lo == iv.hi {
                    vec![Point::on_axis(iv.lo.clone())]
                } else {
                    vec![Point::on_axis(iv.lo.clone()), Point::on_axis(iv.hi.clone())]
                }
            }
            ConvexBody::Polygon(poly) => poly.vertices().to_vec(),
        }
    }

    fn as_polygon(&self) -> ConvexPolygon {
        match self {
            ConvexBody::Interval(_) => {
                ConvexPolygon::hull(self.planar_vertices()).expect("nonempty")
            }
            ConvexBody::Polygon(poly) => poly.clone(),
        }
    }
}

fn check_dimension(expected: Dimension, body: &ConvexBody) -> Result<(), GeometryError> {
    if body.dimension() != expected {
        return Err(GeometryError::DimensionMismatch {
            expected,
            found: body.dimension(),
        });
    }
    Ok(())
}

/// Intersection of two bodies of the same dimension, `None` when empty.
pub fn intersect_pair(a: &ConvexBody, b: &ConvexBody) -> Result<Option<ConvexBody>, GeometryError> {
    match (a, b) {
        (ConvexBody::Interval(x), ConvexBody::Interval(y)) => {
            Ok(x.intersect(y).map(ConvexBody::Interval))
        }
        (ConvexBody::Polygon(x), ConvexBody::Polygon(y)) => {
            Ok(x.intersect(y).map(ConvexBody::Polygon))
        }
        _ => Err(GeometryError::DimensionMismatch {
            expected: a.dimension(),
            found: b.dimension(),
        }),
    }
}

/// Exact common intersection of a nonempty list of bodies.
pub fn intersect_bodies(bodies: &[ConvexBody]) -> Result<Option<ConvexBody>, GeometryError> {
    let (first, rest) = bodies.split_first().ok_or(GeometryError::EmptyInput)?;
    for body in rest {
        check_dimension(first.dimension(), body)?;
    }
    let mut acc = first.clone();
    for body in rest {
        match intersect_pair(&acc, body)? {
            Some(next) => acc = next,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

/// The lexicographically maximal point of a body.
pub fn lexmax_body(body: &ConvexBody) -> Point {
    match body {
        ConvexBody::Interval(iv) => Point::on_axis(iv.hi.clone()),
        ConvexBody::Polygon(poly) => poly.lexmax(),
    }
}

/// The lexicographically minimal point of a body.
pub fn lexmin_body(body: &ConvexBody) -> Point {
    match body {
        ConvexBody::Interval(iv) => Point::on_axis(iv.lo.clone()),
        ConvexBody::Polygon(poly) => poly.vertices()[0].clone(),
    }
}

/// Closed-set membership. Interval members must lie on the x-axis.
pub fn body_contains_point(body: &ConvexBody, p: &Point) -> bool {
    match body {
        ConvexBody::Interval(iv) => p.y.is_zero() && iv.contains(&p.x),
        ConvexBody::Polygon(poly) => poly.contains(p),
    }
}

/// True iff the body is not strictly on one side of the line.
pub fn line_meets_body(line: &Line, body: &ConvexBody) -> bool {
    let mut below = false;
    let mut above = false;
    for v in body.planar_vertices() {
        let s = line.eval(&v);
        if s.is_zero() {
            return true;
        }
        if s.is_negative() {
            below = true;
        } else {
            above = true;
        }
    }
    below && above
}

/// A line strictly separating two disjoint planar bodies: the perpendicular
/// bisector of a closest pair of points.
pub fn separating_line(a: &ConvexBody, b: &ConvexBody) -> Result<Line, GeometryError> {
    check_dimension(Dimension::Two, a).map_err(|_| GeometryError::Unsupported(Dimension::Two))?;
    check_dimension(Dimension::Two, b).map_err(|_| GeometryError::Unsupported(Dimension::Two))?;
    let (pa, pb) = (a.as_polygon(), b.as_polygon());
    if pa.intersect(&pb).is_some() {
        return Err(GeometryError::Intersecting);
    }
    let (p, q) = polygon::closest_pair(&pa, &pb);
    let (nx, ny) = q.sub(&p);
    let two = int(2);
    let c = (&nx * (&p.x + &q.x) + &ny * (&p.y + &q.y)) / two;
    Line::new(nx, ny, c)
}

/// `body ∩ line` as a parameter interval along the line (see
/// [`Line::parameter`]); `None` when they miss each other.
pub fn clip_to_line(body: &ConvexBody, line: &Line) -> Option<Interval> {
    let verts = body.planar_vertices();
    let mut params: Vec<Rational> = Vec::new();
    let n = verts.len();
    for i in 0..n {
        let u = &verts[i];
        let su = line.eval(u);
        if su.is_zero() {
            params.push(line.parameter(u));
        }
        if n == 1 {
            break;
        }
        let v = &verts[(i + 1) % n];
        let sv = line.eval(v);
        if (su.is_positive() && sv.is_negative()) || (su.is_negative() && sv.is_positive()) {
            let s = &su / (&su - &sv);
            let (dx, dy) = v.sub(u);
            let hit = Point::new(&u.x + &s * dx, &u.y + &s * dy);
            params.push(line.parameter(&hit));
        }
    }
    let lo = params.iter().min()?.clone();
    let hi = params.iter().max()?.clone();
    Some(Interval { lo, hi })
}
