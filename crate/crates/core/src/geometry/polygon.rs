use num_traits::{Signed, Zero};

use super::{orient, GeometryError, Point, Rational};

/// A compact convex polygon, possibly degenerate (a segment or a single point).
///
/// Canonical form: vertices counter-clockwise starting from the
/// lexicographically smallest one, no repeated vertices and no three
/// consecutive vertices collinear. Two polygons are equal as point sets iff
/// their vertex lists are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

/// Closed half-plane `nx*x + ny*y <= c`.
#[derive(Debug, Clone)]
pub(crate) struct HalfPlane {
    nx: Rational,
    ny: Rational,
    c: Rational,
}

impl HalfPlane {
    fn slack(&self, p: &Point) -> Rational {
        &self.c - (&self.nx * &p.x + &self.ny * &p.y)
    }
}

impl ConvexPolygon {
    /// Builds a polygon from vertices listed in cyclic order (either
    /// orientation). Points lying on an edge are tolerated and dropped; any
    /// point strictly inside the hull, or an order that is not a cyclic walk
    /// around the hull, is rejected.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::NoVertices);
        }
        let hull = ConvexPolygon::hull(vertices.iter().cloned())?;
        let hv = &hull.vertices;
        let mut walk: Vec<&Point> = Vec::new();
        for v in &vertices {
            if hv.contains(v) {
                if walk.last() != Some(&v) {
                    walk.push(v);
                }
            } else if !hull.on_boundary(v) {
                return Err(GeometryError::NotConvex);
            }
        }
        while walk.len() > 1 && walk.first() == walk.last() {
            walk.pop();
        }
        if walk.len() != hv.len() {
            return Err(GeometryError::NotConvex);
        }
        let start = walk
            .iter()
            .position(|p| **p == hv[0])
            .expect("hull vertex present");
        let n = hv.len();
        let forward = (0..n).all(|i| *walk[(start + i) % n] == hv[i]);
        let backward = (0..n).all(|i| *walk[(start + n - i) % n] == hv[i]);
        if forward || backward {
            Ok(hull)
        } else {
            Err(GeometryError::NotConvex)
        }
    }

    /// Convex hull of a nonempty point set (monotone chain, collinear points
    /// dropped).
    pub fn hull(points: impl IntoIterator<Item = Point>) -> Result<Self, GeometryError> {
        let mut pts: Vec<Point> = points.into_iter().collect();
        pts.sort();
        pts.dedup();
        if pts.is_empty() {
            return Err(GeometryError::NoVertices);
        }
        if pts.len() <= 2 {
            return Ok(ConvexPolygon { vertices: pts });
        }
        let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
        for p in &pts {
            while lower.len() >= 2
                && !orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
            {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && !orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
            {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Ok(ConvexPolygon { vertices: lower })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn lexmax(&self) -> Point {
        self.vertices.iter().max().expect("nonempty").clone()
    }

    /// Half-planes whose intersection is exactly this polygon, including the
    /// degenerate segment and point cases.
    pub(crate) fn constraints(&self) -> Vec<HalfPlane> {
        let v = &self.vertices;
        match v.len() {
            1 => {
                let (x, y) = (&v[0].x, &v[0].y);
                let one = Rational::from_integer(1.into());
                let zero = Rational::zero();
                vec![
                    HalfPlane {
                        nx: one.clone(),
                        ny: zero.clone(),
                        c: x.clone(),
                    },
                    HalfPlane {
                        nx: -one.clone(),
                        ny: zero.clone(),
                        c: -x.clone(),
                    },
                    HalfPlane {
                        nx: zero.clone(),
                        ny: one.clone(),
                        c: y.clone(),
                    },
                    HalfPlane {
                        nx: zero,
                        ny: -one,
                        c: -y.clone(),
                    },
                ]
            }
            _ => {
                let n = v.len();
                let mut out: Vec<HalfPlane> = (0..n)
                    .map(|i| edge_half_plane(&v[i], &v[(i + 1) % n]))
                    .collect();
                if n == 2 {
                    let (dx, dy) = v[1].sub(&v[0]);
                    out.push(HalfPlane {
                        nx: -dx.clone(),
                        ny: -dy.clone(),
                        c: -(&dx * &v[0].x + &dy * &v[0].y),
                    });
                    out.push(HalfPlane {
                        c: &dx * &v[1].x + &dy * &v[1].y,
                        nx: dx,
                        ny: dy,
                    });
                }
                out
            }
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.constraints().iter().all(|h| !h.slack(p).is_negative())
    }

    fn on_boundary(&self, p: &Point) -> bool {
        let v = &self.vertices;
        let n = v.len();
        if n == 1 {
            return v[0] == *p;
        }
        (0..n).any(|i| on_segment(&v[i], &v[(i + 1) % n], p))
    }

    /// Exact intersection by clipping against each half-plane of `other`.
    pub fn intersect(&self, other: &ConvexPolygon) -> Option<ConvexPolygon> {
        let mut subject = self.vertices.clone();
        for h in other.constraints() {
            subject = clip(&subject, &h);
            if subject.is_empty() {
                return None;
            }
        }
        Some(ConvexPolygon::hull(subject).expect("nonempty"))
    }

    /// Clip by a single closed half-plane given as `nx*x + ny*y <= c`.
    pub(crate) fn clip_half_plane(
        &self,
        nx: Rational,
        ny: Rational,
        c: Rational,
    ) -> Option<ConvexPolygon> {
        let out = clip(&self.vertices, &HalfPlane { nx, ny, c });
        (!out.is_empty()).then(|| ConvexPolygon::hull(out).expect("nonempty"))
    }
}

/// Left side of the directed edge `u -> v`, for counter-clockwise polygons.
fn edge_half_plane(u: &Point, v: &Point) -> HalfPlane {
    let (ex, ey) = v.sub(u);
    let c = &ey * &u.x - &ex * &u.y;
    HalfPlane { nx: ey, ny: -ex, c }
}

fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orient(a, b, p).is_zero()
        && (&a.x).min(&b.x) <= &p.x
        && &p.x <= (&a.x).max(&b.x)
        && (&a.y).min(&b.y) <= &p.y
        && &p.y <= (&a.y).max(&b.y)
}

// Sutherland-Hodgman step. Works on degenerate subjects too: a one-vertex
// subject yields the edge (p, p), a two-vertex subject is walked both ways.
fn clip(subject: &[Point], h: &HalfPlane) -> Vec<Point> {
    let n = subject.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = &subject[i];
        let next = &subject[(i + 1) % n];
        let sc = h.slack(cur);
        let sn = h.slack(next);
        let cur_in = !sc.is_negative();
        let next_in = !sn.is_negative();
        if cur_in != next_in {
            let t = &sc / (&sc - &sn);
            let (dx, dy) = next.sub(cur);
            out.push(Point::new(&cur.x + &t * dx, &cur.y + &t * dy));
        }
        if next_in {
            out.push(next.clone());
        }
    }
    out
}

fn closest_on_segment(a: &Point, b: &Point, p: &Point) -> Point {
    let (dx, dy) = b.sub(a);
    let len2 = &dx * &dx + &dy * &dy;
    if len2.is_zero() {
        return a.clone();
    }
    let (px, py) = p.sub(a);
    let t = (px * &dx + py * &dy) / len2;
    let zero = Rational::zero();
    let one = Rational::from_integer(1.into());
    let t = if t < zero {
        zero
    } else if t > one {
        one
    } else {
        t
    };
    Point::new(&a.x + &t * dx, &a.y + &t * dy)
}

fn dist2(p: &Point, q: &Point) -> Rational {
    let (dx, dy) = p.sub(q);
    &dx * &dx + &dy * &dy
}

fn edges(poly: &ConvexPolygon) -> Vec<(&Point, &Point)> {
    let v = &poly.vertices;
    let n = v.len();
    if n == 1 {
        return vec![(&v[0], &v[0])];
    }
    (0..n).map(|i| (&v[i], &v[(i + 1) % n])).collect()
}

/// A closest pair `(p, q)` with `p` in `a` and `q` in `b`; the first pair
/// found wins ties, so the result is deterministic.
pub(crate) fn closest_pair(a: &ConvexPolygon, b: &ConvexPolygon) -> (Point, Point) {
    let mut best: Option<(Rational, Point, Point)> = None;
    let mut consider = |p: Point, q: Point| {
        let d = dist2(&p, &q);
        if best.as_ref().is_none_or(|(bd, _, _)| d < *bd) {
            best = Some((d, p, q));
        }
    };
    for v in &a.vertices {
        for (s, t) in edges(b) {
            consider(v.clone(), closest_on_segment(s, t, v));
        }
    }
    for w in &b.vertices {
        for (s, t) in edges(a) {
            consider(closest_on_segment(s, t, w), w.clone());
        }
    }
    let (_, p, q) = best.expect("nonempty polygons");
    (p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, rat};

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::ints(x, y)).collect()
    }

    #[test]
    fn canonical_form_starts_at_lexmin_ccw() {
        let p = ConvexPolygon::new(pts(&[(1, 1), (0, 1), (0, 0), (1, 0)])).unwrap();
        assert_eq!(
            p.vertices(),
            pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]).as_slice()
        );
        let q = ConvexPolygon::new(pts(&[(0, 0), (0, 1), (1, 1), (1, 0)])).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_nonconvex_and_bowtie() {
        let dart = pts(&[(0, 0), (4, 0), (1, 1), (0, 4)]);
        assert_eq!(
            ConvexPolygon::new(dart).unwrap_err(),
            GeometryError::NotConvex
        );
        let bowtie = pts(&[(0, 0), (1, 1), (1, 0), (0, 1)]);
        assert_eq!(
            ConvexPolygon::new(bowtie).unwrap_err(),
            GeometryError::NotConvex
        );
        assert_eq!(
            ConvexPolygon::new(vec![]).unwrap_err(),
            GeometryError::NoVertices
        );
    }

    #[test]
    fn degenerate_polygons() {
        let seg = ConvexPolygon::new(pts(&[(2, 2), (0, 0), (1, 1)])).unwrap();
        assert_eq!(seg.vertices(), pts(&[(0, 0), (2, 2)]).as_slice());
        assert!(seg.contains(&Point::new(rat(1, 2), rat(1, 2))));
        assert!(!seg.contains(&Point::ints(3, 3)));
        assert!(!seg.contains(&Point::ints(1, 0)));
        let dot = ConvexPolygon::new(pts(&[(1, 1), (1, 1)])).unwrap();
        assert_eq!(dot.vertices().len(), 1);
        assert!(dot.contains(&Point::ints(1, 1)));
        assert!(!dot.contains(&Point::new(int(1), rat(1, 2))));
    }

    #[test]
    fn segment_clipped_by_square() {
        let seg = ConvexPolygon::new(pts(&[(-1, 1), (3, 1)])).unwrap();
        let sq = ConvexPolygon::new(pts(&[(0, 0), (2, 0), (2, 2), (0, 2)])).unwrap();
        let got = seg.intersect(&sq).unwrap();
        assert_eq!(got.vertices(), pts(&[(0, 1), (2, 1)]).as_slice());
        assert_eq!(sq.intersect(&seg).unwrap(), got);
        let dot = ConvexPolygon::new(pts(&[(1, 1)])).unwrap();
        assert_eq!(sq.intersect(&dot).unwrap(), dot);
        let far = ConvexPolygon::new(pts(&[(5, 5)])).unwrap();
        assert!(sq.intersect(&far).is_none());
    }

    #[test]
    fn touching_squares_meet_in_an_edge() {
        let a = ConvexPolygon::new(pts(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap();
        let b = ConvexPolygon::new(pts(&[(1, 0), (2, 0), (2, 1), (1, 1)])).unwrap();
        assert_eq!(
            a.intersect(&b).unwrap().vertices(),
            pts(&[(1, 0), (1, 1)]).as_slice()
        );
    }

    #[test]
    fn closest_pair_vertex_to_edge() {
        let a = ConvexPolygon::new(pts(&[(0, 0), (4, 0), (4, 1), (0, 1)])).unwrap();
        let b = ConvexPolygon::new(pts(&[(2, 3)])).unwrap();
        let (p, q) = closest_pair(&a, &b);
        assert_eq!(p, Point::ints(2, 1));
        assert_eq!(q, Point::ints(2, 3));
    }
}
