//! Piercing sets: exact minimum piercing and the constructive procedures
//! (the lexmin-of-lexmax recursion for the `(p,q)` property, the line lemma
//! in the plane, and piercing through a line).
//!
//! Every procedure returns a [`PiercingSet`] whose certificate has been
//! re-checked against the family by exact membership tests.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::bounds;
use crate::family::{self, Family, FamilyError};
use crate::geometry::{
    body_contains_point, clip_to_line, intersect_bodies, intersect_pair, lexmax_body,
    line_meets_body, separating_line, ConvexBody, ConvexPolygon, Dimension, GeometryError,
    Interval, Line, Point, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PiercingError {
    #[error("premise violated: {reason} (members {subset:?})")]
    Premise { reason: String, subset: Vec<usize> },
    #[error("search exceeded {0} nodes")]
    BudgetExceeded(u64),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn premise(reason: impl Into<String>, subset: Vec<usize>) -> PiercingError {
    PiercingError::Premise {
        reason: reason.into(),
        subset,
    }
}

/// A set of points, sorted lexicographically, and whether it was verified to
/// pierce the family it was computed for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiercingSet {
    pub points: Vec<Point>,
    pub certified: bool,
}

impl PiercingSet {
    /// Canonicalizes `points` and checks them against `f`.
    pub fn certify(mut points: Vec<Point>, f: &Family) -> Self {
        points.sort();
        points.dedup();
        let certified = pierces(f, &points);
        PiercingSet { points, certified }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Every member of `f` contains one of `points`.
pub fn pierces(f: &Family, points: &[Point]) -> bool {
    f.bodies()
        .iter()
        .all(|b| points.iter().any(|p| body_contains_point(b, p)))
}

/// Lexmax of every member and of every nonempty pairwise intersection, sorted
/// and deduplicated.
///
/// This set always contains an optimal piercing set: the members pierced by a
/// point `x` have a common intersection whose lexmax equals the lexmax of a
/// single member or of a pair of them, and that point pierces all of them.
pub fn candidate_points(f: &Family) -> Vec<Point> {
    let bodies = f.bodies();
    let mut out: Vec<Point> = bodies.iter().map(lexmax_body).collect();
    for (i, j) in (0..bodies.len()).tuple_combinations() {
        if let Some(both) =
            intersect_pair(&bodies[i], &bodies[j]).expect("family has one dimension")
        {
            out.push(lexmax_body(&both));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Minimum number of stabbing points for intervals: repeatedly stab at the
/// smallest right endpoint among the intervals not yet stabbed.
pub fn stab_intervals(intervals: &[Interval]) -> Vec<Rational> {
    let mut order: Vec<&Interval> = intervals.iter().collect();
    order.sort_by(|a, b| a.hi().cmp(b.hi()));
    let mut out: Vec<Rational> = Vec::new();
    for iv in order {
        if out.last().is_none_or(|last| !iv.contains(last)) {
            out.push(iv.hi().clone());
        }
    }
    out
}

/// The sweep above applied to a 1D family.
pub fn greedy_interval_piercing(f: &Family) -> Result<PiercingSet, PiercingError> {
    let intervals: Vec<Interval> = f
        .bodies()
        .iter()
        .map(|b| match b {
            ConvexBody::Interval(iv) => Ok(iv.clone()),
            ConvexBody::Polygon(_) => Err(GeometryError::Unsupported(Dimension::One)),
        })
        .collect::<Result<_, _>>()?;
    let pts = stab_intervals(&intervals)
        .into_iter()
        .map(Point::on_axis)
        .collect();
    Ok(PiercingSet::certify(pts, f))
}

/// Node cap for the branch-and-bound search.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

/// An exact minimum piercing set. Intervals use the greedy sweep (exact in
/// dimension 1); polygons use [`branch_and_bound_piercing`].
pub fn min_piercing(f: &Family) -> Result<PiercingSet, PiercingError> {
    match f.dimension() {
        Dimension::One => greedy_interval_piercing(f),
        Dimension::Two => branch_and_bound_piercing(f, DEFAULT_NODE_BUDGET),
    }
}

struct CoverSearch {
    /// members covered by each (non-dominated) candidate
    cover: Vec<u64>,
    /// candidates covering each member
    by_member: Vec<Vec<usize>>,
    /// members sharing some candidate with each member
    meets: Vec<u64>,
    nodes: u64,
    node_budget: u64,
    best: Vec<usize>,
}

impl CoverSearch {
    /// Greedily packs uncovered members no two of which share a candidate;
    /// each needs its own point.
    fn packing_bound(&self, uncovered: u64) -> usize {
        let mut blocked = 0u64;
        let mut count = 0;
        let mut rest = uncovered;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if blocked & (1u64 << i) == 0 {
                count += 1;
                blocked |= self.meets[i];
            }
        }
        count
    }

    fn search(&mut self, uncovered: u64, chosen: &mut Vec<usize>) -> Result<(), PiercingError> {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            return Err(PiercingError::BudgetExceeded(self.node_budget));
        }
        if uncovered == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return Ok(());
        }
        if chosen.len() + self.packing_bound(uncovered) >= self.best.len() {
            return Ok(());
        }
        // branch on the member with the fewest ways to be covered
        let mut rest = uncovered;
        let mut pick = usize::MAX;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if pick == usize::MAX || self.by_member[i].len() < self.by_member[pick].len() {
                pick = i;
            }
        }
        let mut options = self.by_member[pick].clone();
        options.sort_by_key(|&c| std::cmp::Reverse((self.cover[c] & uncovered).count_ones()));
        for c in options {
            chosen.push(c);
            self.search(uncovered & !self.cover[c], chosen)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Exact minimum piercing by set-cover search over [`candidate_points`],
/// pruned with a disjoint-packing lower bound. Works in both dimensions.
pub fn branch_and_bound_piercing(
    f: &Family,
    node_budget: u64,
) -> Result<PiercingSet, PiercingError> {
    piercing_over(f, &candidate_points(f), node_budget)
}

/// Exact minimum piercing restricted to the given points. Errors when the
/// points cannot pierce `f` at all.
pub fn piercing_over(
    f: &Family,
    points: &[Point],
    node_budget: u64,
) -> Result<PiercingSet, PiercingError> {
    let n = f.len();
    if n > 64 {
        return Err(FamilyError::TooLarge.into());
    }
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let masks: Vec<u64> = points
        .iter()
        .map(|p| {
            (0..n)
                .filter(|&i| body_contains_point(f.get(i), p))
                .fold(0u64, |m, i| m | (1u64 << i))
        })
        .collect();
    // drop candidates whose cover is contained in another's (first one wins on ties)
    let mut kept: Vec<usize> = Vec::new();
    for (c, &m) in masks.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let dominated = masks
            .iter()
            .enumerate()
            .any(|(o, &om)| o != c && m & !om == 0 && (m != om || o < c));
        if !dominated {
            kept.push(c);
        }
    }
    let cover: Vec<u64> = kept.iter().map(|&c| masks[c]).collect();
    let mut by_member = vec![Vec::new(); n];
    let mut meets = vec![0u64; n];
    for (k, &m) in cover.iter().enumerate() {
        for (i, member) in by_member.iter_mut().enumerate() {
            if m & (1u64 << i) != 0 {
                member.push(k);
                meets[i] |= m;
            }
        }
    }
    if let Some(i) = by_member.iter().position(|v| v.is_empty()) {
        return Err(PiercingError::Internal(format!(
            "no candidate point lies in member {i}"
        )));
    }
    // greedy cover as the first incumbent
    let mut greedy = Vec::new();
    let mut left = full;
    while left != 0 {
        let c = (0..cover.len())
            .max_by_key(|&c| ((cover[c] & left).count_ones(), std::cmp::Reverse(c)))
            .unwrap();
        greedy.push(c);
        left &= !cover[c];
    }
    let mut s = CoverSearch {
        cover,
        by_member,
        meets,
        nodes: 0,
        node_budget,
        best: greedy,
    };
    s.search(full, &mut Vec::new())?;
    let pts = s.best.iter().map(|&k| points[kept[k]].clone()).collect();
    Ok(PiercingSet::certify(pts, f))
}

/// The lexmin over intersecting `d`-tuples of the lexmax of their
/// intersection, with the tuple attaining it. Ties go to the
/// lexicographically smallest index vector.
fn lexmin_of_lexmax(
    f: &Family,
    indices: &[usize],
    d: usize,
) -> Option<(Point, Vec<usize>, ConvexBody)> {
    let mut best: Option<(Point, Vec<usize>, ConvexBody)> = None;
    for tuple in indices.iter().copied().combinations(d) {
        let bodies: Vec<ConvexBody> = tuple.iter().map(|&i| f.get(i).clone()).collect();
        if let Some(common) = intersect_bodies(&bodies).expect("family has one dimension") {
            let x = lexmax_body(&common);
            if best.as_ref().is_none_or(|(bx, _, _)| x < *bx) {
                best = Some((x, tuple, common));
            }
        }
    }
    best
}

/// Checks the `(p,q)` property on the members at `indices`; on failure the
/// error names a violating `p`-subset in original indices.
fn require_pq(f: &Family, indices: &[usize], p: usize, q: usize) -> Result<(), PiercingError> {
    let sub = f.subfamily(indices).expect("nonempty");
    let rep = family::max_r(&sub, p, q)?;
    if rep.max_r.is_zero() {
        let subset = rep.witness_subset.iter().map(|&i| indices[i]).collect();
        return Err(premise(format!("({p},{q}) property fails"), subset));
    }
    Ok(())
}

/// Pierces a family with the `(p,q)` property, `d*q > (d-1)*p + d`, by at
/// most `p-q+1` points.
///
/// Takes `x0` as the lexmin over intersecting `d`-tuples of the lexmax of
/// their intersection, keeps it, and recurses with `(p-d, q-d+1)` on the
/// members missing `x0`. Those members are disjoint from the chosen tuple's
/// intersection, so they inherit the smaller property. When fewer than `p-d`
/// members miss `x0` they are pierced directly with at most `p-q` points.
pub fn hd_pierce(f: &Family, p: usize, q: usize) -> Result<PiercingSet, PiercingError> {
    let d = f.dimension().as_usize();
    if q == 0 || q > p || p > f.len() {
        return Err(FamilyError::Arity { p, q, n: f.len() }.into());
    }
    if d * q <= (d - 1) * p + d {
        return Err(premise(format!("need {d}*q > {}*p + {d}", d - 1), vec![]));
    }
    let all: Vec<usize> = (0..f.len()).collect();
    require_pq(f, &all, p, q)?;
    let points = hd_recurse(f, all, p, q, d)?;
    let set = PiercingSet::certify(points, f);
    if !set.certified {
        return Err(PiercingError::Internal(
            "recursion output does not pierce the family".into(),
        ));
    }
    if set.len() > p - q + 1 {
        return Err(PiercingError::Internal(format!(
            "{} points exceed p-q+1 = {}",
            set.len(),
            p - q + 1
        )));
    }
    Ok(set)
}

fn hd_recurse(
    f: &Family,
    members: Vec<usize>,
    p: usize,
    q: usize,
    d: usize,
) -> Result<Vec<Point>, PiercingError> {
    if p == q {
        // every p members meet, hence every d+1 do, hence all of them
        let bodies: Vec<ConvexBody> = members.iter().map(|&i| f.get(i).clone()).collect();
        return match intersect_bodies(&bodies)? {
            Some(common) => Ok(vec![lexmax_body(&common)]),
            None => {
                let bad = members
                    .iter()
                    .copied()
                    .combinations((d + 1).min(members.len()))
                    .find(|t| {
                        let bs: Vec<ConvexBody> = t.iter().map(|&i| f.get(i).clone()).collect();
                        intersect_bodies(&bs).expect("one dimension").is_none()
                    })
                    .unwrap_or(members);
                Err(premise(format!("({p},{p}) property fails"), bad))
            }
        };
    }
    let Some((x0, tuple, common)) = lexmin_of_lexmax(f, &members, d) else {
        return Err(premise(
            format!("no intersecting {d}-tuple, so ({p},{q}) fails"),
            members,
        ));
    };
    let missing: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&i| !body_contains_point(f.get(i), &x0))
        .collect();
    for &c in &missing {
        if intersect_pair(f.get(c), &common)?.is_some() {
            return Err(PiercingError::Internal(format!(
                "member {c} misses x0 = {x0} but meets the intersection of {tuple:?}"
            )));
        }
    }
    let mut out = vec![x0];
    if missing.is_empty() {
        return Ok(out);
    }
    if missing.len() >= p - d {
        let (np, nq) = (p - d, q - d + 1);
        require_pq(f, &missing, np, nq)?;
        out.extend(hd_recurse(f, missing, np, nq, d)?);
    } else {
        let rest = f.subfamily(&missing).expect("nonempty");
        let set = min_piercing(&rest)?;
        if set.len() > p - q {
            return Err(premise(
                format!(
                    "{} members missing x0 need {} > p-q = {} points",
                    missing.len(),
                    set.len(),
                    p - q
                ),
                missing,
            ));
        }
        out.extend(set.points);
    }
    Ok(out)
}

/// Output of [`ms_line`]: two members and a line such that every member
/// meeting both of them also meets the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineLemmaWitness {
    pub a_index: usize,
    pub b_index: usize,
    pub line: Line,
    /// The lexmin-of-lexmax point, present when no two members are disjoint.
    pub x0: Option<Point>,
}

impl fmt::Display for LineLemmaWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A={}, B={}, line {}",
            self.a_index, self.b_index, self.line
        )?;
        if let Some(x0) = &self.x0 {
            write!(f, ", x0 = {x0}")?;
        }
        Ok(())
    }
}

/// Whether every member meeting both `f[a]` and `f[b]` meets `line`.
pub fn line_lemma_holds(f: &Family, a: usize, b: usize, line: &Line) -> bool {
    f.bodies().iter().all(|c| {
        let touches_both = intersect_pair(f.get(a), c)
            .expect("one dimension")
            .is_some()
            && intersect_pair(f.get(b), c)
                .expect("one dimension")
                .is_some();
        !touches_both || line_meets_body(line, c)
    })
}

/// Closure of `body ∩ {x >=_lex x0}` for a body containing `x0`.
fn lex_upper_part(body: &ConvexBody, x0: &Point) -> ConvexPolygon {
    let ConvexBody::Polygon(poly) = body else {
        unreachable!("planar family")
    };
    let right = poly
        .clip_half_plane(-Rational::one(), Rational::zero(), -x0.x.clone())
        .expect("x0 lies in the body");
    if right.vertices().iter().any(|v| v.x > x0.x) {
        right
    } else {
        right
            .clip_half_plane(Rational::zero(), -Rational::one(), -x0.y.clone())
            .expect("x0 lies in the body")
    }
}

/// Weak separation: `a` in one closed side of `line`, `b` in the other.
fn weakly_separates(line: &Line, a: &ConvexPolygon, b: &ConvexPolygon) -> bool {
    use std::cmp::Ordering::*;
    let all = |poly: &ConvexPolygon, bad| poly.vertices().iter().all(|v| line.side(v) != bad);
    (all(a, Greater) && all(b, Less)) || (all(a, Less) && all(b, Greater))
}

/// Two members `A, B` and a line such that any member meeting both meets the
/// line (planar families).
///
/// If some pair is disjoint, the first such pair and a separating line are
/// returned. Otherwise `x0` is the lexmin over pairs of the lexmax of their
/// intersection; the parts of `A` and `B` lexicographically above `x0` meet
/// only at `x0`, and a line through `x0` separating them is returned.
pub fn ms_line(f: &Family) -> Result<LineLemmaWitness, PiercingError> {
    if f.dimension() != Dimension::Two {
        return Err(GeometryError::Unsupported(Dimension::Two).into());
    }
    if f.len() < 2 {
        return Err(FamilyError::Arity {
            p: 2,
            q: 2,
            n: f.len(),
        }
        .into());
    }
    let all: Vec<usize> = (0..f.len()).collect();
    for (a, b) in all.iter().copied().tuple_combinations() {
        if intersect_pair(f.get(a), f.get(b))?.is_none() {
            let line = separating_line(f.get(a), f.get(b))?;
            return checked(
                f,
                LineLemmaWitness {
                    a_index: a,
                    b_index: b,
                    line,
                    x0: None,
                },
            );
        }
    }
    let (x0, pair, _) = lexmin_of_lexmax(f, &all, 2).expect("all pairs intersect");
    let (a, b) = (pair[0], pair[1]);
    let a_up = lex_upper_part(f.get(a), &x0);
    let b_up = lex_upper_part(f.get(b), &x0);

    let mut directions: Vec<(Rational, Rational)> = a_up
        .vertices()
        .iter()
        .chain(b_up.vertices())
        .filter(|v| **v != x0)
        .map(|v| v.sub(&x0))
        .collect();
    directions.push((Rational::zero(), Rational::one()));
    directions.push((Rational::one(), Rational::zero()));
    for (dx, dy) in directions {
        let line = Line::through(&x0, dx, dy)?;
        if weakly_separates(&line, &a_up, &b_up) && line_lemma_holds(f, a, b, &line) {
            return Ok(LineLemmaWitness {
                a_index: a,
                b_index: b,
                line,
                x0: Some(x0),
            });
        }
    }
    // fallback: any line through x0 and a vertex that passes the predicate
    for body in f.bodies() {
        for v in body.planar_vertices() {
            if v == x0 {
                continue;
            }
            let (dx, dy) = v.sub(&x0);
            let line = Line::through(&x0, dx, dy)?;
            if line_lemma_holds(f, a, b, &line) {
                return Ok(LineLemmaWitness {
                    a_index: a,
                    b_index: b,
                    line,
                    x0: Some(x0),
                });
            }
        }
    }
    Err(PiercingError::Internal(format!(
        "no valid line through x0 = {x0} for members {a}, {b}"
    )))
}

fn checked(f: &Family, w: LineLemmaWitness) -> Result<LineLemmaWitness, PiercingError> {
    if line_lemma_holds(f, w.a_index, w.b_index, &w.line) {
        Ok(w)
    } else {
        Err(PiercingError::Internal(format!(
            "line lemma predicate fails for {w}"
        )))
    }
}

/// Pierces a planar family with the `(p,2)_{r0}` property through `line`,
/// `r0 = C(p-k-2, 2) + (k+2)(p-k-2) + 1`, by at most `k+1` points: each
/// member missing the line gets its lexmax, and the traces of the rest on the
/// line are stabbed optimally.
pub fn line_pierce(
    f: &Family,
    line: &Line,
    p: usize,
    k: usize,
) -> Result<PiercingSet, PiercingError> {
    if f.dimension() != Dimension::Two {
        return Err(GeometryError::Unsupported(Dimension::Two).into());
    }
    if p < 2 || p > f.len() || k + 2 > p {
        return Err(premise(
            format!(
                "need 2 <= p <= |F| and k <= p-2, got p={p}, k={k}, |F|={}",
                f.len()
            ),
            vec![],
        ));
    }
    let r0 = bounds::dim1_threshold(p as u64, 2, k as u64)
        .expect("validated")
        .threshold_r;
    let rep = family::max_r_through_line(f, line, p, 2)?;
    if rep.max_r < r0 {
        return Err(premise(
            format!("only {} pairs meet on the line, need {r0}", rep.max_r),
            rep.witness_subset,
        ));
    }
    let (off, on): (Vec<usize>, Vec<usize>) =
        (0..f.len()).partition(|&i| !line_meets_body(line, f.get(i)));
    if off.len() > k {
        return Err(premise(
            format!("{} members miss the line, more than k = {k}", off.len()),
            off,
        ));
    }
    let mut points: Vec<Point> = off.iter().map(|&i| lexmax_body(f.get(i))).collect();
    let traces: Vec<Interval> = on
        .iter()
        .map(|&i| clip_to_line(f.get(i), line).expect("member meets the line"))
        .collect();
    let stabs = stab_intervals(&traces);
    if stabs.len() > k - off.len() + 1 {
        return Err(PiercingError::Internal(format!(
            "traces on the line need {} points, more than k - h + 1 = {}",
            stabs.len(),
            k - off.len() + 1
        )));
    }
    points.extend(stabs.iter().map(|t| line.point_at(t)));
    let set = PiercingSet::certify(points, f);
    if !set.certified {
        return Err(PiercingError::Internal(
            "line piercing output does not pierce the family".into(),
        ));
    }
    Ok(set)
}
