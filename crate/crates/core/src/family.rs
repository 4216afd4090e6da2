//! Families of convex bodies and exhaustive checks of the `(p,q)`,
//! `(p,q)_r`, through-a-line and degeneracy properties.
//!
//! Everything is brute force over subsets, so families are limited to 64
//! members (subsets are `u64` masks) and every enumeration is charged against
//! a [`Budget`] before it starts.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::geometry::{
    body_contains_point, intersect_pair, line_meets_body, ConvexBody, Dimension, GeometryError,
    Line, Point,
};
use crate::piercing::candidate_points;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("a family needs at least one body")]
    Empty,
    #[error("body {index} has dimension {found}, family has dimension {expected}")]
    MixedDimensions {
        index: usize,
        expected: Dimension,
        found: Dimension,
    },
    #[error("arity violation: need 1 <= q <= p <= |F|, got p={p}, q={q}, |F|={n}")]
    Arity { p: usize, q: usize, n: usize },
    #[error("r must be at least 1")]
    ZeroR,
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("families larger than 64 bodies are not supported")]
    TooLarge,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Cap on the `C(n,p) * C(n,q)` work of a single exhaustive check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_work: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_work: 100_000_000,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_work: u128::MAX,
        }
    }

    fn charge(&self, needed: u128) -> Result<(), FamilyError> {
        if needed > self.max_work {
            return Err(FamilyError::BudgetExceeded {
                needed,
                budget: self.max_work,
            });
        }
        Ok(())
    }
}

/// An ordered list of bodies of one dimension. Members are identified by
/// index, so repeated bodies count as distinct members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    dimension: Dimension,
    bodies: Vec<ConvexBody>,
}

impl Family {
    pub fn new(bodies: Vec<ConvexBody>) -> Result<Self, FamilyError> {
        let first = bodies.first().ok_or(FamilyError::Empty)?;
        let dimension = first.dimension();
        for (index, b) in bodies.iter().enumerate() {
            if b.dimension() != dimension {
                return Err(FamilyError::MixedDimensions {
                    index,
                    expected: dimension,
                    found: b.dimension(),
                });
            }
        }
        Ok(Family { dimension, bodies })
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn bodies(&self) -> &[ConvexBody] {
        &self.bodies
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    /// Always false; kept for the usual `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn get(&self, index: usize) -> &ConvexBody {
        &self.bodies[index]
    }

    /// Members at `indices`, in that order. `None` if `indices` is empty.
    pub fn subfamily(&self, indices: &[usize]) -> Option<Family> {
        if indices.is_empty() {
            return None;
        }
        Some(Family {
            dimension: self.dimension,
            bodies: indices.iter().map(|&i| self.bodies[i].clone()).collect(),
        })
    }

    /// Indices of the members that do not contain `p`.
    pub fn missing(&self, p: &Point) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !body_contains_point(&self.bodies[i], p))
            .collect()
    }
}

/// Result of [`max_r`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PQRReport {
    pub p: usize,
    pub q: usize,
    /// Minimum over `p`-subsets of the number of intersecting `q`-subsets.
    pub max_r: BigUint,
    /// A `p`-subset attaining `max_r`, as sorted member indices.
    pub witness_subset: Vec<usize>,
}

pub(crate) fn binom_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

fn check_arity(f: &Family, p: usize, q: usize) -> Result<(), FamilyError> {
    if q == 0 || q > p || p > f.len() {
        return Err(FamilyError::Arity { p, q, n: f.len() });
    }
    if f.len() > 64 {
        return Err(FamilyError::TooLarge);
    }
    Ok(())
}

/// Visits every subset of size `<= max_size` whose common intersection is
/// nonempty and passes `keep`, as `(mask, size, intersection)`. `keep` must be
/// inherited by subsets (if `keep(∩S)` fails it fails for all supersets),
/// since failing subsets are pruned together with their extensions.
pub(crate) fn for_each_intersecting_subset(
    f: &Family,
    max_size: usize,
    keep: &dyn Fn(&ConvexBody) -> bool,
    visit: &mut dyn FnMut(u64, usize, &ConvexBody),
) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        bodies: &[ConvexBody],
        start: usize,
        mask: u64,
        size: usize,
        current: Option<&ConvexBody>,
        max_size: usize,
        keep: &dyn Fn(&ConvexBody) -> bool,
        visit: &mut dyn FnMut(u64, usize, &ConvexBody),
    ) {
        for i in start..bodies.len() {
            let next = match current {
                None => Some(bodies[i].clone()),
                Some(c) => intersect_pair(c, &bodies[i]).expect("family has one dimension"),
            };
            let Some(body) = next else { continue };
            if !keep(&body) {
                continue;
            }
            let m = mask | (1u64 << i);
            visit(m, size + 1, &body);
            if size + 1 < max_size {
                go(
                    bodies,
                    i + 1,
                    m,
                    size + 1,
                    Some(&body),
                    max_size,
                    keep,
                    visit,
                );
            }
        }
    }
    go(&f.bodies, 0, 0, 0, None, max_size, keep, visit);
}

/// Masks of the `q`-subsets whose intersection is nonempty and passes `keep`.
fn qtuple_masks(f: &Family, q: usize, keep: &dyn Fn(&ConvexBody) -> bool) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_intersecting_subset(f, q, keep, &mut |mask, size, _| {
        if size == q {
            out.push(mask);
        }
    });
    out
}

/// Number of `q`-subsets of `f` with a common point (the face count
/// `f_{q-1}` of the nerve).
pub fn count_intersecting_qtuples(f: &Family, q: usize) -> Result<BigUint, FamilyError> {
    check_arity(f, q, q)?;
    Ok(BigUint::from(qtuple_masks(f, q, &|_| true).len()))
}

/// The face counts `f_0, f_1, ..., f_{k-1}`: entry `j` counts intersecting
/// `(j+1)`-subsets, for subset sizes up to `max_size`.
pub fn face_counts(f: &Family, max_size: usize) -> Result<Vec<u64>, FamilyError> {
    if f.len() > 64 {
        return Err(FamilyError::TooLarge);
    }
    let mut counts = vec![0u64; max_size];
    for_each_intersecting_subset(f, max_size, &|_| true, &mut |_, size, _| {
        counts[size - 1] += 1
    });
    Ok(counts)
}

fn min_over_psubsets(
    f: &Family,
    p: usize,
    q: usize,
    masks: &[u64],
    budget: Budget,
) -> Result<PQRReport, FamilyError> {
    budget.charge(binom_u128(f.len(), p).saturating_mul(binom_u128(f.len(), q)))?;
    let mut best: Option<(usize, Vec<usize>)> = None;
    for subset in (0..f.len()).combinations(p) {
        let pmask = subset.iter().fold(0u64, |m, &i| m | (1u64 << i));
        let count = masks.iter().filter(|&&m| m & !pmask == 0).count();
        if best.as_ref().is_none_or(|(c, _)| count < *c) {
            let done = count == 0;
            best = Some((count, subset));
            if done {
                break;
            }
        }
    }
    let (count, witness_subset) = best.expect("at least one p-subset");
    Ok(PQRReport {
        p,
        q,
        max_r: BigUint::from(count),
        witness_subset,
    })
}

/// The largest `r` for which `f` has the `(p,q)_r` property, with a
/// minimizing `p`-subset. Zero means the `(p,q)` property itself fails.
pub fn max_r(f: &Family, p: usize, q: usize) -> Result<PQRReport, FamilyError> {
    max_r_within(f, p, q, Budget::default())
}

pub fn max_r_within(
    f: &Family,
    p: usize,
    q: usize,
    budget: Budget,
) -> Result<PQRReport, FamilyError> {
    check_arity(f, p, q)?;
    let masks = qtuple_masks(f, q, &|_| true);
    min_over_psubsets(f, p, q, &masks, budget)
}

/// Whether every `p` members contain at least `r` intersecting `q`-tuples.
pub fn satisfies_pqr(
    f: &Family,
    p: usize,
    q: usize,
    r: impl Into<BigUint>,
) -> Result<bool, FamilyError> {
    let r = r.into();
    if r.is_zero() {
        return Err(FamilyError::ZeroR);
    }
    Ok(max_r(f, p, q)?.max_r >= r)
}

/// `max_r` where only `q`-tuples whose common intersection meets `line` count.
pub fn max_r_through_line(
    f: &Family,
    line: &Line,
    p: usize,
    q: usize,
) -> Result<PQRReport, FamilyError> {
    if f.dimension() != Dimension::Two {
        return Err(GeometryError::Unsupported(Dimension::Two).into());
    }
    check_arity(f, p, q)?;
    let masks = qtuple_masks(f, q, &|body| line_meets_body(line, body));
    min_over_psubsets(f, p, q, &masks, Budget::default())
}

/// The `(p,q)_r` property through `line`: every `p` members contain at least
/// `r` `q`-tuples that intersect on the line.
pub fn satisfies_pqr_through_line(
    f: &Family,
    line: &Line,
    p: usize,
    q: usize,
    r: impl Into<BigUint>,
) -> Result<bool, FamilyError> {
    let r = r.into();
    if r.is_zero() {
        return Err(FamilyError::ZeroR);
    }
    Ok(max_r_through_line(f, line, p, q)?.max_r >= r)
}

/// A point lying in the largest number of members, with that number.
///
/// Searching [`candidate_points`] is enough: the members containing a point
/// have a common intersection whose lexmax is a candidate.
pub fn deepest_point(f: &Family) -> (Point, usize) {
    candidate_points(f)
        .into_iter()
        .map(|c| {
            let depth = f
                .bodies()
                .iter()
                .filter(|b| body_contains_point(b, &c))
                .count();
            (c, depth)
        })
        .max_by(|(pa, da), (pb, db)| da.cmp(db).then_with(|| pb.cmp(pa)))
        .expect("candidates of a nonempty family")
}

/// Some point missing at most `t` members, if one exists.
pub fn degeneracy_witness(f: &Family, t: usize) -> Option<Point> {
    let (point, depth) = deepest_point(f);
    (depth + t >= f.len()).then_some(point)
}

/// `f` is `t`-degenerate when a single point pierces all but at most `t`
/// members.
pub fn is_t_degenerate(f: &Family, t: usize) -> bool {
    degeneracy_witness(f, t).is_some()
}

/// Smallest `t` for which `f` is `t`-degenerate.
pub fn degeneracy_level(f: &Family) -> usize {
    f.len() - deepest_point(f).1
}
