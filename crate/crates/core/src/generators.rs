//! Extremal and seeded random families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{Family, FamilyError};
use crate::geometry::{rat, ConvexBody, ConvexPolygon, Interval, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("invalid generator parameters: {0}")]
    Invalid(String),
    #[error("no accepted family within {0} attempts")]
    RetriesExhausted(usize),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

fn invalid(msg: impl Into<String>) -> GeneratorError {
    GeneratorError::Invalid(msg.into())
}

/// Random intervals `[lo, lo + len]` with `lo` uniform on the grid
/// `{0, 1/den, ..., span}` and `len` uniform on `{min_len, ..., max_len}`
/// (also in steps of `1/den`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntervalParams {
    pub n: usize,
    pub seed: u64,
    pub span: i64,
    pub min_len: i64,
    pub max_len: i64,
    pub denominator: i64,
}

impl Default for IntervalParams {
    fn default() -> Self {
        IntervalParams {
            n: 6,
            seed: 0,
            span: 10,
            min_len: 0,
            max_len: 4,
            denominator: 1,
        }
    }
}

/// Random convex polygons: the hull of `min_vertices..=max_vertices` grid
/// points drawn from an `extent x extent` box whose lower-left corner is
/// uniform on `[0, span]^2`. Coordinates are multiples of `1/den`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PolygonParams {
    pub n: usize,
    pub seed: u64,
    pub span: i64,
    pub extent: i64,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub denominator: i64,
}

impl Default for PolygonParams {
    fn default() -> Self {
        PolygonParams {
            n: 6,
            seed: 0,
            span: 8,
            extent: 5,
            min_vertices: 3,
            max_vertices: 8,
            denominator: 1,
        }
    }
}

/// Everything needed to reproduce a generated family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    ExtremalDim1 {
        p: usize,
        k: usize,
    },
    DisjointPlusContainer {
        a: usize,
        b: usize,
        dimension: usize,
    },
    RandomIntervals(IntervalParams),
    RandomPolygons(PolygonParams),
}

/// `k+2` distinct singletons at `1, ..., k+2` followed by `p-k-2` copies of
/// `[0, k+3]`, which contains them all. `p = k+2` gives singletons only.
pub fn extremal_dim1(p: usize, k: usize) -> Result<Family, GeneratorError> {
    if p < k + 2 {
        return Err(invalid(format!("need p >= k+2, got p={p}, k={k}")));
    }
    let mut bodies: Vec<ConvexBody> = (1..=k + 2)
        .map(|i| ConvexBody::Interval(Interval::point(rat(i as i64, 1))))
        .collect();
    let container = ConvexBody::interval(rat(0, 1), rat(k as i64 + 3, 1)).expect("ordered");
    bodies.extend(std::iter::repeat_n(container, p - k - 2));
    Ok(Family::new(bodies)?)
}

/// `a` pairwise-disjoint bodies followed by `b` copies of one body containing
/// all of them. Unit intervals `[2i+1, 2i+2]` in `[0, 2a+1]` in dimension 1;
/// unit squares in a row inside a `(2a+1) x 3` rectangle in dimension 2.
pub fn disjoint_plus_container(
    a: usize,
    b: usize,
    dimension: usize,
) -> Result<Family, GeneratorError> {
    if a + b == 0 {
        return Err(invalid("need a + b >= 1"));
    }
    let top = 2 * a as i64 + 1;
    let (small, big): (Vec<ConvexBody>, ConvexBody) = match dimension {
        1 => (
            (0..a as i64)
                .map(|i| ConvexBody::interval(rat(2 * i + 1, 1), rat(2 * i + 2, 1)).unwrap())
                .collect(),
            ConvexBody::interval(rat(0, 1), rat(top, 1)).unwrap(),
        ),
        2 => (
            (0..a as i64)
                .map(|i| {
                    ConvexBody::rect(rat(2 * i + 1, 1), rat(1, 1), rat(2 * i + 2, 1), rat(2, 1))
                        .unwrap()
                })
                .collect(),
            ConvexBody::rect(rat(0, 1), rat(0, 1), rat(top, 1), rat(3, 1)).unwrap(),
        ),
        d => return Err(invalid(format!("dimension must be 1 or 2, got {d}"))),
    };
    let mut bodies = small;
    bodies.extend(std::iter::repeat_n(big, b));
    Ok(Family::new(bodies)?)
}

fn check_intervals(p: &IntervalParams) -> Result<(), GeneratorError> {
    if p.n == 0 || p.denominator <= 0 || p.span < 0 || p.min_len < 0 || p.max_len < p.min_len {
        return Err(invalid(format!("bad interval parameters {p:?}")));
    }
    Ok(())
}

fn check_polygons(p: &PolygonParams) -> Result<(), GeneratorError> {
    if p.n == 0
        || p.denominator <= 0
        || p.span < 0
        || p.extent < 0
        || p.min_vertices == 0
        || p.max_vertices < p.min_vertices
    {
        return Err(invalid(format!("bad polygon parameters {p:?}")));
    }
    Ok(())
}

fn intervals_from(rng: &mut ChaCha8Rng, p: &IntervalParams) -> Family {
    let den = p.denominator;
    let bodies = (0..p.n)
        .map(|_| {
            let lo = rng.gen_range(0..=p.span * den);
            let len = rng.gen_range(p.min_len * den..=p.max_len * den);
            ConvexBody::interval(rat(lo, den), rat(lo + len, den)).expect("len >= 0")
        })
        .collect();
    Family::new(bodies).expect("n >= 1")
}

fn polygons_from(rng: &mut ChaCha8Rng, p: &PolygonParams) -> Family {
    let den = p.denominator;
    let bodies = (0..p.n)
        .map(|_| {
            let cx = rng.gen_range(0..=p.span * den);
            let cy = rng.gen_range(0..=p.span * den);
            let m = rng.gen_range(p.min_vertices..=p.max_vertices);
            let pts: Vec<Point> = (0..m)
                .map(|_| {
                    let x = cx + rng.gen_range(0..=p.extent * den);
                    let y = cy + rng.gen_range(0..=p.extent * den);
                    Point::new(rat(x, den), rat(y, den))
                })
                .collect();
            ConvexBody::Polygon(ConvexPolygon::hull(pts).expect("m >= 1"))
        })
        .collect();
    Family::new(bodies).expect("n >= 1")
}

/// Builds the family a spec describes. Random kinds are fully determined by
/// their seed.
pub fn generate(spec: &GeneratorSpec) -> Result<Family, GeneratorError> {
    match spec {
        GeneratorSpec::ExtremalDim1 { p, k } => extremal_dim1(*p, *k),
        GeneratorSpec::DisjointPlusContainer { a, b, dimension } => {
            disjoint_plus_container(*a, *b, *dimension)
        }
        GeneratorSpec::RandomIntervals(_) | GeneratorSpec::RandomPolygons(_) => random_family(spec),
    }
}

/// A seeded random family; errors for the non-random kinds.
pub fn random_family(spec: &GeneratorSpec) -> Result<Family, GeneratorError> {
    random_family_filtered(spec, 1, |_| true)
}

/// Draws families from the spec's seed until `accept` holds, giving up after
/// `max_attempts` draws. The whole sequence is determined by the seed.
pub fn random_family_filtered(
    spec: &GeneratorSpec,
    max_attempts: usize,
    accept: impl Fn(&Family) -> bool,
) -> Result<Family, GeneratorError> {
    let seed = match spec {
        GeneratorSpec::RandomIntervals(p) => {
            check_intervals(p)?;
            p.seed
        }
        GeneratorSpec::RandomPolygons(p) => {
            check_polygons(p)?;
            p.seed
        }
        _ => return Err(invalid("not a random generator kind")),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_attempts {
        let f = match spec {
            GeneratorSpec::RandomIntervals(p) => intervals_from(&mut rng, p),
            GeneratorSpec::RandomPolygons(p) => polygons_from(&mut rng, p),
            _ => unreachable!("checked above"),
        };
        if accept(&f) {
            return Ok(f);
        }
    }
    Err(GeneratorError::RetriesExhausted(max_attempts))
}
