//! Closed-form piercing thresholds over big integers.
//!
//! Every threshold is the exact binomial sum that certifies the bound, never an
//! asymptotic form. All sums use the convention `C(n, k) = 0` whenever
//! `k < 0`, `n < 0` or `k > n`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::geometry::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("need p >= q >= d+1 and d >= 1, got p={p}, q={q}, d={d}")]
    Hypothesis { p: u64, q: u64, d: u64 },
    #[error("k={k} outside 0..={max}")]
    KOutOfRange { k: u64, max: i64 },
    #[error("f={f} outside 1..={max}")]
    FOutOfRange { f: u64, max: i64 },
    #[error("epsilon must satisfy 0 < eps <= 1/d")]
    Epsilon,
    #[error("r must be at least 1")]
    ZeroR,
    #[error("exponent too large to evaluate exactly")]
    ExponentTooLarge,
}

/// Applicability flags attached to a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Caveat {
    /// Valid only for `p >= p0(eps)`, and `p0` is not known explicitly.
    UnknownP0,
    /// Valid only for non-`(p-q)`-degenerate families.
    NonDegenerateFamily,
}

impl Caveat {
    pub fn as_str(&self) -> &'static str {
        match self {
            Caveat::UnknownP0 => "requires p >= p0(eps), p0 unknown",
            Caveat::NonDegenerateFamily => "requires non-(p-q)-degenerate family",
        }
    }
}

impl fmt::Display for Caveat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Caveat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// A certified pair: every family with the `(p,q)_r` property for
/// `r >= threshold_r` can be pierced by `pierce_bound` points (subject to the
/// caveats).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult {
    pub threshold_r: BigUint,
    pub pierce_bound: u64,
    pub caveats: Vec<Caveat>,
}

/// Validated `(p, q, d)` plus the optional extra parameters some bounds take.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundQuery {
    pub p: u64,
    pub q: u64,
    pub d: u64,
    pub k: Option<u64>,
    pub f: Option<u64>,
    pub eps: Option<Rational>,
}

impl BoundQuery {
    pub fn new(p: u64, q: u64, d: u64) -> Result<Self, BoundsError> {
        check_pqd(p, q, d)?;
        Ok(BoundQuery {
            p,
            q,
            d,
            k: None,
            f: None,
            eps: None,
        })
    }
}

fn check_pqd(p: u64, q: u64, d: u64) -> Result<(), BoundsError> {
    if d == 0 || q < d + 1 || p < q {
        return Err(BoundsError::Hypothesis { p, q, d });
    }
    Ok(())
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binom(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn kalai_sum(p: i64, q: i64, s: i64, d: i64) -> BigUint {
    (0..=d).map(|i| binom(s, q - i) * binom(p - s, i)).sum()
}

/// Upper bound on the number of intersecting `q`-tuples among `p` convex sets
/// in dimension `d` when no `(d+s+1)`-tuple intersects:
/// `sum_{i=0}^{d} C(s, q-i) C(p-s, i)`.
pub fn kalai_bound(p: u64, q: u64, s: u64, d: u64) -> BigUint {
    kalai_sum(p as i64, q as i64, s as i64, d as i64)
}

fn to_big(x: &BigUint) -> BigInt {
    BigInt::from(x.clone())
}

fn to_unsigned(x: BigInt) -> BigUint {
    x.to_biguint().expect("threshold is positive")
}

/// `r > C(p,q) - C(p+1-d, q+1-d)` guarantees piercing by `p-q+1` points.
pub fn ms_threshold(p: u64, q: u64, d: u64) -> Result<BoundResult, BoundsError> {
    check_pqd(p, q, d)?;
    let (p, q, d) = (p as i64, q as i64, d as i64);
    let t = to_big(&binom(p, q)) - to_big(&binom(p + 1 - d, q + 1 - d)) + 1;
    Ok(BoundResult {
        threshold_r: to_unsigned(t),
        pierce_bound: (p - q + 1) as u64,
        caveats: vec![],
    })
}

/// Piercing by `f` points once `r > kalai_bound(p, q, p-f-d, d)`, for
/// `1 <= f <= floor(p/d) - 1`.
pub fn lemma_r0_threshold(p: u64, q: u64, d: u64, f: u64) -> Result<BoundResult, BoundsError> {
    check_pqd(p, q, d)?;
    let max = (p / d) as i64 - 1;
    if f == 0 || f as i64 > max {
        return Err(BoundsError::FOutOfRange { f, max });
    }
    let s = p - f - d;
    Ok(BoundResult {
        threshold_r: kalai_bound(p, q, s, d) + 1u32,
        pierce_bound: f,
        caveats: vec![],
    })
}

/// `(d-1)/d + eps` as an exact rational; rejects `eps <= 0`.
fn exponent(d: u64, eps: &Rational) -> Result<Rational, BoundsError> {
    if !eps.is_positive() || eps > &Rational::new(BigInt::from(1), BigInt::from(d)) {
        return Err(BoundsError::Epsilon);
    }
    Ok(Rational::new(BigInt::from(d - 1), BigInt::from(d)) + eps)
}

fn exponent_parts(e: &Rational) -> Result<(u32, u32), BoundsError> {
    let a = e.numer().to_u32().ok_or(BoundsError::ExponentTooLarge)?;
    let b = e.denom().to_u32().ok_or(BoundsError::ExponentTooLarge)?;
    Ok((a, b))
}

/// Smallest integer `m >= 0` with `m >= p^e`, i.e. `m^b >= p^a` for
/// `e = a/b`. Exact, by binary search over big integers.
pub fn ceil_pow(p: u64, e: &Rational) -> Result<u64, BoundsError> {
    if e.is_negative() {
        return Err(BoundsError::ExponentTooLarge);
    }
    let (a, b) = exponent_parts(e)?;
    let target = BigUint::from(p).pow(a);
    let (mut lo, mut hi) = (0u64, 1u64);
    while BigUint::from(hi).pow(b) < target {
        lo = hi;
        hi = hi.checked_mul(2).ok_or(BoundsError::ExponentTooLarge)?;
    }
    if BigUint::from(lo).pow(b) >= target {
        return Ok(lo);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if BigUint::from(mid).pow(b) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Whether the integer `q` exceeds `p^e` exactly.
fn exceeds_pow(q: u64, p: u64, e: &Rational) -> Result<bool, BoundsError> {
    let (a, b) = exponent_parts(e)?;
    Ok(BigUint::from(q).pow(b) > BigUint::from(p).pow(a))
}

/// The variant for any target `f` with `1 <= f <= p - ceil(p^e) + 2`,
/// `e = (d-1)/d + eps`: threshold `kalai(p, q, p-f+1-d, d) + 1`.
pub fn remark_threshold(
    p: u64,
    q: u64,
    d: u64,
    f: u64,
    eps: &Rational,
) -> Result<BoundResult, BoundsError> {
    check_pqd(p, q, d)?;
    let e = exponent(d, eps)?;
    let max = p as i64 - ceil_pow(p, &e)? as i64 + 2;
    if f == 0 || f as i64 > max {
        return Err(BoundsError::FOutOfRange { f, max });
    }
    let s = p as i64 - f as i64 + 1 - d as i64;
    Ok(BoundResult {
        threshold_r: kalai_sum(p as i64, q as i64, s, d as i64) + 1u32,
        pierce_bound: f,
        caveats: vec![Caveat::UnknownP0],
    })
}

/// Both cases of the large-`q` argument with `e = (d-1)/d + eps`:
/// if `q > p^e`, threshold `kalai(p,q,q-d,d) + 1` certifies `p-q+1` points;
/// otherwise, with `k = ceil(p^e) - q`, threshold `kalai(p,q,q+k-d-1,d) + 1`
/// certifies `p-(q+k)+2` points.
pub fn thm2_threshold(p: u64, q: u64, d: u64, eps: &Rational) -> Result<BoundResult, BoundsError> {
    check_pqd(p, q, d)?;
    let e = exponent(d, eps)?;
    let caveats = vec![Caveat::UnknownP0];
    if exceeds_pow(q, p, &e)? {
        return Ok(BoundResult {
            threshold_r: kalai_bound(p, q, q - d, d) + 1u32,
            pierce_bound: p - q + 1,
            caveats,
        });
    }
    let k = ceil_pow(p, &e)? - q;
    let s = (q + k) as i64 - d as i64 - 1;
    Ok(BoundResult {
        threshold_r: kalai_sum(p as i64, q as i64, s, d as i64) + 1u32,
        pierce_bound: p - (q + k) + 2,
        caveats,
    })
}

/// Smallest `m` with `C(m+1, 2) >= (p-q-k-1)(p-q+k+2)/2 + 1`.
pub fn m0(p: u64, q: u64, k: u64) -> Result<u64, BoundsError> {
    let gap = p as i64 - q as i64;
    if gap < 1 || k as i64 > gap - 1 {
        return Err(BoundsError::KOutOfRange { k, max: gap - 1 });
    }
    let k = k as i64;
    // the two factors sum to an odd number, so the product is even
    let rhs = BigUint::from(((gap - k - 1) * (gap + k + 2) / 2 + 1) as u64);
    let mut m = 0i64;
    while binom(m + 1, 2) < rhs {
        m += 1;
    }
    Ok(m as u64)
}

/// `C(p,q) - C(p-d+1, q-d+1) + 1 + C(q-d-2+m0, q-d) + C(q-d-1+m0, q-d+1)`
/// certifies piercing by `k+2` points for non-`(p-q)`-degenerate families.
pub fn thm3_threshold(p: u64, q: u64, d: u64, k: u64) -> Result<BoundResult, BoundsError> {
    check_pqd(p, q, d)?;
    let m = m0(p, q, k)? as i64;
    let (p, q, d) = (p as i64, q as i64, d as i64);
    let t = to_big(&binom(p, q)) - to_big(&binom(p - d + 1, q - d + 1))
        + 1
        + to_big(&binom(q - d - 2 + m, q - d))
        + to_big(&binom(q - d - 1 + m, q - d + 1));
    Ok(BoundResult {
        threshold_r: to_unsigned(t),
        pierce_bound: k + 2,
        caveats: vec![Caveat::NonDegenerateFamily],
    })
}

/// Families of intervals: `r >= C(p-k-2, q) + (k+2) C(p-k-2, q-1) + 1`
/// certifies `k+1` points, and one less does not.
pub fn dim1_threshold(p: u64, q: u64, k: u64) -> Result<BoundResult, BoundsError> {
    check_pqd(p, q, 1)?;
    if k > p - q {
        return Err(BoundsError::KOutOfRange {
            k,
            max: (p - q) as i64,
        });
    }
    let (p, q, k) = (p as i64, q as i64, k as i64);
    let base = p - k - 2;
    let t = binom(base, q) + BigUint::from((k + 2) as u64) * binom(base, q - 1) + 1u32;
    Ok(BoundResult {
        threshold_r: t,
        pierce_bound: (k + 1) as u64,
        caveats: vec![],
    })
}

/// `p-q+1` when `d*q > (d-1)*p + d`, where the piercing number of the
/// `(p,q)` property is known exactly; `None` otherwise or when the
/// parameters violate `p >= q >= d+1`.
pub fn hd_exact_region(p: u64, q: u64, d: u64) -> Option<u64> {
    check_pqd(p, q, d).ok()?;
    (d * q > (d - 1) * p + d).then_some(p - q + 1)
}

/// Largest `q' in [q, p]` with `r > kalai_bound(p, q, q'-1-d, d)`, or `q`
/// itself when none qualifies. A family with the `(p,q)_r` property then has
/// the `(p,q')` property.
pub fn implied_q(p: u64, q: u64, r: &BigUint, d: u64) -> Result<u64, BoundsError> {
    check_pqd(p, q, d)?;
    if r.is_zero() {
        return Err(BoundsError::ZeroR);
    }
    Ok((q..=p)
        .rev()
        .find(|&qp| *r > kalai_bound(p, q, qp - 1 - d, d))
        .unwrap_or(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    // Pascal's triangle, additive only: independent of the multiplicative
    // formula in `binom`.
    fn pascal(n: i64, k: i64) -> BigUint {
        if n < 0 || k < 0 || k > n {
            return BigUint::zero();
        }
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for j in 1..row.len() {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
        row[k as usize].clone()
    }

    fn oracle_kalai(p: i64, q: i64, s: i64, d: i64) -> BigUint {
        (0..=d).map(|i| pascal(s, q - i) * pascal(p - s, i)).sum()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn binom_matches_pascal() {
        assert_eq!(binom(6, 3), big(20));
        assert_eq!(binom(2, 3), big(0));
        assert_eq!(binom(5, 0), big(1));
        assert_eq!(binom(-1, 0), big(0));
        assert_eq!(binom(3, -1), big(0));
        for n in 0..30 {
            for k in -1..=n + 1 {
                assert_eq!(binom(n, k), pascal(n, k), "C({n},{k})");
            }
        }
    }

    #[test]
    fn kalai_examples() {
        assert_eq!(oracle_kalai(6, 3, 2, 2), big(16));
        assert_eq!(kalai_bound(6, 3, 2, 2), big(16));
        assert_eq!(
            kalai_bound(6, 3, 2, 2) + 1u32,
            lemma_r0_threshold(6, 3, 2, 2).unwrap().threshold_r
        );
        for p in 1..8 {
            for q in 1..=2 {
                assert_eq!(kalai_bound(p, q, 0, 2), binom(p as i64, q as i64));
            }
        }
        assert_eq!(kalai_bound(6, 6, 3, 2), big(0));
        for (p, q, s, d) in [(9, 4, 3, 2), (12, 5, 6, 3), (7, 7, 2, 1)] {
            assert_eq!(
                kalai_bound(p, q, s, d),
                oracle_kalai(p as i64, q as i64, s as i64, d as i64)
            );
        }
    }

    #[test]
    fn ms_threshold_examples() {
        let r = ms_threshold(6, 3, 2).unwrap();
        assert_eq!((r.threshold_r, r.pierce_bound), (big(11), 4));
        for d in 1..6 {
            let r = ms_threshold(d + 1, d + 1, d).unwrap();
            assert_eq!((r.threshold_r, r.pierce_bound), (big(1), 1));
        }
        let r = ms_threshold(7, 4, 2).unwrap();
        assert_eq!((r.threshold_r.clone(), r.pierce_bound), (big(16), 4));
        assert_eq!(r.threshold_r, pascal(7, 4) - pascal(6, 3) + 1u32);
    }

    #[test]
    fn lemma_r0_examples() {
        let r = lemma_r0_threshold(6, 3, 2, 2).unwrap();
        assert_eq!((r.threshold_r, r.pierce_bound), (big(17), 2));
        let r = lemma_r0_threshold(8, 4, 2, 3).unwrap();
        assert_eq!(oracle_kalai(8, 4, 3, 2) + 1u32, big(36));
        assert_eq!(r.threshold_r, big(36));
        // the largest admissible f is floor(p/d) - 1
        assert!(lemma_r0_threshold(8, 4, 2, 3).is_ok());
        assert_eq!(
            lemma_r0_threshold(8, 4, 2, 4),
            Err(BoundsError::FOutOfRange { f: 4, max: 3 })
        );
        assert!(lemma_r0_threshold(8, 4, 2, 0).is_err());
        // r = 36 lifts q = 4 to q' = p - f + 1 = 6, whose exact piercing number is f
        assert_eq!(implied_q(8, 4, &big(36), 2).unwrap(), 6);
        assert_eq!(hd_exact_region(8, 6, 2), Some(3));
    }

    #[test]
    fn remark_examples() {
        let half = rat(1, 2);
        let r = remark_threshold(6, 3, 2, 2, &half).unwrap();
        assert_eq!(oracle_kalai(6, 3, 3, 2) + 1u32, big(20));
        assert_eq!(r.threshold_r, big(20));
        assert_eq!(r.caveats, vec![Caveat::UnknownP0]);
        let r = remark_threshold(9, 3, 2, 1, &half).unwrap();
        assert_eq!(r.threshold_r, kalai_bound(9, 3, 7, 2) + 1u32);
        assert_eq!(r.pierce_bound, 1);
        // 6^(1/2+1/2) = 6, so f <= 6 - 6 + 2 = 2
        assert!(matches!(
            remark_threshold(6, 3, 2, 3, &half),
            Err(BoundsError::FOutOfRange { .. })
        ));
    }

    #[test]
    fn remark_at_largest_f_matches_second_case() {
        // f = p - ceil(p^e) + 2 gives s = ceil(p^e) - d - 1 = q + k - d - 1
        let eps = rat(1, 4);
        for p in 6..20u64 {
            let e = exponent(2, &eps).unwrap();
            let c = ceil_pow(p, &e).unwrap();
            for q in 3..=p.min(c) {
                if exceeds_pow(q, p, &e).unwrap() {
                    continue;
                }
                let f = p + 2 - c;
                let a = remark_threshold(p, q, 2, f, &eps).unwrap();
                let b = thm2_threshold(p, q, 2, &eps).unwrap();
                assert_eq!(
                    (a.threshold_r, a.pierce_bound),
                    (b.threshold_r, b.pierce_bound),
                    "p={p} q={q}"
                );
            }
        }
    }

    #[test]
    fn ceil_pow_exact() {
        assert_eq!(ceil_pow(16, &rat(1, 1)).unwrap(), 16);
        assert_eq!(ceil_pow(16, &rat(1, 2)).unwrap(), 4);
        assert_eq!(ceil_pow(17, &rat(1, 2)).unwrap(), 5);
        assert_eq!(ceil_pow(8, &rat(2, 3)).unwrap(), 4);
        assert_eq!(ceil_pow(9, &rat(2, 3)).unwrap(), 5);
        assert_eq!(ceil_pow(1, &rat(7, 3)).unwrap(), 1);
        assert_eq!(ceil_pow(5, &rat(0, 1)).unwrap(), 1);
        // floating-point cross-check away from integer boundaries
        for p in 2..200u64 {
            for (a, b) in [(1, 2), (2, 3), (3, 4), (5, 7), (3, 2)] {
                let x = (p as f64).powf(a as f64 / b as f64);
                if (x - x.round()).abs() > 1e-6 {
                    assert_eq!(
                        ceil_pow(p, &rat(a, b)).unwrap(),
                        x.ceil() as u64,
                        "p={p} e={a}/{b}"
                    );
                }
            }
        }
    }

    #[test]
    fn thm2_examples() {
        let r = thm2_threshold(16, 8, 2, &rat(1, 2)).unwrap();
        let oracle = oracle_kalai(16, 8, 13, 2) + 1u32;
        assert_eq!(oracle, big(11584));
        assert_eq!(r.threshold_r, big(11584));
        assert_eq!(r.pierce_bound, 2);
        assert_eq!(r.caveats, vec![Caveat::UnknownP0]);

        // d = 1, small eps: p^eps < 2 <= q, so the first case fires
        for p in 3..12u64 {
            for q in 2..=p {
                let r = thm2_threshold(p, q, 1, &rat(1, 100)).unwrap();
                assert_eq!(r.pierce_bound, p - q + 1);
                assert_eq!(r.threshold_r, kalai_bound(p, q, q - 1, 1) + 1u32);
            }
        }
        assert_eq!(
            thm2_threshold(16, 8, 2, &rat(0, 1)),
            Err(BoundsError::Epsilon)
        );
        assert_eq!(
            thm2_threshold(16, 8, 2, &rat(2, 3)),
            Err(BoundsError::Epsilon)
        );
        assert!(thm2_threshold(16, 8, 1, &rat(1, 1)).is_ok());
    }

    #[test]
    fn thm2_k_nondecreasing_in_eps() {
        let epss = [rat(1, 10), rat(1, 5), rat(1, 3), rat(2, 5), rat(1, 2)];
        for p in 5..25u64 {
            for q in 3..=p {
                let mut last_k = 0i64;
                for eps in &epss {
                    let e = exponent(2, eps).unwrap();
                    let k = if exceeds_pow(q, p, &e).unwrap() {
                        0
                    } else {
                        ceil_pow(p, &e).unwrap() as i64 - q as i64
                    };
                    assert!(k >= last_k);
                    last_k = k;
                    thm2_threshold(p, q, 2, eps).unwrap();
                }
            }
        }
    }

    #[test]
    fn m0_examples() {
        assert_eq!(m0(6, 3, 0).unwrap(), 3);
        for p in 3..15 {
            for q in 2..p {
                assert_eq!(m0(p, q, p - q - 1).unwrap(), 1);
            }
        }
        assert_eq!(m0(10, 4, 2).unwrap(), 6);
        assert_eq!(m0(7, 4, 1).unwrap(), 3);
        assert!(m0(6, 3, 3).is_err());
        assert!(m0(3, 3, 0).is_err());
    }

    #[test]
    fn thm3_examples() {
        let r = thm3_threshold(6, 3, 2, 0).unwrap();
        assert_eq!((r.threshold_r, r.pierce_bound), (big(16), 2));
        assert_eq!(r.caveats, vec![Caveat::NonDegenerateFamily]);
        let r = thm3_threshold(6, 3, 2, 2).unwrap();
        assert_eq!((r.threshold_r.clone(), r.pierce_bound), (big(11), 4));
        assert_eq!(r.threshold_r, ms_threshold(6, 3, 2).unwrap().threshold_r);

        // m0(7,4,1) = 3: 35 - 20 + 1 + C(3,2) + C(4,3)
        let oracle = pascal(7, 4) - pascal(6, 3) + 1u32 + pascal(3, 2) + pascal(4, 3);
        assert_eq!(oracle, big(23));
        let r = thm3_threshold(7, 4, 2, 1).unwrap();
        assert_eq!((r.threshold_r, r.pierce_bound), (big(23), 3));
    }

    #[test]
    fn thm3_reduces_to_ms_threshold() {
        for p in 2..=20u64 {
            for d in 1..p {
                for q in d + 1..p {
                    let a = thm3_threshold(p, q, d, p - q - 1).unwrap();
                    let b = ms_threshold(p, q, d).unwrap();
                    assert_eq!(a.threshold_r, b.threshold_r, "p={p} q={q} d={d}");
                    assert_eq!(a.pierce_bound, b.pierce_bound);
                }
            }
        }
    }

    #[test]
    fn dim1_examples() {
        let r = dim1_threshold(4, 2, 0).unwrap();
        assert_eq!((r.threshold_r, r.pierce_bound), (big(6), 1));
        let r = dim1_threshold(6, 3, 1).unwrap();
        assert_eq!((r.threshold_r, r.pierce_bound), (big(11), 2));
        // k = p - q: both binomials vanish (C(q-2, q) = C(q-2, q-1) = 0)
        for p in 2..12u64 {
            for q in 2..=p {
                let r = dim1_threshold(p, q, p - q).unwrap();
                assert_eq!((r.threshold_r, r.pierce_bound), (big(1), p - q + 1));
            }
        }
        assert!(dim1_threshold(6, 3, 4).is_err());
        assert!(dim1_threshold(6, 1, 0).is_err());
    }

    #[test]
    fn hd_region_examples() {
        assert_eq!(hd_exact_region(6, 5, 2), Some(2));
        assert_eq!(hd_exact_region(5, 2, 1), Some(4));
        assert_eq!(hd_exact_region(6, 4, 2), None);
        assert_eq!(hd_exact_region(6, 2, 2), None);
        for p in 2..20 {
            for q in 2..=p {
                assert_eq!(hd_exact_region(p, q, 1), Some(p - q + 1));
            }
        }
    }

    #[test]
    fn implied_q_examples() {
        assert_eq!(implied_q(6, 3, &big(17), 2).unwrap(), 5);
        assert_eq!(hd_exact_region(6, 5, 2), Some(2));
        assert_eq!(implied_q(6, 3, &big(11), 2).unwrap(), 4);
        assert_eq!(hd_exact_region(6, 4, 2), None);
        for p in 3..10 {
            for q in 3..=p {
                assert_eq!(implied_q(p, q, &big(1), 2).unwrap(), q);
            }
        }
        assert_eq!(implied_q(6, 3, &big(0), 2), Err(BoundsError::ZeroR));
    }

    #[test]
    fn lemma_r0_is_kalai_plus_one() {
        for p in 3..=20u64 {
            for d in 1..=3u64 {
                for q in d + 1..=p {
                    for f in 1..(p / d) {
                        let r = lemma_r0_threshold(p, q, d, f).unwrap();
                        assert_eq!(r.threshold_r, kalai_bound(p, q, p - f - d, d) + 1u32);
                    }
                }
            }
        }
    }

    #[test]
    fn kalai_monotone_in_s_on_grid() {
        // empirical over this grid only: a weaker hypothesis (larger s) never
        // gives a smaller bound
        let mut violations = Vec::new();
        for p in 1..=12u64 {
            for d in 1..=2u64 {
                for q in 1..=p {
                    for s in 0..p {
                        if kalai_bound(p, q, s + 1, d) < kalai_bound(p, q, s, d) {
                            violations.push((p, q, s, d));
                        }
                    }
                }
            }
        }
        assert!(violations.is_empty(), "{violations:?}");
    }

    #[test]
    fn hypotheses_rejected() {
        assert!(ms_threshold(5, 2, 2).is_err());
        assert!(ms_threshold(3, 4, 2).is_err());
        assert!(ms_threshold(3, 3, 0).is_err());
        assert!(thm3_threshold(5, 2, 2, 0).is_err());
        assert!(lemma_r0_threshold(5, 2, 2, 1).is_err());
        assert!(thm2_threshold(5, 2, 2, &rat(1, 2)).is_err());
        assert!(implied_q(5, 2, &big(3), 2).is_err());
        assert!(BoundQuery::new(6, 3, 2).is_ok());
        assert!(BoundQuery::new(6, 2, 2).is_err());
        // d = 1 with q >= 2 is admissible
        assert!(ms_threshold(5, 2, 1).is_ok());
    }
}
