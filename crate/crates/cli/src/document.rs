//! JSON family documents with exact rational coordinates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use pqr_core::family::Family;
use pqr_core::geometry::{ConvexBody, ConvexPolygon, Dimension, Interval, Point, Rational};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BodyDocument {
    Interval { lo: String, hi: String },
    Polygon { vertices: Vec<[String; 2]> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDocument {
    #[serde(default = "format_version")]
    pub format_version: u32,
    pub dimension: u8,
    pub bodies: Vec<BodyDocument>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

fn format_version() -> u32 {
    FORMAT_VERSION
}

/// `"n"` for integers, `"n/d"` otherwise, always in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"n"` or `"n/d"` with `d != 0`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let bad = || format!("invalid rational {s:?}");
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(format!("invalid rational {s:?}: zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// 1D points print as their coordinate, 2D points as `[x, y]`.
pub fn point_json(p: &Point, dimension: Dimension) -> serde_json::Value {
    match dimension {
        Dimension::One => serde_json::Value::String(format_rational(&p.x)),
        Dimension::Two => serde_json::json!([format_rational(&p.x), format_rational(&p.y)]),
    }
}

impl FamilyDocument {
    pub fn from_family(f: &Family, metadata: BTreeMap<String, String>) -> Self {
        let bodies = f
            .bodies()
            .iter()
            .map(|b| match b {
                ConvexBody::Interval(iv) => BodyDocument::Interval {
                    lo: format_rational(iv.lo()),
                    hi: format_rational(iv.hi()),
                },
                ConvexBody::Polygon(poly) => BodyDocument::Polygon {
                    vertices: poly
                        .vertices()
                        .iter()
                        .map(|v| [format_rational(&v.x), format_rational(&v.y)])
                        .collect(),
                },
            })
            .collect();
        FamilyDocument {
            format_version: FORMAT_VERSION,
            dimension: f.dimension().as_usize() as u8,
            bodies,
            metadata,
        }
    }

    /// Validates every body and builds the family. Errors name the body.
    pub fn to_family(&self) -> Result<Family, CliError> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::parse(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        let dimension = Dimension::from_usize(self.dimension as usize).ok_or_else(|| {
            CliError::parse(format!("dimension must be 1 or 2, got {}", self.dimension))
        })?;
        let mut bodies = Vec::with_capacity(self.bodies.len());
        for (i, body) in self.bodies.iter().enumerate() {
            let at = |e: String| CliError::parse(format!("body {i}: {e}"));
            let parsed = match body {
                BodyDocument::Interval { lo, hi } => {
                    let iv = Interval::new(
                        parse_rational(lo).map_err(at)?,
                        parse_rational(hi).map_err(at)?,
                    )
                    .map_err(|e| at(e.to_string()))?;
                    ConvexBody::Interval(iv)
                }
                BodyDocument::Polygon { vertices } => {
                    let pts = vertices
                        .iter()
                        .map(|[x, y]| Ok(Point::new(parse_rational(x)?, parse_rational(y)?)))
                        .collect::<Result<Vec<_>, String>>()
                        .map_err(at)?;
                    ConvexBody::Polygon(ConvexPolygon::new(pts).map_err(|e| at(e.to_string()))?)
                }
            };
            if parsed.dimension() != dimension {
                return Err(at(format!(
                    "is {}-dimensional, document says {dimension}",
                    parsed.dimension()
                )));
            }
            bodies.push(parsed);
        }
        Family::new(bodies).map_err(|e| CliError::parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::parse(format!("malformed family document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}
