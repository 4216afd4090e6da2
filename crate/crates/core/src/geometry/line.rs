use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use super::{GeometryError, Point, Rational};

/// The locus `a*x + b*y = c`, stored with its leading nonzero coefficient
/// scaled to 1 so that equal lines compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl Line {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self, GeometryError> {
        let lead = if !a.is_zero() {
            a.clone()
        } else if !b.is_zero() {
            b.clone()
        } else {
            return Err(GeometryError::DegenerateLine);
        };
        Ok(Line {
            a: a / &lead,
            b: b / &lead,
            c: c / &lead,
        })
    }

    /// The line through `p` with direction `(dx, dy)`.
    pub fn through(p: &Point, dx: Rational, dy: Rational) -> Result<Self, GeometryError> {
        let a = -dy;
        let b = dx;
        let c = &a * &p.x + &b * &p.y;
        Line::new(a, b, c)
    }

    /// The x-axis, `y = 0`.
    pub fn x_axis() -> Self {
        Line {
            a: Rational::zero(),
            b: Rational::from_integer(1.into()),
            c: Rational::zero(),
        }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// `a*x + b*y - c`; its sign says which side of the line `p` is on.
    pub fn eval(&self, p: &Point) -> Rational {
        &self.a * &p.x + &self.b * &p.y - &self.c
    }

    pub fn side(&self, p: &Point) -> Ordering {
        let v = self.eval(p);
        if v.is_zero() {
            Ordering::Equal
        } else if v.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    /// Coordinate along the line: `x` for non-vertical lines, `y` for vertical
    /// ones. Monotone along the line, so intervals of parameters are segments.
    pub fn parameter(&self, p: &Point) -> Rational {
        if self.is_vertical() {
            p.y.clone()
        } else {
            p.x.clone()
        }
    }

    /// Inverse of [`Line::parameter`].
    pub fn point_at(&self, t: &Rational) -> Point {
        if self.is_vertical() {
            Point::new(&self.c / &self.a, t.clone())
        } else {
            Point::new(t.clone(), (&self.c - &self.a * t) / &self.b)
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*x + {}*y = {}", self.a, self.b, self.c)
    }
}
