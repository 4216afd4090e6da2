//! Exact tools for the Hadwiger-Debrunner `(p,q)` problem and its `(p,q)_r`
//! refinement: closed-form piercing thresholds over big integers, brute-force
//! verification of the properties on concrete families of intervals and
//! convex polygons, and constructive piercing procedures with certificates.

pub mod bounds;
pub mod family;
pub mod generators;
pub mod geometry;
pub mod piercing;
