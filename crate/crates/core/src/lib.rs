//! Exact enumeration of N-unital rational functions.
//!
//! A non-constant rational function `U` is N-unital when every zero and
//! pole of both `U` and `1 - U` is 0 or an N-th root of unity. This crate
//! provides exact arithmetic in Q(ζ_N) ([`cyclotomic`]), polynomials with
//! root peeling ([`poly`]), the function type with its symmetries
//! ([`unital`]) and the complete search for U_N ([`enumerate`]).

pub mod cyclotomic;
pub mod enumerate;
pub mod error;
pub mod poly;
pub mod unital;

pub use cyclotomic::{cyclo_poly, totient, CycField, CycNum, Rat, Valuation};
pub use enumerate::{
    conjecture_report, conjecture_report_for, conjectured_value_set, degree_bound, enumerate,
    enumerate_with, orbit_decompose, orbit_decompose_with, search_size, solve_cd, value_orbit,
    value_set, values_of, ConjectureReport, EnumerateOptions, OrbitReport, PartitionTriple,
    SymmetryGroup, UnitalSet,
};
pub use error::{Error, Result};
pub use poly::{from_factored, peel_roots, Point, Poly, RootSpec};
pub use unital::{point_symmetries, Mobius, P1Value, UnitalFn};
