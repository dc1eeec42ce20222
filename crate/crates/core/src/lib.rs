//! Exact construction and verification of Tate resolutions and maximal
//! Cohen-Macaulay approximations over graded complete intersections.

pub mod arith;
pub mod exec;
pub mod freecomplex;
pub mod groebner;
pub mod harness;
pub mod homotopy;
pub mod koszul;
pub mod linalg;
pub mod shamash;
pub mod syzygy;
pub mod tate;
