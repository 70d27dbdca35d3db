//! Exact computations around the subgroup structure of the groups
//! PGL(3,q) and PSL(3,q):
//!
//! * table-based finite field arithmetic for q <= 128 ([`gf`]),
//! * the projective plane, concrete matrix groups, element classification,
//!   and a streaming scan of PGL(3,q) ([`pgl`]),
//! * brute-force subgroup-lattice enumeration with exact Moebius values
//!   ([`lattice`]),
//! * the closed-form line table for PSL(3,2^p) with its verification checks
//!   and the empirical overgroup census ([`psl3`]),
//! * reduced Euler characteristics of r-subgroup posets ([`eulerchar`]).
//!
//! Everything is exact: big integers and big rationals only, no floats.

pub mod eulerchar;
pub mod gf;
pub mod lattice;
pub mod pgl;
pub mod psl3;
pub mod qpoly;
