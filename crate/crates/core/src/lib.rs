//! Exact incidence computations in the affine plane over GF(q), q odd.
//!
//! * [`field`]: arithmetic in GF(p^n) with a canonical integer encoding.
//! * [`geometry`]: points, directions and canonical lines of AG(2, q).
//! * [`incidence`]: permutations, collinear triple counts and the
//!   hypergraph of maximal collinear subsets of a permutation graph.
//! * [`kakeya`]: one-line-per-direction families, multiplicities, Faber's
//!   incidence formula and the multiple-point / collinear-subset
//!   correspondence for the family built from a permutation.
//! * [`search`]: exhaustive and sampled extremal searches.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod field;
pub mod geometry;
pub mod incidence;
pub mod kakeya;
pub mod rng;
pub mod search;

pub use field::{ArithOp, FieldElement, FieldError, FieldSpec};
pub use geometry::{collinear, intersect, line_through, AffineLine, Direction, Intersection, PlanePoint};
pub use incidence::{
    maximal_hypergraph, psi_brute, psi_fast, CollinearEdge, CollinearHypergraph, IncidenceError,
    Permutation,
};
pub use kakeya::{
    edge_for_point, faber_verify, multiplicity_map, point_for_edge, FaberReport, KakeyaError,
    LineFamily, MultiplicityMap,
};
pub use search::{SearchError, SearchMode, SearchReport, Target};
