//! Exact toolkit for integral convex polytopes: free sums, the integer
//! decomposition property, Ehrhart delta-polynomials and the Hilbert
//! h-polynomials of the associated graded monoids.

pub mod ehrhart;
pub mod error;
pub mod freesum;
pub mod fuzz;
mod hull;
pub mod io;
pub mod linalg;
pub mod monoid;
pub mod polynomial;
pub mod polytope;
pub mod zoo;

pub use error::{Error, Result};
pub use polynomial::Polynomial;
pub use polytope::{Facet, LatticePoint, Limits, VPolytope};
