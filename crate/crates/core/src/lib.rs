//! Gluing equivariant complex vector bundles over finite sets.
//!
//! A finite group acting on a finite base set, together with an equivariant
//! complex vector bundle over that set, admits *pointwise clutching maps*:
//! families of fiber isomorphisms indexed by ordered pairs of base points,
//! closed under reflexivity, symmetry and transitivity. The equivariant ones
//! glue the bundle into a single group representation. This crate makes that
//! calculus computable:
//!
//! - [`group`]: Cayley-table groups, subgroups, actions, orbits, stabilizers.
//! - [`rep`]: complex characters, character tables, isotypic multiplicities,
//!   intertwiners by averaging, explicit irreducible matrices.
//! - [`bundle`]: equivariant bundles over finite sets and their restrictions.
//! - [`clutch`]: clutching-map axioms, the group action on clutching maps,
//!   glued representations, the fiberwise-isomorphism correspondence, and
//!   the averaging isomorphism.
//! - [`extensions`]: representation extensions and the path components of
//!   the space of equivariant clutching maps.
//! - [`homotopy`]: fundamental groups of those components via Smith normal
//!   form of integer restriction-multiplicity matrices.
//! - [`relations`]: the binary-relation calculus deciding when partial
//!   clutching data determines the whole map, with reconstruction and
//!   restriction of clutching maps.
//! - [`io`]: JSON document formats and deterministic serialization for the
//!   `clutchlab` command-line tool.

pub mod bundle;
pub mod clutch;
pub mod cmatrix;
pub mod error;
pub mod extensions;
pub mod fixtures;
pub mod group;
pub mod homotopy;
pub mod io;
pub mod relations;
pub mod rep;

pub use error::Error;

/// Numerical tolerances shared across all modules.
///
/// `eps_mat` bounds relative Frobenius residuals of matrix identities,
/// `eps_char` bounds character comparisons and integrality of inner
/// products, and `eps_sing` is the smallest singular value below which a
/// matrix is treated as singular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    pub eps_mat: f64,
    pub eps_char: f64,
    pub eps_sing: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            eps_mat: 1e-8,
            eps_char: 1e-6,
            eps_sing: 1e-8,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
