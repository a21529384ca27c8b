//! Exact computations for the derived category of local P², presented as
//! modules over the Jacobi algebra of the three-vertex quiver with potential.
//!
//! Everything is computed over Q (with optional reduction modulo a large
//! prime for rank computations): Ext groups, determinant characters of Hom
//! complexes, Koszul twists between neighbouring hearts, and window vectors
//! of section dimensions.

pub mod corpus;
pub mod error;
pub mod homalg;
pub mod matrix;
pub mod oricalc;
pub mod quiver;
pub mod rank;
pub mod rep;
pub mod scalar;
pub mod windows;

pub use error::{Error, Result};
pub use homalg::{ext_dims_p2, ext_dims_y, euler_form_p2, euler_form_y, ExtDims, ExtReport};
pub use matrix::Matrix;
pub use quiver::{QuiverPresentation, Side};
pub use rep::{
    point_module, pushforward_module, simple_module, ModuleFile, P2Representation, QuiverModule, Representation,
};
pub use scalar::{Rational, ScalarMode};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Conventions embedded in every report so that stored artifacts are
/// self-describing.
pub fn conventions() -> std::collections::BTreeMap<&'static str, &'static str> {
    [
        ("module_action", "right modules: arrow x: s->t acts V_t -> V_s; the leftmost letter of a path acts first"),
        ("potential", "W = sum eps_ijk c_k b_j a_i with eps_123 = +1"),
        ("euler_form", "chi(m, n) = 3[(m0n1 - m1n0) + (m1n2 - m2n1) + (m2n0 - m0n2)]"),
        ("det_character", "sum_i (-1)^i det C^i; Hom(M_i, N_j) gives D^M_i^(-h^N_j) D^N_j^(h^M_i)"),
        ("twist_signs", "epsilon-signed Koszul maps; kernel and cokernel bases by pivot order"),
    ]
    .into_iter()
    .collect()
}
