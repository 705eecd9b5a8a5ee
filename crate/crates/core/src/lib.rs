//! Numerical toolkit for the complex hyperbolic plane.
//!
//! Vectors live in `C³` with the hermitian form
//! `⟨u,v⟩ = u₁v̄₁ + u₂v̄₂ − u₃v̄₃`. Points are projective classes of
//! nonisotropic vectors; isometries are elements of `SU(2,1)`.
//!
//! The modules build on each other in this order:
//! [`hermitian`] → [`isometry`] → [`paths`] → [`triples`] → [`holonomy`],
//! [`pentagons`].

pub mod error;
pub mod hermitian;
pub mod holonomy;
pub mod isometry;
pub mod json;
pub mod linalg;
pub mod paths;
pub mod pentagons;
pub mod sample;
pub mod triples;

pub use error::{Error, Result};
pub use hermitian::{
    alpha, beta, form, gram_of, line_type, point, polar_point, project_orthogonal, realize_gram,
    tance, tau, Gram, LineType, Point, Tolerances,
};
pub use holonomy::{
    b_commutator, b_fields, holonomy_dimension, holonomy_probe, omega_commutator,
    rectangle_holonomy, vertical_part, HolonomyRank, TripleTangent, VerticalDecomposition,
};
pub use isometry::{
    centralizer_basis, conjugator, is_regular, reflection, split_two_reflections, trace_formula,
    CubeRoot, Isometry, LieElement,
};
pub use paths::{
    bend_pair, bending, follow_path, hat, make_hyperbolic, normalized_lift, orthogonal_partner,
    Bending, PathSample, TangentAtPoint,
};
pub use pentagons::{
    apply_pentagon_program, build_pentagon, connect_pentagons, is_real_pentagon,
    pentagon_from_moduli, verify_pentagon, Pentagon, PentagonModuli,
};
pub use triples::{
    apply_program, classify_triple, connect_triples, decompose_three_reflections, horizontal_line,
    s_coords, standard_gram, tangent_ef_residual, triple_from_coords, vertical_line, BendMove,
    BendProgram, Connection, Pair, SCoords, Sheet, Triple, TripleClass,
};

pub use nalgebra::{Matrix3, Vector3};
pub use num_complex::Complex64;

/// Complex scalar.
pub type C64 = Complex64;
/// Vector of `C³` in the standard basis.
pub type Vector = Vector3<C64>;
/// 3×3 complex matrix.
pub type Mat3 = Matrix3<C64>;
