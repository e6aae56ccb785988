//! Spacetime-algebra field theory: electromagnetism and linear acoustics as
//! complex 4-vector potentials, with lattice derivatives, polar forms, a
//! finite-difference simulator and probe dynamics.

pub mod acoustic;
pub mod algebra;
pub mod em;
pub mod envelope;
pub mod error;
pub mod field;
pub mod lattice;
pub mod polar;
pub mod simulator;

pub use algebra::{
    cross3, dual, frame_split, geometric_product, grade_project, reverse, rotor_exp, sandwich, vector_product_polar,
    Frame, Grade, Multivector, Rotor, Vec3, VectorProductPolar,
};
pub use error::{Error, Result};
pub use field::{Analytic, Event, SpacetimeField};
pub use lattice::{LatticeSpec, MultivectorField};
pub use polar::{bivector_polar, scalar_polar, vector_polar, ComplexScalar, PolarForm, Sector};
