//! P1 vector finite elements on the volume mesh: materials, the viscosity, elasticity and mass
//! operators, and the load functional. Dirichlet DOFs are eliminated.

mod assembly;
mod load;
mod material;

pub use assembly::{
    assemble_elasticity, assemble_mass, assemble_mass_with, assemble_scalar_mass, assemble_tensor_operator,
    assemble_viscosity, element_scalar_mass, element_tensor_matrix, DofMap,
};
pub use load::{assemble_load, assemble_load_full, LoadSpec, VectorField};
pub use material::{isotropic_coercivity, sampled_coercivity, MaterialModel, Tensor4, COERCIVITY_SAMPLES};
