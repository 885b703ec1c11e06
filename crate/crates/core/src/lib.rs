//! Finite simplicial complexes, F_p homology, regular elementary abelian
//! covers, and the resolution and tower constructions built on them.

pub mod action;
pub mod complex;
pub mod cover;
pub mod cylinder;
pub mod error;
pub mod fiber;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod map;
pub mod random;
pub mod report;
pub mod resolution;
pub mod subdivision;
pub mod tower;
mod util;

pub use action::{quotient_by_action, GroupAction};
pub use cover::{build_cover, lift_action, voltage_assignment, Cover, VoltageAssignment};
pub use complex::{Simplex, SimplicialComplex, Subcomplex, VertexId};
pub use error::{Error, Result};
pub use homology::{
    betti_numbers, boundary_matrix, homology_basis, induced_map_on_homology, restriction_classification,
    Classification, HomologyBasis,
};
pub use linalg::{FpMatrix, Prime};
pub use map::SimplicialMap;
pub use report::VerificationReport;
pub use resolution::{resolve, verify_resolution, ResolutionStage};
pub use tower::{build_tower, verify_tower_stage, TowerStage};
pub use subdivision::{barycentric_subdivision, star_subdivision, Subdivision};
