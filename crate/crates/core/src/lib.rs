//! Exact operator calculus for the spin-2 and spin-1 tensor operators on
//! sl(2) Verma modules, with verifiers for the Witt composite relations,
//! finite-dimensional Lie composites and overlay representations.

pub mod arith;
pub mod burnside;
pub mod composite;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod octahedron;
pub mod operator;
pub mod overlay;
pub mod witt;

pub use arith::{Poly, Rat, RatFun};
pub use burnside::burnside_irreducible;
pub use composite::{check_representation, composite_check, tensor_rep, LieComposite, MatrixRep};
pub use error::{Error, Result};
pub use harness::{RunConfig, SuiteReport};
pub use linalg::Matrix;
pub use octahedron::{octahedron, verify_octahedron_model};
pub use operator::{BasicOp, Combine, GradedOp, VermaVec};
pub use overlay::{build_lc, is_overlay_rep, overlay_window_search, Decomposition};
pub use witt::{verify_composite_defects, verify_current_closure, witt_assignment, WeightParam};
