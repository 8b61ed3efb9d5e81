//! Transversal construction, assembly of `K = A ∪ gA`, tiling lifts and the
//! stage driver.

pub mod connected;
pub mod lift;
pub mod premises;
pub mod stage;
pub mod verify;

pub use connected::{construct_a, geodesic_chain, ConstructOptions, Construction, ConstructionTrace};
pub use lift::lift_tiling;
pub use premises::{check_premises, premise_search, PremiseCandidate, PremiseReport, PremiseSearchOptions};
pub use stage::{
    quotient_injectivity, run_pipeline, run_stage, HomRef, PipelineConfig, PipelineOptions, PipelineOutput,
    PipelineReport, StageOptions, StageRecord,
};
pub use verify::{assemble_k, local_uniqueness, verify_transversal, LocalUniqueness, TransversalReport};
