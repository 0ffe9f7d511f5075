//! Graph invariants and exact integer linear algebra for deciding when the
//! C*-algebra of one 1-sink graph extension embeds as a full corner in
//! another's.
//!
//! The pipeline: finite directed multigraphs ([`Graph`]) carry reachability,
//! loop conditions and three incidence matrices; [`tails`] computes maximal
//! tails and saturated hereditary sets; [`extension`] validates 1-sink
//! extensions and their invariants (boundary path counts, sink closure,
//! inessential part); [`linalg`] supplies Smith normal forms, solvability
//! certificates and cokernel classes; [`decide`] combines everything into
//! embeddability verdicts with re-verifiable evidence. [`problem`] defines
//! the JSON interchange format and [`oracle`] holds slow reference
//! implementations used to cross-check the fast ones.

pub mod decide;
pub mod extension;
pub mod graph;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod problem;
pub mod tails;

pub use decide::{decide_auto, decide_essential, decide_general, Decision, Mode, Verdict};
pub use extension::{
    block_decomposition, quotient_graph, validate_extension, BlockDecomposition,
    ExtensionAnalysis, OneSinkExtension, ValidationReport,
};
pub use graph::{ConditionK, ConditionL, Edge, Graph, GraphError, PathCount};
pub use linalg::{
    classes_equal, coker_invariants, in_image, induced_cokernel_map_check, smith_normal_form,
    CokerClass, CokerInvariants, CokernelPresentation, ImageMembership, InducedMapCheck,
    Obstruction, SmithDecomposition,
};
pub use matrix::{IntMatrix, IntVector, MatrixError};
pub use problem::{parse_problem, Problem, ProblemError, ProblemFile};
pub use tails::{is_maximal_tail, maximal_tails, saturated_closure, MaximalTail, SatHereditarySet};
