//! XOR non-local games: exact cost-matrix models, quantum/classical bias
//! computation, duality certificates, solution algebras with Clifford
//! structure detection, explicit optimal strategy synthesis, and numerical
//! stability checks for approximate representations.
//!
//! The crate is organised around one pipeline:
//!
//! 1. [`game`] — build a normalized cost matrix ([`Game`]) from scratch, from
//!    a graph, or from one of the structured families.
//! 2. [`solver`] — compute the quantum bias by low-rank alternating ascent
//!    over unit-vector families, together with a duality certificate.
//! 3. [`algebra`] — derive the solution algebra at the optimum, detect
//!    strongly Clifford structure, and bound the entanglement needed.
//! 4. [`strategy`] — synthesize an explicit optimal quantum strategy on the
//!    minimal Hilbert-space dimension and evaluate/inspect it.
//! 5. [`stability`] — defect measurement for approximate representations,
//!    eigenvalue-gap splitting, rounding to exact representations, see-saw
//!    lower bounds, and dimension sweeps.

pub mod algebra;
pub mod error;
pub mod game;
pub mod json;
pub mod linalg;
pub mod solver;
pub mod stability;
pub mod strategy;

pub use algebra::{
    build_solution_algebra, cl_monomial_representation, clifford_generators, min_entanglement,
    strongly_clifford_certificate, strongly_clifford_certificate_with, verify_relations,
    CertificateOptions, CliffordCertificate, MinEntanglement, PairCoefficients, Relation,
    SolutionAlgebra,
};
pub use error::{Error, Result};
pub use game::{
    chsh_game, cl_game, cl_graph, cl_vertices, classical_bias, graph_game, new_game, tight_game,
    tsirelson_r, Game, Graph,
};
pub use solver::{
    check_mbias_bound, dual_certificate, gamma_value, marginal_biases, solve_quantum_bias,
    DualCertificate, MbiasReport, SdpSolution, SolveOptions, VectorStrategy,
};
pub use stability::{
    clifford_defect, defect, dimension_sweep, eigengap_split, extract_approx_rep, round_to_exact,
    seesaw_bias, seesaw_scan, vect_rank_bound_check, DefectReport, EpsCap, ExtractOptions,
    ExtractReport, GapResidual, GapSplit, RoundOptions, Rounding, SeesawOptions, SweepOptions,
    SweepRow, VectRankRow,
};
pub use strategy::{
    check_nondegenerate, entanglement_entropy, evaluate_bias, marginal_of, psi_to_matrix,
    synthesize_optimal, tensorcommute_residual, Marginal, QuantumStrategy, TensorCommuteCheck,
};
