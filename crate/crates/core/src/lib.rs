//! Markov tree-shifts on the Fibonacci lattice: block counting, topological
//! entropy through simple subsystems, and the cellular neural networks whose
//! mosaic outputs form such shifts.

pub mod cnn;
pub mod entropy;
pub mod error;
pub mod lattice;
pub mod shift;

pub use cnn::{
    admissible_patterns, cnn_entropy, critical_a, is_linearly_separable, phase_diagram, realizable,
    region_index, spec_from_patterns, verify_mosaic_pattern, CnnTemplate, LocalPattern,
    LocalPatternSet, RegionIndex, Sign,
};
pub use entropy::{
    classify_symbols, entropy, entropy_empirical, enumerate_simple_subsystems, spectral_radius,
    EntropyConfig, EntropyResult, SimpleSubsystem, SymbolClass, LN_GOLDEN,
};
pub use error::{Error, Result};
pub use lattice::{
    count_colorings_dp, enumerate_colorings_naive, is_valid_node, level_nodes, support,
    LatticeConfig, LatticeSlice, NodeWord, RootType,
};
pub use shift::{
    gamma_sequence, recurrence_coefficients, spec_from_vertex_matrices, viability_prune, Alphabet,
    BinaryMatrix, GammaTable, MarkovFibSpec, Provenance,
};
