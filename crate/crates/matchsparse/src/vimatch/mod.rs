//! Vertex-independent matching: a randomized local-search matcher whose
//! per-vertex matching frequencies track a reference matcher's, so that
//! matched statuses of far-apart vertices stay nearly independent.
//!
//! The solver recurses over profiles of subgraph/matching pairs, improving
//! them with short alternating multi-walks found by exhaustive enumeration
//! (`build_h`) and selected greedily by gain. Saturation tables compare
//! per-vertex matching frequencies against the reference to decide which
//! vertices may not gain matched incidences.

pub mod hypergraph;
pub mod oracle;
pub mod solver;
pub mod walk;

pub use hypergraph::{
    build_h, build_h_bruteforce, greedy_hypergraph_matching, selection_meets_bound,
    GainHypergraph, HyperEdge,
};
pub use oracle::construct_h_prime;
pub use solver::{
    find_matching, ExtensionReference, ReferenceMatcher, RunStats, SaturationTable,
    SaturationTables, VimatchParams, VimatchRunner,
};
pub use walk::{
    apply_walk, gain, is_alternating, is_applicable, is_valid_multiwalk, vertex_sequences,
    walk_degrees, MultiWalk, Profile, ProfileEntry,
};
