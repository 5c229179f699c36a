//! Gallager A decoding on Tanner graphs and behavioral verification of its
//! error-correction guarantee for column-weight-three LDPC codes.
//!
//! The crate is split into:
//!
//! * [`graph`]: Tanner graphs, girth, directed neighborhoods, bad-variable counts.
//! * [`alist`]: the alist interchange format.
//! * [`construct`]: progressive edge growth and the weight-four codeword control graph.
//! * [`decoder`]: the bit-exact Gallager A decoder with optional message traces.
//! * [`analysis`]: exhaustive and sampled error-pattern sweeps, minimal
//!   uncorrectable pattern search, and the bad-variable bound checker.
//! * [`sim`]: seeded Monte Carlo simulation over the binary symmetric channel.

pub mod alist;
pub mod analysis;
pub mod colex;
pub mod construct;
pub mod decoder;
pub mod graph;
pub mod seed;
pub mod sim;
pub mod word;

pub use alist::{from_alist, to_alist, AlistError};
pub use analysis::{
    check_lemma2_bounds, exhaustive_verify, extract_failure_configuration, find_min_uncorrectable, AnalysisError,
    FailureConfiguration, Lemma2Check, MinSearchResult, SweepMode, SweepSpec, VerificationReport,
};
pub use construct::{embed_weight4_codeword, peg_construct, peg_search, ConstructError, ConstructionSpec, PegOutcome};
pub use decoder::{decode, decode_with_trace, DecodeOutcome, Decoder, DecoderConfig, MessageState, UpdateRule};
pub use graph::{
    count_bad, directed_neighborhood, girth, node_neighborhood, validate_column_weight, DirectedEdge, Girth,
    NeighborhoodStats, NeighborhoodTree, Node, TannerGraph,
};
pub use sim::{fit_slope, simulate, SimError, SimPoint, SimResult, SimSpec};
pub use word::{ErrorPattern, Word};
