//! Contact dynamics on lens spaces: homogeneous Hamiltonian flows, the
//! `C^1`-smallness certificate with greedy time decomposition, and the two
//! point-detection engines (translated points and discriminant times).

mod flow;
mod ham;
mod points;
mod small;

pub use flow::{flow, flow_checkpoints, ConicalMap, Composed, FlowMap, LinearMap, MAX_STEP};
pub use ham::{Hamiltonian, Harmonic, Monomial};
pub use points::{
    discriminant_times, translated_points, DiscriminantOptions, DiscriminantTimes,
    TranslatedPoint, TranslatedPointOptions, TranslatedPointsOutcome,
};
pub use small::{
    certify_piece_family, decompose, is_c1_small, SmallnessCert, SmallnessOptions,
    GRAPHICAL_DELTA,
};
