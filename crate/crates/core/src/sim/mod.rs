//! Exact statevector engine.

mod circuit;
mod gadgets;
mod operator;
mod sampling;
mod snapshot;
mod state;
mod tdm;

pub use circuit::{ancilla_readout, controlled_pair_circuit, controlled_pair_overlap, controlled_pair_tdm};
pub use gadgets::{apply_generator_step, apply_pauli_step, apply_two_body_step, dense_expm_apply, GadgetSequence};
pub use operator::{dot, expectation, fermion_expectation, CompiledOperator};
pub use sampling::SampledEstimator;
pub use snapshot::{decode_snapshot, encode_snapshot, read_snapshot, write_snapshot, SNAPSHOT_MAGIC};
pub use state::{apply_gadget, apply_word, inner_product, StateVector, NORM_TOL};
pub use tdm::{
    pair_annihilated, transition_2rdm, transition_tensor, transition_tensor_from_pairs, TransitionRdm,
};
