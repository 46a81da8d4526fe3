//! The box-ball soliton cellular automaton and its conservation laws.
//!
//! A state is a finitely supported 0/1 sequence on the integers. It can be
//! evolved three ways, all of which agree bit-exactly:
//!
//! * [`state::evolve_tts`] moves the balls one at a time, left to right;
//! * [`walkpath::evolve_reflect`] reflects the balanced blocks of the
//!   lattice-path encoding of the state;
//! * [`carrier::transfer`] sweeps a capacity-`l` carrier across the state.
//!
//! The conserved quantities live in [`matching`] (stack depths and the stack
//! permutation), [`poset`] (Greene invariants of the permutation poset),
//! [`rsk`] (the P-symbol shape) and [`carrier`] (the energies `E_l`).
//! [`verify`] ties everything together into a checkable suite.

pub mod carrier;
pub mod corpus;
pub mod error;
pub mod matching;
pub mod partition;
pub mod poset;
pub mod rsk;
pub mod state;
pub mod verify;
pub mod walkpath;

pub use carrier::{energy_profile, r_step, transfer, Capacity, Carrier, EnergyReport};
pub use error::{Error, Result};
pub use matching::{match_rounds, match_stack, stack_permutation, ParenSeq, StackPermutation};
pub use partition::Partition;
pub use poset::PermutationPoset;
pub use rsk::{p_symbol, Tableau};
pub use state::{evolve_tts, BoxBallState, SolitonProfile};
pub use walkpath::{evolve_reflect, Walk};
