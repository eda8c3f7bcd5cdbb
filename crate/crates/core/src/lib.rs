//! Simulator and compiler for the globally driven conveyor-belt quantum processor.

pub mod circuit;
pub mod compiler;
pub mod error;
pub mod hamiltonian;
pub mod logical;
pub mod oracle;
pub mod pulses;
pub mod rotation;
pub mod state;
pub mod topology;
pub mod verify;

pub use circuit::{LogicalCircuit, LogicalGate};
pub use compiler::{compile, Compiled, RoutingState};
pub use error::{Error, Result};
pub use logical::LogicalStateVector;
pub use pulses::{GlobalPulse, PulseSchedule, TargetClass};
pub use rotation::{Axis, C64};
pub use state::{
    decode_well_formed, encode_sparse, encode_well_formed, fidelity, Decoded, PhaseLabel,
    PureState, QuantumState, SparseState,
};
pub use topology::{Design, DeviceTopology};
pub use verify::Backend;
