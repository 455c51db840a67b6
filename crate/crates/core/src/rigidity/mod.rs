//! End-to-end experiments: the rigidity round-trip, the concentration
//! inequality, the uniformization probe and quasi-properness profiles.

pub mod concentration;
pub mod quasi_proper;
pub mod roundtrip;
pub mod uniformization;

pub use concentration::{
    concentration_check, concentration_set, parallelogram_bound, ConcentrationInputs,
    ConcentrationReport, ConcentrationWitness, ParallelogramResult,
};
pub use quasi_proper::quasi_proper_profile;
pub use roundtrip::{roundtrip, RoundtripReport};
pub use uniformization::{fiber_shift, uniformization_probe, ProbeOptions};
