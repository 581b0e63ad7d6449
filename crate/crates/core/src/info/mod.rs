//! State sets, enabling mappings, information sextuples, noise and interpretability.

mod error;
mod interpret;
mod mapping;
mod noise;
mod sextuple;
mod state;

pub use error::InfoError;
pub use interpret::{check_interpretability, Explanation, ExplanationTriple, InterpretabilityVerdict, Reason};
pub use mapping::{
    check_enabling_map, recoverable_reduction, EnablingMapping, MappingReport, QuotientStateSet, ReducedMapping,
};
pub use noise::{check_noisy_symmetry, compose_noisy, NoiseSpec, NoiseWitness, SymmetryReport};
pub use sextuple::{state_from_json_value, state_json, InformationSextuple, SextupleDocument, SEXTUPLE_SCHEMA};
pub use state::StateSet;
