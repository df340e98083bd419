//! Deterministic 12-lead ECG signal processing.
//!
//! The pipeline ingests raw multi-lead recordings, finds beats, delineates
//! per-beat fiducial landmarks, and emits beat-wise time-ordered feature
//! sequences (14 per lead). Everything is a pure function of the samples and
//! the sampling rate: no trainable state, no hidden randomness, so repeated
//! extraction of the same record is byte-identical.

pub mod delineate;
pub mod detect;
pub mod error;
pub mod features;
pub mod io;
pub mod lead;
pub mod record;
pub mod synthetic;

pub use delineate::{delineate, BeatFiducials};
pub use detect::{detect_beats, REFRACTORY_MS};
pub use error::SignalError;
pub use features::{compute_qtc, extract_features, FeatureDictionary, LeadFeatures, FEATURE_NAMES};
pub use io::{load_record, save_record_csv, RecordMetadata, SignalFormat};
pub use lead::{LeadName, CANONICAL_LEADS, LIMB_LEADS, PRECORDIAL_LEADS};
pub use record::{EcgRecord, LeadSignal};
