//! Five-phase clinical ECG interpretation rules.
//!
//! Encodes a monograph-style interpretation workflow as executable threshold
//! rules — rate, rhythm regularity, PR/QRS/QT bands, frontal axis, voltage
//! criteria, territory-wise ST deviation, pathologic Q waves — and composes
//! the protocol-structured generation prompt. All classifiers are pure
//! functions with pinned boundary semantics.

pub mod error;
pub mod findings;
pub mod phases;
pub mod prompt;
pub mod thresholds;

pub use error::ProtocolError;
pub use findings::{first_number, Finding, FindingCode, Phase, PhaseFindings, Severity};
pub use phases::{run_protocol, RR_IRREGULARITY_CV};
pub use prompt::{
    compose_guider_prompt, ProtocolPrompt, GUIDER_TEMPLATE, MEASUREMENTS_SLOT, REPORT_SLOT,
    STEP_HEADERS,
};
pub use thresholds::{
    assess_axis, assess_q_waves, assess_qt, assess_st, assess_voltage, classify_pr, classify_qrs,
    classify_rate, AxisClass, IschemiaFindings, PrClass, QrsClass, QtClass, RateClass, Territory,
    TerritoryFinding, VoltageFindings,
};
