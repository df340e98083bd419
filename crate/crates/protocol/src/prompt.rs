//! Guider prompt composition.
//!
//! The template ships as a UTF-8 text file with `{{report}}` and
//! `{{machine_measurements}}` placeholders; rendering substitutes the two
//! slots and changes nothing else, so the non-slot bytes of every rendered
//! prompt equal the stored template exactly.

use serde::{Deserialize, Serialize};

use crate::error::ProtocolError;

/// The five-phase guider template, embedded verbatim.
pub const GUIDER_TEMPLATE: &str = include_str!("../templates/guider_prompt.txt");

pub const REPORT_SLOT: &str = "{{report}}";
pub const MEASUREMENTS_SLOT: &str = "{{machine_measurements}}";

/// The six step headers the guider enforces, in canonical order.
pub const STEP_HEADERS: [&str; 6] = [
    "Step 1: Technical, Rate & Rhythm",
    "Step 2: Conduction, Axis & Intervals",
    "Step 3: Chamber Hypertrophy & Voltage",
    "Step 4: Ischemia, Infarction & Mimics",
    "Step 5: Electrolytes & QT",
    "Step 6: Final Medical Reasoning",
];

/// A rendered guider prompt plus the inputs that were substituted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolPrompt {
    pub text: String,
    pub report_slot: String,
    pub measurements_slot: String,
}

/// Renders the guider template with the report and measurement texts.
pub fn compose_guider_prompt(
    report: &str,
    measurements: &str,
) -> Result<ProtocolPrompt, ProtocolError> {
    if report.trim().is_empty() {
        return Err(ProtocolError::EmptyInput {
            name: "report".into(),
        });
    }
    if measurements.trim().is_empty() {
        return Err(ProtocolError::EmptyInput {
            name: "measurements".into(),
        });
    }
    let text = GUIDER_TEMPLATE
        .replace(REPORT_SLOT, report)
        .replace(MEASUREMENTS_SLOT, measurements);
    Ok(ProtocolPrompt {
        text,
        report_slot: report.to_string(),
        measurements_slot: measurements.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_inputs_into_input_data_section() {
        let p = compose_guider_prompt("Sinus rhythm", "HR 60").unwrap();
        let input_section = p.text.split("## Input Data").nth(1).unwrap();
        assert!(input_section.contains("Sinus rhythm"));
        assert!(input_section.contains("HR 60"));
    }

    #[test]
    fn contains_blind_simulation_rule_and_tags() {
        let p = compose_guider_prompt("r", "m").unwrap();
        assert!(p.text.contains("Strict Blind Simulation"));
        assert!(p.text.contains("<think>"));
        assert!(p.text.contains("<answer>"));
        for header in STEP_HEADERS {
            assert!(p.text.contains(header), "missing header {header}");
        }
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = compose_guider_prompt("abc", "def").unwrap();
        let b = compose_guider_prompt("abc", "def").unwrap();
        assert_eq!(a.text, b.text);
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(compose_guider_prompt("", "m").is_err());
        assert!(compose_guider_prompt("r", "  ").is_err());
    }

    #[test]
    fn non_slot_bytes_equal_template() {
        // Substituting sentinel strings and removing them must restore the
        // template byte-for-byte.
        let p = compose_guider_prompt("\u{1}REPORT\u{1}", "\u{2}MEAS\u{2}").unwrap();
        let restored = p
            .text
            .replace("\u{1}REPORT\u{1}", REPORT_SLOT)
            .replace("\u{2}MEAS\u{2}", MEASUREMENTS_SLOT);
        assert_eq!(restored, GUIDER_TEMPLATE);
    }
}
