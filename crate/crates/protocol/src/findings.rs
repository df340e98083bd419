//! Structured findings emitted by the five protocol phases.

use serde::{Deserialize, Serialize};

use ecglab_signal::LeadName;

/// The five interpretation phases, in protocol order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    TechnicalRateRhythm,
    ConductionAxisIntervals,
    HypertrophyVoltage,
    IschemiaInfarction,
    ElectrolytesQt,
}

impl Phase {
    pub const ALL: [Phase; 5] = [
        Phase::TechnicalRateRhythm,
        Phase::ConductionAxisIntervals,
        Phase::HypertrophyVoltage,
        Phase::IschemiaInfarction,
        Phase::ElectrolytesQt,
    ];

    pub fn title(&self) -> &'static str {
        match self {
            Phase::TechnicalRateRhythm => "Technical, Rate & Rhythm",
            Phase::ConductionAxisIntervals => "Conduction, Axis & Intervals",
            Phase::HypertrophyVoltage => "Chamber Hypertrophy & Voltage",
            Phase::IschemiaInfarction => "Ischemia, Infarction & Mimics",
            Phase::ElectrolytesQt => "Electrolytes & QT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Normal,
    Borderline,
    Abnormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingCode {
    RateNormal,
    Bradycardia,
    Tachycardia,
    RegularRhythm,
    IrregularRhythm,
    PWavesPresent,
    PWavesAbsent,
    PrNormal,
    PrShort,
    PrProlonged,
    QrsNormal,
    QrsIncompleteBlock,
    QrsWide,
    AxisNormal,
    AxisLeftDeviation,
    AxisRightDeviation,
    AxisIndeterminate,
    VoltageNormal,
    Lvh,
    LowVoltage,
    StNormal,
    StElevation,
    StDepression,
    QWavesNormal,
    PathologicQ,
    QtNormal,
    QtProlonged,
    InsufficientBeats,
    NotMeasured,
}

/// One rule outcome. Abnormal findings always carry the triggering numeric
/// value as the first number in `evidence`, formatted with shortest
/// round-trip notation so it parses back exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub code: FindingCode,
    pub severity: Severity,
    pub evidence: String,
    pub leads: Vec<LeadName>,
}

impl Finding {
    pub fn new(code: FindingCode, severity: Severity, evidence: impl Into<String>) -> Self {
        Finding {
            code,
            severity,
            evidence: evidence.into(),
            leads: Vec::new(),
        }
    }

    pub fn with_leads(mut self, leads: Vec<LeadName>) -> Self {
        self.leads = leads;
        self
    }

    /// First numeric token of the evidence string, if any.
    pub fn evidence_value(&self) -> Option<f64> {
        first_number(&self.evidence)
    }
}

/// Extracts the first parseable float from a string.
pub fn first_number(text: &str) -> Option<f64> {
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_digit()
            || (bytes[i] == b'-' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit())
        {
            let start = i;
            let mut j = i;
            while j < bytes.len()
                && (bytes[j].is_ascii_digit()
                    || bytes[j] == b'.'
                    || bytes[j] == b'-'
                    || bytes[j] == b'e'
                    || bytes[j] == b'E'
                    || (bytes[j] == b'+' && j > start))
            {
                j += 1;
            }
            if let Ok(v) = text[start..j].trim_end_matches('.').parse::<f64>() {
                return Some(v);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    None
}

/// All findings for one phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseFindings {
    pub phase: Phase,
    pub findings: Vec<Finding>,
    /// Set when the phase ran on insufficient data (fewer than 3 beats in
    /// some lead); the findings above are still emitted where computable.
    pub degraded: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_number_parses_display_floats() {
        let v = 214.0_f64;
        let s = format!("PR interval {v} ms > 200 ms");
        assert_eq!(first_number(&s), Some(214.0));
        let v = 0.15000000000000002_f64;
        let s = format!("ST {v} mV in II");
        assert_eq!(first_number(&s), Some(v));
        assert_eq!(first_number("no numbers here"), None);
    }

    #[test]
    fn phase_order_and_titles() {
        assert_eq!(Phase::ALL[0].title(), "Technical, Rate & Rhythm");
        assert_eq!(Phase::ALL[4].title(), "Electrolytes & QT");
    }
}
