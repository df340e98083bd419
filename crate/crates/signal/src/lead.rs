//! The twelve standard ECG leads and their canonical ordering.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SignalError;

/// One of the 12 standard leads, in canonical order
/// (I, II, III, aVR, aVL, aVF, V1–V6).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LeadName {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II")]
    II,
    #[serde(rename = "III")]
    III,
    #[serde(rename = "aVR")]
    AVR,
    #[serde(rename = "aVL")]
    AVL,
    #[serde(rename = "aVF")]
    AVF,
    #[serde(rename = "V1")]
    V1,
    #[serde(rename = "V2")]
    V2,
    #[serde(rename = "V3")]
    V3,
    #[serde(rename = "V4")]
    V4,
    #[serde(rename = "V5")]
    V5,
    #[serde(rename = "V6")]
    V6,
}

/// All 12 leads in canonical order.
pub const CANONICAL_LEADS: [LeadName; 12] = [
    LeadName::I,
    LeadName::II,
    LeadName::III,
    LeadName::AVR,
    LeadName::AVL,
    LeadName::AVF,
    LeadName::V1,
    LeadName::V2,
    LeadName::V3,
    LeadName::V4,
    LeadName::V5,
    LeadName::V6,
];

/// The six limb leads.
pub const LIMB_LEADS: [LeadName; 6] = [
    LeadName::I,
    LeadName::II,
    LeadName::III,
    LeadName::AVR,
    LeadName::AVL,
    LeadName::AVF,
];

/// The six precordial (chest) leads.
pub const PRECORDIAL_LEADS: [LeadName; 6] = [
    LeadName::V1,
    LeadName::V2,
    LeadName::V3,
    LeadName::V4,
    LeadName::V5,
    LeadName::V6,
];

impl LeadName {
    /// Canonical display name ("I", "aVR", "V3", ...).
    pub fn as_str(&self) -> &'static str {
        match self {
            LeadName::I => "I",
            LeadName::II => "II",
            LeadName::III => "III",
            LeadName::AVR => "aVR",
            LeadName::AVL => "aVL",
            LeadName::AVF => "aVF",
            LeadName::V1 => "V1",
            LeadName::V2 => "V2",
            LeadName::V3 => "V3",
            LeadName::V4 => "V4",
            LeadName::V5 => "V5",
            LeadName::V6 => "V6",
        }
    }

    /// Position in the canonical lead order (0-based).
    pub fn canonical_index(&self) -> usize {
        CANONICAL_LEADS.iter().position(|l| l == self).unwrap()
    }

    pub fn is_limb(&self) -> bool {
        LIMB_LEADS.contains(self)
    }

    pub fn is_precordial(&self) -> bool {
        PRECORDIAL_LEADS.contains(self)
    }
}

impl fmt::Display for LeadName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LeadName {
    type Err = SignalError;

    /// Case-insensitive parse of a canonical lead name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded = s.trim().to_ascii_uppercase();
        CANONICAL_LEADS
            .iter()
            .find(|l| l.as_str().to_ascii_uppercase() == folded)
            .copied()
            .ok_or_else(|| SignalError::UnknownLead { lead: s.to_string() })
    }
}
