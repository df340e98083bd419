//! Threshold classifiers for the five-phase interpretation protocol.
//!
//! Every rule is a total function over its positive domain, with boundary
//! ownership fixed as follows: strict inequalities stay strict ("< 60 bpm" is
//! bradycardia only below 60), and named ranges own both endpoints
//! ("60-100 bpm" is normal at exactly 60 and exactly 100). Voltage rules use
//! millivolts throughout; printed-paper millimetre thresholds convert at the
//! standard 10 mm/mV calibration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use ecglab_signal::LeadName;

use crate::error::ProtocolError;

// Rate bands (bpm).
pub const RATE_BRADY_BPM: f64 = 60.0;
pub const RATE_TACHY_BPM: f64 = 100.0;
// PR bands (ms).
pub const PR_SHORT_MS: f64 = 120.0;
pub const PR_PROLONGED_MS: f64 = 200.0;
// QRS bands (ms).
pub const QRS_NORMAL_MS: f64 = 100.0;
pub const QRS_WIDE_MS: f64 = 120.0;
// Voltage (mV): Sokolow-Lyon 35 mm, R(I) 15 mm, R(aVL) 11 mm.
pub const LVH_SOKOLOW_LYON_MV: f64 = 3.5;
pub const LVH_R_I_MV: f64 = 1.5;
pub const LVH_R_AVL_MV: f64 = 1.1;
// Low voltage (mV): limb 5 mm, precordial 10 mm.
pub const LOW_VOLTAGE_LIMB_MV: f64 = 0.5;
pub const LOW_VOLTAGE_PRECORDIAL_MV: f64 = 1.0;
// ST deviation (mV): 1 mm limb, 2 mm precordial.
pub const ST_LIMB_MV: f64 = 0.1;
pub const ST_PRECORDIAL_MV: f64 = 0.2;
// Pathologic Q: 0.03 s wide or 0.1 mV (1 mm) deep.
pub const Q_WIDE_MS: f64 = 30.0;
pub const Q_DEEP_MV: f64 = 0.1;
// QTc (ms).
pub const QTC_PROLONGED_MS: f64 = 440.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateClass {
    Bradycardia,
    Normal,
    Tachycardia,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrClass {
    Short,
    Normal,
    Prolonged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QrsClass {
    Normal,
    IncompleteBlock,
    Wide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisClass {
    Normal,
    LeftDeviation,
    RightDeviation,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QtClass {
    Normal,
    Prolonged,
}

/// < 60 bradycardia, 60-100 normal, > 100 tachycardia.
pub fn classify_rate(hr_bpm: f64) -> Result<RateClass, ProtocolError> {
    if !(hr_bpm > 0.0) {
        return Err(ProtocolError::NonPositiveRate { value: hr_bpm });
    }
    Ok(if hr_bpm < RATE_BRADY_BPM {
        RateClass::Bradycardia
    } else if hr_bpm <= RATE_TACHY_BPM {
        RateClass::Normal
    } else {
        RateClass::Tachycardia
    })
}

/// < 120 ms short, 120-200 ms normal, > 200 ms prolonged.
pub fn classify_pr(pr_ms: f64) -> Result<PrClass, ProtocolError> {
    if !(pr_ms > 0.0) {
        return Err(ProtocolError::NonPositiveInterval {
            name: "pr_ms".into(),
            value: pr_ms,
        });
    }
    Ok(if pr_ms < PR_SHORT_MS {
        PrClass::Short
    } else if pr_ms <= PR_PROLONGED_MS {
        PrClass::Normal
    } else {
        PrClass::Prolonged
    })
}

/// < 100 ms normal, 100-120 ms incomplete block, > 120 ms wide.
pub fn classify_qrs(qrs_ms: f64) -> Result<QrsClass, ProtocolError> {
    if !(qrs_ms > 0.0) {
        return Err(ProtocolError::NonPositiveInterval {
            name: "qrs_ms".into(),
            value: qrs_ms,
        });
    }
    Ok(if qrs_ms < QRS_NORMAL_MS {
        QrsClass::Normal
    } else if qrs_ms <= QRS_WIDE_MS {
        QrsClass::IncompleteBlock
    } else {
        QrsClass::Wide
    })
}

/// Frontal-plane axis from net QRS polarity of leads I, II, and aVF.
///
/// Zero net deflection counts as positive (an equiphasic lead II sits at
/// -30 degrees, still normal).
pub fn assess_axis(net_i_mv: f64, net_ii_mv: f64, net_avf_mv: f64) -> AxisClass {
    let pos = |v: f64| v >= 0.0;
    if pos(net_i_mv) && pos(net_ii_mv) {
        AxisClass::Normal
    } else if pos(net_i_mv) {
        AxisClass::LeftDeviation
    } else if pos(net_avf_mv) {
        AxisClass::RightDeviation
    } else {
        AxisClass::Indeterminate
    }
}

/// Voltage assessment: LVH criteria and generalized low voltage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoltageFindings {
    pub lvh: bool,
    /// Which LVH criteria fired, as human-readable evidence.
    pub lvh_criteria: Vec<String>,
    pub low_voltage: bool,
    pub low_voltage_criteria: Vec<String>,
}

/// LVH iff SV1+RV6 > 3.5 mV or R(I) > 1.5 mV or R(aVL) > 1.1 mV;
/// low voltage iff max limb QRS < 0.5 mV or max precordial QRS < 1.0 mV.
pub fn assess_voltage(
    sv1_mv: f64,
    rv6_mv: f64,
    r_i_mv: f64,
    r_avl_mv: f64,
    limb_max_mv: f64,
    precordial_max_mv: f64,
) -> Result<VoltageFindings, ProtocolError> {
    for (name, v) in [
        ("sv1_mv", sv1_mv),
        ("rv6_mv", rv6_mv),
        ("r_i_mv", r_i_mv),
        ("r_avl_mv", r_avl_mv),
        ("limb_max_mv", limb_max_mv),
        ("precordial_max_mv", precordial_max_mv),
    ] {
        if v < 0.0 {
            return Err(ProtocolError::NegativeAmplitude {
                name: name.into(),
                value: v,
            });
        }
    }
    let mut lvh_criteria = Vec::new();
    let sum = sv1_mv + rv6_mv;
    if sum > LVH_SOKOLOW_LYON_MV {
        lvh_criteria.push(format!("SV1+RV6 {sum} mV > {LVH_SOKOLOW_LYON_MV} mV"));
    }
    if r_i_mv > LVH_R_I_MV {
        lvh_criteria.push(format!("R in I {r_i_mv} mV > {LVH_R_I_MV} mV"));
    }
    if r_avl_mv > LVH_R_AVL_MV {
        lvh_criteria.push(format!("R in aVL {r_avl_mv} mV > {LVH_R_AVL_MV} mV"));
    }
    let mut low_voltage_criteria = Vec::new();
    if limb_max_mv < LOW_VOLTAGE_LIMB_MV {
        low_voltage_criteria.push(format!(
            "limb max {limb_max_mv} mV < {LOW_VOLTAGE_LIMB_MV} mV"
        ));
    }
    if precordial_max_mv < LOW_VOLTAGE_PRECORDIAL_MV {
        low_voltage_criteria.push(format!(
            "precordial max {precordial_max_mv} mV < {LOW_VOLTAGE_PRECORDIAL_MV} mV"
        ));
    }
    Ok(VoltageFindings {
        lvh: !lvh_criteria.is_empty(),
        lvh_criteria,
        low_voltage: !low_voltage_criteria.is_empty(),
        low_voltage_criteria,
    })
}

/// Contiguous-lead territories for ischemia localization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Territory {
    Inferior,
    Lateral,
    Anterior,
}

impl Territory {
    pub fn leads(&self) -> &'static [LeadName] {
        match self {
            Territory::Inferior => &[LeadName::II, LeadName::III, LeadName::AVF],
            Territory::Lateral => &[LeadName::I, LeadName::AVL, LeadName::V5, LeadName::V6],
            Territory::Anterior => &[LeadName::V1, LeadName::V2, LeadName::V3, LeadName::V4],
        }
    }

    pub const ALL: [Territory; 3] = [Territory::Inferior, Territory::Lateral, Territory::Anterior];
}

/// One territory-level ST deviation call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerritoryFinding {
    pub territory: Territory,
    pub leads: Vec<LeadName>,
    /// ST level of the qualifying leads, mV.
    pub levels_mv: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IschemiaFindings {
    pub elevations: Vec<TerritoryFinding>,
    pub depressions: Vec<TerritoryFinding>,
}

fn st_threshold(lead: LeadName) -> f64 {
    if lead.is_limb() {
        ST_LIMB_MV
    } else {
        ST_PRECORDIAL_MV
    }
}

/// Territory-wise ST deviation: a territory is flagged only when at least two
/// of its leads cross the lead-appropriate threshold (>= 0.1 mV limb,
/// >= 0.2 mV precordial), in the same direction.
pub fn assess_st(st_by_lead: &BTreeMap<LeadName, f64>) -> IschemiaFindings {
    let mut out = IschemiaFindings::default();
    for territory in Territory::ALL {
        let mut elevated = Vec::new();
        let mut depressed = Vec::new();
        for &lead in territory.leads() {
            if let Some(&st) = st_by_lead.get(&lead) {
                let thr = st_threshold(lead);
                if st >= thr {
                    elevated.push((lead, st));
                } else if st <= -thr {
                    depressed.push((lead, st));
                }
            }
        }
        if elevated.len() >= 2 {
            out.elevations.push(TerritoryFinding {
                territory,
                leads: elevated.iter().map(|(l, _)| *l).collect(),
                levels_mv: elevated.iter().map(|(_, v)| *v).collect(),
            });
        }
        if depressed.len() >= 2 {
            out.depressions.push(TerritoryFinding {
                territory,
                leads: depressed.iter().map(|(l, _)| *l).collect(),
                levels_mv: depressed.iter().map(|(_, v)| *v).collect(),
            });
        }
    }
    out
}

/// Pathologic Q iff wider than 30 ms or deeper than 0.1 mV.
pub fn assess_q_waves(q_dur_ms: f64, q_depth_mv: f64) -> bool {
    q_dur_ms > Q_WIDE_MS || q_depth_mv > Q_DEEP_MV
}

/// QTc <= 440 ms normal, above prolonged.
pub fn assess_qt(qtc_ms: f64) -> Result<QtClass, ProtocolError> {
    if !(qtc_ms > 0.0) {
        return Err(ProtocolError::NonPositiveInterval {
            name: "qtc_ms".into(),
            value: qtc_ms,
        });
    }
    Ok(if qtc_ms <= QTC_PROLONGED_MS {
        QtClass::Normal
    } else {
        QtClass::Prolonged
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_anchored_rates() {
        assert_eq!(classify_rate(55.0).unwrap(), RateClass::Bradycardia);
        assert_eq!(classify_rate(60.0).unwrap(), RateClass::Normal);
        assert_eq!(classify_rate(118.0).unwrap(), RateClass::Tachycardia);
        assert!(classify_rate(0.0).is_err());
    }

    #[test]
    fn paper_anchored_pr() {
        assert_eq!(classify_pr(214.0).unwrap(), PrClass::Prolonged);
        assert_eq!(classify_pr(160.0).unwrap(), PrClass::Normal);
        assert_eq!(classify_pr(110.0).unwrap(), PrClass::Short);
    }

    #[test]
    fn qrs_bands() {
        assert_eq!(classify_qrs(150.0).unwrap(), QrsClass::Wide);
        assert_eq!(classify_qrs(90.0).unwrap(), QrsClass::Normal);
        assert_eq!(classify_qrs(110.0).unwrap(), QrsClass::IncompleteBlock);
    }

    #[test]
    fn axis_rules() {
        assert_eq!(assess_axis(1.0, 0.8, 0.5), AxisClass::Normal);
        assert_eq!(assess_axis(1.0, -0.6, -0.4), AxisClass::LeftDeviation);
        // Equiphasic lead II counts as positive: normal.
        assert_eq!(assess_axis(1.0, 0.0, 0.1), AxisClass::Normal);
        assert_eq!(assess_axis(-0.5, -0.2, 0.6), AxisClass::RightDeviation);
        assert_eq!(assess_axis(-0.5, -0.2, -0.6), AxisClass::Indeterminate);
    }

    #[test]
    fn voltage_rules() {
        let v = assess_voltage(2.0, 1.8, 0.0, 0.0, 1.0, 2.0).unwrap();
        assert!(v.lvh && !v.low_voltage);
        // aVL 1.34 mV exceeds the 11 mm threshold.
        let v = assess_voltage(0.5, 0.5, 0.0, 1.34, 1.34, 1.2).unwrap();
        assert!(v.lvh);
        assert!(v.lvh_criteria.iter().any(|c| c.contains("aVL")));
        let v = assess_voltage(0.0, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(!v.lvh && v.low_voltage);
        assert!(assess_voltage(-0.1, 0.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn st_territory_rules() {
        let mut st = BTreeMap::new();
        st.insert(LeadName::II, 0.12);
        st.insert(LeadName::III, 0.15);
        let f = assess_st(&st);
        assert_eq!(f.elevations.len(), 1);
        assert_eq!(f.elevations[0].territory, Territory::Inferior);

        // One precordial lead alone is not enough.
        let mut st = BTreeMap::new();
        st.insert(LeadName::V2, 0.15);
        let f = assess_st(&st);
        assert!(f.elevations.is_empty() && f.depressions.is_empty());

        // Isoelectric everywhere.
        let st: BTreeMap<LeadName, f64> =
            ecglab_signal::CANONICAL_LEADS.iter().map(|&l| (l, 0.0)).collect();
        let f = assess_st(&st);
        assert!(f.elevations.is_empty() && f.depressions.is_empty());
    }

    #[test]
    fn q_wave_rules() {
        assert!(assess_q_waves(40.0, 0.05));
        assert!(!assess_q_waves(20.0, 0.05));
        assert!(assess_q_waves(10.0, 0.2));
    }

    #[test]
    fn qt_rules() {
        assert_eq!(assess_qt(440.0).unwrap(), QtClass::Normal);
        assert_eq!(assess_qt(475.0).unwrap(), QtClass::Prolonged);
        assert_eq!(assess_qt(420.0).unwrap(), QtClass::Normal);
    }
}
