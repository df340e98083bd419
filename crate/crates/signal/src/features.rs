//! Beat-wise, time-ordered feature sequences.
//!
//! For every lead, 14 named sequences are produced, one entry per detected
//! beat (entries are null where the underlying wave is missing):
//! heart_rate_bpm, rr_ms, p_amp_mv, p_dur_ms, pr_ms, qrs_amp_mv, qrs_dur_ms,
//! t_amp_mv, t_dur_ms, st_level_mv, st_slope, qt_ms, qtc_ms, beat_onset_s.
//!
//! Conventions:
//! - rr_ms and rate-derived entries are null for the first beat of a lead.
//! - qrs_amp_mv is the signed net deflection: (max + min) of the QRS window
//!   relative to the PQ baseline, so upright leads are positive and
//!   S-dominant leads negative.
//! - st_level_mv is measured 60 ms after QRS offset against the PQ baseline;
//!   st_slope is the least-squares slope (mV/s) over QRS offset +40..+100 ms.
//! - qtc_ms uses Bazett's correction.

use std::collections::BTreeMap;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::delineate::{delineate, median, BeatFiducials};
use crate::detect::detect_beats;
use crate::error::SignalError;
use crate::lead::{LeadName, CANONICAL_LEADS};
use crate::record::EcgRecord;

pub const FEATURE_NAMES: [&str; 14] = [
    "heart_rate_bpm",
    "rr_ms",
    "p_amp_mv",
    "p_dur_ms",
    "pr_ms",
    "qrs_amp_mv",
    "qrs_dur_ms",
    "t_amp_mv",
    "t_dur_ms",
    "st_level_mv",
    "st_slope",
    "qt_ms",
    "qtc_ms",
    "beat_onset_s",
];

/// The 14 per-beat sequences for one lead.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LeadFeatures {
    pub heart_rate_bpm: Vec<Option<f64>>,
    pub rr_ms: Vec<Option<f64>>,
    pub p_amp_mv: Vec<Option<f64>>,
    pub p_dur_ms: Vec<Option<f64>>,
    pub pr_ms: Vec<Option<f64>>,
    pub qrs_amp_mv: Vec<Option<f64>>,
    pub qrs_dur_ms: Vec<Option<f64>>,
    pub t_amp_mv: Vec<Option<f64>>,
    pub t_dur_ms: Vec<Option<f64>>,
    pub st_level_mv: Vec<Option<f64>>,
    pub st_slope: Vec<Option<f64>>,
    pub qt_ms: Vec<Option<f64>>,
    pub qtc_ms: Vec<Option<f64>>,
    pub beat_onset_s: Vec<Option<f64>>,
    /// Per-beat Q-wave metrics from delineation. These ride alongside the 14
    /// canonical sequences in memory but are not part of the serialized
    /// dictionary, so dictionaries loaded from disk carry empty Q channels.
    #[serde(skip)]
    pub q_dur_ms: Vec<Option<f64>>,
    #[serde(skip)]
    pub q_depth_mv: Vec<Option<f64>>,
}

impl LeadFeatures {
    pub fn beat_count(&self) -> usize {
        self.beat_onset_s.len()
    }

    /// Median of the present entries of one sequence, None if all missing.
    pub fn median_of(&self, seq: &[Option<f64>]) -> Option<f64> {
        let present: Vec<f64> = seq.iter().flatten().copied().collect();
        if present.is_empty() {
            None
        } else {
            Some(median(&present))
        }
    }
}

/// Per-lead feature sequences for a whole record, in canonical lead order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureDictionary {
    leads: Vec<(LeadName, LeadFeatures)>,
    /// Per-lead extraction failures (lead still present with zero beats).
    pub notes: BTreeMap<LeadName, String>,
}

impl FeatureDictionary {
    pub fn lead(&self, name: LeadName) -> &LeadFeatures {
        &self.leads[name.canonical_index()].1
    }

    pub fn iter(&self) -> impl Iterator<Item = (LeadName, &LeadFeatures)> {
        self.leads.iter().map(|(n, f)| (*n, f))
    }
}

impl Serialize for FeatureDictionary {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(12))?;
        for (lead, features) in &self.leads {
            map.serialize_entry(lead.as_str(), features)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for FeatureDictionary {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct DictVisitor;
        impl<'de> Visitor<'de> for DictVisitor {
            type Value = FeatureDictionary;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a map of 12 canonical lead names to feature sequences")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut by_lead: BTreeMap<LeadName, LeadFeatures> = BTreeMap::new();
                while let Some((key, value)) = access.next_entry::<String, LeadFeatures>()? {
                    let lead: LeadName = key
                        .parse()
                        .map_err(|_| serde::de::Error::custom(format!("unknown lead {key:?}")))?;
                    by_lead.insert(lead, value);
                }
                let mut leads = Vec::with_capacity(12);
                for lead in CANONICAL_LEADS {
                    let features = by_lead.remove(&lead).ok_or_else(|| {
                        serde::de::Error::custom(format!("missing lead {lead}"))
                    })?;
                    leads.push((lead, features));
                }
                Ok(FeatureDictionary {
                    leads,
                    notes: BTreeMap::new(),
                })
            }
        }
        deserializer.deserialize_map(DictVisitor)
    }
}

/// Bazett's correction: QT / sqrt(RR in seconds).
pub fn compute_qtc(qt_ms: f64, rr_ms: f64) -> Result<f64, SignalError> {
    if !(qt_ms > 0.0) {
        return Err(SignalError::NonPositiveInterval {
            name: "qt_ms".into(),
            value: qt_ms,
        });
    }
    if !(rr_ms > 0.0) {
        return Err(SignalError::NonPositiveInterval {
            name: "rr_ms".into(),
            value: rr_ms,
        });
    }
    Ok(qt_ms / (rr_ms / 1000.0).sqrt())
}

fn ms_to_samples(ms: f64, fs: f64) -> usize {
    ((ms / 1000.0) * fs).round() as usize
}

/// Least-squares slope of `x[lo..hi]` against time, in units per second.
fn lsq_slope(x: &[f64], lo: usize, hi: usize, fs: f64) -> Option<f64> {
    if hi <= lo + 1 || hi > x.len() {
        return None;
    }
    let n = (hi - lo) as f64;
    let t_mean = (lo + hi - 1) as f64 / 2.0;
    let x_mean = x[lo..hi].iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in lo..hi {
        let dt = i as f64 - t_mean;
        num += dt * (x[i] - x_mean);
        den += dt * dt;
    }
    if den == 0.0 {
        return None;
    }
    Some(num / den * fs)
}

/// PQ-segment baseline for one beat: mean over QRS onset -40..-8 ms.
fn pq_baseline(x: &[f64], qrs_onset: usize, fs: f64, fallback: f64) -> f64 {
    let lo = qrs_onset.saturating_sub(ms_to_samples(40.0, fs));
    let hi = qrs_onset.saturating_sub(ms_to_samples(8.0, fs));
    if hi > lo {
        x[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
    } else {
        fallback
    }
}

fn beat_features(
    x: &[f64],
    fs: f64,
    b0: f64,
    beat: &BeatFiducials,
    prev_r: Option<usize>,
    out: &mut LeadFeatures,
) {
    let spp = 1000.0 / fs; // ms per sample
    let r = beat.r_peak;
    let rr_ms = match (r, prev_r) {
        (Some(r), Some(p)) if r > p => Some((r - p) as f64 * spp),
        _ => None,
    };
    out.rr_ms.push(rr_ms);
    out.heart_rate_bpm.push(rr_ms.map(|rr| 60_000.0 / rr));

    let onset = beat.qrs_onset;
    let bl = onset.map_or(b0, |on| pq_baseline(x, on, fs, b0));

    out.p_amp_mv.push(beat.p_peak.map(|p| x[p] - bl));
    out.p_dur_ms.push(match (beat.p_onset, beat.p_offset) {
        (Some(a), Some(z)) if z > a => Some((z - a) as f64 * spp),
        _ => None,
    });
    out.pr_ms.push(match (beat.p_onset, onset) {
        (Some(a), Some(z)) if z > a => Some((z - a) as f64 * spp),
        _ => None,
    });

    let qrs_span = match (onset, beat.qrs_offset) {
        (Some(a), Some(z)) if z > a => Some((a, z)),
        _ => None,
    };
    out.qrs_amp_mv.push(qrs_span.map(|(a, z)| {
        let hi = x[a..=z].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = x[a..=z].iter().cloned().fold(f64::INFINITY, f64::min);
        (hi - bl) + (lo - bl)
    }));
    out.qrs_dur_ms
        .push(qrs_span.map(|(a, z)| (z - a) as f64 * spp));

    out.t_amp_mv.push(beat.t_peak.map(|t| x[t] - bl));
    out.t_dur_ms.push(match (beat.t_onset, beat.t_offset) {
        (Some(a), Some(z)) if z > a => Some((z - a) as f64 * spp),
        _ => None,
    });

    let st_point = beat
        .qrs_offset
        .map(|off| off + ms_to_samples(60.0, fs))
        .filter(|&i| i < x.len());
    out.st_level_mv.push(st_point.map(|i| x[i] - bl));
    out.st_slope.push(beat.qrs_offset.and_then(|off| {
        let lo = off + ms_to_samples(40.0, fs);
        let hi = off + ms_to_samples(100.0, fs);
        if hi <= x.len() {
            lsq_slope(x, lo, hi, fs)
        } else {
            None
        }
    }));

    let qt = match (onset, beat.t_offset) {
        (Some(a), Some(z)) if z > a => Some((z - a) as f64 * spp),
        _ => None,
    };
    out.qt_ms.push(qt);
    out.qtc_ms.push(match (qt, rr_ms) {
        (Some(qt), Some(rr)) => compute_qtc(qt, rr).ok(),
        _ => None,
    });

    out.beat_onset_s
        .push(onset.or(r).map(|i| i as f64 / fs));

    out.q_dur_ms.push(beat.q_duration_ms);
    out.q_depth_mv.push(beat.q_depth_mv);
}

/// Extracts the full feature dictionary for a record.
///
/// Pure and deterministic: identical records yield byte-identical output.
/// Per-lead detection failures do not abort the record; the lead is emitted
/// with zero beats and the failure is recorded in `notes`.
pub fn extract_features(record: &EcgRecord) -> FeatureDictionary {
    let fs = record.sampling_rate_hz;
    let mut leads = Vec::with_capacity(12);
    let mut notes = BTreeMap::new();
    for lead in &record.leads {
        let mut features = LeadFeatures::default();
        match detect_beats(lead, fs) {
            Ok(r_peaks) => {
                let b0 = median(&lead.samples);
                let beats = delineate(lead, fs, &r_peaks);
                let mut prev_r = None;
                for beat in &beats {
                    beat_features(&lead.samples, fs, b0, beat, prev_r, &mut features);
                    prev_r = beat.r_peak;
                }
            }
            Err(e) => {
                notes.insert(lead.lead_name, e.to_string());
            }
        }
        leads.push((lead.lead_name, features));
    }
    FeatureDictionary { leads, notes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{synth_record, SyntheticLeadSpec};

    #[test]
    fn qtc_bazett() {
        assert!((compute_qtc(400.0, 1000.0).unwrap() - 400.0).abs() < 1e-9);
        assert!((compute_qtc(400.0, 250.0).unwrap() - 800.0).abs() < 1e-9);
        assert!((compute_qtc(380.0, 640.0).unwrap() - 475.0).abs() < 1e-9);
        assert!(compute_qtc(0.0, 1000.0).is_err());
        assert!(compute_qtc(400.0, -5.0).is_err());
    }

    #[test]
    fn sixty_bpm_record_rates() {
        let (record, _) = synth_record("r", &SyntheticLeadSpec::normal(60.0), &[], 500.0, 12.0);
        let features = extract_features(&record);
        assert!(features.notes.is_empty());
        let ii = features.lead(crate::lead::LeadName::II);
        assert!(ii.beat_count() >= 8);
        for rr in ii.rr_ms.iter().skip(1) {
            let rr = rr.expect("rr present after first beat");
            assert!((rr - 1000.0).abs() <= 20.0, "rr {rr}");
        }
        for hr in ii.heart_rate_bpm.iter().skip(1) {
            let hr = hr.unwrap();
            assert!((hr - 60.0).abs() <= 1.0, "hr {hr}");
        }
        assert!(ii.rr_ms[0].is_none());
    }

    #[test]
    fn extraction_is_deterministic() {
        let (record, _) = synth_record("r", &SyntheticLeadSpec::normal(72.0), &[], 250.0, 10.0);
        let a = serde_json::to_string(&extract_features(&record)).unwrap();
        let b = serde_json::to_string(&extract_features(&record)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn qtc_identity_at_unit_rr() {
        let mut spec = SyntheticLeadSpec::normal(60.0);
        spec.qt_ms = 400.0;
        let (record, _) = synth_record("r", &spec, &[], 500.0, 12.0);
        let features = extract_features(&record);
        let ii = features.lead(crate::lead::LeadName::II);
        let qtc = ii.median_of(&ii.qtc_ms).expect("qtc");
        assert!((qtc - 400.0).abs() <= 25.0, "qtc {qtc}");
    }

    #[test]
    fn rate_times_rr_consistency() {
        for hr in [45.0, 60.0, 100.0, 140.0] {
            let (record, _) =
                synth_record("r", &SyntheticLeadSpec::normal(hr), &[], 500.0, 15.0);
            let features = extract_features(&record);
            let ii = features.lead(crate::lead::LeadName::II);
            let mean = |seq: &[Option<f64>]| {
                let v: Vec<f64> = seq.iter().flatten().copied().collect();
                v.iter().sum::<f64>() / v.len() as f64
            };
            let product = mean(&ii.heart_rate_bpm) * mean(&ii.rr_ms);
            assert!(
                (product - 60_000.0).abs() / 60_000.0 < 0.02,
                "hr {hr}: product {product}"
            );
        }
    }

    #[test]
    fn serialization_has_12_leads_and_14_sequences() {
        let (record, _) = synth_record("r", &SyntheticLeadSpec::normal(60.0), &[], 250.0, 8.0);
        let json = serde_json::to_value(extract_features(&record)).unwrap();
        let obj = json.as_object().unwrap();
        assert_eq!(obj.len(), 12);
        for lead in CANONICAL_LEADS {
            let entry = obj[lead.as_str()].as_object().unwrap();
            assert_eq!(entry.len(), 14);
            for name in FEATURE_NAMES {
                assert!(entry.contains_key(name), "missing {name}");
            }
        }
        let round: FeatureDictionary = serde_json::from_value(json.clone()).unwrap();
        assert_eq!(serde_json::to_value(&round).unwrap(), json);
    }
}
