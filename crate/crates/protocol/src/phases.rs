//! The five-phase protocol run over extracted feature sequences.
//!
//! Beat sequences collapse to per-lead medians before thresholds apply
//! (robust to occasional ectopy); axis polarity comes from the median net
//! QRS deflection of leads I, II, and aVF. Rhythm irregularity is a
//! descriptive finding only: a coefficient of variation of RR above 0.12
//! flags "irregular" without naming an arrhythmia.

use std::collections::BTreeMap;

use ecglab_signal::{FeatureDictionary, LeadName, LIMB_LEADS, PRECORDIAL_LEADS};

use crate::findings::{Finding, FindingCode, Phase, PhaseFindings, Severity};
use crate::thresholds::{
    assess_axis, assess_q_waves, assess_qt, assess_st, assess_voltage, classify_pr, classify_qrs,
    classify_rate, AxisClass, PrClass, QrsClass, QtClass, RateClass, PR_PROLONGED_MS, PR_SHORT_MS,
    QRS_NORMAL_MS, QRS_WIDE_MS, QTC_PROLONGED_MS, RATE_BRADY_BPM, RATE_TACHY_BPM,
};

/// RR coefficient-of-variation above this marks the rhythm irregular.
pub const RR_IRREGULARITY_CV: f64 = 0.12;

const MIN_BEATS: usize = 3;

fn median_feature(
    features: &FeatureDictionary,
    pick: impl Fn(&ecglab_signal::LeadFeatures) -> &[Option<f64>],
) -> BTreeMap<LeadName, f64> {
    let mut out = BTreeMap::new();
    for (lead, lf) in features.iter() {
        if let Some(m) = lf.median_of(pick(lf)) {
            out.insert(lead, m);
        }
    }
    out
}

fn record_median(per_lead: &BTreeMap<LeadName, f64>) -> Option<f64> {
    if per_lead.is_empty() {
        return None;
    }
    let mut values: Vec<f64> = per_lead.values().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    })
}

/// Preferred rhythm lead: II when it has beats, else the first lead that does.
fn rhythm_lead(features: &FeatureDictionary) -> Option<LeadName> {
    if features.lead(LeadName::II).beat_count() >= MIN_BEATS {
        return Some(LeadName::II);
    }
    features
        .iter()
        .find(|(_, lf)| lf.beat_count() >= MIN_BEATS)
        .map(|(l, _)| l)
}

fn phase1(features: &FeatureDictionary, degraded: bool) -> PhaseFindings {
    let mut findings = Vec::new();
    let hr_by_lead = median_feature(features, |lf| &lf.heart_rate_bpm);
    match record_median(&hr_by_lead).map(classify_rate) {
        Some(Ok(class)) => {
            let hr = record_median(&hr_by_lead).unwrap();
            let (code, severity, evidence) = match class {
                RateClass::Bradycardia => (
                    FindingCode::Bradycardia,
                    Severity::Abnormal,
                    format!("heart rate {hr} bpm < {RATE_BRADY_BPM} bpm"),
                ),
                RateClass::Normal => (
                    FindingCode::RateNormal,
                    Severity::Normal,
                    format!("heart rate {hr} bpm within {RATE_BRADY_BPM}-{RATE_TACHY_BPM} bpm"),
                ),
                RateClass::Tachycardia => (
                    FindingCode::Tachycardia,
                    Severity::Abnormal,
                    format!("heart rate {hr} bpm > {RATE_TACHY_BPM} bpm"),
                ),
            };
            findings.push(Finding::new(code, severity, evidence));
        }
        _ => findings.push(Finding::new(
            FindingCode::NotMeasured,
            Severity::Borderline,
            "heart rate not measurable",
        )),
    }

    // Irregularity cue from the rhythm lead's RR spread.
    if let Some(lead) = rhythm_lead(features) {
        let rr: Vec<f64> = features
            .lead(lead)
            .rr_ms
            .iter()
            .flatten()
            .copied()
            .collect();
        if rr.len() >= 2 {
            let mean = rr.iter().sum::<f64>() / rr.len() as f64;
            let var = rr.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / rr.len() as f64;
            let cv = var.sqrt() / mean;
            if cv > RR_IRREGULARITY_CV {
                findings.push(
                    Finding::new(
                        FindingCode::IrregularRhythm,
                        Severity::Abnormal,
                        format!("RR coefficient of variation {cv} > {RR_IRREGULARITY_CV}"),
                    )
                    .with_leads(vec![lead]),
                );
            } else {
                findings.push(
                    Finding::new(
                        FindingCode::RegularRhythm,
                        Severity::Normal,
                        format!("RR coefficient of variation {cv} <= {RR_IRREGULARITY_CV}"),
                    )
                    .with_leads(vec![lead]),
                );
            }
        }
        // P-wave presence on the rhythm lead.
        let lf = features.lead(lead);
        let beats = lf.beat_count();
        if beats > 0 {
            let with_p = lf.p_amp_mv.iter().filter(|p| p.is_some()).count();
            let frac = with_p as f64 / beats as f64;
            if frac < 0.5 {
                findings.push(
                    Finding::new(
                        FindingCode::PWavesAbsent,
                        Severity::Abnormal,
                        format!("P waves detected in {frac} of beats (fraction < 0.5)"),
                    )
                    .with_leads(vec![lead]),
                );
            } else {
                findings.push(
                    Finding::new(
                        FindingCode::PWavesPresent,
                        Severity::Normal,
                        format!("P waves detected in {frac} of beats"),
                    )
                    .with_leads(vec![lead]),
                );
            }
        }
    }

    if degraded {
        findings.push(Finding::new(
            FindingCode::InsufficientBeats,
            Severity::Borderline,
            format!("some lead carries fewer than {MIN_BEATS} beats"),
        ));
    }

    PhaseFindings {
        phase: Phase::TechnicalRateRhythm,
        findings,
        degraded,
    }
}

fn phase2(features: &FeatureDictionary, degraded: bool) -> PhaseFindings {
    let mut findings = Vec::new();

    let pr_by_lead = median_feature(features, |lf| &lf.pr_ms);
    match record_median(&pr_by_lead).map(classify_pr) {
        Some(Ok(class)) => {
            let pr = record_median(&pr_by_lead).unwrap();
            let (code, severity, evidence) = match class {
                PrClass::Short => (
                    FindingCode::PrShort,
                    Severity::Abnormal,
                    format!("PR interval {pr} ms < {PR_SHORT_MS} ms"),
                ),
                PrClass::Normal => (
                    FindingCode::PrNormal,
                    Severity::Normal,
                    format!("PR interval {pr} ms within {PR_SHORT_MS}-{PR_PROLONGED_MS} ms"),
                ),
                PrClass::Prolonged => (
                    FindingCode::PrProlonged,
                    Severity::Abnormal,
                    format!("PR interval {pr} ms > {PR_PROLONGED_MS} ms"),
                ),
            };
            findings.push(Finding::new(code, severity, evidence));
        }
        _ => findings.push(Finding::new(
            FindingCode::NotMeasured,
            Severity::Borderline,
            "PR interval not measurable",
        )),
    }

    let qrs_by_lead = median_feature(features, |lf| &lf.qrs_dur_ms);
    match record_median(&qrs_by_lead).map(classify_qrs) {
        Some(Ok(class)) => {
            let qrs = record_median(&qrs_by_lead).unwrap();
            let (code, severity, evidence) = match class {
                QrsClass::Normal => (
                    FindingCode::QrsNormal,
                    Severity::Normal,
                    format!("QRS duration {qrs} ms < {QRS_NORMAL_MS} ms"),
                ),
                QrsClass::IncompleteBlock => (
                    FindingCode::QrsIncompleteBlock,
                    Severity::Borderline,
                    format!("QRS duration {qrs} ms within {QRS_NORMAL_MS}-{QRS_WIDE_MS} ms"),
                ),
                QrsClass::Wide => (
                    FindingCode::QrsWide,
                    Severity::Abnormal,
                    format!("QRS duration {qrs} ms > {QRS_WIDE_MS} ms"),
                ),
            };
            findings.push(Finding::new(code, severity, evidence));
        }
        _ => findings.push(Finding::new(
            FindingCode::NotMeasured,
            Severity::Borderline,
            "QRS duration not measurable",
        )),
    }

    let net = median_feature(features, |lf| &lf.qrs_amp_mv);
    match (
        net.get(&LeadName::I),
        net.get(&LeadName::II),
        net.get(&LeadName::AVF),
    ) {
        (Some(&i), Some(&ii), Some(&avf)) => {
            let class = assess_axis(i, ii, avf);
            let (code, severity) = match class {
                AxisClass::Normal => (FindingCode::AxisNormal, Severity::Normal),
                AxisClass::LeftDeviation => (FindingCode::AxisLeftDeviation, Severity::Abnormal),
                AxisClass::RightDeviation => (FindingCode::AxisRightDeviation, Severity::Abnormal),
                AxisClass::Indeterminate => (FindingCode::AxisIndeterminate, Severity::Borderline),
            };
            findings.push(
                Finding::new(
                    code,
                    severity,
                    format!("net QRS I {i} mV, II {ii} mV, aVF {avf} mV"),
                )
                .with_leads(vec![LeadName::I, LeadName::II, LeadName::AVF]),
            );
        }
        _ => findings.push(Finding::new(
            FindingCode::NotMeasured,
            Severity::Borderline,
            "axis not measurable",
        )),
    }

    PhaseFindings {
        phase: Phase::ConductionAxisIntervals,
        findings,
        degraded,
    }
}

fn phase3(features: &FeatureDictionary, degraded: bool) -> PhaseFindings {
    let mut findings = Vec::new();
    let net = median_feature(features, |lf| &lf.qrs_amp_mv);
    // Net-deflection approximations of the classical wave amplitudes: the S
    // depth of V1 from its negative net, R heights from positive nets.
    let sv1 = net.get(&LeadName::V1).map_or(0.0, |v| (-v).max(0.0));
    let rv6 = net.get(&LeadName::V6).map_or(0.0, |v| v.max(0.0));
    let r_i = net.get(&LeadName::I).map_or(0.0, |v| v.max(0.0));
    let r_avl = net.get(&LeadName::AVL).map_or(0.0, |v| v.max(0.0));
    let abs_max = |leads: &[LeadName]| {
        leads
            .iter()
            .filter_map(|l| net.get(l))
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    };
    let limb_max = abs_max(&LIMB_LEADS);
    let precordial_max = abs_max(&PRECORDIAL_LEADS);

    if net.is_empty() {
        findings.push(Finding::new(
            FindingCode::NotMeasured,
            Severity::Borderline,
            "QRS amplitudes not measurable",
        ));
    } else {
        let v = assess_voltage(sv1, rv6, r_i, r_avl, limb_max, precordial_max)
            .expect("net-derived amplitudes are non-negative");
        if v.lvh {
            findings.push(
                Finding::new(FindingCode::Lvh, Severity::Abnormal, v.lvh_criteria.join("; "))
                    .with_leads(vec![LeadName::V1, LeadName::V6, LeadName::I, LeadName::AVL]),
            );
        }
        if v.low_voltage {
            findings.push(Finding::new(
                FindingCode::LowVoltage,
                Severity::Abnormal,
                v.low_voltage_criteria.join("; "),
            ));
        }
        if !v.lvh && !v.low_voltage {
            findings.push(Finding::new(
                FindingCode::VoltageNormal,
                Severity::Normal,
                format!("SV1+RV6 {} mV, limb max {limb_max} mV", sv1 + rv6),
            ));
        }
    }

    PhaseFindings {
        phase: Phase::HypertrophyVoltage,
        findings,
        degraded,
    }
}

fn phase4(features: &FeatureDictionary, degraded: bool) -> PhaseFindings {
    let mut findings = Vec::new();
    let st = median_feature(features, |lf| &lf.st_level_mv);
    let ischemia = assess_st(&st);
    for e in &ischemia.elevations {
        findings.push(
            Finding::new(
                FindingCode::StElevation,
                Severity::Abnormal,
                format!(
                    "ST elevation {} mV in {:?} territory",
                    e.levels_mv[0], e.territory
                ),
            )
            .with_leads(e.leads.clone()),
        );
    }
    for d in &ischemia.depressions {
        findings.push(
            Finding::new(
                FindingCode::StDepression,
                Severity::Abnormal,
                format!(
                    "ST depression {} mV in {:?} territory",
                    d.levels_mv[0], d.territory
                ),
            )
            .with_leads(d.leads.clone()),
        );
    }

    // Pathologic Q per lead, on the median depth/duration of measured Q
    // waves. Leads without detected Q waves contribute nothing.
    let q_dur = median_feature(features, |lf| &lf.q_dur_ms);
    let q_depth = median_feature(features, |lf| &lf.q_depth_mv);
    for (lead, &dur) in &q_dur {
        let Some(&depth) = q_depth.get(lead) else { continue };
        if assess_q_waves(dur, depth) {
            findings.push(
                Finding::new(
                    FindingCode::PathologicQ,
                    Severity::Abnormal,
                    format!("Q wave {dur} ms wide, {depth} mV deep in {lead}"),
                )
                .with_leads(vec![*lead]),
            );
        }
    }
    if findings.is_empty() {
        findings.push(Finding::new(
            FindingCode::StNormal,
            Severity::Normal,
            "no territory-level ST deviation; 0 pathologic Q waves",
        ));
    }

    PhaseFindings {
        phase: Phase::IschemiaInfarction,
        findings,
        degraded,
    }
}

fn phase5(features: &FeatureDictionary, degraded: bool) -> PhaseFindings {
    let mut findings = Vec::new();
    let qtc_by_lead = median_feature(features, |lf| &lf.qtc_ms);
    match record_median(&qtc_by_lead).map(assess_qt) {
        Some(Ok(class)) => {
            let qtc = record_median(&qtc_by_lead).unwrap();
            let (code, severity, evidence) = match class {
                QtClass::Normal => (
                    FindingCode::QtNormal,
                    Severity::Normal,
                    format!("QTc {qtc} ms <= {QTC_PROLONGED_MS} ms"),
                ),
                QtClass::Prolonged => (
                    FindingCode::QtProlonged,
                    Severity::Abnormal,
                    format!("QTc {qtc} ms > {QTC_PROLONGED_MS} ms"),
                ),
            };
            findings.push(Finding::new(code, severity, evidence));
        }
        _ => findings.push(Finding::new(
            FindingCode::NotMeasured,
            Severity::Borderline,
            "QTc not measurable",
        )),
    }
    PhaseFindings {
        phase: Phase::ElectrolytesQt,
        findings,
        degraded,
    }
}

/// Runs all five phases over a feature dictionary.
///
/// Always returns exactly five `PhaseFindings` in phase order. Leads with
/// fewer than 3 beats degrade the run (flagged per phase) without aborting.
pub fn run_protocol(features: &FeatureDictionary) -> Vec<PhaseFindings> {
    let degraded = features.iter().any(|(_, lf)| lf.beat_count() < MIN_BEATS);
    vec![
        phase1(features, degraded),
        phase2(features, degraded),
        phase3(features, degraded),
        phase4(features, degraded),
        phase5(features, degraded),
    ]
}
