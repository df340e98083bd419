//! Boundary fuzzing: classifier transitions happen exactly at the documented
//! numbers, probed one ulp either side.

use ecglab_protocol::thresholds::*;
use ecglab_protocol::{
    assess_q_waves, assess_qt, assess_voltage, classify_pr, classify_qrs, classify_rate, PrClass,
    QrsClass, QtClass, RateClass,
};

fn up(v: f64) -> f64 {
    f64::from_bits(v.to_bits() + 1)
}

fn down(v: f64) -> f64 {
    f64::from_bits(v.to_bits() - 1)
}

#[test]
fn rate_boundaries_exact() {
    assert_eq!(classify_rate(down(60.0)).unwrap(), RateClass::Bradycardia);
    assert_eq!(classify_rate(60.0).unwrap(), RateClass::Normal);
    assert_eq!(classify_rate(up(60.0)).unwrap(), RateClass::Normal);
    assert_eq!(classify_rate(down(100.0)).unwrap(), RateClass::Normal);
    assert_eq!(classify_rate(100.0).unwrap(), RateClass::Normal);
    assert_eq!(classify_rate(up(100.0)).unwrap(), RateClass::Tachycardia);
}

#[test]
fn pr_boundaries_exact() {
    assert_eq!(classify_pr(down(120.0)).unwrap(), PrClass::Short);
    assert_eq!(classify_pr(120.0).unwrap(), PrClass::Normal);
    assert_eq!(classify_pr(200.0).unwrap(), PrClass::Normal);
    assert_eq!(classify_pr(up(200.0)).unwrap(), PrClass::Prolonged);
}

#[test]
fn qrs_boundaries_exact() {
    assert_eq!(classify_qrs(down(100.0)).unwrap(), QrsClass::Normal);
    assert_eq!(classify_qrs(100.0).unwrap(), QrsClass::IncompleteBlock);
    assert_eq!(classify_qrs(120.0).unwrap(), QrsClass::IncompleteBlock);
    assert_eq!(classify_qrs(up(120.0)).unwrap(), QrsClass::Wide);
}

#[test]
fn sokolow_lyon_boundary_exact() {
    // Probe the summed threshold directly: one side carries the whole value
    // so no rounding can absorb the ulp.
    let v = assess_voltage(3.5, 0.0, 0.0, 0.0, 1.0, 2.0).unwrap();
    assert!(!v.lvh, "exactly 3.5 mV is not above threshold");
    let v = assess_voltage(up(3.5), 0.0, 0.0, 0.0, 1.0, 2.0).unwrap();
    assert!(v.lvh);
    // R-in-I 15 mm and R-in-aVL 11 mm boundaries.
    assert!(!assess_voltage(0.0, 0.0, 1.5, 0.0, 1.5, 2.0).unwrap().lvh);
    assert!(assess_voltage(0.0, 0.0, up(1.5), 0.0, 1.5, 2.0).unwrap().lvh);
    assert!(!assess_voltage(0.0, 0.0, 0.0, 1.1, 1.1, 2.0).unwrap().lvh);
    assert!(assess_voltage(0.0, 0.0, 0.0, up(1.1), 1.1, 2.0).unwrap().lvh);
}

#[test]
fn low_voltage_boundary_exact() {
    assert!(!assess_voltage(0.0, 0.0, 0.0, 0.0, 0.5, 1.0).unwrap().low_voltage);
    assert!(assess_voltage(0.0, 0.0, 0.0, 0.0, down(0.5), 1.0).unwrap().low_voltage);
    assert!(assess_voltage(0.0, 0.0, 0.0, 0.0, 0.5, down(1.0)).unwrap().low_voltage);
}

#[test]
fn st_boundaries_exact() {
    use ecglab_signal::LeadName;
    use std::collections::BTreeMap;
    // Limb threshold 0.1 mV: inclusive.
    let mut st = BTreeMap::new();
    st.insert(LeadName::II, 0.1);
    st.insert(LeadName::III, 0.1);
    assert_eq!(assess_st(&st).elevations.len(), 1);
    let mut st = BTreeMap::new();
    st.insert(LeadName::II, down(0.1));
    st.insert(LeadName::III, 0.1);
    assert!(assess_st(&st).elevations.is_empty());
    // Precordial threshold 0.2 mV.
    let mut st = BTreeMap::new();
    st.insert(LeadName::V2, 0.2);
    st.insert(LeadName::V3, 0.2);
    assert_eq!(assess_st(&st).elevations.len(), 1);
    let mut st = BTreeMap::new();
    st.insert(LeadName::V2, down(0.2));
    st.insert(LeadName::V3, 0.2);
    assert!(assess_st(&st).elevations.is_empty());
    // Depressions mirror.
    let mut st = BTreeMap::new();
    st.insert(LeadName::V2, -0.2);
    st.insert(LeadName::V3, -0.2);
    assert_eq!(assess_st(&st).depressions.len(), 1);
}

#[test]
fn q_wave_boundaries_exact() {
    assert!(!assess_q_waves(30.0, 0.1));
    assert!(assess_q_waves(up(30.0), 0.0));
    assert!(assess_q_waves(0.0, up(0.1)));
}

#[test]
fn qtc_boundary_exact() {
    assert_eq!(assess_qt(440.0).unwrap(), QtClass::Normal);
    assert_eq!(assess_qt(up(440.0)).unwrap(), QtClass::Prolonged);
    assert_eq!(assess_qt(down(440.0)).unwrap(), QtClass::Normal);
}

#[test]
fn classifiers_total_over_positive_reals() {
    // Band partition sweep: every positive value lands in exactly one band.
    let probes: Vec<f64> = (1..20000).map(|i| i as f64 * 0.05).collect();
    for &v in &probes {
        classify_rate(v).unwrap();
        classify_pr(v).unwrap();
        classify_qrs(v).unwrap();
        assess_qt(v).unwrap();
    }
    assert!(classify_rate(0.0).is_err());
    assert!(classify_pr(f64::NAN).is_err());
}
