//! Extraction invariants: scaling behaviour, determinism, fiducial order.

use ecglab_signal::features::extract_features;
use ecglab_signal::synthetic::{synth_record, SyntheticLeadSpec};
use ecglab_signal::{EcgRecord, LeadSignal};
use proptest::prelude::*;

fn scaled(record: &EcgRecord, c: f64) -> EcgRecord {
    let leads = record
        .leads
        .iter()
        .map(|l| LeadSignal {
            lead_name: l.lead_name,
            samples: l.samples.iter().map(|s| s * c).collect(),
        })
        .collect();
    EcgRecord::new(record.record_id.clone(), leads, record.sampling_rate_hz).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Scaling all samples by a power of two (exact in floating point) leaves
    /// every interval feature unchanged and scales every amplitude feature.
    #[test]
    fn dyadic_scaling_preserves_intervals(exp in -3i32..4, hr in 50.0f64..130.0) {
        let c = (2.0f64).powi(exp);
        prop_assume!(c != 1.0);
        let (record, _) = synth_record("s", &SyntheticLeadSpec::normal(hr), &[], 250.0, 8.0);
        let base = extract_features(&record);
        let scaled_features = extract_features(&scaled(&record, c));
        for (lead, lf) in base.iter() {
            let sf = scaled_features.lead(lead);
            prop_assert_eq!(lf.beat_count(), sf.beat_count());
            // Intervals: bit-identical.
            prop_assert_eq!(&lf.rr_ms, &sf.rr_ms);
            prop_assert_eq!(&lf.heart_rate_bpm, &sf.heart_rate_bpm);
            prop_assert_eq!(&lf.p_dur_ms, &sf.p_dur_ms);
            prop_assert_eq!(&lf.pr_ms, &sf.pr_ms);
            prop_assert_eq!(&lf.qrs_dur_ms, &sf.qrs_dur_ms);
            prop_assert_eq!(&lf.t_dur_ms, &sf.t_dur_ms);
            prop_assert_eq!(&lf.qt_ms, &sf.qt_ms);
            prop_assert_eq!(&lf.qtc_ms, &sf.qtc_ms);
            prop_assert_eq!(&lf.beat_onset_s, &sf.beat_onset_s);
            // Amplitudes: scaled exactly by c.
            for (a, b) in lf.qrs_amp_mv.iter().zip(&sf.qrs_amp_mv) {
                prop_assert_eq!(a.map(|v| v * c), *b);
            }
            for (a, b) in lf.p_amp_mv.iter().zip(&sf.p_amp_mv) {
                prop_assert_eq!(a.map(|v| v * c), *b);
            }
            for (a, b) in lf.t_amp_mv.iter().zip(&sf.t_amp_mv) {
                prop_assert_eq!(a.map(|v| v * c), *b);
            }
            for (a, b) in lf.st_level_mv.iter().zip(&sf.st_level_mv) {
                prop_assert_eq!(a.map(|v| v * c), *b);
            }
        }
    }

    /// Every present fiducial pair respects physiological order in extracted
    /// sequences: onset times strictly increase beat over beat.
    #[test]
    fn beat_onsets_strictly_increase(hr in 45.0f64..145.0) {
        let (record, _) = synth_record("s", &SyntheticLeadSpec::normal(hr), &[], 250.0, 10.0);
        let features = extract_features(&record);
        for (_, lf) in features.iter() {
            let onsets: Vec<f64> = lf.beat_onset_s.iter().flatten().copied().collect();
            for w in onsets.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
        }
    }
}
