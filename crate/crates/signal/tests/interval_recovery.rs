//! Recovery of generator-known rates and intervals across the working range.

use ecglab_signal::features::extract_features;
use ecglab_signal::synthetic::{synth_record, SyntheticLeadSpec};
use ecglab_signal::LeadName;

/// Deterministic split-mix style generator for test parameters.
struct Params(u64);

impl Params {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next()
    }
}

/// Builds a physiologically consistent spec for a target heart rate.
pub fn spec_for(rng: &mut Params, hr: f64) -> SyntheticLeadSpec {
    let rr = 60_000.0 / hr;
    let mut spec = SyntheticLeadSpec::normal(hr);
    spec.pr_ms = rng.range(130.0, (rr * 0.25).min(200.0).max(131.0));
    spec.p_dur_ms = (spec.pr_ms - 30.0).min(100.0);
    spec.qrs_ms = rng.range(80.0, 110.0);
    // T must end before the next P begins.
    let qt_cap = rr - spec.pr_ms - 60.0;
    spec.qt_ms = (400.0 * (rr / 1000.0).sqrt()).min(qt_cap).max(240.0);
    spec.t_dur_ms = (spec.qt_ms - spec.qrs_ms - 40.0).min(160.0).max(80.0);
    spec
}

#[test]
fn hr_within_2pct_intervals_within_20ms() {
    let fs = 250.0;
    let mut rng = Params(0x5eed_0001);
    for case in 0..50 {
        let hr = 40.0 + (case as f64 / 49.0) * 110.0;
        let spec = spec_for(&mut rng, hr);
        let (record, _) = synth_record(&format!("rec-{case}"), &spec, &[], fs, 12.0);
        let features = extract_features(&record);
        assert!(
            features.notes.is_empty(),
            "case {case} hr {hr}: notes {:?}",
            features.notes
        );
        let ii = features.lead(LeadName::II);
        let hr_est = ii.median_of(&ii.heart_rate_bpm).expect("hr");
        assert!(
            (hr_est - hr).abs() / hr < 0.02,
            "case {case}: hr {hr} vs {hr_est}"
        );
        let pr = ii.median_of(&ii.pr_ms).expect("pr");
        assert!(
            (pr - spec.pr_ms).abs() <= 20.0,
            "case {case}: pr {} vs {pr}",
            spec.pr_ms
        );
        let qrs = ii.median_of(&ii.qrs_dur_ms).expect("qrs");
        assert!(
            (qrs - spec.qrs_ms).abs() <= 20.0,
            "case {case}: qrs {} vs {qrs}",
            spec.qrs_ms
        );
        let qt = ii.median_of(&ii.qt_ms).expect("qt");
        assert!(
            (qt - spec.qt_ms).abs() <= 20.0,
            "case {case}: qt {} vs {qt}",
            spec.qt_ms
        );
    }
}
