//! QRS detection.
//!
//! A derivative-squared / moving-window-integral detector in the Pan-Tompkins
//! family, arranged so that every stage is zero-phase (centered windows) and
//! every threshold is relative to the signal itself. The pipeline is:
//!
//!   band-pass (MA high-pass + MA low-pass) -> central-difference derivative
//!   -> squaring -> 150 ms moving integration -> relative-threshold peak
//!   picking with a 200 ms refractory period -> R-peak refinement on the
//!   band-passed signal.
//!
//! Relative thresholds keep the detector exactly invariant under positive
//! rescaling of the input.

use crate::error::SignalError;
use crate::record::LeadSignal;

/// Minimum spacing between reported beats.
pub const REFRACTORY_MS: f64 = 200.0;

const MIN_SIGNAL_SECONDS: f64 = 2.0;
const MIN_SAMPLING_HZ: f64 = 100.0;

/// Centered moving average with edge-clamped windows (zero phase).
fn moving_average(x: &[f64], half_width: usize) -> Vec<f64> {
    let n = x.len();
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + x[i];
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half_width);
            let hi = (i + half_width + 1).min(n);
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Band-passed QRS-energy emphasis of a raw lead.
fn band_pass(samples: &[f64], fs: f64) -> Vec<f64> {
    // High-pass: subtract a 200 ms moving average (removes baseline and P/T bulk).
    let hp_half = ((0.100 * fs).round() as usize).max(1);
    let baseline = moving_average(samples, hp_half);
    let high_passed: Vec<f64> = samples
        .iter()
        .zip(&baseline)
        .map(|(s, b)| s - b)
        .collect();
    // Low-pass: 30 ms smoothing.
    let lp_half = ((0.015 * fs).round() as usize).max(1);
    moving_average(&high_passed, lp_half)
}

fn derivative(x: &[f64], fs: f64) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let prev = x[i.saturating_sub(1)];
            let next = x[(i + 1).min(n - 1)];
            (next - prev) * fs / 2.0
        })
        .collect()
}

fn median_of(mut values: Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Detects R peaks in one lead.
///
/// Returned indices are strictly increasing and at least 200 ms apart.
/// Flat or pure-noise input yields [`SignalError::NoBeatsFound`].
pub fn detect_beats(lead: &LeadSignal, fs: f64) -> Result<Vec<usize>, SignalError> {
    if !(fs >= MIN_SAMPLING_HZ) {
        return Err(SignalError::UnsupportedSamplingRate { fs });
    }
    let n = lead.samples.len();
    let seconds = n as f64 / fs;
    if seconds < MIN_SIGNAL_SECONDS {
        return Err(SignalError::SignalTooShort {
            seconds,
            required: MIN_SIGNAL_SECONDS,
        });
    }

    let bp = band_pass(&lead.samples, fs);
    let deriv = derivative(&bp, fs);
    let squared: Vec<f64> = deriv.iter().map(|d| d * d).collect();
    let int_half = ((0.075 * fs).round() as usize).max(1);
    let integrated = moving_average(&squared, int_half);

    let max_energy = integrated.iter().cloned().fold(0.0_f64, f64::max);
    // Flat input: no energy at all relative to the raw amplitude scale.
    let amp_scale = lead
        .samples
        .iter()
        .map(|s| s.abs())
        .fold(0.0_f64, f64::max);
    if max_energy <= 0.0 || amp_scale <= 0.0 || max_energy < 1e-20 * amp_scale * amp_scale {
        return Err(SignalError::NoBeatsFound);
    }

    // Candidate peaks: local maxima of the integrated energy above a relative
    // threshold, greedily thinned to the refractory spacing.
    let threshold = 0.30 * max_energy;
    let refractory = ((REFRACTORY_MS / 1000.0) * fs).round() as usize;
    let mut candidates: Vec<usize> = Vec::new();
    for i in 1..n - 1 {
        if integrated[i] >= threshold
            && integrated[i] >= integrated[i - 1]
            && integrated[i] > integrated[i + 1]
    {
            candidates.push(i);
        }
    }
    let mut kept: Vec<usize> = Vec::new();
    for &c in &candidates {
        match kept.last() {
            Some(&last) if c < last + refractory => {
                if integrated[c] > integrated[last] {
                    *kept.last_mut().unwrap() = c;
                }
            }
            _ => kept.push(c),
        }
    }
    if kept.is_empty() {
        return Err(SignalError::NoBeatsFound);
    }

    // Noise rejection: real beats leave near-zero energy valleys between
    // peaks; broadband noise does not.
    if kept.len() >= 2 {
        let mut valleys = Vec::new();
        for w in kept.windows(2) {
            let lo = integrated[w[0]..=w[1]]
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            valleys.push(lo);
        }
        let peak_level = median_of(kept.iter().map(|&i| integrated[i]).collect());
        let valley_level = median_of(valleys);
        if valley_level > 0.0 && peak_level / valley_level < 4.0 {
            return Err(SignalError::NoBeatsFound);
        }
    }

    // Refine each candidate to the strongest band-passed deflection nearby.
    let search = ((0.080 * fs).round() as usize).max(1);
    let mut peaks: Vec<usize> = kept
        .iter()
        .map(|&c| {
            let lo = c.saturating_sub(search);
            let hi = (c + search + 1).min(n);
            (lo..hi)
                .max_by(|&a, &b| bp[a].abs().partial_cmp(&bp[b].abs()).unwrap())
                .unwrap()
        })
        .collect();
    peaks.sort_unstable();
    peaks.dedup();

    // Re-enforce refractory spacing after refinement.
    let mut result: Vec<usize> = Vec::new();
    for p in peaks {
        match result.last() {
            Some(&last) if p < last + refractory => {
                if integrated[p] > integrated[last] {
                    *result.last_mut().unwrap() = p;
                }
            }
            _ => result.push(p),
        }
    }
    if result.is_empty() {
        return Err(SignalError::NoBeatsFound);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lead::LeadName;
    use crate::synthetic::{synth_lead, SyntheticLeadSpec};

    #[test]
    fn sixty_bpm_train_spacing() {
        let spec = SyntheticLeadSpec::normal(60.0);
        let (lead, truth) = synth_lead(LeadName::II, &spec, 500.0, 10.0);
        let peaks = detect_beats(&lead, 500.0).unwrap();
        assert_eq!(peaks.len(), truth.beats.len());
        for w in peaks.windows(2) {
            let spacing = (w[1] - w[0]) as i64;
            assert!((spacing - 500).abs() <= 10, "spacing {spacing}");
        }
    }

    #[test]
    fn doubling_rate_doubles_beats() {
        let (lead60, _) = synth_lead(LeadName::II, &SyntheticLeadSpec::normal(60.0), 500.0, 20.0);
        let (lead120, _) =
            synth_lead(LeadName::II, &SyntheticLeadSpec::normal(120.0), 500.0, 20.0);
        let n60 = detect_beats(&lead60, 500.0).unwrap().len();
        let n120 = detect_beats(&lead120, 500.0).unwrap().len();
        assert!(
            (n120 as i64 - 2 * n60 as i64).abs() <= 1,
            "n60={n60} n120={n120}"
        );
    }

    #[test]
    fn all_zeros_has_no_beats() {
        let lead = LeadSignal::new(LeadName::I, vec![0.0; 5000]).unwrap();
        assert!(matches!(
            detect_beats(&lead, 500.0),
            Err(SignalError::NoBeatsFound)
        ));
    }

    #[test]
    fn white_noise_has_no_beats() {
        // Deterministic pseudo-noise (LCG), no QRS structure.
        let mut state = 0x2545F4914F6CDD1Du64;
        let samples: Vec<f64> = (0..5000)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
            })
            .collect();
        let lead = LeadSignal::new(LeadName::I, samples).unwrap();
        assert!(matches!(
            detect_beats(&lead, 500.0),
            Err(SignalError::NoBeatsFound)
        ));
    }

    #[test]
    fn short_signal_rejected() {
        let lead = LeadSignal::new(LeadName::I, vec![0.0; 400]).unwrap();
        assert!(matches!(
            detect_beats(&lead, 500.0),
            Err(SignalError::SignalTooShort { .. })
        ));
    }

    #[test]
    fn refractory_spacing_holds() {
        let (lead, _) = synth_lead(LeadName::II, &SyntheticLeadSpec::normal(150.0), 500.0, 10.0);
        let peaks = detect_beats(&lead, 500.0).unwrap();
        let refractory = (0.2 * 500.0) as usize;
        for w in peaks.windows(2) {
            assert!(w[1] - w[0] >= refractory);
        }
    }
}
