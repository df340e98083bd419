//! Fiducial delineation around detected R peaks.
//!
//! QRS onset/offset come from quiet zones of the signal derivative (the PQ
//! and ST segments are electrically silent next to the steep QRS slopes);
//! P and T landmarks come from amplitude crossings relative to the lead's
//! median baseline. Waves that cannot be located are reported as missing,
//! never interpolated, so downstream rules can distinguish "absent" from
//! "not measured". All thresholds are relative to the beat's own amplitude,
//! keeping delineation invariant under positive rescaling.

use serde::{Deserialize, Serialize};

use crate::record::LeadSignal;

/// Landmarks for one beat. Indices are sample offsets into the lead.
///
/// Present indices are strictly increasing in physiological order
/// (p_onset < p_peak < p_offset < qrs_onset < r_peak < qrs_offset
/// <= t_onset < t_peak < t_offset).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeatFiducials {
    pub beat_index: usize,
    pub p_onset: Option<usize>,
    pub p_peak: Option<usize>,
    pub p_offset: Option<usize>,
    pub qrs_onset: Option<usize>,
    pub r_peak: Option<usize>,
    pub qrs_offset: Option<usize>,
    pub t_onset: Option<usize>,
    pub t_peak: Option<usize>,
    pub t_offset: Option<usize>,
    pub q_depth_mv: Option<f64>,
    pub q_duration_ms: Option<f64>,
}

pub(crate) fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Central-difference derivative (units per second).
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

/// Scanning left from `start`, finds the boundary where a quiet run of
/// `quiet_len` samples (|d| < theta) ends and activity begins.
fn quiet_edge_left(
    d: &[f64],
    start: usize,
    lower: usize,
    theta: f64,
    quiet_len: usize,
) -> Option<usize> {
    let mut run = 0usize;
    let mut i = start;
    while i > lower {
        i -= 1;
        if d[i].abs() < theta {
            run += 1;
            if run >= quiet_len {
                return Some(i + quiet_len);
            }
        } else {
            run = 0;
        }
    }
    None
}

/// Mirror of [`quiet_edge_left`], scanning right.
fn quiet_edge_right(
    d: &[f64],
    start: usize,
    upper: usize,
    theta: f64,
    quiet_len: usize,
) -> Option<usize> {
    let mut run = 0usize;
    let mut i = start;
    while i + 1 < upper {
        i += 1;
        if d[i].abs() < theta {
            run += 1;
            if run >= quiet_len {
                return Some(i - quiet_len);
            }
        } else {
            run = 0;
        }
    }
    None
}

/// Scanning outward from `peak`, finds where |x - baseline| first stays below
/// `theta` for `run_len` samples. Returns the boundary sample.
fn amplitude_edge(
    x: &[f64],
    baseline: f64,
    peak: usize,
    bound: usize,
    theta: f64,
    run_len: usize,
    leftward: bool,
) -> Option<usize> {
    let mut run = 0usize;
    let mut i = peak;
    loop {
        if leftward {
            if i <= bound {
                return None;
            }
            i -= 1;
        } else {
            if i + 1 >= bound {
                return None;
            }
            i += 1;
        }
        if (x[i] - baseline).abs() < theta {
            run += 1;
            if run >= run_len {
                return Some(if leftward { i + run_len - 1 } else { i - run_len + 1 });
            }
        } else {
            run = 0;
        }
    }
}

fn ms_to_samples(ms: f64, fs: f64) -> usize {
    ((ms / 1000.0) * fs).round() as usize
}

/// Delineates one beat per R peak.
///
/// `r_peaks` must be strictly increasing valid indices (the output of
/// [`crate::detect::detect_beats`]). An empty `r_peaks` yields an empty
/// result.
pub fn delineate(lead: &LeadSignal, fs: f64, r_peaks: &[usize]) -> Vec<BeatFiducials> {
    let x = &lead.samples;
    let n = x.len();
    if n == 0 || r_peaks.is_empty() {
        return Vec::new();
    }
    let b0 = median(x);
    let d = derivative(x, fs);
    let quiet_len = ms_to_samples(10.0, fs).max(2);
    let amp_run = ms_to_samples(4.0, fs).max(2);

    let mut out = Vec::with_capacity(r_peaks.len());
    for (k, &r) in r_peaks.iter().enumerate() {
        let r = r.min(n - 1);
        let prev_r = if k > 0 { Some(r_peaks[k - 1]) } else { None };
        let next_r = r_peaks.get(k + 1).copied();

        // --- QRS bounds from derivative quiet zones ---
        let span = ms_to_samples(150.0, fs);
        let d_lo = r.saturating_sub(span);
        let d_hi = (r + span + 1).min(n);
        let dmax = d[d_lo..d_hi].iter().map(|v| v.abs()).fold(0.0, f64::max);
        let theta_d = 0.03 * dmax;
        let onset_lower = r.saturating_sub(span).max(prev_r.map_or(0, |p| p + 1));
        let offset_upper = (r + span + 1).min(n).min(next_r.unwrap_or(n));
        let qrs_onset = quiet_edge_left(&d, r, onset_lower, theta_d, quiet_len)
            .unwrap_or(onset_lower)
            .min(r.saturating_sub(1));
        let qrs_offset = quiet_edge_right(&d, r, offset_upper, theta_d, quiet_len)
            .unwrap_or(offset_upper.saturating_sub(1))
            .max(r + 1)
            .min(n - 1);

        // Local isoelectric reference: the PQ segment just before QRS onset.
        // The global median drifts at high rates (waves occupy most of the
        // cycle), so per-beat crossings measure against this instead.
        let bl_lo = qrs_onset.saturating_sub(ms_to_samples(40.0, fs));
        let bl_hi = qrs_onset.saturating_sub(ms_to_samples(8.0, fs));
        let bl = if bl_hi > bl_lo {
            x[bl_lo..bl_hi].iter().sum::<f64>() / (bl_hi - bl_lo) as f64
        } else {
            b0
        };

        // Beat amplitude scale: largest QRS deflection from baseline.
        let a = x[qrs_onset..=qrs_offset]
            .iter()
            .map(|v| (v - bl).abs())
            .fold(0.0, f64::max);

        // --- P wave ---
        let p_hi = qrs_onset.saturating_sub(ms_to_samples(10.0, fs));
        let p_lo = qrs_onset
            .saturating_sub(ms_to_samples(230.0, fs))
            .max(prev_r.map_or(0, |p| p + ms_to_samples(150.0, fs)));
        let (mut p_onset, mut p_peak, mut p_offset) = (None, None, None);
        if p_lo + 2 < p_hi {
            let peak = (p_lo..p_hi)
                .max_by(|&i, &j| {
                    (x[i] - bl).abs().partial_cmp(&(x[j] - bl).abs()).unwrap()
                })
                .unwrap();
            let p_amp = (x[peak] - bl).abs();
            if p_amp >= 0.02 * a {
                p_peak = Some(peak);
                let theta = 0.03 * p_amp;
                p_onset = amplitude_edge(x, bl, peak, p_lo, theta, amp_run, true);
                p_offset = amplitude_edge(x, bl, peak, qrs_onset, theta, amp_run, false);
            }
        }

        // --- T wave ---
        let t_lo = qrs_offset + ms_to_samples(20.0, fs);
        let t_hi = (qrs_offset + ms_to_samples(500.0, fs))
            .min(next_r.map_or(n, |nr| nr.saturating_sub(ms_to_samples(150.0, fs))))
            .min(n);
        let (mut t_onset, mut t_peak, mut t_offset) = (None, None, None);
        if t_lo + 2 < t_hi {
            let peak = (t_lo..t_hi)
                .max_by(|&i, &j| {
                    (x[i] - bl).abs().partial_cmp(&(x[j] - bl).abs()).unwrap()
                })
                .unwrap();
            let t_amp = (x[peak] - bl).abs();
            if t_amp >= 0.02 * a {
                t_peak = Some(peak);
                let theta = 0.03 * t_amp;
                t_onset = amplitude_edge(x, bl, peak, qrs_offset, theta, amp_run, true);
                t_offset = amplitude_edge(x, bl, peak, t_hi, theta, amp_run, false);
            }
        }

        // --- Q wave (only meaningful for upright QRS) ---
        let (mut q_depth, mut q_dur) = (None, None);
        if x[r] > bl && qrs_onset < r {
            let nadir = (qrs_onset..r)
                .min_by(|&i, &j| x[i].partial_cmp(&x[j]).unwrap())
                .unwrap();
            let depth = bl - x[nadir];
            if depth >= 0.02 * a {
                let theta = bl - 0.03 * depth;
                let mut lo = nadir;
                while lo > qrs_onset && x[lo - 1] < theta {
                    lo -= 1;
                }
                let mut hi = nadir;
                while hi + 1 < r && x[hi + 1] < theta {
                    hi += 1;
                }
                q_depth = Some(depth);
                q_dur = Some((hi - lo + 1) as f64 * 1000.0 / fs);
            }
        }

        out.push(sanitize(BeatFiducials {
            beat_index: k,
            p_onset,
            p_peak,
            p_offset,
            qrs_onset: Some(qrs_onset),
            r_peak: Some(r),
            qrs_offset: Some(qrs_offset),
            t_onset,
            t_peak,
            t_offset,
            q_depth_mv: q_depth,
            q_duration_ms: q_dur,
        }));
    }
    out
}

/// Drops any wave whose landmarks violate physiological ordering rather than
/// emitting inconsistent indices.
fn sanitize(mut b: BeatFiducials) -> BeatFiducials {
    let ordered = |lo: Option<usize>, hi: Option<usize>| match (lo, hi) {
        (Some(a), Some(z)) => a < z,
        _ => true,
    };
    let p_ok = ordered(b.p_onset, b.p_peak)
        && ordered(b.p_peak, b.p_offset)
        && ordered(b.p_offset, b.qrs_onset)
        && ordered(b.p_onset, b.qrs_onset);
    if !p_ok {
        b.p_onset = None;
        b.p_peak = None;
        b.p_offset = None;
    }
    let t_ok = ordered(b.qrs_offset.map(|v| v.saturating_sub(1)), b.t_onset)
        && ordered(b.t_onset, b.t_peak)
        && ordered(b.t_peak, b.t_offset);
    if !t_ok {
        b.t_onset = None;
        b.t_peak = None;
        b.t_offset = None;
    }
    b
}
