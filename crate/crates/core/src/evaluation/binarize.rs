use serde::{Deserialize, Serialize};

use super::percentile_sorted;
use crate::datacube::BinaryMask;
use crate::detectors::ChangeMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinarizePolicy {
    /// Changed where the score is at least the `q`-th percentile, `q ∈ [0, 100]`.
    Percentile(f64),
    /// Otsu's threshold on a 256-bin histogram of min-max normalized scores.
    Otsu,
}

pub fn binarize(scores: &ChangeMap, policy: BinarizePolicy) -> Result<BinaryMask> {
    let labels: Vec<u8> = match policy {
        BinarizePolicy::Percentile(q) => {
            if !(0.0..=100.0).contains(&q) {
                return Err(Error::Parameter(format!("percentile {q} outside [0, 100]")));
            }
            let mut sorted = scores.scores().to_vec();
            sorted.sort_by(f64::total_cmp);
            let t = percentile_sorted(&sorted, q);
            scores.scores().iter().map(|&s| u8::from(s >= t)).collect()
        }
        BinarizePolicy::Otsu => {
            let (lo, hi) = scores.min_max();
            if hi <= lo {
                vec![BinaryMask::UNCHANGED; scores.scores().len()]
            } else {
                let bins: Vec<usize> = scores
                    .scores()
                    .iter()
                    .map(|&s| ((s - lo) / (hi - lo) * 255.0).round() as usize)
                    .collect();
                let t = otsu_bin(&bins);
                bins.iter().map(|&b| u8::from(b > t)).collect()
            }
        }
    };
    BinaryMask::new(scores.height(), scores.width(), labels)
}

/// Bin `t` maximizing the between-class variance of `{≤ t}` vs `{> t}`;
/// the lowest such bin on ties.
fn otsu_bin(bins: &[usize]) -> usize {
    let mut hist = [0f64; 256];
    for &b in bins {
        hist[b] += 1.0;
    }
    let total = bins.len() as f64;
    let sum_all: f64 = hist.iter().enumerate().map(|(i, &n)| i as f64 * n).sum();
    let (mut w0, mut sum0) = (0.0, 0.0);
    let (mut best, mut best_var) = (0usize, f64::NEG_INFINITY);
    for (t, &n) in hist.iter().enumerate().take(255) {
        w0 += n;
        sum0 += t as f64 * n;
        let w1 = total - w0;
        if w0 == 0.0 || w1 == 0.0 {
            continue;
        }
        let m0 = sum0 / w0;
        let m1 = (sum_all - sum0) / w1;
        let var = w0 * w1 * (m0 - m1) * (m0 - m1);
        if var > best_var {
            best_var = var;
            best = t;
        }
    }
    best
}
