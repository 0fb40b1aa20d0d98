//! ROC analysis, AUC, class-wise score percentiles and map binarization.
//!
//! Pixels labeled [`BinaryMask::IGNORE`] are excluded everywhere.

mod binarize;

pub use binarize::{binarize, BinarizePolicy};

use serde::Serialize;

use crate::datacube::BinaryMask;
use crate::detectors::ChangeMap;
use crate::error::{Error, Result};

/// Scores of the changed and unchanged pixels.
pub fn split_by_class(scores: &ChangeMap, truth: &BinaryMask) -> Result<(Vec<f64>, Vec<f64>)> {
    if (scores.height(), scores.width()) != (truth.height(), truth.width()) {
        return Err(Error::Mismatch(format!(
            "score map is {}x{}, mask is {}x{}",
            scores.height(),
            scores.width(),
            truth.height(),
            truth.width()
        )));
    }
    let mut changed = Vec::new();
    let mut unchanged = Vec::new();
    for (&s, &l) in scores.scores().iter().zip(truth.labels()) {
        match l {
            BinaryMask::CHANGED => changed.push(s),
            BinaryMask::UNCHANGED => unchanged.push(s),
            _ => {}
        }
    }
    if changed.is_empty() {
        return Err(Error::EmptyClass("changed"));
    }
    if unchanged.is_empty() {
        return Err(Error::EmptyClass("unchanged"));
    }
    Ok((changed, unchanged))
}

/// ROC curve from `(0, 0)` to `(1, 1)`. `thresholds[i]` is the score
/// threshold of `points[i]` (a pixel is called changed when its score is
/// `≥` the threshold); the first threshold is `+∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
    pub thresholds: Vec<f64>,
}

impl RocCurve {
    /// `threshold,fpr,tpr` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold,fpr,tpr\n");
        for (t, (fpr, tpr)) in self.thresholds.iter().zip(&self.points) {
            out.push_str(&format!("{t},{fpr},{tpr}\n"));
        }
        out
    }
}

/// Exact ROC over every distinct score value.
pub fn roc_curve(scores: &ChangeMap, truth: &BinaryMask) -> Result<RocCurve> {
    let (changed, unchanged) = split_by_class(scores, truth)?;
    let (npos, nneg) = (changed.len() as f64, unchanged.len() as f64);
    let mut labeled: Vec<(f64, bool)> = changed
        .into_iter()
        .map(|s| (s, true))
        .chain(unchanged.into_iter().map(|s| (s, false)))
        .collect();
    labeled.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut points = vec![(0.0, 0.0)];
    let mut thresholds = vec![f64::INFINITY];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < labeled.len() {
        let t = labeled[i].0;
        while i < labeled.len() && labeled[i].0 == t {
            if labeled[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((fp as f64 / nneg, tp as f64 / npos));
        thresholds.push(t);
    }
    Ok(RocCurve { points, thresholds })
}

/// Trapezoidal area under the curve.
pub fn auc(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) * 0.5)
        .sum()
}

/// Percentiles 0, 20, 50, 80 and 100 of one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxStats {
    pub p0: f64,
    pub p20: f64,
    pub p50: f64,
    pub p80: f64,
    pub p100: f64,
}

impl BoxStats {
    pub fn from_scores(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parameter("no values".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self {
            p0: percentile_sorted(&values, 0.0),
            p20: percentile_sorted(&values, 20.0),
            p50: percentile_sorted(&values, 50.0),
            p80: percentile_sorted(&values, 80.0),
            p100: percentile_sorted(&values, 100.0),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparabilityStats {
    pub changed: BoxStats,
    pub unchanged: BoxStats,
}

impl SeparabilityStats {
    /// Distance between the changed box's 20th percentile and the unchanged
    /// box's 80th percentile; positive when the boxes do not overlap.
    pub fn box_gap(&self) -> f64 {
        self.changed.p20 - self.unchanged.p80
    }
}

pub fn separability(scores: &ChangeMap, truth: &BinaryMask) -> Result<SeparabilityStats> {
    let (changed, unchanged) = split_by_class(scores, truth)?;
    Ok(SeparabilityStats {
        changed: BoxStats::from_scores(changed)?,
        unchanged: BoxStats::from_scores(unchanged)?,
    })
}

/// Linear-interpolation percentile of ascending `sorted`, position
/// `h = (n − 1)·q/100`.
pub fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 100.0) / 100.0;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(v: &[f64]) -> ChangeMap {
        ChangeMap::new(1, v.len(), v.to_vec()).unwrap()
    }

    fn mask(v: &[u8]) -> BinaryMask {
        BinaryMask::new(1, v.len(), v.to_vec()).unwrap()
    }

    #[test]
    fn perfect_separation() {
        let c = roc_curve(&map(&[0.1, 0.2, 0.8, 0.9]), &mask(&[0, 0, 1, 1])).unwrap();
        assert!(c.points.contains(&(0.0, 1.0)));
        assert_eq!(auc(&c), 1.0);
    }

    #[test]
    fn tied_scores_give_diagonal() {
        let c = roc_curve(&map(&[0.3; 6]), &mask(&[0, 1, 0, 1, 1, 0])).unwrap();
        assert_eq!(c.points, [(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(auc(&c), 0.5);
    }

    #[test]
    fn ignore_label_excluded() {
        let c = roc_curve(&map(&[0.1, 100.0, 0.9]), &mask(&[0, 255, 1])).unwrap();
        assert_eq!(auc(&c), 1.0);
        assert_eq!(c.thresholds, [f64::INFINITY, 0.9, 0.1]);
    }

    #[test]
    fn empty_class_named() {
        assert!(matches!(
            roc_curve(&map(&[0.1, 0.2]), &mask(&[0, 0])),
            Err(Error::EmptyClass("changed"))
        ));
        assert!(matches!(
            separability(&map(&[0.1, 0.2]), &mask(&[1, 255])),
            Err(Error::EmptyClass("unchanged"))
        ));
    }

    #[test]
    fn percentiles() {
        let b = BoxStats::from_scores(vec![5.0, 3.0, 1.0, 4.0, 2.0]).unwrap();
        assert_eq!(b.p0, 1.0);
        assert!((b.p20 - 1.8).abs() < 1e-12);
        assert_eq!(b.p50, 3.0);
        assert!((b.p80 - 4.2).abs() < 1e-12);
        assert_eq!(b.p100, 5.0);
    }

    #[test]
    fn two_level_boxes() {
        let s = separability(&map(&[0.0, 0.0, 1.0, 1.0]), &mask(&[0, 0, 1, 1])).unwrap();
        assert_eq!((s.unchanged.p0, s.unchanged.p100), (0.0, 0.0));
        assert_eq!((s.changed.p0, s.changed.p100), (1.0, 1.0));
        assert_eq!(s.box_gap(), 1.0);
    }

    #[test]
    fn csv_layout() {
        let c = roc_curve(&map(&[0.5, 1.5]), &mask(&[0, 1])).unwrap();
        assert_eq!(c.to_csv(), "threshold,fpr,tpr\ninf,0,0\n1.5,0,1\n0.5,1,1\n");
    }
}
