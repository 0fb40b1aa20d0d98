use super::{check_pair, ChangeMap};
use crate::datacube::HyperCube;
use crate::error::Result;

fn pixelwise(
    y1: &HyperCube,
    y2: &HyperCube,
    f: impl Fn(&[f64], &[f64]) -> f64,
) -> Result<ChangeMap> {
    check_pair(y1, y2)?;
    let scores = (0..y1.pixel_count())
        .map(|p| f(y1.pixel(p), y2.pixel(p)))
        .collect();
    ChangeMap::new(y1.height(), y1.width(), scores)
}

/// Absolute distance, `Σ_b |y1 − y2|`.
pub fn baseline_ad(y1: &HyperCube, y2: &HyperCube) -> Result<ChangeMap> {
    pixelwise(y1, y2, |a, b| {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
    })
}

/// Euclidean distance, `√Σ_b (y1 − y2)²`.
pub fn baseline_ed(y1: &HyperCube, y2: &HyperCube) -> Result<ChangeMap> {
    pixelwise(y1, y2, |a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    })
}

/// Absolute average difference, `|mean_b (y1 − y2)|`.
pub fn baseline_aad(y1: &HyperCube, y2: &HyperCube) -> Result<ChangeMap> {
    pixelwise(y1, y2, |a, b| {
        (a.iter().zip(b).map(|(x, y)| x - y).sum::<f64>() / a.len() as f64).abs()
    })
}
