use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;

use super::{check_pair, ChangeMap};
use crate::datacube::HyperCube;
use crate::error::Result;

const NEIGHBORS: [(isize, isize); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// `arctan(cos²θ)` for the angle θ between two spectra, in `[0, π/4]`.
/// Zero spectra get weight 0.
pub fn spectral_angle_weight(x: &[f64], y: &[f64]) -> f64 {
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let nx = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let ny = y.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nx == 0.0 || ny == 0.0 {
        return 0.0;
    }
    let cos = dot / (nx * ny);
    (cos * cos).min(1.0).atan().min(FRAC_PI_4)
}

/// For each pixel, `‖Σ_j (y_j² − x_j²)‖₂ · W(x_i, y_i)` where `x_j`, `y_j`
/// run over the eight neighbours in `t1` and `t2` (squares taken per band)
/// and `W` is the spectral-angle weight of the centre pixel. Neighbours
/// outside the image are replaced by the nearest edge pixel.
pub fn neighborhood_detector(t1: &HyperCube, t2: &HyperCube) -> Result<ChangeMap> {
    check_pair(t1, t2)?;
    let (h, w, d) = t1.dims();
    let clamp = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;
    let scores: Vec<f64> = (0..h * w)
        .into_par_iter()
        .map_init(
            || vec![0.0; d],
            |acc, p| {
                let (r, c) = ((p / w) as isize, (p % w) as isize);
                acc.fill(0.0);
                for (dr, dc) in NEIGHBORS {
                    let (nr, nc) = (clamp(r + dr, h), clamp(c + dc, w));
                    let x = t1.spectrum(nr, nc);
                    let y = t2.spectrum(nr, nc);
                    for ((a, xv), yv) in acc.iter_mut().zip(x).zip(y) {
                        *a += yv * yv - xv * xv;
                    }
                }
                let norm = acc.iter().map(|v| v * v).sum::<f64>().sqrt();
                norm * spectral_angle_weight(t1.pixel(p), t2.pixel(p))
            },
        )
        .collect();
    ChangeMap::new(h, w, scores)
}
