//! Prominence-filtered local maxima of sampled curves.
//!
//! The caller must sample finely enough that the narrowest feature of
//! interest spans at least five grid points.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub omega_peak: f64,
    pub height: f64,
    pub prominence: f64,
    #[serde(skip)]
    pub index: usize,
}

/// Height above the higher of the two bases, where each base is the lowest
/// point between the peak and the nearest strictly higher sample on that
/// side (or the grid edge).
pub fn prominence(values: &[f64], i: usize) -> f64 {
    let h = values[i];
    let mut left_min = h;
    for &v in values[..i].iter().rev() {
        if v > h {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = h;
    for &v in &values[i + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

/// Strict interior local maxima whose prominence is at least
/// `prominence_frac` times the global maximum, sorted by grid position.
pub fn find_peaks(grid: &[f64], values: &[f64], prominence_frac: f64) -> Vec<Peak> {
    assert_eq!(grid.len(), values.len(), "grid and values differ in length");
    let global = values.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    if values.len() < 3 || !global.is_finite() {
        return Vec::new();
    }
    let threshold = prominence_frac * global;
    let mut peaks: Vec<Peak> = (1..values.len() - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .filter_map(|i| {
            let p = prominence(values, i);
            (p >= threshold).then_some(Peak { omega_peak: grid[i], height: values[i], prominence: p, index: i })
        })
        .collect();
    peaks.sort_by(|a, b| a.omega_peak.total_cmp(&b.omega_peak));
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lorentz(w: f64, w0: f64, width: f64) -> f64 {
        1.0 / ((w - w0).powi(2) + width * width)
    }

    #[test]
    fn single_lorentzian() {
        let grid: Vec<f64> = (0..=1000).map(|k| k as f64 * 0.002).collect();
        let v: Vec<f64> = grid.iter().map(|&w| lorentz(w, 0.8, 0.05)).collect();
        let p = find_peaks(&grid, &v, 0.01);
        assert_eq!(p.len(), 1);
        assert!((p[0].omega_peak - 0.8).abs() < 1e-12);
        assert!(p[0].prominence > 0.9 * p[0].height);
    }

    #[test]
    fn shoulder_without_dip_is_not_a_peak() {
        let v = [0.0, 1.0, 2.0, 2.0, 3.0, 1.0, 0.0];
        let grid: Vec<f64> = (0..7).map(|k| k as f64).collect();
        let p = find_peaks(&grid, &v, 0.0);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].index, 4);
    }

    #[test]
    fn small_ripple_filtered_by_prominence() {
        let grid: Vec<f64> = (0..=2000).map(|k| k as f64 * 0.001).collect();
        let v: Vec<f64> = grid
            .iter()
            .map(|&w| lorentz(w, 0.5, 0.02) + lorentz(w, 1.5, 0.02) + 1e-3 * (w * 300.0).sin())
            .collect();
        let p = find_peaks(&grid, &v, 0.01);
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn prominence_uses_higher_base() {
        let v = [0.0, 5.0, 1.0, 3.0, 2.0, 4.0, 0.0];
        // peak at 3 is bounded by 5 on the left and 4 on the right
        assert_eq!(prominence(&v, 3), 1.0);
        assert_eq!(prominence(&v, 1), 5.0);
        assert_eq!(prominence(&v, 5), 3.0);
    }

    #[test]
    fn edges_are_never_peaks() {
        let v = [3.0, 1.0, 0.5, 1.0, 4.0];
        let grid = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert!(find_peaks(&grid, &v, 0.0).is_empty());
    }
}
