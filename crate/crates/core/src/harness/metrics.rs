use serde::{Deserialize, Serialize};

use crate::solver::SingleRun;

pub const MILLIHARTREE_PER_HARTREE: f64 = 1000.0;

pub fn to_mh(hartree: f64) -> f64 {
    hartree * MILLIHARTREE_PER_HARTREE
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Mean |E_M[k] − E_ref[k]| after sorting both lists ascending (Hartree).
pub fn k_matched_error(method: &[f64], reference: &[f64]) -> f64 {
    let m = sorted(method);
    let r = sorted(reference);
    if m.is_empty() {
        return 0.0;
    }
    m.iter().zip(&r).map(|(a, b)| (a - b).abs()).sum::<f64>() / m.len() as f64
}

/// Method energies in ascending order each claim the closest unclaimed
/// reference energy; returns the mean distance (Hartree) and the claims.
pub fn nearest_unique_error(method: &[f64], reference: &[f64]) -> (f64, Vec<usize>) {
    let m = sorted(method);
    let mut claimed = vec![false; reference.len()];
    let mut picks = Vec::with_capacity(m.len());
    let mut total = 0.0;
    for e in &m {
        let best = (0..reference.len())
            .filter(|&j| !claimed[j])
            .min_by(|&a, &b| (reference[a] - e).abs().total_cmp(&(reference[b] - e).abs()));
        if let Some(j) = best {
            claimed[j] = true;
            total += (reference[j] - e).abs();
            picks.push(j);
        }
    }
    let mean = if picks.is_empty() { 0.0 } else { total / picks.len() as f64 };
    (mean, picks)
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (0.0, 0.0);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Statistics of one strategy over a full run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub strategy: String,
    pub states: usize,
    pub converged: usize,
    pub variance_below_1e5: usize,
    pub mean_log10_variance: f64,
    pub std_log10_variance: f64,
    pub mean_iterations: f64,
    pub std_iterations: f64,
    pub duplicates: usize,
    pub k_matched_error_mh: f64,
    pub nearest_unique_error_mh: f64,
}

/// Variances are floored at 1e-16 before taking logarithms.
pub fn summarize(strategy: &str, runs: &[SingleRun], fci: &[f64]) -> StrategySummary {
    let logs: Vec<f64> = runs.iter().map(|r| r.record.variance.max(1e-16).log10()).collect();
    let iters: Vec<f64> = runs.iter().map(|r| r.record.total_iterations as f64).collect();
    let energies: Vec<f64> = runs.iter().map(|r| r.record.energy).collect();
    let (ml, sl) = mean_std(&logs);
    let (mi, si) = mean_std(&iters);
    StrategySummary {
        strategy: strategy.to_string(),
        states: runs.len(),
        converged: runs.iter().filter(|r| r.record.converged).count(),
        variance_below_1e5: runs.iter().filter(|r| r.record.variance < 1e-5).count(),
        mean_log10_variance: ml,
        std_log10_variance: sl,
        mean_iterations: mi,
        std_iterations: si,
        duplicates: runs.iter().filter(|r| r.record.duplicate_of.is_some()).count(),
        k_matched_error_mh: to_mh(k_matched_error(&energies, fci)),
        nearest_unique_error_mh: to_mh(nearest_unique_error(&energies, fci).0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn millihartree_factor() {
        assert!((to_mh(-2.1239 - (-2.1249)) - 1.0).abs() < 1e-9);
        assert_eq!(to_mh(0.25), 250.0);
    }

    #[test]
    fn greedy_matching_without_replacement() {
        let fci = [-2.0, -1.9, -1.8, -1.0];
        // Both states sit near -1.9; the second must take the next closest.
        let method = [-1.9, -1.89];
        assert!((k_matched_error(&method, &fci) - 0.055).abs() < 1e-12);
        let (e, picks) = nearest_unique_error(&method, &fci);
        assert_eq!(picks, vec![1, 2]);
        assert!((e - 0.045).abs() < 1e-12);
    }

    #[test]
    fn exact_match_is_zero() {
        let fci = [-1.0, -0.5, 0.0];
        assert_eq!(k_matched_error(&fci, &fci), 0.0);
        assert_eq!(nearest_unique_error(&[-0.5, -1.0], &fci).0, 0.0);
    }
}
