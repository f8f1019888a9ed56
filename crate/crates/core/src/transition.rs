//! Empirical SAT/UNSAT transition experiments.
//!
//! Sweep the clause count m for fixed N, draw seeded random instances
//! at each point, and record the fraction that are satisfiable. The
//! resulting curve falls from near 1 to near 0 through a narrow window
//! around m/N a little above 4, and comparing it against the tiling
//! models' survival curves on the shared ratio axis is the point of
//! this module.

use crate::rng::derive_seed;
use crate::sat::Instance;
use crate::solver::{solve, OrderingStrategy};
use crate::tiling::CurvePoint;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;
use thiserror::Error;

/// Exhaustive verdicts in a sweep stay below this width.
pub const ORACLE_MAX_VARS: u32 = 20;

/// Errors from transition sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum TransitionError {
    /// Random instances need at least three variables.
    #[error("sweeps need at least {min} variables, got {n_vars}")]
    WidthTooSmall {
        /// Requested width.
        n_vars: u32,
        /// Minimum supported.
        min: u32,
    },
    /// The chosen engine cannot handle the width.
    #[error("width {n_vars} exceeds the engine limit {max}")]
    WidthTooLarge {
        /// Requested width.
        n_vars: u32,
        /// The engine's cap.
        max: u32,
    },
    /// No pair of adjacent points straddles the level.
    #[error("curve does not bracket level {level}")]
    LevelNotBracketed {
        /// The level that was asked for.
        level: f64,
    },
}

/// Which decision procedure judges each instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveEngine {
    /// Carve clause cubes into a trie and test fullness.
    Trie,
    /// Exhaustive assignment search with early exit.
    Oracle,
}

/// One sweep point: `trials` instances at clause count `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionPoint {
    /// Clause count.
    pub m: usize,
    /// m divided by the variable count.
    pub ratio: f64,
    /// Instances drawn.
    pub trials: u32,
    /// How many were satisfiable.
    pub sat_count: u32,
    /// `sat_count / trials`.
    pub sat_fraction: f64,
}

/// A full sweep over clause counts at fixed width.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionCurve {
    /// Variable count shared by every instance.
    pub n_vars: u32,
    /// Master seed the per-instance streams derive from.
    pub seed: u64,
    /// Points in sweep order.
    pub points: Vec<TransitionPoint>,
}

/// The standard sweep grid: `round(r * n)` for r = 1.0, 1.5, ..., 8.0.
pub fn default_m_range(n_vars: u32) -> Vec<usize> {
    (2..=16)
        .map(|half| {
            let r = half as f64 / 2.0;
            // Round half up; exact for this grid and free of std floats.
            (r * n_vars as f64 + 0.5) as usize
        })
        .collect()
}

/// Sweeps `m_range`, drawing `trials_per_m` instances per point.
///
/// Instance (m, trial) uses the seed `derive_seed(seed, m, trial)`, so
/// any point, and any single trial, can be regenerated independently
/// of the rest of the sweep.
pub fn compute_transition(
    n_vars: u32,
    m_range: &[usize],
    trials_per_m: u32,
    seed: u64,
    engine: SolveEngine,
) -> Result<TransitionCurve, TransitionError> {
    if n_vars < 3 {
        return Err(TransitionError::WidthTooSmall { n_vars, min: 3 });
    }
    let cap = match engine {
        SolveEngine::Trie => crate::MAX_COUNT_WIDTH,
        SolveEngine::Oracle => ORACLE_MAX_VARS,
    };
    if n_vars > cap {
        return Err(TransitionError::WidthTooLarge { n_vars, max: cap });
    }
    assert!(!m_range.is_empty(), "sweep needs at least one clause count");
    assert!(trials_per_m > 0, "sweep needs at least one trial");
    let mut points = Vec::with_capacity(m_range.len());
    for &m in m_range {
        let mut sat_count = 0u32;
        for trial in 0..trials_per_m {
            let inst_seed = derive_seed(seed, m as u64, trial as u64);
            let inst = Instance::random(n_vars, m, inst_seed).expect("width validated");
            let satisfiable = match engine {
                SolveEngine::Trie => {
                    solve(&inst, &OrderingStrategy::AsGiven, 0)
                        .expect("width validated")
                        .satisfiable
                }
                SolveEngine::Oracle => inst.brute_force_sat().expect("width validated"),
            };
            if satisfiable {
                sat_count += 1;
            }
        }
        points.push(TransitionPoint {
            m,
            ratio: m as f64 / n_vars as f64,
            trials: trials_per_m,
            sat_count,
            sat_fraction: sat_count as f64 / trials_per_m as f64,
        });
    }
    Ok(TransitionCurve {
        n_vars,
        seed,
        points,
    })
}

/// The m/n ratio where the curve crosses `level`, linearly interpolated
/// between the first adjacent pair of points straddling it.
pub fn crossing_point(curve: &TransitionCurve, level: f64) -> Result<f64, TransitionError> {
    for pair in curve.points.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.sat_fraction == level {
            return Ok(a.ratio);
        }
        if (a.sat_fraction > level) != (b.sat_fraction > level) {
            let span = b.sat_fraction - a.sat_fraction;
            let frac = (level - a.sat_fraction) / span;
            return Ok(a.ratio + frac * (b.ratio - a.ratio));
        }
    }
    if let Some(last) = curve.points.last() {
        if last.sat_fraction == level {
            return Ok(last.ratio);
        }
    }
    Err(TransitionError::LevelNotBracketed { level })
}

/// Least-squares nonincreasing fit by pooling adjacent violators;
/// used to strip sampling noise before monotonicity checks.
pub fn isotonic_nonincreasing(values: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() >= 2 {
            let (top_sum, top_n) = blocks[blocks.len() - 1];
            let (below_sum, below_n) = blocks[blocks.len() - 2];
            if top_sum / top_n as f64 <= below_sum / below_n as f64 {
                break;
            }
            blocks.pop();
            let last = blocks.len() - 1;
            blocks[last] = (below_sum + top_sum, below_n + top_n);
        }
    }
    let mut out = Vec::with_capacity(values.len());
    for (sum, n) in blocks {
        let mean = sum / n as f64;
        out.extend(core::iter::repeat_n(mean, n));
    }
    out
}

/// Model value at `ratio`, interpolated on the `m_over_n` axis.
fn model_at(model: &[CurvePoint], ratio: f64) -> Option<f64> {
    let first = model.first()?;
    if ratio < first.m_over_n {
        return None;
    }
    for pair in model.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if ratio <= b.m_over_n {
            let span = b.m_over_n - a.m_over_n;
            let frac = if span == 0.0 { 0.0 } else { (ratio - a.m_over_n) / span };
            let da = a.d_value?;
            let db = b.d_value?;
            return Some(da + frac * (db - da));
        }
    }
    if model.len() == 1 && ratio == first.m_over_n {
        return first.d_value;
    }
    None
}

/// Joins an empirical curve with a model survival curve on the shared
/// ratio axis and emits CSV rows per empirical point; model columns
/// stay empty where the model does not reach.
pub fn compare_with_model(curve: &TransitionCurve, model: &[CurvePoint]) -> String {
    let mut out = String::from("ratio,sat_fraction,model_d,diff\n");
    for point in &curve.points {
        let _ = write!(out, "{},{}", point.ratio, point.sat_fraction);
        match model_at(model, point.ratio) {
            Some(d) => {
                let _ = writeln!(out, ",{},{}", d, point.sat_fraction - d);
            }
            None => out.push_str(",,\n"),
        }
    }
    out
}

/// Renders a sweep as CSV with a header row.
pub fn curve_to_csv(curve: &TransitionCurve) -> String {
    let mut out = String::from("n_vars,m,ratio,trials,sat_count,sat_fraction\n");
    for p in &curve.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            curve.n_vars, p.m, p.ratio, p.trials, p.sat_count, p.sat_fraction
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling;
    use alloc::vec;

    fn synthetic(points: &[(f64, f64)]) -> TransitionCurve {
        TransitionCurve {
            n_vars: 4,
            seed: 0,
            points: points
                .iter()
                .map(|&(ratio, sat_fraction)| TransitionPoint {
                    m: (ratio * 4.0) as usize,
                    ratio,
                    trials: 100,
                    sat_count: (sat_fraction * 100.0) as u32,
                    sat_fraction,
                })
                .collect(),
        }
    }

    #[test]
    fn crossing_interpolates_between_straddling_points() {
        let curve = synthetic(&[(4.0, 0.6), (4.5, 0.4)]);
        assert_eq!(crossing_point(&curve, 0.5).unwrap(), 4.25);
    }

    #[test]
    fn crossing_lands_on_exact_points() {
        let curve = synthetic(&[(3.0, 0.9), (4.0, 0.5), (5.0, 0.1)]);
        assert_eq!(crossing_point(&curve, 0.5).unwrap(), 4.0);
        assert_eq!(crossing_point(&curve, 0.9).unwrap(), 3.0);
        assert_eq!(crossing_point(&curve, 0.1).unwrap(), 5.0);
    }

    #[test]
    fn unreached_levels_are_reported() {
        let curve = synthetic(&[(3.0, 0.9), (4.0, 0.6)]);
        assert_eq!(
            crossing_point(&curve, 0.5),
            Err(TransitionError::LevelNotBracketed { level: 0.5 })
        );
    }

    #[test]
    fn default_grid_spans_one_to_eight() {
        let grid = default_m_range(12);
        assert_eq!(
            grid,
            vec![12, 18, 24, 30, 36, 42, 48, 54, 60, 66, 72, 78, 84, 90, 96]
        );
        assert!(default_m_range(3).windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sweeps_reproduce_by_seed() {
        let a = compute_transition(6, &[6, 24], 20, 7, SolveEngine::Trie).unwrap();
        let b = compute_transition(6, &[6, 24], 20, 7, SolveEngine::Trie).unwrap();
        assert_eq!(a, b);
        let c = compute_transition(6, &[6, 24], 20, 8, SolveEngine::Trie).unwrap();
        assert!(a != c);
    }

    #[test]
    fn engines_agree_point_by_point() {
        let trie = compute_transition(7, &[7, 21, 35], 40, 3, SolveEngine::Trie).unwrap();
        let oracle = compute_transition(7, &[7, 21, 35], 40, 3, SolveEngine::Oracle).unwrap();
        assert_eq!(trie.points, oracle.points);
    }

    #[test]
    fn density_extremes_behave() {
        let curve = compute_transition(10, &[10, 80], 100, 42, SolveEngine::Trie).unwrap();
        assert!(curve.points[0].sat_fraction >= 0.95, "{:?}", curve.points[0]);
        assert!(curve.points[1].sat_fraction <= 0.05, "{:?}", curve.points[1]);
    }

    #[test]
    fn isotonic_fit_pools_violators() {
        let fitted = isotonic_nonincreasing(&[1.0, 0.8, 0.85, 0.2]);
        assert_eq!(fitted, vec![1.0, 0.825, 0.825, 0.2]);
        let already = [0.9, 0.5, 0.5, 0.1];
        assert_eq!(isotonic_nonincreasing(&already), already.to_vec());
        for w in isotonic_nonincreasing(&[0.2, 0.9, 0.1, 0.8, 0.3]).windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn model_comparison_joins_on_the_ratio_axis() {
        let curve = synthetic(&[(1.0, 1.0), (2.0, 0.5)]);
        // A model curve matching the empirical values exactly.
        let model: Vec<tiling::CurvePoint> = tiling::d_curve_lattice(4, 200)
            .unwrap()
            .into_iter()
            .collect();
        let csv = compare_with_model(&curve, &model);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "ratio,sat_fraction,model_d,diff");
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "1");
        assert_eq!(row[1], "1");
        let model_d: f64 = row[2].parse().unwrap();
        let diff: f64 = row[3].parse().unwrap();
        assert!((1.0 - model_d - diff).abs() < 1e-12);

        let empty = compare_with_model(&curve, &[]);
        assert_eq!(empty.lines().nth(1).unwrap(), "1,1,,");
    }

    #[test]
    fn sweep_csv_shape() {
        let curve = compute_transition(5, &[5, 15], 10, 1, SolveEngine::Oracle).unwrap();
        let csv = curve_to_csv(&curve);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n_vars,m,ratio,trials,sat_count,sat_fraction"
        );
        assert!(lines.next().unwrap().starts_with("5,5,1,10,"));
        assert!(lines.next().unwrap().starts_with("5,15,3,10,"));
    }

    #[test]
    fn width_guards() {
        assert_eq!(
            compute_transition(2, &[4], 5, 0, SolveEngine::Trie),
            Err(TransitionError::WidthTooSmall { n_vars: 2, min: 3 })
        );
        assert_eq!(
            compute_transition(21, &[40], 5, 0, SolveEngine::Oracle),
            Err(TransitionError::WidthTooLarge {
                n_vars: 21,
                max: 20
            })
        );
        assert!(compute_transition(21, &[40], 1, 0, SolveEngine::Trie).is_ok());
    }
}
