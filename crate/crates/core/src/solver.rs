//! Colorful Carathéodory pivoting: find one vector per color class whose
//! convex hull contains the origin.
//!
//! Every class of a [`MapTable`] sums to zero, so the origin lies in each
//! class hull and a colorful simplex containing it exists whenever there are
//! more classes than dimensions. The search keeps one chosen vector per
//! class and the nearest point `z` of their hull to the origin. While `z ≠ 0`
//! some class is not in the corral of `z`; swapping its choice for the class
//! member minimizing `⟨p, z⟩` (which is `≤ 0` since the class sums to zero)
//! strictly shrinks `‖z‖`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{dot, norm};
use crate::hull::{nearest_point_in_hull, WarmStart};
use crate::reduction::MapTable;

/// Default residual below which the hull is taken to contain the origin.
pub const EPS_ZERO: f64 = 1e-9;
/// Smallest accepted decrease of `‖z‖` per pivot.
pub const MIN_DECREASE: f64 = 1e-15;

const PRECONDITION_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub max_iter: usize,
    pub seed: u64,
    pub eps_zero: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iter: 20_000,
            seed: 0,
            eps_zero: EPS_ZERO,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Zero,
    MaxIterations,
    PreconditionFailed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColorfulSelection {
    /// Chosen group element index per class.
    pub chosen: Vec<usize>,
    /// Hull weights per class, a probability vector.
    pub weights: Vec<f64>,
    /// `‖Σ_j t_j A(v_j^{g_j})‖`.
    pub residual: f64,
}

/// `‖z‖` after one hull solve; `segment` counts restarts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceStep {
    pub segment: usize,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub iterations: usize,
    pub pivots: usize,
    pub restarts: usize,
    pub final_residual: f64,
    pub status: SolverStatus,
    #[serde(skip)]
    pub trace: Vec<TraceStep>,
}

impl SolverReport {
    /// Whether `‖z‖` fell by at least [`MIN_DECREASE`] at every pivot within
    /// each restart segment.
    pub fn is_monotone(&self) -> bool {
        self.trace
            .windows(2)
            .filter(|w| w[0].segment == w[1].segment)
            .all(|w| w[1].norm <= w[0].norm - MIN_DECREASE || w[1].norm <= EPS_ZERO * 1e-3)
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub selection: ColorfulSelection,
    pub report: SolverReport,
}

pub fn solve(table: &MapTable, options: &SolverOptions) -> SolveOutcome {
    let classes = table.classes();
    let scale = classes
        .iter()
        .flatten()
        .map(|v| norm(v))
        .fold(1.0, f64::max);
    let worst = table.worst_class_sum();
    let mut report = SolverReport {
        iterations: 0,
        pivots: 0,
        restarts: 0,
        final_residual: f64::INFINITY,
        status: SolverStatus::PreconditionFailed,
        trace: Vec::new(),
    };
    let empty = ColorfulSelection {
        chosen: vec![0; classes.len()],
        weights: vec![0.0; classes.len()],
        residual: f64::INFINITY,
    };
    if worst > PRECONDITION_TOL * scale {
        return SolveOutcome {
            selection: empty,
            report,
        };
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let fresh = |rng: &mut ChaCha8Rng| -> Vec<usize> {
        classes.iter().map(|c| rng.random_range(0..c.len())).collect()
    };
    let mut chosen = fresh(&mut rng);
    let mut warm: Option<WarmStart> = None;
    let mut previous = f64::INFINITY;
    let mut segment = 0;
    let mut segment_pivots = 0;
    let segment_budget = (options.max_iter / 4).max(1);
    let mut best = empty;

    while report.iterations < options.max_iter {
        report.iterations += 1;
        let points: Vec<Vec<f64>> = chosen
            .iter()
            .enumerate()
            .map(|(j, &g)| classes[j][g].clone())
            .collect();
        let hull = nearest_point_in_hull(&points, warm.as_ref()).expect("classes share one dimension");
        let weights = hull.weights;
        let residual = norm(&table.weighted_sum(&chosen, &weights));
        let z = hull.point;
        let zn = norm(&z);
        report.trace.push(TraceStep { segment, norm: zn });
        if residual < best.residual {
            best = ColorfulSelection {
                chosen: chosen.clone(),
                weights: weights.clone(),
                residual,
            };
        }
        if residual <= options.eps_zero {
            report.final_residual = residual;
            report.status = SolverStatus::Zero;
            return SolveOutcome {
                selection: best,
                report,
            };
        }

        let improved = zn <= previous - MIN_DECREASE;
        // most negative ⟨p, z⟩ over classes outside the corral
        let pivot = improved.then(|| {
            (0..classes.len())
                .filter(|&j| weights[j] == 0.0)
                .flat_map(|j| (0..classes[j].len()).map(move |g| (j, g)))
                .map(|(j, g)| (j, g, dot(&classes[j][g], &z)))
                .min_by(|a, b| a.2.total_cmp(&b.2))
        });
        match pivot.flatten() {
            Some((j, g, value)) if value < zn * zn && segment_pivots < segment_budget => {
                chosen[j] = g;
                let corral: Vec<usize> = (0..classes.len()).filter(|&k| weights[k] > 0.0).collect();
                warm = Some(WarmStart {
                    weights: corral.iter().map(|&k| weights[k]).collect(),
                    corral,
                });
                previous = zn;
                report.pivots += 1;
                segment_pivots += 1;
            }
            _ => {
                segment += 1;
                report.restarts += 1;
                segment_pivots = 0;
                chosen = fresh(&mut rng);
                warm = None;
                previous = f64::INFINITY;
            }
        }
    }
    report.final_residual = best.residual;
    report.status = SolverStatus::MaxIterations;
    SolveOutcome {
        selection: best,
        report,
    }
}
