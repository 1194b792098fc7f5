//! Exhaustive ground truth for small instances.
//!
//! Every surjective labeling of the points by group elements is tested with
//! a linear program in the point weights: each killed coefficient of the
//! labeled parts must vanish and each part's weights must sum to one. A
//! feasible labeling counts only if some feasible point keeps a leading
//! coefficient away from zero, which four LPs per leading coordinate decide
//! (maximize `±Re` and `±Im`).
//!
//! Translating every label by a fixed element maps solutions to solutions,
//! so by default the first point is pinned to label `0`.

use rayon::prelude::*;

use crate::engine::PartitionResult;
use crate::error::{Error, Result};
use crate::fourier::GroupElement;
use crate::geometry::{certify_polytope, generate_points, PointCloud, Tolerances};
use crate::lp::{LinearProgram, LpOutcome, EPS_FEAS};
use crate::problem::{ProblemKind, ProblemSetup};
use crate::solver::{SolverReport, SolverStatus};

/// Largest point count the enumerator accepts.
pub const MAX_POINTS: usize = 12;
/// Largest group order the enumerator accepts.
pub const MAX_GROUP_ORDER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Pin the first point's label to `0`.
    pub dedup: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { dedup: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LabelingVerdict {
    Infeasible,
    /// Feasible, but every feasible point kills a leading coefficient.
    Degenerate,
    /// Feasible and nondegenerate; `weights` is the feasible point with the
    /// largest leading coefficient found.
    Feasible { weights: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleOutcome {
    pub found: bool,
    /// The first passing labeling in enumeration order.
    pub labeling: Option<Vec<usize>>,
    pub example: Option<PartitionResult>,
    pub labelings_checked: usize,
}

pub fn polytopal_partition_exists(
    cloud: &PointCloud,
    kind: &ProblemKind,
    options: OracleOptions,
) -> Result<OracleOutcome> {
    let setup = ProblemSetup::new(kind, cloud)?;
    let mut outcome = enumerate(&setup, options)?;
    if let (Some(labeling), true) = (&outcome.labeling, outcome.found) {
        let full: Vec<Option<usize>> = labeling.iter().copied().map(Some).collect();
        if let LabelingVerdict::Feasible { weights } = check_labeling(&setup, &full) {
            outcome.example = Some(example(cloud, &setup, labeling, &weights)?);
        }
    }
    Ok(outcome)
}

/// Whether some labeling makes every nontrivial coefficient of every raw
/// coordinate vanish, i.e. a Tverberg `r`-partition exists.
pub fn tverberg_partition_exists(cloud: &PointCloud, r: usize, options: OracleOptions) -> Result<OracleOutcome> {
    enumerate(&ProblemSetup::tverberg(cloud, r)?, options)
}

fn enumerate(setup: &ProblemSetup, options: OracleOptions) -> Result<OracleOutcome> {
    let n = setup.target.group().order();
    let points = setup.values.len();
    if points > MAX_POINTS || n > MAX_GROUP_ORDER {
        return Err(Error::EnumerationBound(format!(
            "{points} points over a group of order {n}; the oracle handles at most {MAX_POINTS} points and order {MAX_GROUP_ORDER}"
        )));
    }
    let mut checked = 0;
    for labeling in Surjections::new(points, n, options.dedup) {
        checked += 1;
        let full: Vec<Option<usize>> = labeling.iter().copied().map(Some).collect();
        if matches!(check_labeling(setup, &full), LabelingVerdict::Feasible { .. }) {
            return Ok(OracleOutcome {
                found: true,
                labeling: Some(labeling),
                example: None,
                labelings_checked: checked,
            });
        }
    }
    Ok(OracleOutcome {
        found: false,
        labeling: None,
        example: None,
        labelings_checked: checked,
    })
}

/// Tests one labeling; `None` leaves a point out (its weight is zero).
pub fn check_labeling(setup: &ProblemSetup, labeling: &[Option<usize>]) -> LabelingVerdict {
    let target = &setup.target;
    let group = target.group();
    let n = group.order();
    let vars: Vec<(usize, usize)> = labeling
        .iter()
        .enumerate()
        .filter_map(|(j, g)| g.map(|g| (j, g)))
        .collect();
    if vars.iter().any(|&(_, g)| g >= n) || (0..n).any(|g| !vars.iter().any(|&(_, h)| h == g)) {
        return LabelingVerdict::Infeasible;
    }
    let elems: Vec<GroupElement> = group.elements().collect();
    // value of Σ_j t_j f_i(v_j) conj χ_h(label j) per variable
    let coefficient_row = |i: usize, h: &GroupElement| -> Vec<num_complex::Complex64> {
        vars.iter()
            .map(|&(j, g)| setup.values[j][i] * group.character_unchecked(h, &elems[g]).conj())
            .collect()
    };

    let mut lp = LinearProgram::new(vars.len());
    for (i, c) in target.coordinates().iter().enumerate() {
        for h in &c.killed {
            let row = coefficient_row(i, h);
            lp.push(row.iter().map(|z| z.re).collect(), 0.0);
            if !target.is_real_slot(i, h) {
                lp.push(row.iter().map(|z| z.im).collect(), 0.0);
            }
        }
    }
    for g in 0..n {
        lp.push(vars.iter().map(|&(_, h)| if h == g { 1.0 } else { 0.0 }).collect(), 1.0);
    }

    let Some(feasible) = lp.feasible().solution().map(<[f64]>::to_vec) else {
        return LabelingVerdict::Infeasible;
    };
    let mut best = feasible;
    let mut best_value = 0.0;
    for lead in target.leading() {
        let mut reach: f64 = 0.0;
        for &i in &lead.coordinates {
            let row = coefficient_row(i, &lead.element);
            let objectives = [
                row.iter().map(|z| z.re).collect::<Vec<_>>(),
                row.iter().map(|z| -z.re).collect(),
                row.iter().map(|z| z.im).collect(),
                row.iter().map(|z| -z.im).collect(),
            ];
            for gain in objectives {
                if let LpOutcome::Optimal { x, value } = lp.maximize(&gain) {
                    reach = reach.max(value);
                    if value > best_value {
                        best_value = value;
                        best = x;
                    }
                }
            }
        }
        if reach <= EPS_FEAS {
            return LabelingVerdict::Degenerate;
        }
    }
    let mut weights = vec![0.0; labeling.len()];
    for (&(j, _), t) in vars.iter().zip(best) {
        weights[j] = t;
    }
    LabelingVerdict::Feasible { weights }
}

fn example(cloud: &PointCloud, setup: &ProblemSetup, labeling: &[usize], weights: &[f64]) -> Result<PartitionResult> {
    let group = setup.target.group().clone();
    let n = group.order();
    let mut parts = vec![Vec::new(); n];
    let mut part_weights = vec![Vec::new(); n];
    for (j, (&g, &t)) in labeling.iter().zip(weights).enumerate() {
        parts[g].push(j);
        part_weights[g].push(t);
    }
    let vertices: Vec<Vec<f64>> = parts
        .iter()
        .zip(&part_weights)
        .map(|(p, w)| cloud.combination(&p.iter().copied().zip(w.iter().copied()).collect::<Vec<_>>()))
        .collect();
    let certificate = certify_polytope(
        &group,
        &vertices,
        setup.kind.polytope_kind(),
        &setup.view,
        Tolerances::default(),
    )?;
    Ok(PartitionResult {
        kind: setup.kind.clone(),
        group,
        parts,
        weights: part_weights,
        vertices,
        certificate,
        report: SolverReport {
            iterations: 0,
            pivots: 0,
            restarts: 0,
            final_residual: 0.0,
            status: SolverStatus::Zero,
            trace: Vec::new(),
        },
        seed: 0,
        attempts: 1,
    })
}

/// Surjections `{0..points} → {0..n}` in lexicographic order.
pub struct Surjections {
    current: Option<Vec<usize>>,
    n: usize,
    pinned: usize,
}

impl Surjections {
    /// With `pin_first`, only labelings whose first entry is `0`.
    pub fn new(points: usize, n: usize, pin_first: bool) -> Self {
        let start = (points >= n && n > 0).then(|| vec![0; points]);
        let mut s = Self {
            current: start,
            n,
            pinned: usize::from(pin_first),
        };
        if s.current.as_ref().is_some_and(|c| !is_onto(c, n)) {
            s.advance();
        }
        s
    }

    fn advance(&mut self) {
        while let Some(c) = self.current.as_mut() {
            let mut k = c.len();
            loop {
                if k == self.pinned {
                    self.current = None;
                    return;
                }
                k -= 1;
                c[k] += 1;
                if c[k] < self.n {
                    break;
                }
                c[k] = 0;
            }
            if is_onto(c, self.n) {
                return;
            }
        }
    }
}

fn is_onto(labels: &[usize], n: usize) -> bool {
    let mut hit = vec![false; n];
    labels.iter().for_each(|&g| hit[g] = true);
    hit.into_iter().all(|h| h)
}

impl Iterator for Surjections {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        self.advance();
        Some(out)
    }
}

/// Fraction of `trials` seeded clouds of `points` points admitting the
/// partition. Trial `t` uses seed `seed + t`; trials run on the current
/// rayon pool.
pub fn existence_rate(kind: &ProblemKind, points: usize, trials: usize, seed: u64) -> Result<f64> {
    if matches!(kind, ProblemKind::ColoredPolygon { .. }) {
        return Err(Error::Unsupported("the oracle does not sample colored instances".into()));
    }
    if trials == 0 {
        return Err(Error::Malformed("at least one trial is needed".into()));
    }
    let found = (0..trials)
        .into_par_iter()
        .map(|t| {
            let cloud = generate_points(kind.dimension(), points, seed.wrapping_add(t as u64), 1.0)?;
            Ok(polytopal_partition_exists(&cloud, kind, OracleOptions::default())?.found)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(found.iter().filter(|&&f| f).count() as f64 / trials as f64)
}

/// Fraction of clouds with one point fewer than required that admit no
/// partition.
pub fn tightness_experiment(kind: &ProblemKind, trials: usize, seed: u64) -> Result<f64> {
    let points = crate::problem::required_points(kind)? - 1;
    Ok(1.0 - existence_rate(kind, points, trials, seed)?)
}
