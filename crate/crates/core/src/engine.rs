//! From a point cloud and a problem kind to a certified partition.
//!
//! The pipeline: tabulate the equivariant map on every (point, element)
//! pair, find a colorful selection whose hull contains the origin, group the
//! resulting join point into parts, map the witnesses back to `R^D`, and
//! certify the polytope they span. A zero whose leading coefficient also
//! vanishes is a Tverberg-like point; the engine retries from another seed
//! before reporting it.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::FiniteAbelianGroup;
use crate::geometry::{certify_polytope, dot, CoordinateView, PointCloud, PolytopeCertificate, Tolerances};
use crate::problem::{ProblemKind, ProblemSetup};
use crate::reduction::{build_map_table, build_map_table_any_count, group_join_point, GroupedPartition};
use crate::solver::{solve, SolverOptions, SolverReport, SolverStatus, EPS_ZERO};

/// How the engine treats a point count different from the required one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CountPolicy {
    /// Exactly the required number of points.
    #[default]
    Exact,
    /// At least the required number; surplus points only add room.
    AtLeast,
    /// Any count. Too few points usually ends in a solver failure.
    Unchecked,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FindOptions {
    pub tolerances: Tolerances,
    pub eps_zero: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Attempts after the first on a degenerate zero.
    pub retries: usize,
    pub count_policy: CountPolicy,
}

impl Default for FindOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            eps_zero: EPS_ZERO,
            max_iter: SolverOptions::default().max_iter,
            seed: 0,
            retries: 5,
            count_policy: CountPolicy::Exact,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionResult {
    pub kind: ProblemKind,
    pub group: FiniteAbelianGroup,
    /// Point indices per group element, in enumeration order.
    pub parts: Vec<Vec<usize>>,
    /// Barycentric weights parallel to `parts`.
    pub weights: Vec<Vec<f64>>,
    /// The witness `x_g` per group element in input coordinates.
    pub vertices: Vec<Vec<f64>>,
    pub certificate: PolytopeCertificate,
    pub report: SolverReport,
    /// Seed of the successful attempt.
    pub seed: u64,
    pub attempts: usize,
}

impl PartitionResult {
    pub fn part_key(&self, g: usize) -> String {
        self.group.element(g).to_string()
    }
}

pub fn find_partition(cloud: &PointCloud, kind: &ProblemKind, options: &FindOptions) -> Result<PartitionResult> {
    let setup = ProblemSetup::new(kind, cloud)?;
    let required = setup.target.required_points();
    let table = match options.count_policy {
        CountPolicy::Exact => build_map_table(&setup.target, &setup.values)?,
        CountPolicy::AtLeast if cloud.len() < required => {
            return Err(Error::WrongCount {
                expected: required,
                got: cloud.len(),
            })
        }
        _ => build_map_table_any_count(&setup.target, &setup.values)?,
    };
    let group = setup.target.group().clone();

    let mut last_leading = 0.0;
    for attempt in 0..=options.retries {
        let seed = options.seed.wrapping_add(attempt as u64);
        let outcome = solve(
            &table,
            &SolverOptions {
                max_iter: options.max_iter,
                seed,
                eps_zero: options.eps_zero,
            },
        );
        match outcome.report.status {
            SolverStatus::Zero => {}
            SolverStatus::PreconditionFailed => {
                return Err(Error::PreconditionFailed {
                    worst: table.worst_class_sum(),
                })
            }
            SolverStatus::MaxIterations => {
                return Err(Error::SolverFailed(format!(
                    "no zero after {} iterations (best residual {:e})",
                    outcome.report.iterations, outcome.report.final_residual
                )))
            }
        }
        let selection = &outcome.selection;
        let grouped = match group_join_point(&group, &selection.chosen, &selection.weights) {
            Ok(g) => g,
            Err(Error::EmptyPart { .. }) => continue,
            Err(e) => return Err(e),
        };
        let (mut parts, mut weights) = split(&grouped);
        let vertices: Vec<Vec<f64>> = grouped.witnesses.iter().map(|w| cloud.combination(w)).collect();
        let certificate = certify_polytope(&group, &vertices, kind.polytope_kind(), &setup.view, options.tolerances)?;
        if certificate.leading_magnitude < options.tolerances.lead {
            last_leading = certificate.leading_magnitude;
            continue;
        }
        if certificate.residual > options.tolerances.kill {
            return Err(Error::InvalidCertificate {
                residual: certificate.residual,
            });
        }
        if let ProblemKind::ColoredPolygon { r, .. } = kind {
            complete_rainbow(cloud, *r, &mut parts, &mut weights)?;
            let spread = barycentric_spread(cloud, *r, &parts, &weights)?;
            if spread > options.tolerances.kill {
                return Err(Error::ConstraintViolated(format!(
                    "barycentric coordinates differ by {spread:e}"
                )));
            }
        }
        return Ok(PartitionResult {
            kind: kind.clone(),
            group,
            parts,
            weights,
            vertices,
            certificate,
            report: outcome.report,
            seed,
            attempts: attempt + 1,
        });
    }
    Err(Error::Degenerate {
        leading: last_leading,
        attempts: options.retries + 1,
    })
}

fn split(grouped: &GroupedPartition) -> (Vec<Vec<usize>>, Vec<Vec<f64>>) {
    grouped
        .witnesses
        .iter()
        .map(|w| w.iter().copied().unzip())
        .unzip()
}

/// Fills every part up to one member per color class, adding unused class
/// members with weight zero where a class carries no weight.
fn complete_rainbow(cloud: &PointCloud, r: usize, parts: &mut [Vec<usize>], weights: &mut [Vec<f64>]) -> Result<()> {
    let colors = cloud
        .colors()
        .ok_or_else(|| Error::Malformed("colored problem without colors".into()))?;
    for (class, members) in cloud.color_classes(r)?.iter().enumerate() {
        let mut unused: Vec<usize> = members
            .iter()
            .copied()
            .filter(|j| !parts.iter().flatten().any(|k| k == j))
            .collect();
        for (part, w) in parts.iter_mut().zip(weights.iter_mut()) {
            match part.iter().filter(|&&j| colors[j] == class).count() {
                0 => {
                    let j = unused
                        .pop()
                        .ok_or_else(|| Error::ConstraintViolated(format!("class {class} cannot cover every part")))?;
                    part.push(j);
                    w.push(0.0);
                }
                1 => {}
                n => {
                    return Err(Error::ConstraintViolated(format!(
                        "a part holds {n} points of class {class}"
                    )))
                }
            }
        }
    }
    for (part, w) in parts.iter_mut().zip(weights.iter_mut()) {
        let mut both: Vec<(usize, f64)> = part.iter().copied().zip(w.iter().copied()).collect();
        both.sort_by_key(|&(j, _)| j);
        (*part, *w) = both.into_iter().unzip();
    }
    Ok(())
}

/// `max_i max_{g,g′} |t_{i,g} − t_{i,g′}|` where `t_{i,g}` is the weight
/// part `g` puts on color class `i`.
fn barycentric_spread(cloud: &PointCloud, r: usize, parts: &[Vec<usize>], weights: &[Vec<f64>]) -> Result<f64> {
    let colors = cloud
        .colors()
        .ok_or_else(|| Error::Malformed("colored problem without colors".into()))?;
    let n = cloud.color_classes(r)?.len();
    let mut spread: f64 = 0.0;
    for class in 0..n {
        let per_part: Vec<f64> = parts
            .iter()
            .zip(weights)
            .map(|(p, w)| {
                p.iter()
                    .zip(w)
                    .filter(|(&j, _)| colors[j] == class)
                    .map(|(_, &t)| t)
                    .sum()
            })
            .collect();
        let hi = per_part.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = per_part.iter().copied().fold(f64::INFINITY, f64::min);
        spread = spread.max(hi - lo);
    }
    Ok(spread)
}

/// Largest component of a vertex difference outside the frame plane.
pub fn plane_deviation(view: &CoordinateView, vertices: &[Vec<f64>]) -> f64 {
    let CoordinateView::Frame(frame) = view else {
        return 0.0;
    };
    let base = &vertices[0];
    vertices
        .iter()
        .flat_map(|v| {
            let diff: Vec<f64> = v.iter().zip(base).map(|(a, b)| a - b).collect();
            frame.completion().iter().map(move |c| dot(&diff, c).abs()).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

/// Second singular value of the complex matrix of vertex differences
/// `x_g − x_0` in the view's complex coordinates; zero iff they are all
/// complex multiples of one vector.
pub fn complex_rank_gap(view: &CoordinateView, vertices: &[Vec<f64>]) -> f64 {
    let projected: Vec<Vec<Complex64>> = vertices.iter().map(|v| view.project(v).complex).collect();
    let rows = projected[0].len();
    let cols = projected.len() - 1;
    if rows < 2 || cols < 2 {
        return 0.0;
    }
    let m = DMatrix::from_fn(rows, cols, |i, j| projected[j + 1][i] - projected[0][i]);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s.get(1).copied().unwrap_or(0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn at_most(&mut self, name: &'static str, value: f64, tolerance: f64) {
        self.checks.push(Check {
            name,
            value,
            tolerance,
            pass: value <= tolerance,
        });
    }

    fn at_least(&mut self, name: &'static str, value: f64, tolerance: f64) {
        self.checks.push(Check {
            name,
            value,
            tolerance,
            pass: value >= tolerance,
        });
    }
}

/// Rechecks a result from the cloud alone, reporting every check.
pub fn verify_result(cloud: &PointCloud, kind: &ProblemKind, result: &PartitionResult) -> VerifyReport {
    let mut report = VerifyReport { checks: Vec::new() };
    let tolerances = result.certificate.tolerances;
    let (group, view) = match (kind.group(), kind.view()) {
        (Ok(g), Ok(v)) if g == result.group && v.dimension() == cloud.dimension() => (g, v),
        _ => {
            report.at_most("shape", 1.0, 0.0);
            return report;
        }
    };
    let n = group.order();
    let shape_ok = result.parts.len() == n
        && result.weights.len() == n
        && result.vertices.len() == n
        && result.parts.iter().zip(&result.weights).all(|(p, w)| p.len() == w.len());
    report.at_most("shape", if shape_ok { 0.0 } else { 1.0 }, 0.0);
    if !shape_ok {
        return report;
    }

    let mut seen = vec![false; cloud.len()];
    let mut bad_indices = 0usize;
    for part in &result.parts {
        if part.is_empty() {
            bad_indices += 1;
        }
        for &j in part {
            match seen.get_mut(j) {
                Some(s) if !*s => *s = true,
                _ => bad_indices += 1,
            }
        }
    }
    report.at_most("disjoint_parts", bad_indices as f64, 0.0);
    if bad_indices > 0 {
        return report;
    }

    let convexity = result
        .weights
        .iter()
        .map(|w| {
            let neg = w.iter().copied().fold(0.0, |acc: f64, t| acc.max(-t));
            neg.max((w.iter().sum::<f64>() - 1.0).abs())
        })
        .fold(0.0, f64::max);
    report.at_most("convex_weights", convexity, 1e-9);

    let recomputed: Vec<Vec<f64>> = result
        .parts
        .iter()
        .zip(&result.weights)
        .map(|(p, w)| cloud.combination(&p.iter().copied().zip(w.iter().copied()).collect::<Vec<_>>()))
        .collect();
    let drift = recomputed
        .iter()
        .zip(&result.vertices)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    report.at_most("vertices", drift, 1e-10);

    match certify_polytope(&group, &recomputed, kind.polytope_kind(), &view, tolerances) {
        Ok(cert) => {
            report.at_most("kill", cert.residual, tolerances.kill);
            report.at_least("lead", cert.leading_magnitude, tolerances.lead);
        }
        Err(_) => report.at_most("kill", f64::INFINITY, tolerances.kill),
    }

    match kind {
        ProblemKind::PolygonInPlane { .. } => {
            report.at_most("plane", plane_deviation(&view, &recomputed), tolerances.kill);
        }
        ProblemKind::PolygonComplexFlat { .. } => {
            report.at_most("complex_flat", complex_rank_gap(&view, &recomputed), tolerances.kill);
        }
        ProblemKind::ColoredPolygon { r, .. } => {
            report.at_most("complex_flat", complex_rank_gap(&view, &recomputed), tolerances.kill);
            let rainbow = match (cloud.colors(), cloud.color_classes(*r)) {
                (Some(colors), Ok(classes)) => result
                    .parts
                    .iter()
                    .map(|p| {
                        (0..classes.len())
                            .filter(|&c| p.iter().filter(|&&j| colors[j] == c).count() != 1)
                            .count()
                    })
                    .sum::<usize>() as f64,
                _ => f64::INFINITY,
            };
            report.at_most("rainbow", rainbow, 0.0);
            let spread = barycentric_spread(cloud, *r, &result.parts, &result.weights).unwrap_or(f64::INFINITY);
            report.at_most("equal_barycentric", spread, tolerances.kill);
        }
        _ => {}
    }
    report
}
