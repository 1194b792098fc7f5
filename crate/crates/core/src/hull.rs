//! Nearest point of a convex hull to the origin (Wolfe's minimum-norm-point
//! method).
//!
//! The iterate is kept as a convex combination of a *corral*, an affinely
//! independent subset of the input. Each major step adds the input point
//! most opposed to the current iterate; minor steps move toward the affine
//! minimizer of the corral and drop points whose weight reaches zero. The
//! affine minimizer is a least-squares solve by SVD, which stays well
//! defined when the corral is nearly degenerate.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{dot, norm};

/// Relative optimality tolerance.
pub const EPS_QP: f64 = 1e-12;

const WEIGHT_FLOOR: f64 = 1e-14;
const SINGULAR_CUTOFF: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct HullPoint {
    pub point: Vec<f64>,
    /// One weight per input vector; zero outside the corral.
    pub weights: Vec<f64>,
    /// Indices of the final corral.
    pub corral: Vec<usize>,
    pub major_steps: usize,
}

/// A corral and its weights from a previous call.
#[derive(Clone, Debug, PartialEq)]
pub struct WarmStart {
    pub corral: Vec<usize>,
    pub weights: Vec<f64>,
}

pub fn nearest_point_in_hull(vectors: &[Vec<f64>], warm: Option<&WarmStart>) -> Result<HullPoint> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::Malformed("no vectors".into()))?;
    let dim = first.len();
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: v.len(),
        });
    }
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max).max(1.0);

    let (mut corral, mut lambda) = match warm.filter(|w| valid_warm(w, vectors.len())) {
        Some(w) => {
            let s: f64 = w.weights.iter().sum();
            (w.corral.clone(), w.weights.iter().map(|x| x / s).collect())
        }
        None => {
            let best = (0..vectors.len())
                .min_by(|&a, &b| norm(&vectors[a]).total_cmp(&norm(&vectors[b])))
                .expect("nonempty");
            (vec![best], vec![1.0])
        }
    };
    let mut x = combine(vectors, &corral, &lambda, dim);

    let max_major = 10 * vectors.len() + 50;
    let mut major_steps = 0;
    while major_steps < max_major {
        major_steps += 1;
        let xn = norm(&x);
        if xn <= f64::EPSILON * scale {
            break;
        }
        let (j, best) = (0..vectors.len())
            .map(|k| (k, dot(&x, &vectors[k])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if xn * xn - best <= EPS_QP * xn * scale || corral.contains(&j) {
            break;
        }
        corral.push(j);
        lambda.push(0.0);

        let mut minor = 0;
        loop {
            minor += 1;
            let alpha = affine_minimizer(vectors, &corral, dim);
            if alpha.iter().all(|&a| a > WEIGHT_FLOOR) || minor > corral.len() + 2 {
                if alpha.iter().all(|&a| a > WEIGHT_FLOOR) {
                    lambda = alpha;
                }
                break;
            }
            let theta = lambda
                .iter()
                .zip(&alpha)
                .filter(|(&l, &a)| a <= WEIGHT_FLOOR && l - a > 0.0)
                .map(|(&l, &a)| l / (l - a))
                .fold(1.0f64, f64::min);
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = (1.0 - theta) * *l + theta * a;
            }
            let mut keep = lambda.iter().map(|&l| l > WEIGHT_FLOOR).collect::<Vec<_>>();
            if keep.iter().all(|&k| k) {
                // drop the smallest weight when rounding kept every point
                let worst = (0..lambda.len())
                    .min_by(|&a, &b| lambda[a].total_cmp(&lambda[b]))
                    .expect("nonempty");
                keep[worst] = false;
            }
            let mut k = keep.iter();
            corral.retain(|_| *k.next().unwrap());
            let mut k = keep.iter();
            lambda.retain(|_| *k.next().unwrap());
            let s: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= s);
        }
        let next = combine(vectors, &corral, &lambda, dim);
        if norm(&next) > xn {
            break;
        }
        x = next;
    }

    let mut weights = vec![0.0; vectors.len()];
    for (&i, &l) in corral.iter().zip(&lambda) {
        weights[i] = l;
    }
    Ok(HullPoint {
        point: x,
        weights,
        corral,
        major_steps,
    })
}

fn valid_warm(w: &WarmStart, n: usize) -> bool {
    !w.corral.is_empty()
        && w.corral.len() == w.weights.len()
        && w.corral.iter().all(|&i| i < n)
        && w.weights.iter().all(|&x| x > 0.0)
}

fn combine(vectors: &[Vec<f64>], corral: &[usize], lambda: &[f64], dim: usize) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for (&i, &l) in corral.iter().zip(lambda) {
        x.iter_mut().zip(&vectors[i]).for_each(|(a, b)| *a += l * b);
    }
    x
}

/// Weights summing to one that minimize `‖Σ α_i p_i‖` over the affine hull.
fn affine_minimizer(vectors: &[Vec<f64>], corral: &[usize], dim: usize) -> Vec<f64> {
    let k = corral.len();
    if k == 1 {
        return vec![1.0];
    }
    let base = &vectors[corral[0]];
    let b = DMatrix::from_fn(dim, k - 1, |r, c| vectors[corral[c + 1]][r] - base[r]);
    let rhs = DVector::from_fn(dim, |r, _| -base[r]);
    let svd = b.svd(true, true);
    let cutoff = SINGULAR_CUTOFF * svd.singular_values.max().max(f64::MIN_POSITIVE);
    let beta = svd
        .solve(&rhs, cutoff)
        .expect("u and v were computed");
    let mut alpha = Vec::with_capacity(k);
    alpha.push(1.0 - beta.sum());
    alpha.extend(beta.iter().copied());
    alpha
}
