//! The equivariant affine map from the join of groups into the
//! representation `W`, tabulated on its generators, and the grouping that
//! turns a point of the join back into disjoint parts.
//!
//! A point of the join is a choice of group element `g_j` and weight `t_j`
//! for every input point `j`. Its image is `Σ_j t_j A(v_j^{g_j})`, where
//! `A(v_j^g)` stacks, for every killed coefficient `(i, h)`, the value
//! `f_i(v_j) · conj(χ_h(g))` (two real slots, or one for an order-two
//! coefficient on a real coordinate), followed by `e_g − 𝟙/|G|` with the
//! `g = 0` entry dropped. The image vanishes exactly when the grouped
//! parts have weight `1/|G|` each and every killed coefficient of their
//! witnesses is zero.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{FiniteAbelianGroup, GroupElement};
use crate::problem::AnnihilationTarget;

/// Support threshold for join weights.
pub const TAU_SUPPORT: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientBlock {
    pub coordinate: usize,
    pub element: GroupElement,
    pub offset: usize,
    /// 2 for a complex coefficient, 1 for a real one.
    pub width: usize,
}

/// Slot layout of `W = C^{m−m′} ⊕ R^{m′} ⊕ R^⊥[G]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationSpace {
    group: FiniteAbelianGroup,
    blocks: Vec<CoefficientBlock>,
    regular_offset: usize,
    real_dim: usize,
}

impl RepresentationSpace {
    pub fn new(target: &AnnihilationTarget) -> Self {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (i, c) in target.coordinates().iter().enumerate() {
            for h in &c.killed {
                let width = if target.is_real_slot(i, h) { 1 } else { 2 };
                blocks.push(CoefficientBlock {
                    coordinate: i,
                    element: h.clone(),
                    offset,
                    width,
                });
                offset += width;
            }
        }
        let group = target.group().clone();
        let real_dim = offset + group.order() - 1;
        Self {
            group,
            blocks,
            regular_offset: offset,
            real_dim,
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn blocks(&self) -> &[CoefficientBlock] {
        &self.blocks
    }

    pub fn regular_offset(&self) -> usize {
        self.regular_offset
    }

    pub fn real_dim(&self) -> usize {
        self.real_dim
    }

    /// The action `ρ(g′)` on a vector of `W`.
    pub fn act(&self, shift: &GroupElement, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.real_dim];
        for b in &self.blocks {
            // χ_{−h}(g′) = conj χ_h(g′)
            let rot = self.group.character_unchecked(&b.element, shift).conj();
            if b.width == 2 {
                let z = Complex64::new(v[b.offset], v[b.offset + 1]) * rot;
                out[b.offset] = z.re;
                out[b.offset + 1] = z.im;
            } else {
                out[b.offset] = v[b.offset] * rot.re;
            }
        }
        let full = self.regular_full(v);
        let n = self.group.order();
        let mut moved = vec![0.0; n];
        for (k, g) in self.group.elements().enumerate() {
            let to = self.group.index_of(&self.group.add(&g, shift)).expect("closed");
            moved[to] = full[k];
        }
        out[self.regular_offset..].copy_from_slice(&moved[1..]);
        out
    }

    /// The regular block with its dropped `g = 0` entry restored.
    pub fn regular_full(&self, v: &[f64]) -> Vec<f64> {
        let tail = &v[self.regular_offset..self.real_dim];
        let mut full = Vec::with_capacity(tail.len() + 1);
        full.push(-tail.iter().sum::<f64>());
        full.extend_from_slice(tail);
        full
    }
}

/// `A(v_j^g)` for every input point `j` (a color class) and group element `g`.
#[derive(Clone, Debug)]
pub struct MapTable {
    space: Option<RepresentationSpace>,
    dim: usize,
    classes: Vec<Vec<Vec<f64>>>,
}

impl MapTable {
    /// Arbitrary color classes of equal dimension, without a representation
    /// attached.
    pub fn from_classes(classes: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let dim = classes
            .first()
            .and_then(|c| c.first())
            .map(Vec::len)
            .ok_or_else(|| Error::Malformed("empty map table".into()))?;
        for v in classes.iter().flatten() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        if classes.iter().any(Vec::is_empty) {
            return Err(Error::Malformed("empty color class".into()));
        }
        Ok(Self {
            space: None,
            dim,
            classes,
        })
    }

    pub fn space(&self) -> Option<&RepresentationSpace> {
        self.space.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn classes(&self) -> &[Vec<Vec<f64>>] {
        &self.classes
    }

    pub fn vector(&self, j: usize, g: usize) -> &[f64] {
        &self.classes[j][g]
    }

    /// `Σ_j t_j A(v_j^{g_j})`.
    pub fn weighted_sum(&self, selection: &[usize], weights: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (j, (&g, &t)) in selection.iter().zip(weights).enumerate() {
            for (o, x) in out.iter_mut().zip(&self.classes[j][g]) {
                *o += t * x;
            }
        }
        out
    }

    /// Largest `‖Σ_g A(v_j^g)‖` over classes.
    pub fn worst_class_sum(&self) -> f64 {
        self.classes
            .iter()
            .map(|class| {
                let mut s = vec![0.0; self.dim];
                for v in class {
                    s.iter_mut().zip(v).for_each(|(a, b)| *a += b);
                }
                s.iter().map(|x| x * x).sum::<f64>().sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Tabulates the map for `values[j][i] = f_i(v_j)`; the number of points
/// must be exactly the target's required count.
pub fn build_map_table(target: &AnnihilationTarget, values: &[Vec<Complex64>]) -> Result<MapTable> {
    if values.len() != target.required_points() {
        return Err(Error::WrongCount {
            expected: target.required_points(),
            got: values.len(),
        });
    }
    build_map_table_any_count(target, values)
}

/// As [`build_map_table`], for any number of points.
pub fn build_map_table_any_count(target: &AnnihilationTarget, values: &[Vec<Complex64>]) -> Result<MapTable> {
    let coords = target.coordinates().len();
    if let Some(row) = values.iter().find(|row| row.len() != coords) {
        return Err(Error::DimensionMismatch {
            expected: coords,
            got: row.len(),
        });
    }
    if values.is_empty() {
        return Err(Error::Malformed("no points".into()));
    }
    let space = RepresentationSpace::new(target);
    let group = target.group();
    let n = group.order();
    let elems: Vec<GroupElement> = group.elements().collect();
    let conj_chars: Vec<Vec<Complex64>> = space
        .blocks
        .iter()
        .map(|b| {
            elems
                .iter()
                .map(|g| group.character_unchecked(&b.element, g).conj())
                .collect()
        })
        .collect();
    let share = 1.0 / n as f64;
    let classes = values
        .iter()
        .map(|row| {
            (0..n)
                .map(|g| {
                    let mut v = vec![0.0; space.real_dim];
                    for (b, chars) in space.blocks.iter().zip(&conj_chars) {
                        let z = row[b.coordinate] * chars[g];
                        v[b.offset] = z.re;
                        if b.width == 2 {
                            v[b.offset + 1] = z.im;
                        }
                    }
                    for k in 1..n {
                        v[space.regular_offset + k - 1] = if k == g { 1.0 - share } else { -share };
                    }
                    v
                })
                .collect()
        })
        .collect();
    Ok(MapTable {
        dim: space.real_dim,
        space: Some(space),
        classes,
    })
}

/// The grouped form of a join point: part weights `λ_g` and witnesses
/// `x_g` as sparse barycentric combinations of input points.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupedPartition {
    pub lambdas: Vec<f64>,
    /// `(point index, t_j / λ_g)` per part, in enumeration order; empty for
    /// an empty part.
    pub witnesses: Vec<Vec<(usize, f64)>>,
}

impl GroupedPartition {
    pub fn support(&self, g: usize) -> Vec<usize> {
        self.witnesses[g].iter().map(|&(j, _)| j).collect()
    }
}

/// Groups a join point, allowing empty parts.
pub fn join_grouping(group: &FiniteAbelianGroup, selection: &[usize], weights: &[f64]) -> Result<GroupedPartition> {
    if selection.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: selection.len(),
            got: weights.len(),
        });
    }
    if let Some(&g) = selection.iter().find(|&&g| g >= group.order()) {
        return Err(Error::GroupMismatch(format!("element index {g} out of range")));
    }
    if weights.iter().any(|&t| t < -TAU_SUPPORT || !t.is_finite()) {
        return Err(Error::Malformed("join weights must be nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Malformed(format!("join weights sum to {total}, not 1")));
    }
    let n = group.order();
    let mut lambdas = vec![0.0; n];
    let mut members: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (j, (&g, &t)) in selection.iter().zip(weights).enumerate() {
        if t > TAU_SUPPORT {
            lambdas[g] += t;
            members[g].push((j, t));
        }
    }
    let witnesses = members
        .into_iter()
        .zip(&lambdas)
        .map(|(m, &l)| m.into_iter().map(|(j, t)| (j, t / l)).collect())
        .collect();
    Ok(GroupedPartition { lambdas, witnesses })
}

/// Groups a join point; every part must carry weight above `τ·|G|`.
pub fn group_join_point(group: &FiniteAbelianGroup, selection: &[usize], weights: &[f64]) -> Result<GroupedPartition> {
    let grouped = join_grouping(group, selection, weights)?;
    let floor = TAU_SUPPORT * group.order() as f64;
    if let Some((g, &l)) = grouped.lambdas.iter().enumerate().find(|(_, &l)| l <= floor) {
        return Err(Error::EmptyPart {
            part: group.element(g).to_string(),
            weight: l,
        });
    }
    Ok(grouped)
}

/// `𝒜` evaluated directly on grouped parts: coefficient blocks
/// `Σ_g λ_g f_i(x_g) conj(χ_h(g))` and the regular block `(λ_g − 1/|G|)`
/// without its `g = 0` entry.
pub fn evaluate_on_partition(
    target: &AnnihilationTarget,
    values: &[Vec<Complex64>],
    partition: &GroupedPartition,
) -> Vec<f64> {
    let space = RepresentationSpace::new(target);
    let group = target.group();
    let coords = target.coordinates().len();
    // f_i(x_g) by affinity
    let images: Vec<Vec<Complex64>> = partition
        .witnesses
        .iter()
        .map(|w| {
            (0..coords)
                .map(|i| w.iter().map(|&(j, s)| values[j][i] * s).sum())
                .collect()
        })
        .collect();
    let mut out = vec![0.0; space.real_dim];
    for b in &space.blocks {
        let z: Complex64 = group
            .elements()
            .enumerate()
            .map(|(g, e)| {
                images[g][b.coordinate] * partition.lambdas[g] * group.character_unchecked(&b.element, &e).conj()
            })
            .sum();
        out[b.offset] = z.re;
        if b.width == 2 {
            out[b.offset + 1] = z.im;
        }
    }
    let share = 1.0 / group.order() as f64;
    for (k, &l) in partition.lambdas.iter().enumerate().skip(1) {
        out[space.regular_offset + k - 1] = l - share;
    }
    out
}
