//! Point clouds, coordinate views, and spectral recognition of regular
//! polygons, multiprisms, prisms and orthotopes.
//!
//! A [`CoordinateView`] turns a point of `R^D` into a tuple of complex
//! coordinates (one per prescribed plane) followed by real coordinates.
//! Recognition never looks at angles or edge lengths: the vertex tuple,
//! indexed by a finite abelian group, is a prescribed polytope exactly when
//! the Fourier spectrum of each coordinate is supported on `{0, u·e_i}` for
//! a unit `u` and the leading coefficient is nonzero.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{gcd, FiniteAbelianGroup};

const ORTHONORMAL_TOL: f64 = 1e-10;

/// Default largest magnitude accepted for a coefficient that must vanish.
pub const DEFAULT_EPS_KILL: f64 = 1e-7;
/// Default smallest magnitude accepted for a leading coefficient.
pub const DEFAULT_EPS_LEAD: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dimension: usize,
    points: Vec<Vec<f64>>,
    colors: Option<Vec<usize>>,
}

impl PointCloud {
    pub fn new(dimension: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Malformed("dimension must be at least 1".into()));
        }
        if points.is_empty() {
            return Err(Error::Malformed("a point cloud needs at least one point".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                got: p.len(),
            });
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Malformed("coordinates must be finite".into()));
        }
        Ok(Self {
            dimension,
            points,
            colors: None,
        })
    }

    /// Attaches a color class index to every point.
    pub fn with_colors(mut self, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != self.points.len() {
            return Err(Error::Malformed(format!(
                "{} colors for {} points",
                colors.len(),
                self.points.len()
            )));
        }
        self.colors = Some(colors);
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn colors(&self) -> Option<&[usize]> {
        self.colors.as_deref()
    }

    /// Member indices of each color class, classes numbered `0..n`.
    ///
    /// Fails unless colors are present, numbered contiguously from zero, and
    /// every class has exactly `class_size` members.
    pub fn color_classes(&self, class_size: usize) -> Result<Vec<Vec<usize>>> {
        let colors = self
            .colors
            .as_ref()
            .ok_or_else(|| Error::Malformed("the instance has no color classes".into()))?;
        let n = colors.iter().max().map_or(0, |&c| c + 1);
        let mut classes = vec![Vec::new(); n];
        for (i, &c) in colors.iter().enumerate() {
            classes[c].push(i);
        }
        for (c, members) in classes.iter().enumerate() {
            if members.len() != class_size {
                return Err(Error::Malformed(format!(
                    "color class {c} has {} points, expected {class_size}",
                    members.len()
                )));
            }
        }
        Ok(classes)
    }

    /// `Σ_j weight_j · point_j` for sparse `(index, weight)` pairs.
    pub fn combination(&self, weights: &[(usize, f64)]) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension];
        for &(j, w) in weights {
            for (o, x) in out.iter_mut().zip(&self.points[j]) {
                *o += w * x;
            }
        }
        out
    }
}

/// `count` points with coordinates i.i.d. uniform in `[-scale, scale]`,
/// deterministic per seed and pairwise distinct.
pub fn generate_points(dimension: usize, count: usize, seed: u64, scale: f64) -> Result<PointCloud> {
    if dimension == 0 || count == 0 {
        return Err(Error::Malformed("dimension and count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(count);
    while points.len() < count {
        let p: Vec<f64> = (0..dimension)
            .map(|_| rng.random_range(-scale..=scale))
            .collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    PointCloud::new(dimension, points)
}

/// Pairs of coordinate indices spanning planes `U_i`, plus the remaining
/// coordinate lines `L_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateDecomposition {
    pub plane_pairs: Vec<[usize; 2]>,
    pub line_indices: Vec<usize>,
}

impl CoordinateDecomposition {
    pub fn new(dimension: usize, plane_pairs: Vec<[usize; 2]>, line_indices: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; dimension];
        for &i in plane_pairs.iter().flatten().chain(&line_indices) {
            if i >= dimension {
                return Err(Error::Coverage(format!(
                    "index {i} is outside dimension {dimension}"
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Coverage(format!("index {i} is used twice")));
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Coverage(format!("index {missing} is not covered")));
        }
        Ok(Self {
            plane_pairs,
            line_indices,
        })
    }

    /// The given planes, with every uncovered index becoming a line in
    /// increasing order.
    pub fn from_planes(dimension: usize, plane_pairs: Vec<[usize; 2]>) -> Result<Self> {
        let used: Vec<usize> = plane_pairs.iter().flatten().copied().collect();
        let lines = (0..dimension).filter(|i| !used.contains(i)).collect();
        Self::new(dimension, plane_pairs, lines)
    }

    /// `(0,1), (2,3), …` followed by a trailing line when `dimension` is odd.
    pub fn consecutive(dimension: usize) -> Self {
        let pairs = (0..dimension / 2).map(|i| [2 * i, 2 * i + 1]).collect();
        let lines = if dimension % 2 == 1 {
            vec![dimension - 1]
        } else {
            Vec::new()
        };
        Self {
            plane_pairs: pairs,
            line_indices: lines,
        }
    }

    pub fn dimension(&self) -> usize {
        2 * self.plane_pairs.len() + self.line_indices.len()
    }
}

/// An orthonormal pair `(u, w)` spanning a linear 2-flat, together with an
/// orthonormal basis of its orthogonal complement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameSpec", into = "FrameSpec")]
pub struct PlaneFrame {
    u: Vec<f64>,
    w: Vec<f64>,
    completion: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct FrameSpec {
    u: Vec<f64>,
    w: Vec<f64>,
}

impl TryFrom<FrameSpec> for PlaneFrame {
    type Error = Error;

    fn try_from(spec: FrameSpec) -> Result<Self> {
        PlaneFrame::new(spec.u, spec.w)
    }
}

impl From<PlaneFrame> for FrameSpec {
    fn from(frame: PlaneFrame) -> Self {
        FrameSpec {
            u: frame.u,
            w: frame.w,
        }
    }
}

impl PlaneFrame {
    /// Validates that `u, w` are orthonormal and completes them to a basis.
    pub fn new(u: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if u.len() != w.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                got: w.len(),
            });
        }
        if u.len() < 2 {
            return Err(Error::NonOrthonormalFrame("a plane needs dimension ≥ 2".into()));
        }
        let (uu, ww, uw) = (dot(&u, &u), dot(&w, &w), dot(&u, &w));
        if (uu - 1.0).abs() > ORTHONORMAL_TOL
            || (ww - 1.0).abs() > ORTHONORMAL_TOL
            || uw.abs() > ORTHONORMAL_TOL
        {
            return Err(Error::NonOrthonormalFrame(format!(
                "<u,u>={uu}, <w,w>={ww}, <u,w>={uw}"
            )));
        }
        let completion = complete_basis(&[u.clone(), w.clone()]);
        Ok(Self { u, w, completion })
    }

    /// Orthonormalizes two spanning vectors (Gram–Schmidt, `u` first).
    pub fn from_spanning(a: &[f64], b: &[f64]) -> Result<Self> {
        let na = norm(a);
        if na == 0.0 {
            return Err(Error::NonOrthonormalFrame("zero spanning vector".into()));
        }
        let u: Vec<f64> = a.iter().map(|x| x / na).collect();
        let mut w = b.to_vec();
        for _ in 0..2 {
            let p = dot(&w, &u);
            w.iter_mut().zip(&u).for_each(|(x, y)| *x -= p * y);
        }
        let nw = norm(&w);
        if nw <= 1e-12 * norm(b).max(1.0) {
            return Err(Error::NonOrthonormalFrame("spanning vectors are parallel".into()));
        }
        w.iter_mut().for_each(|x| *x /= nw);
        Self::new(u, w)
    }

    /// The plane spanned by coordinate axes `i` and `j`.
    pub fn axis(dimension: usize, i: usize, j: usize) -> Result<Self> {
        if i >= dimension || j >= dimension || i == j {
            return Err(Error::Coverage(format!(
                "axes ({i},{j}) do not span a plane in dimension {dimension}"
            )));
        }
        let mut u = vec![0.0; dimension];
        let mut w = vec![0.0; dimension];
        u[i] = 1.0;
        w[j] = 1.0;
        Self::new(u, w)
    }

    /// A uniformly random plane from Gaussian spanning vectors.
    pub fn random<R: Rng>(dimension: usize, rng: &mut R) -> Result<Self> {
        loop {
            let a: Vec<f64> = (0..dimension).map(|_| rng.sample(StandardNormal)).collect();
            let b: Vec<f64> = (0..dimension).map(|_| rng.sample(StandardNormal)).collect();
            if let Ok(frame) = Self::from_spanning(&a, &b) {
                return Ok(frame);
            }
        }
    }

    pub fn dimension(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn completion(&self) -> &[Vec<f64>] {
        &self.completion
    }
}

fn complete_basis(seed: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = seed[0].len();
    let mut basis: Vec<Vec<f64>> = seed.to_vec();
    let mut out = Vec::new();
    for axis in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        // two passes of Gram–Schmidt
        for _ in 0..2 {
            for b in &basis {
                let p = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let n = norm(&v);
        if n > 1e-6 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v.clone());
            out.push(v);
        }
    }
    out
}

/// A point expressed in a coordinate view: complex coordinates first, then
/// real ones.
#[derive(Clone, Debug, PartialEq)]
pub struct ViewPoint {
    pub complex: Vec<Complex64>,
    pub real: Vec<f64>,
}

/// How `R^D` is split into complex planes and real lines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordinateView {
    Decomposition(CoordinateDecomposition),
    Frame(PlaneFrame),
}

impl CoordinateView {
    pub fn dimension(&self) -> usize {
        match self {
            Self::Decomposition(d) => d.dimension(),
            Self::Frame(f) => f.dimension(),
        }
    }

    pub fn complex_count(&self) -> usize {
        match self {
            Self::Decomposition(d) => d.plane_pairs.len(),
            Self::Frame(_) => 1,
        }
    }

    pub fn real_count(&self) -> usize {
        match self {
            Self::Decomposition(d) => d.line_indices.len(),
            Self::Frame(f) => f.completion.len(),
        }
    }

    pub fn project(&self, p: &[f64]) -> ViewPoint {
        match self {
            Self::Decomposition(d) => ViewPoint {
                complex: d
                    .plane_pairs
                    .iter()
                    .map(|&[a, b]| Complex64::new(p[a], p[b]))
                    .collect(),
                real: d.line_indices.iter().map(|&i| p[i]).collect(),
            },
            Self::Frame(f) => ViewPoint {
                complex: vec![Complex64::new(dot(p, &f.u), dot(p, &f.w))],
                real: f.completion.iter().map(|c| dot(p, c)).collect(),
            },
        }
    }

    /// Inverse of [`project`](Self::project).
    pub fn unproject(&self, v: &ViewPoint) -> Vec<f64> {
        match self {
            Self::Decomposition(d) => {
                let mut out = vec![0.0; d.dimension()];
                for (&[a, b], z) in d.plane_pairs.iter().zip(&v.complex) {
                    out[a] = z.re;
                    out[b] = z.im;
                }
                for (&i, &x) in d.line_indices.iter().zip(&v.real) {
                    out[i] = x;
                }
                out
            }
            Self::Frame(f) => {
                let mut out: Vec<f64> = f
                    .u
                    .iter()
                    .zip(&f.w)
                    .map(|(a, b)| v.complex[0].re * a + v.complex[0].im * b)
                    .collect();
                for (c, &x) in f.completion.iter().zip(&v.real) {
                    out.iter_mut().zip(c).for_each(|(o, y)| *o += x * y);
                }
                out
            }
        }
    }

    fn check_dimension(&self, dimension: usize) -> Result<()> {
        if self.dimension() != dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: dimension,
            });
        }
        Ok(())
    }
}

/// Relabels every point into `d` complex and `d′` real coordinates.
pub fn apply_decomposition(cloud: &PointCloud, dec: &CoordinateDecomposition) -> Result<Vec<ViewPoint>> {
    let view = CoordinateView::Decomposition(dec.clone());
    view.check_dimension(cloud.dimension())?;
    Ok(cloud.points().iter().map(|p| view.project(p)).collect())
}

/// Coordinates of every point in the frame: one complex value for the
/// plane, `D − 2` reals for its complement.
pub fn frame_project(cloud: &PointCloud, frame: &PlaneFrame) -> Result<Vec<ViewPoint>> {
    let view = CoordinateView::Frame(frame.clone());
    view.check_dimension(cloud.dimension())?;
    Ok(cloud.points().iter().map(|p| view.project(p)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolytopeKind {
    /// Regular polygon parallel to the view's single complex plane; every
    /// real coordinate is constant.
    Polygon,
    /// Product of regular polygons, one per complex coordinate.
    Multiprism,
    /// Multiprism times a segment on the single real coordinate.
    Prism,
    /// Axis-parallel box on real coordinates.
    Orthotope,
    /// Regular polygon inside a complex 1-flat of `C^d`.
    ComplexFlatPolygon,
    /// Same spectral shape as [`ComplexFlatPolygon`](Self::ComplexFlatPolygon);
    /// the color conditions are checked elsewhere.
    ColoredPolygon,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub kill: f64,
    pub lead: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            kill: DEFAULT_EPS_KILL,
            lead: DEFAULT_EPS_LEAD,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorCertificate {
    /// View coordinates (complex first, then real) governed by this factor.
    pub coordinates: Vec<usize>,
    /// Group factor whose generator carries the leading coefficient.
    pub factor: usize,
    pub unit: usize,
    /// Leading coefficient `c_{i, unit·e_factor}` per coordinate.
    pub leading: Vec<Complex64>,
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeCertificate {
    pub kind: PolytopeKind,
    /// `c_{i,0}` per view coordinate.
    pub centers: Vec<Complex64>,
    pub factors: Vec<FactorCertificate>,
    /// Largest coefficient that must vanish.
    pub residual: f64,
    /// Smallest leading magnitude over factors.
    pub leading_magnitude: f64,
    pub tolerances: Tolerances,
}

impl PolytopeCertificate {
    pub fn is_valid(&self) -> bool {
        self.residual <= self.tolerances.kill && self.leading_magnitude >= self.tolerances.lead
    }
}

struct FactorRule {
    coordinates: Vec<usize>,
    factor: usize,
}

fn factor_rules(group: &FiniteAbelianGroup, kind: PolytopeKind, view: &CoordinateView) -> Result<Vec<FactorRule>> {
    let (nc, nr) = (view.complex_count(), view.real_count());
    let f = group.factors();
    let mismatch = |why: &str| Err(Error::KindMismatch(format!("{kind:?}: {why}")));
    match kind {
        PolytopeKind::Polygon => {
            if !group.is_cyclic() || f[0] < 3 {
                return mismatch("needs a cyclic group of order ≥ 3");
            }
            if nc != 1 {
                return mismatch("needs exactly one complex plane");
            }
            Ok(vec![FactorRule {
                coordinates: vec![0],
                factor: 0,
            }])
        }
        PolytopeKind::Multiprism => {
            if f.iter().any(|&r| r < 3) {
                return mismatch("every factor must be ≥ 3");
            }
            if nc != f.len() || nr != 0 {
                return mismatch("needs one complex plane per factor and no lines");
            }
            Ok((0..nc)
                .map(|i| FactorRule {
                    coordinates: vec![i],
                    factor: i,
                })
                .collect())
        }
        PolytopeKind::Prism => {
            let k = f.len().saturating_sub(1);
            if f.len() < 2 || f[k] != 2 || f[..k].iter().any(|&r| r < 3) {
                return mismatch("needs factors r_1,…,r_k ≥ 3 followed by Z_2");
            }
            if nc != k || nr != 1 {
                return mismatch("needs k complex planes and one line");
            }
            let mut rules: Vec<_> = (0..k)
                .map(|i| FactorRule {
                    coordinates: vec![i],
                    factor: i,
                })
                .collect();
            rules.push(FactorRule {
                coordinates: vec![k],
                factor: k,
            });
            Ok(rules)
        }
        PolytopeKind::Orthotope => {
            if f.iter().any(|&r| r != 2) {
                return mismatch("needs G = Z_2^k");
            }
            if nc != 0 || nr != f.len() {
                return mismatch("needs k real lines");
            }
            Ok((0..nr)
                .map(|i| FactorRule {
                    coordinates: vec![i],
                    factor: i,
                })
                .collect())
        }
        PolytopeKind::ComplexFlatPolygon | PolytopeKind::ColoredPolygon => {
            if !group.is_cyclic() || f[0] < 3 {
                return mismatch("needs a cyclic group of order ≥ 3");
            }
            if nc == 0 || nr != 0 {
                return mismatch("needs complex planes only");
            }
            Ok(vec![FactorRule {
                coordinates: (0..nc).collect(),
                factor: 0,
            }])
        }
    }
}

/// Spectral certificate for `vertices` (one per group element, in
/// enumeration order) being the prescribed polytope in `view`.
pub fn certify_polytope(
    group: &FiniteAbelianGroup,
    vertices: &[Vec<f64>],
    kind: PolytopeKind,
    view: &CoordinateView,
    tolerances: Tolerances,
) -> Result<PolytopeCertificate> {
    if vertices.len() != group.order() {
        return Err(Error::IncompleteValues {
            expected: group.order(),
            got: vertices.len(),
        });
    }
    for v in vertices {
        view.check_dimension(v.len())?;
    }
    let rules = factor_rules(group, kind, view)?;
    let projected: Vec<ViewPoint> = vertices.iter().map(|v| view.project(v)).collect();
    let coord_count = view.complex_count() + view.real_count();
    let spectra = (0..coord_count)
        .map(|c| {
            let values: Vec<Complex64> = projected
                .iter()
                .map(|p| {
                    if c < p.complex.len() {
                        p.complex[c]
                    } else {
                        Complex64::new(p.real[c - p.complex.len()], 0.0)
                    }
                })
                .collect();
            group.full_spectrum(&values)
        })
        .collect::<Result<Vec<_>>>()?;

    // allowed[c] = index of the one nonzero non-constant coefficient, if any
    let mut allowed: Vec<Option<usize>> = vec![None; coord_count];
    let mut factors = Vec::with_capacity(rules.len());
    for rule in rules {
        let r = group.factors()[rule.factor];
        let mut best: Option<(usize, usize, f64)> = None;
        for unit in (1..r).filter(|&u| gcd(u, r) == 1) {
            let mut h = group.zero();
            h.0[rule.factor] = unit;
            let idx = group.index_of(&h)?;
            let mag = rule
                .coordinates
                .iter()
                .map(|&c| spectra[c].coefficients[idx].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if best.is_none_or(|(_, _, m)| mag > m) {
                best = Some((unit, idx, mag));
            }
        }
        let (unit, idx, magnitude) = best.expect("every factor has the unit 1");
        for &c in &rule.coordinates {
            allowed[c] = Some(idx);
        }
        factors.push(FactorCertificate {
            leading: rule
                .coordinates
                .iter()
                .map(|&c| spectra[c].coefficients[idx])
                .collect(),
            coordinates: rule.coordinates,
            factor: rule.factor,
            unit,
            magnitude,
        });
    }

    let residual = spectra
        .iter()
        .zip(&allowed)
        .flat_map(|(s, a)| {
            s.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .filter(move |(i, _)| Some(*i) != *a)
                .map(|(_, c)| c.norm())
        })
        .fold(0.0, f64::max);
    let leading_magnitude = factors
        .iter()
        .map(|f| f.magnitude)
        .fold(f64::INFINITY, f64::min);

    Ok(PolytopeCertificate {
        kind,
        centers: spectra.iter().map(|s| s.coefficients[0]).collect(),
        factors,
        residual,
        leading_magnitude,
        tolerances,
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
