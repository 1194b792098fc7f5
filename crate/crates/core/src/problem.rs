//! Partition problems and the Fourier coefficients each one must kill.
//!
//! Every problem becomes a list of coordinate functions `f_i` (complex or
//! real) and, per coordinate, a set `S_i ⊆ G − {0}` of coefficients that must
//! vanish. For real coordinates only one member of each conjugate pair
//! `{h, −h}` is listed, since `c_{−h} = conj(c_h)` there. The number of points
//! needed to force all of them to vanish is `2m − m′ + |G|`, where `m` counts
//! all listed coefficients and `m′` the order-two ones on real coordinates.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{FiniteAbelianGroup, GroupElement};
use crate::geometry::{CoordinateDecomposition, CoordinateView, PlaneFrame, PointCloud, PolytopeKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemKind {
    /// Regular `r`-gon from points in the plane.
    Polygon { r: usize },
    /// `P_{r_1} × … × P_{r_k}` in `R^{2k}`, polygon `i` parallel to `planes[i]`
    /// (consecutive coordinate pairs when omitted).
    Multiprism {
        factors: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        planes: Option<Vec<[usize; 2]>>,
    },
    /// Multiprism times a segment in `R^{2k+1}`.
    Prism {
        factors: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        planes: Option<Vec<[usize; 2]>>,
    },
    /// Axis-parallel `k`-orthotope in `R^k`.
    Orthotope { k: usize },
    /// Regular `r`-gon parallel to an arbitrary plane of `R^D`.
    PolygonInPlane { r: usize, frame: PlaneFrame },
    /// Regular `r`-gon inside a complex 1-flat of `R^dim = C^{dim/2}`.
    PolygonComplexFlat { r: usize, dim: usize },
    /// Regular `r`-gon from rainbow parts with equal barycentric
    /// coordinates; the cloud carries `(r − 2)·dim + 1` color classes of
    /// `r` points each.
    ColoredPolygon { r: usize, dim: usize },
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Polygon { .. } => "polygon",
            Self::Multiprism { .. } => "multiprism",
            Self::Prism { .. } => "prism",
            Self::Orthotope { .. } => "orthotope",
            Self::PolygonInPlane { .. } => "polygon_in_plane",
            Self::PolygonComplexFlat { .. } => "polygon_complex_flat",
            Self::ColoredPolygon { .. } => "colored_polygon",
        }
    }

    /// Ambient dimension of the input points.
    pub fn dimension(&self) -> usize {
        match self {
            Self::Polygon { .. } => 2,
            Self::Multiprism { factors, .. } => 2 * factors.len(),
            Self::Prism { factors, .. } => 2 * factors.len() + 1,
            Self::Orthotope { k } => *k,
            Self::PolygonInPlane { frame, .. } => frame.dimension(),
            Self::PolygonComplexFlat { dim, .. } | Self::ColoredPolygon { dim, .. } => *dim,
        }
    }

    pub fn polytope_kind(&self) -> PolytopeKind {
        match self {
            Self::Polygon { .. } | Self::PolygonInPlane { .. } => PolytopeKind::Polygon,
            Self::Multiprism { .. } => PolytopeKind::Multiprism,
            Self::Prism { .. } => PolytopeKind::Prism,
            Self::Orthotope { .. } => PolytopeKind::Orthotope,
            Self::PolygonComplexFlat { .. } => PolytopeKind::ComplexFlatPolygon,
            Self::ColoredPolygon { .. } => PolytopeKind::ColoredPolygon,
        }
    }

    /// Number of color classes, for the colored variant.
    pub fn color_class_count(&self) -> Option<usize> {
        match self {
            Self::ColoredPolygon { r, dim } => Some((r - 2) * dim + 1),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |why: String| Err(Error::Unsupported(why));
        match self {
            Self::Polygon { r } | Self::PolygonInPlane { r, .. } if *r < 3 => {
                bad(format!("polygons need r ≥ 3, got {r}"))
            }
            Self::Multiprism { factors, planes } | Self::Prism { factors, planes } => {
                if factors.is_empty() || factors.iter().any(|&r| r < 3) {
                    return bad(format!("multiprism factors must all be ≥ 3, got {factors:?}"));
                }
                if let Some(p) = planes {
                    if p.len() != factors.len() {
                        return bad(format!("{} planes for {} factors", p.len(), factors.len()));
                    }
                }
                Ok(())
            }
            Self::Orthotope { k } if *k == 0 => bad("orthotopes need k ≥ 1".into()),
            Self::PolygonComplexFlat { r, dim } | Self::ColoredPolygon { r, dim } => {
                if *r < 3 {
                    bad(format!("polygons need r ≥ 3, got {r}"))
                } else if *dim == 0 || dim % 2 != 0 {
                    bad(format!("complex structure needs an even dimension, got {dim}"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn group(&self) -> Result<FiniteAbelianGroup> {
        match self {
            Self::Polygon { r }
            | Self::PolygonInPlane { r, .. }
            | Self::PolygonComplexFlat { r, .. }
            | Self::ColoredPolygon { r, .. } => FiniteAbelianGroup::cyclic(*r),
            Self::Multiprism { factors, .. } => FiniteAbelianGroup::new(factors),
            Self::Prism { factors, .. } => {
                let mut f = factors.clone();
                f.push(2);
                FiniteAbelianGroup::new(&f)
            }
            Self::Orthotope { k } => FiniteAbelianGroup::new(&vec![2; *k]),
        }
    }

    /// How input points are split into the complex and real coordinates the
    /// target refers to.
    pub fn view(&self) -> Result<CoordinateView> {
        self.validate()?;
        let dim = self.dimension();
        let view = match self {
            Self::Polygon { .. } | Self::PolygonComplexFlat { .. } | Self::ColoredPolygon { .. } => {
                CoordinateView::Decomposition(CoordinateDecomposition::consecutive(dim))
            }
            Self::Multiprism { planes, .. } | Self::Prism { planes, .. } => {
                let dec = match planes {
                    Some(p) => CoordinateDecomposition::from_planes(dim, p.clone())?,
                    None => CoordinateDecomposition::consecutive(dim),
                };
                CoordinateView::Decomposition(dec)
            }
            Self::Orthotope { k } => CoordinateView::Decomposition(CoordinateDecomposition::new(
                *k,
                Vec::new(),
                (0..*k).collect(),
            )?),
            Self::PolygonInPlane { frame, .. } => CoordinateView::Frame(frame.clone()),
        };
        Ok(view)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Complex,
    Real,
}

/// One coordinate function `f_i` and its killed set `S_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetCoordinate {
    pub field: Field,
    pub killed: Vec<GroupElement>,
}

/// A coefficient whose nonvanishing certifies a nondegenerate polytope.
/// With several coordinates the requirement is on the norm of the vector of
/// coefficients at `element`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingTarget {
    pub coordinates: Vec<usize>,
    pub element: GroupElement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilationTarget {
    group: FiniteAbelianGroup,
    coordinates: Vec<TargetCoordinate>,
    leading: Vec<LeadingTarget>,
}

impl AnnihilationTarget {
    pub fn new(
        group: FiniteAbelianGroup,
        coordinates: Vec<TargetCoordinate>,
        leading: Vec<LeadingTarget>,
    ) -> Result<Self> {
        for (i, c) in coordinates.iter().enumerate() {
            for h in &c.killed {
                if !group.contains(h) {
                    return Err(Error::GroupMismatch(format!("S_{i} contains {h}")));
                }
                if h.is_zero() {
                    return Err(Error::Unsupported(format!("S_{i} contains 0")));
                }
                if c.field == Field::Real && group.element_order(h) > 2 && c.killed.contains(&group.neg(h)) {
                    return Err(Error::Unsupported(format!(
                        "real coordinate {i} lists both {h} and its conjugate"
                    )));
                }
            }
            let mut sorted = c.killed.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != c.killed.len() {
                return Err(Error::Unsupported(format!("S_{i} has repeated elements")));
            }
        }
        Ok(Self {
            group,
            coordinates,
            leading,
        })
    }

    /// All of `G − {0}` on `dimension` real coordinates: the Tverberg condition.
    pub fn tverberg(r: usize, dimension: usize) -> Result<Self> {
        let group = FiniteAbelianGroup::cyclic(r)?;
        let reps = conjugate_representatives(&group, &[]);
        let coordinates = (0..dimension)
            .map(|_| TargetCoordinate {
                field: Field::Real,
                killed: reps.clone(),
            })
            .collect();
        Self::new(group, coordinates, Vec::new())
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coordinates(&self) -> &[TargetCoordinate] {
        &self.coordinates
    }

    pub fn leading(&self) -> &[LeadingTarget] {
        &self.leading
    }

    /// `T_i`: the order-two members of `S_i` on a real coordinate.
    pub fn order_two(&self, i: usize) -> Vec<GroupElement> {
        let c = &self.coordinates[i];
        if c.field == Field::Complex {
            return Vec::new();
        }
        c.killed
            .iter()
            .filter(|h| self.group.element_order(h) == 2)
            .cloned()
            .collect()
    }

    /// Whether coefficient `(i, h)` occupies a single real slot.
    pub fn is_real_slot(&self, i: usize, h: &GroupElement) -> bool {
        self.coordinates[i].field == Field::Real && self.group.element_order(h) == 2
    }

    pub fn m(&self) -> usize {
        self.coordinates.iter().map(|c| c.killed.len()).sum()
    }

    pub fn m_prime(&self) -> usize {
        (0..self.coordinates.len()).map(|i| self.order_two(i).len()).sum()
    }

    /// `N = 2m − m′ + |G| − 1`.
    pub fn simplex_dim(&self) -> usize {
        2 * self.m() - self.m_prime() + self.group.order() - 1
    }

    pub fn required_points(&self) -> usize {
        self.simplex_dim() + 1
    }
}

/// One member (the lexicographically smaller) of each pair `{h, −h}` in
/// `G − {0} − excluded`; self-conjugate elements stand alone.
pub fn conjugate_representatives(group: &FiniteAbelianGroup, excluded: &[GroupElement]) -> Vec<GroupElement> {
    group
        .elements()
        .filter(|h| !h.is_zero() && !excluded.contains(h))
        .filter(|h| {
            let neg = group.neg(h);
            excluded.contains(&neg) || *h <= neg
        })
        .collect()
}

fn all_but(group: &FiniteAbelianGroup, keep: &GroupElement) -> Vec<GroupElement> {
    group.elements().filter(|h| !h.is_zero() && h != keep).collect()
}

fn complex(killed: Vec<GroupElement>) -> TargetCoordinate {
    TargetCoordinate {
        field: Field::Complex,
        killed,
    }
}

fn real(killed: Vec<GroupElement>) -> TargetCoordinate {
    TargetCoordinate {
        field: Field::Real,
        killed,
    }
}

pub fn build_target(kind: &ProblemKind) -> Result<AnnihilationTarget> {
    kind.validate()?;
    let group = kind.group()?;
    let (coordinates, leading) = match kind {
        ProblemKind::Polygon { .. } => {
            let e = group.basis(0);
            (
                vec![complex(all_but(&group, &e))],
                vec![LeadingTarget {
                    coordinates: vec![0],
                    element: e,
                }],
            )
        }
        ProblemKind::Multiprism { factors, .. } => {
            let k = factors.len();
            (
                (0..k).map(|i| complex(all_but(&group, &group.basis(i)))).collect(),
                (0..k)
                    .map(|i| LeadingTarget {
                        coordinates: vec![i],
                        element: group.basis(i),
                    })
                    .collect(),
            )
        }
        ProblemKind::Prism { factors, .. } => {
            let k = factors.len();
            let mut coords: Vec<_> = (0..k).map(|i| complex(all_but(&group, &group.basis(i)))).collect();
            coords.push(real(conjugate_representatives(&group, &[group.basis(k)])));
            (
                coords,
                (0..=k)
                    .map(|i| LeadingTarget {
                        coordinates: vec![i],
                        element: group.basis(i),
                    })
                    .collect(),
            )
        }
        ProblemKind::Orthotope { k } => (
            (0..*k).map(|i| real(all_but(&group, &group.basis(i)))).collect(),
            (0..*k)
                .map(|i| LeadingTarget {
                    coordinates: vec![i],
                    element: group.basis(i),
                })
                .collect(),
        ),
        ProblemKind::PolygonInPlane { frame, .. } => {
            let e = group.basis(0);
            let mut coords = vec![complex(all_but(&group, &e))];
            let reps = conjugate_representatives(&group, &[]);
            coords.extend((2..frame.dimension()).map(|_| real(reps.clone())));
            (
                coords,
                vec![LeadingTarget {
                    coordinates: vec![0],
                    element: e,
                }],
            )
        }
        ProblemKind::PolygonComplexFlat { dim, .. } => {
            let e = group.basis(0);
            let d = dim / 2;
            (
                (0..d).map(|_| complex(all_but(&group, &e))).collect(),
                vec![LeadingTarget {
                    coordinates: (0..d).collect(),
                    element: e,
                }],
            )
        }
        ProblemKind::ColoredPolygon { dim, .. } => {
            let e = group.basis(0);
            let d = dim / 2;
            let n = kind.color_class_count().expect("colored kind");
            let reps = conjugate_representatives(&group, &[]);
            let mut coords: Vec<_> = (0..d).map(|_| complex(all_but(&group, &e))).collect();
            coords.extend((1..n).map(|_| real(reps.clone())));
            (
                coords,
                vec![LeadingTarget {
                    coordinates: (0..d).collect(),
                    element: e,
                }],
            )
        }
    };
    AnnihilationTarget::new(group, coordinates, leading)
}

pub fn required_points(kind: &ProblemKind) -> Result<usize> {
    Ok(build_target(kind)?.required_points())
}

/// A problem bound to a point cloud: the target plus the value of every
/// target coordinate at every input point.
#[derive(Clone, Debug)]
pub struct ProblemSetup {
    pub kind: ProblemKind,
    pub target: AnnihilationTarget,
    pub view: CoordinateView,
    /// `values[j][i] = f_i(v_j)`.
    pub values: Vec<Vec<Complex64>>,
}

impl ProblemSetup {
    pub fn new(kind: &ProblemKind, cloud: &PointCloud) -> Result<Self> {
        let target = build_target(kind)?;
        let view = kind.view()?;
        if cloud.dimension() != view.dimension() {
            return Err(Error::DimensionMismatch {
                expected: view.dimension(),
                got: cloud.dimension(),
            });
        }
        let mut values: Vec<Vec<Complex64>> = cloud
            .points()
            .iter()
            .map(|p| {
                let v = view.project(p);
                v.complex
                    .into_iter()
                    .chain(v.real.into_iter().map(|x| Complex64::new(x, 0.0)))
                    .collect()
            })
            .collect();
        if let ProblemKind::ColoredPolygon { r, .. } = kind {
            let n = kind.color_class_count().expect("colored kind");
            let classes = cloud.color_classes(*r)?;
            if classes.len() != n {
                return Err(Error::Malformed(format!(
                    "expected {n} color classes, got {}",
                    classes.len()
                )));
            }
            let colors = cloud.colors().expect("checked by color_classes");
            // indicator of classes 1..n; class 0 is implied by the weights summing to one
            for (row, &c) in values.iter_mut().zip(colors) {
                row.extend((1..n).map(|i| Complex64::new(if c == i { 1.0 } else { 0.0 }, 0.0)));
            }
        }
        debug_assert!(values.iter().all(|row| row.len() == target.coordinates().len()));
        Ok(Self {
            kind: kind.clone(),
            target,
            view,
            values,
        })
    }

    /// Setup for the plain Tverberg condition on raw coordinates.
    pub fn tverberg(cloud: &PointCloud, r: usize) -> Result<Self> {
        let target = AnnihilationTarget::tverberg(r, cloud.dimension())?;
        let view = CoordinateView::Decomposition(CoordinateDecomposition::new(
            cloud.dimension(),
            Vec::new(),
            (0..cloud.dimension()).collect(),
        )?);
        let values = cloud
            .points()
            .iter()
            .map(|p| p.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Ok(Self {
            kind: ProblemKind::Polygon { r },
            target,
            view,
            values,
        })
    }
}
