//! Self-contained SVG 1.1 figures of a partition, projected onto two
//! coordinates.

use std::fmt::Write;

use crate::engine::PartitionResult;
use crate::error::{Error, Result};
use crate::fourier::FiniteAbelianGroup;
use crate::geometry::PointCloud;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 8] = [
    "#d1495b", "#00798c", "#edae49", "#66a182", "#8d6a9f", "#2e4057", "#f47c48", "#5c80bc",
];

/// Two group elements are joined by a witness edge when they differ by
/// `±1` in exactly one coordinate.
pub fn witness_edges(group: &FiniteAbelianGroup) -> Vec<(usize, usize)> {
    let elems: Vec<_> = group.elements().collect();
    let mut edges = Vec::new();
    for a in 0..elems.len() {
        for b in a + 1..elems.len() {
            let differing: Vec<usize> = (0..group.rank())
                .filter(|&j| elems[a].0[j] != elems[b].0[j])
                .collect();
            if let [j] = differing[..] {
                let r = group.factors()[j];
                let d = (elems[b].0[j] + r - elems[a].0[j]) % r;
                if d == 1 || d == r - 1 {
                    edges.push((a, b));
                }
            }
        }
    }
    edges
}

/// Convex hull by the monotone chain, counterclockwise, without repeated
/// or collinear points.
pub fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

pub fn render(cloud: &PointCloud, result: &PartitionResult, proj: [usize; 2]) -> Result<String> {
    let dim = cloud.dimension();
    if proj[0] >= dim || proj[1] >= dim || proj[0] == proj[1] {
        return Err(Error::Unsupported(format!(
            "cannot project {dim}-dimensional points onto coordinates {},{}",
            proj[0], proj[1]
        )));
    }
    if result.parts.iter().flatten().any(|&j| j >= cloud.len()) {
        return Err(Error::Malformed("the result refers to points outside the instance".into()));
    }
    let flat = |p: &[f64]| [p[proj[0]], p[proj[1]]];
    let points: Vec<[f64; 2]> = cloud.points().iter().map(|p| flat(p)).collect();
    let vertices: Vec<[f64; 2]> = result.vertices.iter().map(|p| flat(p)).collect();

    let all = points.iter().chain(&vertices);
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in all {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let screen = |p: [f64; 2]| (MARGIN + (p[0] - lo[0]) * scale, SIZE - MARGIN - (p[1] - lo[1]) * scale);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    for (g, part) in result.parts.iter().enumerate() {
        let color = PALETTE[g % PALETTE.len()];
        let hull = convex_hull(&part.iter().map(|&j| points[j]).collect::<Vec<_>>());
        let _ = writeln!(s, r#"<g class="part" data-element="{}">"#, result.part_key(g));
        let coords: Vec<String> = hull
            .iter()
            .map(|&p| {
                let (x, y) = screen(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.25" stroke="{color}" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, r##"<g class="witness" stroke="#222222" stroke-width="2">"##);
    for (a, b) in witness_edges(&result.group) {
        let (x1, y1) = screen(vertices[a]);
        let (x2, y2) = screen(vertices[b]);
        let _ = writeln!(s, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g class="points" fill="#222222">"##);
    for &p in &points {
        let (x, y) = screen(p);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let hull = convex_hull(&[[0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [1.0, 1.0], [2.0, 2.0], [0.0, 2.0]]);
        assert_eq!(hull, vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]);
        assert_eq!(convex_hull(&[[1.0, 1.0], [1.0, 1.0]]), vec![[1.0, 1.0]]);
    }

    #[test]
    fn witness_edges_per_group() {
        assert_eq!(witness_edges(&FiniteAbelianGroup::cyclic(3).unwrap()).len(), 3);
        assert_eq!(witness_edges(&FiniteAbelianGroup::cyclic(5).unwrap()).len(), 5);
        // rectangle and triangular prism
        assert_eq!(witness_edges(&FiniteAbelianGroup::new(&[2, 2]).unwrap()).len(), 4);
        assert_eq!(witness_edges(&FiniteAbelianGroup::new(&[3, 2]).unwrap()).len(), 9);
    }
}
