use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polytverb::geometry::{generate_points, PlaneFrame, PointCloud};
use polytverb::oracle::Surjections;
use polytverb::problem::{required_points, ProblemKind, ProblemSetup};
use polytverb::reduction::{build_map_table, evaluate_on_partition, join_grouping, MapTable};
use polytverb::solver::{solve, SolverOptions, SolverStatus};
use polytverb::FiniteAbelianGroup;

fn tverberg(r: usize, d: usize) -> usize {
    (r - 1) * (d + 1) + 1
}

fn groups() -> impl Strategy<Value = FiniteAbelianGroup> {
    prop::collection::vec(2usize..6, 1..4).prop_map(|f| FiniteAbelianGroup::new(&f).unwrap())
}

proptest! {
    #[test]
    fn characters_are_orthogonal(group in groups()) {
        let n = group.order();
        let elems: Vec<_> = group.elements().collect();
        for (a, h) in elems.iter().enumerate() {
            for (b, k) in elems.iter().enumerate() {
                let s: Complex64 = elems
                    .iter()
                    .map(|g| group.character(h, g).unwrap() * group.character(k, g).unwrap().conj())
                    .sum();
                let expect = if a == b { n as f64 } else { 0.0 };
                prop_assert!((s - expect).norm() < 1e-12 * n as f64, "{h} {k}: {s}");
            }
        }
    }

    #[test]
    fn conjugate_characters(group in groups()) {
        for h in group.elements() {
            let neg = group.neg(&h);
            for g in group.elements() {
                let a = group.character(&neg, &g).unwrap();
                let b = group.character(&h, &g).unwrap().conj();
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn transform_round_trip(group in groups(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<Complex64> = (0..group.order())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let back = group.inverse_transform(&group.full_spectrum(&values).unwrap()).unwrap();
        for (a, b) in values.iter().zip(&back) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn real_values_have_conjugate_spectra(group in groups(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<Complex64> = (0..group.order())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
            .collect();
        let spec = group.full_spectrum(&values).unwrap();
        for (i, h) in group.elements().enumerate() {
            let j = group.index_of(&group.neg(&h)).unwrap();
            prop_assert!((spec.coefficients[j] - spec.coefficients[i].conj()).norm() < 1e-12);
            if group.element_order(&h) <= 2 {
                prop_assert!(spec.coefficients[i].im.abs() < 1e-12);
            }
        }
    }
}

#[test]
fn closed_form_point_counts() {
    for r in 3..=16 {
        assert_eq!(required_points(&ProblemKind::Polygon { r }).unwrap(), 3 * r - 4);
        for d in 2..=4 {
            let frame = PlaneFrame::axis(d, 0, 1).unwrap();
            assert_eq!(
                required_points(&ProblemKind::PolygonInPlane { r, frame }).unwrap(),
                tverberg(r, d) - 2
            );
        }
        for d in [2, 4] {
            assert_eq!(
                required_points(&ProblemKind::PolygonComplexFlat { r, dim: d }).unwrap(),
                tverberg(r, d) - d
            );
            let n = (r - 2) * d + 1;
            assert_eq!(required_points(&ProblemKind::ColoredPolygon { r, dim: d }).unwrap(), r * n);
        }
    }
    for a in 3..=16usize {
        let one = ProblemKind::Multiprism { factors: vec![a], planes: None };
        assert_eq!(required_points(&one).unwrap(), tverberg(a, 2) - 2);
        if 2 * a <= 16 {
            let prism = ProblemKind::Prism { factors: vec![a], planes: None };
            assert_eq!(required_points(&prism).unwrap(), tverberg(2 * a, 3) - 3);
        }
        for b in 3..=16usize {
            if a * b <= 16 {
                let two = ProblemKind::Multiprism { factors: vec![a, b], planes: None };
                assert_eq!(required_points(&two).unwrap(), tverberg(a * b, 4) - 4);
            }
        }
    }
    for k in 1..=4u32 {
        let kind = ProblemKind::Orthotope { k: k as usize };
        assert_eq!(required_points(&kind).unwrap(), tverberg(2usize.pow(k), k as usize) - k as usize);
    }
    // the worked counts for the figures
    assert_eq!(required_points(&ProblemKind::Polygon { r: 3 }).unwrap(), 5);
    assert_eq!(required_points(&ProblemKind::Orthotope { k: 2 }).unwrap(), 8);
    assert_eq!(required_points(&ProblemKind::Prism { factors: vec![3], planes: None }).unwrap(), 18);
    assert_eq!(
        required_points(&ProblemKind::Multiprism { factors: vec![3, 3], planes: None }).unwrap(),
        37
    );
}

/// One seeded instance per problem kind, at the required count.
fn instances() -> Vec<(ProblemKind, PointCloud)> {
    let kinds = vec![
        ProblemKind::Polygon { r: 3 },
        ProblemKind::Polygon { r: 5 },
        ProblemKind::Multiprism { factors: vec![3, 4], planes: Some(vec![[0, 2], [3, 1]]) },
        ProblemKind::Prism { factors: vec![3], planes: Some(vec![[2, 0]]) },
        ProblemKind::Orthotope { k: 3 },
        ProblemKind::PolygonInPlane {
            r: 4,
            frame: PlaneFrame::random(4, &mut ChaCha8Rng::seed_from_u64(5)).unwrap(),
        },
        ProblemKind::PolygonComplexFlat { r: 3, dim: 4 },
        ProblemKind::ColoredPolygon { r: 3, dim: 2 },
    ];
    kinds
        .into_iter()
        .enumerate()
        .map(|(i, kind)| {
            let n = required_points(&kind).unwrap();
            let mut cloud = generate_points(kind.dimension(), n, 100 + i as u64, 1.0).unwrap();
            if let ProblemKind::ColoredPolygon { r, .. } = kind {
                cloud = cloud.with_colors((0..n).map(|j| j / r).collect()).unwrap();
            }
            (kind, cloud)
        })
        .collect()
}

fn table_for(kind: &ProblemKind, cloud: &PointCloud) -> (ProblemSetup, MapTable) {
    let setup = ProblemSetup::new(kind, cloud).unwrap();
    let table = build_map_table(&setup.target, &setup.values).unwrap();
    (setup, table)
}

#[test]
fn class_barycenters_vanish() {
    for (kind, cloud) in instances() {
        let (setup, table) = table_for(&kind, &cloud);
        assert_eq!(table.dim(), setup.target.simplex_dim(), "{}", kind.name());
        assert!(table.worst_class_sum() < 1e-10, "{}", kind.name());
    }
}

#[test]
fn map_is_blockwise_equivariant() {
    for (kind, cloud) in instances() {
        let (setup, table) = table_for(&kind, &cloud);
        let space = table.space().unwrap();
        let group = setup.target.group();
        for j in 0..table.classes().len() {
            for (gi, g) in group.elements().enumerate() {
                for shift in group.elements() {
                    let moved = group.index_of(&group.add(&g, &shift)).unwrap();
                    let acted = space.act(&shift, table.vector(j, gi));
                    let direct = table.vector(j, moved);
                    let err = acted
                        .iter()
                        .zip(direct)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    assert!(err < 1e-10, "{} point {j} g={g} shift={shift}: {err}", kind.name());
                }
            }
        }
    }
}

#[test]
fn grouping_is_zero_faithful() {
    for (kind, cloud) in instances() {
        let (setup, table) = table_for(&kind, &cloud);
        let group = setup.target.group();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let selection: Vec<usize> = (0..cloud.len()).map(|_| rng.random_range(0..group.order())).collect();
            // sparse weights exercise empty parts too
            let mut weights: Vec<f64> = (0..cloud.len())
                .map(|_| if rng.random_bool(0.3) { 0.0 } else { rng.random::<f64>() })
                .collect();
            if weights.iter().all(|&t| t == 0.0) {
                weights[0] = 1.0;
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|t| *t /= total);
            let direct = table.weighted_sum(&selection, &weights);
            let grouped = join_grouping(group, &selection, &weights).unwrap();
            let via = evaluate_on_partition(&setup.target, &setup.values, &grouped);
            let err = direct.iter().zip(&via).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-9, "{}: {err}", kind.name());
        }
    }
}

#[test]
fn pivoting_is_monotone_on_every_kind() {
    for (kind, cloud) in instances() {
        let (_, table) = table_for(&kind, &cloud);
        for seed in 0..5 {
            let out = solve(&table, &SolverOptions { seed, ..Default::default() });
            assert_eq!(out.report.status, SolverStatus::Zero, "{}", kind.name());
            assert!(out.report.is_monotone(), "{}", kind.name());
        }
    }
}

#[test]
fn surjection_count_identity() {
    // 3!·S(5,3) = 6·25
    assert_eq!(Surjections::new(5, 3, false).count(), 150);
    assert_eq!(Surjections::new(5, 3, true).count(), 50);
    // 4!·S(7,4) = 24·350
    assert_eq!(Surjections::new(7, 4, false).count(), 8400);
}
