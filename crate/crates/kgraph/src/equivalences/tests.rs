use super::checks::*;
use super::family::{CocycleFamily, FamilyFG, LocallyConstant};
use super::maps::{BoundaryMap, PhiMap, RelabelMap, SameSkeletonMap};
use super::space::{Pt, SArrow, Space};
use crate::boundary::{self, BoundaryPath};
use crate::degree::{Degree, ZVec};
use crate::error::EquivError;
use crate::fixtures::*;
use crate::graph::KGraph;
use crate::sampling;
use std::sync::Arc;

fn deg(v: &[u32]) -> Degree {
    Degree(v.to_vec())
}

fn fin_space(g: KGraph) -> Space {
    Space::Fin(Arc::new(g))
}

fn fin_samples(g: &KGraph, seed: u64, count: usize) -> Vec<Pt> {
    sampling::boundary_samples(g, seed, count).into_iter().map(Pt::Fin).collect()
}

fn omega_samples(k: usize, count: usize) -> Vec<Pt> {
    (0..count as u64)
        .map(|i| Pt::Omega(crate::degree::graded_lex_unrank(k, i)))
        .collect()
}

#[test]
fn identity_coe_on_t2() {
    let space = fin_space(t2());
    let h = BoundaryMap::Identity { space: space.clone() };
    let fam = CocycleFamily::identity(&space, &deg(&[2, 2]), true);
    fam.validate(&space, &space).unwrap();
    let samples = fin_samples(space.graph().unwrap(), 0, 10);
    let degrees = deg(&[2, 2]).box_iter();
    let report = check_coe(&h, &fam, &samples, &degrees, 3).unwrap();
    assert!(report.passed, "{report:?}");
    let report = check_period_preserving(&h, &fam, &samples, 2).unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn omega_identity_coe_rank_one() {
    let phi = PhiMap::GradedLex { k1: 1, k2: 1 };
    let (h, fam) = omega_coe(&phi, &deg(&[3]), &deg(&[3])).unwrap();
    let samples = omega_samples(1, 20);
    let report = check_coe(&h, &fam, &samples, &deg(&[3]).box_iter(), 3).unwrap();
    assert!(report.passed, "{report:?}");
    // graded-lex on rank 1 is the identity map
    let Pt::Omega(img) = h.eval(&Pt::Omega(deg(&[5]))).unwrap() else { panic!() };
    assert_eq!(img, deg(&[5]));
}

#[test]
fn omega_cross_rank_coe() {
    let phi = PhiMap::GradedLex { k1: 1, k2: 2 };
    let (h, fam) = omega_coe(&phi, &deg(&[3]), &deg(&[3, 3])).unwrap();
    let samples = omega_samples(1, 50);
    let report = check_coe(&h, &fam, &samples, &deg(&[3]).box_iter(), 3).unwrap();
    assert!(report.passed, "{report:?}");
    let report = check_period_preserving(&h, &fam, &samples, 2).unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn omega_coe_with_wrong_g_fails_with_witness() {
    let phi = PhiMap::GradedLex { k1: 1, k2: 2 };
    let (h, mut fam) = omega_coe(&phi, &deg(&[2]), &deg(&[2, 2])).unwrap();
    // corrupt: g_m := f_m (drop the +m offset)
    for (_, row) in fam.forward.iter_mut() {
        row.g = row.f.clone();
    }
    let samples = omega_samples(1, 10);
    let report = check_coe(&h, &fam, &samples, &deg(&[2]).box_iter(), 3).unwrap();
    assert!(!report.passed);
    let block = report.blocks.iter().find(|b| b.name == "orbit_forward").unwrap();
    assert!(!block.failures.is_empty());
}

#[test]
fn omega_coordinate_swap_passes_coe_but_not_graded() {
    let phi = PhiMap::CoordPerm { perm: vec![1, 0] };
    let (h, fam) = omega_coe(&phi, &deg(&[2, 2]), &deg(&[2, 2])).unwrap();
    let samples = omega_samples(2, 25);
    let degrees = deg(&[2, 2]).box_iter();
    let report = check_coe(&h, &fam, &samples, &degrees, 3).unwrap();
    assert!(report.passed, "{report:?}");
    let graded =
        check_graded(&h, &fam, &SpaceFunctor::Degree, &SpaceFunctor::Degree, &samples, &degrees)
            .unwrap();
    assert!(!graded.passed, "the swap is not graded for η = d");
    // while the trivial group grading always passes
    let trivial =
        check_graded(&h, &fam, &SpaceFunctor::Trivial, &SpaceFunctor::Trivial, &samples, &degrees)
            .unwrap();
    assert!(trivial.passed);
}

#[test]
fn phi_table_patch_is_bijective() {
    // swap the images of ranks 0 and 1 on top of graded-lex
    let phi = PhiMap::Table {
        k1: 1,
        k2: 2,
        rule: vec![
            (deg(&[0]), crate::degree::graded_lex_unrank(2, 1)),
            (deg(&[1]), crate::degree::graded_lex_unrank(2, 0)),
        ],
    };
    phi.validate().unwrap();
    let mut seen = std::collections::HashSet::new();
    for i in 0..30u32 {
        let img = phi.eval(&deg(&[i]));
        assert!(seen.insert(img.clone()), "collision at {i}: {img:?}");
        let back = phi.inverse().eval(&img);
        assert_eq!(back, deg(&[i]));
    }
    let bad = PhiMap::Table {
        k1: 1,
        k2: 2,
        rule: vec![(deg(&[0]), deg(&[1, 1])), (deg(&[1]), deg(&[1, 1]))],
    };
    assert!(matches!(bad.validate(), Err(EquivError::NotBijective(_))));
}

#[test]
fn same_skeleton_identity_when_graphs_equal() {
    let g = Arc::new(tt2());
    let map = SameSkeletonMap::new(g.clone(), g.clone()).unwrap();
    for x in sampling::boundary_samples(&g, 0, 10) {
        let y = map.bp(&x).unwrap();
        assert!(boundary::eq(&g, &x, &y));
    }
}

#[test]
fn same_skeleton_flip_swap_roundtrip() {
    let swap = Arc::new(tt2());
    let flip = Arc::new(tt2_flip());
    let fwd = SameSkeletonMap::new(swap.clone(), flip.clone()).unwrap();
    let bwd = fwd.inverse();
    for x in sampling::boundary_samples(&swap, 1, 20) {
        let y = fwd.bp(&x).unwrap();
        // degree preserved
        assert_eq!(x.degree, y.degree);
        let back = bwd.bp(&y).unwrap();
        assert!(boundary::eq(&swap, &x, &back), "roundtrip failed");
    }
    // cylinder into cylinder: image of Z(λ) sits inside Z(φ(λ))
    let v = swap.vertex_by_name("v").unwrap();
    for lam in swap.enumerate_paths_upto(v, &deg(&[2, 2])) {
        if lam.degree.is_zero() {
            continue;
        }
        let lam2 = fwd.path(&lam);
        assert_eq!(lam.degree, lam2.degree);
        for x in sampling::boundary_samples(&swap, 5, 12) {
            if !boundary::in_cylinder(&swap, &x, &lam, &[]).unwrap() {
                continue;
            }
            let y = fwd.bp(&x).unwrap();
            assert!(
                boundary::in_cylinder(&flip, &y, &lam2, &[]).unwrap(),
                "image leaves the cylinder"
            );
        }
    }
}

#[test]
fn same_skeleton_rejects_rank_or_skeleton_mismatch() {
    let a = Arc::new(tt2());
    let b = Arc::new(t2());
    assert!(matches!(
        SameSkeletonMap::new(a.clone(), b.clone()),
        Err(EquivError::SkeletonMismatch(_))
    ));
    let c = Arc::new(two_loops());
    assert!(matches!(
        SameSkeletonMap::new(c.clone(), c.clone()),
        Err(EquivError::RankUnsupported)
    ));
}

#[test]
fn cocycles_from_identity_iso() {
    for g in [t2(), tt2()] {
        let space = fin_space(g);
        let h = BoundaryMap::Identity { space: space.clone() };
        let phi = ArrowMap::PointLifted { h: h.clone() };
        let samples = fin_samples(space.graph().unwrap(), 2, 12);
        let fam = cocycles_from_iso(&phi, &deg(&[2, 2]), &samples, 4).unwrap();
        // f = 0 and g_m = m on every sample
        for m in deg(&[2, 2]).box_iter() {
            for x in &samples {
                assert_eq!(fam.f(&space, &m, x).unwrap(), deg(&[0, 0]));
                assert_eq!(fam.g(&space, &m, x).unwrap(), m);
            }
        }
        let report = check_coe(&h, &fam, &samples, &deg(&[2, 2]).box_iter(), 3).unwrap();
        assert!(report.passed, "{report:?}");
        // the induced homomorphism agrees with the identity on arrows
        let induced = induced_groupoid_hom(&h, &fam);
        for a in arrow_samples_space(&space, 7, 25) {
            let img = induced.eval(&a).unwrap();
            assert!(img.eq(&space, &a));
        }
        let arrows = arrow_samples_space(&space, 9, 20);
        let rep = check_arrow_map(&induced, &arrows).unwrap();
        assert!(rep.passed, "{rep:?}");
    }
}

fn arrow_samples_space(space: &Space, seed: u64, count: usize) -> Vec<SArrow> {
    match space {
        Space::Fin(g) => sampling::arrow_samples(g, seed, count)
            .into_iter()
            .map(|a| {
                SArrow::new(space, Pt::Fin(a.x), a.m, Pt::Fin(a.y), a.witness).unwrap()
            })
            .collect(),
        _ => panic!("only finite spaces sampled here"),
    }
}

#[test]
fn cocycles_from_relabel_iso() {
    let from = Arc::new(t2());
    let to = Arc::new(t2_prime());
    let map = RelabelMap::by_name(from.clone(), to.clone(), &[("b", "b2"), ("r", "r2")]).unwrap();
    let h = BoundaryMap::Relabel { map };
    let src = h.source();
    let phi = ArrowMap::PointLifted { h: h.clone() };
    let samples = fin_samples(&from, 3, 10);
    let fam = cocycles_from_iso(&phi, &deg(&[2, 2]), &samples, 4).unwrap();
    let report = check_coe(&h, &fam, &samples, &deg(&[2, 2]).box_iter(), 3).unwrap();
    assert!(report.passed, "{report:?}");
    let induced = induced_groupoid_hom(&h, &fam);
    for a in arrow_samples_space(&src, 11, 25) {
        let img = induced.eval(&a).unwrap();
        let direct = phi.eval(&a).unwrap();
        assert!(img.eq(&h.target(), &direct), "induced map must agree with the relabeling");
    }
}

#[test]
fn cocycles_from_stab_embedding() {
    let g = Arc::new(t2());
    let h = BoundaryMap::StabEmbed { graph: g.clone() };
    let phi = ArrowMap::PointLifted { h: h.clone() };
    let samples = fin_samples(&g, 4, 8);
    let fam = cocycles_from_iso(&phi, &deg(&[2, 2]), &samples, 4).unwrap();
    let report = check_coe(&h, &fam, &samples, &deg(&[2, 2]).box_iter(), 3).unwrap();
    assert!(report.passed, "{report:?}");
    let induced = induced_groupoid_hom(&h, &fam);
    let src = h.source();
    for a in arrow_samples_space(&src, 13, 20) {
        let img = induced.eval(&a).unwrap();
        let direct = phi.eval(&a).unwrap();
        assert!(img.eq(&h.target(), &direct));
    }
}

#[test]
fn corrupted_family_triggers_witness_disagreement() {
    let space = fin_space(tt2());
    let g = space.graph().unwrap();
    let h = BoundaryMap::Identity { space: space.clone() };
    let mut fam = CocycleFamily::identity(&space, &deg(&[2, 2]), false);
    // corrupt one row so p_m is no longer coherent: g_{(1,0)} := (2,0) via a
    // non-constant override on the cylinder partition
    let e1 = g.path_of_edge(g.edge_by_name("e1").unwrap());
    let rows = vec![
        (crate::cylinders::CylPiece::plain(e1.clone()), deg(&[2, 0])),
        (
            crate::cylinders::CylPiece {
                root: g.vertex_path(e1.range),
                exclusions: vec![e1.clone()],
            },
            deg(&[1, 0]),
        ),
    ];
    fam.forward.insert(
        deg(&[1, 0]),
        FamilyFG {
            f: LocallyConstant::Constant(deg(&[0, 0])),
            g: LocallyConstant::Cylinders(rows),
        },
    );
    let induced = induced_groupoid_hom(&h, &fam);
    // an isotropy arrow whose two witnesses see different g-rows
    let f_edge = g.path_of_edge(g.edge_by_name("f").unwrap());
    let x = BoundaryPath::periodic(g, g.compose(&e1, &f_edge).unwrap()).unwrap();
    let sx = boundary::shift(g, &x, &deg(&[1, 1])).unwrap();
    let a = SArrow::new(
        &space,
        Pt::Fin(x),
        ZVec(vec![1, 1]),
        Pt::Fin(sx),
        (deg(&[1, 1]), deg(&[0, 0])),
    )
    .unwrap();
    match induced.eval(&a) {
        Err(EquivError::WitnessDisagreement(_)) => {}
        other => panic!("expected WitnessDisagreement, got {other:?}"),
    }
}

#[test]
fn eventual_conjugacy_identity_and_relabeling() {
    // identity with f = 0
    let space = fin_space(t2());
    let h = BoundaryMap::Identity { space: space.clone() };
    let fam = CocycleFamily::identity(&space, &deg(&[2, 2]), true);
    let samples = fin_samples(space.graph().unwrap(), 0, 6);
    let report =
        check_eventual_conjugacy(&h, &fam, &samples, &deg(&[2, 2]).box_iter()).unwrap();
    assert!(report.passed, "{report:?}");

    // relabeling conjugacy of T2
    let from = Arc::new(t2());
    let to = Arc::new(t2_prime());
    let map = RelabelMap::by_name(from.clone(), to.clone(), &[("b", "b2"), ("r", "r2")]).unwrap();
    let h = BoundaryMap::Relabel { map };
    let src = h.source();
    let fam = CocycleFamily::identity(&src, &deg(&[2, 2]), true);
    let samples = fin_samples(&from, 1, 6);
    let report =
        check_eventual_conjugacy(&h, &fam, &samples, &deg(&[2, 2]).box_iter()).unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn eventual_conjugacy_nonexample_fails_with_witness() {
    // the same-skeleton refactor between the swap and flip graphs is a
    // homeomorphism but not a conjugacy: with f = 0 the intertwining fails
    let swap = Arc::new(tt2());
    let flip = Arc::new(tt2_flip());
    let map = SameSkeletonMap::new(swap.clone(), flip.clone()).unwrap();
    let h = BoundaryMap::SameSkeleton { map };
    let src = h.source();
    let fam = CocycleFamily::identity(&src, &deg(&[2, 2]), true);
    let samples = fin_samples(&swap, 2, 16);
    let report =
        check_eventual_conjugacy(&h, &fam, &samples, &deg(&[2, 2]).box_iter()).unwrap();
    assert!(!report.passed, "flip vs swap must not be conjugate via the staircase map");
    let block = report.blocks.iter().find(|b| b.name == "eventual_forward").unwrap();
    assert!(!block.failures.is_empty());
}

#[test]
fn rank_mismatch_rejected_for_eventual_conjugacy() {
    let phi = PhiMap::GradedLex { k1: 1, k2: 2 };
    let (h, fam) = omega_coe(&phi, &deg(&[2]), &deg(&[2, 2])).unwrap();
    let samples = omega_samples(1, 5);
    assert!(matches!(
        check_eventual_conjugacy(&h, &fam, &samples, &deg(&[2]).box_iter()),
        Err(EquivError::RankMismatch(1, 2))
    ));
}

#[test]
fn aperiodicity_verdicts() {
    assert!(matches!(is_aperiodic(&t2(), 2), AperiodicityVerdict::Periodic { .. }));
    assert!(matches!(is_aperiodic(&two_loops(), 2), AperiodicityVerdict::Aperiodic { .. }));
    assert!(matches!(
        is_aperiodic_space(&Space::OmegaInf(2), 2),
        AperiodicityVerdict::Aperiodic { .. }
    ));
}

#[test]
fn family_validation_catches_overlap_and_gap() {
    let space = fin_space(tt2());
    let g = space.graph().unwrap();
    let e1 = g.path_of_edge(g.edge_by_name("e1").unwrap());
    let e2 = g.path_of_edge(g.edge_by_name("e2").unwrap());
    // gap: only the e1 cylinder is covered at degree (1,0)
    let mut fam = CocycleFamily::identity(&space, &deg(&[1, 1]), false);
    fam.forward.get_mut(&deg(&[1, 0])).unwrap().g = LocallyConstant::Cylinders(vec![(
        crate::cylinders::CylPiece::plain(e1.clone()),
        deg(&[1, 0]),
    )]);
    assert!(matches!(
        fam.validate(&space, &space),
        Err(EquivError::CoverGap(_))
    ));
    // overlap: the vertex cylinder overlaps the e1 cylinder
    let mut fam = CocycleFamily::identity(&space, &deg(&[1, 1]), false);
    fam.forward.get_mut(&deg(&[1, 0])).unwrap().g = LocallyConstant::Cylinders(vec![
        (crate::cylinders::CylPiece::plain(g.vertex_path(e1.range)), deg(&[1, 0])),
        (crate::cylinders::CylPiece::plain(e2.clone()), deg(&[1, 0])),
    ]);
    assert!(matches!(
        fam.validate(&space, &space),
        Err(EquivError::WitnessDisagreement(_))
    ));
}
