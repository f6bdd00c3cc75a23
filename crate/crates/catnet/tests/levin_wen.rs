use catnet::category::*;
use catnet::levin_wen::*;
use catnet::linalg::seeded_rng;
use catnet::report::Status;
use catnet::Error;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn rect(x0: i32, y0: i32, x1: i32, y1: i32) -> Rect {
    Rect::new(x0, y0, x1, y1).unwrap()
}

fn bulk(cat: &FusionCategory, w: i32, h: i32) -> LevinWen {
    LevinWen::new(cat, LwLattice { width: w, height: h, boundary: false }).unwrap()
}

fn vec_boundary(w: i32, h: i32) -> LevinWen {
    let cat = vec_zn(2);
    let m = vec_over_zn(&cat, 2).normalize_trace(&cat, &[1]).unwrap();
    LevinWen::with_module(&cat, &m, LwLattice { width: w, height: h, boundary: true }).unwrap()
}

fn regular_boundary(w: i32, h: i32) -> LevinWen {
    let cat = vec_zn(2);
    let m = ModuleCategory::regular(&cat).normalize_trace(&cat, &[1, 1]).unwrap();
    LevinWen::with_module(&cat, &m, LwLattice { width: w, height: h, boundary: true }).unwrap()
}

#[test]
fn vertex_space_dimensions() {
    assert_eq!(bulk(&vec_zn(2), 3, 3).bulk_space().dim(), 8);
    assert_eq!(bulk(&vec_zn(3), 3, 3).bulk_space().dim(), 27);
    assert_eq!(bulk(&fibonacci(), 3, 3).bulk_space().dim(), 13);
    assert_eq!(vec_boundary(3, 3).boundary_space().unwrap().dim(), 2);
    assert_eq!(regular_boundary(3, 3).boundary_space().unwrap().dim(), 4);
}

#[test]
fn unnormalized_module_is_rejected() {
    let cat = vec_zn(2);
    let m = vec_over_zn(&cat, 2);
    let r = LevinWen::with_module(&cat, &m, LwLattice { width: 3, height: 3, boundary: true });
    assert!(matches!(r, Err(Error::UnnormalizedTrace)));
}

#[test]
fn surround_classification() {
    let d = rect(0, 0, 2, 2);
    assert_eq!(surround(&Rect::site(1, 1), &d, false), Some(Surround::Complete));
    assert_eq!(surround(&Rect::site(1, 2), &d, false), Some(Surround::Cut(Side::Top)));
    assert_eq!(surround(&Rect::site(2, 2), &d, false), None);
    assert_eq!(surround(&Rect::site(1, 1), &rect(0, 0, 2, 1), false), None);
    assert_eq!(surround(&Rect::site(0, 1), &d, true), Some(Surround::BoundaryComplete));
    assert_eq!(surround(&rect(0, 2, 1, 2), &d, true), Some(Surround::BoundaryCut(Side::Top)));
    assert_eq!(surround(&rect(0, 1, 2, 1), &d, true), None);
    assert_eq!(surrounding_family(&Rect::site(1, 2), &d, false).len(), 4);
    assert_eq!(surrounding_family(&rect(0, 2, 1, 2), &d, true).len(), 3);
}

#[test]
fn skein_identification_vec_z2() {
    let lw = bulk(&vec_zn(2), 4, 4);
    for r in [Rect::site(1, 1), rect(0, 0, 1, 1), rect(0, 0, 2, 1), rect(0, 0, 1, 2)] {
        let (sm, rep) = lw.skein_identification(&r, TOL).unwrap();
        assert!(rep.passed(), "{r:?}: {:?}", rep.failures().collect::<Vec<_>>());
        assert_eq!(sm.dim(), 1 << (lw.boundary_legs(&r) - 1));
    }
}

#[test]
fn skein_identification_fibonacci() {
    let lw = bulk(&fibonacci(), 3, 3);
    let (sm, rep) = lw.skein_identification(&rect(0, 0, 1, 1), TOL).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    assert_eq!(sm.dim(), 610);
}

#[test]
fn skein_identification_boundary() {
    for lw in [vec_boundary(4, 4), regular_boundary(4, 4)] {
        for r in [Rect::site(0, 1), rect(0, 0, 1, 1), rect(0, 0, 2, 1), rect(1, 0, 2, 1)] {
            let (_, rep) = lw.skein_identification(&r, TOL).unwrap();
            assert!(rep.passed(), "{r:?}: {:?}", rep.failures().collect::<Vec<_>>());
        }
    }
}

#[test]
fn patch_projectors_commute() {
    let lw = bulk(&vec_zn(2), 3, 3);
    let r = rect(0, 0, 1, 1);
    let mut ops = Vec::new();
    for e in lw.edges(&r) {
        ops.push(lw.edge_projector(&r, e).unwrap());
    }
    for p in lw.plaquettes(&r) {
        ops.push(lw.plaquette_projector(&r, p).unwrap());
    }
    assert_eq!(ops[0].dim(), 4096);
    for (i, a) in ops.iter().enumerate() {
        assert!(a.projector_residual() < 1e-10);
        for b in &ops[i + 1..] {
            assert!(a.commutator_norm(b) < 1e-10);
        }
    }
    let p = lw.region_projector(&r).unwrap();
    assert!((p.trace().re - 128.0).abs() < 1e-9);
}

#[test]
fn plaquette_matches_pauli_form() {
    let lw = bulk(&vec_zn(2), 3, 3);
    assert!(lw.pauli_form_residual((0, 0)).unwrap() < 1e-12);
    assert!(lw.pauli_form_residual((1, 1)).unwrap() < 1e-12);
    assert!(bulk(&fibonacci(), 3, 3).pauli_form_residual((0, 0)).is_err());
}

#[test]
fn gluing_is_a_star_homomorphism() {
    let lw = bulk(&vec_zn(3), 3, 3);
    let lam = rect(0, 1, 1, 1);
    let cut = lw.cut_word(&lam, Side::Top).unwrap();
    let space = lw.engine().space(&cut).unwrap();
    let mut rng = seeded_rng(7);
    let f = catnet::homspace::Morphism::random(&space, &space, &mut rng).unwrap();
    let g = catnet::homspace::Morphism::random(&space, &space, &mut rng).unwrap();
    let gf = lw.gluing_operator(&lam, &f).unwrap();
    let gg = lw.gluing_operator(&lam, &g).unwrap();
    let gfg = lw.gluing_operator(&lam, &f.compose(&g).unwrap()).unwrap();
    assert!((&gfg.mat - &(&gf.mat * &gg.mat)).max_abs() < 1e-10);
    let gd = lw.gluing_operator(&lam, &f.dagger()).unwrap();
    assert!((&gd.mat - &gf.mat.adjoint()).max_abs() < 1e-10);
    let id = lw.gluing_operator(&lam, &catnet::homspace::Morphism::identity(&space)).unwrap();
    let p = lw.region_projector(&lam).unwrap();
    assert!((&id.mat - &p.mat).max_abs() < 1e-10);
}

#[test]
fn boundary_algebra_bulk_cut() {
    let lw = bulk(&vec_zn(2), 5, 4);
    let ba = lw.extract_boundary_algebra(&rect(1, 2, 2, 2), &rect(0, 0, 3, 2), TOL).unwrap();
    assert_eq!(ba.dim(), 8);
    assert_eq!(ba.center_dim, 2);
    assert!(ba.gluing_distance < TOL);
    assert!(ba.report(TOL).passed());
}

#[test]
fn boundary_algebra_corner_cut() {
    let lw = vec_boundary(4, 4);
    let ba = lw.extract_boundary_algebra(&rect(0, 2, 1, 2), &rect(0, 0, 2, 2), TOL).unwrap();
    assert_eq!(ba.dim(), 4);
    assert_eq!(ba.center_dim, 1);
    assert!(ba.report(TOL).passed());
}

#[test]
fn lto_suite_bulk() {
    let lw = bulk(&vec_zn(2), 5, 5);
    let rep = lw.lto_suite(&[1, 2, 3, 4], TOL).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
}

#[test]
fn lto_suite_boundary() {
    for lw in [vec_boundary(4, 5), regular_boundary(4, 5)] {
        let rep = lw.lto_suite(&[1, 2, 3, 4], TOL).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    }
}

#[test]
fn lto1_rejects_a_cut_geometry() {
    let lw = bulk(&vec_zn(2), 4, 4);
    let case = LtoCase { axiom: 1, lam: Rect::site(1, 2), delta: rect(0, 0, 2, 2), lam2: None, delta2: None };
    assert!(matches!(lw.lto_check(&case, TOL), Err(Error::Geometry(_))));
}

#[test]
fn sparse_cap_is_enforced() {
    let lw = bulk(&vec_zn(2), 4, 4).with_limits(Limits { dense: 100, sparse: 1000 });
    assert!(matches!(lw.skein_map(&rect(0, 0, 2, 2)), Err(Error::Resource(_))));
    let skip = lw.lto_suite(&[1], TOL);
    assert!(skip.is_err() || skip.unwrap().items.iter().all(|i| i.status != Status::Fail));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn evaluation_is_a_coisometry(x0 in 0i32..2, y0 in 0i32..2, w in 1i32..3, h in 1i32..3, n in 2usize..4) {
        let lw = bulk(&vec_zn(n), 4, 4);
        let r = rect(x0, y0, x0 + w - 1, y0 + h - 1);
        prop_assume!(lw.matched_count(&r, 20_000).unwrap() <= 20_000);
        let sm = lw.skein_map(&r).unwrap();
        prop_assert!(sm.coisometry_residual() < 1e-10);
        prop_assert_eq!(sm.dim(), lw.skein_dim(&r).unwrap());
        let p = sm.projector();
        prop_assert!((&(&p * &p) - &p).max_abs() < 1e-10);
        prop_assert!((p.trace().re - sm.dim() as f64).abs() < 1e-8);
    }

    #[test]
    fn boundary_evaluation_is_a_coisometry(y0 in 0i32..2, w in 1i32..3, h in 1i32..3) {
        let lw = regular_boundary(4, 4);
        let r = rect(0, y0, w - 1, y0 + h - 1);
        let sm = lw.skein_map(&r).unwrap();
        prop_assert!(sm.coisometry_residual() < 1e-10);
    }
}
