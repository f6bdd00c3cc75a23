use catnet::levin_wen::{Edge, LtoCase, Rect};
use catnet::pauli::*;
use catnet::Error;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn rect(x0: i32, y0: i32, x1: i32, y1: i32) -> Rect {
    Rect::new(x0, y0, x1, y1).unwrap()
}

#[test]
fn generator_shapes() {
    let smooth = ToricCode::new(4, 4, PauliBoundary::Smooth);
    assert_eq!(smooth.star((0, 2)).unwrap().edges.len(), 3);
    assert_eq!(smooth.star((1, 2)).unwrap().edges.len(), 4);
    assert_eq!(smooth.plaquette((0, 2)).unwrap().edges.len(), 4);
    let rough = ToricCode::new(4, 4, PauliBoundary::Rough);
    assert!(rough.star((0, 2)).is_none());
    assert_eq!(rough.plaquette((0, 2)).unwrap().edges.len(), 3);
    assert_eq!(smooth.edges(&rect(1, 1, 3, 3)).len(), 12);
}

#[test]
fn single_site_states() {
    let code = ToricCode::new(4, 4, PauliBoundary::Bulk);
    let d = rect(0, 0, 3, 3);
    let e = Edge { x: 1, y: 1, north: false };
    assert_eq!(code.compress(&d, &PauliString::identity()).unwrap().state, 1.0);
    for (x, z) in [(true, false), (false, true), (true, true)] {
        let c = code.compress(&d, &code.edge_string(&d, e, x, z).unwrap()).unwrap();
        assert_eq!((c.state, c.residual), (0.0, 0.0));
    }
    for g in [code.star((1, 1)).unwrap(), code.plaquette((1, 1)).unwrap()] {
        let c = code.compress(&d, &code.generator_string(&d, &g).unwrap()).unwrap();
        assert_eq!((c.state, c.residual), (1.0, 0.0));
    }
}

#[test]
fn logical_string_is_not_proportional() {
    // a Z string across the open region commutes with all generators inside but is not a stabilizer
    let code = ToricCode::new(4, 4, PauliBoundary::Bulk);
    let d = rect(0, 0, 2, 2);
    let mut p = PauliString::identity();
    for x in 0..3 {
        p.z |= code.edge_string(&d, Edge { x, y: 0, north: true }, false, true).unwrap().z;
    }
    let c = code.compress(&d, &p).unwrap();
    assert_eq!(c.residual, 1.0);
}

#[test]
fn bulk_suite_passes() {
    let rep = ToricCode::new(4, 4, PauliBoundary::Bulk).lto_suite(&[1, 2, 3, 4], TOL).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    assert!(rep.items.iter().any(|i| i.name == "lto1.1/compression_scalar"));
}

#[test]
fn boundary_suites_pass() {
    for b in [PauliBoundary::Smooth, PauliBoundary::Rough] {
        let rep = ToricCode::new(4, 4, b).lto_suite(&[1, 2, 3, 4], TOL).unwrap();
        assert!(rep.passed(), "{b:?}: {:?}", rep.failures().collect::<Vec<_>>());
    }
}

#[test]
fn two_edge_cut_has_dimension_eight() {
    let code = ToricCode::new(4, 4, PauliBoundary::Bulk);
    assert_eq!(code.boundary_log_dim(&rect(1, 2, 3, 3), &rect(0, 0, 4, 3)).unwrap(), 3);
}

#[test]
fn dropped_boundary_star_fails_lto1() {
    let case = LtoCase { axiom: 1, lam: rect(0, 1, 1, 3), delta: rect(0, 0, 2, 4), lam2: None, delta2: None };
    let good = ToricCode::new(4, 4, PauliBoundary::Smooth);
    assert!(good.lto_check(&case, TOL).unwrap().passed());
    let bad = good.without_star((0, 2));
    assert!(!bad.lto_check(&case, TOL).unwrap().passed());
}

#[test]
fn open_patch_dimensions() {
    assert_eq!(ToricCode::open_patch_dim(&Rect::site(0, 0)).unwrap(), 8);
    assert_eq!(ToricCode::open_patch_dim(&rect(0, 0, 1, 1)).unwrap(), 128);
    assert_eq!(ToricCode::open_patch_dim(&rect(0, 0, 1, 2)).unwrap(), 512);
}

#[test]
fn frame_limit_is_enforced() {
    let code = ToricCode::new(8, 8, PauliBoundary::Bulk);
    assert!(matches!(code.frame(&rect(0, 0, 8, 8)), Err(Error::Resource(_))));
}

#[test]
fn backends_agree() {
    let rep = backend_agreement(TOL).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
}

proptest! {
    #[test]
    fn generators_commute(x0 in 0i32..3, y0 in 0i32..3, w in 1i32..4, h in 1i32..4, b in 0usize..3) {
        let boundary = [PauliBoundary::Bulk, PauliBoundary::Smooth, PauliBoundary::Rough][b];
        let code = ToricCode::new(8, 8, boundary);
        let d = rect(x0, y0, x0 + w, y0 + h);
        let gens = code.generators(&d);
        let strings: Vec<_> = gens.iter().map(|g| code.generator_string(&d, g).unwrap()).collect();
        for a in &strings {
            for c in &strings {
                prop_assert!(a.commutes(c));
            }
            prop_assert_eq!(code.compress(&d, a).unwrap().state, 1.0);
        }
    }

    #[test]
    fn products_of_generators_are_stabilizers(mask in 0u64..(1 << 12)) {
        let code = ToricCode::new(4, 4, PauliBoundary::Bulk);
        let d = rect(0, 0, 3, 3);
        let gens = code.generators(&d);
        let mut p = PauliString::identity();
        for (k, g) in gens.iter().enumerate().take(12) {
            if mask >> k & 1 == 1 {
                let s = code.generator_string(&d, g).unwrap();
                p.x ^= s.x;
                p.z ^= s.z;
            }
        }
        let c = code.compress(&d, &p).unwrap();
        prop_assert_eq!((c.state, c.residual), (1.0, 0.0));
    }
}
