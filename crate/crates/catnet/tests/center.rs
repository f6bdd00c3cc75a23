use catnet::algebra::Chain;
use catnet::category::{builtin, fib_center, fibonacci, ising, toric_center, vec_zn, Builtin, CentralFunctor};
use catnet::center::{
    braided_functor_check, dhr_braiding, dhr_report, enriched_dhr_truncation, muger_center, muger_centralizer, monodromy_residual,
    partition_of_unity, tube_algebra, tube_irreps, tube_report, DerivedCenter,
};
use catnet::linalg::{re, seeded_rng};
use proptest::prelude::*;

const PHI: f64 = 1.618_033_988_749_895;

fn forgetful() -> CentralFunctor {
    match builtin("central:forgetful_toric").unwrap() {
        Builtin::Central(f) => f,
        _ => unreachable!(),
    }
}

#[test]
fn tube_dimensions() {
    assert_eq!(tube_algebra(&vec_zn(2)).unwrap().dim(), 4);
    assert_eq!(tube_algebra(&vec_zn(3)).unwrap().dim(), 9);
    assert_eq!(tube_algebra(&fibonacci()).unwrap().dim(), 7);
}

#[test]
fn tube_is_unital_and_associative() {
    for cat in [vec_zn(3), fibonacci(), ising()] {
        let t = tube_algebra(&cat).unwrap();
        assert!(t.associativity_residual() < 1e-10, "{}", cat.name());
        assert!(t.unit_residual() < 1e-10, "{}", cat.name());
    }
}

#[test]
fn vec_z2_has_four_abelian_sectors() {
    let t = tube_algebra(&vec_zn(2)).unwrap();
    let irr = tube_irreps(&t, 1e-9, &mut seeded_rng(1)).unwrap();
    assert_eq!(irr.block_sizes(), vec![1, 1, 1, 1]);
    assert!(irr.dims().iter().all(|d| (d - 1.0).abs() < 1e-12));
    assert!(irr.hexagon_residual < 1e-10);
    assert!(irr.idempotent_residual < 1e-10 && irr.completeness_residual < 1e-10);
}

#[test]
fn fibonacci_center_blocks() {
    let t = tube_algebra(&fibonacci()).unwrap();
    let irr = tube_irreps(&t, 1e-9, &mut seeded_rng(2)).unwrap();
    assert_eq!(irr.block_sizes(), vec![1, 1, 1, 2]);
    let want = [1.0, PHI, PHI, PHI * PHI];
    for (d, w) in irr.dims().iter().zip(want) {
        assert!((d - w).abs() < 1e-9, "{d} vs {w}");
    }
    let big = fibonacci().global_dim();
    assert!((irr.dim_square_sum() - big * big).abs() < 1e-9);
    assert!(irr.hexagon_residual < 1e-9);
}

#[test]
fn ising_dimension_sum() {
    let cat = ising();
    let irr = tube_irreps(&tube_algebra(&cat).unwrap(), 1e-9, &mut seeded_rng(3)).unwrap();
    assert_eq!(irr.simples.len(), 9);
    assert!((irr.dim_square_sum() - cat.global_dim().powi(2)).abs() < 1e-9);
}

#[test]
fn tube_report_passes() {
    for cat in [vec_zn(2), fibonacci()] {
        let rep = tube_report(&cat, 1e-9, &mut seeded_rng(4)).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    }
}

#[test]
fn derived_toric_center_matches_builtin() {
    let irr = tube_irreps(&tube_algebra(&vec_zn(2)).unwrap(), 1e-9, &mut seeded_rng(5)).unwrap();
    let derived = DerivedCenter::from_irreps(&irr).unwrap();
    let rep = derived.compare(&forgetful(), 1e-9);
    assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
}

#[test]
fn muger_centralizers() {
    let tc = toric_center();
    assert_eq!(muger_center(&tc).unwrap(), vec![0]);
    assert_eq!(muger_centralizer(&tc, &[1]).unwrap(), vec![0, 1]);
    assert_eq!(muger_centralizer(&tc, &[3]).unwrap(), vec![0, 3]);
    let sym = vec_zn(2).with_braiding("rep_z2", |_, _, _| re(1.0));
    assert_eq!(muger_center(&sym).unwrap(), vec![0, 1]);
    assert_eq!(muger_center(&fib_center()).unwrap(), vec![0]);
    assert!(muger_center(&vec_zn(2).without_braiding()).is_err());
}

#[test]
fn dhr_braiding_over_vec_z2_chain() {
    let chain = Chain::fusion(&vec_zn(2), &[0, 1]).unwrap();
    let rep = dhr_report(&chain, &forgetful(), 4, 1e-9, &mut seeded_rng(6)).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
}

#[test]
fn charge_flux_monodromy_is_minus_one() {
    let chain = Chain::fusion(&vec_zn(2), &[0, 1]).unwrap();
    let f = forgetful();
    assert!(monodromy_residual(&chain, &f, 1, 2, 4, re(-1.0)).unwrap() < 1e-10);
    assert!(monodromy_residual(&chain, &f, 1, 1, 4, re(1.0)).unwrap() < 1e-10);
    assert!(monodromy_residual(&chain, &f, 3, 3, 4, re(1.0)).unwrap() < 1e-10);
}

#[test]
fn braiding_distinguishes_the_fermion() {
    let chain = Chain::fusion(&vec_zn(2), &[0, 1]).unwrap();
    let chk = braided_functor_check(&chain, &forgetful(), 3, 3, 4, &mut seeded_rng(7)).unwrap();
    assert!(chk.functor_agreement < 1e-10);
    let u = dhr_braiding(&chain, &forgetful(), 3, 3, 4, (0, 2)).unwrap();
    let id = catnet::homspace::Morphism::identity(u.dom());
    assert!(u.distance(&id).unwrap() > 0.5);
}

#[test]
fn adjacent_localizations_are_rejected() {
    let chain = Chain::fusion(&vec_zn(2), &[0, 1]).unwrap();
    assert!(dhr_braiding(&chain, &forgetful(), 1, 2, 4, (0, 1)).is_err());
}

#[test]
fn enrichment_requires_centralizing_sector() {
    let chain = Chain::fusion(&vec_zn(2), &[0, 1]).unwrap();
    let f = forgetful();
    assert!(enriched_dhr_truncation(&chain, &f, &[1], 2, 3).is_err());
    let t = enriched_dhr_truncation(&chain, &f, &[1], 1, 3).unwrap();
    let (basis, r) = partition_of_unity(&t, 1).unwrap();
    assert!(!basis.is_empty() && r < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn centralizer_is_antitone(s in 0u32..16, t in 0u32..16) {
        let tc = toric_center();
        let small: Vec<usize> = (0..4).filter(|i| s & (1 << i) != 0).collect();
        let large: Vec<usize> = (0..4).filter(|i| (s | t) & (1 << i) != 0).collect();
        let cs = muger_centralizer(&tc, &small).unwrap();
        let cl = muger_centralizer(&tc, &large).unwrap();
        prop_assert!(cl.iter().all(|z| cs.contains(z)));
        prop_assert!(cl.contains(&0));
    }
}
