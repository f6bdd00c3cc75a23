use catnet::braided::*;
use catnet::category::*;
use catnet::homspace::*;
use catnet::linalg::{seeded_rng, C64};
use catnet::Error;
use proptest::prelude::*;

const TOL: f64 = 1e-9;
const E: usize = 1;
const M: usize = 2;

fn toric_all() -> BraidedNet {
    BraidedNet::new(&toric_center(), &[0, 1, 2, 3]).unwrap()
}

fn toric_lagrangian() -> BraidedNet {
    BraidedNet::new(&toric_center(), &[0, E]).unwrap()
}

fn random_on(net: &BraidedNet, order: &[Site], seed: u64) -> Morphism {
    let space = net.space(order).unwrap();
    Morphism::random(&space, &space, &mut seeded_rng(seed)).unwrap()
}

#[test]
fn row_major_linearization() {
    let r = Region::new([(1, 0), (0, 1), (0, 0), (1, 1)]);
    assert_eq!(linearize_region(&r), vec![(0, 0), (1, 0), (0, 1), (1, 1)]);
}

#[test]
fn crossing_signs_follow_row_major_height() {
    let steps = braid_between_orderings(&[(0, 1), (0, 0)], &[(0, 0), (0, 1)]).unwrap();
    assert_eq!(steps, vec![(0, true)]);
    let steps = braid_between_orderings(&[(0, 0), (0, 1)], &[(0, 1), (0, 0)]).unwrap();
    assert_eq!(steps, vec![(0, false)]);
    assert!(braid_between_orderings(&[(0, 0)], &[(1, 0)]).is_err());
}

#[test]
fn net_algebra_dims() {
    let two = Region::rectangle(0, 0, 2, 1);
    assert_eq!(toric_all().algebra(&two).unwrap().dim(), 64);
    let one = Region::rectangle(0, 0, 1, 1);
    let a = toric_lagrangian().algebra(&one).unwrap();
    assert_eq!((a.dim(), a.center_dim()), (2, 2));
    assert_eq!(toric_all().algebra(&Region::default()).unwrap().dim(), 1);
}

#[test]
fn dimension_is_sum_of_squared_sector_dims() {
    let net = toric_all();
    let r = Region::rectangle(0, 0, 2, 2);
    let total: usize = (0..4).map(|x| net.sector_space(x, &r).unwrap().dim().pow(2)).sum();
    assert_eq!(net.algebra(&r).unwrap().dim(), total);
}

#[test]
fn sector_spaces_and_matrix_units() {
    let net = toric_all();
    let r = Region::rectangle(0, 0, 2, 1);
    for x in 0..4 {
        let k = net.sector_space(x, &r).unwrap();
        assert_eq!(k.dim(), 4);
        for (i, f) in k.basis.iter().enumerate() {
            for (j, g) in k.basis.iter().enumerate() {
                let gf = g.dagger().compose(f).unwrap();
                let expect = if i == j { 1.0 / k.dim_x } else { 0.0 };
                assert!((gf.entry(0, 0) - C64::new(expect, 0.0)).norm() < TOL);
            }
        }
        let units = k.matrix_units().unwrap();
        let n = k.dim();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let lhs = units[a * n + b].compose(&units[c * n + d]).unwrap();
                        let expect = if b == c { units[a * n + d].clone() } else { lhs.scale(C64::new(0.0, 0.0)) };
                        assert!(lhs.distance(&expect).unwrap() < TOL);
                    }
                }
            }
        }
    }
}

#[test]
fn fibonacci_sector_units() {
    let fib = fibonacci();
    let net = BraidedNet::new(&fib, &[1]).unwrap();
    let r = Region::rectangle(0, 0, 3, 1);
    let k = net.sector_space(1, &r).unwrap();
    assert_eq!(k.dim(), 2);
    let u = k.matrix_units().unwrap();
    let sum = u[0].add(&u[3]).unwrap();
    let p = sum.compose(&sum).unwrap();
    assert!(p.distance(&sum).unwrap() < TOL);
}

#[test]
fn cone_decomposition_tables() {
    let net = toric_all();
    let delta = Region::rectangle(0, 0, 2, 2);
    let left = Region::rectangle(0, 0, 1, 2);
    let t = net.cone_decomposition(&left, &delta).unwrap();
    assert_eq!(t.vacuum_dim, 64);
    assert_eq!(t.product_sum(), 64);
    assert_eq!(t.center_dim(), 4);
    assert!(t.rows.iter().all(|r| r.inner == 4 && r.outer == 4));
    let wide = Region::rectangle(0, 0, 3, 2);
    let t = net.cone_decomposition(&left, &wide).unwrap();
    assert_eq!(t.product_sum(), t.vacuum_dim);
    let full = net.cone_decomposition(&delta, &delta).unwrap();
    assert!(full.rows.iter().all(|r| r.outer == usize::from(r.sector == 0)));
    assert_eq!(full.product_sum(), full.vacuum_dim);

    let lag = toric_lagrangian();
    let t = lag.cone_decomposition(&left, &delta).unwrap();
    assert_eq!(t.sectors(), vec![0, E]);
    assert_eq!(t.product_sum(), t.vacuum_dim);
    assert_eq!(t.center_dim(), lag.algebra(&left).unwrap().center_dim());
}

#[test]
fn cone_sectors_stabilize() {
    let net = toric_lagrangian();
    let a = net.cone_decomposition(&Region::rectangle(0, 0, 2, 2), &Region::rectangle(0, 0, 3, 3)).unwrap();
    let b = net.cone_decomposition(&Region::rectangle(0, 0, 3, 3), &Region::rectangle(0, 0, 4, 3)).unwrap();
    assert_eq!(a.sectors(), b.sectors());
}

#[test]
fn inclusion_is_functorial_and_state_preserving() {
    let net = toric_all();
    let lam = Region::new([(1, 1)]);
    let mid = Region::rectangle(0, 1, 2, 1);
    let big = Region::rectangle(0, 0, 2, 2);
    let x = random_on(&net, &net.ordering(&lam).unwrap(), 3);
    let direct = net.include(&x, &lam, &big).unwrap();
    let staged = net.include(&net.include(&x, &lam, &mid).unwrap(), &mid, &big).unwrap();
    assert!(direct.distance(&staged).unwrap() < TOL);
    assert!((net.state(&direct).unwrap() - net.state(&x).unwrap()).norm() < TOL);
    let y = random_on(&net, &net.ordering(&lam).unwrap(), 4);
    let xy = net.include(&x.compose(&y).unwrap(), &lam, &big).unwrap();
    let prod = direct.compose(&net.include(&y, &lam, &big).unwrap()).unwrap();
    assert!(xy.distance(&prod).unwrap() < TOL);
}

#[test]
fn disjoint_regions_commute() {
    let net = toric_all();
    let big = Region::rectangle(0, 0, 2, 2);
    let regions = [Region::new([(0, 0), (1, 1)]), Region::new([(1, 0)]), Region::new([(0, 1)])];
    let ops: Vec<Morphism> = regions
        .iter()
        .enumerate()
        .map(|(k, r)| net.include(&random_on(&net, &net.ordering(r).unwrap(), 10 + k as u64), r, &big).unwrap())
        .collect();
    for i in 0..ops.len() {
        for j in 0..i {
            let ab = ops[i].compose(&ops[j]).unwrap();
            let ba = ops[j].compose(&ops[i]).unwrap();
            assert!(ab.distance(&ba).unwrap() < 1e-8, "regions {i} and {j}");
        }
    }
}

#[test]
fn transport_preserves_the_state() {
    let net = toric_all();
    let r = Region::rectangle(0, 0, 2, 2);
    let canon = net.ordering(&r).unwrap();
    for order in net.admissible_orderings(&r).unwrap().iter().step_by(5) {
        let w = random_on(&net, order, 6);
        let u = net.transport(order, &canon).unwrap();
        let moved = u.compose(&w).unwrap().compose(&u.dagger()).unwrap();
        assert!((net.state(&moved).unwrap() - net.state(&w).unwrap()).norm() < TOL);
    }
}

#[test]
fn cocycle_exhaustive_on_four_sites() {
    let net = BraidedNet::new(&toric_center(), &[E, M]).unwrap();
    let r = Region::rectangle(0, 0, 2, 2);
    let rep = net.cocycle_report(&r, 4, 0, TOL, &mut seeded_rng(1)).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert!(rep.item("all_triples").is_some());
}

#[test]
fn cocycle_on_fibonacci_three_sites() {
    let net = BraidedNet::new(&fibonacci(), &[0, 1]).unwrap();
    let r = Region::new([(0, 0), (1, 0), (0, 1)]);
    let rep = net.cocycle_report(&r, 4, 0, TOL, &mut seeded_rng(1)).unwrap();
    assert!(rep.passed(), "{rep:?}");
}

#[test]
fn cocycle_pair_factorization_on_five_sites() {
    let net = BraidedNet::new(&toric_center(), &[E, M]).unwrap();
    let r = Region::new([(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)]);
    let rep = net.cocycle_report(&r, 4, 50, TOL, &mut seeded_rng(2)).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert!(rep.item("all_triples_bound").is_some());
}

#[test]
fn heterogeneous_assignment() {
    let net = toric_lagrangian().with_site_object((1, 0), &[0, 1, 2, 3]).unwrap();
    let r = Region::rectangle(0, 0, 2, 1);
    assert_eq!(net.word(&net.ordering(&r).unwrap()).unwrap().legs, vec![vec![0, 1], vec![0, 1, 2, 3]]);
    assert_eq!(net.algebra(&r).unwrap().dim(), 16);
}

#[test]
fn enriched_identity_functor() {
    let z2 = vec_zn(2);
    let phi = CentralFunctor::identity(&z2).unwrap();
    let net = BraidedNet::enriched(&phi, &[0, 1], &[0, 1], 0).unwrap();
    let r = Region::new([(0, 0), (0, 1)]);
    assert_eq!(net.ordering(&r).unwrap(), vec![(0, 0), (0, 1)]);
    assert_eq!(net.algebra(&r).unwrap().dim(), 8);
}

#[test]
fn enriched_bulk_only_matches_bulk_net() {
    let z2 = vec_zn(2);
    let phi = CentralFunctor::identity(&z2).unwrap();
    let enriched = BraidedNet::enriched(&phi, &[0, 1], &[0, 1], 0).unwrap();
    let bulk = BraidedNet::new(&z2, &[0, 1]).unwrap();
    let r = Region::rectangle(0, 1, 2, 2);
    assert_eq!(enriched.algebra(&r).unwrap(), bulk.algebra(&r).unwrap());
}

#[test]
fn enriched_trivial_bulk_is_the_fusion_chain() {
    let fib = fibonacci();
    let phi = CentralFunctor::trivial(&fib);
    let net = BraidedNet::enriched(&phi, &[0, 1], &[0], 0).unwrap();
    let chain = catnet::algebra::Chain::fusion(&fib, &[0, 1]).unwrap();
    let r = Region::rectangle(0, 0, 3, 2);
    assert_eq!(net.algebra(&r).unwrap().dim(), chain.algebra(3).unwrap().dim());
    let boundary = Region::rectangle(0, 0, 3, 1);
    let x = random_on(&net, &net.ordering(&boundary).unwrap(), 8);
    let y = net.include(&x, &boundary, &r).unwrap();
    let xc = Morphism::from_dense(&chain.space(3).unwrap(), &chain.space(3).unwrap(), &x.to_dense(), 1e-12).unwrap();
    assert!((net.state(&y).unwrap() - chain.state(&xc).unwrap()).norm() < 1e-10);
}

fn forgetful() -> CentralFunctor {
    match builtin("central:forgetful_toric").unwrap() {
        Builtin::Central(f) => f,
        _ => unreachable!(),
    }
}

#[test]
fn enriched_inclusion_with_half_braidings() {
    let net = BraidedNet::enriched(&forgetful(), &[0, 1], &[0, M], 0).unwrap();
    let lam = Region::new([(0, 0), (0, 1)]);
    let mid = Region::new([(0, 0), (1, 0), (0, 1)]);
    let delta = Region::rectangle(0, 0, 2, 2);
    let x = random_on(&net, &net.ordering(&lam).unwrap(), 12);
    let y = net.include(&x, &lam, &delta).unwrap();
    assert!((net.state(&y).unwrap() - net.state(&x).unwrap()).norm() < TOL);
    let staged = net.include(&net.include(&x, &lam, &mid).unwrap(), &mid, &delta).unwrap();
    assert!(y.distance(&staged).unwrap() < TOL);
}

#[test]
fn enriched_geometry_errors() {
    let z2 = vec_zn(2);
    let phi = CentralFunctor::identity(&z2).unwrap();
    let net = BraidedNet::enriched(&phi, &[0, 1], &[0, 1], 0).unwrap();
    assert!(matches!(net.algebra(&Region::new([(0, -1)])), Err(Error::Geometry(_))));
    let gap = Region::new([(0, 0), (2, 0)]);
    let x = random_on(&net, &net.ordering(&gap).unwrap(), 1);
    assert!(matches!(net.include(&x, &gap, &Region::rectangle(0, 0, 3, 1)), Err(Error::Geometry(_))));
    let forget = forgetful();
    assert!(BraidedNet::enriched(&forget, &[0, 1], &[0, E], 0).is_err());
    assert!(BraidedNet::enriched(&forget, &[0, 1], &[0, M], 0).is_ok());
}

#[test]
fn forgetful_enriched_net_is_local() {
    let net = BraidedNet::enriched(&forgetful(), &[0, 1], &[0, M], 0).unwrap();
    let delta = Region::rectangle(0, 0, 2, 2);
    let a = Region::new([(0, 0), (0, 1)]);
    let b = Region::new([(1, 0), (1, 1)]);
    let xa = net.include(&random_on(&net, &net.ordering(&a).unwrap(), 20), &a, &delta).unwrap();
    let xb = net.include(&random_on(&net, &net.ordering(&b).unwrap(), 21), &b, &delta).unwrap();
    let c = xa.compose(&xb).unwrap().sub(&xb.compose(&xa).unwrap()).unwrap();
    assert!(c.max_abs() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn transport_between_random_orders_is_unitary(seed in 0u64..1000) {
        use rand::seq::SliceRandom;
        let net = BraidedNet::new(&fibonacci(), &[0, 1]).unwrap();
        let r = Region::rectangle(0, 0, 2, 2);
        let mut rng = seeded_rng(seed);
        let mut a = net.ordering(&r).unwrap();
        let mut b = a.clone();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let u = net.transport(&a, &b).unwrap();
        let uu = u.dagger().compose(&u).unwrap();
        prop_assert!(uu.distance(&Morphism::identity(u.dom())).unwrap() < TOL);
        let back = net.transport(&b, &a).unwrap();
        prop_assert!(back.compose(&u).unwrap().distance(&Morphism::identity(u.dom())).unwrap() < TOL);
    }

    #[test]
    fn included_operators_keep_their_state(seed in 0u64..1000) {
        let net = toric_lagrangian();
        let lam = Region::new([(1, 1)]);
        let big = Region::rectangle(0, 0, 2, 3);
        let x = random_on(&net, &net.ordering(&lam).unwrap(), seed);
        let y = net.include(&x, &lam, &big).unwrap();
        prop_assert!((net.state(&y).unwrap() - net.state(&x).unwrap()).norm() < TOL);
    }
}
