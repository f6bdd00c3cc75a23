use catnet::category::*;
use catnet::homspace::*;
use catnet::linalg::{eigh, null_space, seeded_rng, CMat, C64};
use proptest::prelude::*;

const TOL: f64 = 1e-10;

fn all_of(cat: &FusionCategory) -> Vec<usize> {
    (0..cat.rank()).collect()
}

#[test]
fn hom_dims() {
    let z2 = vec_zn(2);
    let e = Engine::new(&z2);
    let x = all_of(&z2);
    assert_eq!(e.hom_dim(&Word::power(&x, 2), &Word::power(&x, 2)).unwrap(), 8);
    for n in 1..=6 {
        assert_eq!(e.hom_dim(&Word::empty(), &Word::power(&x, n)).unwrap(), 1 << (n - 1));
    }
    let fib = fibonacci();
    let ef = Engine::new(&fib);
    assert_eq!(ef.hom_dim(&Word::power(&[0, 1], 2), &Word::power(&[0, 1], 2)).unwrap(), 13);
}

#[test]
fn tree_bases() {
    let e = Engine::new(&vec_zn(2));
    assert_eq!(e.tree_basis(&Word::simple(&[1, 1]), 0).unwrap().len(), 1);
    let ef = Engine::new(&fibonacci());
    let trees = ef.tree_basis(&Word::simple(&[1, 1, 1]), 1).unwrap();
    assert_eq!(trees.len(), 2);
    assert_eq!(trees[0].internal, vec![0]);
    assert_eq!(trees[1].internal, vec![1]);
    assert_eq!(ef.tree_basis(&Word::empty(), 0).unwrap().len(), 1);
}

fn random_pair(e: &Engine, a: &Word, b: &Word, seed: u64) -> (Morphism, Morphism) {
    let mut rng = seeded_rng(seed);
    let (sa, sb) = (e.space(a).unwrap(), e.space(b).unwrap());
    (Morphism::random(&sa, &sb, &mut rng).unwrap(), Morphism::random(&sa, &sb, &mut rng).unwrap())
}

#[test]
fn composition_laws() {
    let fib = fibonacci();
    let e = Engine::new(&fib);
    let x = Word::power(&[0, 1], 2);
    let s = e.space(&x).unwrap();
    let mut rng = seeded_rng(7);
    let f = Morphism::random(&s, &s, &mut rng).unwrap();
    let g = Morphism::random(&s, &s, &mut rng).unwrap();
    let h = Morphism::random(&s, &s, &mut rng).unwrap();
    let id = Morphism::identity(&s);
    assert!(id.compose(&f).unwrap().distance(&f).unwrap() < TOL);
    let lhs = g.compose(&f).unwrap().dagger();
    let rhs = f.dagger().compose(&g.dagger()).unwrap();
    assert!(lhs.distance(&rhs).unwrap() < TOL);
    let a1 = h.compose(&g).unwrap().compose(&f).unwrap();
    let a2 = h.compose(&g.compose(&f).unwrap()).unwrap();
    assert!(a1.distance(&a2).unwrap() < 1e-9);
    assert!(f.dagger().dagger().distance(&f).unwrap() == 0.0);
}

#[test]
fn tensor_with_empty_identity_is_trivial() {
    let e = Engine::new(&ising());
    let (f, _) = random_pair(&e, &Word::new(vec![vec![0, 1, 2]]), &Word::new(vec![vec![1], vec![0, 1, 2]]), 3);
    let id0 = e.identity(&Word::empty()).unwrap();
    assert!(e.tensor(&id0, &f).unwrap().distance(&f).unwrap() < TOL);
    assert!(e.tensor(&f, &id0).unwrap().distance(&f).unwrap() < TOL);
}

#[test]
fn tensor_is_functorial_and_associative() {
    for cat in [fibonacci(), ising(), vec_zn(3)] {
        let e = Engine::new(&cat);
        let x = all_of(&cat);
        let w1 = Word::new(vec![x.clone()]);
        let w2 = Word::new(vec![x.clone(), x.clone()]);
        let mut rng = seeded_rng(11);
        let s1 = e.space(&w1).unwrap();
        let s2 = e.space(&w2).unwrap();
        let f1 = Morphism::random(&s2, &s1, &mut rng).unwrap();
        let f2 = Morphism::random(&s1, &s2, &mut rng).unwrap();
        let g1 = Morphism::random(&s1, &s2, &mut rng).unwrap();
        let g2 = Morphism::random(&s2, &s1, &mut rng).unwrap();
        let lhs = e.tensor(&f1.compose(&f2).unwrap(), &g1.compose(&g2).unwrap()).unwrap();
        let rhs = e.tensor(&f1, &g1).unwrap().compose(&e.tensor(&f2, &g2).unwrap()).unwrap();
        assert!(lhs.distance(&rhs).unwrap() < 1e-9, "{}", cat.name());
        let h = Morphism::random(&s1, &s2, &mut rng).unwrap();
        let t1 = e.tensor(&e.tensor(&f1, &g1).unwrap(), &h).unwrap();
        let t2 = e.tensor(&f1, &e.tensor(&g1, &h).unwrap()).unwrap();
        assert!(t1.distance(&t2).unwrap() < 1e-9, "{}", cat.name());
    }
}

#[test]
fn f_moves_are_unitary() {
    for cat in [fibonacci(), ising(), toric_center()] {
        let e = Engine::new(&cat);
        let s = e.space(&Word::power(&all_of(&cat), 4)).unwrap();
        for i in 0..3 {
            let m = e.f_move(&s, i).unwrap();
            assert!(m.unitarity_residual() < TOL, "{}", cat.name());
        }
    }
}

#[test]
fn crossings_are_unitary_and_invertible() {
    for cat in [fibonacci(), ising(), toric_center()] {
        let e = Engine::new(&cat);
        let s = e.space(&Word::power(&all_of(&cat), 3)).unwrap();
        for i in 0..2 {
            let over = e.braid(&s, i, true).unwrap();
            let under = e.braid(over.cod(), i, false).unwrap();
            let back = under.compose(&over).unwrap();
            assert!(back.distance(&Morphism::identity(&s)).unwrap() < TOL);
            assert!(over.to_dense().unitarity_residual() < TOL);
        }
    }
}

#[test]
fn yang_baxter() {
    for cat in [fibonacci(), ising()] {
        let e = Engine::new(&cat);
        let s = e.space(&Word::power(&all_of(&cat), 3)).unwrap();
        let l = e.braid_word(&s, &[(0, true), (1, true), (0, true)]).unwrap();
        let r = e.braid_word(&s, &[(1, true), (0, true), (1, true)]).unwrap();
        assert!(l.distance(&r).unwrap() < TOL, "{}", cat.name());
    }
}

/// Crossing a strand past a trivalent vertex equals crossing past its two legs.
#[test]
fn crossing_is_natural_with_respect_to_vertices() {
    for cat in [fibonacci(), ising(), toric_center(), fib_center()] {
        let e = Engine::new(&cat);
        let n = cat.rank();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in cat.channels(a, b) {
                    for y in 0..n {
                        for over in [true, false] {
                            let v = e.vertex(a, b, c).unwrap();
                            let cy = e.space(&Word::simple(&[c, y])).unwrap();
                            let vy = e.extend_right(&v, &cy).unwrap();
                            // legs (a, b) pass over (or under) y
                            let bw = e.braid_word(vy.cod(), &[(1, over), (0, over)]).unwrap();
                            let lhs = bw.compose(&vy).unwrap();
                            let cross = e.braid(&cy, 0, over).unwrap();
                            let rhs = e.embed(&v, cross.cod(), 1).unwrap().compose(&cross).unwrap();
                            worst = worst.max(lhs.distance(&rhs).unwrap());
                            // y passes over (or under) the legs (a, b)
                            let yc = e.space(&Word::simple(&[y, c])).unwrap();
                            let yv = e.embed(&v, &yc, 1).unwrap();
                            let bw = e.braid_word(yv.cod(), &[(0, over), (1, over)]).unwrap();
                            let lhs = bw.compose(&yv).unwrap();
                            let cross = e.braid(&yc, 0, over).unwrap();
                            let rhs = e.extend_right(&v, cross.cod()).unwrap().compose(&cross).unwrap();
                            worst = worst.max(lhs.distance(&rhs).unwrap());
                        }
                    }
                }
            }
        }
        assert!(worst < 1e-10, "{}: {worst}", cat.name());
    }
}

#[test]
fn toric_monodromy_is_minus_one() {
    let z = toric_center();
    let e = Engine::new(&z);
    let s = e.space(&Word::simple(&[1, 2])).unwrap();
    let full = e.braid_word(&s, &[(0, true), (0, true)]).unwrap();
    let minus = Morphism::identity(&s).scale(C64::new(-1.0, 0.0));
    assert!(full.distance(&minus).unwrap() < TOL);
}

#[test]
fn snake_identities() {
    for cat in [vec_zn(3), fibonacci(), ising(), toric_center()] {
        let e = Engine::new(&cat);
        for a in 0..cat.rank() {
            let ad = cat.dual(a);
            let sa = e.space(&Word::simple(&[a])).unwrap();
            let up = e.embed(&e.coev(a).unwrap(), &sa, 0).unwrap();
            let down = e.embed(&e.ev(a).unwrap(), up.cod(), 1).unwrap();
            assert!(down.compose(&up).unwrap().distance(&Morphism::identity(&sa)).unwrap() < TOL);
            let sad = e.space(&Word::simple(&[ad])).unwrap();
            let up = e.embed(&e.coev(a).unwrap(), &sad, 1).unwrap();
            let down = e.embed(&e.ev(a).unwrap(), up.cod(), 0).unwrap();
            assert!(down.compose(&up).unwrap().distance(&Morphism::identity(&sad)).unwrap() < TOL);
            // closed loop
            let loop_value = e.ev(a).unwrap().compose(&e.coev(ad).unwrap()).unwrap();
            assert!((loop_value.block(cat.unit())[(0, 0)].re - cat.dim(a)).abs() < TOL);
        }
    }
}

#[test]
fn traces() {
    let z2 = vec_zn(2);
    let e = Engine::new(&z2);
    let id = e.identity(&Word::new(vec![vec![0, 1]])).unwrap();
    assert!((e.trace(&id).unwrap().re - 2.0).abs() < TOL);
    let fib = fibonacci();
    let ef = Engine::new(&fib);
    let id2 = ef.identity(&Word::power(&[0, 1], 2)).unwrap();
    let dx = 1.0 + fib.dim(1);
    assert!((ef.trace(&id2).unwrap().re - dx * dx).abs() < TOL);
    let (f, g) = random_pair(&ef, &Word::power(&[0, 1], 2), &Word::power(&[0, 1], 3), 5);
    let fg = g.dagger().compose(&f).unwrap();
    let gf = f.compose(&g.dagger()).unwrap();
    assert!((ef.trace(&fg).unwrap() - ef.trace(&gf).unwrap()).norm() < 1e-9);
}

#[test]
fn skein_basis_of_two_points_is_orthonormal() {
    let z2 = vec_zn(2);
    let e = Engine::new(&z2);
    let dom = e.space(&Word::empty()).unwrap();
    let cod = e.space(&Word::power(&[0, 1], 2)).unwrap();
    let gram = e.skein_gram(&dom, &cod).unwrap();
    assert_eq!(gram.rows(), 2);
    assert!((&gram - &CMat::identity(2)).max_abs() < TOL);
}

#[test]
fn skein_grams_are_positive_definite() {
    for cat in [fibonacci(), ising()] {
        let e = Engine::new(&cat);
        let x = all_of(&cat);
        for (a, b) in [(0, 3), (1, 2), (2, 2)] {
            let dom = e.space(&Word::power(&x, a)).unwrap();
            let cod = e.space(&Word::power(&x, b)).unwrap();
            let gram = e.skein_gram(&dom, &cod).unwrap();
            let (ev, _) = eigh(&gram);
            assert!(ev[0] > 1e-10, "{} {a}->{b}", cat.name());
        }
    }
}

#[test]
fn gluing_a_unit_leg_is_isometric() {
    let fib = fibonacci();
    let e = Engine::new(&fib);
    let x = vec![0, 1];
    let (f, g) = random_pair(&e, &Word::empty(), &Word::power(&x, 3), 9);
    let s4 = e.space(&Word::power(&x, 4)).unwrap();
    let dom0 = e.space(&Word::empty()).unwrap();
    let incl = Morphism::from_fn(&dom0, &e.space(&Word::new(vec![x.clone()])).unwrap(), |i, _| {
        if i == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
    .unwrap();
    let fi = e.tensor(&f, &incl).unwrap();
    let gi = e.tensor(&g, &incl).unwrap();
    assert_eq!(fi.cod().word(), s4.word());
    let lhs = e.skein_inner(&fi, &gi).unwrap();
    let rhs = e.skein_inner(&f, &g).unwrap();
    assert!((lhs - rhs).norm() < 1e-10);
}

/// The commutant of the left `End(X)`-action on `Hom(a → X)` is the right `End(a)`-action.
#[test]
fn semisimple_commutation() {
    for cat in [vec_zn(2), fibonacci(), ising()] {
        let e = Engine::new(&cat);
        let xs = all_of(&cat);
        let xw = Word::power(&xs, 2);
        let aw = Word::new(vec![xs.clone()]);
        let sx = e.space(&xw).unwrap();
        let sa = e.space(&aw).unwrap();
        let hom_units = e.matrix_units(&sa, &sx).unwrap();
        let n = hom_units.len();
        let coords = |m: &Morphism| m.vectorize();
        let left_ops: Vec<CMat> = e
            .matrix_units(&sx, &sx)
            .unwrap()
            .iter()
            .map(|phi| {
                let cols: Vec<Vec<C64>> = hom_units.iter().map(|f| coords(&phi.compose(f).unwrap())).collect();
                CMat::from_fn(n, n, |i, j| cols[j][i])
            })
            .collect();
        // T L = L T for all L, as a linear system on vec(T)
        let mut rows = Vec::new();
        for l in &left_ops {
            let id = CMat::identity(n);
            let lhs = &id.kron(l) - &l.transpose().kron(&id);
            rows.push(lhs);
        }
        let refs: Vec<&CMat> = rows.iter().collect();
        let sys = CMat::vstack(&refs);
        let comm = null_space(&sys, 1e-9);
        let expected: usize = (0..cat.rank()).map(|r| sa.count(r) * sa.count(r)).sum();
        assert_eq!(comm.cols(), expected, "{}", cat.name());
        // every right action lies in the commutant
        for psi in e.matrix_units(&sa, &sa).unwrap() {
            let cols: Vec<Vec<C64>> = hom_units.iter().map(|f| coords(&f.compose(&psi).unwrap())).collect();
            let r = CMat::from_fn(n, n, |i, j| cols[j][i]);
            for l in &left_ops {
                assert!(r.commutator(l).max_abs() < 1e-10);
            }
        }
    }
}

#[test]
fn module_words() {
    let (cat, m) = builtin_module("module:vec_over_z2").unwrap();
    let m = m.normalize_trace(&cat, &[1]).unwrap();
    let e = Engine::with_module(&cat, &m);
    let w1 = Word::module(vec![0], vec![vec![0, 1]]);
    assert_eq!(e.hom_dim(&w1, &w1).unwrap(), 4);
    assert_eq!(e.hom_dim(&Word::module(vec![0], vec![]), &Word::module(vec![0], vec![])).unwrap(), 1);

    let z2 = vec_zn(2);
    let reg = ModuleCategory::regular(&z2);
    let er = Engine::with_module(&z2, &reg);
    let w = Word::module(vec![0, 1], vec![vec![0, 1]]);
    assert_eq!(er.hom_dim(&w, &w).unwrap(), 8);
}

#[test]
fn module_tensor_is_functorial() {
    let fib = fibonacci();
    let reg = ModuleCategory::regular(&fib);
    let e = Engine::with_module(&fib, &reg);
    let x = vec![0, 1];
    let mw = Word::module(vec![0, 1], vec![x.clone()]);
    let cw = Word::new(vec![x.clone()]);
    let mut rng = seeded_rng(21);
    let sm = e.space(&mw).unwrap();
    let sc = e.space(&cw).unwrap();
    let f1 = Morphism::random(&sm, &sm, &mut rng).unwrap();
    let f2 = Morphism::random(&sm, &sm, &mut rng).unwrap();
    let g1 = Morphism::random(&sc, &sc, &mut rng).unwrap();
    let g2 = Morphism::random(&sc, &sc, &mut rng).unwrap();
    let lhs = e.tensor(&f1.compose(&f2).unwrap(), &g1.compose(&g2).unwrap()).unwrap();
    let rhs = e.tensor(&f1, &g1).unwrap().compose(&e.tensor(&f2, &g2).unwrap()).unwrap();
    assert!(lhs.distance(&rhs).unwrap() < 1e-9);
    // commuting actions on disjoint legs
    let w2 = Word::module(vec![0, 1], vec![x.clone(), x.clone()]);
    let s2 = e.space(&w2).unwrap();
    let a = e.extend_right(&f1, &s2).unwrap();
    let b = e.embed(&g1, &s2, 1).unwrap();
    let ab = a.compose(&b).unwrap();
    let ba = b.compose(&a).unwrap();
    assert!(ab.distance(&ba).unwrap() < 1e-9);
    // module trace of the identity is the product of dims
    let id = Morphism::identity(&s2);
    let expected = (1.0 + fib.dim(1)).powi(3);
    assert!((e.trace(&id).unwrap().re - expected).abs() < 1e-9);
}

fn ladder_of(name: &str) -> Ladder {
    let Builtin::Central(f) = builtin(name).unwrap() else { panic!("{name}") };
    Ladder::new(&f)
}

#[test]
fn trivial_rung_ladders_compose_componentwise() {
    let lad = ladder_of("central:trivial:fibonacci");
    let e = lad.engine();
    let x = Word::new(vec![vec![0, 1]]);
    let obj = LadderObject { left: x.clone(), right: x.clone() };
    let mut rng = seeded_rng(4);
    let l1 = Morphism::random(&e.space(&x).unwrap(), &e.space(&lad.rung_word(0, &x)).unwrap(), &mut rng).unwrap();
    let r1 = Morphism::random(&e.space(&lad.rung_word(0, &x)).unwrap(), &e.space(&x).unwrap(), &mut rng).unwrap();
    let l2 = Morphism::random(&e.space(&x).unwrap(), &e.space(&lad.rung_word(0, &x)).unwrap(), &mut rng).unwrap();
    let r2 = Morphism::random(&e.space(&lad.rung_word(0, &x)).unwrap(), &e.space(&x).unwrap(), &mut rng).unwrap();
    let lower = lad.term(&obj, &obj, 0, l1.clone(), r1.clone()).unwrap();
    let upper = lad.term(&obj, &obj, 0, l2.clone(), r2.clone()).unwrap();
    let got = lad.compose(&upper, &lower).unwrap();
    // with a unit rung, stacking is composition after stripping the unit leg
    let sx = e.space(&x).unwrap();
    let strip = e.unit_insert(&sx, 0).unwrap();
    let left = strip.compose(&strip.dagger().compose(&l2).unwrap().compose(&strip.dagger().compose(&l1).unwrap()).unwrap()).unwrap();
    let right = r2.compose(&strip).unwrap().compose(&r1.compose(&strip).unwrap()).unwrap().compose(&strip.dagger()).unwrap();
    let want = lad.term(&obj, &obj, 0, left, right).unwrap();
    assert!(lad.distance(&got, &want).unwrap() < 1e-10);
}

#[test]
fn z2_rungs_fuse_to_the_unit() {
    let lad = ladder_of("central:identity:vec_z2");
    let e = lad.engine();
    let obj = LadderObject { left: Word::simple(&[1]), right: Word::simple(&[1]) };
    let mid = LadderObject { left: Word::simple(&[0]), right: Word::simple(&[0]) };
    let one = |dom: &Word, cod: &Word| {
        Morphism::from_fn(&e.space(dom).unwrap(), &e.space(cod).unwrap(), |_, _| C64::new(1.0, 0.0)).unwrap()
    };
    let lower = lad
        .term(&obj, &mid, 1, one(&obj.left, &lad.rung_word(1, &mid.left)), one(&lad.rung_word(1, &obj.right), &mid.right))
        .unwrap();
    let upper = lad
        .term(&mid, &obj, 1, one(&mid.left, &lad.rung_word(1, &obj.left)), one(&lad.rung_word(1, &mid.right), &obj.right))
        .unwrap();
    let got = lad.compose(&upper, &lower).unwrap();
    let comps = lad.components(&got).unwrap();
    assert!(comps[1].max_abs() < 1e-12);
    assert_eq!((comps[0].rows(), comps[0].cols()), (1, 1));
    assert!((comps[0][(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-12);
}

fn ladder_objects(lad: &Ladder) -> Vec<LadderObject> {
    let n = lad.engine().category().rank();
    let all: Vec<usize> = (0..n).collect();
    vec![
        LadderObject { left: Word::new(vec![all.clone()]), right: Word::new(vec![all.clone()]) },
        LadderObject { left: Word::new(vec![all.clone(), all.clone()]), right: Word::new(vec![all.clone()]) },
        LadderObject { left: Word::new(vec![all.clone()]), right: Word::new(vec![all.clone(), all.clone()]) },
    ]
}

#[test]
fn ladder_category_axioms() {
    for name in ["central:identity:vec_z2", "central:identity:fibonacci", "central:identity:ising", "central:forgetful_toric"] {
        let lad = ladder_of(name);
        let objs = ladder_objects(&lad);
        let mut rng = seeded_rng(31);
        let (a, b, c, d) = (&objs[0], &objs[1], &objs[2], &objs[0]);
        let f = lad.random(a, b, &mut rng).unwrap();
        let g = lad.random(b, c, &mut rng).unwrap();
        let h = lad.random(c, d, &mut rng).unwrap();
        let left = lad.compose(&h, &lad.compose(&g, &f).unwrap()).unwrap();
        let right = lad.compose(&lad.compose(&h, &g).unwrap(), &f).unwrap();
        assert!(lad.distance(&left, &right).unwrap() < 1e-9, "{name}: associativity");
        let id_a = lad.identity(a).unwrap();
        let id_b = lad.identity(b).unwrap();
        assert!(lad.distance(&lad.compose(&f, &id_a).unwrap(), &f).unwrap() < 1e-9, "{name}: right unit");
        assert!(lad.distance(&lad.compose(&id_b, &f).unwrap(), &f).unwrap() < 1e-9, "{name}: left unit");
    }
}

#[test]
fn ladder_tensor_interchange() {
    for name in ["central:identity:vec_z2", "central:identity:fibonacci", "central:identity:ising", "central:forgetful_toric"] {
        let lad = ladder_of(name);
        let objs = ladder_objects(&lad);
        let mut rng = seeded_rng(41);
        let f1 = lad.random(&objs[0], &objs[1], &mut rng).unwrap();
        let f2 = lad.random(&objs[1], &objs[2], &mut rng).unwrap();
        let g1 = lad.random(&objs[0], &objs[0], &mut rng).unwrap();
        let g2 = lad.random(&objs[0], &objs[1], &mut rng).unwrap();
        let lhs = lad.tensor(&lad.compose(&f2, &f1).unwrap(), &lad.compose(&g2, &g1).unwrap()).unwrap();
        let rhs = lad.compose(&lad.tensor(&f2, &g2).unwrap(), &lad.tensor(&f1, &g1).unwrap()).unwrap();
        assert!(lad.distance(&lhs, &rhs).unwrap() < 1e-9, "{name}: interchange");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_compose_is_associative(seed in 0u64..1000, n in 1usize..4) {
        let fib = fibonacci();
        let e = Engine::new(&fib);
        let s = e.space(&Word::power(&[0, 1], n)).unwrap();
        let mut rng = seeded_rng(seed);
        let f = Morphism::random(&s, &s, &mut rng).unwrap();
        let g = Morphism::random(&s, &s, &mut rng).unwrap();
        let h = Morphism::random(&s, &s, &mut rng).unwrap();
        let a = h.compose(&g).unwrap().compose(&f).unwrap();
        let b = h.compose(&g.compose(&f).unwrap()).unwrap();
        prop_assert!(a.distance(&b).unwrap() < 1e-9);
    }

    #[test]
    fn embedding_is_a_homomorphism(seed in 0u64..1000, pos in 0usize..3) {
        let cat = ising();
        let e = Engine::new(&cat);
        let x = vec![0usize, 1, 2];
        let big = e.space(&Word::power(&x, 4)).unwrap();
        let small = e.space(&Word::power(&x, 2)).unwrap();
        let mut rng = seeded_rng(seed);
        let f = Morphism::random(&small, &small, &mut rng).unwrap();
        let g = Morphism::random(&small, &small, &mut rng).unwrap();
        let lhs = e.embed(&f.compose(&g).unwrap(), &big, pos).unwrap();
        let rhs = e.embed(&f, &big, pos).unwrap().compose(&e.embed(&g, &big, pos).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs).unwrap() < 1e-9);
        let fd = e.embed(&f.dagger(), &big, pos).unwrap();
        prop_assert!(fd.distance(&e.embed(&f, &big, pos).unwrap().dagger()).unwrap() < 1e-10);
    }

    #[test]
    fn trace_is_cyclic(seed in 0u64..1000) {
        let cat = fibonacci();
        let e = Engine::new(&cat);
        let a = e.space(&Word::power(&[0, 1], 2)).unwrap();
        let b = e.space(&Word::power(&[1], 3)).unwrap();
        let mut rng = seeded_rng(seed);
        let f = Morphism::random(&a, &b, &mut rng).unwrap();
        let g = Morphism::random(&b, &a, &mut rng).unwrap();
        let t1 = e.trace(&g.compose(&f).unwrap()).unwrap();
        let t2 = e.trace(&f.compose(&g).unwrap()).unwrap();
        prop_assert!((t1 - t2).norm() < 1e-9);
    }
}
