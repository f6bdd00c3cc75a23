//! Acceptance gate: one PASS/FAIL line per criterion, with its runtime budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use catnet::algebra::{haag_report, Chain};
use catnet::braided::{BraidedNet, Region};
use catnet::category::{
    builtin, fibonacci, ising, residuals, toric_center, validate_axioms, vec_zn, Builtin, CentralFunctor, FusionCategory, ModuleCategory,
};
use catnet::center::{dhr_report, monodromy_residual, muger_center, muger_centralizer, tube_algebra, tube_irreps};
use catnet::homspace::Morphism;
use catnet::levin_wen::{LevinWen, LtoCase, LwLattice, Rect};
use catnet::linalg::{re, seeded_rng};
use catnet::pauli::{backend_agreement, PauliBoundary, ToricCode};
use catnet::report::Report;

const PHI: f64 = 1.618_033_988_749_895;

type Verdict = Result<Vec<String>, String>;

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn failures(rep: &Report) -> String {
    rep.failures().map(|i| format!("{}={:?}", i.name, i.residual)).collect::<Vec<_>>().join(", ")
}

fn passes(rep: &Report, what: &str) -> Result<(), String> {
    ensure(rep.passed(), format!("{what}: {}", failures(rep)))
}

fn err(e: catnet::Error) -> String {
    e.to_string()
}

fn rect(x0: i32, y0: i32, x1: i32, y1: i32) -> Rect {
    Rect { x0, y0, x1, y1 }
}

fn forgetful_toric() -> Result<CentralFunctor, String> {
    match builtin("central:forgetful_toric").map_err(err)? {
        Builtin::Central(f) => Ok(f),
        _ => Err("forgetful_toric is not a central functor".to_string()),
    }
}

fn category_validity() -> Verdict {
    let tol = 1e-10;
    let cats: [FusionCategory; 5] = [vec_zn(2), vec_zn(3), fibonacci(), ising(), toric_center()];
    let mut notes = Vec::new();
    for c in &cats {
        let r = residuals(c);
        passes(&validate_axioms(c, tol), c.name())?;
        ensure(r.pentagon < tol && r.hexagon.map_or(true, |h| h < tol) && r.f_unitarity < tol, format!("{} residuals {r:?}", c.name()))?;
        notes.push(format!("{} {:.1e}", c.name(), r.max()));
    }
    let fib = fibonacci();
    let bad = fib.with_f_entry([1, 1, 1, 1, 0, 0], -fib.f(1, 1, 1, 1, 0, 0));
    ensure(!validate_axioms(&bad, tol).passed(), "negated Fibonacci F entry passed validation")?;
    notes.push("negated F rejected".to_string());
    Ok(notes)
}

fn commuting_projectors() -> Verdict {
    let tol = 1e-10;
    let lw = LevinWen::new(&vec_zn(2), LwLattice { width: 3, height: 3, boundary: false }).map_err(err)?;
    let r = rect(0, 0, 1, 1);
    let mut ops = Vec::new();
    for e in lw.edges(&r) {
        ops.push(lw.edge_projector(&r, e).map_err(err)?);
    }
    for p in lw.plaquettes(&r) {
        ops.push(lw.plaquette_projector(&r, p).map_err(err)?);
    }
    let dim = ops[0].dim();
    ensure(dim == 4096, format!("patch dimension {dim}"))?;
    let mut worst: f64 = 0.0;
    for (i, a) in ops.iter().enumerate() {
        worst = worst.max(a.projector_residual());
        for b in &ops[i + 1..] {
            worst = worst.max(a.commutator_norm(b));
        }
    }
    ensure(worst < tol, format!("projector/commutator residual {worst:e}"))?;
    let legs = lw.boundary_legs(&r);
    let rank = lw.region_projector(&r).map_err(err)?.trace().re;
    let want = 2f64.powi(legs as i32 - 1);
    ensure((rank - want).abs() < 1e-9 && want == 128.0, format!("rank {rank} vs 2^({legs}-1)"))?;
    Ok(vec![format!("{} operators, worst {worst:.1e}, rank {rank}", ops.len())])
}

fn pauli_lto() -> Verdict {
    let tol = 1e-10;
    let bulk = ToricCode::new(4, 4, PauliBoundary::Bulk).lto_suite(&[1, 2, 3, 4], tol).map_err(err)?;
    passes(&bulk, "bulk")?;
    let smooth = ToricCode::new(4, 4, PauliBoundary::Smooth);
    passes(&smooth.lto_suite(&[1, 2, 3, 4], tol).map_err(err)?, "smooth")?;
    let case = LtoCase { axiom: 1, lam: rect(0, 1, 1, 3), delta: rect(0, 0, 2, 4), lam2: None, delta2: None };
    passes(&smooth.lto_check(&case, tol).map_err(err)?, "smooth reference case")?;
    let mutant = smooth.without_star((0, 2)).lto_check(&case, tol).map_err(err)?;
    ensure(!mutant.passed(), "dropped boundary star passed LTO1")?;
    Ok(vec![format!("bulk {} items, smooth passes, mutant fails", bulk.items.len())])
}

fn boundary_algebras() -> Verdict {
    let tol = 1e-9;
    let z2 = vec_zn(2);
    let lw = LevinWen::new(&z2, LwLattice { width: 5, height: 4, boundary: false }).map_err(err)?;
    let ba = lw.extract_boundary_algebra(&rect(1, 2, 2, 2), &rect(0, 0, 3, 2), tol).map_err(err)?;
    ensure(ba.dim() == 8, format!("bulk cut dim {}", ba.dim()))?;
    ensure(ba.gluing_distance < tol, format!("gluing span distance {:e}", ba.gluing_distance))?;
    passes(&ba.report(tol), "bulk cut")?;
    let m = catnet::category::vec_over_zn(&z2, 2).normalize_trace(&z2, &[1]).map_err(err)?;
    let lwb = LevinWen::with_module(&z2, &m, LwLattice { width: 4, height: 4, boundary: true }).map_err(err)?;
    let corner = lwb.extract_boundary_algebra(&rect(0, 2, 1, 2), &rect(0, 0, 2, 2), tol).map_err(err)?;
    ensure(corner.dim() == 4, format!("corner dim {}", corner.dim()))?;
    passes(&corner.report(tol), "corner")?;
    Ok(vec![format!("bulk 8 (gluing {:.1e}), corner 4", ba.gluing_distance)])
}

fn haag_duality() -> Verdict {
    let tol = 1e-9;
    let z2 = vec_zn(2);
    let reg = ModuleCategory::regular(&z2).normalize_trace(&z2, &[1, 1]).map_err(err)?;
    let chains = [
        ("vec_z2", Chain::fusion(&z2, &[0, 1]).map_err(err)?, 6),
        ("fibonacci", Chain::fusion(&fibonacci(), &[0, 1]).map_err(err)?, 5),
        ("module", Chain::module(&z2, &reg, &[0, 1], &[0, 1]).map_err(err)?, 4),
    ];
    let mut count = 0;
    for (name, ch, nmax) in &chains {
        for n in 1..=*nmax {
            let rep = haag_report(ch, n, tol).map_err(err)?;
            passes(&rep, &format!("{name} n={n}"))?;
            count += rep.items.len();
        }
    }
    Ok(vec![format!("{count} interval checks")])
}

fn tube_center() -> Verdict {
    let tol = 1e-9;
    let mut rng = seeded_rng(0xC0FFEE);
    let z2 = vec_zn(2);
    let t = tube_algebra(&z2).map_err(err)?;
    let irr = tube_irreps(&t, tol, &mut rng).map_err(err)?;
    ensure(t.dim() == 4 && irr.block_sizes() == vec![1, 1, 1, 1], format!("vec_z2 dim {} blocks {:?}", t.dim(), irr.block_sizes()))?;
    ensure((irr.dim_square_sum() - 4.0).abs() < tol, "vec_z2 dimension sum")?;
    let fib = fibonacci();
    let t = tube_algebra(&fib).map_err(err)?;
    let irr = tube_irreps(&t, tol, &mut rng).map_err(err)?;
    ensure(t.dim() == 7 && irr.block_sizes() == vec![1, 1, 1, 2], format!("fibonacci dim {} blocks {:?}", t.dim(), irr.block_sizes()))?;
    let want = [1.0, PHI, PHI, PHI * PHI];
    let dims = irr.dims();
    ensure(dims.iter().zip(want).all(|(d, w)| (d - w).abs() < tol), format!("fibonacci dims {dims:?}"))?;
    let d2 = fib.global_dim().powi(2);
    ensure((irr.dim_square_sum() - d2).abs() < tol, format!("Σd² {} vs {d2}", irr.dim_square_sum()))?;
    ensure(irr.idempotent_residual < tol && irr.completeness_residual < tol, "central idempotents")?;
    Ok(vec![format!("fibonacci dims {dims:.6?}")])
}

fn subsets(region: &Region) -> Vec<Region> {
    let s = region.sites();
    (1..1u32 << s.len()).map(|mask| Region::new(s.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, p)| *p))).collect()
}

fn braided_net() -> Verdict {
    let tol = 1e-9;
    let tc = toric_center();
    let all = BraidedNet::new(&tc, &[0, 1, 2, 3]).map_err(err)?;
    let lag = BraidedNet::new(&tc, &[0, 1]).map_err(err)?;
    let mut cones = 0;
    for delta in [Region::rectangle(0, 0, 2, 2), Region::rectangle(0, 0, 2, 3)] {
        for lam in subsets(&delta) {
            ensure(all.algebra(&lam).map_err(err)?.center_dim() == 4, format!("center of {:?} with X = all simples", lam.sites()))?;
            ensure(lag.algebra(&lam).map_err(err)?.center_dim() == 2, format!("center of {:?} with A = 1+e", lam.sites()))?;
            for net in [&all, &lag] {
                let t = net.cone_decomposition(&lam, &delta).map_err(err)?;
                ensure(t.product_sum() == t.vacuum_dim, format!("cone sum {} vs {} on {:?}", t.product_sum(), t.vacuum_dim, lam.sites()))?;
                cones += 1;
            }
        }
    }
    let em = BraidedNet::new(&tc, &[1, 2]).map_err(err)?;
    let mut rng = seeded_rng(0xC0FFEE);
    let small = em.cocycle_report(&Region::rectangle(0, 0, 2, 2), 4, 0, tol, &mut rng).map_err(err)?;
    passes(&small, "cocycle 4 sites")?;
    let six = em.cocycle_report(&Region::rectangle(0, 0, 3, 2), 4, 200, tol, &mut rng).map_err(err)?;
    passes(&six, "cocycle 6 sites")?;
    Ok(vec![format!("{cones} cone tables, cocycle max {:.1e}", six.max_residual().max(small.max_residual()))])
}

fn dhr_braiding() -> Verdict {
    let tol = 1e-9;
    let chain = Chain::fusion(&vec_zn(2), &[0, 1]).map_err(err)?;
    let f = forgetful_toric()?;
    let rep = dhr_report(&chain, &f, 4, tol, &mut seeded_rng(0xC0FFEE)).map_err(err)?;
    passes(&rep, "dhr")?;
    let m = monodromy_residual(&chain, &f, 1, 2, 4, re(-1.0)).map_err(err)?;
    ensure(m < tol, format!("e-m monodromy residual {m:e}"))?;
    Ok(vec![format!("{} items, max {:.1e}, e-m monodromy -1 ({m:.1e})", rep.items.len(), rep.max_residual())])
}

fn muger() -> Verdict {
    let tc = toric_center();
    let z2 = muger_center(&tc).map_err(err)?;
    ensure(z2 == vec![0], format!("Z2(toric_center) = {z2:?}"))?;
    let ce = muger_centralizer(&tc, &[1]).map_err(err)?;
    ensure(ce == vec![0, 1], format!("centralizer of e = {ce:?}"))?;
    let sym = vec_zn(2).with_braiding("symmetric_z2", |_, _, _| re(1.0));
    let all = muger_center(&sym).map_err(err)?;
    ensure(all == vec![0, 1], format!("symmetric Z2 = {all:?}"))?;
    Ok(vec!["{1}, {1,e}, {1,g}".to_string()])
}

fn degeneration() -> Verdict {
    let tol = 1e-10;
    let mut worst: f64 = 0.0;
    for cat in [vec_zn(2), fibonacci()] {
        let phi = CentralFunctor::trivial(&cat);
        let net = BraidedNet::enriched(&phi, &[0, 1], &[0], 0).map_err(err)?;
        let chain = Chain::fusion(&cat, &[0, 1]).map_err(err)?;
        for w in 1..=3 {
            let region = Region::rectangle(0, 0, w, 2);
            let (a, b) = (net.algebra(&region).map_err(err)?.dim(), chain.algebra(w as usize).map_err(err)?.dim());
            ensure(a == b, format!("{} width {w}: net {a} vs chain {b}", cat.name()))?;
            let line = Region::rectangle(0, 0, w, 1);
            let space = net.space(&net.ordering(&line).map_err(err)?).map_err(err)?;
            let cspace = chain.space(w as usize).map_err(err)?;
            for seed in 0..4 {
                let x = Morphism::random(&space, &space, &mut seeded_rng(seed)).map_err(err)?;
                let y = net.include(&x, &line, &region).map_err(err)?;
                let xc = Morphism::from_dense(&cspace, &cspace, &x.to_dense(), 1e-14).map_err(err)?;
                let d = (net.state(&y).map_err(err)? - chain.state(&xc).map_err(err)?).norm();
                worst = worst.max(d);
            }
        }
    }
    ensure(worst < tol, format!("state mismatch {worst:e}"))?;
    let rep = backend_agreement(tol).map_err(err)?;
    passes(&rep, "backends")?;
    Ok(vec![format!("state gap {worst:.1e}, {} backend items", rep.items.len())])
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict, u64); 10] = [
        ("category validity", category_validity, 5),
        ("commuting projectors", commuting_projectors, 60),
        ("Pauli LTO suite", pauli_lto, 30),
        ("boundary algebras", boundary_algebras, 120),
        ("Haag duality", haag_duality, 60),
        ("tube algebra and center", tube_center, 10),
        ("braided net", braided_net, 60),
        ("DHR braiding", dhr_braiding, 60),
        ("Muger centralizers", muger, 5),
        ("degeneration", degeneration, 30),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let (ok, detail) = match out {
            Ok(notes) if !over => (true, notes.join("; ")),
            Ok(notes) => (false, format!("over budget; {}", notes.join("; "))),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {:.2}s / {budget}s: {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            took.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
