//! Suite assembly for each subcommand.

use std::time::Instant;

use catnet::algebra::{haag_report, Chain};
use catnet::braided::{BraidedNet, Region};
use catnet::category::{validate_axioms, validate_module, CentralFunctor, FusionCategory, ModuleCategory};
use catnet::center::{dhr_report, tube_algebra, tube_irreps, tube_report, DerivedCenter};
use catnet::levin_wen::{LevinWen, LtoCase, LwLattice, Rect};
use catnet::linalg::seeded_rng;
use catnet::pauli::{PauliBoundary, ToricCode};
use catnet::report::{Item, Quantity, Report};

use crate::config::{self, Config, RegionConfig, Settings};
use crate::{CliError, Command, DataArgs};

type Outcome = Result<Report, CliError>;

pub fn dispatch(cmd: &Command, file: &Config, s: &Settings) -> Outcome {
    match cmd {
        Command::Validate { data } => validate(data, file, s),
        Command::Chain { data, site, n } => chain(data, site, *n, file, s),
        Command::Lto { data, model, lattice, boundary, axioms } => lto(data, model, lattice, boundary, axioms, file, s),
        Command::Boundary { data, lattice, lambda, delta } => boundary(data, lattice, lambda, delta, file, s),
        Command::Net { data, site, region, exhaustive } => net(data, site, region, *exhaustive, file, s),
        Command::Tube { data } => {
            let cat = config::resolve_category(&data.category, file, &data.module)?;
            timed(s, || tube_suite(&cat, s))
        }
        Command::Dhr { data, n } => {
            let name = data.central.clone().or_else(|| file.central.clone()).unwrap_or_else(|| "central:forgetful_toric".to_string());
            let functor = config::central(&name)?;
            timed(s, || dhr_suite(&functor, n.or(file.n).unwrap_or(4), s))
        }
        Command::All => all(s),
    }
}

/// Run a suite, stamping its wall-clock time on every item when requested.
fn timed(s: &Settings, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut rep = f()?;
    if s.timings {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        for item in &mut rep.items {
            item.runtime_ms = ms;
        }
    }
    Ok(rep.with_seed(s.seed))
}

fn validate(data: &DataArgs, file: &Config, s: &Settings) -> Outcome {
    let central_name = data.central.clone().or_else(|| file.central.clone());
    let has_cat = data.category.is_some() || file.category.is_some() || data.module.is_some() || file.module.is_some();
    let cat = if has_cat { Some(config::resolve_category(&data.category, file, &data.module)?) } else { None };
    let module = match (&cat, data.module.as_ref().or(file.module.as_ref())) {
        (Some(c), Some(m)) => Some(config::module(m, c)?),
        _ => None,
    };
    let central = central_name.as_deref().map(config::central).transpose()?;
    if cat.is_none() && central.is_none() {
        return Err(CliError::Usage("validate needs --category, --module or --central".to_string()));
    }
    timed(s, || Ok(validate_suite(cat.as_ref(), module.as_ref(), central.as_ref(), s)))
}

fn validate_suite(cat: Option<&FusionCategory>, module: Option<&ModuleCategory>, central: Option<&CentralFunctor>, s: &Settings) -> Report {
    let mut rep = Report::new("validate", s.tolerance);
    if let Some(c) = cat {
        rep.absorb(c.name(), validate_axioms(c, s.tolerance));
        if let Some(m) = module {
            rep.absorb(m.name(), validate_module(c, m, s.tolerance));
        }
    }
    if let Some(f) = central {
        rep.absorb(f.name(), f.validate(s.tolerance));
    }
    rep
}

fn site_labels(cat: &FusionCategory, flag: &Option<String>, file: &Config) -> Result<Vec<usize>, CliError> {
    match (flag, &file.site) {
        (Some(f), _) => config::labels(cat, &config::split_list(f)),
        (None, Some(v)) => config::labels(cat, v),
        (None, None) => Ok((0..cat.rank()).collect()),
    }
}

fn chain(data: &DataArgs, site: &Option<String>, n: Option<usize>, file: &Config, s: &Settings) -> Outcome {
    let cat = config::resolve_category(&data.category, file, &data.module)?;
    let x = site_labels(&cat, site, file)?;
    let n = n.or(file.n).unwrap_or(4);
    let ch = match data.module.as_ref().or(file.module.as_ref()) {
        Some(m) => {
            let module = config::module(m, &cat)?;
            let w: Vec<usize> = (0..module.rank()).collect();
            Chain::module(&cat, &module, &w, &x)?
        }
        None => Chain::fusion(&cat, &x)?,
    };
    timed(s, || chain_suite(&ch, n, s))
}

fn chain_suite(ch: &Chain, n: usize, s: &Settings) -> Outcome {
    let mut rep = Report::new("chain", s.tolerance);
    for k in 1..=n {
        rep.absorb(&format!("n{k}"), haag_report(ch, k, s.tolerance)?);
    }
    Ok(rep)
}

fn region_rect(flag: Option<&String>, file: Option<&RegionConfig>) -> Result<Option<Rect>, CliError> {
    match (flag, file) {
        (Some(f), _) => Ok(Some(config::parse_rect(f)?)),
        (None, Some(r)) => Ok(Some(r.rect()?)),
        (None, None) => Ok(None),
    }
}

/// One explicit case per axiom from configured regions.
fn explicit_cases(file: &Config, axioms: &[u8], lam: Rect, delta: Rect) -> Result<Vec<LtoCase>, CliError> {
    let lam2 = region_rect(None, file.lambda2.as_ref())?;
    let delta2 = region_rect(None, file.delta2.as_ref())?;
    axioms
        .iter()
        .map(|&a| {
            if a == 3 && lam2.is_none() {
                return Err(CliError::Usage("axiom 3 with explicit regions needs lambda2".to_string()));
            }
            if a == 4 && delta2.is_none() {
                return Err(CliError::Usage("axiom 4 with explicit regions needs delta2".to_string()));
            }
            Ok(LtoCase {
                axiom: a,
                lam,
                delta,
                lam2: if a == 3 { lam2 } else { None },
                delta2: if a == 4 { delta2 } else { None },
            })
        })
        .collect()
}

fn lto(
    data: &DataArgs,
    model: &Option<String>,
    lattice: &Option<String>,
    boundary: &Option<String>,
    axioms: &Option<String>,
    file: &Config,
    s: &Settings,
) -> Outcome {
    let model = model.clone().or_else(|| file.model.clone()).unwrap_or_else(|| "toric_pauli".to_string());
    let (w, h) = match (lattice, &file.lattice) {
        (Some(l), _) => config::parse_extent(l)?,
        (None, Some(l)) => (l.w, l.h),
        (None, None) => (4, 4),
    };
    let module_name = data.module.clone().or_else(|| file.module.clone());
    let bname = boundary
        .clone()
        .or_else(|| file.lattice.as_ref().and_then(|l| l.boundary.clone()))
        .unwrap_or_else(|| if module_name.is_some() { "module".to_string() } else { "bulk".to_string() });
    let axioms = match (axioms, &file.axioms) {
        (Some(a), _) => config::parse_axioms(a)?,
        (None, Some(v)) => {
            config::check_axioms(v)?;
            v.clone()
        }
        (None, None) => vec![1, 2, 3, 4],
    };
    let lam = region_rect(None, file.lambda.as_ref())?;
    let delta = region_rect(None, file.delta.as_ref())?;
    let cases = match (lam, delta) {
        (Some(l), Some(d)) => Some(explicit_cases(file, &axioms, l, d)?),
        (None, None) => None,
        _ => return Err(CliError::Usage("lambda and delta must be given together".to_string())),
    };
    match model.as_str() {
        "toric_pauli" => {
            let b = match bname.as_str() {
                "bulk" | "none" => PauliBoundary::Bulk,
                "smooth" => PauliBoundary::Smooth,
                "rough" => PauliBoundary::Rough,
                other => return Err(CliError::Usage(format!("unknown Pauli boundary '{other}'"))),
            };
            let code = ToricCode::new(w, h, b);
            timed(s, || match &cases {
                None => Ok(code.lto_suite(&axioms, s.tolerance)?),
                Some(cs) => {
                    let mut rep = Report::new("toric_pauli.lto", s.tolerance);
                    for c in cs {
                        rep.absorb(&format!("lto{}", c.axiom), code.lto_check(c, s.tolerance)?);
                    }
                    Ok(rep)
                }
            })
        }
        "levin_wen" => {
            let lw = levin_wen(data, file, w, h, &bname, s)?;
            timed(s, || match &cases {
                None => Ok(lw.lto_suite(&axioms, s.tolerance)?),
                Some(cs) => {
                    let mut rep = Report::new("levin_wen.lto", s.tolerance);
                    for c in cs {
                        rep.absorb(&format!("lto{}", c.axiom), lw.lto_check(c, s.tolerance)?);
                    }
                    Ok(rep)
                }
            })
        }
        other => Err(CliError::Usage(format!("unknown model '{other}'"))),
    }
}

fn levin_wen(data: &DataArgs, file: &Config, w: i32, h: i32, bname: &str, s: &Settings) -> Result<LevinWen, CliError> {
    let cat = config::resolve_category(&data.category, file, &data.module)?;
    let module_name = data.module.clone().or_else(|| file.module.clone());
    let boundary = match bname {
        "bulk" | "none" => false,
        "module" | "smooth" | "rough" => true,
        other => return Err(CliError::Usage(format!("unknown boundary '{other}'"))),
    };
    let lattice = LwLattice { width: w, height: h, boundary };
    let lw = match (boundary, module_name) {
        (false, None) => LevinWen::new(&cat, lattice)?,
        (true, Some(m)) => LevinWen::with_module(&cat, &config::module(&m, &cat)?, lattice)?,
        (true, None) => return Err(CliError::Usage("a boundary column needs --module".to_string())),
        (false, Some(_)) => return Err(CliError::Usage("--module given without a boundary".to_string())),
    };
    Ok(lw.with_limits(s.limits))
}

fn boundary(data: &DataArgs, lattice: &Option<String>, lambda: &Option<String>, delta: &Option<String>, file: &Config, s: &Settings) -> Outcome {
    let has_module = data.module.is_some() || file.module.is_some();
    let (w, h) = match (lattice, &file.lattice) {
        (Some(l), _) => config::parse_extent(l)?,
        (None, Some(l)) => (l.w, l.h),
        (None, None) => {
            if has_module {
                (4, 4)
            } else {
                (5, 4)
            }
        }
    };
    let bname = if has_module { "module" } else { "bulk" };
    let lw = levin_wen(data, file, w, h, bname, s)?;
    let (dl, dd) = if has_module { ((0, 2, 1, 2), (0, 0, 2, 2)) } else { ((1, 2, 2, 2), (0, 0, 3, 2)) };
    let lam = region_rect(lambda.as_ref(), file.lambda.as_ref())?.map_or_else(|| Rect::new(dl.0, dl.1, dl.2, dl.3), Ok)?;
    let del = region_rect(delta.as_ref(), file.delta.as_ref())?.map_or_else(|| Rect::new(dd.0, dd.1, dd.2, dd.3), Ok)?;
    timed(s, || boundary_suite(&lw, &lam, &del, s))
}

fn boundary_suite(lw: &LevinWen, lam: &Rect, delta: &Rect, s: &Settings) -> Outcome {
    let ba = lw.extract_boundary_algebra(lam, delta, s.tolerance)?;
    let mut rep = Report::new("boundary", s.tolerance);
    rep.absorb(&format!("{}x{}", lam.width(), lam.height()), ba.report(s.tolerance));
    Ok(rep)
}

fn net(data: &DataArgs, site: &Option<String>, region: &Option<String>, exhaustive: Option<usize>, file: &Config, s: &Settings) -> Outcome {
    let cat = match data.category.as_ref().or(file.category.as_ref()) {
        Some(n) => config::category(n)?,
        None => config::category("toric_center")?,
    };
    let x = site_labels(&cat, site, file)?;
    let reg = match (region, &file.region) {
        (Some(r), _) => {
            let (w, h) = config::parse_extent(r)?;
            Region::rectangle(0, 0, w, h)
        }
        (None, Some(r)) => Region::new(r.sites()),
        (None, None) => Region::rectangle(0, 0, 2, 2),
    };
    let bn = BraidedNet::new(&cat, &x)?;
    timed(s, || net_suite(&bn, &reg, exhaustive.or(file.exhaustive).unwrap_or(4), s))
}

fn net_suite(bn: &BraidedNet, region: &Region, exhaustive: usize, s: &Settings) -> Outcome {
    let mut rep = Report::new("net", s.tolerance);
    let alg = bn.algebra(region)?;
    rep.push(Item::check("algebra", true).with_actual(Quantity::Ints(vec![alg.dim() as i64, alg.center_dim() as i64])).with_note("dim, center dim"));
    let sites = region.sites();
    if let Some(x0) = sites.iter().map(|p| p.0).min() {
        let column = Region::new(sites.iter().copied().filter(|p| p.0 == x0));
        if column.len() < region.len() {
            let t = bn.cone_decomposition(&column, region)?;
            rep.push(Item::int_eq("cone/product_sum", t.vacuum_dim as i64, t.product_sum() as i64));
            let inner = bn.algebra(&column)?.center_dim();
            rep.push(Item::int_eq("cone/center_dim", inner as i64, t.center_dim() as i64));
        }
    }
    let mut rng = seeded_rng(s.seed);
    rep.absorb("cocycle", bn.cocycle_report(region, exhaustive, 50, s.tolerance, &mut rng)?);
    Ok(rep)
}

fn tube_suite(cat: &FusionCategory, s: &Settings) -> Outcome {
    let mut rng = seeded_rng(s.seed);
    Ok(tube_report(cat, s.tolerance, &mut rng)?)
}

fn dhr_suite(functor: &CentralFunctor, n: usize, s: &Settings) -> Outcome {
    let target = functor.target();
    let x: Vec<usize> = (0..target.rank()).collect();
    let ch = Chain::fusion(target, &x)?;
    let mut rng = seeded_rng(s.seed);
    let mut rep = dhr_report(&ch, functor, n, s.tolerance, &mut rng)?;
    let tube = tube_algebra(target)?;
    let irreps = tube_irreps(&tube, s.tolerance, &mut rng)?;
    match DerivedCenter::from_irreps(&irreps) {
        Ok(d) if d.rank() == functor.source().rank() => rep.absorb("tube_center", d.compare(functor, s.tolerance)),
        _ => rep.push(Item::skip("tube_center", "center simples are not all pointed or the functor is not onto the center")),
    }
    Ok(rep)
}

/// Every suite at its default size, run concurrently and assembled in order.
fn all(s: &Settings) -> Outcome {
    type Job<'a> = Box<dyn FnOnce() -> Outcome + Send + 'a>;
    let cat = |n: &str| config::category(n);
    let mut jobs: Vec<(String, Job)> = Vec::new();
    for name in ["vec_z2", "vec_z3", "fibonacci", "ising", "toric_center"] {
        let c = cat(name)?;
        jobs.push((format!("validate/{name}"), Box::new(move || Ok(validate_suite(Some(&c), None, None, s)))));
    }
    let forget = config::central("central:forgetful_toric")?;
    let f2 = forget.clone();
    jobs.push(("validate/forgetful_toric".to_string(), Box::new(move || Ok(validate_suite(None, None, Some(&f2), s)))));
    let z2 = cat("vec_z2")?;
    let fib = cat("fibonacci")?;
    let (z2c, fibc) = (Chain::fusion(&z2, &[0, 1])?, Chain::fusion(&fib, &[0, 1])?);
    jobs.push(("chain/vec_z2".to_string(), Box::new(move || chain_suite(&z2c, 6, s))));
    jobs.push(("chain/fibonacci".to_string(), Box::new(move || chain_suite(&fibc, 5, s))));
    let reg = config::module("module:regular:vec_z2", &z2)?;
    let modc = Chain::module(&z2, &reg, &[0, 1], &[0, 1])?;
    jobs.push(("chain/regular_vec_z2".to_string(), Box::new(move || chain_suite(&modc, 4, s))));
    for (tag, b) in [("bulk", PauliBoundary::Bulk), ("smooth", PauliBoundary::Smooth)] {
        let code = ToricCode::new(4, 4, b);
        jobs.push((format!("lto/toric_pauli_{tag}"), Box::new(move || Ok(code.lto_suite(&[1, 2, 3, 4], s.tolerance)?))));
    }
    let lw_bulk = LevinWen::new(&z2, LwLattice { width: 5, height: 4, boundary: false })?.with_limits(s.limits);
    jobs.push((
        "boundary/vec_z2_bulk".to_string(),
        Box::new(move || boundary_suite(&lw_bulk, &Rect::new(1, 2, 2, 2)?, &Rect::new(0, 0, 3, 2)?, s)),
    ));
    let vmod = config::module("module:vec_over_z2", &z2)?;
    let lw_corner = LevinWen::with_module(&z2, &vmod, LwLattice { width: 4, height: 4, boundary: true })?.with_limits(s.limits);
    jobs.push((
        "boundary/vec_z2_corner".to_string(),
        Box::new(move || boundary_suite(&lw_corner, &Rect::new(0, 2, 1, 2)?, &Rect::new(0, 0, 2, 2)?, s)),
    ));
    let tc = cat("toric_center")?;
    let bn = BraidedNet::new(&tc, &[0, 1, 2, 3])?;
    jobs.push(("net/toric_center".to_string(), Box::new(move || net_suite(&bn, &Region::rectangle(0, 0, 2, 2), 4, s))));
    for name in ["vec_z2", "fibonacci"] {
        let c = cat(name)?;
        jobs.push((format!("tube/{name}"), Box::new(move || tube_suite(&c, s))));
    }
    jobs.push(("dhr/forgetful_toric".to_string(), Box::new(move || dhr_suite(&forget, 4, s))));

    let results: Vec<(String, Outcome)> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs.into_iter().map(|(name, job)| (name, scope.spawn(move || timed(s, job)))).collect();
        handles
            .into_iter()
            .map(|(name, h)| {
                let out = h.join().unwrap_or_else(|_| Err(CliError::Usage(format!("suite {name} panicked"))));
                (name, out)
            })
            .collect()
    });
    let mut rep = Report::new("all", s.tolerance).with_seed(s.seed);
    for (name, out) in results {
        rep.absorb(&name, out?);
    }
    Ok(rep)
}
