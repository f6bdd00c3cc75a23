use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{character_residual, FusionCategory, ModuleCategory};
use crate::linalg::{CMat, C64};
use crate::report::{Item, Report};

/// Worst-case residuals of the coherence axioms.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CategoryResiduals {
    pub pentagon: f64,
    pub hexagon: Option<f64>,
    pub f_unitarity: f64,
    pub unit_gauge: f64,
    pub pivotal: f64,
    pub r_modulus: Option<f64>,
    pub character: f64,
}

impl CategoryResiduals {
    pub fn max(&self) -> f64 {
        [
            self.pentagon,
            self.hexagon.unwrap_or(0.0),
            self.f_unitarity,
            self.unit_gauge,
            self.pivotal,
            self.r_modulus.unwrap_or(0.0),
            self.character,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `F^{abc}_d` as a matrix with rows `e ∈ a⊗b` and columns `f ∈ b⊗c`.
pub(crate) fn f_matrix(cat: &FusionCategory, a: usize, b: usize, c: usize, d: usize) -> (Vec<usize>, Vec<usize>, CMat) {
    let es: Vec<usize> = cat.channels(a, b).filter(|&e| cat.adm(e, c, d)).collect();
    let fs: Vec<usize> = cat.channels(b, c).filter(|&f| cat.adm(a, f, d)).collect();
    let m = CMat::from_fn(es.len(), fs.len(), |i, j| cat.f(a, b, c, d, es[i], fs[j]));
    (es, fs, m)
}

pub fn pentagon_residual(cat: &FusionCategory) -> f64 {
    let n = cat.rank();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for f in cat.channels(a, b) {
                        for g in cat.channels(f, c) {
                            for e in cat.channels(g, d) {
                                for l in cat.channels(c, d) {
                                    for k in cat.channels(b, l) {
                                        if !cat.adm(a, k, e) {
                                            continue;
                                        }
                                        let lhs = cat.f(f, c, d, e, g, l) * cat.f(a, b, l, e, f, k);
                                        let rhs: C64 = cat
                                            .channels(b, c)
                                            .map(|h| cat.f(a, b, c, g, f, h) * cat.f(a, h, d, e, g, k) * cat.f(b, c, d, k, h, l))
                                            .sum();
                                        worst = worst.max((lhs - rhs).norm());
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}

/// Both hexagons, with `R^{ab}_c` read through `r`.
pub(crate) fn hexagon_residual_with(cat: &FusionCategory, r: &dyn Fn(usize, usize, usize) -> C64, lefts: &[usize]) -> f64 {
    let n = cat.rank();
    let mut worst: f64 = 0.0;
    for &c in lefts {
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    for e in cat.channels(a, c) {
                        for g in cat.channels(c, b) {
                            if !cat.adm(e, b, d) || !cat.adm(a, g, d) {
                                continue;
                            }
                            let lhs = r(c, a, e) * cat.f(a, c, b, d, e, g) * r(c, b, g);
                            let rhs: C64 = cat
                                .channels(a, b)
                                .filter(|&f| cat.adm(c, f, d))
                                .map(|f| cat.f(c, a, b, d, e, f) * r(c, f, d) * cat.f(a, b, c, d, f, g))
                                .sum();
                            worst = worst.max((lhs - rhs).norm());
                        }
                    }
                }
            }
        }
    }
    worst
}

pub fn hexagon_residual(cat: &FusionCategory) -> f64 {
    let n = cat.rank();
    let all: Vec<usize> = (0..n).collect();
    let fwd = hexagon_residual_with(cat, &|a, b, c| cat.r(a, b, c), &all);
    // second hexagon: inverse braiding with arguments swapped
    let mut worst = fwd;
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    for e in cat.channels(a, c) {
                        for g in cat.channels(c, b) {
                            if !cat.adm(e, b, d) || !cat.adm(a, g, d) {
                                continue;
                            }
                            let lhs = cat.r(a, c, e).inv() * cat.f(a, c, b, d, e, g) * cat.r(b, c, g).inv();
                            let rhs: C64 = cat
                                .channels(a, b)
                                .filter(|&f| cat.adm(c, f, d))
                                .map(|f| cat.f(c, a, b, d, e, f) * cat.r(f, c, d).inv() * cat.f(a, b, c, d, f, g))
                                .sum();
                            worst = worst.max((lhs - rhs).norm());
                        }
                    }
                }
            }
        }
    }
    worst
}

pub fn f_unitarity_residual(cat: &FusionCategory) -> f64 {
    let n = cat.rank();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let (es, fs, m) = f_matrix(cat, a, b, c, d);
                    if es.is_empty() && fs.is_empty() {
                        continue;
                    }
                    worst = worst.max(m.unitarity_residual());
                }
            }
        }
    }
    worst
}

fn unit_gauge_residual(cat: &FusionCategory) -> f64 {
    let u = cat.unit();
    cat.f_tuples()
        .into_iter()
        .filter(|t| t[0] == u || t[1] == u || t[2] == u)
        .map(|[a, b, c, d, e, f]| (cat.f(a, b, c, d, e, f) - crate::linalg::ONE).norm())
        .fold(0.0, f64::max)
}

fn pivotal_residual(cat: &FusionCategory) -> f64 {
    (0..cat.rank())
        .map(|a| {
            let dual_dims = (cat.dim(a) - cat.dim(cat.dual(a))).abs();
            (cat.fs_phase(a).norm() - 1.0).abs().max(dual_dims)
        })
        .fold(0.0, f64::max)
}

fn r_modulus_residual(cat: &FusionCategory) -> f64 {
    let n = cat.rank();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in cat.channels(a, b) {
                worst = worst.max((cat.r(a, b, c).norm() - 1.0).abs());
            }
        }
    }
    worst
}

pub fn residuals(cat: &FusionCategory) -> CategoryResiduals {
    CategoryResiduals {
        pentagon: pentagon_residual(cat),
        hexagon: cat.is_braided().then(|| hexagon_residual(cat)),
        f_unitarity: f_unitarity_residual(cat),
        unit_gauge: unit_gauge_residual(cat),
        pivotal: pivotal_residual(cat),
        r_modulus: cat.is_braided().then(|| r_modulus_residual(cat)),
        character: character_residual(cat, cat.dims()),
    }
}

/// Check pentagon, hexagons, F-unitarity, gauge, pivotal phases and the dimension character.
pub fn validate_axioms(cat: &FusionCategory, tol: f64) -> Report {
    let res = residuals(cat);
    let mut report = Report::new(&alloc::format!("validate:{}", cat.name()), tol);
    report.push(Item::residual("pentagon", res.pentagon, tol));
    if let Some(h) = res.hexagon {
        report.push(Item::residual("hexagon", h, tol));
    }
    report.push(Item::residual("f_unitarity", res.f_unitarity, tol));
    report.push(Item::residual("unit_gauge", res.unit_gauge, tol));
    report.push(Item::residual("dual_pivotal", res.pivotal, tol));
    if let Some(r) = res.r_modulus {
        report.push(Item::residual("r_modulus", r, tol));
    }
    report.push(Item::residual("dimension_character", res.character, tol));
    report
}

/// Residuals of a module category: mixed pentagon, L-unitarity, action associativity, dims.
pub fn module_residuals(cat: &FusionCategory, m: &ModuleCategory) -> (f64, f64, f64) {
    let n = cat.rank();
    let k = m.rank();
    let mut pent: f64 = 0.0;
    for a in 0..k {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for f in m.channels(a, b) {
                        for g in m.channels(f, c) {
                            for e in m.channels(g, d) {
                                for l in cat.channels(c, d) {
                                    for kk in cat.channels(b, l) {
                                        if !m.acts(a, kk, e) {
                                            continue;
                                        }
                                        let lhs = m.l(f, c, d, e, g, l) * m.l(a, b, l, e, f, kk);
                                        let rhs: C64 = cat
                                            .channels(b, c)
                                            .map(|h| m.l(a, b, c, g, f, h) * m.l(a, h, d, e, g, kk) * cat.f(b, c, d, kk, h, l))
                                            .sum();
                                        pent = pent.max((lhs - rhs).norm());
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut unit: f64 = 0.0;
    for a in 0..k {
        for b in 0..n {
            for c in 0..n {
                for p in 0..k {
                    let hs: Vec<usize> = m.channels(a, b).filter(|&h| m.acts(h, c, p)).collect();
                    let fs: Vec<usize> = cat.channels(b, c).filter(|&f| m.acts(a, f, p)).collect();
                    if hs.is_empty() && fs.is_empty() {
                        continue;
                    }
                    let mat = CMat::from_fn(hs.len(), fs.len(), |i, j| m.l(a, b, c, p, hs[i], fs[j]));
                    unit = unit.max(mat.unitarity_residual());
                }
            }
        }
    }
    let mut dims: f64 = 0.0;
    for a in 0..k {
        if m.dim(a) <= 0.0 {
            dims = f64::INFINITY;
        }
        for b in 0..n {
            let rhs: f64 = m.channels(a, b).map(|p| m.dim(p)).sum();
            dims = dims.max((m.dim(a) * cat.dim(b) - rhs).abs());
        }
    }
    (pent, unit, dims)
}

pub fn validate_module(cat: &FusionCategory, m: &ModuleCategory, tol: f64) -> Report {
    let (pent, unit, dims) = module_residuals(cat, m);
    let mut report = Report::new(&alloc::format!("validate_module:{}", m.name()), tol);
    report.push(Item::residual("mixed_pentagon", pent, tol));
    report.push(Item::residual("l_unitarity", unit, tol));
    report.push(Item::residual("module_dimension_character", dims, tol));
    report
}
