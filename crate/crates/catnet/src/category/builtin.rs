//! Catalog of builtin categories, module categories and central functors.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // float methods for no_std builds
use num_traits::Float;

use super::{CentralFunctor, FusionCategory, ModuleCategory};
use crate::error::{Error, Result};
use crate::linalg::{polar, re, C64, ONE};

pub const BUILTIN_NAMES: &[&str] = &[
    "vec_zN",
    "fibonacci",
    "ising",
    "toric_center",
    "fib_center",
    "module:vec_over_zN",
    "module:regular:<category>",
    "central:trivial:<category>",
    "central:identity:<braided category>",
    "central:forgetful_toric",
];

/// Anything the catalog can return.
#[derive(Clone, Debug)]
pub enum Builtin {
    Category(FusionCategory),
    Module { category: FusionCategory, module: ModuleCategory },
    Central(CentralFunctor),
}

fn zn_label(k: usize) -> String {
    match k {
        0 => "1".to_string(),
        1 => "g".to_string(),
        _ => format!("g{k}"),
    }
}

/// `Vec(ℤ/N)` with trivial associator and the trivial symmetric braiding.
pub fn vec_zn(n: usize) -> FusionCategory {
    assert!(n >= 1, "cyclic group order must be positive");
    let labels: Vec<String> = (0..n).map(zn_label).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    FusionCategory::from_fn(&format!("vec_z{n}"), &refs, 0, |a, b, c| u8::from((a + b) % n == c), |_| ONE, Some(&|_, _, _| ONE))
        .expect("cyclic pointed category")
}

/// Fibonacci category `{1, τ}` with `τ⊗τ = 1⊕τ`.
pub fn fibonacci() -> FusionCategory {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let f = move |[a, b, c, d, e, f]: [usize; 6]| {
        if [a, b, c, d] == [1, 1, 1, 1] {
            match (e, f) {
                (0, 0) => re(1.0 / phi),
                (0, 1) | (1, 0) => re(1.0 / phi.sqrt()),
                _ => re(-1.0 / phi),
            }
        } else {
            ONE
        }
    };
    let r = |a: usize, b: usize, c: usize| {
        if a == 1 && b == 1 {
            if c == 0 {
                polar(1.0, -4.0 * PI / 5.0)
            } else {
                polar(1.0, 3.0 * PI / 5.0)
            }
        } else {
            ONE
        }
    };
    FusionCategory::from_fn(
        "fibonacci",
        &["1", "tau"],
        0,
        |a, b, c| match (a, b) {
            (0, x) | (x, 0) => u8::from(x == c),
            _ => 1,
        },
        f,
        Some(&r),
    )
    .expect("fibonacci data")
}

/// Ising category `{1, σ, ψ}`.
pub fn ising() -> FusionCategory {
    let (one, s, p) = (0usize, 1usize, 2usize);
    let fusion = move |a: usize, b: usize, c: usize| -> u8 {
        let ok = match (a, b) {
            (x, y) if x == one => y == c,
            (x, y) if y == one => x == c,
            (x, y) if x == s && y == s => c == one || c == p,
            (x, y) if x == p && y == p => c == one,
            _ => c == s,
        };
        u8::from(ok)
    };
    let h = 1.0 / 2f64.sqrt();
    let f = move |[a, b, c, d, e, f]: [usize; 6]| {
        if [a, b, c, d] == [s, s, s, s] {
            if e == p && f == p {
                re(-h)
            } else {
                re(h)
            }
        } else if [a, b, c, d] == [s, p, s, p] || [a, b, c, d] == [p, s, p, s] {
            re(-1.0)
        } else {
            ONE
        }
    };
    let r = move |a: usize, b: usize, c: usize| -> C64 {
        match (a, b, c) {
            (1, 1, 0) => polar(1.0, -PI / 8.0),
            (1, 1, 2) => polar(1.0, 3.0 * PI / 8.0),
            (1, 2, 1) | (2, 1, 1) => C64::new(0.0, -1.0),
            (2, 2, 0) => re(-1.0),
            _ => ONE,
        }
    };
    FusionCategory::from_fn("ising", &["1", "sigma", "psi"], one, fusion, f, Some(&r)).expect("ising data")
}

/// Flux and charge of a toric-center simple: index `2·flux + charge`.
pub fn toric_flux_charge(z: usize) -> (usize, usize) {
    (z >> 1, z & 1)
}

/// Drinfeld center of `Vec(ℤ/2)`: simples `1, e, m, f` with `e` the charge,
/// `m` the flux, `R^{(x,y),(x',y')} = (-1)^{y·x'}`.
pub fn toric_center() -> FusionCategory {
    let r = |a: usize, b: usize, _c: usize| {
        let (_, ya) = toric_flux_charge(a);
        let (xb, _) = toric_flux_charge(b);
        if ya * xb == 1 {
            re(-1.0)
        } else {
            ONE
        }
    };
    FusionCategory::from_fn("toric_center", &["1", "e", "m", "f"], 0, |a, b, c| u8::from(a ^ b == c), |_| ONE, Some(&r))
        .expect("toric center data")
}

/// `Fib ⊠ Fib̄`, the Drinfeld center of the Fibonacci category.
pub fn fib_center() -> FusionCategory {
    let fib = fibonacci();
    let mirror = fib.conjugate("fibonacci_mirror");
    fib.deligne(&mirror, "fib_center").expect("fibonacci center data")
}

/// `Vec` as a module category over `Vec(ℤ/N)` with trivial mixed associator.
pub fn vec_over_zn(cat: &FusionCategory, n: usize) -> ModuleCategory {
    ModuleCategory::from_fn(&format!("vec_over_z{n}"), &["*"], cat, |_, _, _| 1, |_| ONE, Some(alloc::vec![1.0]))
        .expect("vec module data")
}

pub fn builtin_category(name: &str) -> Result<FusionCategory> {
    match builtin(name)? {
        Builtin::Category(c) => Ok(c),
        _ => Err(Error::UnknownBuiltin(format!("{name} is not a category"))),
    }
}

pub fn builtin_module(name: &str) -> Result<(FusionCategory, ModuleCategory)> {
    match builtin(name)? {
        Builtin::Module { category, module } => Ok((category, module)),
        _ => Err(Error::UnknownBuiltin(format!("{name} is not a module category"))),
    }
}

fn parse_zn(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok()).filter(|&n| n >= 1)
}

/// Look up a builtin by name.
pub fn builtin(name: &str) -> Result<Builtin> {
    if let Some(n) = parse_zn(name, "vec_z") {
        return Ok(Builtin::Category(vec_zn(n)));
    }
    match name {
        "fibonacci" => return Ok(Builtin::Category(fibonacci())),
        "ising" => return Ok(Builtin::Category(ising())),
        "toric_center" => return Ok(Builtin::Category(toric_center())),
        "fib_center" => return Ok(Builtin::Category(fib_center())),
        "central:forgetful_toric" => {
            let z = toric_center();
            let v = vec_zn(2);
            let f = CentralFunctor::new("forgetful_toric", z, v, alloc::vec![0, 0, 1, 1], |a, x, _| {
                let (_, y) = toric_flux_charge(a);
                if y * x == 1 {
                    re(-1.0)
                } else {
                    ONE
                }
            })?;
            return Ok(Builtin::Central(f));
        }
        _ => {}
    }
    if let Some(n) = parse_zn(name, "module:vec_over_z") {
        let cat = vec_zn(n);
        let module = vec_over_zn(&cat, n);
        return Ok(Builtin::Module { category: cat, module });
    }
    if let Some(rest) = name.strip_prefix("module:regular:") {
        let cat = builtin_category(rest)?;
        let module = ModuleCategory::regular(&cat);
        return Ok(Builtin::Module { category: cat, module });
    }
    if let Some(rest) = name.strip_prefix("central:trivial:") {
        return Ok(Builtin::Central(CentralFunctor::trivial(&builtin_category(rest)?)));
    }
    if let Some(rest) = name.strip_prefix("central:identity:") {
        return Ok(Builtin::Central(CentralFunctor::identity(&builtin_category(rest)?)?));
    }
    Err(Error::UnknownBuiltin(name.to_string()))
}
