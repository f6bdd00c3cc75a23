use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::validate::hexagon_residual_with;
use super::FusionCategory;
use crate::error::{Error, Result};
use crate::linalg::{C64, ONE};
use crate::report::{Item, Report};

/// Braided central functor `Φ: 𝒜 → Z(𝒳)` sending simples to simples.
///
/// The half-braiding of `Φ(a)` past a simple `x` of `𝒳` is a scalar on each
/// fusion channel `k ∈ Φ(a)⊗x`, stored like an R-symbol.
#[derive(Clone, Debug)]
pub struct CentralFunctor {
    name: String,
    source: FusionCategory,
    target: FusionCategory,
    object: Vec<usize>,
    half_braiding: Vec<C64>,
}

impl CentralFunctor {
    pub fn new(
        name: &str,
        source: FusionCategory,
        target: FusionCategory,
        object: Vec<usize>,
        half_braiding: impl Fn(usize, usize, usize) -> C64,
    ) -> Result<Self> {
        if !source.is_braided() {
            return Err(Error::Invalid("source of a central functor must be braided".to_string()));
        }
        if object.len() != source.rank() || object.iter().any(|&x| x >= target.rank()) {
            return Err(Error::Shape("object map does not match the categories".to_string()));
        }
        let (na, nx) = (source.rank(), target.rank());
        let mut hb = vec![C64::new(0.0, 0.0); na * nx * nx];
        for a in 0..na {
            for x in 0..nx {
                for k in target.channels(object[a], x) {
                    hb[(a * nx + x) * nx + k] = half_braiding(a, x, k);
                }
            }
        }
        Ok(Self { name: name.to_string(), source, target, object, half_braiding: hb })
    }

    /// `Vec → 𝒳`, sending the unit to the unit with trivial half-braiding.
    pub fn trivial(target: &FusionCategory) -> Self {
        let vec = super::vec_zn(1);
        Self::new(&alloc::format!("trivial:{}", target.name()), vec, target.clone(), vec![target.unit()], |_, _, _| ONE)
            .expect("trivial central functor")
    }

    /// Identity functor of a braided category, half-braided by its own braiding.
    pub fn identity(cat: &FusionCategory) -> Result<Self> {
        let c = cat.clone();
        Self::new(&alloc::format!("identity:{}", cat.name()), cat.clone(), cat.clone(), (0..cat.rank()).collect(), move |a, x, k| {
            c.r(a, x, k)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &FusionCategory {
        &self.source
    }

    pub fn target(&self) -> &FusionCategory {
        &self.target
    }

    pub fn object(&self, a: usize) -> usize {
        self.object[a]
    }

    /// Half-braiding scalar of `Φ(a)` past `x` on channel `k`.
    pub fn half_braiding(&self, a: usize, x: usize, k: usize) -> C64 {
        let nx = self.target.rank();
        self.half_braiding[(a * nx + x) * nx + k]
    }

    /// Residuals: half-braiding hexagon, braided-functor agreement, functoriality.
    pub fn residuals(&self) -> (f64, f64, f64) {
        let (s, t) = (&self.source, &self.target);
        let mut hex: f64 = 0.0;
        for a in 0..s.rank() {
            let c = self.object[a];
            let r = |p: usize, x: usize, k: usize| -> C64 {
                if p == c {
                    self.half_braiding(a, x, k)
                } else {
                    C64::new(f64::NAN, 0.0)
                }
            };
            hex = hex.max(hexagon_residual_with(t, &r, &[c]));
        }
        let mut braided: f64 = 0.0;
        let mut functor: f64 = 0.0;
        for a in 0..s.rank() {
            for b in 0..s.rank() {
                for k in 0..s.rank() {
                    let (pa, pb, pk) = (self.object[a], self.object[b], self.object[k]);
                    if s.adm(a, b, k) != t.adm(pa, pb, pk) && s.adm(a, b, k) {
                        functor = f64::INFINITY;
                    }
                    if s.adm(a, b, k) {
                        braided = braided.max((self.half_braiding(a, pb, pk) - s.r(a, b, k)).norm());
                    }
                }
            }
        }
        for [a, b, c, d, e, f] in s.f_tuples() {
            let o = |i: usize| self.object[i];
            functor = functor.max((s.f(a, b, c, d, e, f) - t.f(o(a), o(b), o(c), o(d), o(e), o(f))).norm());
        }
        (hex, braided, functor)
    }

    pub fn validate(&self, tol: f64) -> Report {
        let (hex, braided, functor) = self.residuals();
        let mut r = Report::new(&alloc::format!("validate_central:{}", self.name), tol);
        r.push(Item::residual("half_braiding_hexagon", hex, tol));
        r.push(Item::residual("braided_agreement", braided, tol));
        r.push(Item::residual("strict_tensor_functor", functor, tol));
        r
    }
}
