//! Ladder category `Lad(𝒳^mp, 𝒜, 𝒳)` for a braided central functor `Φ: 𝒜 → Z(𝒳)`.
//!
//! A ladder morphism `x_1^mp ⊠ y_1 → x_2^mp ⊠ y_2` is a sum over rungs
//! `a ∈ Irr(𝒜)` of tensors in `𝒳(x_1 → Φ(a) ⊗ x_2) ⊗ 𝒳(Φ(a) ⊗ y_1 → y_2)`.
//! Stacked rungs are fused with isometric vertices, so the fusion relation
//! `id_{a⊗b} = Σ_c v_c v_c†` carries no dimension factors in this basis.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{Engine, Morphism, Word};
use crate::category::CentralFunctor;
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64, ONE, ZERO};

/// Object `left^mp ⊠ right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderObject {
    pub left: Word,
    pub right: Word,
}

/// Single ladder with rung `rung`: `coeff · left ⊠ right`.
#[derive(Clone, Debug)]
pub struct LadderTerm {
    pub rung: usize,
    pub coeff: C64,
    pub left: Morphism,
    pub right: Morphism,
}

#[derive(Clone, Debug)]
pub struct LadderMorphism {
    pub dom: LadderObject,
    pub cod: LadderObject,
    pub terms: Vec<LadderTerm>,
}

/// Ladder calculus over a central functor.
#[derive(Clone, Debug)]
pub struct Ladder {
    engine: Engine,
    functor: CentralFunctor,
}

impl Ladder {
    pub fn new(functor: &CentralFunctor) -> Self {
        Self { engine: Engine::new(functor.target()), functor: functor.clone() }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn functor(&self) -> &CentralFunctor {
        &self.functor
    }

    fn phi(&self, a: usize) -> usize {
        self.functor.object(a)
    }

    /// `[Φ(a)] ++ w`.
    pub fn rung_word(&self, a: usize, w: &Word) -> Word {
        let mut out = Word::simple(&[self.phi(a)]);
        out.legs.extend(w.legs.iter().cloned());
        out
    }

    /// One ladder term, shape-checked.
    pub fn term(&self, dom: &LadderObject, cod: &LadderObject, rung: usize, left: Morphism, right: Morphism) -> Result<LadderMorphism> {
        if rung >= self.functor.source().rank() {
            return Err(Error::InadmissibleMove("rung label out of range".to_string()));
        }
        if left.dom().word() != &dom.left || left.cod().word() != &self.rung_word(rung, &cod.left) {
            return Err(Error::Shape("left ladder leg has the wrong boundary".to_string()));
        }
        if right.dom().word() != &self.rung_word(rung, &dom.right) || right.cod().word() != &cod.right {
            return Err(Error::Shape("right ladder leg has the wrong boundary".to_string()));
        }
        Ok(LadderMorphism { dom: dom.clone(), cod: cod.clone(), terms: vec![LadderTerm { rung, coeff: ONE, left, right }] })
    }

    pub fn zero(&self, dom: &LadderObject, cod: &LadderObject) -> LadderMorphism {
        LadderMorphism { dom: dom.clone(), cod: cod.clone(), terms: Vec::new() }
    }

    /// Identity ladder: unit rung with unitors.
    pub fn identity(&self, obj: &LadderObject) -> Result<LadderMorphism> {
        let u = self.functor.source().unit();
        let e = &self.engine;
        let left = e.unit_insert(&e.space(&obj.left)?, 0)?;
        let right = e.unit_insert(&e.space(&obj.right)?, 0)?.dagger();
        self.term(obj, obj, u, left, right)
    }

    /// Random ladder with one rank-one term per admissible rung.
    pub fn random<R: Rng>(&self, dom: &LadderObject, cod: &LadderObject, rng: &mut R) -> Result<LadderMorphism> {
        let e = &self.engine;
        let mut out = self.zero(dom, cod);
        for a in 0..self.functor.source().rank() {
            let ld = e.space(&dom.left)?;
            let lc = e.space(&self.rung_word(a, &cod.left))?;
            let rd = e.space(&self.rung_word(a, &dom.right))?;
            let rc = e.space(&cod.right)?;
            let left = Morphism::random(&ld, &lc, rng)?;
            let right = Morphism::random(&rd, &rc, rng)?;
            out.terms.push(LadderTerm { rung: a, coeff: ONE, left, right });
        }
        Ok(out)
    }

    /// `Φ(a) ⊗ w → w ⊗ Φ(a)` through the half-braiding.
    pub fn half_braid_past(&self, a: usize, w: &Word) -> Result<Morphism> {
        self.engine.half_braid_past(&self.functor, a, w)
    }

    /// Vertical stacking `upper ∘ lower`, rungs fused through isometric vertices.
    pub fn compose(&self, upper: &LadderMorphism, lower: &LadderMorphism) -> Result<LadderMorphism> {
        if upper.dom != lower.cod {
            return Err(Error::Shape("ladder objects do not match".to_string()));
        }
        let e = &self.engine;
        let acat = self.functor.source();
        let mut out = self.zero(&lower.dom, &upper.cod);
        for t1 in &lower.terms {
            for t2 in &upper.terms {
                let (a, b) = (t1.rung, t2.rung);
                let lifted = e.embed(&t2.left, t1.left.cod(), 1)?;
                let left = lifted.compose(&t1.left)?;
                let rdom = e.space(&self.rung_word(b, &self.rung_word(a, &lower.dom.right)))?;
                let lifted = e.embed(&t1.right, &rdom, 1)?;
                let right = t2.right.compose(&lifted)?;
                for c in acat.channels(a, b) {
                    let (pa, pb, pc) = (self.phi(a), self.phi(b), self.phi(c));
                    let merge = e.embed(&e.vertex(pa, pb, pc)?.dagger(), left.cod(), 0)?;
                    let lc = merge.compose(&left)?;
                    let split_dom = e.space(&self.rung_word(c, &lower.dom.right))?;
                    let split = e.embed(&e.vertex(pb, pa, pc)?, &split_dom, 0)?;
                    let rc = right.compose(&split)?;
                    let lambda = self.functor.half_braiding(a, pb, pc);
                    out.terms.push(LadderTerm { rung: c, coeff: t1.coeff * t2.coeff * lambda, left: lc, right: rc });
                }
            }
        }
        Ok(out)
    }

    /// Nesting product `(x^mp ⊠ y) ⊗ (w^mp ⊠ z) = (w ⊗ x)^mp ⊠ (y ⊗ z)`.
    pub fn tensor(&self, f: &LadderMorphism, g: &LadderMorphism) -> Result<LadderMorphism> {
        let e = &self.engine;
        let acat = self.functor.source();
        let dom = LadderObject { left: g.dom.left.concat(&f.dom.left)?, right: f.dom.right.concat(&g.dom.right)? };
        let cod = LadderObject { left: g.cod.left.concat(&f.cod.left)?, right: f.cod.right.concat(&g.cod.right)? };
        let mut out = self.zero(&dom, &cod);
        for t1 in &f.terms {
            for t2 in &g.terms {
                let (a, b) = (t1.rung, t2.rung);
                let l1 = e.tensor(&t2.left, &t1.left)?;
                let hb = self.half_braid_past(a, &g.cod.left)?.dagger();
                let l2 = e.embed(&hb, l1.cod(), 1)?.compose(&l1)?;
                let rdom_ab = e.space(&self.rung_word(a, &self.rung_word(b, &f.dom.right.concat(&g.dom.right)?)))?;
                let hb_r = self.half_braid_past(b, &f.dom.right)?;
                let r2 = e.embed(&hb_r, &rdom_ab, 1)?;
                let r3 = e.tensor(&t1.right, &t2.right)?.compose(&r2)?;
                for c in acat.channels(b, a) {
                    let (pa, pb, pc) = (self.phi(a), self.phi(b), self.phi(c));
                    let merge = e.embed(&e.vertex(pb, pa, pc)?.dagger(), l2.cod(), 0)?;
                    let lc = merge.compose(&l2)?;
                    let split_dom = e.space(&self.rung_word(c, &dom.right))?;
                    let split = e.embed(&e.vertex(pa, pb, pc)?, &split_dom, 0)?;
                    let rc = r3.compose(&split)?;
                    let lambda = self.functor.half_braiding(b, pa, pc);
                    out.terms.push(LadderTerm { rung: c, coeff: t1.coeff * t2.coeff * lambda, left: lc, right: rc });
                }
            }
        }
        Ok(out)
    }

    /// Canonical form: for each rung, the matrix `Σ coeff · vec(left) vec(right)ᵀ`.
    pub fn components(&self, m: &LadderMorphism) -> Result<Vec<CMat>> {
        let e = &self.engine;
        let mut out = Vec::new();
        for a in 0..self.functor.source().rank() {
            let ld = e.space(&m.dom.left)?;
            let lc = e.space(&self.rung_word(a, &m.cod.left))?;
            let rd = e.space(&self.rung_word(a, &m.dom.right))?;
            let rc = e.space(&m.cod.right)?;
            let nl = Morphism::zero(&ld, &lc)?.vectorize().len();
            let nr = Morphism::zero(&rd, &rc)?.vectorize().len();
            let mut acc = CMat::zeros(nl, nr);
            for t in m.terms.iter().filter(|t| t.rung == a) {
                let (vl, vr) = (t.left.vectorize(), t.right.vectorize());
                for i in 0..nl {
                    if vl[i] == ZERO {
                        continue;
                    }
                    for j in 0..nr {
                        acc[(i, j)] += t.coeff * vl[i] * vr[j];
                    }
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Largest entrywise difference of canonical forms.
    pub fn distance(&self, x: &LadderMorphism, y: &LadderMorphism) -> Result<f64> {
        if x.dom != y.dom || x.cod != y.cod {
            return Err(Error::Shape("ladder morphisms are not parallel".to_string()));
        }
        let (cx, cy) = (self.components(x)?, self.components(y)?);
        Ok(cx.iter().zip(&cy).map(|(a, b)| (a - b).max_abs()).fold(0.0, f64::max))
    }
}
