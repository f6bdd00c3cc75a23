//! Tube algebra, Drinfeld-center simples, Müger centralizers and DHR braiding.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // float methods for no_std builds
use num_traits::Float;
use rand::Rng;

use crate::algebra::{Chain, DhrTruncation};
use crate::category::validate::hexagon_residual_with;
use crate::category::{CentralFunctor, FusionCategory};
use crate::error::{Error, Result};
use crate::homspace::{Engine, Morphism, Word};
use crate::linalg::{null_space, rank, re, CMat, C64, ONE, ZERO};
use crate::report::{Item, Quantity, Report};

/// Basis element `t^{c,k}_{a,b} ∈ 𝒞(a⊗c → c⊗b)` through the channel `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TubeElement {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub k: usize,
}

/// Tube algebra `⊕_{a,b,c} 𝒞(a⊗c → c⊗b)` with dense structure constants.
///
/// The product stacks two tubes and fuses the through-strands with the
/// isometric resolution `id_{c⊗c'} = Σ_{c''} v v†`.
#[derive(Clone, Debug)]
pub struct TubeAlgebra {
    cat: FusionCategory,
    basis: Vec<TubeElement>,
    index: BTreeMap<TubeElement, usize>,
    table: Vec<Vec<C64>>,
}

pub fn tube_algebra(cat: &FusionCategory) -> Result<TubeAlgebra> {
    let n = cat.rank();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let m = cat.n(a, b, c);
                if m > 1 {
                    return Err(Error::Multiplicity {
                        a: cat.label(a).to_string(),
                        b: cat.label(b).to_string(),
                        c: cat.label(c).to_string(),
                        mult: m as u32,
                    });
                }
            }
        }
    }
    let mut basis = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for k in cat.channels(a, c) {
                    if cat.adm(c, b, k) {
                        basis.push(TubeElement { a, b, c, k });
                    }
                }
            }
        }
    }
    let index: BTreeMap<TubeElement, usize> = basis.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let engine = Engine::new(cat);
    let dim = basis.len();
    let mut table = vec![vec![ZERO; dim]; dim * dim];
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            if x.b != y.a {
                continue;
            }
            for (t, v) in stack_product(&engine, x, y)? {
                let at = *index.get(&t).ok_or_else(|| Error::Invalid("product left the tube basis".to_string()))?;
                table[i * dim + j][at] += v;
            }
        }
    }
    Ok(TubeAlgebra { cat: cat.clone(), basis, index, table })
}

/// `t^{c,k}_{a,b}` as a morphism `a ⊗ c → c ⊗ b`.
fn tube_morphism(engine: &Engine, t: &TubeElement) -> Result<Morphism> {
    let dom = engine.space(&Word::simple(&[t.a, t.c]))?;
    let cod = engine.space(&Word::simple(&[t.c, t.b]))?;
    Morphism::from_fn(&dom, &cod, |i, j| {
        (dom.path(j).root() == t.k && cod.path(i).root() == t.k).then_some(ONE).unwrap_or(ZERO)
    })
}

fn stack_product(engine: &Engine, x: &TubeElement, y: &TubeElement) -> Result<Vec<(TubeElement, C64)>> {
    let cat = engine.category();
    let (a, c, c2, b2) = (x.a, x.c, y.c, y.b);
    let mx = tube_morphism(engine, x)?;
    let my = tube_morphism(engine, y)?;
    let big = engine.space(&Word::simple(&[a, c, c2]))?;
    let x1 = engine.extend_right(&mx, &big)?;
    let y1 = engine.embed(&my, x1.cod(), 1)?;
    let w = y1.compose(&x1)?;
    let mut out = Vec::new();
    for c3 in cat.channels(c, c2) {
        let v = engine.vertex(c, c2, c3)?;
        let small = engine.space(&Word::simple(&[a, c3]))?;
        let v_in = engine.embed(&v, &small, 1)?;
        let v_out = engine.embed(&v.dagger(), w.cod(), 0)?;
        let z = v_out.compose(&w)?.compose(&v_in)?;
        let (dom, cod) = (z.dom().clone(), z.cod().clone());
        for i in 0..cod.len() {
            for j in 0..dom.len() {
                let val = z.entry(i, j);
                if val.norm() == 0.0 {
                    continue;
                }
                let k = dom.path(j).root();
                out.push((TubeElement { a, b: b2, c: c3, k }, val));
            }
        }
    }
    Ok(out)
}

impl TubeAlgebra {
    pub fn category(&self) -> &FusionCategory {
        &self.cat
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[TubeElement] {
        &self.basis
    }

    pub fn position(&self, t: &TubeElement) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Structure constants of `t_i t_j`.
    pub fn structure(&self, i: usize, j: usize) -> &[C64] {
        &self.table[i * self.dim() + j]
    }

    pub fn product(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let d = self.dim();
        let mut out = vec![ZERO; d];
        for (i, xi) in x.iter().enumerate() {
            if xi.norm() == 0.0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.norm() == 0.0 {
                    continue;
                }
                let s = xi * yj;
                for (o, t) in out.iter_mut().zip(&self.table[i * d + j]) {
                    *o += s * t;
                }
            }
        }
        out
    }

    /// `Σ_a t^{1,a}_{a,a}`.
    pub fn unit(&self) -> Vec<C64> {
        let u = self.cat.unit();
        let mut out = vec![ZERO; self.dim()];
        for a in 0..self.cat.rank() {
            out[self.index[&TubeElement { a, b: a, c: u, k: a }]] = ONE;
        }
        out
    }

    /// Indices spanning the corner `⊕_c 𝒞(a⊗c → c⊗a)`.
    pub fn corner(&self, a: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].a == a && self.basis[i].b == a).collect()
    }

    /// Left multiplication by `x` as a matrix.
    pub fn left_matrix(&self, x: &[C64]) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for j in 0..d {
            let mut e = vec![ZERO; d];
            e[j] = ONE;
            for (i, v) in self.product(x, &e).into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// `max |(t_i t_j) t_k − t_i (t_j t_k)|` over all basis triples.
    pub fn associativity_residual(&self) -> f64 {
        let d = self.dim();
        let unit = |i: usize| {
            let mut e = vec![ZERO; d];
            e[i] = ONE;
            e
        };
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let ij = self.product(&unit(i), &unit(j));
                for k in 0..d {
                    let lhs = self.product(&ij, &unit(k));
                    let rhs = self.product(&unit(i), &self.product(&unit(j), &unit(k)));
                    worst = lhs.iter().zip(&rhs).fold(worst, |w, (p, q)| w.max((p - q).norm()));
                }
            }
        }
        worst
    }

    /// `max |1·t − t|, |t·1 − t|`.
    pub fn unit_residual(&self) -> f64 {
        let d = self.dim();
        let one = self.unit();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            let mut e = vec![ZERO; d];
            e[i] = ONE;
            for v in [self.product(&one, &e), self.product(&e, &one)] {
                worst = v.iter().zip(&e).fold(worst, |w, (p, q)| w.max((p - q).norm()));
            }
        }
        worst
    }

    /// Basis of the center `Z(Tube)` as orthonormal coefficient vectors.
    pub fn center_basis(&self, tol: f64) -> Vec<Vec<C64>> {
        let d = self.dim();
        let mut m = CMat::zeros(d * d, d);
        for j in 0..d {
            for i in 0..d {
                let ij = self.structure(i, j);
                let ji = self.structure(j, i);
                for o in 0..d {
                    m[(j * d + o, i)] = ij[o] - ji[o];
                }
            }
        }
        let ns = null_space(&m, tol);
        (0..ns.cols()).map(|c| ns.col(c)).collect()
    }
}

/// Simple object of the Drinfeld center read off a block of the tube algebra.
#[derive(Clone, Debug)]
pub struct CenterSimple {
    /// Multiplicity of each simple of `𝒞` in the underlying object.
    pub underlying: Vec<usize>,
    /// Matrix size of the block.
    pub size: usize,
    pub dim: f64,
    /// Minimal central idempotent.
    pub idempotent: Vec<C64>,
    /// Half-braiding scalars `[x][k]` when the underlying object is simple.
    pub half_braiding: Option<Vec<Vec<C64>>>,
}

impl CenterSimple {
    /// The underlying simple, when there is exactly one.
    pub fn simple(&self) -> Option<usize> {
        let total: usize = self.underlying.iter().sum();
        (total == 1).then(|| self.underlying.iter().position(|&m| m == 1)).flatten()
    }
}

/// Block decomposition of the tube algebra.
#[derive(Clone, Debug)]
pub struct TubeIrreps {
    pub simples: Vec<CenterSimple>,
    /// `max |e_i e_j − δ_ij e_i|`.
    pub idempotent_residual: f64,
    /// `|Σ_i e_i − 1|`.
    pub completeness_residual: f64,
    /// `Σ_i n_i² − dim Tube`.
    pub block_defect: i64,
    /// Worst hexagon residual among the recovered half-braidings.
    pub hexagon_residual: f64,
}

impl TubeIrreps {
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.simples.iter().map(|z| z.size).collect();
        s.sort_unstable();
        s
    }

    pub fn dims(&self) -> Vec<f64> {
        let mut d: Vec<f64> = self.simples.iter().map(|z| z.dim).collect();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        d
    }

    pub fn dim_square_sum(&self) -> f64 {
        self.simples.iter().map(|z| z.dim * z.dim).sum()
    }
}

/// Minimal central idempotents by interpolation on a generic central element.
pub fn tube_irreps<R: Rng>(tube: &TubeAlgebra, tol: f64, rng: &mut R) -> Result<TubeIrreps> {
    let d = tube.dim();
    let cat = &tube.cat;
    let center = tube.center_basis(1e-9);
    let k = center.len();
    if k == 0 {
        return Err(Error::Invalid("tube algebra has a trivial center".to_string()));
    }
    let mut z0 = vec![ZERO; d];
    for v in &center {
        let s = re(rng.gen_range(-1.0..1.0));
        for (o, x) in z0.iter_mut().zip(v) {
            *o += s * x;
        }
    }
    // multiplication by z0 on the center, in its orthonormal basis
    let mut lm = CMat::zeros(k, k);
    for (m, v) in center.iter().enumerate() {
        let p = tube.product(&z0, v);
        for (l, u) in center.iter().enumerate() {
            lm[(l, m)] = u.iter().zip(&p).map(|(a, b)| a.conj() * b).sum();
        }
    }
    let schur = nalgebra::Schur::new(lm.to_na());
    let eig = schur.eigenvalues().ok_or_else(|| Error::Invalid("central spectrum did not converge".to_string()))?;
    let lams: Vec<C64> = eig.iter().copied().collect();
    for i in 0..k {
        for j in 0..i {
            if (lams[i] - lams[j]).norm() < 1e-7 {
                return Err(Error::Invalid("degenerate central element".to_string()));
            }
        }
    }
    let one = tube.unit();
    let mut idems = Vec::with_capacity(k);
    for i in 0..k {
        let mut e = one.clone();
        for j in 0..k {
            if i == j {
                continue;
            }
            let shifted: Vec<C64> = z0.iter().zip(&one).map(|(z, u)| z - lams[j] * u).collect();
            let s = ONE / (lams[i] - lams[j]);
            e = tube.product(&e, &shifted).into_iter().map(|x| x * s).collect();
        }
        idems.push(e);
    }
    let mut idem_res: f64 = 0.0;
    for (i, ei) in idems.iter().enumerate() {
        for (j, ej) in idems.iter().enumerate() {
            let p = tube.product(ei, ej);
            let r = if i == j {
                p.iter().zip(ei).fold(0.0, |w: f64, (a, b)| w.max((a - b).norm()))
            } else {
                p.iter().fold(0.0, |w: f64, a| w.max(a.norm()))
            };
            idem_res = idem_res.max(r);
        }
    }
    let mut sum = vec![ZERO; d];
    for e in &idems {
        for (s, x) in sum.iter_mut().zip(e) {
            *s += x;
        }
    }
    let complete = sum.iter().zip(&one).fold(0.0, |w: f64, (a, b)| w.max((a - b).norm()));
    let rank_tol = 1e-8;
    let mut simples = Vec::with_capacity(k);
    let mut hex: f64 = 0.0;
    let mut squares = 0usize;
    for e in idems {
        let le = tube.left_matrix(&e);
        let r = rank(&le, rank_tol);
        let size = isqrt(r).ok_or_else(|| Error::Invalid(format!("block of dimension {r} is not a square")))?;
        squares += r;
        let mut underlying = vec![0usize; cat.rank()];
        for (a, m) in underlying.iter_mut().enumerate() {
            let idx = tube.corner(a);
            let sub = le.submatrix(&idx, &idx);
            let ra = rank(&sub, rank_tol);
            *m = isqrt(ra).ok_or_else(|| Error::Invalid(format!("corner of dimension {ra} is not a square")))?;
        }
        let dim: f64 = underlying.iter().enumerate().map(|(a, &m)| m as f64 * cat.dim(a)).sum();
        let mut simple = CenterSimple { underlying, size, dim, idempotent: e, half_braiding: None };
        if let Some(a) = simple.simple() {
            let hb = half_braiding_of(tube, &simple.idempotent, a)?;
            let r = |p: usize, x: usize, kk: usize| if p == a { hb[x][kk] } else { C64::new(f64::NAN, 0.0) };
            hex = hex.max(hexagon_residual_with(cat, &r, &[a]));
            simple.half_braiding = Some(hb);
        }
        simples.push(simple);
    }
    let _ = tol;
    Ok(TubeIrreps {
        simples,
        idempotent_residual: idem_res,
        completeness_residual: complete,
        block_defect: squares as i64 - d as i64,
        hexagon_residual: hex,
    })
}

fn isqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// Half-braiding of a one-dimensional block over the simple `a`.
///
/// The character `e·t^{c,k}_{a,a} = λ e` is the partial trace of the inverse
/// half-braiding against the tube element, `λ = conj(β_{c,k}) d_k / d_a`.
fn half_braiding_of(tube: &TubeAlgebra, e: &[C64], a: usize) -> Result<Vec<Vec<C64>>> {
    let cat = &tube.cat;
    let n = cat.rank();
    let norm: f64 = e.iter().map(|x| x.norm_sqr()).sum();
    let mut out = vec![vec![ZERO; n]; n];
    for c in 0..n {
        for k in cat.channels(a, c) {
            let t = TubeElement { a, b: a, c, k };
            let i = tube.position(&t).ok_or_else(|| Error::Invalid("missing corner element".to_string()))?;
            let mut ti = vec![ZERO; tube.dim()];
            ti[i] = ONE;
            let p = tube.product(e, &ti);
            let lam: C64 = e.iter().zip(&p).map(|(x, y)| x.conj() * y).sum::<C64>() / re(norm);
            out[c][k] = lam.conj() * re(cat.dim(a) / cat.dim(k));
        }
    }
    Ok(out)
}

/// Center data recovered from the tube algebra of a pointed category.
#[derive(Clone, Debug)]
pub struct DerivedCenter {
    /// Underlying simple of each center simple.
    pub underlying: Vec<usize>,
    /// Half-braiding scalars `[z][x][k]`.
    pub half_braiding: Vec<Vec<Vec<C64>>>,
}

impl DerivedCenter {
    pub fn from_irreps(irreps: &TubeIrreps) -> Result<Self> {
        let mut underlying = Vec::new();
        let mut half_braiding = Vec::new();
        for z in &irreps.simples {
            match (z.simple(), &z.half_braiding) {
                (Some(a), Some(hb)) => {
                    underlying.push(a);
                    half_braiding.push(hb.clone());
                }
                _ => return Err(Error::Invalid("center simple with a composite underlying object".to_string())),
            }
        }
        Ok(Self { underlying, half_braiding })
    }

    pub fn rank(&self) -> usize {
        self.underlying.len()
    }

    /// `R^{z,w}` on the channel `k` of the underlying objects.
    pub fn r(&self, z: usize, w: usize, k: usize) -> C64 {
        self.half_braiding[z][self.underlying[w]][k]
    }

    /// Bijection onto the simples of a central functor's source, matching
    /// underlying objects and half-braidings.
    pub fn match_functor(&self, functor: &CentralFunctor, tol: f64) -> Option<Vec<usize>> {
        let cat = functor.target();
        let mut map = Vec::with_capacity(self.rank());
        for z in 0..self.rank() {
            let a = self.underlying[z];
            let hit = (0..functor.source().rank()).find(|&s| {
                functor.object(s) == a
                    && (0..cat.rank()).all(|x| {
                        cat.channels(a, x).all(|k| (functor.half_braiding(s, x, k) - self.half_braiding[z][x][k]).norm() < tol)
                    })
            })?;
            if map.contains(&hit) {
                return None;
            }
            map.push(hit);
        }
        (map.len() == functor.source().rank()).then_some(map)
    }

    /// Compare with a braided central functor onto `Z(𝒞)`: matching, half-braidings
    /// and R-symbols of the functor's source.
    pub fn compare(&self, functor: &CentralFunctor, tol: f64) -> Report {
        let mut rep = Report::new("derived_center", tol);
        let src = functor.source();
        rep.push(Item::int_eq("rank", src.rank() as i64, self.rank() as i64));
        let Some(map) = self.match_functor(functor, 1e-6) else {
            rep.push(Item::check("matching", false));
            return rep;
        };
        let labels: Vec<String> = map.iter().map(|&s| src.label(s).to_string()).collect();
        rep.push(Item::check("matching", true).with_actual(Quantity::Texts(labels)));
        let cat = functor.target();
        let mut hb: f64 = 0.0;
        let mut rr: f64 = 0.0;
        for z in 0..self.rank() {
            let a = self.underlying[z];
            for x in 0..cat.rank() {
                for k in cat.channels(a, x) {
                    hb = hb.max((functor.half_braiding(map[z], x, k) - self.half_braiding[z][x][k]).norm());
                }
            }
            for w in 0..self.rank() {
                for y in src.channels(map[z], map[w]) {
                    let k = functor.object(y);
                    rr = rr.max((src.r(map[z], map[w], y) - self.r(z, w, k)).norm());
                }
            }
        }
        rep.push(Item::residual("half_braidings", hb, tol));
        rep.push(Item::residual("r_symbols", rr, tol));
        rep
    }
}

/// Tube dimension, blocks, center dimensions and `Σ d_z² = D²`.
pub fn tube_report<R: Rng>(cat: &FusionCategory, tol: f64, rng: &mut R) -> Result<Report> {
    let tube = tube_algebra(cat)?;
    let irreps = tube_irreps(&tube, tol, rng)?;
    let mut rep = Report::new(&format!("tube:{}", cat.name()), tol);
    rep.push(Item::check("dim", true).with_actual(Quantity::Int(tube.dim() as i64)));
    rep.push(Item::residual("associativity", tube.associativity_residual(), tol));
    rep.push(Item::residual("unit", tube.unit_residual(), tol));
    rep.push(Item::residual("idempotents", irreps.idempotent_residual, tol));
    rep.push(Item::residual("completeness", irreps.completeness_residual, tol));
    rep.push(Item::int_eq("block_square_sum", tube.dim() as i64, tube.dim() as i64 + irreps.block_defect));
    let sizes: Vec<i64> = irreps.block_sizes().iter().map(|&s| s as i64).collect();
    rep.push(Item::check("blocks", true).with_actual(Quantity::Ints(sizes)));
    rep.push(Item::check("dims", true).with_actual(Quantity::Reals(irreps.dims())));
    let d2 = cat.global_dim() * cat.global_dim();
    rep.push(Item::real_eq("dim_square_sum", d2, irreps.dim_square_sum(), tol));
    rep.push(Item::residual("half_braiding_hexagon", irreps.hexagon_residual, tol));
    for (i, z) in irreps.simples.iter().enumerate() {
        let parts: Vec<String> = z
            .underlying
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(a, &m)| if m == 1 { cat.label(a).to_string() } else { format!("{m}{}", cat.label(a)) })
            .collect();
        rep.push(
            Item::check(&format!("irrep{i}"), true)
                .with_actual(Quantity::Reals(vec![z.size as f64, z.dim]))
                .with_note(&format!("underlying {}", parts.join("+"))),
        );
    }
    Ok(rep)
}

/// Simples `z` with trivial monodromy against every simple in `subset`.
pub fn muger_centralizer(cat: &FusionCategory, subset: &[usize]) -> Result<Vec<usize>> {
    if !cat.is_braided() {
        return Err(Error::InadmissibleMove("centralizer of an unbraided category".to_string()));
    }
    if let Some(&s) = subset.iter().find(|&&s| s >= cat.rank()) {
        return Err(Error::UnknownLabel(format!("simple #{s}")));
    }
    let tol = 1e-9;
    Ok((0..cat.rank())
        .filter(|&z| {
            subset.iter().all(|&s| cat.channels(s, z).all(|k| (cat.r(z, s, k) * cat.r(s, z, k) - ONE).norm() < tol))
        })
        .collect())
}

/// Müger center `Z₂(𝒞)`, the centralizer of every simple.
pub fn muger_center(cat: &FusionCategory) -> Result<Vec<usize>> {
    let all: Vec<usize> = (0..cat.rank()).collect();
    muger_centralizer(cat, &all)
}

/// Truncated bimodule of `z`, required to centralize the image of the enrichment.
pub fn enriched_dhr_truncation(chain: &Chain, functor: &CentralFunctor, enrichment: &[usize], z: usize, n: usize) -> Result<DhrTruncation> {
    let cen = muger_centralizer(functor.source(), enrichment)?;
    if !cen.contains(&z) {
        return Err(Error::Invalid(format!("{} does not centralize the enrichment", functor.source().label(z))));
    }
    DhrTruncation::half_braided(chain, functor, z, n)
}

/// Localized basis at `site` with its partition-of-unity residual.
pub fn partition_of_unity(trunc: &DhrTruncation, site: usize) -> Result<(Vec<Morphism>, f64)> {
    let basis = trunc.localized_basis(site)?;
    let r = trunc.partition_residual(&basis)?;
    Ok((basis, r))
}

/// `ξ ⊠ η = (ξ ⊗ id) ∘ η` in `Hom(X^n → X^n ⊗ Φ(w) ⊗ Φ(z))`.
pub fn relative_tensor(engine: &Engine, xi: &Morphism, eta: &Morphism) -> Result<Morphism> {
    let lifted = engine.extend_right(xi, eta.cod())?;
    lifted.compose(eta)
}

/// DHR braiding `u_{w,z}` as the operator `Σ_{ij} (γ_j ⊠ β_i)(β_i ⊠ γ_j)†`
/// with `β` localized at `sites.0` in `Y^w` and `γ` at `sites.1` in `Y^z`.
pub fn dhr_braiding(chain: &Chain, functor: &CentralFunctor, w: usize, z: usize, n: usize, sites: (usize, usize)) -> Result<Morphism> {
    if sites.0.abs_diff(sites.1) < 2 {
        return Err(Error::Geometry("localization sites must be at least two apart".to_string()));
    }
    let yw = DhrTruncation::half_braided(chain, functor, w, n)?;
    let yz = DhrTruncation::half_braided(chain, functor, z, n)?;
    let bw = yw.localized_basis(sites.0)?;
    let cz = yz.localized_basis(sites.1)?;
    let e = chain.engine();
    let mut acc: Option<Morphism> = None;
    for b in &bw {
        for c in &cz {
            let term = relative_tensor(e, c, b)?.compose(&relative_tensor(e, b, c)?.dagger())?;
            acc = Some(match acc {
                Some(a) => a.add(&term)?,
                None => term,
            });
        }
    }
    acc.ok_or_else(|| Error::Invalid("empty localized basis".to_string()))
}

/// `id_{X^n} ⊗ β_{w,z}`, the half-braiding of `Φ(w)` past `Φ(z)`.
pub fn braided_image(chain: &Chain, functor: &CentralFunctor, w: usize, z: usize, n: usize) -> Result<Morphism> {
    let e = chain.engine();
    let hb = e.half_braid_past(functor, w, &Word::simple(&[functor.object(z)]))?;
    let mut word = chain.word(n);
    word.legs.push(vec![functor.object(w)]);
    word.legs.push(vec![functor.object(z)]);
    let space = e.space(&word)?;
    e.embed(&hb, &space, n)
}

/// Residuals of one DHR braiding operator.
#[derive(Clone, Debug)]
pub struct BraidingCheck {
    pub unitarity: f64,
    pub bimodularity: f64,
    pub basis_independence: f64,
    pub functor_agreement: f64,
}

/// Unitarity, bimodularity, independence of the localization sites, and
/// agreement with `id ⊗ β_{w,z}`.
pub fn braided_functor_check<R: Rng>(chain: &Chain, functor: &CentralFunctor, w: usize, z: usize, n: usize, rng: &mut R) -> Result<BraidingCheck> {
    if n < 4 {
        return Err(Error::Geometry("two localizations need at least four sites".to_string()));
    }
    let u = dhr_braiding(chain, functor, w, z, n, (0, 2))?;
    let alt = [(1, n - 1), (0, n - 1)];
    let mut independence: f64 = 0.0;
    for s in alt {
        independence = independence.max(u.distance(&dhr_braiding(chain, functor, w, z, n, s)?)?);
    }
    let unitarity = u
        .compose(&u.dagger())?
        .distance(&Morphism::identity(u.cod()))?
        .max(u.dagger().compose(&u)?.distance(&Morphism::identity(u.dom()))?);
    let e = chain.engine();
    let alg = chain.space(n)?;
    let mut bimod: f64 = 0.0;
    for _ in 0..2 {
        let a = Morphism::random(&alg, &alg, rng)?;
        let left = u.compose(&e.extend_right(&a, u.dom())?)?;
        let right = e.extend_right(&a, u.cod())?.compose(&u)?;
        bimod = bimod.max(left.distance(&right)?);
    }
    let agreement = u.distance(&braided_image(chain, functor, w, z, n)?)?;
    Ok(BraidingCheck { unitarity, bimodularity: bimod, basis_independence: independence, functor_agreement: agreement })
}

/// `u_{z,w} u_{w,z}` compared with `c · id`.
pub fn monodromy_residual(chain: &Chain, functor: &CentralFunctor, w: usize, z: usize, n: usize, c: C64) -> Result<f64> {
    let uwz = dhr_braiding(chain, functor, w, z, n, (0, 2))?;
    let uzw = dhr_braiding(chain, functor, z, w, n, (0, 2))?;
    let m = uzw.compose(&uwz)?;
    m.distance(&Morphism::identity(m.dom()).scale(c))
}

/// DHR braiding over a fusion chain for every ordered pair of source simples.
pub fn dhr_report<R: Rng>(chain: &Chain, functor: &CentralFunctor, n: usize, tol: f64, rng: &mut R) -> Result<Report> {
    let src = functor.source();
    let mut rep = Report::new(&format!("dhr:{}", functor.name()), tol);
    for w in 0..src.rank() {
        for z in 0..src.rank() {
            let chk = braided_functor_check(chain, functor, w, z, n, rng)?;
            let tag = format!("{}_{}", src.label(w), src.label(z));
            rep.push(Item::residual(&format!("{tag}/unitary"), chk.unitarity, tol));
            rep.push(Item::residual(&format!("{tag}/bimodular"), chk.bimodularity, tol));
            rep.push(Item::residual(&format!("{tag}/basis_independent"), chk.basis_independence, tol));
            rep.push(Item::residual(&format!("{tag}/braided_functor"), chk.functor_agreement, tol));
            let ch: Vec<usize> = src.channels(w, z).collect();
            if let [y] = ch[..] {
                let c = src.r(w, z, y) * src.r(z, w, y);
                rep.push(Item::residual(&format!("{tag}/monodromy"), monodromy_residual(chain, functor, w, z, n, c)?, tol));
            }
        }
    }
    Ok(rep)
}
