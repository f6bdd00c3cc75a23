//! Fusion spin chains and boundary module chains as towers of finite
//! dimensional C*-algebras, with the state, conditional expectation,
//! commutants, Haag duality and truncated DHR bimodules.
//!
//! Level `n` of a fusion chain over `X` is `End(X^{⊗n})`; a module chain with
//! boundary object `W` uses `End_ℳ(W ◁ X^{⊗n})`. Sites are the tensor legs.
//! The inclusion `level n → level m` is `x ↦ x ⊗ id`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

#[allow(unused_imports)] // float methods for no_std builds
use num_traits::Float;
use rand::Rng;

use crate::category::{CentralFunctor, FusionCategory, ModuleCategory};
use crate::error::{Error, Result};
use crate::homspace::{Engine, Morphism, PathSpace, Start, Word};
use crate::linalg::{column_span, eigh, re, subspace_distance, CMat, C64, ONE, ZERO};
use crate::report::{Item, Quantity, Report};

/// Finite dimensional C*-algebra `⊕_r M_{n_r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockAlgebra {
    /// `(label, block size)` for every nonzero block.
    pub sectors: Vec<(String, usize)>,
}

impl BlockAlgebra {
    pub fn dim(&self) -> usize {
        self.sectors.iter().map(|(_, n)| n * n).sum()
    }

    pub fn center_dim(&self) -> usize {
        self.sectors.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.sectors.iter().map(|s| s.1).collect()
    }
}

/// Block structure of the endomorphism algebra of a path space.
pub fn block_algebra(space: &PathSpace, label: impl Fn(usize) -> String) -> BlockAlgebra {
    let sectors = (0..space.root_count()).filter(|&r| space.count(r) > 0).map(|r| (label(r), space.count(r))).collect();
    BlockAlgebra { sectors }
}

/// Fusion chain over `X` or module chain `W ◁ X^{⊗n}`.
#[derive(Clone, Debug)]
pub struct Chain {
    engine: Engine,
    x: Vec<usize>,
    start: Start,
}

impl Chain {
    pub fn fusion(cat: &FusionCategory, x: &[usize]) -> Result<Self> {
        let x = site_object(cat.rank(), x)?;
        Ok(Self { engine: Engine::new(cat), x, start: Start::Unit })
    }

    /// Module chain; the trace must be normalized so that the `W`-bubble is one.
    pub fn module(cat: &FusionCategory, module: &ModuleCategory, w: &[usize], x: &[usize]) -> Result<Self> {
        let x = site_object(cat.rank(), x)?;
        let mut w = w.to_vec();
        w.sort_unstable();
        w.dedup();
        if w.is_empty() || w.iter().any(|&m| m >= module.rank()) {
            return Err(Error::Shape("boundary object must be a nonempty set of module simples".to_string()));
        }
        let mult: Vec<usize> = (0..module.rank()).map(|m| usize::from(w.contains(&m))).collect();
        if !module.is_normalized(cat, &mult, 1e-9) {
            return Err(Error::UnnormalizedTrace);
        }
        Ok(Self { engine: Engine::with_module(cat, module), x, start: Start::Module(w) })
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn category(&self) -> &FusionCategory {
        self.engine.category()
    }

    pub fn site(&self) -> &[usize] {
        &self.x
    }

    pub fn is_module(&self) -> bool {
        matches!(self.start, Start::Module(_))
    }

    pub fn word(&self, n: usize) -> Word {
        Word { start: self.start.clone(), legs: vec![self.x.clone(); n] }
    }

    pub fn space(&self, n: usize) -> Result<Arc<PathSpace>> {
        self.engine.space(&self.word(n))
    }

    pub fn identity(&self, n: usize) -> Result<Morphism> {
        Ok(Morphism::identity(&self.space(n)?))
    }

    /// Block structure of level `n`, sectors labelled `(root, #paths)`.
    pub fn algebra(&self, n: usize) -> Result<BlockAlgebra> {
        let space = self.space(n)?;
        Ok(match (&self.start, self.engine.module()) {
            (Start::Module(_), Some(m)) => block_algebra(&space, |r| m.label(r).to_string()),
            _ => block_algebra(&space, |r| self.category().label(r).to_string()),
        })
    }

    fn check_level(&self, x: &Morphism) -> Result<usize> {
        let w = x.dom().word();
        if !x.is_endo() || w.start != self.start || w.legs.iter().any(|l| *l != self.x) {
            return Err(Error::Shape("operator is not an element of the chain".to_string()));
        }
        Ok(w.len())
    }

    /// `x ⊗ id` at level `m`.
    pub fn include(&self, x: &Morphism, m: usize) -> Result<Morphism> {
        let n = self.check_level(x)?;
        if m < n {
            return Err(Error::Shape(format!("cannot include level {n} into level {m}")));
        }
        self.engine.extend_right(x, &self.space(m)?)
    }

    /// Operator `h` on the legs `pos..pos+len` placed into level `n`.
    pub fn local(&self, h: &Morphism, pos: usize, n: usize) -> Result<Morphism> {
        self.engine.embed(h, &self.space(n)?, pos)
    }

    /// Word of the interval algebra on legs `range`; with a boundary it
    /// includes the boundary site exactly when the range starts at zero.
    pub fn interval_word(&self, range: Range<usize>) -> Word {
        let legs = vec![self.x.clone(); range.len()];
        match (&self.start, range.start) {
            (Start::Module(w), 0) => Word { start: Start::Module(w.clone()), legs },
            _ => Word::new(legs),
        }
    }

    /// Matrix units of the interval algebra on `range`, placed into level `n`.
    pub fn interval_units(&self, range: Range<usize>, n: usize) -> Result<Vec<Morphism>> {
        if range.end > n {
            return Err(Error::Geometry(format!("interval {range:?} exceeds level {n}")));
        }
        let loc = self.engine.space(&self.interval_word(range.clone()))?;
        let target = self.space(n)?;
        self.engine
            .matrix_units(&loc, &loc)?
            .iter()
            .map(|u| self.engine.embed(u, &target, range.start))
            .collect()
    }

    /// Normalized trace `Tr(x) / Tr(1)`; for a fusion chain this is `d_X^{-n} Tr`.
    pub fn trace(&self, x: &Morphism) -> Result<C64> {
        let n = self.check_level(x)?;
        let one = self.engine.trace(&self.identity(n)?)?;
        Ok(self.engine.trace(x)? / one)
    }

    fn unit_in_site(&self) -> Result<usize> {
        let u = self.category().unit();
        if self.x.contains(&u) {
            Ok(u)
        } else {
            Err(Error::Invalid("the site object has no unit summand".to_string()))
        }
    }

    /// Canonical state: the vacuum coefficient on the all-unit path.
    pub fn state(&self, x: &Morphism) -> Result<C64> {
        let n = self.check_level(x)?;
        if self.is_module() {
            return Err(Error::Invalid("the vacuum state is defined for fusion chains".to_string()));
        }
        let u = self.unit_in_site()?;
        let space = self.space(n)?;
        let i = space.index_of(&vec![u; 2 * n + 1]).ok_or_else(|| Error::Shape("vacuum path missing".to_string()))?;
        Ok(x.entry(i, i))
    }

    /// Isometry `level k → level m` inserting unit summands on the new legs.
    pub fn vacuum_extension(&self, k: usize, m: usize) -> Result<Morphism> {
        let u = self.unit_in_site()?;
        let (dom, cod) = (self.space(k)?, self.space(m)?);
        Morphism::from_fn(&dom, &cod, |i, j| {
            let (p, q) = (dom.path(j).labels(), cod.path(i).labels());
            let h = *p.last().expect("nonempty path");
            let tail_ok = q[p.len()..].chunks(2).all(|c| c[0] == u && c[1] == h);
            if q[..p.len()] == *p && tail_ok {
                ONE
            } else {
                ZERO
            }
        })
    }

    /// Conditional expectation from level `m` onto level `k`, compressing the
    /// tail onto the unit summands.
    pub fn expectation(&self, x: &Morphism, k: usize) -> Result<Morphism> {
        let m = self.check_level(x)?;
        if k > m {
            return Err(Error::Shape(format!("cannot compress level {m} onto level {k}")));
        }
        let v = self.vacuum_extension(k, m)?;
        v.dagger().compose(&x.compose(&v)?)
    }
}

fn site_object(rank: usize, x: &[usize]) -> Result<Vec<usize>> {
    let mut x = x.to_vec();
    x.sort_unstable();
    x.dedup();
    if x.is_empty() {
        return Err(Error::Shape("site object is empty".to_string()));
    }
    if let Some(&a) = x.iter().find(|&&a| a >= rank) {
        return Err(Error::UnknownLabel(format!("simple #{a}")));
    }
    Ok(x)
}

/// Kernel of a positive semidefinite Gram matrix: eigenvectors whose
/// eigenvalue is below `rel · max(1, λ_max)`.
pub fn gram_kernel(g: &CMat, rel: f64) -> CMat {
    let n = g.rows();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let (vals, vecs) = eigh(g);
    let top = vals.last().copied().unwrap_or(0.0).max(1.0);
    let keep: Vec<usize> = (0..n).filter(|&i| vals[i] <= rel * top).collect();
    CMat::from_fn(n, keep.len(), |i, j| vecs[(i, keep[j])])
}

fn add_gram(g: &mut CMat, rows: &CMat, off_a: usize, other: Option<(&CMat, usize)>) {
    // adds (A e_a − B e_b)†(A e_a − B e_b) for A = rows at offset off_a and optional B
    let ata = &rows.adjoint() * rows;
    add_block(g, &ata, off_a, off_a, ONE);
    if let Some((b, off_b)) = other {
        let btb = &b.adjoint() * b;
        add_block(g, &btb, off_b, off_b, ONE);
        let atb = &rows.adjoint() * b;
        add_block(g, &atb, off_a, off_b, -ONE);
        add_block(g, &atb.adjoint(), off_b, off_a, -ONE);
    }
}

fn add_block(g: &mut CMat, m: &CMat, r0: usize, c0: usize, s: C64) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            g[(r0 + i, c0 + j)] += s * m[(i, j)];
        }
    }
}

/// Orthonormal basis (trace form `Σ_r d_r tr(x_r† y_r)`) of the commutant of
/// `gens` inside `End(space)`, solved block by block.
pub fn commutant(engine: &Engine, gens: &[Morphism], space: &Arc<PathSpace>, tol: f64) -> Result<Vec<Morphism>> {
    for g in gens {
        if g.dom().word() != space.word() || !g.is_endo() {
            return Err(Error::Shape("generator does not act on the ambient space".to_string()));
        }
    }
    let mm = space.word().is_module();
    let mut out = Vec::new();
    for r in 0..space.root_count() {
        let d = space.count(r);
        if d == 0 {
            continue;
        }
        let mut gram = CMat::zeros(d * d, d * d);
        for g in gens {
            let b = g.block(r);
            // row-major vec: vec(gX) = (g ⊗ 1) vec X, vec(Xg) = (1 ⊗ gᵀ) vec X
            let a = &b.kron(&CMat::identity(d)) - &CMat::identity(d).kron(&b.transpose());
            add_gram(&mut gram, &a, 0, None);
        }
        let kernel = gram_kernel(&gram, tol * 0.1);
        let w = 1.0 / engine.label_dim(mm, r).sqrt();
        for k in 0..kernel.cols() {
            let mut m = Morphism::zero(space, space)?;
            let blk = m.block_mut(r);
            for i in 0..d {
                for j in 0..d {
                    blk[(i, j)] = kernel[(i * d + j, k)] * w;
                }
            }
            out.push(m);
        }
    }
    Ok(out)
}

/// Outcome of a Haag duality check for one interval.
#[derive(Clone, Debug, PartialEq)]
pub struct HaagOutcome {
    pub interval: Range<usize>,
    pub level: usize,
    /// Dimension of the interval algebra.
    pub interval_dim: usize,
    /// Dimension of the computed relative commutant of the complement.
    pub commutant_dim: usize,
    /// Largest constraint violation of an interval algebra element.
    pub containment_residual: f64,
    /// Distance between the two subspaces when the dimensions agree.
    pub subspace_residual: f64,
    pub unknowns: usize,
}

impl HaagOutcome {
    pub fn passed(&self, tol: f64) -> bool {
        self.interval_dim == self.commutant_dim && self.containment_residual <= tol && self.subspace_residual <= tol
    }

    pub fn item(&self, name: &str, tol: f64) -> Item {
        let mut it = Item::int_eq(name, self.interval_dim as i64, self.commutant_dim as i64)
            .and_residual(self.containment_residual.max(self.subspace_residual), tol);
        it.note = Some(format!("legs {}..{} at level {}, {} unknowns", self.interval.start, self.interval.end, self.level, self.unknowns));
        it
    }
}

type Channel = Option<usize>;

struct ReducedBlock {
    s: Channel,
    c: Channel,
    space: Arc<PathSpace>,
    offset: usize,
    size: usize,
}

/// Haag duality for the interval of legs `interval` inside level `n`.
///
/// The commutant of the complement at level `n` is `⊕_{s,c} End(s ⊗ M ⊗ c)`
/// over the fusion channels `s` of the left complement and `c` of the right
/// complement, with `M` the interval object. One padding site on every open
/// side then imposes that the included element commutes with the larger
/// complement, which reduces to compressions on the small words
/// `x ⊗ s ⊗ M ⊗ c ⊗ x'`.
///
/// These constraints only touch the outer legs, so their solution space is a
/// bimodule over `End(M)` and splits over pairs of simple summands `(m, m')`
/// of `M`. The system is therefore solved with `M` replaced by the
/// multiplicity-free sum of its simples, and the commutant dimension is
/// `Σ dim Z_{m m'} · mult(m) · mult(m')`.
pub fn haag_check(chain: &Chain, interval: Range<usize>, n: usize, tol: f64) -> Result<HaagOutcome> {
    check_interval(chain, &interval, n)?;
    let e = chain.engine();
    let full = e.space(&chain.interval_word(interval.clone()))?;
    let simples: Vec<usize> = (0..full.root_count()).filter(|&r| full.count(r) > 0).collect();
    let mid = match (chain.interval_word(interval.clone()), interval.is_empty()) {
        (w, true) => w,
        (Word { start: Start::Module(_), .. }, false) => Word { start: Start::Module(simples.clone()), legs: Vec::new() },
        (_, false) => Word::new(vec![simples.clone()]),
    };
    let solved = solve_padded(chain, &interval, n, tol, &mid)?;
    let mut commutant_dim = 0;
    for &m in &simples {
        for &mp in &simples {
            let masked = CMat::from_fn(solved.kernel.rows(), solved.kernel.cols(), |i, k| {
                let (_, dom_label, cod_label) = solved.labels[i];
                if dom_label == m && cod_label == mp {
                    solved.kernel[(i, k)]
                } else {
                    ZERO
                }
            });
            let r = column_span(&masked, tol).cols();
            commutant_dim += r * full.count(m) * full.count(mp);
        }
    }
    let interval_dim = simples.iter().map(|&m| full.count(m) * full.count(m)).sum();
    Ok(HaagOutcome {
        interval,
        level: n,
        interval_dim,
        commutant_dim,
        containment_residual: solved.containment,
        subspace_residual: solved.subspace_residual,
        unknowns: solved.unknowns,
    })
}

/// [`haag_check`] without the multiplicity reduction: the unknowns are all of
/// `⊕_{s,c} End(s ⊗ M ⊗ c)`.
pub fn haag_check_direct(chain: &Chain, interval: Range<usize>, n: usize, tol: f64) -> Result<HaagOutcome> {
    check_interval(chain, &interval, n)?;
    let mid = chain.interval_word(interval.clone());
    let solved = solve_padded(chain, &interval, n, tol, &mid)?;
    Ok(HaagOutcome {
        interval,
        level: n,
        interval_dim: solved.embedded_count,
        commutant_dim: solved.kernel.cols(),
        containment_residual: solved.containment,
        subspace_residual: solved.subspace_residual,
        unknowns: solved.unknowns,
    })
}

fn check_interval(chain: &Chain, interval: &Range<usize>, n: usize) -> Result<()> {
    let (a, b) = (interval.start, interval.end);
    if a > b || b > n {
        return Err(Error::Geometry(format!("interval {a}..{b} is not inside level {n}")));
    }
    if chain.is_module() && a != 0 {
        return Err(Error::Geometry("a boundary interval must contain the boundary site".to_string()));
    }
    Ok(())
}

struct Solved {
    kernel: CMat,
    /// Per unknown: `(block, middle label of the domain path, middle label of the codomain path)`.
    labels: Vec<(usize, usize, usize)>,
    embedded_count: usize,
    containment: f64,
    subspace_residual: f64,
    unknowns: usize,
}

fn solve_padded(chain: &Chain, interval: &Range<usize>, n: usize, tol: f64, mid: &Word) -> Result<Solved> {
    let (a, b) = (interval.start, interval.end);
    let e = chain.engine();
    let cat = chain.category();
    let x = chain.site().to_vec();
    let interval_units = e.matrix_units(&e.space(mid)?, &e.space(mid)?)?;
    let interval_dim = interval_units.len();

    let roots_of = |len: usize| -> Result<Vec<usize>> {
        let sp = e.space(&Word::power(&x, len))?;
        Ok((0..sp.root_count()).filter(|&r| sp.count(r) > 0).collect())
    };
    let lefts: Vec<Channel> = if a > 0 { roots_of(a)?.into_iter().map(Some).collect() } else { vec![None] };
    let rights: Vec<Channel> = if b < n { roots_of(n - b)?.into_iter().map(Some).collect() } else { vec![None] };
    let reduced_word = |s: Channel, c: Channel| -> Word {
        let mut w = mid.clone();
        if let Some(s) = s {
            w.legs.insert(0, vec![s]);
        }
        if let Some(c) = c {
            w.legs.push(vec![c]);
        }
        w
    };

    let mut blocks = Vec::new();
    let mut offset = 0;
    for &s in &lefts {
        for &c in &rights {
            let space = e.space(&reduced_word(s, c))?;
            let size: usize = (0..space.root_count()).map(|r| space.count(r) * space.count(r)).sum();
            if size == 0 {
                continue;
            }
            blocks.push(ReducedBlock { s, c, space, offset, size });
            offset += size;
        }
    }
    let unknowns = offset;

    // linear maps from one block's unknowns to vectorized compressions
    struct Compression {
        block: usize,
        map: CMat,
    }
    let mut diag: BTreeMap<(Channel, Channel), Vec<Compression>> = BTreeMap::new();
    let mut off: Vec<Compression> = Vec::new();
    let pads_l: Vec<Channel> = if a > 0 { x.iter().map(|&v| Some(v)).collect() } else { vec![None] };
    let pads_r: Vec<Channel> = if b < n { x.iter().map(|&v| Some(v)).collect() } else { vec![None] };
    let mut isometries: BTreeMap<(Channel, Channel, Channel, Channel, Channel, Channel), Morphism> = BTreeMap::new();
    for (bi, blk) in blocks.iter().enumerate() {
        let units = e.matrix_units(&blk.space, &blk.space)?;
        for &xl in &pads_l {
            for &xr in &pads_r {
                let targets_l: Vec<Channel> = match (xl, blk.s) {
                    (Some(xl), Some(s)) => cat.channels(xl, s).map(Some).collect(),
                    _ => vec![None],
                };
                let targets_r: Vec<Channel> = match (blk.c, xr) {
                    (Some(c), Some(xr)) => cat.channels(c, xr).map(Some).collect(),
                    _ => vec![None],
                };
                let mut targets = Vec::new();
                for &sl in &targets_l {
                    for &cr in &targets_r {
                        targets.push((sl, cr));
                    }
                }
                let mut vs = Vec::new();
                for &(sl, cr) in &targets {
                    let key = (blk.s, blk.c, xl, xr, sl, cr);
                    if !isometries.contains_key(&key) {
                        let v = reduced_isometry(e, &reduced_word(sl, cr), blk.s, blk.c, xl, xr)?;
                        isometries.insert(key, v);
                    }
                    vs.push(isometries[&key].clone());
                }
                let exts: Vec<Morphism> = units.iter().map(|u| pad_operator(e, u, xl, xr)).collect::<Result<_>>()?;
                for (t1, v1) in vs.iter().enumerate() {
                    for (t2, v2) in vs.iter().enumerate() {
                        let cols: Vec<Vec<C64>> = exts
                            .iter()
                            .map(|ext| Ok(v1.dagger().compose(&ext.compose(v2)?)?.vectorize()))
                            .collect::<Result<_>>()?;
                        let rows = cols.first().map_or(0, |c| c.len());
                        let map = CMat::from_fn(rows, cols.len(), |i, j| cols[j][i]);
                        let comp = Compression { block: bi, map };
                        if t1 == t2 {
                            diag.entry(targets[t1]).or_default().push(comp);
                        } else {
                            off.push(comp);
                        }
                    }
                }
            }
        }
    }

    let mut gram = CMat::zeros(unknowns, unknowns);
    for comp in &off {
        add_gram(&mut gram, &comp.map, blocks[comp.block].offset, None);
    }
    for comps in diag.values() {
        let first = &comps[0];
        for comp in &comps[1..] {
            add_gram(&mut gram, &comp.map, blocks[comp.block].offset, Some((&first.map, blocks[first.block].offset)));
        }
    }
    let kernel = gram_kernel(&gram, 1e-10);

    // interval algebra inside the reduced unknowns: y ↦ (id_s ⊗ y ⊗ id_c)_{s,c}
    let mut embedded = CMat::zeros(unknowns, interval_dim);
    for (k, y) in interval_units.iter().enumerate() {
        for blk in &blocks {
            let pos = usize::from(blk.s.is_some());
            let v = e.embed(y, &blk.space, pos)?.vectorize();
            for (i, val) in v.into_iter().enumerate() {
                embedded[(blk.offset + i, k)] = val;
            }
        }
    }
    let slice = |col: &CMat, k: usize, blk: &ReducedBlock| -> Vec<C64> { (0..blk.size).map(|i| col[(blk.offset + i, k)]).collect() };
    let mut containment: f64 = 0.0;
    for k in 0..interval_dim {
        let norm = (0..unknowns).map(|i| embedded[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let mut worst: f64 = 0.0;
        for comp in &off {
            let v = comp.map.matvec(&slice(&embedded, k, &blocks[comp.block]));
            worst = worst.max(v.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
        for comps in diag.values() {
            let base = comps[0].map.matvec(&slice(&embedded, k, &blocks[comps[0].block]));
            for comp in &comps[1..] {
                let v = comp.map.matvec(&slice(&embedded, k, &blocks[comp.block]));
                worst = worst.max(v.iter().zip(&base).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max));
            }
        }
        containment = containment.max(worst / norm.max(1e-300));
    }
    let span = column_span(&embedded, tol);
    let subspace_residual = if span.cols() == kernel.cols() { subspace_distance(&span, &kernel) } else { f64::INFINITY };
    let module_mid = mid.legs.is_empty();
    let mut labels = Vec::with_capacity(unknowns);
    for (bi, blk) in blocks.iter().enumerate() {
        let at = if module_mid { 0 } else { 2 * usize::from(blk.s.is_some()) + 1 };
        for r in 0..blk.space.root_count() {
            for i in blk.space.range(r) {
                for j in blk.space.range(r) {
                    labels.push((bi, blk.space.path(j).labels()[at], blk.space.path(i).labels()[at]));
                }
            }
        }
    }
    Ok(Solved { kernel, labels, embedded_count: interval_dim, containment, subspace_residual, unknowns })
}

/// `(id_{s'} ⊗ id ⊗ id_{c'}) → x_l ⊗ s ⊗ X^I ⊗ c ⊗ x_r` through isometric vertices.
fn reduced_isometry(e: &Engine, target: &Word, s: Channel, c: Channel, xl: Channel, xr: Channel) -> Result<Morphism> {
    let mut acc = e.identity(target)?;
    if let (Some(c), Some(xr)) = (c, xr) {
        let cp = target.legs.last().expect("right channel leg")[0];
        let v = e.vertex(c, xr, cp)?;
        let pos = target.len() - 1;
        acc = e.embed(&v, acc.cod(), pos)?.compose(&acc)?;
    }
    if let (Some(s), Some(xl)) = (s, xl) {
        let sp = target.legs[0][0];
        let v = e.vertex(xl, s, sp)?;
        acc = e.embed(&v, acc.cod(), 0)?.compose(&acc)?;
    }
    Ok(acc)
}

/// `id_{x_l} ⊗ y ⊗ id_{x_r}`.
fn pad_operator(e: &Engine, y: &Morphism, xl: Channel, xr: Channel) -> Result<Morphism> {
    let mut out = y.clone();
    if let Some(xr) = xr {
        let mut w = out.dom().word().clone();
        w.legs.push(vec![xr]);
        out = e.extend_right(&out, &e.space(&w)?)?;
    }
    if let Some(xl) = xl {
        let mut w = out.dom().word().clone();
        w.legs.insert(0, vec![xl]);
        out = e.embed(&out, &e.space(&w)?, 1)?;
    }
    Ok(out)
}

/// Dense cross-check of [`haag_check`]: solves for all `x` at level `n` whose
/// inclusion (padded by one site on each open side) commutes with matrix
/// units of both complement pieces. Exponential in `n`; meant for small cases.
pub fn haag_check_dense(chain: &Chain, interval: Range<usize>, n: usize, tol: f64) -> Result<HaagOutcome> {
    check_interval(chain, &interval, n)?;
    let (a, b) = (interval.start, interval.end);
    let e = chain.engine();
    let pl = usize::from(a > 0);
    let pr = usize::from(b < n);
    let big = n + pl + pr;
    let big_space = chain.space(big)?;
    let level = chain.space(n)?;
    let x = chain.site().to_vec();
    let mut gens = Vec::new();
    if a > 0 {
        let sp = e.space(&Word::power(&x, pl + a))?;
        for u in e.matrix_units(&sp, &sp)? {
            gens.push(e.embed(&u, &big_space, 0)?);
        }
    }
    if b < n {
        let sp = e.space(&Word::power(&x, big - pl - b))?;
        for u in e.matrix_units(&sp, &sp)? {
            gens.push(e.embed(&u, &big_space, pl + b)?);
        }
    }
    let units = e.matrix_units(&level, &level)?;
    let lifted: Vec<Morphism> = units
        .iter()
        .map(|u| if pl == 1 { e.embed(u, &big_space, 1) } else { e.extend_right(u, &big_space) })
        .collect::<Result<_>>()?;
    let dim = units.len();
    let mut gram = CMat::zeros(dim, dim);
    for g in &gens {
        let cols: Vec<Vec<C64>> =
            lifted.iter().map(|l| Ok(l.compose(g)?.sub(&g.compose(l)?)?.vectorize())).collect::<Result<_>>()?;
        let map = CMat::from_fn(cols[0].len(), dim, |i, j| cols[j][i]);
        add_gram(&mut gram, &map, 0, None);
    }
    let kernel = gram_kernel(&gram, 1e-10);
    let iv = chain.interval_units(interval.clone(), n)?;
    let embedded = CMat::from_fn(dim, iv.len(), |i, k| iv[k].vectorize()[i]);
    let mut containment: f64 = 0.0;
    for y in &iv {
        let ly = if pl == 1 { e.embed(y, &big_space, 1)? } else { e.extend_right(y, &big_space)? };
        for g in &gens {
            containment = containment.max(ly.compose(g)?.sub(&g.compose(&ly)?)?.max_abs());
        }
    }
    let span = column_span(&embedded, tol);
    let subspace_residual = if span.cols() == kernel.cols() { subspace_distance(&span, &kernel) } else { f64::INFINITY };
    Ok(HaagOutcome {
        interval,
        level: n,
        interval_dim: iv.len(),
        commutant_dim: kernel.cols(),
        containment_residual: containment,
        subspace_residual,
        unknowns: dim,
    })
}

/// Haag duality over every proper interval of level `n`: all subintervals
/// for a fusion chain, the boundary intervals for a module chain.
pub fn haag_report(chain: &Chain, n: usize, tol: f64) -> Result<Report> {
    let mut rep = Report::new("haag", tol);
    let mut intervals = Vec::new();
    if chain.is_module() {
        intervals.extend((0..n).map(|b| 0..b));
    } else {
        for a in 0..n {
            for b in a + 1..=n {
                if b - a < n {
                    intervals.push(a..b);
                }
            }
        }
    }
    for iv in intervals {
        let out = haag_check(chain, iv.clone(), n, tol)?;
        let sites = if chain.is_module() { format!("boundary+{}", iv.len()) } else { format!("{}..{}", iv.start, iv.end) };
        rep.push(out.item(&format!("n{n}/{sites}"), tol));
    }
    Ok(rep)
}

/// Where the extra strand of a DHR bimodule sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attach {
    /// `Hom(X^n → X^n ⊗ Φ(z))`, the strand leaves through the half-braiding.
    Right,
    /// `Hom(W ⊗ X^n → z ⊗ W ⊗ X^n)`, left multiplication on the boundary.
    Left,
}

/// Truncation `Y_n` of a DHR bimodule over level `n`.
///
/// Right action by precomposition, left action through `a ↦ a ⊗ id` (or
/// `id ⊗ a`), right inner product `⟨η|ξ⟩ = η†ξ`.
#[derive(Clone, Debug)]
pub struct DhrTruncation {
    engine: Engine,
    dom: Arc<PathSpace>,
    cod: Arc<PathSpace>,
    attach: Attach,
    functor: Option<CentralFunctor>,
    z: usize,
    trivial: bool,
}

impl DhrTruncation {
    /// Bimodule of a half-braided object `Φ(z)` over a fusion chain.
    pub fn half_braided(chain: &Chain, functor: &CentralFunctor, z: usize, n: usize) -> Result<Self> {
        if chain.is_module() {
            return Err(Error::Invalid("half-braided bimodules live on fusion chains".to_string()));
        }
        let t = functor.target();
        if t.name() != chain.category().name() || t.rank() != chain.category().rank() {
            return Err(Error::Invalid("central functor does not land in the chain category".to_string()));
        }
        if z >= functor.source().rank() {
            return Err(Error::UnknownLabel(format!("simple #{z}")));
        }
        let e = chain.engine().clone();
        let dom = chain.space(n)?;
        let mut w = chain.word(n);
        w.legs.push(vec![functor.object(z)]);
        let cod = e.space(&w)?;
        let trivial = z == functor.source().unit();
        Ok(Self { engine: e, dom, cod, attach: Attach::Right, functor: Some(functor.clone()), z, trivial })
    }

    /// Boundary bimodule of the module functor `z ⊗ -` on the regular module,
    /// with `W ◁ X^n` written as the category word `W ⊗ X^n`.
    pub fn left_multiplication(cat: &FusionCategory, w: &[usize], x: &[usize], z: usize, n: usize) -> Result<Self> {
        if z >= cat.rank() {
            return Err(Error::UnknownLabel(format!("simple #{z}")));
        }
        let e = Engine::new(cat);
        let mut legs = vec![site_object(cat.rank(), w)?];
        legs.extend(vec![site_object(cat.rank(), x)?; n]);
        let dom = e.space(&Word::new(legs.clone()))?;
        legs.insert(0, vec![z]);
        let cod = e.space(&Word::new(legs))?;
        let trivial = z == cat.unit();
        Ok(Self { engine: e, dom, cod, attach: Attach::Left, functor: None, z, trivial })
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn dom(&self) -> &Arc<PathSpace> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<PathSpace> {
        &self.cod
    }

    pub fn attach(&self) -> Attach {
        self.attach
    }

    pub fn label(&self) -> usize {
        self.z
    }

    pub fn functor(&self) -> Option<&CentralFunctor> {
        self.functor.as_ref()
    }

    /// Number of sites (legs of the domain).
    pub fn sites(&self) -> usize {
        self.dom.word().len()
    }

    pub fn dim(&self) -> usize {
        (0..self.dom.root_count()).map(|r| self.dom.count(r) * self.cod.count(r)).sum()
    }

    /// Image of an algebra element acting on the codomain.
    pub fn lift(&self, a: &Morphism) -> Result<Morphism> {
        match self.attach {
            Attach::Right => self.engine.extend_right(a, &self.cod),
            Attach::Left => self.engine.embed(a, &self.cod, 1),
        }
    }

    pub fn left(&self, a: &Morphism, xi: &Morphism) -> Result<Morphism> {
        self.lift(a)?.compose(xi)
    }

    pub fn right(&self, xi: &Morphism, a: &Morphism) -> Result<Morphism> {
        xi.compose(a)
    }

    pub fn inner(&self, eta: &Morphism, xi: &Morphism) -> Result<Morphism> {
        eta.dagger().compose(xi)
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> Result<Morphism> {
        Morphism::random(&self.dom, &self.cod, rng)
    }

    /// Partial isometries localized at `site` with `Σ_j β_j β_j† = 1`.
    ///
    /// Each one factors as `v_s π_s`: project the site onto a summand `s` and
    /// split it back through an isometric vertex into `x ⊗ z`; the strand is
    /// then carried to its end by the half-braiding. The trivial sector uses
    /// the single unitor.
    pub fn localized_basis(&self, site: usize) -> Result<Vec<Morphism>> {
        let n = self.sites();
        if site >= n.max(1) {
            return Err(Error::Geometry(format!("site {site} outside {n} sites")));
        }
        let e = &self.engine;
        if self.trivial {
            let u = e.category().unit();
            let unitor = Morphism::from_fn(&self.dom, &self.cod, |i, j| {
                let (p, q) = (self.dom.path(j).labels(), self.cod.path(i).labels());
                match self.attach {
                    Attach::Right => q[..p.len()] == *p && q[p.len()..] == [u, p[p.len() - 1]],
                    Attach::Left => q[..3] == [u, u, u] && q[3..] == p[1..],
                }
                .then_some(ONE)
                .unwrap_or(ZERO)
            })?;
            return Ok(vec![unitor]);
        }
        if n == 0 {
            return Err(Error::Geometry("no site to localize at".to_string()));
        }
        let site_leg = self.dom.word().legs[site].clone();
        let strand = match (&self.functor, self.attach) {
            (Some(f), Attach::Right) => f.object(self.z),
            _ => self.z,
        };
        let cat = e.category();
        let mut out = Vec::new();
        match self.attach {
            Attach::Right => {
                let leg_dom = e.space(&Word::new(vec![site_leg.clone()]))?;
                let leg_cod = e.space(&Word::new(vec![site_leg.clone(), vec![strand]]))?;
                let functor = self.functor.as_ref().expect("half-braided bimodule has a functor");
                let tail = Word::new(vec![site_leg.clone(); n - site - 1]);
                let hb = e.half_braid_past(functor, self.z, &tail)?;
                for &xv in &site_leg {
                    for s in cat.channels(xv, strand) {
                        if !site_leg.contains(&s) {
                            return Err(Error::Invalid(format!("site object lacks the summand {} of x ⊗ z", cat.label(s))));
                        }
                        let u = cat.unit();
                        let b = Morphism::from_fn(&leg_dom, &leg_cod, |i, j| {
                            let (p, q) = (leg_dom.path(j).labels(), leg_cod.path(i).labels());
                            (p == [u, s, s] && q == [u, xv, xv, strand, s]).then_some(ONE).unwrap_or(ZERO)
                        })?;
                        let placed = e.embed(&b, &self.dom, site)?;
                        let moved = e.embed(&hb, placed.cod(), site + 1)?;
                        out.push(moved.compose(&placed)?);
                    }
                }
            }
            Attach::Left => {
                if site != 0 {
                    return Err(Error::Geometry("left multiplication localizes at the boundary site".to_string()));
                }
                let leg_dom = e.space(&Word::new(vec![site_leg.clone()]))?;
                let leg_cod = e.space(&Word::new(vec![vec![strand], site_leg.clone()]))?;
                let u = cat.unit();
                for &wv in &site_leg {
                    for s in cat.channels(strand, wv) {
                        if !site_leg.contains(&s) {
                            return Err(Error::Invalid(format!("boundary object lacks the summand {} of z ⊗ w", cat.label(s))));
                        }
                        let b = Morphism::from_fn(&leg_dom, &leg_cod, |i, j| {
                            let (p, q) = (leg_dom.path(j).labels(), leg_cod.path(i).labels());
                            (p == [u, s, s] && q == [u, strand, strand, wv, s]).then_some(ONE).unwrap_or(ZERO)
                        })?;
                        out.push(e.embed(&b, &self.dom, 0)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `max |Σ_j β_j β_j† − 1|`.
    pub fn partition_residual(&self, basis: &[Morphism]) -> Result<f64> {
        let mut acc = Morphism::zero(&self.cod, &self.cod)?;
        for b in basis {
            acc = acc.add(&b.compose(&b.dagger())?)?;
        }
        acc.distance(&Morphism::identity(&self.cod))
    }

    /// Matrix units of single sites and adjacent pairs outside `sites`.
    pub fn complement_generators(&self, sites: Range<usize>) -> Result<Vec<Morphism>> {
        let e = &self.engine;
        let w = self.dom.word();
        let n = w.len();
        let outside = |k: usize| !sites.contains(&k);
        let mut out = Vec::new();
        for k in 0..n {
            if !outside(k) {
                continue;
            }
            let mut spans = vec![k..k + 1];
            if k + 1 < n && outside(k + 1) {
                spans.push(k..k + 2);
            }
            for sp in spans {
                let loc = e.space(&w.slice(sp.clone()))?;
                for u in e.matrix_units(&loc, &loc)? {
                    out.push(e.embed(&u, &self.dom, sp.start)?);
                }
            }
        }
        Ok(out)
    }

    /// `max |lift(a) β − β a|` over complement generators of `sites`.
    pub fn localization_residual(&self, basis: &[Morphism], sites: Range<usize>) -> Result<f64> {
        let gens = self.complement_generators(sites)?;
        let mut worst: f64 = 0.0;
        for g in &gens {
            let lg = self.lift(g)?;
            for b in basis {
                worst = worst.max(lg.compose(b)?.distance(&b.compose(g)?)?);
            }
        }
        Ok(worst)
    }

    /// Distance of every inner product `⟨β_i|β_j⟩` from the algebra of `sites`.
    pub fn inner_product_residual(&self, basis: &[Morphism], sites: Range<usize>) -> Result<f64> {
        let e = &self.engine;
        let w = self.dom.word();
        let loc = e.space(&w.slice(sites.clone()))?;
        let units: Vec<Morphism> =
            e.matrix_units(&loc, &loc)?.iter().map(|u| e.embed(u, &self.dom, sites.start)).collect::<Result<_>>()?;
        let vecs: Vec<Vec<C64>> = units.iter().map(|u| u.vectorize()).collect();
        let k = vecs.len();
        let gram = CMat::from_fn(k, k, |i, j| vecs[i].iter().zip(&vecs[j]).map(|(p, q)| p.conj() * q).sum());
        let (vals, v) = eigh(&gram);
        let mut worst: f64 = 0.0;
        for bi in basis {
            for bj in basis {
                let ip = self.inner(bi, bj)?.vectorize();
                let rhs: Vec<C64> = vecs.iter().map(|u| u.iter().zip(&ip).map(|(p, q)| p.conj() * q).sum()).collect();
                // least squares through the pseudo-inverse of the Gram matrix
                let mut coef = vec![ZERO; k];
                for (m, &lam) in vals.iter().enumerate() {
                    if lam <= 1e-12 {
                        continue;
                    }
                    let proj: C64 = (0..k).map(|i| v[(i, m)].conj() * rhs[i]).sum::<C64>() / re(lam);
                    for (i, cf) in coef.iter_mut().enumerate() {
                        *cf += v[(i, m)] * proj;
                    }
                }
                let mut fit = vec![ZERO; ip.len()];
                for (cf, u) in coef.iter().zip(&vecs) {
                    for (f, q) in fit.iter_mut().zip(u) {
                        *f += cf * q;
                    }
                }
                worst = worst.max(fit.iter().zip(&ip).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max));
            }
        }
        Ok(worst)
    }

    /// Bimodule laws and the projective basis property on random elements.
    pub fn report<R: Rng>(&self, site: usize, tol: f64, rng: &mut R) -> Result<Report> {
        let mut rep = Report::new("dhr_truncation", tol);
        let xi = self.random(rng)?;
        let a = Morphism::random(&self.dom, &self.dom, rng)?;
        let b = Morphism::random(&self.dom, &self.dom, rng)?;
        let lhs = self.left(&a, &self.right(&xi, &b)?)?;
        let rhs = self.right(&self.left(&a, &xi)?, &b)?;
        rep.push(Item::residual("bimodule", lhs.distance(&rhs)?, tol));
        let ab = a.compose(&b)?;
        let hom = self.lift(&ab)?.distance(&self.lift(&a)?.compose(&self.lift(&b)?)?)?;
        rep.push(Item::residual("left_action_multiplicative", hom, tol));
        let basis = self.localized_basis(site)?;
        rep.push(Item::check("basis_nonempty", !basis.is_empty()).with_actual(Quantity::Int(basis.len() as i64)));
        rep.push(Item::residual("partition_of_unity", self.partition_residual(&basis)?, tol));
        let expand = basis.iter().try_fold(Morphism::zero(&self.dom, &self.cod)?, |acc, bj| {
            acc.add(&bj.compose(&self.inner(bj, &xi)?)?)
        })?;
        rep.push(Item::residual("basis_expansion", expand.distance(&xi)?, tol));
        if !self.trivial {
            let sites = site..site + 1;
            rep.push(Item::residual("localization", self.localization_residual(&basis, sites.clone())?, tol));
            rep.push(Item::residual("inner_products_local", self.inner_product_residual(&basis, sites)?, tol));
        }
        Ok(rep)
    }
}
