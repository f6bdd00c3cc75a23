//! Fusion-tree calculus for hom-spaces between tensor words.
//!
//! A word is a sequence of legs, each leg a formal sum of simples, optionally
//! preceded by a module start `W = ⊕ m`. Basis vectors of a word are fusion
//! paths `(h_0, x_1, h_1, …, x_n, h_n)` with `h_0` the unit (or a module
//! simple), `x_k` a summand of leg `k` and `h_k ∈ h_{k-1} ⊗ x_k`; each path is
//! a left-associated splitting tree with isometric trivalent vertices.
//!
//! A morphism between two words is block diagonal over the shared root `h_n`.
//! With isometric vertices the tree bases are orthonormal for the trace form
//! `tr(f†g)`, F-moves are unitary and the dagger is the conjugate transpose.

mod ladder;

pub use ladder::{Ladder, LadderMorphism, LadderObject, LadderTerm};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

#[allow(unused_imports)] // float methods for no_std builds
use num_traits::Float;
use rand::Rng;

use crate::category::{CentralFunctor, FusionCategory, ModuleCategory};
use crate::error::{Error, Result};
use crate::linalg::{CMat, SpMat, C64, ONE, ZERO};

/// Left end of a word: the tensor unit or a module object `⊕ m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Start {
    Unit,
    Module(Vec<usize>),
}

/// Tensor word `start ◁ X_1 ⊗ … ⊗ X_n` with each `X_k` a formal sum of simples.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word {
    pub start: Start,
    pub legs: Vec<Vec<usize>>,
}

fn normalized(mut leg: Vec<usize>) -> Vec<usize> {
    leg.sort_unstable();
    leg.dedup();
    leg
}

impl Word {
    pub fn new(legs: Vec<Vec<usize>>) -> Self {
        Self { start: Start::Unit, legs: legs.into_iter().map(normalized).collect() }
    }

    pub fn empty() -> Self {
        Self::new(Vec::new())
    }

    /// Word of single simples.
    pub fn simple(labels: &[usize]) -> Self {
        Self::new(labels.iter().map(|&a| vec![a]).collect())
    }

    /// `X^{⊗n}`.
    pub fn power(x: &[usize], n: usize) -> Self {
        Self::new(vec![x.to_vec(); n])
    }

    /// `W ◁ legs` for a module object `W = ⊕ start`.
    pub fn module(start: Vec<usize>, legs: Vec<Vec<usize>>) -> Self {
        Self { start: Start::Module(normalized(start)), legs: legs.into_iter().map(normalized).collect() }
    }

    pub fn len(&self) -> usize {
        self.legs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn is_module(&self) -> bool {
        matches!(self.start, Start::Module(_))
    }

    /// Append the legs of a unit-start word.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if other.is_module() {
            return Err(Error::Shape("cannot append a module word".to_string()));
        }
        let mut out = self.clone();
        out.legs.extend(other.legs.iter().cloned());
        Ok(out)
    }

    /// Unit-start word made of the legs in `range`.
    pub fn slice(&self, range: Range<usize>) -> Word {
        Word { start: Start::Unit, legs: self.legs[range].to_vec() }
    }

    /// Replace the legs in `range` by the legs of `mid`.
    pub fn replace(&self, range: Range<usize>, mid: &Word) -> Word {
        let mut legs = self.legs[..range.start].to_vec();
        legs.extend(mid.legs.iter().cloned());
        legs.extend(self.legs[range.end..].iter().cloned());
        Word { start: self.start.clone(), legs }
    }

    /// Swap legs `i` and `i+1`.
    pub fn swapped(&self, i: usize) -> Word {
        let mut out = self.clone();
        out.legs.swap(i, i + 1);
        out
    }
}

/// A basis path `[h_0, x_1, h_1, …, x_n, h_n]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path(Vec<usize>);

impl Path {
    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    /// Number of legs.
    pub fn len(&self) -> usize {
        self.0.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 1
    }

    /// Label of leg `k` (0-based).
    pub fn leaf(&self, k: usize) -> usize {
        self.0[2 * k + 1]
    }

    /// Partial fusion label after `k` legs; `partial(0)` is the start.
    pub fn partial(&self, k: usize) -> usize {
        self.0[2 * k]
    }

    pub fn root(&self) -> usize {
        *self.0.last().expect("path is never empty")
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).map(|k| self.leaf(k)).collect()
    }
}

/// Left-associated splitting tree: root, leaves and internal edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FusionTree {
    pub start: usize,
    pub root: usize,
    pub leaves: Vec<usize>,
    pub internal: Vec<usize>,
}

impl From<&Path> for FusionTree {
    fn from(p: &Path) -> Self {
        let n = p.len();
        let internal = if n >= 2 { (2..n).map(|k| p.partial(k)).collect() } else { Vec::new() };
        Self { start: p.partial(0), root: p.root(), leaves: p.leaves(), internal }
    }
}

/// All basis paths of a word, grouped by root.
#[derive(Clone, Debug)]
pub struct PathSpace {
    word: Word,
    paths: Vec<Path>,
    ranges: Vec<Range<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl PathSpace {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &Path {
        &self.paths[i]
    }

    /// Number of possible root labels.
    pub fn root_count(&self) -> usize {
        self.ranges.len()
    }

    /// Global indices of paths with root `r`.
    pub fn range(&self, r: usize) -> Range<usize> {
        self.ranges[r].clone()
    }

    pub fn count(&self, r: usize) -> usize {
        self.ranges[r].len()
    }

    pub fn index_of(&self, labels: &[usize]) -> Option<usize> {
        self.index.get(labels).copied()
    }

    /// `(root, offset within the root block)` of a global index.
    pub fn locate(&self, i: usize) -> (usize, usize) {
        let r = self.paths[i].root();
        (r, i - self.ranges[r].start)
    }
}

/// Dense morphism, block diagonal over roots.
#[derive(Clone, Debug)]
pub struct Morphism {
    dom: Arc<PathSpace>,
    cod: Arc<PathSpace>,
    blocks: Vec<CMat>,
}

fn same_space(a: &PathSpace, b: &PathSpace) -> bool {
    a.word == b.word
}

impl Morphism {
    pub fn zero(dom: &Arc<PathSpace>, cod: &Arc<PathSpace>) -> Result<Self> {
        if dom.root_count() != cod.root_count() {
            return Err(Error::Shape("domain and codomain have different root types".to_string()));
        }
        let blocks = (0..dom.root_count()).map(|r| CMat::zeros(cod.count(r), dom.count(r))).collect();
        Ok(Self { dom: dom.clone(), cod: cod.clone(), blocks })
    }

    pub fn identity(space: &Arc<PathSpace>) -> Self {
        let blocks = (0..space.root_count()).map(|r| CMat::identity(space.count(r))).collect();
        Self { dom: space.clone(), cod: space.clone(), blocks }
    }

    /// Entries from a function of global indices; cross-root entries are ignored.
    pub fn from_fn(dom: &Arc<PathSpace>, cod: &Arc<PathSpace>, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut out = Self::zero(dom, cod)?;
        for r in 0..dom.root_count() {
            let (rr, cr) = (cod.range(r), dom.range(r));
            out.blocks[r] = CMat::from_fn(rr.len(), cr.len(), |i, j| f(rr.start + i, cr.start + j));
        }
        Ok(out)
    }

    /// Gaussian random morphism.
    pub fn random<R: Rng>(dom: &Arc<PathSpace>, cod: &Arc<PathSpace>, rng: &mut R) -> Result<Self> {
        let mut out = Self::zero(dom, cod)?;
        for r in 0..dom.root_count() {
            out.blocks[r] = CMat::random(cod.count(r), dom.count(r), rng);
        }
        Ok(out)
    }

    /// From a dense matrix over global indices; fails on cross-root entries.
    pub fn from_dense(dom: &Arc<PathSpace>, cod: &Arc<PathSpace>, m: &CMat, tol: f64) -> Result<Self> {
        if m.rows() != cod.len() || m.cols() != dom.len() {
            return Err(Error::Shape(format!("{}x{} matrix for a {}x{} hom-space", m.rows(), m.cols(), cod.len(), dom.len())));
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if cod.path(i).root() != dom.path(j).root() && m[(i, j)].norm() > tol {
                    return Err(Error::Shape("matrix mixes different roots".to_string()));
                }
            }
        }
        Self::from_fn(dom, cod, |i, j| m[(i, j)])
    }

    /// Dense matrix over global indices.
    pub fn to_dense(&self) -> CMat {
        let mut out = CMat::zeros(self.cod.len(), self.dom.len());
        for (r, b) in self.blocks.iter().enumerate() {
            let (rr, cr) = (self.cod.range(r), self.dom.range(r));
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    out[(rr.start + i, cr.start + j)] = b[(i, j)];
                }
            }
        }
        out
    }

    /// Sparse matrix over global indices, dropping entries with modulus `<= tol`.
    pub fn to_sparse(&self, tol: f64) -> SpMat {
        let mut trips = Vec::new();
        for (r, b) in self.blocks.iter().enumerate() {
            let (rr, cr) = (self.cod.range(r), self.dom.range(r));
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    if b[(i, j)].norm() > tol {
                        trips.push((rr.start + i, cr.start + j, b[(i, j)]));
                    }
                }
            }
        }
        SpMat::from_triplets(self.cod.len(), self.dom.len(), trips)
    }

    /// Concatenated block entries, row-major per root.
    pub fn vectorize(&self) -> Vec<C64> {
        self.blocks.iter().flat_map(|b| b.data().iter().copied()).collect()
    }

    /// Inverse of [`Morphism::vectorize`].
    pub fn from_vec(dom: &Arc<PathSpace>, cod: &Arc<PathSpace>, v: &[C64]) -> Result<Self> {
        let mut out = Self::zero(dom, cod)?;
        let total: usize = out.blocks.iter().map(|b| b.rows() * b.cols()).sum();
        if v.len() != total {
            return Err(Error::Shape(format!("expected {total} coefficients, got {}", v.len())));
        }
        let mut off = 0;
        for b in &mut out.blocks {
            let n = b.rows() * b.cols();
            b.data_mut().copy_from_slice(&v[off..off + n]);
            off += n;
        }
        Ok(out)
    }

    pub fn dom(&self) -> &Arc<PathSpace> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<PathSpace> {
        &self.cod
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, r: usize) -> &CMat {
        &self.blocks[r]
    }

    pub fn block_mut(&mut self, r: usize) -> &mut CMat {
        &mut self.blocks[r]
    }

    /// Entry between global indices.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        let (ri, li) = self.cod.locate(i);
        let (rj, lj) = self.dom.locate(j);
        if ri == rj {
            self.blocks[ri][(li, lj)]
        } else {
            ZERO
        }
    }

    pub fn is_endo(&self) -> bool {
        same_space(&self.dom, &self.cod)
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &Morphism) -> Result<Morphism> {
        if !same_space(&f.cod, &self.dom) {
            return Err(Error::Shape("codomain of the right factor differs from the domain of the left factor".to_string()));
        }
        let blocks = self.blocks.iter().zip(&f.blocks).map(|(g, f)| g * f).collect();
        Ok(Morphism { dom: f.dom.clone(), cod: self.cod.clone(), blocks })
    }

    pub fn dagger(&self) -> Morphism {
        Morphism { dom: self.cod.clone(), cod: self.dom.clone(), blocks: self.blocks.iter().map(CMat::adjoint).collect() }
    }

    fn check_parallel(&self, other: &Morphism) -> Result<()> {
        if same_space(&self.dom, &other.dom) && same_space(&self.cod, &other.cod) {
            Ok(())
        } else {
            Err(Error::Shape("morphisms are not parallel".to_string()))
        }
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.check_parallel(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect();
        Ok(Morphism { dom: self.dom.clone(), cod: self.cod.clone(), blocks })
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.check_parallel(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect();
        Ok(Morphism { dom: self.dom.clone(), cod: self.cod.clone(), blocks })
    }

    pub fn scale(&self, s: C64) -> Morphism {
        Morphism { dom: self.dom.clone(), cod: self.cod.clone(), blocks: self.blocks.iter().map(|b| b.scale(s)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(CMat::max_abs).fold(0.0, f64::max)
    }

    /// Largest entrywise difference.
    pub fn distance(&self, other: &Morphism) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Blockwise matrix trace `Σ_r tr(B_r)` without dimension weights.
    pub fn matrix_trace(&self) -> C64 {
        self.blocks.iter().map(CMat::trace).sum()
    }
}

type DecompKey = (usize, Vec<usize>);

/// Morphism engine over a fusion category and an optional right module category.
#[derive(Clone, Debug)]
pub struct Engine {
    cat: FusionCategory,
    module: Option<ModuleCategory>,
}

impl Engine {
    pub fn new(cat: &FusionCategory) -> Self {
        Self { cat: cat.clone(), module: None }
    }

    pub fn with_module(cat: &FusionCategory, module: &ModuleCategory) -> Self {
        Self { cat: cat.clone(), module: Some(module.clone()) }
    }

    pub fn category(&self) -> &FusionCategory {
        &self.cat
    }

    pub fn module(&self) -> Option<&ModuleCategory> {
        self.module.as_ref()
    }

    fn module_ref(&self) -> Result<&ModuleCategory> {
        self.module.as_ref().ok_or_else(|| Error::Shape("module word without module data".to_string()))
    }

    /// Fusion channels of `h ⊗ x` (or `h ◁ x` in module mode).
    fn channels(&self, module_mode: bool, h: usize, x: usize) -> Vec<usize> {
        match (module_mode, &self.module) {
            (true, Some(m)) => m.channels(h, x).collect(),
            _ => self.cat.channels(h, x).collect(),
        }
    }

    fn adm(&self, module_mode: bool, s: usize, g: usize, h: usize) -> bool {
        match (module_mode, &self.module) {
            (true, Some(m)) => m.acts(s, g, h),
            _ => self.cat.adm(s, g, h),
        }
    }

    /// `F^{s g y}_{h}[e, f]` or the mixed associator in module mode.
    fn assoc(&self, module_mode: bool, s: usize, g: usize, y: usize, h: usize, e: usize, f: usize) -> C64 {
        match (module_mode, &self.module) {
            (true, Some(m)) => m.l(s, g, y, h, e, f),
            _ => self.cat.f(s, g, y, h, e, f),
        }
    }

    /// Dimension of a root or start label.
    pub fn label_dim(&self, module_mode: bool, r: usize) -> f64 {
        match (module_mode, &self.module) {
            (true, Some(m)) => m.dim(r),
            _ => self.cat.dim(r),
        }
    }

    /// Enumerate the basis paths of a word.
    pub fn space(&self, word: &Word) -> Result<Arc<PathSpace>> {
        let n = self.cat.rank();
        for leg in &word.legs {
            if leg.is_empty() {
                return Err(Error::Shape("empty leg".to_string()));
            }
            if let Some(&x) = leg.iter().find(|&&x| x >= n) {
                return Err(Error::UnknownLabel(format!("simple #{x}")));
            }
        }
        let (module_mode, starts, roots) = match &word.start {
            Start::Unit => (false, vec![self.cat.unit()], n),
            Start::Module(ms) => {
                let m = self.module_ref()?;
                if let Some(&x) = ms.iter().find(|&&x| x >= m.rank()) {
                    return Err(Error::UnknownLabel(format!("module simple #{x}")));
                }
                if ms.is_empty() {
                    return Err(Error::Shape("empty module start".to_string()));
                }
                (true, ms.clone(), m.rank())
            }
        };
        let mut paths: Vec<Path> = starts.iter().map(|&s| Path(vec![s])).collect();
        for leg in &word.legs {
            let mut next = Vec::new();
            for p in &paths {
                let h = p.root();
                for &x in leg {
                    for h2 in self.channels(module_mode, h, x) {
                        let mut labels = p.0.clone();
                        labels.push(x);
                        labels.push(h2);
                        next.push(Path(labels));
                    }
                }
            }
            paths = next;
        }
        paths.sort_by(|a, b| (a.root(), &a.0).cmp(&(b.root(), &b.0)));
        let mut ranges = vec![0..0; roots];
        let mut i = 0;
        for (r, range) in ranges.iter_mut().enumerate() {
            let s = i;
            while i < paths.len() && paths[i].root() == r {
                i += 1;
            }
            *range = s..i;
        }
        let index = paths.iter().enumerate().map(|(i, p)| (p.0.clone(), i)).collect();
        Ok(Arc::new(PathSpace { word: word.clone(), paths, ranges, index }))
    }

    /// `Σ_r #paths(a, r) · #paths(b, r)`.
    pub fn hom_dim(&self, a: &Word, b: &Word) -> Result<usize> {
        if a.is_module() != b.is_module() {
            return Err(Error::Shape("mixed module and category words".to_string()));
        }
        let (sa, sb) = (self.space(a)?, self.space(b)?);
        Ok((0..sa.root_count()).map(|r| sa.count(r) * sb.count(r)).sum())
    }

    /// Splitting trees of `word` with the given root, in lexicographic order.
    pub fn tree_basis(&self, word: &Word, root: usize) -> Result<Vec<FusionTree>> {
        let s = self.space(word)?;
        if root >= s.root_count() {
            return Err(Error::UnknownLabel(format!("root #{root}")));
        }
        Ok(s.range(root).map(|i| FusionTree::from(s.path(i))).collect())
    }

    /// Expand `((s ⊗ y_1)_{h_1} ⊗ … ⊗ y_l)_{h_l}` in the basis `s ⊗ (y_1 ⊗ … ⊗ y_l)_g`.
    ///
    /// Returns the internal labels `g_1 … g_l` of the middle tree with amplitudes.
    fn decompose(&self, module_mode: bool, ys: &[usize], hs: &[usize]) -> Vec<(Vec<usize>, C64)> {
        let l = ys.len();
        if l == 0 {
            return vec![(Vec::new(), ONE)];
        }
        let s = hs[0];
        let mut states = vec![(vec![ys[0]], ONE)];
        for k in 1..l {
            let mut next = Vec::new();
            for (gs, amp) in &states {
                let g = *gs.last().expect("nonempty");
                for gk in self.cat.channels(g, ys[k]) {
                    if !self.adm(module_mode, s, gk, hs[k + 1]) {
                        continue;
                    }
                    let v = self.assoc(module_mode, s, g, ys[k], hs[k + 1], hs[k], gk);
                    if v == ZERO {
                        continue;
                    }
                    let mut gs2 = gs.clone();
                    gs2.push(gk);
                    next.push((gs2, amp * v));
                }
            }
            states = next;
        }
        states
    }

    /// Partial labels `h_1 … h_l` (with `h_0 = s`, `h_l = end`) and amplitudes
    /// `⟨path | s ⊗ middle⟩` for a middle tree with leaves `ys` and internals `gs`.
    fn recompose(&self, module_mode: bool, s: usize, end: usize, ys: &[usize], gs: &[usize]) -> Vec<(Vec<usize>, C64)> {
        let l = ys.len();
        if l == 0 {
            return if s == end { vec![(Vec::new(), ONE)] } else { Vec::new() };
        }
        let mut states: Vec<(Vec<usize>, C64)> = self.channels(module_mode, s, ys[0]).into_iter().map(|h| (vec![h], ONE)).collect();
        for k in 1..l {
            let mut next = Vec::new();
            for (hs, amp) in &states {
                let hprev = *hs.last().expect("nonempty");
                for hk in self.channels(module_mode, hprev, ys[k]) {
                    if !self.adm(module_mode, s, gs[k], hk) {
                        continue;
                    }
                    let v = self.assoc(module_mode, s, gs[k - 1], ys[k], hk, hprev, gs[k]);
                    if v == ZERO {
                        continue;
                    }
                    let mut hs2 = hs.clone();
                    hs2.push(hk);
                    next.push((hs2, amp * v.conj()));
                }
            }
            states = next;
        }
        states.retain(|(hs, _)| *hs.last().expect("nonempty") == end);
        states
    }

    /// `id_prefix ⊗ h ⊗ id_suffix`, where `h` acts on legs `pos..pos+len(h.dom)` of `dom`.
    pub fn embed(&self, h: &Morphism, dom: &Arc<PathSpace>, pos: usize) -> Result<Morphism> {
        let hw = h.dom.word();
        if hw.is_module() || h.cod.word().is_module() {
            if pos != 0 {
                return Err(Error::Shape("a module morphism can only act at the left end".to_string()));
            }
            return self.extend_right(h, dom);
        }
        let l = hw.len();
        let word = dom.word();
        if pos + l > word.len() || word.legs[pos..pos + l] != hw.legs[..] {
            return Err(Error::Shape(format!("legs {pos}..{} do not match the morphism domain", pos + l)));
        }
        let module_mode = word.is_module();
        let cod_word = word.replace(pos..pos + l, h.cod.word());
        let cod = self.space(&cod_word)?;
        let unit = self.cat.unit();
        let mut out = Morphism::zero(dom, &cod)?;
        let mut decomp_memo: BTreeMap<DecompKey, Vec<(usize, C64)>> = BTreeMap::new();
        let mut recomp_memo: BTreeMap<(usize, usize, usize), Vec<(Vec<usize>, C64)>> = BTreeMap::new();
        let mut key = Vec::new();
        for j in 0..dom.len() {
            let p = dom.path(j).labels();
            let s = p[2 * pos];
            let end = p[2 * (pos + l)];
            let mid_key = (s, p[2 * pos..=2 * (pos + l)].to_vec());
            let parts = decomp_memo.entry(mid_key).or_insert_with(|| {
                let ys: Vec<usize> = (0..l).map(|k| p[2 * (pos + k) + 1]).collect();
                let hs: Vec<usize> = (0..=l).map(|k| p[2 * (pos + k)]).collect();
                self.decompose(module_mode, &ys, &hs)
                    .into_iter()
                    .filter_map(|(gs, amp)| {
                        let mut labels = vec![unit];
                        for k in 0..l {
                            labels.push(ys[k]);
                            labels.push(gs[k]);
                        }
                        h.dom.index_of(&labels).map(|i| (i, amp))
                    })
                    .collect()
            });
            let (root, col) = dom.locate(j);
            for &(mid, amp) in parts.iter() {
                let (g, mcol) = h.dom.locate(mid);
                let hb = &h.blocks[g];
                let qr = h.cod.range(g);
                for qi in 0..hb.rows() {
                    let v = hb[(qi, mcol)];
                    if v == ZERO {
                        continue;
                    }
                    let q = qr.start + qi;
                    let recs = recomp_memo.entry((s, end, q)).or_insert_with(|| {
                        let qp = h.cod.path(q);
                        let ys: Vec<usize> = qp.leaves();
                        let gs: Vec<usize> = (1..=qp.len()).map(|k| qp.partial(k)).collect();
                        self.recompose(module_mode, s, end, &ys, &gs)
                    });
                    let qp = h.cod.path(q);
                    for (hs, amp2) in recs.iter() {
                        key.clear();
                        key.extend_from_slice(&p[..=2 * pos]);
                        for (k, &hk) in hs.iter().enumerate() {
                            key.push(qp.leaf(k));
                            key.push(hk);
                        }
                        key.extend_from_slice(&p[2 * (pos + l) + 1..]);
                        let i = cod.index_of(&key).ok_or_else(|| Error::Shape("recomposed path missing".to_string()))?;
                        let (r2, row) = cod.locate(i);
                        debug_assert_eq!(r2, root);
                        out.blocks[root][(row, col)] += amp * v * amp2;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `f ⊗ id` on the legs of `dom` beyond those of `f`.
    pub fn extend_right(&self, f: &Morphism, dom: &Arc<PathSpace>) -> Result<Morphism> {
        let fw = f.dom.word();
        let l = fw.len();
        let word = dom.word();
        if word.start != fw.start || word.len() < l || word.legs[..l] != fw.legs[..] {
            return Err(Error::Shape("domain does not extend the morphism domain".to_string()));
        }
        let tail = word.slice(l..word.len());
        let mut cod_word = f.cod.word().clone();
        cod_word.legs.extend(tail.legs.iter().cloned());
        let cod = self.space(&cod_word)?;
        let mut out = Morphism::zero(dom, &cod)?;
        let lc = f.cod.word().len();
        let mut key = Vec::new();
        for j in 0..dom.len() {
            let p = dom.path(j).labels();
            let head = &p[..=2 * l];
            let mid = f.dom.index_of(head).ok_or_else(|| Error::Shape("head path missing".to_string()))?;
            let (g, mcol) = f.dom.locate(mid);
            let (root, col) = dom.locate(j);
            let fb = &f.blocks[g];
            let qr = f.cod.range(g);
            for qi in 0..fb.rows() {
                let v = fb[(qi, mcol)];
                if v == ZERO {
                    continue;
                }
                key.clear();
                key.extend_from_slice(f.cod.path(qr.start + qi).labels());
                key.extend_from_slice(&p[2 * l + 1..]);
                debug_assert_eq!(key.len(), 2 * (lc + tail.len()) + 1);
                let i = cod.index_of(&key).ok_or_else(|| Error::Shape("extended path missing".to_string()))?;
                let row = cod.locate(i).1;
                out.blocks[root][(row, col)] += v;
            }
        }
        Ok(out)
    }

    /// `f ⊗ g`.
    pub fn tensor(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        let a = f.dom.word();
        let dom = self.space(&a.concat(g.dom.word())?)?;
        let right = self.embed(g, &dom, a.len())?;
        let left = self.extend_right(f, right.cod())?;
        left.compose(&right)
    }

    pub fn identity(&self, word: &Word) -> Result<Morphism> {
        Ok(Morphism::identity(&self.space(word)?))
    }

    /// Elementary crossing on two legs: `x ⊗ y → y ⊗ x`.
    ///
    /// Over: `|x,y;f⟩ ↦ R^{xy}_f |y,x;f⟩`. Under is the inverse of the over
    /// crossing of the swapped legs.
    pub fn crossing(&self, left: &[usize], right: &[usize], over: bool) -> Result<Morphism> {
        if !self.cat.is_braided() {
            return Err(Error::InadmissibleMove("braiding requested in an unbraided category".to_string()));
        }
        let dom = self.space(&Word::new(vec![left.to_vec(), right.to_vec()]))?;
        let cod = self.space(&Word::new(vec![right.to_vec(), left.to_vec()]))?;
        let u = self.cat.unit();
        Morphism::from_fn(&dom, &cod, |i, j| {
            let (p, q) = (dom.path(j), cod.path(i));
            let (x, y, f) = (p.leaf(0), p.leaf(1), p.root());
            if q.labels() != [u, y, y, x, f] {
                return ZERO;
            }
            if over {
                self.cat.r(x, y, f)
            } else {
                self.cat.r(y, x, f).inv()
            }
        })
    }

    /// Crossing of legs `i` and `i+1`; `over` means leg `i` passes over leg `i+1`.
    pub fn braid(&self, space: &Arc<PathSpace>, i: usize, over: bool) -> Result<Morphism> {
        let w = space.word();
        if i + 1 >= w.len() {
            return Err(Error::InadmissibleMove(format!("crossing at position {i} on {} legs", w.len())));
        }
        let c = self.crossing(&w.legs[i], &w.legs[i + 1], over)?;
        self.embed(&c, space, i)
    }

    /// Product of crossings, applied left to right.
    pub fn braid_word(&self, space: &Arc<PathSpace>, gens: &[(usize, bool)]) -> Result<Morphism> {
        let mut acc = Morphism::identity(space);
        for &(i, over) in gens {
            let b = self.braid(acc.cod(), i, over)?;
            acc = b.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Isometric splitting vertex `c → a ⊗ b`.
    pub fn vertex(&self, a: usize, b: usize, c: usize) -> Result<Morphism> {
        if !self.cat.adm(a, b, c) {
            return Err(Error::InadmissibleMove(format!("no vertex {c} → {a}⊗{b}")));
        }
        let dom = self.space(&Word::simple(&[c]))?;
        let cod = self.space(&Word::simple(&[a, b]))?;
        let u = self.cat.unit();
        Morphism::from_fn(&dom, &cod, |i, _| if cod.path(i).labels() == [u, a, a, b, c] { ONE } else { ZERO })
    }

    /// Isometric cup `1 → a ⊗ ā`.
    pub fn cup(&self, a: usize) -> Result<Morphism> {
        let ad = self.cat.dual(a);
        let dom = self.space(&Word::empty())?;
        let cod = self.space(&Word::simple(&[a, ad]))?;
        Morphism::from_fn(&dom, &cod, |_, _| ONE)
    }

    /// Isometric cap `ā ⊗ a → 1`, phased so that the snake identities hold.
    pub fn cap(&self, a: usize) -> Result<Morphism> {
        let ad = self.cat.dual(a);
        let dom = self.space(&Word::simple(&[ad, a]))?;
        let cod = self.space(&Word::empty())?;
        let phase = self.cat.fs_phase(a).conj();
        Morphism::from_fn(&dom, &cod, |_, _| phase)
    }

    /// Coevaluation `1 → a ⊗ ā` with loop value `d_a`.
    pub fn coev(&self, a: usize) -> Result<Morphism> {
        Ok(self.cup(a)?.scale(C64::new(self.cat.dim(a).sqrt(), 0.0)))
    }

    /// Evaluation `ā ⊗ a → 1`.
    pub fn ev(&self, a: usize) -> Result<Morphism> {
        Ok(self.cap(a)?.scale(C64::new(self.cat.dim(a).sqrt(), 0.0)))
    }

    /// Categorical trace `Σ_r d_r tr(B_r)`.
    pub fn trace(&self, f: &Morphism) -> Result<C64> {
        if !f.is_endo() {
            return Err(Error::Shape("trace of a non-endomorphism".to_string()));
        }
        let mm = f.dom.word().is_module();
        Ok(f.blocks.iter().enumerate().map(|(r, b)| b.trace() * self.label_dim(mm, r)).sum())
    }

    /// Product of boundary dimensions of a path, including the module start.
    pub fn path_weight(&self, space: &PathSpace, i: usize) -> f64 {
        let p = space.path(i);
        let mm = space.word().is_module();
        let legs: f64 = (0..p.len()).map(|k| self.cat.dim(p.leaf(k))).product();
        if mm {
            legs * self.label_dim(true, p.partial(0))
        } else {
            legs
        }
    }

    /// Skein inner product `⟨f|g⟩`, the trace form weighted by `(D(P')D(P))^{-1/2}`.
    pub fn skein_inner(&self, f: &Morphism, g: &Morphism) -> Result<C64> {
        f.check_parallel(g)?;
        let mm = f.dom.word().is_module();
        let mut acc = ZERO;
        for r in 0..f.blocks.len() {
            let (rr, cr) = (f.cod.range(r), f.dom.range(r));
            let dr = self.label_dim(mm, r);
            for i in 0..rr.len() {
                let wi = self.path_weight(&f.cod, rr.start + i);
                for j in 0..cr.len() {
                    let wj = self.path_weight(&f.dom, cr.start + j);
                    acc += f.blocks[r][(i, j)].conj() * g.blocks[r][(i, j)] * (dr / (wi * wj).sqrt());
                }
            }
        }
        Ok(acc)
    }

    /// Scale turning basis matrix unit `|i⟩⟨j|` into a skein-orthonormal vector.
    pub fn skein_scale(&self, f_dom: &PathSpace, f_cod: &PathSpace, i: usize, j: usize) -> f64 {
        let r = f_cod.path(i).root();
        let d = self.label_dim(f_cod.word().is_module(), r);
        (self.path_weight(f_cod, i) * self.path_weight(f_dom, j)).powf(0.25) / d.sqrt()
    }

    /// Gram matrix of the basis matrix units of `Hom(dom → cod)` under the skein form.
    pub fn skein_gram(&self, dom: &Arc<PathSpace>, cod: &Arc<PathSpace>) -> Result<CMat> {
        let units = self.matrix_units(dom, cod)?;
        let n = units.len();
        let mut g = CMat::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                g[(a, b)] = self.skein_inner(&units[a], &units[b])?;
            }
        }
        Ok(g)
    }

    /// Basis matrix units `|i⟩⟨j|` of `Hom(dom → cod)` for equal roots.
    pub fn matrix_units(&self, dom: &Arc<PathSpace>, cod: &Arc<PathSpace>) -> Result<Vec<Morphism>> {
        let mut out = Vec::new();
        for r in 0..dom.root_count() {
            for i in cod.range(r) {
                for j in dom.range(r) {
                    out.push(Morphism::from_fn(dom, cod, |a, b| if a == i && b == j { ONE } else { ZERO })?);
                }
            }
        }
        Ok(out)
    }

    /// Basis change from left-associated paths to paths where legs `i`, `i+1`
    /// are fused first: rows indexed by `(…, h_{i-1}, x_i, x_{i+1}, g, h_{i+1}, …)`
    /// in lexicographic order, columns by the path basis.
    pub fn f_move(&self, space: &Arc<PathSpace>, i: usize) -> Result<CMat> {
        let w = space.word();
        if i + 1 >= w.len() {
            return Err(Error::InadmissibleMove(format!("F-move at position {i} on {} legs", w.len())));
        }
        let mm = w.is_module();
        let mut rows: Vec<(Vec<usize>, usize, C64)> = Vec::new();
        for j in 0..space.len() {
            let p = space.path(j).labels();
            let (s, x, y, e, h) = (p[2 * i], p[2 * i + 1], p[2 * i + 3], p[2 * i + 2], p[2 * i + 4]);
            for g in self.cat.channels(x, y) {
                if !self.adm(mm, s, g, h) {
                    continue;
                }
                let mut key = p[..=2 * i].to_vec();
                key.extend_from_slice(&[x, y, g]);
                key.extend_from_slice(&p[2 * i + 4..]);
                rows.push((key, j, self.assoc(mm, s, x, y, h, e, g)));
            }
        }
        let mut keys: Vec<Vec<usize>> = rows.iter().map(|r| r.0.clone()).collect();
        keys.sort();
        keys.dedup();
        let mut m = CMat::zeros(keys.len(), space.len());
        for (key, j, v) in rows {
            let r = keys.binary_search(&key).expect("key present");
            m[(r, j)] += v;
        }
        Ok(m)
    }

    /// `Φ(a) ⊗ w → w ⊗ Φ(a)` through the half-braiding of a central functor into this category.
    pub fn half_braid_past(&self, functor: &CentralFunctor, a: usize, w: &Word) -> Result<Morphism> {
        let x = functor.object(a);
        let mut first = Word::simple(&[x]);
        first.legs.extend(w.legs.iter().cloned());
        let mut acc = Morphism::identity(&self.space(&first)?);
        for k in 0..w.len() {
            let dom = self.space(&Word::new(vec![vec![x], w.legs[k].clone()]))?;
            let cod = self.space(&Word::new(vec![w.legs[k].clone(), vec![x]]))?;
            let elem = Morphism::from_fn(&dom, &cod, |i, j| {
                let (p, q) = (dom.path(j), cod.path(i));
                let (y, f) = (p.leaf(1), p.root());
                if q.leaf(0) == y && q.root() == f {
                    functor.half_braiding(a, y, f)
                } else {
                    ZERO
                }
            })?;
            let step = self.embed(&elem, acc.cod(), k)?;
            acc = step.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Morphism inserting a unit leg at position `pos`.
    pub fn unit_insert(&self, space: &Arc<PathSpace>, pos: usize) -> Result<Morphism> {
        let u = self.cat.unit();
        let dom = self.space(&Word::empty())?;
        let cod = self.space(&Word::simple(&[u]))?;
        let e = Morphism::from_fn(&dom, &cod, |_, _| ONE)?;
        self.embed(&e, space, pos)
    }
}
