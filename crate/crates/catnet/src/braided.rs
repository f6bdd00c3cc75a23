//! Braided categorical nets on the square lattice.
//!
//! Every site of a region carries an object; the algebra of a finite region
//! is the endomorphism algebra of the tensor product of its site objects in a
//! linear order. The bulk order is row-major: ascending `y`, then ascending
//! `x`. Changing the order is implemented by a braid in which, at every
//! crossing, the strand of the site with the larger `(y, x)` key passes over.
//! All strands therefore live at fixed heights and the braid only depends on
//! the two orderings, which makes the transport unitaries a cocycle.
//!
//! An enriched net adds a boundary line: boundary sites carry objects of an
//! unbraided category `𝒳` and come first (ascending `x`), bulk sites carry
//! objects of a braided category `𝒜` pushed into `𝒳` by a central functor.
//! Bulk strands cross boundary strands by their half-braiding; two boundary
//! strands never cross.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // float methods for no_std builds
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{block_algebra, BlockAlgebra};
use crate::category::{CentralFunctor, FusionCategory};
use crate::error::{Error, Result};
use crate::homspace::{Engine, Morphism, PathSpace, Word};
use crate::linalg::{SpMat, C64, ZERO};
use crate::report::{Item, Quantity, Report};

/// Lattice site `(x, y)`.
pub type Site = (i32, i32);

fn key(s: Site) -> (i32, i32) {
    (s.1, s.0)
}

/// Finite set of lattice sites.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Region {
    sites: BTreeSet<(i32, i32)>,
}

impl Region {
    pub fn new(sites: impl IntoIterator<Item = Site>) -> Self {
        Self { sites: sites.into_iter().map(key).collect() }
    }

    /// `w × h` rectangle with lower-left corner `(x0, y0)`.
    pub fn rectangle(x0: i32, y0: i32, w: i32, h: i32) -> Self {
        Self::new((y0..y0 + h).flat_map(|y| (x0..x0 + w).map(move |x| (x, y))))
    }

    /// Sites in row-major order.
    pub fn sites(&self) -> Vec<Site> {
        self.sites.iter().map(|&(y, x)| (x, y)).collect()
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, s: Site) -> bool {
        self.sites.contains(&key(s))
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.sites.is_subset(&other.sites)
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.sites.is_disjoint(&other.sites)
    }

    pub fn difference(&self, other: &Region) -> Region {
        Region { sites: self.sites.difference(&other.sites).copied().collect() }
    }

    pub fn union(&self, other: &Region) -> Region {
        Region { sites: self.sites.union(&other.sites).copied().collect() }
    }
}

/// Row-major linear order of a region.
pub fn linearize_region(region: &Region) -> Vec<Site> {
    region.sites()
}

/// Adjacent transpositions taking `from` to `to`, by bubble sort.
///
/// Each step `(i, left_moves)` swaps positions `i` and `i+1`. In a bulk
/// region `left_moves` is true when the left strand passes over; in general it
/// says whether the crossing is the half-braiding of the left strand moving
/// right (true) or the inverse half-braiding of the right strand (false).
/// `boundary` marks sites whose strands may not cross each other.
pub fn crossing_sequence(from: &[Site], to: &[Site], boundary: impl Fn(Site) -> bool) -> Result<Vec<(usize, bool)>> {
    let distinct: BTreeSet<Site> = to.iter().copied().collect();
    if from.len() != to.len() || distinct.len() != to.len() || from.iter().any(|s| !distinct.contains(s)) {
        return Err(Error::Geometry("orderings are not permutations of the same sites".to_string()));
    }
    let pos = |s: Site| to.iter().position(|&t| t == s).expect("checked above");
    let mut rank: Vec<usize> = from.iter().map(|&s| pos(s)).collect();
    let mut cur = from.to_vec();
    let mut steps = Vec::new();
    let n = cur.len();
    for pass in 0..n {
        let mut swapped = false;
        for i in 0..n.saturating_sub(1 + pass) {
            let (a, b) = (cur[i], cur[i + 1]);
            if rank[i] > rank[i + 1] {
                let (ba, bb) = (boundary(a), boundary(b));
                if ba && bb {
                    return Err(Error::Geometry(format!("boundary sites {a:?} and {b:?} cannot cross")));
                }
                let left_moves = !ba && (bb || key(a) > key(b));
                steps.push((i, left_moves));
                cur.swap(i, i + 1);
                rank.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    Ok(steps)
}

/// Bulk crossing sequence between two orderings: larger `(y, x)` passes over.
pub fn braid_between_orderings(from: &[Site], to: &[Site]) -> Result<Vec<(usize, bool)>> {
    crossing_sequence(from, to, |_| false)
}

/// What sits on a site: an object of the boundary category or of the bulk category.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Content {
    Boundary(Vec<usize>),
    Bulk(Vec<usize>),
}

/// Row of a cone decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeRow {
    pub sector: usize,
    pub label: String,
    /// `dim Hom(x → X^{⊗Λ})`.
    pub inner: usize,
    /// `dim Hom(x̄ → X^{⊗(Δ∖Λ)})`.
    pub outer: usize,
}

/// Sector table of a region `Λ` inside `Δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeTable {
    pub rows: Vec<ConeRow>,
    /// `dim Hom(1 → X^{⊗Δ})`.
    pub vacuum_dim: usize,
}

impl ConeTable {
    pub fn product_sum(&self) -> usize {
        self.rows.iter().map(|r| r.inner * r.outer).sum()
    }

    /// Number of sectors present in `Λ`; the center dimension of its algebra.
    pub fn center_dim(&self) -> usize {
        self.rows.iter().filter(|r| r.inner > 0).count()
    }

    pub fn sectors(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| r.inner > 0).map(|r| r.sector).collect()
    }
}

/// `Hom(x → X^{⊗Λ})` with its orthonormal basis, `g†f = δ d_x^{-1} id_x`.
#[derive(Clone, Debug)]
pub struct SectorSpace {
    pub sector: usize,
    pub dim_x: f64,
    pub basis: Vec<Morphism>,
}

impl SectorSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `e_{fg} = d_x f g†`, indexed `f * dim + g`.
    pub fn matrix_units(&self) -> Result<Vec<Morphism>> {
        let mut out = Vec::with_capacity(self.dim() * self.dim());
        for f in &self.basis {
            for g in &self.basis {
                out.push(f.compose(&g.dagger())?.scale(C64::new(self.dim_x, 0.0)));
            }
        }
        Ok(out)
    }
}

/// Braided or boundary-enriched net.
#[derive(Clone, Debug)]
pub struct BraidedNet {
    engine: Engine,
    functor: CentralFunctor,
    bulk: Vec<usize>,
    overrides: BTreeMap<Site, Vec<usize>>,
    boundary: Option<(i32, Vec<usize>)>,
}

impl BraidedNet {
    /// Bulk net of a braided category with object `x` on every site.
    pub fn new(cat: &FusionCategory, x: &[usize]) -> Result<Self> {
        let functor = CentralFunctor::identity(cat)?;
        Self::build(functor, x, None)
    }

    /// Net over a central functor `𝒜 → Z(𝒳)`: bulk sites carry `a` (in `𝒜`),
    /// sites on the line `y = line` carry `x` (in `𝒳`).
    pub fn enriched(functor: &CentralFunctor, x: &[usize], a: &[usize], line: i32) -> Result<Self> {
        Self::build(functor.clone(), a, Some((line, normalized(x))))
    }

    fn build(functor: CentralFunctor, bulk: &[usize], boundary: Option<(i32, Vec<usize>)>) -> Result<Self> {
        let engine = Engine::new(functor.target());
        if let Some((_, x)) = &boundary {
            check_labels(x, functor.target().rank())?;
        }
        let net = Self { engine, functor, bulk: normalized(bulk), overrides: BTreeMap::new(), boundary };
        net.check_bulk_object(&net.bulk)?;
        Ok(net)
    }

    /// Replace the bulk object on one site.
    pub fn with_site_object(mut self, site: Site, a: &[usize]) -> Result<Self> {
        let a = normalized(a);
        self.check_bulk_object(&a)?;
        self.overrides.insert(site, a);
        Ok(self)
    }

    fn check_bulk_object(&self, a: &[usize]) -> Result<()> {
        check_labels(a, self.functor.source().rank())?;
        let images: BTreeSet<usize> = a.iter().map(|&s| self.functor.object(s)).collect();
        if images.len() != a.len() {
            return Err(Error::Invalid("the central functor must be injective on the summands of a bulk object".to_string()));
        }
        Ok(())
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn category(&self) -> &FusionCategory {
        self.engine.category()
    }

    pub fn functor(&self) -> &CentralFunctor {
        &self.functor
    }

    pub fn is_boundary(&self, s: Site) -> bool {
        matches!(&self.boundary, Some((line, _)) if s.1 == *line)
    }

    fn content(&self, s: Site) -> Result<Content> {
        match &self.boundary {
            Some((line, x)) if s.1 == *line => Ok(Content::Boundary(x.clone())),
            Some((line, _)) if s.1 < *line => Err(Error::Geometry(format!("site {s:?} lies beyond the boundary line"))),
            _ => Ok(Content::Bulk(self.overrides.get(&s).cloned().unwrap_or_else(|| self.bulk.clone()))),
        }
    }

    fn leg(&self, c: &Content) -> Vec<usize> {
        match c {
            Content::Boundary(x) => x.clone(),
            Content::Bulk(a) => a.iter().map(|&s| self.functor.object(s)).collect(),
        }
    }

    /// Canonical order of a region: boundary sites by `x`, then bulk row-major.
    pub fn ordering(&self, region: &Region) -> Result<Vec<Site>> {
        let sites = region.sites();
        for &s in &sites {
            self.content(s)?;
        }
        let mut out: Vec<Site> = sites.iter().copied().filter(|&s| self.is_boundary(s)).collect();
        out.extend(sites.iter().copied().filter(|&s| !self.is_boundary(s)));
        Ok(out)
    }

    /// Tensor word of the site objects in a given order.
    pub fn word(&self, order: &[Site]) -> Result<Word> {
        let legs = order.iter().map(|&s| self.content(s).map(|c| self.leg(&c))).collect::<Result<Vec<_>>>()?;
        Ok(Word::new(legs))
    }

    pub fn space(&self, order: &[Site]) -> Result<Arc<PathSpace>> {
        self.engine.space(&self.word(order)?)
    }

    /// Block structure of the algebra of a region.
    pub fn algebra(&self, region: &Region) -> Result<BlockAlgebra> {
        let space = self.space(&self.ordering(region)?)?;
        let cat = self.category();
        Ok(block_algebra(&space, |r| cat.label(r).to_string()))
    }

    /// Two-leg crossing element between the contents of two sites.
    fn crossing(&self, left: &Content, right: &Content, left_moves: bool) -> Result<Morphism> {
        let (ll, rl) = (self.leg(left), self.leg(right));
        let dom = self.engine.space(&Word::new(vec![ll.clone(), rl.clone()]))?;
        let cod = self.engine.space(&Word::new(vec![rl, ll]))?;
        let pull = |c: &Content, image: usize| -> usize {
            match c {
                Content::Bulk(a) => *a.iter().find(|&&s| self.functor.object(s) == image).expect("leaf comes from the site object"),
                Content::Boundary(_) => unreachable!("boundary strands never move by a half-braiding"),
            }
        };
        Morphism::from_fn(&dom, &cod, |i, j| {
            let (p, q) = (dom.path(j), cod.path(i));
            let (x, y, f) = (p.leaf(0), p.leaf(1), p.root());
            if q.leaf(0) != y || q.leaf(1) != x || q.root() != f {
                return ZERO;
            }
            if left_moves {
                self.functor.half_braiding(pull(left, x), y, f)
            } else {
                self.functor.half_braiding(pull(right, y), x, f).inv()
            }
        })
    }

    fn steps(&self, from: &[Site], to: &[Site]) -> Result<Vec<(usize, bool)>> {
        crossing_sequence(from, to, |s| self.is_boundary(s))
    }

    /// Transport unitary `X^{⊗from} → X^{⊗to}` between two orders of the same sites.
    pub fn transport(&self, from: &[Site], to: &[Site]) -> Result<Morphism> {
        let steps = self.steps(from, to)?;
        let mut cur = from.to_vec();
        let mut acc = Morphism::identity(&self.space(from)?);
        for (i, left_moves) in steps {
            let c = self.crossing(&self.content(cur[i])?, &self.content(cur[i + 1])?, left_moves)?;
            let step = self.engine.embed(&c, acc.cod(), i)?;
            acc = step.compose(&acc)?;
            cur.swap(i, i + 1);
        }
        Ok(acc)
    }

    /// Inclusion of the algebra of `lam` into that of `delta`.
    ///
    /// `x` acts on the canonical order of `lam`; it is tensored with the
    /// identity in an order where the sites of `lam` are consecutive and then
    /// conjugated by the transport to the canonical order of `delta`.
    pub fn include(&self, x: &Morphism, lam: &Region, delta: &Region) -> Result<Morphism> {
        if !lam.is_subset(delta) {
            return Err(Error::Geometry("inclusion needs a subregion".to_string()));
        }
        let lam_order = self.ordering(lam)?;
        if x.dom().word() != &self.word(&lam_order)? || !x.is_endo() {
            return Err(Error::Shape("operator does not act on the region".to_string()));
        }
        let delta_order = self.ordering(delta)?;
        let bd: Vec<Site> = delta_order.iter().copied().filter(|&s| self.is_boundary(s)).collect();
        let bl: Vec<Site> = lam_order.iter().copied().filter(|&s| self.is_boundary(s)).collect();
        let start = match bl.first() {
            Some(first) => bd.iter().position(|s| s == first).expect("subset"),
            None => bd.len(),
        };
        if bd.len() < start + bl.len() || bd[start..start + bl.len()] != bl[..] {
            return Err(Error::Geometry("boundary sites of the subregion must be consecutive".to_string()));
        }
        let mut mid: Vec<Site> = bd[..start].to_vec();
        mid.extend(lam_order.iter().copied());
        mid.extend(bd[start + bl.len()..].iter().copied());
        mid.extend(delta_order.iter().copied().filter(|&s| !self.is_boundary(s) && !lam.contains(s)));
        let xi = self.engine.embed(x, &self.space(&mid)?, start)?;
        let u = self.transport(&mid, &delta_order)?;
        u.compose(&xi)?.compose(&u.dagger())
    }

    /// `h` on the sites of `lam`, included into `delta`.
    pub fn local(&self, h: &Morphism, lam: &Region, delta: &Region) -> Result<Morphism> {
        self.include(h, lam, delta)
    }

    /// Matrix units of the algebra of a region in canonical order.
    pub fn region_units(&self, region: &Region) -> Result<Vec<Morphism>> {
        let space = self.space(&self.ordering(region)?)?;
        self.engine.matrix_units(&space, &space)
    }

    /// Canonical state: the coefficient of the all-unit path.
    pub fn state(&self, x: &Morphism) -> Result<C64> {
        if !x.is_endo() {
            return Err(Error::Shape("state of a non-endomorphism".to_string()));
        }
        let space = x.dom();
        let u = self.category().unit();
        let i = space
            .index_of(&vec![u; 2 * space.word().len() + 1])
            .ok_or_else(|| Error::Invalid("a site object has no unit summand".to_string()))?;
        Ok(x.entry(i, i))
    }

    /// `Hom(x → X^{⊗Λ})` with basis `T/√d_x` over the splitting trees `T` with root `x`.
    pub fn sector_space(&self, x: usize, region: &Region) -> Result<SectorSpace> {
        let cat = self.category();
        if x >= cat.rank() {
            return Err(Error::UnknownLabel(format!("sector {x}")));
        }
        let cod = self.space(&self.ordering(region)?)?;
        let dom = self.engine.space(&Word::simple(&[x]))?;
        let d = cat.dim(x);
        let s = C64::new(1.0 / d.sqrt(), 0.0);
        let basis = cod
            .range(x)
            .map(|k| Morphism::from_fn(&dom, &cod, |i, _| if i == k { s } else { ZERO }))
            .collect::<Result<Vec<_>>>()?;
        Ok(SectorSpace { sector: x, dim_x: d, basis })
    }

    /// Sector multiplicities of `lam` against its complement in `delta`.
    pub fn cone_decomposition(&self, lam: &Region, delta: &Region) -> Result<ConeTable> {
        if !lam.is_subset(delta) {
            return Err(Error::Geometry("cone decomposition needs a subregion".to_string()));
        }
        let cat = self.category();
        let inner = self.space(&self.ordering(lam)?)?;
        let outer = self.space(&self.ordering(&delta.difference(lam))?)?;
        let whole = self.space(&self.ordering(delta)?)?;
        let rows = (0..cat.rank())
            .map(|x| ConeRow { sector: x, label: cat.label(x).to_string(), inner: inner.count(x), outer: outer.count(cat.dual(x)) })
            .collect();
        Ok(ConeTable { rows, vacuum_dim: whole.count(cat.unit()) })
    }

    /// Orders of a region in which boundary sites keep their left-to-right order.
    pub fn admissible_orderings(&self, region: &Region) -> Result<Vec<Vec<Site>>> {
        let base = self.ordering(region)?;
        if base.len() > 8 {
            return Err(Error::Resource(format!("{} sites exceed the ordering enumeration cap of 8", base.len())));
        }
        let mut out = Vec::new();
        permutations(&base, &mut Vec::new(), &mut vec![false; base.len()], &mut out);
        out.retain(|o| {
            let b: Vec<Site> = o.iter().copied().filter(|&s| self.is_boundary(s)).collect();
            b.windows(2).all(|w| w[0].0 < w[1].0)
        });
        Ok(out)
    }

    /// Cocycle identity `u(w₁→w₃) = u(w₂→w₃) u(w₁→w₂)` of the transport unitaries.
    ///
    /// Up to `exhaustive` sites every triple of orderings is checked. Beyond,
    /// every pair is compared with its factorization through the canonical
    /// order, `u(w₁→w₂) = u(w₂→c)† u(w₁→c)`; this bounds the residual of every
    /// triple by three times the worst pair, and `samples` random triples are
    /// checked directly as well.
    pub fn cocycle_report<R: Rng>(&self, region: &Region, exhaustive: usize, samples: usize, tol: f64, rng: &mut R) -> Result<Report> {
        let orders = self.admissible_orderings(region)?;
        let canon = self.ordering(region)?;
        let mut cache = TransportCache::new(self);
        let mut report = Report::new(&format!("braid_cocycle:{}sites", canon.len()), tol);
        report.push(Item::int_eq("orderings", orders.len() as i64, orders.len() as i64));
        if canon.len() <= exhaustive {
            let m = orders.len();
            let mut u = Vec::with_capacity(m * m);
            for a in &orders {
                for b in &orders {
                    u.push(cache.transport(a, b)?);
                }
            }
            let mut worst: f64 = 0.0;
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let lhs = &u[i * m + k];
                        let rhs = &u[j * m + k] * &u[i * m + j];
                        worst = worst.max((lhs - &rhs).max_abs());
                    }
                }
            }
            report.push(Item::residual("all_triples", worst, tol).with_note(&format!("{} triples", m * m * m)));
        } else {
            let to_canon: Vec<SpMat> = orders.iter().map(|o| cache.transport(o, &canon)).collect::<Result<_>>()?;
            let from_canon: Vec<SpMat> = to_canon.iter().map(SpMat::adjoint).collect();
            let mut worst: f64 = 0.0;
            for (i, a) in orders.iter().enumerate() {
                for (j, b) in orders.iter().enumerate() {
                    let direct = cache.transport(a, b)?;
                    let factored = &from_canon[j] * &to_canon[i];
                    worst = worst.max((&direct - &factored).max_abs());
                }
            }
            let pairs = orders.len() * orders.len();
            report.push(Item::residual("pairs_through_canonical_order", worst, tol).with_note(&format!("{pairs} pairs")));
            let triples = (orders.len() as f64).powi(3);
            report.push(
                Item::residual("all_triples_bound", 3.0 * worst, tol)
                    .with_note(&format!("bound over {triples} triples from the pair factorization")),
            );
            let mut sampled: f64 = 0.0;
            for _ in 0..samples {
                let t: Vec<&Vec<Site>> = (0..3).map(|_| orders.choose(rng).expect("nonempty")).collect();
                let lhs = cache.transport(t[0], t[2])?;
                let rhs = &cache.transport(t[1], t[2])? * &cache.transport(t[0], t[1])?;
                sampled = sampled.max((&lhs - &rhs).max_abs());
            }
            report.push(Item::residual("random_triples", sampled, tol).with_actual(Quantity::Int(samples as i64)));
        }
        Ok(report)
    }
}

/// Sparse transport unitaries with cached elementary crossings.
///
/// Site contents are interned; a word is identified by its sequence of
/// content ids, and elementary crossings are cached per word and position.
struct TransportCache<'a> {
    net: &'a BraidedNet,
    contents: Vec<Content>,
    site_content: BTreeMap<Site, usize>,
    words: Vec<Vec<usize>>,
    word_ids: BTreeMap<Vec<usize>, usize>,
    next: BTreeMap<(usize, usize), usize>,
    steps: BTreeMap<(usize, usize, bool), SpMat>,
}

impl<'a> TransportCache<'a> {
    fn new(net: &'a BraidedNet) -> Self {
        Self {
            net,
            contents: Vec::new(),
            site_content: BTreeMap::new(),
            words: Vec::new(),
            word_ids: BTreeMap::new(),
            next: BTreeMap::new(),
            steps: BTreeMap::new(),
        }
    }

    fn content_id(&mut self, s: Site) -> Result<usize> {
        if let Some(&c) = self.site_content.get(&s) {
            return Ok(c);
        }
        let c = self.net.content(s)?;
        let id = match self.contents.iter().position(|x| *x == c) {
            Some(id) => id,
            None => {
                self.contents.push(c);
                self.contents.len() - 1
            }
        };
        self.site_content.insert(s, id);
        Ok(id)
    }

    fn word_id(&mut self, seq: Vec<usize>) -> usize {
        if let Some(&w) = self.word_ids.get(&seq) {
            return w;
        }
        self.words.push(seq.clone());
        self.word_ids.insert(seq, self.words.len() - 1);
        self.words.len() - 1
    }

    fn word(&self, w: usize) -> Word {
        Word::new(self.words[w].iter().map(|&c| self.net.leg(&self.contents[c])).collect())
    }

    fn transport(&mut self, from: &[Site], to: &[Site]) -> Result<SpMat> {
        let net = self.net;
        let steps = net.steps(from, to)?;
        let seq = from.iter().map(|&s| self.content_id(s)).collect::<Result<Vec<_>>>()?;
        let mut w = self.word_id(seq);
        let start = w;
        let mut acc: Option<SpMat> = None;
        for (i, left_moves) in steps {
            if !self.steps.contains_key(&(w, i, left_moves)) {
                let space = net.engine.space(&self.word(w))?;
                let (l, r) = (self.words[w][i], self.words[w][i + 1]);
                let c = net.crossing(&self.contents[l], &self.contents[r], left_moves)?;
                let e = net.engine.embed(&c, &space, i)?;
                self.steps.insert((w, i, left_moves), e.to_sparse(0.0));
            }
            let step = &self.steps[&(w, i, left_moves)];
            acc = Some(match acc {
                None => step.clone(),
                Some(a) => step * &a,
            });
            w = match self.next.get(&(w, i)) {
                Some(&v) => v,
                None => {
                    let mut seq = self.words[w].clone();
                    seq.swap(i, i + 1);
                    let v = self.word_id(seq);
                    self.next.insert((w, i), v);
                    v
                }
            };
        }
        match acc {
            Some(a) => Ok(a),
            None => Ok(SpMat::identity(net.engine.space(&self.word(start))?.len())),
        }
    }
}

fn permutations(base: &[Site], cur: &mut Vec<Site>, used: &mut [bool], out: &mut Vec<Vec<Site>>) {
    if cur.len() == base.len() {
        out.push(cur.clone());
        return;
    }
    for i in 0..base.len() {
        if !used[i] {
            used[i] = true;
            cur.push(base[i]);
            permutations(base, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

fn normalized(x: &[usize]) -> Vec<usize> {
    let mut v = x.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn check_labels(x: &[usize], rank: usize) -> Result<()> {
    if x.is_empty() {
        return Err(Error::Invalid("site objects must be nonzero".to_string()));
    }
    if let Some(&bad) = x.iter().find(|&&a| a >= rank) {
        return Err(Error::UnknownLabel(format!("label {bad} out of range")));
    }
    Ok(())
}
