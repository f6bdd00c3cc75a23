//! Levin-Wen string-net model on a square lattice.
//!
//! Vertex `(x, y)` carries `ℋ_v = ⊕ Hom(a_W ⊗ a_S → b_N ⊗ b_E)` over the
//! labels of its four edges; horizontal edges point east and vertical edges
//! point north. On a lattice with boundary the column `x = 0` carries
//! `ℋ^∂_v = ⊕ Hom_ℳ(m_S → m_N ◁ c_E)` with module labels on its vertical
//! edges. Basis vectors are matrix units rescaled to be orthonormal for the
//! skein inner product.
//!
//! A rectangle is evaluated into `Hom(in → out)`: the incoming word lists
//! the west legs of the left column from top to bottom and then the south
//! legs of the bottom row, the outgoing word the north legs of the top row
//! and then the east legs of the right column from top to bottom. On the
//! boundary column the module strand replaces the west legs and both words
//! start with it. The scaled evaluation `V = D^{-#p/2}·eval`, expressed in
//! skein-orthonormal coordinates, is a coisometry with `V†V = p_Λ` on
//! label-matched configurations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // float methods for no_std builds
use num_traits::Float;

use crate::algebra::{block_algebra, BlockAlgebra};
use crate::braided::{Region, Site};
use crate::category::{FusionCategory, ModuleCategory};
use crate::error::{Error, Result};
use crate::homspace::{Engine, Morphism, PathSpace, Word};
use crate::linalg::{column_span, eigh, null_space, re, subspace_distance, CMat, SpMat, C64, ONE, ZERO};
use crate::report::{Item, Quantity, Report};

const PRUNE: f64 = 1e-14;

/// Rectangle of lattice vertices with inclusive corners.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rect {
    pub x0: i32,
    pub y0: i32,
    pub x1: i32,
    pub y1: i32,
}

/// Side of a rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Rect {
    pub fn new(x0: i32, y0: i32, x1: i32, y1: i32) -> Result<Self> {
        if x1 < x0 || y1 < y0 {
            return Err(Error::Geometry(format!("empty rectangle [{x0},{x1}]x[{y0},{y1}]")));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    /// Single vertex.
    pub fn site(x: i32, y: i32) -> Self {
        Self { x0: x, y0: y, x1: x, y1: y }
    }

    pub fn width(&self) -> usize {
        (self.x1 - self.x0 + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.y1 - self.y0 + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Vertices in row-major order, bottom row first.
    pub fn sites(&self) -> Vec<Site> {
        let mut out = Vec::with_capacity(self.len());
        for y in self.y0..=self.y1 {
            for x in self.x0..=self.x1 {
                out.push((x, y));
            }
        }
        out
    }

    pub fn site_index(&self, s: Site) -> Option<usize> {
        if self.contains_site(s) {
            Some((s.1 - self.y0) as usize * self.width() + (s.0 - self.x0) as usize)
        } else {
            None
        }
    }

    pub fn contains_site(&self, s: Site) -> bool {
        s.0 >= self.x0 && s.0 <= self.x1 && s.1 >= self.y0 && s.1 <= self.y1
    }

    pub fn contains(&self, other: &Rect) -> bool {
        other.x0 >= self.x0 && other.x1 <= self.x1 && other.y0 >= self.y0 && other.y1 <= self.y1
    }

    pub fn grow(&self, side: Side, k: i32) -> Rect {
        let mut r = *self;
        match side {
            Side::Left => r.x0 -= k,
            Side::Right => r.x1 += k,
            Side::Bottom => r.y0 -= k,
            Side::Top => r.y1 += k,
        }
        r
    }

    /// Grow by `k` on every side.
    pub fn expand(&self, k: i32) -> Rect {
        Rect { x0: self.x0 - k, y0: self.y0 - k, x1: self.x1 + k, y1: self.y1 + k }
    }

    pub fn intersect(&self, other: &Rect) -> Option<Rect> {
        Rect::new(self.x0.max(other.x0), self.y0.max(other.y0), self.x1.min(other.x1), self.y1.min(other.y1)).ok()
    }

    pub fn region(&self) -> Region {
        Region::rectangle(self.x0, self.y0, self.width() as i32, self.height() as i32)
    }

    /// The rectangle filled by a region, if it is one.
    pub fn from_region(region: &Region) -> Result<Rect> {
        let sites = region.sites();
        if sites.is_empty() {
            return Err(Error::Geometry("empty region".to_string()));
        }
        let x0 = sites.iter().map(|s| s.0).min().unwrap_or(0);
        let x1 = sites.iter().map(|s| s.0).max().unwrap_or(0);
        let y0 = sites.iter().map(|s| s.1).min().unwrap_or(0);
        let y1 = sites.iter().map(|s| s.1).max().unwrap_or(0);
        let r = Rect::new(x0, y0, x1, y1)?;
        if r.len() != sites.len() {
            return Err(Error::Geometry("region is not a rectangle".to_string()));
        }
        Ok(r)
    }

    /// Sides of `self` lying on the corresponding side of `outer`.
    pub fn shared_sides(&self, outer: &Rect) -> Vec<Side> {
        let mut out = Vec::new();
        if self.x0 == outer.x0 {
            out.push(Side::Left);
        }
        if self.x1 == outer.x1 {
            out.push(Side::Right);
        }
        if self.y0 == outer.y0 {
            out.push(Side::Bottom);
        }
        if self.y1 == outer.y1 {
            out.push(Side::Top);
        }
        out
    }

    /// Vertex interval of the given side.
    pub fn side_span(&self, side: Side) -> (i32, i32, i32) {
        match side {
            Side::Left => (self.x0, self.y0, self.y1),
            Side::Right => (self.x1, self.y0, self.y1),
            Side::Bottom => (self.y0, self.x0, self.x1),
            Side::Top => (self.y1, self.x0, self.x1),
        }
    }
}

/// How `Λ` sits inside `Δ` with surrounding constant one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Surround {
    /// Completely surrounded.
    Complete,
    /// Surrounded with one shared side.
    Cut(Side),
    /// Completely surrounded up to the lattice boundary.
    BoundaryComplete,
    /// Shares the lattice boundary and one adjacent side.
    BoundaryCut(Side),
}

impl Surround {
    pub fn cut_side(&self) -> Option<Side> {
        match self {
            Surround::Cut(s) | Surround::BoundaryCut(s) => Some(*s),
            _ => None,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Surround::Complete | Surround::BoundaryComplete)
    }
}

/// Classify `Λ ⊂ Δ`; with `boundary` the column `x = 0` is the lattice boundary.
///
/// Every vertex of `Δ ∖ Λ` must lie in a `3×3` block inside `Δ`, which for
/// rectangles means `Δ` is at least three vertices wide and tall.
pub fn surround(lam: &Rect, delta: &Rect, boundary: bool) -> Option<Surround> {
    if !delta.contains(lam) || lam == delta || delta.width() < 3 || delta.height() < 3 {
        return None;
    }
    if boundary && delta.x0 < 0 {
        return None;
    }
    let mut sides = lam.shared_sides(delta);
    if boundary && lam.x0 == 0 {
        sides.retain(|s| *s != Side::Left);
        return match sides.as_slice() {
            [] => Some(Surround::BoundaryComplete),
            [s @ (Side::Top | Side::Bottom)] => Some(Surround::BoundaryCut(*s)),
            _ => None,
        };
    }
    match sides.as_slice() {
        [] => Some(Surround::Complete),
        [s] => Some(Surround::Cut(*s)),
        _ => None,
    }
}

/// `Δ` and its one-step enlargements away from `Λ`'s shared sides and the lattice boundary.
pub fn surrounding_family(lam: &Rect, delta: &Rect, boundary: bool) -> Vec<Rect> {
    let shared = lam.shared_sides(delta);
    let mut out = vec![*delta];
    for side in [Side::Left, Side::Right, Side::Bottom, Side::Top] {
        if shared.contains(&side) || (boundary && side == Side::Left && delta.x0 == 0) {
            continue;
        }
        out.push(delta.grow(side, 1));
    }
    out
}

/// Extents of a finite lattice of vertices `[0, width) × [0, height)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LwLattice {
    pub width: i32,
    pub height: i32,
    /// Column `x = 0` carries module sites.
    pub boundary: bool,
}

impl LwLattice {
    pub fn rect(&self) -> Rect {
        Rect { x0: 0, y0: 0, x1: self.width - 1, y1: self.height - 1 }
    }

    pub fn contains(&self, r: &Rect) -> bool {
        self.rect().contains(r)
    }
}

/// Resource guards for explicit operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest dimension handled with dense matrices.
    pub dense: usize,
    /// Largest dimension handled with sparse matrices.
    pub sparse: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { dense: 5000, sparse: 300_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Bulk,
    Boundary,
}

/// One basis vector of a vertex space with its edge labels.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalState {
    /// West label; `None` on boundary vertices.
    pub west: Option<usize>,
    pub south: usize,
    pub north: usize,
    pub east: usize,
    /// Fusion channel of the incoming pair.
    pub root: usize,
    /// Factor making the matrix unit skein-orthonormal.
    pub scale: f64,
}

/// Basis of a vertex space.
#[derive(Clone, Debug)]
pub struct LocalSpace {
    pub kind: VertexKind,
    pub states: Vec<LocalState>,
    units: Vec<Morphism>,
}

impl LocalSpace {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// The vertex morphism of a basis state (a matrix unit).
    pub fn unit(&self, i: usize) -> &Morphism {
        &self.units[i]
    }

    fn find(&self, west: Option<usize>, south: usize, north: usize, east: usize) -> Option<usize> {
        self.states.iter().position(|s| s.west == west && s.south == south && s.north == north && s.east == east)
    }
}

/// Vertex spaces for generator `X` and, with a module, the boundary object `W`.
pub fn build_local_spaces(engine: &Engine, x: &[usize], w: Option<&[usize]>) -> Result<(LocalSpace, Option<LocalSpace>)> {
    let xx = engine.space(&Word::new(vec![x.to_vec(), x.to_vec()]))?;
    let units = engine.matrix_units(&xx, &xx)?;
    let mut states = Vec::new();
    for r in 0..xx.root_count() {
        for i in xx.range(r) {
            for j in xx.range(r) {
                let (p, q) = (xx.path(j), xx.path(i));
                states.push(LocalState {
                    west: Some(p.leaf(0)),
                    south: p.leaf(1),
                    north: q.leaf(0),
                    east: q.leaf(1),
                    root: r,
                    scale: engine.skein_scale(&xx, &xx, i, j),
                });
            }
        }
    }
    let bulk = LocalSpace { kind: VertexKind::Bulk, states, units };
    let boundary = match w {
        None => None,
        Some(w) => {
            let dom = engine.space(&Word::module(w.to_vec(), Vec::new()))?;
            let cod = engine.space(&Word::module(w.to_vec(), vec![x.to_vec()]))?;
            let units = engine.matrix_units(&dom, &cod)?;
            let mut states = Vec::new();
            for r in 0..dom.root_count() {
                for i in cod.range(r) {
                    for j in dom.range(r) {
                        let q = cod.path(i);
                        states.push(LocalState {
                            west: None,
                            south: r,
                            north: q.partial(0),
                            east: q.leaf(0),
                            root: r,
                            scale: engine.skein_scale(&dom, &cod, i, j),
                        });
                    }
                }
            }
            Some(LocalSpace { kind: VertexKind::Boundary, states, units })
        }
    };
    Ok((bulk, boundary))
}

/// Internal edge of a region: from `(x, y)` east or north.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub x: i32,
    pub y: i32,
    pub north: bool,
}

impl Edge {
    pub fn ends(&self) -> (Site, Site) {
        let b = if self.north { (self.x, self.y + 1) } else { (self.x + 1, self.y) };
        ((self.x, self.y), b)
    }
}

/// Operator on `⊗_{v ∈ rect} ℋ_v`, basis indexed in mixed radix with the first site most significant.
#[derive(Clone, Debug)]
pub struct SiteOperator {
    pub rect: Rect,
    pub dims: Vec<usize>,
    pub mat: SpMat,
}

impl SiteOperator {
    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn product(&self, other: &SiteOperator) -> SiteOperator {
        SiteOperator { rect: self.rect, dims: self.dims.clone(), mat: &self.mat * &other.mat }
    }

    pub fn projector_residual(&self) -> f64 {
        self.mat.projector_residual()
    }

    pub fn commutator_norm(&self, other: &SiteOperator) -> f64 {
        self.mat.commutator(&other.mat).max_abs()
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Label-matched basis configurations of a rectangle, sorted by global index.
#[derive(Clone, Debug)]
pub struct Configs {
    pub rect: Rect,
    pub dims: Vec<usize>,
    states: Vec<u16>,
    global: Vec<usize>,
}

impl Configs {
    pub fn len(&self) -> usize {
        self.global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.global.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u16] {
        let n = self.dims.len();
        &self.states[i * n..(i + 1) * n]
    }

    pub fn global(&self, i: usize) -> usize {
        self.global[i]
    }

    pub fn position(&self, global: usize) -> Option<usize> {
        self.global.binary_search(&global).ok()
    }
}

/// Scaled evaluation of a rectangle into its skein space.
#[derive(Clone, Debug)]
pub struct SkeinMap {
    pub rect: Rect,
    pub in_space: Arc<PathSpace>,
    pub out_space: Arc<PathSpace>,
    pub configs: Configs,
    /// Skein coordinates × matched configurations.
    pub v: SpMat,
    offsets: Vec<usize>,
}

impl SkeinMap {
    pub fn dim(&self) -> usize {
        self.v.rows()
    }

    /// Skein coordinate of the matrix unit `|I⟩⟨J|` of `Hom(in → out)`.
    pub fn coord(&self, i: usize, j: usize) -> usize {
        let r = self.out_space.path(i).root();
        let (ro, ri) = (self.out_space.range(r), self.in_space.range(r));
        self.offsets[r] + (i - ro.start) * ri.len() + (j - ri.start)
    }

    /// Inverse of [`SkeinMap::coord`].
    pub fn decode(&self, k: usize) -> (usize, usize) {
        let r = self.offsets.partition_point(|&o| o <= k) - 1;
        let (ro, ri) = (self.out_space.range(r), self.in_space.range(r));
        let off = k - self.offsets[r];
        (ro.start + off / ri.len(), ri.start + off % ri.len())
    }

    /// `‖VV† − 1‖_max`.
    pub fn coisometry_residual(&self) -> f64 {
        let vv = &self.v * &self.v.adjoint();
        (&vv - &SpMat::identity(self.dim())).max_abs()
    }

    /// `V†V` on matched configurations.
    pub fn projector(&self) -> SpMat {
        &self.v.adjoint() * &self.v
    }
}

/// The Levin-Wen model for a fusion category, optionally with a boundary module category.
#[derive(Clone, Debug)]
pub struct LevinWen {
    engine: Engine,
    lattice: LwLattice,
    x: Vec<usize>,
    w: Vec<usize>,
    bulk: LocalSpace,
    boundary: Option<LocalSpace>,
    limits: Limits,
}

type EmbKey = (usize, usize, bool, usize);

impl LevinWen {
    /// Bulk model with `X` the sum of all simples.
    pub fn new(cat: &FusionCategory, lattice: LwLattice) -> Result<Self> {
        if lattice.boundary {
            return Err(Error::Geometry("a boundary column needs module data".to_string()));
        }
        Self::build(Engine::new(cat), lattice, None)
    }

    /// Model with boundary column `x = 0` labelled by `ℳ` and `W` the sum of its simples.
    pub fn with_module(cat: &FusionCategory, module: &ModuleCategory, lattice: LwLattice) -> Result<Self> {
        if !lattice.boundary {
            return Err(Error::Geometry("module data supplied without a boundary column".to_string()));
        }
        let w_mult = vec![1; module.rank()];
        if !module.is_normalized(cat, &w_mult, 1e-9) {
            return Err(Error::UnnormalizedTrace);
        }
        let w: Vec<usize> = (0..module.rank()).collect();
        Self::build(Engine::with_module(cat, module), lattice, Some(w))
    }

    fn build(engine: Engine, lattice: LwLattice, w: Option<Vec<usize>>) -> Result<Self> {
        if lattice.width < 1 || lattice.height < 1 {
            return Err(Error::Geometry("empty lattice".to_string()));
        }
        let x: Vec<usize> = (0..engine.category().rank()).collect();
        let (bulk, boundary) = build_local_spaces(&engine, &x, w.as_deref())?;
        Ok(Self { engine, lattice, x, w: w.unwrap_or_default(), bulk, boundary, limits: Limits::default() })
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn category(&self) -> &FusionCategory {
        self.engine.category()
    }

    pub fn lattice(&self) -> LwLattice {
        self.lattice
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn bulk_space(&self) -> &LocalSpace {
        &self.bulk
    }

    pub fn boundary_space(&self) -> Option<&LocalSpace> {
        self.boundary.as_ref()
    }

    /// `D = Σ_a d_a²`.
    pub fn global_dim(&self) -> f64 {
        self.category().global_dim()
    }

    pub fn is_boundary_site(&self, s: Site) -> bool {
        self.lattice.boundary && s.0 == 0
    }

    pub fn local_space(&self, s: Site) -> &LocalSpace {
        match (&self.boundary, self.is_boundary_site(s)) {
            (Some(b), true) => b,
            _ => &self.bulk,
        }
    }

    fn check_rect(&self, r: &Rect) -> Result<()> {
        if !self.lattice.contains(r) {
            return Err(Error::Geometry(format!("{r:?} leaves the lattice")));
        }
        Ok(())
    }

    fn is_module_region(&self, r: &Rect) -> bool {
        self.lattice.boundary && r.x0 == 0
    }

    pub fn dims(&self, r: &Rect) -> Vec<usize> {
        r.sites().iter().map(|&s| self.local_space(s).dim()).collect()
    }

    /// Dimension of `⊗_{v ∈ r} ℋ_v`, failing beyond the sparse cap.
    pub fn full_dim(&self, r: &Rect) -> Result<usize> {
        let mut n: usize = 1;
        for d in self.dims(r) {
            n = n.checked_mul(d).filter(|&m| m <= self.limits.sparse).ok_or_else(|| {
                Error::Resource(format!("Hilbert space of {r:?} exceeds the sparse cap {}", self.limits.sparse))
            })?;
        }
        Ok(n)
    }

    fn frontier_word(&self, module: bool, len: usize) -> Word {
        let legs = vec![self.x.clone(); len];
        if module {
            Word::module(self.w.clone(), legs)
        } else {
            Word::new(legs)
        }
    }

    /// Incoming word of a rectangle.
    pub fn in_word(&self, r: &Rect) -> Word {
        if self.is_module_region(r) {
            self.frontier_word(true, r.width() - 1)
        } else {
            self.frontier_word(false, r.width() + r.height())
        }
    }

    /// Outgoing word of a rectangle.
    pub fn out_word(&self, r: &Rect) -> Word {
        if self.is_module_region(r) {
            self.frontier_word(true, r.width() - 1 + r.height())
        } else {
            self.frontier_word(false, r.width() + r.height())
        }
    }

    /// Dimension of the skein space `Hom(in → out)` of a rectangle.
    pub fn skein_dim(&self, r: &Rect) -> Result<usize> {
        self.engine.hom_dim(&self.in_word(r), &self.out_word(r))
    }

    /// Number of boundary legs of a rectangle, module strand excluded.
    pub fn boundary_legs(&self, r: &Rect) -> usize {
        self.in_word(r).len() + self.out_word(r).len()
    }

    fn neighbours(&self, r: &Rect) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        let w = r.width();
        let sites = r.sites();
        let west = sites.iter().enumerate().map(|(k, s)| if s.0 > r.x0 { Some(k - 1) } else { None }).collect();
        let south = sites.iter().enumerate().map(|(k, s)| if s.1 > r.y0 { Some(k - w) } else { None }).collect();
        (west, south)
    }

    fn consistent(&self, spaces: &[&LocalSpace], assign: &[u16], west: Option<usize>, south: Option<usize>, st: &LocalState) -> bool {
        if let Some(wk) = west {
            if Some(spaces[wk].states[assign[wk] as usize].east) != st.west {
                return false;
            }
        }
        if let Some(sk) = south {
            if spaces[sk].states[assign[sk] as usize].north != st.south {
                return false;
            }
        }
        true
    }

    /// Count label-matched configurations, stopping once `cap` is exceeded.
    pub fn matched_count(&self, r: &Rect, cap: usize) -> Result<usize> {
        self.check_rect(r)?;
        let sites = r.sites();
        let spaces: Vec<&LocalSpace> = sites.iter().map(|&s| self.local_space(s)).collect();
        let (west, south) = self.neighbours(r);
        let mut assign = vec![0u16; sites.len()];
        let mut count = 0usize;
        fn rec(lw: &LevinWen, k: usize, spaces: &[&LocalSpace], west: &[Option<usize>], south: &[Option<usize>], assign: &mut [u16], count: &mut usize, cap: usize) {
            if *count > cap {
                return;
            }
            if k == spaces.len() {
                *count += 1;
                return;
            }
            for (i, st) in spaces[k].states.iter().enumerate() {
                if lw.consistent(spaces, assign, west[k], south[k], st) {
                    assign[k] = i as u16;
                    rec(lw, k + 1, spaces, west, south, assign, count, cap);
                }
            }
        }
        rec(self, 0, &spaces, &west, &south, &mut assign, &mut count, cap);
        Ok(count)
    }

    /// Evaluate every label-matched configuration of a rectangle into skein coordinates.
    pub fn skein_map(&self, r: &Rect) -> Result<SkeinMap> {
        self.check_rect(r)?;
        let n_matched = self.matched_count(r, self.limits.sparse)?;
        if n_matched > self.limits.sparse {
            return Err(Error::Resource(format!("{r:?} has more than {} matched configurations", self.limits.sparse)));
        }
        let module = self.is_module_region(r);
        let (w, h) = (r.width(), r.height());
        let sites = r.sites();
        let spaces: Vec<&LocalSpace> = sites.iter().map(|&s| self.local_space(s)).collect();
        let (west, south) = self.neighbours(r);
        // frontier length and acting position for each vertex
        let mut stage = Vec::with_capacity(sites.len());
        for &(x, y) in &sites {
            let (rx, ry) = ((x - r.x0) as usize, (y - r.y0) as usize);
            if module {
                if rx == 0 {
                    stage.push((w - 1 + ry, 0));
                } else {
                    stage.push((w + ry, rx - 1));
                }
            } else {
                stage.push((w + h, (h - 1 - ry) + rx));
            }
        }
        let mut frontiers: BTreeMap<usize, Arc<PathSpace>> = BTreeMap::new();
        for &(len, _) in &stage {
            if let alloc::collections::btree_map::Entry::Vacant(e) = frontiers.entry(len) {
                e.insert(self.engine.space(&self.frontier_word(module, len))?);
            }
        }
        let in_space = self.engine.space(&self.in_word(r))?;
        let out_space = self.engine.space(&self.out_word(r))?;
        let mut offsets = Vec::with_capacity(out_space.root_count() + 1);
        let mut acc = 0;
        for q in 0..out_space.root_count() {
            offsets.push(acc);
            acc += out_space.count(q) * in_space.count(q);
        }
        offsets.push(acc);
        let n_plaq = (w - 1) * (h - 1);
        let norm = self.global_dim().powf(-(n_plaq as f64) / 2.0);
        let mut ctx = Sweep {
            lw: self,
            spaces,
            west,
            south,
            stage,
            frontiers,
            embs: BTreeMap::new(),
            assign: vec![0; sites.len()],
            states: Vec::with_capacity(n_matched * sites.len()),
            trips: Vec::new(),
            n_cols: 0,
            norm,
            in_space: in_space.clone(),
            out_space: out_space.clone(),
            offsets: offsets.clone(),
        };
        let start: Vec<(u32, u32, C64)> = (0..in_space.len()).map(|j| (j as u32, j as u32, ONE)).collect();
        ctx.descend(0, &start, 1.0)?;
        let dims = self.dims(r);
        let st = strides(&dims);
        let n_sites = sites.len();
        let global = (0..ctx.n_cols).map(|c| (0..n_sites).map(|k| ctx.states[c * n_sites + k] as usize * st[k]).sum()).collect();
        let configs = Configs { rect: *r, dims, states: ctx.states, global };
        let v = SpMat::from_triplets(acc, ctx.n_cols, ctx.trips);
        Ok(SkeinMap { rect: *r, in_space, out_space, configs, v, offsets })
    }

    /// Internal edges of a rectangle.
    pub fn edges(&self, r: &Rect) -> Vec<Edge> {
        let mut out = Vec::new();
        for y in r.y0..=r.y1 {
            for x in r.x0..=r.x1 {
                if x < r.x1 {
                    out.push(Edge { x, y, north: false });
                }
                if y < r.y1 {
                    out.push(Edge { x, y, north: true });
                }
            }
        }
        out
    }

    /// Plaquettes of a rectangle, named by their lower-left vertex.
    pub fn plaquettes(&self, r: &Rect) -> Vec<Site> {
        let mut out = Vec::new();
        for y in r.y0..r.y1 {
            for x in r.x0..r.x1 {
                out.push((x, y));
            }
        }
        out
    }

    /// Diagonal projector `A_ℓ` onto matching labels at the two ends of an edge.
    pub fn edge_projector(&self, r: &Rect, e: Edge) -> Result<SiteOperator> {
        self.check_rect(r)?;
        let (a, b) = e.ends();
        let (ka, kb) = match (r.site_index(a), r.site_index(b)) {
            (Some(ka), Some(kb)) => (ka, kb),
            _ => return Err(Error::Geometry(format!("edge {e:?} is not internal to {r:?}"))),
        };
        let n = self.full_dim(r)?;
        let dims = self.dims(r);
        let st = strides(&dims);
        let (sa, sb) = (self.local_space(a), self.local_space(b));
        let diag: Vec<C64> = (0..n)
            .map(|g| {
                let (ia, ib) = ((g / st[ka]) % dims[ka], (g / st[kb]) % dims[kb]);
                let ok = if e.north { sa.states[ia].north == sb.states[ib].south } else { Some(sa.states[ia].east) == sb.states[ib].west };
                if ok {
                    ONE
                } else {
                    ZERO
                }
            })
            .collect();
        Ok(SiteOperator { rect: *r, dims, mat: SpMat::diag(&diag) })
    }

    fn lift(&self, block: &Rect, op: &SpMat, block_configs: &Configs, outer: &Rect) -> Result<SiteOperator> {
        let n = self.full_dim(outer)?;
        let dims = self.dims(outer);
        let st = strides(&dims);
        let bsites = block.sites();
        let pos: Vec<usize> = bsites.iter().map(|&s| outer.site_index(s).expect("block inside region")).collect();
        let contrib: Vec<usize> = (0..block_configs.len()).map(|i| block_configs.get(i).iter().zip(&pos).map(|(&s, &p)| s as usize * st[p]).sum()).collect();
        let others: Vec<usize> = (0..dims.len()).filter(|k| !pos.contains(k)).collect();
        let n_other: usize = others.iter().map(|&k| dims[k]).product();
        let mut trips = Vec::with_capacity(n_other * op.nnz());
        let mut digits = vec![0usize; others.len()];
        for _ in 0..n_other {
            let base: usize = others.iter().zip(&digits).map(|(&k, &d)| d * st[k]).sum();
            for (i, j, v) in op.triplets() {
                trips.push((base + contrib[i], base + contrib[j], v));
            }
            for t in (0..others.len()).rev() {
                digits[t] += 1;
                if digits[t] < dims[others[t]] {
                    break;
                }
                digits[t] = 0;
            }
        }
        Ok(SiteOperator { rect: *outer, dims, mat: SpMat::from_triplets(n, n, trips) })
    }

    /// Plaquette projector `B_p` on a region, evaluated through the skein map of its four vertices.
    pub fn plaquette_projector(&self, r: &Rect, p: Site) -> Result<SiteOperator> {
        let block = Rect::new(p.0, p.1, p.0 + 1, p.1 + 1)?;
        if !r.contains(&block) {
            return Err(Error::Geometry(format!("plaquette {p:?} is not inside {r:?}")));
        }
        let sm = self.skein_map(&block)?;
        let proj = sm.projector().pruned(PRUNE);
        self.lift(&block, &proj, &sm.configs, r)
    }

    /// `p_Λ = ∏ A_ℓ ∏ B_p`.
    pub fn region_projector(&self, r: &Rect) -> Result<SiteOperator> {
        let n = self.full_dim(r)?;
        let mut acc = SiteOperator { rect: *r, dims: self.dims(r), mat: SpMat::identity(n) };
        for e in self.edges(r) {
            acc = acc.product(&self.edge_projector(r, e)?);
        }
        for p in self.plaquettes(r) {
            acc = acc.product(&self.plaquette_projector(r, p)?);
        }
        acc.mat = acc.mat.pruned(PRUNE);
        Ok(acc)
    }

    /// Skein map of a region with its checks: coisometry, `V†V = p_Λ`, rank.
    pub fn skein_identification(&self, r: &Rect, tol: f64) -> Result<(SkeinMap, Report)> {
        let sm = self.skein_map(r)?;
        let mut rep = Report::new("skein_identification", tol);
        rep.push(Item::residual("coisometry", sm.coisometry_residual(), tol));
        let oracle = self.skein_dim(r)?;
        rep.push(Item::int_eq("skein_dim", oracle as i64, sm.dim() as i64));
        if self.full_dim(r).is_ok() {
            let p = self.region_projector(r)?;
            let rank = p.trace().re;
            rep.push(Item::real_eq("rank", oracle as f64, rank, tol).and_residual(p.projector_residual(), tol));
            let vv = sm.projector();
            let g: Vec<usize> = (0..sm.configs.len()).map(|i| sm.configs.global(i)).collect();
            let restricted = SpMat::from_dense(&p.mat.submatrix(&g, &g), PRUNE);
            rep.push(Item::residual("lemma", (&restricted - &vv).max_abs(), tol));
        }
        Ok((sm, rep))
    }

    /// Word of the legs crossing the shared top side, module strand included.
    pub fn cut_word(&self, lam: &Rect, side: Side) -> Result<Word> {
        if side != Side::Top {
            return Err(Error::Geometry("gluing is implemented along the top side".to_string()));
        }
        if self.is_module_region(lam) {
            Ok(self.frontier_word(true, lam.width() - 1))
        } else {
            Ok(self.frontier_word(false, lam.width()))
        }
    }

    /// `Γ_φ` in the skein coordinates of `sm`; `φ` acts on the first legs of the outgoing word.
    pub fn gluing_skein(&self, sm: &SkeinMap, phi: &Morphism) -> Result<CMat> {
        if !phi.is_endo() {
            return Err(Error::Shape("gluing needs an endomorphism".to_string()));
        }
        let emb = self.engine.embed(phi, &sm.out_space, 0)?;
        if emb.cod().word() != sm.out_space.word() {
            return Err(Error::Shape("gluing morphism does not match the cut".to_string()));
        }
        let e = emb.to_sparse(PRUNE);
        let s = sm.dim();
        let mut g = CMat::zeros(s, s);
        for k in 0..s {
            let (i, j) = sm.decode(k);
            for (i2, i0, v) in e.triplets() {
                if i0 == i {
                    g[(sm.coord(i2, j), k)] += v;
                }
            }
        }
        Ok(g)
    }

    /// `Γ_φ = V†(φ ⊗ 1)V` as an operator on the region.
    pub fn gluing_operator(&self, lam: &Rect, phi: &Morphism) -> Result<SiteOperator> {
        let sm = self.skein_map(lam)?;
        let g = SpMat::from_dense(&self.gluing_skein(&sm, phi)?, PRUNE);
        let lat = &(&sm.v.adjoint() * &g) * &sm.v;
        let n = self.full_dim(lam)?;
        let trips: Vec<_> = lat.triplets().map(|(i, j, v)| (sm.configs.global(i), sm.configs.global(j), v)).collect();
        Ok(SiteOperator { rect: *lam, dims: self.dims(lam), mat: SpMat::from_triplets(n, n, trips) })
    }

    /// Compression of `Λ` into a containing rectangle.
    fn compression(&self, lam: &SkeinMap, target: &Rect) -> Result<Compression> {
        let win = self.skein_map(target)?;
        Compression::new(lam, &win)
    }

    /// Boundary algebra of `Λ ⋐ Δ` (or `Λ ⋐^∂ Δ`) solved from its defining commutation relations.
    ///
    /// The relations `[x, p_{Δ'}] = 0` are imposed on the window `Λ` plus its
    /// one-vertex collar inside `Δ`, which is the same for every enlargement
    /// `Δ'` of the family.
    pub fn extract_boundary_algebra(&self, lam: &Rect, delta: &Rect, tol: f64) -> Result<BoundaryAlgebra> {
        self.check_rect(lam)?;
        self.check_rect(delta)?;
        let rel = surround(lam, delta, self.lattice.boundary).ok_or_else(|| Error::Geometry(format!("{lam:?} is not surrounded by {delta:?}")))?;
        let side = rel.cut_side().ok_or_else(|| Error::Geometry("extraction needs a cut".to_string()))?;
        let window = lam.expand(1).intersect(delta).expect("window inside delta");
        let family = surrounding_family(lam, delta, self.lattice.boundary);
        let lam_map = self.skein_map(lam)?;
        let comp = self.compression(&lam_map, &window)?;
        let s = comp.s;
        let k3 = comp.gram();
        let rho = comp.rho();
        let n = s * s;
        let mut k = k3.scale_re(-2.0);
        for b in 0..s {
            for a in 0..s {
                for c in 0..s {
                    let v = rho[(c, a)];
                    if v != ZERO {
                        k[(b * s + a, b * s + c)] += v;
                        k[(c * s + b, a * s + b)] += v;
                    }
                }
            }
        }
        let scale = 1.0 + k.max_abs();
        let (kernel, gap) = psd_kernel(&k, tol * scale);
        let basis: Vec<CMat> = kernel.iter().map(|v| CMat::from_rows(s, s, v.clone())).collect();
        let dim = basis.len();
        // comparison with the gluing operators
        let cut = self.cut_word(lam, side)?;
        let cut_space = self.engine.space(&cut)?;
        let units = self.engine.matrix_units(&cut_space, &cut_space)?;
        let gl: Vec<CMat> = units.iter().map(|u| self.gluing_skein(&lam_map, u)).collect::<Result<_>>()?;
        let gmat = CMat::from_fn(n, gl.len(), |i, j| gl[j].data()[i]);
        let gspan = column_span(&gmat, 1e-9);
        let bmat = CMat::from_fn(n, dim, |i, j| kernel[j][i]);
        let gluing_distance = if gspan.cols() == dim { subspace_distance(&gspan, &bmat) } else { f64::INFINITY };
        // compression data
        let compression_rank = psd_rank(&k3, tol * (1.0 + k3.max_abs()));
        let restricted = &(&bmat.adjoint() * &k3) * &bmat;
        let injectivity_gap = if dim == 0 { 0.0 } else { eigh(&restricted).0[0] };
        let center_dim = center_dimension(&basis, tol);
        let mm = cut.is_module();
        let reference = block_algebra(&cut_space, |r| if mm { format!("m{r}") } else { self.category().label(r).to_string() });
        Ok(BoundaryAlgebra {
            lam: *lam,
            delta: *delta,
            window,
            relation: rel,
            family,
            skein_dim: s,
            basis,
            center_dim,
            reference,
            gluing_distance,
            commutant_gap: gap,
            compression_rank,
            injectivity_gap,
        })
    }

    /// Compression target: `Δ` itself when within the sparse cap, else the collar window.
    fn compression_target(&self, lam: &Rect, delta: &Rect) -> Result<(Rect, bool)> {
        if self.matched_count(delta, self.limits.sparse)? <= self.limits.sparse {
            Ok((*delta, true))
        } else {
            Ok((lam.expand(1).intersect(delta).expect("window inside delta"), false))
        }
    }

    /// `ψ(a)` and `‖p_Δ a p_Δ − ψ(a) p_Δ‖` for an operator on `⊗_{v ∈ Λ} ℋ_v`.
    pub fn compressed_state(&self, lam: &Rect, delta: &Rect, a: &SpMat) -> Result<(C64, f64)> {
        let lam_map = self.skein_map(lam)?;
        let n = self.full_dim(lam)?;
        if a.rows() != n || a.cols() != n {
            return Err(Error::Shape(format!("operator of size {} on a space of dimension {n}", a.rows())));
        }
        let g: Vec<usize> = (0..lam_map.configs.len()).map(|i| lam_map.configs.global(i)).collect();
        let am = SpMat::from_dense(&a.submatrix(&g, &g), PRUNE);
        let y = (&(&lam_map.v * &am) * &lam_map.v.adjoint()).to_dense();
        let (target, _) = self.compression_target(lam, delta)?;
        let comp = self.compression(&lam_map, &target)?;
        Ok(comp.scalar_residual(&comp.apply(&y)))
    }

    /// Bulk or boundary LTO axiom for one geometry.
    pub fn lto_check(&self, case: &LtoCase, tol: f64) -> Result<Report> {
        let b = self.lattice.boundary;
        let mut rep = Report::new(&format!("lto{}", case.axiom), tol);
        for r in [Some(case.lam), Some(case.delta), case.lam2, case.delta2].into_iter().flatten() {
            self.check_rect(&r)?;
        }
        let rel = surround(&case.lam, &case.delta, b);
        match case.axiom {
            1 => {
                let rel = rel.filter(Surround::is_complete).ok_or_else(|| Error::Geometry("axiom 1 needs complete surrounding".to_string()))?;
                let (target, direct) = self.compression_target(&case.lam, &case.delta)?;
                let lam_map = self.skein_map(&case.lam)?;
                let comp = self.compression(&lam_map, &target)?;
                let out = comp.lto1(&lam_map, case.lam.len() <= 2, self.full_dim(&case.lam).unwrap_or(usize::MAX));
                let kind = if rel == Surround::Complete { "bulk" } else { "boundary" };
                let note = format!("{kind}; spanning set {} ({}); compressed into {}", out.spanning, out.basis_kind, if direct { "Δ" } else { "collar window" });
                rep.push(Item::residual("compression_scalar", out.residual, tol).with_note(&note).with_actual(Quantity::Int(out.spanning as i64)));
                rep.push(Item::real_eq("state_of_identity", 1.0, out.psi_identity, tol));
            }
            2 => {
                rel.and_then(|r| r.cut_side()).ok_or_else(|| Error::Geometry("axiom 2 needs a cut".to_string()))?;
                let ba = self.extract_boundary_algebra(&case.lam, &case.delta, tol)?;
                rep.absorb("boundary_algebra", ba.report(tol));
                let (target, direct) = self.compression_target(&case.lam, &case.delta)?;
                if direct {
                    let lam_map = self.skein_map(&case.lam)?;
                    let comp = self.compression(&lam_map, &target)?;
                    let k3 = comp.gram();
                    let r = psd_rank(&k3, tol * (1.0 + k3.max_abs()));
                    rep.push(Item::int_eq("compressed_dim_on_delta", ba.dim() as i64, r as i64));
                }
            }
            3 => {
                let lam2 = case.lam2.ok_or_else(|| Error::Geometry("axiom 3 needs a second region".to_string()))?;
                let r1 = rel.and_then(|r| r.cut_side()).ok_or_else(|| Error::Geometry("axiom 3 needs a cut".to_string()))?;
                let r2 = surround(&lam2, &case.delta, b).and_then(|r| r.cut_side());
                if !case.lam.contains(&case.lam) || !lam2.contains(&case.lam) || r2 != Some(r1) || case.lam.side_span(r1) != lam2.side_span(r1) {
                    return Err(Error::Geometry("axiom 3 needs Λ1 ⊂ Λ2 with the same cut".to_string()));
                }
                let b1 = self.extract_boundary_algebra(&case.lam, &case.delta, tol)?;
                let b2 = self.extract_boundary_algebra(&lam2, &case.delta, tol)?;
                let (target, _) = self.compression_target(&lam2, &case.delta)?;
                let m1 = self.skein_map(&case.lam)?;
                let m2 = self.skein_map(&lam2)?;
                let c1 = self.compression(&m1, &target)?;
                let c2 = self.compression(&m2, &target)?;
                let imgs: Vec<Vec<((usize, usize), C64)>> = b1.basis.iter().map(|x| c1.apply(x)).chain(b2.basis.iter().map(|x| c2.apply(x))).map(|m| m.into_iter().collect()).collect();
                let (d1, d2) = (b1.dim(), b2.dim());
                let (r1, r2, r12, dist) = span_comparison(&imgs, d1, tol);
                rep.push(Item::ints_eq("dims", vec![d1 as i64, d1 as i64, d1 as i64], vec![d2 as i64, r1.max(r2) as i64, r12 as i64]).and_residual(dist, tol));
            }
            4 => {
                let delta2 = case.delta2.ok_or_else(|| Error::Geometry("axiom 4 needs a second surrounding region".to_string()))?;
                let side = rel.and_then(|r| r.cut_side()).ok_or_else(|| Error::Geometry("axiom 4 needs a cut".to_string()))?;
                let rel2 = surround(&case.lam, &delta2, b);
                if !delta2.contains(&case.delta) || rel2.and_then(|r| r.cut_side()) != Some(side) || case.delta.side_span(side) != delta2.side_span(side) {
                    return Err(Error::Geometry("axiom 4 needs Δ1 ⊂ Δ2 with the same cut".to_string()));
                }
                let ba = self.extract_boundary_algebra(&case.lam, &case.delta, tol)?;
                let (target, direct) = self.compression_target(&case.lam, &delta2)?;
                let lam_map = self.skein_map(&case.lam)?;
                let comp = self.compression(&lam_map, &target)?;
                let k3 = comp.gram();
                let s = comp.s;
                let bmat = CMat::from_fn(s * s, ba.dim(), |i, j| ba.basis[j].data()[i]);
                let restricted = &(&bmat.adjoint() * &k3) * &bmat;
                let gap = if ba.dim() == 0 { 0.0 } else { eigh(&restricted).0[0] };
                let note = format!("compressed into {}", if direct { "Δ2" } else { "collar window" });
                rep.push(Item::check("injective", gap > tol).with_actual(Quantity::Real(gap)).with_note(&note));
                rep.push(Item::int_eq("boundary_dim", ba.reference.dim() as i64, ba.dim() as i64));
            }
            a => return Err(Error::Invalid(format!("unknown axiom {a}"))),
        }
        Ok(rep)
    }

    /// Default geometries of the four axioms inside this lattice.
    pub fn default_cases(&self, axioms: &[u8]) -> Result<Vec<LtoCase>> {
        default_cases(self.lattice, axioms)
    }

    /// Run the axioms on their default geometries.
    pub fn lto_suite(&self, axioms: &[u8], tol: f64) -> Result<Report> {
        let prefix = if self.lattice.boundary { "blto" } else { "lto" };
        let mut rep = Report::new(&format!("levin_wen.{prefix}"), tol);
        for case in self.default_cases(axioms)? {
            let r = self.lto_check(&case, tol)?;
            rep.absorb(&format!("{prefix}{}", case.axiom), r);
        }
        Ok(rep)
    }

    /// `‖B_p − (1 + ∏σ^X)/2‖` on matched configurations for a `ℤ/2` category.
    pub fn pauli_form_residual(&self, p: Site) -> Result<f64> {
        let cat = self.category();
        if cat.rank() != 2 || cat.dims().iter().any(|&d| (d - 1.0).abs() > 1e-12) || self.lattice.boundary {
            return Err(Error::Invalid("the Pauli form needs bulk Vec(ℤ/2) data".to_string()));
        }
        let block = Rect::new(p.0, p.1, p.0 + 1, p.1 + 1)?;
        let sm = self.skein_map(&block)?;
        let proj = sm.projector();
        let u = cat.unit();
        let flip = |a: usize| if a == u { 1 - u } else { u };
        let sp = &self.bulk;
        let n = sm.configs.len();
        let mut reference = Vec::new();
        for i in 0..n {
            let c = sm.configs.get(i);
            let s: Vec<&LocalState> = c.iter().map(|&k| &sp.states[k as usize]).collect();
            // vertices in order (p), (p + x), (p + y), (p + x + y)
            let f = [
                sp.find(s[0].west, s[0].south, flip(s[0].north), flip(s[0].east)),
                sp.find(s[1].west.map(flip), s[1].south, flip(s[1].north), s[1].east),
                sp.find(s[2].west, flip(s[2].south), s[2].north, flip(s[2].east)),
                sp.find(s[3].west.map(flip), flip(s[3].south), s[3].north, s[3].east),
            ];
            let dims = &sm.configs.dims;
            let st = strides(dims);
            let fl = f.iter().enumerate().map(|(k, x)| x.map(|x| x * st[k])).sum::<Option<usize>>().ok_or_else(|| Error::Invalid("flipped configuration missing".to_string()))?;
            let j = sm.configs.position(fl).ok_or_else(|| Error::Invalid("flipped configuration unmatched".to_string()))?;
            reference.push((i, i, re(0.5)));
            reference.push((j, i, re(0.5)));
        }
        let reference = SpMat::from_triplets(n, n, reference);
        Ok((&proj - &reference).max_abs())
    }
}

struct Sweep<'a> {
    lw: &'a LevinWen,
    spaces: Vec<&'a LocalSpace>,
    west: Vec<Option<usize>>,
    south: Vec<Option<usize>>,
    stage: Vec<(usize, usize)>,
    frontiers: BTreeMap<usize, Arc<PathSpace>>,
    embs: BTreeMap<EmbKey, Arc<SpMat>>,
    assign: Vec<u16>,
    states: Vec<u16>,
    trips: Vec<(usize, usize, C64)>,
    n_cols: usize,
    norm: f64,
    in_space: Arc<PathSpace>,
    out_space: Arc<PathSpace>,
    offsets: Vec<usize>,
}

impl Sweep<'_> {
    /// Transposed embedding of a vertex unit into the frontier.
    fn emb(&mut self, k: usize, i: usize) -> Result<Arc<SpMat>> {
        let (len, pos) = self.stage[k];
        let boundary = self.spaces[k].kind == VertexKind::Boundary;
        let key = (len, pos, boundary, i);
        if let Some(e) = self.embs.get(&key) {
            return Ok(e.clone());
        }
        let frontier = &self.frontiers[&len];
        let m = self.lw.engine.embed(self.spaces[k].unit(i), frontier, pos)?;
        let e = Arc::new(m.to_sparse(PRUNE).adjoint());
        self.embs.insert(key, e.clone());
        Ok(e)
    }

    fn descend(&mut self, k: usize, m: &[(u32, u32, C64)], scale: f64) -> Result<()> {
        if k == self.spaces.len() {
            let col = self.n_cols;
            self.n_cols += 1;
            self.states.extend_from_slice(&self.assign);
            for &(i, j, v) in m {
                let (i, j) = (i as usize, j as usize);
                let r = self.out_space.path(i).root();
                let (ro, ri) = (self.out_space.range(r), self.in_space.range(r));
                let coord = self.offsets[r] + (i - ro.start) * ri.len() + (j - ri.start);
                let ss = self.lw.engine.skein_scale(&self.in_space, &self.out_space, i, j);
                self.trips.push((coord, col, v * (scale * self.norm / ss)));
            }
            return Ok(());
        }
        let space = self.spaces[k];
        for i in 0..space.dim() {
            let st = &space.states[i];
            if !self.lw.consistent(&self.spaces, &self.assign, self.west[k], self.south[k], st) {
                continue;
            }
            self.assign[k] = i as u16;
            let next = if m.is_empty() {
                Vec::new()
            } else {
                let e = self.emb(k, i)?;
                let mut out = Vec::with_capacity(m.len());
                for &(r, c, v) in m {
                    for (r2, w) in e.row(r as usize) {
                        out.push((r2 as u32, c, w.conj() * v));
                    }
                }
                merge_triplets(out)
            };
            self.descend(k + 1, &next, scale * st.scale)?;
        }
        Ok(())
    }
}

fn merge_triplets(mut t: Vec<(u32, u32, C64)>) -> Vec<(u32, u32, C64)> {
    t.sort_unstable_by_key(|x| (x.0, x.1));
    let mut out: Vec<(u32, u32, C64)> = Vec::with_capacity(t.len());
    for (r, c, v) in t {
        match out.last_mut() {
            Some(last) if last.0 == r && last.1 == c => last.2 += v,
            _ => out.push((r, c, v)),
        }
    }
    out.retain(|x| x.2.norm() > PRUNE);
    out
}

/// `T = V_W (V_Λ† ⊗ 1)` split by the configuration of `W ∖ Λ`.
struct Compression {
    s: usize,
    t: usize,
    /// Entries `(k, a, T[k, (a, n)])` for every environment configuration `n`.
    groups: Vec<Vec<(usize, usize, C64)>>,
}

struct Lto1Outcome {
    residual: f64,
    spanning: usize,
    basis_kind: &'static str,
    psi_identity: f64,
}

impl Compression {
    fn new(lam: &SkeinMap, win: &SkeinMap) -> Result<Self> {
        if !win.rect.contains(&lam.rect) {
            return Err(Error::Geometry("compression target does not contain the region".to_string()));
        }
        let lsites = lam.rect.sites();
        let wsites = win.rect.sites();
        let pos: Vec<usize> = lsites.iter().map(|&s| win.rect.site_index(s).expect("inside")).collect();
        let others: Vec<usize> = (0..wsites.len()).filter(|k| !pos.contains(k)).collect();
        let lst = strides(&lam.configs.dims);
        let vwt = win.v.adjoint();
        let vlt = lam.v.adjoint();
        let mut env: BTreeMap<Vec<u16>, usize> = BTreeMap::new();
        let mut groups: Vec<Vec<(usize, usize, C64)>> = Vec::new();
        for c in 0..win.configs.len() {
            let conf = win.configs.get(c);
            let lg: usize = pos.iter().zip(&lst).map(|(&p, &s)| conf[p] as usize * s).sum();
            let li = lam.configs.position(lg).ok_or_else(|| Error::Invalid("restriction of a matched configuration is unmatched".to_string()))?;
            let key: Vec<u16> = others.iter().map(|&k| conf[k]).collect();
            let next = env.len();
            let n = *env.entry(key).or_insert(next);
            if n == groups.len() {
                groups.push(Vec::new());
            }
            for (k, vw) in vwt.row(c) {
                for (a, vl) in vlt.row(li) {
                    groups[n].push((k, a, vw.conj() * vl));
                }
            }
        }
        for g in groups.iter_mut() {
            g.sort_unstable_by_key(|x| (x.0, x.1));
            let mut out: Vec<(usize, usize, C64)> = Vec::with_capacity(g.len());
            for &(k, a, v) in g.iter() {
                match out.last_mut() {
                    Some(last) if last.0 == k && last.1 == a => last.2 += v,
                    _ => out.push((k, a, v)),
                }
            }
            out.retain(|x| x.2.norm() > PRUNE);
            *g = out;
        }
        Ok(Self { s: lam.dim(), t: win.dim(), groups })
    }

    /// `Φ(y) = Σ_n T_n y T_n†`.
    fn apply(&self, y: &CMat) -> BTreeMap<(usize, usize), C64> {
        let mut out = BTreeMap::new();
        for g in &self.groups {
            for &(k, a, v) in g {
                for &(l, b, w) in g {
                    let yab = y[(a, b)];
                    if yab != ZERO {
                        *out.entry((k, l)).or_insert(ZERO) += v * yab * w.conj();
                    }
                }
            }
        }
        out
    }

    /// `Φ(|u⟩⟨w|)` for vectors in skein coordinates.
    fn apply_rank_one(&self, u: &[(usize, C64)], w: &[(usize, C64)]) -> BTreeMap<(usize, usize), C64> {
        let mut out = BTreeMap::new();
        let mut tu: Vec<(usize, C64)> = Vec::new();
        let mut tw: Vec<(usize, C64)> = Vec::new();
        for g in &self.groups {
            tu.clear();
            tw.clear();
            for &(k, a, v) in g {
                for &(b, x) in u {
                    if a == b {
                        tu.push((k, v * x));
                    }
                }
                for &(b, x) in w {
                    if a == b {
                        tw.push((k, v * x));
                    }
                }
            }
            for &(k, x) in &tu {
                for &(l, y) in &tw {
                    *out.entry((k, l)).or_insert(ZERO) += x * y.conj();
                }
            }
        }
        out
    }

    /// `ρ = Σ_n T_n† T_n`.
    fn rho(&self) -> CMat {
        let mut r = CMat::zeros(self.s, self.s);
        for g in &self.groups {
            for &(k, a, v) in g {
                for &(l, c, w) in g {
                    if k == l {
                        r[(a, c)] += v.conj() * w;
                    }
                }
            }
        }
        r
    }

    /// Gram form `y ↦ ‖Φ(y)‖²` on row-major vectorized `y`.
    fn gram(&self) -> CMat {
        let s = self.s;
        let mut m: BTreeMap<(usize, usize), Vec<(usize, C64)>> = BTreeMap::new();
        for g in &self.groups {
            for &(k, a, v) in g {
                for &(l, b, w) in g {
                    m.entry((k, l)).or_default().push((a * s + b, v * w.conj()));
                }
            }
        }
        let mut k3 = CMat::zeros(s * s, s * s);
        for (_, mut vec) in m {
            vec.sort_unstable_by_key(|x| x.0);
            let mut merged: Vec<(usize, C64)> = Vec::with_capacity(vec.len());
            for (p, v) in vec {
                match merged.last_mut() {
                    Some(last) if last.0 == p => last.1 += v,
                    _ => merged.push((p, v)),
                }
            }
            for &(p, x) in &merged {
                for &(q, y) in &merged {
                    k3[(p, q)] += x.conj() * y;
                }
            }
        }
        k3
    }

    fn scalar_residual(&self, phi: &BTreeMap<(usize, usize), C64>) -> (C64, f64) {
        let tr: C64 = phi.iter().filter(|((k, l), _)| k == l).map(|(_, v)| *v).sum();
        let psi = tr / self.t as f64;
        let mut res: f64 = 0.0;
        let mut diag = 0;
        for (&(k, l), &v) in phi {
            if k == l {
                diag += 1;
                res = res.max((v - psi).norm());
            } else {
                res = res.max(v.norm());
            }
        }
        if diag < self.t {
            res = res.max(psi.norm());
        }
        (psi, res)
    }

    /// `Φ(a) = ψ(a)·1` over lattice matrix units (or skein matrix units).
    fn lto1(&self, lam: &SkeinMap, lattice_units: bool, full_dim: usize) -> Lto1Outcome {
        let mut residual: f64 = 0.0;
        let spanning;
        let basis_kind;
        if lattice_units {
            let vlt = lam.v.adjoint();
            let cols: Vec<Vec<(usize, C64)>> = (0..lam.configs.len()).map(|i| vlt.row(i).map(|(a, v)| (a, v.conj())).collect()).collect();
            for u in &cols {
                for w in &cols {
                    let phi = self.apply_rank_one(u, w);
                    residual = residual.max(self.scalar_residual(&phi).1);
                }
            }
            spanning = full_dim.saturating_mul(full_dim);
            basis_kind = "lattice matrix units; unmatched units compress to zero";
        } else {
            for a in 0..self.s {
                for b in 0..self.s {
                    let phi = self.apply_rank_one(&[(a, ONE)], &[(b, ONE)]);
                    residual = residual.max(self.scalar_residual(&phi).1);
                }
            }
            spanning = self.s * self.s;
            basis_kind = "skein matrix units of the compressed algebra";
        }
        let id = self.apply(&CMat::identity(self.s));
        let psi_identity = self.scalar_residual(&id).0.re;
        Lto1Outcome { residual, spanning, basis_kind, psi_identity }
    }
}

/// Connected components of the sparsity graph of a square matrix.
fn components(m: &CMat) -> Vec<Vec<usize>> {
    let n = m.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for (j, v) in m.row(i).iter().enumerate() {
            if j > i && v.norm() > PRUNE {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Kernel of a positive semidefinite matrix, blockwise; returns the vectors and the smallest kept-out eigenvalue.
fn psd_kernel(m: &CMat, tol: f64) -> (Vec<Vec<C64>>, f64) {
    let n = m.rows();
    let mut out = Vec::new();
    let mut gap = f64::INFINITY;
    for comp in components(m) {
        let sub = m.submatrix(&comp, &comp);
        let (vals, vecs) = eigh(&sub);
        for (j, &l) in vals.iter().enumerate() {
            if l.abs() <= tol {
                let mut v = vec![ZERO; n];
                for (a, &i) in comp.iter().enumerate() {
                    v[i] = vecs[(a, j)];
                }
                out.push(v);
            } else {
                gap = gap.min(l);
            }
        }
    }
    (out, gap)
}

fn psd_rank(m: &CMat, tol: f64) -> usize {
    components(m)
        .iter()
        .map(|comp| {
            let sub = m.submatrix(comp, comp);
            eigh(&sub).0.iter().filter(|&&l| l > tol).count()
        })
        .sum()
}

/// Dimension of the center of the span of `basis` (assumed to be an algebra).
fn center_dimension(basis: &[CMat], tol: f64) -> usize {
    let d = basis.len();
    if d == 0 {
        return 0;
    }
    let n = basis[0].rows() * basis[0].cols();
    let mut rows = CMat::zeros(d * n, d);
    for i in 0..d {
        for j in 0..d {
            let c = basis[j].commutator(&basis[i]);
            for (k, v) in c.data().iter().enumerate() {
                rows[(i * n + k, j)] = *v;
            }
        }
    }
    null_space(&rows, tol.max(1e-9)).cols()
}

/// Ranks of two families of sparse operators and of their union, with the subspace distance.
fn span_comparison(imgs: &[Vec<((usize, usize), C64)>], split: usize, tol: f64) -> (usize, usize, usize, f64) {
    let m = imgs.len();
    let maps: Vec<BTreeMap<(usize, usize), C64>> = imgs.iter().map(|v| v.iter().cloned().collect()).collect();
    let g = CMat::from_fn(m, m, |i, j| {
        let (a, b) = (&maps[i], &maps[j]);
        a.iter().filter_map(|(k, x)| b.get(k).map(|y| x.conj() * y)).sum()
    });
    let rk = |idx: &[usize]| {
        let sub = g.submatrix(idx, idx);
        eigh(&sub).0.iter().filter(|&&l| l > tol).count()
    };
    let first: Vec<usize> = (0..split).collect();
    let second: Vec<usize> = (split..m).collect();
    let all: Vec<usize> = (0..m).collect();
    let (r1, r2, r12) = (rk(&first), rk(&second), rk(&all));
    // coordinates in an orthonormal basis of the joint span
    let (vals, vecs) = eigh(&g);
    let keep: Vec<usize> = (0..m).filter(|&j| vals[j] > tol).collect();
    let coords = CMat::from_fn(keep.len(), m, |a, i| {
        let j = keep[a];
        let mut acc = ZERO;
        for l in 0..m {
            acc += vecs[(l, j)].conj() * g[(l, i)];
        }
        acc / vals[j].sqrt()
    });
    let c1 = column_span(&coords.submatrix(&(0..keep.len()).collect::<Vec<_>>(), &first), 1e-9);
    let c2 = column_span(&coords.submatrix(&(0..keep.len()).collect::<Vec<_>>(), &second), 1e-9);
    let dist = if c1.cols() == c2.cols() { subspace_distance(&c1, &c2) } else { f64::INFINITY };
    (r1, r2, r12, dist)
}

/// Boundary algebra extracted from the commutation relations, in skein coordinates of `Λ`.
#[derive(Clone, Debug)]
pub struct BoundaryAlgebra {
    pub lam: Rect,
    pub delta: Rect,
    pub window: Rect,
    pub relation: Surround,
    /// `Δ` and its admissible enlargements.
    pub family: Vec<Rect>,
    pub skein_dim: usize,
    /// Orthonormal basis of the algebra.
    pub basis: Vec<CMat>,
    pub center_dim: usize,
    /// Block structure of the endomorphisms of the cut.
    pub reference: BlockAlgebra,
    /// Distance between the extracted span and the span of gluing operators.
    pub gluing_distance: f64,
    /// Smallest nonzero eigenvalue of the commutation form.
    pub commutant_gap: f64,
    /// Dimension of the compression of all of `p_Λ 𝔄(Λ) p_Λ`.
    pub compression_rank: usize,
    /// Smallest eigenvalue of the compression form on the algebra.
    pub injectivity_gap: f64,
}

impl BoundaryAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn report(&self, tol: f64) -> Report {
        let mut rep = Report::new("boundary_algebra", tol);
        rep.push(Item::int_eq("dim", self.reference.dim() as i64, self.dim() as i64).with_note(&format!("window {:?}, {} surrounding regions", self.window, self.family.len())));
        rep.push(Item::int_eq("center_dim", self.reference.center_dim() as i64, self.center_dim as i64));
        rep.push(Item::residual("gluing_span", self.gluing_distance, tol));
        rep.push(Item::int_eq("compressed_dim", self.dim() as i64, self.compression_rank as i64));
        rep.push(Item::check("injective", self.injectivity_gap > tol).with_actual(Quantity::Real(self.injectivity_gap)));
        rep
    }
}

/// One geometry for an LTO axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LtoCase {
    pub axiom: u8,
    pub lam: Rect,
    pub delta: Rect,
    /// Larger region for axiom 3.
    pub lam2: Option<Rect>,
    /// Larger surrounding region for axiom 4.
    pub delta2: Option<Rect>,
}

/// Smallest geometries of the four axioms, placed at the lower left of the lattice.
pub fn default_cases(lattice: LwLattice, axioms: &[u8]) -> Result<Vec<LtoCase>> {
    let r = |x0, y0, x1, y1| Rect { x0, y0, x1, y1 };
    let mut out = Vec::new();
    for &a in axioms {
        let case = match (a, lattice.boundary) {
            (1, false) => LtoCase { axiom: 1, lam: r(1, 1, 1, 1), delta: r(0, 0, 2, 2), lam2: None, delta2: None },
            (2, false) => LtoCase { axiom: 2, lam: r(1, 2, 2, 2), delta: r(0, 0, 3, 2), lam2: None, delta2: None },
            (3, false) => LtoCase { axiom: 3, lam: r(1, 2, 1, 2), delta: r(0, 0, 2, 2), lam2: Some(r(1, 1, 1, 2)), delta2: None },
            (4, false) => LtoCase { axiom: 4, lam: r(1, 3, 1, 3), delta: r(0, 1, 2, 3), lam2: None, delta2: Some(r(0, 0, 2, 3)) },
            (1, true) => LtoCase { axiom: 1, lam: r(0, 1, 0, 1), delta: r(0, 0, 2, 2), lam2: None, delta2: None },
            (2, true) => LtoCase { axiom: 2, lam: r(0, 2, 1, 2), delta: r(0, 0, 2, 2), lam2: None, delta2: None },
            (3, true) => LtoCase { axiom: 3, lam: r(0, 2, 1, 2), delta: r(0, 0, 2, 2), lam2: Some(r(0, 1, 1, 2)), delta2: None },
            (4, true) => LtoCase { axiom: 4, lam: r(0, 3, 1, 3), delta: r(0, 1, 2, 3), lam2: None, delta2: Some(r(0, 0, 2, 3)) },
            _ => return Err(Error::Invalid(format!("unknown axiom {a}"))),
        };
        for rect in [Some(case.lam), Some(case.delta), case.lam2, case.delta2].into_iter().flatten() {
            if !lattice.contains(&rect) {
                return Err(Error::Geometry(format!("axiom {a} needs {rect:?} inside the lattice")));
            }
        }
        out.push(case);
    }
    Ok(out)
}
