//! Toric code in the stabilizer formalism.
//!
//! Qubits sit on the edges of the square lattice. Stars are `Z`-type and
//! plaquettes `X`-type, so the computational basis of an edge matches the
//! `Vec(ℤ/2)` string-net label. A vertex rectangle owns the edges with both
//! ends inside it. The lattice boundary is the column `x = 0`: a smooth
//! boundary keeps the vertices there with three-edge stars, a rough boundary
//! removes them and keeps the horizontal edges `(0, y) → (1, y)` as dangling
//! edges, giving three-edge plaquettes.
//!
//! Pauli strings are `X^x Z^z` over a frame of at most 64 edges. For a
//! stabilizer projector `p_Δ`, `p_Δ P p_Δ` vanishes unless `P` commutes with
//! every generator and equals `p_Δ` when `P` lies in the stabilizer group.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // float methods for no_std builds
use num_traits::Float;

use crate::braided::Site;
use crate::error::{Error, Result};
use crate::levin_wen::{surround, surrounding_family, Edge, LtoCase, Rect, Surround};
use crate::report::{Item, Quantity, Report};

/// Largest number of edges of `Λ` enumerated for the complete Pauli basis.
pub const MAX_ENUMERATED_EDGES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliBoundary {
    /// No lattice boundary.
    Bulk,
    Smooth,
    Rough,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GeneratorKind {
    Star,
    Plaquette,
}

/// Stabilizer generator: `∏Z` over a star or `∏X` over a plaquette.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub site: Site,
    pub edges: Vec<Edge>,
}

/// Pauli string `X^x Z^z` on the edges of a frame.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    fn packed(&self) -> u128 {
        self.x as u128 | (self.z as u128) << 64
    }

    /// Vector whose parity with `packed` is the commutation sign.
    fn dual(&self) -> u128 {
        self.z as u128 | (self.x as u128) << 64
    }
}

/// Ordered list of edges giving bit positions.
#[derive(Clone, Debug)]
pub struct Frame {
    edges: Vec<Edge>,
    index: BTreeMap<Edge, usize>,
}

impl Frame {
    pub fn new(edges: Vec<Edge>) -> Result<Self> {
        if edges.len() > 64 {
            return Err(Error::Resource(format!("{} edges exceed the 64-qubit frame", edges.len())));
        }
        let index = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        Ok(Self { edges, index })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn position(&self, e: &Edge) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Bit mask of the edges lying in the frame.
    pub fn mask(&self, edges: &[Edge]) -> u64 {
        edges.iter().filter_map(|e| self.position(e)).fold(0, |m, i| m | 1 << i)
    }

    pub fn contains_all(&self, edges: &[Edge]) -> bool {
        edges.iter().all(|e| self.index.contains_key(e))
    }

    /// The generator as a Pauli string restricted to the frame.
    pub fn pauli(&self, g: &Generator) -> PauliString {
        let m = self.mask(&g.edges);
        match g.kind {
            GeneratorKind::Star => PauliString { x: 0, z: m },
            GeneratorKind::Plaquette => PauliString { x: m, z: 0 },
        }
    }
}

/// Row echelon basis over GF(2).
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(u32, u128)>,
}

impl Echelon {
    fn reduce(&self, mut v: u128) -> u128 {
        for &(p, r) in &self.rows {
            if v >> p & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    fn insert(&mut self, v: u128) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        self.rows.push((127 - v.leading_zeros(), v));
        true
    }

    fn contains(&self, v: u128) -> bool {
        self.reduce(v) == 0
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn from_vectors(vs: impl IntoIterator<Item = u128>) -> Self {
        let mut e = Self::default();
        for v in vs {
            e.insert(v);
        }
        e
    }
}

/// Vectors supported on `vars` with even overlap with every constraint.
fn kernel(constraints: &[u128], vars: u128) -> Vec<u128> {
    let mut rows: Vec<(u32, u128)> = Vec::new();
    for &c in constraints {
        let mut v = c & vars;
        for &(p, r) in &rows {
            if v >> p & 1 == 1 {
                v ^= r;
            }
        }
        if v == 0 {
            continue;
        }
        let p = v.trailing_zeros();
        for row in rows.iter_mut() {
            if row.1 >> p & 1 == 1 {
                row.1 ^= v;
            }
        }
        rows.push((p, v));
    }
    let pivots = rows.iter().fold(0u128, |m, r| m | 1 << r.0);
    let mut free = vars & !pivots;
    let mut out = Vec::new();
    while free != 0 {
        let f = free.trailing_zeros();
        free &= free - 1;
        let mut v = 1u128 << f;
        for &(p, r) in &rows {
            if r >> f & 1 == 1 {
                v |= 1 << p;
            }
        }
        out.push(v);
    }
    out
}

/// Outcome of compressing one Pauli string.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Compressed {
    /// `ψ(P) = tr(p P p)/tr p`.
    pub state: f64,
    /// `‖p P p − ψ(P) p‖`.
    pub residual: f64,
}

/// Toric code on vertices `[0, width] × [0, height]`.
#[derive(Clone, Debug)]
pub struct ToricCode {
    pub width: i32,
    pub height: i32,
    pub boundary: PauliBoundary,
    dropped: Vec<Site>,
}

impl ToricCode {
    /// Lattice of `width × height` plaquettes.
    pub fn new(width: i32, height: i32, boundary: PauliBoundary) -> Self {
        Self { width, height, boundary, dropped: Vec::new() }
    }

    /// The same code with the star at `s` removed from every projector.
    pub fn without_star(mut self, s: Site) -> Self {
        self.dropped.push(s);
        self
    }

    pub fn rect(&self) -> Rect {
        Rect { x0: 0, y0: 0, x1: self.width, y1: self.height }
    }

    fn has_boundary(&self) -> bool {
        self.boundary != PauliBoundary::Bulk
    }

    fn edge_exists(&self, e: &Edge) -> bool {
        if self.boundary == PauliBoundary::Bulk {
            return true;
        }
        if e.x < 0 {
            return false;
        }
        match self.boundary {
            PauliBoundary::Rough => !(e.north && e.x == 0),
            _ => true,
        }
    }

    /// Edges with both ends in a vertex rectangle.
    pub fn edges(&self, r: &Rect) -> Vec<Edge> {
        let mut out = Vec::new();
        for y in r.y0..=r.y1 {
            for x in r.x0..=r.x1 {
                for e in [Edge { x, y, north: false }, Edge { x, y, north: true }] {
                    let (_, b) = e.ends();
                    if r.contains_site(b) && self.edge_exists(&e) {
                        out.push(e);
                    }
                }
            }
        }
        out
    }

    pub fn star(&self, v: Site) -> Option<Generator> {
        let (x, y) = v;
        if self.dropped.contains(&v) || (self.has_boundary() && x < 0) || (self.boundary == PauliBoundary::Rough && x == 0) {
            return None;
        }
        let edges: Vec<Edge> = [Edge { x: x - 1, y, north: false }, Edge { x, y, north: false }, Edge { x, y: y - 1, north: true }, Edge { x, y, north: true }]
            .into_iter()
            .filter(|e| !self.has_boundary() || self.edge_exists(e))
            .collect();
        Some(Generator { kind: GeneratorKind::Star, site: v, edges })
    }

    pub fn plaquette(&self, p: Site) -> Option<Generator> {
        let (x, y) = p;
        if self.has_boundary() && x < 0 {
            return None;
        }
        let edges: Vec<Edge> = [Edge { x, y, north: false }, Edge { x, y: y + 1, north: false }, Edge { x, y, north: true }, Edge { x: x + 1, y, north: true }]
            .into_iter()
            .filter(|e| !self.has_boundary() || self.edge_exists(e))
            .collect();
        Some(Generator { kind: GeneratorKind::Plaquette, site: p, edges })
    }

    /// Generators supported in `E(Δ)`.
    pub fn generators(&self, delta: &Rect) -> Vec<Generator> {
        let own: alloc::collections::BTreeSet<Edge> = self.edges(delta).into_iter().collect();
        let mut out = Vec::new();
        for y in delta.y0..=delta.y1 {
            for x in delta.x0..=delta.x1 {
                for g in [self.star((x, y)), self.plaquette((x, y))].into_iter().flatten() {
                    if !g.edges.is_empty() && g.edges.iter().all(|e| own.contains(e)) {
                        out.push(g);
                    }
                }
            }
        }
        out
    }

    fn check_rect(&self, r: &Rect) -> Result<()> {
        if !self.rect().contains(r) {
            return Err(Error::Geometry(format!("{r:?} leaves the lattice")));
        }
        Ok(())
    }

    pub fn frame(&self, r: &Rect) -> Result<Frame> {
        Frame::new(self.edges(r))
    }

    fn stabilizer_span(&self, frame: &Frame, delta: &Rect) -> Echelon {
        Echelon::from_vectors(self.generators(delta).iter().map(|g| frame.pauli(g).packed()))
    }

    fn lam_vars(&self, frame: &Frame, lam: &Rect) -> u128 {
        let m = frame.mask(&self.edges(lam)) as u128;
        m | m << 64
    }

    /// Paulis on `E(Λ)` commuting with every generator of every region listed.
    fn centralizer(&self, frame: &Frame, lam: &Rect, deltas: &[Rect]) -> Vec<u128> {
        let mut cons = Vec::new();
        for d in deltas {
            for g in self.generators(d) {
                cons.push(frame.pauli(&g).dual());
            }
        }
        kernel(&cons, self.lam_vars(frame, lam))
    }

    /// `p_Δ P p_Δ` for a Pauli string on the frame of `Δ`.
    pub fn compress(&self, delta: &Rect, p: &PauliString) -> Result<Compressed> {
        let frame = self.frame(delta)?;
        let gens = self.generators(delta);
        if gens.iter().any(|g| !frame.pauli(g).commutes(p)) {
            return Ok(Compressed { state: 0.0, residual: 0.0 });
        }
        if self.stabilizer_span(&frame, delta).contains(p.packed()) {
            Ok(Compressed { state: 1.0, residual: 0.0 })
        } else {
            Ok(Compressed { state: 0.0, residual: 1.0 })
        }
    }

    /// Pauli string of a generator in the frame of `Δ`.
    pub fn generator_string(&self, delta: &Rect, g: &Generator) -> Result<PauliString> {
        let frame = self.frame(delta)?;
        if !frame.contains_all(&g.edges) {
            return Err(Error::Geometry("generator leaves the frame".to_string()));
        }
        Ok(frame.pauli(g))
    }

    /// Single-edge Pauli in the frame of `Δ`.
    pub fn edge_string(&self, delta: &Rect, e: Edge, x: bool, z: bool) -> Result<PauliString> {
        let frame = self.frame(delta)?;
        let i = frame.position(&e).ok_or_else(|| Error::Geometry(format!("{e:?} is not an edge of {delta:?}")))?;
        Ok(PauliString { x: if x { 1 << i } else { 0 }, z: if z { 1 << i } else { 0 } })
    }

    /// `p_Δ P p_Δ = ψ(P) p_Δ` over all `4^{|E(Λ)|}` Pauli strings on `Λ`.
    pub fn lto1(&self, lam: &Rect, delta: &Rect, tol: f64) -> Result<Report> {
        let frame = self.frame(delta)?;
        let bits: Vec<usize> = self.edges(lam).iter().map(|e| frame.position(e).expect("Λ inside Δ")).collect();
        let n = bits.len();
        if n > MAX_ENUMERATED_EDGES {
            return Err(Error::Resource(format!("{n} edges exceed the enumeration limit {MAX_ENUMERATED_EDGES}")));
        }
        let gens: Vec<PauliString> = self.generators(delta).iter().map(|g| frame.pauli(g)).collect();
        if gens.len() > 128 {
            return Err(Error::Resource("more than 128 generators".to_string()));
        }
        let span = Echelon::from_vectors(gens.iter().map(PauliString::packed));
        let masks: Vec<u64> = (0..1usize << n).map(|s| bits.iter().enumerate().filter(|(k, _)| s >> k & 1 == 1).fold(0, |m, (_, &b)| m | 1 << b)).collect();
        // syndromes of the X and Z parts separately
        let syn = |part: &dyn Fn(&PauliString) -> u64, m: u64| -> u128 { gens.iter().enumerate().fold(0, |acc, (j, g)| acc | (((part(g) & m).count_ones() % 2) as u128) << j) };
        let sx: Vec<u128> = masks.iter().map(|&m| syn(&|g| g.z, m)).collect();
        let sz: Vec<u128> = masks.iter().map(|&m| syn(&|g| g.x, m)).collect();
        let (mut commuting, mut stabilizer, mut failing) = (0u64, 0u64, 0u64);
        for (i, &x) in masks.iter().enumerate() {
            for (j, &z) in masks.iter().enumerate() {
                if sx[i] != sz[j] {
                    continue;
                }
                commuting += 1;
                if span.contains(PauliString { x, z }.packed()) {
                    stabilizer += 1;
                } else {
                    failing += 1;
                }
            }
        }
        let total = 1u64 << (2 * n);
        let residual = if failing > 0 { 1.0 } else { 0.0 };
        let mut rep = Report::new("lto1", tol);
        rep.push(
            Item::residual("compression_scalar", residual, tol)
                .with_actual(Quantity::Ints(vec![total as i64, commuting as i64, stabilizer as i64, failing as i64]))
                .with_note("spanning set, commuting, in stabilizer group, not proportional"),
        );
        let id = self.compress(delta, &PauliString::identity())?;
        rep.push(Item::real_eq("state_of_identity", 1.0, id.state, tol));
        Ok(rep)
    }

    /// `log₂ dim` of `span{P p_Δ : P ∈ C}`.
    fn compressed_log_dim(&self, c: &[u128], span: &Echelon) -> usize {
        let mut e = span.clone();
        for &v in c {
            e.insert(v);
        }
        e.rank() - span.rank()
    }

    /// `log₂` of the dimension of `𝔅(Λ ⋐ Δ)·p_Δ`.
    pub fn boundary_log_dim(&self, lam: &Rect, delta: &Rect) -> Result<usize> {
        let frame = self.frame(delta)?;
        let family = surrounding_family(lam, delta, self.has_boundary());
        let c = self.centralizer(&frame, lam, &family);
        Ok(self.compressed_log_dim(&c, &self.stabilizer_span(&frame, delta)))
    }

    /// Bulk or boundary axiom for one geometry.
    pub fn lto_check(&self, case: &LtoCase, tol: f64) -> Result<Report> {
        let b = self.has_boundary();
        for r in [Some(case.lam), Some(case.delta), case.lam2, case.delta2].into_iter().flatten() {
            self.check_rect(&r)?;
        }
        let rel = surround(&case.lam, &case.delta, b);
        let cut = rel.and_then(|r| r.cut_side());
        let mut rep = Report::new(&format!("lto{}", case.axiom), tol);
        match case.axiom {
            1 => {
                rel.filter(Surround::is_complete).ok_or_else(|| Error::Geometry("axiom 1 needs complete surrounding".to_string()))?;
                rep.items = self.lto1(&case.lam, &case.delta, tol)?.items;
            }
            2 => {
                cut.ok_or_else(|| Error::Geometry("axiom 2 needs a cut".to_string()))?;
                let frame = self.frame(&case.delta)?;
                let span = self.stabilizer_span(&frame, &case.delta);
                let family = surrounding_family(&case.lam, &case.delta, b);
                let c_delta = self.centralizer(&frame, &case.lam, &[case.delta]);
                let c_all = self.centralizer(&frame, &case.lam, &family);
                let mut joint = span.clone();
                for &v in &c_all {
                    joint.insert(v);
                }
                let missing = c_delta.iter().filter(|&&v| !joint.contains(v)).count();
                rep.push(Item::int_eq("inclusion", 0, missing as i64).with_note("compressed operators outside the boundary algebra"));
                let d = self.compressed_log_dim(&c_all, &span);
                rep.push(Item::check("boundary_dim", true).with_actual(Quantity::Int(1 << d)));
            }
            3 => {
                let lam2 = case.lam2.ok_or_else(|| Error::Geometry("axiom 3 needs a second region".to_string()))?;
                let side = cut.ok_or_else(|| Error::Geometry("axiom 3 needs a cut".to_string()))?;
                if !lam2.contains(&case.lam) || surround(&lam2, &case.delta, b).and_then(|r| r.cut_side()) != Some(side) || lam2.side_span(side) != case.lam.side_span(side) {
                    return Err(Error::Geometry("axiom 3 needs Λ1 ⊂ Λ2 with the same cut".to_string()));
                }
                let frame = self.frame(&case.delta)?;
                let span = self.stabilizer_span(&frame, &case.delta);
                let family = surrounding_family(&case.lam, &case.delta, b);
                let family2 = surrounding_family(&lam2, &case.delta, b);
                let c1 = self.centralizer(&frame, &case.lam, &family);
                let c2 = self.centralizer(&frame, &lam2, &family2);
                let s1 = Echelon::from_vectors(span.rows.iter().map(|r| r.1).chain(c1.iter().copied()));
                let s2 = Echelon::from_vectors(span.rows.iter().map(|r| r.1).chain(c2.iter().copied()));
                let equal = s1.rank() == s2.rank() && c1.iter().all(|&v| s2.contains(v));
                let (d1, d2) = (s1.rank() - span.rank(), s2.rank() - span.rank());
                rep.push(Item::check("spans_equal", equal).with_actual(Quantity::Ints(vec![1 << d1, 1 << d2])));
            }
            4 => {
                let delta2 = case.delta2.ok_or_else(|| Error::Geometry("axiom 4 needs a second surrounding region".to_string()))?;
                let side = cut.ok_or_else(|| Error::Geometry("axiom 4 needs a cut".to_string()))?;
                if !delta2.contains(&case.delta) || surround(&case.lam, &delta2, b).and_then(|r| r.cut_side()) != Some(side) || delta2.side_span(side) != case.delta.side_span(side) {
                    return Err(Error::Geometry("axiom 4 needs Δ1 ⊂ Δ2 with the same cut".to_string()));
                }
                let frame = self.frame(&delta2)?;
                let family = surrounding_family(&case.lam, &case.delta, b);
                let c = self.centralizer(&frame, &case.lam, &family);
                let d1 = self.compressed_log_dim(&c, &self.stabilizer_span(&frame, &case.delta));
                let d2 = self.compressed_log_dim(&c, &self.stabilizer_span(&frame, &delta2));
                rep.push(Item::int_eq("injective", 1 << d1, 1 << d2).with_note("dimension under Δ1 and under Δ2"));
            }
            a => return Err(Error::Invalid(format!("unknown axiom {a}"))),
        }
        Ok(rep)
    }

    /// Default geometries: one-plaquette and two-by-two regions inside four-by-four.
    pub fn default_cases(&self, axioms: &[u8]) -> Result<Vec<LtoCase>> {
        let r = |x0, y0, x1, y1| Rect { x0, y0, x1, y1 };
        let case = |axiom, lam, delta, lam2, delta2| LtoCase { axiom, lam, delta, lam2, delta2 };
        let mut out = Vec::new();
        for &a in axioms {
            let cases = match (a, self.has_boundary()) {
                (1, false) => vec![case(1, r(1, 1, 2, 2), r(0, 0, 3, 3), None, None), case(1, r(1, 1, 3, 3), r(0, 0, 4, 4), None, None)],
                (2, false) => vec![case(2, r(1, 2, 3, 3), r(0, 0, 4, 3), None, None), case(2, r(1, 2, 3, 4), r(0, 0, 4, 4), None, None)],
                (3, false) => vec![case(3, r(1, 2, 3, 3), r(0, 0, 4, 3), Some(r(1, 1, 3, 3)), None)],
                (4, false) => vec![case(4, r(1, 3, 3, 4), r(0, 1, 4, 4), None, Some(r(0, 0, 4, 4)))],
                (1, true) => vec![case(1, r(0, 1, 1, 2), r(0, 0, 3, 3), None, None), case(1, r(0, 1, 2, 3), r(0, 0, 3, 4), None, None)],
                (2, true) => vec![case(2, r(0, 2, 2, 3), r(0, 0, 3, 3), None, None), case(2, r(0, 2, 2, 4), r(0, 0, 3, 4), None, None)],
                (3, true) => vec![case(3, r(0, 2, 2, 3), r(0, 0, 3, 3), Some(r(0, 1, 2, 3)), None)],
                (4, true) => vec![case(4, r(0, 3, 2, 4), r(0, 1, 3, 4), None, Some(r(0, 0, 3, 4)))],
                _ => return Err(Error::Invalid(format!("unknown axiom {a}"))),
            };
            for c in cases {
                for rect in [Some(c.lam), Some(c.delta), c.lam2, c.delta2].into_iter().flatten() {
                    if !self.rect().contains(&rect) {
                        return Err(Error::Geometry(format!("axiom {a} needs {rect:?} inside the lattice")));
                    }
                }
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Run the axioms on their default geometries.
    pub fn lto_suite(&self, axioms: &[u8], tol: f64) -> Result<Report> {
        let prefix = if self.has_boundary() { "blto" } else { "lto" };
        let mut rep = Report::new(&format!("toric_pauli.{prefix}"), tol);
        for (k, case) in self.default_cases(axioms)?.iter().enumerate() {
            let r = self.lto_check(case, tol)?;
            rep.absorb(&format!("{prefix}{}.{k}", case.axiom), r);
        }
        Ok(rep)
    }

    /// Dimension of the code of an open vertex patch whose boundary legs are dangling qubits.
    ///
    /// Every vertex of the patch carries its full star.
    pub fn open_patch_dim(r: &Rect) -> Result<u64> {
        let grown = r.expand(1);
        let code = ToricCode::new(grown.x1 + 1, grown.y1 + 1, PauliBoundary::Bulk);
        let edges: Vec<Edge> = code.edges(&grown).into_iter().filter(|e| {
            let (a, b) = e.ends();
            r.contains_site(a) || r.contains_site(b)
        }).collect();
        let n = edges.len();
        let frame = Frame::new(edges)?;
        let mut gens: Vec<Generator> = r.sites().iter().filter_map(|&s| code.star(s)).collect();
        for y in r.y0..r.y1 {
            for x in r.x0..r.x1 {
                gens.extend(code.plaquette((x, y)));
            }
        }
        let span = Echelon::from_vectors(gens.iter().map(|g| frame.pauli(g).packed()));
        Ok(1u64 << (n - span.rank()))
    }
}

/// Compare the stabilizer backend with the `Vec(ℤ/2)` string-net model on shared quantities.
pub fn backend_agreement(tol: f64) -> Result<Report> {
    use crate::category::{vec_over_zn, vec_zn, ModuleCategory};
    use crate::levin_wen::{LevinWen, LwLattice};
    use crate::linalg::{re, SpMat};

    let cat = vec_zn(2);
    let u = cat.unit();
    let lw = LevinWen::new(&cat, LwLattice { width: 5, height: 5, boundary: false })?;
    let mut rep = Report::new("backend_agreement", tol);
    let r = |x0, y0, x1, y1| Rect { x0, y0, x1, y1 };

    for patch in [r(0, 0, 1, 1), r(0, 0, 1, 2)] {
        let rank = lw.skein_map(&patch)?.projector().trace().re.round() as i64;
        let code = ToricCode::open_patch_dim(&patch)? as i64;
        rep.push(Item::int_eq(&format!("patch_rank/{}x{}", patch.width(), patch.height()), code, rank));
    }
    let full = lw.region_projector(&r(0, 0, 1, 1))?.trace().re;
    rep.push(Item::real_eq("patch_rank/2x2_projector", ToricCode::open_patch_dim(&r(0, 0, 1, 1))? as f64, full, tol));
    rep.push(Item::residual("plaquette_form", lw.pauli_form_residual((1, 1))?, tol));

    // state values: identity, a single Z, a star
    let sp = lw.bulk_space();
    let parity = |a: usize| if a == u { 1.0 } else { -1.0 };
    let z_north: Vec<_> = sp.states.iter().map(|s| re(parity(s.north))).collect();
    let star: Vec<_> = sp.states.iter().map(|s| re(parity(s.north) * parity(s.east) * parity(s.south) * s.west.map_or(1.0, parity))).collect();
    let (lam, delta) = (Rect::site(1, 1), r(0, 0, 2, 2));
    let mut cat_states = Vec::new();
    for (name, op) in [("identity", SpMat::identity(sp.dim())), ("z", SpMat::diag(&z_north)), ("star", SpMat::diag(&star))] {
        let (psi, res) = lw.compressed_state(&lam, &delta, &op)?;
        rep.push(Item::residual(&format!("categorical_compression/{name}"), res, tol));
        cat_states.push(psi.re);
    }
    let code = ToricCode::new(4, 4, PauliBoundary::Bulk);
    let pd = r(0, 0, 4, 4);
    let e = Edge { x: 2, y: 2, north: true };
    let star_g = code.star((2, 2)).expect("bulk star");
    let mut pauli_states = Vec::new();
    for p in [PauliString::identity(), code.edge_string(&pd, e, false, true)?, code.generator_string(&pd, &star_g)?] {
        pauli_states.push(code.compress(&pd, &p)?.state);
    }
    let dist = cat_states.iter().zip(&pauli_states).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    rep.push(Item::residual("state_values", dist, tol).with_actual(Quantity::Reals(cat_states)).with_expected(Quantity::Reals(pauli_states)));

    // boundary algebra of a two-leg cut
    let ba = lw.extract_boundary_algebra(&r(1, 2, 2, 2), &r(0, 0, 3, 2), tol)?;
    let pauli_dim = 1i64 << code.boundary_log_dim(&r(1, 2, 3, 3), &r(0, 0, 4, 3))?;
    rep.push(Item::int_eq("boundary_dim", pauli_dim, ba.dim() as i64));

    // axiom verdicts, bulk and both boundary types
    let axioms = [1, 2, 3, 4];
    let verdict = |b: bool| if b { 1 } else { 0 };
    let vec_mod = vec_over_zn(&cat, 2).normalize_trace(&cat, &[1])?;
    let reg_mod = ModuleCategory::regular(&cat).normalize_trace(&cat, &[1, 1])?;
    let blat = LwLattice { width: 4, height: 5, boundary: true };
    let cat_verdicts = vec![
        verdict(lw.lto_suite(&axioms, tol)?.passed()),
        verdict(LevinWen::with_module(&cat, &vec_mod, blat)?.lto_suite(&axioms, tol)?.passed()),
        verdict(LevinWen::with_module(&cat, &reg_mod, blat)?.lto_suite(&axioms, tol)?.passed()),
    ];
    let pauli_verdicts = vec![
        verdict(code.lto_suite(&axioms, tol)?.passed()),
        verdict(ToricCode::new(4, 4, PauliBoundary::Rough).lto_suite(&axioms, tol)?.passed()),
        verdict(ToricCode::new(4, 4, PauliBoundary::Smooth).lto_suite(&axioms, tol)?.passed()),
    ];
    rep.push(Item::ints_eq("verdicts", pauli_verdicts, cat_verdicts).with_note("bulk, module Vec vs rough, regular module vs smooth"));
    Ok(rep)
}
