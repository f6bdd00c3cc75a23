//! Static categorical input: fusion rings, F/R-symbols, quantum dimensions,
//! module categories and central functors.

mod builtin;
mod central;
mod doc;
mod module;
pub(crate) mod validate;

pub use builtin::{
    builtin, builtin_category, builtin_module, fib_center, fibonacci, ising, toric_center, toric_flux_charge, vec_over_zn,
    vec_zn, Builtin, BUILTIN_NAMES,
};
pub use central::CentralFunctor;
pub use doc::{ActionEntry, CategoryDoc, ComplexEntry, DimEntry, FEntry, FusionEntry, LEntry, ModuleDoc, RDocEntry, SimpleDoc};
pub use module::ModuleCategory;
pub use validate::{
    f_unitarity_residual, hexagon_residual, module_residuals, pentagon_residual, residuals, validate_axioms, validate_module,
    CategoryResiduals,
};

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};

/// Fusion category data in the multiplicity-free convention.
///
/// F-symbols follow the splitting-tree convention
/// `|((ab)_e c)_d> = sum_f F^{abc}_d[e,f] |(a(bc)_f)_d>`, and R-symbols act on
/// splitting vertices. A single unit object is supported.
#[derive(Clone, Debug)]
pub struct FusionCategory {
    name: String,
    labels: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    fusion: Vec<u8>,
    f: Vec<C64>,
    r: Option<Vec<C64>>,
    dims: Vec<f64>,
}

impl FusionCategory {
    /// Assemble a category from a fusion table and symbol functions.
    ///
    /// `fusion[a][b]` lists the channels of `a⊗b`. Symbol functions are only
    /// queried on admissible indices. Quantum dimensions are computed.
    pub fn from_fn(
        name: &str,
        labels: &[&str],
        unit: usize,
        fusion: impl Fn(usize, usize, usize) -> u8,
        f: impl Fn([usize; 6]) -> C64,
        r: Option<&dyn Fn(usize, usize, usize) -> C64>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut table = vec![0u8; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    table[(a * n + b) * n + c] = fusion(a, b, c);
                }
            }
        }
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let dual = dual_from_table(&table, n, unit, &labels)?;
        let mut cat = Self {
            name: name.to_string(),
            labels,
            unit,
            dual,
            fusion: table,
            f: Vec::new(),
            r: None,
            dims: vec![1.0; n],
        };
        cat.check_ring()?;
        let mut fs = vec![ZERO; n.pow(6)];
        for idx in cat.f_tuples() {
            fs[cat.f_index(idx)] = f(idx);
        }
        cat.f = fs;
        if let Some(rf) = r {
            let mut rs = vec![ZERO; n * n * n];
            for a in 0..n {
                for b in 0..n {
                    for c in cat.channels(a, b) {
                        rs[(a * n + b) * n + c] = rf(a, b, c);
                    }
                }
            }
            cat.r = Some(rs);
        }
        cat.dims = quantum_dims_of(&cat)?;
        Ok(cat)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == id).ok_or_else(|| Error::UnknownLabel(id.to_string()))
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    pub fn n(&self, a: usize, b: usize, c: usize) -> u8 {
        let n = self.rank();
        self.fusion[(a * n + b) * n + c]
    }

    pub fn adm(&self, a: usize, b: usize, c: usize) -> bool {
        self.n(a, b, c) > 0
    }

    /// Simple summands of `a⊗b`.
    pub fn channels(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rank()).filter(move |&c| self.adm(a, b, c))
    }

    fn f_index(&self, [a, b, c, d, e, f]: [usize; 6]) -> usize {
        let n = self.rank();
        ((((a * n + b) * n + c) * n + d) * n + e) * n + f
    }

    /// `F^{abc}_d[e,f]`; zero on inadmissible tuples.
    pub fn f(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> C64 {
        self.f[self.f_index([a, b, c, d, e, f])]
    }

    /// Copy with a single F entry overwritten; used for perturbation checks.
    pub fn with_f_entry(&self, idx: [usize; 6], value: C64) -> Self {
        let mut out = self.clone();
        let k = out.f_index(idx);
        out.f[k] = value;
        out
    }

    /// All admissible tuples `(a,b,c,d,e,f)`.
    pub fn f_tuples(&self) -> Vec<[usize; 6]> {
        let n = self.rank();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for e in self.channels(a, b) {
                            if !self.adm(e, c, d) {
                                continue;
                            }
                            for f in self.channels(b, c) {
                                if self.adm(a, f, d) {
                                    out.push([a, b, c, d, e, f]);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_braided(&self) -> bool {
        self.r.is_some()
    }

    /// `R^{ab}_c`; panics when no braiding is present.
    pub fn r(&self, a: usize, b: usize, c: usize) -> C64 {
        let n = self.rank();
        self.r.as_ref().expect("category carries no braiding")[(a * n + b) * n + c]
    }

    pub fn dim(&self, a: usize) -> f64 {
        self.dims[a]
    }

    pub fn dims(&self) -> &[f64] {
        &self.dims
    }

    /// `D = sum_a d_a^2`.
    pub fn global_dim(&self) -> f64 {
        self.dims.iter().map(|d| d * d).sum()
    }

    /// Phase `κ_a = d_a F^{a ā a}_a[1,1]` relating the two snake identities.
    pub fn fs_phase(&self, a: usize) -> C64 {
        let ad = self.dual(a);
        self.f(a, ad, a, a, self.unit, self.unit) * self.dim(a)
    }

    /// Replace the braiding, e.g. by the trivial symmetric one.
    pub fn with_braiding(&self, name: &str, r: impl Fn(usize, usize, usize) -> C64) -> Self {
        let n = self.rank();
        let mut rs = vec![ZERO; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in self.channels(a, b) {
                    rs[(a * n + b) * n + c] = r(a, b, c);
                }
            }
        }
        let mut out = self.clone();
        out.name = name.to_string();
        out.r = Some(rs);
        out
    }

    pub fn without_braiding(&self) -> Self {
        let mut out = self.clone();
        out.r = None;
        out
    }

    /// Same category with the tensor product reversed.
    ///
    /// `F^{rev,abc}_d[e,f] = conj(F^{cba}_d[f,e])`; the braiding of `a` past
    /// `b` becomes the original braiding of `b` past `a`.
    pub fn reversed(&self) -> Self {
        let n = self.rank();
        let mut out = self.clone();
        out.name = alloc::format!("{}_rev", self.name);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    out.fusion[(a * n + b) * n + c] = self.n(b, a, c);
                }
            }
        }
        let mut fs = vec![ZERO; n.pow(6)];
        for [a, b, c, d, e, f] in out.f_tuples() {
            fs[out.f_index([a, b, c, d, e, f])] = self.f(c, b, a, d, f, e).conj();
        }
        out.f = fs;
        if let Some(r) = &self.r {
            let mut rs = vec![ZERO; n * n * n];
            for a in 0..n {
                for b in 0..n {
                    for c in out.channels(a, b) {
                        rs[(a * n + b) * n + c] = r[(b * n + a) * n + c];
                    }
                }
            }
            out.r = Some(rs);
        }
        out
    }

    /// Deligne product `self ⊠ other`; simple `(i,j)` has index `i·m + j`.
    pub fn deligne(&self, other: &Self, name: &str) -> Result<Self> {
        let m = other.rank();
        let labels: Vec<String> =
            (0..self.rank() * m).map(|k| alloc::format!("({},{})", self.label(k / m), other.label(k % m))).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let split = |k: usize| (k / m, k % m);
        let r_fn = |a: usize, b: usize, c: usize| {
            let (a1, a2) = split(a);
            let (b1, b2) = split(b);
            let (c1, c2) = split(c);
            self.r(a1, b1, c1) * other.r(a2, b2, c2)
        };
        let braided = self.is_braided() && other.is_braided();
        FusionCategory::from_fn(
            name,
            &refs,
            self.unit * m + other.unit,
            |a, b, c| {
                let ((a1, a2), (b1, b2), (c1, c2)) = (split(a), split(b), split(c));
                self.n(a1, b1, c1) * other.n(a2, b2, c2)
            },
            |[a, b, c, d, e, f]| {
                let (s, t) = (split, split);
                let ((a1, a2), (b1, b2), (c1, c2), (d1, d2), (e1, e2), (f1, f2)) =
                    (s(a), s(b), s(c), s(d), t(e), t(f));
                self.f(a1, b1, c1, d1, e1, f1) * other.f(a2, b2, c2, d2, e2, f2)
            },
            if braided { Some(&r_fn) } else { None },
        )
    }

    /// Category with complex-conjugated symbols (the mirror category).
    pub fn conjugate(&self, name: &str) -> Self {
        let mut out = self.clone();
        out.name = name.to_string();
        out.f.iter_mut().for_each(|z| *z = z.conj());
        if let Some(r) = out.r.as_mut() {
            r.iter_mut().for_each(|z| *z = z.conj());
        }
        out
    }

    /// Fusion multiplicity of `c` in the formal sum `xs ⊗ ys`.
    pub fn fuse_sets(&self, xs: &[usize], ys: &[usize]) -> Vec<usize> {
        let mut out = vec![0usize; self.rank()];
        for &x in xs {
            for &y in ys {
                for c in self.channels(x, y) {
                    out[c] += 1;
                }
            }
        }
        out
    }

    fn check_ring(&self) -> Result<()> {
        let n = self.rank();
        let u = self.unit;
        for a in 0..n {
            for b in 0..n {
                let expect = u8::from(a == b);
                if self.n(u, a, b) != expect || self.n(a, u, b) != expect {
                    return Err(Error::UnitAxiom(alloc::format!(
                        "unit fusion with '{}' does not return '{}'",
                        self.labels[a],
                        self.labels[a]
                    )));
                }
                for c in 0..n {
                    let m = self.n(a, b, c);
                    if m > 1 {
                        return Err(Error::Multiplicity {
                            a: self.labels[a].clone(),
                            b: self.labels[b].clone(),
                            c: self.labels[c].clone(),
                            mult: m as u32,
                        });
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let lhs: u32 = (0..n).map(|e| self.n(a, b, e) as u32 * self.n(e, c, d) as u32).sum();
                        let rhs: u32 = (0..n).map(|f| self.n(b, c, f) as u32 * self.n(a, f, d) as u32).sum();
                        if lhs != rhs {
                            return Err(Error::NonAssociative);
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn dual_from_table(table: &[u8], n: usize, unit: usize, labels: &[String]) -> Result<Vec<usize>> {
    let mut dual = vec![usize::MAX; n];
    for a in 0..n {
        let cands: Vec<usize> = (0..n).filter(|&b| table[(a * n + b) * n + unit] > 0).collect();
        if cands.len() != 1 {
            return Err(Error::UnitAxiom(alloc::format!("'{}' has {} duals", labels[a], cands.len())));
        }
        dual[a] = cands[0];
    }
    if (0..n).any(|a| dual[dual[a]] != a) {
        return Err(Error::NonInvolutiveDual);
    }
    Ok(dual)
}

/// Perron-Frobenius dimensions: the positive eigenvector of `sum_a N_a`.
pub fn quantum_dims_of(cat: &FusionCategory) -> Result<Vec<f64>> {
    let n = cat.rank();
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                m[(b, c)] += cat.n(a, b, c) as f64;
            }
        }
    }
    let sym = (&m + m.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    let top = (0..n).max_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap()).unwrap_or(0);
    let mut v: Vec<f64> = (0..n).map(|i| eig.eigenvectors[(i, top)]).collect();
    let s = v[cat.unit];
    if s.abs() < 1e-300 {
        return Err(Error::Invalid("fusion matrix has no Perron-Frobenius vector".to_string()));
    }
    v.iter_mut().for_each(|x| *x /= s);
    // polish with the character relation d_a d_b = sum_c N d_c
    for _ in 0..4 {
        let lam: f64 = v.iter().sum();
        let next: Vec<f64> = (0..n).map(|b| (0..n).map(|c| m[(b, c)] * v[c]).sum::<f64>() / lam).collect();
        let s = next[cat.unit];
        v = next.into_iter().map(|x| x / s).collect();
    }
    if v.iter().any(|&x| x < 1.0 - 1e-9) {
        return Err(Error::Invalid("quantum dimensions below one".to_string()));
    }
    Ok(v)
}

/// Largest violation of `d_a d_b = sum_c N[a][b][c] d_c`.
pub fn character_residual(cat: &FusionCategory, dims: &[f64]) -> f64 {
    let n = cat.rank();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let rhs: f64 = cat.channels(a, b).map(|c| dims[c]).sum();
            worst = worst.max((dims[a] * dims[b] - rhs).abs());
        }
    }
    worst
}

/// Gauge value of F when one of the three upper indices is the unit: each such
/// F-matrix is 1×1 and equal to one.
pub(crate) fn unit_gauge_default(cat_unit: usize, [a, b, c, _d, _e, _f]: [usize; 6]) -> Option<C64> {
    (a == cat_unit || b == cat_unit || c == cat_unit).then_some(ONE)
}
