use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::FusionCategory;
use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};

/// Right module category `ℳ` over a fusion category, multiplicity-free.
///
/// Mixed associator convention:
/// `|((m◁a)_h ◁ b)_p> = sum_c L^{mab}_p[h,c] |(m◁(ab)_c)_p>`.
#[derive(Clone, Debug)]
pub struct ModuleCategory {
    name: String,
    labels: Vec<String>,
    ncat: usize,
    action: Vec<u8>,
    l: Vec<C64>,
    dims: Vec<f64>,
}

impl ModuleCategory {
    /// Build from an action table and an L-symbol function.
    ///
    /// Without explicit dims, the positive solution of
    /// `d_m d_a = sum_p N[m][a][p] d_p` with smallest entry one is used.
    pub fn from_fn(
        name: &str,
        labels: &[&str],
        cat: &FusionCategory,
        action: impl Fn(usize, usize, usize) -> u8,
        l: impl Fn([usize; 6]) -> C64,
        dims: Option<Vec<f64>>,
    ) -> Result<Self> {
        let k = labels.len();
        let n = cat.rank();
        let mut table = vec![0u8; k * n * k];
        for m in 0..k {
            for a in 0..n {
                for p in 0..k {
                    let v = action(m, a, p);
                    if v > 1 {
                        return Err(Error::Multiplicity {
                            a: labels[m].to_string(),
                            b: cat.label(a).to_string(),
                            c: labels[p].to_string(),
                            mult: v as u32,
                        });
                    }
                    table[(m * n + a) * k + p] = v;
                }
            }
        }
        let mut out = Self {
            name: name.to_string(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            ncat: n,
            action: table,
            l: Vec::new(),
            dims: vec![1.0; k],
        };
        let u = cat.unit();
        for m in 0..k {
            for p in 0..k {
                if out.acts(m, u, p) != (m == p) {
                    return Err(Error::UnitAxiom(alloc::format!("unit action on module simple '{}'", labels[m])));
                }
            }
        }
        for m in 0..k {
            for a in 0..n {
                for b in 0..n {
                    for p in 0..k {
                        let lhs: u32 = (0..k).map(|h| out.nm(m, a, h) as u32 * out.nm(h, b, p) as u32).sum();
                        let rhs: u32 = (0..n).map(|c| cat.n(a, b, c) as u32 * out.nm(m, c, p) as u32).sum();
                        if lhs != rhs {
                            return Err(Error::NonAssociative);
                        }
                    }
                }
            }
        }
        let mut ls = vec![ZERO; k * n * n * k * k * n];
        for idx in out.l_tuples(cat) {
            ls[out.l_index(idx)] = l(idx);
        }
        out.l = ls;
        out.dims = match dims {
            Some(d) => {
                if d.len() != k || d.iter().any(|&x| !(x > 0.0)) {
                    return Err(Error::Schema("module trace dims must be positive, one per simple".to_string()));
                }
                d
            }
            None => module_dims(&out, cat),
        };
        Ok(out)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, m: usize) -> &str {
        &self.labels[m]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == id).ok_or_else(|| Error::UnknownLabel(id.to_string()))
    }

    pub fn category_rank(&self) -> usize {
        self.ncat
    }

    fn nm(&self, m: usize, a: usize, p: usize) -> u8 {
        self.action[(m * self.ncat + a) * self.rank() + p]
    }

    /// Whether `p` occurs in `m◁a`.
    pub fn acts(&self, m: usize, a: usize, p: usize) -> bool {
        self.nm(m, a, p) > 0
    }

    pub fn channels(&self, m: usize, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rank()).filter(move |&p| self.acts(m, a, p))
    }

    fn l_index(&self, [m, a, b, p, h, c]: [usize; 6]) -> usize {
        let (k, n) = (self.rank(), self.ncat);
        ((((m * n + a) * n + b) * k + p) * k + h) * n + c
    }

    /// `L^{mab}_p[h,c]`.
    pub fn l(&self, m: usize, a: usize, b: usize, p: usize, h: usize, c: usize) -> C64 {
        self.l[self.l_index([m, a, b, p, h, c])]
    }

    pub fn l_tuples(&self, cat: &FusionCategory) -> Vec<[usize; 6]> {
        let (k, n) = (self.rank(), self.ncat);
        let mut out = Vec::new();
        for m in 0..k {
            for a in 0..n {
                for b in 0..n {
                    for p in 0..k {
                        for h in self.channels(m, a) {
                            if !self.acts(h, b, p) {
                                continue;
                            }
                            for c in cat.channels(a, b) {
                                if self.acts(m, c, p) {
                                    out.push([m, a, b, p, h, c]);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn dim(&self, m: usize) -> f64 {
        self.dims[m]
    }

    pub fn dims(&self) -> &[f64] {
        &self.dims
    }

    /// Connected components of the action graph (indecomposable summands).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let k = self.rank();
        let mut comp = vec![usize::MAX; k];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..k {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(m) = stack.pop() {
                members.push(m);
                for a in 0..self.ncat {
                    for p in self.channels(m, a).collect::<Vec<_>>() {
                        if comp[p] == usize::MAX {
                            comp[p] = id;
                            stack.push(p);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Closed `W`-loop in the dual category, one value per indecomposable
    /// summand: `d(W)·D / sum_m d_m²` restricted to the summand.
    ///
    /// `w[m]` is the multiplicity of the simple `m` in `W`.
    pub fn w_bubbles(&self, cat: &FusionCategory, w: &[usize]) -> Result<Vec<f64>> {
        if w.len() != self.rank() {
            return Err(Error::Shape("module object has wrong length".to_string()));
        }
        let big_d = cat.global_dim();
        self.components()
            .iter()
            .map(|comp| {
                let dw: f64 = comp.iter().map(|&m| w[m] as f64 * self.dims[m]).sum();
                if dw <= 0.0 {
                    return Err(Error::NonFaithfulTrace);
                }
                let norm: f64 = comp.iter().map(|&m| self.dims[m] * self.dims[m]).sum();
                Ok(dw * big_d / norm)
            })
            .collect()
    }

    /// Rescale the trace on each summand so that the `W`-bubble equals one.
    ///
    /// Summands whose bubble is already one up to rounding are left untouched,
    /// which makes the operation exactly idempotent.
    pub fn normalize_trace(&self, cat: &FusionCategory, w: &[usize]) -> Result<Self> {
        let bubbles = self.w_bubbles(cat, w)?;
        let mut out = self.clone();
        for (comp, b) in self.components().iter().zip(bubbles) {
            if (b - 1.0).abs() <= 1e-12 {
                continue;
            }
            for &m in comp {
                out.dims[m] = self.dims[m] * b;
            }
        }
        Ok(out)
    }

    /// Whether the `W`-bubble is one on every summand.
    pub fn is_normalized(&self, cat: &FusionCategory, w: &[usize], tol: f64) -> bool {
        self.w_bubbles(cat, w).map(|bs| bs.iter().all(|b| (b - 1.0).abs() <= tol)).unwrap_or(false)
    }

    pub fn with_dims(&self, dims: Vec<f64>) -> Self {
        let mut out = self.clone();
        out.dims = dims;
        out
    }

    /// The category acting on itself from the right, `L = F`.
    pub fn regular(cat: &FusionCategory) -> Self {
        let labels: Vec<&str> = cat.labels().iter().map(String::as_str).collect();
        Self::from_fn(
            &alloc::format!("regular:{}", cat.name()),
            &labels,
            cat,
            |m, a, p| cat.n(m, a, p),
            |[m, a, b, p, h, c]| cat.f(m, a, b, p, h, c),
            Some(cat.dims().to_vec()),
        )
        .expect("regular module of a valid category")
    }
}

/// Positive solution of the module dimension equations, smallest entry one on
/// each indecomposable summand.
fn module_dims(m: &ModuleCategory, cat: &FusionCategory) -> Vec<f64> {
    let mut out = vec![1.0; m.rank()];
    for comp in m.components() {
        let k = comp.len();
        let mut mat = nalgebra::DMatrix::<f64>::zeros(k, k);
        for a in 0..cat.rank() {
            for (i, &x) in comp.iter().enumerate() {
                for (j, &p) in comp.iter().enumerate() {
                    if m.acts(x, a, p) {
                        mat[(i, j)] += 1.0;
                    }
                }
            }
        }
        let sym = (&mat + mat.transpose()) * 0.5;
        let eig = nalgebra::SymmetricEigen::new(sym);
        let top = (0..k).max_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap()).unwrap_or(0);
        let v: Vec<f64> = (0..k).map(|i| eig.eigenvectors[(i, top)].abs()).collect();
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        for (i, &x) in comp.iter().enumerate() {
            out[x] = v[i] / min;
        }
    }
    out
}
