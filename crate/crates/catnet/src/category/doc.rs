//! JSON-shaped documents describing categories and module categories.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{unit_gauge_default, FusionCategory, ModuleCategory};
use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimpleDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "core::ops::Not::not")]
    pub unit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FusionEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub n: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexEntry {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub e: String,
    pub f: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RDocEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimEntry {
    pub id: String,
    pub value: f64,
}

/// Category-data document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub name: String,
    pub simples: Vec<SimpleDoc>,
    pub dual: BTreeMap<String, String>,
    pub fusion: Vec<FusionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<DimEntry>>,
    #[serde(rename = "F", default)]
    pub f: Vec<FEntry>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<RDocEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionEntry {
    pub m: String,
    pub a: String,
    pub n: String,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LEntry {
    pub m: String,
    pub a: String,
    pub b: String,
    pub p: String,
    pub h: String,
    pub c: String,
    pub re: f64,
    pub im: f64,
}

/// Module-category document over a named category.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub name: String,
    pub module_simples: Vec<String>,
    pub action: Vec<ActionEntry>,
    #[serde(rename = "L", default)]
    pub l: Vec<LEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_dims: Option<Vec<DimEntry>>,
}

fn lookup(ids: &[String], id: &str) -> Result<usize> {
    ids.iter().position(|x| x == id).ok_or_else(|| Error::Schema(alloc::format!("unknown simple '{id}'")))
}

fn is_single_entry(cat: &FusionCategory, [a, b, c, d, _, _]: [usize; 6]) -> bool {
    let es = cat.channels(a, b).filter(|&e| cat.adm(e, c, d)).count();
    let fs = cat.channels(b, c).filter(|&f| cat.adm(a, f, d)).count();
    es == 1 && fs == 1
}

impl CategoryDoc {
    /// Load, index and admissibility-filter the document.
    ///
    /// Omitted F entries default to one on 1×1 F-matrices (this covers the unit
    /// gauge) and to zero elsewhere.
    pub fn load(&self) -> Result<FusionCategory> {
        let ids: Vec<String> = self.simples.iter().map(|s| s.id.clone()).collect();
        for (i, id) in ids.iter().enumerate() {
            if ids[..i].contains(id) {
                return Err(Error::Schema(alloc::format!("duplicate simple '{id}'")));
            }
        }
        let units: Vec<usize> = (0..ids.len()).filter(|&i| self.simples[i].unit).collect();
        let unit = match units.as_slice() {
            [u] => *u,
            [] => return Err(Error::Schema("no unit simple".to_string())),
            _ => return Err(Error::Schema("several unit summands are not supported".to_string())),
        };
        let n = ids.len();
        let mut table = alloc::vec![0u32; n * n * n];
        for e in &self.fusion {
            let (a, b, c) = (lookup(&ids, &e.a)?, lookup(&ids, &e.b)?, lookup(&ids, &e.c)?);
            table[(a * n + b) * n + c] = e.n;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let m = table[(a * n + b) * n + c];
                    if m > 1 {
                        return Err(Error::Multiplicity { a: ids[a].clone(), b: ids[b].clone(), c: ids[c].clone(), mult: m });
                    }
                }
            }
        }
        for (k, v) in &self.dual {
            let (a, b) = (lookup(&ids, k)?, lookup(&ids, v)?);
            let back = self.dual.get(v).map(|s| lookup(&ids, s)).transpose()?;
            if back != Some(a) {
                return Err(Error::NonInvolutiveDual);
            }
            if table[(a * n + b) * n + unit] == 0 {
                return Err(Error::UnitAxiom(alloc::format!("'{}' ⊗ '{}' does not contain the unit", ids[a], ids[b])));
            }
        }
        let mut f_given: BTreeMap<[usize; 6], C64> = BTreeMap::new();
        for e in &self.f {
            let idx = [
                lookup(&ids, &e.a)?,
                lookup(&ids, &e.b)?,
                lookup(&ids, &e.c)?,
                lookup(&ids, &e.d)?,
                lookup(&ids, &e.e)?,
                lookup(&ids, &e.f)?,
            ];
            f_given.insert(idx, C64::new(e.re, e.im));
        }
        let mut r_given: BTreeMap<[usize; 3], C64> = BTreeMap::new();
        if let Some(rs) = &self.r {
            for e in rs {
                r_given.insert([lookup(&ids, &e.a)?, lookup(&ids, &e.b)?, lookup(&ids, &e.c)?], C64::new(e.re, e.im));
            }
        }
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let r_fn = |a: usize, b: usize, c: usize| r_given.get(&[a, b, c]).copied().unwrap_or(ZERO);
        let probe = FusionCategory::from_fn(&self.name, &refs, unit, |a, b, c| table[(a * n + b) * n + c] as u8, |_| ZERO, None)?;
        for (k, v) in &self.dual {
            if probe.dual(lookup(&ids, k)?) != lookup(&ids, v)? {
                return Err(Error::NonInvolutiveDual);
            }
        }
        let admissible: alloc::collections::BTreeSet<[usize; 6]> = probe.f_tuples().into_iter().collect();
        for (idx, v) in &f_given {
            if !admissible.contains(idx) && v.norm() > 0.0 {
                let names: Vec<&str> = idx.iter().map(|&i| ids[i].as_str()).collect();
                return Err(Error::Inadmissible(alloc::format!("F entry {names:?} on a forbidden tuple")));
            }
        }
        for ([a, b, c], v) in &r_given {
            if !probe.adm(*a, *b, *c) && v.norm() > 0.0 {
                return Err(Error::Inadmissible(alloc::format!("R entry ({},{};{}) on a forbidden triple", ids[*a], ids[*b], ids[*c])));
            }
        }
        let f_fn = |idx: [usize; 6]| {
            if let Some(v) = f_given.get(&idx) {
                *v
            } else if let Some(v) = unit_gauge_default(unit, idx) {
                v
            } else if is_single_entry(&probe, idx) {
                ONE
            } else {
                ZERO
            }
        };
        let mut cat = FusionCategory::from_fn(
            &self.name,
            &refs,
            unit,
            |a, b, c| table[(a * n + b) * n + c] as u8,
            f_fn,
            if self.r.is_some() { Some(&r_fn) } else { None },
        )?;
        if let Some(ds) = &self.dims {
            let mut dims = cat.dims().to_vec();
            for d in ds {
                dims[lookup(&ids, &d.id)?] = d.value;
            }
            if super::character_residual(&cat, &dims) > 1e-9 {
                return Err(Error::Schema("declared dims are not a fusion-ring character".to_string()));
            }
            cat.dims = dims;
        }
        Ok(cat)
    }

    /// Export a category, listing every admissible F and R entry.
    pub fn from_category(cat: &FusionCategory) -> Self {
        let id = |i: usize| cat.label(i).to_string();
        let n = cat.rank();
        let mut fusion = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in cat.channels(a, b) {
                    fusion.push(FusionEntry { a: id(a), b: id(b), c: id(c), n: 1 });
                }
            }
        }
        let f = cat
            .f_tuples()
            .into_iter()
            .map(|[a, b, c, d, e, f]| {
                let v = cat.f(a, b, c, d, e, f);
                FEntry { a: id(a), b: id(b), c: id(c), d: id(d), e: id(e), f: id(f), re: v.re, im: v.im }
            })
            .collect();
        let r = cat.is_braided().then(|| {
            let mut out = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    for c in cat.channels(a, b) {
                        let v = cat.r(a, b, c);
                        out.push(RDocEntry { a: id(a), b: id(b), c: id(c), re: v.re, im: v.im });
                    }
                }
            }
            out
        });
        Self {
            name: cat.name().to_string(),
            simples: (0..n).map(|a| SimpleDoc { id: id(a), unit: a == cat.unit() }).collect(),
            dual: (0..n).map(|a| (id(a), id(cat.dual(a)))).collect(),
            fusion,
            dims: Some((0..n).map(|a| DimEntry { id: id(a), value: cat.dim(a) }).collect()),
            f,
            r,
        }
    }
}

impl ModuleDoc {
    /// Load over `cat`; omitted L entries on 1×1 blocks default to one.
    pub fn load(&self, cat: &FusionCategory) -> Result<ModuleCategory> {
        let ids = &self.module_simples;
        let cids: Vec<String> = cat.labels().to_vec();
        let k = ids.len();
        let n = cat.rank();
        let mut table = alloc::vec![0u32; k * n * k];
        for e in &self.action {
            let (m, a, p) = (lookup(ids, &e.m)?, lookup(&cids, &e.a)?, lookup(ids, &e.n)?);
            table[(m * n + a) * k + p] = e.mult;
        }
        let mut given: BTreeMap<[usize; 6], C64> = BTreeMap::new();
        for e in &self.l {
            let idx = [
                lookup(ids, &e.m)?,
                lookup(&cids, &e.a)?,
                lookup(&cids, &e.b)?,
                lookup(ids, &e.p)?,
                lookup(ids, &e.h)?,
                lookup(&cids, &e.c)?,
            ];
            given.insert(idx, C64::new(e.re, e.im));
        }
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let act = |m: usize, a: usize, p: usize| table[(m * n + a) * k + p].min(255) as u8;
        let probe = ModuleCategory::from_fn(&self.name, &refs, cat, act, |_| ZERO, None)?;
        let admissible: alloc::collections::BTreeSet<[usize; 6]> = probe.l_tuples(cat).into_iter().collect();
        for (idx, v) in &given {
            if !admissible.contains(idx) && v.norm() > 0.0 {
                return Err(Error::Inadmissible("L entry on a forbidden tuple".to_string()));
            }
        }
        let single = |[m, a, b, p, _, _]: [usize; 6]| {
            probe.channels(m, a).filter(|&h| probe.acts(h, b, p)).count() == 1
                && cat.channels(a, b).filter(|&c| probe.acts(m, c, p)).count() == 1
        };
        let dims = match &self.trace_dims {
            Some(ds) => {
                let mut v = alloc::vec![0.0; k];
                for d in ds {
                    v[lookup(ids, &d.id)?] = d.value;
                }
                Some(v)
            }
            None => None,
        };
        ModuleCategory::from_fn(
            &self.name,
            &refs,
            cat,
            act,
            |idx| given.get(&idx).copied().unwrap_or_else(|| if single(idx) { ONE } else { ZERO }),
            dims,
        )
    }

    pub fn from_module(cat: &FusionCategory, m: &ModuleCategory) -> Self {
        let mid = |i: usize| m.label(i).to_string();
        let cid = |i: usize| cat.label(i).to_string();
        let mut action = Vec::new();
        for x in 0..m.rank() {
            for a in 0..cat.rank() {
                for p in m.channels(x, a) {
                    action.push(ActionEntry { m: mid(x), a: cid(a), n: mid(p), mult: 1 });
                }
            }
        }
        let l = m
            .l_tuples(cat)
            .into_iter()
            .map(|[x, a, b, p, h, c]| {
                let v = m.l(x, a, b, p, h, c);
                LEntry { m: mid(x), a: cid(a), b: cid(b), p: mid(p), h: mid(h), c: cid(c), re: v.re, im: v.im }
            })
            .collect();
        Self {
            name: m.name().to_string(),
            module_simples: (0..m.rank()).map(mid).collect(),
            action,
            l,
            trace_dims: Some((0..m.rank()).map(|i| DimEntry { id: mid(i), value: m.dim(i) }).collect()),
        }
    }
}
