//! Config file, flag merging and data resolution.

use std::path::Path;

use catnet::category::{builtin, Builtin, CategoryDoc, CentralFunctor, FusionCategory, ModuleCategory, ModuleDoc};
use catnet::levin_wen::{Limits, Rect};
use serde::Deserialize;

use crate::{CliError, Global};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

pub fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => t.parse::<u64>(),
    }
    .map_err(|e| format!("bad seed '{s}': {e}"))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SeedValue {
    Int(u64),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub w: i32,
    pub h: i32,
    #[serde(default)]
    pub boundary: Option<String>,
}

/// Rectangle with inclusive corners or an explicit site list.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RegionConfig {
    Rect { x0: i32, y0: i32, x1: i32, y1: i32 },
    Sites(Vec<[i32; 2]>),
}

impl RegionConfig {
    /// The rectangle this region fills; site lists must fill their bounding box.
    pub fn rect(&self) -> Result<Rect, CliError> {
        match self {
            RegionConfig::Rect { x0, y0, x1, y1 } => Ok(Rect::new(*x0, *y0, *x1, *y1)?),
            RegionConfig::Sites(s) => {
                if s.is_empty() {
                    return Err(CliError::Usage("empty site list".to_string()));
                }
                let (x0, x1) = (s.iter().map(|p| p[0]).min().unwrap_or(0), s.iter().map(|p| p[0]).max().unwrap_or(0));
                let (y0, y1) = (s.iter().map(|p| p[1]).min().unwrap_or(0), s.iter().map(|p| p[1]).max().unwrap_or(0));
                let r = Rect::new(x0, y0, x1, y1)?;
                let mut uniq: Vec<[i32; 2]> = s.clone();
                uniq.sort_unstable();
                uniq.dedup();
                if uniq.len() != r.len() {
                    return Err(CliError::Usage("site list does not fill a rectangle".to_string()));
                }
                Ok(r)
            }
        }
    }

    pub fn sites(&self) -> Vec<(i32, i32)> {
        match self {
            RegionConfig::Rect { x0, y0, x1, y1 } => {
                (*y0..=*y1).flat_map(|y| (*x0..=*x1).map(move |x| (x, y))).collect()
            }
            RegionConfig::Sites(s) => s.iter().map(|p| (p[0], p[1])).collect(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub model: Option<String>,
    pub category: Option<String>,
    pub module: Option<String>,
    pub central: Option<String>,
    pub lattice: Option<LatticeConfig>,
    #[serde(alias = "Λ")]
    pub lambda: Option<RegionConfig>,
    #[serde(alias = "Δ")]
    pub delta: Option<RegionConfig>,
    /// Larger region for axiom 3.
    pub lambda2: Option<RegionConfig>,
    /// Larger surrounding region for axiom 4.
    pub delta2: Option<RegionConfig>,
    pub axioms: Option<Vec<u8>>,
    pub site: Option<Vec<String>>,
    pub n: Option<usize>,
    pub region: Option<RegionConfig>,
    pub exhaustive: Option<usize>,
    pub tolerance: Option<f64>,
    pub seed: Option<SeedValue>,
    pub out: Option<String>,
    pub dense_cap: Option<usize>,
    pub sparse_cap: Option<usize>,
}

impl Config {
    pub fn load(path: &str) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Settings shared by all suites after merging flags, config and defaults.
#[derive(Debug, Clone)]
pub struct Settings {
    pub tolerance: f64,
    pub seed: u64,
    pub limits: Limits,
    pub out: Option<String>,
    pub timings: bool,
}

impl Settings {
    pub fn resolve(flags: &Global, file: &Config) -> Result<Self, CliError> {
        let file_seed = match &file.seed {
            Some(SeedValue::Int(v)) => Some(*v),
            Some(SeedValue::Text(s)) => Some(parse_seed(s).map_err(CliError::Usage)?),
            None => None,
        };
        let tolerance = flags.tolerance.or(file.tolerance).unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {tolerance}")));
        }
        let defaults = Limits::default();
        Ok(Self {
            tolerance,
            seed: flags.seed.or(file_seed).unwrap_or(DEFAULT_SEED),
            limits: Limits {
                dense: flags.dense_cap.or(file.dense_cap).unwrap_or(defaults.dense),
                sparse: flags.sparse_cap.or(file.sparse_cap).unwrap_or(defaults.sparse),
            },
            out: flags.out.clone().or_else(|| file.out.clone()),
            timings: flags.timings,
        })
    }
}

fn is_file(name: &str) -> bool {
    name.ends_with(".json") || Path::new(name).is_file()
}

pub fn category(name: &str) -> Result<FusionCategory, CliError> {
    if is_file(name) {
        let doc: CategoryDoc = serde_json::from_str(&std::fs::read_to_string(name)?)?;
        return Ok(doc.load()?);
    }
    match builtin(name)? {
        Builtin::Category(c) => Ok(c),
        Builtin::Module { category, .. } => Ok(category),
        Builtin::Central(_) => Err(CliError::Usage(format!("{name} is a central functor, not a category"))),
    }
}

/// Module data over `cat`, normalized against the sum of all module simples.
pub fn module(name: &str, cat: &FusionCategory) -> Result<ModuleCategory, CliError> {
    let m = if is_file(name) {
        let doc: ModuleDoc = serde_json::from_str(&std::fs::read_to_string(name)?)?;
        doc.load(cat)?
    } else {
        match builtin(name)? {
            Builtin::Module { category, module } => {
                if category.name() != cat.name() {
                    return Err(CliError::Usage(format!("{name} is a module over {}", category.name())));
                }
                module
            }
            _ => return Err(CliError::Usage(format!("{name} is not a module category"))),
        }
    };
    let w = vec![1; m.rank()];
    if m.is_normalized(cat, &w, 1e-12) {
        Ok(m)
    } else {
        Ok(m.normalize_trace(cat, &w)?)
    }
}

pub fn central(name: &str) -> Result<CentralFunctor, CliError> {
    match builtin(name)? {
        Builtin::Central(f) => Ok(f),
        _ => Err(CliError::Usage(format!("{name} is not a central functor"))),
    }
}

/// Category named by a flag, the config, or the category of a module builtin.
pub fn resolve_category(flag: &Option<String>, file: &Config, module: &Option<String>) -> Result<FusionCategory, CliError> {
    if let Some(name) = flag.as_ref().or(file.category.as_ref()) {
        return category(name);
    }
    if let Some(m) = module.as_ref().or(file.module.as_ref()) {
        if !is_file(m) {
            return category(m);
        }
    }
    Err(CliError::Usage("no category given".to_string()))
}

/// `WxH` into two extents.
pub fn parse_extent(s: &str) -> Result<(i32, i32), CliError> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| CliError::Usage(format!("bad extent '{s}', expected WxH")))?;
    let p = |t: &str| t.trim().parse::<i32>().map_err(|_| CliError::Usage(format!("bad extent '{s}'")));
    let (w, h) = (p(w)?, p(h)?);
    if w < 1 || h < 1 {
        return Err(CliError::Usage(format!("extent '{s}' must be positive")));
    }
    Ok((w, h))
}

/// `x0,y0,x1,y1` into a rectangle.
pub fn parse_rect(s: &str) -> Result<Rect, CliError> {
    let v: Vec<i32> = s
        .split(',')
        .map(|t| t.trim().parse::<i32>().map_err(|_| CliError::Usage(format!("bad region '{s}', expected x0,y0,x1,y1"))))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x0, y0, x1, y1] => Ok(Rect::new(x0, y0, x1, y1)?),
        _ => Err(CliError::Usage(format!("bad region '{s}', expected x0,y0,x1,y1"))),
    }
}

pub fn parse_axioms(s: &str) -> Result<Vec<u8>, CliError> {
    let v: Vec<u8> = s
        .split(',')
        .map(|t| t.trim().parse::<u8>().map_err(|_| CliError::Usage(format!("bad axiom list '{s}'"))))
        .collect::<Result<_, _>>()?;
    check_axioms(&v)?;
    Ok(v)
}

pub fn check_axioms(v: &[u8]) -> Result<(), CliError> {
    if v.is_empty() || v.iter().any(|a| !(1..=4).contains(a)) {
        return Err(CliError::Usage("axioms must be drawn from 1,2,3,4".to_string()));
    }
    Ok(())
}

/// Comma-separated labels into simple indices.
pub fn labels(cat: &FusionCategory, names: &[String]) -> Result<Vec<usize>, CliError> {
    names.iter().map(|n| Ok(cat.index_of(n.trim())?)).collect()
}

pub fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}
