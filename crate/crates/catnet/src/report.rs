//! Structured verification results shared by every checker.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIP")]
    Skip,
}

/// Expected or observed value of an item.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Int(i64),
    Real(f64),
    Text(String),
    Ints(Vec<i64>),
    Reals(Vec<f64>),
    Texts(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Item {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expected: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub actual: Option<Quantity>,
    #[serde(default)]
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Item {
    fn new(name: &str, status: Status) -> Self {
        Self { name: name.to_string(), status, residual: None, expected: None, actual: None, runtime_ms: 0.0, note: None }
    }

    /// PASS iff `residual <= tol`; NaN fails.
    pub fn residual(name: &str, residual: f64, tol: f64) -> Self {
        let ok = residual <= tol;
        let mut it = Self::new(name, if ok { Status::Pass } else { Status::Fail });
        it.residual = Some(residual);
        it
    }

    /// Exact integer comparison.
    pub fn int_eq(name: &str, expected: i64, actual: i64) -> Self {
        let mut it = Self::new(name, if expected == actual { Status::Pass } else { Status::Fail });
        it.expected = Some(Quantity::Int(expected));
        it.actual = Some(Quantity::Int(actual));
        it
    }

    pub fn ints_eq(name: &str, expected: Vec<i64>, actual: Vec<i64>) -> Self {
        let mut it = Self::new(name, if expected == actual { Status::Pass } else { Status::Fail });
        it.expected = Some(Quantity::Ints(expected));
        it.actual = Some(Quantity::Ints(actual));
        it
    }

    pub fn texts_eq(name: &str, expected: Vec<String>, actual: Vec<String>) -> Self {
        let mut it = Self::new(name, if expected == actual { Status::Pass } else { Status::Fail });
        it.expected = Some(Quantity::Texts(expected));
        it.actual = Some(Quantity::Texts(actual));
        it
    }

    /// Real comparison `|expected - actual| <= tol`.
    pub fn real_eq(name: &str, expected: f64, actual: f64, tol: f64) -> Self {
        let r = (expected - actual).abs();
        let mut it = Self::residual(name, r, tol);
        it.expected = Some(Quantity::Real(expected));
        it.actual = Some(Quantity::Real(actual));
        it
    }

    pub fn check(name: &str, ok: bool) -> Self {
        Self::new(name, if ok { Status::Pass } else { Status::Fail })
    }

    pub fn skip(name: &str, why: &str) -> Self {
        Self::new(name, Status::Skip).with_note(why)
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    pub fn with_actual(mut self, q: Quantity) -> Self {
        self.actual = Some(q);
        self
    }

    pub fn with_expected(mut self, q: Quantity) -> Self {
        self.expected = Some(q);
        self
    }

    /// Also fail if the attached residual exceeds `tol`.
    pub fn and_residual(mut self, residual: f64, tol: f64) -> Self {
        self.residual = Some(self.residual.map_or(residual, |r| r.max(residual)));
        if !(residual <= tol) {
            self.status = Status::Fail;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    pub items: Vec<Item>,
}

impl Report {
    pub fn new(suite: &str, tolerance: f64) -> Self {
        Self { suite: suite.to_string(), tolerance, seed: 0, items: Vec::new() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn push(&mut self, item: Item) {
        self.items.push(item);
    }

    /// Append every item of `other`, prefixing names with `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut it in other.items {
            it.name = alloc::format!("{prefix}/{}", it.name);
            self.items.push(it);
        }
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(Item::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Item> {
        self.items.iter().filter(|i| i.status == Status::Fail)
    }

    pub fn item(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.items.iter().filter_map(|i| i.residual).fold(0.0, f64::max)
    }

    /// Sort items by name for order-stable output.
    pub fn sorted(mut self) -> Self {
        self.items.sort_by(|a, b| a.name.cmp(&b.name));
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        assert_eq!(Item::residual("x", f64::NAN, 1.0).status, Status::Fail);
        assert_eq!(Item::residual("x", 0.5, 1.0).status, Status::Pass);
    }

    #[test]
    fn report_verdict() {
        let mut r = Report::new("s", 1e-9);
        r.push(Item::int_eq("a", 3, 3));
        assert!(r.passed());
        r.push(Item::int_eq("b", 3, 4));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }
}
