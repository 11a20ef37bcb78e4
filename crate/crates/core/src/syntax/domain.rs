//! Finite evaluation domains for variables.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::value::{Sort, Value};
use super::var::Var;
use crate::{Error, Result};

/// Finite value ranges: per variable name, with a fallback per numeric sort.
/// Booleans always range over both values and locations over all labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domains {
    pub by_name: BTreeMap<String, Vec<Value>>,
    pub int: Vec<Value>,
    pub rat: Vec<Value>,
}

impl Domains {
    pub fn new() -> Self {
        Self::default()
    }

    /// Integers `lo..=hi` for every `Int` variable without its own range.
    pub fn with_int_range(mut self, lo: i64, hi: i64) -> Self {
        self.int = (lo..=hi).map(Value::int).collect();
        self
    }

    pub fn with_rat_values(mut self, vals: &[Rational64]) -> Self {
        self.rat = vals.iter().map(|q| Value::Num(*q)).collect();
        self
    }

    pub fn with_var_range(mut self, name: &str, lo: i64, hi: i64) -> Self {
        self.by_name.insert(name.to_string(), (lo..=hi).map(Value::int).collect());
        self
    }

    pub fn with_var_values(mut self, name: &str, vals: Vec<Value>) -> Self {
        self.by_name.insert(name.to_string(), vals);
        self
    }

    /// Values of a variable, in ascending order without duplicates.
    pub fn values(&self, v: &Var) -> Result<Arc<[Value]>> {
        let vals: Vec<Value> = match &v.sort {
            Sort::Bool => vec![Value::Bool(false), Value::Bool(true)],
            Sort::Loc(l) => (0..l.labels().len() as u32).map(Value::Loc).collect(),
            Sort::Int | Sort::Rat => {
                let base =
                    self.by_name.get(&*v.name).unwrap_or(if v.sort == Sort::Int { &self.int } else { &self.rat });
                let mut vals = base.clone();
                vals.sort();
                vals.dedup();
                vals
            }
        };
        if vals.is_empty() {
            return Err(Error::Domain(format!("no finite range given for `{}` of sort {}", v.name, v.sort)));
        }
        if let Some(bad) = vals.iter().find(|x| !v.sort.admits(x)) {
            return Err(Error::Domain(format!("value {bad} is not of sort {} required by `{}`", v.sort, v.name)));
        }
        Ok(vals.into())
    }

    /// Number of valuations of a variable list, saturating.
    pub fn product_size(&self, vars: &[Var]) -> Result<u128> {
        let mut n: u128 = 1;
        for v in vars {
            n = n.saturating_mul(self.values(v)?.len() as u128);
        }
        Ok(n)
    }
}
