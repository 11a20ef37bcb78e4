//! Program variables, their primed versions and indexed copies.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::value::Sort;

/// A sorted variable.
///
/// `primes` counts next-state primes (`x'` has one, `x''` two) and `copy`
/// distinguishes the indexed copies `x_c0, x_c1, ...` used when a clause
/// mentions more than two states.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Var {
    pub name: Arc<str>,
    pub sort: Sort,
    pub primes: u8,
    pub copy: Option<u32>,
}

impl Var {
    pub fn new(name: impl AsRef<str>, sort: Sort) -> Self {
        Var { name: Arc::from(name.as_ref()), sort, primes: 0, copy: None }
    }

    pub fn is_primed(&self) -> bool {
        self.primes > 0
    }

    pub fn primed(&self) -> Self {
        self.with_primes(self.primes + 1)
    }

    pub fn with_primes(&self, primes: u8) -> Self {
        Var { primes, ..self.clone() }
    }

    pub fn unprimed(&self) -> Self {
        self.with_primes(0)
    }

    pub fn with_copy(&self, copy: u32) -> Self {
        Var { copy: Some(copy), primes: 0, ..self.clone() }
    }

    /// The plain program variable this one was derived from.
    pub fn base(&self) -> Self {
        Var { name: self.name.clone(), sort: self.sort.clone(), primes: 0, copy: None }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if let Some(c) = self.copy {
            write!(f, "_c{c}")?;
        }
        for _ in 0..self.primes {
            write!(f, "'")?;
        }
        Ok(())
    }
}

/// Prime every variable of a list.
pub fn primed(vars: &[Var]) -> Vec<Var> {
    vars.iter().map(Var::primed).collect()
}

/// The `i`-th indexed copy of every variable of a list.
pub fn copies(vars: &[Var], i: u32) -> Vec<Var> {
    vars.iter().map(|v| v.with_copy(i)).collect()
}
