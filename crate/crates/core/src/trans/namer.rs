//! Deterministic fresh names for predicates and introduced variables.

use std::collections::{BTreeMap, HashSet};

/// Name families. Each family has its own counter starting at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Aux,
    XNext,
    XGlobally,
    XUntil,
    P,
    Q,
    R,
    T,
    Sel,
    /// Selector bits of desugared disjunctions.
    Bit,
    Neg,
}

impl Family {
    pub fn prefix(self) -> &'static str {
        match self {
            Family::Aux => "aux",
            Family::XNext => "x_X",
            Family::XGlobally => "x_G",
            Family::XUntil => "x_U",
            Family::P => "p",
            Family::Q => "q",
            Family::R => "r",
            Family::T => "t",
            Family::Sel => "sel",
            Family::Bit => "a",
            Family::Neg => "n_",
        }
    }
}

/// Issues names that never repeat and never collide with reserved ones.
#[derive(Clone, Debug, Default)]
pub struct FreshNamer {
    counters: BTreeMap<Family, u32>,
    used: HashSet<String>,
    issued: u32,
}

impl FreshNamer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_reserved<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Self {
        let mut n = Self::new();
        for s in names {
            n.reserve(s);
        }
        n
    }

    pub fn reserve(&mut self, name: impl Into<String>) {
        self.used.insert(name.into());
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    /// Total number of names issued so far.
    pub fn issued(&self) -> u32 {
        self.issued
    }

    pub fn fresh(&mut self, family: Family) -> String {
        let c = self.counters.entry(family).or_insert(0);
        loop {
            *c += 1;
            let name = format!("{}{}", family.prefix(), c);
            if self.used.insert(name.clone()) {
                self.issued += 1;
                return name;
            }
        }
    }

    /// `n_<base>` for the complement of predicate `base`, with a numeric
    /// suffix only when that name is taken.
    pub fn negation_of(&mut self, base: &str) -> String {
        let mut name = format!("n_{base}");
        let mut k = 1;
        while self.used.contains(&name) {
            k += 1;
            name = format!("n_{base}_{k}");
        }
        self.used.insert(name.clone());
        self.issued += 1;
        name
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn never_reuses() {
        let mut n = FreshNamer::with_reserved(["aux1", "p"]);
        assert_eq!(n.fresh(Family::Aux), "aux2");
        assert_eq!(n.fresh(Family::Aux), "aux3");
        assert_eq!(n.fresh(Family::P), "p1");
        assert_eq!(n.fresh(Family::XGlobally), "x_G1");
        assert_eq!(n.negation_of("p1"), "n_p1");
        assert_eq!(n.negation_of("p1"), "n_p1_2");
        assert_eq!(n.issued(), 6);
    }
}
