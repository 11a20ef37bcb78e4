//! Built-in problems: the robots and bank case studies, their finite
//! miniatures, and generated suites of tiny systems used to cross-check the
//! translation against the finite-state tools.
//!
//! Fixtures are kept as source text so that they double as examples of the
//! input formats.

mod case_studies;
mod generated;

pub use case_studies::{
    bank, micro_bank, micro_bank_fills, robots, robots_conjunct1, robots_mini, BANK_HOLES, MICRO_BANK_FEE,
};
pub use generated::{explicit_program, fuzz_suite, micro_synthesis_suite, micro_verification_suite, Explicit};

use crate::frontend::{parse_domains, parse_formula, parse_partial_program, parse_program};
use crate::syntax::{Domains, PartialProgram, Program, StateFormula};
use crate::Result;

/// Which collection a fixture belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    CaseStudy,
    Fuzz,
    MicroVerification,
    MicroSynthesis,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::CaseStudy => "case-study",
            Suite::Fuzz => "fuzz",
            Suite::MicroVerification => "micro",
            Suite::MicroSynthesis => "micro-synth",
        }
    }
}

/// A verification or synthesis problem in source form.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub about: String,
    pub suite: Suite,
    /// Program text; a partial program when `partial` is set.
    pub source: String,
    pub spec: String,
    /// Domain ranges in the text syntax. Empty for unbounded problems.
    pub domains: String,
    pub partial: bool,
}

impl Fixture {
    /// The program, with any holes dropped.
    pub fn program(&self) -> Result<Program> {
        if self.partial {
            Ok(parse_partial_program(&self.source)?.program)
        } else {
            parse_program(&self.source)
        }
    }

    pub fn partial_program(&self) -> Result<PartialProgram> {
        parse_partial_program(&self.source)
    }

    pub fn formula(&self) -> Result<StateFormula> {
        parse_formula(&self.spec, &self.program()?.vars)
    }

    pub fn domains(&self) -> Result<Domains> {
        parse_domains(&self.domains)
    }

    /// True when every variable has a finite range.
    pub fn is_finite(&self) -> bool {
        let (Ok(p), Ok(d)) = (self.program(), self.domains()) else { return false };
        p.vars.iter().all(|v| d.values(v).is_ok())
    }
}

/// Every fixture, case studies first.
pub fn all() -> Vec<Fixture> {
    let mut out = vec![robots(), robots_mini(), bank(), micro_bank()];
    out.extend(fuzz_suite());
    out.extend(micro_verification_suite());
    out.extend(micro_synthesis_suite());
    out
}

pub fn by_name(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses() {
        for f in all() {
            f.program().unwrap_or_else(|e| panic!("{}: {e}", f.name));
            f.formula().unwrap_or_else(|e| panic!("{}: {e}", f.name));
            f.domains().unwrap_or_else(|e| panic!("{}: {e}", f.name));
            if f.partial {
                assert!(!f.partial_program().unwrap().holes.is_empty(), "{}", f.name);
            }
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<String> = all().into_iter().map(|f| f.name).collect();
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
    }
}
