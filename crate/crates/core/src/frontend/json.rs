//! JSON mirror of the program and partial-program syntax. Formulas are
//! carried as strings in the text syntax.

use serde::{Deserialize, Serialize};

use super::convert::Scope;
use super::expr::parse_expr;
use crate::syntax::{Hole, LocSort, PartialProgram, Program, Sort, Var};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SortJson {
    Named(String),
    Loc { loc: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarJson {
    pub name: String,
    pub sort: SortJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HoleJson {
    Cond { l: String, lt: String, lf: String },
    Assign { l: String, next: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProgramJson {
    pub vars: Vec<VarJson>,
    pub init: String,
    pub next: String,
    #[serde(default)]
    pub fair: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub holes: Vec<HoleJson>,
}

pub fn sort_to_json(s: &Sort) -> SortJson {
    match s {
        Sort::Loc(l) => SortJson::Loc { loc: l.labels().to_vec() },
        other => SortJson::Named(other.to_string()),
    }
}

pub fn sort_from_json(s: &SortJson) -> Result<Sort> {
    Ok(match s {
        SortJson::Named(n) => match n.as_str() {
            "Bool" => Sort::Bool,
            "Int" => Sort::Int,
            "Rat" => Sort::Rat,
            other => return Err(Error::Sort(format!("unknown sort `{other}`"))),
        },
        SortJson::Loc { loc } => Sort::Loc(LocSort::new(loc.clone())),
    })
}

pub fn program_to_json(p: &Program) -> ProgramJson {
    ProgramJson {
        vars: p.vars.iter().map(|v| VarJson { name: v.name.to_string(), sort: sort_to_json(&v.sort) }).collect(),
        init: p.init.to_string(),
        next: p.next.to_string(),
        fair: p.fairness.iter().map(|f| f.to_string()).collect(),
        holes: vec![],
    }
}

pub fn partial_program_to_json(pp: &PartialProgram) -> ProgramJson {
    let mut j = program_to_json(&pp.program);
    j.holes = pp
        .holes
        .iter()
        .map(|h| match h {
            Hole::Cond { l, lt, lf } => HoleJson::Cond { l: l.clone(), lt: lt.clone(), lf: lf.clone() },
            Hole::Assign { l, next } => HoleJson::Assign { l: l.clone(), next: next.clone() },
        })
        .collect();
    j
}

pub fn partial_program_from_json(j: &ProgramJson) -> Result<PartialProgram> {
    let vars = j.vars.iter().map(|v| Ok(Var::new(&v.name, sort_from_json(&v.sort)?))).collect::<Result<Vec<_>>>()?;
    let cur = Scope::with_vars(&vars, 0);
    let both = Scope::with_vars(&vars, 1);
    let init = cur.formula(&parse_expr(&j.init)?)?;
    let next = both.formula(&parse_expr(&j.next)?)?;
    let fair = j.fair.iter().map(|f| cur.formula(&parse_expr(f)?)).collect::<Result<Vec<_>>>()?;
    let program = Program::new(vars, init, next, fair)?;
    let holes = j
        .holes
        .iter()
        .map(|h| match h {
            HoleJson::Cond { l, lt, lf } => Hole::Cond { l: l.clone(), lt: lt.clone(), lf: lf.clone() },
            HoleJson::Assign { l, next } => Hole::Assign { l: l.clone(), next: next.clone() },
        })
        .collect();
    if j.holes.is_empty() {
        Ok(PartialProgram { program, holes })
    } else {
        PartialProgram::new(program, holes)
    }
}

pub fn program_from_json(j: &ProgramJson) -> Result<Program> {
    if !j.holes.is_empty() {
        return Err(Error::Program("holes are only allowed in partial programs".into()));
    }
    Ok(partial_program_from_json(j)?.program)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_partial_program;

    #[test]
    fn json_round_trip() {
        let pp = parse_partial_program(
            "vars { pc: {a, b}; x: Int; } init { pc = a & x = 0 } next { pc = b & pc' = a & x' = x } fair { x >= 0 } hole cond a b a;",
        )
        .unwrap();
        let j = partial_program_to_json(&pp);
        let text = serde_json::to_string(&j).unwrap();
        let back: ProgramJson = serde_json::from_str(&text).unwrap();
        assert_eq!(partial_program_from_json(&back).unwrap(), pp);
    }
}
