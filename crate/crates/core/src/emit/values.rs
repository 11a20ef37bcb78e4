//! JSON formats for domains, interpretations, resolving functions and
//! explicit finite systems.
//!
//! Values are written by sort: booleans as `true`/`false`, numbers as JSON
//! integers or `"n/d"` strings (decimal strings are also read), locations by label.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::frontend::json::{sort_from_json, sort_to_json, VarJson};
use crate::interp::{Interpretation, Relation};
use crate::oracle::FiniteSystem;
use crate::syntax::{Domains, PredSym, Sort, Value, Var};
use crate::synthesis::{HolePred, ResolvingFunction};
use crate::{Error, Result};

pub fn value_to_json(sort: &Sort, v: &Value) -> Json {
    match (v, sort) {
        (Value::Bool(b), _) => Json::Bool(*b),
        (Value::Num(q), _) if q.is_integer() => Json::from(q.to_integer()),
        (Value::Num(q), _) => Json::String(format!("{}/{}", q.numer(), q.denom())),
        (Value::Loc(i), Sort::Loc(l)) => Json::String(l.labels()[*i as usize].clone()),
        (Value::Loc(i), _) => Json::String(format!("#{i}")),
    }
}

fn number_from_json(j: &Json) -> Option<Rational64> {
    match j {
        Json::Number(n) => n.as_i64().map(Rational64::from_integer),
        Json::String(s) => match s.split_once('/') {
            Some((a, b)) => {
                let (a, b): (i64, i64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
                (b != 0).then(|| Rational64::new(a, b))
            }
            None => decimal(s.trim()),
        },
        _ => None,
    }
}

fn decimal(s: &str) -> Option<Rational64> {
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 12 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let q = Rational64::new(digits.parse().ok()?, 10i64.pow(frac.len() as u32));
    Some(if neg { -q } else { q })
}

pub fn value_from_json(sort: &Sort, j: &Json) -> Result<Value> {
    let v = match (sort, j) {
        (Sort::Bool, Json::Bool(b)) => Some(Value::Bool(*b)),
        (Sort::Loc(l), Json::String(s)) => l.index_of(s).map(Value::Loc),
        (Sort::Int | Sort::Rat, j) => number_from_json(j).map(Value::Num),
        _ => None,
    };
    match v {
        Some(v) if sort.admits(&v) => Ok(v),
        _ => Err(Error::Interpretation(format!("{j} is not a value of sort {sort}"))),
    }
}

/// Domains as JSON: `{"Int": [...], "Rat": [...], "vars": {"x": [...]}}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DomainsJson {
    #[serde(rename = "Int", default, skip_serializing_if = "Vec::is_empty")]
    pub int: Vec<Json>,
    #[serde(rename = "Rat", default, skip_serializing_if = "Vec::is_empty")]
    pub rat: Vec<Json>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vars: BTreeMap<String, Vec<Json>>,
}

pub fn domains_to_json(d: &Domains) -> DomainsJson {
    let list = |vs: &[Value]| vs.iter().map(|v| value_to_json(&Sort::Rat, v)).collect();
    DomainsJson {
        int: list(&d.int),
        rat: list(&d.rat),
        vars: d.by_name.iter().map(|(k, v)| (k.clone(), list(v))).collect(),
    }
}

pub fn domains_from_json(j: &DomainsJson) -> Result<Domains> {
    let list = |vs: &[Json]| -> Result<Vec<Value>> {
        vs.iter()
            .map(|x| number_from_json(x).map(Value::Num).ok_or_else(|| Error::Domain(format!("{x} is not a number"))))
            .collect()
    };
    let mut d = Domains::new();
    d.int = list(&j.int)?;
    d.rat = list(&j.rat)?;
    for (k, v) in &j.vars {
        d.by_name.insert(k.clone(), list(v)?);
    }
    Ok(d)
}

/// An interpretation: every predicate maps to the list of its true tuples.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InterpretationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainsJson>,
    pub relations: BTreeMap<String, Vec<Vec<Json>>>,
}

fn tuples_to_json(rel: &Relation) -> Vec<Vec<Json>> {
    rel.tuples().map(|t| rel.pred.params.iter().zip(&t).map(|(p, v)| value_to_json(&p.sort, v)).collect()).collect()
}

fn relation_from_json(pred: &Arc<PredSym>, rows: &[Vec<Json>], domains: &Domains) -> Result<Relation> {
    let mut rel = Relation::empty(pred, domains)?;
    for row in rows {
        if row.len() != pred.arity() {
            return Err(Error::Interpretation(format!(
                "tuple of length {} for `{}` of arity {}",
                row.len(),
                pred.name,
                pred.arity()
            )));
        }
        let t = pred.params.iter().zip(row).map(|(p, j)| value_from_json(&p.sort, j)).collect::<Result<Vec<_>>>()?;
        rel.insert(&t)?;
    }
    Ok(rel)
}

pub fn interpretation_to_json(i: &Interpretation, domains: &Domains) -> InterpretationJson {
    InterpretationJson {
        domain: Some(domains_to_json(domains)),
        relations: i.rels.iter().map(|(k, r)| (k.clone(), tuples_to_json(r))).collect(),
    }
}

/// Read relations for the given predicates. Predicates missing from the
/// JSON are left out; names the JSON has beyond `preds` are an error.
pub fn interpretation_from_json(
    j: &InterpretationJson,
    preds: &[Arc<PredSym>],
    domains: &Domains,
) -> Result<Interpretation> {
    let mut out = Interpretation::new();
    for (name, rows) in &j.relations {
        let pred = preds.iter().find(|p| *p.name == **name).ok_or_else(|| Error::UnknownPredicate(name.clone()))?;
        out.insert(relation_from_json(pred, rows, domains)?);
    }
    Ok(out)
}

/// A resolving function: hole location to the tuples of its relation, over
/// `v_r` for a condition hole and `v_r, v_r'` for an assignment hole.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PsiJson {
    pub holes: BTreeMap<String, Vec<Vec<Json>>>,
}

pub fn psi_to_json(psi: &ResolvingFunction) -> PsiJson {
    PsiJson { holes: psi.fills.iter().map(|(h, r)| (h.hole.loc().to_string(), tuples_to_json(r))).collect() }
}

pub fn psi_from_json(j: &PsiJson, holes: &[HolePred], domains: &Domains) -> Result<ResolvingFunction> {
    if let Some(extra) = j.holes.keys().find(|k| !holes.iter().any(|h| h.hole.loc() == k.as_str())) {
        return Err(Error::Hole(format!("no hole at location `{extra}`")));
    }
    let fills = holes
        .iter()
        .map(|hp| {
            let rows = j
                .holes
                .get(hp.hole.loc())
                .ok_or_else(|| Error::Hole(format!("no filling given for the hole at `{}`", hp.hole.loc())))?;
            Ok((hp.clone(), relation_from_json(&hp.pred, rows, domains)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResolvingFunction { fills })
}

/// An explicit finite system. States are referred to by index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteSystemJson {
    pub vars: Vec<VarJson>,
    pub states: Vec<Vec<Json>>,
    pub init: Vec<usize>,
    pub transitions: Vec<(usize, usize)>,
    #[serde(default)]
    pub fairness: Vec<Vec<usize>>,
}

pub fn system_to_json(sys: &FiniteSystem) -> FiniteSystemJson {
    FiniteSystemJson {
        vars: sys.vars.iter().map(|v| VarJson { name: v.name.to_string(), sort: sort_to_json(&v.sort) }).collect(),
        states: sys
            .states
            .iter()
            .map(|s| sys.vars.iter().zip(s).map(|(v, x)| value_to_json(&v.sort, x)).collect())
            .collect(),
        init: sys.init.ones().collect(),
        transitions: sys.succ.iter().enumerate().flat_map(|(a, ss)| ss.iter().map(move |&b| (a, b as usize))).collect(),
        fairness: sys.fairness.iter().map(|j| j.ones().collect()).collect(),
    }
}

pub fn system_from_json(j: &FiniteSystemJson) -> Result<FiniteSystem> {
    let vars = j.vars.iter().map(|v| Ok(Var::new(&v.name, sort_from_json(&v.sort)?))).collect::<Result<Vec<_>>>()?;
    let states = j
        .states
        .iter()
        .map(|s| {
            if s.len() != vars.len() {
                return Err(Error::Domain(format!("state has {} values for {} variables", s.len(), vars.len())));
            }
            vars.iter().zip(s).map(|(v, x)| value_from_json(&v.sort, x)).collect()
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteSystem::from_parts(vars, states, j.init.clone(), j.transitions.clone(), j.fairness.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::LocSort;

    #[test]
    fn values_by_sort() {
        let loc = Sort::Loc(LocSort::new(["a", "b"]));
        assert_eq!(value_from_json(&loc, &Json::from("b")).unwrap(), Value::Loc(1));
        assert!(value_from_json(&loc, &Json::from("c")).is_err());
        let half = Value::Num(Rational64::new(1, 2));
        assert_eq!(value_from_json(&Sort::Rat, &value_to_json(&Sort::Rat, &half)).unwrap(), half);
        assert!(value_from_json(&Sort::Int, &Json::from("1/2")).is_err());
        assert_eq!(value_from_json(&Sort::Int, &Json::from(-3)).unwrap(), Value::int(-3));
    }

    #[test]
    fn interpretation_round_trip() {
        let x = Var::new("x", Sort::Int);
        let p = PredSym::new("t", vec![x.clone(), x.primed()]);
        let d = Domains::new().with_int_range(0, 2);
        let mut r = Relation::empty(&p, &d).unwrap();
        r.insert(&[Value::int(0), Value::int(2)]).unwrap();
        let mut i = Interpretation::new();
        i.insert(r);
        let j = serde_json::to_string(&interpretation_to_json(&i, &d)).unwrap();
        let back: InterpretationJson = serde_json::from_str(&j).unwrap();
        let d2 = domains_from_json(back.domain.as_ref().unwrap()).unwrap();
        assert_eq!(d2, d);
        assert_eq!(interpretation_from_json(&back, &[p], &d2).unwrap(), i);
    }

    #[test]
    fn system_round_trip() {
        let b = Var::new("b", Sort::Bool);
        let sys = FiniteSystem::from_parts(
            vec![b],
            vec![vec![Value::Bool(false)], vec![Value::Bool(true)]],
            vec![0],
            vec![(0, 1), (1, 0)],
            vec![vec![1]],
        )
        .unwrap();
        let j = system_to_json(&sys);
        let back = system_from_json(&serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap()).unwrap();
        assert_eq!(system_to_json(&back), j);
    }
}
