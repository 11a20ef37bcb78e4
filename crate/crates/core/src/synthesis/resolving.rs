//! Resolving functions: explicit hole fillings over finite domains.

use super::{hole_disjuncts, make_hole_predicates, HolePred};
use crate::interp::{Interpretation, Relation};
use crate::oracle::show_value;
use crate::syntax::{Domains, Formula, Hole, PartialProgram, Program, Sort, Term, Value, Var};
use crate::{Error, Result};

/// A relation for every hole, in hole order. Each relation is over the
/// hole predicate's parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvingFunction {
    pub fills: Vec<(HolePred, Relation)>,
}

impl ResolvingFunction {
    /// The filling of the hole at location `l`.
    pub fn get(&self, l: &str) -> Option<&Relation> {
        self.fills.iter().find(|(h, _)| h.hole.loc() == l).map(|(_, r)| r)
    }

    /// Every assignment hole must be defined on all of `v_r`; with `strict`
    /// it must also be a function.
    pub fn validate(&self, strict: bool) -> Result<()> {
        for (hp, rel) in &self.fills {
            if let Hole::Assign { l, .. } = &hp.hole {
                let m = rel.half_space()?;
                for a in 0..m {
                    let n = (0..m).filter(|b| rel.bits.contains(a * m + b)).count();
                    let bad = if n == 0 {
                        Some("undefined")
                    } else if strict && n > 1 {
                        Some("not deterministic")
                    } else {
                        None
                    };
                    if let Some(what) = bad {
                        let t = rel.tuple(a * m);
                        let n = hp.pred.params.len() / 2;
                        let at: Vec<String> = hp.pred.params[..n]
                            .iter()
                            .zip(&t)
                            .map(|(v, x)| format!("{v}={}", show_value(&v.sort, x)))
                            .collect();
                        return Err(Error::Hole(format!(
                            "assignment hole at `{l}` is {what} for v_r = ({})",
                            at.join(", ")
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The fillings as relations of the hole predicates.
    pub fn to_interpretation(&self) -> Interpretation {
        let mut i = Interpretation::new();
        for (_, r) in &self.fills {
            i.insert(r.clone());
        }
        i
    }
}

fn value_formula(v: &Var, x: &Value) -> Formula {
    match (x, &v.sort) {
        (Value::Bool(true), _) => Formula::Bool(v.clone()),
        (Value::Bool(false), _) => Formula::not(Formula::Bool(v.clone())),
        (Value::Num(q), _) => Formula::eq(Term::Var(v.clone()), Term::Const(*q)),
        (Value::Loc(i), Sort::Loc(s)) => Formula::eq(Term::Var(v.clone()), Term::Label(s.clone(), *i)),
        (Value::Loc(_), _) => unreachable!("location value of a non-location variable"),
    }
}

/// The relation as a disjunction of point constraints over `vars`.
pub fn relation_formula(rel: &Relation, vars: &[Var]) -> Formula {
    if rel.count() == rel.space() {
        return Formula::True;
    }
    Formula::or(rel.tuples().map(|t| Formula::and(vars.iter().zip(&t).map(|(v, x)| value_formula(v, x)))))
}

/// `next_Ψ`: the hole steps filled by `psi`, or the original transition.
pub fn next_psi(pp: &PartialProgram, psi: &ResolvingFunction) -> Result<Formula> {
    let holes: Vec<HolePred> = psi.fills.iter().map(|(h, _)| h.clone()).collect();
    let parts = hole_disjuncts(pp, &holes, &|hp| {
        let (_, rel) = psi.fills.iter().find(|(h, _)| h == hp).expect("hole from psi");
        Ok(relation_formula(rel, &hp.pred.params))
    })?;
    Ok(Formula::or(parts.into_iter().chain(std::iter::once(pp.program.next.clone()))))
}

/// `P_Ψ`, after checking that `psi` fills exactly the holes of `pp` and is
/// total on every assignment hole.
pub fn apply_resolving(pp: &PartialProgram, psi: &ResolvingFunction, strict: bool) -> Result<Program> {
    let expected = make_hole_predicates(pp)?;
    if expected.len() != psi.fills.len() || expected.iter().zip(&psi.fills).any(|(e, (h, _))| e != h) {
        return Err(Error::Hole("the resolving function does not match the holes of the program".into()));
    }
    psi.validate(strict)?;
    let p = &pp.program;
    Program::new(p.vars.clone(), p.init.clone(), next_psi(pp, psi)?, p.fairness.clone())
}

/// `P_Ψ` for a resolving function given by formulas, keyed by hole
/// location: over `v_r` for a condition hole and over `v_r, v_r'` for an
/// assignment hole. Unlike [`apply_resolving`] nothing is checked about
/// totality, so a filling may be partial on a finite domain.
pub fn apply_formulas(pp: &PartialProgram, fills: &[(String, Formula)]) -> Result<Program> {
    let holes = make_hole_predicates(pp)?;
    if let Some((l, _)) = fills.iter().find(|(l, _)| !holes.iter().any(|h| h.hole.loc() == l)) {
        return Err(Error::Hole(format!("no hole at location `{l}`")));
    }
    let parts = hole_disjuncts(pp, &holes, &|hp| {
        let (_, f) = fills
            .iter()
            .find(|(l, _)| l == hp.hole.loc())
            .ok_or_else(|| Error::Hole(format!("no filling given for the hole at `{}`", hp.hole.loc())))?;
        if let Some(v) = f.vars().iter().find(|v| !hp.pred.params.contains(v)) {
            return Err(Error::Hole(format!("the filling of `{}` mentions `{v}`", hp.hole.loc())));
        }
        Ok(f.clone())
    })?;
    let p = &pp.program;
    let next = Formula::or(parts.into_iter().chain(std::iter::once(p.next.clone())));
    Program::new(p.vars.clone(), p.init.clone(), next, p.fairness.clone())
}

/// Read a resolving function off an interpretation of the hole predicates.
pub fn extract_resolving(interp: &Interpretation, holes: &[HolePred]) -> Result<ResolvingFunction> {
    let mut fills = Vec::new();
    for hp in holes {
        let rel = interp
            .get(&hp.pred.name)
            .ok_or_else(|| Error::Interpretation(format!("no relation given for hole predicate `{}`", hp.pred.name)))?;
        fills.push((hp.clone(), rel.clone()));
    }
    let psi = ResolvingFunction { fills };
    psi.validate(false)?;
    Ok(psi)
}

/// Every resolving function over `domains`, in a fixed order, failing with
/// [`Error::CapExceeded`] if there are more than `limit`.
pub fn enumerate_resolving(
    holes: &[HolePred],
    domains: &Domains,
    strict: bool,
    limit: usize,
) -> Result<Vec<ResolvingFunction>> {
    let mut options: Vec<Vec<Relation>> = Vec::new();
    for hp in holes {
        let empty = Relation::empty(&hp.pred, domains)?;
        let opts = match hp.hole {
            Hole::Cond { .. } => {
                let n = empty.space();
                if n >= 20 || (1usize << n) > limit {
                    return Err(Error::CapExceeded(format!("condition hole `{}` has 2^{n} fillings", hp.hole.loc())));
                }
                (0..1usize << n)
                    .map(|mask| {
                        let mut r = empty.clone();
                        (0..n).filter(|i| mask >> i & 1 == 1).for_each(|i| r.bits.insert(i));
                        r
                    })
                    .collect()
            }
            Hole::Assign { .. } => {
                let m = empty.half_space()?;
                let rows: Vec<usize> = if strict {
                    (0..m).map(|b| 1usize << b).collect()
                } else {
                    if m >= 20 {
                        return Err(Error::CapExceeded(format!("assignment hole `{}` is too large", hp.hole.loc())));
                    }
                    (1..1usize << m).collect()
                };
                let total = (rows.len() as f64).powi(m as i32);
                if total > limit as f64 {
                    return Err(Error::CapExceeded(format!(
                        "assignment hole `{}` has {total} fillings",
                        hp.hole.loc()
                    )));
                }
                let mut out = vec![empty.clone()];
                for a in 0..m {
                    let mut next = Vec::with_capacity(out.len() * rows.len());
                    for r in &out {
                        for &row in &rows {
                            let mut r = r.clone();
                            (0..m).filter(|b| row >> b & 1 == 1).for_each(|b| r.bits.insert(a * m + b));
                            next.push(r);
                        }
                    }
                    out = next;
                }
                out
            }
        };
        options.push(opts);
    }
    let total: f64 = options.iter().map(|o| o.len() as f64).product();
    if total > limit as f64 {
        return Err(Error::CapExceeded(format!("{total} resolving functions exceed the limit of {limit}")));
    }
    let mut out = vec![Vec::new()];
    for (hp, opts) in holes.iter().zip(&options) {
        let mut next = Vec::new();
        for prefix in &out {
            for r in opts {
                let mut p: Vec<(HolePred, Relation)> = prefix.clone();
                p.push((hp.clone(), r.clone()));
                next.push(p);
            }
        }
        out = next;
    }
    Ok(out.into_iter().map(|fills| ResolvingFunction { fills }).collect())
}
