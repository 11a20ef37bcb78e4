//! Well-foundedness of finite binary relations between tuples.
//!
//! A relation of arity `2n` is read as a binary relation between the
//! `n`-tuples of its two halves.

use fixedbitset::FixedBitSet;

use super::relation::Relation;
use crate::Result;

fn rows(r: &Relation) -> Result<Vec<FixedBitSet>> {
    let m = r.half_space()?;
    let mut rows = vec![FixedBitSet::with_capacity(m); m];
    for i in r.bits.ones() {
        rows[i / m].insert(i % m);
    }
    Ok(rows)
}

/// The transitive closure, as a relation of the same predicate.
pub fn transitive_closure(r: &Relation) -> Result<Relation> {
    let m = r.half_space()?;
    let mut rows = rows(r)?;
    for k in 0..m {
        let rk = rows[k].clone();
        for row in rows.iter_mut() {
            if row.contains(k) {
                row.union_with(&rk);
            }
        }
    }
    let mut out = r.clone();
    out.bits.clear();
    for (a, row) in rows.iter().enumerate() {
        for b in row.ones() {
            out.bits.insert(a * m + b);
        }
    }
    Ok(out)
}

/// No infinite descending chain: on a finite carrier, no cycle. Decided by
/// repeatedly removing tuples without successors.
pub fn is_well_founded(r: &Relation) -> Result<bool> {
    let m = r.half_space()?;
    let rows = rows(r)?;
    let mut out_degree: Vec<usize> = rows.iter().map(|row| row.count_ones(..)).collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (a, row) in rows.iter().enumerate() {
        for b in row.ones() {
            preds[b].push(a);
        }
    }
    let mut stack: Vec<usize> = (0..m).filter(|&a| out_degree[a] == 0).collect();
    let mut removed = 0;
    while let Some(b) = stack.pop() {
        removed += 1;
        for &a in &preds[b] {
            out_degree[a] -= 1;
            if out_degree[a] == 0 {
                stack.push(a);
            }
        }
    }
    Ok(removed == m)
}

/// Disjunctive well-foundedness of a transitive relation: it is irreflexive.
/// Apply to the transitive closure to decide an arbitrary relation.
pub fn check_dwf(r: &Relation) -> Result<bool> {
    let m = r.half_space()?;
    Ok((0..m).all(|a| !r.bits.contains(a * m + a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Domains, PredSym, Sort, Value, Var};

    fn rel(pairs: &[(i64, i64)]) -> Relation {
        let x = Var::new("x", Sort::Int);
        let p = PredSym::new("r", vec![x.clone(), x.primed()]);
        let d = Domains::new().with_int_range(0, 3);
        let mut r = Relation::empty(&p, &d).unwrap();
        for &(a, b) in pairs {
            r.insert(&[Value::int(a), Value::int(b)]).unwrap();
        }
        r
    }

    #[test]
    fn chains_and_cycles() {
        let chain = rel(&[(0, 1), (1, 2), (2, 3)]);
        assert!(is_well_founded(&chain).unwrap());
        assert!(check_dwf(&transitive_closure(&chain).unwrap()).unwrap());
        assert_eq!(transitive_closure(&chain).unwrap().count(), 6);
        let cycle = rel(&[(0, 1), (1, 2), (2, 0)]);
        assert!(!is_well_founded(&cycle).unwrap());
        assert!(check_dwf(&cycle).unwrap());
        assert!(!check_dwf(&transitive_closure(&cycle).unwrap()).unwrap());
        assert!(!is_well_founded(&rel(&[(3, 3)])).unwrap());
    }
}
