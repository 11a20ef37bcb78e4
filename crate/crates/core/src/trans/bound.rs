//! Concrete clause-count bound `C·n·(n+k) + C′`.
//!
//! `n` is the size of the specification after negation normal form and `k`
//! the number of fairness conditions. The constants were measured on the
//! fixture corpus and then frozen; the corpus tests check that no
//! translation exceeds the bound. Head-disjunction and negation encoding
//! contribute a constant number of clauses per occurrence, which is why the
//! constants are larger than a count of rule listings would suggest.

pub const C: usize = 8;
pub const C_PRIME: usize = 8;

pub fn clause_count_bound(n: usize, k: usize) -> usize {
    C * n * (n + k) + C_PRIME
}
