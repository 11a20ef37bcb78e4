//! Finite interpretations of predicates as dense bit relations.

use std::collections::BTreeMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::syntax::{Domains, PredSym, Value};
use crate::{Error, Result};

/// Largest tuple space a single relation may span.
pub const MAX_TUPLES: usize = 1 << 26;

/// A relation over the finite domains of a predicate's parameters. Tuples
/// are indexed in mixed radix, first position most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub pred: Arc<PredSym>,
    doms: Vec<Arc<[Value]>>,
    strides: Vec<usize>,
    pub bits: FixedBitSet,
}

impl Relation {
    pub fn empty(pred: &Arc<PredSym>, domains: &Domains) -> Result<Self> {
        let doms = pred.params.iter().map(|v| domains.values(v)).collect::<Result<Vec<_>>>()?;
        let mut strides = vec![0; doms.len()];
        let mut size: usize = 1;
        for i in (0..doms.len()).rev() {
            strides[i] = size;
            size = size
                .checked_mul(doms[i].len())
                .filter(|&s| s <= MAX_TUPLES)
                .ok_or_else(|| Error::Interpretation(format!("tuple space of `{}` is too large", pred.name)))?;
        }
        Ok(Relation { pred: pred.clone(), doms, strides, bits: FixedBitSet::with_capacity(size) })
    }

    pub fn full(pred: &Arc<PredSym>, domains: &Domains) -> Result<Self> {
        let mut r = Self::empty(pred, domains)?;
        r.bits.insert_range(..);
        Ok(r)
    }

    pub fn from_tuples<'t>(
        pred: &Arc<PredSym>,
        domains: &Domains,
        tuples: impl IntoIterator<Item = &'t [Value]>,
    ) -> Result<Self> {
        let mut r = Self::empty(pred, domains)?;
        for t in tuples {
            r.insert(t)?;
        }
        Ok(r)
    }

    pub fn arity(&self) -> usize {
        self.doms.len()
    }

    /// Number of tuples in the tuple space.
    pub fn space(&self) -> usize {
        self.bits.len()
    }

    /// Number of tuples in the relation.
    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn domain(&self, pos: usize) -> &[Value] {
        &self.doms[pos]
    }

    pub fn value_index(&self, pos: usize, v: &Value) -> Option<usize> {
        self.doms[pos].binary_search(v).ok()
    }

    /// Index of a tuple, `None` when some value lies outside its domain.
    pub fn index(&self, tuple: &[Value]) -> Option<usize> {
        if tuple.len() != self.doms.len() {
            return None;
        }
        let mut i = 0;
        for (pos, v) in tuple.iter().enumerate() {
            i += self.value_index(pos, v)? * self.strides[pos];
        }
        Some(i)
    }

    pub fn tuple(&self, mut index: usize) -> Vec<Value> {
        let mut out = Vec::with_capacity(self.doms.len());
        for (d, s) in self.doms.iter().zip(&self.strides) {
            out.push(d[index / s].clone());
            index %= s;
        }
        out
    }

    /// The index range of the tuples that start with `prefix`, empty when a
    /// prefix value lies outside its domain.
    pub fn prefix_range(&self, prefix: &[Value]) -> std::ops::Range<usize> {
        let mut start = 0;
        for (pos, v) in prefix.iter().enumerate() {
            match self.value_index(pos, v) {
                Some(i) => start += i * self.strides[pos],
                None => return 0..0,
            }
        }
        let len = match prefix.len() {
            0 => self.space(),
            n => self.strides[n - 1],
        };
        start..start + len
    }

    /// Indices of the tuples in the relation that lie in `range`.
    pub fn ones_in(&self, range: std::ops::Range<usize>) -> impl Iterator<Item = usize> + '_ {
        let words = self.bits.as_slice();
        let bits = u32::BITS as usize;
        let (lo, hi) = (range.start, range.end.min(self.space()));
        let first = lo / bits;
        let last = if hi == 0 { 0 } else { hi.div_ceil(bits) };
        (first..last.max(first))
            .flat_map(move |w| {
                let mut word = words[w];
                std::iter::from_fn(move || {
                    if word == 0 {
                        return None;
                    }
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * bits + b)
                })
            })
            .filter(move |&i| i >= lo && i < hi)
    }

    pub fn contains(&self, tuple: &[Value]) -> bool {
        self.index(tuple).is_some_and(|i| self.bits.contains(i))
    }

    pub fn insert(&mut self, tuple: &[Value]) -> Result<()> {
        let i = self.index(tuple).ok_or_else(|| {
            Error::Interpretation(format!(
                "tuple ({}) is outside the domain of `{}`",
                tuple.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "),
                self.pred.name
            ))
        })?;
        self.bits.insert(i);
        Ok(())
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<Value>> + '_ {
        self.bits.ones().map(|i| self.tuple(i))
    }

    pub fn complement(&self) -> Self {
        let mut r = self.clone();
        r.bits.toggle_range(..);
        r
    }

    /// The same tuples under another predicate with identical domains.
    pub fn renamed(&self, pred: &Arc<PredSym>) -> Self {
        Relation { pred: pred.clone(), ..self.clone() }
    }

    /// For a relation of even arity whose halves share domains: the size of
    /// one half's tuple space.
    pub fn half_space(&self) -> Result<usize> {
        let n = self.doms.len();
        if !n.is_multiple_of(2) || self.doms[..n / 2] != self.doms[n / 2..] {
            return Err(Error::Interpretation(format!("`{}` is not a relation between like tuples", self.pred.name)));
        }
        Ok(self.doms[..n / 2].iter().map(|d| d.len()).product())
    }
}

/// Relations by predicate name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub rels: BTreeMap<String, Relation>,
}

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, r: Relation) {
        self.rels.insert(r.pred.name.to_string(), r);
    }

    pub fn get(&self, name: &str) -> Option<&Relation> {
        self.rels.get(name)
    }

    /// Whether `pred(args)` holds; uninterpreted predicates hold nowhere.
    pub fn holds(&self, pred: &PredSym, args: &[Value]) -> bool {
        self.rels.get(&*pred.name).is_some_and(|r| r.contains(args))
    }

    pub fn atom_eval(&self) -> impl Fn(&Arc<PredSym>, &[Value]) -> bool + '_ {
        move |p, args| self.holds(p, args)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Sort, Var};

    #[test]
    fn index_round_trip() {
        let d = Domains::new().with_int_range(0, 2);
        let p = PredSym::new("p", vec![Var::new("x", Sort::Int), Var::new("b", Sort::Bool), Var::new("y", Sort::Int)]);
        let r = Relation::empty(&p, &d).unwrap();
        assert_eq!(r.space(), 18);
        for i in 0..r.space() {
            assert_eq!(r.index(&r.tuple(i)), Some(i));
        }
        assert_eq!(r.index(&[Value::int(3), Value::Bool(true), Value::int(0)]), None);
    }

    #[test]
    fn prefix_blocks() {
        let d = Domains::new().with_int_range(0, 39);
        let x = Var::new("x", Sort::Int);
        let p = PredSym::new("t", vec![x.clone(), x.primed()]);
        let mut r = Relation::empty(&p, &d).unwrap();
        for (a, b) in [(0, 0), (0, 39), (1, 5), (7, 31), (7, 32), (39, 39)] {
            r.insert(&[Value::int(a), Value::int(b)]).unwrap();
        }
        for a in 0..40 {
            let got: Vec<usize> = r.ones_in(r.prefix_range(&[Value::int(a)])).collect();
            let want: Vec<usize> = r.bits.ones().filter(|&i| r.tuple(i)[0] == Value::int(a)).collect();
            assert_eq!(got, want);
        }
        assert_eq!(r.ones_in(r.prefix_range(&[])).count(), 6);
        assert!(r.prefix_range(&[Value::int(40)]).is_empty());
    }
}
