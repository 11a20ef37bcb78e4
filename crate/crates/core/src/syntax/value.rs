//! Sorts and values.

use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

/// A finite enumerated sort, used for program counters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocSort(pub Arc<[String]>);

impl LocSort {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(labels: I) -> Self {
        LocSort(labels.into_iter().map(Into::into).collect::<Vec<_>>().into())
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, label: &str) -> Option<u32> {
        self.0.iter().position(|l| l == label).map(|i| i as u32)
    }
}

/// Sort of a program variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sort {
    Bool,
    Int,
    Rat,
    Loc(LocSort),
}

impl Sort {
    pub fn is_numeric(&self) -> bool {
        matches!(self, Sort::Int | Sort::Rat)
    }

    pub fn admits(&self, v: &Value) -> bool {
        match (self, v) {
            (Sort::Bool, Value::Bool(_)) => true,
            (Sort::Int, Value::Num(q)) => q.is_integer(),
            (Sort::Rat, Value::Num(_)) => true,
            (Sort::Loc(l), Value::Loc(i)) => (*i as usize) < l.0.len(),
            _ => false,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => write!(f, "Bool"),
            Sort::Int => write!(f, "Int"),
            Sort::Rat => write!(f, "Rat"),
            Sort::Loc(l) => write!(f, "{{{}}}", l.0.join(",")),
        }
    }
}

/// A concrete value. Integers and rationals share one representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Value {
    Bool(bool),
    Num(Rational64),
    Loc(u32),
}

impl Value {
    pub fn int(i: i64) -> Self {
        Value::Num(Rational64::from_integer(i))
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Num(q) => write!(f, "{}", fmt_rational(q)),
            Value::Loc(i) => write!(f, "#{i}"),
        }
    }
}

/// Render a rational as an integer, a terminating decimal, or `n/d`.
pub fn fmt_rational(q: &Rational64) -> String {
    if q.is_integer() {
        return q.to_integer().to_string();
    }
    let mut d = *q.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d == 1 {
        let digits = twos.max(fives);
        let scale = 10i128.pow(digits);
        let scaled = (*q.numer() as i128) * scale / (*q.denom() as i128);
        let neg = q.is_negative();
        let a = scaled.abs();
        let int = a / scale;
        let frac = a % scale;
        let s = format!("{int}.{frac:0width$}", width = digits as usize);
        if neg {
            format!("-{s}")
        } else {
            s
        }
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(fmt_rational(&Rational64::new(1, 10)), "0.1");
        assert_eq!(fmt_rational(&Rational64::new(-3, 50)), "-0.06");
        assert_eq!(fmt_rational(&Rational64::new(7, 4)), "1.75");
        assert_eq!(fmt_rational(&Rational64::new(1, 3)), "1/3");
        assert_eq!(fmt_rational(&Rational64::from_integer(-4)), "-4");
    }

    #[test]
    fn sort_admits() {
        assert!(Sort::Int.admits(&Value::int(3)));
        assert!(!Sort::Int.admits(&Value::Num(Rational64::new(1, 2))));
        assert!(Sort::Rat.admits(&Value::Num(Rational64::new(1, 2))));
        assert!(!Sort::Bool.admits(&Value::int(0)));
        let l = Sort::Loc(LocSort::new(["a", "b"]));
        assert!(l.admits(&Value::Loc(1)) && !l.admits(&Value::Loc(2)));
    }
}
