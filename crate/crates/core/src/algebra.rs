//! Finite algebras in the signature (∧, ∨, →, ¬) and the Sugihara chains Z_k.
//!
//! Elements are addressed by dense indices `0..size`. Every index carries a
//! label: a tuple of integers. For a chain the label is the one-tuple holding
//! the integer value; for powers, subalgebras of powers and algebras of
//! morphisms it is the tuple of coordinates.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_bound, size_bound, Error, Result};

/// Label of an element: its integer coordinates.
pub type Tuple = Vec<i32>;

/// Render a label: bare integer for one-tuples, parenthesised list otherwise.
pub fn fmt_tuple(t: &[i32]) -> String {
    if t.len() == 1 {
        t[0].to_string()
    } else {
        let parts: Vec<String> = t.iter().map(|v| v.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Sugihara implication on integers.
#[inline]
pub fn implies_value(a: i32, b: i32) -> i32 {
    if a <= b {
        (-a).max(b)
    } else {
        (-a).min(b)
    }
}

/// Modulus |a| = a ∨ ¬a.
#[inline]
pub fn modulus_value(a: i32) -> i32 {
    a.max(-a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// The carrier of Z_k in ascending order.
pub fn chain_values(k: usize) -> Vec<i32> {
    let n = (k / 2) as i32;
    (-n..=n).filter(|&v| v != 0 || k % 2 == 1).collect()
}

/// Index of `v` in the ascending carrier of Z_k, if present.
#[inline]
pub fn chain_index(k: usize, v: i32) -> Option<usize> {
    let n = (k / 2) as i32;
    if v < -n || v > n {
        return None;
    }
    if k % 2 == 1 || v < 0 {
        Some((v + n) as usize)
    } else if v > 0 {
        Some((v + n - 1) as usize)
    } else {
        None
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Dense(Dense),
    Power(Power),
}

#[derive(Clone, Debug)]
struct Dense {
    labels: Vec<Tuple>,
    index: HashMap<Tuple, usize>,
    meet: Vec<u32>,
    join: Vec<u32>,
    implies: Vec<u32>,
    neg: Vec<u32>,
}

/// Z_k^s with operations computed coordinatewise from mixed-radix indices.
#[derive(Clone, Debug)]
struct Power {
    k: usize,
    values: Vec<i32>,
    arity: usize,
    size: usize,
}

impl Power {
    fn digits(&self, mut i: usize) -> Vec<usize> {
        let mut d = vec![0; self.arity];
        for slot in d.iter_mut().rev() {
            *slot = i % self.k;
            i /= self.k;
        }
        d
    }

    fn binary(&self, a: usize, b: usize, op: impl Fn(i32, i32) -> i32) -> usize {
        let (da, db) = (self.digits(a), self.digits(b));
        da.iter().zip(&db).fold(0, |acc, (&x, &y)| {
            let v = op(self.values[x], self.values[y]);
            acc * self.k + chain_index(self.k, v).expect("chain closed")
        })
    }
}

/// A finite algebra (A; ∧, ∨, →, ¬).
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    name: String,
    repr: Repr,
}

impl FiniteAlgebra {
    /// Build from explicit tables. Tables are validated for closure and the
    /// labels for distinctness; no algebraic laws are imposed.
    pub fn from_tables(
        name: impl Into<String>,
        labels: Vec<Tuple>,
        meet: Vec<u32>,
        join: Vec<u32>,
        implies: Vec<u32>,
        neg: Vec<u32>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidSize("empty carrier".into()));
        }
        for (what, table, len) in [
            ("meet", &meet, n * n),
            ("join", &join, n * n),
            ("implies", &implies, n * n),
            ("neg", &neg, n),
        ] {
            if table.len() != len {
                return Err(Error::Malformed(format!(
                    "{what} table has {} entries, expected {len}",
                    table.len()
                )));
            }
            if let Some(bad) = table.iter().find(|&&e| e as usize >= n) {
                return Err(Error::NotClosed(format!("{what} table entry {bad}")));
            }
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate element {}", fmt_tuple(l))));
            }
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            repr: Repr::Dense(Dense {
                labels,
                index,
                meet,
                join,
                implies,
                neg,
            }),
        })
    }

    /// Build the subalgebra of a power of Z with the given labels, computing
    /// every operation coordinatewise on the integers. Fails if the labels are
    /// not closed under the operations.
    pub fn pointwise(name: impl Into<String>, labels: Vec<Tuple>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidSize("empty carrier".into()));
        }
        let arity = labels[0].len();
        if labels.iter().any(|l| l.len() != arity) {
            return Err(Error::Malformed("labels of mixed arity".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate element {}", fmt_tuple(l))));
            }
        }
        let lookup = |t: Tuple| -> Result<u32> {
            index
                .get(&t)
                .map(|&i| i as u32)
                .ok_or_else(|| Error::NotClosed(fmt_tuple(&t)))
        };
        let zip = |a: &Tuple, b: &Tuple, f: fn(i32, i32) -> i32| -> Tuple {
            a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
        };
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        let mut implies = Vec::with_capacity(n * n);
        for a in &labels {
            for b in &labels {
                meet.push(lookup(zip(a, b, i32::min))?);
                join.push(lookup(zip(a, b, i32::max))?);
                implies.push(lookup(zip(a, b, implies_value))?);
            }
        }
        let neg = labels
            .iter()
            .map(|a| lookup(a.iter().map(|v| -v).collect()))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteAlgebra {
            name: name.into(),
            repr: Repr::Dense(Dense {
                labels,
                index,
                meet,
                join,
                implies,
                neg,
            }),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.labels.len(),
            Repr::Power(p) => p.size,
        }
    }

    /// Whether the operation tables are stored explicitly.
    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense(_))
    }

    pub fn label(&self, i: usize) -> Tuple {
        match &self.repr {
            Repr::Dense(d) => d.labels[i].clone(),
            Repr::Power(p) => p.digits(i).into_iter().map(|x| p.values[x]).collect(),
        }
    }

    pub fn labels(&self) -> Vec<Tuple> {
        (0..self.size()).map(|i| self.label(i)).collect()
    }

    pub fn index_of(&self, t: &[i32]) -> Option<usize> {
        match &self.repr {
            Repr::Dense(d) => d.index.get(t).copied(),
            Repr::Power(p) => {
                if t.len() != p.arity {
                    return None;
                }
                t.iter().try_fold(0usize, |acc, &v| {
                    chain_index(p.k, v).map(|x| acc * p.k + x)
                })
            }
        }
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.meet[a * d.labels.len() + b] as usize,
            Repr::Power(p) => p.binary(a, b, i32::min),
        }
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.join[a * d.labels.len() + b] as usize,
            Repr::Power(p) => p.binary(a, b, i32::max),
        }
    }

    #[inline]
    pub fn implies(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.implies[a * d.labels.len() + b] as usize,
            Repr::Power(p) => p.binary(a, b, implies_value),
        }
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.neg[a] as usize,
            Repr::Power(p) => {
                let d = p.digits(a);
                d.iter().fold(0, |acc, &x| {
                    acc * p.k + chain_index(p.k, -p.values[x]).expect("chain closed")
                })
            }
        }
    }

    /// |a| = a → a.
    pub fn modulus(&self, a: usize) -> usize {
        self.implies(a, a)
    }

    /// Lattice order: a ≤ b iff a ∧ b = a.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    /// The subalgebra on `subset` (indices of `self`), with induced tables.
    /// Fails if `subset` is not closed.
    pub fn induced(&self, name: impl Into<String>, subset: &[usize]) -> Result<Self> {
        let mut pos = HashMap::with_capacity(subset.len());
        for (i, &e) in subset.iter().enumerate() {
            if e >= self.size() {
                return Err(Error::NotInCarrier(e.to_string()));
            }
            pos.insert(e, i as u32);
        }
        let get = |e: usize| -> Result<u32> {
            pos.get(&e)
                .copied()
                .ok_or_else(|| Error::NotClosed(fmt_tuple(&self.label(e))))
        };
        let n = subset.len();
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        let mut implies = Vec::with_capacity(n * n);
        for &a in subset {
            for &b in subset {
                meet.push(get(self.meet(a, b))?);
                join.push(get(self.join(a, b))?);
                implies.push(get(self.implies(a, b))?);
            }
        }
        let neg = subset
            .iter()
            .map(|&a| get(self.neg(a)))
            .collect::<Result<Vec<_>>>()?;
        let labels = subset.iter().map(|&e| self.label(e)).collect();
        Self::from_tables(name, labels, meet, join, implies, neg)
    }

    /// Materialise explicit tables (needed for export).
    pub fn to_dense(&self) -> Result<Self> {
        if self.is_dense() {
            return Ok(self.clone());
        }
        let n = self.size() as u128;
        check_bound("dense operation tables", n * n, size_bound())?;
        let all: Vec<usize> = (0..self.size()).collect();
        self.induced(self.name.clone(), &all)
    }

    pub fn to_data(&self) -> Result<AlgebraData> {
        let dense = self.to_dense()?;
        let Repr::Dense(d) = &dense.repr else {
            unreachable!()
        };
        let n = d.labels.len();
        let rows = |t: &Vec<u32>| -> Vec<Vec<u32>> { t.chunks(n).map(|r| r.to_vec()).collect() };
        Ok(AlgebraData {
            name: self.name.clone(),
            carrier: d.labels.clone(),
            meet: rows(&d.meet),
            join: rows(&d.join),
            implies: rows(&d.implies),
            neg: d.neg.clone(),
        })
    }

    pub fn from_data(data: AlgebraData) -> Result<Self> {
        let n = data.carrier.len();
        let flat = |what: &str, rows: Vec<Vec<u32>>| -> Result<Vec<u32>> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Malformed(format!("{what} table is not {n}x{n}")));
            }
            Ok(rows.into_iter().flatten().collect())
        };
        let meet = flat("meet", data.meet)?;
        let join = flat("join", data.join)?;
        let implies = flat("implies", data.implies)?;
        Self::from_tables(data.name, data.carrier, meet, join, implies, data.neg)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(&self.to_data()?).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: AlgebraData =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_data(data)
    }
}

impl PartialEq for FiniteAlgebra {
    /// Equal carriers (same labels, same order) and equal operation tables.
    fn eq(&self, other: &Self) -> bool {
        let n = self.size();
        if n != other.size() || (0..n).any(|i| self.label(i) != other.label(i)) {
            return false;
        }
        (0..n).all(|a| {
            self.neg(a) == other.neg(a)
                && (0..n).all(|b| {
                    self.meet(a, b) == other.meet(a, b)
                        && self.join(a, b) == other.join(a, b)
                        && self.implies(a, b) == other.implies(a, b)
                })
        })
    }
}

/// Tree-format export of a finite algebra: carrier list plus four tables
/// given by carrier positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraData {
    pub name: String,
    pub carrier: Vec<Tuple>,
    pub meet: Vec<Vec<u32>>,
    pub join: Vec<Vec<u32>>,
    pub implies: Vec<Vec<u32>>,
    pub neg: Vec<u32>,
}

/// The Sugihara chain Z_k.
#[derive(Clone, Debug)]
pub struct SugiharaChain {
    k: usize,
    values: Vec<i32>,
    algebra: FiniteAlgebra,
}

impl SugiharaChain {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSize("Z_k needs k >= 1".into()));
        }
        let values = chain_values(k);
        let labels = values.iter().map(|&v| vec![v]).collect();
        let algebra = FiniteAlgebra::pointwise(format!("Z{k}"), labels)?;
        Ok(SugiharaChain { k, values, algebra })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// n with k ∈ {2n, 2n+1}.
    pub fn n(&self) -> usize {
        self.k / 2
    }

    pub fn parity(&self) -> Parity {
        if self.k % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(&self) -> bool {
        self.k % 2 == 1
    }

    /// Carrier in ascending order.
    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn value(&self, i: usize) -> i32 {
        self.values[i]
    }

    pub fn index(&self, v: i32) -> Option<usize> {
        chain_index(self.k, v)
    }

    pub fn contains(&self, v: i32) -> bool {
        self.index(v).is_some()
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    /// → on values, read from the precomputed table.
    pub fn implies(&self, a: i32, b: i32) -> Result<i32> {
        let i = self.index(a).ok_or_else(|| Error::NotInCarrier(a.to_string()))?;
        let j = self.index(b).ok_or_else(|| Error::NotInCarrier(b.to_string()))?;
        Ok(self.values[self.algebra.implies(i, j)])
    }
}

impl fmt::Display for SugiharaChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "Z{} = {{{}}}", self.k, parts.join(", "))
    }
}

/// Z_k^s with coordinatewise operations. Elements are ordered
/// lexicographically, first coordinate most significant.
pub fn power_algebra(z: &SugiharaChain, s: usize) -> Result<FiniteAlgebra> {
    power_algebra_bounded(z, s, size_bound())
}

pub fn power_algebra_bounded(z: &SugiharaChain, s: usize, bound: u128) -> Result<FiniteAlgebra> {
    if s == 0 {
        return Err(Error::InvalidSize("power exponent must be >= 1".into()));
    }
    let size = (z.k() as u128)
        .checked_pow(s as u32)
        .unwrap_or(u128::MAX);
    check_bound(format!("Z{}^{}", z.k(), s), size, bound)?;
    Ok(FiniteAlgebra {
        name: format!("Z{}^{}", z.k(), s),
        repr: Repr::Power(Power {
            k: z.k(),
            values: z.values().to_vec(),
            arity: s,
            size: size as usize,
        }),
    })
}

/// All s-tuples over `values`, lexicographic with the first coordinate most
/// significant.
pub fn tuples(values: &[i32], s: usize) -> Vec<Tuple> {
    let mut out = vec![Vec::with_capacity(s)];
    for _ in 0..s {
        out = out
            .into_iter()
            .flat_map(|t| {
                values.iter().map(move |&v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}
