//! The congruence chain ≈_0 ⊆ ≈_1 ⊆ … ⊆ ≈_n of Z_k.

use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteAlgebra, SugiharaChain};

/// A congruence ≈_m of Z_k: a = b, or both a and b lie in the inner
/// sub-chain {-m, …, m}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    pub m: usize,
    /// Block id per carrier index. Block ids are assigned in order of first
    /// appearance along the carrier.
    pub class_of: Vec<usize>,
}

impl Congruence {
    /// ≈_m on Z_k.
    pub fn level(z: &SugiharaChain, m: usize) -> Congruence {
        let mut class_of = Vec::with_capacity(z.k());
        let mut inner: Option<usize> = None;
        let mut next = 0;
        for &v in z.values() {
            if v.unsigned_abs() as usize <= m {
                let id = *inner.get_or_insert_with(|| {
                    next += 1;
                    next - 1
                });
                class_of.push(id);
            } else {
                class_of.push(next);
                next += 1;
            }
        }
        Congruence { m, class_of }
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Blocks as sorted index lists, ordered by least member.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let count = self.class_of.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count];
        for (i, &c) in self.class_of.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks().iter().all(|b| b.len() == 1)
    }

    pub fn is_full(&self) -> bool {
        self.blocks().len() == 1
    }
}

/// The congruence lattice of Z_k, which is the chain ≈_0, …, ≈_n.
pub fn congruences(z: &SugiharaChain) -> Vec<Congruence> {
    (0..=z.n()).map(|m| Congruence::level(z, m)).collect()
}

/// Whether the partition `class_of` is compatible with all four operations.
pub fn is_compatible(alg: &FiniteAlgebra, class_of: &[usize]) -> bool {
    let n = alg.size();
    for a in 0..n {
        for b in 0..n {
            if class_of[a] != class_of[b] {
                continue;
            }
            if class_of[alg.neg(a)] != class_of[alg.neg(b)] {
                return false;
            }
            for c in 0..n {
                let ops = [
                    (alg.meet(a, c), alg.meet(b, c)),
                    (alg.join(a, c), alg.join(b, c)),
                    (alg.implies(a, c), alg.implies(b, c)),
                    (alg.implies(c, a), alg.implies(c, b)),
                ];
                if ops.iter().any(|&(x, y)| class_of[x] != class_of[y]) {
                    return false;
                }
            }
        }
    }
    true
}
