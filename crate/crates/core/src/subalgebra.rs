//! Subalgebra closure and enumeration.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::algebra::{FiniteAlgebra, SugiharaChain};
use crate::error::{Error, Result};

/// Least subset of `alg` containing `seeds` and closed under ∧, ∨, →, ¬.
/// Returned sorted.
pub fn closure(alg: &FiniteAlgebra, seeds: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; alg.size()];
    let mut members = Vec::new();
    let mut queue = VecDeque::new();
    for &s in seeds {
        if !inside[s] {
            inside[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(a) = queue.pop_front() {
        members.push(a);
        let mut add = |x: usize, queue: &mut VecDeque<usize>| {
            if !inside[x] {
                inside[x] = true;
                queue.push_back(x);
            }
        };
        add(alg.neg(a), &mut queue);
        for i in 0..members.len() {
            let b = members[i];
            for x in [
                alg.meet(a, b),
                alg.join(a, b),
                alg.implies(a, b),
                alg.implies(b, a),
            ] {
                add(x, &mut queue);
            }
        }
    }
    members.sort_unstable();
    members
}

pub fn is_closed(alg: &FiniteAlgebra, subset: &[usize]) -> bool {
    let set: HashSet<usize> = subset.iter().copied().collect();
    subset.iter().all(|&a| {
        set.contains(&alg.neg(a))
            && subset.iter().all(|&b| {
                set.contains(&alg.meet(a, b))
                    && set.contains(&alg.join(a, b))
                    && set.contains(&alg.implies(a, b))
            })
    })
}

/// The subalgebra generated by `seeds`, with induced tables.
pub fn generated_subalgebra(alg: &FiniteAlgebra, seeds: &[usize]) -> Result<FiniteAlgebra> {
    if seeds.is_empty() {
        return Err(Error::InvalidSize("generating set must be non-empty".into()));
    }
    if let Some(&bad) = seeds.iter().find(|&&s| s >= alg.size()) {
        return Err(Error::NotInCarrier(format!("#{bad}")));
    }
    let members = closure(alg, seeds);
    alg.induced(format!("Sg({})", alg.name()), &members)
}

/// Every non-empty subalgebra universe of `alg`, each sorted, ordered by size
/// and then lexicographically.
pub fn all_subalgebras(alg: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    for a in 0..alg.size() {
        let c = closure(alg, &[a]);
        if seen.insert(c.clone()) {
            queue.push_back(c);
        }
    }
    while let Some(sub) = queue.pop_front() {
        let mut inside = vec![false; alg.size()];
        for &e in &sub {
            inside[e] = true;
        }
        for x in 0..alg.size() {
            if inside[x] {
                continue;
            }
            let mut seeds = sub.clone();
            seeds.push(x);
            let c = closure(alg, &seeds);
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Subalgebras of Z_k read off the pair structure: every non-empty union of
/// blocks {a, -a} (and {0} when k is odd). Ordered as [`all_subalgebras`].
pub fn subalgebras(z: &SugiharaChain) -> Vec<FiniteAlgebra> {
    chain_subalgebra_universes(z)
        .into_iter()
        .map(|u| {
            let name = format!("Z{}[{}]", z.k(), u.iter().map(|&i| z.value(i).to_string()).collect::<Vec<_>>().join(","));
            z.algebra().induced(name, &u).expect("unions of pairs are closed")
        })
        .collect()
}

/// Index sets of the subalgebras of Z_k.
pub fn chain_subalgebra_universes(z: &SugiharaChain) -> Vec<Vec<usize>> {
    let blocks: Vec<Vec<usize>> = (if z.is_odd() { 0 } else { 1 }..=z.n() as i32)
        .map(|m| {
            let mut b = vec![z.index(m).unwrap()];
            if m != 0 {
                b.push(z.index(-m).unwrap());
            }
            b
        })
        .collect();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << blocks.len()) {
        let mut u: Vec<usize> = blocks
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .flat_map(|(_, b)| b.iter().copied())
            .collect();
        u.sort_unstable();
        out.push(u);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}
