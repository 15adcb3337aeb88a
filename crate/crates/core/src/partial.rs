//! Partial endomorphisms of Z_k and the monoid PEZ(k) they form under
//! composition (with the empty map adjoined).

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::algebra::SugiharaChain;
use crate::error::{Error, Result};
use crate::homomorphism::enumerate_homomorphisms;
use crate::subalgebra::{chain_subalgebra_universes, closure};

/// A partial self-map of Z_k, stored as the image index (if any) of every
/// carrier index. This form is canonical, so derived equality and ordering
/// are exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialMap {
    k: usize,
    images: Vec<Option<usize>>,
}

impl PartialMap {
    pub fn identity(k: usize) -> Self {
        PartialMap {
            k,
            images: (0..k).map(Some).collect(),
        }
    }

    pub fn empty(k: usize) -> Self {
        PartialMap {
            k,
            images: vec![None; k],
        }
    }

    /// Build from (argument, value) pairs of integers in Z_k.
    pub fn from_pairs(z: &SugiharaChain, pairs: &[(i32, i32)]) -> Result<Self> {
        let mut images = vec![None; z.k()];
        for &(a, b) in pairs {
            let i = z.index(a).ok_or_else(|| Error::NotInCarrier(a.to_string()))?;
            let j = z.index(b).ok_or_else(|| Error::NotInCarrier(b.to_string()))?;
            if images[i].is_some_and(|old| old != j) {
                return Err(Error::Malformed(format!("{a} has two images")));
            }
            images[i] = Some(j);
        }
        Ok(PartialMap { k: z.k(), images })
    }

    /// Build from a rule on values; `None` leaves the argument out of the
    /// domain.
    pub fn from_fn(z: &SugiharaChain, f: impl Fn(i32) -> Option<i32>) -> Self {
        let images = z
            .values()
            .iter()
            .map(|&v| f(v).map(|w| z.index(w).expect("image inside the chain")))
            .collect();
        PartialMap { k: z.k(), images }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Image index of carrier index `i`.
    #[inline]
    pub fn at(&self, i: usize) -> Option<usize> {
        self.images[i]
    }

    /// Image of value `v`.
    pub fn apply(&self, z: &SugiharaChain, v: i32) -> Option<i32> {
        z.index(v).and_then(|i| self.images[i]).map(|j| z.value(j))
    }

    pub fn domain_indices(&self) -> Vec<usize> {
        (0..self.k).filter(|&i| self.images[i].is_some()).collect()
    }

    pub fn in_domain(&self, i: usize) -> bool {
        self.images[i].is_some()
    }

    pub fn image_indices(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.images.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.images.iter().all(Option::is_none)
    }

    pub fn is_total(&self) -> bool {
        self.images.iter().all(Option::is_some)
    }

    pub fn is_injective(&self) -> bool {
        let im: Vec<usize> = self.images.iter().flatten().copied().collect();
        im.len() == self.image_indices().len()
    }

    /// Order-preserving on its domain (carrier indices follow the order).
    pub fn is_monotone(&self) -> bool {
        let d = self.domain_indices();
        d.windows(2).all(|w| self.images[w[0]] <= self.images[w[1]])
    }

    /// `self ∘ g`: first `g`, then `self`.
    pub fn compose(&self, g: &PartialMap) -> Result<PartialMap> {
        if self.k != g.k {
            return Err(Error::Mismatch(format!("Z{} vs Z{}", self.k, g.k)));
        }
        let images = g
            .images
            .iter()
            .map(|x| x.and_then(|y| self.images[y]))
            .collect();
        Ok(PartialMap { k: self.k, images })
    }

    /// The inverse relation, if it is a function.
    pub fn inverse(&self) -> Option<PartialMap> {
        let mut images = vec![None; self.k];
        for (i, x) in self.images.iter().enumerate() {
            if let Some(j) = *x {
                if images[j].is_some() {
                    return None;
                }
                images[j] = Some(i);
            }
        }
        Some(PartialMap { k: self.k, images })
    }

    /// Graph as sorted (argument, value) index pairs.
    pub fn graph(&self) -> Vec<(usize, usize)> {
        self.images
            .iter()
            .enumerate()
            .filter_map(|(i, x)| x.map(|j| (i, j)))
            .collect()
    }

    /// Whether the domain and image are subalgebras and the map preserves
    /// the operations. The empty map counts as a partial endomorphism.
    pub fn is_partial_endomorphism(&self, z: &SugiharaChain) -> bool {
        if self.is_empty() {
            return true;
        }
        let a = z.algebra();
        let dom = self.domain_indices();
        if closure(a, &dom) != dom {
            return false;
        }
        let img = self.image_indices();
        if closure(a, &img) != img {
            return false;
        }
        let h = |x: usize| self.images[x].unwrap();
        dom.iter().all(|&x| {
            h(a.neg(x)) == a.neg(h(x))
                && dom.iter().all(|&y| {
                    h(a.meet(x, y)) == a.meet(h(x), h(y))
                        && h(a.join(x, y)) == a.join(h(x), h(y))
                        && h(a.implies(x, y)) == a.implies(h(x), h(y))
                })
        })
    }

    /// `dom -> img` rendering with values aligned positionally.
    pub fn render(&self, z: &SugiharaChain) -> String {
        let (d, i): (Vec<String>, Vec<String>) = self
            .graph()
            .into_iter()
            .map(|(x, y)| (z.value(x).to_string(), z.value(y).to_string()))
            .unzip();
        format!("({}) -> ({})", d.join(","), i.join(","))
    }
}

/// A partial map with its conventional name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedMap {
    pub name: String,
    pub map: PartialMap,
}

impl fmt::Display for NamedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = SugiharaChain::new(self.map.k).map_err(|_| fmt::Error)?;
        write!(f, "{}: {}", self.name, self.map.render(&z))
    }
}

/// f_i for 1 < i ≤ n: sends ±(i-1) to ±i, fixes everything else, undefined
/// at ±i.
pub fn shift_up(z: &SugiharaChain, i: i32) -> PartialMap {
    PartialMap::from_fn(z, |a| {
        if a.abs() == i {
            None
        } else if a == i - 1 {
            Some(i)
        } else if a == -(i - 1) {
            Some(-i)
        } else {
            Some(a)
        }
    })
}

/// g: moves every element one step toward 0. Undefined at ±1 on even chains;
/// total with g(0) = 0 on odd chains.
pub fn shift_down(z: &SugiharaChain) -> PartialMap {
    let odd = z.is_odd();
    PartialMap::from_fn(z, |a| match a {
        0 => Some(0),
        1 | -1 if !odd => None,
        a if a > 0 => Some(a - 1),
        a => Some(a + 1),
    })
}

/// The standard generating set of PEZ(k): f_2, …, f_n, g for k = 2n and
/// f_0, f_1, …, f_n, g for k = 2n + 1. Empty for k = 2.
pub fn standard_generators(z: &SugiharaChain) -> Result<Vec<NamedMap>> {
    if z.k() < 2 {
        return Err(Error::InvalidSize("generators need k >= 2".into()));
    }
    let n = z.n() as i32;
    let mut out = Vec::new();
    if z.is_odd() {
        out.push(NamedMap {
            name: "f0".into(),
            map: PartialMap::from_fn(z, |a| (a != 0).then_some(a)),
        });
        out.push(NamedMap {
            name: "f1".into(),
            map: PartialMap::from_fn(z, |a| (a.abs() != 1).then_some(a)),
        });
    } else if n == 1 {
        return Ok(out);
    }
    for i in 2..=n {
        out.push(NamedMap {
            name: format!("f{i}"),
            map: shift_up(z, i),
        });
    }
    out.push(NamedMap {
        name: "g".into(),
        map: shift_down(z),
    });
    Ok(out)
}

/// A composition-closed set of partial maps containing the identity and the
/// empty map, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PEMonoid {
    pub k: usize,
    pub elements: Vec<PartialMap>,
}

impl PEMonoid {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, f: &PartialMap) -> bool {
        self.elements.binary_search(f).is_ok()
    }

    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|f| {
            self.elements
                .iter()
                .all(|g| self.contains(&f.compose(g).expect("same carrier")))
        })
    }
}

/// The submonoid generated by `gens`: a worklist over left multiples of the
/// identity, deduplicated on the canonical form.
pub fn monoid_closure(z: &SugiharaChain, gens: &[PartialMap]) -> Result<PEMonoid> {
    if let Some(bad) = gens.iter().find(|g| g.k != z.k()) {
        return Err(Error::Mismatch(format!("generator on Z{} for Z{}", bad.k, z.k())));
    }
    let mut seen: BTreeSet<PartialMap> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for start in [PartialMap::identity(z.k()), PartialMap::empty(z.k())] {
        seen.insert(start.clone());
        queue.push_back(start);
    }
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x)?;
            if !seen.contains(&y) {
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(PEMonoid {
        k: z.k(),
        elements: seen.into_iter().collect(),
    })
}

/// Default largest k accepted by [`partial_endos_bruteforce`].
pub const BRUTE_FORCE_BOUND: usize = 9;

/// PEZ(k) by exhaustion: every homomorphism between every pair of
/// subalgebras, plus the empty map.
pub fn partial_endos_bruteforce(z: &SugiharaChain) -> Result<PEMonoid> {
    partial_endos_bruteforce_bounded(z, BRUTE_FORCE_BOUND)
}

pub fn partial_endos_bruteforce_bounded(z: &SugiharaChain, bound: usize) -> Result<PEMonoid> {
    if z.k() > bound {
        return Err(Error::SizeBound {
            what: format!("brute-force PEZ({})", z.k()),
            needed: z.k() as u128,
            bound: bound as u128,
        });
    }
    let subs: Vec<(Vec<usize>, _)> = chain_subalgebra_universes(z)
        .into_iter()
        .map(|u| {
            let alg = z.algebra().induced("sub", &u).expect("subalgebra");
            (u, alg)
        })
        .collect();
    let mut seen: BTreeSet<PartialMap> = BTreeSet::new();
    seen.insert(PartialMap::empty(z.k()));
    for (du, da) in &subs {
        for (cu, ca) in &subs {
            for h in enumerate_homomorphisms(da, ca) {
                let mut images = vec![None; z.k()];
                for (pos, &x) in du.iter().enumerate() {
                    images[x] = Some(cu[h[pos]]);
                }
                seen.insert(PartialMap { k: z.k(), images });
            }
        }
    }
    Ok(PEMonoid {
        k: z.k(),
        elements: seen.into_iter().collect(),
    })
}

/// The invertible partial endomorphism sending b_i ↦ c_i (and 0 ↦ 0 on odd
/// chains): the unique isomorphism between the generated subalgebras.
pub fn invertible_witness(z: &SugiharaChain, b: &[i32], c: &[i32]) -> Result<PartialMap> {
    let n = z.n() as i32;
    let check = |t: &[i32], which: &str| -> Result<()> {
        if t.is_empty() || t.len() as i32 > n {
            return Err(Error::Malformed(format!("{which} must have 1..={n} entries")));
        }
        if t.iter().any(|&v| v < 1 || v > n) || t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(format!(
                "{which} must be strictly increasing within 1..={n}"
            )));
        }
        Ok(())
    };
    check(b, "b")?;
    check(c, "c")?;
    if b.len() != c.len() {
        return Err(Error::Malformed("b and c differ in length".into()));
    }
    let seeds = |t: &[i32]| -> Vec<usize> {
        let mut s: Vec<usize> = t.iter().map(|&v| z.index(v).unwrap()).collect();
        if z.is_odd() {
            s.push(z.index(0).unwrap());
        }
        s
    };
    let dom = closure(z.algebra(), &seeds(b));
    let img = closure(z.algebra(), &seeds(c));
    if dom.len() != img.len() {
        return Err(Error::Internal("generated subalgebras differ in size".into()));
    }
    let mut images = vec![None; z.k()];
    for (&x, &y) in dom.iter().zip(&img) {
        images[x] = Some(y);
    }
    let e = PartialMap { k: z.k(), images };
    if !e.is_partial_endomorphism(z) || e.inverse().is_none() {
        return Err(Error::Internal("order isomorphism is not a partial endomorphism".into()));
    }
    Ok(e)
}
