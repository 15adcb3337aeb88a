//! Alter egos of Z_k, finite structures over them, and the hom-functors D
//! and E.
//!
//! All structures here are finite, so the topology is discrete and plays no
//! role. Every structure is presented as a set of tuples over Z_k (a
//! substructure of a power of the alter ego); partial operations, the
//! constant and the relations act coordinatewise.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::algebra::{fmt_tuple, tuples, FiniteAlgebra, SugiharaChain, Tuple};
use crate::congruence::Congruence;
use crate::error::{check_bound, size_bound, Error, Result};
use crate::homomorphism::enumerate_homomorphisms;
use crate::partial::{standard_generators, NamedMap, PartialMap};

/// The alter ego of Z_k: Z_k with the standard generators of PEZ(k) as
/// (partial) operations, the constant 0 when k is odd, and the congruences
/// ≈_1, …, ≈_{n-1} when k is even.
#[derive(Clone, Debug)]
pub struct AlterEgo {
    pub chain: SugiharaChain,
    /// Total operations (G).
    pub totals: Vec<NamedMap>,
    /// Properly partial operations (H).
    pub partials: Vec<NamedMap>,
    /// Nullary operations (K), as values.
    pub constants: Vec<i32>,
    /// Binary relations (R).
    pub relations: Vec<Congruence>,
}

impl AlterEgo {
    pub fn new(k: usize) -> Result<AlterEgo> {
        if k < 2 {
            return Err(Error::InvalidSize("alter ego needs k >= 2".into()));
        }
        let chain = SugiharaChain::new(k)?;
        let (totals, partials): (Vec<NamedMap>, Vec<NamedMap>) = standard_generators(&chain)?
            .into_iter()
            .partition(|g| g.map.is_total());
        let (constants, relations) = if chain.is_odd() {
            (vec![0], Vec::new())
        } else {
            let rels = (1..chain.n()).map(|m| Congruence::level(&chain, m)).collect();
            (Vec::new(), rels)
        };
        Ok(AlterEgo {
            chain,
            totals,
            partials,
            constants,
            relations,
        })
    }

    pub fn k(&self) -> usize {
        self.chain.k()
    }

    /// G ∪ H in generator order (f's first, then g).
    pub fn operations(&self) -> Vec<&NamedMap> {
        let mut ops: Vec<&NamedMap> = self.partials.iter().chain(&self.totals).collect();
        ops.sort_by_key(|g| (g.name == "g", g.name.clone()));
        ops
    }

    /// The alter ego itself as a one-coordinate structure.
    pub fn structure(&self) -> Structure {
        let points = self.chain.values().iter().map(|&v| vec![v]).collect();
        Structure::from_points(self, format!("Z{}~", self.k()), points).expect("alter ego is closed")
    }
}

/// A partial unary operation on the points of a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointOp {
    pub name: String,
    pub total: bool,
    pub images: Vec<Option<usize>>,
}

/// An equivalence relation on the points, as a block id per point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointRelation {
    pub name: String,
    pub m: usize,
    pub class_of: Vec<usize>,
}

impl PointRelation {
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut by_class: HashMap<usize, Vec<usize>> = HashMap::new();
        for (p, &c) in self.class_of.iter().enumerate() {
            by_class.entry(c).or_default().push(p);
        }
        let mut out: Vec<Vec<usize>> = by_class.into_values().collect();
        out.sort();
        out
    }
}

/// A finite structure in the signature of an alter ego of Z_k.
#[derive(Clone, Debug)]
pub struct Structure {
    pub name: String,
    pub k: usize,
    points: Vec<Tuple>,
    index: HashMap<Tuple, usize>,
    pub ops: Vec<PointOp>,
    /// (name, point) for each constant.
    pub constants: Vec<(String, usize)>,
    pub relations: Vec<PointRelation>,
}

impl Structure {
    /// The substructure of a power of the alter ego on `points`, with every
    /// symbol lifted coordinatewise. Fails if the points are not closed under
    /// the operations or the constant is missing.
    pub fn from_points(ego: &AlterEgo, name: impl Into<String>, points: Vec<Tuple>) -> Result<Structure> {
        let z = &ego.chain;
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.iter().any(|&v| !z.contains(v)) {
                return Err(Error::NotInCarrier(fmt_tuple(p)));
            }
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate point {}", fmt_tuple(p))));
            }
        }
        let mut s = Structure {
            name: name.into(),
            k: z.k(),
            points,
            index,
            ops: Vec::new(),
            constants: Vec::new(),
            relations: Vec::new(),
        };
        for op in ego.operations() {
            let images = s.lift(z, &op.map)?;
            s.ops.push(PointOp {
                name: op.name.clone(),
                total: op.map.is_total(),
                images,
            });
        }
        for &c in &ego.constants {
            let arity = s.points.first().map_or(1, |p| p.len());
            let p = vec![c; arity];
            let at = *s
                .index
                .get(&p)
                .ok_or_else(|| Error::NotClosed(format!("constant {}", fmt_tuple(&p))))?;
            s.constants.push((c.to_string(), at));
        }
        for r in &ego.relations {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let class_of = s
                .points
                .iter()
                .map(|p| {
                    let key: Vec<usize> = p
                        .iter()
                        .map(|&v| r.class_of[z.index(v).unwrap()])
                        .collect();
                    let next = ids.len();
                    *ids.entry(key).or_insert(next)
                })
                .collect();
            s.relations.push(PointRelation {
                name: format!("~{}", r.m),
                m: r.m,
                class_of,
            });
        }
        Ok(s)
    }

    /// Coordinatewise lifting of a partial endomorphism: defined at a point
    /// iff every coordinate is in the domain.
    pub fn lift(&self, z: &SugiharaChain, e: &PartialMap) -> Result<Vec<Option<usize>>> {
        self.points
            .iter()
            .map(|p| {
                let image: Option<Tuple> = p.iter().map(|&v| e.apply(z, v)).collect();
                match image {
                    None => Ok(None),
                    Some(t) => self
                        .index
                        .get(&t)
                        .copied()
                        .map(Some)
                        .ok_or_else(|| Error::NotClosed(format!("image {}", fmt_tuple(&t)))),
                }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Tuple] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Tuple {
        &self.points[i]
    }

    pub fn index_of(&self, p: &[i32]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn op(&self, name: &str) -> Option<&PointOp> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn relation(&self, name: &str) -> Option<&PointRelation> {
        self.relations.iter().find(|r| r.name == name)
    }

    fn signature(&self) -> (Vec<&str>, Vec<&str>, Vec<&str>) {
        (
            self.ops.iter().map(|o| o.name.as_str()).collect(),
            self.constants.iter().map(|c| c.0.as_str()).collect(),
            self.relations.iter().map(|r| r.name.as_str()).collect(),
        )
    }

    pub fn same_signature(&self, other: &Structure) -> bool {
        self.k == other.k && self.signature() == other.signature()
    }

    pub fn to_data(&self) -> StructureData {
        StructureData {
            name: self.name.clone(),
            k: self.k,
            points: self.points.clone(),
            operations: self
                .ops
                .iter()
                .map(|o| OpData {
                    name: o.name.clone(),
                    total: o.total,
                    action: o
                        .images
                        .iter()
                        .enumerate()
                        .filter_map(|(p, q)| q.map(|q| [p, q]))
                        .collect(),
                })
                .collect(),
            constants: self
                .constants
                .iter()
                .map(|(n, p)| ConstData {
                    name: n.clone(),
                    point: *p,
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| RelData {
                    name: r.name.clone(),
                    blocks: r.blocks(),
                })
                .collect(),
        }
    }

    /// Text listing: points, then the domain and action of every operation,
    /// the constants, and the blocks of every relation. `point_name` labels
    /// points in the listing.
    pub fn render(&self, point_name: &dyn Fn(usize) -> String) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {} point(s)", self.name, self.len());
        for (i, p) in self.points.iter().enumerate() {
            let _ = writeln!(out, "  {} = {}", point_name(i), fmt_tuple(p));
        }
        let names = |ps: &[usize]| -> String {
            ps.iter().map(|&p| point_name(p)).collect::<Vec<_>>().join(",")
        };
        for op in &self.ops {
            let dom: Vec<usize> = (0..self.len()).filter(|&p| op.images[p].is_some()).collect();
            let action: Vec<String> = dom
                .iter()
                .map(|&p| format!("{} -> {}", point_name(p), point_name(op.images[p].unwrap())))
                .collect();
            let _ = writeln!(
                out,
                "{}: dom {{{}}}{}{}",
                op.name,
                names(&dom),
                if action.is_empty() { "" } else { "; " },
                action.join(", ")
            );
        }
        for (c, p) in &self.constants {
            let _ = writeln!(out, "constant {}: {}", c, point_name(*p));
        }
        for r in &self.relations {
            let blocks: Vec<String> = r.blocks().iter().map(|b| format!("{{{}}}", names(b))).collect();
            let _ = writeln!(out, "{}: {}", r.name, blocks.join(" "));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureData {
    pub name: String,
    pub k: usize,
    pub points: Vec<Tuple>,
    pub operations: Vec<OpData>,
    pub constants: Vec<ConstData>,
    pub relations: Vec<RelData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpData {
    pub name: String,
    pub total: bool,
    /// [point, image] pairs over the domain.
    pub action: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstData {
    pub name: String,
    pub point: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelData {
    pub name: String,
    pub blocks: Vec<Vec<usize>>,
}

pub fn alter_ego(k: usize) -> Result<AlterEgo> {
    AlterEgo::new(k)
}

/// D(A): the homomorphisms A → Z_k, each recorded as the tuple of its values
/// along A's carrier, with the alter-ego symbols acting by composition.
pub fn dual_space(a: &FiniteAlgebra, ego: &AlterEgo) -> Result<Structure> {
    let homs = enumerate_homomorphisms(a, ego.chain.algebra());
    let points = homs
        .into_iter()
        .map(|h| h.into_iter().map(|i| ego.chain.value(i)).collect())
        .collect();
    Structure::from_points(ego, format!("D({})", a.name()), points)
}

/// The s-th power of the alter ego, points in lexicographic order.
pub fn power_structure(ego: &AlterEgo, s: usize) -> Result<Structure> {
    if s == 0 {
        return Err(Error::InvalidSize("power exponent must be >= 1".into()));
    }
    let size = (ego.k() as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
    check_bound(format!("Z{}~^{}", ego.k(), s), size, size_bound())?;
    let points = tuples(ego.chain.values(), s);
    Structure::from_points(ego, format!("Z{}~^{}", ego.k(), s), points)
}

/// Targets are limited to this many points (domains are bit masks).
pub const MAX_TARGET_POINTS: usize = 128;

/// Tables of the target structure used by the morphism search.
struct Target {
    n: usize,
    dom: Vec<u128>,
    image: Vec<Vec<Option<usize>>>,
    /// preimage[op][v]: points mapped to v by op.
    preimage: Vec<Vec<u128>>,
    constants: Vec<usize>,
    /// class_mask[rel][point]: mask of the point's block.
    class_mask: Vec<Vec<u128>>,
}

impl Target {
    fn new(y: &Structure) -> Result<Target> {
        let n = y.len();
        if n > MAX_TARGET_POINTS {
            return Err(Error::SizeBound {
                what: format!("morphism target {}", y.name),
                needed: n as u128,
                bound: MAX_TARGET_POINTS as u128,
            });
        }
        let mut dom = Vec::new();
        let mut image = Vec::new();
        let mut preimage = Vec::new();
        for op in &y.ops {
            let mut d = 0u128;
            let mut pre = vec![0u128; n];
            for (p, q) in op.images.iter().enumerate() {
                if let Some(q) = *q {
                    d |= 1 << p;
                    pre[q] |= 1 << p;
                }
            }
            dom.push(d);
            image.push(op.images.clone());
            preimage.push(pre);
        }
        let class_mask = y
            .relations
            .iter()
            .map(|r| {
                (0..n)
                    .map(|p| {
                        (0..n)
                            .filter(|&q| r.related(p, q))
                            .fold(0u128, |m, q| m | 1 << q)
                    })
                    .collect()
            })
            .collect();
        Ok(Target {
            n,
            dom,
            image,
            preimage,
            constants: y.constants.iter().map(|c| c.1).collect(),
            class_mask,
        })
    }

    fn all(&self) -> u128 {
        if self.n == 128 {
            u128::MAX
        } else {
            (1u128 << self.n) - 1
        }
    }
}

/// Backtracking search for structure morphisms with propagation.
struct MorphismSearch<'a> {
    t: &'a Target,
    /// forward[x]: (op, op(x)) for ops defined at x.
    forward: Vec<Vec<(usize, usize)>>,
    /// backward[x]: (op, w) with op(w) = x.
    backward: Vec<Vec<(usize, usize)>>,
    /// peers[x]: (rel, points in x's block other than x).
    peers: Vec<Vec<(usize, Vec<usize>)>>,
    order: Vec<usize>,
}

#[derive(Clone)]
struct State {
    dom: Vec<u128>,
    value: Vec<Option<usize>>,
}

impl<'a> MorphismSearch<'a> {
    fn new(x: &Structure, t: &'a Target) -> Self {
        let n = x.len();
        let mut forward = vec![Vec::new(); n];
        let mut backward = vec![Vec::new(); n];
        for (o, op) in x.ops.iter().enumerate() {
            for (p, q) in op.images.iter().enumerate() {
                if let Some(q) = *q {
                    forward[p].push((o, q));
                    backward[q].push((o, p));
                }
            }
        }
        let mut peers = vec![Vec::new(); n];
        for (r, rel) in x.relations.iter().enumerate() {
            for block in rel.blocks() {
                if block.len() < 2 {
                    continue;
                }
                for &p in &block {
                    peers[p].push((r, block.iter().copied().filter(|&q| q != p).collect()));
                }
            }
        }
        // Points inside many operation domains first.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&p| {
            let degree = forward[p].len() + backward[p].len() + peers[p].len();
            (std::cmp::Reverse(degree), p)
        });
        MorphismSearch {
            t,
            forward,
            backward,
            peers,
            order,
        }
    }

    fn initial(&self, x: &Structure) -> Option<State> {
        let mut st = State {
            dom: vec![self.t.all(); x.len()],
            value: vec![None; x.len()],
        };
        for (p, fw) in self.forward.iter().enumerate() {
            for &(o, _) in fw {
                st.dom[p] &= self.t.dom[o];
            }
        }
        let mut pending = Vec::new();
        for (c, &(_, p)) in x.constants.iter().enumerate() {
            pending.push((p, self.t.constants[c]));
        }
        for p in 0..x.len() {
            match st.dom[p].count_ones() {
                0 => return None,
                1 => pending.push((p, st.dom[p].trailing_zeros() as usize)),
                _ => {}
            }
        }
        self.propagate(&mut st, pending).then_some(st)
    }

    fn propagate(&self, st: &mut State, mut pending: Vec<(usize, usize)>) -> bool {
        while let Some((p, v)) = pending.pop() {
            match st.value[p] {
                Some(w) if w == v => continue,
                Some(_) => return false,
                None => {}
            }
            if st.dom[p] >> v & 1 == 0 {
                return false;
            }
            st.value[p] = Some(v);
            st.dom[p] = 1 << v;
            let mut restrict = |q: usize, mask: u128, pending: &mut Vec<(usize, usize)>| -> bool {
                let d = st.dom[q] & mask;
                if d == 0 {
                    return false;
                }
                if d != st.dom[q] {
                    st.dom[q] = d;
                    if d.count_ones() == 1 && st.value[q].is_none() {
                        pending.push((q, d.trailing_zeros() as usize));
                    }
                }
                true
            };
            for &(o, q) in &self.forward[p] {
                let Some(img) = self.t.image[o][v] else {
                    return false;
                };
                if !restrict(q, 1 << img, &mut pending) {
                    return false;
                }
            }
            for &(o, w) in &self.backward[p] {
                if !restrict(w, self.t.preimage[o][v], &mut pending) {
                    return false;
                }
            }
            for (r, others) in &self.peers[p] {
                let mask = self.t.class_mask[*r][v];
                for &q in others {
                    if !restrict(q, mask, &mut pending) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn search(&self, st: State, depth: usize, emit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        let next = self.order[depth..].iter().position(|&p| st.value[p].is_none());
        let Some(offset) = next else {
            let phi: Vec<usize> = st.value.iter().map(|v| v.unwrap()).collect();
            return emit(&phi);
        };
        let depth = depth + offset;
        let p = self.order[depth];
        let mut d = st.dom[p];
        while d != 0 {
            let v = d.trailing_zeros() as usize;
            d &= d - 1;
            let mut child = st.clone();
            if self.propagate(&mut child, vec![(p, v)]) {
                self.search(child, depth + 1, emit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Visit every structure morphism `x → y` (in search order) until `emit`
/// breaks.
pub fn for_each_struct_morphism(
    x: &Structure,
    y: &Structure,
    emit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<()> {
    if !x.same_signature(y) {
        return Err(Error::Mismatch(format!("{} and {} differ in signature", x.name, y.name)));
    }
    let t = Target::new(y)?;
    // one domain mask per point per search level
    let n = x.len() as u128;
    check_bound(format!("search state for {}", x.name), n * n, size_bound())?;
    if x.is_empty() {
        let _ = emit(&[]);
        return Ok(());
    }
    let search = MorphismSearch::new(x, &t);
    if let Some(st) = search.initial(x) {
        let _ = search.search(st, 0, emit);
    }
    Ok(())
}

/// All structure morphisms `x → y`, each as the image point of every point
/// of `x`, in lexicographic order.
/// Fails once there are more than the size bound.
pub fn enumerate_struct_morphisms(x: &Structure, y: &Structure) -> Result<Vec<Vec<usize>>> {
    let bound = size_bound();
    let mut out = Vec::new();
    for_each_struct_morphism(x, y, &mut |phi| {
        out.push(phi.to_vec());
        if out.len() as u128 > bound {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    check_bound(format!("morphisms {} -> {}", x.name, y.name), out.len() as u128, bound)?;
    out.sort();
    Ok(out)
}

/// Number of structure morphisms `x → y`. Fails once the count passes the
/// size bound.
pub fn count_struct_morphisms(x: &Structure, y: &Structure) -> Result<u64> {
    let bound = size_bound();
    let mut count = 0u64;
    for_each_struct_morphism(x, y, &mut |_| {
        count += 1;
        if count as u128 > bound {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    check_bound(format!("morphisms {} -> {}", x.name, y.name), count as u128, bound)?;
    Ok(count)
}

/// Why a map fails to be a morphism (or embedding).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub point: usize,
    pub reason: String,
}

/// Check that `phi: x → y` preserves every operation, constant and relation.
pub fn check_morphism(x: &Structure, y: &Structure, phi: &[usize]) -> std::result::Result<(), Violation> {
    let fail = |point: usize, reason: String| Err(Violation { point, reason });
    if phi.len() != x.len() || phi.iter().any(|&q| q >= y.len()) {
        return fail(0, "map has the wrong shape".into());
    }
    for (ox, oy) in x.ops.iter().zip(&y.ops) {
        for (p, q) in ox.images.iter().enumerate() {
            if let Some(q) = *q {
                match oy.images[phi[p]] {
                    None => return fail(p, format!("{}: image leaves the domain", ox.name)),
                    Some(r) if r != phi[q] => {
                        return fail(p, format!("{}: action not preserved", ox.name))
                    }
                    _ => {}
                }
            }
        }
    }
    for ((name, px), (_, py)) in x.constants.iter().zip(&y.constants) {
        if phi[*px] != *py {
            return fail(*px, format!("constant {name} not preserved"));
        }
    }
    for (rx, ry) in x.relations.iter().zip(&y.relations) {
        for block in rx.blocks() {
            for w in block.windows(2) {
                if !ry.related(phi[w[0]], phi[w[1]]) {
                    return fail(w[0], format!("{} not preserved", rx.name));
                }
            }
        }
    }
    Ok(())
}

/// Check that `phi` is an embedding: an injective morphism that also
/// reflects operation domains and relations.
pub fn check_embedding(x: &Structure, y: &Structure, phi: &[usize]) -> std::result::Result<(), Violation> {
    check_morphism(x, y, phi)?;
    let mut seen = vec![None; y.len()];
    for (p, &q) in phi.iter().enumerate() {
        if let Some(other) = seen[q] {
            return Err(Violation {
                point: p,
                reason: format!("collides with point {other}"),
            });
        }
        seen[q] = Some(p);
    }
    for (ox, oy) in x.ops.iter().zip(&y.ops) {
        for p in 0..x.len() {
            if ox.images[p].is_none() && oy.images[phi[p]].is_some() {
                return Err(Violation {
                    point: p,
                    reason: format!("{}: domain not reflected", ox.name),
                });
            }
        }
    }
    for (rx, ry) in x.relations.iter().zip(&y.relations) {
        for p in 0..x.len() {
            for q in 0..x.len() {
                if !rx.related(p, q) && ry.related(phi[p], phi[q]) {
                    return Err(Violation {
                        point: p,
                        reason: format!("{} not reflected", rx.name),
                    });
                }
            }
        }
    }
    Ok(())
}

/// E(X): the morphisms X → the alter ego, as an algebra under the pointwise
/// operations of Z_k. Elements are labelled by their values along X's points.
pub fn hom_functor_e(x: &Structure, ego: &AlterEgo) -> Result<FiniteAlgebra> {
    if x.is_empty() {
        return Err(Error::InvalidSize("E is not applied to the empty structure".into()));
    }
    let target = ego.structure();
    let labels: Vec<Tuple> = enumerate_struct_morphisms(x, &target)?
        .into_iter()
        .map(|phi| phi.into_iter().map(|i| ego.chain.value(i)).collect())
        .collect();
    FiniteAlgebra::pointwise(format!("E({})", x.name), labels)
}

/// Outcome of testing the evaluation map e_A : A → ED(A).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub algebra: String,
    pub k: usize,
    pub algebra_size: usize,
    pub dual_points: usize,
    pub double_dual_size: usize,
    pub homomorphism: bool,
    pub injective: bool,
    pub surjective: bool,
}

impl EvaluationReport {
    pub fn holds(&self) -> bool {
        self.homomorphism && self.injective && self.surjective
    }
}

/// Build e_A : A → E(D(A)), a ↦ (x ↦ x(a)), and test that it is a bijective
/// homomorphism.
pub fn check_evaluation_iso(a: &FiniteAlgebra, ego: &AlterEgo) -> Result<EvaluationReport> {
    let d = dual_space(a, ego)?;
    let ed = hom_functor_e(&d, ego)?;
    let eval: Vec<Option<usize>> = (0..a.size())
        .map(|e| {
            let label: Tuple = d.points().iter().map(|x| x[e]).collect();
            ed.index_of(&label)
        })
        .collect();
    let into = eval.iter().all(Option::is_some);
    let (homomorphism, injective, surjective) = if into {
        let h: Vec<usize> = eval.into_iter().map(Option::unwrap).collect();
        let n = a.size();
        let hom = (0..n).all(|x| {
            h[a.neg(x)] == ed.neg(h[x])
                && (0..n).all(|y| {
                    h[a.meet(x, y)] == ed.meet(h[x], h[y])
                        && h[a.join(x, y)] == ed.join(h[x], h[y])
                        && h[a.implies(x, y)] == ed.implies(h[x], h[y])
                })
        });
        let mut image = h.clone();
        image.sort_unstable();
        image.dedup();
        (hom, image.len() == n, image.len() == ed.size())
    } else {
        (false, false, false)
    };
    Ok(EvaluationReport {
        algebra: a.name().to_string(),
        k: ego.k(),
        algebra_size: a.size(),
        dual_points: d.len(),
        double_dual_size: ed.size(),
        homomorphism,
        injective,
        surjective,
    })
}
