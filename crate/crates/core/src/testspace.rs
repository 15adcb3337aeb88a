//! The test spaces Y_k and the maps μ : Z~^s → Y_k and ν : D(Z_k) → Y_k.
//!
//! A point of Y_k is an s-tuple of non-negative values (positive when k is
//! even) of the form (c, …, c, c_2, …, c_r) with c < c_2 < … < c_r: its
//! smallest coordinate repeated up to a pivot j, then strictly increasing.
//! Each non-empty set of moduli is the coordinate set of exactly one point.

use serde::{Deserialize, Serialize};

use crate::algebra::{fmt_tuple, SugiharaChain, Tuple};
use crate::duality::{
    check_embedding, check_morphism, dual_space, enumerate_struct_morphisms, power_structure,
    AlterEgo, Structure,
};
use crate::error::{check_bound, size_bound, Error, Result};

/// Arity of the test space for Z_k: n + 1 when k = 2n + 1, n when k = 2n.
pub fn test_space_arity(k: usize) -> usize {
    if k % 2 == 1 {
        k / 2 + 1
    } else {
        k / 2
    }
}

/// Three-valued sign.
pub fn sgn(a: i32) -> i32 {
    a.signum()
}

/// Cached shape of a point of Y.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointShape {
    /// Number of leading copies of the smallest coordinate.
    pub pivot: usize,
    /// Number of distinct coordinates.
    pub sigma: usize,
}

#[derive(Clone, Debug)]
pub struct TestSpace {
    pub k: usize,
    pub s: usize,
    pub ego: AlterEgo,
    pub structure: Structure,
    pub shapes: Vec<PointShape>,
}

/// The point of Y with coordinate set `set` (sorted, distinct, non-empty).
fn padded(set: &[i32], s: usize) -> Tuple {
    let mut t = vec![set[0]; s + 1 - set.len()];
    t.extend_from_slice(&set[1..]);
    t
}

/// Membership in Y_k straight from the pivot description.
pub fn is_test_point(k: usize, a: &[i32]) -> bool {
    let s = test_space_arity(k);
    if a.len() != s || a.iter().any(|&v| v.unsigned_abs() as usize > k / 2) {
        return false;
    }
    let least = if k % 2 == 1 { 0 } else { 1 };
    if a[0] < least {
        return false;
    }
    (1..=s).any(|j| {
        a[..j].iter().all(|&v| v == a[0]) && (j..s).all(|m| a[m - 1] < a[m])
    })
}

/// The collapse map: the point of Y whose coordinate set is {|a_1|, …, |a_s|}.
pub fn mu(k: usize, a: &[i32]) -> Result<Tuple> {
    let s = test_space_arity(k);
    if a.len() != s {
        return Err(Error::Mismatch(format!(
            "mu on Z{k} expects {s} coordinates, got {}",
            a.len()
        )));
    }
    if let Some(&bad) = a.iter().find(|&&v| crate::algebra::chain_index(k, v).is_none()) {
        return Err(Error::NotInCarrier(format!("{bad} in Z{k}")));
    }
    let mut set: Vec<i32> = a.iter().map(|v| v.abs()).collect();
    set.sort_unstable();
    set.dedup();
    Ok(padded(&set, s))
}

/// The embedding of D(Z_k) into Y: an endomorphism d of Z_k (given by its
/// values along the carrier) goes to its zero-padded non-negative image when
/// k is odd; when k is even D(Z_k) = {id} goes to (1, …, n).
pub fn nu(k: usize, d: &[i32]) -> Result<Tuple> {
    let z = SugiharaChain::new(k)?;
    let is_endo = d.len() == k
        && d.iter().all(|&v| z.contains(v))
        && crate::homomorphism::is_homomorphism(
            z.algebra(),
            z.algebra(),
            &d.iter().map(|&v| z.index(v).unwrap()).collect::<Vec<_>>(),
        );
    if !is_endo {
        return Err(Error::NotInCarrier(format!("{} is not in D(Z{k})", fmt_tuple(d))));
    }
    let s = test_space_arity(k);
    if k % 2 == 0 {
        return Ok((1..=s as i32).collect());
    }
    let mut image: Vec<i32> = d.iter().copied().filter(|&v| v >= 0).collect();
    image.sort_unstable();
    image.dedup();
    let mut t = vec![0; s - image.len()];
    t.extend(image);
    Ok(t)
}

pub fn build_test_space(k: usize) -> Result<TestSpace> {
    let ego = AlterEgo::new(k)?;
    let s = test_space_arity(k);
    let n = k / 2;
    let moduli: Vec<i32> = if k % 2 == 1 {
        (0..=n as i32).collect()
    } else {
        (1..=n as i32).collect()
    };
    let mut points = Vec::new();
    for mask in 1u64..(1u64 << moduli.len()) {
        let set: Vec<i32> = moduli
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        points.push(padded(&set, s));
    }
    points.sort();
    let shapes = points
        .iter()
        .map(|p| {
            let mut set = p.clone();
            set.dedup();
            PointShape {
                pivot: s + 1 - set.len(),
                sigma: set.len(),
            }
        })
        .collect();
    let structure = Structure::from_points(&ego, format!("Y{k}"), points)
        .map_err(|e| Error::Internal(format!("Y{k} is not a substructure: {e}")))?;
    Ok(TestSpace {
        k,
        s,
        ego,
        structure,
        shapes,
    })
}

impl TestSpace {
    pub fn len(&self) -> usize {
        self.structure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structure.is_empty()
    }

    /// The canonical points bold 1, …, bold s: bold i has coordinate set
    /// {1, …, i}, except that when k is odd bold s = (0, 1, …, n).
    pub fn bold_points(&self) -> Vec<Tuple> {
        (1..=self.s)
            .map(|i| {
                if self.k % 2 == 1 && i == self.s {
                    (0..self.s as i32).collect()
                } else {
                    padded(&(1..=i as i32).collect::<Vec<_>>(), self.s)
                }
            })
            .collect()
    }

    pub fn bold_indices(&self) -> Vec<usize> {
        self.bold_points()
            .iter()
            .map(|p| self.structure.index_of(p).expect("bold points lie in Y"))
            .collect()
    }

    /// The point (0, 1, …, n) for odd k, (1, …, n) for even k.
    pub fn top(&self) -> usize {
        *self.bold_indices().last().unwrap()
    }

    /// Least substructure containing `seeds` (and the constants).
    pub fn generated(&self, seeds: &[usize]) -> Vec<usize> {
        let y = &self.structure;
        let mut inside = vec![false; y.len()];
        let mut stack: Vec<usize> = seeds.to_vec();
        stack.extend(y.constants.iter().map(|c| c.1));
        while let Some(p) = stack.pop() {
            if std::mem::replace(&mut inside[p], true) {
                continue;
            }
            for op in &y.ops {
                if let Some(q) = op.images[p] {
                    if !inside[q] {
                        stack.push(q);
                    }
                }
            }
        }
        (0..y.len()).filter(|&p| inside[p]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TsReport {
    pub k: usize,
    pub s: usize,
    pub test_points: usize,
    pub dual_points: usize,
    pub power_points: usize,
    pub nu_embedding: Option<String>,
    pub mu_morphism: Option<String>,
    pub mu_surjective: bool,
}

impl TsReport {
    pub fn holds(&self) -> bool {
        self.nu_embedding.is_none() && self.mu_morphism.is_none() && self.mu_surjective
    }
}

/// Check that ν : D(Z_k) → Y is an embedding and μ : Z~^s → Y a surjective
/// morphism.
pub fn verify_ts_configuration(k: usize) -> Result<TsReport> {
    let ts = build_test_space(k)?;
    let y = &ts.structure;
    let z = &ts.ego.chain;
    let d = dual_space(z.algebra(), &ts.ego)?;
    let nu_map = d
        .points()
        .iter()
        .map(|p| {
            let t = nu(k, p)?;
            y.index_of(&t)
                .ok_or_else(|| Error::Internal(format!("nu leaves Y: {}", fmt_tuple(&t))))
        })
        .collect::<Result<Vec<usize>>>()?;
    let nu_embedding = check_embedding(&d, y, &nu_map)
        .err()
        .map(|v| format!("{} at {}: {}", "nu", fmt_tuple(d.point(v.point)), v.reason));

    let size = (k as u128).pow(ts.s as u32);
    check_bound(format!("Z{k}~^{}", ts.s), size, size_bound())?;
    let power = power_structure(&ts.ego, ts.s)?;
    let mu_map = power
        .points()
        .iter()
        .map(|p| {
            let t = mu(k, p)?;
            y.index_of(&t)
                .ok_or_else(|| Error::Internal(format!("mu leaves Y: {}", fmt_tuple(&t))))
        })
        .collect::<Result<Vec<usize>>>()?;
    let mu_morphism = check_morphism(&power, y, &mu_map)
        .err()
        .map(|v| format!("mu at {}: {}", fmt_tuple(power.point(v.point)), v.reason));
    let mut hit = vec![false; y.len()];
    for &q in &mu_map {
        hit[q] = true;
    }
    Ok(TsReport {
        k,
        s: ts.s,
        test_points: y.len(),
        dual_points: d.len(),
        power_points: power.len(),
        nu_embedding,
        mu_morphism,
        mu_surjective: hit.iter().all(|&h| h),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinIrreducibleReport {
    pub k: usize,
    pub endomorphisms: usize,
    /// Endomorphisms whose image contains the top point.
    pub hitting_top: usize,
    pub hitting_top_are_identity: bool,
    pub bold_points_generate: bool,
}

impl JoinIrreducibleReport {
    pub fn holds(&self) -> bool {
        self.hitting_top_are_identity && self.bold_points_generate
    }
}

/// Every endomorphism of Y_k with the top point in its image is the
/// identity, and the bold points generate Y_k.
pub fn verify_join_irreducible(k: usize) -> Result<JoinIrreducibleReport> {
    let ts = build_test_space(k)?;
    let y = &ts.structure;
    let top = ts.top();
    let ends = enumerate_struct_morphisms(y, y)?;
    let hitting: Vec<&Vec<usize>> = ends.iter().filter(|phi| phi.contains(&top)).collect();
    let identity = hitting
        .iter()
        .all(|phi| phi.iter().enumerate().all(|(p, &q)| p == q));
    let generated = ts.generated(&ts.bold_indices());
    Ok(JoinIrreducibleReport {
        k,
        endomorphisms: ends.len(),
        hitting_top: hitting.len(),
        hitting_top_are_identity: identity,
        bold_points_generate: generated.len() == y.len(),
    })
}
