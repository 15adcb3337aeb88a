//! The admissibility algebras B_k, the μ-defining terms, and validity of
//! quasi-equations.
//!
//! B_k sits inside Z_k^s (s = n + 1 for k = 2n + 1, s = n for k = 2n). An
//! element is a run of ±1 up to a pivot j, then (for j < n) a run
//! δ·2, δ·3, …, δ·(n − j + 1) of one sign δ. When k is odd a last coordinate
//! follows, equal to a_n if |a_n| > 1 and in {−1, 0, 1} otherwise.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{fmt_tuple, FiniteAlgebra, SugiharaChain, Tuple};
use crate::duality::hom_functor_e;
use crate::error::{check_bound, size_bound, Error, Result};
use crate::term::{Program, Term};
use crate::testspace::{build_test_space, test_space_arity};

/// The even-case move toward 0, undefined on ±1.
fn g_even(a: i32) -> Option<i32> {
    (a.abs() > 1).then(|| a - a.signum())
}

/// The odd-case move toward 0 (total, g(0) = 0).
fn g_odd(a: i32) -> i32 {
    a - a.signum()
}

/// Pivot of a B-candidate: the length of the leading run of ±1.
fn pivot(a: &[i32]) -> usize {
    a.iter().take_while(|v| v.abs() == 1).count()
}

/// Whether the first `len` coordinates can start an element of B_k.
fn prefix_ok(k: usize, a: &[i32]) -> bool {
    let n = k / 2;
    let odd = k % 2 == 1;
    let Some(&first) = a.first() else {
        return true;
    };
    if first.abs() != 1 {
        return false;
    }
    let j = pivot(&a[..a.len().min(n)]);
    for m in j..a.len().min(n) {
        // m is a 0-based position past the pivot
        let ok = if m == j {
            g_even(a[m]).map(i32::abs) == Some(1)
        } else {
            g_even(a[m]) == Some(a[m - 1])
        };
        if !ok {
            return false;
        }
    }
    if odd && a.len() == n + 1 {
        return g_odd(a[n]) == g_odd(a[n - 1]);
    }
    true
}

/// Membership in B_k from the coordinate conditions.
pub fn is_b_member(k: usize, a: &[i32]) -> bool {
    k >= 2
        && a.len() == test_space_arity(k)
        && a.iter().all(|&v| crate::algebra::chain_index(k, v).is_some())
        && a[..k / 2].iter().all(|&v| v != 0)
        && prefix_ok(k, a)
}

fn name_b(k: usize) -> String {
    format!("B{k}")
}

/// B_k by its defining conditions, grown coordinate by coordinate.
pub fn build_b_direct(k: usize) -> Result<FiniteAlgebra> {
    let z = SugiharaChain::new(k)?;
    if k < 2 {
        return Err(Error::InvalidSize("B_k needs k >= 2".into()));
    }
    let s = test_space_arity(k);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(s);
    fn grow(z: &SugiharaChain, s: usize, cur: &mut Tuple, out: &mut Vec<Tuple>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for &v in z.values() {
            cur.push(v);
            if (cur.len() > z.k() / 2 || v != 0) && prefix_ok(z.k(), cur) {
                grow(z, s, cur, out);
            }
            cur.pop();
        }
    }
    grow(&z, s, &mut cur, &mut out);
    FiniteAlgebra::pointwise(name_b(k), out)
        .map_err(|e| Error::Internal(format!("B{k} is not a subalgebra: {e}")))
}

/// Carrier of B_k from the even recursion and the even-to-odd transfer.
pub fn b_recursive_carrier(k: usize) -> Result<Vec<Tuple>> {
    if k < 2 {
        return Err(Error::InvalidSize("B_k needs k >= 2".into()));
    }
    let n = k / 2;
    let mut even: Vec<Tuple> = vec![vec![-1], vec![1]];
    for m in 2..=n {
        let up: Tuple = (2..=m as i32).collect();
        let down: Tuple = up.iter().map(|v| -v).collect();
        let mut tails = even.clone();
        tails.push(up);
        tails.push(down);
        even = [-1, 1]
            .iter()
            .flat_map(|&e| {
                tails.iter().map(move |t| {
                    let mut v = vec![e];
                    v.extend(t);
                    v
                })
            })
            .collect();
    }
    let mut carrier = if k % 2 == 0 {
        even
    } else {
        let mut odd: Vec<Tuple> = even
            .iter()
            .filter(|b| b.iter().any(|v| v.abs() != 1))
            .map(|b| {
                let mut v = b.clone();
                v.push(b[n - 1]);
                v
            })
            .collect();
        for b in even.iter().filter(|b| b.iter().all(|v| v.abs() == 1)) {
            for last in [-1, 0, 1] {
                let mut v = b.clone();
                v.push(last);
                odd.push(v);
            }
        }
        odd
    };
    carrier.sort();
    Ok(carrier)
}

pub fn build_b_recursive(k: usize) -> Result<FiniteAlgebra> {
    FiniteAlgebra::pointwise(name_b(k), b_recursive_carrier(k)?)
        .map_err(|e| Error::Internal(format!("recursive B{k} is not a subalgebra: {e}")))
}

/// E(Y_k) together with the map t : x ↦ (x(bold 1), …, x(bold s)).
#[derive(Clone, Debug)]
pub struct DualityBuild {
    pub e_of_y: FiniteAlgebra,
    /// t(x) for every element x of E(Y_k), in E(Y_k)'s order.
    pub t: Vec<Tuple>,
    /// The algebra on the image of t.
    pub image: FiniteAlgebra,
    pub t_injective: bool,
    pub t_homomorphism: bool,
}

pub fn build_b_via_duality(k: usize) -> Result<DualityBuild> {
    let ts = build_test_space(k)?;
    let e_of_y = hom_functor_e(&ts.structure, &ts.ego)?;
    let bold = ts.bold_indices();
    let t: Vec<Tuple> = (0..e_of_y.size())
        .map(|x| {
            let label = e_of_y.label(x);
            bold.iter().map(|&b| label[b]).collect()
        })
        .collect();
    let mut sorted = t.clone();
    sorted.sort();
    sorted.dedup();
    let t_injective = sorted.len() == t.len();
    let image = FiniteAlgebra::pointwise(name_b(k), sorted)?;
    let at = |x: usize| image.index_of(&t[x]).unwrap();
    let n = e_of_y.size();
    let t_homomorphism = (0..n).all(|x| {
        at(e_of_y.neg(x)) == image.neg(at(x))
            && (0..n).all(|y| {
                at(e_of_y.meet(x, y)) == image.meet(at(x), at(y))
                    && at(e_of_y.join(x, y)) == image.join(at(x), at(y))
                    && at(e_of_y.implies(x, y)) == image.implies(at(x), at(y))
            })
    });
    Ok(DualityBuild {
        e_of_y,
        t,
        image,
        t_injective,
        t_homomorphism,
    })
}

/// The generators b_1, …, b_s of B_k: b_j is the j-th coordinate projection
/// of Y_k read at the bold points.
pub fn canonical_generators(k: usize) -> Result<Vec<Tuple>> {
    let ts = build_test_space(k)?;
    let bold = ts.bold_points();
    Ok((0..ts.s).map(|j| bold.iter().map(|p| p[j]).collect()).collect())
}

/// Closed-form cardinality of B_k.
pub fn b_cardinality(k: usize) -> u128 {
    let n = (k / 2) as u32;
    match (k, k % 2) {
        (2, _) => 2,
        (_, 0) => 3 * 2u128.pow(n) - 4,
        _ => 5 * 2u128.pow(n) - 4,
    }
}

fn var_x(i: usize) -> Term {
    Term::var(format!("X{i}"))
}

fn s_term(args: &[Term], i: usize) -> Term {
    let s = args.len();
    let mut joins = Vec::new();
    let mut pick: Vec<usize> = (0..i).collect();
    loop {
        let parts = pick.iter().map(|&m| Term::modulus(args[m].clone())).collect();
        joins.push(Term::fold(parts, Term::join).unwrap());
        // next i-subset in lexicographic order
        let Some(p) = (0..i).rev().find(|&p| pick[p] < s - i + p) else {
            break;
        };
        pick[p] += 1;
        for q in p + 1..i {
            pick[q] = pick[q - 1] + 1;
        }
    }
    Term::fold(joins, Term::meet).unwrap()
}

/// S_i(X_1, …, X_s): the meet, over i-element subsets, of the join of the
/// moduli. Pointwise this is the i-th smallest modulus.
pub fn s_terms(s: usize) -> Vec<Term> {
    let xs: Vec<Term> = (1..=s).map(var_x).collect();
    (1..=s).map(|i| s_term(&xs, i)).collect()
}

/// T_1 = S_1 and T_i = ¬(S_i ↔ S_{i−1}) ∨ S_1.
pub fn t_terms(s: usize) -> Vec<Term> {
    let ss = s_terms(s);
    (0..s)
        .map(|i| {
            if i == 0 {
                ss[0].clone()
            } else {
                Term::join(Term::neg(Term::iff(ss[i].clone(), ss[i - 1].clone())), ss[0].clone())
            }
        })
        .collect()
}

/// G_j = S_j(T_1, …, T_s), in the variables X1, …, Xs.
pub fn mu_terms(s: usize) -> Result<Vec<Term>> {
    if s == 0 {
        return Err(Error::InvalidSize("mu terms need s >= 1".into()));
    }
    let ts = t_terms(s);
    Ok((1..=s).map(|j| s_term(&ts, j)).collect())
}

/// Variables X1, …, Xs in order.
pub fn mu_variables(s: usize) -> Vec<String> {
    (1..=s).map(|i| format!("X{i}")).collect()
}

/// Premises and a conclusion, each an equation between two terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiEquation {
    pub premises: Vec<(Term, Term)>,
    pub conclusion: (Term, Term),
}

impl QuasiEquation {
    /// Variables in name order.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = std::collections::BTreeSet::new();
        for (l, r) in self.premises.iter().chain(std::iter::once(&self.conclusion)) {
            vars.extend(l.variables());
            vars.extend(r.variables());
        }
        vars.into_iter().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub algebra: String,
    pub verdict: Verdict,
    /// Least failing assignment (variables in name order), if any.
    pub countermodel: Option<Vec<(String, Tuple)>>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }
}

/// Decide whether `q` holds in `alg` by trying every assignment in
/// lexicographic order (variables by name, elements by carrier order).
/// Premises are tested as soon as their variables are assigned.
pub fn check_validity(q: &QuasiEquation, alg: &FiniteAlgebra) -> Result<ValidityReport> {
    let vars = q.variables();
    let size = alg.size();
    let needed = (size as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    check_bound(format!("assignments into {}", alg.name()), needed, size_bound())?;

    let mut terms = Vec::new();
    for (l, r) in &q.premises {
        terms.push(l.clone());
        terms.push(r.clone());
    }
    terms.push(q.conclusion.0.clone());
    terms.push(q.conclusion.1.clone());
    let prog = Program::compile(&terms, &vars)?;
    let np = q.premises.len();
    // premises grouped by the deepest variable they read
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); vars.len().max(1)];
    for p in 0..np {
        let last = prog.last_var(2 * p).max(prog.last_var(2 * p + 1)).unwrap_or(0);
        ready[last].push(p);
    }
    let holds = |p: usize, scratch: &[usize]| prog.output(2 * p, scratch) == prog.output(2 * p + 1, scratch);
    let conclusion_holds =
        |scratch: &[usize]| prog.output(2 * np, scratch) == prog.output(2 * np + 1, scratch);

    let counter: Option<Vec<usize>> = if vars.is_empty() {
        let mut scratch = Vec::new();
        prog.run(alg, &[], &mut scratch);
        let premises = (0..np).all(|p| holds(p, &scratch));
        (premises && !conclusion_holds(&scratch)).then(Vec::new)
    } else {
        let nv = vars.len();
        (0..size).into_par_iter().find_map_first(|first| {
            let mut asg = vec![0usize; nv];
            asg[0] = first;
            let mut scratch = Vec::new();
            prog.run_prefix(alg, &asg, 0, &mut scratch);
            if !ready[0].iter().all(|&p| holds(p, &scratch)) {
                return None;
            }
            // depth-first over the remaining variables
            let mut depth = 1;
            if nv == 1 {
                return (!conclusion_holds(&scratch)).then(|| asg.clone());
            }
            let mut fresh = true;
            loop {
                if fresh {
                    asg[depth] = 0;
                } else {
                    asg[depth] += 1;
                    if asg[depth] == size {
                        depth -= 1;
                        if depth == 0 {
                            return None;
                        }
                        fresh = false;
                        continue;
                    }
                }
                prog.run_prefix(alg, &asg, depth, &mut scratch);
                if !ready[depth].iter().all(|&p| holds(p, &scratch)) {
                    fresh = false;
                    continue;
                }
                if depth + 1 == nv {
                    if !conclusion_holds(&scratch) {
                        return Some(asg.clone());
                    }
                    fresh = false;
                } else {
                    depth += 1;
                    fresh = true;
                }
            }
        })
    };
    Ok(ValidityReport {
        algebra: alg.name().to_string(),
        verdict: if counter.is_some() { Verdict::Fails } else { Verdict::Valid },
        countermodel: counter.map(|asg| {
            vars.iter()
                .zip(asg)
                .map(|(v, e)| (v.clone(), alg.label(e)))
                .collect()
        }),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Valid on B_k.
    Admissible,
    /// Valid on Z_k.
    Derivable,
}

/// Admissibility (validity on B_k) or derivability (validity on Z_k).
pub fn decide(q: &QuasiEquation, k: usize, mode: Mode) -> Result<ValidityReport> {
    match mode {
        Mode::Admissible => check_validity(q, &build_b_direct(k)?),
        Mode::Derivable => {
            let z = SugiharaChain::new(k)?;
            check_validity(q, z.algebra())
        }
    }
}

/// Evaluate G_1, …, G_s at a tuple of Z_k.
pub fn apply_mu_terms(k: usize, a: &[i32]) -> Result<Tuple> {
    let z = SugiharaChain::new(k)?;
    let s = a.len();
    let prog = Program::compile(&mu_terms(s)?, &mu_variables(s))?;
    let asg = a
        .iter()
        .map(|&v| z.index(v).ok_or_else(|| Error::NotInCarrier(format!("{v} in Z{k}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut scratch = Vec::new();
    prog.run(z.algebra(), &asg, &mut scratch);
    Ok((0..s).map(|j| z.value(prog.output(j, &scratch))).collect())
}

/// Render a countermodel as `var = tuple` lines.
pub fn render_countermodel(cm: &[(String, Tuple)]) -> String {
    cm.iter()
        .map(|(v, t)| format!("{v} = {}", fmt_tuple(t)))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Assignment map for [`crate::term::eval_term`] from a countermodel.
pub fn countermodel_assignment(
    cm: &[(String, Tuple)],
    alg: &FiniteAlgebra,
) -> Result<BTreeMap<String, usize>> {
    cm.iter()
        .map(|(v, t)| {
            alg.index_of(t)
                .map(|i| (v.clone(), i))
                .ok_or_else(|| Error::NotInCarrier(fmt_tuple(t)))
        })
        .collect()
}

/// A term for every element of `alg` generated by `seeds`, found breadth
/// first so that each term is as shallow as the search allows. Elements
/// outside the generated subalgebra get `None`.
pub fn element_terms(alg: &FiniteAlgebra, seeds: &[(usize, Term)]) -> Vec<Option<Term>> {
    let mut terms: Vec<Option<Term>> = vec![None; alg.size()];
    let mut members = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for (e, t) in seeds {
        if terms[*e].is_none() {
            terms[*e] = Some(t.clone());
            queue.push_back(*e);
        }
    }
    while let Some(a) = queue.pop_front() {
        members.push(a);
        let ta = terms[a].clone().unwrap();
        let mut found = vec![(alg.neg(a), Term::neg(ta.clone()))];
        for &b in &members {
            let tb = terms[b].clone().unwrap();
            found.push((alg.meet(a, b), Term::meet(ta.clone(), tb.clone())));
            found.push((alg.join(a, b), Term::join(ta.clone(), tb.clone())));
            found.push((alg.implies(a, b), Term::implies(ta.clone(), tb.clone())));
            found.push((alg.implies(b, a), Term::implies(tb, ta.clone())));
        }
        for (e, t) in found {
            if terms[e].is_none() {
                terms[e] = Some(t);
                queue.push_back(e);
            }
        }
    }
    terms
}

/// Turn a countermodel over B_k into a substitution of terms in X1, …, Xs:
/// each value is written as a term in the generators b_1, …, b_s, and b_j is
/// then replaced by G_j.
pub fn countermodel_substitution(k: usize, cm: &[(String, Tuple)]) -> Result<BTreeMap<String, Term>> {
    let b = build_b_direct(k)?;
    let gens = canonical_generators(k)?;
    let seeds = gens
        .iter()
        .enumerate()
        .map(|(j, g)| {
            b.index_of(g)
                .map(|e| (e, Term::var(format!("b{}", j + 1))))
                .ok_or_else(|| Error::Internal(format!("generator {} not in B{k}", fmt_tuple(g))))
        })
        .collect::<Result<Vec<_>>>()?;
    let terms = element_terms(&b, &seeds);
    let g: BTreeMap<String, Term> = mu_terms(gens.len())?
        .into_iter()
        .enumerate()
        .map(|(j, t)| (format!("b{}", j + 1), t))
        .collect();
    cm.iter()
        .map(|(v, value)| {
            let e = b
                .index_of(value)
                .ok_or_else(|| Error::NotInCarrier(format!("{} in B{k}", fmt_tuple(value))))?;
            let t = terms[e]
                .as_ref()
                .ok_or_else(|| Error::Internal(format!("{} not generated", fmt_tuple(value))))?;
            Ok((v.clone(), t.substitute(&g)))
        })
        .collect()
}

/// Whether `sigma` turns every premise of `q` into an equation valid on Z_k
/// while the conclusion is not. Such a substitution shows directly that the
/// rule is not admissible.
pub fn refutes_admissibility(q: &QuasiEquation, k: usize, sigma: &BTreeMap<String, Term>) -> Result<bool> {
    let z = SugiharaChain::new(k)?;
    let sub = |t: &Term| t.substitute(sigma);
    let mut vars = std::collections::BTreeSet::new();
    for t in sigma.values() {
        vars.extend(t.variables());
    }
    let vars: Vec<String> = vars.into_iter().collect();
    let mut terms = Vec::new();
    for (l, r) in &q.premises {
        terms.push(sub(l));
        terms.push(sub(r));
    }
    terms.push(sub(&q.conclusion.0));
    terms.push(sub(&q.conclusion.1));
    let prog = Program::compile(&terms, &vars)?;
    let np = q.premises.len();
    let needed = (k as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    check_bound("substitution check", needed, size_bound())?;
    let mut premises_valid = true;
    let mut conclusion_valid = true;
    let mut scratch = Vec::new();
    for asg in crate::algebra::tuples(&(0..k as i32).collect::<Vec<_>>(), vars.len()) {
        let asg: Vec<usize> = asg.into_iter().map(|i| i as usize).collect();
        prog.run(z.algebra(), &asg, &mut scratch);
        let eq = |i: usize| prog.output(2 * i, &scratch) == prog.output(2 * i + 1, &scratch);
        premises_valid &= (0..np).all(eq);
        conclusion_valid &= eq(np);
    }
    Ok(premises_valid && !conclusion_valid)
}
