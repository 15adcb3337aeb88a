//! Terms over variables with ∧, ∨, →, ¬ and the derived |·| and ↔.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Neg(Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Implies(Box<Term>, Box<Term>),
    /// |x| := x → x
    Modulus(Box<Term>),
    /// x ↔ y := (x → y) ∧ (y → x)
    Iff(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn neg(t: Term) -> Term {
        Term::Neg(Box::new(t))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Term, b: Term) -> Term {
        Term::Implies(Box::new(a), Box::new(b))
    }

    pub fn modulus(t: Term) -> Term {
        Term::Modulus(Box::new(t))
    }

    pub fn iff(a: Term, b: Term) -> Term {
        Term::Iff(Box::new(a), Box::new(b))
    }

    /// Fold a non-empty list with a binary constructor, left to right.
    pub fn fold(mut items: Vec<Term>, f: fn(Term, Term) -> Term) -> Option<Term> {
        if items.is_empty() {
            return None;
        }
        let first = items.remove(0);
        Some(items.into_iter().fold(first, f))
    }

    /// Rewrite |·| and ↔ into the primitive connectives.
    pub fn expand(&self) -> Term {
        match self {
            Term::Var(v) => Term::Var(v.clone()),
            Term::Neg(a) => Term::neg(a.expand()),
            Term::Meet(a, b) => Term::meet(a.expand(), b.expand()),
            Term::Join(a, b) => Term::join(a.expand(), b.expand()),
            Term::Implies(a, b) => Term::implies(a.expand(), b.expand()),
            Term::Modulus(a) => {
                let a = a.expand();
                Term::implies(a.clone(), a)
            }
            Term::Iff(a, b) => {
                let (a, b) = (a.expand(), b.expand());
                Term::meet(Term::implies(a.clone(), b.clone()), Term::implies(b, a))
            }
        }
    }

    pub fn is_primitive(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Neg(a) => a.is_primitive(),
            Term::Meet(a, b) | Term::Join(a, b) | Term::Implies(a, b) => {
                a.is_primitive() && b.is_primitive()
            }
            Term::Modulus(_) | Term::Iff(_, _) => false,
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Neg(a) | Term::Modulus(a) => a.collect_vars(out),
            Term::Meet(a, b) | Term::Join(a, b) | Term::Implies(a, b) | Term::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Neg(a) | Term::Modulus(a) => 1 + a.size(),
            Term::Meet(a, b) | Term::Join(a, b) | Term::Implies(a, b) | Term::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Substitute terms for variables.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Neg(a) => Term::neg(a.substitute(map)),
            Term::Modulus(a) => Term::modulus(a.substitute(map)),
            Term::Meet(a, b) => Term::meet(a.substitute(map), b.substitute(map)),
            Term::Join(a, b) => Term::join(a.substitute(map), b.substitute(map)),
            Term::Implies(a, b) => Term::implies(a.substitute(map), b.substitute(map)),
            Term::Iff(a, b) => Term::iff(a.substitute(map), b.substitute(map)),
        }
    }
}

/// Evaluate `t` in `alg` under `asg` (variable → element index).
pub fn eval_term(t: &Term, asg: &BTreeMap<String, usize>, alg: &FiniteAlgebra) -> Result<usize> {
    for (v, &e) in asg {
        if e >= alg.size() {
            return Err(Error::NotInCarrier(format!("{v} = #{e}")));
        }
    }
    eval_expanded(&t.expand(), asg, alg)
}

fn eval_expanded(t: &Term, asg: &BTreeMap<String, usize>, alg: &FiniteAlgebra) -> Result<usize> {
    Ok(match t {
        Term::Var(v) => *asg.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?,
        Term::Neg(a) => alg.neg(eval_expanded(a, asg, alg)?),
        Term::Meet(a, b) => alg.meet(eval_expanded(a, asg, alg)?, eval_expanded(b, asg, alg)?),
        Term::Join(a, b) => alg.join(eval_expanded(a, asg, alg)?, eval_expanded(b, asg, alg)?),
        Term::Implies(a, b) => {
            alg.implies(eval_expanded(a, asg, alg)?, eval_expanded(b, asg, alg)?)
        }
        Term::Modulus(_) | Term::Iff(_, _) => unreachable!("expanded"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Instr {
    Var(usize),
    Neg(usize),
    Meet(usize, usize),
    Join(usize, usize),
    Implies(usize, usize),
}

/// A set of terms flattened to straight-line code with shared subterms, for
/// repeated evaluation in one algebra. Variables are numbered by position in
/// the `vars` list given at compile time.
#[derive(Clone, Debug)]
pub struct Program {
    code: Vec<Instr>,
    outputs: Vec<usize>,
    /// For each output, the largest variable position it reads (None if it
    /// reads none).
    last_var: Vec<Option<usize>>,
    reads: Vec<Option<usize>>,
}

impl Program {
    pub fn compile(terms: &[Term], vars: &[String]) -> Result<Program> {
        let pos: HashMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut code = Vec::new();
        let mut reads: Vec<Option<usize>> = Vec::new();
        let mut memo: HashMap<Instr, usize> = HashMap::new();
        let mut outputs = Vec::new();
        for t in terms {
            let out = Self::emit(&t.expand(), &pos, &mut code, &mut reads, &mut memo)?;
            outputs.push(out);
        }
        let last_var = outputs.iter().map(|&o| reads[o]).collect();
        Ok(Program {
            code,
            outputs,
            last_var,
            reads,
        })
    }

    fn emit(
        t: &Term,
        pos: &HashMap<&str, usize>,
        code: &mut Vec<Instr>,
        reads: &mut Vec<Option<usize>>,
        memo: &mut HashMap<Instr, usize>,
    ) -> Result<usize> {
        let (instr, r) = match t {
            Term::Var(v) => {
                let p = *pos.get(v.as_str()).ok_or_else(|| Error::UnboundVariable(v.clone()))?;
                (Instr::Var(p), Some(p))
            }
            Term::Neg(a) => {
                let a = Self::emit(a, pos, code, reads, memo)?;
                (Instr::Neg(a), reads[a])
            }
            Term::Meet(a, b) | Term::Join(a, b) | Term::Implies(a, b) => {
                let x = Self::emit(a, pos, code, reads, memo)?;
                let y = Self::emit(b, pos, code, reads, memo)?;
                let r = reads[x].max(reads[y]);
                let i = match t {
                    Term::Meet(..) => Instr::Meet(x, y),
                    Term::Join(..) => Instr::Join(x, y),
                    _ => Instr::Implies(x, y),
                };
                (i, r)
            }
            Term::Modulus(_) | Term::Iff(_, _) => unreachable!("expanded"),
        };
        if let Some(&slot) = memo.get(&instr) {
            return Ok(slot);
        }
        code.push(instr);
        reads.push(r);
        memo.insert(instr, code.len() - 1);
        Ok(code.len() - 1)
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    /// Largest variable position read by output `i`.
    pub fn last_var(&self, i: usize) -> Option<usize> {
        self.last_var[i]
    }

    /// Evaluate every instruction; `scratch` is resized as needed.
    pub fn run(&self, alg: &FiniteAlgebra, asg: &[usize], scratch: &mut Vec<usize>) {
        scratch.resize(self.code.len(), 0);
        for (i, instr) in self.code.iter().enumerate() {
            scratch[i] = match *instr {
                Instr::Var(p) => asg[p],
                Instr::Neg(a) => alg.neg(scratch[a]),
                Instr::Meet(a, b) => alg.meet(scratch[a], scratch[b]),
                Instr::Join(a, b) => alg.join(scratch[a], scratch[b]),
                Instr::Implies(a, b) => alg.implies(scratch[a], scratch[b]),
            };
        }
    }

    /// Evaluate only the instructions that read no variable beyond `upto`.
    /// Slots that read later variables are left untouched.
    pub fn run_prefix(&self, alg: &FiniteAlgebra, asg: &[usize], upto: usize, scratch: &mut Vec<usize>) {
        scratch.resize(self.code.len(), 0);
        for (i, instr) in self.code.iter().enumerate() {
            if self.reads[i].is_some_and(|r| r != upto) {
                // current from an earlier depth, or not computable yet
                continue;
            }
            scratch[i] = match *instr {
                Instr::Var(p) => asg[p],
                Instr::Neg(a) => alg.neg(scratch[a]),
                Instr::Meet(a, b) => alg.meet(scratch[a], scratch[b]),
                Instr::Join(a, b) => alg.join(scratch[a], scratch[b]),
                Instr::Implies(a, b) => alg.implies(scratch[a], scratch[b]),
            };
        }
    }

    pub fn output(&self, i: usize, scratch: &[usize]) -> usize {
        scratch[self.outputs[i]]
    }
}
