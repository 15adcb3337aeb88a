//! Formulas and rule files.
//!
//! Precedence, tightest first: ¬ and |·|, then ∧, ∨, →, ↔. → associates to
//! the right; ∧, ∨ and ↔ to the left.
//!
//! | connective | ASCII     | Unicode |
//! |------------|-----------|---------|
//! | negation   | `~`       | `¬`     |
//! | meet       | `&`       | `∧`     |
//! | join       | `\|`      | `∨`     |
//! | implies    | `->`      | `→`     |
//! | iff        | `<->`     | `↔`     |
//! | modulus    | `abs(x)`  | `\|x\|` |
//! | turnstile  | `\|-`     | `⊢`     |
//!
//! Where a formula is expected, `|` opens a modulus. Elsewhere it closes the
//! innermost open modulus if there is one, and is the join otherwise; so a
//! join directly inside `|…|` must be written `∨` or parenthesised.

use std::fmt;

use crate::admissibility::QuasiEquation;
use crate::error::{Error, Result};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Ascii,
    Unicode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Var(String),
    Not,
    And,
    Or,
    Imp,
    Iff,
    BarOpen,
    BarClose,
    Abs,
    LParen,
    RParen,
    Comma,
    Turnstile,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Var(v) => format!("variable `{v}`"),
            Tok::End => "end of input".into(),
            Tok::Not => "negation".into(),
            Tok::And => "meet".into(),
            Tok::Or => "join".into(),
            Tok::Imp => "implication".into(),
            Tok::Iff => "biconditional".into(),
            Tok::BarOpen | Tok::BarClose => "`|`".into(),
            Tok::Abs => "`abs`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Turnstile => "turnstile".into(),
        }
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Tokens with their 1-based columns.
fn lex(text: &str, line: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out: Vec<(Tok, usize)> = Vec::new();
    // open parentheses (false) and moduli (true), innermost last
    let mut open: Vec<bool> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let operand_expected = !matches!(
            out.last().map(|t| &t.0),
            Some(Tok::Var(_) | Tok::RParen | Tok::BarClose)
        );
        let c = chars[i];
        let col = i + 1;
        let rest = |s: &str| chars[i..].iter().take(s.chars().count()).copied().eq(s.chars());
        let (tok, width) = match c {
            ' ' | '\t' | '\r' => {
                i += 1;
                continue;
            }
            '~' | '¬' => (Tok::Not, 1),
            '&' | '∧' => (Tok::And, 1),
            '∨' => (Tok::Or, 1),
            '→' => (Tok::Imp, 1),
            '↔' => (Tok::Iff, 1),
            '⊢' => (Tok::Turnstile, 1),
            '(' => {
                open.push(false);
                (Tok::LParen, 1)
            }
            ')' => {
                if open.last() == Some(&false) {
                    open.pop();
                }
                (Tok::RParen, 1)
            }
            ',' => (Tok::Comma, 1),
            '|' if rest("|-") && !rest("|->") => (Tok::Turnstile, 2),
            '|' if operand_expected => {
                open.push(true);
                (Tok::BarOpen, 1)
            }
            '|' if open.last() == Some(&true) => {
                open.pop();
                (Tok::BarClose, 1)
            }
            '|' => (Tok::Or, 1),
            '-' if rest("->") => (Tok::Imp, 2),
            '<' if rest("<->") => (Tok::Iff, 3),
            'a'..='z' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                if word == "abs" {
                    (Tok::Abs, j - i)
                } else {
                    (Tok::Var(word), j - i)
                }
            }
            _ => return Err(syntax(line, col, format!("unexpected character `{c}`"))),
        };
        out.push((tok, col));
        i += width;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", want.describe())))
        }
    }

    fn unexpected(&self, context: &str) -> Error {
        syntax(
            self.line,
            self.col(),
            format!("{context}, found {}", self.peek().describe()),
        )
    }

    fn formula(&mut self) -> Result<Term> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Term> {
        let mut left = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            left = Term::iff(left, self.implication()?);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Term> {
        let left = self.join()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            return Ok(Term::implies(left, self.implication()?));
        }
        Ok(left)
    }

    fn join(&mut self) -> Result<Term> {
        let mut left = self.meet()?;
        while *self.peek() == Tok::Or {
            self.bump();
            left = Term::join(left, self.meet()?);
        }
        Ok(left)
    }

    fn meet(&mut self) -> Result<Term> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            left = Term::meet(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Term::neg(self.unary()?))
            }
            Tok::Abs => {
                self.bump();
                self.expect(Tok::LParen)?;
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(Term::modulus(inner))
            }
            Tok::BarOpen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::BarClose)?;
                Ok(Term::modulus(inner))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            _ => Err(self.unexpected("expected a formula")),
        }
    }
}

fn parse_formula_at(text: &str, line: usize) -> Result<Term> {
    let mut p = Parser {
        toks: lex(text, line)?,
        pos: 0,
        line,
    };
    let t = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("expected end of formula"));
    }
    Ok(t)
}

pub fn parse_formula(text: &str) -> Result<Term> {
    parse_formula_at(text, 1)
}

/// Binding strength; higher binds tighter.
fn level(t: &Term) -> u8 {
    match t {
        Term::Iff(..) => 1,
        Term::Implies(..) => 2,
        Term::Join(..) => 3,
        Term::Meet(..) => 4,
        Term::Neg(_) | Term::Modulus(_) | Term::Var(_) => 5,
    }
}

/// Print with the fewest parentheses that parse back to the same tree.
pub fn print_formula(t: &Term, style: Style) -> String {
    let mut out = String::new();
    write_term(t, style, &mut out);
    out
}

fn write_term(t: &Term, style: Style, out: &mut String) {
    let uni = style == Style::Unicode;
    let wrapped = |t: &Term, paren: bool, out: &mut String| {
        if paren {
            out.push('(');
        }
        write_term(t, style, out);
        if paren {
            out.push(')');
        }
    };
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Neg(a) => {
            out.push_str(if uni { "¬" } else { "~" });
            wrapped(a, level(a) < 5, out);
        }
        Term::Modulus(a) => {
            out.push_str(if uni { "|" } else { "abs(" });
            write_term(a, style, out);
            out.push_str(if uni { "|" } else { ")" });
        }
        Term::Meet(a, b) | Term::Join(a, b) | Term::Implies(a, b) | Term::Iff(a, b) => {
            let l = level(t);
            let right_assoc = matches!(t, Term::Implies(..));
            let op = match (t, uni) {
                (Term::Meet(..), false) => " & ",
                (Term::Meet(..), true) => " ∧ ",
                (Term::Join(..), false) => " | ",
                (Term::Join(..), true) => " ∨ ",
                (Term::Implies(..), false) => " -> ",
                (Term::Implies(..), true) => " → ",
                (_, false) => " <-> ",
                (_, true) => " ↔ ",
            };
            wrapped(a, level(a) < l || (level(a) == l && right_assoc), out);
            out.push_str(op);
            wrapped(b, level(b) < l || (level(b) == l && !right_assoc), out);
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self, Style::Ascii))
    }
}

/// `φ_1, …, φ_m ⊢ ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub premises: Vec<Term>,
    pub conclusion: Term,
    /// Line in the source file (1-based).
    pub line: usize,
}

impl Rule {
    pub fn render(&self, style: Style) -> String {
        let premises: Vec<String> = self.premises.iter().map(|t| print_formula(t, style)).collect();
        let turnstile = if style == Style::Unicode { "⊢" } else { "|-" };
        let conclusion = print_formula(&self.conclusion, style);
        if premises.is_empty() {
            format!("{turnstile} {conclusion}")
        } else {
            format!("{} {turnstile} {conclusion}", premises.join(", "))
        }
    }
}

fn parse_rule_at(text: &str, line: usize) -> Result<Rule> {
    let mut p = Parser {
        toks: lex(text, line)?,
        pos: 0,
        line,
    };
    let mut premises = Vec::new();
    if *p.peek() != Tok::Turnstile {
        loop {
            premises.push(p.formula()?);
            match p.peek() {
                Tok::Comma => {
                    p.bump();
                }
                Tok::Turnstile => break,
                _ => return Err(p.unexpected("expected `,` or turnstile")),
            }
        }
    }
    p.expect(Tok::Turnstile)?;
    let conclusion = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("expected end of rule"));
    }
    Ok(Rule {
        premises,
        conclusion,
        line,
    })
}

pub fn parse_rule(text: &str) -> Result<Rule> {
    parse_rule_at(text, 1)
}

/// One rule per line; `#` starts a comment; blank lines are skipped.
pub fn parse_rules(text: &str) -> Result<Vec<Rule>> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        rules.push(parse_rule_at(body, i + 1)?);
    }
    Ok(rules)
}

/// Each formula α becomes the equation α ≈ α → α.
pub fn rule_to_quasiequation(rule: &Rule) -> QuasiEquation {
    let eq = |t: &Term| (t.clone(), Term::implies(t.clone(), t.clone()));
    QuasiEquation {
        premises: rule.premises.iter().map(eq).collect(),
        conclusion: eq(&rule.conclusion),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Term {
        Term::var(name)
    }

    #[test]
    fn examples() {
        assert_eq!(
            parse_formula("p -> (q -> r)").unwrap(),
            Term::implies(v("p"), Term::implies(v("q"), v("r")))
        );
        assert_eq!(
            parse_formula("p -> q -> r").unwrap(),
            parse_formula("p -> (q -> r)").unwrap()
        );
        assert_eq!(
            parse_formula("~abs(p) | q").unwrap(),
            Term::join(Term::neg(Term::modulus(v("p"))), v("q"))
        );
        assert_eq!(parse_formula("p <-> ~p").unwrap(), Term::iff(v("p"), Term::neg(v("p"))));
        assert_eq!(
            parse_formula("¬|p| ∨ q").unwrap(),
            parse_formula("~abs(p) | q").unwrap()
        );
        assert_eq!(parse_formula("|p|").unwrap(), Term::modulus(v("p")));
        assert_eq!(
            parse_formula("|p|->q").unwrap(),
            Term::implies(Term::modulus(v("p")), v("q"))
        );
        assert_eq!(
            parse_formula("|(p | q)| | r").unwrap(),
            Term::join(Term::modulus(Term::join(v("p"), v("q"))), v("r"))
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_formula("a & b | c -> d <-> e").unwrap(),
            Term::iff(
                Term::implies(Term::join(Term::meet(v("a"), v("b")), v("c")), v("d")),
                v("e")
            )
        );
        assert_eq!(
            parse_formula("a | b | c").unwrap(),
            Term::join(Term::join(v("a"), v("b")), v("c"))
        );
        assert_eq!(
            parse_formula("~~a & b").unwrap(),
            Term::meet(Term::neg(Term::neg(v("a"))), v("b"))
        );
        assert_eq!(
            parse_formula("||p ∧ |q|||").unwrap(),
            Term::modulus(Term::modulus(Term::meet(v("p"), Term::modulus(v("q")))))
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse_formula("p & & q") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 5)),
            other => panic!("{other:?}"),
        }
        match parse_rules("p |- q\n# note\np, |- q") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (3, 4)),
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("P").is_err());
        assert!(parse_formula("abs p").is_err());
        assert!(parse_formula("(p").is_err());
        assert!(parse_formula("|p").is_err());
        assert!(parse_formula("p q").is_err());
        assert!(parse_formula("").is_err());
    }

    #[test]
    fn printing() {
        let t = parse_formula("(p -> q) -> r").unwrap();
        assert_eq!(t.to_string(), "(p -> q) -> r");
        assert_eq!(print_formula(&t, Style::Unicode), "(p → q) → r");
        let t = parse_formula("~(p & q) | abs(r)").unwrap();
        assert_eq!(t.to_string(), "~(p & q) | abs(r)");
        assert_eq!(print_formula(&t, Style::Unicode), "¬(p ∧ q) ∨ |r|");
        let t = parse_formula("a | (b | c)").unwrap();
        assert_eq!(t.to_string(), "a | (b | c)");
    }

    #[test]
    fn rules() {
        let rules = parse_rules("# table\np, ~p | q |- q\n\n⊢ p\nq, p → (q → r) ⊢ p → r  # trailing\n").unwrap();
        assert_eq!(rules.len(), 3);
        assert_eq!(rules[0].premises.len(), 2);
        assert_eq!(rules[0].line, 2);
        assert!(rules[1].premises.is_empty());
        assert_eq!(rules[2].render(Style::Ascii), "q, p -> q -> r |- p -> r");
        assert_eq!(rules[2].render(Style::Unicode), "q, p → q → r ⊢ p → r");
    }

    #[test]
    fn translation() {
        let r = parse_rule("|- p").unwrap();
        let q = rule_to_quasiequation(&r);
        assert!(q.premises.is_empty());
        assert_eq!(q.conclusion, (v("p"), Term::implies(v("p"), v("p"))));

        let q = rule_to_quasiequation(&parse_rule("p |- q").unwrap());
        assert_eq!(q.premises, vec![(v("p"), Term::implies(v("p"), v("p")))]);
        assert_eq!(q.conclusion, (v("q"), Term::implies(v("q"), v("q"))));

        let q = rule_to_quasiequation(&parse_rule("p, ¬p∨q ⊢ q").unwrap());
        assert_eq!(q.premises.len(), 2);
        for (l, r) in q.premises.iter().chain([&q.conclusion]) {
            assert_eq!(r, &Term::implies(l.clone(), l.clone()));
        }
    }
}
