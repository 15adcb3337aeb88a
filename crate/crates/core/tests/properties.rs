use std::collections::BTreeMap;

use proptest::prelude::*;

use sugihara::admissibility::{decide, Mode, QuasiEquation};
use sugihara::parser::{parse_formula, parse_rule, print_formula, Rule, Style};
use sugihara::partial::partial_endos_bruteforce;
use sugihara::subalgebra::closure;
use sugihara::term::Program;
use sugihara::{eval_term, power_algebra, FiniteAlgebra, SugiharaChain, Term};

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just("p"), Just("q"), Just("r"), Just("x_1"), Just("longName")]
        .prop_map(Term::var);
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::neg),
            inner.clone().prop_map(Term::modulus),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::meet(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::join(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Term::iff(a, b)),
        ]
    })
}

fn arb_small_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just("p"), Just("q")].prop_map(Term::var);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::neg),
            inner.clone().prop_map(Term::modulus),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::meet(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::join(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Term::implies(a, b)),
        ]
    })
}

fn style() -> impl Strategy<Value = Style> {
    prop_oneof![Just(Style::Ascii), Just(Style::Unicode)]
}

fn identity_equation(t: Term) -> (Term, Term) {
    (t.clone(), Term::implies(t.clone(), t))
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(t in arb_term(), style in style()) {
        let text = print_formula(&t, style);
        prop_assert_eq!(parse_formula(&text).unwrap(), t, "{}", text);
    }

    #[test]
    fn printing_is_stable(t in arb_term(), style in style()) {
        let once = print_formula(&t, style);
        let twice = print_formula(&parse_formula(&once).unwrap(), style);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn ascii_and_unicode_agree(t in arb_term()) {
        let a = parse_formula(&print_formula(&t, Style::Ascii)).unwrap();
        let u = parse_formula(&print_formula(&t, Style::Unicode)).unwrap();
        prop_assert_eq!(a, u);
    }

    #[test]
    fn rules_round_trip(ps in prop::collection::vec(arb_term(), 0..4), c in arb_term(), style in style()) {
        let rule = Rule { premises: ps, conclusion: c, line: 1 };
        let back = parse_rule(&rule.render(style)).unwrap();
        prop_assert_eq!(back, rule);
    }

    #[test]
    fn composition_is_associative(k in 2usize..=7, picks in prop::array::uniform3(any::<prop::sample::Index>())) {
        let z = SugiharaChain::new(k).unwrap();
        let pez = partial_endos_bruteforce(&z).unwrap();
        let [f, g, h] = picks.map(|i| &pez.elements[i.index(pez.len())]);
        let left = f.compose(g).unwrap().compose(h).unwrap();
        let right = f.compose(&g.compose(h).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(pez.contains(&left));
    }

    #[test]
    fn order_is_read_off_implication(k in 2usize..=12, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let z = SugiharaChain::new(k).unwrap();
        let (a, b) = (z.value(i.index(k)), z.value(j.index(k)));
        let imp = z.implies(a, b).unwrap();
        prop_assert_eq!(a <= b, imp >= 0);
        prop_assert_eq!(imp, z.implies(-b, -a).unwrap());
    }

    #[test]
    fn compiled_terms_match_evaluation(t in arb_term(), k in 2usize..=5, seed in prop::collection::vec(any::<prop::sample::Index>(), 5)) {
        let z = SugiharaChain::new(k).unwrap();
        let alg = power_algebra(&z, 2).unwrap();
        let vars: Vec<String> = t.variables().into_iter().collect();
        let asg: Vec<usize> = vars.iter().zip(&seed).map(|(_, i)| i.index(alg.size())).collect();
        let map: BTreeMap<String, usize> = vars.iter().cloned().zip(asg.iter().copied()).collect();
        let prog = Program::compile(std::slice::from_ref(&t), &vars).unwrap();
        let mut scratch = Vec::new();
        prog.run(&alg, &asg, &mut scratch);
        prop_assert_eq!(prog.output(0, &scratch), eval_term(&t, &map, &alg).unwrap());
    }

    #[test]
    fn derivable_rules_are_admissible(
        ps in prop::collection::vec(arb_small_term(), 0..3),
        c in arb_small_term(),
        k in 3usize..=6,
    ) {
        let q = QuasiEquation {
            premises: ps.into_iter().map(identity_equation).collect(),
            conclusion: identity_equation(c),
        };
        if decide(&q, k, Mode::Derivable).unwrap().is_valid() {
            prop_assert!(decide(&q, k, Mode::Admissible).unwrap().is_valid());
        }
    }

    #[test]
    fn algebra_json_round_trip(k in 2usize..=5, seeds in prop::collection::vec(any::<prop::sample::Index>(), 1..3)) {
        let z = SugiharaChain::new(k).unwrap();
        let sq = power_algebra(&z, 2).unwrap();
        let gens: Vec<usize> = seeds.iter().map(|i| i.index(sq.size())).collect();
        let sub = sq.induced("S", &closure(&sq, &gens)).unwrap();
        let back = FiniteAlgebra::from_json(&sub.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.labels(), sub.labels());
        for a in 0..sub.size() {
            prop_assert_eq!(back.neg(a), sub.neg(a));
            for b in 0..sub.size() {
                prop_assert_eq!(back.implies(a, b), sub.implies(a, b));
                prop_assert_eq!(back.meet(a, b), sub.meet(a, b));
            }
        }
    }
}
