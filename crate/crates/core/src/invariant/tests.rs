use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::machine::{word, Symbol};

fn nfa(src: &str) -> InvariantProgram {
    InvariantProgram::parse(src, MachineKind::Nfa).unwrap()
}

fn pda(src: &str) -> InvariantProgram {
    InvariantProgram::parse(src, MachineKind::Pda).unwrap()
}

#[test]
fn empty_consumed_input() {
    let s_inv = nfa("len(ci)==0");
    assert!(s_inv.eval(&[], None));
    assert!(!s_inv.eval(&word("a b a"), None));
}

#[test]
fn equal_counts_over_ci_and_stack() {
    let s_inv = pda("count(ci ++ stack, a) == count(ci ++ stack, b)");
    let check = |ci: &str, st: &str| s_inv.eval(&word(ci), Some(word(st).as_slice()));
    assert!(!check("b a", "b b b"));
    assert!(!check("a", "a"));
    assert!(check("", ""));
    assert!(check("a a b", "b"));
}

#[test]
fn last_letter_predicates() {
    let p = nfa("not matches(ci, (a|b)* a)");
    assert!(!p.eval(&word("a"), None));
    assert!(p.eval(&word("a b"), None));

    let quoted = nfa(r#"not matches(ci, "(a|b)* a")"#);
    assert_eq!(quoted.expr(), p.expr());
}

#[test]
fn block_structure() {
    let p = pda("matches(ci, a* b*) and matches(stack, b*)");
    assert!(p.eval(&word("a a b"), Some(word("b").as_slice())));
    assert!(!p.eval(&word("a b a"), Some(word("b").as_slice())));
    assert!(!p.eval(&word("a"), Some(word("a").as_slice())));
}

#[test]
fn arithmetic_and_precedence() {
    // i <= j + |stack| <= 2i
    let p = pda(
        "count(ci, a) <= count(ci, b) + len(stack) and count(ci, b) + len(stack) <= 2 * count(ci, a)",
    );
    assert!(p.eval(&word("a a b"), Some(word("b").as_slice())));
    assert!(!p.eval(&word("a"), Some(&[])));
    assert!(nfa("1 + 2 * 3 == 7").eval(&[], None));
    assert!(nfa("(1 + 2) * 3 == 9").eval(&[], None));
    assert!(nfa("0 - 5 < 0").eval(&[], None));
    assert!(nfa("not false and false or true").eval(&[], None));
    assert!(!nfa("not (false or true)").eval(&[], None));
}

#[test]
fn word_literals() {
    let p = nfa("len(ci ++ [a b c]) == 4 and matches([x, y], x y) and len([]) == 0");
    assert!(p.eval(&word("z"), None));
}

#[test]
fn type_errors() {
    let err = InvariantProgram::parse("len(ci) == stack", MachineKind::Pda).unwrap_err();
    assert_eq!(err.kind, ErrorKind::Type);
    assert_eq!(err.pos, Pos { line: 1, column: 9 });
    assert!(err.to_string().contains("cannot compare int with word"), "{err}");

    for bad in ["len(ci)", "ci", "1 + ci == 1", "not 3", "true and 1", "len(3) == 1", "ci ++ 1 == ci"] {
        let err = InvariantProgram::parse(bad, MachineKind::Pda).unwrap_err();
        assert_eq!(err.kind, ErrorKind::Type, "{bad}: {err}");
    }
}

#[test]
fn stack_rejected_for_nfa() {
    let err = InvariantProgram::parse("len(ci) == 0 and\n len(stack) == 0", MachineKind::Nfa)
        .unwrap_err();
    assert_eq!(err.kind, ErrorKind::StackInNfa);
    assert_eq!(err.pos, Pos { line: 2, column: 6 });
}

#[test]
fn syntax_errors_carry_positions() {
    let err = InvariantProgram::parse("len(ci) ==", MachineKind::Nfa).unwrap_err();
    assert_eq!(err.kind, ErrorKind::Syntax);
    assert_eq!(err.pos, Pos { line: 1, column: 11 });

    for bad in [
        "", "len ci", "count(ci, ) == 1", "matches(ci, )", "matches(ci, a|)", "1 < 2 < 3",
        "[a b", "foo", "true true", "matches(ci, EMP)", "count(ci, _) == 0",
    ] {
        let err = InvariantProgram::parse(bad, MachineKind::Nfa).unwrap_err();
        assert_eq!(err.kind, ErrorKind::Syntax, "{bad}: {err}");
    }
}

#[test]
fn comments_are_ignored() {
    let p = nfa("# S: nothing consumed yet\nlen(ci) == 0 # trailing");
    assert!(p.eval(&[], None));
}

#[test]
fn invariant_set_from_machine() {
    use crate::machine::{Machine, Rule};
    let m = Machine::nfa(&["S", "A"], &["a"], "S", &["A"], vec![Rule::nfa("S", "a", "A")])
        .with_invariant("S", "len(ci) == 0")
        .with_invariant("A", "len(ci) ==");
    let (state, err) = InvariantSet::from_machine(&m).unwrap_err();
    assert_eq!(state.as_str(), "A");
    assert_eq!(err.kind, ErrorKind::Syntax);

    let m = m.with_invariant("A", "len(ci) == 1");
    let set = InvariantSet::from_machine(&m).unwrap();
    assert!(set.get(&"A".into()).unwrap().eval(&word("a"), None));
}

// Brute-force language of a pattern, restricted to words of length <= n.
fn language(p: &Pattern, n: usize) -> BTreeSet<Vec<Symbol>> {
    let concat = |a: &BTreeSet<Vec<Symbol>>, b: &BTreeSet<Vec<Symbol>>| {
        let mut out = BTreeSet::new();
        for u in a {
            for v in b {
                if u.len() + v.len() <= n {
                    let mut w = u.clone();
                    w.extend(v.iter().cloned());
                    out.insert(w);
                }
            }
        }
        out
    };
    match p {
        Pattern::Empty => BTreeSet::from([vec![]]),
        Pattern::Sym(s) => {
            if n == 0 {
                BTreeSet::new()
            } else {
                BTreeSet::from([vec![s.clone()]])
            }
        }
        Pattern::Alt(items) => items.iter().flat_map(|i| language(i, n)).collect(),
        Pattern::Concat(items) => items
            .iter()
            .fold(BTreeSet::from([vec![]]), |acc, i| concat(&acc, &language(i, n))),
        Pattern::Star(inner) => {
            let base = language(inner, n);
            let mut acc = BTreeSet::from([vec![]]);
            loop {
                let next: BTreeSet<_> = acc.union(&concat(&acc, &base)).cloned().collect();
                if next == acc {
                    return acc;
                }
                acc = next;
            }
        }
    }
}

fn all_words(alphabet: &[&str], max: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &frontier {
            for a in alphabet {
                let mut w2: Vec<Symbol> = w.clone();
                w2.push(Symbol::from(*a));
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn matches_agrees_with_enumerated_language() {
    let battery = [
        "a* b*",
        "(a|b)* a",
        "(a b)* b*",
        "a b*|(a b)* b*",
        "_",
        "_|a",
        "(a|_) (b|_)",
        "(a a)*",
        "((a|b) (a|b))*",
        "a* (b a*)* b",
        "(a* b*)*",
        "b",
    ];
    let words = all_words(&["a", "b"], 6);
    for src in battery {
        let prog = nfa(&format!("matches(ci, {src})"));
        let Expr::Matches(_, compiled) = prog.expr() else {
            panic!("not a matches node")
        };
        let lang = language(compiled.pattern(), 6);
        for w in &words {
            assert_eq!(
                compiled.matches(w),
                lang.contains(w),
                "pattern {src} on {w:?}"
            );
        }
    }
}

fn arb_symbol() -> impl Strategy<Value = Symbol> {
    prop_oneof![Just("a"), Just("b"), Just("c1")].prop_map(Symbol::from)
}

fn arb_pattern() -> impl Strategy<Value = Pattern> {
    let leaf = prop_oneof![Just(Pattern::Empty), arb_symbol().prop_map(Pattern::Sym)];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Pattern::Concat),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Pattern::Alt),
            inner.prop_map(|p| Pattern::Star(Box::new(p))),
        ]
    })
}

fn arb_word_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::Ci),
        Just(Expr::Stack),
        prop::collection::vec(arb_symbol(), 0..3).prop_map(Expr::Word),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        (inner.clone(), inner).prop_map(|(l, r)| Expr::Concat(Box::new(l), Box::new(r)))
    })
}

fn arb_int_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..100).prop_map(Expr::Num),
        arb_word_expr().prop_map(|w| Expr::Len(Box::new(w))),
        (arb_word_expr(), arb_symbol()).prop_map(|(w, s)| Expr::Count(Box::new(w), s)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        (
            prop_oneof![Just(ArithOp::Add), Just(ArithOp::Sub), Just(ArithOp::Mul)],
            inner.clone(),
            inner,
        )
            .prop_map(|(op, l, r)| Expr::Arith(op, Box::new(l), Box::new(r)))
    })
}

fn arb_bool_expr() -> impl Strategy<Value = Expr> {
    let cmp = prop_oneof![
        Just(CmpOp::Eq),
        Just(CmpOp::Ne),
        Just(CmpOp::Lt),
        Just(CmpOp::Le),
        Just(CmpOp::Gt),
        Just(CmpOp::Ge)
    ];
    let leaf = prop_oneof![
        any::<bool>().prop_map(Expr::Bool),
        (cmp, arb_int_expr(), arb_int_expr())
            .prop_map(|(op, l, r)| Expr::Cmp(op, Box::new(l), Box::new(r))),
        (arb_word_expr(), arb_pattern())
            .prop_map(|(w, p)| Expr::Matches(Box::new(w), CompiledPattern::new(p))),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Not(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::And(Box::new(l), Box::new(r))),
            (inner.clone(), inner).prop_map(|(l, r)| Expr::Or(Box::new(l), Box::new(r))),
        ]
    })
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(expr in arb_bool_expr()) {
        let text = expr.to_string();
        let parsed = InvariantProgram::parse(&text, MachineKind::Pda)
            .unwrap_or_else(|e| panic!("{text}: {e}"));
        prop_assert_eq!(parsed.expr(), &expr);
        prop_assert_eq!(parsed.render(), text);
    }

    #[test]
    fn well_typed_programs_evaluate_on_any_words(
        expr in arb_bool_expr(),
        ci in prop::collection::vec(arb_symbol(), 0..8),
        stack in prop::collection::vec(arb_symbol(), 0..8),
    ) {
        let prog = InvariantProgram::parse(&expr.to_string(), MachineKind::Pda).unwrap();
        let first = prog.eval(&ci, Some(&stack));
        prop_assert_eq!(first, prog.eval(&ci, Some(&stack)));
    }
}
