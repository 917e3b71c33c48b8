//! Small machines used by tests, benchmarks and the command line demos.

use crate::machine::{Machine, Rule};

/// NFA for `ab* ∪ (ab)*b*`.
pub fn ab_u_abb() -> Machine {
    Machine::nfa(
        &["S", "A", "B", "C", "D", "E"],
        &["a", "b"],
        "S",
        &["C", "E"],
        vec![
            Rule::nfa("S", "EMP", "A"),
            Rule::nfa("S", "EMP", "D"),
            Rule::nfa("A", "a", "B"),
            Rule::nfa("A", "EMP", "C"),
            Rule::nfa("B", "b", "A"),
            Rule::nfa("C", "b", "C"),
            Rule::nfa("D", "a", "E"),
            Rule::nfa("E", "b", "E"),
        ],
    )
}

/// PDA accepting words with equally many a's and b's.
pub fn equal_ab() -> Machine {
    Machine::pda(
        &["S"],
        &["a", "b"],
        &["a", "b"],
        "S",
        &["S"],
        vec![
            Rule::pda("S", "a", &[], "S", &["b"]),
            Rule::pda("S", "a", &["a"], "S", &[]),
            Rule::pda("S", "b", &["b"], "S", &[]),
            Rule::pda("S", "b", &[], "S", &["a"]),
        ],
    )
}

/// One state, pushes `a` forever on ε and never accepts.
pub fn growing_stack() -> Machine {
    Machine::pda(
        &["S"],
        &["a"],
        &["a"],
        "S",
        &[],
        vec![Rule::pda("S", "EMP", &[], "S", &["a"])],
    )
}

/// `a^i b^j` with `i <= j <= 2i`, with the popping rule reading nothing.
/// Accepts `(a)` through two different computations.
pub fn buggy_ab_2a() -> Machine {
    ab_2a_with(Rule::pda("H", "EMP", &["b"], "H", &[]))
}

/// `a^i b^j` with `i <= j <= 2i`.
pub fn ab_2a() -> Machine {
    ab_2a_with(Rule::pda("H", "b", &["b"], "H", &[]))
}

pub const AB_2A_H_INV: &str = "matches(ci, a* b*) and matches(stack, b*) \
and count(ci, a) <= count(ci, b) + len(stack) \
and count(ci, b) + len(stack) <= 2 * count(ci, a)";

fn ab_2a_with(pop_rule: Rule) -> Machine {
    Machine::pda(
        &["S", "H"],
        &["a", "b"],
        &["a", "b"],
        "S",
        &["H"],
        vec![
            Rule::pda("S", "a", &[], "S", &["b"]),
            Rule::pda("S", "a", &[], "S", &["b", "b"]),
            Rule::pda("S", "EMP", &[], "H", &[]),
            pop_rule,
        ],
    )
    .with_invariant("H", AB_2A_H_INV)
}
