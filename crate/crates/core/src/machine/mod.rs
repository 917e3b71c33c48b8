//! Machine definitions: states, alphabets, transition rules.
//!
//! A [`Machine`] is either a nondeterministic finite automaton or a pushdown
//! automaton. Machines are plain data; call [`validate`] before handing one
//! to the engine.

mod dead_state;
mod file;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use dead_state::{add_dead_state, DEFAULT_DEAD_STATE};
pub use file::{MachineFile, MachineFileError, RuleFile};
pub use validate::{validate, ValidationReport, Violation};

/// Token that marks an empty read/pop/push in the FSM rule notation.
pub const EMP: &str = "EMP";

/// An element of the input or stack alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: impl Into<String>) -> Self {
        Symbol(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Symbol tokens are runs of ASCII alphanumerics and `_`, excluding the
    /// reserved names `EMP` and `_`.
    pub fn is_valid_name(name: &str) -> bool {
        !name.is_empty()
            && name != EMP
            && name != "_"
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateName(String);

impl StateName {
    pub fn new(name: impl Into<String>) -> Self {
        StateName(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for StateName {
    fn from(s: &str) -> Self {
        StateName(s.to_string())
    }
}

/// Parses a whitespace/comma separated list of symbols. `EMP` and the empty
/// string stand for the empty word.
pub fn word(text: &str) -> Vec<Symbol> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty() && *s != EMP)
        .map(Symbol::from)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MachineKind {
    #[serde(rename = "ndfa")]
    Nfa,
    #[serde(rename = "pda")]
    Pda,
}

impl MachineKind {
    pub fn has_stack(self) -> bool {
        self == MachineKind::Pda
    }
}

impl fmt::Display for MachineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineKind::Nfa => f.write_str("ndfa"),
            MachineKind::Pda => f.write_str("pda"),
        }
    }
}

/// `(src read dst)`; `read == None` is an ε-move.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NfaRule {
    pub src: StateName,
    pub read: Option<Symbol>,
    pub dst: StateName,
}

/// `((src read pop) (dst push))`. Both `pop` and `push` list the top of the
/// stack first. The rule pops before it pushes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PdaRule {
    pub src: StateName,
    pub read: Option<Symbol>,
    pub pop: Vec<Symbol>,
    pub dst: StateName,
    pub push: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Nfa(NfaRule),
    Pda(PdaRule),
}

impl Rule {
    pub fn nfa(src: &str, read: &str, dst: &str) -> Rule {
        Rule::Nfa(NfaRule {
            src: src.into(),
            read: read_symbol(read),
            dst: dst.into(),
        })
    }

    pub fn pda(src: &str, read: &str, pop: &[&str], dst: &str, push: &[&str]) -> Rule {
        Rule::Pda(PdaRule {
            src: src.into(),
            read: read_symbol(read),
            pop: pop.iter().map(|&s| Symbol::from(s)).collect(),
            dst: dst.into(),
            push: push.iter().map(|&s| Symbol::from(s)).collect(),
        })
    }

    pub fn src(&self) -> &StateName {
        match self {
            Rule::Nfa(r) => &r.src,
            Rule::Pda(r) => &r.src,
        }
    }

    pub fn dst(&self) -> &StateName {
        match self {
            Rule::Nfa(r) => &r.dst,
            Rule::Pda(r) => &r.dst,
        }
    }

    pub fn read(&self) -> Option<&Symbol> {
        match self {
            Rule::Nfa(r) => r.read.as_ref(),
            Rule::Pda(r) => r.read.as_ref(),
        }
    }

    pub fn kind(&self) -> MachineKind {
        match self {
            Rule::Nfa(_) => MachineKind::Nfa,
            Rule::Pda(_) => MachineKind::Pda,
        }
    }

    pub fn is_epsilon(&self) -> bool {
        self.read().is_none()
    }
}

fn read_symbol(s: &str) -> Option<Symbol> {
    if s.is_empty() || s == EMP || s == "ε" {
        None
    } else {
        Some(Symbol::from(s))
    }
}

fn fmt_seq(f: &mut fmt::Formatter<'_>, seq: &[Symbol]) -> fmt::Result {
    if seq.is_empty() {
        return f.write_str(EMP);
    }
    f.write_str("(")?;
    for (i, s) in seq.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{s}")?;
    }
    f.write_str(")")
}

/// Renders rules in the FSM list notation, e.g. `(S EMP A)` or
/// `((S a EMP) (S (b)))`.
impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let read = |r: Option<&Symbol>| r.map_or(EMP.to_string(), |s| s.to_string());
        match self {
            Rule::Nfa(r) => write!(f, "({} {} {})", r.src, read(r.read.as_ref()), r.dst),
            Rule::Pda(r) => {
                write!(f, "(({} {} ", r.src, read(r.read.as_ref()))?;
                fmt_seq(f, &r.pop)?;
                write!(f, ") ({} ", r.dst)?;
                fmt_seq(f, &r.push)?;
                f.write_str("))")
            }
        }
    }
}

/// An NFA or PDA. Immutable once built; the engine borrows it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    kind: MachineKind,
    states: Vec<StateName>,
    sigma: Vec<Symbol>,
    gamma: Vec<Symbol>,
    start: StateName,
    finals: Vec<StateName>,
    rules: Vec<Rule>,
    /// Rules at or past this index were added by dead-state augmentation.
    synthetic_from: usize,
    dead_state: Option<StateName>,
    invariants: BTreeMap<StateName, String>,
}

impl Machine {
    pub fn nfa(
        states: &[&str],
        sigma: &[&str],
        start: &str,
        finals: &[&str],
        rules: Vec<Rule>,
    ) -> Machine {
        Machine::new(MachineKind::Nfa, states, sigma, &[], start, finals, rules)
    }

    pub fn pda(
        states: &[&str],
        sigma: &[&str],
        gamma: &[&str],
        start: &str,
        finals: &[&str],
        rules: Vec<Rule>,
    ) -> Machine {
        Machine::new(MachineKind::Pda, states, sigma, gamma, start, finals, rules)
    }

    fn new(
        kind: MachineKind,
        states: &[&str],
        sigma: &[&str],
        gamma: &[&str],
        start: &str,
        finals: &[&str],
        rules: Vec<Rule>,
    ) -> Machine {
        Machine::from_parts(
            kind,
            states.iter().map(|&s| s.into()).collect(),
            sigma.iter().map(|&s| s.into()).collect(),
            gamma.iter().map(|&s| s.into()).collect(),
            start.into(),
            finals.iter().map(|&s| s.into()).collect(),
            rules,
        )
    }

    pub fn from_parts(
        kind: MachineKind,
        states: Vec<StateName>,
        sigma: Vec<Symbol>,
        gamma: Vec<Symbol>,
        start: StateName,
        finals: Vec<StateName>,
        rules: Vec<Rule>,
    ) -> Machine {
        let synthetic_from = rules.len();
        Machine {
            kind,
            states,
            sigma,
            gamma,
            start,
            finals,
            rules,
            synthetic_from,
            dead_state: None,
            invariants: BTreeMap::new(),
        }
    }

    /// Attaches an invariant source to `state`. Checked by [`validate`].
    pub fn with_invariant(mut self, state: &str, source: &str) -> Machine {
        self.invariants.insert(state.into(), source.to_string());
        self
    }

    pub fn with_invariants(mut self, invariants: BTreeMap<StateName, String>) -> Machine {
        self.invariants = invariants;
        self
    }

    pub fn without_invariants(mut self) -> Machine {
        self.invariants.clear();
        self
    }

    pub fn kind(&self) -> MachineKind {
        self.kind
    }

    pub fn states(&self) -> &[StateName] {
        &self.states
    }

    pub fn sigma(&self) -> &[Symbol] {
        &self.sigma
    }

    /// Stack alphabet; always empty for an NFA.
    pub fn gamma(&self) -> &[Symbol] {
        match self.kind {
            MachineKind::Nfa => &[],
            MachineKind::Pda => &self.gamma,
        }
    }

    pub fn start(&self) -> &StateName {
        &self.start
    }

    pub fn finals(&self) -> &[StateName] {
        &self.finals
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, index: usize) -> Option<&Rule> {
        self.rules.get(index)
    }

    pub fn invariants(&self) -> &BTreeMap<StateName, String> {
        &self.invariants
    }

    pub fn is_final(&self, state: &StateName) -> bool {
        self.finals.contains(state)
    }

    pub fn has_state(&self, state: &StateName) -> bool {
        self.states.contains(state)
    }

    /// True for rules appended by [`add_dead_state`].
    pub fn is_synthetic(&self, rule_index: usize) -> bool {
        rule_index >= self.synthetic_from && rule_index < self.rules.len()
    }

    /// Number of rules the machine was defined with, before augmentation.
    pub fn original_rule_count(&self) -> usize {
        self.synthetic_from
    }

    /// The state added by [`add_dead_state`], if any.
    pub fn dead_state(&self) -> Option<&StateName> {
        self.dead_state.as_ref()
    }

    pub fn is_augmented(&self) -> bool {
        self.dead_state.is_some()
    }

    pub fn state_index(&self, state: &StateName) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }
}
