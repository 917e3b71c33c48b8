//! Regular patterns over symbol tokens, compiled to a Thompson NFA.

use std::fmt;

use crate::machine::Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    /// `_`, the empty word.
    Empty,
    Sym(Symbol),
    Concat(Vec<Pattern>),
    Alt(Vec<Pattern>),
    Star(Box<Pattern>),
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Empty => f.write_str("_"),
            Pattern::Sym(s) => write!(f, "{s}"),
            Pattern::Alt(items) => {
                for (i, p) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str("|")?;
                    }
                    if matches!(p, Pattern::Alt(_)) {
                        write!(f, "({p})")?;
                    } else {
                        write!(f, "{p}")?;
                    }
                }
                Ok(())
            }
            Pattern::Concat(items) => {
                for (i, p) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    if matches!(p, Pattern::Alt(_) | Pattern::Concat(_)) {
                        write!(f, "({p})")?;
                    } else {
                        write!(f, "{p}")?;
                    }
                }
                Ok(())
            }
            Pattern::Star(inner) => {
                if matches!(**inner, Pattern::Alt(_) | Pattern::Concat(_)) {
                    write!(f, "({inner})*")
                } else {
                    write!(f, "{inner}*")
                }
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
struct NfaState {
    eps: Vec<usize>,
    on: Option<(Symbol, usize)>,
}

/// Thompson construction of a [`Pattern`]: one start, one accept state.
#[derive(Debug, Clone)]
pub struct CompiledPattern {
    pattern: Pattern,
    states: Vec<NfaState>,
    start: usize,
    accept: usize,
}

impl PartialEq for CompiledPattern {
    fn eq(&self, other: &Self) -> bool {
        self.pattern == other.pattern
    }
}

impl Eq for CompiledPattern {}

impl CompiledPattern {
    pub fn new(pattern: Pattern) -> Self {
        let mut states = Vec::new();
        let (start, accept) = build(&pattern, &mut states);
        CompiledPattern {
            pattern,
            states,
            start,
            accept,
        }
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    /// Whole-word membership.
    pub fn matches(&self, word: &[Symbol]) -> bool {
        let mut current = vec![false; self.states.len()];
        self.close(self.start, &mut current);
        for sym in word {
            let mut next = vec![false; self.states.len()];
            let mut any = false;
            for (i, on) in current.iter().enumerate() {
                if !*on {
                    continue;
                }
                if let Some((s, to)) = &self.states[i].on {
                    if s == sym {
                        self.close(*to, &mut next);
                        any = true;
                    }
                }
            }
            if !any {
                return false;
            }
            current = next;
        }
        current[self.accept]
    }

    fn close(&self, from: usize, set: &mut [bool]) {
        let mut stack = vec![from];
        while let Some(s) = stack.pop() {
            if set[s] {
                continue;
            }
            set[s] = true;
            stack.extend(self.states[s].eps.iter().copied());
        }
    }
}

fn fresh(states: &mut Vec<NfaState>) -> usize {
    states.push(NfaState::default());
    states.len() - 1
}

fn build(p: &Pattern, states: &mut Vec<NfaState>) -> (usize, usize) {
    match p {
        Pattern::Empty => {
            let s = fresh(states);
            let t = fresh(states);
            states[s].eps.push(t);
            (s, t)
        }
        Pattern::Sym(sym) => {
            let s = fresh(states);
            let t = fresh(states);
            states[s].on = Some((sym.clone(), t));
            (s, t)
        }
        Pattern::Concat(items) => {
            let s = fresh(states);
            let mut tail = s;
            for item in items {
                let (is, it) = build(item, states);
                states[tail].eps.push(is);
                tail = it;
            }
            (s, tail)
        }
        Pattern::Alt(items) => {
            let s = fresh(states);
            let t = fresh(states);
            for item in items {
                let (is, it) = build(item, states);
                states[s].eps.push(is);
                states[it].eps.push(t);
            }
            (s, t)
        }
        Pattern::Star(inner) => {
            let s = fresh(states);
            let t = fresh(states);
            let (is, it) = build(inner, states);
            states[s].eps.extend([is, t]);
            states[it].eps.extend([is, t]);
            (s, t)
        }
    }
}
