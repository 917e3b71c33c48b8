//! State invariants as a small predicate language.
//!
//! A program is a boolean expression over the consumed input `ci` and, for
//! pushdown automata, the current `stack` (top first):
//!
//! ```text
//! bool    := bool "or" bool | bool "and" bool | "not" bool | "(" bool ")"
//!          | int CMP int | "matches(" word "," pattern ")" | "true" | "false"
//! int     := NUMBER | "len(" word ")" | "count(" word "," SYMBOL ")"
//!          | int ("+" | "-" | "*") int | "(" int ")"
//! word    := "ci" | "stack" | word "++" word | "[" SYMBOL* "]"
//! pattern := juxtaposition, "|", "*", parentheses and "_" (empty word)
//!            over symbols; optionally written inside double quotes
//! ```
//!
//! `matches` is anchored: it tests membership of the whole word. Symbols in
//! a pattern are whitespace separated, so `ab*` is the symbol `ab` starred.
//! `#` starts a comment that runs to the end of the line.
//!
//! ```
//! use ndviz_core::invariant::InvariantProgram;
//! use ndviz_core::machine::{word, MachineKind};
//!
//! let p = InvariantProgram::parse("count(ci ++ stack, a) == count(ci ++ stack, b)", MachineKind::Pda)
//!     .unwrap();
//! assert!(p.eval(&word("a a b"), Some(&word("b"))));
//! ```

mod ast;
mod eval;
mod lexer;
mod parser;
mod pattern;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use ast::{ArithOp, CmpOp, Expr, Type};
pub use pattern::{CompiledPattern, Pattern};

use crate::machine::{Machine, MachineKind, StateName};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
}

impl Pos {
    pub const START: Pos = Pos { line: 1, column: 1 };
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Type,
    StackInNfa,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {}{message}", match kind {
    ErrorKind::Syntax => "syntax error: ",
    ErrorKind::Type => "type error: ",
    ErrorKind::StackInNfa => "",
})]
pub struct InvariantError {
    pub kind: ErrorKind,
    pub pos: Pos,
    pub message: String,
}

impl InvariantError {
    pub(crate) fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        InvariantError {
            kind: ErrorKind::Syntax,
            pos,
            message: message.into(),
        }
    }

    pub(crate) fn ty(pos: Pos, message: impl Into<String>) -> Self {
        InvariantError {
            kind: ErrorKind::Type,
            pos,
            message: message.into(),
        }
    }

    pub(crate) fn stack_in_nfa(pos: Pos) -> Self {
        InvariantError {
            kind: ErrorKind::StackInNfa,
            pos,
            message: "'stack' is only available in pda invariants".into(),
        }
    }
}

/// A parsed, type-checked invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantProgram {
    source: String,
    kind: MachineKind,
    expr: Expr,
}

impl InvariantProgram {
    pub fn parse(source: &str, kind: MachineKind) -> Result<Self, InvariantError> {
        let expr = parser::parse(source, kind)?;
        Ok(InvariantProgram {
            source: source.to_string(),
            kind,
            expr,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn kind(&self) -> MachineKind {
        self.kind
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Canonical source text; reparses to the same tree.
    pub fn render(&self) -> String {
        self.expr.to_string()
    }
}

/// Parsed invariants for a machine, keyed by state.
#[derive(Debug, Clone, Default)]
pub struct InvariantSet {
    programs: BTreeMap<StateName, InvariantProgram>,
}

impl InvariantSet {
    /// Parses every invariant attached to `machine`. The first failure is
    /// returned together with its state.
    pub fn from_machine(machine: &Machine) -> Result<Self, (StateName, InvariantError)> {
        let mut programs = BTreeMap::new();
        for (state, src) in machine.invariants() {
            let p = InvariantProgram::parse(src, machine.kind()).map_err(|e| (state.clone(), e))?;
            programs.insert(state.clone(), p);
        }
        Ok(InvariantSet { programs })
    }

    pub fn get(&self, state: &StateName) -> Option<&InvariantProgram> {
        self.programs.get(state)
    }

    pub fn is_empty(&self) -> bool {
        self.programs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StateName, &InvariantProgram)> {
        self.programs.iter()
    }
}

#[cfg(test)]
mod tests;
