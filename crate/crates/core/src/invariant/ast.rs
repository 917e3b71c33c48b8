use std::fmt;

use super::pattern::CompiledPattern;
use crate::machine::Symbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub(crate) fn from_token(s: &str) -> CmpOp {
        match s {
            "==" => CmpOp::Eq,
            "!=" => CmpOp::Ne,
            "<" => CmpOp::Lt,
            "<=" => CmpOp::Le,
            ">" => CmpOp::Gt,
            ">=" => CmpOp::Ge,
            _ => unreachable!("lexer only produces known comparison operators"),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl ArithOp {
    pub fn as_str(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
        }
    }
}

/// Invariant expression tree. Well-typed by construction when produced by
/// the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Bool(bool),
    Num(i64),
    Ci,
    Stack,
    Word(Vec<Symbol>),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    Concat(Box<Expr>, Box<Expr>),
    Len(Box<Expr>),
    Count(Box<Expr>, Symbol),
    Matches(Box<Expr>, CompiledPattern),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Type {
    Bool,
    Int,
    Word,
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Type::Bool => "boolean",
            Type::Int => "int",
            Type::Word => "word",
        })
    }
}

const OR: u8 = 1;
const AND: u8 = 2;
const NOT: u8 = 3;
const CMP: u8 = 4;
const ADD: u8 = 5;
const MUL: u8 = 6;
const ATOM: u8 = 7;

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(..) => OR,
            Expr::And(..) => AND,
            Expr::Not(_) => NOT,
            Expr::Cmp(..) => CMP,
            Expr::Arith(ArithOp::Mul, ..) => MUL,
            Expr::Arith(..) | Expr::Concat(..) => ADD,
            _ => ATOM,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Bool(b) => write!(f, "{b}"),
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Ci => f.write_str("ci"),
            Expr::Stack => f.write_str("stack"),
            Expr::Word(syms) => {
                f.write_str("[")?;
                for (i, s) in syms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str("]")
            }
            Expr::Not(e) => {
                f.write_str("not ")?;
                e.fmt_at(f, NOT)
            }
            Expr::And(l, r) => binary(f, l, "and", r, AND),
            Expr::Or(l, r) => binary(f, l, "or", r, OR),
            Expr::Cmp(op, l, r) => {
                l.fmt_at(f, CMP + 1)?;
                write!(f, " {} ", op.as_str())?;
                r.fmt_at(f, CMP + 1)
            }
            Expr::Arith(op, l, r) => binary(f, l, op.as_str(), r, self.precedence()),
            Expr::Concat(l, r) => binary(f, l, "++", r, ADD),
            Expr::Len(w) => {
                f.write_str("len(")?;
                w.fmt_at(f, 0)?;
                f.write_str(")")
            }
            Expr::Count(w, s) => {
                f.write_str("count(")?;
                w.fmt_at(f, 0)?;
                write!(f, ", {s})")
            }
            Expr::Matches(w, p) => {
                f.write_str("matches(")?;
                w.fmt_at(f, 0)?;
                write!(f, ", {})", p.pattern())
            }
        }
    }
}

/// Left-associative binary operator.
fn binary(f: &mut fmt::Formatter<'_>, l: &Expr, op: &str, r: &Expr, prec: u8) -> fmt::Result {
    l.fmt_at(f, prec)?;
    write!(f, " {op} ")?;
    r.fmt_at(f, prec + 1)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}
