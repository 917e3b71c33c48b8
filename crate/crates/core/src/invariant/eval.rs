use std::borrow::Cow;

use super::ast::{ArithOp, CmpOp, Expr};
use super::InvariantProgram;
use crate::machine::Symbol;

struct Env<'a> {
    ci: &'a [Symbol],
    stack: &'a [Symbol],
}

impl InvariantProgram {
    /// Evaluates the predicate. `stack` is ignored by NFA programs and
    /// treated as empty when a PDA program is given `None`.
    pub fn eval(&self, ci: &[Symbol], stack: Option<&[Symbol]>) -> bool {
        let env = Env {
            ci,
            stack: stack.unwrap_or(&[]),
        };
        eval_bool(&self.expr, &env)
    }
}

fn eval_bool(e: &Expr, env: &Env<'_>) -> bool {
    match e {
        Expr::Bool(b) => *b,
        Expr::Not(x) => !eval_bool(x, env),
        Expr::And(l, r) => eval_bool(l, env) && eval_bool(r, env),
        Expr::Or(l, r) => eval_bool(l, env) || eval_bool(r, env),
        Expr::Cmp(op, l, r) => {
            let (l, r) = (eval_int(l, env), eval_int(r, env));
            match op {
                CmpOp::Eq => l == r,
                CmpOp::Ne => l != r,
                CmpOp::Lt => l < r,
                CmpOp::Le => l <= r,
                CmpOp::Gt => l > r,
                CmpOp::Ge => l >= r,
            }
        }
        Expr::Matches(w, p) => p.matches(&eval_word(w, env)),
        _ => unreachable!("ill-typed boolean node {e:?}"),
    }
}

fn eval_int(e: &Expr, env: &Env<'_>) -> i64 {
    match e {
        Expr::Num(n) => *n,
        Expr::Len(w) => eval_word(w, env).len() as i64,
        Expr::Count(w, s) => eval_word(w, env).iter().filter(|x| *x == s).count() as i64,
        Expr::Arith(op, l, r) => {
            let (l, r) = (eval_int(l, env), eval_int(r, env));
            match op {
                ArithOp::Add => l.saturating_add(r),
                ArithOp::Sub => l.saturating_sub(r),
                ArithOp::Mul => l.saturating_mul(r),
            }
        }
        _ => unreachable!("ill-typed int node {e:?}"),
    }
}

fn eval_word<'a>(e: &'a Expr, env: &Env<'a>) -> Cow<'a, [Symbol]> {
    match e {
        Expr::Ci => Cow::Borrowed(env.ci),
        Expr::Stack => Cow::Borrowed(env.stack),
        Expr::Word(syms) => Cow::Borrowed(syms),
        Expr::Concat(l, r) => {
            let mut out = eval_word(l, env).into_owned();
            out.extend_from_slice(&eval_word(r, env));
            Cow::Owned(out)
        }
        _ => unreachable!("ill-typed word node {e:?}"),
    }
}
