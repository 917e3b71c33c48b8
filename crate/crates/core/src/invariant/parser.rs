use super::ast::{ArithOp, CmpOp, Expr, Type};
use super::lexer::{lex, Tok};
use super::pattern::{CompiledPattern, Pattern};
use super::{InvariantError, Pos};
use crate::machine::{MachineKind, Symbol};

pub(crate) fn parse(src: &str, kind: MachineKind) -> Result<Expr, InvariantError> {
    let tokens = lex(src, Pos::START)?;
    let mut p = Parser {
        tokens,
        at: 0,
        kind,
    };
    let (expr, ty, pos) = p.expr()?;
    p.expect_eof()?;
    if ty != Type::Bool {
        return Err(InvariantError::ty(
            pos,
            format!("invariant must be a boolean expression, found {ty}"),
        ));
    }
    Ok(expr)
}

type Typed = (Expr, Type, Pos);

struct Parser {
    tokens: Vec<(Tok, Pos)>,
    at: usize,
    kind: MachineKind,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].0
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.tokens[self.at].clone();
        if t.0 != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn peek_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, InvariantError> {
        let (t, pos) = self.next();
        if t == tok {
            Ok(pos)
        } else {
            Err(InvariantError::syntax(
                pos,
                format!("expected {}, found {}", tok.describe(), t.describe()),
            ))
        }
    }

    fn expect_eof(&mut self) -> Result<(), InvariantError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => Err(InvariantError::syntax(
                self.pos(),
                format!("unexpected {}", t.describe()),
            )),
        }
    }

    fn want(ty: Type, got: &Typed, what: &str) -> Result<(), InvariantError> {
        if got.1 == ty {
            Ok(())
        } else {
            Err(InvariantError::ty(
                got.2,
                format!("{what} expects {ty}, found {}", got.1),
            ))
        }
    }

    fn expr(&mut self) -> Result<Typed, InvariantError> {
        self.or()
    }

    fn or(&mut self) -> Result<Typed, InvariantError> {
        let mut lhs = self.and()?;
        while self.peek_word("or") {
            self.next();
            let rhs = self.and()?;
            Self::want(Type::Bool, &lhs, "'or'")?;
            Self::want(Type::Bool, &rhs, "'or'")?;
            lhs = (Expr::Or(Box::new(lhs.0), Box::new(rhs.0)), Type::Bool, lhs.2);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Typed, InvariantError> {
        let mut lhs = self.not()?;
        while self.peek_word("and") {
            self.next();
            let rhs = self.not()?;
            Self::want(Type::Bool, &lhs, "'and'")?;
            Self::want(Type::Bool, &rhs, "'and'")?;
            lhs = (Expr::And(Box::new(lhs.0), Box::new(rhs.0)), Type::Bool, lhs.2);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Typed, InvariantError> {
        if self.peek_word("not") {
            let (_, pos) = self.next();
            let inner = self.not()?;
            Self::want(Type::Bool, &inner, "'not'")?;
            return Ok((Expr::Not(Box::new(inner.0)), Type::Bool, pos));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<Typed, InvariantError> {
        let lhs = self.additive()?;
        if let Tok::Cmp(op) = *self.peek() {
            let (_, op_pos) = self.next();
            let rhs = self.additive()?;
            if lhs.1 != Type::Int || rhs.1 != Type::Int {
                return Err(InvariantError::ty(
                    op_pos,
                    format!("cannot compare {} with {}", lhs.1, rhs.1),
                ));
            }
            let e = Expr::Cmp(CmpOp::from_token(op), Box::new(lhs.0), Box::new(rhs.0));
            return Ok((e, Type::Bool, lhs.2));
        }
        Ok(lhs)
    }

    fn additive(&mut self) -> Result<Typed, InvariantError> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => Some(ArithOp::Add),
                Tok::Minus => Some(ArithOp::Sub),
                Tok::PlusPlus => None,
                _ => break,
            };
            self.next();
            let rhs = self.multiplicative()?;
            lhs = match op {
                Some(op) => {
                    Self::want(Type::Int, &lhs, op.as_str())?;
                    Self::want(Type::Int, &rhs, op.as_str())?;
                    (Expr::Arith(op, Box::new(lhs.0), Box::new(rhs.0)), Type::Int, lhs.2)
                }
                None => {
                    Self::want(Type::Word, &lhs, "'++'")?;
                    Self::want(Type::Word, &rhs, "'++'")?;
                    (Expr::Concat(Box::new(lhs.0), Box::new(rhs.0)), Type::Word, lhs.2)
                }
            };
        }
        Ok(lhs)
    }

    fn multiplicative(&mut self) -> Result<Typed, InvariantError> {
        let mut lhs = self.primary()?;
        while *self.peek() == Tok::Star {
            self.next();
            let rhs = self.primary()?;
            Self::want(Type::Int, &lhs, "'*'")?;
            Self::want(Type::Int, &rhs, "'*'")?;
            lhs = (
                Expr::Arith(ArithOp::Mul, Box::new(lhs.0), Box::new(rhs.0)),
                Type::Int,
                lhs.2,
            );
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Typed, InvariantError> {
        let (tok, pos) = self.next();
        match tok {
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok((inner.0, inner.1, pos))
            }
            Tok::LBracket => {
                let mut syms = Vec::new();
                loop {
                    match self.next() {
                        (Tok::RBracket, _) => break,
                        (Tok::Comma, _) if !syms.is_empty() => {}
                        (Tok::Word(w), p) => syms.push(symbol(w, p)?),
                        (t, p) => {
                            return Err(InvariantError::syntax(
                                p,
                                format!("expected a symbol or ']', found {}", t.describe()),
                            ))
                        }
                    }
                }
                Ok((Expr::Word(syms), Type::Word, pos))
            }
            Tok::Word(w) => self.word_form(w, pos),
            t => Err(InvariantError::syntax(
                pos,
                format!("expected an expression, found {}", t.describe()),
            )),
        }
    }

    fn word_form(&mut self, w: String, pos: Pos) -> Result<Typed, InvariantError> {
        match w.as_str() {
            "true" => Ok((Expr::Bool(true), Type::Bool, pos)),
            "false" => Ok((Expr::Bool(false), Type::Bool, pos)),
            "ci" => Ok((Expr::Ci, Type::Word, pos)),
            "stack" => {
                if self.kind == MachineKind::Nfa {
                    return Err(InvariantError::stack_in_nfa(pos));
                }
                Ok((Expr::Stack, Type::Word, pos))
            }
            "len" => {
                self.expect(Tok::LParen)?;
                let arg = self.expr()?;
                Self::want(Type::Word, &arg, "len")?;
                self.expect(Tok::RParen)?;
                Ok((Expr::Len(Box::new(arg.0)), Type::Int, pos))
            }
            "count" => {
                self.expect(Tok::LParen)?;
                let arg = self.expr()?;
                Self::want(Type::Word, &arg, "count")?;
                self.expect(Tok::Comma)?;
                let sym = match self.next() {
                    (Tok::Word(s), p) => symbol(s, p)?,
                    (t, p) => {
                        return Err(InvariantError::syntax(
                            p,
                            format!("expected a symbol, found {}", t.describe()),
                        ))
                    }
                };
                self.expect(Tok::RParen)?;
                Ok((Expr::Count(Box::new(arg.0), sym), Type::Int, pos))
            }
            "matches" => {
                self.expect(Tok::LParen)?;
                let arg = self.expr()?;
                Self::want(Type::Word, &arg, "matches")?;
                self.expect(Tok::Comma)?;
                let pattern = if let Tok::Str(s) = self.peek().clone() {
                    let (_, str_pos) = self.next();
                    let base = Pos {
                        line: str_pos.line,
                        column: str_pos.column + 1,
                    };
                    let mut sub = Parser {
                        tokens: lex(&s, base)?,
                        at: 0,
                        kind: self.kind,
                    };
                    let p = sub.pattern()?;
                    sub.expect_eof()?;
                    p
                } else {
                    self.pattern()?
                };
                self.expect(Tok::RParen)?;
                Ok((
                    Expr::Matches(Box::new(arg.0), CompiledPattern::new(pattern)),
                    Type::Bool,
                    pos,
                ))
            }
            "and" | "or" | "not" => Err(InvariantError::syntax(
                pos,
                format!("expected an expression, found '{w}'"),
            )),
            _ if w.bytes().all(|b| b.is_ascii_digit()) => {
                let n = w.parse::<i64>().map_err(|_| {
                    InvariantError::syntax(pos, format!("number '{w}' out of range"))
                })?;
                Ok((Expr::Num(n), Type::Int, pos))
            }
            _ => Err(InvariantError::syntax(
                pos,
                format!("unknown name '{w}' (symbols belong in [...] or count/matches)"),
            )),
        }
    }

    fn pattern(&mut self) -> Result<Pattern, InvariantError> {
        let mut alts = vec![self.pattern_concat()?];
        while *self.peek() == Tok::Bar {
            self.next();
            alts.push(self.pattern_concat()?);
        }
        Ok(if alts.len() == 1 {
            alts.pop().unwrap()
        } else {
            Pattern::Alt(alts)
        })
    }

    fn pattern_concat(&mut self) -> Result<Pattern, InvariantError> {
        let mut items = Vec::new();
        while matches!(self.peek(), Tok::Word(_) | Tok::LParen) {
            let mut atom = match self.next() {
                (Tok::LParen, _) => {
                    let inner = self.pattern()?;
                    self.expect(Tok::RParen)?;
                    inner
                }
                (Tok::Word(w), _) if w == "_" => Pattern::Empty,
                (Tok::Word(w), p) => Pattern::Sym(symbol(w, p)?),
                _ => unreachable!(),
            };
            while *self.peek() == Tok::Star {
                self.next();
                atom = Pattern::Star(Box::new(atom));
            }
            items.push(atom);
        }
        match items.len() {
            0 => Err(InvariantError::syntax(
                self.pos(),
                format!("expected a pattern, found {}", self.peek().describe()),
            )),
            1 => Ok(items.pop().unwrap()),
            _ => Ok(Pattern::Concat(items)),
        }
    }
}

fn symbol(w: String, pos: Pos) -> Result<Symbol, InvariantError> {
    if Symbol::is_valid_name(&w) {
        Ok(Symbol::new(w))
    } else {
        Err(InvariantError::syntax(pos, format!("'{w}' is not a valid symbol")))
    }
}
