use super::{InvariantError, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Run of `[A-Za-z0-9_]`. Keywords, numbers and symbols are all words;
    /// the parser decides by position.
    Word(String),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bar,
    Star,
    Plus,
    Minus,
    PlusPlus,
    Cmp(&'static str),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("'{w}'"),
            Tok::Str(_) => "string literal".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Bar => "'|'".into(),
            Tok::Star => "'*'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::PlusPlus => "'++'".into(),
            Tok::Cmp(op) => format!("'{op}'"),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub(crate) fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokenizes `src`. Positions are offset by `base` so string literals can be
/// re-lexed in place.
pub(crate) fn lex(src: &str, base: Pos) -> Result<Vec<(Tok, Pos)>, InvariantError> {
    let mut out = Vec::new();
    let mut pos = base;
    let mut chars = src.chars().peekable();

    while let Some(&c) = chars.peek() {
        let here = pos;
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                pos.line += 1;
                pos.column = 1;
            } else {
                pos.column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
            continue;
        }
        if is_word_char(c) {
            let mut w = String::new();
            while chars.peek().is_some_and(|&c| is_word_char(c)) {
                w.push(bump(&mut chars));
            }
            out.push((Tok::Word(w), here));
            continue;
        }
        bump(&mut chars);
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '|' => Tok::Bar,
            '*' => Tok::Star,
            '-' => Tok::Minus,
            '+' => {
                if chars.peek() == Some(&'+') {
                    bump(&mut chars);
                    Tok::PlusPlus
                } else {
                    Tok::Plus
                }
            }
            '=' | '!' | '<' | '>' => {
                let eq = chars.peek() == Some(&'=');
                if eq {
                    bump(&mut chars);
                }
                match (c, eq) {
                    ('=', true) => Tok::Cmp("=="),
                    ('!', true) => Tok::Cmp("!="),
                    ('<', true) => Tok::Cmp("<="),
                    ('>', true) => Tok::Cmp(">="),
                    ('<', false) => Tok::Cmp("<"),
                    ('>', false) => Tok::Cmp(">"),
                    _ => {
                        return Err(InvariantError::syntax(
                            here,
                            format!("unexpected character '{c}'"),
                        ))
                    }
                }
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match chars.peek() {
                        None => {
                            return Err(InvariantError::syntax(here, "unterminated string"));
                        }
                        Some('"') => {
                            bump(&mut chars);
                            break;
                        }
                        Some(_) => s.push(bump(&mut chars)),
                    }
                }
                Tok::Str(s)
            }
            other => {
                return Err(InvariantError::syntax(
                    here,
                    format!("unexpected character '{other}'"),
                ))
            }
        };
        out.push((tok, here));
    }
    out.push((Tok::Eof, pos));
    Ok(out)
}
