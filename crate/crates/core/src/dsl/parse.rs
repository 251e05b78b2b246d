use super::{Expr, Index, Leg, Stmt};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Minus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Star,
    Hash,
    EqEq,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        let mut push = |tok| out.push(Spanned { tok, line: l0, column: c0 });
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '*' => Some(Tok::Star),
            '#' => Some(Tok::Hash),
            '-' => Some(Tok::Minus),
            _ => None,
        };
        if let Some(t) = single {
            push(t);
            i += 1;
            column += 1;
            continue;
        }
        if c == '=' {
            if chars.get(i + 1) == Some(&'=') {
                push(Tok::EqEq);
                i += 2;
                column += 2;
                continue;
            }
            return Err(Error::Parse {
                line,
                column,
                reason: "expected '=='".into(),
            });
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if chars.get(i) == Some(&'/') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            push(Tok::Ident(chars[start..i].iter().collect()));
        } else {
            return Err(Error::Parse {
                line,
                column,
                reason: format!("unexpected character {c:?}"),
            });
        }
        column += i - start;
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn error(&self, reason: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        Error::Parse {
            line: t.line,
            column: t.column,
            reason: reason.into(),
        }
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn int(&mut self) -> Result<usize> {
        match self.peek().clone() {
            Tok::Num(s) if !s.contains('/') => {
                self.next();
                s.parse().map_err(|_| self.error("integer too large"))
            }
            _ => Err(self.error("expected an integer")),
        }
    }

    /// `[i, j, …]`
    fn int_list(&mut self) -> Result<Vec<usize>> {
        self.expect(Tok::LBracket, "'['")?;
        let mut out = vec![self.int()?];
        loop {
            match self.next() {
                Tok::Comma => out.push(self.int()?),
                Tok::RBracket => return Ok(out),
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected ',' or ']'"));
                }
            }
        }
    }

    fn stmt(&mut self) -> Result<Stmt> {
        let lhs = self.term()?;
        let rhs = if *self.peek() == Tok::EqEq {
            self.next();
            Some(self.term()?)
        } else {
            None
        };
        if *self.peek() != Tok::End {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(Stmt { lhs, rhs })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.next();
                    acc = Expr::Prod(Box::new(acc), Box::new(self.factor()?));
                }
                Tok::Hash => {
                    self.next();
                    acc = Expr::Tensor(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn paren_term(&mut self) -> Result<Expr> {
        self.expect(Tok::LParen, "'('")?;
        let e = self.term()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Num(s) => {
                self.next();
                Ok(Expr::Scalar(s))
            }
            Tok::Minus => {
                self.next();
                match self.next() {
                    Tok::Num(s) => Ok(Expr::Scalar(format!("-{s}"))),
                    _ => {
                        self.pos -= 1;
                        Err(self.error("expected a number after '-'"))
                    }
                }
            }
            Tok::LParen => self.paren_term(),
            Tok::Ident(name) => {
                let call = *self.peek2() == Tok::LParen;
                let bracket = *self.peek2() == Tok::LBracket;
                self.next();
                match name.as_str() {
                    "inv" if call => Ok(Expr::Inv(Box::new(self.paren_term()?))),
                    "mul" if call => Ok(Expr::Mul(Vec::new(), Box::new(self.paren_term()?))),
                    "mul" if bracket => {
                        let groups = self.int_list()?;
                        Ok(Expr::Mul(groups, Box::new(self.paren_term()?)))
                    }
                    "perm" if bracket => {
                        let p = self.int_list()?;
                        Ok(Expr::Perm(p, Box::new(self.paren_term()?)))
                    }
                    "basis" if call => {
                        self.next();
                        let idx = match self.peek().clone() {
                            Tok::Ident(v) => {
                                self.next();
                                Index::Var(v)
                            }
                            _ => Index::Lit(self.int()?),
                        };
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Expr::Basis(idx))
                    }
                    "flip" if call => {
                        self.next();
                        let e = self.term()?;
                        self.expect(Tok::Comma, "','")?;
                        let i = self.int()?;
                        self.expect(Tok::Comma, "','")?;
                        let j = self.int()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Expr::Flip(Box::new(e), i, j))
                    }
                    "map" if bracket => {
                        self.next();
                        let mut legs = Vec::new();
                        loop {
                            match self.peek().clone() {
                                Tok::Ident(l) => {
                                    let leg = Leg::from_name(&l).ok_or_else(|| self.error(format!("unknown leg map {l:?}")))?;
                                    legs.push(leg);
                                    self.next();
                                }
                                _ => return Err(self.error("expected a leg map")),
                            }
                            match self.next() {
                                Tok::Comma => continue,
                                Tok::RBracket => break,
                                _ => {
                                    self.pos -= 1;
                                    return Err(self.error("expected ',' or ']'"));
                                }
                            }
                        }
                        Ok(Expr::Map(legs, Box::new(self.paren_term()?)))
                    }
                    _ => Ok(Expr::Name(name)),
                }
            }
            Tok::End => Err(self.error("unexpected end of input")),
            other => Err(self.error(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a statement: a term, optionally `== term`.
pub fn parse(src: &str) -> Result<Stmt> {
    let toks = lex(src)?;
    Parser { toks, pos: 0 }.stmt()
}

/// Parses a single term.
pub fn parse_term(src: &str) -> Result<Expr> {
    let s = parse(src)?;
    match s.rhs {
        None => Ok(s.lhs),
        Some(_) => Err(Error::Parse {
            line: 1,
            column: 1,
            reason: "expected a term, found an equation".into(),
        }),
    }
}
