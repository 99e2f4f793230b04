//! Text syntax for LTLf formulas.
//!
//! Precedence from tightest to loosest: prefix operators (`!`, `X`, `X[!]`,
//! `F`, `G`), `U`/`R` (right-associative), `&`, `^`, `|`, `->`
//! (right-associative), `<->`.

use std::fmt;

use super::formula::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    Next,
    StrongNext,
    Finally,
    Globally,
    Until,
    Release,
    And,
    Or,
    Xor,
    Implies,
    Iff,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::True => "`tt`".into(),
            Tok::False => "`ff`".into(),
            Tok::Not => "`!`".into(),
            Tok::Next => "`X`".into(),
            Tok::StrongNext => "`X[!]`".into(),
            Tok::Finally => "`F`".into(),
            Tok::Globally => "`G`".into(),
            Tok::Until => "`U`".into(),
            Tok::Release => "`R`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Xor => "`^`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn error(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut column = 1;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let rest = &chars[i..];
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let len = rest
                .iter()
                .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                .count();
            let word: String = rest[..len].iter().collect();
            match word.as_str() {
                "tt" | "true" => (Tok::True, len),
                "ff" | "false" => (Tok::False, len),
                "X" if rest[len..].starts_with(&['[', '!', ']']) => (Tok::StrongNext, len + 3),
                "X" => (Tok::Next, len),
                "F" => (Tok::Finally, len),
                "G" => (Tok::Globally, len),
                "U" => (Tok::Until, len),
                "R" => (Tok::Release, len),
                _ => (Tok::Ident(word), len),
            }
        } else if c.is_ascii_digit() {
            let len = rest.iter().take_while(|c| c.is_ascii_alphanumeric()).count();
            match len {
                1 if c == '1' => (Tok::True, 1),
                1 if c == '0' => (Tok::False, 1),
                _ => {
                    let word: String = rest[..len].iter().collect();
                    return Err(error(pos, format!("invalid literal `{word}`")));
                }
            }
        } else if rest.starts_with(&['<', '-', '>']) {
            (Tok::Iff, 3)
        } else if rest.starts_with(&['-', '>']) {
            (Tok::Implies, 2)
        } else {
            let tok = match c {
                '!' => Tok::Not,
                '&' => Tok::And,
                '|' => Tok::Or,
                '^' => Tok::Xor,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(error(pos, format!("unknown operator `{c}`"))),
            };
            (tok, 1)
        };
        out.push((tok, pos));
        i += len;
        column += len;
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    depth: usize,
}

/// Nesting limit guarding the recursive descent against stack exhaustion.
const MAX_DEPTH: usize = 500;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        tok
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(error(self.pos(), "formula nested too deeply"));
        }
        Ok(())
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            self.enter()?;
            let rhs = self.implies()?;
            self.depth -= 1;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.xor()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.xor()?;
            lhs = Formula::or2(lhs, rhs);
        }
        Ok(lhs)
    }

    fn xor(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Xor {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::xor(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.binary_temporal()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.binary_temporal()?;
            lhs = Formula::and2(lhs, rhs);
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        let op = self.peek().clone();
        if op == Tok::Until || op == Tok::Release {
            self.bump();
            self.enter()?;
            let rhs = self.binary_temporal()?;
            self.depth -= 1;
            return Ok(if op == Tok::Until {
                Formula::until(lhs, rhs)
            } else {
                Formula::release(lhs, rhs)
            });
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        let tok = self.bump();
        let build: fn(Formula) -> Formula = match tok {
            Tok::Not => Formula::not,
            Tok::Next => Formula::next,
            Tok::StrongNext => Formula::strong_next,
            Tok::Finally => Formula::finally,
            Tok::Globally => Formula::globally,
            Tok::True => return Ok(Formula::tt()),
            Tok::False => return Ok(Formula::ff()),
            Tok::Ident(name) => return Ok(Formula::var(&name)),
            Tok::LParen => {
                self.enter()?;
                let inner = self.iff()?;
                self.depth -= 1;
                let close = self.pos();
                return match self.bump() {
                    Tok::RParen => Ok(inner),
                    other => Err(error(close, format!("expected `)`, found {}", other.describe()))),
                };
            }
            other => {
                return Err(error(pos, format!("expected an operand, found {}", other.describe())))
            }
        };
        self.enter()?;
        let operand = self.unary()?;
        self.depth -= 1;
        Ok(build(operand))
    }
}

/// Parses a formula from its text syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        at: 0,
        depth: 0,
    };
    let f = parser.iff()?;
    match parser.peek() {
        Tok::End => Ok(f),
        other => Err(error(
            parser.pos(),
            format!("unexpected {} after formula", other.describe()),
        )),
    }
}
