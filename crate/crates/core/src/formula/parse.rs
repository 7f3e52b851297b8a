//! Recursive-descent parser.
//!
//! ```text
//! formula := impl
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := sum ("&" sum)*
//! sum     := prod ("+" prod)*
//! prod    := unary ("*" unary)*
//! unary   := "!" unary | atom
//! atom    := VAR | INT "." unary | "(" formula ")"
//! VAR     := "X" positive-integer
//! ```

use std::sync::Arc;

use super::Formula;
use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Bang,
    Star,
    Plus,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    Dot,
    Var(usize),
    Int(usize),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Bang => "`!`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Var(i) => format!("`X{i}`"),
            Tok::Int(k) => format!("`{k}`"),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let single = match c {
            '!' => Some(Tok::Bang),
            '*' => Some(Tok::Star),
            '+' => Some(Tok::Plus),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Lexed { tok, line: l0, column: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' {
            if chars.get(i + 1) == Some(&'>') {
                out.push(Lexed { tok: Tok::Arrow, line: l0, column: c0 });
                i += 2;
                col += 2;
                continue;
            }
            return Err(err(l0, c0, "expected `->`"));
        }
        let digits = |start: usize| {
            let mut j = start;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            j
        };
        if c == 'X' {
            let end = digits(i + 1);
            if end == i + 1 {
                return Err(err(l0, c0, "expected a variable index after `X`"));
            }
            let s: String = chars[i + 1..end].iter().collect();
            let idx: usize = s
                .parse()
                .map_err(|_| err(l0, c0, format!("variable index `{s}` is too large")))?;
            if idx == 0 {
                return Err(err(l0, c0, "variable indices start at 1 (found `X0`)"));
            }
            out.push(Lexed { tok: Tok::Var(idx), line: l0, column: c0 });
            col += end - i;
            i = end;
            continue;
        }
        if c.is_ascii_digit() {
            let end = digits(i);
            let s: String = chars[i..end].iter().collect();
            let k: usize = s
                .parse()
                .map_err(|_| err(l0, c0, format!("multiplier `{s}` is too large")))?;
            out.push(Lexed { tok: Tok::Int(k), line: l0, column: c0 });
            col += end - i;
            i = end;
            continue;
        }
        return Err(err(l0, c0, format!("unexpected character `{c}`")));
    }
    out.push(Lexed { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> &Lexed {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let t = &self.toks[self.pos];
        err(t.line, t.column, format!("expected {wanted}, found {}", t.tok.describe()))
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.implication()
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.binary_level(0)?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    /// Left-associative levels `|`, `&`, `+`, `*` (index 0..4).
    fn binary_level(&mut self, level: usize) -> Result<Formula, ParseError> {
        const OPS: [Tok; 4] = [Tok::Bar, Tok::Amp, Tok::Plus, Tok::Star];
        if level == OPS.len() {
            return self.unary();
        }
        let mut acc = self.binary_level(level + 1)?;
        while *self.peek() == OPS[level] {
            self.bump();
            let rhs = self.binary_level(level + 1)?;
            acc = match level {
                0 => Formula::max(acc, rhs),
                1 => Formula::min(acc, rhs),
                2 => Formula::oplus(acc, rhs),
                _ => Formula::otimes(acc, rhs),
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Formula::neg(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Var(i) => {
                self.bump();
                Ok(Formula::Var(i))
            }
            Tok::Int(k) => {
                let (line, column) = (self.toks[self.pos].line, self.toks[self.pos].column);
                self.bump();
                if k == 0 {
                    return Err(err(line, column, "multiplier must be a positive integer"));
                }
                if *self.peek() != Tok::Dot {
                    return Err(self.unexpected("`.` after multiplier"));
                }
                self.bump();
                let operand = Arc::new(self.unary()?);
                Ok(Formula::multiple(k, operand))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a variable, multiplier or `(`")),
        }
    }
}

/// Parses a formula; the whole input must be consumed.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Formula {
        Formula::var(i)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(parse("!(X1 * X1)").unwrap(), Formula::neg(Formula::otimes(x(1), x(1))));
        assert_eq!(
            parse("X1 -> X2 -> X3").unwrap(),
            Formula::implies(x(1), Formula::implies(x(2), x(3)))
        );
        assert_eq!(
            parse("X1 + X1 & X2").unwrap(),
            Formula::min(Formula::oplus(x(1), x(1)), x(2))
        );
    }

    #[test]
    fn precedence_ladder() {
        // ! > * > + > & > | > ->
        let f = parse("!X1 * X2 + X3 & X4 | X5 -> X6").unwrap();
        let expected = Formula::implies(
            Formula::max(
                Formula::min(Formula::oplus(Formula::otimes(Formula::neg(x(1)), x(2)), x(3)), x(4)),
                x(5),
            ),
            x(6),
        );
        assert_eq!(f, expected);
        assert_eq!(parse("X1 * X2 * X3").unwrap(), Formula::otimes(Formula::otimes(x(1), x(2)), x(3)));
    }

    #[test]
    fn multiplier_binds_to_unary() {
        assert_eq!(parse("2.!X1").unwrap(), Formula::oplus(Formula::neg(x(1)), Formula::neg(x(1))));
        assert_eq!(parse("1.X3").unwrap(), x(3));
        assert_eq!(
            parse("2.X1 * X2").unwrap(),
            Formula::otimes(Formula::oplus(x(1), x(1)), x(2))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("X1 ->").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        let e = parse("X0").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse("X1 +\n  X2 )").unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
        assert!(parse("0.X1").is_err());
        assert!(parse("2 X1").is_err());
        assert!(parse("X1 - X2").is_err());
        assert!(parse("").is_err());
        assert!(parse("(X1").is_err());
        assert!(parse("Y1").is_err());
    }
}
