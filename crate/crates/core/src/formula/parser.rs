use super::Formula;
use thiserror::Error;

/// Failure to read a formula, with the byte offset where it was noticed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at {pos}")]
    BadChar { pos: usize, found: char },
    #[error("expected {expected} at {pos}, found {found}")]
    Unexpected {
        pos: usize,
        expected: &'static str,
        found: String,
    },
    #[error("operator {op} is not associative; add parentheses at {pos}")]
    Associativity { pos: usize, op: &'static str },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::BadChar { pos, .. }
            | ParseError::Unexpected { pos, .. }
            | ParseError::Associativity { pos, .. } => *pos,
        }
    }
}

/// Style warnings that do not stop parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lint {
    /// `/\` and `\/` mixed in one chain without parentheses.
    MixedAndOr { pos: usize },
}

impl std::fmt::Display for Lint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Lint::MixedAndOr { pos } => write!(
                f,
                "warning: /\\ and \\/ mixed without parentheses at {pos}; grouping is left to right"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Bot,
    Ident(String),
    LParen,
    RParen,
    Not,
    Box,
    Dia,
    And,
    Or,
    Rhd,
    Imp,
    Iff,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Bot => "bot".into(),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Not => "'~'".into(),
            Tok::Box => "'[]'".into(),
            Tok::Dia => "'<>'".into(),
            Tok::And => "'/\\'".into(),
            Tok::Or => "'\\/'".into(),
            Tok::Rhd => "'|>'".into(),
            Tok::Imp => "'->'".into(),
            Tok::Iff => "'<->'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let symbols: [(&str, Tok); 9] = [
        ("<->", Tok::Iff),
        ("<>", Tok::Dia),
        ("[]", Tok::Box),
        ("/\\", Tok::And),
        ("\\/", Tok::Or),
        ("|>", Tok::Rhd),
        ("->", Tok::Imp),
        ("(", Tok::LParen),
        (")", Tok::RParen),
    ];
    'outer: while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'~' {
            out.push((i, Tok::Not));
            i += 1;
            continue;
        }
        for (sym, tok) in &symbols {
            if input[i..].starts_with(sym) {
                out.push((i, tok.clone()));
                i += sym.len();
                continue 'outer;
            }
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &input[start..i];
            let tok = if word == "bot" {
                Tok::Bot
            } else {
                Tok::Ident(word.to_string())
            };
            out.push((start, tok));
            continue;
        }
        let found = input[i..].chars().next().unwrap_or('?');
        return Err(ParseError::BadChar { pos: i, found });
    }
    out.push((input.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    cursor: usize,
    lints: Vec<Lint>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.cursor].1
    }

    fn pos(&self) -> usize {
        self.toks[self.cursor].0
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.cursor].1.clone();
        if tok != Tok::Eof {
            self.cursor += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError::Unexpected {
            pos: self.pos(),
            expected,
            found: self.peek().describe(),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if *self.peek() != Tok::Iff {
            return Ok(lhs);
        }
        self.bump();
        let rhs = self.imp()?;
        if *self.peek() == Tok::Iff {
            return Err(ParseError::Associativity {
                pos: self.pos(),
                op: "<->",
            });
        }
        Ok(Formula::iff(lhs, rhs))
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.rhd()?;
        if *self.peek() != Tok::Imp {
            return Ok(lhs);
        }
        self.bump();
        let rhs = self.imp()?;
        Ok(Formula::implies(lhs, rhs))
    }

    fn rhd(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.andor()?;
        if *self.peek() != Tok::Rhd {
            return Ok(lhs);
        }
        self.bump();
        let rhs = self.andor()?;
        if *self.peek() == Tok::Rhd {
            return Err(ParseError::Associativity {
                pos: self.pos(),
                op: "|>",
            });
        }
        Ok(Formula::rhd(lhs, rhs))
    }

    fn andor(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        let mut seen: Option<Tok> = None;
        loop {
            let tok = self.peek().clone();
            if tok != Tok::And && tok != Tok::Or {
                return Ok(acc);
            }
            let pos = self.pos();
            if let Some(prev) = &seen {
                if *prev != tok {
                    self.lints.push(Lint::MixedAndOr { pos });
                }
            }
            self.bump();
            let rhs = self.unary()?;
            acc = if tok == Tok::And {
                Formula::and(acc, rhs)
            } else {
                Formula::or(acc, rhs)
            };
            seen = Some(tok);
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Tok::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::Dia => {
                self.bump();
                Ok(Formula::diamond(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Var(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("')'"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parse a formula, discarding lints.
pub fn parse(input: &str) -> Result<Formula, ParseError> {
    parse_with_lints(input).map(|(f, _)| f)
}

/// Parse a formula and report style lints alongside it.
pub fn parse_with_lints(input: &str) -> Result<(Formula, Vec<Lint>), ParseError> {
    let mut parser = Parser {
        toks: lex(input)?,
        cursor: 0,
        lints: Vec::new(),
    };
    let formula = parser.iff()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.unexpected("end of input"));
    }
    Ok((formula, parser.lints))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implication_is_right_associative() {
        let f = parse("p -> q -> r").unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::var("p"),
                Formula::implies(Formula::var("q"), Formula::var("r"))
            )
        );
    }

    #[test]
    fn rhd_chain_is_rejected() {
        let err = parse("p |> q |> r").unwrap_err();
        assert!(matches!(err, ParseError::Associativity { op: "|>", pos: 7 }));
        let err = parse("p <-> q <-> r").unwrap_err();
        assert!(matches!(err, ParseError::Associativity { op: "<->", .. }));
    }

    #[test]
    fn rhd_binds_looser_than_and() {
        let f = parse("p /\\ []q |> bot").unwrap();
        assert_eq!(
            f,
            Formula::rhd(
                Formula::and(Formula::var("p"), Formula::boxed(Formula::var("q"))),
                Formula::Bot
            )
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse("p & q").unwrap_err().position(), 2);
        assert_eq!(parse("(p -> q").unwrap_err().position(), 7);
        assert_eq!(parse("").unwrap_err().position(), 0);
        assert_eq!(parse("p q").unwrap_err().position(), 2);
    }

    #[test]
    fn bot_is_reserved() {
        assert_eq!(parse("bot").unwrap(), Formula::Bot);
        assert_eq!(parse("bottom").unwrap(), Formula::var("bottom"));
    }

    #[test]
    fn mixed_chain_lints() {
        let (_, lints) = parse_with_lints("p /\\ q \\/ r").unwrap();
        assert_eq!(lints, vec![Lint::MixedAndOr { pos: 7 }]);
        let (_, lints) = parse_with_lints("p /\\ q /\\ r").unwrap();
        assert!(lints.is_empty());
    }

    #[test]
    fn diamond_desugars() {
        assert_eq!(
            parse("<>p").unwrap(),
            Formula::neg(Formula::boxed(Formula::neg(Formula::var("p"))))
        );
    }
}
