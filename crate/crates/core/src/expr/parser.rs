use std::fmt;

use thiserror::Error;

use super::ast::{BinaryOp, CmpOp, Expr, Pred, UnaryOp};

/// Syntax error with the byte offset at which it was detected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: expected {}, found {found}", ExpectedList(.expected))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

struct ExpectedList<'a>(&'a [String]);

impl fmt::Display for ExpectedList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            [] => write!(f, "nothing"),
            [one] => write!(f, "{one}"),
            many => write!(f, "one of {}", many.join(", ")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(&'static str),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) => write!(f, "number '{s}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Sym(s) => write!(f, "'{s}'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

const SYMBOLS: [&str; 13] = ["<=", ">=", "+", "-", "*", "/", "^", "(", ")", ",", "<", "=", ">"];

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            out.push((Tok::Num(src[start..i].to_string()), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
            continue;
        }
        match SYMBOLS.iter().find(|s| src[i..].starts_with(**s)) {
            Some(s) => {
                out.push((Tok::Sym(s), start));
                i += s.len();
            }
            None => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError { offset: start, expected: vec!["a token".into()], found: format!("'{ch}'") });
            }
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

/// Parses a net expression.
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := unary (('*' | '/') unary)*
/// unary  := '-' unary | factor
/// factor := atom ('^' '-'? int)?
/// atom   := number | 'eps' | 'k' | func '(' expr ')' | 'chi' '(' pred ')' | '(' expr ')'
/// pred   := ('even' | 'odd') '(' expr ')' | 'mod' '(' expr ',' int ',' int ')'
///         | expr ('<' | '<=' | '=' | '>=' | '>') expr
/// func   := 'abs' | 'sqrt' | 'sin' | 'cos' | 'exp' | 'log'
/// ```
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), ParseError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.error(&[&format!("'{sym}'")]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat("+") {
                BinaryOp::Add
            } else if self.eat("-") {
                BinaryOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat("*") {
                BinaryOp::Mul
            } else if self.eat("/") {
                BinaryOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat("-") {
            return Ok(Expr::unary(UnaryOp::Neg, self.unary()?));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat("^") {
            return Ok(base);
        }
        let negative = self.eat("-");
        let n = self.integer()?;
        let n = if negative { -(n as i64) } else { n as i64 };
        let n = i32::try_from(n).map_err(|_| ParseError {
            offset: self.toks[self.pos - 1].1,
            expected: vec!["exponent in 32-bit range".into()],
            found: n.to_string(),
        })?;
        Ok(Expr::Pow(Box::new(base), n))
    }

    fn integer(&mut self) -> Result<u32, ParseError> {
        if let Tok::Num(s) = self.peek() {
            if let Ok(n) = s.parse::<u32>() {
                self.pos += 1;
                return Ok(n);
            }
        }
        Err(self.error(&["integer"]))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        const ATOM: [&str; 5] = ["number", "'eps'", "'k'", "function", "'('"];
        match self.peek().clone() {
            Tok::Num(s) => {
                self.pos += 1;
                Ok(Expr::Literal(s))
            }
            Tok::Sym("(") => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "eps" => {
                    self.pos += 1;
                    Ok(Expr::Eps)
                }
                "k" => {
                    self.pos += 1;
                    Ok(Expr::K)
                }
                "chi" => {
                    self.pos += 1;
                    self.expect("(")?;
                    let p = self.pred()?;
                    self.expect(")")?;
                    Ok(Expr::Chi(Box::new(p)))
                }
                other => match UnaryOp::from_name(other) {
                    Some(op) => {
                        self.pos += 1;
                        self.expect("(")?;
                        let e = self.expr()?;
                        self.expect(")")?;
                        Ok(Expr::unary(op, e))
                    }
                    None => Err(self.error(&ATOM)),
                },
            },
            _ => Err(self.error(&ATOM)),
        }
    }

    fn pred(&mut self) -> Result<Pred, ParseError> {
        if let Tok::Ident(name) = self.peek().clone() {
            match name.as_str() {
                "even" | "odd" => {
                    self.pos += 1;
                    self.expect("(")?;
                    let e = self.expr()?;
                    self.expect(")")?;
                    return Ok(if name == "even" { Pred::Even(e) } else { Pred::Odd(e) });
                }
                "mod" => {
                    self.pos += 1;
                    self.expect("(")?;
                    let e = self.expr()?;
                    self.expect(",")?;
                    let at = self.offset();
                    let m = self.integer()?;
                    if m == 0 {
                        return Err(ParseError {
                            offset: at,
                            expected: vec!["positive modulus".into()],
                            found: "0".into(),
                        });
                    }
                    self.expect(",")?;
                    let r = self.integer()?;
                    self.expect(")")?;
                    return Ok(Pred::Mod(e, m, r));
                }
                _ => {}
            }
        }
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::Sym("<") => CmpOp::Lt,
            Tok::Sym("<=") => CmpOp::Le,
            Tok::Sym("=") => CmpOp::Eq,
            Tok::Sym(">=") => CmpOp::Ge,
            Tok::Sym(">") => CmpOp::Gt,
            _ => return Err(self.error(&["'<'", "'<='", "'='", "'>='", "'>'"])),
        };
        self.pos += 1;
        let rhs = self.expr()?;
        Ok(Pred::Cmp(lhs, op, rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_of_eps() {
        assert_eq!(parse("eps^2").unwrap(), Expr::Pow(Box::new(Expr::Eps), 2));
    }

    #[test]
    fn complement_of_indicator() {
        let e = parse("1 - chi(even(k))").unwrap();
        let want = Expr::binary(BinaryOp::Sub, Expr::num("1"), Expr::Chi(Box::new(Pred::Even(Expr::K))));
        assert_eq!(e, want);
    }

    #[test]
    fn dangling_caret_reports_offset_four() {
        let err = parse("eps^").unwrap_err();
        assert_eq!(err.offset, 4);
        assert_eq!(err.expected, vec!["integer".to_string()]);
        assert_eq!(err.found, "end of input");
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("1 - 2 - 3 * eps^2").unwrap();
        assert_eq!(e.to_string(), "1 - 2 - 3 * eps^2");
        match e {
            Expr::Binary(BinaryOp::Sub, l, r) => {
                assert!(matches!(*l, Expr::Binary(BinaryOp::Sub, ..)));
                assert!(matches!(*r, Expr::Binary(BinaryOp::Mul, ..)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unary_minus_and_negative_exponents() {
        assert_eq!(parse("-eps^2").unwrap().to_string(), "-eps^2");
        assert_eq!(parse("eps^-1").unwrap(), Expr::Pow(Box::new(Expr::Eps), -1));
        assert_eq!(parse("(-eps)^2").unwrap().to_string(), "(-eps)^2");
    }

    #[test]
    fn predicates() {
        assert!(matches!(parse("chi(mod(k, 3, 1))").unwrap(), Expr::Chi(p) if matches!(*p, Pred::Mod(_, 3, 1))));
        assert!(matches!(parse("chi(eps <= 0.001)").unwrap(), Expr::Chi(_)));
        let err = parse("chi(k)").unwrap_err();
        assert_eq!(err.offset, 5);
        assert!(parse("chi(mod(k, 0, 0))").is_err());
    }

    #[test]
    fn errors_name_expected_tokens() {
        let err = parse("2 * ").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.expected.contains(&"'eps'".to_string()));
        assert!(parse("foo(1)").is_err());
        assert_eq!(parse("1 2").unwrap_err().offset, 2);
        assert_eq!(parse("$").unwrap_err().offset, 0);
        assert!(parse("eps^1.5").is_err());
    }

    #[test]
    fn number_forms() {
        assert_eq!(parse("1.5e-3").unwrap(), Expr::num("1.5e-3"));
        assert_eq!(parse(".25").unwrap(), Expr::num(".25"));
    }
}
