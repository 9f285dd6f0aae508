//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)* ;
//! term   := factor ('*' factor)* ;
//! factor := base ['^' uint] ;
//! base   := uint | var | '(' expr ')' ;
//! var    := letter (letter|digit|'_')* ;
//! ```
//!
//! Parsing happens in two passes: text to a ring-independent AST, then
//! AST to an expanded [`Polynomial`] once the variable order is known.

use super::{PolyError, Polynomial};
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(s) => format!("number `{s}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> PolyError {
    PolyError::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Num(text[start..i].to_string()), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

#[derive(Debug)]
enum Node {
    Num(String),
    Var(String, usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Node, PolyError> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut lhs = self.term()?;
        if negate {
            lhs = Node::Neg(Box::new(lhs));
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, PolyError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Node::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Node, PolyError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (Tok::Num(s), off) => {
                let e: u32 = s
                    .parse()
                    .map_err(|_| syntax(off, format!("exponent `{s}` is too large")))?;
                Ok(Node::Pow(Box::new(base), e))
            }
            (t, off) => Err(syntax(
                off,
                format!("expected exponent after `^`, found {}", t.describe()),
            )),
        }
    }

    fn base(&mut self) -> Result<Node, PolyError> {
        match self.bump() {
            (Tok::Num(s), _) => Ok(Node::Num(s)),
            (Tok::Ident(s), off) => Ok(Node::Var(s, off)),
            (Tok::LParen, _) => {
                let inner = self.expr()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(inner),
                    (t, off) => Err(syntax(off, format!("expected `)`, found {}", t.describe()))),
                }
            }
            (t, off) => Err(syntax(
                off,
                format!("expected number, variable or `(`, found {}", t.describe()),
            )),
        }
    }
}

fn parse_ast(text: &str) -> Result<Node, PolyError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let node = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(
            p.offset(),
            format!("unexpected {}", p.peek().describe()),
        ));
    }
    Ok(node)
}

fn collect_vars(node: &Node, out: &mut Vec<String>) {
    match node {
        Node::Num(_) => {}
        Node::Var(name, _) => {
            if !out.iter().any(|v| v == name) {
                out.push(name.clone());
            }
        }
        Node::Neg(a) | Node::Pow(a, _) => collect_vars(a, out),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
    }
}

fn lower(node: &Node, ring: Ring, vars: &[String]) -> Result<Polynomial, PolyError> {
    let n = vars.len();
    Ok(match node {
        Node::Num(digits) => {
            let m = ring.modulus();
            let residue = digits
                .bytes()
                .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % m);
            Polynomial::constant(ring, n, ring.from_u64(residue))?
        }
        Node::Var(name, off) => match vars.iter().position(|v| v == name) {
            Some(i) => Polynomial::var(ring, n, i)?,
            None => {
                return Err(PolyError::UnknownVariable {
                    name: name.clone(),
                    offset: *off,
                })
            }
        },
        Node::Neg(a) => lower(a, ring, vars)?.neg(),
        Node::Add(a, b) => lower(a, ring, vars)?.add(&lower(b, ring, vars)?)?,
        Node::Sub(a, b) => lower(a, ring, vars)?.sub(&lower(b, ring, vars)?)?,
        Node::Mul(a, b) => lower(a, ring, vars)?.mul(&lower(b, ring, vars)?)?,
        Node::Pow(a, e) => lower(a, ring, vars)?.pow(*e),
    })
}

/// Parses `text` over `ring` with an explicit variable order. Any
/// identifier outside `vars` is an [`PolyError::UnknownVariable`].
pub fn parse_polynomial<S: AsRef<str>>(
    text: &str,
    ring: Ring,
    vars: &[S],
) -> Result<Polynomial, PolyError> {
    if vars.is_empty() {
        return Err(PolyError::ZeroArity);
    }
    let ast = parse_ast(text)?;
    let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
    lower(&ast, ring, &vars)
}

/// Parses `text` with variables ordered by first appearance. A constant
/// with no variables is given the single variable `x`.
pub fn parse_polynomial_auto(
    text: &str,
    ring: Ring,
) -> Result<(Polynomial, Vec<String>), PolyError> {
    let ast = parse_ast(text)?;
    let mut vars = Vec::new();
    collect_vars(&ast, &mut vars);
    if vars.is_empty() {
        vars.push("x".to_string());
    }
    let p = lower(&ast, ring, &vars)?;
    Ok((p, vars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::format_polynomial;

    fn r(m: u64) -> Ring {
        Ring::new(m).unwrap()
    }

    #[test]
    fn expands_product() {
        let p = parse_polynomial("(x+y)*(x+y-1)", r(5), &["x", "y"]).unwrap();
        let expected = Polynomial::from_terms(
            r(5),
            2,
            [
                (vec![2, 0], 1),
                (vec![1, 1], 2),
                (vec![0, 2], 1),
                (vec![1, 0], 4),
                (vec![0, 1], 4),
            ],
        )
        .unwrap();
        assert_eq!(p, expected);
        assert_eq!(
            format_polynomial(&p, &["x", "y"]).unwrap(),
            "x^2 + 2*x*y + y^2 + 4*x + 4*y"
        );
    }

    #[test]
    fn simple_univariate() {
        let (p, vars) = parse_polynomial_auto("x^2 + 1", r(5)).unwrap();
        assert_eq!(vars, vec!["x"]);
        assert_eq!(
            p,
            Polynomial::from_terms(r(5), 1, [(vec![2], 1), (vec![0], 1)]).unwrap()
        );
    }

    #[test]
    fn trailing_operator_reports_offset() {
        let err = parse_polynomial_auto("x + ", r(5)).unwrap_err();
        assert!(
            matches!(err, PolyError::Syntax { offset: 4, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn error_positions() {
        let cases = [
            ("x * * y", 4),
            ("(x + y", 6),
            ("x ^ y", 4),
            ("x $ y", 2),
            ("x y", 2),
            ("x*-y", 2),
            ("x^99999999999", 2),
            ("", 0),
            (")", 0),
        ];
        for (text, off) in cases {
            match parse_polynomial_auto(text, r(7)) {
                Err(PolyError::Syntax { offset, .. }) => assert_eq!(offset, off, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn unknown_variable() {
        let err = parse_polynomial("x + zeta", r(5), &["x", "y"]).unwrap_err();
        assert_eq!(
            err,
            PolyError::UnknownVariable {
                name: "zeta".into(),
                offset: 4
            }
        );
    }

    #[test]
    fn first_appearance_order_and_unary_minus() {
        let (p, vars) = parse_polynomial_auto("-y_1*x2 + x2^3 - 7", r(5)).unwrap();
        assert_eq!(vars, vec!["y_1", "x2"]);
        assert_eq!(p.coefficient(&[1, 1]).unwrap().residue(), 4);
        assert_eq!(p.coefficient(&[0, 3]).unwrap().residue(), 1);
        assert_eq!(p.coefficient(&[0, 0]).unwrap().residue(), 3);
    }

    #[test]
    fn large_literals_reduce() {
        let (p, _) = parse_polynomial_auto("123456789012345678901234567890*x", r(7)).unwrap();
        // 123456789012345678901234567890 mod 7, computed digit-wise independently
        let expected = "123456789012345678901234567890"
            .chars()
            .fold(0u64, |acc, c| {
                (acc * 10 + c.to_digit(10).unwrap() as u64) % 7
            });
        assert_eq!(p.coefficient(&[1]).unwrap().residue(), expected);
    }

    #[test]
    fn constant_gets_default_variable() {
        let (p, vars) = parse_polynomial_auto(" 12 ", r(5)).unwrap();
        assert_eq!(vars, vec!["x"]);
        assert_eq!(p.coefficient(&[0]).unwrap().residue(), 2);
    }
}
