//! Expressions in `x, y, z, t` with `+ - * / ^`, the functions `sin cos exp abs max` and the
//! constant `pi`.

use std::fmt;

use crate::error::{Error, Result};
use crate::Vec3;

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(f64),
    Var(usize),
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Func {
    Sin,
    Cos,
    Exp,
    Abs,
    Max,
}

/// A parsed expression.
#[derive(Clone, PartialEq)]
pub struct Expr {
    source: String,
    root: Node,
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({:?})", self.source)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

fn tokenize(s: &str) -> std::result::Result<Vec<Tok>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| format!("bad number '{text}'"))?;
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else {
            out.push(match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                _ => return Err(format!("unexpected character '{c}'")),
            });
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> std::result::Result<Node, String> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> std::result::Result<Node, String> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> std::result::Result<Node, String> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> std::result::Result<Node, String> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Node::Bin('^', Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> std::result::Result<Node, String> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(Node::Num(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err("missing ')'".into()),
                }
            }
            Some(Tok::Ident(name)) => {
                let func = match name.as_str() {
                    "x" => return Ok(Node::Var(0)),
                    "y" => return Ok(Node::Var(1)),
                    "z" => return Ok(Node::Var(2)),
                    "t" => return Ok(Node::Var(3)),
                    "pi" => return Ok(Node::Num(std::f64::consts::PI)),
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "exp" => Func::Exp,
                    "abs" => Func::Abs,
                    "max" => Func::Max,
                    _ => return Err(format!("unknown name '{name}'")),
                };
                if self.next() != Some(Tok::LParen) {
                    return Err(format!("expected '(' after {name}"));
                }
                let mut args = vec![self.expr()?];
                loop {
                    match self.next() {
                        Some(Tok::Comma) => args.push(self.expr()?),
                        Some(Tok::RParen) => break,
                        _ => return Err(format!("missing ')' in call to {name}")),
                    }
                }
                let ok = match func {
                    Func::Max => args.len() >= 2,
                    _ => args.len() == 1,
                };
                if !ok {
                    return Err(format!("wrong number of arguments to {name}"));
                }
                Ok(Node::Call(func, args))
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

fn eval(n: &Node, vars: &[f64; 4]) -> f64 {
    match n {
        Node::Num(v) => *v,
        Node::Var(i) => vars[*i],
        Node::Neg(a) => -eval(a, vars),
        Node::Bin(op, a, b) => {
            let (a, b) = (eval(a, vars), eval(b, vars));
            match op {
                '+' => a + b,
                '-' => a - b,
                '*' => a * b,
                '/' => a / b,
                _ => a.powf(b),
            }
        }
        Node::Call(f, args) => {
            let a = eval(&args[0], vars);
            match f {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Exp => a.exp(),
                Func::Abs => a.abs(),
                Func::Max => args[1..].iter().fold(a, |m, e| m.max(eval(e, vars))),
            }
        }
    }
}

impl Expr {
    pub fn parse(source: &str) -> Result<Expr> {
        let toks = tokenize(source).map_err(|m| Error::Config(format!("expression '{source}': {m}")))?;
        let mut p = Parser { toks, pos: 0 };
        let root = p
            .expr()
            .map_err(|m| Error::Config(format!("expression '{source}': {m}")))?;
        if p.pos != p.toks.len() {
            return Err(Error::Config(format!("expression '{source}': trailing input")));
        }
        Ok(Expr {
            source: source.trim().to_string(),
            root,
        })
    }

    pub fn constant(v: f64) -> Expr {
        Expr {
            source: format!("{v:?}"),
            root: Node::Num(v),
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, x: &Vec3, t: f64) -> f64 {
        eval(&self.root, &[x.x, x.y, x.z, t])
    }

    /// Whether the expression depends on `t`.
    pub fn is_time_dependent(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Var(3) => true,
                Node::Num(_) | Node::Var(_) => false,
                Node::Neg(a) => walk(a),
                Node::Bin(_, a, b) => walk(a) || walk(b),
                Node::Call(_, args) => args.iter().any(walk),
            }
        }
        walk(&self.root)
    }
}

/// Splits on commas outside parentheses.
pub fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// A vector of component expressions; missing components are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorExpr {
    pub components: Vec<Expr>,
}

impl VectorExpr {
    pub fn parse(source: &str, dim: usize) -> Result<VectorExpr> {
        let parts = split_top_level(source);
        if parts.len() != dim {
            return Err(Error::Config(format!(
                "vector expression '{source}' has {} components, expected {dim}",
                parts.len()
            )));
        }
        Ok(VectorExpr {
            components: parts.into_iter().map(Expr::parse).collect::<Result<_>>()?,
        })
    }

    pub fn zero(dim: usize) -> VectorExpr {
        VectorExpr {
            components: vec![Expr::constant(0.0); dim],
        }
    }

    pub fn eval(&self, x: &Vec3, t: f64) -> Vec3 {
        let mut v = Vec3::zeros();
        for (i, e) in self.components.iter().enumerate() {
            v[i] = e.eval(x, t);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> f64 {
        Expr::parse(s).unwrap().eval(&Vec3::new(2.0, 3.0, 5.0), 0.5)
    }

    #[test]
    fn arithmetic_and_precedence() {
        assert_eq!(ev("1 + 2 * 3"), 7.0);
        assert_eq!(ev("(1 + 2) * 3"), 9.0);
        assert_eq!(ev("2 ^ 3 ^ 2"), 512.0);
        assert_eq!(ev("-2 ^ 2"), -4.0);
        assert_eq!(ev("8 / 4 / 2"), 1.0);
        assert_eq!(ev("1e-3 * 1E3"), 1.0);
        assert_eq!(ev("x * y - z + t"), 1.5);
    }

    #[test]
    fn functions_and_constants() {
        assert_eq!(ev("sin(0) + cos(0) + exp(0)"), 2.0);
        assert_eq!(ev("abs(-x)"), 2.0);
        assert_eq!(ev("max(x, y, 1)"), 3.0);
        assert!((ev("cos(pi)") + 1.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        for bad in ["", "1 +", "foo", "sin(1, 2)", "max(1)", "(1", "2 $ 3", "1 2", "sin 1"] {
            assert!(Expr::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn vectors() {
        let v = VectorExpr::parse("max(x, 1), -t", 2).unwrap();
        assert_eq!(v.eval(&Vec3::new(0.5, 0.0, 0.0), 2.0), Vec3::new(1.0, -2.0, 0.0));
        assert!(VectorExpr::parse("1, 2, 3", 2).is_err());
        assert!(!Expr::parse("x + 1").unwrap().is_time_dependent());
        assert!(Expr::parse("sin(t)").unwrap().is_time_dependent());
    }
}
