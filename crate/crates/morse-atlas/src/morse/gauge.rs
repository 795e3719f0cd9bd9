use std::fmt;

use serde::{Deserialize, Serialize};

use super::MorseError;

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Const(f64),
    L,
    E,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    /// `outer(λ', ε')` with `λ' = lambda(λ, ε)` and `ε' = eps(λ, ε)`.
    Compose(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl Expr {
    fn eval(&self, l: f64, e: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::L => l,
            Expr::E => e,
            Expr::Add(a, b) => a.eval(l, e) + b.eval(l, e),
            Expr::Mul(a, b) => a.eval(l, e) * b.eval(l, e),
            Expr::Max(a, b) => a.eval(l, e).max(b.eval(l, e)),
            Expr::Compose(m, a, b) => m.eval(a.eval(l, e).max(1.0), b.eval(l, e).max(0.0)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::L => write!(f, "l"),
            Expr::E => write!(f, "e"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Max(a, b) => write!(f, "max({a}, {b})"),
            Expr::Compose(m, a, b) => write!(f, "[{m}]({a}, {b})"),
        }
    }
}

/// A Morse gauge `M(λ, ε)`, a closed-form expression in `l` and `e`.
///
/// Grammar: sums and products of numbers, `l`, `e`, `max(x, y, …)` and parentheses.
/// Construction spot-checks that the value is nonnegative and non-decreasing in both
/// arguments on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MorseGauge {
    expr: Expr,
    source: String,
}

const GRID_L: [f64; 6] = [1.0, 1.5, 2.0, 3.0, 5.0, 11.0];
const GRID_E: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 3.0, 10.0];

impl MorseGauge {
    pub fn parse(s: &str) -> Result<Self, MorseError> {
        let mut p = Parser { s: s.as_bytes(), i: 0 };
        let expr = p.sum()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(MorseError::BadGauge(format!("trailing input at byte {} of {s:?}", p.i)));
        }
        Self::checked(expr, s.trim().to_string())
    }

    fn checked(expr: Expr, source: String) -> Result<Self, MorseError> {
        for (i, &l) in GRID_L.iter().enumerate() {
            for (j, &e) in GRID_E.iter().enumerate() {
                let v = expr.eval(l, e);
                if !v.is_finite() || v < 0.0 {
                    return Err(MorseError::BadGauge(format!("{source}: value {v} at ({l}, {e})")));
                }
                let up_l = GRID_L.get(i + 1).map(|&l2| expr.eval(l2, e));
                let up_e = GRID_E.get(j + 1).map(|&e2| expr.eval(l, e2));
                if up_l.is_some_and(|u| u < v) || up_e.is_some_and(|u| u < v) {
                    return Err(MorseError::BadGauge(format!("{source}: decreases after ({l}, {e})")));
                }
            }
        }
        Ok(Self { expr, source })
    }

    pub fn eval(&self, lambda: f64, eps: f64) -> f64 {
        self.expr.eval(lambda, eps)
    }

    /// `a·M + b`.
    pub fn inflate(&self, a: f64, b: f64) -> Result<Self, MorseError> {
        let expr = Expr::Add(Box::new(Expr::Mul(Box::new(Expr::Const(a)), Box::new(self.expr.clone()))), Box::new(Expr::Const(b)));
        Self::checked(expr, format!("{a} * ({}) + {b}", self.source))
    }

    /// `self(inner_l(λ, ε), inner_e(λ, ε))`.
    pub fn compose(&self, inner_l: &MorseGauge, inner_e: &MorseGauge) -> Result<Self, MorseError> {
        let expr = Expr::Compose(Box::new(self.expr.clone()), Box::new(inner_l.expr.clone()), Box::new(inner_e.expr.clone()));
        let source = expr.to_string();
        Self::checked(expr, source)
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl fmt::Display for MorseGauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl TryFrom<String> for MorseGauge {
    type Error = MorseError;
    fn try_from(s: String) -> Result<Self, MorseError> {
        Self::parse(&s)
    }
}

impl From<MorseGauge> for String {
    fn from(g: MorseGauge) -> String {
        g.source
    }
}

/// `δ_M = max{4M(1, 2M(5,0)) + 2M(5,0), 8M(3,0)}`.
pub fn delta_m(m: &MorseGauge) -> f64 {
    let m50 = m.eval(5.0, 0.0);
    (4.0 * m.eval(1.0, 2.0 * m50) + 2.0 * m50).max(8.0 * m.eval(3.0, 0.0))
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.s.get(self.i).is_some_and(|c| c.is_ascii_whitespace()) {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> MorseError {
        MorseError::BadGauge(format!("{what} at byte {}", self.i))
    }

    fn sum(&mut self) -> Result<Expr, MorseError> {
        let mut x = self.product()?;
        while self.eat(b'+') {
            x = Expr::Add(Box::new(x), Box::new(self.product()?));
        }
        Ok(x)
    }

    fn product(&mut self) -> Result<Expr, MorseError> {
        let mut x = self.atom()?;
        while self.eat(b'*') {
            x = Expr::Mul(Box::new(x), Box::new(self.atom()?));
        }
        Ok(x)
    }

    fn atom(&mut self) -> Result<Expr, MorseError> {
        self.ws();
        if self.eat(b'(') {
            let x = self.sum()?;
            return if self.eat(b')') { Ok(x) } else { Err(self.err("expected ')'")) };
        }
        let rest = &self.s[self.i..];
        if rest.starts_with(b"max") {
            self.i += 3;
            if !self.eat(b'(') {
                return Err(self.err("expected '(' after max"));
            }
            let mut x = self.sum()?;
            while self.eat(b',') {
                x = Expr::Max(Box::new(x), Box::new(self.sum()?));
            }
            return if self.eat(b')') { Ok(x) } else { Err(self.err("expected ')'")) };
        }
        match rest.first() {
            Some(b'l') => {
                self.i += 1;
                Ok(Expr::L)
            }
            Some(b'e') => {
                self.i += 1;
                Ok(Expr::E)
            }
            Some(c) if c.is_ascii_digit() || *c == b'.' => {
                let n = rest.iter().take_while(|c| c.is_ascii_digit() || **c == b'.').count();
                let text = std::str::from_utf8(&rest[..n]).expect("ascii");
                self.i += n;
                text.parse().map(Expr::Const).map_err(|_| self.err("bad number"))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_of_simple_gauges() {
        assert_eq!(delta_m(&MorseGauge::parse("l + e").unwrap()), 54.0);
        assert_eq!(delta_m(&MorseGauge::parse("l").unwrap()), 24.0);
        assert_eq!(delta_m(&MorseGauge::parse("0").unwrap()), 0.0);
    }

    #[test]
    fn parser_and_printing() {
        let g = MorseGauge::parse("max(2*l, e + 1) * 3").unwrap();
        assert_eq!(g.eval(2.0, 10.0), 33.0);
        assert_eq!(g.to_string(), "max(2*l, e + 1) * 3");
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<MorseGauge>(&json).unwrap(), g);
        for bad in ["", "l +", "max(l", "x", "l e", "1..2"] {
            assert!(MorseGauge::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn inflation_and_composition() {
        let m = MorseGauge::parse("l + e").unwrap();
        assert_eq!(m.inflate(3.0, 3.0).unwrap().eval(2.0, 1.0), 12.0);
        let sq = m.compose(&MorseGauge::parse("l * l").unwrap(), &MorseGauge::parse("e").unwrap()).unwrap();
        assert_eq!(sq.eval(3.0, 1.0), 10.0);
    }
}
