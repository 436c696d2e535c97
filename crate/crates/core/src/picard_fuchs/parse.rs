//! Text form of differential operators: `theta`, `q`, integers, `+ - * / ^`
//! and parentheses, with implicit multiplication (`5theta`, `(..)(..)`).
//! Products are operator compositions, so `theta*q` means `q*(theta+1)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `Σ_m q^m P_m(θ)`, keyed by `m`, each `P_m` a coefficient list in `θ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct OpPoly(pub BTreeMap<usize, Vec<Scalar>>);

fn poly_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Scalar::zero);
            let y = b.get(i).cloned().unwrap_or_else(Scalar::zero);
            &x + &y
        })
        .collect()
}

fn poly_mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

/// `P(x + s)` by repeated synthetic expansion.
pub(crate) fn poly_shift(p: &[Scalar], s: i64) -> Vec<Scalar> {
    let lin = vec![Scalar::from_int(s), Scalar::one()];
    let mut out: Vec<Scalar> = Vec::new();
    for c in p.iter().rev() {
        out = poly_add(&poly_mul(&out, &lin), std::slice::from_ref(c));
    }
    out
}

impl OpPoly {
    fn constant(c: Scalar) -> Self {
        OpPoly(BTreeMap::from([(0, vec![c])]))
    }

    fn theta() -> Self {
        OpPoly(BTreeMap::from([(0, vec![Scalar::zero(), Scalar::one()])]))
    }

    fn q() -> Self {
        OpPoly(BTreeMap::from([(1, vec![Scalar::one()])]))
    }

    fn add(&self, other: &OpPoly) -> OpPoly {
        let mut out = self.0.clone();
        for (m, p) in &other.0 {
            let e = out.entry(*m).or_default();
            *e = poly_add(e, p);
        }
        OpPoly(out)
    }

    fn scale(&self, c: &Scalar) -> OpPoly {
        OpPoly(self.0.iter().map(|(m, p)| (*m, p.iter().map(|x| x * c).collect())).collect())
    }

    // (q^a P(θ))(q^b R(θ)) = q^{a+b} P(θ+b) R(θ)
    fn compose(&self, other: &OpPoly) -> OpPoly {
        let mut out = OpPoly::default();
        for (a, p) in &self.0 {
            for (b, r) in &other.0 {
                let term = poly_mul(&poly_shift(p, *b as i64), r);
                out = out.add(&OpPoly(BTreeMap::from([(a + b, term)])));
            }
        }
        out
    }

    pub(crate) fn trimmed(mut self) -> Self {
        for p in self.0.values_mut() {
            while p.last().is_some_and(Scalar::is_zero) {
                p.pop();
            }
        }
        self.0.retain(|_, p| !p.is_empty());
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Theta,
    Q,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' | '·' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            'θ' => {
                out.push(Tok::Theta);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Int(s.parse().map_err(|_| Error::Parse(format!("integer {s} out of range")))?));
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                match word.as_str() {
                    "theta" => out.push(Tok::Theta),
                    "q" => out.push(Tok::Q),
                    _ => return Err(Error::Parse(format!("unknown identifier `{word}`"))),
                }
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
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

    fn expr(&mut self) -> Result<OpPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.scale(&-Scalar::one()));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<OpPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.compose(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let Some(Tok::Int(d)) = self.next() else {
                        return Err(Error::Parse("`/` must be followed by an integer".into()));
                    };
                    if d == 0 {
                        return Err(Error::Parse("division by zero".into()));
                    }
                    acc = acc.scale(&Scalar::ratio(1, d));
                }
                Some(Tok::Int(_) | Tok::Theta | Tok::Q | Tok::LParen) => {
                    acc = acc.compose(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<OpPoly> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(self.unary()?.scale(&-Scalar::one()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<OpPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let Some(Tok::Int(e)) = self.next() else {
                return Err(Error::Parse("`^` must be followed by an integer".into()));
            };
            let mut acc = OpPoly::constant(Scalar::one());
            for _ in 0..e {
                acc = acc.compose(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<OpPoly> {
        match self.next() {
            Some(Tok::Int(v)) => Ok(OpPoly::constant(Scalar::from_int(v))),
            Some(Tok::Theta) => Ok(OpPoly::theta()),
            Some(Tok::Q) => Ok(OpPoly::q()),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::Parse("missing `)`".into())),
                }
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

pub(crate) fn parse_operator_text(text: &str) -> Result<OpPoly> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty operator".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e.trimmed())
}
