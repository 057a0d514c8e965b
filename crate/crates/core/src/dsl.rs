//! Input language for equation sets and subspaces.
//!
//! ```text
//! # comment
//! vars x y
//! unknowns u v
//! eq u_xx = 0
//! eq 1/2 u_xy - v_yy = 0
//! ```
//!
//! A derivative subscript concatenates variable names (`u_xxy` is
//! `∂²ₓ∂_y u`). Every equation must have a single total order: only
//! principal symbols are meaningful here.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::basis::{monomial_rank, sym_dim};
use crate::linalg::{Field, Q};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}{}", found.as_ref().map(|t| format!(" (found `{t}`)")).unwrap_or_default())]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub found: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coef: Q,
    pub unknown: usize,
    pub alpha: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub terms: Vec<Term>,
}

impl Equation {
    pub fn order(&self) -> usize {
        self.terms.first().map_or(0, |t| t.alpha.iter().sum::<u32>() as usize)
    }

    /// The linear functional on `S^kT*⊗N` annihilating the symbols that
    /// satisfy the equation: `c·u^μ_α` pairs with `c·α!` times the
    /// coefficient of `x^α ⊗ e_μ`.
    pub fn functional<F: Field>(&self, n: usize, nu: usize) -> Vec<F> {
        let k = self.order();
        let d = sym_dim(n, k);
        let mut f = vec![F::zero(); nu * d];
        for t in &self.terms {
            let fact: i64 = t.alpha.iter().map(|&a| (1..=a as i64).product::<i64>()).product();
            let idx = t.unknown * d + monomial_rank(&t.alpha);
            f[idx] = f[idx].plus(&F::from_q(&t.coef).times(&F::from_i64(fact)));
        }
        f
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSet {
    pub vars: Vec<String>,
    pub unknowns: Vec<String>,
    pub equations: Vec<Equation>,
}

impl EquationSet {
    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn nu(&self) -> usize {
        self.unknowns.len()
    }

    pub fn max_order(&self) -> usize {
        self.equations.iter().map(Equation::order).max().unwrap_or(0)
    }

    /// `(order, functional)` for every equation.
    pub fn functionals<F: Field>(&self) -> Vec<(usize, Vec<F>)> {
        self.equations.iter().map(|e| (e.order(), e.functional(self.n(), self.nu()))).collect()
    }
}

impl fmt::Display for EquationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars {}", self.vars.join(" "))?;
        writeln!(f, "unknowns {}", self.unknowns.join(" "))?;
        for eq in &self.equations {
            write!(f, "eq")?;
            for (i, t) in eq.terms.iter().enumerate() {
                let neg = t.coef.is_negative();
                let mag = t.coef.abs();
                match (i, neg) {
                    (0, false) => write!(f, " ")?,
                    (0, true) => write!(f, " -")?,
                    (_, false) => write!(f, " + ")?,
                    (_, true) => write!(f, " - ")?,
                }
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}_", self.unknowns[t.unknown])?;
                for (v, &a) in t.alpha.iter().enumerate() {
                    for _ in 0..a {
                        write!(f, "{}", self.vars[v])?;
                    }
                }
            }
            writeln!(f, " = 0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Underscore,
    Equals,
    Comma,
    Partial,
    Newline,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Int(i) => write!(f, "{i}"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Slash => write!(f, "/"),
            Tok::Underscore => write!(f, "_"),
            Tok::Equals => write!(f, "="),
            Tok::Comma => write!(f, ","),
            Tok::Partial => write!(f, "∂"),
            Tok::Newline => write!(f, "end of line"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = content.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let single = match c {
                '+' => Some(Tok::Plus),
                '-' | '−' => Some(Tok::Minus),
                '*' | '·' => Some(Tok::Star),
                '/' => Some(Tok::Slash),
                '_' => Some(Tok::Underscore),
                '=' => Some(Tok::Equals),
                ',' => Some(Tok::Comma),
                '∂' | '@' => Some(Tok::Partial),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Spanned { tok, line, column });
                i += 1;
            } else if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v: BigInt = s.parse().expect("digits");
                out.push(Spanned { tok: Tok::Int(v), line, column });
            } else if c.is_alphabetic() {
                let start = i;
                while i < chars.len() && chars[i].is_alphanumeric() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Ident(s), line, column });
            } else {
                return Err(ParseError {
                    line,
                    column,
                    message: "unexpected character".into(),
                    found: Some(c.to_string()),
                });
            }
        }
        out.push(Spanned { tok: Tok::Newline, line, column: chars.len() + 1 });
    }
    let (line, column) = out.last().map_or((1, 1), |s| (s.line, s.column));
    out.push(Spanned { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, at: &Spanned, message: impl Into<String>) -> ParseError {
        ParseError { line: at.line, column: at.column, message: message.into(), found: Some(at.tok.to_string()) }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, ParseError> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(self.error_at(&t, format!("expected {what}")))
        }
    }

    fn skip_blank_lines(&mut self) {
        while self.peek().tok == Tok::Newline {
            self.next();
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == word => Ok(()),
            _ => Err(self.error_at(&t, format!("expected `{word}`"))),
        }
    }

    fn names(&mut self) -> Result<Vec<String>, ParseError> {
        let mut names: Vec<String> = Vec::new();
        loop {
            let t = self.next();
            match t.tok {
                Tok::Ident(ref s) => {
                    if names.contains(s) {
                        return Err(self.error_at(&t, "duplicate name"));
                    }
                    names.push(s.clone());
                }
                Tok::Newline | Tok::End if !names.is_empty() => return Ok(names),
                _ => return Err(self.error_at(&t, "expected a name")),
            }
        }
    }

    fn rational(&mut self) -> Result<Option<Q>, ParseError> {
        let Tok::Int(num) = self.peek().tok.clone() else {
            return Ok(None);
        };
        self.next();
        let mut den = BigInt::from(1);
        if self.peek().tok == Tok::Slash {
            self.next();
            let t = self.next();
            match t.tok {
                Tok::Int(d) if d != BigInt::from(0) => den = d,
                _ => return Err(self.error_at(&t, "expected a positive denominator")),
            }
        }
        Ok(Some(Q::from_big(BigRational::new(num, den))))
    }

    fn term(&mut self, set: &EquationSet, sign: bool) -> Result<(Term, Spanned), ParseError> {
        let start = self.peek().clone();
        let mut coef = self.rational()?.unwrap_or_else(Q::one);
        if sign {
            coef = coef.negated();
        }
        if self.peek().tok == Tok::Star {
            self.next();
        }
        let t = self.next();
        let Tok::Ident(name) = &t.tok else {
            return Err(self.error_at(&t, "expected an unknown"));
        };
        let Some(unknown) = set.unknowns.iter().position(|u| u == name) else {
            return Err(self.error_at(&t, format!("undeclared unknown `{name}`")));
        };
        self.expect(Tok::Underscore, "`_` followed by a derivative subscript")?;
        let t = self.next();
        let Tok::Ident(sub) = &t.tok else {
            return Err(self.error_at(&t, "expected a derivative subscript"));
        };
        let alpha = split_subscript(sub, &set.vars).ok_or_else(|| self.error_at(&t, "subscript is not a product of declared variables"))?;
        Ok((Term { coef, unknown, alpha }, start))
    }

    fn equation(&mut self, set: &EquationSet) -> Result<Equation, ParseError> {
        let mut terms = Vec::new();
        let mut sign = false;
        if matches!(self.peek().tok, Tok::Minus | Tok::Plus) {
            sign = self.next().tok == Tok::Minus;
        }
        let mut order = None;
        loop {
            let (term, at) = self.term(set, sign)?;
            let o: u32 = term.alpha.iter().sum();
            match order {
                None => order = Some(o),
                Some(prev) if prev != o => {
                    return Err(self.error_at(
                        &at,
                        format!(
                            "term of order {o} in an equation of order {prev}; enter only the principal symbol (highest-order terms)"
                        ),
                    ))
                }
                _ => {}
            }
            terms.push(term);
            match self.peek().tok {
                Tok::Plus => sign = false,
                Tok::Minus => sign = true,
                _ => break,
            }
            self.next();
        }
        self.expect(Tok::Equals, "`=`")?;
        let t = self.next();
        match t.tok {
            Tok::Int(z) if z == BigInt::from(0) => {}
            _ => return Err(self.error_at(&t, "right-hand side must be 0")),
        }
        let t = self.next();
        if !matches!(t.tok, Tok::Newline | Tok::End) {
            return Err(self.error_at(&t, "expected end of line"));
        }
        Ok(Equation { terms })
    }
}

/// Splits e.g. `xxy` into exponents over `vars`, preferring long names.
fn split_subscript(sub: &str, vars: &[String]) -> Option<Vec<u32>> {
    fn rec(rest: &str, vars: &[String], alpha: &mut Vec<u32>) -> bool {
        if rest.is_empty() {
            return true;
        }
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(vars[i].len()));
        for i in order {
            if let Some(tail) = rest.strip_prefix(vars[i].as_str()) {
                alpha[i] += 1;
                if rec(tail, vars, alpha) {
                    return true;
                }
                alpha[i] -= 1;
            }
        }
        false
    }
    let mut alpha = vec![0; vars.len()];
    rec(sub, vars, &mut alpha).then_some(alpha)
}

pub fn parse(text: &str) -> Result<EquationSet, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    p.skip_blank_lines();
    p.keyword("vars")?;
    let vars = p.names()?;
    p.skip_blank_lines();
    p.keyword("unknowns")?;
    let unknowns = p.names()?;
    if let Some(clash) = unknowns.iter().find(|u| vars.contains(u)) {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: format!("`{clash}` is declared both as a variable and an unknown"),
            found: None,
        });
    }
    let mut set = EquationSet { vars, unknowns, equations: Vec::new() };
    loop {
        p.skip_blank_lines();
        if p.peek().tok == Tok::End {
            break;
        }
        p.keyword("eq")?;
        let eq = p.equation(&set)?;
        set.equations.push(eq);
    }
    Ok(set)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceMode {
    /// Combinations of `d<var>`: covectors, subspaces of `T*`.
    Covectors,
    /// Combinations of `∂<var>` (or `@<var>`): vectors, subspaces of `T`.
    Vectors,
}

/// Parses a comma-separated list of linear combinations. Empty input is
/// the empty list.
pub fn parse_subspace(text: &str, vars: &[String], mode: SubspaceMode) -> Result<Vec<Vec<Q>>, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    p.skip_blank_lines();
    let mut out = Vec::new();
    if p.peek().tok == Tok::End {
        return Ok(out);
    }
    loop {
        let mut v = vec![Q::zero(); vars.len()];
        let mut sign = false;
        if matches!(p.peek().tok, Tok::Minus | Tok::Plus) {
            sign = p.next().tok == Tok::Minus;
        }
        loop {
            let mut coef = p.rational()?.unwrap_or_else(Q::one);
            if sign {
                coef = coef.negated();
            }
            if p.peek().tok == Tok::Star {
                p.next();
            }
            let idx = basis_symbol(&mut p, vars, mode)?;
            v[idx] = v[idx].plus(&coef);
            match p.peek().tok {
                Tok::Plus => sign = false,
                Tok::Minus => sign = true,
                _ => break,
            }
            p.next();
        }
        out.push(v);
        p.skip_blank_lines();
        let t = p.next();
        match t.tok {
            Tok::Comma => p.skip_blank_lines(),
            Tok::End => return Ok(out),
            _ => return Err(p.error_at(&t, "expected `,` or end of input")),
        }
    }
}

fn basis_symbol(p: &mut Parser, vars: &[String], mode: SubspaceMode) -> Result<usize, ParseError> {
    let t = p.next();
    let name = match (mode, &t.tok) {
        (SubspaceMode::Vectors, Tok::Partial) => {
            let t2 = p.next();
            match t2.tok {
                Tok::Ident(s) => s,
                _ => return Err(p.error_at(&t2, "expected a variable after `∂`")),
            }
        }
        (SubspaceMode::Covectors, Tok::Ident(s)) if s.starts_with('d') && s.len() > 1 => s[1..].to_string(),
        (SubspaceMode::Vectors, _) => return Err(p.error_at(&t, "expected `∂<var>` or `@<var>`")),
        (SubspaceMode::Covectors, _) => return Err(p.error_at(&t, "expected `d<var>`")),
    };
    vars.iter()
        .position(|v| *v == name)
        .ok_or_else(|| p.error_at(&t, format!("undeclared variable `{name}`")))
}
