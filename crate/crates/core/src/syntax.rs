//! Surface syntax: a recursive descent parser and the matching printer.
//!
//! ```text
//! formula := iff
//! iff     := imp ('<->' imp)*
//! imp     := or ('->' imp)?
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '~' unary | quant | atom | '(' formula ')'
//! quant   := ('forall' | 'exists') var '.' unary
//!          | ('atleast' | 'allbut') INT var '.' unary
//!          | ('forall2' | 'exists2') pred ('/' INT)? '.' unary
//! atom    := 'true' | 'false' | IDENT | IDENT '(' term (',' term)* ')'
//!          | term ('=' | '!=') term
//! ```
//!
//! Identifiers in term position that no enclosing binder captures are
//! constants. `#` starts a comment that runs to the end of the line.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u32),
    LParen,
    RParen,
    Dot,
    Comma,
    Slash,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Equals,
    NotEquals,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Int(n) => write!(f, "number {n}"),
            Tok::Eof => f.write_str("end of input"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Comma => f.write_str("','"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Tilde => f.write_str("'~'"),
            Tok::Amp => f.write_str("'&'"),
            Tok::Bar => f.write_str("'|'"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::DArrow => f.write_str("'<->'"),
            Tok::Equals => f.write_str("'='"),
            Tok::NotEquals => f.write_str("'!='"),
        }
    }
}

const KEYWORDS: &[&str] = &["forall", "exists", "atleast", "allbut", "forall2", "exists2", "true", "false"];

fn tokenize(src: &str) -> Result<Vec<(Tok, usize, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| Error::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i, &mut col),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' | ')' | '.' | ',' | '/' | '&' | '|' | '=' => {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '.' => Tok::Dot,
                    ',' => Tok::Comma,
                    '/' => Tok::Slash,
                    '&' => Tok::Amp,
                    '|' => Tok::Bar,
                    _ => Tok::Equals,
                };
                out.push((t, l0, c0));
                advance(1, &mut i, &mut col);
            }
            '~' => {
                out.push((Tok::Tilde, l0, c0));
                advance(1, &mut i, &mut col);
            }
            '!' if chars.get(i + 1) == Some(&'=') => {
                out.push((Tok::NotEquals, l0, c0));
                advance(2, &mut i, &mut col);
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, l0, c0));
                advance(2, &mut i, &mut col);
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                out.push((Tok::DArrow, l0, c0));
                advance(3, &mut i, &mut col);
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                let n = text.parse().map_err(|_| err(l0, c0, format!("number {text} out of range")))?;
                out.push((Tok::Int(n), l0, c0));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                col += i - start;
                out.push((Tok::Ident(chars[start..i].iter().collect()), l0, c0));
            }
            c => return Err(err(l0, c0, format!("unexpected character '{c}'"))),
        }
    }
    out.push((Tok::Eof, line, col));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    bound_vars: Vec<String>,
    arities: HashMap<String, usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (_, line, col) = &self.toks[self.pos];
        Err(Error::Syntax { line: *line, col: *col, msg: msg.into() })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected {t}, found {}", self.peek()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok(s)
            }
            t => self.error(format!("expected {what}, found {t}")),
        }
    }

    fn record_arity(&mut self, p: &str, n: usize) -> Result<()> {
        match self.arities.get(p) {
            Some(&m) if m != n => Err(Error::Arity { pred: p.to_string(), first: m, second: n }),
            _ => {
                self.arities.insert(p.to_string(), n);
                Ok(())
            }
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DArrow {
            self.next();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut items = vec![self.and()?];
        while *self.peek() == Tok::Bar {
            self.next();
            items.push(self.and()?);
        }
        Ok(Formula::or(items))
    }

    fn and(&mut self) -> Result<Formula> {
        let mut items = vec![self.unary()?];
        while *self.peek() == Tok::Amp {
            self.next();
            items.push(self.unary()?);
        }
        Ok(Formula::and(items))
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.next();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(k) if k == "forall" || k == "exists" => {
                self.next();
                let q = if k == "forall" { Quantifier::Forall } else { Quantifier::Exists };
                self.individual_quant(q)
            }
            Tok::Ident(k) if k == "atleast" || k == "allbut" => {
                self.next();
                let n = match self.next() {
                    Tok::Int(n) if n >= 1 => n,
                    Tok::Int(n) => return Err(Error::BadCount(n)),
                    t => {
                        self.pos -= 1;
                        return self.error(format!("expected count, found {t}"));
                    }
                };
                let q = if k == "atleast" { Quantifier::AtLeast(n) } else { Quantifier::AllBut(n) };
                self.individual_quant(q)
            }
            Tok::Ident(k) if k == "forall2" || k == "exists2" => {
                self.next();
                let p = self.ident("predicate")?;
                let mut annotated = None;
                if *self.peek() == Tok::Slash {
                    self.next();
                    match self.next() {
                        Tok::Int(n) => annotated = Some(n as usize),
                        t => {
                            self.pos -= 1;
                            return self.error(format!("expected arity, found {t}"));
                        }
                    }
                }
                self.expect(Tok::Dot)?;
                let outer = self.arities.remove(&p);
                let body = self.unary()?;
                let used = self.arities.remove(&p);
                if let Some(m) = outer {
                    self.arities.insert(p.clone(), m);
                }
                let arity = match (used, annotated) {
                    (Some(u), Some(a)) if u != a => {
                        return Err(Error::Arity { pred: p, first: a, second: u });
                    }
                    (Some(u), _) => u,
                    (None, Some(a)) => a,
                    (None, None) => 1,
                };
                let q = if k == "forall2" { Quantifier::ForallPred(arity) } else { Quantifier::ExistsPred(arity) };
                Ok(Formula::quant(q, p, body))
            }
            _ => self.atom(),
        }
    }

    fn individual_quant(&mut self, q: Quantifier) -> Result<Formula> {
        let x = self.ident("variable")?;
        self.expect(Tok::Dot)?;
        self.bound_vars.push(x.clone());
        let body = self.unary();
        self.bound_vars.pop();
        Ok(Formula::quant(q, x, body?))
    }

    fn term_of(&self, name: String) -> Term {
        if self.bound_vars.contains(&name) {
            Term::Var(name)
        } else {
            Term::Const(name)
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let name = match self.peek().clone() {
            Tok::Ident(k) if k == "true" => {
                self.next();
                return Ok(Formula::True);
            }
            Tok::Ident(k) if k == "false" => {
                self.next();
                return Ok(Formula::False);
            }
            Tok::Ident(_) => self.ident("identifier")?,
            t => return self.error(format!("expected formula, found {t}")),
        };
        match self.peek().clone() {
            Tok::Equals | Tok::NotEquals => {
                let negated = self.next() == Tok::NotEquals;
                let lhs = self.term_of(name);
                let rhs = self.ident("term")?;
                let rhs = self.term_of(rhs);
                let eq = Formula::eq(lhs, rhs);
                Ok(if negated { Formula::not(eq) } else { eq })
            }
            Tok::LParen => {
                self.next();
                let mut args = Vec::new();
                loop {
                    let t = self.ident("term")?;
                    args.push(self.term_of(t));
                    match self.next() {
                        Tok::Comma => continue,
                        Tok::RParen => break,
                        t => {
                            self.pos -= 1;
                            return self.error(format!("expected ',' or ')', found {t}"));
                        }
                    }
                }
                self.record_arity(&name, args.len())?;
                Ok(Formula::atom(name, args))
            }
            _ => {
                self.record_arity(&name, 0)?;
                Ok(Formula::nullary(name))
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Formula> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0, bound_vars: Vec::new(), arities: HashMap::new() };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {}", p.peek()));
    }
    Ok(f)
}

const PREC_IFF: u8 = 0;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

fn term_str(t: &Term) -> &str {
    t.name()
}

fn write_formula(out: &mut String, f: &Formula, prec: u8) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                out.push('(');
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(term_str(t));
                }
                out.push(')');
            }
        }
        Formula::Eq(t, s) => {
            out.push_str(term_str(t));
            out.push_str(" = ");
            out.push_str(term_str(s));
        }
        Formula::Not(g) => match &**g {
            Formula::Eq(t, s) => {
                out.push_str(term_str(t));
                out.push_str(" != ");
                out.push_str(term_str(s));
            }
            g => {
                out.push('~');
                write_formula(out, g, PREC_UNARY);
            }
        },
        Formula::And(v) | Formula::Or(v) if v.is_empty() => {
            out.push_str(if matches!(f, Formula::And(_)) { "true" } else { "false" });
        }
        Formula::And(v) | Formula::Or(v) if v.len() == 1 => write_formula(out, &v[0], prec),
        Formula::And(v) | Formula::Or(v) => {
            let (my, sep) = if matches!(f, Formula::And(_)) { (PREC_AND, " & ") } else { (PREC_OR, " | ") };
            let paren = prec >= my;
            if paren {
                out.push('(');
            }
            for (i, c) in v.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                write_formula(out, c, my);
            }
            if paren {
                out.push(')');
            }
        }
        Formula::Quant(q, x, g) => {
            match q {
                Quantifier::Forall => out.push_str("forall "),
                Quantifier::Exists => out.push_str("exists "),
                Quantifier::AtLeast(n) => out.push_str(&format!("atleast {n} ")),
                Quantifier::AllBut(n) => out.push_str(&format!("allbut {n} ")),
                Quantifier::ForallPred(_) => out.push_str("forall2 "),
                Quantifier::ExistsPred(_) => out.push_str("exists2 "),
            }
            out.push_str(x);
            if let Quantifier::ForallPred(a) | Quantifier::ExistsPred(a) = q {
                if *a != 1 && !g.has_free_pred(x) {
                    out.push_str(&format!("/{a}"));
                }
            }
            out.push_str(". ");
            if g.is_atomic() {
                write_formula(out, g, PREC_UNARY);
            } else {
                out.push('(');
                write_formula(out, g, PREC_IFF);
                out.push(')');
            }
        }
    }
}

/// Print in surface syntax; `parse(&print(f))` gives back `f` up to the
/// flattening of nested conjunctions and disjunctions.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, PREC_IFF);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
