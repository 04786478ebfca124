//! Concrete syntax for formulas.
//!
//! ```text
//! alphabet W L B
//! A z. !(L(z) & L(z@(1,0)))
//! ```
//!
//! Binders are `E x.`, `A x.` (first order, lowercase variable) and
//! `E2 X.`, `A2 X.` (second order, uppercase variable); a binder's scope
//! extends as far right as possible. Connectives by increasing binding
//! strength: `<->`, `->` (right associative), `|`, `&`, `!`. Atoms are
//! `c(t)` for a declared color `c`, `X(t)` for a bound set variable,
//! `t = t`, `atmostone(X)`, `true` and `false`. Terms are a variable,
//! `N1(t)`/`S1(t)`/`E1(t)`/`W1(t)`, or `x@(dx,dy)`.

use crate::error::{Error, Result};
use crate::grid::{Alphabet, Offset};

use super::{Formula, Sentence, Term};

#[derive(Clone, Debug, PartialEq)]
enum T {
    Ident(String),
    Int(i32),
    P(&'static str),
}

struct Lexed {
    tok: T,
    line: usize,
    column: usize,
}

const PUNCT: [&str; 11] = ["<->", "->", "(", ")", ",", ".", "@", "=", "!", "&", "|"];

fn lex(text: &str, line0: usize) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let rest: String = chars[i..].iter().take(3).collect();
            let tok = if let Some(p) = PUNCT.iter().find(|p| rest.starts_with(**p)) {
                i += p.len();
                T::P(p)
            } else if c.is_ascii_digit() || c == '-' {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                T::Int(s.parse().map_err(|_| Error::Syntax {
                    line: line0 + li,
                    column,
                    message: format!("bad integer `{s}`"),
                })?)
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                T::Ident(chars[start..i].iter().collect())
            } else {
                return Err(Error::Syntax {
                    line: line0 + li,
                    column,
                    message: format!("unexpected character `{c}`"),
                });
            };
            out.push(Lexed {
                tok,
                line: line0 + li,
                column,
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    alphabet: &'a Alphabet,
    fo: Vec<String>,
    so: Vec<String>,
}

fn is_shift(name: &str) -> Option<Offset> {
    match name {
        "N1" => Some(Offset::NORTH),
        "S1" => Some(Offset::SOUTH),
        "E1" => Some(Offset::EAST),
        "W1" => Some(Offset::WEST),
        _ => None,
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<&T> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&T> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let (line, column) = match self.toks.get(self.pos) {
            Some(t) => (t.line, t.column),
            None => self.toks.last().map_or((1, 1), |t| (t.line, t.column + 1)),
        };
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn is_p(&self, p: &str) -> bool {
        matches!(self.peek(), Some(T::P(q)) if *q == p)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.is_p(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<()> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{p}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(T::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected an identifier")),
        }
    }

    fn int(&mut self) -> Result<i32> {
        match self.peek() {
            Some(T::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut f = self.implication()?;
        while self.eat("<->") {
            let g = self.implication()?;
            f = Formula::iff(f, g);
        }
        Ok(f)
    }

    fn implication(&mut self) -> Result<Formula> {
        let f = self.disjunction()?;
        if self.eat("->") {
            let g = self.implication()?;
            return Ok(Formula::implies(f, g));
        }
        Ok(f)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat("|") {
            let g = self.conjunction()?;
            f = Formula::or(f, g);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat("&") {
            let g = self.unary()?;
            f = Formula::and(f, g);
        }
        Ok(f)
    }

    fn binder(&self) -> Option<&'static str> {
        let kw = match self.peek() {
            Some(T::Ident(s)) => s.as_str(),
            _ => return None,
        };
        let kw = ["E", "A", "E2", "A2"].into_iter().find(|k| *k == kw)?;
        match (self.peek_at(1), self.peek_at(2)) {
            (Some(T::Ident(_)), Some(T::P("."))) => Some(kw),
            _ => None,
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat("!") {
            return Ok(Formula::not(self.unary()?));
        }
        if let Some(kw) = self.binder() {
            self.pos += 1;
            let var = self.ident()?;
            self.pos += 1;
            let second = kw.ends_with('2');
            let upper = var.starts_with(|c: char| c.is_ascii_uppercase());
            if second != upper {
                self.pos -= 2;
                return Err(self.err(if second {
                    format!("set variable `{var}` must start with an uppercase letter")
                } else {
                    format!("element variable `{var}` must start with a lowercase letter")
                }));
            }
            if second {
                self.so.push(var.clone());
            } else {
                self.fo.push(var.clone());
            }
            let body = self.formula();
            if second {
                self.so.pop();
            } else {
                self.fo.pop();
            }
            let body = body?;
            return Ok(match kw {
                "E" => Formula::exists(var, body),
                "A" => Formula::forall(var, body),
                "E2" => Formula::exists_set(var, body),
                _ => Formula::forall_set(var, body),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        let name = match self.peek() {
            Some(T::Ident(s)) => s.clone(),
            _ => return Err(self.err("expected a formula")),
        };
        let call = matches!(self.peek_at(1), Some(T::P("(")));
        match name.as_str() {
            "true" if !call => {
                self.pos += 1;
                return Ok(Formula::True);
            }
            "false" if !call => {
                self.pos += 1;
                return Ok(Formula::False);
            }
            "atmostone" if call => {
                self.pos += 2;
                let x = self.ident()?;
                if !self.so.contains(&x) {
                    self.pos -= 1;
                    return Err(Error::UnboundVariable(x));
                }
                self.expect(")")?;
                return Ok(Formula::AtMostOne(x));
            }
            _ => {}
        }
        if call && is_shift(&name).is_none() {
            self.pos += 2;
            let t = self.term()?;
            self.expect(")")?;
            if let Some(c) = self.alphabet.index_of(&name) {
                return Ok(Formula::color(c, t));
            }
            if name.starts_with(|c: char| c.is_ascii_uppercase()) {
                if self.so.contains(&name) {
                    return Ok(Formula::in_set(name, t));
                }
                return Err(Error::UnboundVariable(name));
            }
            return Err(Error::UndeclaredColor(name));
        }
        let a = self.term()?;
        self.expect("=")?;
        let b = self.term()?;
        Ok(Formula::eq(a, b))
    }

    fn term(&mut self) -> Result<Term> {
        let name = self.ident()?;
        if let Some(step) = is_shift(&name) {
            if self.eat("(") {
                let t = self.term()?;
                self.expect(")")?;
                return Ok(t.shifted(step));
            }
        }
        if !name.starts_with(|c: char| c.is_ascii_lowercase()) {
            self.pos -= 1;
            return Err(self.err(format!("`{name}` is not an element variable")));
        }
        if !self.fo.contains(&name) {
            return Err(Error::UnboundVariable(name));
        }
        let mut offset = Offset::ZERO;
        if self.eat("@") {
            self.expect("(")?;
            let dx = self.int()?;
            self.expect(",")?;
            let dy = self.int()?;
            self.expect(")")?;
            offset = Offset::new(dx, dy);
        }
        Ok(Term { var: name, offset })
    }
}

fn parse_with(text: &str, line0: usize, alphabet: &Alphabet, free: &[&str]) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text, line0)?,
        pos: 0,
        alphabet,
        fo: free.iter().map(|s| s.to_string()).collect(),
        so: Vec::new(),
    };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

/// Parses a formula over `alphabet`; `free` lists element variables that may occur free.
pub fn parse_formula(text: &str, alphabet: &Alphabet, free: &[&str]) -> Result<Formula> {
    parse_with(text, 1, alphabet, free)
}

/// Parses a sentence file: an `alphabet` line followed by one closed formula.
pub fn parse_sentence(text: &str) -> Result<Sentence> {
    let mut offset = 0;
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        offset += line.len() + 1;
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        if words.next() != Some("alphabet") {
            return Err(Error::Syntax {
                line: i + 1,
                column: 1,
                message: "expected `alphabet` line".into(),
            });
        }
        let alphabet = Alphabet::new(words).map_err(|e| Error::Syntax {
            line: i + 1,
            column: 1,
            message: e.to_string(),
        })?;
        let rest = text.get(offset.min(text.len())..).unwrap_or("");
        let body = parse_with(rest, i + 2, &alphabet, &[])?;
        return Sentence::new(alphabet, body);
    }
    Err(Error::Syntax {
        line: 1,
        column: 1,
        message: "empty input".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wl() -> Alphabet {
        Alphabet::new(["W", "L", "B"]).unwrap()
    }

    #[test]
    fn parses_terms_and_precedence() {
        let f = parse_formula("A z. !(L(z) & L(z@(1,0)))", &wl(), &[]).unwrap();
        let expected = Formula::forall(
            "z",
            Formula::not(Formula::and(
                Formula::color(1, Term::var("z")),
                Formula::color(1, Term::at("z", 1, 0)),
            )),
        );
        assert_eq!(f, expected);
        let g = parse_formula("A z. L(E1(N1(z))) -> L(z) -> B(z)", &wl(), &[]).unwrap();
        let Formula::Forall(_, body) = g else { panic!() };
        let Formula::Implies(lhs, rhs) = *body else { panic!() };
        assert_eq!(*lhs, Formula::color(1, Term::at("z", 1, 1)));
        assert!(matches!(*rhs, Formula::Implies(..)));
    }

    #[test]
    fn binder_scope_extends_right() {
        let f = parse_formula("A x. A y. (L(x) & B(E1(y))) -> x = y", &wl(), &[]).unwrap();
        let Formula::Forall(_, inner) = f else { panic!() };
        let Formula::Forall(_, body) = *inner else { panic!() };
        assert!(matches!(*body, Formula::Implies(..)));
    }

    #[test]
    fn sets_and_sentences() {
        let s = parse_sentence("alphabet W L\nE2 X. A z. X(z) <-> L(N1(z)) & atmostone(X)\n").unwrap();
        assert!(s.body.has_second_order_quantifier());
        assert!(s.body.has_at_most_one());
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_formula("A z. q(z)", &wl(), &[]), Err(Error::UndeclaredColor(_))));
        assert!(matches!(parse_formula("L(z)", &wl(), &[]), Err(Error::UnboundVariable(_))));
        assert!(matches!(parse_formula("A z. X(z)", &wl(), &[]), Err(Error::UnboundVariable(_))));
        assert!(matches!(
            parse_sentence("alphabet W L\nA z. (L(z)"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(parse_formula("A Z. L(Z)", &wl(), &[]), Err(Error::Syntax { .. })));
    }
}
