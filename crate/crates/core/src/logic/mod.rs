//! Monadic second-order syntax over the grid signature.
//!
//! Terms are kept in canonical form: a first-order variable plus the net
//! translation of the `N`/`S`/`E`/`W` maps applied to it. Since the four maps
//! are bijective translations, two terms denote the same function iff the
//! variable and offset agree.

mod classify;
mod parse;
mod prenex;
mod print;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::grid::{Alphabet, ColorId, Offset};

pub use classify::{class_c_shape, classify, emso_normal_parts, FragmentTag, NormalParts};
pub use parse::{parse_formula, parse_sentence};
pub use prenex::{prenex, prenex_formula, rename_apart, split_prefix, wrap_prefix, Quantifier};
pub use print::{print_formula, print_sentence};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub var: String,
    pub offset: Offset,
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term {
            var: name.into(),
            offset: Offset::ZERO,
        }
    }

    pub fn at(name: impl Into<String>, dx: i32, dy: i32) -> Self {
        Term {
            var: name.into(),
            offset: Offset::new(dx, dy),
        }
    }

    pub fn shifted(&self, by: Offset) -> Term {
        Term {
            var: self.var.clone(),
            offset: self.offset + by,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    ColorAt(ColorId, Term),
    InSet(String, Term),
    Equal(Term, Term),
}

impl Atom {
    fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::ColorAt(_, t) | Atom::InSet(_, t) => vec![t],
            Atom::Equal(a, b) => vec![a, b],
        }
    }

    fn terms_mut(&mut self) -> Vec<&mut Term> {
        match self {
            Atom::ColorAt(_, t) | Atom::InSet(_, t) => vec![t],
            Atom::Equal(a, b) => vec![a, b],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    /// `|X| ≤ 1`; only meaningful for finite-domain evaluation.
    AtMostOne(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    ExistsSet(String, Box<Formula>),
    ForallSet(String, Box<Formula>),
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn color(c: ColorId, t: Term) -> Formula {
        Formula::Atom(Atom::ColorAt(c, t))
    }

    pub fn in_set(x: impl Into<String>, t: Term) -> Formula {
        Formula::Atom(Atom::InSet(x.into(), t))
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Equal(a, b))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(x: impl Into<String>, f: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(f))
    }

    pub fn forall(x: impl Into<String>, f: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(f))
    }

    pub fn exists_set(x: impl Into<String>, f: Formula) -> Formula {
        Formula::ExistsSet(x.into(), Box::new(f))
    }

    pub fn forall_set(x: impl Into<String>, f: Formula) -> Formula {
        Formula::ForallSet(x.into(), Box::new(f))
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn and_all<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` when empty.
    pub fn or_all<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    /// Wraps `self` in existential set quantifiers, outermost first.
    pub fn exists_sets<I: IntoIterator<Item = String>>(self, vars: I) -> Formula {
        let vars: Vec<String> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(self, |acc, v| Formula::exists_set(v, acc))
    }

    pub fn foralls<I: IntoIterator<Item = String>>(self, vars: I) -> Formula {
        let vars: Vec<String> = vars.into_iter().collect();
        vars.into_iter().rev().fold(self, |acc, v| Formula::forall(v, acc))
    }

    pub fn existss<I: IntoIterator<Item = String>>(self, vars: I) -> Formula {
        let vars: Vec<String> = vars.into_iter().collect();
        vars.into_iter().rev().fold(self, |acc, v| Formula::exists(v, acc))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::AtMostOne(_) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            _ => false,
        }
    }

    pub fn has_second_order_quantifier(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, Formula::ExistsSet(..) | Formula::ForallSet(..)) {
                found = true;
            }
        });
        found
    }

    pub fn has_at_most_one(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, Formula::AtMostOne(_)) {
                found = true;
            }
        });
        found
    }

    pub fn has_set_atoms(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, Formula::Atom(Atom::InSet(..)) | Formula::AtMostOne(_)) {
                found = true;
            }
        });
        found
    }

    pub fn has_equality(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, Formula::Atom(Atom::Equal(..))) {
                found = true;
            }
        });
        found
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::Not(a)
            | Formula::Exists(_, a)
            | Formula::Forall(_, a)
            | Formula::ExistsSet(_, a)
            | Formula::ForallSet(_, a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Every atom, in traversal order.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Atom>) {
            match f {
                Formula::Atom(a) => out.push(a),
                Formula::Not(a)
                | Formula::Exists(_, a)
                | Formula::Forall(_, a)
                | Formula::ExistsSet(_, a)
                | Formula::ForallSet(_, a) => go(a, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                _ => {}
            }
        }
        go(self, &mut out);
        out
    }

    /// All terms, in traversal order.
    pub fn terms(&self) -> Vec<&Term> {
        self.atoms().into_iter().flat_map(|a| a.terms()).collect()
    }

    /// Applies `f` to every term (bound or free) in place.
    pub fn map_terms<F: FnMut(&mut Term)>(&mut self, f: &mut F) {
        match self {
            Formula::Atom(a) => a.terms_mut().into_iter().for_each(&mut *f),
            Formula::Not(a)
            | Formula::Exists(_, a)
            | Formula::Forall(_, a)
            | Formula::ExistsSet(_, a)
            | Formula::ForallSet(_, a) => a.map_terms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.map_terms(f);
                b.map_terms(f);
            }
            _ => {}
        }
    }

    /// Bottom-up rewrite of atoms (including `AtMostOne`).
    pub fn map_atoms<F: FnMut(&Formula) -> Option<Formula>>(&self, f: &mut F) -> Formula {
        match self {
            Formula::Atom(_) | Formula::AtMostOne(_) => f(self).unwrap_or_else(|| self.clone()),
            Formula::True | Formula::False => self.clone(),
            Formula::Not(a) => Formula::not(a.map_atoms(f)),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
            Formula::Exists(x, a) => Formula::exists(x.clone(), a.map_atoms(f)),
            Formula::Forall(x, a) => Formula::forall(x.clone(), a.map_atoms(f)),
            Formula::ExistsSet(x, a) => Formula::exists_set(x.clone(), a.map_atoms(f)),
            Formula::ForallSet(x, a) => Formula::forall_set(x.clone(), a.map_atoms(f)),
        }
    }

    /// Free first-order variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut Vec::new(), &mut out, &mut BTreeSet::new());
        out
    }

    /// Free second-order variables.
    pub fn free_set_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut Vec::new(), &mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(
        &self,
        fo: &mut Vec<String>,
        so: &mut Vec<String>,
        out_fo: &mut BTreeSet<String>,
        out_so: &mut BTreeSet<String>,
    ) {
        match self {
            Formula::True | Formula::False => {}
            Formula::AtMostOne(x) => {
                if !so.contains(x) {
                    out_so.insert(x.clone());
                }
            }
            Formula::Atom(a) => {
                if let Atom::InSet(x, _) = a {
                    if !so.contains(x) {
                        out_so.insert(x.clone());
                    }
                }
                for t in a.terms() {
                    if !fo.contains(&t.var) {
                        out_fo.insert(t.var.clone());
                    }
                }
            }
            Formula::Not(a) => a.collect_free(fo, so, out_fo, out_so),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(fo, so, out_fo, out_so);
                b.collect_free(fo, so, out_fo, out_so);
            }
            Formula::Exists(x, a) | Formula::Forall(x, a) => {
                fo.push(x.clone());
                a.collect_free(fo, so, out_fo, out_so);
                fo.pop();
            }
            Formula::ExistsSet(x, a) | Formula::ForallSet(x, a) => {
                so.push(x.clone());
                a.collect_free(fo, so, out_fo, out_so);
                so.pop();
            }
        }
    }

    /// Every variable name used anywhere, bound or free, of either order.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Exists(x, _)
            | Formula::Forall(x, _)
            | Formula::ExistsSet(x, _)
            | Formula::ForallSet(x, _)
            | Formula::AtMostOne(x) => {
                out.insert(x.clone());
            }
            Formula::Atom(a) => {
                if let Atom::InSet(x, _) = a {
                    out.insert(x.clone());
                }
                for t in a.terms() {
                    out.insert(t.var.clone());
                }
            }
            _ => {}
        });
        out
    }

    /// Capture-avoiding substitution of the free first-order variable `x` by `t`.
    pub fn substitute(&self, x: &str, t: &Term) -> Formula {
        match self {
            Formula::Atom(a) => {
                let mut a = a.clone();
                for term in a.terms_mut() {
                    if term.var == x {
                        *term = t.shifted(term.offset);
                    }
                }
                Formula::Atom(a)
            }
            Formula::True | Formula::False | Formula::AtMostOne(_) => self.clone(),
            Formula::Not(a) => Formula::not(a.substitute(x, t)),
            Formula::And(a, b) => Formula::and(a.substitute(x, t), b.substitute(x, t)),
            Formula::Or(a, b) => Formula::or(a.substitute(x, t), b.substitute(x, t)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(x, t), b.substitute(x, t)),
            Formula::Iff(a, b) => Formula::iff(a.substitute(x, t), b.substitute(x, t)),
            Formula::Exists(y, a) | Formula::Forall(y, a) => {
                if y == x {
                    return self.clone();
                }
                let (y2, body) = if *y == t.var {
                    let mut used = a.all_names();
                    used.insert(t.var.clone());
                    used.insert(x.to_string());
                    let fresh = fresh_name(y, &used);
                    (fresh.clone(), a.rename_free(y, &fresh))
                } else {
                    (y.clone(), (**a).clone())
                };
                let body = body.substitute(x, t);
                if matches!(self, Formula::Exists(..)) {
                    Formula::exists(y2, body)
                } else {
                    Formula::forall(y2, body)
                }
            }
            Formula::ExistsSet(y, a) => Formula::exists_set(y.clone(), a.substitute(x, t)),
            Formula::ForallSet(y, a) => Formula::forall_set(y.clone(), a.substitute(x, t)),
        }
    }

    /// Renames free occurrences of the first-order variable `from` to `to`.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        self.substitute(from, &Term::var(to))
    }

    /// Renames free occurrences of the set variable `from` to `to`.
    pub fn rename_free_set(&self, from: &str, to: &str) -> Formula {
        match self {
            Formula::Atom(Atom::InSet(x, t)) if x == from => Formula::in_set(to, t.clone()),
            Formula::AtMostOne(x) if x == from => Formula::AtMostOne(to.to_string()),
            Formula::Atom(_) | Formula::AtMostOne(_) | Formula::True | Formula::False => self.clone(),
            Formula::Not(a) => Formula::not(a.rename_free_set(from, to)),
            Formula::And(a, b) => Formula::and(a.rename_free_set(from, to), b.rename_free_set(from, to)),
            Formula::Or(a, b) => Formula::or(a.rename_free_set(from, to), b.rename_free_set(from, to)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_free_set(from, to), b.rename_free_set(from, to))
            }
            Formula::Iff(a, b) => Formula::iff(a.rename_free_set(from, to), b.rename_free_set(from, to)),
            Formula::Exists(y, a) => Formula::exists(y.clone(), a.rename_free_set(from, to)),
            Formula::Forall(y, a) => Formula::forall(y.clone(), a.rename_free_set(from, to)),
            Formula::ExistsSet(y, a) | Formula::ForallSet(y, a) => {
                if y == from {
                    return self.clone();
                }
                let body = a.rename_free_set(from, to);
                if matches!(self, Formula::ExistsSet(..)) {
                    Formula::exists_set(y.clone(), body)
                } else {
                    Formula::forall_set(y.clone(), body)
                }
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

/// First name of the form `base`, `base1`, `base2`, … not in `used`.
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base } else { stem };
    if !used.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !used.contains(n) && !SHIFT_NAMES.contains(&n.as_str()))
        .expect("unbounded search")
}

/// Spelled like the shift functions, so never handed out as variable names.
const SHIFT_NAMES: [&str; 4] = ["N1", "S1", "E1", "W1"];

/// Deterministic supply of fresh variable names.
#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    used: BTreeSet<String>,
}

impl NameSupply {
    pub fn new(used: BTreeSet<String>) -> Self {
        NameSupply { used }
    }

    pub fn for_formula(f: &Formula) -> Self {
        NameSupply { used: f.all_names() }
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    /// `stem1`, `stem2`, … skipping anything already used.
    pub fn fresh(&mut self, stem: &str) -> String {
        let n = (1..)
            .map(|i| format!("{stem}{i}"))
            .find(|n| !self.used.contains(n) && !SHIFT_NAMES.contains(&n.as_str()))
            .expect("unbounded search");
        self.used.insert(n.clone());
        n
    }
}

/// A closed formula together with the alphabet its color atoms refer to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sentence {
    pub alphabet: Alphabet,
    pub body: Formula,
}

impl Sentence {
    /// Checks closedness and color indices.
    pub fn new(alphabet: Alphabet, body: Formula) -> Result<Self> {
        if let Some(x) = body.free_vars().into_iter().next() {
            return Err(Error::UnboundVariable(x));
        }
        if let Some(x) = body.free_set_vars().into_iter().next() {
            return Err(Error::UnboundVariable(x));
        }
        for a in body.atoms() {
            if let Atom::ColorAt(c, _) = a {
                if !alphabet.contains(*c) {
                    return Err(Error::UndeclaredColor(format!("#{c}")));
                }
            }
        }
        Ok(Sentence { alphabet, body })
    }

    /// Builds a sentence without the closedness check (used for open matrices in tests).
    pub fn new_unchecked(alphabet: Alphabet, body: Formula) -> Self {
        Sentence { alphabet, body }
    }

    pub fn negate(&self) -> Sentence {
        Sentence {
            alphabet: self.alphabet.clone(),
            body: Formula::not(self.body.clone()),
        }
    }
}

impl std::fmt::Display for Sentence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_sentence(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_avoids_capture() {
        // E y. x = y   with x := y@(1,0)
        let f = Formula::exists("y", Formula::eq(Term::var("x"), Term::var("y")));
        let g = f.substitute("x", &Term::at("y", 1, 0));
        match g {
            Formula::Exists(v, body) => {
                assert_ne!(v, "y");
                assert_eq!(*body, Formula::eq(Term::at("y", 1, 0), Term::var(v)));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn free_variables() {
        let f = Formula::and(
            Formula::exists("x", Formula::in_set("X", Term::var("x"))),
            Formula::eq(Term::var("x"), Term::var("y")),
        );
        assert_eq!(f.free_vars(), BTreeSet::from(["x".to_string(), "y".to_string()]));
        assert_eq!(f.free_set_vars(), BTreeSet::from(["X".to_string()]));
    }

    #[test]
    fn fresh_names_skip_used() {
        let used = BTreeSet::from(["z".to_string(), "z1".to_string()]);
        assert_eq!(fresh_name("z", &used), "z2");
        assert_eq!(fresh_name("w", &used), "w");
        let mut s = NameSupply::new(used);
        assert_eq!(s.fresh("z"), "z2");
        assert_eq!(s.fresh("z"), "z3");
    }
}
