use crate::error::{Error, Result};
use crate::logic::{Atom, Formula};

/// A possibly negated atom (`Formula::Atom` or `Formula::AtMostOne`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub positive: bool,
    pub atom: Formula,
}

impl Lit {
    pub fn pos(atom: Formula) -> Lit {
        Lit { positive: true, atom }
    }

    pub fn neg(atom: Formula) -> Lit {
        Lit { positive: false, atom }
    }

    pub fn negated(&self) -> Lit {
        Lit {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }

    pub fn to_formula(&self) -> Formula {
        if self.positive {
            self.atom.clone()
        } else {
            Formula::not(self.atom.clone())
        }
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match &self.atom {
            Formula::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// Element variables mentioned by the literal.
    pub fn vars(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.atom.terms().into_iter().map(|t| t.var.as_str()).collect();
        v.dedup();
        v
    }
}

pub type Clause = Vec<Lit>;

/// Clause list of a quantifier-free formula. `True` yields no clause and
/// `False` the empty clause. Tautological clauses are kept.
pub fn cnf_clauses(f: &Formula) -> Result<Vec<Clause>> {
    if !f.is_quantifier_free() {
        return Err(Error::WrongFragment("CNF needs a quantifier-free matrix".into()));
    }
    Ok(clauses(f, true))
}

fn clauses(f: &Formula, positive: bool) -> Vec<Clause> {
    match (f, positive) {
        (Formula::True, true) | (Formula::False, false) => Vec::new(),
        (Formula::True, false) | (Formula::False, true) => vec![Vec::new()],
        (Formula::Atom(_) | Formula::AtMostOne(_), _) => vec![vec![Lit {
            positive,
            atom: f.clone(),
        }]],
        (Formula::Not(a), _) => clauses(a, !positive),
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            let mut v = clauses(a, positive);
            v.extend(clauses(b, positive));
            v
        }
        (Formula::Or(a, b), true) | (Formula::And(a, b), false) => product(clauses(a, positive), clauses(b, positive)),
        (Formula::Implies(a, b), true) => product(clauses(a, false), clauses(b, true)),
        (Formula::Implies(a, b), false) => {
            let mut v = clauses(a, true);
            v.extend(clauses(b, false));
            v
        }
        (Formula::Iff(a, b), true) => {
            // (¬a ∨ b) ∧ (a ∨ ¬b)
            let mut v = product(clauses(a, false), clauses(b, true));
            v.extend(product(clauses(a, true), clauses(b, false)));
            v
        }
        (Formula::Iff(a, b), false) => {
            // (a ∨ b) ∧ (¬a ∨ ¬b)
            let mut v = product(clauses(a, true), clauses(b, true));
            v.extend(product(clauses(a, false), clauses(b, false)));
            v
        }
        _ => unreachable!("quantifier-free input"),
    }
}

fn product(a: Vec<Clause>, b: Vec<Clause>) -> Vec<Clause> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in &a {
        for y in &b {
            let mut c = x.clone();
            c.extend(y.iter().cloned());
            out.push(c);
        }
    }
    out
}

pub fn clause_formula(c: &[Lit]) -> Formula {
    Formula::or_all(c.iter().map(Lit::to_formula))
}

/// Left-nested conjunction of left-nested disjunctions.
pub fn from_clauses(cs: &[Clause]) -> Formula {
    Formula::and_all(cs.iter().map(|c| clause_formula(c)))
}

/// Conjunctive normal form of a quantifier-free formula.
pub fn to_cnf(matrix: &Formula) -> Result<Formula> {
    Ok(from_clauses(&cnf_clauses(matrix)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Alphabet;
    use crate::logic::parse_formula;

    fn f(src: &str) -> Formula {
        let a = Alphabet::new(["a", "b", "c"]).unwrap();
        parse_formula(src, &a, &["z"]).unwrap()
    }

    #[test]
    fn distributes() {
        assert_eq!(to_cnf(&f("a(z) | (b(z) & c(z))")).unwrap(), f("(a(z) | b(z)) & (a(z) | c(z))"));
    }

    #[test]
    fn cnf_input_unchanged() {
        let g = f("(a(z) | !b(z)) & c(z) & (!a(z) | b(z) | c(z))");
        assert_eq!(to_cnf(&g).unwrap(), g);
    }

    #[test]
    fn constants() {
        assert_eq!(cnf_clauses(&f("true")).unwrap(), Vec::<Clause>::new());
        assert_eq!(cnf_clauses(&f("false")).unwrap(), vec![Vec::new()]);
        assert_eq!(to_cnf(&f("a(z) | false")).unwrap(), f("a(z)"));
    }
}
