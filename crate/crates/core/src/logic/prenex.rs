use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::{fresh_name, Formula, Sentence};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists(String),
    Forall(String),
    ExistsSet(String),
    ForallSet(String),
}

impl Quantifier {
    pub fn var(&self) -> &str {
        match self {
            Quantifier::Exists(x) | Quantifier::Forall(x) | Quantifier::ExistsSet(x) | Quantifier::ForallSet(x) => x,
        }
    }

    pub fn is_set(&self) -> bool {
        matches!(self, Quantifier::ExistsSet(_) | Quantifier::ForallSet(_))
    }

    pub fn is_exists(&self) -> bool {
        matches!(self, Quantifier::Exists(_) | Quantifier::ExistsSet(_))
    }

    pub fn dual(&self) -> Quantifier {
        match self.clone() {
            Quantifier::Exists(x) => Quantifier::Forall(x),
            Quantifier::Forall(x) => Quantifier::Exists(x),
            Quantifier::ExistsSet(x) => Quantifier::ForallSet(x),
            Quantifier::ForallSet(x) => Quantifier::ExistsSet(x),
        }
    }

    pub fn wrap(&self, body: Formula) -> Formula {
        match self.clone() {
            Quantifier::Exists(x) => Formula::exists(x, body),
            Quantifier::Forall(x) => Formula::forall(x, body),
            Quantifier::ExistsSet(x) => Formula::exists_set(x, body),
            Quantifier::ForallSet(x) => Formula::forall_set(x, body),
        }
    }
}

/// Splits the leading quantifier block from a formula.
pub fn split_prefix(f: &Formula) -> (Vec<Quantifier>, &Formula) {
    let mut prefix = Vec::new();
    let mut cur = f;
    loop {
        cur = match cur {
            Formula::Exists(x, g) => {
                prefix.push(Quantifier::Exists(x.clone()));
                g
            }
            Formula::Forall(x, g) => {
                prefix.push(Quantifier::Forall(x.clone()));
                g
            }
            Formula::ExistsSet(x, g) => {
                prefix.push(Quantifier::ExistsSet(x.clone()));
                g
            }
            Formula::ForallSet(x, g) => {
                prefix.push(Quantifier::ForallSet(x.clone()));
                g
            }
            _ => return (prefix, cur),
        };
    }
}

pub fn wrap_prefix(prefix: &[Quantifier], matrix: Formula) -> Formula {
    prefix.iter().rev().fold(matrix, |acc, q| q.wrap(acc))
}

// Expands `<->` whose sides carry quantifiers.
fn expand_iff(f: &Formula) -> Formula {
    match f {
        Formula::Iff(a, b) if !(a.is_quantifier_free() && b.is_quantifier_free()) => {
            let (a, b) = (expand_iff(a), expand_iff(b));
            Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
        }
        Formula::Iff(a, b) => Formula::iff(expand_iff(a), expand_iff(b)),
        Formula::Not(a) => Formula::not(expand_iff(a)),
        Formula::And(a, b) => Formula::and(expand_iff(a), expand_iff(b)),
        Formula::Or(a, b) => Formula::or(expand_iff(a), expand_iff(b)),
        Formula::Implies(a, b) => Formula::implies(expand_iff(a), expand_iff(b)),
        Formula::Exists(x, a) => Formula::exists(x.clone(), expand_iff(a)),
        Formula::Forall(x, a) => Formula::forall(x.clone(), expand_iff(a)),
        Formula::ExistsSet(x, a) => Formula::exists_set(x.clone(), expand_iff(a)),
        Formula::ForallSet(x, a) => Formula::forall_set(x.clone(), expand_iff(a)),
        _ => f.clone(),
    }
}

/// Gives every binder a distinct name, also distinct from free variables.
pub fn rename_apart(f: &Formula) -> Formula {
    let mut used: BTreeSet<String> = f.free_vars();
    used.extend(f.free_set_vars());
    go(f, &mut used)
}

fn go(f: &Formula, used: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::Not(a) => Formula::not(go(a, used)),
        Formula::And(a, b) => {
            let a = go(a, used);
            Formula::and(a, go(b, used))
        }
        Formula::Or(a, b) => {
            let a = go(a, used);
            Formula::or(a, go(b, used))
        }
        Formula::Implies(a, b) => {
            let a = go(a, used);
            Formula::implies(a, go(b, used))
        }
        Formula::Iff(a, b) => {
            let a = go(a, used);
            Formula::iff(a, go(b, used))
        }
        Formula::Exists(x, a) | Formula::Forall(x, a) => {
            let mut avoid = used.clone();
            avoid.extend(a.all_names());
            let y = if used.contains(x) { fresh_name(x, &avoid) } else { x.clone() };
            used.insert(y.clone());
            let body = if &y == x { (**a).clone() } else { a.rename_free(x, &y) };
            let body = go(&body, used);
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(y, body)
            } else {
                Formula::forall(y, body)
            }
        }
        Formula::ExistsSet(x, a) | Formula::ForallSet(x, a) => {
            let mut avoid = used.clone();
            avoid.extend(a.all_names());
            let y = if used.contains(x) { fresh_name(x, &avoid) } else { x.clone() };
            used.insert(y.clone());
            let body = if &y == x { (**a).clone() } else { a.rename_free_set(x, &y) };
            let body = go(&body, used);
            if matches!(f, Formula::ExistsSet(..)) {
                Formula::exists_set(y, body)
            } else {
                Formula::forall_set(y, body)
            }
        }
        _ => f.clone(),
    }
}

fn pull(f: &Formula) -> Result<(Vec<Quantifier>, Formula)> {
    Ok(match f {
        Formula::Exists(..) | Formula::Forall(..) | Formula::ExistsSet(..) | Formula::ForallSet(..) => {
            let (mut prefix, body) = split_prefix(f);
            let (inner, m) = pull(body)?;
            prefix.extend(inner);
            (prefix, m)
        }
        Formula::Not(a) => {
            let (p, m) = pull(a)?;
            (p.iter().map(Quantifier::dual).collect(), Formula::not(m))
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let (mut pa, ma) = pull(a)?;
            let (pb, mb) = pull(b)?;
            let crosses = |p: &[Quantifier], other: &Formula| {
                p.iter().any(|q| !q.is_set()) && other.has_at_most_one()
            };
            if crosses(&pa, &mb) || crosses(&pb, &ma) {
                return Err(Error::PseudoAtom(
                    "atmostone may not cross a first-order quantifier during prenexing".into(),
                ));
            }
            let m = match f {
                Formula::And(..) => Formula::and(ma, mb),
                Formula::Or(..) => Formula::or(ma, mb),
                _ => {
                    pa = pa.iter().map(Quantifier::dual).collect();
                    Formula::implies(ma, mb)
                }
            };
            pa.extend(pb);
            (pa, m)
        }
        _ => (Vec::new(), f.clone()),
    })
}

/// Prenex normal form of a formula; bound variables are renamed apart first
/// (`z` becomes `z1`, `z2`, … on a clash).
pub fn prenex_formula(f: &Formula) -> Result<Formula> {
    let (p, m) = pull(&rename_apart(&expand_iff(f)))?;
    Ok(wrap_prefix(&p, m))
}

pub fn prenex(s: &Sentence) -> Result<Sentence> {
    Ok(Sentence {
        alphabet: s.alphabet.clone(),
        body: prenex_formula(&s.body)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_sentence;

    #[test]
    fn prenex_input_is_unchanged() {
        let s = parse_sentence("alphabet W L\nE2 X. A z. E y. X(z) | L(y)").unwrap();
        assert_eq!(prenex(&s).unwrap(), s);
    }

    #[test]
    fn pulls_and_renames() {
        let s = parse_sentence("alphabet W L\n(E z. L(z)) & !(E z. W(z))").unwrap();
        let p = prenex(&s).unwrap();
        let (prefix, m) = split_prefix(&p.body);
        assert_eq!(
            prefix,
            vec![Quantifier::Exists("z".into()), Quantifier::Forall("z1".into())]
        );
        assert!(m.is_quantifier_free());
    }

    #[test]
    fn implication_dualizes_antecedent() {
        let s = parse_sentence("alphabet W L\n(A2 X. E z. X(z)) -> (E y. L(y))").unwrap();
        let p = prenex(&s).unwrap();
        let (prefix, _) = split_prefix(&p.body);
        assert_eq!(
            prefix,
            vec![
                Quantifier::ExistsSet("X".into()),
                Quantifier::Forall("z".into()),
                Quantifier::Exists("y".into())
            ]
        );
    }

    #[test]
    fn pseudo_atom_may_not_cross() {
        let s = parse_sentence("alphabet W L\nE2 X. atmostone(X) & (E z. X(z))").unwrap();
        assert!(matches!(prenex(&s), Err(Error::PseudoAtom(_))));
        let ok = parse_sentence("alphabet W L\nE2 X. A z. atmostone(X) & X(z)").unwrap();
        assert!(prenex(&ok).is_ok());
    }
}
