//! Sentences of the form `∃X₁…∃Xₙ ∀z₁…∀z_p ψ`, `ψ` in CNF.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grid::{Alphabet, Offset};
use crate::logic::{prenex, split_prefix, Atom, Formula, NameSupply, Quantifier, Sentence, Term};
use crate::semantics::{Convention, FlagDefault};

use super::cnf::{cnf_clauses, from_clauses, Clause, Lit};
use super::Mode;

/// A class-C sentence split into prefix and clause list.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassC {
    pub alphabet: Alphabet,
    pub sets: Vec<String>,
    pub univ: Vec<String>,
    pub clauses: Vec<Clause>,
}

impl ClassC {
    pub fn from_sentence(s: &Sentence) -> Result<ClassC> {
        let p = prenex(s)?;
        let (prefix, m) = split_prefix(&p.body);
        let n = prefix.iter().take_while(|q| matches!(q, Quantifier::ExistsSet(_))).count();
        if !m.is_quantifier_free() || prefix[n..].iter().any(|q| !matches!(q, Quantifier::Forall(_))) {
            return Err(Error::WrongFragment(
                "expected ∃X₁…∃Xₙ ∀z₁…∀z_p followed by a quantifier-free matrix".into(),
            ));
        }
        Ok(ClassC {
            alphabet: s.alphabet.clone(),
            sets: prefix[..n].iter().map(|q| q.var().to_string()).collect(),
            univ: prefix[n..].iter().map(|q| q.var().to_string()).collect(),
            clauses: cnf_clauses(m)?,
        })
    }

    pub fn to_sentence(&self) -> Sentence {
        let body = from_clauses(&self.clauses)
            .foralls(self.univ.iter().cloned())
            .exists_sets(self.sets.iter().cloned());
        Sentence::new_unchecked(self.alphabet.clone(), body)
    }

    fn names(&self) -> NameSupply {
        let mut ns = NameSupply::for_formula(&self.to_sentence().body);
        for c in self.alphabet.names() {
            ns.reserve(c);
        }
        for x in self.sets.iter().chain(&self.univ) {
            ns.reserve(x);
        }
        ns
    }
}

/// Replaces `x@u = x@v` by its truth value over the plane (`u = v`).
/// Returns `None` when the clause became true.
fn simplify_clause(c: &[Lit], notes: &mut Vec<String>, alphabet: &Alphabet) -> Option<Clause> {
    let mut out = Vec::new();
    for l in c {
        if let Some(Atom::Equal(a, b)) = l.as_atom() {
            if a.var == b.var {
                let truth = a.offset == b.offset;
                if a.offset != b.offset {
                    notes.push(format!(
                        "replaced `{}` by false (plane semantics)",
                        crate::logic::print_formula(&l.atom, alphabet)
                    ));
                }
                if truth == l.positive {
                    return None;
                }
                continue;
            }
        }
        if l.atom == Formula::True && l.positive || l.atom == Formula::False && !l.positive {
            return None;
        }
        out.push(l.clone());
    }
    Some(out)
}

fn simplify_all(c: &mut ClassC, notes: &mut Vec<String>) {
    let alphabet = c.alphabet.clone();
    c.clauses = c
        .clauses
        .iter()
        .filter_map(|cl| simplify_clause(cl, notes, &alphabet))
        .collect();
}

fn drop_unused_universals(c: &mut ClassC) {
    let used: Vec<bool> = c
        .univ
        .iter()
        .map(|z| c.clauses.iter().flatten().any(|l| l.vars().contains(&z.as_str())))
        .collect();
    let mut i = 0;
    c.univ.retain(|_| {
        i += 1;
        used[i - 1]
    });
}

fn eliminate_in(c: &mut ClassC, notes: &mut Vec<String>) {
    let alphabet = c.alphabet.clone();
    let mut out = Vec::new();
    for clause in &c.clauses {
        let mut clause = clause.clone();
        loop {
            let pos = clause.iter().position(|l| {
                !l.positive && matches!(l.as_atom(), Some(Atom::Equal(a, b)) if a.var != b.var)
            });
            let Some(i) = pos else { break };
            let Some(Atom::Equal(a, b)) = clause[i].as_atom().cloned() else { unreachable!() };
            clause.remove(i);
            // a = b  ⟺  b.var = a.var@(a.offset − b.offset)
            let t = Term {
                var: a.var.clone(),
                offset: a.offset - b.offset,
            };
            for l in clause.iter_mut() {
                l.atom = l.atom.substitute(&b.var, &t);
            }
            match simplify_clause(&clause, notes, &alphabet) {
                Some(cl) => clause = cl,
                None => {
                    clause.clear();
                    clause.push(Lit::pos(Formula::True));
                    break;
                }
            }
        }
        if clause != [Lit::pos(Formula::True)] {
            out.push(clause);
        }
    }
    c.clauses = out;
    drop_unused_universals(c);
}

/// A rewritten sentence plus notes on plane-only simplifications.
#[derive(Clone, Debug)]
pub struct Rewrite {
    pub sentence: Sentence,
    /// Set variables that need window defaults (concrete gadgets).
    pub flags: BTreeMap<String, FlagDefault>,
    pub notes: Vec<String>,
}

impl Rewrite {
    /// Window convention under which the gadget variables behave as on the plane.
    pub fn window_convention(&self) -> Convention {
        Convention::WindowFlagged(self.flags.clone())
    }
}

/// Removes every disequality between distinct variables by substitution.
pub fn eliminate_disequality(s: &Sentence) -> Result<Rewrite> {
    let mut c = ClassC::from_sentence(s)?;
    let mut notes = Vec::new();
    let before = c.clone();
    simplify_all(&mut c, &mut notes);
    eliminate_in(&mut c, &mut notes);
    let sentence = if c == before { s.clone() } else { c.to_sentence() };
    Ok(Rewrite {
        sentence,
        flags: BTreeMap::new(),
        notes,
    })
}

struct Analysis {
    eps: Vec<Lit>,
    eqs: Vec<(String, Offset)>,
    theta: Vec<Lit>,
}

fn analyze(clause: &[Lit], zp: &str) -> Result<Option<Analysis>> {
    if !clause.iter().any(|l| l.vars().contains(&zp)) {
        return Ok(None);
    }
    let mut a = Analysis {
        eps: Vec::new(),
        eqs: Vec::new(),
        theta: Vec::new(),
    };
    for l in clause {
        let vars = l.vars();
        if !vars.contains(&zp) {
            a.theta.push(l.clone());
        } else if vars == [zp] {
            a.eps.push(l.clone());
        } else {
            match l.as_atom() {
                Some(Atom::Equal(s, t)) if l.positive => {
                    // zp@u = k@v  ⟺  zp = k@(v − u)
                    let (own, other) = if s.var == zp { (s, t) } else { (t, s) };
                    a.eqs.push((other.var.clone(), other.offset - own.offset));
                }
                _ => {
                    return Err(Error::Invalid(
                        "disequality between distinct variables left in clause".into(),
                    ))
                }
            }
        }
    }
    Ok(Some(a))
}

fn set_lit(positive: bool, x: &str, t: Term) -> Lit {
    Lit {
        positive,
        atom: Formula::in_set(x, t),
    }
}

/// Reduces the universal block of a class-C sentence to one variable.
///
/// For a clause `ε(z_p) ∨ ⋁ₗ z_p = z_{kₗ}@wₗ ∨ θ` the innermost variable is
/// removed by a three-way case split on the size of `{z : ¬ε(z)}`, selected by
/// two plane-or-empty set variables `X`, `Y`:
/// `X` = all: `θ` holds everywhere; `X` = ∅, `Y` = all: `ε` holds everywhere;
/// both empty: `m` at-most-one sets `Sⱼ` cover `¬ε`, and each `Sⱼ` must hit one
/// of the `m` equality targets wherever `θ` fails. Without equalities only
/// `X` is needed.
pub fn reduce_universals(s: &Sentence, mode: Mode) -> Result<Rewrite> {
    let mut c = ClassC::from_sentence(s)?;
    if c.univ.len() == 1 {
        return Ok(Rewrite {
            sentence: s.clone(),
            flags: BTreeMap::new(),
            notes: Vec::new(),
        });
    }
    let mut notes = Vec::new();
    let mut flags = BTreeMap::new();
    simplify_all(&mut c, &mut notes);
    eliminate_in(&mut c, &mut notes);
    let mut names = c.names();
    if c.univ.is_empty() {
        c.univ.push(names.fresh("z"));
    }
    let z1 = c.univ[0].clone();
    let at = |v: &str, dx: i32, dy: i32| Term::at(v, dx, dy);
    let mut units: Vec<String> = Vec::new();

    while c.univ.len() > 1 {
        let zp = c.univ.pop().expect("at least two universals");
        let mut out = Vec::new();
        for clause in &c.clauses {
            let Some(a) = analyze(clause, &zp)? else {
                out.push(clause.clone());
                continue;
            };
            let eps: Vec<Lit> = a
                .eps
                .iter()
                .map(|l| Lit {
                    positive: l.positive,
                    atom: l.atom.rename_free(&zp, &z1),
                })
                .collect();
            let x = names.fresh("X");
            c.sets.push(x.clone());
            for v in [at(&z1, 0, 1), at(&z1, 1, 0)] {
                out.push(vec![set_lit(false, &x, Term::var(&z1)), set_lit(true, &x, v.clone())]);
                out.push(vec![set_lit(true, &x, Term::var(&z1)), set_lit(false, &x, v)]);
            }
            // X = everything: θ must hold for every choice of the other variables.
            let mut ca = vec![set_lit(false, &x, Term::var(&z1))];
            ca.extend(a.theta.iter().cloned());
            out.push(ca);
            if a.eqs.is_empty() {
                let mut cb = vec![set_lit(true, &x, Term::var(&z1))];
                cb.extend(eps.iter().cloned());
                out.push(cb);
                continue;
            }
            let y = names.fresh("Y");
            c.sets.push(y.clone());
            for v in [at(&z1, 0, 1), at(&z1, 1, 0)] {
                out.push(vec![set_lit(false, &y, Term::var(&z1)), set_lit(true, &y, v.clone())]);
                out.push(vec![set_lit(true, &y, Term::var(&z1)), set_lit(false, &y, v)]);
            }
            // X = ∅, Y = everything: ε holds everywhere.
            let mut cb = vec![set_lit(true, &x, Term::var(&z1)), set_lit(false, &y, Term::var(&z1))];
            cb.extend(eps.iter().cloned());
            out.push(cb);
            // X = Y = ∅: the sets Sⱼ cover ¬ε, lie inside ¬ε, and each hits a target.
            let ss: Vec<String> = (0..a.eqs.len()).map(|_| names.fresh("S")).collect();
            c.sets.extend(ss.iter().cloned());
            units.extend(ss.iter().cloned());
            for sj in &ss {
                for e in &eps {
                    out.push(vec![set_lit(false, sj, Term::var(&z1)), e.negated()]);
                }
            }
            let mut cover = vec![set_lit(true, &x, Term::var(&z1)), set_lit(true, &y, Term::var(&z1))];
            cover.extend(eps.iter().cloned());
            cover.extend(ss.iter().map(|sj| set_lit(true, sj, Term::var(&z1))));
            out.push(cover);
            for sj in &ss {
                let mut hit = vec![set_lit(true, &x, Term::var(&z1)), set_lit(true, &y, Term::var(&z1))];
                hit.extend(a.theta.iter().cloned());
                hit.extend(a.eqs.iter().map(|(k, w)| set_lit(true, sj, Term { var: k.clone(), offset: *w })));
                out.push(hit);
            }
        }
        c.clauses = out;
    }

    for sj in units {
        match mode {
            Mode::Abstract => c.clauses.push(vec![Lit::pos(Formula::AtMostOne(sj))]),
            Mode::Concrete => {
                let a = names.fresh("A");
                c.sets.push(a.clone());
                flags.insert(a.clone(), FlagDefault::GADGET);
                c.clauses.extend(singleton_gadget(&sj, &a, &z1));
            }
        }
    }
    Ok(Rewrite {
        sentence: c.to_sentence(),
        flags,
        notes,
    })
}

/// Clauses of `A(x) ⟺ A(N x) ∧ A(E x)` and `S(x) ⟺ A(x) ∧ ¬A(S x) ∧ ¬A(W x)`.
pub fn singleton_gadget(s: &str, a: &str, x: &str) -> Vec<Clause> {
    let t = |dx, dy| Term::at(x, dx, dy);
    vec![
        vec![set_lit(false, a, t(0, 0)), set_lit(true, a, t(0, 1))],
        vec![set_lit(false, a, t(0, 0)), set_lit(true, a, t(1, 0))],
        vec![set_lit(true, a, t(0, 0)), set_lit(false, a, t(0, 1)), set_lit(false, a, t(1, 0))],
        vec![set_lit(false, s, t(0, 0)), set_lit(true, a, t(0, 0))],
        vec![set_lit(false, s, t(0, 0)), set_lit(false, a, t(0, -1))],
        vec![set_lit(false, s, t(0, 0)), set_lit(false, a, t(-1, 0))],
        vec![
            set_lit(true, s, t(0, 0)),
            set_lit(false, a, t(0, 0)),
            set_lit(true, a, t(0, -1)),
            set_lit(true, a, t(-1, 0)),
        ],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::all_tori;
    use crate::logic::{classify, parse_sentence, FragmentTag};
    use crate::semantics::eval_torus;

    fn same_on_tori(a: &Sentence, b: &Sentence, max: u32) {
        for w in 1..=max {
            for h in 1..=max {
                for t in all_tori(&a.alphabet, w, h) {
                    assert_eq!(eval_torus(a, &t).unwrap(), eval_torus(b, &t).unwrap(), "{w}x{h} {:?}", t.cells());
                }
            }
        }
    }

    #[test]
    fn disequality_example() {
        let s = parse_sentence("alphabet W L B\nA x. A y. !(x@(1,0) = y) | B(y)").unwrap();
        let r = eliminate_disequality(&s).unwrap();
        assert_eq!(r.sentence, parse_sentence("alphabet W L B\nA x. B(x@(1,0))").unwrap());
        let t = parse_sentence("alphabet W L\nA x. A y. L(x) | W(y)").unwrap();
        assert_eq!(eliminate_disequality(&t).unwrap().sentence, t);
    }

    #[test]
    fn reduces_the_challenge_sentence() {
        let s = parse_sentence("alphabet W L B\nA x. A y. (L(x) & B(E1(y))) -> x = y").unwrap();
        let r = reduce_universals(&s, Mode::Abstract).unwrap();
        let tags = classify(&r.sentence);
        assert!(tags.iter().any(|t| matches!(t, FragmentTag::ClassC { p: 1, .. })), "{tags:?}");
        same_on_tori(&s, &r.sentence, 3);
    }

    #[test]
    fn reduces_without_equalities() {
        let s = parse_sentence("alphabet W L\nA x. A y. W(x) | W(y)").unwrap();
        let r = reduce_universals(&s, Mode::Abstract).unwrap();
        same_on_tori(&s, &r.sentence, 2);
    }

    #[test]
    fn single_universal_is_unchanged() {
        let s = parse_sentence("alphabet W L\nE2 X. A z. X(z) -> L(z)").unwrap();
        assert_eq!(reduce_universals(&s, Mode::Concrete).unwrap().sentence, s);
    }
}
