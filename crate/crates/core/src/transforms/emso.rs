//! The two-block normal form `∃X̄ ((∀z ψ₁(z)) ∧ (∃z̄ ψ₂(z̄)))` and its
//! closure under union, intersection and projection.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::grid::{check_same, Alphabet, ColorId, Projection};
use crate::logic::{emso_normal_parts, rename_apart, Atom, Formula, NameSupply, Sentence, Term};

#[derive(Clone, Debug, PartialEq)]
pub struct EmsoNormal {
    pub alphabet: Alphabet,
    pub sets: Vec<String>,
    pub univ: String,
    pub univ_matrix: Formula,
    pub exist: Vec<String>,
    pub exist_matrix: Formula,
}

impl EmsoNormal {
    pub fn from_sentence(s: &Sentence) -> Result<Self> {
        let (sets, univ, m1, exist, m2) = emso_normal_parts(&s.body).ok_or_else(|| {
            Error::WrongFragment("expected ∃X̄ ((∀z ψ₁) & (∃z̄ ψ₂)) with quantifier-free ψ₁, ψ₂".into())
        })?;
        Ok(EmsoNormal {
            alphabet: s.alphabet.clone(),
            sets,
            univ,
            univ_matrix: m1.clone(),
            exist,
            exist_matrix: m2.clone(),
        })
    }

    pub fn to_sentence(&self) -> Sentence {
        let left = Formula::forall(self.univ.clone(), self.univ_matrix.clone());
        let right = self.exist_matrix.clone().existss(self.exist.iter().cloned());
        let body = Formula::and(left, right).exists_sets(self.sets.iter().cloned());
        Sentence::new_unchecked(self.alphabet.clone(), body)
    }

    fn names(&self) -> BTreeSet<String> {
        let mut s = self.to_sentence().body.all_names();
        s.extend(self.alphabet.names().iter().cloned());
        s
    }

    fn rename_sets(&mut self, to: &[String]) {
        for (from, to) in self.sets.clone().iter().zip(to) {
            self.univ_matrix = self.univ_matrix.rename_free_set(from, to);
            self.exist_matrix = self.exist_matrix.rename_free_set(from, to);
        }
        self.sets = to[..self.sets.len()].to_vec();
    }

    fn rename_univ(&mut self, to: &str) {
        self.univ_matrix = self.univ_matrix.rename_free(&self.univ, to);
        self.univ = to.to_string();
    }

    fn rename_exist(&mut self, to: &[String]) {
        for (from, to) in self.exist.clone().iter().zip(to) {
            self.exist_matrix = self.exist_matrix.rename_free(from, to);
        }
        self.exist = to[..self.exist.len()].to_vec();
    }
}

fn supply(a: &EmsoNormal, b: &EmsoNormal) -> NameSupply {
    let mut used = a.names();
    used.extend(b.names());
    NameSupply::new(used)
}

/// Union of the model sets. A plane-or-empty set variable selects which
/// operand's matrices apply; the operands share their set variables after
/// padding, as in the classical construction.
pub fn union_emso(s1: &Sentence, s2: &Sentence) -> Result<Sentence> {
    check_same(&s1.alphabet, &s2.alphabet)?;
    let mut a = EmsoNormal::from_sentence(s1)?;
    let mut b = EmsoNormal::from_sentence(s2)?;
    let mut names = supply(&a, &b);
    let n = a.sets.len().max(b.sets.len());
    let shared: Vec<String> = (0..n).map(|_| names.fresh("X")).collect();
    let z = names.fresh("z");
    let q = a.exist.len().max(b.exist.len()).max(1);
    let ex: Vec<String> = (0..q).map(|_| names.fresh("y")).collect();
    let x = names.fresh("X");
    for side in [&mut a, &mut b] {
        let own = side.sets.len();
        side.rename_sets(&shared);
        side.rename_univ(&z);
        side.rename_exist(&ex);
        // Padding sets are forced empty.
        let pads = shared[own..].iter().map(|d| Formula::not(Formula::in_set(d, Term::var(&z))));
        side.univ_matrix = Formula::and_all(std::iter::once(side.univ_matrix.clone()).chain(pads));
    }
    let sel = |t: Term| Formula::in_set(&x, t);
    let univ_matrix = Formula::and_all([
        Formula::iff(sel(Term::var(&z)), sel(Term::at(&z, 0, 1))),
        Formula::iff(sel(Term::var(&z)), sel(Term::at(&z, 1, 0))),
        Formula::implies(sel(Term::var(&z)), a.univ_matrix),
        Formula::implies(Formula::not(sel(Term::var(&z))), b.univ_matrix),
    ]);
    let exist_matrix = Formula::or(
        Formula::and(sel(Term::var(&ex[0])), a.exist_matrix),
        Formula::and(Formula::not(sel(Term::var(&ex[0]))), b.exist_matrix),
    );
    let mut sets = vec![x];
    sets.extend(shared);
    Ok(EmsoNormal {
        alphabet: s1.alphabet.clone(),
        sets,
        univ: z,
        univ_matrix,
        exist: ex,
        exist_matrix,
    }
    .to_sentence())
}

/// Intersection of the model sets: operands renamed apart and conjoined blockwise.
pub fn intersect_emso(s1: &Sentence, s2: &Sentence) -> Result<Sentence> {
    check_same(&s1.alphabet, &s2.alphabet)?;
    let mut a = EmsoNormal::from_sentence(s1)?;
    let mut b = EmsoNormal::from_sentence(s2)?;
    let mut names = supply(&a, &b);
    let sets_a: Vec<String> = a.sets.iter().map(|_| names.fresh("X")).collect();
    let sets_b: Vec<String> = b.sets.iter().map(|_| names.fresh("X")).collect();
    let ex_a: Vec<String> = a.exist.iter().map(|_| names.fresh("y")).collect();
    let ex_b: Vec<String> = b.exist.iter().map(|_| names.fresh("y")).collect();
    let z = names.fresh("z");
    a.rename_sets(&sets_a);
    b.rename_sets(&sets_b);
    a.rename_exist(&ex_a);
    b.rename_exist(&ex_b);
    a.rename_univ(&z);
    b.rename_univ(&z);
    Ok(EmsoNormal {
        alphabet: s1.alphabet.clone(),
        sets: sets_a.into_iter().chain(sets_b).collect(),
        univ: z,
        univ_matrix: Formula::and(a.univ_matrix, b.univ_matrix),
        exist: ex_a.into_iter().chain(ex_b).collect(),
        exist_matrix: Formula::and(a.exist_matrix, b.exist_matrix),
    }
    .to_sentence())
}

fn replace_colors(f: &Formula, by: &dyn Fn(ColorId, &Term) -> Formula) -> Formula {
    f.map_atoms(&mut |g| match g {
        Formula::Atom(Atom::ColorAt(c, t)) => Some(by(*c, t)),
        _ => None,
    })
}

/// Sentence over `pi`'s target alphabet whose models are the images of the
/// models of `s`: one set variable per source color encodes a preimage.
pub fn project_formula(pi: &Projection, s: &Sentence) -> Result<Sentence> {
    check_same(pi.source(), &s.alphabet)?;
    let mut used = s.body.all_names();
    used.extend(pi.source().names().iter().cloned());
    used.extend(pi.target().names().iter().cloned());
    let mut names = NameSupply::new(used);
    let ys: Vec<String> = pi.source().ids().map(|_| names.fresh("C")).collect();
    let partition = |z: &str| {
        let v = Term::var(z);
        let mut parts = vec![Formula::or_all(ys.iter().map(|y| Formula::in_set(y, v.clone())))];
        for i in 0..ys.len() {
            for j in i + 1..ys.len() {
                parts.push(Formula::or(
                    Formula::not(Formula::in_set(&ys[i], v.clone())),
                    Formula::not(Formula::in_set(&ys[j], v.clone())),
                ));
            }
        }
        for (c, y) in ys.iter().enumerate() {
            parts.push(Formula::implies(
                Formula::in_set(y, v.clone()),
                Formula::color(pi.apply(c as ColorId), v.clone()),
            ));
        }
        Formula::and_all(parts)
    };
    let by = |c: ColorId, t: &Term| Formula::in_set(&ys[c as usize], t.clone());
    if let Ok(n) = EmsoNormal::from_sentence(s) {
        let out = EmsoNormal {
            alphabet: pi.target().clone(),
            sets: ys.iter().cloned().chain(n.sets.iter().cloned()).collect(),
            univ_matrix: Formula::and(partition(&n.univ), replace_colors(&n.univ_matrix, &by)),
            univ: n.univ,
            exist: n.exist,
            exist_matrix: replace_colors(&n.exist_matrix, &by),
        };
        return Ok(out.to_sentence());
    }
    let z = names.fresh("z");
    let body = Formula::and(Formula::forall(z.clone(), partition(&z)), replace_colors(&s.body, &by))
        .exists_sets(ys.iter().cloned());
    Sentence::new(pi.target().clone(), body)
}

/// Moves the leading existential set variables of `s` into the alphabet.
///
/// The result is a sentence over `Q × {0,1}ⁿ`, with color `(c, b)` named
/// `c_b₁…bₙ`, together with the projection back to `Q`. A configuration over
/// `Q` satisfies `s` iff some decoration of it satisfies the result.
pub fn colors_to_sets(s: &Sentence) -> Result<(Sentence, Projection)> {
    let renamed = rename_apart(&s.body);
    let mut sets = Vec::new();
    let mut cur = &renamed;
    while let Formula::ExistsSet(x, g) = cur {
        sets.push(x.clone());
        cur = g;
    }
    let n = sets.len();
    let mut pseudo = false;
    cur.visit(&mut |g| pseudo |= matches!(g, Formula::AtMostOne(x) if sets.contains(x)));
    if pseudo {
        return Err(Error::PseudoAtom("atmostone on a set variable moved into the alphabet".into()));
    }
    if n > 8 {
        return Err(Error::Invalid(format!("{n} set variables give too large an alphabet")));
    }
    let q = s.alphabet.len();
    if q << n > 256 {
        return Err(Error::Invalid("decorated alphabet exceeds 256 colors".into()));
    }
    let mut names = Vec::with_capacity(q << n);
    let mut map = Vec::with_capacity(q << n);
    for c in s.alphabet.ids() {
        for bits in 0..1usize << n {
            let suffix: String = (0..n).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect();
            names.push(if n == 0 {
                s.alphabet.name(c).to_string()
            } else {
                format!("{}_{}", s.alphabet.name(c), suffix)
            });
            map.push(c);
        }
    }
    let target = Alphabet::new(names)?;
    let decorated = |c: ColorId, bits: usize| (c as usize * (1 << n) + bits) as ColorId;
    let body = cur.map_atoms(&mut |g| match g {
        Formula::Atom(Atom::ColorAt(c, t)) => Some(Formula::or_all(
            (0..1usize << n).map(|b| Formula::color(decorated(*c, b), t.clone())),
        )),
        Formula::Atom(Atom::InSet(x, t)) => {
            let i = sets.iter().rposition(|y| y == x)?;
            Some(Formula::or_all(s.alphabet.ids().flat_map(|c| {
                (0..1usize << n)
                    .filter(move |b| b >> i & 1 == 1)
                    .map(move |b| Formula::color(decorated(c, b), t.clone()))
            })))
        }
        _ => None,
    });
    let pi = Projection::new(target.clone(), s.alphabet.clone(), map)?;
    Ok((Sentence::new(target, body)?, pi))
}
