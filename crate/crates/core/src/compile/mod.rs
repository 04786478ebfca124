//! Subshifts of finite type and their projections: compilation from and to
//! sentences, and finite membership oracles.

mod members;
pub(crate) mod search;
mod text;

pub use members::{locally_admissible, sofic_admits_torus, torus_members_sft, torus_members_sofic};
pub use text::{parse_sft, parse_sofic, write_sft, write_sofic};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::grid::{check_same, occurs_at, Alphabet, ColorId, Odometer, Offset, Pattern, Projection, TorusConfig};
use crate::logic::{class_c_shape, prenex, split_prefix, Atom, Formula, NameSupply, Quantifier, Sentence, Term};
use crate::transforms::{colors_to_sets, pattern_sentinel};

/// Largest offset domain `formula_to_sft` accepts.
pub const MAX_DOMAIN: usize = 12;
/// Largest number of local assignments `formula_to_sft` enumerates.
pub const MAX_ASSIGNMENTS: u128 = 10_000_000;

/// The configurations containing none of the forbidden patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sft {
    alphabet: Alphabet,
    forbidden: BTreeSet<Pattern>,
}

impl Sft {
    pub fn new<I: IntoIterator<Item = Pattern>>(alphabet: Alphabet, forbidden: I) -> Result<Self> {
        let forbidden: BTreeSet<Pattern> = forbidden.into_iter().collect();
        for p in &forbidden {
            p.check_alphabet(&alphabet)?;
        }
        Ok(Sft { alphabet, forbidden })
    }

    pub fn full(alphabet: Alphabet) -> Self {
        Sft {
            alphabet,
            forbidden: BTreeSet::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn forbidden(&self) -> &BTreeSet<Pattern> {
        &self.forbidden
    }

    /// Plain membership test: no forbidden pattern occurs anywhere in the
    /// periodic lift of `c`.
    pub fn admits_torus(&self, c: &TorusConfig) -> Result<bool> {
        check_same(&self.alphabet, c.alphabet())?;
        for p in &self.forbidden {
            for y in 0..c.height() as i32 {
                for x in 0..c.width() as i32 {
                    if occurs_at(p, c, Offset::new(x, y))? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// A sofic shift presented as the image of an SFT under a letter map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoficRepr {
    pub inner: Sft,
    pub pi: Projection,
}

impl SoficRepr {
    pub fn new(inner: Sft, pi: Projection) -> Result<Self> {
        check_same(inner.alphabet(), pi.source())?;
        Ok(SoficRepr { inner, pi })
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.pi.target()
    }
}

/// Splits `∀z ψ(z)` (after prenexing) into `z` and a quantifier-free `ψ`
/// without set atoms.
fn univ_parts(s: &Sentence) -> Result<(String, Formula)> {
    let p = prenex(s)?;
    let (prefix, m) = split_prefix(&p.body);
    let wrong = |why: &str| Error::WrongFragment(format!("expected ∀z ψ(z): {why}"));
    let z = match prefix.as_slice() {
        [Quantifier::Forall(z)] => z.clone(),
        [] => return Err(wrong("no universal quantifier")),
        _ => return Err(wrong("exactly one first-order universal quantifier allowed")),
    };
    if m.has_at_most_one() {
        return Err(Error::PseudoAtom("atmostone in the matrix".into()));
    }
    if m.has_set_atoms() {
        return Err(wrong("set variables in the matrix"));
    }
    Ok((z, m.clone()))
}

/// Truth of a quantifier-free single-variable matrix, reading colors at
/// offsets from the bound point. `z@u = z@v` holds iff `u = v`, as in Z².
fn eval_local(f: &Formula, read: &dyn Fn(Offset) -> ColorId) -> Result<bool> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(Atom::ColorAt(c, t)) => read(t.offset) == *c,
        Formula::Atom(Atom::Equal(a, b)) => a.offset == b.offset,
        Formula::Not(g) => !eval_local(g, read)?,
        Formula::And(a, b) => eval_local(a, read)? && eval_local(b, read)?,
        Formula::Or(a, b) => eval_local(a, read)? || eval_local(b, read)?,
        Formula::Implies(a, b) => !eval_local(a, read)? || eval_local(b, read)?,
        Formula::Iff(a, b) => eval_local(a, read)? == eval_local(b, read)?,
        _ => return Err(Error::WrongFragment("expected a quantifier-free matrix without sets".into())),
    })
}

/// Offsets read by color atoms of `psi`, plus the origin.
pub fn offset_domain(psi: &Formula) -> BTreeSet<Offset> {
    let mut z: BTreeSet<Offset> = psi
        .atoms()
        .into_iter()
        .filter_map(|a| match a {
            Atom::ColorAt(_, t) => Some(t.offset),
            _ => None,
        })
        .collect();
    z.insert(Offset::ZERO);
    z
}

/// Forbids every pattern over the offset domain of `ψ` on which `ψ` is false.
///
/// Torus members equal torus models whenever `ψ` has no equality atoms; with
/// equalities, whenever both torus dimensions exceed the span of the offsets
/// they compare.
pub fn formula_to_sft(s: &Sentence) -> Result<Sft> {
    let (_, psi) = univ_parts(s)?;
    let domain: Vec<Offset> = offset_domain(&psi).into_iter().collect();
    let q = s.alphabet.len();
    let total = (q as u128).checked_pow(domain.len() as u32).unwrap_or(u128::MAX);
    if domain.len() > MAX_DOMAIN || total > MAX_ASSIGNMENTS {
        return Err(Error::Invalid(format!(
            "offset domain of {} cells over {q} colors gives {total} local assignments (limits: {MAX_DOMAIN} cells, {MAX_ASSIGNMENTS} assignments)",
            domain.len()
        )));
    }
    let mut forbidden = BTreeSet::new();
    let mut odo = Odometer::new(domain.len(), q);
    while let Some(digits) = odo.next_digits() {
        let read = |o: Offset| digits[domain.binary_search(&o).expect("offset in domain")];
        if !eval_local(&psi, &read)? {
            forbidden.insert(Pattern::from_cells(domain.iter().copied().zip(digits.iter().copied()))?);
        }
    }
    Ok(Sft {
        alphabet: s.alphabet.clone(),
        forbidden,
    })
}

/// `∀z ⋀ ¬φ_P(z)` over the forbidden patterns.
pub fn sft_to_formula(x: &Sft) -> Sentence {
    let body = Formula::and_all(x.forbidden.iter().map(|p| Formula::not(pattern_sentinel(p, "z"))));
    Sentence::new_unchecked(x.alphabet.clone(), Formula::forall("z", body))
}

/// Compiles `∃X̄ ∀z ψ` into an SFT over `Q × {0,1}ⁿ` and the projection
/// forgetting the bits.
pub fn emso_to_sofic(s: &Sentence) -> Result<SoficRepr> {
    if s.body.has_at_most_one() {
        return Err(Error::PseudoAtom(
            "atmostone must be replaced by its gadget before compiling".into(),
        ));
    }
    match class_c_shape(s) {
        Some((_, 1)) => {}
        Some((_, p)) => {
            return Err(Error::WrongFragment(format!(
                "{p} universal quantifiers; reduce to one first"
            )))
        }
        None => return Err(Error::WrongFragment("expected ∃X̄ ∀z ψ".into())),
    }
    let p = prenex(s)?;
    let (dec, pi) = colors_to_sets(&p)?;
    SoficRepr::new(formula_to_sft(&dec)?, pi)
}

/// `∃C̄ ∀z (C̄ partitions the plane ∧ Cₐ ⊆ π(a) ∧ no forbidden pattern in C̄)`,
/// one set per inner color, with a single universal.
pub fn sofic_to_formula(r: &SoficRepr) -> Sentence {
    let inner = r.inner.alphabet();
    let mut names = NameSupply::new(r.alphabet().names().iter().cloned().collect());
    let z = names.fresh("z");
    let cs: Vec<String> = inner.ids().map(|_| names.fresh("C")).collect();
    let at = |o: Offset| Term {
        var: z.clone(),
        offset: o,
    };
    let mut parts = vec![Formula::or_all(cs.iter().map(|c| Formula::in_set(c, at(Offset::ZERO))))];
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            parts.push(Formula::not(Formula::and(
                Formula::in_set(&cs[i], at(Offset::ZERO)),
                Formula::in_set(&cs[j], at(Offset::ZERO)),
            )));
        }
    }
    for (a, c) in inner.ids().zip(&cs) {
        parts.push(Formula::implies(
            Formula::in_set(c, at(Offset::ZERO)),
            Formula::color(r.pi.apply(a), at(Offset::ZERO)),
        ));
    }
    for p in r.inner.forbidden() {
        parts.push(Formula::not(Formula::and_all(
            p.iter().map(|(o, a)| Formula::in_set(&cs[a as usize], at(o))),
        )));
    }
    let body = Formula::forall(z.clone(), Formula::and_all(parts)).exists_sets(cs.iter().cloned());
    Sentence::new_unchecked(r.alphabet().clone(), body)
}

#[cfg(test)]
mod tests;
