use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::grid::{Alphabet, Pattern};
use crate::logic::{Formula, NameSupply, Sentence, Term};
use crate::semantics::FlagDefault;

use super::classc::Rewrite;
use super::emso::EmsoNormal;
use super::{pattern_sentinel, Count, Mode};

/// Direction of the final marking clause `(⋁ᵢ Xᵢ(x)) ? φ_P(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Marking {
    /// Marked cells are exactly the occurrences.
    Iff,
    /// Every marked cell is an occurrence.
    MarkedAreOccurrences,
    /// Every occurrence is marked.
    #[cfg_attr(not(test), allow(dead_code))]
    OccurrencesAreMarked,
}

/// Sentence defining the configurations with exactly (`Count::Exactly`) or at
/// least (`Count::AtLeast`) `k` occurrences of `p`.
///
/// `Mode::Concrete` uses the quarter-plane gadget `Aᵢ` to make each `Xᵢ` a
/// singleton; it is meant for the plane and for flagged windows. On a torus
/// that gadget has no nonempty solution, so `Mode::Abstract` states
/// `atmostone(Xᵢ)` directly instead.
pub fn counting_formula(p: &Pattern, alphabet: &Alphabet, k: usize, count: Count, mode: Mode) -> Result<Rewrite> {
    let marking = match count {
        Count::Exactly => Marking::Iff,
        Count::AtLeast => Marking::MarkedAreOccurrences,
    };
    build(p, alphabet, k, count, mode, marking)
}

pub(crate) fn build(
    p: &Pattern,
    alphabet: &Alphabet,
    k: usize,
    count: Count,
    mode: Mode,
    marking: Marking,
) -> Result<Rewrite> {
    p.check_alphabet(alphabet)?;
    let mut names = NameSupply::new(alphabet.names().iter().cloned().collect::<BTreeSet<_>>());
    let x = names.fresh("x");
    let phi = pattern_sentinel(p, &x);
    if k == 0 {
        let body = match count {
            Count::Exactly => Formula::not(phi),
            Count::AtLeast => Formula::True,
        };
        return Ok(Rewrite {
            sentence: Sentence::new(alphabet.clone(), Formula::forall(x, body))?,
            flags: BTreeMap::new(),
            notes: Vec::new(),
        });
    }
    let xs: Vec<String> = (0..k).map(|_| names.fresh("X")).collect();
    let at = |dx, dy| Term::at(&x, dx, dy);
    let mut sets = xs.clone();
    let mut flags = BTreeMap::new();
    let mut parts = Vec::new();
    match mode {
        Mode::Concrete => {
            let a_s: Vec<String> = (0..k).map(|_| names.fresh("A")).collect();
            for a in &a_s {
                flags.insert(a.clone(), FlagDefault::GADGET);
                parts.push(Formula::iff(
                    Formula::in_set(a, at(0, 0)),
                    Formula::and(Formula::in_set(a, at(0, 1)), Formula::in_set(a, at(1, 0))),
                ));
            }
            for (xi, a) in xs.iter().zip(&a_s) {
                parts.push(Formula::iff(
                    Formula::in_set(xi, at(0, 0)),
                    Formula::and_all([
                        Formula::in_set(a, at(0, 0)),
                        Formula::not(Formula::in_set(a, at(0, -1))),
                        Formula::not(Formula::in_set(a, at(-1, 0))),
                    ]),
                ));
            }
            sets.extend(a_s);
        }
        Mode::Abstract => parts.extend(xs.iter().map(|xi| Formula::AtMostOne(xi.clone()))),
    }
    for i in 0..k {
        for j in i + 1..k {
            parts.push(Formula::implies(
                Formula::in_set(&xs[i], at(0, 0)),
                Formula::not(Formula::in_set(&xs[j], at(0, 0))),
            ));
        }
    }
    let marked = Formula::or_all(xs.iter().map(|xi| Formula::in_set(xi, at(0, 0))));
    parts.push(match marking {
        Marking::Iff => Formula::iff(marked, phi),
        Marking::MarkedAreOccurrences => Formula::implies(marked, phi),
        Marking::OccurrencesAreMarked => Formula::implies(phi, marked),
    });
    let zs: Vec<String> = (0..k).map(|_| names.fresh("z")).collect();
    let n = EmsoNormal {
        alphabet: alphabet.clone(),
        sets,
        univ: x.clone(),
        univ_matrix: Formula::and_all(parts),
        exist_matrix: Formula::and_all(xs.iter().zip(&zs).map(|(xi, z)| Formula::in_set(xi, Term::var(z)))),
        exist: zs,
    };
    Ok(Rewrite {
        sentence: n.to_sentence(),
        flags,
        notes: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{all_tori, count_occurrences, Offset};
    use crate::logic::{classify, FragmentTag};
    use crate::semantics::eval_torus;

    fn wl() -> Alphabet {
        Alphabet::new(["W", "L"]).unwrap()
    }

    #[test]
    fn k_zero() {
        let p = Pattern::single(1);
        let r = counting_formula(&p, &wl(), 0, Count::Exactly, Mode::Abstract).unwrap();
        assert_eq!(r.sentence.to_string(), "alphabet W L\nA x1. !L(x1)\n");
    }

    #[test]
    fn single_cell_counts() {
        let a = wl();
        let p = Pattern::single(1);
        for (count, k) in [(Count::Exactly, 1), (Count::AtLeast, 1), (Count::Exactly, 2)] {
            let r = counting_formula(&p, &a, k, count, Mode::Abstract).unwrap();
            assert!(classify(&r.sentence).contains(&FragmentTag::EMSONormal));
            for t in all_tori(&a, 2, 2) {
                let n = count_occurrences(&p, &t, u64::MAX).unwrap() as usize;
                let want = match count {
                    Count::Exactly => n == k,
                    Count::AtLeast => n >= k,
                };
                assert_eq!(eval_torus(&r.sentence, &t).unwrap(), want, "{count:?} {k} {:?}", t.cells());
            }
        }
    }

    #[test]
    fn only_one_implication_direction_gives_at_least() {
        let a = wl();
        let p = Pattern::from_cells([(Offset::new(0, 0), 1), (Offset::new(1, 0), 1)]).unwrap();
        let mut mismatch = false;
        let fwd = build(&p, &a, 1, Count::AtLeast, Mode::Abstract, Marking::MarkedAreOccurrences).unwrap();
        let bwd = build(&p, &a, 1, Count::AtLeast, Mode::Abstract, Marking::OccurrencesAreMarked).unwrap();
        for t in all_tori(&a, 2, 2) {
            let want = count_occurrences(&p, &t, u64::MAX).unwrap() >= 1;
            assert_eq!(eval_torus(&fwd.sentence, &t).unwrap(), want);
            mismatch |= eval_torus(&bwd.sentence, &t).unwrap() != want;
        }
        assert!(mismatch);
    }
}
