//! Syntactic constructions on sentences: CNF, disequality elimination,
//! reduction of the universal block, counting formulas, and the union,
//! intersection and projection combinators.

mod classc;
mod cnf;
mod counting;
mod emso;

pub use classc::{eliminate_disequality, reduce_universals, singleton_gadget, ClassC, Rewrite};
pub use cnf::{clause_formula, cnf_clauses, from_clauses, to_cnf, Clause, Lit};
pub use counting::counting_formula;
pub use emso::{colors_to_sets, intersect_emso, project_formula, union_emso, EmsoNormal};

use crate::grid::Pattern;
use crate::logic::{Formula, Term};

/// How at-most-one constraints are expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// `atmostone(S)` pseudo-atoms; exact on tori.
    #[default]
    Abstract,
    /// Quarter-plane gadgets; exact on the plane and on flagged windows.
    Concrete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    Exactly,
    AtLeast,
}

/// `φ_P(z)`: true iff `p` occurs at `z`.
pub fn pattern_sentinel(p: &Pattern, z: &str) -> Formula {
    Formula::and_all(p.iter().map(|(o, c)| Formula::color(c, Term { var: z.to_string(), offset: o })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{all_tori, occurs_at, Alphabet, Offset, Projection, TorusConfig};
    use crate::logic::{parse_formula, parse_sentence, print_formula, Sentence};
    use crate::semantics::{e_projection_member, eval_torus, eval_with, Assignment, Convention, Structure};

    fn models(s: &Sentence, w: u32, h: u32) -> Vec<Vec<u8>> {
        crate::semantics::models_torus(s, w, h, crate::DEFAULT_BUDGET)
            .unwrap()
            .into_iter()
            .map(|t| t.cells().to_vec())
            .collect()
    }

    #[test]
    fn sentinel() {
        let a = Alphabet::new(["W", "L"]).unwrap();
        let p = Pattern::single(1);
        assert_eq!(print_formula(&pattern_sentinel(&p, "z"), &a), "L(z)");
        let q = Pattern::from_cells([(Offset::new(0, 0), 1), (Offset::new(1, 0), 1)]).unwrap();
        let phi = pattern_sentinel(&q, "z");
        assert_eq!(phi, parse_formula("L(z) & L(z@(1,0))", &a, &["z"]).unwrap());
        let s = Sentence::new_unchecked(a.clone(), phi.clone());
        for t in all_tori(&a, 2, 2) {
            for x in 0..2 {
                for y in 0..2 {
                    let env = Assignment::new().element("z", (x, y));
                    let got = eval_with(&phi, &s, Structure::Torus(&t), &Convention::Torus, &env).unwrap();
                    assert_eq!(got, occurs_at(&q, &t, Offset::new(x as i32, y as i32)).unwrap());
                }
            }
        }
    }

    #[test]
    fn union_and_intersection() {
        let a = "alphabet W L\n";
        let white = parse_sentence(&format!("{a}(A z. W(z)) & true")).unwrap();
        let lime = parse_sentence(&format!("{a}(A z. L(z)) & true")).unwrap();
        let u = union_emso(&white, &lime).unwrap();
        assert_eq!(models(&u, 1, 1), vec![vec![0], vec![1]]);
        assert_eq!(models(&u, 2, 1), vec![vec![0, 0], vec![1, 1]]);
        let i = intersect_emso(&u, &u).unwrap();
        assert_eq!(models(&i, 2, 1), models(&u, 2, 1));
        let never = parse_sentence(&format!("{a}(A z. W(z) & L(z)) & true")).unwrap();
        assert_eq!(models(&union_emso(&white, &never).unwrap(), 2, 2), models(&white, 2, 2));
    }

    #[test]
    fn projection_round_trips() {
        let src = Alphabet::new(["W", "L", "B"]).unwrap();
        let dst = Alphabet::new(["W", "G"]).unwrap();
        let pi = Projection::from_names(&src, &dst, &[("W", "W"), ("L", "G"), ("B", "G")]).unwrap();
        let s = parse_sentence("alphabet W L B\nE z. L(z)").unwrap();
        let p = project_formula(&pi, &s).unwrap();
        for t in all_tori(&dst, 2, 1) {
            let want = e_projection_member(&pi, &s, Structure::Torus(&t), &Convention::Torus, 1000).unwrap();
            assert_eq!(eval_torus(&p, &t).unwrap(), want);
        }
        let id = Projection::identity(&src);
        let same = project_formula(&id, &s).unwrap();
        assert_eq!(models(&same, 2, 1), models(&s, 2, 1));

        let e = parse_sentence("alphabet W L\nE2 X. A z. (X(z) <-> !X(z@(1,0))) & (X(z) -> L(z))").unwrap();
        let (dec, pi) = colors_to_sets(&e).unwrap();
        assert_eq!(dec.alphabet.names(), &["W_0", "W_1", "L_0", "L_1"]);
        let back = project_formula(&pi, &dec).unwrap();
        assert_eq!(models(&back, 2, 2), models(&e, 2, 2));
        let t = TorusConfig::from_names(&e.alphabet, 2, 1, &["W", "L"]).unwrap();
        assert!(eval_torus(&e, &t).unwrap());
    }
}
