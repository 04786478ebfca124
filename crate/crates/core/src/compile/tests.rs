use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::grid::{all_tori, Offset};
use crate::logic::{parse_sentence, print_sentence};
use crate::semantics::{eval_torus, models_torus};

const BUDGET: u64 = 10_000_000;

fn wlb() -> Alphabet {
    Alphabet::new(["W", "L", "B"]).unwrap()
}

fn pat(cells: &[((i32, i32), ColorId)]) -> Pattern {
    Pattern::from_cells(cells.iter().map(|&((x, y), c)| (Offset::new(x, y), c))).unwrap()
}

fn cells(v: &[TorusConfig]) -> Vec<Vec<ColorId>> {
    v.iter().map(|t| t.cells().to_vec()).collect()
}

fn random_sft(rng: &mut ChaCha8Rng, a: &Alphabet) -> Sft {
    let n = rng.gen_range(0..4);
    let pats = (0..n).map(|_| {
        let k = rng.gen_range(1..4);
        let cs: Vec<_> = (0..k)
            .map(|_| {
                let o = Offset::new(rng.gen_range(0..2), rng.gen_range(0..2));
                (o, rng.gen_range(0..a.len()) as ColorId)
            })
            .collect::<std::collections::BTreeMap<_, _>>()
            .into_iter()
            .collect::<Vec<_>>();
        Pattern::from_cells(cs).unwrap()
    });
    Sft::new(a.clone(), pats.collect::<Vec<_>>()).unwrap()
}

#[test]
fn formula_to_sft_examples() {
    let s = parse_sentence("alphabet W L B\nA z. !(L(z) & L(z@(1,0)))").unwrap();
    let x = formula_to_sft(&s).unwrap();
    assert_eq!(x.forbidden().iter().cloned().collect::<Vec<_>>(), vec![pat(&[((0, 0), 1), ((1, 0), 1)])]);

    let s = parse_sentence("alphabet W L B\nA z. L(z)").unwrap();
    let x = formula_to_sft(&s).unwrap();
    let want: BTreeSet<_> = [Pattern::single(0), Pattern::single(2)].into_iter().collect();
    assert_eq!(x.forbidden(), &want);

    let s = parse_sentence("alphabet W L B\nA z. W(z) | !W(z)").unwrap();
    assert!(formula_to_sft(&s).unwrap().forbidden().is_empty());
}

#[test]
fn origin_is_always_in_the_domain() {
    let s = parse_sentence("alphabet W L\nA z. L(z@(1,0))").unwrap();
    let x = formula_to_sft(&s).unwrap();
    assert_eq!(x.forbidden().len(), 2);
    assert!(x.forbidden().iter().all(|p| p.get(Offset::ZERO).is_some()));
}

#[test]
fn formula_to_sft_rejects_other_fragments() {
    for src in ["E z. L(z)", "A x. A y. L(x) | L(y)", "E2 X. A z. X(z)", "A z. true"] {
        let s = parse_sentence(&format!("alphabet W L\n{src}")).unwrap();
        let r = formula_to_sft(&s);
        if src == "A z. true" {
            assert!(r.unwrap().forbidden().is_empty());
        } else {
            assert!(matches!(r, Err(Error::WrongFragment(_))), "{src}");
        }
    }
    let wide = (0..13).map(|i| format!("L(z@({i},0))")).collect::<Vec<_>>().join(" | ");
    let s = parse_sentence(&format!("alphabet W L\nA z. {wide}")).unwrap();
    assert!(matches!(formula_to_sft(&s), Err(Error::Invalid(_))));
}

#[test]
fn sft_to_formula_examples() {
    let a = wlb();
    let s = sft_to_formula(&Sft::full(a.clone()));
    assert_eq!(print_sentence(&s), "alphabet W L B\nA z. true\n");
    let x = Sft::new(a, [pat(&[((0, 0), 1), ((1, 0), 1)])]).unwrap();
    assert_eq!(print_sentence(&sft_to_formula(&x)), "alphabet W L B\nA z. !(L(z) & L(z@(1,0)))\n");
}

#[test]
fn members_examples() {
    let a = wlb();
    assert_eq!(torus_members_sft(&Sft::full(a.clone()), 1, 1, BUDGET).unwrap().len(), 3);
    let no_l = Sft::new(a.clone(), [Pattern::single(1)]).unwrap();
    let m = torus_members_sft(&no_l, 2, 2, BUDGET).unwrap();
    assert_eq!(m.len(), 16);
    assert!(m.iter().all(|t| !t.cells().contains(&1)));
    let ll = Sft::new(a, [pat(&[((0, 0), 1), ((1, 0), 1)])]).unwrap();
    let m = torus_members_sft(&ll, 2, 1, BUDGET).unwrap();
    assert_eq!(m.len(), 8);
    assert!(!cells(&m).contains(&vec![1, 1]));
}

#[test]
fn backtracking_equals_naive_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let q = rng.gen_range(2..4);
        let a = Alphabet::new(["W", "L", "B"].iter().take(q).copied()).unwrap();
        let x = random_sft(&mut rng, &a);
        for (w, h) in [(1, 1), (2, 1), (1, 3), (2, 2), (3, 2)] {
            let fast = torus_members_sft(&x, w, h, BUDGET).unwrap();
            let naive: Vec<_> = all_tori(&a, w, h).filter(|t| x.admits_torus(t).unwrap()).collect();
            assert_eq!(fast, naive);
        }
    }
}

#[test]
fn round_trip_preserves_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = wlb();
    for _ in 0..50 {
        let x = random_sft(&mut rng, &a);
        let s = sft_to_formula(&x);
        let y = formula_to_sft(&s).unwrap();
        for (w, h) in [(3, 3), (2, 1)] {
            assert_eq!(torus_members_sft(&x, w, h, BUDGET).unwrap(), torus_members_sft(&y, w, h, BUDGET).unwrap());
        }
        let back = sft_to_formula(&y);
        for t in all_tori(&a, 2, 2) {
            assert_eq!(eval_torus(&back, &t).unwrap(), x.admits_torus(&t).unwrap());
        }
    }
}

#[test]
fn compiled_sft_matches_evaluation() {
    let a = "alphabet W L B\n";
    for src in [
        "A z. !(L(z) & L(z@(1,0)))",
        "A z. L(z) -> (B(N1(z)) | W(E1(z)))",
        "A z. (W(z) <-> W(z@(1,1))) & !(B(z) & B(z@(0,-1)))",
        "A z. z = z@(0,0) & (L(z) | L(z@(2,0)))",
    ] {
        let s = parse_sentence(&format!("{a}{src}")).unwrap();
        let x = formula_to_sft(&s).unwrap();
        for (w, h) in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)] {
            let models = models_torus(&s, w, h, BUDGET).unwrap();
            assert_eq!(models, torus_members_sft(&x, w, h, BUDGET).unwrap(), "{src} {w}x{h}");
        }
    }
}

// Equality atoms compare offsets as in the plane; on a torus narrower than
// their span they can disagree with the wrapped reading.
#[test]
fn equality_needs_tori_wider_than_the_span() {
    let s = parse_sentence("alphabet W L\nA z. !(z = z@(2,0)) | L(z)").unwrap();
    let x = formula_to_sft(&s).unwrap();
    assert!(x.forbidden().is_empty());
    let mut counterexample_below_span = false;
    for (w, h) in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 3)] {
        let same = models_torus(&s, w, h, BUDGET).unwrap() == torus_members_sft(&x, w, h, BUDGET).unwrap();
        if w > 2 {
            assert!(same, "{w}x{h}");
        } else {
            counterexample_below_span |= !same;
        }
    }
    assert!(counterexample_below_span);
}

#[test]
fn emso_to_sofic_examples() {
    let s = parse_sentence("alphabet W L B\nE2 X. A z. X(z) <-> L(z)").unwrap();
    let r = emso_to_sofic(&s).unwrap();
    assert_eq!(r.inner.alphabet().len(), 6);
    assert_eq!(torus_members_sofic(&r, 2, 2, BUDGET).unwrap().len(), 81);

    let s = parse_sentence("alphabet W L B\nE2 X. A z. X(z) & !X(z)").unwrap();
    let r = emso_to_sofic(&s).unwrap();
    assert!(torus_members_sofic(&r, 2, 2, BUDGET).unwrap().is_empty());

    let s = parse_sentence("alphabet W L\nE2 X. A x. A y. X(x) | X(y)").unwrap();
    assert!(matches!(emso_to_sofic(&s), Err(Error::WrongFragment(_))));
    let s = parse_sentence("alphabet W L\nE2 X. A z. atmostone(X) & L(z)").unwrap();
    assert!(matches!(emso_to_sofic(&s), Err(Error::PseudoAtom(_))));
}

#[test]
fn sofic_members_match_evaluation() {
    let a = "alphabet W L\n";
    for src in [
        "E2 X. A z. (X(z) <-> !X(z@(1,0))) & (X(z) -> L(z))",
        "E2 X. E2 Y. A z. (X(z) | Y(z)) & (Y(z) -> W(z@(0,1))) & !(X(z) & X(E1(z)))",
        "E2 X. A z. (X(z) <-> X(N1(z))) & (L(z) -> X(z))",
    ] {
        let s = parse_sentence(&format!("{a}{src}")).unwrap();
        let r = emso_to_sofic(&s).unwrap();
        let back = sofic_to_formula(&r);
        assert_eq!(crate::logic::class_c_shape(&back).map(|(_, p)| p), Some(1));
        for (w, h) in [(1, 1), (2, 1), (2, 2)] {
            let models = models_torus(&s, w, h, BUDGET).unwrap();
            assert_eq!(torus_members_sofic(&r, w, h, BUDGET).unwrap(), models, "{src} {w}x{h}");
            assert_eq!(models_torus(&back, w, h, BUDGET).unwrap(), models, "{src} {w}x{h}");
        }
    }
}

#[test]
fn sofic_examples() {
    let a = wlb();
    let x = Sft::new(a.clone(), [pat(&[((0, 0), 1), ((0, 1), 1)])]).unwrap();
    let id = SoficRepr::new(x.clone(), Projection::identity(&a)).unwrap();
    assert_eq!(torus_members_sofic(&id, 2, 2, BUDGET).unwrap(), torus_members_sft(&x, 2, 2, BUDGET).unwrap());

    let one = Alphabet::new(["G"]).unwrap();
    let collapse = SoficRepr::new(x.clone(), Projection::new(a.clone(), one, vec![0, 0, 0]).unwrap()).unwrap();
    assert_eq!(cells(&torus_members_sofic(&collapse, 2, 2, BUDGET).unwrap()), vec![vec![0; 4]]);

    // Inner forbids B outright: the image is the set of tori whose G cells
    // can all be read as L with no two L stacked vertically.
    let wg = Alphabet::new(["W", "G"]).unwrap();
    let no_b = Sft::new(a.clone(), [Pattern::single(2), pat(&[((0, 0), 1), ((0, 1), 1)])]).unwrap();
    let pi = Projection::from_names(&a, &wg, &[("W", "W"), ("L", "G"), ("B", "G")]).unwrap();
    let r = SoficRepr::new(no_b, pi).unwrap();
    let want: Vec<_> = all_tori(&wg, 2, 2)
        .filter(|t| (0..2).all(|x| !(t.at(x, 0) == 1 && t.at(x, 1) == 1)))
        .collect();
    assert_eq!(torus_members_sofic(&r, 2, 2, BUDGET).unwrap(), want);
    assert_eq!(models_torus(&sofic_to_formula(&r), 2, 2, BUDGET).unwrap(), want);
    for t in all_tori(&wg, 1, 2) {
        assert_eq!(sofic_admits_torus(&r, &t, BUDGET).unwrap(), t.cells() != [1, 1]);
    }
}

#[test]
fn full_shift_with_identity_is_everything() {
    let a = Alphabet::new(["W", "L"]).unwrap();
    let r = SoficRepr::new(Sft::full(a.clone()), Projection::identity(&a)).unwrap();
    assert_eq!(models_torus(&sofic_to_formula(&r), 2, 2, BUDGET).unwrap().len(), 16);
}

#[test]
fn local_admissibility() {
    let a = Alphabet::new(["W", "L"]).unwrap();
    assert_eq!(locally_admissible(&Sft::full(a.clone()), 2, 2, 1, BUDGET).unwrap().len(), 16);
    let no_l = Sft::new(a.clone(), [Pattern::single(1)]).unwrap();
    for r in 0..3 {
        let got = locally_admissible(&no_l, 2, 1, r, BUDGET).unwrap();
        assert_eq!(got, vec![pat(&[((0, 0), 0), ((1, 0), 0)])]);
    }
    // Nothing may sit above an L, so L only survives without a margin.
    let alt = Sft::new(a.clone(), [pat(&[((0, 0), 1), ((0, 1), 0)]), pat(&[((0, 0), 1), ((0, 1), 1)])]).unwrap();
    let r0 = locally_admissible(&alt, 2, 1, 0, BUDGET).unwrap();
    let r1 = locally_admissible(&alt, 2, 1, 1, BUDGET).unwrap();
    assert!(r1.iter().all(|p| r0.contains(p)));
    assert_eq!(r0.len(), 4);
    assert_eq!(r1, vec![pat(&[((0, 0), 0), ((1, 0), 0)])]);
}

#[test]
fn admissibility_is_antitone() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = Alphabet::new(["W", "L"]).unwrap();
    for _ in 0..20 {
        let x = random_sft(&mut rng, &a);
        let r1: BTreeSet<_> = locally_admissible(&x, 2, 2, 1, BUDGET).unwrap().into_iter().collect();
        let r2: BTreeSet<_> = locally_admissible(&x, 2, 2, 2, BUDGET).unwrap().into_iter().collect();
        assert!(r2.is_subset(&r1));
    }
}

#[test]
fn text_round_trip() {
    let a = wlb();
    let x = Sft::new(a.clone(), [pat(&[((0, 0), 1), ((1, 0), 1)]), Pattern::single(2)]).unwrap();
    let t = write_sft(&x);
    assert_eq!(t, "alphabet W L B\nforbid { (0,0)=L (1,0)=L }\nforbid { (0,0)=B }\n");
    assert_eq!(parse_sft(&t).unwrap(), x);

    let wg = Alphabet::new(["W", "G"]).unwrap();
    let pi = Projection::from_names(&a, &wg, &[("W", "W"), ("L", "G"), ("B", "G")]).unwrap();
    let r = SoficRepr::new(x, pi).unwrap();
    let t = write_sofic(&r);
    assert!(t.contains("inner W L B\n") && t.ends_with("project W->W L->G B->G\n"));
    assert_eq!(parse_sofic(&t).unwrap(), r);

    assert!(parse_sft("alphabet W\nforbid { (0,0)=Q }").is_err());
    assert!(parse_sofic("alphabet G\ninner W L\nproject W->G").is_err());
}
