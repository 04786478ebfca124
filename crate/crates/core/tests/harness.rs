use std::collections::BTreeSet;

use proptest::prelude::*;
use tesselogic_core::compile::{formula_to_sft, Sft};
use tesselogic_core::grid::{config_count, Alphabet, Offset, Pattern, TorusConfig};
use tesselogic_core::harness::*;
use tesselogic_core::logic::{classify, parse_sentence, FragmentTag};
use tesselogic_core::marked::counting_marked_sft;
use tesselogic_core::semantics::eval_torus;
use tesselogic_core::transforms::{reduce_universals, Count, Mode};

const BUDGET: u64 = 10_000_000;

fn wl() -> Alphabet {
    Alphabet::new(["W", "L"]).unwrap()
}

#[test]
fn a_sentence_is_equivalent_to_itself() {
    let s = parse_sentence("alphabet W L\nA z. !(L(z) & L(z@(1,0)))").unwrap();
    let r = equiv_on_tori(&s, &s, 3, 3, BUDGET).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    let want: u128 = sweep_sizes(3, 3).iter().map(|&(w, h)| config_count(2, w, h)).sum();
    assert_eq!(r.visited as u128, want);
    assert_eq!(r.sizes.len(), 9);
}

#[test]
fn exists_and_forall_differ_on_two_cells() {
    let e = parse_sentence("alphabet W L\nE z. L(z)").unwrap();
    let a = parse_sentence("alphabet W L\nA z. L(z)").unwrap();
    let r = equiv_on_tori(&e, &a, 3, 3, BUDGET).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    let c = r.counterexample.clone().unwrap();
    let want = TorusConfig::from_names(&wl(), 2, 1, &["L", "W"]).unwrap();
    assert_eq!(c.witness, Witness::Torus(want.clone()));
    assert!(c.left && !c.right);
    assert_eq!(eval_torus(&e, &want).unwrap(), c.left);
    assert_eq!(eval_torus(&a, &want).unwrap(), c.right);
    assert_eq!(
        r.to_text(),
        "verdict FAIL\nsizes 1x1\nvisited 4\nleft true\nright false\ntorus witness 2 1 { L W }\n"
    );
}

#[test]
fn small_budget_is_inconclusive() {
    let s = parse_sentence("alphabet W L\nA z. L(z)").unwrap();
    let r = equiv_on_tori(&s, &s, 3, 3, 100).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
    assert_eq!(r.sizes, vec![(1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (2, 2)]);
}

#[test]
fn reduced_challenge_sentence_agrees_up_to_3x3() {
    let s = parse_sentence("alphabet W L B\nA x. A y. (L(x) & B(E1(y))) -> x = y").unwrap();
    let r = reduce_universals(&s, Mode::Abstract).unwrap();
    let rep = equiv_on_tori(&s, &r.sentence, 3, 3, u64::MAX).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
}

fn no_ll() -> (Sft, tesselogic_core::Sentence) {
    let s = parse_sentence("alphabet W L\nA z. !(L(z) & L(z@(1,0)))").unwrap();
    (formula_to_sft(&s).unwrap(), s)
}

#[test]
fn sft_bridge_on_the_domino_shift() {
    let (x, s) = no_ll();
    let rep = sft_vs_formula(&x, &s, &sweep_sizes(3, 3), BUDGET).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
}

#[test]
fn dropping_a_pattern_gives_a_witness() {
    let s = parse_sentence("alphabet W L\nA z. !(L(z) & L(z@(1,0))) & !(L(z) & L(z@(0,1)))").unwrap();
    let x = formula_to_sft(&s).unwrap();
    let fewer: Vec<Pattern> = x.forbidden().iter().skip(1).cloned().collect();
    let tampered = Sft::new(wl(), fewer).unwrap();
    for sizes in [sweep_sizes(3, 3), vec![(4, 5)]] {
        let rep = sft_vs_formula(&tampered, &s, &sizes, BUDGET).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        let c = rep.counterexample.unwrap();
        let Witness::Torus(t) = c.witness else { panic!("torus witness expected") };
        assert_eq!(eval_torus(&s, &t).unwrap(), c.left);
        assert_eq!(tampered.admits_torus(&t).unwrap(), c.right);
        assert_ne!(c.left, c.right);
    }
}

#[test]
fn anchored_search_agrees_with_enumeration() {
    let p = GenParams {
        colors: 2,
        atoms: 3,
        ..GenParams::default()
    };
    for seed in 0..10 {
        let s = gen_sentence(seed, FragmentTag::UnivSFT, &p);
        let x = formula_to_sft(&s).unwrap();
        let dropped = Sft::new(x.alphabet().clone(), x.forbidden().iter().skip(1).cloned()).unwrap();
        for y in [&x, &dropped] {
            // 4x5 goes through the anchored search, 3x3 through enumeration.
            let big = sft_vs_formula(y, &s, &[(4, 5)], BUDGET).unwrap();
            let small = sft_vs_formula(y, &s, &[(3, 3)], BUDGET).unwrap();
            if y == &x {
                assert!(big.passed() && small.passed(), "seed {seed}");
            } else if !small.passed() {
                // A pattern seen on 3x3 is also realizable somewhere on the larger torus.
                assert_eq!(big.verdict, Verdict::Fail, "seed {seed}");
            }
        }
    }
}

#[test]
fn counting_suite_passes_and_tampering_fails() {
    let l = Pattern::from_cells([(Offset::ZERO, 1)]).unwrap();
    let m = counting_marked_sft(&l, 1, Count::Exactly, &wl()).unwrap();
    let rep = marked_window_suite(&m, &l, 1, Count::Exactly, &[(3, 3)], BUDGET).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    let rep = marked_window_suite(&m, &l, 2, Count::Exactly, &[(3, 3)], BUDGET).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    assert_eq!(rep.counterexample.unwrap().assignment.len(), 2);
}

#[test]
fn generators_are_deterministic_and_shaped() {
    let p = GenParams::default();
    let shapes = [
        FragmentTag::QF,
        FragmentTag::UnivSFT,
        FragmentTag::ClassC { n: 2, p: 1 },
        FragmentTag::ClassC { n: 1, p: 2 },
        FragmentTag::EMSO,
        FragmentTag::EMSONormal,
        FragmentTag::FO,
        FragmentTag::MSO,
    ];
    for tag in shapes {
        for seed in 0..30 {
            let s = gen_sentence(seed, tag, &p);
            assert_eq!(s, gen_sentence(seed, tag, &p));
            assert!(classify(&s).contains(&tag), "{tag} seed {seed}: {s}");
        }
    }
    assert_eq!(gen_sft(3, &p), gen_sft(3, &p));
    assert_eq!(gen_torus(3, 2, 3, 2), gen_torus(3, 2, 3, 2));
}

#[test]
fn hundred_seeds_give_distinct_sentences() {
    let p = GenParams::default();
    let distinct: BTreeSet<String> = (0..100)
        .map(|seed| gen_sentence(seed, FragmentTag::UnivSFT, &p).to_string())
        .collect();
    // Measured: all 100 differ.
    assert_eq!(distinct.len(), 100);
}

proptest! {
    #[test]
    fn sweep_order_is_a_bijection(q in 2usize..4, cells in 1usize..5) {
        let total = q.pow(cells as u32) as u64;
        let all: BTreeSet<Vec<u8>> = (0..total).map(|i| sweep_order(q, cells, i)).collect();
        prop_assert_eq!(all.len() as u64, total);
    }

    #[test]
    fn generated_sentences_replay(seed in any::<u64>(), n in 0usize..3, p in 1usize..3) {
        let params = GenParams::default();
        let tag = FragmentTag::ClassC { n, p };
        let s = gen_sentence(seed, tag, &params);
        prop_assert!(classify(&s).contains(&tag));
        prop_assert_eq!(s, gen_sentence(seed, tag, &params));
    }
}
