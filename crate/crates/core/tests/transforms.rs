use tesselogic_core::logic::{classify, parse_sentence, print_sentence, FragmentTag};
use tesselogic_core::transforms::{reduce_universals, Mode};

const CHALLENGE: &str = include_str!("../../cli/tests/golden/challenge.mso");

#[test]
fn reduced_challenge_reparses() {
    let s = parse_sentence(CHALLENGE).unwrap();
    for mode in [Mode::Abstract, Mode::Concrete] {
        let r = reduce_universals(&s, mode).unwrap();
        let text = print_sentence(&r.sentence);
        let back = parse_sentence(&text).unwrap_or_else(|e| panic!("{mode:?}: {e}\n{text}"));
        assert_eq!(back, r.sentence);
        assert!(classify(&back)
            .iter()
            .any(|t| matches!(t, FragmentTag::ClassC { p: 1, .. })));
    }
}
