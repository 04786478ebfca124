//! Inputs shared by the benchmarks.

use tesselogic_core::logic::parse_sentence;
use tesselogic_core::Sentence;

/// No two horizontally adjacent `L` cells.
pub fn no_ll() -> Sentence {
    parse_sentence("alphabet W L\nA z. !(L(z) & L(z@(1,0)))").expect("valid sentence")
}

/// Stripes: every row is constant.
pub fn rows() -> Sentence {
    parse_sentence("alphabet W L\nA z. L(z) <-> L(z@(1,0))").expect("valid sentence")
}
