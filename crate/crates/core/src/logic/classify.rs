use std::collections::BTreeSet;
use std::fmt;

use super::prenex::{prenex_formula, split_prefix, Quantifier};
use super::{Formula, Sentence};

/// Syntactic fragment a sentence falls into after prenex normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FragmentTag {
    /// One first-order quantifier over a quantifier-free matrix.
    QF,
    /// `∀z ψ(z)` with `ψ` quantifier-free.
    UnivSFT,
    /// `∃X₁…∃Xₙ ∀z₁…∀z_p ψ` with `ψ` quantifier-free.
    ClassC { n: usize, p: usize },
    EMSO,
    FO,
    MSO,
    /// `∃X̄ ((∀z ψ₁(z)) ∧ (∃z̄ ψ₂(z̄)))`, matched on the sentence as written.
    EMSONormal,
}

impl fmt::Display for FragmentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FragmentTag::QF => f.write_str("QF"),
            FragmentTag::UnivSFT => f.write_str("UnivSFT"),
            FragmentTag::ClassC { n, p } => write!(f, "ClassC(n={n},p={p})"),
            FragmentTag::EMSO => f.write_str("EMSO"),
            FragmentTag::FO => f.write_str("FO"),
            FragmentTag::MSO => f.write_str("MSO"),
            FragmentTag::EMSONormal => f.write_str("EMSONormal"),
        }
    }
}

/// Parts of a sentence in the two-block existential normal form:
/// set variables, the universal variable and matrix, the existential
/// variables and matrix.
pub type NormalParts<'a> = (Vec<String>, String, &'a Formula, Vec<String>, &'a Formula);

pub fn emso_normal_parts(f: &Formula) -> Option<NormalParts<'_>> {
    let mut sets = Vec::new();
    let mut cur = f;
    while let Formula::ExistsSet(x, g) = cur {
        sets.push(x.clone());
        cur = g;
    }
    let Formula::And(a, b) = cur else { return None };
    let Formula::Forall(z, m1) = &**a else { return None };
    if !m1.is_quantifier_free() {
        return None;
    }
    let (prefix, m2) = split_prefix(b);
    if !m2.is_quantifier_free() || prefix.iter().any(|q| !matches!(q, Quantifier::Exists(_))) {
        return None;
    }
    let exist = prefix.iter().map(|q| q.var().to_string()).collect();
    Some((sets, z.clone(), m1, exist, m2))
}

/// `(n, p)` when the sentence is in class C after prenexing.
pub fn class_c_shape(s: &Sentence) -> Option<(usize, usize)> {
    let p = prenex_formula(&s.body).ok()?;
    let (prefix, m) = split_prefix(&p);
    shape(&prefix, m)
}

fn shape(prefix: &[Quantifier], m: &Formula) -> Option<(usize, usize)> {
    if !m.is_quantifier_free() {
        return None;
    }
    let n = prefix.iter().take_while(|q| matches!(q, Quantifier::ExistsSet(_))).count();
    let rest = &prefix[n..];
    rest.iter()
        .all(|q| matches!(q, Quantifier::Forall(_)))
        .then_some((n, rest.len()))
}

pub fn classify(s: &Sentence) -> BTreeSet<FragmentTag> {
    let mut tags = BTreeSet::from([FragmentTag::MSO]);
    let fo = !s.body.has_second_order_quantifier();
    if fo {
        tags.insert(FragmentTag::FO);
        tags.insert(FragmentTag::EMSO);
    }
    if emso_normal_parts(&s.body).is_some() {
        tags.insert(FragmentTag::EMSONormal);
        tags.insert(FragmentTag::EMSO);
    }
    let Ok(p) = prenex_formula(&s.body) else { return tags };
    let (prefix, m) = split_prefix(&p);
    let n_sets = prefix.iter().take_while(|q| matches!(q, Quantifier::ExistsSet(_))).count();
    if prefix[n_sets..].iter().all(|q| !q.is_set()) {
        tags.insert(FragmentTag::EMSO);
    }
    if let Some((n, p)) = shape(&prefix, m) {
        tags.insert(FragmentTag::ClassC { n, p });
        tags.insert(FragmentTag::EMSO);
        if n == 0 && p == 1 {
            tags.insert(FragmentTag::UnivSFT);
        }
    }
    if fo && prefix.len() == 1 && m.is_quantifier_free() {
        tags.insert(FragmentTag::QF);
    }
    tags
}
