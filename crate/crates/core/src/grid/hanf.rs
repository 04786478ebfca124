use std::collections::BTreeMap;

use super::{check_same, count_occurrences, language, square_domain, Pattern, TorusConfig};
use crate::error::Result;

/// Occurrence counts of every `n × n` pattern, capped at `k + 1`.
///
/// Patterns that do not occur are absent. Equality of two signatures with
/// the same `(n, k)` is exactly `(n, k)`-equivalence taken in both directions:
/// counts below `k` must match, a count of exactly `k` forces the other count
/// to be `k`, and counts above `k` only need to stay above `k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HanfSignature {
    pub n: u32,
    pub k: u64,
    pub counts: BTreeMap<Pattern, u64>,
}

impl HanfSignature {
    pub fn count(&self, p: &Pattern) -> u64 {
        self.counts.get(p).copied().unwrap_or(0)
    }
}

pub fn hanf_signature(c: &TorusConfig, n: u32, k: u64) -> Result<HanfSignature> {
    if n == 0 {
        return Err(crate::Error::Invalid("pattern side n must be at least 1".into()));
    }
    let mut counts = BTreeMap::new();
    for p in language(c, &square_domain(n))? {
        let m = count_occurrences(&p, c, k + 1)?;
        counts.insert(p, m);
    }
    Ok(HanfSignature { n, k, counts })
}

pub fn hanf_equiv(m: &TorusConfig, other: &TorusConfig, n: u32, k: u64) -> Result<bool> {
    check_same(m.alphabet(), other.alphabet())?;
    Ok(hanf_signature(m, n, k)? == hanf_signature(other, n, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{all_tori, Alphabet, Offset};

    // One direction of the count condition, as literally stated.
    fn one_way(a: u64, b: u64, k: u64) -> bool {
        (a >= k || b == a) && (a <= k || b > k)
    }

    #[test]
    fn capped_equality_matches_symmetrized_definition() {
        for k in 0..4u64 {
            for a in 0..k + 4 {
                for b in 0..k + 4 {
                    let sym = one_way(a, b, k) && one_way(b, a, k);
                    assert_eq!(sym, a.min(k + 1) == b.min(k + 1), "a={a} b={b} k={k}");
                }
            }
        }
    }

    #[test]
    fn signature_examples() {
        let a = Alphabet::new(["W", "L", "B"]).unwrap();
        let w = TorusConfig::filled(a.clone(), 1, 1, 0).unwrap();
        let sig = hanf_signature(&w, 1, 3).unwrap();
        assert_eq!(sig.counts, BTreeMap::from([(Pattern::single(0), 1)]));

        let l = TorusConfig::filled(a.clone(), 2, 2, 1).unwrap();
        assert_eq!(hanf_signature(&l, 1, 2).unwrap().count(&Pattern::single(1)), 3);

        let c = TorusConfig::from_names(&a, 3, 2, &["W", "L", "B", "B", "L", "L"]).unwrap();
        let t = c.translate(Offset::new(2, 1));
        assert_eq!(hanf_signature(&c, 2, 1).unwrap(), hanf_signature(&t, 2, 1).unwrap());
    }

    #[test]
    fn equiv_examples() {
        let a = Alphabet::new(["W", "L", "B"]).unwrap();
        let lb = TorusConfig::from_names(&a, 2, 1, &["L", "B"]).unwrap();
        let bl = TorusConfig::from_names(&a, 2, 1, &["B", "L"]).unwrap();
        for k in 0..4 {
            assert!(hanf_equiv(&lb, &lb, 2, k).unwrap());
            assert!(hanf_equiv(&lb, &bl, 1, k).unwrap());
        }
        let w = TorusConfig::filled(a.clone(), 1, 1, 0).unwrap();
        let l = TorusConfig::filled(a.clone(), 1, 1, 1).unwrap();
        assert!(!hanf_equiv(&w, &l, 1, 1).unwrap());
        let other = Alphabet::new(["W", "L"]).unwrap();
        let w2 = TorusConfig::filled(other, 1, 1, 0).unwrap();
        assert!(hanf_equiv(&w, &w2, 1, 1).is_err());
    }

    #[test]
    fn refinement_on_small_tori() {
        let a = Alphabet::new(["W", "L"]).unwrap();
        let tori: Vec<_> = all_tori(&a, 2, 2).collect();
        for m in &tori {
            for n in &tori {
                let fine = hanf_equiv(m, n, 2, 2).unwrap();
                if fine {
                    assert!(hanf_equiv(m, n, 1, 2).unwrap());
                    assert!(hanf_equiv(m, n, 2, 1).unwrap());
                    assert!(hanf_equiv(m, n, 1, 1).unwrap());
                }
            }
        }
    }
}
