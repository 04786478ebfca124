use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compile::Sft;
use crate::grid::{Alphabet, Offset, Pattern, TorusConfig};
use crate::logic::{FragmentTag, Formula, Sentence, Term};
use crate::semantics::Assignment;

const COLOR_NAMES: [&str; 6] = ["W", "L", "B", "R", "G", "Y"];

/// Size knobs for the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub colors: usize,
    /// Leaves of a generated matrix.
    pub atoms: usize,
    /// Offsets lie in a `(span + 1) × (span + 1)` box around the origin.
    pub span: u32,
    /// Allow equality atoms between terms.
    pub equality: bool,
    /// Forbidden patterns of a generated SFT.
    pub patterns: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            colors: 2,
            atoms: 4,
            span: 2,
            equality: true,
            patterns: 2,
        }
    }
}

pub(crate) fn alphabet(colors: usize) -> Alphabet {
    Alphabet::new(COLOR_NAMES[..colors.clamp(1, COLOR_NAMES.len())].iter().copied()).expect("distinct names")
}

fn offset(rng: &mut ChaCha8Rng, span: u32) -> Offset {
    let lo = -((span / 2) as i32);
    let hi = lo + span as i32;
    Offset::new(rng.gen_range(lo..=hi), rng.gen_range(lo..=hi))
}

struct Builder<'a> {
    rng: ChaCha8Rng,
    p: &'a GenParams,
}

impl Builder<'_> {
    fn term(&mut self, v: &str) -> Term {
        let o = offset(&mut self.rng, self.p.span);
        Term::var(v).shifted(o)
    }

    fn leaf(&mut self, fo: &[String], sets: &[String]) -> Formula {
        let v = fo.choose(&mut self.rng).expect("a first-order variable").clone();
        let roll = self.rng.gen_range(0..10);
        if roll < 2 && !sets.is_empty() {
            let x = sets.choose(&mut self.rng).expect("nonempty").clone();
            Formula::in_set(x, self.term(&v))
        } else if roll == 2 && self.p.equality && fo.len() > 1 {
            let u = fo.choose(&mut self.rng).expect("nonempty").clone();
            let (a, b) = (self.term(&v), self.term(&u));
            Formula::eq(a, b)
        } else {
            let c = self.rng.gen_range(0..self.p.colors.max(1)) as u8;
            Formula::color(c, self.term(&v))
        }
    }

    fn combine(&mut self, mut items: Vec<Formula>) -> Formula {
        while items.len() > 1 {
            let i = self.rng.gen_range(0..items.len() - 1);
            let a = items.remove(i);
            let b = items.remove(i);
            let f = match self.rng.gen_range(0..5) {
                0 | 1 => Formula::and(a, b),
                2 | 3 => Formula::or(a, b),
                _ => Formula::implies(a, b),
            };
            items.insert(i, f);
        }
        let f = items.pop().unwrap_or(Formula::True);
        if self.rng.gen_bool(0.3) {
            Formula::not(f)
        } else {
            f
        }
    }

    /// A quantifier-free matrix using every listed variable at least once.
    fn matrix(&mut self, fo: &[String], sets: &[String]) -> Formula {
        let mut leaves = Vec::new();
        for v in fo {
            let c = self.rng.gen_range(0..self.p.colors.max(1)) as u8;
            leaves.push(Formula::color(c, self.term(v)));
        }
        for x in sets {
            let v = fo.choose(&mut self.rng).expect("nonempty").clone();
            leaves.push(Formula::in_set(x.clone(), self.term(&v)));
        }
        while leaves.len() < self.p.atoms.max(1) {
            leaves.push(self.leaf(fo, sets));
        }
        leaves.shuffle(&mut self.rng);
        let mut parts = Vec::new();
        for l in leaves {
            parts.push(if self.rng.gen_bool(0.35) { Formula::not(l) } else { l });
        }
        self.combine(parts)
    }
}

fn names(stem: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{stem}{i}")).collect()
}

/// A random sentence of the requested shape. Shapes: `QF` one quantifier
/// (either kind); `UnivSFT` `∀z ψ`; `ClassC{n,p}`; `EMSO` set block over an
/// `∀∃` prefix; `EMSONormal` `∃X̄ (∀z ψ₁ ∧ ∃y ψ₂)`; `FO` two quantifiers with
/// one nested under a connective; `MSO` a universal set quantifier.
pub fn gen_sentence(seed: u64, fragment: FragmentTag, params: &GenParams) -> Sentence {
    let mut b = Builder {
        rng: ChaCha8Rng::seed_from_u64(seed),
        p: params,
    };
    let a = alphabet(params.colors);
    let z = vec!["z".to_string()];
    let body = match fragment {
        FragmentTag::QF => {
            let m = b.matrix(&z, &[]);
            if b.rng.gen_bool(0.5) {
                Formula::forall("z", m)
            } else {
                Formula::exists("z", m)
            }
        }
        FragmentTag::UnivSFT => Formula::forall("z", b.matrix(&z, &[])),
        FragmentTag::ClassC { n, p } => {
            let sets = names("X", n);
            let fo = names("z", p.max(1));
            b.matrix(&fo, &sets).foralls(fo).exists_sets(sets)
        }
        FragmentTag::EMSO => {
            let sets = names("X", 1 + b.rng.gen_range(0..2));
            let fo = names("z", 2);
            let m = b.matrix(&fo, &sets);
            Formula::forall(&fo[0], Formula::exists(&fo[1], m)).exists_sets(sets)
        }
        FragmentTag::EMSONormal => {
            let sets = names("X", 1 + b.rng.gen_range(0..2));
            let m1 = b.matrix(&z, &sets);
            let y = vec!["y".to_string()];
            let m2 = b.matrix(&y, &sets);
            Formula::and(Formula::forall("z", m1), Formula::exists("y", m2)).exists_sets(sets)
        }
        FragmentTag::FO => {
            let inner = b.matrix(&names("z", 2), &[]);
            let outer = b.matrix(&names("z", 1), &[]);
            let q = if b.rng.gen_bool(0.5) { Formula::exists("z2", inner) } else { Formula::forall("z2", inner) };
            let body = if b.rng.gen_bool(0.5) { Formula::and(outer, q) } else { Formula::or(outer, q) };
            if b.rng.gen_bool(0.5) {
                Formula::forall("z1", body)
            } else {
                Formula::exists("z1", body)
            }
        }
        FragmentTag::MSO => {
            let sets = names("X", 1);
            let m = b.matrix(&z, &sets);
            Formula::forall_set("X1", Formula::exists("z", m))
        }
    };
    Sentence::new(a, body).expect("generated sentences are closed")
}

/// A random SFT: `params.patterns` forbidden patterns of one to three cells.
pub fn gen_sft(seed: u64, params: &GenParams) -> Sft {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = alphabet(params.colors);
    let mut forbidden = Vec::new();
    for _ in 0..params.patterns {
        let size = rng.gen_range(1..=3);
        let mut cells = std::collections::BTreeMap::new();
        cells.insert(Offset::ZERO, rng.gen_range(0..a.len()) as u8);
        while cells.len() < size {
            let o = offset(&mut rng, params.span);
            cells.insert(o, rng.gen_range(0..a.len()) as u8);
        }
        forbidden.push(Pattern::new(cells).expect("nonempty"));
    }
    Sft::new(a, forbidden).expect("colors from the alphabet")
}

/// A uniformly random `w × h` torus over the first `colors` default names.
pub fn gen_torus(seed: u64, colors: usize, w: u32, h: u32) -> TorusConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = alphabet(colors);
    let cells = (0..w * h).map(|_| rng.gen_range(0..a.len()) as u8).collect();
    TorusConfig::new(a, w, h, cells).expect("valid dimensions")
}

/// An open formula with one free element variable `z1` and one free set
/// variable `F`, a torus, and an assignment for both.
pub fn gen_open_triple(seed: u64, params: &GenParams, w: u32, h: u32) -> (Sentence, TorusConfig, Assignment) {
    let mut b = Builder {
        rng: ChaCha8Rng::seed_from_u64(seed),
        p: params,
    };
    let fo = names("z", 2);
    let sets = vec!["F".to_string(), "X1".to_string()];
    let m = b.matrix(&fo, &sets);
    let q = match b.rng.gen_range(0..4) {
        0 => Formula::exists("z2", m),
        1 => Formula::forall("z2", m),
        2 => Formula::exists_set("X1", Formula::forall("z2", m)),
        _ => Formula::forall_set("X1", Formula::exists("z2", m)),
    };
    let q = if q.free_set_vars().contains("X1") { Formula::exists_set("X1", q) } else { q };
    let q = if q.free_vars().contains("z2") { Formula::exists("z2", q) } else { q };
    let c = gen_torus(b.rng.gen(), params.colors, w, h);
    let at = (b.rng.gen_range(0..w), b.rng.gen_range(0..h));
    let f: Vec<(u32, u32)> = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .filter(|_| b.rng.gen_bool(0.5))
        .collect();
    let env = Assignment::new().element("z1", at).set("F", f);
    (Sentence::new_unchecked(alphabet(params.colors), q), c, env)
}
