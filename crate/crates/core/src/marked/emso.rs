//! From a projected doubly-marked set back to an existential sentence.
//!
//! Each hidden track is stored in binary across `⌈log₂ size⌉` set
//! variables. Literals on neighbouring cells also require the cell to carry
//! some color, so under the atom-false window convention a cube is only
//! checked where it lies fully inside the window.

use crate::grid::Offset;
use crate::logic::{Formula, NameSupply, Sentence, Term};

use super::{Cube, Literal, MarkedSoficRepr, BASE};

fn width(size: usize) -> usize {
    let mut b = 0;
    while (1usize << b) < size {
        b += 1;
    }
    b
}

struct Encoding {
    /// Set variables of each hidden track, least significant bit first.
    vars: Vec<Vec<String>>,
    sizes: Vec<usize>,
    colors: usize,
}

impl Encoding {
    fn value(&self, t: usize, v: u8, at: &Term) -> Formula {
        Formula::and_all(self.vars[t - 1].iter().enumerate().map(|(i, x)| {
            let a = Formula::in_set(x, at.clone());
            if v >> i & 1 == 1 {
                a
            } else {
                Formula::not(a)
            }
        }))
    }

    fn exists(&self, at: &Term) -> Formula {
        Formula::or_all((0..self.colors).map(|c| Formula::color(c as u8, at.clone())))
    }

    fn literal(&self, l: &Literal, z: &str) -> Formula {
        let at = Term::var(z).shifted(l.at);
        let size = if l.track == BASE { self.colors } else { self.sizes[l.track - 1] };
        let vals = (0..size as u8).filter(|v| l.mask >> v & 1 == 1);
        if l.track == BASE {
            return Formula::or_all(vals.map(|c| Formula::color(c, at.clone())));
        }
        let body = Formula::or_all(vals.map(|v| self.value(l.track, v, &at)));
        if l.at == Offset::ZERO {
            body
        } else {
            Formula::and(self.exists(&at), body)
        }
    }

    fn cube(&self, c: &Cube, z: &str) -> Formula {
        Formula::and_all(c.literals().iter().map(|l| self.literal(l, z)))
    }

    fn any(&self, q: &[Cube], z: &str) -> Formula {
        Formula::or_all(q.iter().map(|c| self.cube(c, z)))
    }
}

/// `∃X̄ (∀z (codes valid ∧ no forbidden cube at z) ∧ exactly one q0 cell and one q1 cell)`.
pub fn marked_to_emso(m: &MarkedSoficRepr) -> Sentence {
    let s = m.schema();
    let mut names = NameSupply::new(s.base.names().iter().cloned().collect());
    let (z, y, z0, z1) = (names.fresh("z"), names.fresh("y"), names.fresh("z"), names.fresh("z"));
    let sizes: Vec<usize> = s.tracks.iter().map(|t| t.size()).collect();
    let vars: Vec<Vec<String>> = sizes.iter().map(|&n| (0..width(n)).map(|_| names.fresh("X")).collect()).collect();
    let enc = Encoding {
        vars,
        sizes,
        colors: s.base.len(),
    };
    let mut parts = Vec::new();
    for (i, &n) in enc.sizes.iter().enumerate() {
        if n < 1 << enc.vars[i].len() {
            parts.push(Formula::or_all((0..n as u8).map(|v| enc.value(i + 1, v, &Term::var(&z)))));
        }
    }
    for c in &m.marked.forbidden {
        parts.push(Formula::not(enc.cube(c, &z)));
    }
    let local = Formula::forall(z.clone(), Formula::and_all(parts));
    let only = |q: &[Cube], at: &str| Formula::implies(enc.any(q, &y), Formula::eq(Term::var(&y), Term::var(at)));
    let marked = Formula::exists(
        z0.clone(),
        Formula::exists(
            z1.clone(),
            Formula::and_all([
                enc.any(&m.marked.q0, &z0),
                enc.any(&m.marked.q1, &z1),
                Formula::forall(y.clone(), Formula::and(only(&m.marked.q0, &z0), only(&m.marked.q1, &z1))),
            ]),
        ),
    );
    let all: Vec<String> = enc.vars.iter().flatten().cloned().collect();
    Sentence::new_unchecked(s.base.clone(), Formula::and(local, marked).exists_sets(all))
}
