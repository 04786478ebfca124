//! A deliberately simple second evaluator, used only to cross-check
//! [`super::Evaluator`]. It walks the syntax tree directly, moves terms one
//! unit step at a time, and enumerates set values as explicit cell sets.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::logic::{Atom, Formula, Term};

use super::{Assignment, Convention, Overflow, Structure};

type Cell = (i64, i64);

struct Naive<'a> {
    c: Structure<'a>,
    conv: &'a Convention,
    w: i64,
    h: i64,
    budget: u64,
}

impl Naive<'_> {
    fn inside(&self, p: Cell) -> bool {
        p.0 >= 0 && p.1 >= 0 && p.0 < self.w && p.1 < self.h
    }

    fn position(&self, t: &Term, fo: &HashMap<String, Cell>) -> Result<Cell> {
        let mut p = *fo.get(&t.var).ok_or_else(|| Error::UnboundVariable(t.var.clone()))?;
        let steps = [
            (t.offset.dx, (1i64, 0i64)),
            (t.offset.dy, (0, 1)),
        ];
        for (count, (ux, uy)) in steps {
            let (ux, uy) = if count < 0 { (-ux, -uy) } else { (ux, uy) };
            for _ in 0..count.unsigned_abs() {
                p = (p.0 + ux, p.1 + uy);
                if self.c.is_torus() {
                    p = ((p.0 + self.w) % self.w, (p.1 + self.h) % self.h);
                }
            }
        }
        Ok(p)
    }

    fn color_at(&self, p: Cell) -> u8 {
        self.c.cells()[(p.1 * self.w + p.0) as usize]
    }

    fn member(&self, x: &str, p: Cell, sets: &HashMap<String, HashSet<Cell>>) -> Result<bool> {
        let set = sets.get(x).ok_or_else(|| Error::UnboundVariable(x.to_string()))?;
        if self.inside(p) {
            return Ok(set.contains(&p));
        }
        let Some(d) = self.conv.flag(x) else { return Ok(false) };
        let above = p.1 >= self.h;
        let below = p.1 < 0;
        let right = p.0 >= self.w;
        let left = p.0 < 0;
        let side = if (above || right) && !left && !below {
            d.ne
        } else if (below || left) && !above && !right {
            d.sw
        } else {
            return Ok(false);
        };
        Ok(match side {
            Overflow::Const(b) => b,
            Overflow::Clamp => {
                let q = (p.0.max(0).min(self.w - 1), p.1.max(0).min(self.h - 1));
                set.contains(&q)
            }
        })
    }

    fn cells(&self) -> Vec<Cell> {
        let mut v = Vec::new();
        for y in 0..self.h {
            for x in 0..self.w {
                v.push((x, y));
            }
        }
        v
    }

    fn eval(&self, f: &Formula, fo: &mut HashMap<String, Cell>, sets: &mut HashMap<String, HashSet<Cell>>) -> Result<bool> {
        match f {
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::Atom(Atom::ColorAt(c, t)) => {
                let p = self.position(t, fo)?;
                Ok(self.inside(p) && self.color_at(p) == *c)
            }
            Formula::Atom(Atom::InSet(x, t)) => {
                let p = self.position(t, fo)?;
                self.member(x, p, sets)
            }
            Formula::Atom(Atom::Equal(a, b)) => {
                let p = self.position(a, fo)?;
                let q = self.position(b, fo)?;
                Ok(self.inside(p) && self.inside(q) && p == q)
            }
            Formula::AtMostOne(x) => {
                let set = sets.get(x).ok_or_else(|| Error::UnboundVariable(x.clone()))?;
                Ok(set.len() <= 1)
            }
            Formula::Not(a) => Ok(!self.eval(a, fo, sets)?),
            Formula::And(a, b) => Ok(self.eval(a, fo, sets)? && self.eval(b, fo, sets)?),
            Formula::Or(a, b) => Ok(self.eval(a, fo, sets)? || self.eval(b, fo, sets)?),
            Formula::Implies(a, b) => Ok(!self.eval(a, fo, sets)? || self.eval(b, fo, sets)?),
            Formula::Iff(a, b) => Ok(self.eval(a, fo, sets)? == self.eval(b, fo, sets)?),
            Formula::Exists(x, a) | Formula::Forall(x, a) => {
                let want = matches!(f, Formula::Exists(..));
                let saved = fo.get(x).copied();
                let mut result = !want;
                for p in self.cells() {
                    fo.insert(x.clone(), p);
                    if self.eval(a, fo, sets)? == want {
                        result = want;
                        break;
                    }
                }
                match saved {
                    Some(p) => fo.insert(x.clone(), p),
                    None => fo.remove(x),
                };
                Ok(result)
            }
            Formula::ExistsSet(x, a) | Formula::ForallSet(x, a) => {
                let want = matches!(f, Formula::ExistsSet(..));
                let cells = self.cells();
                if cells.len() >= 63 || (1u64 << cells.len()) > self.budget {
                    return Err(Error::BudgetExceeded {
                        needed: 1u128 << cells.len().min(127),
                        budget: self.budget,
                    });
                }
                let saved = sets.get(x).cloned();
                let mut result = !want;
                for m in 0..1u64 << cells.len() {
                    let s: HashSet<Cell> = cells
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| m >> i & 1 == 1)
                        .map(|(_, p)| *p)
                        .collect();
                    sets.insert(x.clone(), s);
                    if self.eval(a, fo, sets)? == want {
                        result = want;
                        break;
                    }
                }
                match saved {
                    Some(s) => sets.insert(x.clone(), s),
                    None => sets.remove(x),
                };
                Ok(result)
            }
        }
    }
}

/// Evaluates `f` under `env` by direct recursion.
pub fn naive_eval(f: &Formula, c: Structure, conv: &Convention, env: &Assignment, budget: u64) -> Result<bool> {
    if c.is_torus() != conv.is_torus() {
        return Err(Error::ConventionMismatch(conv.name().to_string()));
    }
    let n = Naive {
        c,
        conv,
        w: c.width() as i64,
        h: c.height() as i64,
        budget,
    };
    let mut fo: HashMap<String, Cell> = env
        .elements
        .iter()
        .map(|(k, &(x, y))| (k.clone(), (x as i64, y as i64)))
        .collect();
    let mut sets: HashMap<String, HashSet<Cell>> = env
        .sets
        .iter()
        .map(|(k, s)| (k.clone(), s.iter().map(|&(x, y)| (x as i64, y as i64)).collect()))
        .collect();
    n.eval(f, &mut fo, &mut sets)
}
