//! Slot-based evaluator.
//!
//! Variables are resolved to slots once; term positions are looked up in a
//! per-size table. A maximal block of existential set quantifiers whose body
//! has no further set quantifiers is decided by grounding the body into a
//! propositional formula over one bit per (cell, set variable) and searching
//! for a satisfying assignment with chronological backtracking. Universal
//! blocks are handled as negated existential ones. Anything else falls back
//! to plain subset enumeration.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grid::{ColorId, Offset};
use crate::logic::{Atom, Formula, Sentence};

use super::{overflow_value, Assignment, Convention, FlagDefault, OutValue, Structure};

/// Maximum number of cells a set variable can range over.
const MAX_SET_CELLS: u32 = 128;

#[derive(Clone, Copy, Debug)]
enum Policy {
    Plain,
    Flag(FlagDefault),
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Color { c: ColorId, v: usize, o: usize },
    InSet { s: usize, v: usize, o: usize, policy: Policy },
    Eq { a: usize, oa: usize, b: usize, ob: usize },
    AtMostOne { s: usize },
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Exists { v: usize, body: Box<Node> },
    Forall { v: usize, body: Box<Node> },
    SetBlock { exists: bool, first: usize, count: usize, nested: bool, body: Box<Node> },
}

struct Compiler<'a> {
    conv: &'a Convention,
    fo: Vec<String>,
    so: Vec<String>,
    max_fo: usize,
    max_so: usize,
    offsets: Vec<Offset>,
    offset_ids: HashMap<Offset, usize>,
}

impl Compiler<'_> {
    fn offset(&mut self, o: Offset) -> usize {
        if let Some(&i) = self.offset_ids.get(&o) {
            return i;
        }
        self.offsets.push(o);
        self.offset_ids.insert(o, self.offsets.len() - 1);
        self.offsets.len() - 1
    }

    fn fo_slot(&self, x: &str) -> Result<usize> {
        self.fo
            .iter()
            .rposition(|y| y == x)
            .ok_or_else(|| Error::UnboundVariable(x.to_string()))
    }

    fn so_slot(&self, x: &str) -> Result<usize> {
        self.so
            .iter()
            .rposition(|y| y == x)
            .ok_or_else(|| Error::UnboundVariable(x.to_string()))
    }

    fn compile(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom(Atom::ColorAt(c, t)) => Node::Color {
                c: *c,
                v: self.fo_slot(&t.var)?,
                o: self.offset(t.offset),
            },
            Formula::Atom(Atom::InSet(x, t)) => Node::InSet {
                s: self.so_slot(x)?,
                v: self.fo_slot(&t.var)?,
                o: self.offset(t.offset),
                policy: self.conv.flag(x).map_or(Policy::Plain, Policy::Flag),
            },
            Formula::Atom(Atom::Equal(a, b)) => Node::Eq {
                a: self.fo_slot(&a.var)?,
                oa: self.offset(a.offset),
                b: self.fo_slot(&b.var)?,
                ob: self.offset(b.offset),
            },
            Formula::AtMostOne(x) => Node::AtMostOne { s: self.so_slot(x)? },
            Formula::Not(a) => Node::Not(Box::new(self.compile(a)?)),
            Formula::And(a, b) => Node::And(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Or(a, b) => Node::Or(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Implies(a, b) => Node::Implies(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Iff(a, b) => Node::Iff(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Exists(x, a) | Formula::Forall(x, a) => {
                self.fo.push(x.clone());
                self.max_fo = self.max_fo.max(self.fo.len());
                let v = self.fo.len() - 1;
                let body = self.compile(a);
                self.fo.pop();
                let body = Box::new(body?);
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists { v, body }
                } else {
                    Node::Forall { v, body }
                }
            }
            Formula::ExistsSet(..) | Formula::ForallSet(..) => {
                let exists = matches!(f, Formula::ExistsSet(..));
                let first = self.so.len();
                let mut cur = f;
                loop {
                    match (cur, exists) {
                        (Formula::ExistsSet(x, g), true) | (Formula::ForallSet(x, g), false) => {
                            self.so.push(x.clone());
                            cur = g;
                        }
                        _ => break,
                    }
                }
                self.max_so = self.max_so.max(self.so.len());
                let count = self.so.len() - first;
                let body = self.compile(cur);
                self.so.truncate(first);
                Node::SetBlock {
                    exists,
                    first,
                    count,
                    nested: cur.has_second_order_quantifier(),
                    body: Box::new(body?),
                }
            }
        })
    }
}

/// Term position relative to the evaluation domain.
#[derive(Clone, Copy, Debug)]
enum Loc {
    In(u32),
    Out(i64, i64),
}

struct Geometry {
    w: u32,
    h: u32,
    n: u32,
    noff: usize,
    table: Vec<Loc>,
}

impl Geometry {
    fn new(w: u32, h: u32, torus: bool, offsets: &[Offset]) -> Self {
        let n = w * h;
        let mut table = Vec::with_capacity(n as usize * offsets.len());
        for cell in 0..n {
            let (x, y) = ((cell % w) as i64, (cell / w) as i64);
            for o in offsets {
                let (tx, ty) = (x + o.dx as i64, y + o.dy as i64);
                table.push(if torus {
                    let (tx, ty) = (tx.rem_euclid(w as i64), ty.rem_euclid(h as i64));
                    Loc::In((ty * w as i64 + tx) as u32)
                } else if (0..w as i64).contains(&tx) && (0..h as i64).contains(&ty) {
                    Loc::In((ty * w as i64 + tx) as u32)
                } else {
                    Loc::Out(tx, ty)
                });
            }
        }
        Geometry {
            w,
            h,
            n,
            noff: offsets.len(),
            table,
        }
    }

    fn loc(&self, cell: u32, o: usize) -> Loc {
        self.table[cell as usize * self.noff + o]
    }

    /// Where the membership of `cell + offset` in a set is read from.
    fn set_cell(&self, cell: u32, o: usize, policy: Policy) -> SetRef {
        match self.loc(cell, o) {
            Loc::In(i) => SetRef::Cell(i),
            Loc::Out(x, y) => match policy {
                Policy::Plain => SetRef::Const(false),
                Policy::Flag(d) => match overflow_value(d, self.w, self.h, x, y) {
                    OutValue::Const(b) => SetRef::Const(b),
                    OutValue::Cell(cx, cy) => SetRef::Cell(cy * self.w + cx),
                },
            },
        }
    }
}

enum SetRef {
    Cell(u32),
    Const(bool),
}

struct Env {
    fo: Vec<u32>,
    sets: Vec<u128>,
}

/// A sentence or formula compiled for repeated evaluation.
pub struct Evaluator {
    root: Node,
    offsets: Vec<Offset>,
    fo_slots: usize,
    so_slots: usize,
    free_fo: Vec<String>,
    free_so: Vec<String>,
    uses_sets: bool,
    budget: u64,
}

impl Evaluator {
    pub fn new(s: &Sentence, conv: &Convention) -> Result<Self> {
        Self::with_free(&s.body, conv, &Assignment::new())
    }

    /// Compiles `f`, taking free variables from the keys of `env`.
    pub fn with_free(f: &Formula, conv: &Convention, env: &Assignment) -> Result<Self> {
        let free_fo: Vec<String> = env.elements.keys().cloned().collect();
        let free_so: Vec<String> = env.sets.keys().cloned().collect();
        let mut c = Compiler {
            conv,
            fo: free_fo.clone(),
            so: free_so.clone(),
            max_fo: free_fo.len(),
            max_so: free_so.len(),
            offsets: Vec::new(),
            offset_ids: HashMap::new(),
        };
        let root = c.compile(f)?;
        Ok(Evaluator {
            root,
            offsets: c.offsets,
            fo_slots: c.max_fo,
            so_slots: c.max_so,
            free_fo,
            free_so,
            uses_sets: f.has_set_atoms() || !env.sets.is_empty(),
            budget: crate::DEFAULT_BUDGET,
        })
    }

    /// Caps the number of set assignments tried by plain enumeration.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn eval(&self, c: Structure) -> Result<bool> {
        self.eval_env(c, &Assignment::new())
    }

    pub fn eval_env(&self, c: Structure, env: &Assignment) -> Result<bool> {
        let (w, h) = (c.width(), c.height());
        if self.uses_sets && w * h > MAX_SET_CELLS {
            return Err(Error::Invalid(format!(
                "set quantification is limited to {MAX_SET_CELLS} cells, domain has {}",
                w * h
            )));
        }
        let geo = Geometry::new(w, h, c.is_torus(), &self.offsets);
        let mut e = Env {
            fo: vec![0; self.fo_slots],
            sets: vec![0; self.so_slots],
        };
        for (i, x) in self.free_fo.iter().enumerate() {
            let (a, b) = env.elements.get(x).copied().ok_or_else(|| Error::UnboundVariable(x.clone()))?;
            e.fo[i] = b * w + a;
        }
        for (i, x) in self.free_so.iter().enumerate() {
            let s = env.sets.get(x).ok_or_else(|| Error::UnboundVariable(x.clone()))?;
            e.sets[i] = s.iter().fold(0u128, |m, &(a, b)| m | 1 << (b * w + a));
        }
        let ctx = Ctx {
            geo: &geo,
            colors: c.cells(),
            budget: self.budget,
        };
        ctx.eval(&self.root, &mut e)
    }
}

struct Ctx<'a> {
    geo: &'a Geometry,
    colors: &'a [ColorId],
    budget: u64,
}

impl Ctx<'_> {
    fn eval(&self, n: &Node, env: &mut Env) -> Result<bool> {
        Ok(match n {
            Node::Const(b) => *b,
            Node::Color { c, v, o } => match self.geo.loc(env.fo[*v], *o) {
                Loc::In(i) => self.colors[i as usize] == *c,
                Loc::Out(..) => false,
            },
            Node::InSet { s, v, o, policy } => match self.geo.set_cell(env.fo[*v], *o, *policy) {
                SetRef::Cell(i) => env.sets[*s] >> i & 1 == 1,
                SetRef::Const(b) => b,
            },
            Node::Eq { a, oa, b, ob } => {
                match (self.geo.loc(env.fo[*a], *oa), self.geo.loc(env.fo[*b], *ob)) {
                    (Loc::In(i), Loc::In(j)) => i == j,
                    _ => false,
                }
            }
            Node::AtMostOne { s } => env.sets[*s].count_ones() <= 1,
            Node::Not(a) => !self.eval(a, env)?,
            Node::And(a, b) => self.eval(a, env)? && self.eval(b, env)?,
            Node::Or(a, b) => self.eval(a, env)? || self.eval(b, env)?,
            Node::Implies(a, b) => !self.eval(a, env)? || self.eval(b, env)?,
            Node::Iff(a, b) => self.eval(a, env)? == self.eval(b, env)?,
            Node::Exists { v, body } => {
                for cell in 0..self.geo.n {
                    env.fo[*v] = cell;
                    if self.eval(body, env)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Forall { v, body } => {
                for cell in 0..self.geo.n {
                    env.fo[*v] = cell;
                    if !self.eval(body, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::SetBlock {
                exists,
                first,
                count,
                nested,
                body,
            } => {
                let found = if *nested {
                    self.enumerate(*first, *count, *exists, body, env)?
                } else {
                    let g = Grounder {
                        ctx: self,
                        first: *first,
                        count: *count,
                    };
                    let p = g.ground(body, env);
                    let p = if *exists { p } else { P::not(p) };
                    solve(&p, self.geo.n as usize * *count)
                };
                if *exists {
                    found
                } else {
                    !found
                }
            }
        })
    }

    // Plain enumeration; returns whether some assignment makes `body` equal `want`.
    fn enumerate(&self, first: usize, count: usize, want: bool, body: &Node, env: &mut Env) -> Result<bool> {
        let bits = self.geo.n as u64 * count as u64;
        if bits >= 64 || (1u64 << bits) > self.budget {
            return Err(Error::BudgetExceeded {
                needed: 1u128 << bits.min(127),
                budget: self.budget,
            });
        }
        let n = self.geo.n;
        for m in 0..1u64 << bits {
            for j in 0..count {
                let mut mask = 0u128;
                for cell in 0..n {
                    if m >> (cell as usize * count + j) & 1 == 1 {
                        mask |= 1 << cell;
                    }
                }
                env.sets[first + j] = mask;
            }
            if self.eval(body, env)? == want {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Propositional formula over grounded set bits.
#[derive(Clone, Debug)]
enum P {
    Const(bool),
    Var(u32),
    Not(Box<P>),
    And(Vec<P>),
    Or(Vec<P>),
    Iff(Box<P>, Box<P>),
}

impl P {
    fn not(p: P) -> P {
        match p {
            P::Const(b) => P::Const(!b),
            P::Not(q) => *q,
            q => P::Not(Box::new(q)),
        }
    }

    fn and(items: Vec<P>) -> P {
        let mut out = Vec::new();
        for p in items {
            match p {
                P::Const(true) => {}
                P::Const(false) => return P::Const(false),
                P::And(v) => out.extend(v),
                q => out.push(q),
            }
        }
        match out.len() {
            0 => P::Const(true),
            1 => out.pop().expect("one item"),
            _ => P::And(out),
        }
    }

    fn or(items: Vec<P>) -> P {
        let mut out = Vec::new();
        for p in items {
            match p {
                P::Const(false) => {}
                P::Const(true) => return P::Const(true),
                P::Or(v) => out.extend(v),
                q => out.push(q),
            }
        }
        match out.len() {
            0 => P::Const(false),
            1 => out.pop().expect("one item"),
            _ => P::Or(out),
        }
    }

    fn iff(a: P, b: P) -> P {
        match (a, b) {
            (P::Const(x), q) | (q, P::Const(x)) => {
                if x {
                    q
                } else {
                    P::not(q)
                }
            }
            (a, b) => P::Iff(Box::new(a), Box::new(b)),
        }
    }

    fn max_var(&self) -> Option<u32> {
        match self {
            P::Const(_) => None,
            P::Var(v) => Some(*v),
            P::Not(a) => a.max_var(),
            P::And(v) | P::Or(v) => v.iter().filter_map(P::max_var).max(),
            P::Iff(a, b) => a.max_var().max(b.max_var()),
        }
    }

    fn eval(&self, vals: &[bool]) -> bool {
        match self {
            P::Const(b) => *b,
            P::Var(v) => vals[*v as usize],
            P::Not(a) => !a.eval(vals),
            P::And(v) => v.iter().all(|p| p.eval(vals)),
            P::Or(v) => v.iter().any(|p| p.eval(vals)),
            P::Iff(a, b) => a.eval(vals) == b.eval(vals),
        }
    }
}

struct Grounder<'a, 'b> {
    ctx: &'a Ctx<'b>,
    first: usize,
    count: usize,
}

impl Grounder<'_, '_> {
    fn bit(&self, cell: u32, s: usize) -> P {
        P::Var(cell * self.count as u32 + (s - self.first) as u32)
    }

    fn in_block(&self, s: usize) -> bool {
        (self.first..self.first + self.count).contains(&s)
    }

    // Nodes here never contain set blocks, so evaluation of non-block atoms cannot fail.
    fn ground(&self, n: &Node, env: &mut Env) -> P {
        match n {
            Node::InSet { s, v, o, policy } if self.in_block(*s) => {
                match self.ctx.geo.set_cell(env.fo[*v], *o, *policy) {
                    SetRef::Cell(i) => self.bit(i, *s),
                    SetRef::Const(b) => P::Const(b),
                }
            }
            Node::AtMostOne { s } if self.in_block(*s) => {
                let n = self.ctx.geo.n;
                let mut pairs = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        pairs.push(P::or(vec![P::not(self.bit(i, *s)), P::not(self.bit(j, *s))]));
                    }
                }
                P::and(pairs)
            }
            Node::Const(_) | Node::Color { .. } | Node::InSet { .. } | Node::Eq { .. } | Node::AtMostOne { .. } => {
                P::Const(self.ctx.eval(n, env).expect("atoms evaluate without error"))
            }
            Node::Not(a) => P::not(self.ground(a, env)),
            Node::And(a, b) => P::and(vec![self.ground(a, env), self.ground(b, env)]),
            Node::Or(a, b) => P::or(vec![self.ground(a, env), self.ground(b, env)]),
            Node::Implies(a, b) => P::or(vec![P::not(self.ground(a, env)), self.ground(b, env)]),
            Node::Iff(a, b) => P::iff(self.ground(a, env), self.ground(b, env)),
            Node::Exists { v, body } | Node::Forall { v, body } => {
                let mut parts = Vec::with_capacity(self.ctx.geo.n as usize);
                for cell in 0..self.ctx.geo.n {
                    env.fo[*v] = cell;
                    parts.push(self.ground(body, env));
                }
                if matches!(n, Node::Exists { .. }) {
                    P::or(parts)
                } else {
                    P::and(parts)
                }
            }
            Node::SetBlock { .. } => unreachable!("grounded bodies have no set quantifiers"),
        }
    }
}

// Backtracking over variables 0..nvars; each top-level conjunct is checked as
// soon as its highest variable is assigned.
fn solve(p: &P, nvars: usize) -> bool {
    let conjuncts: Vec<&P> = match p {
        P::Const(b) => return *b,
        P::And(v) => v.iter().collect(),
        q => vec![q],
    };
    let mut buckets: Vec<Vec<&P>> = vec![Vec::new(); nvars.max(1)];
    for c in conjuncts {
        match c.max_var() {
            Some(v) => buckets[v as usize].push(c),
            None => {
                if !c.eval(&[]) {
                    return false;
                }
            }
        }
    }
    if nvars == 0 {
        return true;
    }
    let mut vals = vec![false; nvars];
    // tried[i]: values already attempted at depth i (0 = none, 1 = false, 2 = both)
    let mut tried = vec![0u8; nvars];
    let mut i = 0usize;
    loop {
        if tried[i] == 2 {
            tried[i] = 0;
            if i == 0 {
                return false;
            }
            i -= 1;
            continue;
        }
        vals[i] = tried[i] == 1;
        tried[i] += 1;
        if buckets[i].iter().all(|c| c.eval(&vals)) {
            if i + 1 == nvars {
                return true;
            }
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solver_small_cases() {
        // x0 & !x1, (x0 | x1) & (x0 <-> x1) & !x0
        let p = P::and(vec![P::Var(0), P::not(P::Var(1))]);
        assert!(solve(&p, 2));
        let q = P::and(vec![
            P::or(vec![P::Var(0), P::Var(1)]),
            P::iff(P::Var(0), P::Var(1)),
            P::not(P::Var(0)),
        ]);
        assert!(!solve(&q, 2));
        assert!(solve(&P::Const(true), 0));
        assert!(!solve(&P::Const(false), 3));
    }
}
