use std::time::Instant;

use rayon::prelude::*;

use super::oracle::{marked_direct, occurrences_in_window, zone_mask};
use super::{Counterexample, EquivReport, Verdict, Witness};
use crate::compile::search::{search, Placements};
use crate::compile::Sft;
use crate::error::{Error, Result};
use crate::grid::{check_same, config_count, Alphabet, ColorId, Offset, Pattern, TorusConfig, WindowConfig};
use crate::logic::{prenex, split_prefix, Atom, Formula, Quantifier, Sentence};
use crate::marked::{acceptance_by_markers, MarkedSoficRepr};
use crate::semantics::{eval_torus, Convention, Evaluator, Structure};
use crate::transforms::Count;

/// Sizes with at most this many configurations are enumerated outright by
/// [`sft_vs_formula`]; larger ones go through the anchored search.
pub const ENUMERATION_LIMIT: u128 = 65_536;

/// Sizes up to the bounds, by area and then wider first.
pub fn sweep_sizes(max_w: u32, max_h: u32) -> Vec<(u32, u32)> {
    let mut v: Vec<(u32, u32)> = (1..=max_w).flat_map(|w| (1..=max_h).map(move |h| (w, h))).collect();
    v.sort_by_key(|&(w, h)| (w * h, std::cmp::Reverse(w)));
    v
}

/// The `i`-th configuration of a size in sweep order: the digits of `i` in
/// base `q`, cell 0 least significant.
pub fn sweep_order(q: usize, cells: usize, mut i: u64) -> Vec<ColorId> {
    let mut out = vec![0; cells];
    for c in out.iter_mut() {
        *c = (i % q as u64) as ColorId;
        i /= q as u64;
    }
    out
}

/// Outcome of one size: the first disagreement, if any.
type Found = Option<(u64, bool, bool)>;

fn first_disagreement<F>(total: u64, test: F) -> Result<Found>
where
    F: Fn(u64) -> Result<(bool, bool)> + Sync,
{
    let hit = (0..total)
        .into_par_iter()
        .map(|i| test(i).map(|(l, r)| (i, l, r)))
        .find_first(|r| !matches!(r, Ok((_, l, r)) if l == r));
    hit.transpose()
}

fn budget_note(e: &Error) -> Option<String> {
    match e {
        Error::BudgetExceeded { .. } => Some(e.to_string()),
        _ => None,
    }
}

enum Outcome {
    Done(u64),
    Fail(u64, Counterexample),
    Stopped(String),
}

/// Enumerates one size in sweep order.
fn sweep_size<F>(a: &Alphabet, w: u32, h: u32, budget: u64, test: F) -> Result<Outcome>
where
    F: Fn(&TorusConfig) -> Result<(bool, bool)> + Sync,
{
    let total = config_count(a.len(), w, h);
    if total > budget as u128 {
        return Ok(Outcome::Stopped(format!("budget reached before {w}x{h}")));
    }
    let torus = |i: u64| TorusConfig::new(a.clone(), w, h, sweep_order(a.len(), (w * h) as usize, i));
    match first_disagreement(total as u64, |i| test(&torus(i)?)) {
        Ok(None) => Ok(Outcome::Done(total as u64)),
        Ok(Some((i, left, right))) => Ok(Outcome::Fail(
            i + 1,
            Counterexample {
                witness: Witness::Torus(torus(i)?),
                assignment: Vec::new(),
                left,
                right,
            },
        )),
        Err(e) => budget_note(&e).map(Outcome::Stopped).ok_or(e),
    }
}

impl EquivReport {
    /// Records one size; returns whether the sweep should go on.
    fn record(&mut self, size: (u32, u32), o: Outcome) -> bool {
        match o {
            Outcome::Done(n) => {
                self.visited += n;
                self.sizes.push(size);
                true
            }
            Outcome::Fail(n, c) => {
                self.visited += n;
                self.verdict = Verdict::Fail;
                self.counterexample = Some(c);
                false
            }
            Outcome::Stopped(note) => {
                self.verdict = Verdict::Inconclusive;
                self.note = Some(note);
                false
            }
        }
    }
}

/// Compares two sentences on every torus up to `max_w × max_h`.
pub fn equiv_on_tori(s1: &Sentence, s2: &Sentence, max_w: u32, max_h: u32, budget: u64) -> Result<EquivReport> {
    check_same(&s1.alphabet, &s2.alphabet)?;
    let start = Instant::now();
    let (e1, e2) = (Evaluator::new(s1, &Convention::Torus)?, Evaluator::new(s2, &Convention::Torus)?);
    let mut rep = EquivReport::new();
    for size in sweep_sizes(max_w, max_h) {
        let left = budget.saturating_sub(rep.visited);
        let o = sweep_size(&s1.alphabet, size.0, size.1, left, |c| {
            Ok((e1.eval(Structure::Torus(c))?, e2.eval(Structure::Torus(c))?))
        })?;
        if !rep.record(size, o) {
            break;
        }
    }
    rep.elapsed = start.elapsed();
    Ok(rep)
}

/// `∀z ψ` with `ψ` quantifier-free and free of set atoms.
fn univ_matrix(s: &Sentence) -> Option<Formula> {
    let p = prenex(s).ok()?;
    let (prefix, m) = split_prefix(&p.body);
    let ok = matches!(prefix.as_slice(), [Quantifier::Forall(_)])
        && m.is_quantifier_free()
        && !m.has_set_atoms()
        && !m.has_at_most_one();
    ok.then(|| m.clone())
}

/// Torus truth of a one-variable matrix at a point, colors read through `read`.
fn holds(f: &Formula, w: u32, h: u32, read: &dyn Fn(Offset) -> ColorId) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(Atom::ColorAt(c, t)) => read(t.offset) == *c,
        Formula::Atom(Atom::Equal(a, b)) => {
            let d = a.offset - b.offset;
            d.dx.rem_euclid(w as i32) == 0 && d.dy.rem_euclid(h as i32) == 0
        }
        Formula::Not(g) => !holds(g, w, h, read),
        Formula::And(a, b) => holds(a, w, h, read) && holds(b, w, h, read),
        Formula::Or(a, b) => holds(a, w, h, read) || holds(b, w, h, read),
        Formula::Implies(a, b) => !holds(a, w, h, read) || holds(b, w, h, read),
        Formula::Iff(a, b) => holds(a, w, h, read) == holds(b, w, h, read),
        _ => unreachable!("checked by univ_matrix"),
    }
}

fn wrap(w: u32, h: u32, p: usize, o: Offset) -> usize {
    let x = (p as i64 % w as i64 + o.dx as i64).rem_euclid(w as i64);
    let y = (p as i64 / w as i64 + o.dy as i64).rem_euclid(h as i64);
    (y * w as i64 + x) as usize
}

/// Cells of a torus search ordered with the fixed cells first.
struct Ranked {
    order: Vec<usize>,
    rank: Vec<usize>,
    domains: Vec<Vec<ColorId>>,
}

impl Ranked {
    fn new(n: usize, q: usize, fixed: &[(usize, ColorId)]) -> Self {
        let mut order: Vec<usize> = fixed.iter().map(|&(i, _)| i).collect();
        order.extend((0..n).filter(|i| !fixed.iter().any(|&(j, _)| j == *i)));
        let mut rank = vec![0; n];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let domains = order
            .iter()
            .map(|i| match fixed.iter().find(|&&(j, _)| j == *i) {
                Some(&(_, c)) => vec![c],
                None => (0..q as ColorId).collect(),
            })
            .collect();
        Ranked { order, rank, domains }
    }

    fn cells(&self, ranked: &[ColorId]) -> Vec<ColorId> {
        let mut out = vec![0; ranked.len()];
        for (r, &i) in self.order.iter().enumerate() {
            out[i] = ranked[r];
        }
        out
    }
}

/// Places `p` with its origin at cell 0; `None` if two of its cells collide
/// with different colors.
fn anchor(w: u32, h: u32, p: impl Iterator<Item = (Offset, ColorId)>) -> Option<Vec<(usize, ColorId)>> {
    let mut out: Vec<(usize, ColorId)> = Vec::new();
    for (o, c) in p {
        let i = wrap(w, h, 0, o);
        match out.iter().find(|(j, _)| *j == i) {
            Some(&(_, d)) if d != c => return None,
            Some(_) => {}
            None => out.push((i, c)),
        }
    }
    Some(out)
}

/// Searches for a torus on which the two sides disagree, using translation
/// invariance: either some forbidden pattern sits at the origin while `ψ`
/// holds everywhere, or `ψ` fails at the origin while no forbidden pattern
/// occurs anywhere.
fn anchored_search(x: &Sft, s: &Sentence, psi: &Formula, w: u32, h: u32, budget: u64) -> Result<Outcome> {
    let q = x.alphabet().len();
    let n = (w * h) as usize;
    let mut domain: Vec<Offset> = psi
        .atoms()
        .into_iter()
        .filter_map(|a| match a {
            Atom::ColorAt(_, t) => Some(t.offset),
            _ => None,
        })
        .collect();
    domain.sort();
    domain.dedup();
    let mut visited = 0u64;
    let mut found: Option<Vec<ColorId>> = None;

    let psi_everywhere = |r: &Ranked| -> Vec<Vec<usize>> {
        let mut buckets = vec![Vec::new(); n];
        for p in 0..n {
            let top = domain.iter().map(|&o| r.rank[wrap(w, h, p, o)]).max().unwrap_or(0);
            buckets[top].push(p);
        }
        buckets
    };
    for pat in x.forbidden() {
        let Some(fixed) = anchor(w, h, pat.iter()) else { continue };
        let r = Ranked::new(n, q, &fixed);
        let buckets = psi_everywhere(&r);
        let mut hit = None;
        let left = budget.saturating_sub(visited);
        let res = search(
            &r.domains,
            left,
            |i, cells| {
                buckets[i].iter().all(|&p| holds(psi, w, h, &|o| cells[r.rank[wrap(w, h, p, o)]]))
            },
            |cells| {
                hit = Some(r.cells(cells));
                false
            },
        );
        match res {
            Ok(v) => visited += v,
            Err(e) => return budget_note(&e).map(Outcome::Stopped).ok_or(e),
        }
        if hit.is_some() {
            found = hit;
            break;
        }
    }

    if found.is_none() {
        let mut digits = vec![0 as ColorId; domain.len()];
        'outer: loop {
            let read = |o: Offset| digits[domain.binary_search(&o).expect("offset in domain")];
            if !holds(psi, w, h, &read) {
                if let Some(fixed) = anchor(w, h, domain.iter().copied().zip(digits.iter().copied())) {
                    let r = Ranked::new(n, q, &fixed);
                    let mut buckets: Vec<Vec<Vec<(usize, ColorId)>>> = vec![Vec::new(); n];
                    for pat in x.forbidden() {
                        for p in 0..n {
                            let cells: Option<Vec<(usize, ColorId)>> = {
                                let mut out: Vec<(usize, ColorId)> = Vec::new();
                                let mut ok = true;
                                for (o, c) in pat.iter() {
                                    let j = r.rank[wrap(w, h, p, o)];
                                    match out.iter().find(|(k, _)| *k == j) {
                                        Some(&(_, d)) if d != c => ok = false,
                                        Some(_) => {}
                                        None => out.push((j, c)),
                                    }
                                }
                                ok.then_some(out)
                            };
                            if let Some(cells) = cells {
                                let top = cells.iter().map(|&(j, _)| j).max().unwrap_or(0);
                                buckets[top].push(cells);
                            }
                        }
                    }
                    let mut hit = None;
                    let left = budget.saturating_sub(visited);
                    let res = search(
                        &r.domains,
                        left,
                        |i, cells| !buckets[i].iter().any(|pl| pl.iter().all(|&(j, c)| cells[j] == c)),
                        |cells| {
                            hit = Some(r.cells(cells));
                            false
                        },
                    );
                    match res {
                        Ok(v) => visited += v,
                        Err(e) => return budget_note(&e).map(Outcome::Stopped).ok_or(e),
                    }
                    if hit.is_some() {
                        found = hit;
                        break 'outer;
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == digits.len() {
                    break 'outer;
                }
                digits[i] += 1;
                if (digits[i] as usize) < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    let Some(cells) = found else { return Ok(Outcome::Done(visited)) };
    let c = TorusConfig::new(x.alphabet().clone(), w, h, cells)?;
    let (left, right) = (eval_torus(s, &c)?, x.admits_torus(&c)?);
    if left == right {
        return Err(Error::Invalid(format!(
            "anchored search and evaluator disagree on a {w}x{h} torus"
        )));
    }
    Ok(Outcome::Fail(
        visited,
        Counterexample {
            witness: Witness::Torus(c),
            assignment: Vec::new(),
            left,
            right,
        },
    ))
}

/// Compares torus models of `s` with torus members of `x` on the given sizes.
///
/// Sizes with at most [`ENUMERATION_LIMIT`] configurations are enumerated.
/// Larger ones, when `s` is `∀z ψ`, are settled by an exact anchored search
/// whose `visited` count is search nodes rather than configurations.
pub fn sft_vs_formula(x: &Sft, s: &Sentence, sizes: &[(u32, u32)], budget: u64) -> Result<EquivReport> {
    check_same(x.alphabet(), &s.alphabet)?;
    let start = Instant::now();
    let ev = Evaluator::new(s, &Convention::Torus)?;
    let psi = univ_matrix(s);
    let a = x.alphabet();
    let mut rep = EquivReport::new();
    for &(w, h) in sizes {
        let left = budget.saturating_sub(rep.visited);
        let o = match &psi {
            Some(psi) if config_count(a.len(), w, h) > ENUMERATION_LIMIT => anchored_search(x, s, psi, w, h, left)?,
            _ => {
                let pl = Placements::torus(x.forbidden(), w, h);
                sweep_size(a, w, h, left, |c| Ok((ev.eval(Structure::Torus(c))?, pl.admits(c.cells()))))?
            }
        };
        if !rep.record((w, h), o) {
            break;
        }
    }
    rep.elapsed = start.elapsed();
    Ok(rep)
}

/// Compares the per-marker-pair window acceptance of `m` with the direct
/// count of `p` (exactly or at least `k` occurrences in the zone) on every
/// window of the given sizes. The first failing window in sweep order is
/// reported together with the marker pair.
pub fn marked_window_suite(
    m: &MarkedSoficRepr,
    p: &Pattern,
    k: usize,
    count: Count,
    sizes: &[(u32, u32)],
    budget: u64,
) -> Result<EquivReport> {
    let start = Instant::now();
    let a = m.target();
    let mut rep = EquivReport::new();
    for &(w, h) in sizes {
        let total = config_count(a.len(), w, h);
        if total + rep.visited as u128 > budget as u128 {
            rep.verdict = Verdict::Inconclusive;
            rep.note = Some(format!("budget reached before {w}x{h}"));
            break;
        }
        let (space, acc) = match acceptance_by_markers(m, w, h, budget) {
            Ok(r) => r,
            Err(e) => match budget_note(&e) {
                Some(n) => {
                    rep.verdict = Verdict::Inconclusive;
                    rep.note = Some(n);
                    break;
                }
                None => return Err(e),
            },
        };
        let cells: Vec<(u32, u32)> = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).collect();
        let pairs: Vec<((u32, u32), (u32, u32), u64)> = cells
            .iter()
            .flat_map(|&u| cells.iter().map(move |&v| (u, v, zone_mask(w, h, u, v))))
            .collect();
        let window = |i: u64| WindowConfig::new(a.clone(), w, h, sweep_order(a.len(), (w * h) as usize, i));
        let hit = (0..total as u64).into_par_iter().find_map_first(|i| {
            let c = window(i).expect("valid window");
            let occ = occurrences_in_window(p, &c);
            let idx = space.index(&c);
            pairs.iter().find_map(|&(u, v, zone)| {
                let got = acc.get(&(u, v)).is_some_and(|s| s.contains(idx));
                let want = marked_direct(count, k, occ, zone, u, v);
                (got != want).then_some((i, u, v, got, want))
            })
        });
        if let Some((i, u, v, got, want)) = hit {
            rep.visited += i + 1;
            rep.verdict = Verdict::Fail;
            rep.counterexample = Some(Counterexample {
                witness: Witness::Window(window(i)?),
                assignment: vec![("q0".into(), u), ("q1".into(), v)],
                left: got,
                right: want,
            });
            break;
        }
        rep.visited += total as u64;
        rep.sizes.push((w, h));
    }
    rep.elapsed = start.elapsed();
    Ok(rep)
}
