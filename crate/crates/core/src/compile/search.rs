//! Backtracking over rectangular configurations.

use crate::error::{Error, Result};
use crate::grid::{ColorId, Pattern};

/// Forbidden-pattern placements, bucketed by the highest cell they cover so
/// each is tested exactly once, as soon as it is fully assigned.
pub(crate) struct Placements {
    buckets: Vec<Vec<Vec<(u32, ColorId)>>>,
}

impl Placements {
    /// Placements on a `w × h` torus (coordinates wrap). Placements that
    /// would need two colors on one cell are dropped: they can never occur.
    pub fn torus<'a, I: IntoIterator<Item = &'a Pattern>>(forbidden: I, w: u32, h: u32) -> Self {
        Self::build(forbidden, w, h, true)
    }

    /// Placements lying fully inside a `w × h` window.
    pub fn window<'a, I: IntoIterator<Item = &'a Pattern>>(forbidden: I, w: u32, h: u32) -> Self {
        Self::build(forbidden, w, h, false)
    }

    fn build<'a, I: IntoIterator<Item = &'a Pattern>>(forbidden: I, w: u32, h: u32, torus: bool) -> Self {
        let n = (w * h) as usize;
        let mut buckets = vec![Vec::new(); n];
        let patterns: Vec<&Pattern> = forbidden.into_iter().collect();
        for y0 in 0..h as i64 {
            for x0 in 0..w as i64 {
                'p: for p in &patterns {
                    let mut cells: Vec<(u32, ColorId)> = Vec::with_capacity(p.len());
                    for (o, c) in p.iter() {
                        let (mut x, mut y) = (x0 + o.dx as i64, y0 + o.dy as i64);
                        if torus {
                            x = x.rem_euclid(w as i64);
                            y = y.rem_euclid(h as i64);
                        } else if x < 0 || y < 0 || x >= w as i64 || y >= h as i64 {
                            continue 'p;
                        }
                        let i = (y * w as i64 + x) as u32;
                        match cells.iter().find(|(j, _)| *j == i) {
                            Some((_, d)) if *d != c => continue 'p,
                            Some(_) => {}
                            None => cells.push((i, c)),
                        }
                    }
                    if let Some(&(top, _)) = cells.iter().max_by_key(|(i, _)| *i) {
                        buckets[top as usize].push(cells);
                    }
                }
            }
        }
        for b in &mut buckets {
            b.sort();
            b.dedup();
        }
        Placements { buckets }
    }

    /// Whether some placement whose highest cell is `i` matches `cells`.
    pub fn violated_at(&self, i: usize, cells: &[ColorId]) -> bool {
        self.buckets[i]
            .iter()
            .any(|pl| pl.iter().all(|&(j, c)| cells[j as usize] == c))
    }

    pub fn admits(&self, cells: &[ColorId]) -> bool {
        (0..cells.len()).all(|i| !self.violated_at(i, cells))
    }
}

/// Depth-first search over `cells[i] ∈ domains[i]`, in index order and
/// increasing color order (so solutions come out lexicographically).
///
/// `check(i, cells)` is called after cell `i` is set and may reject the
/// partial assignment. `found` receives each full assignment and returns
/// `false` to stop. Returns the number of nodes visited.
pub(crate) fn search<C, F>(domains: &[Vec<ColorId>], budget: u64, mut check: C, mut found: F) -> Result<u64>
where
    C: FnMut(usize, &[ColorId]) -> bool,
    F: FnMut(&[ColorId]) -> bool,
{
    let n = domains.len();
    if domains.iter().any(|d| d.is_empty()) {
        return Ok(0);
    }
    if n == 0 {
        found(&[]);
        return Ok(1);
    }
    let mut cells: Vec<ColorId> = domains.iter().map(|d| d[0]).collect();
    let mut idx = vec![0usize; n];
    let mut visited = 0u64;
    let mut i = 0usize;
    loop {
        if idx[i] == domains[i].len() {
            idx[i] = 0;
            if i == 0 {
                return Ok(visited);
            }
            i -= 1;
            idx[i] += 1;
            continue;
        }
        cells[i] = domains[i][idx[i]];
        visited += 1;
        if visited > budget {
            return Err(Error::BudgetExceeded {
                needed: visited as u128,
                budget,
            });
        }
        if !check(i, &cells) {
            idx[i] += 1;
            continue;
        }
        if i + 1 == n {
            if !found(&cells) {
                return Ok(visited);
            }
            idx[i] += 1;
        } else {
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Offset;

    #[test]
    fn enumerates_in_order_with_pruning() {
        let ll = Pattern::from_cells([(Offset::new(0, 0), 1), (Offset::new(1, 0), 1)]).unwrap();
        let pl = Placements::torus([&ll], 2, 1);
        let doms = vec![vec![0, 1, 2]; 2];
        let mut out = Vec::new();
        search(&doms, 100, |i, c| !pl.violated_at(i, c), |c| {
            out.push(c.to_vec());
            true
        })
        .unwrap();
        assert_eq!(out.len(), 8);
        assert!(!out.contains(&vec![1, 1]));
        let mut sorted = out.clone();
        sorted.sort();
        assert_eq!(out, sorted);
    }

    #[test]
    fn aliasing_placements_are_dropped() {
        // On a 1×1 torus the domino needs the single cell to be both W and L.
        let wl = Pattern::from_cells([(Offset::new(0, 0), 0), (Offset::new(1, 0), 1)]).unwrap();
        let pl = Placements::torus([&wl], 1, 1);
        assert!(pl.admits(&[0]) && pl.admits(&[1]));
    }

    #[test]
    fn budget_is_enforced() {
        let doms = vec![vec![0, 1]; 10];
        assert!(matches!(
            search(&doms, 50, |_, _| true, |_| true),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
