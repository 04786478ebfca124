//! Seeded generators, exhaustive equivalence sweeps and their reports.
//!
//! Sweeps visit sizes by area, wider first, and within a size every
//! configuration in counting order with cell 0 as the least significant
//! digit. The first disagreement in that order is reported.

mod equiv;
mod gen;
mod oracle;

pub use equiv::{equiv_on_tori, marked_window_suite, sft_vs_formula, sweep_order, sweep_sizes, ENUMERATION_LIMIT};
pub use gen::{gen_open_triple, gen_sentence, gen_sft, gen_torus, GenParams};
pub use oracle::{marked_direct, occurrences_in_window};

use std::fmt::Write as _;
use std::time::Duration;

use crate::grid::text::{write_torus, write_window};
use crate::grid::{TorusConfig, WindowConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The budget ran out; the sizes listed were completed.
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Torus(TorusConfig),
    Window(WindowConfig),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub witness: Witness,
    /// Named cells, for instance the two marker positions of a window suite.
    pub assignment: Vec<(String, (u32, u32))>,
    pub left: bool,
    pub right: bool,
}

#[derive(Clone, Debug)]
pub struct EquivReport {
    pub verdict: Verdict,
    pub seed: Option<u64>,
    /// Sizes fully checked.
    pub sizes: Vec<(u32, u32)>,
    /// Configurations (or search nodes, for anchored searches) visited.
    pub visited: u64,
    pub counterexample: Option<Counterexample>,
    pub note: Option<String>,
    pub elapsed: Duration,
}

impl EquivReport {
    fn new() -> Self {
        EquivReport {
            verdict: Verdict::Pass,
            seed: None,
            sizes: Vec::new(),
            visited: 0,
            counterexample: None,
            note: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Line-oriented text. Elapsed time is left out so the text is
    /// reproducible.
    pub fn to_text(&self) -> String {
        let mut out = format!("verdict {}\n", self.verdict.name());
        if let Some(s) = self.seed {
            let _ = writeln!(out, "seed {s}");
        }
        let sizes: Vec<String> = self.sizes.iter().map(|(w, h)| format!("{w}x{h}")).collect();
        let _ = writeln!(out, "sizes {}", sizes.join(" "));
        let _ = writeln!(out, "visited {}", self.visited);
        if let Some(n) = &self.note {
            let _ = writeln!(out, "note {n}");
        }
        if let Some(c) = &self.counterexample {
            let _ = writeln!(out, "left {}", c.left);
            let _ = writeln!(out, "right {}", c.right);
            for (name, (x, y)) in &c.assignment {
                let _ = writeln!(out, "assign {name} ({x},{y})");
            }
            out.push_str(&match &c.witness {
                Witness::Torus(t) => write_torus("witness", t),
                Witness::Window(w) => write_window("witness", w),
            });
        }
        out
    }
}
