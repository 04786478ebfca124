//! Golden cases shared by the golden and acceptance targets.

use std::path::{Path, PathBuf};
use std::process::Command;

/// (golden file, arguments, exit code)
pub const CASES: &[(&str, &[&str], i32)] = &[
    ("parse.out", &["parse", "phi.mso"], 0),
    ("classify_challenge.out", &["classify", "challenge.mso"], 0),
    ("eval.out", &["eval", "phi.mso", "torus.cfg"], 0),
    ("models.out", &["models", "phi.mso", "--max", "2x2"], 0),
    ("compile_sft.out", &["compile-sft", "phi.mso"], 0),
    ("sft_to_formula.out", &["sft-to-formula", "phi.sft"], 0),
    ("compile_sofic.out", &["compile-sofic", "stripes.mso"], 0),
    ("sofic_to_formula.out", &["sofic-to-formula", "stripes.sofic"], 0),
    ("reduce.out", &["reduce", "challenge.mso", "--mode", "abstract"], 0),
    ("classify_reduced.out", &["classify", "reduced.mso"], 0),
    ("counting_formula.out", &["counting-formula", "count.cfg", "--k", "1", "--count", "exactly"], 0),
    ("counting_marked.out", &["counting-marked", "count.cfg", "--k", "1", "--count", "exactly"], 0),
    ("union.out", &["union", "normal_a.mso", "normal_b.mso"], 0),
    ("intersect.out", &["intersect", "normal_a.mso", "normal_b.mso"], 0),
    ("union_marked.out", &["union", "--marked", "single_l.marked", "single_l.marked"], 0),
    ("intersect_marked.out", &["intersect", "--marked", "single_l.marked", "single_l.marked"], 0),
    ("equiv_sft.out", &["equiv", "phi.mso", "--via-sft", "phi.sft", "--max", "3x3"], 0),
    ("equiv_fail.out", &["equiv", "exists.mso", "forall.mso", "--max", "3x3"], 1),
    ("equiv_budget.out", &["equiv", "exists.mso", "forall.mso", "--budget", "5"], 3),
    ("members.out", &["members", "phi.sft", "--max", "3x2"], 0),
    ("members_sofic.out", &["members", "stripes.sofic", "--max", "2x2"], 0),
    ("admissible.out", &["admissible", "phi.sft", "--size", "2x1", "--radius", "1"], 0),
    ("render_lb.out", &["render", "lb.cfg"], 0),
    ("render_zone.out", &["render", "count.cfg", "--markers", "0,0,3,3"], 0),
    ("render_zone.ppm", &["render", "count.cfg", "--markers", "0,0,3,3", "--format", "ppm", "--scale", "8"], 0),
    ("render_torus.ppm", &["render", "torus.cfg", "--format", "ppm", "--scale", "2"], 0),
];

pub fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn run(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_tesselogic"))
        .args(args)
        .current_dir(dir())
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}
