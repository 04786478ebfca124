//! Acceptance suite: one PASS/FAIL line per criterion, with its time limit.
//! All checks are exact; a criterion also fails if it overruns its limit.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use tesselogic_core::compile::{
    emso_to_sofic, formula_to_sft, sft_to_formula, sofic_to_formula, torus_members_sft, torus_members_sofic,
};
use tesselogic_core::grid::{
    all_tori, all_windows, hanf_equiv, Alphabet, Odometer, Offset, Pattern,
    TorusConfig, WindowConfig,
};
use tesselogic_core::harness::{
    equiv_on_tori, gen_open_triple, gen_sentence, gen_sft, marked_direct, marked_window_suite, occurrences_in_window,
    sft_vs_formula, sweep_sizes, EquivReport, GenParams,
};
use tesselogic_core::logic::{classify, parse_sentence, FragmentTag, Formula};
use tesselogic_core::marked::{
    canonical_paint, counting_marked_sft, for_each_layering, intersect_marked, projected_acceptance, union_marked,
    window_satisfies, zone_predicate, zone_rectangle, flag_value, Markers, Search,
};
use tesselogic_core::semantics::{
    models_torus, naive::naive_eval, Assignment, Convention, Evaluator, FlagDefault, Structure,
};
use tesselogic_core::transforms::{
    counting_formula, intersect_emso, reduce_universals, singleton_gadget, clause_formula, union_emso, Count, Mode,
};
use tesselogic_core::Sentence;

const BUDGET: u64 = 50_000_000;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passed(rep: &EquivReport, what: &str) -> Result<(), String> {
    ensure(rep.passed(), || format!("{what}:\n{}", rep.to_text()))
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn wl() -> Alphabet {
    Alphabet::new(["W", "L"]).unwrap()
}

fn single_l() -> Pattern {
    Pattern::from_cells([(Offset::ZERO, 1)]).unwrap()
}

fn domino_ll() -> Pattern {
    Pattern::from_cells([(Offset::ZERO, 1), (Offset::new(1, 0), 1)]).unwrap()
}

fn params(colors: usize, span: u32, equality: bool) -> GenParams {
    GenParams {
        colors,
        span,
        equality,
        ..GenParams::default()
    }
}

fn sorted(v: Vec<TorusConfig>) -> BTreeSet<TorusConfig> {
    v.into_iter().collect()
}

fn c1_sft_bridge() -> Outcome {
    let sizes = [(3, 3), (3, 4), (4, 3), (4, 4)];
    let mut visited = 0;
    for seed in 0..50u64 {
        let s = gen_sentence(seed, FragmentTag::UnivSFT, &params(2 + seed as usize % 2, 2, false));
        let x = e(formula_to_sft(&s))?;
        let rep = e(sft_vs_formula(&x, &s, &sizes, BUDGET))?;
        passed(&rep, &format!("seed {seed}"))?;
        visited += rep.visited;
    }
    Ok(format!("50 sentences, {visited} configurations or search nodes"))
}

fn c2_round_trips() -> Outcome {
    for seed in 0..50u64 {
        let p = params(2, 2, false);
        let s = gen_sentence(seed, FragmentTag::UnivSFT, &p);
        let back = sft_to_formula(&e(formula_to_sft(&s))?);
        passed(&e(equiv_on_tori(&s, &back, 3, 3, BUDGET))?, &format!("formula seed {seed}"))?;
        let x = gen_sft(seed, &p);
        let y = e(formula_to_sft(&sft_to_formula(&x)))?;
        for (w, h) in sweep_sizes(3, 3) {
            let a = sorted(e(torus_members_sft(&x, w, h, BUDGET))?);
            let b = sorted(e(torus_members_sft(&y, w, h, BUDGET))?);
            ensure(a == b, || format!("sft seed {seed}: members differ on {w}x{h}"))?;
        }
    }
    Ok("50 formulas and 50 SFTs on tori up to 3x3".into())
}

fn c3_sofic_bridge() -> Outcome {
    for seed in 0..30u64 {
        let tag = FragmentTag::ClassC {
            n: seed as usize % 3,
            p: 1,
        };
        let s = gen_sentence(seed, tag, &params(2, 1, true));
        let r = e(emso_to_sofic(&s))?;
        for (w, h) in sweep_sizes(2, 2) {
            let a = sorted(e(torus_members_sofic(&r, w, h, BUDGET))?);
            let b = sorted(e(models_torus(&s, w, h, BUDGET))?);
            ensure(a == b, || format!("seed {seed}: sofic members differ from models on {w}x{h}"))?;
        }
        passed(
            &e(equiv_on_tori(&s, &sofic_to_formula(&r), 2, 2, BUDGET))?,
            &format!("loop seed {seed}"),
        )?;
    }
    Ok("30 sentences on tori up to 2x2".into())
}

fn c4_reduction() -> Outcome {
    let challenge = e(parse_sentence(include_str!("golden/challenge.mso")))?;
    let mut inputs = vec![("challenge".to_string(), challenge)];
    for seed in 0..20u64 {
        let tag = FragmentTag::ClassC {
            n: 1 + seed as usize % 2,
            p: 2,
        };
        inputs.push((format!("seed {seed}"), gen_sentence(seed, tag, &params(2, 1, true))));
    }
    for (name, s) in &inputs {
        let r = e(reduce_universals(s, Mode::Abstract))?;
        let tags = classify(&r.sentence);
        ensure(tags.iter().any(|t| matches!(t, FragmentTag::ClassC { p: 1, .. })), || {
            format!("{name}: reduced sentence is not in ClassC with p=1: {tags:?}")
        })?;
        passed(&e(equiv_on_tori(s, &r.sentence, 3, 3, BUDGET))?, name)?;
    }
    Ok(format!("{} sentences on tori up to 3x3", inputs.len()))
}

fn c5_singleton_gadget() -> Outcome {
    let clauses = singleton_gadget("S", "A", "x");
    let psi = Formula::exists_set(
        "A",
        Formula::forall("x", Formula::and_all(clauses.iter().map(|c| clause_formula(c)))),
    );
    let conv = Convention::WindowFlagged([("A".to_string(), FlagDefault::GADGET)].into());
    let ev = e(Evaluator::with_free(&psi, &conv, &Assignment::new().set("S", [])))?;
    let mut checked = 0u64;
    for (w, h) in sweep_sizes(4, 4) {
        let win = e(WindowConfig::filled(wl(), w, h, 0))?;
        let n = w * h;
        let mut models = BTreeSet::new();
        for m in 0..1u32 << n {
            let cells: BTreeSet<(u32, u32)> = (0..n).filter(|i| m >> i & 1 == 1).map(|i| (i % w, i / w)).collect();
            if e(ev.eval_env(Structure::Window(&win), &Assignment::new().set("S", cells.clone())))? {
                models.insert(cells);
            }
            checked += 1;
        }
        let big = models.iter().find(|s| s.len() > 1);
        ensure(big.is_none(), || format!("{w}x{h}: model with |S| > 1: {big:?}"))?;
        for i in 0..n {
            let one = BTreeSet::from([(i % w, i / w)]);
            ensure(models.contains(&one), || format!("{w}x{h}: singleton {one:?} is not realizable"))?;
        }
    }
    Ok(format!("{checked} subsets on windows up to 4x4"))
}

/// Occurrences of `p` on a torus, one per anchor cell.
fn torus_count(p: &Pattern, c: &TorusConfig) -> usize {
    let (w, h) = (c.width() as i32, c.height() as i32);
    let mut n = 0;
    for y in 0..h {
        for x in 0..w {
            if p.iter().all(|(o, col)| c.at((x + o.dx).rem_euclid(w) as u32, (y + o.dy).rem_euclid(h) as u32) == col) {
                n += 1;
            }
        }
    }
    n
}

fn torus_models(s: &Sentence, max_w: u32, max_h: u32) -> Result<BTreeSet<TorusConfig>, String> {
    let mut out = BTreeSet::new();
    for (w, h) in sweep_sizes(max_w, max_h) {
        out.extend(e(models_torus(s, w, h, BUDGET))?);
    }
    Ok(out)
}

fn c6_combinators() -> Outcome {
    let mut checked = 0;
    for (pname, p) in [("single", single_l()), ("domino", domino_ll())] {
        for k in 0..=2 {
            for count in [Count::Exactly, Count::AtLeast] {
                let r = e(counting_formula(&p, &wl(), k, count, Mode::Abstract))?;
                for (w, h) in sweep_sizes(2, 3) {
                    for t in all_tori(&wl(), w, h) {
                        let n = torus_count(&p, &t);
                        let want = match count {
                            Count::Exactly => n == k,
                            Count::AtLeast => n >= k,
                        };
                        let got = e(tesselogic_core::semantics::eval(&r.sentence, Structure::Torus(&t), &Convention::Torus))?;
                        ensure(got == want, || format!("{pname} k={k} {count:?}: {t:?} gives {got}, expected {want}"))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    for seed in 0..10u64 {
        let p = params(2, 1, true);
        let a = gen_sentence(seed, FragmentTag::EMSONormal, &p);
        let b = gen_sentence(seed + 1000, FragmentTag::EMSONormal, &p);
        let (ma, mb) = (torus_models(&a, 2, 3)?, torus_models(&b, 2, 3)?);
        let u = torus_models(&e(union_emso(&a, &b))?, 2, 3)?;
        let i = torus_models(&e(intersect_emso(&a, &b))?, 2, 3)?;
        ensure(u == &ma | &mb, || format!("seed {seed}: union models differ"))?;
        ensure(i == &ma & &mb, || format!("seed {seed}: intersection models differ"))?;
    }
    Ok(format!("{checked} counting checks, 10 union and intersection pairs"))
}

fn cells_of(w: u32, h: u32) -> Vec<(u32, u32)> {
    (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).collect()
}

fn zone_bits(w: u32, h: u32, a: (u32, u32), b: (u32, u32)) -> u64 {
    cells_of(w, h)
        .into_iter()
        .filter(|&(x, y)| a.0.min(b.0) < x && x <= a.0.max(b.0) && a.1.min(b.1) < y && y <= a.1.max(b.1))
        .fold(0, |m, (x, y)| m | 1 << (y * w + x))
}

/// Windows of size `w × h` accepted by some marker placement, by direct counting.
fn direct_projected(p: &Pattern, k: usize, count: Count, w: u32, h: u32, len: usize) -> FixedBitSet {
    let cells = cells_of(w, h);
    let mut out = FixedBitSet::with_capacity(len);
    for (i, c) in all_windows(&wl(), w, h).enumerate() {
        let occ = occurrences_in_window(p, &c);
        let hit = cells
            .iter()
            .any(|&a| cells.iter().any(|&b| marked_direct(count, k, occ, zone_bits(w, h, a, b), a, b)));
        out.set(i, hit);
    }
    out
}

/// Strictly increasing `k`-tuples of `zone` cells.
fn ordered_assignments(zone: &[(u32, u32)], k: usize) -> Vec<Vec<(u32, u32)>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &c) in zone.iter().enumerate() {
        for mut rest in ordered_assignments(&zone[i + 1..], k - 1) {
            rest.insert(0, c);
            out.push(rest);
        }
    }
    out
}

fn ring_determines_layers(k: usize) -> Result<u64, String> {
    let m = e(counting_marked_sft(&single_l(), k, Count::Exactly, &wl()))?;
    let s = m.schema();
    let mut n = 0;
    for (w, h) in sweep_sizes(4, 4) {
        let cells = cells_of(w, h);
        for &a in &cells {
            for &b in &cells {
                if a == b {
                    continue;
                }
                let zone: Vec<(u32, u32)> = cells.iter().copied().filter(|&c| zone_rectangle(a, b, c)).collect();
                for asg in ordered_assignments(&zone, k) {
                    let mut base = e(WindowConfig::filled(wl(), w, h, 0))?;
                    for &(x, y) in &asg {
                        base.set(x, y, 1);
                    }
                    let l = e(canonical_paint(&m, &base, a, b, &asg))?;
                    let what = || format!("k={k} {w}x{h} markers {a:?} {b:?} counters {asg:?}");
                    ensure(e(window_satisfies(&m, &l))?, || format!("{}: painting rejected", what()))?;
                    let mut search = Search::new(w, h, BUDGET);
                    search.markers = Markers::Ignore;
                    search.base = Some(base);
                    for &(x, y) in &cells {
                        if x == 0 || y == 0 || x + 1 == w || y + 1 == h {
                            for t in 1..=s.hidden() {
                                search.pinned.push((x, y, t, l.read(s, x as i64, y as i64, t).unwrap()));
                            }
                        }
                    }
                    let mut found = Vec::new();
                    e(for_each_layering(&m, &search, |leaf| {
                        found.push(leaf.hidden.to_vec());
                        found.len() < 2
                    }))?;
                    ensure(found == vec![l.hidden.clone()], || format!("{}: {} layerings", what(), found.len()))?;
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

fn c7_marked_suites() -> Outcome {
    let mut visited = 0;
    for p in [single_l(), domino_ll()] {
        for k in 0..=2 {
            for count in [Count::Exactly, Count::AtLeast] {
                let m = e(counting_marked_sft(&p, k, count, &wl()))?;
                let rep = e(marked_window_suite(&m, &p, k, count, &sweep_sizes(4, 4), BUDGET))?;
                passed(&rep, &format!("k={k} {count:?}"))?;
                visited += rep.visited;
            }
        }
    }
    for (w, h) in sweep_sizes(6, 6) {
        let cells = cells_of(w, h);
        for &a in &cells {
            for &b in &cells {
                let z = zone_bits(w, h, a, b);
                for &c in &cells {
                    let pred = zone_predicate(flag_value(c, a), flag_value(c, b));
                    ensure(pred == (z >> (c.1 * w + c.0) & 1 == 1), || {
                        format!("{w}x{h}: zone predicate at {c:?} for markers {a:?} {b:?}")
                    })?;
                }
            }
        }
    }
    let mut rings = 0;
    for k in 0..=2 {
        rings += ring_determines_layers(k)?;
    }
    let (w, h) = (3, 3);
    let cases = [
        (single_l(), 1, Count::Exactly, domino_ll(), 0, Count::Exactly),
        (single_l(), 2, Count::AtLeast, domino_ll(), 1, Count::AtLeast),
        (domino_ll(), 1, Count::AtLeast, single_l(), 2, Count::Exactly),
    ];
    for (p, k, c, p2, k2, c2) in cases {
        let a = e(counting_marked_sft(&p, k, c, &wl()))?;
        let b = e(counting_marked_sft(&p2, k2, c2, &wl()))?;
        let (space, u) = e(projected_acceptance(&e(union_marked(&a, &b))?, w, h, BUDGET))?;
        let (_, i) = e(projected_acceptance(&e(intersect_marked(&a, &b))?, w, h, BUDGET))?;
        let da = direct_projected(&p, k, c, w, h, space.len());
        let db = direct_projected(&p2, k2, c2, w, h, space.len());
        let mut want_u = da.clone();
        want_u.union_with(&db);
        let mut want_i = da;
        want_i.intersect_with(&db);
        ensure(u == want_u, || format!("union differs for k={k} {c:?} / k={k2} {c2:?}"))?;
        ensure(i == want_i, || format!("intersection differs for k={k} {c:?} / k={k2} {c2:?}"))?;
    }
    Ok(format!("{visited} marker checks, {rings} ring pinnings"))
}

/// `(n, k)`-equivalence by the definition, in both directions, over every
/// `n × n` pattern on the alphabet.
fn hanf_direct(a: &TorusConfig, b: &TorusConfig, n: u32, k: usize) -> bool {
    let cells: Vec<Offset> = (0..n as i32).flat_map(|y| (0..n as i32).map(move |x| Offset::new(x, y))).collect();
    let q = a.alphabet().len();
    let one_way = |x: usize, y: usize| (x >= k || y == x) && (x <= k || y > k);
    let mut od = Odometer::new(cells.len(), q);
    while let Some(digits) = od.next_digits() {
        let p = Pattern::from_cells(cells.iter().copied().zip(digits.iter().copied())).unwrap();
        let (x, y) = (torus_count(&p, a), torus_count(&p, b));
        if !one_way(x, y) || !one_way(y, x) {
            return false;
        }
    }
    true
}

fn c8_hanf() -> Outcome {
    let tori: Vec<TorusConfig> = all_tori(&wl(), 2, 2).collect();
    let params = [(1u32, 1u64), (1, 2), (2, 1), (2, 2)];
    let mut rel = Vec::new();
    for &(n, k) in &params {
        let mut r = vec![vec![false; tori.len()]; tori.len()];
        for (i, a) in tori.iter().enumerate() {
            for (j, b) in tori.iter().enumerate() {
                r[i][j] = e(hanf_equiv(a, b, n, k))?;
                ensure(r[i][j] == hanf_direct(a, b, n, k as usize), || {
                    format!("({n},{k}): {a:?} {b:?} disagrees with the definition")
                })?;
            }
        }
        let t = tori.len();
        for i in 0..t {
            ensure(r[i][i], || format!("({n},{k}): not reflexive at {i}"))?;
            for j in 0..t {
                ensure(r[i][j] == r[j][i], || format!("({n},{k}): not symmetric at {i},{j}"))?;
                for l in 0..t {
                    ensure(!(r[i][j] && r[j][l]) || r[i][l], || format!("({n},{k}): not transitive at {i},{j},{l}"))?;
                }
            }
        }
        rel.push(((n, k), r));
    }
    for ((n, k), big) in &rel {
        for ((n2, k2), small) in &rel {
            if n >= n2 && k >= k2 {
                for i in 0..tori.len() {
                    for j in 0..tori.len() {
                        ensure(!big[i][j] || small[i][j], || {
                            format!("({n},{k}) does not refine ({n2},{k2}) at {i},{j}")
                        })?;
                    }
                }
            }
        }
    }
    let classes: Vec<usize> = rel
        .iter()
        .map(|(_, r)| (0..tori.len()).filter(|&i| (0..i).all(|j| !r[i][j])).count())
        .collect();
    Ok(format!("16 tori, classes per (n,k) {classes:?}"))
}

fn c9_oracles() -> Outcome {
    let mut trues = 0;
    for seed in 0..200u64 {
        let (w, h) = (1 + seed as u32 % 3, 1 + (seed as u32 / 3) % 3);
        let p = params(2 + seed as usize % 2, 2, true);
        let (s, c, env) = gen_open_triple(seed, &p, w, h);
        let fast = e(Evaluator::with_free(&s.body, &Convention::Torus, &env))?;
        let a = e(fast.eval_env(Structure::Torus(&c), &env))?;
        let b = e(naive_eval(&s.body, Structure::Torus(&c), &Convention::Torus, &env, BUDGET))?;
        ensure(a == b, || format!("seed {seed}: compiled {a}, naive {b}"))?;
        trues += a as usize;
    }
    Ok(format!("200 triples, {trues} true"))
}

fn c10_determinism() -> Outcome {
    for (name, args, code) in common::CASES {
        let (first, c1) = common::run(args);
        let (second, c2) = common::run(args);
        ensure(first == second && c1 == c2, || format!("{name}: two runs differ"))?;
        ensure(c1 == *code, || format!("{name}: exit code {c1}, expected {code}"))?;
        let golden = std::fs::read(common::dir().join(name)).map_err(|err| format!("{name}: {err}"))?;
        ensure(first == golden, || format!("{name}: output differs from the golden file"))?;
    }
    Ok(format!("{} examples", common::CASES.len()))
}

type Criterion = (&'static str, fn() -> Outcome, u64);

const CRITERIA: [Criterion; 10] = [
    ("univ-sft-bridge", c1_sft_bridge, 60),
    ("sft-round-trips", c2_round_trips, 60),
    ("sofic-bridge", c3_sofic_bridge, 120),
    ("universal-reduction", c4_reduction, 300),
    ("singleton-gadget", c5_singleton_gadget, 60),
    ("counting-combinators", c6_combinators, 120),
    ("marked-suites", c7_marked_suites, 600),
    ("hanf-equivalence", c8_hanf, 30),
    ("oracle-agreement", c9_oracles, 30),
    ("cli-determinism", c10_determinism, 60),
];

fn main() {
    let only: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, f, limit)) in CRITERIA.iter().enumerate() {
        if only.as_deref().is_some_and(|o| !name.contains(o)) {
            continue;
        }
        let start = Instant::now();
        let r = f();
        let took = start.elapsed();
        let r = match r {
            Ok(m) if took > Duration::from_secs(*limit) => Err(format!("over the time limit: {m}")),
            r => r,
        };
        let (tag, msg) = match &r {
            Ok(m) => ("PASS", m.clone()),
            Err(m) => ("FAIL", m.clone()),
        };
        failed += r.is_err() as usize;
        println!("[{tag}] {:>2} {name} ({:.2}s, limit {limit}s): {msg}", i + 1, took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
