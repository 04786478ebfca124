use std::collections::BTreeMap;
use std::path::Path;

use tesselogic_core::compile::{
    emso_to_sofic, formula_to_sft, locally_admissible, parse_sft, parse_sofic, sft_to_formula, sofic_to_formula,
    torus_members_sft, torus_members_sofic, write_sft, write_sofic,
};
use tesselogic_core::grid::text::{parse_grid, write_pattern, write_torus, write_window, GridDocument};
use tesselogic_core::harness::{equiv_on_tori, occurrences_in_window, sft_vs_formula, sweep_sizes, Verdict};
use tesselogic_core::logic::{classify, parse_sentence, print_sentence};
use tesselogic_core::marked::{
    canonical_paint, counting_marked_sft, intersect_marked, parse_marked, union_marked, write_marked, zone_rectangle,
};
use tesselogic_core::semantics::{eval, models_torus, models_window, Convention, Structure};
use tesselogic_core::transforms::{counting_formula, intersect_emso, reduce_universals, union_emso, Count, Mode};
use tesselogic_core::{Pattern, Sentence, WindowConfig};

use crate::render::{render, zone_overlay};
use crate::{Cli, Command, CountArgs, Failure, Output, Shared};

fn read(p: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
}

fn sentence(p: &Path) -> Result<Sentence, Failure> {
    Ok(parse_sentence(&read(p)?)?)
}

fn grid(p: &Path) -> Result<GridDocument, Failure> {
    Ok(parse_grid(&read(p)?)?)
}

fn mode(s: &Shared) -> Result<Mode, Failure> {
    match s.mode.as_str() {
        "abstract" => Ok(Mode::Abstract),
        "concrete" => Ok(Mode::Concrete),
        m => Err(Failure::Usage(format!("unknown mode `{m}` (expected abstract or concrete)"))),
    }
}

fn convention(s: &Shared) -> Result<Convention, Failure> {
    match s.conv.as_str() {
        "torus" => Ok(Convention::Torus),
        "window-false" => Ok(Convention::WindowAtomFalse),
        "window-flagged" => Ok(Convention::WindowFlagged(BTreeMap::new())),
        c => Err(Failure::Usage(format!(
            "unknown convention `{c}` (expected torus, window-false or window-flagged)"
        ))),
    }
}

fn count(s: &str) -> Result<Count, Failure> {
    match s {
        "exactly" => Ok(Count::Exactly),
        "at-least" => Ok(Count::AtLeast),
        c => Err(Failure::Usage(format!("unknown count `{c}` (expected exactly or at-least)"))),
    }
}

fn pattern(doc: &GridDocument, name: &str) -> Result<Pattern, Failure> {
    doc.pattern(name)
        .cloned()
        .ok_or_else(|| Failure::Usage(format!("no pattern `{name}` in the grid file")))
}

fn first_window(doc: &GridDocument) -> Result<WindowConfig, Failure> {
    if let Some((_, w)) = doc.windows.first() {
        return Ok(w.clone());
    }
    doc.tori
        .first()
        .map(|(_, t)| t.to_window())
        .ok_or_else(|| Failure::Usage("the grid file has no torus or window".into()))
}

fn ok(text: String) -> Result<Output, Failure> {
    Ok(Output {
        bytes: text.into_bytes(),
        code: 0,
    })
}

fn counting_inputs(a: &CountArgs) -> Result<(GridDocument, Pattern, Count), Failure> {
    let doc = grid(&a.file)?;
    let p = pattern(&doc, &a.pattern)?;
    Ok((doc, p, count(&a.count)?))
}

pub fn execute(cli: &Cli) -> Result<Output, Failure> {
    let sh = &cli.shared;
    let (mw, mh) = sh.max;
    match &cli.command {
        Command::Parse { file } => ok(print_sentence(&sentence(file)?)),
        Command::Classify { file } => {
            let tags: Vec<String> = classify(&sentence(file)?).iter().map(|t| t.to_string()).collect();
            ok(format!("{}\n", tags.join(" ")))
        }
        Command::Eval { file, config } => {
            let s = sentence(file)?;
            let doc = grid(config)?;
            let conv = convention(sh)?;
            let v = if conv.is_torus() {
                let (_, t) = doc.tori.first().ok_or_else(|| Failure::Usage("no torus in the grid file".into()))?;
                eval(&s, Structure::Torus(t), &conv)?
            } else {
                let (_, w) = doc.windows.first().ok_or_else(|| Failure::Usage("no window in the grid file".into()))?;
                eval(&s, Structure::Window(w), &conv)?
            };
            ok(format!("{v}\n"))
        }
        Command::Models { file } => {
            let s = sentence(file)?;
            let conv = convention(sh)?;
            let mut out = String::new();
            let mut n = 0;
            for (w, h) in sweep_sizes(mw, mh) {
                if conv.is_torus() {
                    for c in models_torus(&s, w, h, sh.budget)? {
                        n += 1;
                        out.push_str(&write_torus(&format!("m{n}"), &c));
                    }
                } else {
                    for c in models_window(&s, w, h, &conv, sh.budget)? {
                        n += 1;
                        out.push_str(&write_window(&format!("m{n}"), &c));
                    }
                }
            }
            ok(out)
        }
        Command::CompileSft { file } => ok(write_sft(&formula_to_sft(&sentence(file)?)?)),
        Command::SftToFormula { file } => ok(print_sentence(&sft_to_formula(&parse_sft(&read(file)?)?))),
        Command::CompileSofic { file } => ok(write_sofic(&emso_to_sofic(&sentence(file)?)?)),
        Command::SoficToFormula { file } => ok(print_sentence(&sofic_to_formula(&parse_sofic(&read(file)?)?))),
        Command::Reduce { file } => {
            let r = reduce_universals(&sentence(file)?, mode(sh)?)?;
            for n in &r.notes {
                eprintln!("note: {n}");
            }
            ok(print_sentence(&r.sentence))
        }
        Command::CountingFormula(a) => {
            let (doc, p, c) = counting_inputs(a)?;
            let r = counting_formula(&p, doc.alphabet()?, a.k, c, mode(sh)?)?;
            ok(print_sentence(&r.sentence))
        }
        Command::CountingMarked(a) => {
            let (doc, p, c) = counting_inputs(a)?;
            ok(write_marked(&counting_marked_sft(&p, a.k, c, doc.alphabet()?)?))
        }
        Command::Union { a, b, marked } | Command::Intersect { a, b, marked } => {
            let union = matches!(cli.command, Command::Union { .. });
            if *marked {
                let (x, y) = (parse_marked(&read(a)?)?, parse_marked(&read(b)?)?);
                let m = if union { union_marked(&x, &y)? } else { intersect_marked(&x, &y)? };
                ok(write_marked(&m))
            } else {
                let (x, y) = (sentence(a)?, sentence(b)?);
                let s = if union { union_emso(&x, &y)? } else { intersect_emso(&x, &y)? };
                ok(print_sentence(&s))
            }
        }
        Command::Equiv { a, b, via_sft } => {
            let s = sentence(a)?;
            let mut rep = match (b, via_sft) {
                (None, Some(x)) => sft_vs_formula(&parse_sft(&read(x)?)?, &s, &sweep_sizes(mw, mh), sh.budget)?,
                (Some(b), None) => equiv_on_tori(&s, &sentence(b)?, mw, mh, sh.budget)?,
                _ => return Err(Failure::Usage("equiv needs either a second sentence or --via-sft".into())),
            };
            rep.seed = Some(sh.seed);
            let code = match rep.verdict {
                Verdict::Pass => 0,
                Verdict::Fail => 1,
                Verdict::Inconclusive => 3,
            };
            Ok(Output {
                bytes: rep.to_text().into_bytes(),
                code,
            })
        }
        Command::Members { file } => {
            let text = read(file)?;
            let mut out = String::new();
            let mut n = 0;
            let sft = parse_sft(&text);
            let sofic = if sft.is_err() { Some(parse_sofic(&text)?) } else { None };
            for (w, h) in sweep_sizes(mw, mh) {
                let members = match (&sft, &sofic) {
                    (Ok(x), _) => torus_members_sft(x, w, h, sh.budget)?,
                    (_, Some(r)) => torus_members_sofic(r, w, h, sh.budget)?,
                    (Err(e), None) => return Err(e.clone().into()),
                };
                for c in members {
                    n += 1;
                    out.push_str(&write_torus(&format!("c{n}"), &c));
                }
            }
            ok(out)
        }
        Command::Admissible { file, size, radius } => {
            let x = parse_sft(&read(file)?)?;
            let mut out = String::new();
            for (n, p) in locally_admissible(&x, size.0, size.1, *radius, sh.budget)?.iter().enumerate() {
                out.push_str(&write_pattern(&format!("a{}", n + 1), p, x.alphabet()));
            }
            ok(out)
        }
        Command::Render {
            file,
            format,
            scale,
            markers,
            pattern: name,
            k,
            count: c,
        } => {
            let doc = grid(file)?;
            let base = first_window(&doc)?;
            let overlay = match markers {
                None => None,
                Some((p0, p1)) => {
                    let p = pattern(&doc, name)?;
                    let m = counting_marked_sft(&p, *k, count(c)?, base.alphabet())?;
                    let occ = occurrences_in_window(&p, &base);
                    let w = base.width();
                    let mut counters: Vec<(u32, u32)> = (0..base.area() as u32)
                        .map(|i| (i % w, i / w))
                        .filter(|&(x, y)| occ >> (y * w + x) & 1 == 1 && zone_rectangle(*p0, *p1, (x, y)))
                        .collect();
                    counters.truncate(*k);
                    let l = canonical_paint(&m, &base, *p0, *p1, &counters)?;
                    Some(zone_overlay(&m, &l))
                }
            };
            Ok(Output {
                bytes: render(&base, overlay.as_deref(), *format, *scale),
                code: 0,
            })
        }
    }
}
