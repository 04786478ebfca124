//! Text format:
//!
//! ```text
//! alphabet W L B
//! forbid { (0,0)=L (1,0)=L }
//! ```
//!
//! A sofic presentation declares the target alphabet, then `inner` with the
//! SFT's alphabet, its `forbid` lines, and one `project a->b ...` line.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::grid::text::{pattern_body, write_alphabet, Cursor};
use crate::grid::{Alphabet, Projection};

use super::{Sft, SoficRepr};

pub fn write_sft(x: &Sft) -> String {
    let mut s = write_alphabet(x.alphabet());
    for p in x.forbidden() {
        s.push_str(&format!("forbid {}\n", pattern_body(p, x.alphabet())));
    }
    s
}

pub fn write_sofic(r: &SoficRepr) -> String {
    let inner = r.inner.alphabet();
    let mut s = write_alphabet(r.alphabet());
    s.push_str(&format!("inner {}\n", inner.names().join(" ")));
    for p in r.inner.forbidden() {
        s.push_str(&format!("forbid {}\n", pattern_body(p, inner)));
    }
    let pairs: Vec<String> = inner
        .ids()
        .map(|a| format!("{}->{}", inner.name(a), r.alphabet().name(r.pi.apply(a))))
        .collect();
    s.push_str(&format!("project {}\n", pairs.join(" ")));
    s
}

fn alphabet_line(cur: &mut Cursor, kw: &str) -> Result<Alphabet> {
    let w = cur.word()?;
    if w != kw {
        return Err(cur.error(format!("expected `{kw}`")));
    }
    Alphabet::new(cur.words_on_line()).map_err(|e| cur.error(e.to_string()))
}

fn forbid_lines(cur: &mut Cursor, a: &Alphabet) -> Result<Sft> {
    let mut pats = Vec::new();
    while cur.peek().is_some_and(|t| matches!(t, crate::grid::text::Tok::Word(w) if w == "forbid")) {
        cur.word()?;
        pats.push(cur.pattern_body(a)?);
    }
    Sft::new(a.clone(), pats)
}

pub fn parse_sft(text: &str) -> Result<Sft> {
    let mut cur = Cursor::new(text)?;
    let a = alphabet_line(&mut cur, "alphabet")?;
    let x = forbid_lines(&mut cur, &a)?;
    if !cur.at_end() {
        return Err(cur.error("expected `forbid`"));
    }
    Ok(x)
}

pub fn parse_sofic(text: &str) -> Result<SoficRepr> {
    let mut cur = Cursor::new(text)?;
    let target = alphabet_line(&mut cur, "alphabet")?;
    let inner = alphabet_line(&mut cur, "inner")?;
    let x = forbid_lines(&mut cur, &inner)?;
    if cur.word()? != "project" {
        return Err(cur.error("expected `project`"));
    }
    let line = cur.line();
    let mut map = BTreeMap::new();
    while !cur.at_end() && cur.line() == line {
        let a = inner.color(&cur.word()?).map_err(|e| cur.error(e.to_string()))?;
        cur.punct("->")?;
        let b = target.color(&cur.word()?).map_err(|e| cur.error(e.to_string()))?;
        if map.insert(a, b).is_some() {
            return Err(cur.error(format!("`{}` mapped twice", inner.name(a))));
        }
    }
    if !cur.at_end() {
        return Err(cur.error("unexpected text after `project` line"));
    }
    let map: Vec<_> = inner
        .ids()
        .map(|a| map.get(&a).copied().ok_or_else(|| cur.error(format!("`{}` is not mapped", inner.name(a)))))
        .collect::<Result<_>>()?;
    SoficRepr::new(x, Projection::new(inner, target, map)?)
}
