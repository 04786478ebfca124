//! Text format:
//!
//! ```text
//! alphabet W L
//! track f0 SW SC SE RW RC RE NW NC NE
//! track z 0 1
//! forbid { (0,0)=f0.RC.RE (1,0)=base.L }
//! markers Q0 = { f0.RC } Q1 = { f1.RC }
//! ```
//!
//! A literal is `track.value.value...`, the allowed values of one track at
//! one cell. Marker cubes are single-cell, so their offsets are omitted; a
//! marker set with several cubes lists several braces.

use crate::error::{Error, Result};
use crate::grid::text::{write_alphabet, Cursor, Tok};
use crate::grid::{Alphabet, Offset};

use super::{bit, Cube, DoublyMarkedSft, Literal, MarkedSoficRepr, Schema, Track};

fn literal_text(s: &Schema, l: &Literal) -> String {
    let mut out = s.track_name(l.track).to_string();
    for v in 0..s.size(l.track) as u8 {
        if l.mask & bit(v) != 0 {
            out.push('.');
            out.push_str(s.value_name(l.track, v));
        }
    }
    out
}

fn cube_text(s: &Schema, c: &Cube, offsets: bool) -> String {
    let lits: Vec<String> = c
        .literals()
        .iter()
        .map(|l| {
            if offsets {
                format!("{}={}", l.at, literal_text(s, l))
            } else {
                literal_text(s, l)
            }
        })
        .collect();
    format!("{{ {} }}", lits.join(" "))
}

pub fn write_marked(m: &MarkedSoficRepr) -> String {
    let s = m.schema();
    let mut out = write_alphabet(&s.base);
    for t in &s.tracks {
        out.push_str(&format!("track {} {}\n", t.name, t.values.join(" ")));
    }
    for c in &m.marked.forbidden {
        out.push_str(&format!("forbid {}\n", cube_text(s, c, true)));
    }
    let set = |q: &[Cube]| q.iter().map(|c| cube_text(s, c, false)).collect::<Vec<_>>().join(" ");
    out.push_str(&format!("markers Q0 = {} Q1 = {}\n", set(&m.marked.q0), set(&m.marked.q1)));
    out
}

fn parse_literal(cur: &mut Cursor, s: &Schema, at: Offset) -> Result<Literal> {
    let w = cur.word()?;
    let mut parts = w.split('.');
    let name = parts.next().unwrap_or_default();
    let t = s
        .track_index(name)
        .ok_or_else(|| cur.error(format!("unknown track `{name}`")))?;
    let mut mask = 0;
    for v in parts {
        let i = (0..s.size(t))
            .find(|&i| s.value_name(t, i as u8) == v)
            .ok_or_else(|| cur.error(format!("`{v}` is not a value of track `{name}`")))?;
        mask |= bit(i as u8);
    }
    if mask == 0 {
        return Err(cur.error(format!("literal `{w}` lists no values")));
    }
    Ok(Literal::new(at, t, mask))
}

fn parse_cube(cur: &mut Cursor, s: &Schema, offsets: bool) -> Result<Cube> {
    cur.punct("{")?;
    let mut lits = Vec::new();
    while !cur.eat_punct("}") {
        let at = if offsets {
            let o = cur.coord()?;
            cur.punct("=")?;
            o
        } else {
            Offset::ZERO
        };
        lits.push(parse_literal(cur, s, at)?);
    }
    Ok(Cube::new(lits))
}

fn keyword(cur: &Cursor, kw: &str) -> bool {
    matches!(cur.peek(), Some(Tok::Word(w)) if w == kw)
}

fn marker_set(cur: &mut Cursor, s: &Schema, name: &str) -> Result<Vec<Cube>> {
    if cur.word()? != name {
        return Err(cur.error(format!("expected `{name}`")));
    }
    cur.punct("=")?;
    let mut q = Vec::new();
    while matches!(cur.peek(), Some(Tok::Punct("{"))) {
        q.push(parse_cube(cur, s, false)?);
    }
    Ok(q)
}

pub fn parse_marked(text: &str) -> Result<MarkedSoficRepr> {
    let mut cur = Cursor::new(text)?;
    if cur.word()? != "alphabet" {
        return Err(cur.error("expected `alphabet`"));
    }
    let base = Alphabet::new(cur.words_on_line()).map_err(|e| cur.error(e.to_string()))?;
    let mut schema = Schema { base, tracks: Vec::new() };
    while keyword(&cur, "track") {
        cur.word()?;
        let words = cur.words_on_line();
        let Some((name, values)) = words.split_first() else {
            return Err(cur.error("`track` needs a name and values"));
        };
        if values.is_empty() || values.len() > 64 || schema.track_index(name).is_some() || name.contains('.') {
            return Err(cur.error(format!("bad track `{name}`")));
        }
        schema.tracks.push(Track::new(name.clone(), values.iter().cloned()));
    }
    let mut forbidden = Vec::new();
    while keyword(&cur, "forbid") {
        cur.word()?;
        forbidden.push(parse_cube(&mut cur, &schema, true)?);
    }
    if cur.word()? != "markers" {
        return Err(cur.error("expected `markers`"));
    }
    let q0 = marker_set(&mut cur, &schema, "Q0")?;
    let q1 = marker_set(&mut cur, &schema, "Q1")?;
    if !cur.at_end() {
        return Err(cur.error("unexpected text after `markers` line"));
    }
    let marked = DoublyMarkedSft::new(schema, forbidden, q0, q1).map_err(|e| match e {
        Error::Invalid(m) => cur.error(m),
        e => e,
    })?;
    Ok(MarkedSoficRepr { marked })
}
