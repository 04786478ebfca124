//! Line-oriented text format for alphabets, patterns and configurations.
//!
//! ```text
//! alphabet W L B
//! pattern PLL { (0,0)=L (1,0)=L }
//! torus T1 2 1 { L B }        # row-major, bottom row first
//! window V 2 2 { W L B W }
//! ```
//!
//! Tokens are separated by whitespace; `#` starts a comment. The lexer here
//! is shared by the SFT, sofic and marked formats.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Alphabet, ColorId, Offset, Pattern, TorusConfig, WindowConfig};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Word(String),
    Coord(Offset),
    Punct(&'static str),
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

pub fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let err = |msg: &str| Error::Syntax {
                line: li + 1,
                column,
                message: msg.to_string(),
            };
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let tok = if c == '(' {
                let close = chars[i..]
                    .iter()
                    .position(|c| *c == ')')
                    .ok_or_else(|| err("unterminated coordinate"))?;
                let inner: String = chars[i + 1..i + close].iter().collect();
                let mut parts = inner.split(',');
                let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(err("coordinate must be (dx,dy)"));
                };
                let dx = a.trim().parse().map_err(|_| err("bad integer in coordinate"))?;
                let dy = b.trim().parse().map_err(|_| err("bad integer in coordinate"))?;
                i += close + 1;
                Tok::Coord(Offset::new(dx, dy))
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                i += 2;
                Tok::Punct("->")
            } else if let Some(p) = ["{", "}", "[", "]", "=", ":", ","].iter().find(|p| p.starts_with(c)) {
                i += 1;
                Tok::Punct(p)
            } else if is_word_char(c) || c == '-' {
                let start = i;
                i += 1;
                while i < chars.len() && is_word_char(chars[i]) {
                    i += 1;
                }
                Tok::Word(chars[start..i].iter().collect())
            } else {
                return Err(err(&format!("unexpected character `{c}`")));
            };
            out.push(Token {
                tok,
                line: li + 1,
                column,
            });
        }
    }
    Ok(out)
}

/// Cursor over a token vector with line-aware diagnostics.
pub struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self> {
        Ok(Cursor { toks: lex(text)?, pos: 0 })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    /// Line of the current token; used to group directive arguments by line.
    pub fn line(&self) -> usize {
        self.toks.get(self.pos).map_or(usize::MAX, |t| t.line)
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = match self.toks.get(self.pos).or_else(|| self.toks.last()) {
            Some(t) => (t.line, t.column),
            None => (1, 1),
        };
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    pub fn word(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error("expected a word")),
        }
    }

    pub fn number(&mut self) -> Result<u32> {
        let save = self.pos;
        let w = self.word()?;
        w.parse().map_err(|_| {
            self.pos = save;
            self.error(format!("expected a positive integer, found `{w}`"))
        })
    }

    pub fn coord(&mut self) -> Result<Offset> {
        match self.peek() {
            Some(Tok::Coord(o)) => {
                let o = *o;
                self.pos += 1;
                Ok(o)
            }
            _ => Err(self.error("expected a coordinate (dx,dy)")),
        }
    }

    pub fn punct(&mut self, p: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Punct(q)) if *q == p => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected `{p}`"))),
        }
    }

    pub fn eat_punct(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Remaining words on the current line.
    pub fn words_on_line(&mut self) -> Vec<String> {
        let line = self.line();
        let mut out = Vec::new();
        while self.line() == line {
            match self.peek() {
                Some(Tok::Word(w)) => {
                    out.push(w.clone());
                    self.pos += 1;
                }
                _ => break,
            }
        }
        out
    }

    /// Parses `{ (dx,dy)=C ... }` against `alphabet`.
    pub fn pattern_body(&mut self, alphabet: &Alphabet) -> Result<Pattern> {
        self.punct("{")?;
        let mut cells = BTreeMap::new();
        while !self.eat_punct("}") {
            let o = self.coord()?;
            self.punct("=")?;
            let name = self.word()?;
            let c = alphabet.color(&name)?;
            if cells.insert(o, c).is_some() {
                return Err(self.error(format!("offset {o} listed twice")));
            }
        }
        Pattern::new(cells).map_err(|e| self.error(e.to_string()))
    }

    /// Parses `w h { c c ... }` (row-major, bottom row first).
    pub fn rect_body(&mut self, alphabet: &Alphabet) -> Result<(u32, u32, Vec<ColorId>)> {
        let w = self.number()?;
        let h = self.number()?;
        self.punct("{")?;
        let mut cells = Vec::new();
        while !self.eat_punct("}") {
            let name = self.word()?;
            cells.push(alphabet.color(&name)?);
        }
        if cells.len() != (w * h) as usize {
            return Err(self.error(format!("{w}x{h} rectangle needs {} cells, got {}", w * h, cells.len())));
        }
        Ok((w, h, cells))
    }
}

/// Contents of a grid text file.
#[derive(Clone, Debug, Default)]
pub struct GridDocument {
    pub alphabet: Option<Alphabet>,
    pub patterns: Vec<(String, Pattern)>,
    pub tori: Vec<(String, TorusConfig)>,
    pub windows: Vec<(String, WindowConfig)>,
}

impl GridDocument {
    pub fn alphabet(&self) -> Result<&Alphabet> {
        self.alphabet
            .as_ref()
            .ok_or_else(|| Error::Invalid("missing `alphabet` line".into()))
    }

    pub fn pattern(&self, name: &str) -> Option<&Pattern> {
        self.patterns.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }
}

pub fn parse_grid(text: &str) -> Result<GridDocument> {
    let mut cur = Cursor::new(text)?;
    let mut doc = GridDocument::default();
    while !cur.at_end() {
        let kw = cur.word()?;
        match kw.as_str() {
            "alphabet" => {
                let names = cur.words_on_line();
                doc.alphabet = Some(Alphabet::new(names).map_err(|e| cur.error(e.to_string()))?);
            }
            "pattern" | "torus" | "window" => {
                let alphabet = doc
                    .alphabet
                    .clone()
                    .ok_or_else(|| cur.error("`alphabet` must come first"))?;
                let name = cur.word()?;
                match kw.as_str() {
                    "pattern" => {
                        let p = cur.pattern_body(&alphabet)?;
                        doc.patterns.push((name, p));
                    }
                    "torus" => {
                        let (w, h, cells) = cur.rect_body(&alphabet)?;
                        doc.tori.push((name, TorusConfig::new(alphabet, w, h, cells)?));
                    }
                    _ => {
                        let (w, h, cells) = cur.rect_body(&alphabet)?;
                        doc.windows.push((name, WindowConfig::new(alphabet, w, h, cells)?));
                    }
                }
            }
            other => return Err(cur.error(format!("unknown directive `{other}`"))),
        }
    }
    Ok(doc)
}

pub fn write_alphabet(a: &Alphabet) -> String {
    format!("alphabet {}\n", a.names().join(" "))
}

pub fn pattern_body(p: &Pattern, a: &Alphabet) -> String {
    let mut s = String::from("{");
    for (o, c) in p.iter() {
        let _ = write!(s, " {}={}", o, a.name(c));
    }
    s.push_str(" }");
    s
}

pub fn write_pattern(name: &str, p: &Pattern, a: &Alphabet) -> String {
    format!("pattern {name} {}\n", pattern_body(p, a))
}

fn rect_text(kind: &str, name: &str, w: u32, h: u32, cells: &[ColorId], a: &Alphabet) -> String {
    let body: Vec<&str> = cells.iter().map(|c| a.name(*c)).collect();
    format!("{kind} {name} {w} {h} {{ {} }}\n", body.join(" "))
}

pub fn write_torus(name: &str, c: &TorusConfig) -> String {
    rect_text("torus", name, c.width(), c.height(), c.cells(), c.alphabet())
}

pub fn write_window(name: &str, c: &WindowConfig) -> String {
    rect_text("window", name, c.width(), c.height(), c.cells(), c.alphabet())
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = "alphabet W L B\npattern PLL { (0,0)=L (1,0)=L }\ntorus T1 2 1 { L B }        # row-major, bottom row first\n";

    #[test]
    fn parses_the_reference_example() {
        let d = parse_grid(DOC).unwrap();
        let a = d.alphabet().unwrap();
        assert_eq!(a.names(), &["W", "L", "B"]);
        let p = d.pattern("PLL").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(d.tori[0].1.cells(), &[1, 2]);
    }

    #[test]
    fn writer_output_reparses() {
        let d = parse_grid(DOC).unwrap();
        let a = d.alphabet().unwrap();
        let text = format!(
            "{}{}{}",
            write_alphabet(a),
            write_pattern("PLL", d.pattern("PLL").unwrap(), a),
            write_torus("T1", &d.tori[0].1)
        );
        let e = parse_grid(&text).unwrap();
        assert_eq!(e.patterns, d.patterns);
        assert_eq!(e.tori, d.tori);
    }

    #[test]
    fn negative_offsets_and_errors() {
        let d = parse_grid("alphabet W L\npattern P { (-1,2)=L }").unwrap();
        assert_eq!(d.patterns[0].1.domain().next(), Some(Offset::new(-1, 2)));
        assert!(matches!(
            parse_grid("alphabet W L\ntorus T 2 1 { L }"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_grid("alphabet W L\npattern P { (0,0)=Q }"),
            Err(Error::UndeclaredColor(_))
        ));
    }
}
