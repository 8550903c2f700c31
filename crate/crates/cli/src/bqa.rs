//! The `.bqa` algebra description format: a line-oriented syntax tree,
//! its parser and a serializer that the parser reads back unchanged.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// A name together with the position it was read at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned<T> {
    pub value: T,
    pub line: usize,
    pub col: usize,
}

impl<T> Spanned<T> {
    fn at(value: T, line: usize, col: usize) -> Self {
        Spanned { value, line, col }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowDecl {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// `coeff * path`, the path as arrow names written right to left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub path: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: String,
    pub dims: Vec<usize>,
    /// Row-major `target x source` matrices keyed by arrow name.
    pub matrices: Vec<(String, Vec<Vec<i64>>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogDecl {
    Bound(Vec<usize>),
    Explicit(Vec<String>),
}

/// Line numbers of the section headers, for diagnostics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SectionLines {
    pub field: usize,
    pub quiver: usize,
    pub relations: usize,
    pub generator: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraFile {
    pub lines: SectionLines,
    pub p: u64,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDecl>,
    pub nilpotency: usize,
    pub relations: Vec<Vec<Term>>,
    pub modules: Vec<Spanned<ModuleDecl>>,
    pub generator: Vec<Spanned<String>>,
    pub catalog: Option<Spanned<CatalogDecl>>,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.no, col, msg: msg.into() }
    }

    /// Words with their 1-based columns.
    fn words(&self) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, ch) in self.text.char_indices() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push((s + 1, &self.text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s + 1, &self.text[s..]));
        }
        out
    }

    /// Column of the first non-blank character after `word`.
    fn rest_after(&self, word_col: usize, word: &str) -> (usize, &str) {
        let from = word_col - 1 + word.len();
        let rest = &self.text[from..];
        let trimmed = rest.trim_start();
        (from + rest.len() - trimmed.len() + 1, trimmed.trim_end())
    }
}

fn number<T: std::str::FromStr>(line: &Line, col: usize, word: &str, what: &str) -> Result<T, ParseError> {
    word.parse().map_err(|_| line.err(col, format!("expected {what}, found `{word}`")))
}

pub fn parse(text: &str) -> Result<AlgebraFile, ParseError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| Line { no: i + 1, text: raw.split('#').next().unwrap_or("") })
        .filter(|l| !l.text.trim().is_empty())
        .collect();
    let mut file = AlgebraFile {
        lines: SectionLines::default(),
        p: 0,
        vertices: Vec::new(),
        arrows: Vec::new(),
        nilpotency: 0,
        relations: Vec::new(),
        modules: Vec::new(),
        generator: Vec::new(),
        catalog: None,
    };
    let (mut seen_field, mut seen_quiver, mut seen_relations, mut seen_generator) = (false, false, false, false);
    let mut k = 0;
    while k < lines.len() {
        let line = &lines[k];
        let words = line.words();
        let (col, head) = words[0];
        match head {
            "field" => {
                if words.len() != 2 {
                    return Err(line.err(col, "expected `field <p>`"));
                }
                file.p = number(line, words[1].0, words[1].1, "a prime")?;
                file.lines.field = line.no;
                seen_field = true;
            }
            "quiver" => {
                file.lines.quiver = line.no;
                k = block(&lines, k, |l| quiver_line(l, &mut file))?;
                seen_quiver = true;
            }
            "relations" => {
                file.lines.relations = line.no;
                k = block(&lines, k, |l| relation_line(l, &mut file))?;
                seen_relations = true;
            }
            "module" => {
                if words.len() != 2 {
                    return Err(line.err(col, "expected `module <Name>`"));
                }
                let mut decl = ModuleDecl { name: words[1].1.to_string(), dims: Vec::new(), matrices: Vec::new() };
                let (no, c) = (line.no, words[1].0);
                k = block(&lines, k, |l| module_line(l, &mut decl))?;
                file.modules.push(Spanned::at(decl, no, c));
            }
            "generator" => {
                file.lines.generator = line.no;
                k = block(&lines, k, |l| {
                    let w = l.words();
                    if w.len() != 2 || w[0].1 != "summand" {
                        return Err(l.err(w[0].0, "expected `summand <Name>`"));
                    }
                    file.generator.push(Spanned::at(w[1].1.to_string(), l.no, w[1].0));
                    Ok(())
                })?;
                seen_generator = true;
            }
            "catalog" => {
                if file.catalog.is_some() {
                    return Err(line.err(col, "duplicate catalog line"));
                }
                let decl = match words.get(1).map(|w| w.1) {
                    Some("bound") => CatalogDecl::Bound(
                        words[2..].iter().map(|&(c, w)| number(line, c, w, "a dimension")).collect::<Result<_, _>>()?,
                    ),
                    Some("explicit") => CatalogDecl::Explicit(words[2..].iter().map(|w| w.1.to_string()).collect()),
                    _ => return Err(line.err(col, "expected `catalog bound ...` or `catalog explicit ...`")),
                };
                file.catalog = Some(Spanned::at(decl, line.no, col));
            }
            other => return Err(line.err(col, format!("unexpected `{other}`"))),
        }
        k += 1;
    }
    let last = lines.last().map_or(1, |l| l.no);
    for (seen, what) in
        [(seen_field, "field"), (seen_quiver, "quiver"), (seen_relations, "relations"), (seen_generator, "generator")]
    {
        if !seen {
            return Err(ParseError { line: last, col: 1, msg: format!("missing `{what}` section") });
        }
    }
    Ok(file)
}

/// Runs `f` on every line up to the matching `end`; returns the index of `end`.
fn block<'a>(
    lines: &[Line<'a>],
    open: usize,
    mut f: impl FnMut(&Line<'a>) -> Result<(), ParseError>,
) -> Result<usize, ParseError> {
    let mut k = open + 1;
    while k < lines.len() {
        if lines[k].text.trim() == "end" {
            return Ok(k);
        }
        f(&lines[k])?;
        k += 1;
    }
    Err(lines[open].err(1, "block is not closed by `end`"))
}

fn quiver_line(line: &Line, file: &mut AlgebraFile) -> Result<(), ParseError> {
    let w = line.words();
    match w[0].1 {
        "vertex" if w.len() == 2 => file.vertices.push(w[1].1.to_string()),
        "arrow" if w.len() == 6 && w[2].1 == ":" && w[4].1 == "->" => {
            file.arrows.push(ArrowDecl { name: w[1].1.into(), source: w[3].1.into(), target: w[5].1.into() })
        }
        _ => return Err(line.err(w[0].0, "expected `vertex <id>` or `arrow <name> : <src> -> <tgt>`")),
    }
    Ok(())
}

fn relation_line(line: &Line, file: &mut AlgebraFile) -> Result<(), ParseError> {
    let w = line.words();
    match w[0].1 {
        "nilpotency" if w.len() == 2 => file.nilpotency = number(line, w[1].0, w[1].1, "an integer")?,
        "rel" => {
            let (col, rest) = line.rest_after(w[0].0, w[0].1);
            if rest.is_empty() {
                return Err(line.err(col, "empty relation"));
            }
            let mut terms = Vec::new();
            let mut offset = col;
            for piece in rest.split('+') {
                let lead = piece.len() - piece.trim_start().len();
                let piece_col = offset + lead;
                let body = piece.trim();
                let (coeff, path) = match body.split_once('*') {
                    Some((c, p)) => (number(line, piece_col, c.trim(), "a coefficient")?, p),
                    None => (1, body),
                };
                let path: Vec<String> = path.split_whitespace().map(String::from).collect();
                if path.is_empty() {
                    return Err(line.err(piece_col, "term has no path"));
                }
                terms.push(Term { coeff, path });
                offset += piece.len() + 1;
            }
            file.relations.push(terms);
        }
        _ => return Err(line.err(w[0].0, "expected `nilpotency <L>` or `rel <coeff>*<path> + ...`")),
    }
    Ok(())
}

fn module_line(line: &Line, decl: &mut ModuleDecl) -> Result<(), ParseError> {
    let w = line.words();
    match w[0].1 {
        "dims" => {
            decl.dims = w[1..].iter().map(|&(c, x)| number(line, c, x, "a dimension")).collect::<Result<_, _>>()?;
        }
        "matrix" if w.len() >= 3 && w[2].1 == "=" => {
            let (col, rest) = line.rest_after(w[2].0, w[2].1);
            decl.matrices.push((w[1].1.to_string(), matrix_literal(line, col, rest)?));
        }
        _ => return Err(line.err(w[0].0, "expected `dims ...` or `matrix <arrow> = [[...]]`")),
    }
    Ok(())
}

fn matrix_literal(line: &Line, col: usize, text: &str) -> Result<Vec<Vec<i64>>, ParseError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| line.err(col, "matrix must be written [[...],...]"))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let body = inner
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| line.err(col, "matrix rows must be bracketed"))?;
    let rows: Vec<Vec<i64>> = body
        .split("],[")
        .map(|row| {
            if row.is_empty() {
                return Ok(Vec::new());
            }
            row.split(',').map(|x| number(line, col, x, "an integer entry")).collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(line.err(col, "matrix rows have different lengths"));
    }
    Ok(rows)
}

fn term_text(t: &Term) -> String {
    format!("{}*{}", t.coeff, t.path.join(" "))
}

pub fn serialize(file: &AlgebraFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field {}", file.p);
    out.push_str("quiver\n");
    for v in &file.vertices {
        let _ = writeln!(out, "  vertex {v}");
    }
    for a in &file.arrows {
        let _ = writeln!(out, "  arrow {} : {} -> {}", a.name, a.source, a.target);
    }
    out.push_str("end\nrelations\n");
    let _ = writeln!(out, "  nilpotency {}", file.nilpotency);
    for r in &file.relations {
        let terms: Vec<String> = r.iter().map(term_text).collect();
        let _ = writeln!(out, "  rel {}", terms.join(" + "));
    }
    out.push_str("end\n");
    for m in &file.modules {
        let m = &m.value;
        let _ = writeln!(out, "module {}", m.name);
        let dims: Vec<String> = m.dims.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "  dims {}", dims.join(" "));
        for (a, rows) in &m.matrices {
            let rows: Vec<String> = rows
                .iter()
                .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
                .collect();
            let _ = writeln!(out, "  matrix {a} = [{}]", rows.join(", "));
        }
        out.push_str("end\n");
    }
    out.push_str("generator\n");
    for s in &file.generator {
        let _ = writeln!(out, "  summand {}", s.value);
    }
    out.push_str("end\n");
    match file.catalog.as_ref().map(|c| &c.value) {
        Some(CatalogDecl::Bound(b)) => {
            let b: Vec<String> = b.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "catalog bound {}", b.join(" "));
        }
        Some(CatalogDecl::Explicit(names)) => {
            let _ = writeln!(out, "catalog explicit {}", names.join(" "));
        }
        None => {}
    }
    out
}

/// The semantic content of a file, with source positions dropped.
pub fn strip_spans(file: &AlgebraFile) -> AlgebraFile {
    let mut f = file.clone();
    f.lines = SectionLines::default();
    for m in &mut f.modules {
        m.line = 0;
        m.col = 0;
    }
    for s in &mut f.generator {
        s.line = 0;
        s.col = 0;
    }
    if let Some(c) = &mut f.catalog {
        c.line = 0;
        c.col = 0;
    }
    f
}
