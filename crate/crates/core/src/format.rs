//! The line-oriented presentation format.
//!
//! ```text
//! # k[x,y] with deg y = 2
//! [quiver]
//! vertex v
//! arrow x v v 1
//! arrow y v v 2
//! [relations]
//! x*y - y*x
//! ```
//!
//! `#` starts a comment. Relation lines are sums of terms `coef * path`,
//! where `coef` is an integer or `num/den` (optional, default 1) and `path`
//! is a `*`-separated list of arrow names, or `e_V` for the trivial path at
//! vertex `V`. Declared arrow names win over the `e_V` reading. All terms of
//! one line must share a degree; terms with different endpoints are split
//! into separate uniform generators.
//!
//! A `[representation]` section holds a graded representation:
//!
//! ```text
//! [representation]
//! field q
//! window -2 10
//! space v -2 1 0 2 ...
//! map x -2 [[1], [0]]
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;

use crate::linalg::Matrix;
use crate::path::{IdealPresentation, Path, PathSum};
use crate::quiver::{ArrowId, ArrowSpec, WeightedQuiver};
use crate::representation::{DegreeWindow, GradedMorphism, GradedRep, Spaces};
use crate::scalar::{Field, Scalar};

/// A parse problem at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// All diagnostics from one parse.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
pub struct ParseErrors(pub Vec<Diagnostic>);

/// A parsed presentation `kQ/I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub quiver: WeightedQuiver,
    pub ideal: IdealPresentation,
}

fn diag(line: usize, column: usize, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        line,
        column,
        message: message.into(),
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Splits off a `#` comment.
fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(head, _)| head)
}

/// Whitespace-separated words with their 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, w)| (line[..byte].chars().count() + 1, w))
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    None,
    Quiver,
    Relations,
    Representation,
}

/// Parses a presentation with coefficients in `field`. Any
/// `[representation]` section is ignored here; see [`parse_representation`].
pub fn parse_presentation(text: &str, field: Field) -> Result<Presentation, ParseErrors> {
    let mut errors = Vec::new();
    let mut section = Section::None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<ArrowSpec> = Vec::new();
    let mut name_lines: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut relation_lines: Vec<(usize, &str)> = Vec::new();
    let mut seen_quiver = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let ws = words(line);
        let Some(&(col, first)) = ws.first() else { continue };
        if first.starts_with('[') {
            let header = line.trim();
            section = match header {
                "[quiver]" if !seen_quiver => {
                    seen_quiver = true;
                    Section::Quiver
                }
                "[quiver]" => {
                    errors.push(diag(line_no, col, "duplicate [quiver] section"));
                    Section::Quiver
                }
                "[relations]" if !seen_quiver => {
                    errors.push(diag(line_no, col, "[relations] must follow [quiver]"));
                    Section::Relations
                }
                "[relations]" => Section::Relations,
                "[representation]" => Section::Representation,
                other => {
                    errors.push(diag(line_no, col, format!("unknown section `{other}`")));
                    Section::None
                }
            };
            continue;
        }
        match section {
            Section::None => errors.push(diag(line_no, col, "content before the [quiver] section")),
            Section::Quiver => match (first, ws.len()) {
                ("vertex", 2) => {
                    let (c, name) = ws[1];
                    if !is_identifier(name) {
                        errors.push(diag(line_no, c, format!("`{name}` is not a valid identifier")));
                    }
                    name_lines.entry(name.to_string()).or_insert((line_no, c));
                    vertices.push(name.to_string());
                }
                ("arrow", 5) => {
                    let (c, name) = ws[1];
                    if !is_identifier(name) {
                        errors.push(diag(line_no, c, format!("`{name}` is not a valid identifier")));
                    }
                    let (dc, deg) = ws[4];
                    match deg.parse::<i64>() {
                        Ok(d) => {
                            name_lines.entry(name.to_string()).or_insert((line_no, c));
                            arrows.push(ArrowSpec::new(name, ws[2].1, ws[3].1, d));
                        }
                        Err(_) => errors.push(diag(line_no, dc, format!("degree `{deg}` is not an integer"))),
                    }
                }
                ("vertex", _) => errors.push(diag(line_no, col, "expected `vertex NAME`")),
                ("arrow", _) => errors.push(diag(line_no, col, "expected `arrow NAME SOURCE TARGET DEGREE`")),
                _ => errors.push(diag(line_no, col, format!("unexpected `{first}` in [quiver]"))),
            },
            Section::Relations => relation_lines.push((line_no, line)),
            Section::Representation => {}
        }
    }
    if !seen_quiver {
        errors.push(diag(1, 1, "missing [quiver] section"));
    }
    if !errors.is_empty() {
        return Err(ParseErrors(errors));
    }

    let quiver = match WeightedQuiver::new(&vertices, &arrows) {
        Ok(q) => q,
        Err(e) => {
            let diags = e
                .0
                .iter()
                .map(|err| {
                    let (line, column) = name_lines.get(err.subject()).copied().unwrap_or((1, 1));
                    diag(line, column, err.to_string())
                })
                .collect();
            return Err(ParseErrors(diags));
        }
    };

    let mut sums = Vec::new();
    for (line_no, line) in relation_lines {
        match parse_relation_line(&quiver, line, field) {
            Ok(s) => sums.push(s),
            Err((column, message)) => errors.push(diag(line_no, column, message)),
        }
    }
    if !errors.is_empty() {
        return Err(ParseErrors(errors));
    }
    Ok(Presentation {
        quiver,
        ideal: IdealPresentation::from_sums(sums),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Int(&'a str),
    Star,
    Slash,
    Plus,
    Minus,
}

fn tokenize(line: &str) -> Result<Vec<(usize, Tok<'_>)>, (usize, String)> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let col_of = |byte: usize| line[..byte].chars().count() + 1;
    let mut i = 0;
    while i < chars.len() {
        let (b, c) = chars[i];
        let single = match c {
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            _ => None,
        };
        if let Some(t) = single {
            out.push((col_of(b), t));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = chars.get(j).map_or(line.len(), |&(e, _)| e);
            if j < chars.len() && (chars[j].1.is_alphabetic() || chars[j].1 == '_' || chars[j].1 == '\'') {
                return Err((col_of(b), "identifiers cannot start with a digit".into()));
            }
            out.push((col_of(b), Tok::Int(&line[b..end])));
            i = j;
        } else if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_' || chars[j].1 == '\'') {
                j += 1;
            }
            let end = chars.get(j).map_or(line.len(), |&(e, _)| e);
            out.push((col_of(b), Tok::Ident(&line[b..end])));
            i = j;
        } else {
            return Err((col_of(b), format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct RelationParser<'q, 'a> {
    quiver: &'q WeightedQuiver,
    field: Field,
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end_col: usize,
}

impl<'a> RelationParser<'_, 'a> {
    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn next(&mut self) -> Option<(usize, Tok<'a>)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect_star(&mut self) -> Result<(), (usize, String)> {
        match self.next() {
            Some((_, Tok::Star)) => Ok(()),
            Some((c, _)) => Err((c, "expected `*`".into())),
            None => Err((self.end_col, "expected `*` before the end of the line".into())),
        }
    }

    /// Returns the term's path, coefficient and starting column.
    fn term(&mut self, negative: bool) -> Result<(usize, Path, Scalar), (usize, String)> {
        let start = self.col();
        let mut coef = self.field.one();
        if let Some(Tok::Int(_)) = self.peek() {
            let (c, Tok::Int(num)) = self.next().expect("peeked") else { unreachable!() };
            let num: BigInt = num.parse().map_err(|_| (c, format!("bad integer `{num}`")))?;
            let den = if let Some(Tok::Slash) = self.peek() {
                self.next();
                match self.next() {
                    Some((dc, Tok::Int(d))) => {
                        let d: BigInt = d.parse().map_err(|_| (dc, format!("bad integer `{d}`")))?;
                        (dc, d)
                    }
                    Some((dc, _)) => return Err((dc, "expected a denominator".into())),
                    None => return Err((self.end_col, "expected a denominator".into())),
                }
            } else {
                (c, BigInt::from(1))
            };
            coef = self
                .field
                .from_fraction(&num, &den.1)
                .map_err(|e| (den.0, e.to_string()))?;
            self.expect_star()?;
        }
        if negative {
            coef = -coef;
        }
        let mut path: Option<Path> = None;
        loop {
            let (c, name) = match self.next() {
                Some((c, Tok::Ident(name))) => (c, name),
                Some((c, _)) => return Err((c, "expected an arrow name or `e_VERTEX`".into())),
                None => return Err((self.end_col, "expected an arrow name or `e_VERTEX`".into())),
            };
            let factor = self.factor(c, name)?;
            path = Some(match path {
                None => factor,
                Some(p) => p
                    .multiply(&factor)
                    .ok_or_else(|| (c, format!("`{name}` does not compose with the path before it")))?,
            });
            if let Some(Tok::Star) = self.peek() {
                self.next();
            } else {
                break;
            }
        }
        Ok((start, path.expect("at least one factor"), coef))
    }

    fn factor(&self, col: usize, name: &str) -> Result<Path, (usize, String)> {
        let id = ArrowId::new(name);
        if self.quiver.arrow(&id).is_some() {
            return Ok(Path::from_arrows(self.quiver, &[id]).expect("declared arrow"));
        }
        if let Some(v) = name.strip_prefix("e_").and_then(|v| self.quiver.vertex_named(v)) {
            return Ok(Path::trivial(self.quiver, v).expect("declared vertex"));
        }
        Err((col, format!("undeclared name `{name}`")))
    }
}

fn parse_relation_line(q: &WeightedQuiver, line: &str, field: Field) -> Result<PathSum, (usize, String)> {
    let toks = tokenize(line)?;
    let end_col = line.chars().count() + 1;
    let mut p = RelationParser {
        quiver: q,
        field,
        toks,
        pos: 0,
        end_col,
    };
    let mut negative = false;
    match p.peek() {
        Some(Tok::Minus) => {
            p.next();
            negative = true;
        }
        Some(Tok::Plus) => {
            p.next();
        }
        _ => {}
    }
    let mut sum = PathSum::zero();
    let mut first_degree = None;
    loop {
        let (col, path, coef) = p.term(negative)?;
        match first_degree {
            None => first_degree = Some(path.degree()),
            Some(d) if d != path.degree() => {
                return Err((
                    col,
                    format!(
                        "term `{path}` has degree {} but the relation's first term has degree {d}; relations must be homogeneous",
                        path.degree()
                    ),
                ))
            }
            Some(_) => {}
        }
        sum.add_term(path, coef);
        match p.next() {
            None => break,
            Some((_, Tok::Plus)) => negative = false,
            Some((_, Tok::Minus)) => negative = true,
            Some((c, _)) => return Err((c, "expected `+`, `-` or the end of the line".into())),
        }
    }
    Ok(sum)
}

/// Canonical text of a presentation: vertices and arrows in name order,
/// one line per uniform generator.
pub fn serialize_presentation(q: &WeightedQuiver, ideal: &IdealPresentation) -> String {
    let mut out = String::from("[quiver]\n");
    for v in q.vertices() {
        writeln!(out, "vertex {v}").expect("write to string");
    }
    for (id, a) in q.arrows() {
        writeln!(out, "arrow {id} {} {} {}", a.source, a.target, a.degree).expect("write to string");
    }
    out.push_str("[relations]\n");
    for g in ideal.generators() {
        writeln!(out, "{g}").expect("write to string");
    }
    out
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_presentation(&self.quiver, &self.ideal))
    }
}

/// A `[representation]` section.
pub fn serialize_representation(m: &GradedRep) -> String {
    let mut out = String::from("[representation]\n");
    writeln!(out, "field {}", m.field()).expect("write to string");
    writeln!(out, "window {} {}", m.window().lo(), m.window().hi()).expect("write to string");
    for v in m.quiver().vertices() {
        let s = m.spaces(v);
        if s.dims().is_empty() {
            continue;
        }
        write!(out, "space {v} {}", s.start()).expect("write to string");
        for d in s.dims() {
            write!(out, " {d}").expect("write to string");
        }
        out.push('\n');
    }
    for ((a, d), mat) in m.maps() {
        writeln!(out, "map {a} {d} {mat}").expect("write to string");
    }
    out
}

/// Morphism blocks after both end representations.
pub fn serialize_morphism(phi: &GradedMorphism) -> String {
    let mut out = String::new();
    out.push_str("# source\n");
    out.push_str(&serialize_representation(phi.source()));
    out.push_str("# target\n");
    out.push_str(&serialize_representation(phi.target()));
    out.push_str("# blocks\n");
    for ((v, d), mat) in phi.blocks() {
        writeln!(out, "# block {v} {d} {mat}").expect("write to string");
    }
    out
}

/// Reads the first `[representation]` section of `text` as a
/// representation of `q`.
pub fn parse_representation(text: &str, q: &WeightedQuiver) -> Result<GradedRep, ParseErrors> {
    let mut in_section = false;
    let mut field = None;
    let mut window = None;
    let mut spaces = BTreeMap::new();
    let mut raw_maps: Vec<(usize, usize, ArrowId, i64, String)> = Vec::new();
    let mut errors = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let ws = words(line);
        let Some(&(col, first)) = ws.first() else { continue };
        if first.starts_with('[') {
            if in_section {
                break;
            }
            in_section = line.trim() == "[representation]";
            continue;
        }
        if !in_section {
            continue;
        }
        match first {
            "field" if ws.len() == 2 => match ws[1].1.parse::<Field>() {
                Ok(f) => field = Some(f),
                Err(e) => errors.push(diag(line_no, ws[1].0, e.to_string())),
            },
            "window" if ws.len() == 3 => match (ws[1].1.parse::<i64>(), ws[2].1.parse::<i64>()) {
                (Ok(lo), Ok(hi)) => match DegreeWindow::new(lo, hi) {
                    Ok(w) => window = Some(w),
                    Err(e) => errors.push(diag(line_no, ws[1].0, e.to_string())),
                },
                _ => errors.push(diag(line_no, ws[1].0, "expected `window LO HI`")),
            },
            "space" if ws.len() >= 3 => {
                let Some(v) = q.vertex_named(ws[1].1) else {
                    errors.push(diag(line_no, ws[1].0, format!("undeclared vertex `{}`", ws[1].1)));
                    continue;
                };
                let parsed: Result<Vec<i64>, _> = ws[2..].iter().map(|(_, w)| w.parse::<i64>()).collect();
                match parsed {
                    Ok(nums) if nums[1..].iter().all(|&n| n >= 0) => {
                        spaces.insert(
                            v.clone(),
                            Spaces::new(nums[0], nums[1..].iter().map(|&n| n as usize).collect()),
                        );
                    }
                    _ => errors.push(diag(line_no, ws[2].0, "expected `space VERTEX START DIM...`")),
                }
            }
            "map" if ws.len() >= 4 => {
                let Some((id, _)) = q.arrow_named(ws[1].1) else {
                    errors.push(diag(line_no, ws[1].0, format!("undeclared arrow `{}`", ws[1].1)));
                    continue;
                };
                let Ok(d) = ws[2].1.parse::<i64>() else {
                    errors.push(diag(line_no, ws[2].0, "expected an integer degree"));
                    continue;
                };
                let body_col = ws[3].0;
                let body: String = line.chars().skip(body_col - 1).collect();
                raw_maps.push((line_no, body_col, id.clone(), d, body));
            }
            _ => errors.push(diag(line_no, col, format!("unexpected `{first}` in [representation]"))),
        }
    }
    let field = field.unwrap_or(Field::Rational);
    let Some(window) = window else {
        errors.push(diag(1, 1, "representation has no `window` line"));
        return Err(ParseErrors(errors));
    };
    let mut maps = BTreeMap::new();
    for (line_no, col, id, d, body) in raw_maps {
        match parse_matrix(&body, field) {
            Ok(rows) => {
                let arrow = q.arrow(&id).expect("declared");
                let cols = spaces
                    .get(&arrow.source)
                    .and_then(|s: &Spaces| s.get(d))
                    .unwrap_or_else(|| rows.first().map_or(0, Vec::len));
                if rows.iter().any(|r| r.len() != cols) {
                    errors.push(diag(line_no, col, "matrix rows do not match the source dimension"));
                    continue;
                }
                maps.insert((id, d), Matrix::from_rows(field, cols, rows));
            }
            Err(msg) => errors.push(diag(line_no, col, msg)),
        }
    }
    if !errors.is_empty() {
        return Err(ParseErrors(errors));
    }
    GradedRep::new(q.clone(), field, window, spaces, maps)
        .map_err(|e| ParseErrors(vec![diag(1, 1, e.to_string())]))
}

/// `[[a, b], [c, d]]` into rows of scalars.
fn parse_matrix(body: &str, field: Field) -> Result<Vec<Vec<Scalar>>, String> {
    let s: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or("matrix must be written `[[...], ...]`")?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let inner = inner
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or("matrix rows must be bracketed")?;
    inner
        .split("],[")
        .map(|row| {
            if row.is_empty() {
                return Ok(Vec::new());
            }
            row.split(',').map(|x| parse_scalar(x, field)).collect()
        })
        .collect()
}

fn parse_scalar(s: &str, field: Field) -> Result<Scalar, String> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: BigInt = num.parse().map_err(|_| format!("bad scalar `{s}`"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad scalar `{s}`"))?;
    field.from_fraction(&num, &den).map_err(|e| e.to_string())
}
