//! Plain-text file formats.
//!
//! Three line-oriented formats, all sharing the same lexical rules: `#`
//! starts a comment that runs to the end of the line, tokens are separated
//! by whitespace, and blank lines are skipped.
//!
//! Space files (`.cap`):
//!
//! ```text
//! space <name>
//! centered true|false          # optional, default true
//! points <p1> <p2> ...
//! lambda <x> <a> <weight>      # d(x,a); repeatable; duplicates are an error
//! ```
//!
//! Unspecified entries default to `0` on the diagonal and `inf` off it.  A
//! nonzero diagonal entry is rejected while `centered` is true.
//!
//! Map files (`.map`):
//!
//! ```text
//! map <name>
//! from <space> [restrict <p1> <p2> ...]
//! to <space>
//! pair <x> <y>                 # one per source point
//! ```
//!
//! `from` and `to` name spaces, not files; the caller supplies the named
//! spaces ([`parse_map_str`]) or lets [`load_map`] find `<name>.cap` next to
//! the map file.  A `restrict` clause makes the source the subspace on the
//! listed points.
//!
//! Function-set files (`.fns`) list one function per line as
//! `h: x1->y1 x2->y2 ...`; every source point must be assigned exactly once.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::filters::Carrier;
use crate::homspace::FunctionSpace;
use crate::spaces::{FiniteCapSpace, SpaceMap};
use crate::{Error, Result, Weight};

/// One significant line: its 1-based number and its tokens.
struct Line {
    number: usize,
    tokens: Vec<String>,
}

fn parse_err(path: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        msg: msg.into(),
    }
}

/// Strip comments, split into tokens, drop blank lines.
fn tokenize(text: &str) -> Vec<Line> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let tokens: Vec<String> = body.split_whitespace().map(str::to_string).collect();
            if tokens.is_empty() {
                None
            } else {
                Some(Line {
                    number: i + 1,
                    tokens,
                })
            }
        })
        .collect()
}

/// Line number to report for "file ended too early" errors.
fn eof_line(text: &str) -> usize {
    text.lines().count().max(1)
}

/// Parse a space from `.cap` text.  `path` is used only in error messages.
pub fn parse_space_str(text: &str, path: &str) -> Result<FiniteCapSpace> {
    let lines = tokenize(text);
    let mut iter = lines.iter().peekable();

    let header = iter
        .next()
        .ok_or_else(|| parse_err(path, eof_line(text), "missing `space <name>` header"))?;
    if header.tokens[0] != "space" || header.tokens.len() != 2 {
        return Err(parse_err(
            path,
            header.number,
            "expected `space <name>` as the first directive",
        ));
    }
    let name = header.tokens[1].clone();

    let mut centered = true;
    if let Some(line) = iter.peek() {
        if line.tokens[0] == "centered" {
            let line = iter.next().expect("peeked");
            if line.tokens.len() != 2 {
                return Err(parse_err(path, line.number, "expected `centered true|false`"));
            }
            centered = match line.tokens[1].as_str() {
                "true" => true,
                "false" => false,
                other => {
                    return Err(parse_err(
                        path,
                        line.number,
                        format!("expected `true` or `false`, found `{other}`"),
                    ))
                }
            };
        }
    }

    let points_line = iter
        .next()
        .ok_or_else(|| parse_err(path, eof_line(text), "missing `points <p1> <p2> ...`"))?;
    if points_line.tokens[0] != "points" {
        return Err(parse_err(
            path,
            points_line.number,
            format!(
                "expected `points <p1> <p2> ...`, found `{}`",
                points_line.tokens[0]
            ),
        ));
    }
    if points_line.tokens.len() < 2 {
        return Err(parse_err(path, points_line.number, "`points` needs at least one point"));
    }
    let points: Vec<String> = points_line.tokens[1..].to_vec();
    let carrier = Carrier::new(points.clone())
        .map_err(|e| parse_err(path, points_line.number, e.to_string()))?;
    let n = carrier.len();

    let mut matrix = vec![Weight::INF; n * n];
    for x in 0..n {
        matrix[x * n + x] = Weight::zero();
    }
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for line in iter {
        if line.tokens[0] != "lambda" {
            return Err(parse_err(
                path,
                line.number,
                format!("unknown directive `{}`", line.tokens[0]),
            ));
        }
        if line.tokens.len() != 4 {
            return Err(parse_err(path, line.number, "expected `lambda <x> <a> <weight>`"));
        }
        let x = carrier
            .index_of(&line.tokens[1])
            .map_err(|e| parse_err(path, line.number, e.to_string()))?;
        let a = carrier
            .index_of(&line.tokens[2])
            .map_err(|e| parse_err(path, line.number, e.to_string()))?;
        let w: Weight = line.tokens[3]
            .parse()
            .map_err(|e: Error| parse_err(path, line.number, e.to_string()))?;
        if !seen.insert((x, a)) {
            return Err(parse_err(
                path,
                line.number,
                format!(
                    "duplicate `lambda {} {}` entry",
                    line.tokens[1], line.tokens[2]
                ),
            ));
        }
        if x == a && centered && !w.is_zero() {
            return Err(parse_err(
                path,
                line.number,
                format!(
                    "centered space requires d({0},{0}) = 0, found {w}",
                    line.tokens[1]
                ),
            ));
        }
        matrix[x * n + a] = w;
    }

    FiniteCapSpace::from_matrix(&name, points, matrix, centered)
}

/// Serialize a space to `.cap` text.  Only entries that differ from the
/// defaults (diagonal `0`, off-diagonal `inf`) are written, so
/// `parse(serialize(s)) == s` and serialization of a parsed file is stable.
pub fn serialize_space(space: &FiniteCapSpace) -> String {
    let mut out = String::new();
    writeln!(out, "space {}", space.name()).unwrap();
    writeln!(out, "centered {}", space.centered()).unwrap();
    write!(out, "points").unwrap();
    for name in space.carrier().names() {
        write!(out, " {name}").unwrap();
    }
    writeln!(out).unwrap();
    let n = space.len();
    for x in 0..n {
        for a in 0..n {
            let w = space.entry(x, a);
            let is_default = if x == a { w.is_zero() } else { w.is_infinite() };
            if !is_default {
                writeln!(
                    out,
                    "lambda {} {} {}",
                    space.point_name(x),
                    space.point_name(a),
                    w
                )
                .unwrap();
            }
        }
    }
    out
}

/// Read and parse a `.cap` file.
pub fn load_space(path: impl AsRef<Path>) -> Result<FiniteCapSpace> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_space_str(&text, &path.display().to_string())
}

/// Write a space as a `.cap` file.
pub fn save_space(space: &FiniteCapSpace, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, serialize_space(space))?;
    Ok(())
}

/// Parse a map from `.map` text.  `spaces` supplies the spaces that `from`
/// and `to` may name, matched by declared name.
pub fn parse_map_str(text: &str, path: &str, spaces: &[FiniteCapSpace]) -> Result<SpaceMap> {
    let find = |name: &str, line: usize| -> Result<FiniteCapSpace> {
        spaces
            .iter()
            .find(|s| s.name() == name)
            .cloned()
            .ok_or_else(|| parse_err(path, line, format!("unknown space `{name}`")))
    };

    let lines = tokenize(text);
    let mut iter = lines.iter();

    let header = iter
        .next()
        .ok_or_else(|| parse_err(path, eof_line(text), "missing `map <name>` header"))?;
    if header.tokens[0] != "map" || header.tokens.len() != 2 {
        return Err(parse_err(
            path,
            header.number,
            "expected `map <name>` as the first directive",
        ));
    }
    let name = header.tokens[1].clone();

    let from_line = iter
        .next()
        .ok_or_else(|| parse_err(path, eof_line(text), "missing `from <space>`"))?;
    if from_line.tokens[0] != "from" || from_line.tokens.len() < 2 {
        return Err(parse_err(
            path,
            from_line.number,
            "expected `from <space> [restrict <p1> ...]`",
        ));
    }
    let ambient = find(&from_line.tokens[1], from_line.number)?;
    let source = if from_line.tokens.len() > 2 {
        if from_line.tokens[2] != "restrict" || from_line.tokens.len() < 4 {
            return Err(parse_err(
                path,
                from_line.number,
                "expected `restrict <p1> <p2> ...` after the source space",
            ));
        }
        let mut subset = BTreeSet::new();
        for token in &from_line.tokens[3..] {
            let i = ambient
                .index_of(token)
                .map_err(|e| parse_err(path, from_line.number, e.to_string()))?;
            if !subset.insert(i) {
                return Err(parse_err(
                    path,
                    from_line.number,
                    format!("duplicate restrict point `{token}`"),
                ));
            }
        }
        ambient
            .subspace(&subset)
            .map_err(|e| parse_err(path, from_line.number, e.to_string()))?
    } else {
        ambient
    };

    let to_line = iter
        .next()
        .ok_or_else(|| parse_err(path, eof_line(text), "missing `to <space>`"))?;
    if to_line.tokens[0] != "to" || to_line.tokens.len() != 2 {
        return Err(parse_err(path, to_line.number, "expected `to <space>`"));
    }
    let target = find(&to_line.tokens[1], to_line.number)?;

    let mut assigned: BTreeMap<usize, usize> = BTreeMap::new();
    for line in iter {
        if line.tokens[0] != "pair" {
            return Err(parse_err(
                path,
                line.number,
                format!("unknown directive `{}`", line.tokens[0]),
            ));
        }
        if line.tokens.len() != 3 {
            return Err(parse_err(path, line.number, "expected `pair <x> <y>`"));
        }
        let x = source
            .index_of(&line.tokens[1])
            .map_err(|e| parse_err(path, line.number, e.to_string()))?;
        let y = target
            .index_of(&line.tokens[2])
            .map_err(|e| parse_err(path, line.number, e.to_string()))?;
        if assigned.insert(x, y).is_some() {
            return Err(parse_err(
                path,
                line.number,
                format!("duplicate `pair` for point `{}`", line.tokens[1]),
            ));
        }
    }
    let missing: Vec<&str> = (0..source.len())
        .filter(|x| !assigned.contains_key(x))
        .map(|x| source.point_name(x))
        .collect();
    if !missing.is_empty() {
        return Err(parse_err(
            path,
            eof_line(text),
            format!("map is not total: missing pair for {}", missing.join(", ")),
        ));
    }
    let table: Vec<usize> = (0..source.len()).map(|x| assigned[&x]).collect();
    SpaceMap::new(&name, source, target, table)
}

/// Serialize a map to `.map` text.  The source is written by name without a
/// `restrict` clause; serialize the source space alongside when it is a
/// subspace.
pub fn serialize_map(map: &SpaceMap) -> String {
    let mut out = String::new();
    writeln!(out, "map {}", map.name()).unwrap();
    writeln!(out, "from {}", map.source().name()).unwrap();
    writeln!(out, "to {}", map.target().name()).unwrap();
    for (x, &y) in map.table().iter().enumerate() {
        writeln!(
            out,
            "pair {} {}",
            map.source().point_name(x),
            map.target().point_name(y)
        )
        .unwrap();
    }
    out
}

/// Read and parse a `.map` file, loading each referenced space from
/// `<name>.cap` next to the map file (or from the token itself when it ends
/// in `.cap`).
pub fn load_map(path: impl AsRef<Path>) -> Result<SpaceMap> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let display = path.display().to_string();
    let dir = path.parent().unwrap_or_else(|| Path::new("."));

    let mut spaces: Vec<FiniteCapSpace> = Vec::new();
    for line in tokenize(&text) {
        if (line.tokens[0] == "from" || line.tokens[0] == "to") && line.tokens.len() >= 2 {
            let token = &line.tokens[1];
            let file = if token.ends_with(".cap") {
                dir.join(token)
            } else {
                dir.join(format!("{token}.cap"))
            };
            let space = load_space(&file)?;
            let expected = token.trim_end_matches(".cap");
            if space.name() != expected {
                return Err(parse_err(
                    &display,
                    line.number,
                    format!(
                        "space file `{}` declares name `{}`, expected `{}`",
                        file.display(),
                        space.name(),
                        expected
                    ),
                ));
            }
            if !spaces.iter().any(|s| s.name() == space.name()) {
                spaces.push(space);
            }
        }
    }
    parse_map_str(&text, &display, &spaces)
}

/// Write a map as a `.map` file.
pub fn save_map(map: &SpaceMap, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, serialize_map(map))?;
    Ok(())
}

/// Parse a function set from `.fns` text: one function per line as
/// `h: x1->y1 x2->y2 ...`, each source point assigned exactly once.
pub fn parse_functions_str(
    text: &str,
    path: &str,
    source: &FiniteCapSpace,
    target: &FiniteCapSpace,
) -> Result<FunctionSpace> {
    let mut elements: Vec<(String, Vec<usize>)> = Vec::new();
    for line in tokenize(text) {
        let head = &line.tokens[0];
        let name = head.strip_suffix(':').ok_or_else(|| {
            parse_err(
                path,
                line.number,
                format!("expected `<name>:` to open a function line, found `{head}`"),
            )
        })?;
        if name.is_empty() {
            return Err(parse_err(path, line.number, "empty function name"));
        }
        let mut assigned: BTreeMap<usize, usize> = BTreeMap::new();
        for token in &line.tokens[1..] {
            let (x_name, y_name) = token.split_once("->").ok_or_else(|| {
                parse_err(
                    path,
                    line.number,
                    format!("expected `<x>-><y>`, found `{token}`"),
                )
            })?;
            let x = source
                .index_of(x_name)
                .map_err(|e| parse_err(path, line.number, e.to_string()))?;
            let y = target
                .index_of(y_name)
                .map_err(|e| parse_err(path, line.number, e.to_string()))?;
            if assigned.insert(x, y).is_some() {
                return Err(parse_err(
                    path,
                    line.number,
                    format!("point `{x_name}` assigned twice in `{name}`"),
                ));
            }
        }
        let missing: Vec<&str> = (0..source.len())
            .filter(|x| !assigned.contains_key(x))
            .map(|x| source.point_name(x))
            .collect();
        if !missing.is_empty() {
            return Err(parse_err(
                path,
                line.number,
                format!("`{}` is not total: missing {}", name, missing.join(", ")),
            ));
        }
        let table: Vec<usize> = (0..source.len()).map(|x| assigned[&x]).collect();
        elements.push((name.to_string(), table));
    }
    if elements.is_empty() {
        return Err(parse_err(
            path,
            eof_line(text),
            "function set is empty: need at least one function line",
        ));
    }
    FunctionSpace::from_elements(source, target, elements)
        .map_err(|e| parse_err(path, eof_line(text), e.to_string()))
}

/// Serialize a function set to `.fns` text.
pub fn serialize_functions(space: &FunctionSpace) -> String {
    let mut out = String::new();
    for i in 0..space.len() {
        write!(out, "{}:", space.name(i)).unwrap();
        for (x, &y) in space.table(i).iter().enumerate() {
            write!(
                out,
                " {}->{}",
                space.source().point_name(x),
                space.target().point_name(y)
            )
            .unwrap();
        }
        writeln!(out).unwrap();
    }
    out
}

/// Read and parse a `.fns` file against the given source and target spaces.
pub fn load_functions(
    path: impl AsRef<Path>,
    source: &FiniteCapSpace,
    target: &FiniteCapSpace,
) -> Result<FunctionSpace> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_functions_str(&text, &path.display().to_string(), source, target)
}

/// Write a function set as a `.fns` file.
pub fn save_functions(space: &FunctionSpace, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, serialize_functions(space))?;
    Ok(())
}

/// Parse a brace subset literal such as `{a,b,c}` against a space's carrier.
/// `{}` is the empty set; repeated names are rejected.
pub fn parse_subset(text: &str, space: &FiniteCapSpace) -> Result<BTreeSet<usize>> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| {
            Error::Precondition(format!("subset literal `{text}` must be wrapped in {{ }}"))
        })?;
    let mut set = BTreeSet::new();
    for item in inner.split(',') {
        let name = item.trim();
        if name.is_empty() {
            if inner.trim().is_empty() {
                break;
            }
            return Err(Error::Precondition(format!(
                "empty item in subset literal `{text}`"
            )));
        }
        let i = space.index_of(name)?;
        if !set.insert(i) {
            return Err(Error::DuplicatePointName(name.to_string()));
        }
    }
    Ok(set)
}
