//! The workspace language: sets, maps, diagrams and braidings declared in
//! one text file.
//!
//! ```text
//! # comments run to the end of the line
//! set X = { a, b, c }
//! set Y = { p, q }
//! map f : X -> Y { a -> p, b -> q, c -> q }
//! diagram D { f, g, h }
//! braiding B : X * Y { (a, p) -> (p, a), ... }
//! ```
//!
//! Declarations may appear in any order and refer to each other freely.
//! [`render_workspace`] prints the canonical form: kinds grouped, names
//! sorted, one assignment per line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::braiding::Braiding;
use crate::diagrams::Diagram;
use crate::error::Error;
use crate::finmap::{FinMap, FiniteSet, ProductSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: expected {expected}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("{line}:{col}: unknown reference `{name}`")]
    UnknownReference { name: String, line: usize, col: usize },
    #[error("{line}:{col}: duplicate name `{name}`")]
    DuplicateName { name: String, line: usize, col: usize },
    #[error("`{map}` has no assignment for `{element}`")]
    NotTotal { map: String, element: String },
    #[error("{line}:{col}: {source}")]
    Invalid {
        line: usize,
        col: usize,
        source: Error,
    },
}

#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub sets: BTreeMap<String, Arc<FiniteSet>>,
    pub maps: BTreeMap<String, FinMap>,
    pub diagrams: BTreeMap<String, Diagram>,
    pub braidings: BTreeMap<String, Braiding>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Sym(&'static str),
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Name(n) => format!("`{n}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::End => "end of input".into(),
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'')
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    const SYMS: [&str; 9] = ["->", "=", "{", "}", ",", ":", "*", "(", ")"];
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line_no = i + 1;
        let line = line.split('#').next().unwrap_or("");
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut k = 0;
        while k < chars.len() {
            let (byte, c) = chars[k];
            let pos = Pos {
                line: line_no,
                col: k + 1,
            };
            if c.is_whitespace() {
                k += 1;
            } else if is_name_char(c) {
                let start = k;
                while k < chars.len() && is_name_char(chars[k].1) {
                    k += 1;
                }
                let end = chars.get(k).map_or(line.len(), |&(b, _)| b);
                out.push((Tok::Name(line[chars[start].0..end].to_owned()), pos));
            } else if let Some(s) = SYMS.iter().find(|s| line[byte..].starts_with(**s)) {
                k += s.chars().count();
                out.push((Tok::Sym(s), pos));
            } else {
                return Err(ParseError::Syntax {
                    line: line_no,
                    col: k + 1,
                    expected: format!("a name or symbol, found `{c}`"),
                });
            }
        }
    }
    let end = Pos {
        line: src.lines().count().max(1),
        col: src.lines().last().map_or(1, |l| l.chars().count() + 1),
    };
    out.push((Tok::End, end));
    Ok(out)
}

#[derive(Debug, Clone)]
struct Name {
    text: String,
    pos: Pos,
}

enum Decl {
    Set {
        name: Name,
        elements: Vec<Name>,
    },
    Map {
        name: Name,
        dom: Name,
        cod: Name,
        pairs: Vec<(Name, Name)>,
    },
    Diagram {
        name: Name,
        members: Vec<Name>,
    },
    Braiding {
        name: Name,
        left: Name,
        right: Name,
        pairs: Vec<([Name; 2], [Name; 2])>,
    },
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        let (t, p) = self.peek();
        Err(ParseError::Syntax {
            line: p.line,
            col: p.col,
            expected: format!("{expected}, found {}", describe(t)),
        })
    }

    fn sym(&mut self, s: &'static str) -> Result<(), ParseError> {
        if self.peek().0 == Tok::Sym(s) {
            self.at += 1;
            Ok(())
        } else {
            self.fail(&format!("`{s}`"))
        }
    }

    fn eat(&mut self, s: &'static str) -> bool {
        let hit = self.peek().0 == Tok::Sym(s);
        if hit {
            self.at += 1;
        }
        hit
    }

    fn name(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            (Tok::Name(text), pos) => {
                self.at += 1;
                Ok(Name { text, pos })
            }
            _ => self.fail("a name"),
        }
    }

    fn list<T>(
        &mut self,
        mut item: impl FnMut(&mut Parser) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        self.sym("{")?;
        if self.eat("}") {
            return Ok(Vec::new());
        }
        let mut out = vec![item(self)?];
        while self.eat(",") {
            out.push(item(self)?);
        }
        self.sym("}")?;
        Ok(out)
    }

    fn pair(&mut self) -> Result<[Name; 2], ParseError> {
        self.sym("(")?;
        let a = self.name()?;
        self.sym(",")?;
        let b = self.name()?;
        self.sym(")")?;
        Ok([a, b])
    }

    fn decl(&mut self) -> Result<Decl, ParseError> {
        let keyword = match &self.peek().0 {
            Tok::Name(k) => k.clone(),
            _ => return self.fail("`set`, `map`, `diagram` or `braiding`"),
        };
        match keyword.as_str() {
            "set" => {
                self.at += 1;
                let name = self.name()?;
                self.sym("=")?;
                let elements = self.list(Parser::name)?;
                Ok(Decl::Set { name, elements })
            }
            "map" => {
                self.at += 1;
                let name = self.name()?;
                self.sym(":")?;
                let dom = self.name()?;
                self.sym("->")?;
                let cod = self.name()?;
                let pairs = self.list(|p| {
                    let a = p.name()?;
                    p.sym("->")?;
                    Ok((a, p.name()?))
                })?;
                Ok(Decl::Map {
                    name,
                    dom,
                    cod,
                    pairs,
                })
            }
            "diagram" => {
                self.at += 1;
                let name = self.name()?;
                let members = self.list(Parser::name)?;
                Ok(Decl::Diagram { name, members })
            }
            "braiding" => {
                self.at += 1;
                let name = self.name()?;
                self.sym(":")?;
                let left = self.name()?;
                self.sym("*")?;
                let right = self.name()?;
                let pairs = self.list(|p| {
                    let a = p.pair()?;
                    p.sym("->")?;
                    Ok((a, p.pair()?))
                })?;
                Ok(Decl::Braiding {
                    name,
                    left,
                    right,
                    pairs,
                })
            }
            _ => self.fail("`set`, `map`, `diagram` or `braiding`"),
        }
    }
}

fn unknown(n: &Name) -> ParseError {
    ParseError::UnknownReference {
        name: n.text.clone(),
        line: n.pos.line,
        col: n.pos.col,
    }
}

fn duplicate(n: &Name) -> ParseError {
    ParseError::DuplicateName {
        name: n.text.clone(),
        line: n.pos.line,
        col: n.pos.col,
    }
}

fn invalid(n: &Name, source: Error) -> ParseError {
    ParseError::Invalid {
        line: n.pos.line,
        col: n.pos.col,
        source,
    }
}

fn label_index(set: &FiniteSet, n: &Name) -> Result<usize, ParseError> {
    set.index_of(&n.text).ok_or_else(|| unknown(n))
}

/// Fills a table of length `dom.cardinality()` from `(index, value)`
/// assignments, rejecting repeats and gaps.
fn fill_table(
    map: &Name,
    dom: &FiniteSet,
    assignments: Vec<(&Name, usize, usize)>,
) -> Result<Vec<usize>, ParseError> {
    let mut table = vec![None; dom.cardinality()];
    for (at, x, y) in assignments {
        if table[x].replace(y).is_some() {
            return Err(invalid(at, Error::DuplicateAssignment(dom.label(x).to_owned())));
        }
    }
    table
        .into_iter()
        .enumerate()
        .map(|(x, v)| {
            v.ok_or_else(|| ParseError::NotTotal {
                map: map.text.clone(),
                element: dom.label(x).to_owned(),
            })
        })
        .collect()
}

pub fn parse_workspace(src: &str) -> Result<Workspace, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let mut decls = Vec::new();
    while p.peek().0 != Tok::End {
        decls.push(p.decl()?);
    }

    let mut w = Workspace::default();
    for d in &decls {
        if let Decl::Set { name, elements } = d {
            if w.sets.contains_key(&name.text) {
                return Err(duplicate(name));
            }
            let set = FiniteSet::new(name.text.clone(), elements.iter().map(|e| e.text.clone()))
                .map_err(|e| invalid(name, e))?;
            w.sets.insert(name.text.clone(), set);
        }
    }
    let set = |w: &Workspace, n: &Name| w.sets.get(&n.text).cloned().ok_or_else(|| unknown(n));

    for d in &decls {
        if let Decl::Map {
            name,
            dom,
            cod,
            pairs,
        } = d
        {
            if w.maps.contains_key(&name.text) {
                return Err(duplicate(name));
            }
            let (x, y) = (set(&w, dom)?, set(&w, cod)?);
            let assignments = pairs
                .iter()
                .map(|(a, b)| Ok((a, label_index(&x, a)?, label_index(&y, b)?)))
                .collect::<Result<Vec<_>, ParseError>>()?;
            let table = fill_table(name, &x, assignments)?;
            let f = FinMap::new(name.text.clone(), x, y, table).map_err(|e| invalid(name, e))?;
            w.maps.insert(name.text.clone(), f);
        }
    }

    for d in &decls {
        match d {
            Decl::Diagram { name, members } => {
                if w.diagrams.contains_key(&name.text) {
                    return Err(duplicate(name));
                }
                let edges = members
                    .iter()
                    .map(|m| w.maps.get(&m.text).cloned().ok_or_else(|| unknown(m)))
                    .collect::<Result<Vec<_>, ParseError>>()?;
                let dg = Diagram::from_edges(name.text.clone(), edges).map_err(|e| invalid(name, e))?;
                w.diagrams.insert(name.text.clone(), dg);
            }
            Decl::Braiding {
                name,
                left,
                right,
                pairs,
            } => {
                if w.braidings.contains_key(&name.text) {
                    return Err(duplicate(name));
                }
                let (x, y) = (set(&w, left)?, set(&w, right)?);
                let dom = ProductSet::new(&[x.clone(), y.clone()]);
                let cod = ProductSet::new(&[y.clone(), x.clone()]);
                let assignments = pairs
                    .iter()
                    .map(|([a, b], [c, d])| {
                        let from = dom.index(&[label_index(&x, a)?, label_index(&y, b)?]);
                        let to = cod.index(&[label_index(&y, c)?, label_index(&x, d)?]);
                        Ok((a, from, to))
                    })
                    .collect::<Result<Vec<_>, ParseError>>()?;
                let table = fill_table(name, dom.carrier(), assignments)?;
                let b = Braiding::new(name.text.clone(), x, y, table).map_err(|e| invalid(name, e))?;
                w.braidings.insert(name.text.clone(), b);
            }
            _ => {}
        }
    }
    Ok(w)
}

pub fn render_workspace(w: &Workspace) -> String {
    let mut groups: Vec<String> = Vec::new();

    let mut s = String::new();
    for (name, set) in &w.sets {
        writeln!(s, "set {name} = {{ {} }}", set.elements().join(", ")).unwrap();
    }
    groups.push(s);

    let mut s = String::new();
    for (name, f) in &w.maps {
        writeln!(s, "map {name} : {} -> {} {{", f.dom().id(), f.cod().id()).unwrap();
        let lines: Vec<String> = f
            .assignments()
            .into_iter()
            .map(|(a, b)| format!("  {a} -> {b}"))
            .collect();
        writeln!(s, "{}\n}}", lines.join(",\n")).unwrap();
    }
    groups.push(s);

    let mut s = String::new();
    for (name, d) in &w.diagrams {
        let members: Vec<&str> = d.edges().iter().map(|e| e.name()).collect();
        writeln!(s, "diagram {name} {{ {} }}", members.join(", ")).unwrap();
    }
    groups.push(s);

    let mut s = String::new();
    for (name, b) in &w.braidings {
        writeln!(s, "braiding {name} : {} * {} {{", b.left().id(), b.right().id()).unwrap();
        let (x, y) = (b.left(), b.right());
        let dom = ProductSet::new(&[x.clone(), y.clone()]);
        let cod = ProductSet::new(&[y.clone(), x.clone()]);
        let lines: Vec<String> = b
            .map()
            .table()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let (from, to) = (dom.tuple(i), cod.tuple(v));
                format!(
                    "  ({}, {}) -> ({}, {})",
                    x.label(from[0]),
                    y.label(from[1]),
                    y.label(to[0]),
                    x.label(to[1])
                )
            })
            .collect();
        writeln!(s, "{}\n}}", lines.join(",\n")).unwrap();
    }
    groups.push(s);

    groups.retain(|g| !g.is_empty());
    groups.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "
        # a semicommutative triangle
        set X = { a, b, c }
        set Y = { p, q }
        set Z = { u, v }
        map f : X -> Y { a -> p, b -> q, c -> q }
        map g : Y -> Z { p -> u, q -> v }
        map h : Z -> X { u -> a, v -> b }
        diagram T { f, g, h }
    ";

    #[test]
    fn single_set() {
        let w = parse_workspace("set X = { a, b }").unwrap();
        assert_eq!(w.sets["X"].elements(), &["a", "b"]);
    }

    #[test]
    fn triangle_parses() {
        let w = parse_workspace(TRIANGLE).unwrap();
        assert_eq!((w.sets.len(), w.maps.len(), w.diagrams.len()), (3, 3, 1));
        assert_eq!(w.maps["f"].table(), &[0, 1, 1]);
        assert_eq!(w.diagrams["T"].objects().len(), 3);
    }

    #[test]
    fn braiding_parses() {
        let w = parse_workspace(
            "set X = { 0, 1 }
             braiding S : X * X { (0,0) -> (0,0), (0,1) -> (1,0), (1,0) -> (0,1), (1,1) -> (1,1) }",
        )
        .unwrap();
        assert_eq!(w.braidings["S"].map().table(), &[0, 2, 1, 3]);
    }

    #[test]
    fn unknown_set() {
        assert_eq!(
            parse_workspace("map f : X -> Y { a -> b }").unwrap_err(),
            ParseError::UnknownReference {
                name: "X".into(),
                line: 1,
                col: 9
            }
        );
    }

    #[test]
    fn unknown_label_and_member() {
        let e = parse_workspace("set X = { a }\nmap f : X -> X { a -> z }").unwrap_err();
        assert!(matches!(e, ParseError::UnknownReference { ref name, line: 2, .. } if name == "z"));
        let e = parse_workspace("set X = { a }\ndiagram D { f }").unwrap_err();
        assert!(matches!(e, ParseError::UnknownReference { ref name, .. } if name == "f"));
    }

    #[test]
    fn duplicates() {
        let e = parse_workspace("set X = { a }\nset X = { b }").unwrap_err();
        assert_eq!(
            e,
            ParseError::DuplicateName {
                name: "X".into(),
                line: 2,
                col: 5
            }
        );
        let e = parse_workspace("set X = { a, a }").unwrap_err();
        assert!(matches!(e, ParseError::Invalid { source: Error::DuplicateElement(_), .. }));
        let e = parse_workspace("set X = { a }\nmap f : X -> X { a -> a, a -> a }").unwrap_err();
        assert!(matches!(e, ParseError::Invalid { source: Error::DuplicateAssignment(_), .. }));
    }

    #[test]
    fn not_total() {
        let e = parse_workspace("set X = { a, b }\nmap f : X -> X { a -> a }").unwrap_err();
        assert_eq!(
            e,
            ParseError::NotTotal {
                map: "f".into(),
                element: "b".into()
            }
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_workspace("set X = { a b }").unwrap_err();
        assert_eq!(
            e,
            ParseError::Syntax {
                line: 1,
                col: 13,
                expected: "`}`, found `b`".into()
            }
        );
        assert!(matches!(parse_workspace("set X = { a }\n  !"), Err(ParseError::Syntax { line: 2, col: 3, .. })));
        assert!(matches!(parse_workspace("set X ="), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_workspace("thing X"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn empty_renders_empty() {
        let w = parse_workspace("# nothing\n").unwrap();
        assert_eq!(render_workspace(&w), "");
    }

    #[test]
    fn render_is_sorted_and_a_fixpoint() {
        let src = "map g : B -> A { y -> a }\nset B = { y }\nset A = { a }\nmap f : A -> B { a -> y }";
        let once = render_workspace(&parse_workspace(src).unwrap());
        assert_eq!(
            once,
            "set A = { a }\nset B = { y }\n\nmap f : A -> B {\n  a -> y\n}\nmap g : B -> A {\n  y -> a\n}\n"
        );
        assert_eq!(render_workspace(&parse_workspace(&once).unwrap()), once);
        let t = render_workspace(&parse_workspace(TRIANGLE).unwrap());
        assert_eq!(render_workspace(&parse_workspace(&t).unwrap()), t);
    }
}
