//! Named graph families.
//!
//! Vertex numbering is fixed per family:
//!
//! * `path(n)`: edges `i ~ i+1` for `0 <= i < n-1`.
//! * `cycle(n)`: `path(n)` plus the edge `0 ~ n-1`.
//! * `complete(n)`, `empty(n)`: vertices `0..n`.
//! * `product(g, h)`: Cartesian product, `(i, j) -> i * |h| + j`.
//! * `join(g, h)`: `g` first, then `h` shifted by `|g|`.
//! * `complement(g)`: same numbering as `g`.
//!
//! Families can be written as terms, e.g. `product(cycle(4),cycle(4))` or
//! `join(empty(3),empty(3))`, and parsed with [`Family::parse`].

use std::fmt;

use super::SimpleGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Empty(usize),
    Complement(Box<Family>),
    Join(Box<Family>, Box<Family>),
    CartesianProduct(Box<Family>, Box<Family>),
}

pub fn path(n: usize) -> Result<SimpleGraph> {
    if n < 2 {
        return Err(Error::BadParameter(format!("path needs n >= 2, got {n}")));
    }
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    SimpleGraph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Result<SimpleGraph> {
    if n < 3 {
        return Err(Error::BadParameter(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimpleGraph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Result<SimpleGraph> {
    if n < 1 {
        return Err(Error::BadParameter("complete graph needs n >= 1".into()));
    }
    Ok(SimpleGraph::empty(n).complement())
}

pub fn empty(n: usize) -> Result<SimpleGraph> {
    if n < 1 {
        return Err(Error::BadParameter("empty graph needs n >= 1".into()));
    }
    Ok(SimpleGraph::empty(n))
}

pub fn generate(family: &Family) -> Result<SimpleGraph> {
    match family {
        Family::Path(n) => path(*n),
        Family::Cycle(n) => cycle(*n),
        Family::Complete(n) => complete(*n),
        Family::Empty(n) => empty(*n),
        Family::Complement(g) => Ok(generate(g)?.complement()),
        Family::Join(g, h) => Ok(generate(g)?.join(&generate(h)?)),
        Family::CartesianProduct(g, h) => Ok(generate(g)?.cartesian_product(&generate(h)?)),
    }
}

impl Family {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = TermParser {
            s: text.as_bytes(),
            pos: 0,
            text,
        };
        let f = p.family()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!("trailing input in family `{text}`")));
        }
        Ok(f)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path(n) => write!(f, "path({n})"),
            Family::Cycle(n) => write!(f, "cycle({n})"),
            Family::Complete(n) => write!(f, "complete({n})"),
            Family::Empty(n) => write!(f, "empty({n})"),
            Family::Complement(g) => write!(f, "complement({g})"),
            Family::Join(g, h) => write!(f, "join({g},{h})"),
            Family::CartesianProduct(g, h) => write!(f, "product({g},{h})"),
        }
    }
}

struct TermParser<'a> {
    s: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl TermParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected `{}` at offset {} in `{}`",
                c as char, self.pos, self.text
            )))
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii")
    }

    fn number(&mut self) -> Result<usize> {
        let w = self.word().to_string();
        w.parse()
            .map_err(|_| Error::BadParameter(format!("expected a vertex count, got `{w}`")))
    }

    fn family(&mut self) -> Result<Family> {
        let name = self.word().to_ascii_lowercase();
        self.expect(b'(')?;
        let f = match name.as_str() {
            "path" => Family::Path(self.number()?),
            "cycle" => Family::Cycle(self.number()?),
            "complete" => Family::Complete(self.number()?),
            "empty" => Family::Empty(self.number()?),
            "complement" => Family::Complement(Box::new(self.family()?)),
            "join" | "product" | "cartesian_product" => {
                let g = self.family()?;
                self.expect(b',')?;
                let h = self.family()?;
                if name == "join" {
                    Family::Join(Box::new(g), Box::new(h))
                } else {
                    Family::CartesianProduct(Box::new(g), Box::new(h))
                }
            }
            _ => return Err(Error::UnknownFamily(name)),
        };
        self.expect(b')')?;
        Ok(f)
    }
}
