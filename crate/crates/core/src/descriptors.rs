//! Symbolic names for the indecomposable bimodules and their invariants.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! M(i|j,k)  N(i|j,k)  W(i|j,k)  S(i|j,k)     strings
//! B(k,m,p/q)                                 bands
//! split(Sl:i,Pr:j)                           k-split, any of Sl/Pl with Sr/Pr
//! L(i|j)  P(i|j)  S0(i|j)  N0(i|j)           k-split shorthands
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{AlgebraContext, CoveringVertex, TorusVertex};
use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StringType {
    M,
    N,
    W,
    S,
}

impl StringType {
    pub const ALL: [StringType; 4] = [StringType::M, StringType::N, StringType::W, StringType::S];

    pub fn course(self) -> Course {
        match self {
            StringType::M | StringType::N => Course::Right,
            StringType::W | StringType::S => Course::Down,
        }
    }

    /// Walk length for `k` valleys.
    pub fn length(self, k: usize) -> usize {
        match self {
            StringType::M => 2 * k + 2,
            StringType::N | StringType::S => 2 * k + 1,
            StringType::W => 2 * k,
        }
    }

    pub fn min_valleys(self) -> usize {
        match self {
            StringType::M => 0,
            _ => 1,
        }
    }
}

impl fmt::Display for StringType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            StringType::M => "M",
            StringType::N => "N",
            StringType::W => "W",
            StringType::S => "S",
        };
        f.write_str(c)
    }
}

/// Direction of the first step of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Course {
    Right,
    Down,
}

impl Course {
    pub fn flip(self) -> Course {
        match self {
            Course::Right => Course::Down,
            Course::Down => Course::Right,
        }
    }
}

/// Vertices of the alternating walk of length `l` from `start`.
pub fn walk(start: CoveringVertex, course: Course, l: usize) -> Vec<CoveringVertex> {
    let mut out = Vec::with_capacity(l + 1);
    let mut v = start;
    let mut step = course;
    out.push(v);
    for _ in 0..l {
        v = match step {
            Course::Right => CoveringVertex::new(v.p, v.q + 1),
            Course::Down => CoveringVertex::new(v.p + 1, v.q),
        };
        out.push(v);
        step = step.flip();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringDescriptor {
    pub stype: StringType,
    pub vertex: TorusVertex,
    pub valleys: usize,
}

impl StringDescriptor {
    pub fn new(ctx: &AlgebraContext, stype: StringType, i: i64, j: i64, valleys: usize) -> Result<Self> {
        if valleys < stype.min_valleys() {
            return Err(Error::domain(format!(
                "{stype} with {valleys} valleys has walk length {} < 2; use split form",
                stype.length(valleys)
            )));
        }
        Ok(StringDescriptor {
            stype,
            vertex: ctx.vertex(i, j),
            valleys,
        })
    }

    pub fn length(&self) -> usize {
        self.stype.length(self.valleys)
    }

    pub fn course(&self) -> Course {
        self.stype.course()
    }

    pub fn width(&self) -> usize {
        let l = self.length();
        match self.course() {
            Course::Right => (l + 3) / 2,
            Course::Down => (l + 2) / 2,
        }
    }

    pub fn height(&self) -> usize {
        let l = self.length();
        match self.course() {
            Course::Right => (l + 2) / 2,
            Course::Down => (l + 3) / 2,
        }
    }

    pub fn dimension(&self) -> usize {
        self.length() + 1
    }

    /// The covering-level walk, starting at the covering vertex with the
    /// same coordinates as the initial torus vertex.
    pub fn walk(&self) -> Vec<CoveringVertex> {
        walk(
            CoveringVertex::new(self.vertex.i as i64, self.vertex.j as i64),
            self.course(),
            self.length(),
        )
    }
}

impl fmt::Display for StringDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.stype, self.vertex, self.valleys)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BandDescriptor {
    pub k: usize,
    pub m: usize,
    pub lambda: Q,
}

impl BandDescriptor {
    pub fn new(ctx: &AlgebraContext, k: i64, m: usize, lambda: Q) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::domain("band parameter must be nonzero"));
        }
        if m == 0 {
            return Err(Error::domain("band size must be positive"));
        }
        Ok(BandDescriptor {
            k: ctx.residue(k),
            m,
            lambda,
        })
    }

    pub fn dimension(&self, ctx: &AlgebraContext) -> usize {
        2 * ctx.n() * self.m
    }
}

impl fmt::Display for BandDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({},{},{})", self.k, self.m, self.lambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Simple,
    Projective,
}

/// An indecomposable one-sided module: a simple or an indecomposable
/// projective, on the left or on the right.
///
/// The left projective `P_i` lives at `i` (top) and `i+1`; the right
/// projective `P_j` lives at `j` (top) and `j-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneSided {
    pub side: Side,
    pub kind: Kind,
    pub vertex: usize,
}

impl OneSided {
    pub fn dimension(&self) -> usize {
        match self.kind {
            Kind::Simple => 1,
            Kind::Projective => 2,
        }
    }

    /// Dimension of `ε_v M` (left) or `M ε_v` (right).
    pub fn dim_at(&self, ctx: &AlgebraContext, v: usize) -> usize {
        let second = match self.side {
            Side::Left => ctx.succ(self.vertex),
            Side::Right => ctx.pred(self.vertex),
        };
        let mut d = usize::from(self.vertex == v);
        if self.kind == Kind::Projective && second == v {
            d += 1;
        }
        d
    }

    pub fn all(ctx: &AlgebraContext, side: Side) -> Vec<OneSided> {
        [Kind::Simple, Kind::Projective]
            .into_iter()
            .flat_map(|kind| (1..=ctx.n()).map(move |vertex| OneSided { side, kind, vertex }))
            .collect()
    }

    fn token(&self) -> &'static str {
        match (self.kind, self.side) {
            (Kind::Simple, Side::Left) => "Sl",
            (Kind::Simple, Side::Right) => "Sr",
            (Kind::Projective, Side::Left) => "Pl",
            (Kind::Projective, Side::Right) => "Pr",
        }
    }
}

/// Long form used in cell reports, e.g. `S_left:1`.
impl fmt::Display for OneSided {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            Kind::Simple => "S",
            Kind::Projective => "P",
        };
        let s = match self.side {
            Side::Left => "left",
            Side::Right => "right",
        };
        write!(f, "{k}_{s}:{}", self.vertex)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplitDescriptor {
    pub left: OneSided,
    pub right: OneSided,
}

impl SplitDescriptor {
    pub fn new(left: OneSided, right: OneSided) -> Result<Self> {
        if left.side != Side::Left || right.side != Side::Right {
            return Err(Error::domain("split needs a left module then a right module"));
        }
        Ok(SplitDescriptor { left, right })
    }

    pub fn from_kinds(ctx: &AlgebraContext, left: Kind, i: i64, right: Kind, j: i64) -> Self {
        SplitDescriptor {
            left: OneSided {
                side: Side::Left,
                kind: left,
                vertex: ctx.residue(i),
            },
            right: OneSided {
                side: Side::Right,
                kind: right,
                vertex: ctx.residue(j),
            },
        }
    }

    pub fn dimension(&self) -> usize {
        self.left.dimension() * self.right.dimension()
    }

    pub fn all(ctx: &AlgebraContext) -> Vec<SplitDescriptor> {
        let rights = OneSided::all(ctx, Side::Right);
        OneSided::all(ctx, Side::Left)
            .into_iter()
            .flat_map(|left| rights.iter().map(move |&right| SplitDescriptor { left, right }))
            .collect()
    }
}

impl fmt::Display for SplitDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "split({}:{},{}:{})",
            self.left.token(),
            self.left.vertex,
            self.right.token(),
            self.right.vertex
        )
    }
}

/// Variant order is the canonical order: strings, then splits, then bands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Descriptor {
    String(StringDescriptor),
    Split(SplitDescriptor),
    Band(BandDescriptor),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Automorphism {
    /// `θ^t`: rotation of the quiver by `t` steps.
    Theta(i64),
    /// `η_μ`: scaling of `α_1` by `μ`.
    Eta(Q),
}

impl Descriptor {
    /// Descriptor of the walk of length `l` from `v` (a split when `l ≤ 1`).
    pub fn from_walk(ctx: &AlgebraContext, v: TorusVertex, course: Course, l: usize) -> Descriptor {
        let (i, j) = (v.i as i64, v.j as i64);
        if l == 0 {
            return Descriptor::Split(SplitDescriptor::from_kinds(ctx, Kind::Simple, i, Kind::Simple, j));
        }
        if l == 1 {
            return Descriptor::Split(match course {
                Course::Right => SplitDescriptor::from_kinds(ctx, Kind::Simple, i, Kind::Projective, j + 1),
                Course::Down => SplitDescriptor::from_kinds(ctx, Kind::Projective, i, Kind::Simple, j),
            });
        }
        let (stype, valleys) = match (course, l % 2 == 0) {
            (Course::Right, true) => (StringType::M, (l - 1) / 2),
            (Course::Right, false) => (StringType::N, (l - 1) / 2),
            (Course::Down, true) => (StringType::W, l / 2),
            (Course::Down, false) => (StringType::S, l / 2),
        };
        Descriptor::String(StringDescriptor {
            stype,
            vertex: v,
            valleys,
        })
    }

    pub fn dimension(&self, ctx: &AlgebraContext) -> usize {
        match self {
            Descriptor::String(s) => s.dimension(),
            Descriptor::Split(s) => s.dimension(),
            Descriptor::Band(b) => b.dimension(ctx),
        }
    }

    pub fn valleys(&self) -> Result<usize> {
        match self {
            Descriptor::String(s) => Ok(s.valleys),
            Descriptor::Split(_) => Ok(0),
            Descriptor::Band(_) => Err(Error::domain("valleys undefined for band bimodules")),
        }
    }

    pub fn as_string(&self) -> Option<&StringDescriptor> {
        match self {
            Descriptor::String(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_band(&self) -> Option<&BandDescriptor> {
        match self {
            Descriptor::Band(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_split(&self) -> Option<&SplitDescriptor> {
        match self {
            Descriptor::Split(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_band(&self) -> bool {
        matches!(self, Descriptor::Band(_))
    }

    pub fn is_split(&self) -> bool {
        matches!(self, Descriptor::Split(_))
    }

    /// The regular bimodule `B(1,1,1)`.
    pub fn unit() -> Descriptor {
        Descriptor::Band(BandDescriptor {
            k: 1,
            m: 1,
            lambda: Q::one(),
        })
    }

    /// Descriptor of the twist `^φ X` (left) or `X^φ` (right).
    pub fn twist(&self, ctx: &AlgebraContext, side: Side, aut: &Automorphism) -> Result<Descriptor> {
        if let Automorphism::Eta(mu) = aut {
            if mu.is_zero() {
                return Err(Error::domain("twist parameter must be nonzero"));
            }
        }
        Ok(match (self, aut) {
            (Descriptor::String(s), Automorphism::Theta(t)) => {
                let (i, j) = (s.vertex.i as i64, s.vertex.j as i64);
                let vertex = match side {
                    Side::Left => ctx.vertex(i - t, j),
                    Side::Right => ctx.vertex(i, j - t),
                };
                Descriptor::String(StringDescriptor { vertex, ..*s })
            }
            (Descriptor::Split(s), Automorphism::Theta(t)) => {
                let mut s = *s;
                match side {
                    Side::Left => s.left.vertex = ctx.residue(s.left.vertex as i64 - t),
                    Side::Right => s.right.vertex = ctx.residue(s.right.vertex as i64 - t),
                }
                Descriptor::Split(s)
            }
            (Descriptor::String(_) | Descriptor::Split(_), Automorphism::Eta(_)) => self.clone(),
            (Descriptor::Band(b), Automorphism::Theta(t)) => {
                let k = match side {
                    Side::Left => b.k as i64 - t,
                    Side::Right => b.k as i64 + t,
                };
                Descriptor::Band(BandDescriptor {
                    k: ctx.residue(k),
                    ..b.clone()
                })
            }
            (Descriptor::Band(b), Automorphism::Eta(mu)) => {
                let lambda = match side {
                    Side::Left => &b.lambda / mu,
                    Side::Right => &b.lambda * mu,
                };
                Descriptor::Band(BandDescriptor { lambda, ..b.clone() })
            }
        })
    }

    pub fn parse(s: &str, ctx: &AlgebraContext) -> Result<Descriptor> {
        let mut p = Parser::new(s, ctx);
        let d = p.descriptor()?;
        p.end()?;
        Ok(d)
    }
}

impl From<StringDescriptor> for Descriptor {
    fn from(s: StringDescriptor) -> Self {
        Descriptor::String(s)
    }
}

impl From<SplitDescriptor> for Descriptor {
    fn from(s: SplitDescriptor) -> Self {
        Descriptor::Split(s)
    }
}

impl From<BandDescriptor> for Descriptor {
    fn from(b: BandDescriptor) -> Self {
        Descriptor::Band(b)
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::String(s) => s.fmt(f),
            Descriptor::Split(s) => s.fmt(f),
            Descriptor::Band(b) => b.fmt(f),
        }
    }
}

/// Indecomposable summands with multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DecompositionMultiset {
    entries: BTreeMap<Descriptor, usize>,
}

impl DecompositionMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, d: Descriptor, mult: usize) {
        if mult > 0 {
            *self.entries.entry(d).or_insert(0) += mult;
        }
    }

    pub fn extend(&mut self, other: &DecompositionMultiset) {
        for (d, m) in &other.entries {
            self.add(d.clone(), *m);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn multiplicity(&self, d: &Descriptor) -> usize {
        self.entries.get(d).copied().unwrap_or(0)
    }

    pub fn contains(&self, d: &Descriptor) -> bool {
        self.entries.contains_key(d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Descriptor, usize)> {
        self.entries.iter().map(|(d, m)| (d, *m))
    }

    pub fn support(&self) -> impl Iterator<Item = &Descriptor> {
        self.entries.keys()
    }

    pub fn total_dimension(&self, ctx: &AlgebraContext) -> usize {
        self.iter().map(|(d, m)| m * d.dimension(ctx)).sum()
    }

    pub fn parse(s: &str, ctx: &AlgebraContext) -> Result<DecompositionMultiset> {
        let mut p = Parser::new(s, ctx);
        let out = p.multiset()?;
        p.end()?;
        Ok(out)
    }
}

impl FromIterator<Descriptor> for DecompositionMultiset {
    fn from_iter<I: IntoIterator<Item = Descriptor>>(iter: I) -> Self {
        let mut out = DecompositionMultiset::new();
        for d in iter {
            out.add(d, 1);
        }
        out
    }
}

impl fmt::Display for DecompositionMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        for (k, (d, m)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if *m > 1 {
                write!(f, "{m}*")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ctx: &'a AlgebraContext,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, ctx: &'a AlgebraContext) -> Self {
        Parser { src, pos: 0, ctx }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(Error::parse(self.pos, format!("expected `{want}`, found `{c}`"))),
            None => Err(Error::parse(self.pos, format!("expected `{want}`, found end of input"))),
        }
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(Error::parse(self.pos, format!("unexpected `{c}`"))),
        }
    }

    fn ident(&mut self) -> Result<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest
            .char_indices()
            .find(|(_, c)| !c.is_ascii_alphanumeric())
            .map_or(rest.len(), |(k, _)| k);
        if len == 0 {
            return Err(Error::parse(start, "expected a descriptor name"));
        }
        self.pos += len;
        Ok((start, &rest[..len]))
    }

    fn integer(&mut self) -> Result<(usize, i64)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let sign = usize::from(rest.starts_with('-'));
        let digits = rest[sign..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(Error::parse(start, "expected an integer"));
        }
        self.pos += sign + digits;
        let v = rest[..sign + digits]
            .parse()
            .map_err(|_| Error::parse(start, "integer out of range"))?;
        Ok((start, v))
    }

    fn natural(&mut self) -> Result<usize> {
        let (pos, v) = self.integer()?;
        usize::try_from(v).map_err(|_| Error::parse(pos, "expected a non-negative integer"))
    }

    /// A vertex label, read mod n.
    fn label(&mut self) -> Result<i64> {
        let (_, v) = self.integer()?;
        Ok(v)
    }

    fn vertex(&mut self) -> Result<(i64, i64)> {
        let i = self.label()?;
        self.expect('|')?;
        let j = self.label()?;
        Ok((i, j))
    }

    fn rational(&mut self) -> Result<Q> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest
            .char_indices()
            .find(|(_, c)| !(c.is_ascii_digit() || *c == '-' || *c == '/'))
            .map_or(rest.len(), |(k, _)| k);
        self.pos += len;
        Q::from_str(&rest[..len]).map_err(|e| Error::parse(start, e.to_string()))
    }

    fn descriptor(&mut self) -> Result<Descriptor> {
        let (start, name) = self.ident()?;
        self.expect('(')?;
        let ctx = *self.ctx;
        let d = match name {
            "M" | "N" | "W" | "S" => {
                let stype = match name {
                    "M" => StringType::M,
                    "N" => StringType::N,
                    "W" => StringType::W,
                    _ => StringType::S,
                };
                let (i, j) = self.vertex()?;
                self.expect(',')?;
                let k = self.natural()?;
                Descriptor::String(
                    StringDescriptor::new(&ctx, stype, i, j, k).map_err(|e| Error::parse(start, e.to_string()))?,
                )
            }
            "B" => {
                let k = self.label()?;
                self.expect(',')?;
                let m = self.natural()?;
                self.expect(',')?;
                let lambda = self.rational()?;
                Descriptor::Band(
                    BandDescriptor::new(&ctx, k, m, lambda).map_err(|e| Error::parse(start, e.to_string()))?,
                )
            }
            "L" | "P" | "S0" | "N0" => {
                let (i, j) = self.vertex()?;
                let (l, r) = match name {
                    "L" => (Kind::Simple, Kind::Simple),
                    "P" => (Kind::Projective, Kind::Projective),
                    "S0" => (Kind::Simple, Kind::Projective),
                    _ => (Kind::Projective, Kind::Simple),
                };
                Descriptor::Split(SplitDescriptor::from_kinds(&ctx, l, i, r, j))
            }
            "split" => {
                let left = self.one_sided(Side::Left)?;
                self.expect(',')?;
                let right = self.one_sided(Side::Right)?;
                Descriptor::Split(SplitDescriptor { left, right })
            }
            other => return Err(Error::parse(start, format!("unknown descriptor `{other}`"))),
        };
        self.expect(')')?;
        Ok(d)
    }

    fn one_sided(&mut self, side: Side) -> Result<OneSided> {
        let (pos, tok) = self.ident()?;
        let (kind, tok_side) = match tok {
            "Sl" => (Kind::Simple, Side::Left),
            "Pl" => (Kind::Projective, Side::Left),
            "Sr" => (Kind::Simple, Side::Right),
            "Pr" => (Kind::Projective, Side::Right),
            other => return Err(Error::parse(pos, format!("unknown one-sided module `{other}`"))),
        };
        if tok_side != side {
            return Err(Error::parse(pos, "split needs a left module then a right module"));
        }
        self.expect(':')?;
        let v = self.label()?;
        Ok(OneSided {
            side,
            kind,
            vertex: self.ctx.residue(v),
        })
    }

    fn multiset(&mut self) -> Result<DecompositionMultiset> {
        let mut out = DecompositionMultiset::new();
        if self.peek() == Some('0') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            let mult = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let m = self.natural()?;
                self.expect('*')?;
                m
            } else {
                1
            };
            let d = self.descriptor()?;
            out.add(d, mult);
            if self.peek() == Some('+') {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }
}

impl Serialize for Descriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Deserialization needs `n`; the vertex labels are only range-checked
/// against the largest label present.
impl<'de> Deserialize<'de> for Descriptor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let n = s
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .unwrap_or(1)
            .max(1);
        let ctx = AlgebraContext::new(n).map_err(serde::de::Error::custom)?;
        Descriptor::parse(&s, &ctx).map_err(serde::de::Error::custom)
    }
}

/// All string descriptors with at most `max_valleys` valleys.
pub fn all_strings(ctx: &AlgebraContext, max_valleys: usize) -> Vec<StringDescriptor> {
    let mut out = Vec::new();
    for stype in StringType::ALL {
        for k in stype.min_valleys()..=max_valleys {
            for v in ctx.vertices() {
                out.push(StringDescriptor {
                    stype,
                    vertex: v,
                    valleys: k,
                });
            }
        }
    }
    out.sort();
    out
}

pub fn all_bands(ctx: &AlgebraContext, max_m: usize, lambdas: &[Q]) -> Vec<BandDescriptor> {
    let mut out = Vec::new();
    for k in 1..=ctx.n() {
        for m in 1..=max_m {
            for l in lambdas {
                out.push(BandDescriptor {
                    k,
                    m,
                    lambda: l.clone(),
                });
            }
        }
    }
    out
}

/// Every descriptor in the bounded universe, in canonical order.
pub fn universe(ctx: &AlgebraContext, max_valleys: usize, max_m: usize, lambdas: &[Q]) -> Vec<Descriptor> {
    let mut out: Vec<Descriptor> = all_strings(ctx, max_valleys).into_iter().map(Descriptor::from).collect();
    out.extend(SplitDescriptor::all(ctx).into_iter().map(Descriptor::from));
    out.extend(all_bands(ctx, max_m, lambdas).into_iter().map(Descriptor::from));
    out.sort();
    out.dedup();
    out
}
