//! Two-sided, left and right cells of the multisemigroup of indecomposable
//! bimodules, plus bounded witness search for the preorders.
//!
//! `[X] >=_L [Y]` when `X` is a summand of `Z ⊗ Y` for some indecomposable
//! `Z`; right and two-sided versions multiply on the right or on both sides.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::AlgebraContext;
use crate::descriptors::{all_bands, all_strings, Descriptor, OneSided, Side, SplitDescriptor, StringType};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::tensor_rules::symbolic_tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwoSidedCellId {
    Split,
    J(usize),
    Band,
}

impl TwoSidedCellId {
    fn rank(&self) -> (u8, Reverse<usize>) {
        match *self {
            TwoSidedCellId::Band => (0, Reverse(0)),
            TwoSidedCellId::J(k) => (1, Reverse(k)),
            TwoSidedCellId::Split => (2, Reverse(0)),
        }
    }
}

/// `a > b` means `a >_J b`: split cells on top, bands at the bottom.
impl Ord for TwoSidedCellId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for TwoSidedCellId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TwoSidedCellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoSidedCellId::Split => write!(f, "Split"),
            TwoSidedCellId::J(k) => write!(f, "J({k})"),
            TwoSidedCellId::Band => write!(f, "Band"),
        }
    }
}

impl FromStr for TwoSidedCellId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "split" => return Ok(TwoSidedCellId::Split),
            "band" => return Ok(TwoSidedCellId::Band),
            _ => {}
        }
        let inner = t
            .strip_prefix('J')
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse(0, format!("expected Split, Band or J(k), got {t:?}")))?;
        inner
            .trim()
            .parse()
            .map(TwoSidedCellId::J)
            .map_err(|_| Error::parse(2, format!("bad valley count {inner:?}")))
    }
}

impl Serialize for TwoSidedCellId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn two_sided_cell(d: &Descriptor) -> TwoSidedCellId {
    match d {
        Descriptor::Band(_) => TwoSidedCellId::Band,
        Descriptor::Split(_) => TwoSidedCellId::Split,
        Descriptor::String(s) => TwoSidedCellId::J(s.valleys),
    }
}

pub fn j_order(a: TwoSidedCellId, b: TwoSidedCellId) -> Ordering {
    a.cmp(&b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TypeClass {
    MN,
    WS,
    MS,
    WN,
}

impl TypeClass {
    fn left(t: StringType) -> TypeClass {
        match t {
            StringType::M | StringType::N => TypeClass::MN,
            StringType::W | StringType::S => TypeClass::WS,
        }
    }

    fn right(t: StringType) -> TypeClass {
        match t {
            StringType::M | StringType::S => TypeClass::MS,
            StringType::W | StringType::N => TypeClass::WN,
        }
    }
}

impl fmt::Display for TypeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeftCellKey {
    /// The right-module factor.
    Split(OneSided),
    String { col: usize, width: usize, class: TypeClass },
    Band,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RightCellKey {
    /// The left-module factor.
    Split(OneSided),
    String { row: usize, height: usize, class: TypeClass },
    Band,
}

impl fmt::Display for LeftCellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeftCellKey::Split(m) => write!(f, "{m}"),
            LeftCellKey::String { col, width, class } => write!(f, "(col {col}, width {width}, {class})"),
            LeftCellKey::Band => write!(f, "band"),
        }
    }
}

impl fmt::Display for RightCellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RightCellKey::Split(m) => write!(f, "{m}"),
            RightCellKey::String { row, height, class } => write!(f, "(row {row}, height {height}, {class})"),
            RightCellKey::Band => write!(f, "band"),
        }
    }
}

impl Serialize for LeftCellKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for RightCellKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn left_cell_key(d: &Descriptor) -> LeftCellKey {
    match d {
        Descriptor::Band(_) => LeftCellKey::Band,
        Descriptor::Split(s) => LeftCellKey::Split(s.right),
        Descriptor::String(s) => LeftCellKey::String {
            col: s.vertex.j,
            width: s.width(),
            class: TypeClass::left(s.stype),
        },
    }
}

pub fn right_cell_key(d: &Descriptor) -> RightCellKey {
    match d {
        Descriptor::Band(_) => RightCellKey::Band,
        Descriptor::Split(s) => RightCellKey::Split(s.left),
        Descriptor::String(s) => RightCellKey::String {
            row: s.vertex.i,
            height: s.height(),
            class: TypeClass::right(s.stype),
        },
    }
}

/// Every member of a finite two-sided cell, in canonical order.
pub fn enumerate_cell(id: TwoSidedCellId, ctx: &AlgebraContext) -> Result<Vec<Descriptor>> {
    match id {
        TwoSidedCellId::Band => Err(Error::domain("infinite cell, enumeration refused")),
        TwoSidedCellId::Split => Ok(SplitDescriptor::all(ctx).into_iter().map(Descriptor::from).collect()),
        TwoSidedCellId::J(k) => Ok(all_strings(ctx, k)
            .into_iter()
            .filter(|s| s.valleys == k)
            .map(Descriptor::from)
            .collect()),
    }
}

/// A left cell and a right cell whose intersection is not a singleton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityViolation {
    pub left: String,
    pub right: String,
    pub members: Vec<Descriptor>,
}

impl fmt::Display for RegularityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.members.iter().map(|d| d.to_string()).collect();
        write!(
            f,
            "left cell {} meets right cell {} in {} elements [{}]",
            self.left,
            self.right,
            self.members.len(),
            names.join(", ")
        )
    }
}

pub fn check_strong_regularity(id: TwoSidedCellId, ctx: &AlgebraContext) -> Result<std::result::Result<(), RegularityViolation>> {
    let cell = enumerate_cell(id, ctx)?;
    Ok(strong_regularity_with(&cell, left_cell_key, right_cell_key))
}

/// Strong regularity of `cell` under arbitrary key functions.
pub fn strong_regularity_with<L, R>(
    cell: &[Descriptor],
    left: impl Fn(&Descriptor) -> L,
    right: impl Fn(&Descriptor) -> R,
) -> std::result::Result<(), RegularityViolation>
where
    L: Ord + fmt::Display,
    R: Ord + fmt::Display,
{
    let keyed: Vec<(L, R, &Descriptor)> = cell.iter().map(|d| (left(d), right(d), d)).collect();
    let lefts: BTreeSet<&L> = keyed.iter().map(|(l, _, _)| l).collect();
    let rights: BTreeSet<&R> = keyed.iter().map(|(_, r, _)| r).collect();
    let mut grid: BTreeMap<(&L, &R), Vec<Descriptor>> = BTreeMap::new();
    for (l, r, d) in &keyed {
        grid.entry((l, r)).or_default().push((*d).clone());
    }
    for l in &lefts {
        for r in &rights {
            let members = grid.get(&(*l, *r)).cloned().unwrap_or_default();
            if members.len() != 1 {
                return Err(RegularityViolation {
                    left: l.to_string(),
                    right: r.to_string(),
                    members,
                });
            }
        }
    }
    Ok(())
}

/// Bounds on the candidate factors `Z` tried by the witness searches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub valleys: usize,
    pub m: usize,
    pub lambdas: Vec<Q>,
}

impl Budget {
    pub fn new(valleys: usize, m: usize, lambdas: Vec<Q>) -> Self {
        Budget { valleys, m, lambdas }
    }

    /// Valleys up to one more than either argument, `m <= 3`, `λ ∈ {1, 2, -1}`.
    pub fn for_pair(x: &Descriptor, y: &Descriptor) -> Self {
        let v = x.valleys().unwrap_or(0).max(y.valleys().unwrap_or(0));
        Budget::new(v + 1, 3, vec![Q::one(), Q::from_int(2), Q::from_int(-1)])
    }

    /// The search order: the unit, then splits, strings, bands.
    pub fn candidates(&self, ctx: &AlgebraContext) -> Vec<Descriptor> {
        let unit = Descriptor::unit();
        let mut out = vec![unit.clone()];
        out.extend(SplitDescriptor::all(ctx).into_iter().map(Descriptor::from));
        out.extend(all_strings(ctx, self.valleys).into_iter().map(Descriptor::from));
        out.extend(
            all_bands(ctx, self.m, &self.lambdas)
                .into_iter()
                .map(Descriptor::from)
                .filter(|d| *d != unit),
        );
        out
    }
}

fn first_factor(
    candidates: &[Descriptor],
    hit: impl Fn(&Descriptor) -> Result<bool> + Sync,
) -> Result<Option<Descriptor>> {
    candidates
        .par_iter()
        .find_map_first(|z| match hit(z) {
            Ok(true) => Some(Ok(z.clone())),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .transpose()
}

/// The first `Z` in budget order with `x` a summand of `Z ⊗ y`. `None`
/// means no witness within the budget, not that `x` is not `>=_L y`.
pub fn find_left_witness(x: &Descriptor, y: &Descriptor, ctx: &AlgebraContext, budget: &Budget) -> Result<Option<Descriptor>> {
    first_factor(&budget.candidates(ctx), |z| Ok(symbolic_tensor(z, y, ctx)?.contains(x)))
}

/// The first `Z` in budget order with `x` a summand of `y ⊗ Z`.
pub fn find_right_witness(x: &Descriptor, y: &Descriptor, ctx: &AlgebraContext, budget: &Budget) -> Result<Option<Descriptor>> {
    first_factor(&budget.candidates(ctx), |z| Ok(symbolic_tensor(y, z, ctx)?.contains(x)))
}

/// The first pair `(Z, Z')` with `x` a summand of `Z ⊗ y ⊗ Z'`, ordered by
/// `Z` and then `Z'`.
pub fn find_two_sided_witness(
    x: &Descriptor,
    y: &Descriptor,
    ctx: &AlgebraContext,
    budget: &Budget,
) -> Result<Option<(Descriptor, Descriptor)>> {
    let candidates = budget.candidates(ctx);
    candidates
        .par_iter()
        .find_map_first(|z| {
            let middle = match symbolic_tensor(z, y, ctx) {
                Ok(m) => m,
                Err(e) => return Some(Err(e)),
            };
            for zr in &candidates {
                for w in middle.support() {
                    match symbolic_tensor(w, zr, ctx) {
                        Ok(m) if m.contains(x) => return Some(Ok((z.clone(), zr.clone()))),
                        Ok(_) => {}
                        Err(e) => return Some(Err(e)),
                    }
                }
            }
            None
        })
        .transpose()
}

/// Memoized reachable sets `{X : X ∈ Z ⋆ Y}` over a fixed budget.
pub struct ReachTable<'a> {
    ctx: &'a AlgebraContext,
    candidates: Vec<Descriptor>,
    left: BTreeMap<Descriptor, BTreeSet<Descriptor>>,
    right: BTreeMap<Descriptor, BTreeSet<Descriptor>>,
}

impl<'a> ReachTable<'a> {
    pub fn new(ctx: &'a AlgebraContext, budget: &Budget) -> Self {
        ReachTable {
            ctx,
            candidates: budget.candidates(ctx),
            left: BTreeMap::new(),
            right: BTreeMap::new(),
        }
    }

    fn reach(&self, y: &Descriptor, on_left: bool) -> Result<BTreeSet<Descriptor>> {
        let parts: Vec<Vec<Descriptor>> = self
            .candidates
            .par_iter()
            .map(|z| {
                let m = if on_left {
                    symbolic_tensor(z, y, self.ctx)?
                } else {
                    symbolic_tensor(y, z, self.ctx)?
                };
                Ok(m.support().cloned().collect())
            })
            .collect::<Result<_>>()?;
        Ok(parts.into_iter().flatten().collect())
    }

    /// Everything `>=_L y` within the budget.
    pub fn left_reach(&mut self, y: &Descriptor) -> Result<&BTreeSet<Descriptor>> {
        if !self.left.contains_key(y) {
            let r = self.reach(y, true)?;
            self.left.insert(y.clone(), r);
        }
        Ok(&self.left[y])
    }

    /// Everything `>=_R y` within the budget.
    pub fn right_reach(&mut self, y: &Descriptor) -> Result<&BTreeSet<Descriptor>> {
        if !self.right.contains_key(y) {
            let r = self.reach(y, false)?;
            self.right.insert(y.clone(), r);
        }
        Ok(&self.right[y])
    }

    /// Everything `>=_J y` within the budget.
    pub fn two_sided_reach(&mut self, y: &Descriptor) -> Result<BTreeSet<Descriptor>> {
        let middle: Vec<Descriptor> = self.left_reach(y)?.iter().cloned().collect();
        let mut out = BTreeSet::new();
        for w in &middle {
            out.extend(self.right_reach(w)?.iter().cloned());
        }
        Ok(out)
    }
}

/// Outcome of comparing the mutual-witness relation on a cell with a key.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionCheck {
    pub cell: TwoSidedCellId,
    pub side: Side,
    pub size: usize,
    pub classes: usize,
    /// Pairs where mutual reachability and key equality disagree.
    pub disagreements: Vec<(Descriptor, Descriptor)>,
}

impl PartitionCheck {
    pub fn ok(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Checks that `x` and `y` reach each other within `budget` exactly when
/// their cell keys on `side` agree, for all pairs in the cell.
pub fn check_partition(id: TwoSidedCellId, side: Side, ctx: &AlgebraContext, budget: &Budget) -> Result<PartitionCheck> {
    let cell = enumerate_cell(id, ctx)?;
    let mut table = ReachTable::new(ctx, budget);
    let mut reach = Vec::with_capacity(cell.len());
    for y in &cell {
        reach.push(match side {
            Side::Left => table.left_reach(y)?.clone(),
            Side::Right => table.right_reach(y)?.clone(),
        });
    }
    let same_key = |a: &Descriptor, b: &Descriptor| match side {
        Side::Left => left_cell_key(a) == left_cell_key(b),
        Side::Right => right_cell_key(a) == right_cell_key(b),
    };
    let mut disagreements = Vec::new();
    for (a, x) in cell.iter().enumerate() {
        for (b, y) in cell.iter().enumerate().skip(a + 1) {
            let mutual = reach[b].contains(x) && reach[a].contains(y);
            if mutual != same_key(x, y) {
                disagreements.push((x.clone(), y.clone()));
            }
        }
    }
    let classes = match side {
        Side::Left => cell.iter().map(left_cell_key).collect::<BTreeSet<_>>().len(),
        Side::Right => cell.iter().map(right_cell_key).collect::<BTreeSet<_>>().len(),
    };
    Ok(PartitionCheck {
        cell: id,
        side,
        size: cell.len(),
        classes,
        disagreements,
    })
}

/// One line of a cell-partition report.
#[derive(Debug, Clone, Serialize)]
pub struct CellRow {
    pub descriptor: Descriptor,
    pub two_sided: TwoSidedCellId,
    pub left: LeftCellKey,
    pub right: RightCellKey,
}

pub fn cell_row(d: &Descriptor) -> CellRow {
    CellRow {
        descriptor: d.clone(),
        two_sided: two_sided_cell(d),
        left: left_cell_key(d),
        right: right_cell_key(d),
    }
}

/// Rows for every member of the given finite cells.
pub fn partition_report(ids: &[TwoSidedCellId], ctx: &AlgebraContext) -> Result<Vec<CellRow>> {
    let mut rows = Vec::new();
    for &id in ids {
        rows.extend(enumerate_cell(id, ctx)?.iter().map(cell_row));
    }
    Ok(rows)
}
