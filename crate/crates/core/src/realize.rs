//! Explicit torus-quiver representations and the constructions that build
//! them from descriptors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraContext, TorusVertex};
use crate::descriptors::{
    BandDescriptor, Course, Descriptor, Kind, OneSided, Side, SplitDescriptor, StringDescriptor,
};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Q;

/// A representation of the torus quiver.
///
/// `vmaps[v]` is the left action of `α_i` out of `v = i|j`, landing in
/// `i+1|j`; `hmaps[v]` is the right action of `α_{j-1}` out of `v`,
/// landing in `i|j-1`. Both are indexed row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ConcreteBimodule {
    ctx: AlgebraContext,
    dims: Vec<usize>,
    vmaps: Vec<Matrix>,
    hmaps: Vec<Matrix>,
    labels: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub vertex: TorusVertex,
    pub relation: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {}", self.relation, self.vertex)
    }
}

impl ConcreteBimodule {
    /// All maps zero; `dims` is indexed row-major.
    pub fn zero(ctx: AlgebraContext, dims: Vec<usize>) -> ConcreteBimodule {
        assert_eq!(dims.len(), ctx.n() * ctx.n());
        let mut m = ConcreteBimodule {
            ctx,
            dims,
            vmaps: Vec::new(),
            hmaps: Vec::new(),
            labels: Vec::new(),
        };
        for v in ctx.vertices() {
            let d = m.dim_at(v);
            m.vmaps.push(Matrix::zeros(m.dim_at(m.down(v)), d));
            m.hmaps.push(Matrix::zeros(m.dim_at(m.left(v)), d));
            m.labels.push(vec![String::new(); d]);
        }
        m
    }

    pub fn ctx(&self) -> &AlgebraContext {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    /// Target of the vertical arrow out of `v`.
    pub fn down(&self, v: TorusVertex) -> TorusVertex {
        TorusVertex {
            i: self.ctx.succ(v.i),
            j: v.j,
        }
    }

    /// Target of the horizontal arrow out of `v`.
    pub fn left(&self, v: TorusVertex) -> TorusVertex {
        TorusVertex {
            i: v.i,
            j: self.ctx.pred(v.j),
        }
    }

    pub fn dim_at(&self, v: TorusVertex) -> usize {
        self.dims[self.ctx.index(v)]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Dimension grid as rows `i = 1..n`.
    pub fn grid(&self) -> Vec<Vec<usize>> {
        self.dims.chunks(self.n()).map(<[usize]>::to_vec).collect()
    }

    pub fn vmap(&self, v: TorusVertex) -> &Matrix {
        &self.vmaps[self.ctx.index(v)]
    }

    pub fn hmap(&self, v: TorusVertex) -> &Matrix {
        &self.hmaps[self.ctx.index(v)]
    }

    pub fn set_vmap(&mut self, v: TorusVertex, m: Matrix) {
        let want = (self.dim_at(self.down(v)), self.dim_at(v));
        assert_eq!((m.rows(), m.cols()), want, "vmap shape at {v}");
        let k = self.ctx.index(v);
        self.vmaps[k] = m;
    }

    pub fn set_hmap(&mut self, v: TorusVertex, m: Matrix) {
        let want = (self.dim_at(self.left(v)), self.dim_at(v));
        assert_eq!((m.rows(), m.cols()), want, "hmap shape at {v}");
        let k = self.ctx.index(v);
        self.hmaps[k] = m;
    }

    pub fn vmap_mut(&mut self, v: TorusVertex) -> &mut Matrix {
        let k = self.ctx.index(v);
        &mut self.vmaps[k]
    }

    pub fn hmap_mut(&mut self, v: TorusVertex) -> &mut Matrix {
        let k = self.ctx.index(v);
        &mut self.hmaps[k]
    }

    /// Basis labels at `v`; empty strings when none were recorded.
    pub fn labels(&self, v: TorusVertex) -> &[String] {
        &self.labels[self.ctx.index(v)]
    }

    pub fn set_labels(&mut self, v: TorusVertex, labels: Vec<String>) {
        assert_eq!(labels.len(), self.dim_at(v));
        let k = self.ctx.index(v);
        self.labels[k] = labels;
    }

    /// Checks the quiver relations, reporting the first failing vertex.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        for v in self.ctx.vertices() {
            let fail = |relation| Err(Violation { vertex: v, relation });
            if !self.vmap(self.down(v)).mul(self.vmap(v)).is_zero() {
                return fail("vertical composition is nonzero");
            }
            if !self.hmap(self.left(v)).mul(self.hmap(v)).is_zero() {
                return fail("horizontal composition is nonzero");
            }
            let dh = self.hmap(self.down(v)).mul(self.vmap(v));
            let hd = self.vmap(self.left(v)).mul(self.hmap(v));
            if dh != hd {
                return fail("square does not commute");
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &ConcreteBimodule) -> ConcreteBimodule {
        assert_eq!(self.n(), other.n());
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mut out = ConcreteBimodule::zero(self.ctx, dims);
        for v in self.ctx.vertices() {
            out.set_vmap(v, self.vmap(v).direct_sum(other.vmap(v)));
            out.set_hmap(v, self.hmap(v).direct_sum(other.hmap(v)));
            let mut l = self.labels(v).to_vec();
            l.extend_from_slice(other.labels(v));
            out.set_labels(v, l);
        }
        out
    }

    pub fn direct_sum_all<'a>(ctx: AlgebraContext, parts: impl IntoIterator<Item = &'a ConcreteBimodule>) -> ConcreteBimodule {
        let mut acc = ConcreteBimodule::zero(ctx, vec![0; ctx.n() * ctx.n()]);
        for p in parts {
            acc = acc.direct_sum(p);
        }
        acc
    }

    /// The submodule spanned at each vertex by the columns of `basis[v]`,
    /// which must be invariant under both actions.
    pub fn submodule(&self, basis: &[Matrix]) -> ConcreteBimodule {
        let dims = basis.iter().map(Matrix::cols).collect();
        let mut out = ConcreteBimodule::zero(self.ctx, dims);
        let inverses: Vec<Matrix> = basis
            .iter()
            .map(|b| b.left_inverse().expect("submodule basis must be independent"))
            .collect();
        for v in self.ctx.vertices() {
            let y = &basis[self.ctx.index(v)];
            let down = &inverses[self.ctx.index(self.down(v))];
            let left = &inverses[self.ctx.index(self.left(v))];
            out.set_vmap(v, down.mul(&self.vmap(v).mul(y)));
            out.set_hmap(v, left.mul(&self.hmap(v).mul(y)));
        }
        out
    }

    /// Reindexes so that the new space at `i|j` is the old one at `φ(i|j)`.
    fn reindex(&self, f: impl Fn(TorusVertex) -> TorusVertex) -> ConcreteBimodule {
        let dims = self.ctx.vertices().map(|v| self.dim_at(f(v))).collect();
        let mut out = ConcreteBimodule::zero(self.ctx, dims);
        for v in self.ctx.vertices() {
            out.set_vmap(v, self.vmap(f(v)).clone());
            out.set_hmap(v, self.hmap(f(v)).clone());
            out.set_labels(v, self.labels(f(v)).to_vec());
        }
        out
    }

    /// `^{θ^t}X` (left) or `X^{θ^t}` (right).
    pub fn twist_theta(&self, side: Side, t: i64) -> ConcreteBimodule {
        let ctx = self.ctx;
        match side {
            Side::Left => self.reindex(|v| ctx.vertex(v.i as i64 + t, v.j as i64)),
            Side::Right => self.reindex(|v| ctx.vertex(v.i as i64, v.j as i64 + t)),
        }
    }

    /// `^{η_μ}X` (left) or `X^{η_μ}` (right): the action of `α_1` is scaled
    /// by `μ`.
    pub fn twist_eta(&self, side: Side, mu: &Q) -> ConcreteBimodule {
        let mut out = self.clone();
        for v in self.ctx.vertices() {
            match side {
                Side::Left if v.i == 1 => *out.vmap_mut(v) = self.vmap(v).scale(mu),
                Side::Right if v.j == self.ctx.succ(1) => *out.hmap_mut(v) = self.hmap(v).scale(mu),
                _ => {}
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let grid = |maps: &[Matrix]| -> Vec<Vec<Vec<Vec<Q>>>> {
            maps.chunks(self.n())
                .map(|row| row.iter().map(Matrix::to_rows).collect())
                .collect()
        };
        serde_json::to_value(BimoduleJson {
            n: self.n(),
            dims: self.grid(),
            vmaps: grid(&self.vmaps),
            hmaps: grid(&self.hmaps),
        })
        .expect("bimodule serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<ConcreteBimodule> {
        let raw: BimoduleJson = serde_json::from_value(value.clone())?;
        let ctx = AlgebraContext::new(raw.n)?;
        let n = raw.n;
        let square = |len: usize, what: &str| {
            if len == n {
                Ok(())
            } else {
                Err(Error::InvalidModule(format!("{what} must have {n} rows")))
            }
        };
        square(raw.dims.len(), "dims")?;
        square(raw.vmaps.len(), "vmaps")?;
        square(raw.hmaps.len(), "hmaps")?;
        for row in raw.dims.iter().map(Vec::len).chain(raw.vmaps.iter().map(Vec::len)).chain(raw.hmaps.iter().map(Vec::len)) {
            square(row, "every grid row")?;
        }
        let dims = raw.dims.concat();
        let mut out = ConcreteBimodule::zero(ctx, dims);
        for v in ctx.vertices() {
            let (i, j) = (v.i - 1, v.j - 1);
            let vm = to_matrix(&raw.vmaps[i][j], out.dim_at(out.down(v)), out.dim_at(v), "vmap", v)?;
            let hm = to_matrix(&raw.hmaps[i][j], out.dim_at(out.left(v)), out.dim_at(v), "hmap", v)?;
            out.set_vmap(v, vm);
            out.set_hmap(v, hm);
        }
        out.validate().map_err(|e| Error::InvalidModule(e.to_string()))?;
        Ok(out)
    }
}

fn to_matrix(rows: &[Vec<Q>], r: usize, c: usize, what: &str, v: TorusVertex) -> Result<Matrix> {
    // an empty row list stands for any r × 0 or 0 × c matrix
    if r == 0 || c == 0 {
        if rows.iter().all(Vec::is_empty) && (rows.len() == r || rows.is_empty()) {
            return Ok(Matrix::zeros(r, c));
        }
    }
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::InvalidModule(format!("{what} at {v} must be {r}x{c}")));
    }
    Ok(Matrix::from_rows(rows.to_vec()))
}

#[derive(Serialize, Deserialize)]
struct BimoduleJson {
    n: usize,
    dims: Vec<Vec<usize>>,
    vmaps: Vec<Vec<Vec<Vec<Q>>>>,
    hmaps: Vec<Vec<Vec<Vec<Q>>>>,
}

impl fmt::Debug for ConcreteBimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConcreteBimodule")
            .field("n", &self.n())
            .field("dims", &self.grid())
            .finish()
    }
}

pub fn realize(d: &Descriptor, ctx: &AlgebraContext) -> ConcreteBimodule {
    match d {
        Descriptor::String(s) => realize_string(s, ctx),
        Descriptor::Split(s) => realize_split(s, ctx),
        Descriptor::Band(b) => realize_band(b, ctx),
    }
}

/// Pushdown of the walk representation; basis vectors at each torus vertex
/// appear in walk order and are labelled by their covering vertex.
pub fn realize_string(s: &StringDescriptor, ctx: &AlgebraContext) -> ConcreteBimodule {
    let walk = s.walk();
    let mut dims = vec![0; ctx.n() * ctx.n()];
    let mut slot = Vec::with_capacity(walk.len());
    for w in &walk {
        let k = ctx.index(ctx.project(*w));
        slot.push(dims[k]);
        dims[k] += 1;
    }
    let mut out = ConcreteBimodule::zero(*ctx, dims);
    let mut labels: Vec<Vec<String>> = ctx.vertices().map(|v| vec![String::new(); out.dim_at(v)]).collect();
    for (t, w) in walk.iter().enumerate() {
        labels[ctx.index(ctx.project(*w))][slot[t]] = format!("x_{{{}|{}}}", w.p, w.q);
    }
    let mut course = s.course();
    for t in 0..walk.len() - 1 {
        let (a, b) = (walk[t], walk[t + 1]);
        match course {
            Course::Right => out.hmap_mut(ctx.project(b))[(slot[t], slot[t + 1])] = Q::one(),
            Course::Down => out.vmap_mut(ctx.project(a))[(slot[t + 1], slot[t])] = Q::one(),
        }
        course = course.flip();
    }
    for (v, l) in ctx.vertices().zip(labels) {
        out.set_labels(v, l);
    }
    out
}

/// A one-sided module as a representation of the cyclic quiver: spaces per
/// vertex and the action of the arrow out of each vertex (`i → i+1` on the
/// left, `j → j-1` on the right).
pub fn realize_one_sided(m: &OneSided, ctx: &AlgebraContext) -> (Vec<usize>, Vec<Matrix>) {
    let dims: Vec<usize> = (1..=ctx.n()).map(|v| m.dim_at(ctx, v)).collect();
    let target = |v: usize| match m.side {
        Side::Left => ctx.succ(v),
        Side::Right => ctx.pred(v),
    };
    let mut maps: Vec<Matrix> = (1..=ctx.n())
        .map(|v| Matrix::zeros(dims[target(v) - 1], dims[v - 1]))
        .collect();
    if m.kind == Kind::Projective {
        // top is basis vector 0 at its vertex; for n = 1 the bottom is vector 1
        let bottom = usize::from(ctx.n() == 1);
        maps[m.vertex - 1][(bottom, 0)] = Q::one();
    }
    (dims, maps)
}

pub fn realize_split(s: &SplitDescriptor, ctx: &AlgebraContext) -> ConcreteBimodule {
    let (ld, lmaps) = realize_one_sided(&s.left, ctx);
    let (rd, rmaps) = realize_one_sided(&s.right, ctx);
    let dims = ctx.vertices().map(|v| ld[v.i - 1] * rd[v.j - 1]).collect();
    let mut out = ConcreteBimodule::zero(*ctx, dims);
    for v in ctx.vertices() {
        out.set_vmap(v, lmaps[v.i - 1].kron(&Matrix::identity(rd[v.j - 1])));
        out.set_hmap(v, Matrix::identity(ld[v.i - 1]).kron(&rmaps[v.j - 1]));
    }
    out
}

pub fn realize_band(b: &BandDescriptor, ctx: &AlgebraContext) -> ConcreteBimodule {
    let n = ctx.n();
    let m = b.m;
    let jordan = Matrix::jordan(m, &b.lambda);
    if n == 1 {
        let mut out = ConcreteBimodule::zero(*ctx, vec![2 * m]);
        let v = ctx.vertex(1, 1);
        let lower = |blk: &Matrix| {
            let mut x = Matrix::zeros(2 * m, 2 * m);
            for (r, c, e) in blk.nonzero_entries() {
                x[(m + r, c)] = e.clone();
            }
            x
        };
        out.set_vmap(v, lower(&Matrix::identity(m)));
        out.set_hmap(v, lower(&jordan));
        return out;
    }
    let mut dims = vec![0; n * n];
    for i in 1..=n as i64 {
        dims[ctx.index(ctx.vertex(i, i))] = m;
        dims[ctx.index(ctx.vertex(i + 1, i))] = m;
    }
    let mut base = ConcreteBimodule::zero(*ctx, dims);
    for i in 1..=n as i64 {
        let peak = ctx.vertex(i, i);
        base.set_vmap(peak, Matrix::identity(m));
        let h = if peak.i == 2 { jordan.clone() } else { Matrix::identity(m) };
        base.set_hmap(peak, h);
    }
    base.twist_theta(Side::Right, b.k as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::universe;

    fn ctx(n: usize) -> AlgebraContext {
        AlgebraContext::new(n).unwrap()
    }

    fn parse(s: &str, c: &AlgebraContext) -> ConcreteBimodule {
        realize(&Descriptor::parse(s, c).unwrap(), c)
    }

    #[test]
    fn walk_from_one_two() {
        let c = ctx(4);
        // N(1|2,1) is the length-3 walk 1|2, 1|3, 2|3, 2|4
        let x = parse("N(1|2,1)", &c);
        let support: Vec<String> = c.vertices().filter(|v| x.dim_at(*v) > 0).map(|v| v.to_string()).collect();
        assert_eq!(support, ["1|2", "1|3", "2|3", "2|4"]);
        assert!(x.hmap(c.vertex(1, 3)).is_identity());
        assert!(x.vmap(c.vertex(1, 3)).is_identity());
        assert!(x.hmap(c.vertex(2, 4)).is_identity());
    }

    #[test]
    fn short_m_string() {
        let c = ctx(3);
        let x = parse("M(1|1,0)", &c);
        assert_eq!(x.grid(), vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 0]]);
    }

    #[test]
    fn single_vertex_strings() {
        let c = ctx(1);
        let x = parse("W(1|1,2)", &c);
        assert_eq!(x.dims(), &[5]);
        assert!(x.validate().is_ok());
    }

    #[test]
    fn regular_bimodule() {
        let c = ctx(3);
        let a = parse("B(1,1,1)", &c);
        assert_eq!(a.grid(), vec![vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(a.total_dim(), c.dim());
    }

    #[test]
    fn jordan_arrow_placement() {
        let c = ctx(2);
        let b = parse("B(1,2,3)", &c);
        assert_eq!(b.hmap(c.vertex(2, 2)), &Matrix::jordan(2, &Q::from_int(3)));
        assert!(b.hmap(c.vertex(1, 1)).is_identity());
        let b2 = parse("B(2,1,1)", &c);
        assert_eq!(b2.grid(), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(b2.dim_at(c.vertex(1, 2)), 1);
    }

    #[test]
    fn dual_number_projective() {
        let c = ctx(1);
        let p = parse("P(1|1)", &c);
        let v = c.vertex(1, 1);
        // left action on the first tensor factor, right action on the second
        let phi = Matrix::from_i64(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let psi = Matrix::from_i64(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(p.vmap(v), &phi);
        assert_eq!(p.hmap(v), &psi);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn split_shapes() {
        let c = ctx(3);
        let l = parse("L(1|2)", &c);
        assert_eq!(l.total_dim(), 1);
        assert_eq!(l.dim_at(c.vertex(1, 2)), 1);
        let s0 = parse("S0(1|2)", &c);
        assert_eq!(s0.dim_at(c.vertex(1, 1)), 1);
        assert!(s0.hmap(c.vertex(1, 2)).is_identity());
        let p = parse("P(1|2)", &c);
        for v in [(1, 2), (1, 1), (2, 2), (2, 1)] {
            assert_eq!(p.dim_at(c.vertex(v.0, v.1)), 1);
        }
        assert!(p.vmap(c.vertex(1, 2)).is_identity());
        assert!(p.hmap(c.vertex(2, 2)).is_identity());
    }

    #[test]
    fn violation_is_reported() {
        let c = ctx(1);
        let mut x = ConcreteBimodule::zero(c, vec![2]);
        x.set_vmap(c.vertex(1, 1), Matrix::from_i64(&[&[0, 1], &[1, 0]]));
        let e = x.validate().unwrap_err();
        assert_eq!(e.vertex, c.vertex(1, 1));
        assert_eq!(e.relation, "vertical composition is nonzero");
    }

    #[test]
    fn everything_valid_with_right_dimension() {
        for n in 1..=3 {
            let c = ctx(n);
            for d in universe(&c, 3, 3, &[Q::one(), Q::from_int(-1), Q::new(1, 2)]) {
                let x = realize(&d, &c);
                assert!(x.validate().is_ok(), "{d}");
                assert_eq!(x.total_dim(), d.dimension(&c), "{d}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let c = ctx(2);
        let x = parse("B(2,2,-1/2)", &c);
        let back = ConcreteBimodule::from_json(&x.to_json()).unwrap();
        assert_eq!(back.grid(), x.grid());
        for v in c.vertices() {
            assert_eq!(back.vmap(v), x.vmap(v));
            assert_eq!(back.hmap(v), x.hmap(v));
        }
        let mut bad = x.to_json();
        bad["vmaps"][0][0] = serde_json::json!([["1", "0"], ["0", "1"], ["0", "0"]]);
        assert!(ConcreteBimodule::from_json(&bad).is_err());
    }
}
