//! Brute-force tensor products and homomorphism spaces.
//!
//! Nothing here knows about strings or bands: `X ⊗_A Y` is computed as the
//! quotient of `⊕_s X_{i|s} ⊗ Y_{s|j}` by the relations `xa ⊗ y = x ⊗ ay`.

use crate::algebra::TorusVertex;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Matrix, SparseRow};
use crate::rational::Q;
use crate::realize::ConcreteBimodule;

pub const DEFAULT_CAP: usize = 5000;

/// Dimension of the unreduced space `⊕_{i,j,s} X_{i|s} ⊗ Y_{s|j}`.
pub fn oracle_dimension(x: &ConcreteBimodule, y: &ConcreteBimodule) -> usize {
    let ctx = x.ctx();
    let mut total = 0;
    for v in ctx.vertices() {
        for s in 1..=ctx.n() {
            total += x.dim_at(TorusVertex { i: v.i, j: s }) * y.dim_at(TorusVertex { i: s, j: v.j });
        }
    }
    total
}

/// `X ⊗_A Y`, refusing inputs whose unreduced space exceeds `cap`.
pub fn tensor_capped(x: &ConcreteBimodule, y: &ConcreteBimodule, cap: usize) -> Result<ConcreteBimodule> {
    let dim = oracle_dimension(x, y);
    if dim > cap {
        return Err(Error::CapExceeded { dim, cap });
    }
    tensor(x, y)
}

struct Layout {
    // offsets[s-1] = start of the block X_{i|s} ⊗ Y_{s|j}
    offsets: Vec<usize>,
    len: usize,
}

impl Layout {
    fn coord(&self, s: usize, a: usize, b: usize, dy: usize) -> usize {
        self.offsets[s - 1] + a * dy + b
    }
}

struct Quotient {
    // image of every big-space coordinate in the quotient basis
    q: Vec<SparseRow>,
    // big-space coordinate chosen for each quotient basis vector
    section: Vec<usize>,
}

pub fn tensor(x: &ConcreteBimodule, y: &ConcreteBimodule) -> Result<ConcreteBimodule> {
    if x.n() != y.n() {
        return Err(Error::NMismatch(x.n(), y.n()));
    }
    let ctx = *x.ctx();
    let n = ctx.n();
    let at = |i: usize, j: usize| TorusVertex { i, j };

    let layouts: Vec<Layout> = ctx
        .vertices()
        .map(|v| {
            let mut offsets = Vec::with_capacity(n);
            let mut len = 0;
            for s in 1..=n {
                offsets.push(len);
                len += x.dim_at(at(v.i, s)) * y.dim_at(at(s, v.j));
            }
            Layout { offsets, len }
        })
        .collect();

    let quotients: Vec<Quotient> = ctx
        .vertices()
        .map(|v| {
            let lay = &layouts[ctx.index(v)];
            let mut e = Echelon::new(lay.len);
            for t in 1..=n {
                let t1 = ctx.succ(t);
                let xi = at(v.i, t1);
                let eta = at(t, v.j);
                let hx = x.hmap(xi);
                let vy = y.vmap(eta);
                let (dy_t, dy_t1) = (y.dim_at(eta), y.dim_at(at(t1, v.j)));
                for a in 0..x.dim_at(xi) {
                    for b in 0..dy_t {
                        let mut row: SparseRow = Vec::new();
                        for r in 0..hx.rows() {
                            let c = &hx[(r, a)];
                            if !c.is_zero() {
                                row.push((lay.coord(t, r, b, dy_t), c.clone()));
                            }
                        }
                        for r in 0..vy.rows() {
                            let c = &vy[(r, b)];
                            if !c.is_zero() {
                                row.push((lay.coord(t1, a, r, dy_t1), -c));
                            }
                        }
                        if !row.is_empty() {
                            e.push(row);
                        }
                    }
                }
            }
            let rref = e.finish();
            Quotient {
                q: rref.quotient_map(),
                section: rref.free.clone(),
            }
        })
        .collect();

    let dims = quotients.iter().map(|q| q.section.len()).collect();
    let mut out = ConcreteBimodule::zero(ctx, dims);

    // position of a big-space coordinate: (s, a, b)
    let decode = |v: TorusVertex, coord: usize| {
        let lay = &layouts[ctx.index(v)];
        let s = (1..=n).rev().find(|&s| lay.offsets[s - 1] <= coord && x.dim_at(at(v.i, s)) * y.dim_at(at(s, v.j)) > 0);
        let s = s.expect("coordinate inside some block");
        let local = coord - lay.offsets[s - 1];
        let dy = y.dim_at(at(s, v.j));
        (s, local / dy, local % dy)
    };

    for v in ctx.vertices() {
        let src = &quotients[ctx.index(v)];
        let down = out.down(v);
        let left = out.left(v);
        let (qd, ld) = (&quotients[ctx.index(down)], &layouts[ctx.index(down)]);
        let (ql, ll) = (&quotients[ctx.index(left)], &layouts[ctx.index(left)]);
        let mut vm = Matrix::zeros(qd.section.len(), src.section.len());
        let mut hm = Matrix::zeros(ql.section.len(), src.section.len());
        for (k, &coord) in src.section.iter().enumerate() {
            let (s, a, b) = decode(v, coord);
            // left action on the X factor
            let vx = x.vmap(at(v.i, s));
            let dy = y.dim_at(at(s, v.j));
            for r in 0..vx.rows() {
                let c = &vx[(r, a)];
                if c.is_zero() {
                    continue;
                }
                for (col, val) in &qd.q[ld.coord(s, r, b, dy)] {
                    vm[(*col, k)] += &(c * val);
                }
            }
            // right action on the Y factor
            let hy = y.hmap(at(s, v.j));
            let dyl = y.dim_at(at(s, left.j));
            for r in 0..hy.rows() {
                let c = &hy[(r, b)];
                if c.is_zero() {
                    continue;
                }
                for (col, val) in &ql.q[ll.coord(s, a, r, dyl)] {
                    hm[(*col, k)] += &(c * val);
                }
            }
        }
        out.set_vmap(v, vm);
        out.set_hmap(v, hm);
    }
    Ok(out)
}

/// A bimodule homomorphism, one matrix per torus vertex (row-major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom {
    pub maps: Vec<Matrix>,
}

impl Hom {
    pub fn identity(x: &ConcreteBimodule) -> Hom {
        Hom {
            maps: x.ctx().vertices().map(|v| Matrix::identity(x.dim_at(v))).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Hom) -> Hom {
        Hom {
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn add(&self, other: &Hom) -> Hom {
        Hom {
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Hom {
        Hom {
            maps: self.maps.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.maps.iter().all(Matrix::is_invertible)
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }

    /// Sum of the per-vertex traces (square components only).
    pub fn trace(&self) -> Q {
        let mut t = Q::zero();
        for m in &self.maps {
            t += &m.trace();
        }
        t
    }

    pub fn is_nilpotent(&self) -> bool {
        self.maps.iter().all(|m| {
            let (_, im) = m.fitting_split();
            im.cols() == 0
        })
    }
}

/// Basis of `Hom(X, Y)` as bimodules.
pub fn hom_space(x: &ConcreteBimodule, y: &ConcreteBimodule) -> Result<Vec<Hom>> {
    if x.n() != y.n() {
        return Err(Error::NMismatch(x.n(), y.n()));
    }
    let ctx = *x.ctx();
    let mut offsets = Vec::new();
    let mut total = 0;
    for v in ctx.vertices() {
        offsets.push(total);
        total += x.dim_at(v) * y.dim_at(v);
    }
    let var = |v: TorusVertex, r: usize, c: usize| offsets[ctx.index(v)] + r * x.dim_at(v) + c;

    let mut e = Echelon::new(total);
    for v in ctx.vertices() {
        for (target, ax, ay) in [
            (x.down(v), x.vmap(v), y.vmap(v)),
            (x.left(v), x.hmap(v), y.hmap(v)),
        ] {
            // f_target · ax − ay · f_v = 0, entrywise
            let ax_cols: Vec<Vec<(usize, &Q)>> = (0..ax.cols())
                .map(|c| (0..ax.rows()).filter(|&k| !ax[(k, c)].is_zero()).map(|k| (k, &ax[(k, c)])).collect())
                .collect();
            let ay_rows: Vec<Vec<(usize, &Q)>> = (0..ay.rows())
                .map(|r| (0..ay.cols()).filter(|&k| !ay[(r, k)].is_zero()).map(|k| (k, &ay[(r, k)])).collect())
                .collect();
            for r in 0..y.dim_at(target) {
                for c in 0..x.dim_at(v) {
                    let mut row: SparseRow = Vec::new();
                    for &(k, a) in &ax_cols[c] {
                        row.push((var(target, r, k), a.clone()));
                    }
                    for &(k, a) in &ay_rows[r] {
                        row.push((var(v, k, c), -a));
                    }
                    if !row.is_empty() {
                        e.push(row);
                    }
                }
            }
        }
    }
    let null = e.finish().nullspace();
    Ok(null
        .into_iter()
        .map(|vec| Hom {
            maps: ctx
                .vertices()
                .map(|v| {
                    let (r, c) = (y.dim_at(v), x.dim_at(v));
                    let mut m = Matrix::zeros(r, c);
                    for a in 0..r {
                        for b in 0..c {
                            m[(a, b)] = vec[var(v, a, b)].clone();
                        }
                    }
                    m
                })
                .collect(),
        })
        .collect())
}
