//! The algebra `A = Q_n`, its torus quiver and the covering quiver.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgebraContext {
    n: usize,
}

impl AlgebraContext {
    pub fn new(n: usize) -> Result<AlgebraContext> {
        if n == 0 {
            return Err(Error::domain("n must be positive"));
        }
        Ok(AlgebraContext { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical representative of `v` in `1..=n`.
    pub fn residue(&self, v: i64) -> usize {
        (v - 1).rem_euclid(self.n as i64) as usize + 1
    }

    pub fn succ(&self, i: usize) -> usize {
        self.residue(i as i64 + 1)
    }

    pub fn pred(&self, i: usize) -> usize {
        self.residue(i as i64 - 1)
    }

    pub fn vertex(&self, i: i64, j: i64) -> TorusVertex {
        TorusVertex {
            i: self.residue(i),
            j: self.residue(j),
        }
    }

    /// All torus vertices in row-major order.
    pub fn vertices(&self) -> impl Iterator<Item = TorusVertex> {
        let n = self.n;
        (1..=n).flat_map(move |i| (1..=n).map(move |j| TorusVertex { i, j }))
    }

    /// Row-major position of `v` in a dense `n × n` grid.
    pub fn index(&self, v: TorusVertex) -> usize {
        (v.i - 1) * self.n + (v.j - 1)
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn basis(&self) -> Vec<BasisElement> {
        (1..=self.n)
            .map(BasisElement::Idempotent)
            .chain((1..=self.n).map(BasisElement::Arrow))
            .collect()
    }

    fn basis_index(&self, b: BasisElement) -> usize {
        match b {
            BasisElement::Idempotent(i) => i - 1,
            BasisElement::Arrow(i) => self.n + i - 1,
        }
    }

    pub fn source(&self, b: BasisElement) -> usize {
        match b {
            BasisElement::Idempotent(i) | BasisElement::Arrow(i) => i,
        }
    }

    pub fn target(&self, b: BasisElement) -> usize {
        match b {
            BasisElement::Idempotent(i) => i,
            BasisElement::Arrow(i) => self.succ(i),
        }
    }

    pub fn element(&self, b: BasisElement) -> AlgebraElement {
        let mut coeffs = vec![Q::zero(); self.dim()];
        coeffs[self.basis_index(b)] = Q::one();
        AlgebraElement { coeffs }
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            coeffs: vec![Q::zero(); self.dim()],
        }
    }

    /// `Σ ε_i`.
    pub fn one(&self) -> AlgebraElement {
        let mut e = self.zero();
        for i in 1..=self.n {
            e.coeffs[i - 1] = Q::one();
        }
        e
    }

    /// Product `ab` of basis elements: `b` is applied first.
    pub fn multiply(&self, a: BasisElement, b: BasisElement) -> AlgebraElement {
        use BasisElement::*;
        let prod = match (a, b) {
            (Arrow(_), Arrow(_)) => None,
            (Idempotent(i), Idempotent(j)) => (i == j).then_some(a),
            (Arrow(i), Idempotent(j)) => (i == j).then_some(a),
            (Idempotent(i), Arrow(j)) => (i == self.succ(j)).then_some(b),
        };
        prod.map_or_else(|| self.zero(), |p| self.element(p))
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let basis = self.basis();
        let mut out = self.zero();
        for (a, ca) in basis.iter().zip(&x.coeffs) {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in basis.iter().zip(&y.coeffs) {
                if cb.is_zero() {
                    continue;
                }
                let p = self.multiply(*a, *b);
                let c = ca * cb;
                for (o, v) in out.coeffs.iter_mut().zip(&p.coeffs) {
                    if !v.is_zero() {
                        *o += &(&c * v);
                    }
                }
            }
        }
        out
    }

    pub fn project(&self, v: CoveringVertex) -> TorusVertex {
        self.vertex(v.p, v.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisElement {
    Idempotent(usize),
    /// `α_i`, the arrow `i → i+1`.
    Arrow(usize),
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::Idempotent(i) => write!(f, "e{i}"),
            BasisElement::Arrow(i) => write!(f, "a{i}"),
        }
    }
}

/// Coefficients over the basis `ε_1..ε_n, α_1..α_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    pub coeffs: Vec<Q>,
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Q::is_zero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusVertex {
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for TorusVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.i, self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoveringVertex {
    pub p: i64,
    pub q: i64,
}

impl CoveringVertex {
    pub fn new(p: i64, q: i64) -> CoveringVertex {
        CoveringVertex { p, q }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        let a = AlgebraContext::new(3).unwrap();
        use BasisElement::*;
        assert_eq!(a.multiply(Idempotent(1), Idempotent(1)), a.element(Idempotent(1)));
        assert!(a.multiply(Arrow(2), Arrow(1)).is_zero());
        assert_eq!(a.multiply(Arrow(1), Idempotent(1)), a.element(Arrow(1)));
        assert_eq!(a.multiply(Idempotent(2), Arrow(1)), a.element(Arrow(1)));
        assert!(a.multiply(Idempotent(1), Arrow(1)).is_zero());
        let d = AlgebraContext::new(1).unwrap();
        assert!(d.multiply(Arrow(1), Arrow(1)).is_zero());
        assert_eq!(d.multiply(Idempotent(1), Arrow(1)), d.element(Arrow(1)));
    }

    #[test]
    fn projection() {
        let c2 = AlgebraContext::new(2).unwrap();
        assert_eq!(c2.project(CoveringVertex::new(3, 4)), TorusVertex { i: 1, j: 2 });
        let c1 = AlgebraContext::new(1).unwrap();
        assert_eq!(c1.project(CoveringVertex::new(7, -2)), TorusVertex { i: 1, j: 1 });
        let c3 = AlgebraContext::new(3).unwrap();
        assert_eq!(c3.project(CoveringVertex::new(1, 1)), TorusVertex { i: 1, j: 1 });
        assert_eq!(c3.residue(0), 3);
        assert_eq!(c3.residue(-3), 3);
    }

    #[test]
    fn associative_with_unit() {
        for n in 1..=5 {
            let ctx = AlgebraContext::new(n).unwrap();
            let basis = ctx.basis();
            assert_eq!(basis.len(), 2 * n);
            for &a in &basis {
                let ea = ctx.element(a);
                assert_eq!(ctx.mul(&ctx.one(), &ea), ea);
                assert_eq!(ctx.mul(&ea, &ctx.one()), ea);
                for &b in &basis {
                    for &c in &basis {
                        let left = ctx.mul(&ctx.multiply(a, b), &ctx.element(c));
                        let right = ctx.mul(&ea, &ctx.multiply(b, c));
                        assert_eq!(left, right, "n={n} ({a},{b},{c})");
                    }
                }
            }
        }
    }
}
