//! Krull–Schmidt decomposition of concrete bimodules and identification of
//! the indecomposable summands.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::algebra::{AlgebraContext, TorusVertex};
use crate::descriptors::{BandDescriptor, DecompositionMultiset, Descriptor, SplitDescriptor, StringType};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Q;
use crate::realize::{realize, ConcreteBimodule};
use crate::tensor_oracle::{hom_space, Hom};

const RANDOM_TRIES: usize = 64;

/// How a summand was shown to be indecomposable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// The endomorphism ring is one-dimensional.
    Scalar,
    /// The trace form `(f, g) ↦ tr(fg)` on the endomorphism ring has rank
    /// one, so `End / rad End` is the ground field.
    TraceRankOne,
    /// No split was found within the search budget.
    UnidentifiedPossiblyDecomposable,
}

impl Certificate {
    pub fn is_certified(self) -> bool {
        self != Certificate::UnidentifiedPossiblyDecomposable
    }
}

#[derive(Debug, Clone)]
pub struct Summand {
    pub module: ConcreteBimodule,
    pub certificate: Certificate,
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_combination(basis: &[Hom], rng: &mut ChaCha8Rng) -> Hom {
    let mut acc = basis[0].scale(&Q::zero());
    for b in basis {
        let c = Q::from_int(rng.gen_range(-5..=5));
        if !c.is_zero() {
            acc = acc.add(&b.scale(&c));
        }
    }
    acc
}

/// Splits `x` into pieces whose bases are disjoint sets of coordinates
/// not linked by any nonzero matrix entry.
fn coordinate_components(x: &ConcreteBimodule) -> Vec<ConcreteBimodule> {
    let ctx = *x.ctx();
    let mut offsets = Vec::new();
    let mut total = 0;
    for v in ctx.vertices() {
        offsets.push(total);
        total += x.dim_at(v);
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], a: usize) -> usize {
        let mut r = a;
        while p[r] != r {
            r = p[r];
        }
        let mut a = a;
        while p[a] != r {
            let next = p[a];
            p[a] = r;
            a = next;
        }
        r
    }
    for v in ctx.vertices() {
        let src = offsets[ctx.index(v)];
        for (target, m) in [(x.down(v), x.vmap(v)), (x.left(v), x.hmap(v))] {
            let dst = offsets[ctx.index(target)];
            for (r, c, _) in m.nonzero_entries() {
                let (a, b) = (find(&mut parent, src + c), find(&mut parent, dst + r));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut roots: Vec<usize> = (0..total).map(|a| find(&mut parent, a)).collect();
    let mut order: Vec<usize> = roots.clone();
    order.sort_unstable();
    order.dedup();
    if order.len() <= 1 {
        return vec![x.clone()];
    }
    for r in roots.iter_mut() {
        *r = order.binary_search(r).expect("root present");
    }
    order
        .iter()
        .enumerate()
        .map(|(k, _)| {
            let basis: Vec<Matrix> = ctx
                .vertices()
                .map(|v| {
                    let off = offsets[ctx.index(v)];
                    let cols: Vec<usize> = (0..x.dim_at(v)).filter(|&c| roots[off + c] == k).collect();
                    let mut b = Matrix::zeros(x.dim_at(v), cols.len());
                    for (j, &c) in cols.iter().enumerate() {
                        b[(c, j)] = Q::one();
                    }
                    b
                })
                .collect();
            x.submodule(&basis)
        })
        .collect()
}

/// Splits `x` along the Fitting decomposition of `f` if that is nontrivial.
fn fitting_pieces(x: &ConcreteBimodule, f: &Hom) -> Option<(ConcreteBimodule, ConcreteBimodule)> {
    let parts: Vec<(Matrix, Matrix)> = f.maps.iter().map(Matrix::fitting_split).collect();
    let kernel: usize = parts.iter().map(|p| p.0.cols()).sum();
    if kernel == 0 || kernel == x.total_dim() {
        return None;
    }
    let (ker, im): (Vec<Matrix>, Vec<Matrix>) = parts.into_iter().unzip();
    Some((x.submodule(&ker), x.submodule(&im)))
}

fn trace_form_rank(basis: &[Hom]) -> usize {
    let d = basis.len();
    let mut gram = Matrix::zeros(d, d);
    for a in 0..d {
        for b in a..d {
            let t = basis[a].compose(&basis[b]).trace();
            gram[(b, a)] = t.clone();
            gram[(a, b)] = t;
        }
    }
    gram.rank()
}

fn split_piece(x: ConcreteBimodule, rng: &mut ChaCha8Rng, out: &mut Vec<Summand>) {
    if x.total_dim() == 0 {
        return;
    }
    let end = hom_space(&x, &x).expect("same algebra");
    if end.len() == 1 {
        out.push(Summand {
            module: x,
            certificate: Certificate::Scalar,
        });
        return;
    }
    let recurse = |a: ConcreteBimodule, b: ConcreteBimodule, rng: &mut ChaCha8Rng, out: &mut Vec<Summand>| {
        for piece in [a, b] {
            for c in coordinate_components(&piece) {
                split_piece(c, rng, out);
            }
        }
    };
    for f in &end {
        if let Some((a, b)) = fitting_pieces(&x, f) {
            return recurse(a, b, rng, out);
        }
    }
    if trace_form_rank(&end) == 1 {
        out.push(Summand {
            module: x,
            certificate: Certificate::TraceRankOne,
        });
        return;
    }
    for a in 0..end.len() {
        for b in a + 1..end.len() {
            for f in [end[a].add(&end[b]), end[a].compose(&end[b])] {
                if let Some((p, q)) = fitting_pieces(&x, &f) {
                    return recurse(p, q, rng, out);
                }
            }
        }
    }
    for _ in 0..RANDOM_TRIES {
        let f = random_combination(&end, rng);
        if let Some((p, q)) = fitting_pieces(&x, &f) {
            return recurse(p, q, rng, out);
        }
    }
    out.push(Summand {
        module: x,
        certificate: Certificate::UnidentifiedPossiblyDecomposable,
    });
}

/// Decomposes `x` into summands with local endomorphism rings.
pub fn split_indecomposables(x: &ConcreteBimodule, seed: u64) -> Vec<Summand> {
    let mut rng = rng_for(seed);
    let mut out = Vec::new();
    for c in coordinate_components(x) {
        split_piece(c, &mut rng, &mut out);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoResult {
    Yes,
    No,
    Undecided,
}

impl IsoResult {
    pub fn is_yes(self) -> bool {
        self == IsoResult::Yes
    }
}

fn find_invertible(h: &[Hom], rng: &mut ChaCha8Rng) -> bool {
    if h.iter().any(Hom::is_invertible) {
        return true;
    }
    for _ in 0..16 {
        if random_combination(h, rng).is_invertible() {
            return true;
        }
    }
    (0..h.len()).any(|a| (a + 1..h.len()).any(|b| h[a].add(&h[b]).is_invertible()))
}

/// Complete test for two modules with local endomorphism rings: they are
/// isomorphic iff some `g ∘ f` with `f: x → y`, `g: y → x` is not nilpotent.
pub fn isomorphic_local(x: &ConcreteBimodule, y: &ConcreteBimodule) -> bool {
    if x.dims() != y.dims() {
        return false;
    }
    if x.total_dim() == 0 {
        return true;
    }
    let fs = hom_space(x, y).expect("same algebra");
    if fs.is_empty() {
        return false;
    }
    if fs.iter().any(Hom::is_invertible) {
        return true;
    }
    let gs = hom_space(y, x).expect("same algebra");
    fs.iter().any(|f| gs.iter().any(|g| !g.compose(f).is_nilpotent()))
}

/// Three-valued isomorphism test.
pub fn isomorphic(x: &ConcreteBimodule, y: &ConcreteBimodule, seed: u64) -> IsoResult {
    if x.n() != y.n() || x.dims() != y.dims() {
        return IsoResult::No;
    }
    if x.total_dim() == 0 {
        return IsoResult::Yes;
    }
    let mut rng = rng_for(seed);
    let xy = hom_space(x, y).expect("same algebra");
    if xy.is_empty() {
        return IsoResult::No;
    }
    if find_invertible(&xy, &mut rng) {
        return IsoResult::Yes;
    }
    let yx = hom_space(y, x).expect("same algebra");
    let ex = hom_space(x, x).expect("same algebra");
    let ey = hom_space(y, y).expect("same algebra");
    if !(xy.len() == yx.len() && yx.len() == ex.len() && ex.len() == ey.len()) {
        return IsoResult::No;
    }
    // Krull–Schmidt: compare certified summands pairwise
    let sx = split_indecomposables(x, seed);
    let sy = split_indecomposables(y, seed);
    if sx.iter().chain(&sy).all(|s| s.certificate.is_certified()) {
        let mut used = vec![false; sy.len()];
        for a in &sx {
            let hit = sy
                .iter()
                .enumerate()
                .find(|(k, b)| !used[*k] && isomorphic_local(&a.module, &b.module));
            match hit {
                Some((k, _)) => used[k] = true,
                None => return IsoResult::No,
            }
        }
        return if used.iter().all(|u| *u) { IsoResult::Yes } else { IsoResult::No };
    }
    IsoResult::Undecided
}

fn rank_signature(x: &ConcreteBimodule) -> Vec<usize> {
    x.ctx()
        .vertices()
        .flat_map(|v| [x.vmap(v).rank(), x.hmap(v).rank()])
        .collect()
}

/// Candidate values of `λ` for a module with the dimension grid of a band,
/// read off the trace of the cycle operator `R`.
pub fn band_lambda_candidates(x: &ConcreteBimodule, m: usize) -> Vec<Q> {
    let Some(r) = cycle_operator(x) else {
        return Vec::new();
    };
    let t = r.trace();
    if t.is_zero() {
        return Vec::new();
    }
    let m = Q::from_int(m as i64);
    let mut out = vec![&m / &t, &t / &m];
    out.dedup();
    out
}

/// The monodromy of the band cycle through the peak in row 1.
pub fn cycle_operator(x: &ConcreteBimodule) -> Option<Matrix> {
    let ctx = *x.ctx();
    let n = ctx.n();
    if n == 1 {
        let v = ctx.vertex(1, 1);
        let (phi, psi) = (x.vmap(v), x.hmap(v));
        let d = x.dim_at(v);
        // complement of im ψ spanned by standard vectors
        let image = psi.image();
        let mut chosen = Vec::new();
        let mut span = image.clone();
        for c in 0..d {
            let mut e = Matrix::zeros(d, 1);
            e[(c, 0)] = Q::one();
            let trial = span.hstack(&e);
            if trial.rank() > span.rank() {
                span = trial;
                chosen.push(c);
            }
        }
        let mut t = Matrix::zeros(d, chosen.len());
        for (k, &c) in chosen.iter().enumerate() {
            t[(c, k)] = Q::one();
        }
        return phi.mul(&t).solve(&psi.mul(&t));
    }
    let start = (1..=n).map(|j| ctx.vertex(1, j as i64)).find(|v| !x.vmap(*v).is_zero())?;
    let mut r = Matrix::identity(x.dim_at(start));
    let mut v = start;
    for _ in 0..n {
        let valley = x.down(v);
        let next = TorusVertex {
            i: valley.i,
            j: ctx.succ(valley.j),
        };
        let h = x.hmap(next).inverse()?;
        if !x.vmap(v).is_square() {
            return None;
        }
        r = h.mul(x.vmap(v)).mul(&r);
        v = next;
    }
    (v == start).then_some(r)
}

/// The descriptor of an indecomposable `s`.
pub fn identify(s: &ConcreteBimodule, ctx: &AlgebraContext) -> Result<Descriptor> {
    let dim = s.total_dim();
    let n = ctx.n();
    let signature = rank_signature(s);
    let matches = |d: &Descriptor| -> bool {
        let r = realize(d, ctx);
        r.dims() == s.dims() && rank_signature(&r) == signature && isomorphic_local(s, &r)
    };
    if dim >= 3 {
        let l = dim - 1;
        for stype in StringType::ALL {
            let course = stype.course();
            let same_parity = (stype.length(0) % 2) == (l % 2);
            if !same_parity || l < stype.length(stype.min_valleys()) {
                continue;
            }
            for v in ctx.vertices() {
                let d = Descriptor::from_walk(ctx, v, course, l);
                if matches(&d) {
                    return Ok(d);
                }
            }
        }
    }
    if matches!(dim, 1 | 2 | 4) {
        for sp in SplitDescriptor::all(ctx) {
            let d = Descriptor::Split(sp);
            if sp.dimension() == dim && matches(&d) {
                return Ok(d);
            }
        }
    }
    if dim % (2 * n) == 0 && dim > 0 {
        let m = dim / (2 * n);
        for k in 1..=n {
            let probe = realize(&Descriptor::Band(BandDescriptor { k, m, lambda: Q::one() }), ctx);
            if probe.dims() != s.dims() {
                continue;
            }
            for lambda in band_lambda_candidates(s, m) {
                let d = Descriptor::Band(BandDescriptor { k, m, lambda });
                if matches(&d) {
                    return Ok(d);
                }
            }
        }
    }
    Err(Error::Unrecognized(format!("dimension grid {:?}", s.grid())))
}

#[derive(Debug, Clone, Serialize)]
pub struct SummandReport {
    pub descriptor: Option<String>,
    pub dims: Vec<Vec<usize>>,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub input_hash: String,
    pub input_dimension: usize,
    pub seed: u64,
    pub multiset: String,
    pub summands: Vec<SummandReport>,
    #[serde(skip)]
    pub parsed: DecompositionMultiset,
    #[serde(skip)]
    pub modules: Vec<ConcreteBimodule>,
    /// True when every summand was certified and identified.
    pub complete: bool,
}

pub fn input_hash(x: &ConcreteBimodule) -> String {
    let bytes = serde_json::to_vec(&x.to_json()).expect("json encodes");
    hex::encode(Sha256::digest(&bytes))
}

pub fn decompose(x: &ConcreteBimodule, seed: u64) -> DecompositionReport {
    let ctx = *x.ctx();
    let mut multiset = DecompositionMultiset::new();
    let mut summands = Vec::new();
    let mut modules = Vec::new();
    let mut complete = true;
    for s in split_indecomposables(x, seed) {
        let (descriptor, status) = if s.certificate.is_certified() {
            match identify(&s.module, &ctx) {
                Ok(d) => {
                    multiset.add(d.clone(), 1);
                    (Some(d.to_string()), "identified".to_string())
                }
                Err(e) => {
                    complete = false;
                    (None, e.to_string())
                }
            }
        } else {
            complete = false;
            (None, "unidentified-possibly-decomposable".to_string())
        };
        summands.push(SummandReport {
            descriptor,
            dims: s.module.grid(),
            status,
        });
        modules.push(s.module);
    }
    DecompositionReport {
        input_hash: input_hash(x),
        input_dimension: x.total_dim(),
        seed,
        multiset: multiset.to_string(),
        summands,
        parsed: multiset,
        modules,
        complete,
    }
}

/// The identified multiset, or an error naming the first summand that could
/// not be certified or identified.
pub fn decompose_multiset(x: &ConcreteBimodule, seed: u64) -> Result<DecompositionMultiset> {
    let report = decompose(x, seed);
    if let Some(bad) = report.summands.iter().find(|s| s.descriptor.is_none()) {
        return Err(Error::Unrecognized(format!("summand with grid {:?}: {}", bad.dims, bad.status)));
    }
    Ok(report.parsed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::universe;
    use crate::tensor_oracle::tensor;

    fn ctx(n: usize) -> AlgebraContext {
        AlgebraContext::new(n).unwrap()
    }

    fn module(s: &str, c: &AlgebraContext) -> ConcreteBimodule {
        realize(&Descriptor::parse(s, c).unwrap(), c)
    }

    #[test]
    fn simple_is_its_own_summand() {
        let c = ctx(2);
        let parts = split_indecomposables(&module("L(1|1)", &c), 0);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].certificate, Certificate::Scalar);
    }

    #[test]
    fn direct_sum_splits() {
        let c = ctx(2);
        let x = module("L(1|1)", &c).direct_sum(&module("L(1|2)", &c));
        let m = decompose_multiset(&x, 0).unwrap();
        assert_eq!(m.to_string(), "split(Sl:1,Sr:1) + split(Sl:1,Sr:2)");
    }

    #[test]
    fn band_squares_into_two_bands() {
        let c = ctx(2);
        let b = module("B(1,2,1)", &c);
        let t = tensor(&b, &b).unwrap();
        let parts = split_indecomposables(&t, 0);
        let mut dims: Vec<usize> = parts.iter().map(|p| p.module.total_dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![4, 12]);
    }

    #[test]
    fn mixed_direct_sum_needs_fitting() {
        // two isomorphic summands glued by a change of basis
        let c = ctx(1);
        let x = module("B(1,2,3)", &c);
        let y = x.direct_sum(&x);
        let v = c.vertex(1, 1);
        let p = Matrix::from_i64(&[
            &[1, 0, 0, 0, 1, 0, 0, 0],
            &[0, 1, 0, 0, 0, 1, 0, 0],
            &[0, 0, 1, 0, 0, 0, 1, 0],
            &[0, 0, 0, 1, 0, 0, 0, 1],
            &[0, 0, 0, 0, 1, 0, 0, 0],
            &[0, 0, 0, 0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 0, 0, 0, 1],
        ]);
        let pinv = p.inverse().unwrap();
        let mut z = y.clone();
        z.set_vmap(v, p.mul(y.vmap(v)).mul(&pinv));
        z.set_hmap(v, p.mul(y.hmap(v)).mul(&pinv));
        assert!(z.validate().is_ok());
        let m = decompose_multiset(&z, 3).unwrap();
        assert_eq!(m.to_string(), "2*B(1,2,3)");
    }

    #[test]
    fn iso_examples() {
        let c = ctx(2);
        let x = module("M(1|1,1)", &c);
        assert_eq!(isomorphic(&x, &x, 0), IsoResult::Yes);
        assert_eq!(isomorphic(&module("L(1|1)", &c), &module("L(1|2)", &c), 0), IsoResult::No);
        assert_eq!(isomorphic(&module("B(1,1,2)", &c), &module("B(1,1,3)", &c), 0), IsoResult::No);
    }

    #[test]
    fn band_trace_recovery() {
        let c = ctx(3);
        let b = module("B(2,2,3)", &c);
        let cands = band_lambda_candidates(&b, 2);
        assert_eq!(cands.first(), Some(&Q::from_int(3)));
        let c1 = ctx(1);
        let b = module("B(1,3,-1/2)", &c1);
        assert!(band_lambda_candidates(&b, 3).contains(&Q::new(-1, 2)));
    }

    #[test]
    fn identify_round_trip() {
        let lambdas = [Q::one(), Q::from_int(2), Q::from_int(-1), Q::new(1, 2)];
        for n in 1..=3 {
            let c = ctx(n);
            for d in universe(&c, 3, 3, &lambdas) {
                let x = realize(&d, &c);
                let parts = split_indecomposables(&x, 0);
                assert_eq!(parts.len(), 1, "{d}");
                assert!(parts[0].certificate.is_certified(), "{d}");
                assert_eq!(identify(&x, &c).unwrap(), d);
            }
        }
    }

    #[test]
    fn report_is_consistent() {
        let c = ctx(3);
        let x = module("M(1|1,1)", &c);
        let r = decompose(&tensor(&x, &x).unwrap(), 0);
        assert!(r.complete);
        let sum: usize = r.summands.iter().map(|s| s.dims.iter().flatten().sum::<usize>()).sum();
        assert_eq!(sum, r.input_dimension);
        assert!(r.parsed.contains(&Descriptor::parse("M(1|2,0)", &c).unwrap()));
        assert_eq!(r.input_hash.len(), 64);
    }
}
