//! Certification sweeps comparing the closed-form rules with the oracle.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::AlgebraContext;
use crate::cells::{
    check_partition, check_strong_regularity, enumerate_cell, find_left_witness, find_right_witness,
    find_two_sided_witness, Budget, ReachTable, TwoSidedCellId,
};
use crate::decompose::decompose_multiset;
use crate::descriptors::{universe, DecompositionMultiset, Descriptor, Side};
use crate::error::Error;
use crate::rational::Q;
use crate::realize::realize;
use crate::tensor_oracle::{oracle_dimension, tensor};
use crate::tensor_rules::symbolic_tensor;

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub max_valleys: usize,
    pub max_m: usize,
    pub lambdas: Vec<Q>,
    pub seed: u64,
    pub cap: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            ns: vec![1, 2, 3],
            max_valleys: 2,
            max_m: 2,
            lambdas: vec![Q::one(), Q::from_int(2)],
            seed: 0,
            cap: crate::tensor_oracle::DEFAULT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairStatus {
    Match,
    Mismatch,
    /// Oracle dimension above the cap; not compared.
    Skipped,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairOutcome {
    pub n: usize,
    pub lhs: String,
    pub rhs: String,
    pub symbolic: String,
    pub oracle: String,
    pub status: PairStatus,
    #[serde(skip)]
    pub oracle_multiset: Option<DecompositionMultiset>,
}

/// The oracle decomposition of `x ⊗ y`.
pub fn oracle_tensor(x: &Descriptor, y: &Descriptor, ctx: &AlgebraContext, seed: u64) -> crate::Result<DecompositionMultiset> {
    let t = tensor(&realize(x, ctx), &realize(y, ctx))?;
    decompose_multiset(&t, seed)
}

pub fn check_pair(x: &Descriptor, y: &Descriptor, ctx: &AlgebraContext, seed: u64, cap: usize) -> PairOutcome {
    let mut out = PairOutcome {
        n: ctx.n(),
        lhs: x.to_string(),
        rhs: y.to_string(),
        symbolic: String::new(),
        oracle: String::new(),
        status: PairStatus::Error,
        oracle_multiset: None,
    };
    let (rx, ry) = (realize(x, ctx), realize(y, ctx));
    let dim = oracle_dimension(&rx, &ry);
    match symbolic_tensor(x, y, ctx) {
        Ok(m) => out.symbolic = m.to_string(),
        Err(e) => {
            out.symbolic = format!("error: {e}");
            return out;
        }
    }
    if dim > cap {
        out.status = PairStatus::Skipped;
        out.oracle = Error::CapExceeded { dim, cap }.to_string();
        return out;
    }
    match tensor(&rx, &ry).and_then(|t| decompose_multiset(&t, seed)) {
        Ok(m) => {
            out.oracle = m.to_string();
            out.status = if out.oracle == out.symbolic { PairStatus::Match } else { PairStatus::Mismatch };
            out.oracle_multiset = Some(m);
        }
        Err(e) => out.oracle = format!("error: {e}"),
    }
    out
}

/// All ordered pairs of the bounded universe for one `n`.
pub fn universe_pairs(ctx: &AlgebraContext, cfg: &SweepConfig) -> Vec<(Descriptor, Descriptor)> {
    let all = universe(ctx, cfg.max_valleys, cfg.max_m, &cfg.lambdas);
    let mut pairs = Vec::with_capacity(all.len() * all.len());
    for x in &all {
        for y in &all {
            pairs.push((x.clone(), y.clone()));
        }
    }
    pairs
}

/// Symbolic versus oracle on every pair; results are in enumeration order
/// regardless of scheduling.
pub fn symbolic_vs_oracle(cfg: &SweepConfig) -> Vec<PairOutcome> {
    let mut out = Vec::new();
    for &n in &cfg.ns {
        let ctx = AlgebraContext::new(n).expect("positive n");
        let pairs = universe_pairs(&ctx, cfg);
        let mut part: Vec<PairOutcome> = pairs
            .par_iter()
            .map(|(x, y)| check_pair(x, y, &ctx, cfg.seed, cfg.cap))
            .collect();
        out.append(&mut part);
    }
    out
}

/// The five products `(lhs, rhs, summand)` showing that the string types
/// with `k` valleys generate each other.
pub fn product_fixtures(k: usize) -> [(String, String, String); 5] {
    let f = |a: &str, b: &str, c: String| (a.replace('k', &k.to_string()), b.replace('k', &k.to_string()), c);
    [
        f("M(1|1,k)", "M(1|1,k)", format!("M(1|2,{})", k - 1)),
        f("W(1|1,k)", "M(1|1,k)", format!("N(1|1,{k})")),
        f("S(1|1,k)", "N(1|1,k)", format!("M(1|1,{k})")),
        f("N(1|1,k)", "S(2|1,k)", format!("W(1|1,{k})")),
        f("M(1|1,k)", "W(2|2,k)", format!("S(1|2,{k})")),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub details: Value,
}

impl Check {
    fn new(name: &str, ok: bool, details: Value) -> Self {
        Check {
            name: name.to_string(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            details,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckConfig {
    #[serde(flatten)]
    pub sweep: SweepConfig,
    /// Largest `k` for which `J(k)` is enumerated in the cell checks.
    pub max_cell_valleys: usize,
    /// Corrupt one symbolic result so the sweep must fail.
    pub inject_fault: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            sweep: SweepConfig::default(),
            max_cell_valleys: 3,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub config: CheckConfig,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.summary.failed.is_empty()
    }

    /// One line per check plus a total.
    pub fn human(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
            };
            out.push_str(&format!("{tag} {}\n", c.name));
        }
        out.push_str(&format!("{}/{} checks passed\n", self.summary.passed, self.summary.total));
        out
    }
}

const SAMPLE: usize = 5;

fn sweep_check(outcomes: &[PairOutcome]) -> Check {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for o in outcomes {
        *counts.entry(format!("{:?}", o.status).to_lowercase()).or_default() += 1;
    }
    let bad: Vec<&PairOutcome> = outcomes
        .iter()
        .filter(|o| matches!(o.status, PairStatus::Mismatch | PairStatus::Error))
        .take(SAMPLE)
        .collect();
    Check::new("symbolic_vs_oracle", bad.is_empty(), json!({ "counts": counts, "failures": bad }))
}

/// Every oracle summand of a string-band product keeps the string's type,
/// width and height.
pub fn string_band_shape_violations(outcomes: &[PairOutcome], ctx_for: impl Fn(usize) -> AlgebraContext) -> Vec<String> {
    let mut bad = Vec::new();
    for o in outcomes {
        let Some(m) = &o.oracle_multiset else { continue };
        let ctx = ctx_for(o.n);
        let (Ok(x), Ok(y)) = (Descriptor::parse(&o.lhs, &ctx), Descriptor::parse(&o.rhs, &ctx)) else {
            continue;
        };
        let s = match (&x, &y) {
            (Descriptor::String(s), Descriptor::Band(_)) | (Descriptor::Band(_), Descriptor::String(s)) => *s,
            _ => continue,
        };
        for z in m.support() {
            let ok = match z {
                Descriptor::String(t) => t.stype == s.stype && t.width() == s.width() && t.height() == s.height(),
                _ => false,
            };
            if !ok {
                bad.push(format!("n={}: {} ⊗ {} has summand {z}", o.n, o.lhs, o.rhs));
            }
        }
    }
    bad
}

/// Oracle check that each fixture summand occurs in its product.
pub fn product_fixture_failures(n: usize, ks: &[usize], seed: u64) -> crate::Result<Vec<String>> {
    let ctx = AlgebraContext::new(n)?;
    let mut bad = Vec::new();
    for &k in ks {
        for (a, b, want) in product_fixtures(k) {
            let (x, y, w) = (
                Descriptor::parse(&a, &ctx)?,
                Descriptor::parse(&b, &ctx)?,
                Descriptor::parse(&want, &ctx)?,
            );
            let m = oracle_tensor(&x, &y, &ctx, seed)?;
            if !m.contains(&w) {
                bad.push(format!("n={n}: {w} not in {x} ⊗ {y} = {m}"));
            }
        }
    }
    Ok(bad)
}

/// Witnesses for `J(k-1) >=_J J(k)` found with the default budget.
#[derive(Debug, Clone, Serialize)]
pub struct OrderWitness {
    pub n: usize,
    pub k: usize,
    pub x: Descriptor,
    pub y: Descriptor,
    pub left: Option<Descriptor>,
    pub right: Option<Descriptor>,
    pub two_sided: Option<(Descriptor, Descriptor)>,
}

impl OrderWitness {
    pub fn complete(&self) -> bool {
        self.left.is_some() && self.right.is_some() && self.two_sided.is_some()
    }
}

pub fn order_witness(n: usize, k: usize) -> crate::Result<OrderWitness> {
    let ctx = AlgebraContext::new(n)?;
    let x = Descriptor::parse(&format!("M(1|2,{})", k - 1), &ctx)?;
    let y = Descriptor::parse(&format!("M(1|1,{k})"), &ctx)?;
    let b = Budget::for_pair(&x, &y);
    Ok(OrderWitness {
        n,
        k,
        left: find_left_witness(&x, &y, &ctx, &b)?,
        right: find_right_witness(&x, &y, &ctx, &b)?,
        two_sided: find_two_sided_witness(&x, &y, &ctx, &b)?,
        x,
        y,
    })
}

/// Pairs `(x, y)` with `x` in a lower cell than `y` yet reachable from `y`
/// within `budget`: bands from `J(top)`, and `J(k)` from `J(k-1)`.
pub fn upward_witnesses(n: usize, top: usize, budget: &Budget) -> crate::Result<Vec<String>> {
    let ctx = AlgebraContext::new(n)?;
    let mut table = ReachTable::new(&ctx, budget);
    let mut found = Vec::new();
    for y in enumerate_cell(TwoSidedCellId::J(top), &ctx)? {
        for x in table.two_sided_reach(&y)? {
            if x.is_band() {
                found.push(format!("n={n}: {x} from {y}"));
            }
        }
    }
    for k in 1..=top {
        for y in enumerate_cell(TwoSidedCellId::J(k - 1), &ctx)? {
            for x in table.two_sided_reach(&y)? {
                if crate::cells::two_sided_cell(&x) == TwoSidedCellId::J(k) {
                    found.push(format!("n={n}: {x} from {y}"));
                }
            }
        }
    }
    Ok(found)
}

fn finite_cells(max_k: usize) -> Vec<TwoSidedCellId> {
    let mut ids = vec![TwoSidedCellId::Split];
    ids.extend((0..=max_k).map(TwoSidedCellId::J));
    ids
}

fn error_check(name: &str, e: Error) -> Check {
    Check::new(name, false, json!({ "error": e.to_string() }))
}

/// Runs every check; failures are report content, never errors.
pub fn run_checks(cfg: &CheckConfig) -> CheckReport {
    let sweep = &cfg.sweep;
    let mut checks = Vec::new();

    let mut outcomes = symbolic_vs_oracle(sweep);
    if cfg.inject_fault {
        if let Some(o) = outcomes.first_mut() {
            o.symbolic.push_str(" + B(1,1,1)");
            o.status = PairStatus::Mismatch;
        }
    }
    checks.push(sweep_check(&outcomes));

    let shape = string_band_shape_violations(&outcomes, |n| AlgebraContext::new(n).expect("positive n"));
    let shown: Vec<&String> = shape.iter().take(SAMPLE).collect();
    checks.push(Check::new("string_band_shape", shape.is_empty(), json!({ "violations": shape.len(), "sample": shown })));

    let mut fixture_bad = Vec::new();
    let mut fixture_err = None;
    for &n in &sweep.ns {
        match product_fixture_failures(n, &[1, 2, 3], sweep.seed) {
            Ok(b) => fixture_bad.extend(b),
            Err(e) => fixture_err = Some(e),
        }
    }
    checks.push(match fixture_err {
        Some(e) => error_check("product_fixtures", e),
        None => Check::new("product_fixtures", fixture_bad.is_empty(), json!({ "failures": fixture_bad })),
    });

    let mut witnesses = Vec::new();
    let mut witness_err = None;
    for &n in &sweep.ns {
        for k in 1..=3 {
            match order_witness(n, k) {
                Ok(w) => witnesses.push(w),
                Err(e) => witness_err = Some(e),
            }
        }
    }
    checks.push(match witness_err {
        Some(e) => error_check("order_witnesses", e),
        None => Check::new("order_witnesses", witnesses.iter().all(OrderWitness::complete), json!(witnesses)),
    });

    let budget = Budget::new(sweep.max_valleys, sweep.max_m, sweep.lambdas.clone());
    let mut upward = Vec::new();
    let mut upward_err = None;
    for &n in &sweep.ns {
        match upward_witnesses(n, 3, &budget) {
            Ok(f) => upward.extend(f),
            Err(e) => upward_err = Some(e),
        }
    }
    checks.push(match upward_err {
        Some(e) => error_check("order_strictness", e),
        None => Check::new(
            "order_strictness",
            upward.is_empty(),
            json!({ "budget": budget, "note": "no witness within budget; consistency, not proof", "found": upward }),
        ),
    });

    for (name, side) in [("left_cells", Side::Left), ("right_cells", Side::Right)] {
        let mut rows = Vec::new();
        let mut ok = true;
        let mut err = None;
        for &n in &sweep.ns {
            let ctx = AlgebraContext::new(n).expect("positive n");
            for id in finite_cells(cfg.max_cell_valleys) {
                let members = enumerate_cell(id, &ctx).expect("finite cell");
                let b = Budget::for_pair(&members[0], &members[0]);
                match check_partition(id, side, &ctx, &b) {
                    Ok(p) => {
                        ok &= p.ok();
                        let bad: Vec<String> = p.disagreements.iter().take(SAMPLE).map(|(x, y)| format!("{x} ~ {y}")).collect();
                        rows.push(json!({ "n": n, "cell": id, "size": p.size, "classes": p.classes, "disagreements": bad }));
                    }
                    Err(e) => err = Some(e),
                }
            }
        }
        checks.push(match err {
            Some(e) => error_check(name, e),
            None => Check::new(name, ok, json!(rows)),
        });
    }

    let mut regular = Vec::new();
    for &n in &sweep.ns {
        let ctx = AlgebraContext::new(n).expect("positive n");
        for id in finite_cells(cfg.max_cell_valleys) {
            if let Ok(Err(v)) = check_strong_regularity(id, &ctx) {
                regular.push(format!("n={n} {id}: {v}"));
            }
        }
    }
    checks.push(Check::new("strong_regularity", regular.is_empty(), json!({ "counterexamples": regular })));

    let failed: Vec<String> = checks
        .iter()
        .filter(|c| c.status == CheckStatus::Fail)
        .map(|c| c.name.clone())
        .collect();
    CheckReport {
        config: cfg.clone(),
        summary: Summary {
            total: checks.len(),
            passed: checks.len() - failed.len(),
            failed,
        },
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_agrees() {
        let cfg = SweepConfig {
            ns: vec![1, 2],
            max_valleys: 1,
            max_m: 1,
            lambdas: vec![Q::one()],
            ..SweepConfig::default()
        };
        let bad: Vec<_> = symbolic_vs_oracle(&cfg)
            .into_iter()
            .filter(|o| o.status != PairStatus::Match)
            .collect();
        assert!(bad.is_empty(), "{:#?}", &bad[..bad.len().min(5)]);
    }

    fn small() -> CheckConfig {
        CheckConfig {
            sweep: SweepConfig {
                ns: vec![1, 2],
                max_valleys: 1,
                max_m: 1,
                lambdas: vec![Q::one()],
                ..SweepConfig::default()
            },
            max_cell_valleys: 2,
            inject_fault: false,
        }
    }

    #[test]
    fn small_report_passes() {
        let r = run_checks(&small());
        assert!(r.all_pass(), "{}", r.human());
        assert_eq!(r.summary.total, 8);
        let v = serde_json::to_value(&r).unwrap();
        assert!(v["config"]["ns"].is_array());
        assert_eq!(v["checks"][0]["status"], "pass");
    }

    #[test]
    fn injected_fault_is_named() {
        let r = run_checks(&CheckConfig {
            inject_fault: true,
            ..small()
        });
        assert_eq!(r.summary.failed, vec!["symbolic_vs_oracle".to_string()]);
    }

    #[test]
    fn fixtures_hold_for_small_n() {
        for n in 1..=4 {
            assert!(product_fixture_failures(n, &[1, 2], 0).unwrap().is_empty());
        }
    }
}
