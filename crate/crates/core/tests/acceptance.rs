//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use nakayama::cells::{check_partition, check_strong_regularity, enumerate_cell, Budget, TwoSidedCellId};
use nakayama::certify::{
    order_witness, product_fixture_failures, string_band_shape_violations, symbolic_vs_oracle, upward_witnesses,
    oracle_tensor, PairOutcome, PairStatus, SweepConfig,
};
use nakayama::decompose::{isomorphic, IsoResult};
use nakayama::descriptors::{all_bands, universe};
use nakayama::realize::realize;
use nakayama::tensor_oracle::tensor;
use nakayama::{AlgebraContext, BandDescriptor, DecompositionMultiset, Descriptor, Side, Q};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ctx(n: usize) -> AlgebraContext {
    AlgebraContext::new(n).unwrap()
}

fn q(s: &str) -> Q {
    s.parse().unwrap()
}

/// `⊕_s B(k, s, λ)` over `s = |m1-m2|+1, ..., m1+m2-1` in steps of two.
fn clebsch_gordan(k: i64, m1: usize, m2: usize, lambda: Q, c: &AlgebraContext) -> DecompositionMultiset {
    let mut out = DecompositionMultiset::new();
    for s in (m1.abs_diff(m2) + 1..m1 + m2).step_by(2) {
        out.add(BandDescriptor::new(c, k, s, lambda.clone()).unwrap().into(), 1);
    }
    out
}

fn criterion_1() -> Outcome {
    let lambdas = [q("1"), q("2"), q("-1"), q("1/2")];
    let mut total = 0;
    let mut literal_misses = Vec::new();
    let mut shifted_misses = 0;
    for n in 1..=3 {
        let c = ctx(n);
        let bands = all_bands(&c, 3, &lambdas);
        for a in &bands {
            for b in &bands {
                total += 1;
                let got = oracle_tensor(&a.clone().into(), &b.clone().into(), &c, 0).map_err(|e| e.to_string())?;
                let lambda = &a.lambda * &b.lambda;
                let (k1, k2) = (a.k as i64, b.k as i64);
                if got != clebsch_gordan(k1 + k2, a.m, b.m, lambda.clone(), &c) {
                    literal_misses.push(format!("n={n} {a} ⊗ {b} = {got}"));
                }
                if got != clebsch_gordan(k1 + k2 - 1, a.m, b.m, lambda, &c) {
                    shifted_misses += 1;
                }
            }
        }
    }
    if literal_misses.is_empty() {
        Ok(format!("{total} band products equal ⊕ B(k1+k2,s,λ1λ2)"))
    } else {
        Err(format!(
            "{}/{total} products differ from ⊕ B(k1+k2,s,λ1λ2), e.g. {}; {} differ from ⊕ B(k1+k2-1,s,λ1λ2)",
            literal_misses.len(),
            literal_misses[0],
            shifted_misses
        ))
    }
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=4 {
        bad.extend(product_fixture_failures(n, &[1, 2, 3], 0).map_err(|e| e.to_string())?);
    }
    if bad.is_empty() {
        Ok("5 summands × k ∈ {1,2,3} × n ∈ {1,2,3,4} present".into())
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_3(outcomes: &[PairOutcome]) -> Outcome {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for o in outcomes {
        *counts.entry(format!("{:?}", o.status)).or_default() += 1;
    }
    let bad: Vec<&PairOutcome> = outcomes
        .iter()
        .filter(|o| !matches!(o.status, PairStatus::Match | PairStatus::Skipped))
        .collect();
    match bad.first() {
        None => Ok(format!("{counts:?}")),
        Some(o) => Err(format!(
            "{counts:?}; first: n={} {} ⊗ {}: symbolic {} oracle {}",
            o.n, o.lhs, o.rhs, o.symbolic, o.oracle
        )),
    }
}

fn criterion_4(outcomes: &[PairOutcome]) -> Outcome {
    let checked = outcomes
        .iter()
        .filter(|o| o.oracle_multiset.is_some() && (o.lhs.starts_with('B') != o.rhs.starts_with('B')))
        .count();
    let bad = string_band_shape_violations(outcomes, ctx);
    if bad.is_empty() {
        Ok(format!("{checked} string/band products keep type, width and height"))
    } else {
        Err(bad[..bad.len().min(3)].join("; "))
    }
}

fn criterion_5() -> Outcome {
    let mut found = 0;
    for n in 1..=3 {
        for k in 1..=3 {
            let w = order_witness(n, k).map_err(|e| e.to_string())?;
            if !w.complete() {
                return Err(format!("n={n} k={k}: {w:?}"));
            }
            found += 1;
        }
    }
    let budget = Budget::new(2, 2, vec![q("1"), q("2")]);
    let mut upward = Vec::new();
    for n in 1..=3 {
        upward.extend(upward_witnesses(n, 3, &budget).map_err(|e| e.to_string())?);
    }
    if upward.is_empty() {
        Ok(format!("{found} downward witness triples; no upward witness within budget"))
    } else {
        Err(upward[..upward.len().min(3)].join("; "))
    }
}

fn criterion_6() -> Outcome {
    let mut cells = 0;
    for n in 1..=3 {
        let c = ctx(n);
        let mut ids = vec![TwoSidedCellId::Split];
        ids.extend((0..=3).map(TwoSidedCellId::J));
        for id in ids {
            let members = enumerate_cell(id, &c).map_err(|e| e.to_string())?;
            let b = Budget::for_pair(&members[0], &members[0]);
            for side in [Side::Left, Side::Right] {
                let p = check_partition(id, side, &c, &b).map_err(|e| e.to_string())?;
                if !p.ok() {
                    return Err(format!("n={n} {id} {side:?}: {:?}", &p.disagreements[..p.disagreements.len().min(3)]));
                }
            }
            if let Err(v) = check_strong_regularity(id, &c).map_err(|e| e.to_string())? {
                return Err(format!("n={n} {id}: {v}"));
            }
            cells += 1;
        }
    }
    Ok(format!("{cells} cells partitioned exactly and strongly regular"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = SweepConfig::default();
    let mut checked = 0;
    while checked < 20 {
        let n = *[2usize, 3].choose(&mut rng).unwrap();
        let c = ctx(n);
        let all = universe(&c, cfg.max_valleys, cfg.max_m, &cfg.lambdas);
        let x = all.choose(&mut rng).unwrap();
        let y = all.choose(&mut rng).unwrap();
        let first = oracle_tensor(x, y, &c, 0).map_err(|e| e.to_string())?;
        if first.len() < 2 {
            continue;
        }
        for seed in 1..10 {
            let again = oracle_tensor(x, y, &c, seed).map_err(|e| e.to_string())?;
            if again != first {
                return Err(format!("n={n} {x} ⊗ {y}: seed 0 gives {first}, seed {seed} gives {again}"));
            }
        }
        checked += 1;
    }
    Ok("20 products × 10 seeds identical".into())
}

fn criterion_8() -> Outcome {
    let cfg = SweepConfig::default();
    let mut units = 0;
    for n in 1..=3 {
        let c = ctx(n);
        let a = realize(&Descriptor::unit(), &c);
        for d in universe(&c, cfg.max_valleys, cfg.max_m, &cfg.lambdas) {
            let x = realize(&d, &c);
            let left = tensor(&a, &x).map_err(|e| e.to_string())?;
            let right = tensor(&x, &a).map_err(|e| e.to_string())?;
            for (side, t) in [("A⊗X", left), ("X⊗A", right)] {
                let r = isomorphic(&t, &x, 0);
                if r != IsoResult::Yes {
                    return Err(format!("n={n} X={d}: {side} vs X is {r:?}"));
                }
            }
            units += 1;
        }
    }
    let c = ctx(2);
    let (p, r) = (realize(&Descriptor::parse("B(1,2,1)", &c).unwrap(), &c), realize(&Descriptor::parse("B(1,2,2)", &c).unwrap(), &c));
    if isomorphic(&p, &r, 0) != IsoResult::No {
        return Err("control: B(1,2,1) and B(1,2,2) reported isomorphic".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut largest = 0;
    for _ in 0..30 {
        let n = *[1usize, 2, 3].choose(&mut rng).unwrap();
        let c = ctx(n);
        let all = universe(&c, cfg.max_valleys, cfg.max_m, &cfg.lambdas);
        let ds: Vec<&Descriptor> = (0..3).map(|_| all.choose(&mut rng).unwrap()).collect();
        let [x, y, z] = [0, 1, 2].map(|i| realize(ds[i], &c));
        let lhs = tensor(&tensor(&x, &y).map_err(|e| e.to_string())?, &z).map_err(|e| e.to_string())?;
        let rhs = tensor(&x, &tensor(&y, &z).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let r = isomorphic(&lhs, &rhs, 0);
        if r != IsoResult::Yes {
            return Err(format!("n={n} ({} ⊗ {}) ⊗ {}: {r:?}", ds[0], ds[1], ds[2]));
        }
        largest = largest.max(lhs.total_dim());
    }
    Ok(format!("unit laws on {units} descriptors; 30 associativity triples, largest dimension {largest}"))
}

fn main() -> ExitCode {
    let sweep_start = Instant::now();
    let outcomes = symbolic_vs_oracle(&SweepConfig::default());
    let sweep_time = sweep_start.elapsed();

    let mut runs: Vec<(usize, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(criterion_2)),
        (3, Box::new(|| criterion_3(&outcomes))),
        (4, Box::new(|| criterion_4(&outcomes))),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (i, run) in runs.drain(..) {
        let t = Instant::now();
        let r = run();
        let mut elapsed = t.elapsed();
        if i == 3 {
            elapsed += sweep_time;
        }
        match r {
            Ok(msg) => println!("criterion {i}: PASS ({elapsed:.2?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {i}: FAIL ({elapsed:.2?}) {msg}");
            }
        }
    }
    println!("acceptance: {}/8 criteria pass", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
