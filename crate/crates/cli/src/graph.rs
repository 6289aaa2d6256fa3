//! DOT rendering of action graphs.

use std::fmt::Write;

use nakayama::{AlgebraContext, ConcreteBimodule, Descriptor, Matrix, TorusVertex};
use nakayama::realize::realize;

fn node(i: i64, j: i64) -> String {
    format!("v_{i}_{j}").replace('-', "m")
}

fn matrix_label(m: &Matrix) -> String {
    if m.is_identity() {
        return "id".into();
    }
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

fn header(d: &Descriptor) -> String {
    format!("digraph \"{d}\" {{\n  rankdir=LR;\n")
}

/// The covering-level walk of a string.
fn string_graph(d: &Descriptor, ctx: &AlgebraContext) -> String {
    let s = d.as_string().expect("string descriptor");
    let walk = s.walk();
    let mut out = header(d);
    for w in &walk {
        let t = ctx.project(*w);
        let label = if (t.i as i64, t.j as i64) == (w.p, w.q) {
            format!("{t}")
        } else {
            format!("{}|{} ({t})", w.p, w.q)
        };
        writeln!(out, "  {} [label=\"{label}\"];", node(w.p, w.q)).unwrap();
    }
    for pair in walk.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        // a right step is a right action from the new column back to the old
        let (from, to) = if b.q != a.q { (b, a) } else { (a, b) };
        writeln!(out, "  {} -> {} [label=\"id\"];", node(from.p, from.q), node(to.p, to.q)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Torus-level support of a realized module, with one labelled map
/// optionally overridden.
fn torus_graph(d: &Descriptor, x: &ConcreteBimodule, special: Option<(TorusVertex, String)>) -> String {
    let ctx = x.ctx();
    let mut out = header(d);
    for v in ctx.vertices() {
        let k = x.dim_at(v);
        if k == 0 {
            continue;
        }
        let label = if k == 1 { format!("{v}") } else { format!("{v} (dim {k})") };
        writeln!(out, "  {} [label=\"{label}\"];", node(v.i as i64, v.j as i64)).unwrap();
    }
    for v in ctx.vertices() {
        let from = node(v.i as i64, v.j as i64);
        let vm = x.vmap(v);
        if vm.rows() > 0 && vm.cols() > 0 && !vm.is_zero() {
            let t = x.down(v);
            writeln!(out, "  {from} -> {} [label=\"{}\"];", node(t.i as i64, t.j as i64), matrix_label(vm)).unwrap();
        }
        let hm = x.hmap(v);
        if hm.rows() > 0 && hm.cols() > 0 && !hm.is_zero() {
            let t = x.left(v);
            let label = match &special {
                Some((s, l)) if *s == v => l.clone(),
                _ => matrix_label(hm),
            };
            writeln!(out, "  {from} -> {} [label=\"{label}\"];", node(t.i as i64, t.j as i64)).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn dot(d: &Descriptor, ctx: &AlgebraContext) -> String {
    match d {
        Descriptor::String(_) => string_graph(d, ctx),
        Descriptor::Split(_) => torus_graph(d, &realize(d, ctx), None),
        Descriptor::Band(b) => {
            let jordan = format!("J_{}({})", b.m, b.lambda);
            let x = realize(d, ctx);
            if ctx.n() == 1 {
                // one vertex: both actions are loops; label them by their blocks
                let v = ctx.vertex(1, 1);
                let mut out = header(d);
                writeln!(out, "  v_1_1 [label=\"1|1 (dim {})\"];", x.dim_at(v)).unwrap();
                writeln!(out, "  v_1_1 -> v_1_1 [label=\"[0 0; id 0]\"];").unwrap();
                writeln!(out, "  v_1_1 -> v_1_1 [label=\"[0 0; {jordan} 0]\"];").unwrap();
                out.push_str("}\n");
                return out;
            }
            // the right twist by θ^{k-1} moves the Jordan map from 2|2 to 2|3-k
            let at = ctx.vertex(2, 3 - b.k as i64);
            torus_graph(d, &x, Some((at, jordan)))
        }
    }
}
