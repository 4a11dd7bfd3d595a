//! Scratch probe: decomposition faults vs cone closedness on the cached n=4 db.

use std::collections::{HashMap, HashSet};
use unitgap::db::FunctionDatabase;

fn main() {
    let db = FunctionDatabase::load(
        "target/db4-cache/db.csv".as_ref(),
        "target/db4-cache/db.aag".as_ref(),
    )
    .expect("cached db4");
    eprintln!("loaded n={} records={}", db.n(), db.records().len());

    let mut gates_total = 0usize;
    let mut sub_faults = 0usize; // opt(cone fn) != |cone|
    let mut sub_faults_open = 0usize; // ... and cone has interior gate consumed outside
    let mut closed_total = 0usize;
    let mut closed_sub_faults = 0usize;
    let mut formula_checked = 0usize; // g, a, b cones all closed
    let mut formula_faults = 0usize;
    let mut overlap_hist: HashMap<usize, usize> = HashMap::new();
    let mut fault_fns: HashSet<String> = HashSet::new();
    let mut shown = 0usize;

    for r in db.records() {
        let Some(w) = &r.witness else { continue };
        let signals = w.simulate();
        // var -> consuming gate indices (output edge handled separately)
        let mut consumers: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, g) in w.gates().iter().enumerate() {
            consumers.entry(g.fanin0.var()).or_default().push(i);
            consumers.entry(g.fanin1.var()).or_default().push(i);
        }
        let out_var = w.output().var();
        let cone_set = |j: usize| -> HashSet<usize> { w.cone(j).into_iter().collect() };
        let is_closed = |j: usize, cone: &HashSet<usize>| -> bool {
            cone.iter().all(|&i| {
                if i == j {
                    return true;
                }
                let v = w.gate_var(i);
                if v == out_var {
                    return false;
                }
                consumers
                    .get(&v)
                    .map_or(true, |cs| cs.iter().all(|c| cone.contains(c)))
            })
        };
        for j in 0..w.num_gates() {
            gates_total += 1;
            let cone = cone_set(j);
            let closed = is_closed(j, &cone);
            let sub_fn = signals[w.gate_var(j)];
            let sub_opt = db.opt(&sub_fn).expect("within horizon");
            let sub_ok = sub_opt == cone.len();
            if closed {
                closed_total += 1;
                if !sub_ok {
                    closed_sub_faults += 1;
                }
            }
            if !sub_ok {
                sub_faults += 1;
                fault_fns.insert(r.tt.to_hex());
                if !closed {
                    sub_faults_open += 1;
                }
                if shown < 4 {
                    shown += 1;
                    eprintln!(
                        "fault: tt {} gate {j} cone {} gates, fn {} opt {sub_opt}, closed={closed}",
                        r.tt.to_hex(),
                        cone.len(),
                        sub_fn.to_hex()
                    );
                }
            }
            // Formula check scoped to closed g, a, b cones.
            let gate = w.gates()[j];
            let fanin_cone = |v: usize| -> Option<(usize, HashSet<usize>)> {
                w.var_gate(v).map(|i| (i, cone_set(i)))
            };
            let fa = fanin_cone(gate.fanin0.var());
            let fb = fanin_cone(gate.fanin1.var());
            let a_closed = fa.as_ref().map_or(true, |(i, c)| is_closed(*i, c));
            let b_closed = fb.as_ref().map_or(true, |(i, c)| is_closed(*i, c));
            let ca = fa.as_ref().map_or_else(HashSet::new, |(_, c)| c.clone());
            let cb = fb.as_ref().map_or_else(HashSet::new, |(_, c)| c.clone());
            let overlap = ca.intersection(&cb).count();
            if closed && a_closed && b_closed {
                formula_checked += 1;
                *overlap_hist.entry(overlap).or_insert(0) += 1;
                let lit_opt = |lit: unitgap::aig::Literal| -> usize {
                    if w.var_gate(lit.var()).is_some() {
                        let t = signals[lit.var()];
                        let f = if lit.is_complemented() { t.not() } else { t };
                        db.opt(&f).expect("within horizon")
                    } else {
                        0
                    }
                };
                let (oa, ob) = (lit_opt(gate.fanin0), lit_opt(gate.fanin1));
                if sub_opt + overlap != 1 + oa + ob {
                    formula_faults += 1;
                    if formula_faults <= 4 {
                        eprintln!(
                            "formula fault: tt {} gate {j}: opt {sub_opt} + s {overlap} != 1 + {oa} + {ob}",
                            r.tt.to_hex()
                        );
                    }
                }
            }
        }
    }
    println!("gates_total            {gates_total}");
    println!("sub_faults             {sub_faults}");
    println!("sub_faults_open        {sub_faults_open}  (want == sub_faults)");
    println!("distinct faulting fns  {}", fault_fns.len());
    println!("closed cones           {closed_total}");
    println!("closed sub faults      {closed_sub_faults}  (want 0)");
    println!("formula checked        {formula_checked}");
    println!("formula faults         {formula_faults}  (want 0)");
    let mut hist: Vec<_> = overlap_hist.into_iter().collect();
    hist.sort();
    for (s, c) in hist {
        println!("overlap {s}: {c}");
    }
}
