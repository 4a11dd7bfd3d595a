//! Tallies the n = 3 gap distribution, the fanin-cone overlap census over
//! witness gates, and the root-sharing census over all optimal circuits.

use unitgap::analysis::{decomposition_census, gap_report, overlap_census};
use unitgap::db::build_database;
use unitgap::synth::{all_optimal_circuits, oracle_opt};

fn main() {
    let db = build_database(3);

    println!("opt  gap-0  gap-1");
    for row in gap_report(&db) {
        println!("{:>3}  {:>5}  {:>5}", row.opt, row.gap0, row.gap1);
    }

    println!("\nwitness-gate fanin overlap:");
    for (s, fns) in overlap_census(&db) {
        println!("  s = {s}: {} cone functions", fns.len());
    }

    let all = all_optimal_circuits(3, 6, |t| Some(oracle_opt(t)));
    println!("\nroot decompositions over all optimal circuits:");
    println!("opt  total  s=0  s=1");
    for row in decomposition_census(&db, &all) {
        println!("{:>3}  {:>5}  {:>3}  {:>3}", row.opt, row.s0 + row.s1, row.s0, row.s1);
    }
}
