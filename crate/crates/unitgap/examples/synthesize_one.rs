//! Synthesizes 3-input parity exactly, then enumerates every optimal
//! circuit for it and tallies their sharing shapes.

use unitgap::aiger::to_aiger;
use unitgap::analysis::classify_mechanism;
use unitgap::synth::{all_optimal_circuits, exact_opt, oracle_opt};
use unitgap::tt::TruthTable;

fn main() {
    let parity = TruthTable::from_bits(3, 0x96);
    let (opt, witness) = exact_opt(&parity, 6).expect("parity needs 6 gates");
    println!("opt({}) = {opt}", parity.to_hex());
    println!("{}", to_aiger(&witness));

    let all = all_optimal_circuits(3, opt, |t| (t == &parity).then(|| oracle_opt(t)));
    let circuits = &all[&parity];
    println!("optimal circuits: {}", circuits.len());
    for c in circuits {
        let shape = classify_mechanism(c);
        let mechanisms: Vec<String> =
            shape.shared.iter().map(|s| format!("gate {} {}", s.shared_gate, s.mechanism)).collect();
        println!("  shared [{}]", mechanisms.join(", "));
    }
}
