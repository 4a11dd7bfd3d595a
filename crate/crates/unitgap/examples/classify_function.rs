//! Looks up one function in the n = 3 database and reports everything the
//! record carries: costs, gap, type, mechanism, and witness sharing.

use unitgap::aiger::to_aiger;
use unitgap::analysis::classify_mechanism;
use unitgap::db::build_database;
use unitgap::tt::TruthTable;

fn main() {
    let db = build_database(3);
    // x1 XOR (x2 AND x3): the smallest gap-1 representative.
    let f = TruthTable::from_bits(3, 0x1e);
    let r = db.record(&f);
    println!("tt        {}", r.tt.to_hex());
    println!("opt       {}", r.opt.unwrap());
    println!("tree      {}", r.tree.unwrap());
    println!("gap       {}", r.gap.unwrap());
    println!("essential {}", r.essential);
    println!("npn rep   {}", r.npn_rep.to_hex());
    println!("type      {}", r.gap_type.map_or("-".into(), |t| t.to_string()));
    println!("mechanism {}", r.mechanism.map_or("-".into(), |m| m.to_string()));

    let witness = r.witness.as_ref().unwrap();
    println!("{}", to_aiger(witness));
    for s in &classify_mechanism(witness).shared {
        let polarities: String =
            s.consumer_polarities.iter().map(|&c| if c { '-' } else { '+' }).collect();
        println!(
            "shared gate {} depth {} consumers {} polarities {}",
            s.shared_gate,
            s.shared_gate_depth,
            s.consumer_polarities.len(),
            polarities
        );
    }
}
