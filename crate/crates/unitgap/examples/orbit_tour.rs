//! Walks one NPN orbit: every member's record, and the invariance of opt,
//! tree cost, gap, and mechanism across the orbit.

use std::collections::HashSet;

use unitgap::db::build_database;
use unitgap::npn::npn_orbit;
use unitgap::tt::TruthTable;

fn main() {
    let db = build_database(3);
    let rep = TruthTable::from_bits(3, 0x1e);
    let orbit = npn_orbit(&rep);
    println!("orbit of {} has {} members", rep.to_hex(), orbit.len());

    let mut costs = HashSet::new();
    let mut mechanisms = HashSet::new();
    for member in &orbit {
        let r = db.record(member);
        costs.insert((r.opt, r.tree, r.gap, r.gap_type));
        mechanisms.insert(r.mechanism);
        assert_eq!(r.npn_rep, rep);
    }
    assert_eq!(costs.len(), 1, "costs are NPN invariants");
    assert_eq!(mechanisms.len(), 1, "the witness mechanism transports");

    let (opt, tree, gap, gap_type) = costs.into_iter().next().unwrap();
    println!(
        "opt {} tree {} gap {} type {} mechanism {}",
        opt.unwrap(),
        tree.unwrap(),
        gap.unwrap(),
        gap_type.map_or("-".into(), |t| t.to_string()),
        mechanisms
            .into_iter()
            .next()
            .unwrap()
            .map_or("-".into(), |m| m.to_string())
    );
    for member in orbit.iter().take(6) {
        println!("  member {}", member.to_hex());
    }
}
