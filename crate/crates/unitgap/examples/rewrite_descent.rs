//! Greedy cone rewriting from redundant tree starts: a gap-0 function
//! descends to optimal, a gap-1 function sticks one gate above it.

use unitgap::db::build_database;
use unitgap::rewrite::{apply_move, run_to_fixed_point, trivial_tree_start};
use unitgap::tt::TruthTable;

fn main() {
    let db = build_database(3);
    // Gap-0: three-input AND. Gap-1: x1 XOR (x2 AND x3).
    for bits in [0x80u64, 0x1e] {
        let f = TruthTable::from_bits(3, bits);
        let record = db.record(&f);
        let start = trivial_tree_start(&db, &f);
        let trajectory = run_to_fixed_point(&start, &db);
        println!(
            "tt {} opt {} start {} gates",
            f.to_hex(),
            record.opt.unwrap(),
            start.num_gates()
        );
        let mut current = start;
        for step in &trajectory.steps {
            current = apply_move(&current, step);
            println!("  step -> {} gates", current.num_gates());
        }
        println!(
            "  fixed point {} gates, {} above optimal",
            trajectory.fixed_point.num_gates(),
            trajectory.stuck_above_opt
        );
    }
}
