//! Draws block-composed random circuits at 1 to 3 blocks and measures how
//! often the accepted samples are exactly optimal.

use unitgap::db::build_database;
use unitgap::grammar::{optimality_experiment, GrammarConfig};
use unitgap::report::table6;

fn main() {
    let db = build_database(3);
    let mut stats = Vec::new();
    for blocks in 1..=3 {
        let cfg = GrammarConfig { n: 3, blocks, seed: 42, samples: 2_000 };
        stats.push((blocks, optimality_experiment(&cfg, &db)));
    }
    println!("{}", table6(&stats).render_text());
}
