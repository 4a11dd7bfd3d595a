//! Mutates sampled circuits once and measures how often the mutant is still
//! optimal, still nontrivial, and still the same function.

use unitgap::db::build_database;
use unitgap::grammar::{robustness_experiment, GrammarConfig};
use unitgap::report::table7;

fn main() {
    let db = build_database(3);
    let mut stats = Vec::new();
    for blocks in 1..=3 {
        let cfg = GrammarConfig { n: 3, blocks, seed: 42, samples: 2_000 };
        stats.push((blocks, robustness_experiment(&cfg, &db)));
    }
    println!("{}", table7(&stats).render_text());
}
