//! Forward enumeration at n = 3: how many functions first appear at each
//! gate count, and how many of them are reachable one level early as trees.

use unitgap::synth::{forward_enumerate, slice_gap1};

fn main() {
    let fwd = forward_enumerate(3, 6);
    for (k, level) in fwd.levels.iter().enumerate() {
        print!("level {k}: {:>4} functions", level.len());
        if k >= 1 {
            print!("  gap-1: {}", slice_gap1(&fwd, k));
        }
        println!();
    }
    println!("total: {}", fwd.total_functions());
}
