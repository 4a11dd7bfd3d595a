//! Builds the n = 3 database and renders the gap distribution and mechanism
//! tables, flagging any cell that disagrees with the published reference.

use unitgap::db::build_database;
use unitgap::report::{table1, table4};

fn main() {
    let db = build_database(3);
    for report in [table1(&db), table4(&db)] {
        println!("{}", report.table.render_text());
        for m in &report.mismatches {
            println!("MISMATCH {m}");
        }
    }
}
