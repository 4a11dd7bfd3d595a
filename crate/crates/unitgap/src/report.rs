//! Table rendering with published reference values compiled in.
//!
//! Each renderer recomputes a published table from a database and compares
//! the hard-matched cells against the reference counts, so `report` doubles
//! as a regression test. Percentages are always recomputed from counts at
//! render time; the text format uses thousands separators, CSV stays raw.

use std::collections::HashMap;

use crate::aig::Aig;
use crate::analysis::{
    decomposition_census, gap_report, mechanism_census, sharing_function_census,
};
use crate::db::{FunctionDatabase, GapType};
use crate::grammar::SampleStats;
use crate::tt::TruthTable;

/// One table cell; numeric variants render differently per format.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Count(usize),
    /// Percentage in [0, 100], rendered with one decimal.
    Percent(f64),
    Text(String),
    Dash,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Count(c) => commas(*c),
            Cell::Percent(p) => format!("{:.1}%", p),
            Cell::Text(s) => s.clone(),
            Cell::Dash => "-".to_string(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Count(c) => c.to_string(),
            Cell::Percent(p) => format!("{:.1}", p),
            Cell::Text(s) => s.replace(',', ";"),
            Cell::Dash => "-".to_string(),
        }
    }
}

/// Formats with thousands separators: 20660 -> "20,660".
pub fn commas(x: usize) -> String {
    let digits = x.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// A rendered table: title, headers, rows of cells.
#[derive(Clone, Debug)]
pub struct ReportTable {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ReportTable {
    /// Aligned text: headers, rule, then rows; numeric columns padded left.
    pub fn render_text(&self) -> String {
        let cells: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
        let mut widths: Vec<usize> = self.headers.iter().map(String::len).collect();
        for row in &cells {
            for (i, c) in row.iter().enumerate() {
                widths[i] = widths[i].max(c.len());
            }
        }
        let mut out = format!("{}\n", self.title);
        let header: Vec<String> = self
            .headers
            .iter()
            .enumerate()
            .map(|(i, h)| format!("{:>width$}", h, width = widths[i]))
            .collect();
        out.push_str(&header.join("  "));
        out.push('\n');
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
        out.push('\n');
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{:>width$}", c, width = widths[i]))
                .collect();
            out.push_str(&line.join("  "));
            out.push('\n');
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// A table plus any disagreements with the hard-matched reference cells.
#[derive(Clone, Debug)]
pub struct RenderedReport {
    pub table: ReportTable,
    pub mismatches: Vec<String>,
}

impl RenderedReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Published gap distribution for n = 3 (table 1): (opt, gap-0, gap-1).
pub const TABLE1_N3: [(usize, usize, usize); 6] =
    [(1, 24, 0), (2, 64, 0), (3, 30, 0), (4, 80, 24), (5, 8, 0), (6, 16, 2)];

/// Published gap distribution for n = 4 (table 1): (opt, gap-0, gap-1).
pub const TABLE1_N4: [(usize, usize, usize); 6] = [
    (1, 48, 0),
    (2, 256, 0),
    (3, 940, 0),
    (4, 2048, 288),
    (5, 5344, 1120),
    (6, 8928, 1688),
];

/// Published n = 5 column of table 1, complete through opt 4.
pub const TABLE1_N5: [(usize, usize, usize); 4] =
    [(1, 80, 0), (2, 640, 0), (3, 4420, 0), (4, 24544, 1200)];

/// Published mechanism vocabulary (table 4): n, mechanisms, dual and CSE
/// percentages, functions tested, notes. Rows above n = 4 come from
/// synthesis runs this crate does not reproduce; they render as reference.
pub const TABLE4: [(usize, usize, f64, f64, usize, &str); 5] = [
    (3, 1, 100.0, 0.0, 26, "complete; XOR only"),
    (4, 1, 100.0, 0.0, 3096, "complete; XOR + MUX"),
    (5, 2, 51.6, 48.4, 31, "published reference (SAT synthesis)"),
    (6, 2, 68.0, 32.0, 165, "published reference (constructed + random)"),
    (7, 2, 78.0, 22.0, 60, "published reference (SAT probes)"),
];

/// Published Type A/B split at n = 4 (table 5): (opt, gap-1, A, B).
pub const TABLE5: [(usize, usize, usize, usize); 3] =
    [(4, 288, 288, 0), (5, 1120, 768, 352), (6, 1688, 1536, 152)];

/// Published grammar sample rates (table 6): (blocks, optimal%, trivial%, hard%).
pub const TABLE6: [(usize, f64, f64, f64); 3] =
    [(1, 100.0, 0.0, 0.0), (2, 98.7, 0.0, 7.0), (3, 97.0, 0.0, 10.5)];

/// Published mutation rates (table 7):
/// (blocks, mutant optimal%, mutant nontrivial%, same function%).
pub const TABLE7: [(usize, f64, f64, f64); 3] =
    [(1, 80.7, 89.7, 6.3), (2, 90.7, 95.0, 53.4), (3, 93.4, 96.1, 69.0)];

/// Gap distribution by opt level, checked cell by cell against table 1.
pub fn table1(db: &FunctionDatabase) -> RenderedReport {
    let reference: &[(usize, usize, usize)] = match db.n() {
        3 => &TABLE1_N3,
        4 => &TABLE1_N4,
        _ => &[],
    };
    let computed = gap_report(db);
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for row in &computed {
        let total = row.gap0 + row.gap1;
        rows.push(vec![
            Cell::Count(row.opt),
            Cell::Count(row.gap0),
            Cell::Count(row.gap1),
            Cell::Percent(100.0 * row.gap1 as f64 / total as f64),
        ]);
        match reference.iter().find(|(opt, _, _)| *opt == row.opt) {
            Some((_, g0, g1)) => {
                if (row.gap0, row.gap1) != (*g0, *g1) {
                    mismatches.push(format!(
                        "table1 n={} opt={}: computed {}/{}, published {}/{}",
                        db.n(),
                        row.opt,
                        row.gap0,
                        row.gap1,
                        g0,
                        g1
                    ));
                }
            }
            None => mismatches.push(format!(
                "table1 n={} opt={}: row absent from the published table",
                db.n(),
                row.opt
            )),
        }
    }
    if !reference.is_empty() && computed.len() != reference.len() {
        mismatches.push(format!(
            "table1 n={}: computed {} rows, published {}",
            db.n(),
            computed.len(),
            reference.len()
        ));
    }
    RenderedReport {
        table: ReportTable {
            title: format!("Gap distribution by opt, n = {}", db.n()),
            headers: ["opt", "gap=0", "gap=1", "%gap=1"].map(String::from).to_vec(),
            rows,
        },
        mismatches,
    }
}

/// Sharing census at n = 3 under two units: distinct root decompositions
/// and whole functions with any non-tree optimal circuit.
///
/// Hard-matched cells: zero sharing below opt 4 and at opt 5 (both units),
/// and all-sharing at opt 6 under the function unit. The published opt-4
/// share (49%) is not reproducible from the complete enumeration under any
/// counting unit we could construct (root, pair, gate, circuit, and
/// function units give 11% to 23%), and the published totals contradict
/// each other; those cells render beside the computed ones as reference.
pub fn table3(
    db: &FunctionDatabase,
    all_optimal: &HashMap<TruthTable, Vec<Aig>>,
) -> RenderedReport {
    let roots = decomposition_census(db, all_optimal);
    let functions = sharing_function_census(db, all_optimal);
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for (row, frow) in roots.iter().zip(&functions) {
        assert_eq!(row.opt, frow.opt);
        let share = 100.0 * row.s1 as f64 / (row.s0 + row.s1) as f64;
        let fshare = 100.0 * frow.s1 as f64 / (frow.s0 + frow.s1) as f64;
        let published: &str = match row.opt {
            2 | 3 | 5 => "0%",
            4 => "49%",
            6 => "100%",
            _ => "-",
        };
        rows.push(vec![
            Cell::Count(row.opt),
            Cell::Count(row.s0),
            Cell::Count(row.s1),
            Cell::Percent(share),
            Cell::Count(frow.s1),
            Cell::Percent(fshare),
            Cell::Text(published.to_string()),
        ]);
        match row.opt {
            2 | 3 | 5 => {
                if row.s1 != 0 || frow.s1 != 0 {
                    mismatches.push(format!(
                        "table3 opt={}: sharing found below the threshold ({} roots, {} functions)",
                        row.opt, row.s1, frow.s1
                    ));
                }
            }
            6 => {
                if frow.s0 != 0 {
                    mismatches.push(format!(
                        "table3 opt=6: {} functions with a tree-shaped optimal circuit, published 0",
                        frow.s0
                    ));
                }
            }
            _ => {}
        }
    }
    RenderedReport {
        table: ReportTable {
            title: "Sharing at optimal circuit roots and per function, n = 3".to_string(),
            headers: ["opt", "s=0", "s>=1", "%s>=1", "fns sharing", "%fns", "published"]
                .map(String::from)
                .to_vec(),
            rows,
        },
        mismatches,
    }
}

/// Mechanism vocabulary. The row for the database's n is computed from
/// stored witnesses and rendered beside the published mix; other rows
/// render as published reference.
///
/// Hard-matching covers the tested count at every n and the full row at
/// n = 3. At n = 4 the published row claims a pure dual-polarity mix, but
/// 384 of the 3,096 gap-1 functions have lexicographically first
/// witnesses whose shared gate reuses at equal polarity, so the
/// witness-level mix is 87.6/12.4. The mix cells render measured values
/// with the published figures beside them instead of failing the report;
/// `rep_mechanism_survey` settles what the full circuit population does.
pub fn table4(db: &FunctionDatabase) -> RenderedReport {
    let census = mechanism_census(db);
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for &(n, mechs, dual, cse, tested, notes) in TABLE4.iter() {
        if n == db.n() {
            let computed_mechs = (census.dual > 0) as usize + (census.cse > 0) as usize;
            let dual_pct = 100.0 * census.dual as f64 / census.gap1 as f64;
            let cse_pct = 100.0 * census.cse as f64 / census.gap1 as f64;
            rows.push(vec![
                Cell::Count(n),
                Cell::Count(computed_mechs),
                Cell::Percent(dual_pct),
                Cell::Percent(cse_pct),
                Cell::Count(census.gap1),
                Cell::Text(format!("{:.1}/{:.1}", dual, cse)),
                Cell::Text(notes.to_string()),
            ]);
            if census.gap1 != tested {
                mismatches.push(format!(
                    "table4 n={}: tested {}, published {}",
                    n, census.gap1, tested
                ));
            }
            if n == 3 {
                if (dual_pct - dual).abs() > 1e-9 || (cse_pct - cse).abs() > 1e-9 {
                    mismatches.push(format!(
                        "table4 n={}: mix {:.1}%/{:.1}%, published {:.1}%/{:.1}%",
                        n, dual_pct, cse_pct, dual, cse
                    ));
                }
                if computed_mechs != mechs {
                    mismatches.push(format!(
                        "table4 n={}: {} mechanisms, published {}",
                        n, computed_mechs, mechs
                    ));
                }
            }
        } else {
            rows.push(vec![
                Cell::Count(n),
                Cell::Count(mechs),
                Cell::Percent(dual),
                Cell::Percent(cse),
                Cell::Count(tested),
                Cell::Dash,
                Cell::Text(notes.to_string()),
            ]);
        }
    }
    RenderedReport {
        table: ReportTable {
            title: "Sharing mechanisms by input count".to_string(),
            headers: ["n", "mechanisms", "dual", "cse", "tested", "published mix", "notes"]
                .map(String::from)
                .to_vec(),
            rows,
        },
        mismatches,
    }
}

/// Type A/B split of gap-1 functions, n = 4 only, hard-matched.
pub fn table5(db: &FunctionDatabase) -> RenderedReport {
    assert_eq!(db.n(), 4, "the type split is published for n = 4");
    let mut by_opt: Vec<(usize, usize, usize)> = Vec::new();
    for r in db.records() {
        if r.gap != Some(1) {
            continue;
        }
        let opt = r.opt.unwrap();
        let slot = match by_opt.iter_mut().find(|(o, _, _)| *o == opt) {
            Some(s) => s,
            None => {
                by_opt.push((opt, 0, 0));
                by_opt.last_mut().unwrap()
            }
        };
        match r.gap_type.unwrap() {
            GapType::A => slot.1 += 1,
            GapType::B => slot.2 += 1,
        }
    }
    by_opt.sort_unstable();
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for (opt, a, b) in &by_opt {
        rows.push(vec![
            Cell::Count(*opt),
            Cell::Count(a + b),
            Cell::Count(*a),
            Cell::Count(*b),
        ]);
        match TABLE5.iter().find(|(o, _, _, _)| o == opt) {
            Some((_, gap1, ta, tb)) => {
                if (a + b, *a, *b) != (*gap1, *ta, *tb) {
                    mismatches.push(format!(
                        "table5 opt={}: computed {}/{}/{}, published {}/{}/{}",
                        opt,
                        a + b,
                        a,
                        b,
                        gap1,
                        ta,
                        tb
                    ));
                }
            }
            None => mismatches.push(format!("table5 opt={}: row not published", opt)),
        }
    }
    RenderedReport {
        table: ReportTable {
            title: "Type A vs Type B at n = 4".to_string(),
            headers: ["opt", "gap=1", "Type A", "Type B"].map(String::from).to_vec(),
            rows,
        },
        mismatches,
    }
}

/// Grammar sample rates beside the published columns; band checks live in
/// the acceptance suite, so this renders without hard matching.
pub fn table6(stats: &[(usize, SampleStats)]) -> ReportTable {
    let mut rows = Vec::new();
    for (blocks, s) in stats {
        let published = TABLE6.iter().find(|(b, _, _, _)| b == blocks);
        rows.push(vec![
            Cell::Count(*blocks),
            Cell::Count(s.samples),
            Cell::Percent(100.0 * s.optimal_rate()),
            Cell::Percent(100.0 * s.trivial_rate()),
            Cell::Percent(100.0 * s.hard_rate()),
            match published {
                Some((_, o, t, h)) => Cell::Text(format!("{o}/{t}/{h}")),
                None => Cell::Dash,
            },
        ]);
    }
    ReportTable {
        title: "Grammar sample optimality by block count".to_string(),
        headers: ["blocks", "samples", "optimal", "trivial", "hard", "published"]
            .map(String::from)
            .to_vec(),
        rows,
    }
}

/// Mutation robustness rates beside the published columns.
pub fn table7(stats: &[(usize, SampleStats)]) -> ReportTable {
    let mut rows = Vec::new();
    for (blocks, s) in stats {
        let published = TABLE7.iter().find(|(b, _, _, _)| b == blocks);
        rows.push(vec![
            Cell::Count(*blocks),
            Cell::Count(s.samples),
            Cell::Percent(100.0 * s.mutant_optimal_rate()),
            Cell::Percent(100.0 * s.mutant_nontrivial_rate()),
            Cell::Percent(100.0 * s.same_function_rate()),
            match published {
                Some((_, o, nt, sf)) => Cell::Text(format!("{o}/{nt}/{sf}")),
                None => Cell::Dash,
            },
        ]);
    }
    ReportTable {
        title: "Mutation robustness by block count".to_string(),
        headers: [
            "blocks",
            "trials",
            "mutant optimal",
            "mutant nontrivial",
            "same function",
            "published",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::db::build_database;
    use crate::synth::all_optimal_circuits;
    use std::sync::OnceLock;

    fn db3() -> &'static FunctionDatabase {
        static DB: OnceLock<FunctionDatabase> = OnceLock::new();
        DB.get_or_init(|| build_database(3))
    }

    #[test]
    fn commas_group_thousands() {
        assert_eq!(commas(0), "0");
        assert_eq!(commas(999), "999");
        assert_eq!(commas(1000), "1,000");
        assert_eq!(commas(20660), "20,660");
        assert_eq!(commas(1234567), "1,234,567");
    }

    #[test]
    fn table1_n3_matches_published() {
        let report = table1(db3());
        assert!(report.ok(), "{:?}", report.mismatches);
        assert_eq!(report.table.rows.len(), 6);
        // Row opt=6: 16 gap-0, 2 gap-1, 11.1%.
        let last = &report.table.rows[5];
        assert_eq!(last[1], Cell::Count(16));
        assert_eq!(last[2], Cell::Count(2));
        assert_eq!(last[3].text(), "11.1%");
    }

    #[test]
    fn table4_n3_row_is_all_dual() {
        let report = table4(db3());
        assert!(report.ok(), "{:?}", report.mismatches);
        let row = &report.table.rows[0];
        assert_eq!(row[2].text(), "100.0%");
        assert_eq!(row[3].text(), "0.0%");
        assert_eq!(row[4], Cell::Count(26));
        // Reference rows render untouched.
        assert_eq!(report.table.rows.len(), 5);
    }

    #[test]
    fn table3_matches_the_published_pattern() {
        let db = db3();
        let all = all_optimal_circuits(3, 6, |tt| db.opt(tt));
        let report = table3(db, &all);
        assert!(report.ok(), "{:?}", report.mismatches);
    }

    #[test]
    fn text_and_csv_rendering() {
        let report = table1(db3());
        let text = report.table.render_text();
        assert!(text.contains("opt"));
        assert!(text.contains("11.1%"));
        let csv = report.table.render_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "opt,gap=0,gap=1,%gap=1");
        assert_eq!(lines.next().unwrap(), "1,24,0,0.0");
    }

    #[test]
    fn mismatches_name_the_offending_cell() {
        let mut db = db3().clone();
        // Corrupt one record's gap and confirm the report notices.
        let mut records = db.records().to_vec();
        let idx = records.iter().position(|r| r.gap == Some(1)).unwrap();
        records[idx].gap = Some(0);
        db = FunctionDatabase::from_records_for_tests(3, records);
        let report = table1(&db);
        assert!(!report.ok());
        assert!(report.mismatches[0].contains("table1"));
    }
}
