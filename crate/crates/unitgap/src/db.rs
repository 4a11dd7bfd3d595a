//! Complete opt/tree/gap databases for small input counts.
//!
//! A [`FunctionDatabase`] holds one [`OptRecord`] per truth table at a fixed
//! `n`. Building one synthesizes a single optimal witness per NPN
//! representative, expands it to every orbit member by transforming the
//! witness circuit, then closes tree costs, gaps, and the gap-1
//! classifications over the whole function space in one pair sweep.
//!
//! At n = 4 synthesis stops at [`OPT_HORIZON`] gates. Records whose optimum
//! lies beyond the horizon keep their essential count and NPN representative
//! but carry empty opt/tree/gap cells and no witness; the published reference
//! tables only speak about opt <= 6 and the horizon covers all of them.

use std::fmt;
use std::fs;
use std::path::Path;

use crate::aig::Aig;
use crate::aiger::{from_aiger, to_aiger};
use crate::analysis::{classify_mechanism, Mechanism};
use crate::npn::all_transforms;
use crate::synth::exact_opt;
use crate::tt::TruthTable;

/// Largest gate count the database build will prove exactly.
pub const OPT_HORIZON: usize = 6;

/// Structural type of a gap-1 function.
///
/// Type A: some decomposition with both children outside {0, 1, f, !f}
/// costs opt+1. Type B: every such decomposition costs opt+2 or more.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GapType {
    A,
    B,
}

impl fmt::Display for GapType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapType::A => write!(f, "A"),
            GapType::B => write!(f, "B"),
        }
    }
}

/// One database row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptRecord {
    pub tt: TruthTable,
    /// Exact minimum gate count; None beyond the synthesis horizon.
    pub opt: Option<usize>,
    /// min over f = a AND b and f = NAND(a, b) of 1 + opt(a) + opt(b); 0 for trivial f.
    pub tree: Option<usize>,
    /// tree - opt.
    pub gap: Option<u8>,
    /// Number of variables the function depends on.
    pub essential: usize,
    pub npn_rep: TruthTable,
    /// A or B for gap-1 records, None otherwise.
    pub gap_type: Option<GapType>,
    /// Sharing mechanism of the stored witness for gap-1 records.
    pub mechanism: Option<Mechanism>,
    /// One optimal circuit, lexicographically smallest at the representative.
    pub witness: Option<Aig>,
}

/// Frozen map from truth table to [`OptRecord`] at a fixed input count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionDatabase {
    n: usize,
    records: Vec<OptRecord>,
}

impl FunctionDatabase {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The record for `tt`.
    pub fn record(&self, tt: &TruthTable) -> &OptRecord {
        assert_eq!(tt.num_vars(), self.n, "table arity differs from database");
        &self.records[tt.bits() as usize]
    }

    /// All records, ascending by truth table.
    pub fn records(&self) -> &[OptRecord] {
        &self.records
    }

    /// Exact optimum, if within the horizon.
    pub fn opt(&self, tt: &TruthTable) -> Option<usize> {
        self.record(tt).opt
    }

    /// Number of NPN classes represented.
    pub fn num_classes(&self) -> usize {
        self.records.iter().filter(|r| r.npn_rep == r.tt).count()
    }

    /// Assembles a database from raw records, bypassing the build checks.
    #[doc(hidden)]
    pub fn from_records_for_tests(n: usize, records: Vec<OptRecord>) -> Self {
        FunctionDatabase { n, records }
    }
}

/// Builds the complete database at `n`.
///
/// Panics if a record violates the unit-gap bound or a gap-1 witness lacks a
/// shared gate; both would falsify published theorems and halt the run.
pub fn build_database(n: usize) -> FunctionDatabase {
    assert!((1..=4).contains(&n), "databases cover 1 <= n <= 4");
    let size = 1usize << (1 << n);
    let ones = crate::tt::mask(n);
    let transforms = all_transforms(n);

    let mut opt: Vec<Option<usize>> = vec![None; size];
    let mut witness: Vec<Option<Aig>> = vec![None; size];
    let mut rep_bits: Vec<u64> = vec![0; size];
    let mut seen = vec![false; size];

    for bits in 0..size as u64 {
        if seen[bits as usize] {
            continue;
        }
        let rep = TruthTable::from_bits(n, bits);
        let synthesized = exact_opt(&rep, OPT_HORIZON).ok();
        for t in &transforms {
            let member = t.apply(&rep);
            let idx = member.bits() as usize;
            if seen[idx] {
                continue;
            }
            seen[idx] = true;
            rep_bits[idx] = bits;
            if let Some((k, ref w)) = synthesized {
                opt[idx] = Some(k);
                witness[idx] = Some(w.transform(t));
            }
        }
    }

    // Tree pass: bucket by opt, relax both polarities of every product whose
    // child costs can still land within the horizon.
    const INF: usize = usize::MAX / 2;
    let mut tree = vec![INF; size];
    let mut strict = vec![INF; size];
    let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); OPT_HORIZON + 1];
    for bits in 0..size as u64 {
        if let Some(k) = opt[bits as usize] {
            buckets[k].push(bits);
        }
    }
    for ka in 0..=OPT_HORIZON {
        for kb in ka..=OPT_HORIZON {
            if ka + kb + 1 > OPT_HORIZON + 1 {
                break;
            }
            let cost = 1 + ka + kb;
            for (i, &a) in buckets[ka].iter().enumerate() {
                let start = if ka == kb { i } else { 0 };
                for &b in &buckets[kb][start..] {
                    let p = (a & b) as usize;
                    let q = (!(a & b) & ones) as usize;
                    if cost < tree[p] {
                        tree[p] = cost;
                    }
                    if cost < tree[q] {
                        tree[q] = cost;
                    }
                    let pu = p as u64;
                    let qu = q as u64;
                    let degenerate = a == 0
                        || b == 0
                        || a == ones
                        || b == ones
                        || a == pu
                        || b == pu
                        || a == qu
                        || b == qu;
                    if !degenerate {
                        if cost < strict[p] {
                            strict[p] = cost;
                        }
                        if cost < strict[q] {
                            strict[q] = cost;
                        }
                    }
                }
            }
        }
    }

    let mut records = Vec::with_capacity(size);
    for bits in 0..size as u64 {
        let idx = bits as usize;
        let tt = TruthTable::from_bits(n, bits);
        let (essential, _) = tt.essential_variables();
        let opt_k = opt[idx];
        let (tree_k, gap_k, gap_type, mechanism) = match opt_k {
            None => (None, None, None, None),
            Some(k) => {
                let t = if tt.is_trivial() { 0 } else { tree[idx] };
                assert!(t >= k && t <= k + 1, "unit gap violated at {}", tt.to_hex());
                let g = (t - k) as u8;
                let (ty, mech) = if g == 1 {
                    assert!(strict[idx] > k, "gap-1 function with strict tree at opt");
                    let ty = if strict[idx] == k + 1 { GapType::A } else { GapType::B };
                    let shape = classify_mechanism(witness[idx].as_ref().unwrap());
                    assert!(!shape.is_tree(), "gap-1 witness must contain a shared gate");
                    let mech = shape
                        .mechanism()
                        .expect("gap-1 witness mixes sharing mechanisms");
                    (Some(ty), Some(mech))
                } else {
                    (None, None)
                };
                (Some(t), Some(g), ty, mech)
            }
        };
        records.push(OptRecord {
            tt,
            opt: opt_k,
            tree: tree_k,
            gap: gap_k,
            essential,
            npn_rep: TruthTable::from_bits(n, rep_bits[idx]),
            gap_type,
            mechanism,
            witness: witness[idx].take(),
        });
    }

    FunctionDatabase { n, records }
}

/// Errors raised while reading a database from disk.
#[derive(Debug, thiserror::Error)]
pub enum DbError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}

fn format_err(line: usize, msg: impl Into<String>) -> DbError {
    DbError::Format { line, msg: msg.into() }
}

fn cell_opt(v: Option<usize>) -> String {
    v.map_or_else(|| "-".to_string(), |k| k.to_string())
}

impl FunctionDatabase {
    /// Serializes the CSV table. Byte-identical across rebuilds.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# unitgap-db v1 n={}\n", self.n));
        out.push_str("tt_hex,opt,tree,gap,essential,npn_rep_hex,type,mechanism\n");
        for r in &self.records {
            let gap = r.gap.map_or_else(|| "-".to_string(), |g| g.to_string());
            let ty = r.gap_type.map_or_else(|| "-".to_string(), |t| t.to_string());
            let mech = r.mechanism.map_or_else(|| "-".to_string(), |m| m.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.tt.to_hex(),
                cell_opt(r.opt),
                cell_opt(r.tree),
                gap,
                r.essential,
                r.npn_rep.to_hex(),
                ty,
                mech,
            ));
        }
        out
    }

    /// Serializes the witness companion: one AIGER block per row, blank-line
    /// separated, `-` standing in for rows beyond the horizon.
    pub fn to_witness_text(&self) -> String {
        let blocks: Vec<String> = self
            .records
            .iter()
            .map(|r| match &r.witness {
                Some(w) => to_aiger(w),
                None => "-\n".to_string(),
            })
            .collect();
        blocks.join("\n")
    }

    /// Writes both files.
    pub fn save(&self, db_path: &Path, witness_path: &Path) -> Result<(), std::io::Error> {
        fs::write(db_path, self.to_csv())?;
        fs::write(witness_path, self.to_witness_text())?;
        Ok(())
    }

    /// Reads both files back. Checks shape (header, row order, witness
    /// arity), not semantics; `verify` owns the semantic checks so that a
    /// corrupted cell is reported as a verification failure, not a load error.
    pub fn load(db_path: &Path, witness_path: &Path) -> Result<FunctionDatabase, DbError> {
        let text = fs::read_to_string(db_path)?;
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or_else(|| format_err(1, "empty file"))?;
        let n: usize = first
            .strip_prefix("# unitgap-db v1 n=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format_err(1, "missing `# unitgap-db v1 n=<k>` header"))?;
        if !(1..=4).contains(&n) {
            return Err(format_err(1, format!("unsupported n={n}")));
        }
        let (_, header) = lines.next().ok_or_else(|| format_err(2, "missing column header"))?;
        if header != "tt_hex,opt,tree,gap,essential,npn_rep_hex,type,mechanism" {
            return Err(format_err(2, "unexpected column header"));
        }

        let witness_text = fs::read_to_string(witness_path)?;
        let mut blocks = witness_text.split("\n\n");

        let size = 1usize << (1 << n);
        let mut records = Vec::with_capacity(size);
        for (lineno, line) in lines {
            let lineno = lineno + 1;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(format_err(lineno, format!("expected 8 fields, found {}", fields.len())));
            }
            let tt = TruthTable::from_hex(n, fields[0])
                .map_err(|e| format_err(lineno, format!("bad tt_hex: {e}")))?;
            if tt.bits() != records.len() as u64 {
                return Err(format_err(lineno, "rows must ascend by truth table"));
            }
            let parse_cell = |field: &str, what: &str| -> Result<Option<usize>, DbError> {
                if field == "-" {
                    Ok(None)
                } else {
                    field
                        .parse()
                        .map(Some)
                        .map_err(|_| format_err(lineno, format!("bad {what} cell")))
                }
            };
            let opt = parse_cell(fields[1], "opt")?;
            let tree = parse_cell(fields[2], "tree")?;
            let gap = parse_cell(fields[3], "gap")?.map(|g| g as u8);
            let essential: usize = fields[4]
                .parse()
                .map_err(|_| format_err(lineno, "bad essential cell"))?;
            let npn_rep = TruthTable::from_hex(n, fields[5])
                .map_err(|e| format_err(lineno, format!("bad npn_rep_hex: {e}")))?;
            let gap_type = match fields[6] {
                "-" => None,
                "A" => Some(GapType::A),
                "B" => Some(GapType::B),
                other => return Err(format_err(lineno, format!("bad type cell `{other}`"))),
            };
            let mechanism = match fields[7] {
                "-" => None,
                "dual" => Some(Mechanism::DualPolarity),
                "cse" => Some(Mechanism::Cse),
                other => return Err(format_err(lineno, format!("bad mechanism cell `{other}`"))),
            };
            let block = blocks
                .next()
                .ok_or_else(|| format_err(lineno, "witness file has fewer blocks than rows"))?;
            let trimmed = block.trim_end_matches('\n');
            let witness = if trimmed == "-" {
                None
            } else {
                let w = from_aiger(block)
                    .map_err(|e| format_err(lineno, format!("witness block: {e}")))?;
                if w.num_inputs() != n {
                    return Err(format_err(lineno, "witness arity differs from database"));
                }
                Some(w)
            };
            records.push(OptRecord {
                tt,
                opt,
                tree,
                gap,
                essential,
                npn_rep,
                gap_type,
                mechanism,
                witness,
            });
        }
        if records.len() != size {
            return Err(format_err(
                2 + records.len(),
                format!("expected {size} rows, found {}", records.len()),
            ));
        }
        Ok(FunctionDatabase { n, records })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::oracle_opt;

    #[test]
    fn database_at_n2_matches_oracle() {
        let db = build_database(2);
        assert_eq!(db.len(), 16);
        for r in db.records() {
            assert_eq!(r.opt, Some(oracle_opt(&r.tt)));
            assert!(r.gap == Some(0) || r.gap == Some(1));
        }
        let and2 = TruthTable::from_bits(2, 0x8);
        assert_eq!(db.record(&and2).opt, Some(1));
        assert_eq!(db.record(&and2).tree, Some(1));
        let xor2 = TruthTable::from_bits(2, 0x6);
        assert_eq!(db.record(&xor2).opt, Some(3));
        assert_eq!(db.record(&xor2).tree, Some(3));
        assert_eq!(db.record(&xor2).gap, Some(0));
    }

    #[test]
    fn database_at_n3_matches_published_counts() {
        let db = build_database(3);
        assert_eq!(db.len(), 256);
        assert_eq!(db.num_classes(), 14);

        let mut by_opt_gap = std::collections::BTreeMap::new();
        for r in db.records() {
            *by_opt_gap.entry((r.opt.unwrap(), r.gap.unwrap())).or_insert(0usize) += 1;
        }
        assert_eq!(by_opt_gap.get(&(1, 0)), Some(&24));
        assert_eq!(by_opt_gap.get(&(2, 0)), Some(&64));
        assert_eq!(by_opt_gap.get(&(3, 0)), Some(&30));
        assert_eq!(by_opt_gap.get(&(4, 0)), Some(&80));
        assert_eq!(by_opt_gap.get(&(4, 1)), Some(&24));
        assert_eq!(by_opt_gap.get(&(5, 0)), Some(&8));
        assert_eq!(by_opt_gap.get(&(6, 0)), Some(&16));
        assert_eq!(by_opt_gap.get(&(6, 1)), Some(&2));
    }

    #[test]
    fn witnesses_compute_their_row() {
        let db = build_database(3);
        for r in db.records() {
            let w = r.witness.as_ref().unwrap();
            assert_eq!(w.truth_table(), r.tt);
            assert_eq!(w.num_gates(), r.opt.unwrap());
        }
    }

    #[test]
    fn parity3_row() {
        let db = build_database(3);
        let parity = TruthTable::from_bits(3, 0x96);
        let r = db.record(&parity);
        assert_eq!(r.opt, Some(6));
        assert_eq!(r.tree, Some(7));
        assert_eq!(r.gap, Some(1));
        assert_eq!(r.essential, 3);
        assert_eq!(r.gap_type, Some(GapType::B));
        assert_eq!(r.mechanism, Some(Mechanism::DualPolarity));
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let db = build_database(2);
        let dir = tempfile::tempdir().unwrap();
        let db_path = dir.path().join("db.csv");
        let wit_path = dir.path().join("db.wit.aag");
        db.save(&db_path, &wit_path).unwrap();
        let loaded = FunctionDatabase::load(&db_path, &wit_path).unwrap();
        assert_eq!(loaded, db);
        let csv1 = fs::read(&db_path).unwrap();
        let loaded_again = loaded.to_csv();
        assert_eq!(csv1, loaded_again.into_bytes());
        assert_eq!(db.to_witness_text(), loaded.to_witness_text());
    }

    #[test]
    fn load_reports_misordered_rows() {
        let db = build_database(2);
        let dir = tempfile::tempdir().unwrap();
        let db_path = dir.path().join("db.csv");
        let wit_path = dir.path().join("db.wit.aag");
        db.save(&db_path, &wit_path).unwrap();
        let text = fs::read_to_string(&db_path).unwrap();
        let mut lines: Vec<&str> = text.lines().collect();
        lines.swap(2, 3);
        let swapped = lines.join("\n");
        fs::write(&db_path, swapped).unwrap();
        let err = FunctionDatabase::load(&db_path, &wit_path).unwrap_err();
        match err {
            DbError::Format { line: 3, .. } => {}
            other => panic!("expected row-order error at line 3, got {other:?}"),
        }
    }
}
