//! Command-line surface over the unitgap library.
//!
//! Subcommands mirror the library modules: database construction and
//! queries, table reports with compiled-in reference values, theorem
//! verification, one-off synthesis, grammar experiments, greedy
//! rewriting, and raw forward enumeration. Progress goes to stderr and
//! results to stdout, byte-identical for fixed flags and seeds.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O
//! error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use unitgap::aig::Aig;
use unitgap::aiger::{from_aiger, to_aiger};
use unitgap::analysis::{
    classify_mechanism, rep_mechanism_survey, verify_cells, verify_decomposition_formula,
    verify_gate_elimination, verify_mechanisms, verify_threshold, verify_tree_theorem,
    verify_unit_gap, VerifyReport,
};
use unitgap::db::{build_database, FunctionDatabase, OPT_HORIZON};
use unitgap::grammar::{optimality_experiment, robustness_experiment, GrammarConfig};
use unitgap::npn::npn_orbit;
use unitgap::report::{table1, table3, table4, table5, table6, table7, RenderedReport};
use unitgap::rewrite::{landscape_survey, run_to_fixed_point, RewriteMove};
use unitgap::synth::{all_optimal_circuits, exact_opt, forward_enumerate, slice_gap1};
use unitgap::tt::TruthTable;

#[derive(Parser)]
#[command(name = "unitgap", version, about = "Exact AIG sizes, tree costs, and the formula/circuit gap for small Boolean functions", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// RNG seed for stochastic subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker cap for parallel sections; output bytes do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Table output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build or query the exact-synthesis database.
    Db {
        #[command(subcommand)]
        cmd: DbCmd,
    },
    /// Render a published table from a database, checking hard-matched cells.
    Report {
        /// One of: table1, table3, table4, table5.
        table: TableId,
        #[arg(long)]
        n: usize,
        /// Database CSV; the witness companion sits next to it as .aag.
        #[arg(long)]
        db: PathBuf,
    },
    /// Exact synthesis of one function, no database required.
    Synth {
        #[arg(long)]
        n: usize,
        /// Truth table, 2^n/4 hex digits, row 0 in the least significant bit.
        #[arg(long)]
        tt: String,
        /// Also write the witness to this path in ASCII AIGER.
        #[arg(long)]
        emit_aag: Option<PathBuf>,
    },
    /// Print one function's record and the sharing shape of its witness.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tt: String,
        #[arg(long)]
        db: PathBuf,
    },
    /// Run every theorem verifier against a database.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        db: PathBuf,
    },
    /// Grammar-sampling experiments at n = 3.
    Grammar {
        #[command(subcommand)]
        cmd: GrammarCmd,
    },
    /// Greedy cone rewriting.
    Rewrite {
        #[command(subcommand)]
        cmd: RewriteCmd,
    },
    /// Forward-enumerate exact synthesis levels without building a database.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_gates: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableId {
    Table1,
    Table3,
    Table4,
    Table5,
}

#[derive(Subcommand)]
enum DbCmd {
    /// Build the complete database for one n and write it to disk.
    Build {
        #[arg(long)]
        n: usize,
        /// Output CSV path; the witness file lands next to it as .aag.
        #[arg(long)]
        db: PathBuf,
        /// Witness file path override.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Print one record with its witness circuit.
    Query {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tt: String,
        #[arg(long)]
        db: PathBuf,
    },
}

#[derive(Subcommand)]
enum GrammarCmd {
    /// Sample block circuits and rate how many land on optimal size.
    Optimality {
        #[arg(long)]
        blocks: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        db: PathBuf,
    },
    /// Mutate sampled circuits and rate what survives.
    Robustness {
        #[arg(long)]
        blocks: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        db: PathBuf,
    },
}

#[derive(Subcommand)]
enum RewriteCmd {
    /// Descend from a circuit in an AIGER file to a cone-replacement fixed point.
    Run {
        #[arg(long)]
        aag: PathBuf,
        #[arg(long)]
        db: PathBuf,
    },
    /// Random-start descent survey over the nontrivial NPN classes.
    Survey {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        db: PathBuf,
    },
}

enum CliError {
    Usage(String),
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<unitgap::db::DbError> for CliError {
    fn from(e: unitgap::db::DbError) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("usage error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        // Caps every rayon section; builders after the first are no-ops.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("io error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Db { cmd } => match cmd {
            DbCmd::Build { n, db, witness } => cmd_db_build(n, &db, witness.as_deref()),
            DbCmd::Query { n, tt, db } => cmd_query(n, &tt, &db),
        },
        Command::Report { table, n, db } => cmd_report(table, n, &db, cli.format),
        Command::Synth { n, tt, emit_aag } => cmd_synth(n, &tt, emit_aag.as_deref()),
        Command::Classify { n, tt, db } => cmd_classify(n, &tt, &db),
        Command::Verify { n, db } => cmd_verify(n, &db),
        Command::Grammar { cmd } => match cmd {
            GrammarCmd::Optimality { blocks, samples, db } => {
                cmd_grammar(&db, blocks, samples, cli.seed, cli.format, false)
            }
            GrammarCmd::Robustness { blocks, trials, db } => {
                cmd_grammar(&db, blocks, trials, cli.seed, cli.format, true)
            }
        },
        Command::Rewrite { cmd } => match cmd {
            RewriteCmd::Run { aag, db } => cmd_rewrite_run(&aag, &db),
            RewriteCmd::Survey { n, trials, db } => {
                cmd_rewrite_survey(n, trials, cli.seed, &db, cli.format)
            }
        },
        Command::Enumerate { n, max_gates } => cmd_enumerate(n, max_gates),
    }
}

fn witness_path(db_path: &Path, explicit: Option<&Path>) -> PathBuf {
    explicit.map_or_else(|| db_path.with_extension("aag"), Path::to_path_buf)
}

fn load_db(n: usize, db_path: &Path) -> Result<FunctionDatabase, CliError> {
    let db = FunctionDatabase::load(db_path, &witness_path(db_path, None))?;
    if db.n() != n {
        return Err(CliError::Usage(format!(
            "--n {n} does not match the database ({} inputs)",
            db.n()
        )));
    }
    Ok(db)
}

fn parse_tt(n: usize, hex: &str) -> Result<TruthTable, CliError> {
    if !(1..=5).contains(&n) {
        return Err(CliError::Usage(format!("--n {n} is out of range (1..=5)")));
    }
    TruthTable::from_hex(n, hex).map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_db_build(n: usize, db_path: &Path, witness: Option<&Path>) -> Result<u8, CliError> {
    if !(1..=4).contains(&n) {
        return Err(CliError::Usage(format!("db build covers n in 1..=4, got {n}")));
    }
    eprintln!("building the complete n={n} database (minutes at n=4)");
    let start = Instant::now();
    let db = build_database(n);
    eprintln!("built in {:.1?}", start.elapsed());
    db.save(db_path, &witness_path(db_path, witness))?;
    println!("records {}", db.len());
    println!("classes {}", db.num_classes());
    Ok(0)
}

fn print_record(db: &FunctionDatabase, tt: &TruthTable) {
    let r = db.record(tt);
    let cell = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |k| k.to_string());
    println!("tt        {}", r.tt.to_hex());
    println!("opt       {}", cell(r.opt));
    println!("tree      {}", cell(r.tree));
    println!("gap       {}", r.gap.map_or_else(|| "-".to_string(), |g| g.to_string()));
    println!("essential {}", r.essential);
    println!("npn_rep   {}", r.npn_rep.to_hex());
    println!("type      {}", r.gap_type.map_or_else(|| "-".to_string(), |t| t.to_string()));
    println!("mechanism {}", r.mechanism.map_or_else(|| "-".to_string(), |m| m.to_string()));
}

fn cmd_query(n: usize, tt_hex: &str, db_path: &Path) -> Result<u8, CliError> {
    let tt = parse_tt(n, tt_hex)?;
    let db = load_db(n, db_path)?;
    print_record(&db, &tt);
    match &db.record(&tt).witness {
        Some(w) => {
            println!("witness:");
            print!("{}", to_aiger(w));
        }
        None => println!("witness:  none (beyond the synthesis horizon)"),
    }
    Ok(0)
}

fn print_report(rendered: &RenderedReport, format: Format) -> u8 {
    match format {
        Format::Text => print!("{}", rendered.table.render_text()),
        Format::Csv => print!("{}", rendered.table.render_csv()),
    }
    if rendered.ok() {
        0
    } else {
        for m in &rendered.mismatches {
            println!("MISMATCH {m}");
        }
        1
    }
}

fn cmd_report(table: TableId, n: usize, db_path: &Path, format: Format) -> Result<u8, CliError> {
    let db = load_db(n, db_path)?;
    let rendered = match table {
        TableId::Table1 => table1(&db),
        TableId::Table3 => {
            if n != 3 {
                return Err(CliError::Usage("table3 is the n=3 sharing census".to_string()));
            }
            eprintln!("enumerating every optimal circuit at n=3");
            let all = all_optimal_circuits(3, 6, |t| db.record(t).opt);
            table3(&db, &all)
        }
        TableId::Table4 => table4(&db),
        TableId::Table5 => {
            if n != 4 {
                return Err(CliError::Usage("table5 is the n=4 type split".to_string()));
            }
            table5(&db)
        }
    };
    Ok(print_report(&rendered, format))
}

fn cmd_synth(n: usize, tt_hex: &str, emit: Option<&Path>) -> Result<u8, CliError> {
    if !(1..=4).contains(&n) {
        return Err(CliError::Usage(format!(
            "synth covers n in 1..=4, got {n}; use enumerate for n=5 levels"
        )));
    }
    let tt = parse_tt(n, tt_hex)?;
    match exact_opt(&tt, OPT_HORIZON) {
        Ok((size, witness)) => {
            println!("opt {size}");
            let text = to_aiger(&witness);
            print!("{text}");
            if let Some(path) = emit {
                std::fs::write(path, &text)?;
            }
            Ok(0)
        }
        Err(_) => {
            println!("opt > {OPT_HORIZON} (synthesis horizon)");
            Ok(0)
        }
    }
}

fn cmd_classify(n: usize, tt_hex: &str, db_path: &Path) -> Result<u8, CliError> {
    let tt = parse_tt(n, tt_hex)?;
    let db = load_db(n, db_path)?;
    print_record(&db, &tt);
    println!("orbit     {}", npn_orbit(&tt).len());
    let r = db.record(&tt);
    let Some(w) = &r.witness else {
        println!("sharing   unknown (beyond the synthesis horizon)");
        return Ok(0);
    };
    let shape = classify_mechanism(w);
    if shape.is_tree() {
        println!("sharing   none (witness is a tree)");
    } else {
        for s in &shape.shared {
            let polarities: String = s
                .consumer_polarities
                .iter()
                .map(|&c| if c { '-' } else { '+' })
                .collect();
            println!(
                "sharing   gate {} depth {} consumers {} polarities {}",
                s.shared_gate,
                s.shared_gate_depth,
                s.consumer_polarities.len(),
                polarities
            );
        }
    }
    Ok(0)
}

fn cmd_verify(n: usize, db_path: &Path) -> Result<u8, CliError> {
    let db = load_db(n, db_path)?;
    let mut failed = false;
    let mut show = |name: &str, report: &VerifyReport| {
        println!("{name:<22} {} checked, {} faults", report.checked, report.faults.len());
        for f in &report.faults {
            println!("  fault: {f}");
        }
        failed |= !report.ok();
    };
    eprintln!("running verifiers");
    show("cells", &verify_cells(&db));
    show("unit-gap", &verify_unit_gap(&db));
    show("gate-elimination", &verify_gate_elimination(&db));
    show("threshold", &verify_threshold(&db));
    show("tree-theorem", &verify_tree_theorem().0);
    show("decomposition", &verify_decomposition_formula(&db));
    eprintln!("classifying mechanisms (enumerates all optimal circuits at n=3)");
    show("mechanism", &verify_mechanisms(&db));
    eprintln!("surveying every optimal circuit of each gap-1 representative");
    let survey = rep_mechanism_survey(&db);
    let mut survey_report = VerifyReport::default();
    for row in &survey {
        survey_report.checked += row.circuits;
        if row.tree > 0 {
            survey_report
                .faults
                .push(format!("rep {}: {} tree-shaped optimal circuits", row.rep.to_hex(), row.tree));
        }
        if row.mixed > 0 {
            survey_report
                .faults
                .push(format!("rep {}: {} mixed-mechanism circuits", row.rep.to_hex(), row.mixed));
        }
    }
    show("rep-mechanisms", &survey_report);
    for row in &survey {
        println!(
            "  rep {} opt {} circuits {} dual {} cse {} multi {}",
            row.rep.to_hex(),
            row.opt,
            row.circuits,
            row.single_dual,
            row.single_cse,
            row.multi_dual + row.multi_cse
        );
    }
    Ok(if failed { 1 } else { 0 })
}

fn cmd_grammar(
    db_path: &Path,
    blocks: usize,
    samples: usize,
    seed: u64,
    format: Format,
    robustness: bool,
) -> Result<u8, CliError> {
    let db = FunctionDatabase::load(db_path, &witness_path(db_path, None))?;
    if db.n() != 3 {
        return Err(CliError::Usage("grammar experiments run at n=3".to_string()));
    }
    if !(1..=3).contains(&blocks) {
        return Err(CliError::Usage(format!("--blocks must be 1..=3, got {blocks}")));
    }
    let cfg = GrammarConfig { n: 3, blocks, seed, samples };
    eprintln!("running {samples} {} at {blocks} blocks", if robustness { "trials" } else { "samples" });
    let stats =
        if robustness { robustness_experiment(&cfg, &db) } else { optimality_experiment(&cfg, &db) };
    let table = if robustness { table7(&[(blocks, stats)]) } else { table6(&[(blocks, stats)]) };
    match format {
        Format::Text => print!("{}", table.render_text()),
        Format::Csv => print!("{}", table.render_csv()),
    }
    Ok(0)
}

fn cmd_rewrite_run(aag: &Path, db_path: &Path) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(aag)?;
    let start: Aig =
        from_aiger(&text).map_err(|e| CliError::Io(format!("{}: {e}", aag.display())))?;
    let db = FunctionDatabase::load(db_path, &witness_path(db_path, None))?;
    if start.num_inputs() != db.n() {
        return Err(CliError::Usage(format!(
            "circuit has {} inputs, database has {}",
            start.num_inputs(),
            db.n()
        )));
    }
    let f = start.truth_table();
    let record = db.record(&f);
    let Some(opt) = record.opt else {
        return Err(CliError::Usage("circuit function lies beyond the synthesis horizon".to_string()));
    };
    let trajectory = run_to_fixed_point(&start, &db);
    println!("function {} opt {} start {} gates", f.to_hex(), opt, start.num_gates());
    let mut current = start;
    for (i, step) in trajectory.steps.iter().enumerate() {
        let next = unitgap::rewrite::apply_move(&current, step);
        let RewriteMove::ConeReplace { gate, replacement } = step else {
            unreachable!("cone descent emits cone replacements only");
        };
        println!(
            "step {} gate {} cone -> {}-gate witness, {} -> {} gates",
            i + 1,
            gate,
            replacement.num_gates(),
            current.num_gates(),
            next.num_gates()
        );
        current = next;
    }
    println!(
        "fixed point {} gates, {} above optimal",
        trajectory.fixed_point.num_gates(),
        trajectory.stuck_above_opt
    );
    Ok(0)
}

fn cmd_rewrite_survey(
    n: usize,
    trials: usize,
    seed: u64,
    db_path: &Path,
    format: Format,
) -> Result<u8, CliError> {
    if n != 3 {
        return Err(CliError::Usage("the survey runs at n=3".to_string()));
    }
    let db = load_db(n, db_path)?;
    eprintln!("descending {trials} starts per class");
    let report = landscape_survey(&db, trials, seed);
    match format {
        Format::Text => println!("{:<4} {:<3} {:>6} {:>6} excess", "rep", "opt", "trials", "stuck"),
        Format::Csv => println!("rep,opt,trials,stuck,excess"),
    }
    for class in &report.classes {
        let excess = class
            .excess_counts
            .iter()
            .map(|(e, c)| format!("{e}:{c}"))
            .collect::<Vec<_>>()
            .join(" ");
        match format {
            Format::Text => println!(
                "{:<4} {:<3} {:>6} {:>6} {excess}",
                class.rep.to_hex(),
                class.opt,
                class.trials,
                class.stuck_trials()
            ),
            Format::Csv => println!(
                "{},{},{},{},{excess}",
                class.rep.to_hex(),
                class.opt,
                class.trials,
                class.stuck_trials()
            ),
        }
    }
    println!(
        "classes with local minima: {} of {}",
        report.classes_with_local_minima(),
        report.classes.len()
    );
    Ok(0)
}

fn cmd_enumerate(n: usize, max_gates: usize) -> Result<u8, CliError> {
    if !(1..=5).contains(&n) {
        return Err(CliError::Usage(format!("--n {n} is out of range (1..=5)")));
    }
    eprintln!("forward-enumerating n={n} up to {max_gates} gates");
    let fwd = forward_enumerate(n, max_gates);
    for (k, level) in fwd.levels.iter().enumerate() {
        println!("level {k}: {}", level.len());
    }
    println!("total {}", fwd.total_functions());
    if fwd.truncated {
        println!("truncated: memory cap reached");
        return Ok(0);
    }
    for k in 1..fwd.levels.len() {
        println!("gap-1 at level {k}: {}", slice_gap1(&fwd, k));
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_path_defaults_next_to_db() {
        assert_eq!(witness_path(Path::new("out/db.csv"), None), PathBuf::from("out/db.aag"));
        let explicit = PathBuf::from("elsewhere.aag");
        assert_eq!(witness_path(Path::new("out/db.csv"), Some(&explicit)), explicit);
    }

    #[test]
    fn tt_parsing_rejects_bad_input() {
        assert!(parse_tt(3, "96").is_ok());
        assert!(parse_tt(3, "9").is_err());
        assert!(parse_tt(9, "96").is_err());
        assert!(parse_tt(3, "zz").is_err());
    }
}
