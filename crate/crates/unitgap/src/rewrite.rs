//! Greedy local rewriting: cone replacement to a fixed point, single-gate
//! move neighborhoods, and the local-minimum landscape survey.
//!
//! Cone replacement fires on a gate when its cone is larger than the tree
//! cost of the cone's function, so the root of a tree-shaped start never
//! fires on a gap-1 function: its cone sits exactly at tree cost, one gate
//! above optimal, and closing that last gate needs a non-local move. That
//! barrier is the dynamics this module exists to exhibit.

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;

use crate::aig::{Aig, Gate, Literal};
use crate::db::FunctionDatabase;
use crate::grammar::{sample_circuit, sample_rng, GrammarConfig};
use crate::tt::TruthTable;

/// One accepted rewrite.
#[derive(Clone, Debug)]
pub enum RewriteMove {
    /// Splice the replacement circuit in place of the gate's cone.
    ConeReplace { gate: usize, replacement: Aig },
    /// Point one fanin of a gate at a different literal.
    RewireInput { gate: usize, fanin: usize, literal: Literal },
    /// Flip one complement bit.
    FlipComplement { edge: Edge },
}

/// An edge carrying a complement bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edge {
    Fanin { gate: usize, fanin: usize },
    Output,
}

/// A full descent from a starting circuit to a fixed point.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub start: Aig,
    pub steps: Vec<RewriteMove>,
    pub fixed_point: Aig,
    /// Gates above optimal at termination; the gap-1 barrier shows as 1.
    pub stuck_above_opt: usize,
}

/// The trivial-decomposition tree start: a constant-true AND above one
/// optimal circuit, size opt(f) + 1.
pub fn trivial_tree_start(db: &FunctionDatabase, f: &TruthTable) -> Aig {
    let witness = db
        .record(f)
        .witness
        .as_ref()
        .expect("tree starts need a witness within the horizon");
    let mut gates = witness.gates().to_vec();
    gates.push(Gate::new(Literal::TRUE, witness.output()));
    let root = Literal::new(db.n() + gates.len(), false);
    Aig::new(db.n(), gates, root)
}

/// Splices `replacement` (computing gate `j`'s function) in place of the
/// cone of gate `j`, then dead-sweeps.
fn splice(aig: &Aig, j: usize, replacement: &Aig) -> Aig {
    let n = aig.num_inputs();
    let cut = n + 1 + j;
    let shift = replacement.num_gates();

    // Replacement gates slot in at index j; their fanins are self-contained.
    let map_replacement = |l: Literal| -> Literal {
        if l.var() <= n {
            l
        } else {
            Literal::new(l.var() + j, l.is_complemented())
        }
    };
    let new_root = map_replacement(replacement.output());
    // Old references to the cut var become the replacement root; later old
    // gates shift past the inserted block.
    let map_old = |l: Literal| -> Literal {
        if l.var() < cut {
            l
        } else if l.var() == cut {
            new_root.xor(l.is_complemented())
        } else {
            Literal::new(l.var() + shift - 1, l.is_complemented())
        }
    };

    let mut gates: Vec<Gate> = aig.gates()[..j].to_vec();
    for g in replacement.gates() {
        gates.push(Gate::new(map_replacement(g.fanin0), map_replacement(g.fanin1)));
    }
    for g in &aig.gates()[j + 1..] {
        gates.push(Gate::new(map_old(g.fanin0), map_old(g.fanin1)));
    }
    Aig::new(n, gates, map_old(aig.output())).sweep_dead()
}

fn cone_replace_with_move(aig: &Aig, db: &FunctionDatabase) -> Option<(RewriteMove, Aig)> {
    let signals = aig.simulate();
    for j in 0..aig.num_gates() {
        let cone_fn = signals[aig.gate_var(j)];
        let record = db.record(&cone_fn);
        let (Some(tree), Some(witness)) = (record.tree, record.witness.as_ref()) else {
            // Beyond the synthesis horizon there is nothing to splice.
            continue;
        };
        if aig.cone(j).len() <= tree {
            continue;
        }
        let candidate = splice(aig, j, witness);
        if candidate.num_gates() < aig.num_gates() {
            let step =
                RewriteMove::ConeReplace { gate: j, replacement: witness.clone() };
            return Some((step, candidate));
        }
    }
    None
}

/// One cone-replacement step, or None at a fixed point.
///
/// Scans gates lowest-first and fires on the first gate whose cone exceeds
/// the tree cost of its function; the spliced-in replacement is the stored
/// witness. Acceptance requires a strict post-sweep decrease.
pub fn cone_replace_step(aig: &Aig, db: &FunctionDatabase) -> Option<Aig> {
    cone_replace_with_move(aig, db).map(|(_, next)| next)
}

/// Iterates cone replacement and records the trajectory.
pub fn run_to_fixed_point(aig: &Aig, db: &FunctionDatabase) -> Trajectory {
    let start = aig.sweep_dead();
    let f = start.truth_table();
    let opt = db.opt(&f).expect("rewriting needs opt within the horizon");
    let mut current = start.clone();
    let mut steps = Vec::new();
    while let Some((step, next)) = cone_replace_with_move(&current, db) {
        assert!(
            next.num_gates() < current.num_gates(),
            "cone replacement must decrease gate count"
        );
        assert_eq!(next.truth_table(), f, "rewriting must preserve the function");
        steps.push(step);
        current = next;
    }
    let stuck_above_opt = current.num_gates() - opt;
    Trajectory { start, steps, fixed_point: current, stuck_above_opt }
}

/// Applies one move without sweeping.
pub fn apply_move(aig: &Aig, step: &RewriteMove) -> Aig {
    match step {
        RewriteMove::ConeReplace { gate, replacement } => splice(aig, *gate, replacement),
        RewriteMove::RewireInput { gate, fanin, literal } => {
            let mut gates = aig.gates().to_vec();
            let old = gates[*gate];
            gates[*gate] = if *fanin == 0 {
                Gate::new(*literal, old.fanin1)
            } else {
                Gate::new(old.fanin0, *literal)
            };
            Aig::new(aig.num_inputs(), gates, aig.output())
        }
        RewriteMove::FlipComplement { edge } => match edge {
            Edge::Fanin { gate, fanin } => {
                let mut gates = aig.gates().to_vec();
                let old = gates[*gate];
                gates[*gate] = if *fanin == 0 {
                    Gate::new(old.fanin0.not(), old.fanin1)
                } else {
                    Gate::new(old.fanin0, old.fanin1.not())
                };
                Aig::new(aig.num_inputs(), gates, aig.output())
            }
            Edge::Output => {
                Aig::new(aig.num_inputs(), aig.gates().to_vec(), aig.output().not())
            }
        },
    }
}

/// All single-gate moves that preserve the output function without
/// increasing the swept gate count.
///
/// Complement flips of an existing fanin are reported as FlipComplement;
/// RewireInput covers every other literal below the gate.
pub fn single_gate_neighbors(aig: &Aig) -> Vec<RewriteMove> {
    let tt = aig.truth_table();
    let size = aig.num_gates();
    let mut moves = Vec::new();
    let mut consider = |m: RewriteMove| {
        let candidate = apply_move(aig, &m);
        if candidate.truth_table() == tt && candidate.sweep_dead().num_gates() <= size {
            moves.push(m);
        }
    };
    for j in 0..aig.num_gates() {
        let gate = aig.gates()[j];
        for (fanin, current) in [(0, gate.fanin0), (1, gate.fanin1)] {
            consider(RewriteMove::FlipComplement { edge: Edge::Fanin { gate: j, fanin } });
            for var in 0..aig.num_inputs() + 1 + j {
                for complement in [false, true] {
                    let literal = Literal::new(var, complement);
                    if literal == current || literal == current.not() {
                        continue;
                    }
                    consider(RewriteMove::RewireInput { gate: j, fanin, literal });
                }
            }
        }
    }
    if aig.num_gates() > 0 {
        consider(RewriteMove::FlipComplement { edge: Edge::Output });
    }
    moves
}

/// Outcome of the survey for one NPN class.
#[derive(Clone, Debug)]
pub struct ClassOutcome {
    pub rep: TruthTable,
    pub opt: usize,
    pub trials: usize,
    /// Terminal gate-count excess over optimal, per trial count.
    pub excess_counts: BTreeMap<usize, usize>,
}

impl ClassOutcome {
    pub fn max_excess(&self) -> usize {
        self.excess_counts.keys().copied().max().unwrap_or(0)
    }

    pub fn stuck_trials(&self) -> usize {
        self.excess_counts.iter().filter(|(&e, _)| e > 0).map(|(_, &c)| c).sum()
    }
}

/// Per-class landscape survey results.
#[derive(Clone, Debug)]
pub struct LandscapeReport {
    pub classes: Vec<ClassOutcome>,
}

impl LandscapeReport {
    /// Classes where some descent terminated above optimal.
    pub fn classes_with_local_minima(&self) -> usize {
        self.classes.iter().filter(|c| c.max_excess() > 0).count()
    }
}

fn canonical_key(aig: &Aig) -> Vec<u32> {
    let c = aig.structural_canonical();
    let mut key: Vec<u32> = Vec::with_capacity(2 * c.num_gates() + 1);
    for g in c.gates() {
        key.push(g.fanin0.0);
        key.push(g.fanin1.0);
    }
    key.push(c.output().0);
    key
}

/// Greedy descent: cone replacement first, then the best strictly
/// improving single-gate move, ties broken by smallest canonical form.
pub fn greedy_descend(aig: &Aig, db: &FunctionDatabase) -> Aig {
    let mut current = aig.sweep_dead();
    loop {
        if let Some(next) = cone_replace_step(&current, db) {
            current = next;
            continue;
        }
        let mut best: Option<(usize, Vec<u32>, Aig)> = None;
        for step in single_gate_neighbors(&current) {
            let candidate = apply_move(&current, &step).sweep_dead();
            if candidate.num_gates() >= current.num_gates() {
                continue;
            }
            let key = (candidate.num_gates(), canonical_key(&candidate));
            if best.as_ref().is_none_or(|(g, k, _)| (key.0, &key.1) < (*g, k)) {
                best = Some((key.0, key.1, candidate));
            }
        }
        match best {
            Some((_, _, next)) => current = next,
            None => return current,
        }
    }
}

/// Grammar samples per trial before falling back to a tree start.
const CLASS_HUNT_BUDGET: usize = 2000;

fn grammar_start(
    rep: &TruthTable,
    db: &FunctionDatabase,
    rng: &mut ChaCha8Rng,
) -> Option<Aig> {
    let cfg = GrammarConfig { n: db.n(), blocks: 3, seed: 0, samples: 0 };
    for _ in 0..CLASS_HUNT_BUDGET {
        let circuit = sample_circuit(&cfg, db, rng)?;
        if db.record(&circuit.truth_table()).npn_rep == *rep {
            return Some(circuit);
        }
    }
    None
}

/// Runs `trials` greedy descents per nontrivial NPN class at n = 3.
///
/// Even trials start from a grammar sample confined to the class (tree
/// fallback if the hunt budget runs out), odd trials from the
/// trivial-decomposition tree of a random orbit member.
pub fn landscape_survey(db: &FunctionDatabase, trials: usize, seed: u64) -> LandscapeReport {
    assert_eq!(db.n(), 3, "the survey reproduces the published n = 3 landscape");
    let reps: Vec<TruthTable> = db
        .records()
        .iter()
        .filter(|r| r.npn_rep == r.tt && r.opt != Some(0))
        .map(|r| r.tt)
        .collect();
    let mut classes = Vec::with_capacity(reps.len());
    for (ci, rep) in reps.iter().enumerate() {
        let orbit: Vec<TruthTable> = db
            .records()
            .iter()
            .filter(|r| r.npn_rep == *rep)
            .map(|r| r.tt)
            .collect();
        let mut excess_counts: BTreeMap<usize, usize> = BTreeMap::new();
        for t in 0..trials {
            let mut rng = sample_rng(seed, (ci * trials + t) as u64);
            let member = orbit[rand::Rng::gen_range(&mut rng, 0..orbit.len())];
            let start = if t % 2 == 0 {
                grammar_start(rep, db, &mut rng)
                    .unwrap_or_else(|| trivial_tree_start(db, &member))
            } else {
                trivial_tree_start(db, &member)
            };
            let f = start.truth_table();
            let terminal = greedy_descend(&start, db);
            assert_eq!(terminal.truth_table(), f);
            let excess = terminal.num_gates() - db.opt(&f).unwrap();
            *excess_counts.entry(excess).or_insert(0) += 1;
        }
        classes.push(ClassOutcome {
            rep: *rep,
            opt: db.opt(rep).unwrap(),
            trials,
            excess_counts,
        });
    }
    LandscapeReport { classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::db::build_database;
    use std::sync::OnceLock;

    fn db3() -> &'static FunctionDatabase {
        static DB: OnceLock<FunctionDatabase> = OnceLock::new();
        DB.get_or_init(|| build_database(3))
    }

    fn tt3(hex: &str) -> TruthTable {
        TruthTable::from_hex(3, hex).unwrap()
    }

    #[test]
    fn optimal_witnesses_are_fixed_points() {
        let db = db3();
        for hex in ["88", "96", "87", "60"] {
            let w = db.record(&tt3(hex)).witness.clone().unwrap();
            assert!(cone_replace_step(&w, db).is_none());
            let trajectory = run_to_fixed_point(&w, db);
            assert!(trajectory.steps.is_empty());
            assert_eq!(trajectory.stuck_above_opt, 0);
        }
    }

    #[test]
    fn gap0_tree_start_reaches_opt() {
        let db = db3();
        // x3 & (x1 ^ x2): opt 4, gap 0.
        let f = tt3("60");
        assert_eq!(db.record(&f).gap, Some(0));
        let start = trivial_tree_start(db, &f);
        assert_eq!(start.num_gates(), 5);
        let trajectory = run_to_fixed_point(&start, db);
        assert_eq!(trajectory.fixed_point.num_gates(), 4);
        assert_eq!(trajectory.stuck_above_opt, 0);
        assert_eq!(trajectory.steps.len(), 1);
    }

    #[test]
    fn gap1_tree_start_sticks_one_above_opt() {
        let db = db3();
        for hex in ["96", "87"] {
            let f = tt3(hex);
            assert_eq!(db.record(&f).gap, Some(1));
            let start = trivial_tree_start(db, &f);
            let trajectory = run_to_fixed_point(&start, db);
            assert!(trajectory.steps.is_empty());
            assert_eq!(trajectory.stuck_above_opt, 1);
        }
    }

    #[test]
    fn splice_handles_interior_gates() {
        let db = db3();
        // Stack two redundant trivial roots; descent still lands at opt.
        let f = tt3("96");
        let once = trivial_tree_start(db, &f);
        let mut gates = once.gates().to_vec();
        gates.push(Gate::new(Literal::TRUE, once.output()));
        let twice = Aig::new(3, gates, Literal::new(3 + once.num_gates() + 1, false));
        assert_eq!(twice.truth_table(), f);
        let trajectory = run_to_fixed_point(&twice, db);
        assert_eq!(trajectory.fixed_point.truth_table(), f);
        // From two above opt the root cone exceeds tree cost, so the
        // non-local splice is licensed and the barrier is bypassed.
        assert_eq!(trajectory.stuck_above_opt, 0);
    }

    #[test]
    fn neighbors_preserve_function_and_size() {
        let db = db3();
        // The redundant root admits rewires, e.g. TRUE -> its other fanin.
        let start = trivial_tree_start(db, &tt3("87"));
        let tt = start.truth_table();
        let moves = single_gate_neighbors(&start);
        assert!(!moves.is_empty());
        for m in &moves {
            let applied = apply_move(&start, m);
            assert_eq!(applied.truth_table(), tt);
            assert!(applied.sweep_dead().num_gates() <= start.num_gates());
        }
    }

    #[test]
    fn trivial_circuits_have_no_neighbors() {
        let aig = Aig::constant_or_literal(3, Literal::input(2));
        assert!(single_gate_neighbors(&aig).is_empty());
    }

    #[test]
    fn survey_reports_all_nontrivial_classes() {
        let db = db3();
        let report = landscape_survey(db, 4, 11);
        assert_eq!(report.classes.len(), 12);
        for class in &report.classes {
            assert_eq!(class.trials, 4);
            assert!(class.max_excess() <= 1);
        }
        // The gap-1 classes are stuck at least on their tree-start trials.
        assert!(report.classes_with_local_minima() >= 2);
    }
}
