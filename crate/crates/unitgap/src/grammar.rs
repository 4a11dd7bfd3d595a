//! Block-composed random circuit sampling with cancellation prevention.
//!
//! Circuits are built from AND, XOR, and MUX blocks whose inputs come from
//! primary inputs and earlier block outputs. A placement that leaves more
//! than one redundant gate is redrawn, so accepted samples sit within one
//! gate of optimal by construction. The two experiments measure how often
//! sampled circuits are exactly optimal and how gracefully they degrade
//! under single random mutations.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::aig::{Aig, AigBuilder, Literal};
use crate::db::FunctionDatabase;

/// Block flavor; AND expands to 1 gate, XOR and MUX to 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    And,
    Xor,
    Mux,
}

impl BlockKind {
    pub fn arity(self) -> usize {
        match self {
            BlockKind::And | BlockKind::Xor => 2,
            BlockKind::Mux => 3,
        }
    }
}

/// One block input: a signal index with a complement bit.
///
/// Sources 0..n are primary inputs; source n+j is block j's output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockInput {
    pub source: usize,
    pub complement: bool,
}

/// One grammar block. MUX input order is (select, then-branch, else-branch).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub inputs: Vec<BlockInput>,
}

/// Sampling parameters shared by both experiments.
#[derive(Clone, Copy, Debug)]
pub struct GrammarConfig {
    pub n: usize,
    pub blocks: usize,
    pub seed: u64,
    /// Samples for the optimality experiment, trials for robustness.
    pub samples: usize,
}

/// Exact counts behind the published rate columns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SampleStats {
    /// Accepted samples; the denominator for every rate.
    pub samples: usize,
    pub optimal: usize,
    pub trivial: usize,
    /// Functions with opt >= 4.
    pub hard: usize,
    pub same_function: usize,
    pub mutant_optimal: usize,
    pub mutant_nontrivial: usize,
    /// Samples abandoned after the restart budget; excluded from rates.
    pub sampling_faults: usize,
}

impl SampleStats {
    fn rate(&self, count: usize) -> f64 {
        if self.samples == 0 {
            return 0.0;
        }
        count as f64 / self.samples as f64
    }

    pub fn optimal_rate(&self) -> f64 {
        self.rate(self.optimal)
    }

    pub fn trivial_rate(&self) -> f64 {
        self.rate(self.trivial)
    }

    pub fn hard_rate(&self) -> f64 {
        self.rate(self.hard)
    }

    pub fn same_function_rate(&self) -> f64 {
        self.rate(self.same_function)
    }

    pub fn mutant_optimal_rate(&self) -> f64 {
        self.rate(self.mutant_optimal)
    }

    pub fn mutant_nontrivial_rate(&self) -> f64 {
        self.rate(self.mutant_nontrivial)
    }
}

/// Redraws per block placement before the whole sample restarts.
const PLACEMENT_RETRIES: usize = 32;
/// Whole-sample restarts before the sample is recorded as a fault.
const SAMPLE_RESTARTS: usize = 1000;

/// The generator for sample `index`: one stream per index, so any
/// partition of the sample range reproduces the aggregate exactly.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Expands blocks to gates. Output is the last block's output literal.
pub fn expand_blocks(n: usize, blocks: &[Block]) -> Aig {
    let mut builder = AigBuilder::new(n);
    let mut outputs: Vec<Literal> = Vec::with_capacity(blocks.len());
    for block in blocks {
        let lit = |input: &BlockInput| -> Literal {
            let base = if input.source < n {
                Literal::input(input.source + 1)
            } else {
                outputs[input.source - n]
            };
            base.xor(input.complement)
        };
        let out = match block.kind {
            BlockKind::And => {
                let (a, b) = (lit(&block.inputs[0]), lit(&block.inputs[1]));
                builder.and(a, b)
            }
            BlockKind::Xor => {
                let (a, b) = (lit(&block.inputs[0]), lit(&block.inputs[1]));
                builder.xor(a, b)
            }
            BlockKind::Mux => {
                let (s, a, b) =
                    (lit(&block.inputs[0]), lit(&block.inputs[1]), lit(&block.inputs[2]));
                builder.mux(s, a, b)
            }
        };
        outputs.push(out);
    }
    let out = *outputs.last().expect("at least one block");
    builder.finish(out)
}

/// Accepts a partial expansion iff active gates exceed opt by at most 1.
pub fn cancellation_check(partial: &Aig, db: &FunctionDatabase) -> bool {
    let active = partial.sweep_dead().num_gates();
    let opt = db
        .opt(&partial.truth_table())
        .expect("grammar functions stay within the horizon");
    active - opt <= 1
}

fn draw_block(kind: BlockKind, available: usize, rng: &mut ChaCha8Rng) -> Block {
    // Distinct sources within a block; a repeated signal would collapse the
    // block and fail the one-block exactness the sampler is calibrated to.
    let mut inputs: Vec<BlockInput> = Vec::with_capacity(kind.arity());
    while inputs.len() < kind.arity() {
        let source = rng.gen_range(0..available);
        if inputs.iter().any(|i| i.source == source) {
            continue;
        }
        inputs.push(BlockInput { source, complement: rng.gen() });
    }
    Block { kind, inputs }
}

fn random_kind(rng: &mut ChaCha8Rng) -> BlockKind {
    [BlockKind::And, BlockKind::Xor, BlockKind::Mux][rng.gen_range(0..3)]
}

/// Draws one accepted block list, or None when the restart budget runs out.
pub fn sample_blocks(
    cfg: &GrammarConfig,
    db: &FunctionDatabase,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Block>> {
    'sample: for _ in 0..SAMPLE_RESTARTS {
        let mut blocks: Vec<Block> = Vec::with_capacity(cfg.blocks);
        for b in 0..cfg.blocks {
            let mut placed = false;
            for _ in 0..PLACEMENT_RETRIES {
                let candidate = draw_block(random_kind(rng), cfg.n + b, rng);
                blocks.push(candidate);
                if cancellation_check(&expand_blocks(cfg.n, &blocks), db) {
                    placed = true;
                    break;
                }
                blocks.pop();
            }
            if !placed {
                continue 'sample;
            }
        }
        return Some(blocks);
    }
    None
}

/// Draws one accepted circuit, dead-swept.
pub fn sample_circuit(
    cfg: &GrammarConfig,
    db: &FunctionDatabase,
    rng: &mut ChaCha8Rng,
) -> Option<Aig> {
    sample_blocks(cfg, db, rng).map(|blocks| expand_blocks(cfg.n, &blocks).sweep_dead())
}

/// Applies one uniformly chosen mutation to one uniformly chosen site.
///
/// Kinds: block type change (arity adjusted by drawing or dropping the
/// third input), input redraw (one slot gets a fresh literal, which may
/// coincide with the old one), and complement flip. Mutants are not
/// re-checked against cancellation; the experiment measures raw damage.
pub fn mutate(n: usize, blocks: &[Block], rng: &mut ChaCha8Rng) -> Vec<Block> {
    let mut out = blocks.to_vec();
    let slots: Vec<(usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(b, block)| (0..block.inputs.len()).map(move |s| (b, s)))
        .collect();
    match rng.gen_range(0..3) {
        0 => {
            let b = rng.gen_range(0..out.len());
            let others: Vec<BlockKind> = [BlockKind::And, BlockKind::Xor, BlockKind::Mux]
                .into_iter()
                .filter(|&k| k != out[b].kind)
                .collect();
            let new_kind = others[rng.gen_range(0..others.len())];
            let block = &mut out[b];
            block.kind = new_kind;
            if block.inputs.len() > new_kind.arity() {
                block.inputs.truncate(new_kind.arity());
            }
            while block.inputs.len() < new_kind.arity() {
                block.inputs.push(BlockInput {
                    source: rng.gen_range(0..n + b),
                    complement: rng.gen(),
                });
            }
        }
        1 => {
            let (b, s) = slots[rng.gen_range(0..slots.len())];
            out[b].inputs[s] = BlockInput {
                source: rng.gen_range(0..n + b),
                complement: rng.gen(),
            };
        }
        _ => {
            let (b, s) = slots[rng.gen_range(0..slots.len())];
            out[b].inputs[s].complement = !out[b].inputs[s].complement;
        }
    }
    out
}

/// Optimality rates over accepted samples.
pub fn optimality_experiment(cfg: &GrammarConfig, db: &FunctionDatabase) -> SampleStats {
    assert_eq!(cfg.n, db.n(), "config arity differs from database");
    let mut stats = SampleStats::default();
    for index in 0..cfg.samples {
        let mut rng = sample_rng(cfg.seed, index as u64);
        let Some(circuit) = sample_circuit(cfg, db, &mut rng) else {
            stats.sampling_faults += 1;
            continue;
        };
        stats.samples += 1;
        let tt = circuit.truth_table();
        let opt = db.opt(&tt).unwrap();
        if circuit.num_gates() == opt {
            stats.optimal += 1;
        }
        if tt.is_trivial() {
            stats.trivial += 1;
        }
        if opt >= 4 {
            stats.hard += 1;
        }
    }
    stats
}

/// Robustness of accepted samples to one random mutation.
pub fn robustness_experiment(cfg: &GrammarConfig, db: &FunctionDatabase) -> SampleStats {
    assert_eq!(cfg.n, db.n(), "config arity differs from database");
    let mut stats = SampleStats::default();
    for index in 0..cfg.samples {
        let mut rng = sample_rng(cfg.seed, index as u64);
        let Some(blocks) = sample_blocks(cfg, db, &mut rng) else {
            stats.sampling_faults += 1;
            continue;
        };
        stats.samples += 1;
        let original = expand_blocks(cfg.n, &blocks).sweep_dead();
        let mutant_blocks = mutate(cfg.n, &blocks, &mut rng);
        let mutant = expand_blocks(cfg.n, &mutant_blocks).sweep_dead();
        let tt = mutant.truth_table();
        let opt = db.opt(&tt).unwrap();
        if mutant.num_gates() == opt {
            stats.mutant_optimal += 1;
        }
        if opt >= 1 {
            stats.mutant_nontrivial += 1;
        }
        if tt == original.truth_table() {
            stats.same_function += 1;
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::db::build_database;
    use crate::tt::TruthTable;
    use std::sync::OnceLock;

    fn db3() -> &'static FunctionDatabase {
        static DB: OnceLock<FunctionDatabase> = OnceLock::new();
        DB.get_or_init(|| build_database(3))
    }

    fn cfg(blocks: usize, samples: usize) -> GrammarConfig {
        GrammarConfig { n: 3, blocks, seed: 7, samples }
    }

    fn input(source: usize, complement: bool) -> BlockInput {
        BlockInput { source, complement }
    }

    #[test]
    fn expansion_sizes_and_functions() {
        let and = Block { kind: BlockKind::And, inputs: vec![input(0, false), input(1, false)] };
        let a = expand_blocks(3, std::slice::from_ref(&and));
        assert_eq!(a.num_gates(), 1);
        assert_eq!(a.truth_table().to_hex(), "88");

        let xor = Block { kind: BlockKind::Xor, inputs: vec![input(0, false), input(1, false)] };
        let x = expand_blocks(3, std::slice::from_ref(&xor));
        assert_eq!(x.num_gates(), 3);
        assert_eq!(x.truth_table().to_hex(), "66");

        let mux = Block {
            kind: BlockKind::Mux,
            inputs: vec![input(2, false), input(0, false), input(1, false)],
        };
        let m = expand_blocks(3, std::slice::from_ref(&mux));
        assert_eq!(m.num_gates(), 3);
        // x3 ? x1 : x2
        let want = TruthTable::var(3, 3)
            .and(&TruthTable::var(3, 1))
            .or(&TruthTable::var(3, 3).not().and(&TruthTable::var(3, 2)));
        assert_eq!(m.truth_table(), want);
    }

    #[test]
    fn chained_blocks_reference_earlier_outputs() {
        let blocks = vec![
            Block { kind: BlockKind::And, inputs: vec![input(0, false), input(1, false)] },
            Block { kind: BlockKind::Xor, inputs: vec![input(3, false), input(2, true)] },
        ];
        let aig = expand_blocks(3, &blocks);
        let want = TruthTable::var(3, 1)
            .and(&TruthTable::var(3, 2))
            .xor(&TruthTable::var(3, 3).not());
        assert_eq!(aig.truth_table(), want);
    }

    #[test]
    fn cancellation_rejects_collapsed_xor() {
        let degenerate =
            Block { kind: BlockKind::Xor, inputs: vec![input(0, false), input(0, false)] };
        let aig = expand_blocks(3, std::slice::from_ref(&degenerate));
        assert!(aig.truth_table().is_constant());
        assert!(!cancellation_check(&aig, db3()));

        let fine = Block { kind: BlockKind::Xor, inputs: vec![input(0, false), input(1, false)] };
        assert!(cancellation_check(&expand_blocks(3, std::slice::from_ref(&fine)), db3()));
    }

    #[test]
    fn one_block_samples_are_always_optimal() {
        let stats = optimality_experiment(&cfg(1, 2000), db3());
        assert_eq!(stats.sampling_faults, 0);
        assert_eq!(stats.samples, 2000);
        assert_eq!(stats.optimal, 2000);
        assert_eq!(stats.trivial, 0);
        assert_eq!(stats.hard, 0);
    }

    #[test]
    fn accepted_samples_satisfy_the_redundancy_bound() {
        let db = db3();
        let config = cfg(3, 300);
        for index in 0..config.samples {
            let mut rng = sample_rng(config.seed, index as u64);
            let circuit = sample_circuit(&config, db, &mut rng).unwrap();
            let opt = db.opt(&circuit.truth_table()).unwrap();
            assert!(circuit.num_gates() <= opt + 1);
        }
    }

    #[test]
    fn experiments_are_deterministic_under_seed() {
        let a = optimality_experiment(&cfg(2, 400), db3());
        let b = optimality_experiment(&cfg(2, 400), db3());
        assert_eq!(a, b);
        let c = robustness_experiment(&cfg(2, 400), db3());
        let d = robustness_experiment(&cfg(2, 400), db3());
        assert_eq!(c, d);
    }

    #[test]
    fn mutants_are_well_formed() {
        let db = db3();
        let config = cfg(3, 200);
        for index in 0..config.samples {
            let mut rng = sample_rng(config.seed, index as u64);
            let blocks = sample_blocks(&config, db, &mut rng).unwrap();
            let mutant_blocks = mutate(config.n, &blocks, &mut rng);
            assert_eq!(mutant_blocks.len(), blocks.len());
            for (b, block) in mutant_blocks.iter().enumerate() {
                assert_eq!(block.inputs.len(), block.kind.arity());
                for i in &block.inputs {
                    assert!(i.source < config.n + b);
                }
            }
            let mutant = expand_blocks(config.n, &mutant_blocks);
            mutant.validate();
        }
    }

    #[test]
    fn mutations_can_be_neutral() {
        let stats = robustness_experiment(&cfg(1, 2000), db3());
        assert!(stats.same_function > 0);
        assert!(stats.same_function < stats.samples / 5);
    }
}
