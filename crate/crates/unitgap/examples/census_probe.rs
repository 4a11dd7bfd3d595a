//! Scratch probe: 3-input AND block variant against the published Table 6/7 rows.
//!
//! Variant grammar: AND3 (2 gates), XOR (3), MUX (3), so every block
//! introduces 2-3 gates. Everything else matches the shipped sampler:
//! distinct sources per block, fair complements, redundancy <= 1, retry 32
//! then restart, per-index rng streams.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use unitgap::aig::{Aig, AigBuilder, Literal};
use unitgap::db::{build_database, FunctionDatabase};
use unitgap::grammar::sample_rng;

const PLACEMENT_RETRIES: usize = 32;
const SAMPLE_RESTARTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    And3,
    Xor,
    Mux,
}

impl Kind {
    fn arity(self) -> usize {
        match self {
            Kind::Xor => 2,
            Kind::And3 | Kind::Mux => 3,
        }
    }
}

#[derive(Clone, Copy)]
struct Input {
    source: usize,
    complement: bool,
}

#[derive(Clone)]
struct Block {
    kind: Kind,
    inputs: Vec<Input>,
}

fn expand(n: usize, blocks: &[Block]) -> Aig {
    let mut builder = AigBuilder::new(n);
    let mut outputs: Vec<Literal> = Vec::new();
    for block in blocks {
        let lit = |i: &Input| -> Literal {
            let base = if i.source < n {
                Literal::input(i.source + 1)
            } else {
                outputs[i.source - n]
            };
            base.xor(i.complement)
        };
        let out = match block.kind {
            Kind::And3 => {
                let ab = builder.and(lit(&block.inputs[0]), lit(&block.inputs[1]));
                builder.and(ab, lit(&block.inputs[2]))
            }
            Kind::Xor => builder.xor(lit(&block.inputs[0]), lit(&block.inputs[1])),
            Kind::Mux => builder.mux(
                lit(&block.inputs[0]),
                lit(&block.inputs[1]),
                lit(&block.inputs[2]),
            ),
        };
        outputs.push(out);
    }
    builder.finish(*outputs.last().unwrap())
}

fn cancellation_ok(partial: &Aig, db: &FunctionDatabase) -> bool {
    let active = partial.sweep_dead().num_gates();
    let opt = db.opt(&partial.truth_table()).unwrap();
    active - opt <= 1
}

/// theta = probability a source draw targets the primary-input pool;
/// theta = None reproduces the uniform-over-all-sources baseline.
fn draw_block(
    kind: Kind,
    n: usize,
    b: usize,
    theta: Option<f64>,
    rng: &mut ChaCha8Rng,
) -> Block {
    let available = n + b;
    let mut inputs: Vec<Input> = Vec::with_capacity(kind.arity());
    while inputs.len() < kind.arity() {
        let source = match theta {
            Some(t) if b > 0 => {
                if rng.gen_bool(t) {
                    rng.gen_range(0..n)
                } else {
                    n + rng.gen_range(0..b)
                }
            }
            _ => rng.gen_range(0..available),
        };
        if inputs.iter().any(|i| i.source == source) {
            continue;
        }
        inputs.push(Input { source, complement: rng.gen() });
    }
    Block { kind, inputs }
}

fn weighted_kind(weights: (u32, u32, u32), rng: &mut ChaCha8Rng) -> Kind {
    let total = weights.0 + weights.1 + weights.2;
    let r = rng.gen_range(0..total);
    if r < weights.0 {
        Kind::And3
    } else if r < weights.0 + weights.1 {
        Kind::Xor
    } else {
        Kind::Mux
    }
}

fn sample_blocks(
    n: usize,
    blocks: usize,
    weights: (u32, u32, u32),
    theta: Option<f64>,
    db: &FunctionDatabase,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Block>> {
    'sample: for _ in 0..SAMPLE_RESTARTS {
        let mut out: Vec<Block> = Vec::with_capacity(blocks);
        for b in 0..blocks {
            let mut placed = false;
            for _ in 0..PLACEMENT_RETRIES {
                let candidate = draw_block(weighted_kind(weights, rng), n, b, theta, rng);
                out.push(candidate);
                if cancellation_ok(&expand(n, &out), db) {
                    placed = true;
                    break;
                }
                out.pop();
            }
            if !placed {
                continue 'sample;
            }
        }
        return Some(out);
    }
    None
}

fn mutate(n: usize, blocks: &[Block], rng: &mut ChaCha8Rng) -> Vec<Block> {
    let mut out = blocks.to_vec();
    let slots: Vec<(usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(b, block)| (0..block.inputs.len()).map(move |s| (b, s)))
        .collect();
    match rng.gen_range(0..3) {
        0 => {
            let b = rng.gen_range(0..out.len());
            let others: Vec<Kind> = [Kind::And3, Kind::Xor, Kind::Mux]
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
                block.inputs.push(Input {
                    source: rng.gen_range(0..n + b),
                    complement: rng.gen(),
                });
            }
        }
        1 => {
            let (b, s) = slots[rng.gen_range(0..slots.len())];
            out[b].inputs[s] = Input {
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

fn main() {
    let db = build_database(3);
    let n = 3;
    println!("published table6: b1 100/0/0 | b2 opt 98.7 hard 7.0 | b3 opt 97.0 hard 10.5 (tol 1.5)");
    println!("published table7: mopt 80.7/90.7/93.4 (tol 2) same 6.3/53.4/69.0 (tol 3)");
    let mut grid: Vec<((u32, u32, u32), Option<f64>)> = Vec::new();
    for weights in [(1u32, 1u32, 1u32), (2, 1, 1), (3, 1, 1)] {
        for theta in [None, Some(0.75), Some(0.8), Some(0.85)] {
            grid.push((weights, theta));
        }
    }
    for (weights, theta) in grid {
        let mut line = format!(
            "w=({},{},{}) theta={}",
            weights.0,
            weights.1,
            weights.2,
            theta.map_or("none".to_string(), |t| format!("{t:.2}"))
        );
        for blocks in [1usize, 2, 3] {
            let samples = 20_000;
            let (mut optimal, mut trivial, mut hard) = (0usize, 0usize, 0usize);
            for index in 0..samples {
                let mut rng = sample_rng(42, index as u64);
                let bl =
                    sample_blocks(n, blocks, weights, theta, &db, &mut rng).expect("sample");
                let circuit = expand(n, &bl).sweep_dead();
                let tt = circuit.truth_table();
                let opt = db.opt(&tt).unwrap();
                if circuit.num_gates() == opt {
                    optimal += 1;
                }
                if tt.is_trivial() {
                    trivial += 1;
                }
                if opt >= 4 {
                    hard += 1;
                }
            }
            let d = samples as f64 / 100.0;
            line += &format!(
                " | b{blocks} opt {:.1} trv {:.1} hard {:.1}",
                optimal as f64 / d,
                trivial as f64 / d,
                hard as f64 / d
            );
        }
        println!("{line}");
        let mut rline = String::from("    robustness");
        for blocks in [1usize, 2, 3] {
            let trials = 10_000;
            let (mut mopt, mut mnt, mut same) = (0usize, 0usize, 0usize);
            for index in 0..trials {
                let mut rng = sample_rng(42, index as u64);
                let bl =
                    sample_blocks(n, blocks, weights, theta, &db, &mut rng).expect("sample");
                let original = expand(n, &bl).sweep_dead();
                let mutant_blocks = mutate(n, &bl, &mut rng);
                let mutant = expand(n, &mutant_blocks).sweep_dead();
                let tt = mutant.truth_table();
                let opt = db.opt(&tt).unwrap();
                if mutant.num_gates() == opt {
                    mopt += 1;
                }
                if opt >= 1 {
                    mnt += 1;
                }
                if tt == original.truth_table() {
                    same += 1;
                }
            }
            let d = trials as f64 / 100.0;
            rline += &format!(
                " | b{blocks} mopt {:.1} mnt {:.1} same {:.1}",
                mopt as f64 / d,
                mnt as f64 / d,
                same as f64 / d
            );
        }
        println!("{rline}");
    }
}
