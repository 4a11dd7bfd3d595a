//! Exact synthesis of minimum-size AIGs.
//!
//! Three engines, deliberately independent of each other:
//!
//! - [`exact_opt`]: iterative-deepening search over normalized gate
//!   sequences with pruning. The workhorse behind the database.
//! - [`forward_enumerate`] / [`oracle_opt`]: breadth-first closure over
//!   sets of gate functions, with none of the search-order pruning above.
//!   Serves as an independent check on `exact_opt` and enumerates the
//!   n=5 slice.
//! - [`all_optimal_circuits`]: enumerates every dead-gate-free optimal
//!   circuit, not just one witness, for census work.
//!
//! Every prune used by `exact_opt` preserves at least one optimal circuit:
//! an optimal circuit never contains a gate whose function is a constant,
//! a literal, or a copy or complement of an earlier signal (the gate could
//! be dropped), and never contains a dead gate. Orderings are canonicalized
//! by requiring adjacent independent gates to appear in ascending fanin
//! order, which keeps exactly the lexicographically smallest ordering of
//! each circuit.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use crate::aig::{Aig, Gate, Literal};
use crate::tt::{self, TruthTable};

/// No circuit within the gate budget computes the function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no circuit with at most {0} gates")]
pub struct ExceedsBudget(pub usize);

/// Zero-gate witness for constants and literals, if one exists.
pub fn trivial_witness(tt: &TruthTable) -> Option<Aig> {
    let n = tt.num_vars();
    if *tt == TruthTable::zero(n) {
        return Some(Aig::constant_or_literal(n, Literal::FALSE));
    }
    if *tt == TruthTable::one(n) {
        return Some(Aig::constant_or_literal(n, Literal::TRUE));
    }
    for v in 1..=n {
        if *tt == TruthTable::var(n, v) {
            return Some(Aig::constant_or_literal(n, Literal::input(v)));
        }
        if *tt == TruthTable::var(n, v).not() {
            return Some(Aig::constant_or_literal(n, Literal::input(v).not()));
        }
    }
    None
}

/// Minimum gate count and one witness, searched up to `budget` gates.
///
/// The witness is the lexicographically smallest normalized gate sequence
/// among dead-gate-free optimal circuits, so results are identical across
/// runs and platforms.
pub fn exact_opt(tt: &TruthTable, budget: usize) -> Result<(usize, Aig), ExceedsBudget> {
    assert!(tt.num_vars() <= 5 && budget <= 8);
    if let Some(w) = trivial_witness(tt) {
        return Ok((0, w));
    }
    for k in 1..=budget {
        let mut dfs = Dfs {
            n: tt.num_vars(),
            k,
            target: tt.bits(),
            mask: tt::mask(tt.num_vars()),
            sig: base_signals(tt.num_vars()),
            pairs: Vec::with_capacity(k),
            consumers: vec![0u32; k],
        };
        if let Some(aig) = dfs.place(0) {
            return Ok((k, aig));
        }
    }
    Err(ExceedsBudget(budget))
}

/// Truth tables of the constant and input variables, indexed by variable.
fn base_signals(n: usize) -> Vec<u64> {
    let mut sig = vec![0u64];
    for v in 1..=n {
        sig.push(TruthTable::var(n, v).bits());
    }
    sig
}

struct Dfs {
    n: usize,
    k: usize,
    target: u64,
    mask: u64,
    /// Truth table per variable: constant, inputs, then placed gates.
    sig: Vec<u64>,
    /// Encoded fanin pairs of placed gates, each `(a, b)` with `a < b`.
    pairs: Vec<(u32, u32)>,
    consumers: Vec<u32>,
}

impl Dfs {
    fn place(&mut self, i: usize) -> Option<Aig> {
        let max_lit = 2 * (self.n + i) + 1;
        let last = i == self.k - 1;
        // Gates the final gate must consume to leave no dead gate.
        let mut need = [usize::MAX; 2];
        if last {
            let mut cnt = 0;
            for j in 0..i {
                if self.consumers[j] == 0 {
                    need[cnt] = self.n + 1 + j;
                    cnt += 1;
                }
            }
        }
        for a in 2..max_lit as u32 {
            for b in (a + 1)..=max_lit as u32 {
                if a >> 1 == b >> 1 {
                    continue;
                }
                if i > 0 {
                    // Canonical ordering: an independent gate must follow
                    // its predecessor in ascending fanin order.
                    let prev_var = (self.n + i) as u32;
                    if a >> 1 != prev_var && b >> 1 != prev_var && (a, b) <= self.pairs[i - 1] {
                        continue;
                    }
                }
                if last
                    && need
                        .iter()
                        .any(|&v| v != usize::MAX && v != (a >> 1) as usize && v != (b >> 1) as usize)
                {
                    continue;
                }
                let ta = fanin_tt(&self.sig, a, self.mask);
                let tb = fanin_tt(&self.sig, b, self.mask);
                let t = ta & tb;
                if last {
                    if t != self.target && t != !self.target & self.mask {
                        continue;
                    }
                    self.pairs.push((a, b));
                    let gates =
                        self.pairs.iter().map(|&(a, b)| Gate::new(Literal(a), Literal(b))).collect();
                    let root = Literal::new(self.n + self.k, t != self.target);
                    return Some(Aig::new(self.n, gates, root));
                }
                if self.sig.iter().any(|&s| s == t || s == !t & self.mask) {
                    continue;
                }
                // A gate nets at most one consumed signal, so more than
                // k - i - 1 unconsumed gates can never all be absorbed.
                let unconsumed = self.push_gate(a, b, t);
                if unconsumed <= self.k - i {
                    if let Some(aig) = self.place(i + 1) {
                        return Some(aig);
                    }
                }
                self.pop_gate(a, b);
            }
        }
        None
    }

    fn push_gate(&mut self, a: u32, b: u32, t: u64) -> usize {
        for lit in [a, b] {
            if let Some(j) = ((lit >> 1) as usize).checked_sub(self.n + 1) {
                self.consumers[j] += 1;
            }
        }
        self.sig.push(t);
        self.pairs.push((a, b));
        (0..self.pairs.len()).filter(|&j| self.consumers[j] == 0).count()
    }

    fn pop_gate(&mut self, a: u32, b: u32) {
        self.pairs.pop();
        self.sig.pop();
        for lit in [a, b] {
            if let Some(j) = ((lit >> 1) as usize).checked_sub(self.n + 1) {
                self.consumers[j] -= 1;
            }
        }
    }
}

fn fanin_tt(sig: &[u64], lit: u32, mask: u64) -> u64 {
    let t = sig[(lit >> 1) as usize];
    if lit & 1 == 1 {
        !t & mask
    } else {
        t
    }
}

/// Result of a breadth-first forward enumeration.
#[derive(Debug, Clone)]
pub struct ForwardEnumeration {
    /// `levels[k]` holds every function whose minimum size is exactly `k`,
    /// ascending; `levels[0]` is the constants and literals.
    pub levels: Vec<Vec<TruthTable>>,
    /// True when the memory cap stopped the enumeration early.
    pub truncated: bool,
}

impl ForwardEnumeration {
    /// Minimum size of `tt`, if it was reached.
    pub fn opt_of(&self, tt: &TruthTable) -> Option<usize> {
        self.levels.iter().position(|l| l.binary_search(tt).is_ok())
    }

    pub fn total_functions(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }
}

/// Functions in `levels[k]` whose every AND/NAND decomposition costs more
/// than `k` gates, i.e. the gap-1 slice of a forward enumeration.
///
/// Children range over completed levels summing to `k - 1`. Levels are
/// complement-closed, so the four fanin polarities collapse to membership
/// tests on `a AND b` and its complement.
pub fn slice_gap1(fwd: &ForwardEnumeration, k: usize) -> usize {
    assert!(k >= 1 && k < fwd.levels.len(), "level {k} was not enumerated");
    let n = fwd.levels[0][0].num_vars();
    let m = tt::mask(n);
    let level_k: HashSet<u64> = fwd.levels[k].iter().map(TruthTable::bits).collect();
    let mut tree_k: HashSet<u64> = HashSet::new();
    for j in 0..k {
        let jb = k - 1 - j;
        if jb < j {
            break;
        }
        for a in &fwd.levels[j] {
            for b in &fwd.levels[jb] {
                let p = a.bits() & b.bits();
                if level_k.contains(&p) {
                    tree_k.insert(p);
                }
                let q = !p & m;
                if level_k.contains(&q) {
                    tree_k.insert(q);
                }
            }
        }
    }
    fwd.levels[k].len() - tree_k.len()
}

pub const DEFAULT_MEMORY_CAP: u64 = 8 << 30;

/// Breadth-first closure over gate-function sets: every function computable
/// with `k` gates appears in level at most `k`, and the first level it
/// appears in is its exact minimum size.
///
/// A search state is the set of gate functions built so far, deduplicated
/// up to complementation; distinct circuits with equal sets reach exactly
/// the same extensions. Pairs drawing on one signal twice are skipped:
/// such a gate computes a copy or a constant and never shortens a circuit.
pub fn forward_enumerate(n: usize, max_gates: usize) -> ForwardEnumeration {
    forward_enumerate_capped(n, max_gates, DEFAULT_MEMORY_CAP)
}

/// [`forward_enumerate`] with an explicit memory cap in bytes; on overrun
/// the result is truncated at a level boundary and flagged.
pub fn forward_enumerate_capped(n: usize, max_gates: usize, cap_bytes: u64) -> ForwardEnumeration {
    let width = 1usize << n;
    assert!((1..=5).contains(&n), "forward enumeration supports 1 <= n <= 5");
    assert!(width * max_gates <= 128, "state packing exceeds 128 bits");
    let mask = tt::mask(n);
    let total_functions = 1u64 << (1 << n);

    let inputs: Vec<u64> = (1..=n).map(|v| TruthTable::var(n, v).bits()).collect();
    let mut first_seen: HashMap<u64, usize> = HashMap::new();
    first_seen.insert(0, 0);
    first_seen.insert(mask, 0);
    for &x in &inputs {
        first_seen.insert(x, 0);
        first_seen.insert(!x & mask, 0);
    }

    // Per-state bytes: packed key plus hash-set overhead.
    const STATE_BYTES: u64 = 48;
    let mut visited: HashSet<u128> = HashSet::new();
    let mut frontier: Vec<Vec<u64>> = vec![Vec::new()];
    let mut levels: Vec<Vec<u64>> = vec![first_seen.keys().copied().collect()];
    let mut truncated = false;

    for k in 1..=max_gates {
        if first_seen.len() as u64 == total_functions {
            // Closed: every later level is empty.
            levels.push(Vec::new());
            continue;
        }
        let mut next_frontier: Vec<Vec<u64>> = Vec::new();
        let mut new_functions: Vec<u64> = Vec::new();
        let storing = k < max_gates;
        'level: for state in &frontier {
            let signals: Vec<u64> = inputs.iter().chain(state.iter()).copied().collect();
            for ia in 0..signals.len() {
                for ib in (ia + 1)..signals.len() {
                    for pol in 0..4u32 {
                        let ta = if pol & 1 == 1 { !signals[ia] & mask } else { signals[ia] };
                        let tb = if pol & 2 == 2 { !signals[ib] & mask } else { signals[ib] };
                        let t = ta & tb;
                        for f in [t, !t & mask] {
                            if !first_seen.contains_key(&f) {
                                first_seen.insert(f, k);
                                new_functions.push(f);
                            }
                        }
                        if !storing {
                            continue;
                        }
                        let norm = t.min(!t & mask);
                        if state.binary_search(&norm).is_ok() {
                            continue;
                        }
                        let mut child = state.clone();
                        let pos = child.binary_search(&norm).unwrap_err();
                        child.insert(pos, norm);
                        if visited.insert(pack_state(&child, width)) {
                            next_frontier.push(child);
                        }
                    }
                }
            }
            let states = visited.len() + next_frontier.len() + frontier.len();
            if states as u64 * STATE_BYTES > cap_bytes {
                truncated = true;
                break 'level;
            }
        }
        new_functions.sort_unstable();
        levels.push(new_functions);
        if truncated {
            break;
        }
        frontier = next_frontier;
    }

    ForwardEnumeration {
        levels: levels
            .into_iter()
            .map(|l| {
                let mut v: Vec<TruthTable> =
                    l.into_iter().map(|bits| TruthTable::from_bits(n, bits)).collect();
                v.sort_unstable();
                v
            })
            .collect(),
        truncated,
    }
}

/// Packs a sorted state into a 128-bit key, one `2^n`-bit slot per entry.
fn pack_state(state: &[u64], width: usize) -> u128 {
    let mut key = 0u128;
    for (i, &t) in state.iter().enumerate() {
        key |= (t as u128) << (i * width);
    }
    key
}

/// Minimum size by unpruned forward enumeration; n <= 3 only. Cached per
/// input count, so repeated queries cost one map lookup.
pub fn oracle_opt(tt: &TruthTable) -> usize {
    let n = tt.num_vars();
    assert!((1..=3).contains(&n), "the oracle is exhaustive only for 1 <= n <= 3");
    static CACHES: [OnceLock<HashMap<u64, usize>>; 4] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let cache = CACHES[n].get_or_init(|| {
        let total = 1u64 << (1 << n);
        let mut map = HashMap::new();
        for k in 1.. {
            let fe = forward_enumerate(n, k);
            assert!(!fe.truncated);
            if fe.total_functions() as u64 == total {
                for (lvl, tts) in fe.levels.iter().enumerate() {
                    for t in tts {
                        map.insert(t.bits(), lvl);
                    }
                }
                break;
            }
        }
        map
    });
    cache[&tt.bits()]
}

/// Every dead-gate-free optimal circuit, structurally canonicalized, for
/// each function whose optimum `opt_of` reports; `opt_of` returning `None`
/// skips the function. One global pass enumerates circuits up to
/// `max_size` gates.
pub fn all_optimal_circuits(
    n: usize,
    max_size: usize,
    opt_of: impl Fn(&TruthTable) -> Option<usize>,
) -> HashMap<TruthTable, Vec<Aig>> {
    let mut found: HashMap<TruthTable, HashSet<Aig>> = HashMap::new();
    for bits in [0u64, tt::mask(n)] {
        let t = TruthTable::from_bits(n, bits);
        if opt_of(&t) == Some(0) {
            found.entry(t).or_default().insert(trivial_witness(&t).unwrap());
        }
    }
    for v in 1..=n {
        for t in [TruthTable::var(n, v), TruthTable::var(n, v).not()] {
            if opt_of(&t) == Some(0) {
                found.entry(t).or_default().insert(trivial_witness(&t).unwrap());
            }
        }
    }
    let mut enumerator = EnumAll {
        n,
        max: max_size,
        mask: tt::mask(n),
        sig: base_signals(n),
        pairs: Vec::new(),
        consumers: vec![0u32; max_size],
        opt_of: &opt_of,
        found: &mut found,
    };
    enumerator.place(0);
    let mut out: HashMap<TruthTable, Vec<Aig>> = HashMap::new();
    for (t, set) in found {
        let mut v: Vec<Aig> = set.into_iter().collect();
        v.sort_by_key(|c| {
            (c.gates().iter().map(|g| (g.fanin0.0, g.fanin1.0)).collect::<Vec<_>>(), c.output().0)
        });
        out.insert(t, v);
    }
    out
}

struct EnumAll<'a> {
    n: usize,
    max: usize,
    mask: u64,
    sig: Vec<u64>,
    pairs: Vec<(u32, u32)>,
    consumers: Vec<u32>,
    opt_of: &'a dyn Fn(&TruthTable) -> Option<usize>,
    found: &'a mut HashMap<TruthTable, HashSet<Aig>>,
}

impl EnumAll<'_> {
    fn place(&mut self, i: usize) {
        if i > 0 && (0..i).filter(|&j| self.consumers[j] == 0).count() == 1 {
            // Exactly the root is unconsumed: a complete circuit.
            let t = TruthTable::from_bits(self.n, self.sig[self.n + i]);
            for (f, compl) in [(t, false), (t.not(), true)] {
                if (self.opt_of)(&f) == Some(i) {
                    let gates =
                        self.pairs.iter().map(|&(a, b)| Gate::new(Literal(a), Literal(b))).collect();
                    let root = Literal::new(self.n + i, compl);
                    let aig = Aig::new(self.n, gates, root).structural_canonical();
                    self.found.entry(f).or_default().insert(aig);
                }
            }
        }
        if i == self.max {
            return;
        }
        let max_lit = 2 * (self.n + i) + 1;
        for a in 2..max_lit as u32 {
            for b in (a + 1)..=max_lit as u32 {
                if a >> 1 == b >> 1 {
                    continue;
                }
                if i > 0 {
                    let prev_var = (self.n + i) as u32;
                    if a >> 1 != prev_var && b >> 1 != prev_var && (a, b) <= self.pairs[i - 1] {
                        continue;
                    }
                }
                let t = fanin_tt(&self.sig, a, self.mask) & fanin_tt(&self.sig, b, self.mask);
                if self.sig.iter().any(|&s| s == t || s == !t & self.mask) {
                    continue;
                }
                let unconsumed = self.push_gate(a, b, t);
                if unconsumed <= self.max - i {
                    self.place(i + 1);
                }
                self.pop_gate(a, b);
            }
        }
    }

    fn push_gate(&mut self, a: u32, b: u32, t: u64) -> usize {
        for lit in [a, b] {
            if let Some(j) = ((lit >> 1) as usize).checked_sub(self.n + 1) {
                self.consumers[j] += 1;
            }
        }
        self.sig.push(t);
        self.pairs.push((a, b));
        (0..self.pairs.len()).filter(|&j| self.consumers[j] == 0).count()
    }

    fn pop_gate(&mut self, a: u32, b: u32) {
        self.pairs.pop();
        self.sig.pop();
        for lit in [a, b] {
            if let Some(j) = ((lit >> 1) as usize).checked_sub(self.n + 1) {
                self.consumers[j] -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tt3(hex: &str) -> TruthTable {
        TruthTable::from_hex(3, hex).unwrap()
    }

    #[test]
    fn trivial_functions_cost_zero() {
        let (k, w) = exact_opt(&TruthTable::one(3), 8).unwrap();
        assert_eq!(k, 0);
        assert_eq!(w.num_gates(), 0);
        let (k, _) = exact_opt(&TruthTable::var(4, 2).not(), 8).unwrap();
        assert_eq!(k, 0);
    }

    #[test]
    fn and2_needs_one_gate() {
        let (k, w) = exact_opt(&TruthTable::from_hex(2, "8").unwrap(), 8).unwrap();
        assert_eq!(k, 1);
        assert_eq!(w.truth_table().bits(), 0x8);
    }

    #[test]
    fn xor2_needs_three_gates() {
        let xor2 = TruthTable::from_hex(2, "6").unwrap();
        let (k, w) = exact_opt(&xor2, 8).unwrap();
        assert_eq!(k, 3);
        assert_eq!(w.truth_table(), xor2);
        assert!(w.sweep_dead().num_gates() == 3);
    }

    #[test]
    fn parity3_needs_six_gates() {
        let (k, w) = exact_opt(&tt3("96"), 6).unwrap();
        assert_eq!(k, 6);
        assert_eq!(w.truth_table(), tt3("96"));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        assert_eq!(exact_opt(&tt3("96"), 5), Err(ExceedsBudget(5)));
    }

    #[test]
    fn forward_levels_at_n3() {
        let fe = forward_enumerate(3, 6);
        assert!(!fe.truncated);
        let sizes: Vec<usize> = fe.levels.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![8, 24, 64, 30, 104, 8, 18]);
        assert_eq!(fe.total_functions(), 256);
        let gaps: Vec<usize> = (1..=6).map(|k| slice_gap1(&fe, k)).collect();
        assert_eq!(gaps, vec![0, 0, 0, 24, 0, 2]);
    }

    #[test]
    fn forward_slice_at_n5() {
        let fe = forward_enumerate(5, 4);
        assert!(!fe.truncated);
        let sizes: Vec<usize> = fe.levels.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![12, 80, 640, 4420, 25744]);
        assert_eq!(slice_gap1(&fe, 4), 1200);
    }

    #[test]
    fn parity4_exceeds_the_horizon() {
        let parity4 = TruthTable::from_hex(4, "6996").unwrap();
        assert_eq!(exact_opt(&parity4, 6), Err(ExceedsBudget(6)));
    }

    #[test]
    fn oracle_spot_checks() {
        assert_eq!(oracle_opt(&TruthTable::from_hex(2, "8").unwrap().pad(3)), 1);
        assert_eq!(oracle_opt(&tt3("96")), 6);
    }

    #[test]
    fn truncation_flag_on_tiny_cap() {
        let fe = forward_enumerate_capped(3, 6, 1024);
        assert!(fe.truncated);
        assert!(fe.total_functions() < 256);
    }

    #[test]
    fn all_optimal_small_cases() {
        let all = all_optimal_circuits(2, 3, |t| Some(oracle_opt(t)));
        let and2 = TruthTable::from_hex(2, "8").unwrap();
        assert_eq!(all[&and2].len(), 1);
        let xor2 = TruthTable::from_hex(2, "6").unwrap();
        for c in &all[&xor2] {
            assert_eq!(c.num_gates(), 3);
            assert_eq!(c.truth_table(), xor2);
            assert!(c.sweep_dead().num_gates() == 3);
        }
        assert!(!all[&xor2].is_empty());
    }
}
