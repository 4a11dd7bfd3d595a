//! And-inverter graphs: 2-input AND gates plus free edge complementation.
//!
//! Variable indexing matches the AIGER convention. Variable 0 is the
//! constant (literal 0 is false, literal 1 is true), variables `1..=n` are
//! the primary inputs, and gate `j` (0-based) is variable `n + 1 + j`.
//! Circuit size is the number of AND gates; inverters are free.

use crate::npn::NpnTransform;
use crate::tt::TruthTable;

/// An edge: `2 * var + complement`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(pub u32);

impl Literal {
    pub const FALSE: Literal = Literal(0);
    pub const TRUE: Literal = Literal(1);

    pub fn new(var: usize, complemented: bool) -> Self {
        Literal((var as u32) << 1 | complemented as u32)
    }

    /// Positive literal of input `i` (1-based).
    pub fn input(i: usize) -> Self {
        assert!(i >= 1);
        Literal::new(i, false)
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_complemented(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn not(self) -> Self {
        Literal(self.0 ^ 1)
    }

    /// This literal complemented iff `c` is true.
    pub fn xor(self, c: bool) -> Self {
        Literal(self.0 ^ c as u32)
    }

    pub fn is_constant(self) -> bool {
        self.var() == 0
    }
}

impl std::fmt::Debug for Literal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_complemented() {
            write!(f, "!v{}", self.var())
        } else {
            write!(f, "v{}", self.var())
        }
    }
}

/// One AND gate. Stored with `fanin0 <= fanin1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Gate {
    pub fanin0: Literal,
    pub fanin1: Literal,
}

impl Gate {
    pub fn new(a: Literal, b: Literal) -> Self {
        if a <= b {
            Gate { fanin0: a, fanin1: b }
        } else {
            Gate { fanin0: b, fanin1: a }
        }
    }
}

/// A structural validity violation found by [`Aig::validate`].
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("gate {gate} fanin references variable {var}, not earlier than the gate")]
    FaninNotEarlier { gate: usize, var: usize },
    #[error("output references out-of-range variable {var}")]
    OutputOutOfRange { var: usize },
}

/// An and-inverter graph with one output.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Aig {
    num_inputs: usize,
    gates: Vec<Gate>,
    output: Literal,
}

impl Aig {
    /// Builds a circuit; panics if the gate list is not topologically valid.
    pub fn new(num_inputs: usize, gates: Vec<Gate>, output: Literal) -> Self {
        let gates = gates
            .into_iter()
            .map(|g| Gate::new(g.fanin0, g.fanin1))
            .collect();
        let aig = Aig { num_inputs, gates, output };
        if let Err(v) = aig.validate() {
            panic!("invalid aig: {:?}", v);
        }
        aig
    }

    /// A circuit with no gates whose output is a constant or input literal.
    pub fn constant_or_literal(num_inputs: usize, output: Literal) -> Self {
        Aig::new(num_inputs, Vec::new(), output)
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> Literal {
        self.output
    }

    /// Variable index of gate `j` (0-based).
    pub fn gate_var(&self, j: usize) -> usize {
        self.num_inputs + 1 + j
    }

    /// Gate index of variable `var`, if it is a gate.
    pub fn var_gate(&self, var: usize) -> Option<usize> {
        (var > self.num_inputs && var <= self.num_inputs + self.gates.len())
            .then(|| var - self.num_inputs - 1)
    }

    /// Checks fanin ordering and literal ranges.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        for (j, g) in self.gates.iter().enumerate() {
            let gate_var = self.gate_var(j);
            for lit in [g.fanin0, g.fanin1] {
                if lit.var() >= gate_var {
                    violations.push(Violation::FaninNotEarlier { gate: j, var: lit.var() });
                }
            }
        }
        if self.output.var() > self.num_inputs + self.gates.len() {
            violations.push(Violation::OutputOutOfRange { var: self.output.var() });
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Truth table of every variable, indexed by variable number.
    pub fn simulate(&self) -> Vec<TruthTable> {
        let n = self.num_inputs;
        let mut tts = Vec::with_capacity(n + 1 + self.gates.len());
        tts.push(TruthTable::zero(n));
        for v in 1..=n {
            tts.push(TruthTable::var(n, v));
        }
        for g in &self.gates {
            let a = lit_tt(&tts, g.fanin0);
            let b = lit_tt(&tts, g.fanin1);
            tts.push(a.and(&b));
        }
        tts
    }

    /// The function computed at the output.
    pub fn truth_table(&self) -> TruthTable {
        let tts = self.simulate();
        lit_tt(&tts, self.output)
    }

    /// The function computed by gate `j` over the primary inputs.
    pub fn gate_function(&self, j: usize) -> TruthTable {
        let tts = self.simulate();
        tts[self.gate_var(j)]
    }

    /// Consumer count per variable; the output edge counts as one consumer.
    pub fn fanout_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_inputs + 1 + self.gates.len()];
        for g in &self.gates {
            counts[g.fanin0.var()] += 1;
            counts[g.fanin1.var()] += 1;
        }
        counts[self.output.var()] += 1;
        counts
    }

    /// Gate indices in the transitive fanin of gate `j`, including `j`,
    /// ascending.
    pub fn cone(&self, j: usize) -> Vec<usize> {
        let mut seen = vec![false; self.gates.len()];
        let mut stack = vec![j];
        while let Some(g) = stack.pop() {
            if seen[g] {
                continue;
            }
            seen[g] = true;
            for lit in [self.gates[g].fanin0, self.gates[g].fanin1] {
                if let Some(k) = self.var_gate(lit.var()) {
                    stack.push(k);
                }
            }
        }
        (0..self.gates.len()).filter(|&g| seen[g]).collect()
    }

    /// Removes gates unreachable from the output and renumbers.
    pub fn sweep_dead(&self) -> Aig {
        let live: Vec<usize> = match self.var_gate(self.output.var()) {
            Some(root) => self.cone(root),
            None => Vec::new(),
        };
        let mut var_map = vec![u32::MAX; self.num_inputs + 1 + self.gates.len()];
        for v in 0..=self.num_inputs {
            var_map[v] = v as u32;
        }
        let mut gates = Vec::with_capacity(live.len());
        for (new_j, &old_j) in live.iter().enumerate() {
            let g = self.gates[old_j];
            let map = |l: Literal| Literal::new(var_map[l.var()] as usize, l.is_complemented());
            gates.push(Gate::new(map(g.fanin0), map(g.fanin1)));
            var_map[self.gate_var(old_j)] = (self.num_inputs + 1 + new_j) as u32;
        }
        let out = Literal::new(var_map[self.output.var()] as usize, self.output.is_complemented());
        Aig::new(self.num_inputs, gates, out)
    }

    /// True iff every gate has fan-out exactly 1, i.e. the circuit is a
    /// formula. Expects a dead-swept circuit; a gate-free circuit is a tree.
    pub fn is_tree(&self) -> bool {
        let counts = self.fanout_counts();
        (0..self.gates.len()).all(|j| counts[self.gate_var(j)] == 1)
    }

    /// Applies an NPN transform: computes `t.apply(f)` where `f` is this
    /// circuit's function. Gate count is preserved.
    pub fn transform(&self, t: &NpnTransform) -> Aig {
        assert_eq!(t.num_vars(), self.num_inputs);
        let map = |l: Literal| -> Literal {
            let v = l.var();
            if v >= 1 && v <= self.num_inputs {
                let neg = (t.input_neg() >> (v - 1)) & 1 == 1;
                Literal::new(t.perm(v - 1) + 1, l.is_complemented() ^ neg)
            } else {
                l
            }
        };
        let gates = self.gates.iter().map(|g| Gate::new(map(g.fanin0), map(g.fanin1))).collect();
        Aig::new(self.num_inputs, gates, map(self.output).xor(t.output_neg()))
    }

    /// Canonical relabeling for structural deduplication: gates sorted by
    /// (depth level, fanin pair) with ties impossible among distinct gates
    /// of a deduplicated circuit.
    pub fn structural_canonical(&self) -> Aig {
        let n = self.num_inputs;
        let k = self.gates.len();
        let mut level = vec![0usize; n + 1 + k];
        for (j, g) in self.gates.iter().enumerate() {
            level[self.gate_var(j)] = 1 + level[g.fanin0.var()].max(level[g.fanin1.var()]);
        }
        let mut var_map = vec![u32::MAX; n + 1 + k];
        for v in 0..=n {
            var_map[v] = v as u32;
        }
        let mut placed = vec![false; k];
        let mut gates: Vec<Gate> = Vec::with_capacity(k);
        while gates.len() < k {
            // Among gates whose fanins are already relabeled, place the one
            // with the smallest (level, mapped fanin pair).
            let mut best: Option<(usize, (u32, u32), usize)> = None;
            for j in 0..k {
                if placed[j] {
                    continue;
                }
                let g = self.gates[j];
                if var_map[g.fanin0.var()] == u32::MAX || var_map[g.fanin1.var()] == u32::MAX {
                    continue;
                }
                let a = var_map[g.fanin0.var()] << 1 | g.fanin0.is_complemented() as u32;
                let b = var_map[g.fanin1.var()] << 1 | g.fanin1.is_complemented() as u32;
                let key = (level[self.gate_var(j)], (a.min(b), a.max(b)), j);
                if best.map_or(true, |bk| (key.0, key.1) < (bk.0, bk.1)) {
                    best = Some(key);
                }
            }
            let (_, (a, b), j) = best.expect("acyclic circuit always has a placeable gate");
            placed[j] = true;
            var_map[self.gate_var(j)] = (n + 1 + gates.len()) as u32;
            gates.push(Gate::new(Literal(a), Literal(b)));
        }
        let out = Literal::new(var_map[self.output.var()] as usize, self.output.is_complemented());
        Aig::new(n, gates, out)
    }
}

fn lit_tt(tts: &[TruthTable], lit: Literal) -> TruthTable {
    let t = tts[lit.var()];
    if lit.is_complemented() {
        t.not()
    } else {
        t
    }
}

/// Incremental construction helper used by templates, the grammar, and
/// rewriting.
#[derive(Clone, Debug)]
pub struct AigBuilder {
    num_inputs: usize,
    gates: Vec<Gate>,
}

impl AigBuilder {
    pub fn new(num_inputs: usize) -> Self {
        AigBuilder { num_inputs, gates: Vec::new() }
    }

    /// Adds an AND gate and returns its positive literal.
    pub fn and(&mut self, a: Literal, b: Literal) -> Literal {
        self.gates.push(Gate::new(a, b));
        Literal::new(self.num_inputs + self.gates.len(), false)
    }

    /// `!(a & b)`.
    pub fn nand(&mut self, a: Literal, b: Literal) -> Literal {
        self.and(a, b).not()
    }

    /// `a | b` as `!(!a & !b)`.
    pub fn or(&mut self, a: Literal, b: Literal) -> Literal {
        self.nand(a.not(), b.not())
    }

    /// `a ^ b` as `!(!(a & !b) & !(!a & b))`; three gates.
    pub fn xor(&mut self, a: Literal, b: Literal) -> Literal {
        let p = self.and(a, b.not());
        let q = self.and(a.not(), b);
        self.or(p, q)
    }

    /// `s ? a : b` as `!(!(s & a) & !(!s & b))`; three gates.
    pub fn mux(&mut self, s: Literal, a: Literal, b: Literal) -> Literal {
        let p = self.and(s, a);
        let q = self.and(s.not(), b);
        self.or(p, q)
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn finish(self, output: Literal) -> Aig {
        Aig::new(self.num_inputs, self.gates, output)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and2() -> Aig {
        let mut b = AigBuilder::new(2);
        let g = b.and(Literal::input(1), Literal::input(2));
        b.finish(g)
    }

    /// 4-gate circuit computing `(x1 & x2) ^ !x3`: the shared gate feeds one
    /// arm positive and the other complemented.
    pub(crate) fn xor_of_and_template() -> Aig {
        let mut b = AigBuilder::new(3);
        let g0 = b.and(Literal::input(1), Literal::input(2));
        let g1 = b.and(Literal::input(3), g0);
        let g2 = b.and(Literal::input(3).not(), g0.not());
        let out = b.or(g1, g2);
        b.finish(out)
    }

    #[test]
    fn and2_truth_table() {
        assert_eq!(and2().truth_table().bits(), 0x8);
    }

    #[test]
    fn template_computes_0x87() {
        let aig = xor_of_and_template();
        assert_eq!(aig.num_gates(), 4);
        assert_eq!(aig.truth_table().to_hex(), "87");
    }

    #[test]
    fn template_fanouts() {
        let aig = xor_of_and_template();
        let counts = aig.fanout_counts();
        assert_eq!(counts[aig.gate_var(0)], 2); // shared gate
        assert_eq!(counts[aig.gate_var(1)], 1);
        assert_eq!(counts[aig.gate_var(2)], 1);
        assert_eq!(counts[aig.gate_var(3)], 1); // output edge
        assert!(!aig.is_tree());
    }

    #[test]
    fn template_cones_overlap_in_shared_gate() {
        let aig = xor_of_and_template();
        assert_eq!(aig.cone(1), vec![0, 1]);
        assert_eq!(aig.cone(2), vec![0, 2]);
        assert_eq!(aig.cone(3), vec![0, 1, 2, 3]);
    }

    #[test]
    fn sweep_removes_dead_gates() {
        let mut b = AigBuilder::new(2);
        let _dead = b.and(Literal::input(1), Literal::input(2).not());
        let live = b.and(Literal::input(1), Literal::input(2));
        let aig = b.finish(live);
        let swept = aig.sweep_dead();
        assert_eq!(swept.num_gates(), 1);
        assert_eq!(swept.truth_table(), aig.truth_table());
    }

    #[test]
    fn constant_output_circuit() {
        let aig = Aig::constant_or_literal(3, Literal::TRUE);
        assert_eq!(aig.truth_table(), crate::tt::TruthTable::one(3));
        assert!(aig.is_tree());
        assert_eq!(aig.sweep_dead().num_gates(), 0);
    }

    #[test]
    fn transform_preserves_size_and_tracks_function() {
        use crate::npn::all_transforms;
        let aig = xor_of_and_template();
        let f = aig.truth_table();
        for t in all_transforms(3).iter().step_by(11) {
            let timg = aig.transform(t);
            assert_eq!(timg.num_gates(), aig.num_gates());
            assert_eq!(timg.truth_table(), t.apply(&f));
        }
    }

    #[test]
    fn structural_canonical_is_stable() {
        let aig = xor_of_and_template();
        let c = aig.structural_canonical();
        assert_eq!(c.truth_table(), aig.truth_table());
        assert_eq!(c.structural_canonical(), c);
        // Reordering the two middle (independent) gates canonicalizes back.
        let mut b = AigBuilder::new(3);
        let g0 = b.and(Literal::input(1), Literal::input(2));
        let g2 = b.and(Literal::input(3).not(), g0.not());
        let g1 = b.and(Literal::input(3), g0);
        let out = b.or(g1, g2);
        let reordered = b.finish(out);
        assert_eq!(reordered.structural_canonical(), c);
    }

    #[test]
    fn validate_catches_forward_reference() {
        let g = Gate::new(Literal::new(5, false), Literal::input(1));
        let aig = Aig { num_inputs: 2, gates: vec![g], output: Literal::new(3, false) };
        assert!(matches!(
            aig.validate().unwrap_err()[0],
            Violation::FaninNotEarlier { gate: 0, var: 5 }
        ));
    }
}
