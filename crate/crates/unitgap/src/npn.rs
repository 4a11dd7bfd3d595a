//! NPN equivalence: input permutation, input negation, output negation.
//!
//! Two functions are NPN-equivalent when one maps onto the other under some
//! combination of the three operations. The canonical representative of a
//! class is the member with the smallest raw bit value; it is found by
//! exhaustive search over all `n! * 2^(n+1)` transforms, which is the right
//! tool at n <= 6.

use crate::tt::TruthTable;

/// One NPN transform: substitute `x_j -> x_{perm(j)} ^ neg_j`, then
/// optionally complement the output.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct NpnTransform {
    n: u8,
    /// perm[j] is the 0-based image of 0-based input j.
    perm: [u8; 6],
    /// Bit j set: input j+1 enters complemented.
    input_neg: u8,
    /// Complement the output.
    output_neg: bool,
}

impl NpnTransform {
    /// The identity transform on `n` variables.
    pub fn identity(n: usize) -> Self {
        let mut perm = [0u8; 6];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i as u8;
        }
        NpnTransform { n: n as u8, perm, input_neg: 0, output_neg: false }
    }

    /// Builds a transform from a 0-based permutation, negation mask, and
    /// output flag.
    pub fn new(perm: &[u8], input_neg: u8, output_neg: bool) -> Self {
        let n = perm.len();
        assert!(n <= 6);
        let mut check = 0u8;
        let mut p = [0u8; 6];
        for (i, &v) in perm.iter().enumerate() {
            assert!((v as usize) < n, "permutation image out of range");
            check |= 1 << v;
            p[i] = v;
        }
        assert_eq!(check, ((1u16 << n) - 1) as u8, "not a permutation");
        NpnTransform { n: n as u8, perm: p, input_neg: input_neg & check, output_neg }
    }

    pub fn num_vars(&self) -> usize {
        self.n as usize
    }

    /// 0-based image of 0-based input `j`.
    pub fn perm(&self, j: usize) -> usize {
        self.perm[j] as usize
    }

    pub fn input_neg(&self) -> u8 {
        self.input_neg
    }

    pub fn output_neg(&self) -> bool {
        self.output_neg
    }

    /// Applies the transform to a truth table.
    pub fn apply(&self, tt: &TruthTable) -> TruthTable {
        assert_eq!(tt.num_vars(), self.n as usize);
        let n = self.n as usize;
        let mut out = 0u64;
        for row in 0..tt.num_rows() {
            let mut src = 0usize;
            for j in 0..n {
                let bit = (row >> self.perm[j]) & 1 != 0;
                if bit != ((self.input_neg >> j) & 1 != 0) {
                    src |= 1 << j;
                }
            }
            if tt.evaluate(src) != self.output_neg {
                out |= 1 << row;
            }
        }
        TruthTable::from_bits(n, out)
    }

    /// The transform `t` with `t.apply(f) == second.apply(first.apply(f))`.
    pub fn compose(second: &Self, first: &Self) -> Self {
        assert_eq!(second.n, first.n);
        let n = first.n as usize;
        let mut perm = [0u8; 6];
        let mut neg = 0u8;
        for j in 0..n {
            let mid = first.perm[j] as usize;
            perm[j] = second.perm[mid];
            let nv = ((first.input_neg >> j) & 1) ^ ((second.input_neg >> mid) & 1);
            neg |= nv << j;
        }
        NpnTransform {
            n: first.n,
            perm,
            input_neg: neg,
            output_neg: first.output_neg ^ second.output_neg,
        }
    }

    /// The transform undoing this one.
    pub fn inverse(&self) -> Self {
        let n = self.n as usize;
        let mut perm = [0u8; 6];
        let mut neg = 0u8;
        for j in 0..n {
            let img = self.perm[j] as usize;
            perm[img] = j as u8;
            neg |= (((self.input_neg >> j) & 1) as u8) << img;
        }
        NpnTransform { n: self.n, perm, input_neg: neg, output_neg: self.output_neg }
    }
}

/// All `n! * 2^(n+1)` transforms on `n` variables, in a fixed order.
pub fn all_transforms(n: usize) -> Vec<NpnTransform> {
    assert!(n <= 6);
    let mut out = Vec::with_capacity(factorial(n) << (n + 1));
    let mut perm: Vec<u8> = (0..n as u8).collect();
    permutations(&mut perm, 0, &mut |p| {
        for input_neg in 0..(1u16 << n) {
            for output_neg in [false, true] {
                out.push(NpnTransform::new(p, input_neg as u8, output_neg));
            }
        }
    });
    out
}

fn permutations(items: &mut [u8], k: usize, emit: &mut impl FnMut(&[u8])) {
    if k == items.len() {
        emit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, emit);
        items.swap(k, i);
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}

/// Canonical representative of `tt`'s NPN class plus a transform `t`
/// with `t.apply(tt) == rep`. The representative is the orbit member with
/// the smallest bit value; ties between transforms resolve to the first in
/// enumeration order.
pub fn npn_canonical(tt: &TruthTable) -> (TruthTable, NpnTransform) {
    let mut best = *tt;
    let mut best_t = NpnTransform::identity(tt.num_vars());
    for t in all_transforms(tt.num_vars()) {
        let img = t.apply(tt);
        if img < best {
            best = img;
            best_t = t;
        }
    }
    (best, best_t)
}

/// All distinct members of `tt`'s NPN class, ascending.
pub fn npn_orbit(tt: &TruthTable) -> Vec<TruthTable> {
    let mut members: Vec<TruthTable> =
        all_transforms(tt.num_vars()).iter().map(|t| t.apply(tt)).collect();
    members.sort();
    members.dedup();
    members
}

/// Summary of one NPN class.
#[derive(Clone, Debug)]
pub struct NpnClass {
    pub rep: TruthTable,
    pub orbit_size: usize,
}

/// All NPN classes at `n`, each listed once by its canonical representative,
/// ascending by representative. Every truth table is assigned to exactly one
/// class; orbit sizes sum to `2^(2^n)`.
pub fn npn_classes(n: usize) -> Vec<NpnClass> {
    assert!(n <= 4, "class enumeration over all tables is for n <= 4");
    let total = 1usize << (1 << n);
    let transforms = all_transforms(n);
    let mut assigned = vec![false; total];
    let mut classes = Vec::new();
    for bits in 0..total as u64 {
        if assigned[bits as usize] {
            continue;
        }
        // Scanning ascending, the first unassigned member is the minimum of
        // its orbit, hence the canonical representative.
        let rep = TruthTable::from_bits(n, bits);
        let mut orbit_size = 0;
        for t in &transforms {
            let img = t.apply(&rep);
            let idx = img.bits() as usize;
            if !assigned[idx] {
                assigned[idx] = true;
                orbit_size += 1;
            }
        }
        classes.push(NpnClass { rep, orbit_size });
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_inverse() {
        let f = TruthTable::from_hex(3, "ca").unwrap();
        let id = NpnTransform::identity(3);
        assert_eq!(id.apply(&f), f);
        for t in all_transforms(3).iter().step_by(7) {
            let inv = t.inverse();
            assert_eq!(inv.apply(&t.apply(&f)), f);
            assert_eq!(t.apply(&inv.apply(&f)), f);
        }
    }

    #[test]
    fn compose_matches_sequential_application() {
        let f = TruthTable::from_hex(3, "96").unwrap();
        let g = TruthTable::from_hex(3, "1b").unwrap();
        let ts = all_transforms(3);
        for (a, b) in [(3usize, 77usize), (10, 51), (95, 0)] {
            let t = NpnTransform::compose(&ts[b], &ts[a]);
            assert_eq!(t.apply(&f), ts[b].apply(&ts[a].apply(&f)));
            assert_eq!(t.apply(&g), ts[b].apply(&ts[a].apply(&g)));
        }
    }

    #[test]
    fn transform_count() {
        assert_eq!(all_transforms(3).len(), 6 * 16);
        assert_eq!(all_transforms(4).len(), 24 * 32);
    }

    #[test]
    fn parity_orbit_is_two() {
        let p = TruthTable::from_hex(3, "96").unwrap();
        let orbit = npn_orbit(&p);
        assert_eq!(orbit.len(), 2);
        assert_eq!(orbit[0].to_hex(), "69");
        assert_eq!(orbit[1].to_hex(), "96");
    }

    #[test]
    fn canonical_is_orbit_minimum() {
        let f = TruthTable::from_hex(3, "e8").unwrap(); // majority
        let (rep, t) = npn_canonical(&f);
        assert_eq!(t.apply(&f), rep);
        assert_eq!(npn_orbit(&f)[0], rep);
    }

    #[test]
    fn class_counts_small_n() {
        assert_eq!(npn_classes(2).len(), 4);
        let c3 = npn_classes(3);
        assert_eq!(c3.len(), 14);
        assert_eq!(c3.iter().map(|c| c.orbit_size).sum::<usize>(), 256);
    }
}
