//! Truth tables for Boolean functions on up to 6 variables.
//!
//! A function on `n` variables is stored as the low `2^n` bits of a `u64`.
//! Bit `i` holds the function value at the assignment whose binary encoding
//! is `i`, with `x1` in the least-significant position. So for `n = 3`,
//! `x1 & x2` is `0x88` and three-way parity is `0x96`.

use std::fmt;

/// Largest supported variable count.
pub const MAX_VARS: usize = 6;

/// A Boolean function on `n <= 6` variables, packed into a `u64`.
///
/// Invariant: bits above position `2^n - 1` are zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruthTable {
    n: u8,
    bits: u64,
}

/// Error raised when parsing a hex truth table string.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseTtError {
    #[error("expected {expected} hex digits for n={n}, got {got}")]
    WrongLength { n: u8, expected: usize, got: usize },
    #[error("invalid hex digit {0:?}")]
    BadDigit(char),
}

impl TruthTable {
    /// Builds a table from raw bits; bits above `2^n` are masked off.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        assert!(n <= MAX_VARS, "n = {n} out of range");
        TruthTable {
            n: n as u8,
            bits: bits & mask(n),
        }
    }

    /// The constant-false function.
    pub fn zero(n: usize) -> Self {
        Self::from_bits(n, 0)
    }

    /// The constant-true function.
    pub fn one(n: usize) -> Self {
        Self::from_bits(n, !0)
    }

    /// The projection onto variable `v` (1-based).
    pub fn var(n: usize, v: usize) -> Self {
        assert!(v >= 1 && v <= n, "variable x{v} out of range for n={n}");
        Self::from_bits(n, var_mask(n, v))
    }

    /// Number of variables.
    pub fn num_vars(&self) -> usize {
        self.n as usize
    }

    /// Raw bit representation (low `2^n` bits).
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Number of rows, `2^n`.
    pub fn num_rows(&self) -> usize {
        1 << self.n
    }

    /// Function value at the assignment encoded by `row`.
    pub fn evaluate(&self, row: usize) -> bool {
        assert!(row < self.num_rows(), "row {row} out of range");
        (self.bits >> row) & 1 == 1
    }

    /// True iff the function is a constant.
    pub fn is_constant(&self) -> bool {
        self.bits == 0 || self.bits == mask(self.n as usize)
    }

    /// True iff the function is a constant or a literal `x_v` / `!x_v`.
    pub fn is_trivial(&self) -> bool {
        if self.is_constant() {
            return true;
        }
        (1..=self.n as usize).any(|v| {
            let m = var_mask(self.n as usize, v);
            self.bits == m || self.bits == !m & mask(self.n as usize)
        })
    }

    /// Pointwise AND.
    pub fn and(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_bits(self.n as usize, self.bits & other.bits)
    }

    /// Pointwise OR.
    pub fn or(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_bits(self.n as usize, self.bits | other.bits)
    }

    /// Pointwise XOR.
    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_bits(self.n as usize, self.bits ^ other.bits)
    }

    /// Complement.
    pub fn not(&self) -> Self {
        Self::from_bits(self.n as usize, !self.bits)
    }

    /// Cofactor with variable `v` (1-based) fixed to `value`.
    ///
    /// The result is still a function on `n` variables; it just ignores `x_v`.
    pub fn cofactor(&self, v: usize, value: bool) -> Self {
        assert!(v >= 1 && v <= self.n as usize);
        let m = var_mask(self.n as usize, v);
        let stride = 1u32 << (v - 1);
        let kept = if value { self.bits & m } else { self.bits & !m };
        // Copy each kept half onto the other half so the result ignores x_v.
        let spread = if value { kept | (kept >> stride) } else { kept | (kept << stride) };
        Self::from_bits(self.n as usize, spread)
    }

    /// True iff the function depends on variable `v`.
    pub fn depends_on(&self, v: usize) -> bool {
        let m = var_mask(self.n as usize, v);
        let stride = 1u32 << (v - 1);
        ((self.bits & m) >> stride) != self.bits & !m & mask(self.n as usize)
    }

    /// Essential variable count and mask (bit `v-1` set iff `x_v` essential).
    pub fn essential_variables(&self) -> (usize, u8) {
        let mut count = 0;
        let mut vars = 0u8;
        for v in 1..=self.n as usize {
            if self.depends_on(v) {
                count += 1;
                vars |= 1 << (v - 1);
            }
        }
        (count, vars)
    }

    /// Reinterprets the function over `m >= n` variables; the new variables
    /// are don't-cares. Preserves opt, tree, and gap.
    pub fn pad(&self, m: usize) -> Self {
        assert!(m >= self.n as usize && m <= MAX_VARS);
        let rows = self.num_rows();
        let mut bits = self.bits;
        let mut have = rows;
        while have < (1 << m) {
            bits |= bits << have;
            have <<= 1;
        }
        Self::from_bits(m, bits)
    }

    /// Lowercase hex rendering, `2^n / 4` digits, most-significant nibble first.
    pub fn to_hex(&self) -> String {
        let digits = hex_digits(self.n as usize);
        format!("{:0width$x}", self.bits, width = digits)
    }

    /// Parses the rendering produced by [`TruthTable::to_hex`].
    pub fn from_hex(n: usize, s: &str) -> Result<Self, ParseTtError> {
        assert!(n <= MAX_VARS);
        let expected = hex_digits(n);
        if s.len() != expected {
            return Err(ParseTtError::WrongLength { n: n as u8, expected, got: s.len() });
        }
        let mut bits = 0u64;
        for c in s.chars() {
            let d = c.to_digit(16).ok_or(ParseTtError::BadDigit(c))? as u64;
            bits = (bits << 4) | d;
        }
        Ok(Self::from_bits(n, bits))
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, 0x{})", self.n, self.to_hex())
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Low `2^n` bits set.
pub fn mask(n: usize) -> u64 {
    if n == MAX_VARS {
        !0
    } else {
        (1u64 << (1 << n)) - 1
    }
}

/// Hex digits used to render a table on `n` variables (at least one).
pub fn hex_digits(n: usize) -> usize {
    ((1usize << n) / 4).max(1)
}

/// Bits of the projection function `x_v` over `n` variables.
fn var_mask(n: usize, v: usize) -> u64 {
    debug_assert!(v >= 1 && v <= n);
    let mut m = 0u64;
    for row in 0..(1usize << n) {
        if (row >> (v - 1)) & 1 == 1 {
            m |= 1 << row;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and2_is_0x8() {
        let f = TruthTable::var(2, 1).and(&TruthTable::var(2, 2));
        assert_eq!(f.bits(), 0x8);
        assert_eq!(f.to_hex(), "8");
    }

    #[test]
    fn parity3_is_0x96() {
        let p = TruthTable::var(3, 1)
            .xor(&TruthTable::var(3, 2))
            .xor(&TruthTable::var(3, 3));
        assert_eq!(p.to_hex(), "96");
        assert!(p.evaluate(1));
        assert!(p.evaluate(2));
        assert!(!p.evaluate(3));
        assert!(p.evaluate(7));
    }

    #[test]
    fn evaluate_row_encoding() {
        // x1 is the least-significant position of the row index.
        let x1 = TruthTable::var(3, 1);
        assert!(x1.evaluate(1));
        assert!(!x1.evaluate(2));
        assert!(x1.evaluate(5));
    }

    #[test]
    fn essential_variables_counts() {
        let f = TruthTable::var(4, 1).and(&TruthTable::var(4, 3));
        assert_eq!(f.essential_variables(), (2, 0b101));
        assert_eq!(TruthTable::zero(4).essential_variables(), (0, 0));
        let p = TruthTable::var(3, 1)
            .xor(&TruthTable::var(3, 2))
            .xor(&TruthTable::var(3, 3));
        assert_eq!(p.essential_variables(), (3, 0b111));
    }

    #[test]
    fn cofactor_fixes_one_variable() {
        let p = TruthTable::from_hex(3, "96").unwrap();
        let c0 = p.cofactor(3, false);
        let c1 = p.cofactor(3, true);
        // parity cofactors by x3 are xor2 and xnor2, padded over 3 vars
        let xor2 = TruthTable::var(3, 1).xor(&TruthTable::var(3, 2));
        assert_eq!(c0, xor2);
        assert_eq!(c1, xor2.not());
        assert!(!c0.depends_on(3));
    }

    #[test]
    fn pad_replicates_blocks() {
        let and2 = TruthTable::from_bits(2, 0x8);
        assert_eq!(and2.pad(3).bits(), 0x88);
        assert_eq!(and2.pad(4).bits(), 0x8888);
        assert_eq!(and2.pad(3).essential_variables(), (2, 0b011));
    }

    #[test]
    fn hex_round_trip() {
        for bits in [0x00u64, 0x96, 0xff, 0x5a] {
            let t = TruthTable::from_bits(3, bits);
            assert_eq!(TruthTable::from_hex(3, &t.to_hex()).unwrap(), t);
        }
        let t4 = TruthTable::from_bits(4, 0x01ef);
        assert_eq!(t4.to_hex(), "01ef");
        assert_eq!(TruthTable::from_hex(4, "01ef").unwrap(), t4);
        assert!(TruthTable::from_hex(4, "1ef").is_err());
        assert!(TruthTable::from_hex(3, "zz").is_err());
    }

    #[test]
    fn trivial_detection() {
        assert!(TruthTable::zero(3).is_trivial());
        assert!(TruthTable::one(3).is_trivial());
        assert!(TruthTable::var(3, 2).is_trivial());
        assert!(TruthTable::var(3, 2).not().is_trivial());
        assert!(!TruthTable::from_hex(3, "88").unwrap().is_trivial());
        // 8 trivial functions at n=3
        let trivial = (0..256)
            .filter(|&b| TruthTable::from_bits(3, b).is_trivial())
            .count();
        assert_eq!(trivial, 8);
    }
}
