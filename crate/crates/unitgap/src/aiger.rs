//! ASCII AIGER (`aag`) reading and writing for single-output,
//! combinational circuits.
//!
//! The header is `aag M I L O A` with `M = I + A`, no latches, one output.
//! Gate definitions appear in ascending variable order, so files round-trip
//! byte for byte.

use crate::aig::{Aig, Gate, Literal};

/// A parse failure, tagged with the 1-based line it occurred on.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseAigerError {
    pub line: usize,
    pub kind: AigerErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AigerErrorKind {
    #[error("missing header")]
    MissingHeader,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("expected {expected} on this line, found {found:?}")]
    WrongTokenCount { expected: &'static str, found: usize },
    #[error("bad literal token {0:?}")]
    BadLiteral(String),
    #[error("gate defines literal {found}, expected {expected}")]
    NonMonotoneGate { expected: u32, found: u32 },
    #[error("gate fanin {fanin} does not precede the gate variable")]
    ForwardFanin { fanin: u32 },
    #[error("literal {0} exceeds the declared maximum variable")]
    LiteralOutOfRange(u32),
    #[error("file ends before all declared sections")]
    UnexpectedEof,
}

fn err(line: usize, kind: AigerErrorKind) -> ParseAigerError {
    ParseAigerError { line, kind }
}

/// Serializes a circuit as ASCII AIGER.
pub fn to_aiger(aig: &Aig) -> String {
    let n = aig.num_inputs();
    let a = aig.num_gates();
    let mut s = format!("aag {} {} 0 1 {}\n", n + a, n, a);
    for i in 1..=n {
        s.push_str(&format!("{}\n", 2 * i));
    }
    s.push_str(&format!("{}\n", aig.output().0));
    for (j, g) in aig.gates().iter().enumerate() {
        s.push_str(&format!("{} {} {}\n", 2 * (n + 1 + j) as u32, g.fanin0.0, g.fanin1.0));
    }
    s
}

/// Parses ASCII AIGER into a circuit. Inputs must be the standard literals
/// `2, 4, ..., 2n` and exactly one output must be declared.
pub fn from_aiger(text: &str) -> Result<Aig, ParseAigerError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines.next().ok_or_else(|| err(1, AigerErrorKind::MissingHeader))?;
    let fields: Vec<&str> = header.split_ascii_whitespace().collect();
    if fields.len() != 6 || fields[0] != "aag" {
        return Err(err(hline, AigerErrorKind::MalformedHeader(header.to_string())));
    }
    let nums: Vec<u32> = fields[1..]
        .iter()
        .map(|f| f.parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| err(hline, AigerErrorKind::MalformedHeader(header.to_string())))?;
    let (m, i, l, o, a) = (nums[0], nums[1], nums[2], nums[3], nums[4]);
    if l != 0 {
        return Err(err(hline, AigerErrorKind::Unsupported(format!("{} latches", l))));
    }
    if o != 1 {
        return Err(err(hline, AigerErrorKind::Unsupported(format!("{} outputs", o))));
    }
    if m != i + a {
        return Err(err(
            hline,
            AigerErrorKind::MalformedHeader(format!("M = {} but I + A = {}", m, i + a)),
        ));
    }

    let mut one_literal = |expected: &'static str| -> Result<(usize, u32), ParseAigerError> {
        let (ln, line) = lines.next().ok_or_else(|| err(0, AigerErrorKind::UnexpectedEof))?;
        let toks: Vec<&str> = line.split_ascii_whitespace().collect();
        if toks.len() != 1 {
            return Err(err(ln, AigerErrorKind::WrongTokenCount { expected, found: toks.len() }));
        }
        let v = toks[0]
            .parse::<u32>()
            .map_err(|_| err(ln, AigerErrorKind::BadLiteral(toks[0].to_string())))?;
        Ok((ln, v))
    };

    for k in 1..=i {
        let (ln, lit) = one_literal("1 input literal")?;
        if lit != 2 * k {
            return Err(err(ln, AigerErrorKind::Unsupported(format!("input literal {}", lit))));
        }
    }
    let (oline, out_lit) = one_literal("1 output literal")?;
    if out_lit > 2 * m + 1 {
        return Err(err(oline, AigerErrorKind::LiteralOutOfRange(out_lit)));
    }

    let mut gates = Vec::with_capacity(a as usize);
    for j in 0..a {
        let (ln, line) = lines.next().ok_or_else(|| err(0, AigerErrorKind::UnexpectedEof))?;
        let toks: Vec<&str> = line.split_ascii_whitespace().collect();
        if toks.len() != 3 {
            return Err(err(
                ln,
                AigerErrorKind::WrongTokenCount { expected: "3 gate literals", found: toks.len() },
            ));
        }
        let vals: Vec<u32> = toks
            .iter()
            .map(|t| t.parse::<u32>().map_err(|_| err(ln, AigerErrorKind::BadLiteral(t.to_string()))))
            .collect::<Result<_, _>>()?;
        let expected = 2 * (i + 1 + j);
        if vals[0] != expected {
            return Err(err(ln, AigerErrorKind::NonMonotoneGate { expected, found: vals[0] }));
        }
        for &fanin in &vals[1..] {
            if fanin >= vals[0] {
                return Err(err(ln, AigerErrorKind::ForwardFanin { fanin }));
            }
        }
        gates.push(Gate::new(Literal(vals[1]), Literal(vals[2])));
    }
    Ok(Aig::new(i as usize, gates, Literal(out_lit)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aig::AigBuilder;

    #[test]
    fn and2_serialization() {
        let mut b = AigBuilder::new(2);
        let g = b.and(Literal::input(1), Literal::input(2));
        let aig = b.finish(g);
        assert_eq!(to_aiger(&aig), "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n");
    }

    #[test]
    fn roundtrip_multi_gate() {
        let mut b = AigBuilder::new(3);
        let g0 = b.and(Literal::input(1), Literal::input(2));
        let g1 = b.and(Literal::input(3).not(), g0);
        let g2 = b.and(Literal::input(3), g0.not());
        let out = b.or(g1, g2);
        let aig = b.finish(out);
        let text = to_aiger(&aig);
        let back = from_aiger(&text).unwrap();
        assert_eq!(back, aig);
        assert_eq!(to_aiger(&back), text);
    }

    #[test]
    fn roundtrip_constant_output() {
        let aig = Aig::constant_or_literal(4, Literal::TRUE);
        let back = from_aiger(&to_aiger(&aig)).unwrap();
        assert_eq!(back, aig);
    }

    #[test]
    fn error_reports_line_number() {
        // Gate line declares the wrong lhs literal.
        let text = "aag 3 2 0 1 1\n2\n4\n6\n8 2 4\n";
        let e = from_aiger(text).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(matches!(e.kind, AigerErrorKind::NonMonotoneGate { expected: 6, found: 8 }));
    }

    #[test]
    fn error_on_bad_header() {
        let e = from_aiger("aag 3 2 0 1\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = from_aiger("aag 9 2 0 1 1\n2\n4\n6\n6 2 4\n").unwrap_err();
        assert!(matches!(e.kind, AigerErrorKind::MalformedHeader(_)));
    }

    #[test]
    fn error_on_forward_fanin() {
        let text = "aag 3 2 0 1 1\n2\n4\n6\n6 6 2\n";
        let e = from_aiger(text).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(matches!(e.kind, AigerErrorKind::ForwardFanin { fanin: 6 }));
    }
}
