//! Text formats: truth-table files and TFC-style netlists.
//!
//! Truth-table file:
//!
//! ```text
//! # optional comments
//! n 2
//! 00
//! 01
//! 11
//! 10
//! ```
//!
//! Line `x` of the data holds `f(x)`, with `x1` the leftmost character.
//!
//! Netlists list every wire in `.v`, the significant inputs in `.i`, the
//! outputs in `.o` and every other wire (all start at 0) in `.c`. Wires are
//! named `x<i>` (inputs), `nx<i>` (negations), `y<i>` (outputs) and `w<j>`
//! (all other ancillae, numbered in allocation order). A `#roles` comment
//! keeps the role of every `.v` wire so a netlist reads back unchanged:
//! `i` input, `n` negation, `s` storage, `w` scratch, `o` output.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, Wire, WireRole};
use crate::synth::SynthesisReport;
use crate::table::{TableError, TruthTable, MAX_TABLE_VARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("expected {expected} data lines, found {found}")]
    WrongLineCount { expected: usize, found: usize },
    #[error("line {line}: bad digit {ch:?}")]
    BadDigit { line: usize, ch: char },
    #[error("line {line}: unknown gate arity t{arity}")]
    UnknownGateArity { line: usize, arity: String },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Content lines with their 1-based numbers, comments and blanks dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_truth_table(text: &str) -> Result<TruthTable, IoError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(0, "missing `n <int>` header"))?;
    let n: usize = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", v] => v
            .parse()
            .map_err(|_| parse_err(hline, format!("bad variable count {v:?}")))?,
        _ => return Err(parse_err(hline, "expected `n <int>` header")),
    };
    if n == 0 || n > MAX_TABLE_VARS {
        return Err(IoError::Table(TableError::BadArity(n)));
    }
    let expected = 1usize << n;
    let mut entries = Vec::with_capacity(expected);
    for (line, data) in lines {
        let mut word = 0u64;
        for ch in data.chars() {
            word = match ch {
                '0' => word << 1,
                '1' => word << 1 | 1,
                _ => return Err(IoError::BadDigit { line, ch }),
            };
        }
        if data.len() != n {
            return Err(parse_err(line, format!("expected {n} digits, found {}", data.len())));
        }
        entries.push(word);
    }
    if entries.len() != expected {
        return Err(IoError::WrongLineCount {
            expected,
            found: entries.len(),
        });
    }
    Ok(TruthTable::new(n, entries)?)
}

pub fn write_truth_table(tt: &TruthTable) -> String {
    let n = tt.n();
    let mut out = format!("n {n}\n");
    for &e in tt.entries() {
        let _ = writeln!(out, "{e:0n$b}");
    }
    out
}

fn role_letter(role: WireRole) -> char {
    match role {
        WireRole::SignificantInput => 'i',
        WireRole::Negation => 'n',
        WireRole::Storage => 's',
        WireRole::Scratch => 'w',
        WireRole::Output => 'o',
    }
}

fn letter_role(c: char) -> Option<WireRole> {
    Some(match c {
        'i' => WireRole::SignificantInput,
        'n' => WireRole::Negation,
        's' => WireRole::Storage,
        'w' => WireRole::Scratch,
        'o' => WireRole::Output,
        _ => return None,
    })
}

/// Wire names in index order.
pub fn wire_names(circuit: &Circuit) -> Vec<String> {
    let (mut x, mut nx, mut y, mut w) = (0, 0, 0, 0);
    circuit
        .roles()
        .iter()
        .map(|role| {
            let (prefix, counter) = match role {
                WireRole::SignificantInput => ("x", &mut x),
                WireRole::Negation => ("nx", &mut nx),
                WireRole::Output => ("y", &mut y),
                WireRole::Storage | WireRole::Scratch => ("w", &mut w),
            };
            *counter += 1;
            format!("{prefix}{counter}")
        })
        .collect()
}

pub fn write_netlist(circuit: &Circuit) -> String {
    let names = wire_names(circuit);
    let join = |ws: &mut dyn Iterator<Item = Wire>| {
        ws.map(|w| names[w].as_str()).collect::<Vec<_>>().join(",")
    };
    let mut out = String::new();
    let _ = writeln!(out, ".v {}", join(&mut (0..circuit.width())));
    let _ = writeln!(out, ".i {}", join(&mut circuit.input_wires().iter().copied()));
    let _ = writeln!(out, ".o {}", join(&mut circuit.output_wires().iter().copied()));
    let consts = (0..circuit.width()).filter(|w| !circuit.input_wires().contains(w));
    let _ = writeln!(out, ".c {}", join(&mut consts.into_iter()));
    let roles: String = circuit.roles().iter().map(|&r| role_letter(r)).collect();
    let _ = writeln!(out, "#roles {roles}");
    out.push_str("BEGIN\n");
    for g in circuit.gates() {
        let ws: Vec<&str> = g.support().map(|w| names[w].as_str()).collect();
        let _ = writeln!(out, "t{} {}", ws.len(), ws.join(","));
    }
    out.push_str("END\n");
    out
}

fn name_list(rest: &str) -> Vec<&str> {
    rest.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect()
}

/// Reads a netlist. Inputs are placed on the first wires in `.i` order,
/// the remaining `.v` wires follow in declaration order.
pub fn parse_netlist(text: &str) -> Result<Circuit, IoError> {
    let mut vars: Option<Vec<&str>> = None;
    let mut inputs: Option<Vec<&str>> = None;
    let mut outputs: Vec<&str> = Vec::new();
    let mut role_line: Option<(usize, &str)> = None;
    let mut body: Vec<(usize, &str)> = Vec::new();
    let mut state = 0; // 0 header, 1 body, 2 after END
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if let Some(r) = l.strip_prefix("#roles") {
            role_line = Some((line, r.trim()));
            continue;
        }
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        match state {
            0 if l.eq_ignore_ascii_case("BEGIN") => state = 1,
            0 => {
                let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
                match key {
                    ".v" => vars = Some(name_list(rest)),
                    ".i" => inputs = Some(name_list(rest)),
                    ".o" => outputs = name_list(rest),
                    ".c" | ".g" | ".version" | ".numvars" | ".constants" | ".garbage" => {}
                    _ => return Err(parse_err(line, format!("unexpected header line {l:?}"))),
                }
            }
            1 if l.eq_ignore_ascii_case("END") => state = 2,
            1 => body.push((line, l)),
            _ => return Err(parse_err(line, "content after END")),
        }
    }
    if state != 2 {
        return Err(parse_err(text.lines().count(), "missing BEGIN/END block"));
    }
    let vars = vars.ok_or_else(|| parse_err(0, "missing .v line"))?;
    let inputs = inputs.ok_or_else(|| parse_err(0, "missing .i line"))?;

    let mut declared: HashMap<&str, usize> = HashMap::new();
    for (pos, &name) in vars.iter().enumerate() {
        if declared.insert(name, pos).is_some() {
            return Err(parse_err(0, format!("wire {name:?} declared twice")));
        }
    }
    let roles: Vec<WireRole> = match role_line {
        Some((line, letters)) => {
            if letters.chars().count() != vars.len() {
                return Err(parse_err(line, "#roles length differs from .v"));
            }
            letters
                .chars()
                .map(|c| letter_role(c).ok_or_else(|| parse_err(line, format!("bad role letter {c:?}"))))
                .collect::<Result<_, _>>()?
        }
        None => vars
            .iter()
            .map(|name| {
                if inputs.contains(name) {
                    WireRole::SignificantInput
                } else if outputs.contains(name) {
                    WireRole::Output
                } else if name.starts_with("nx") {
                    WireRole::Negation
                } else {
                    WireRole::Scratch
                }
            })
            .collect(),
    };

    let mut index: HashMap<&str, Wire> = HashMap::new();
    let mut c = Circuit::default();
    for &name in &inputs {
        let pos = *declared
            .get(name)
            .ok_or_else(|| parse_err(0, format!("input {name:?} not declared in .v")))?;
        if roles[pos] != WireRole::SignificantInput {
            return Err(parse_err(0, format!("input {name:?} has a non-input role")));
        }
        index.insert(name, c.alloc_wire(WireRole::SignificantInput));
    }
    for (pos, &name) in vars.iter().enumerate() {
        if index.contains_key(name) {
            continue;
        }
        if roles[pos] == WireRole::SignificantInput {
            return Err(parse_err(0, format!("wire {name:?} marked as input but missing from .i")));
        }
        index.insert(name, c.alloc_wire(roles[pos]));
    }
    let outs = outputs
        .iter()
        .map(|name| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| parse_err(0, format!("output {name:?} not declared in .v")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    c.set_output_wires(outs)?;

    for (line, l) in body {
        let (op, rest) = l
            .split_once(char::is_whitespace)
            .ok_or_else(|| parse_err(line, format!("malformed gate {l:?}")))?;
        let arity = op
            .strip_prefix('t')
            .ok_or_else(|| parse_err(line, format!("unknown gate {op:?}")))?;
        let expected = match arity {
            "1" => 1,
            "2" => 2,
            "3" => 3,
            _ => {
                return Err(IoError::UnknownGateArity {
                    line,
                    arity: arity.to_string(),
                })
            }
        };
        let ws = name_list(rest)
            .into_iter()
            .map(|name| {
                index
                    .get(name)
                    .copied()
                    .ok_or_else(|| parse_err(line, format!("undeclared wire {name:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if ws.len() != expected {
            return Err(parse_err(line, format!("t{expected} needs {expected} wires, got {}", ws.len())));
        }
        let gate = match ws[..] {
            [t] => Gate::not(t),
            [a, t] => Gate::cnot(a, t),
            [a, b, t] => Gate::ccnot(a, b, t),
            _ => unreachable!(),
        };
        c.add_gate(gate).map_err(|e| parse_err(line, e.to_string()))?;
    }
    Ok(c)
}

/// Pretty-printed JSON; keys follow the report's field order.
pub fn report_json(report: &SynthesisReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_bit_tables() {
        let id = parse_truth_table("n 1\n0\n1\n").unwrap();
        assert_eq!(id, TruthTable::identity(1));
        let not = parse_truth_table("# negation\n\nn 1\n1\n0\n").unwrap();
        assert_eq!(not.entries(), &[1, 0]);
        assert_eq!(
            parse_truth_table("n 1\n0\n1\n1\n"),
            Err(IoError::WrongLineCount { expected: 2, found: 3 })
        );
        assert_eq!(
            parse_truth_table("n 1\n0\n2\n"),
            Err(IoError::BadDigit { line: 3, ch: '2' })
        );
        assert!(matches!(parse_truth_table("n 2\n00\n1\n"), Err(IoError::Parse { line: 3, .. })));
        assert!(matches!(parse_truth_table("m 2\n"), Err(IoError::Parse { line: 1, .. })));
    }

    #[test]
    fn table_round_trip() {
        let tt = TruthTable::random(5, 11);
        assert_eq!(parse_truth_table(&write_truth_table(&tt)).unwrap(), tt);
    }

    #[test]
    fn single_ccnot() {
        let mut c = Circuit::new(2);
        let t = c.alloc_wire(WireRole::Output);
        c.add_gate(Gate::ccnot(0, 1, t)).unwrap();
        let text = write_netlist(&c);
        assert!(text.contains("\nt3 x1,x2,y1\n"), "{text}");
        assert!(text.starts_with(".v x1,x2,y1\n.i x1,x2\n.o y1\n.c y1\n"));
        assert_eq!(parse_netlist(&text).unwrap(), c);
    }

    #[test]
    fn four_control_gate_rejected() {
        let text = ".v a,b,c,d\n.i a,b,c,d\n.o a,b,c,d\nBEGIN\nt4 a,b,c,d\nEND\n";
        assert_eq!(
            parse_netlist(text),
            Err(IoError::UnknownGateArity {
                line: 5,
                arity: "4".into()
            })
        );
    }

    #[test]
    fn foreign_netlist_puts_inputs_first() {
        let text = ".v c,a,b\n.i a,b\n.o c\n.c c\nBEGIN\nt3 a,b,c\nt1 a\nEND\n";
        let c = parse_netlist(text).unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.output_wires(), &[2]);
        assert_eq!(c.gates(), &[Gate::ccnot(0, 1, 2), Gate::not(0)]);
        assert_eq!(c.role(2), Some(WireRole::Output));
    }

    #[test]
    fn undeclared_wire() {
        let text = ".v a,b\n.i a\n.o b\nBEGIN\nt2 a,z\nEND\n";
        assert!(matches!(parse_netlist(text), Err(IoError::Parse { line: 5, .. })));
    }
}
