//! Line-oriented circuit text format.
//!
//! ```text
//! # comment
//! QUBITS 3
//! H 0
//! TOFFOLI 2 0 1        # target first, then controls
//! PHASE 1 0 pi/4       # controlled phase: target 1, control 0, angle
//! MEASURE 2
//! ```
//!
//! A gate line is `NAME target... [control...] [angle...]`. The gate decides
//! how many targets (2 for SWAP, else 1) and angles it takes; every other
//! integer is a control. `CNOT`/`CX`, `CZ`, `TOFFOLI`/`CCX`, `MCX` and `MCZ`
//! are aliases that fix the base gate and check the control count. Without a
//! `QUBITS` line the register is sized to the largest index used.

use std::f64::consts::PI;
use std::fmt::Write as _;

use super::circuit::Circuit;
use super::gate::{Gate, GateOp};
use crate::error::{Error, Result};

/// Parses the text format into a circuit.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut declared: Option<usize> = None;
    let mut ops = Vec::new();
    let mut measured: Option<Vec<usize>> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let name = tokens.next().unwrap_or_default().to_ascii_uppercase();
        let args: Vec<&str> = tokens.collect();
        match name.as_str() {
            "QUBITS" => {
                let [n] = args.as_slice() else {
                    return Err(err("QUBITS takes exactly one count".into()));
                };
                declared = Some(
                    n.parse()
                        .map_err(|_| err(format!("bad qubit count {n:?}")))?,
                );
            }
            "MEASURE" => {
                let qs = args
                    .iter()
                    .map(|t| parse_index(t).ok_or_else(|| err(format!("bad qubit index {t:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                measured.get_or_insert_with(Vec::new).extend(qs);
            }
            _ => ops.push((line_no, parse_gate_line(&name, &args).map_err(err)?)),
        }
    }

    let span = ops
        .iter()
        .flat_map(|(_, op): &(usize, GateOp)| op.qubits())
        .chain(measured.iter().flatten().copied())
        .max()
        .map_or(1, |q| q + 1);
    let num_qubits = declared.unwrap_or(span);
    let mut circuit = Circuit::new(num_qubits);
    for (line, op) in ops {
        circuit.push(op).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
    }
    if let Some(m) = measured {
        circuit.set_measured(m)?;
    }
    Ok(circuit)
}

fn parse_gate_line(name: &str, args: &[&str]) -> std::result::Result<GateOp, String> {
    let (base, fixed_controls): (Gate, Option<std::ops::RangeInclusive<usize>>) = match name {
        "CNOT" | "CX" => (Gate::X, Some(1..=1)),
        "CZ" => (Gate::Z, Some(1..=1)),
        "TOFFOLI" | "CCX" => (Gate::X, Some(2..=2)),
        "MCX" => (Gate::X, Some(1..=usize::MAX)),
        "MCZ" => (Gate::Z, Some(1..=usize::MAX)),
        other => (
            Gate::from_name(other).ok_or_else(|| format!("unknown gate {other:?}"))?,
            None,
        ),
    };
    let n_params = base.num_params();
    if args.len() < n_params + base.num_targets() {
        return Err(format!(
            "{name} needs at least {} argument(s)",
            n_params + base.num_targets()
        ));
    }
    let (qubit_args, param_args) = args.split_at(args.len() - n_params);
    let params = param_args
        .iter()
        .map(|t| parse_angle(t).ok_or_else(|| format!("bad angle {t:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let qubits = qubit_args
        .iter()
        .map(|t| parse_index(t).ok_or_else(|| format!("bad qubit index {t:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let (targets, controls) = qubits.split_at(base.num_targets());
    if let Some(range) = fixed_controls {
        if !range.contains(&controls.len()) {
            return Err(format!("{name} given {} control(s)", controls.len()));
        }
    }
    Ok(GateOp::new(
        base.with_params(&params),
        targets.to_vec(),
        controls.to_vec(),
    ))
}

fn parse_index(t: &str) -> Option<usize> {
    t.parse().ok()
}

/// Accepts plain floats and `pi` expressions such as `pi`, `-pi/4`, `3*pi/2`, `0.5*pi`.
fn parse_angle(t: &str) -> Option<f64> {
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    let lower = t.to_ascii_lowercase();
    let (sign, body) = match lower.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, lower.as_str()),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().ok()?),
        None => (body, 1.0),
    };
    let coeff = match num.split_once('*') {
        Some((c, "pi")) => c.parse::<f64>().ok()?,
        None if num == "pi" => 1.0,
        _ => return None,
    };
    Some(sign * coeff * PI / den)
}

/// Renders a circuit in the text format. Angles use round-trip float formatting.
pub fn to_text(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "QUBITS {}", circuit.num_qubits());
    for op in circuit.ops() {
        let _ = writeln!(out, "{op}");
    }
    if !circuit.measured_qubits().is_empty() {
        out.push_str("MEASURE");
        for q in circuit.measured_qubits() {
            let _ = write!(out, " {q}");
        }
        out.push('\n');
    }
    out
}
