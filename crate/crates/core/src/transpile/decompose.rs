//! Exact decompositions of controlled gates into CNOT plus single-qubit gates.
//!
//! Everything here is exact, including global phase, except the generic
//! controlled-U path, which is exact up to global phase. Ancilla-free
//! multi-controlled gates follow the recursive construction `Cᵏ(U) = C(V)·Cᵏ⁻¹X·C(V†)·Cᵏ⁻¹X·Cᵏ⁻¹(V)` with `V² = U`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{Circuit, Gate, GateOp, Mat2};

/// Strategy for multi-controlled NOT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum McxMode {
    /// V-chain of Toffolis through `k − 2` clean ancillae.
    Basic,
    /// Ancilla-free recursive construction.
    Advanced,
}

impl std::str::FromStr for McxMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "basic" => Ok(McxMode::Basic),
            "advanced" => Ok(McxMode::Advanced),
            other => Err(Error::InvalidArgument(format!(
                "unknown mcx mode {other:?}"
            ))),
        }
    }
}

/// Ancillae needed by `mode` for `k` controls.
pub fn mcx_ancillae(k: usize, mode: McxMode) -> usize {
    match mode {
        McxMode::Basic => k.saturating_sub(2),
        McxMode::Advanced => 0,
    }
}

/// Six-CNOT Toffoli on qubits (control 0, control 1, target 2).
pub fn decompose_toffoli() -> Circuit {
    let mut c = Circuit::new(3);
    c.extend(toffoli_ops(0, 1, 2));
    c
}

pub(crate) fn toffoli_ops(c0: usize, c1: usize, t: usize) -> Vec<GateOp> {
    let s = GateOp::single;
    vec![
        s(Gate::H, t),
        GateOp::cnot(c1, t),
        s(Gate::Tdg, t),
        GateOp::cnot(c0, t),
        s(Gate::T, t),
        GateOp::cnot(c1, t),
        s(Gate::Tdg, t),
        GateOp::cnot(c0, t),
        s(Gate::T, c1),
        s(Gate::T, t),
        s(Gate::H, t),
        GateOp::cnot(c0, c1),
        s(Gate::T, c0),
        s(Gate::Tdg, c1),
        GateOp::cnot(c0, c1),
    ]
}

/// Multi-controlled NOT with `k` controls on qubits `0..k`, target `k`, and
/// (basic mode) ancillae `k + 1 ..= 2k − 2`, which must start and end in `|0⟩`.
pub fn decompose_mcx(k: usize, mode: McxMode) -> Result<Circuit> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "multi-controlled NOT needs at least 2 controls, got {k}"
        )));
    }
    let controls: Vec<usize> = (0..k).collect();
    let target = k;
    let ancillae: Vec<usize> = (k + 1..k + 1 + mcx_ancillae(k, mode)).collect();
    let mut c = Circuit::new(k + 1 + ancillae.len());
    match mode {
        McxMode::Advanced => c.extend(mcx_ops(&controls, target)),
        McxMode::Basic => c.extend(mcx_vchain_ops(&controls, target, &ancillae)),
    }
    Ok(c)
}

fn mcx_vchain_ops(controls: &[usize], target: usize, ancillae: &[usize]) -> Vec<GateOp> {
    let k = controls.len();
    if k == 2 {
        return toffoli_ops(controls[0], controls[1], target);
    }
    let mut compute = vec![(controls[0], controls[1], ancillae[0])];
    for i in 2..k - 1 {
        compute.push((controls[i], ancillae[i - 2], ancillae[i - 1]));
    }
    let mut out = Vec::new();
    for &(a, b, t) in &compute {
        out.extend(toffoli_ops(a, b, t));
    }
    out.extend(toffoli_ops(controls[k - 1], ancillae[k - 3], target));
    for &(a, b, t) in compute.iter().rev() {
        out.extend(toffoli_ops(a, b, t));
    }
    out
}

/// Ancilla-free multi-controlled X.
pub(crate) fn mcx_ops(controls: &[usize], target: usize) -> Vec<GateOp> {
    match controls.len() {
        0 => vec![GateOp::x(target)],
        1 => vec![GateOp::cnot(controls[0], target)],
        2 => toffoli_ops(controls[0], controls[1], target),
        _ => {
            let mut out = vec![GateOp::h(target)];
            out.extend(mcphase_ops(PI, controls, target));
            out.push(GateOp::h(target));
            out
        }
    }
}

/// Ancilla-free multi-controlled phase `diag(1, e^{iλ})`.
pub(crate) fn mcphase_ops(lambda: f64, controls: &[usize], target: usize) -> Vec<GateOp> {
    match controls.len() {
        0 => vec![GateOp::single(Gate::Phase(lambda), target)],
        1 => cphase_ops(lambda, controls[0], target),
        k => {
            let last = controls[k - 1];
            let rest = &controls[..k - 1];
            let mut out = cphase_ops(lambda / 2.0, last, target);
            out.extend(mcx_ops(rest, last));
            out.extend(cphase_ops(-lambda / 2.0, last, target));
            out.extend(mcx_ops(rest, last));
            out.extend(mcphase_ops(lambda / 2.0, rest, target));
            out
        }
    }
}

fn cphase_ops(lambda: f64, control: usize, target: usize) -> Vec<GateOp> {
    vec![
        GateOp::single(Gate::Phase(lambda / 2.0), control),
        GateOp::cnot(control, target),
        GateOp::single(Gate::Phase(-lambda / 2.0), target),
        GateOp::cnot(control, target),
        GateOp::single(Gate::Phase(lambda / 2.0), target),
    ]
}

/// Diagonal phase angle of gates of the form `diag(1, e^{iλ})`.
fn phase_angle(gate: Gate) -> Option<f64> {
    match gate {
        Gate::Z => Some(PI),
        Gate::S => Some(FRAC_PI_2),
        Gate::Sdg => Some(-FRAC_PI_2),
        Gate::T => Some(FRAC_PI_4),
        Gate::Tdg => Some(-FRAC_PI_4),
        Gate::Phase(l) | Gate::U1(l) => Some(l),
        _ => None,
    }
}

/// Expands any op into CNOTs and uncontrolled single-qubit gates.
pub(crate) fn expand_controls(op: &GateOp) -> Vec<GateOp> {
    let controls = &op.controls;
    if op.gate == Gate::Swap {
        let (a, b) = (op.targets[0], op.targets[1]);
        let mut inner_controls = controls.clone();
        inner_controls.push(a);
        let mut out = vec![GateOp::cnot(b, a)];
        out.extend(expand_controls(&GateOp::mcx(&inner_controls, b)));
        out.push(GateOp::cnot(b, a));
        return out;
    }
    let t = op.targets[0];
    if controls.is_empty() {
        return vec![op.clone()];
    }
    match (op.gate, controls.len()) {
        (Gate::X, _) => mcx_ops(controls, t),
        (g, _) if phase_angle(g).is_some() => mcphase_ops(phase_angle(g).unwrap(), controls, t),
        (g, 1) => controlled_u_ops(&g.matrix().expect("single-qubit gate"), controls[0], t),
        (g, k) => {
            let u = g.matrix().expect("single-qubit gate");
            mcu_ops(&u, controls, t, k)
        }
    }
}

fn mcu_ops(u: &Mat2, controls: &[usize], t: usize, k: usize) -> Vec<GateOp> {
    if k == 1 {
        return controlled_u_ops(u, controls[0], t);
    }
    let v = sqrt_unitary(u);
    let v_dag = dagger(&v);
    let last = controls[k - 1];
    let rest = &controls[..k - 1];
    let mut out = controlled_u_ops(&v, last, t);
    out.extend(mcx_ops(rest, last));
    out.extend(controlled_u_ops(&v_dag, last, t));
    out.extend(mcx_ops(rest, last));
    out.extend(mcu_ops(&v, rest, t, k - 1));
    out
}

/// `e^{iα}·U3(θ, φ, λ)` parameters of a 2×2 unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U3Params {
    pub global_phase: f64,
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
}

pub fn u3_params(u: &Mat2) -> U3Params {
    const EPS: f64 = 1e-12;
    let c = u[0][0].norm();
    let s = u[1][0].norm();
    let theta = 2.0 * s.atan2(c);
    if c < EPS {
        U3Params {
            global_phase: 0.0,
            theta,
            phi: u[1][0].arg(),
            lambda: (-u[0][1]).arg(),
        }
    } else {
        let alpha = u[0][0].arg();
        if s < EPS {
            U3Params {
                global_phase: alpha,
                theta,
                phi: 0.0,
                lambda: u[1][1].arg() - alpha,
            }
        } else {
            U3Params {
                global_phase: alpha,
                theta,
                phi: u[1][0].arg() - alpha,
                lambda: (-u[0][1]).arg() - alpha,
            }
        }
    }
}

/// Controlled-U via `U = e^{iα}Rz(β)Ry(γ)Rz(δ)` with `A·B·C = I` and
/// `A·X·B·X·C = e^{−iα}U`; `e^{iα}` goes on the control as a phase.
///
/// A, B and C are emitted as U-family gates, which differ from their SU(2)
/// forms by phases that act on both control branches alike. The block is
/// therefore exact up to a global phase only.
fn controlled_u_ops(u: &Mat2, control: usize, target: usize) -> Vec<GateOp> {
    let p = u3_params(u);
    // U3(θ,φ,λ) = e^{i(φ+λ)/2} Rz(φ) Ry(θ) Rz(λ)
    let alpha = p.global_phase + (p.phi + p.lambda) / 2.0;
    let (beta, gamma, delta) = (p.phi, p.theta, p.lambda);
    vec![
        GateOp::single(Gate::U1((delta - beta) / 2.0), target),
        GateOp::cnot(control, target),
        GateOp::single(Gate::U3(-gamma / 2.0, 0.0, -(delta + beta) / 2.0), target),
        GateOp::cnot(control, target),
        GateOp::single(Gate::U3(gamma / 2.0, beta, 0.0), target),
        GateOp::single(Gate::Phase(alpha), control),
    ]
}

fn dagger(u: &Mat2) -> Mat2 {
    [
        [u[0][0].conj(), u[1][0].conj()],
        [u[0][1].conj(), u[1][1].conj()],
    ]
}

/// Principal square root of a 2×2 unitary.
pub(crate) fn sqrt_unitary(u: &Mat2) -> Mat2 {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let half_det = det.sqrt();
    let w: Mat2 = [
        [u[0][0] / half_det, u[0][1] / half_det],
        [u[1][0] / half_det, u[1][1] / half_det],
    ];
    // w = cos(t)·I − i·sin(t)·(n·σ), det w = 1
    let cos_t = ((w[0][0] + w[1][1]) / 2.0).re.clamp(-1.0, 1.0);
    let t = cos_t.acos();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let root_w: Mat2 = if t.sin().abs() < 1e-12 {
        if cos_t > 0.0 {
            [[one, zero], [zero, one]]
        } else {
            // w = −I; (−iZ)² = −I
            [[-Complex64::i(), zero], [zero, Complex64::i()]]
        }
    } else {
        let (ch, k) = ((t / 2.0).cos(), (t / 2.0).sin() / t.sin());
        [
            [ch + k * (w[0][0] - cos_t), k * w[0][1]],
            [k * w[1][0], ch + k * (w[1][1] - cos_t)],
        ]
    };
    let quarter_det = half_det.sqrt();
    [
        [root_w[0][0] * quarter_det, root_w[0][1] * quarter_det],
        [root_w[1][0] * quarter_det, root_w[1][1] * quarter_det],
    ]
}
