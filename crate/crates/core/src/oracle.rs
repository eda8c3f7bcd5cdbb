//! Reference simulator for logical circuits. Shares no kernels with the pulse layer.

use num_complex::Complex64 as C;

use crate::circuit::{LogicalCircuit, LogicalGate};
use crate::error::{Error, Result};
use crate::logical::LogicalStateVector;

type M2 = [[C; 2]; 2];

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn single_qubit_matrix(gate: &LogicalGate) -> Option<M2> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Some(match *gate {
        LogicalGate::X { .. } => [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
        LogicalGate::Z { .. } => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
        LogicalGate::H { .. } => [[c(h, 0.), c(h, 0.)], [c(h, 0.), c(-h, 0.)]],
        LogicalGate::R { theta, axis, .. } => {
            let [nx, ny, nz] = axis.components();
            let (co, si) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            // cos I - i sin (nx X + ny Y + nz Z)
            [
                [c(co, -si * nz), c(-si * ny, -si * nx)],
                [c(si * ny, -si * nx), c(co, si * nz)],
            ]
        }
        _ => return None,
    })
}

fn apply_single(amps: &mut [C], q: usize, m: &M2) {
    let bit = 1usize << q;
    for k in 0..amps.len() {
        if k & bit == 0 {
            let (a0, a1) = (amps[k], amps[k | bit]);
            amps[k] = m[0][0] * a0 + m[0][1] * a1;
            amps[k | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

/// Applies one gate in place; `amps` indexed with bit `q - 1` for qubit `q`.
pub fn apply_gate(amps: &mut [C], n: usize, gate: &LogicalGate) -> Result<()> {
    gate.validate(n)?;
    if amps.len() != 1 << n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            actual: amps.len(),
        });
    }
    if let Some(m) = single_qubit_matrix(gate) {
        apply_single(amps, gate.operands()[0] - 1, &m);
        return Ok(());
    }
    let bit = |q: usize| 1usize << (q - 1);
    match *gate {
        LogicalGate::Cnot { a, b } => {
            for k in 0..amps.len() {
                if k & bit(a) != 0 && k & bit(b) == 0 {
                    amps.swap(k, k | bit(b));
                }
            }
        }
        LogicalGate::Cz { a, b } => {
            for (k, x) in amps.iter_mut().enumerate() {
                if k & bit(a) != 0 && k & bit(b) != 0 {
                    *x = -*x;
                }
            }
        }
        LogicalGate::Swap { a, b } => {
            for k in 0..amps.len() {
                if k & bit(a) != 0 && k & bit(b) == 0 {
                    amps.swap(k, k ^ bit(a) ^ bit(b));
                }
            }
        }
        LogicalGate::Toffoli { a, b, c: t } => {
            for k in 0..amps.len() {
                if k & bit(a) != 0 && k & bit(b) != 0 && k & bit(t) == 0 {
                    amps.swap(k, k | bit(t));
                }
            }
        }
        _ => unreachable!("single-qubit gates handled above"),
    }
    Ok(())
}

pub fn simulate_logical(
    circuit: &LogicalCircuit,
    psi: &LogicalStateVector,
) -> Result<LogicalStateVector> {
    if circuit.n() != psi.n() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n(),
            actual: psi.n(),
        });
    }
    let mut amps = psi.amplitudes().to_vec();
    for g in circuit.gates() {
        apply_gate(&mut amps, circuit.n(), g)?;
    }
    LogicalStateVector::unchecked(circuit.n(), amps)
}

/// Full `2^n x 2^n` unitary of a circuit, column `k` = image of basis state `k`.
pub fn circuit_unitary(circuit: &LogicalCircuit) -> Result<Vec<Vec<C>>> {
    let dim = 1usize << circuit.n();
    (0..dim)
        .map(|k| {
            simulate_logical(circuit, &LogicalStateVector::basis(circuit.n(), k))
                .map(|s| s.into_amplitudes())
        })
        .collect()
}

/// Returns `(|<a|b>|^2, arg <a|b>)`; `b ~ exp(i phase) a`.
pub fn compare_up_to_global_phase(
    a: &LogicalStateVector,
    b: &LogicalStateVector,
) -> Result<(f64, f64)> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            actual: b.n(),
        });
    }
    let ip: C = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok((ip.norm_sqr(), ip.arg()))
}
