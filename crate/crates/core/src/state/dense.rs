use rayon::prelude::*;

use super::QuantumState;
use crate::error::{Error, Result};
use crate::rotation::{Mat2, C64};

/// Arrays at or above this length are updated in parallel.
const PARALLEL_LEN: usize = 1 << 14;
/// Minimum number of amplitudes handed to one worker.
const MIN_CHUNK: usize = 1 << 12;

/// Dense state vector of `2^n_qubits` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl PureState {
    pub fn all_ground(n_qubits: usize) -> Self {
        assert!(
            (1..40).contains(&n_qubits),
            "unsupported dense size {n_qubits}"
        );
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = C64::new(1.0, 0.0);
        PureState { n_qubits, amps }
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1usize << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                actual: amps.len(),
            });
        }
        Ok(PureState { n_qubits, amps })
    }

    pub fn basis(n_qubits: usize, index: u64) -> Self {
        let mut s = Self::all_ground(n_qubits);
        s.amps[0] = C64::new(0.0, 0.0);
        s.amps[index as usize] = C64::new(1.0, 0.0);
        s
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }
}

fn update_chunk(offset: usize, chunk: &mut [C64], tbit: usize, cmask: usize, m: &Mat2) {
    let block = tbit << 1;
    for base in (0..chunk.len()).step_by(block) {
        let (lo, hi) = chunk[base..base + block].split_at_mut(tbit);
        for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            if (offset + base + k) & cmask != 0 {
                continue;
            }
            let (a0, a1) = (*a, *b);
            *a = m[0][0] * a0 + m[0][1] * a1;
            *b = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

impl QuantumState for PureState {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn apply_masked(&mut self, target: usize, control_mask: u64, m: &Mat2) {
        debug_assert_eq!(control_mask >> target & 1, 0);
        let tbit = 1usize << target;
        let cmask = control_mask as usize;
        let len = self.amps.len();
        if len >= PARALLEL_LEN {
            let chunk = (tbit << 1).max(MIN_CHUNK).min(len);
            self.amps
                .par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(i, c)| update_chunk(i * chunk, c, tbit, cmask, m));
        } else {
            update_chunk(0, &mut self.amps, tbit, cmask, m);
        }
    }

    fn amplitude(&self, index: u64) -> C64 {
        self.amps
            .get(index as usize)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    fn for_each_amplitude(&self, f: &mut dyn FnMut(u64, C64)) {
        for (i, &a) in self.amps.iter().enumerate() {
            f(i as u64, a);
        }
    }

    fn scale(&mut self, factor: C64) {
        self.amps.par_iter_mut().for_each(|a| *a *= factor);
    }

    fn stores(&self, index: u64) -> bool {
        (index as usize) < self.amps.len()
    }

    fn support_size(&self) -> usize {
        self.amps.len()
    }

    fn to_dense(&self) -> PureState {
        self.clone()
    }

    fn norm_sqr(&self) -> f64 {
        self.amps.par_iter().map(|a| a.norm_sqr()).sum()
    }
}
