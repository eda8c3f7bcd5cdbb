use std::collections::HashMap;

use super::{PureState, QuantumState};
use crate::rotation::{Mat2, C64};

pub const DEFAULT_PRUNE_TOLERANCE: f64 = 1e-12;

/// Map from basis index to amplitude. Entries with magnitude below
/// `prune_tolerance` are dropped after every update.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    n_qubits: usize,
    amps: HashMap<u64, C64>,
    prune_tolerance: f64,
}

impl SparseState {
    pub fn all_ground(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: u64) -> Self {
        assert!(
            (1..=64).contains(&n_qubits),
            "unsupported sparse size {n_qubits}"
        );
        let mut amps = HashMap::new();
        amps.insert(index, C64::new(1.0, 0.0));
        SparseState {
            n_qubits,
            amps,
            prune_tolerance: DEFAULT_PRUNE_TOLERANCE,
        }
    }

    pub fn from_entries(
        n_qubits: usize,
        entries: impl IntoIterator<Item = (u64, C64)>,
        prune_tolerance: f64,
    ) -> Self {
        let mut amps: HashMap<u64, C64> = HashMap::new();
        for (i, a) in entries {
            *amps.entry(i).or_default() += a;
        }
        let mut s = SparseState {
            n_qubits,
            amps,
            prune_tolerance,
        };
        s.prune();
        s
    }

    pub fn from_dense(dense: &PureState, prune_tolerance: f64) -> Self {
        let entries = dense
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, &a)| (i as u64, a));
        Self::from_entries(dense.n_qubits(), entries, prune_tolerance)
    }

    pub fn prune_tolerance(&self) -> f64 {
        self.prune_tolerance
    }

    fn prune(&mut self) {
        let tol = self.prune_tolerance;
        self.amps.retain(|_, a| a.norm() >= tol);
    }

    /// Support sorted by basis index.
    pub fn sorted_entries(&self) -> Vec<(u64, C64)> {
        let mut v: Vec<(u64, C64)> = self.amps.iter().map(|(&i, &a)| (i, a)).collect();
        v.sort_unstable_by_key(|e| e.0);
        v
    }
}

impl QuantumState for SparseState {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn apply_masked(&mut self, target: usize, control_mask: u64, m: &Mat2) {
        let tbit = 1u64 << target;
        let zero = C64::new(0.0, 0.0);
        let mut out: HashMap<u64, C64> = HashMap::with_capacity(self.amps.len() * 2);
        for (&idx, &a) in &self.amps {
            if idx & control_mask != 0 {
                *out.entry(idx).or_default() += a;
                continue;
            }
            let col = (idx >> target & 1) as usize;
            let (i0, i1) = (idx & !tbit, idx | tbit);
            let c0 = m[0][col] * a;
            let c1 = m[1][col] * a;
            if c0 != zero {
                *out.entry(i0).or_default() += c0;
            }
            if c1 != zero {
                *out.entry(i1).or_default() += c1;
            }
        }
        self.amps = out;
        self.prune();
    }

    fn amplitude(&self, index: u64) -> C64 {
        self.amps.get(&index).copied().unwrap_or_default()
    }

    fn for_each_amplitude(&self, f: &mut dyn FnMut(u64, C64)) {
        for (&i, &a) in &self.amps {
            f(i, a);
        }
    }

    fn scale(&mut self, factor: C64) {
        for a in self.amps.values_mut() {
            *a *= factor;
        }
        self.prune();
    }

    fn stores(&self, index: u64) -> bool {
        self.amps.contains_key(&index)
    }

    fn support_size(&self) -> usize {
        self.amps.len()
    }

    fn to_dense(&self) -> PureState {
        let mut amps = vec![C64::new(0.0, 0.0); 1usize << self.n_qubits];
        for (&i, &a) in &self.amps {
            amps[i as usize] = a;
        }
        PureState::from_amplitudes(self.n_qubits, amps).expect("length matches")
    }
}
