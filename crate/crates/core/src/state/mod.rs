//! Exact pure states over all physical qubits.
//!
//! Basis convention: bit `i` of a basis index is qubit (site) `i`; `0 = |g>`, `1 = |e>`.
//! Two interchangeable backends implement [`QuantumState`]: a dense amplitude
//! vector ([`PureState`]) and a pruned hash map over the support ([`SparseState`]).

mod dense;
pub mod dump;
mod encoding;
mod sparse;

pub use dense::PureState;
pub use encoding::{
    decode_well_formed, encode_sparse, encode_well_formed, paramagnetic_mask, well_formed_index,
    Decoded, PhaseLabel, DECODE_TOLERANCE,
};
pub use sparse::{SparseState, DEFAULT_PRUNE_TOLERANCE};

use crate::error::{Error, Result};
use crate::rotation::{check_angle, rotation_matrix, Axis, Mat2, C64};

/// Operations shared by the dense and sparse backends.
pub trait QuantumState: Send {
    fn n_qubits(&self) -> usize;

    /// Applies `m` to `target` on the subspace where every bit of `control_mask`
    /// is 0 (all controls in `|g>`); identity elsewhere. `control_mask` must not
    /// contain the target bit.
    fn apply_masked(&mut self, target: usize, control_mask: u64, m: &Mat2);

    fn amplitude(&self, index: u64) -> C64;

    /// Visits every stored amplitude (dense: all, sparse: the support).
    fn for_each_amplitude(&self, f: &mut dyn FnMut(u64, C64));

    fn scale(&mut self, factor: C64);

    /// Whether `index` is visited by [`QuantumState::for_each_amplitude`].
    fn stores(&self, index: u64) -> bool;

    fn support_size(&self) -> usize;

    fn to_dense(&self) -> PureState;

    fn norm_sqr(&self) -> f64 {
        let mut acc = 0.0;
        self.for_each_amplitude(&mut |_, a| acc += a.norm_sqr());
        acc
    }

    /// Rotation `R(theta, n)` on `target`, conditioned on every control being `|g>`.
    fn apply_controlled_rotation(
        &mut self,
        target: usize,
        controls: &[usize],
        theta: f64,
        axis: &Axis,
    ) -> Result<()> {
        let n = self.n_qubits();
        if target >= n {
            return Err(Error::InvalidSite {
                site: target,
                n_sites: n,
            });
        }
        check_angle(theta)?;
        let mut mask = 0u64;
        for &c in controls {
            if c >= n {
                return Err(Error::InvalidSite {
                    site: c,
                    n_sites: n,
                });
            }
            if c == target {
                return Err(Error::TargetIsControl(c));
            }
            mask |= 1 << c;
        }
        self.apply_masked(target, mask, &rotation_matrix(theta, axis));
        Ok(())
    }
}

/// `<s1|s2>`.
pub fn inner<A: QuantumState + ?Sized, B: QuantumState + ?Sized>(s1: &A, s2: &B) -> Result<C64> {
    if s1.n_qubits() != s2.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: s1.n_qubits(),
            actual: s2.n_qubits(),
        });
    }
    let mut acc = C64::new(0.0, 0.0);
    if s1.support_size() <= s2.support_size() {
        s1.for_each_amplitude(&mut |i, a| acc += a.conj() * s2.amplitude(i));
    } else {
        s2.for_each_amplitude(&mut |i, b| acc += s1.amplitude(i).conj() * b);
    }
    Ok(acc)
}

/// `|<s1|s2>|^2`, insensitive to global phase.
pub fn fidelity<A: QuantumState + ?Sized, B: QuantumState + ?Sized>(s1: &A, s2: &B) -> Result<f64> {
    Ok(inner(s1, s2)?.norm_sqr().min(1.0))
}

/// L2 distance `||s1 - s2||`.
pub fn l2_distance<A: QuantumState + ?Sized, B: QuantumState + ?Sized>(
    s1: &A,
    s2: &B,
) -> Result<f64> {
    if s1.n_qubits() != s2.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: s1.n_qubits(),
            actual: s2.n_qubits(),
        });
    }
    let mut acc = 0.0;
    s1.for_each_amplitude(&mut |i, a| acc += (a - s2.amplitude(i)).norm_sqr());
    s2.for_each_amplitude(&mut |i, b| {
        if !s1.stores(i) {
            acc += b.norm_sqr();
        }
    });
    Ok(acc.sqrt())
}

pub fn to_sparse(dense: &PureState) -> SparseState {
    SparseState::from_dense(dense, DEFAULT_PRUNE_TOLERANCE)
}

pub fn to_dense(sparse: &SparseState) -> PureState {
    sparse.to_dense()
}
