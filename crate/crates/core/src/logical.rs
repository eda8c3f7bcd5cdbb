//! Amplitudes `Psi_k` over the N computational qubits. Bit `j - 1` of `k` is logical qubit `j`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rotation::C64;

pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LogicalStateVector {
    n: usize,
    amps: Vec<C64>,
}

impl LogicalStateVector {
    /// Validates length and unit norm.
    pub fn new(n: usize, amps: Vec<C64>) -> Result<Self> {
        let s = Self::unchecked(n, amps)?;
        let norm = s.norm_sqr().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidGate(format!(
                "logical state has norm {norm}, expected 1"
            )));
        }
        Ok(s)
    }

    /// Checks only the length; used for intermediate or deliberately denormalized vectors.
    pub fn unchecked(n: usize, amps: Vec<C64>) -> Result<Self> {
        if n == 0 || n > 30 || amps.len() != 1usize << n {
            return Err(Error::DimensionMismatch {
                expected: 1usize << n.min(30),
                actual: amps.len(),
            });
        }
        Ok(LogicalStateVector { n, amps })
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[k] = C64::new(1.0, 0.0);
        LogicalStateVector { n, amps }
    }

    /// Basis state from a bit list, `bits[j - 1]` for logical qubit `j`.
    pub fn from_bits(bits: &[bool]) -> Self {
        let k = bits
            .iter()
            .enumerate()
            .fold(0usize, |k, (i, &b)| k | (b as usize) << i);
        Self::basis(bits.len(), k)
    }

    /// Haar-like random state: i.i.d. Gaussian components, normalized.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut amps: Vec<C64> = (0..1usize << n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        LogicalStateVector { n, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        LogicalStateVector {
            n: self.n,
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    /// Relabels qubits: logical qubit `q` (0-based) moves to slot `perm[q]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (k, &a) in self.amps.iter().enumerate() {
            let mut k2 = 0usize;
            for (q, &p) in perm.iter().enumerate() {
                k2 |= (k >> q & 1) << p;
            }
            amps[k2] = a;
        }
        LogicalStateVector { n: self.n, amps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_is_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..7 {
            let s = LogicalStateVector::random(n, &mut rng);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            assert!(LogicalStateVector::new(n, s.clone().into_amplitudes()).is_ok());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(LogicalStateVector::new(2, vec![C64::new(1.0, 0.0); 3]).is_err());
        assert!(LogicalStateVector::new(1, vec![C64::new(1.0, 0.0); 2]).is_err());
    }

    #[test]
    fn from_bits_and_permute() {
        let s = LogicalStateVector::from_bits(&[true, false, false]);
        assert_eq!(s.amplitudes()[1], C64::new(1.0, 0.0));
        let p = s.permuted(&[2, 0, 1]);
        assert_eq!(p.amplitudes()[4], C64::new(1.0, 0.0));
    }
}
