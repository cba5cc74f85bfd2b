//! Brute-force state-vector oracle for periodic transverse-field Ising rings.
//!
//! `H = -Σ_j (J_j τˣ_j τˣ_{j+1} + λ_j τᶻ_j)` with the bond `N → 1` closing the
//! ring. Everything is done in the even `Π τᶻ = +1` sector of the full
//! `2^N` space, by dense diagonalization. Intended for `N ≤ 10` only.
//!
//! This crate shares no code with the free-fermion implementation it checks.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

/// Ring parameters. Bond `j` couples sites `j` and `(j + 1) % n`.
#[derive(Clone, Debug)]
pub struct IsingRing {
    pub couplings: Vec<f64>,
    pub fields: Vec<f64>,
}

impl IsingRing {
    pub fn new(couplings: Vec<f64>, fields: Vec<f64>) -> Self {
        assert_eq!(couplings.len(), fields.len());
        assert!(couplings.len() >= 2 && couplings.len() <= 12);
        Self { couplings, fields }
    }

    pub fn n_sites(&self) -> usize {
        self.couplings.len()
    }
}

/// Basis states (bit `j` set ⇔ `τᶻ_j = -1`) with an even number of flipped spins.
fn even_basis(n: usize) -> Vec<usize> {
    (0..1usize << n).filter(|s| s.count_ones() % 2 == 0).collect()
}

fn index_of(basis: &[usize], state: usize) -> usize {
    basis.binary_search(&state).expect("state outside the even sector")
}

fn hamiltonian(ring: &IsingRing, basis: &[usize]) -> DMatrix<f64> {
    let n = ring.n_sites();
    let dim = basis.len();
    let mut h = DMatrix::zeros(dim, dim);
    for (col, &s) in basis.iter().enumerate() {
        for j in 0..n {
            let z = if s >> j & 1 == 1 { -1.0 } else { 1.0 };
            h[(col, col)] -= ring.fields[j] * z;
            let k = (j + 1) % n;
            let flipped = s ^ (1 << j) ^ (1 << k);
            let row = index_of(basis, flipped);
            h[(row, col)] -= ring.couplings[j];
        }
    }
    h
}

/// State `exp(-i H t)|G₀⟩` where `|G₀⟩` is the even-sector ground state of `initial`.
pub struct EvolvedState {
    n: usize,
    basis: Vec<usize>,
    amplitudes: DVector<Complex<f64>>,
}

impl EvolvedState {
    pub fn quench(initial: &IsingRing, quench: &IsingRing, t: f64) -> Self {
        let n = initial.n_sites();
        assert_eq!(n, quench.n_sites());
        let basis = even_basis(n);

        let eig0 = SymmetricEigen::new(hamiltonian(initial, &basis));
        let ground = eig0.eigenvalues.imin();
        let psi0 = eig0.eigenvectors.column(ground).into_owned();

        let eig = SymmetricEigen::new(hamiltonian(quench, &basis));
        let overlaps = eig.eigenvectors.transpose() * &psi0;
        let dim = basis.len();
        let mut amplitudes = DVector::from_element(dim, Complex::new(0.0, 0.0));
        for k in 0..dim {
            let phase = Complex::from_polar(overlaps[k], -eig.eigenvalues[k] * t);
            for row in 0..dim {
                amplitudes[row] += phase * eig.eigenvectors[(row, k)];
            }
        }
        Self {
            n,
            basis,
            amplitudes,
        }
    }

    pub fn ground(ring: &IsingRing) -> Self {
        Self::quench(ring, ring, 0.0)
    }

    /// `⟨τˣ_i τˣ_j⟩`, sites zero-based, `i != j`.
    pub fn xx(&self, i: usize, j: usize) -> f64 {
        assert!(i != j && i < self.n && j < self.n);
        let mut acc = Complex::new(0.0, 0.0);
        for (col, &s) in self.basis.iter().enumerate() {
            let row = index_of(&self.basis, s ^ (1 << i) ^ (1 << j));
            acc += self.amplitudes[row].conj() * self.amplitudes[col];
        }
        acc.re
    }

    /// `⟨τᶻ_i⟩`.
    pub fn z(&self, i: usize) -> f64 {
        self.basis
            .iter()
            .zip(self.amplitudes.iter())
            .map(|(&s, a)| {
                let z = if s >> i & 1 == 1 { -1.0 } else { 1.0 };
                z * a.norm_sqr()
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_field_ring_is_polarized() {
        let ring = IsingRing::new(vec![0.0; 4], vec![1.0, 2.0, 0.5, 1.0]);
        let st = EvolvedState::ground(&ring);
        for i in 0..4 {
            assert!((st.z(i) - 1.0).abs() < 1e-12);
        }
        assert!(st.xx(0, 1).abs() < 1e-12);
    }

    #[test]
    fn pure_coupling_ring_is_ordered() {
        let ring = IsingRing::new(vec![1.0; 6], vec![0.0; 6]);
        let st = EvolvedState::ground(&ring);
        assert!((st.xx(0, 3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_is_conserved() {
        let a = IsingRing::new(vec![1.0, 0.7, 1.2, 0.9], vec![0.3, 0.1, 0.0, 0.4]);
        let b = IsingRing::new(vec![1.0, 0.7, 1.2, 0.9], vec![0.8; 4]);
        let st = EvolvedState::quench(&a, &b, 3.3);
        assert!((st.amplitudes.norm() - 1.0).abs() < 1e-12);
    }
}
