//! Exact free-fermion machinery for periodic transverse-field Ising chains
//!
//! ```text
//! H = -Σ_j (J_j τˣ_j τˣ_{j+1} + λ_j τᶻ_j)
//! ```
//!
//! with arbitrary (possibly disordered) couplings and fields. After the
//! Jordan–Wigner map `τᶻ_j = 1 - 2 c†_j c_j` the chain becomes the quadratic
//! form `½ C† M C` with `M = [[A, B], [Bᵀ, -A]]`. We work in the even-parity
//! sector throughout, which flips the sign of the boundary bond.
//!
//! With `Â_j = c†_j + c_j` and `B̂_j = c†_j - c_j`, each bond product is
//! `τˣ_j τˣ_{j+1} = B̂_j Â_{j+1}`, so a string correlator `⟨τˣ_j τˣ_{j+d}⟩`
//! is the expectation of `2d` Majorana-like operators and Wick's theorem
//! turns it into a Pfaffian.

use nalgebra::{DMatrix, SVD};

use crate::error::{ensure_finite, Error, Result};
use crate::pfaffian::{pfaffian, SkewMatrix, C64};

/// Fermion-parity sector. Only the even sector is implemented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Parity {
    #[default]
    Even,
}

/// One periodic Ising chain. `couplings[j]` is the bond `⟨j, j+1⟩`, the last
/// entry being the bond that closes the ring.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSpec {
    couplings: Vec<f64>,
    fields: Vec<f64>,
    parity: Parity,
}

impl ChainSpec {
    pub fn new(couplings: Vec<f64>, fields: Vec<f64>) -> Result<Self> {
        let n = couplings.len();
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidSiteCount(n));
        }
        if fields.len() != n {
            return Err(Error::LengthMismatch {
                what: "fields",
                expected: n,
                got: fields.len(),
            });
        }
        ensure_finite(&couplings, "couplings")?;
        ensure_finite(&fields, "fields")?;
        Ok(Self {
            couplings,
            fields,
            parity: Parity::Even,
        })
    }

    pub fn uniform(n_sites: usize, coupling: f64, field: f64) -> Result<Self> {
        Self::new(vec![coupling; n_sites], vec![field; n_sites])
    }

    pub fn n_sites(&self) -> usize {
        self.couplings.len()
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Same couplings, new uniform field.
    pub fn with_uniform_field(&self, field: f64) -> Result<Self> {
        Self::new(self.couplings.clone(), vec![field; self.n_sites()])
    }
}

/// The blocks `A` (symmetric) and `B` (antisymmetric) of the BdG matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BdgSystem {
    pub a_matrix: DMatrix<f64>,
    pub b_matrix: DMatrix<f64>,
}

impl BdgSystem {
    pub fn n_sites(&self) -> usize {
        self.a_matrix.nrows()
    }

    /// The full `2N × 2N` matrix `[[A, B], [Bᵀ, -A]]`.
    pub fn full_matrix(&self) -> DMatrix<f64> {
        let n = self.n_sites();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.a_matrix);
        m.view_mut((0, n), (n, n)).copy_from(&self.b_matrix);
        m.view_mut((n, 0), (n, n)).copy_from(&self.b_matrix.transpose());
        m.view_mut((n, n), (n, n)).copy_from(&(-&self.a_matrix));
        m
    }
}

pub fn build_bdg(spec: &ChainSpec) -> BdgSystem {
    let n = spec.n_sites();
    let mut a = DMatrix::zeros(n, n);
    let mut b = DMatrix::zeros(n, n);
    for j in 0..n {
        a[(j, j)] = 2.0 * spec.fields[j];
    }
    for j in 0..n - 1 {
        let jj = spec.couplings[j];
        a[(j, j + 1)] = -jj;
        a[(j + 1, j)] = -jj;
        b[(j, j + 1)] = -jj;
        b[(j + 1, j)] = jj;
    }
    // Even parity: the boundary bond enters with the opposite sign.
    let jn = spec.couplings[n - 1];
    a[(n - 1, 0)] += jn;
    a[(0, n - 1)] += jn;
    b[(n - 1, 0)] += jn;
    b[(0, n - 1)] -= jn;
    BdgSystem {
        a_matrix: a,
        b_matrix: b,
    }
}

/// Quasiparticle energies and Bogoliubov factors.
///
/// Row `k` of `g_matrix`/`h_matrix` defines `η_k = Σ_m (G_km c_m + H_km c†_m)`.
/// With `Φ = G + H` and `Ψ = G - H` the site operators expand as
/// `Â = Φᵀ(η + η†)` and `B̂ = Ψᵀ(η† - η)`.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub energies: Vec<f64>,
    pub g_matrix: DMatrix<f64>,
    pub h_matrix: DMatrix<f64>,
    pub phi: DMatrix<f64>,
    pub psi: DMatrix<f64>,
    /// `+1` when the Bogoliubov vacuum is in the even sector, `-1` otherwise.
    pub vacuum_parity: i8,
}

impl SpectralData {
    pub fn n_sites(&self) -> usize {
        self.energies.len()
    }

    /// `R = [[G, H], [H, G]]`.
    pub fn rotation(&self) -> DMatrix<f64> {
        let n = self.n_sites();
        let mut r = DMatrix::zeros(2 * n, 2 * n);
        r.view_mut((0, 0), (n, n)).copy_from(&self.g_matrix);
        r.view_mut((0, n), (n, n)).copy_from(&self.h_matrix);
        r.view_mut((n, 0), (n, n)).copy_from(&self.h_matrix);
        r.view_mut((n, n), (n, n)).copy_from(&self.g_matrix);
        r
    }
}

/// Diagonalizes the BdG form through the SVD `A + B = Ψᵀ W Φ`.
///
/// `R M Rᵀ = diag(W, -W)` is equivalent to `Ψ(A + B) = WΦ` and
/// `Φ(A - B) = WΨ`, i.e. the singular triplets of `A + B`. Modes are sorted by
/// ascending energy and each mode's sign is fixed so that the largest-magnitude
/// entry of its `Φ` row is positive.
pub fn diagonalize(bdg: &BdgSystem) -> Result<SpectralData> {
    let n = bdg.n_sites();
    let apb = &bdg.a_matrix + &bdg.b_matrix;
    let svd = SVD::try_new(apb, true, true, f64::EPSILON, 0).ok_or(Error::NoConvergence)?;
    let u = svd.u.ok_or(Error::NoConvergence)?;
    let v_t = svd.v_t.ok_or(Error::NoConvergence)?;
    let sv = svd.singular_values;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));

    let mut phi = DMatrix::zeros(n, n);
    let mut psi = DMatrix::zeros(n, n);
    let mut energies = Vec::with_capacity(n);
    for (k, &src) in order.iter().enumerate() {
        let phi_row = v_t.row(src);
        let lead = phi_row
            .iter()
            .copied()
            .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        let sign = if lead < 0.0 { -1.0 } else { 1.0 };
        for m in 0..n {
            phi[(k, m)] = sign * v_t[(src, m)];
            psi[(k, m)] = sign * u[(m, src)];
        }
        energies.push(sv[src]);
    }

    // det(A + B) = det Ψ · Π ω · det Φ, and the vacuum parity is its sign.
    let det_sign = phi.clone().determinant().signum() * psi.clone().determinant().signum();
    let vacuum_parity = if det_sign >= 0.0 { 1 } else { -1 };

    let g_matrix = (&phi + &psi) * 0.5;
    let h_matrix = (&phi - &psi) * 0.5;
    Ok(SpectralData {
        energies,
        g_matrix,
        h_matrix,
        phi,
        psi,
        vacuum_parity,
    })
}

/// Chain spec to spectral data in one step.
pub fn solve_chain(spec: &ChainSpec) -> Result<SpectralData> {
    diagonalize(&build_bdg(spec))
}

/// Time-evolved contraction kernel for a quench `initial → quench`.
///
/// `Φ̃(t) = Φᵀ cos(Wt) Φ Φ₀ᵀ − i Φᵀ sin(Wt) Ψ Ψ₀ᵀ` and
/// `Ψ̃(t) = Ψᵀ cos(Wt) Ψ Ψ₀ᵀ − i Ψᵀ sin(Wt) Φ Φ₀ᵀ`; the two-point functions in
/// the initial ground state follow as
///
/// * `⟨Â_m Â_n⟩ = [Φ̃Φ̃†]_mn`
/// * `⟨B̂_m B̂_n⟩ = −[Ψ̃Ψ̃†]_mn`
/// * `⟨B̂_m Â_n⟩ = −[Ψ̃Φ̃†]_mn`
#[derive(Clone, Debug)]
pub struct CorrelationKernel {
    pub time: f64,
    pub phi_tilde: DMatrix<C64>,
    pub psi_tilde: DMatrix<C64>,
    aa: DMatrix<C64>,
    bb: DMatrix<C64>,
    ba: DMatrix<C64>,
}

impl CorrelationKernel {
    fn from_factors(time: f64, phi_tilde: DMatrix<C64>, psi_tilde: DMatrix<C64>) -> Self {
        let phi_adj = phi_tilde.adjoint();
        let aa = &phi_tilde * &phi_adj;
        let bb = -(&psi_tilde * psi_tilde.adjoint());
        let ba = -(&psi_tilde * &phi_adj);
        Self {
            time,
            phi_tilde,
            psi_tilde,
            aa,
            bb,
            ba,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.phi_tilde.nrows()
    }

    /// `⟨Â_m Â_n⟩`
    pub fn aa(&self, m: usize, n: usize) -> C64 {
        self.aa[(m, n)]
    }

    /// `⟨B̂_m B̂_n⟩`
    pub fn bb(&self, m: usize, n: usize) -> C64 {
        self.bb[(m, n)]
    }

    /// `⟨B̂_m Â_n⟩`
    pub fn ba(&self, m: usize, n: usize) -> C64 {
        self.ba[(m, n)]
    }

    /// `⟨Â_m B̂_n⟩ = [Φ̃Ψ̃†]_mn`
    pub fn ab(&self, m: usize, n: usize) -> C64 {
        -self.ba[(n, m)]
    }
}

/// Precomputed products for evaluating one quench at many times.
#[derive(Clone, Debug)]
pub struct Quench {
    energies: Vec<f64>,
    phi_t: DMatrix<f64>,
    psi_t: DMatrix<f64>,
    phi_phi0: DMatrix<f64>,
    psi_psi0: DMatrix<f64>,
}

impl Quench {
    pub fn new(initial: &SpectralData, quench: &SpectralData) -> Result<Self> {
        let (n0, n) = (initial.n_sites(), quench.n_sites());
        if n0 != n {
            return Err(Error::DimensionMismatch(n0, n));
        }
        if initial.vacuum_parity != 1 {
            return Err(Error::OddGroundParity);
        }
        Ok(Self {
            energies: quench.energies.clone(),
            phi_t: quench.phi.transpose(),
            psi_t: quench.psi.transpose(),
            phi_phi0: &quench.phi * initial.phi.transpose(),
            psi_psi0: &quench.psi * initial.psi.transpose(),
        })
    }

    pub fn kernel(&self, t: f64) -> Result<CorrelationKernel> {
        if !t.is_finite() {
            return Err(Error::NonFinite("time"));
        }
        let n = self.energies.len();
        let mut cos_pp = self.phi_phi0.clone();
        let mut sin_pp = self.phi_phi0.clone();
        let mut cos_ss = self.psi_psi0.clone();
        let mut sin_ss = self.psi_psi0.clone();
        for k in 0..n {
            let (s, c) = (self.energies[k] * t).sin_cos();
            cos_pp.row_mut(k).scale_mut(c);
            sin_pp.row_mut(k).scale_mut(s);
            cos_ss.row_mut(k).scale_mut(c);
            sin_ss.row_mut(k).scale_mut(s);
        }
        let phi_re = &self.phi_t * cos_pp;
        let phi_im = -(&self.phi_t * sin_ss);
        let psi_re = &self.psi_t * cos_ss;
        let psi_im = -(&self.psi_t * sin_pp);
        let phi_tilde = phi_re.zip_map(&phi_im, C64::new);
        let psi_tilde = psi_re.zip_map(&psi_im, C64::new);
        Ok(CorrelationKernel::from_factors(t, phi_tilde, psi_tilde))
    }
}

pub fn evolve_kernel(
    initial: &SpectralData,
    quench: &SpectralData,
    t: f64,
) -> Result<CorrelationKernel> {
    Quench::new(initial, quench)?.kernel(t)
}

fn check_string(n_sites: usize, start: usize, distance: usize) -> Result<()> {
    let max = (n_sites / 2).saturating_sub(1);
    if distance == 0 || distance > max {
        return Err(Error::DistanceOutOfRange { distance, max });
    }
    if start >= n_sites {
        return Err(Error::SiteOutOfRange {
            site: start,
            n_sites,
        });
    }
    Ok(())
}

/// `(-1)^{d(d-1)/2}`: the sign relating the block layout `[[P, M], [-Mᵀ, Q]]`
/// to the interleaved operator order `B̂ Â B̂ Â …` of the string.
pub fn block_order_sign(distance: usize) -> f64 {
    if (distance * (distance.saturating_sub(1)) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Skew contraction matrix `T = [[P, M], [-Mᵀ, Q]]` of the string from site
/// `start` to `start + distance` (indices taken modulo `N`).
///
/// `P_mn = δ_mn + ⟨B̂B̂⟩`, `Q_mn = −δ_mn + ⟨ÂÂ⟩` and `M_mn = ⟨B̂_{j+m} Â_{j+n+1}⟩`
/// over the string sites, antisymmetrized to remove roundoff.
pub fn contraction_matrices(
    kernel: &CorrelationKernel,
    start: usize,
    distance: usize,
) -> Result<SkewMatrix> {
    let n = kernel.n_sites();
    check_string(n, start, distance)?;
    let d = distance;
    let b_site = |m: usize| (start + m) % n;
    let a_site = |m: usize| (start + m + 1) % n;
    let one = C64::new(1.0, 0.0);

    let mut t = DMatrix::zeros(2 * d, 2 * d);
    for m in 0..d {
        for k in 0..d {
            let delta = if m == k { one } else { C64::new(0.0, 0.0) };
            t[(m, k)] = delta + kernel.bb(b_site(m), b_site(k));
            t[(d + m, d + k)] = -delta + kernel.aa(a_site(m), a_site(k));
            let mk = kernel.ba(b_site(m), a_site(k));
            t[(m, d + k)] = mk;
            t[(d + k, m)] = -mk;
        }
    }
    SkewMatrix::antisymmetrized(&t)
}

/// Largest tolerated `|Im pf(T)|` before a correlator is flagged.
pub const IMAGINARY_TOLERANCE: f64 = 1e-6;

/// A string correlator together with its imaginary-part diagnostic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Correlator {
    pub value: f64,
    pub imag_residual: f64,
}

impl Correlator {
    pub fn is_flagged(&self) -> bool {
        self.imag_residual > IMAGINARY_TOLERANCE
    }
}

/// `⟨τˣ_j τˣ_{j+d}⟩` at the kernel's time.
///
/// A string that crosses the closing bond picks up the even-sector boundary
/// sign `-1`.
pub fn xx_correlator(kernel: &CorrelationKernel, start: usize, distance: usize) -> Result<Correlator> {
    let t = contraction_matrices(kernel, start, distance)?;
    let wrap = if start + distance >= kernel.n_sites() {
        -1.0
    } else {
        1.0
    };
    let pf = pfaffian(&t) * (block_order_sign(distance) * wrap);
    Ok(Correlator {
        value: pf.re,
        imag_residual: pf.im.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(m: &DMatrix<f64>) -> f64 {
        m.iter().fold(0.0, |a, x| a.max(x.abs()))
    }

    #[test]
    fn field_only_chain() {
        let spec = ChainSpec::new(vec![0.0; 4], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let bdg = build_bdg(&spec);
        assert_eq!(bdg.a_matrix, DMatrix::from_diagonal(&nalgebra::dvector![2.0, 4.0, 6.0, 8.0]));
        assert_eq!(bdg.b_matrix, DMatrix::zeros(4, 4));
        let sd = diagonalize(&bdg).unwrap();
        assert_eq!(sd.energies, vec![2.0, 4.0, 6.0, 8.0]);
    }

    #[test]
    fn coupling_only_chain_entries() {
        let bdg = build_bdg(&ChainSpec::uniform(4, 1.0, 0.0).unwrap());
        let a = &bdg.a_matrix;
        let b = &bdg.b_matrix;
        assert_eq!(a[(0, 1)], -1.0);
        assert_eq!(a[(2, 3)], -1.0);
        assert_eq!(a[(3, 0)], 1.0);
        assert_eq!(a[(0, 3)], 1.0);
        assert_eq!(b[(0, 1)], -1.0);
        assert_eq!(b[(1, 0)], 1.0);
        assert_eq!(b[(3, 0)], 1.0);
        assert_eq!(b[(0, 3)], -1.0);
        assert_eq!(a - a.transpose(), DMatrix::zeros(4, 4));
        assert_eq!(b + b.transpose(), DMatrix::zeros(4, 4));
    }

    #[test]
    fn two_site_chain_boundary_accumulates() {
        // Both bonds join the same pair of sites.
        let bdg = build_bdg(&ChainSpec::new(vec![1.0, 0.5], vec![0.0, 0.0]).unwrap());
        assert_eq!(bdg.a_matrix[(0, 1)], -0.5);
        assert_eq!(bdg.b_matrix[(0, 1)], -1.5);
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(ChainSpec::uniform(5, 1.0, 0.0), Err(Error::InvalidSiteCount(5)));
        assert_eq!(ChainSpec::uniform(0, 1.0, 0.0), Err(Error::InvalidSiteCount(0)));
        assert_eq!(
            ChainSpec::new(vec![1.0; 4], vec![0.0, f64::INFINITY, 0.0, 0.0]),
            Err(Error::NonFinite("fields"))
        );
        assert!(matches!(
            ChainSpec::new(vec![1.0; 4], vec![0.0; 2]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn flat_band_at_zero_field() {
        for n in [2, 4, 6, 10] {
            let sd = solve_chain(&ChainSpec::uniform(n, 1.0, 0.0).unwrap()).unwrap();
            for w in &sd.energies {
                assert!((w - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn critical_gap_matches_dispersion() {
        let n = 8;
        let sd = solve_chain(&ChainSpec::uniform(n, 1.0, 1.0).unwrap()).unwrap();
        let expected = (0..n)
            .map(|k| {
                let q = (2 * k + 1) as f64 * std::f64::consts::PI / n as f64;
                2.0 * (2.0 + 2.0 * q.cos()).sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        assert!((sd.energies[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn spectral_invariants() {
        let spec = ChainSpec::new(
            vec![0.8, 1.3, 0.4, 1.1, 0.9, 1.0],
            vec![0.2, 0.7, 1.4, 0.0, 0.5, 0.9],
        )
        .unwrap();
        let bdg = build_bdg(&spec);
        let sd = diagonalize(&bdg).unwrap();
        let n = 6;
        let id = DMatrix::<f64>::identity(n, n);
        assert!(max_abs(&(&sd.phi * sd.phi.transpose() - &id)) < 1e-10);
        assert!(max_abs(&(&sd.psi * sd.psi.transpose() - &id)) < 1e-10);
        let r = sd.rotation();
        assert!(max_abs(&(&r * r.transpose() - DMatrix::identity(2 * n, 2 * n))) < 1e-10);

        let m = bdg.full_matrix();
        let mut v = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            v[(k, k)] = sd.energies[k];
            v[(n + k, n + k)] = -sd.energies[k];
        }
        assert!(max_abs(&(&r * &m * r.transpose() - v)) < 1e-9 * max_abs(&m));
        assert!(sd.energies.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(sd.vacuum_parity, 1);
    }

    #[test]
    fn gauge_fixes_leading_entry_sign() {
        let sd = solve_chain(&ChainSpec::uniform(8, 1.0, 0.6).unwrap()).unwrap();
        for k in 0..8 {
            let lead = sd
                .phi
                .row(k)
                .iter()
                .copied()
                .fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
            assert!(lead > 0.0);
        }
    }

    #[test]
    fn negative_field_vacuum_is_odd() {
        let sd = solve_chain(&ChainSpec::new(vec![0.0, 0.0], vec![-1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(sd.vacuum_parity, -1);
        assert_eq!(Quench::new(&sd, &sd).err(), Some(Error::OddGroundParity));
    }

    #[test]
    fn single_bond_string() {
        let spec = ChainSpec::uniform(6, 1.0, 0.4).unwrap();
        let sd = solve_chain(&spec).unwrap();
        let k = evolve_kernel(&sd, &sd, 0.0).unwrap();
        let t = contraction_matrices(&k, 2, 1).unwrap();
        assert_eq!(t.dim(), 2);
        assert!((t.entries()[(0, 1)] - k.ba(2, 3)).norm() < 1e-15);
        let c = xx_correlator(&k, 2, 1).unwrap();
        assert!((c.value - k.ba(2, 3).re).abs() < 1e-15);
    }

    #[test]
    fn ordered_chain_is_fully_correlated() {
        let sd = solve_chain(&ChainSpec::uniform(12, 1.0, 0.0).unwrap()).unwrap();
        for t in [0.0, 3.0] {
            let k = evolve_kernel(&sd, &sd, t).unwrap();
            for d in 1..6 {
                let c = xx_correlator(&k, 7, d).unwrap();
                assert!((c.value - 1.0).abs() < 1e-12, "d = {d}");
                // the raw block Pfaffian carries the ordering sign
                let pf = pfaffian(&contraction_matrices(&k, 0, d).unwrap());
                assert!((pf.re - block_order_sign(d)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kernel_unitality() {
        let a = solve_chain(&ChainSpec::new(vec![1.0, 0.3, 1.4, 0.7], vec![0.1, 0.9, 0.4, 0.0]).unwrap())
            .unwrap();
        let b = solve_chain(&ChainSpec::new(vec![1.0, 0.3, 1.4, 0.7], vec![1.2; 4]).unwrap()).unwrap();
        let k = evolve_kernel(&a, &b, 2.5).unwrap();
        for m in 0..4 {
            assert!((k.aa(m, m) - C64::new(1.0, 0.0)).norm() < 1e-9);
            assert!((k.bb(m, m) + C64::new(1.0, 0.0)).norm() < 1e-9);
            for n in 0..4 {
                assert!((k.aa(m, n) - k.aa(n, m).conj()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn string_range_checks() {
        let sd = solve_chain(&ChainSpec::uniform(8, 1.0, 0.5).unwrap()).unwrap();
        let k = evolve_kernel(&sd, &sd, 0.0).unwrap();
        assert_eq!(
            xx_correlator(&k, 0, 4).err(),
            Some(Error::DistanceOutOfRange { distance: 4, max: 3 })
        );
        assert_eq!(
            xx_correlator(&k, 0, 0).err(),
            Some(Error::DistanceOutOfRange { distance: 0, max: 3 })
        );
        assert_eq!(
            xx_correlator(&k, 8, 1).err(),
            Some(Error::SiteOutOfRange { site: 8, n_sites: 8 })
        );
        let six = solve_chain(&ChainSpec::uniform(6, 1.0, 0.5).unwrap()).unwrap();
        assert_eq!(
            evolve_kernel(&sd, &six, 0.0).err(),
            Some(Error::DimensionMismatch(8, 6))
        );
    }
}
