//! Pfaffians of complex skew-symmetric matrices.
//!
//! The algorithm is a skew-symmetric Gaussian elimination (Parlett–Reid
//! style): at each step the largest entry below the diagonal of the current
//! column is pivoted into the sub-diagonal position, and the trailing block is
//! updated with a rank-2 skew correction. Cost is `O(n³)`.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Pivot magnitudes at or below this fraction of the largest entry are zero.
pub const PIVOT_TOLERANCE: f64 = 1e-13;

/// Even-dimensional complex matrix with `m[i][j] == -m[j][i]` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix {
    entries: DMatrix<C64>,
}

impl SkewMatrix {
    /// Builds the matrix from its strict upper triangle.
    pub fn from_upper<F>(dim: usize, mut upper: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> C64,
    {
        if dim % 2 != 0 {
            return Err(Error::OddDimension(dim));
        }
        let mut entries = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let v = upper(i, j);
                entries[(i, j)] = v;
                entries[(j, i)] = -v;
            }
        }
        Self::checked(entries)
    }

    /// Returns `(m - mᵀ) / 2`, which removes any symmetric roundoff in `m`.
    pub fn antisymmetrized(m: &DMatrix<C64>) -> Result<Self> {
        let dim = m.nrows();
        if m.ncols() != dim {
            return Err(Error::DimensionMismatch(dim, m.ncols()));
        }
        if dim % 2 != 0 {
            return Err(Error::OddDimension(dim));
        }
        let mut entries = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let v = (m[(i, j)] - m[(j, i)]) * 0.5;
                entries[(i, j)] = v;
                entries[(j, i)] = -v;
            }
        }
        Self::checked(entries)
    }

    fn checked(entries: DMatrix<C64>) -> Result<Self> {
        if entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(Self { entries })
        } else {
            Err(Error::NonFinite("skew matrix"))
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Pfaffian of `m`.
///
/// Returns exactly zero when a pivot column is entirely below
/// `PIVOT_TOLERANCE * max|m|`.
pub fn pfaffian(m: &SkewMatrix) -> C64 {
    let n = m.dim();
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    let tol = PIVOT_TOLERANCE * m.max_abs();
    let mut a = m.entries.clone();
    let mut pf = C64::new(1.0, 0.0);

    for k in (0..n - 1).step_by(2) {
        // largest entry in column k below the diagonal
        let (mut kp, mut best) = (k + 1, a[(k + 1, k)].norm());
        for i in k + 2..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if best <= tol {
            return C64::new(0.0, 0.0);
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }

        let pivot = a[(k, k + 1)];
        pf *= pivot;

        if k + 2 < n {
            let tau: Vec<C64> = (k + 2..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<C64> = (k + 2..n).map(|i| a[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    pf
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_skew(n: usize, rng: &mut ChaCha8Rng) -> SkewMatrix {
        SkewMatrix::from_upper(n, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .unwrap()
    }

    #[test]
    fn two_by_two() {
        let a = c(0.3, -1.7);
        let m = SkewMatrix::from_upper(2, |_, _| a).unwrap();
        assert_eq!(pfaffian(&m), a);
    }

    #[test]
    fn four_by_four_expansion() {
        let up = [c(1.0, 0.5), c(-2.0, 0.1), c(0.7, 0.0), c(0.3, 1.1), c(-0.4, 2.0), c(1.5, -0.6)];
        let idx = |i: usize, j: usize| match (i, j) {
            (0, 1) => 0,
            (0, 2) => 1,
            (0, 3) => 2,
            (1, 2) => 3,
            (1, 3) => 4,
            (2, 3) => 5,
            _ => unreachable!(),
        };
        let m = SkewMatrix::from_upper(4, |i, j| up[idx(i, j)]).unwrap();
        let [a, b, cc, d, e, f] = up;
        let expected = a * f - b * e + cc * d;
        assert!((pfaffian(&m) - expected).norm() < 1e-15);
    }

    #[test]
    fn odd_dimension_rejected() {
        assert_eq!(
            SkewMatrix::from_upper(3, |_, _| c(1.0, 0.0)),
            Err(Error::OddDimension(3))
        );
    }

    #[test]
    fn non_finite_rejected() {
        let r = SkewMatrix::from_upper(2, |_, _| c(f64::NAN, 0.0));
        assert_eq!(r, Err(Error::NonFinite("skew matrix")));
    }

    #[test]
    fn antisymmetrization_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = DMatrix::from_fn(6, 6, |_, _| c(rng.random(), rng.random()));
        let s = SkewMatrix::antisymmetrized(&m).unwrap();
        let e = s.entries();
        assert_eq!(e + e.transpose(), DMatrix::zeros(6, 6));
    }

    #[test]
    fn singular_matrix_gives_zero() {
        let m = SkewMatrix::from_upper(4, |i, j| if (i, j) == (0, 1) { c(1.0, 0.0) } else { c(0.0, 0.0) })
            .unwrap();
        assert_eq!(pfaffian(&m), c(0.0, 0.0));
        assert_eq!(pfaffian(&SkewMatrix::from_upper(6, |_, _| c(0.0, 0.0)).unwrap()), c(0.0, 0.0));
    }

    #[test]
    fn square_matches_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in (2..=30).step_by(2) {
            let m = random_skew(n, &mut rng);
            let pf = pfaffian(&m);
            let det = m.entries().clone().determinant();
            assert!((pf * pf - det).norm() <= 1e-9 * det.norm(), "n = {n}");
        }
    }

    #[test]
    fn block_identity_sign() {
        // pf [[0, I], [-I, 0]] = (-1)^{d(d-1)/2}
        for d in 1..8usize {
            let m = SkewMatrix::from_upper(2 * d, |i, j| {
                if j == i + d && i < d {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            })
            .unwrap();
            let sign = if (d * (d - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(pfaffian(&m), c(sign, 0.0));
        }
    }
}
