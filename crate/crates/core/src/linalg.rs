//! Pfaffians and determinants accumulated as sign and log-magnitude, so that
//! long-range string correlators neither overflow nor underflow.

use nalgebra::DMatrix;

/// `sign * exp(log_abs)`; `sign == 0` for an exactly singular matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLog {
    pub sign: f64,
    pub log_abs: f64,
}

impl SignedLog {
    pub const ONE: SignedLog = SignedLog { sign: 1.0, log_abs: 0.0 };
    pub const ZERO: SignedLog = SignedLog { sign: 0.0, log_abs: f64::NEG_INFINITY };

    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.log_abs.exp()
        }
    }

    fn mul(&mut self, x: f64) {
        if x == 0.0 {
            *self = SignedLog::ZERO;
        } else if self.sign != 0.0 {
            self.sign *= x.signum();
            self.log_abs += x.abs().ln();
        }
    }
}

/// Real antisymmetric matrix. Writes go through [`set`](Self::set), which
/// stores both `(i, j)` and `(j, i)`, so `M = -Mᵀ` holds by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct AntisymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl AntisymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets `M[i][j] = v` and `M[j][i] = -v`. Panics on the diagonal.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert_ne!(i, j, "diagonal of an antisymmetric matrix is fixed at zero");
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = -v;
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.dim).all(|i| self.get(i, i) == 0.0 && (0..i).all(|j| self.get(i, j) == -self.get(j, i)))
    }
}

/// Pfaffian by Parlett-Reid tridiagonalisation with partial pivoting.
pub fn pfaffian(m: &AntisymmetricMatrix) -> SignedLog {
    let n = m.dim;
    if n % 2 == 1 {
        return SignedLog::ZERO;
    }
    let mut a = m.data.clone();
    let at = |i: usize, j: usize| i * n + j;
    let mut pf = SignedLog::ONE;
    let mut k = 0;
    while k + 1 < n {
        // pivot: largest entry in column k below row k
        let mut p = k + 1;
        let mut best = a[at(k + 1, k)].abs();
        for r in k + 2..n {
            let v = a[at(r, k)].abs();
            if v > best {
                best = v;
                p = r;
            }
        }
        if p != k + 1 {
            // simultaneous row/column swap of k+1 and p flips the sign
            for c in 0..n {
                a.swap(at(k + 1, c), at(p, c));
            }
            for r in 0..n {
                a.swap(at(r, k + 1), at(r, p));
            }
            pf.sign = -pf.sign;
        }
        let pivot = a[at(k, k + 1)];
        if pivot == 0.0 {
            return SignedLog::ZERO;
        }
        pf.mul(pivot);
        if k + 2 < n {
            // tau_i = A[k][i] / A[k][k+1]; A[i][j] += tau_i A[k+1][j]... in rank-2 form
            let tau: Vec<f64> = (k + 2..n).map(|i| a[at(k, i)] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| a[at(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[at(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}

/// Determinant by LU with partial pivoting.
pub fn determinant(m: &DMatrix<f64>) -> SignedLog {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "determinant of a non-square matrix");
    let mut a: Vec<f64> = m.transpose().as_slice().to_vec(); // row-major
    let mut det = SignedLog::ONE;
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for r in k + 1..n {
            let v = a[r * n + k].abs();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best == 0.0 {
            return SignedLog::ZERO;
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            det.sign = -det.sign;
        }
        let piv = a[k * n + k];
        det.mul(piv);
        for r in k + 1..n {
            let f = a[r * n + k] / piv;
            if f != 0.0 {
                for c in k + 1..n {
                    a[r * n + c] -= f * a[k * n + c];
                }
            }
        }
    }
    det
}
