//! Dense matrices and the symmetric eigensolver used by the spectral layer.
//!
//! The eigensolver is a cyclic Jacobi iteration: unconditionally convergent
//! for symmetric input and dependency-free. Each rotation updates two full
//! rows and then restores symmetry by copying them into the matching columns,
//! which keeps the inner loops contiguous.

use crate::error::{Error, Result};

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// y = M x
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
            })
            .collect()
    }

    /// y^T = x^T M
    pub fn vecmat(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for (i, &xi) in x.iter().enumerate() {
            for (yj, &mij) in y.iter_mut().zip(self.row(i)) {
                *yj += xi * mij;
            }
        }
        y
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    let v = self.get(i, j);
                    s += v * v;
                }
            }
        }
        s.sqrt()
    }
}

/// Sweep cap for the Jacobi iteration. Convergence is quadratic once the
/// off-diagonal mass is small; well-conditioned inputs need well under 20
/// sweeps, so hitting the cap means something is wrong with the input.
const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations (unsorted).
///
/// Iterates until the off-diagonal Frobenius norm drops below
/// `tol * ||A||_F`. `tol` is clamped below at 1e-15; callers that follow the
/// default accuracy contract pass 1e-12.
pub fn symmetric_eigenvalues(a: &Mat, tol: f64) -> Result<Vec<f64>> {
    let n = a.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a.get(0, 0)]);
    }
    let norm = a.frobenius_norm();
    if norm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let threshold = tol.max(1e-15) * norm;
    // Rotating an element smaller than threshold/n cannot be what keeps the
    // off-diagonal norm above threshold, so it is safe to skip.
    let skip = threshold / n as f64;

    let mut m = a.clone();
    for _ in 0..MAX_SWEEPS {
        if m.off_diagonal_norm() < threshold {
            return Ok((0..n).map(|i| m.get(i, i)).collect());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq.abs() <= skip {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate(&mut m, p, q, c, s);
            }
        }
    }
    if m.off_diagonal_norm() < threshold {
        return Ok((0..n).map(|i| m.get(i, i)).collect());
    }
    Err(Error::EigenNonConvergence { sweeps: MAX_SWEEPS })
}

/// Applies the similarity transform G^T M G for the plane rotation G in the
/// (p, q) plane. Rows p and q are combined in place (contiguous), the 2x2
/// pivot block is finished explicitly, and symmetry is restored by copying
/// the two rows back into their columns.
fn rotate(m: &mut Mat, p: usize, q: usize, c: f64, s: f64) {
    let n = m.n;
    debug_assert!(p < q);
    let (head, tail) = m.data.split_at_mut(q * n);
    let row_p = &mut head[p * n..(p + 1) * n];
    let row_q = &mut tail[..n];
    for j in 0..n {
        let rp = row_p[j];
        let rq = row_q[j];
        row_p[j] = c * rp - s * rq;
        row_q[j] = s * rp + c * rq;
    }
    // Column rotation only changes entries (p,p), (p,q), (q,p), (q,q) of the
    // two rotated rows.
    let rpp = row_p[p];
    let rpq = row_p[q];
    let rqp = row_q[p];
    let rqq = row_q[q];
    row_p[p] = c * rpp - s * rpq;
    row_q[q] = s * rqp + c * rqq;
    row_p[q] = 0.0;
    row_q[p] = 0.0;
    for j in 0..n {
        if j != p && j != q {
            let vp = m.data[p * n + j];
            let vq = m.data[q * n + j];
            m.data[j * n + p] = vp;
            m.data[j * n + q] = vq;
        }
    }
}
