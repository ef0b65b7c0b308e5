use super::{DenseMatrix, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};

/// LU factorisation with partial pivoting, `P A = L U`.
///
/// `L` (unit lower) and `U` share storage in `factors`. The factorisation
/// never fails; exactly-zero pivot columns are skipped and recorded so
/// that the determinant comes out as zero.
#[derive(Debug, Clone)]
pub struct Lu {
    factors: DenseMatrix,
    perm: Vec<usize>,
    swaps: usize,
    scale: f64,
}

impl Lu {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        a.require_square()?;
        let n = a.rows();
        let mut f = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, f.get(i, k).abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if p != k {
                for j in 0..n {
                    let t = f.get(k, j);
                    f.set(k, j, f.get(p, j));
                    f.set(p, j, t);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            if pivot == 0.0 {
                continue;
            }
            let d = f.get(k, k);
            for i in (k + 1)..n {
                let l = f.get(i, k) / d;
                f.set(i, k, l);
                if l != 0.0 {
                    for j in (k + 1)..n {
                        f.add_at(i, j, -l * f.get(k, j));
                    }
                }
            }
        }
        Ok(Self {
            factors: f,
            perm,
            swaps,
            scale: a.max_abs(),
        })
    }

    pub fn order(&self) -> usize {
        self.factors.rows()
    }

    fn sign(&self) -> f64 {
        if self.swaps % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn determinant(&self) -> f64 {
        (0..self.order()).fold(self.sign(), |acc, i| acc * self.factors.get(i, i))
    }

    pub fn log_determinant(&self) -> SignedLogDet {
        let mut sign = self.sign();
        let mut ln_abs = 0.0;
        for i in 0..self.order() {
            let u = self.factors.get(i, i);
            if u == 0.0 {
                return SignedLogDet::ZERO;
            }
            sign *= u.signum();
            ln_abs += u.abs().ln();
        }
        SignedLogDet { sign, ln_abs }
    }

    /// True when some pivot is at or below `rel_tol` times the largest
    /// entry of the original matrix.
    pub fn is_singular(&self, rel_tol: f64) -> bool {
        let threshold = rel_tol * self.scale;
        self.scale == 0.0 || (0..self.order()).any(|i| self.factors.get(i, i).abs() <= threshold)
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.order();
        if b.rows() != n {
            return Err(Error::Shape {
                expected: (n, b.cols()),
                found: b.shape(),
            });
        }
        if self.is_singular(DEFAULT_RANK_TOL) {
            return Err(Error::SingularMatrix);
        }
        let f = &self.factors;
        let mut x = b.permuted(&self.perm, &(0..b.cols()).collect::<Vec<_>>());
        for c in 0..b.cols() {
            for i in 0..n {
                let mut v = x.get(i, c);
                for k in 0..i {
                    v -= f.get(i, k) * x.get(k, c);
                }
                x.set(i, c, v);
            }
            for i in (0..n).rev() {
                let mut v = x.get(i, c);
                for k in (i + 1)..n {
                    v -= f.get(i, k) * x.get(k, c);
                }
                x.set(i, c, v / f.get(i, i));
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        self.solve(&DenseMatrix::identity(self.order()))
    }
}

/// A determinant held as `sign * exp(ln_abs)` so that large orders do not
/// overflow.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SignedLogDet {
    /// `-1.0`, `0.0` or `1.0`.
    pub sign: f64,
    pub ln_abs: f64,
}

impl SignedLogDet {
    pub const ZERO: SignedLogDet = SignedLogDet {
        sign: 0.0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    pub fn mul(self, other: SignedLogDet) -> SignedLogDet {
        if self.sign == 0.0 || other.sign == 0.0 {
            return SignedLogDet::ZERO;
        }
        SignedLogDet {
            sign: self.sign * other.sign,
            ln_abs: self.ln_abs + other.ln_abs,
        }
    }
}

/// Inverse by LU with partial pivoting; `SingularMatrix` when a pivot is
/// below the default rank tolerance.
pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    Lu::new(a)?.inverse()
}

/// Determinant by LU. Singular input yields zero (or round-off near it).
pub fn determinant(a: &DenseMatrix) -> Result<f64> {
    Ok(Lu::new(a)?.determinant())
}

pub fn log_determinant(a: &DenseMatrix) -> Result<SignedLogDet> {
    Ok(Lu::new(a)?.log_determinant())
}
