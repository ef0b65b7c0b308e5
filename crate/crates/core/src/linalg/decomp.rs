use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{DenseMatrix, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};

/// Eigenvalues of a symmetric matrix, sorted non-increasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self { eigenvalues }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// 1-based access, matching the usual `λ_1 ≥ λ_2 ≥ …` indexing.
    pub fn nth(&self, i: usize) -> f64 {
        self.eigenvalues[i - 1]
    }

    pub fn largest(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn order(&self) -> usize {
        self.positive + self.negative + self.zero
    }
}

/// Full symmetric eigendecomposition: `a = V diag(values) Vᵀ`, with the
/// columns of `vectors` ordered like `values` (descending).
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Spectrum,
    pub vectors: DenseMatrix,
}

pub fn symmetric_eigen(a: &DenseMatrix) -> Result<SymmetricEigen> {
    a.check_symmetric()?;
    let n = a.rows();
    let sym = &(a + &a.transpose()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(sym.to_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut vectors = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, dst, eig.eigenvectors[(r, src)]);
        }
    }
    Ok(SymmetricEigen {
        values: Spectrum::new(eig.eigenvalues.iter().copied().collect()),
        vectors,
    })
}

/// All eigenvalues of a symmetric matrix, descending.
pub fn symmetric_eigenvalues(a: &DenseMatrix) -> Result<Spectrum> {
    Ok(symmetric_eigen(a)?.values)
}

/// Inertia of a symmetric matrix; eigenvalues with magnitude at or below
/// `rel_tol` times the largest magnitude count as zero.
pub fn inertia(a: &DenseMatrix, rel_tol: f64) -> Result<Inertia> {
    let spectrum = symmetric_eigenvalues(a)?;
    let scale = spectrum.as_slice().iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let threshold = rel_tol * scale;
    let mut out = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for &x in spectrum.as_slice() {
        if x.abs() <= threshold {
            out.zero += 1;
        } else if x > 0.0 {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
    }
    Ok(out)
}

/// Eigendecomposition of the augmented matrix `[[0, A], [Aᵀ, 0]]`. Its
/// eigenvalues are `±σᵢ` plus `|m − n|` zeros, and the eigenvector for `+σᵢ`
/// is `(uᵢ; vᵢ) / √2`. Going through the symmetric solver avoids squaring
/// the condition number as `AᵀA` would.
fn augmented_eigen(a: &DenseMatrix) -> SymmetricEigen {
    let (m, n) = a.shape();
    let mut aug = DenseMatrix::zeros(m + n, m + n);
    aug.set_submatrix(0, m, a);
    aug.set_submatrix(m, 0, &a.transpose());
    symmetric_eigen(&aug).expect("augmented matrix is symmetric by construction")
}

/// Singular values, descending.
pub fn singular_values(a: &DenseMatrix) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    let k = a.rows().min(a.cols());
    augmented_eigen(a).values.as_slice()[..k]
        .iter()
        .map(|x| x.max(0.0))
        .collect()
}

/// Number of singular values strictly above `rel_tol * σ_max`.
pub fn numerical_rank(a: &DenseMatrix, rel_tol: f64) -> usize {
    let sv = singular_values(a);
    let Some(&top) = sv.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&x| x > rel_tol * top).count()
}

/// Thin SVD pieces kept above the default rank cutoff: `u` is `m x r`,
/// `v` is `n x r`, `sigma` has length `r`.
struct RankRevealingSvd {
    u: DenseMatrix,
    sigma: Vec<f64>,
    v: DenseMatrix,
}

fn rank_revealing_svd(a: &DenseMatrix) -> RankRevealingSvd {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return RankRevealingSvd {
            u: DenseMatrix::zeros(m, 0),
            sigma: Vec::new(),
            v: DenseMatrix::zeros(n, 0),
        };
    }
    let eig = augmented_eigen(a);
    let values = eig.values.as_slice();
    let top = values[0].max(0.0);
    let r = values[..m.min(n)]
        .iter()
        .take_while(|&&x| top > 0.0 && x > DEFAULT_RANK_TOL * top)
        .count();
    let mut u = DenseMatrix::zeros(m, r);
    let mut v = DenseMatrix::zeros(n, r);
    let root2 = std::f64::consts::SQRT_2;
    for k in 0..r {
        for i in 0..m {
            u.set(i, k, root2 * eig.vectors.get(i, k));
        }
        for i in 0..n {
            v.set(i, k, root2 * eig.vectors.get(m + i, k));
        }
    }
    RankRevealingSvd {
        u,
        sigma: values[..r].to_vec(),
        v,
    }
}

/// Moore–Penrose pseudo-inverse via SVD, truncating singular values at
/// the default rank tolerance.
pub fn pseudo_inverse(a: &DenseMatrix) -> DenseMatrix {
    pinv_from(&rank_revealing_svd(a))
}

fn pinv_from(svd: &RankRevealingSvd) -> DenseMatrix {
    let mut v_scaled = svd.v.clone();
    for (c, &sigma) in svd.sigma.iter().enumerate() {
        for i in 0..v_scaled.rows() {
            v_scaled.set(i, c, v_scaled.get(i, c) / sigma);
        }
    }
    &v_scaled * &svd.u.transpose()
}

/// `I - B Bᵀ` for `B` with orthonormal columns.
fn complement_projector(b: &DenseMatrix) -> DenseMatrix {
    &DenseMatrix::identity(b.rows()) - &(b * &b.transpose())
}

/// A seeded generalized inverse `H = A⁺ + (I − A⁺A)U + V(I − AA⁺)`.
///
/// `U` and `V` are filled row-major (U first) with uniform(−1, 1) draws from
/// ChaCha8 seeded with `seed`, so equal seeds give bit-identical output. The
/// two projectors are formed from the singular vectors rather than as
/// products with `A⁺`, which keeps them accurate when `A` is ill conditioned.
pub fn random_g_inverse(a: &DenseMatrix, seed: u64) -> DenseMatrix {
    let (m, n) = a.shape();
    let svd = rank_revealing_svd(a);
    let pinv = pinv_from(&svd);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |rows, cols| {
        let data = (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect();
        DenseMatrix::new(rows, cols, data).expect("finite draws")
    };
    let u = draw(n, m);
    let v = draw(n, m);
    let right_null = complement_projector(&svd.v);
    let left_null = complement_projector(&svd.u);
    &(&pinv + &(&right_null * &u)) + &(&v * &left_null)
}

/// Symmetric `M` with `M M = W⁻¹` for symmetric positive definite `W`.
///
/// Fails with `NotSpd` unless `W` passes the symmetry check and its smallest
/// eigenvalue exceeds `1e-12` times its largest.
pub fn spd_inverse_sqrt(w: &DenseMatrix) -> Result<DenseMatrix> {
    let eig = symmetric_eigen(w).map_err(|e| match e {
        Error::NotSymmetric { .. } | Error::NotSquare { .. } => Error::NotSpd,
        other => other,
    })?;
    let values = eig.values.as_slice();
    let (Some(&top), Some(&bottom)) = (values.first(), values.last()) else {
        return Ok(DenseMatrix::zeros(0, 0));
    };
    if top <= 0.0 || bottom <= 1e-12 * top {
        return Err(Error::NotSpd);
    }
    let n = w.rows();
    let v = &eig.vectors;
    let mut out = DenseMatrix::zeros(n, n);
    for (k, &lambda) in values.iter().enumerate() {
        let f = lambda.powf(-0.5);
        for i in 0..n {
            for j in 0..n {
                out.add_at(i, j, f * v.get(i, k) * v.get(j, k));
            }
        }
    }
    Ok((&out + &out.transpose()).scale(0.5))
}
