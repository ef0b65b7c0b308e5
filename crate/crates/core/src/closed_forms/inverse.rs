use serde::Serialize;

use crate::error::{Error, Result, SingularFactor};
use crate::graph::{EdgeId, MatrixWeightedGraph};
use crate::linalg::{
    inverse, kronecker, log_determinant, numerical_rank, BlockMatrix, DenseMatrix, SignedLogDet,
    DEFAULT_RANK_TOL,
};
use crate::operators::{laplacian, LaplacianMode};

/// `det D = (-1)^{(n-1)s} · 2^{(n-2)s} · det(∏ Wᵢ) · det(Σ Wᵢ)`, returned in
/// sign/log form. `det(∏ Wᵢ)` is taken as the product of the individual
/// determinants, which does not depend on the multiplication order.
pub fn distance_log_determinant(g: &MatrixWeightedGraph) -> Result<SignedLogDet> {
    g.require_tree()?;
    let (n, s) = (g.n() as i64, g.s() as i64);
    let sign = if ((n - 1) * s) % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc = SignedLogDet {
        sign,
        ln_abs: ((n - 2) * s) as f64 * std::f64::consts::LN_2,
    };
    for e in g.edges() {
        acc = acc.mul(log_determinant(&e.weight)?);
    }
    Ok(acc.mul(log_determinant(&g.weight_sum()?)?))
}

/// Determinant of the distance matrix of a tree from the closed form.
pub fn distance_determinant(g: &MatrixWeightedGraph) -> Result<f64> {
    Ok(distance_log_determinant(g)?.value())
}

/// Whether a tree's distance matrix is invertible, and if not, the first
/// factor found singular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Invertibility {
    pub invertible: bool,
    pub reason: Option<SingularFactor>,
}

impl Invertibility {
    pub fn into_result(self) -> Result<()> {
        match self.reason {
            None => Ok(()),
            Some(r) => Err(Error::NotInvertible(r)),
        }
    }
}

fn full_rank(w: &DenseMatrix) -> bool {
    numerical_rank(w, DEFAULT_RANK_TOL) == w.rows()
}

/// `D` is invertible iff every edge weight and the weight sum are. Each is
/// tested with the default numerical-rank tolerance.
pub fn invertibility_check(g: &MatrixWeightedGraph) -> Result<Invertibility> {
    g.require_tree()?;
    let reason = g
        .edges()
        .iter()
        .position(|e| !full_rank(&e.weight))
        .map(|i| SingularFactor::Weight(EdgeId(i)))
        .or_else(|| (!full_rank(&g.weight_sum().ok()?)).then_some(SingularFactor::WeightSum));
    Ok(Invertibility {
        invertible: reason.is_none(),
        reason,
    })
}

fn sum_inverse(g: &MatrixWeightedGraph) -> Result<DenseMatrix> {
    inverse(&g.weight_sum()?).map_err(|_| Error::NotInvertible(SingularFactor::WeightSum))
}

fn inverted_laplacian(g: &MatrixWeightedGraph) -> Result<BlockMatrix> {
    laplacian(g, LaplacianMode::Inverted).map_err(|e| match e {
        Error::SingularWeight(id) => Error::NotInvertible(SingularFactor::Weight(id)),
        other => other,
    })
}

/// `D⁻¹ = -½ L + ½ (δδᵀ ⊗ (Σ Wᵢ)⁻¹)` with `L` the inverse-weighted Laplacian
/// and `δᵢ = 2 - deg(i)`.
pub fn distance_inverse(g: &MatrixWeightedGraph) -> Result<BlockMatrix> {
    invertibility_check(g)?.into_result()?;
    let l = inverted_laplacian(g)?;
    let delta = DenseMatrix::column(&g.delta_vector().to_f64());
    let outer = &delta * &delta.transpose();
    let correction = kronecker(&outer, &sum_inverse(g)?);
    let inv = &l.scale(-0.5) + &correction.scale(0.5);
    BlockMatrix::from_dense(inv, g.s())
}

/// The same inverse in factored form `-½ L + ½ Δ R⁻¹ Δᵀ`, `Δ = δ ⊗ I_s`,
/// `R = Σ Wᵢ`. Restricted to positive definite weights.
pub fn distance_inverse_factored(g: &MatrixWeightedGraph) -> Result<BlockMatrix> {
    g.require_tree()?;
    g.require_spd_weights()?;
    let l = inverted_laplacian(g)?;
    let delta = DenseMatrix::column(&g.delta_vector().to_f64());
    let big_delta = kronecker(&delta, &DenseMatrix::identity(g.s()));
    let middle = &(&big_delta * &sum_inverse(g)?) * &big_delta.transpose();
    let inv = &l.scale(-0.5) + &middle.scale(0.5);
    BlockMatrix::from_dense(inv, g.s())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::{determinant, frobenius_distance};
    use crate::operators::distance_matrix;

    fn scalar(x: f64) -> DenseMatrix {
        DenseMatrix::from_rows(&[[x]]).unwrap()
    }

    #[test]
    fn single_scalar_edge_determinant() {
        let g = fixtures::single_edge(scalar(5.0));
        assert!((distance_determinant(&g).unwrap() + 25.0).abs() < 1e-12);
    }

    #[test]
    fn unit_path4_determinant() {
        // (-1)^{n-1} (n-1) 2^{n-2} at n = 4
        let det = distance_determinant(&fixtures::unit_path(4)).unwrap();
        assert!((det + 12.0).abs() < 1e-12, "{det}");
    }

    #[test]
    fn asymmetric_path_determinant_matches_lu() {
        let g = fixtures::asymmetric_path4();
        let closed = distance_determinant(&g).unwrap();
        let lu = determinant(distance_matrix(&g).unwrap().as_dense()).unwrap();
        assert!((closed - lu).abs() <= 1e-8 * lu.abs(), "{closed} vs {lu}");
    }

    #[test]
    fn invertibility_verdicts() {
        assert!(invertibility_check(&fixtures::asymmetric_path4()).unwrap().invertible);

        let cancel = MatrixWeightedGraph::new(3, 1)
            .with_edge(1, 2, scalar(1.0))
            .with_edge(2, 3, scalar(-1.0));
        let v = invertibility_check(&cancel).unwrap();
        assert_eq!(v.reason, Some(SingularFactor::WeightSum));

        let singular = MatrixWeightedGraph::new(3, 2)
            .with_edge(1, 2, DenseMatrix::identity(2))
            .with_edge(2, 3, DenseMatrix::ones(2, 2));
        let v = invertibility_check(&singular).unwrap();
        assert_eq!(v.reason, Some(SingularFactor::Weight(EdgeId(1))));
        assert!(matches!(
            distance_inverse(&singular),
            Err(Error::NotInvertible(SingularFactor::Weight(EdgeId(1))))
        ));
        assert_eq!(invertibility_check(&fixtures::swapped_cycle4()), Err(Error::NotATree));
    }

    #[test]
    fn single_edge_inverse() {
        let w = DenseMatrix::from_rows(&[[2.0, 1.0], [0.0, 3.0]]).unwrap();
        let winv = inverse(&w).unwrap();
        let d_inv = distance_inverse(&fixtures::single_edge(w)).unwrap();
        assert!(d_inv.block(0, 0).max_abs() < 1e-15);
        assert!(d_inv.block(1, 1).max_abs() < 1e-15);
        assert!(frobenius_distance(&d_inv.block(0, 1), &winv) < 1e-15);
        assert!(frobenius_distance(&d_inv.block(1, 0), &winv) < 1e-15);
    }

    #[test]
    fn asymmetric_path_inverse_residual() {
        let g = fixtures::asymmetric_path4();
        let d = distance_matrix(&g).unwrap();
        let d_inv = distance_inverse(&g).unwrap();
        let r = frobenius_distance(&(&*d * &d_inv), &DenseMatrix::identity(8));
        assert!(r < 1e-9, "residual {r}");
    }

    #[test]
    fn factored_form_agrees() {
        let w = DenseMatrix::from_rows(&[[2.0, 0.5], [0.5, 1.0]]).unwrap();
        let g = fixtures::single_edge(w.clone());
        let f = distance_inverse_factored(&g).unwrap();
        assert!(frobenius_distance(&f.block(0, 1), &inverse(&w).unwrap()) < 1e-14);

        let p3 = fixtures::unit_path(3);
        let lu = inverse(distance_matrix(&p3).unwrap().as_dense()).unwrap();
        assert!(frobenius_distance(&distance_inverse_factored(&p3).unwrap(), &lu) < 1e-10);
        assert_eq!(
            distance_inverse_factored(&fixtures::asymmetric_path4()),
            Err(Error::WeightNotSpd(EdgeId(1)))
        );
    }
}
