use super::{distance_inverse, invertibility_check, VerificationReport};
use crate::error::Result;
use crate::graph::MatrixWeightedGraph;
use crate::linalg::{frobenius_distance, kronecker, DenseMatrix};
use crate::operators::{distance_matrix, incidence_matrix, laplacian, LaplacianMode};

/// Report names, in the order [`verify_identities`] returns them.
pub const IDENTITY_NAMES: [&str; 5] = [
    "LD = δ1ᵀ⊗I - 2I",
    "DL = 1δᵀ⊗I - 2I",
    "LDL = -2L",
    "(D⁻¹ - L)(D/3 + J⊗ΣW/3) = I",
    "QᵀDQ = -2I",
];

/// Checks the five Laplacian/distance identities of an invertible tree.
///
/// Residuals are Frobenius norms; the tolerance is `1e-8 · ns` for each.
/// The inverse identity is checked as a product against `I` using the
/// closed-form `D⁻¹`. The incidence identity needs positive definite weights
/// and is reported as skipped otherwise.
pub fn verify_identities(g: &MatrixWeightedGraph) -> Result<Vec<VerificationReport>> {
    invertibility_check(g)?.into_result()?;
    let (n, s) = (g.n(), g.s());
    let tol = 1e-8 * (n * s) as f64;
    let d = distance_matrix(g)?;
    let l = laplacian(g, LaplacianMode::Inverted)?;
    let d_inv = distance_inverse(g)?;

    let ident = DenseMatrix::identity(n * s);
    let i_s = DenseMatrix::identity(s);
    let delta = DenseMatrix::column(&g.delta_vector().to_f64());
    let ones = DenseMatrix::ones(n, 1);
    let two_i = ident.scale(2.0);

    let ld_rhs = &kronecker(&(&delta * &ones.transpose()), &i_s) - &two_i;
    let dl_rhs = &kronecker(&(&ones * &delta.transpose()), &i_s) - &two_i;
    let ld = &*l * &d;
    let dl = &*d * &l;
    let ldl = &ld * &l;

    let j_sum = kronecker(&DenseMatrix::ones(n, n), &g.weight_sum()?);
    let third = &d.scale(1.0 / 3.0) + &j_sum.scale(1.0 / 3.0);
    let inv_product = &(&*d_inv - &l) * &third;

    let mut reports = vec![
        VerificationReport::measured(IDENTITY_NAMES[0], frobenius_distance(&ld, &ld_rhs), tol, n, s),
        VerificationReport::measured(IDENTITY_NAMES[1], frobenius_distance(&dl, &dl_rhs), tol, n, s),
        VerificationReport::measured(
            IDENTITY_NAMES[2],
            frobenius_distance(&ldl, &l.scale(-2.0)),
            tol,
            n,
            s,
        ),
        VerificationReport::measured(
            IDENTITY_NAMES[3],
            frobenius_distance(&inv_product, &ident),
            tol,
            n,
            s,
        ),
    ];

    reports.push(match incidence_matrix(g) {
        Ok(q) => {
            let qdq = &(&q.transpose() * &d) * &q;
            let target = DenseMatrix::identity((n - 1) * s).scale(-2.0);
            VerificationReport::measured(IDENTITY_NAMES[4], frobenius_distance(&qdq, &target), tol, n, s)
        }
        Err(e) => VerificationReport::skipped(IDENTITY_NAMES[4], e.to_string(), n, s),
    });
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::CheckStatus;
    use crate::error::Error;
    use crate::fixtures;

    #[test]
    fn single_unit_edge_identities() {
        let reports = verify_identities(&fixtures::unit_path(2)).unwrap();
        assert_eq!(reports.len(), 5);
        for r in &reports {
            assert_eq!(r.status, CheckStatus::Pass, "{r:?}");
            assert!(r.residual.unwrap() < 1e-14);
        }
    }

    #[test]
    fn single_edge_ld_by_hand() {
        let g = fixtures::unit_path(2);
        let ld = &*laplacian(&g, LaplacianMode::Inverted).unwrap() * &distance_matrix(&g).unwrap();
        assert_eq!(ld, DenseMatrix::from_rows(&[[-1.0, 1.0], [1.0, -1.0]]).unwrap());
    }

    #[test]
    fn single_edge_inverse_identity_by_hand() {
        // (D⁻¹ - L)⁻¹ = [[1/3, 2/3], [2/3, 1/3]] for w = 1
        let g = fixtures::unit_path(2);
        let d = distance_matrix(&g).unwrap();
        let rhs = &d.scale(1.0 / 3.0) + &DenseMatrix::ones(2, 2).scale(1.0 / 3.0);
        let expected = DenseMatrix::from_rows(&[[1.0 / 3.0, 2.0 / 3.0], [2.0 / 3.0, 1.0 / 3.0]]).unwrap();
        assert!(frobenius_distance(&rhs, &expected) < 1e-15);
    }

    #[test]
    fn unit_path3_incidence_identity() {
        let g = fixtures::unit_path(3);
        let q = incidence_matrix(&g).unwrap();
        let d = distance_matrix(&g).unwrap();
        let qdq = &(&q.transpose() * &d) * &q;
        assert_eq!(qdq, DenseMatrix::identity(2).scale(-2.0));
    }

    #[test]
    fn asymmetric_path_skips_incidence_identity() {
        let reports = verify_identities(&fixtures::asymmetric_path4()).unwrap();
        for r in &reports[..4] {
            assert!(r.passed(), "{r:?}");
        }
        assert_eq!(reports[4].status, CheckStatus::Skipped);
    }

    #[test]
    fn singular_tree_is_rejected() {
        let g = MatrixWeightedGraph::new(3, 1)
            .with_edge(1, 2, DenseMatrix::identity(1))
            .with_edge(2, 3, DenseMatrix::identity(1).scale(-1.0));
        assert!(matches!(verify_identities(&g), Err(Error::NotInvertible(_))));
    }
}
