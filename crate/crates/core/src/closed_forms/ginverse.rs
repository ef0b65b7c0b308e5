use super::VerificationReport;
use crate::error::Result;
use crate::graph::MatrixWeightedGraph;
use crate::linalg::{frobenius_distance, pseudo_inverse, random_g_inverse, DenseMatrix};
use crate::operators::{distance_matrix, laplacian, LaplacianMode};

/// `B_ii + B_jj - B_ij - B_ji` for 0-based block indices, i.e.
/// `(e_ij ⊗ I_s)ᵀ B (e_ij ⊗ I_s)`.
pub fn pair_contraction(b: &DenseMatrix, s: usize, i: usize, j: usize) -> DenseMatrix {
    let blk = |r: usize, c: usize| b.submatrix(r * s, c * s, s, s);
    &(&(&blk(i, i) + &blk(j, j)) - &blk(i, j)) - &blk(j, i)
}

/// Draws two g-inverses of the inverse-weighted Laplacian from the given
/// seeds and reports the largest Frobenius gap between their pair
/// contractions over all vertex pairs. Tolerance `1e-7 · ‖L⁺‖_F`.
///
/// Holds for any connected graph with positive definite weights.
pub fn ginverse_invariance_check(
    g: &MatrixWeightedGraph,
    seeds: (u64, u64),
) -> Result<VerificationReport> {
    g.require_connected()?;
    g.require_spd_weights()?;
    let (n, s) = (g.n(), g.s());
    let l = laplacian(g, LaplacianMode::Inverted)?;
    let h1 = random_g_inverse(&l, seeds.0);
    let h2 = random_g_inverse(&l, seeds.1);
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = frobenius_distance(&pair_contraction(&h1, s, i, j), &pair_contraction(&h2, s, i, j));
            worst = worst.max(gap);
        }
    }
    let tol = 1e-7 * pseudo_inverse(&l).frobenius_norm();
    Ok(VerificationReport::measured(
        "g-inverse pair contraction invariance",
        worst,
        tol,
        n,
        s,
    ))
}

/// For a tree with positive definite weights, the pair contraction of any
/// g-inverse of `L` equals the distance block `D_ij`. Reports the largest
/// block gap against a seeded g-inverse; tolerance `1e-7 · ‖D‖_F`.
pub fn ginverse_distance_recovery(g: &MatrixWeightedGraph, seed: u64) -> Result<VerificationReport> {
    g.require_tree()?;
    g.require_spd_weights()?;
    let (n, s) = (g.n(), g.s());
    let l = laplacian(g, LaplacianMode::Inverted)?;
    let d = distance_matrix(g)?;
    let h = random_g_inverse(&l, seed);
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                worst = worst.max(frobenius_distance(&pair_contraction(&h, s, i, j), &d.block(i, j)));
            }
        }
    }
    let tol = 1e-7 * d.frobenius_norm();
    Ok(VerificationReport::measured(
        "g-inverse recovers distance blocks",
        worst,
        tol,
        n,
        s,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fixtures;
    use crate::graph::EdgeId;

    #[test]
    fn same_seed_has_zero_discrepancy() {
        let r = ginverse_invariance_check(&fixtures::unit_path(3), (5, 5)).unwrap();
        assert_eq!(r.residual, Some(0.0));
    }

    #[test]
    fn path3_distinct_seeds() {
        let r = ginverse_invariance_check(&fixtures::unit_path(3), (1, 2)).unwrap();
        assert!(r.residual.unwrap() < 1e-9, "{r:?}");
        assert!(r.passed());
    }

    #[test]
    fn spd_cycle_distinct_seeds() {
        let w = DenseMatrix::from_rows(&[[2.0, 0.5], [0.5, 1.0]]).unwrap();
        let mut g = MatrixWeightedGraph::new(4, 2);
        for (u, v) in [(1, 2), (2, 3), (3, 4), (1, 4)] {
            g.add_edge(u, v, w.clone());
        }
        let r = ginverse_invariance_check(&g, (10, 20)).unwrap();
        assert!(r.residual.unwrap() < 1e-9, "{r:?}");
    }

    #[test]
    fn path3_pseudo_inverse_contraction() {
        let g = fixtures::unit_path(3);
        let l = laplacian(&g, LaplacianMode::Inverted).unwrap();
        let c = pair_contraction(&pseudo_inverse(&l), 1, 0, 1);
        assert!((c.get(0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_edge_contraction_is_weight() {
        let w = DenseMatrix::from_rows(&[[3.0, 1.0], [1.0, 2.0]]).unwrap();
        let g = fixtures::single_edge(w.clone());
        let l = laplacian(&g, LaplacianMode::Inverted).unwrap();
        // L⁺ = ¼ [[W, -W], [-W, W]] for a single edge
        let c = pair_contraction(&pseudo_inverse(&l), 2, 0, 1);
        assert!(frobenius_distance(&c, &w) < 1e-12);
        assert!(ginverse_distance_recovery(&g, 3).unwrap().passed());
    }

    #[test]
    fn diag_weighted_path_recovers_far_block() {
        let g = MatrixWeightedGraph::new(4, 2)
            .with_edge(1, 2, DenseMatrix::from_diagonal(&[2.0, 1.0]))
            .with_edge(2, 3, DenseMatrix::from_diagonal(&[1.0, 3.0]))
            .with_edge(3, 4, DenseMatrix::from_diagonal(&[1.0, 2.0]));
        let l = laplacian(&g, LaplacianMode::Inverted).unwrap();
        let h = random_g_inverse(&l, 77);
        let c = pair_contraction(&h, 2, 0, 3);
        assert!(frobenius_distance(&c, &DenseMatrix::from_diagonal(&[4.0, 6.0])) < 1e-9);
        assert!(ginverse_distance_recovery(&g, 77).unwrap().passed());
    }

    #[test]
    fn hypotheses_enforced() {
        assert_eq!(
            ginverse_invariance_check(&fixtures::asymmetric_path4(), (1, 2)),
            Err(Error::WeightNotSpd(EdgeId(1)))
        );
        assert_eq!(
            ginverse_distance_recovery(&fixtures::diamond(), 1),
            Err(Error::NotATree)
        );
        let split = MatrixWeightedGraph::new(4, 1)
            .with_edge(1, 2, DenseMatrix::identity(1))
            .with_edge(3, 4, DenseMatrix::identity(1));
        assert_eq!(ginverse_invariance_check(&split, (1, 2)), Err(Error::NotConnected));
    }
}
