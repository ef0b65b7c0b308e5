//! Assembly of the block distance matrix, block Laplacian and scaled
//! incidence matrix of a matrix-weighted graph.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MatrixWeightedGraph};
use crate::linalg::{inverse, spd_inverse_sqrt, BlockMatrix, DenseMatrix};

/// Which matrix goes into the Laplacian blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianMode {
    /// Blocks built from `Wᵢ`.
    Raw,
    /// Blocks built from `Wᵢ⁻¹`.
    #[default]
    Inverted,
}

/// Block distance matrix of a tree: block `(i, j)` is the sum of the weights
/// on the path from `i` to `j`.
///
/// One breadth-first traversal per root fills block row `i` for columns
/// `j > i`; the lower triangle is mirrored, so `D[i][j] == D[j][i]` holds
/// exactly as matrices.
pub fn distance_matrix(g: &MatrixWeightedGraph) -> Result<BlockMatrix> {
    g.require_tree()?;
    let (n, s) = (g.n(), g.s());
    let adj = g.adjacency();
    let mut d = BlockMatrix::zeros(n, n, s);
    let mut acc: Vec<Option<DenseMatrix>> = vec![None; n];
    for root in 0..n {
        acc.iter_mut().for_each(|x| *x = None);
        acc[root] = Some(DenseMatrix::zeros(s, s));
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &(y, e) in &adj[x] {
                if acc[y].is_none() {
                    let base = acc[x].as_ref().expect("visited");
                    acc[y] = Some(base + &g.edges()[e.index()].weight);
                    stack.push(y);
                }
            }
        }
        for (j, sum) in acc.iter().enumerate().skip(root + 1) {
            let sum = sum.as_ref().expect("tree is connected");
            d.set_block(root, j, sum);
            d.set_block(j, root, sum);
        }
    }
    Ok(d)
}

/// Block Laplacian: diagonal block `i` is the sum of the (possibly inverted)
/// weights incident to `i`, off-diagonal block `(u, v)` is minus the weight
/// of edge `(u, v)`.
pub fn laplacian(g: &MatrixWeightedGraph, mode: LaplacianMode) -> Result<BlockMatrix> {
    g.check_structure()?;
    let mut l = BlockMatrix::zeros(g.n(), g.n(), g.s());
    for (idx, e) in g.edges().iter().enumerate() {
        let w = match mode {
            LaplacianMode::Raw => e.weight.clone(),
            LaplacianMode::Inverted => {
                inverse(&e.weight).map_err(|_| Error::SingularWeight(EdgeId(idx)))?
            }
        };
        let (u, v) = (e.u - 1, e.v - 1);
        l.add_to_block(u, u, &w, 1.0);
        l.add_to_block(v, v, &w, 1.0);
        l.add_to_block(u, v, &w, -1.0);
        l.add_to_block(v, u, &w, -1.0);
    }
    Ok(l)
}

/// Scaled vertex-edge incidence matrix (`ns x ms`) under the canonical
/// orientation: column block `j` holds `+W_j^{-1/2}` at the smaller endpoint
/// and `-W_j^{-1/2}` at the larger one.
pub fn incidence_matrix(g: &MatrixWeightedGraph) -> Result<BlockMatrix> {
    incidence_matrix_oriented(g, &vec![false; g.edge_count()])
}

/// Incidence matrix with edge `j` reversed wherever `flipped[j]` is set.
pub fn incidence_matrix_oriented(g: &MatrixWeightedGraph, flipped: &[bool]) -> Result<BlockMatrix> {
    g.check_structure()?;
    if flipped.len() != g.edge_count() {
        return Err(Error::Shape {
            expected: (g.edge_count(), 1),
            found: (flipped.len(), 1),
        });
    }
    let mut q = BlockMatrix::zeros(g.n(), g.edge_count(), g.s());
    for (idx, (e, &flip)) in g.edges().iter().zip(flipped).enumerate() {
        let root = spd_inverse_sqrt(&e.weight).map_err(|_| Error::WeightNotSpd(EdgeId(idx)))?;
        let (tail, head) = if flip { (e.v, e.u) } else { (e.u, e.v) };
        q.add_to_block(tail - 1, idx, &root, 1.0);
        q.add_to_block(head - 1, idx, &root, -1.0);
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::{frobenius_distance, kronecker};

    fn scalar(x: f64) -> DenseMatrix {
        DenseMatrix::from_rows(&[[x]]).unwrap()
    }

    #[test]
    fn asymmetric_path_distance_matches_written_matrix() {
        let d = distance_matrix(&fixtures::asymmetric_path4()).unwrap();
        assert_eq!(d.as_dense(), &fixtures::asymmetric_path4_distance());
        assert_eq!(d.block(0, 3), DenseMatrix::from_rows(&[[3.0, 2.0], [1.0, 3.0]]).unwrap());
    }

    #[test]
    fn unit_path3_distance() {
        let d = distance_matrix(&fixtures::unit_path(3)).unwrap();
        let expected =
            DenseMatrix::from_rows(&[[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]]).unwrap();
        assert_eq!(d.as_dense(), &expected);
    }

    #[test]
    fn single_edge_distance_and_laplacian() {
        let w = DenseMatrix::from_rows(&[[1.0, 2.0], [0.5, 3.0]]).unwrap();
        let g = fixtures::single_edge(w.clone());
        let d = distance_matrix(&g).unwrap();
        assert_eq!(d.block(0, 1), w);
        assert_eq!(d.block(1, 0), w);
        assert_eq!(d.block(0, 0).max_abs(), 0.0);

        let winv = inverse(&w).unwrap();
        let l = laplacian(&g, LaplacianMode::Inverted).unwrap();
        assert_eq!(l.block(0, 0), winv);
        assert_eq!(l.block(1, 1), winv);
        assert_eq!(l.block(0, 1), -&winv);
    }

    #[test]
    fn non_tree_has_no_distance_matrix() {
        assert_eq!(distance_matrix(&fixtures::swapped_cycle4()), Err(Error::NotATree));
    }

    #[test]
    fn asymmetric_path_laplacian_matches_hand_assembly() {
        let l = laplacian(&fixtures::asymmetric_path4(), LaplacianMode::Inverted).unwrap();
        assert!(frobenius_distance(l.as_dense(), &fixtures::asymmetric_path4_laplacian()) < 1e-15);
        assert_eq!(l.block(1, 1), DenseMatrix::from_rows(&[[0.5, 1.0], [0.5, 1.0]]).unwrap());
    }

    #[test]
    fn swapped_cycle_laplacian_matches_written_matrix() {
        let l = laplacian(&fixtures::swapped_cycle4(), LaplacianMode::Inverted).unwrap();
        assert_eq!(l.as_dense(), &fixtures::swapped_cycle4_laplacian());
    }

    #[test]
    fn raw_mode_uses_weights() {
        let g = fixtures::single_edge(scalar(4.0));
        let raw = laplacian(&g, LaplacianMode::Raw).unwrap();
        let inv = laplacian(&g, LaplacianMode::Inverted).unwrap();
        assert_eq!(raw.get(0, 0), 4.0);
        assert_eq!(inv.get(0, 0), 0.25);
    }

    #[test]
    fn singular_weight_in_inverted_mode() {
        let g = fixtures::asymmetric_path4()
            .with_edge(4, 5, DenseMatrix::zeros(2, 2));
        let g = MatrixWeightedGraph::try_from_edges(5, 2, g.edges().to_vec()).unwrap();
        assert_eq!(
            laplacian(&g, LaplacianMode::Inverted),
            Err(Error::SingularWeight(EdgeId(3)))
        );
        assert!(laplacian(&g, LaplacianMode::Raw).is_ok());
    }

    #[test]
    fn block_rows_of_laplacian_sum_to_zero() {
        let l = laplacian(&fixtures::asymmetric_path4(), LaplacianMode::Inverted).unwrap();
        for i in 0..4 {
            assert!(l.block_row_sum(i).max_abs() < 1e-12 * l.frobenius_norm());
        }
    }

    #[test]
    fn incidence_examples() {
        let q = incidence_matrix(&fixtures::single_edge(scalar(1.0))).unwrap();
        assert_eq!(q.as_dense(), &DenseMatrix::column(&[1.0, -1.0]));

        let q = incidence_matrix(&fixtures::unit_path(3)).unwrap();
        let expected =
            DenseMatrix::from_rows(&[[1.0, 0.0], [-1.0, 1.0], [0.0, -1.0]]).unwrap();
        assert_eq!(q.as_dense(), &expected);

        let q = incidence_matrix(&fixtures::single_edge(DenseMatrix::from_diagonal(&[4.0, 9.0])))
            .unwrap();
        let r = DenseMatrix::from_diagonal(&[0.5, 1.0 / 3.0]);
        assert!(frobenius_distance(&q.block(0, 0), &r) < 1e-14);
        assert!(frobenius_distance(&q.block(1, 0), &-&r) < 1e-14);
    }

    #[test]
    fn incidence_requires_spd() {
        assert_eq!(
            incidence_matrix(&fixtures::asymmetric_path4()),
            Err(Error::WeightNotSpd(EdgeId(1)))
        );
    }

    #[test]
    fn laplacian_factors_through_incidence() {
        let w = DenseMatrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
        let g = fixtures::star(3, &w);
        let q = incidence_matrix(&g).unwrap();
        let l = laplacian(&g, LaplacianMode::Inverted).unwrap();
        let qqt = &*q * &q.transpose();
        assert!(frobenius_distance(&qqt, &l) < 1e-9 * l.frobenius_norm());
        let ones = kronecker(&DenseMatrix::ones(1, 4), &DenseMatrix::identity(2));
        assert!((&ones * &q).max_abs() < 1e-12);
    }
}
