//! Small hand-checkable instances used by tests, benches and the CLI.

use crate::graph::MatrixWeightedGraph;
use crate::linalg::DenseMatrix;

fn m2(a: f64, b: f64, c: f64, d: f64) -> DenseMatrix {
    DenseMatrix::from_rows(&[[a, b], [c, d]]).expect("finite literal")
}

/// Path 1-2-3-4 with 2x2 weights `diag(2,1)`, `[[0,2],[1,0]]`, `diag(1,2)`.
///
/// The middle weight is neither symmetric nor definite, but every weight and
/// the weight sum `[[3,2],[1,3]]` are invertible.
pub fn asymmetric_path4() -> MatrixWeightedGraph {
    MatrixWeightedGraph::new(4, 2)
        .with_edge(1, 2, m2(2.0, 0.0, 0.0, 1.0))
        .with_edge(2, 3, m2(0.0, 2.0, 1.0, 0.0))
        .with_edge(3, 4, m2(1.0, 0.0, 0.0, 2.0))
}

/// The distance matrix of [`asymmetric_path4`], written out entry by entry.
pub fn asymmetric_path4_distance() -> DenseMatrix {
    DenseMatrix::from_rows(&[
        [0.0, 0.0, 2.0, 0.0, 2.0, 2.0, 3.0, 2.0],
        [0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 3.0],
        [2.0, 0.0, 0.0, 0.0, 0.0, 2.0, 1.0, 2.0],
        [0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 2.0],
        [2.0, 2.0, 0.0, 2.0, 0.0, 0.0, 1.0, 0.0],
        [1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0],
        [3.0, 2.0, 1.0, 2.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 3.0, 1.0, 2.0, 0.0, 2.0, 0.0, 0.0],
    ])
    .expect("finite literal")
}

/// The inverse-weighted Laplacian of [`asymmetric_path4`], assembled by hand
/// from `W⁻¹` blocks.
pub fn asymmetric_path4_laplacian() -> DenseMatrix {
    DenseMatrix::from_rows(&[
        [0.5, 0.0, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0],
        [-0.5, 0.0, 0.5, 1.0, 0.0, -1.0, 0.0, 0.0],
        [0.0, -1.0, 0.5, 1.0, -0.5, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0, 1.0, 1.0, -1.0, 0.0],
        [0.0, 0.0, -0.5, 0.0, 0.5, 0.5, 0.0, -0.5],
        [0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, -0.5, 0.0, 0.5],
    ])
    .expect("finite literal")
}

/// 4-cycle 1-2-3-4-1 whose weights alternate between `I₂` and the swap
/// matrix `[[0,1],[1,0]]`: edges (1,2)=I, (2,3)=swap, (3,4)=I, (1,4)=swap.
/// Every weight is nonsingular yet the Laplacian has rank 5, not 6.
pub fn swapped_cycle4() -> MatrixWeightedGraph {
    let id = DenseMatrix::identity(2);
    let swap = m2(0.0, 1.0, 1.0, 0.0);
    MatrixWeightedGraph::new(4, 2)
        .with_edge(1, 2, id.clone())
        .with_edge(2, 3, swap.clone())
        .with_edge(3, 4, id)
        .with_edge(1, 4, swap)
}

/// The inverse-weighted Laplacian of [`swapped_cycle4`], entry by entry.
pub fn swapped_cycle4_laplacian() -> DenseMatrix {
    DenseMatrix::from_rows(&[
        [1.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0, -1.0],
        [1.0, 1.0, 0.0, -1.0, 0.0, 0.0, -1.0, 0.0],
        [-1.0, 0.0, 1.0, 1.0, 0.0, -1.0, 0.0, 0.0],
        [0.0, -1.0, 1.0, 1.0, -1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0, 1.0, 1.0, -1.0, 0.0],
        [0.0, 0.0, -1.0, 0.0, 1.0, 1.0, 0.0, -1.0],
        [0.0, -1.0, 0.0, 0.0, -1.0, 0.0, 1.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 1.0, 1.0],
    ])
    .expect("finite literal")
}

/// The diamond: `K₄` minus the edge (2,4), scalar unit weights. Edge (1,3)
/// is the chord shared by both triangles and lies in 4 of the 8 spanning
/// trees.
pub fn diamond() -> MatrixWeightedGraph {
    let one = DenseMatrix::identity(1);
    MatrixWeightedGraph::new(4, 1)
        .with_edge(1, 2, one.clone())
        .with_edge(1, 3, one.clone())
        .with_edge(1, 4, one.clone())
        .with_edge(2, 3, one.clone())
        .with_edge(3, 4, one)
}

/// Scalar path on `n` vertices with unit weights.
pub fn unit_path(n: usize) -> MatrixWeightedGraph {
    let mut g = MatrixWeightedGraph::new(n, 1);
    for v in 2..=n {
        g.add_edge(v - 1, v, DenseMatrix::identity(1));
    }
    g
}

/// Scalar cycle on `n` vertices with unit weights.
pub fn unit_cycle(n: usize) -> MatrixWeightedGraph {
    unit_path(n).with_edge(1, n, DenseMatrix::identity(1))
}

/// Scalar complete graph on `n` vertices with unit weights.
pub fn unit_complete(n: usize) -> MatrixWeightedGraph {
    let mut g = MatrixWeightedGraph::new(n, 1);
    for u in 1..=n {
        for v in (u + 1)..=n {
            g.add_edge(u, v, DenseMatrix::identity(1));
        }
    }
    g
}

/// Star with centre 1 and `leaves` leaves, all weights `w`.
pub fn star(leaves: usize, w: &DenseMatrix) -> MatrixWeightedGraph {
    let mut g = MatrixWeightedGraph::new(leaves + 1, w.rows());
    for v in 2..=leaves + 1 {
        g.add_edge(1, v, w.clone());
    }
    g
}

/// Single edge 1-2 with weight `w`.
pub fn single_edge(w: DenseMatrix) -> MatrixWeightedGraph {
    MatrixWeightedGraph::new(2, w.rows()).with_edge(1, 2, w)
}
