//! Instances shared by the benchmarks under `benches/`.

use mwtree_core::gen::{random_tree, GenConfig, WeightKind};
use mwtree_core::MatrixWeightedGraph;

/// Sizes `(n, s)` swept by the benchmarks.
pub const SIZES: [(usize, usize); 4] = [(8, 2), (16, 2), (32, 2), (16, 4)];

/// Random tree with positive definite weights, condition number at most 100.
pub fn spd_tree(n: usize, s: usize, seed: u64) -> MatrixWeightedGraph {
    random_tree(&GenConfig::new(n, s, WeightKind::Spd, seed)).expect("valid generator config")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_have_requested_shape() {
        for (n, s) in SIZES {
            let g = spd_tree(n, s, 1);
            assert_eq!((g.n(), g.s(), g.edge_count()), (n, s, n - 1));
        }
    }
}
