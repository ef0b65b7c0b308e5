use serde::Serialize;

use crate::error::Result;
use crate::graph::MatrixWeightedGraph;
use crate::linalg::{inertia, symmetric_eigenvalues, Inertia, Spectrum, DEFAULT_RANK_TOL};
use crate::operators::{distance_matrix, laplacian, LaplacianMode};

/// Inertia of the distance matrix of a tree with positive definite weights.
/// Eigenvalues within `1e-9 · |largest|` of zero count as zero. The expected
/// answer is `(s, (n-1)s, 0)`.
pub fn inertia_check(g: &MatrixWeightedGraph) -> Result<Inertia> {
    g.require_tree()?;
    g.require_spd_weights()?;
    inertia(distance_matrix(g)?.as_dense(), DEFAULT_RANK_TOL)
}

/// One link `lower ≤ middle ≤ upper` of the interlacing chain, with
/// `lower = μ_{s+i}`, `middle = -2/λ_i`, `upper = μ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterlacingTriple {
    /// 1-based `i`.
    pub index: usize,
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
}

impl InterlacingTriple {
    /// `middle - lower`; negative means the lower inequality is violated.
    pub fn lower_slack(&self) -> f64 {
        self.middle - self.lower
    }

    /// `upper - middle`; negative means the upper inequality is violated.
    pub fn upper_slack(&self) -> f64 {
        self.upper - self.middle
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.lower_slack() >= -tol && self.upper_slack() >= -tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlacingReport {
    /// Spectrum of `D`.
    pub mu: Spectrum,
    /// Spectrum of the inverse-weighted `L`; the last `s` entries are zero.
    pub lambda: Spectrum,
    pub triples: Vec<InterlacingTriple>,
    pub tolerance: f64,
    pub pass: bool,
}

impl InterlacingReport {
    /// Most negative slack over the whole chain (positive when every link
    /// holds strictly).
    pub fn worst_slack(&self) -> f64 {
        self.triples
            .iter()
            .flat_map(|t| [t.lower_slack(), t.upper_slack()])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Checks `μ_{s+i} ≤ -2/λ_i ≤ μ_i` for `i = 1..(n-1)s`, both spectra sorted
/// descending. Equality is allowed within `1e-8 · max(|μ_1|, λ_1)` on either
/// side.
pub fn interlacing_check(g: &MatrixWeightedGraph) -> Result<InterlacingReport> {
    g.require_tree()?;
    g.require_spd_weights()?;
    let s = g.s();
    let mu = symmetric_eigenvalues(distance_matrix(g)?.as_dense())?;
    let lambda = symmetric_eigenvalues(laplacian(g, LaplacianMode::Inverted)?.as_dense())?;
    let tolerance = 1e-8 * mu.nth(1).abs().max(lambda.nth(1));
    let triples: Vec<InterlacingTriple> = (1..=(g.n() - 1) * s)
        .map(|i| InterlacingTriple {
            index: i,
            lower: mu.nth(s + i),
            middle: -2.0 / lambda.nth(i),
            upper: mu.nth(i),
        })
        .collect();
    let pass = triples.iter().all(|t| t.holds(tolerance));
    Ok(InterlacingReport {
        mu,
        lambda,
        triples,
        tolerance,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fixtures;
    use crate::linalg::DenseMatrix;

    #[test]
    fn path3_inertia() {
        let i = inertia_check(&fixtures::unit_path(3)).unwrap();
        assert_eq!(i, Inertia { positive: 1, negative: 2, zero: 0 });
    }

    #[test]
    fn diagonal_edge_inertia() {
        // D = [[0, W], [W, 0]] has eigenvalues ±1, ±2 for W = diag(1, 2)
        let g = fixtures::single_edge(DenseMatrix::from_diagonal(&[1.0, 2.0]));
        let i = inertia_check(&g).unwrap();
        assert_eq!(i, Inertia { positive: 2, negative: 2, zero: 0 });
    }

    #[test]
    fn path3_interlacing_with_equality() {
        let r = interlacing_check(&fixtures::unit_path(3)).unwrap();
        assert!(r.pass);
        let r3 = 3.0_f64.sqrt();
        assert!((r.mu.nth(1) - (1.0 + r3)).abs() < 1e-12);
        assert!((r.lambda.nth(1) - 3.0).abs() < 1e-12);
        assert_eq!(r.triples.len(), 2);
        let t1 = r.triples[0];
        assert!((t1.lower - (1.0 - r3)).abs() < 1e-12);
        assert!((t1.middle + 2.0 / 3.0).abs() < 1e-12);
        let t2 = r.triples[1];
        // -2/λ₂ = μ₃ = -2
        assert!((t2.middle + 2.0).abs() < 1e-12);
        assert!((t2.lower + 2.0).abs() < 1e-12);
        assert!(t2.lower_slack().abs() < 1e-12);
    }

    #[test]
    fn single_edge_interlacing() {
        let r = interlacing_check(&fixtures::unit_path(2)).unwrap();
        assert!(r.pass);
        let t = r.triples[0];
        assert!((t.lower + 1.0).abs() < 1e-12);
        assert!((t.middle + 1.0).abs() < 1e-12);
        assert!((t.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn requires_spd_tree() {
        assert!(matches!(
            interlacing_check(&fixtures::asymmetric_path4()),
            Err(Error::WeightNotSpd(_))
        ));
        assert_eq!(inertia_check(&fixtures::diamond()), Err(Error::NotATree));
    }
}
