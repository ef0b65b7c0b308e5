use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen::{random_weights, WeightKind};
use crate::graph::{EdgeId, MatrixWeightedGraph};
use crate::linalg::{determinant, numerical_rank, DenseMatrix, DEFAULT_RANK_TOL};
use crate::operators::{laplacian, LaplacianMode};

/// Condition cap for the random reweightings drawn by
/// [`rank_characterization_probe`].
const PROBE_CONDITION_CAP: f64 = 1e3;

/// A scalar weighting that drops the Laplacian rank below `n - 1`: weight
/// `w` on `edge`, 1 on every other edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeficientWeighting {
    pub edge: EdgeId,
    pub u: usize,
    pub v: usize,
    /// Spanning trees containing `edge`.
    pub a: u64,
    /// Spanning trees avoiding `edge`.
    pub b: u64,
    /// `-b / a`.
    pub w: f64,
    /// Numerical rank of the reweighted scalar Laplacian.
    pub rank: usize,
    /// `n - 1`, the rank every tree reaches.
    pub full_rank: usize,
}

impl DeficientWeighting {
    pub fn is_deficient(&self) -> bool {
        self.rank < self.full_rank
    }
}

/// Scalar Laplacian of `g`'s topology: weight `x` on `marked`, 1 elsewhere.
fn scalar_laplacian(g: &MatrixWeightedGraph, marked: EdgeId, x: f64) -> DenseMatrix {
    let n = g.n();
    let mut l = DenseMatrix::zeros(n, n);
    for (idx, e) in g.edges().iter().enumerate() {
        let w = if idx == marked.index() { x } else { 1.0 };
        let (u, v) = (e.u - 1, e.v - 1);
        l.add_at(u, u, w);
        l.add_at(v, v, w);
        l.add_at(u, v, -w);
        l.add_at(v, u, -w);
    }
    l
}

/// The `(1,1)` cofactor of the scalar Laplacian with weight `x` on `marked`
/// and 1 elsewhere, which by the matrix-tree theorem is the total weight of
/// all spanning trees.
pub fn scalar_cofactor(g: &MatrixWeightedGraph, marked: EdgeId, x: f64) -> Result<f64> {
    g.check_structure()?;
    g.edge(marked)?;
    if g.n() == 1 {
        return Ok(1.0);
    }
    determinant(&scalar_laplacian(g, marked, x).minor(0, 0))
}

/// Spanning-tree counts `(a, b)` read off the affine cofactor `a·x + b`
/// sampled at `x = 1` and `x = 2`.
fn interpolate_counts(g: &MatrixWeightedGraph, edge: EdgeId) -> Result<(u64, u64)> {
    let c1 = scalar_cofactor(g, edge, 1.0)?;
    let c2 = scalar_cofactor(g, edge, 2.0)?;
    let a = (c2 - c1).round();
    let b = (2.0 * c1 - c2).round();
    Ok((a.max(0.0) as u64, b.max(0.0) as u64))
}

fn witness(g: &MatrixWeightedGraph, edge: EdgeId, a: u64, b: u64) -> Result<DeficientWeighting> {
    let e = g.edge(edge)?;
    let w = -(b as f64) / (a as f64);
    let rank = numerical_rank(&scalar_laplacian(g, edge, w), DEFAULT_RANK_TOL);
    Ok(DeficientWeighting {
        edge,
        u: e.u,
        v: e.v,
        a,
        b,
        w,
        rank,
        full_rank: g.n() - 1,
    })
}

fn require_cyclic(g: &MatrixWeightedGraph) -> Result<()> {
    if g.is_tree()? {
        Err(Error::IsATree)
    } else {
        Ok(())
    }
}

/// Rank-collapsing scalar weighting for a connected non-tree.
///
/// Candidate edges are the non-bridges. Among them the edge contained in the
/// smallest fraction `a / (a + b)` of spanning trees is chosen (ties go to
/// the lowest edge id); on the diamond this is the shared chord.
pub fn rank_deficient_weighting(g: &MatrixWeightedGraph) -> Result<DeficientWeighting> {
    require_cyclic(g)?;
    let bridges = g.bridges()?;
    let mut best: Option<(EdgeId, u64, u64)> = None;
    for edge in g.edge_ids().filter(|e| !bridges.contains(e)) {
        let (a, b) = interpolate_counts(g, edge)?;
        let better = match best {
            None => true,
            // a/(a+b) < a'/(a'+b'), cross-multiplied
            Some((_, a0, b0)) => (a as u128) * ((a0 + b0) as u128) < (a0 as u128) * ((a + b) as u128),
        };
        if better {
            best = Some((edge, a, b));
        }
    }
    let (edge, a, b) = best.ok_or(Error::NoBridgelessEdge)?;
    witness(g, edge, a, b)
}

/// Like [`rank_deficient_weighting`] for a caller-chosen edge, which must not
/// be a bridge.
pub fn rank_deficient_weighting_at(g: &MatrixWeightedGraph, edge: EdgeId) -> Result<DeficientWeighting> {
    require_cyclic(g)?;
    g.edge(edge)?;
    if g.bridges()?.contains(&edge) {
        return Err(Error::BridgeEdge(edge));
    }
    let (a, b) = interpolate_counts(g, edge)?;
    witness(g, edge, a, b)
}

/// Outcome of [`rank_characterization_probe`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum RankVerdict {
    /// Every weighting tried reached rank `(n-1)s`.
    Tree {
        full_rank: usize,
        given_rank: usize,
        trial_ranks: Vec<usize>,
        holds: bool,
    },
    /// A scalar weighting with rank below `n - 1` was constructed.
    NonTree {
        full_rank: usize,
        given_rank: usize,
        witness: DeficientWeighting,
        holds: bool,
    },
}

impl RankVerdict {
    pub fn holds(&self) -> bool {
        match self {
            RankVerdict::Tree { holds, .. } | RankVerdict::NonTree { holds, .. } => *holds,
        }
    }

    pub fn given_rank(&self) -> usize {
        match self {
            RankVerdict::Tree { given_rank, .. } | RankVerdict::NonTree { given_rank, .. } => {
                *given_rank
            }
        }
    }
}

/// Exercises the tree characterisation by Laplacian rank.
///
/// For a tree, the inverse-weighted Laplacian must have rank `(n-1)s` for
/// the given weights and for `trials` random nonsingular reweightings
/// (seeded by `seed`, one stream per trial). For a non-tree a rank-collapsing
/// scalar weighting is constructed instead.
pub fn rank_characterization_probe(
    g: &MatrixWeightedGraph,
    trials: usize,
    seed: u64,
) -> Result<RankVerdict> {
    g.require_connected()?;
    let full_rank = (g.n() - 1) * g.s();
    let rank_of = |h: &MatrixWeightedGraph| -> Result<usize> {
        Ok(numerical_rank(
            laplacian(h, LaplacianMode::Inverted)?.as_dense(),
            DEFAULT_RANK_TOL,
        ))
    };
    let given_rank = rank_of(g)?;
    if g.is_tree()? {
        let trial_ranks = (0..trials as u64)
            .map(|t| {
                let weights = random_weights(
                    g,
                    WeightKind::Nonsingular,
                    PROBE_CONDITION_CAP,
                    seed.wrapping_add(t),
                )?;
                rank_of(&g.with_weights(weights)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let holds = given_rank == full_rank && trial_ranks.iter().all(|&r| r == full_rank);
        Ok(RankVerdict::Tree {
            full_rank,
            given_rank,
            trial_ranks,
            holds,
        })
    } else {
        let witness = rank_deficient_weighting(g)?;
        let holds = witness.is_deficient();
        Ok(RankVerdict::NonTree {
            full_rank,
            given_rank,
            witness,
            holds,
        })
    }
}
