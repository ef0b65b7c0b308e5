//! Seeded random instances and brute-force oracles.
//!
//! All randomness comes from `ChaCha8Rng` (rand_chacha) seeded through
//! `SeedableRng::seed_from_u64`, which is portable across platforms, so a
//! `(config, seed)` pair always yields the same instance.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MatrixWeightedGraph};
use crate::linalg::{determinant, singular_values, BlockMatrix, DenseMatrix};

/// Largest vertex count accepted by [`spanning_tree_oracle`].
pub const ENUMERATION_LIMIT: usize = 9;

const MAX_REJECTIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// Symmetric positive definite with bounded condition number.
    Spd,
    /// Uniform(−1, 1) entries, redrawn while `|det| < 0.05` or the
    /// condition number exceeds the cap.
    Nonsingular,
    /// `w · I` with `w > 0` log-uniform in `[1/√cap, √cap]`.
    ScalarPositive,
    /// Like `ScalarPositive` with a random sign.
    ScalarAnyNonzero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n: RangeInclusive<usize>,
    pub s: RangeInclusive<usize>,
    pub kind: WeightKind,
    pub condition_cap: f64,
    pub seed: u64,
}

impl GenConfig {
    /// Fixed `n` and `s`, condition cap 100.
    pub fn new(n: usize, s: usize, kind: WeightKind, seed: u64) -> Self {
        Self {
            n: n..=n,
            s: s..=s,
            kind,
            condition_cap: 100.0,
            seed,
        }
    }

    pub fn with_ranges(n: RangeInclusive<usize>, s: RangeInclusive<usize>, kind: WeightKind) -> Self {
        Self {
            n,
            s,
            kind,
            condition_cap: 100.0,
            seed: 0,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn with_condition_cap(&self, cap: f64) -> Self {
        Self {
            condition_cap: cap,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() || *self.n.start() < 2 {
            return Err(Error::BadConfig(format!("n range {:?} must lie in n >= 2", self.n)));
        }
        if self.s.is_empty() || *self.s.start() < 1 {
            return Err(Error::BadConfig(format!("s range {:?} must lie in s >= 1", self.s)));
        }
        if !(self.condition_cap > 1.0) || !self.condition_cap.is_finite() {
            return Err(Error::BadConfig(format!(
                "condition cap {} must be a finite number > 1",
                self.condition_cap
            )));
        }
        Ok(())
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Uniform random labelled tree (Prüfer decoding) with weights drawn per
/// `cfg.kind`.
pub fn random_tree(cfg: &GenConfig) -> Result<MatrixWeightedGraph> {
    cfg.validate()?;
    let mut rng = cfg.rng();
    let n = rng.random_range(cfg.n.clone());
    let s = rng.random_range(cfg.s.clone());
    let mut g = MatrixWeightedGraph::new(n, s);
    for (u, v) in prufer_tree(n, &mut rng) {
        let w = draw_weight(cfg.kind, s, cfg.condition_cap, &mut rng)?;
        g.add_edge(u, v, w);
    }
    Ok(g)
}

/// A random tree plus at least one extra edge, so connected and cyclic.
pub fn random_connected_nontree(cfg: &GenConfig) -> Result<MatrixWeightedGraph> {
    cfg.validate()?;
    if *cfg.n.start() < 3 {
        return Err(Error::BadConfig(
            "a connected non-tree needs at least 3 vertices".into(),
        ));
    }
    let mut rng = cfg.rng();
    let n = rng.random_range(cfg.n.clone());
    let s = rng.random_range(cfg.s.clone());
    let tree = prufer_tree(n, &mut rng);
    let mut present = vec![vec![false; n + 1]; n + 1];
    for &(u, v) in &tree {
        present[u][v] = true;
        present[v][u] = true;
    }
    let mut absent: Vec<(usize, usize)> = (1..=n)
        .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
        .filter(|&(u, v)| !present[u][v])
        .collect();
    absent.shuffle(&mut rng);
    let extra = rng.random_range(1..=absent.len().min(n));
    let mut g = MatrixWeightedGraph::new(n, s);
    for (u, v) in tree.into_iter().chain(absent.into_iter().take(extra)) {
        let w = draw_weight(cfg.kind, s, cfg.condition_cap, &mut rng)?;
        g.add_edge(u, v, w);
    }
    Ok(g)
}

/// Edges (1-based) of the tree encoded by a uniformly drawn Prüfer sequence.
fn prufer_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if n == 2 {
        return vec![(1, 2)];
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(1..=n)).collect();
    prufer_decode(n, &seq)
}

pub(crate) fn prufer_decode(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n + 1];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (1..=n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (1..=n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn draw_weight(kind: WeightKind, s: usize, cap: f64, rng: &mut ChaCha8Rng) -> Result<DenseMatrix> {
    match kind {
        WeightKind::Spd => Ok(spd_from_rng(s, cap, rng)),
        WeightKind::Nonsingular => nonsingular_from_rng(s, cap, rng),
        WeightKind::ScalarPositive => Ok(DenseMatrix::identity(s).scale(log_uniform(cap, rng))),
        WeightKind::ScalarAnyNonzero => {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            Ok(DenseMatrix::identity(s).scale(sign * log_uniform(cap, rng)))
        }
    }
}

/// Log-uniform draw in `[1/√cap, √cap]`.
fn log_uniform(cap: f64, rng: &mut ChaCha8Rng) -> f64 {
    let half = 0.5 * cap.ln();
    rng.random_range(-half..=half).exp()
}

/// `V Λ Vᵀ` with `V` Haar-orthogonal (QR of a Gaussian matrix with the
/// sign of `R`'s diagonal folded in) and `Λ` log-uniform in
/// `[1/√cap, √cap]`.
fn spd_from_rng(s: usize, cap: f64, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let gauss = DenseMatrix::new(
        s,
        s,
        (0..s * s).map(|_| rng.sample::<f64, _>(StandardNormal)).collect(),
    )
    .expect("finite gaussian draws");
    let v = orthogonal_factor(&gauss);
    let lambda: Vec<f64> = (0..s).map(|_| log_uniform(cap, rng)).collect();
    let w = &(&v * &DenseMatrix::from_diagonal(&lambda)) * &v.transpose();
    (&w + &w.transpose()).scale(0.5)
}

/// Q factor of modified Gram–Schmidt with columns sign-normalised so that
/// R has a positive diagonal.
fn orthogonal_factor(a: &DenseMatrix) -> DenseMatrix {
    let n = a.rows();
    let mut q = a.clone();
    for k in 0..n {
        for j in 0..k {
            let dot: f64 = (0..n).map(|i| q.get(i, j) * q.get(i, k)).sum();
            for i in 0..n {
                q.set(i, k, q.get(i, k) - dot * q.get(i, j));
            }
        }
        let norm = (0..n).map(|i| q.get(i, k).powi(2)).sum::<f64>().sqrt();
        for i in 0..n {
            q.set(i, k, q.get(i, k) / norm);
        }
    }
    q
}

fn nonsingular_from_rng(s: usize, cap: f64, rng: &mut ChaCha8Rng) -> Result<DenseMatrix> {
    for _ in 0..MAX_REJECTIONS {
        let w = DenseMatrix::new(s, s, (0..s * s).map(|_| rng.random_range(-1.0..1.0)).collect())
            .expect("finite draws");
        if determinant(&w)?.abs() < 0.05 {
            continue;
        }
        let sv = singular_values(&w);
        if sv[0] / sv[s - 1] <= cap {
            return Ok(w);
        }
    }
    Err(Error::BadConfig(format!(
        "no {s}x{s} nonsingular draw met condition cap {cap} after {MAX_REJECTIONS} attempts"
    )))
}

/// Random SPD matrix whose condition number is at most `condition_cap`.
pub fn random_spd(s: usize, condition_cap: f64, seed: u64) -> Result<DenseMatrix> {
    if !(condition_cap > 1.0) {
        return Err(Error::BadConfig(format!("condition cap {condition_cap} must exceed 1")));
    }
    Ok(spd_from_rng(s, condition_cap, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Random nonsingular matrix (`|det| ≥ 0.05`, condition ≤ cap).
pub fn random_nonsingular(s: usize, condition_cap: f64, seed: u64) -> Result<DenseMatrix> {
    if !(condition_cap > 1.0) {
        return Err(Error::BadConfig(format!("condition cap {condition_cap} must exceed 1")));
    }
    nonsingular_from_rng(s, condition_cap, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random weights for every edge of `g`, same shape, drawn per `kind`.
pub fn random_weights(
    g: &MatrixWeightedGraph,
    kind: WeightKind,
    condition_cap: f64,
    seed: u64,
) -> Result<Vec<DenseMatrix>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..g.edge_count())
        .map(|_| draw_weight(kind, g.s(), condition_cap, &mut rng))
        .collect()
}

/// Counts spanning trees of `g` that contain `marked` (`a`) and that do not
/// (`b`), by filtering every `(n-1)`-edge subset. Weights are ignored.
pub fn spanning_tree_oracle(g: &MatrixWeightedGraph, marked: EdgeId) -> Result<(u64, u64)> {
    g.check_structure()?;
    g.edge(marked)?;
    let n = g.n();
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u - 1, e.v - 1)).collect();
    let mut counts = (0u64, 0u64);
    let mut chosen = Vec::with_capacity(n - 1);
    enumerate_forests(&ends, n, 0, &mut chosen, &mut |subset| {
        if subset.contains(&marked.index()) {
            counts.0 += 1;
        } else {
            counts.1 += 1;
        }
    });
    Ok(counts)
}

fn enumerate_forests(
    ends: &[(usize, usize)],
    n: usize,
    next: usize,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if chosen.len() == n - 1 {
        visit(chosen);
        return;
    }
    if ends.len() - next < n - 1 - chosen.len() {
        return;
    }
    chosen.push(next);
    if is_forest(ends, n, chosen) {
        enumerate_forests(ends, n, next + 1, chosen, visit);
    }
    chosen.pop();
    enumerate_forests(ends, n, next + 1, chosen, visit);
}

fn is_forest(ends: &[(usize, usize)], n: usize, subset: &[usize]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &e in subset {
        let (a, b) = (find(&mut parent, ends[e].0), find(&mut parent, ends[e].1));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Distance matrix built pair by pair from independent path queries, each
/// path summed in ascending edge order.
pub fn distance_oracle(g: &MatrixWeightedGraph) -> Result<BlockMatrix> {
    g.check_structure()?;
    if !g.is_tree()? {
        return Err(Error::NotATree);
    }
    let mut d = BlockMatrix::zeros(g.n(), g.n(), g.s());
    for i in 1..=g.n() {
        for j in 1..=g.n() {
            if i == j {
                continue;
            }
            let mut path = g.tree_path(i, j)?.edges;
            path.sort();
            let mut sum = DenseMatrix::zeros(g.s(), g.s());
            for e in path {
                sum = &sum + &g.edges()[e.index()].weight;
            }
            d.set_block(i - 1, j - 1, &sum);
        }
    }
    Ok(d)
}
