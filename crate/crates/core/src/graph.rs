//! Matrix-weighted graphs.
//!
//! Vertices are numbered `1..=n` in every public signature. Edges are stored
//! in insertion order and addressed by [`EdgeId`], their 0-based position in
//! that list. A stored edge `(u, v)` always has `u < v`; it "originates" at
//! `u`, which fixes the sign convention of the incidence matrix.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Position of an edge in [`MatrixWeightedGraph::edges`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: DenseMatrix,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: DenseMatrix) -> Self {
        Self { u, v, weight }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    /// The endpoint that is not `x`, if `x` is an endpoint.
    pub fn other(&self, x: usize) -> Option<usize> {
        if x == self.u {
            Some(self.v)
        } else if x == self.v {
            Some(self.u)
        } else {
            None
        }
    }
}

/// A problem found by [`MatrixWeightedGraph::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoVertices,
    ZeroBlockSize,
    VertexOutOfRange { edge: EdgeId, vertex: usize },
    SelfLoop { edge: EdgeId },
    NonCanonicalOrientation { edge: EdgeId },
    DuplicateEdge { edge: EdgeId, first: EdgeId },
    BadWeightShape { edge: EdgeId, rows: usize, cols: usize },
    NotConnected,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::ZeroBlockSize => write!(f, "block size must be at least 1"),
            Violation::VertexOutOfRange { edge, vertex } => {
                write!(f, "edge {edge} references vertex {vertex} out of range")
            }
            Violation::SelfLoop { edge } => write!(f, "edge {edge} is a self-loop"),
            Violation::NonCanonicalOrientation { edge } => {
                write!(f, "edge {edge} is stored with u > v")
            }
            Violation::DuplicateEdge { edge, first } => {
                write!(f, "edge {edge} duplicates edge {first}")
            }
            Violation::BadWeightShape { edge, rows, cols } => {
                write!(f, "edge {edge} has a {rows}x{cols} weight")
            }
            Violation::NotConnected => write!(f, "graph is not connected"),
        }
    }
}

/// Entry `i` is `2 - degree(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DeltaVector(Vec<i64>);

impl DeltaVector {
    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&x| x as f64).collect()
    }
}

/// Edges of the unique tree path between two vertices, in walking order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreePath {
    pub from: usize,
    pub to: usize,
    pub edges: Vec<EdgeId>,
}

impl TreePath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixWeightedGraph {
    n: usize,
    s: usize,
    edges: Vec<Edge>,
}

impl MatrixWeightedGraph {
    /// Graph on `n` vertices with `s x s` weights and no edges.
    pub fn new(n: usize, s: usize) -> Self {
        Self {
            n,
            s,
            edges: Vec::new(),
        }
    }

    /// Stores `edges` verbatim. Nothing is checked here; call
    /// [`validate`](Self::validate) to inspect the result. Every computation
    /// in this crate re-checks structure and fails with `Malformed`.
    pub fn from_edges(n: usize, s: usize, edges: Vec<Edge>) -> Self {
        Self { n, s, edges }
    }

    /// Like [`from_edges`](Self::from_edges) but rejects structural
    /// violations. Disconnected graphs are accepted.
    pub fn try_from_edges(n: usize, s: usize, edges: Vec<Edge>) -> Result<Self> {
        let g = Self::from_edges(n, s, edges);
        g.check_structure()?;
        Ok(g)
    }

    /// Appends an edge, swapping the endpoints if needed so that `u < v`.
    pub fn add_edge(&mut self, u: usize, v: usize, weight: DenseMatrix) -> EdgeId {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        self.edges.push(Edge { u, v, weight });
        EdgeId(self.edges.len() - 1)
    }

    /// Builder form of [`add_edge`](Self::add_edge).
    pub fn with_edge(mut self, u: usize, v: usize, weight: DenseMatrix) -> Self {
        self.add_edge(u, v, weight);
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Block size of the edge weights.
    #[inline]
    pub fn s(&self) -> usize {
        self.s
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(id.0).ok_or(Error::EdgeOutOfRange(id))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<EdgeId> {
        let key = if u <= v { (u, v) } else { (v, u) };
        self.edges
            .iter()
            .position(|e| e.endpoints() == key)
            .map(EdgeId)
    }

    /// Same topology with the weights replaced, in edge order.
    pub fn with_weights(&self, weights: Vec<DenseMatrix>) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::Shape {
                expected: (self.edges.len(), 1),
                found: (weights.len(), 1),
            });
        }
        let s = weights.first().map_or(self.s, |w| w.rows());
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, w)| Edge::new(e.u, e.v, w))
            .collect();
        Self::try_from_edges(self.n, s, edges)
    }

    /// Every type-level invariant violation plus connectivity. Empty means
    /// the graph is well formed and connected.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.structural_violations();
        if out.is_empty() && !self.is_connected_unchecked() {
            out.push(Violation::NotConnected);
        }
        out
    }

    fn structural_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n == 0 {
            out.push(Violation::NoVertices);
        }
        if self.s == 0 {
            out.push(Violation::ZeroBlockSize);
        }
        let mut seen: HashMap<(usize, usize), EdgeId> = HashMap::new();
        for (idx, e) in self.edges.iter().enumerate() {
            let id = EdgeId(idx);
            let mut endpoints_ok = true;
            for x in [e.u, e.v] {
                if x == 0 || x > self.n {
                    out.push(Violation::VertexOutOfRange { edge: id, vertex: x });
                    endpoints_ok = false;
                }
            }
            if e.u == e.v {
                out.push(Violation::SelfLoop { edge: id });
                endpoints_ok = false;
            } else if e.u > e.v {
                out.push(Violation::NonCanonicalOrientation { edge: id });
            }
            if endpoints_ok {
                let key = (e.u.min(e.v), e.u.max(e.v));
                if let Some(&first) = seen.get(&key) {
                    out.push(Violation::DuplicateEdge { edge: id, first });
                } else {
                    seen.insert(key, id);
                }
            }
            if e.weight.shape() != (self.s, self.s) {
                out.push(Violation::BadWeightShape {
                    edge: id,
                    rows: e.weight.rows(),
                    cols: e.weight.cols(),
                });
            }
        }
        out
    }

    /// Fails with `Malformed` on any structural violation (connectivity is
    /// not checked).
    pub fn check_structure(&self) -> Result<()> {
        let v = self.structural_violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Malformed(v))
        }
    }

    /// Adjacency lists indexed by 0-based vertex; entries are
    /// `(0-based neighbour, edge)`.
    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (idx, e) in self.edges.iter().enumerate() {
            adj[e.u - 1].push((e.v - 1, EdgeId(idx)));
            adj[e.v - 1].push((e.u - 1, EdgeId(idx)));
        }
        adj
    }

    fn is_connected_unchecked(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.n
    }

    pub fn is_connected(&self) -> Result<bool> {
        self.check_structure()?;
        Ok(self.is_connected_unchecked())
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected()? {
            Ok(())
        } else {
            Err(Error::NotConnected)
        }
    }

    /// A connected graph is a tree iff it has `n - 1` edges.
    pub fn is_tree(&self) -> Result<bool> {
        self.require_connected()?;
        Ok(self.edges.len() + 1 == self.n)
    }

    pub(crate) fn require_tree(&self) -> Result<()> {
        match self.is_tree() {
            Ok(true) => Ok(()),
            Ok(false) | Err(Error::NotConnected) => Err(Error::NotATree),
            Err(e) => Err(e),
        }
    }

    fn check_vertex(&self, x: usize) -> Result<()> {
        if x == 0 || x > self.n {
            Err(Error::VertexOutOfRange {
                vertex: x,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn degree(&self, x: usize) -> usize {
        self.edges.iter().filter(|e| e.u == x || e.v == x).count()
    }

    /// The unique path from `u` to `v`, by breadth-first search from `u`
    /// with parent pointers.
    pub fn tree_path(&self, u: usize, v: usize) -> Result<TreePath> {
        self.require_tree()?;
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SameVertex(u));
        }
        let adj = self.adjacency();
        let mut parent: Vec<Option<(usize, EdgeId)>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let (start, goal) = (u - 1, v - 1);
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            if x == goal {
                break;
            }
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        let mut edges = Vec::new();
        let mut cur = goal;
        while let Some((p, e)) = parent[cur] {
            edges.push(e);
            cur = p;
        }
        edges.reverse();
        Ok(TreePath {
            from: u,
            to: v,
            edges,
        })
    }

    pub fn delta_vector(&self) -> DeltaVector {
        let mut deg = vec![0i64; self.n];
        for e in &self.edges {
            if let Some(d) = deg.get_mut(e.u.wrapping_sub(1)) {
                *d += 1;
            }
            if let Some(d) = deg.get_mut(e.v.wrapping_sub(1)) {
                *d += 1;
            }
        }
        DeltaVector(deg.into_iter().map(|d| 2 - d).collect())
    }

    /// Sum of all edge weights, in edge order.
    pub fn weight_sum(&self) -> Result<DenseMatrix> {
        self.check_structure()?;
        let mut acc = DenseMatrix::zeros(self.s, self.s);
        for e in &self.edges {
            acc = &acc + &e.weight;
        }
        Ok(acc)
    }

    /// Edges whose removal disconnects the graph (Tarjan low-link).
    pub fn bridges(&self) -> Result<Vec<EdgeId>> {
        self.check_structure()?;
        let adj = self.adjacency();
        let mut disc = vec![usize::MAX; self.n];
        let mut low = vec![0usize; self.n];
        let mut timer = 0;
        let mut out = Vec::new();
        for root in 0..self.n {
            if disc[root] != usize::MAX {
                continue;
            }
            // iterative DFS: (vertex, edge used to enter it, next adjacency slot)
            let mut stack: Vec<(usize, Option<EdgeId>, usize)> = vec![(root, None, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (x, via, ref mut slot)) = stack.last_mut() {
                if let Some(&(y, e)) = adj[x].get(*slot) {
                    *slot += 1;
                    if Some(e) == via {
                        continue;
                    }
                    if disc[y] == usize::MAX {
                        disc[y] = timer;
                        low[y] = timer;
                        timer += 1;
                        stack.push((y, Some(e), 0));
                    } else {
                        low[x] = low[x].min(disc[y]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[x]);
                        if low[x] > disc[p] {
                            out.push(via.expect("non-root has an entry edge"));
                        }
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Fails with `WeightNotSpd` naming the first edge whose weight is not
    /// symmetric positive definite.
    pub fn require_spd_weights(&self) -> Result<()> {
        self.check_structure()?;
        for (idx, e) in self.edges.iter().enumerate() {
            if crate::linalg::spd_inverse_sqrt(&e.weight).is_err() {
                return Err(Error::WeightNotSpd(EdgeId(idx)));
            }
        }
        Ok(())
    }

    pub fn has_spd_weights(&self) -> bool {
        self.require_spd_weights().is_ok()
    }
}
