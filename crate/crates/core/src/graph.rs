//! Attributed graphs, vertex sets and partitions.
//!
//! Vertices are 0-based everywhere in this crate. File formats (in the
//! companion crate) use 1-based ids.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Pairwise costs and objective values are integers.
pub type Cost = i64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self loop on vertex {0}")]
    SelfLoop(usize),
    #[error("feature matrix must have {n} rows of {m} entries")]
    FeatureShape { n: usize, m: usize },
    #[error("feature ({row}, {col}) is not binary")]
    NotBinary { row: usize, col: usize },
    #[error("cost matrix is not a symmetric {0}x{0} matrix with zero diagonal")]
    BadCostMatrix(usize),
    #[error("vertex {0} appears in more than one block")]
    DuplicateVertex(usize),
    #[error("vertex {0} is not covered by any block")]
    MissingVertex(usize),
    #[error("block {index} ({block}) is not connected")]
    DisconnectedBlock { index: usize, block: VertexSet },
}

/// Cost of putting two vertices with the given binary feature rows in the
/// same cluster: `2 * hamming(a, b) - m`.
///
/// Negative when the rows agree on a majority of coordinates. Every value has
/// the parity of `m`.
pub fn feature_cost(a: &[u8], b: &[u8]) -> Cost {
    debug_assert_eq!(a.len(), b.len());
    let hamming = a.iter().zip(b).filter(|(x, y)| x != y).count() as Cost;
    2 * hamming - a.len() as Cost
}

/// A canonical (strictly ascending, duplicate-free) set of vertex indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    /// Builds a set from the bits of a mask (bit `i` = vertex `i`).
    pub fn from_mask(mask: u64) -> Self {
        let mut v = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            v.push(i);
            m &= m - 1;
        }
        VertexSet(v)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v)?;
        }
        f.write_str("}")
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// Vertices with binary features, an undirected relation graph, and the
/// derived symmetric cost matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttributedGraph {
    n: usize,
    m: usize,
    features: Vec<Vec<u8>>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    costs: Vec<Cost>,
}

impl AttributedGraph {
    /// Builds a graph whose costs follow [`feature_cost`].
    pub fn from_features(
        features: Vec<Vec<u8>>,
        edges: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let n = features.len();
        let m = features.first().map_or(0, |r| r.len());
        for (row, r) in features.iter().enumerate() {
            if r.len() != m {
                return Err(GraphError::FeatureShape { n, m });
            }
            if let Some(col) = r.iter().position(|&b| b > 1) {
                return Err(GraphError::NotBinary { row, col });
            }
        }
        let mut costs = vec![0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let c = feature_cost(&features[i], &features[j]);
                costs[i * n + j] = c;
                costs[j * n + i] = c;
            }
        }
        Self::assemble(n, m, features, edges, costs)
    }

    /// Builds a graph from an explicit cost matrix (row-major, `n * n`), with
    /// no feature data. Useful when costs come from elsewhere.
    pub fn from_costs(
        n: usize,
        edges: &[(usize, usize)],
        costs: Vec<Cost>,
    ) -> Result<Self, GraphError> {
        if costs.len() != n * n {
            return Err(GraphError::BadCostMatrix(n));
        }
        for i in 0..n {
            if costs[i * n + i] != 0 {
                return Err(GraphError::BadCostMatrix(n));
            }
            for j in 0..i {
                if costs[i * n + j] != costs[j * n + i] {
                    return Err(GraphError::BadCostMatrix(n));
                }
            }
        }
        Self::assemble(n, 0, vec![Vec::new(); n], edges, costs)
    }

    /// Convenience constructor taking the upper-triangle costs as
    /// `(i, j, c_ij)` triples; unspecified pairs cost zero.
    pub fn from_pair_costs(
        n: usize,
        edges: &[(usize, usize)],
        pair_costs: &[(usize, usize, Cost)],
    ) -> Result<Self, GraphError> {
        let mut costs = vec![0; n * n];
        for &(i, j, c) in pair_costs {
            check_vertex(i, n)?;
            check_vertex(j, n)?;
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            costs[i * n + j] = c;
            costs[j * n + i] = c;
        }
        Self::from_costs(n, edges, costs)
    }

    fn assemble(
        n: usize,
        m: usize,
        features: Vec<Vec<u8>>,
        edges: &[(usize, usize)],
        costs: Vec<Cost>,
    ) -> Result<Self, GraphError> {
        let mut canon = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            check_vertex(a, n)?;
            check_vertex(b, n)?;
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        canon.dedup();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &canon {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(AttributedGraph {
            n,
            m,
            features,
            edges: canon,
            adjacency,
            costs,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of features per vertex (0 for graphs built from costs).
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn features(&self) -> &[Vec<u8>] {
        &self.features
    }

    /// Canonical edge list: `(i, j)` with `i < j`, sorted, no duplicates.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> Cost {
        self.costs[i * self.n + j]
    }

    /// Sum of `|c_ij|` over unordered pairs.
    pub fn total_abs_cost(&self) -> Cost {
        let mut s = 0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                s += self.cost(i, j).abs();
            }
        }
        s
    }

    /// Adjacency bitmasks, one per vertex. Only valid for `n <= 64`.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.n > 64 {
            return None;
        }
        Some(
            self.adjacency
                .iter()
                .map(|list| list.iter().fold(0u64, |m, &v| m | (1u64 << v)))
                .collect(),
        )
    }

    /// Connectivity of the subgraph induced by `members`, without validation.
    /// The empty set counts as connected.
    pub(crate) fn connected_unchecked(&self, members: &[usize]) -> bool {
        if members.len() <= 1 {
            return true;
        }
        let mut inside = vec![false; self.n];
        for &v in members {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        seen[members[0]] = true;
        queue.push_back(members[0]);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == members.len()
    }

    /// Connected components of the subgraph induced by `members`, each
    /// sorted, listed by smallest member.
    pub fn induced_components(&self, members: &[usize]) -> Vec<Vec<usize>> {
        let mut inside = vec![false; self.n];
        for &v in members {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut sorted: Vec<usize> = members.to_vec();
        sorted.sort_unstable();
        let mut out = Vec::new();
        for &start in &sorted {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &w in &self.adjacency[u] {
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Sum of `c_ij` over the pairs of `s`. Panics on out-of-range members.
    pub fn cost_of(&self, s: &VertexSet) -> Cost {
        self.cost_unchecked(s.members())
    }

    /// Whether `s` induces a connected subgraph (the empty set counts as
    /// connected). Panics on out-of-range members.
    pub fn is_connected_set(&self, s: &VertexSet) -> bool {
        self.connected_unchecked(s.members())
    }

    pub(crate) fn cost_unchecked(&self, members: &[usize]) -> Cost {
        let mut total = 0;
        for (k, &i) in members.iter().enumerate() {
            let row = &self.costs[i * self.n..(i + 1) * self.n];
            for &j in &members[k + 1..] {
                total += row[j];
            }
        }
        total
    }
}

fn check_vertex(v: usize, n: usize) -> Result<(), GraphError> {
    if v >= n {
        Err(GraphError::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}

fn check_set(graph: &AttributedGraph, s: &VertexSet) -> Result<(), GraphError> {
    if s.is_empty() {
        return Err(GraphError::EmptySet);
    }
    for v in s.iter() {
        check_vertex(v, graph.n())?;
    }
    Ok(())
}

/// Whether the subgraph induced by `s` is connected. Singletons are.
pub fn induced_connected(graph: &AttributedGraph, s: &VertexSet) -> Result<bool, GraphError> {
    check_set(graph, s)?;
    Ok(graph.connected_unchecked(s.members()))
}

/// Sum of `c_ij` over the unordered pairs inside `s`.
pub fn cluster_cost(graph: &AttributedGraph, s: &VertexSet) -> Result<Cost, GraphError> {
    check_set(graph, s)?;
    Ok(graph.cost_unchecked(s.members()))
}

/// A partition of all vertices into connected blocks, with its objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<VertexSet>,
    objective: Cost,
}

impl Partition {
    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn objective(&self) -> Cost {
        self.objective
    }

    pub fn into_blocks(self) -> Vec<VertexSet> {
        self.blocks
    }

    /// The all-singletons partition (objective 0).
    pub fn singletons(n: usize) -> Self {
        Partition {
            blocks: (0..n).map(VertexSet::singleton).collect(),
            objective: 0,
        }
    }

    /// Cluster label of each vertex, numbered by block order.
    pub fn labels(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (k, b) in self.blocks.iter().enumerate() {
            for v in b.iter() {
                out[v] = k;
            }
        }
        out
    }

    /// Blocks sorted by smallest member. Two partitions with the same blocks
    /// compare equal after normalization.
    pub fn normalized(mut self) -> Self {
        self.blocks.sort();
        self
    }
}

/// Checks that `blocks` exactly cover the vertices with connected blocks and
/// returns the evaluated partition.
pub fn evaluate_partition(
    graph: &AttributedGraph,
    blocks: Vec<VertexSet>,
) -> Result<Partition, GraphError> {
    let n = graph.n();
    let mut owner = vec![false; n];
    for b in &blocks {
        check_set(graph, b)?;
        for v in b.iter() {
            if owner[v] {
                return Err(GraphError::DuplicateVertex(v));
            }
            owner[v] = true;
        }
    }
    if let Some(v) = owner.iter().position(|&o| !o) {
        return Err(GraphError::MissingVertex(v));
    }
    let mut objective = 0;
    for (index, b) in blocks.iter().enumerate() {
        if !graph.connected_unchecked(b.members()) {
            return Err(GraphError::DisconnectedBlock {
                index,
                block: b.clone(),
            });
        }
        objective += graph.cost_unchecked(b.members());
    }
    Ok(Partition { blocks, objective })
}
