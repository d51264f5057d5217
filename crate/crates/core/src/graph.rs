//! Finite connected multigraphs, divisors on them, twists and the Laplacian.
//!
//! Vertices are addressed by their position in declaration order; the string
//! identifiers are kept for file I/O and reporting. Loops are allowed: they
//! count twice toward the valence used by the canonical divisor, once toward
//! the edge count used by the genus, and never contribute to the Laplacian.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    /// Edge multiset as given, endpoints stored with `a <= b`.
    edges: Vec<(usize, usize)>,
    /// `adjacency[v][w]` = number of non-loop edges between `v` and `w`.
    adjacency: Vec<Vec<u32>>,
    loops: Vec<u32>,
}

impl Multigraph {
    /// Builds a multigraph from vertex identifiers and an edge list of
    /// identifier pairs. Repeated pairs are parallel edges; `(v, v)` is a loop.
    pub fn new<S: AsRef<str>>(ids: &[S], edges: &[(S, S)]) -> Result<Self> {
        let ids: Vec<String> = ids.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        let mut resolved = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let lookup =
                |s: &S| index.get(s.as_ref()).copied().ok_or_else(|| Error::UnknownVertex(s.as_ref().to_owned()));
            resolved.push((lookup(a)?, lookup(b)?));
        }
        Self::build(ids, index, &resolved)
    }

    /// Builds a multigraph on vertices named `v0, v1, ...` from index pairs.
    pub fn from_indices(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let ids: Vec<String> = (0..vertex_count).map(|i| format!("v{i}")).collect();
        let index = ids.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        for &(a, b) in edges {
            for x in [a, b] {
                if x >= vertex_count {
                    return Err(Error::UnknownVertex(format!("v{x}")));
                }
            }
        }
        Self::build(ids, index, edges)
    }

    fn build(ids: Vec<String>, index: HashMap<String, usize>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adjacency = vec![vec![0u32; n]; n];
        let mut loops = vec![0u32; n];
        let mut stored = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            if a == b {
                loops[a] += 1;
            } else {
                adjacency[a][b] += 1;
                adjacency[b][a] += 1;
            }
            stored.push((a, b));
        }
        let graph = Multigraph { ids, index, edges: stored, adjacency, loops };
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(graph)
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    /// Number of edges, loops and parallel edges included.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_owned()))
    }

    /// Number of non-loop edges joining `v` and `w`.
    pub fn multiplicity(&self, v: usize, w: usize) -> u32 {
        self.adjacency[v][w]
    }

    pub fn loop_count(&self, v: usize) -> u32 {
        self.loops[v]
    }

    /// Distinct neighbours of `v` through non-loop edges.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().enumerate().filter(|(_, &m)| m > 0).map(|(w, _)| w)
    }

    /// Number of non-loop edge ends at `v`; this is the diagonal of the Laplacian.
    pub fn outdegree(&self, v: usize) -> u32 {
        self.adjacency[v].iter().sum()
    }

    /// Valence with each loop counted twice.
    pub fn valence(&self, v: usize) -> u32 {
        self.outdegree(v) + 2 * self.loops[v]
    }

    /// The same graph with every loop removed.
    pub fn without_loops(&self) -> Multigraph {
        let edges: Vec<(usize, usize)> = self.edges.iter().copied().filter(|(a, b)| a != b).collect();
        Self::build(self.ids.clone(), self.index.clone(), &edges).expect("removing loops preserves connectivity")
    }

    /// The same graph with one extra loop at `v`.
    pub fn with_loop(&self, v: usize) -> Multigraph {
        let mut edges = self.edges.clone();
        edges.push((v, v));
        Self::build(self.ids.clone(), self.index.clone(), &edges).expect("adding a loop preserves connectivity")
    }

    /// Breadth-first distances (in edges) from `source`.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn zero_divisor(&self) -> GraphDivisor {
        GraphDivisor::zero(self.vertex_count())
    }

    /// Resolves an `id -> coefficient` map; absent vertices get 0.
    pub fn divisor_from_map(&self, map: &BTreeMap<String, i64>) -> Result<GraphDivisor> {
        let mut d = self.zero_divisor();
        for (id, &c) in map {
            d[self.vertex_index(id)?] = c;
        }
        Ok(d)
    }

    pub fn divisor_to_map(&self, d: &GraphDivisor) -> BTreeMap<String, i64> {
        self.ids.iter().cloned().zip(d.coefficients().iter().copied()).collect()
    }

    pub fn twist_from_map(&self, map: &BTreeMap<String, i64>) -> Result<Twist> {
        let mut values = vec![0i64; self.vertex_count()];
        for (id, &c) in map {
            values[self.vertex_index(id)?] = c;
        }
        Ok(Twist::new(values))
    }

    pub(crate) fn check_divisor(&self, d: &GraphDivisor) -> Result<()> {
        check_len(self.vertex_count(), d.len())
    }

    /// Formats a divisor as `a·v + b·w`, skipping zero coefficients.
    pub fn display_divisor(&self, d: &GraphDivisor) -> String {
        let terms: Vec<String> = d
            .coefficients()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(v, &c)| format!("{c}·{}", self.ids[v]))
            .collect();
        if terms.is_empty() {
            "0".to_owned()
        } else {
            terms.join(" + ")
        }
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// An integer combination of vertices, stored densely in vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphDivisor(Vec<i64>);

impl GraphDivisor {
    pub fn zero(n: usize) -> Self {
        GraphDivisor(vec![0; n])
    }

    pub fn from_coefficients(coefficients: Vec<i64>) -> Self {
        GraphDivisor(coefficients)
    }

    /// The divisor `1·v`.
    pub fn point(n: usize, v: usize) -> Self {
        let mut d = Self::zero(n);
        d.0[v] = 1;
        d
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coefficients(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        GraphDivisor(self.0.iter().map(|&c| c * k).collect())
    }
}

impl std::ops::Index<usize> for GraphDivisor {
    type Output = i64;
    fn index(&self, v: usize) -> &i64 {
        &self.0[v]
    }
}

impl std::ops::IndexMut<usize> for GraphDivisor {
    fn index_mut(&mut self, v: usize) -> &mut i64 {
        &mut self.0[v]
    }
}

impl AddAssign<&GraphDivisor> for GraphDivisor {
    fn add_assign(&mut self, rhs: &GraphDivisor) {
        assert_eq!(self.len(), rhs.len(), "divisors live on different graphs");
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl SubAssign<&GraphDivisor> for GraphDivisor {
    fn sub_assign(&mut self, rhs: &GraphDivisor) {
        assert_eq!(self.len(), rhs.len(), "divisors live on different graphs");
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a -= b;
        }
    }
}

impl Add<&GraphDivisor> for &GraphDivisor {
    type Output = GraphDivisor;
    fn add(self, rhs: &GraphDivisor) -> GraphDivisor {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&GraphDivisor> for &GraphDivisor {
    type Output = GraphDivisor;
    fn sub(self, rhs: &GraphDivisor) -> GraphDivisor {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &GraphDivisor {
    type Output = GraphDivisor;
    fn neg(self) -> GraphDivisor {
        GraphDivisor(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for GraphDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for GraphDivisor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// An integer function on vertices modulo constants, normalized so that its
/// maximum is 0. Ordering is lexicographic on the normalized values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Twist(Vec<i64>);

impl Twist {
    pub fn new(mut values: Vec<i64>) -> Self {
        if let Some(&max) = values.iter().max() {
            for x in &mut values {
                *x -= max;
            }
        }
        Twist(values)
    }

    pub fn zero(n: usize) -> Self {
        Twist(vec![0; n])
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        GraphDivisor(self.0.clone()).fmt(f)
    }
}

impl Serialize for Twist {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// `Δφ(v) = Σ_{e = wv} (φ(w) − φ(v))`; loops contribute nothing.
pub fn laplacian(graph: &Multigraph, phi: &Twist) -> Result<GraphDivisor> {
    check_len(graph.vertex_count(), phi.len())?;
    Ok(laplacian_of_values(graph, phi.values()))
}

/// Laplacian of an unnormalized integer function on the vertices.
pub(crate) fn laplacian_of_values(graph: &Multigraph, phi: &[i64]) -> GraphDivisor {
    let n = graph.vertex_count();
    let mut out = vec![0i64; n];
    for (v, slot) in out.iter_mut().enumerate() {
        let row = &graph.adjacency[v];
        *slot = (0..n).map(|w| i64::from(row[w]) * (phi[w] - phi[v])).sum();
    }
    GraphDivisor(out)
}

/// `K_Γ = Σ_v (val(v) − 2)·v`, loops counting twice toward the valence.
pub fn canonical_graph_divisor(graph: &Multigraph) -> GraphDivisor {
    GraphDivisor((0..graph.vertex_count()).map(|v| i64::from(graph.valence(v)) - 2).collect())
}

/// First Betti number `|E| − |V| + 1`.
pub fn graph_genus(graph: &Multigraph) -> u64 {
    (graph.edge_count() + 1 - graph.vertex_count()) as u64
}

/// Recomputes `Δφ` vertex by vertex from the raw edge multiset, summing
/// `φ(w) − φ(v₀)` over the edges at each `v₀`, and compares it with
/// [`laplacian`]. Also checks that the result has degree zero.
pub fn multidegree_identity_check(graph: &Multigraph, phi: &Twist) -> bool {
    let Ok(lap) = laplacian(graph, phi) else {
        return false;
    };
    let values = phi.values();
    let mut restricted = vec![0i64; graph.vertex_count()];
    for &(a, b) in graph.edges() {
        if a == b {
            continue;
        }
        restricted[a] += values[b] - values[a];
        restricted[b] += values[a] - values[b];
    }
    lap.degree() == 0 && lap.coefficients() == restricted.as_slice()
}
