//! Instance families: exhaustive small multigraphs and seeded random
//! augmented curves with divisors.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::augmented::AugmentedCurve;
use crate::error::Result;
use crate::graph::{GraphDivisor, Multigraph};
use crate::rank::graph_rr_defect;

/// Every connected multigraph with `1..=max_vertices` vertices and at most
/// `max_edges` edges, one per isomorphism class.
pub fn connected_multigraphs(max_vertices: usize, max_edges: usize, allow_loops: bool) -> Vec<Multigraph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).filter(|&(a, b)| allow_loops || a != b).collect();
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        let mut edges = Vec::new();
        multisets(&pairs, 0, max_edges, &mut edges, &mut |edges| {
            let key = canonical_form(edges, &perms);
            if seen.contains(&key) {
                return;
            }
            if let Ok(graph) = Multigraph::from_indices(n, edges) {
                seen.insert(key);
                out.push(graph);
            }
        });
    }
    out
}

fn multisets(
    pairs: &[(usize, usize)],
    start: usize,
    remaining: usize,
    current: &mut Vec<(usize, usize)>,
    visit: &mut impl FnMut(&[(usize, usize)]),
) {
    visit(current);
    if remaining == 0 {
        return;
    }
    for i in start..pairs.len() {
        current.push(pairs[i]);
        multisets(pairs, i, remaining - 1, current, visit);
        current.pop();
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                extend(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Lexicographically least sorted edge list over all vertex relabelings.
fn canonical_form(edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    perms
        .iter()
        .map(|perm| {
            let mut relabeled: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (perm[a], perm[b]);
                    (x.min(y), x.max(y))
                })
                .collect();
            relabeled.sort_unstable();
            relabeled
        })
        .min()
        .unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub max_vertices: usize,
    /// Edges beyond a spanning tree, loops included.
    pub max_extra_edges: usize,
    pub max_vertex_genus: u64,
    pub max_coefficient: i64,
    pub max_abs_degree: i64,
    pub allow_loops: bool,
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams {
            max_vertices: 4,
            max_extra_edges: 3,
            max_vertex_genus: 2,
            max_coefficient: 3,
            max_abs_degree: 5,
            allow_loops: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub curve: AugmentedCurve,
    pub divisor: GraphDivisor,
}

/// `count` reproducible instances from `seed`. Every third instance
/// (starting with the first) is totally degenerate.
pub fn random_instances(seed: u64, count: usize, params: &FamilyParams) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let graph = random_multigraph(&mut rng, params);
            let n = graph.vertex_count();
            let genus = if i % 3 == 0 {
                vec![0; n]
            } else {
                (0..n).map(|_| rng.random_range(0..=params.max_vertex_genus)).collect()
            };
            let divisor = random_divisor(&mut rng, n, params);
            let curve = AugmentedCurve::new(graph, genus).expect("one genus per vertex");
            Instance { curve, divisor }
        })
        .collect()
}

/// A random connected multigraph: a random spanning tree plus up to
/// `max_extra_edges` further edges. With loops allowed each extra edge is a
/// loop with probability 1/4; a single vertex then only receives loops.
pub fn random_multigraph(rng: &mut impl Rng, params: &FamilyParams) -> Multigraph {
    let n = rng.random_range(1..=params.max_vertices.max(1));
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    for _ in 0..rng.random_range(0..=params.max_extra_edges) {
        let a = rng.random_range(0..n);
        let b = if params.allow_loops && (n == 1 || rng.random_bool(0.25)) {
            a
        } else if n == 1 {
            continue;
        } else {
            (a + rng.random_range(1..n)) % n
        };
        edges.push((a, b));
    }
    Multigraph::from_indices(n, &edges).expect("spanning tree keeps the graph connected")
}

pub fn random_divisor(rng: &mut impl Rng, n: usize, params: &FamilyParams) -> GraphDivisor {
    let c = params.max_coefficient;
    loop {
        let d = GraphDivisor::from_coefficients((0..n).map(|_| rng.random_range(-c..=c)).collect());
        if d.degree().abs() <= params.max_abs_degree {
            return d;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RrFailure {
    pub edges: Vec<(usize, usize)>,
    pub divisor: GraphDivisor,
    pub defect: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RrAudit {
    pub seed: u64,
    pub checked: usize,
    pub failures: Vec<RrFailure>,
}

impl RrAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates the graph Riemann–Roch defect on `count` random graph/divisor
/// pairs drawn from `seed`.
pub fn rr_audit(seed: u64, count: usize, params: &FamilyParams) -> Result<RrAudit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..count {
        let graph = random_multigraph(&mut rng, params);
        let divisor = random_divisor(&mut rng, graph.vertex_count(), params);
        let defect = graph_rr_defect(&graph, &divisor)?;
        if defect != 0 {
            failures.push(RrFailure { edges: graph.edges().to_vec(), divisor, defect });
        }
    }
    Ok(RrAudit { seed, checked: count, failures })
}
