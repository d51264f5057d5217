//! Linear equivalence and Baker–Norine rank on multigraphs.
//!
//! Equivalence classes are represented by q-reduced divisors, computed with
//! Dhar's burning algorithm. Rank is found by an ascending search: level `k`
//! passes when `D − E` is equivalent to an effective divisor for every
//! effective `E` of degree `k`, with the `E` enumerated in colexicographic
//! order. A level costs `C(k + n − 1, n − 1)` reductions of `O(n²)` work
//! each (times the number of burning rounds), so the whole search is
//! exponential in the rank and meant for small graphs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{canonical_graph_divisor, graph_genus, GraphDivisor, Multigraph};

/// A divisor that is non-negative away from `base` and admits no legal
/// firing of a nonempty vertex set avoiding `base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ReducedDivisor {
    divisor: GraphDivisor,
    base: usize,
}

impl ReducedDivisor {
    pub fn divisor(&self) -> &GraphDivisor {
        &self.divisor
    }

    pub fn into_divisor(self) -> GraphDivisor {
        self.divisor
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Coefficient at the base vertex; the class contains an effective
    /// divisor iff this is non-negative.
    pub fn base_coefficient(&self) -> i64 {
        self.divisor[self.base]
    }
}

/// A reduction together with the firing script that produced it:
/// `Δ(script) = reduced − original`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub reduced: ReducedDivisor,
    pub script: Vec<i64>,
}

pub fn q_reduce(graph: &Multigraph, d: &GraphDivisor, q: usize) -> Result<ReducedDivisor> {
    Ok(q_reduce_with_script(graph, d, q)?.reduced)
}

pub fn q_reduce_with_script(graph: &Multigraph, d: &GraphDivisor, q: usize) -> Result<Reduction> {
    graph.check_divisor(d)?;
    if q >= graph.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{q}")));
    }
    let mut chips = d.coefficients().to_vec();
    let mut script = vec![0i64; graph.vertex_count()];
    make_effective_away_from(graph, &mut chips, &mut script, q);
    burn_until_reduced(graph, &mut chips, &mut script, q);
    Ok(Reduction { reduced: ReducedDivisor { divisor: GraphDivisor::from_coefficients(chips), base: q }, script })
}

fn fire_set(graph: &Multigraph, chips: &mut [i64], script: &mut [i64], in_set: &[bool], times: i64) {
    let n = graph.vertex_count();
    for v in (0..n).filter(|&v| in_set[v]) {
        script[v] += times;
        for w in (0..n).filter(|&w| !in_set[w]) {
            let m = i64::from(graph.multiplicity(v, w));
            if m > 0 {
                chips[v] -= times * m;
                chips[w] += times * m;
            }
        }
    }
}

/// Pushes chips outward from `q`, one distance layer at a time starting
/// from the outermost, until every vertex other than `q` is non-negative.
/// Firing the ball of radius `k` only moves chips between layers `k` and
/// `k + 1`, so finished outer layers are never disturbed.
fn make_effective_away_from(graph: &Multigraph, chips: &mut [i64], script: &mut [i64], q: usize) {
    let n = graph.vertex_count();
    let dist = graph.distances_from(q);
    let depth = dist.iter().copied().max().unwrap_or(0);
    for k in (0..depth).rev() {
        let ball: Vec<bool> = dist.iter().map(|&x| x <= k).collect();
        let mut times = 0i64;
        for v in (0..n).filter(|&v| dist[v] == k + 1 && chips[v] < 0) {
            let inward: i64 = (0..n).filter(|&w| ball[w]).map(|w| i64::from(graph.multiplicity(v, w))).sum();
            let need = (-chips[v] + inward - 1) / inward;
            times = times.max(need);
        }
        if times > 0 {
            fire_set(graph, chips, script, &ball, times);
        }
    }
}

fn burn_until_reduced(graph: &Multigraph, chips: &mut [i64], script: &mut [i64], q: usize) {
    let n = graph.vertex_count();
    loop {
        let mut burnt = vec![false; n];
        let mut toward_fire = vec![0i64; n];
        burnt[q] = true;
        let mut stack = vec![q];
        while let Some(v) = stack.pop() {
            for w in graph.neighbors(v) {
                if burnt[w] {
                    continue;
                }
                toward_fire[w] += i64::from(graph.multiplicity(v, w));
                if chips[w] < toward_fire[w] {
                    burnt[w] = true;
                    stack.push(w);
                }
            }
        }
        if burnt.iter().all(|&b| b) {
            return;
        }
        // The unburnt set may fire as many times as its poorest boundary vertex allows.
        let times = (0..n)
            .filter(|&v| !burnt[v] && toward_fire[v] > 0)
            .map(|v| chips[v] / toward_fire[v])
            .min()
            .expect("connected graph: the unburnt set touches the fire");
        debug_assert!(times >= 1);
        let unburnt: Vec<bool> = burnt.iter().map(|b| !b).collect();
        fire_set(graph, chips, script, &unburnt, times);
    }
}

/// Checks the defining property of a q-reduced divisor by trying every
/// nonempty subset of `V ∖ {q}`. Exponential in the vertex count.
pub fn is_q_reduced(graph: &Multigraph, d: &GraphDivisor, q: usize) -> bool {
    let n = graph.vertex_count();
    if (0..n).any(|v| v != q && d[v] < 0) {
        return false;
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != q).collect();
    for mask in 1u64..(1u64 << others.len()) {
        let mut in_set = vec![false; n];
        for (bit, &v) in others.iter().enumerate() {
            in_set[v] = mask >> bit & 1 == 1;
        }
        let legal = (0..n).filter(|&v| in_set[v]).all(|v| {
            let out: i64 = (0..n).filter(|&w| !in_set[w]).map(|w| i64::from(graph.multiplicity(v, w))).sum();
            d[v] >= out
        });
        if legal {
            return false;
        }
    }
    true
}

pub fn is_linearly_equivalent(graph: &Multigraph, d1: &GraphDivisor, d2: &GraphDivisor) -> Result<bool> {
    graph.check_divisor(d1)?;
    graph.check_divisor(d2)?;
    if d1.degree() != d2.degree() {
        return Ok(false);
    }
    Ok(q_reduce(graph, d1, 0)? == q_reduce(graph, d2, 0)?)
}

pub fn is_equivalent_to_effective(graph: &Multigraph, d: &GraphDivisor) -> Result<bool> {
    if d.degree() < 0 {
        graph.check_divisor(d)?;
        return Ok(false);
    }
    Ok(q_reduce(graph, d, 0)?.base_coefficient() >= 0)
}

/// Effective divisors of a fixed degree on `n` vertices in colexicographic
/// order: `(k,0,…,0), (k−1,1,0,…), …, (0,…,0,k)`.
#[derive(Debug, Clone)]
pub struct EffectiveDivisors {
    current: Option<Vec<i64>>,
}

impl EffectiveDivisors {
    pub fn new(n: usize, degree: i64) -> Self {
        let current = (n > 0 && degree >= 0).then(|| {
            let mut c = vec![0; n];
            c[0] = degree;
            c
        });
        EffectiveDivisors { current }
    }
}

impl Iterator for EffectiveDivisors {
    type Item = GraphDivisor;

    fn next(&mut self) -> Option<GraphDivisor> {
        let c = self.current.take()?;
        let out = GraphDivisor::from_coefficients(c.clone());
        let n = c.len();
        if let Some(first) = c.iter().position(|&x| x > 0) {
            if first + 1 < n {
                let mut next = c;
                let s = next[first];
                next[first + 1] += 1;
                next[first] = 0;
                next[0] = s - 1;
                self.current = Some(next);
            }
        }
        Some(out)
    }
}

/// Rank of a divisor plus, when the rank is finite, the first effective `E`
/// of degree `rank + 1` (in colex order) for which `D − E` is not
/// equivalent to an effective divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankWitness {
    pub rank: i64,
    pub obstruction: GraphDivisor,
}

pub fn graph_divisor_rank(graph: &Multigraph, d: &GraphDivisor) -> Result<i64> {
    Ok(rank_with_witness(graph, d)?.rank)
}

pub fn rank_with_witness(graph: &Multigraph, d: &GraphDivisor) -> Result<RankWitness> {
    graph.check_divisor(d)?;
    let n = graph.vertex_count();
    if d.degree() < 0 {
        return Ok(RankWitness { rank: -1, obstruction: graph.zero_divisor() });
    }
    let reduced = q_reduce(graph, d, 0)?.into_divisor();
    if reduced[0] < 0 {
        return Ok(RankWitness { rank: -1, obstruction: graph.zero_divisor() });
    }
    for k in 1..=d.degree() + 1 {
        for e in EffectiveDivisors::new(n, k) {
            if !is_equivalent_to_effective(graph, &(&reduced - &e))? {
                return Ok(RankWitness { rank: k - 1, obstruction: e });
            }
        }
    }
    unreachable!("every E of degree deg(D) + 1 is an obstruction")
}

/// Whether `rank(D) ≥ t`, checking only degree-`t` subtractions.
pub fn rank_at_least(graph: &Multigraph, d: &GraphDivisor, t: i64) -> Result<bool> {
    graph.check_divisor(d)?;
    if t < 0 {
        return Ok(true);
    }
    if d.degree() < t {
        return Ok(false);
    }
    let reduced = q_reduce(graph, d, 0)?.into_divisor();
    for e in EffectiveDivisors::new(graph.vertex_count(), t) {
        if !is_equivalent_to_effective(graph, &(&reduced - &e))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `r(D) − r(K_Γ − D) − (deg D + 1 − g(Γ))`, which Riemann–Roch for graphs
/// says is always zero.
pub fn graph_rr_defect(graph: &Multigraph, d: &GraphDivisor) -> Result<i64> {
    let k = canonical_graph_divisor(graph);
    let r = graph_divisor_rank(graph, d)?;
    let r_dual = graph_divisor_rank(graph, &(&k - d))?;
    Ok(r - r_dual - (d.degree() + 1 - graph_genus(graph) as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CliffordCheck {
    pub holds: bool,
    /// Set when `D` is not effective or not special, so there was nothing to check.
    pub vacuous: bool,
}

/// For effective special `D`, checks `r(D) ≤ deg(D)/2`.
pub fn graph_clifford_check(graph: &Multigraph, d: &GraphDivisor) -> Result<CliffordCheck> {
    graph.check_divisor(d)?;
    let k = canonical_graph_divisor(graph);
    if !d.is_effective() || !is_equivalent_to_effective(graph, &(&k - d))? {
        return Ok(CliffordCheck { holds: true, vacuous: true });
    }
    let r = graph_divisor_rank(graph, d)?;
    Ok(CliffordCheck { holds: 2 * r <= d.degree(), vacuous: false })
}
