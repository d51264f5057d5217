//! Dual graphs with component genera, and the rank functions that look at
//! sections on each component.
//!
//! Points are handled at the level of multidegrees. Whenever a divisor `E`
//! is subtracted, it is assumed to be in twist general position, so on each
//! component it lowers `h⁰` by `E(v)` (clamped at 0) for every relevant twist
//! simultaneously. Sections are decided by a [`SectionOracle`] that only sees
//! the component genus and the degree, so `r_ab` comes out as a bracket.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    canonical_graph_divisor, check_len, graph_genus, laplacian_of_values, GraphDivisor, Multigraph, Twist,
};
use crate::rank::{graph_divisor_rank, is_equivalent_to_effective, EffectiveDivisors};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedCurve {
    graph: Multigraph,
    genus: Vec<u64>,
}

impl AugmentedCurve {
    pub fn new(graph: Multigraph, genus: Vec<u64>) -> Result<Self> {
        check_len(graph.vertex_count(), genus.len())?;
        Ok(AugmentedCurve { graph, genus })
    }

    /// All components rational.
    pub fn totally_degenerate(graph: Multigraph) -> Self {
        let genus = vec![0; graph.vertex_count()];
        AugmentedCurve { graph, genus }
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn genera(&self) -> &[u64] {
        &self.genus
    }

    pub fn genus_of(&self, v: usize) -> u64 {
        self.genus[v]
    }

    /// `g(Γ) + Σ_v g(X_v)`.
    pub fn total_genus(&self) -> u64 {
        graph_genus(&self.graph) + self.genus.iter().sum::<u64>()
    }

    pub fn is_totally_degenerate(&self) -> bool {
        self.genus.iter().all(|&g| g == 0)
    }

    /// `Σ_v g(X_v)·v`.
    pub fn genus_divisor(&self) -> GraphDivisor {
        GraphDivisor::from_coefficients(self.genus.iter().map(|&g| g as i64).collect())
    }
}

/// Multidegree of the canonical bundle: `Σ_v (2g(X_v) + val(v) − 2)·v`.
pub fn canonical_multidegree(ac: &AugmentedCurve) -> GraphDivisor {
    let mut k = canonical_graph_divisor(ac.graph());
    let g = ac.genus_divisor();
    k += &g.scaled(2);
    k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionOracle {
    /// Clifford / Riemann–Roch upper envelope: any line bundle of
    /// non-negative degree may have a section.
    Optimistic,
    /// Generic line bundle: a section exists only from degree `g` on.
    Pessimistic,
}

impl SectionOracle {
    pub fn section_exists(self, genus: u64, degree: i64) -> bool {
        match self {
            SectionOracle::Optimistic => degree >= 0,
            SectionOracle::Pessimistic => degree >= genus as i64,
        }
    }

    /// Degree-determined value of `h⁰` for a line bundle on a genus-`genus` component.
    pub fn h0(self, genus: u64, degree: i64) -> i64 {
        let g = genus as i64;
        match self {
            SectionOracle::Optimistic => {
                if degree < 0 {
                    0
                } else if degree <= 2 * g - 2 {
                    degree / 2 + 1
                } else {
                    degree + 1 - g
                }
            }
            SectionOracle::Pessimistic => (degree + 1 - g).max(0),
        }
    }
}

/// The lower bound on normalized twists in `S_D` obtained by walking
/// outward from a maximum vertex `v₀`: a neighbour `w` of `v` satisfies
/// `φ(w) ≥ deg(v)·φ(v) − D(v)`, with `deg` the non-loop valence. Returns `B` with every `φ ∈ S_D` in `[−B, 0]`.
pub fn lemma_twist_bound(graph: &Multigraph, d: &GraphDivisor) -> i64 {
    let n = graph.vertex_count();
    let mut worst = 0i64;
    for root in 0..n {
        let mut lower = vec![None::<i64>; n];
        lower[root] = Some(0);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let lv = lower[v].expect("visited");
            let step = (i64::from(graph.outdegree(v)) * lv - d[v]).min(0);
            for w in graph.neighbors(v) {
                if lower[w].is_none() {
                    lower[w] = Some(step);
                    worst = worst.max(-step);
                    queue.push_back(w);
                }
            }
        }
    }
    worst
}

/// A second bound on the spread of `φ ∈ S_D`: with `D' = D + Δφ ≥ 0`, the
/// edge energy `Σ_e (φ(w) − φ(v))² = −⟨φ, Δφ⟩` is at most `m·Σ_v D(v)⁺`
/// where `m = −min φ`, while a path of at most `n − 1` edges from the
/// maximum to the minimum forces the energy to be at least `m²/(n − 1)`.
fn energy_twist_bound(graph: &Multigraph, d: &GraphDivisor) -> i64 {
    let positive: i64 = d.coefficients().iter().map(|&c| c.max(0)).sum();
    (graph.vertex_count() as i64 - 1) * positive
}

pub fn twist_search_bound(graph: &Multigraph, d: &GraphDivisor) -> i64 {
    lemma_twist_bound(graph, d).min(energy_twist_bound(graph, d))
}

/// Depth-first search over normalized twists in `[−bound, 0]` with
/// `D + Δφ ≥ 0`, in lexicographic order. `visit` returns `true` to stop.
fn search_twists(graph: &Multigraph, d: &GraphDivisor, visit: &mut dyn FnMut(&[i64], &GraphDivisor) -> bool) {
    let n = graph.vertex_count();
    if d.degree() < 0 {
        return;
    }
    let bound = twist_search_bound(graph, d);
    let mut phi = vec![0i64; n];
    let mut state = Search { graph, d, bound, visit, stopped: false };
    state.descend(&mut phi, 0, false);
}

struct Search<'a> {
    graph: &'a Multigraph,
    d: &'a GraphDivisor,
    bound: i64,
    visit: &'a mut dyn FnMut(&[i64], &GraphDivisor) -> bool,
    stopped: bool,
}

impl Search<'_> {
    fn descend(&mut self, phi: &mut [i64], i: usize, has_zero: bool) {
        let n = phi.len();
        if i == n {
            if has_zero {
                let twisted = self.d + &laplacian_of_values(self.graph, phi);
                debug_assert!(twisted.is_effective());
                self.stopped = (self.visit)(phi, &twisted);
            }
            return;
        }
        // The last vertex must be 0 if nothing else is.
        let lowest = if !has_zero && i + 1 == n { 0 } else { -self.bound };
        for value in lowest..=0 {
            phi[i] = value;
            if self.feasible(phi, i) {
                self.descend(phi, i + 1, has_zero || value == 0);
                if self.stopped {
                    return;
                }
            }
        }
    }

    /// Checks every assigned vertex, taking unassigned neighbours at the
    /// maximum value 0. Exact once the whole neighbourhood is assigned.
    fn feasible(&self, phi: &[i64], i: usize) -> bool {
        let g = self.graph;
        for v in 0..=i {
            let mut best = self.d[v];
            for w in g.neighbors(v) {
                let m = i64::from(g.multiplicity(v, w));
                let target = if w <= i { phi[w] } else { 0 };
                best += m * (target - phi[v]);
            }
            if best < 0 {
                return false;
            }
        }
        true
    }
}

/// `S_D = {φ ∈ M(Γ)/const : D + Δφ ≥ 0}`, sorted lexicographically.
pub fn enumerate_effective_twists(graph: &Multigraph, d: &GraphDivisor) -> Result<Vec<Twist>> {
    graph.check_divisor(d)?;
    let mut out = Vec::new();
    search_twists(graph, d, &mut |phi, _| {
        out.push(Twist::new(phi.to_vec()));
        false
    });
    Ok(out)
}

/// Numeric rank; identical to the Baker–Norine rank of the multidegree.
pub fn r_num(ac: &AugmentedCurve, d: &GraphDivisor) -> Result<i64> {
    graph_divisor_rank(ac.graph(), d)
}

/// Whether some twist makes `D` carry a section on every component.
fn sections_everywhere(ac: &AugmentedCurve, d: &GraphDivisor, oracle: SectionOracle) -> bool {
    let mut found = false;
    search_twists(ac.graph(), d, &mut |_, twisted| {
        found = twisted.coefficients().iter().enumerate().all(|(v, &deg)| oracle.section_exists(ac.genus_of(v), deg));
        found
    });
    found
}

fn r_ab_level_passes(ac: &AugmentedCurve, d: &GraphDivisor, oracle: SectionOracle, k: i64) -> bool {
    EffectiveDivisors::new(ac.graph().vertex_count(), k).all(|e| sections_everywhere(ac, &(d - &e), oracle))
}

/// Abelian rank under a section oracle: the largest `r` such that for every
/// effective multidegree `E` of degree `r` some twist of `D − E` has a
/// section on every component; `−1` if `D` itself fails.
pub fn r_ab(ac: &AugmentedCurve, d: &GraphDivisor, oracle: SectionOracle) -> Result<i64> {
    ac.graph().check_divisor(d)?;
    for k in 0..=d.degree().max(-1) + 1 {
        if !r_ab_level_passes(ac, d, oracle, k) {
            return Ok(k - 1);
        }
    }
    Ok(-1)
}

/// Whether `r_ab(D) ≥ t`, checking only degree-`t` subtractions.
pub fn r_ab_at_least(ac: &AugmentedCurve, d: &GraphDivisor, oracle: SectionOracle, t: i64) -> Result<bool> {
    ac.graph().check_divisor(d)?;
    if t < 0 {
        return Ok(true);
    }
    Ok(r_ab_level_passes(ac, d, oracle, t))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub twist: Twist,
    /// `h⁰` of `(D + Δφ)|_{X_v}` per vertex.
    pub h0_before: Vec<i64>,
    /// `max(0, h⁰ − E(v))` per vertex.
    pub h0_after: Vec<i64>,
}

pub fn twist_general_position_profile(
    ac: &AugmentedCurve,
    d: &GraphDivisor,
    e: &GraphDivisor,
    oracle: SectionOracle,
) -> Result<Vec<ProfileRow>> {
    let g = ac.graph();
    g.check_divisor(d)?;
    g.check_divisor(e)?;
    if !e.is_effective() {
        return Err(Error::NotEffective);
    }
    let mut rows = Vec::new();
    search_twists(g, d, &mut |phi, twisted| {
        let h0_before: Vec<i64> = (0..g.vertex_count()).map(|v| oracle.h0(ac.genus_of(v), twisted[v])).collect();
        let h0_after = h0_before.iter().zip(e.coefficients()).map(|(&h, &k)| (h - k).max(0)).collect();
        rows.push(ProfileRow { twist: Twist::new(phi.to_vec()), h0_before, h0_after });
        false
    });
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateBranch {
    /// `deg(K_Γ − D) < 0` and no twist makes `K − D` effective.
    EmptyTwistSet,
    /// `deg(K_Γ − D) < 0`: blocking points on a minimal Clifford set.
    NegativeGraphDegree,
    /// `deg(K_Γ − D) ≥ 0`: graph Clifford bound plus `g(X_v)` points per component.
    GraphClifford,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistWitness {
    pub twist: Twist,
    /// First vertex (declaration order) where no section survives.
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliffordCertificate {
    /// Multidegree of the blocking divisor.
    pub q: GraphDivisor,
    /// Certified upper bound on `r_ab(K − D)`; equals `deg(q) − 1`.
    pub bound: i64,
    pub branch: CertificateBranch,
    pub witness_twist_analysis: Vec<TwistWitness>,
}

/// Builds a divisor `Q` with `r_ab(K − D − Q) < 0` following the two-case
/// construction (negative graph degree / graph Clifford), then re-verifies
/// exhaustively over `S_{K−D}` with the optimistic `h⁰` envelope.
pub fn clifford_certificate(ac: &AugmentedCurve, d: &GraphDivisor) -> Result<CliffordCertificate> {
    let graph = ac.graph();
    graph.check_divisor(d)?;
    if !d.is_effective() {
        return Err(Error::NotEffective);
    }
    let n = graph.vertex_count();
    let canonical = canonical_multidegree(ac);
    let residual = &canonical - d;
    let graph_residual = &canonical_graph_divisor(graph) - d;
    let twists = enumerate_effective_twists(graph, &residual)?;

    let (q, branch) = if graph_residual.degree() < 0 {
        if twists.is_empty() {
            (graph.zero_divisor(), CertificateBranch::EmptyTwistSet)
        } else {
            (negative_degree_blocker(ac, &residual, &twists)?, CertificateBranch::NegativeGraphDegree)
        }
    } else {
        let mut q = graph_clifford_blocker(graph, &graph_residual, d.degree())?;
        q += &ac.genus_divisor();
        (q, CertificateBranch::GraphClifford)
    };

    let mut witnesses = Vec::with_capacity(twists.len());
    for phi in &twists {
        let twisted = &residual + &laplacian_of_values(graph, phi.values());
        let dead = (0..n).find(|&v| SectionOracle::Optimistic.h0(ac.genus_of(v), twisted[v]) - q[v] <= 0);
        match dead {
            Some(vertex) => witnesses.push(TwistWitness { twist: phi.clone(), vertex }),
            None => {
                return Err(Error::Internal(format!(
                    "twist {phi} keeps sections on every component of K − D − Q with Q = {q}"
                )))
            }
        }
    }

    let bound = q.degree() - 1;
    // bound ≤ g − deg(D)/2 − 1, compared after doubling. Only meaningful
    // while the right side is at least −1.
    let g = ac.total_genus() as i64;
    if d.degree() <= 2 * g && 2 * bound > 2 * g - d.degree() - 2 {
        return Err(Error::Internal(format!(
            "certified bound {bound} exceeds g − deg(D)/2 − 1 with g = {g}, deg D = {}",
            d.degree()
        )));
    }
    Ok(CliffordCertificate { q, bound, branch, witness_twist_analysis: witnesses })
}

/// First case: pick a twist with the fewest Clifford vertices, then the
/// largest Clifford degree `M`, and put `⌊M/2⌋ + 1` points on that vertex
/// and `g(X_w)` points on every non-Clifford `w`.
fn negative_degree_blocker(ac: &AugmentedCurve, residual: &GraphDivisor, twists: &[Twist]) -> Result<GraphDivisor> {
    let graph = ac.graph();
    let n = graph.vertex_count();
    // (|Cliff|, M, twisted degrees, Clifford flags), for the twist chosen so far.
    let mut best: Option<(usize, i64, GraphDivisor, Vec<bool>)> = None;
    for phi in twists {
        let twisted = residual + &laplacian_of_values(graph, phi.values());
        let clifford: Vec<bool> = (0..n).map(|v| twisted[v] < 2 * ac.genus_of(v) as i64).collect();
        let size = clifford.iter().filter(|&&c| c).count();
        let m = (0..n).filter(|&v| clifford[v]).map(|v| twisted[v]).max();
        let Some(m) = m else {
            return Err(Error::Internal(format!("twist {phi} has no Clifford vertex although deg(K_Γ − D) < 0")));
        };
        // Twists arrive in lexicographic order, so strict comparisons keep the smallest on ties.
        let better = match &best {
            None => true,
            Some((s, bm, _, _)) => size < *s || (size == *s && m > *bm),
        };
        if better {
            best = Some((size, m, twisted, clifford));
        }
    }
    let (_, m, twisted, clifford) = best.expect("nonempty twist set");
    let v_max = (0..n).find(|&v| clifford[v] && twisted[v] == m).expect("maximum is attained");
    let mut q = GraphDivisor::zero(n);
    q[v_max] = m.div_euclid(2) + 1;
    for w in (0..n).filter(|&w| !clifford[w]) {
        q[w] = ac.genus_of(w) as i64;
    }
    Ok(q)
}

/// Second case: an effective `Q'` of degree `⌊g(Γ) − deg(D)/2 − 1⌋ + 1`
/// with `K_Γ − D − Q'` not equivalent to an effective divisor.
fn graph_clifford_blocker(graph: &Multigraph, graph_residual: &GraphDivisor, d_degree: i64) -> Result<GraphDivisor> {
    let n = graph.vertex_count();
    let r = (2 * graph_genus(graph) as i64 - d_degree - 2).div_euclid(2);
    let target = (r + 1).max(0);
    let search = |degree: i64| -> Result<Option<GraphDivisor>> {
        for e in EffectiveDivisors::new(n, degree) {
            if !is_equivalent_to_effective(graph, &(graph_residual - &e))? {
                return Ok(Some(e));
            }
        }
        Ok(None)
    };
    if let Some(q) = search(target)? {
        return Ok(q);
    }
    if r < 0 {
        if let Some(q) = search(1)? {
            return Ok(q);
        }
    }
    let note =
        if (0..n).any(|v| graph.loop_count(v) > 0) { " (graph Clifford can fail once loops are present)" } else { "" };
    Err(Error::Internal(format!("no effective Q' of degree {target} blocks K_Γ − D = {graph_residual}{note}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankBounds {
    /// `r_ab` under the pessimistic oracle.
    pub lower: i64,
    /// `r_ab` under the optimistic oracle; always equals `r_num`.
    pub upper: i64,
}

pub fn rank_hierarchy(ac: &AugmentedCurve, d: &GraphDivisor) -> Result<RankBounds> {
    let lower = r_ab(ac, d, SectionOracle::Pessimistic)?;
    let upper = r_ab(ac, d, SectionOracle::Optimistic)?;
    let numeric = r_num(ac, d)?;
    if upper != numeric {
        return Err(Error::Internal(format!("optimistic r_ab = {upper} but r_num = {numeric}")));
    }
    if lower > upper {
        return Err(Error::Internal(format!("pessimistic r_ab = {lower} exceeds optimistic {upper}")));
    }
    Ok(RankBounds { lower, upper })
}
