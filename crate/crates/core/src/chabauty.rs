//! Newton-polygon correction terms and Chabauty–Coleman point-count bounds.
//!
//! All quantities are small non-negative integers; everything here is exact.

use serde::Serialize;

use crate::error::{Error, Result};

/// Residue characteristic `p` together with the absolute ramification
/// index `e = v(p)` of the completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalArithmetic {
    p: u64,
    e: u64,
}

impl LocalArithmetic {
    pub fn new(p: u64, e: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidInput("ramification index e must be at least 1".into()));
        }
        Ok(LocalArithmetic { p, e })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u64 {
        self.e
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The exponent of `p` in `n`.
pub fn vp(n: u64, p: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidInput("valuation of 0 is undefined here; need n ≥ 1".into()));
    }
    if p < 2 {
        return Err(Error::NotPrime(p));
    }
    let mut n = n;
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    Ok(k)
}

/// `δ(n) = max{d ≥ 0 : e·v_p(n+1) + d ≤ e·v_p(n+d+1)}`.
///
/// A feasible `d` in the block `[j·e, (j+1)·e)` needs `p^j ≤ n + d + 1 ≤
/// n + (j+1)·e`. Once a block fails this, `p^{j+1} ≥ 2p^j > n + (j+2)·e`,
/// so every later block fails too; the scan stops at the first such block.
pub fn delta(local: LocalArithmetic, n: u64) -> u64 {
    let LocalArithmetic { p, e } = local;
    let base = e * vp(n + 1, p).expect("n + 1 ≥ 1");
    let mut blocks = 0u64;
    let mut power = 1u64;
    loop {
        let reach = n + (blocks + 1) * e;
        if power > reach {
            break;
        }
        blocks += 1;
        power = power.saturating_mul(p);
    }
    let cap = blocks * e;
    (0..cap).filter(|&d| base + d <= e * vp(n + d + 1, p).expect("positive")).max().unwrap_or(0)
}

/// Upper bound `1 + n + δ(n)` on the number of points in one residue class
/// where the chosen differential vanishes to order `n`.
pub fn residue_class_bound(local: LocalArithmetic, n: u64) -> u64 {
    1 + n + delta(local, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Theorem {
    /// `p > 2r + 2`, `p` unramified: `N + 2r`.
    #[serde(rename = "stoll_main")]
    StollMain,
    /// `p > 2g + e − 1`: `N + 2g − 2`.
    #[serde(rename = "coleman_LT")]
    ColemanLt,
    /// `e < p − 1`: `N + 2r + e·⌊2r/(p − e − 1)⌋`.
    #[serde(rename = "general_delta")]
    GeneralDelta,
}

impl Theorem {
    pub fn tag(self) -> &'static str {
        match self {
            Theorem::StollMain => "stoll_main",
            Theorem::ColemanLt => "coleman_LT",
            Theorem::GeneralDelta => "general_delta",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChabautyInputs {
    pub g: u64,
    pub r: u64,
    pub local: LocalArithmetic,
    pub n_smooth: u64,
    /// Per-residue-class vanishing orders of the Chabauty divisor, if known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<u64>>,
}

impl ChabautyInputs {
    pub fn new(g: u64, r: u64, local: LocalArithmetic, n_smooth: u64, orders: Option<Vec<u64>>) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidInput(format!("genus must be at least 2, got {g}")));
        }
        if let Some(orders) = &orders {
            let total: u64 = orders.iter().sum();
            if total > 2 * r {
                return Err(Error::InvalidInput(format!(
                    "sum of orders {total} exceeds 2r = {}: the Chabauty divisor has degree at most 2r",
                    2 * r
                )));
            }
        }
        Ok(ChabautyInputs { g, r, local, n_smooth, orders })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub condition: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChabautyReport {
    pub bound: u64,
    pub theorem: Theorem,
    pub hypotheses_checked: Vec<HypothesisCheck>,
    pub inputs: ChabautyInputs,
    /// `N + Σ(n + δ(n))` over the supplied orders.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders_bound: Option<u64>,
}

pub fn chabauty_bound(inputs: &ChabautyInputs) -> Result<ChabautyReport> {
    let ChabautyInputs { g, r, local, n_smooth, .. } = *inputs;
    let (p, e) = (local.p, local.e);
    if r >= g {
        return Err(Error::ChabautyHypothesis { g, r });
    }
    let mut checks = vec![HypothesisCheck { condition: "r < g".into(), passed: true }];
    let mut candidates: Vec<(u64, Theorem)> = Vec::new();

    let stoll = p > 2 * r + 2 && e == 1;
    checks.push(HypothesisCheck { condition: "p > 2r + 2 and e = 1 (stoll_main)".into(), passed: stoll });
    if stoll {
        candidates.push((n_smooth + 2 * r, Theorem::StollMain));
    }

    let coleman = p + 1 > 2 * g + e;
    checks.push(HypothesisCheck { condition: "p > 2g + e - 1 (coleman_LT)".into(), passed: coleman });
    if coleman {
        candidates.push((n_smooth + 2 * g - 2, Theorem::ColemanLt));
    }

    let general = e + 1 < p;
    checks.push(HypothesisCheck { condition: "e < p - 1 (general_delta)".into(), passed: general });
    if general {
        let slope = p - e - 1;
        candidates.push((n_smooth + 2 * r + e * (2 * r / slope), Theorem::GeneralDelta));
    }

    // Ties go to the theorem listed first.
    let (bound, theorem) = candidates.into_iter().min().ok_or(Error::NoUnconditionalBound)?;
    let orders_bound =
        inputs.orders.as_ref().map(|orders| n_smooth + orders.iter().map(|&n| n + delta(local, n)).sum::<u64>());
    Ok(ChabautyReport { bound, theorem, hypotheses_checked: checks, inputs: inputs.clone(), orders_bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeltaRow {
    pub n: u64,
    pub delta: u64,
    /// `e·⌊n/(p − e − 1)⌋` when `e < p − 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaAudit {
    pub local: LocalArithmetic,
    pub bounded_claims_checked: bool,
    pub passed: bool,
    pub rows: Vec<DeltaRow>,
}

/// Tabulates `δ(n)` for `n ≤ n_max`. When `e < p − 1`, also checks
/// `δ(n) ≤ e·⌊n/(p − e − 1)⌋` and `δ(n) = 0` whenever `p > n + e + 1`.
pub fn delta_property_audit(local: LocalArithmetic, n_max: u64) -> DeltaAudit {
    let LocalArithmetic { p, e } = local;
    let bounded = e + 1 < p;
    let rows: Vec<DeltaRow> = (0..=n_max)
        .map(|n| {
            let delta = delta(local, n);
            let bound = bounded.then(|| e * (n / (p - e - 1)));
            let ok = match bound {
                Some(b) => delta <= b && (p <= n + e + 1 || delta == 0),
                None => true,
            };
            DeltaRow { n, delta, bound, ok }
        })
        .collect();
    let passed = rows.iter().all(|r| r.ok);
    DeltaAudit { local, bounded_claims_checked: bounded, passed, rows }
}
