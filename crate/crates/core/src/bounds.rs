//! Closed-form bounds and an instance verifier that compares exact solver
//! output against them.
//!
//! Rational-valued formulas are evaluated exactly with `BigRational`.
//! Formulas with fractional exponents are evaluated in `f64`; comparisons
//! of integers against those use [`at_most`], which shaves a few ulps off
//! the bound so rounding can never turn a failure into a pass.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::constructions::{
    build_g1, build_g2, ceil_block, even_cycle_bipartite, random_regular_bipartite, Construction, ConstructionError,
};
use crate::graph::MultipartiteGraph;
use crate::solver::{count_its_parallel, find_blowup_it, find_kss};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("r must be at least {min}, got {r}")]
    SmallR { r: usize, min: usize },
    #[error("r must be even, got {0}")]
    OddR(usize),
    #[error("t must be at least 1")]
    ZeroT,
    #[error("n must be at least 1")]
    ZeroN,
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Renders a rational as `p` or `p/q`.
pub fn render(x: &BigRational) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Largest `C` such that every graph in `G_r(n)` with `Δ < C` has an IT.
pub fn delta_threshold(r: usize, n: usize) -> Result<usize, BoundsError> {
    if r < 2 {
        return Err(BoundsError::SmallR { r, min: 2 });
    }
    Ok(if r % 2 == 1 {
        ((r - 1) * n).div_ceil(2 * (r - 2))
    } else {
        (r * n).div_ceil(2 * (r - 1))
    })
}

fn check_even_r(r: usize, t: usize) -> Result<(), BoundsError> {
    if r % 2 == 1 {
        return Err(BoundsError::OddR(r));
    }
    if r < 4 {
        return Err(BoundsError::SmallR { r, min: 4 });
    }
    if t == 0 {
        return Err(BoundsError::ZeroT);
    }
    Ok(())
}

/// `(rn / (2r - 2))^(r - 1)`, without rounding.
pub fn block_power(r: usize, n: usize) -> BigRational {
    let base = ratio((r * n) as i64, (2 * r - 2) as i64);
    num_traits::pow(base, r - 1)
}

/// `(1/4)((t - 1)(2r - 2) + 1)(rn / (2r - 2))^(r - 1)`.
pub fn f_lower(r: usize, n: usize, t: usize) -> Result<BigRational, BoundsError> {
    check_even_r(r, t)?;
    let factor = ratio(((t - 1) * (2 * r - 2) + 1) as i64, 4);
    Ok(factor * block_power(r, n))
}

/// `r² t (rn / (2r - 2))^(r - 1)`.
pub fn f_upper(r: usize, n: usize, t: usize) -> Result<BigRational, BoundsError> {
    check_even_r(r, t)?;
    Ok(ratio((r * r * t) as i64, 1) * block_power(r, n))
}

/// `n/(r - 1) · (√(r/(r - 1)) - 1)`, the largest admissible `t` for the
/// upper-bound construction.
pub fn prop22_t_cap(r: usize, n: usize) -> f64 {
    let (r, n) = (r as f64, n as f64);
    n / (r - 1.0) * ((r / (r - 1.0)).sqrt() - 1.0)
}

/// Exact test of `t <= prop22_t_cap(r, n)`:
/// `(t(r-1) + n)² (r-1) <= r n²`.
pub fn prop22_t_admissible(r: usize, n: usize, t: usize) -> bool {
    let (r, n, t) = (r as u128, n as u128, t as u128);
    let lhs = (t * (r - 1) + n).pow(2) * (r - 1);
    lhs <= r * n * n
}

/// Kővári–Sós–Turán: `(s - 1)^(1/s) n^(2 - 1/s) + s n`.
pub fn kst_bound(n: usize, s: usize) -> f64 {
    let (nf, sf) = (n as f64, s as f64);
    (sf - 1.0).powf(1.0 / sf) * nf.powf(2.0 - 1.0 / sf) + sf * nf
}

/// `n^(r - s^(1 - r))`: hyperedge count forcing `K_r^r(s)` for large `n`.
pub fn erdos_threshold(r: usize, s: usize, n: usize) -> f64 {
    let exponent = r as f64 - (s as f64).powi(1 - r as i32);
    (n as f64).powf(exponent)
}

/// `C_{r,s} = 4 r² s^(1/s)`.
pub fn blowup_constant(r: usize, s: usize) -> f64 {
    4.0 * (r * r) as f64 * (s as f64).powf(1.0 / s as f64)
}

/// `rn/(2r - 2) - C_{r,s} n^(1 - 1/s)`.
pub fn blowup_degree_bound(r: usize, s: usize, n: usize) -> f64 {
    let nf = n as f64;
    (r as f64) * nf / (2.0 * r as f64 - 2.0) - blowup_constant(r, s) * nf.powf(1.0 - 1.0 / s as f64)
}

/// `value <= bound`, with the bound rounded down by a few ulps.
pub fn at_most(value: u128, bound: f64) -> bool {
    (value as f64) <= bound - bound.abs() * 4.0 * f64::EPSILON
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    G1,
    Prop22,
    Prop24,
    Bipartite,
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "g1" => Ok(Self::G1),
            "prop22" => Ok(Self::Prop22),
            "prop24" => Ok(Self::Prop24),
            "bipartite" => Ok(Self::Bipartite),
            other => Err(format!("unknown preset {other:?} (g1|prop22|prop24|bipartite)")),
        }
    }
}

/// Source of the bipartite graph `H` used by the degree-`(D - t)` construction.
#[derive(Debug, Clone, PartialEq)]
pub enum HSpec {
    /// `C_{2N}`.
    Cycle(usize),
    /// Seeded `d`-regular bipartite graph on `N + N`.
    Regular {
        n: usize,
        d: usize,
        seed: u64,
    },
    Graph(MultipartiteGraph),
}

impl HSpec {
    /// Parses `cycle:N` or `regular:N,d,seed`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let bad = || format!("bad H spec {text:?}; expected cycle:N or regular:N,d,seed");
        if let Some(rest) = text.strip_prefix("cycle:") {
            return rest.trim().parse().map(Self::Cycle).map_err(|_| bad());
        }
        if let Some(rest) = text.strip_prefix("regular:") {
            let nums: Vec<&str> = rest.split(',').map(str::trim).collect();
            if let [n, d, seed] = nums[..] {
                return Ok(Self::Regular {
                    n: n.parse().map_err(|_| bad())?,
                    d: d.parse().map_err(|_| bad())?,
                    seed: seed.parse().map_err(|_| bad())?,
                });
            }
        }
        Err(bad())
    }

    pub fn build(&self) -> Result<MultipartiteGraph, ConstructionError> {
        match self {
            Self::Cycle(n) => even_cycle_bipartite(*n),
            Self::Regular { n, d, seed } => random_regular_bipartite(*n, *d, *seed),
            Self::Graph(g) => Ok(g.clone()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Cycle(n) => format!("cycle:{n}"),
            Self::Regular { n, d, seed } => format!("regular:{n},{d},{seed}"),
            Self::Graph(g) => format!("graph:{}+{}", g.part(0).len(), g.part(1).len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceParams {
    pub preset: Preset,
    pub r: usize,
    pub n: usize,
    pub t: usize,
    pub s: usize,
    pub seed: u64,
    /// Overrides the preset's default `H`.
    pub h: Option<HSpec>,
    pub workers: usize,
}

impl InstanceParams {
    pub fn new(preset: Preset, r: usize, n: usize) -> Self {
        Self {
            preset,
            r,
            n,
            t: 1,
            s: 2,
            seed: 0,
            h: None,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A hypothesis of the claim was checked and does not hold.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub id: &'static str,
    pub claim: String,
    pub formula: String,
    pub hypotheses: Vec<Hypothesis>,
    pub computed: Value,
    pub predicted: Value,
    pub slack: Option<String>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    pub preset: Preset,
    pub r: usize,
    pub n: usize,
    pub t: usize,
    pub s: usize,
    pub seed: u64,
    pub construction: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub instance: Instance,
    /// Construction error when the instance cannot be built.
    pub infeasible: Option<String>,
    pub computed: BTreeMap<String, Value>,
    pub predicted: BTreeMap<String, Value>,
    pub verdicts: Vec<Verdict>,
}

impl BoundsReport {
    pub fn all_pass(&self) -> bool {
        self.infeasible.is_none() && self.verdicts.iter().all(|v| v.status != Status::Fail)
    }

    pub fn any_fail(&self) -> bool {
        self.verdicts.iter().any(|v| v.status == Status::Fail)
    }

    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    pub fn to_table(&self) -> String {
        let i = &self.instance;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "instance: {} (r={}, n={}, t={}, s={}, seed={})",
            i.construction, i.r, i.n, i.t, i.s, i.seed
        );
        if let Some(err) = &self.infeasible {
            let _ = writeln!(out, "INFEASIBLE: {err}");
            return out;
        }
        for (k, v) in &self.computed {
            let _ = writeln!(out, "  computed  {k:<22} {v}");
        }
        for (k, v) in &self.predicted {
            let _ = writeln!(out, "  predicted {k:<22} {v}");
        }
        let _ = writeln!(
            out,
            "{:<4} {:<16} {:<44} {:>14} {:>14}",
            "id", "status", "claim", "computed", "predicted"
        );
        for v in &self.verdicts {
            let status = match v.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::NotApplicable => "NOT-APPLICABLE",
            };
            let _ = writeln!(
                out,
                "{:<4} {:<16} {:<44} {:>14} {:>14}",
                v.id,
                status,
                v.claim,
                v.computed.to_string(),
                v.predicted.to_string()
            );
            for h in &v.hypotheses {
                let _ = writeln!(
                    out,
                    "       hypothesis {:<30} {} ({})",
                    h.name,
                    if h.holds { "holds" } else { "FAILS" },
                    h.detail
                );
            }
        }
        out
    }
}

fn hyp(name: &str, holds: bool, detail: String) -> Hypothesis {
    Hypothesis {
        name: name.to_string(),
        holds,
        detail,
    }
}

/// Builds a verdict; the claim passes only when every hypothesis holds.
#[allow(clippy::too_many_arguments)]
fn verdict(
    id: &'static str,
    claim: &str,
    formula: &str,
    hypotheses: Vec<Hypothesis>,
    computed: Value,
    predicted: Value,
    slack: Option<String>,
    holds: bool,
) -> Verdict {
    let status = if hypotheses.iter().any(|h| !h.holds) {
        Status::NotApplicable
    } else if holds {
        Status::Pass
    } else {
        Status::Fail
    };
    Verdict {
        id,
        claim: claim.to_string(),
        formula: formula.to_string(),
        hypotheses,
        computed,
        predicted,
        slack,
        status,
    }
}

fn is_regular(h: &MultipartiteGraph, d: usize) -> bool {
    h.min_degree() == d && h.max_degree() == d
}

/// Builds the instance named by `params`, runs the exact solvers, and
/// compares against the closed forms.
pub fn verify_instance(params: &InstanceParams) -> BoundsReport {
    let construction = match params.preset {
        Preset::G1 => "g1".to_string(),
        Preset::Bipartite => format!(
            "regular:{},{},{}",
            params.n,
            params.n.saturating_sub(params.t),
            params.seed
        ),
        Preset::Prop22 | Preset::Prop24 => format!("g2(h={})", default_h(params).describe()),
    };
    let mut report = BoundsReport {
        instance: Instance {
            preset: params.preset,
            r: params.r,
            n: params.n,
            t: params.t,
            s: params.s,
            seed: params.seed,
            construction,
        },
        infeasible: None,
        computed: BTreeMap::new(),
        predicted: BTreeMap::new(),
        verdicts: Vec::new(),
    };
    let result = match params.preset {
        Preset::G1 => verify_g1(params, &mut report),
        Preset::Prop22 => verify_prop22(params, &mut report),
        Preset::Prop24 => verify_prop24(params, &mut report),
        Preset::Bipartite => verify_bipartite(params, &mut report),
    };
    if let Err(e) = result {
        report.infeasible = Some(e.to_string());
        report.verdicts.clear();
    }
    report
}

/// Side length `D + (r-2)t/2` of the end blocks, or `0` for odd `r`.
pub fn end_block_size(r: usize, n: usize, t: usize) -> usize {
    if r >= 2 && r.is_multiple_of(2) {
        ceil_block(r, n) + (r - 2) * t / 2
    } else {
        0
    }
}

/// Seeded `rt/2`-regular `H` sized for the end blocks.
pub fn default_regular_h(r: usize, n: usize, t: usize, seed: u64) -> HSpec {
    HSpec::Regular {
        n: end_block_size(r, n, t),
        d: r * t / 2,
        seed,
    }
}

fn default_h(params: &InstanceParams) -> HSpec {
    if let Some(h) = &params.h {
        return h.clone();
    }
    match params.preset {
        Preset::Prop24 => HSpec::Cycle(end_block_size(params.r, params.n, params.t)),
        _ => default_regular_h(params.r, params.n, params.t, params.seed),
    }
}

fn count(params: &InstanceParams, g: &MultipartiteGraph) -> u128 {
    count_its_parallel(g, params.workers).expect("worker pool")
}

fn verify_g1(params: &InstanceParams, report: &mut BoundsReport) -> Result<(), String> {
    let Construction { graph, meta, .. } = build_g1(params.r, params.n).map_err(|e| e.to_string())?;
    let its = count(params, &graph);
    let degree = meta.predicted_max_degree;
    report.computed.insert("it_count".into(), json!(its));
    report.computed.insert("max_degree".into(), json!(graph.max_degree()));
    report.computed.insert("min_degree".into(), json!(graph.min_degree()));
    report.predicted.insert("it_count".into(), json!(0));
    report.predicted.insert("degree".into(), json!(degree));
    report.verdicts.push(verdict(
        "g1",
        "G1 is rn/(2r-2)-regular",
        "d(v) = rn/(2r-2) for all v",
        vec![],
        json!([graph.min_degree(), graph.max_degree()]),
        json!(degree),
        None,
        is_regular(&graph, degree),
    ));
    report.verdicts.push(verdict(
        "c",
        "G1 has no independent transversal",
        "count_its(G1) = 0",
        vec![],
        json!(its),
        json!(0),
        Some(its.to_string()),
        its == 0,
    ));
    Ok(())
}

fn build_h_and_g2(params: &InstanceParams) -> Result<(MultipartiteGraph, Construction), String> {
    let h = default_h(params).build().map_err(|e| e.to_string())?;
    let c = build_g2(params.r, params.n, params.t, &h).map_err(|e| e.to_string())?;
    Ok((h, c))
}

fn verify_prop22(params: &InstanceParams, report: &mut BoundsReport) -> Result<(), String> {
    let (r, n, t) = (params.r, params.n, params.t);
    check_even_r(r, t).map_err(|e| e.to_string())?;
    let (h, c) = build_h_and_g2(params)?;
    let g = &c.graph;
    let d = ceil_block(r, n);
    let target_deg = r * t / 2;
    let regular = is_regular(&h, target_deg);
    let its = count(params, g);
    let upper = f_upper(r, n, t).map_err(|e| e.to_string())?;
    let lower = f_lower(r, n, t).map_err(|e| e.to_string())?;
    let cap = prop22_t_cap(r, n);
    let admissible = prop22_t_admissible(r, n, t);

    report.computed.insert("max_degree".into(), json!(g.max_degree()));
    report.computed.insert("it_count".into(), json!(its));
    report
        .computed
        .insert("h_degrees".into(), json!([h.min_degree(), h.max_degree()]));
    report.predicted.insert("max_degree".into(), json!(d - t));
    report.predicted.insert("f_upper".into(), json!(render(&upper)));
    report
        .predicted
        .insert("f_lower_informational".into(), json!(render(&lower)));
    report.predicted.insert("t_cap".into(), json!(cap));

    let h_regular = || {
        hyp(
            "H is rt/2-regular",
            regular,
            format!(
                "degrees in [{}, {}], rt/2 = {target_deg}",
                h.min_degree(),
                h.max_degree()
            ),
        )
    };
    report.verdicts.push(verdict(
        "a",
        "max degree equals ceil(rn/(2r-2)) - t",
        "Δ(G2) = ⌈rn/(2r-2)⌉ - t",
        vec![h_regular()],
        json!(g.max_degree()),
        json!(d - t),
        Some((d as i64 - t as i64 - g.max_degree() as i64).to_string()),
        g.max_degree() == d - t,
    ));
    let count_q = BigRational::from_integer(BigInt::from(its));
    report.verdicts.push(verdict(
        "b",
        "IT count at most r^2 t (rn/(2r-2))^(r-1)",
        "count_its(G2) ≤ r²t(rn/(2r-2))^(r-1)",
        vec![
            h_regular(),
            hyp(
                "t <= n/(r-1)(sqrt(r/(r-1)) - 1)",
                admissible,
                format!("t = {t}, cap = {cap:.6}"),
            ),
            hyp("t >= 1", t >= 1, format!("t = {t}")),
        ],
        json!(its),
        json!(render(&upper)),
        Some(render(&(&upper - &count_q))),
        count_q <= upper,
    ));
    Ok(())
}

fn verify_prop24(params: &InstanceParams, report: &mut BoundsReport) -> Result<(), String> {
    let (r, n, t, s) = (params.r, params.n, params.t, params.s);
    if s < 2 {
        return Err("s must be at least 2".into());
    }
    let (h, c) = build_h_and_g2(params)?;
    let g = &c.graph;
    let d = ceil_block(r, n);
    let bound = if r == 2 { n - t } else { d - t };
    let min_deg_needed = r * t / 2;
    let kss = find_kss(&h, s).map_err(|e| e.to_string())?;
    let blowup = find_blowup_it(g, s).map_err(|e| e.to_string())?;

    report.computed.insert("max_degree".into(), json!(g.max_degree()));
    report.computed.insert("h_min_degree".into(), json!(h.min_degree()));
    report.computed.insert("blowup_found".into(), json!(blowup.is_some()));
    report.predicted.insert("max_degree_at_most".into(), json!(bound));

    let delta_ok = hyp(
        "min degree of H >= rt/2",
        h.min_degree() >= min_deg_needed,
        format!("δ(H) = {}, rt/2 = {min_deg_needed}", h.min_degree()),
    );
    let kss_free = hyp(
        "H is K_{s,s}-free",
        kss.is_none(),
        match &kss {
            None => format!("no K_{{{s},{s}}} found by exhaustive search"),
            Some(b) => format!("K_{{{s},{s}}} on {:?} x {:?}", b.left, b.right),
        },
    );
    report.verdicts.push(verdict(
        "a",
        "max degree at most ceil(rn/(2r-2)) - t",
        "Δ(G2) ≤ ⌈rn/(2r-2)⌉ - t",
        vec![delta_ok],
        json!(g.max_degree()),
        json!(bound),
        Some((bound as i64 - g.max_degree() as i64).to_string()),
        g.max_degree() <= bound,
    ));
    report.verdicts.push(verdict(
        "d",
        "no s-blowup of an independent transversal",
        "find_blowup_it(G2, s) = none",
        vec![kss_free],
        match &blowup {
            None => Value::Null,
            Some(w) => json!(w.picks),
        },
        Value::Null,
        None,
        blowup.is_none(),
    ));
    Ok(())
}

fn verify_bipartite(params: &InstanceParams, report: &mut BoundsReport) -> Result<(), String> {
    let (n, t) = (params.n, params.t);
    if t > n {
        return Err(format!("t = {t} exceeds n = {n}"));
    }
    if params.r != 2 {
        return Err(format!("bipartite preset needs r = 2, got {}", params.r));
    }
    let g = match &params.h {
        Some(h) => h.build().map_err(|e| e.to_string())?,
        None => random_regular_bipartite(n, n - t, params.seed).map_err(|e| e.to_string())?,
    };
    let its = count(params, &g);
    let expected = (t * n) as u128;
    report.computed.insert("it_count".into(), json!(its));
    report.predicted.insert("it_count".into(), json!(expected));
    report.verdicts.push(verdict(
        "e",
        "(n-t)-regular bipartite graph has exactly tn ITs",
        "count_its(G) = tn",
        vec![
            hyp(
                "G is (n-t)-regular",
                is_regular(&g, n - t),
                format!("degrees in [{}, {}]", g.min_degree(), g.max_degree()),
            ),
            hyp(
                "parts of size n",
                g.balanced_size() == Some(n) && g.r() == 2,
                format!("sizes {:?}", g.parts().iter().map(Vec::len).collect::<Vec<_>>()),
            ),
        ],
        json!(its),
        json!(expected),
        Some((expected as i128 - its as i128).to_string()),
        its == expected,
    ));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        ratio(p, d)
    }

    #[test]
    fn delta_threshold_values() {
        assert_eq!(delta_threshold(4, 6), Ok(4));
        for n in 1..50 {
            assert_eq!(delta_threshold(3, n), Ok(n));
            assert_eq!(delta_threshold(2, n), Ok(n));
        }
        assert_eq!(delta_threshold(5, 6), Ok(4)); // ⌈24/6⌉
        assert_eq!(delta_threshold(1, 6), Err(BoundsError::SmallR { r: 1, min: 2 }));
    }

    #[test]
    fn f_bounds_values() {
        assert_eq!(f_lower(4, 6, 1).unwrap(), q(16, 1));
        assert_eq!(f_upper(4, 6, 1).unwrap(), q(1024, 1));
        assert_eq!(f_upper(4, 21, 1).unwrap(), q(43904, 1));
        for n in 1..20i64 {
            // (1/4)(2n/3)^3 = (2/27) n^3
            assert_eq!(f_lower(4, n as usize, 1).unwrap(), q(2 * n * n * n, 27));
        }
        for r in [4usize, 6, 8] {
            for n in 1..10 {
                assert_eq!(f_lower(r, n, 1).unwrap(), q(1, 4) * block_power(r, n));
            }
        }
        assert_eq!(f_lower(5, 6, 1), Err(BoundsError::OddR(5)));
        assert_eq!(f_upper(2, 6, 1), Err(BoundsError::SmallR { r: 2, min: 4 }));
        assert_eq!(render(&f_lower(4, 1, 1).unwrap()), "2/27");
    }

    #[test]
    fn t_cap_values() {
        let cap = prop22_t_cap(4, 21);
        assert!((cap - 7.0 * ((4.0f64 / 3.0).sqrt() - 1.0)).abs() < 1e-12);
        assert!((cap - 1.083).abs() < 1e-3);
        assert!(prop22_t_admissible(4, 21, 1));
        assert!(!prop22_t_admissible(4, 21, 2));
        assert!((prop22_t_cap(4, 6) - 0.309).abs() < 1e-3);
        assert!(!prop22_t_admissible(4, 6, 1));
        for n in 1..200 {
            assert!(prop22_t_cap(6, n + 1) > prop22_t_cap(6, n));
            for t in 1..5 {
                // exact and float tests agree away from the boundary
                let c = prop22_t_cap(4, n);
                if (t as f64 - c).abs() > 1e-9 {
                    assert_eq!(prop22_t_admissible(4, n, t), (t as f64) < c, "n={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn kst_values() {
        for n in 1..30 {
            assert_eq!(kst_bound(n, 1), n as f64);
        }
        assert_eq!(kst_bound(16, 2), 96.0);
        // alternate evaluation through logarithms
        for n in [5usize, 17, 100, 1234] {
            for s in 2..6usize {
                let (nf, sf) = (n as f64, s as f64);
                let alt = ((sf - 1.0).ln() / sf + (2.0 - 1.0 / sf) * nf.ln()).exp() + sf * nf;
                let got = kst_bound(n, s);
                assert!(((got - alt) / got).abs() < 1e-12, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn erdos_and_blowup() {
        for n in [4usize, 9, 100] {
            assert!((erdos_threshold(2, 2, n) - (n as f64).powf(1.5)).abs() < 1e-9);
        }
        assert_eq!(blowup_constant(4, 2), 64.0 * 2f64.sqrt());
        for n in [9usize, 100, 10_000] {
            let nf = n as f64;
            let want = 2.0 * nf / 3.0 - 64.0 * 2f64.sqrt() * nf.sqrt();
            assert!((blowup_degree_bound(4, 2, n) - want).abs() < 1e-9 * want.abs().max(1.0));
        }
        assert!(blowup_degree_bound(4, 2, 100) < 4.0 * 100.0 / 6.0);
    }

    #[test]
    fn at_most_is_conservative() {
        assert!(at_most(95, 96.0));
        assert!(!at_most(97, 96.0));
        assert!(!at_most(96, 96.0));
    }

    #[test]
    fn hspec_parse() {
        assert_eq!(HSpec::parse("cycle:15"), Ok(HSpec::Cycle(15)));
        assert_eq!(
            HSpec::parse("regular:15,2,7"),
            Ok(HSpec::Regular { n: 15, d: 2, seed: 7 })
        );
        assert!(HSpec::parse("regular:15,2").is_err());
        assert!(HSpec::parse("grid:3").is_err());
    }

    #[test]
    fn verify_g1_preset() {
        let rep = verify_instance(&InstanceParams::new(Preset::G1, 4, 3));
        assert!(rep.all_pass(), "{}", rep.to_table());
        assert_eq!(rep.verdict("c").unwrap().status, Status::Pass);
    }

    #[test]
    fn verify_prop24_preset() {
        let p = InstanceParams {
            t: 1,
            s: 2,
            ..InstanceParams::new(Preset::Prop24, 4, 6)
        };
        let rep = verify_instance(&p);
        assert_eq!(rep.verdict("d").unwrap().status, Status::Pass, "{}", rep.to_table());
        assert_eq!(rep.verdict("a").unwrap().status, Status::Pass);
    }

    #[test]
    fn verify_prop22_outside_cap_is_not_applicable() {
        // t = 1 exceeds the cap for n = 6
        let rep = verify_instance(&InstanceParams::new(Preset::Prop22, 4, 6));
        assert!(rep.infeasible.is_none(), "{:?}", rep.infeasible);
        assert_eq!(rep.verdict("b").unwrap().status, Status::NotApplicable);
        assert_eq!(rep.verdict("a").unwrap().status, Status::Pass);
    }

    #[test]
    fn verify_prop24_with_c4_h_is_not_applicable() {
        // complete H contains K_{2,2}: the claim must not pass
        let p = InstanceParams {
            h: Some(HSpec::Regular { n: 5, d: 5, seed: 0 }),
            ..InstanceParams::new(Preset::Prop24, 4, 6)
        };
        let rep = verify_instance(&p);
        assert_eq!(rep.verdict("d").unwrap().status, Status::NotApplicable);
    }

    #[test]
    fn verify_infeasible_is_reported() {
        let rep = verify_instance(&InstanceParams::new(Preset::G1, 4, 4));
        assert!(rep.infeasible.is_some());
        assert!(!rep.all_pass());
        assert!(!rep.any_fail());
    }

    #[test]
    fn verify_bipartite_preset() {
        for t in 1..=5 {
            let p = InstanceParams {
                t,
                seed: 3,
                ..InstanceParams::new(Preset::Bipartite, 2, 5)
            };
            let rep = verify_instance(&p);
            assert_eq!(rep.verdict("e").unwrap().status, Status::Pass);
        }
    }
}
