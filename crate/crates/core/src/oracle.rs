//! Exhaustive ground truth for small node counts.
//!
//! Every labeled graph on `n` nodes is enumerated, its properties computed
//! directly from the edge set, and the total specification slack evaluated
//! with the same semantics the MILP uses — so the optimizer's reported
//! optimum can be compared against an independent brute-force minimum.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{canonical_key, compute_report, Graph, Interval, PropertyReport};
use crate::spec::{
    NetworkSpec, ObjectiveSpec, PropertyConstraint, SecondaryCriterion, SymmetryConfig,
};
use crate::verify::check_spec;

/// Hard cap: enumeration is 2^C(n,2) labeled graphs.
pub const MAX_ORACLE_N: usize = 6;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle enumeration supports at most {MAX_ORACLE_N} nodes, got {0}")]
    TooLarge(usize),
    #[error("oracle evaluation requires the slack-minimization objective")]
    UnsupportedObjective,
}

/// All labeled simple graphs on `n` nodes, in lexicographic edge-mask order.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>, OracleError> {
    if n > MAX_ORACLE_N {
        return Err(OracleError::TooLarge(n));
    }
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    let total = 1usize << pairs.len();
    let mut out = Vec::with_capacity(total);
    for mask in 0..total {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e);
        out.push(Graph::from_edges(n, edges).expect("valid enumeration edges"));
    }
    Ok(out)
}

/// Number of isomorphism classes among all graphs on `n` nodes.
pub fn count_classes(n: usize) -> Result<usize, OracleError> {
    let mut keys = BTreeSet::new();
    for g in enumerate_graphs(n)? {
        keys.insert(canonical_key(&g).expect("within canonical size limit"));
    }
    Ok(keys.len())
}

/// One representative per isomorphism class whose true properties satisfy
/// the spec (independent of any MILP semantics).
pub fn feasible_classes(spec: &NetworkSpec, tol: f64) -> Result<Vec<Graph>, OracleError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in enumerate_graphs(spec.n)? {
        if check_spec(&g, spec, tol).passed
            && seen.insert(canonical_key(&g).expect("within canonical size limit"))
        {
            out.push(g);
        }
    }
    Ok(out)
}

/// Which optional machinery the formulation would attach for this spec;
/// the machinery carries hard side constraints the slack mirror must honor.
pub(crate) struct ModelSemantics {
    /// Some(degrees) for the fixed linear clustering form; `None` with
    /// clustering constraints present means the fractional form.
    pub(crate) fixed_clustering: Option<Vec<usize>>,
    pub(crate) paths_encoded: bool,
    /// Hard degree bounds implied by the neighbor-degree machinery.
    pub(crate) class_bounds: Option<(usize, usize)>,
}

impl ModelSemantics {
    pub(crate) fn from_spec(spec: &NetworkSpec) -> Self {
        let degseq = spec.degree_sequence().map(|d| d.to_vec());
        let wants_cc = spec.constraints.iter().any(|c| {
            matches!(
                c,
                PropertyConstraint::AvgClustering { .. }
                    | PropertyConstraint::GlobalClustering { .. }
            )
        }) || matches!(
            spec.symmetry,
            SymmetryConfig::PrimarySecondary { secondary: SecondaryCriterion::LocalClustering }
        );
        let fixed_clustering = if wants_cc { degseq } else { None };
        let paths_encoded = spec.constraints.iter().any(|c| {
            matches!(
                c,
                PropertyConstraint::AvgPathLength { .. }
                    | PropertyConstraint::CharPathLength { .. }
                    | PropertyConstraint::Diameter { .. }
                    | PropertyConstraint::ClosenessSequence { .. }
            )
        }) || matches!(
            spec.symmetry,
            SymmetryConfig::PrimarySecondary {
                secondary: SecondaryCriterion::InverseCloseness
                    | SecondaryCriterion::DistanceToLast,
            }
        );
        let wants_classes = spec
            .constraints
            .iter()
            .any(|c| matches!(c, PropertyConstraint::AdnByDegree { .. }))
            || matches!(
                spec.symmetry,
                SymmetryConfig::PrimarySecondary {
                    secondary: SecondaryCriterion::SumNeighborDegrees,
                }
            );
        let class_bounds = wants_classes.then(|| {
            let lo = spec
                .constraints
                .iter()
                .find_map(|c| match c {
                    PropertyConstraint::DegreeBounds { nodes: None, lo, .. } => {
                        Some(*lo as usize)
                    }
                    _ => None,
                })
                .unwrap_or(0);
            let hi = spec
                .constraints
                .iter()
                .find_map(|c| match c {
                    PropertyConstraint::DegreeBounds { nodes: None, hi, .. } => {
                        Some(*hi as usize)
                    }
                    _ => None,
                })
                .unwrap_or(spec.n - 1);
            (lo, hi)
        });
        Self {
            fixed_clustering,
            paths_encoded,
            class_bounds,
        }
    }
}

pub(crate) fn band_dist(v: f64, lo: f64, hi: f64) -> f64 {
    if v < lo {
        lo - v
    } else if v > hi {
        v - hi
    } else {
        0.0
    }
}

/// Minimum total slack the MILP would assign to this labeled graph, or
/// `None` when the graph is infeasible for the model itself (hard side
/// constraints such as shortest-path connectivity cannot be relaxed).
pub fn model_slack(g: &Graph, spec: &NetworkSpec) -> Option<f64> {
    let sem = ModelSemantics::from_spec(spec);
    let r = compute_report(g);
    if sem.paths_encoded && !r.connected {
        return None;
    }
    if let Some((lo, hi)) = sem.class_bounds {
        if r.degrees[1..].iter().any(|&d| d < lo || d > hi) {
            return None;
        }
    }
    if let Some(d) = &sem.fixed_clustering {
        // pcc columns are capped at 1; more triangles than target triplets
        // cannot be represented
        for i in 1..=g.n() {
            let cap = (d[i - 1] * (d[i - 1] - 1) / 2) as f64;
            if r.triangles[i] as f64 > cap + 1e-9 {
                return None;
            }
        }
    }
    let mut total = 0.0;
    for c in &spec.constraints {
        total += constraint_slack(g, &r, c, &sem)?;
    }
    Some(total)
}

pub(crate) fn constraint_slack(
    g: &Graph,
    r: &PropertyReport,
    c: &PropertyConstraint,
    sem: &ModelSemantics,
) -> Option<f64> {
    let n = g.n();
    Some(match c {
        PropertyConstraint::DegreeBounds { nodes, lo, hi } => {
            let targets: Vec<usize> = match nodes {
                Some(v) => v.clone(),
                None => (1..=n).collect(),
            };
            targets
                .iter()
                .map(|&i| band_dist(r.degrees[i] as f64, *lo, *hi))
                .sum()
        }
        PropertyConstraint::DegreeSequence { values } => (1..=n)
            .map(|i| (r.degrees[i] as f64 - values[i - 1] as f64).abs())
            .sum(),
        PropertyConstraint::AvgClustering { band } => {
            let d = sem.fixed_clustering.as_ref()?;
            let mut acc = 0.0;
            for i in 1..=n {
                let cap = (d[i - 1] * (d[i - 1] - 1) / 2) as f64;
                acc += r.triangles[i] as f64 / cap;
            }
            band_dist(acc / n as f64, band.lo, band.hi)
        }
        PropertyConstraint::GlobalClustering { band } => {
            if let Some(d) = &sem.fixed_clustering {
                let caps: f64 = d.iter().map(|&di| (di * (di - 1) / 2) as f64).sum();
                let tri: f64 = r.triangles[1..].iter().map(|&t| t as f64).sum();
                band_dist(tri / caps, band.lo, band.hi)
            } else {
                // cross-multiplied fractional form
                let tri: f64 = r.triangles[1..].iter().map(|&t| t as f64).sum();
                let paths: f64 = r.triplets[1..].iter().map(|&t| t as f64).sum();
                f64::max(0.0, f64::max(band.lo * paths - tri, tri - band.hi * paths))
            }
        }
        PropertyConstraint::AvgPathLength { band } => band_dist(r.apl?, band.lo, band.hi),
        PropertyConstraint::CharPathLength { band } => {
            let iv: Interval = r.cpl?;
            f64::max(0.0, f64::max(band.lo - iv.hi, iv.lo - band.hi))
        }
        PropertyConstraint::Diameter { band } => {
            let diam = r.diameter? as f64;
            if diam > band.hi {
                // the shared shift cannot push every pair below the cap
                return None;
            }
            f64::max(0.0, band.lo - diam)
        }
        PropertyConstraint::ClosenessSequence { bands } => {
            // per-node shared slack, one-to-one band assignment: min-cost
            // perfect matching on |inv closeness - inv band| distances
            let mut cost = vec![vec![0.0; n]; n];
            for i in 1..=n {
                let v = r.inv_closeness[i]?;
                for (m, b) in bands.iter().enumerate() {
                    cost[i - 1][m] = band_dist(v, 1.0 / b.hi, 1.0 / b.lo);
                }
            }
            min_cost_assignment(&cost)
        }
        PropertyConstraint::AdnByDegree { bands } => {
            let (lo, hi) = sem.class_bounds?;
            let mut total = 0.0;
            for (q, band) in bands {
                let q = *q;
                if q < lo.max(1) || q > hi {
                    continue;
                }
                let class: Vec<usize> =
                    (1..=n).filter(|&i| r.degrees[i] == q).collect();
                if class.is_empty() {
                    continue;
                }
                let sdn_sum: f64 = class.iter().map(|&i| r.sdn[i] as f64).sum();
                let count = class.len() as f64;
                total += f64::max(
                    0.0,
                    f64::max(
                        band.lo * q as f64 * count - sdn_sum,
                        sdn_sum - band.hi * q as f64 * count,
                    ),
                );
            }
            total
        }
        PropertyConstraint::MinDegreeSpan { span } => {
            let diff = r.degrees[1] as f64 - r.degrees[n] as f64;
            band_dist(diff, *span as f64, (n - 1) as f64)
        }
        PropertyConstraint::NonNull => band_dist(r.degrees[1] as f64, 1.0, (n - 1) as f64),
    })
}

/// Min-cost perfect matching on a square cost matrix via bitmask DP.
fn min_cost_assignment(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    let mut dp = vec![f64::INFINITY; 1 << n];
    dp[0] = 0.0;
    for mask in 0..(1usize << n) - 1 {
        if dp[mask].is_infinite() {
            continue;
        }
        let i = mask.count_ones() as usize; // assign row i next
        for m in 0..n {
            if mask >> m & 1 == 0 {
                let nm = mask | 1 << m;
                let c = dp[mask] + cost[i][m];
                if c < dp[nm] {
                    dp[nm] = c;
                }
            }
        }
    }
    dp[(1 << n) - 1]
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Isomorphism classes whose true properties satisfy the spec.
    pub classes_feasible: usize,
    pub labeled_feasible: usize,
    /// Brute-force minimum model slack; `None` when every labeled graph is
    /// model-infeasible.
    pub min_model_slack: Option<f64>,
    pub witness: Option<Graph>,
}

/// Brute-force evaluation of a slack-minimization spec.
pub fn evaluate(spec: &NetworkSpec, tol: f64) -> Result<OracleResult, OracleError> {
    if !matches!(spec.objective, ObjectiveSpec::MinSlack) {
        return Err(OracleError::UnsupportedObjective);
    }
    let mut classes = BTreeSet::new();
    let mut labeled = 0usize;
    let mut best: Option<(f64, Graph)> = None;
    for g in enumerate_graphs(spec.n)? {
        if check_spec(&g, spec, tol).passed {
            labeled += 1;
            classes.insert(canonical_key(&g).expect("within canonical size limit"));
        }
        if let Some(s) = model_slack(&g, spec) {
            if best.as_ref().map_or(true, |(b, _)| s < *b - 1e-12) {
                best = Some((s, g));
            }
        }
    }
    let (min_model_slack, witness) = match best {
        Some((s, g)) => (Some(s), Some(g)),
        None => (None, None),
    };
    Ok(OracleResult {
        classes_feasible: classes.len(),
        labeled_feasible: labeled,
        min_model_slack,
        witness,
    })
}
