//! Rebuilds a complete model assignment from a concrete graph.
//!
//! Every auxiliary variable of the formulation (motif indicators, degree
//! copies, shortest-path flows and potentials, counting and assignment
//! binaries) has a closed-form value once the edge set is fixed, so a
//! zero-slack heuristic graph can be turned into a full MILP solution
//! without invoking the LP solver at all. The result is validated against
//! every constraint of the model before being accepted, so a construction
//! gap can never produce a wrong answer — only a fallback to search.

use std::collections::BTreeMap;

use crate::formulation::BuildOutput;
use crate::graph::{compute_report, Graph, PropertyReport};
use crate::spec::{NetworkSpec, PropertyConstraint};

const TOL: f64 = 1e-7;

struct Ctx<'a> {
    g: &'a Graph,
    r: PropertyReport,
    degseq: Option<Vec<usize>>,
    /// Sorted pair distances and the chosen median value for the cpl gadget.
    pcpl: Option<f64>,
    /// Pairs with the "at or below the median" indicator set.
    r_plus: BTreeMap<(usize, usize), f64>,
    r_minus: BTreeMap<(usize, usize), f64>,
    /// The one pair chosen to witness the diameter lower bound.
    psi_pair: Option<(usize, usize)>,
    /// Closeness band index assigned to each node (1-based bands).
    clc_assign: BTreeMap<usize, usize>,
}

/// Directed edges of one shortest path from `i` to `j`.
fn shortest_path_edges(
    g: &Graph,
    r: &PropertyReport,
    i: usize,
    j: usize,
) -> Option<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    let mut cur = j;
    while cur != i {
        let d = r.dist[i][cur]?;
        let prev = g
            .neighbors(cur)
            .into_iter()
            .find(|&nb| r.dist[i][nb] == Some(d - 1))?;
        edges.push((prev, cur));
        cur = prev;
    }
    Some(edges)
}

/// Zero-cost perfect assignment of nodes to closeness bands via Kuhn's
/// augmenting paths; `None` when no perfect zero-cost matching exists.
fn zero_cost_matching(allowed: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = allowed.len();
    let mut band_of_node = vec![usize::MAX; n];
    let mut node_of_band = vec![usize::MAX; n];
    fn try_augment(
        i: usize,
        allowed: &[Vec<bool>],
        node_of_band: &mut [usize],
        band_of_node: &mut [usize],
        visited: &mut [bool],
    ) -> bool {
        for m in 0..allowed.len() {
            if allowed[i][m] && !visited[m] {
                visited[m] = true;
                if node_of_band[m] == usize::MAX
                    || try_augment(node_of_band[m], allowed, node_of_band, band_of_node, visited)
                {
                    node_of_band[m] = i;
                    band_of_node[i] = m;
                    return true;
                }
            }
        }
        false
    }
    for i in 0..n {
        let mut visited = vec![false; n];
        if !try_augment(i, allowed, &mut node_of_band, &mut band_of_node, &mut visited) {
            return None;
        }
    }
    Some(band_of_node)
}

fn prepare<'a>(out: &BuildOutput, spec: &NetworkSpec, g: &'a Graph) -> Option<Ctx<'a>> {
    let r = compute_report(g);
    let n = g.n();
    let degseq = spec.degree_sequence().map(|d| d.to_vec());

    let mut ctx = Ctx {
        g,
        r,
        degseq,
        pcpl: None,
        r_plus: BTreeMap::new(),
        r_minus: BTreeMap::new(),
        psi_pair: None,
        clc_assign: BTreeMap::new(),
    };
    let r = &ctx.r;

    if out.registry.pcpl.is_some() {
        let iv = r.cpl?;
        // the gadget needs the median value itself; intersect with the band
        // so the slack-free choice also satisfies the specification rows
        let band = spec.constraints.iter().find_map(|c| match c {
            PropertyConstraint::CharPathLength { band } => Some(*band),
            _ => None,
        });
        let (mut lo, mut hi) = (iv.lo, iv.hi);
        if let Some(b) = band {
            lo = lo.max(b.lo);
            hi = hi.min(b.hi);
        }
        if lo > hi + TOL {
            return None;
        }
        let pcpl = lo.min(hi);
        let mut pairs: Vec<((usize, usize), usize)> = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                pairs.push(((i, j), r.dist[i][j]?));
            }
        }
        pairs.sort_by_key(|&(p, d)| (d, p));
        let num_pairs = pairs.len();
        let parity = num_pairs % 2;
        let need = (num_pairs + parity) / 2;
        for (k, &(p, _)) in pairs.iter().enumerate() {
            ctx.r_plus.insert(p, if k < need { 1.0 } else { 0.0 });
            ctx.r_minus
                .insert(p, if k >= num_pairs - need { 1.0 } else { 0.0 });
        }
        ctx.pcpl = Some(pcpl);
    }

    let has_diameter = spec
        .constraints
        .iter()
        .any(|c| matches!(c, PropertyConstraint::Diameter { .. }));
    if has_diameter {
        let diam = r.diameter?;
        'outer: for i in 1..=n {
            for j in i + 1..=n {
                if r.dist[i][j] == Some(diam) {
                    ctx.psi_pair = Some((i, j));
                    break 'outer;
                }
            }
        }
    }

    if let Some(PropertyConstraint::ClosenessSequence { bands }) = spec
        .constraints
        .iter()
        .find(|c| matches!(c, PropertyConstraint::ClosenessSequence { .. }))
    {
        let mut allowed = vec![vec![false; n]; n];
        for i in 1..=n {
            let v = r.inv_closeness[i]?;
            for (m, b) in bands.iter().enumerate() {
                allowed[i - 1][m] = v >= 1.0 / b.hi - TOL && v <= 1.0 / b.lo + TOL;
            }
        }
        let assign = zero_cost_matching(&allowed)?;
        for i in 1..=n {
            ctx.clc_assign.insert(i, assign[i - 1] + 1);
        }
    }

    Some(ctx)
}

fn value_for(name: &str, ctx: &Ctx) -> Option<f64> {
    let g = ctx.g;
    let r = &ctx.r;
    let n = g.n();
    let toks: Vec<&str> = name.split('_').collect();
    let idx = |k: usize| -> Option<usize> { toks.get(k)?.parse().ok() };
    let edge01 = |i: usize, j: usize| if g.has_edge(i, j) { 1.0 } else { 0.0 };
    Some(match toks[0] {
        "x" => edge01(idx(1)?, idx(2)?),
        "pd" => r.degrees[idx(1)?] as f64,
        "ytr" => {
            let (i, j, k) = (idx(1)?, idx(2)?, idx(3)?);
            edge01(i, j) * edge01(i, k) * edge01(j, k)
        }
        "ytp" => {
            let (c, a, b) = (idx(1)?, idx(2)?, idx(3)?);
            edge01(c, a) * edge01(c, b)
        }
        "yclq" => {
            let v = [idx(1)?, idx(2)?, idx(3)?, idx(4)?];
            let mut p = 1.0;
            for a in 0..4 {
                for b in a + 1..4 {
                    p *= edge01(v[a], v[b]);
                }
            }
            p
        }
        "ystr" => {
            let (c, v) = (idx(1)?, [idx(2)?, idx(3)?, idx(4)?]);
            let mut p = 1.0;
            for &l in &v {
                p *= edge01(c, l);
            }
            for a in 0..3 {
                for b in a + 1..3 {
                    p *= 1.0 - edge01(v[a], v[b]);
                }
            }
            p
        }
        "pntr" => r.triangles[idx(1)?] as f64,
        "pntp" => r.triplets[idx(1)?] as f64,
        "pcc" => {
            let i = idx(1)?;
            let d = ctx.degseq.as_ref()?;
            let cap = (d[i - 1] * d[i - 1].saturating_sub(1) / 2) as f64;
            r.triangles[i] as f64 / cap
        }
        "pacc" => {
            let d = ctx.degseq.as_ref()?;
            (1..=n)
                .map(|i| {
                    let cap = (d[i - 1] * d[i - 1].saturating_sub(1) / 2) as f64;
                    r.triangles[i] as f64 / cap
                })
                .sum::<f64>()
                / n as f64
        }
        "pgcc" => {
            let d = ctx.degseq.as_ref()?;
            let caps: f64 = d.iter().map(|&di| (di * di.saturating_sub(1) / 2) as f64).sum();
            r.triangles[1..].iter().map(|&t| t as f64).sum::<f64>() / caps
        }
        "w" => r.dist[idx(1)?][idx(2)?]? as f64,
        "f" => {
            let (i, j, k, l) = (idx(1)?, idx(2)?, idx(3)?, idx(4)?);
            let path = shortest_path_edges(g, r, i, j)?;
            if path.contains(&(k, l)) {
                1.0
            } else {
                0.0
            }
        }
        // dual potential for pair (i, j): distance to the sink j
        "t" => r.dist[idx(3)?][idx(2)?]? as f64,
        "u" => 0.0,
        "v" => {
            let (j, k, l) = (idx(2)?, idx(3)?, idx(4)?);
            let tk = r.dist[k][j]? as f64;
            let tl = r.dist[l][j]? as f64;
            (1.0 - (tk - tl).abs()).min(0.0)
        }
        "papl" => r.apl?,
        "pcpl" => ctx.pcpl?,
        "rcpl" => {
            let p = (idx(2)?, idx(3)?);
            match toks[1] {
                "plus" => *ctx.r_plus.get(&p)?,
                "minus" => *ctx.r_minus.get(&p)?,
                _ => return None,
            }
        }
        "piclc" => r.inv_closeness[idx(1)?]?,
        "psi" => {
            if ctx.psi_pair == Some((idx(1)?, idx(2)?)) {
                1.0
            } else {
                0.0
            }
        }
        "qclc" => {
            let (i, m) = (idx(1)?, idx(2)?);
            if *ctx.clc_assign.get(&i)? == m {
                1.0
            } else {
                0.0
            }
        }
        "pdp" => {
            let (a, b) = (idx(1)?, idx(2)?);
            if g.has_edge(a, b) {
                r.degrees[b] as f64
            } else {
                0.0
            }
        }
        "psdn" => r.sdn[idx(1)?] as f64,
        "z" => {
            let (q, i) = (idx(1)?, idx(2)?);
            if r.degrees[i] >= q {
                1.0
            } else {
                0.0
            }
        }
        "pnnd" => {
            let q = idx(1)?;
            (1..=n).filter(|&i| r.degrees[i] == q).count() as f64
        }
        "psdnp" => {
            let (q, i) = (idx(1)?, idx(2)?);
            if r.degrees[i] == q {
                r.sdn[i] as f64
            } else {
                0.0
            }
        }
        // anything else is a slack column, zero at a zero-slack solution
        _ => 0.0,
    })
}

/// Builds and validates a complete assignment placing the graph into the
/// model; `None` when the construction cannot represent the graph (the
/// caller then falls back to the regular search).
pub fn assignment_for_graph(
    out: &BuildOutput,
    spec: &NetworkSpec,
    g: &Graph,
) -> Option<Vec<f64>> {
    let ctx = prepare(out, spec, g)?;
    let mut x = vec![0.0; out.model.num_vars()];
    for (j, var) in out.model.variables().iter().enumerate() {
        x[j] = value_for(&var.name, &ctx)?;
    }
    match out.model.check_feasible(&x, TOL) {
        Ok(()) => Some(x),
        Err(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulation::build;
    use crate::spec::{Band, NetworkSpec, PropertyConstraint};

    #[test]
    fn reconstructs_cycle_for_path_spec() {
        let spec = NetworkSpec::new(
            5,
            vec![
                PropertyConstraint::DegreeSequence { values: vec![2, 2, 2, 2, 2] },
                PropertyConstraint::AvgPathLength { band: Band::point(1.5) },
                PropertyConstraint::CharPathLength { band: Band::new(1.0, 2.0) },
                PropertyConstraint::Diameter { band: Band::point(2.0) },
            ],
        );
        let out = build(&spec).unwrap();
        let g = Graph::from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap();
        let x = assignment_for_graph(&out, &spec, &g).expect("C5 reconstructs");
        // slack objective must be exactly zero
        let obj: f64 = out
            .model
            .objective()
            .unwrap()
            .terms
            .iter()
            .map(|&(id, a)| a * x[id.0])
            .sum();
        assert!(obj.abs() < 1e-9);
    }

    #[test]
    fn rejects_graph_violating_spec() {
        let spec = NetworkSpec::new(
            4,
            vec![PropertyConstraint::DegreeSequence { values: vec![2, 2, 2, 2] }],
        );
        let out = build(&spec).unwrap();
        // a path has degrees {2,2,1,1}: the degree slacks would be nonzero,
        // which the slack columns (all constructed as zero) cannot absorb
        let g = Graph::from_edges(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(assignment_for_graph(&out, &spec, &g).is_none());
    }
}
