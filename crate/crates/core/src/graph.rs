//! Undirected simple graphs and independent computation of every network
//! property the generator can specify.
//!
//! Everything here is computed directly from the edge set (breadth-first
//! search for distances, explicit triangle counting, and so on) so that it
//! can serve as a ground-truth check on solver output.

use std::collections::BTreeSet;

use thiserror::Error;

/// Undirected simple graph on nodes `1..=n`, edges stored as `(i, j)` with
/// `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("node count must be at least 2, got {0}")]
    TooFewNodes(usize),
    #[error("edge ({0}, {1}) out of range for {2} nodes")]
    EdgeOutOfRange(usize, usize, usize),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("canonical labeling supports up to 12 nodes, got {0}")]
    TooLargeForCanonical(usize),
    #[error("malformed graph file: {0}")]
    Parse(String),
}

impl Graph {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewNodes(n));
        }
        Ok(Self {
            n,
            edges: BTreeSet::new(),
        })
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n)?;
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<(), GraphError> {
        if i == j {
            return Err(GraphError::SelfLoop(i));
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        if a < 1 || b > self.n {
            return Err(GraphError::EdgeOutOfRange(i, j, self.n));
        }
        self.edges.insert((a, b));
        Ok(())
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.edges.remove(&(a, b));
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.edges.contains(&(a, b))
    }

    pub fn degree(&self, i: usize) -> usize {
        (1..=self.n).filter(|&j| j != i && self.has_edge(i, j)).count()
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (1..=self.n).filter(|&j| j != i && self.has_edge(i, j)).collect()
    }

    /// Edge-list text: a header line with `n`, then one `i j` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (i, j) in &self.edges {
            out.push_str(&format!("{} {}\n", i, j));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| GraphError::Parse("empty file".into()))?
            .parse()
            .map_err(|_| GraphError::Parse("bad header line".into()))?;
        let mut g = Self::new(n)?;
        for line in lines {
            let mut it = line.split_whitespace();
            let (i, j) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (
                    a.parse()
                        .map_err(|_| GraphError::Parse(format!("bad edge line `{line}`")))?,
                    b.parse()
                        .map_err(|_| GraphError::Parse(format!("bad edge line `{line}`")))?,
                ),
                _ => return Err(GraphError::Parse(format!("bad edge line `{line}`"))),
            };
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// DOT export with node labels showing degrees.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph g {\n");
        for i in 1..=self.n {
            out.push_str(&format!("  n{} [label=\"{}\"];\n", i, self.degree(i)));
        }
        for (i, j) in &self.edges {
            out.push_str(&format!("  n{} -- n{};\n", i, j));
        }
        out.push_str("}\n");
        out
    }

    /// All-pairs shortest-path distances by BFS; `None` when disconnected.
    pub fn distances(&self) -> Vec<Vec<Option<usize>>> {
        let adj: Vec<Vec<usize>> = (0..=self.n)
            .map(|i| if i == 0 { vec![] } else { self.neighbors(i) })
            .collect();
        let mut dist = vec![vec![None; self.n + 1]; self.n + 1];
        for s in 1..=self.n {
            dist[s][s] = Some(0);
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let du = dist[s][u].unwrap();
                for &v in &adj[u] {
                    if dist[s][v].is_none() {
                        dist[s][v] = Some(du + 1);
                        queue.push_back(v);
                    }
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.distances()[1].iter().skip(1).all(Option::is_some)
    }

    /// Number of distinct triangles containing node `i`.
    pub fn triangles_at(&self, i: usize) -> usize {
        let nb = self.neighbors(i);
        let mut count = 0;
        for a in 0..nb.len() {
            for b in a + 1..nb.len() {
                if self.has_edge(nb[a], nb[b]) {
                    count += 1;
                }
            }
        }
        count
    }
}

/// Closed interval value; used for the characteristic path length, whose
/// defining median rule yields a range when the pair count is even.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn intersects(&self, lo: f64, hi: f64, tol: f64) -> bool {
        self.lo <= hi + tol && lo <= self.hi + tol
    }

    /// Distance from this interval to the band `[lo, hi]` (0 when they meet).
    pub fn distance_to_band(&self, lo: f64, hi: f64) -> f64 {
        if self.hi < lo {
            lo - self.hi
        } else if self.lo > hi {
            self.lo - hi
        } else {
            0.0
        }
    }
}

/// All properties of a graph that the generator knows how to prescribe,
/// computed independently of any optimization model. Indexed 1-based; entry
/// 0 of per-node vectors is unused.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub n: usize,
    pub degrees: Vec<usize>,
    /// 2-paths centered at each node: C(degree, 2).
    pub triplets: Vec<usize>,
    /// Triangles containing each node.
    pub triangles: Vec<usize>,
    /// Local clustering coefficient; `None` when degree < 2.
    pub local_cc: Vec<Option<f64>>,
    pub avg_cc: f64,
    /// `None` when the graph has no 2-paths at all.
    pub global_cc: Option<f64>,
    /// Pairwise distances; `None` for disconnected pairs.
    pub dist: Vec<Vec<Option<usize>>>,
    pub connected: bool,
    pub diameter: Option<usize>,
    pub apl: Option<f64>,
    /// Median of the shortest-path multiset, per the interval median rule.
    pub cpl: Option<Interval>,
    /// Closeness centrality per node; `None` when disconnected.
    pub closeness: Vec<Option<f64>>,
    /// Inverse closeness (mean distance to the other nodes).
    pub inv_closeness: Vec<Option<f64>>,
    /// Sum of the degrees of each node's neighbors.
    pub sdn: Vec<usize>,
    /// Number of nodes attaining each degree q in 0..=n-1.
    pub nnd: Vec<usize>,
    /// Average degree of neighbors of the nodes of degree q; `None` when the
    /// degree class is empty or q = 0.
    pub adn: Vec<Option<f64>>,
}

fn choose2(d: usize) -> usize {
    d * d.saturating_sub(1) / 2
}

pub fn compute_report(g: &Graph) -> PropertyReport {
    let n = g.n();
    let mut degrees = vec![0usize; n + 1];
    let mut triangles = vec![0usize; n + 1];
    let mut sdn = vec![0usize; n + 1];
    for i in 1..=n {
        degrees[i] = g.degree(i);
        triangles[i] = g.triangles_at(i);
    }
    for i in 1..=n {
        sdn[i] = g.neighbors(i).iter().map(|&j| degrees[j]).sum();
    }
    let triplets: Vec<usize> = degrees.iter().map(|&d| choose2(d)).collect();
    let local_cc: Vec<Option<f64>> = (0..=n)
        .map(|i| {
            if i >= 1 && degrees[i] >= 2 {
                Some(triangles[i] as f64 / triplets[i] as f64)
            } else {
                None
            }
        })
        .collect();
    // nodes of degree < 2 contribute zero to the average
    let avg_cc = (1..=n)
        .map(|i| local_cc[i].unwrap_or(0.0))
        .sum::<f64>()
        / n as f64;
    let total_triplets: usize = triplets.iter().sum();
    let total_triangles: usize = triangles.iter().sum();
    let global_cc = if total_triplets > 0 {
        Some(total_triangles as f64 / total_triplets as f64)
    } else {
        None
    };

    let dist = g.distances();
    let connected = (1..=n).all(|j| dist[1][j].is_some());
    let mut pair_dists: Vec<usize> = Vec::new();
    if connected {
        for i in 1..=n {
            for j in i + 1..=n {
                pair_dists.push(dist[i][j].unwrap());
            }
        }
        pair_dists.sort_unstable();
    }
    let (diameter, apl, cpl) = if connected {
        let m = pair_dists.len();
        let diameter = *pair_dists.last().unwrap();
        let apl = pair_dists.iter().sum::<usize>() as f64 / m as f64;
        let cpl = if m % 2 == 1 {
            Interval::point(pair_dists[m / 2] as f64)
        } else {
            Interval {
                lo: pair_dists[m / 2 - 1] as f64,
                hi: pair_dists[m / 2] as f64,
            }
        };
        (Some(diameter), Some(apl), Some(cpl))
    } else {
        (None, None, None)
    };

    let mut closeness = vec![None; n + 1];
    let mut inv_closeness = vec![None; n + 1];
    for i in 1..=n {
        if (1..=n).all(|j| dist[i][j].is_some()) {
            let total: usize = (1..=n).filter(|&j| j != i).map(|j| dist[i][j].unwrap()).sum();
            let inv = total as f64 / (n - 1) as f64;
            inv_closeness[i] = Some(inv);
            closeness[i] = Some(1.0 / inv);
        }
    }

    let mut nnd = vec![0usize; n]; // degrees 0..=n-1
    for i in 1..=n {
        nnd[degrees[i]] += 1;
    }
    let adn: Vec<Option<f64>> = (0..n)
        .map(|q| {
            if q == 0 || nnd[q] == 0 {
                None
            } else {
                let total: usize = (1..=n).filter(|&i| degrees[i] == q).map(|i| sdn[i]).sum();
                Some(total as f64 / (q * nnd[q]) as f64)
            }
        })
        .collect();

    PropertyReport {
        n,
        degrees,
        triplets,
        triangles,
        local_cc,
        avg_cc,
        global_cc,
        dist,
        connected,
        diameter,
        apl,
        cpl,
        closeness,
        inv_closeness,
        sdn,
        nnd,
        adn,
    }
}

/// Label-invariant fingerprint: the lexicographically smallest adjacency
/// bitstring over all vertex orderings that list degrees in non-increasing
/// order. Since the degree sequence is an isomorphism invariant, restricting
/// to degree-sorted orderings keeps the key canonical while pruning the
/// search sharply; backtracking additionally prunes on the partial bitstring.
pub fn canonical_key(g: &Graph) -> Result<Vec<u8>, GraphError> {
    let n = g.n();
    if n > 12 {
        return Err(GraphError::TooLargeForCanonical(n));
    }
    let degrees: Vec<usize> = (0..=n).map(|i| if i == 0 { 0 } else { g.degree(i) }).collect();
    let mut adj = vec![0u16; n + 1];
    for (i, j) in g.edges() {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }

    // rows[k] = adjacency bits of the k-th placed vertex towards vertices
    // placed before it, packed little-end first
    let mut best: Option<Vec<u16>> = None;
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut rows: Vec<u16> = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];

    fn search(
        g_adj: &[u16],
        degrees: &[usize],
        n: usize,
        perm: &mut Vec<usize>,
        rows: &mut Vec<u16>,
        used: &mut [bool],
        best: &mut Option<Vec<u16>>,
    ) {
        let k = perm.len();
        if k == n {
            let better = match best {
                None => true,
                Some(b) => rows[..] < b[..],
            };
            if better {
                *best = Some(rows.clone());
            }
            return;
        }
        for v in 1..=n {
            if used[v] {
                continue;
            }
            // enforce non-increasing degree order
            if let Some(&prev) = perm.last() {
                if degrees[v] > degrees[prev] {
                    continue;
                }
            } else if (1..=n).any(|u| degrees[u] > degrees[v]) {
                continue;
            }
            let mut row: u16 = 0;
            for (pos, &u) in perm.iter().enumerate() {
                if g_adj[v] & (1 << u) != 0 {
                    row |= 1 << pos;
                }
            }
            // prefix pruning against the incumbent
            if let Some(b) = best {
                if rows[..k] == b[..k] && row > b[k] {
                    continue;
                }
                if rows[..k] > b[..k] {
                    continue;
                }
            }
            used[v] = true;
            perm.push(v);
            rows.push(row);
            search(g_adj, degrees, n, perm, rows, used, best);
            rows.pop();
            perm.pop();
            used[v] = false;
        }
    }

    search(&adj, &degrees, n, &mut perm, &mut rows, &mut used, &mut best);
    let rows = best.expect("at least one ordering exists");
    let mut key = Vec::with_capacity(1 + 2 * n);
    key.push(n as u8);
    for r in rows {
        key.extend_from_slice(&r.to_le_bytes());
    }
    Ok(key)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::from_edges(3, [(1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn p3() -> Graph {
        Graph::from_edges(3, [(1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn report_on_triangle() {
        let r = compute_report(&k3());
        assert_eq!(&r.degrees[1..], &[2, 2, 2]);
        assert_eq!(r.local_cc[1], Some(1.0));
        assert_eq!(r.global_cc, Some(1.0));
        assert_eq!(r.diameter, Some(1));
        assert_eq!(r.adn[2], Some(2.0));
    }

    #[test]
    fn report_on_path() {
        let r = compute_report(&p3());
        assert_eq!(r.cpl, Some(Interval::point(1.0)));
        assert!((r.apl.unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.closeness[2], Some(1.0));
        assert!((r.closeness[1].unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn disconnected_scalars_undefined() {
        let g = Graph::from_edges(4, [(1, 2)]).unwrap();
        let r = compute_report(&g);
        assert!(!r.connected);
        assert!(r.diameter.is_none() && r.apl.is_none() && r.cpl.is_none());
        assert!(r.closeness[3].is_none());
    }

    #[test]
    fn canonical_key_relabelings() {
        let a = Graph::from_edges(3, [(1, 2), (2, 3)]).unwrap();
        let b = Graph::from_edges(3, [(1, 2), (1, 3)]).unwrap();
        assert_eq!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
        assert_ne!(canonical_key(&a).unwrap(), canonical_key(&k3()).unwrap());
    }

    #[test]
    fn canonical_classes_on_four_nodes() {
        // 64 labeled graphs on 4 nodes fall into 11 isomorphism classes
        let mut keys = std::collections::HashSet::new();
        for mask in 0u32..64 {
            let pairs = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, e)| *e);
            let g = Graph::from_edges(4, edges).unwrap();
            keys.insert(canonical_key(&g).unwrap());
        }
        assert_eq!(keys.len(), 11);
    }

    #[test]
    fn canonical_too_large() {
        let g = Graph::new(13).unwrap();
        assert!(matches!(
            canonical_key(&g),
            Err(GraphError::TooLargeForCanonical(13))
        ));
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = Graph::from_edges(5, [(1, 2), (3, 5)]).unwrap();
        let parsed = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(g, parsed);
        assert!(g.to_dot().contains("n3 -- n5"));
    }

    #[test]
    fn handshake_invariant() {
        let g = Graph::from_edges(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)]).unwrap();
        let r = compute_report(&g);
        assert_eq!(r.degrees[1..].iter().sum::<usize>(), 2 * g.num_edges());
    }
}
