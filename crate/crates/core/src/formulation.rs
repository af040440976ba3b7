//! Translation of a [`NetworkSpec`] into a [`MilpModel`].
//!
//! Each property family is encoded by an independent block of variables and
//! constraints, appended only when the specification demands it. Edge
//! existence is captured by binary `x` variables; motifs by `y` variables
//! pinned via per-edge inequalities; shortest paths by a primal flow model
//! and its dual coupled through strong-duality equalities; nodal statistics
//! by threshold indicators and gated copies. Specification bands are relaxed
//! with nonnegative slack pairs whose sum is minimized, so a strictly
//! positive optimum certifies an unattainable specification.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::Graph;
use crate::milp::{MilpModel, ModelError, ObjSense, Sense, VarId, VarKind};
use crate::spec::{
    MotifMode, NetworkSpec, ObjectiveProperty, ObjectiveSpec, PropertyConstraint,
    SecondaryCriterion, SymmetryConfig,
};

/// Branch priority for edge variables: decide the graph first.
pub const PRIO_EDGE: i32 = 100;
/// Priority for auxiliary discrete variables (psi, q, z, rcpl, aggregated y).
pub const PRIO_AUX: i32 = 50;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Spec(#[from] crate::spec::SpecError),
    #[error("node count must be at least 2, got {0}")]
    TooFewNodes(usize),
    #[error("motif node indices must be distinct and within 1..={0}")]
    BadMotifNodes(usize),
    #[error("shortest path endpoints must differ")]
    SamePairEndpoints,
    #[error("path statistics require shortest paths encoded for all pairs")]
    MissingPairCoverage,
    #[error("average clustering requires a fixed degree sequence with minimum degree 2")]
    AvgClusteringNeedsFixedDegrees,
    #[error("fixed-form clustering requires minimum degree 2 in the sequence")]
    FixedClusteringNeedsDegreeTwo,
    #[error(
        "global clustering without a degree sequence needs a degree lower bound of at least 2 \
         to guarantee a positive triplet count"
    )]
    FractionalNeedsGuard,
    #[error("objective property requires a fixed degree sequence")]
    ObjectiveNeedsDegreeSequence,
    #[error("secondary symmetry criterion requires its property to be encodable")]
    SymmetryNeedsProperty,
    #[error("sequence assignment needs at most as many bands as nodes")]
    TooManyBands,
    #[error("statistics encoder needs a nonempty candidate set")]
    EmptyCandidateSet,
    #[error("degree class bounds out of range")]
    BadDegreeClassBounds,
    #[error("per-node degree bounds cannot be combined with symmetry breaking")]
    NodeSubsetWithSymmetry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotifKind {
    /// Open-or-closed 2-path along `a` -- `center` -- `b`.
    TwoPath { center: usize, a: usize, b: usize },
    Triangle(usize, usize, usize),
    Clique4(usize, usize, usize, usize),
    /// `center` adjacent to all three leaves, leaves mutually non-adjacent.
    Star4 { center: usize, leaves: [usize; 3] },
}

/// One slack pair belonging to a named specification band.
#[derive(Debug, Clone)]
pub struct SlackGroup {
    pub label: String,
    pub vars: Vec<VarId>,
}

/// Bidirectional map between semantic keys and model columns, plus the
/// handles the solver needs to extract graphs and report deviations.
#[derive(Debug, Clone, Default)]
pub struct VariableRegistry {
    pub n: usize,
    pub x: BTreeMap<(usize, usize), VarId>,
    pub pd: BTreeMap<usize, VarId>,
    pub pntr: BTreeMap<usize, VarId>,
    pub pntp: BTreeMap<usize, VarId>,
    pub pcc: BTreeMap<usize, VarId>,
    pub pacc: Option<VarId>,
    pub pgcc: Option<VarId>,
    pub w: BTreeMap<(usize, usize), VarId>,
    pub papl: Option<VarId>,
    pub pcpl: Option<VarId>,
    pub piclc: BTreeMap<usize, VarId>,
    pub psdn: BTreeMap<usize, VarId>,
    pub pnnd: BTreeMap<usize, VarId>,
    pub z: BTreeMap<(usize, usize), VarId>,
    pub slack_groups: Vec<SlackGroup>,
}

impl VariableRegistry {
    pub fn all_slacks(&self) -> Vec<VarId> {
        self.slack_groups
            .iter()
            .flat_map(|g| g.vars.iter().copied())
            .collect()
    }

    /// Reads the graph out of a variable assignment via the `x` columns.
    pub fn extract_graph(&self, assignment: &dyn Fn(VarId) -> f64) -> Result<Graph, crate::graph::GraphError> {
        let mut g = Graph::new(self.n)?;
        for (&(i, j), &id) in &self.x {
            if assignment(id) > 0.5 {
                g.add_edge(i, j)?;
            }
        }
        Ok(g)
    }
}

pub struct ModelBuilder {
    pub model: MilpModel,
    pub registry: VariableRegistry,
    n: usize,
    motif_mode: MotifMode,
    /// When false, specification bands are hard (extremum objectives).
    slacks_enabled: bool,
    pairs_encoded: bool,
    sdn_encoded: bool,
}

fn pair(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

fn choose2(d: usize) -> f64 {
    (d * d.saturating_sub(1) / 2) as f64
}

impl ModelBuilder {
    pub fn new(n: usize, motif_mode: MotifMode) -> Result<Self, BuildError> {
        if n < 2 {
            return Err(BuildError::TooFewNodes(n));
        }
        Ok(Self {
            model: MilpModel::new(),
            registry: VariableRegistry {
                n,
                ..Default::default()
            },
            n,
            motif_mode,
            slacks_enabled: true,
            pairs_encoded: false,
            sdn_encoded: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn all_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                out.push((i, j));
            }
        }
        out
    }

    // ---- edges ---------------------------------------------------------

    pub fn encode_edges(&mut self) -> Result<(), BuildError> {
        for (i, j) in self.all_pairs() {
            let id = self.model.add_variable(
                format!("x_{i}_{j}"),
                VarKind::Binary,
                0.0,
                1.0,
                PRIO_EDGE,
            )?;
            self.registry.x.insert((i, j), id);
        }
        Ok(())
    }

    pub fn x(&self, i: usize, j: usize) -> VarId {
        self.registry.x[&pair(i, j)]
    }

    // ---- motifs --------------------------------------------------------

    /// Emits the indicator variable for one motif together with the
    /// constraint block pinning it to the product of its edge conditions.
    pub fn encode_motif(&mut self, kind: MotifKind, mode: MotifMode) -> Result<VarId, BuildError> {
        let (name, present, absent) = self.motif_edges(kind)?;
        let y = match mode {
            MotifMode::Disaggregated => {
                self.model
                    .add_variable(&name, VarKind::Continuous, 0.0, 1.0, 0)?
            }
            MotifMode::Aggregated => {
                self.model
                    .add_variable(&name, VarKind::Binary, 0.0, 1.0, PRIO_AUX)?
            }
        };
        match mode {
            MotifMode::Disaggregated => {
                for (k, &(i, j)) in present.iter().enumerate() {
                    self.model.add_linear_constraint(
                        format!("{name}_p{k}"),
                        vec![(y, 1.0), (self.x(i, j), -1.0)],
                        Sense::Le,
                        0.0,
                    )?;
                }
                for (k, &(i, j)) in absent.iter().enumerate() {
                    self.model.add_linear_constraint(
                        format!("{name}_a{k}"),
                        vec![(y, 1.0), (self.x(i, j), 1.0)],
                        Sense::Le,
                        1.0,
                    )?;
                }
            }
            MotifMode::Aggregated => {
                let mut terms = vec![(y, 1.0)];
                for &(i, j) in &present {
                    terms.push((self.x(i, j), -1.0 / present.len() as f64));
                }
                self.model
                    .add_linear_constraint(format!("{name}_pa"), terms, Sense::Le, 0.0)?;
                if !absent.is_empty() {
                    let mut terms = vec![(y, 1.0)];
                    for &(i, j) in &absent {
                        terms.push((self.x(i, j), 1.0 / absent.len() as f64));
                    }
                    self.model
                        .add_linear_constraint(format!("{name}_aa"), terms, Sense::Le, 1.0)?;
                }
            }
        }
        // lower activation: y >= 1 - sum(1 - x+) - sum(x-)
        let mut terms = vec![(y, 1.0)];
        for &(i, j) in &present {
            terms.push((self.x(i, j), -1.0));
        }
        for &(i, j) in &absent {
            terms.push((self.x(i, j), 1.0));
        }
        self.model.add_linear_constraint(
            format!("{name}_lb"),
            terms,
            Sense::Ge,
            1.0 - present.len() as f64,
        )?;
        Ok(y)
    }

    fn motif_edges(
        &self,
        kind: MotifKind,
    ) -> Result<(String, Vec<(usize, usize)>, Vec<(usize, usize)>), BuildError> {
        let check = |nodes: &[usize]| -> Result<(), BuildError> {
            let mut sorted = nodes.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != nodes.len() || sorted[0] < 1 || *sorted.last().unwrap() > self.n {
                return Err(BuildError::BadMotifNodes(self.n));
            }
            Ok(())
        };
        Ok(match kind {
            MotifKind::TwoPath { center, a, b } => {
                check(&[center, a, b])?;
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                (
                    format!("ytp_{center}_{a}_{b}"),
                    vec![pair(center, a), pair(center, b)],
                    vec![],
                )
            }
            MotifKind::Triangle(i, j, k) => {
                check(&[i, j, k])?;
                let mut v = [i, j, k];
                v.sort_unstable();
                let [i, j, k] = v;
                (
                    format!("ytr_{i}_{j}_{k}"),
                    vec![(i, j), (i, k), (j, k)],
                    vec![],
                )
            }
            MotifKind::Clique4(i, j, k, l) => {
                check(&[i, j, k, l])?;
                let mut v = [i, j, k, l];
                v.sort_unstable();
                let [i, j, k, l] = v;
                (
                    format!("yclq_{i}_{j}_{k}_{l}"),
                    vec![(i, j), (i, k), (i, l), (j, k), (j, l), (k, l)],
                    vec![],
                )
            }
            MotifKind::Star4 { center, leaves } => {
                check(&[center, leaves[0], leaves[1], leaves[2]])?;
                let mut v = leaves;
                v.sort_unstable();
                let [j, k, l] = v;
                (
                    format!("ystr_{center}_{j}_{k}_{l}"),
                    vec![pair(center, j), pair(center, k), pair(center, l)],
                    vec![(j, k), (j, l), (k, l)],
                )
            }
        })
    }

    // ---- degrees -------------------------------------------------------

    pub fn encode_degrees(&mut self) -> Result<(), BuildError> {
        if !self.registry.pd.is_empty() {
            return Ok(());
        }
        let n = self.n;
        for i in 1..=n {
            let pd = self.model.add_variable(
                format!("pd_{i}"),
                VarKind::Continuous,
                0.0,
                (n - 1) as f64,
                0,
            )?;
            let mut terms = vec![(pd, 1.0)];
            for j in 1..=n {
                if j != i {
                    terms.push((self.x(i, j), -1.0));
                }
            }
            self.model
                .add_linear_constraint(format!("pd_def_{i}"), terms, Sense::Eq, 0.0)?;
            self.registry.pd.insert(i, pd);
        }
        Ok(())
    }

    // ---- clustering ----------------------------------------------------

    /// Encodes triangle indicators and per-node triangle counts; with a
    /// fixed degree sequence also the linear local/average/global
    /// coefficients. Two-path variables are only emitted when requested
    /// (the fractional global form), since a fixed sequence makes the
    /// triplet counts constant.
    pub fn encode_clustering(
        &mut self,
        fixed_degrees: Option<&[usize]>,
        with_two_paths: bool,
    ) -> Result<(), BuildError> {
        if !self.registry.pntr.is_empty() {
            return Ok(());
        }
        let n = self.n;
        let mode = self.motif_mode;
        let mut tri_vars: BTreeMap<(usize, usize, usize), VarId> = BTreeMap::new();
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let y = self.encode_motif(MotifKind::Triangle(i, j, k), mode)?;
                    tri_vars.insert((i, j, k), y);
                }
            }
        }
        let tri_max = choose2(n - 1);
        for i in 1..=n {
            let pntr = self.model.add_variable(
                format!("pntr_{i}"),
                VarKind::Continuous,
                0.0,
                tri_max,
                0,
            )?;
            let mut terms = vec![(pntr, 1.0)];
            for (&(a, b, c), &y) in &tri_vars {
                if a == i || b == i || c == i {
                    terms.push((y, -1.0));
                }
            }
            self.model
                .add_linear_constraint(format!("pntr_def_{i}"), terms, Sense::Eq, 0.0)?;
            self.registry.pntr.insert(i, pntr);
        }
        if with_two_paths {
            let mut tp_vars: BTreeMap<(usize, usize, usize), VarId> = BTreeMap::new();
            for i in 1..=n {
                for a in 1..=n {
                    for b in a + 1..=n {
                        if a == i || b == i {
                            continue;
                        }
                        let y = self.encode_motif(MotifKind::TwoPath { center: i, a, b }, mode)?;
                        tp_vars.insert((i, a, b), y);
                    }
                }
            }
            for i in 1..=n {
                let pntp = self.model.add_variable(
                    format!("pntp_{i}"),
                    VarKind::Continuous,
                    0.0,
                    tri_max,
                    0,
                )?;
                let mut terms = vec![(pntp, 1.0)];
                for (&(c, _, _), &y) in tp_vars.range((i, 0, 0)..(i + 1, 0, 0)) {
                    debug_assert_eq!(c, i);
                    terms.push((y, -1.0));
                }
                self.model
                    .add_linear_constraint(format!("pntp_def_{i}"), terms, Sense::Eq, 0.0)?;
                self.registry.pntp.insert(i, pntp);
            }
        }
        if let Some(d) = fixed_degrees {
            if d.iter().any(|&di| di < 2) {
                return Err(BuildError::FixedClusteringNeedsDegreeTwo);
            }
            for i in 1..=n {
                let pcc = self
                    .model
                    .add_variable(format!("pcc_{i}"), VarKind::Continuous, 0.0, 1.0, 0)?;
                // pcc_i * C(d_i, 2) = pntr_i
                self.model.add_linear_constraint(
                    format!("pcc_def_{i}"),
                    vec![(pcc, choose2(d[i - 1])), (self.registry.pntr[&i], -1.0)],
                    Sense::Eq,
                    0.0,
                )?;
                self.registry.pcc.insert(i, pcc);
            }
            let pacc = self
                .model
                .add_variable("pacc", VarKind::Continuous, 0.0, 1.0, 0)?;
            let mut terms = vec![(pacc, 1.0)];
            for i in 1..=n {
                terms.push((self.registry.pcc[&i], -1.0 / n as f64));
            }
            self.model
                .add_linear_constraint("pacc_def", terms, Sense::Eq, 0.0)?;
            self.registry.pacc = Some(pacc);

            let total_2paths: f64 = d.iter().map(|&di| choose2(di)).sum();
            let pgcc = self
                .model
                .add_variable("pgcc", VarKind::Continuous, 0.0, 1.0, 0)?;
            let mut terms = vec![(pgcc, total_2paths)];
            for i in 1..=n {
                terms.push((self.registry.pntr[&i], -1.0));
            }
            self.model
                .add_linear_constraint("pgcc_def", terms, Sense::Eq, 0.0)?;
            self.registry.pgcc = Some(pgcc);
        }
        Ok(())
    }

    // ---- shortest paths ------------------------------------------------

    /// Appends, for each requested pair, the primal flow model, the dual
    /// potential model, and the strong-duality equalities pinning the
    /// common objective value to `w`.
    pub fn encode_shortest_paths(&mut self, pairs: &[(usize, usize)]) -> Result<(), BuildError> {
        let n = self.n;
        let big_m = (n - 2) as f64;
        for &(i, j) in pairs {
            if i == j {
                return Err(BuildError::SamePairEndpoints);
            }
            let (i, j) = pair(i, j);
            if self.registry.w.contains_key(&(i, j)) {
                continue;
            }
            let w = self.model.add_variable(
                format!("w_{i}_{j}"),
                VarKind::Continuous,
                1.0,
                (n - 1) as f64,
                0,
            )?;
            self.registry.w.insert((i, j), w);

            // primal flows f (continuous suffices: only the path length is
            // extracted, never the path itself)
            let mut f: BTreeMap<(usize, usize), VarId> = BTreeMap::new();
            for k in 1..=n {
                for l in 1..=n {
                    if k == l {
                        continue;
                    }
                    let id = self.model.add_variable(
                        format!("f_{i}_{j}_{k}_{l}"),
                        VarKind::Continuous,
                        0.0,
                        1.0,
                        0,
                    )?;
                    f.insert((k, l), id);
                }
            }
            let mut t: BTreeMap<usize, VarId> = BTreeMap::new();
            for k in 1..=n {
                let id = self.model.add_variable(
                    format!("t_{i}_{j}_{k}"),
                    VarKind::Continuous,
                    -((n - 1) as f64),
                    (n - 1) as f64,
                    0,
                )?;
                t.insert(k, id);
            }
            let mut u: BTreeMap<(usize, usize), VarId> = BTreeMap::new();
            let mut v: BTreeMap<(usize, usize), VarId> = BTreeMap::new();
            for (k, l) in self.all_pairs() {
                let uid = self.model.add_variable(
                    format!("u_{i}_{j}_{k}_{l}"),
                    VarKind::Continuous,
                    -((n - 1) as f64),
                    0.0,
                    0,
                )?;
                let vid = self.model.add_variable(
                    format!("v_{i}_{j}_{k}_{l}"),
                    VarKind::Continuous,
                    -((n - 1) as f64),
                    0.0,
                    0,
                )?;
                u.insert((k, l), uid);
                v.insert((k, l), vid);
            }

            // primal: capacity and flow conservation
            for (k, l) in self.all_pairs() {
                self.model.add_linear_constraint(
                    format!("spcap_{i}_{j}_{k}_{l}"),
                    vec![(f[&(k, l)], 1.0), (f[&(l, k)], 1.0), (self.x(k, l), -1.0)],
                    Sense::Le,
                    0.0,
                )?;
            }
            for k in 1..=n {
                let xi = if k == i {
                    1.0
                } else if k == j {
                    -1.0
                } else {
                    0.0
                };
                let mut terms = Vec::new();
                for l in 1..=n {
                    if l != k {
                        terms.push((f[&(k, l)], 1.0));
                        terms.push((f[&(l, k)], -1.0));
                    }
                }
                self.model.add_linear_constraint(
                    format!("spcons_{i}_{j}_{k}"),
                    terms,
                    Sense::Eq,
                    xi,
                )?;
            }
            // dual: potential and big-M activation constraints
            for (k, l) in self.all_pairs() {
                self.model.add_linear_constraint(
                    format!("spd1_{i}_{j}_{k}_{l}"),
                    vec![(v[&(k, l)], 1.0), (t[&k], 1.0), (t[&l], -1.0)],
                    Sense::Le,
                    1.0,
                )?;
                self.model.add_linear_constraint(
                    format!("spd2_{i}_{j}_{k}_{l}"),
                    vec![(v[&(k, l)], 1.0), (t[&l], 1.0), (t[&k], -1.0)],
                    Sense::Le,
                    1.0,
                )?;
                // u <= v + U (1 - x)
                self.model.add_linear_constraint(
                    format!("spd3_{i}_{j}_{k}_{l}"),
                    vec![
                        (u[&(k, l)], 1.0),
                        (v[&(k, l)], -1.0),
                        (self.x(k, l), big_m),
                    ],
                    Sense::Le,
                    big_m,
                )?;
            }
            // strong duality: both objectives equal w
            let mut terms = vec![(w, 1.0)];
            for id in f.values() {
                terms.push((*id, -1.0));
            }
            self.model
                .add_linear_constraint(format!("spop_{i}_{j}"), terms, Sense::Eq, 0.0)?;
            let mut terms = vec![(w, 1.0), (t[&i], -1.0), (t[&j], 1.0)];
            for id in u.values() {
                terms.push((*id, -1.0));
            }
            self.model
                .add_linear_constraint(format!("spod_{i}_{j}"), terms, Sense::Eq, 0.0)?;
        }
        if self.registry.w.len() == self.n * (self.n - 1) / 2 {
            self.pairs_encoded = true;
        }
        Ok(())
    }

    pub fn encode_all_shortest_paths(&mut self) -> Result<(), BuildError> {
        let pairs = self.all_pairs();
        self.encode_shortest_paths(&pairs)
    }

    // ---- path statistics -----------------------------------------------

    pub fn encode_apl(&mut self) -> Result<VarId, BuildError> {
        if let Some(id) = self.registry.papl {
            return Ok(id);
        }
        if !self.pairs_encoded {
            return Err(BuildError::MissingPairCoverage);
        }
        let n = self.n;
        let num_pairs = (n * (n - 1) / 2) as f64;
        let papl = self.model.add_variable(
            "papl",
            VarKind::Continuous,
            1.0,
            (n - 1) as f64,
            0,
        )?;
        let mut terms = vec![(papl, 1.0)];
        for id in self.registry.w.values() {
            terms.push((*id, -1.0 / num_pairs));
        }
        self.model
            .add_linear_constraint("papl_def", terms, Sense::Eq, 0.0)?;
        self.registry.papl = Some(papl);
        Ok(papl)
    }

    pub fn encode_inverse_closeness(&mut self) -> Result<(), BuildError> {
        if !self.registry.piclc.is_empty() {
            return Ok(());
        }
        if !self.pairs_encoded {
            return Err(BuildError::MissingPairCoverage);
        }
        let n = self.n;
        for i in 1..=n {
            let piclc = self.model.add_variable(
                format!("piclc_{i}"),
                VarKind::Continuous,
                1.0,
                (n - 1) as f64,
                0,
            )?;
            let mut terms = vec![(piclc, 1.0)];
            for j in 1..=n {
                if j != i {
                    terms.push((self.registry.w[&pair(i, j)], -1.0 / (n - 1) as f64));
                }
            }
            self.model
                .add_linear_constraint(format!("piclc_def_{i}"), terms, Sense::Eq, 0.0)?;
            self.registry.piclc.insert(i, piclc);
        }
        Ok(())
    }

    /// Median of the shortest-path multiset via counting indicators.
    pub fn encode_cpl(&mut self) -> Result<VarId, BuildError> {
        if let Some(id) = self.registry.pcpl {
            return Ok(id);
        }
        if !self.pairs_encoded {
            return Err(BuildError::MissingPairCoverage);
        }
        let n = self.n;
        let u1 = ((n as f64 / 2.0).ceil() - 1.0).max(0.0);
        let u2 = (n - 2) as f64;
        let num_pairs = n * (n - 1) / 2;
        let parity = (num_pairs % 2) as f64;
        let pcpl = self.model.add_variable(
            "pcpl",
            VarKind::Continuous,
            1.0,
            (n - 1) as f64,
            0,
        )?;
        let mut rplus_terms = Vec::new();
        let mut rminus_terms = Vec::new();
        for (i, j) in self.all_pairs() {
            let w = self.registry.w[&(i, j)];
            let rp = self.model.add_variable(
                format!("rcpl_plus_{i}_{j}"),
                VarKind::Binary,
                0.0,
                1.0,
                PRIO_AUX,
            )?;
            let rm = self.model.add_variable(
                format!("rcpl_minus_{i}_{j}"),
                VarKind::Binary,
                0.0,
                1.0,
                PRIO_AUX,
            )?;
            // -U1 r+ <= w - pcpl <= U2 (1 - r+)
            self.model.add_linear_constraint(
                format!("cplp1_{i}_{j}"),
                vec![(w, 1.0), (pcpl, -1.0), (rp, u1)],
                Sense::Ge,
                0.0,
            )?;
            self.model.add_linear_constraint(
                format!("cplp2_{i}_{j}"),
                vec![(w, 1.0), (pcpl, -1.0), (rp, u2)],
                Sense::Le,
                u2,
            )?;
            // U2 r- >= w - pcpl >= -U1 (1 - r-)
            self.model.add_linear_constraint(
                format!("cplm1_{i}_{j}"),
                vec![(w, 1.0), (pcpl, -1.0), (rm, -u2)],
                Sense::Le,
                0.0,
            )?;
            self.model.add_linear_constraint(
                format!("cplm2_{i}_{j}"),
                vec![(w, 1.0), (pcpl, -1.0), (rm, -u1)],
                Sense::Ge,
                -u1,
            )?;
            rplus_terms.push((rp, 2.0));
            rminus_terms.push((rm, 2.0));
        }
        let rhs = num_pairs as f64 + parity;
        self.model
            .add_linear_constraint("cpl_count_plus", rplus_terms, Sense::Eq, rhs)?;
        self.model
            .add_linear_constraint("cpl_count_minus", rminus_terms, Sense::Eq, rhs)?;
        self.registry.pcpl = Some(pcpl);
        Ok(pcpl)
    }

    // ---- degree classes, neighbor-degree sums --------------------------

    /// Sum of neighbor degrees via gated degree copies per ordered pair.
    /// `d_lo`/`d_hi` are hard degree bounds implied by the gadget.
    pub fn encode_neighbor_degree_sums(&mut self, d_lo: usize, d_hi: usize) -> Result<(), BuildError> {
        if self.sdn_encoded {
            return Ok(());
        }
        if d_lo > d_hi || d_hi > self.n - 1 {
            return Err(BuildError::BadDegreeClassBounds);
        }
        self.encode_degrees()?;
        let n = self.n;
        let (dl, du) = (d_lo as f64, d_hi as f64);
        let mut pdp: BTreeMap<(usize, usize), VarId> = BTreeMap::new();
        for (k, l) in self.all_pairs() {
            for (from, to) in [(k, l), (l, k)] {
                let id = self.model.add_variable(
                    format!("pdp_{from}_{to}"),
                    VarKind::Continuous,
                    0.0,
                    du,
                    0,
                )?;
                pdp.insert((from, to), id);
                let x = self.x(k, l);
                let pd_to = self.registry.pd[&to];
                // dL x <= pdp <= dU x
                self.model.add_linear_constraint(
                    format!("pdp1_{from}_{to}"),
                    vec![(id, 1.0), (x, -dl)],
                    Sense::Ge,
                    0.0,
                )?;
                self.model.add_linear_constraint(
                    format!("pdp2_{from}_{to}"),
                    vec![(id, 1.0), (x, -du)],
                    Sense::Le,
                    0.0,
                )?;
                // dL (1-x) <= pd_to - pdp <= dU (1-x)
                self.model.add_linear_constraint(
                    format!("pdp3_{from}_{to}"),
                    vec![(pd_to, 1.0), (id, -1.0), (x, dl)],
                    Sense::Ge,
                    dl,
                )?;
                self.model.add_linear_constraint(
                    format!("pdp4_{from}_{to}"),
                    vec![(pd_to, 1.0), (id, -1.0), (x, du)],
                    Sense::Le,
                    du,
                )?;
            }
        }
        let sdn_max = du * du;
        for i in 1..=n {
            let psdn = self.model.add_variable(
                format!("psdn_{i}"),
                VarKind::Continuous,
                0.0,
                sdn_max,
                0,
            )?;
            let mut terms = vec![(psdn, 1.0)];
            for j in 1..=n {
                if j != i {
                    terms.push((pdp[&(i, j)], -1.0));
                }
            }
            self.model
                .add_linear_constraint(format!("psdn_def_{i}"), terms, Sense::Eq, 0.0)?;
            self.registry.psdn.insert(i, psdn);
        }
        self.sdn_encoded = true;
        Ok(())
    }

    /// Degree-threshold indicators z[q,i] (active iff pd_i >= q) and the
    /// per-degree node counts pnnd[q], for q in `d_lo..=d_hi`. The epsilon
    /// offset forces activation at exact equality.
    pub fn encode_degree_classes(
        &mut self,
        d_lo: usize,
        d_hi: usize,
        epsilon: f64,
    ) -> Result<(), BuildError> {
        if !self.registry.pnnd.is_empty() {
            return Ok(());
        }
        if d_lo > d_hi || d_hi > self.n - 1 {
            return Err(BuildError::BadDegreeClassBounds);
        }
        self.encode_degrees()?;
        let n = self.n;
        let (dl, du) = (d_lo as f64, d_hi as f64);
        for q in d_lo..=d_hi {
            for i in 1..=n {
                let z = self.model.add_variable(
                    format!("z_{q}_{i}"),
                    VarKind::Binary,
                    0.0,
                    1.0,
                    PRIO_AUX,
                )?;
                self.registry.z.insert((q, i), z);
                let pd = self.registry.pd[&i];
                let qf = q as f64;
                // (dL - q + eps)(1 - z) <= pd - q + eps <= (dU - q + eps) z
                self.model.add_linear_constraint(
                    format!("zlo_{q}_{i}"),
                    vec![(pd, 1.0), (z, dl - qf + epsilon)],
                    Sense::Ge,
                    dl,
                )?;
                self.model.add_linear_constraint(
                    format!("zhi_{q}_{i}"),
                    vec![(pd, 1.0), (z, -(du - qf + epsilon))],
                    Sense::Le,
                    qf - epsilon,
                )?;
            }
        }
        for q in d_lo..=d_hi {
            let pnnd = self.model.add_variable(
                format!("pnnd_{q}"),
                VarKind::Continuous,
                0.0,
                n as f64,
                0,
            )?;
            let mut terms = vec![(pnnd, 1.0)];
            for i in 1..=n {
                terms.push((self.registry.z[&(q, i)], -1.0));
                if q < d_hi {
                    terms.push((self.registry.z[&(q + 1, i)], 1.0));
                }
            }
            self.model
                .add_linear_constraint(format!("pnnd_def_{q}"), terms, Sense::Eq, 0.0)?;
            self.registry.pnnd.insert(q, pnnd);
        }
        Ok(())
    }

    // ---- generic sequence assignment and statistics --------------------

    /// One-to-one assignment of property variables to value bands via
    /// binary q variables. With `gates`, only gated nodes are assigned;
    /// otherwise every node is.
    pub fn encode_sequence_assignment(
        &mut self,
        label: &str,
        props: &[(VarId, f64, f64)],
        bands: &[(f64, f64)],
        gates: Option<&[VarId]>,
    ) -> Result<Vec<Vec<VarId>>, BuildError> {
        if bands.len() > props.len() {
            return Err(BuildError::TooManyBands);
        }
        let mut q_all = Vec::new();
        for (i, &(p, p_lo, p_hi)) in props.iter().enumerate() {
            let mut row = Vec::new();
            for (m, &(b_lo, b_hi)) in bands.iter().enumerate() {
                let q = self.model.add_variable(
                    format!("q{label}_{}_{}", i + 1, m + 1),
                    VarKind::Binary,
                    0.0,
                    1.0,
                    PRIO_AUX,
                )?;
                // p_i >= p_i^L - (p_i^L - b_lo) q ; p_i <= p_i^U - (p_i^U - b_hi) q
                self.model.add_linear_constraint(
                    format!("q{label}lo_{}_{}", i + 1, m + 1),
                    vec![(p, 1.0), (q, p_lo - b_lo)],
                    Sense::Ge,
                    p_lo,
                )?;
                self.model.add_linear_constraint(
                    format!("q{label}hi_{}_{}", i + 1, m + 1),
                    vec![(p, 1.0), (q, p_hi - b_hi)],
                    Sense::Le,
                    p_hi,
                )?;
                row.push(q);
            }
            // row sum tied to the gate (or exactly one when ungated and square)
            let row_terms: Vec<(VarId, f64)> = row.iter().map(|&q| (q, 1.0)).collect();
            match gates {
                Some(z) => {
                    self.model.add_linear_constraint(
                        format!("q{label}row_le_{}", i + 1),
                        row_terms
                            .iter()
                            .cloned()
                            .chain([(z[i], -1.0)])
                            .collect(),
                        Sense::Le,
                        0.0,
                    )?;
                    self.model.add_linear_constraint(
                        format!("q{label}row_ge_{}", i + 1),
                        row_terms.into_iter().chain([(z[i], -1.0)]).collect(),
                        Sense::Ge,
                        0.0,
                    )?;
                }
                None if bands.len() == props.len() => {
                    self.model.add_linear_constraint(
                        format!("q{label}row_{}", i + 1),
                        row_terms,
                        Sense::Eq,
                        1.0,
                    )?;
                }
                None => {
                    self.model.add_linear_constraint(
                        format!("q{label}row_{}", i + 1),
                        row_terms,
                        Sense::Le,
                        1.0,
                    )?;
                }
            }
            q_all.push(row);
        }
        for m in 0..bands.len() {
            let terms: Vec<(VarId, f64)> = q_all.iter().map(|row| (row[m], 1.0)).collect();
            self.model.add_linear_constraint(
                format!("q{label}col_{}", m + 1),
                terms,
                Sense::Eq,
                1.0,
            )?;
        }
        Ok(q_all)
    }

    /// Gated copies p' equal to p when the gate is on and `p_tilde` when off.
    pub fn encode_gated_copies(
        &mut self,
        label: &str,
        props: &[(VarId, f64, f64)],
        gates: &[VarId],
        p_tilde: f64,
    ) -> Result<Vec<VarId>, BuildError> {
        if props.is_empty() {
            return Err(BuildError::EmptyCandidateSet);
        }
        let mut out = Vec::new();
        for (i, &(p, p_lo, p_hi)) in props.iter().enumerate() {
            let z = gates[i];
            let lo = p_tilde.min(p_lo);
            let hi = p_tilde.max(p_hi);
            let pp = self.model.add_variable(
                format!("pp{label}_{}", i + 1),
                VarKind::Continuous,
                lo,
                hi,
                0,
            )?;
            // (pL - pt) z <= p' - pt <= (pU - pt) z
            self.model.add_linear_constraint(
                format!("pp{label}a_{}", i + 1),
                vec![(pp, 1.0), (z, -(p_lo - p_tilde))],
                Sense::Ge,
                p_tilde,
            )?;
            self.model.add_linear_constraint(
                format!("pp{label}b_{}", i + 1),
                vec![(pp, 1.0), (z, -(p_hi - p_tilde))],
                Sense::Le,
                p_tilde,
            )?;
            // (pL - pt)(1 - z) <= p - p' <= (pU - pt)(1 - z)
            self.model.add_linear_constraint(
                format!("pp{label}c_{}", i + 1),
                vec![(p, 1.0), (pp, -1.0), (z, p_lo - p_tilde)],
                Sense::Ge,
                p_lo - p_tilde,
            )?;
            self.model.add_linear_constraint(
                format!("pp{label}d_{}", i + 1),
                vec![(p, 1.0), (pp, -1.0), (z, p_hi - p_tilde)],
                Sense::Le,
                p_hi - p_tilde,
            )?;
            out.push(pp);
        }
        Ok(out)
    }

    /// Median of the gated property values, expressed linearly through
    /// counting indicators r+/r-.
    pub fn encode_median(
        &mut self,
        label: &str,
        props: &[(VarId, f64, f64)],
        gates: &[VarId],
    ) -> Result<VarId, BuildError> {
        if props.is_empty() {
            return Err(BuildError::EmptyCandidateSet);
        }
        let count = props.len() as f64;
        let med_lo = props.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let med_hi = props.iter().map(|p| p.2).fold(f64::NEG_INFINITY, f64::max);
        let med = self.model.add_variable(
            format!("med{label}"),
            VarKind::Continuous,
            med_lo,
            med_hi,
            0,
        )?;
        let copies = self.encode_gated_copies(&format!("med{label}"), props, gates, med_hi)?;
        let mut rp_terms = Vec::new();
        let mut rm_terms = Vec::new();
        let mut z_terms: Vec<(VarId, f64)> = gates.iter().map(|&z| (z, 1.0)).collect();
        for (i, (&pp, &(_, p_lo, p_hi))) in copies.iter().zip(props.iter()).enumerate() {
            let rp = self.model.add_variable(
                format!("rp{label}_{}", i + 1),
                VarKind::Binary,
                0.0,
                1.0,
                PRIO_AUX,
            )?;
            let rm = self.model.add_variable(
                format!("rm{label}_{}", i + 1),
                VarKind::Binary,
                0.0,
                1.0,
                PRIO_AUX,
            )?;
            // (pL - medU) r+ <= p' - med <= (pU - medL)(1 - r+)
            self.model.add_linear_constraint(
                format!("rp{label}a_{}", i + 1),
                vec![(pp, 1.0), (med, -1.0), (rp, -(p_lo - med_hi))],
                Sense::Ge,
                0.0,
            )?;
            self.model.add_linear_constraint(
                format!("rp{label}b_{}", i + 1),
                vec![(pp, 1.0), (med, -1.0), (rp, p_hi - med_lo)],
                Sense::Le,
                p_hi - med_lo,
            )?;
            // (pU - medL) r- >= p' - med >= (pL - medU)(1 - r-)
            self.model.add_linear_constraint(
                format!("rm{label}a_{}", i + 1),
                vec![(pp, 1.0), (med, -1.0), (rm, -(p_hi - med_lo))],
                Sense::Le,
                0.0,
            )?;
            self.model.add_linear_constraint(
                format!("rm{label}b_{}", i + 1),
                vec![(pp, 1.0), (med, -1.0), (rm, p_lo - med_hi)],
                Sense::Ge,
                p_lo - med_hi,
            )?;
            // tightening: r- >= 1 - z, r+ <= z
            self.model.add_linear_constraint(
                format!("rm{label}t_{}", i + 1),
                vec![(rm, 1.0), (gates[i], 1.0)],
                Sense::Ge,
                1.0,
            )?;
            self.model.add_linear_constraint(
                format!("rp{label}t_{}", i + 1),
                vec![(rp, 1.0), (gates[i], -1.0)],
                Sense::Le,
                0.0,
            )?;
            rp_terms.push((rp, 2.0));
            rm_terms.push((rm, 2.0));
        }
        // sum z <= 2 sum r+ <= 1 + sum z
        self.model.add_linear_constraint(
            format!("med{label}p1"),
            rp_terms
                .iter()
                .cloned()
                .chain(z_terms.iter().map(|&(z, _)| (z, -1.0)))
                .collect(),
            Sense::Ge,
            0.0,
        )?;
        self.model.add_linear_constraint(
            format!("med{label}p2"),
            rp_terms
                .into_iter()
                .chain(z_terms.iter().map(|&(z, _)| (z, -1.0)))
                .collect(),
            Sense::Le,
            1.0,
        )?;
        // 2N - sum z <= 2 sum r- <= 1 + 2N - sum z
        self.model.add_linear_constraint(
            format!("med{label}m1"),
            rm_terms
                .iter()
                .cloned()
                .chain(z_terms.iter().map(|&(z, _)| (z, 1.0)))
                .collect(),
            Sense::Ge,
            2.0 * count,
        )?;
        self.model.add_linear_constraint(
            format!("med{label}m2"),
            rm_terms
                .into_iter()
                .chain(z_terms.iter().map(|&(z, _)| (z, 1.0)))
                .collect(),
            Sense::Le,
            2.0 * count + 1.0,
        )?;
        // nonempty subset
        self.model.add_linear_constraint(
            format!("med{label}ne"),
            std::mem::take(&mut z_terms),
            Sense::Ge,
            1.0,
        )?;
        Ok(med)
    }

    // ---- specification bands with slacks -------------------------------

    fn new_slack_pair(
        &mut self,
        label: &str,
        suffix: &str,
        upper: f64,
    ) -> Result<(VarId, VarId), BuildError> {
        let s_minus = self.model.add_variable(
            format!("s{suffix}_minus"),
            VarKind::Continuous,
            0.0,
            upper,
            0,
        )?;
        let s_plus = self.model.add_variable(
            format!("s{suffix}_plus"),
            VarKind::Continuous,
            0.0,
            upper,
            0,
        )?;
        match self
            .registry
            .slack_groups
            .iter_mut()
            .find(|g| g.label == label)
        {
            Some(g) => g.vars.extend([s_minus, s_plus]),
            None => self.registry.slack_groups.push(SlackGroup {
                label: label.to_string(),
                vars: vec![s_minus, s_plus],
            }),
        }
        Ok((s_minus, s_plus))
    }

    /// Emits `lo <= terms (+ s- - s+) <= hi` under a group label; the slack
    /// pair is omitted in hard (extremum-objective) mode.
    fn add_band(
        &mut self,
        group: &str,
        name: &str,
        terms: Vec<(VarId, f64)>,
        lo: f64,
        hi: f64,
        slack_ub: f64,
    ) -> Result<(), BuildError> {
        let slack = if self.slacks_enabled {
            Some(self.new_slack_pair(group, name, slack_ub)?)
        } else {
            None
        };
        let with_slack = |mut t: Vec<(VarId, f64)>| {
            if let Some((sm, sp)) = slack {
                t.push((sm, 1.0));
                t.push((sp, -1.0));
            }
            t
        };
        self.model.add_linear_constraint(
            format!("{name}_lo"),
            with_slack(terms.clone()),
            Sense::Ge,
            lo,
        )?;
        self.model
            .add_linear_constraint(format!("{name}_up"), with_slack(terms), Sense::Le, hi)?;
        Ok(())
    }
}

/// Everything `build` produces: the model, the registry, and bookkeeping
/// the solver layer uses for extraction.
pub struct BuildOutput {
    pub model: MilpModel,
    pub registry: VariableRegistry,
    /// True when the objective is a slack sum (zero optimum = attainable).
    pub min_slack_objective: bool,
}

/// Orchestrates the encoders in dependency order for a validated spec.
pub fn build(spec: &NetworkSpec) -> Result<BuildOutput, BuildError> {
    spec.validate()?;
    let n = spec.n;
    let mut b = ModelBuilder::new(n, spec.motif_mode)?;
    b.slacks_enabled = matches!(spec.objective, ObjectiveSpec::MinSlack);
    b.encode_edges()?;
    b.encode_degrees()?;

    let degseq: Option<Vec<usize>> = spec.degree_sequence().map(|d| d.to_vec());

    let wants_acc = spec
        .constraints
        .iter()
        .any(|c| matches!(c, PropertyConstraint::AvgClustering { .. }))
        || matches!(
            spec.objective,
            ObjectiveSpec::Maximize { property: ObjectiveProperty::AvgClustering }
                | ObjectiveSpec::Minimize { property: ObjectiveProperty::AvgClustering }
        );
    let wants_gcc = spec
        .constraints
        .iter()
        .any(|c| matches!(c, PropertyConstraint::GlobalClustering { .. }))
        || matches!(
            spec.objective,
            ObjectiveSpec::Maximize { property: ObjectiveProperty::GlobalClustering }
                | ObjectiveSpec::Minimize { property: ObjectiveProperty::GlobalClustering }
        );
    let wants_cc_secondary = matches!(
        spec.symmetry,
        SymmetryConfig::PrimarySecondary { secondary: SecondaryCriterion::LocalClustering }
    );
    let degree_lower_bound = spec.constraints.iter().find_map(|c| match c {
        PropertyConstraint::DegreeBounds { nodes: None, lo, .. } => Some(*lo),
        _ => None,
    });

    if wants_acc || wants_gcc || wants_cc_secondary {
        match &degseq {
            Some(d) => {
                if d.iter().any(|&di| di < 2) {
                    return Err(BuildError::FixedClusteringNeedsDegreeTwo);
                }
                b.encode_clustering(Some(d), false)?;
            }
            None => {
                if wants_acc || wants_cc_secondary {
                    return Err(BuildError::AvgClusteringNeedsFixedDegrees);
                }
                // fractional global form; demand a positive-triplet guard
                if degree_lower_bound.map_or(true, |lo| lo < 2.0) {
                    return Err(BuildError::FractionalNeedsGuard);
                }
                b.encode_clustering(None, true)?;
            }
        }
    }

    let wants_paths = spec.constraints.iter().any(|c| {
        matches!(
            c,
            PropertyConstraint::AvgPathLength { .. }
                | PropertyConstraint::CharPathLength { .. }
                | PropertyConstraint::Diameter { .. }
                | PropertyConstraint::ClosenessSequence { .. }
        )
    }) || matches!(
        spec.objective,
        ObjectiveSpec::Maximize {
            property: ObjectiveProperty::AvgPathLength | ObjectiveProperty::CharPathLength
        } | ObjectiveSpec::Minimize {
            property: ObjectiveProperty::AvgPathLength | ObjectiveProperty::CharPathLength
        }
    ) || matches!(
        spec.symmetry,
        SymmetryConfig::PrimarySecondary { secondary: SecondaryCriterion::InverseCloseness }
    );
    let wants_dist_to_last = matches!(
        spec.symmetry,
        SymmetryConfig::PrimarySecondary { secondary: SecondaryCriterion::DistanceToLast }
    );
    if wants_paths {
        b.encode_all_shortest_paths()?;
    } else if wants_dist_to_last {
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i, n)).collect();
        b.encode_shortest_paths(&pairs)?;
    }
    if spec
        .constraints
        .iter()
        .any(|c| matches!(c, PropertyConstraint::ClosenessSequence { .. }))
        || matches!(
            spec.symmetry,
            SymmetryConfig::PrimarySecondary { secondary: SecondaryCriterion::InverseCloseness }
        )
    {
        b.encode_inverse_closeness()?;
    }

    let adn_constraint = spec.constraints.iter().find_map(|c| match c {
        PropertyConstraint::AdnByDegree { bands } => Some(bands.clone()),
        _ => None,
    });
    let wants_sdn = adn_constraint.is_some()
        || matches!(
            spec.symmetry,
            SymmetryConfig::PrimarySecondary { secondary: SecondaryCriterion::SumNeighborDegrees }
        );
    // degree-class machinery uses the uniform degree bounds when present
    let (class_lo, class_hi) = {
        let lo = degree_lower_bound.map_or(0, |v| v as usize);
        let hi = spec
            .constraints
            .iter()
            .find_map(|c| match c {
                PropertyConstraint::DegreeBounds { nodes: None, hi, .. } => Some(*hi as usize),
                _ => None,
            })
            .unwrap_or(n - 1);
        (lo, hi)
    };
    if wants_sdn {
        b.encode_neighbor_degree_sums(class_lo, class_hi)?;
    }
    if adn_constraint.is_some() {
        b.encode_degree_classes(class_lo, class_hi, spec.epsilon)?;
    }

    // specification bands
    let dmax = (n - 1) as f64;
    for (idx, c) in spec.constraints.iter().enumerate() {
        match c {
            PropertyConstraint::DegreeBounds { nodes, lo, hi } => {
                if nodes.is_some() && spec.symmetry != SymmetryConfig::None {
                    return Err(BuildError::NodeSubsetWithSymmetry);
                }
                let targets: Vec<usize> = match nodes {
                    Some(v) => v.clone(),
                    None => (1..=n).collect(),
                };
                for i in targets {
                    let pd = b.registry.pd[&i];
                    b.add_band(
                        &format!("degree_bounds[{idx}]"),
                        &format!("db{idx}_{i}"),
                        vec![(pd, 1.0)],
                        *lo,
                        *hi,
                        dmax,
                    )?;
                }
            }
            PropertyConstraint::DegreeSequence { values } => {
                for i in 1..=n {
                    let pd = b.registry.pd[&i];
                    let d = values[i - 1] as f64;
                    b.add_band(
                        "degree_sequence",
                        &format!("ds_{i}"),
                        vec![(pd, 1.0)],
                        d,
                        d,
                        dmax,
                    )?;
                }
            }
            PropertyConstraint::AvgClustering { band } => {
                let pacc = b.registry.pacc.expect("encoded above");
                b.add_band("avg_clustering", "acc", vec![(pacc, 1.0)], band.lo, band.hi, 1.0)?;
            }
            PropertyConstraint::GlobalClustering { band } => {
                if let Some(pgcc) = b.registry.pgcc {
                    b.add_band(
                        "global_clustering",
                        "gcc",
                        vec![(pgcc, 1.0)],
                        band.lo,
                        band.hi,
                        1.0,
                    )?;
                } else {
                    // fractional form on the cross-multiplied inequality:
                    // gccL sum(pntp) <= sum(pntr) + s- - s+ <= gccU sum(pntp)
                    let scale = n as f64 * choose2(n - 1);
                    let slack = if b.slacks_enabled {
                        Some(b.new_slack_pair("global_clustering", "gcc", scale)?)
                    } else {
                        None
                    };
                    for (name, bound, sense) in
                        [("gcc_lo", band.lo, Sense::Ge), ("gcc_up", band.hi, Sense::Le)]
                    {
                        let mut terms: Vec<(VarId, f64)> = Vec::new();
                        for id in b.registry.pntr.values() {
                            terms.push((*id, 1.0));
                        }
                        for id in b.registry.pntp.values() {
                            terms.push((*id, -bound));
                        }
                        if let Some((sm, sp)) = slack {
                            terms.push((sm, 1.0));
                            terms.push((sp, -1.0));
                        }
                        b.model.add_linear_constraint(name, terms, sense, 0.0)?;
                    }
                }
            }
            PropertyConstraint::AvgPathLength { band } => {
                let papl = b.encode_apl()?;
                b.add_band("avg_path_length", "apl", vec![(papl, 1.0)], band.lo, band.hi, dmax)?;
            }
            PropertyConstraint::CharPathLength { band } => {
                let pcpl = b.encode_cpl()?;
                b.add_band("char_path_length", "cpl", vec![(pcpl, 1.0)], band.lo, band.hi, dmax)?;
            }
            PropertyConstraint::Diameter { band } => {
                // shared slack pair; psi selects which pair carries the
                // lower diameter bound
                let slack = if b.slacks_enabled {
                    Some(b.new_slack_pair("diameter", "diam", dmax)?)
                } else {
                    None
                };
                let mut psi_terms = Vec::new();
                let pairs = b.all_pairs();
                for (i, j) in pairs {
                    let w = b.registry.w[&(i, j)];
                    let psi = b.model.add_variable(
                        format!("psi_{i}_{j}"),
                        VarKind::Binary,
                        0.0,
                        1.0,
                        PRIO_AUX,
                    )?;
                    let mut lo_terms = vec![(w, 1.0), (psi, -(band.lo - 1.0))];
                    let mut up_terms = vec![(w, 1.0)];
                    if let Some((sm, sp)) = slack {
                        lo_terms.extend([(sm, 1.0), (sp, -1.0)]);
                        up_terms.extend([(sm, 1.0), (sp, -1.0)]);
                    }
                    b.model.add_linear_constraint(
                        format!("diam_lo_{i}_{j}"),
                        lo_terms,
                        Sense::Ge,
                        1.0,
                    )?;
                    b.model.add_linear_constraint(
                        format!("diam_up_{i}_{j}"),
                        up_terms,
                        Sense::Le,
                        band.hi,
                    )?;
                    psi_terms.push((psi, 1.0));
                }
                b.model
                    .add_linear_constraint("diam_psi", psi_terms, Sense::Ge, 1.0)?;
            }
            PropertyConstraint::ClosenessSequence { bands } => {
                // inverse-closeness bands with reciprocal endpoints swapped
                let inv_lo = bands
                    .iter()
                    .map(|bd| 1.0 / bd.hi)
                    .fold(f64::INFINITY, f64::min);
                let inv_hi = bands
                    .iter()
                    .map(|bd| 1.0 / bd.lo)
                    .fold(f64::NEG_INFINITY, f64::max);
                let slack_ids: Vec<Option<(VarId, VarId)>> = (1..=n)
                    .map(|i| {
                        if b.slacks_enabled {
                            b.new_slack_pair("closeness_sequence", &format!("iclc_{i}"), dmax)
                                .map(Some)
                        } else {
                            Ok(None)
                        }
                    })
                    .collect::<Result<_, _>>()?;
                for i in 1..=n {
                    let piclc = b.registry.piclc[&i];
                    for (m, bd) in bands.iter().enumerate() {
                        let q = b.model.add_variable(
                            format!("qclc_{i}_{}", m + 1),
                            VarKind::Binary,
                            0.0,
                            1.0,
                            PRIO_AUX,
                        )?;
                        let mut lo_terms = vec![(piclc, 1.0), (q, inv_lo - 1.0 / bd.hi)];
                        let mut up_terms = vec![(piclc, 1.0), (q, inv_hi - 1.0 / bd.lo)];
                        if let Some((sm, sp)) = slack_ids[i - 1] {
                            lo_terms.extend([(sm, 1.0), (sp, -1.0)]);
                            up_terms.extend([(sm, 1.0), (sp, -1.0)]);
                        }
                        b.model.add_linear_constraint(
                            format!("clc_lo_{i}_{}", m + 1),
                            lo_terms,
                            Sense::Ge,
                            inv_lo,
                        )?;
                        b.model.add_linear_constraint(
                            format!("clc_up_{i}_{}", m + 1),
                            up_terms,
                            Sense::Le,
                            inv_hi,
                        )?;
                    }
                }
                for m in 1..=bands.len() {
                    let terms: Vec<(VarId, f64)> = (1..=n)
                        .map(|i| {
                            (
                                b.model
                                    .var_by_name(&format!("qclc_{i}_{m}"))
                                    .expect("created above"),
                                1.0,
                            )
                        })
                        .collect();
                    b.model
                        .add_linear_constraint(format!("clc_col_{m}"), terms, Sense::Eq, 1.0)?;
                }
                for i in 1..=n {
                    let terms: Vec<(VarId, f64)> = (1..=bands.len())
                        .map(|m| {
                            (
                                b.model
                                    .var_by_name(&format!("qclc_{i}_{m}"))
                                    .expect("created above"),
                                1.0,
                            )
                        })
                        .collect();
                    b.model
                        .add_linear_constraint(format!("clc_row_{i}"), terms, Sense::Eq, 1.0)?;
                }
            }
            PropertyConstraint::AdnByDegree { bands } => {
                let du2 = (class_hi as f64) * (class_hi as f64);
                for (q, band) in bands {
                    let q = *q;
                    if q < class_lo.max(1) || q > class_hi {
                        continue; // class excluded by the degree bounds
                    }
                    // gated neighbor-degree sums active exactly on class q
                    let mut sum_terms: Vec<(VarId, f64)> = Vec::new();
                    for i in 1..=n {
                        let psdnp = b.model.add_variable(
                            format!("psdnp_{q}_{i}"),
                            VarKind::Continuous,
                            0.0,
                            du2,
                            0,
                        )?;
                        let z_q = b.registry.z[&(q, i)];
                        let z_q1 = if q < class_hi {
                            Some(b.registry.z[&(q + 1, i)])
                        } else {
                            None
                        };
                        let psdn = b.registry.psdn[&i];
                        // psdnp <= dU^2 (z_q - z_{q+1})
                        let mut t1 = vec![(psdnp, 1.0), (z_q, -du2)];
                        if let Some(z1) = z_q1 {
                            t1.push((z1, du2));
                        }
                        b.model
                            .add_linear_constraint(format!("adn1_{q}_{i}"), t1, Sense::Le, 0.0)?;
                        // psdn - psdnp <= dU^2 (1 - z_q + z_{q+1})
                        let mut t2 = vec![(psdn, 1.0), (psdnp, -1.0), (z_q, du2)];
                        if let Some(z1) = z_q1 {
                            t2.push((z1, -du2));
                        }
                        b.model
                            .add_linear_constraint(format!("adn2_{q}_{i}"), t2, Sense::Le, du2)?;
                        // lower halves are the variable bounds (>= 0) plus:
                        b.model.add_linear_constraint(
                            format!("adn3_{q}_{i}"),
                            vec![(psdn, 1.0), (psdnp, -1.0)],
                            Sense::Ge,
                            0.0,
                        )?;
                        sum_terms.push((psdnp, 1.0));
                    }
                    let slack = if b.slacks_enabled {
                        Some(b.new_slack_pair("adn_by_degree", &format!("adn_{q}"), du2 * n as f64)?)
                    } else {
                        None
                    };
                    let pnnd = b.registry.pnnd[&q];
                    for (name, bound, sense) in [
                        (format!("adn_lo_{q}"), band.lo, Sense::Ge),
                        (format!("adn_up_{q}"), band.hi, Sense::Le),
                    ] {
                        let mut terms = sum_terms.clone();
                        terms.push((pnnd, -bound * q as f64));
                        if let Some((sm, sp)) = slack {
                            terms.push((sm, 1.0));
                            terms.push((sp, -1.0));
                        }
                        b.model.add_linear_constraint(name, terms, sense, 0.0)?;
                    }
                }
            }
            PropertyConstraint::MinDegreeSpan { span } => {
                let pd1 = b.registry.pd[&1];
                let pdn = b.registry.pd[&n];
                b.add_band(
                    "min_degree_span",
                    "span",
                    vec![(pd1, 1.0), (pdn, -1.0)],
                    *span as f64,
                    dmax,
                    dmax,
                )?;
            }
            PropertyConstraint::NonNull => {
                let pd1 = b.registry.pd[&1];
                b.add_band("non_null", "nonnull", vec![(pd1, 1.0)], 1.0, dmax, 1.0)?;
            }
        }
    }

    add_symmetry_breaking(&mut b, spec, degseq.as_deref())?;

    // objective
    match spec.objective {
        ObjectiveSpec::MinSlack => {
            let terms: Vec<(VarId, f64)> = b
                .registry
                .all_slacks()
                .into_iter()
                .map(|id| (id, 1.0))
                .collect();
            b.model.set_objective(ObjSense::Min, terms)?;
        }
        ObjectiveSpec::Maximize { property } | ObjectiveSpec::Minimize { property } => {
            let var = objective_var(&mut b, property)?;
            let sense = if matches!(spec.objective, ObjectiveSpec::Maximize { .. }) {
                ObjSense::Max
            } else {
                ObjSense::Min
            };
            b.model.set_objective(sense, vec![(var, 1.0)])?;
        }
    }

    b.model.validate()?;
    Ok(BuildOutput {
        min_slack_objective: matches!(spec.objective, ObjectiveSpec::MinSlack),
        model: b.model,
        registry: b.registry,
    })
}

fn objective_var(b: &mut ModelBuilder, property: ObjectiveProperty) -> Result<VarId, BuildError> {
    match property {
        ObjectiveProperty::AvgClustering => {
            b.registry.pacc.ok_or(BuildError::ObjectiveNeedsDegreeSequence)
        }
        ObjectiveProperty::GlobalClustering => {
            b.registry.pgcc.ok_or(BuildError::ObjectiveNeedsDegreeSequence)
        }
        ObjectiveProperty::AvgPathLength => b.encode_apl(),
        ObjectiveProperty::CharPathLength => b.encode_cpl(),
    }
}

/// Ordering constraints that restrict the search to one labeling per
/// isomorphism class (up to residual ties). With a full degree sequence the
/// big-M forms collapse to tie-breaking over equal-degree runs only.
fn add_symmetry_breaking(
    b: &mut ModelBuilder,
    spec: &NetworkSpec,
    degseq: Option<&[usize]>,
) -> Result<(), BuildError> {
    let n = b.n;
    let secondary = match spec.symmetry {
        SymmetryConfig::None => return Ok(()),
        SymmetryConfig::Primary => None,
        SymmetryConfig::PrimarySecondary { secondary } => Some(secondary),
    };
    if degseq.is_none() {
        for i in 1..n {
            let a = b.registry.pd[&i];
            let c = b.registry.pd[&(i + 1)];
            b.model.add_linear_constraint(
                format!("sym_pd_{i}"),
                vec![(a, 1.0), (c, -1.0)],
                Sense::Ge,
                0.0,
            )?;
        }
    }
    let Some(secondary) = secondary else {
        return Ok(());
    };
    let d_hi = spec
        .constraints
        .iter()
        .find_map(|c| match c {
            PropertyConstraint::DegreeBounds { nodes: None, hi, .. } => Some(*hi),
            _ => None,
        })
        .unwrap_or((n - 1) as f64);
    let (big_m, skip_last_pair) = match secondary {
        SecondaryCriterion::LocalClustering => (1.0, false),
        SecondaryCriterion::DistanceToLast => ((n - 2) as f64, true),
        SecondaryCriterion::SumNeighborDegrees => (d_hi * d_hi, false),
        SecondaryCriterion::InverseCloseness => (n as f64 / 2.0 - 1.0, false),
    };
    // (secondary value of i) - (secondary value of i+1), as terms
    let pair_terms = |b: &ModelBuilder, i: usize| -> Result<Vec<(VarId, f64)>, BuildError> {
        Ok(match secondary {
            SecondaryCriterion::LocalClustering => {
                let (Some(&a), Some(&c)) = (b.registry.pcc.get(&i), b.registry.pcc.get(&(i + 1)))
                else {
                    return Err(BuildError::SymmetryNeedsProperty);
                };
                vec![(a, 1.0), (c, -1.0)]
            }
            SecondaryCriterion::DistanceToLast => {
                let (Some(&a), Some(&c)) =
                    (b.registry.w.get(&(i, n)), b.registry.w.get(&(i + 1, n)))
                else {
                    return Err(BuildError::SymmetryNeedsProperty);
                };
                vec![(a, 1.0), (c, -1.0)]
            }
            SecondaryCriterion::SumNeighborDegrees => {
                let (Some(&a), Some(&c)) =
                    (b.registry.psdn.get(&i), b.registry.psdn.get(&(i + 1)))
                else {
                    return Err(BuildError::SymmetryNeedsProperty);
                };
                vec![(a, 1.0), (c, -1.0)]
            }
            // inverse closeness orders the other way around
            SecondaryCriterion::InverseCloseness => {
                let (Some(&a), Some(&c)) =
                    (b.registry.piclc.get(&i), b.registry.piclc.get(&(i + 1)))
                else {
                    return Err(BuildError::SymmetryNeedsProperty);
                };
                vec![(c, 1.0), (a, -1.0)]
            }
        })
    };
    let last = if skip_last_pair { n - 2 } else { n - 1 };
    for i in 1..=last.max(1).min(n - 1) {
        if skip_last_pair && i > n - 2 {
            break;
        }
        match degseq {
            Some(d) => {
                if d[i - 1] != d[i] {
                    continue;
                }
                let terms = pair_terms(b, i)?;
                b.model
                    .add_linear_constraint(format!("sym_sec_{i}"), terms, Sense::Ge, 0.0)?;
            }
            None => {
                let mut terms = pair_terms(b, i)?;
                terms.push((b.registry.pd[&i], big_m));
                terms.push((b.registry.pd[&(i + 1)], -big_m));
                b.model
                    .add_linear_constraint(format!("sym_sec_{i}"), terms, Sense::Ge, 0.0)?;
            }
        }
    }
    Ok(())
}
