//! Declarative network specifications: which properties the generated graph
//! must attain, and how the search should be steered.
//!
//! Specs serialize to a versioned JSON schema; unknown fields are rejected
//! rather than ignored, since silently dropped constraints are the main user
//! hazard in a declarative format.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SPEC_FORMAT_VERSION: u32 = 1;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lo - tol && v <= self.hi + tol
    }

    /// Distance from a value to the band (0 inside).
    pub fn deviation(&self, v: f64) -> f64 {
        if v < self.lo {
            self.lo - v
        } else if v > self.hi {
            v - self.hi
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PropertyConstraint {
    /// Degree bounds applied to every node (or a subset of nodes).
    DegreeBounds {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nodes: Option<Vec<usize>>,
        lo: f64,
        hi: f64,
    },
    /// Full degree sequence, sorted non-increasing; one value per node.
    DegreeSequence { values: Vec<usize> },
    AvgClustering { band: Band },
    GlobalClustering { band: Band },
    AvgPathLength { band: Band },
    CharPathLength { band: Band },
    Diameter { band: Band },
    /// One closeness-centrality band per node, assigned one-to-one.
    ClosenessSequence { bands: Vec<Band> },
    /// Average neighbor degree bands per degree class q (q >= 1).
    AdnByDegree { bands: Vec<(usize, Band)> },
    /// Requires max degree minus min degree to be at least `span`.
    MinDegreeSpan { span: usize },
    /// Excludes the null graph (max degree at least 1).
    NonNull,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveProperty {
    AvgClustering,
    GlobalClustering,
    AvgPathLength,
    CharPathLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    /// Minimize the total deviation from the specification (default).
    MinSlack,
    /// Maximize a property, with the specification enforced exactly.
    Maximize { property: ObjectiveProperty },
    Minimize { property: ObjectiveProperty },
}

impl Default for ObjectiveSpec {
    fn default() -> Self {
        ObjectiveSpec::MinSlack
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondaryCriterion {
    LocalClustering,
    DistanceToLast,
    SumNeighborDegrees,
    InverseCloseness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymmetryConfig {
    None,
    /// Nodes ordered by non-increasing degree.
    Primary,
    /// Degree ordering plus a tie-breaking secondary property.
    PrimarySecondary { secondary: SecondaryCriterion },
}

impl Default for SymmetryConfig {
    fn default() -> Self {
        SymmetryConfig::Primary
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotifMode {
    /// One constraint per required/absent edge; tighter LP relaxation.
    Disaggregated,
    /// Two aggregate constraints; smaller model, binary motif variables.
    Aggregated,
}

impl Default for MotifMode {
    fn default() -> Self {
        MotifMode::Disaggregated
    }
}

fn default_epsilon() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    #[serde(default = "default_version")]
    pub version: u32,
    pub n: usize,
    pub constraints: Vec<PropertyConstraint>,
    #[serde(default)]
    pub objective: ObjectiveSpec,
    #[serde(default)]
    pub symmetry: SymmetryConfig,
    #[serde(default)]
    pub motif_mode: MotifMode,
    /// Activation offset for degree-threshold indicators.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

fn default_version() -> u32 {
    SPEC_FORMAT_VERSION
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("unsupported spec version {0} (expected {SPEC_FORMAT_VERSION})")]
    BadVersion(u32),
    #[error("node count must be at least 2, got {0}")]
    TooFewNodes(usize),
    #[error("at most one degree sequence constraint is allowed")]
    MultipleDegreeSequences,
    #[error("degree sequence must have exactly {0} values")]
    DegreeSequenceLength(usize),
    #[error("degree sequence values must be sorted non-increasing")]
    DegreeSequenceUnsorted,
    #[error("degree {0} out of range [0, {1}]")]
    DegreeOutOfRange(usize, usize),
    #[error("band [{0}, {1}] is inverted")]
    InvertedBand(f64, f64),
    #[error("band [{0}, {1}] outside the analytic range [{2}, {3}]")]
    BandOutOfRange(f64, f64, f64, f64),
    #[error("closeness sequence must have exactly {0} bands")]
    ClosenessSequenceLength(usize),
    #[error("closeness bands must be strictly positive")]
    NonPositiveCloseness,
    #[error("adn band degree class {0} out of range [1, {1}]")]
    AdnDegreeOutOfRange(usize, usize),
    #[error("duplicate adn band for degree class {0}")]
    DuplicateAdnBand(usize),
    #[error("node {0} out of range [1, {1}]")]
    NodeOutOfRange(usize, usize),
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl NetworkSpec {
    pub fn new(n: usize, constraints: Vec<PropertyConstraint>) -> Self {
        Self {
            version: SPEC_FORMAT_VERSION,
            n,
            constraints,
            objective: ObjectiveSpec::default(),
            symmetry: SymmetryConfig::default(),
            motif_mode: MotifMode::default(),
            epsilon: default_epsilon(),
        }
    }

    pub fn degree_sequence(&self) -> Option<&[usize]> {
        self.constraints.iter().find_map(|c| match c {
            PropertyConstraint::DegreeSequence { values } => Some(values.as_slice()),
            _ => None,
        })
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.version != SPEC_FORMAT_VERSION {
            return Err(SpecError::BadVersion(self.version));
        }
        if self.n < 2 {
            return Err(SpecError::TooFewNodes(self.n));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(SpecError::BadEpsilon(self.epsilon));
        }
        let n = self.n;
        let dmax = n - 1;
        let mut seen_degseq = false;
        for c in &self.constraints {
            match c {
                PropertyConstraint::DegreeBounds { nodes, lo, hi } => {
                    check_band(*lo, *hi, 0.0, dmax as f64)?;
                    if let Some(nodes) = nodes {
                        for &i in nodes {
                            if i < 1 || i > n {
                                return Err(SpecError::NodeOutOfRange(i, n));
                            }
                        }
                    }
                }
                PropertyConstraint::DegreeSequence { values } => {
                    if seen_degseq {
                        return Err(SpecError::MultipleDegreeSequences);
                    }
                    seen_degseq = true;
                    if values.len() != n {
                        return Err(SpecError::DegreeSequenceLength(n));
                    }
                    if values.windows(2).any(|w| w[0] < w[1]) {
                        return Err(SpecError::DegreeSequenceUnsorted);
                    }
                    for &d in values {
                        if d > dmax {
                            return Err(SpecError::DegreeOutOfRange(d, dmax));
                        }
                    }
                }
                PropertyConstraint::AvgClustering { band }
                | PropertyConstraint::GlobalClustering { band } => {
                    check_band(band.lo, band.hi, 0.0, 1.0)?;
                }
                PropertyConstraint::AvgPathLength { band }
                | PropertyConstraint::CharPathLength { band }
                | PropertyConstraint::Diameter { band } => {
                    check_band(band.lo, band.hi, 1.0, dmax as f64)?;
                }
                PropertyConstraint::ClosenessSequence { bands } => {
                    if bands.len() != n {
                        return Err(SpecError::ClosenessSequenceLength(n));
                    }
                    for b in bands {
                        if b.lo > b.hi {
                            return Err(SpecError::InvertedBand(b.lo, b.hi));
                        }
                        if b.lo <= 0.0 {
                            return Err(SpecError::NonPositiveCloseness);
                        }
                        check_band(b.lo, b.hi, 0.0, 1.0)?;
                    }
                }
                PropertyConstraint::AdnByDegree { bands } => {
                    let mut seen = std::collections::HashSet::new();
                    for (q, b) in bands {
                        if *q < 1 || *q > dmax {
                            return Err(SpecError::AdnDegreeOutOfRange(*q, dmax));
                        }
                        if !seen.insert(*q) {
                            return Err(SpecError::DuplicateAdnBand(*q));
                        }
                        if b.lo > b.hi {
                            return Err(SpecError::InvertedBand(b.lo, b.hi));
                        }
                    }
                }
                PropertyConstraint::MinDegreeSpan { span } => {
                    if *span > dmax {
                        return Err(SpecError::DegreeOutOfRange(*span, dmax));
                    }
                }
                PropertyConstraint::NonNull => {}
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, SpecError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let spec: NetworkSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }
}

fn check_band(lo: f64, hi: f64, min: f64, max: f64) -> Result<(), SpecError> {
    if lo > hi {
        return Err(SpecError::InvertedBand(lo, hi));
    }
    if lo < min || hi > max {
        return Err(SpecError::BandOutOfRange(lo, hi, min, max));
    }
    Ok(())
}
