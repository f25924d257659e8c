//! Structure functions and their exact signatures.
//!
//! States are `u64` masks with bit `i` set when component `i + 1` works.

pub mod formula;
mod signature;

pub use signature::{minimal_signature, signature_via_permutations, structural_signature,
    structural_signature_with_cap, Signature, DEFAULT_ENUMERATION_CAP};

use crate::error::{Error, Result};
use formula::Expr;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// Serialized structure, e.g. `{"kind":"formula","n":3,"expr":"(1&2)|3"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemSpec {
    KOutOfNF { n: usize, k: usize },
    Series { n: usize },
    Parallel { n: usize },
    Formula { n: usize, expr: String },
    TwoTerminal { nodes: Vec<String>, edges: Vec<(String, String)>, source: String, target: String },
}

/// Undirected graph whose edges are the components.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoTerminal {
    nodes: Vec<String>,
    edges: Vec<(usize, usize)>,
    source: usize,
    target: usize,
    // adjacency: node -> (component, neighbour)
    adj: Vec<Vec<(usize, usize)>>,
}

impl TwoTerminal {
    pub fn new(nodes: Vec<String>, edges: &[(String, String)], source: &str, target: &str) -> Result<Self> {
        if nodes.len() > 64 {
            return Err(Error::validation("two-terminal graphs are limited to 64 nodes"));
        }
        let index: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != nodes.len() {
            return Err(Error::validation("duplicate node name"));
        }
        let look = |s: &str| {
            index.get(s).copied().ok_or_else(|| Error::validation(format!("unknown node {s:?}")))
        };
        let edges = edges
            .iter()
            .map(|(a, b)| Ok((look(a)?, look(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let (source, target) = (look(source)?, look(target)?);
        if source == target {
            return Err(Error::validation("source and target must differ"));
        }
        let mut adj = vec![Vec::new(); nodes.len()];
        for (c, &(a, b)) in edges.iter().enumerate() {
            adj[a].push((c, b));
            adj[b].push((c, a));
        }
        Ok(Self { nodes, edges, source, target, adj })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    /// Component `c + 1` joins `edges()[c].0` and `edges()[c].1` (node indices).
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    fn connected(&self, working: u64) -> bool {
        let mut reached = 1u64 << self.source;
        let mut frontier = reached;
        while frontier != 0 {
            let u = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            for &(c, v) in &self.adj[u] {
                if working >> c & 1 == 1 && reached >> v & 1 == 0 {
                    if v == self.target {
                        return true;
                    }
                    reached |= 1 << v;
                    frontier |= 1 << v;
                }
            }
        }
        false
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StructureKind {
    /// Fails once k or more components have failed.
    KOutOfNF { k: usize },
    Series,
    Parallel,
    Formula { expr: String, tree: Expr },
    TwoTerminal(TwoTerminal),
}

/// Binary structure function on n <= 64 components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemSpec", into = "SystemSpec")]
pub struct SystemStructure {
    n: usize,
    kind: StructureKind,
}

fn check_n(n: usize) -> Result<usize> {
    if n == 0 || n > 64 {
        Err(Error::validation(format!("n must be in 1..=64, got {n}")))
    } else {
        Ok(n)
    }
}

impl SystemStructure {
    pub fn k_out_of_n_f(n: usize, k: usize) -> Result<Self> {
        let n = check_n(n)?;
        if k == 0 || k > n {
            return Err(Error::validation(format!("k must be in 1..n, got k={k}, n={n}")));
        }
        Ok(Self { n, kind: StructureKind::KOutOfNF { k } })
    }

    pub fn series(n: usize) -> Result<Self> {
        Ok(Self { n: check_n(n)?, kind: StructureKind::Series })
    }

    pub fn parallel(n: usize) -> Result<Self> {
        Ok(Self { n: check_n(n)?, kind: StructureKind::Parallel })
    }

    pub fn formula(n: usize, expr: &str) -> Result<Self> {
        let n = check_n(n)?;
        let tree = formula::parse(expr, n)?;
        Ok(Self { n, kind: StructureKind::Formula { expr: expr.to_string(), tree } })
    }

    pub fn two_terminal(graph: TwoTerminal) -> Result<Self> {
        let n = check_n(graph.edges.len())?;
        Ok(Self { n, kind: StructureKind::TwoTerminal(graph) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &StructureKind {
        &self.kind
    }

    /// Mask with all n components working.
    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Phi on a working-set mask.
    pub fn is_working(&self, working: u64) -> bool {
        let working = working & self.full_mask();
        match &self.kind {
            StructureKind::KOutOfNF { k } => ((self.n as u32 - working.count_ones()) as usize) < *k,
            StructureKind::Series => working == self.full_mask(),
            StructureKind::Parallel => working != 0,
            StructureKind::Formula { tree, .. } => tree.eval(working),
            StructureKind::TwoTerminal(g) => g.connected(working),
        }
    }

    /// Phi on a state vector, `true` meaning the component works.
    pub fn evaluate(&self, state: &[bool]) -> Result<bool> {
        if state.len() != self.n {
            return Err(Error::validation(format!(
                "state has length {} but the system has {} components",
                state.len(),
                self.n
            )));
        }
        Ok(self.is_working(mask_of(state)))
    }

    /// Number of working states at each working-component count 0..=n.
    pub(crate) fn working_counts(&self) -> Vec<u64> {
        use rayon::prelude::*;
        let n = self.n;
        let total: u64 = 1 << n;
        let chunk_bits = n.min(16);
        let chunk: u64 = 1 << chunk_bits;
        let parts: Vec<Vec<u64>> = (0..total / chunk)
            .into_par_iter()
            .map(|c| {
                let mut counts = vec![0u64; n + 1];
                for m in c * chunk..(c + 1) * chunk {
                    if self.is_working(m) {
                        counts[m.count_ones() as usize] += 1;
                    }
                }
                counts
            })
            .collect();
        let mut counts = vec![0u64; n + 1];
        for p in parts {
            for (a, b) in counts.iter_mut().zip(p) {
                *a += b;
            }
        }
        counts
    }
}

pub(crate) fn mask_of(state: &[bool]) -> u64 {
    state.iter().enumerate().fold(0u64, |m, (i, &b)| if b { m | 1 << i } else { m })
}

fn state_of(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

/// Free-function form of [`SystemStructure::evaluate`].
pub fn evaluate_structure(structure: &SystemStructure, state: &[bool]) -> Result<bool> {
    structure.evaluate(state)
}

impl TryFrom<SystemSpec> for SystemStructure {
    type Error = Error;
    fn try_from(spec: SystemSpec) -> Result<Self> {
        match spec {
            SystemSpec::KOutOfNF { n, k } => Self::k_out_of_n_f(n, k),
            SystemSpec::Series { n } => Self::series(n),
            SystemSpec::Parallel { n } => Self::parallel(n),
            SystemSpec::Formula { n, expr } => Self::formula(n, &expr),
            SystemSpec::TwoTerminal { nodes, edges, source, target } => {
                Self::two_terminal(TwoTerminal::new(nodes, &edges, &source, &target)?)
            }
        }
    }
}

impl From<SystemStructure> for SystemSpec {
    fn from(s: SystemStructure) -> Self {
        let n = s.n;
        match s.kind {
            StructureKind::KOutOfNF { k } => SystemSpec::KOutOfNF { n, k },
            StructureKind::Series => SystemSpec::Series { n },
            StructureKind::Parallel => SystemSpec::Parallel { n },
            StructureKind::Formula { expr, .. } => SystemSpec::Formula { n, expr },
            StructureKind::TwoTerminal(g) => SystemSpec::TwoTerminal {
                edges: g.edges.iter().map(|&(a, b)| (g.nodes[a].clone(), g.nodes[b].clone())).collect(),
                source: g.nodes[g.source].clone(),
                target: g.nodes[g.target].clone(),
                nodes: g.nodes,
            },
        }
    }
}

/// Bundled structures.
pub mod builtin {
    use super::SystemStructure;

    pub const BRIDGE_JSON: &str = include_str!("../../data/systems/bridge.json");
    pub const ARPA_JSON: &str = include_str!("../../data/systems/arpa.json");

    /// (x1 and x2) or x3.
    pub fn bridge() -> SystemStructure {
        serde_json::from_str(BRIDGE_JSON).expect("bundled bridge spec")
    }

    /// 1970s ARPA network, 21 sites and 26 links, terminals UCSB and CMU.
    pub fn arpa() -> SystemStructure {
        serde_json::from_str(ARPA_JSON).expect("bundled ARPA spec")
    }
}

/// A way in which a structure fails to be semi-coherent.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    WorksWhenAllFailed,
    FailsWhenAllWorking,
    /// `lower` works, `upper` has a superset of working components but fails.
    NotMonotone { lower: Vec<bool>, upper: Vec<bool> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        match self {
            Violation::WorksWhenAllFailed => write!(f, "Phi(all failed) = 1"),
            Violation::FailsWhenAllWorking => write!(f, "Phi(all working) = 0"),
            Violation::NotMonotone { lower, upper } => write!(
                f,
                "not monotone: Phi({}) = 1 but Phi({}) = 0",
                bits(lower),
                bits(upper)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub exhaustive: bool,
    /// Comparable pairs examined.
    pub checked_pairs: u64,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violation {
            None => Ok(()),
            Some(v) => Err(Error::validation(format!("structure is not semi-coherent: {v}"))),
        }
    }
}

/// Largest n checked over every single-bit upgrade.
pub const EXHAUSTIVE_LIMIT: usize = 20;
/// Comparable pairs drawn when n is too large for the exhaustive check.
pub const RANDOM_PAIRS: u64 = 1_000_000;

/// Check Phi(0) = 0, Phi(1) = 1 and monotonicity.
pub fn validate_semi_coherent(structure: &SystemStructure) -> ValidationReport {
    let n = structure.n();
    let full = structure.full_mask();
    let mut report = ValidationReport { exhaustive: n <= EXHAUSTIVE_LIMIT, checked_pairs: 0, violation: None };
    if structure.is_working(0) {
        report.violation = Some(Violation::WorksWhenAllFailed);
        return report;
    }
    if !structure.is_working(full) {
        report.violation = Some(Violation::FailsWhenAllWorking);
        return report;
    }
    let bad = |lo: u64, hi: u64| Violation::NotMonotone { lower: state_of(lo, n), upper: state_of(hi, n) };
    if report.exhaustive {
        let phi: Vec<bool> = (0..=full).map(|m| structure.is_working(m)).collect();
        for m in 0..=full {
            if !phi[m as usize] {
                continue;
            }
            for i in 0..n {
                let up = m | 1 << i;
                if up != m {
                    report.checked_pairs += 1;
                    if !phi[up as usize] {
                        report.violation = Some(bad(m, up));
                        return report;
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5e31_c0e7);
        for _ in 0..RANDOM_PAIRS {
            let lo = rng.random::<u64>() & full;
            let extra = rng.random::<u64>() & rng.random::<u64>() & full & !lo;
            let hi = lo | extra | (1 << rng.random_range(0..n));
            report.checked_pairs += 1;
            if structure.is_working(lo) && !structure.is_working(hi) {
                report.violation = Some(bad(lo, hi));
                return report;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_examples() {
        let b = builtin::bridge();
        assert!(b.evaluate(&[true, false, true]).unwrap());
        assert!(!b.evaluate(&[false; 3]).unwrap());
        assert!(b.evaluate(&[true, true]).is_err());
        let k = SystemStructure::k_out_of_n_f(3, 2).unwrap();
        assert!(!k.evaluate(&[true, false, false]).unwrap());
        assert!(k.evaluate(&[true, true, false]).unwrap());
    }

    #[test]
    fn validation_examples() {
        assert!(validate_semi_coherent(&builtin::bridge()).is_valid());
        let one = SystemStructure::formula(2, "true").unwrap();
        assert_eq!(validate_semi_coherent(&one).violation, Some(Violation::WorksWhenAllFailed));
        let xor = SystemStructure::formula(2, "1 ^ 2").unwrap();
        assert!(!validate_semi_coherent(&xor).is_valid());
        let xor = SystemStructure::formula(3, "(1 ^ 2) | 3").unwrap();
        let r = validate_semi_coherent(&xor);
        assert!(matches!(r.violation, Some(Violation::NotMonotone { .. })), "{r:?}");
        assert!(validate_semi_coherent(&builtin::arpa()).is_valid());
    }

    #[test]
    fn spec_round_trip() {
        for json in [
            r#"{"kind":"k_out_of_n_f","n":5,"k":3}"#,
            r#"{"kind":"formula","n":3,"expr":"(1&2)|3"}"#,
            r#"{"kind":"two_terminal","nodes":["a","b","c"],"edges":[["a","b"],["b","c"]],"source":"a","target":"c"}"#,
        ] {
            let s: SystemStructure = serde_json::from_str(json).unwrap();
            assert_eq!(serde_json::to_string(&s).unwrap(), json);
        }
        assert!(serde_json::from_str::<SystemStructure>(r#"{"kind":"k_out_of_n_f","n":3,"k":4}"#).is_err());
    }
}
