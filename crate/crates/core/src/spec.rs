//! JSON run descriptions: which system, which subordinator, which costs,
//! which policy, where the output goes.

use crate::error::{Error, Result};
use crate::policy::{CostModel, SignatureWeights};
use crate::structure::{Signature, SystemStructure};
use crate::subordinator::{LaplaceExponent, PsiTable};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// `c_cmp` is either the full vector or `{"linear": unit}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComponentCosts {
    Vector(Vec<f64>),
    Linear { linear: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSpec {
    pub c_cmp: ComponentCosts,
    pub c_sys: f64,
}

impl CostSpec {
    pub fn to_model(&self, n: usize) -> Result<CostModel> {
        match &self.c_cmp {
            ComponentCosts::Vector(v) => {
                if v.len() != n {
                    return Err(Error::validation(format!("c_cmp has {} entries, the system has n = {n}", v.len())));
                }
                CostModel::new(v.clone(), self.c_sys)
            }
            ComponentCosts::Linear { linear } => CostModel::linear(n, *linear, self.c_sys),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolicySpec {
    Threshold { r: usize },
    Sweep { sweep: bool },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replications: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizons: Option<Vec<f64>>,
}

/// A complete run. Every section except `system` is optional in the file;
/// missing parts can come from command line flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub system: SystemStructure,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subordinator: Option<LaplaceExponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<CostSpec>,
    /// Exact signature entries ("9/325"); used instead of enumerating the structure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::validation(format!("{}: {e}", path.display())))
}

impl RunSpec {
    pub fn from_file(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }

    pub fn psi_table(&self) -> Result<PsiTable> {
        self.subordinator
            .as_ref()
            .ok_or_else(|| Error::validation("no subordinator given"))?
            .psi_table(self.n())
    }

    pub fn cost_model(&self) -> Result<CostModel> {
        self.costs.as_ref().ok_or_else(|| Error::validation("no costs given"))?.to_model(self.n())
    }

    /// The supplied signature if any, else the structural one.
    pub fn signature(&self) -> Result<Signature> {
        match &self.signature {
            Some(entries) => {
                let refs: Vec<&str> = entries.iter().map(String::as_str).collect();
                let sig = Signature::parse(&refs)?;
                if sig.n() != self.n() {
                    return Err(Error::validation(format!(
                        "signature has {} entries, the system has n = {}",
                        sig.n(),
                        self.n()
                    )));
                }
                Ok(sig)
            }
            None => crate::structure::structural_signature(&self.system),
        }
    }

    pub fn signature_weights(&self) -> Result<SignatureWeights> {
        Ok(SignatureWeights::from(self.signature()?))
    }
}
