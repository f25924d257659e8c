//! Repair-threshold (r-out-of-n:R) policies for semi-coherent systems whose
//! components fail according to a Levy-frailty Marshall-Olkin law.
//!
//! The pipeline is: a [`subordinator::LaplaceExponent`] gives Psi(1..n), a
//! [`failure_chain::FailureChain`] turns that into the chain of failed-component
//! counts, a [`structure::Signature`] summarises the system, and
//! [`policy::evaluate_policy`] combines the two. [`oracle`] and [`simulate`]
//! check the result by brute force and by Monte Carlo.
//!
//! ```
//! use lfmo_repair::prelude::*;
//!
//! let psi = LaplaceExponent::compound_poisson_exp(0.9, 0.2, 1.0)?.psi_table(3)?;
//! let chain = FailureChain::new(&psi)?;
//! let sig = structural_signature(&builtin::bridge())?;
//! let costs = CostModel::linear(3, 1.0, 30.0)?;
//! let ev = evaluate_policy(&SignatureWeights::from(&sig), &chain, 2, &costs)?;
//! assert!((ev.ltmc - 26.5409).abs() < 1e-3);
//! # Ok::<(), lfmo_repair::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod failure_chain;
pub mod numeric;
pub mod oracle;
pub mod policy;
pub mod report;
pub mod simulate;
pub mod spec;
pub mod structure;
pub mod subordinator;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::failure_chain::FailureChain;
    pub use crate::oracle::FullStateModel;
    pub use crate::policy::{
        evaluate_policy, iid_policy, kofn_policy, process_signature, sweep_policies, system_mttf, system_survival,
        CostModel, FailureTime, PolicyEvaluation, SignatureWeights,
    };
    pub use crate::simulate::{convergence_study, simulate_policy, SimulationConfig};
    pub use crate::structure::{builtin, structural_signature, Signature, SystemStructure};
    pub use crate::subordinator::{LaplaceExponent, PsiTable};
}
