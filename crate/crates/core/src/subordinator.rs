//! Laplace exponents of Levy subordinators and the table of Psi(1..n)
//! that everything downstream consumes.

use crate::error::{Error, Result};
use crate::numeric::Dd;
use serde::{Deserialize, Serialize};

/// Relative tolerance for the concavity check on forward differences.
pub const CONCAVITY_TOL: f64 = 1e-12;

/// Serialized form of a subordinator, e.g. `{"kind":"cpp_exp","mu":0.9,"lambda":0.2,"gamma":1.0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubordinatorSpec {
    PureDrift { mu: f64 },
    CppExp { mu: f64, lambda: f64, gamma: f64 },
    Gamma { beta: f64, eta: f64 },
    InverseGaussian { beta: f64, eta: f64 },
    Stable { alpha: f64 },
    Table { values: Vec<f64> },
}

/// Parameters of a validated exponent.
#[derive(Clone, Debug, PartialEq)]
pub enum ExponentKind {
    PureDrift { mu: f64 },
    CompoundPoissonExp { mu: f64, lambda: f64, gamma: f64 },
    Gamma { beta: f64, eta: f64 },
    InverseGaussian { beta: f64, eta: f64 },
    Stable { alpha: f64 },
    /// Psi(1..len) supplied directly.
    Table(Vec<f64>),
}

/// Laplace exponent Psi with E[exp(-x L_t)] = exp(-t Psi(x)).
///
/// Only constructible through the validating constructors, so every value
/// in circulation has admissible parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SubordinatorSpec", into = "SubordinatorSpec")]
pub struct LaplaceExponent {
    kind: ExponentKind,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::validation(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl LaplaceExponent {
    pub fn pure_drift(mu: f64) -> Result<Self> {
        let mu = positive("mu", mu)?;
        Ok(Self { kind: ExponentKind::PureDrift { mu } })
    }

    /// Drift plus compound Poisson with Exp(gamma) jumps.
    pub fn compound_poisson_exp(mu: f64, lambda: f64, gamma: f64) -> Result<Self> {
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(Error::validation(format!("mu must be finite and >= 0, got {mu}")));
        }
        let lambda = positive("lambda", lambda)?;
        let gamma = positive("gamma", gamma)?;
        Ok(Self { kind: ExponentKind::CompoundPoissonExp { mu, lambda, gamma } })
    }

    pub fn gamma(beta: f64, eta: f64) -> Result<Self> {
        Ok(Self { kind: ExponentKind::Gamma { beta: positive("beta", beta)?, eta: positive("eta", eta)? } })
    }

    pub fn inverse_gaussian(beta: f64, eta: f64) -> Result<Self> {
        Ok(Self {
            kind: ExponentKind::InverseGaussian { beta: positive("beta", beta)?, eta: positive("eta", eta)? },
        })
    }

    pub fn stable(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::validation(format!("alpha must lie in (0,1), got {alpha}")));
        }
        Ok(Self { kind: ExponentKind::Stable { alpha } })
    }

    /// Raw values Psi(1), ..., Psi(m), checked like any [`PsiTable`].
    pub fn table(values: Vec<f64>) -> Result<Self> {
        PsiTable::from_values(values.clone())?;
        Ok(Self { kind: ExponentKind::Table(values) })
    }

    pub fn kind(&self) -> &ExponentKind {
        &self.kind
    }

    /// Largest n for which `psi_table(n)` is defined, if limited.
    pub fn max_n(&self) -> Option<usize> {
        match &self.kind {
            ExponentKind::Table(v) => Some(v.len()),
            _ => None,
        }
    }

    /// Psi(x). Table exponents are only defined on 0..=len.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        Ok(self.evaluate_precise(x)?.to_f64())
    }

    pub(crate) fn evaluate_precise(&self, x: f64) -> Result<Dd> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::validation(format!("Psi is evaluated at x >= 0, got {x}")));
        }
        if x == 0.0 {
            return Ok(Dd::ZERO);
        }
        let xd = Dd::from_f64(x);
        let v = match self.kind {
            ExponentKind::PureDrift { mu } => xd * mu,
            ExponentKind::CompoundPoissonExp { mu, lambda, gamma } => {
                xd * mu + xd * lambda / (xd + gamma)
            }
            ExponentKind::Gamma { beta, eta } => (xd / eta + 1.0).ln() * beta,
            // beta (sqrt(2x + eta^2) - eta) rewritten without the subtraction
            ExponentKind::InverseGaussian { beta, eta } => {
                let root = (xd * 2.0 + Dd::from_f64(eta) * eta).sqrt();
                xd * 2.0 * beta / (root + eta)
            }
            ExponentKind::Stable { alpha } => xd.powf(alpha),
            ExponentKind::Table(ref values) => {
                let k = x as usize;
                if k as f64 != x || k > values.len() {
                    return Err(Error::validation(format!(
                        "table exponent is defined on 0..={} only, got {x}",
                        values.len()
                    )));
                }
                Dd::from_f64(values[k - 1])
            }
        };
        Ok(v)
    }

    /// Psi(1..n), validated.
    pub fn psi_table(&self, n: usize) -> Result<PsiTable> {
        if n == 0 {
            return Err(Error::validation("n must be >= 1"));
        }
        if let Some(m) = self.max_n() {
            if n > m {
                return Err(Error::validation(format!("table exponent has {m} values, {n} requested")));
            }
        }
        let precise = (1..=n)
            .map(|k| self.evaluate_precise(k as f64))
            .collect::<Result<Vec<_>>>()?;
        PsiTable::from_precise(precise)
    }
}

/// Convenience wrapper matching the free-function style of the rest of the API.
pub fn psi_table(exponent: &LaplaceExponent, n: usize) -> Result<PsiTable> {
    exponent.psi_table(n)
}

impl TryFrom<SubordinatorSpec> for LaplaceExponent {
    type Error = Error;
    fn try_from(spec: SubordinatorSpec) -> Result<Self> {
        match spec {
            SubordinatorSpec::PureDrift { mu } => Self::pure_drift(mu),
            SubordinatorSpec::CppExp { mu, lambda, gamma } => Self::compound_poisson_exp(mu, lambda, gamma),
            SubordinatorSpec::Gamma { beta, eta } => Self::gamma(beta, eta),
            SubordinatorSpec::InverseGaussian { beta, eta } => Self::inverse_gaussian(beta, eta),
            SubordinatorSpec::Stable { alpha } => Self::stable(alpha),
            SubordinatorSpec::Table { values } => Self::table(values),
        }
    }
}

impl From<LaplaceExponent> for SubordinatorSpec {
    fn from(e: LaplaceExponent) -> Self {
        match e.kind {
            ExponentKind::PureDrift { mu } => SubordinatorSpec::PureDrift { mu },
            ExponentKind::CompoundPoissonExp { mu, lambda, gamma } => SubordinatorSpec::CppExp { mu, lambda, gamma },
            ExponentKind::Gamma { beta, eta } => SubordinatorSpec::Gamma { beta, eta },
            ExponentKind::InverseGaussian { beta, eta } => SubordinatorSpec::InverseGaussian { beta, eta },
            ExponentKind::Stable { alpha } => SubordinatorSpec::Stable { alpha },
            ExponentKind::Table(values) => SubordinatorSpec::Table { values },
        }
    }
}

/// Psi(1), ..., Psi(n). Positive, strictly increasing, concave differences.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiTable {
    values: Vec<f64>,
    precise: Vec<Dd>,
}

impl PsiTable {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::from_precise(values.into_iter().map(Dd::from_f64).collect())
    }

    fn from_precise(precise: Vec<Dd>) -> Result<Self> {
        if precise.is_empty() {
            return Err(Error::validation("Psi table must hold at least one value"));
        }
        let mut prev = Dd::ZERO;
        let mut prev_diff: Option<Dd> = None;
        for (i, &v) in precise.iter().enumerate() {
            let k = i + 1;
            if !v.is_finite() || v.hi <= 0.0 {
                return Err(Error::validation(format!("Psi({k}) must be finite and > 0, got {}", v.to_f64())));
            }
            let diff = v - prev;
            if diff.hi <= 0.0 {
                return Err(Error::validation(format!("Psi must be strictly increasing, fails at {k}")));
            }
            if let Some(pd) = prev_diff {
                if (diff - pd).to_f64() > CONCAVITY_TOL * pd.to_f64().abs().max(v.to_f64()) {
                    return Err(Error::validation(format!(
                        "Psi must have nonincreasing forward differences, fails at {k}"
                    )));
                }
            }
            prev_diff = Some(diff);
            prev = v;
        }
        let values = precise.iter().map(|d| d.to_f64()).collect();
        Ok(Self { values, precise })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Psi(1..n) as plain floats.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Psi(k) for k in 0..=n.
    pub fn psi(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.values[k - 1]
        }
    }

    pub(crate) fn psi_dd(&self, k: usize) -> Dd {
        if k == 0 {
            Dd::ZERO
        } else {
            self.precise[k - 1]
        }
    }

    /// Same exponent restricted to the first m components.
    pub fn truncate(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.n() {
            return Err(Error::validation(format!("cannot truncate a table of {} to {m}", self.n())));
        }
        Ok(Self { values: self.values[..m].to_vec(), precise: self.precise[..m].to_vec() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cpp_values() {
        let e = LaplaceExponent::compound_poisson_exp(0.9, 0.2, 1.0).unwrap();
        assert_eq!(e.evaluate(1.0).unwrap(), 1.0);
        assert!((e.evaluate(3.0).unwrap() - 2.85).abs() < 1e-15);
        let t = e.psi_table(3).unwrap();
        assert!((t.values()[1] - 1.933_333_333_333_333_3).abs() < 1e-15);
    }

    #[test]
    fn simple_tables() {
        let t = LaplaceExponent::pure_drift(1.0).unwrap().psi_table(3).unwrap();
        assert_eq!(t.values(), &[1.0, 2.0, 3.0]);
        let t = LaplaceExponent::stable(0.5).unwrap().psi_table(4).unwrap();
        for (k, v) in t.values().iter().enumerate() {
            assert!((v - ((k + 1) as f64).sqrt()).abs() < 1e-15);
        }
        assert_eq!(t.psi(0), 0.0);
    }

    #[test]
    fn inverse_gaussian_matches_textbook_form() {
        let e = LaplaceExponent::inverse_gaussian(1.5, 0.7).unwrap();
        for x in [0.5, 1.0, 7.0, 40.0] {
            let direct = 1.5 * ((2.0 * x + 0.49f64).sqrt() - 0.7);
            assert!((e.evaluate(x).unwrap() - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LaplaceExponent::pure_drift(0.0).is_err());
        assert!(LaplaceExponent::compound_poisson_exp(-1.0, 0.2, 1.0).is_err());
        assert!(LaplaceExponent::compound_poisson_exp(0.0, 0.0, 1.0).is_err());
        assert!(LaplaceExponent::gamma(1.0, -2.0).is_err());
        assert!(LaplaceExponent::stable(1.0).is_err());
        assert!(LaplaceExponent::stable(f64::NAN).is_err());
        assert!(LaplaceExponent::pure_drift(1.0).unwrap().psi_table(0).is_err());
    }

    #[test]
    fn table_checks_shape() {
        assert!(LaplaceExponent::table(vec![1.0, 1.5, 1.8]).is_ok());
        assert!(LaplaceExponent::table(vec![1.0, 1.0]).is_err());
        assert!(LaplaceExponent::table(vec![1.0, 1.2, 1.9]).is_err());
        assert!(LaplaceExponent::table(vec![]).is_err());
        let e = LaplaceExponent::table(vec![1.0, 1.5]).unwrap();
        assert!(e.psi_table(3).is_err());
        assert!(e.evaluate(1.5).is_err());
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{"kind":"cpp_exp","mu":0.9,"lambda":0.2,"gamma":1.0}"#;
        let e: LaplaceExponent = serde_json::from_str(json).unwrap();
        assert_eq!(e, LaplaceExponent::compound_poisson_exp(0.9, 0.2, 1.0).unwrap());
        assert_eq!(serde_json::to_string(&e).unwrap(), json);
        assert!(serde_json::from_str::<LaplaceExponent>(r#"{"kind":"stable","alpha":2.0}"#).is_err());
    }
}
