//! Monte Carlo simulation of the repaired system.
//!
//! Failures are sampled round by round: an Exp(Psi(alive)) sojourn, a batch
//! size from the current row of P, then that many distinct victims drawn
//! uniformly from the alive components. Only Psi and P enter, so any
//! subordinator can be simulated without path discretisation.
//!
//! Randomness: replication `i` uses `ChaCha8Rng::seed_from_u64(seed)` switched
//! to stream `i` (`rand_chacha` 0.9). Results depend only on the seed, never on
//! the thread count.

use crate::error::{Error, Result};
use crate::failure_chain::transition_matrix;
use crate::policy::{evaluate_policy, CostModel, SignatureWeights};
use crate::structure::{structural_signature, SystemStructure};
use crate::subordinator::PsiTable;
use crate::failure_chain::FailureChain;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::Serialize;

/// Replication count used when none is given.
pub const DEFAULT_REPLICATIONS: usize = 1000;

/// One round of the sequential failure algorithm.
#[derive(Clone, Debug, PartialEq)]
pub struct FailureRound {
    pub sojourn: f64,
    /// Component indices (0-based) that fail together at the end of the sojourn.
    pub new_failures: Vec<usize>,
}

/// Precomputed sojourn laws and cumulative batch-size rows.
#[derive(Clone, Debug)]
pub struct FailureSampler {
    n: usize,
    sojourn: Vec<Exp<f64>>,
    // cum[i][j - i - 1] = P(next state <= j | i failed)
    cum: Vec<Vec<f64>>,
}

impl FailureSampler {
    pub fn new(psi: &PsiTable) -> Result<Self> {
        let n = psi.n();
        let p = transition_matrix(psi)?;
        let sojourn = (1..=n)
            .map(|a| Exp::new(psi.psi(a)).map_err(|e| Error::validation(e.to_string())))
            .collect::<Result<_>>()?;
        let cum = (0..n)
            .map(|i| {
                let mut acc = 0.0;
                let mut row: Vec<f64> = ((i + 1)..=n)
                    .map(|j| {
                        acc += p[(i, j)];
                        acc
                    })
                    .collect();
                *row.last_mut().unwrap() = 1.0;
                row
            })
            .collect();
        Ok(Self { n, sojourn, cum })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Draw the next round. The victims are removed from `alive`.
    pub fn sample_round<R: Rng + ?Sized>(&self, alive: &mut Vec<usize>, rng: &mut R) -> FailureRound {
        let n_alive = alive.len();
        assert!(n_alive >= 1 && n_alive <= self.n, "need 1..=n alive components");
        let sojourn = self.sojourn[n_alive - 1].sample(rng);
        let row = &self.cum[self.n - n_alive];
        let u: f64 = rng.random();
        let batch = row.iter().position(|&c| u < c).unwrap_or(row.len() - 1) + 1;
        let new_failures = (0..batch).map(|_| alive.swap_remove(rng.random_range(0..alive.len()))).collect();
        FailureRound { sojourn, new_failures }
    }
}

/// Free-function form: sample one round for a given alive set.
pub fn sample_failure_round<R: Rng + ?Sized>(
    sampler: &FailureSampler,
    alive: &mut Vec<usize>,
    rng: &mut R,
) -> FailureRound {
    sampler.sample_round(alive, rng)
}

#[derive(Clone, Debug)]
pub struct SimulationConfig {
    pub structure: SystemStructure,
    pub psi: PsiTable,
    pub r: usize,
    pub costs: CostModel,
    pub horizon: f64,
    pub replications: usize,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        let n = self.structure.n();
        if self.psi.n() != n || self.costs.n() != n {
            return Err(Error::validation(format!(
                "inconsistent n: structure {n}, Psi table {}, costs {}",
                self.psi.n(),
                self.costs.n()
            )));
        }
        if self.r == 0 || self.r > n {
            return Err(Error::validation(format!("r must be in 1..n (n = {n}), got {}", self.r)));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::validation(format!("horizon must be > 0, got {}", self.horizon)));
        }
        if self.replications == 0 {
            return Err(Error::validation("replications must be >= 1"));
        }
        Ok(())
    }
}

/// Estimates from one replication over [0, horizon].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicationEstimate {
    /// System-failure repairs over all repairs; None without repairs.
    pub p_hat: Option<f64>,
    /// Time of the last system failure over the number of system failures; None without one.
    pub e_t_fail_hat: Option<f64>,
    pub ltmn_hat: f64,
    pub ltmc_hat: f64,
    pub repairs: u64,
    pub system_failures: u64,
    pub component_failures: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Metric {
    #[serde(rename = "p")]
    P,
    #[serde(rename = "E_T_fail")]
    ETFail,
    #[serde(rename = "LTMN")]
    Ltmn,
    #[serde(rename = "LTMC")]
    Ltmc,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::P, Metric::ETFail, Metric::Ltmn, Metric::Ltmc];

    pub fn name(self) -> &'static str {
        match self {
            Metric::P => "p",
            Metric::ETFail => "E_T_fail",
            Metric::Ltmn => "LTMN",
            Metric::Ltmc => "LTMC",
        }
    }

    fn of(self, e: &ReplicationEstimate) -> Option<f64> {
        match self {
            Metric::P => e.p_hat,
            Metric::ETFail => e.e_t_fail_hat,
            Metric::Ltmn => Some(e.ltmn_hat),
            Metric::Ltmc => Some(e.ltmc_hat),
        }
    }
}

/// Quartiles of one estimator across replications that produced a value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricSummary {
    pub metric: Metric,
    pub count: usize,
    pub q25: Option<f64>,
    pub q50: Option<f64>,
    pub q75: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EventCounts {
    pub repairs: u64,
    pub system_failures: u64,
    pub component_failures: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationResult {
    pub r: usize,
    pub horizon: f64,
    pub seed: u64,
    pub replications: Vec<ReplicationEstimate>,
    pub summaries: Vec<MetricSummary>,
    pub events: EventCounts,
}

impl SimulationResult {
    pub fn summary(&self, metric: Metric) -> &MetricSummary {
        self.summaries.iter().find(|s| s.metric == metric).expect("all metrics summarised")
    }
}

/// Linear-interpolation quantile of sorted data (the usual "type 7").
pub fn quantile_sorted(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    Some(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

fn run_replication(cfg: &SimulationConfig, sampler: &FailureSampler, index: u64) -> ReplicationEstimate {
    let n = cfg.structure.n();
    let full = cfg.structure.full_mask();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let mut alive: Vec<usize> = (0..n).collect();
    let mut working = full;
    let mut t = 0.0;
    let (mut repairs, mut sys_failures, mut comp_failures) = (0u64, 0u64, 0u64);
    let mut cost = 0.0;
    let mut last_sys_failure = 0.0;
    loop {
        let round = sampler.sample_round(&mut alive, &mut rng);
        t += round.sojourn;
        if t > cfg.horizon {
            break;
        }
        for &c in &round.new_failures {
            working &= !(1u64 << c);
        }
        comp_failures += round.new_failures.len() as u64;
        let failed = n - alive.len();
        let down = !cfg.structure.is_working(working);
        if failed >= cfg.r || down {
            repairs += 1;
            cost += cfg.costs.c_cmp(failed);
            if down {
                sys_failures += 1;
                cost += cfg.costs.c_sys();
                last_sys_failure = t;
            }
            alive.clear();
            alive.extend(0..n);
            working = full;
        }
    }
    ReplicationEstimate {
        p_hat: (repairs > 0).then(|| sys_failures as f64 / repairs as f64),
        e_t_fail_hat: (sys_failures > 0).then(|| last_sys_failure / sys_failures as f64),
        ltmn_hat: comp_failures as f64 / cfg.horizon,
        ltmc_hat: cost / cfg.horizon,
        repairs,
        system_failures: sys_failures,
        component_failures: comp_failures,
    }
}

/// Run all replications of `cfg`.
pub fn simulate_policy(cfg: &SimulationConfig) -> Result<SimulationResult> {
    use rayon::prelude::*;
    cfg.validate()?;
    let sampler = FailureSampler::new(&cfg.psi)?;
    let replications: Vec<ReplicationEstimate> = (0..cfg.replications as u64)
        .into_par_iter()
        .map(|i| run_replication(cfg, &sampler, i))
        .collect();
    let summaries = Metric::ALL
        .iter()
        .map(|&metric| {
            let mut v: Vec<f64> = replications.iter().filter_map(|e| metric.of(e)).collect();
            v.sort_by(f64::total_cmp);
            MetricSummary {
                metric,
                count: v.len(),
                q25: quantile_sorted(&v, 0.25),
                q50: quantile_sorted(&v, 0.5),
                q75: quantile_sorted(&v, 0.75),
            }
        })
        .collect();
    let events = replications.iter().fold(EventCounts::default(), |mut acc, e| {
        acc.repairs += e.repairs;
        acc.system_failures += e.system_failures;
        acc.component_failures += e.component_failures;
        acc
    });
    Ok(SimulationResult { r: cfg.r, horizon: cfg.horizon, seed: cfg.seed, replications, summaries, events })
}

/// One row of the convergence table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub horizon: f64,
    pub r: usize,
    pub metric: Metric,
    pub q25: Option<f64>,
    pub q50: Option<f64>,
    pub q75: Option<f64>,
    /// Exact value; infinite E_T_fail when the system never fails.
    pub theoretical: f64,
}

/// Quartile bands of each estimator at each horizon, next to the exact values.
pub fn convergence_study(cfg: &SimulationConfig, horizons: &[f64]) -> Result<Vec<ConvergenceRow>> {
    cfg.validate()?;
    if horizons.is_empty() || horizons.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
        return Err(Error::validation("horizons must be positive"));
    }
    if horizons.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("horizons must be ascending"));
    }
    let sig = SignatureWeights::from(structural_signature(&cfg.structure)?);
    let exact = evaluate_policy(&sig, &FailureChain::new(&cfg.psi)?, cfg.r, &cfg.costs)?;
    let theory = |m: Metric| match m {
        Metric::P => exact.p,
        Metric::ETFail => exact.e_t_fail.as_f64(),
        Metric::Ltmn => exact.ltmn,
        Metric::Ltmc => exact.ltmc,
    };
    let mut rows = Vec::new();
    for &h in horizons {
        let res = simulate_policy(&SimulationConfig { horizon: h, ..cfg.clone() })?;
        for s in &res.summaries {
            rows.push(ConvergenceRow {
                horizon: h,
                r: cfg.r,
                metric: s.metric,
                q25: s.q25,
                q50: s.q50,
                q75: s.q75,
                theoretical: theory(s.metric),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subordinator::LaplaceExponent;

    fn cfg(structure: SystemStructure, psi: PsiTable, r: usize) -> SimulationConfig {
        let n = structure.n();
        SimulationConfig {
            structure,
            psi,
            r,
            costs: CostModel::linear(n, 1.0, 1.0).unwrap(),
            horizon: 200.0,
            replications: 20,
            seed: 7,
        }
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&v, 0.5), Some(2.5));
        assert_eq!(quantile_sorted(&v, 0.25), Some(1.75));
        assert_eq!(quantile_sorted(&[], 0.5), None);
    }

    #[test]
    fn drift_batches_are_single() {
        let psi = LaplaceExponent::pure_drift(1.0).unwrap().psi_table(4).unwrap();
        let s = FailureSampler::new(&psi).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let mut alive: Vec<usize> = (0..4).collect();
            assert_eq!(s.sample_round(&mut alive, &mut rng).new_failures.len(), 1);
        }
    }

    #[test]
    fn two_of_three_never_fails_with_r1() {
        let psi = LaplaceExponent::pure_drift(1.0).unwrap().psi_table(3).unwrap();
        let res = simulate_policy(&cfg(SystemStructure::k_out_of_n_f(3, 2).unwrap(), psi, 1)).unwrap();
        assert!(res.replications.iter().all(|e| e.p_hat == Some(0.0) && e.e_t_fail_hat.is_none()));
    }

    #[test]
    fn series_every_cycle_fails() {
        let psi = LaplaceExponent::pure_drift(1.0).unwrap().psi_table(3).unwrap();
        let res = simulate_policy(&cfg(SystemStructure::series(3).unwrap(), psi, 3)).unwrap();
        assert!(res.replications.iter().all(|e| e.p_hat == Some(1.0)));
        let cycles = res.events.repairs as f64;
        let mean_cycle = 200.0 * 20.0 / cycles;
        // ~12000 cycles; the mean is 1/3 with sd about 0.003
        assert!((mean_cycle - 1.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn rejects_bad_config() {
        let psi = LaplaceExponent::pure_drift(1.0).unwrap().psi_table(3).unwrap();
        let mut c = cfg(SystemStructure::series(3).unwrap(), psi, 0);
        assert!(simulate_policy(&c).is_err());
        c.r = 1;
        c.horizon = 0.0;
        assert!(simulate_policy(&c).is_err());
    }
}
