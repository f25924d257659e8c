//! Brute-force reference: the CTMC on failed-component sets, one Poisson
//! shock stream per nonempty subset, solved by first-step analysis.
//!
//! Shares nothing with `failure_chain` or `policy` beyond the Psi values.

use crate::error::{Error, Result};
use crate::numeric::{binom, neumaier_sum};
use crate::policy::CostModel;
use crate::structure::SystemStructure;
use crate::subordinator::PsiTable;
use nalgebra::DMatrix;
use serde::Serialize;

/// State-space guard: 2^12 failed sets.
pub const MAX_ORACLE_N: usize = 12;

#[derive(Clone, Debug)]
pub struct FullStateModel {
    structure: SystemStructure,
    /// rate of a shock hitting one particular set of size m, index m - 1
    set_rates: Vec<f64>,
}

/// One repair cycle from the all-working state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleMetrics {
    pub r: usize,
    pub p: f64,
    pub e_t_rep: f64,
    /// Indexed by j - 1.
    pub n_rep_dist: Vec<f64>,
    pub e_c_rep: f64,
    pub ltmc: f64,
}

impl FullStateModel {
    pub fn new(structure: &SystemStructure, psi: &PsiTable) -> Result<Self> {
        let n = structure.n();
        if n > MAX_ORACLE_N {
            return Err(Error::validation(format!("oracle needs n <= {MAX_ORACLE_N}, got {n}")));
        }
        if psi.n() != n {
            return Err(Error::validation(format!("Psi table has n = {}, structure has n = {n}", psi.n())));
        }
        // lambda_V = sum_{j=n-m}^{n} (-1)^{j-n+m+1} C(m, n-j) Psi(j), m = |V|
        let set_rates: Vec<f64> = (1..=n)
            .map(|m| {
                let v = neumaier_sum((n - m..=n).map(|j| {
                    let sign = if (j + m + 1 - n).is_multiple_of(2) { 1.0 } else { -1.0 };
                    sign * binom(m, n - j) as f64 * psi.psi(j)
                }));
                v.max(0.0)
            })
            .collect();
        let model = Self { structure: structure.clone(), set_rates };
        let total = neumaier_sum((1..=n).map(|m| binom(n, m) as f64 * model.set_rates[m - 1]));
        if (total - psi.psi(n)).abs() > 1e-9 * psi.psi(n).max(1.0) {
            return Err(Error::numeric(format!("outgoing rate {total} differs from Psi(n) = {}", psi.psi(n))));
        }
        Ok(model)
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }

    /// Rate of a shock hitting exactly a given set of `m` components.
    pub fn set_rate(&self, m: usize) -> f64 {
        self.set_rates[m - 1]
    }

    fn system_down(&self, failed: u64) -> bool {
        !self.structure.is_working(self.structure.full_mask() & !failed)
    }

    /// Solve one cycle of the r-out-of-n:R policy.
    pub fn cycle_metrics(&self, r: usize, costs: &CostModel) -> Result<OracleMetrics> {
        let n = self.n();
        if r == 0 || r > n {
            return Err(Error::validation(format!("r must be in 1..n (n = {n}), got {r}")));
        }
        if costs.n() != n {
            return Err(Error::validation(format!("cost model has n = {}, system has n = {n}", costs.n())));
        }
        let states = 1usize << n;
        let absorbing = |f: u64| f.count_ones() as usize >= r || self.system_down(f);
        let mut index = vec![usize::MAX; states];
        let mut transient = Vec::new();
        for f in 0..states as u64 {
            if !absorbing(f) {
                index[f as usize] = transient.len();
                transient.push(f);
            }
        }
        let t = transient.len();
        // columns: time, system failure, cost, then N = 1..n
        let cols = 3 + n;
        let mut a = DMatrix::<f64>::identity(t, t);
        let mut b = DMatrix::<f64>::zeros(t, cols);
        for (row, &f) in transient.iter().enumerate() {
            let moves: Vec<(u64, f64)> = (1..states as u64)
                .filter(|v| v & !f != 0)
                .map(|v| (f | v, self.set_rates[v.count_ones() as usize - 1]))
                .filter(|&(_, rate)| rate > 0.0)
                .collect();
            let total = neumaier_sum(moves.iter().map(|m| m.1));
            b[(row, 0)] = 1.0 / total;
            for (to, rate) in moves {
                let w = rate / total;
                if absorbing(to) {
                    let j = to.count_ones() as usize;
                    let down = self.system_down(to);
                    if down {
                        b[(row, 1)] += w;
                    }
                    b[(row, 2)] += w * (costs.c_cmp(j) + if down { costs.c_sys() } else { 0.0 });
                    b[(row, 2 + j)] += w;
                } else {
                    a[(row, index[to as usize])] -= w;
                }
            }
        }
        let x = a
            .lu()
            .solve(&b)
            .ok_or_else(|| Error::numeric("singular first-step system"))?;
        let start = index[0];
        let e_t_rep = x[(start, 0)];
        let e_c_rep = x[(start, 2)];
        Ok(OracleMetrics {
            r,
            p: x[(start, 1)],
            e_t_rep,
            n_rep_dist: (1..=n).map(|j| x[(start, 2 + j)]).collect(),
            e_c_rep,
            ltmc: e_c_rep / e_t_rep,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subordinator::LaplaceExponent;

    #[test]
    fn series_two_drift() {
        let psi = LaplaceExponent::pure_drift(1.0).unwrap().psi_table(2).unwrap();
        let m = FullStateModel::new(&SystemStructure::series(2).unwrap(), &psi).unwrap();
        let out = m.cycle_metrics(2, &CostModel::linear(2, 1.0, 0.0).unwrap()).unwrap();
        assert!((out.p - 1.0).abs() < 1e-15);
        assert!((out.e_t_rep - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bridge_r1() {
        let psi = LaplaceExponent::compound_poisson_exp(0.9, 0.2, 1.0).unwrap().psi_table(3).unwrap();
        let m = FullStateModel::new(&crate::structure::builtin::bridge(), &psi).unwrap();
        let out = m.cycle_metrics(1, &CostModel::linear(3, 1.0, 30.0).unwrap()).unwrap();
        assert!((out.p - 0.0292).abs() < 1e-4);
        assert!((out.e_t_rep - 1.0 / 2.85).abs() < 1e-14);
    }

    #[test]
    fn guard() {
        let psi = LaplaceExponent::pure_drift(1.0).unwrap().psi_table(13).unwrap();
        assert!(FullStateModel::new(&SystemStructure::series(13).unwrap(), &psi).is_err());
    }
}
