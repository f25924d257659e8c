//! r-out-of-n:R repair policies: repair everything as soon as r components
//! are down or the system fails.

use crate::error::{Error, Result};
use crate::failure_chain::FailureChain;
use crate::numeric::{binom, neumaier_sum, Dd};
use crate::structure::Signature;
use serde::{Deserialize, Serialize};

/// Tolerance of the built-in self-checks on p.
pub const SELF_CHECK_TOL: f64 = 1e-10;

/// Signature weights in floating point, with the minimal signature alongside.
///
/// Accepts any probability vector, so mixed systems are covered.
#[derive(Clone, Debug, PartialEq)]
pub struct SignatureWeights {
    s: Vec<f64>,
    a: Vec<Dd>,
}

impl SignatureWeights {
    pub fn new(s: Vec<f64>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::validation("signature must have at least one entry"));
        }
        if s.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::validation("signature entries must be finite and >= 0"));
        }
        let total = neumaier_sum(s.iter().copied());
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::validation(format!("signature sums to {total}, not 1")));
        }
        let n = s.len();
        let a = (1..=n)
            .map(|i| {
                let mut acc = Dd::ZERO;
                for k in (n - i + 1)..=n {
                    let c = Dd::from_u128(binom(n, i) * binom(i - 1, n - k));
                    let term = c * s[k - 1];
                    if (i - 1 - (n - k)).is_multiple_of(2) {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            })
            .collect();
        Ok(Self { s, a })
    }

    /// Canonical vector e_k: the k-out-of-n:F system.
    pub fn unit(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::validation(format!("k must be in 1..n, got k={k}, n={n}")));
        }
        let mut s = vec![0.0; n];
        s[k - 1] = 1.0;
        Self::new(s)
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn a(&self) -> Vec<f64> {
        self.a.iter().map(|x| x.to_f64()).collect()
    }
}

impl From<&Signature> for SignatureWeights {
    fn from(sig: &Signature) -> Self {
        Self { s: sig.s_f64(), a: sig.a().iter().map(Dd::from_rational).collect() }
    }
}

impl From<Signature> for SignatureWeights {
    fn from(sig: Signature) -> Self {
        Self::from(&sig)
    }
}

/// Repair costs: `c_cmp[j-1]` for repairing j components, plus `c_sys` when the system failed.
#[derive(Clone, Debug, PartialEq)]
pub struct CostModel {
    c_cmp: Vec<f64>,
    c_sys: f64,
}

impl CostModel {
    pub fn new(c_cmp: Vec<f64>, c_sys: f64) -> Result<Self> {
        if c_cmp.is_empty() {
            return Err(Error::validation("c_cmp must have n entries"));
        }
        if c_cmp.iter().chain([&c_sys]).any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::validation("costs must be finite and >= 0"));
        }
        Ok(Self { c_cmp, c_sys })
    }

    /// c_cmp(j) = unit * j.
    pub fn linear(n: usize, unit: f64, c_sys: f64) -> Result<Self> {
        Self::new((1..=n).map(|j| unit * j as f64).collect(), c_sys)
    }

    /// Counts component failures: c_cmp(j) = j, c_sys = 0.
    pub fn component_count(n: usize) -> Self {
        Self::linear(n, 1.0, 0.0).expect("valid costs")
    }

    pub fn n(&self) -> usize {
        self.c_cmp.len()
    }

    pub fn c_cmp(&self, j: usize) -> f64 {
        self.c_cmp[j - 1]
    }

    pub fn c_cmp_vec(&self) -> &[f64] {
        &self.c_cmp
    }

    pub fn c_sys(&self) -> f64 {
        self.c_sys
    }
}

/// Mean time to the first system failure under the policy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureTime {
    Finite(f64),
    /// p = 0: every cycle ends in a preventive repair.
    Never,
}

impl FailureTime {
    pub fn as_f64(self) -> f64 {
        match self {
            FailureTime::Finite(t) => t,
            FailureTime::Never => f64::INFINITY,
        }
    }
}

/// Everything known about one repair cycle and the long run.
///
/// Distributions are indexed by j - 1 for j = 1..n failed components.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolicyEvaluation {
    pub r: usize,
    /// Probability the first repair is triggered by a system failure.
    pub p: f64,
    pub e_t_rep: f64,
    pub e_t_fail: FailureTime,
    /// N at the first repair.
    pub n_rep_dist: Vec<f64>,
    /// N at the first repair given it is a system failure; None when p = 0.
    pub n_fail_dist: Option<Vec<f64>>,
    /// N at the first repair given it is preventive; None when p = 1.
    pub n_prev_dist: Option<Vec<f64>>,
    pub e_n_rep: f64,
    pub e_n_fail: Option<f64>,
    pub e_c_rep: f64,
    pub e_c_fail: Option<f64>,
    pub ltmc: f64,
    pub ltmn: f64,
    pub repair_rate: f64,
    pub system_failure_rate: f64,
}

fn check_r(r: usize, n: usize) -> Result<()> {
    if r == 0 || r > n {
        Err(Error::validation(format!("r must be in 1..n (n = {n}), got {r}")))
    } else {
        Ok(())
    }
}

fn check_n(what: &str, m: usize, n: usize) -> Result<()> {
    if m != n {
        Err(Error::validation(format!("{what} has n = {m}, the failure chain has n = {n}")))
    } else {
        Ok(())
    }
}

fn check_p(p: f64) -> Result<f64> {
    if !(-SELF_CHECK_TOL..=1.0 + SELF_CHECK_TOL).contains(&p) {
        return Err(Error::numeric(format!("p = {p} is not a probability")));
    }
    Ok(p.clamp(0.0, 1.0))
}

struct CycleParts {
    r: usize,
    p: f64,
    n_rep: Vec<f64>,
    fail_num: Vec<f64>,
    prev_num: Vec<f64>,
    e_t_rep: f64,
}

fn assemble(parts: CycleParts, costs: &CostModel) -> PolicyEvaluation {
    let CycleParts { r, p, n_rep, fail_num, prev_num, e_t_rep } = parts;
    let weighted = |f: &dyn Fn(usize) -> f64| {
        neumaier_sum(n_rep.iter().enumerate().map(|(i, &q)| f(i + 1) * q))
    };
    let e_n_rep = weighted(&|j| j as f64);
    let e_c_rep = p * costs.c_sys() + weighted(&|j| costs.c_cmp(j));
    let conditional = |num: &[f64], mass: f64| {
        (mass > 0.0).then(|| num.iter().map(|x| x / mass).collect::<Vec<_>>())
    };
    PolicyEvaluation {
        r,
        p,
        e_t_rep,
        e_t_fail: if p > 0.0 { FailureTime::Finite(e_t_rep / p) } else { FailureTime::Never },
        n_fail_dist: conditional(&fail_num, p),
        n_prev_dist: conditional(&prev_num, 1.0 - p),
        n_rep_dist: n_rep,
        e_n_rep,
        e_n_fail: (p > 0.0).then(|| e_n_rep / p),
        e_c_rep,
        e_c_fail: (p > 0.0).then(|| e_c_rep / p),
        ltmc: e_c_rep / e_t_rep,
        ltmn: e_n_rep / e_t_rep,
        repair_rate: 1.0 / e_t_rep,
        system_failure_rate: p / e_t_rep,
    }
}

/// Evaluate the r-out-of-n:R policy for a system with signature `sig`.
pub fn evaluate_policy(
    sig: &SignatureWeights,
    chain: &FailureChain,
    r: usize,
    costs: &CostModel,
) -> Result<PolicyEvaluation> {
    let n = chain.n();
    check_n("signature", sig.n(), n)?;
    check_n("cost model", costs.n(), n)?;
    check_r(r, n)?;
    let s = sig.s();

    let p_main = neumaier_sum((1..=n).map(|k| s[k - 1] * chain.prob_order_eq(k.min(r), k).unwrap()));
    let p_alt = 1.0 - neumaier_sum((r + 1..=n).map(|k| s[k - 1] * chain.prob_order_lt(r, k).unwrap()));
    if (p_main - p_alt).abs() > SELF_CHECK_TOL {
        return Err(Error::numeric(format!("p disagrees between routes: {p_main} vs {p_alt}")));
    }
    let p = check_p(p_main)?;

    let mut n_rep = vec![0.0; n];
    let mut fail_num = vec![0.0; n];
    let mut prev_num = vec![0.0; n];
    for j in 1..=n {
        let mut rep = Vec::with_capacity(n);
        let mut fail = Vec::with_capacity(j);
        for k in 1..=n {
            let q = s[k - 1] * chain.prob_count_at_order(k.min(r), j).unwrap();
            rep.push(q);
            if k <= j {
                fail.push(q);
            }
        }
        n_rep[j - 1] = neumaier_sum(rep);
        fail_num[j - 1] = neumaier_sum(fail);
        if j >= r {
            let cr = chain.prob_count_at_order(r, j).unwrap();
            prev_num[j - 1] = neumaier_sum((j + 1..=n).map(|k| s[k - 1] * cr));
        }
    }
    let fail_total = neumaier_sum(fail_num.iter().copied());
    if (fail_total - p).abs() > SELF_CHECK_TOL {
        return Err(Error::numeric(format!("failure-count numerators sum to {fail_total}, p = {p}")));
    }
    let e_t_rep = neumaier_sum((1..=n).map(|k| s[k - 1] * chain.order_stat_mean(k.min(r)).unwrap()));
    Ok(assemble(CycleParts { r, p, n_rep, fail_num, prev_num, e_t_rep }, costs))
}

/// One evaluation per r = 1..n, computed in parallel, returned in order of r.
pub fn sweep_policies(
    sig: &SignatureWeights,
    chain: &FailureChain,
    costs: &CostModel,
) -> Result<Vec<PolicyEvaluation>> {
    use rayon::prelude::*;
    (1..=chain.n()).into_par_iter().map(|r| evaluate_policy(sig, chain, r, costs)).collect()
}

/// Distribution of the number of failed components at system failure (no repairs).
pub fn process_signature(sig: &SignatureWeights, chain: &FailureChain) -> Result<Vec<f64>> {
    let n = chain.n();
    check_n("signature", sig.n(), n)?;
    let q: Vec<f64> = (1..=n)
        .map(|j| neumaier_sum((1..=j).map(|k| sig.s()[k - 1] * chain.qq()[(k - 1, j)])))
        .collect();
    let total = neumaier_sum(q.iter().copied());
    if (total - 1.0).abs() > SELF_CHECK_TOL {
        return Err(Error::numeric(format!("process signature sums to {total}")));
    }
    Ok(q)
}

/// Closed form for k-out-of-n:F systems.
pub fn kofn_policy(k: usize, chain: &FailureChain, r: usize, costs: &CostModel) -> Result<PolicyEvaluation> {
    let n = chain.n();
    check_n("cost model", costs.n(), n)?;
    check_r(r, n)?;
    if k == 0 || k > n {
        return Err(Error::validation(format!("k must be in 1..n (n = {n}), got {k}")));
    }
    let m = k.min(r);
    let p = if k > r { check_p(chain.qqq(r - 1, k, n))? } else { 1.0 };
    let mut n_rep = vec![0.0; n];
    let mut fail_num = vec![0.0; n];
    let mut prev_num = vec![0.0; n];
    for j in m..=n {
        let q = chain.qq()[(m - 1, j)];
        n_rep[j - 1] = q;
        if j >= k {
            fail_num[j - 1] = q;
        } else {
            prev_num[j - 1] = q;
        }
    }
    let e_t_rep = chain.order_stat_mean(m)?;
    Ok(assemble(CycleParts { r, p, n_rep, fail_num, prev_num, e_t_rep }, costs))
}

/// H(a, b) = sum_{i=a}^{b} 1/i.
fn harmonic(a: usize, b: usize) -> f64 {
    neumaier_sum((a..=b).map(|i| 1.0 / i as f64))
}

/// Closed form for iid Exp(mu) components.
pub fn iid_policy(sig: &SignatureWeights, n: usize, mu: f64, r: usize, costs: &CostModel) -> Result<PolicyEvaluation> {
    check_n("signature", sig.n(), n)?;
    check_n("cost model", costs.n(), n)?;
    check_r(r, n)?;
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::validation(format!("mu must be finite and > 0, got {mu}")));
    }
    let s = sig.s();
    let p = neumaier_sum(s[..r].iter().copied());
    let tail = neumaier_sum(s[r..].iter().copied());
    let mut n_rep = vec![0.0; n];
    let mut fail_num = vec![0.0; n];
    let mut prev_num = vec![0.0; n];
    n_rep[..r].copy_from_slice(&s[..r]);
    fail_num[..r].copy_from_slice(&s[..r]);
    n_rep[r - 1] += tail;
    prev_num[r - 1] = tail;
    let e_t_rep = (neumaier_sum((1..=r).map(|k| s[k - 1] * harmonic(n - k + 1, n))) + tail * harmonic(n - r + 1, n)) / mu;
    let ev = assemble(CycleParts { r, p, n_rep, fail_num, prev_num, e_t_rep }, costs);
    debug_assert!({
        let e_c = neumaier_sum((1..=r).map(|k| s[k - 1] * (costs.c_sys() + costs.c_cmp(k)))) + tail * costs.c_cmp(r);
        (e_c - ev.e_c_rep).abs() <= 1e-12 * e_c.max(1.0)
    });
    Ok(ev)
}

/// P(T_fail > t), computed two ways that must agree.
pub fn system_survival(sig: &SignatureWeights, chain: &FailureChain, t: f64) -> Result<f64> {
    let n = chain.n();
    check_n("signature", sig.n(), n)?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::validation(format!("t must be >= 0, got {t}")));
    }
    let mixture = neumaier_sum((1..=n).map(|k| sig.s()[k - 1] * chain.order_stat_survival(k, t).unwrap()));
    let e = chain.exp_table(t);
    let mut minimal = Dd::ZERO;
    for (a, &ei) in sig.a.iter().zip(&e[1..]) {
        minimal += *a * ei;
    }
    let minimal = minimal.to_f64();
    if (mixture - minimal).abs() > SELF_CHECK_TOL {
        return Err(Error::numeric(format!("survival forms disagree at t = {t}: {mixture} vs {minimal}")));
    }
    Ok(mixture.clamp(0.0, 1.0))
}

/// E[T_fail] with no preventive repairs.
pub fn system_mttf(sig: &SignatureWeights, chain: &FailureChain) -> Result<f64> {
    let n = chain.n();
    check_n("signature", sig.n(), n)?;
    let mut acc = Dd::ZERO;
    for i in 1..=n {
        acc += sig.a[i - 1] / chain.psi().psi_dd(i);
    }
    Ok(acc.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subordinator::LaplaceExponent;

    fn bridge_chain() -> (SignatureWeights, FailureChain, CostModel) {
        let sig = SignatureWeights::new(vec![0.0, 2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let psi = LaplaceExponent::compound_poisson_exp(0.9, 0.2, 1.0).unwrap().psi_table(3).unwrap();
        (sig, FailureChain::new(&psi).unwrap(), CostModel::linear(3, 1.0, 30.0).unwrap())
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn bridge_rows() {
        let (sig, chain, costs) = bridge_chain();
        let e1 = evaluate_policy(&sig, &chain, 1, &costs).unwrap();
        assert!(rel(e1.p, 0.0292) < 5e-3);
        assert!(rel(e1.e_t_fail.as_f64(), 12.0) < 5e-4);
        assert!(rel(e1.e_t_rep, 0.3509) < 5e-4);
        assert!(rel(e1.ltmn, 3.0) < 5e-4);
        assert!(rel(e1.ltmc, 5.5) < 5e-4);
        let e3 = evaluate_policy(&sig, &chain, 3, &costs).unwrap();
        assert_eq!(e3.p, 1.0);
        assert!(rel(e3.e_t_rep, 1.1664) < 5e-4);
        assert!(rel(e3.ltmc, 27.7505) < 5e-4);
        assert!(rel(system_mttf(&sig, &chain).unwrap(), 1.1664) < 5e-4);
    }

    #[test]
    fn preconditions() {
        let (sig, chain, costs) = bridge_chain();
        assert!(evaluate_policy(&sig, &chain, 0, &costs).is_err());
        assert!(evaluate_policy(&sig, &chain, 4, &costs).is_err());
        let sig2 = SignatureWeights::new(vec![0.5, 0.5]).unwrap();
        assert!(evaluate_policy(&sig2, &chain, 1, &costs).is_err());
        assert!(SignatureWeights::new(vec![0.5, 0.4]).is_err());
        assert!(CostModel::new(vec![1.0, -1.0], 0.0).is_err());
    }

    #[test]
    fn never_failing_policy() {
        let psi = LaplaceExponent::pure_drift(1.0).unwrap().psi_table(3).unwrap();
        let chain = FailureChain::new(&psi).unwrap();
        let costs = CostModel::linear(3, 1.0, 5.0).unwrap();
        let ev = kofn_policy(2, &chain, 1, &costs).unwrap();
        assert_eq!(ev.p, 0.0);
        assert_eq!(ev.e_t_fail, FailureTime::Never);
        assert_eq!(ev.e_c_fail, None);
        assert_eq!(ev.n_fail_dist, None);
        assert!((ev.ltmc - 3.0).abs() < 1e-12);
    }

    #[test]
    fn iid_bridge_r1() {
        let (sig, _, _) = bridge_chain();
        let ev = iid_policy(&sig, 3, 1.0, 1, &CostModel::linear(3, 1.0, 30.0).unwrap()).unwrap();
        assert_eq!(ev.p, 0.0);
        assert!((ev.ltmc - 3.0).abs() < 1e-12);
    }
}
