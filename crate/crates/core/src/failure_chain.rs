//! The chain of failed-component counts under an LFMO law: shock rates,
//! the embedded transition matrix, the QQ tables and order statistics.
//!
//! Alternating sums are accumulated in double-double and rounded once at the end.

use crate::error::{Error, Result};
use crate::numeric::{binom, Dd};
use crate::subordinator::PsiTable;
use nalgebra::DMatrix;

/// Negative rates or probabilities down to `-CLAMP_TOL * scale` are rounding noise.
pub const CLAMP_TOL: f64 = 1e-12;

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn shock_rate_dd(l: usize, k: usize, psi: &PsiTable) -> Dd {
    let mut acc = Dd::ZERO;
    for i in 0..k {
        let diff = psi.psi_dd(l - k + i + 1) - psi.psi_dd(l - k + i);
        acc += diff * Dd::from_u128(binom(k - 1, i)) * sign(i);
    }
    acc
}

fn clamp_nonneg(v: f64, scale: f64, what: impl FnOnce() -> String) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else if v >= -CLAMP_TOL * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::numeric(format!("{} is {v:e}", what())))
    }
}

/// Rate lambda^{(l)}_k at which a given set of k out of l alive components fails together.
pub fn shock_rate(l: usize, k: usize, psi: &PsiTable) -> Result<f64> {
    if !(1 <= k && k <= l && l <= psi.n()) {
        return Err(Error::validation(format!(
            "shock_rate needs 1 <= k <= l <= n, got k={k}, l={l}, n={}",
            psi.n()
        )));
    }
    let v = shock_rate_dd(l, k, psi).to_f64();
    clamp_nonneg(v, psi.psi(l), || format!("shock rate lambda^({l})_{k}"))
}

/// Embedded-chain matrix P, (n+1)x(n+1), rows 0..n-1 stochastic, row n absorbing (zero).
pub fn transition_matrix(psi: &PsiTable) -> Result<DMatrix<f64>> {
    let n = psi.n();
    let mut p = DMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        let l = n - i;
        let total = psi.psi_dd(l);
        for j in (i + 1)..=n {
            let k = j - i;
            let rate = shock_rate_dd(l, k, psi) * Dd::from_u128(binom(l, k));
            let v = (rate / total).to_f64();
            p[(i, j)] = clamp_nonneg(v, 1.0, || format!("transition probability P[{i},{j}]"))?;
        }
    }
    Ok(p)
}

/// QQ_{i->j}: probability that the first jump out of {0..i} lands on j.
pub fn qq_table(p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = p.nrows() - 1;
    let mut qq = DMatrix::zeros(n + 1, n + 1);
    for j in 1..=n {
        qq[(0, j)] = p[(0, j)];
    }
    for i in 1..n {
        for j in (i + 1)..=n {
            qq[(i, j)] = qq[(i - 1, j)] + qq[(i - 1, i)] * p[(i, j)];
        }
    }
    qq
}

/// QQ_{i->j} via powers of P, the slow route used to check the recursion.
pub fn qq_via_matrix_power(p: &DMatrix<f64>, i: usize, j: usize) -> Result<f64> {
    let n = p.nrows() - 1;
    if !(i < j && j <= n) {
        return Err(Error::validation(format!("qq needs 0 <= i < j <= n, got i={i}, j={j}")));
    }
    // visit[m] = sum_l (P^l)_{0,m}: expected visits, i.e. probability of visiting m
    let mut row = vec![0.0; n + 1];
    row[0] = 1.0;
    let mut visit = row.clone();
    for _ in 0..i {
        let mut next = vec![0.0; n + 1];
        for (a, &ra) in row.iter().enumerate() {
            if ra != 0.0 {
                for (b, nb) in next.iter_mut().enumerate().skip(a + 1) {
                    *nb += ra * p[(a, b)];
                }
            }
        }
        for (v, x) in visit.iter_mut().zip(&next) {
            *v += x;
        }
        row = next;
    }
    Ok((0..=i).map(|l1| visit[l1] * p[(l1, j)]).sum())
}

/// Precomputed chain for one Psi table.
#[derive(Clone, Debug)]
pub struct FailureChain {
    psi: PsiTable,
    p: DMatrix<f64>,
    qq: DMatrix<f64>,
    means: Vec<f64>,
}

impl FailureChain {
    pub fn new(psi: &PsiTable) -> Result<Self> {
        let n = psi.n();
        let p = transition_matrix(psi)?;
        for i in 0..n {
            let s: f64 = p.row(i).iter().sum();
            if (s - 1.0).abs() > 1e-10 {
                return Err(Error::numeric(format!("row {i} of P sums to {s}")));
            }
        }
        let qq = qq_table(&p);
        #[cfg(debug_assertions)]
        if n <= 32 {
            for i in 0..n {
                for j in (i + 1)..=n {
                    let slow = qq_via_matrix_power(&p, i, j)?;
                    debug_assert!((slow - qq[(i, j)]).abs() < 1e-12, "QQ[{i},{j}] {slow} vs {}", qq[(i, j)]);
                }
            }
        }
        let mut chain = Self { psi: psi.clone(), p, qq, means: Vec::new() };
        chain.means = (1..=n).map(|k| chain.order_stat_mean_raw(k)).collect::<Result<_>>()?;
        Ok(chain)
    }

    pub fn n(&self) -> usize {
        self.psi.n()
    }

    pub fn psi(&self) -> &PsiTable {
        &self.psi
    }

    /// Transition matrix P.
    pub fn transition(&self) -> &DMatrix<f64> {
        &self.p
    }

    /// Full QQ table; entries with j <= i are zero.
    pub fn qq(&self) -> &DMatrix<f64> {
        &self.qq
    }

    /// Aggregate rate of moving from i to j failed components.
    pub fn aggregate_rate(&self, i: usize, j: usize) -> f64 {
        if i >= j || j > self.n() {
            return 0.0;
        }
        self.p[(i, j)] * self.psi.psi(self.n() - i)
    }

    fn check(&self, name: &str, v: usize) -> Result<()> {
        if v == 0 || v > self.n() {
            Err(Error::validation(format!("{name} must be in 1..n, got {name}={v}, n={}", self.n())))
        } else {
            Ok(())
        }
    }

    /// QQQ_{i->[j,k]}: the jump out of {0..i} lands in [j,k].
    pub fn qqq(&self, i: usize, j: usize, k: usize) -> f64 {
        let lo = j.max(i + 1);
        let hi = k.min(self.n());
        if lo > hi {
            return 0.0;
        }
        (lo..=hi).map(|m| self.qq[(i, m)]).sum()
    }

    /// P(T_{r:n} < T_{k:n}).
    pub fn prob_order_lt(&self, r: usize, k: usize) -> Result<f64> {
        self.check("r", r)?;
        self.check("k", k)?;
        Ok(if r < k { self.qqq(r - 1, r, k - 1) } else { 0.0 })
    }

    /// P(T_{r:n} = T_{k:n}).
    pub fn prob_order_eq(&self, r: usize, k: usize) -> Result<f64> {
        self.check("r", r)?;
        self.check("k", k)?;
        Ok(match r.cmp(&k) {
            std::cmp::Ordering::Less => self.qqq(r - 1, k, self.n()),
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Greater => self.qqq(k - 1, r, self.n()),
        })
    }

    /// P(N(T_{r:n}) = j).
    pub fn prob_count_at_order(&self, r: usize, j: usize) -> Result<f64> {
        self.check("r", r)?;
        self.check("j", j)?;
        Ok(if r <= j { self.qq[(r - 1, j)] } else { 0.0 })
    }

    /// P(T_{k:n} > t).
    pub fn order_stat_survival(&self, k: usize, t: f64) -> Result<f64> {
        self.check("k", k)?;
        if t.is_nan() || t < 0.0 {
            return Err(Error::validation(format!("t must be >= 0, got {t}")));
        }
        let e = self.exp_table(t);
        Ok(self.order_stat_sum(k, |i| e[i]).to_f64().clamp(0.0, 1.0))
    }

    /// E[T_{k:n}].
    pub fn order_stat_mean(&self, k: usize) -> Result<f64> {
        self.check("k", k)?;
        Ok(self.means[k - 1])
    }

    fn order_stat_mean_raw(&self, k: usize) -> Result<f64> {
        let v = self.order_stat_sum(k, |i| self.psi.psi_dd(i).recip()).to_f64();
        if v.is_nan() || v <= 0.0 {
            return Err(Error::numeric(format!("E[T_{{{k}:n}}] evaluated to {v:e}")));
        }
        Ok(v)
    }

    pub(crate) fn exp_table(&self, t: f64) -> Vec<Dd> {
        (0..=self.n()).map(|i| (-(self.psi.psi_dd(i) * t)).exp()).collect()
    }

    fn order_stat_sum(&self, k: usize, f: impl Fn(usize) -> Dd) -> Dd {
        let n = self.n();
        let mut acc = Dd::ZERO;
        for i in (n - k + 1)..=n {
            let c = Dd::from_u128(binom(n, i) * binom(i - 1, n - k));
            acc += f(i) * c * sign(i + k - n - 1);
        }
        acc
    }

    /// Distribution of N(t) over {0..n}. Not renormalized.
    pub fn count_distribution(&self, t: f64) -> Result<Vec<f64>> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::validation(format!("t must be >= 0, got {t}")));
        }
        let n = self.n();
        let e = self.exp_table(t);
        Ok((0..=n)
            .map(|k| {
                let mut acc = Dd::ZERO;
                for (i, &ei) in e.iter().enumerate().skip(n - k) {
                    let c = Dd::from_u128(binom(n, i) * binom(i, n - k));
                    acc += ei * c * sign(i + k - n);
                }
                acc.to_f64().clamp(0.0, 1.0)
            })
            .collect())
    }
}
