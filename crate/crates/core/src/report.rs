//! Plain-text tables: CSV with 6 significant digits.

use crate::oracle::OracleMetrics;
use crate::policy::{FailureTime, PolicyEvaluation};
use crate::simulate::{ConvergenceRow, SimulationResult};
use crate::structure::Signature;
use std::fmt::Write;

/// Shortest rendering of `x` with at most `digits` significant digits, like C's `%g`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // exponent after rounding to `digits` places
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if exp < -5 || exp >= digits as i32 {
        let (mant, _) = sci.split_at(sci.find('e').unwrap());
        format!("{}e{}", trim_zeros(mant), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn g(x: f64) -> String {
    fmt_sig(x, 6)
}

fn opt(x: Option<f64>) -> String {
    x.map(g).unwrap_or_else(|| "NA".into())
}

pub const SWEEP_HEADER: &str = "r,p,E_T_fail,E_T_rep,E_N_fail,E_N_rep,E_C_fail,E_C_rep,LTMN,LTMC";

pub fn sweep_row(ev: &PolicyEvaluation) -> String {
    let t_fail = match ev.e_t_fail {
        FailureTime::Finite(t) => g(t),
        FailureTime::Never => "inf".into(),
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        ev.r,
        g(ev.p),
        t_fail,
        g(ev.e_t_rep),
        opt(ev.e_n_fail),
        g(ev.e_n_rep),
        opt(ev.e_c_fail),
        g(ev.e_c_rep),
        g(ev.ltmn),
        g(ev.ltmc)
    )
}

/// Table with one row per policy, in the column layout of the published tables.
pub fn sweep_csv(rows: &[PolicyEvaluation]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for ev in rows {
        out.push_str(&sweep_row(ev));
        out.push('\n');
    }
    out
}

fn dist_header(prefix: &str, n: usize) -> String {
    (1..=n).map(|j| format!(",{prefix}{j}")).collect()
}

fn dist_cells(d: &[f64]) -> String {
    d.iter().map(|x| format!(",{}", g(*x))).collect()
}

/// Sweep columns followed by P(N(T_rep) = j).
pub fn evaluation_csv(rows: &[PolicyEvaluation]) -> String {
    let n = rows.first().map_or(0, |e| e.n_rep_dist.len());
    let mut out = format!("{SWEEP_HEADER}{}\n", dist_header("N_rep_", n));
    for ev in rows {
        let _ = writeln!(out, "{}{}", sweep_row(ev), dist_cells(&ev.n_rep_dist));
    }
    out
}

pub fn oracle_csv(rows: &[OracleMetrics]) -> String {
    let n = rows.first().map_or(0, |e| e.n_rep_dist.len());
    let mut out = format!("r,p,E_T_rep,E_C_rep,LTMC{}\n", dist_header("N_rep_", n));
    for m in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}{}",
            m.r,
            g(m.p),
            g(m.e_t_rep),
            g(m.e_c_rep),
            g(m.ltmc),
            dist_cells(&m.n_rep_dist)
        );
    }
    out
}

pub fn signature_csv(sig: &Signature) -> String {
    let mut out = String::from("k,s,s_float,sbar,a,a_float\n");
    let s = sig.s_f64();
    let a = sig.a_f64();
    for k in 1..=sig.n() {
        let _ = writeln!(
            out,
            "{k},{},{},{},{},{}",
            sig.s()[k - 1],
            g(s[k - 1]),
            sig.sbar()[k],
            sig.a()[k - 1],
            g(a[k - 1])
        );
    }
    out
}

pub fn simulation_csv(res: &SimulationResult) -> String {
    let mut out = String::from("horizon,r,metric,count,q25,q50,q75\n");
    for s in &res.summaries {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            g(res.horizon),
            res.r,
            s.metric.name(),
            s.count,
            opt(s.q25),
            opt(s.q50),
            opt(s.q75)
        );
    }
    out
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("horizon,r,metric,q25,q50,q75,theoretical\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            g(row.horizon),
            row.r,
            row.metric.name(),
            opt(row.q25),
            opt(row.q50),
            opt(row.q75),
            g(row.theoretical)
        );
    }
    out
}
