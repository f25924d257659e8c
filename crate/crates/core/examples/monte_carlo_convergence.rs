//! Simulated estimators tighten around the exact values as the horizon grows.
//! Pass a replication count as the first argument (default 200).

use lfmo_repair::prelude::*;
use lfmo_repair::report;

fn main() -> lfmo_repair::Result<()> {
    let reps = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    let cfg = SimulationConfig {
        structure: builtin::bridge(),
        psi: LaplaceExponent::compound_poisson_exp(0.9, 0.2, 1.0)?.psi_table(3)?,
        r: 2,
        costs: CostModel::linear(3, 1.0, 30.0)?,
        horizon: 1e4,
        replications: reps,
        seed: 7,
    };
    let rows = convergence_study(&cfg, &[1e1, 1e2, 1e3, 1e4])?;
    print!("{}", report::convergence_csv(&rows));
    Ok(())
}
