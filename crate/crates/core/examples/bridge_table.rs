//! Sweep all thresholds for the three-component bridge and print the table.

use lfmo_repair::prelude::*;
use lfmo_repair::report;

fn main() -> lfmo_repair::Result<()> {
    let psi = LaplaceExponent::compound_poisson_exp(0.9, 0.2, 1.0)?.psi_table(3)?;
    let chain = FailureChain::new(&psi)?;
    let sig = SignatureWeights::from(&structural_signature(&builtin::bridge())?);
    let costs = CostModel::linear(3, 1.0, 30.0)?;
    let rows = sweep_policies(&sig, &chain, &costs)?;
    print!("{}", report::sweep_csv(&rows));

    let best = rows.iter().min_by(|a, b| a.ltmc.total_cmp(&b.ltmc)).unwrap();
    println!("\ncheapest threshold: r = {} (LTMC {})", best.r, report::g(best.ltmc));
    Ok(())
}
