//! Solve the full 2^n-state chain directly and compare with the signature-based
//! formulas on a small structure given as a formula.

use lfmo_repair::prelude::*;

fn main() -> lfmo_repair::Result<()> {
    let system = SystemStructure::formula(5, "(1 & 2) | (3 & (4 | 5))")?;
    let psi = LaplaceExponent::inverse_gaussian(1.0, 0.5)?.psi_table(5)?;
    let costs = CostModel::linear(5, 1.0, 20.0)?;
    let oracle = FullStateModel::new(&system, &psi)?;
    let sig = SignatureWeights::from(&structural_signature(&system)?);
    let chain = FailureChain::new(&psi)?;
    println!("{:>2} {:>22} {:>22} {:>10}", "r", "LTMC oracle", "LTMC engine", "diff");
    for r in 1..=5 {
        let o = oracle.cycle_metrics(r, &costs)?;
        let e = evaluate_policy(&sig, &chain, r, &costs)?;
        println!("{r:>2} {:>22.16} {:>22.16} {:>10.1e}", o.ltmc, e.ltmc, (o.ltmc - e.ltmc).abs());
    }
    Ok(())
}
