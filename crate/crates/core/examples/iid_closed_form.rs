//! With independent exponential components the policy metrics only need
//! harmonic numbers.

use lfmo_repair::prelude::*;
use lfmo_repair::report;

fn main() -> lfmo_repair::Result<()> {
    let n = 10;
    let system = SystemStructure::k_out_of_n_f(n, 4)?;
    let sig = SignatureWeights::from(&structural_signature(&system)?);
    let costs = CostModel::linear(n, 1.0, 50.0)?;
    let chain = FailureChain::new(&LaplaceExponent::pure_drift(0.5)?.psi_table(n)?)?;
    println!("r,p,LTMC,engine_LTMC");
    for r in 1..=n {
        let closed = iid_policy(&sig, n, 0.5, r, &costs)?;
        let engine = evaluate_policy(&sig, &chain, r, &costs)?;
        println!("{r},{},{},{}", report::g(closed.p), report::g(closed.ltmc), report::g(engine.ltmc));
    }
    Ok(())
}
