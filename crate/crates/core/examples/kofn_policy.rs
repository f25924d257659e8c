//! k-out-of-n:F systems have a closed form; check it against the general engine.

use lfmo_repair::prelude::*;
use lfmo_repair::report;

fn main() -> lfmo_repair::Result<()> {
    let n = 4;
    let chain = FailureChain::new(&LaplaceExponent::gamma(1.0, 1.0)?.psi_table(n)?)?;
    let costs = CostModel::new(vec![2.0, 3.0, 4.0, 5.0], 10.0)?;
    let k = 2;
    println!("2-out-of-4:F, Gamma(1, 1)");
    println!("r,p,E_T_rep,LTMC,engine_LTMC");
    for r in 1..=n {
        let closed = kofn_policy(k, &chain, r, &costs)?;
        let engine = evaluate_policy(&SignatureWeights::unit(n, k)?, &chain, r, &costs)?;
        println!(
            "{r},{},{},{},{}",
            report::g(closed.p),
            report::g(closed.e_t_rep),
            report::g(closed.ltmc),
            report::g(engine.ltmc)
        );
    }
    Ok(())
}
