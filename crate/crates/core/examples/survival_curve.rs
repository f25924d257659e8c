//! Reliability curve of the bridge under a subordinator given only by its
//! values Psi(1), Psi(2), Psi(3).

use lfmo_repair::prelude::*;
use lfmo_repair::report;

fn main() -> lfmo_repair::Result<()> {
    let psi = PsiTable::from_values(vec![1.0, 1.7, 2.2])?;
    let chain = FailureChain::new(&psi)?;
    let sig = SignatureWeights::from(&structural_signature(&builtin::bridge())?);
    println!("mttf {}", report::g(system_mttf(&sig, &chain)?));
    println!("t,survival");
    for i in 0..=20 {
        let t = 0.25 * i as f64;
        println!("{},{}", report::g(t), report::g(system_survival(&sig, &chain, t)?));
    }
    Ok(())
}
