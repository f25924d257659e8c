//! How many components are down when the bridge fails, for a few subordinators.
//! Without simultaneous failures this is just the structural signature.

use lfmo_repair::prelude::*;
use lfmo_repair::report;

fn main() -> lfmo_repair::Result<()> {
    let sig = SignatureWeights::from(&structural_signature(&builtin::bridge())?);
    println!("structural signature: {:?}", sig.s().iter().map(|x| report::g(*x)).collect::<Vec<_>>());
    for (name, e) in [
        ("pure drift", LaplaceExponent::pure_drift(1.0)?),
        ("CPP(0.9, 0.2, 1)", LaplaceExponent::compound_poisson_exp(0.9, 0.2, 1.0)?),
        ("CPP(0.1, 2, 0.5)", LaplaceExponent::compound_poisson_exp(0.1, 2.0, 0.5)?),
        ("stable(0.3)", LaplaceExponent::stable(0.3)?),
    ] {
        let q = process_signature(&sig, &FailureChain::new(&e.psi_table(3)?)?)?;
        println!("{name:>18}: {:?}", q.iter().map(|x| report::g(*x)).collect::<Vec<_>>());
    }
    Ok(())
}
