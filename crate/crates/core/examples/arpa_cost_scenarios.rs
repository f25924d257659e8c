//! Long-run cost of every threshold on the ARPA network when a system failure
//! is expensive (260) and when it costs the same as one component (1).

use lfmo_repair::prelude::*;
use lfmo_repair::report;

const PUBLISHED: &str = include_str!("../data/signatures/arpa_published.json");

fn main() -> lfmo_repair::Result<()> {
    let entries: Vec<String> = serde_json::from_str(PUBLISHED)?;
    let sig = Signature::parse(&entries.iter().map(String::as_str).collect::<Vec<_>>())?;
    let weights = SignatureWeights::from(&sig);
    let chain = FailureChain::new(&LaplaceExponent::compound_poisson_exp(0.9, 0.2, 1.0)?.psi_table(26)?)?;

    for c_sys in [260.0, 1.0] {
        let rows = sweep_policies(&weights, &chain, &CostModel::linear(26, 1.0, c_sys)?)?;
        println!("c_sys = {c_sys}");
        println!("{:>3} {:>12} {:>10} {:>10}", "r", "p", "LTMN", "LTMC");
        for ev in &rows[..8] {
            println!("{:>3} {:>12} {:>10} {:>10}", ev.r, report::g(ev.p), report::g(ev.ltmn), report::g(ev.ltmc));
        }
        let best = rows.iter().min_by(|a, b| a.ltmc.total_cmp(&b.ltmc)).unwrap();
        println!("cheapest: r = {}, LTMC {}\n", best.r, report::g(best.ltmc));
    }
    Ok(())
}
