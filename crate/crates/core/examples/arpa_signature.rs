//! Enumerate the 2^26 states of the ARPA network and compare the signature
//! with the published one. Takes a few seconds.

use lfmo_repair::prelude::*;
use lfmo_repair::structure::minimal_signature;
use std::time::Instant;

const PUBLISHED: &str = include_str!("../data/signatures/arpa_published.json");

fn main() -> lfmo_repair::Result<()> {
    let arpa = builtin::arpa();
    let start = Instant::now();
    let sig = structural_signature(&arpa)?;
    println!("enumerated {} states in {:.2?}", 1u64 << arpa.n(), start.elapsed());

    let entries: Vec<String> = serde_json::from_str(PUBLISHED)?;
    let published = Signature::parse(&entries.iter().map(String::as_str).collect::<Vec<_>>())?;
    println!("{:>3} {:>16} {:>16}", "k", "computed", "published");
    for k in 0..sig.n() {
        let mark = if sig.s()[k] == published.s()[k] { "" } else { "  differs" };
        println!("{:>3} {:>16} {:>16}{mark}", k + 1, sig.s()[k], published.s()[k]);
    }
    let a = minimal_signature(&sig);
    println!("minimal signature, first entries: {:?}", a[..4].iter().map(ToString::to_string).collect::<Vec<_>>());
    Ok(())
}
