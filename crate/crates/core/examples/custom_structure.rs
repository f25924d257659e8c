//! Structures from JSON: a formula, a two-terminal network, and a rejected
//! non-monotone formula.

use lfmo_repair::prelude::*;
use lfmo_repair::structure::validate_semi_coherent;

fn main() -> lfmo_repair::Result<()> {
    let net: SystemStructure = serde_json::from_str(
        r#"{"kind":"two_terminal","nodes":["s","a","b","t"],
            "edges":[["s","a"],["s","b"],["a","b"],["a","t"],["b","t"]],
            "source":"s","target":"t"}"#,
    )?;
    let formula: SystemStructure = serde_json::from_str(r#"{"kind":"formula","n":4,"expr":"(1 | 2) & (3 | 4)"}"#)?;
    for (name, s) in [("bridge network", &net), ("series of parallels", &formula)] {
        let sig = structural_signature(s)?;
        println!("{name}: s = {:?}", sig.s_strings());
    }

    let xor: SystemStructure = serde_json::from_str(r#"{"kind":"formula","n":3,"expr":"(1 ^ 2) | 3"}"#)?;
    let report = validate_semi_coherent(&xor);
    println!("(1 ^ 2) | 3 valid: {}", report.is_valid());
    if let Err(e) = report.into_result() {
        println!("  {e}");
    }
    Ok(())
}
