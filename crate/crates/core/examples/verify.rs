//! Checks a hand-written candidate against every equilibrium condition and
//! lists what fails.

use capped_fisher::io::{parse_equilibrium, parse_instance};
use capped_fisher::verify;

const INSTANCE: &str = r#"{"buyers":[
    {"budget":"1","cap":"1","utilities":["1","1"]},
    {"budget":"1","cap":"inf","utilities":["0","1"]}]}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let market = parse_instance(INSTANCE)?;
    for prices in [r#"["1","1"]"#, r#"["0","1"]"#, r#"["2","1"]"#] {
        let text = format!(r#"{{"prices":{prices},"allocation":[["1","0"],["0","1"]]}}"#);
        let report = verify(&market, &parse_equilibrium(&market, &text)?)?;
        println!("prices {prices}: equilibrium = {}", report.all_ok());
        for v in &report.violations {
            println!("  {} buyer {:?} good {:?}: {} vs {}", v.condition, v.buyer, v.good, v.lhs, v.rhs);
        }
    }
    Ok(())
}
