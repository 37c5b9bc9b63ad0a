mod common;

use capped_fisher::io::{
    equilibrium_to_json, instance_to_json, parse_equilibrium, parse_instance, parse_trace, trace_to_ndjson, IoError,
};
use capped_fisher::solve_max_revenue;
use proptest::prelude::*;

use common::{example1, market_strategy};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn instance_round_trip(market in market_strategy(5, 30)) {
        prop_assert_eq!(parse_instance(&instance_to_json(&market)).unwrap(), market);
    }

    #[test]
    fn equilibrium_and_trace_round_trip(market in market_strategy(5, 30)) {
        let solution = solve_max_revenue(&market).unwrap();
        let eq = &solution.equilibrium;
        prop_assert_eq!(&parse_equilibrium(&market, &equilibrium_to_json(eq)).unwrap(), eq);

        let lines = parse_trace(&trace_to_ndjson(&solution.trace)).unwrap();
        prop_assert_eq!(lines.len(), solution.trace.len());
        for (line, rec) in lines.iter().zip(&solution.trace) {
            prop_assert_eq!(line.event.as_str(), rec.kind.name());
            prop_assert_eq!(line.prices.len(), market.num_goods());
        }
    }
}

#[test]
fn floats_are_rejected() {
    let text = r#"{"buyers":[{"budget":"0.5","cap":"inf","utilities":["1"]}]}"#;
    assert!(matches!(parse_instance(text), Err(IoError::Number { .. })));
    let text = r#"{"buyers":[{"budget":1,"cap":"inf","utilities":["1"]}]}"#;
    assert!(matches!(parse_instance(text), Err(IoError::Json(_))));
}

#[test]
fn unknown_fields_are_rejected() {
    let text = r#"{"buyers":[{"budget":"1","cap":"inf","utilities":["1"],"name":"a"}]}"#;
    assert!(matches!(parse_instance(text), Err(IoError::Json(_))));
}

#[test]
fn equilibrium_shape_is_checked() {
    let market = example1();
    let text = r#"{"prices":["1"],"allocation":[["1","0"],["0","1"]]}"#;
    assert!(matches!(parse_equilibrium(&market, text), Err(IoError::Dimension(_))));
    let text = r#"{"prices":["1","1"],"allocation":[["1","0"]]}"#;
    assert!(matches!(parse_equilibrium(&market, text), Err(IoError::Dimension(_))));
}

/// Stored utilities and revenue are recomputed, not taken from the file.
#[test]
fn derived_fields_are_not_trusted() {
    let market = example1();
    let text = r#"{"prices":["3","1"],"allocation":[["1","0"],["0","1"]],"utilities":["99","99"],"revenue":"0"}"#;
    let eq = parse_equilibrium(&market, text).unwrap();
    assert_eq!(eq.utilities[0].to_string(), "1");
    assert_eq!(eq.revenue().to_string(), "4");
}
