//! JSON formats for instances, equilibria, verification reports and event
//! traces. Every rational is a string, `"p/q"` in lowest terms or an
//! integer; unbounded caps are `"inf"`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descend::EventRecord;
use crate::equilibrium::Equilibrium;
use crate::market::{Market, MarketError};
use crate::rational::{format_rational, parse_extended, parse_rational, ParseRationalError, Rational};
use crate::verify::VerificationReport;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Number {
        field: String,
        source: ParseRationalError,
    },
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error("{0}")]
    Dimension(String),
}

fn number(field: impl FnOnce() -> String, text: &str) -> Result<Rational, IoError> {
    parse_rational(text).map_err(|source| IoError::Number { field: field(), source })
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuyerEntry {
    pub budget: String,
    pub cap: String,
    pub utilities: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub buyers: Vec<BuyerEntry>,
}

impl InstanceFile {
    pub fn from_market(market: &Market) -> Self {
        InstanceFile {
            buyers: (0..market.num_buyers())
                .map(|i| BuyerEntry {
                    budget: format_rational(market.budget(i)),
                    cap: market.cap(i).to_string(),
                    utilities: strings(&market.utilities()[i]),
                })
                .collect(),
        }
    }

    pub fn to_market(&self) -> Result<Market, IoError> {
        let mut budgets = Vec::new();
        let mut caps = Vec::new();
        let mut utilities = Vec::new();
        for (i, b) in self.buyers.iter().enumerate() {
            budgets.push(number(|| format!("buyers[{i}].budget"), &b.budget)?);
            caps.push(parse_extended(&b.cap).map_err(|source| IoError::Number {
                field: format!("buyers[{i}].cap"),
                source,
            })?);
            let row = b
                .utilities
                .iter()
                .enumerate()
                .map(|(j, u)| number(|| format!("buyers[{i}].utilities[{j}]"), u))
                .collect::<Result<Vec<_>, _>>()?;
            utilities.push(row);
        }
        Ok(Market::new(budgets, caps, utilities)?)
    }
}

pub fn parse_instance(text: &str) -> Result<Market, IoError> {
    serde_json::from_str::<InstanceFile>(text)?.to_market()
}

pub fn instance_to_json(market: &Market) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_market(market)).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquilibriumFile {
    pub prices: Vec<String>,
    pub allocation: Vec<Vec<String>>,
    #[serde(default)]
    pub utilities: Vec<String>,
    #[serde(default)]
    pub capped: Vec<bool>,
    #[serde(default)]
    pub revenue: Option<String>,
}

impl EquilibriumFile {
    pub fn from_equilibrium(eq: &Equilibrium) -> Self {
        EquilibriumFile {
            prices: strings(&eq.prices),
            allocation: eq.allocation.iter().map(|row| strings(row)).collect(),
            utilities: strings(&eq.utilities),
            capped: eq.capped.clone(),
            revenue: Some(format_rational(&eq.revenue())),
        }
    }

    /// Reads prices and allocation; the remaining fields are recomputed from
    /// `market` and not trusted.
    pub fn to_equilibrium(&self, market: &Market) -> Result<Equilibrium, IoError> {
        let n = market.num_buyers();
        let m = market.num_goods();
        if self.prices.len() != m {
            return Err(IoError::Dimension(format!(
                "{} prices for {m} goods",
                self.prices.len()
            )));
        }
        if self.allocation.len() != n || self.allocation.iter().any(|row| row.len() != m) {
            return Err(IoError::Dimension(format!("allocation is not {n}×{m}")));
        }
        let prices = self
            .prices
            .iter()
            .enumerate()
            .map(|(j, p)| number(|| format!("prices[{j}]"), p))
            .collect::<Result<Vec<_>, _>>()?;
        let allocation = self
            .allocation
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| number(|| format!("allocation[{i}][{j}]"), v))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Equilibrium::from_allocation(market, prices, allocation))
    }
}

pub fn parse_equilibrium(market: &Market, text: &str) -> Result<Equilibrium, IoError> {
    serde_json::from_str::<EquilibriumFile>(text)?.to_equilibrium(market)
}

pub fn equilibrium_to_json(eq: &Equilibrium) -> String {
    serde_json::to_string_pretty(&EquilibriumFile::from_equilibrium(eq)).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationEntry {
    pub condition: String,
    pub buyer: Option<usize>,
    pub good: Option<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub is_equilibrium: bool,
    pub is_modest: bool,
    pub is_mbb: bool,
    pub kkt_ok: bool,
    pub violations: Vec<ViolationEntry>,
}

pub fn report_to_json(report: &VerificationReport) -> String {
    let file = ReportFile {
        is_equilibrium: report.is_equilibrium,
        is_modest: report.is_modest,
        is_mbb: report.is_mbb,
        kkt_ok: report.kkt_ok,
        violations: report
            .violations
            .iter()
            .map(|v| ViolationEntry {
                condition: v.condition.id().to_owned(),
                buyer: v.buyer,
                good: v.good,
                lhs: v.lhs.to_string(),
                rhs: v.rhs.to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

/// One line of a trace file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceLine {
    pub phase: usize,
    pub iteration: usize,
    pub event: String,
    pub x: String,
    pub prices: Vec<String>,
    pub surpluses: Vec<String>,
}

impl From<&EventRecord> for TraceLine {
    fn from(rec: &EventRecord) -> Self {
        TraceLine {
            phase: rec.phase,
            iteration: rec.iteration,
            event: rec.kind.name().to_owned(),
            x: format_rational(&rec.scale),
            prices: strings(&rec.prices),
            surpluses: strings(&rec.surpluses),
        }
    }
}

/// Newline-delimited JSON, one record per event.
pub fn trace_to_ndjson(trace: &[EventRecord]) -> String {
    let mut out = String::new();
    for rec in trace {
        out.push_str(&serde_json::to_string(&TraceLine::from(rec)).expect("plain data serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceLine>, IoError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio, Extended};

    const EXAMPLE1: &str = r#"{"buyers":[
        {"budget":"3","cap":"1","utilities":["5","1"]},
        {"budget":"1","cap":"inf","utilities":["2","1"]}]}"#;

    #[test]
    fn parses_instance() {
        let m = parse_instance(EXAMPLE1).unwrap();
        assert_eq!(m.budgets(), &[int(3), int(1)]);
        assert_eq!(m.caps(), &[Extended::Finite(int(1)), Extended::Infinite]);
        assert_eq!(parse_instance(&instance_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(matches!(parse_instance(r#"{"buyers":[]}"#), Err(IoError::Market(MarketError::NoBuyers))));
        assert!(matches!(
            parse_instance(r#"{"buyers":[{"budget":"1.5","cap":"inf","utilities":["1"]}]}"#),
            Err(IoError::Number { .. })
        ));
        assert!(matches!(parse_instance("{"), Err(IoError::Json(_))));
    }

    #[test]
    fn equilibrium_round_trip() {
        let m = parse_instance(EXAMPLE1).unwrap();
        let eq = Equilibrium::from_allocation(
            &m,
            vec![ratio(10, 13), ratio(5, 13)],
            vec![vec![ratio(1, 5), int(0)], vec![ratio(4, 5), int(1)]],
        );
        let text = equilibrium_to_json(&eq);
        assert!(text.contains("\"10/13\""));
        assert_eq!(parse_equilibrium(&m, &text).unwrap(), eq);
        let short = r#"{"prices":["1"],"allocation":[["1"],["0"]]}"#;
        assert!(matches!(parse_equilibrium(&m, short), Err(IoError::Dimension(_))));
    }
}
