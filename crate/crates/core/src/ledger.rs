//! Discrepancy ledger: one entry per cross-check of a printed formula against an oracle.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub formula_id: String,
    /// the printed expression being checked
    pub paper_expression: String,
    pub paper_value: f64,
    pub oracle_value: f64,
    /// printed / oracle
    pub ratio: f64,
    /// |printed - oracle| / |oracle|
    pub deviation: f64,
    pub parameters: BTreeMap<String, f64>,
    /// seconds since the Unix epoch
    pub timestamp: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub entries: Vec<LedgerEntry>,
}

impl Ledger {
    pub fn record(
        &mut self,
        formula_id: &str,
        paper_expression: &str,
        paper_value: f64,
        oracle_value: f64,
        parameters: &[(&str, f64)],
    ) {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        self.entries.push(LedgerEntry {
            formula_id: formula_id.into(),
            paper_expression: paper_expression.into(),
            paper_value,
            oracle_value,
            ratio: paper_value / oracle_value,
            deviation: (paper_value - oracle_value).abs() / oracle_value.abs(),
            parameters: parameters.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            timestamp,
        });
    }

    pub fn extend(&mut self, other: Ledger) {
        self.entries.extend(other.entries);
    }

    /// Entries with the timestamps zeroed, for comparing reruns.
    pub fn without_timestamps(&self) -> Ledger {
        Ledger { entries: self.entries.iter().map(|e| LedgerEntry { timestamp: 0, ..e.clone() }).collect() }
    }
}
