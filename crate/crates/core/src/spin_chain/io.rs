//! CSV input of spin configurations and CSV/JSON output of trajectories.

use super::{Boundary, SpinChainParams, SpinConfiguration, Trajectory};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

#[derive(Debug, Deserialize)]
struct SiteRow {
    n: usize,
    #[serde(rename = "Sx")]
    sx: f64,
    #[serde(rename = "Sy")]
    sy: f64,
    #[serde(rename = "Sz")]
    sz: f64,
}

/// Reads `n,Sx,Sy,Sz` rows; rows may come in any order but indices must be 0..N-1.
pub fn read_configuration<R: Read>(reader: R) -> Result<SpinConfiguration> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut rows: Vec<SiteRow> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
    rows.sort_by_key(|r| r.n);
    for (i, r) in rows.iter().enumerate() {
        if r.n != i {
            return Err(Error::Config(format!("site indices must be 0..N-1, found {} at row {i}", r.n)));
        }
    }
    SpinConfiguration::new(rows.into_iter().map(|r| [r.sx, r.sy, r.sz]).collect())
}

pub fn write_configuration<W: Write>(writer: W, config: &SpinConfiguration) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["n", "Sx", "Sy", "Sz"])?;
    for (n, s) in config.sites.iter().enumerate() {
        w.write_record([n.to_string(), fmt(s[0]), fmt(s[1]), fmt(s[2])])?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest representation that round-trips exactly.
pub fn fmt(x: f64) -> String {
    format!("{x:?}")
}

/// One row per (frame, site): `t,n,Sx,Sy,Sz`.
pub fn write_trajectory<W: Write>(writer: W, traj: &Trajectory) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["t", "n", "Sx", "Sy", "Sz"])?;
    for (t, frame) in traj.times.iter().zip(&traj.frames) {
        for (n, s) in frame.sites.iter().enumerate() {
            w.write_record([fmt(*t), n.to_string(), fmt(s[0]), fmt(s[1]), fmt(s[2])])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryManifest {
    pub params: SpinChainParams,
    pub boundary: Boundary,
    pub dt: f64,
    pub steps: usize,
    pub sites: usize,
    pub energy_initial: f64,
    pub energy_drift: f64,
    pub max_norm_error: f64,
    pub max_prenorm_deviation: f64,
    pub warnings: Vec<String>,
}

impl TrajectoryManifest {
    pub fn new(
        traj: &Trajectory,
        params: &SpinChainParams,
        boundary: Boundary,
        dt: f64,
        steps: usize,
    ) -> Self {
        Self {
            params: *params,
            boundary,
            dt,
            steps,
            sites: traj.frames.first().map_or(0, |f| f.len()),
            energy_initial: traj.energy_initial,
            energy_drift: traj.energy_drift,
            max_norm_error: traj.max_norm_error,
            max_prenorm_deviation: traj.max_prenorm_deviation,
            warnings: traj.warnings.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let c = SpinConfiguration::normalized(vec![[1.0, 0.2, -0.1], [0.3, 0.3, 0.9], [0.0, 1.0, 0.0]]);
        let mut buf = Vec::new();
        write_configuration(&mut buf, &c).unwrap();
        let back = read_configuration(buf.as_slice()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_non_unit_and_gaps() {
        let bad = "n,Sx,Sy,Sz\n0,1,0,0\n1,2,0,0\n";
        assert!(read_configuration(bad.as_bytes()).is_err());
        let gap = "n,Sx,Sy,Sz\n0,1,0,0\n2,1,0,0\n";
        assert!(read_configuration(gap.as_bytes()).is_err());
    }
}
