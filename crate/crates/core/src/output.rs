//! CSV serialization of ensemble statistics, reference solutions and single
//! trajectories. Floats use Rust's shortest round-trip formatting, so equal
//! values always produce equal bytes.

use std::io::{self, Write};

use crate::engine::{JumpDiffusion, TrajectoryRecord};
use crate::ensemble::{DensitySnapshot, EnsembleStats};
use crate::lindblad::OdeSolution;
use crate::linalg::DensityPair;

/// Absolute slack added to the 3σ band so that points where every
/// trajectory agrees (σ = 0, e.g. t = 0) compare equal up to rounding.
pub const DEVIATION_FLOOR: f64 = 1e-12;

pub const DENSITY_COLUMNS: [&str; 9] = [
    "eta1_11",
    "eta1_22",
    "eta1_12_re",
    "eta1_12_im",
    "eta2_11",
    "eta2_22",
    "eta2_12_re",
    "eta2_12_im",
    "excited_population",
];

fn num(x: f64) -> String {
    format!("{x}")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::Writer::from_writer(w)
}

pub fn write_ensemble_csv<W: Write, T>(w: W, stats: &EnsembleStats<T>) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(["t", "mean", "stderr", "n_samples", "n_discarded"])?;
    for i in 0..stats.times.len() {
        out.write_record([
            num(stats.times[i]),
            num(stats.mean[i]),
            num(stats.stderr[i]),
            stats.n_samples.to_string(),
            stats.n_discarded.to_string(),
        ])?;
    }
    out.flush()
}

fn density_fields(eta: &DensityPair) -> Vec<String> {
    let [a, b] = &eta.eta;
    let mut row = Vec::with_capacity(DENSITY_COLUMNS.len());
    for m in [a, b] {
        row.push(num(m.0[0][0].re));
        row.push(num(m.0[1][1].re));
        row.push(num(m.0[0][1].re));
        row.push(num(m.0[0][1].im));
    }
    row.push(num(eta.excited_population()));
    row
}

fn write_density_rows<W: Write>(w: W, rows: impl Iterator<Item = (f64, DensityPair)>) -> io::Result<()> {
    let mut out = writer(w);
    let mut header = vec!["t"];
    header.extend(DENSITY_COLUMNS);
    out.write_record(&header)?;
    for (t, eta) in rows {
        let mut row = vec![num(t)];
        row.extend(density_fields(&eta));
        out.write_record(&row)?;
    }
    out.flush()
}

/// Reference solution of the rate equation, one row per stored time.
pub fn write_ode_csv<W: Write>(w: W, sol: &OdeSolution<DensityPair>) -> io::Result<()> {
    write_density_rows(w, sol.times.iter().copied().zip(sol.states.iter().copied()))
}

/// Averaged densities reconstructed from trajectory snapshots.
pub fn write_density_csv<W: Write>(w: W, snapshots: &[DensitySnapshot<DensityPair>]) -> io::Result<()> {
    write_density_rows(w, snapshots.iter().map(|s| (s.time, s.density)))
}

/// Columns `t, observable, P_survival`.
pub fn write_trajectory_csv<W: Write, S>(w: W, rec: &TrajectoryRecord<S>) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(["t", "observable", "P_survival"])?;
    for i in 0..rec.times.len() {
        out.write_record([num(rec.times[i]), num(rec.observables[i]), num(rec.survival[i])])?;
    }
    out.flush()
}

/// Columns `t_jump, channel`.
pub fn write_jumps_csv<W: Write, M: JumpDiffusion>(w: W, model: &M, rec: &TrajectoryRecord<M::State>) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(["t_jump", "channel"])?;
    for j in &rec.jumps {
        out.write_record([num(j.time), model.channel_label(j.channel)])?;
    }
    out.flush()
}

/// Monte-Carlo means joined with a reference curve on the same grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub reference: Vec<f64>,
    /// |mean − reference| / stderr (0 when both sides agree exactly).
    pub normalized: Vec<f64>,
    /// Whether |mean − reference| ≤ k·stderr + [`DEVIATION_FLOOR`] everywhere.
    pub within: bool,
}

impl Comparison {
    /// Joins `stats` with `reference(t)` sampled at the ensemble grid.
    pub fn new<T>(stats: &EnsembleStats<T>, reference: &[f64], k: f64) -> Self {
        assert_eq!(stats.times.len(), reference.len(), "reference must share the ensemble grid");
        let mut normalized = Vec::with_capacity(reference.len());
        let mut within = true;
        for i in 0..reference.len() {
            let d = (stats.mean[i] - reference[i]).abs();
            let se = stats.stderr[i];
            within &= d <= k * se + DEVIATION_FLOOR;
            normalized.push(if d <= DEVIATION_FLOOR { 0.0 } else { d / se });
        }
        Self {
            times: stats.times.clone(),
            mean: stats.mean.clone(),
            stderr: stats.stderr.clone(),
            reference: reference.to_vec(),
            normalized,
            within,
        }
    }

    pub fn max_normalized(&self) -> f64 {
        self.normalized.iter().copied().fold(0.0, f64::max)
    }

    /// Point with the largest normalized deviation.
    pub fn worst(&self) -> Option<usize> {
        (0..self.normalized.len()).max_by(|&a, &b| self.normalized[a].total_cmp(&self.normalized[b]))
    }
}

/// Columns `t, mean, stderr, ode, normalized_deviation`.
pub fn write_compare_csv<W: Write>(w: W, cmp: &Comparison) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(["t", "mean", "stderr", "ode", "normalized_deviation"])?;
    for i in 0..cmp.times.len() {
        out.write_record([
            num(cmp.times[i]),
            num(cmp.mean[i]),
            num(cmp.stderr[i]),
            num(cmp.reference[i]),
            num(cmp.normalized[i]),
        ])?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::NormDrift;
    use crate::linalg::{CMat2, DensityVector};

    fn stats() -> EnsembleStats<DensityPair> {
        EnsembleStats {
            times: vec![0.0, 0.5],
            mean: vec![0.5, 0.25],
            stderr: vec![0.0, 0.01],
            n_samples: 9,
            n_discarded: 1,
            snapshots: vec![],
            norm_drift: NormDrift::default(),
        }
    }

    #[test]
    fn ensemble_csv_layout() {
        let mut buf = Vec::new();
        write_ensemble_csv(&mut buf, &stats()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "t,mean,stderr,n_samples,n_discarded\n0,0.5,0,9,1\n0.5,0.25,0.01,9,1\n");
    }

    #[test]
    fn ode_csv_layout() {
        let eta = DensityVector::new([CMat2::proj_excited() * 0.5, CMat2::proj_ground() * 0.5]);
        let sol = OdeSolution {
            times: vec![0.0],
            states: vec![eta],
        };
        let mut buf = Vec::new();
        write_ode_csv(&mut buf, &sol).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,eta1_11,eta1_22,eta1_12_re,eta1_12_im,eta2_11,eta2_22,eta2_12_re,eta2_12_im,excited_population"
        );
        assert_eq!(lines.next().unwrap(), "0,0.5,0,0,0,0,0.5,0,0,0.5");
    }

    #[test]
    fn comparison_uses_three_sigma_band() {
        let s = stats();
        let ok = Comparison::new(&s, &[0.5, 0.27], 3.0);
        assert!(ok.within);
        assert!((ok.max_normalized() - 2.0).abs() < 1e-9);
        let bad = Comparison::new(&s, &[0.5, 0.29], 3.0);
        assert!(!bad.within);
        assert_eq!(bad.worst(), Some(1));
        let zero_se = Comparison::new(&s, &[0.4, 0.25], 3.0);
        assert!(!zero_se.within);
        assert!(zero_se.normalized[0].is_infinite());
    }
}
