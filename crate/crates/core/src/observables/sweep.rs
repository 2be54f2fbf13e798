//! Parameter sweeps emitting the figure data as tables.
//!
//! Rows are generated in lexicographic order of their key and computed
//! independently, so the output does not depend on the worker count.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{expectations_direct, quadratures, statistics};
use crate::algebra::AlgebraParams;
use crate::error::{GncsError, Result};
use crate::measure;
use crate::states::{build_state, GncsSpec};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepGrid {
    pub lambdas: Vec<f64>,
    pub rs: Vec<u32>,
    pub phis: Vec<f64>,
    pub zsq: Vec<f64>,
}

impl SweepGrid {
    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty() || self.rs.is_empty() || self.phis.is_empty() || self.zsq.is_empty()
    }

    fn squeeze_keys(&self) -> Vec<(f64, u32, f64, f64)> {
        let mut keys = Vec::new();
        for &l in &self.lambdas {
            for &r in &self.rs {
                for &phi in &self.phis {
                    for &t in &self.zsq {
                        keys.push((l, r, phi, t));
                    }
                }
            }
        }
        keys
    }

    fn stats_keys(&self) -> Vec<(f64, u32, f64)> {
        let mut keys = Vec::new();
        for &l in &self.lambdas {
            for &r in &self.rs {
                for &t in &self.zsq {
                    keys.push((l, r, t));
                }
            }
        }
        keys
    }
}

/// |z|² values: i·max/steps for i = 1 … steps, or an inclusive linspace
/// from `min` when one is given.
pub fn zsq_grid(min: Option<f64>, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(max > 0.0) || !max.is_finite() {
        return Err(GncsError::Domain(format!("zsq-max must be positive, got {max}")));
    }
    if steps == 0 {
        return Err(GncsError::Size("steps must be >= 1".into()));
    }
    match min {
        None => Ok((1..=steps).map(|i| i as f64 * max / steps as f64).collect()),
        Some(lo) => {
            if !(lo >= 0.0) || lo > max {
                return Err(GncsError::Domain(format!(
                    "zsq-min must lie in [0, zsq-max], got {lo}"
                )));
            }
            if steps == 1 {
                return Ok(vec![lo]);
            }
            let h = (max - lo) / (steps - 1) as f64;
            Ok((0..steps)
                .map(|i| if i + 1 == steps { max } else { lo + i as f64 * h })
                .collect())
        }
    }
}

/// Inclusive linspace on [lo, hi].
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let h = (hi - lo) / (points - 1) as f64;
            (0..points)
                .map(|i| if i + 1 == points { hi } else { lo + i as f64 * h })
                .collect()
        }
    }
}

fn run_parallel<K, T, F>(keys: Vec<K>, threads: Option<usize>, f: F) -> Result<Vec<T>>
where
    K: Send + Sync,
    T: Send,
    F: Fn(&K) -> T + Send + Sync,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| GncsError::Unsupported(format!("thread pool: {e}")))?;
    Ok(pool.install(|| keys.par_iter().map(&f).collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SqueezeRow {
    pub lambda: f64,
    pub r: u32,
    pub phi: f64,
    pub z_abs2: f64,
    pub var_x1: Option<f64>,
    pub var_x2: Option<f64>,
    pub j3_abs: Option<f64>,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRow {
    pub lambda: f64,
    pub r: u32,
    pub z_abs2: f64,
    pub n_mean: Option<f64>,
    pub n2_mean: Option<f64>,
    pub g2: Option<f64>,
    pub mandel_q: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureRow {
    pub lambda: f64,
    pub r: u32,
    pub t: f64,
    pub weight: Option<f64>,
    pub error: Option<String>,
}

fn squeeze_point(lambda: f64, r: u32, phi: f64, zsq: f64, tol: f64) -> Result<super::QuadratureReport> {
    let spec = GncsSpec::new(lambda, r, zsq.sqrt(), phi)?;
    quadratures(&expectations_direct(&build_state(&spec, tol)?)?)
}

fn stats_point(lambda: f64, r: u32, zsq: f64, tol: f64) -> Result<(super::ExpectationSet, super::StatisticsReport)> {
    let spec = GncsSpec::new(lambda, r, zsq.sqrt(), 0.0)?;
    let e = expectations_direct(&build_state(&spec, tol)?)?;
    Ok((e, statistics(&e)?))
}

pub fn squeeze_rows(grid: &SweepGrid, tolerance: f64, threads: Option<usize>) -> Result<Vec<SqueezeRow>> {
    run_parallel(grid.squeeze_keys(), threads, |&(lambda, r, phi, z_abs2)| {
        let mut row = SqueezeRow {
            lambda,
            r,
            phi,
            z_abs2,
            var_x1: None,
            var_x2: None,
            j3_abs: None,
            s1: None,
            s2: None,
            error: None,
        };
        match squeeze_point(lambda, r, phi, z_abs2, tolerance) {
            Ok(q) => {
                row.var_x1 = Some(q.var_x1);
                row.var_x2 = Some(q.var_x2);
                row.j3_abs = Some(q.j3_abs);
                row.s1 = Some(q.s1);
                row.s2 = Some(q.s2);
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        row
    })
}

pub fn stats_rows(grid: &SweepGrid, tolerance: f64, threads: Option<usize>) -> Result<Vec<StatsRow>> {
    run_parallel(grid.stats_keys(), threads, |&(lambda, r, z_abs2)| {
        let mut row = StatsRow {
            lambda,
            r,
            z_abs2,
            n_mean: None,
            n2_mean: None,
            g2: None,
            mandel_q: None,
            error: None,
        };
        match stats_point(lambda, r, z_abs2, tolerance) {
            Ok((e, s)) => {
                row.n_mean = Some(e.n_mean);
                row.n2_mean = Some(e.n2_mean);
                row.g2 = Some(s.g2);
                row.mandel_q = Some(s.q);
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        row
    })
}

pub fn measure_rows(lambdas: &[f64], rs: &[u32], ts: &[f64], threads: Option<usize>) -> Result<Vec<MeasureRow>> {
    let mut keys = Vec::new();
    for &l in lambdas {
        for &r in rs {
            for &t in ts {
                keys.push((l, r, t));
            }
        }
    }
    run_parallel(keys, threads, |&(lambda, r, t)| {
        let w = AlgebraParams::new(lambda, r).and_then(|p| measure::weight(&p, t));
        MeasureRow {
            lambda,
            r,
            t,
            weight: w.as_ref().ok().copied(),
            error: w.err().map(|e| e.to_string()),
        }
    })
}

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> GncsError {
    GncsError::Unsupported(format!("csv output: {e}"))
}

fn write_table<W: Write>(out: W, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| GncsError::Unsupported(format!("csv output: {e}")))
}

pub const SQUEEZE_HEADER: [&str; 10] = [
    "lambda", "r", "phi", "z_abs2", "var_x1", "var_x2", "j3_abs", "s1", "s2", "error",
];
pub const STATS_HEADER: [&str; 8] = ["lambda", "r", "z_abs2", "n_mean", "n2_mean", "g2", "mandel_q", "error"];
pub const MEASURE_HEADER: [&str; 4] = ["lambda", "r", "t", "weight"];

pub fn write_squeeze_csv<W: Write>(out: W, rows: &[SqueezeRow]) -> Result<()> {
    write_table(
        out,
        &SQUEEZE_HEADER,
        rows.iter().map(|r| {
            vec![
                fmt_float(r.lambda),
                r.r.to_string(),
                fmt_float(r.phi),
                fmt_float(r.z_abs2),
                fmt_opt(r.var_x1),
                fmt_opt(r.var_x2),
                fmt_opt(r.j3_abs),
                fmt_opt(r.s1),
                fmt_opt(r.s2),
                r.error.clone().unwrap_or_default(),
            ]
        }),
    )
}

pub fn write_stats_csv<W: Write>(out: W, rows: &[StatsRow]) -> Result<()> {
    write_table(
        out,
        &STATS_HEADER,
        rows.iter().map(|r| {
            vec![
                fmt_float(r.lambda),
                r.r.to_string(),
                fmt_float(r.z_abs2),
                fmt_opt(r.n_mean),
                fmt_opt(r.n2_mean),
                fmt_opt(r.g2),
                fmt_opt(r.mandel_q),
                r.error.clone().unwrap_or_default(),
            ]
        }),
    )
}

/// Rows without a weight are skipped; `measure` refuses them up front.
pub fn write_measure_csv<W: Write>(out: W, rows: &[MeasureRow]) -> Result<()> {
    write_table(
        out,
        &MEASURE_HEADER,
        rows.iter().filter_map(|r| {
            r.weight
                .map(|w| vec![fmt_float(r.lambda), r.r.to_string(), fmt_float(r.t), fmt_float(w)])
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_grid_gives_header_only() {
        let rows = squeeze_rows(&SweepGrid::default(), 1e-14, Some(2)).unwrap();
        assert!(rows.is_empty());
        let mut buf = Vec::new();
        write_squeeze_csv(&mut buf, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "lambda,r,phi,z_abs2,var_x1,var_x2,j3_abs,s1,s2,error\n"
        );
    }

    #[test]
    fn zsq_grids() {
        assert_eq!(zsq_grid(None, 2.0, 4).unwrap(), vec![0.5, 1.0, 1.5, 2.0]);
        assert_eq!(zsq_grid(Some(1.0), 3.0, 3).unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(zsq_grid(None, 0.0, 3).is_err());
        assert!(zsq_grid(Some(4.0), 3.0, 3).is_err());
        assert!(zsq_grid(None, 1.0, 0).is_err());
    }

    #[test]
    fn row_order_is_lexicographic() {
        let grid = SweepGrid {
            lambdas: vec![0.25, 1.0],
            rs: vec![2, 3],
            phis: vec![0.0, 0.5],
            zsq: vec![0.5, 1.0],
        };
        let rows = squeeze_rows(&grid, 1e-14, Some(3)).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.lambda, r.r, r.phi, r.z_abs2)).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(keys, sorted);
        assert_eq!(keys.len(), 16);
    }

    #[test]
    fn bad_rows_are_recorded_not_fatal() {
        let grid = SweepGrid {
            lambdas: vec![0.5],
            rs: vec![1],
            phis: vec![0.0],
            zsq: vec![0.5, 1.5],
        };
        let rows = squeeze_rows(&grid, 1e-14, None).unwrap();
        assert!(rows[0].error.is_none());
        assert!(rows[1].error.as_deref().unwrap().contains("|z| < 1"));
        let mut buf = Vec::new();
        write_squeeze_csv(&mut buf, &rows).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
    }

    #[test]
    fn measure_rows_refuse_r1() {
        let rows = measure_rows(&[1.5], &[1, 2], &[1.0], Some(1)).unwrap();
        assert!(rows[0].weight.is_none() && rows[0].error.is_some());
        assert!(rows[1].weight.unwrap() > 0.0);
    }

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
    }
}
