//! Grid scans: evaluate one function over an (alpha, beta) rectangle of the
//! lattice frame. Points are processed in parallel; rows are emitted in a
//! fixed row-major order (beta outer, alpha inner). A point the evaluator
//! rejects (pole, strip, convergence) becomes a nan/null row instead of
//! aborting the scan.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use renell::eval::Representation;
use renell::{FunctionId, Lattice};

use crate::dispatch::evaluate;
use crate::output::{fmt_f64, json_number};

pub struct ScanGrid {
    pub alpha_count: usize,
    pub beta_count: usize,
    pub alpha_range: (f64, f64),
    pub beta_range: (f64, f64),
}

pub struct ScanRow {
    pub alpha: f64,
    pub beta: f64,
    pub value: Option<(Complex64, usize, f64)>,
}

fn grid_coord(range: (f64, f64), index: usize, count: usize) -> f64 {
    if count == 1 {
        return range.0;
    }
    range.0 + (range.1 - range.0) * index as f64 / (count - 1) as f64
}

pub fn run_scan(
    fn_id: FunctionId,
    rep: Option<Representation>,
    lat: &Lattice,
    grid: &ScanGrid,
    tol: f64,
) -> Vec<ScanRow> {
    let total = grid.alpha_count * grid.beta_count;
    (0..total)
        .into_par_iter()
        .map(|k| {
            let j = k / grid.alpha_count;
            let i = k % grid.alpha_count;
            let alpha = grid_coord(grid.alpha_range, i, grid.alpha_count);
            let beta = grid_coord(grid.beta_range, j, grid.beta_count);
            let z = lat.from_frame(alpha, beta);
            let value = evaluate(fn_id, rep, z, lat, tol)
                .ok()
                .map(|ev| (ev.value, ev.terms_used, ev.tail_estimate));
            ScanRow { alpha, beta, value }
        })
        .collect()
}

pub fn write_csv(out: &mut dyn Write, rows: &[ScanRow]) -> std::io::Result<()> {
    writeln!(out, "alpha,beta,re,im,terms,tail")?;
    for r in rows {
        match r.value {
            Some((v, terms, tail)) => writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_f64(r.alpha),
                fmt_f64(r.beta),
                fmt_f64(v.re),
                fmt_f64(v.im),
                terms,
                fmt_f64(tail)
            )?,
            None => writeln!(
                out,
                "{},{},nan,nan,0,nan",
                fmt_f64(r.alpha),
                fmt_f64(r.beta)
            )?,
        }
    }
    Ok(())
}

pub fn write_json(out: &mut dyn Write, rows: &[ScanRow]) -> std::io::Result<()> {
    writeln!(out, "{{\"rows\":[")?;
    for (k, r) in rows.iter().enumerate() {
        let sep = if k + 1 == rows.len() { "" } else { "," };
        match r.value {
            Some((v, terms, tail)) => writeln!(
                out,
                "{{\"alpha\":{},\"beta\":{},\"re\":{},\"im\":{},\"terms\":{},\"tail\":{}}}{sep}",
                json_number(r.alpha),
                json_number(r.beta),
                json_number(v.re),
                json_number(v.im),
                terms,
                json_number(tail)
            )?,
            None => writeln!(
                out,
                "{{\"alpha\":{},\"beta\":{},\"re\":null,\"im\":null,\"terms\":0,\"tail\":null}}{sep}",
                json_number(r.alpha),
                json_number(r.beta)
            )?,
        }
    }
    writeln!(out, "]}}")?;
    Ok(())
}

pub fn write_human(out: &mut dyn Write, rows: &[ScanRow]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:>10} {:>10} {:>24} {:>24} {:>7} {:>10}",
        "alpha", "beta", "re", "im", "terms", "tail"
    )?;
    for r in rows {
        match r.value {
            Some((v, terms, tail)) => writeln!(
                out,
                "{:>10.6} {:>10.6} {:>24.16e} {:>24.16e} {:>7} {:>10.2e}",
                r.alpha, r.beta, v.re, v.im, terms, tail
            )?,
            None => writeln!(
                out,
                "{:>10.6} {:>10.6} {:>24} {:>24} {:>7} {:>10}",
                r.alpha, r.beta, "nan", "nan", 0, "nan"
            )?,
        }
    }
    Ok(())
}
