//! Sup-over-grid distances between two families of maps.

use openrwa::norms::{choi_matrix, diamond_numeric, diamond_qubit_subunital, is_qubit_subunital, NormKind};
use openrwa::{Result, Superop};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug)]
pub struct MeasureOptions {
    pub norm: NormKind,
    pub restarts: usize,
    pub candidates: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub sup: f64,
    pub argmax: f64,
}

/// Points per fast period, and uniform points on `[0, T]`.
pub const PER_PERIOD: usize = 25;
pub const UNIFORM: usize = 200;

/// Union of `PER_PERIOD` points per period `2π/ω` and `UNIFORM` evenly spaced
/// points, restricted to `[start, horizon]` and always containing both ends.
pub fn time_grid(omega: f64, start: f64, horizon: f64) -> Vec<f64> {
    let mut ts = Vec::new();
    if omega > 0.0 {
        let dt = std::f64::consts::TAU / omega / PER_PERIOD as f64;
        let n = (horizon / dt).floor() as usize;
        ts.extend((0..=n).map(|k| k as f64 * dt));
    }
    ts.extend((0..=UNIFORM).map(|k| horizon * k as f64 / UNIFORM as f64));
    ts.push(start);
    ts.retain(|&t| t >= start && t <= horizon);
    ts.sort_by(f64::total_cmp);
    let eps = 1e-12 * horizon.max(1.0);
    ts.dedup_by(|a, b| (*a - *b).abs() <= eps);
    ts
}

/// `sup_k ‖Φ_k‖` over the sampled maps.
///
/// In the diamond norm, qubit subunital maps use the exact formula. Other maps
/// are ranked by `‖C(Φ)‖₁` and the leading `candidates` receive the numeric
/// ascent, which also dominates the Choi trace norm at those points.
pub fn sup_norm(maps: &[(f64, Superop)], opts: &MeasureOptions) -> Result<Measurement> {
    if maps.is_empty() {
        return Ok(Measurement { sup: 0.0, argmax: 0.0 });
    }
    let values: Vec<f64> = match opts.norm {
        NormKind::Spectral => maps
            .par_iter()
            .map(|(_, m)| m.spectral_norm())
            .collect::<Result<_>>()?,
        NormKind::Diamond if maps.iter().all(|(_, m)| is_qubit_subunital(m)) => maps
            .par_iter()
            .map(|(_, m)| diamond_qubit_subunital(m))
            .collect::<Result<_>>()?,
        NormKind::Diamond => {
            let lower: Vec<f64> = maps
                .par_iter()
                .map(|(_, m)| choi_matrix(m).trace_norm())
                .collect::<Result<_>>()?;
            let mut order: Vec<usize> = (0..maps.len()).collect();
            order.sort_by(|&a, &b| lower[b].total_cmp(&lower[a]).then(a.cmp(&b)));
            order.truncate(opts.candidates.max(1));
            let refined: Vec<(usize, f64)> = order
                .par_iter()
                .map(|&k| {
                    let seed = opts.seed.wrapping_add(k as u64);
                    diamond_numeric(&maps[k].1, opts.restarts, seed).map(|v| (k, v))
                })
                .collect::<Result<_>>()?;
            let mut values = lower;
            for (k, v) in refined {
                values[k] = values[k].max(v);
            }
            values
        }
    };
    let (k, sup) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
    Ok(Measurement { sup, argmax: maps[k].0 })
}
