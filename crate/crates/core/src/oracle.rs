//! Monte Carlo check of the densities: sample uniform pure states on
//! C^(2^r), histogram the diagonal marginals xi, compare against a piecewise
//! polynomial density away from its walls.
//!
//! Sampling is split into fixed shards of `SHARD_SIZE` draws. Shard k uses
//! ChaCha8 seeded with the user seed on stream k, so results do not depend on
//! the thread count. Only |z_j|^2 is needed, and for a standard complex
//! Gaussian that is the Box-Muller radius -ln(u), u uniform on (0,1]. The log
//! comes from libm so it is the same on every platform.

use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::action::{build_weight_matrix, MAX_QUBITS};
use crate::algebra::{Polynomial, Rational};
use crate::engine::DhDensity;
use crate::walls::{enumerate_walls, Cell, Sign};
use crate::{Error, Result};

pub const MAX_SAMPLES: u64 = 1_000_000_000;
pub const SHARD_SIZE: u64 = 1 << 16;
/// Smallest sample count accepted by the comparisons.
pub const MIN_COMPARE_SAMPLES: u64 = 10_000;
const MAX_GRID_CELLS: usize = 1 << 24;
const MAX_POINTS: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub r: usize,
    pub samples: u64,
    pub bins: usize,
    pub seed: u64,
    /// Wall exclusion margin in xi units; `None` means one bin half-width 1/bins.
    pub band: Option<Rational>,
}

impl SampleConfig {
    pub fn new(r: usize, samples: u64, bins: usize, seed: u64) -> Self {
        SampleConfig {
            r,
            samples,
            bins,
            seed,
            band: None,
        }
    }

    pub fn band(&self) -> Rational {
        self.band
            .clone()
            .unwrap_or_else(|| Rational::new(1.into(), (self.bins as i64).into()))
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_QUBITS).contains(&self.r) {
            return Err(Error::Config(format!(
                "qubit count {} outside 1..={MAX_QUBITS}",
                self.r
            )));
        }
        if self.samples == 0 || self.samples > MAX_SAMPLES {
            return Err(Error::Config(format!(
                "samples must be in 1..={MAX_SAMPLES}, got {}",
                self.samples
            )));
        }
        if self.bins < 4 {
            return Err(Error::Config(format!(
                "need at least 4 bins, got {}",
                self.bins
            )));
        }
        if (self.bins as f64).powi(self.r as i32) > MAX_GRID_CELLS as f64 {
            return Err(Error::Config(format!(
                "{}^{} bins is too many",
                self.bins, self.r
            )));
        }
        let band = self.band();
        if band < Rational::zero()
            || band * Rational::from_integer((self.bins as i64).into()) > Rational::one()
        {
            return Err(Error::Config("wall band must lie in [0, 1/bins]".into()));
        }
        Ok(())
    }
}

/// Counts on a regular grid over [-1,1]^dims.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    pub dims: usize,
    pub bins: usize,
    pub samples: u64,
    /// Row-major, first axis slowest.
    pub counts: Vec<u64>,
    /// Width of the slab the samples were drawn from along the dropped axis
    /// (slice histograms only), stored as a rational for exact equality.
    pub slab: Option<Rational>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn cell_width(&self) -> f64 {
        2.0 / self.bins as f64
    }

    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims];
        for k in (0..self.dims).rev() {
            idx[k] = flat % self.bins;
            flat /= self.bins;
        }
        idx
    }

    pub fn center(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .map(|&i| -1.0 + (i as f64 + 0.5) * self.cell_width())
            .collect()
    }

    /// counts / (samples * cell volume [* slab width]).
    pub fn density(&self, flat: usize) -> f64 {
        let vol = self.cell_width().powi(self.dims as i32);
        let slab = self
            .slab
            .as_ref()
            .and_then(ToPrimitive::to_f64)
            .unwrap_or(1.0);
        self.counts[flat] as f64 / (self.samples as f64 * vol * slab)
    }
}

fn bin_of(x: f64, bins: usize) -> usize {
    let k = ((x + 1.0) * 0.5 * bins as f64).floor();
    (k.max(0.0) as usize).min(bins - 1)
}

/// Runs `visit` on every sample, shard by shard in parallel, and folds the
/// shard states in shard order.
fn run_shards<T, I, V, M>(cfg: &SampleConfig, init: I, visit: V, merge: M) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    V: Fn(&mut T, &[f64]) + Sync,
    M: Fn(T, T) -> T,
{
    cfg.validate()?;
    let a = build_weight_matrix(cfg.r)?;
    let cols = a.columns();
    let n = a.num_points();
    let shards = cfg.samples.div_ceil(SHARD_SIZE);
    let parts: Vec<T> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(s);
            let count = SHARD_SIZE.min(cfg.samples - s * SHARD_SIZE);
            let mut state = init();
            let mut e = vec![0.0; n];
            let mut xi = vec![0.0; cfg.r];
            for _ in 0..count {
                let mut total = 0.0;
                for ej in e.iter_mut() {
                    let u: f64 = 1.0 - rng.gen::<f64>();
                    *ej = -libm::log(u);
                    total += *ej;
                }
                for (i, x) in xi.iter_mut().enumerate() {
                    let s: f64 = cols.iter().zip(&e).map(|(c, &ej)| c[i] as f64 * ej).sum();
                    *x = s / total;
                }
                visit(&mut state, &xi);
            }
            state
        })
        .collect();
    Ok(parts.into_iter().reduce(merge).unwrap_or_else(init))
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Joint histogram of (xi_1..xi_r).
pub fn sample_marginals(cfg: &SampleConfig) -> Result<Histogram> {
    cfg.validate()?;
    let (r, bins) = (cfg.r, cfg.bins);
    let cells = bins.pow(r as u32);
    let counts = run_shards(
        cfg,
        || vec![0u64; cells],
        |c, xi| {
            let flat = xi.iter().fold(0, |acc, &x| acc * bins + bin_of(x, bins));
            c[flat] += 1;
        },
        add_counts,
    )?;
    Ok(Histogram {
        dims: r,
        bins,
        samples: cfg.samples,
        counts,
        slab: None,
    })
}

/// Histogram of the other coordinates over samples with |xi_axis| < half_width.
/// Densities are per unit of the full r-dimensional volume, so they estimate
/// the slab average of the r-dimensional density.
pub fn sample_slice(cfg: &SampleConfig, axis: usize, half_width: &Rational) -> Result<Histogram> {
    cfg.validate()?;
    if cfg.r < 2 || axis >= cfg.r {
        return Err(Error::Shape(format!(
            "slice axis {} needs 2 <= r and axis < r = {}",
            axis + 1,
            cfg.r
        )));
    }
    let h = half_width
        .to_f64()
        .filter(|&h| h > 0.0 && h <= 1.0)
        .ok_or_else(|| Error::Config(format!("slab half-width {half_width} outside (0,1]")))?;
    let bins = cfg.bins;
    let cells = bins.pow(cfg.r as u32 - 1);
    let counts = run_shards(
        cfg,
        || vec![0u64; cells],
        |c, xi| {
            if xi[axis].abs() < h {
                let flat = xi
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != axis)
                    .fold(0, |acc, (_, &x)| acc * bins + bin_of(x, bins));
                c[flat] += 1;
            }
        },
        add_counts,
    )?;
    Ok(Histogram {
        dims: cfg.r - 1,
        bins,
        samples: cfg.samples,
        counts,
        slab: Some(half_width * Rational::from_integer(2.into())),
    })
}

/// The first `n` sampled points, in shard order.
pub fn sample_points(cfg: &SampleConfig, n: usize) -> Result<Vec<Vec<f64>>> {
    if n > MAX_POINTS || n as u64 > cfg.samples {
        return Err(Error::Config(format!(
            "cannot return {n} points (cap {MAX_POINTS}, samples {})",
            cfg.samples
        )));
    }
    let sub = SampleConfig {
        samples: n as u64,
        ..cfg.clone()
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    run_shards(
        &sub,
        Vec::new,
        |v: &mut Vec<Vec<f64>>, xi| v.push(xi.to_vec()),
        |mut a, b| {
            a.extend(b);
            a
        },
    )
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// Hyperplane <normal, x> = offset in floating point.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatWall {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl FloatWall {
    /// Distance from the box to the wall, 0 if the wall meets the box.
    fn box_distance(&self, lo: &[f64], hi: &[f64]) -> f64 {
        let (mut min, mut max) = (-self.offset, -self.offset);
        for ((&n, &l), &h) in self.normal.iter().zip(lo).zip(hi) {
            min += (n * l).min(n * h);
            max += (n * l).max(n * h);
        }
        if min <= 0.0 && max >= 0.0 {
            return 0.0;
        }
        let norm = self.normal.iter().map(|n| n * n).sum::<f64>().sqrt();
        min.abs().min(max.abs()) / norm
    }
}

/// All walls of the r-cube arrangement, boundary facets included.
pub fn float_walls(r: usize) -> Result<Vec<FloatWall>> {
    let a = build_weight_matrix(r)?;
    Ok(enumerate_walls(&a)
        .into_iter()
        .map(|w| FloatWall {
            normal: w.normal.iter().map(|&n| n as f64).collect(),
            offset: w.offset.to_f64().unwrap_or(f64::NAN),
        })
        .collect())
}

/// Walls meeting the hyperplane x_axis = 0, expressed in the other coordinates.
pub fn slice_walls(r: usize, axis: usize) -> Result<Vec<FloatWall>> {
    let mut out: Vec<FloatWall> = Vec::new();
    for w in float_walls(r)? {
        let normal: Vec<f64> = w
            .normal
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != axis)
            .map(|(_, &n)| n)
            .collect();
        if normal.iter().all(|&n| n == 0.0) {
            continue;
        }
        let fw = FloatWall {
            normal,
            offset: w.offset,
        };
        if !out.contains(&fw) {
            out.push(fw);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Linf,
    L2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellResidual {
    pub index: Vec<usize>,
    pub center: Vec<f64>,
    pub empirical: f64,
    pub model: f64,
    /// Far enough from every wall to be scored.
    pub included: bool,
}

impl CellResidual {
    pub fn residual(&self) -> f64 {
        self.empirical - self.model
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub dims: usize,
    pub bins: usize,
    pub samples: u64,
    pub band: f64,
    pub compared: usize,
    pub excluded: usize,
    pub linf: f64,
    /// Root mean square residual over the compared cells.
    pub l2: f64,
    pub metric: Metric,
    pub threshold: f64,
    /// Ring-average monotonicity, when checked.
    pub monotone: Option<bool>,
    pub pass: bool,
    pub cells: Vec<CellResidual>,
}

/// Scores `h` against `model` at cell centers, skipping cells within `band`
/// of any wall.
pub fn compare_grid<F>(
    h: &Histogram,
    model: F,
    walls: &[FloatWall],
    band: f64,
    metric: Metric,
    threshold: f64,
) -> Report
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let w = h.cell_width();
    let cells: Vec<CellResidual> = (0..h.counts.len())
        .into_par_iter()
        .map(|flat| {
            let index = h.unflatten(flat);
            let lo: Vec<f64> = index.iter().map(|&i| -1.0 + i as f64 * w).collect();
            let hi: Vec<f64> = lo.iter().map(|l| l + w).collect();
            let center = h.center(&index);
            let included = walls.iter().all(|wall| wall.box_distance(&lo, &hi) > band);
            CellResidual {
                empirical: h.density(flat),
                model: model(&center),
                index,
                center,
                included,
            }
        })
        .collect();
    let scored: Vec<f64> = cells
        .iter()
        .filter(|c| c.included)
        .map(CellResidual::residual)
        .collect();
    let linf = scored.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let l2 = if scored.is_empty() {
        0.0
    } else {
        (scored.iter().map(|r| r * r).sum::<f64>() / scored.len() as f64).sqrt()
    };
    let value = match metric {
        Metric::Linf => linf,
        Metric::L2 => l2,
    };
    Report {
        dims: h.dims,
        bins: h.bins,
        samples: h.samples,
        band,
        compared: scored.len(),
        excluded: cells.len() - scored.len(),
        linf,
        l2,
        metric,
        threshold,
        monotone: None,
        pass: !scored.is_empty() && value <= threshold,
        cells,
    }
}

/// Floating-point evaluator for a piecewise polynomial density.
pub struct FloatDensity {
    r: usize,
    pieces: HashMap<Cell, Vec<(Vec<i32>, f64)>>,
}

impl FloatDensity {
    pub fn new(d: &DhDensity) -> Self {
        let pieces = d
            .cells
            .iter()
            .map(|(c, p)| (c.clone(), float_terms(p)))
            .collect();
        FloatDensity { r: d.r, pieces }
    }

    /// Ties in |x_i| are broken by axis index; the density is continuous so
    /// either side gives the same value.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut axes: Vec<usize> = (0..self.r).collect();
        axes.sort_by(|&i, &j| x[j].abs().total_cmp(&x[i].abs()).then(j.cmp(&i)));
        let steps = axes[..self.r - 1]
            .iter()
            .map(|&i| (i, if x[i] < 0.0 { Sign::Minus } else { Sign::Plus }))
            .collect();
        let Ok(cell) = Cell::new(self.r, steps) else {
            return f64::NAN;
        };
        match self.pieces.get(&cell) {
            Some(terms) => terms
                .iter()
                .map(|(e, c)| c * e.iter().zip(x).map(|(&k, &xv)| xv.powi(k)).product::<f64>())
                .sum(),
            None => f64::NAN,
        }
    }

    /// Average over |x_axis| < h of the density, other coordinates from `y`.
    /// Three-point Gauss-Legendre, exact for the quintics met away from walls.
    pub fn slab_average(&self, axis: usize, h: f64, y: &[f64]) -> f64 {
        let nodes = [
            (-(0.6f64).sqrt(), 5.0 / 9.0),
            (0.0, 8.0 / 9.0),
            ((0.6f64).sqrt(), 5.0 / 9.0),
        ];
        let mut x = Vec::with_capacity(self.r);
        let mut acc = 0.0;
        for (t, wt) in nodes {
            x.clear();
            x.extend_from_slice(&y[..axis]);
            x.push(t * h);
            x.extend_from_slice(&y[axis..]);
            acc += wt * self.eval(&x);
        }
        acc / 2.0
    }
}

fn float_terms(p: &Polynomial) -> Vec<(Vec<i32>, f64)> {
    p.terms()
        .map(|(m, c)| {
            (
                m.exps().iter().map(|&e| e as i32).collect(),
                c.to_f64().unwrap_or(f64::NAN),
            )
        })
        .collect()
}

fn check_density(h: &Histogram, d: &DhDensity, dims: usize) -> Result<()> {
    if h.dims != dims {
        return Err(Error::Shape(format!(
            "histogram has {} axes, density needs {dims}",
            h.dims
        )));
    }
    if h.samples < MIN_COMPARE_SAMPLES {
        return Err(Error::Config(format!(
            "comparison needs at least {MIN_COMPARE_SAMPLES} samples"
        )));
    }
    let total = d.integral()?;
    if !total.is_one() {
        return Err(Error::NotNormalized(total.to_string()));
    }
    Ok(())
}

/// Residuals of a joint histogram against a normalized density.
pub fn compare_density(
    h: &Histogram,
    d: &DhDensity,
    band: f64,
    metric: Metric,
    threshold: f64,
) -> Result<Report> {
    check_density(h, d, d.r)?;
    let f = FloatDensity::new(d);
    Ok(compare_grid(
        h,
        |x| f.eval(x),
        &float_walls(d.r)?,
        band,
        metric,
        threshold,
    ))
}

/// Slice histogram (`sample_slice`) against the slab average of `d`, plus a
/// check that ring averages fall off from the center of the slice.
pub fn compare_slice(
    h: &Histogram,
    d: &DhDensity,
    axis: usize,
    band: f64,
    threshold: f64,
) -> Result<Report> {
    check_density(h, d, d.r - 1)?;
    let half = h
        .slab
        .as_ref()
        .and_then(ToPrimitive::to_f64)
        .ok_or_else(|| Error::Shape("not a slice histogram".into()))?
        / 2.0;
    let f = FloatDensity::new(d);
    let mut report = compare_grid(
        h,
        |y| f.slab_average(axis, half, y),
        &slice_walls(d.r, axis)?,
        band,
        Metric::L2,
        threshold,
    );
    let mono = ring_monotone(h, 0.05);
    report.monotone = Some(mono);
    report.pass &= mono;
    Ok(report)
}

/// Averages the empirical density over square rings around the grid center
/// and checks they do not increase outward by more than `slack` times the
/// largest ring average.
pub fn ring_monotone(h: &Histogram, slack: f64) -> bool {
    let half = h.bins / 2;
    let rings = h.bins - half;
    let mut sum = vec![0.0; rings];
    let mut num = vec![0usize; rings];
    for flat in 0..h.counts.len() {
        let idx = h.unflatten(flat);
        // distance from the central 2x2 block (or cell, for odd bins)
        let k = idx
            .iter()
            .map(|&i| if i >= half { i - half } else { half - 1 - i })
            .max()
            .unwrap_or(0)
            .min(rings - 1);
        sum[k] += h.density(flat);
        num[k] += 1;
    }
    let avg: Vec<f64> = sum
        .iter()
        .zip(&num)
        .map(|(s, &n)| if n == 0 { 0.0 } else { s / n as f64 })
        .collect();
    let top = avg.iter().cloned().fold(0.0, f64::max);
    avg.windows(2).all(|w| w[1] <= w[0] + slack * top)
}
