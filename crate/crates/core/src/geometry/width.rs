use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{argument, Result};
use crate::rng::sample_rng;
use crate::spectral::eigh;

use super::{h_ppt, h_sep_seesaw, sample_direction, Cut, GeometryConfig, SolverReport};

/// One sampled direction on `d (x) d` with its support-function values.
#[derive(Debug, Clone)]
pub struct WidthSample {
    pub sample_id: u64,
    /// Master seed; together with `sample_id` it selects the random stream.
    pub seed: u64,
    pub h_ppt: SolverReport,
    /// Seesaw value, a lower bound on h_SEP(u).
    pub h_sep: f64,
    /// `lambda_max(u)`, the support function of all states.
    pub h_states: f64,
    pub opnorm: f64,
}

/// Draws the direction for `sample_id` and evaluates it. `opnorm_only`
/// skips both solvers (their fields are then NaN) for large `d`.
pub fn width_sample(d: usize, sample_id: u64, seed: u64, cfg: &GeometryConfig, opnorm_only: bool) -> Result<WidthSample> {
    if d < 2 {
        return Err(argument("width experiments need d >= 2"));
    }
    let mut rng = sample_rng(seed, sample_id);
    let u = sample_direction(d * d, &mut rng)?;
    let eig = eigh(u.operator())?;
    let h_states = eig.max();
    let opnorm = eig.max().max(-eig.min());
    if opnorm_only {
        let empty = SolverReport { value: f64::NAN, feasibility_residual: f64::NAN, iterations: 0, converged: false, certificate: None, upper_bound: None };
        return Ok(WidthSample { sample_id, seed, h_ppt: empty, h_sep: f64::NAN, h_states, opnorm });
    }
    let report = h_ppt(&u, &Cut::bipartite(d, d)?, cfg)?;
    let sep = h_sep_seesaw(u.operator(), d, d, cfg.seesaw_restarts, cfg.seesaw_sweeps, &mut rng)?;
    Ok(WidthSample { sample_id, seed, h_ppt: report, h_sep: sep.value, h_states, opnorm })
}

/// Mean, median and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub stddev: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Stats {
        let count = values.len();
        if count == 0 {
            return Stats { count, mean: f64::NAN, median: f64::NAN, stddev: f64::NAN };
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if count % 2 == 1 { sorted[count / 2] } else { 0.5 * (sorted[count / 2 - 1] + sorted[count / 2]) };
        let stddev = if count > 1 { (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1) as f64).sqrt() } else { 0.0 };
        Stats { count, mean, median, stddev }
    }

    /// Median within three standard errors of the mean.
    pub fn concentrated(&self) -> bool {
        self.count > 1 && (self.median - self.mean).abs() <= 3.0 * self.stddev / (self.count as f64).sqrt()
    }
}

/// Aggregates of a width run and the checks against the dimension-free
/// width intervals `[d^{-3/2}/6, 4 d^{-3/2}]` (separable) and
/// `[d^{-1}/4, 2 d^{-1}]` (PPT).
#[derive(Debug, Clone)]
pub struct WidthSummary {
    pub d: usize,
    pub samples: usize,
    /// Samples whose PPT solve did not converge; excluded from `h_ppt`.
    pub excluded: usize,
    pub h_ppt: Stats,
    pub h_sep: Stats,
    pub opnorm: Stats,
    pub sep_interval: (f64, f64),
    pub ppt_interval: (f64, f64),
    /// Mean seesaw value below the separable upper end (one-sided, since the
    /// seesaw only bounds h_SEP from below).
    pub sep_within: bool,
    pub ppt_within: bool,
    /// At most 5% of samples excluded.
    pub exclusions_ok: bool,
}

/// Summary over a set of samples; order does not matter.
pub fn summarize(d: usize, samples: &[WidthSample]) -> WidthSummary {
    let mut ordered: Vec<&WidthSample> = samples.iter().collect();
    ordered.sort_by_key(|s| s.sample_id);
    let kept: Vec<&WidthSample> = ordered.iter().copied().filter(|s| s.h_ppt.converged).collect();
    let excluded = samples.len() - kept.len();
    let h_ppt = Stats::of(&kept.iter().map(|s| s.h_ppt.value).collect::<Vec<_>>());
    let h_sep = Stats::of(&kept.iter().map(|s| s.h_sep).collect::<Vec<_>>());
    let opnorm = Stats::of(&ordered.iter().map(|s| s.opnorm).collect::<Vec<_>>());
    let df = d as f64;
    let sep_interval = (df.powf(-1.5) / 6.0, 4.0 * df.powf(-1.5));
    let ppt_interval = (0.25 / df, 2.0 / df);
    WidthSummary {
        d,
        samples: samples.len(),
        excluded,
        sep_within: h_sep.mean <= sep_interval.1,
        ppt_within: h_ppt.mean >= ppt_interval.0 && h_ppt.mean <= ppt_interval.1,
        exclusions_ok: excluded * 20 <= samples.len(),
        h_ppt,
        h_sep,
        opnorm,
        sep_interval,
        ppt_interval,
    }
}
