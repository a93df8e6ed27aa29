//! The experiment registry. Each experiment computes one document (a table
//! or a JSON report), a summary, convergence counts and invariant checks.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use pptgeo_core::bounds::{bound_grid, boost_bounds, fvg_interval, ks_gap_lb, plan_for_epsilon};
use pptgeo_core::geometry::{closest_ppt_trace_ub, max_overlap_ppt, sample_direction, summarize, width_sample, Stats, WidthSummary};
use pptgeo_core::norms::{fidelity, is_ppt, min_eigenvalue, trace_distance};
use pptgeo_core::private::{construct_flower, exact_tensor_gap, tensor_power, FlowerState};
use pptgeo_core::random::random_schmidt;
use pptgeo_core::rng::sample_rng;
use pptgeo_core::squeeze::{gap_verify, privacy_squeeze, random_ppt_state, squeeze_residuals};
use pptgeo_core::FactoredState;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{config, Result};
use crate::manifest::{Convergence, Invariant};
use crate::state_io::{complex_json, read_state, state_json};
use crate::table::{format_real, Cell, Table};

/// Entrywise tolerance for trace, positivity and `rho^G = rho` of constructions.
pub const CONSTRUCTION_TOL: f64 = 1e-10;
/// Agreement of measured distances and fidelities with closed forms.
pub const CLOSED_FORM_TOL: f64 = 1e-8;
/// Agreement of the dense tensor-power gap with its closed form.
pub const BOOST_TOL: f64 = 1e-7;
/// Smallest accepted squeeze residual on PPT input.
pub const SQUEEZE_TOL: f64 = 1e-8;
/// Slack on the closest-PPT bracket.
pub const BRACKET_SLACK: f64 = 1e-6;
/// Slack on `h_sep <= h_ppt <= lambda_max`.
pub const NESTING_TOL: f64 = 1e-6;
/// Largest tolerated fraction of non-converged solves.
pub const MAX_FAILURE_RATE: f64 = 0.05;

pub const DEFAULT_D_S: usize = 2;
pub const DEFAULT_L: u32 = 2;
pub const DEFAULT_WIDTH_D: usize = 2;
pub const DEFAULT_WIDTH_SAMPLES: usize = 100;
pub const DEFAULT_WIGNER_N: usize = 16;
pub const DEFAULT_WIGNER_SAMPLES: usize = 2000;
pub const DEFAULT_SCHMIDT_D: usize = 2;
pub const DEFAULT_SCHMIDT_SAMPLES: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Table(Table),
    Json(Value),
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: Document,
    pub summary: Value,
    pub invariants: Vec<Invariant>,
    pub convergence: BTreeMap<String, Convergence>,
    /// Tolerances and thresholds actually used.
    pub tolerances: Map<String, Value>,
}

impl Outcome {
    fn new(document: Document, cfg: &ExperimentConfig) -> Self {
        let mut tolerances = Map::new();
        tolerances.insert("tol_eig".into(), json!(cfg.tol_eig));
        tolerances.insert("tol_feas".into(), json!(cfg.tol_feas));
        Outcome { document, summary: Value::Null, invariants: Vec::new(), convergence: BTreeMap::new(), tolerances }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.invariants.push(Invariant::new(name, passed, detail));
    }

    fn tolerance(&mut self, name: &str, value: impl Into<Value>) {
        self.tolerances.insert(name.into(), value.into());
    }

    fn geometry_tolerances(&mut self, cfg: &ExperimentConfig, n: usize) {
        let g = cfg.geometry(n);
        self.tolerance("solver_tol", g.tol_value);
        self.tolerance("solver_residual_tol", g.solver_tol);
        self.tolerance("solver_max_iter", g.max_iter);
        self.tolerance("solver_restarts", g.restarts);
        self.tolerance("seesaw_restarts", g.seesaw_restarts);
        self.tolerance("seesaw_sweeps", g.seesaw_sweeps);
    }
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome> {
    match cfg.experiment {
        Experiment::Construct => construct(cfg),
        Experiment::Bounds => bounds(cfg),
        Experiment::Boost => boost(cfg),
        Experiment::Widths => widths(cfg),
        Experiment::Wigner => wigner(cfg),
        Experiment::Squeeze => squeeze(cfg),
        Experiment::Gap => gap(cfg),
        Experiment::FidelityPpt => fidelity_ppt(cfg),
    }
}

fn flower(cfg: &ExperimentConfig) -> Result<FlowerState> {
    Ok(construct_flower(cfg.d_s.unwrap_or(DEFAULT_D_S), cfg.capacity)?)
}

fn closed_form_distance(d_s: usize) -> f64 {
    2.0 / ((d_s as f64).sqrt() + 1.0)
}

fn construct(cfg: &ExperimentConfig) -> Result<Outcome> {
    let f = flower(cfg)?;
    let rho = &f.rho;
    let ppt = is_ppt(rho, cfg.tol_eig)?;
    let trace = rho.matrix().trace().re;
    let min_eig = min_eigenvalue(rho.operator())?;
    let pt_dev = rho.partial_transpose().matrix().max_abs_diff(rho.matrix());
    let dist = trace_distance(rho, &f.gamma)?;
    let want_dist = closed_form_distance(f.d_s);
    let fid = fidelity(rho, &f.gamma)?;
    let want_fid = (1.0 - f.p).sqrt();
    let (lo, hi) = fvg_interval(fid.min(1.0))?;
    let doc = json!({
        "d_s": f.d_s,
        "p": f.p,
        "is_ppt": ppt.ppt,
        "ppt_min_eigenvalue": ppt.min_eigenvalue,
        "trace": trace,
        "min_eigenvalue": min_eig,
        "pt_deviation": pt_dev,
        "trace_distance": dist,
        "closed_form_distance": want_dist,
        "fidelity": fid,
        "closed_form_fidelity": want_fid,
        "fvg_interval": [lo, hi],
        "state": state_json(rho),
    });
    let mut out = Outcome::new(Document::Json(doc), cfg);
    out.tolerance("construction_tol", CONSTRUCTION_TOL);
    out.tolerance("closed_form_tol", CLOSED_FORM_TOL);
    out.check("unit_trace", (trace - 1.0).abs() <= CONSTRUCTION_TOL, format!("trace {}", format_real(trace)));
    out.check("positive", min_eig >= -CONSTRUCTION_TOL, format!("min eigenvalue {}", format_real(min_eig)));
    out.check("pt_invariant", pt_dev <= CONSTRUCTION_TOL, format!("max |rho^G - rho| {}", format_real(pt_dev)));
    out.check("is_ppt", ppt.ppt, format!("min eigenvalue of rho^G {}", format_real(ppt.min_eigenvalue)));
    out.check("distance_closed_form", (dist - want_dist).abs() <= CLOSED_FORM_TOL, format!("{} vs {}", format_real(dist), format_real(want_dist)));
    out.check("fidelity_closed_form", (fid - want_fid).abs() <= CLOSED_FORM_TOL, format!("{} vs {}", format_real(fid), format_real(want_fid)));
    out.check("fvg_contains_distance", lo <= dist && dist <= hi, format!("{} in [{}, {}]", format_real(dist), format_real(lo), format_real(hi)));
    out.summary = json!({"d_s": f.d_s, "trace_distance": dist, "fidelity": fid});
    Ok(out)
}

fn bounds(cfg: &ExperimentConfig) -> Result<Outcome> {
    if let Some(eps) = cfg.epsilon {
        let plan = plan_for_epsilon(eps)?;
        let first = plan.first_bound();
        let doc = json!({
            "epsilon": plan.epsilon,
            "l": plan.l,
            "d_s": plan.d_s.to_string(),
            "d": plan.d.to_string(),
            "log2_d": plan.log2_d,
            "c_effective": plan.c_effective,
            "first_bound": first,
        });
        let mut out = Outcome::new(Document::Json(doc.clone()), cfg);
        out.check("c_effective_below_6", plan.c_effective < 6.0, format!("C = {}", format_real(plan.c_effective)));
        if let Some(first) = first {
            out.check("first_bound_reaches_target", first >= 2.0 - eps, format!("{} >= {}", format_real(first), format_real(2.0 - eps)));
        }
        out.summary = doc;
        return Ok(out);
    }
    let grid = cfg.grid.unwrap_or_default();
    let rows = bound_grid(grid.l, grid.d_s)?;
    let mut table = Table::new(&["l", "d_s", "p", "first", "second", "exact", "dominant"]);
    let mut worst = f64::INFINITY;
    for b in &rows {
        worst = worst.min(b.exact - b.first.max(b.second));
        table.push(vec![b.l.into(), b.d_s.into(), b.p.into(), b.first.into(), b.second.into(), b.exact.into(), b.dominant.as_str().into()]);
    }
    let mut out = Outcome::new(Document::Table(table), cfg);
    out.check("exact_dominates", worst >= -1e-12, format!("min exact - max(first, second) = {}", format_real(worst)));
    out.summary = json!({"rows": rows.len(), "l": [grid.l.0, grid.l.1], "d_s": [grid.d_s.0, grid.d_s.1]});
    Ok(out)
}

fn boost(cfg: &ExperimentConfig) -> Result<Outcome> {
    let l = cfg.l.unwrap_or(DEFAULT_L);
    let f = flower(cfg)?;
    let b = boost_bounds(l, f.d_s as u64)?;
    let rho_l = tensor_power(&f.rho, l as usize, cfg.capacity)?;
    let gamma_l = tensor_power(&f.gamma, l as usize, cfg.capacity)?;
    let measured = trace_distance(&rho_l, &gamma_l)?;
    let exact_gap = exact_tensor_gap(f.p, l);
    let ppt = is_ppt(&rho_l, cfg.tol_eig)?;
    let mut table = Table::new(&["l", "d_s", "p", "first", "second", "exact", "exact_gap", "measured_gap", "is_ppt"]);
    table.push(vec![l.into(), f.d_s.into(), f.p.into(), b.first.into(), b.second.into(), b.exact.into(), exact_gap.into(), measured.into(), ppt.ppt.into()]);
    let mut out = Outcome::new(Document::Table(table), cfg);
    out.tolerance("boost_tol", BOOST_TOL);
    out.check("measured_gap_closed_form", (measured - exact_gap).abs() <= BOOST_TOL, format!("{} vs {}", format_real(measured), format_real(exact_gap)));
    out.check("power_is_ppt", ppt.ppt, format!("min eigenvalue of the partial transpose {}", format_real(ppt.min_eigenvalue)));
    out.summary = json!({"l": l, "d_s": f.d_s, "dimension": rho_l.dim(), "measured_gap": measured});
    Ok(out)
}

fn stats_json(s: &Stats) -> Value {
    json!({"count": s.count, "mean": s.mean, "median": s.median, "stddev": s.stddev, "concentrated": s.concentrated()})
}

fn width_summary_json(s: &WidthSummary) -> Value {
    json!({
        "d": s.d,
        "samples": s.samples,
        "excluded": s.excluded,
        "h_ppt": stats_json(&s.h_ppt),
        "h_sep": stats_json(&s.h_sep),
        "opnorm": stats_json(&s.opnorm),
        "sep_interval": [s.sep_interval.0, s.sep_interval.1],
        "ppt_interval": [s.ppt_interval.0, s.ppt_interval.1],
    })
}

fn widths(cfg: &ExperimentConfig) -> Result<Outcome> {
    let d = cfg.d.unwrap_or(DEFAULT_WIDTH_D);
    let n = d * d;
    cfg.capacity.check(n)?;
    let samples = cfg.samples.unwrap_or(DEFAULT_WIDTH_SAMPLES) as u64;
    let geo = cfg.geometry(n);
    let results = (0..samples).into_par_iter().map(|id| width_sample(d, id, cfg.seed, &geo, false)).collect::<std::result::Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["d", "sample_id", "seed", "h_ppt", "h_ppt_upper", "h_ppt_residual", "h_ppt_converged", "h_sep", "h_states", "opnorm"]);
    let mut worst_nesting = f64::NEG_INFINITY;
    for s in &results {
        let r = &s.h_ppt;
        table.push(vec![
            d.into(),
            s.sample_id.into(),
            s.seed.into(),
            r.value.into(),
            r.upper_bound.unwrap_or(f64::NAN).into(),
            r.feasibility_residual.into(),
            r.converged.into(),
            s.h_sep.into(),
            s.h_states.into(),
            s.opnorm.into(),
        ]);
        if r.converged {
            worst_nesting = worst_nesting.max(s.h_sep - r.value).max(r.value - s.h_states);
        }
    }
    let summary = summarize(d, &results);
    let conv = Convergence::count(results.iter().map(|s| s.h_ppt.converged));
    let mut out = Outcome::new(Document::Table(table), cfg);
    out.geometry_tolerances(cfg, n);
    out.tolerance("nesting_tol", NESTING_TOL);
    out.tolerance("max_failure_rate", MAX_FAILURE_RATE);
    out.convergence.insert("h_ppt".into(), conv);
    out.check("nesting", worst_nesting <= NESTING_TOL, format!("largest violation {}", format_real(worst_nesting)));
    out.check("solver_failure_rate", conv.failure_rate() <= MAX_FAILURE_RATE, format!("{} of {} converged", conv.converged, conv.total));
    out.check(
        "ppt_width_interval",
        summary.ppt_within,
        format!("mean {} in [{}, {}]", format_real(summary.h_ppt.mean), format_real(summary.ppt_interval.0), format_real(summary.ppt_interval.1)),
    );
    out.check("sep_width_upper", summary.sep_within, format!("mean {} <= {}", format_real(summary.h_sep.mean), format_real(summary.sep_interval.1)));
    out.summary = width_summary_json(&summary);
    Ok(out)
}

/// Window around the `2 n^{-1/2}` asymptote accepted for the mean operator norm.
pub const WIGNER_WINDOW: (f64, f64) = (0.76, 1.24);
/// The window is only asserted from this dimension on.
pub const WIGNER_MIN_N: usize = 16;

fn wigner(cfg: &ExperimentConfig) -> Result<Outcome> {
    let n = cfg.n.unwrap_or(DEFAULT_WIGNER_N);
    cfg.capacity.check(n)?;
    let samples = cfg.samples.unwrap_or(DEFAULT_WIGNER_SAMPLES) as u64;
    let opnorms = (0..samples)
        .into_par_iter()
        .map(|id| sample_direction(n, &mut sample_rng(cfg.seed, id)).and_then(|u| u.opnorm()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let asymptote = 2.0 / (n as f64).sqrt();
    let mut table = Table::new(&["n", "sample_id", "seed", "opnorm", "scaled"]);
    for (id, &v) in opnorms.iter().enumerate() {
        table.push(vec![n.into(), id.into(), cfg.seed.into(), v.into(), (v / asymptote).into()]);
    }
    let stats = Stats::of(&opnorms);
    let lo = 1.0 / (n as f64).sqrt();
    let in_range = opnorms.iter().all(|&v| v >= lo - 1e-12 && v <= 1.0 + 1e-12);
    let mut out = Outcome::new(Document::Table(table), cfg);
    out.check("opnorm_range", in_range, format!("every value in [n^-1/2, 1] = [{}, 1]", format_real(lo)));
    let window = (WIGNER_WINDOW.0 * asymptote, WIGNER_WINDOW.1 * asymptote);
    if n >= WIGNER_MIN_N {
        out.tolerance("wigner_window", json!([window.0, window.1]));
        out.check(
            "mean_near_asymptote",
            stats.mean >= window.0 && stats.mean <= window.1,
            format!("mean {} in [{}, {}]", format_real(stats.mean), format_real(window.0), format_real(window.1)),
        );
    }
    out.summary = json!({"n": n, "asymptote": asymptote, "opnorm": stats_json(&stats), "window": [window.0, window.1]});
    Ok(out)
}

fn matrix4_json(m: &[[f64; 4]; 4]) -> Value {
    json!(m.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

fn squeeze(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (state, source): (FactoredState, String) = match &cfg.input {
        Some(path) => (read_state(path, cfg.capacity)?, path.display().to_string()),
        None => {
            let f = flower(cfg)?;
            (f.rho, format!("flower d_s={}", f.d_s))
        }
    };
    let ppt = is_ppt(&state, cfg.tol_eig)?;
    let sq = privacy_squeeze(&state)?;
    let res = squeeze_residuals(&state)?;
    let squeezed: Vec<Value> = (0..4).map(|r| Value::Array((0..4).map(|c| complex_json(sq.state[(r, c)])).collect())).collect();
    let mut mismatch: f64 = 0.0;
    for (a, b) in [(0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (3, 0), (1, 2), (2, 1)] {
        mismatch = mismatch.max((sq.state[(a, b)] - sq.norm_form[a][b]).norm());
    }
    let doc = json!({
        "source": source,
        "is_ppt": ppt.ppt,
        "ppt_min_eigenvalue": ppt.min_eigenvalue,
        "squeezed": squeezed,
        "norm_form": matrix4_json(&sq.norm_form),
        "residuals": {"primal": res.primal, "transposed": res.transposed},
        "norm_form_mismatch": mismatch,
    });
    let mut out = Outcome::new(Document::Json(doc), cfg);
    out.tolerance("squeeze_tol", SQUEEZE_TOL);
    out.check("norm_form_entries", mismatch <= 1e-9, format!("largest mismatch {}", format_real(mismatch)));
    if ppt.ppt {
        out.check("primal_inequality", res.primal >= -SQUEEZE_TOL, format!("residual {}", format_real(res.primal)));
        out.check("transposed_inequality", res.transposed >= -SQUEEZE_TOL, format!("residual {}", format_real(res.transposed)));
    }
    out.summary = json!({"is_ppt": ppt.ppt, "primal": res.primal, "transposed": res.transposed});
    Ok(out)
}

fn gap(cfg: &ExperimentConfig) -> Result<Outcome> {
    let f = flower(cfg)?;
    let lb = ks_gap_lb(f.d_s as u64)?;
    let ub = closed_form_distance(f.d_s);
    let mut table = Table::new(&["source", "sample_id", "distance", "lower_bound", "satisfied"]);
    let flower_check = gap_verify(&f.rho, &f.gamma)?;
    table.push(vec!["flower".into(), 0u64.into(), flower_check.distance.into(), flower_check.lower_bound.into(), flower_check.satisfied.into()]);

    let geo = cfg.geometry(f.gamma.dim());
    let closest = closest_ppt_trace_ub(&f.gamma, &geo)?;
    let bracketed = closest.value >= lb - BRACKET_SLACK && closest.value <= ub + BRACKET_SLACK;
    table.push(vec!["closest_ppt".into(), 0u64.into(), closest.value.into(), lb.into(), bracketed.into()]);

    let random = (0..cfg.random as u64)
        .into_par_iter()
        .map(|id| random_ppt_state(f.d_s, &mut sample_rng(cfg.seed, id)).and_then(|s| gap_verify(&s, &f.gamma)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    for (id, g) in random.iter().enumerate() {
        table.push(vec!["random".into(), id.into(), g.distance.into(), g.lower_bound.into(), g.satisfied.into()]);
    }
    let unsatisfied = table.rows().iter().filter(|r| r[4] == Cell::Bool(false)).count();
    let mut out = Outcome::new(Document::Table(table), cfg);
    out.geometry_tolerances(cfg, f.gamma.dim());
    out.tolerance("bracket_slack", BRACKET_SLACK);
    out.convergence.insert("closest_ppt".into(), Convergence::count([closest.converged]));
    out.check(
        "closest_ppt_bracket",
        bracketed,
        format!("{} in [{}, {}]", format_real(closest.value), format_real(lb), format_real(ub)),
    );
    out.check("all_rows_satisfied", unsatisfied == 0, format!("{unsatisfied} rows below the lower bound"));
    out.summary = json!({
        "d_s": f.d_s,
        "lower_bound": lb,
        "flower_distance": flower_check.distance,
        "closest_ppt_upper": closest.value,
        "closest_ppt_projection": closest.projection_distance,
        "random_states": random.len(),
        "min_random_distance": random.iter().map(|g| g.distance).fold(f64::INFINITY, f64::min),
    });
    Ok(out)
}

fn fidelity_ppt(cfg: &ExperimentConfig) -> Result<Outcome> {
    let vectors: Vec<Vec<f64>> = match &cfg.schmidt {
        Some(v) => vec![v.clone()],
        None => {
            let d = cfg.d.unwrap_or(DEFAULT_SCHMIDT_D);
            if !(2..=4).contains(&d) {
                return Err(config(format!("fidelity-ppt needs d between 2 and 4, got {d}")));
            }
            let count = cfg.samples.unwrap_or(DEFAULT_SCHMIDT_SAMPLES) as u64;
            (0..count).map(|id| random_schmidt(d, &mut sample_rng(cfg.seed, id))).collect()
        }
    };
    let n = vectors.iter().map(|v| v.len() * v.len()).max().unwrap_or(4);
    let geo = cfg.geometry(n);
    let reports = vectors.par_iter().map(|a| max_overlap_ppt(a, &geo)).collect::<std::result::Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["sample_id", "schmidt", "closed_form", "overlap", "upper_bound", "converged", "error"]);
    let mut worst: f64 = 0.0;
    for (id, (a, r)) in vectors.iter().zip(&reports).enumerate() {
        let best = a.iter().copied().fold(0.0, f64::max);
        let closed = best * best;
        let err = (r.value - closed).abs();
        worst = worst.max(err);
        let text = a.iter().map(|&x| format_real(x)).collect::<Vec<_>>().join(";");
        table.push(vec![id.into(), text.into(), closed.into(), r.value.into(), r.upper_bound.unwrap_or(f64::NAN).into(), r.converged.into(), err.into()]);
    }
    let conv = Convergence::count(reports.iter().map(|r| r.converged));
    let mut out = Outcome::new(Document::Table(table), cfg);
    out.geometry_tolerances(cfg, n);
    out.convergence.insert("max_overlap_ppt".into(), conv);
    out.check("closed_form", worst <= geo.tol_value, format!("largest error {} (tolerance {})", format_real(worst), format_real(geo.tol_value)));
    out.check("solver_failure_rate", conv.failure_rate() <= MAX_FAILURE_RATE, format!("{} of {} converged", conv.converged, conv.total));
    out.summary = json!({"vectors": vectors.len(), "max_error": worst});
    Ok(out)
}
