//! Acceptance checks for the numerical library. Prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pptgeo_core::bounds::{fvg_interval, ks_gap_lb, plan_for_epsilon};
use pptgeo_core::geometry::{closest_ppt_trace_ub, max_overlap_ppt, summarize, width_sample, GeometryConfig};
use pptgeo_core::norms::{fidelity, is_ppt, trace_distance, trace_norm};
use pptgeo_core::private::{construct_flower, exact_tensor_gap, tensor_power};
use pptgeo_core::random::{ginibre, random_schmidt};
use pptgeo_core::rng::sample_rng;
use pptgeo_core::squeeze::{random_ppt_state, squeeze_inequalities, squeeze_residuals};
use pptgeo_core::subsystem::{partial_transpose, realign};
use pptgeo_core::Capacity;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn construction() -> Check {
    for d_s in [2, 3, 4] {
        let f = construct_flower(d_s, Capacity::default()).map_err(e)?;
        let rho = f.rho.matrix();
        let tr = rho.trace().re;
        ensure((tr - 1.0).abs() <= 1e-10, || format!("d_s={d_s}: trace {tr}"))?;
        let min = pptgeo_core::norms::min_eigenvalue(f.rho.operator()).map_err(e)?;
        ensure(min >= -1e-10, || format!("d_s={d_s}: min eigenvalue {min:e}"))?;
        let dev = f.rho.partial_transpose().matrix().max_abs_diff(rho);
        ensure(dev <= 1e-10, || format!("d_s={d_s}: rho^G - rho = {dev:e}"))?;
        let dist = trace_distance(&f.rho, &f.gamma).map_err(e)?;
        let want = 2.0 / ((d_s as f64).sqrt() + 1.0);
        ensure((dist - want).abs() <= 1e-8, || format!("d_s={d_s}: distance {dist} vs {want}"))?;
    }
    Ok("d_s in {2,3,4}".into())
}

fn fidelity_identity() -> Check {
    for d_s in [2, 3, 4] {
        let f = construct_flower(d_s, Capacity::default()).map_err(e)?;
        let fid = fidelity(&f.rho, &f.gamma).map_err(e)?;
        let want = (1.0 - f.p).sqrt();
        ensure((fid - want).abs() <= 1e-8, || format!("d_s={d_s}: fidelity {fid} vs {want}"))?;
        let (lo, hi) = fvg_interval(fid.min(1.0)).map_err(e)?;
        let dist = trace_distance(&f.rho, &f.gamma).map_err(e)?;
        ensure(lo <= dist && dist <= hi, || format!("d_s={d_s}: {dist} outside [{lo}, {hi}]"))?;
    }
    Ok("d_s in {2,3,4}".into())
}

fn tensor_boost() -> Check {
    let f = construct_flower(2, Capacity::default()).map_err(e)?;
    let rho2 = tensor_power(&f.rho, 2, Capacity::default()).map_err(e)?;
    let gamma2 = tensor_power(&f.gamma, 2, Capacity::default()).map_err(e)?;
    let dist = trace_distance(&rho2, &gamma2).map_err(e)?;
    let want = exact_tensor_gap(f.p, 2);
    ensure((dist - want).abs() <= 1e-7, || format!("measured {dist} vs {want}"))?;
    ensure((dist - 1.3137085).abs() <= 1e-7, || format!("measured {dist} vs 1.3137085"))?;
    let ppt = is_ppt(&rho2, 1e-10).map_err(e)?;
    ensure(ppt.ppt, || format!("rho^(x)2 not PPT: {:e}", ppt.min_eigenvalue))?;
    Ok(format!("gap {dist:.10}, dim {}", rho2.dim()))
}

fn boost_scaling() -> Check {
    let mut worst: f64 = 0.0;
    for k in 0..=20 {
        let eps = (-(k as f64)).exp2();
        let plan = plan_for_epsilon(eps).map_err(e)?;
        ensure(plan.c_effective < 6.0, || format!("eps=2^-{k}: C = {}", plan.c_effective))?;
        worst = worst.max(plan.c_effective);
        if let Some(first) = plan.first_bound() {
            ensure(first >= 2.0 - eps, || format!("eps=2^-{k}: first bound {first} < {}", 2.0 - eps))?;
        }
    }
    Ok(format!("max C = {worst:.4}"))
}

fn overlap_closed_form() -> Check {
    let cfg = GeometryConfig::default();
    let mut worst: f64 = 0.0;
    for (d, count) in [(2usize, 50u64), (3, 20)] {
        for id in 0..count {
            let a = random_schmidt(d, &mut sample_rng(5, id));
            let r = max_overlap_ppt(&a, &cfg).map_err(e)?;
            let want = a[0] * a[0];
            let err = (r.value - want).abs();
            worst = worst.max(err);
            ensure(err <= 1e-4, || format!("d={d} sample {id}: {} vs {want}", r.value))?;
        }
    }
    let h = 0.5f64.sqrt();
    let bell = max_overlap_ppt(&[h, h], &cfg).map_err(e)?;
    ensure((bell.value - 0.5).abs() <= 1e-4, || format!("maximally entangled: {}", bell.value))?;
    Ok(format!("max error {worst:.2e}"))
}

fn squeeze_appendix() -> Check {
    let mut worst = f64::INFINITY;
    for d_s in [2, 3, 4] {
        let f = construct_flower(d_s, Capacity::default()).map_err(e)?;
        let r = squeeze_inequalities(&f.rho).map_err(e)?;
        worst = worst.min(r.primal).min(r.transposed);
        ensure(r.primal >= -1e-8 && r.transposed >= -1e-8, || format!("flower d_s={d_s}: {r:?}"))?;
    }
    for id in 0..100 {
        let s = random_ppt_state(2, &mut sample_rng(6, id)).map_err(e)?;
        let r = squeeze_inequalities(&s).map_err(e)?;
        worst = worst.min(r.primal).min(r.transposed);
        ensure(r.primal >= -1e-8 && r.transposed >= -1e-8, || format!("random state {id}: {r:?}"))?;
    }
    let control = construct_flower(2, Capacity::default()).map_err(e)?.gamma;
    let r = squeeze_residuals(&control).map_err(e)?;
    ensure(r.transposed < -1e-8, || format!("control does not violate: {r:?}"))?;
    Ok(format!("min residual {worst:.3e}, control {:.4}", r.transposed))
}

fn closest_bracket() -> Check {
    let cfg = GeometryConfig::default();
    let mut out = Vec::new();
    for d_s in [2u64, 3, 4] {
        let f = construct_flower(d_s as usize, Capacity::default()).map_err(e)?;
        let r = closest_ppt_trace_ub(&f.gamma, &cfg).map_err(e)?;
        let lo = ks_gap_lb(d_s).map_err(e)?;
        let hi = 2.0 / ((d_s as f64).sqrt() + 1.0);
        ensure(r.value >= lo - 1e-6 && r.value <= hi + 1e-6, || format!("d_s={d_s}: {} outside [{lo}, {hi}]", r.value))?;
        out.push(format!("{:.6}", r.value));
    }
    Ok(format!("upper bounds {}", out.join(", ")))
}

fn lemma_suite() -> Check {
    let mut checked = 0;
    for d in [2usize, 3, 4] {
        let n = d * d;
        let df = d as f64;
        for id in 0..10_000u64 {
            let a = ginibre(n, n, &mut sample_rng(d as u64, id));
            let t1 = trace_norm(&a).map_err(e)?;
            let pt = partial_transpose(&a, &[d, d], &[1]).map_err(e)?;
            let re = realign(&a).map_err(e)?;
            let g1 = trace_norm(&pt).map_err(e)?;
            let r1 = trace_norm(&re).map_err(e)?;
            let slack = 1e-10 * t1.max(g1).max(r1);
            ensure(t1 <= df * g1 + slack && g1 <= df * t1 + slack, || format!("d={d} sample {id}: partial transpose {t1} vs {g1}"))?;
            ensure(t1 <= df * r1 + slack && r1 <= df * t1 + slack, || format!("d={d} sample {id}: realignment {t1} vs {r1}"))?;
            let f = a.frobenius_norm();
            ensure((pt.frobenius_norm() - f).abs() <= 1e-12 * f && (re.frobenius_norm() - f).abs() <= 1e-12 * f, || format!("d={d} sample {id}: Frobenius norm not preserved"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} matrices, 0 violations"))
}

fn geometry() -> Check {
    let cfg = GeometryConfig::default();
    let samples: Vec<_> = (0..500).map(|id| width_sample(2, id, 9, &cfg, false)).collect::<Result<_, _>>().map_err(e)?;
    for s in samples.iter().filter(|s| s.h_ppt.converged) {
        let (sep, ppt, top) = (s.h_sep, s.h_ppt.value, s.h_states);
        ensure(sep <= ppt + 1e-6 && ppt <= top + 1e-6, || format!("sample {}: {sep} / {ppt} / {top}", s.sample_id))?;
    }
    let summary = summarize(2, &samples);
    ensure(summary.exclusions_ok, || format!("{} of 500 solves did not converge", summary.excluded))?;
    ensure(summary.ppt_within, || format!("mean h_ppt {} outside {:?}", summary.h_ppt.mean, summary.ppt_interval))?;
    ensure(summary.sep_within, || format!("mean h_sep {} above {}", summary.h_sep.mean, summary.sep_interval.1))?;
    let opnorms: Vec<f64> = (0..2000).map(|id| width_sample(4, id, 9, &cfg, true).map(|s| s.opnorm)).collect::<Result<_, _>>().map_err(e)?;
    let mean = opnorms.iter().sum::<f64>() / opnorms.len() as f64;
    ensure((0.38..=0.62).contains(&mean), || format!("mean opnorm at n=16 is {mean}"))?;
    Ok(format!(
        "mean h_ppt {:.4}, mean h_sep {:.4}, excluded {}, mean opnorm(n=16) {mean:.4}",
        summary.h_ppt.mean, summary.h_sep.mean, summary.excluded
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("construction correctness", construction, Duration::from_secs(5)),
        ("fidelity identity", fidelity_identity, Duration::from_secs(5)),
        ("tensor boost exactness", tensor_boost, Duration::from_secs(60)),
        ("boost plan scaling", boost_scaling, Duration::from_secs(1)),
        ("PPT overlap vs closed form", overlap_closed_form, Duration::from_secs(600)),
        ("squeeze inequalities", squeeze_appendix, Duration::from_secs(120)),
        ("closest PPT bracket", closest_bracket, Duration::from_secs(300)),
        ("norm lemma and realignment", lemma_suite, Duration::from_secs(120)),
        ("geometry nesting and widths", geometry, Duration::from_secs(1800)),
    ];
    let mut failed = 0;
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let over = elapsed > *budget;
        match result {
            Ok(detail) if !over => println!("PASS {}. {name}: {detail} ({:.2}s)", k + 1, elapsed.as_secs_f64()),
            Ok(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}; took {:.2}s, budget {}s", k + 1, elapsed.as_secs_f64(), budget.as_secs());
            }
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why} ({:.2}s)", k + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
