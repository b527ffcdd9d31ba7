//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines print in order.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use radon_core::geometry::{fixtures, sample_subspace, PointConfig};
use radon_core::gfun::binomial;
use radon_core::montecarlo::{
    compare_samplers, estimate_partition_probability, estimate_reay_probability,
    estimate_tolerance_probability, sample_gaussian_points, Estimate, SimConfig,
};
use radon_core::numeric::ratio;
use radon_core::partition::{Partition, WeightTable};
use radon_core::volumes::{v0_exact, Method, VkRequest, VolumeEngine};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn reference_tables() -> Outcome {
    let start = Instant::now();
    let engine = VolumeEngine::default();
    let mut worst = (0.0f64, (0, 0, 0));
    let mut cells = 0;
    for (name, golden) in common::all_tables() {
        for (k, m, n, want) in golden.entries() {
            let got = engine.vk(VkRequest::new(k, m, n)).map_err(err)?;
            let rel = ((got - want) / want).abs();
            ensure(rel < 5e-4, || format!("{name}: v_{k}({m},{n}) = {got:.6e}, reference {want}"))?;
            if rel > worst.0 {
                worst = (rel, (k, m, n));
            }
            cells += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    let (k, m, n) = worst.1;
    Ok(format!(
        "{cells} cells, worst rel err {:.2e} at v_{k}({m},{n}), {secs:.2}s",
        worst.0
    ))
}

fn closed_form_spot_checks() -> Outcome {
    let engine = VolumeEngine::default();
    let pi = std::f64::consts::PI;
    let want = (5.0 / 8.0 - 15.0 / (4.0 * pi) * (1.0f64 / 3.0).asin()) * (0.5 + (0.2f64).asin() / pi);
    let got = engine.v(3, 1, 5).map_err(err)?;
    ensure((got - want).abs() < 1e-9, || format!("v_3(1,5) = {got}, closed form {want}"))?;
    ensure((want - 0.1237).abs() < 5e-5, || format!("closed form {want} is not 0.1237"))?;
    let got = engine.v(2, 2, 4).map_err(err)?;
    ensure((got - 1.0 / 3.0).abs() < 1e-9, || format!("v_2(2,4) = {got}"))?;
    for m in 1..=10 {
        for n in 1..=10 {
            let exact = v0_exact(m, n).map_err(err)?;
            let want = ratio(1, binomial(m + n, m).round() as i64);
            ensure(exact == want, || format!("v_0({m},{n}) = {exact}"))?;
            let float = engine.v(0, m, n).map_err(err)?;
            ensure(float == 1.0 / binomial(m + n, m), || format!("float v_0({m},{n}) = {float}"))?;
        }
    }
    Ok(format!("v_3(1,5) = {got:.6}; v_2(2,4) = 1/3; v_0 exact for m,n <= 10", got = want))
}

fn identity_suites() -> Outcome {
    let engine = VolumeEngine::default();
    let (mut gb_worst, mut sym_worst, mut shapes) = (0.0f64, 0.0f64, 0);
    for total in 2..=12 {
        for m in 1..total {
            let n = total - m;
            let gb = engine.check_gauss_bonnet(m, n, 1e-7).map_err(err)?;
            ensure(gb.passed(), || format!("Gauss-Bonnet fails at ({m},{n}): {:.2e}", gb.max_residual()))?;
            gb_worst = gb_worst.max(gb.max_residual());
            let sym = engine.check_symmetry(m, n, 1e-7).map_err(err)?;
            ensure(sym.passed(), || format!("symmetry fails at ({m},{n}): {:.2e}", sym.max_diff()))?;
            sym_worst = sym_worst.max(sym.max_diff());
            shapes += 1;
        }
    }
    Ok(format!(
        "{shapes} shapes, parity residual <= {gb_worst:.1e}, symmetry gap <= {sym_worst:.1e}"
    ))
}

fn engine_equivalence() -> Outcome {
    let engine = VolumeEngine::default();
    let mut worst = 0.0f64;
    let mut cells = 0;
    for (name, golden) in common::all_tables() {
        for (k, m, n, _) in golden.entries() {
            let specific = match golden.m {
                Some(1) => Method::M1,
                Some(2) => Method::M2,
                Some(3) => Method::M3,
                _ => Method::Kmax,
            };
            let a = engine.vk(VkRequest::new(k, m, n).method(specific)).map_err(err)?;
            let b = engine.vk(VkRequest::new(k, m, n).method(Method::General)).map_err(err)?;
            ensure((a - b).abs() < 1e-7, || format!("{name}: v_{k}({m},{n}) {specific} {a} vs general {b}"))?;
            worst = worst.max((a - b).abs());
            cells += 1;
        }
    }
    for m in 1..=4 {
        let closed = WeightTable::new(m).map_err(err)?;
        let brute = WeightTable::brute_force(m).map_err(err)?;
        ensure(closed == brute, || format!("weights differ at m = {m}"))?;
    }
    Ok(format!("{cells} cells, max gap {worst:.1e}; weights match brute force for m <= 4"))
}

fn four_sigma(e: &Estimate, value: f64) -> bool {
    (e.p_hat - value).abs() <= 4.0 * e.std_error()
}

fn dimension_one_law() -> Outcome {
    let engine = VolumeEngine::default();
    let mut worst = 0.0f64;
    for total in 2..=12 {
        for m in 1..total {
            let n = total - m;
            let got = engine.radon_probability(1, m, n, 1e-10).map_err(err)?;
            let want = 1.0 - 2.0 / binomial(total, m);
            ensure((got - want).abs() < 1e-9, || format!("P_1({m},{n}) = {got}, want {want}"))?;
            worst = worst.max((got - want).abs());
        }
    }
    let mut report = Vec::new();
    for (m, n) in [(1, 2), (2, 3), (3, 4)] {
        let e = estimate_partition_probability(1, m, n, SimConfig::new(100_000, 11)).map_err(err)?;
        let want = 1.0 - 2.0 / binomial(m + n, m);
        ensure(four_sigma(&e, want), || format!("MC ({m},{n}): {} vs {want}", e.p_hat))?;
        report.push(format!("({m},{n}) {:.4}", e.p_hat));
    }
    Ok(format!("analytic gap <= {worst:.1e}; MC 1e5: {}", report.join(", ")))
}

fn reay_reproduction() -> Outcome {
    const REFERENCE: f64 = 0.42714;
    const REFERENCE_HALF_WIDTH: f64 = 0.00016;
    let start = Instant::now();
    let e = estimate_reay_probability(6, 2, SimConfig::new(1_000_000, 1)).map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    let combined = (REFERENCE_HALF_WIDTH.powi(2) + e.ci_half_width.powi(2)).sqrt();
    let gap = (e.p_hat - REFERENCE).abs();
    ensure(gap <= combined, || {
        format!("p_hat {:.5} is {gap:.5} from {REFERENCE}, interval {combined:.5}", e.p_hat)
    })?;
    ensure(secs < 600.0, || format!("took {secs:.0}s single-threaded"))?;
    Ok(format!(
        "p_hat {:.5} (gap {gap:.5} <= {combined:.5}), 1e6 samples, 1 worker, {secs:.1}s",
        e.p_hat
    ))
}

fn polytope_fixtures() -> Outcome {
    let lat4 = fixtures::line(4).map_err(err)?.face_lattice().map_err(err)?;
    ensure(lat4.f_vector() == [8, 8], || format!("line 4 f-vector {:?}", lat4.f_vector()))?;
    let line5 = fixtures::line(5).map_err(err)?;
    let lat5 = line5.face_lattice().map_err(err)?;
    ensure(lat5.f_vector() == [20, 40, 22], || format!("line 5 f-vector {:?}", lat5.f_vector()))?;
    // every Radon partition is a face, graded by support size
    let mut brute = vec![0usize; 3];
    for code in 0..3u32.pow(5) {
        let (mut a, mut b, mut c) = (0u64, 0u64, code);
        for i in 0..5 {
            match c % 3 {
                1 => a |= 1 << i,
                2 => b |= 1 << i,
                _ => {}
            }
            c /= 3;
        }
        if a == 0 || b == 0 {
            continue;
        }
        let p = Partition::from_masks(5, a, b).map_err(err)?;
        if line5.is_radon(&p).map_err(err)? {
            brute[p.support_size() - 3] += 1;
        }
    }
    ensure(brute == [20, 40, 22], || format!("brute-force f-vector {brute:?}"))?;
    let verts = line5.minimal_partitions_exact().map_err(err)?;
    let coords = |label: &str| {
        verts
            .iter()
            .find(|(q, _)| q.label() == label)
            .map(|(_, v)| v.coords().to_vec())
    };
    let zero = ratio(0, 1);
    let want_143 = vec![ratio(1, 3), zero.clone(), ratio(-1, 1), ratio(2, 3), zero.clone()];
    let want_243 = vec![zero.clone(), ratio(1, 2), ratio(-1, 1), ratio(1, 2), zero];
    ensure(coords("14,3") == Some(want_143), || format!("14,3 at {:?}", coords("14,3")))?;
    ensure(coords("24,3") == Some(want_243), || format!("24,3 at {:?}", coords("24,3")))?;
    Ok("line 4: (8,8); line 5: (20,40,22) also by brute force; 14,3 and 24,3 exact".into())
}

fn tolerance_fixtures() -> Outcome {
    let hexagon = fixtures::circle(6).map_err(err)?;
    let target = Partition::new(6, &[1, 3, 5], &[2, 4, 6]).map_err(err)?;
    let tolerant = hexagon.tolerant_partitions().map_err(err)?;
    ensure(tolerant.contains(&target), || format!("hexagon tolerant set {tolerant:?}"))?;
    ensure(hexagon.is_tolerant(&target).map_err(err)?, || "hexagon LP check".into())?;
    let pentagon = fixtures::pentagon_with_center().map_err(err)?;
    let none = pentagon.tolerant_partitions().map_err(err)?;
    ensure(none.is_empty(), || format!("pentagon tolerant set {none:?}"))?;
    let mut checked = 0;
    let mut found = 0;
    for seed in 0..100 {
        let cfg = PointConfig::new(sample_gaussian_points(6, 2, 2024, seed)).map_err(err)?;
        let lattice = cfg.face_lattice().map_err(err)?;
        for code in 0..3u32.pow(6) {
            let (mut a, mut b, mut c) = (0u64, 0u64, code);
            for i in 0..6 {
                match c % 3 {
                    1 => a |= 1 << i,
                    2 => b |= 1 << i,
                    _ => {}
                }
                c /= 3;
            }
            if a == 0 || b == 0 || a | b != 0b111111 {
                continue;
            }
            let p = Partition::from_masks(6, a, b).map_err(err)?;
            let check = cfg.tolerance_check_with(Some(&lattice), &p).map_err(err)?;
            ensure(check.by_ridges == Some(check.by_subpartitions), || {
                format!("config {seed}, {}: methods disagree", p.label())
            })?;
            checked += 1;
            found += usize::from(check.by_subpartitions);
        }
    }
    Ok(format!(
        "hexagon 135,246 tolerant; pentagon+center none; {checked} checks agree ({found} tolerant)"
    ))
}

fn determinism() -> Outcome {
    let cfg = SimConfig::new(20_000, 77);
    let pairs: [(&str, Box<dyn Fn(SimConfig) -> radon_core::Result<Estimate>>); 3] = [
        ("radon", Box::new(|c| estimate_partition_probability(2, 2, 3, c))),
        ("reay", Box::new(|c| estimate_reay_probability(6, 2, c))),
        ("tolerance", Box::new(|c| estimate_tolerance_probability(6, 2, c))),
    ];
    for (name, run) in &pairs {
        let base = run(cfg).map_err(err)?;
        for workers in [1, 2, 4] {
            let again = run(cfg.workers(workers)).map_err(err)?;
            ensure(
                again.successes == base.successes && again.p_hat.to_bits() == base.p_hat.to_bits(),
                || format!("{name} differs at {workers} workers"),
            )?;
        }
    }
    let a = compare_samplers(6, 2, 500, 3).map_err(err)?;
    let b = compare_samplers(6, 2, 500, 3).map_err(err)?;
    ensure(a == b, || "sampler comparison differs between runs".into())?;
    let s = sample_subspace(7, 2, 9).map_err(err)?;
    let t = sample_subspace(7, 2, 9).map_err(err)?;
    ensure(s.points() == t.points(), || "subspace sampler differs between runs".into())?;
    Ok("estimates, sampler comparison and subspace draws are bit-identical at 1, 2 and 4 workers".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("reference tables", reference_tables),
        ("closed-form spot checks", closed_form_spot_checks),
        ("identity suites", identity_suites),
        ("engine equivalence", engine_equivalence),
        ("dimension-one exact law", dimension_one_law),
        ("Reay reproduction", reay_reproduction),
        ("polytope fixtures", polytope_fixtures),
        ("tolerance fixtures", tolerance_fixtures),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
