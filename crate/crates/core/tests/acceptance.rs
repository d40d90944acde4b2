// `!(a < b)` is used on purpose: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use mushy_core::direct::{build_solution, consistency_residuals};
use mushy_core::inverse::{
    convective, dirichlet, f2, f2_prime, f4, f6, f6_lower_limit, mushy_weight, stefan_target, SolveError,
};
use mushy_core::rootfind::{solve_increasing, MonotoneEquation};
use mushy_core::specfun::{erf, erf_inv};
use mushy_core::verify::{
    brute_bisect, condition_residuals, pde_convergence_order, reference_erf, GridSpec, CONVERGENCE_STEPS,
};
use mushy_core::{
    manufacture, BoundaryData, CaseResult, Coefficient, FaceCondition, ManufacturedScenario, Precision, RestrictionId,
};
use rand::Rng;

const N_SCENARIOS: usize = 500;
const SEED_CONV: u64 = 0x5eed_0001;
const SEED_DIR: u64 = 0x5eed_0002;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn solve(face: FaceCondition, case: Coefficient, s: &ManufacturedScenario) -> Result<CaseResult, SolveError> {
    let known = s.known_without(case);
    let prec = Precision::default();
    match face {
        FaceCondition::Convective => convective::solve(case, &known, &s.boundary, &prec),
        FaceCondition::Dirichlet => dirichlet::solve_dirichlet_case(case, &known, &s.boundary, &prec),
    }
}

/// Every solver on every scenario; the results feed criteria 1-4 and 8.
struct Sweep {
    face: FaceCondition,
    scenarios: Vec<ManufacturedScenario>,
    results: Vec<Vec<Result<CaseResult, SolveError>>>,
    seconds: f64,
}

fn sweep(face: FaceCondition, seed: u64) -> Sweep {
    let scenarios = common::scenarios(seed, N_SCENARIOS, face);
    let start = Instant::now();
    let results = scenarios
        .iter()
        .map(|s| Coefficient::ALL.iter().map(|&c| solve(face, c, s)).collect())
        .collect();
    Sweep {
        face,
        scenarios,
        results,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn round_trip(sw: &Sweep) -> Outcome {
    let mut worst_rel = 0.0_f64;
    let mut worst_xi = 0.0_f64;
    let mut failures = Vec::new();
    for (i, (s, row)) in sw.scenarios.iter().zip(&sw.results).enumerate() {
        for (case, r) in Coefficient::ALL.iter().zip(row) {
            match r {
                Ok(r) => {
                    let hidden = s.hidden_value(*case);
                    let rel = (r.value - hidden).abs() / hidden;
                    let dxi = (r.xi - s.xi).abs();
                    worst_rel = worst_rel.max(rel);
                    worst_xi = worst_xi.max(dxi);
                    if !(rel <= 1e-10 && dxi <= 1e-11) {
                        failures.push(format!("#{i} {case}: rel {rel:.2e}, dxi {dxi:.2e}"));
                    }
                }
                Err(e) => failures.push(format!("#{i} {case}: {e}")),
            }
        }
    }
    let solves = sw.scenarios.len() * 6;
    let pass = failures.is_empty() && sw.seconds <= 5.0;
    let mut detail = format!(
        "{} solves in {:.3} s, max rel err {:.2e}, max xi err {:.2e}",
        solves, sw.seconds, worst_rel, worst_xi
    );
    if !failures.is_empty() {
        detail += &format!("; {} failures, first: {}", failures.len(), failures[0]);
    }
    outcome(pass, detail)
}

fn consistency(sweeps: &[&Sweep]) -> Outcome {
    let (mut worst_s, mut worst_f, mut bad, mut n) = (0.0_f64, 0.0_f64, 0, 0);
    for sw in sweeps {
        for r in sw.results.iter().flatten().flatten() {
            let res = consistency_residuals(&r.thermal, &r.mushy, &r.boundary, r.xi, sw.face);
            worst_s = worst_s.max(res.res_stefan.abs() / res.stefan_scale.max(1.0));
            worst_f = worst_f.max(res.res_face.abs());
            n += 1;
            if !res.within(1e-11) {
                bad += 1;
            }
        }
    }
    outcome(
        bad == 0 && n > 0,
        format!(
            "{n} results, max |res_stefan|/max(1,rhs) {worst_s:.2e}, max |res_face| {worst_f:.2e}, {bad} above 1e-11"
        ),
    )
}

fn conditions(sweeps: &[&Sweep]) -> Outcome {
    let grid = GridSpec::default();
    let t_points = [0.25, 1.0, 4.0];
    let (mut worst, mut bad, mut n) = (0.0_f64, Vec::new(), 0);
    let (mut min_order, mut max_order) = (f64::INFINITY, f64::NEG_INFINITY);
    for sw in sweeps {
        for (i, (s, row)) in sw.scenarios.iter().zip(&sw.results).enumerate() {
            for r in row.iter().flatten() {
                let g = condition_residuals(&r.solution, &r.thermal, &r.mushy, &r.boundary, &t_points, sw.face)
                    .expect("valid grid");
                n += 1;
                for (id, v) in &g.condition_residuals {
                    worst = worst.max(*v);
                    if !(*v <= 1e-10) {
                        bad.push(format!("{} #{i} {}: {id} {v:.2e}", sw.face, r.case));
                    }
                }
            }
            // one FD order check per scenario: the solution does not depend on the case
            let sol = build_solution(&s.thermal, &s.mushy, &s.boundary, s.xi).expect("consistent data");
            match pde_convergence_order(&sol, &grid, &CONVERGENCE_STEPS) {
                Ok(order) => {
                    min_order = min_order.min(order);
                    max_order = max_order.max(order);
                    if (order - 2.0).abs() > 0.5 {
                        bad.push(format!("{} #{i}: PDE order {order:.3}", sw.face));
                    }
                }
                Err(e) => bad.push(format!("{} #{i}: {e}", sw.face)),
            }
        }
    }
    let mut detail = format!(
        "{n} results, max condition residual {worst:.2e}; PDE order in [{min_order:.3}, {max_order:.3}] over steps {:?}",
        CONVERGENCE_STEPS
    );
    if !bad.is_empty() {
        detail += &format!("; {} failures, first: {}", bad.len(), bad[0]);
    }
    outcome(bad.is_empty() && n > 0, detail)
}

struct LimitCase {
    case: Coefficient,
    slope: f64,
    rel_at_top: f64,
    excluded: Vec<f64>,
}

fn limit_cases(input: &mushy_core::ManufactureInput) -> Vec<Result<LimitCase, String>> {
    let grid: Vec<f64> = (1..=6).map(|p| 10f64.powi(p)).collect();
    let s = manufacture(input, FaceCondition::Dirichlet).expect("valid");
    Coefficient::ALL
        .iter()
        .map(|&case| {
            let study = dirichlet::limit_study(&s.known_without(case), &s.boundary, case, &grid, &Precision::default())
                .map_err(|e| format!("{case}: {e}"))?;
            let top = study.rows.last().filter(|r| r.h0 == 1e6);
            Ok(LimitCase {
                case,
                slope: study.fitted_slope.unwrap_or(f64::NAN),
                rel_at_top: top.map_or(f64::NAN, |r| {
                    (r.coefficient - study.coefficient_dirichlet).abs() / study.coefficient_dirichlet.abs()
                }),
                excluded: study.excluded.iter().map(|e| e.h0).collect(),
            })
        })
        .collect()
}

fn describe(r: &Result<LimitCase, String>) -> String {
    match r {
        Ok(c) => format!(
            "{} slope {:.4} rel {:.2e}{}",
            c.case,
            c.slope,
            c.rel_at_top,
            if c.excluded.is_empty() {
                String::new()
            } else {
                format!(" (excluded h0 {:?})", c.excluded)
            }
        ),
        Err(e) => e.clone(),
    }
}

/// Gated on the manufactured example (ξ = 0.5, unit k, ρ, c, q0, ε = 0.5,
/// γ = 0.1); the other fixed data sets are reported for information.
fn limit_theorem() -> (Outcome, Vec<String>) {
    let inputs = common::fixed_inputs();
    let gated = limit_cases(&inputs[0]);
    let ok = |r: &Result<LimitCase, String>| {
        r.as_ref()
            .is_ok_and(|c| (c.slope + 1.0).abs() <= 0.05 && c.rel_at_top <= 1e-5)
    };
    let pass = gated.iter().all(ok);
    let failing: Vec<_> = gated.iter().filter(|r| !ok(r)).map(describe).collect();
    let mut detail = format!(
        "xi=0.5 data: {}",
        gated.iter().map(describe).collect::<Vec<_>>().join(", ")
    );
    if !pass {
        detail += &format!("; outside slope -1+-0.05 or rel 1e-5: {}", failing.join(", "));
    }
    let info = inputs[1..]
        .iter()
        .map(|input| {
            format!(
                "xi={} data: {}",
                input.xi,
                limit_cases(input).iter().map(describe).collect::<Vec<_>>().join(", ")
            )
        })
        .collect();
    (outcome(pass, detail), info)
}

/// Builds a pair one relative 1e-6 inside and outside a restriction; the
/// inside scenario must solve, the outside one must fail on exactly `id`.
fn check_pair(
    id: RestrictionId,
    inside: Result<CaseResult, SolveError>,
    outside: Result<CaseResult, SolveError>,
) -> Result<(), String> {
    if let Err(e) = inside {
        return Err(format!("{id} inside failed: {e}"));
    }
    match outside {
        Ok(_) => Err(format!("{id} outside solved")),
        Err(e) => {
            let ids: Vec<_> = e.violated().iter().map(|r| r.id).collect();
            if ids == [id] {
                Ok(())
            } else {
                Err(format!("{id} outside gave {e}"))
            }
        }
    }
}

const DELTA: f64 = 1e-6;

fn straddles(input: &mushy_core::ManufactureInput) -> Vec<Result<(), String>> {
    use Coefficient::*;
    let prec = Precision::default();
    let conv = manufacture(input, FaceCondition::Convective).expect("valid");
    let dir = manufacture(input, FaceCondition::Dirichlet).expect("valid");
    let (k, rho, c, q0) = (input.k, input.rho, input.c, input.q0);
    let h0 = input.h0.expect("set");
    let (eps, gamma) = (input.epsilon, input.gamma);
    let eff = (k * rho * c).sqrt();
    let root_pi = std::f64::consts::PI.sqrt();
    let mut out = Vec::new();

    let conv_solve = |case: Coefficient, l: Option<f64>, d_inf: f64| {
        let mut known = conv.known_without(case);
        if let Some(l) = l {
            known = known.with(L, l);
        }
        convective::solve(case, &known, &BoundaryData::convective(q0, h0, d_inf), &prec)
    };
    let dir_solve = |case: Coefficient, l: Option<f64>, d_inf: f64| {
        let mut known = dir.known_without(case);
        if let Some(l) = l {
            known = known.with(L, l);
        }
        dirichlet::solve_dirichlet_case(case, &known, &BoundaryData::dirichlet(q0, d_inf), &prec)
    };
    // l giving a chosen Stefan target P = (q0/l)√(c/(ρk))
    let l_for = |p: f64| q0 / p * (c / (rho * k)).sqrt();

    // R1: q0 < h0·D∞
    let d = |a: f64| q0 / h0 * a;
    out.push(check_pair(
        RestrictionId::R1,
        conv_solve(L, None, d(1.0 + DELTA)),
        conv_solve(L, None, d(1.0 - DELTA)),
    ));

    // R2: (D∞ − q0/h0)√(kρc/π)/q0 < 1
    let d = |a: f64| q0 / h0 + a * q0 * root_pi / eff;
    out.push(check_pair(
        RestrictionId::R2,
        conv_solve(L, None, d(1.0 - DELTA)),
        conv_solve(L, None, d(1.0 + DELTA)),
    ));

    // R3: f2(ξ) < P, case 2
    let xi = conv.xi;
    out.push(check_pair(
        RestrictionId::R3,
        conv_solve(Gamma, Some(l_for(f2(xi) * (1.0 + DELTA))), conv.boundary.d_inf),
        conv_solve(Gamma, Some(l_for(f2(xi) * (1.0 - DELTA))), conv.boundary.d_inf),
    ));

    // R4: P < γ√(kρc)/(2q0)·e^{2ξ²} + f2(ξ), case 3
    let r4 = gamma * eff / (2.0 * q0) * (2.0 * xi * xi).exp() + f2(xi);
    out.push(check_pair(
        RestrictionId::R4,
        conv_solve(Epsilon, Some(l_for(r4 * (1.0 - DELTA))), conv.boundary.d_inf),
        conv_solve(Epsilon, Some(l_for(r4 * (1.0 + DELTA))), conv.boundary.d_inf),
    ));

    // R5: Φ < (2q0²/(ρlk) − γ(1−ε))/D∞, case 6
    let phi_d = conv.boundary.d_inf - q0 / h0;
    let l5 = |a: f64| 2.0 * q0 * q0 / (rho * k * (a * phi_d + gamma * (1.0 - eps)));
    out.push(check_pair(
        RestrictionId::R5,
        conv_solve(C, Some(l5(1.0 + DELTA)), conv.boundary.d_inf),
        conv_solve(C, Some(l5(1.0 - DELTA)), conv.boundary.d_inf),
    ));

    // R6: D∞√(kρc/π)/q0 < 1
    let d = |a: f64| a * q0 * root_pi / eff;
    out.push(check_pair(
        RestrictionId::R6,
        dir_solve(L, None, d(1.0 - DELTA)),
        dir_solve(L, None, d(1.0 + DELTA)),
    ));

    // R7: arg < erf(η7), f2(η7) = P, case 2
    let arg = erf(dir.xi);
    let l7 = |a: f64| l_for(f2(erf_inv(a * arg).expect("in range")));
    out.push(check_pair(
        RestrictionId::R7,
        dir_solve(Gamma, Some(l7(1.0 + DELTA)), dir.boundary.d_inf),
        dir_solve(Gamma, Some(l7(1.0 - DELTA)), dir.boundary.d_inf),
    ));

    // R8: erf(η8) < arg, f2(η8) + γ√(kρc)/(2q0)·e^{2η8²} = P, case 3
    let l8 = |a: f64| {
        let eta = erf_inv(a * arg).expect("in range");
        l_for(f2(eta) + gamma * eff / (2.0 * q0) * (2.0 * eta * eta).exp())
    };
    out.push(check_pair(
        RestrictionId::R8,
        dir_solve(Epsilon, Some(l8(1.0 - DELTA)), dir.boundary.d_inf),
        dir_solve(Epsilon, Some(l8(1.0 + DELTA)), dir.boundary.d_inf),
    ));

    // R9: ρlk(D∞ + γ(1−ε))/(2q0²) < 1, case 6
    let l9 = |a: f64| a * 2.0 * q0 * q0 / (rho * k * (dir.boundary.d_inf + gamma * (1.0 - eps)));
    out.push(check_pair(
        RestrictionId::R9,
        dir_solve(C, Some(l9(1.0 - DELTA)), dir.boundary.d_inf),
        dir_solve(C, Some(l9(1.0 + DELTA)), dir.boundary.d_inf),
    ));
    out
}

fn restriction_iff() -> Outcome {
    let inputs = common::fixed_inputs();
    let results: Vec<_> = inputs.iter().flat_map(straddles).collect();
    let failures: Vec<_> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let detail = if failures.is_empty() {
        format!(
            "R1-R9 straddled at relative {DELTA:e} on {} data sets ({} pairs)",
            inputs.len(),
            results.len()
        )
    } else {
        format!("{} of {} pairs wrong: {}", failures.len(), results.len(), failures[0])
    };
    outcome(failures.is_empty(), detail)
}

fn oracle_equivalence() -> Outcome {
    let mut rng = common::rng(7);
    let mut worst_erf = 0.0_f64;
    for _ in 0..1000 {
        let x: f64 = rng.random_range(-3.0..=3.0);
        let r = reference_erf(x).expect("in range");
        worst_erf = worst_erf.max((r - erf(x)).abs());
    }

    let prec = Precision::default();
    let mut worst_root = 0.0_f64;
    let mut count = 0;
    let mut failures = Vec::new();
    let mut compare = |label: &str, f: &dyn Fn(f64) -> (f64, f64), target: f64, lower: f64| {
        let eq = MonotoneEquation::new(f, target, lower);
        let fast = solve_increasing(&eq, &prec);
        let slow = brute_bisect(|x| f(x).0 - target, 0.0, 4.0);
        count += 1;
        match (fast, slow) {
            (Ok(a), Ok(b)) => {
                let d = (a - b).abs();
                worst_root = worst_root.max(d);
                if d > 1e-12 {
                    failures.push(format!("{label}: {a} vs {b}"));
                }
            }
            (a, b) => failures.push(format!("{label}: {a:?} / {b:?}")),
        }
    };
    let conv = common::scenarios(11, 200, FaceCondition::Convective);
    let dir = common::scenarios(12, 200, FaceCondition::Dirichlet);
    for s in &conv {
        let target = stefan_target(s.thermal.l, s.thermal.k, s.thermal.rho, s.thermal.c, s.boundary.q0);
        compare("f2", &|x| (f2(x), f2_prime(x)), target, 0.0);
    }
    for (label, set) in [("f", &conv), ("F", &dir)] {
        for s in set.iter() {
            let face = s.face;
            let phi = s.boundary.face_factor(face);
            let d = s.boundary.d_inf;
            let w = mushy_weight(s.mushy.epsilon, s.mushy.gamma, d, phi);
            let root_pi = std::f64::consts::PI.sqrt();
            let t4 = s.thermal.c * d * phi / (s.thermal.l * root_pi);
            compare(&format!("{label}4"), &|x| f4(w, x), t4, 0.0);
            let q0 = s.boundary.q0;
            let t6 = q0 * q0 * root_pi / (s.thermal.rho * s.thermal.l * s.thermal.k * d * phi);
            compare(&format!("{label}6"), &|x| f6(w, x), t6, f6_lower_limit(w));
        }
    }
    let mut detail = format!(
        "erf vs series on 1000 points: max {worst_erf:.2e}; {count} root instances (f2, f4, f6, F4, F6) vs bisection: max {worst_root:.2e}"
    );
    if !failures.is_empty() {
        detail += &format!("; {} failures, first: {}", failures.len(), failures[0]);
    }
    outcome(worst_erf <= 1e-14 && failures.is_empty(), detail)
}

fn monotonicity(sweeps: &[&Sweep]) -> Outcome {
    let mut failures = Vec::new();
    let grid: Vec<f64> = (1..=4000).map(|i| 4.0 * i as f64 / 4000.0).collect();
    let strictly = |name: &str, f: &dyn Fn(f64) -> f64, failures: &mut Vec<String>| {
        let mut prev = f(grid[0]);
        for &x in &grid[1..] {
            let v = f(x);
            if !(v > prev) {
                failures.push(format!("{name} not increasing at x = {x}"));
                return;
            }
            prev = v;
        }
    };
    strictly("f2", &f2, &mut failures);
    for sw in sweeps {
        let label = if sw.face == FaceCondition::Convective { "f" } else { "F" };
        for s in sw.scenarios.iter().step_by(25) {
            let w = mushy_weight(
                s.mushy.epsilon,
                s.mushy.gamma,
                s.boundary.d_inf,
                s.boundary.face_factor(s.face),
            );
            strictly(&format!("{label}4(w={w:.3e})"), &|x| f4(w, x).0, &mut failures);
            strictly(&format!("{label}6(w={w:.3e})"), &|x| f6(w, x).0, &mut failures);
        }
    }
    let mut prev = erf(-4.0);
    for i in 1..=8000 {
        let x = -4.0 + i as f64 * 1e-3;
        let v = erf(x);
        if !(v > prev) {
            failures.push(format!("erf not increasing at {x}"));
            break;
        }
        prev = v;
    }
    let mut solutions = 0;
    for sw in sweeps {
        for r in sw.results.iter().flatten().flatten() {
            solutions += 1;
            if !(r.solution.mu > r.solution.xi) {
                failures.push(format!("mu <= xi for {} {}", sw.face, r.case));
            }
        }
    }
    let mut detail = format!(
        "f2, f4/f6 ({} weights), F4/F6 ({} weights) on 4000 points of (0, 4]; erf on [-4, 4]; mu > xi on {solutions} solutions",
        sweeps[0].scenarios.len().div_ceil(25),
        sweeps[1].scenarios.len().div_ceil(25)
    );
    if !failures.is_empty() {
        detail += &format!("; {} failures, first: {}", failures.len(), failures[0]);
    }
    outcome(failures.is_empty(), detail)
}

fn main() -> ExitCode {
    let conv = sweep(FaceCondition::Convective, SEED_CONV);
    let dir = sweep(FaceCondition::Dirichlet, SEED_DIR);
    let both = [&conv, &dir];
    let (limit_out, limit_info) = limit_theorem();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 round-trip recovery, convective", round_trip(&conv)),
        ("2 round-trip recovery, Dirichlet", round_trip(&dir)),
        ("3 consistency-equation residuals", consistency(&both)),
        ("4 condition residuals and PDE order", conditions(&both)),
        ("5 limit h0 -> infinity", limit_out),
        ("6 restriction iff-ness", restriction_iff()),
        ("7 oracle equivalence", oracle_equivalence()),
        ("8 monotonicity", monotonicity(&both)),
    ];
    let mut all = true;
    println!();
    for (name, o) in &criteria {
        all &= o.pass;
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    for line in &limit_info {
        println!("INFO criterion 5, not gated: {line}");
    }
    println!();
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
