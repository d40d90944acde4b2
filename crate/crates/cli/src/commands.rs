use std::path::{Path, PathBuf};

use mushy_core::direct::{build_solution, consistency_residuals, front_r, front_s, solve_stefan_xi, temperature};
use mushy_core::inverse::{convective, dirichlet};
use mushy_core::verify::{full_check, GridSpec};
use mushy_core::{
    manufacture, validate, BoundaryData, CaseResult, CoefficientSet, ConsistencyResiduals, FaceCondition,
    ManufactureInput, MushyCoefficients, Precision, RestrictionReport, SimilaritySolution, SolveError,
    ThermalCoefficients,
};
use serde_json::{json, Value};

use crate::args::{Common, LimitArgs, ManufactureArgs, ProfileArgs, ScenarioArgs, VerifyArgs};
use crate::error::CliError;
use crate::output::{csv, emit, json, num};
use crate::scenario::{CaseSpec, Format, Scenario};

const DIRECT_CONSISTENCY_TOL: f64 = 1e-11;

/// Scenario with command-line overrides applied.
pub fn load(path: &Path, common: &Common) -> Result<Scenario, CliError> {
    let mut sc = Scenario::load(path)?;
    if let Some(p) = common.problem {
        sc.problem = p;
    }
    if let Some(c) = common.case {
        sc.case = c;
        if let CaseSpec::Unknown(slot) = c {
            sc.coefficients = sc.coefficients.without(slot);
        }
    }
    Ok(sc)
}

fn format(sc: &Scenario, common: &Common, default: Format) -> Format {
    common.format.or(sc.options.format).unwrap_or(default)
}

/// Everything known once the scenario has been solved either way.
pub struct Solved {
    pub face: FaceCondition,
    pub case: CaseSpec,
    pub value: Option<f64>,
    pub xi: f64,
    pub thermal: ThermalCoefficients,
    pub mushy: MushyCoefficients,
    pub boundary: BoundaryData,
    pub solution: SimilaritySolution,
    pub reports: Vec<RestrictionReport>,
    pub warnings: Vec<String>,
    /// Direct mode only: how well the face condition is met.
    pub residuals: Option<ConsistencyResiduals>,
}

impl From<CaseResult> for Solved {
    fn from(r: CaseResult) -> Self {
        Solved {
            face: r.face,
            case: CaseSpec::Unknown(r.case),
            value: Some(r.value),
            xi: r.xi,
            thermal: r.thermal,
            mushy: r.mushy,
            boundary: r.boundary,
            solution: r.solution,
            reports: r.reports,
            warnings: r.warnings,
            residuals: None,
        }
    }
}

pub fn solve_scenario(sc: &Scenario, prec: &Precision) -> Result<Solved, SolveError> {
    match sc.case {
        CaseSpec::Unknown(case) => {
            let problem = validate(&sc.coefficients, &sc.boundary, sc.problem, Some(case))?;
            Ok(mushy_core::solve(&problem, prec)?.into())
        }
        CaseSpec::Direct => {
            let problem = validate(&sc.coefficients, &sc.boundary, sc.problem, None)?;
            let (thermal, mushy) = problem.complete()?;
            let xi = solve_stefan_xi(&thermal, &mushy, problem.boundary.q0, prec)?;
            let solution = build_solution(&thermal, &mushy, &problem.boundary, xi)?;
            let residuals = consistency_residuals(&thermal, &mushy, &problem.boundary, xi, sc.problem);
            let mut warnings = Vec::new();
            if !residuals.within(DIRECT_CONSISTENCY_TOL) {
                warnings.push(format!(
                    "data are inconsistent: face residual {:e} (the face condition is not met)",
                    residuals.res_face
                ));
            }
            Ok(Solved {
                face: sc.problem,
                case: CaseSpec::Direct,
                value: None,
                xi,
                thermal,
                mushy,
                boundary: problem.boundary,
                solution,
                reports: Vec::new(),
                warnings,
                residuals: Some(residuals),
            })
        }
    }
}

fn report_json(r: &RestrictionReport) -> Value {
    json!({
        "id": r.id.to_string(),
        "satisfied": r.satisfied,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "margin": r.margin,
        "inequality": r.id.inequality(),
    })
}

fn reports_csv(reports: &[RestrictionReport]) -> String {
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                if r.satisfied { "holds" } else { "violated" }.to_string(),
                num(r.lhs),
                num(r.rhs),
                num(r.margin),
                r.id.inequality().to_string(),
            ]
        })
        .collect();
    csv(&["restriction", "status", "lhs", "rhs", "margin", "inequality"], &rows)
}

fn render_reports(reports: &[RestrictionReport], fmt: Format) -> String {
    match fmt {
        Format::Json => json(&json!({ "restrictions": reports.iter().map(report_json).collect::<Vec<_>>() })),
        Format::Csv => reports_csv(reports),
    }
}

fn coefficients_of(s: &Solved) -> CoefficientSet {
    CoefficientSet::complete(&s.thermal, &s.mushy)
}

pub fn render_solved(s: &Solved, fmt: Format) -> String {
    let sol = &s.solution;
    match fmt {
        Format::Json => {
            let mut v = json!({
                "problem": s.face.to_string(),
                "case": s.case.to_string(),
                "xi": s.xi,
                "mu": sol.mu,
                "a": sol.a_coef,
                "b": sol.b_coef,
                "alpha": sol.alpha,
                "coefficients": coefficients_of(s),
                "boundary": s.boundary,
                "restrictions": s.reports.iter().map(report_json).collect::<Vec<_>>(),
                "warnings": s.warnings,
            });
            if let Some(value) = s.value {
                v["value"] = json!(value);
            }
            if let Some(r) = &s.residuals {
                v["residuals"] = json!({ "stefan": r.res_stefan, "face": r.res_face });
                v["consistent"] = json!(r.within(DIRECT_CONSISTENCY_TOL));
            }
            json(&v)
        }
        Format::Csv => {
            let mut rows = vec![
                vec!["problem".into(), s.face.to_string()],
                vec!["case".into(), s.case.to_string()],
            ];
            if let Some(value) = s.value {
                rows.push(vec!["value".into(), num(value)]);
            }
            let c = coefficients_of(s);
            for (name, v) in [
                ("xi", s.xi),
                ("mu", sol.mu),
                ("a", sol.a_coef),
                ("b", sol.b_coef),
                ("alpha", sol.alpha),
                ("l", c.l.unwrap_or(f64::NAN)),
                ("k", c.k.unwrap_or(f64::NAN)),
                ("rho", c.rho.unwrap_or(f64::NAN)),
                ("c", c.c.unwrap_or(f64::NAN)),
                ("epsilon", c.epsilon.unwrap_or(f64::NAN)),
                ("gamma", c.gamma.unwrap_or(f64::NAN)),
                ("q0", s.boundary.q0),
                ("d_inf", s.boundary.d_inf),
            ] {
                rows.push(vec![name.into(), num(v)]);
            }
            if let Some(h0) = s.boundary.h0 {
                rows.push(vec!["h0".into(), num(h0)]);
            }
            if let Some(r) = &s.residuals {
                rows.push(vec!["res_stefan".into(), num(r.res_stefan)]);
                rows.push(vec!["res_face".into(), num(r.res_face)]);
            }
            for r in &s.reports {
                rows.push(vec![format!("{}.margin", r.id), num(r.margin)]);
            }
            csv(&["field", "value"], &rows)
        }
    }
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

/// On a restriction failure the reports still go to the output, so the
/// failing inequality and both sides are visible in machine-readable form.
fn solve_or_report(sc: &Scenario, prec: &Precision, common: &Common, fmt: Format) -> Result<Solved, CliError> {
    match solve_scenario(sc, prec) {
        Ok(s) => Ok(s),
        Err(SolveError::Restriction { reports }) => {
            emit(common.out.as_deref(), &render_reports(&reports, fmt))?;
            Err(SolveError::Restriction { reports }.into())
        }
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_solve(args: &ScenarioArgs) -> Result<(), CliError> {
    let sc = load(&args.scenario, &args.common)?;
    let fmt = format(&sc, &args.common, Format::Json);
    let prec = sc.precision(args.common.tol)?;
    let solved = solve_or_report(&sc, &prec, &args.common, fmt)?;
    warn_all(&solved.warnings);
    emit(args.common.out.as_deref(), &render_solved(&solved, fmt))
}

pub fn cmd_check_restrictions(args: &ScenarioArgs) -> Result<(), CliError> {
    let sc = load(&args.scenario, &args.common)?;
    let fmt = format(&sc, &args.common, Format::Json);
    let CaseSpec::Unknown(case) = sc.case else {
        return Err(CliError::Input(
            "restrictions are defined per unknown coefficient; case is direct".into(),
        ));
    };
    let reports = match sc.problem {
        FaceCondition::Convective => convective::check_restrictions(case, &sc.coefficients, &sc.boundary)?,
        FaceCondition::Dirichlet => dirichlet::check_restrictions(case, &sc.coefficients, &sc.boundary)?,
    };
    emit(args.common.out.as_deref(), &render_reports(&reports, fmt))?;
    let violated: Vec<String> = reports.iter().filter(|r| !r.satisfied).map(|r| r.to_string()).collect();
    if violated.is_empty() {
        Ok(())
    } else {
        Err(CliError::Restriction(violated.join("; ")))
    }
}

fn positive_list(name: &str, values: &[f64], allow_zero: bool) -> Result<(), CliError> {
    for &v in values {
        let ok = v.is_finite() && (v > 0.0 || (allow_zero && v == 0.0));
        if !ok {
            return Err(CliError::Input(format!(
                "{name} must be {}, got {v}",
                if allow_zero { "non-negative" } else { "positive" }
            )));
        }
    }
    if values.is_empty() {
        return Err(CliError::Input(format!("{name} is empty")));
    }
    Ok(())
}

pub fn cmd_profile(args: &ProfileArgs) -> Result<(), CliError> {
    let sc = load(&args.scenario, &args.common)?;
    let fmt = format(&sc, &args.common, Format::Csv);
    let prec = sc.precision(args.common.tol)?;
    let mut times = args
        .times
        .clone()
        .or(sc.options.times.clone())
        .unwrap_or_else(|| vec![1.0]);
    positive_list("t", &times, true)?;
    times.sort_by(f64::total_cmp);
    times.dedup();
    let nx = args.nx.or(sc.options.nx).unwrap_or(11);
    if nx < 2 {
        return Err(CliError::Input(format!("nx must be at least 2, got {nx}")));
    }
    let x_max = args.x_max.or(sc.options.x_max);
    if let Some(x) = x_max {
        positive_list("x-max", &[x], false)?;
    }
    let solved = solve_or_report(&sc, &prec, &args.common, fmt)?;
    warn_all(&solved.warnings);
    let sol = &solved.solution;

    let mut profile = Vec::new();
    let mut fronts = Vec::new();
    for &t in &times {
        if t == 0.0 {
            fronts.push((0.0, 0.0, 0.0));
            continue;
        }
        let (s, r) = (
            front_s(sol, t).map_err(SolveError::from)?,
            front_r(sol, t).map_err(SolveError::from)?,
        );
        fronts.push((t, s, r));
        let span = x_max.unwrap_or(s);
        for i in 0..nx {
            // the last point lands exactly on the span
            let x = if i + 1 == nx {
                span
            } else {
                span * i as f64 / (nx - 1) as f64
            };
            let temp = temperature(sol, x, t).map_err(SolveError::from)?;
            profile.push((t, x, temp.value, temp.region.as_str()));
        }
    }

    match fmt {
        Format::Json => {
            let v = json!({
                "profile": profile.iter().map(|(t, x, v, r)| json!({"t": t, "x": x, "T": v, "region": r})).collect::<Vec<_>>(),
                "fronts": fronts.iter().map(|(t, s, r)| json!({"t": t, "s": s, "r": r})).collect::<Vec<_>>(),
            });
            emit(args.common.out.as_deref(), &json(&v))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = profile
                .iter()
                .map(|(t, x, v, r)| vec![num(*t), num(*x), num(*v), r.to_string()])
                .collect();
            let profile_csv = csv(&["t", "x", "T", "region"], &rows);
            let rows: Vec<Vec<String>> = fronts.iter().map(|(t, s, r)| vec![num(*t), num(*s), num(*r)]).collect();
            let fronts_csv = csv(&["t", "s", "r"], &rows);
            let fronts_path = args
                .fronts_out
                .clone()
                .or_else(|| args.common.out.as_deref().map(sibling_fronts));
            match (&args.common.out, fronts_path) {
                (None, None) => emit(None, &format!("{profile_csv}\n{fronts_csv}")),
                (out, fronts_path) => {
                    emit(out.as_deref(), &profile_csv)?;
                    emit(fronts_path.as_deref(), &fronts_csv)
                }
            }
        }
    }
}

fn sibling_fronts(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "profile".into());
    out.with_file_name(format!("{stem}.fronts.csv"))
}

pub fn cmd_limit(args: &LimitArgs) -> Result<(), CliError> {
    let sc = load(&args.scenario, &args.common)?;
    let fmt = format(&sc, &args.common, Format::Csv);
    let prec = sc.precision(args.common.tol)?;
    let CaseSpec::Unknown(case) = sc.case else {
        return Err(CliError::Input(
            "the limit study needs an unknown coefficient; case is direct".into(),
        ));
    };
    let grid = args
        .h0_grid
        .clone()
        .or(sc.options.h0_grid.clone())
        .unwrap_or_else(|| (1..=6).map(|p| 10f64.powi(p)).collect());
    positive_list("h0-grid", &grid, false)?;
    let study = match dirichlet::limit_study(&sc.coefficients, &sc.boundary, case, &grid, &prec) {
        Ok(s) => s,
        Err(SolveError::Restriction { reports }) => {
            emit(args.common.out.as_deref(), &render_reports(&reports, fmt))?;
            return Err(SolveError::Restriction { reports }.into());
        }
        Err(e) => return Err(e.into()),
    };

    let slope = match study.fitted_slope {
        Some(s) => format!("fitted slope of ln|xi_conv - xi_D| against ln h0: {}", num(s)),
        None => "fitted slope: undefined (fewer than two usable grid points)".to_string(),
    };
    let mut summary = vec![
        format!("xi_dirichlet: {}", num(study.xi_dirichlet)),
        format!("{case}_dirichlet: {}", num(study.coefficient_dirichlet)),
        slope,
    ];
    if study.resorted {
        summary.push("h0 grid was not strictly increasing; sorted (duplicates removed) before processing".into());
    }
    for e in &study.excluded {
        summary.push(format!("excluded h0 = {}: {}", num(e.h0), e.reason));
    }

    match fmt {
        Format::Json => {
            let v = json!({
                "case": case.to_string(),
                "h0_grid": study.h0_grid,
                "rows": study.rows,
                "excluded": study.excluded,
                "xi_dirichlet": study.xi_dirichlet,
                "coefficient_dirichlet": study.coefficient_dirichlet,
                "fitted_slope": study.fitted_slope,
                "resorted": study.resorted,
                "summary": summary,
            });
            emit(args.common.out.as_deref(), &json(&v))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = study
                .rows
                .iter()
                .map(|r| vec![num(r.h0), num(r.xi_conv), num(r.diff), num(r.coefficient)])
                .collect();
            let coef = format!("{case}_conv");
            emit(
                args.common.out.as_deref(),
                &csv(&["h0", "xi_conv", "abs_diff", &coef], &rows),
            )?;
            for line in &summary {
                eprintln!("{line}");
            }
            Ok(())
        }
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let sc = load(&args.scenario, &args.common)?;
    let fmt = format(&sc, &args.common, Format::Json);
    let prec = sc.precision(None)?;
    let tol = args.common.tol.unwrap_or(1e-10);
    let solved = solve_or_report(&sc, &prec, &args.common, fmt)?;
    warn_all(&solved.warnings);
    let xi = solved.xi + args.xi_offset;
    let sol = build_solution(&solved.thermal, &solved.mushy, &solved.boundary, xi)
        .map_err(|e| CliError::Input(format!("xi + offset: {e}")))?;
    let default = GridSpec::default();
    let grid = GridSpec {
        x_fractions: sc.options.x_fractions.clone().unwrap_or(default.x_fractions),
        t_points: args
            .times
            .clone()
            .or(sc.options.times.clone())
            .unwrap_or(default.t_points),
        fd_step: args.fd_step.or(sc.options.fd_step).unwrap_or(default.fd_step),
    };
    let report = full_check(
        &sol,
        &solved.thermal,
        &solved.mushy,
        &solved.boundary,
        solved.face,
        &grid,
    )?;
    let failures = report.failures(tol, args.pde_tol);

    let rows: Vec<(String, f64, f64, bool)> = report
        .all()
        .into_iter()
        .map(|(id, r)| {
            let limit = if id == mushy_core::ConditionId::Pde {
                args.pde_tol
            } else {
                tol
            };
            (id.to_string(), r, limit, r <= limit)
        })
        .collect();
    let text = match fmt {
        Format::Json => json(&json!({
            "xi": xi,
            "fd_step": report.fd_step,
            "t_points": report.t_points,
            "residuals": rows.iter().map(|(id, r, l, ok)| json!({"condition": id, "residual": r, "tolerance": l, "pass": ok})).collect::<Vec<_>>(),
        })),
        Format::Csv => csv(
            &["condition", "residual", "tolerance", "status"],
            &rows
                .iter()
                .map(|(id, r, l, ok)| {
                    vec![
                        id.clone(),
                        num(*r),
                        num(*l),
                        if *ok { "pass" } else { "fail" }.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    emit(args.common.out.as_deref(), &text)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(
            failures
                .iter()
                .map(|(id, r)| format!("{id} residual {r:e}"))
                .collect::<Vec<_>>()
                .join("; "),
        ))
    }
}

pub fn cmd_manufacture(args: &ManufactureArgs) -> Result<(), CliError> {
    let face = args.common.problem.unwrap_or(FaceCondition::Convective);
    let case = args
        .common
        .case
        .unwrap_or(CaseSpec::Unknown(mushy_core::Coefficient::L));
    let input = ManufactureInput {
        xi: args.xi,
        k: args.k,
        rho: args.rho,
        c: args.c,
        epsilon: args.epsilon,
        gamma: args.gamma,
        q0: args.q0,
        h0: Some(args.h0),
    };
    let m = manufacture(&input, face)?;
    let coefficients = match case {
        CaseSpec::Direct => m.coefficients(),
        CaseSpec::Unknown(slot) => m.known_without(slot),
    };
    let sc = Scenario {
        problem: face,
        case,
        coefficients,
        boundary: m.boundary,
        options: Default::default(),
    };
    let text = match args.common.format {
        Some(Format::Json) => sc.to_json(),
        Some(Format::Csv) => {
            return Err(CliError::Input(
                "manufacture writes TOML or JSON scenarios, not CSV".into(),
            ))
        }
        None if args
            .common
            .out
            .as_ref()
            .and_then(|p| p.extension())
            .is_some_and(|e| e == "json") =>
        {
            sc.to_json()
        }
        None => sc.to_toml(),
    };
    if let CaseSpec::Unknown(slot) = case {
        eprintln!("hidden {slot} = {}", num(m.hidden_value(slot)));
    }
    emit(args.common.out.as_deref(), &text)
}
