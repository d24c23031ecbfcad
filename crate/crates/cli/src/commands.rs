use std::path::Path;

use serde_json::{json, Value};
use tricoh::adiabatic::{
    gap_adaptive_schedule, ground_sweep_in, linear_schedule, min_steps_search, refocus_params, run_sweep_in,
    trotter_pair, Schedule, SweepResult,
};
use tricoh::coherence::{coherence_report_in, embed_tetrahedron, CoherenceReport, LogBase};
use tricoh::models::{Model, ModelConfig, ModelParams, NmrParams};
use tricoh::qmat::{ground_state, read_matrix_json, root_fidelity, state_fidelity, unitary_fidelity, validate_density};

use crate::error::CliError;
use crate::output::{g9, opt_g9, out_path, r9, write_json, Table};
use crate::{Command, Common, ScheduleSpec};

pub fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Sweep(c) => sweep(&c),
        Command::Ratios(c) => ratios(&c),
        Command::Geometry { common, j_values } => geometry(&common, &j_values),
        Command::Tomo {
            common,
            files,
            j,
            repair,
            tol,
        } => tomo(&common, &files, j, repair, tol),
        Command::TrotterAudit {
            common,
            threshold,
            scaling_tau,
        } => trotter_audit(&common, threshold, scaling_tau),
        Command::Schedule { common, search } => schedule(&common, search),
    }
}

struct Context {
    model: Model,
    params: ModelParams,
    nmr: Option<NmrParams>,
    tau: f64,
    base: LogBase,
}

fn context(c: &Common) -> Result<Context, CliError> {
    c.usage_checks()?;
    let cfg = match &c.config {
        Some(p) => ModelConfig::read_file(p).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?,
        None => ModelConfig::default(),
    };
    let nmr = cfg.nmr().transpose()?;
    Ok(Context {
        model: c.model,
        params: cfg.params(),
        nmr,
        tau: c.tau.unwrap_or(c.model.default_tau()),
        base: c.log_base.0,
    })
}

fn build_schedule(c: &Common, ctx: &Context, steps: Option<usize>) -> Result<Schedule, CliError> {
    let m = steps.or(c.steps).unwrap_or(ctx.model.default_steps());
    let s = match &c.schedule {
        ScheduleSpec::Linear => linear_schedule(ctx.model, m, ctx.tau)?,
        ScheduleSpec::Adaptive => gap_adaptive_schedule(ctx.model, &ctx.params, m, ctx.tau)?,
        ScheduleSpec::File(path) => {
            let s = Schedule::read_file(ctx.model, path, ctx.tau)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            match c.steps {
                Some(m) if m != s.steps() => s.resample(m)?,
                _ => s,
            }
        }
    };
    Ok(s)
}

fn schedule_name(c: &Common) -> String {
    match &c.schedule {
        ScheduleSpec::Linear => "linear".into(),
        ScheduleSpec::Adaptive => "adaptive".into(),
        ScheduleSpec::File(p) => format!("file {}", p.display()),
    }
}

fn header(ctx: &Context, c: &Common, s: &Schedule) {
    println!(
        "model {}  steps {}  tau {}  schedule {}  omega_z {}  omega_x {}",
        ctx.model,
        s.steps(),
        g9(s.tau()),
        schedule_name(c),
        g9(ctx.params.omega_z),
        g9(ctx.params.omega_x)
    );
}

fn wrote(path: &Path) {
    println!("wrote {}", path.display());
}

/// Couplings where `C_L - C_G` changes sign, linearly interpolated.
fn crossings(r: &SweepResult) -> Vec<(usize, f64)> {
    let d: Vec<f64> = r.steps.iter().map(|s| s.report.c_local - s.report.c_global).collect();
    let mut out = Vec::new();
    for k in 1..d.len() {
        if d[k - 1] != 0.0 && d[k - 1].signum() != d[k].signum() {
            let (j0, j1) = (r.steps[k - 1].j, r.steps[k].j);
            out.push((k, j0 + (j1 - j0) * d[k - 1] / (d[k - 1] - d[k])));
        }
    }
    out
}

fn sweep(c: &Common) -> Result<(), CliError> {
    let ctx = context(c)?;
    let s = build_schedule(c, &ctx, None)?;
    let r = run_sweep_in(&s, &ctx.params, ctx.base)?;

    let mut t = Table::new(
        ["m", "J", "E0", "E1", "gap", "fid_instant"]
            .into_iter()
            .chain(CoherenceReport::CSV_COLUMNS),
    );
    for (m, st) in r.steps.iter().enumerate() {
        let mut row = vec![
            m.to_string(),
            g9(st.j),
            g9(st.e0),
            g9(st.e1),
            g9(st.gap),
            opt_g9(st.fid_instant),
        ];
        row.extend(st.report.values().map(g9));
        t.push(row);
    }
    let path = out_path(&c.out, &format!("sweep_{}.csv", ctx.model))?;
    t.write(&path)?;

    header(&ctx, c, &s);
    println!(
        "final ground state vs target: fidelity {}  root fidelity {}",
        g9(r.target_fidelity),
        g9(r.target_root_fidelity)
    );
    println!(
        "propagated state: min instantaneous fidelity {}  final fidelity to target {}",
        opt_g9(r.min_fidelity),
        opt_g9(r.evolved_target_fidelity)
    );
    for (k, j) in crossings(&r) {
        println!("C_L = C_G between rows {} and {k} at J ~ {}", k - 1, g9(j));
    }
    wrote(&path);
    Ok(())
}

fn ratios(c: &Common) -> Result<(), CliError> {
    let ctx = context(c)?;
    let s = build_schedule(c, &ctx, None)?;
    let r = ground_sweep_in(&s, &ctx.params, ctx.base)?;
    let mut t = Table::new([
        "m",
        "J",
        "C_G/C_L",
        "C_2_3/C_L",
        "C_1_23/C_A_1_23",
        "C_2_3/C_1_23",
        "M",
    ]);
    for (m, st) in r.steps.iter().enumerate() {
        let rep = &st.report;
        t.push(vec![
            m.to_string(),
            g9(st.j),
            opt_g9(rep.global_over_local()),
            opt_g9(rep.c23_over_local()),
            opt_g9(rep.c123_over_abs123()),
            opt_g9(rep.c23_over_c123()),
            g9(rep.monogamy_m),
        ]);
    }
    let path = out_path(&c.out, &format!("ratios_{}.csv", ctx.model))?;
    t.write(&path)?;
    header(&ctx, c, &s);
    wrote(&path);
    Ok(())
}

fn report_json(r: &CoherenceReport) -> Value {
    let mut map = serde_json::Map::new();
    for (name, v) in CoherenceReport::CSV_COLUMNS.iter().zip(r.values()) {
        map.insert((*name).to_string(), json!(r9(v)));
    }
    Value::Object(map)
}

fn default_geometry_points(model: Model) -> Vec<f64> {
    match model {
        Model::Zz => vec![0.0, 0.5, 1.0, 1.5, 2.0],
        Model::Zzz => vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
    }
}

fn geometry(c: &Common, j_values: &[f64]) -> Result<(), CliError> {
    let ctx = context(c)?;
    let points = if j_values.is_empty() {
        default_geometry_points(ctx.model)
    } else {
        j_values.to_vec()
    };
    if let Some(bad) = points.iter().find(|j| !j.is_finite()) {
        return Err(CliError::Usage(format!("--j values must be finite, got {bad}")));
    }
    let mut records = Vec::new();
    for &j in &points {
        let g = ground_state(&ctx.model.hamiltonian(&ctx.params, j))?;
        let report = coherence_report_in(&g.state.projector(), ctx.base)?;
        let t = embed_tetrahedron(&report);
        let v = |p: [f64; 3]| json!(p.map(r9));
        records.push(json!({
            "model": ctx.model.name(),
            "J": r9(j),
            "report": report_json(&report),
            "vertices": {
                "rho": v(t.rho),
                "pi_dephased": v(t.pi_dephased),
                "pi": v(t.pi),
                "split_1_23": v(t.split_1_23),
            },
            "residual": r9(t.residual),
        }));
    }
    let path = out_path(&c.out, &format!("geometry_{}.json", ctx.model))?;
    write_json(&path, &records)?;
    println!("model {}  points {}", ctx.model, points.len());
    wrote(&path);
    Ok(())
}

fn tomo(c: &Common, files: &[std::path::PathBuf], j: Option<f64>, repair: bool, tol: f64) -> Result<(), CliError> {
    let ctx = context(c)?;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Usage(format!("--tol must be nonnegative, got {tol}")));
    }
    let j = j.unwrap_or(ctx.model.sweep_range().1);
    let ground = ground_state(&ctx.model.hamiltonian(&ctx.params, j))?.state.projector();

    let mut t = Table::new(
        [
            "file",
            "hermitian_dev",
            "trace_dev",
            "min_eig",
            "repaired",
            "fidelity",
            "root_fidelity",
        ]
        .into_iter()
        .chain(CoherenceReport::CSV_COLUMNS),
    );
    let mut failures = Vec::new();
    println!("model {}  J {}  tol {}  repair {}", ctx.model, g9(j), g9(tol), repair);
    for file in files {
        let name = file.display().to_string();
        let result = read_matrix_json(file).and_then(|m| {
            let (rho, summary) = validate_density(&m, tol, repair)?;
            if rho.dim() != 8 {
                return Err(tricoh::Error::QubitCount {
                    dim: rho.dim(),
                    n_qubits: 3,
                });
            }
            let f = state_fidelity(&rho, &ground)?;
            let rf = root_fidelity(&rho, &ground)?;
            let report = coherence_report_in(&rho, ctx.base)?;
            Ok((summary, f, rf, report))
        });
        match result {
            Ok((summary, f, rf, report)) => {
                println!(
                    "{name}: hermitian dev {}  trace dev {}  min eigenvalue {}  repaired {}",
                    g9(summary.hermitian_deviation),
                    g9(summary.trace_deviation),
                    g9(summary.min_eigenvalue),
                    summary.repaired
                );
                println!("{name}: fidelity {}  root fidelity {}", g9(f), g9(rf));
                let cols = CoherenceReport::CSV_COLUMNS
                    .iter()
                    .zip(report.values())
                    .map(|(n, v)| format!("{n} {}", g9(v)))
                    .collect::<Vec<_>>()
                    .join("  ");
                println!("{name}: {cols}");
                let mut row = vec![
                    name,
                    g9(summary.hermitian_deviation),
                    g9(summary.trace_deviation),
                    g9(summary.min_eigenvalue),
                    summary.repaired.to_string(),
                    g9(f),
                    g9(rf),
                ];
                row.extend(report.values().map(g9));
                t.push(row);
            }
            Err(e) => {
                eprintln!("{name}: {e}");
                failures.push(name);
            }
        }
    }
    let path = out_path(&c.out, &format!("tomo_{}.csv", ctx.model))?;
    t.write(&path)?;
    wrote(&path);
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{} of {} files failed: {}", failures.len(), files.len(), failures.join(", "))))
    }
}

fn trotter_audit(c: &Common, threshold: f64, scaling_tau: f64) -> Result<(), CliError> {
    let ctx = context(c)?;
    if !(scaling_tau.is_finite() && scaling_tau > 0.0) {
        return Err(CliError::Usage(format!("--scaling-tau must be positive, got {scaling_tau}")));
    }
    let s = build_schedule(c, &ctx, None)?;
    let mut steps = Table::new(["m", "J", "unitary_fidelity"]);
    let mut worst = (f64::INFINITY, 0, 0.0);
    for (m, &j) in s.values().iter().enumerate() {
        let (ui, ue) = trotter_pair(ctx.model, &ctx.params, j, s.tau())?;
        let f = unitary_fidelity(&ui, &ue)?;
        if f < worst.0 {
            worst = (f, m, j);
        }
        steps.push(vec![m.to_string(), g9(j), g9(f)]);
    }

    let mut scaling = Table::new(["J", "tau", "err_tau", "err_half_tau", "ratio"]);
    let (a, b) = ctx.model.sweep_range();
    println!("error scaling at tau {} (max-entry norm, expect ~8):", g9(scaling_tau));
    for k in 0..=4 {
        let j = a + (b - a) * k as f64 / 4.0;
        let err = |tau: f64| -> Result<f64, CliError> {
            let (ui, ue) = trotter_pair(ctx.model, &ctx.params, j, tau)?;
            Ok(ui.max_abs_diff(&ue))
        };
        let (e1, e2) = (err(scaling_tau)?, err(scaling_tau / 2.0)?);
        let ratio = (e1 > tricoh::adiabatic::SPLITTING_ERROR_FLOOR && e2 > tricoh::adiabatic::SPLITTING_ERROR_FLOOR)
            .then(|| e1 / e2);
        println!(
            "  J {}  err {}  err/2 {}  ratio {}",
            g9(j),
            g9(e1),
            g9(e2),
            ratio.map(g9).unwrap_or_else(|| "undefined".into())
        );
        scaling.push(vec![g9(j), g9(scaling_tau), g9(e1), g9(e2), opt_g9(ratio)]);
    }

    let p1 = out_path(&c.out, &format!("trotter_{}.csv", ctx.model))?;
    steps.write(&p1)?;
    let p2 = out_path(&c.out, &format!("trotter_scaling_{}.csv", ctx.model))?;
    scaling.write(&p2)?;
    header(&ctx, c, &s);
    let (f, m, j) = worst;
    println!("min unitary fidelity {} at step {m} (J {})", g9(f), g9(j));
    wrote(&p1);
    wrote(&p2);
    if f > threshold {
        println!("PASS: every slice above {}", g9(threshold));
        Ok(())
    } else {
        println!("FAIL: min unitary fidelity {} <= {}", g9(f), g9(threshold));
        Err(CliError::Assertion(format!(
            "min unitary fidelity {} at step {m} is not above {}",
            g9(f),
            g9(threshold)
        )))
    }
}

fn schedule(c: &Common, search: Option<f64>) -> Result<(), CliError> {
    let ctx = context(c)?;
    let mut steps = None;
    if let Some(target) = search {
        if !(0.0..1.0).contains(&target) {
            return Err(CliError::Usage(format!("--search must be in [0, 1), got {target}")));
        }
        let found = min_steps_search(ctx.model, &ctx.params, target, ctx.tau)?;
        println!(
            "fewest adaptive steps for min fidelity {}: {} (achieved {})",
            g9(target),
            found.steps,
            g9(found.min_fidelity)
        );
        if c.steps.is_none() && matches!(c.schedule, ScheduleSpec::Adaptive) {
            steps = Some(found.steps);
        }
    }
    let s = build_schedule(c, &ctx, steps)?;
    let path = out_path(&c.out, &format!("schedule_{}.json", ctx.model))?;
    let values: Vec<f64> = s.values().iter().map(|&v| r9(v)).collect();
    std::fs::write(&path, serde_json::to_string(&values).expect("floats") + "\n").map_err(|e| CliError::io(&path, e))?;
    header(&ctx, c, &s);
    wrote(&path);

    if let Some(nmr) = &ctx.nmr {
        let r = refocus_params(nmr, &s, &ctx.params)?;
        for notice in r.notices() {
            eprintln!("note: {notice}");
        }
        let head: Vec<&str> = match ctx.model {
            Model::Zz => vec!["m", "J", "tau1", "tau2", "tau3", "FQ1_hz", "FQ2_hz", "FQ3_hz", "pulse_angle"],
            Model::Zzz => vec!["m", "J", "d", "pulse_angle"],
        };
        let mut t = Table::new(head);
        for st in &r.steps {
            let mut row = vec![st.m.to_string(), g9(st.j)];
            row.extend(st.delays.iter().map(|&d| g9(d)));
            row.extend(st.offsets_hz.iter().map(|&o| g9(o)));
            row.push(g9(st.pulse_angle));
            t.push(row);
        }
        let path = out_path(&c.out, &format!("refocus_{}.csv", ctx.model))?;
        t.write(&path)?;
        wrote(&path);
    }
    Ok(())
}
