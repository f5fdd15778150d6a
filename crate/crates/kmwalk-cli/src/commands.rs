use crate::output::{scalar_cell, scalar_json, Sink};
use crate::parse;
use crate::{Backend, Command, ModelArgs, OutputArgs};
use kmwalk::banded::{jacobi_matrix, theta_of_matrix};
use kmwalk::blocks::{
    inner_product, mvop_sequence, norm_blocks, scalar_link_deviation, BlockTridiagonal,
};
use kmwalk::km::KmContext;
use kmwalk::models::{
    build_model, infer_model_name, kball_krawtchouk_deviation, kball_recurrence_deviation,
    multiplicity_report, omega_set, spectrum, Model, ModelParams, MultiBall, QDeformed,
};
use kmwalk::orthopoly::{ehrenfest_measure, JacobiCoefficients, ScalarFamily};
use kmwalk::sim::{empirical_vs_analytic, SimConfig};
use kmwalk::{Error, Rational, Scalar};
use serde_json::json;
use std::fmt;

pub enum CliError {
    Usage(String),
    Check(String),
    Numeric(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Check(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Check(msg) | CliError::Numeric(msg) => {
                write!(f, "{msg}")
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Usage(format!("io error: {err}"))
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::IllConditioned { .. } | Error::SingularMatrix => {
                CliError::Numeric(err.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Build { model, output } => match model.backend {
            Backend::Real => build_cmd::<f64>(&model, &output),
            Backend::Rational => build_cmd::<Rational>(&model, &output),
        },
        Command::Spectrum { model, output } => match model.backend {
            Backend::Real => spectrum_cmd::<f64>(&model, &output),
            Backend::Rational => spectrum_cmd::<Rational>(&model, &output),
        },
        Command::Multiplicity { n, q, backend, output } => match backend {
            Backend::Real => multiplicity_cmd::<f64>(n, q.as_deref(), &output),
            Backend::Rational => multiplicity_cmd::<Rational>(n, q.as_deref(), &output),
        },
        Command::Check { n, q, backend, steps, output } => match backend {
            Backend::Real => check_cmd::<f64>(n, &q, steps, &output),
            Backend::Rational => check_cmd::<Rational>(n, &q, steps, &output),
        },
        Command::Simulate { model, start, steps, trials, seed, threads, output } => {
            if model.backend == Backend::Rational {
                return Err(CliError::Usage(
                    "simulate runs on the real backend (sampling is inherently floating point)"
                        .into(),
                ));
            }
            simulate_cmd(&model, start, steps, trials, seed, threads, &output)
        }
        Command::Fig1 { n, q_grid, backend, output } => match backend {
            Backend::Real => fig1_cmd::<f64>(n, &q_grid, &output),
            Backend::Rational => fig1_cmd::<Rational>(n, &q_grid, &output),
        },
        Command::Fig2 { n, q, k, backend, output } => match backend {
            Backend::Real => fig2_cmd::<f64>(n, &q, &k, &output),
            Backend::Rational => fig2_cmd::<Rational>(n, &q, &k, &output),
        },
    }
}

fn model_from_args<S: Scalar>(args: &ModelArgs) -> Result<Box<dyn Model<S>>, CliError> {
    let params = ModelParams::<S> {
        balls: args.n,
        q: args.q.as_deref().map(parse::scalar).transpose().map_err(CliError::Usage)?,
        k: args.k,
        qvec: args.qvec.as_deref().map(parse::scalar_list).transpose().map_err(CliError::Usage)?,
        kvec: args
            .kvec
            .as_deref()
            .map(parse::batch_sizes)
            .transpose()
            .map_err(CliError::Usage)?,
    };
    let name = match &args.model {
        Some(name) => name.clone(),
        None => infer_model_name(&params).to_string(),
    };
    build_model(&name, &params).map_err(|err| match err {
        Error::UnknownModel(name) => {
            let known: Vec<String> = kmwalk::models::registry::<S>()
                .iter()
                .map(|e| format!("{} ({})", e.name, e.summary))
                .collect();
            CliError::Usage(format!("unknown model '{name}'; available: {}", known.join("; ")))
        }
        other => other.into(),
    })
}

fn build_cmd<S: Scalar>(args: &ModelArgs, out: &OutputArgs) -> Result<(), CliError> {
    let model = model_from_args::<S>(args)?;
    let matrix = model.transition_matrix();
    let mut sink = Sink::open(&out.out)?;
    if out.json {
        let rows: Vec<serde_json::Value> = (0..matrix.size())
            .map(|i| {
                serde_json::Value::Array(
                    (0..matrix.size()).map(|j| scalar_json(matrix.entry(i, j))).collect(),
                )
            })
            .collect();
        sink.json(&json!({
            "model": model.describe(),
            "size": matrix.size(),
            "lower_bandwidth": matrix.lower_bandwidth(),
            "upper_bandwidth": matrix.upper_bandwidth(),
            "rows": rows,
        }))?;
    } else {
        for i in 0..matrix.size() {
            let cells: Vec<String> =
                (0..matrix.size()).map(|j| scalar_cell(matrix.entry(i, j))).collect();
            sink.line(&cells.join(","))?;
        }
    }
    sink.finish()?;
    Ok(())
}

fn spectrum_cmd<S: Scalar>(args: &ModelArgs, out: &OutputArgs) -> Result<(), CliError> {
    let model = model_from_args::<S>(args)?;
    let report = spectrum(model.as_ref());
    let gap = report.spectral_gap();
    let balls = model.ball_count();
    let lambda =
        |j: usize| S::one() - S::from_int(2 * j as i64) / S::from_int(balls as i64);
    let mut sink = Sink::open(&out.out)?;
    if out.json {
        let rows: Vec<serde_json::Value> = (0..model.states())
            .map(|j| {
                json!({
                    "j": j,
                    "lambda_j": scalar_json(&lambda(j)),
                    "theta_lambda_j": scalar_json(&report.eigenvalues()[j]),
                    "multiplicity_class": report.class_of(j),
                })
            })
            .collect();
        sink.json(&json!({
            "model": model.describe(),
            "rows": rows,
            "multiplicity_classes": report.multiplicity_classes(),
            "gap_excluding_one": gap.excluding_one,
            "gap_excluding_unimodular": gap.excluding_unimodular,
        }))?;
    } else {
        sink.line("j,lambda_j,theta_lambda_j,multiplicity_class")?;
        for j in 0..model.states() {
            sink.line(&format!(
                "{j},{},{},{}",
                scalar_cell(&lambda(j)),
                scalar_cell(&report.eigenvalues()[j]),
                report.class_of(j)
            ))?;
        }
    }
    sink.finish()?;
    Ok(())
}

fn multiplicity_cmd<S: Scalar>(
    n: usize,
    q: Option<&str>,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let mut sink = Sink::open(&out.out)?;
    match q {
        Some(text) => {
            let q: S = parse::scalar(text).map_err(CliError::Usage)?;
            let report = multiplicity_report(n, &q)?;
            if out.json {
                sink.json(&json!({
                    "n": n,
                    "q": scalar_json(&q),
                    "in_omega": report.in_omega,
                    "i": report.i,
                    "predicted_doubles": report.predicted_doubles,
                    "observed_doubles": report.observed_doubles,
                }))?;
            } else {
                sink.line("in_omega,i,predicted_doubles,observed_doubles")?;
                sink.line(&format!(
                    "{},{},{},{}",
                    report.in_omega,
                    report.i.map_or(String::new(), |i| i.to_string()),
                    report.predicted_doubles,
                    report.observed_doubles
                ))?;
            }
        }
        None => {
            let omega: Vec<S> = omega_set(n)?;
            let mut rows = Vec::new();
            for (i, q) in omega.iter().enumerate() {
                let report = multiplicity_report(n, q)?;
                rows.push((i, q.clone(), report));
            }
            if out.json {
                let rows: Vec<serde_json::Value> = rows
                    .iter()
                    .map(|(i, q, rep)| {
                        json!({
                            "i": i,
                            "q": scalar_json(q),
                            "predicted_doubles": rep.predicted_doubles,
                            "observed_doubles": rep.observed_doubles,
                        })
                    })
                    .collect();
                sink.json(&json!({ "n": n, "critical_set": rows }))?;
            } else {
                sink.line("i,q,predicted_doubles,observed_doubles")?;
                for (i, q, rep) in &rows {
                    sink.line(&format!(
                        "{i},{},{},{}",
                        scalar_cell(q),
                        rep.predicted_doubles,
                        rep.observed_doubles
                    ))?;
                }
            }
        }
    }
    sink.finish()?;
    Ok(())
}

struct Suite {
    name: &'static str,
    deviation: f64,
    tolerance: f64,
}

impl Suite {
    fn pass(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

fn check_cmd<S: Scalar>(
    n: usize,
    q_text: &str,
    steps: usize,
    out: &OutputArgs,
) -> Result<(), CliError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(CliError::Usage(format!(
            "the identity suites need an odd ball count of at least 3, got {n}"
        )));
    }
    let q: S = parse::scalar(q_text).map_err(CliError::Usage)?;
    let model = QDeformed::new(n, q)?;
    let theta = model.theta();
    let coeffs = JacobiCoefficients::<S>::ehrenfest(n)?;
    let measure = ehrenfest_measure::<S>(n)?;
    let fam = ScalarFamily::from_measure(coeffs.clone(), &measure)?;
    let blocks = BlockTridiagonal::from_banded(model.transition_matrix(), 2)?;
    let polys = mvop_sequence(&blocks)?;
    let ctx = KmContext::new(&model)?;

    let exact_tol = 0.0;
    let (tol_matrix, tol_spectral) = if S::EXACT { (exact_tol, exact_tol) } else { (1e-12, 1e-10) };
    let mut suites = Vec::new();

    // direct construction vs polynomial of the chain
    let mapped = theta_of_matrix(&theta, &jacobi_matrix(&coeffs));
    suites.push(Suite {
        name: "quadratic-map",
        deviation: model.transition_matrix().max_abs_diff(&mapped).abs_f64(),
        tolerance: tol_matrix,
    });

    // matrix polynomials act on stacked scalar polynomials
    let mut link_dev = 0.0f64;
    for j in 0..polys.len() {
        link_dev =
            link_dev.max(scalar_link_deviation(j, &theta, &fam, &measure, &polys)?.abs_f64());
    }
    suites.push(Suite { name: "scalar-link", deviation: link_dev, tolerance: tol_spectral });

    // block orthogonality against the diagonal norm blocks
    let h = norm_blocks(fam.norms(), 2)?;
    let mut orth_dev = 0.0f64;
    for j in 0..polys.len() {
        for k in 0..polys.len() {
            let g = inner_product(&polys[j], &polys[k], &theta, &fam, &measure)?;
            let dev =
                if j == k { g.sub(&h[j]).max_abs() } else { g.max_abs() };
            orth_dev = orth_dev.max(dev.abs_f64());
        }
    }
    suites.push(Suite { name: "block-orthogonality", deviation: orth_dev, tolerance: tol_spectral });

    // batch-size recurrence and the Krawtchouk closed form of the batches
    suites.push(Suite {
        name: "batch-recurrence",
        deviation: kball_recurrence_deviation::<S>(n, n)?.abs_f64(),
        tolerance: tol_matrix,
    });
    let mut kraw_dev = 0.0f64;
    for k in 0..=n {
        kraw_dev = kraw_dev.max(kball_krawtchouk_deviation::<S>(n, k)?.abs_f64());
    }
    suites.push(Suite { name: "batch-krawtchouk", deviation: kraw_dev, tolerance: tol_matrix });

    // spectral representation against direct powers, scalar and block
    let mut km_dev = 0.0f64;
    for step in 0..=steps {
        let direct = model.transition_matrix().pow(step);
        let spectral = ctx.scalar_matrix(step)?;
        km_dev = km_dev.max(spectral.max_abs_diff(direct.dense()).abs_f64());
        for bi in 0..polys.len() {
            for bj in 0..polys.len() {
                let block = ctx.block_entry(step, bi, bj)?;
                for r in 0..2usize {
                    for c in 0..2usize {
                        let d = block[(r, c)].clone()
                            - direct.entry(2 * bi + r, 2 * bj + c).clone();
                        km_dev = km_dev.max(d.abs_f64());
                    }
                }
            }
        }
    }
    suites.push(Suite { name: "spectral-powers", deviation: km_dev, tolerance: tol_spectral });

    let all_pass = suites.iter().all(Suite::pass);
    let mut sink = Sink::open(&out.out)?;
    if out.json {
        let rows: Vec<serde_json::Value> = suites
            .iter()
            .map(|s| {
                json!({
                    "suite": s.name,
                    "pass": s.pass(),
                    "max_deviation": s.deviation,
                    "tolerance": s.tolerance,
                })
            })
            .collect();
        sink.json(&json!({
            "n": n,
            "q": q_text,
            "backend": if S::EXACT { "rational" } else { "real" },
            "suites": rows,
            "pass": all_pass,
        }))?;
    } else {
        for s in &suites {
            sink.line(&format!(
                "{} {} max_deviation={:.3e} tolerance={:.3e}",
                if s.pass() { "PASS" } else { "FAIL" },
                s.name,
                s.deviation,
                s.tolerance
            ))?;
        }
    }
    sink.finish()?;
    if all_pass {
        Ok(())
    } else {
        let failed: Vec<&str> =
            suites.iter().filter(|s| !s.pass()).map(|s| s.name).collect();
        Err(CliError::Check(format!("identity suites failed: {}", failed.join(", "))))
    }
}

fn simulate_cmd(
    args: &ModelArgs,
    start: usize,
    steps: usize,
    trials: u64,
    seed: u64,
    threads: usize,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let model = model_from_args::<f64>(args)?;
    let cfg = SimConfig { start, steps, trials, seed };
    let report = empirical_vs_analytic(model.as_ref(), &cfg, steps, threads)?;
    let mut sink = Sink::open(&out.out)?;
    if out.json {
        sink.json(&json!({
            "model": model.describe(),
            "start": start,
            "steps": steps,
            "trials": trials,
            "seed": seed,
            "counts": report.counts,
            "empirical": report.empirical,
            "analytic": report.analytic,
            "z": report.z,
            "tv": report.tv,
            "z_max": report.z_max,
        }))?;
    } else {
        sink.line("state,count,empirical,analytic,z")?;
        for state in 0..report.counts.len() {
            sink.line(&format!(
                "{state},{},{},{},{}",
                report.counts[state],
                report.empirical[state],
                report.analytic[state],
                report.z[state]
            ))?;
        }
        eprintln!("tv={} z_max={}", report.tv, report.z_max);
    }
    sink.finish()?;
    Ok(())
}

fn fig1_cmd<S: Scalar>(n: usize, grid_text: &str, out: &OutputArgs) -> Result<(), CliError> {
    let grid: Vec<S> = parse::grid(grid_text).map_err(CliError::Usage)?;
    let mut rows: Vec<(S, usize, S)> = Vec::with_capacity(grid.len() * (n + 1));
    for q in grid {
        // float grids can overshoot the endpoint by an ulp
        let q = if !S::EXACT && q > S::one() && q.approx_eq(&S::one(), 1e-9) {
            S::one()
        } else {
            q
        };
        let model = QDeformed::new(n, q.clone())?;
        for j in 0..=n {
            rows.push((q.clone(), j, model.eigenvalue(j)));
        }
    }
    let mut sink = Sink::open(&out.out)?;
    if out.json {
        let rows: Vec<serde_json::Value> = rows
            .iter()
            .map(|(q, j, e)| {
                json!({"q": scalar_json(q), "j": j, "eigenvalue": scalar_json(e)})
            })
            .collect();
        sink.json(&json!({ "n": n, "rows": rows }))?;
    } else {
        sink.line("q,j,eigenvalue")?;
        for (q, j, e) in &rows {
            sink.line(&format!("{},{j},{}", scalar_cell(q), scalar_cell(e)))?;
        }
    }
    sink.finish()?;
    Ok(())
}

fn fig2_cmd<S: Scalar>(
    n: usize,
    q_text: &str,
    k_text: &str,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let q: S = parse::scalar(q_text).map_err(CliError::Usage)?;
    let ks = parse::batch_sizes(k_text).map_err(CliError::Usage)?;
    let mut rows: Vec<(usize, usize, S, bool)> = Vec::new();
    for k in ks {
        let model = MultiBall::new(n, vec![(S::one() - q.clone(), 1), (q.clone(), k)])?;
        let eigs: Vec<S> = (0..=n).map(|j| model.eigenvalue(j)).collect();
        // subdominant: largest modulus strictly below one
        let mut best: Option<usize> = None;
        for (j, e) in eigs.iter().enumerate() {
            let modulus = e.abs_f64();
            if modulus < 1.0 - 1e-12
                && best.is_none_or(|b| modulus > eigs[b].abs_f64()) {
                    best = Some(j);
                }
        }
        for (j, e) in eigs.into_iter().enumerate() {
            rows.push((k, j, e, best == Some(j)));
        }
    }
    let mut sink = Sink::open(&out.out)?;
    if out.json {
        let rows: Vec<serde_json::Value> = rows
            .iter()
            .map(|(k, j, e, sub)| {
                json!({
                    "k": k,
                    "j": j,
                    "eigenvalue": scalar_json(e),
                    "is_subdominant": sub,
                })
            })
            .collect();
        sink.json(&json!({ "n": n, "q": q_text, "rows": rows }))?;
    } else {
        sink.line("k,j,eigenvalue,is_subdominant")?;
        for (k, j, e, sub) in &rows {
            sink.line(&format!("{k},{j},{},{sub}", scalar_cell(e)))?;
        }
    }
    sink.finish()?;
    Ok(())
}
