use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use ptqm::acceptability::{accept, MetricOperator};
use ptqm::evolution::{self, brach_sweep_parallel, evolve, oscillator_spectrum, EvolutionConfig};
use ptqm::hermitize::{hermitize_with, to_nonorthogonal, BasisChange};
use ptqm::ptsym::{pt_residual, ParityOperator};
use ptqm::repro::{self, ReproReport};
use ptqm::{io, ComplexMatrix};

use crate::manifest::{digest_file, write_outputs, RunManifest, Timer};
use crate::{Cli, Command, Demo, Repro};

/// What a subcommand produced.
struct Run {
    /// `(file name, contents)`; the first one is printed when there is no out-dir.
    outputs: Vec<(String, String)>,
    ok: bool,
    inputs: Vec<PathBuf>,
    config: Value,
    seed: Option<u64>,
}

impl Run {
    fn single(name: &str, contents: String, ok: bool) -> Self {
        Self {
            outputs: vec![(name.to_string(), contents)],
            ok,
            inputs: Vec::new(),
            config: Value::Null,
            seed: None,
        }
    }

    fn inputs(mut self, paths: &[&Path]) -> Self {
        self.inputs = paths.iter().map(|p| p.to_path_buf()).collect();
        self
    }

    fn config(mut self, config: impl Serialize) -> Self {
        self.config = serde_json::to_value(config).unwrap_or(Value::Null);
        self
    }

    fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

fn json(value: &impl Serialize) -> Result<String> {
    Ok(io::to_json_pretty(value)?)
}

fn load_matrix(path: &Path, role: &str) -> Result<ComplexMatrix> {
    io::load_matrix(path).with_context(|| format!("loading {role}"))
}

/// `a0:a1:n` → n values from a0 to a1 inclusive.
pub fn parse_alphas(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    ensure!(
        parts.len() == 3,
        "--alphas must look like a0:a1:n, got {spec:?}"
    );
    let a0: f64 = parts[0]
        .trim()
        .parse()
        .with_context(|| format!("bad a0 in {spec:?}"))?;
    let a1: f64 = parts[1]
        .trim()
        .parse()
        .with_context(|| format!("bad a1 in {spec:?}"))?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .with_context(|| format!("bad n in {spec:?}"))?;
    ensure!(n >= 1, "--alphas needs n >= 1");
    if n == 1 {
        return Ok(vec![a0]);
    }
    Ok((0..n)
        .map(|k| a0 + (a1 - a0) * k as f64 / (n - 1) as f64)
        .collect())
}

fn execute(cli: &Cli, timer: &mut Timer) -> Result<Run> {
    let seed = cli.seed;
    match &cli.command {
        Command::CheckPt { h, p, tol } => {
            let hm = timer.time("load", || load_matrix(h, "--h"))?;
            let pm = timer.time("load", || load_matrix(p, "--p"))?;
            let parity = ParityOperator::new(pm, *tol).context("--p is not a parity operator")?;
            let residual = timer.time("compute", || pt_residual(&hm, &parity))?;
            let satisfies = residual <= *tol;
            let out = json(&json!({ "satisfies": satisfies, "residual": residual }))?;
            Ok(Run::single("check_pt.json", out, satisfies)
                .inputs(&[h, p])
                .config(json!({ "tol": tol })))
        }
        Command::Accept { h, tols } => {
            let hm = timer.time("load", || load_matrix(h, "--h"))?;
            let config = tols.config(seed);
            let report = timer.time("compute", || accept(&hm, &config));
            Ok(
                Run::single("report.json", json(&report)?, report.is_accepted())
                    .inputs(&[h])
                    .config(&config)
                    .seed(seed),
            )
        }
        Command::Hermitize { h, tols } => {
            let hm = timer.time("load", || load_matrix(h, "--h"))?;
            let config = tols.config(seed);
            let report = timer.time("accept", || accept(&hm, &config));
            let run = if report.is_accepted() {
                let pair = timer.time("compute", || hermitize_with(&hm, &config))?;
                let bundle = json!({
                    "h_herm": pair.h_herm,
                    "b": pair.basis.b(),
                    "b_inv": pair.basis.b_inv(),
                    "metric": pair.metric.matrix(),
                    "residuals": pair.residuals(),
                });
                Run::single("hermitize.json", json(&bundle)?, true)
            } else {
                Run::single("report.json", json(&report)?, false)
            };
            Ok(run.inputs(&[h]).config(&config).seed(seed))
        }
        Command::Transform { h, b } => {
            let hm = timer.time("load", || load_matrix(h, "--h"))?;
            let bm = timer.time("load", || load_matrix(b, "--b"))?;
            let basis = BasisChange::new(bm).context("--b is not invertible")?;
            let (h_prime, metric) = timer.time("compute", || to_nonorthogonal(&hm, &basis))?;
            let out = json(&json!({ "h_prime": h_prime, "metric": metric.matrix() }))?;
            Ok(Run::single("transform.json", out, true).inputs(&[h, b]))
        }
        Command::Evolve {
            h,
            c,
            psi0,
            t,
            hbar,
        } => {
            let hm = timer.time("load", || load_matrix(h, "--h"))?;
            let v = timer
                .time("load", || io::load_vector(psi0))
                .context("loading --psi0")?;
            let metric = match c {
                Some(path) => {
                    let cm = load_matrix(path, "--c")?;
                    Some(MetricOperator::new(cm, 1e-10).context("--c is not a metric")?)
                }
                None => None,
            };
            let state = timer.time("compute", || evolve(&hm, &v, *t, *hbar))?;
            let mut run = Run::single("state.json", io::vector_to_json(&state)?, true);
            if let Some(c) = &metric {
                let norms = json!({
                    "initial": c.norm_sqr(&v)?,
                    "final": c.norm_sqr(&state)?,
                });
                run.outputs.push(("norms.json".to_string(), json(&norms)?));
            }
            let mut inputs: Vec<&Path> = vec![h, psi0];
            if let Some(path) = c {
                inputs.push(path);
            }
            Ok(run.inputs(&inputs).config(json!({ "t": t, "hbar": hbar })))
        }
        Command::Brach {
            epsilon,
            alphas,
            hbar,
            grid_points,
            root_polish_tol,
            jobs,
        } => {
            let grid = parse_alphas(alphas)?;
            ensure!(*epsilon > 0.0, "--epsilon must be positive");
            let config = EvolutionConfig {
                grid_points: *grid_points,
                root_polish_tol: *root_polish_tol,
                ..evolution::spin_half_config(*epsilon, *hbar)
            };
            let records = timer.time("compute", || {
                brach_sweep_parallel(*epsilon, &grid, &config, *jobs)
            })?;
            Ok(
                Run::single("brach.csv", io::csv_string(&records)?, true).config(json!({
                    "epsilon": epsilon,
                    "alphas": alphas,
                    "evolution": config,
                    "jobs": jobs,
                })),
            )
        }
        Command::Demo(Demo::ShiftedOsc { nmax, count }) => {
            let spec = timer.time("compute", || oscillator_spectrum(*nmax, *count))?;
            Ok(Run::single("shifted_osc.json", json(&spec)?, true)
                .config(json!({ "nmax": nmax, "count": count })))
        }
        Command::Repro(which) => {
            let reports: Vec<ReproReport> =
                timer.time("compute", || -> Result<Vec<ReproReport>> {
                    Ok(match which {
                        Repro::Antilinear => vec![repro::antilinear()?],
                        Repro::Counterexample => vec![repro::counterexample()?],
                        Repro::SpinHalf { alpha } => vec![repro::spin_half_example(*alpha)?],
                        Repro::Brachistochrone => vec![repro::brachistochrone()?],
                        Repro::Oscillator { nmax } => vec![repro::oscillator(*nmax)?],
                        Repro::All => repro::all()?,
                    })
                })?;
            for r in &reports {
                for c in &r.checks {
                    let measured = match (c.value, c.tolerance) {
                        (Some(v), Some(t)) => format!(" (value {v:e}, tolerance {t:e})"),
                        _ => String::new(),
                    };
                    let mark = if c.passed { "pass" } else { "FAIL" };
                    eprintln!("[{mark}] {}: {}{measured}", r.name, c.name);
                }
            }
            let ok = reports.iter().all(|r| r.passed);
            let out = if reports.len() == 1 {
                json(&reports[0])?
            } else {
                json(&reports)?
            };
            let config = match which {
                Repro::SpinHalf { alpha } => json!({ "alpha": alpha }),
                Repro::Oscillator { nmax } => json!({ "nmax": nmax }),
                _ => Value::Null,
            };
            Ok(Run::single("repro.json", out, ok).config(config))
        }
    }
}

/// Run the parsed command; `Ok(false)` is a negative verdict.
pub fn run(cli: &Cli, argv: &[String]) -> Result<bool> {
    let mut timer = Timer::default();
    let run = execute(cli, &mut timer)?;
    match &cli.out_dir {
        None => {
            let (_, contents) = &run.outputs[0];
            print!("{contents}");
            for (name, contents) in &run.outputs[1..] {
                eprintln!("{name}: {}", contents.trim_end());
            }
        }
        Some(dir) => {
            if run.outputs.iter().any(|(name, _)| name == "manifest.json") {
                bail!("output name collides with manifest.json");
            }
            let paths = timer.time("write", || write_outputs(dir, &run.outputs))?;
            let inputs = run
                .inputs
                .iter()
                .map(|p| digest_file(p))
                .collect::<Result<Vec<_>>>()?;
            let manifest = RunManifest {
                command: argv.iter().skip(1).cloned().collect::<Vec<_>>().join(" "),
                inputs,
                config: run.config,
                seed: run.seed,
                outputs: paths.iter().map(|p| p.display().to_string()).collect(),
                timings: timer.into_stages(),
            };
            write_outputs(dir, &[("manifest.json".to_string(), json(&manifest)?)])?;
        }
    }
    Ok(run.ok)
}
