//! `ptqm`: check, hermitize and evolve non-Hermitian Hamiltonians from the
//! command line.
//!
//! Every subcommand prints its primary output to stdout, or with `--out-dir`
//! writes it to a file there together with `manifest.json`.
//!
//! Exit codes: 0 success, 2 negative verdict (rejected, not symmetric, a
//! failed reproduction), 1 error.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ptqm::acceptability::{
    AcceptConfig, DEFAULT_COND_CAP, DEFAULT_CONSERVATION_TOL, DEFAULT_HERMITIAN_TOL,
    DEFAULT_SPECTRUM_TOL,
};
use ptqm::evolution::{DEFAULT_GRID_POINTS, DEFAULT_ROOT_POLISH_TOL};

#[derive(Parser, Debug)]
#[command(
    name = "ptqm",
    version,
    about = "Non-Hermitian Hamiltonians as Hermitian ones in a non-orthogonal basis"
)]
pub struct Cli {
    /// Write outputs and manifest.json into this directory instead of stdout.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    /// Seed for sampled states.
    #[arg(long, global = true, env = "PTQM_SEED", default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Test H = P·conj(H)·P.
    CheckPt {
        #[arg(long = "h")]
        h: PathBuf,
        #[arg(long = "p")]
        p: PathBuf,
        #[arg(long, default_value_t = ptqm::ptsym::DEFAULT_TOL)]
        tol: f64,
    },
    /// Run the acceptability criteria.
    Accept {
        #[arg(long = "h")]
        h: PathBuf,
        #[command(flatten)]
        tols: AcceptArgs,
    },
    /// Factor an accepted H as a basis change of a real diagonal matrix.
    Hermitize {
        #[arg(long = "h")]
        h: PathBuf,
        #[command(flatten)]
        tols: AcceptArgs,
    },
    /// Rewrite a Hermitian H in the basis B: H′ = B⁻¹·H·B, C = B†·B.
    Transform {
        #[arg(long = "h")]
        h: PathBuf,
        #[arg(long = "b")]
        b: PathBuf,
    },
    /// Evolve a state: exp(−i·H·t/ħ)·ψ₀.
    Evolve {
        #[arg(long = "h")]
        h: PathBuf,
        /// Metric; reports the physical norm of the evolved state when given.
        #[arg(long = "c")]
        c: Option<PathBuf>,
        #[arg(long)]
        psi0: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },
    /// Spin-1/2 first-passage sweep over α, as CSV.
    Brach {
        #[arg(long)]
        epsilon: f64,
        /// `a0:a1:n`, n evenly spaced values from a0 to a1 inclusive.
        #[arg(long)]
        alphas: String,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        #[arg(long, default_value_t = DEFAULT_ROOT_POLISH_TOL)]
        root_polish_tol: f64,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Demonstrations.
    #[command(subcommand)]
    Demo(Demo),
    /// Recompute the worked examples and check them.
    #[command(subcommand)]
    Repro(Repro),
}

#[derive(Subcommand, Debug)]
pub enum Demo {
    /// Low spectrum of ½p² + ½x² + i·x truncated to n_max levels.
    ShiftedOsc {
        #[arg(long, default_value_t = 64)]
        nmax: usize,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Repro {
    /// H = diag(1, i, −i) with A(a, b, c) = (a*, c*, b*).
    Antilinear,
    /// The Jordan-block pair P = [[1, 1], [0, −1]], H = [[1, 5i], [0, 1]].
    Counterexample,
    /// H′ and C for ε·σx in the α basis.
    SpinHalf {
        #[arg(long, default_value_t = ptqm::repro::DEFAULT_ALPHA)]
        alpha: f64,
    },
    /// τ(α) sweep and its limits.
    Brachistochrone,
    /// Shifted-oscillator low spectrum.
    Oscillator {
        #[arg(long, default_value_t = ptqm::repro::DEFAULT_NMAX)]
        nmax: usize,
    },
    /// Every reproduction.
    All,
}

#[derive(Args, Debug, Clone)]
pub struct AcceptArgs {
    #[arg(long, default_value_t = DEFAULT_SPECTRUM_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_COND_CAP)]
    pub cond_cap: f64,
    #[arg(long, default_value_t = DEFAULT_HERMITIAN_TOL)]
    pub hermitian_tol: f64,
    #[arg(long, default_value_t = DEFAULT_CONSERVATION_TOL)]
    pub conservation_tol: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 41)]
    pub t_points: usize,
    #[arg(long, default_value_t = 16)]
    pub n_states: usize,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
}

impl AcceptArgs {
    pub fn config(&self, seed: u64) -> AcceptConfig {
        AcceptConfig {
            spectrum_tol: self.tol,
            cond_cap: self.cond_cap,
            hermitian_tol: self.hermitian_tol,
            conservation_tol: self.conservation_tol,
            t_max: self.t_max,
            t_points: self.t_points,
            n_states: self.n_states,
            seed,
            hbar: self.hbar,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let argv: Vec<String> = std::env::args().collect();
    match commands::run(&cli, &argv) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
