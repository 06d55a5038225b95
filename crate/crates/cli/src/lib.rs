//! Subcommands of the `tfdlab` binary. Each command renders its CSV (and
//! optional SVG) into memory first; [`emit`] does all file writes.

pub mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};

use tfdlab::circuits::{
    bitstring, count_cnots, synthesis_fidelity, thermal_circuit, thermal_sweep, write_circuit,
    SweepConfig,
};
use tfdlab::discreteqm::{
    default_grid, spectrum_compare, LatticeSpec, HERMITE_MAX_ORDER, MAX_QUBITS,
};
use tfdlab::linalg::unitary_from_hermitian;
use tfdlab::tfd::{
    bogoliubov_generator, exact_energy_boson, exact_energy_fermion, thermal_position_wavefunction,
    ThermalParams,
};
use tfdlab::vqe::spectrum_vs_thermal_report;

use svg::{Series, Style};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "tfdlab",
    version,
    about = "Thermofield dynamics on a simulated two-qubit register"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Oscillator eigenvalues in the position and energy bases.
    Spectrum,
    /// Thermal ground state psi(x, x~) on a 201 x 201 grid over [-5, 5].
    Wavefunction,
    /// Shot histograms of the thermal circuit over a beta grid.
    Sweep,
    /// VQE on the thermal fermion Hamiltonian, with its convergence trace.
    Vqe,
    /// Circuit for exp(-iG(beta)) and its synthesis fidelity.
    Decompose,
    /// Closed-form fermion and boson thermal energies over a beta grid.
    ExactEnergy,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Wavefunction => "wavefunction",
            Command::Sweep => "sweep",
            Command::Vqe => "vqe",
            Command::Decompose => "decompose",
            Command::ExactEnergy => "exact-energy",
        }
    }
}

/// Shared options. Every flag falls back to `TFDLAB_<NAME>` and then to the default.
#[derive(Args, Debug, Clone, PartialEq)]
pub struct Options {
    /// Register size for `spectrum` (N = 2^qubits lattice sites).
    #[arg(long, global = true, env = "TFDLAB_QUBITS", default_value_t = 4)]
    pub qubits: usize,
    #[arg(long, global = true, env = "TFDLAB_BETA", default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, global = true, env = "TFDLAB_BETA_MIN", default_value_t = 0.01)]
    pub beta_min: f64,
    #[arg(long, global = true, env = "TFDLAB_BETA_MAX", default_value_t = 10.0)]
    pub beta_max: f64,
    #[arg(long, global = true, env = "TFDLAB_STEPS", default_value_t = 200)]
    pub steps: usize,
    #[arg(long, global = true, env = "TFDLAB_MASS", default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, global = true, env = "TFDLAB_SHOTS", default_value_t = 1000)]
    pub shots: u64,
    #[arg(long, global = true, env = "TFDLAB_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Oscillator levels kept per mode.
    #[arg(long, global = true, env = "TFDLAB_CUTOFF", default_value_t = 16)]
    pub cutoff: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true, env = "TFDLAB_OUT")]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot next to the output.
    #[arg(long, global = true, env = "TFDLAB_SVG")]
    pub svg: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            qubits: 4,
            beta: 1.0,
            beta_min: 0.01,
            beta_max: 10.0,
            steps: 200,
            mass: 1.0,
            shots: 1000,
            seed: 42,
            cutoff: 16,
            out: None,
            svg: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub options: Options,
}

impl RunConfig {
    pub fn new(command: Command, options: Options) -> Result<Self> {
        let o = &options;
        ensure!(
            (1..=MAX_QUBITS).contains(&o.qubits),
            "--qubits must be in 1..={MAX_QUBITS}, got {}",
            o.qubits
        );
        ensure!(
            o.beta.is_finite() && o.beta >= 0.0,
            "--beta must be finite and >= 0, got {}",
            o.beta
        );
        ensure!(
            o.mass.is_finite() && o.mass > 0.0,
            "--mass must be finite and > 0, got {}",
            o.mass
        );
        ensure!(
            o.beta_min.is_finite()
                && o.beta_max.is_finite()
                && 0.0 <= o.beta_min
                && o.beta_min < o.beta_max,
            "need 0 <= --beta-min < --beta-max, got {} and {}",
            o.beta_min,
            o.beta_max
        );
        ensure!(o.steps >= 2, "--steps must be at least 2, got {}", o.steps);
        ensure!(o.shots >= 1, "--shots must be at least 1");
        ensure!(
            (2..=HERMITE_MAX_ORDER + 1).contains(&o.cutoff),
            "--cutoff must be in 2..={}, got {}",
            HERMITE_MAX_ORDER + 1,
            o.cutoff
        );
        Ok(Self { command, options })
    }

    pub fn from_cli(cli: Cli) -> Result<Self> {
        Self::new(cli.command, cli.options)
    }

    fn params(&self) -> Result<ThermalParams> {
        Ok(ThermalParams::new(self.options.beta, self.options.mass)?)
    }
}

/// Rendered results of one subcommand.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Output {
    pub primary: String,
    /// Written to `<stem>_report.csv`, or appended to stdout after a blank line.
    pub report: Option<String>,
    pub svg: Option<String>,
    /// Non-fatal notes for stderr.
    pub warnings: Vec<String>,
}

/// Fixed 17-significant-digit scientific notation, independent of locale.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn run(config: &RunConfig) -> Result<Output> {
    match config.command {
        Command::Spectrum => cmd_spectrum(config),
        Command::Wavefunction => cmd_wavefunction(config),
        Command::Sweep => cmd_sweep(config),
        Command::Vqe => cmd_vqe(config),
        Command::Decompose => cmd_decompose(config),
        Command::ExactEnergy => cmd_exact_energy(config),
    }
}

pub fn cmd_spectrum(config: &RunConfig) -> Result<Output> {
    let spec = LatticeSpec::new(config.options.qubits)?;
    let rows = spectrum_compare(&spec)?;
    let mut csv = String::from("index,lambda_position,lambda_energy\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{}",
            r.index,
            num(r.lambda_position),
            num(r.lambda_energy)
        );
    }
    let svg = config.options.svg.then(|| {
        svg::line_chart(
            &format!("Oscillator spectrum, N = {}", spec.num_sites()),
            "index",
            "eigenvalue",
            &[
                Series::new(
                    "position basis",
                    rows.iter()
                        .map(|r| (r.index as f64, r.lambda_position))
                        .collect(),
                    Style::Markers,
                ),
                Series::new(
                    "energy basis",
                    rows.iter()
                        .map(|r| (r.index as f64, r.lambda_energy))
                        .collect(),
                    Style::Line,
                ),
            ],
        )
    });
    Ok(Output {
        primary: csv,
        svg,
        ..Output::default()
    })
}

pub fn cmd_wavefunction(config: &RunConfig) -> Result<Output> {
    let grid =
        thermal_position_wavefunction(&config.params()?, &default_grid(), config.options.cutoff)?;
    let n = grid.xs.len();
    let mut csv = String::with_capacity(n * n * 72);
    csv.push_str("x,x_tilde,value\n");
    for k in 0..n {
        for l in 0..n {
            let _ = writeln!(
                csv,
                "{},{},{}",
                num(grid.xs[k]),
                num(grid.xs[l]),
                num(grid.get(k, l))
            );
        }
    }
    let svg = config.options.svg.then(|| {
        svg::heatmap(
            &format!("Thermal ground state, beta = {}", config.options.beta),
            "x",
            "x~",
            &grid.xs,
            &grid.values,
        )
    });
    Ok(Output {
        primary: csv,
        svg,
        ..Output::default()
    })
}

pub fn cmd_sweep(config: &RunConfig) -> Result<Output> {
    let o = &config.options;
    let histograms = thermal_sweep(&SweepConfig {
        beta_min: o.beta_min,
        beta_max: o.beta_max,
        steps: o.steps,
        shots: o.shots,
        mass: o.mass,
        seed: o.seed,
    })?;
    let mut csv = String::from("beta,outcome,count,fraction\n");
    for h in &histograms {
        let beta = h.beta.context("sweep histogram without beta")?;
        for k in 0..4 {
            let key = bitstring(k, 2);
            let _ = writeln!(
                csv,
                "{},{},{},{}",
                num(beta),
                key,
                h.count(&key),
                num(h.fraction(&key))
            );
        }
    }
    let svg = o.svg.then(|| {
        let series = |key: &str| -> Vec<(f64, f64)> {
            histograms
                .iter()
                .map(|h| (h.beta.unwrap_or(f64::NAN), h.fraction(key)))
                .collect()
        };
        let expected: Vec<(f64, f64)> = histograms
            .iter()
            .filter_map(|h| h.beta)
            .map(|b| {
                let w = (-b * o.mass).exp();
                (b, w / (1.0 + w))
            })
            .collect();
        svg::line_chart(
            "Measured outcomes of the thermal circuit",
            "beta",
            "fraction",
            &[
                Series::new("00", series("00"), Style::Markers),
                Series::new("11", series("11"), Style::Markers),
                Series::new("sin^2 theta", expected, Style::Line),
            ],
        )
    });
    Ok(Output {
        primary: csv,
        svg,
        ..Output::default()
    })
}

pub fn cmd_vqe(config: &RunConfig) -> Result<Output> {
    let report = spectrum_vs_thermal_report(&config.params()?, config.options.seed)?;
    let mut trace = String::from("eval_index,energy\n");
    for &(i, e) in &report.vqe.trace {
        let _ = writeln!(trace, "{i},{}", num(e));
    }
    let row = format!(
        "beta,mass,lambda_min_h,lambda_min_h_beta,vqe_energy,thermal_energy_exact\n{},{},{},{},{},{}\n",
        num(report.beta),
        num(report.mass),
        num(report.lambda_min_h),
        num(report.lambda_min_h_beta),
        num(report.vqe_energy),
        num(report.thermal_energy_exact)
    );
    let mut warnings = Vec::new();
    if !report.vqe.converged {
        warnings.push(format!(
            "optimizer stopped at the evaluation budget before reaching tolerance (energy {})",
            report.vqe_energy
        ));
    }
    let svg = config.options.svg.then(|| {
        svg::line_chart(
            "VQE convergence",
            "evaluation",
            "energy",
            &[Series::new(
                "energy",
                report
                    .vqe
                    .trace
                    .iter()
                    .map(|&(i, e)| (i as f64, e))
                    .collect(),
                Style::Line,
            )],
        )
    });
    Ok(Output {
        primary: trace,
        report: Some(row),
        svg,
        warnings,
    })
}

/// Fidelity below this fails the command.
pub const MIN_FIDELITY: f64 = 1.0 - 1e-9;

pub fn cmd_decompose(config: &RunConfig) -> Result<Output> {
    let params = config.params()?;
    let u = unitary_from_hermitian(&bogoliubov_generator(&params), -1.0)?;
    let gates = thermal_circuit(&params)?;
    let fidelity = synthesis_fidelity(&gates, &u)?;
    if fidelity < MIN_FIDELITY {
        bail!("synthesised circuit has fidelity {fidelity}, below {MIN_FIDELITY}");
    }
    let mut text = format!(
        "# exp(-iG) for beta={} mass={}\n# qubits 2, cnots {}\n",
        num(params.beta()),
        num(params.mass()),
        count_cnots(&gates)
    );
    text.push_str(&write_circuit(&gates));
    if !text.ends_with('\n') {
        text.push('\n');
    }
    let _ = writeln!(text, "# fidelity {}", num(fidelity));
    Ok(Output {
        primary: text,
        ..Output::default()
    })
}

pub fn cmd_exact_energy(config: &RunConfig) -> Result<Output> {
    let o = &config.options;
    let betas = tfdlab::circuits::beta_grid(o.beta_min, o.beta_max, o.steps)?;
    let mut rows = Vec::with_capacity(betas.len());
    for &beta in &betas {
        let params = ThermalParams::new(beta, o.mass)?;
        rows.push((
            beta,
            exact_energy_fermion(&params),
            exact_energy_boson(&params, o.cutoff - 1)?,
        ));
    }
    let mut csv = String::from("beta,fermion_energy,boson_energy\n");
    for &(b, f, e) in &rows {
        let _ = writeln!(csv, "{},{},{}", num(b), num(f), num(e));
    }
    let svg = o.svg.then(|| {
        svg::line_chart(
            "Thermal energy",
            "beta",
            "energy",
            &[
                Series::new(
                    "fermion",
                    rows.iter().map(|r| (r.0, r.1)).collect(),
                    Style::Line,
                ),
                Series::new(
                    "boson",
                    rows.iter().map(|r| (r.0, r.2)).collect(),
                    Style::Line,
                ),
            ],
        )
    });
    Ok(Output {
        primary: csv,
        svg,
        ..Output::default()
    })
}

/// `<dir>/<stem>_report.csv` next to `out`.
pub fn report_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    out.with_file_name(format!("{stem}_report.csv"))
}

pub fn svg_path(config: &RunConfig) -> PathBuf {
    match &config.options.out {
        Some(out) => out.with_extension("svg"),
        None => PathBuf::from(format!("{}.svg", config.command.name())),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes `output` to the configured destinations, stdout standing in for a missing `--out`.
pub fn emit(config: &RunConfig, output: &Output, stdout: &mut impl std::io::Write) -> Result<()> {
    match &config.options.out {
        Some(path) => {
            write_file(path, &output.primary)?;
            if let Some(report) = &output.report {
                write_file(&report_path(path), report)?;
            }
        }
        None => {
            stdout.write_all(output.primary.as_bytes())?;
            if let Some(report) = &output.report {
                stdout.write_all(b"\n")?;
                stdout.write_all(report.as_bytes())?;
            }
            stdout.flush()?;
        }
    }
    if let Some(svg) = &output.svg {
        write_file(&svg_path(config), svg)?;
    }
    Ok(())
}
