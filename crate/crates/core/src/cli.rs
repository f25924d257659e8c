//! Command line front end.

use crate::error::{Error, Result};
use crate::failure_chain::FailureChain;
use crate::oracle::FullStateModel;
use crate::policy::{self, system_mttf, system_survival};
use crate::report;
use crate::simulate::{self, SimulationConfig, DEFAULT_REPLICATIONS};
use crate::spec::{read_json, CostSpec, Format, OutputSpec, PolicySpec, RunSpec};
use crate::structure::{structural_signature, validate_semi_coherent};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "lfmo", version, about = "Repair-threshold policies for systems with simultaneous component failures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact structural signature, tail signature and minimal signature.
    Signature(Common),
    /// One policy (needs --r or a policy in the spec).
    Evaluate(Common),
    /// All thresholds r = 1..n.
    Sweep(Common),
    /// Mean time to system failure without preventive repairs.
    Mttf {
        #[command(flatten)]
        common: Common,
        /// Also print P(T_fail > t) at these times (comma separated).
        #[arg(long, value_delimiter = ',')]
        times: Vec<f64>,
    },
    /// Number of failed components at system failure.
    ProcessSignature(Common),
    /// Monte Carlo estimates over [0, horizon]; an event at exactly the horizon counts.
    Simulate(Common),
    /// Simulation quartiles at several horizons next to the exact values.
    Convergence {
        #[command(flatten)]
        common: Common,
        /// Ascending horizons (comma separated).
        #[arg(long, value_delimiter = ',')]
        horizons: Vec<f64>,
    },
    /// Full-state reference solver (n <= 12); same flags as `evaluate`.
    Oracle(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Complete run description; the flags below override its sections.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub system: Option<PathBuf>,
    #[arg(long)]
    pub subordinator: Option<PathBuf>,
    #[arg(long)]
    pub costs: Option<PathBuf>,
    /// JSON array of exact signature entries, used instead of enumerating the system.
    #[arg(long)]
    pub signature: Option<PathBuf>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<RunSpec> {
        let mut spec = match (&self.spec, &self.system) {
            (Some(p), _) => RunSpec::from_file(p)?,
            (None, Some(_)) => RunSpec {
                system: read_json(self.system.as_ref().unwrap())?,
                subordinator: None,
                costs: None,
                signature: None,
                policy: None,
                simulation: None,
                output: None,
            },
            (None, None) => return Err(Error::validation("give --spec or --system")),
        };
        if let (Some(_), Some(p)) = (&self.spec, &self.system) {
            spec.system = read_json(p)?;
        }
        if let Some(p) = &self.subordinator {
            spec.subordinator = Some(read_json(p)?);
        }
        if let Some(p) = &self.costs {
            spec.costs = Some(read_json::<CostSpec>(p)?);
        }
        if let Some(p) = &self.signature {
            spec.signature = Some(read_json(p)?);
        }
        if let Some(r) = self.r {
            spec.policy = Some(PolicySpec::Threshold { r });
        }
        let sim = spec.simulation.get_or_insert_with(Default::default);
        if self.horizon.is_some() {
            sim.horizon = self.horizon;
        }
        if self.reps.is_some() {
            sim.replications = self.reps;
        }
        if self.seed.is_some() {
            sim.seed = self.seed;
        }
        let output = spec.output.get_or_insert_with(OutputSpec::default);
        if let Some(f) = self.format {
            output.format = f;
        }
        if self.out.is_some() {
            output.path = self.out.clone();
        }
        Ok(spec)
    }
}

fn format_of(spec: &RunSpec) -> Format {
    spec.output.as_ref().map(|o| o.format).unwrap_or_default()
}

/// Policies requested: one r, or all of them.
fn thresholds(spec: &RunSpec, default_sweep: bool) -> Result<Vec<usize>> {
    let n = spec.n();
    match &spec.policy {
        Some(PolicySpec::Threshold { r }) => {
            if *r == 0 || *r > n {
                Err(Error::validation(format!("r must be in 1..n (n = {n}), got {r}")))
            } else {
                Ok(vec![*r])
            }
        }
        Some(PolicySpec::Sweep { sweep: true }) => Ok((1..=n).collect()),
        _ if default_sweep => Ok((1..=n).collect()),
        _ => Err(Error::validation("no policy given: use --r or a policy section")),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn sim_config(spec: &RunSpec, r: usize) -> Result<SimulationConfig> {
    let sim = spec.simulation.clone().unwrap_or_default();
    Ok(SimulationConfig {
        structure: spec.system.clone(),
        psi: spec.psi_table()?,
        r,
        costs: spec.cost_model()?,
        horizon: sim.horizon.unwrap_or(1e4),
        replications: sim.replications.unwrap_or(DEFAULT_REPLICATIONS),
        seed: sim.seed.unwrap_or(0),
    })
}

fn validated(spec: &RunSpec) -> Result<()> {
    validate_semi_coherent(&spec.system).into_result()
}

/// Run a parsed command, returning the rendered artifact.
pub fn render(command: &Command) -> Result<(String, Option<PathBuf>)> {
    let common = match command {
        Command::Signature(c)
        | Command::Evaluate(c)
        | Command::Sweep(c)
        | Command::ProcessSignature(c)
        | Command::Simulate(c)
        | Command::Oracle(c) => c,
        Command::Mttf { common, .. } | Command::Convergence { common, .. } => common,
    };
    let spec = common.load()?;
    validated(&spec)?;
    let fmt = format_of(&spec);
    let path = spec.output.as_ref().and_then(|o| o.path.clone());
    let text = match command {
        Command::Signature(_) => {
            let sig = structural_signature(&spec.system)?;
            match fmt {
                Format::Csv => report::signature_csv(&sig),
                Format::Json => to_json(&json!({
                    "n": sig.n(),
                    "s": sig.s_strings(),
                    "s_float": sig.s_f64(),
                    "sbar": sig.sbar().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "a": sig.a().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "a_float": sig.a_f64(),
                }))?,
            }
        }
        Command::Evaluate(_) | Command::Sweep(_) => {
            let sweep = matches!(command, Command::Sweep(_));
            let rs = if sweep { (1..=spec.n()).collect() } else { thresholds(&spec, false)? };
            let sig = spec.signature_weights()?;
            let chain = FailureChain::new(&spec.psi_table()?)?;
            let costs = spec.cost_model()?;
            let rows = if sweep {
                policy::sweep_policies(&sig, &chain, &costs)?
            } else {
                rs.iter().map(|&r| policy::evaluate_policy(&sig, &chain, r, &costs)).collect::<Result<Vec<_>>>()?
            };
            match (fmt, sweep) {
                (Format::Csv, true) => report::sweep_csv(&rows),
                (Format::Csv, false) => report::evaluation_csv(&rows),
                (Format::Json, true) => to_json(&rows)?,
                (Format::Json, false) => to_json(&rows[0])?,
            }
        }
        Command::Mttf { times, .. } => {
            let sig = spec.signature_weights()?;
            let chain = FailureChain::new(&spec.psi_table()?)?;
            let mttf = system_mttf(&sig, &chain)?;
            let surv = times
                .iter()
                .map(|&t| Ok((t, system_survival(&sig, &chain, t)?)))
                .collect::<Result<Vec<_>>>()?;
            match fmt {
                Format::Csv => {
                    let mut s = format!("mttf\n{}\n", report::g(mttf));
                    if !surv.is_empty() {
                        s.push_str("t,survival\n");
                        for (t, v) in surv {
                            s.push_str(&format!("{},{}\n", report::g(t), report::g(v)));
                        }
                    }
                    s
                }
                Format::Json => to_json(&json!({
                    "mttf": mttf,
                    "survival": surv.iter().map(|(t, v)| json!({"t": t, "survival": v})).collect::<Vec<_>>(),
                }))?,
            }
        }
        Command::ProcessSignature(_) => {
            let sig = spec.signature_weights()?;
            let chain = FailureChain::new(&spec.psi_table()?)?;
            let q = policy::process_signature(&sig, &chain)?;
            match fmt {
                Format::Csv => {
                    let mut s = String::from("j,q,s\n");
                    for (j, (qj, sj)) in q.iter().zip(sig.s()).enumerate() {
                        s.push_str(&format!("{},{},{}\n", j + 1, report::g(*qj), report::g(*sj)));
                    }
                    s
                }
                Format::Json => to_json(&json!({"q": q, "s": sig.s()}))?,
            }
        }
        Command::Simulate(_) => {
            let r = thresholds(&spec, false)?[0];
            let res = simulate::simulate_policy(&sim_config(&spec, r)?)?;
            match fmt {
                Format::Csv => report::simulation_csv(&res),
                Format::Json => to_json(&res)?,
            }
        }
        Command::Convergence { horizons, .. } => {
            let horizons = if !horizons.is_empty() {
                horizons.clone()
            } else {
                spec.simulation
                    .as_ref()
                    .and_then(|s| s.horizons.clone())
                    .unwrap_or_else(|| vec![1e1, 1e2, 1e3, 1e4])
            };
            let mut rows = Vec::new();
            for r in thresholds(&spec, true)? {
                rows.extend(simulate::convergence_study(&sim_config(&spec, r)?, &horizons)?);
            }
            match fmt {
                Format::Csv => report::convergence_csv(&rows),
                Format::Json => to_json(&rows)?,
            }
        }
        Command::Oracle(_) => {
            let model = FullStateModel::new(&spec.system, &spec.psi_table()?)?;
            let costs = spec.cost_model()?;
            let rows = thresholds(&spec, true)?
                .into_iter()
                .map(|r| model.cycle_metrics(r, &costs))
                .collect::<Result<Vec<_>>>()?;
            match fmt {
                Format::Csv => report::oracle_csv(&rows),
                Format::Json if rows.len() == 1 => to_json(&rows[0])?,
                Format::Json => to_json(&rows)?,
            }
        }
    };
    Ok((text, path))
}

/// Parse arguments, run, print; returns the process exit code
/// (0 success, 1 invalid input, 2 numeric instability).
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match render(&cli.command).and_then(|(text, path)| emit(&text, path)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(text: &str, path: Option<PathBuf>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(&p, text)
            .map_err(|e| Error::validation(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
