use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use labor_flows::report::{
    fpt_csv, fpt_json, fpt_report, matrix_csv, matrix_json, matrix_pretty, shares_csv, shares_json,
};
use labor_flows::{
    compute_shares, efpt_targets, estimate_transition_matrix, fixture, fixtures,
    generate_synthetic_panel, parse_panel_file, AgeBand, CohortFilter, Error, FallbackPolicy,
    LaborState, MacroRegion, OutputFormat, PanelDataset, PanelFormat, QuarterId, RunConfig, Sex,
    SyntheticPanelSpec, TransitionMatrix, Verdict, N_STATES,
};
use serde_json::{json, Value};

/// Labor-market state shares, transition matrices and first-passage times.
#[derive(Parser)]
#[command(name = "labor-flows", version)]
struct Cli {
    /// key=value file with epsilon, max_horizon, min_support, format, fallback_policy.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Cap on the number of series terms for the expected first-passage time.
    #[arg(long, global = true)]
    max_horizon: Option<usize>,
    /// Rows with fewer departures than this trigger a warning.
    #[arg(long, global = true)]
    min_support: Option<f64>,
    #[arg(long, global = true)]
    fallback_policy: Option<FallbackPolicy>,
    /// Turn empty cohorts and divergent first-passage times into failures.
    #[arg(long, global = true)]
    strict: bool,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// State shares of a cohort in one quarter.
    Shares {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long)]
        quarter: QuarterId,
    },
    /// Transition matrix from `--quarter` to the next quarter.
    Transitions {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long)]
        quarter: QuarterId,
        /// Two-decimal table instead of csv/json.
        #[arg(long)]
        pretty: bool,
    },
    /// First-passage distribution and expected first-passage time.
    Fpt {
        #[arg(long, conflicts_with = "data", required_unless_present = "data")]
        fixture: Option<String>,
        #[command(flatten)]
        data: OptDataArgs,
        #[command(flatten)]
        filter: FilterArgs,
        /// From-quarter of the estimated matrix (with --data).
        #[arg(long, requires = "data")]
        quarter: Option<QuarterId>,
        #[arg(long)]
        from: LaborState,
        #[arg(long)]
        to: LaborState,
        /// Number of quarters of the distribution to emit.
        #[arg(long, default_value_t = 40)]
        horizon: usize,
    },
    /// Synthetic pair-rows panel drawn from a fixture matrix.
    Simulate {
        #[arg(long)]
        fixture: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Panel length in quarters; 2 puts every pair in the fixture's quarter.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
        quarters: u32,
        /// First quarter; defaults to the fixture's from-quarter.
        #[arg(long)]
        start: Option<QuarterId>,
    },
    /// List embedded fixtures, print one, or list the published EFPT targets.
    Fixtures {
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long, conflicts_with = "fixture")]
        targets: bool,
        #[arg(long, requires = "fixture")]
        pretty: bool,
    },
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    data: PathBuf,
    /// Input holds one row per person-quarter instead of one row per pair.
    #[arg(long)]
    wave_rows: bool,
}

#[derive(Args)]
struct OptDataArgs {
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, requires = "data")]
    wave_rows: bool,
}

#[derive(Args)]
struct FilterArgs {
    /// teens, early, late or preadult.
    #[arg(long)]
    age: Option<AgeBand>,
    #[arg(long)]
    sex: Option<Sex>,
    #[arg(long, value_parser = parse_citizen)]
    citizen: Option<bool>,
    #[arg(long)]
    region: Option<MacroRegion>,
}

impl FilterArgs {
    fn filter(&self) -> CohortFilter {
        let mut f = self.age.map_or_else(CohortFilter::all, CohortFilter::age);
        if let Some(s) = self.sex {
            f = f.with_sex(s);
        }
        if let Some(c) = self.citizen {
            f = f.with_citizen(c);
        }
        if let Some(r) = self.region {
            f = f.with_region(r);
        }
        f
    }
}

fn parse_citizen(s: &str) -> Result<bool, String> {
    match s {
        "1" => Ok(true),
        "0" => Ok(false),
        _ => Err(format!("expected 0 or 1, got {s:?}")),
    }
}

fn run_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(x) = cli.format {
        cfg.format = x;
    }
    if let Some(x) = cli.epsilon {
        cfg.epsilon = x;
    }
    if let Some(x) = cli.max_horizon {
        cfg.max_horizon = x;
    }
    if let Some(x) = cli.min_support {
        cfg.min_support = x;
    }
    if let Some(x) = cli.fallback_policy {
        cfg.fallback_policy = x;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load(path: &Path, wave_rows: bool) -> Result<PanelDataset> {
    let format = if wave_rows { PanelFormat::WaveRows } else { PanelFormat::PairRows };
    let (data, report) = parse_panel_file(path, format)?;
    for r in &report.rejections {
        eprintln!("warning: {}:{}: {}", path.display(), r.line, r.reason);
    }
    if report.filtered_out_of_range > 0 {
        eprintln!(
            "note: {} rows outside ages 15-34 ignored",
            report.filtered_out_of_range
        );
    }
    Ok(data)
}

fn estimate(data: &PanelDataset, filter: &CohortFilter, q: QuarterId, cfg: &RunConfig) -> Result<TransitionMatrix> {
    let m = estimate_transition_matrix(data, filter, q)?.with_fallback_policy(cfg.fallback_policy);
    for s in m.thin_rows(cfg.min_support) {
        let n = m.row_counts.map_or(0.0, |c| c[s.index()]);
        eprintln!("warning: row {s} rests on {n} departures (min_support {})", cfg.min_support);
    }
    for s in &m.fallback_rows {
        eprintln!("warning: row {s} has no departures; uniform 1/7 fallback");
    }
    Ok(m)
}

fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// An empty cohort is reported, and only fails under `--strict`.
fn empty_cohort(err: &Error, strict: bool) -> Result<ExitCode> {
    eprintln!("{err}");
    if strict {
        bail!("empty cohort under --strict");
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = run_config(&cli)?;
    let json = cfg.format == OutputFormat::Json;
    match &cli.command {
        Command::Shares { data, filter, quarter } => {
            let d = load(&data.data, data.wave_rows)?;
            let t = match compute_shares(&d, &filter.filter(), *quarter) {
                Err(e @ Error::EmptyCohort { .. }) => return empty_cohort(&e, cli.strict),
                other => other?,
            };
            let text = if json { render(&shares_json(&t)) } else { shares_csv(&t) };
            emit(&cli.out, &text)?;
        }
        Command::Transitions { data, filter, quarter, pretty } => {
            let d = load(&data.data, data.wave_rows)?;
            let f = filter.filter();
            if compute_shares(&d, &f, *quarter).is_err() {
                let e = Error::EmptyCohort { quarter: quarter.to_string(), filter: f.to_string() };
                return empty_cohort(&e, cli.strict);
            }
            let m = estimate(&d, &f, *quarter, &cfg)?;
            let text = if *pretty {
                matrix_pretty(&m)
            } else if json {
                render(&matrix_json(&m))
            } else {
                matrix_csv(&m)
            };
            emit(&cli.out, &text)?;
        }
        Command::Fpt { fixture: name, data, filter, quarter, from, to, horizon } => {
            let (matrix, label) = match (name, &data.data) {
                (Some(name), _) => {
                    let fx = fixture(name)?;
                    (fx.transition_matrix().with_fallback_policy(cfg.fallback_policy), fx.name.to_string())
                }
                (None, Some(path)) => {
                    let Some(q) = quarter else { bail!("--quarter is required with --data") };
                    let d = load(path, data.wave_rows)?;
                    let f = filter.filter();
                    if compute_shares(&d, &f, *q).is_err() {
                        let e = Error::EmptyCohort { quarter: q.to_string(), filter: f.to_string() };
                        return empty_cohort(&e, cli.strict);
                    }
                    (estimate(&d, &f, *q, &cfg)?, format!("{} {q} {f}", path.display()))
                }
                (None, None) => bail!("one of --fixture or --data is required"),
            };
            let chain = matrix.chain()?;
            let r = fpt_report(&chain, label, from.index(), to.index(), *horizon, &cfg)?;
            let text = if json { render(&fpt_json(&r)) } else { fpt_csv(&r) };
            emit(&cli.out, &text)?;
            if r.diagnostic.verdict != Verdict::WellDefined {
                let why = r.linear_error.as_deref().unwrap_or("series did not converge");
                eprintln!("warning: {from}->{to} verdict {}: {why}", r.diagnostic.verdict);
                if cli.strict && r.diagnostic.verdict == Verdict::Divergent {
                    bail!("divergent first-passage time under --strict");
                }
            }
        }
        Command::Simulate { fixture: name, n, seed, quarters, start } => {
            let Some(out) = &cli.out else { bail!("simulate needs --out PATH") };
            let fx = fixture(name)?;
            let spec = SyntheticPanelSpec::new(
                fx.renormalized(),
                [1.0 / N_STATES as f64; N_STATES],
                usize::try_from(*n)?,
                start.unwrap_or_else(|| fx.from_quarter()),
                *quarters,
                *seed,
            );
            let d = generate_synthetic_panel(&spec)?;
            let file = fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
            d.write_pair_rows(io::BufWriter::new(file))?;
            eprintln!("wrote {} pairs to {}", d.len(), out.display());
        }
        Command::Fixtures { fixture: Some(name), pretty, .. } => {
            let m = fixture(name)?.transition_matrix();
            let text = if *pretty {
                matrix_pretty(&m)
            } else if json {
                render(&matrix_json(&m))
            } else {
                matrix_csv(&m)
            };
            emit(&cli.out, &text)?;
        }
        Command::Fixtures { targets: true, .. } => emit(&cli.out, &targets_text(json))?,
        Command::Fixtures { .. } => emit(&cli.out, &fixture_list(json))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn fixture_list(json: bool) -> String {
    let rows: Vec<Value> = fixtures()
        .iter()
        .map(|f| {
            json!({
                "name": f.name,
                "cohort": f.cohort.map(AgeBand::label),
                "from_quarter": f.from_quarter(),
                "to_quarter": f.to_quarter(),
                "provenance": f.provenance,
            })
        })
        .collect();
    if json {
        return render(&Value::Array(rows));
    }
    let mut out = String::from("name,cohort,from_quarter,to_quarter\n");
    for f in fixtures() {
        let cohort = f.cohort.map_or("", AgeBand::label);
        out.push_str(&format!("{},{},{},{}\n", f.name, cohort, f.from_quarter(), f.to_quarter()));
    }
    out
}

fn targets_text(json: bool) -> String {
    if json {
        return render(&serde_json::to_value(efpt_targets()).expect("targets serialize"));
    }
    let mut out = String::from("category,target,quarter,years,fixture\n");
    for t in efpt_targets() {
        out.push_str(&format!(
            "{},{},{}.{},{},{}\n",
            t.category,
            t.target,
            t.quarter.0,
            t.quarter.1,
            t.years,
            t.fixture.unwrap_or("")
        ));
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
