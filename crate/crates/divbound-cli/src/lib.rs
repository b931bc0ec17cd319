//! Command-line front end: compute measures, verify inequality chains on
//! supplied distributions, run the fuzzer, and emit machine-readable
//! reports.
//!
//! Exit codes: 0 success, 1 mathematical violation, 2 usage/input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use divbound::bounds::{beta_delta, beta_psi, extrema_g, GFamily};
use divbound::csiszar::{bound_set, format_s, Generator};
use divbound::harness::{errata_compare, fuzz, verify_all, FuzzConfig, DEFAULT_S_VALUES};
use divbound::measures::{divergence, phi_s, MeasureKind};
use divbound::simplex::{Distribution, RatioRange};

#[derive(Parser)]
#[command(name = "divbound", version, about = "Divergence bounds toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one measure on a pair of distribution files.
    Compute {
        /// Measure name, or `phi_s:S` for the type-s information.
        #[arg(long)]
        measure: String,
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        json: bool,
        /// Divide inputs by their sum after the positivity check.
        #[arg(long)]
        normalize: bool,
    },
    /// Run every registered inequality chain on a pair of files.
    Verify {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        /// Comma-separated type-s orders.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Option<Vec<f64>>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        normalize: bool,
    },
    /// Sample random pairs and verify every chain on each.
    Fuzz {
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        conc: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Option<Vec<f64>>,
        #[arg(long)]
        tolerance_scale: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Compare as-printed closed forms against their derived counterparts.
    Errata {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        normalize: bool,
    },
    /// Print the closed-form bound constants for a ratio range.
    Table {
        #[arg(long)]
        r: f64,
        #[arg(long = "R")]
        big_r: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Option<Vec<f64>>,
        #[arg(long)]
        json: bool,
    },
}

/// Format with 9 significant digits, positional where readable.
fn fmt(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..=14).contains(&mag) {
        format!("{:.*}", (8 - mag).max(0) as usize, v)
    } else {
        format!("{:.8e}", v)
    }
}

struct InputError(String);

type CliResult<T> = Result<T, InputError>;

fn parse_entry(text: &str, line: usize, entry: usize) -> CliResult<f64> {
    text.trim().parse::<f64>().map_err(|_| {
        InputError(format!(
            "line {line}, entry {entry}: not a decimal literal: {:?}",
            text.trim()
        ))
    })
}

fn build_distribution(values: Vec<f64>, line: usize, normalize: bool) -> CliResult<Distribution> {
    let values = if normalize {
        if let Some(idx) = values.iter().position(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(InputError(format!(
                "line {line}, entry {}: non-positive value {}",
                idx + 1,
                values[idx]
            )));
        }
        let sum: f64 = values.iter().sum();
        values.iter().map(|v| v / sum).collect()
    } else {
        values
    };
    Distribution::validate(&values)
        .map_err(|err| InputError(format!("line {line}: {err}")))
}

/// Load one or more distributions from a CSV or JSON file. The format is
/// detected from the content: a leading `[` means JSON.
fn load_distributions(path: &Path, normalize: bool) -> CliResult<Vec<Distribution>> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| InputError(format!("{}: {err}", path.display())))?;
    let wrap = |msg: String| InputError(format!("{}: {msg}", path.display()));

    let rows: Vec<Vec<f64>> = if text.trim_start().starts_with('[') {
        let value: Value = serde_json::from_str(&text)
            .map_err(|err| wrap(format!("invalid JSON: {err}")))?;
        let rows = match &value {
            Value::Array(items) if items.iter().all(Value::is_number) => {
                vec![items.clone()]
            }
            Value::Array(items) => items
                .iter()
                .map(|item| match item {
                    Value::Array(inner) => Ok(inner.clone()),
                    _ => Err(wrap("expected an array of numbers or of arrays".into())),
                })
                .collect::<CliResult<Vec<_>>>()?,
            _ => return Err(wrap("expected a JSON array".into())),
        };
        rows.into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, v)| {
                        v.as_f64().ok_or_else(|| {
                            wrap(format!("row {}, entry {}: not a number", i + 1, j + 1))
                        })
                    })
                    .collect()
            })
            .collect::<CliResult<Vec<_>>>()?
    } else {
        text.lines()
            .enumerate()
            .filter(|(_, line)| !line.trim().is_empty())
            .map(|(i, line)| {
                line.split(',')
                    .enumerate()
                    .map(|(j, cell)| parse_entry(cell, i + 1, j + 1))
                    .collect::<CliResult<Vec<f64>>>()
                    .map_err(|InputError(msg)| wrap(msg))
            })
            .collect::<CliResult<Vec<_>>>()?
    };

    if rows.is_empty() {
        return Err(wrap("no distributions found".into()));
    }
    rows.into_iter()
        .enumerate()
        .map(|(i, row)| build_distribution(row, i + 1, normalize).map_err(|InputError(m)| wrap(m)))
        .collect()
}

fn load_pairs(
    p_path: &Path,
    q_path: &Path,
    normalize: bool,
) -> CliResult<Vec<(Distribution, Distribution)>> {
    let ps = load_distributions(p_path, normalize)?;
    let qs = load_distributions(q_path, normalize)?;
    if ps.len() != qs.len() {
        return Err(InputError(format!(
            "{} has {} distributions but {} has {}",
            p_path.display(),
            ps.len(),
            q_path.display(),
            qs.len()
        )));
    }
    Ok(ps.into_iter().zip(qs).collect())
}

enum MeasureSpec {
    Named(MeasureKind),
    TypeS(f64),
}

fn parse_measure(text: &str) -> CliResult<MeasureSpec> {
    if let Some(rest) = text.strip_prefix("phi_s:") {
        let s = rest
            .parse::<f64>()
            .map_err(|_| InputError(format!("bad phi_s order: {rest:?}")))?;
        return Ok(MeasureSpec::TypeS(s));
    }
    MeasureKind::parse(text)
        .map(MeasureSpec::Named)
        .ok_or_else(|| {
            let names: Vec<&str> = MeasureKind::ALL.iter().map(|k| k.name()).collect();
            InputError(format!(
                "unknown measure {text:?}; expected phi_s:S or one of {}",
                names.join(", ")
            ))
        })
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(parse_err) => {
            let rendered = parse_err.render().to_string();
            if parse_err.use_stderr() {
                let _ = write!(err, "{rendered}");
                return 2;
            }
            let _ = write!(out, "{rendered}");
            return 0;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(InputError(message)) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Compute {
            measure,
            p,
            q,
            json,
            normalize,
        } => cmd_compute(&measure, &p, &q, json, normalize, out),
        Command::Verify {
            p,
            q,
            s,
            json,
            normalize,
        } => cmd_verify(&p, &q, s, json, normalize, out),
        Command::Fuzz {
            dims,
            trials,
            seed,
            conc,
            s,
            tolerance_scale,
            json,
        } => cmd_fuzz(dims, trials, seed, conc, s, tolerance_scale, json, out),
        Command::Errata {
            p,
            q,
            json,
            normalize,
        } => cmd_errata(&p, &q, json, normalize, out),
        Command::Table { r, big_r, s, json } => cmd_table(r, big_r, s, json, out),
    }
}

fn math_err(err: divbound::Error) -> InputError {
    InputError(err.to_string())
}

fn emit(out: &mut dyn Write, value: &Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn cmd_compute(
    measure: &str,
    p_path: &Path,
    q_path: &Path,
    json: bool,
    normalize: bool,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let spec = parse_measure(measure)?;
    let pairs = load_pairs(p_path, q_path, normalize)?;
    let mut values = Vec::new();
    for (p, q) in &pairs {
        let value = match &spec {
            MeasureSpec::Named(kind) => divergence(*kind, p, q).map_err(math_err)?,
            MeasureSpec::TypeS(s) => phi_s(*s, p, q).map_err(math_err)?,
        };
        values.push(value);
    }
    if json {
        emit(
            out,
            &json!({
                "command": "compute",
                "inputs": {
                    "measure": measure,
                    "p": p_path.display().to_string(),
                    "q": q_path.display().to_string(),
                    "pairs": pairs.len(),
                },
                "results": values,
                "violations": [],
            }),
        );
    } else {
        for (index, value) in values.iter().enumerate() {
            if values.len() == 1 {
                let _ = writeln!(out, "{measure}\t{}", fmt(*value));
            } else {
                let _ = writeln!(out, "{measure}[{index}]\t{}", fmt(*value));
            }
        }
    }
    Ok(0)
}

fn cmd_verify(
    p_path: &Path,
    q_path: &Path,
    s: Option<Vec<f64>>,
    json: bool,
    normalize: bool,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let s_values = s.unwrap_or_else(|| DEFAULT_S_VALUES.to_vec());
    let pairs = load_pairs(p_path, q_path, normalize)?;
    let mut all_reports = Vec::new();
    let mut violations = Vec::new();
    for (index, (p, q)) in pairs.iter().enumerate() {
        let reports = verify_all(p, q, &s_values).map_err(math_err)?;
        for report in &reports {
            for link in &report.links {
                if !link.pass {
                    violations.push(json!({
                        "pair": index,
                        "chain": report.id,
                        "link": link.label,
                        "slack": link.slack,
                    }));
                }
            }
        }
        all_reports.push(reports);
    }
    let code = if violations.is_empty() { 0 } else { 1 };
    if json {
        emit(
            out,
            &json!({
                "command": "verify",
                "inputs": {
                    "p": p_path.display().to_string(),
                    "q": q_path.display().to_string(),
                    "s_values": s_values,
                    "pairs": pairs.len(),
                },
                "results": all_reports,
                "violations": violations,
            }),
        );
    } else {
        for (index, reports) in all_reports.iter().enumerate() {
            for report in reports {
                if !report.applicable {
                    let _ = writeln!(out, "pair{index} {} not-applicable\t-", report.id);
                    continue;
                }
                for link in &report.links {
                    let _ = writeln!(
                        out,
                        "pair{index} {} [{}] slack\t{}",
                        report.id,
                        link.label,
                        fmt(link.slack)
                    );
                }
            }
        }
        let _ = writeln!(out, "violations\t{}", violations.len());
    }
    Ok(code)
}

fn threads_from_env() -> CliResult<Option<usize>> {
    match std::env::var("DIVBOUND_THREADS") {
        Ok(raw) => match raw.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(InputError(format!(
                "DIVBOUND_THREADS must be a positive integer, got {raw:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_fuzz(
    dims: Option<Vec<usize>>,
    trials: Option<usize>,
    seed: Option<u64>,
    conc: Option<Vec<f64>>,
    s: Option<Vec<f64>>,
    tolerance_scale: Option<f64>,
    json: bool,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let mut config = FuzzConfig::default();
    if let Some(dims) = dims {
        if dims.iter().any(|&n| n < 2) {
            return Err(InputError("every dimension must be >= 2".into()));
        }
        config.dims = dims;
    }
    if let Some(trials) = trials {
        if trials == 0 {
            return Err(InputError("--trials must be >= 1".into()));
        }
        config.trials_per_dim = trials;
    }
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(conc) = conc {
        if conc.iter().any(|&c| !(c > 0.0)) {
            return Err(InputError("every concentration must be positive".into()));
        }
        config.concentrations = conc;
    }
    if let Some(s) = s {
        config.s_values = s;
    }
    if let Some(scale) = tolerance_scale {
        if !(scale > 0.0) {
            return Err(InputError("--tolerance-scale must be positive".into()));
        }
        config.tolerance_scale = scale;
    }
    config.threads = threads_from_env()?;

    let summary = fuzz(&config).map_err(math_err)?;
    let code = if summary.passed() { 0 } else { 1 };
    if json {
        emit(
            out,
            &json!({
                "command": "fuzz",
                "inputs": config,
                "results": {
                    "trials_run": summary.trials_run,
                    "total_links_checked": summary.total_links_checked,
                    "min_slack_per_chain": summary.min_slack_per_chain,
                    "errata_diffs": summary.errata_diffs,
                },
                "violations": summary.violations,
            }),
        );
    } else {
        let _ = writeln!(out, "trials_run\t{}", summary.trials_run);
        let _ = writeln!(out, "total_links_checked\t{}", summary.total_links_checked);
        let _ = writeln!(out, "violations\t{}", summary.violations.len());
        for violation in &summary.violations {
            let _ = writeln!(
                out,
                "violation {} [{}]\t{}",
                violation.chain,
                violation.link,
                fmt(violation.slack)
            );
        }
        for (chain, witness) in &summary.min_slack_per_chain {
            let _ = writeln!(out, "min_slack {chain}\t{}", fmt(witness.slack));
        }
        for diff in &summary.errata_diffs {
            let _ = writeln!(
                out,
                "errata {}:{}\t{} vs {}",
                diff.equation,
                diff.item,
                fmt(diff.as_printed),
                fmt(diff.derived)
            );
        }
    }
    Ok(code)
}

fn cmd_errata(
    p_path: &Path,
    q_path: &Path,
    json: bool,
    normalize: bool,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let pairs = load_pairs(p_path, q_path, normalize)?;
    let mut results = Vec::new();
    for (p, q) in &pairs {
        results.push(errata_compare(p, q).map_err(math_err)?);
    }
    if json {
        emit(
            out,
            &json!({
                "command": "errata",
                "inputs": {
                    "p": p_path.display().to_string(),
                    "q": q_path.display().to_string(),
                    "pairs": pairs.len(),
                },
                "results": results,
                "violations": [],
            }),
        );
    } else {
        for (index, entries) in results.iter().enumerate() {
            for entry in entries {
                let _ = writeln!(
                    out,
                    "pair{index} {}:{} as_printed\t{}",
                    entry.equation,
                    entry.item,
                    fmt(entry.as_printed)
                );
                let _ = writeln!(
                    out,
                    "pair{index} {}:{} derived\t{}",
                    entry.equation,
                    entry.item,
                    fmt(entry.derived)
                );
                let _ = writeln!(
                    out,
                    "pair{index} {}:{} agree\t{}",
                    entry.equation,
                    entry.item,
                    entry.agree
                );
            }
        }
    }
    Ok(0)
}

fn cmd_table(
    r: f64,
    big_r: f64,
    s: Option<Vec<f64>>,
    json: bool,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let range = RatioRange::new(r, big_r)
        .map_err(|err| InputError(format!("invalid range: {err}")))?;
    let s_values = s.unwrap_or_else(|| DEFAULT_S_VALUES.to_vec());

    let mut rows: Vec<(String, f64)> = Vec::new();
    let delta_set = bound_set(&Generator::triangular(), &range);
    rows.push(("alpha_delta".into(), delta_set.alpha));
    rows.push(("beta_delta".into(), beta_delta(&range)));
    rows.push(("gamma_delta".into(), delta_set.gamma));
    let psi_set = bound_set(&Generator::symmetric_chi_square(), &range);
    rows.push(("alpha_psi".into(), psi_set.alpha));
    rows.push(("beta_psi".into(), beta_psi(&range)));
    rows.push((
        "beta_psi_as_printed".into(),
        (big_r - 1.0) * (1.0 - r) * (big_r + r),
    ));
    rows.push(("gamma_psi".into(), psi_set.gamma));
    for &s in &s_values {
        let tag = format_s(s);
        for (family, name) in [(GFamily::Delta, "delta"), (GFamily::Psi, "psi")] {
            let extrema = extrema_g(family, s, Some(&range)).map_err(math_err)?;
            rows.push((format!("m_{name}:s={tag}"), extrema.m));
            rows.push((
                format!("M_{name}:s={tag}"),
                extrema.big_m.expect("bounded range"),
            ));
        }
    }

    if json {
        let results: Value = rows
            .iter()
            .map(|(label, value)| (label.clone(), json!(value)))
            .collect::<serde_json::Map<String, Value>>()
            .into();
        emit(
            out,
            &json!({
                "command": "table",
                "inputs": { "r": r, "R": big_r, "s_values": s_values },
                "results": results,
                "violations": [],
            }),
        );
    } else {
        for (label, value) in &rows {
            let _ = writeln!(out, "{label}\t{}", fmt(*value));
        }
    }
    Ok(0)
}
