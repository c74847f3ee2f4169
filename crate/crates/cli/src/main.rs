mod args;
mod error;
mod eval;
mod render;

use std::io::Write;
use std::process::ExitCode;

use appell_core::catalog::{list_identities, run_suite, Group, Mode, Panel, SuiteStatus};
use appell_core::series::TruncationPolicy;
use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use error::{CliError, CliResult, EXIT_DIVERGED, EXIT_FAILING, EXIT_USAGE};
use eval::{order_axes, parse_sweep, Assignment};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("appell: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn policy(cli: &Cli) -> CliResult<TruncationPolicy> {
    let mut pol = TruncationPolicy::default();
    if let Ok(text) = std::env::var("APPELL_MAX_TERMS") {
        let cap: usize = text
            .trim()
            .parse()
            .ok()
            .filter(|n| *n >= 1)
            .ok_or_else(|| CliError::Usage(format!("APPELL_MAX_TERMS must be a positive integer, got `{text}`")))?;
        pol = pol.with_caps(cap);
    }
    if let Some(cap) = cli.max_terms {
        pol = pol.with_caps(cap);
    }
    if let Some(tol) = cli.tol {
        pol.tol = tol;
    }
    pol.validate()?;
    Ok(pol)
}

fn group_filter(name: &str) -> CliResult<Option<Group>> {
    if name.eq_ignore_ascii_case("all") {
        Ok(None)
    } else {
        Ok(Some(Group::from_name(name)?))
    }
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn run(cli: Cli) -> CliResult<u8> {
    let pol = policy(&cli)?;
    match cli.command {
        Command::Eval {
            function,
            params,
            output,
        } => {
            let assignment = Assignment::new(function, params.given(), &[])?;
            match assignment.evaluate(&pol) {
                Ok(e) => {
                    emit(&render::evaluation(function, &e, output.format())?);
                    Ok(if e.terminated || e.converged { 0 } else { EXIT_DIVERGED })
                }
                Err(err @ CliError::Core(appell_core::Error::Divergence { .. })) => {
                    emit(&render::divergence(function, &err, output.format())?);
                    eprintln!("appell: {err}");
                    Ok(EXIT_DIVERGED)
                }
                Err(err) => Err(err),
            }
        }
        Command::Check {
            group,
            panel,
            exact,
            output,
        } => {
            let filter = group_filter(&group)?;
            let panel = match panel {
                Some(path) => {
                    let text =
                        std::fs::read_to_string(&path).map_err(|source| CliError::PanelFile { path, source })?;
                    Panel::from_json(&text)?
                }
                None => Panel::default_panel(),
            };
            let mode = if exact { Mode::Exact } else { Mode::Float };
            let report = run_suite(&panel, filter, &pol, mode);
            emit(&render::suite(&report, output.format())?);
            Ok(match report.status {
                SuiteStatus::Ok | SuiteStatus::NoCases => 0,
                SuiteStatus::Failures => EXIT_FAILING,
            })
        }
        Command::List { group, output } => {
            let list = list_identities(group_filter(&group)?);
            emit(&render::identities(&list, output.format())?);
            Ok(0)
        }
        Command::Table {
            function,
            sweeps,
            params,
            output,
        } => {
            let axes = sweeps
                .iter()
                .map(|s| parse_sweep(function, s))
                .collect::<CliResult<Vec<_>>>()?;
            let axes = order_axes(function, axes)?;
            let swept: Vec<&'static str> = axes.iter().map(|a| a.name).collect();
            let base = Assignment::new(function, params.given(), &swept)?;
            let cells = eval::table(&base, &axes, &pol)?;
            emit(&render::table(function, &axes, &cells, output.format())?);
            let settled = cells
                .iter()
                .all(|c| matches!(&c.outcome, Ok(e) if e.terminated || e.converged));
            Ok(if settled { 0 } else { EXIT_DIVERGED })
        }
    }
}
