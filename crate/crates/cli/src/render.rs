use appell_core::catalog::{IdentityDescriptor, SuiteReport, SuiteStatus};
use appell_core::series::Evaluation;
use appell_core::Scalar;
use serde_json::{json, Value};

use crate::args::Format;
use crate::error::{CliError, CliResult};
use crate::eval::{Axis, Cell, Function};

/// Shortest round-trip digits, in exponent form outside [1e-5, 1e16).
pub fn real_text(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// `re+imi`, keeping a zero imaginary part.
pub fn complex_text(z: Scalar) -> String {
    if z.im < 0.0 {
        format!("{}-{}i", real_text(z.re), real_text(-z.im))
    } else {
        format!("{}+{}i", real_text(z.re), real_text(z.im))
    }
}

fn eval_json(e: &Evaluation) -> Value {
    json!({
        "value": {"re": e.value.re, "im": e.value.im},
        "terms_used": e.terms_used,
        "terminated": e.terminated,
        "converged": e.converged,
        "est_error": e.est_error,
    })
}

fn divergence_json(err: &CliError) -> Value {
    match err {
        CliError::Core(appell_core::Error::Divergence {
            antidiagonals,
            last_magnitude,
        }) => json!({
            "diverged": true,
            "antidiagonals": antidiagonals,
            "last_magnitude": last_magnitude,
            "message": err.to_string(),
        }),
        _ => json!({"diverged": true, "message": err.to_string()}),
    }
}

fn pretty(v: &Value) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

const EVAL_COLUMNS: [&str; 6] = ["re", "im", "terms_used", "terminated", "converged", "est_error"];

fn eval_row(e: &Evaluation) -> Vec<String> {
    vec![
        real_text(e.value.re),
        real_text(e.value.im),
        e.terms_used.to_string(),
        e.terminated.to_string(),
        e.converged.to_string(),
        real_text(e.est_error),
    ]
}

pub fn evaluation(f: Function, e: &Evaluation, format: Format) -> CliResult<String> {
    match format {
        Format::Json => {
            let mut v = json!({"function": f.name()});
            v.as_object_mut().expect("object").extend(eval_json(e).as_object().expect("object").clone());
            pretty(&v)
        }
        Format::Csv => {
            let mut header = vec!["function"];
            header.extend(EVAL_COLUMNS);
            let mut row = vec![f.name().to_string()];
            row.extend(eval_row(e));
            csv_text(&header, &[row])
        }
        Format::Plain => Ok(format!(
            "{} = {}\nterms_used  {}\nterminated  {}\nconverged   {}\nest_error   {}\n",
            f.name(),
            complex_text(e.value),
            e.terms_used,
            e.terminated,
            e.converged,
            real_text(e.est_error)
        )),
    }
}

pub fn divergence(f: Function, err: &CliError, format: Format) -> CliResult<String> {
    match format {
        Format::Json => {
            let mut v = json!({"function": f.name()});
            v.as_object_mut().expect("object").extend(divergence_json(err).as_object().expect("object").clone());
            pretty(&v)
        }
        Format::Csv => csv_text(&["function", "status", "message"], &[vec![
            f.name().to_string(),
            "diverged".to_string(),
            err.to_string(),
        ]]),
        Format::Plain => Ok(format!("{}: diverged\n{err}\n", f.name())),
    }
}

fn cell_status(outcome: &CliResult<Evaluation>) -> &'static str {
    match outcome {
        Ok(e) if e.terminated || e.converged => "ok",
        Ok(_) => "not_converged",
        Err(_) => "diverged",
    }
}

pub fn table(f: Function, axes: &[Axis], cells: &[Cell], format: Format) -> CliResult<String> {
    match format {
        Format::Json => {
            let cells: Vec<Value> = cells
                .iter()
                .map(|cell| {
                    let mut obj = serde_json::Map::new();
                    let coords: serde_json::Map<String, Value> = axes
                        .iter()
                        .zip(&cell.coords)
                        .map(|(a, v)| (a.name.to_string(), Value::from(v.clone())))
                        .collect();
                    obj.insert("coords".into(), Value::Object(coords));
                    obj.insert("status".into(), cell_status(&cell.outcome).into());
                    let body = match &cell.outcome {
                        Ok(e) => eval_json(e),
                        Err(err) => divergence_json(err),
                    };
                    obj.extend(body.as_object().expect("object").clone());
                    Value::Object(obj)
                })
                .collect();
            let axes: Vec<Value> = axes.iter().map(|a| json!({"name": a.name, "values": a.values})).collect();
            pretty(&json!({"function": f.name(), "axes": axes, "cells": cells}))
        }
        Format::Csv | Format::Plain => {
            let mut header: Vec<&str> = axes.iter().map(|a| a.name).collect();
            header.push("status");
            header.extend(EVAL_COLUMNS);
            let rows: Vec<Vec<String>> = cells
                .iter()
                .map(|cell| {
                    let mut row = cell.coords.clone();
                    row.push(cell_status(&cell.outcome).to_string());
                    match &cell.outcome {
                        Ok(e) => row.extend(eval_row(e)),
                        Err(_) => row.extend(EVAL_COLUMNS.iter().map(|_| String::new())),
                    }
                    row
                })
                .collect();
            if format == Format::Csv {
                return csv_text(&header, &rows);
            }
            let mut out = header.join("\t") + "\n";
            for row in rows {
                out += &row.join("\t");
                out.push('\n');
            }
            Ok(out)
        }
    }
}

pub fn identities(list: &[IdentityDescriptor], format: Format) -> CliResult<String> {
    match format {
        Format::Json => pretty(&serde_json::to_value(list)?),
        Format::Csv => {
            let rows: Vec<Vec<String>> = list
                .iter()
                .map(|d| {
                    vec![
                        d.id.clone(),
                        d.group.to_string(),
                        d.formula.clone(),
                        d.constraints.join("; "),
                        d.free.clone().unwrap_or_default(),
                        d.typo_normalized.to_string(),
                        d.note.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            csv_text(&["id", "group", "formula", "constraints", "free", "typo_normalized", "note"], &rows)
        }
        Format::Plain => {
            let width = list.iter().map(|d| d.id.len()).max().unwrap_or(0);
            Ok(list.iter().map(|d| format!("{:width$}  {}\n", d.id, d.formula)).collect())
        }
    }
}

pub fn suite(report: &SuiteReport, format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(report.to_json() + "\n"),
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .identities
                .iter()
                .map(|r| {
                    vec![
                        r.identity_id.clone(),
                        r.group.to_string(),
                        r.cases.len().to_string(),
                        r.skipped.len().to_string(),
                        r.errors.len().to_string(),
                        real_text(r.max_rel),
                        r.pass.to_string(),
                    ]
                })
                .collect();
            csv_text(&["identity_id", "group", "cases", "skipped", "errors", "max_rel", "pass"], &rows)
        }
        Format::Plain => {
            if report.status == SuiteStatus::NoCases {
                return Ok("no cases\n".to_string());
            }
            let mut out = String::new();
            for r in &report.identities {
                out += &format!(
                    "{:<8} {}  max_rel {:.3e}  cases {}  skipped {}  errors {}\n",
                    r.identity_id,
                    if r.pass { "pass" } else { "FAIL" },
                    r.max_rel,
                    r.cases.len(),
                    r.skipped.len(),
                    r.errors.len()
                );
                for e in &r.errors {
                    out += &format!("    error at {:?} ({}, {}): {}\n", e.params, e.point[0], e.point[1], e.reason);
                }
            }
            let passed = report.identities.iter().filter(|r| r.pass).count();
            out += &format!(
                "{passed}/{} identities pass; {} cases run, {} failed, {} skipped\n",
                report.identities.len(),
                report.cases_run,
                report.cases_failed,
                report.cases_skipped
            );
            Ok(out)
        }
    }
}
