//! Residual evaluation of catalog identities over a panel.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Env, IntSym};
use num_rational::BigRational;

use crate::numerics::{parse_exact, ExactScalar, Field, Scalar};
use crate::operator::Residual;
use crate::series::{
    limit_degeneration, limit_degeneration_exact, tail_estimate, LimitReport, Params1, Params2, Point,
    TruncationPolicy, XiParams,
};

use super::panel::{Case, CaseParams, Panel};
use super::{Body, Group, Identity, Term, INFINITE_SUM_TERMS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Exact,
}

/// Pass threshold on the relative residual.
pub fn tolerance(group: Group, terminating: bool) -> f64 {
    match group {
        Group::RED1 | Group::RED2 => 1e-12,
        Group::IS1 | Group::IS2 => 1e-8,
        _ if terminating => 1e-10,
        _ => 1e-8,
    }
}

/// Reduction factor the Humbert limits must reach across the epsilon list.
pub const LIMIT_FACTOR: f64 = 1e-2;

#[derive(Clone, Debug)]
struct SideValue<S> {
    value: S,
    magnitude: f64,
    est_error: f64,
}

fn eval_terms<S: Field>(terms: &[Term], env: &Env<S>, pol: &TruncationPolicy) -> Result<SideValue<S>> {
    let mut value = S::zero();
    let mut magnitude = 0.0;
    let mut est_error = 0.0;
    for term in terms {
        match &term.sum {
            None => {
                let ev = term.expr.apply(env, pol)?;
                magnitude += ev.value.magnitude();
                est_error += ev.est_error;
                value = value + ev.value;
            }
            Some(spec) => {
                let lo = spec.lo.eval(env)?;
                let hi = match &spec.hi {
                    Some(hi) => hi.eval(env)?,
                    None => lo + INFINITE_SUM_TERMS - 1,
                };
                let mut mags = Vec::new();
                for j in lo..=hi {
                    let mut e = env.clone();
                    e.set_int(IntSym::Idx, j);
                    let ev = term.expr.apply(&e, pol)?;
                    let m = ev.value.magnitude();
                    magnitude += m;
                    est_error += ev.est_error;
                    mags.push(m);
                    value = value + ev.value;
                }
                if spec.hi.is_none() {
                    est_error += tail_estimate(&mags);
                }
            }
        }
    }
    Ok(SideValue {
        value,
        magnitude,
        est_error,
    })
}

/// Outcome of one relation on one case.
#[derive(Clone, Debug)]
pub struct RelationOutcome<S> {
    pub difference: S,
    pub residual: Residual,
    pub est_error: f64,
}

fn relation_residual<S: Field>(
    lhs: &[Term],
    rhs: &[Term],
    env: &Env<S>,
    pol: &TruncationPolicy,
) -> Result<RelationOutcome<S>> {
    let l = eval_terms(lhs, env, pol)?;
    let r = eval_terms(rhs, env, pol)?;
    let difference = l.value - r.value;
    let abs = difference.magnitude();
    let scale = l.magnitude.max(r.magnitude);
    Ok(RelationOutcome {
        difference,
        residual: Residual {
            abs,
            rel: if scale > 0.0 { abs / scale } else { abs },
            scale,
        },
        est_error: l.est_error + r.est_error,
    })
}

fn relation_parts(ident: &Identity) -> Result<(&[Term], &[Term])> {
    match &ident.body {
        Body::Relation { lhs, rhs, .. } => Ok((lhs, rhs)),
        Body::Limit(_) => Err(Error::InvalidParams(format!("{} is a limit, not a relation", ident.id))),
    }
}

fn checked_env<S: Field>(ident: &Identity, case: &Case) -> Result<Env<S>> {
    if ident.group.second_form() != case.second_form() {
        return Err(Error::Validity(format!("{} needs the other parameter form", ident.id)));
    }
    if ident.free.is_some() && case.free.is_none() {
        return Err(Error::Panel(format!("{} needs a value for its free integer", ident.id)));
    }
    if ident.needs_z && case.z.is_none() {
        return Err(Error::Panel(format!("{} needs a value for z", ident.id)));
    }
    let env = case.env::<S>();
    ident.check_validity(&env)?;
    Ok(env)
}

/// Float residual of one identity on one case.  The scale is the larger of
/// the two sides' summed term magnitudes, so relations written as `... = 0`
/// are measured against the size of their terms.
pub fn check_identity(ident: &Identity, case: &Case, pol: &TruncationPolicy) -> Result<Residual> {
    let env = checked_env::<Scalar>(ident, case)?;
    let (lhs, rhs) = relation_parts(ident)?;
    Ok(relation_residual(lhs, rhs, &env, pol)?.residual)
}

/// Exact difference `LHS - RHS`; only terminating, power-free cases qualify.
pub fn check_identity_exact(ident: &Identity, case: &Case, pol: &TruncationPolicy) -> Result<ExactScalar> {
    let env = checked_env::<ExactScalar>(ident, case)?;
    let (lhs, rhs) = relation_parts(ident)?;
    Ok(relation_residual(lhs, rhs, &env, pol)?.difference)
}

/// Residual of the relation as printed, for identities stored in corrected form.
pub fn check_printed(ident: &Identity, case: &Case, pol: &TruncationPolicy) -> Option<Result<Residual>> {
    match &ident.body {
        Body::Relation {
            printed: Some((lhs, rhs)),
            ..
        } => Some(
            checked_env::<Scalar>(ident, case)
                .and_then(|env| relation_residual(lhs, rhs, &env, pol).map(|o| o.residual)),
        ),
        _ => None,
    }
}

fn xi_params<S: Field>(case: &Case) -> XiParams<S> {
    let cvt = |v: &ExactScalar| S::from_exact(v);
    match &case.params {
        CaseParams::First(p) => XiParams::First(Params1 {
            a1: cvt(&p.a1),
            a2: cvt(&p.a2),
            b1: cvt(&p.b1),
            b2: cvt(&p.b2),
            c: cvt(&p.c),
            t1: cvt(&p.t1),
            t2: cvt(&p.t2),
            k1: p.k1,
            k2: p.k2,
        }),
        CaseParams::Second(p) => XiParams::Second(Params2 {
            a1: cvt(&p.a1),
            a2: cvt(&p.a2),
            b1: cvt(&p.b1),
            b2: cvt(&p.b2),
            c: cvt(&p.c),
            t: cvt(&p.t),
            k: p.k,
        }),
    }
}

/// Shortest decimal reading of a float, e.g. `1e-3` becomes 1/1000.
fn decimal_rational(v: f64) -> Result<BigRational> {
    Ok(parse_exact(&format!("{v:e}"))?.re)
}

/// Limit report for one case and whether it reaches `LIMIT_FACTOR`.
/// Terminating cases are compared in exact arithmetic, with the epsilons
/// read as decimals.
pub fn check_limit(ident: &Identity, case: &Case, eps: &[f64], pol: &TruncationPolicy) -> Result<(LimitReport, bool)> {
    let Body::Limit(variant) = ident.body else {
        return Err(Error::InvalidParams(format!("{} is not a limit", ident.id)));
    };
    checked_env::<Scalar>(ident, case)?;
    if case.is_terminating() {
        let eps_q = eps.iter().map(|e| decimal_rational(*e)).collect::<Result<Vec<_>>>()?;
        let pt = Point::new(case.point.x.clone(), case.point.y.clone());
        let rep = limit_degeneration_exact(variant, &xi_params::<ExactScalar>(case), &pt, &eps_q, pol)?;
        let factor = decimal_rational(LIMIT_FACTOR)?;
        let pass = rep.passes(&factor);
        return Ok((rep.report, pass));
    }
    let pt = Point::new(Scalar::from_exact(&case.point.x), Scalar::from_exact(&case.point.y));
    let rep = limit_degeneration(variant, &xi_params::<Scalar>(case), &pt, eps, pol)?;
    let pass = rep.passes(LIMIT_FACTOR);
    Ok((rep, pass))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseResult {
    pub params: BTreeMap<String, String>,
    pub point: [String; 2],
    pub abs: f64,
    pub rel: f64,
    pub pass: bool,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub est_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_rel: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_errors: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedCase {
    pub params: BTreeMap<String, String>,
    pub point: [String; 2],
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub group: Group,
    pub formula: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub cases: Vec<CaseResult>,
    pub skipped: Vec<SkippedCase>,
    pub errors: Vec<SkippedCase>,
    pub max_rel: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteStatus {
    Ok,
    Failures,
    NoCases,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub mode: Mode,
    pub status: SuiteStatus,
    pub identities: Vec<IdentityReport>,
    pub cases_run: usize,
    pub cases_failed: usize,
    pub cases_skipped: usize,
}

impl SuiteReport {
    pub fn failing(&self) -> impl Iterator<Item = &IdentityReport> {
        self.identities.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Errors that mean "this case does not apply" rather than "the identity failed".
fn is_skip(err: &Error) -> bool {
    matches!(
        err,
        Error::Validity(_) | Error::ShiftPole(_) | Error::NotExact(_) | Error::Operator(_)
    )
}

enum Outcome {
    Ran(CaseResult),
    Skipped(SkippedCase),
    Failed(SkippedCase),
}

fn run_case(ident: &Identity, case: &Case, panel: &Panel, pol: &TruncationPolicy, mode: Mode) -> Outcome {
    let params = case.describe_params();
    let point = case.describe_point();
    let terminating = case.is_terminating();
    let tol = tolerance(ident.group, terminating);
    let result: Result<CaseResult> = match (&ident.body, mode) {
        (Body::Limit(_), _) => check_limit(ident, case, &panel.eps, pol).map(|(rep, pass)| CaseResult {
            params: params.clone(),
            point: point.clone(),
            abs: rep.errors.last().copied().unwrap_or(0.0),
            rel: rep.reduction(),
            pass,
            tolerance: LIMIT_FACTOR,
            est_error: None,
            printed_rel: None,
            limit_errors: Some(rep.errors),
        }),
        (Body::Relation { .. }, Mode::Float) => checked_env::<Scalar>(ident, case).and_then(|env| {
            let (lhs, rhs) = relation_parts(ident)?;
            let out = relation_residual(lhs, rhs, &env, pol)?;
            let printed_rel = check_printed(ident, case, pol).and_then(|r| r.ok()).map(|r| r.rel);
            Ok(CaseResult {
                params: params.clone(),
                point: point.clone(),
                abs: out.residual.abs,
                rel: out.residual.rel,
                pass: out.residual.rel <= tol,
                tolerance: tol,
                est_error: Some(out.est_error),
                printed_rel,
                limit_errors: None,
            })
        }),
        (Body::Relation { .. }, Mode::Exact) => {
            if !terminating {
                Err(Error::NotExact("case does not terminate".into()))
            } else {
                check_identity_exact(ident, case, pol).map(|d| {
                    let abs = d.magnitude();
                    CaseResult {
                        params: params.clone(),
                        point: point.clone(),
                        abs,
                        rel: abs,
                        pass: d.is_zero_value(),
                        tolerance: 0.0,
                        est_error: None,
                        printed_rel: None,
                        limit_errors: None,
                    }
                })
            }
        }
    };
    match result {
        Ok(r) => Outcome::Ran(r),
        Err(e) if is_skip(&e) => Outcome::Skipped(SkippedCase {
            params,
            point,
            reason: e.to_string(),
        }),
        Err(e) => Outcome::Failed(SkippedCase {
            params,
            point,
            reason: e.to_string(),
        }),
    }
}

pub fn run_identity(ident: &Identity, panel: &Panel, pol: &TruncationPolicy, mode: Mode) -> IdentityReport {
    let outcomes: Vec<Outcome> = panel
        .instances(ident)
        .par_iter()
        .map(|case| run_case(ident, case, panel, pol, mode))
        .collect();
    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    let mut errors = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Ran(r) => cases.push(r),
            Outcome::Skipped(s) => skipped.push(s),
            Outcome::Failed(s) => errors.push(s),
        }
    }
    let max_rel = cases.iter().map(|c| c.rel).fold(0.0, f64::max);
    let pass = errors.is_empty() && cases.iter().all(|c| c.pass);
    IdentityReport {
        identity_id: ident.id.clone(),
        group: ident.group,
        formula: ident.formula.clone(),
        note: ident.note.clone(),
        cases,
        skipped,
        errors,
        max_rel,
        pass,
    }
}

/// Runs `idents` over `panel`; never stops at a failing case.
pub fn run_identities(idents: &[&Identity], panel: &Panel, pol: &TruncationPolicy, mode: Mode) -> SuiteReport {
    let identities: Vec<IdentityReport> = idents.par_iter().map(|i| run_identity(i, panel, pol, mode)).collect();
    let cases_run = identities.iter().map(|r| r.cases.len() + r.errors.len()).sum();
    let cases_failed = identities
        .iter()
        .map(|r| r.cases.iter().filter(|c| !c.pass).count() + r.errors.len())
        .sum();
    let cases_skipped = identities.iter().map(|r| r.skipped.len()).sum();
    let status = if cases_run == 0 {
        SuiteStatus::NoCases
    } else if cases_failed > 0 {
        SuiteStatus::Failures
    } else {
        SuiteStatus::Ok
    };
    SuiteReport {
        mode,
        status,
        identities,
        cases_run,
        cases_failed,
        cases_skipped,
    }
}

pub fn run_suite(panel: &Panel, filter: Option<Group>, pol: &TruncationPolicy, mode: Mode) -> SuiteReport {
    let idents: Vec<&Identity> = super::catalog()
        .iter()
        .filter(|i| filter.is_none_or(|g| i.group == g))
        .collect();
    run_identities(&idents, panel, pol, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::find;

    fn case1(t1: i64, t2: i64, k1: u32, k2: u32, x: &str, y: &str) -> Case {
        let q = |s: &str| parse_exact(s).unwrap();
        Case::new(
            CaseParams::First(Params1 {
                a1: q("7/3"),
                a2: q("5/4"),
                b1: q("2/5"),
                b2: q("9/7"),
                c: q("13/6"),
                t1: ExactScalar::from_i64(t1),
                t2: ExactScalar::from_i64(t2),
                k1,
                k2,
            }),
            Point::new(q(x), q(y)),
        )
    }

    #[test]
    fn contiguous_b1_up_at_origin_is_exact() {
        let ident = find("CT1-5").unwrap();
        let r = check_identity(ident, &case1(2, 3, 1, 1, "0", "0"), &TruncationPolicy::default()).unwrap();
        assert_eq!(r.abs, 0.0);
    }

    #[test]
    fn recursion_with_s_one() {
        let ident = find("RC1-1").unwrap();
        let mut c = case1(4, 5, 2, 1, "3/10", "1/5+1/10i");
        c.free = Some(1);
        let r = check_identity(ident, &c, &TruncationPolicy::default()).unwrap();
        assert!(r.rel <= 1e-11, "{r:?}");
    }

    #[test]
    fn finite_sum_with_r_two() {
        let ident = find("FS1-1").unwrap();
        let mut c = case1(6, 2, 3, 2, "-3/10", "1/2");
        c.free = Some(2);
        let r = check_identity(ident, &c, &TruncationPolicy::default()).unwrap();
        assert!(r.rel <= 1e-11, "{r:?}");
        assert!(check_identity_exact(ident, &c, &TruncationPolicy::default()).unwrap().is_zero_value());
    }

    #[test]
    fn big_theta_case_with_zero_k_is_invalid() {
        let ident = find("QR1-3").unwrap();
        let err = check_identity(ident, &case1(2, 3, 0, 1, "3/10", "0"), &TruncationPolicy::default()).unwrap_err();
        assert!(matches!(err, Error::Validity(_)));
    }

    #[test]
    fn missing_free_value_is_reported() {
        let ident = find("RC1-1").unwrap();
        let err = check_identity(ident, &case1(2, 3, 1, 1, "3/10", "0"), &TruncationPolicy::default()).unwrap_err();
        assert!(matches!(err, Error::Panel(_)));
    }

    #[test]
    fn empty_panel_reports_no_cases() {
        let rep = run_suite(&Panel::empty(), None, &TruncationPolicy::default(), Mode::Float);
        assert_eq!(rep.status, SuiteStatus::NoCases);
        assert_eq!(rep.identities.len(), super::super::catalog().len());
    }

    #[test]
    fn typo_normalized_entries_record_printed_residual() {
        let ident = find("QR1-17").unwrap();
        let c = case1(4, 5, 2, 1, "3/10", "-3/10");
        let printed = check_printed(ident, &c, &TruncationPolicy::default()).unwrap().unwrap();
        assert!(printed.rel > 1e-6);
        assert!(check_identity(ident, &c, &TruncationPolicy::default()).unwrap().rel <= 1e-12);
    }
}
