//! Parameter/point panels the identity suite runs over.
//!
//! Cases are stored exactly; float evaluations convert on the way in, so
//! the same panel drives both arithmetic modes.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::expr::{Env, IntSym, Sym};
use crate::numerics::{format_exact, parse_exact, ExactScalar, Field};
use crate::operator::{env_from_params1, env_from_params2};
use crate::series::{Params1, Params2, Point};

use super::{Body, Identity};

#[derive(Clone, Debug, PartialEq)]
pub enum CaseParams {
    First(Params1<ExactScalar>),
    Second(Params2<ExactScalar>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Case {
    pub params: CaseParams,
    pub point: Point<ExactScalar>,
    /// Value of the identity's free integer (`r` or `s`).
    pub free: Option<i64>,
    pub z: Option<ExactScalar>,
}

impl Case {
    pub fn new(params: CaseParams, point: Point<ExactScalar>) -> Self {
        Case {
            params,
            point,
            free: None,
            z: None,
        }
    }

    pub fn second_form(&self) -> bool {
        matches!(self.params, CaseParams::Second(_))
    }

    /// All `t` are nonnegative integers and all `k` positive, so every
    /// series in play is a finite sum.
    pub fn is_terminating(&self) -> bool {
        let nonneg = |t: &ExactScalar| t.nonnegative_integer().is_some();
        match &self.params {
            CaseParams::First(p) => nonneg(&p.t1) && nonneg(&p.t2) && p.k1 >= 1 && p.k2 >= 1,
            CaseParams::Second(p) => nonneg(&p.t) && p.k >= 1,
        }
    }

    pub fn env<S: Field>(&self) -> Env<S> {
        let mut env = match &self.params {
            CaseParams::First(p) => env_from_params1(p, &self.point),
            CaseParams::Second(p) => env_from_params2(p, &self.point),
        }
        .map(S::from_exact);
        if let Some(z) = &self.z {
            env.set(Sym::Z, S::from_exact(z));
        }
        if let Some(v) = self.free {
            env.set_int(IntSym::R, v);
            env.set_int(IntSym::S, v);
        }
        env
    }

    pub fn describe_params(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        let mut put = |k: &str, v: &ExactScalar| {
            out.insert(k.to_string(), format_exact(v));
        };
        match &self.params {
            CaseParams::First(p) => {
                put("a1", &p.a1);
                put("a2", &p.a2);
                put("b1", &p.b1);
                put("b2", &p.b2);
                put("c", &p.c);
                put("t1", &p.t1);
                put("t2", &p.t2);
                out.insert("k1".into(), p.k1.to_string());
                out.insert("k2".into(), p.k2.to_string());
            }
            CaseParams::Second(p) => {
                put("a1", &p.a1);
                put("a2", &p.a2);
                put("b1", &p.b1);
                put("b2", &p.b2);
                put("c", &p.c);
                put("t", &p.t);
                out.insert("k".into(), p.k.to_string());
            }
        }
        if let Some(v) = self.free {
            out.insert("r".into(), v.to_string());
        }
        if let Some(z) = &self.z {
            out.insert("z".into(), format_exact(z));
        }
        out
    }

    pub fn describe_point(&self) -> [String; 2] {
        [format_exact(&self.point.x), format_exact(&self.point.y)]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Panel {
    pub cases: Vec<Case>,
    pub free_values: Vec<i64>,
    pub z_values: Vec<ExactScalar>,
    pub limit_cases: Vec<Case>,
    pub eps: Vec<f64>,
}

fn q(text: &str) -> ExactScalar {
    parse_exact(text).expect("literal parses")
}

const REAL_SET: [&str; 5] = ["7/3", "5/4", "2/5", "9/7", "13/6"];
const COMPLEX_SET: [&str; 5] = ["1/2+1/3i", "-3/4+1/5i", "5/3-1/2i", "2/7+1i", "11/4+1/3i"];
const POINTS: [(&str, &str); 4] = [("3/10", "-3/10"), ("1/2", "1/5+1/10i"), ("-3/10", "1/2"), ("1/5+1/10i", "3/10")];

impl Panel {
    pub fn empty() -> Self {
        Panel {
            cases: vec![],
            free_values: vec![],
            z_values: vec![],
            limit_cases: vec![],
            eps: vec![],
        }
    }

    /// Integer `t` with `k >= 1` on both forms, plus a `k = 0` sub-panel
    /// that exercises the non-terminating regime.
    pub fn default_panel() -> Self {
        let first_tk: [(i64, i64, u32, u32); 7] =
            [(2, 3, 1, 1), (4, 5, 2, 1), (6, 2, 3, 2), (5, 6, 1, 3), (3, 4, 2, 2), (2, 3, 0, 0), (4, 3, 0, 1)];
        let second_tk: [(i64, u32); 6] = [(2, 1), (4, 2), (6, 3), (5, 1), (3, 2), (3, 0)];
        let mut cases = Vec::new();
        for set in [REAL_SET, COMPLEX_SET] {
            let [a1, a2, b1, b2, c] = set.map(q);
            for (x, y) in POINTS {
                let point = Point::new(q(x), q(y));
                for (t1, t2, k1, k2) in first_tk {
                    let p = Params1 {
                        a1: a1.clone(),
                        a2: a2.clone(),
                        b1: b1.clone(),
                        b2: b2.clone(),
                        c: c.clone(),
                        t1: ExactScalar::from_i64(t1),
                        t2: ExactScalar::from_i64(t2),
                        k1,
                        k2,
                    };
                    cases.push(Case::new(CaseParams::First(p), point.clone()));
                }
                for (t, k) in second_tk {
                    let p = Params2 {
                        a1: a1.clone(),
                        a2: a2.clone(),
                        b1: b1.clone(),
                        b2: b2.clone(),
                        c: c.clone(),
                        t: ExactScalar::from_i64(t),
                        k,
                    };
                    cases.push(Case::new(CaseParams::Second(p), point.clone()));
                }
            }
        }
        Panel {
            cases,
            free_values: vec![1, 2, 3],
            z_values: vec![q("1/4"), q("1/5+1/10i")],
            limit_cases: Self::limit_panel(),
            eps: vec![1e-1, 1e-2, 1e-3],
        }
    }

    fn limit_panel() -> Vec<Case> {
        let one = q("1");
        let two = q("2");
        let point = Point::new(q("1/4"), q("1/4"));
        vec![
            Case::new(
                CaseParams::First(Params1 {
                    a1: one.clone(),
                    a2: one.clone(),
                    b1: one.clone(),
                    b2: one.clone(),
                    c: two.clone(),
                    t1: two.clone(),
                    t2: two.clone(),
                    k1: 1,
                    k2: 1,
                }),
                point.clone(),
            ),
            Case::new(
                CaseParams::Second(Params2 {
                    a1: one.clone(),
                    a2: one.clone(),
                    b1: one.clone(),
                    b2: one,
                    c: two.clone(),
                    t: two,
                    k: 1,
                }),
                point,
            ),
        ]
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty() && self.limit_cases.is_empty()
    }

    /// The concrete cases `ident` is checked on.
    pub fn instances(&self, ident: &Identity) -> Vec<Case> {
        let second = ident.group.second_form();
        let source = match ident.body {
            Body::Limit(_) => &self.limit_cases,
            Body::Relation { .. } => &self.cases,
        };
        let mut out = Vec::new();
        for case in source.iter().filter(|c| c.second_form() == second) {
            let frees: Vec<Option<i64>> = match ident.free {
                Some(_) => self.free_values.iter().map(|v| Some(*v)).collect(),
                None => vec![None],
            };
            let zs: Vec<Option<ExactScalar>> = if ident.needs_z {
                self.z_values.iter().cloned().map(Some).collect()
            } else {
                vec![None]
            };
            for free in &frees {
                for z in &zs {
                    out.push(Case {
                        free: *free,
                        z: z.clone(),
                        ..case.clone()
                    });
                }
            }
        }
        out
    }

    /// Reads a panel document, either a bare array of cases
    ///
    /// ```json
    /// [{"params": {"a1": "7/3", "a2": 1.25, "b1": "2/5", "b2": "9/7", "c": "13/6",
    ///              "t1": 2, "t2": 3, "k1": 1, "k2": 1},
    ///   "point": {"x": 0.3, "y": "0.2+0.1i"}}]
    /// ```
    ///
    /// or an object `{"cases": [...], "free": [1, 2], "z": ["1/4"],
    /// "limit_cases": [...], "eps": [0.1, 0.01, 0.001]}` where every key is
    /// optional. Params with `t` and `k` belong to the second form. Numbers are
    /// read from their decimal text, so `0.3` means exactly 3/10.
    pub fn from_json(text: &str) -> Result<Panel> {
        let mut doc: Value = serde_json::from_str(text).map_err(|e| Error::Panel(e.to_string()))?;
        if doc.is_array() {
            doc = serde_json::json!({ "cases": doc });
        }
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::Panel("panel must be an array of cases or an object".into()))?;
        let cases = match obj.get("cases") {
            Some(Value::Array(items)) => items.iter().map(parse_case).collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::Panel("`cases` must be an array".into())),
            None => vec![],
        };
        let limit_cases = match obj.get("limit_cases") {
            Some(Value::Array(items)) => items.iter().map(parse_case).collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::Panel("`limit_cases` must be an array".into())),
            None => vec![],
        };
        let free_values = match obj.get("free") {
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_i64()
                        .filter(|v| *v >= 0)
                        .ok_or_else(|| Error::Panel(format!("free value {v} is not a nonnegative integer")))
                })
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::Panel("`free` must be an array".into())),
            None => vec![1, 2, 3],
        };
        let z_values = match obj.get("z") {
            Some(Value::Array(items)) => items.iter().map(number).collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::Panel("`z` must be an array".into())),
            None => vec![q("1/4")],
        };
        let eps = match obj.get("eps") {
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| Error::Panel(format!("eps value {v} is not a number"))))
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::Panel("`eps` must be an array".into())),
            None => vec![1e-1, 1e-2, 1e-3],
        };
        for key in obj.keys() {
            if !matches!(key.as_str(), "cases" | "limit_cases" | "free" | "z" | "eps") {
                return Err(Error::Panel(format!("unknown panel key `{key}`")));
            }
        }
        Ok(Panel {
            cases,
            free_values,
            z_values,
            limit_cases,
            eps,
        })
    }
}

fn number(v: &Value) -> Result<ExactScalar> {
    match v {
        Value::String(s) => parse_exact(s).map_err(|e| Error::Panel(e.to_string())),
        Value::Number(n) => parse_exact(&n.to_string()).map_err(|e| Error::Panel(e.to_string())),
        other => Err(Error::Panel(format!("expected a number, found {other}"))),
    }
}

fn parse_case(v: &Value) -> Result<Case> {
    let case = v.as_object().ok_or_else(|| Error::Panel("case must be an object".into()))?;
    for key in case.keys() {
        if !matches!(key.as_str(), "params" | "point") {
            return Err(Error::Panel(format!("unexpected case key `{key}`")));
        }
    }
    let section = |name: &str| {
        case.get(name)
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Panel(format!("case needs a `{name}` object")))
    };
    let obj = section("params")?;
    let point = section("point")?;
    for key in point.keys() {
        if !matches!(key.as_str(), "x" | "y") {
            return Err(Error::Panel(format!("unexpected point key `{key}`")));
        }
    }
    let coord = |k: &str| -> Result<ExactScalar> {
        number(point.get(k).ok_or_else(|| Error::Panel(format!("point is missing `{k}`")))?)
    };
    let get = |k: &str| -> Result<ExactScalar> {
        number(obj.get(k).ok_or_else(|| Error::Panel(format!("params are missing `{k}`")))?)
    };
    let get_k = |k: &str| -> Result<u32> {
        obj.get(k)
            .and_then(Value::as_u64)
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| Error::Panel(format!("`{k}` must be a nonnegative integer")))
    };
    let second = obj.contains_key("t");
    let allowed: &[&str] = if second {
        &["a1", "a2", "b1", "b2", "c", "t", "k"]
    } else {
        &["a1", "a2", "b1", "b2", "c", "t1", "t2", "k1", "k2"]
    };
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Panel(format!("unexpected parameter `{key}`")));
        }
    }
    let params = if second {
        CaseParams::Second(Params2 {
            a1: get("a1")?,
            a2: get("a2")?,
            b1: get("b1")?,
            b2: get("b2")?,
            c: get("c")?,
            t: get("t")?,
            k: get_k("k")?,
        })
    } else {
        CaseParams::First(Params1 {
            a1: get("a1")?,
            a2: get("a2")?,
            b1: get("b1")?,
            b2: get("b2")?,
            c: get("c")?,
            t1: get("t1")?,
            t2: get("t2")?,
            k1: get_k("k1")?,
            k2: get_k("k2")?,
        })
    };
    Ok(Case::new(params, Point::new(coord("x")?, coord("y")?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::find;

    #[test]
    fn default_panel_shape() {
        let p = Panel::default_panel();
        assert_eq!(p.cases.len(), 2 * 4 * (7 + 6));
        let terminating = p.cases.iter().filter(|c| c.is_terminating()).count();
        assert_eq!(terminating, 2 * 4 * (5 + 5));
        for c in p.cases.iter().filter(|c| !c.is_terminating()) {
            let env = c.env::<crate::Scalar>();
            assert!(env.get(Sym::X).unwrap().norm() <= 0.5 + 1e-15);
            assert!(env.get(Sym::Y).unwrap().norm() <= 0.5 + 1e-15);
        }
    }

    #[test]
    fn instances_expand_free_and_z() {
        let p = Panel::default_panel();
        let fs = find("FS1-1").unwrap();
        assert_eq!(p.instances(fs).len(), 3 * 2 * 4 * 7);
        let is = find("IS2-1").unwrap();
        assert_eq!(p.instances(is).len(), 2 * 2 * 4 * 6);
        let lim = find("LIM1-1").unwrap();
        assert_eq!(p.instances(lim).len(), 1);
    }

    #[test]
    fn json_numbers_are_exact() {
        let text = r#"{"cases": [{"params": {"a1": 0.3, "a2": "1/2", "b1": 1, "b2": "2+1i", "c": 3,
            "t1": 2, "t2": 3, "k1": 1, "k2": 2}, "point": {"x": 0.1, "y": "-0.2"}}], "free": [2]}"#;
        let p = Panel::from_json(text).unwrap();
        match &p.cases[0].params {
            CaseParams::First(p) => assert_eq!(p.a1, q("3/10")),
            _ => panic!(),
        }
        assert_eq!(p.cases[0].point.x, q("1/10"));
        assert_eq!(p.free_values, vec![2]);
    }

    #[test]
    fn array_form_reads_second_form_cases() {
        let text = r#"[{"params": {"a1": 1, "a2": 1, "b1": 1, "b2": 1, "c": 2, "t": 2, "k": 1},
            "point": {"x": "1/4", "y": 0.5}}]"#;
        let p = Panel::from_json(text).unwrap();
        assert!(p.cases[0].second_form());
        assert_eq!(p.cases[0].point.y, q("1/2"));
        assert_eq!(p.free_values, vec![1, 2, 3]);
        assert!(p.limit_cases.is_empty());
    }

    #[test]
    fn malformed_panels_rejected() {
        assert!(Panel::from_json("3").is_err());
        assert!(Panel::from_json("[{").is_err());
        assert!(Panel::from_json(r#"[{"params": {"a1": 1}, "point": {"x": 0, "y": 0}}]"#).is_err());
        assert!(Panel::from_json(r#"{"bogus": 1}"#).is_err());
        assert!(Panel::from_json(r#"[{"params": {"a1": 1, "a2": 1, "b1": 1, "b2": 1, "c": 1,
            "t": 1, "k": -1}, "point": {"x": 0, "y": 0}}]"#)
        .is_err());
        assert!(Panel::from_json(r#"[{"params": {"a1": 1, "a2": 1, "b1": 1, "b2": 1, "c": 1,
            "t": 1, "k": 1}, "point": {"x": 0, "y": 0, "z": 1}}]"#)
        .is_err());
        assert!(Panel::from_json("[]").unwrap().is_empty());
        assert!(Panel::from_json(r#"{"cases": []}"#).unwrap().is_empty());
    }
}
