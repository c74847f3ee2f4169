use std::collections::BTreeMap;

use appell_core::numerics::{format_exact, parse_exact, parse_scalar};
use appell_core::series::{
    eval_1f0_disc, eval_f3_classical, eval_f3_disc1, eval_f3_disc2, eval_kdf, eval_xi, Evaluation, KdFSpec,
    Params1, Params2, Point, TruncationPolicy, XiParams, XiVariant,
};
use appell_core::{ExactScalar, Field, Scalar};
use clap::ValueEnum;
use num_traits::{ToPrimitive, Zero};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Function {
    F3,
    F3d1,
    F3d2,
    Kdf,
    Xi11,
    Xi21,
    Xi12,
    Xi22,
    #[value(name = "1f0d")]
    OneF0d,
}

const FIRST: &[&str] = &["a1", "a2", "b1", "b2", "c", "t1", "t2", "k1", "k2", "x", "y"];
const SECOND: &[&str] = &["a1", "a2", "b1", "b2", "c", "t", "k", "x", "y"];

impl Function {
    pub fn name(self) -> &'static str {
        match self {
            Function::F3 => "f3",
            Function::F3d1 => "f3d1",
            Function::F3d2 => "f3d2",
            Function::Kdf => "kdf",
            Function::Xi11 => "xi11",
            Function::Xi21 => "xi21",
            Function::Xi12 => "xi12",
            Function::Xi22 => "xi22",
            Function::OneF0d => "1f0d",
        }
    }

    /// Scalar parameters in canonical order; all are required.
    pub fn scalars(self) -> &'static [&'static str] {
        match self {
            Function::F3 => &["a1", "a2", "b1", "b2", "c", "x", "y"],
            Function::F3d1 => FIRST,
            Function::F3d2 => SECOND,
            Function::Kdf => &["x", "y"],
            Function::Xi11 => &["a1", "a2", "b1", "c", "t1", "t2", "k1", "k2", "x", "y"],
            Function::Xi21 => &["a1", "b1", "c", "t1", "t2", "k1", "k2", "x", "y"],
            Function::Xi12 => &["a1", "a2", "b1", "c", "t", "k", "x", "y"],
            Function::Xi22 => &["a1", "b1", "c", "t", "k", "x", "y"],
            Function::OneF0d => &["a", "t", "k", "z"],
        }
    }

    /// Optional list parameters.
    pub fn lists(self) -> &'static [&'static str] {
        match self {
            Function::Kdf => &["upper", "upper-x", "upper-y", "lower", "lower-x", "lower-y"],
            _ => &[],
        }
    }
}

/// Validated flag texts for one evaluation.
#[derive(Clone, Debug)]
pub struct Assignment {
    pub function: Function,
    values: BTreeMap<&'static str, String>,
}

impl Assignment {
    /// Checks that `given` holds exactly the flags `function` uses, leaving
    /// out the names in `swept`.
    pub fn new(function: Function, given: Vec<(&'static str, String)>, swept: &[&'static str]) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (name, text) in given {
            if !function.scalars().contains(&name) && !function.lists().contains(&name) {
                return Err(CliError::Usage(format!("--{name} does not apply to {}", function.name())));
            }
            if swept.contains(&name) {
                return Err(CliError::Usage(format!("--{name} is both fixed and swept")));
            }
            values.insert(name, text);
        }
        for name in function.scalars() {
            if !values.contains_key(name) && !swept.contains(name) {
                return Err(CliError::Usage(format!("{} needs --{name}", function.name())));
            }
        }
        Ok(Assignment { function, values })
    }

    pub fn with(&self, name: &'static str, text: &str) -> Self {
        let mut next = self.clone();
        next.values.insert(name, text.to_string());
        next
    }

    fn scalar(&self, name: &str) -> CliResult<Scalar> {
        parse_scalar(self.text(name)?).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
    }

    fn text(&self, name: &str) -> CliResult<&str> {
        self.values
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| CliError::Usage(format!("missing --{name}")))
    }

    /// Scalar or zero for parameters the function ignores.
    fn scalar_or_zero(&self, name: &str) -> CliResult<Scalar> {
        if self.values.contains_key(name) {
            self.scalar(name)
        } else {
            Ok(Scalar::zero())
        }
    }

    fn index(&self, name: &str) -> CliResult<u32> {
        let q = parse_exact(self.text(name)?).map_err(|e| CliError::Usage(format!("--{name}: {e}")))?;
        as_index(&q).ok_or_else(|| CliError::Domain(format!("--{name} must be a nonnegative integer, got {}", format_exact(&q))))
    }

    fn list(&self, name: &str) -> CliResult<Vec<Scalar>> {
        match self.values.get(name) {
            None => Ok(vec![]),
            Some(text) if text.trim().is_empty() => Ok(vec![]),
            Some(text) => text
                .split(',')
                .map(|item| parse_scalar(item).map_err(|e| CliError::Usage(format!("--{name}: {e}"))))
                .collect(),
        }
    }

    fn params1(&self) -> CliResult<Params1> {
        Ok(Params1 {
            a1: self.scalar_or_zero("a1")?,
            a2: self.scalar_or_zero("a2")?,
            b1: self.scalar_or_zero("b1")?,
            b2: self.scalar_or_zero("b2")?,
            c: self.scalar("c")?,
            t1: self.scalar("t1")?,
            t2: self.scalar("t2")?,
            k1: self.index("k1")?,
            k2: self.index("k2")?,
        })
    }

    fn params2(&self) -> CliResult<Params2> {
        Ok(Params2 {
            a1: self.scalar_or_zero("a1")?,
            a2: self.scalar_or_zero("a2")?,
            b1: self.scalar_or_zero("b1")?,
            b2: self.scalar_or_zero("b2")?,
            c: self.scalar("c")?,
            t: self.scalar("t")?,
            k: self.index("k")?,
        })
    }

    fn point(&self) -> CliResult<Point> {
        Ok(Point::new(self.scalar("x")?, self.scalar("y")?))
    }

    pub fn evaluate(&self, pol: &TruncationPolicy) -> CliResult<Evaluation> {
        let xi = |v: XiVariant, p: XiParams| -> CliResult<Evaluation> { Ok(eval_xi(v, &p, &self.point()?, pol)?) };
        match self.function {
            Function::F3 => Ok(eval_f3_classical(
                &self.scalar("a1")?,
                &self.scalar("a2")?,
                &self.scalar("b1")?,
                &self.scalar("b2")?,
                &self.scalar("c")?,
                &self.point()?,
                pol,
            )?),
            Function::F3d1 => Ok(eval_f3_disc1(&self.params1()?, &self.point()?, pol)?),
            Function::F3d2 => Ok(eval_f3_disc2(&self.params2()?, &self.point()?, pol)?),
            Function::Kdf => {
                let spec = KdFSpec {
                    a: self.list("upper")?,
                    b: self.list("upper-x")?,
                    c: self.list("upper-y")?,
                    d: self.list("lower")?,
                    e: self.list("lower-x")?,
                    f: self.list("lower-y")?,
                };
                Ok(eval_kdf(&spec, &self.point()?, pol)?)
            }
            Function::Xi11 => xi(XiVariant::Xi11, XiParams::First(self.params1()?)),
            Function::Xi21 => xi(XiVariant::Xi21, XiParams::First(self.params1()?)),
            Function::Xi12 => xi(XiVariant::Xi12, XiParams::Second(self.params2()?)),
            Function::Xi22 => xi(XiVariant::Xi22, XiParams::Second(self.params2()?)),
            Function::OneF0d => Ok(eval_1f0_disc(
                &self.scalar("a")?,
                &self.scalar("t")?,
                self.index("k")?,
                &self.scalar("z")?,
                pol,
            )?),
        }
    }
}

fn as_index(q: &ExactScalar) -> Option<u32> {
    if !q.im.is_zero() || !q.re.is_integer() {
        return None;
    }
    q.re.to_integer().to_u32()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub values: Vec<String>,
}

/// Parses `NAME=v1,v2,...` or `NAME=lo:hi:count` (real endpoints, count >= 2).
pub fn parse_sweep(function: Function, text: &str) -> CliResult<Axis> {
    let (name, body) = text
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("sweep `{text}` is not NAME=VALUES")))?;
    let name = *function
        .scalars()
        .iter()
        .find(|n| **n == name.trim())
        .ok_or_else(|| CliError::Usage(format!("cannot sweep `{name}` for {}", function.name())))?;
    let values: Vec<String> = if body.contains(':') {
        let parts: Vec<&str> = body.split(':').collect();
        let [lo, hi, count] = parts[..] else {
            return Err(CliError::Usage(format!("range `{body}` is not lo:hi:count")));
        };
        let bad = |e: appell_core::Error| CliError::Usage(format!("sweep {name}: {e}"));
        let lo = parse_exact(lo).map_err(bad)?;
        let hi = parse_exact(hi).map_err(bad)?;
        let count: usize = count
            .trim()
            .parse()
            .ok()
            .filter(|c| *c >= 2)
            .ok_or_else(|| CliError::Usage(format!("range count in `{body}` must be an integer >= 2")))?;
        let steps = ExactScalar::from_i64(count as i64 - 1);
        let step = (hi - lo.clone()) / steps;
        (0..count)
            .map(|i| format_exact(&(lo.clone() + step.clone() * ExactScalar::from_i64(i as i64))))
            .collect()
    } else {
        body.split(',').map(|v| v.trim().to_string()).collect()
    };
    if values.iter().any(String::is_empty) {
        return Err(CliError::Usage(format!("sweep `{text}` has an empty value")));
    }
    Ok(Axis { name, values })
}

/// Orders axes so the one earlier in the function's parameter list is outer.
pub fn order_axes(function: Function, mut axes: Vec<Axis>) -> CliResult<Vec<Axis>> {
    if axes.len() > 2 {
        return Err(CliError::Usage("at most two --sweep axes".into()));
    }
    if axes.len() == 2 && axes[0].name == axes[1].name {
        return Err(CliError::Usage(format!("`{}` is swept twice", axes[0].name)));
    }
    let rank = |a: &Axis| function.scalars().iter().position(|n| *n == a.name);
    axes.sort_by_key(rank);
    Ok(axes)
}

pub struct Cell {
    pub coords: Vec<String>,
    pub outcome: CliResult<Evaluation>,
}

/// Row-major grid; a domain or usage error in any cell aborts the table.
pub fn table(base: &Assignment, axes: &[Axis], pol: &TruncationPolicy) -> CliResult<Vec<Cell>> {
    let mut grid: Vec<Vec<String>> = vec![vec![]];
    for axis in axes {
        grid = grid
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v.clone());
                    next
                })
            })
            .collect();
    }
    let mut cells = Vec::with_capacity(grid.len());
    for coords in grid {
        let mut a = base.clone();
        for (axis, v) in axes.iter().zip(&coords) {
            a = a.with(axis.name, v);
        }
        let outcome = a.evaluate(pol);
        if let Err(e) = &outcome {
            if !matches!(e, CliError::Core(c) if c.is_divergence()) {
                return Err(outcome.err().expect("error checked"));
            }
        }
        cells.push(Cell { coords, outcome });
    }
    Ok(cells)
}
