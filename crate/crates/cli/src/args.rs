use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::eval::Function;

#[derive(Debug, Parser)]
#[command(name = "appell", version, about = "Discrete Appell F3 functions and their identity catalog")]
pub struct Cli {
    /// Cap on each lattice index; overrides APPELL_MAX_TERMS.
    #[arg(long, global = true, value_name = "N")]
    pub max_terms: Option<usize>,

    /// Relative size below which an anti-diagonal counts as negligible.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one function at one point.
    Eval {
        function: Function,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check catalog identities on a parameter panel.
    Check {
        /// Group name such as CT1, or `all`.
        #[arg(long, default_value = "all")]
        group: String,
        /// JSON panel file; the built-in panel is used when absent.
        #[arg(long, value_name = "FILE")]
        panel: Option<String>,
        /// Evaluate residuals in exact rational arithmetic.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List catalog identities.
    List {
        #[arg(long, default_value = "all")]
        group: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a function over a grid of one or two swept parameters.
    ///
    /// Cells are emitted row-major. The outer axis is the swept parameter
    /// that comes first in the function's parameter order, so with `x` and
    /// `y` both swept `x` is outer.
    Table {
        function: Function,
        /// `NAME=v1,v2,...` or `NAME=lo:hi:count`; at most two.
        #[arg(long = "sweep", value_name = "NAME=VALUES")]
        sweeps: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Plain,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, conflicts_with_all = ["json", "csv", "plain"])]
    format: Option<Format>,
    /// Same as `--format json`.
    #[arg(long, conflicts_with_all = ["csv", "plain"])]
    json: bool,
    /// Same as `--format csv`.
    #[arg(long, conflicts_with = "plain")]
    csv: bool,
    /// Same as `--format plain`.
    #[arg(long)]
    plain: bool,
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        match (self.format, self.json, self.csv) {
            (Some(f), _, _) => f,
            (None, true, _) => Format::Json,
            (None, _, true) => Format::Csv,
            _ => Format::Plain,
        }
    }
}

/// Parameter flags. Scalars take decimals, fractions or `a+bi`; the KdF
/// lists take comma-separated scalars.
#[derive(Debug, Default, Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    a1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// KdF joint numerator list.
    #[arg(long, allow_hyphen_values = true)]
    upper: Option<String>,
    /// KdF numerator list in x.
    #[arg(long, allow_hyphen_values = true)]
    upper_x: Option<String>,
    /// KdF numerator list in y.
    #[arg(long, allow_hyphen_values = true)]
    upper_y: Option<String>,
    /// KdF joint denominator list.
    #[arg(long, allow_hyphen_values = true)]
    lower: Option<String>,
    /// KdF denominator list in x.
    #[arg(long, allow_hyphen_values = true)]
    lower_x: Option<String>,
    /// KdF denominator list in y.
    #[arg(long, allow_hyphen_values = true)]
    lower_y: Option<String>,
}

impl ParamArgs {
    /// Flag name and text of every flag that was given.
    pub fn given(&self) -> Vec<(&'static str, String)> {
        let all = [
            ("a1", &self.a1),
            ("a2", &self.a2),
            ("b1", &self.b1),
            ("b2", &self.b2),
            ("c", &self.c),
            ("t1", &self.t1),
            ("t2", &self.t2),
            ("k1", &self.k1),
            ("k2", &self.k2),
            ("t", &self.t),
            ("k", &self.k),
            ("a", &self.a),
            ("x", &self.x),
            ("y", &self.y),
            ("z", &self.z),
            ("upper", &self.upper),
            ("upper-x", &self.upper_x),
            ("upper-y", &self.upper_y),
            ("lower", &self.lower),
            ("lower-x", &self.lower_x),
            ("lower-y", &self.lower_y),
        ];
        all.into_iter().filter_map(|(name, v)| v.clone().map(|v| (name, v))).collect()
    }
}
