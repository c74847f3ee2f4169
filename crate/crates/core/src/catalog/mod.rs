//! Registry of identities satisfied by the discrete F3 functions, each
//! stored as term lists and checked by one generic residual evaluator.

mod dsl;
mod entries;
mod relations;
pub mod panel;
pub mod suite;

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Env, Expr, IntExpr, IntSym};
use crate::numerics::Field;
use crate::operator::{FactorSpec, Op, OperatorExpr};
use crate::series::XiVariant;

pub use dsl::parse_relation;
pub use panel::{Case, CaseParams, Panel};
pub use suite::{check_identity, run_suite, CaseResult, IdentityReport, Mode, SuiteReport, SuiteStatus};

/// Number of `r` terms kept from the infinite transformation sums.
pub const INFINITE_SUM_TERMS: i64 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Group {
    DE1,
    DF1,
    DX1,
    FS1,
    IS1,
    RC1,
    CT1,
    DR1,
    QR1,
    RED1,
    LIM1,
    DE2,
    DX2,
    FS2,
    IS2,
    RC2,
    CT2,
    DR2,
    QR2,
    RED2,
    LIM2,
}

impl Group {
    pub const ALL: [Group; 21] = [
        Group::DE1,
        Group::DF1,
        Group::DX1,
        Group::FS1,
        Group::IS1,
        Group::RC1,
        Group::CT1,
        Group::DR1,
        Group::QR1,
        Group::RED1,
        Group::LIM1,
        Group::DE2,
        Group::DX2,
        Group::FS2,
        Group::IS2,
        Group::RC2,
        Group::CT2,
        Group::DR2,
        Group::QR2,
        Group::RED2,
        Group::LIM2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::DE1 => "DE1",
            Group::DF1 => "DF1",
            Group::DX1 => "DX1",
            Group::FS1 => "FS1",
            Group::IS1 => "IS1",
            Group::RC1 => "RC1",
            Group::CT1 => "CT1",
            Group::DR1 => "DR1",
            Group::QR1 => "QR1",
            Group::RED1 => "RED1",
            Group::LIM1 => "LIM1",
            Group::DE2 => "DE2",
            Group::DX2 => "DX2",
            Group::FS2 => "FS2",
            Group::IS2 => "IS2",
            Group::RC2 => "RC2",
            Group::CT2 => "CT2",
            Group::DR2 => "DR2",
            Group::QR2 => "QR2",
            Group::RED2 => "RED2",
            Group::LIM2 => "LIM2",
        }
    }

    pub fn from_name(name: &str) -> Result<Group> {
        Group::ALL
            .iter()
            .copied()
            .find(|g| g.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownGroup(name.to_string()))
    }

    /// Whether the group concerns the second discrete form.
    pub fn second_form(self) -> bool {
        matches!(
            self,
            Group::DE2
                | Group::DX2
                | Group::FS2
                | Group::IS2
                | Group::RC2
                | Group::CT2
                | Group::DR2
                | Group::QR2
                | Group::RED2
                | Group::LIM2
        )
    }

    pub fn expected_count(self) -> usize {
        match self {
            Group::DE1 | Group::DE2 => 2,
            Group::DF1 => 4,
            Group::DX1 => 6,
            Group::DX2 => 8,
            Group::FS1 | Group::FS2 => 2,
            Group::IS1 | Group::IS2 => 1,
            Group::RC1 | Group::RC2 => 7,
            Group::CT1 | Group::CT2 => 10,
            Group::DR1 | Group::DR2 | Group::QR1 => 45,
            Group::QR2 => 17,
            Group::RED1 => 4,
            Group::RED2 => 2,
            Group::LIM1 | Group::LIM2 => 2,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Summation over `j`; `hi = None` means the infinite sum truncated at
/// [`INFINITE_SUM_TERMS`].
#[derive(Clone, Debug, PartialEq)]
pub struct SumSpec {
    pub lo: IntExpr,
    pub hi: Option<IntExpr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub sum: Option<SumSpec>,
    pub expr: OperatorExpr,
}

impl Term {
    pub fn one(expr: OperatorExpr) -> Self {
        Term { sum: None, expr }
    }

    pub fn summed(lo: IntExpr, hi: IntExpr, expr: OperatorExpr) -> Self {
        Term {
            sum: Some(SumSpec { lo, hi: Some(hi) }),
            expr,
        }
    }

    pub fn series(expr: OperatorExpr) -> Self {
        Term {
            sum: Some(SumSpec { lo: 0.into(), hi: None }),
            expr,
        }
    }

    fn ops(&self) -> impl Iterator<Item = Op> + '_ {
        self.expr.factors.iter().flat_map(|f| {
            let base = match f {
                FactorSpec::Single(b) => b,
                FactorSpec::Rising { base, .. } | FactorSpec::Falling { base, .. } | FactorSpec::Power { base, .. } => {
                    base
                }
            };
            base.ops.iter().map(|(_, o)| *o)
        })
    }
}

/// Machine-checkable parameter constraints.
#[derive(Clone, Debug, PartialEq)]
pub enum Constraint {
    /// The expression must not be a nonpositive integer.
    NotPole(Expr),
    NonZero(Expr),
    KAtLeast(IntSym, u32),
}

impl Constraint {
    pub fn check<S: Field>(&self, env: &Env<S>) -> Result<()> {
        match self {
            Constraint::NotPole(e) => {
                if e.eval(env)?.nonpositive_integer().is_some() {
                    return Err(Error::Validity(format!("{e} is a nonpositive integer")));
                }
            }
            Constraint::NonZero(e) => {
                if e.eval(env)?.is_zero_value() {
                    return Err(Error::Validity(format!("{e} vanishes")));
                }
            }
            Constraint::KAtLeast(k, min) => {
                if env.k(*k)? < *min {
                    return Err(Error::Validity(format!("needs {} >= {min}", k.name())));
                }
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        match self {
            Constraint::NotPole(e) => format!("{e} not in {{0, -1, -2, ...}}"),
            Constraint::NonZero(e) => format!("{e} != 0"),
            Constraint::KAtLeast(k, min) => format!("{} >= {min}", k.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Relation {
        lhs: Vec<Term>,
        rhs: Vec<Term>,
        /// The relation as printed, when it differs from the checked form.
        printed: Option<(Vec<Term>, Vec<Term>)>,
    },
    Limit(XiVariant),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub id: String,
    pub group: Group,
    /// Human-readable statement of the checked form.
    pub formula: String,
    pub note: Option<String>,
    pub body: Body,
    pub constraints: Vec<Constraint>,
    /// Integer parameter (`r` or `s`) that the panel sweeps.
    pub free: Option<IntSym>,
    pub needs_z: bool,
}

impl Identity {
    pub fn relation(id: String, group: Group, formula: &str, lhs: Vec<Term>, rhs: Vec<Term>) -> Self {
        let mut ident = Identity {
            id,
            group,
            formula: formula.to_string(),
            note: None,
            body: Body::Relation {
                lhs,
                rhs,
                printed: None,
            },
            constraints: vec![],
            free: None,
            needs_z: false,
        };
        ident.derive_constraints();
        ident
    }

    pub fn with_free(mut self, v: IntSym) -> Self {
        self.free = Some(v);
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    pub fn with_constraint(mut self, c: Constraint) -> Self {
        if !self.constraints.contains(&c) {
            self.constraints.push(c);
        }
        self
    }

    pub fn with_printed(mut self, lhs: Vec<Term>, rhs: Vec<Term>) -> Self {
        if let Body::Relation { printed, .. } = &mut self.body {
            *printed = Some((lhs, rhs));
        }
        self
    }

    pub fn is_typo_normalized(&self) -> bool {
        matches!(&self.body, Body::Relation { printed: Some(_), .. })
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let (lhs, rhs): (&[Term], &[Term]) = match &self.body {
            Body::Relation { lhs, rhs, .. } => (lhs, rhs),
            Body::Limit(_) => (&[], &[]),
        };
        lhs.iter().chain(rhs.iter())
    }

    fn derive_constraints(&mut self) {
        let mut found = Vec::new();
        for term in self.terms() {
            for op in term.ops() {
                let c = match op {
                    Op::BigTheta1 => Constraint::KAtLeast(IntSym::K1, 1),
                    Op::BigTheta2 => Constraint::KAtLeast(IntSym::K2, 1),
                    Op::BigTheta => Constraint::KAtLeast(IntSym::K, 1),
                    Op::Theta | Op::Phi => continue,
                };
                if !found.contains(&c) {
                    found.push(c);
                }
            }
        }
        self.constraints.extend(found);
        self.constraints.insert(0, Constraint::NotPole(Expr::Sym(crate::expr::Sym::C)));
    }

    pub fn check_validity<S: Field>(&self, env: &Env<S>) -> Result<()> {
        self.constraints.iter().try_for_each(|c| c.check(env))
    }

    pub fn descriptor(&self) -> IdentityDescriptor {
        IdentityDescriptor {
            id: self.id.clone(),
            group: self.group,
            formula: self.formula.clone(),
            note: self.note.clone(),
            constraints: self.constraints.iter().map(Constraint::describe).collect(),
            free: self.free.map(|v| v.name().to_string()),
            typo_normalized: self.is_typo_normalized(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityDescriptor {
    pub id: String,
    pub group: Group,
    pub formula: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub constraints: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free: Option<String>,
    pub typo_normalized: bool,
}

/// All identities in stable order.
pub fn catalog() -> &'static [Identity] {
    static CATALOG: OnceLock<Vec<Identity>> = OnceLock::new();
    CATALOG.get_or_init(|| entries::build().expect("built-in identity table parses"))
}

pub fn find(id: &str) -> Result<&'static Identity> {
    catalog()
        .iter()
        .find(|i| i.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

pub fn by_group(group: Group) -> impl Iterator<Item = &'static Identity> {
    catalog().iter().filter(move |i| i.group == group)
}

/// Descriptors for one group, or for everything when `filter` is `None`.
pub fn list_identities(filter: Option<Group>) -> Vec<IdentityDescriptor> {
    catalog()
        .iter()
        .filter(|i| filter.is_none_or(|g| i.group == g))
        .map(Identity::descriptor)
        .collect()
}
