use crate::error::Result;
use crate::expr::{binom, cpow, falling, iv, ival, n, poch, pow, s, Expr, IntExpr, IntSym, Sym};
use crate::operator::{
    AffineFactor, FactorSpec, Family, KdfTemplate, ListItem, Op, OperatorExpr, ParamShift, PointMap, TSel,
};
use crate::series::XiVariant;

use super::dsl::parse_relation;
use super::relations::{CONTIGUOUS, DIFFERENCE_RECURSIONS_1, DIFFERENCE_RECURSIONS_2, DIFFERENTIAL_RECURSIONS, QR1_PRINTED_17};
use super::{Body, Constraint, Group, Identity, Term};

use IntSym::{Idx as J, K, K1, K2, R, S as SI};
use Sym::{A1, A2, B1, B2, C, T, T1, T2, X, Y, Z};

/// The pieces that differ between the x and y directions of one form.
#[derive(Clone, Copy)]
struct Axis {
    a: Sym,
    b: Sym,
    var: Sym,
    t: Sym,
    k: IntSym,
    theta: Op,
    euler: Op,
}

fn axes(second: bool) -> [Axis; 2] {
    let (t1, t2, k1, k2, o1, o2) = if second {
        (T, T, K, K, Op::BigTheta, Op::BigTheta)
    } else {
        (T1, T2, K1, K2, Op::BigTheta1, Op::BigTheta2)
    };
    [
        Axis {
            a: A1,
            b: B1,
            var: X,
            t: t1,
            k: k1,
            theta: o1,
            euler: Op::Theta,
        },
        Axis {
            a: A2,
            b: B2,
            var: Y,
            t: t2,
            k: k2,
            theta: o2,
            euler: Op::Phi,
        },
    ]
}

fn family(second: bool) -> Family {
    if second {
        Family::Disc2
    } else {
        Family::Disc1
    }
}

fn f(fam: &Family) -> OperatorExpr {
    OperatorExpr::plain(fam.clone())
}

fn shift(pairs: Vec<(Sym, IntExpr)>) -> ParamShift {
    ParamShift::by(pairs)
}

fn single(constant: Expr, ops: &[Op]) -> FactorSpec {
    FactorSpec::Single(AffineFactor::plus(constant, ops))
}

fn id(group: Group, i: usize) -> String {
    format!("{}-{}", group.name(), i)
}

fn tname(ax: &Axis) -> &'static str {
    ax.t.name()
}

fn difference_equations(second: bool) -> Vec<Identity> {
    let fam = family(second);
    let group = if second { Group::DE2 } else { Group::DE1 };
    let mut out = Vec::new();
    for (i, ax) in axes(second).iter().enumerate() {
        let rho = shift(vec![(ax.t, -iv(ax.k))]);
        let p = falling(s(ax.t), iv(ax.k));
        let (first, coef, formula) = if second {
            let e = f(&fam)
                .with_factor(single(n(0), &[ax.euler]))
                .with_factor(single(s(C) - n(1), &[Op::BigTheta]));
            let op = ax.euler.name();
            (
                e,
                -(p * s(ax.var)),
                format!(
                    "{op} (T + c - 1) F - P(t, k) {v} rho_t^k ({a} + {op}) ({b} + {op}) F = 0",
                    v = ax.var.name(),
                    a = ax.a.name(),
                    b = ax.b.name()
                ),
            )
        } else {
            let e = f(&fam)
                .with_scalar(ival(iv(ax.k)))
                .with_factor(single(n(0), &[ax.theta]))
                .with_factor(single(s(C) - n(1), &[Op::BigTheta1, Op::BigTheta2]));
            let th = ax.theta.name();
            (
                e,
                -(ival(iv(ax.k)) * p * s(ax.var)),
                format!(
                    "{k} {th} (T1 + T2 + c - 1) F - {k} P({t}, {k}) {v} rho_{t}^{k} ({th} + {a}) ({th} + {b}) F = 0",
                    k = ax.k.name(),
                    t = tname(ax),
                    v = ax.var.name(),
                    a = ax.a.name(),
                    b = ax.b.name()
                ),
            )
        };
        let inner = if second { ax.euler } else { ax.theta };
        let second_term = f(&fam)
            .with_scalar(coef)
            .with_factor(single(s(ax.a), &[inner]))
            .with_factor(single(s(ax.b), &[inner]))
            .with_shift(rho);
        out.push(Identity::relation(
            id(group, i + 1),
            group,
            &formula,
            vec![Term::one(first), Term::one(second_term)],
            vec![],
        ));
    }
    out
}

/// `prod_{j<r}(op - j) F = (a)_r (b)_r P(t, r k) v^r / (c)_r F(a+r, b+r, c+r, t-rk)`.
fn euler_power(fam: &Family, ax: &Axis, group: Group, index: usize, second: bool) -> Identity {
    let rk = iv(R) * iv(ax.k);
    let rhs = f(fam)
        .with_scalar(poch(s(ax.a), iv(R)) * poch(s(ax.b), iv(R)) * falling(s(ax.t), rk.clone()) * pow(s(ax.var), iv(R))
            / poch(s(C), iv(R)))
        .with_shift(shift(vec![(ax.a, iv(R)), (ax.b, iv(R)), (C, iv(R)), (ax.t, -rk)]));
    let base = AffineFactor::op(ax.euler);
    let lhs = f(fam).with_factor(FactorSpec::Falling {
        base: base.clone(),
        len: iv(R),
    });
    let printed = f(fam).with_factor(FactorSpec::Power { base, len: iv(R) });
    let op = ax.euler.name();
    let t = if second { "t" } else { tname(ax) };
    let k = ax.k.name();
    let formula = format!(
        "{op} ({op} - 1) ... ({op} - r + 1) F = ({a})_r ({b})_r P({t}, r {k}) {v}^r / (c)_r F[{a}+r, {b}+r, c+r, {t}-r {k}]",
        a = ax.a.name(),
        b = ax.b.name(),
        v = ax.var.name()
    );
    Identity::relation(id(group, index), group, &formula, vec![Term::one(lhs)], vec![Term::one(rhs.clone())])
        .with_free(R)
        .with_printed(vec![Term::one(printed)], vec![Term::one(rhs)])
        .with_note("printed with the plain power of the Euler operator; the falling product is the form that holds for r > 1")
}

fn difference_formulas() -> Vec<Identity> {
    let fam = Family::Disc1;
    let mut out = Vec::new();
    for (i, ax) in axes(false).iter().enumerate() {
        let sel = if i == 0 { TSel::T1 } else { TSel::T2 };
        let unit_k = ParamShift {
            offsets: vec![],
            k_override: vec![(ax.k, 1)],
        };
        let lhs = f(&fam).with_delta(sel, iv(R)).with_shift(unit_k);
        let rhs = f(&fam)
            .with_scalar(poch(s(ax.a), iv(R)) * poch(s(ax.b), iv(R)) * pow(s(ax.var), iv(R)) / poch(s(C), iv(R)))
            .with_shift(ParamShift {
                offsets: vec![(ax.a, iv(R)), (ax.b, iv(R)), (C, iv(R))],
                k_override: vec![(ax.k, 1)],
            });
        let formula = format!(
            "Delta_{t}^r F({k} = 1) = ({a})_r ({b})_r {v}^r / (c)_r F[{a}+r, {b}+r, c+r]({k} = 1)",
            t = tname(ax),
            k = ax.k.name(),
            a = ax.a.name(),
            b = ax.b.name(),
            v = ax.var.name()
        );
        out.push(
            Identity::relation(id(Group::DF1, i + 1), Group::DF1, &formula, vec![Term::one(lhs)], vec![Term::one(rhs)])
                .with_free(R),
        );
    }
    for (i, ax) in axes(false).iter().enumerate() {
        out.push(euler_power(&fam, ax, Group::DF1, i + 3, false));
    }
    out
}

fn prefactor_derivatives(second: bool) -> Vec<Identity> {
    let fam = family(second);
    let group = if second { Group::DX2 } else { Group::DX1 };
    let mut out = Vec::new();
    if second {
        for ax in axes(true).iter() {
            let index = out.len() + 1;
            out.push(euler_power(&fam, ax, group, index, true));
        }
    }
    let [ax1, ax2] = axes(second);
    for (p, op) in [(ax1.b, Op::Theta), (ax2.b, Op::Phi), (ax1.a, Op::Theta), (ax2.a, Op::Phi)] {
        let lhs = f(&fam).with_factor(FactorSpec::Rising {
            base: AffineFactor::plus(s(p), &[op]),
            len: iv(R),
        });
        let rhs = f(&fam).with_scalar(poch(s(p), iv(R))).with_shift(shift(vec![(p, iv(R))]));
        let v = if op == Op::Theta { "x" } else { "y" };
        let formula = format!("(d/d{v})^r [{v}^({p} + r - 1) F] = {v}^({p} - 1) ({p})_r F[{p}+r]", p = p.name());
        let index = out.len() + 1;
        out.push(
            Identity::relation(id(group, index), group, &formula, vec![Term::one(lhs)], vec![Term::one(rhs)])
                .with_free(R),
        );
    }
    let points = [
        (
            PointMap {
                x: s(X),
                y: s(X) * s(Y),
            },
            "x",
            "(x, xy)",
        ),
        (
            PointMap {
                x: s(X) * s(Y),
                y: s(Y),
            },
            "y",
            "(xy, y)",
        ),
    ];
    for (point, v, at) in points {
        let lhs = f(&fam)
            .with_factor(FactorSpec::Rising {
                base: AffineFactor::plus(s(C) - ival(iv(R)), &[Op::Theta, Op::Phi]),
                len: iv(R),
            })
            .with_point(point.clone());
        let rhs = f(&fam)
            .with_scalar(pow(n(-1), iv(R)) * poch(n(1) - s(C), iv(R)))
            .with_shift(shift(vec![(C, -iv(R))]))
            .with_point(point);
        let formula = format!(
            "(d/d{v})^r [{v}^(c - 1) F{at}] = (-1)^r (1 - c)_r {v}^(c - r - 1) F[c-r]{at}"
        );
        let index = out.len() + 1;
        out.push(
            Identity::relation(id(group, index), group, &formula, vec![Term::one(lhs)], vec![Term::one(rhs)])
                .with_free(R)
                .with_constraint(Constraint::NotPole(s(C) - ival(iv(R)))),
        );
    }
    out
}

fn finite_sums(second: bool) -> Vec<Identity> {
    let fam = family(second);
    let group = if second { Group::FS2 } else { Group::FS1 };
    let mut out = Vec::new();
    for (i, ax) in axes(second).iter().enumerate() {
        let jk = iv(J) * iv(ax.k);
        let lhs = f(&fam).with_shift(shift(vec![(ax.b, iv(R))]));
        let rhs = f(&fam)
            .with_scalar(
                binom(iv(R), iv(J)) * poch(s(ax.a), iv(J)) * falling(s(ax.t), jk.clone()) * pow(s(ax.var), iv(J))
                    / poch(s(C), iv(J)),
            )
            .with_shift(shift(vec![(ax.a, iv(J)), (ax.b, iv(J)), (C, iv(J)), (ax.t, -jk)]));
        let formula = format!(
            "F[{b}+r] = sum_(s=0..r) C(r, s) ({a})_s P({t}, s {k}) {v}^s / (c)_s F[{a}+s, {b}+s, c+s, {t}-s {k}]",
            a = ax.a.name(),
            b = ax.b.name(),
            t = tname(ax),
            k = ax.k.name(),
            v = ax.var.name()
        );
        out.push(
            Identity::relation(
                id(group, i + 1),
                group,
                &formula,
                vec![Term::one(lhs)],
                vec![Term::summed(0.into(), iv(R), rhs)],
            )
            .with_free(R),
        );
    }
    out
}

fn infinite_sum(second: bool) -> Identity {
    let fam = family(second);
    let group = if second { Group::IS2 } else { Group::IS1 };
    let lhs = f(&fam)
        .with_scalar(poch(s(A1), iv(J)) * pow(s(Z), iv(J)) / poch(n(1), iv(J)))
        .with_shift(shift(vec![(A1, iv(J))]));
    let rhs = f(&fam)
        .with_scalar(cpow(n(1) - s(Z), -s(A1)))
        .with_point(PointMap {
            x: s(X) / (n(1) - s(Z)),
            y: s(Y),
        });
    let mut ident = Identity::relation(
        id(group, 1),
        group,
        "sum_(r>=0) (a1)_r z^r / r! F[a1+r] = (1 - z)^(-a1) F(x / (1 - z), y)",
        vec![Term::series(lhs)],
        vec![Term::one(rhs)],
    )
    .with_constraint(Constraint::NonZero(n(1) - s(Z)));
    ident.needs_z = true;
    ident
}

fn recursions(second: bool) -> Vec<Identity> {
    let fam = family(second);
    let group = if second { Group::RC2 } else { Group::RC1 };
    let [ax1, ax2] = axes(second);
    let p = |ax: &Axis| falling(s(ax.t), iv(ax.k));
    let rho = |ax: &Axis| (ax.t, -iv(ax.k));
    let mut out: Vec<Identity> = Vec::new();
    let mut push = |lhs: OperatorExpr, rhs: Vec<Term>, formula: String, note: Option<&str>, extra: Option<Constraint>| {
        let index = out.len() + 1;
        let mut rhs_terms = vec![Term::one(f(&fam))];
        rhs_terms.extend(rhs);
        let mut ident =
            Identity::relation(id(group, index), group, &formula, vec![Term::one(lhs)], rhs_terms).with_free(SI);
        if let Some(n) = note {
            ident = ident.with_note(n);
        }
        if let Some(c) = extra {
            ident = ident.with_constraint(c);
        }
        out.push(ident);
    };
    for ax in [&ax1, &ax2] {
        let (a, b, v, t, k) = (ax.a.name(), ax.b.name(), ax.var.name(), tname(ax), ax.k.name());
        let coef = p(ax) * s(ax.b) * s(ax.var) / s(C);
        let up = f(&fam)
            .with_scalar(coef.clone())
            .with_shift(shift(vec![(ax.a, iv(J)), (ax.b, 1.into()), (C, 1.into()), rho(ax)]));
        push(
            f(&fam).with_shift(shift(vec![(ax.a, iv(SI))])),
            vec![Term::summed(1.into(), iv(SI), up)],
            format!("F[{a}+s] = F + P({t}, {k}) {b} {v} / c sum_(r=1..s) F[{a}+r, {b}+1, c+1, {t}-{k}]"),
            None,
            None,
        );
        let down = f(&fam)
            .with_scalar(-coef)
            .with_shift(shift(vec![(ax.a, -iv(J)), (ax.b, 1.into()), (C, 1.into()), rho(ax)]));
        push(
            f(&fam).with_shift(shift(vec![(ax.a, -iv(SI))])),
            vec![Term::summed(0.into(), iv(SI) - 1.into(), down)],
            format!("F[{a}-s] = F - P({t}, {k}) {b} {v} / c sum_(r=0..s-1) F[{a}-r, {b}+1, c+1, {t}-{k}]"),
            None,
            None,
        );
    }
    let ax = &ax1;
    let coef = p(ax) * s(A1) * s(X) / s(C);
    let up = f(&fam)
        .with_scalar(coef.clone())
        .with_shift(shift(vec![(A1, 1.into()), (B1, iv(J)), (C, 1.into()), rho(ax)]));
    let (t, k) = (tname(ax), ax.k.name());
    push(
        f(&fam).with_shift(shift(vec![(B1, iv(SI))])),
        vec![Term::summed(1.into(), iv(SI), up)],
        format!("F[b1+s] = F + P({t}, {k}) a1 x / c sum_(r=1..s) F[a1+1, b1+r, c+1, {t}-{k}]"),
        Some("the coefficient is printed as a bare `a`; it is a1"),
        None,
    );
    let down = f(&fam)
        .with_scalar(-coef)
        .with_shift(shift(vec![(A1, 1.into()), (B1, -iv(J)), (C, 1.into()), rho(ax)]));
    push(
        f(&fam).with_shift(shift(vec![(B1, -iv(SI))])),
        vec![Term::summed(0.into(), iv(SI) - 1.into(), down)],
        format!("F[b1-s] = F - P({t}, {k}) a1 x / c sum_(r=0..s-1) F[a1+1, b1-r, c+1, {t}-{k}]"),
        Some("the summand's argument list is printed without a2, which is unchanged"),
        None,
    );
    let mut rhs = Vec::new();
    for ax in [&ax1, &ax2] {
        let denom = (s(C) - ival(iv(J))) * (s(C) - ival(iv(J)) + n(1));
        let term = f(&fam)
            .with_scalar(p(ax) * s(ax.a) * s(ax.b) * s(ax.var) / denom)
            .with_shift(shift(vec![(ax.a, 1.into()), (ax.b, 1.into()), (C, IntExpr::from(2) - iv(J)), rho(ax)]));
        rhs.push(Term::summed(1.into(), iv(SI), term));
    }
    let (t1, k1, t2, k2) = (tname(&ax1), ax1.k.name(), tname(&ax2), ax2.k.name());
    push(
        f(&fam).with_shift(shift(vec![(C, -iv(SI))])),
        rhs,
        format!(
            "F[c-s] = F + P({t1}, {k1}) a1 b1 x sum_(r=1..s) F[a1+1, b1+1, c+2-r, {t1}-{k1}] / ((c-r)(c-r+1)) \
             + P({t2}, {k2}) a2 b2 y sum_(r=1..s) F[a2+1, b2+1, c+2-r, {t2}-{k2}] / ((c-r)(c-r+1))"
        ),
        None,
        Some(Constraint::NotPole(s(C) - ival(iv(SI)))),
    );
    out
}

fn from_list(group: Group, fam: &Family, list: &[&str]) -> Result<Vec<Identity>> {
    list.iter()
        .enumerate()
        .map(|(i, src)| {
            let (lhs, rhs) = parse_relation(src, fam)?;
            Ok(Identity::relation(id(group, i + 1), group, src, lhs, rhs))
        })
        .collect()
}

fn reductions1() -> Vec<Identity> {
    let e = |x: Sym| ListItem::E(s(x));
    let neg_t = |t: Sym| ListItem::E(-s(t));
    let cases: [(u32, u32, &str, KdfTemplate, PointMap); 4] = [
        (0, 0, "F(k1 = 0, k2 = 0) = F3(a1, a2, b1, b2; c; x, y)", KdfTemplate::default(), PointMap::default()),
        (
            1,
            0,
            "F(k1 = 1, k2 = 0) = KdF[-; a1, b1, -t1; a2, b2 / c; -; -](-x, y)",
            KdfTemplate {
                b: vec![e(A1), e(B1), neg_t(T1)],
                c: vec![e(A2), e(B2)],
                d: vec![e(C)],
                ..KdfTemplate::default()
            },
            PointMap { x: -s(X), y: s(Y) },
        ),
        (
            0,
            1,
            "F(k1 = 0, k2 = 1) = KdF[-; a1, b1; a2, b2, -t2 / c; -; -](x, -y)",
            KdfTemplate {
                b: vec![e(A1), e(B1)],
                c: vec![e(A2), e(B2), neg_t(T2)],
                d: vec![e(C)],
                ..KdfTemplate::default()
            },
            PointMap { x: s(X), y: -s(Y) },
        ),
        (
            1,
            1,
            "F(k1 = 1, k2 = 1) = KdF[-; a1, b1, -t1; a2, b2, -t2 / c; -; -](-x, -y)",
            KdfTemplate {
                b: vec![e(A1), e(B1), neg_t(T1)],
                c: vec![e(A2), e(B2), neg_t(T2)],
                d: vec![e(C)],
                ..KdfTemplate::default()
            },
            PointMap { x: -s(X), y: -s(Y) },
        ),
    ];
    cases
        .into_iter()
        .enumerate()
        .map(|(i, (k1, k2, formula, tpl, point))| {
            let lhs = f(&Family::Disc1).with_shift(ParamShift {
                offsets: vec![],
                k_override: vec![(K1, k1), (K2, k2)],
            });
            let rhs = if i == 0 {
                f(&Family::Classical)
            } else {
                f(&Family::Kdf(tpl)).with_point(point)
            };
            Identity::relation(id(Group::RED1, i + 1), Group::RED1, formula, vec![Term::one(lhs)], vec![Term::one(rhs)])
        })
        .collect()
}

fn reductions2() -> Vec<Identity> {
    let at_k = |k: u32| {
        f(&Family::Disc2).with_shift(ParamShift {
            offsets: vec![],
            k_override: vec![(K, k)],
        })
    };
    let classical = Identity::relation(
        id(Group::RED2, 1),
        Group::RED2,
        "F(k = 0) = F3(a1, a2, b1, b2; c; x, y)",
        vec![Term::one(at_k(0))],
        vec![Term::one(f(&Family::Classical))],
    );
    let e = |x: Sym| ListItem::E(s(x));
    let tpl = KdfTemplate {
        a: vec![ListItem::E(-s(T))],
        b: vec![e(A1), e(B1)],
        c: vec![e(A2), e(B2)],
        d: vec![e(C)],
        ..KdfTemplate::default()
    };
    let corrected = f(&Family::Kdf(tpl.clone())).with_point(PointMap { x: -s(X), y: -s(Y) });
    let printed = f(&Family::Kdf(tpl));
    let kdf = Identity::relation(
        id(Group::RED2, 2),
        Group::RED2,
        "F(k = 1) = KdF[-t; a1, b1; a2, b2 / c; -; -](-x, -y)",
        vec![Term::one(at_k(1))],
        vec![Term::one(corrected)],
    )
    .with_printed(vec![Term::one(at_k(1))], vec![Term::one(printed)])
    .with_note("printed with arguments (x, y); the sign of P(t, m + n) requires (-x, -y)");
    vec![classical, kdf]
}

fn limits(second: bool) -> Vec<Identity> {
    let (group, variants) = if second {
        (Group::LIM2, [XiVariant::Xi12, XiVariant::Xi22])
    } else {
        (Group::LIM1, [XiVariant::Xi11, XiVariant::Xi21])
    };
    variants
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let formula = if v.name().ends_with("11") || v.name().ends_with("12") {
                format!("lim_(eps->0) F(b2 = 1/eps; y -> eps y) = {}", v.name())
            } else {
                format!("lim_(eps->0) F(a2 = b2 = 1/eps; y -> eps^2 y) = {}", v.name())
            };
            Identity {
                id: id(group, i + 1),
                group,
                formula,
                note: None,
                body: Body::Limit(*v),
                constraints: vec![Constraint::NotPole(s(C))],
                free: None,
                needs_z: false,
            }
        })
        .collect()
}

pub(super) fn build() -> Result<Vec<Identity>> {
    let mut out = Vec::new();
    out.extend(difference_equations(false));
    out.extend(difference_formulas());
    out.extend(prefactor_derivatives(false));
    out.extend(finite_sums(false));
    out.push(infinite_sum(false));
    out.extend(recursions(false));
    out.extend(from_list(Group::CT1, &Family::Disc1, CONTIGUOUS)?);
    out.extend(from_list(Group::DR1, &Family::Disc1, DIFFERENTIAL_RECURSIONS)?);
    let mut qr1 = from_list(Group::QR1, &Family::Disc1, DIFFERENCE_RECURSIONS_1)?;
    let (plhs, prhs) = parse_relation(QR1_PRINTED_17, &Family::Disc1)?;
    qr1[16] = qr1[16]
        .clone()
        .with_printed(plhs, prhs)
        .with_note("printed with leading coefficient a2 in place of a2 - 1");
    qr1[41] = qr1[41]
        .clone()
        .with_note("printed with a single 1/k in front of the two Theta operators; read as T1 + T2");
    out.extend(qr1);
    out.extend(reductions1());
    out.extend(limits(false));

    out.extend(difference_equations(true));
    out.extend(prefactor_derivatives(true));
    out.extend(finite_sums(true));
    out.push(infinite_sum(true));
    out.extend(recursions(true));
    let mut ct2 = from_list(Group::CT2, &Family::Disc2, CONTIGUOUS)?;
    for ident in &mut ct2[8..] {
        *ident = ident
            .clone()
            .with_note("printed with the first-form symbol; the relation concerns the second form");
    }
    out.extend(ct2);
    out.extend(from_list(Group::DR2, &Family::Disc2, DIFFERENTIAL_RECURSIONS)?);
    out.extend(from_list(Group::QR2, &Family::Disc2, DIFFERENCE_RECURSIONS_2)?);
    out.extend(reductions2());
    out.extend(limits(true));
    Ok(out)
}
