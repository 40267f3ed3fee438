use crate::algebra::{
    aw_algebra_residuals, big_qjacobi_algebra_residuals, resolve_ordering, AWAlgebraConstants,
    BigQJacobiConstants, Ordering,
};
use crate::families::{
    askey_wilson, big_q_jacobi, claimed_spectrum, eval_monic, monic_polynomial, q_hahn,
    q_para_krawtchouk, verify_spectrum, AWParams, MonicRecurrence,
};
use crate::numerics::TolerancePolicy;
use crate::opmatrix::{q_commutator_defect, q_commutator_residual, BandMatrix, ResidualReport};
use crate::representation::{
    b_side_identification, build_general, canonical_pair, decompose as split, xi_residuals,
    GeneralParams, StructuredParams,
};
use crate::tridiagonalization::{
    aw_match, aw_parameter_map, big_q_jacobi_matrix, build_b_from_a, build_w, finite_family_pair,
    qdiff_eigen_check, qdiff_oscillator_check, to_monic,
};
use crate::{Error, Result};

use super::report::{Cell, Check, Echo, RunReport, Table};
use super::{FiniteFamily, Pair, ParamArgs, Parameterization, PolyFamily, Suite};

pub struct Ctx {
    pub p: ParamArgs,
    pub pol: TolerancePolicy,
}

impl Ctx {
    fn echo(&self) -> Echo {
        let mut e = Echo::default();
        e.num("abs_tol", self.pol.abs_tol).num("rel_tol", self.pol.rel_tol);
        e
    }

    fn general(&self, e: &mut Echo) -> (GeneralParams<f64>, usize) {
        let p = &self.p;
        let g = GeneralParams::new(
            p.q.unwrap_or(0.7),
            p.xi0.unwrap_or(1.0),
            p.zeta0.unwrap_or(0.2),
            p.s1.unwrap_or(0.1),
            p.s2.unwrap_or(0.3),
        );
        let size = p.size.unwrap_or(12);
        e.num("q", g.q)
            .num("xi0", g.xi0)
            .num("zeta0", g.zeta0)
            .num("s1", g.s1)
            .num("s2", g.s2)
            .int("size", size);
        (g, size)
    }

    fn structured(&self, e: &mut Echo, defaults: [f64; 4], size: usize) -> (StructuredParams<f64>, usize) {
        let p = &self.p;
        let s = StructuredParams::new(
            p.q.unwrap_or(defaults[0]),
            p.c1.unwrap_or(defaults[1]),
            p.c2.unwrap_or(defaults[2]),
            p.c3.unwrap_or(defaults[3]),
        );
        let size = p.size.unwrap_or(size);
        e.num("q", s.q)
            .num("c1", s.c1)
            .num("c2", s.c2)
            .num("c3", s.c3)
            .int("size", size);
        (s, size)
    }

    fn aw(&self, e: &mut Echo) -> AWParams<f64> {
        let p = &self.p;
        let a = AWParams::new(
            p.q.unwrap_or(0.5),
            p.a1.unwrap_or(0.3),
            p.a2.unwrap_or(0.4),
            p.a3.unwrap_or(0.5),
            p.a4.unwrap_or(0.6),
        );
        e.num("q", a.q)
            .num("a1", a.a1)
            .num("a2", a.a2)
            .num("a3", a.a3)
            .num("a4", a.a4);
        a
    }

    fn finite(&self, e: &mut Echo, family: FiniteFamily) -> Result<MonicRecurrence<f64>> {
        let p = &self.p;
        let q = p.q.unwrap_or(0.5);
        let n = p.big_n.unwrap_or(3);
        e.num("q", q);
        match family {
            FiniteFamily::QHahn => {
                let (c1, c2) = (p.c1.unwrap_or(0.25), p.c2.unwrap_or(0.5));
                e.num("c1", c1).num("c2", c2).int("n", n).text("family", "q-hahn");
                q_hahn(&c1, &c2, &q, n)
            }
            FiniteFamily::QParaKrawtchouk => {
                let c3 = p.c3.unwrap_or(0.2);
                e.num("c3", c3).int("n", n).text("family", "q-para-krawtchouk");
                q_para_krawtchouk(&c3, &q, n)
            }
        }
    }
}

fn band_table(name: &str, m: &BandMatrix<f64>) -> Table {
    let mut t = Table::new(name, &["n", "sub", "diag", "sup"]);
    let n = m.size();
    for i in 0..n {
        let sub = if i + 1 < n { m.get(i + 1, i) } else { 0.0 };
        let sup = if i + 1 < n { m.get(i, i + 1) } else { 0.0 };
        t.push(vec![i.into(), sub.into(), m.get(i, i).into(), sup.into()]);
    }
    t
}

fn constants_table(rows: &[(&str, f64)]) -> Table {
    let mut t = Table::new("constants", &["name", "value"]);
    for (k, v) in rows {
        t.push(vec![(*k).into(), (*v).into()]);
    }
    t
}

fn recurrence_table(rec: &MonicRecurrence<f64>) -> Table {
    let mut t = Table::new("recurrence", &["n", "b", "u"]);
    for n in 0..rec.len() {
        t.push(vec![n.into(), rec.b[n].into(), rec.u_n(n).into()]);
    }
    t
}

/// Full-row q-commutator report for pairs that are exact finite
/// representations.
fn full_qosc(a: &BandMatrix<f64>, b: &BandMatrix<f64>, q: f64, pol: &TolerancePolicy) -> Result<ResidualReport> {
    let n = a.size();
    let d = q_commutator_defect(a, b, &q, &BandMatrix::identity(n))?;
    Ok(ResidualReport::from_defect(&d, 0..n, pol.scale_for(a.norm_inf(), b.norm_inf()), pol))
}

/// Verification refusals become failing checks; anything else is a
/// parameter error.
fn refusal_as_check(name: &str, e: Error) -> Result<Check> {
    match e {
        Error::SpectrumMismatch(_)
        | Error::NotDecomposable(_)
        | Error::UnsupportedSpectrum(_)
        | Error::NumericFailure(_) => Ok(Check {
            name: format!("{name}: {e}"),
            max_abs: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
        }),
        other => Err(other),
    }
}

pub fn build(ctx: &Ctx, kind: Parameterization) -> Result<RunReport> {
    let mut e = ctx.echo();
    match kind {
        Parameterization::General => {
            e.text("parameterization", "general");
            let (g, size) = ctx.general(&mut e);
            let (a, b, tr) = build_general(&g, size)?;
            let mut r = RunReport::new("build", e);
            r.check("qosc", &q_commutator_residual(&a, &b, &g.q, &BandMatrix::identity(size), &ctx.pol)?);
            let scale = ctx.pol.scale_for(a.norm_inf(), b.norm_inf());
            let xi = xi_residuals(&a, &b, &g.q)?;
            for (k, rep) in xi.reports(scale, &ctx.pol).iter().enumerate() {
                r.check(&format!("xi{}", k + 1), rep);
            }
            let mut t = Table::new(
                "trace",
                &["n", "xi", "zeta", "z", "gamma", "y", "K", "b", "eta", "u", "V"],
            );
            for n in 0..size {
                t.push(vec![
                    n.into(),
                    tr.xi[n].into(),
                    tr.zeta[n].into(),
                    tr.z[n].into(),
                    tr.gamma[n].into(),
                    tr.y[n].into(),
                    tr.k[n].into(),
                    tr.b[n].into(),
                    tr.eta[n].into(),
                    tr.u[n].into(),
                    tr.v[n].into(),
                ]);
            }
            r.tables = vec![
                band_table("A", &a),
                band_table("B", &b),
                t,
                constants_table(&[("s0", tr.s0)]),
            ];
            Ok(r)
        }
        Parameterization::Structured => {
            e.text("parameterization", "structured");
            let (s, size) = ctx.structured(&mut e, [0.5, 0.25, 0.5, 0.25], 10);
            let a = big_q_jacobi_matrix(&s, size)?;
            let b = build_b_from_a(&s, size)?;
            let rec = big_q_jacobi(&s, size)?;
            let k = BigQJacobiConstants::new(&s);
            let mut r = RunReport::new("build", e);
            r.check("qosc", &q_commutator_residual(&a, &b, &s.q, &BandMatrix::identity(size), &ctx.pol)?);
            r.check("b-side-identification", &b_side_identification(&s, size, &ctx.pol)?);
            r.tables = vec![
                band_table("A", &a),
                band_table("B", &b),
                recurrence_table(&rec),
                constants_table(&[
                    ("b0", rec.b[0]),
                    ("r0", s.r0()),
                    ("r1", s.r1()),
                    ("kappa", s.kappa()),
                    ("xi0_sigma2", s.xi0()),
                    ("gamma1", k.gamma1),
                    ("delta1", k.delta1),
                    ("gamma2", k.gamma2),
                    ("delta2", k.delta2),
                ]),
            ];
            Ok(r)
        }
    }
}

const ALGEBRA_DEFAULTS: [f64; 4] = [0.7, 0.3, 0.4, 0.2];

pub fn verify(ctx: &Ctx, command: &str, suite: Suite, pair: Pair) -> Result<RunReport> {
    let mut e = ctx.echo();
    let pol = &ctx.pol;
    match suite {
        Suite::Qosc => {
            e.text("suite", "qosc");
            let (a, b, q, interior) = match pair {
                Pair::Canonical => {
                    e.text("pair", "canonical");
                    let (a0, q, size) = (
                        ctx.p.a.unwrap_or(1.0),
                        ctx.p.q.unwrap_or(0.5),
                        ctx.p.size.unwrap_or(8),
                    );
                    e.num("a", a0).num("q", q).int("size", size);
                    let (a, b) = canonical_pair(&a0, &q, size)?;
                    (a, b, q, false)
                }
                Pair::General => {
                    e.text("pair", "general");
                    let (g, size) = ctx.general(&mut e);
                    let (a, b, _) = build_general(&g, size)?;
                    (a, b, g.q, true)
                }
                Pair::Structured => {
                    e.text("pair", "structured");
                    let (s, size) = ctx.structured(&mut e, [0.5, 0.25, 0.5, 0.25], 10);
                    (big_q_jacobi_matrix(&s, size)?, build_b_from_a(&s, size)?, s.q, true)
                }
                Pair::QHahn | Pair::QParaKrawtchouk => {
                    e.text("pair", "finite-family");
                    let fam = if pair == Pair::QHahn {
                        FiniteFamily::QHahn
                    } else {
                        FiniteFamily::QParaKrawtchouk
                    };
                    let rec = ctx.finite(&mut e, fam)?;
                    let q = ctx.p.q.unwrap_or(0.5);
                    let (a, b) = finite_family_pair(&rec)?;
                    (a, b, q, false)
                }
            };
            let mut r = RunReport::new(command, e);
            let rep = if interior {
                q_commutator_residual(&a, &b, &q, &BandMatrix::identity(a.size()), pol)?
            } else {
                full_qosc(&a, &b, q, pol)?
            };
            r.check("qosc", &rep);
            Ok(r)
        }
        Suite::BigqjacobiAlgebra => {
            e.text("suite", "bigqjacobi-algebra");
            let (s, size) = ctx.structured(&mut e, ALGEBRA_DEFAULTS, 14);
            let reps = big_qjacobi_algebra_residuals(&s, size, pol)?;
            let k = BigQJacobiConstants::new(&s);
            let mut r = RunReport::new(command, e);
            for (name, rep) in ["ab-relation", "bz-relation", "za-relation"].iter().zip(&reps) {
                r.check(name, rep);
            }
            r.tables = vec![constants_table(&[
                ("gamma1", k.gamma1),
                ("delta1", k.delta1),
                ("gamma2", k.gamma2),
                ("delta2", k.delta2),
            ])];
            Ok(r)
        }
        Suite::AwAlgebra => {
            e.text("suite", "aw-algebra");
            let (s, size) = ctx.structured(&mut e, ALGEBRA_DEFAULTS, 14);
            let mu = ctx.p.mu.unwrap_or(0.3);
            e.num("mu", mu);
            let rep = aw_algebra_residuals(&s, &mu, size, pol, Ordering::ML)?;
            let res = resolve_ordering(&s, &mu, size, pol)?;
            let k = AWAlgebraConstants::new(&s, &mu);
            let mut r = RunReport::new(command, e);
            r.check("m-definition", &rep.m_definition);
            r.check("zm-relation", &rep.zm);
            r.check("ml-relation", &rep.second);
            let mut t = Table::new("ordering", &["ordering", "max_abs", "tolerance", "pass"]);
            for (name, x) in [("ML", &res.ml), ("LM", &res.lm)] {
                t.push(vec![
                    name.into(),
                    x.max_abs.into(),
                    x.tolerance.into(),
                    if x.pass { "true" } else { "false" }.into(),
                ]);
            }
            r.tables = vec![
                t,
                constants_table(&[
                    ("omega0", k.omega0),
                    ("sigma1", k.sigma1),
                    ("omega1", k.omega1),
                    ("sigma2", k.sigma2),
                    ("omega2", k.omega2),
                ]),
            ];
            Ok(r)
        }
        Suite::AwMatch => {
            e.text("suite", "aw-match");
            let p = ctx.aw(&mut e);
            let count = ctx.p.size.unwrap_or(21);
            e.int("size", count);
            let rep = aw_match(&p, count, pol)?;
            let (sp, w) = aw_parameter_map(&p)?;
            let (got, _) = to_monic(&build_w(&sp, &w, count)?, pol)?;
            let want = askey_wilson(&p, count)?;
            let mut r = RunReport::new(command, e);
            r.check("aw-match", &rep);
            let mut t = Table::new("coefficients", &["n", "b_w", "b_aw", "u_w", "u_aw"]);
            for n in 0..count {
                t.push(vec![
                    n.into(),
                    got.b[n].into(),
                    want.b[n].into(),
                    got.u_n(n).into(),
                    want.u_n(n).into(),
                ]);
            }
            r.tables = vec![t];
            Ok(r)
        }
        Suite::Qdiff => {
            e.text("suite", "qdiff");
            let (s, _) = ctx.structured(&mut e, [0.6, 1.0 / 3.0, 0.75, 2.0 / 7.0], 9);
            let mut r = RunReport::new(command, e);
            r.check("oscillator-monomials", &qdiff_oscillator_check(&s, 10, pol)?);
            r.check("z-eigenfunctions", &qdiff_eigen_check(&s, 8, pol)?);
            Ok(r)
        }
    }
}

fn expected_blocks(family: FiniteFamily, n: usize) -> Vec<usize> {
    match family {
        FiniteFamily::QHahn => vec![n + 1],
        FiniteFamily::QParaKrawtchouk => vec![(n + 1) / 2; 2],
    }
}

fn decomposition_into(
    r: &mut RunReport,
    ctx: &Ctx,
    family: FiniteFamily,
    rec: &MonicRecurrence<f64>,
    q: f64,
) -> Result<()> {
    let (a, b) = finite_family_pair(rec)?;
    match split(&a, &b, &q, &ctx.pol) {
        Ok(d) => {
            let sizes: Vec<usize> = d.blocks.iter().map(|b| b.size).collect();
            let want = expected_blocks(family, rec.len() - 1);
            let dev = if sizes.len() == want.len() {
                sizes.iter().zip(&want).map(|(x, y)| x.abs_diff(*y)).sum::<usize>()
            } else {
                sizes.len().abs_diff(want.len()) + rec.len()
            };
            r.checks.push(Check::exact("block-structure", dev as f64));
            r.check("off-block", &d.off_block);
            let mut t = Table::new("blocks", &["block", "index", "eigenvalue"]);
            for (k, bl) in d.blocks.iter().enumerate() {
                for (i, x) in bl.spectrum.iter().enumerate() {
                    t.push(vec![k.into(), i.into(), (*x).into()]);
                }
            }
            r.tables.push(t);
        }
        Err(e) => r.checks.push(refusal_as_check("decompose", e)?),
    }
    Ok(())
}

pub fn spectrum(ctx: &Ctx, family: FiniteFamily, with_decomposition: bool) -> Result<RunReport> {
    let mut e = ctx.echo();
    let rec = ctx.finite(&mut e, family)?;
    let q = ctx.p.q.unwrap_or(0.5);
    e.text("decompose", if with_decomposition { "true" } else { "false" });
    let lat = claimed_spectrum(&rec)?;
    let mut r = RunReport::new("spectrum", e);
    match verify_spectrum(&rec, &lat, &ctx.pol) {
        Ok(c) => {
            r.check("char-poly", &c.char_poly);
            r.check("pairing", &c.pairing);
            let mut t = Table::new("spectrum", &["s", "lattice", "eigenvalue", "rel_distance"]);
            for (s, (&x, &j)) in lat.points.iter().zip(&c.pairs).enumerate() {
                let ev = c.eigenvalues[j];
                t.push(vec![s.into(), x.into(), ev.into(), ((ev - x).abs() / x.abs()).into()]);
            }
            r.tables.push(t);
        }
        Err(err) => r.checks.push(refusal_as_check("spectrum", err)?),
    }
    if with_decomposition {
        decomposition_into(&mut r, ctx, family, &rec, q)?;
    }
    Ok(r)
}

pub fn decompose(ctx: &Ctx, family: FiniteFamily) -> Result<RunReport> {
    let mut e = ctx.echo();
    let rec = ctx.finite(&mut e, family)?;
    let q = ctx.p.q.unwrap_or(0.5);
    let mut r = RunReport::new("decompose", e);
    decomposition_into(&mut r, ctx, family, &rec, q)?;
    Ok(r)
}

pub fn poly(ctx: &Ctx, family: PolyFamily, n_max: Option<usize>, xs: &[f64]) -> Result<RunReport> {
    let mut e = ctx.echo();
    let requested = n_max;
    let n_max = n_max.unwrap_or(5);
    let rec = match family {
        PolyFamily::BigQJacobi => {
            e.text("family", "big-q-jacobi");
            let (s, _) = ctx.structured(&mut e, [0.5, 0.25, 0.5, 0.25], n_max + 1);
            big_q_jacobi(&s, n_max + 1)?
        }
        PolyFamily::AskeyWilson => {
            e.text("family", "askey-wilson");
            askey_wilson(&ctx.aw(&mut e), n_max + 1)?
        }
        PolyFamily::QHahn => ctx.finite(&mut e, FiniteFamily::QHahn)?,
        PolyFamily::QParaKrawtchouk => ctx.finite(&mut e, FiniteFamily::QParaKrawtchouk)?,
    };
    // Without an explicit --n-max a finite family shows all its polynomials.
    let n_max = if requested.is_none() { n_max.min(rec.len()) } else { n_max };
    if n_max > rec.len() {
        return Err(Error::OutOfRange(format!(
            "n_max = {n_max} exceeds the {} available coefficients",
            rec.len()
        )));
    }
    e.int("n_max", n_max);
    let mut r = RunReport::new("poly", e);
    let mut t = Table::new("polynomials", &["n", "x", "value"]);
    let (mut worst, mut scale) = (0.0f64, 1.0f64);
    let mut loc = (0, 0);
    for n in 0..=n_max {
        let expanded = monic_polynomial(&rec, n)?;
        for (i, x) in xs.iter().enumerate() {
            let v = eval_monic(&rec, n, x)?;
            let d = (v - expanded.eval(x)?).abs();
            if d > worst || d.is_nan() {
                worst = d;
                loc = (n, i);
            }
            scale = scale.max(v.abs()).max(expanded.mass() * x.abs().max(1.0).powi(n as i32));
            t.push(vec![n.into(), (*x).into(), Cell::Num(v)]);
        }
    }
    r.check(
        "recurrence-vs-expansion",
        &ResidualReport::from_value(worst, loc, 0..n_max + 1, scale, &ctx.pol),
    );
    r.tables.push(t);
    Ok(r)
}
