//! Subcommands, their arguments and the computations behind them.

use crate::cache::{self, Cache};
use crate::json;
use crate::reproduce;
use clap::{Args, Subcommand, ValueEnum};
use n2zhu::known;
use n2zhu::pbw::{parse_expr, Pbw};
use n2zhu::poly::Poly;
use n2zhu::reps::{Module, ModuleKind};
use n2zhu::resolutions::{verify_euler, ResolutionSpec, Variant};
use n2zhu::scalar::{fmt_q, parse_q, q};
use n2zhu::superalg::check_super_jacobi;
use n2zhu::zhu::{
    fz_kernel_and_fusion, words_vector, FusionReport, Gl11Element, NsClassification, SpanOptions, Target, Twist,
    ZhuContext, ZhuError,
};
use n2zhu::{Algebra, AlgebraId, Params, Q};
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ParamArgs {
    #[arg(long)]
    pub p: i64,
    #[arg(long)]
    pub pp: i64,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Checks on the Lie superalgebras.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Normal forms in universal enveloping algebras.
    #[command(subcommand)]
    Pbw(PbwCmd),
    /// Singular vectors of presented modules.
    #[command(subcommand)]
    Singular(SingularCmd),
    /// Truncated character of a presented module.
    Char(CharArgs),
    /// Twisted Zhu algebras of the vacuum module.
    #[command(subcommand)]
    Zhu(ZhuCmd),
    /// Fusion through the bimodule of a chiral Verma module at c = -1.
    #[command(subcommand)]
    Fz(FzCmd),
    /// Euler characteristics of resolutions.
    #[command(subcommand)]
    Bgg(BggCmd),
    /// Runs the acceptance criteria.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraCmd {
    /// Super-antisymmetry and super-Jacobi on all modes with |n| <= window.
    CheckJacobi {
        #[arg(long, default_value = "ns2")]
        algebra: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 4)]
        window: i32,
    },
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PbwCmd {
    /// Normal form of an s-expression such as `(* G+_1/2 G-_-1/2)`.
    Reduce {
        #[arg(long, default_value = "ns2")]
        algebra: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        expr: String,
    },
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ModuleArgs {
    /// Module kind: vac, verma-ns2, chiral-verma-ns2, gen-verma-ns2,
    /// verma-affine, gen-verma-affine, relaxed-verma-affine, vacuum-affine,
    /// gl11-verma.
    #[arg(long)]
    pub module: String,
    #[command(flatten)]
    pub params: ParamArgs,
    /// L0 eigenvalue of the top (or the relaxed label).
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    /// Charge of the top.
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<String>,
    /// Label of a generalised Verma module.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i64>,
    /// Central eigenvalue of a gl(1|1) Verma module.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularCmd {
    /// Joint kernel of the raising generators at an absolute weight.
    Search {
        /// Checked against the module kind when given.
        #[arg(long)]
        algebra: Option<String>,
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, allow_hyphen_values = true)]
        level: String,
        #[arg(long, allow_hyphen_values = true)]
        charge: String,
    },
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CharArgs {
    #[command(flatten)]
    pub module: ModuleArgs,
    /// Largest level above the top.
    #[arg(long)]
    pub max_level: String,
    /// Half-width of the relative charge window; defaults to 8 for affine modules.
    #[arg(long)]
    pub window: Option<i64>,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZhuCmd {
    /// Parity-twisted algebra; with --express-singular, the image of the
    /// vacuum singular vector in U(gl(1|1)).
    Sigma {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        express_singular: bool,
        /// Doubled weight cutoff for the graded dimensions.
        #[arg(long, default_value_t = 6)]
        max_l2: i64,
    },
    /// Untwisted algebra; with --polys, the images of the singular vector and
    /// of G+_{-1/2} G-_{-1/2} applied to it in C[h, q].
    Id {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        polys: bool,
        #[arg(long, default_value_t = 8)]
        max_l2: i64,
    },
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FzCmd {
    /// Tensor product with C_j (--j) or C(eps) (--eps).
    Fusion {
        #[arg(long, allow_hyphen_values = true)]
        j: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<i64>,
        /// Use the parity-reversed right module.
        #[arg(long)]
        odd: bool,
    },
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BggCmd {
    /// Compares the alternating sum of term characters with the simple character.
    Verify {
        #[arg(long)]
        variant: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        r: i64,
        #[arg(long, default_value_t = 0)]
        s: i64,
        #[arg(long, allow_hyphen_values = true)]
        j: Option<String>,
        #[arg(long)]
        window: Option<i64>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        max_level: i64,
    },
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ReproduceArgs {
    /// Run every criterion.
    #[arg(long)]
    pub all: bool,
    /// Run only these criteria (1-8).
    #[arg(long, value_delimiter = ',')]
    pub criterion: Vec<u8>,
}

/// Everything a run depends on.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    /// No caching when `None`.
    pub cache_dir: Option<PathBuf>,
}

/// Exit code, standard output and an optional diagnostic for standard error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
    pub message: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Invalid(String),
    /// A computation failed: exit code 1.
    Failed(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn zhu_err(e: ZhuError) -> CliError {
    match e {
        ZhuError::NotAModule(..) | ZhuError::OutOfRange(..) | ZhuError::Unsupported(_) => invalid(e),
        _ => failed(e),
    }
}

fn reps_err(e: n2zhu::reps::RepsError) -> CliError {
    use n2zhu::reps::RepsError::*;
    match e {
        Eigen(_) | UnknownKind(_) | Weight(..) | NotIntegral(_) | Unsupported(_) => invalid(e),
        _ => failed(e),
    }
}

fn res_err(e: n2zhu::resolutions::ResolutionError) -> CliError {
    use n2zhu::resolutions::ResolutionError::*;
    match e {
        Reps(r) => reps_err(r),
        Depth { .. } => failed(e),
        _ => invalid(e),
    }
}

pub fn rational(s: &str, name: &str) -> Result<Q, CliError> {
    parse_q(s).ok_or_else(|| CliError::Invalid(format!("--{name} `{s}` is not a rational of the form num/den")))
}

fn opt_rational(s: &Option<String>, name: &str) -> Result<Option<Q>, CliError> {
    s.as_deref().map(|x| rational(x, name)).transpose()
}

pub fn params(a: &ParamArgs) -> Result<Params, CliError> {
    Params::new(a.p, a.pp).map_err(invalid)
}

fn module(a: &ModuleArgs) -> Result<Module, CliError> {
    let params = params(&a.params)?;
    let kind = ModuleKind::parse(&a.module).map_err(reps_err)?;
    Module::present(kind, &params, opt_rational(&a.h, "h")?, opt_rational(&a.j, "j")?, a.m, opt_rational(&a.z, "z")?)
        .map_err(reps_err)
}

/// Relative charge bounds: none for ns2 modules, whose weight spaces are
/// finite-dimensional, and `[-w, w]` otherwise.
fn bounds(m: &Module, window: Option<i64>) -> Option<(i64, i64)> {
    match (m.algebra().id, window) {
        (_, Some(w)) => Some((-w, w)),
        (AlgebraId::Ns2, None) => None,
        (_, None) => Some((-8, 8)),
    }
}

/// Image of the vacuum singular vector in `U(gl(1|1))`.
pub struct SigmaPhi {
    pub phi: Gl11Element,
    pub context: ZhuContext,
    /// The searched vector, when `from_search` was requested.
    pub searched: bool,
}

/// `coset_to_gl11` of the vacuum singular vector. With `from_search` the
/// vector comes from the nullspace search, otherwise from the stored words.
pub fn sigma_phi(params: &Params, from_search: bool) -> Result<SigmaPhi, CliError> {
    let l2 = 2 * (params.p - 1) * params.pp;
    let cx =
        ZhuContext::build(Twist::Sigma, &params.c(), Target::Vacuum, l2, &SpanOptions::default()).map_err(zhu_err)?;
    let v = if from_search {
        let found = cx.module.find_singular_rel(&(l2, 0));
        if found.len() != 1 {
            return Err(failed(format!("expected one singular vector at doubled level {l2}, found {}", found.len())));
        }
        found.into_iter().next().unwrap()
    } else {
        let words = known::vacuum_singular(params.p, params.pp)
            .ok_or_else(|| invalid(format!("no stored singular vector for ({}, {})", params.p, params.pp)))?;
        words_vector(&cx.module, &words)
    };
    let coset = cx.zhu_reduce(&v).map_err(zhu_err)?;
    let phi = cx.coset_to_gl11(&coset).map_err(zhu_err)?;
    Ok(SigmaPhi { phi, context: cx, searched: from_search })
}

/// Images `f_c` and `g_c` in `C[h, q]` of the singular vector `N` and of
/// `G+_{-1/2} G-_{-1/2} N`.
pub fn id_polys(params: &Params) -> Result<(Poly<Q>, Poly<Q>, ZhuContext), CliError> {
    let l2 = 2 * (params.p - 1) * params.pp;
    let cx =
        ZhuContext::build(Twist::Id, &params.c(), Target::Vacuum, l2 + 2, &SpanOptions::default()).map_err(zhu_err)?;
    let found = cx.module.find_singular_rel(&(l2, 0));
    if found.len() != 1 {
        return Err(failed(format!("expected one singular vector at doubled level {l2}, found {}", found.len())));
    }
    let n = &found[0];
    let fc = cx.coset_to_poly(&cx.zhu_reduce(n).map_err(zhu_err)?).map_err(zhu_err)?;
    let n2 = cx.module.engine.apply_word(&[n2zhu::pbw::ns2::gp(-1), n2zhu::pbw::ns2::gm(-1)], n);
    let gc = cx.coset_to_poly(&cx.zhu_reduce(&n2).map_err(zhu_err)?).map_err(zhu_err)?;
    Ok((fc, gc, cx))
}

/// Whether `f` vanishes at every simple module of the classification.
pub fn vanishes_on_classification(f: &Poly<Q>, names: &NsClassification) -> bool {
    let qv = Poly::var(1, 0);
    names.discrete.iter().all(|(_, h, qq)| f.eval(&[h.clone(), qq.clone()]).is_zero())
        && names.families.iter().all(|hq| f.compose(&[hq.clone(), qv.clone()], 1).is_zero())
}

/// The bimodule of the chiral Verma module of charge 2/3 at c = -1.
pub struct FzData {
    pub params: Params,
    pub j: Q,
    pub ideal: [Poly<Q>; 2],
    pub kernel_even: Vec<Poly<Q>>,
    pub kernel_odd: Vec<Poly<Q>>,
    pub bimodule: ZhuContext,
    pub names: NsClassification,
}

pub fn fz_data() -> Result<FzData, CliError> {
    use n2zhu::pbw::ns2::{gm, gp};
    let params = Params::new(3, 2).map_err(invalid)?;
    let (fc, gc, _) = id_polys(&params)?;
    let j = q(2, 3);
    let bim = ZhuContext::build(Twist::Id, &params.c(), Target::Chiral(j.clone()), 6, &SpanOptions::default())
        .map_err(zhu_err)?;
    let m = &bim.module;
    let e = &m.engine;
    let w1 = words_vector(m, &known::w1());
    let found = m.find_singular_rel(&(4, 0));
    if found.len() != 1 {
        return Err(failed(format!("expected one singular vector at level 2 of the bimodule, found {}", found.len())));
    }
    let w2 = found.into_iter().next().unwrap();
    let evens = [e.apply_word(&[gp(-1), gp(1)], &w1), w2.clone(), e.apply_word(&[gp(-1), gm(-1)], &w2)];
    let odds = [e.apply_word(&[gp(1)], &w1), e.apply_word(&[gp(-1)], &w1), e.apply_word(&[gm(-1)], &w2)];
    let mut kernel_even = Vec::new();
    let mut kernel_odd = Vec::new();
    for v in &evens {
        let r = bim.fz_reduce(v).map_err(zhu_err)?;
        if !r.odd.is_zero() {
            return Err(failed("even kernel vector has an odd image"));
        }
        kernel_even.push(r.even);
    }
    for v in &odds {
        let r = bim.fz_reduce(v).map_err(zhu_err)?;
        if !r.even.is_zero() {
            return Err(failed("odd kernel vector has an even image"));
        }
        kernel_odd.push(r.odd);
    }
    let names = NsClassification::new(&params);
    Ok(FzData { params, j, ideal: [fc, gc], kernel_even, kernel_odd, bimodule: bim, names })
}

pub fn fusion(fz: &FzData, right: &n2zhu::zhu::RightModule) -> Result<FusionReport, CliError> {
    fz_kernel_and_fusion(&fz.kernel_even, &fz.kernel_odd, &fz.ideal, &fz.j, right, &fz.names).map_err(zhu_err)
}

fn gl11_json(g: &Gl11Element) -> serde_json::Value {
    json!({ "P1": json::poly(&g.p1, &["Z", "J"]), "P2": json::poly(&g.p2, &["Z", "J"]) })
}

fn run_algebra(c: &AlgebraCmd) -> Result<(i32, String), CliError> {
    let AlgebraCmd::CheckJacobi { algebra, params: pa, window } = c;
    if *window < 1 {
        return Err(CliError::Invalid(format!("--window {window} violates window >= 1")));
    }
    let alg = Algebra::build(algebra, &params(pa)?).map_err(invalid)?;
    let bad = check_super_jacobi(&alg, *window);
    let report = json!({
        "schema": "algebra-check-jacobi/1",
        "algebra": alg.id.name(),
        "central": fmt_q(&alg.central),
        "window": window,
        "violations": bad,
    });
    Ok((if bad.is_empty() { 0 } else { 1 }, json::render(&report)))
}

fn run_pbw(c: &PbwCmd) -> Result<(i32, String), CliError> {
    let PbwCmd::Reduce { algebra, params: pa, expr } = c;
    let alg = Algebra::build(algebra, &params(pa)?).map_err(invalid)?;
    let words = parse_expr(alg.id, expr).map_err(invalid)?;
    let pbw = Pbw::new(alg);
    let e = pbw.normal_order(&words).map_err(invalid)?;
    let terms: std::collections::BTreeMap<String, String> =
        e.terms.iter().map(|(m, c)| (m.to_string(), fmt_q(c))).collect();
    let report = json!({
        "schema": "pbw-reduce/1",
        "algebra": pbw.algebra().id.name(),
        "expr": expr,
        "normal_form": terms,
        "text": e.to_string(),
    });
    Ok((0, json::render(&report)))
}

fn run_singular(c: &SingularCmd) -> Result<(i32, String), CliError> {
    let SingularCmd::Search { algebra, module: ma, level, charge } = c;
    let m = module(ma)?;
    if let Some(a) = algebra {
        let want = AlgebraId::parse(a).map_err(invalid)?;
        if want != m.algebra().id {
            return Err(CliError::Invalid(format!(
                "module {} lives over {}, not {}",
                ma.module,
                m.algebra().id.name(),
                a
            )));
        }
    }
    let (level, charge) = (rational(level, "level")?, rational(charge, "charge")?);
    let found = m.find_singular(&level, &charge).map_err(reps_err)?;
    let p = params(&ma.params)?;
    // compare with the stored vacuum vector at its weight
    let mut known_match = serde_json::Value::Null;
    if m.kind == ModuleKind::VacuumNs2 && level == Q::from_integer(((p.p - 1) * p.pp).into()) && charge.is_zero() {
        if let Some(words) = known::vacuum_singular(p.p, p.pp) {
            let v = words_vector(&m, &words);
            known_match = json!(found.len() == 1 && proportional(&found[0], &v));
        }
    }
    let report = json!({
        "schema": "singular-search/1",
        "module": m.label,
        "weight": json::weight_key(&level, &charge),
        "dimension": found.len(),
        "vectors": found.iter().map(json::vector).collect::<Vec<_>>(),
        "matches_stored_vector": known_match,
    });
    Ok((if known_match == json!(false) { 1 } else { 0 }, json::render(&report)))
}

/// Equal up to a nonzero scalar.
pub fn proportional(a: &n2zhu::pbw::Vector, b: &n2zhu::pbw::Vector) -> bool {
    let Some((k, ca)) = a.iter().next() else {
        return b.is_empty();
    };
    let Some(cb) = b.get(k) else {
        return false;
    };
    let r = ca / cb;
    a.len() == b.len() && b.iter().all(|(k, c)| a.get(k).is_some_and(|x| *x == c * &r))
}

fn run_char(a: &CharArgs, format: Format) -> Result<(i32, String), CliError> {
    let m = module(&a.module)?;
    let ml = rational(&a.max_level, "max-level")?;
    let l2 = n2zhu::scalar::to_int(&(&ml * Q::from_integer(2.into())))
        .filter(|x| *x >= 0)
        .ok_or_else(|| CliError::Invalid(format!("--max-level {} is not a nonnegative half-integer", a.max_level)))?;
    let ch = m.character(l2, bounds(&m, a.window));
    let out = match format {
        Format::Csv => ch.to_csv(),
        Format::Json => json::render(&json!({
            "schema": "char/1",
            "module": m.label,
            "max_level": fmt_q(&ch.max_level),
            "window": ch.window.as_ref().map(|(x, y)| [fmt_q(x), fmt_q(y)]),
            "dims": json::character(&ch),
        })),
    };
    Ok((0, out))
}

fn run_zhu(c: &ZhuCmd) -> Result<(i32, String), CliError> {
    match c {
        ZhuCmd::Sigma { params: pa, express_singular, max_l2 } => {
            let p = params(pa)?;
            if *express_singular {
                let s = sigma_phi(&p, true)?;
                let stored = known::phi(p.p, p.pp);
                let prop = stored.as_ref().map(|k| s.phi.proportional(k));
                let report = json!({
                    "schema": "zhu-sigma/1",
                    "p": p.p, "pp": p.pp, "c": fmt_q(&p.c()),
                    "slack": s.context.slack,
                    "certificate": s.context.certificate,
                    "phi": gl11_json(&s.phi),
                    "proportional_to_known": prop,
                });
                Ok((if prop == Some(false) { 1 } else { 0 }, json::render(&report)))
            } else {
                graded_report(&p, Twist::Sigma, *max_l2)
            }
        }
        ZhuCmd::Id { params: pa, polys, max_l2 } => {
            let p = params(pa)?;
            if *polys {
                let (fc, gc, cx) = id_polys(&p)?;
                let names = NsClassification::new(&p);
                let ok = vanishes_on_classification(&fc, &names) && vanishes_on_classification(&gc, &names);
                let report = json!({
                    "schema": "zhu-id/1",
                    "p": p.p, "pp": p.pp, "c": fmt_q(&p.c()),
                    "slack": cx.slack,
                    "f_c": json::poly(&fc, &["h", "q"]),
                    "g_c": json::poly(&gc, &["h", "q"]),
                    "vanish_on_classification": ok,
                });
                Ok((if ok { 0 } else { 1 }, json::render(&report)))
            } else {
                graded_report(&p, Twist::Id, *max_l2)
            }
        }
    }
}

fn graded_report(p: &Params, twist: Twist, max_l2: i64) -> Result<(i32, String), CliError> {
    if !(0..=12).contains(&max_l2) {
        return Err(CliError::Invalid(format!("--max-l2 {max_l2} outside 0..=12")));
    }
    let cx = ZhuContext::build(twist, &p.c(), Target::Vacuum, max_l2, &SpanOptions::default()).map_err(zhu_err)?;
    let report = json!({
        "schema": "zhu-graded/1",
        "twist": twist,
        "p": p.p, "pp": p.pp, "c": fmt_q(&p.c()),
        "o_dim": cx.o_dim(),
        "slack": cx.slack,
        "certificate": cx.certificate,
    });
    Ok((0, json::render(&report)))
}

fn run_fz(c: &FzCmd) -> Result<(i32, String), CliError> {
    let FzCmd::Fusion { j, eps, odd } = c;
    let fz = fz_data()?;
    let right = match (j, eps) {
        (Some(j), None) => fz.names.c_j(&rational(j, "j")?, *odd),
        (None, Some(e)) => {
            Some(fz.names.eps(*e, *odd).ok_or_else(|| CliError::Invalid(format!("--eps {e} is not one of -1, 0, 1")))?)
        }
        _ => return Err(CliError::Invalid("give exactly one of --j and --eps".into())),
    }
    .ok_or_else(|| failed("the classification has no continuous family"))?;
    let r = fusion(&fz, &right)?;
    let report = json!({
        "schema": "fz-fusion/1",
        "c": fmt_q(&fz.params.c()),
        "left_charge": fmt_q(&fz.j),
        "right": r.right,
        "dimension": r.dimension,
        "xl_eigenvalues": r.summands.iter().map(|s| fmt_q(&s.xl)).collect::<Vec<_>>(),
        "parities": r.summands.iter().map(|s| if s.odd { "odd" } else { "even" }).collect::<Vec<_>>(),
        "summands": r.summands,
        "all_rational": r.all_rational,
    });
    Ok((0, json::render(&report)))
}

fn run_bgg(c: &BggCmd) -> Result<(i32, String), CliError> {
    let BggCmd::Verify { variant, params: pa, r, s, j, window, depth, max_level } = c;
    let mut spec = ResolutionSpec::new(Variant::parse(variant).map_err(res_err)?, params(pa)?, *r);
    spec.s = *s;
    spec.j = opt_rational(j, "j")?;
    spec.window = *window;
    spec.depth = *depth;
    let rep = verify_euler(&spec, *max_level).map_err(res_err)?;
    let mut v = serde_json::to_value(&rep).expect("reports serialize");
    v["schema"] = json!("bgg-verify/1");
    Ok((if rep.matched { 0 } else { 1 }, json::render(&v)))
}

fn run_reproduce(a: &ReproduceArgs) -> Result<(i32, String), CliError> {
    let which: Vec<u8> = if a.all || a.criterion.is_empty() { (1..=8).collect() } else { a.criterion.clone() };
    if let Some(bad) = which.iter().find(|c| !(1..=8).contains(*c)) {
        return Err(CliError::Invalid(format!("criterion {bad} outside 1..=8")));
    }
    let results: Vec<_> = which.iter().map(|c| reproduce::run(*c)).collect();
    let ok = results.iter().all(|r| r.passed);
    let report = json!({ "schema": "reproduce/1", "criteria": results, "passed": ok });
    Ok((if ok { 0 } else { 1 }, json::render(&report)))
}

fn dispatch(config: &RunConfig) -> Result<(i32, String), CliError> {
    match &config.command {
        Command::Algebra(c) => run_algebra(c),
        Command::Pbw(c) => run_pbw(c),
        Command::Singular(c) => run_singular(c),
        Command::Char(a) => run_char(a, config.format),
        Command::Zhu(c) => run_zhu(c),
        Command::Fz(c) => run_fz(c),
        Command::Bgg(c) => run_bgg(c),
        Command::Reproduce(a) => run_reproduce(a),
    }
}

/// Runs a command, consulting the cache when one is configured. Reproduction
/// always recomputes.
pub fn run(config: &RunConfig) -> Outcome {
    let cacheable = !matches!(config.command, Command::Reproduce(_));
    let cache = config.cache_dir.as_ref().filter(|_| cacheable).map(Cache::new);
    let key = cache.as_ref().map(|_| {
        let cmd = serde_json::to_string(&json!({ "command": config.command, "format": config.format }))
            .expect("commands serialize");
        cache::key(&cmd)
    });
    if let (Some(c), Some(k)) = (&cache, &key) {
        if let Some((code, report)) = c.get(k) {
            return Outcome { code, report, message: None };
        }
    }
    match dispatch(config) {
        Ok((code, report)) => {
            if let (Some(c), Some(k)) = (&cache, &key) {
                c.put(k, code, &report);
            }
            Outcome { code, report, message: None }
        }
        Err(e) => {
            let msg = match &e {
                CliError::Invalid(m) => format!("invalid input: {m}"),
                CliError::Failed(m) => format!("computation failed: {m}"),
            };
            Outcome { code: e.code(), report: String::new(), message: Some(msg) }
        }
    }
}
