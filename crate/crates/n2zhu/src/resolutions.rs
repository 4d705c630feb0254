//! BGG-type complexes as lists of (module, spectral-flow twist), checked
//! through their Euler characteristic at a finite truncation.
//!
//! Term characters use closed forms: a flowed free module is again a free
//! module on flowed creation modes, and the N=2 parabolic module `V(m)` is a
//! chiral Verma module minus the flowed chiral Verma module generated by its
//! relation vector. The head's simple character comes from the singular
//! vector fixpoint in [`crate::reps`].

use crate::reps::{
    affine_character, closed_form_character, ns2_lowest_l2, ns2_verma_character, CharacterSeries, Module, ModuleKind,
    RepsError, SimpleReport,
};
use crate::scalar::{fmt_q, half, qi, Q};
use crate::superalg::Params;
use serde::Serialize;
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ResolutionError {
    #[error("invalid parameters: {0}")]
    Domain(String),
    #[error("depth {given} is insufficient: term {needed} has lowest level {lowest} <= {max_level}")]
    Depth { given: usize, needed: usize, lowest: String, max_level: String },
    #[error("unknown variant `{0}`")]
    UnknownVariant(String),
    #[error(transparent)]
    Reps(#[from] RepsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    AffineVerma,
    AffineParabolic,
    N2Chiral,
    N2Parabolic,
    N2Relaxed,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Self, ResolutionError> {
        Ok(match s {
            "affine-verma" => Variant::AffineVerma,
            "affine-parabolic" => Variant::AffineParabolic,
            "n2-chiral" => Variant::N2Chiral,
            "n2-parabolic" => Variant::N2Parabolic,
            "n2-relaxed" => Variant::N2Relaxed,
            _ => return Err(ResolutionError::UnknownVariant(s.into())),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::AffineVerma => "affine-verma",
            Variant::AffineParabolic => "affine-parabolic",
            Variant::N2Chiral => "n2-chiral",
            Variant::N2Parabolic => "n2-parabolic",
            Variant::N2Relaxed => "n2-relaxed",
        }
    }

    /// Whether term `n > 0` is a direct sum of the pieces labelled `n` and `-n`.
    fn symmetric(self) -> bool {
        matches!(self, Variant::AffineVerma | Variant::N2Chiral | Variant::N2Relaxed)
    }

    fn twisted(self) -> bool {
        matches!(self, Variant::N2Chiral | Variant::N2Parabolic | Variant::N2Relaxed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolutionSpec {
    pub variant: Variant,
    pub params: Params,
    pub r: i64,
    pub s: i64,
    /// Charge label of the relaxed variant.
    pub j: Option<Q>,
    /// Number of terms after the head; chosen automatically when `None`.
    pub depth: Option<usize>,
    /// Half-width of the compared charge window (relaxed and affine variants).
    pub window: Option<i64>,
}

impl ResolutionSpec {
    pub fn new(variant: Variant, params: Params, r: i64) -> Self {
        ResolutionSpec { variant, params, r, s: 0, j: None, depth: None, window: None }
    }

    pub fn validate(&self) -> Result<(), ResolutionError> {
        let p = &self.params;
        let (r, s) = (self.r, self.s);
        let bad = |m: String| Err(ResolutionError::Domain(m));
        match self.variant {
            Variant::AffineParabolic | Variant::N2Parabolic => {
                if s != 0 {
                    return bad(format!("{} takes s = 0, got {s}", self.variant.name()));
                }
                if !(1..p.p).contains(&r) {
                    return bad(format!("r = {r} outside 1..{}", p.p - 1));
                }
            }
            Variant::AffineVerma | Variant::N2Chiral => {
                if !p.i_kw().contains(&(r, s)) {
                    return bad(format!("(r, s) = ({r}, {s}) not in I_KW"));
                }
            }
            Variant::N2Relaxed => {
                if !p.i_bpz().contains(&(r, s)) {
                    return bad(format!("(r, s) = ({r}, {s}) not in I_BPZ"));
                }
                let Some(j) = &self.j else {
                    return bad("the relaxed variant needs j".into());
                };
                for e in [p.j(r, s), p.j(p.p - r, p.pp - s)] {
                    if (j - &e).is_integer() {
                        return bad(format!("j = {} is congruent to {} mod Z", fmt_q(j), fmt_q(&e)));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TermModule {
    /// `V(m)` on the N=2 side.
    GenVermaNs2 { m: i64 },
    /// Chiral Verma `M+(m, n)`.
    ChiralNs2 { m: i64, n: i64 },
    /// N=2 Verma `M_{m,n;j}`.
    RelaxedNs2 {
        m: i64,
        n: i64,
        #[serde(serialize_with = "crate::scalar::ser_q")]
        j: Q,
    },
    /// Affine `V(m)`.
    GenVermaAffine { m: i64 },
    /// Affine Verma `M(m, n)`.
    VermaAffine { m: i64, n: i64 },
}

impl fmt::Display for TermModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermModule::GenVermaNs2 { m } => write!(f, "V({m})"),
            TermModule::ChiralNs2 { m, n } => write!(f, "M+({m},{n})"),
            TermModule::RelaxedNs2 { m, n, j } => write!(f, "M({m},{n};{})", fmt_q(j)),
            TermModule::GenVermaAffine { m } => write!(f, "V_aff({m})"),
            TermModule::VermaAffine { m, n } => write!(f, "M_aff({m},{n})"),
        }
    }
}

/// One summand of a term of the complex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Term {
    /// Homological degree.
    pub degree: usize,
    /// Signed label (`n` or `-n`).
    pub label: i64,
    pub module: TermModule,
    /// Integer spectral-flow twist.
    pub theta: i64,
}

/// `(2pm + r, pm)` for label `2m`, `(2pm - r, pm - r)` for label `2m - 1`.
fn shift(p: i64, r: i64, label: i64) -> (i64, i64) {
    if label.rem_euclid(2) == 0 {
        let m = label / 2;
        (2 * p * m + r, p * m)
    } else {
        let m = (label + 1).div_euclid(2);
        (2 * p * m - r, p * m - r)
    }
}

fn piece(spec: &ResolutionSpec, degree: usize, label: i64) -> Term {
    let (m, theta) = shift(spec.params.p, spec.r, label);
    let theta = if spec.variant.twisted() { theta } else { 0 };
    let s = spec.s;
    let module = match spec.variant {
        Variant::N2Parabolic => TermModule::GenVermaNs2 { m },
        Variant::N2Chiral => TermModule::ChiralNs2 { m, n: s },
        // the charge label moves with the twist so that all terms share the
        // head's charge lattice
        Variant::N2Relaxed => TermModule::RelaxedNs2 { m, n: s, j: spec.j.clone().unwrap() + qi(theta) },
        Variant::AffineParabolic => TermModule::GenVermaAffine { m },
        Variant::AffineVerma => TermModule::VermaAffine { m, n: s },
    };
    Term { degree, label, module, theta }
}

fn pieces(spec: &ResolutionSpec, n: usize) -> Vec<Term> {
    if n == 0 {
        return vec![piece(spec, 0, 0)];
    }
    let mut v = vec![piece(spec, n, n as i64)];
    if spec.variant.symmetric() {
        v.push(piece(spec, n, -(n as i64)));
    }
    v
}

/// Terms of the complex for degrees `0..=depth` (depth 2 by default).
pub fn bgg_complex(spec: &ResolutionSpec) -> Result<Vec<Term>, ResolutionError> {
    spec.validate()?;
    let d = spec.depth.unwrap_or(2);
    Ok((0..=d).flat_map(|n| pieces(spec, n)).collect())
}

/// Flowed top weight of an N=2 module with top `(h, j)`.
fn flow_weight(h: &Q, j: &Q, theta: i64, c: &Q) -> (Q, Q) {
    let t = qi(theta);
    (h + &t * j + &t * &t * c / qi(6), j + &t * c / qi(3))
}

/// Lower bound for the L0 spectrum of a term.
pub fn lowest_level(params: &Params, t: &Term) -> Q {
    let c = params.c();
    let a = params.a();
    let ns2 = |chiral: bool, h: Q, j: Q| {
        let (h0, _) = flow_weight(&h, &j, t.theta, &c);
        h0 + half(ns2_lowest_l2(chiral, 2 * t.theta))
    };
    match &t.module {
        TermModule::GenVermaNs2 { m } => {
            let j = &a * qi(m - 1);
            ns2(true, &j / qi(2), j)
        }
        TermModule::ChiralNs2 { m, n } => {
            let j = qi(2) * &a * params.j(*m, *n);
            ns2(true, &j / qi(2), j)
        }
        TermModule::RelaxedNs2 { m, n, j } => ns2(false, params.delta(&params.j(*m, *n)) - &a * j * j, qi(2) * &a * j),
        TermModule::GenVermaAffine { m } => params.delta(&params.j(*m, 0)),
        TermModule::VermaAffine { m, n } => params.delta(&params.j(*m, *n)),
    }
}

/// Character of the N=2 module `V(m)` flowed by `theta`, complete for
/// `L0 <= max_level`.
pub fn gen_verma_ns2_character(params: &Params, m: i64, theta: i64, max_level: &Q) -> CharacterSeries {
    let c = params.c();
    let a = params.a();
    let j1 = &a * qi(m - 1);
    let j2 = -&a * qi(m + 1);
    let mut ch = ns2_verma_character(true, &(&j1 / qi(2)), &j1, &c, 2 * theta, max_level);
    let sub = ns2_verma_character(true, &(&j2 / qi(2)), &j2, &c, 2 * (theta - m), max_level);
    ch.axpy(-1, &sub);
    ch
}

/// Character of one term, complete for `L0 <= max_level` (and charges in
/// `window` for affine terms).
pub fn term_character(
    params: &Params,
    t: &Term,
    max_level: &Q,
    window: Option<(Q, Q)>,
) -> Result<CharacterSeries, ResolutionError> {
    let c = params.c();
    let a = params.a();
    let need = || window.clone().ok_or_else(|| RepsError::Truncation("affine terms need a charge window".into()));
    Ok(match &t.module {
        TermModule::GenVermaNs2 { m } => gen_verma_ns2_character(params, *m, t.theta, max_level),
        TermModule::ChiralNs2 { m, n } => {
            let j = qi(2) * &a * params.j(*m, *n);
            ns2_verma_character(true, &(&j / qi(2)), &j, &c, 2 * t.theta, max_level)
        }
        TermModule::RelaxedNs2 { m, n, j } => {
            let h = params.delta(&params.j(*m, *n)) - &a * j * j;
            ns2_verma_character(false, &h, &(qi(2) * &a * j), &c, 2 * t.theta, max_level)
        }
        TermModule::GenVermaAffine { m } => {
            let tops: Vec<(Q, i64)> = (0..*m).map(|i| (qi(m - 1 - 2 * i), 1)).collect();
            affine_character(&params.delta(&params.j(*m, 0)), &tops, max_level, need()?)
        }
        TermModule::VermaAffine { m, n } => closed_form_character(
            ModuleKind::VermaAffine,
            params,
            &Q::from_integer(0.into()),
            &params.j(*m, *n),
            max_level,
            Some(need()?),
        )?,
    })
}

/// Head module whose simple quotient the complex resolves.
pub fn head_module(spec: &ResolutionSpec) -> Result<Module, ResolutionError> {
    let p = &spec.params;
    let a = p.a();
    Ok(match spec.variant {
        Variant::N2Parabolic => Module::gen_verma_ns2(p, spec.r)?,
        Variant::N2Chiral => Module::chiral_ns2(&p.c(), &(qi(2) * &a * p.j(spec.r, spec.s))),
        Variant::N2Relaxed => {
            let j = spec.j.clone().unwrap();
            let h = p.delta(&p.j(spec.r, spec.s)) - &a * &j * &j;
            Module::verma_ns2(&p.c(), &h, &(qi(2) * &a * &j))
        }
        Variant::AffineParabolic => Module::gen_verma_affine(p, spec.r)?,
        Variant::AffineVerma => Module::verma_affine(&p.k(), &p.j(spec.r, spec.s))?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermReport {
    #[serde(flatten)]
    pub term: Term,
    pub name: String,
    /// Lower bound of `L0 - h_head`.
    pub lowest: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub level: String,
    pub charge: String,
    pub euler: i64,
    pub simple: i64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerReport {
    pub variant: Variant,
    pub p: i64,
    pub pp: i64,
    pub r: i64,
    pub s: i64,
    pub j: Option<String>,
    pub max_level: String,
    pub depth: usize,
    pub terms: Vec<TermReport>,
    /// Lowest levels of successive degrees strictly increase.
    pub monotone: bool,
    pub entries: Vec<Entry>,
    pub simple_iterations: usize,
    pub subsingular: bool,
    #[serde(rename = "match")]
    pub matched: bool,
}

impl EulerReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.ok)
    }
}

/// Search horizon for terms that could still reach the truncation.
const MAX_DEPTH: usize = 64;

fn degree_lowest(spec: &ResolutionSpec, n: usize, h0: &Q) -> Q {
    pieces(spec, n).iter().map(|t| lowest_level(&spec.params, t) - h0).min().unwrap()
}

/// Smallest depth after which every omitted term lies above `max_rel`.
fn select_depth(spec: &ResolutionSpec, h0: &Q, max_rel: &Q) -> usize {
    let mut d = 0;
    for n in 1..=MAX_DEPTH {
        if &degree_lowest(spec, n, h0) <= max_rel {
            d = n;
        }
    }
    d
}

/// Compares `sum (-1)^n ch(term n)` with the simple character of the head at
/// relative levels `<= max_level`.
pub fn verify_euler(spec: &ResolutionSpec, max_level: i64) -> Result<EulerReport, ResolutionError> {
    spec.validate()?;
    if max_level < 0 {
        return Err(RepsError::Truncation(format!("negative truncation {max_level}")).into());
    }
    let params = &spec.params;
    let head = head_module(spec)?;
    let h0 = head.top_level.clone();
    let j0 = head.top_charge.clone();
    let max_rel = qi(max_level);
    let needed = select_depth(spec, &h0, &max_rel);
    let depth = match spec.depth {
        Some(d) if d < needed => {
            return Err(ResolutionError::Depth {
                given: d,
                needed,
                lowest: fmt_q(&degree_lowest(spec, needed, &h0)),
                max_level: fmt_q(&max_rel),
            })
        }
        Some(d) => d,
        None => needed,
    };
    let affine = matches!(spec.variant, Variant::AffineParabolic | Variant::AffineVerma);
    // relative charge window; ns2 weight spaces are finite without one
    let bounds: Option<(i64, i64)> = match spec.variant {
        Variant::N2Relaxed => Some(spec.window.unwrap_or(8)).map(|w| (-w, w)),
        Variant::AffineParabolic => {
            // the simple quotient lives in |H0| <= r - 1 + 2N
            let w = spec.window.unwrap_or(spec.r - 1 + 2 * max_level);
            let top = spec.r - 1;
            Some((-w - top, w - top))
        }
        Variant::AffineVerma => {
            let w = spec.window.unwrap_or(2 * max_level + 2 * spec.r + 2);
            Some((-w, 2 * max_level))
        }
        _ => None,
    };
    let window = bounds.map(|(a, b)| (&j0 + qi(a), &j0 + qi(b)));
    let max_abs = &h0 + &max_rel;

    let terms: Vec<Term> = (0..=depth).flat_map(|n| pieces(spec, n)).collect();
    let (chars, simple) = std::thread::scope(|sc| {
        let handles: Vec<_> = terms
            .iter()
            .map(|t| {
                let w = window.clone();
                let ml = max_abs.clone();
                sc.spawn(move || term_character(params, t, &ml, w))
            })
            .collect();
        let closure_bounds = if affine { bounds } else { None };
        let simple = head.simple_character(2 * max_level, closure_bounds);
        let chars: Vec<_> = handles.into_iter().map(|h| h.join().expect("term worker panicked")).collect();
        (chars, simple)
    });
    let (simple, report): (CharacterSeries, SimpleReport) = simple?;
    let simple = simple.restrict(&max_abs, window.clone());
    let mut euler = CharacterSeries::new(max_abs.clone(), window.clone());
    for (t, ch) in terms.iter().zip(chars) {
        let sign = if t.degree % 2 == 0 { 1 } else { -1 };
        euler.axpy(sign, &ch?.restrict(&max_abs, window.clone()));
    }

    let mut keys: Vec<(Q, Q)> = euler.entries.keys().chain(simple.entries.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    let entries: Vec<Entry> = keys
        .iter()
        .map(|(h, j)| {
            let (e, s) = (euler.get(h, j), simple.get(h, j));
            Entry { level: fmt_q(h), charge: fmt_q(j), euler: e, simple: s, ok: e == s }
        })
        .collect();
    let lows: Vec<Q> = (0..=depth + 1).map(|n| degree_lowest(spec, n, &h0)).collect();
    let monotone = lows.windows(2).all(|w| w[0] < w[1]);
    let term_reports = terms
        .iter()
        .map(|t| TermReport {
            term: t.clone(),
            name: t.module.to_string(),
            lowest: fmt_q(&(lowest_level(params, t) - &h0)),
        })
        .collect();
    let matched = entries.iter().all(|e| e.ok);
    Ok(EulerReport {
        variant: spec.variant,
        p: params.p,
        pp: params.pp,
        r: spec.r,
        s: spec.s,
        j: spec.j.as_ref().map(fmt_q),
        max_level: fmt_q(&max_rel),
        depth,
        terms: term_reports,
        monotone,
        entries,
        simple_iterations: report.iterations,
        subsingular: report.subsingular,
        matched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn pr(a: i64, b: i64) -> Params {
        Params::new(a, b).unwrap()
    }

    #[test]
    fn parabolic_terms() {
        let mut s = ResolutionSpec::new(Variant::N2Parabolic, pr(3, 2), 1);
        s.depth = Some(2);
        let t: Vec<(String, i64)> = bgg_complex(&s).unwrap().iter().map(|t| (t.module.to_string(), t.theta)).collect();
        assert_eq!(t, vec![("V(1)".into(), 0), ("V(5)".into(), 2), ("V(7)".into(), 3)]);
    }

    #[test]
    fn chiral_terms_come_in_pairs() {
        let mut s = ResolutionSpec::new(Variant::N2Chiral, pr(4, 1), 1);
        s.depth = Some(1);
        let t: Vec<(String, i64)> = bgg_complex(&s).unwrap().iter().map(|t| (t.module.to_string(), t.theta)).collect();
        assert_eq!(t, vec![("M+(1,0)".into(), 0), ("M+(7,0)".into(), 3), ("M+(-1,0)".into(), -1)]);
    }

    #[test]
    fn depth_zero_is_the_head() {
        let mut s = ResolutionSpec::new(Variant::AffineParabolic, pr(3, 1), 2);
        s.depth = Some(0);
        assert_eq!(bgg_complex(&s).unwrap().len(), 1);
    }

    #[test]
    fn domains() {
        let s = ResolutionSpec::new(Variant::N2Parabolic, pr(3, 2), 3);
        assert!(matches!(bgg_complex(&s), Err(ResolutionError::Domain(_))));
        let mut s = ResolutionSpec::new(Variant::N2Relaxed, pr(3, 2), 1);
        s.s = 1;
        s.j = Some(q(1, 4));
        assert!(matches!(bgg_complex(&s), Err(ResolutionError::Domain(_))));
        s.j = Some(q(1, 5));
        assert!(bgg_complex(&s).is_ok());
    }

    #[test]
    fn gen_verma_closed_form_matches_closure() {
        for (pp, m) in [((3, 2), 1), ((3, 2), 2), ((3, 2), 3), ((4, 1), 2), ((4, 1), 3)] {
            let params = pr(pp.0, pp.1);
            let md = Module::gen_verma_ns2(&params, m).unwrap();
            let max_l2 = 8;
            let closure = md.character(max_l2, None);
            let ml = &md.top_level + half(max_l2);
            let closed = gen_verma_ns2_character(&params, m, 0, &ml);
            assert_eq!(closed.entries, closure.entries, "{pp:?} m = {m}");
        }
    }

    #[test]
    fn truncation_zero() {
        let s = ResolutionSpec::new(Variant::N2Parabolic, pr(4, 1), 1);
        let rep = verify_euler(&s, 0).unwrap();
        assert!(rep.matched);
        assert_eq!(rep.entries.len(), 1);
        assert_eq!((rep.entries[0].euler, rep.entries[0].simple), (1, 1));
    }
}
