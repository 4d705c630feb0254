//! Presented cyclic modules: weight spaces, the module action, singular
//! vectors, characters of submodules and simple quotients, closed-form
//! characters of induced modules and their spectral-flow twists.
//!
//! Every module is an induced module (a PBW span of creation monomials on a
//! top space) possibly divided by the submodule generated by relation
//! vectors. Submodules are computed per weight space by closing a seed set
//! under a generating set of modes, truncated in level (and in charge where
//! zero modes act freely).

use crate::exactla::{nullspace, Echelon, Matrix, SparseQ};
use crate::pbw::{aff, ns2, vec_add, vec_primitive, Engine, EnvElement, Induction, Key, Monomial, Vector};
use crate::scalar::{fmt_q, half, q, qi, to_int, Q};
use crate::superalg::{Algebra, AlgebraId, Family, Mode, Params};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RepsError {
    #[error("inconsistent eigenvalues: {0}")]
    Eigen(String),
    #[error("unknown module kind `{0}`")]
    UnknownKind(String),
    #[error("weight ({0}, {1}) is not attainable")]
    Weight(String, String),
    #[error("truncation exceeded: {0}")]
    Truncation(String),
    #[error("operation not supported for this module: {0}")]
    Unsupported(String),
    #[error("simple quotient did not stabilise within {0} rounds")]
    NoFixpoint(usize),
    #[error("p' must be 1, got {0}")]
    NotIntegral(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModuleKind {
    VermaNs2,
    ChiralVermaNs2,
    VacuumNs2,
    GenVermaNs2,
    VermaAffine,
    GenVermaAffine,
    RelaxedVermaAffine,
    VacuumAffine,
    Gl11Verma,
}

impl ModuleKind {
    pub fn parse(s: &str) -> Result<Self, RepsError> {
        use ModuleKind::*;
        Ok(match s {
            "verma-ns2" => VermaNs2,
            "chiral-verma-ns2" => ChiralVermaNs2,
            "vacuum-ns2" | "vac" => VacuumNs2,
            "gen-verma-ns2" => GenVermaNs2,
            "verma-affine" => VermaAffine,
            "gen-verma-affine" => GenVermaAffine,
            "relaxed-verma-affine" => RelaxedVermaAffine,
            "vacuum-affine" => VacuumAffine,
            "gl11-verma" => Gl11Verma,
            _ => return Err(RepsError::UnknownKind(s.into())),
        })
    }
}

/// How the top space is acted on.
#[derive(Clone, Debug)]
enum Top {
    Ns2Verma {
        h: Q,
        j: Q,
    },
    Ns2Chiral {
        j: Q,
    },
    Ns2Vacuum,
    AffVerma {
        j: Q,
    },
    AffVacuum,
    /// States `u_t = F0^t v` (t >= 0) and `E0^{-t} v` (t < 0).
    Relaxed {
        j: Q,
        omega: Q,
    },
    Gl11 {
        z: Q,
        j: Q,
    },
}

pub struct Inducer {
    alg: Algebra,
    top: Top,
}

impl Inducer {
    fn relaxed_h0(&self, t: i32) -> Q {
        match &self.top {
            Top::Relaxed { j, .. } => qi(2) * j - qi(2 * t as i64),
            _ => unreachable!(),
        }
    }
}

impl Induction for Inducer {
    fn algebra(&self) -> &Algebra {
        &self.alg
    }

    fn is_creation(&self, m: &Mode) -> bool {
        use Family::*;
        match &self.top {
            Top::Ns2Verma { .. } => m.m2 < 0,
            Top::Ns2Chiral { .. } => m.m2 < 0 && !(m.fam == Gp && m.m2 == -1),
            Top::Ns2Vacuum => match m.fam {
                L => m.m2 <= -4,
                J => m.m2 <= -2,
                _ => m.m2 <= -3,
            },
            Top::AffVerma { .. } => m.m2 < 0 || (m.m2 == 0 && m.fam == F),
            Top::AffVacuum | Top::Relaxed { .. } => m.m2 < 0,
            Top::Gl11 { .. } => m.fam == Pm,
        }
    }

    fn top(&self, m: &Mode, t: i32) -> Vec<(i32, Q)> {
        use Family::*;
        if m.m2 > 0 {
            return Vec::new();
        }
        match &self.top {
            Top::Ns2Verma { h, j } => match m.fam {
                L => vec![(0, h.clone())],
                J => vec![(0, j.clone())],
                _ => Vec::new(),
            },
            Top::Ns2Chiral { j } => match m.fam {
                L if m.m2 == 0 => vec![(0, j / qi(2))],
                J => vec![(0, j.clone())],
                _ => Vec::new(),
            },
            Top::Ns2Vacuum | Top::AffVacuum => Vec::new(),
            Top::AffVerma { j } => match m.fam {
                H => vec![(0, qi(2) * j)],
                _ => Vec::new(),
            },
            Top::Relaxed { omega, .. } => match m.fam {
                H => vec![(t, self.relaxed_h0(t))],
                F => {
                    if t >= 0 {
                        vec![(t + 1, Q::one())]
                    } else {
                        // F0 E0 w with w = u_{t+1}: (omega - H - H^2/2)/2
                        let hh = self.relaxed_h0(t + 1);
                        vec![(t + 1, (omega - &hh - &hh * &hh / qi(2)) / qi(2))]
                    }
                }
                E => {
                    if t <= 0 {
                        vec![(t - 1, Q::one())]
                    } else {
                        // E0 F0 w with w = u_{t-1}: (omega + H - H^2/2)/2
                        let hh = self.relaxed_h0(t - 1);
                        vec![(t - 1, (omega + &hh - &hh * &hh / qi(2)) / qi(2))]
                    }
                }
                _ => Vec::new(),
            },
            Top::Gl11 { z, j } => match m.fam {
                Z => vec![(0, z.clone())],
                Y => vec![(0, j.clone())],
                _ => Vec::new(),
            },
        }
    }
}

/// Graded dimensions keyed by absolute `(L0, charge)`; entries are signed so
/// that Euler sums can be formed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharacterSeries {
    pub entries: BTreeMap<(Q, Q), i64>,
    /// Entries are complete for `L0 <= max_level`.
    pub max_level: Q,
    /// Entries are complete for charges in this closed window, if present.
    pub window: Option<(Q, Q)>,
}

impl CharacterSeries {
    pub fn new(max_level: Q, window: Option<(Q, Q)>) -> Self {
        CharacterSeries { entries: BTreeMap::new(), max_level, window }
    }

    pub fn in_range(&self, h: &Q, j: &Q) -> bool {
        h <= &self.max_level && self.window.as_ref().is_none_or(|(a, b)| a <= j && j <= b)
    }

    pub fn add(&mut self, h: Q, j: Q, n: i64) {
        if n == 0 || !self.in_range(&h, &j) {
            return;
        }
        let e = self.entries.entry((h.clone(), j.clone())).or_insert(0);
        *e += n;
        if *e == 0 {
            self.entries.remove(&(h, j));
        }
    }

    pub fn get(&self, h: &Q, j: &Q) -> i64 {
        self.entries.get(&(h.clone(), j.clone())).copied().unwrap_or(0)
    }

    /// `self + s * other` on a common truncation.
    pub fn axpy(&mut self, s: i64, other: &CharacterSeries) {
        for ((h, j), n) in &other.entries {
            self.add(h.clone(), j.clone(), s * n);
        }
    }

    /// Keeps only entries inside `max_level`/`window`.
    pub fn restrict(&self, max_level: &Q, window: Option<(Q, Q)>) -> CharacterSeries {
        let mut out = CharacterSeries::new(max_level.clone(), window);
        for ((h, j), n) in &self.entries {
            out.add(h.clone(), j.clone(), *n);
        }
        out
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|&n| n >= 0)
    }

    /// CSV rows `level,charge,dim`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("level,charge,dim\n");
        for ((h, j), n) in &self.entries {
            s.push_str(&format!("{},{},{}\n", fmt_q(h), fmt_q(j), n));
        }
        s
    }

    pub fn lowest_level(&self) -> Option<Q> {
        self.entries.keys().map(|(h, _)| h.clone()).min()
    }
}

impl fmt::Display for CharacterSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((h, j), n) in &self.entries {
            writeln!(f, "{} @ {} : {}", fmt_q(h), fmt_q(j), n)?;
        }
        Ok(())
    }
}

/// Spectral-flow twist of a character: `(h, j) -> (h + theta j + theta^2 c/6,
/// j + theta c/3)`. The new level cutoff is the largest one still covered by
/// the old truncation, which needs a charge window when `theta != 0`.
pub fn flow_character(ch: &CharacterSeries, theta2: i64, c: &Q) -> Result<CharacterSeries, RepsError> {
    let theta = half(theta2);
    let shift_h = &theta * &theta * c / qi(6);
    let shift_j = &theta * c / qi(3);
    let (max_level, window) = if theta2 == 0 {
        (ch.max_level.clone(), ch.window.clone())
    } else {
        let (a, b) =
            ch.window.clone().ok_or_else(|| RepsError::Truncation("flowing a series needs a charge window".into()))?;
        let lo = if theta > Q::zero() { &theta * &a } else { &theta * &b };
        (&ch.max_level + lo + &shift_h, Some((a + &shift_j, b + &shift_j)))
    };
    let mut out = CharacterSeries::new(max_level, window);
    for ((h, j), n) in &ch.entries {
        out.add(h + &theta * j + &shift_h, j + &shift_j, *n);
    }
    Ok(out)
}

/// Weight-space basis of the induced (free) module.
#[derive(Clone, Debug)]
pub struct Space {
    pub keys: Vec<Key>,
    pub index: HashMap<Key, usize>,
}

impl Space {
    fn new(mut keys: Vec<Key>) -> Self {
        keys.sort();
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        Space { keys, index }
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn to_sparse(&self, v: &Vector) -> SparseQ {
        v.iter().map(|(k, c)| (*self.index.get(k).expect("key outside its weight space"), c.clone())).collect()
    }

    pub fn to_vector(&self, s: &SparseQ) -> Vector {
        s.iter().map(|(i, c)| (self.keys[*i].clone(), c.clone())).collect()
    }
}

/// Relative weight: doubled level above the top and integer charge shift.
pub type Wt = (i64, i64);

/// Truncated submodule: an echelon basis per weight space.
#[derive(Clone, Debug, Default)]
pub struct Submodule {
    pub max_l2: i64,
    pub charge_bounds: Option<(i64, i64)>,
    pub spaces: BTreeMap<Wt, Echelon>,
}

impl Submodule {
    pub fn empty(max_l2: i64, charge_bounds: Option<(i64, i64)>) -> Self {
        Submodule { max_l2, charge_bounds, spaces: BTreeMap::new() }
    }

    pub fn dim_at(&self, w: &Wt) -> usize {
        self.spaces.get(w).map_or(0, |e| e.dim())
    }

    fn admits(&self, w: &Wt) -> bool {
        w.0 >= 0 && w.0 <= self.max_l2 && self.charge_bounds.is_none_or(|(a, b)| a <= w.1 && w.1 <= b)
    }
}

/// A presented cyclic module.
pub struct Module {
    pub kind: ModuleKind,
    pub engine: Engine<Inducer>,
    /// Absolute `(L0, charge)` of the cyclic vector.
    pub top_level: Q,
    pub top_charge: Q,
    pub relations: Vec<Vector>,
    pub label: String,
    /// Enumeration order of creation modes (reversed in determinism tests).
    pub reverse_enumeration: bool,
    zero_creation: Option<Mode>,
    levels: RwLock<HashMap<i64, Arc<Vec<Monomial>>>>,
    spaces: RwLock<HashMap<Wt, Arc<Space>>>,
    base: RwLock<Option<Arc<Submodule>>>,
}

fn cyclic() -> Vector {
    [((Monomial::unit(), 0), Q::one())].into_iter().collect()
}

impl Module {
    fn build(kind: ModuleKind, alg: Algebra, top: Top, top_level: Q, top_charge: Q, label: String) -> Self {
        let ind = Inducer { alg, top };
        let zero_creation = ind
            .alg
            .families()
            .iter()
            .map(|&f| Mode::new(f, 0))
            .find(|m| ind.alg.id != AlgebraId::Ns2 && ind.is_creation(m));
        Module {
            kind,
            engine: Engine::new(ind),
            top_level,
            top_charge,
            relations: Vec::new(),
            label,
            reverse_enumeration: false,
            zero_creation,
            levels: RwLock::new(HashMap::new()),
            spaces: RwLock::new(HashMap::new()),
            base: RwLock::new(None),
        }
    }

    pub fn verma_ns2(c: &Q, h: &Q, j: &Q) -> Self {
        Self::build(
            ModuleKind::VermaNs2,
            Algebra::ns2_at(c.clone()),
            Top::Ns2Verma { h: h.clone(), j: j.clone() },
            h.clone(),
            j.clone(),
            format!("M({},{})", fmt_q(h), fmt_q(j)),
        )
    }

    pub fn chiral_ns2(c: &Q, j: &Q) -> Self {
        Self::build(
            ModuleKind::ChiralVermaNs2,
            Algebra::ns2_at(c.clone()),
            Top::Ns2Chiral { j: j.clone() },
            j / qi(2),
            j.clone(),
            format!("M+({})", fmt_q(j)),
        )
    }

    pub fn vacuum_ns2(c: &Q) -> Self {
        Self::build(ModuleKind::VacuumNs2, Algebra::ns2_at(c.clone()), Top::Ns2Vacuum, Q::zero(), Q::zero(), "V".into())
    }

    /// `V(m)` on the N=2 side: the chiral Verma module of charge `a(m-1)`
    /// divided by the submodule generated by `G-_{-(2m-1)/2} ... G-_{-1/2}`
    /// on the top.
    pub fn gen_verma_ns2(params: &Params, m: i64) -> Result<Self, RepsError> {
        if m < 1 {
            return Err(RepsError::Eigen(format!("m = {m} must be >= 1")));
        }
        let jj = params.a() * qi(m - 1);
        let mut md = Self::chiral_ns2(&params.c(), &jj);
        md.kind = ModuleKind::GenVermaNs2;
        md.label = format!("V({m})");
        let word: Vec<Mode> = (1..=m).rev().map(|i| ns2::gm(-(2 * i as i32 - 1))).collect();
        let rel = md.engine.apply_word(&word, &cyclic());
        md.relations.push(rel);
        Ok(md)
    }

    /// Affine Verma module with top spin `j` (`H0 = 2j`).
    pub fn verma_affine(k: &Q, j: &Q) -> Result<Self, RepsError> {
        let alg = Algebra::affine_at(k.clone()).map_err(|e| RepsError::Eigen(e.to_string()))?;
        let h = j * (j + Q::one()) / (k + qi(2));
        Ok(Self::build(
            ModuleKind::VermaAffine,
            alg,
            Top::AffVerma { j: j.clone() },
            h,
            qi(2) * j,
            format!("M_aff({})", fmt_q(j)),
        ))
    }

    /// `V(m)`: affine Verma module of spin `(m-1)/2` divided by `F0^m v`.
    pub fn gen_verma_affine(params: &Params, m: i64) -> Result<Self, RepsError> {
        Self::gen_verma_affine_at(&params.k(), m)
    }

    pub fn gen_verma_affine_at(k: &Q, m: i64) -> Result<Self, RepsError> {
        if m < 1 {
            return Err(RepsError::Eigen(format!("m = {m} must be >= 1")));
        }
        let mut md = Self::verma_affine(k, &q(m - 1, 2))?;
        md.kind = ModuleKind::GenVermaAffine;
        md.label = format!("V_aff({m})");
        let word = vec![aff::f(0); m as usize];
        let rel = md.engine.apply_word(&word, &cyclic());
        md.relations.push(rel);
        Ok(md)
    }

    /// Relaxed Verma module: top states of `L0 = h` and `H0 = 2j - 2t`, with
    /// the zero-mode Casimir fixed by the Sugawara relation.
    pub fn relaxed_affine(k: &Q, h: &Q, j: &Q) -> Result<Self, RepsError> {
        let alg = Algebra::affine_at(k.clone()).map_err(|e| RepsError::Eigen(e.to_string()))?;
        let omega = qi(2) * (k + qi(2)) * h;
        Ok(Self::build(
            ModuleKind::RelaxedVermaAffine,
            alg,
            Top::Relaxed { j: j.clone(), omega },
            h.clone(),
            qi(2) * j,
            format!("R({},{})", fmt_q(h), fmt_q(j)),
        ))
    }

    pub fn vacuum_affine(k: &Q) -> Result<Self, RepsError> {
        let alg = Algebra::affine_at(k.clone()).map_err(|e| RepsError::Eigen(e.to_string()))?;
        Ok(Self::build(ModuleKind::VacuumAffine, alg, Top::AffVacuum, Q::zero(), Q::zero(), "V_aff".into()))
    }

    pub fn gl11_verma(z: &Q, j: &Q) -> Self {
        Self::build(
            ModuleKind::Gl11Verma,
            Algebra::gl11(),
            Top::Gl11 { z: z.clone(), j: j.clone() },
            Q::zero(),
            j.clone(),
            format!("M_gl({},{})", fmt_q(z), fmt_q(j)),
        )
    }

    /// Dispatch by kind name. `h`, `j`, `m`, `z` are the eigenvalue data the
    /// kind needs; missing or inconsistent data is an error.
    pub fn present(
        kind: ModuleKind,
        params: &Params,
        h: Option<Q>,
        j: Option<Q>,
        m: Option<i64>,
        z: Option<Q>,
    ) -> Result<Self, RepsError> {
        let need = |x: Option<Q>, n: &str| x.ok_or_else(|| RepsError::Eigen(format!("missing {n}")));
        Ok(match kind {
            ModuleKind::VermaNs2 => Self::verma_ns2(&params.c(), &need(h, "h")?, &need(j, "j")?),
            ModuleKind::ChiralVermaNs2 => {
                let j = need(j, "j")?;
                if let Some(h) = h {
                    if h != &j / qi(2) {
                        return Err(RepsError::Eigen(format!(
                            "chiral Verma needs L0 = j/2, got h = {} and j = {}",
                            fmt_q(&h),
                            fmt_q(&j)
                        )));
                    }
                }
                Self::chiral_ns2(&params.c(), &j)
            }
            ModuleKind::VacuumNs2 => Self::vacuum_ns2(&params.c()),
            ModuleKind::GenVermaNs2 => Self::gen_verma_ns2(params, m.ok_or(RepsError::Eigen("missing m".into()))?)?,
            ModuleKind::VermaAffine => Self::verma_affine(&params.k(), &need(j, "j")?)?,
            ModuleKind::GenVermaAffine => {
                Self::gen_verma_affine(params, m.ok_or(RepsError::Eigen("missing m".into()))?)?
            }
            ModuleKind::RelaxedVermaAffine => Self::relaxed_affine(&params.k(), &need(h, "h")?, &need(j, "j")?)?,
            ModuleKind::VacuumAffine => Self::vacuum_affine(&params.k())?,
            ModuleKind::Gl11Verma => Self::gl11_verma(&need(z, "z")?, &need(j, "j")?),
        })
    }

    pub fn algebra(&self) -> &Algebra {
        self.engine.algebra()
    }

    pub fn is_relaxed(&self) -> bool {
        self.kind == ModuleKind::RelaxedVermaAffine
    }

    /// Size of one charge step in absolute units (2 for affine sl2).
    pub fn charge_unit(&self) -> i64 {
        1
    }

    pub fn cyclic_vector(&self) -> Vector {
        cyclic()
    }

    /// Relative weight of a basis key.
    pub fn key_weight(&self, k: &Key) -> Wt {
        (k.0.level2(), k.0.charge() - 2 * k.1 as i64)
    }

    /// Absolute `(L0, charge)` of a relative weight.
    pub fn absolute(&self, w: &Wt) -> (Q, Q) {
        (&self.top_level + half(w.0), &self.top_charge + qi(w.1))
    }

    /// Relative weight of an absolute one.
    pub fn relative(&self, level: &Q, charge: &Q) -> Result<Wt, RepsError> {
        let l = level - &self.top_level;
        let c = charge - &self.top_charge;
        let bad = || RepsError::Weight(fmt_q(level), fmt_q(charge));
        let l2 = to_int(&(l * qi(2))).ok_or_else(bad)?;
        let ch = to_int(&c).ok_or_else(bad)?;
        if l2 < 0 {
            return Err(bad());
        }
        Ok((l2, ch))
    }

    pub fn vector_weight(&self, v: &Vector) -> Option<Wt> {
        let mut it = v.keys().map(|k| self.key_weight(k));
        let w = it.next()?;
        if it.all(|x| x == w) {
            Some(w)
        } else {
            None
        }
    }

    fn positive_creation_modes(&self, max_l2: i64) -> Vec<Mode> {
        let alg = self.algebra();
        if alg.id == AlgebraId::Gl11 {
            return Vec::new();
        }
        let mut v = Vec::new();
        for &f in alg.families() {
            for m2 in 1..=max_l2 {
                let m = Mode::new(f, -(m2 as i32));
                if m.in_lattice() && self.engine.ind.is_creation(&m) {
                    v.push(m);
                }
            }
        }
        v.sort();
        if self.reverse_enumeration {
            v.reverse();
        }
        v
    }

    /// All positive-level creation monomials of doubled level `l2`.
    fn monomials_at(&self, l2: i64) -> Arc<Vec<Monomial>> {
        if let Some(v) = self.levels.read().unwrap().get(&l2) {
            return v.clone();
        }
        let modes = self.positive_creation_modes(l2);
        let mut out = Vec::new();
        let mut cur: Vec<Mode> = Vec::new();
        fn rec(modes: &[Mode], i: usize, rem: i64, cur: &mut Vec<Mode>, out: &mut Vec<Monomial>) {
            if rem == 0 {
                out.push(Monomial::from_modes(cur).unwrap());
                return;
            }
            if i == modes.len() {
                return;
            }
            let m = modes[i];
            let w = m.level2();
            let maxe = if m.odd() { 1 } else { rem / w };
            for e in (0..=maxe.min(rem / w)).rev() {
                for _ in 0..e {
                    cur.push(m);
                }
                rec(modes, i + 1, rem - e * w, cur, out);
                for _ in 0..e {
                    cur.pop();
                }
            }
        }
        rec(&modes, 0, l2, &mut cur, &mut out);
        out.sort();
        let out = Arc::new(out);
        self.levels.write().unwrap().insert(l2, out.clone());
        out
    }

    /// Basis of the induced module at a relative weight.
    pub fn space(&self, w: &Wt) -> Arc<Space> {
        if let Some(s) = self.spaces.read().unwrap().get(w) {
            return s.clone();
        }
        let (l2, ch) = *w;
        let mut keys = Vec::new();
        if l2 >= 0 {
            for mono in self.monomials_at(l2).iter() {
                let r = ch - mono.charge();
                if self.is_relaxed() {
                    if r % 2 == 0 {
                        keys.push((mono.clone(), (-r / 2) as i32));
                    }
                } else if let Some(z) = self.zero_creation {
                    let zc = z.charge();
                    if r % zc == 0 && r / zc >= 0 {
                        let n = r / zc;
                        if z.odd() && n > 1 {
                            continue;
                        }
                        let mut v = mono.0.clone();
                        if n > 0 {
                            v.push((z, n as u32));
                        }
                        keys.push((Monomial(v), 0));
                    }
                } else if r == 0 {
                    keys.push((mono.clone(), 0));
                }
            }
        }
        let s = Arc::new(Space::new(keys));
        self.spaces.write().unwrap().insert(*w, s.clone());
        s
    }

    /// Relative charges present at a doubled level, intersected with bounds.
    pub fn charges_at(&self, l2: i64, bounds: Option<(i64, i64)>) -> Vec<i64> {
        let mut set = BTreeSet::new();
        let inside = |x: i64| bounds.is_none_or(|(a, b)| a <= x && x <= b);
        for mono in self.monomials_at(l2).iter() {
            let c = mono.charge();
            if self.is_relaxed() {
                let (a, b) = bounds.expect("charge bounds required for relaxed modules");
                let mut y = a + (c - a).rem_euclid(2);
                while y <= b {
                    set.insert(y);
                    y += 2;
                }
            } else if let Some(z) = self.zero_creation {
                // z lowers the charge (F0 or Psi-)
                let (a, _) = bounds.unwrap_or((c + z.charge(), 0));
                let maxn = if z.odd() { 1 } else { i64::MAX };
                let (mut x, mut n) = (c, 0);
                while x >= a && n <= maxn {
                    if inside(x) {
                        set.insert(x);
                    }
                    x += z.charge();
                    n += 1;
                }
            } else if inside(c) {
                set.insert(c);
            }
        }
        set.into_iter().collect()
    }

    /// All relative weights with doubled level at most `max_l2`.
    pub fn weights(&self, max_l2: i64, bounds: Option<(i64, i64)>) -> Vec<Wt> {
        let mut v = Vec::new();
        for l2 in 0..=max_l2 {
            for c in self.charges_at(l2, bounds) {
                v.push((l2, c));
            }
        }
        v
    }

    /// Modes used to close submodules, and those tested for singularity.
    pub fn lowering_generators(&self, max_l2: i64) -> Vec<Mode> {
        let alg = self.algebra();
        let mut v = Vec::new();
        match alg.id {
            AlgebraId::Ns2 | AlgebraId::AffineSl2 => {
                for &f in alg.families() {
                    for m2 in 1..=max_l2.max(2) {
                        let m = Mode::new(f, -(m2 as i32));
                        if m.in_lattice() {
                            v.push(m);
                        }
                    }
                }
                if alg.id == AlgebraId::AffineSl2 {
                    v.push(aff::f(0));
                }
            }
            AlgebraId::Gl11 => v.push(Mode::new(Family::Pm, 0)),
        }
        v
    }

    pub fn raising_generators(&self) -> Vec<Mode> {
        match self.algebra().id {
            AlgebraId::Ns2 => vec![ns2::l(1), ns2::l(2), ns2::j(1), ns2::gp(1), ns2::gm(1)],
            AlgebraId::AffineSl2 => {
                if self.is_relaxed() {
                    vec![aff::e(1), aff::f(1), aff::h(1)]
                } else {
                    vec![aff::e(0), aff::e(1), aff::f(1), aff::h(1)]
                }
            }
            AlgebraId::Gl11 => vec![Mode::new(Family::Pp, 0)],
        }
    }

    /// Charge bounds used internally when closing a submodule whose result is
    /// wanted on `bounds` up to `max_l2`.
    fn closure_bounds(&self, max_l2: i64, bounds: Option<(i64, i64)>) -> Option<(i64, i64)> {
        match self.algebra().id {
            AlgebraId::Ns2 => None,
            AlgebraId::Gl11 => Some((-2, 1)),
            AlgebraId::AffineSl2 => {
                // ordering E-type modes before F-type ones keeps every PBW path
                // at or above its endpoint, and at most max_l2 above it
                let (a, b) = bounds.unwrap_or((-2 * max_l2 - 4, 2 * max_l2 + 4));
                Some((a, b + max_l2 + 2))
            }
        }
    }

    /// Closes `sub` under all generators starting from `seeds`.
    pub fn close(&self, sub: &mut Submodule, seeds: Vec<Vector>) {
        let mut gens = self.lowering_generators(sub.max_l2);
        gens.extend(self.raising_generators());
        if self.algebra().id == AlgebraId::AffineSl2 {
            gens.push(aff::h(-1));
        }
        let mut queue = seeds;
        while let Some(v) = queue.pop() {
            if v.is_empty() {
                continue;
            }
            let w = self.vector_weight(&v).expect("seeds must be homogeneous");
            if !sub.admits(&w) {
                continue;
            }
            let sp = self.space(&w);
            let e = sub.spaces.entry(w).or_default();
            if !e.insert(&sp.to_sparse(&v)) {
                continue;
            }
            for g in &gens {
                let gv = self.engine.apply_mode(g, &v);
                if gv.is_empty() {
                    continue;
                }
                let w2 = (w.0 + g.level2(), w.1 + g.charge());
                if sub.admits(&w2) {
                    queue.push(vec_primitive(&gv));
                }
            }
        }
    }

    /// Basis of the span of `U(n+) . seeds`, weight by weight.
    pub fn raised_span(&self, seeds: &[Vector]) -> Vec<Vector> {
        let gens = self.raising_generators();
        let mut spaces: BTreeMap<Wt, Echelon> = BTreeMap::new();
        let mut out = Vec::new();
        let mut queue: Vec<Vector> = seeds.to_vec();
        while let Some(v) = queue.pop() {
            let Some(w) = self.vector_weight(&v) else { continue };
            let sp = self.space(&w);
            if !spaces.entry(w).or_default().insert(&sp.to_sparse(&v)) {
                continue;
            }
            for g in &gens {
                let gv = self.engine.apply_mode(g, &v);
                if !gv.is_empty() {
                    queue.push(gv);
                }
            }
            out.push(v);
        }
        out
    }

    /// The relation submodule truncated at `max_l2`, cached.
    pub fn base_submodule(&self, max_l2: i64, bounds: Option<(i64, i64)>) -> Arc<Submodule> {
        let cb = self.closure_bounds(max_l2, bounds);
        if let Some(s) = self.base.read().unwrap().as_ref() {
            let ok_bounds = match (s.charge_bounds, cb) {
                (None, None) => true,
                (Some((a, b)), Some((c, d))) => a <= c && d <= b,
                _ => false,
            };
            if s.max_l2 >= max_l2 && ok_bounds {
                return s.clone();
            }
        }
        let mut sub = Submodule::empty(max_l2, cb);
        // relations above the cutoff still reach it through raising operators
        let seeds = self
            .raised_span(&self.relations)
            .into_iter()
            .filter(|v| self.vector_weight(v).is_some_and(|w| w.0 <= max_l2));
        self.close(&mut sub, seeds.collect());
        let s = Arc::new(sub);
        *self.base.write().unwrap() = Some(s.clone());
        s
    }

    /// Reduces a vector modulo a submodule (canonical representative).
    pub fn reduce(&self, sub: &Submodule, v: &Vector) -> Vector {
        let mut by_w: BTreeMap<Wt, Vector> = BTreeMap::new();
        for (k, c) in v {
            by_w.entry(self.key_weight(k)).or_default().insert(k.clone(), c.clone());
        }
        let mut out = Vector::new();
        for (w, part) in by_w {
            let sp = self.space(&w);
            let r = match sub.spaces.get(&w) {
                Some(e) => e.reduce(&sp.to_sparse(&part)),
                None => sp.to_sparse(&part),
            };
            for (k, c) in sp.to_vector(&r) {
                vec_add(&mut out, k, c);
            }
        }
        out
    }

    /// Weight space of the presented module (induced module modulo relations).
    pub fn weight_space(&self, level: &Q, charge: &Q) -> Result<WeightSpace, RepsError> {
        let w = self.relative(level, charge)?;
        Ok(self.weight_space_rel(&w))
    }

    pub fn weight_space_rel(&self, w: &Wt) -> WeightSpace {
        let sp = self.space(w);
        let bounds = Some((w.1, w.1));
        let sub = self.base_submodule(w.0, if self.algebra().id == AlgebraId::Ns2 { None } else { bounds });
        let (basis, rank) = match sub.spaces.get(w) {
            Some(e) => {
                (sp.keys.iter().enumerate().filter(|(i, _)| !e.is_pivot(*i)).map(|(_, k)| k.clone()).collect(), e.dim())
            }
            None => (sp.keys.clone(), 0),
        };
        WeightSpace { weight: *w, spanning: sp.dim(), rank, basis }
    }

    /// `e . v` in the presented module, reduced modulo the relations.
    pub fn act(&self, e: &EnvElement, v: &Vector) -> Vector {
        let r = self.engine.apply_env(e, v);
        if self.relations.is_empty() {
            return r;
        }
        let max = r.keys().map(|k| self.key_weight(k).0).max().unwrap_or(0);
        let lo = r.keys().map(|k| self.key_weight(k).1).min().unwrap_or(0);
        let hi = r.keys().map(|k| self.key_weight(k).1).max().unwrap_or(0);
        let sub = self.base_submodule(max, self.charge_window(lo, hi));
        self.reduce(&sub, &r)
    }

    /// Charge bounds covering `[lo, hi]`, or none when charges are unbounded.
    fn charge_window(&self, lo: i64, hi: i64) -> Option<(i64, i64)> {
        match self.algebra().id {
            AlgebraId::Ns2 => None,
            _ => {
                // PBW paths from a relation rise before they fall, so the
                // window has to reach down to the relations themselves
                let rel = self.relations.iter().filter_map(|v| self.vector_weight(v)).map(|w| w.1).min();
                Some((rel.map_or(lo, |r| r.min(lo)), hi))
            }
        }
    }

    /// Joint kernel of the raising generators on the weight space at `w`,
    /// computed in the quotient by `sub`. Vectors are returned as canonical
    /// representatives with leading coordinate 1.
    pub fn singular_in(&self, sub: &Submodule, w: &Wt) -> Vec<Vector> {
        let sp = self.space(w);
        let e = sub.spaces.get(w);
        let cols: Vec<usize> = (0..sp.dim()).filter(|i| e.is_none_or(|e| !e.is_pivot(*i))).collect();
        if cols.is_empty() {
            return Vec::new();
        }
        let mut rows: Vec<Vec<(usize, Q)>> = Vec::new();
        for g in self.raising_generators() {
            let w2 = (w.0 + g.level2(), w.1 + g.charge());
            if w2.0 < 0 {
                continue;
            }
            let sp2 = self.space(&w2);
            if sp2.dim() == 0 {
                continue;
            }
            let e2 = sub.spaces.get(&w2);
            let mut images: Vec<SparseQ> = Vec::new();
            for &ci in &cols {
                let v: Vector = [(sp.keys[ci].clone(), Q::one())].into_iter().collect();
                let gv = self.engine.apply_mode(&g, &v);
                let s = sp2.to_sparse(&gv);
                images.push(match e2 {
                    Some(e2) => e2.reduce(&s),
                    None => s,
                });
            }
            // transpose: one row per target coordinate
            let mut t: BTreeMap<usize, Vec<(usize, Q)>> = BTreeMap::new();
            for (j, img) in images.iter().enumerate() {
                for (r, c) in img {
                    t.entry(*r).or_default().push((j, c.clone()));
                }
            }
            rows.extend(t.into_values());
        }
        let m = Matrix::from_sparse_rows(cols.len(), rows);
        nullspace(&m)
            .into_iter()
            .map(|v| {
                let mut out = Vector::new();
                for (j, c) in v.into_iter().enumerate() {
                    vec_add(&mut out, sp.keys[cols[j]].clone(), c);
                }
                out
            })
            .collect()
    }

    /// Singular vectors of the presented module at an absolute weight.
    pub fn find_singular(&self, level: &Q, charge: &Q) -> Result<Vec<Vector>, RepsError> {
        let w = self.relative(level, charge)?;
        Ok(self.find_singular_rel(&w))
    }

    pub fn find_singular_rel(&self, w: &Wt) -> Vec<Vector> {
        // raising generators move the charge by at most 2
        let sub = self.base_submodule(w.0 + 2, self.charge_window(w.1 - 2, w.1 + 2));
        self.singular_in(&sub, w)
    }

    /// Character of a truncated submodule.
    pub fn character_of(&self, sub: &Submodule, max_l2: i64, bounds: Option<(i64, i64)>) -> CharacterSeries {
        let (ml, _) = self.absolute(&(max_l2, 0));
        let window = bounds.map(|(a, b)| (&self.top_charge + qi(a), &self.top_charge + qi(b)));
        let mut ch = CharacterSeries::new(ml, window);
        for w in self.weights(max_l2, bounds) {
            let n = sub.dim_at(&w) as i64;
            if n > 0 {
                let (h, j) = self.absolute(&w);
                ch.add(h, j, n);
            }
        }
        ch
    }

    /// Character of the induced module (before relations).
    pub fn free_character(&self, max_l2: i64, bounds: Option<(i64, i64)>) -> CharacterSeries {
        let (ml, _) = self.absolute(&(max_l2, 0));
        let window = bounds.map(|(a, b)| (&self.top_charge + qi(a), &self.top_charge + qi(b)));
        let mut ch = CharacterSeries::new(ml, window);
        for w in self.weights(max_l2, bounds) {
            let (h, j) = self.absolute(&w);
            ch.add(h, j, self.space(&w).dim() as i64);
        }
        ch
    }

    /// Character of the presented module.
    pub fn character(&self, max_l2: i64, bounds: Option<(i64, i64)>) -> CharacterSeries {
        let sub = self.base_submodule(max_l2, bounds);
        let mut ch = self.free_character(max_l2, bounds);
        ch.axpy(-1, &self.character_of(&sub, max_l2, bounds));
        ch
    }

    /// Character of the submodule generated by `seeds` together with the
    /// relations.
    pub fn submodule_character(&self, seeds: &[Vector], max_l2: i64, bounds: Option<(i64, i64)>) -> CharacterSeries {
        let base = self.base_submodule(max_l2, bounds);
        let mut sub = (*base).clone();
        self.close(&mut sub, seeds.to_vec());
        let mut ch = self.character_of(&sub, max_l2, bounds);
        ch.axpy(-1, &self.character_of(&base, max_l2, bounds));
        ch
    }

    /// Character of the simple quotient: repeatedly removes the submodule
    /// generated by (sub)singular vectors until none remain below the cutoff.
    pub fn simple_character(
        &self,
        max_l2: i64,
        bounds: Option<(i64, i64)>,
    ) -> Result<(CharacterSeries, SimpleReport), RepsError> {
        if self.is_relaxed() {
            return Err(RepsError::Unsupported("simple quotients of relaxed modules".into()));
        }
        let base = self.base_submodule(max_l2, bounds);
        let mut sub = (*base).clone();
        let mut report = SimpleReport::default();
        let weights = self.weights(max_l2, bounds);
        for round in 0..MAX_ROUNDS {
            let mut found = Vec::new();
            for w in &weights {
                if *w == (0, 0) {
                    continue;
                }
                for v in self.singular_in(&sub, w) {
                    let (h, j) = self.absolute(w);
                    report.rounds.push((round, fmt_q(&h), fmt_q(&j)));
                    found.push(v);
                }
            }
            if found.is_empty() {
                report.iterations = round + 1;
                let mut ch = self.free_character(max_l2, bounds);
                ch.axpy(-1, &self.character_of(&sub, max_l2, bounds));
                return Ok((ch, report));
            }
            if round > 0 {
                report.subsingular = true;
            }
            self.close(&mut sub, found);
        }
        Err(RepsError::NoFixpoint(MAX_ROUNDS))
    }
}

pub const MAX_ROUNDS: usize = 8;

/// Bookkeeping of the simple-quotient loop.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SimpleReport {
    pub iterations: usize,
    /// `(round, level, charge)` of every vector removed.
    pub rounds: Vec<(usize, String, String)>,
    /// True when a vector appeared only after a first quotient.
    pub subsingular: bool,
}

/// Basis of a weight space of a presented module.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    pub weight: Wt,
    pub spanning: usize,
    pub rank: usize,
    pub basis: Vec<Key>,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.spanning - self.rank
    }
}

/// A creation mode for closed-form characters: doubled level, charge, parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeMode {
    pub l2: i64,
    pub charge: i64,
    pub odd: bool,
}

/// Generating function of a free (super)commutative algebra on `modes`,
/// truncated at doubled level `max_l2` and relative charges in `bounds`.
/// Modes of non-positive level must be odd, or even with nonzero charge and
/// `bounds` present.
pub fn free_series(modes: &[FreeMode], max_l2: i64, bounds: Option<(i64, i64)>) -> BTreeMap<Wt, i64> {
    let neg: i64 = modes.iter().filter(|m| m.l2 < 0).map(|m| -m.l2).sum();
    let cap = max_l2 + neg;
    let widen = |b: Option<(i64, i64)>| {
        b.map(|(a, c)| {
            let spread: i64 = modes.iter().filter(|m| m.odd).map(|m| m.charge.abs()).sum::<i64>().min(1000);
            (a - spread - 2 * cap - 4, c + spread + 2 * cap + 4)
        })
    };
    let wide = widen(bounds);
    let ok = |w: &Wt| w.0 <= cap && wide.is_none_or(|(a, b)| a <= w.1 && w.1 <= b);
    let mut acc: BTreeMap<Wt, i64> = BTreeMap::new();
    acc.insert((0, 0), 1);
    let mut ordered: Vec<FreeMode> = modes.to_vec();
    // negative-level modes last, so intermediate truncation at `cap` is safe
    ordered.sort_by_key(|m| (m.l2 < 0, m.l2));
    for m in ordered {
        let mut next: BTreeMap<Wt, i64> = BTreeMap::new();
        for (w, n) in &acc {
            let mut k = 0i64;
            loop {
                let w2 = (w.0 + k * m.l2, w.1 + k * m.charge);
                if !ok(&w2) {
                    break;
                }
                *next.entry(w2).or_insert(0) += n;
                k += 1;
                if m.odd && k > 1 {
                    break;
                }
                if !m.odd && m.l2 == 0 && m.charge == 0 {
                    panic!("a zero-weight neutral even mode has no truncated series");
                }
            }
        }
        acc = next;
    }
    acc.into_iter()
        .filter(|(w, n)| *n != 0 && w.0 <= max_l2 && bounds.is_none_or(|(a, b)| a <= w.1 && w.1 <= b))
        .collect()
}

/// Creation modes of the ns2 Verma (or chiral Verma) module up to level
/// `max_level2`, with their weights after a spectral flow by `theta2/2`.
pub fn ns2_free_modes(chiral: bool, theta2: i64, max_l2: i64) -> Vec<FreeMode> {
    // odd modes pushed below level zero by the flow bound how far up we must go
    let neg: i64 = (0..).map(|i| 2 * i + 1).take_while(|r2| *r2 < theta2.abs()).map(|r2| theta2.abs() - r2).sum();
    let cap = max_l2.max(0) + neg;
    let mut v = Vec::new();
    for n in 1..=cap / 2 {
        // L_{-n}, J_{-n}: charge 0, level n
        v.push(FreeMode { l2: 2 * n, charge: 0, odd: false });
        v.push(FreeMode { l2: 2 * n, charge: 0, odd: false });
    }
    let mut r2 = 1;
    while r2 <= cap + theta2.abs() {
        for (charge, skip) in [(1i64, chiral && r2 == 1), (-1i64, false)] {
            let l2 = r2 + theta2 * charge;
            if !skip && l2 <= cap {
                v.push(FreeMode { l2, charge, odd: true });
            }
        }
        r2 += 2;
    }
    v
}

/// Sum of the levels of all creation modes pushed below zero by the flow:
/// the lowest doubled level of the flowed free module relative to its top.
pub fn ns2_lowest_l2(chiral: bool, theta2: i64) -> i64 {
    ns2_free_modes(chiral, theta2, 0).iter().filter(|m| m.l2 < 0).map(|m| m.l2).sum()
}

/// Closed-form character of a (flowed) ns2 Verma or chiral Verma module with
/// top `(h, j)`, flowed by `theta2/2`, complete for `L0 <= max_level`.
pub fn ns2_verma_character(chiral: bool, h: &Q, j: &Q, c: &Q, theta2: i64, max_level: &Q) -> CharacterSeries {
    let theta = half(theta2);
    let h0 = h + &theta * j + &theta * &theta * c / qi(6);
    let j0 = j + &theta * c / qi(3);
    let mut ch = CharacterSeries::new(max_level.clone(), None);
    let rel = max_level - &h0;
    let max_l2 = to_int(&(rel * qi(2)).floor()).unwrap();
    if max_l2 < ns2_lowest_l2(chiral, theta2) {
        return ch;
    }
    let modes = ns2_free_modes(chiral, theta2, max_l2);
    for ((l2, chg), n) in free_series(&modes, max_l2, None) {
        ch.add(&h0 + half(l2), &j0 + qi(chg), n);
    }
    ch
}

/// Closed-form character of an affine Verma-type module: `finite` lists the
/// top charges (H0 eigenvalues) with multiplicity, the negative modes act
/// freely. A Verma top has all charges `2j, 2j-2, ...` down to the window.
pub fn affine_character(top_level: &Q, top_charges: &[(Q, i64)], max_level: &Q, window: (Q, Q)) -> CharacterSeries {
    let mut ch = CharacterSeries::new(max_level.clone(), Some(window.clone()));
    let rel = max_level - top_level;
    if rel < Q::zero() {
        return ch;
    }
    let max_l2 = to_int(&(rel * qi(2)).floor()).unwrap();
    let mut modes = Vec::new();
    for n in 1..=(max_l2 / 2).max(1) {
        for charge in [2, 0, -2] {
            modes.push(FreeMode { l2: 2 * n, charge, odd: false });
        }
    }
    let span = to_int(&(&window.1 - &window.0)).unwrap() + 4 * max_l2 + 8;
    let free = free_series(&modes, max_l2, Some((-span, span)));
    for (tc, mult) in top_charges {
        for ((l2, c), n) in &free {
            ch.add(top_level + half(*l2), tc + qi(*c), n * mult);
        }
    }
    ch
}

/// Closed-form characters for the kinds that have one.
pub fn closed_form_character(
    kind: ModuleKind,
    params: &Params,
    h: &Q,
    j: &Q,
    max_level: &Q,
    window: Option<(Q, Q)>,
) -> Result<CharacterSeries, RepsError> {
    match kind {
        ModuleKind::VermaNs2 => Ok(ns2_verma_character(false, h, j, &params.c(), 0, max_level)),
        ModuleKind::ChiralVermaNs2 => Ok(ns2_verma_character(true, &(j / qi(2)), j, &params.c(), 0, max_level)),
        ModuleKind::VermaAffine | ModuleKind::RelaxedVermaAffine => {
            let (a, b) =
                window.ok_or_else(|| RepsError::Truncation("affine characters need a charge window".into()))?;
            let top_level = if kind == ModuleKind::VermaAffine { params.delta(j) } else { h.clone() };
            let mut tops = Vec::new();
            let mut x = qi(2) * j;
            let lowest = &a - qi(4 * (to_int(&(max_level - &top_level).ceil()).unwrap_or(0).max(0) + 2));
            let highest = &b + qi(4 * (to_int(&(max_level - &top_level).ceil()).unwrap_or(0).max(0) + 2));
            while x >= lowest {
                tops.push((x.clone(), 1));
                x -= qi(2);
            }
            if kind == ModuleKind::RelaxedVermaAffine {
                let mut y = qi(2) * j + qi(2);
                while y <= highest {
                    tops.push((y.clone(), 1));
                    y += qi(2);
                }
            }
            Ok(affine_character(&top_level, &tops, max_level, (a, b)))
        }
        _ => Err(RepsError::Unsupported(format!("{kind:?} has no closed form here"))),
    }
}

/// `E_{-1}^{p-r}` for `p' = 1`; singular in `V(r)` at relative level
/// `p - r` and `H0 = 2p - r - 1`.
pub fn mff_vector(params: &Params, r: i64) -> Result<EnvElement, RepsError> {
    if params.pp != 1 {
        return Err(RepsError::NotIntegral(params.pp));
    }
    if r < 1 || r >= params.p {
        return Err(RepsError::Eigen(format!("r = {r} outside 1..{}", params.p - 1)));
    }
    let mono = Monomial(vec![(aff::e(-1), (params.p - r) as u32)]);
    let mut e = EnvElement::zero();
    e.add_term(mono, Q::one());
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(a: i64, b: i64) -> Params {
        Params::new(a, b).unwrap()
    }

    #[test]
    fn vacuum_weight_spaces() {
        let v = Module::vacuum_ns2(&qi(-1));
        assert_eq!(v.weight_space(&qi(0), &qi(0)).unwrap().dim(), 1);
        assert_eq!(v.weight_space(&q(3, 2), &qi(1)).unwrap().dim(), 1);
        assert_eq!(v.weight_space(&qi(1), &qi(0)).unwrap().dim(), 1);
    }

    #[test]
    fn verma_level_one() {
        let m = Module::verma_ns2(&qi(-1), &q(1, 3), &q(1, 5));
        assert_eq!(m.weight_space(&(q(1, 3) + qi(1)), &q(1, 5)).unwrap().dim(), 3);
    }

    #[test]
    fn gen_verma_one_is_vacuum() {
        let p = pr(3, 2);
        let g = Module::gen_verma_ns2(&p, 1).unwrap();
        let v = Module::vacuum_ns2(&p.c());
        assert_eq!(g.character(8, None), v.character(8, None));
        let g2 = Module::gen_verma_ns2(&p, 2).unwrap();
        assert_eq!((g2.top_level.clone(), g2.top_charge.clone()), (q(1, 3), q(2, 3)));
    }

    #[test]
    fn relaxed_casimir() {
        let k = q(-1, 2);
        let (h, j) = (q(1, 7), q(1, 5));
        let m = Module::relaxed_affine(&k, &h, &j).unwrap();
        let v = m.cyclic_vector();
        let ef = m.engine.apply_word(&[aff::e(0), aff::f(0)], &v);
        let fe = m.engine.apply_word(&[aff::f(0), aff::e(0)], &v);
        let hh = m.engine.apply_word(&[aff::h(0), aff::h(0)], &v);
        let mut tot = Vector::new();
        for (x, s) in [(ef, qi(1)), (fe, qi(1)), (hh, q(1, 2))] {
            for (kk, c) in x {
                vec_add(&mut tot, kk, c * &s);
            }
        }
        let want = qi(2) * (k + qi(2)) * h;
        assert_eq!(tot, [((Monomial::unit(), 0), want)].into_iter().collect());
    }

    #[test]
    fn free_series_counts() {
        let modes = ns2_free_modes(false, 0, 2);
        let s = free_series(&modes, 2, None);
        assert_eq!(s.get(&(1, 1)), Some(&1));
        assert_eq!(s.get(&(1, -1)), Some(&1));
        assert_eq!(s.get(&(2, 0)), Some(&3));
    }
}
