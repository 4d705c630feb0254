//! Twisted Zhu algebras of the N=2 vacuum module and the Frenkel-Zhu
//! bimodule of a chiral Verma module.
//!
//! Fields are vectors of the vacuum module; `A_(n)` acts on any ns2 module
//! built in [`crate::reps`]. The subspace `O_g` is computed at bounded weight
//! by exact linear algebra and certified against the known size of the
//! quotient: `U(gl(1|1))` for the parity twist, `C[h, q]` for the identity
//! twist and the polynomial model `C[x_l, x_r, y] (1 + psi)` for the chiral
//! Verma bimodule.

use crate::exactla::{membership, Echelon, SparseQ};
use crate::pbw::{vec_axpy, Key, Monomial, Vector};
use crate::poly::{gcd, rational_roots, Poly};
use crate::reps::Module;
use crate::scalar::{binom, fmt_q, half, q, qi, Q};
use crate::superalg::{Family, Mode, Params};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ZhuError {
    #[error("field A is not homogeneous in weight and parity")]
    NotHomogeneous,
    #[error("composite field exceeds the recursion depth {0}")]
    Depth(usize),
    #[error("O-span did not stabilize within slack {0}")]
    Stabilization(i64),
    #[error("certificate failed at doubled weight {l2}: quotient dimension {found}, expected {expected}")]
    Certificate { l2: i64, found: usize, expected: usize },
    #[error("vector has doubled weight {0} above the cutoff {1}")]
    OutOfRange(i64, i64),
    #[error("{0}")]
    Unsupported(String),
    #[error("coset is not in the span of the basis images ({0})")]
    Solve(String),
    #[error("right module ({0}, {1}) is not a module of the quotient")]
    NotAModule(String, String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Twist {
    Id,
    Sigma,
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Twist::Id => "id",
            Twist::Sigma => "sigma",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

pub const GENERATORS: [Family; 4] = [Family::L, Family::J, Family::Gp, Family::Gm];

/// Recursion limit for composite fields (monomial length).
pub const MAX_FIELD_DEPTH: usize = 24;

/// Doubled conformal weight of a generating field.
pub fn gen_weight2(f: Family) -> i64 {
    match f {
        Family::L => 4,
        Family::J => 2,
        Family::Gp | Family::Gm => 3,
        _ => panic!("{f:?} is not an ns2 generator"),
    }
}

/// The mode `X_(n)` of a generating field: `L_(n) = L_{n-1}`, `J_(n) = J_n`,
/// `G_(n) = G_{n-1/2}`.
pub fn gen_mode(f: Family, n: i64) -> Mode {
    match f {
        Family::L => Mode::int(f, (n - 1) as i32),
        Family::J => Mode::int(f, n as i32),
        _ => Mode::new(f, (2 * n - 1) as i32),
    }
}

/// Inverse of [`gen_mode`].
fn field_index(m: &Mode) -> i64 {
    let m2 = m.m2 as i64;
    match m.fam {
        Family::L => m2 / 2 + 1,
        Family::J => m2 / 2,
        _ => (m2 + 1) / 2,
    }
}

/// The state `X_(-1) 1` of a generating field in the vacuum module.
pub fn gen_state(f: Family) -> Vector {
    [((Monomial::single(gen_mode(f, -1)), 0), Q::one())].into_iter().collect()
}

pub fn vacuum_unit() -> Vector {
    [((Monomial::unit(), 0), Q::one())].into_iter().collect()
}

fn max_l2(v: &Vector) -> Option<i64> {
    v.keys().map(|k| k.0.level2()).max()
}

/// Doubled weight and parity of a homogeneous vacuum vector.
pub fn field_weight(a: &Vector) -> Result<(i64, bool), ZhuError> {
    let mut it = a.keys().map(|k| (k.0.level2(), k.0.odd()));
    let w = it.next().ok_or(ZhuError::NotHomogeneous)?;
    if it.all(|x| x == w) {
        Ok(w)
    } else {
        Err(ZhuError::NotHomogeneous)
    }
}

/// Splits a vacuum vector into weight- and parity-homogeneous parts.
pub fn homogeneous_parts(a: &Vector) -> Vec<Vector> {
    let mut parts: BTreeMap<(i64, bool), Vector> = BTreeMap::new();
    for (k, c) in a {
        parts.entry((k.0.level2(), k.0.odd())).or_default().insert(k.clone(), c.clone());
    }
    parts.into_values().collect()
}

fn split_parity(v: &Vector) -> [Vector; 2] {
    let mut out = [Vector::new(), Vector::new()];
    for (k, c) in v {
        out[k.0.odd() as usize].insert(k.clone(), c.clone());
    }
    out
}

/// `A_(n) v` for a vacuum vector `A` acting on a vector of `target`.
pub fn field_mode_apply(target: &Module, a: &Vector, n: i64, v: &Vector) -> Result<Vector, ZhuError> {
    let mut out = Vector::new();
    for ((mono, _), c) in a {
        let r = mono_mode_apply(target, mono, n, v, 0)?;
        vec_axpy(&mut out, c, &r);
    }
    Ok(out)
}

// (u_(p) B)_(n) c = sum_i (-1)^i binom(p, i)
//     [ u_(p-i) B_(n+i) c - (-1)^p (-1)^{|u||B|} B_(p+n-i) u_(i) c ]
fn mono_mode_apply(target: &Module, mono: &Monomial, n: i64, v: &Vector, depth: usize) -> Result<Vector, ZhuError> {
    if depth > MAX_FIELD_DEPTH {
        return Err(ZhuError::Depth(MAX_FIELD_DEPTH));
    }
    let top = match max_l2(v) {
        Some(t) => t,
        None => return Ok(Vector::new()),
    };
    if mono.is_unit() {
        return Ok(if n == -1 { v.clone() } else { Vector::new() });
    }
    let modes = mono.modes();
    let x = modes[0];
    let fam = x.fam;
    let eng = &target.engine;
    let rest = Monomial::from_modes(&modes[1..]).expect("tail of a PBW monomial");
    let p = field_index(&x);
    if rest.is_unit() && p == -1 {
        return Ok(eng.apply_mode(&gen_mode(fam, n), v));
    }
    let pq = qi(p);
    let bw = rest.level2();
    let uw = gen_weight2(fam);
    let eps = if x.odd() && rest.odd() { -1 } else { 1 };
    let sp = if p.rem_euclid(2) == 0 { 1 } else { -1 };
    let mut out = Vector::new();
    let mut i = 0i64;
    while 2 * (n + i) <= top + bw - 2 {
        let co = binom(&pq, i as usize) * qi(if i % 2 == 0 { 1 } else { -1 });
        if !co.is_zero() {
            let t = mono_mode_apply(target, &rest, n + i, v, depth + 1)?;
            if !t.is_empty() {
                vec_axpy(&mut out, &co, &eng.apply_mode(&gen_mode(fam, p - i), &t));
            }
        }
        i += 1;
    }
    let mut i = 0i64;
    while 2 * i <= top + uw - 2 {
        let co = binom(&pq, i as usize) * qi(if i % 2 == 0 { -1 } else { 1 } * sp * eps);
        if !co.is_zero() {
            let s = eng.apply_mode(&gen_mode(fam, i), v);
            if !s.is_empty() {
                vec_axpy(&mut out, &co, &mono_mode_apply(target, &rest, p + n - i, &s, depth + 1)?);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// `sum_{l >= 0} binom(x, l) A_(n0 + l) v`, truncated where the modes vanish.
fn binom_sum(target: &Module, a: &Vector, aw: i64, x: &Q, n0: i64, v: &Vector) -> Result<Vector, ZhuError> {
    let mut out = Vector::new();
    let top = match max_l2(v) {
        Some(t) => t,
        None => return Ok(out),
    };
    let mut l = 0i64;
    while 2 * (n0 + l) <= top + aw - 2 {
        let b = binom(x, l as usize);
        if !b.is_zero() {
            vec_axpy(&mut out, &b, &field_mode_apply(target, a, n0 + l, v)?);
        }
        l += 1;
    }
    Ok(out)
}

/// Twisted star product `A * v` (left) or `v * A` (right).
pub fn zhu_star(twist: Twist, target: &Module, a: &Vector, v: &Vector, side: Side) -> Result<Vector, ZhuError> {
    let (aw, ai) = field_weight(a)?;
    if twist == Twist::Id && ai {
        return Ok(Vector::new());
    }
    let x = match side {
        Side::Left => half(aw),
        Side::Right => half(aw) - qi(1),
    };
    let mut out = Vector::new();
    for (j, part) in split_parity(v).iter().enumerate() {
        if part.is_empty() {
            continue;
        }
        let r = binom_sum(target, a, aw, &x, -1, part)?;
        let s = if side == Side::Right && twist == Twist::Sigma && ai && j == 1 { -Q::one() } else { Q::one() };
        vec_axpy(&mut out, &s, &r);
    }
    Ok(out)
}

/// `A o_g v`, and with `m > 0` the descended vectors
/// `sum_l binom(x, l) A_(l - 2 + i - m) v`, which also lie in `O_g`.
pub fn zhu_circle_desc(twist: Twist, target: &Module, a: &Vector, m: i64, v: &Vector) -> Result<Vector, ZhuError> {
    let (aw, ai) = field_weight(a)?;
    let sh = if twist == Twist::Id && ai { 1 } else { 0 };
    let x = half(aw) - half(sh);
    binom_sum(target, a, aw, &x, -2 + sh - m, v)
}

pub fn zhu_circle(twist: Twist, target: &Module, a: &Vector, v: &Vector) -> Result<Vector, ZhuError> {
    zhu_circle_desc(twist, target, a, 0, v)
}

/// Which module the quotient is taken of.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Vacuum,
    /// Chiral Verma module `M+` with top charge `j`.
    Chiral(Q),
}

/// Vectors spanning `O_g`: generator circle products with every descent
/// index, or circle products of every basis field (slow; for cross-checks).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanGenerators {
    Generators,
    AllFields,
}

#[derive(Clone, Debug)]
pub struct SpanOptions {
    pub slack_bound: i64,
    pub generators: SpanGenerators,
    /// Passed to the underlying module; results must not depend on it.
    pub reverse_enumeration: bool,
}

impl Default for SpanOptions {
    fn default() -> Self {
        SpanOptions { slack_bound: 6, generators: SpanGenerators::Generators, reverse_enumeration: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedDim {
    pub l2: i64,
    pub total: usize,
    pub codim: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    /// Intersection dimension per slack step.
    pub slack_dims: Vec<(i64, usize)>,
    pub graded: Vec<GradedDim>,
}

struct LevelKeys {
    keys: Vec<Key>,
    index: HashMap<Key, usize>,
}

const COL_TOP: i64 = 1 << 20;

fn col(l2: i64, local: usize) -> usize {
    (((COL_TOP - l2) as usize) << 32) | local
}

fn col_level(c: usize) -> i64 {
    COL_TOP - (c >> 32) as i64
}

/// `O_g` intersected with the weight `<= max_l2 / 2` part of the target.
pub struct ZhuContext {
    pub twist: Twist,
    pub c: Q,
    pub target: Target,
    pub module: Module,
    pub max_l2: i64,
    pub slack: i64,
    pub certificate: Certificate,
    levels: BTreeMap<i64, LevelKeys>,
    o: Echelon,
    images: OnceLock<Vec<(Vec<u32>, Vector)>>,
}

/// Number of normal-form monomials of doubled weight at most `l2`.
pub fn expected_dim(twist: Twist, target: &Target, l2: i64) -> usize {
    let mut n = 0;
    for a in 0..=l2 / 4 {
        for b in 0..=l2 / 2 {
            match (twist, target) {
                (Twist::Sigma, _) => {
                    for e in 0..=2 {
                        let w = 4 * a + 2 * b + 3 * e;
                        if w <= l2 {
                            n += if e == 1 { 2 } else { 1 };
                        }
                    }
                }
                (Twist::Id, Target::Vacuum) => {
                    if 4 * a + 2 * b <= l2 {
                        n += 1;
                    }
                }
                (Twist::Id, Target::Chiral(_)) => {
                    for c in 0..=l2 / 2 {
                        for e in 0..=1 {
                            if 4 * a + 2 * b + 2 * c + e <= l2 {
                                n += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    n
}

impl ZhuContext {
    pub fn build(twist: Twist, c: &Q, target: Target, max_l2: i64, opts: &SpanOptions) -> Result<Self, ZhuError> {
        if max_l2 < 0 {
            return Err(ZhuError::OutOfRange(max_l2, 0));
        }
        let mut module = match &target {
            Target::Vacuum => Module::vacuum_ns2(c),
            Target::Chiral(j) => {
                if twist == Twist::Sigma {
                    return Err(ZhuError::Unsupported("parity-twisted bimodules are not implemented".into()));
                }
                Module::chiral_ns2(c, j)
            }
        };
        module.reverse_enumeration = opts.reverse_enumeration;
        let mut ctx = ZhuContext {
            twist,
            c: c.clone(),
            target,
            module,
            max_l2,
            slack: 0,
            certificate: Certificate { slack_dims: Vec::new(), graded: Vec::new() },
            levels: BTreeMap::new(),
            o: Echelon::new(),
            images: OnceLock::new(),
        };
        let mut ech = Echelon::new();
        let mut prev_top = -1;
        let mut dims: Vec<usize> = Vec::new();
        let mut s = 0;
        loop {
            let top = max_l2 + 2 * s;
            for l2 in 0..=top {
                ctx.ensure_level(l2);
            }
            for row in ctx.span_rows(prev_top, top, opts.generators)? {
                ech.insert(&row);
            }
            prev_top = top;
            let d = ech.pivots().filter(|c| col_level(*c) <= max_l2).count();
            dims.push(d);
            ctx.certificate.slack_dims.push((s, d));
            let n = dims.len();
            if n >= 3 && dims[n - 1] == dims[n - 2] && dims[n - 2] == dims[n - 3] {
                break;
            }
            if s >= opts.slack_bound {
                return Err(ZhuError::Stabilization(opts.slack_bound));
            }
            s += 1;
        }
        ctx.slack = s;
        for r in ech.rows_with_pivot(|c| col_level(c) <= max_l2) {
            ctx.o.insert(&r);
        }
        let mut total = 0;
        for l2 in 0..=max_l2 {
            total += ctx.levels[&l2].keys.len();
            let od = ctx.o.pivots().filter(|c| col_level(*c) <= l2).count();
            let expected = expected_dim(twist, &ctx.target, l2);
            let g = GradedDim { l2, total, codim: total - od, expected };
            ctx.certificate.graded.push(g);
            if total - od != expected {
                return Err(ZhuError::Certificate { l2, found: total - od, expected });
            }
        }
        Ok(ctx)
    }

    fn ensure_level(&mut self, l2: i64) {
        if self.levels.contains_key(&l2) {
            return;
        }
        let mut keys = Vec::new();
        for ch in self.module.charges_at(l2, None) {
            keys.extend(self.module.space(&(l2, ch)).keys.iter().cloned());
        }
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        self.levels.insert(l2, LevelKeys { keys, index });
    }

    fn to_sparse(&self, v: &Vector) -> SparseQ {
        v.iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let l2 = k.0.level2();
                (col(l2, self.levels[&l2].index[k]), c.clone())
            })
            .collect()
    }

    fn to_vector(&self, s: &SparseQ) -> Vector {
        s.iter()
            .map(|(c, x)| {
                let l2 = col_level(*c);
                (self.levels[&l2].keys[c & 0xffff_ffff].clone(), x.clone())
            })
            .collect()
    }

    fn key_vector(k: &Key) -> Vector {
        [(k.clone(), Q::one())].into_iter().collect()
    }

    // circle vectors whose leading weight lies in (lo, hi]
    fn span_rows(&self, lo: i64, hi: i64, gens: SpanGenerators) -> Result<Vec<SparseQ>, ZhuError> {
        let mut fields: Vec<(Vector, i64, bool, bool)> = Vec::new();
        match gens {
            SpanGenerators::Generators => {
                for f in GENERATORS {
                    fields.push((gen_state(f), gen_weight2(f), f.odd(), true));
                }
            }
            SpanGenerators::AllFields => {
                let vac = Module::vacuum_ns2(&self.c);
                for l2 in 1..=hi {
                    for ch in vac.charges_at(l2, None) {
                        for k in vac.space(&(l2, ch)).keys.iter() {
                            fields.push((Self::key_vector(k), l2, k.0.odd(), false));
                        }
                    }
                }
            }
        }
        let mut rows = Vec::new();
        for (a, aw, odd, descend) in &fields {
            let sh = if self.twist == Twist::Id && *odd { 1 } else { 0 };
            // leading mode A_(-2 + sh - m) raises the doubled weight by aw + 2 - 2 sh + 2m
            let base = aw + 2 - 2 * sh;
            let mut m = 0;
            while base + 2 * m <= hi {
                for (l2, lk) in self.levels.iter() {
                    let lead = l2 + base + 2 * m;
                    if lead <= lo || lead > hi {
                        continue;
                    }
                    for k in &lk.keys {
                        let r = zhu_circle_desc(self.twist, &self.module, a, m, &Self::key_vector(k))?;
                        if !r.is_empty() {
                            rows.push(self.to_sparse(&r));
                        }
                    }
                }
                if !descend {
                    break;
                }
                m += 1;
            }
        }
        Ok(rows)
    }

    /// Dimension of `O_g` within weight `<= max_l2 / 2`.
    pub fn o_dim(&self) -> usize {
        self.o.dim()
    }

    pub fn contains(&self, v: &Vector) -> Result<bool, ZhuError> {
        Ok(self.zhu_reduce(v)?.rep.is_empty())
    }

    /// Canonical representative of `v` modulo `O_g`.
    pub fn zhu_reduce(&self, v: &Vector) -> Result<ZhuCoset, ZhuError> {
        if let Some(t) = max_l2(v) {
            if t > self.max_l2 {
                return Err(ZhuError::OutOfRange(t, self.max_l2));
            }
        }
        let r = self.o.reduce(&self.to_sparse(v));
        Ok(ZhuCoset { rep: self.to_vector(&r) })
    }

    pub fn star(&self, a: &Vector, v: &Vector, side: Side) -> Result<Vector, ZhuError> {
        zhu_star(self.twist, &self.module, a, v, side)
    }

    pub fn circle(&self, a: &Vector, v: &Vector) -> Result<Vector, ZhuError> {
        zhu_circle(self.twist, &self.module, a, v)
    }

    /// All basis keys of the target up to the cutoff.
    pub fn basis_keys(&self) -> Vec<Key> {
        self.levels.range(..=self.max_l2).flat_map(|(_, lk)| lk.keys.iter().cloned()).collect()
    }

    // Normal-form monomials with their images, exponents as in the coordinate
    // polynomial: (a, b, e1, e2) for Z^a J^b Psi-^e1 Psi+^e2; (a, b) for
    // h^a q^b; (b, a, c, e) for P^b x_r^a y^c psi^e.
    fn basis_images(&self) -> Result<&Vec<(Vec<u32>, Vector)>, ZhuError> {
        if let Some(v) = self.images.get() {
            return Ok(v);
        }
        let imgs = self.compute_images()?;
        Ok(self.images.get_or_init(|| imgs))
    }

    fn compute_images(&self) -> Result<Vec<(Vec<u32>, Vector)>, ZhuError> {
        let l = gen_state(Family::L);
        let jf = gen_state(Family::J);
        let d = self.max_l2 as u32;
        let mut out = Vec::new();
        match (&self.twist, &self.target) {
            (Twist::Sigma, Target::Vacuum) => {
                let shift = -&self.c / qi(24);
                for e1 in 0..=1u32 {
                    for e2 in 0..=1u32 {
                        for b in 0..=d / 2 {
                            for a in 0..=d / 4 {
                                if 4 * a + 2 * b + 3 * (e1 + e2) > d {
                                    continue;
                                }
                                let mut v = vacuum_unit();
                                if e2 == 1 {
                                    v = self.star(&gen_state(Family::Gp), &v, Side::Left)?;
                                }
                                if e1 == 1 {
                                    v = self.star(&gen_state(Family::Gm), &v, Side::Left)?;
                                }
                                for _ in 0..b {
                                    v = self.star(&jf, &v, Side::Left)?;
                                }
                                for _ in 0..a {
                                    let mut w = self.star(&l, &v, Side::Left)?;
                                    vec_axpy(&mut w, &shift, &v);
                                    v = w;
                                }
                                out.push((vec![a, b, e1, e2], v));
                            }
                        }
                    }
                }
            }
            (Twist::Id, Target::Vacuum) => {
                for b in 0..=d / 2 {
                    for a in 0..=d / 4 {
                        if 4 * a + 2 * b > d {
                            continue;
                        }
                        let mut v = vacuum_unit();
                        for _ in 0..b {
                            v = self.star(&jf, &v, Side::Left)?;
                        }
                        for _ in 0..a {
                            v = self.star(&l, &v, Side::Left)?;
                        }
                        out.push((vec![a, b], v));
                    }
                }
            }
            (Twist::Id, Target::Chiral(_)) => {
                let odd_base = self.module.engine.apply_mode(&Mode::new(Family::Gm, -1), &self.module.cyclic_vector());
                for e in 0..=1u32 {
                    for c in 0..=d / 2 {
                        for a in 0..=d / 4 {
                            for b in 0..=d / 2 {
                                if 4 * a + 2 * b + 2 * c + e > d {
                                    continue;
                                }
                                let mut v = if e == 0 { self.module.cyclic_vector() } else { odd_base.clone() };
                                for _ in 0..c {
                                    v = self.star(&jf, &v, Side::Right)?;
                                }
                                for _ in 0..a {
                                    v = self.star(&l, &v, Side::Right)?;
                                }
                                for _ in 0..b {
                                    let mut w = self.star(&l, &v, Side::Left)?;
                                    let r = self.star(&l, &v, Side::Right)?;
                                    vec_axpy(&mut w, &-Q::one(), &r);
                                    v = w;
                                }
                                out.push((vec![b, a, c, e], v));
                            }
                        }
                    }
                }
            }
            (Twist::Sigma, Target::Chiral(_)) => unreachable!("rejected in build"),
        }
        let mut reduced = Vec::with_capacity(out.len());
        for (e, v) in out {
            reduced.push((e, self.zhu_reduce(&v)?.rep));
        }
        Ok(reduced)
    }

    /// Coefficients of a coset in the normal-form basis.
    fn solve(&self, coset: &ZhuCoset) -> Result<Vec<(Vec<u32>, Q)>, ZhuError> {
        let imgs = self.basis_images()?;
        let mut cols: BTreeMap<Key, usize> = BTreeMap::new();
        for (_, v) in imgs.iter() {
            for k in v.keys() {
                let n = cols.len();
                cols.entry(k.clone()).or_insert(n);
            }
        }
        for k in coset.rep.keys() {
            if !cols.contains_key(k) {
                return Err(ZhuError::Solve(format!("coordinate {} outside the basis images", k.0)));
            }
        }
        let dense = |v: &Vector| {
            let mut d = vec![Q::zero(); cols.len()];
            for (k, c) in v {
                d[cols[k]] = c.clone();
            }
            d
        };
        let span: Vec<Vec<Q>> = imgs.iter().map(|(_, v)| dense(v)).collect();
        let x = membership(&span, &dense(&coset.rep)).ok_or_else(|| ZhuError::Solve("no solution".into()))?;
        Ok(imgs.iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|((e, _), c)| (e.clone(), c)).collect())
    }

    /// Inverse of `i_sigma` on a coset of charge zero and even parity.
    pub fn coset_to_gl11(&self, coset: &ZhuCoset) -> Result<Gl11Element, ZhuError> {
        if self.twist != Twist::Sigma || self.target != Target::Vacuum {
            return Err(ZhuError::Unsupported("coset_to_gl11 needs the parity twist of the vacuum module".into()));
        }
        let mut p1 = Poly::zero(2);
        let mut p2 = Poly::zero(2);
        for (e, c) in self.solve(coset)? {
            match (e[2], e[3]) {
                (0, 0) => p1.add_term(vec![e[0], e[1]], c),
                (1, 1) => p2.add_term(vec![e[0], e[1]], c),
                _ => return Err(ZhuError::Solve("coset has odd or charged components".into())),
            }
        }
        Ok(Gl11Element { p1, p2 })
    }

    /// Inverse of `i_id`: a polynomial in `(h, q)`.
    pub fn coset_to_poly(&self, coset: &ZhuCoset) -> Result<Poly<Q>, ZhuError> {
        if self.twist != Twist::Id || self.target != Target::Vacuum {
            return Err(ZhuError::Unsupported("coset_to_poly needs the identity twist of the vacuum module".into()));
        }
        let mut p = Poly::zero(2);
        for (e, c) in self.solve(coset)? {
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Coordinates of a coset of the chiral Verma bimodule in the polynomial
    /// model.
    pub fn fz_reduce(&self, v: &Vector) -> Result<FZElement, ZhuError> {
        if !matches!(self.target, Target::Chiral(_)) {
            return Err(ZhuError::Unsupported("fz_reduce needs a chiral Verma target".into()));
        }
        let coset = self.zhu_reduce(v)?;
        let xl = Poly::<Q>::var(3, 0);
        let xr = Poly::<Q>::var(3, 1);
        let y = Poly::<Q>::var(3, 2);
        let p = xl.sub(&xr);
        let mut out = FZElement { even: Poly::zero(3), odd: Poly::zero(3) };
        for (e, c) in self.solve(&coset)? {
            let t = p.pow(e[0]).mul(&xr.pow(e[1])).mul(&y.pow(e[2])).scale(&c);
            if e[3] == 0 {
                out.even = out.even.add(&t);
            } else {
                out.odd = out.odd.add(&t);
            }
        }
        Ok(out)
    }
}

/// Element of `A_g(V)` or `A_g(M)`: a canonical representative modulo `O_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZhuCoset {
    pub rep: Vector,
}

impl ZhuCoset {
    pub fn is_zero(&self) -> bool {
        self.rep.is_empty()
    }
}

/// `P1(Z, J) + P2(Z, J) Psi- Psi+` in `U(gl(1|1))`, polynomials in `(Z, J)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gl11Element {
    pub p1: Poly<Q>,
    pub p2: Poly<Q>,
}

impl Gl11Element {
    pub fn is_zero(&self) -> bool {
        self.p1.is_zero() && self.p2.is_zero()
    }

    /// Projective equality after normalizing the leading coefficient.
    pub fn proportional(&self, o: &Gl11Element) -> bool {
        let lead = |g: &Gl11Element| g.p1.leading().or(g.p2.leading()).cloned();
        match (lead(self), lead(o)) {
            (Some(a), Some(b)) => {
                self.p1.scale(&(Q::one() / &a)) == o.p1.scale(&(Q::one() / &b))
                    && self.p2.scale(&(Q::one() / a)) == o.p2.scale(&(Q::one() / b))
            }
            (None, None) => true,
            _ => false,
        }
    }
}

/// Bimodule element `f + g psi` in variables `(x_l, x_r, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FZElement {
    pub even: Poly<Q>,
    pub odd: Poly<Q>,
}

impl FZElement {
    pub fn one() -> Self {
        FZElement { even: Poly::one(3), odd: Poly::zero(3) }
    }

    pub fn psi() -> Self {
        FZElement { even: Poly::zero(3), odd: Poly::one(3) }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    fn map(&self, fe: &Poly<Q>, fo: &Poly<Q>) -> Self {
        FZElement { even: self.even.mul(fe), odd: self.odd.mul(fo) }
    }

    pub fn left_h(&self) -> Self {
        let x = Poly::var(3, 0);
        self.map(&x, &x)
    }

    /// Left `q` on a module with top charge `j`.
    pub fn left_q(&self, j: &Q) -> Self {
        let y = Poly::var(3, 2);
        self.map(&y.add(&Poly::constant(3, j.clone())), &y.add(&Poly::constant(3, j - qi(1))))
    }

    pub fn right_h(&self) -> Self {
        let x = Poly::var(3, 1);
        self.map(&x, &x)
    }

    pub fn right_q(&self) -> Self {
        let y = Poly::var(3, 2);
        self.map(&y, &y)
    }
}

/// Action of `phi` on the gl(1|1) Verma module `M_{z,j}` with basis
/// `v, Psi- v`, and whether it vanishes on the simple quotient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Gl11Action {
    #[serde(serialize_with = "crate::scalar::ser_q")]
    pub even: Q,
    #[serde(serialize_with = "crate::scalar::ser_q")]
    pub odd: Q,
    pub simple_dim: usize,
    pub zero_on_simple: bool,
    pub zero_on_verma: bool,
}

pub fn gl11_action(phi: &Gl11Element, z: &Q, j: &Q) -> Gl11Action {
    let even = phi.p1.eval(&[z.clone(), j.clone()]);
    let jm = j - qi(1);
    // Psi- Psi+ Psi- v = 2z Psi- v
    let odd = phi.p1.eval(&[z.clone(), jm.clone()]) + qi(2) * z * phi.p2.eval(&[z.clone(), jm]);
    let simple_dim = if z.is_zero() { 1 } else { 2 };
    let zero_on_simple = even.is_zero() && (simple_dim == 1 || odd.is_zero());
    let zero_on_verma = even.is_zero() && odd.is_zero();
    Gl11Action { even, odd, simple_dim, zero_on_simple, zero_on_verma }
}

/// `gl11_action` along a curve `(z(mu), j(mu))`: the two scalars as
/// polynomials in `mu`.
pub fn gl11_action_symbolic(phi: &Gl11Element, z: &Poly<Q>, j: &Poly<Q>) -> (Poly<Q>, Poly<Q>) {
    let nv = z.nvars;
    let jm = j.sub(&Poly::one(nv));
    let even = phi.p1.compose(&[z.clone(), j.clone()], nv);
    let odd =
        phi.p1.compose(&[z.clone(), jm.clone()], nv).add(&z.scale(&qi(2)).mul(&phi.p2.compose(&[z.clone(), jm], nv)));
    (even, odd)
}

/// Discrete highest weights `(z, j)` of simple `A_sigma(L_c)`-modules, with
/// their labels `(r, theta)`.
pub fn p01_points(params: &Params) -> Vec<((i64, i64), (Q, Q))> {
    let a = params.a();
    let mut out = Vec::new();
    for (r, s) in params.i_kw() {
        if s != 0 {
            continue;
        }
        for th in 0..r {
            let z = &a * qi(th + 1) * qi(r - 1 - th);
            let mu = &a * qi((r - 1 - th) - (th + 1));
            out.push(((r, th), (z, mu + q(1, 2))));
        }
    }
    out
}

/// A continuous family `(r, s), z(mu), j(mu)`.
pub type ContinuousFamily = ((i64, i64), Poly<Q>, Poly<Q>);

/// The continuous families: for each `(r, s)` the pair
/// `(z(mu), j(mu)) = (((ar - s)^2 - mu^2) / 4a, mu + 1/2)`.
pub fn p02_families(params: &Params) -> Vec<ContinuousFamily> {
    let a = params.a();
    let mu = Poly::<Q>::var(1, 0);
    params
        .i_bpz()
        .into_iter()
        .map(|(r, s)| {
            let k = &a * qi(r) - qi(s);
            let z = Poly::constant(1, &k * &k).sub(&mu.mul(&mu)).scale(&(Q::one() / (qi(4) * &a)));
            let j = mu.add(&Poly::constant(1, q(1, 2)));
            ((r, s), z, j)
        })
        .collect()
}

/// `(h, q)` of the Neveu-Schwarz module obtained from a parity-twisted top
/// `(z, j)` by flowing half a unit.
pub fn ns_from_ramond(z: &Q, j: &Q, c: &Q) -> (Q, Q) {
    (z - j / qi(2) + c / qi(12), j - c / qi(6))
}

/// A one-dimensional `C[h, q]`-module used as the right factor of a fusion
/// computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RightModule {
    pub label: String,
    #[serde(serialize_with = "crate::scalar::ser_q")]
    pub h: Q,
    #[serde(serialize_with = "crate::scalar::ser_q")]
    pub q: Q,
    pub odd: bool,
}

/// The simple modules of the quotient at c = -1: the discrete `C(eps)` and
/// the family `C_j`, derived from the parity-twisted classification.
pub struct NsClassification {
    pub c: Q,
    /// `(eps, h, q)` with `eps = 3q/2`.
    pub discrete: Vec<(i64, Q, Q)>,
    /// `h` as a polynomial in `q` on each continuous family.
    pub families: Vec<Poly<Q>>,
}

impl NsClassification {
    pub fn new(params: &Params) -> Self {
        let c = params.c();
        let mut discrete = Vec::new();
        for (_, (z, j)) in p01_points(params) {
            let (h, qq) = ns_from_ramond(&z, &j, &c);
            let eps = qq.clone() * q(3, 2);
            let e = if eps.is_integer() { eps.to_integer().try_into().unwrap_or(i64::MAX) } else { i64::MAX };
            discrete.push((e, h, qq));
        }
        discrete.sort_by_key(|d| d.0);
        let qv = Poly::<Q>::var(1, 0);
        let families = p02_families(params)
            .into_iter()
            .map(|(_, z, j)| {
                // mu = q - 1/2 + c/6, then h = z - j/2 + c/12
                let mu = qv.add(&Poly::constant(1, &c / qi(6) - q(1, 2)));
                let zq = z.compose(std::slice::from_ref(&mu), 1);
                let jq = j.compose(&[mu], 1);
                zq.sub(&jq.scale(&q(1, 2))).add(&Poly::constant(1, &c / qi(12)))
            })
            .collect();
        NsClassification { c, discrete, families }
    }

    pub fn eps(&self, eps: i64, odd: bool) -> Option<RightModule> {
        self.discrete.iter().find(|d| d.0 == eps).map(|(e, h, qq)| RightModule {
            label: format!("{}C({})", if odd { "Pi " } else { "" }, e),
            h: h.clone(),
            q: qq.clone(),
            odd,
        })
    }

    pub fn c_j(&self, j: &Q, odd: bool) -> Option<RightModule> {
        self.families.first().map(|f| RightModule {
            label: format!("{}C_{}", if odd { "Pi " } else { "" }, fmt_q(j)),
            h: f.eval(std::slice::from_ref(j)),
            q: j.clone(),
            odd,
        })
    }

    /// Name of the simple module with eigenvalues `(h, q)`.
    pub fn identify(&self, h: &Q, qq: &Q, odd: bool) -> String {
        let pre = if odd { "Pi " } else { "" };
        if let Some(d) = self.discrete.iter().find(|d| &d.1 == h && &d.2 == qq) {
            return format!("{pre}C({})", d.0);
        }
        if self.families.iter().any(|f| &f.eval(std::slice::from_ref(qq)) == h) {
            return format!("{pre}C_{}", fmt_q(qq));
        }
        format!("{pre}[h={}, q={}]", fmt_q(h), fmt_q(qq))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FusionSummand {
    pub label: String,
    pub odd: bool,
    #[serde(serialize_with = "crate::scalar::ser_q")]
    pub xl: Q,
    #[serde(serialize_with = "crate::scalar::ser_q")]
    pub q: Q,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FusionReport {
    pub right: RightModule,
    pub dimension: usize,
    pub all_rational: bool,
    pub summands: Vec<FusionSummand>,
}

impl FusionReport {
    pub fn labels(&self) -> Vec<String> {
        self.summands.iter().map(|s| s.label.clone()).collect()
    }
}

/// Tensor product of the bimodule quotient `(C[x_l,x_r,y](1 + psi)) / kernel`
/// with a one-dimensional right module. `ideal` holds the defining
/// polynomials of the algebra in `(h, q)`; `j` is the top charge of the
/// chiral Verma module.
pub fn fz_kernel_and_fusion(
    kernel_even: &[Poly<Q>],
    kernel_odd: &[Poly<Q>],
    ideal: &[Poly<Q>],
    j: &Q,
    right: &RightModule,
    names: &NsClassification,
) -> Result<FusionReport, ZhuError> {
    let pt = [right.h.clone(), right.q.clone()];
    if ideal.iter().any(|f| !f.eval(&pt).is_zero()) {
        return Err(ZhuError::NotAModule(fmt_q(&right.h), fmt_q(&right.q)));
    }
    let xl = Poly::<Q>::var(1, 0);
    let subs = [xl, Poly::constant(1, right.h.clone()), Poly::constant(1, right.q.clone())];
    let part = |gens: &[Poly<Q>]| {
        let mut g: Vec<Q> = Vec::new();
        for f in gens {
            g = gcd(&g, &f.compose(&subs, 1).univariate_coeffs());
        }
        g
    };
    let mut summands = Vec::new();
    let mut dimension = 0;
    let mut all_rational = true;
    for (odd_part, gens) in [(false, kernel_even), (true, kernel_odd)] {
        let g = part(gens);
        if g.is_empty() {
            return Err(ZhuError::Unsupported("quotient is infinite-dimensional".into()));
        }
        let deg = g.len() - 1;
        dimension += deg;
        let roots = rational_roots(&g);
        all_rational &= roots.iter().map(|r| r.1).sum::<usize>() == deg;
        let ql = &right.q + j - if odd_part { qi(1) } else { qi(0) };
        let odd = odd_part != right.odd;
        for (x, mult) in roots {
            summands.push(FusionSummand {
                label: names.identify(&x, &ql, odd),
                odd,
                xl: x,
                q: ql.clone(),
                multiplicity: mult,
            });
        }
    }
    Ok(FusionReport { right: right.clone(), dimension, all_rational, summands })
}

/// Builds `sum c * word . cyclic` in a module.
pub fn words_vector(module: &Module, words: &[(Q, Vec<Mode>)]) -> Vector {
    let cyc = module.cyclic_vector();
    let mut out = Vector::new();
    for (c, w) in words {
        vec_axpy(&mut out, c, &module.engine.apply_word(w, &cyc));
    }
    out
}
