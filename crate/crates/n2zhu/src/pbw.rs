//! PBW monomials, elements of universal enveloping superalgebras, and the
//! rewriting engine shared with induced modules.
//!
//! The engine works on pairs `(monomial, top state)`: a monomial in
//! "creation" modes applied to a state of a finite or discrete top space. A
//! universal enveloping algebra is the special case where every mode is a
//! creation mode and the top space is one-dimensional.

use crate::scalar::{parse_q, q, Q};
use crate::superalg::{Algebra, AlgebraId, Family, LieElem, Mode};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

pub const DEFAULT_DEGREE_CAP: usize = 64;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PbwError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("mode {0} is not in algebra {1}")]
    Mode(String, String),
    #[error("monomial degree {0} exceeds the cap {1}")]
    DegreeCap(usize, usize),
    #[error("algebra mismatch")]
    Mismatch,
}

/// Ordered product of modes with multiplicities, strictly increasing in the
/// global PBW order. Odd modes have exponent 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<(Mode, u32)>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn single(m: Mode) -> Self {
        Monomial(vec![(m, 1)])
    }

    /// Builds from a list of modes, sorting them; returns `None` if an odd
    /// mode repeats.
    pub fn from_modes(modes: &[Mode]) -> Option<Self> {
        let mut v: Vec<Mode> = modes.to_vec();
        v.sort();
        let mut out: Vec<(Mode, u32)> = Vec::new();
        for m in v {
            match out.last_mut() {
                Some((lm, e)) if *lm == m => {
                    if m.odd() {
                        return None;
                    }
                    *e += 1;
                }
                _ => out.push((m, 1)),
            }
        }
        Some(Monomial(out))
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|(_, e)| *e as usize).sum()
    }

    /// Doubled level (`-2 * sum of mode indices`).
    pub fn level2(&self) -> i64 {
        self.0.iter().map(|(m, e)| m.level2() * *e as i64).sum()
    }

    pub fn charge(&self) -> i64 {
        self.0.iter().map(|(m, e)| m.charge() * *e as i64).sum()
    }

    pub fn odd(&self) -> bool {
        self.0.iter().filter(|(m, _)| m.odd()).count() % 2 == 1
    }

    /// Flat list of modes, left to right.
    pub fn modes(&self) -> Vec<Mode> {
        let mut v = Vec::with_capacity(self.degree());
        for (m, e) in &self.0 {
            for _ in 0..*e {
                v.push(*m);
            }
        }
        v
    }

    fn prepend(&self, x: Mode) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push((x, 1));
        v.extend_from_slice(&self.0);
        Monomial(v)
    }

    fn bump_first(&self) -> Monomial {
        let mut v = self.0.clone();
        v[0].1 += 1;
        Monomial(v)
    }

    fn drop_first(&self) -> Monomial {
        let mut v = self.0.clone();
        if v[0].1 > 1 {
            v[0].1 -= 1;
        } else {
            v.remove(0);
        }
        Monomial(v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.0.iter().map(|(m, e)| if *e == 1 { m.to_string() } else { format!("{m}^{e}") }).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Basis element of an induced module: a creation monomial on a top state.
pub type Key = (Monomial, i32);

/// Sparse vector over [`Key`]s.
pub type Vector = BTreeMap<Key, Q>;

pub fn vec_add(acc: &mut Vector, k: Key, c: Q) {
    if c.is_zero() {
        return;
    }
    match acc.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn vec_axpy(acc: &mut Vector, s: &Q, v: &Vector) {
    for (k, c) in v {
        vec_add(acc, k.clone(), s * c);
    }
}

pub fn vec_scale(v: &Vector, s: &Q) -> Vector {
    if s.is_zero() {
        return Vector::new();
    }
    v.iter().map(|(k, c)| (k.clone(), c * s)).collect()
}

/// `v` rescaled to coprime integer coefficients; spans are unchanged.
pub fn vec_primitive(v: &Vector) -> Vector {
    use num_integer::Integer;
    let den = v.values().fold(num_bigint::BigInt::one(), |d, c| d.lcm(c.denom()));
    let content = v.values().fold(num_bigint::BigInt::zero(), |g, c| g.gcd(&(c.numer() * (&den / c.denom()))));
    if content.is_zero() {
        return Vector::new();
    }
    vec_scale(v, &Q::new(den, content))
}

/// How the non-creation modes act on the top space.
pub trait Induction: Send + Sync {
    fn algebra(&self) -> &Algebra;
    fn is_creation(&self, m: &Mode) -> bool;
    /// Action of a non-creation mode on top state `t`.
    fn top(&self, m: &Mode, t: i32) -> Vec<(i32, Q)>;
}

/// Every mode is a creation mode: the universal enveloping algebra itself.
pub struct Free(pub Algebra);

impl Induction for Free {
    fn algebra(&self) -> &Algebra {
        &self.0
    }
    fn is_creation(&self, _m: &Mode) -> bool {
        true
    }
    fn top(&self, m: &Mode, _t: i32) -> Vec<(i32, Q)> {
        unreachable!("{m} is a creation mode in a free presentation")
    }
}

type Memo = HashMap<(Mode, Key), Arc<Vec<(Key, Q)>>>;

/// Memoized action of modes on `(monomial, top)` pairs.
pub struct Engine<I: Induction> {
    pub ind: I,
    memo: RwLock<Memo>,
    bracket_memo: RwLock<HashMap<(Mode, Mode), Arc<LieElem>>>,
}

impl<I: Induction> Engine<I> {
    pub fn new(ind: I) -> Self {
        Engine { ind, memo: RwLock::new(HashMap::new()), bracket_memo: RwLock::new(HashMap::new()) }
    }

    pub fn algebra(&self) -> &Algebra {
        self.ind.algebra()
    }

    fn bracket(&self, x: &Mode, y: &Mode) -> Arc<LieElem> {
        if let Some(b) = self.bracket_memo.read().unwrap().get(&(*x, *y)) {
            return b.clone();
        }
        let b = Arc::new(self.algebra().bracket(x, y));
        self.bracket_memo.write().unwrap().insert((*x, *y), b.clone());
        b
    }

    /// `x . (mono | t)` expanded in the induced basis.
    pub fn apply_mode_key(&self, x: &Mode, key: &Key) -> Arc<Vec<(Key, Q)>> {
        let mk = (*x, key.clone());
        if let Some(r) = self.memo.read().unwrap().get(&mk) {
            return r.clone();
        }
        let r = Arc::new(self.compute(x, key));
        self.memo.write().unwrap().insert(mk, r.clone());
        r
    }

    fn compute(&self, x: &Mode, key: &Key) -> Vec<(Key, Q)> {
        let (mono, t) = key;
        let creation = self.ind.is_creation(x);
        if mono.is_unit() {
            if creation {
                return vec![((Monomial::single(*x), *t), Q::one())];
            }
            return self
                .ind
                .top(x, *t)
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(t2, c)| ((Monomial::unit(), t2), c))
                .collect();
        }
        let (y, _) = mono.0[0];
        if creation && *x < y {
            return vec![((mono.prepend(*x), *t), Q::one())];
        }
        let mut out = Vector::new();
        if creation && *x == y {
            if !x.odd() {
                return vec![((mono.bump_first(), *t), Q::one())];
            }
            // x x = [x, x]/2 for odd x
            let rest = (mono.drop_first(), *t);
            let br = self.bracket(x, x);
            self.apply_lie_into(&br, &rest, &q(1, 2), &mut out);
            return out.into_iter().collect();
        }
        let rest = (mono.drop_first(), *t);
        let s = if x.odd() && y.odd() { -Q::one() } else { Q::one() };
        let xr = self.apply_mode_key(x, &rest);
        for (k, c) in xr.iter() {
            let yk = self.apply_mode_key(&y, k);
            let sc = &s * c;
            for (k2, c2) in yk.iter() {
                vec_add(&mut out, k2.clone(), &sc * c2);
            }
        }
        let br = self.bracket(x, &y);
        self.apply_lie_into(&br, &rest, &Q::one(), &mut out);
        out.into_iter().collect()
    }

    fn apply_lie_into(&self, e: &LieElem, key: &Key, s: &Q, out: &mut Vector) {
        if !e.scalar.is_zero() {
            vec_add(out, key.clone(), s * &e.scalar);
        }
        for (m, c) in &e.terms {
            let sc = s * c;
            for (k2, c2) in self.apply_mode_key(m, key).iter() {
                vec_add(out, k2.clone(), &sc * c2);
            }
        }
    }

    pub fn apply_mode(&self, x: &Mode, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (k, c) in v {
            for (k2, c2) in self.apply_mode_key(x, k).iter() {
                vec_add(&mut out, k2.clone(), c * c2);
            }
        }
        out
    }

    pub fn apply_lie(&self, e: &LieElem, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (k, c) in v {
            self.apply_lie_into(e, k, c, &mut out);
        }
        out
    }

    /// Applies a word of modes (leftmost acts last).
    pub fn apply_word(&self, word: &[Mode], v: &Vector) -> Vector {
        let mut cur = v.clone();
        for m in word.iter().rev() {
            cur = self.apply_mode(m, &cur);
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    /// Applies an enveloping-algebra element.
    pub fn apply_env(&self, e: &EnvElement, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (mono, c) in &e.terms {
            let w = self.apply_word(&mono.modes(), v);
            vec_axpy(&mut out, c, &w);
        }
        out
    }

    pub fn clear_memo(&self) {
        self.memo.write().unwrap().clear();
    }
}

/// Sparse combination of PBW monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnvElement {
    pub terms: BTreeMap<Monomial, Q>,
}

impl EnvElement {
    pub fn zero() -> Self {
        EnvElement::default()
    }

    pub fn unit() -> Self {
        Self::scalar(Q::one())
    }

    pub fn scalar(c: Q) -> Self {
        let mut e = EnvElement::zero();
        e.add_term(Monomial::unit(), c);
        e
    }

    pub fn mode(m: Mode) -> Self {
        let mut e = EnvElement::zero();
        e.add_term(Monomial::single(m), Q::one());
        e
    }

    pub fn from_lie(l: &LieElem) -> Self {
        let mut e = EnvElement::scalar(l.scalar.clone());
        for (m, c) in &l.terms {
            e.add_term(Monomial::single(*m), c.clone());
        }
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &EnvElement) -> EnvElement {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, s: &Q) -> EnvElement {
        let mut r = EnvElement::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c * s);
        }
        r
    }

    pub fn sub(&self, o: &EnvElement) -> EnvElement {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parity when homogeneous; `None` for mixed parity or zero.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| m.odd());
        let first = it.next()?;
        if it.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Homogeneous component of doubled level `l2` and charge `ch`.
    pub fn component(&self, l2: i64, ch: i64) -> EnvElement {
        EnvElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.level2() == l2 && m.charge() == ch)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn to_vector(&self) -> Vector {
        self.terms.iter().map(|(m, c)| ((m.clone(), 0), c.clone())).collect()
    }

    pub fn from_vector(v: &Vector) -> Self {
        let mut e = EnvElement::zero();
        for ((m, _), c) in v {
            e.add_term(m.clone(), c.clone());
        }
        e
    }
}

impl fmt::Display for EnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(m, c)| format!("({}) {}", crate::scalar::fmt_q(c), m)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Normal ordering and products in `U(g)`.
pub struct Pbw {
    engine: Engine<Free>,
    pub degree_cap: usize,
}

impl Pbw {
    pub fn new(alg: Algebra) -> Self {
        Pbw { engine: Engine::new(Free(alg)), degree_cap: DEFAULT_DEGREE_CAP }
    }

    pub fn algebra(&self) -> &Algebra {
        self.engine.algebra()
    }

    /// Normal form of a linear combination of words.
    pub fn normal_order(&self, words: &[(Vec<Mode>, Q)]) -> Result<EnvElement, PbwError> {
        let mut out = Vector::new();
        for (w, c) in words {
            if w.len() > self.degree_cap {
                return Err(PbwError::DegreeCap(w.len(), self.degree_cap));
            }
            for m in w {
                self.algebra()
                    .check_mode(m)
                    .map_err(|_| PbwError::Mode(m.to_string(), self.algebra().id.name().into()))?;
            }
            let unit: Vector = [((Monomial::unit(), 0), Q::one())].into_iter().collect();
            let r = self.engine.apply_word(w, &unit);
            vec_axpy(&mut out, c, &r);
        }
        let e = EnvElement::from_vector(&out);
        self.check_cap(&e)?;
        Ok(e)
    }

    fn check_cap(&self, e: &EnvElement) -> Result<(), PbwError> {
        if let Some(d) = e.terms.keys().map(|m| m.degree()).max() {
            if d > self.degree_cap {
                return Err(PbwError::DegreeCap(d, self.degree_cap));
            }
        }
        Ok(())
    }

    /// Normal-ordered product.
    pub fn multiply(&self, a: &EnvElement, b: &EnvElement) -> Result<EnvElement, PbwError> {
        let bv = b.to_vector();
        let r = self.engine.apply_env(a, &bv);
        let e = EnvElement::from_vector(&r);
        self.check_cap(&e)?;
        Ok(e)
    }

    /// Normal-ordered product of two elements given as already-ordered
    /// monomial sums; also the way to reduce any element to normal form.
    pub fn normalize(&self, e: &EnvElement) -> Result<EnvElement, PbwError> {
        self.multiply(e, &EnvElement::unit())
    }
}

/// Parses a mode token such as `L_-2`, `G+_-1/2`, `E_0`, `Psi-` or `Z`.
pub fn parse_mode(alg: AlgebraId, tok: &str) -> Result<Mode, PbwError> {
    let err = || PbwError::Parse(format!("bad mode `{tok}`"));
    let (name, idx) = match tok.split_once('_') {
        Some((a, b)) => (a, Some(b)),
        None => (tok, None),
    };
    let fam = alg.families().iter().copied().find(|f| f.symbol() == name).ok_or_else(err)?;
    let m2 = match idx {
        None => {
            if alg != AlgebraId::Gl11 {
                return Err(err());
            }
            0
        }
        Some(s) => {
            let v = parse_q(s).ok_or_else(err)?;
            crate::scalar::to_half_int(&v).ok_or_else(err)? as i32
        }
    };
    let m = Mode::new(fam, m2);
    if !m.in_lattice() {
        return Err(PbwError::Mode(tok.to_string(), alg.name().into()));
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn tokenize(s: &str) -> Vec<String> {
    s.replace('(', " ( ").replace(')', " ) ").split_whitespace().map(String::from).collect()
}

fn read_sexp(toks: &[String], pos: &mut usize) -> Result<Sexp, PbwError> {
    let t = toks.get(*pos).ok_or_else(|| PbwError::Parse("unexpected end".into()))?;
    *pos += 1;
    if t == "(" {
        let mut items = Vec::new();
        loop {
            match toks.get(*pos) {
                None => return Err(PbwError::Parse("unbalanced `(`".into())),
                Some(x) if x == ")" => {
                    *pos += 1;
                    return Ok(Sexp::List(items));
                }
                _ => items.push(read_sexp(toks, pos)?),
            }
        }
    } else if t == ")" {
        Err(PbwError::Parse("unexpected `)`".into()))
    } else {
        Ok(Sexp::Atom(t.clone()))
    }
}

/// Expression as a list of (word, coefficient), i.e. before normal ordering.
fn eval_sexp(alg: AlgebraId, e: &Sexp) -> Result<Vec<(Vec<Mode>, Q)>, PbwError> {
    match e {
        Sexp::Atom(a) => {
            if let Some(c) = parse_q(a) {
                Ok(vec![(Vec::new(), c)])
            } else {
                Ok(vec![(vec![parse_mode(alg, a)?], Q::one())])
            }
        }
        Sexp::List(items) => {
            let (head, args) = items.split_first().ok_or_else(|| PbwError::Parse("empty list".into()))?;
            let op = match head {
                Sexp::Atom(a) => a.as_str(),
                _ => return Err(PbwError::Parse("operator expected".into())),
            };
            let vals: Vec<_> = args.iter().map(|x| eval_sexp(alg, x)).collect::<Result<_, _>>()?;
            match op {
                "*" => {
                    let mut acc = vec![(Vec::new(), Q::one())];
                    for v in vals {
                        let mut next = Vec::new();
                        for (w1, c1) in &acc {
                            for (w2, c2) in &v {
                                let mut w = w1.clone();
                                w.extend_from_slice(w2);
                                next.push((w, c1 * c2));
                            }
                        }
                        acc = next;
                    }
                    Ok(acc)
                }
                "+" => Ok(vals.into_iter().flatten().collect()),
                "-" => {
                    let mut it = vals.into_iter();
                    let first = it.next().ok_or_else(|| PbwError::Parse("`-` needs arguments".into()))?;
                    let rest: Vec<_> = it.flatten().collect();
                    if rest.is_empty() {
                        return Ok(first.into_iter().map(|(w, c)| (w, -c)).collect());
                    }
                    Ok(first.into_iter().chain(rest.into_iter().map(|(w, c)| (w, -c))).collect())
                }
                "^" => {
                    if vals.len() != 2 {
                        return Err(PbwError::Parse("`^` takes a base and an exponent".into()));
                    }
                    let n = match &args[1] {
                        Sexp::Atom(a) => a.parse::<usize>().map_err(|_| PbwError::Parse("bad exponent".into()))?,
                        _ => return Err(PbwError::Parse("bad exponent".into())),
                    };
                    let mut acc = vec![(Vec::new(), Q::one())];
                    for _ in 0..n {
                        let mut next = Vec::new();
                        for (w1, c1) in &acc {
                            for (w2, c2) in &vals[0] {
                                let mut w = w1.clone();
                                w.extend_from_slice(w2);
                                next.push((w, c1 * c2));
                            }
                        }
                        acc = next;
                    }
                    Ok(acc)
                }
                _ => Err(PbwError::Parse(format!("unknown operator `{op}`"))),
            }
        }
    }
}

/// Parses an s-expression such as `(* G+_1/2 G-_-1/2)` or
/// `(+ (* 2 L_-2) (^ J_-1 2))` into raw words.
pub fn parse_expr(alg: AlgebraId, s: &str) -> Result<Vec<(Vec<Mode>, Q)>, PbwError> {
    let toks = tokenize(s);
    let mut pos = 0;
    let e = read_sexp(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(PbwError::Parse("trailing input".into()));
    }
    eval_sexp(alg, &e)
}

/// Convenience: an element from `(coefficient, word)` pairs, normal-ordered.
pub fn element(pbw: &Pbw, terms: &[(Q, Vec<Mode>)]) -> EnvElement {
    let words: Vec<(Vec<Mode>, Q)> = terms.iter().map(|(c, w)| (w.clone(), c.clone())).collect();
    pbw.normal_order(&words).expect("element within degree cap")
}

/// Shorthands for ns2 modes with the index given doubled for `G`.
pub mod ns2 {
    use super::*;
    pub fn l(n: i32) -> Mode {
        Mode::int(Family::L, n)
    }
    pub fn j(n: i32) -> Mode {
        Mode::int(Family::J, n)
    }
    /// `G+_{r2/2}`.
    pub fn gp(r2: i32) -> Mode {
        Mode::new(Family::Gp, r2)
    }
    /// `G-_{r2/2}`.
    pub fn gm(r2: i32) -> Mode {
        Mode::new(Family::Gm, r2)
    }
}

/// Shorthands for affine sl(2) modes.
pub mod aff {
    use super::*;
    pub fn e(n: i32) -> Mode {
        Mode::int(Family::E, n)
    }
    pub fn f(n: i32) -> Mode {
        Mode::int(Family::F, n)
    }
    pub fn h(n: i32) -> Mode {
        Mode::int(Family::H, n)
    }
}

#[cfg(test)]
mod tests {
    use super::ns2::*;
    use super::*;
    use crate::scalar::qi;
    use crate::superalg::Params;

    fn pbw() -> Pbw {
        Pbw::new(Algebra::ns2(&Params::new(3, 2).unwrap()))
    }

    #[test]
    fn anticommutator_reorders() {
        let p = pbw();
        let e = p.normal_order(&[(vec![gp(1), gm(-1)], Q::one())]).unwrap();
        let mut want = EnvElement::zero();
        want.add_term(Monomial::from_modes(&[gm(-1), gp(1)]).unwrap(), -Q::one());
        want.add_term(Monomial::single(l(0)), qi(2));
        want.add_term(Monomial::single(j(0)), qi(1));
        assert_eq!(e, want);
    }

    #[test]
    fn ordered_word_is_fixed_and_odd_square_vanishes() {
        let p = pbw();
        let e = p.normal_order(&[(vec![l(-2), l(-2)], Q::one())]).unwrap();
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.terms.keys().next().unwrap().0, vec![(l(-2), 2)]);
        assert!(p.normal_order(&[(vec![gp(-1), gp(-1)], Q::one())]).unwrap().is_zero());
    }

    #[test]
    fn parser_round_trip() {
        let words = parse_expr(AlgebraId::Ns2, "(+ (* G+_1/2 G-_-1/2) (- (* 2 L_0)))").unwrap();
        let e = pbw().normal_order(&words).unwrap();
        assert_eq!(e.terms.len(), 2);
        assert!(parse_expr(AlgebraId::Ns2, "(* L_1/2)").is_err());
        assert!(parse_expr(AlgebraId::Ns2, "(* G+_1").is_err());
        assert_eq!(parse_mode(AlgebraId::Gl11, "Psi-").unwrap(), Mode::new(Family::Pm, 0));
    }

    #[test]
    fn degree_cap() {
        let mut p = pbw();
        p.degree_cap = 3;
        assert!(matches!(p.normal_order(&[(vec![l(-1); 4], Q::one())]), Err(PbwError::DegreeCap(4, 3))));
    }
}
