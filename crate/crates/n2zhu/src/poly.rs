//! Sparse multivariate polynomials over an exact field, plus the univariate
//! operations needed for fusion computations.

use crate::scalar::{fmt_q, Field, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Polynomial in `nvars` variables; keys are exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T> {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Field> Poly<T> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, T::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, T::one());
        p
    }

    pub fn monomial(exps: Vec<u32>, c: T) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: T) {
        if c.is_zero() {
            return;
        }
        let x = match self.terms.remove(&e) {
            Some(old) => old + c,
            None => c,
        };
        if !x.is_zero() {
            self.terms.insert(e, x);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c.clone() * s.clone());
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1.clone() * c2.clone());
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one(self.nvars);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Total degree (`None` for zero).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn eval(&self, pt: &[T]) -> T {
        let mut s = T::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in pt.iter().zip(e) {
                for _ in 0..*k {
                    t = t * x.clone();
                }
            }
            s = s + t;
        }
        s
    }

    /// Substitutes polynomials (in `nv` variables) for every variable.
    pub fn compose(&self, subs: &[Poly<T>], nv: usize) -> Poly<T> {
        let mut r = Poly::zero(nv);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(nv, c.clone());
            for (i, k) in e.iter().enumerate() {
                t = t.mul(&subs[i].pow(*k));
            }
            r = r.add(&t);
        }
        r
    }

    /// Leading coefficient in the lexicographically largest exponent.
    pub fn leading(&self) -> Option<&T> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    /// Scales so that the lexicographically largest term has coefficient 1.
    pub fn normalized(&self) -> Self {
        match self.leading() {
            Some(c) => self.scale(&c.inv()),
            None => self.clone(),
        }
    }

    /// True when `self = lambda * other` for some nonzero `lambda`.
    pub fn proportional(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.normalized() == other.normalized()
    }

    /// Coefficient list of a univariate polynomial (index = degree).
    pub fn univariate_coeffs(&self) -> Vec<T> {
        assert_eq!(self.nvars, 1);
        let d = self.degree().unwrap_or(0) as usize;
        let mut v = vec![T::zero(); d + 1];
        for (e, c) in &self.terms {
            v[e[0] as usize] = c.clone();
        }
        v
    }

    pub fn from_univariate(coeffs: &[T]) -> Self {
        let mut p = Self::zero(1);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(vec![i as u32], c.clone());
        }
        p
    }
}

fn trim<T: Field>(v: &mut Vec<T>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Univariate division with remainder on coefficient vectors.
pub fn div_rem<T: Field>(a: &[T], b: &[T]) -> (Vec<T>, Vec<T>) {
    let mut r: Vec<T> = a.to_vec();
    trim(&mut r);
    let mut b: Vec<T> = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut qv = vec![T::zero(); r.len() - b.len() + 1];
    let lb = b.last().unwrap().inv();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap().clone() * lb.clone();
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].clone() - f.clone() * bc.clone();
        }
        qv[shift] = f;
        r.pop();
        trim(&mut r);
    }
    (qv, r)
}

/// Monic gcd of univariate polynomials (empty vector for the zero polynomial).
pub fn gcd<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    let mut x: Vec<T> = a.to_vec();
    let mut y: Vec<T> = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        let inv = l.inv();
        for c in x.iter_mut() {
            *c = c.clone() * inv.clone();
        }
    }
    x
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let lim = n.to_u64().expect("coefficient too large for root search");
    let mut d = 1u64;
    while d * d <= lim {
        if lim.is_multiple_of(d) {
            out.push(BigInt::from(d));
            if d * d != lim {
                out.push(BigInt::from(lim / d));
            }
        }
        d += 1;
    }
    out
}

/// Rational roots of a univariate polynomial with multiplicity, ascending.
pub fn rational_roots(coeffs: &[Q]) -> Vec<(Q, usize)> {
    let mut p: Vec<Q> = coeffs.to_vec();
    trim(&mut p);
    let mut out = Vec::new();
    if p.len() <= 1 {
        return out;
    }
    // zero roots first
    let mut zmult = 0;
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        zmult += 1;
    }
    if zmult > 0 {
        out.push((Q::zero(), zmult));
    }
    // clear denominators
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    if ints.len() > 1 {
        let mut cands = Vec::new();
        for num in divisors(&ints[0]) {
            for den in divisors(ints.last().unwrap()) {
                for s in [1, -1] {
                    cands.push(Q::new(&num * BigInt::from(s), den.clone()));
                }
            }
        }
        cands.sort();
        cands.dedup();
        for x in cands {
            let mut mult = 0;
            loop {
                if p.len() <= 1 {
                    break;
                }
                let (qv, r) = div_rem(&p, &[-x.clone(), Q::one()]);
                if r.iter().all(|c| c.is_zero()) {
                    p = qv;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                out.push((x, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Renders a polynomial over `Q` with the given variable names.
pub fn format_poly(p: &Poly<Q>, names: &[&str]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (e, c) in p.terms.iter().rev() {
        let mut mon = Vec::new();
        for (i, k) in e.iter().enumerate() {
            match k {
                0 => {}
                1 => mon.push(names[i].to_string()),
                _ => mon.push(format!("{}^{}", names[i], k)),
            }
        }
        let coef = if c.is_integer() { c.numer().to_string() } else { fmt_q(c) };
        if mon.is_empty() {
            parts.push(coef);
        } else {
            parts.push(format!("{}*{}", coef, mon.join("*")));
        }
    }
    parts.join(" + ")
}

/// Coefficient table `{"a,b,...": "num/den"}` for JSON output.
pub fn coeff_table(p: &Poly<Q>) -> BTreeMap<String, String> {
    p.terms.iter().map(|(e, c)| (e.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","), fmt_q(c))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn arithmetic_and_eval() {
        let x = Poly::<Q>::var(2, 0);
        let y = Poly::<Q>::var(2, 1);
        let p = x.add(&y).pow(2);
        assert_eq!(p.eval(&[qi(1), qi(2)]), qi(9));
        assert_eq!(p.degree(), Some(2));
        assert!(p.scale(&q(-3, 2)).proportional(&p));
    }

    #[test]
    fn gcd_and_roots() {
        // (x-1)(x+1/2) and (x-1)(x-3)
        let a = vec![q(-1, 2), q(-1, 2), qi(1)];
        let b = vec![qi(3), qi(-4), qi(1)];
        assert_eq!(gcd(&a, &b), vec![qi(-1), qi(1)]);
        assert_eq!(rational_roots(&a), vec![(q(-1, 2), 1), (qi(1), 1)]);
        assert_eq!(rational_roots(&[qi(0), qi(0), qi(1)]), vec![(qi(0), 2)]);
    }

    #[test]
    fn small_ratio_field() {
        use num_rational::Ratio;
        let x = Poly::<Ratio<i64>>::var(1, 0);
        let p = x.mul(&x).sub(&Poly::constant(1, Ratio::from_integer(4)));
        assert_eq!(p.eval(&[Ratio::from_integer(2)]), Ratio::from_integer(0));
    }
}
