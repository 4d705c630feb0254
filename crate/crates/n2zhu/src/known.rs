//! Published reference data: explicit singular vectors, their images in the
//! twisted Zhu algebra, and the Frenkel-Zhu kernel generators at c = -1.
//!
//! Vectors are lists of `(coefficient, word)` applied to a cyclic vector;
//! words are read left to right as operator products.

use crate::pbw::ns2::{gm, gp, j, l};
use crate::poly::Poly;
use crate::scalar::{q, qi, Q};
use crate::superalg::Mode;

pub type Words = Vec<(Q, Vec<Mode>)>;

/// Singular vector of the vacuum module at weight `(3, 0)` for `(p, p') = (4, 1)`.
pub fn n_4_1() -> Words {
    vec![
        (qi(10), vec![j(-3)]),
        (qi(-3), vec![l(-3)]),
        (qi(3), vec![gp(-3), gm(-3)]),
        (qi(-12), vec![l(-2), j(-1)]),
        (qi(8), vec![j(-1), j(-1), j(-1)]),
    ]
}

/// Singular vector at `(3, 0)` for `(p, p') = (2, 3)`.
pub fn n_2_3() -> Words {
    vec![
        (qi(-10), vec![j(-3)]),
        (qi(-6), vec![l(-3)]),
        (qi(6), vec![gp(-3), gm(-3)]),
        (qi(6), vec![l(-2), j(-1)]),
        (qi(1), vec![j(-1), j(-1), j(-1)]),
    ]
}

/// Singular vector at `(4, 0)` for `(p, p') = (3, 2)`.
pub fn n_3_2() -> Words {
    vec![
        (qi(42), vec![j(-4)]),
        (qi(24), vec![l(-4)]),
        (qi(27), vec![j(-2), j(-2)]),
        (qi(-84), vec![j(-3), j(-1)]),
        (qi(-6), vec![gp(-3), gm(-5)]),
        (qi(6), vec![gp(-5), gm(-3)]),
        (qi(-32), vec![l(-2), l(-2)]),
        (qi(-36), vec![l(-3), j(-1)]),
        (qi(36), vec![j(-1), gp(-3), gm(-3)]),
        (qi(12), vec![l(-2), j(-1), j(-1)]),
        (qi(9), vec![j(-1), j(-1), j(-1), j(-1)]),
    ]
}

/// The reference vector for `(p, p')`, if tabulated.
pub fn vacuum_singular(p: i64, pp: i64) -> Option<Words> {
    match (p, pp) {
        (4, 1) => Some(n_4_1()),
        (2, 3) => Some(n_2_3()),
        (3, 2) => Some(n_3_2()),
        _ => None,
    }
}

pub use crate::zhu::Gl11Element as Gl11Poly;

fn zj() -> (Poly<Q>, Poly<Q>) {
    (Poly::var(2, 0), Poly::var(2, 1))
}

fn c(x: Q) -> Poly<Q> {
    Poly::constant(2, x)
}

/// `(4J-1)(J(4J+1)-6Z) - 6 Psi- Psi+`.
pub fn phi_4_1() -> Gl11Poly {
    let (z, jv) = zj();
    let a = jv.scale(&qi(4)).sub(&c(qi(1)));
    let b = jv.mul(&jv.scale(&qi(4)).add(&c(qi(1)))).sub(&z.scale(&qi(6)));
    Gl11Poly { p1: a.mul(&b), p2: c(qi(-6)) }
}

/// `(J+1)(J(J-1)+6Z) - 6 Psi- Psi+`.
pub fn phi_2_3() -> Gl11Poly {
    let (z, jv) = zj();
    let a = jv.add(&c(qi(1)));
    let b = jv.mul(&jv.sub(&c(qi(1)))).add(&z.scale(&qi(6)));
    Gl11Poly { p1: a.mul(&b), p2: c(qi(-6)) }
}

/// `((6J+1)(6J+5)-48Z)((6J-1)(6J-5)+96Z) - 72^2 J Psi- Psi+`.
pub fn phi_3_2() -> Gl11Poly {
    let (z, jv) = zj();
    let j6 = jv.scale(&qi(6));
    let a = j6.add(&c(qi(1))).mul(&j6.add(&c(qi(5)))).sub(&z.scale(&qi(48)));
    let b = j6.sub(&c(qi(1))).mul(&j6.sub(&c(qi(5)))).add(&z.scale(&qi(96)));
    Gl11Poly { p1: a.mul(&b), p2: jv.scale(&qi(-72 * 72)) }
}

pub fn phi(p: i64, pp: i64) -> Option<Gl11Poly> {
    match (p, pp) {
        (4, 1) => Some(phi_4_1()),
        (2, 3) => Some(phi_2_3()),
        (3, 2) => Some(phi_3_2()),
        _ => None,
    }
}

/// `w1 = G-_{-3/2} G-_{-1/2}` on the top of the chiral Verma module of
/// charge 2/3 at c = -1.
pub fn w1() -> Words {
    vec![(qi(1), vec![gm(-3), gm(-1)])]
}

/// `w2 = (4J_{-2} - 3G+_{-3/2}G-_{-1/2} - 2L_{-1}J_{-1} - 2J_{-1}^2 + 4L_{-1}^2)`
/// on the same top.
pub fn w2() -> Words {
    vec![
        (qi(4), vec![j(-2)]),
        (qi(-3), vec![gp(-3), gm(-1)]),
        (qi(-2), vec![l(-1), j(-1)]),
        (qi(-2), vec![j(-1), j(-1)]),
        (qi(4), vec![l(-1), l(-1)]),
    ]
}

/// Kernel generators in variables `(x_l, x_r, y)`: even `f1..f3`, odd
/// coefficients `g1..g3` of `psi`.
pub fn fz_kernel() -> (Vec<Poly<Q>>, Vec<Poly<Q>>) {
    let xl = Poly::<Q>::var(3, 0);
    let xr = Poly::<Q>::var(3, 1);
    let y = Poly::<Q>::var(3, 2);
    let k = |x: Q| Poly::constant(3, x);
    let p = xl.sub(&xr);
    let qq = xl.add(&xr).add(&k(q(1, 3)));
    let r = y.add(&k(q(1, 3)));
    let f1 = p.scale(&qi(3)).mul(&p.add(&r)).sub(&qq);
    let f2 = p.scale(&qi(2)).add(&r).mul(&p.sub(&r));
    let f3 = p
        .scale(&qi(2))
        .add(&r)
        .mul(&p.scale(&qi(3)).sub(&k(qi(4))).mul(&p.sub(&r)).sub(&qq.scale(&qi(3))).add(&k(qi(2))));
    let g1 = p.scale(&qi(2)).add(&r.scale(&qi(2))).sub(&k(qi(1)));
    let g2 = qq.sub(&p).sub(&r);
    let g3 = p
        .mul(&p)
        .scale(&qi(4))
        .add(&k(qi(1)).sub(&r.scale(&qi(2))).mul(&p))
        .sub(&r.mul(&r).scale(&qi(2)))
        .add(&r.scale(&qi(2)))
        .sub(&qq.scale(&qi(3)));
    (vec![f1, f2, f3], vec![g1, g2, g3])
}
