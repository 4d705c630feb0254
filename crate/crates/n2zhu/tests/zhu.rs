use n2zhu::known;
use n2zhu::pbw::ns2::{gm, gp, j as jm};
use n2zhu::pbw::{vec_axpy, Key, Monomial, Vector};
use n2zhu::poly::Poly;
use n2zhu::reps::Module;
use n2zhu::scalar::{q, qi, Q};
use n2zhu::superalg::{Algebra, Family, Mode};
use n2zhu::zhu::*;
use n2zhu::Params;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx(twist: Twist, c: &Q, target: Target, l2: i64) -> ZhuContext {
    ZhuContext::build(twist, c, target, l2, &SpanOptions::default()).unwrap()
}

fn single(k: &Key) -> Vector {
    [(k.clone(), Q::one())].into_iter().collect()
}

fn sub(a: &Vector, b: &Vector) -> Vector {
    let mut r = a.clone();
    vec_axpy(&mut r, &-Q::one(), b);
    r.retain(|_, c| !c.is_zero());
    r
}

/// Left star of an arbitrary (inhomogeneous) field.
fn star_any(c: &ZhuContext, a: &Vector, v: &Vector, side: Side) -> Vector {
    let mut out = Vector::new();
    for part in homogeneous_parts(a) {
        vec_axpy(&mut out, &Q::one(), &c.star(&part, v, side).unwrap());
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn sigma_phi(p: i64, pp: i64) {
    let params = Params::new(p, pp).unwrap();
    let cx = ctx(Twist::Sigma, &params.c(), Target::Vacuum, 2 * (p - 1) * pp);
    let v = words_vector(&cx.module, &known::vacuum_singular(p, pp).unwrap());
    let coset = cx.zhu_reduce(&v).unwrap();
    assert!(!coset.is_zero());
    let phi = cx.coset_to_gl11(&coset).unwrap();
    assert!(phi.proportional(&known::phi(p, pp).unwrap()), "{phi:?}");
}

#[test]
fn phi_4_1() {
    sigma_phi(4, 1);
}

#[test]
fn phi_2_3() {
    sigma_phi(2, 3);
}

#[test]
fn phi_3_2() {
    sigma_phi(3, 2);
}

#[test]
fn field_mode_generators() {
    let c = q(3, 2);
    let vac = Module::vacuum_ns2(&c);
    let one = vacuum_unit();
    assert!(field_mode_apply(&vac, &gen_state(Family::Gp), 0, &one).unwrap().is_empty());
    let jj = gen_state(Family::J);
    assert_eq!(field_mode_apply(&vac, &gen_state(Family::L), 1, &jj).unwrap(), jj);
    // the unit field acts as the identity through its (-1) mode
    let l = gen_state(Family::L);
    assert_eq!(field_mode_apply(&vac, &one, -1, &l).unwrap(), l);
    assert!(field_mode_apply(&vac, &one, 0, &l).unwrap().is_empty());
}

#[test]
fn composite_mode_matches_normal_ordered_expansion() {
    // (J_(-1) J)_(n) = sum_{k<=-1} J_k J_{m-k} + sum_{k>=0} J_{m-k} J_k, m = n - 1
    let (c, h, j) = (q(-1, 1), q(1, 3), q(2, 3));
    let md = Module::verma_ns2(&c, &h, &j);
    let jj: Vector = [((Monomial::from_modes(&[jm(-1), jm(-1)]).unwrap(), 0), Q::one())].into_iter().collect();
    let mut keys = Vec::new();
    for l2 in 0..=6 {
        for ch in md.charges_at(l2, None) {
            keys.extend(md.space(&(l2, ch)).keys.iter().cloned());
        }
    }
    for k in keys.iter().step_by(7) {
        let v = single(k);
        for n in -2..=3i64 {
            let got = field_mode_apply(&md, &jj, n, &v).unwrap();
            let m = n - 1;
            let mut want = Vector::new();
            for kk in -12..=12i64 {
                let w =
                    if kk <= -1 { [jm(kk as i32), jm((m - kk) as i32)] } else { [jm((m - kk) as i32), jm(kk as i32)] };
                vec_axpy(&mut want, &Q::one(), &md.engine.apply_word(&w, &v));
            }
            want.retain(|_, c| !c.is_zero());
            let mut got = got;
            got.retain(|_, c| !c.is_zero());
            assert_eq!(got, want, "key {} n {n}", k.0);
        }
    }
}

#[test]
fn unit_circle_unit_vanishes() {
    let vac = Module::vacuum_ns2(&q(3, 2));
    let one = vacuum_unit();
    assert!(zhu_circle(Twist::Id, &vac, &one, &one).unwrap().is_empty());
    assert!(zhu_circle(Twist::Sigma, &vac, &one, &one).unwrap().is_empty());
}

#[test]
fn non_homogeneous_field_is_rejected() {
    let vac = Module::vacuum_ns2(&q(3, 2));
    let mut a = gen_state(Family::L);
    vec_axpy(&mut a, &Q::one(), &gen_state(Family::J));
    assert_eq!(zhu_star(Twist::Sigma, &vac, &a, &vacuum_unit(), Side::Left), Err(ZhuError::NotHomogeneous));
}

#[test]
fn weight_zero_quotient_is_the_unit() {
    for tw in [Twist::Id, Twist::Sigma] {
        let cx = ctx(tw, &q(3, 2), Target::Vacuum, 0);
        assert_eq!(cx.certificate.graded[0].codim, 1);
        assert!(!cx.zhu_reduce(&vacuum_unit()).unwrap().is_zero());
    }
}

#[test]
fn graded_dimensions_match_enveloping_algebras() {
    for c in [q(3, 2), q(-1, 1), q(-7, 2)] {
        let s = ctx(Twist::Sigma, &c, Target::Vacuum, 6);
        let want = [1, 1, 2, 4, 6, 8, 11];
        let got: Vec<usize> = s.certificate.graded.iter().map(|g| g.codim).collect();
        assert_eq!(got, want);
        let i = ctx(Twist::Id, &c, Target::Vacuum, 8);
        let got: Vec<usize> = i.certificate.graded.iter().map(|g| g.codim).collect();
        assert_eq!(got, vec![1, 1, 2, 2, 4, 4, 6, 6, 9]);
    }
}

#[test]
fn all_fields_span_agrees_with_generator_span() {
    let c = q(-1, 1);
    let opts = SpanOptions { generators: SpanGenerators::AllFields, ..SpanOptions::default() };
    for tw in [Twist::Id, Twist::Sigma] {
        let full = ZhuContext::build(tw, &c, Target::Vacuum, 4, &opts).unwrap();
        let gens = ctx(tw, &c, Target::Vacuum, 4);
        assert_eq!(full.o_dim(), gens.o_dim());
        for k in full.basis_keys() {
            assert_eq!(full.zhu_reduce(&single(&k)).unwrap(), gens.zhu_reduce(&single(&k)).unwrap());
        }
    }
}

#[test]
fn circle_products_reduce_to_zero() {
    let cx = ctx(Twist::Sigma, &q(3, 2), Target::Vacuum, 6);
    for f in GENERATORS {
        for k in cx.basis_keys() {
            let v = cx.circle(&gen_state(f), &single(&k)).unwrap();
            if v.keys().all(|k| k.0.level2() <= 6) {
                assert!(cx.contains(&v).unwrap());
            }
        }
    }
    assert!(cx.zhu_reduce(&single(&(Monomial::single(gm(-3)), 0))).is_ok());
}

#[test]
fn id_basis_cosets_commute() {
    let c = q(-1, 1);
    let cx = ctx(Twist::Id, &c, Target::Vacuum, 8);
    let keys = cx.basis_keys();
    for a in &keys {
        for b in &keys {
            if a.0.level2() + b.0.level2() > 8 || a > b {
                continue;
            }
            let ab = star_any(&cx, &single(a), &single(b), Side::Left);
            let ba = star_any(&cx, &single(b), &single(a), Side::Left);
            assert_eq!(cx.zhu_reduce(&ab).unwrap(), cx.zhu_reduce(&ba).unwrap(), "{} {}", a.0, b.0);
        }
    }
}

fn i_sigma(f: Family, c: &Q) -> Vector {
    match f {
        Family::Z => {
            let mut v = gen_state(Family::L);
            vec_axpy(&mut v, &(-c / qi(24)), &vacuum_unit());
            v
        }
        Family::Y => gen_state(Family::J),
        Family::Pp => gen_state(Family::Gp),
        _ => gen_state(Family::Gm),
    }
}

#[test]
fn sigma_supercommutators_match_gl11() {
    let c = q(-1, 1);
    let cx = ctx(Twist::Sigma, &c, Target::Vacuum, 8);
    let gl = Algebra::gl11();
    let fams = [Family::Z, Family::Y, Family::Pm, Family::Pp];
    let mut pairs = 0;
    for (i, x) in fams.iter().enumerate() {
        for y in &fams[i..] {
            let (a, b) = (i_sigma(*x, &c), i_sigma(*y, &c));
            let s = if x.odd() && y.odd() { -Q::one() } else { Q::one() };
            let ab = star_any(&cx, &a, &b, Side::Left);
            let ba = star_any(&cx, &b, &a, Side::Left);
            let mut comm = ab;
            vec_axpy(&mut comm, &-s, &ba);
            let br = gl.bracket(&Mode::new(*x, 0), &Mode::new(*y, 0));
            let mut want = Vector::new();
            vec_axpy(&mut want, &br.scalar, &vacuum_unit());
            for (m, k) in &br.terms {
                vec_axpy(&mut want, k, &i_sigma(m.fam, &c));
            }
            assert_eq!(cx.zhu_reduce(&comm).unwrap(), cx.zhu_reduce(&want).unwrap(), "{x:?} {y:?}");
            pairs += 1;
        }
    }
    assert_eq!(pairs, 10);
}

fn random_vector(rng: &mut ChaCha8Rng, keys: &[Key]) -> Vector {
    let mut v = Vector::new();
    for _ in 0..3 {
        let k = &keys[rng.gen_range(0..keys.len())];
        vec_axpy(&mut v, &qi(rng.gen_range(-5..=5)), &single(k));
    }
    v.retain(|_, c| !c.is_zero());
    v
}

fn homogeneous_keys(cx: &ZhuContext, max: i64) -> Vec<Vector> {
    let mut out = Vec::new();
    for k in cx.basis_keys() {
        if k.0.level2() <= max {
            out.push(single(&k));
        }
    }
    out
}

#[test]
fn star_is_associative_modulo_o() {
    let c = q(3, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for tw in [Twist::Id, Twist::Sigma] {
        let cx = ctx(tw, &c, Target::Vacuum, 6);
        let fields = homogeneous_keys(&cx, 4);
        let mut n = 0;
        while n < 25 {
            let a = &fields[rng.gen_range(0..fields.len())];
            let b = &fields[rng.gen_range(0..fields.len())];
            let v = &fields[rng.gen_range(0..fields.len())];
            let w = |x: &Vector| x.keys().next().unwrap().0.level2();
            if w(a) + w(b) + w(v) > 6 {
                continue;
            }
            let lhs = star_any(&cx, &star_any(&cx, a, b, Side::Left), v, Side::Left);
            let rhs = star_any(&cx, a, &star_any(&cx, b, v, Side::Left), Side::Left);
            assert!(cx.contains(&sub(&lhs, &rhs)).unwrap(), "{tw}");
            n += 1;
        }
    }
}

#[test]
fn star_is_well_defined_on_cosets() {
    let c = q(-1, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for tw in [Twist::Id, Twist::Sigma] {
        let cx = ctx(tw, &c, Target::Vacuum, 6);
        let keys: Vec<Key> = cx.basis_keys().into_iter().filter(|k| k.0.level2() <= 1).collect();
        for _ in 0..15 {
            let v = random_vector(&mut rng, &keys);
            let f = GENERATORS[rng.gen_range(0..4)];
            let o = cx.circle(&gen_state(f), &v).unwrap();
            if o.keys().any(|k| k.0.level2() > 2) {
                continue;
            }
            for g in GENERATORS {
                let x = star_any(&cx, &gen_state(g), &o, Side::Left);
                assert!(cx.contains(&x).unwrap());
                let y = star_any(&cx, &gen_state(g), &o, Side::Right);
                assert!(cx.contains(&y).unwrap());
            }
        }
    }
}

#[test]
fn gl11_action_examples() {
    let phi = known::phi_4_1();
    assert!(gl11_action(&phi, &q(1, 4), &q(1, 2)).zero_on_simple);
    assert!(!gl11_action(&phi, &qi(1), &qi(1)).zero_on_simple);
}

fn on_p02(params: &Params, z: &Q, j: &Q) -> bool {
    let a = params.a();
    params.i_bpz().into_iter().any(|(r, s)| {
        let k = &a * qi(r) - qi(s);
        let mu = j - q(1, 2);
        *z == (&k * &k - &mu * &mu) / (qi(4) * &a)
    })
}

#[test]
fn classification_locus() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (p, pp) in [(4, 1), (2, 3), (3, 2)] {
        let params = Params::new(p, pp).unwrap();
        let phi = known::phi(p, pp).unwrap();
        let pts = p01_points(&params);
        assert!(!pts.is_empty());
        for (_, (z, j)) in &pts {
            assert!(gl11_action(&phi, z, j).zero_on_simple, "({p},{pp}) at ({z},{j})");
        }
        for (_, z, j) in p02_families(&params) {
            let (e, o) = gl11_action_symbolic(&phi, &z, &j);
            assert!(e.is_zero() && o.is_zero());
        }
        let mut n = 0;
        while n < 20 {
            let z = q(rng.gen_range(-40..=40), rng.gen_range(1..=9));
            let j = q(rng.gen_range(-40..=40), rng.gen_range(1..=9));
            if pts.iter().any(|(_, pt)| pt == &(z.clone(), j.clone())) || on_p02(&params, &z, &j) {
                continue;
            }
            assert!(!gl11_action(&phi, &z, &j).zero_on_simple, "({p},{pp}) at ({z},{j})");
            n += 1;
        }
    }
}

#[test]
fn nonsplit_verma_is_killed_when_pp_is_not_one() {
    // M_{0,j} with both L_{0,j} and L_{0,j-1} on the locus
    for (p, pp) in [(2, 3), (3, 2)] {
        let params = Params::new(p, pp).unwrap();
        let phi = known::phi(p, pp).unwrap();
        let a = params.a();
        for (r, s) in params.i_kw() {
            if s != 0 {
                continue;
            }
            let j = &a * qi(-r) + q(3, 2);
            let act = gl11_action(&phi, &Q::zero(), &j);
            assert!(act.zero_on_verma && act.simple_dim == 1, "({p},{pp}) r={r}");
        }
    }
    // for p' = 1 no such Verma module is killed
    let params = Params::new(4, 1).unwrap();
    let phi = known::phi(4, 1).unwrap();
    for (_, (z, j)) in p01_points(&params) {
        if z.is_zero() {
            assert!(!gl11_action(&phi, &z, &(j + qi(1))).zero_on_verma);
        }
    }
}

struct Fz {
    params: Params,
    fc: Poly<Q>,
    gc: Poly<Q>,
    bim: ZhuContext,
}

fn fz_setup() -> Fz {
    let params = Params::new(3, 2).unwrap();
    let c = params.c();
    let id = ctx(Twist::Id, &c, Target::Vacuum, 10);
    let n = words_vector(&id.module, &known::n_3_2());
    let fc = id.coset_to_poly(&id.zhu_reduce(&n).unwrap()).unwrap();
    let n2 = id.module.engine.apply_word(&[gp(-1), gm(-1)], &n);
    let gc = id.coset_to_poly(&id.zhu_reduce(&n2).unwrap()).unwrap();
    let bim = ctx(Twist::Id, &c, Target::Chiral(q(2, 3)), 6);
    Fz { params, fc, gc, bim }
}

#[test]
fn id_kernel_polynomials_vanish_on_the_classification() {
    let fz = fz_setup();
    assert_eq!(fz.fc.degree(), Some(4));
    let names = NsClassification::new(&fz.params);
    assert_eq!(names.discrete.len(), 3);
    for (_, h, qq) in &names.discrete {
        assert!(fz.fc.eval(&[h.clone(), qq.clone()]).is_zero());
        assert!(fz.gc.eval(&[h.clone(), qq.clone()]).is_zero());
    }
    let qv = Poly::var(1, 0);
    for hq in &names.families {
        assert!(fz.fc.compose(&[hq.clone(), qv.clone()], 1).is_zero());
        assert!(fz.gc.compose(&[hq.clone(), qv.clone()], 1).is_zero());
    }
}

#[test]
fn fz_reduce_basics() {
    let fz = fz_setup();
    let m = &fz.bim.module;
    assert_eq!(fz.bim.fz_reduce(&m.cyclic_vector()).unwrap(), FZElement::one());
    let psi = m.engine.apply_mode(&gm(-1), &m.cyclic_vector());
    assert_eq!(fz.bim.fz_reduce(&psi).unwrap(), FZElement::psi());
    let one = FZElement::one();
    let xy = Poly::var(3, 0).mul(&Poly::var(3, 2));
    assert_eq!(one.left_h().right_q().even, xy);
    assert_eq!(one.right_q().left_h().even, xy);
}

#[test]
fn fz_reduce_matches_star_actions() {
    let fz = fz_setup();
    let cx = &fz.bim;
    let j = q(2, 3);
    let keys: Vec<Key> = cx.basis_keys().into_iter().filter(|k| k.0.level2() <= 2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (l, jf) = (gen_state(Family::L), gen_state(Family::J));
    for _ in 0..30 {
        let v = random_vector(&mut rng, &keys);
        let e = cx.fz_reduce(&v).unwrap();
        assert_eq!(cx.fz_reduce(&cx.star(&l, &v, Side::Left).unwrap()).unwrap(), e.left_h());
        assert_eq!(cx.fz_reduce(&cx.star(&jf, &v, Side::Left).unwrap()).unwrap(), e.left_q(&j));
        assert_eq!(cx.fz_reduce(&cx.star(&l, &v, Side::Right).unwrap()).unwrap(), e.right_h());
        assert_eq!(cx.fz_reduce(&cx.star(&jf, &v, Side::Right).unwrap()).unwrap(), e.right_q());
    }
}

#[test]
fn fz_kernel_generators() {
    let fz = fz_setup();
    let m = &fz.bim.module;
    let w1 = words_vector(m, &known::w1());
    let w2 = words_vector(m, &known::w2());
    assert_eq!(m.find_singular_rel(&(4, 0)).len(), 1);
    let sing = &m.find_singular_rel(&(4, 0))[0];
    let coeff = w2.values().next().unwrap() / sing.get(w2.keys().next().unwrap()).unwrap();
    assert_eq!(&scale(sing, &coeff), &w2);
    let e = &m.engine;
    let (fk, gk) = known::fz_kernel();
    let fs = [e.apply_word(&[gp(-1), gp(1)], &w1), w2.clone(), e.apply_word(&[gp(-1), gm(-1)], &w2)];
    let gs = [e.apply_word(&[gp(1)], &w1), e.apply_word(&[gp(-1)], &w1), e.apply_word(&[gm(-1)], &w2)];
    for (v, f) in fs.iter().zip(&fk) {
        let r = fz.bim.fz_reduce(v).unwrap();
        assert!(r.odd.is_zero() && r.even.proportional(f));
    }
    for (v, g) in gs.iter().zip(&gk) {
        let r = fz.bim.fz_reduce(v).unwrap();
        assert!(r.even.is_zero() && r.odd.proportional(g));
    }
}

fn scale(v: &Vector, s: &Q) -> Vector {
    v.iter().map(|(k, c)| (k.clone(), c * s)).collect()
}

#[test]
fn fusion_rules() {
    let fz = fz_setup();
    let names = NsClassification::new(&fz.params);
    let (fk, gk) = known::fz_kernel();
    let ideal = [fz.fc.clone(), fz.gc.clone()];
    let j = q(2, 3);
    let run = |rm: RightModule| fz_kernel_and_fusion(&fk, &gk, &ideal, &j, &rm, &names).unwrap();
    assert_eq!(run(names.eps(-1, false).unwrap()).labels(), ["C(0)"]);
    assert_eq!(run(names.eps(0, false).unwrap()).labels(), ["C(1)"]);
    assert_eq!(run(names.eps(1, false).unwrap()).labels(), ["Pi C_1/3"]);
    let r0 = run(names.c_j(&qi(0), false).unwrap());
    assert_eq!((r0.dimension, r0.labels()), (1, vec!["C_2/3".to_string()]));
    assert_eq!(r0.summands[0].xl, q(-7, 24));
    assert!(!r0.summands[0].odd);
    assert_eq!(run(names.c_j(&q(1, 2), false).unwrap()).labels(), ["C_7/6"]);
    let r = run(names.c_j(&q(-1, 3), false).unwrap());
    assert_eq!(r.dimension, 2);
    assert_eq!(r.labels(), ["C_1/3", "Pi C(-1)"]);
    let bad = RightModule { label: "x".into(), h: qi(5), q: qi(0), odd: false };
    assert!(matches!(fz_kernel_and_fusion(&fk, &gk, &ideal, &j, &bad, &names), Err(ZhuError::NotAModule(..))));
}
