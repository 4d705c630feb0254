use n2zhu::known;
use n2zhu::pbw::{element, vec_axpy, Pbw, Vector};
use n2zhu::poly::coeff_table;
use n2zhu::reps::Module;
use n2zhu::scalar::{fmt_q, q, Q};
use n2zhu::superalg::{bracket_with, check_super_jacobi, spectral_flow, spectral_flow_elem, LieElem};
use n2zhu::zhu::*;
use n2zhu::{Algebra, Mode, Params};
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::collections::BTreeMap;
use std::sync::OnceLock;

fn params(p: i64, pp: i64) -> Params {
    Params::new(p, pp).unwrap()
}

#[test]
fn super_jacobi_window_4() {
    let algs = [
        Algebra::ns2(&params(4, 1)),
        Algebra::ns2(&params(3, 2)),
        Algebra::ns2(&params(2, 3)),
        Algebra::affine(&params(3, 1)),
        Algebra::affine(&params(3, 2)),
        Algebra::gl11(),
    ];
    for alg in &algs {
        let bad = check_super_jacobi(alg, 4);
        assert!(bad.is_empty(), "{:?}: {:?}", alg.id, &bad[..bad.len().min(5)]);
    }
}

fn lie_bracket(alg: &Algebra, x: &LieElem, y: &LieElem) -> LieElem {
    let br = |a: &Mode, b: &Mode| alg.bracket(a, b);
    let mut out = LieElem::zero();
    for (m, c) in &x.terms {
        out.add_scaled(&bracket_with(&br, m, y), c);
    }
    out.canonical()
}

fn ns2_modes() -> &'static (Algebra, Vec<Mode>) {
    static M: OnceLock<(Algebra, Vec<Mode>)> = OnceLock::new();
    M.get_or_init(|| {
        let alg = Algebra::ns2(&params(3, 2));
        let modes = alg.modes_in_window(3);
        (alg, modes)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn flow_is_an_automorphism(i in 0usize..1000, j in 0usize..1000, theta2 in -4i64..=4) {
        let (alg, modes) = ns2_modes();
        let x = modes[i % modes.len()];
        let y = modes[j % modes.len()];
        let lhs = spectral_flow_elem(alg, theta2, &alg.bracket(&x, &y));
        let rhs = lie_bracket(alg, &spectral_flow(alg, theta2, &x), &spectral_flow(alg, theta2, &y));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn flow_composes(i in 0usize..1000, t1 in -4i64..=4, t2 in -4i64..=4) {
        let (alg, modes) = ns2_modes();
        let x = modes[i % modes.len()];
        let twice = spectral_flow_elem(alg, t1, &spectral_flow(alg, t2, &x));
        prop_assert_eq!(twice, spectral_flow(alg, t1 + t2, &x));
    }

    #[test]
    fn flow_zero_is_identity(i in 0usize..1000) {
        let (alg, modes) = ns2_modes();
        let x = modes[i % modes.len()];
        prop_assert_eq!(spectral_flow(alg, 0, &x), LieElem::mode(x));
    }
}

struct ActCase {
    module: Module,
    /// Largest doubled level a sampled product may reach.
    cap: i64,
    pbw: Pbw,
    modes: Vec<Mode>,
    vectors: Vec<Vector>,
}

fn act_case(module: Module, cap: i64) -> ActCase {
    let pbw = Pbw::new(module.algebra().clone());
    let modes = module.algebra().modes_in_window(2);
    let mut vectors = Vec::new();
    for w in module.weights(2, Some((-2, 2))) {
        for k in &module.space(&w).keys {
            vectors.push([(k.clone(), Q::one())].into_iter().collect());
        }
    }
    ActCase { module, cap, pbw, modes, vectors }
}

fn act_cases() -> &'static Vec<ActCase> {
    static C: OnceLock<Vec<ActCase>> = OnceLock::new();
    C.get_or_init(|| {
        let p = params(3, 2);
        vec![
            act_case(Module::verma_ns2(&p.c(), &q(1, 3), &q(2, 3)), 10),
            act_case(Module::chiral_ns2(&p.c(), &q(-1, 3)), 10),
            act_case(Module::vacuum_ns2(&p.c()), 10),
            act_case(Module::gen_verma_affine(&p, 1).unwrap(), 6),
            act_case(Module::relaxed_affine(&p.k(), &q(1, 5), &q(1, 7)).unwrap(), 10),
            act_case(Module::gl11_verma(&q(2, 3), &q(1, 2)), 10),
        ]
    })
}

fn word(c: &ActCase, idx: &[usize]) -> Vec<Mode> {
    idx.iter().map(|i| c.modes[i % c.modes.len()]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn act_is_a_homomorphism(
        which in 0usize..6,
        a in prop::collection::vec(0usize..1000, 1..=2),
        b in prop::collection::vec(0usize..1000, 1..=2),
        v in 0usize..1000,
    ) {
        let c = &act_cases()[which];
        let v = &c.vectors[v % c.vectors.len()];
        let (wa, wb) = (word(c, &a), word(c, &b));
        let top = c.module.vector_weight(v).unwrap().0 + wa.iter().chain(&wb).map(|m| m.level2().max(0)).sum::<i64>();
        prop_assume!(top <= c.cap);
        let e1 = element(&c.pbw, &[(Q::one(), wa)]);
        let e2 = element(&c.pbw, &[(Q::one(), wb)]);
        let prod = c.pbw.multiply(&e1, &e2).unwrap();
        let lhs = c.module.act(&prod, v);
        let rhs = c.module.act(&e1, &c.module.act(&e2, v));
        prop_assert_eq!(lhs, rhs);
    }
}

fn sigma_context() -> &'static ZhuContext {
    static C: OnceLock<ZhuContext> = OnceLock::new();
    C.get_or_init(|| {
        ZhuContext::build(Twist::Sigma, &params(4, 1).c(), Target::Vacuum, 4, &SpanOptions::default()).unwrap()
    })
}

fn basis_vector(cx: &ZhuContext, i: usize, max_l2: i64) -> Vector {
    let keys: Vec<_> = cx.basis_keys().into_iter().filter(|k| k.0.level2() <= max_l2).collect();
    [(keys[i % keys.len()].clone(), Q::one())].into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn star_is_associative_mod_o(i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let cx = sigma_context();
        // total weight stays within the context
        let a = basis_vector(cx, i, 2);
        let b = basis_vector(cx, j, 1);
        let d = basis_vector(cx, k, 1);
        let ab = cx.star(&a, &b, Side::Left).unwrap();
        let mut lhs = Vector::new();
        for part in homogeneous_parts(&ab) {
            vec_axpy(&mut lhs, &Q::one(), &cx.star(&part, &d, Side::Left).unwrap());
        }
        let rhs = cx.star(&a, &cx.star(&b, &d, Side::Left).unwrap(), Side::Left).unwrap();
        vec_axpy(&mut lhs, &-Q::one(), &rhs);
        lhs.retain(|_, c| !c.is_zero());
        prop_assert!(cx.contains(&lhs).unwrap());
    }
}

fn vector_json(v: &Vector) -> BTreeMap<String, String> {
    v.iter().map(|(k, c)| (format!("{}|{}", k.0, k.1), fmt_q(c))).collect()
}

/// Singular vectors, characters and Zhu data under one enumeration order.
fn report(reverse: bool) -> String {
    let p41 = params(4, 1);
    let p31 = params(3, 1);
    let mut vac = Module::vacuum_ns2(&p41.c());
    vac.reverse_enumeration = reverse;
    let mut aff = Module::gen_verma_affine(&p31, 1).unwrap();
    aff.reverse_enumeration = reverse;
    let sing_vac: Vec<_> = vac.find_singular_rel(&(6, 0)).iter().map(vector_json).collect();
    let sing_aff: Vec<_> = aff.find_singular_rel(&(4, 4)).iter().map(vector_json).collect();
    let ch_vac = vac.character(6, None).to_csv();
    let ch_aff = aff.character(4, Some((-6, 6))).to_csv();
    let opts = SpanOptions { reverse_enumeration: reverse, ..SpanOptions::default() };
    let cx = ZhuContext::build(Twist::Sigma, &p41.c(), Target::Vacuum, 6, &opts).unwrap();
    let n = words_vector(&cx.module, &known::vacuum_singular(4, 1).unwrap());
    let coset = cx.zhu_reduce(&n).unwrap();
    let phi = cx.coset_to_gl11(&coset).unwrap();
    serde_json::json!({
        "singular_vac": sing_vac,
        "singular_aff": sing_aff,
        "char_vac": ch_vac,
        "char_aff": ch_aff,
        "zhu_rep": vector_json(&coset.rep),
        "phi": [coeff_table(&phi.p1), coeff_table(&phi.p2)],
        "certificate": cx.certificate,
    })
    .to_string()
}

#[test]
fn results_do_not_depend_on_enumeration_order() {
    let a = report(false);
    let b = report(true);
    assert!(a.contains("\"singular_vac\":[{"));
    assert_eq!(a, b);
}
