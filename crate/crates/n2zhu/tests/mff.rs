use n2zhu::pbw::aff::{e, f, h};
use n2zhu::pbw::Vector;
use n2zhu::reps::{mff_vector, Module};
use n2zhu::scalar::{q, qi, Q};
use n2zhu::Params;
use num_traits::Zero;

fn scaled(v: &Vector, s: &Q) -> Vector {
    v.iter().map(|(k, c)| (k.clone(), c * s)).filter(|(_, c)| !c.is_zero()).collect()
}

fn apply(m: &Module, word: &[n2zhu::Mode], v: &Vector) -> Vector {
    let pbw = n2zhu::pbw::Pbw::new(m.algebra().clone());
    m.act(&n2zhu::pbw::element(&pbw, &[(qi(1), word.to_vec())]), v)
}

#[test]
fn mff_vectors_are_singular() {
    for p in 2..=4 {
        let params = Params::new(p, 1).unwrap();
        for r in 1..p {
            let m = Module::gen_verma_affine(&params, r).unwrap();
            let v = m.act(&mff_vector(&params, r).unwrap(), &m.cyclic_vector());
            assert!(!v.is_empty(), "p={p} r={r}");
            let w = m.vector_weight(&v).unwrap();
            assert_eq!(w.0, 2 * (p - r));
            assert_eq!(apply(&m, &[h(0)], &v), scaled(&v, &qi(2 * p - r - 1)));
            for x in m.raising_generators() {
                assert!(apply(&m, &[x], &v).is_empty(), "p={p} r={r} {x}");
            }
            let found = m.find_singular_rel(&w);
            assert_eq!(found.len(), 1);
            let k = v.keys().next().unwrap();
            assert_eq!(scaled(&found[0], &(v[k].clone() / &found[0][k])), v);
        }
    }
}

#[test]
fn relaxed_image_satisfies_relaxed_relations() {
    for p in 2..=4 {
        let params = Params::new(p, 1).unwrap();
        let kk = params.k();
        for r in 1..p {
            let m = Module::gen_verma_affine(&params, r).unwrap();
            let v = m.act(&mff_vector(&params, r).unwrap(), &m.cyclic_vector());
            let word = vec![f(0); (p - r) as usize];
            let w = apply(&m, &word, &v);
            assert!(!w.is_empty());
            for x in [e(1), f(1), h(1), e(2), f(2), h(2)] {
                assert!(apply(&m, &[x], &w).is_empty(), "p={p} r={r} {x}");
            }
            let jr = params.j(r, 0);
            assert_eq!(apply(&m, &[h(0)], &w), scaled(&w, &(qi(2) * &jr)));
            // Sugawara: E0F0 + F0E0 + H0^2/2 = 2(k+2) L0 on the relaxed top
            let hh = qi(p - r) + params.delta(&jr);
            let mut cas = apply(&m, &[e(0), f(0)], &w);
            for (kq, c) in apply(&m, &[f(0), e(0)], &w) {
                *cas.entry(kq).or_insert_with(Q::zero) += c;
            }
            for (kq, c) in apply(&m, &[h(0), h(0)], &w) {
                *cas.entry(kq).or_insert_with(Q::zero) += c * q(1, 2);
            }
            cas.retain(|_, c| !c.is_zero());
            assert_eq!(cas, scaled(&w, &(qi(2) * (kk.clone() + qi(2)) * hh)), "p={p} r={r}");
        }
    }
}
