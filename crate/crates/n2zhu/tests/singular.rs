use n2zhu::known;
use n2zhu::pbw::Vector;
use n2zhu::reps::Module;
use n2zhu::Params;
use num_traits::Zero;

fn proportional(a: &Vector, b: &Vector) -> bool {
    let Some((k, ca)) = a.iter().next() else {
        return false;
    };
    let Some(cb) = b.get(k) else {
        return false;
    };
    let r = ca / cb;
    a.len() == b.len() && b.iter().all(|(k, c)| a.get(k).is_some_and(|x| *x == c * &r))
}

fn known_vector(m: &Module, p: i64, pp: i64) -> Vector {
    let mut v = Vector::new();
    for (c, word) in known::vacuum_singular(p, pp).unwrap() {
        let x = m.engine.apply_word(&word, &m.cyclic_vector());
        n2zhu::pbw::vec_axpy(&mut v, &c, &x);
    }
    v.retain(|_, c| !c.is_zero());
    v
}

fn check(p: i64, pp: i64) {
    let params = Params::new(p, pp).unwrap();
    let m = Module::vacuum_ns2(&params.c());
    let w = (2 * (p - 1) * pp, 0);
    let found = m.find_singular_rel(&w);
    assert_eq!(found.len(), 1, "singular space at {:?}", w);
    let v = known_vector(&m, p, pp);
    let sub = m.base_submodule(w.0, None);
    let v = m.reduce(&sub, &v);
    assert!(proportional(&found[0], &v), "{:?} vs {:?}", found[0], v);
}

#[test]
fn vacuum_singular_4_1() {
    check(4, 1);
}

#[test]
fn vacuum_singular_2_3() {
    check(2, 3);
}

#[test]
fn vacuum_singular_3_2() {
    check(3, 2);
}

#[test]
fn no_singular_below_the_first() {
    let params = Params::new(3, 2).unwrap();
    let m = Module::vacuum_ns2(&params.c());
    for l2 in 1..8 {
        for ch in -3..=3 {
            assert!(m.find_singular_rel(&(l2, ch)).is_empty(), "({l2},{ch})");
        }
    }
}

#[test]
fn wrong_level_vector_is_not_singular() {
    // the (2,3) combination evaluated at c = 3/2 is not proportional
    let params = Params::new(4, 1).unwrap();
    let m = Module::vacuum_ns2(&params.c());
    let found = m.find_singular_rel(&(6, 0));
    assert!(!proportional(&found[0], &known_vector(&m, 2, 3)));
}
