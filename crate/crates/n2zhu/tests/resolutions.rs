use n2zhu::resolutions::{verify_euler, ResolutionSpec, Variant};
use n2zhu::scalar::q;
use n2zhu::Params;

fn run(spec: ResolutionSpec, n: i64) {
    let rep = verify_euler(&spec, n).unwrap();
    let bad: Vec<_> = rep.mismatches().collect();
    assert!(rep.matched, "{:?} r={} depth={}: {:?}", spec.variant, spec.r, rep.depth, bad);
}

fn spec(v: Variant, p: i64, pp: i64, r: i64) -> ResolutionSpec {
    ResolutionSpec::new(v, Params::new(p, pp).unwrap(), r)
}

#[test]
fn n2_parabolic_4_1() {
    for r in 1..=3 {
        run(spec(Variant::N2Parabolic, 4, 1, r), 4);
    }
}

#[test]
fn n2_parabolic_3_2() {
    for r in 1..=2 {
        run(spec(Variant::N2Parabolic, 3, 2, r), 4);
    }
}

#[test]
fn affine_parabolic_3_1() {
    for r in 1..=2 {
        run(spec(Variant::AffineParabolic, 3, 1, r), 4);
    }
}

#[test]
fn n2_chiral_4_1() {
    for r in 1..=3 {
        run(spec(Variant::N2Chiral, 4, 1, r), 3);
    }
}

#[test]
fn n2_relaxed_3_2() {
    let mut s = spec(Variant::N2Relaxed, 3, 2, 1);
    s.s = 1;
    s.j = Some(q(1, 5));
    s.window = Some(8);
    run(s, 2);
}
