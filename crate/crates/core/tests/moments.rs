use num_complex::Complex;
use proptest::prelude::*;
use qkq::hnum::{region, Basis, ChartPt, HMat3, HVec, Quat, Region};
use qkq::moments::*;
use qkq::orbits::{make_normal_form, GeneratorForm, Sp12Element};
use qkq::{Error, HVector, Quaternion};

fn quat_strategy() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-1.5..1.5f64).prop_map(Quat::from_array)
}

fn cic(x: Quaternion) -> Quaternion {
    x.conj() * Quat::i() * x
}

fn ball_families() -> Vec<Family> {
    vec![
        Family::Pl { p: [1.0, 2.0, 2.0] },
        Family::Pl { p: [2.0, 3.0, 3.0] },
        Family::GenPedersen { p: 0.5, q: 1.0 },
        Family::GenPedersen { p: 0.0, q: 0.0 },
        Family::HeightOne { p: -1.0, q: 2.0 },
        Family::HeightTwo { p: 1.0 },
        Family::HeightTwo { p: 0.0 },
    ]
}

#[test]
fn zero_generator_has_zero_moment() {
    let Ok(t) = Sp12Element::new(HMat3::zero(), Basis::U) else {
        return;
    };
    let u = HVector::u3([Quat::one(), Quat::new(0.1, 0.2, 0.3, 0.4), Quat::j()]);
    assert_eq!(mu_general(&t, &u).unwrap().norm(), 0.0);
}

#[test]
fn basis_mismatch_is_a_contract_error() {
    let t = make_normal_form(
        GeneratorForm::T2 {
            lambda: 1.0,
            p: 1.0,
        },
        Basis::VTilde,
    )
    .unwrap();
    let u = HVector::u3([Quat::one(), Quat::zero(), Quat::zero()]);
    assert!(matches!(mu_general(&t, &u), Err(Error::Contract(_))));
    assert!(matches!(
        mu_family(&Family::HeightTwo { p: 1.0 }, &u),
        Err(Error::Contract(_))
    ));
}

#[test]
fn gen_pedersen_slice_example() {
    // y = (−1/2, 0): ȳ1 − y1 vanishes and p(ȳ1 i + i y1) = −p i
    for p in [0.0, 1.0, -2.5] {
        let fam = Family::GenPedersen { p, q: 3.0 };
        let f = f_inhomog(&fam, &ChartPt::vt(Quat::real(-0.5), Quat::zero())).unwrap();
        assert_eq!(f.value.to_array(), [-p, 0.0, 0.0]);
    }
}

#[test]
fn pl_zero_set_satisfies_the_real_equations() {
    let p = [1.0, 2.0, 2.0];
    let samples = zeroset_sample(&Family::Pl { p }, 17, 10).unwrap();
    assert!(!samples.is_empty());
    for u in &samples {
        let mut norm_eq = -p[0];
        let mut cross = Complex::new(0.0, 0.0);
        for (c, &pa) in u.comps.iter().zip(&p).skip(1) {
            let (z, w) = c.to_zw();
            norm_eq += pa * (z.norm_sqr() - w.norm_sqr());
            cross += w.conj() * z * pa;
        }
        assert!(
            norm_eq.abs() < 1e-9 && cross.norm() < 1e-9,
            "{norm_eq} {cross}"
        );
    }
}

#[test]
fn empty_zero_sets_report_search_failure() {
    let fam = Family::Pl { p: [1.0, 1.0, 1.0] };
    assert!(!zeroset_nonempty(&WeightTriple::new(1, 1, 1).unwrap()).unwrap());
    assert!(matches!(
        zeroset_sample(&fam, 1, 5),
        Err(Error::SearchFailure { .. })
    ));
    let fam = Family::HeightOne { p: 1.0, q: 0.0 };
    assert!(matches!(
        zeroset_sample(&fam, 1, 5),
        Err(Error::SearchFailure { .. })
    ));
}

#[test]
fn samples_lie_in_the_ball_and_on_the_zero_set() {
    for fam in ball_families() {
        let samples = zeroset_sample(&fam, 4, 20).unwrap();
        for u in &samples {
            assert_eq!(region(u).unwrap(), Region::Minus, "{fam:?}");
            assert!(mu_family(&fam, u).unwrap().norm() < 1e-10, "{fam:?}");
        }
    }
}

#[test]
fn zero_set_is_invariant_along_the_flow() {
    for fam in ball_families() {
        let samples = zeroset_sample(&fam, 2, 5).unwrap();
        for u in &samples {
            for s in -10..=10 {
                let g = fam.flow(s as f64 / 10.0).unwrap();
                let c = g.mul_vec(&u.as3().unwrap());
                let v = HVec::with_basis(1, 2, fam.basis(), c.to_vec()).unwrap();
                assert!(
                    mu_family(&fam, &v).unwrap().norm() < 1e-8,
                    "{fam:?} at t = {}",
                    s as f64 / 10.0
                );
            }
        }
    }
}

#[test]
fn sampler_is_seed_deterministic() {
    let fam = Family::HeightOne { p: -1.0, q: 2.0 };
    assert_eq!(
        zeroset_sample(&fam, 11, 4).unwrap(),
        zeroset_sample(&fam, 11, 4).unwrap()
    );
}

#[test]
fn weight_triple_rules() {
    assert!(WeightTriple::new(2, 4, 6).is_err());
    assert_eq!(WeightTriple::new(1, 3, 5).unwrap().effective_period(), 0.5);
    assert_eq!(WeightTriple::new(1, 2, 3).unwrap().effective_period(), 1.0);
}

#[test]
fn bergman_witness_is_on_the_zero_set() {
    let w = WeightTriple::new(2, 1, 1).unwrap();
    let fam = Family::Bergman { p: w.as_f64() };
    for k in 0..8 {
        let pt = bergman_w1_witness(&w, k as f64 * 0.7).unwrap();
        assert!(f_inhomog(&fam, &pt).unwrap().norm() < 1e-12);
    }
}

proptest! {
    #[test]
    fn diagonal_moment_specializes(c in prop::array::uniform3(quat_strategy()), p in prop::array::uniform3(-3.0..3.0f64)) {
        let u = HVector::u3(c);
        let t = make_normal_form(GeneratorForm::T0Diag { p }, Basis::U).unwrap();
        let mu = mu_general(&t, &u).unwrap().value.to_quat();
        let expected = cic(c[0]) * (-p[0]) + cic(c[1]) * p[1] + cic(c[2]) * p[2];
        prop_assert!(mu.dist(expected) < 1e-12 * (1.0 + u.norm_sqr()));
    }

    #[test]
    fn height_two_moment_specializes(c in prop::array::uniform3(quat_strategy()), p in -3.0..3.0f64) {
        let v = HVector::vt3(c);
        let t = make_normal_form(GeneratorForm::T2 { lambda: 1.0, p }, Basis::VTilde).unwrap();
        let mu = mu_general(&t, &v).unwrap().value.to_quat();
        let i = Quat::i();
        let [v0, v1, v2] = c;
        let expected = v0.conj() * i * v2 + v2.conj() * i * v0 + (v0.conj() * i * v1 + v1.conj() * i * v0) * p + cic(v2) * p;
        prop_assert!(mu.dist(expected) < 1e-12 * (1.0 + v.norm_sqr()));
    }

    #[test]
    fn chart_moment_matches_homogeneous(x1 in quat_strategy(), x2 in quat_strategy(), p in -3.0..3.0f64, q in -3.0..3.0f64) {
        for fam in [
            Family::Pl { p: [1.0, p, q] },
            Family::GenPedersen { p, q },
            Family::HeightOne { p, q },
            Family::HeightTwo { p },
        ] {
            let pt = match fam.basis() {
                Basis::U => ChartPt::u0(1, 2, vec![x1, x2]).unwrap(),
                Basis::VTilde => ChartPt::vt(x1, x2),
            };
            let f = f_inhomog(&fam, &pt).unwrap().value;
            let mu = mu_family(&fam, &lift(&fam, x1, x2)).unwrap().value;
            prop_assert!((f.to_quat() - mu.to_quat()).norm() < 1e-12 * (1.0 + x1.norm_sqr() + x2.norm_sqr()), "{:?}", fam);
        }
    }
}
