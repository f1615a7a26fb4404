use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use qkq::hnum::*;
use qkq::orbits::{make_normal_form, GeneratorForm};
use qkq::{HVector, Quaternion, Quaternion32};

fn q(a: [f64; 4]) -> Quaternion {
    Quat::from_array(a)
}

fn quat_strategy() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-2.0..2.0f64).prop_map(q)
}

fn ball_strategy() -> impl Strategy<Value = Vec<Quaternion>> {
    // chart points of the unit ball, |x|² < 0.95
    (quat_strategy(), quat_strategy()).prop_filter_map("outside ball", |(a, b)| {
        let n = a.norm_sqr() + b.norm_sqr();
        let s = 0.9 / (1.0 + n);
        n.is_finite()
            .then(|| vec![a.scale(s.sqrt()), b.scale(s.sqrt())])
    })
}

#[test]
fn form_examples() {
    let u = HVector::u3([Quat::one(), Quat::zero(), Quat::zero()]);
    assert_eq!(form_f(1, 2, &u, &u).unwrap().re(), -1.0);
    let u = HVector::new(2, 1, vec![Quat::one(), Quat::j(), Quat::k()]).unwrap();
    assert_eq!(form_f(2, 1, &u, &u).unwrap().re(), -1.0);
}

#[test]
fn region_examples() {
    let r = |c: [f64; 3]| region(&HVector::u3(c.map(Quat::real))).unwrap();
    assert_eq!(r([1.0, 0.0, 0.0]), Region::Minus);
    assert_eq!(r([1.0, 1.0, 0.0]), Region::Null);
    assert_eq!(r([1.0, 2.0, 0.0]), Region::Plus);
    assert!(region(&HVector::u3([Quat::zero(); 3])).is_err());
}

#[test]
fn chart_examples() {
    let (a, b) = (q([0.1, 0.2, 0.0, 0.3]), q([0.0, -0.1, 0.2, 0.1]));
    let p = to_chart(&HVector::u3([Quat::one(), a, b]), 0).unwrap();
    assert_eq!(p.coords, vec![a, b]);
    let p = to_chart(
        &HVector::u3([Quat::real(2.0), Quat::zero(), Quat::zero()]),
        0,
    )
    .unwrap();
    assert_eq!(p.coords, vec![Quat::zero(); 2]);
    assert!(to_chart(&HVector::u3([Quat::zero(), Quat::one(), Quat::zero()]), 0).is_err());
}

#[test]
fn basis_change_examples() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = basis_change(&HVector::u3([Quat::one(), Quat::zero(), Quat::zero()])).unwrap();
    assert!((v.comps[0].re() - h).abs() < 1e-15 && (v.comps[1].re() + h).abs() < 1e-15);
    assert!((form_vtilde(&v, &v).unwrap().re() + 1.0).abs() < 1e-15);
    let v = basis_change(&HVector::u3([Quat::zero(), Quat::zero(), Quat::one()])).unwrap();
    assert_eq!(v.comps[2], Quat::one());
    assert!(basis_change(&v).is_err());
}

#[test]
fn metric_examples() {
    let p = ChartPt::u0(1, 2, vec![Quat::zero(); 2]).unwrap();
    let e = unit_tangent::<f64>(2, 0, 0);
    assert_eq!(ambient_metric(&p, &e, &e).unwrap(), 1.0);
    let p = ChartPt::u0(2, 1, vec![Quat::zero(); 2]).unwrap();
    assert_eq!(ambient_metric(&p, &e, &e).unwrap(), -1.0);
}

#[test]
fn height_one_exponential_example() {
    let y = make_normal_form(
        GeneratorForm::T1 {
            lambda: 1.0,
            p: 0.0,
            q: 0.0,
        },
        Basis::VTilde,
    )
    .unwrap();
    let t = 0.7;
    let e = y.exp(t).unwrap();
    let mut expected = HMat3::identity();
    expected.0[1][0] = Quat::complex(0.0, -t);
    assert!(e.dist(&expected) < 1e-15);
    assert!(
        make_normal_form(GeneratorForm::T0Diag { p: [0.0; 3] }, Basis::U)
            .unwrap()
            .exp(1.0)
            .unwrap()
            .dist(&HMat3::identity())
            < 1e-15
    );
}

#[test]
fn single_precision_layer() {
    let a = Quaternion32::new(1.0, 2.0, -0.5, 0.25);
    let b = Quaternion32::new(0.5, -1.0, 0.0, 2.0);
    assert!(((a * b).norm() - a.norm() * b.norm()).abs() < 1e-5);
    let u = HVec::<f32>::u3([Quat::one(), Quat::zero(), Quat::zero()]);
    assert_eq!(region(&u).unwrap(), Region::Minus);
}

proptest! {
    #[test]
    fn quaternion_algebra(a in quat_strategy(), b in quat_strategy(), c in quat_strategy()) {
        prop_assert!(((a * b) * c).dist(a * (b * c)) < 1e-12);
        prop_assert!(((a * b).norm() - a.norm() * b.norm()).abs() < 1e-12);
        prop_assert!((a * b).conj().dist(b.conj() * a.conj()) < 1e-12);
    }

    #[test]
    fn form_is_real(c in prop::array::uniform3(quat_strategy())) {
        let u = HVector::u3(c);
        prop_assert!(form_f(1, 2, &u, &u).unwrap().im().norm() < 1e-12);
    }

    #[test]
    fn psi_is_anti_isometry(c in prop::array::uniform3(quat_strategy())) {
        let u = HVector::u3(c);
        let w = psi(&u);
        let (a, b) = (form_f(1, 2, &u, &u).unwrap().re(), form_f(2, 1, &w, &w).unwrap().re());
        // equal up to summation order
        prop_assert!((a + b).abs() <= 4.0 * f64::EPSILON * u.norm_sqr());
    }

    #[test]
    fn basis_change_preserves_form(c in prop::array::uniform3(quat_strategy())) {
        let u = HVector::u3(c);
        let v = basis_change(&u).unwrap();
        let f = form_f(1, 2, &u, &u).unwrap().re();
        prop_assert!((form_vtilde(&v, &v).unwrap().re() - f).abs() < 1e-12 * (1.0 + f.abs()));
        let back = basis_change_inverse(&v).unwrap();
        prop_assert!(back.comps.iter().zip(&u.comps).all(|(a, b)| a.dist(*b) < 1e-12));
    }

    #[test]
    fn chart_round_trip(x in ball_strategy(), g in quat_strategy()) {
        prop_assume!(g.norm() > 0.1);
        let u = HVector::u3([Quat::one(), x[0], x[1]]).right_mul(g);
        prop_assert_eq!(region(&u).unwrap(), Region::Minus);
        let p = to_chart(&u, 0).unwrap();
        prop_assert!(p.in_minus());
        let w = from_chart(&p).right_mul(g);
        prop_assert!(w.comps.iter().zip(&u.comps).all(|(a, b)| a.dist(*b) < 1e-12));
    }

    #[test]
    fn ambient_metric_is_positive(x in ball_strategy()) {
        let p = ChartPt::u0(1, 2, x).unwrap();
        let g = metric_gram(&p).unwrap();
        let m = DMatrix::from_fn(8, 8, |r, s| g[r][s]);
        prop_assert!((&m - m.transpose()).amax() < 1e-12);
        prop_assert!(SymmetricEigen::new(m).eigenvalues.min() > 0.0);
    }

    #[test]
    fn exponentials_preserve_the_form(p in -3.0..3.0f64, qq in -3.0..3.0f64, t in 0.1..1.0f64) {
        for basis in [Basis::U, Basis::VTilde] {
            for f in [
                GeneratorForm::T0Diag { p: [p, qq, 1.0] },
                GeneratorForm::T0Split { lambda: 1.0, p, q: qq },
                GeneratorForm::T1 { lambda: -1.0, p, q: qq },
                GeneratorForm::T2 { lambda: 1.0, p },
            ] {
                let y = match make_normal_form(f, basis) {
                    Err(qkq::Error::IllConditioned { .. }) => continue,
                    other => other.unwrap(),
                };
                let e = y.exp(t).unwrap();
                prop_assert!(e.group_residual(basis) < 1e-10);
                prop_assert!(e.dist(&y.exp_series(t).unwrap()) < 1e-9);
            }
        }
    }
}
