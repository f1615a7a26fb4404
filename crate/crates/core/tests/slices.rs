use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;
use qkq::hnum::{chart_tangent, from_chart, region, to_chart, Basis, ChartPt, HVec, Quat, Region};
use qkq::moments::{f_inhomog, mu_family, Family, WeightTriple};
use qkq::orbits::{make_normal_form, GeneratorForm};
use qkq::slices::*;
use qkq::{ChartPoint, Error, Quaternion};

type C64 = Complex<f64>;

fn charts() -> Vec<QuotientChart> {
    [
        Family::Pl { p: [1.0, 2.0, 2.0] },
        Family::Pl { p: [2.0, 3.0, 3.0] },
        Family::GenPedersen { p: 0.0, q: 0.0 },
        Family::GenPedersen { p: 1.0, q: 2.0 },
        Family::HeightOne { p: -1.0, q: 2.0 },
        Family::HeightOne { p: 1.0, q: 3.0 },
        Family::HeightOne { p: 0.0, q: 1.0 },
        Family::HeightTwo { p: 1.0 },
        Family::HeightTwo { p: -2.0 },
        Family::HeightTwo { p: 0.0 },
        Family::Bergman { p: [1.0, 1.0, 1.0] },
    ]
    .into_iter()
    .map(|f| QuotientChart::new(f).unwrap())
    .collect()
}

fn flat(v: &[Quaternion]) -> Vec<f64> {
    v.iter().flat_map(|q| q.to_array()).collect()
}

/// Central 4th-order difference of the slice embedding along axis `a`.
fn slice_tangent(chart: &QuotientChart, xi: &[f64; 4], a: usize, h: f64) -> Vec<f64> {
    let at = |s: f64| {
        let mut x = *xi;
        x[a] += s;
        flat(&chart.embed(&x).unwrap().coords)
    };
    let (p1, m1, p2, m2) = (at(h), at(-h), at(2.0 * h), at(-2.0 * h));
    (0..p1.len())
        .map(|r| (8.0 * (p1[r] - m1[r]) - (p2[r] - m2[r])) / (12.0 * h))
        .collect()
}

fn killing_chart(chart: &QuotientChart, pt: &ChartPoint) -> Vec<f64> {
    let u = from_chart(pt);
    let du = chart
        .family
        .generator_matrix()
        .unwrap()
        .mul_vec(&u.as3().unwrap());
    flat(&chart_tangent(&u, &du, pt.beta).unwrap())
}

fn flowed(chart: &QuotientChart, pt: &ChartPoint, t: f64) -> HVec<f64> {
    let u = from_chart(pt);
    let c = chart.family.flow(t).unwrap().mul_vec(&u.as3().unwrap());
    let (k, l) = chart.signature();
    HVec::with_basis(k, l, u.basis, c.to_vec()).unwrap()
}

fn interior(chart: &QuotientChart, count: usize) -> Vec<[f64; 4]> {
    grid_points(&chart.default_box(), count)
        .into_iter()
        .filter(|x| chart.in_domain(x))
        .collect()
}

#[test]
fn slices_are_transverse_to_the_orbit() {
    for chart in charts() {
        let pts = interior(&chart, 2);
        assert!(!pts.is_empty(), "{:?}", chart.family);
        for xi in pts {
            let pt = chart.embed(&xi).unwrap();
            let mut cols: Vec<Vec<f64>> = (0..4)
                .map(|a| slice_tangent(&chart, &xi, a, 1e-4))
                .collect();
            cols.push(killing_chart(&chart, &pt));
            let m = DMatrix::from_fn(8, 5, |r, c| cols[c][r]);
            let sv = m.singular_values();
            assert!(
                sv.min() > 1e-6,
                "{:?} at {xi:?}: σ_min = {}",
                chart.family,
                sv.min()
            );
        }
    }
}

#[test]
fn gauge_orbits_stay_on_the_zero_set() {
    for chart in charts() {
        for xi in interior(&chart, 2) {
            let pt = chart.embed(&xi).unwrap();
            for k in -5..=5 {
                let v = flowed(&chart, &pt, k as f64 / 10.0);
                assert!(
                    mu_family(&chart.family, &v).unwrap().norm() < 1e-8,
                    "{:?}",
                    chart.family
                );
            }
        }
    }
}

#[test]
fn slice_points_are_distinct() {
    for chart in charts() {
        let pts: Vec<Vec<f64>> = interior(&chart, 3)
            .iter()
            .map(|x| flat(&chart.embed(x).unwrap().coords))
            .collect();
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                let d: f64 = pts[a]
                    .iter()
                    .zip(&pts[b])
                    .map(|(x, y)| (x - y).powi(2))
                    .sum();
                assert!(
                    d.sqrt() > 1e-6,
                    "{:?}: samples {a} and {b} collide",
                    chart.family
                );
            }
        }
    }
}

#[test]
fn gen_pedersen_flow_rescales_the_slice_coordinate() {
    let chart = QuotientChart::new(Family::GenPedersen { p: 1.0, q: 2.0 }).unwrap();
    for xi in interior(&chart, 2) {
        let pt = chart.embed(&xi).unwrap();
        for t in [-0.7, -0.2, 0.3, 1.0] {
            let y = to_chart(&flowed(&chart, &pt, t), 0).unwrap();
            let tr = 2.0 * y.coords[0].re();
            assert!(
                (tr + (-2.0 * t).exp()).abs() < 1e-10,
                "t = {t}: y1 + ȳ1 = {tr}"
            );
        }
    }
}

#[test]
fn killing_field_examples() {
    let p = [1.0, 2.0, 3.0];
    let delta = make_normal_form(GeneratorForm::T0Diag { p }, Basis::U).unwrap();
    let x = vec![
        Quat::new(0.1, 0.2, -0.1, 0.3),
        Quat::new(-0.2, 0.0, 0.1, 0.1),
    ];
    let pt = ChartPt::u0(1, 2, x.clone()).unwrap();
    let v = killing_field(&delta, &pt).unwrap();
    let i = Quat::i();
    for a in 0..2 {
        let expected = i * p[a + 1] * x[a] - x[a] * i * p[0];
        assert!(v[a].dist(expected) < 1e-14);
    }
    let zero = make_normal_form(GeneratorForm::T0Diag { p: [0.0; 3] }, Basis::U).unwrap();
    assert!(killing_field(&zero, &pt)
        .unwrap()
        .iter()
        .all(|q| q.norm() == 0.0));
    let t1 = make_normal_form(
        GeneratorForm::T1 {
            lambda: 1.0,
            p: 1.0,
            q: 1.0,
        },
        Basis::VTilde,
    )
    .unwrap();
    assert!(matches!(killing_field(&t1, &pt), Err(Error::Contract(_))));
}

#[test]
fn killing_field_differentiates_the_flow() {
    let h = 1e-3;
    for chart in charts()
        .into_iter()
        .filter(|c| !matches!(c.family, Family::Bergman { .. }))
    {
        let delta = chart.family.generator().unwrap();
        for xi in interior(&chart, 2).into_iter().take(4) {
            let pt = chart.embed(&xi).unwrap();
            let v = flat(&killing_field(&delta, &pt).unwrap());
            let at = |t: f64| flat(&to_chart(&flowed(&chart, &pt, t), 0).unwrap().coords);
            let (p1, m1, p2, m2) = (at(h), at(-h), at(2.0 * h), at(-2.0 * h));
            for r in 0..8 {
                let fd = (8.0 * (p1[r] - m1[r]) - (p2[r] - m2[r])) / (12.0 * h);
                assert!(
                    (fd - v[r]).abs() < 1e-10 * (1.0 + v[r].abs()),
                    "{:?}: {fd} vs {}",
                    chart.family,
                    v[r]
                );
            }
        }
    }
}

#[test]
fn domain_violations_are_reported() {
    let c = |a: f64| C64::new(a, 0.0);
    assert!(matches!(
        slice_height_two(1.0, 1.0, c(2.0), 0.0),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        slice_height_two_central(Quat::real(0.5)),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        slice_gen_pedersen(1.0, 1.0, Quat::real(1.0)),
        Err(Error::Domain(_))
    ));
    let w = WeightTriple::new(1, 2, 1).unwrap();
    assert!(matches!(
        slice_pl(&w, c(0.0), c(1.0), c(1.0)),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        slice_bergman(&[0.8, 0.0, 0.8, 0.0]),
        Err(Error::Domain(_))
    ));
    let central = HeightOneCoords::Central {
        r: -0.2,
        b: 0.0,
        c: 0.0,
        s: 0.0,
    };
    assert!(matches!(
        slice_height_one(0.0, 2.0, central),
        Err(Error::Domain(_))
    ));
    assert!(QuotientChart::new(Family::HeightOne { p: 1.0, q: 1.0 }).is_err());
    assert!(QuotientChart::new(Family::Pl { p: [1.0, 1.0, 1.0] }).is_err());
}

#[test]
fn height_two_central_chart() {
    let pt = slice_height_two_central(Quat::new(-0.3, 0.1, 0.2, 0.0)).unwrap();
    assert_eq!(pt.coords[1], Quat::zero());
    assert_eq!(
        f_inhomog(&Family::HeightTwo { p: 0.0 }, &pt)
            .unwrap()
            .norm(),
        0.0
    );
}

#[test]
fn bergman_slice_has_full_rank() {
    let chart = QuotientChart::new(Family::Bergman { p: [1.0, 1.0, 1.0] }).unwrap();
    for xi in interior(&chart, 3) {
        let cols: Vec<Vec<f64>> = (0..4)
            .map(|a| slice_tangent(&chart, &xi, a, 1e-4))
            .collect();
        let m = DMatrix::from_fn(8, 4, |r, c| cols[c][r]);
        assert_eq!(m.rank(1e-6), 4);
    }
}

proptest! {
    #[test]
    fn gen_pedersen_slice_solves_the_moment_equation(y in prop::array::uniform4(-0.49..0.49f64), p in -3.0..3.0f64, q in -3.0..3.0f64) {
        let pt = slice_gen_pedersen(p, q, Quat::from_array(y)).unwrap();
        prop_assert_eq!(pt.coords[0].re(), -0.5);
        let fam = Family::GenPedersen { p, q };
        prop_assert!(f_inhomog(&fam, &pt).unwrap().norm() < 1e-12);
    }

    #[test]
    fn height_two_slice_is_in_the_ball(s2 in 0.05..2.0f64, w in prop::array::uniform2(-1.0..1.0f64), r in -2.0..2.0f64, p in 0.2..3.0f64) {
        let w2 = C64::new(w[0], w[1]);
        prop_assume!(s2 / p > w2.norm_sqr());
        let pt = slice_height_two(p, s2, w2, r).unwrap();
        let fam = Family::HeightTwo { p };
        prop_assert!(f_inhomog(&fam, &pt).unwrap().norm() < 1e-12);
        prop_assert_eq!(region(&from_chart(&pt)).unwrap(), Region::Minus);
    }

    #[test]
    fn pl_slice_solves_the_moment_equation(z in prop::array::uniform2(-0.5..0.5f64), a in prop::array::uniform2(-0.3..0.3f64)) {
        for w in [[1, 2, 2], [2, 3, 3], [1, 3, 3]] {
            let wt = WeightTriple::new(w[0], w[1], w[2]).unwrap();
            let (z2, alpha) = (C64::new(z[0], z[1]), C64::new(a[0], a[1]));
            if pl_domain_function(&wt, z2, alpha) >= 0.0 {
                continue;
            }
            let Ok(pt) = slice_pl(&wt, z2, alpha, C64::new(1.0, 0.0)) else { continue };
            let fam = Family::Pl { p: wt.as_f64() };
            prop_assert!(f_inhomog(&fam, &pt).unwrap().norm() < 1e-12);
            prop_assert!(pt.in_minus());
        }
    }

    #[test]
    fn bergman_slice_solves_the_moment_equation(xi in prop::array::uniform4(-0.45..0.45f64)) {
        let pt = slice_bergman(&xi).unwrap();
        let fam = Family::Bergman { p: [1.0; 3] };
        prop_assert!(f_inhomog(&fam, &pt).unwrap().norm() < 1e-10);
    }

    #[test]
    fn height_one_slice_solves_the_moment_equation(z in prop::array::uniform4(-1.5..1.5f64)) {
        for (p, q) in [(-1.0, 2.0), (1.0, 3.0), (-2.0, 0.5)] {
            let coords = HeightOneCoords::Generic { z2: C64::new(z[0], z[1]), w2: C64::new(z[2], z[3]) };
            let Ok(pt) = slice_height_one(p, q, coords) else { continue };
            let fam = Family::HeightOne { p, q };
            prop_assert!(f_inhomog(&fam, &pt).unwrap().norm() < 1e-12);
            prop_assert!(pt.coords[0].x.abs() < 1e-15);
        }
    }
}
