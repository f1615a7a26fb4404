//! Global slices of the quotient 4-manifolds: sections of the one-parameter action inside the
//! momentum zero set, domain predicates and Killing fields.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::curvature::FdSteps;
use crate::error::{Error, Result};
use crate::hnum::{
    basis_change_inverse, chart_tangent, from_chart, to_chart, Basis, ChartPt, HMat3, HVec, Quat,
};
use crate::moments::{action_free, f_inhomog, zeroset_nonempty, Family, WeightTriple};
use crate::orbits::Sp12Element;
use crate::{ChartPoint, Quaternion};

type C64 = Complex<f64>;

fn quat(z: C64, w: C64) -> Quaternion {
    Quat::from_zw(z, w)
}

fn imag(v: Vector3<f64>) -> Quaternion {
    Quat::new(0.0, v.x, v.y, v.z)
}

fn imag_vec(q: Quaternion) -> Vector3<f64> {
    Vector3::new(q.x, q.y, q.z)
}

/// Matrix of `a ↦ i × a` on imaginary quaternions.
fn cross_i() -> Matrix3<f64> {
    Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0)
}

/// Slice `Re(y_1) = −1/2` of the generalized Pedersen action; solves the linear system for `Im y_1`.
pub fn slice_gen_pedersen(p: f64, q: f64, y2: Quaternion) -> Result<ChartPoint> {
    if y2.norm_sqr() >= 1.0 {
        return Err(Error::Domain(format!(
            "|y2|² = {} must be < 1",
            y2.norm_sqr()
        )));
    }
    // −2a + 2p (i × a) = p i − q ȳ2 i y2
    let m = Matrix3::identity() * -2.0 + cross_i() * (2.0 * p);
    let rhs = Vector3::new(p, 0.0, 0.0) - imag_vec(y2.conj() * Quat::i() * y2) * q;
    let a = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Internal("slice system is singular".into()))?;
    Ok(ChartPt::vt(Quat::real(-0.5) + imag(a), y2))
}

/// Residual coordinates of the height-one slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeightOneCoords {
    /// `p ≠ 0`: `y_2 = z_2 + w_2 j` determines `y_1`.
    Generic { z2: C64, w2: C64 },
    /// `p = 0`: `y_2` is a circle of radius `1/√|q|`, `y_1 = r + b j + c k` with `2r < −1/|q|`.
    Central { r: f64, b: f64, c: f64, s: f64 },
}

/// Slice `Re(i y_1) = 0` of the height-one action.
pub fn slice_height_one(p: f64, q: f64, coords: HeightOneCoords) -> Result<ChartPoint> {
    match coords {
        HeightOneCoords::Generic { z2, w2 } => {
            if p == 0.0 {
                return Err(Error::Contract("p = 0 uses the central coordinates".into()));
            }
            let (nz, nw) = (z2.norm_sqr(), w2.norm_sqr());
            let lhs = (p - q) * nz + (p + q) * nw;
            let ok = if p > 0.0 { lhs < -1.0 } else { lhs > -1.0 };
            if !ok {
                let rel = if p > 0.0 { "<" } else { ">" };
                return Err(Error::Domain(format!(
                    "(p−q)|z2|² + (p+q)|w2|² = {lhs} violates {rel} −1"
                )));
            }
            let zeta = z2.conj() * w2;
            let s = (1.0 - q * (nz - nw)) / (2.0 * p);
            let b = -q * zeta.re / p;
            let c = -q * zeta.im / p;
            Ok(ChartPt::vt(Quat::new(s, 0.0, b, c), quat(z2, w2)))
        }
        HeightOneCoords::Central { r, b, c, s } => {
            if p != 0.0 {
                return Err(Error::Contract("central coordinates need p = 0".into()));
            }
            if q == 0.0 {
                return Err(Error::Degenerate(
                    "p = q = 0: the moment map never vanishes".into(),
                ));
            }
            let bound = -1.0 / (2.0 * q.abs());
            if r >= bound {
                return Err(Error::Domain(format!("Re y1 = {r} violates < {bound}")));
            }
            let e = C64::from_polar(1.0 / q.abs().sqrt(), s);
            let y2 = if q > 0.0 {
                quat(e, C64::new(0.0, 0.0))
            } else {
                quat(C64::new(0.0, 0.0), e)
            };
            Ok(ChartPt::vt(Quat::new(r, 0.0, b, c), y2))
        }
    }
}

/// Slice `Re(i y_2) = 0` of the height-two action, `y_2 = s_2 + j w_2`, `r` the i-part of `y_1`.
pub fn slice_height_two(p: f64, s2: f64, w2: C64, r: f64) -> Result<ChartPoint> {
    if p == 0.0 {
        return Err(Error::Contract(
            "p = 0 uses slice_height_two_central".into(),
        ));
    }
    let nw = w2.norm_sqr();
    if s2 / p <= nw {
        return Err(Error::Domain(format!(
            "paraboloid s2/p > |w2|² violated ({} ≤ {nw})",
            s2 / p
        )));
    }
    // j w2 = w̄2 j
    let e = quat(C64::new(0.0, 0.0), w2.conj());
    let y2 = Quat::real(s2) + e;
    let re1 = -s2 / p - s2 * s2 / 2.0 + nw / 2.0;
    let jk = e * -(1.0 / p + s2);
    Ok(ChartPt::vt(Quat::new(re1, r, 0.0, 0.0) + jk, y2))
}

/// The `p = 0` height-two chart: `y_2 = 0`, `y_1` free with `Re y_1 < 0`.
pub fn slice_height_two_central(y1: Quaternion) -> Result<ChartPoint> {
    if y1.re() >= 0.0 {
        return Err(Error::Domain(format!("Re y1 = {} must be < 0", y1.re())));
    }
    Ok(ChartPt::vt(y1, Quat::zero()))
}

/// `f_p(z_2, α) = (p1 − p2)|z2|²[1 − p1 p2 |α|²]² + p1² p2 |α|² − 1`.
pub fn pl_domain_function(p: &WeightTriple, z2: C64, alpha: C64) -> f64 {
    let [_, p1, p2] = p.as_f64();
    let a2 = alpha.norm_sqr();
    (p1 - p2) * z2.norm_sqr() * (1.0 - p1 * p2 * a2).powi(2) + p1 * p1 * p2 * a2 - 1.0
}

/// Weighted circle slice: `(w1, w2) = α(−p2 z̄2, p1 z̄1)` with `z1 = |z1|·phase`.
pub fn slice_pl(p: &WeightTriple, z2: C64, alpha: C64, phase: C64) -> Result<ChartPoint> {
    let [p0, p1, p2] = p.as_f64();
    if p0 <= 0.0 || p1 <= 0.0 || p2 <= 0.0 {
        return Err(Error::Contract("slice_pl needs positive weights".into()));
    }
    let a2 = alpha.norm_sqr();
    let damp = 1.0 - p1 * p2 * a2;
    if damp <= 0.0 {
        return Err(Error::Domain(format!("|α|² = {a2} violates < 1/(p1² p2)")));
    }
    let z1sq = p0 / p1 / damp - p2 / p1 * z2.norm_sqr();
    if z1sq <= 0.0 {
        return Err(Error::Domain(format!("|z1|² = {z1sq} must be positive")));
    }
    let z1 = phase / phase.norm() * z1sq.sqrt();
    let w1 = alpha * (-p2) * z2.conj();
    let w2 = alpha * p1 * z1.conj();
    let pt = ChartPt::u0(1, 2, vec![quat(z1, w1), quat(z2, w2)])?;
    if !pt.in_minus() {
        return Err(Error::Domain(format!(
            "ball condition violated (1 − |x|² = {})",
            pt.defect()
        )));
    }
    Ok(pt)
}

/// Gauge-fixed slice of the diagonal circle with weights (1,1,1) on Proj(H^{2,1}_-): for `W ∈ C²`,
/// `|W| < 1`, the negative block is the Hermitian root `Z_0 = (I − W†W)^{-1/2}` and `Z_1 = W Z_0`.
pub fn slice_bergman(xi: &[f64; 4]) -> Result<ChartPoint> {
    let w = [C64::new(xi[0], xi[1]), C64::new(xi[2], xi[3])];
    let n2 = w[0].norm_sqr() + w[1].norm_sqr();
    if n2 >= 1.0 {
        return Err(Error::Domain(format!("|W|² = {n2} must be < 1")));
    }
    let coef = if n2 > 0.0 {
        (1.0 / (1.0 - n2).sqrt() - 1.0) / n2
    } else {
        0.5
    };
    let mut z0 = [[C64::new(0.0, 0.0); 2]; 2];
    for (r, row) in z0.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            let id = if r == c { 1.0 } else { 0.0 };
            *v = w[r].conj() * w[c] * coef + id;
        }
    }
    let z1 = [
        w[0] * z0[0][0] + w[1] * z0[1][0],
        w[0] * z0[0][1] + w[1] * z0[1][1],
    ];
    let u = [
        quat(z0[0][0], z0[0][1]),
        quat(z0[1][0], z0[1][1]),
        quat(z1[0], z1[1]),
    ];
    to_chart(&HVec::new(2, 1, u.to_vec())?, 0)
}

/// `(d/dt)|₀` of the induced chart action of `Δ` at `p` (both in the same basis).
pub fn killing_field(delta: &Sp12Element, p: &ChartPoint) -> Result<Vec<Quaternion>> {
    if p.basis != delta.basis || (p.k, p.l) != (1, 2) {
        return Err(Error::Contract(
            "chart point and generator bases differ".into(),
        ));
    }
    killing_with(&delta.matrix, p)
}

fn killing_with(m: &HMat3<f64>, p: &ChartPoint) -> Result<Vec<Quaternion>> {
    let u = from_chart(p);
    let du = m.mul_vec(&u.as3()?);
    chart_tangent(&u, &du, p.beta)
}

/// A named slice parameterization of one quotient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientChart {
    pub family: Family,
}

/// Per-axis sampling box inside the domain.
pub type GridBox = [(f64, f64); 4];

impl QuotientChart {
    pub fn new(family: Family) -> Result<Self> {
        match family {
            Family::Pl { p } => {
                let w = integer_weights(p)?;
                if !zeroset_nonempty(&w)? {
                    return Err(Error::Degenerate(format!(
                        "zero set empty: max(|p1/p0|, |p2/p0|) ≤ 1 for weights {:?}",
                        w.p
                    )));
                }
                if !action_free(&w)? {
                    return Err(Error::Parameter(format!(
                        "the circle with weights {:?} does not act freely",
                        w.p
                    )));
                }
            }
            Family::HeightOne { p, q } => {
                if p > 0.0 && p >= q.abs() {
                    return Err(Error::Degenerate(format!(
                        "zero set empty: p = {p} ≥ |q| = {}",
                        q.abs()
                    )));
                }
                if p == 0.0 && q == 0.0 {
                    return Err(Error::Degenerate("zero set empty: p = q = 0".into()));
                }
            }
            Family::Bergman { p } => {
                if p != [1.0, 1.0, 1.0] {
                    return Err(Error::Parameter(
                        "the Bergman slice is implemented for weights (1,1,1)".into(),
                    ));
                }
            }
            Family::GenPedersen { .. } | Family::HeightTwo { .. } => {}
        }
        Ok(Self { family })
    }

    /// Signature of the ambient space.
    pub fn signature(&self) -> (usize, usize) {
        self.family.signature()
    }

    /// Slice point in the family's own chart.
    pub fn embed(&self, xi: &[f64; 4]) -> Result<ChartPoint> {
        let c = |a: f64, b: f64| C64::new(a, b);
        match self.family {
            Family::Pl { p } => slice_pl(
                &integer_weights(p)?,
                c(xi[0], xi[1]),
                c(xi[2], xi[3]),
                c(1.0, 0.0),
            ),
            Family::GenPedersen { p, q } => {
                slice_gen_pedersen(p, q, Quat::new(xi[0], xi[1], xi[2], xi[3]))
            }
            Family::HeightOne { p, q } => {
                let coords = if p == 0.0 {
                    HeightOneCoords::Central {
                        r: xi[0],
                        b: xi[1],
                        c: xi[2],
                        s: xi[3],
                    }
                } else {
                    HeightOneCoords::Generic {
                        z2: c(xi[0], xi[1]),
                        w2: c(xi[2], xi[3]),
                    }
                };
                slice_height_one(p, q, coords)
            }
            Family::HeightTwo { p } => {
                if p == 0.0 {
                    slice_height_two_central(Quat::new(xi[0], xi[1], xi[2], xi[3]))
                } else {
                    slice_height_two(p, xi[0], c(xi[1], xi[2]), xi[3])
                }
            }
            Family::Bergman { .. } => slice_bergman(xi),
        }
    }

    /// Slice point in the u-basis chart `U_0`, where the ambient metric is evaluated.
    pub fn embed_u(&self, xi: &[f64; 4]) -> Result<ChartPoint> {
        let pt = self.embed(xi)?;
        match pt.basis {
            Basis::U => Ok(pt),
            Basis::VTilde => to_chart(&basis_change_inverse(&from_chart(&pt))?, 0),
        }
    }

    pub fn in_domain(&self, xi: &[f64; 4]) -> bool {
        self.embed(xi).is_ok()
    }

    /// Generator acting on u-basis homogeneous coordinates.
    pub fn generator_u(&self) -> Result<HMat3<f64>> {
        let m = self.family.generator_matrix()?;
        Ok(m.rebase(self.family.basis(), Basis::U))
    }

    /// Killing field at a u-chart point.
    pub fn killing_u(&self, p: &ChartPoint) -> Result<Vec<Quaternion>> {
        if p.basis != Basis::U {
            return Err(Error::Contract("expected a u-chart point".into()));
        }
        killing_with(&self.generator_u()?, p)
    }

    /// Moment residual `|f|` at the slice point.
    pub fn moment_residual(&self, xi: &[f64; 4]) -> Result<f64> {
        Ok(f_inhomog(&self.family, &self.embed(xi)?)?.norm())
    }

    /// Finite-difference steps resolving the chart's coordinate scale.
    pub fn default_steps(&self) -> FdSteps {
        match self.family {
            Family::Pl { .. } => FdSteps {
                inner: 1e-3,
                outer: 2.5e-3,
            },
            _ => FdSteps::default(),
        }
    }

    /// Interior sampling box used by the verification runs.
    pub fn default_box(&self) -> GridBox {
        match self.family {
            Family::Pl { .. } => [(-0.1, 0.1), (-0.1, 0.1), (-0.05, 0.05), (-0.05, 0.05)],
            Family::GenPedersen { .. } | Family::Bergman { .. } => [(-0.2, 0.2); 4],
            Family::HeightOne { p: 0.0, .. } => {
                [(-1.5, -0.9), (-0.3, 0.3), (-0.3, 0.3), (-0.3, 0.3)]
            }
            Family::HeightOne { p, q } => {
                // a ball around the most interior point of the quadric domain
                let (a, b) = (p - q, p + q);
                let (cz, cw) = if p > 0.0 {
                    if a < b {
                        ((2.0 / -a).sqrt(), 0.0)
                    } else {
                        (0.0, (2.0 / -b).sqrt())
                    }
                } else {
                    (0.0, 0.0)
                };
                [
                    (cz - 0.15, cz + 0.15),
                    (-0.15, 0.15),
                    (cw - 0.15, cw + 0.15),
                    (-0.15, 0.15),
                ]
            }
            Family::HeightTwo { p: 0.0 } => [(-1.5, -0.7), (-0.3, 0.3), (-0.3, 0.3), (-0.3, 0.3)],
            Family::HeightTwo { p } => {
                let s = p.signum();
                [(s * 0.8, s * 1.2), (-0.3, 0.3), (-0.3, 0.3), (-0.3, 0.3)]
            }
        }
    }
}

fn integer_weights(p: [f64; 3]) -> Result<WeightTriple> {
    if p.iter().any(|v| v.fract() != 0.0) {
        return Err(Error::Parameter(format!(
            "circle weights must be integers, got {p:?}"
        )));
    }
    WeightTriple::new(p[0] as i64, p[1] as i64, p[2] as i64)
}

/// `count` evenly spaced values per axis (the midpoint when `count = 1`).
pub fn grid_points(bx: &GridBox, count: usize) -> Vec<[f64; 4]> {
    let axis = |(lo, hi): (f64, f64)| -> Vec<f64> {
        if count <= 1 {
            vec![(lo + hi) / 2.0]
        } else {
            (0..count)
                .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                .collect()
        }
    };
    let ax: Vec<Vec<f64>> = bx.iter().map(|&r| axis(r)).collect();
    let mut out = Vec::new();
    for &a in &ax[0] {
        for &b in &ax[1] {
            for &c in &ax[2] {
                for &d in &ax[3] {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_pedersen_examples() {
        let p = slice_gen_pedersen(1.5, 0.7, Quat::zero()).unwrap();
        assert!(p.coords[0].dist(Quat::new(-0.5, -0.75, 0.0, 0.0)) < 1e-15);
        let p = slice_gen_pedersen(0.0, 0.0, Quat::zero()).unwrap();
        assert_eq!(p.coords[0], Quat::real(-0.5));
    }

    #[test]
    fn height_one_domain_examples() {
        let c = |a: f64| C64::new(a, 0.0);
        let s = 2f64.sqrt();
        assert!(slice_height_one(
            1.0,
            2.0,
            HeightOneCoords::Generic {
                z2: c(s),
                w2: c(0.0)
            }
        )
        .is_ok());
        assert!(slice_height_one(
            -1.0,
            0.0,
            HeightOneCoords::Generic {
                z2: c(0.0),
                w2: c(0.0)
            }
        )
        .is_ok());
        for z in [0.0, 0.5, 3.0] {
            for w in [0.0, 0.5, 3.0] {
                assert!(slice_height_one(
                    1.0,
                    1.0,
                    HeightOneCoords::Generic { z2: c(z), w2: c(w) }
                )
                .is_err());
            }
        }
    }

    #[test]
    fn height_two_example() {
        let p = slice_height_two(1.0, 1.0, C64::new(0.0, 0.0), 0.0).unwrap();
        assert!((2.0 * p.coords[0].re() + 3.0).abs() < 1e-15);
    }

    #[test]
    fn pl_example() {
        let w = WeightTriple::new(1, 2, 1).unwrap();
        let p = slice_pl(
            &w,
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        )
        .unwrap();
        assert!((p.coords[0].norm_sqr() - 0.5).abs() < 1e-15);
        assert_eq!(
            pl_domain_function(&w, C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
            -1.0
        );
    }

    #[test]
    fn bergman_base_point() {
        let p = slice_bergman(&[0.0; 4]).unwrap();
        assert_eq!(p.coords, vec![Quat::j(), Quat::zero()]);
    }
}
