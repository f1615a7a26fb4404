//! Moment maps of the generator families, zero-set sampling, and the existence and
//! freeness criteria for weighted circle actions.

use nalgebra::{Matrix3, SMatrix, Vector3};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hnum::expm::exp_t0_diag;
use crate::hnum::{from_chart, to_chart, Basis, ChartPt, HMat3, HVec, ImQuat, Quat};
use crate::orbits::{make_normal_form, GeneratorForm, Sp12Element};
use crate::{ChartPoint, HVector, Quaternion};

/// Value of a moment map; the real part is dropped after checking it vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentValue {
    pub value: ImQuat<f64>,
}

impl MomentValue {
    fn from_quat(q: Quaternion) -> Self {
        debug_assert!(
            q.re().abs() <= 1e-9 * (1.0 + q.norm()),
            "moment has real part {}",
            q.re()
        );
        Self { value: q.im() }
    }

    pub fn norm(&self) -> f64 {
        self.value.norm()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Integer circle weights with `gcd = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightTriple {
    pub p: [i64; 3],
}

impl WeightTriple {
    pub fn new(p0: i64, p1: i64, p2: i64) -> Result<Self> {
        if gcd(gcd(p0, p1), p2) != 1 {
            return Err(Error::Parameter(format!(
                "weights ({p0},{p1},{p2}) must have gcd 1"
            )));
        }
        Ok(Self { p: [p0, p1, p2] })
    }

    pub fn all_odd(&self) -> bool {
        self.p.iter().all(|v| v % 2 != 0)
    }

    /// Length of the effective circle in `t` for the action `e^{2πi p t}`: −1 acts trivially on the
    /// projective space exactly when every weight is odd.
    pub fn effective_period(&self) -> f64 {
        if self.all_odd() {
            0.5
        } else {
            1.0
        }
    }

    pub fn as_f64(&self) -> [f64; 3] {
        self.p.map(|v| v as f64)
    }
}

/// Quotient families handled by the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Family {
    /// Weighted circle `diag(ip0, ip1, ip2)` on the ball in H^{1,2}.
    Pl { p: [f64; 3] },
    /// `T̃0(1,p,q)` on the ball.
    GenPedersen { p: f64, q: f64 },
    /// `T̃1(1,p,q)` on the ball.
    HeightOne { p: f64, q: f64 },
    /// `T̃2(1,p)` on the ball.
    HeightTwo { p: f64 },
    /// Weighted circle on Proj(H^{2,1}_-).
    Bergman { p: [f64; 3] },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Pl { .. } => "pl",
            Self::GenPedersen { .. } => "gen-pedersen",
            Self::HeightOne { .. } => "height-one",
            Self::HeightTwo { .. } => "height-two",
            Self::Bergman { .. } => "bergman",
        }
    }

    /// Basis of the homogeneous coordinates the family is written in.
    pub fn basis(&self) -> Basis {
        match self {
            Self::Pl { .. } | Self::Bergman { .. } => Basis::U,
            _ => Basis::VTilde,
        }
    }

    /// Signature `(k, l)` of the ambient space.
    pub fn signature(&self) -> (usize, usize) {
        match self {
            Self::Bergman { .. } => (2, 1),
            _ => (1, 2),
        }
    }

    /// Normal form generating the action (ball families only).
    pub fn generator_form(&self) -> Option<GeneratorForm> {
        match *self {
            Self::Pl { p } => Some(GeneratorForm::T0Diag { p }),
            Self::GenPedersen { p, q } => Some(GeneratorForm::T0Split { lambda: 1.0, p, q }),
            Self::HeightOne { p, q } => Some(GeneratorForm::T1 { lambda: 1.0, p, q }),
            Self::HeightTwo { p } => Some(GeneratorForm::T2 { lambda: 1.0, p }),
            Self::Bergman { .. } => None,
        }
    }

    /// Generator as an sp(1,2) element in the family's basis.
    pub fn generator(&self) -> Result<Sp12Element> {
        let f = self.generator_form().ok_or_else(|| {
            Error::Contract("the H^{2,1} circle is not an sp(1,2) element here".into())
        })?;
        make_normal_form(f, self.basis())
    }

    /// Generator matrix acting on homogeneous coordinates.
    pub fn generator_matrix(&self) -> Result<HMat3<f64>> {
        match *self {
            Self::Bergman { p } => Ok(HMat3::diag(p.map(|v| Quat::complex(0.0, v)))),
            _ => self.generator_form().unwrap().matrix(self.basis()),
        }
    }

    /// `exp(t Δ)` acting on homogeneous coordinates.
    pub fn flow(&self, t: f64) -> Result<HMat3<f64>> {
        match *self {
            Self::Bergman { p } => Ok(exp_t0_diag(p, t)),
            _ => self.generator_form().unwrap().exp_closed(self.basis(), t),
        }
    }
}

/// `μ_T(u) = u† 𝔽 T u` in the basis of `t`.
pub fn mu_general(t: &Sp12Element, u: &HVector) -> Result<MomentValue> {
    if u.basis != t.basis || (u.k, u.l) != (1, 2) {
        return Err(Error::Contract("generator and vector bases differ".into()));
    }
    let c = u.as3()?;
    let fu = (HMat3::form(t.basis) * t.matrix).mul_vec(&c);
    let q = (0..3).fold(Quat::zero(), |acc, a| acc + c[a].conj() * fu[a]);
    Ok(MomentValue::from_quat(q))
}

fn cic(x: Quaternion) -> Quaternion {
    x.conj() * Quat::i() * x
}

/// Homogeneous moment map of a family (covers the H^{2,1} circle too).
pub fn mu_family(family: &Family, u: &HVector) -> Result<MomentValue> {
    if u.basis != family.basis() || (u.k, u.l) != family.signature() {
        return Err(Error::Contract(format!(
            "vector does not live in the {} ambient space",
            family.name()
        )));
    }
    match *family {
        Family::Bergman { p } => {
            let c = &u.comps;
            let q = cic(c[0]) * (-p[0]) - cic(c[1]) * p[1] + cic(c[2]) * p[2];
            Ok(MomentValue::from_quat(q))
        }
        _ => mu_general(&family.generator()?, u),
    }
}

fn chart_pair(family: &Family, pt: &ChartPoint) -> Result<(Quaternion, Quaternion)> {
    if pt.basis != family.basis()
        || pt.beta != 0
        || pt.coords.len() != 2
        || (pt.k, pt.l) != family.signature()
    {
        return Err(Error::Contract(format!(
            "chart point does not match the {} chart",
            family.name()
        )));
    }
    Ok((pt.coords[0], pt.coords[1]))
}

/// Moment map in inhomogeneous coordinates (the homogeneous one with `u_0 = 1` or `v_0 = 1`).
pub fn f_inhomog(family: &Family, pt: &ChartPoint) -> Result<MomentValue> {
    let (a, b) = chart_pair(family, pt)?;
    let i = Quat::i();
    let q = match *family {
        Family::Pl { p } => i * (-p[0]) + cic(a) * p[1] + cic(b) * p[2],
        Family::GenPedersen { p, q } => a.conj() - a + (a.conj() * i + i * a) * p + cic(b) * q,
        Family::HeightOne { p, q } => -i + (i * a + a.conj() * i) * p + cic(b) * q,
        Family::HeightTwo { p } => i * b + b.conj() * i + (i * a + a.conj() * i) * p + cic(b) * p,
        Family::Bergman { p } => i * (-p[0]) - cic(a) * p[1] + cic(b) * p[2],
    };
    Ok(MomentValue::from_quat(q))
}

/// Nonempty zero set of the weighted circle on the ball: `max(|p1/p0|, |p2/p0|) > 1`.
pub fn zeroset_nonempty(p: &WeightTriple) -> Result<bool> {
    let [p0, p1, p2] = p.p;
    if p0 == 0 {
        return Err(Error::Degenerate(
            "p0 = 0 gives a degenerate quotient".into(),
        ));
    }
    Ok(p1.abs() > p0.abs() || p2.abs() > p0.abs())
}

/// Freeness on the zero set, for positive weights with `p1 > p0`.
pub fn action_free(p: &WeightTriple) -> Result<bool> {
    let [p0, p1, p2] = p.p;
    if p0 <= 0 || p1 <= 0 || p2 <= 0 || p1 <= p0 {
        return Err(Error::Contract(format!(
            "expected positive weights with p1 > p0, got {:?}",
            p.p
        )));
    }
    Ok(if p.all_odd() {
        p1 == p0 + 2 && p2 <= p0 + 2
    } else {
        p1 == p0 + 1 && p2 <= p0 + 1
    })
}

/// Circle of fixed points exhibiting an orbifold singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessLocus {
    /// `z1 = z2 = w2 = 0`, `|w1|² = p0/p1`.
    W1Circle,
    /// `z1 = w1 = w2 = 0`, `|z2|² = p0/p2`.
    Z2Circle,
    /// A point fixed by the whole circle (a vanishing weight).
    FixedPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BergmanVerdict {
    Smooth,
    Orbifold { order: i64, locus: WitnessLocus },
}

/// Smoothness of the weighted quotient of Proj(H^{2,1}_-); witnesses follow the isotropy orders
/// `Z_{p0+p1}` and `Z_{(p2+p0)/2}`, halved when all weights are odd.
pub fn bergman_smooth(p: &WeightTriple) -> Result<BergmanVerdict> {
    let [p0, p1, p2] = p.p;
    if p0 < 0 || p1 < 0 || p2 < 0 {
        return Err(Error::Contract("weights must be nonnegative".into()));
    }
    if p0 == 0 || p1 == 0 {
        return Ok(BergmanVerdict::Orbifold {
            order: 0,
            locus: WitnessLocus::FixedPoint,
        });
    }
    let eff = |n: i64| if p.all_odd() { n / 2 } else { n };
    let w1 = eff(p0 + p1);
    if w1 > 1 {
        return Ok(BergmanVerdict::Orbifold {
            order: w1,
            locus: WitnessLocus::W1Circle,
        });
    }
    let w2 = eff(p2 + p0);
    if w2 > 1 {
        return Ok(BergmanVerdict::Orbifold {
            order: w2,
            locus: WitnessLocus::Z2Circle,
        });
    }
    Ok(BergmanVerdict::Smooth)
}

/// Point of the `W1Circle` witness locus at angle `theta`, in the chart `U_0`.
pub fn bergman_w1_witness(p: &WeightTriple, theta: f64) -> Result<ChartPoint> {
    let [p0, p1, _] = p.as_f64();
    let r = (p0 / p1).sqrt();
    // x1 = j w̄1 with w1 = r e^{iθ}
    let x1 = Quat::j() * Quat::complex(r * theta.cos(), -r * theta.sin());
    ChartPt::u0(2, 1, vec![x1, Quat::zero()])
}

/// Tolerance on `|f|` for accepted zero-set samples.
pub const ZEROSET_TOL: f64 = 1e-10;
/// Gauss–Newton iterations per start.
pub const MAX_ITER: usize = 50;
/// Minimum number of random starts.
pub const MIN_STARTS: usize = 200;

fn unflatten(v: &[f64; 8]) -> (Quaternion, Quaternion) {
    (
        Quat::new(v[0], v[1], v[2], v[3]),
        Quat::new(v[4], v[5], v[6], v[7]),
    )
}

fn chart_point(family: &Family, v: &[f64; 8]) -> ChartPoint {
    let (a, b) = unflatten(v);
    let (k, l) = family.signature();
    ChartPt {
        beta: 0,
        k,
        l,
        basis: family.basis(),
        coords: vec![a, b],
    }
}

fn residual(family: &Family, v: &[f64; 8]) -> Vector3<f64> {
    let m = f_inhomog(family, &chart_point(family, v))
        .expect("chart matches family")
        .value;
    Vector3::new(m.x, m.y, m.z)
}

/// Margin by which accepted points must sit inside the negative region.
const REGION_MARGIN: f64 = 1e-9;

fn inside(family: &Family, v: &[f64; 8]) -> bool {
    chart_point(family, v).defect() > REGION_MARGIN
}

/// Jacobian of the quadratic moment map; polarization makes the central difference exact.
fn jacobian(family: &Family, v: &[f64; 8]) -> SMatrix<f64, 3, 8> {
    let mut j = SMatrix::<f64, 3, 8>::zeros();
    for c in 0..8 {
        let mut plus = *v;
        let mut minus = *v;
        plus[c] += 1.0;
        minus[c] -= 1.0;
        j.set_column(
            c,
            &((residual(family, &plus) - residual(family, &minus)) * 0.5),
        );
    }
    j
}

fn random_start(family: &Family, rng: &mut ChaCha8Rng) -> [f64; 8] {
    let mut gauss = || {
        let u1: f64 = rng.random::<f64>().max(1e-300);
        let u2: f64 = rng.random();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let mut v = [0.0; 8];
    for x in v.iter_mut() {
        *x = gauss();
    }
    match family {
        Family::Pl { .. } => {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let r = rng.random::<f64>().powf(1.0 / 8.0) * 0.999;
            v.iter_mut().for_each(|x| *x *= r / n);
        }
        Family::Bergman { .. } => {
            v.iter_mut().for_each(|x| *x *= 0.6);
        }
        _ => {
            for x in v[4..].iter_mut() {
                *x *= 0.6;
            }
            let y2sq: f64 = v[4..].iter().map(|x| x * x).sum();
            let depth: f64 = -rng.random::<f64>().max(1e-12).ln();
            v[0] = -(y2sq / 2.0) - depth;
        }
    }
    v
}

fn newton(family: &Family, mut v: [f64; 8]) -> Option<[f64; 8]> {
    let mut r = residual(family, &v);
    for _ in 0..MAX_ITER {
        if r.norm() < 1e-13 {
            break;
        }
        let j = jacobian(family, &v);
        let jjt: Matrix3<f64> = j * j.transpose();
        let w = jjt.try_inverse()? * r;
        let step = -(j.transpose() * w);
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let mut trial = v;
            for c in 0..8 {
                trial[c] += alpha * step[c];
            }
            let rt = residual(family, &trial);
            if inside(family, &trial) && rt.norm() < r.norm() {
                v = trial;
                r = rt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (r.norm() < ZEROSET_TOL && inside(family, &v)).then_some(v)
}

/// Zero-set points found by damped Gauss–Newton from seeded random starts, returned as homogeneous
/// vectors (`u_0 = 1` or `v_0 = 1`) in the family's basis. Deterministic for a given seed.
pub fn zeroset_sample(family: &Family, seed: u64, count: usize) -> Result<Vec<HVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts = MIN_STARTS.max(4 * count);
    let mut found: Vec<[f64; 8]> = Vec::new();
    for _ in 0..starts {
        if found.len() >= count.max(1) {
            break;
        }
        let v0 = random_start(family, &mut rng);
        if let Some(v) = newton(family, v0) {
            let fresh = found.iter().all(|w| {
                w.iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
                    > 1e-6
            });
            if fresh {
                found.push(v);
            }
        }
    }
    if found.is_empty() {
        return Err(Error::SearchFailure { starts });
    }
    Ok(found
        .iter()
        .map(|v| from_chart(&chart_point(family, v)))
        .collect())
}

/// Chart point of a homogeneous sample (`u_0 ≠ 0`).
pub fn sample_chart(u: &HVector) -> Result<ChartPoint> {
    to_chart(u, 0)
}

/// Convenience: homogeneous vector with `u_0 = 1` in the family's basis.
pub fn lift(family: &Family, x1: Quaternion, x2: Quaternion) -> HVector {
    let (k, l) = family.signature();
    HVec {
        k,
        l,
        basis: family.basis(),
        comps: vec![Quat::one(), x1, x2],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: i64, b: i64, c: i64) -> WeightTriple {
        WeightTriple::new(a, b, c).unwrap()
    }

    #[test]
    fn nonempty_examples() {
        assert!(!zeroset_nonempty(&w(1, 1, 1)).unwrap());
        assert!(zeroset_nonempty(&w(1, 2, 1)).unwrap());
        assert!(!zeroset_nonempty(&w(3, 2, 2)).unwrap());
        assert!(zeroset_nonempty(&WeightTriple { p: [0, 1, 1] }).is_err());
    }

    #[test]
    fn freeness_examples() {
        assert!(action_free(&w(2, 3, 3)).unwrap());
        assert!(action_free(&w(1, 3, 3)).unwrap());
        assert!(!action_free(&w(2, 4, 1)).unwrap());
        assert!(action_free(&w(3, 2, 1)).is_err());
    }

    #[test]
    fn bergman_examples() {
        assert_eq!(bergman_smooth(&w(1, 1, 1)).unwrap(), BergmanVerdict::Smooth);
        assert_eq!(
            bergman_smooth(&w(1, 1, 3)).unwrap(),
            BergmanVerdict::Orbifold {
                order: 2,
                locus: WitnessLocus::Z2Circle
            }
        );
        assert_eq!(
            bergman_smooth(&w(2, 1, 1)).unwrap(),
            BergmanVerdict::Orbifold {
                order: 3,
                locus: WitnessLocus::W1Circle
            }
        );
    }

    #[test]
    fn pl_chart_example() {
        // x1 = z1 with |z1|² = 1/2 gives x̄1 i x1 = i/2, so −i + 2·(i/2) = 0
        let fam = Family::Pl { p: [1.0, 2.0, 2.0] };
        let s = 0.5f64.sqrt();
        let pt = ChartPt::u0(1, 2, vec![Quat::complex(s, 0.0), Quat::zero()]).unwrap();
        assert!(f_inhomog(&fam, &pt).unwrap().norm() < 1e-15);
    }

    #[test]
    fn height_two_p0_example() {
        let fam = Family::HeightTwo { p: 0.0 };
        let pt = ChartPt::vt(Quat::new(-0.4, 0.0, 0.3, -0.2), Quat::zero());
        assert_eq!(f_inhomog(&fam, &pt).unwrap().norm(), 0.0);
    }

    #[test]
    fn sampler_is_deterministic() {
        let fam = Family::Pl { p: [1.0, 2.0, 2.0] };
        let a = zeroset_sample(&fam, 7, 3).unwrap();
        let b = zeroset_sample(&fam, 7, 3).unwrap();
        assert_eq!(a, b);
    }
}
