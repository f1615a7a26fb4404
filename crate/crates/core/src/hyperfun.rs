//! Hyperbolic eigenfunctions on the half-plane, the Grammian map, and the pullback of the
//! homogeneity-1/2 lift to momentum zero sets.

use nalgebra::{Matrix2, SMatrix, Vector2};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hnum::{form_f, form_vtilde, Basis, Quat};
use crate::{HVector, ImQuaternion};

type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    pub rho: f64,
    pub eta: f64,
}

impl HalfPlanePoint {
    pub fn new(rho: f64, eta: f64) -> Result<Self> {
        if rho <= 0.0 || !rho.is_finite() || !eta.is_finite() {
            return Err(Error::Domain(format!(
                "half-plane point needs ρ > 0, got ({rho}, {eta})"
            )));
        }
        Ok(Self { rho, eta })
    }
}

/// Monopole `charge·√(a²ρ² + (aη − b)²)/√ρ` sourced at the boundary point `b/a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealPole {
    pub a: f64,
    pub b: f64,
    pub charge: f64,
}

/// `a/√ρ + ((b+ic)/2)√(ρ²+(η+i)²)/√ρ + ((b−ic)/2)√(ρ²+(η−i)²)/√ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPair {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PoleSet {
    pub real_poles: Vec<RealPole>,
    pub complex_pair: Option<ComplexPair>,
    pub dipole_coeff: f64,
    pub tripole_coeff: f64,
}

/// Points closer than this to a branch cut or singular locus are rejected.
pub const SINGULAR_MARGIN: f64 = 1e-2;

impl PoleSet {
    pub fn monopole(a: f64, b: f64) -> Self {
        Self {
            real_poles: vec![RealPole { a, b, charge: 1.0 }],
            ..Self::default()
        }
    }

    pub fn dipole() -> Self {
        Self {
            dipole_coeff: 1.0,
            ..Self::default()
        }
    }

    pub fn tripole() -> Self {
        Self {
            tripole_coeff: 1.0,
            ..Self::default()
        }
    }

    pub fn pedersen(a: f64, b: f64, c: f64) -> Self {
        Self {
            complex_pair: Some(ComplexPair { a, b, c }),
            ..Self::default()
        }
    }

    /// Signed monopoles with columns `(−b_j, a_j)` and charges `ε_j`.
    pub fn multipole(a: [f64; 3], b: [f64; 3], charges: [f64; 3]) -> Self {
        let real_poles = (0..3)
            .map(|j| RealPole {
                a: a[j],
                b: b[j],
                charge: charges[j],
            })
            .collect();
        Self {
            real_poles,
            ..Self::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.real_poles
            .iter()
            .all(|p| p.charge == 0.0 || (p.a == 0.0 && p.b == 0.0))
            && self
                .complex_pair
                .is_none_or(|c| c.a == 0.0 && c.b == 0.0 && c.c == 0.0)
            && self.dipole_coeff == 0.0
            && self.tripole_coeff == 0.0
    }

    /// Distance to the branch cut `{η = 0, ρ ≤ 1}` of the complex pair, if present.
    pub fn branch_distance(&self, p: &HalfPlanePoint) -> f64 {
        match self.complex_pair {
            Some(c) if c.b != 0.0 || c.c != 0.0 => {
                if p.rho <= 1.0 {
                    p.eta.abs()
                } else {
                    ((p.rho - 1.0).powi(2) + p.eta * p.eta).sqrt()
                }
            }
            _ => f64::INFINITY,
        }
    }

    /// Distance to the branch point `(1, 0)` of the complex pair, if present.
    pub fn branch_point_distance(&self, p: &HalfPlanePoint) -> f64 {
        match self.complex_pair {
            Some(c) if c.b != 0.0 || c.c != 0.0 => ((p.rho - 1.0).powi(2) + p.eta * p.eta).sqrt(),
            _ => f64::INFINITY,
        }
    }
}

fn monopole_term(a: f64, b: f64, p: &HalfPlanePoint) -> f64 {
    (a * a * p.rho * p.rho + (a * p.eta - b).powi(2)).sqrt() / p.rho.sqrt()
}

fn dipole_term(p: &HalfPlanePoint) -> f64 {
    p.eta / (p.rho.sqrt() * (p.rho * p.rho + p.eta * p.eta).sqrt())
}

fn tripole_term(p: &HalfPlanePoint) -> f64 {
    0.5 * p.rho.powf(1.5) / (p.rho * p.rho + p.eta * p.eta).powf(1.5)
}

/// Evaluates the eigenfunction; the complex pair is checked to sum to a real number.
pub fn eval_f(poles: &PoleSet, p: &HalfPlanePoint) -> Result<f64> {
    if p.rho <= 0.0 {
        return Err(Error::Domain(format!("ρ = {} must be positive", p.rho)));
    }
    if let Some(d) = poles.complex_pair.map(|_| poles.branch_distance(p)) {
        if d < SINGULAR_MARGIN {
            return Err(Error::Domain(format!("within {d:.3e} of the branch cut")));
        }
    }
    eval_near_cut(poles, p)
}

/// `eval_f` without the distance check against the branch cut.
fn eval_near_cut(poles: &PoleSet, p: &HalfPlanePoint) -> Result<f64> {
    let mut f = 0.0;
    for pole in &poles.real_poles {
        f += pole.charge * monopole_term(pole.a, pole.b, p);
    }
    if let Some(c) = poles.complex_pair {
        let s = p.rho.sqrt();
        let term = |sign: f64| {
            let w = C64::new(p.rho * p.rho + p.eta * p.eta - 1.0, 2.0 * sign * p.eta).sqrt();
            C64::new(c.b, sign * c.c) * 0.5 * w / s
        };
        let pair = term(1.0) + term(-1.0);
        if pair.im.abs() > 1e-12 * (1.0 + pair.re.abs()) {
            return Err(Error::Internal(format!(
                "complex pair has imaginary part {}",
                pair.im
            )));
        }
        f += c.a / s + pair.re;
    }
    f += poles.dipole_coeff * dipole_term(p);
    f += poles.tripole_coeff * tripole_term(p);
    Ok(f)
}

/// `|ρ²(F_ρρ + F_ηη) − (3/4)F|` with 4th-order central differences at steps h and 2h,
/// Richardson-combined to 6th order.
/// The step balances truncation against roundoff: 5e-3·ρ for the real terms and
/// 1e-2 of the distance to the branch point for the complex pair.
pub fn laplace_check(poles: &PoleSet, p: &HalfPlanePoint) -> Result<f64> {
    let cut = poles.branch_distance(p);
    if p.rho.min(cut) < SINGULAR_MARGIN {
        return Err(Error::Domain(format!(
            "point within {:.3e} of a singular locus",
            p.rho.min(cut)
        )));
    }
    // the stencil stays on one side of the cut; F itself is only singular at the branch point
    let h = (5e-3 * p.rho)
        .min(1e-2 * poles.branch_point_distance(p))
        .min(cut / 5.0);
    let at = |dr: f64, de: f64| {
        eval_near_cut(
            poles,
            &HalfPlanePoint {
                rho: p.rho + dr,
                eta: p.eta + de,
            },
        )
    };
    let f0 = at(0.0, 0.0)?;
    let laplacian = |h: f64| -> Result<f64> {
        let mut lap = 0.0;
        for dir in [(1.0, 0.0), (0.0, 1.0)] {
            let mut s = -30.0 * f0;
            for (o, c) in [(-2.0, -1.0), (-1.0, 16.0), (1.0, 16.0), (2.0, -1.0)] {
                s += c * at(o * h * dir.0, o * h * dir.1)?;
            }
            lap += s / (12.0 * h * h);
        }
        Ok(lap)
    };
    let lap = (16.0 * laplacian(h)? - laplacian(2.0 * h)?) / 15.0;
    Ok((p.rho * p.rho * lap - 0.75 * f0).abs())
}

/// Normalized Gram matrix of an indecomposable pair (determinant 1).
pub fn grammian(x1: ImQuaternion, x2: ImQuaternion) -> Result<Matrix2<f64>> {
    let w = x1.cross(x2).norm();
    if w <= 1e-12 {
        return Err(Error::Degenerate(format!(
            "decomposable pair: |x1 ∧ x2| = {w:.3e}"
        )));
    }
    let d = x1.dot(x2);
    Ok(Matrix2::new(x1.norm_sqr(), d, d, x2.norm_sqr()) / w)
}

/// Unnormalized Gram matrix.
pub fn gram(x1: ImQuaternion, x2: ImQuaternion) -> Matrix2<f64> {
    let d = x1.dot(x2);
    Matrix2::new(x1.norm_sqr(), d, d, x2.norm_sqr())
}

pub fn halfplane_from_gram(a: &Matrix2<f64>) -> Result<HalfPlanePoint> {
    let det = a.determinant();
    if a[(0, 0)] <= 0.0 || det <= 0.0 {
        return Err(Error::Domain("Gram matrix is not positive definite".into()));
    }
    if (det - 1.0).abs() > 1e-9 {
        return Err(Error::Contract(format!("determinant {det} is not 1")));
    }
    Ok(HalfPlanePoint {
        rho: 1.0 / a[(0, 0)],
        eta: a[(0, 1)] / a[(0, 0)],
    })
}

pub fn gram_from_halfplane(p: &HalfPlanePoint) -> Matrix2<f64> {
    let (r, e) = (p.rho, p.eta);
    Matrix2::new(1.0 / r, e / r, e / r, (r * r + e * e) / r)
}

/// Homogeneity-1/2 lift `F̃(A) = (det A)^{1/4} F(A/√det A)`.
pub fn lift_f(poles: &PoleSet, a: &Matrix2<f64>) -> Result<f64> {
    let det = a.determinant();
    if a[(0, 0)] <= 0.0 || det <= 0.0 {
        return Err(Error::Domain("Gram matrix is not positive definite".into()));
    }
    let p = halfplane_from_gram(&(a / det.sqrt()))?;
    Ok(det.powf(0.25) * eval_f(poles, &p)?)
}

/// Families whose maximal Abelian subalgebra fixes the momentum coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum TorusFamily {
    /// Weighted circle inside the diagonal torus (u basis).
    Diagonal { p: [f64; 3] },
    /// `T̃1(1,p,q)` inside its maximal Abelian subalgebra (ṽ basis).
    HeightOne { p: f64, q: f64 },
    /// `T̃2(1,p)` inside `span(i𝟙, T2, T1)` (ṽ basis).
    HeightTwo { p: f64 },
}

impl TorusFamily {
    pub fn basis(&self) -> Basis {
        match self {
            Self::Diagonal { .. } => Basis::U,
            _ => Basis::VTilde,
        }
    }
}

fn cic(a: Quat<f64>, b: Quat<f64>) -> Quat<f64> {
    a.conj() * Quat::i() * b
}

/// Momentum coordinates `(y0, y1, y2)` of the maximal Abelian subalgebra.
pub fn torus_moment_coords(family: &TorusFamily, u: &HVector) -> Result<[ImQuaternion; 3]> {
    if u.basis != family.basis() {
        return Err(Error::Contract(format!(
            "vector is in the {:?} basis, family needs {:?}",
            u.basis,
            family.basis()
        )));
    }
    let v = u.as3()?;
    let y = match family {
        TorusFamily::Diagonal { .. } => [cic(v[0], v[0]), cic(v[1], v[1]), cic(v[2], v[2])],
        TorusFamily::HeightOne { .. } => [
            cic(v[1], v[0]) + cic(v[0], v[1]),
            -cic(v[0], v[0]),
            cic(v[2], v[2]),
        ],
        TorusFamily::HeightTwo { .. } => [
            cic(v[1], v[0]) + cic(v[0], v[1]) + cic(v[2], v[2]),
            cic(v[2], v[0]) + cic(v[0], v[2]),
            -cic(v[0], v[0]),
        ],
    };
    Ok(y.map(|q| q.im()))
}

/// The quadratic form written in momentum coordinates.
pub fn quadratic_in_moments(family: &TorusFamily, y: &[ImQuaternion; 3]) -> Result<f64> {
    match family {
        TorusFamily::Diagonal { .. } => Ok(-y[0].norm() + y[1].norm() + y[2].norm()),
        TorusFamily::HeightOne { .. } => {
            let n1 = y[1].norm();
            if n1 <= 1e-10 {
                return Err(Error::Degenerate("|y1| vanishes".into()));
            }
            Ok(-y[0].dot(y[1]) / n1 + y[2].norm())
        }
        TorusFamily::HeightTwo { .. } => {
            let n2 = y[2].norm();
            if n2 <= 1e-10 {
                return Err(Error::Degenerate("|y2| vanishes".into()));
            }
            let d12 = y[1].dot(y[2]);
            let num = y[1].norm_sqr() * n2 * n2 - d12 * d12 - 2.0 * y[0].dot(y[2]) * n2 * n2;
            Ok(num / (2.0 * n2.powi(3)))
        }
    }
}

/// The invariant quadratic form `F(u,u)` in the family's basis.
pub fn quadratic_form(family: &TorusFamily, u: &HVector) -> Result<f64> {
    Ok(match family.basis() {
        Basis::U => form_f(1, 2, u, u)?.re(),
        Basis::VTilde => form_vtilde(u, u)?.re(),
    })
}

/// Eigenfunction with its zero-set parameterization `y_j = M_j0 x1 + M_j1 x2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientEigenfunction {
    pub poles: PoleSet,
    pub param: [[f64; 2]; 3],
}

/// Diagonal family from any kernel basis `(a, b)` of the weights.
pub fn diagonal_eigenfunction(
    p: [f64; 3],
    a: [f64; 3],
    b: [f64; 3],
) -> Result<QuotientEigenfunction> {
    let dot = |v: [f64; 3]| v[0] * p[0] + v[1] * p[1] + v[2] * p[2];
    let scale = p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if dot(a).abs() > 1e-12 * scale || dot(b).abs() > 1e-12 * scale {
        return Err(Error::Parameter(
            "(a, b) must lie in the kernel of the weights".into(),
        ));
    }
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    if cross.iter().all(|v| v.abs() < 1e-12) {
        return Err(Error::Parameter("kernel vectors are dependent".into()));
    }
    let eps = [-1.0, 1.0, 1.0];
    Ok(QuotientEigenfunction {
        poles: PoleSet::multipole(a, b, eps),
        param: std::array::from_fn(|j| [-eps[j] * b[j], eps[j] * a[j]]),
    })
}

/// Pole set and zero-set parameterization for a quotient family.
pub fn eigenfunction_of_quotient(family: &TorusFamily) -> Result<QuotientEigenfunction> {
    match *family {
        TorusFamily::Diagonal { p } => {
            if p.contains(&0.0) {
                return Err(Error::Parameter("weights must be nonzero".into()));
            }
            diagonal_eigenfunction(p, [p[1], -p[0], 0.0], [p[2], 0.0, -p[0]])
        }
        TorusFamily::HeightOne { p, q } => {
            // moment p·y0 + y1 + q·y2 = 0; fix a1 = 1, b1 = 0
            let (a, b) = if q != 0.0 {
                ([0.0, 1.0, -1.0 / q], [1.0, 0.0, -p / q])
            } else if p != 0.0 {
                ([-1.0 / p, 1.0, 0.0], [0.0, 0.0, 1.0])
            } else {
                return Err(Error::Parameter("p = q = 0 has an empty zero set".into()));
            };
            let poles = PoleSet {
                real_poles: vec![
                    RealPole {
                        a: 1.0,
                        b: 0.0,
                        charge: -a[0],
                    },
                    RealPole {
                        a: a[2],
                        b: b[2],
                        charge: 1.0,
                    },
                ],
                dipole_coeff: b[0],
                ..PoleSet::default()
            };
            Ok(QuotientEigenfunction {
                poles,
                param: std::array::from_fn(|j| [-b[j], a[j]]),
            })
        }
        TorusFamily::HeightTwo { p } => {
            // moment y1 + p·y0 = 0: y0 = a0 x1, y1 = a1 x1, y2 = −x2
            let (a0, a1) = (1.0, -p);
            let poles = PoleSet {
                dipole_coeff: a0,
                tripole_coeff: a1 * a1,
                ..PoleSet::default()
            };
            Ok(QuotientEigenfunction {
                poles,
                param: [[a0, 0.0], [a1, 0.0], [0.0, -1.0]],
            })
        }
    }
}

/// Largest acceptable least-squares residual when recovering `(x1, x2)`.
pub const RECOVERY_TOL: f64 = 1e-8;
/// Samples with `|F(u,u)|` below this are skipped.
pub const FORM_FLOOR: f64 = 1e-6;

/// Recovers `(x1, x2)` from the momentum coordinates by least squares.
pub fn recover_x(
    param: &[[f64; 2]; 3],
    y: &[ImQuaternion; 3],
) -> Result<(ImQuaternion, ImQuaternion)> {
    let m = SMatrix::<f64, 3, 2>::from_fn(|j, c| param[j][c]);
    let normal = (m.transpose() * m)
        .try_inverse()
        .ok_or_else(|| Error::Parameter("parameterization has rank < 2".into()))?;
    let pinv = normal * m.transpose();
    let mut x = [[0.0; 3]; 2];
    let mut resid: f64 = 0.0;
    for comp in 0..3 {
        let yc = nalgebra::Vector3::new(
            y[0].to_array()[comp],
            y[1].to_array()[comp],
            y[2].to_array()[comp],
        );
        let sol: Vector2<f64> = pinv * yc;
        resid = resid.max((m * sol - yc).norm());
        x[0][comp] = sol[0];
        x[1][comp] = sol[1];
    }
    let scale = y.iter().fold(1.0f64, |a, v| a.max(v.norm()));
    if resid > RECOVERY_TOL * scale {
        return Err(Error::SampleInconsistent(resid));
    }
    Ok((
        ImQuaternion::from_array(x[0]),
        ImQuaternion::from_array(x[1]),
    ))
}

/// Summary of a pullback run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PullbackReport {
    pub ratios: Vec<f64>,
    pub mean: f64,
    /// `max |ratio − mean| / |mean|`.
    pub deviation: f64,
    pub skipped: usize,
}

/// Ratio `F̃(A)/F(u,u)` over zero-set samples; constancy verifies the pullback identity.
pub fn pullback_check(
    family: &TorusFamily,
    eig: &QuotientEigenfunction,
    samples: &[HVector],
) -> Result<PullbackReport> {
    let mut ratios = Vec::new();
    let mut skipped = 0;
    for u in samples {
        let form = quadratic_form(family, u)?;
        if form.abs() < FORM_FLOOR {
            skipped += 1;
            continue;
        }
        let y = torus_moment_coords(family, u)?;
        let (x1, x2) = recover_x(&eig.param, &y)?;
        ratios.push(lift_f(&eig.poles, &gram(x1, x2))? / form);
    }
    if ratios.is_empty() {
        return Err(Error::Contract("no usable samples".into()));
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let deviation = ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max) / mean.abs();
    Ok(PullbackReport {
        ratios,
        mean,
        deviation,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(x: f64, y: f64, z: f64) -> ImQuaternion {
        ImQuaternion::from_array([x, y, z])
    }

    #[test]
    fn grammian_examples() {
        let g = grammian(im(1.0, 0.0, 0.0), im(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(g, Matrix2::identity());
        let g = grammian(im(2.0, 0.0, 0.0), im(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(g, Matrix2::new(2.0, 0.0, 0.0, 0.5));
        let p = halfplane_from_gram(&g).unwrap();
        assert_eq!((p.rho, p.eta), (0.5, 0.0));
        let p = halfplane_from_gram(&Matrix2::new(2.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!((p.rho, p.eta), (0.5, 0.5));
        assert!(grammian(im(1.0, 0.0, 0.0), im(2.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn eval_examples() {
        let p = HalfPlanePoint::new(1.0, 0.0).unwrap();
        assert_eq!(eval_f(&PoleSet::monopole(1.0, 0.0), &p).unwrap(), 1.0);
        assert_eq!(eval_f(&PoleSet::dipole(), &p).unwrap(), 0.0);
    }

    #[test]
    fn laplace_examples() {
        let cases = [
            (PoleSet::monopole(1.0, 0.0), (1.0, 0.3)),
            (PoleSet::dipole(), (0.7, 0.2)),
            (PoleSet::tripole(), (1.1, -0.4)),
        ];
        for (poles, (r, e)) in cases {
            assert!(laplace_check(&poles, &HalfPlanePoint::new(r, e).unwrap()).unwrap() < 1e-8);
        }
    }

    #[test]
    fn diagonal_kernel_example() {
        let e = eigenfunction_of_quotient(&TorusFamily::Diagonal { p: [1.0, 2.0, 2.0] }).unwrap();
        let a: Vec<f64> = e.poles.real_poles.iter().map(|p| p.a).collect();
        let b: Vec<f64> = e.poles.real_poles.iter().map(|p| p.b).collect();
        assert_eq!(a, vec![2.0, -1.0, 0.0]);
        assert_eq!(b, vec![2.0, 0.0, -1.0]);
    }

    #[test]
    fn height_two_pure_cases() {
        let e = eigenfunction_of_quotient(&TorusFamily::HeightTwo { p: 0.0 }).unwrap();
        assert_eq!((e.poles.dipole_coeff, e.poles.tripole_coeff), (1.0, 0.0));
    }
}
