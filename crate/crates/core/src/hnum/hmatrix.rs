use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::hvector::Basis;
use super::quaternion::Quat;
use crate::scalar::Real;

/// 3×3 quaternionic matrix acting on H^{1,2} from the left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HMat3<T: Real>(pub [[Quat<T>; 3]; 3]);

impl<T: Real> HMat3<T> {
    pub fn zero() -> Self {
        Self([[Quat::zero(); 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag([Quat::one(); 3])
    }

    pub fn diag(d: [Quat<T>; 3]) -> Self {
        let mut m = Self::zero();
        for a in 0..3 {
            m.0[a][a] = d[a];
        }
        m
    }

    /// Matrix with complex entries `a + b i` given as `[re, im]` pairs.
    pub fn from_complex(c: [[[T; 2]; 3]; 3]) -> Self {
        let mut m = Self::zero();
        for r in 0..3 {
            for s in 0..3 {
                m.0[r][s] = Quat::complex(c[r][s][0], c[r][s][1]);
            }
        }
        m
    }

    /// Invariant form matrix of the given basis (real, symmetric, involutive).
    pub fn form(basis: Basis) -> Self {
        let o = Quat::one();
        let z = Quat::zero();
        match basis {
            Basis::U => Self::diag([-o, o, o]),
            Basis::VTilde => Self([[z, o, z], [o, z, z], [z, z, o]]),
        }
    }

    /// Fixed real orthogonal change of basis `v = P u`.
    pub fn basis_p() -> Self {
        let s = Quat::real(T::lit(std::f64::consts::FRAC_1_SQRT_2));
        let z = Quat::zero();
        Self([[s, s, z], [-s, s, z], [z, z, Quat::one()]])
    }

    /// Inverse of [`HMat3::basis_p`] (its transpose).
    pub fn basis_p_inv() -> Self {
        Self::basis_p().transpose()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for r in 0..3 {
            for s in 0..3 {
                m.0[r][s] = self.0[s][r];
            }
        }
        m
    }

    /// Quaternionic conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for r in 0..3 {
            for s in 0..3 {
                m.0[r][s] = self.0[s][r].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: T) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for q in row.iter_mut() {
                *q = *q * s;
            }
        }
        m
    }

    /// Entrywise left multiplication by a quaternion scalar.
    pub fn left_scale(&self, q: Quat<T>) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for e in row.iter_mut() {
                *e = q * *e;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Quat<T>; 3]) -> [Quat<T>; 3] {
        let mut out = [Quat::zero(); 3];
        for (r, o) in out.iter_mut().enumerate() {
            for s in 0..3 {
                *o += self.0[r][s] * v[s];
            }
        }
        out
    }

    pub fn frob(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |a, q| a + q.norm_sqr())
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |a, q| a.max(q.norm()))
    }

    pub fn dist(&self, o: &Self) -> T {
        (*self - *o).max_abs()
    }

    /// `max |(𝔽Y + Y†𝔽)_{rs}|`, zero exactly for members of sp(1,2).
    pub fn sp_residual(&self, basis: Basis) -> T {
        let f = Self::form(basis);
        (f * *self + self.adjoint() * f).max_abs()
    }

    /// `max |(A†𝔽A − 𝔽)_{rs}|`, zero exactly for members of Sp(1,2).
    pub fn group_residual(&self, basis: Basis) -> T {
        let f = Self::form(basis);
        (self.adjoint() * f * *self - f).max_abs()
    }

    /// Re-expresses a u-basis operator in the ṽ basis: `P Y P⁻¹`.
    pub fn to_vtilde(&self) -> Self {
        Self::basis_p() * *self * Self::basis_p_inv()
    }

    /// Re-expresses a ṽ-basis operator in the u basis: `P⁻¹ Y P`.
    pub fn to_u(&self) -> Self {
        Self::basis_p_inv() * *self * Self::basis_p()
    }

    /// Changes basis between `from` and `to`.
    pub fn rebase(&self, from: Basis, to: Basis) -> Self {
        match (from, to) {
            (Basis::U, Basis::VTilde) => self.to_vtilde(),
            (Basis::VTilde, Basis::U) => self.to_u(),
            _ => *self,
        }
    }

    /// Complex 6×6 image acting on `(z_0,z_1,z_2,w'_0,w'_1,w'_2)` with `u_α = z_α + j w'_α`.
    /// An entry `a = a1 + j a2` becomes the block `[[a1, −ā2], [a2, ā1]]`.
    pub fn complexify(&self) -> CMat6<T> {
        let mut c = CMat6::zero();
        for r in 0..3 {
            for s in 0..3 {
                let (a1, a2) = self.0[r][s].to_z_jw();
                c.0[r][s] = a1;
                c.0[r][s + 3] = -a2.conj();
                c.0[r + 3][s] = a2;
                c.0[r + 3][s + 3] = a1.conj();
            }
        }
        c
    }

    /// Inverse of [`HMat3::complexify`], averaging the redundant blocks.
    pub fn decomplexify(c: &CMat6<T>) -> Self {
        let half = T::lit(0.5);
        let mut m = Self::zero();
        for r in 0..3 {
            for s in 0..3 {
                let a1 = (c.0[r][s] + c.0[r + 3][s + 3].conj()) * half;
                let a2 = (c.0[r + 3][s] - c.0[r][s + 3].conj()) * half;
                m.0[r][s] = Quat::from_z_jw(a1, a2);
            }
        }
        m
    }
}

/// Complex vector image of a quaternionic 3-vector, matching [`HMat3::complexify`].
pub fn complexify_vec<T: Real>(v: &[Quat<T>; 3]) -> [Complex<T>; 6] {
    let mut out = [Complex::new(T::zero(), T::zero()); 6];
    for a in 0..3 {
        let (z, wp) = v[a].to_z_jw();
        out[a] = z;
        out[a + 3] = wp;
    }
    out
}

pub fn decomplexify_vec<T: Real>(c: &[Complex<T>; 6]) -> [Quat<T>; 3] {
    [0, 1, 2].map(|a| Quat::from_z_jw(c[a], c[a + 3]))
}

impl<T: Real> Add for HMat3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut m = self;
        for r in 0..3 {
            for s in 0..3 {
                m.0[r][s] += o.0[r][s];
            }
        }
        m
    }
}

impl<T: Real> Sub for HMat3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Neg for HMat3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul for HMat3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut m = Self::zero();
        for r in 0..3 {
            for s in 0..3 {
                for t in 0..3 {
                    m.0[r][s] += self.0[r][t] * o.0[t][s];
                }
            }
        }
        m
    }
}

/// Dense complex 6×6 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat6<T: Real>(pub [[Complex<T>; 6]; 6]);

impl<T: Real> CMat6<T> {
    pub fn zero() -> Self {
        Self([[Complex::new(T::zero(), T::zero()); 6]; 6])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for a in 0..6 {
            m.0[a][a] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut m = *self;
        for e in m.0.iter_mut().flatten() {
            *e *= s;
        }
        m
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut m = *self;
        for r in 0..6 {
            for s in 0..6 {
                m.0[r][s] += o.0[r][s];
            }
        }
        m
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(Complex::new(-T::one(), T::zero())))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut m = Self::zero();
        for r in 0..6 {
            for t in 0..6 {
                let a = self.0[r][t];
                for s in 0..6 {
                    m.0[r][s] += a * o.0[t][s];
                }
            }
        }
        m
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> T {
        (0..6)
            .map(|s| (0..6).fold(T::zero(), |a, r| a + self.0[r][s].norm()))
            .fold(T::zero(), T::max)
    }

    pub fn frob(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |a, e| a + e.norm_sqr())
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Quat<f64>;

    fn sample() -> HMat3<f64> {
        let mut m = HMat3::zero();
        let mut v = 0.1;
        for r in 0..3 {
            for s in 0..3 {
                m.0[r][s] = Q::new(v, -0.5 * v + 0.2, 0.3 - v, v * v);
                v += 0.17;
            }
        }
        m
    }

    #[test]
    fn complexify_is_multiplicative() {
        let a = sample();
        let b = a.adjoint() + HMat3::identity();
        let lhs = (a * b).complexify();
        let rhs = a.complexify().mul(&b.complexify());
        assert!(lhs.sub(&rhs).frob() < 1e-13);
        assert!(HMat3::decomplexify(&a.complexify()).dist(&a) < 1e-15);
    }

    #[test]
    fn complexify_matches_vector_action() {
        let a = sample();
        let v = [
            Q::new(1.0, 2.0, -1.0, 0.5),
            Q::new(0.0, 0.3, 0.2, -0.1),
            Q::new(-0.4, 0.0, 1.0, 1.0),
        ];
        let lhs = complexify_vec(&a.mul_vec(&v));
        let cv = complexify_vec(&v);
        let c = a.complexify();
        for r in 0..6 {
            let mut acc = Complex::new(0.0, 0.0);
            for s in 0..6 {
                acc += c.0[r][s] * cv[s];
            }
            assert!((acc - lhs[r]).norm() < 1e-14);
        }
    }

    #[test]
    fn basis_p_conjugates_forms() {
        let p = HMat3::<f64>::basis_p();
        let lhs = p.transpose() * HMat3::form(Basis::VTilde) * p;
        assert!(lhs.dist(&HMat3::form(Basis::U)) < 1e-15);
    }
}
