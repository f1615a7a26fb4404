use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Real;

/// Quaternion `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quat<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

/// Imaginary quaternion `x i + y j + z k`, also used as a vector in R³.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImQuat<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Quat<T> {
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    pub fn real(w: T) -> Self {
        Self::new(w, T::zero(), T::zero(), T::zero())
    }

    /// `a + b i` embedded as a quaternion.
    pub fn complex(a: T, b: T) -> Self {
        Self::new(a, b, T::zero(), T::zero())
    }

    /// Builds `z + w j` from two complex numbers.
    pub fn from_zw(z: Complex<T>, w: Complex<T>) -> Self {
        Self::new(z.re, z.im, w.re, w.im)
    }

    /// Splits into `(z, w)` with `q = z + w j`.
    pub fn to_zw(self) -> (Complex<T>, Complex<T>) {
        (Complex::new(self.w, self.x), Complex::new(self.y, self.z))
    }

    /// Builds `z + j w'` (the right-C-linear coordinates used by the complexification).
    pub fn from_z_jw(z: Complex<T>, wp: Complex<T>) -> Self {
        Self::from_zw(z, wp.conj())
    }

    /// Splits into `(z, w')` with `q = z + j w'`.
    pub fn to_z_jw(self) -> (Complex<T>, Complex<T>) {
        let (z, w) = self.to_zw();
        (z, w.conj())
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> T {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn inv(self) -> Self {
        self.conj() / self.norm_sqr()
    }

    pub fn re(self) -> T {
        self.w
    }

    pub fn im(self) -> ImQuat<T> {
        ImQuat::new(self.x, self.y, self.z)
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Unit complex number `e^{i θ}`.
    pub fn exp_i(theta: T) -> Self {
        Self::complex(theta.cos(), theta.sin())
    }

    pub fn dist(self, other: Self) -> T {
        (self - other).norm()
    }

    pub fn to_array(self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn cast<U: Real>(self) -> Quat<U> {
        let f = |v: T| U::lit(v.to_f64().unwrap_or(f64::NAN));
        Quat::new(f(self.w), f(self.x), f(self.y), f(self.z))
    }
}

impl<T: Real> ImQuat<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sqr(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn to_quat(self) -> Quat<T> {
        Quat::new(T::zero(), self.x, self.y, self.z)
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl<T: Real> Add for Quat<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Quat<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Quat<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> SubAssign for Quat<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> Neg for Quat<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul for Quat<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl<T: Real> Mul<T> for Quat<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

impl<T: Real> Div<T> for Quat<T> {
    type Output = Self;
    fn div(self, s: T) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl<T: Real> Add for ImQuat<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for ImQuat<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for ImQuat<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for ImQuat<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

impl<T: Real> From<ImQuat<T>> for Quat<T> {
    fn from(v: ImQuat<T>) -> Self {
        v.to_quat()
    }
}

impl<T: Real + Serialize> Serialize for Quat<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Quat<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        <[T; 4]>::deserialize(d).map(Self::from_array)
    }
}

impl<T: Real + Serialize> Serialize for ImQuat<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for ImQuat<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        <[T; 3]>::deserialize(d).map(Self::from_array)
    }
}

/// `q̄ i q`, the building block of every moment map here.
pub fn conj_i_conj<T: Real>(a: Quat<T>, b: Quat<T>) -> Quat<T> {
    a.conj() * Quat::i() * b
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Quat<f64>;

    #[test]
    fn basis_products() {
        assert_eq!(Q::i() * Q::j(), Q::k());
        assert_eq!(Q::j() * Q::k(), Q::i());
        assert_eq!(Q::k() * Q::i(), Q::j());
        assert_eq!(Q::i() * Q::i(), -Q::one());
        assert_eq!(Q::j() * Q::i(), -Q::k());
    }

    #[test]
    fn zw_split_round_trip() {
        let q = Q::new(1.0, 2.0, 3.0, 4.0);
        let (z, w) = q.to_zw();
        assert_eq!(Q::from_zw(z, w), q);
        // w j carries the j,k parts
        let wj = Q::complex(w.re, w.im) * Q::j();
        assert_eq!(Q::complex(z.re, z.im) + wj, q);
        let (z2, wp) = q.to_z_jw();
        assert_eq!(
            Q::complex(z2.re, z2.im) + Q::j() * Q::complex(wp.re, wp.im),
            q
        );
    }

    #[test]
    fn conj_i_identity() {
        // x̄ i x = (|z|² − |w|²) i + 2 z̄ w k for x = z + w j
        let z = Complex::new(0.3, -0.7);
        let w = Complex::new(1.1, 0.4);
        let x = Q::from_zw(z, w);
        let lhs = conj_i_conj(x, x);
        let c = z.conj() * w * 2.0;
        let rhs = Q::i() * (z.norm_sqr() - w.norm_sqr()) + Q::complex(c.re, c.im) * Q::k();
        assert!(lhs.dist(rhs) < 1e-14);
    }

    #[test]
    fn inverse() {
        let q = Q::new(0.5, -1.0, 2.0, 0.25);
        assert!((q * q.inv()).dist(Q::one()) < 1e-15);
        assert!((q.inv() * q).dist(Q::one()) < 1e-15);
    }
}
