use serde::{Deserialize, Serialize};

use super::quaternion::Quat;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Which coordinate basis a vector or matrix is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// Diagonal form `−|u_0|² − … + |u_k|² + …`.
    U,
    /// Signature (1,2) only: `v̄_0 v_1 + v̄_1 v_0 + |v_2|²`.
    VTilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Minus,
    Null,
    Plus,
}

/// Relative width of the null band used by [`region`].
pub const NULL_BAND: f64 = 1e-9;

/// Element of H^{k,l}: `k` negative slots followed by `l` positive ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HVec<T: Real> {
    pub k: usize,
    pub l: usize,
    pub basis: Basis,
    pub comps: Vec<Quat<T>>,
}

impl<T: Real> HVec<T> {
    pub fn new(k: usize, l: usize, comps: Vec<Quat<T>>) -> Result<Self> {
        Self::with_basis(k, l, Basis::U, comps)
    }

    pub fn with_basis(k: usize, l: usize, basis: Basis, comps: Vec<Quat<T>>) -> Result<Self> {
        if comps.len() != k + l {
            return Err(Error::Dimension(format!(
                "{} components for signature ({k},{l})",
                comps.len()
            )));
        }
        if basis == Basis::VTilde && (k, l) != (1, 2) {
            return Err(Error::Contract(
                "the ṽ basis exists only for H^{1,2}".into(),
            ));
        }
        Ok(Self { k, l, basis, comps })
    }

    /// H^{1,2} vector in the u basis from three quaternions.
    pub fn u3(c: [Quat<T>; 3]) -> Self {
        Self {
            k: 1,
            l: 2,
            basis: Basis::U,
            comps: c.to_vec(),
        }
    }

    /// H^{1,2} vector in the ṽ basis from three quaternions.
    pub fn vt3(c: [Quat<T>; 3]) -> Self {
        Self {
            k: 1,
            l: 2,
            basis: Basis::VTilde,
            comps: c.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn norm_sqr(&self) -> T {
        self.comps
            .iter()
            .fold(T::zero(), |acc, q| acc + q.norm_sqr())
    }

    /// Sign of slot `a` in the u basis.
    pub fn slot_sign(&self, a: usize) -> T {
        if a < self.k {
            -T::one()
        } else {
            T::one()
        }
    }

    /// Right multiplication of every component by `h`.
    pub fn right_mul(&self, h: Quat<T>) -> Self {
        Self {
            comps: self.comps.iter().map(|&c| c * h).collect(),
            ..self.clone()
        }
    }

    /// Real value of the invariant form on `self`, in whichever basis it is written.
    pub fn form_value(&self) -> T {
        match self.basis {
            Basis::U => form_diag(self.k, &self.comps, &self.comps).re(),
            Basis::VTilde => form_vt(&self.comps, &self.comps).re(),
        }
    }

    pub fn as3(&self) -> Result<[Quat<T>; 3]> {
        if self.comps.len() != 3 {
            return Err(Error::Dimension(format!(
                "expected 3 components, got {}",
                self.comps.len()
            )));
        }
        Ok([self.comps[0], self.comps[1], self.comps[2]])
    }
}

fn form_diag<T: Real>(k: usize, u: &[Quat<T>], v: &[Quat<T>]) -> Quat<T> {
    u.iter()
        .zip(v)
        .enumerate()
        .fold(Quat::zero(), |acc, (a, (&ua, &va))| {
            let t = ua.conj() * va;
            if a < k {
                acc - t
            } else {
                acc + t
            }
        })
}

fn form_vt<T: Real>(u: &[Quat<T>], v: &[Quat<T>]) -> Quat<T> {
    u[0].conj() * v[1] + u[1].conj() * v[0] + u[2].conj() * v[2]
}

/// `F_{k,l}(u,v) = −Σ_{α<k} ū_α v_α + Σ_{α≥k} ū_α v_α`.
pub fn form_f<T: Real>(k: usize, l: usize, u: &HVec<T>, v: &HVec<T>) -> Result<Quat<T>> {
    for w in [u, v] {
        if w.k != k || w.l != l || w.comps.len() != k + l {
            return Err(Error::Dimension(format!(
                "vector of signature ({},{}) used with form ({k},{l})",
                w.k, w.l
            )));
        }
        if w.basis != Basis::U {
            return Err(Error::Contract("form_f expects u-basis vectors".into()));
        }
    }
    Ok(form_diag(k, &u.comps, &v.comps))
}

/// `F̃(v,w) = v̄_0 w_1 + v̄_1 w_0 + v̄_2 w_2` on ṽ-basis vectors.
pub fn form_vtilde<T: Real>(v: &HVec<T>, w: &HVec<T>) -> Result<Quat<T>> {
    if v.basis != Basis::VTilde || w.basis != Basis::VTilde {
        return Err(Error::Contract(
            "form_vtilde expects ṽ-basis vectors".into(),
        ));
    }
    Ok(form_vt(&v.comps, &w.comps))
}

/// Region of a nonzero vector with a null band `|F| < 1e-9 |u|²`.
pub fn region<T: Real>(u: &HVec<T>) -> Result<Region> {
    let n2 = u.norm_sqr();
    if n2 <= T::zero() {
        return Err(Error::Degenerate("zero vector has no region".into()));
    }
    let f = u.form_value();
    let band = T::lit(NULL_BAND.max(64.0 * T::eps_f64())) * n2;
    Ok(if f.abs() < band {
        Region::Null
    } else if f < T::zero() {
        Region::Minus
    } else {
        Region::Plus
    })
}

/// Coordinate-reversing anti-isometry `H^{k,l} → H^{l,k}`.
pub fn psi<T: Real>(u: &HVec<T>) -> HVec<T> {
    let mut comps = u.comps.clone();
    comps.reverse();
    HVec {
        k: u.l,
        l: u.k,
        basis: u.basis,
        comps,
    }
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// u basis → ṽ basis: `v0 = (u1+u0)/√2, v1 = (u1−u0)/√2, v2 = u2`.
pub fn basis_change<T: Real>(u: &HVec<T>) -> Result<HVec<T>> {
    if u.basis != Basis::U || (u.k, u.l) != (1, 2) {
        return Err(Error::Contract(
            "basis_change expects a u-basis H^{1,2} vector".into(),
        ));
    }
    let s = T::lit(FRAC_1_SQRT_2);
    let c = &u.comps;
    Ok(HVec::vt3([(c[1] + c[0]) * s, (c[1] - c[0]) * s, c[2]]))
}

/// ṽ basis → u basis, inverse of [`basis_change`].
pub fn basis_change_inverse<T: Real>(v: &HVec<T>) -> Result<HVec<T>> {
    if v.basis != Basis::VTilde {
        return Err(Error::Contract(
            "basis_change_inverse expects a ṽ-basis vector".into(),
        ));
    }
    let s = T::lit(FRAC_1_SQRT_2);
    let c = &v.comps;
    Ok(HVec::u3([(c[0] - c[1]) * s, (c[0] + c[1]) * s, c[2]]))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Quat<f64>;

    #[test]
    fn form_examples() {
        let u = HVec::u3([Q::one(), Q::zero(), Q::zero()]);
        assert_eq!(form_f(1, 2, &u, &u).unwrap(), Q::real(-1.0));
        let u = HVec::u3([Q::zero(), Q::one(), Q::zero()]);
        assert_eq!(form_f(1, 2, &u, &u).unwrap(), Q::real(1.0));
        let u = HVec::new(2, 1, vec![Q::one(), Q::j(), Q::k()]).unwrap();
        assert_eq!(form_f(2, 1, &u, &u).unwrap(), Q::real(-1.0));
        assert!(form_f(2, 1, &HVec::u3([Q::one(); 3]), &HVec::u3([Q::one(); 3])).is_err());
    }

    #[test]
    fn region_examples() {
        let r = |c: [f64; 3]| region(&HVec::u3(c.map(Q::real))).unwrap();
        assert_eq!(r([1.0, 0.0, 0.0]), Region::Minus);
        assert_eq!(r([1.0, 1.0, 0.0]), Region::Null);
        assert_eq!(r([1.0, 2.0, 0.0]), Region::Plus);
        assert!(region(&HVec::u3([Q::zero(); 3])).is_err());
    }

    #[test]
    fn basis_change_examples() {
        let v = basis_change(&HVec::u3([Q::one(), Q::zero(), Q::zero()])).unwrap();
        let s = FRAC_1_SQRT_2;
        assert!(v.comps[0].dist(Q::real(s)) < 1e-15);
        assert!(v.comps[1].dist(Q::real(-s)) < 1e-15);
        assert!((v.form_value() + 1.0).abs() < 1e-15);
        let v = basis_change(&HVec::u3([Q::zero(), Q::zero(), Q::one()])).unwrap();
        assert_eq!(v.comps, vec![Q::zero(), Q::zero(), Q::one()]);
        assert!(basis_change(&v).is_err());
    }
}
