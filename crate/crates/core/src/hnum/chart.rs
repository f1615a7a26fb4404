use serde::{Deserialize, Serialize};

use super::hvector::{basis_change_inverse, Basis, HVec};
use super::quaternion::Quat;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Inhomogeneous coordinates `x_α = u_α u_β^{-1}` (α ≠ β, increasing) on the chart `u_β ≠ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPt<T: Real> {
    pub beta: usize,
    pub k: usize,
    pub l: usize,
    pub basis: Basis,
    pub coords: Vec<Quat<T>>,
}

/// Smallest `|u_β|` accepted by [`to_chart`].
pub const CHART_TOL: f64 = 1e-12;

impl<T: Real> ChartPt<T> {
    /// Point of the u-basis chart `U_0` of H^{k,l}.
    pub fn u0(k: usize, l: usize, coords: Vec<Quat<T>>) -> Result<Self> {
        if coords.len() + 1 != k + l || k == 0 {
            return Err(Error::Dimension(format!(
                "{} chart coordinates for signature ({k},{l})",
                coords.len()
            )));
        }
        Ok(Self {
            beta: 0,
            k,
            l,
            basis: Basis::U,
            coords,
        })
    }

    /// Point `y = (y_1, y_2)` of the ṽ-basis chart `v_0 ≠ 0`.
    pub fn vt(y1: Quat<T>, y2: Quat<T>) -> Self {
        Self {
            beta: 0,
            k: 1,
            l: 2,
            basis: Basis::VTilde,
            coords: vec![y1, y2],
        }
    }

    /// Slot sign in the u basis of homogeneous index `a`.
    fn sign_of(&self, a: usize) -> T {
        if a < self.k {
            -T::one()
        } else {
            T::one()
        }
    }

    /// Homogeneous index of chart coordinate `c`.
    pub fn slot(&self, c: usize) -> usize {
        if c < self.beta {
            c
        } else {
            c + 1
        }
    }

    /// Signs of the remaining slots (the form `F_{k−1,l}` when β is negative).
    pub fn coord_signs(&self) -> Vec<T> {
        (0..self.coords.len())
            .map(|c| self.sign_of(self.slot(c)))
            .collect()
    }

    /// `−F(u,u)/|u_β|²`; positive exactly on H_-.
    pub fn defect(&self) -> T {
        match self.basis {
            Basis::U => {
                let inner = reduced_form(&self.coord_signs(), &self.coords, &self.coords).re();
                -(self.sign_of(self.beta) + inner)
            }
            Basis::VTilde => {
                let (y1, y2) = (self.coords[0], self.coords[1]);
                -(T::lit(2.0) * y1.re() + y2.norm_sqr())
            }
        }
    }

    pub fn in_minus(&self) -> bool {
        self.defect() > T::zero()
    }
}

/// `Σ s_α t̄_α x_α` for tangent-like tuples.
pub fn reduced_form<T: Real>(signs: &[T], t: &[Quat<T>], x: &[Quat<T>]) -> Quat<T> {
    signs
        .iter()
        .zip(t.iter().zip(x))
        .fold(Quat::zero(), |acc, (&s, (&a, &b))| acc + (a.conj() * b) * s)
}

/// Restriction of a homogeneous vector to the chart `u_β ≠ 0`.
pub fn to_chart<T: Real>(u: &HVec<T>, beta: usize) -> Result<ChartPt<T>> {
    if beta >= u.dim() {
        return Err(Error::Dimension(format!("chart index {beta} out of range")));
    }
    if u.basis == Basis::VTilde && beta != 0 {
        return Err(Error::Contract("the ṽ-basis chart is v_0 ≠ 0".into()));
    }
    let ub = u.comps[beta];
    let scale = u.norm_sqr().sqrt().max(T::one());
    if ub.norm() <= T::lit(CHART_TOL) * scale {
        return Err(Error::ChartDomain(format!("u_{beta} vanishes")));
    }
    let inv = ub.inv();
    let coords = u
        .comps
        .iter()
        .enumerate()
        .filter(|&(a, _)| a != beta)
        .map(|(_, &c)| c * inv)
        .collect();
    Ok(ChartPt {
        beta,
        k: u.k,
        l: u.l,
        basis: u.basis,
        coords,
    })
}

/// Homogeneous representative with `u_β = 1`.
pub fn from_chart<T: Real>(p: &ChartPt<T>) -> HVec<T> {
    let mut comps = p.coords.clone();
    comps.insert(p.beta, Quat::one());
    HVec {
        k: p.k,
        l: p.l,
        basis: p.basis,
        comps,
    }
}

/// Pushes a homogeneous tangent `du` at `u` to the chart: `dx_α = (du_α − x_α du_β) u_β^{-1}`.
pub fn chart_tangent<T: Real>(u: &HVec<T>, du: &[Quat<T>], beta: usize) -> Result<Vec<Quat<T>>> {
    let p = to_chart(u, beta)?;
    let inv = u.comps[beta].inv();
    Ok((0..p.coords.len())
        .map(|c| {
            let a = p.slot(c);
            (du[a] - p.coords[c] * du[beta]) * inv
        })
        .collect())
}

/// Converts a ṽ-chart point `(y_1, y_2)` to the u-basis chart `U_0`.
pub fn vt_to_u_chart<T: Real>(p: &ChartPt<T>) -> Result<ChartPt<T>> {
    if p.basis != Basis::VTilde {
        return Err(Error::Contract("expected a ṽ-chart point".into()));
    }
    to_chart(&basis_change_inverse(&from_chart(p))?, 0)
}

/// Ambient metric of Proj(H^{k,l}_-) on the u-basis chart (β a negative slot), polarized:
/// `g = (1/D)[Re F'(t1,t2) + (1/D) Re(⟨t1,x⟩ conj⟨t2,x⟩)]`, `D = 1 − F'(x,x)`.
pub fn ambient_metric<T: Real>(p: &ChartPt<T>, t1: &[Quat<T>], t2: &[Quat<T>]) -> Result<T> {
    let d = metric_defect(p)?;
    let n = p.coords.len();
    if t1.len() != n || t2.len() != n {
        return Err(Error::Dimension(
            "tangent length differs from chart dimension".into(),
        ));
    }
    let signs = p.coord_signs();
    let a = reduced_form(&signs, t1, &p.coords);
    let b = reduced_form(&signs, t2, &p.coords);
    let flat = reduced_form(&signs, t1, t2).re();
    Ok((flat + (a * b.conj()).re() / d) / d)
}

fn metric_defect<T: Real>(p: &ChartPt<T>) -> Result<T> {
    if p.basis != Basis::U {
        return Err(Error::Contract(
            "ambient_metric works on u-basis charts".into(),
        ));
    }
    if p.beta >= p.k {
        return Err(Error::ChartDomain(
            "chart index must be a negative slot".into(),
        ));
    }
    let d = p.defect();
    if d <= T::zero() {
        return Err(Error::Domain(format!(
            "chart inequality violated (1 − F = {d})"
        )));
    }
    Ok(d)
}

/// Real basis tangent: quaternion direction `e` (0..4) in chart coordinate `c`.
pub fn unit_tangent<T: Real>(n: usize, c: usize, e: usize) -> Vec<Quat<T>> {
    let mut t = vec![Quat::zero(); n];
    let mut a = [T::zero(); 4];
    a[e] = T::one();
    t[c] = Quat::from_array(a);
    t
}

/// 4n × 4n real Gram matrix of [`ambient_metric`] in the real coordinate basis.
pub fn metric_gram<T: Real>(p: &ChartPt<T>) -> Result<Vec<Vec<T>>> {
    let n = p.coords.len();
    let basis: Vec<_> = (0..4 * n)
        .map(|r| unit_tangent::<T>(n, r / 4, r % 4))
        .collect();
    let mut g = vec![vec![T::zero(); 4 * n]; 4 * n];
    for r in 0..4 * n {
        for s in r..4 * n {
            let v = ambient_metric(p, &basis[r], &basis[s])?;
            g[r][s] = v;
            g[s][r] = v;
        }
    }
    Ok(g)
}
