//! sp(1,2) elements: normal forms, Jordan decomposition, classification and
//! the characteristic/minimal polynomial correspondence.

mod bryant;
mod classify;
mod decompose;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hnum::expm::{
    exp_t0_diag, exp_t0_split, exp_t0_split_vt, exp_t1, exp_t1_vt, exp_t2, exp_t2_vt, mat_exp,
};
use crate::hnum::{Basis, CMat6, HMat3, Quat};

pub use bryant::{bryant_case, BryantCase, CaseId};
pub use classify::{classify, Classification, SignStatus};
pub use decompose::{decompose, Cluster, Decomposition};

/// Normal-form families of sp(1,2) generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum GeneratorForm {
    T0Diag { p: [f64; 3] },
    T0Split { lambda: f64, p: f64, q: f64 },
    T1 { lambda: f64, p: f64, q: f64 },
    T2 { lambda: f64, p: f64 },
}

impl GeneratorForm {
    pub fn height(&self) -> usize {
        match self {
            Self::T0Diag { .. } | Self::T0Split { .. } => 0,
            Self::T1 { .. } => 1,
            Self::T2 { .. } => 2,
        }
    }

    fn check(&self) -> Result<()> {
        let lam = match *self {
            Self::T0Diag { p } => {
                if p.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Parameter("non-finite weight".into()));
                }
                return Ok(());
            }
            Self::T0Split { lambda, .. } | Self::T1 { lambda, .. } | Self::T2 { lambda, .. } => {
                lambda
            }
        };
        if lam == 0.0 || !lam.is_finite() {
            return Err(Error::Parameter(format!("λ must be nonzero, got {lam}")));
        }
        Ok(())
    }

    /// The defining matrix in the requested basis: the u-basis matrices of the definition, or the
    /// simpler ṽ-basis representatives with the same parameters.
    pub fn matrix(&self, basis: Basis) -> Result<HMat3<f64>> {
        self.check()?;
        let z = 0.0;
        Ok(match (*self, basis) {
            (Self::T0Diag { p }, Basis::U) => HMat3::diag(p.map(|v| Quat::complex(0.0, v))),
            (Self::T0Diag { .. }, Basis::VTilde) => self.matrix(Basis::U)?.to_vtilde(),
            (Self::T0Split { lambda: l, p, q }, Basis::U) => HMat3::from_complex([
                [[z, p], [l, z], [z, z]],
                [[l, z], [z, p], [z, z]],
                [[z, z], [z, z], [z, q]],
            ]),
            (Self::T0Split { lambda: l, p, q }, Basis::VTilde) => HMat3::from_complex([
                [[l, p], [z, z], [z, z]],
                [[z, z], [-l, p], [z, z]],
                [[z, z], [z, z], [z, q]],
            ]),
            (Self::T1 { lambda: l, p, q }, Basis::U) => HMat3::from_complex([
                [[z, p + l], [z, l], [z, z]],
                [[z, -l], [z, p - l], [z, z]],
                [[z, z], [z, z], [z, q]],
            ]),
            (Self::T1 { lambda: l, p, q }, Basis::VTilde) => HMat3::from_complex([
                [[z, p], [z, z], [z, z]],
                [[z, -l], [z, p], [z, z]],
                [[z, z], [z, z], [z, q]],
            ]),
            (Self::T2 { lambda: l, p }, Basis::U) => HMat3::from_complex([
                [[z, p], [z, z], [z, -l]],
                [[z, z], [z, p], [z, l]],
                [[z, l], [z, l], [z, p]],
            ]),
            (Self::T2 { lambda: l, p }, Basis::VTilde) => HMat3::from_complex([
                [[z, p], [z, z], [z, z]],
                [[z, z], [z, p], [z, l]],
                [[z, l], [z, z], [z, p]],
            ]),
        })
    }

    /// Closed-form `exp(t Y)` for the matrix of [`GeneratorForm::matrix`].
    pub fn exp_closed(&self, basis: Basis, t: f64) -> Result<HMat3<f64>> {
        self.check()?;
        Ok(match (*self, basis) {
            (Self::T0Diag { p }, Basis::U) => exp_t0_diag(p, t),
            (Self::T0Diag { p }, Basis::VTilde) => exp_t0_diag(p, t).to_vtilde(),
            (Self::T0Split { lambda, p, q }, Basis::U) => exp_t0_split(lambda, p, q, t),
            (Self::T0Split { lambda, p, q }, Basis::VTilde) => exp_t0_split_vt(lambda, p, q, t),
            (Self::T1 { lambda, p, q }, Basis::U) => exp_t1(lambda, p, q, t),
            (Self::T1 { lambda, p, q }, Basis::VTilde) => exp_t1_vt(lambda, p, q, t),
            (Self::T2 { lambda, p }, Basis::U) => exp_t2(lambda, p, t),
            (Self::T2 { lambda, p }, Basis::VTilde) => exp_t2_vt(lambda, p, t),
        })
    }
}

fn fmt_num(v: f64) -> String {
    if v == v.round() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

impl fmt::Display for GeneratorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = fmt_num;
        match *self {
            Self::T0Diag { p } => write!(f, "T0Diag({},{},{})", n(p[0]), n(p[1]), n(p[2])),
            Self::T0Split { lambda, p, q } => write!(f, "T0Split({},{},{})", n(lambda), n(p), n(q)),
            Self::T1 { lambda, p, q } => write!(f, "T1({},{},{})", n(lambda), n(p), n(q)),
            Self::T2 { lambda, p } => write!(f, "T2({},{})", n(lambda), n(p)),
        }
    }
}

/// A member of sp(1,2) with its Jordan decomposition.
#[derive(Debug, Clone)]
pub struct Sp12Element {
    pub matrix: HMat3<f64>,
    pub basis: Basis,
    pub complexified: CMat6<f64>,
    pub decomposition: Decomposition,
    /// Set when the element was built from a normal form.
    pub normal_form: Option<GeneratorForm>,
}

/// Tolerance for sp(1,2) membership, relative to the entry scale.
pub const SP_TOL: f64 = 1e-12;

impl Sp12Element {
    pub fn new(matrix: HMat3<f64>, basis: Basis) -> Result<Self> {
        let r = matrix.sp_residual(basis);
        if r > SP_TOL * (1.0 + matrix.max_abs()) {
            return Err(Error::Contract(format!(
                "matrix is not in sp(1,2): residual {r:.3e}"
            )));
        }
        let complexified = matrix.complexify();
        let decomposition = decompose::decompose_complex(&complexified, basis)?;
        Ok(Self {
            matrix,
            basis,
            complexified,
            decomposition,
            normal_form: None,
        })
    }

    pub fn height(&self) -> usize {
        self.decomposition.height
    }

    pub fn semisimple(&self) -> HMat3<f64> {
        self.decomposition.semisimple
    }

    pub fn nilpotent(&self) -> HMat3<f64> {
        self.decomposition.nilpotent
    }

    /// Same element written in the other basis.
    pub fn in_basis(&self, basis: Basis) -> Result<Self> {
        let mut e = Self::new(self.matrix.rebase(self.basis, basis), basis)?;
        e.normal_form = None;
        Ok(e)
    }

    /// `exp(t Y)`: closed form for normal forms, series otherwise.
    pub fn exp(&self, t: f64) -> Result<HMat3<f64>> {
        match self.normal_form {
            Some(f) => f.exp_closed(self.basis, t),
            None => self.exp_series(t),
        }
    }

    pub fn exp_series(&self, t: f64) -> Result<HMat3<f64>> {
        mat_exp(&self.matrix, self.basis, t)
    }

    /// Conjugate `g Y g⁻¹` for `g` in Sp(1,2) (same basis).
    pub fn conjugate(&self, g: &HMat3<f64>) -> Result<Self> {
        let f = HMat3::form(self.basis);
        // g⁻¹ = 𝔽 g† 𝔽
        let ginv = f * g.adjoint() * f;
        Self::new(*g * self.matrix * ginv, self.basis)
    }
}

/// Builds the normal-form element in the requested basis.
pub fn make_normal_form(f: GeneratorForm, basis: Basis) -> Result<Sp12Element> {
    let mut e = Sp12Element::new(f.matrix(basis)?, basis)?;
    e.normal_form = Some(f);
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_forms_are_members() {
        let forms = [
            GeneratorForm::T0Diag { p: [1.0, 2.0, 3.0] },
            GeneratorForm::T0Split {
                lambda: 1.5,
                p: 2.0,
                q: -1.0,
            },
            GeneratorForm::T1 {
                lambda: -1.0,
                p: 2.0,
                q: 3.0,
            },
            GeneratorForm::T2 {
                lambda: 1.0,
                p: -2.0,
            },
        ];
        for f in forms {
            for b in [Basis::U, Basis::VTilde] {
                let m = f.matrix(b).unwrap();
                assert!(m.sp_residual(b) < 1e-15, "{f} {b:?}");
            }
        }
    }

    #[test]
    fn basis_p_relates_the_two_representatives() {
        let (p, q) = (0.7, -1.3);
        let split = GeneratorForm::T0Split { lambda: 1.2, p, q };
        assert!(
            split
                .matrix(Basis::U)
                .unwrap()
                .to_vtilde()
                .dist(&split.matrix(Basis::VTilde).unwrap())
                < 1e-14
        );
        let t1u = GeneratorForm::T1 { lambda: 0.5, p, q }
            .matrix(Basis::U)
            .unwrap();
        let t1v = GeneratorForm::T1 { lambda: 1.0, p, q }
            .matrix(Basis::VTilde)
            .unwrap();
        assert!(t1u.to_vtilde().dist(&t1v) < 1e-14);
        let t2u = GeneratorForm::T2 { lambda: 1.0, p }
            .matrix(Basis::U)
            .unwrap();
        let t2v = GeneratorForm::T2 {
            lambda: std::f64::consts::SQRT_2,
            p,
        }
        .matrix(Basis::VTilde)
        .unwrap();
        assert!(t2u.to_vtilde().dist(&t2v) < 1e-14);
    }

    #[test]
    fn zero_lambda_rejected() {
        assert!(GeneratorForm::T1 {
            lambda: 0.0,
            p: 1.0,
            q: 1.0
        }
        .matrix(Basis::U)
        .is_err());
    }

    #[test]
    fn display() {
        assert_eq!(
            GeneratorForm::T0Diag { p: [1.0, 2.0, 3.0] }.to_string(),
            "T0Diag(1,2,3)"
        );
        assert_eq!(
            GeneratorForm::T2 {
                lambda: 1.0,
                p: 0.5
            }
            .to_string(),
            "T2(1,0.5)"
        );
    }
}
