use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::decompose::{to_na, Cluster};
use super::{GeneratorForm, Sp12Element};
use crate::error::{Error, Result};
use crate::hnum::HMat3;

type C64 = Complex<f64>;

/// Eigenvalues with `|Re μ| / scale` below this are treated as imaginary.
const IMAG_TOL: f64 = 1e-6;
/// Normalized orientation invariant below this leaves the T1 sign unresolved.
const SIGN_TOL: f64 = 1e-6;

/// Status of the ±1 parameter separating the two height-one orbits with `p ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignStatus {
    NotApplicable,
    Resolved,
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub form: GeneratorForm,
    pub height: usize,
    pub sign: SignStatus,
}

fn form_hat(y: &Sp12Element) -> DMatrix<C64> {
    let f = to_na(&HMat3::form(y.basis).complexify());
    DMatrix::from_fn(6, 6, |r, s| f[(r, s)])
}

/// Number of negative directions of the invariant form on a cluster's eigenspace.
fn negative_count(fh: &DMatrix<C64>, c: &Cluster) -> usize {
    let h = c.basis.adjoint() * fh * &c.basis;
    let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(h)
        .eigenvalues
        .iter()
        .filter(|&&v| v < 0.0)
        .count()
}

fn all_eigenvalues(cl: &[Cluster]) -> Vec<C64> {
    cl.iter()
        .flat_map(|c| std::iter::repeat_n(c.value, c.mult))
        .collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len().max(1) as f64
}

/// Orbit type and normalized parameters from spectral invariants.
pub fn classify(y: &Sp12Element) -> Result<Classification> {
    let d = &y.decomposition;
    if y.matrix.max_abs() == 0.0 {
        return Err(Error::Degenerate("zero generator".into()));
    }
    let scale = d.scale;
    let eig = all_eigenvalues(&d.clusters);
    match d.height {
        0 => {
            let real: Vec<&C64> = eig
                .iter()
                .filter(|e| e.re.abs() > IMAG_TOL * scale)
                .collect();
            if real.is_empty() {
                classify_diag(y).map(|form| Classification {
                    form,
                    height: 0,
                    sign: SignStatus::NotApplicable,
                })
            } else {
                if real.len() != 4 {
                    return Err(Error::Internal(format!(
                        "{} eigenvalues off the imaginary axis",
                        real.len()
                    )));
                }
                let lambda = mean(&real.iter().map(|e| e.re.abs()).collect::<Vec<_>>());
                let p = mean(&real.iter().map(|e| e.im.abs()).collect::<Vec<_>>());
                let rest: Vec<f64> = eig
                    .iter()
                    .filter(|e| e.re.abs() <= IMAG_TOL * scale)
                    .map(|e| e.im.abs())
                    .collect();
                let form = GeneratorForm::T0Split {
                    lambda,
                    p,
                    q: mean(&rest),
                };
                Ok(Classification {
                    form,
                    height: 0,
                    sign: SignStatus::NotApplicable,
                })
            }
        }
        1 => {
            let jordan: Vec<&Cluster> = d.clusters.iter().filter(|c| c.is_defective()).collect();
            let jc = jordan
                .iter()
                .max_by(|a, b| a.value.im.partial_cmp(&b.value.im).unwrap())
                .ok_or_else(|| Error::Internal("height one without a defective cluster".into()))?;
            let p = jc.value.im.abs();
            // the Jordan pairs account for four eigenvalues of modulus p; the rest is ±iq
            let mut mods: Vec<f64> = eig.iter().map(|e| e.norm()).collect();
            mods.sort_by(|a, b| (a - p).abs().partial_cmp(&(b - p).abs()).unwrap());
            let q = mean(&mods[4..]);
            let (lambda, sign) = if p <= IMAG_TOL * scale {
                (1.0, SignStatus::NotApplicable)
            } else {
                match t1_orientation(y, jc) {
                    Some(s) => (s, SignStatus::Resolved),
                    None => match y.normal_form {
                        Some(GeneratorForm::T1 { lambda, p: p0, .. }) => {
                            (lambda.signum() * p0.signum(), SignStatus::Resolved)
                        }
                        _ => (1.0, SignStatus::Unresolved),
                    },
                }
            };
            Ok(Classification {
                form: GeneratorForm::T1 { lambda, p, q },
                height: 1,
                sign,
            })
        }
        _ => {
            let p = mean(&eig.iter().map(|e| e.im.abs()).collect::<Vec<_>>());
            Ok(Classification {
                form: GeneratorForm::T2 { lambda: 1.0, p },
                height: 2,
                sign: SignStatus::NotApplicable,
            })
        }
    }
}

fn classify_diag(y: &Sp12Element) -> Result<GeneratorForm> {
    let fh = form_hat(y);
    let scale = y.decomposition.scale;
    let mut negative = None;
    let mut others = Vec::new();
    for c in &y.decomposition.clusters {
        let w = c.value.im;
        if w < -IMAG_TOL * scale {
            continue;
        }
        let zero = w.abs() <= IMAG_TOL * scale;
        // eigenvalue 0 carries both complex directions of every zero weight
        let per_weight = if zero { 2 } else { 1 };
        let weights = c.mult / per_weight;
        let neg = negative_count(&fh, c) / per_weight;
        let value = if zero { 0.0 } else { w };
        if neg > 0 {
            negative = Some(value);
        }
        for _ in 0..weights - neg.min(weights) {
            others.push(value);
        }
    }
    let p0 = negative.ok_or_else(|| Error::Internal("no negative eigendirection".into()))?;
    if others.len() != 2 {
        return Err(Error::Internal(format!(
            "expected two positive weights, found {}",
            others.len()
        )));
    }
    others.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(GeneratorForm::T0Diag {
        p: [p0, others[0], others[1]],
    })
}

/// Sign invariant of a height-one element at its defective eigenvalue `ip` with `p > 0`:
/// for `e = (C − ip) f ≠ 0`, `Im(f† 𝔽 e)` has the sign of `−λ`.
fn t1_orientation(y: &Sp12Element, jc: &Cluster) -> Option<f64> {
    let c = to_na(&y.complexified);
    let cd = DMatrix::from_fn(6, 6, |r, s| c[(r, s)]);
    let shifted = &cd - DMatrix::<C64>::identity(6, 6) * jc.value;
    let nb = &shifted * &jc.basis;
    let svd = SVD::new(nb, false, true);
    let vt = svd.v_t?;
    let top = (0..svd.singular_values.len()).max_by(|&a, &b| {
        svd.singular_values[a]
            .partial_cmp(&svd.singular_values[b])
            .unwrap()
    })?;
    let coef = DMatrix::from_fn(jc.mult, 1, |r, _| vt[(top, r)].conj());
    let f = &jc.basis * coef;
    let e = &shifted * &f;
    let fh = form_hat(y);
    let val = (f.adjoint() * fh * &e)[(0, 0)].im / (f.norm() * e.norm());
    if val.abs() < SIGN_TOL {
        None
    } else {
        Some(-val.signum())
    }
}
