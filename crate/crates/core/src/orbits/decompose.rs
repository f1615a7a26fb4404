use nalgebra::{DMatrix, Matrix6, Schur, SVD};
use num_complex::Complex;

use super::Sp12Element;
use crate::error::{Error, Result};
use crate::hnum::{Basis, CMat6, HMat3};

type C64 = Complex<f64>;

/// Eigenvalues closer than this (relative) are merged; split Jordan blocks land well inside.
const CLUSTER_TOL: f64 = 1e-4;
/// Repeated semisimple eigenvalues must agree to this (relative).
const SPREAD_TOL: f64 = 1e-7;
/// Cluster nilpotent parts above this (relative) are genuine.
const NILPOTENT_TOL: f64 = 1e-3;
/// `‖N^k‖ / scale^k` above this counts as nonzero.
const HEIGHT_TOL: f64 = 1e-6;

/// One generalized eigenspace of the complexification.
#[derive(Debug, Clone)]
pub struct Cluster {
    pub value: C64,
    pub mult: usize,
    /// 6 × mult basis of the generalized eigenspace.
    pub basis: DMatrix<C64>,
    /// `‖(C − μ) B‖ / scale`.
    pub nilpotent_norm: f64,
    /// Largest distance of a member eigenvalue from the mean.
    pub spread: f64,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub semisimple: HMat3<f64>,
    pub nilpotent: HMat3<f64>,
    pub height: usize,
    pub clusters: Vec<Cluster>,
    pub scale: f64,
}

impl Cluster {
    pub fn is_defective(&self) -> bool {
        self.nilpotent_norm >= NILPOTENT_TOL
    }
}

pub(crate) fn to_na(c: &CMat6<f64>) -> Matrix6<C64> {
    Matrix6::from_fn(|r, s| c.0[r][s])
}

fn from_na(m: &DMatrix<C64>) -> CMat6<f64> {
    let mut c = CMat6::zero();
    for r in 0..6 {
        for s in 0..6 {
            c.0[r][s] = m[(r, s)];
        }
    }
    c
}

/// Jordan decomposition `Y = S + N` with the nilpotency height.
pub fn decompose(y: &Sp12Element) -> (HMat3<f64>, HMat3<f64>, usize) {
    let d = &y.decomposition;
    (d.semisimple, d.nilpotent, d.height)
}

fn cluster_eigenvalues(eig: &[C64], tol: f64) -> Vec<Vec<C64>> {
    // single linkage
    let n = eig.len();
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if (eig[a] - eig[b]).norm() < tol && label[a] != label[b] {
                    let (lo, hi) = (label[a].min(label[b]), label[a].max(label[b]));
                    for l in label.iter_mut() {
                        if *l == hi {
                            *l = lo;
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut groups: Vec<(usize, Vec<C64>)> = Vec::new();
    for (a, &l) in label.iter().enumerate() {
        match groups.iter_mut().find(|(g, _)| *g == l) {
            Some((_, v)) => v.push(eig[a]),
            None => groups.push((l, vec![eig[a]])),
        }
    }
    let mut out: Vec<Vec<C64>> = groups.into_iter().map(|(_, v)| v).collect();
    out.sort_by(|a, b| {
        let ma = mean(a);
        let mb = mean(b);
        (ma.im, ma.re)
            .partial_cmp(&(mb.im, mb.re))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

fn mean(v: &[C64]) -> C64 {
    v.iter().sum::<C64>() / v.len() as f64
}

pub(crate) fn decompose_complex(c: &CMat6<f64>, _basis: Basis) -> Result<Decomposition> {
    let m = to_na(c);
    let scale = m.norm().max(1.0);
    let eig = Schur::new(m)
        .eigenvalues()
        .ok_or_else(|| Error::Internal("Schur form did not converge".into()))?;
    let eig: Vec<C64> = eig.iter().copied().collect();
    let groups = cluster_eigenvalues(&eig, CLUSTER_TOL * scale);
    let md = DMatrix::from_fn(6, 6, |r, s| m[(r, s)]);
    let ident = DMatrix::<C64>::identity(6, 6);

    let mut clusters = Vec::new();
    let mut big_b = DMatrix::<C64>::zeros(6, 6);
    let mut diag = DMatrix::<C64>::zeros(6, 6);
    let mut col = 0;
    for g in &groups {
        let mu = mean(g);
        let mult = g.len();
        let shifted = &md - &ident * mu;
        let mut k = shifted.clone();
        for _ in 1..mult {
            k = &k * &shifted;
        }
        let svd = SVD::new(k, false, true);
        let vt = svd
            .v_t
            .ok_or_else(|| Error::Internal("SVD failed".into()))?;
        let mut order: Vec<usize> = (0..6).collect();
        order.sort_by(|&a, &b| {
            svd.singular_values[a]
                .partial_cmp(&svd.singular_values[b])
                .unwrap()
        });
        let mut basis = DMatrix::<C64>::zeros(6, mult);
        for (cidx, &row) in order.iter().take(mult).enumerate() {
            for r in 0..6 {
                basis[(r, cidx)] = vt[(row, r)].conj();
            }
        }
        let nilpotent_norm = (&shifted * &basis).norm() / scale;
        let spread = g.iter().map(|e| (e - mu).norm()).fold(0.0, f64::max);
        if mult > 1
            && nilpotent_norm < NILPOTENT_TOL
            && (nilpotent_norm > SPREAD_TOL || spread > SPREAD_TOL * scale)
        {
            return Err(Error::IllConditioned {
                gap: spread.max(nilpotent_norm * scale),
            });
        }
        for cidx in 0..mult {
            big_b.set_column(col, &basis.column(cidx));
            diag[(col, col)] = mu;
            col += 1;
        }
        clusters.push(Cluster {
            value: mu,
            mult,
            basis,
            nilpotent_norm,
            spread,
        });
    }
    let binv = big_b
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Internal("generalized eigenvectors are dependent".into()))?;
    let s = &big_b * diag * binv;
    let n = &md - &s;
    let mut height = 0;
    let mut pow = n.clone();
    for k in 1..=3 {
        if pow.norm() / scale.powi(k) > HEIGHT_TOL {
            height = k as usize;
        }
        pow = &pow * &n;
    }
    if height > 2 {
        return Err(Error::Internal(
            "nilpotent part of height > 2 in sp(1,2)".into(),
        ));
    }
    let semisimple = if height == 0 {
        HMat3::decomplexify(c)
    } else {
        HMat3::decomplexify(&from_na(&s))
    };
    let nilpotent = if height == 0 {
        HMat3::zero()
    } else {
        HMat3::decomplexify(&from_na(&n))
    };
    Ok(Decomposition {
        semisimple,
        nilpotent,
        height,
        clusters,
        scale,
    })
}
