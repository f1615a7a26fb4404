//! Quotient metrics sampled on slices and their Levi-Civita curvature by finite differences:
//! Ricci, scalar, and the self-dual/anti-self-dual split of the Weyl tensor.

use std::collections::HashMap;

use nalgebra::{Matrix3, Matrix4, SMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hnum::ambient_metric;
use crate::slices::QuotientChart;
use crate::Quaternion;

type Matrix6 = SMatrix<f64, 6, 6>;

/// Smallest accepted `|g(V,V)|`.
pub const NULL_ORBIT_TOL: f64 = 1e-8;
/// Largest accepted condition number of the quotient metric.
pub const MAX_CONDITION: f64 = 1e8;
/// Verdict thresholds.
pub const EINSTEIN_TOL: f64 = 1e-4;
pub const SELF_DUAL_TOL: f64 = 1e-3;
pub const FLAT_WEYL_TOL: f64 = 1e-4;

/// Finite-difference steps: `inner` for slice tangents, `outer` for derivatives of the metric
/// (4th-order stencils at `outer` and `2·outer`, Richardson-combined).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdSteps {
    pub inner: f64,
    pub outer: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        Self {
            inner: 1e-3,
            outer: 5e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub xi: [f64; 4],
    pub g: [[f64; 4]; 4],
    pub h: f64,
}

/// Which Weyl half vanishes in the coordinate orientation of the chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishingHalf {
    SelfDual,
    AntiSelfDual,
    Both,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "SDE_Negative")]
    SdeNegative,
    ConformallyFlat,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub xi: [f64; 4],
    pub scalar: f64,
    pub einstein_residual: f64,
    pub weyl_sd_norm: f64,
    pub weyl_asd_norm: f64,
    pub riem_norm: f64,
    pub vanishing_half: VanishingHalf,
    /// Sorted eigenvalues of the larger Weyl half on its 2-forms.
    pub weyl_spectrum: [f64; 3],
    /// Curvature operator on 2-forms in an orthonormal frame (self-dual block first).
    pub curvature_operator: [[f64; 6]; 6],
    pub verdict: Verdict,
}

fn flatten_coords(c: &[Quaternion]) -> Vec<f64> {
    c.iter().flat_map(|q| q.to_array()).collect()
}

fn unflatten_coords(v: &[f64]) -> Vec<Quaternion> {
    v.chunks(4)
        .map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
        .collect()
}

const D1: [(i32, f64); 4] = [(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];

/// Quotient metric `G_ab = g(t_a,t_b) − g(t_a,V) g(t_b,V)/g(V,V)` on the slice tangents.
pub fn quotient_metric(chart: &QuotientChart, xi: &[f64; 4], h: f64) -> Result<MetricSample> {
    let pt = chart.embed_u(xi)?;
    let mut tangents: Vec<Vec<Quaternion>> = Vec::with_capacity(4);
    for a in 0..4 {
        let mut acc = vec![0.0; 4 * pt.coords.len()];
        for &(o, c) in &D1 {
            let mut x = *xi;
            x[a] += o as f64 * h;
            let shifted = chart.embed_u(&x)?;
            for (s, v) in acc.iter_mut().zip(flatten_coords(&shifted.coords)) {
                *s += c * v;
            }
        }
        acc.iter_mut().for_each(|v| *v /= 12.0 * h);
        tangents.push(unflatten_coords(&acc));
    }
    let v = chart.killing_u(&pt)?;
    let gvv = ambient_metric(&pt, &v, &v)?;
    if gvv.abs() < NULL_ORBIT_TOL {
        return Err(Error::NullOrbit(gvv));
    }
    let gv: Vec<f64> = tangents
        .iter()
        .map(|t| ambient_metric(&pt, t, &v))
        .collect::<Result<_>>()?;
    let mut g = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            let val = ambient_metric(&pt, &tangents[a], &tangents[b])? - gv[a] * gv[b] / gvv;
            g[a][b] = val;
            g[b][a] = val;
        }
    }
    Ok(MetricSample { xi: *xi, g, h })
}

/// Riemann tensor (`R_abab` is the sectional curvature), Ricci, scalar and metric at a point.
struct Curvature {
    g: Matrix4<f64>,
    riem: [[[[f64; 4]; 4]; 4]; 4],
    ric: Matrix4<f64>,
    scalar: f64,
}

fn curvature_at<F>(metric: &F, xi: &[f64; 4], h: f64) -> Result<Curvature>
where
    F: Fn(&[f64; 4]) -> Result<Matrix4<f64>>,
{
    let mut cache: HashMap<[i32; 4], Matrix4<f64>> = HashMap::new();
    let mut at = |off: [i32; 4]| -> Result<Matrix4<f64>> {
        if let Some(m) = cache.get(&off) {
            return Ok(*m);
        }
        let mut x = *xi;
        for a in 0..4 {
            x[a] += off[a] as f64 * h;
        }
        let m = metric(&x)?;
        cache.insert(off, m);
        Ok(m)
    };
    let unit = |a: usize, o: i32| {
        let mut e = [0; 4];
        e[a] = o;
        e
    };
    let g = at([0; 4])?;
    // 4th-order stencils at spacing m·h
    type Derivs = ([Matrix4<f64>; 4], [[Matrix4<f64>; 4]; 4]);
    let mut derivs = |m: i32| -> Result<Derivs> {
        let hm = h * m as f64;
        let mut dg = [Matrix4::zeros(); 4];
        let mut ddg = [[Matrix4::zeros(); 4]; 4];
        for a in 0..4 {
            for &(o, c) in &D1 {
                dg[a] += at(unit(a, m * o))? * c;
            }
            dg[a] /= 12.0 * hm;
            let mut s = g * -30.0;
            for (o, c) in [(-2, -1.0), (-1, 16.0), (1, 16.0), (2, -1.0)] {
                s += at(unit(a, m * o))? * c;
            }
            ddg[a][a] = s / (12.0 * hm * hm);
            for b in 0..a {
                let mut s = Matrix4::zeros();
                for &(oa, ca) in &D1 {
                    for &(ob, cb) in &D1 {
                        let mut off = unit(a, m * oa);
                        off[b] = m * ob;
                        s += at(off)? * (ca * cb);
                    }
                }
                ddg[a][b] = s / (144.0 * hm * hm);
                ddg[b][a] = ddg[a][b];
            }
        }
        Ok((dg, ddg))
    };
    let (dg1, ddg1) = derivs(1)?;
    let (dg2, ddg2) = derivs(2)?;
    // Richardson: the h⁴ error terms cancel
    let rich = |fine: Matrix4<f64>, coarse: Matrix4<f64>| (fine * 16.0 - coarse) / 15.0;
    let dg: [Matrix4<f64>; 4] = std::array::from_fn(|a| rich(dg1[a], dg2[a]));
    let ddg: [[Matrix4<f64>; 4]; 4] =
        std::array::from_fn(|a| std::array::from_fn(|b| rich(ddg1[a][b], ddg2[a][b])));
    let ginv = g
        .try_inverse()
        .ok_or(Error::MetricConditioning(f64::INFINITY))?;
    // Γ^e_ab
    let mut gam = [[[0.0; 4]; 4]; 4];
    for e in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let mut s = 0.0;
                for f in 0..4 {
                    s += ginv[(e, f)] * (dg[a][(f, b)] + dg[b][(f, a)] - dg[f][(a, b)]);
                }
                gam[e][a][b] = 0.5 * s;
            }
        }
    }
    let mut riem = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut v = 0.5
                        * (ddg[b][c][(a, d)] + ddg[a][d][(b, c)]
                            - ddg[a][c][(b, d)]
                            - ddg[b][d][(a, c)]);
                    for e in 0..4 {
                        for f in 0..4 {
                            v += g[(e, f)]
                                * (gam[e][b][c] * gam[f][a][d] - gam[e][b][d] * gam[f][a][c]);
                        }
                    }
                    riem[a][b][c][d] = v;
                }
            }
        }
    }
    let mut ric = Matrix4::zeros();
    for b in 0..4 {
        for d in 0..4 {
            let mut s = 0.0;
            for a in 0..4 {
                for c in 0..4 {
                    s += ginv[(a, c)] * riem[a][b][c][d];
                }
            }
            ric[(b, d)] = s;
        }
    }
    let ric = (ric + ric.transpose()) * 0.5;
    let scalar = (ginv * ric).trace();
    Ok(Curvature {
        g,
        riem,
        ric,
        scalar,
    })
}

/// Orthonormal 2-form basis: self-dual `(e12+e34, e13+e42, e14+e23)/√2`, then anti-self-dual.
fn two_forms() -> [Matrix4<f64>; 6] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let form = |pairs: [(usize, usize, f64); 2]| {
        let mut m = Matrix4::zeros();
        for (i, j, v) in pairs {
            m[(i, j)] = v * s;
            m[(j, i)] = -v * s;
        }
        m
    };
    [
        form([(0, 1, 1.0), (2, 3, 1.0)]),
        form([(0, 2, 1.0), (3, 1, 1.0)]),
        form([(0, 3, 1.0), (1, 2, 1.0)]),
        form([(0, 1, 1.0), (2, 3, -1.0)]),
        form([(0, 2, 1.0), (3, 1, -1.0)]),
        form([(0, 3, 1.0), (1, 2, -1.0)]),
    ]
}

type Tensor4 = [[[[f64; 4]; 4]; 4]; 4];

/// Components in the frame whose columns are `e`.
fn to_frame(t: &Tensor4, e: &Matrix4<f64>) -> Tensor4 {
    let mut cur = *t;
    for slot in 0..4 {
        let mut next = [[[[0.0; 4]; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let idx = [i, j, k, l];
                        let mut s = 0.0;
                        for a in 0..4 {
                            let mut src = idx;
                            src[slot] = a;
                            s += cur[src[0]][src[1]][src[2]][src[3]] * e[(a, idx[slot])];
                        }
                        next[i][j][k][l] = s;
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

fn operator_on_forms(t: &Tensor4) -> Matrix6 {
    let forms = two_forms();
    Matrix6::from_fn(|a, b| {
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        s += forms[a][(i, j)] * t[i][j][k][l] * forms[b][(k, l)];
                    }
                }
            }
        }
        0.25 * s
    })
}

fn sorted_eigenvalues(m: Matrix3<f64>) -> [f64; 3] {
    let sym = (m + m.transpose()) * 0.5;
    let mut e: Vec<f64> = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    [e[0], e[1], e[2]]
}

/// Curvature report for an arbitrary metric field (components in 4 coordinates).
pub fn report_from_metric<F>(metric: &F, xi: &[f64; 4], h: f64) -> Result<CurvatureReport>
where
    F: Fn(&[f64; 4]) -> Result<Matrix4<f64>>,
{
    let cv = curvature_at(metric, xi, h)?;
    let g = cv.g;
    let eig = SymmetricEigen::new(g).eigenvalues;
    let (lo, hi) = (eig.min(), eig.max());
    if lo <= 0.0 {
        return Err(Error::MetricConditioning(lo / hi));
    }
    let cond = hi / lo;
    if cond > MAX_CONDITION {
        return Err(Error::MetricConditioning(cond));
    }
    let s = cv.scalar;
    let einstein_residual = (cv.ric - g * (s / 4.0)).norm() / g.norm();

    let mut weyl = cv.riem;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let r = &cv.ric;
                    weyl[a][b][c][d] -= 0.5
                        * (r[(a, c)] * g[(b, d)] - r[(a, d)] * g[(b, c)] + r[(b, d)] * g[(a, c)]
                            - r[(b, c)] * g[(a, d)]);
                    weyl[a][b][c][d] += s / 6.0 * (g[(a, c)] * g[(b, d)] - g[(a, d)] * g[(b, c)]);
                }
            }
        }
    }
    let chol = g.cholesky().ok_or(Error::MetricConditioning(cond))?;
    let frame = chol
        .l()
        .transpose()
        .try_inverse()
        .ok_or(Error::MetricConditioning(cond))?;
    let r_op = operator_on_forms(&to_frame(&cv.riem, &frame));
    let w_op = operator_on_forms(&to_frame(&weyl, &frame));
    let w_sd: Matrix3<f64> = w_op.fixed_view::<3, 3>(0, 0).into_owned();
    let w_asd: Matrix3<f64> = w_op.fixed_view::<3, 3>(3, 3).into_owned();
    let (sd, asd) = (w_sd.norm(), w_asd.norm());
    let riem_norm = r_op.norm();

    let flat = sd.max(asd) < FLAT_WEYL_TOL * riem_norm;
    let ratio = sd.min(asd) / (sd + asd + 1e-30);
    let vanishing_half = if flat {
        VanishingHalf::Both
    } else if ratio < SELF_DUAL_TOL {
        if sd < asd {
            VanishingHalf::SelfDual
        } else {
            VanishingHalf::AntiSelfDual
        }
    } else {
        VanishingHalf::Neither
    };
    let weyl_spectrum = sorted_eigenvalues(if sd >= asd { w_sd } else { w_asd });
    let verdict = if einstein_residual >= EINSTEIN_TOL {
        Verdict::Failed
    } else if flat {
        Verdict::ConformallyFlat
    } else if ratio < SELF_DUAL_TOL && s < 0.0 {
        Verdict::SdeNegative
    } else {
        Verdict::Failed
    };
    let mut op = [[0.0; 6]; 6];
    for (a, row) in op.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v = r_op[(a, b)];
        }
    }
    Ok(CurvatureReport {
        xi: *xi,
        scalar: s,
        einstein_residual,
        weyl_sd_norm: sd,
        weyl_asd_norm: asd,
        riem_norm,
        vanishing_half,
        weyl_spectrum,
        curvature_operator: op,
        verdict,
    })
}

/// Curvature of the quotient metric at a slice point.
pub fn curvature_report(
    chart: &QuotientChart,
    xi: &[f64; 4],
    steps: &FdSteps,
) -> Result<CurvatureReport> {
    let metric = |x: &[f64; 4]| -> Result<Matrix4<f64>> {
        let s = quotient_metric(chart, x, steps.inner)?;
        Ok(Matrix4::from_fn(|a, b| s.g[a][b]))
    };
    report_from_metric(&metric, xi, steps.outer)
}

/// Largest relative distance of the curvature operator from `(s/12)·I` (constant sectional curvature).
pub fn constant_curvature_residual(reports: &[CurvatureReport]) -> Result<f64> {
    if reports.len() < 2 {
        return Err(Error::Contract("need at least two reports".into()));
    }
    Ok(reports
        .iter()
        .map(|r| {
            let op = Matrix6::from_fn(|a, b| r.curvature_operator[a][b]);
            (op - Matrix6::identity() * (r.scalar / 12.0)).norm() / op.norm()
        })
        .fold(0.0, f64::max))
}

/// Eigenvalues of the non-vanishing Weyl half; requires an SDE verdict.
pub fn weyl_plus_spectrum(report: &CurvatureReport) -> Result<[f64; 3]> {
    if report.verdict != Verdict::SdeNegative {
        return Err(Error::Contract(format!(
            "verdict is {:?}, not SDE_Negative",
            report.verdict
        )));
    }
    Ok(report.weyl_spectrum)
}

/// Distance of a trace-free spectrum from the type `(2,−1,−1)` up to scale:
/// the smaller gap between neighbouring eigenvalues over the largest modulus.
pub fn hermitian_type_defect(spectrum: &[f64; 3]) -> f64 {
    let m = spectrum.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if m == 0.0 {
        return f64::INFINITY;
    }
    (spectrum[1] - spectrum[0])
        .abs()
        .min((spectrum[2] - spectrum[1]).abs())
        / m
}

/// Relative spread `(max − min)/|mean|` of the scalar curvature.
pub fn scalar_spread(reports: &[CurvatureReport]) -> f64 {
    let s: Vec<f64> = reports.iter().map(|r| r.scalar).collect();
    let mean = s.iter().sum::<f64>() / s.len().max(1) as f64;
    let (lo, hi) = s
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    (hi - lo) / mean.abs()
}
