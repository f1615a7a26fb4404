use num_complex::Complex;

use super::hmatrix::{CMat6, HMat3};
use super::hvector::Basis;
use super::quaternion::Quat;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Taylor terms used after scaling.
const TAYLOR_TERMS: usize = 24;

/// Scaling-and-squaring Taylor exponential of a complex 6×6 matrix.
pub fn expm_series<T: Real>(a: &CMat6<T>) -> CMat6<T> {
    let norm = a.norm1().to_f64().unwrap_or(0.0);
    let mut squarings = 0u32;
    if norm > 0.25 {
        squarings = (norm / 0.25).log2().ceil() as u32;
    }
    let s = T::lit(0.5f64.powi(squarings as i32));
    let x = a.scale(Complex::new(s, T::zero()));
    let mut term = CMat6::identity();
    let mut sum = CMat6::identity();
    for n in 1..=TAYLOR_TERMS {
        term = term
            .mul(&x)
            .scale(Complex::new(T::one() / T::lit(n as f64), T::zero()));
        sum = sum.add(&term);
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

fn sp_tol<T: Real>(y: &HMat3<T>) -> T {
    T::lit(1e-12f64.max(1e4 * T::eps_f64())) * (T::one() + y.max_abs())
}

/// `exp(Y t)` through the complexification (generic route).
pub fn mat_exp<T: Real>(y: &HMat3<T>, basis: Basis, t: T) -> Result<HMat3<T>> {
    let r = y.sp_residual(basis);
    if r > sp_tol(y) {
        return Err(Error::Contract(format!(
            "matrix is not in sp(1,2): residual {r}"
        )));
    }
    let c = y.scale(t).complexify();
    Ok(HMat3::decomplexify(&expm_series(&c)))
}

fn ce<T: Real>(theta: T) -> Quat<T> {
    Quat::exp_i(theta)
}

fn cplx<T: Real>(re: T, im: T) -> Quat<T> {
    Quat::complex(re, im)
}

/// `exp(t diag(i p_0, i p_1, i p_2))`.
pub fn exp_t0_diag<T: Real>(p: [T; 3], t: T) -> HMat3<T> {
    HMat3::diag(p.map(|pa| ce(pa * t)))
}

/// u-basis `exp(t T0Split(λ,p,q))`: `e^{ipt}[[cosh λt, sinh λt],[sinh λt, cosh λt]] ⊕ e^{iqt}`.
pub fn exp_t0_split<T: Real>(lambda: T, p: T, q: T, t: T) -> HMat3<T> {
    let e = ce(p * t);
    let (c, s) = ((lambda * t).cosh(), (lambda * t).sinh());
    let mut m = HMat3::zero();
    m.0[0][0] = e * c;
    m.0[0][1] = e * s;
    m.0[1][0] = e * s;
    m.0[1][1] = e * c;
    m.0[2][2] = ce(q * t);
    m
}

/// u-basis `exp(t T1(λ,p,q))`: `e^{ipt}(I + λtM) ⊕ e^{iqt}` with `M² = 0`.
pub fn exp_t1<T: Real>(lambda: T, p: T, q: T, t: T) -> HMat3<T> {
    let e = ce(p * t);
    let lt = lambda * t;
    let i = Quat::i();
    let mut m = HMat3::zero();
    m.0[0][0] = e * (Quat::one() + i * lt);
    m.0[0][1] = e * (i * lt);
    m.0[1][0] = e * (-i * lt);
    m.0[1][1] = e * (Quat::one() - i * lt);
    m.0[2][2] = ce(q * t);
    m
}

/// u-basis `exp(t T2(λ,p))`: `e^{ipt}(I + λtN + λ²t²N²/2)` with `N³ = 0`.
pub fn exp_t2<T: Real>(lambda: T, p: T, t: T) -> HMat3<T> {
    let lt = lambda * t;
    let h = lt * lt / T::lit(2.0);
    let (o, z) = (T::one(), T::zero());
    let m = HMat3::from_complex([
        [[o + h, z], [h, z], [z, -lt]],
        [[-h, z], [o - h, z], [z, lt]],
        [[z, lt], [z, lt], [o, z]],
    ]);
    m.left_scale(ce(p * t))
}

/// ṽ-basis `exp(t T̃0(λ,p,q))` with `T̃0 = diag(ip+λ, ip−λ, iq)`.
pub fn exp_t0_split_vt<T: Real>(lambda: T, p: T, q: T, t: T) -> HMat3<T> {
    let e = ce(p * t);
    HMat3::diag([e * (lambda * t).exp(), e * (-lambda * t).exp(), ce(q * t)])
}

/// ṽ-basis `exp(t T̃1(λ,p,q))`: `e^{ipt}[[1,0],[−iλt,1]] ⊕ e^{iqt}`.
pub fn exp_t1_vt<T: Real>(lambda: T, p: T, q: T, t: T) -> HMat3<T> {
    let e = ce(p * t);
    let mut m = HMat3::diag([e, e, ce(q * t)]);
    m.0[1][0] = e * cplx(T::zero(), -lambda * t);
    m
}

/// ṽ-basis `exp(t T̃2(λ,p))`: `e^{ipt}[[1,0,0],[−λ²t²/2,1,iλt],[iλt,0,1]]`.
pub fn exp_t2_vt<T: Real>(lambda: T, p: T, t: T) -> HMat3<T> {
    let lt = lambda * t;
    let (o, z) = (T::one(), T::zero());
    let m = HMat3::from_complex([
        [[o, z], [z, z], [z, z]],
        [[-lt * lt / T::lit(2.0), z], [o, z], [z, lt]],
        [[z, lt], [z, z], [o, z]],
    ]);
    m.left_scale(ce(p * t))
}

/// Regimes of `exp(t 𝕋_{p,λ})` by the sign of `λ² − α²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlRegime {
    Plus,
    Zero,
    Minus,
}

/// `α = (p0 − p1)/2`, `β = (p0 + p1)/2`, `γ = √|α² − λ²|`.
pub fn tpl_params<T: Real>(p: [T; 3], lambda: T) -> (T, T, T) {
    let two = T::lit(2.0);
    let alpha = (p[0] - p[1]) / two;
    let beta = (p[0] + p[1]) / two;
    let gamma = (alpha * alpha - lambda * lambda).abs().sqrt();
    (alpha, beta, gamma)
}

/// Generator `[[ip0, λ, 0], [λ, ip1, 0], [0, 0, ip2]]` (u basis).
pub fn tpl_generator<T: Real>(p: [T; 3], lambda: T) -> HMat3<T> {
    let z = T::zero();
    HMat3::from_complex([
        [[z, p[0]], [lambda, z], [z, z]],
        [[lambda, z], [z, p[1]], [z, z]],
        [[z, z], [z, z], [z, p[2]]],
    ])
}

fn tpl_assemble<T: Real>(p: [T; 3], lambda: T, t: T, c: T, s_over: T) -> HMat3<T> {
    // e^{iβt} (c I + s_over K) with K = [[iα, λ],[λ, −iα]]
    let (alpha, beta, _) = tpl_params(p, lambda);
    let e = ce(beta * t);
    let mut m = HMat3::zero();
    m.0[0][0] = e * cplx(c, alpha * s_over);
    m.0[0][1] = e * (lambda * s_over);
    m.0[1][0] = e * (lambda * s_over);
    m.0[1][1] = e * cplx(c, -alpha * s_over);
    m.0[2][2] = ce(p[2] * t);
    m
}

/// Hyperbolic closed form, valid for `λ² > α²`.
pub fn exp_tpl_plus<T: Real>(p: [T; 3], lambda: T, t: T) -> HMat3<T> {
    let (_, _, g) = tpl_params(p, lambda);
    tpl_assemble(p, lambda, t, (g * t).cosh(), (g * t).sinh() / g)
}

/// Parabolic closed form, valid for `λ² = α²`.
pub fn exp_tpl_zero<T: Real>(p: [T; 3], lambda: T, t: T) -> HMat3<T> {
    tpl_assemble(p, lambda, t, T::one(), t)
}

/// Elliptic closed form, valid for `λ² < α²`.
pub fn exp_tpl_minus<T: Real>(p: [T; 3], lambda: T, t: T) -> HMat3<T> {
    let (_, _, g) = tpl_params(p, lambda);
    tpl_assemble(p, lambda, t, (g * t).cos(), (g * t).sin() / g)
}

/// Picks the closed form matching the parameters; `band` is the width of the parabolic regime.
pub fn exp_tpl<T: Real>(p: [T; 3], lambda: T, t: T, band: T) -> (PlRegime, HMat3<T>) {
    let (alpha, _, _) = tpl_params(p, lambda);
    let d = lambda * lambda - alpha * alpha;
    if d.abs() <= band {
        (PlRegime::Zero, exp_tpl_zero(p, lambda, t))
    } else if d > T::zero() {
        (PlRegime::Plus, exp_tpl_plus(p, lambda, t))
    } else {
        (PlRegime::Minus, exp_tpl_minus(p, lambda, t))
    }
}
