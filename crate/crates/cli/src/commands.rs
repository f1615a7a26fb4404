//! Subcommand implementations.

use rayon::prelude::*;
use serde::Serialize;

use qkq::curvature::{
    curvature_report, scalar_spread, CurvatureReport, VanishingHalf, Verdict, EINSTEIN_TOL,
};
use qkq::hnum::{region, Basis, HMat3, HVec, Quat, Region};
use qkq::hyperfun::{
    eigenfunction_of_quotient, eval_f, laplace_check, pullback_check, HalfPlanePoint, PoleSet,
    TorusFamily,
};
use qkq::moments::{
    bergman_smooth, mu_family, zeroset_nonempty, zeroset_sample, BergmanVerdict, Family,
    WeightTriple, WitnessLocus,
};
use qkq::orbits::{
    bryant_case, classify as classify_element, make_normal_form, GeneratorForm, SignStatus,
    Sp12Element,
};
use qkq::slices::{grid_points, GridBox, QuotientChart};
use qkq::HVector;

use crate::config::{Format, GridSpec, RunConfig};
use crate::output::{fmt_float, Report};
use crate::CliError;

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Inline JSON, or the contents of a file when written `@path`.
fn json_arg<T: serde::de::DeserializeOwned>(what: &str, raw: &str) -> Result<T, CliError> {
    let text = match raw.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?,
        None => raw.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("malformed {what} JSON: {e}")))
}

fn parse_basis(b: Option<&str>) -> Result<Basis, CliError> {
    match b.unwrap_or("u") {
        "u" => Ok(Basis::U),
        "vtilde" | "v" => Ok(Basis::VTilde),
        other => Err(CliError::Input(format!(
            "unknown basis `{other}` (expected u or vtilde)"
        ))),
    }
}

fn arity(name: &str, p: &[f64], n: usize) -> Result<(), CliError> {
    if p.len() != n {
        return Err(CliError::Input(format!(
            "family {name} takes {n} parameters, got {}",
            p.len()
        )));
    }
    Ok(())
}

pub fn family(cfg: &RunConfig) -> Result<Family, CliError> {
    let name = cfg.require_family()?;
    let p = cfg.params();
    Ok(match name {
        "pl" => {
            arity(name, p, 3)?;
            Family::Pl {
                p: [p[0], p[1], p[2]],
            }
        }
        "gen-pedersen" => {
            arity(name, p, 2)?;
            Family::GenPedersen { p: p[0], q: p[1] }
        }
        "height-one" => {
            arity(name, p, 2)?;
            Family::HeightOne { p: p[0], q: p[1] }
        }
        "height-two" => {
            arity(name, p, 1)?;
            Family::HeightTwo { p: p[0] }
        }
        "bergman" => {
            arity(name, p, 3)?;
            Family::Bergman {
                p: [p[0], p[1], p[2]],
            }
        }
        other => return Err(CliError::Input(format!("unknown family `{other}`"))),
    })
}

fn torus_family(cfg: &RunConfig) -> Result<TorusFamily, CliError> {
    match family_alias(cfg)? {
        Family::Pl { p } => Ok(TorusFamily::Diagonal { p }),
        Family::HeightOne { p, q } => Ok(TorusFamily::HeightOne { p, q }),
        Family::HeightTwo { p } => Ok(TorusFamily::HeightTwo { p }),
        f => Err(CliError::Input(format!(
            "no pullback eigenfunction for family {}",
            f.name()
        ))),
    }
}

fn family_alias(cfg: &RunConfig) -> Result<Family, CliError> {
    if cfg.family.as_deref() == Some("diagonal") {
        let mut c = cfg.clone();
        c.family = Some("pl".into());
        return family(&c);
    }
    family(cfg)
}

fn moment_family(t: &TorusFamily) -> Family {
    match *t {
        TorusFamily::Diagonal { p } => Family::Pl { p },
        TorusFamily::HeightOne { p, q } => Family::HeightOne { p, q },
        TorusFamily::HeightTwo { p } => Family::HeightTwo { p },
    }
}

/// Analytic emptiness criteria, checked before any numerical search.
fn check_nonempty(f: &Family) -> Result<(), CliError> {
    match *f {
        Family::Pl { p } if p.iter().all(|v| v.fract() == 0.0) => {
            let w = WeightTriple::new(p[0] as i64, p[1] as i64, p[2] as i64)?;
            if !zeroset_nonempty(&w)? {
                return Err(CliError::Empty(format!(
                    "zero set empty: max(|p1/p0|, |p2/p0|) ≤ 1 for weights {:?}",
                    w.p
                )));
            }
        }
        Family::HeightOne { p, q } if p > 0.0 && p >= q.abs() => {
            return Err(CliError::Empty(format!(
                "zero set empty: p = {p} ≥ |q| = {}",
                q.abs()
            )));
        }
        _ => {}
    }
    Ok(())
}

fn snap(v: f64) -> f64 {
    if (v - v.round()).abs() < 1e-9 {
        v.round() + 0.0
    } else {
        v
    }
}

/// Removes round-off from recovered parameters so integral values print as integers.
fn snap_form(f: GeneratorForm) -> GeneratorForm {
    match f {
        GeneratorForm::T0Diag { p } => GeneratorForm::T0Diag { p: p.map(snap) },
        GeneratorForm::T0Split { lambda, p, q } => GeneratorForm::T0Split {
            lambda: snap(lambda),
            p: snap(p),
            q: snap(q),
        },
        GeneratorForm::T1 { lambda, p, q } => GeneratorForm::T1 {
            lambda: snap(lambda),
            p: snap(p),
            q: snap(q),
        },
        GeneratorForm::T2 { lambda, p } => GeneratorForm::T2 {
            lambda: snap(lambda),
            p: snap(p),
        },
    }
}

fn roots_line(v: &[[f64; 2]]) -> String {
    if v.is_empty() {
        return "none".into();
    }
    let fmt = |z: &[f64; 2]| format!("{}{:+}i", snap(z[0]), snap(z[1]));
    v.iter().map(fmt).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct ClassifyReport {
    form: GeneratorForm,
    height: usize,
    sign: SignStatus,
    case: String,
    pc: Vec<[f64; 2]>,
    pm: Vec<[f64; 2]>,
}

pub fn classify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let basis = parse_basis(cfg.basis.as_deref())?;
    let y = match (&cfg.matrix, &cfg.form) {
        (Some(m), None) => {
            let raw: [[[f64; 4]; 3]; 3] = json_arg("matrix", m)?;
            Sp12Element::new(HMat3(raw.map(|row| row.map(Quat::from_array))), basis)?
        }
        (None, Some(f)) => make_normal_form(json_arg("form", f)?, basis)?,
        _ => {
            return Err(CliError::Input(
                "give exactly one of --matrix or --form".into(),
            ))
        }
    };
    let c = classify_element(&y)?;
    let form = snap_form(c.form);
    let b = bryant_case(&form);
    let mut line = format!("{form}, height {}, {}", c.height, b.case_id);
    if c.sign == SignStatus::Unresolved {
        line.push_str(", sign unresolved");
    }
    println!("{line}");
    let report = ClassifyReport {
        form,
        height: c.height,
        sign: c.sign,
        case: b.case_id.to_string(),
        pc: b.pc.iter().map(|z| [z.re, z.im]).collect(),
        pm: b.pm.iter().map(|z| [z.re, z.im]).collect(),
    };
    println!("Pc roots: {}", roots_line(&report.pc));
    println!("Pm roots: {}", roots_line(&report.pm));
    Report {
        json: &report,
        header: &["form", "height", "case"],
        rows: vec![vec![
            form.to_string(),
            c.height.to_string(),
            report.case.clone(),
        ]],
    }
    .write(cfg.out.as_deref(), cfg.format())?;
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct MomentSample {
    point: Vec<[f64; 4]>,
    moment: [f64; 3],
    residual: f64,
    region: Region,
}

#[derive(Serialize)]
struct MomentReport {
    family: Family,
    seed: Option<u64>,
    samples: Vec<MomentSample>,
}

fn moment_sample(f: &Family, u: &HVector) -> Result<MomentSample, CliError> {
    let m = mu_family(f, u)?;
    Ok(MomentSample {
        point: u.comps.iter().map(|q| q.to_array()).collect(),
        moment: m.value.to_array(),
        residual: m.norm(),
        region: region(u)?,
    })
}

pub fn moment(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = family(cfg)?;
    let (samples, seed) = match &cfg.point {
        Some(p) => {
            let raw: [[f64; 4]; 3] = json_arg("point", p)?;
            let (k, l) = f.signature();
            let u = HVec::with_basis(k, l, f.basis(), raw.map(Quat::from_array).to_vec())?;
            (vec![moment_sample(&f, &u)?], None)
        }
        None => {
            check_nonempty(&f)?;
            let found = zeroset_sample(&f, cfg.seed(), cfg.count.unwrap_or(10))?;
            (
                found
                    .iter()
                    .map(|u| moment_sample(&f, u))
                    .collect::<Result<Vec<_>, _>>()?,
                Some(cfg.seed()),
            )
        }
    };
    let worst = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    println!(
        "{}: {} point(s), max |μ| = {:.3e}",
        f.name(),
        samples.len(),
        worst
    );
    let rows = samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut r = vec![i.to_string()];
            r.extend(s.point.iter().flatten().map(|v| fmt_float(*v)));
            r.push(fmt_float(s.residual));
            r
        })
        .collect();
    let header = [
        "index", "u0_1", "u0_i", "u0_j", "u0_k", "u1_1", "u1_i", "u1_j", "u1_k", "u2_1", "u2_i",
        "u2_j", "u2_k", "residual",
    ];
    Report {
        json: &MomentReport {
            family: f,
            seed,
            samples,
        },
        header: &header,
        rows,
    }
    .write(cfg.out.as_deref(), cfg.format())?;
    Ok(Outcome::Pass)
}

/// Grid points: `N` per axis inside `bx`, or the explicit axes.
fn grid(spec: &GridSpec, bx: &GridBox) -> Vec<[f64; 4]> {
    match spec {
        GridSpec::Count(n) => grid_points(bx, *n),
        GridSpec::Axes(axes) => {
            let ax: Vec<Vec<f64>> = axes.iter().map(|&(lo, hi, n)| axis(lo, hi, n)).collect();
            let mut out = Vec::new();
            for &a in &ax[0] {
                for &b in &ax[1] {
                    for &c in &ax[2] {
                        for &d in &ax[3] {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
            out
        }
    }
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        vec![(lo + hi) / 2.0]
    } else {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

fn xi4(v: &[f64]) -> Result<[f64; 4], CliError> {
    v.try_into()
        .map_err(|_| CliError::Input(format!("--xi needs 4 values, got {}", v.len())))
}

#[derive(Serialize)]
struct SlicePoint {
    xi: [f64; 4],
    in_domain: bool,
    basis: Option<Basis>,
    coords: Vec<[f64; 4]>,
    moment_residual: Option<f64>,
}

#[derive(Serialize)]
struct SliceReport {
    family: Family,
    points: Vec<SlicePoint>,
}

pub fn slice(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = family(cfg)?;
    check_nonempty(&f)?;
    let chart = QuotientChart::new(f)?;
    let xis = match (&cfg.xi, &cfg.grid) {
        (Some(x), _) => vec![xi4(x)?],
        (None, Some(g)) => {
            g.validate(4)?;
            grid(g, &chart.default_box())
        }
        (None, None) => grid_points(&chart.default_box(), 1),
    };
    let points: Vec<SlicePoint> = xis
        .iter()
        .map(|xi| match chart.embed(xi) {
            Ok(pt) => SlicePoint {
                xi: *xi,
                in_domain: true,
                basis: Some(pt.basis),
                coords: pt.coords.iter().map(|q| q.to_array()).collect(),
                moment_residual: chart.moment_residual(xi).ok(),
            },
            Err(_) => SlicePoint {
                xi: *xi,
                in_domain: false,
                basis: None,
                coords: vec![],
                moment_residual: None,
            },
        })
        .collect();
    if cfg.xi.is_some() && !points[0].in_domain {
        // report the domain violation itself
        chart.embed(&points[0].xi)?;
    }
    let inside = points.iter().filter(|p| p.in_domain).count();
    let worst = points
        .iter()
        .filter_map(|p| p.moment_residual)
        .fold(0.0, f64::max);
    println!(
        "{}: {inside}/{} points in the slice domain, max moment residual {worst:.3e}",
        f.name(),
        points.len()
    );
    let rows = points
        .iter()
        .map(|p| {
            let mut r: Vec<String> = p.xi.iter().map(|v| fmt_float(*v)).collect();
            r.push(p.in_domain.to_string());
            r.push(p.moment_residual.map(fmt_float).unwrap_or_default());
            r
        })
        .collect();
    Report {
        json: &SliceReport { family: f, points },
        header: &["xi0", "xi1", "xi2", "xi3", "in_domain", "moment_residual"],
        rows,
    }
    .write(cfg.out.as_deref(), cfg.format())?;
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct SdeSummary {
    points: usize,
    skipped: usize,
    failed_points: usize,
    max_einstein_residual: f64,
    scalar_min: f64,
    scalar_max: f64,
    scalar_spread: f64,
    verdict: String,
    vanishing_half: Option<VanishingHalf>,
    pass: bool,
}

#[derive(Serialize)]
struct SdeReport {
    family: Family,
    h: f64,
    tol: f64,
    summary: SdeSummary,
    reports: Vec<CurvatureReport>,
    errors: Vec<(usize, String)>,
}

/// Relative scalar-curvature spread allowed across one chart.
const SCALAR_SPREAD_TOL: f64 = 1e-3;

pub fn verify_sde(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = family(cfg)?;
    let chart = QuotientChart::new(f)?;
    let spec = cfg.grid.clone().unwrap_or(GridSpec::Count(3));
    spec.validate(4)?;
    let mut steps = chart.default_steps();
    if let Some(h) = cfg.positive_h()? {
        steps.outer = h;
    }
    let tol = cfg.positive_tol(EINSTEIN_TOL)?;
    let xis: Vec<[f64; 4]> = grid(&spec, &chart.default_box())
        .into_iter()
        .filter(|x| chart.in_domain(x))
        .collect();
    let total = grid(&spec, &chart.default_box()).len();
    if xis.is_empty() {
        return Err(CliError::Input(format!(
            "none of the {total} grid points lies in the slice domain"
        )));
    }
    let results: Vec<_> = xis
        .par_iter()
        .map(|xi| curvature_report(&chart, xi, &steps))
        .collect();
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(r) => reports.push(r),
            Err(e) => errors.push((i, e.to_string())),
        }
    }
    let max_e = reports
        .iter()
        .map(|r| r.einstein_residual)
        .fold(0.0, f64::max);
    let smin = reports
        .iter()
        .map(|r| r.scalar)
        .fold(f64::INFINITY, f64::min);
    let smax = reports
        .iter()
        .map(|r| r.scalar)
        .fold(f64::NEG_INFINITY, f64::max);
    let spread = scalar_spread(&reports);
    let all = |v: Verdict| !reports.is_empty() && reports.iter().all(|r| r.verdict == v);
    let verdict = if all(Verdict::SdeNegative) {
        "SDE_Negative"
    } else if all(Verdict::ConformallyFlat) {
        "ConformallyFlat"
    } else {
        "Failed"
    };
    let half = reports.first().map(|r| r.vanishing_half);
    let consistent = reports.iter().all(|r| Some(r.vanishing_half) == half);
    let pass = errors.is_empty()
        && verdict != "Failed"
        && max_e < tol
        && smax < 0.0
        && spread < SCALAR_SPREAD_TOL
        && consistent;
    println!(
        "{}: {} points, max Einstein residual {max_e:.3e}, scalar in [{smin:.6}, {smax:.6}], verdict {verdict}: {}",
        f.name(),
        reports.len(),
        pass_word(pass)
    );
    for (i, e) in &errors {
        eprintln!("point {i}: {e}");
    }
    let rows = reports
        .iter()
        .map(|r| {
            let mut row: Vec<String> = r.xi.iter().map(|v| fmt_float(*v)).collect();
            row.extend(
                [
                    r.scalar,
                    r.einstein_residual,
                    r.weyl_sd_norm,
                    r.weyl_asd_norm,
                ]
                .map(fmt_float),
            );
            row.push(
                serde_json::to_value(r.verdict)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .unwrap_or_default(),
            );
            row
        })
        .collect();
    let summary = SdeSummary {
        points: reports.len(),
        skipped: total - xis.len(),
        failed_points: errors.len(),
        max_einstein_residual: max_e,
        scalar_min: smin,
        scalar_max: smax,
        scalar_spread: spread,
        verdict: verdict.into(),
        vanishing_half: half.filter(|_| consistent),
        pass,
    };
    let header = [
        "xi0",
        "xi1",
        "xi2",
        "xi3",
        "scalar",
        "einstein_residual",
        "weyl_sd_norm",
        "weyl_asd_norm",
        "verdict",
    ];
    let report = SdeReport {
        family: f,
        h: steps.outer,
        tol,
        summary,
        reports,
        errors,
    };
    Report {
        json: &report,
        header: &header,
        rows,
    }
    .write(cfg.out.as_deref(), cfg.format())?;
    Ok(Outcome::from_pass(pass))
}

fn pole_set(cfg: &RunConfig) -> Result<PoleSet, CliError> {
    if let Some(p) = &cfg.poles {
        return json_arg("poles", p);
    }
    let kind = cfg
        .kind
        .as_deref()
        .ok_or_else(|| CliError::Input("give --kind or --poles".into()))?;
    let p = cfg.params();
    let need = |n: usize| arity(kind, p, n);
    Ok(match kind {
        "monopole" => {
            need(2)?;
            PoleSet::monopole(p[0], p[1])
        }
        "dipole" => {
            need(0)?;
            PoleSet::dipole()
        }
        "tripole" => {
            need(0)?;
            PoleSet::tripole()
        }
        "pedersen" => {
            need(3)?;
            PoleSet::pedersen(p[0], p[1], p[2])
        }
        "multipole" => {
            need(9)?;
            PoleSet::multipole([p[0], p[1], p[2]], [p[3], p[4], p[5]], [p[6], p[7], p[8]])
        }
        other => return Err(CliError::Input(format!("unknown pole kind `{other}`"))),
    })
}

#[derive(Serialize)]
struct EigenPoint {
    rho: f64,
    eta: f64,
    f: f64,
    residual: f64,
}

#[derive(Serialize)]
struct EigenReport {
    poles: PoleSet,
    tol: f64,
    evaluated: usize,
    skipped: usize,
    max_residual: f64,
    pass: bool,
    points: Vec<EigenPoint>,
}

pub fn eigen(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let poles = pole_set(cfg)?;
    if poles.is_empty() {
        return Err(CliError::Empty("pole set is identically zero".into()));
    }
    let spec = cfg
        .grid
        .clone()
        .unwrap_or(GridSpec::Axes(vec![(0.1, 2.0, 50), (-1.0, 1.0, 50)]));
    spec.validate(2)?;
    let axes = match spec {
        GridSpec::Axes(a) => a,
        GridSpec::Count(n) => vec![(0.1, 2.0, n), (-1.0, 1.0, n)],
    };
    if axes[0].0 <= 0.0 {
        return Err(CliError::Input("the ρ axis must stay in ρ > 0".into()));
    }
    let tol = cfg.positive_tol(1e-8)?;
    let mut grid = Vec::new();
    for rho in axis(axes[0].0, axes[0].1, axes[0].2) {
        for eta in axis(axes[1].0, axes[1].1, axes[1].2) {
            grid.push((rho, eta));
        }
    }
    let evaluated: Vec<Option<EigenPoint>> = grid
        .par_iter()
        .map(|&(rho, eta)| {
            let p = HalfPlanePoint::new(rho, eta).ok()?;
            let residual = laplace_check(&poles, &p).ok()?;
            let f = eval_f(&poles, &p).ok()?;
            Some(EigenPoint {
                rho,
                eta,
                f,
                residual,
            })
        })
        .collect();
    let skipped = evaluated.iter().filter(|p| p.is_none()).count();
    let points: Vec<EigenPoint> = evaluated.into_iter().flatten().collect();
    if points.is_empty() {
        return Err(CliError::Empty(
            "every grid point lies on the singular locus".into(),
        ));
    }
    let max_residual = points.iter().map(|p| p.residual).fold(0.0, f64::max);
    let pass = max_residual < tol;
    println!(
        "eigen: {} points ({skipped} skipped near singularities), max residual {max_residual:.3e}: {}",
        points.len(),
        pass_word(pass)
    );
    let rows = points
        .iter()
        .map(|p| [p.rho, p.eta, p.f, p.residual].map(fmt_float).to_vec())
        .collect();
    let report = EigenReport {
        poles,
        tol,
        evaluated: points.len(),
        skipped,
        max_residual,
        pass,
        points,
    };
    Report {
        json: &report,
        header: &["rho", "eta", "f", "residual"],
        rows,
    }
    .write(cfg.out.as_deref(), cfg.format.unwrap_or(Format::Csv))?;
    Ok(Outcome::from_pass(pass))
}

#[derive(Serialize)]
struct PullbackOut {
    family: TorusFamily,
    seed: u64,
    poles: PoleSet,
    tol: f64,
    mean: f64,
    deviation: f64,
    skipped: usize,
    pass: bool,
    ratios: Vec<f64>,
}

pub fn pullback(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let t = torus_family(cfg)?;
    let mf = moment_family(&t);
    check_nonempty(&mf)?;
    let eig = eigenfunction_of_quotient(&t)?;
    let samples = zeroset_sample(&mf, cfg.seed(), cfg.count.unwrap_or(50))?;
    let r = pullback_check(&t, &eig, &samples)?;
    let tol = cfg.positive_tol(1e-6)?;
    if r.ratios.is_empty() {
        return Err(CliError::Empty(
            "every sample lies on the zero set of the quadratic form".into(),
        ));
    }
    let pass = r.deviation < tol;
    println!(
        "pullback {}: {} ratios, mean {:.12}, deviation {:.3e}: {}",
        mf.name(),
        r.ratios.len(),
        r.mean,
        r.deviation,
        pass_word(pass)
    );
    let rows = r
        .ratios
        .iter()
        .enumerate()
        .map(|(i, v)| vec![i.to_string(), fmt_float(*v)])
        .collect();
    let out = PullbackOut {
        family: t,
        seed: cfg.seed(),
        poles: eig.poles,
        tol,
        mean: r.mean,
        deviation: r.deviation,
        skipped: r.skipped,
        pass,
        ratios: r.ratios,
    };
    Report {
        json: &out,
        header: &["index", "ratio"],
        rows,
    }
    .write(cfg.out.as_deref(), cfg.format())?;
    Ok(Outcome::from_pass(pass))
}

#[derive(Serialize)]
struct BergmanRow {
    weights: [i64; 3],
    verdict: BergmanVerdict,
}

fn describe(v: &BergmanVerdict) -> String {
    match v {
        BergmanVerdict::Smooth => "smooth".into(),
        BergmanVerdict::Orbifold {
            locus: WitnessLocus::FixedPoint,
            ..
        } => "orbifold, circle has fixed points".into(),
        BergmanVerdict::Orbifold { order, locus } => {
            format!("orbifold, witness order {order} on the {locus:?}")
        }
    }
}

fn integer_weight(v: f64) -> Result<i64, CliError> {
    if v.fract() != 0.0 || v < 0.0 {
        return Err(CliError::Input(format!(
            "weights must be nonnegative integers, got {v}"
        )));
    }
    Ok(v as i64)
}

pub fn bergman(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rows: Vec<BergmanRow> = if let Some(p) = &cfg.params {
        arity("bergman", p, 3)?;
        let w = WeightTriple::new(
            integer_weight(p[0])?,
            integer_weight(p[1])?,
            integer_weight(p[2])?,
        )?;
        let verdict = bergman_smooth(&w)?;
        println!("({},{},{}): {}", w.p[0], w.p[1], w.p[2], describe(&verdict));
        vec![BergmanRow {
            weights: w.p,
            verdict,
        }]
    } else {
        let n = match cfg.grid.clone().unwrap_or(GridSpec::Count(5)) {
            GridSpec::Count(n) if n >= 1 => n as i64,
            _ => {
                return Err(CliError::Input(
                    "bergman takes --grid N (largest weight)".into(),
                ))
            }
        };
        let mut rows = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    if let Ok(w) = WeightTriple::new(a, b, c) {
                        rows.push(BergmanRow {
                            weights: w.p,
                            verdict: bergman_smooth(&w)?,
                        });
                    }
                }
            }
        }
        let smooth: Vec<String> = rows
            .iter()
            .filter(|r| r.verdict == BergmanVerdict::Smooth)
            .map(|r| format!("({},{},{})", r.weights[0], r.weights[1], r.weights[2]))
            .collect();
        println!(
            "bergman: {} weight triples up to {n}, smooth: {}",
            rows.len(),
            smooth.join(" ")
        );
        rows
    };
    let table = rows
        .iter()
        .map(|r| {
            let (kind, order, locus) = match r.verdict {
                BergmanVerdict::Smooth => ("smooth", String::new(), String::new()),
                BergmanVerdict::Orbifold { order, locus } => {
                    ("orbifold", order.to_string(), format!("{locus:?}"))
                }
            };
            let mut row: Vec<String> = r.weights.iter().map(|v| v.to_string()).collect();
            row.extend([kind.to_string(), order, locus]);
            row
        })
        .collect();
    Report {
        json: &rows,
        header: &["p0", "p1", "p2", "verdict", "order", "locus"],
        rows: table,
    }
    .write(cfg.out.as_deref(), cfg.format())?;
    Ok(Outcome::Pass)
}
