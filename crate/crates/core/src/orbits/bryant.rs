use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::GeneratorForm;

type C64 = Complex<f64>;

/// Roots closer than this are identified.
const ROOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
    CohomOne,
    Homogeneous,
    Exceptional,
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Case1 => "Bryant Case 1",
            Self::Case2 => "Bryant Case 2",
            Self::Case3 => "Bryant Case 3",
            Self::Case4 => "Bryant Case 4",
            Self::CohomOne => "cohomogeneity one",
            Self::Homogeneous => "homogeneous",
            Self::Exceptional => "Exceptional",
        };
        f.write_str(s)
    }
}

/// Characteristic and minimal polynomials as root multisets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BryantCase {
    pub case_id: CaseId,
    pub pc: Vec<C64>,
    pub pm: Vec<C64>,
}

impl BryantCase {
    /// Every root of `Pm` occurs in `Pc` at least as often.
    pub fn pm_divides_pc(&self) -> bool {
        distinct(&self.pm)
            .iter()
            .all(|&r| count(&self.pm, r) <= count(&self.pc, r))
    }

    pub fn pc_root_sum(&self) -> C64 {
        self.pc.iter().sum()
    }
}

fn count(v: &[C64], r: C64) -> usize {
    v.iter().filter(|&&x| (x - r).norm() < ROOT_TOL).count()
}

fn distinct(v: &[C64]) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::new();
    for &x in v {
        if !out.iter().any(|&y| (x - y).norm() < ROOT_TOL) {
            out.push(x);
        }
    }
    out
}

fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn is_zero(v: f64) -> bool {
    v.abs() < ROOT_TOL
}

/// Sorts roots by real then imaginary part for stable output.
fn sorted(mut v: Vec<C64>) -> Vec<C64> {
    v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    v
}

/// Bryant's case for a normal form, by inverting the parameter maps
/// `p0 = r0 + r1, p1 = −(r0 + r2), p2 = −(r0 + r3)` (and their analogues).
pub fn bryant_case(f: &GeneratorForm) -> BryantCase {
    match *f {
        GeneratorForm::T0Diag { p } => {
            let [p0, p1, p2] = p;
            let pc = vec![
                re((p0 - p1 - p2) / 2.0),
                re((p0 + p1 + p2) / 2.0),
                re((-p0 - p1 + p2) / 2.0),
                re((-p0 + p1 - p2) / 2.0),
            ];
            let pm = distinct(&pc);
            let case_id = if p.iter().any(|&v| is_zero(v)) {
                CaseId::Exceptional
            } else {
                match pm.len() {
                    4 => CaseId::Case4,
                    3 => CaseId::CohomOne,
                    _ => CaseId::Homogeneous,
                }
            };
            BryantCase {
                case_id,
                pc: sorted(pc),
                pm: sorted(pm),
            }
        }
        GeneratorForm::T0Split { lambda, p, q } => {
            let r = -q / 2.0;
            let pc = vec![
                re(p + q / 2.0),
                re(q / 2.0 - p),
                C64::new(r, lambda),
                C64::new(r, -lambda),
            ];
            let pm = distinct(&pc);
            let case_id = if is_zero(q) {
                CaseId::Exceptional
            } else if is_zero(p) {
                CaseId::CohomOne
            } else {
                CaseId::Case1
            };
            BryantCase {
                case_id,
                pc: sorted(pc),
                pm: sorted(pm),
            }
        }
        GeneratorForm::T1 { p, q, .. } => {
            let r = -q / 2.0;
            let (r1, r2) = (p + q / 2.0, q / 2.0 - p);
            let pc = vec![re(r1), re(r2), re(r), re(r)];
            // r carries the 2-block; the other roots are semisimple
            let mut pm = vec![re(r), re(r)];
            for x in distinct(&[re(r1), re(r2)]) {
                if (x - re(r)).norm() >= ROOT_TOL {
                    pm.push(x);
                }
            }
            let case_id = if is_zero(q) {
                CaseId::Exceptional
            } else if distinct(&pc).len() == 4 {
                CaseId::Case3
            } else {
                CaseId::CohomOne
            };
            BryantCase {
                case_id,
                pc: sorted(pc),
                pm: sorted(pm),
            }
        }
        GeneratorForm::T2 { p, .. } => {
            let r = -p / 2.0;
            let r1 = 3.0 * p / 2.0;
            let pc = vec![re(r1), re(r), re(r), re(r)];
            let (pm, case_id) = if is_zero(p) {
                (vec![re(0.0); 3], CaseId::Exceptional)
            } else {
                (pc.clone(), CaseId::Case2)
            };
            BryantCase {
                case_id,
                pc: sorted(pc),
                pm: sorted(pm),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let b = bryant_case(&GeneratorForm::T0Diag { p: [1.0, 2.0, 3.0] });
        assert_eq!(b.case_id, CaseId::Case4);
        let b = bryant_case(&GeneratorForm::T2 {
            lambda: 1.0,
            p: 2.0,
        });
        assert_eq!(b.case_id, CaseId::Case2);
        assert_eq!(count(&b.pc, re(-1.0)), 3);
        assert_eq!(count(&b.pc, re(3.0)), 1);
        let b = bryant_case(&GeneratorForm::T1 {
            lambda: 1.0,
            p: 0.0,
            q: 0.0,
        });
        assert_eq!(b.case_id, CaseId::Exceptional);
        assert_eq!(b.pc, vec![re(0.0); 4]);
        assert_eq!(b.pm, vec![re(0.0); 2]);
    }

    #[test]
    fn degenerate_diagonal_cases() {
        assert_eq!(
            bryant_case(&GeneratorForm::T0Diag { p: [1.0, 1.0, 1.0] }).case_id,
            CaseId::Homogeneous
        );
        assert_eq!(
            bryant_case(&GeneratorForm::T0Diag { p: [1.0, 2.0, 1.0] }).case_id,
            CaseId::CohomOne
        );
        assert_eq!(
            bryant_case(&GeneratorForm::T0Diag { p: [0.0, 0.0, 1.0] }).case_id,
            CaseId::Exceptional
        );
    }

    #[test]
    fn height_one_with_equal_weights() {
        // T1(1,p,p): Pc = (t − 3p/2)(t + p/2)³, Pm = (t − 3p/2)(t + p/2)²
        let b = bryant_case(&GeneratorForm::T1 {
            lambda: 1.0,
            p: 2.0,
            q: 2.0,
        });
        assert_eq!(b.case_id, CaseId::CohomOne);
        assert_eq!(count(&b.pc, re(-1.0)), 3);
        assert_eq!(count(&b.pm, re(-1.0)), 2);
        assert!(b.pm_divides_pc());
        assert!(b.pc_root_sum().norm() < 1e-12);
    }
}
