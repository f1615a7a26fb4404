//! Quaternions, indefinite quaternionic spaces H^{k,l}, charts, ambient metrics and
//! exponentials of 3×3 quaternionic matrices.

pub mod chart;
pub mod expm;
pub mod hmatrix;
pub mod hvector;
pub mod quaternion;

pub use chart::{
    ambient_metric, chart_tangent, from_chart, metric_gram, to_chart, unit_tangent, vt_to_u_chart,
    ChartPt,
};
pub use expm::{mat_exp, PlRegime};
pub use hmatrix::{CMat6, HMat3};
pub use hvector::{
    basis_change, basis_change_inverse, form_f, form_vtilde, psi, region, Basis, HVec, Region,
};
pub use quaternion::{ImQuat, Quat};
