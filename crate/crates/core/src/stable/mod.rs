//! Standard resolutions, chain-map lifts, pseudo-kernels and the
//! represented-by-monomorphisms criterion.

mod lift;
mod rbm;
mod standard;
mod torsion;

pub use lift::lift_chain_map;
pub use rbm::{
    cone_of, cone_with_window, is_perfect_exact, is_perfect_exact_minimized, is_rbm, pseudo_from_cone,
    pseudo_kernel_cokernel, rbm_from_cone, rbm_report, report_from_cone, theta, theta_from_cone, ConeData, PerfectCheck, PseudoKernelResult, RbmWitness, StableReport, ThetaSequence,
};
pub use standard::{standard_resolution, StandardResolution};
pub use torsion::{
    check_stable_iso_certificate, ext_dual_vanishes, j2, j2_psi, kernel_sequence, natural_map, psi,
    stably_similar, torsionless, torsionless_by_evaluation, J2Data, KernelSequence,
};
