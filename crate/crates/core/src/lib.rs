//! Lambda value-at-risk under capacities.
//!
//! Finite outcome spaces, capacities with several evaluation backends,
//! ΛVaR and its representations, worst cases over divergence balls and
//! likelihood-ratio bands, multi-agent risk sharing, and brute-force
//! oracles for cross-checking all of the above.

pub mod ambiguity;
pub mod capacity;
pub mod divergence;
pub mod downset;
pub mod error;
pub mod ext;
pub mod lambda;
pub mod lambdavar;
pub mod oracle;
pub mod risksharing;
pub mod space;

pub use ambiguity::{
    distortion_rm, robust_distortion_bound, robust_lambda_var, worst_case_capacity, AmbiguitySet,
    RobustReport,
};
pub use capacity::{capacity_dual, is_subadditive, Backend, Capacity};
pub use divergence::{g_inverse, g_value, transform_lambda, x_delta, DistortionCurve, PhiFn};
pub use downset::{induced_rho, Collection, DownsetFamily, Monotonicity};
pub use error::{LvarError, Result};
pub use ext::ExtReal;
pub use lambda::{Direction, LambdaFn};
pub use lambdavar::{choquet_quantile, lambda_var, lambda_var_plus, lambda_var_via_choquet};
pub use oracle::{
    brute_comonotone, brute_divergence_witness, brute_inf_convolution, brute_lambda_var,
    brute_sup_over_ball, greedy_band_capacity, GridSpec,
};
pub use risksharing::{
    comonotone_inf_convolution, finiteness_check, inf_convolution, inf_convolution_homogeneous,
    inf_convolution_homogeneous_constant, inf_convolution_y_grid, kappa, lambda_star,
    robust_sharing, Agent, Finiteness, FinitenessClass, Flag, RobustAgent, RobustSharing,
    SharingResult, Staircase, Witness,
};
pub use space::{Event, FiniteSpace, ProbabilityMeasure, RandomVariable};
