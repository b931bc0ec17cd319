//! Divergence measures on finite probability distributions, the generic
//! f-divergence framework, closed-form secant/curvature bounds over a
//! likelihood-ratio range, and a randomized harness that verifies every
//! inequality chain with slack margins.

pub mod bounds;
pub mod csiszar;
pub mod error;
pub mod harness;
pub mod measures;
mod numeric;
pub mod simplex;

pub use bounds::{
    beta_delta, beta_psi, extrema_g, g_function, link_tolerance, proposition_chain,
    theorem32_chain, BoundChainReport, ChainLink, ExtremaPair, GFamily, Proposition,
};
pub use csiszar::{
    beta_phi_s, bound_set, c_f, check_generator, gamma_phi_s, rho_c_f, BoundSet, Generator,
    GeneratorReport,
};
pub use error::{Error, Result};
pub use harness::{errata_compare, fuzz, verify_all, ErrataEntry, FuzzConfig, FuzzSummary};
pub use measures::{divergence, phi_s, power_mean, rho_phi_s, MeasureKind};
pub use simplex::{ratio_range, Distribution, RatioRange};
