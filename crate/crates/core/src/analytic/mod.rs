//! Special functions, quadrature, closed-form identities and profile fits.

mod beta;
mod bloore;
mod fits;
mod quadrature;

pub use beta::reg_inc_beta;
pub use bloore::{bloore_integral_checks, jac_real_nu, jac_real_nu_direct, BlooreReport, IdentityCheck, IDENTITY_TOLERANCE};
pub use fits::{beta_tail_model, fit_beta_tail, fit_cosine, fit_power, power_compare, FitModel, FitResult};
pub use quadrature::{integrate, QuadResult};
