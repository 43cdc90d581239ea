//! Arbitrary-precision arithmetic and independent oracles for constants and special functions.

pub mod agm;
pub mod bessel;
pub mod constants;
pub mod expr;
pub mod hypergeom;
pub mod lseries;
pub mod real;
pub mod special;

pub use agm::{agm, elliptic_e, elliptic_k, pi};
pub use bessel::{bessel_k0, bessel_k0_f64};
pub use constants::{constant, stored, stored_value, Constant, ConstantId, Provenance, StoredId};
pub use expr::{ConstExpr, Evaluated, Func};
pub use hypergeom::hypergeometric_pfq;
pub use lseries::{eta_product_coefficients, lvalue_eta8, LValue};
pub use real::{Precision, Real};
pub use special::{euler_gamma, gamma, incomplete_gamma_upper, ln_gamma, trigamma, zeta_int};
