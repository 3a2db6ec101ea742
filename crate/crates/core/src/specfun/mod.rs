//! Special-function kernels and the scalar types they run on.

pub mod branch;
pub mod dd;
pub mod gamma;
pub mod hyper;
pub mod jet;
pub mod legendre;
pub mod mp;
pub mod policy;
pub mod real;

pub use branch::{minus_one_power, PhaseSum, QuarterTurns};
pub use dd::Dd;
pub use gamma::{lower_incomplete_gamma, upper_incomplete_gamma};
pub use hyper::{dawson, pfq, reg_2f2_chi_pattern, PfqValue};
pub use legendre::legendre_q_sequence;
pub use mp::Mp;
pub use policy::{PrecisionPolicy, Tier};
pub use real::Real;
