//! Upper and lower bounds for the first eigenvalue along the collapsing
//! capped-cylinder family. Rayleigh quotients of `cos(τ r)` bound it from
//! above once the pole-centred ball sits inside the off-centre unit ball;
//! diameter bounds feed the `π²/(4D²)` lower bound.

mod containment;
mod diameter;
mod plan;
mod quotient;
mod sandwich;
mod upper;

pub use containment::{containment_check, ContainmentReport};
pub use diameter::{diameter_estimate, diameter_upper_bound, DiameterEstimate};
pub use plan::FamilyIndexPlan;
pub use quotient::{rayleigh_quotient, RadialFunction, RayleighQuotient};
pub use sandwich::{busemann_lower_bound, sandwich, BoundSandwich};
pub use upper::{closed_form_upper, family_upper_bound, UpperBound};
