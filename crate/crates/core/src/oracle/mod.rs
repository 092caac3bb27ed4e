//! Numerical cross-checks that share no code path with the closed forms.

pub mod audit;
pub mod bath;
pub mod effective;
pub mod ode;
pub mod time_domain;

pub use audit::{run_audit, AuditRow};
pub use bath::{simulate_discretized_bath, BathRun, DiscretizedBathModel};
pub use effective::{integrate_effective, EffectiveSystem};
pub use ode::{integrate, OdeOptions, OdeSolution};
pub use time_domain::{cascaded_heralding, time_domain_scatter, CascadeRun, TimeDomainRun};
