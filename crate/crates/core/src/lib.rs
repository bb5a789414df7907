//! Exact Masur–Veech volumes of strata of Abelian differentials.
//!
//! The pipeline runs bottom-up:
//!
//! - [`exact_arith`]: rationals, Bernoulli numbers, `𝔷(k)` and the graded π-number [`PiValue`].
//! - [`combinatorics`]: partitions, compositions, set partitions and their complements.
//! - [`bracket`]: the single bracket `⟨m⟩` and its set-partition error sum.
//! - [`wick`]: multi-fold inner products over complementary set partitions.
//! - [`f_expansion`]: `𝓕_k` in the `p_λ` basis.
//! - [`volumes`]: `c(m)`, stratum volumes, the principal closed form and the large-genus prediction.
//! - [`siegel_veech`]: Siegel–Veech constants from exact volume ratios.
//!
//! All arithmetic is exact, so results do not depend on evaluation order or
//! on how many rayon workers evaluate a Wick sum.

pub mod bracket;
pub mod combinatorics;
pub mod exact_arith;
pub mod f_expansion;
pub mod siegel_veech;
pub mod volumes;
pub mod wick;

pub use exact_arith::{BigRational, PiValue};
pub use volumes::{Stratum, VolumeOptions, VolumeResult};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid stratum: {0}")]
    InvalidStratum(String),
    #[error("stratum weight {weight} exceeds the feasibility limit {limit}")]
    Infeasible { weight: u32, limit: u32 },
}
