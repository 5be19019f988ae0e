//! Distribution of the fractional parts `{αγ}` of scaled zeta-zero ordinates.
//!
//! * [`zeros`] and [`rs`]: zero lists, either ingested from tables or computed
//!   with a Riemann-Siegel engine.
//! * [`alpha`]: the scaling constant, its resonance class and prime-power data.
//! * [`theory`]: the limiting density `g_α` and derived constants.
//! * [`empirical`]: discrepancy, histograms, Weyl and Landau sums.
//! * [`construct`]: the adversarial bump-sum counterexample.

pub mod alpha;
pub mod construct;
pub mod dd;
pub mod empirical;
pub mod error;
pub mod hp;
pub mod kahan;
pub mod rs;
pub mod scalar;
pub mod theory;
pub mod zeros;

pub use alpha::{classify_alpha, parse_alpha, AlphaClass, AlphaSpec, SearchBounds, Verdict};
pub use empirical::{fractional_parts, EmpiricalMeasure, TestFunction};
pub use error::{Error, Result};
pub use hp::Hp;
pub use rs::{EngineConfig, RsEngine};
pub use zeros::{ZeroList, Provenance};

/// Density model in double precision.
pub type Density = theory::DensityModel<f64>;
/// Density model in single precision.
pub type Density32 = theory::DensityModel<f32>;
/// Compensated accumulator in double precision.
pub type Kahan = kahan::KahanSum<f64>;
