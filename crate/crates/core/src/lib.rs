//! Count models built on the NDOPPE family: the distribution itself, Poisson and
//! negative binomial baselines, maximum-likelihood fitting, compound claim
//! models and simulation.

// `!(x > 0.0)` is the NaN-rejecting form used by every parameter check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod compound;
pub mod dataset;
pub mod distribution;
pub mod error;
pub mod fitting;
pub mod fixtures;
pub mod ndoppe;
pub mod quadrature;
pub mod report;
pub mod simulate;
pub mod specfun;

pub use baselines::{NegBinDist, PoissonDist};
pub use compound::{CompoundModel, MixedDensityValue, Primary};
pub use dataset::{ingest, CountDataset};
pub use distribution::CountDistribution;
pub use error::{Error, Result};
pub use fitting::{FitResult, ModelKind, ModelParams, NbShape};
pub use ndoppe::{stress_strength, CoefficientVector, NdoppeDist};
pub use report::{build_report, OutputFormat, Report};
pub use simulate::{Execution, SampleSummary, SimConfig};
