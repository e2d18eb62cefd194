//! Statistical and measure-theoretic checks: discrepancy, Birkhoff averages,
//! power chains and the defective census, half strips, cross-sections and
//! Fourier identities.

pub mod chains;
pub mod intervals;
pub mod region;
pub mod stats;

pub use chains::{
    auto_level, defective_census, half_strip_chains, power_chain, CensusParams, CensusReport, ChainMember, HalfStripVerdict,
    OrientationCensus, PowerChain,
};
pub use intervals::{
    fourier_parseval_check, shift_separation_measure, symm_diff_measure, translate, IntervalUnion, ParsevalCheck, SeparationReport,
};
pub use region::{cross_section_fraction, multiplicity_profile, z_cross_section, Box3, BoxRegion, CrossSection, Rect, RectangleUnionRegion};
pub use stats::{
    birkhoff_average, box_discrepancy, box_visits, curve_csv, discrepancy_curve, overlap_identity_check, y_orbit, DiscrepancyReport,
    OverlapCheck,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ErgodicError {
    #[error("need at least {needed} orbit points, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("U1 has measure 0 or 1")]
    DegenerateU1,
    #[error("{what} = {index} outside {lo}..={hi}")]
    IndexOutOfRange { what: &'static str, index: i64, lo: i64, hi: i64 },
    #[error("{0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Geodesic(#[from] crate::geodesic::GeodesicError),
    #[error(transparent)]
    Arithmetic(#[from] crate::arithmetic::ArithmeticError),
}

impl ErgodicError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::InsufficientSamples { .. } => "InsufficientSamples",
            Self::DegenerateU1 => "DegenerateU1",
            Self::IndexOutOfRange { .. } => "IndexOutOfRange",
            Self::InvalidParameter(_) => "InvalidParameter",
            Self::Geodesic(e) => e.name(),
            Self::Arithmetic(e) => e.name(),
        }
    }
}

pub type Result<T> = std::result::Result<T, ErgodicError>;
