//! Error type shared by every module.

use thiserror::Error;

/// Domain errors. The variant name doubles as a stable identifier for the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector is isotropic (|<v,v>| below tolerance)")]
    IsotropicVector,
    #[error("tau undefined: g12*g23 vanishes")]
    DegenerateTau,
    #[error("points coincide projectively")]
    SamePoint,
    #[error("line is euclidean")]
    EuclideanLine,
    #[error("gram inertia ({pos} positive, {neg} negative) does not embed")]
    IncompatibleInertia { pos: usize, neg: usize },
    #[error("gram matrix has a zero diagonal entry")]
    ZeroDiagonal,
    #[error("isometry is not regular")]
    NotRegular,
    #[error("isometries are not conjugate: {0}")]
    NotConjugate(String),
    #[error("not a product of two reflections in negative points")]
    NotTwoReflectionProduct,
    #[error("path changes sign")]
    SignChange,
    #[error("adjacent path samples are too far apart")]
    StepTooLarge,
    #[error("points are equal")]
    EqualPoints,
    #[error("points are orthogonal")]
    OrthogonalPoints,
    #[error("geodesic is euclidean")]
    EuclideanGeodesic,
    #[error("point is not on the geodesic")]
    NotOnGeodesic,
    #[error("configuration is exceptional: {0}")]
    ExceptionalCase(String),
    #[error("triple is not strongly regular")]
    NotStronglyRegular,
    #[error("coordinates are not admissible: {0}")]
    InadmissibleCoords(String),
    #[error("trace equals -1")]
    TraceMinusOne,
    #[error("target value is below the minimum of the line")]
    Unreachable,
    #[error("target sits on the ramification curve (s = {s})")]
    OnRamification { s: f64 },
    #[error("invariants differ: {0}")]
    IncompatibleInvariants(String),
    #[error("move leaves the admissible region")]
    LeavesAdmissibleRegion,
    #[error("not a pentagon: {0}")]
    NotAPentagon(String),
    #[error("pentagon moduli are not admissible: {0}")]
    InadmissibleModuli(String),
    #[error("pentagons have different delta")]
    DifferentDelta,
    #[error("matrix is not in SU(2,1): {0}")]
    NotAnIsometry(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Variant name, e.g. `"NotRegular"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::IsotropicVector => "IsotropicVector",
            Error::DegenerateTau => "DegenerateTau",
            Error::SamePoint => "SamePoint",
            Error::EuclideanLine => "EuclideanLine",
            Error::IncompatibleInertia { .. } => "IncompatibleInertia",
            Error::ZeroDiagonal => "ZeroDiagonal",
            Error::NotRegular => "NotRegular",
            Error::NotConjugate(_) => "NotConjugate",
            Error::NotTwoReflectionProduct => "NotTwoReflectionProduct",
            Error::SignChange => "SignChange",
            Error::StepTooLarge => "StepTooLarge",
            Error::EqualPoints => "EqualPoints",
            Error::OrthogonalPoints => "OrthogonalPoints",
            Error::EuclideanGeodesic => "EuclideanGeodesic",
            Error::NotOnGeodesic => "NotOnGeodesic",
            Error::ExceptionalCase(_) => "ExceptionalCase",
            Error::NotStronglyRegular => "NotStronglyRegular",
            Error::InadmissibleCoords(_) => "InadmissibleCoords",
            Error::TraceMinusOne => "TraceMinusOne",
            Error::Unreachable => "Unreachable",
            Error::OnRamification { .. } => "OnRamification",
            Error::IncompatibleInvariants(_) => "IncompatibleInvariants",
            Error::LeavesAdmissibleRegion => "LeavesAdmissibleRegion",
            Error::NotAPentagon(_) => "NotAPentagon",
            Error::InadmissibleModuli(_) => "InadmissibleModuli",
            Error::DifferentDelta => "DifferentDelta",
            Error::NotAnIsometry(_) => "NotAnIsometry",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
