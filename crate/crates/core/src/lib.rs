//! Finite angle spaces.
//!
//! An angle space is a finite set of labelled points with a betweenness
//! relation and an angle at every point for every pair of other points. This
//! crate checks the betweenness and angle axioms, decides whether the angles
//! come from a euclidean-compatible distance, reconstructs that distance up to
//! scale, and decides and realizes conformal embeddings into `E^n`.
//!
//! Modules:
//! - [`space`]: domain types and construction.
//! - [`axioms`]: betweenness and angle-function axioms.
//! - [`compat`]: compatibility conditions and the metric-side Stewart check.
//! - [`metrize`](mod@metrize): distance reconstruction from angles.
//! - [`embed`]: Gram determinants, flatness, embeddability and realization.
//! - [`io`] and [`gen`]: documents and the seeded euclidean generator.

pub mod axioms;
pub mod compat;
pub mod embed;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod io;
pub mod linalg;
pub mod metric;
pub mod metrize;
pub mod points;
pub mod space;
pub mod tolerance;

pub use axioms::{check_angle_axioms, check_betweenness_axioms, is_trivial, AxiomId, AxiomReport};
pub use compat::{
    admits_metric, angles_from_metric, check_euclidean, check_global_compatibility,
    check_second_axiom, check_stewart, check_tetragon_metrizability, CheckReport, CheckViolation,
    ConditionId, MetrizationDecision,
};
pub use embed::{
    conformal_embed, embeddable_angles, embeddable_metric, flatness_and_dimension, gram, realize,
    simplex_volume_sq, Coordinates, FlatnessReport, SimplexVolume, Volume,
};
pub use error::{Error, Result};
pub use gen::{gen_euclidean, GeneratedDocuments, GeneratedInstance};
pub use io::{
    parse_metric, parse_space, serialize_metric, serialize_space, CoordinatesDocument,
    MetricDocument, SpaceDocument,
};
pub use metric::DistanceMatrix;
pub use metrize::{distance_from_base, metrize, residuals, BasePair, CompatibilityResiduals};
pub use points::{PointId, PointSet};
pub use space::{build_angle_space, AngleEntry, AngleSpace, AngleTable, BetweennessRelation};
pub use tolerance::ToleranceConfig;
