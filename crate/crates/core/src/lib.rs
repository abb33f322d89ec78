//! Exact enumeration of Seiberg-Witten basic classes for manifolds obtained
//! by rationally blowing down a `C_p` chain in a blown-up `S²×S²`.
//!
//! Classes are integer vectors in a fixed PD basis and every quantity is
//! computed exactly. The entry point is [`search::run_pipeline`] on a
//! [`search::SearchConfig`], obtained from [`presets::load_preset`] or
//! [`presets::parse_config`].

pub mod blowdown;
pub mod exact;
pub mod lattice;
pub mod presets;
pub mod search;

pub use blowdown::{BlowdownChain, BlowdownError};
pub use exact::{BigRat, IntMatrix, LinalgError, RatMatrix};
pub use lattice::{ClassVector, IntersectionForm, LatticeError, RationalClass, SphereClass};
pub use presets::{load_preset, parse_config, serialize_config, ConfigDocument, PRESET_LABELS};
pub use search::{run_pipeline, run_pipeline_with, PipelineOptions, SearchConfig, StageReport};
