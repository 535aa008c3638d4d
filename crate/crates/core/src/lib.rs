//! Board-of-directors interlock engine: ingest of director factors and
//! board connection files, a weighted director graph, aggregate analytics,
//! persisted snapshots and a seeded synthetic corpus generator.

pub mod analytics;
pub mod error;
pub mod filter;
pub mod graph;
pub mod ingest;
pub mod model;
pub mod snapshot;
pub mod store;
pub mod synth;

pub use error::{IngestError, QueryError, StoreError, SynthConfigError};
pub use filter::FilterSpec;
pub use model::{CompanyId, DirectorId, Gender, League, Year};
pub use snapshot::{Snapshot, SnapshotParts};
