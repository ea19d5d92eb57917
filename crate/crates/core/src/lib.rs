//! Attribution of article processing charges for Gold Open Access
//! publications to research institutions.
//!
//! Five cost-sharing models are supported (first author, reprint author,
//! equal shares, fractional by author-institution pair, fractional by
//! author). Shares are exact rationals; every attributed publication
//! distributes exactly one unit of cost.
//!
//! With the default `parallel` feature, corpus-wide aggregation and line
//! validation run on rayon; without it the same code paths run sequentially.

pub mod analytics;
pub mod attribution;
pub mod cooperation;
pub mod doctype;
pub mod error;
pub mod ingest;
pub mod model;
pub mod numeric;
mod par;
pub mod report;

pub use attribution::{attribute, participants, Share, ShareVector};
pub use cooperation::classify_cooperation;
pub use doctype::is_included_document;
pub use error::{AnalyticsError, AttributionError, IngestError, IssnError, ModelError};
pub use model::{
    Affiliation, AuthorRecord, CooperationType, CostModel, Country, InstitutionId, ParticipantScope, Publication,
    Sector, SectorRegistry,
};
