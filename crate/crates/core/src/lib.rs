//! Economic-policy taxonomy engine.
//!
//! Traits with parameters and mutually exclusive subtraits, policy categories
//! that may implement them, transaction channels and the taxonomy tree are
//! loaded from a JSON document ([`ingest`]), checked ([`validate`]) and
//! queried ([`enumerate`]). Every checkmark of a trait table is an
//! atomic-policy schema ([`atomic`]). [`analytics`] turns the
//! category-by-trait table into correlation, distance and spanning-tree
//! artifacts, and [`export`] renders them as DOT, CSV and markdown.

pub mod analytics;
pub mod atomic;
pub mod cli;
pub mod diagnostic;
pub mod enumerate;
pub mod export;
pub mod ingest;
pub mod model;
pub mod validate;

pub use atomic::{instantiate_atomic_policy, AtomicPolicy, AtomicPolicySchema, InstantiateError, ParameterValue};
pub use diagnostic::{Code, Diagnostic, Severity};
pub use ingest::{bundled_model, merge_extension, parse_taxonomy_document, serialize_taxonomy_document};
pub use model::TaxonomyModel;
pub use validate::validate_model;
