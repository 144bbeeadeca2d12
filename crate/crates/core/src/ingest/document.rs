//! On-disk shape of `*.taxonomy.json` files (schema version "1").
//!
//! Sections: `schema_version`, `meta`, `traits`, `channels`, `categories`,
//! `tables`, `tree`. Tables hold the checkmarks as named rows with explicit
//! trait-column ids; categories' implementable traits are materialized from
//! them on load. All sections are optional at this level so that extension
//! documents can carry only what they add.

use serde::{Deserialize, Serialize};

use crate::model::{
    CategoryId, ChannelId, Metadata, NodeId, ParameterSpec, TableId, TaxonomyNode, TraitDef, TraitId,
    TransactionChannel,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaxonomyDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Metadata>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traits: Option<Vec<TraitDef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channels: Option<Vec<TransactionChannel>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub categories: Option<Vec<CategoryDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<Vec<TableDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub id: CategoryId,
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub own_parameters: Vec<ParameterSpec>,
    #[serde(default)]
    pub cross_tags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelId>,
    /// Optional; must agree with the tree when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_path: Option<Vec<String>>,
    /// Optional; must agree with the tables when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub implementable_traits: Option<Vec<TraitId>>,
}

impl CategoryDoc {
    /// The category without its inline, derivable fields.
    pub(crate) fn core(&self) -> CategoryDoc {
        CategoryDoc {
            group_path: None,
            implementable_traits: None,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    pub id: TableId,
    /// Required for new tables; extensions may omit it when extending an existing one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub columns: Vec<TraitId>,
    #[serde(default)]
    pub rows: Vec<RowDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowDoc {
    pub category: CategoryId,
    #[serde(default)]
    pub marks: Vec<TraitId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<NodeId>,
    #[serde(default)]
    pub nodes: Vec<TaxonomyNode>,
}
