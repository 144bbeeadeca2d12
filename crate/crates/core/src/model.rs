//! Core vocabulary of the taxonomy: traits, subtraits, parameters, policy
//! categories, transaction channels, trait tables and the taxonomy tree.
//!
//! Everything in here is plain immutable data once constructed. Constraint
//! checking lives in [`crate::validate`], serialization in [`crate::ingest`].

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }

        impl PartialEq<str> for $name {
            fn eq(&self, other: &str) -> bool {
                self.0 == other
            }
        }

        impl PartialEq<&str> for $name {
            fn eq(&self, other: &&str) -> bool {
                self.0 == *other
            }
        }
    };
}

string_id!(
    /// Identifier of a [`TraitDef`].
    TraitId
);
string_id!(
    /// Identifier of a [`SubtraitDef`], unique within its parent trait.
    SubtraitId
);
string_id!(
    /// Identifier of a [`PolicyCategory`].
    CategoryId
);
string_id!(
    /// Identifier of a [`TransactionChannel`].
    ChannelId
);
string_id!(
    /// Identifier of a [`TaxonomyNode`].
    NodeId
);
string_id!(
    /// Identifier of a [`TraitTable`].
    TableId
);

/// Label of the taxonomy root; every category's group path starts here.
pub const ROOT_LABEL: &str = "Economic Policy";

/// Cross tag carried by fiscal rows that also belong to international trade policy.
pub const INTERNATIONAL_TRADE_TAG: &str = "international-trade";

/// Value type of a parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParameterKind {
    /// Dimensionless fraction.
    Rate,
    /// Currency units.
    Amount,
    /// Ordered (threshold, rate) bands.
    Ladder,
    /// Duration.
    Period,
    /// Free-text predicate.
    Condition,
    /// Names a good, service, asset, job, agent or market.
    Reference,
    /// Optional lower and upper numeric bounds.
    Bounds,
}

impl ParameterKind {
    pub const ALL: [ParameterKind; 7] = [
        ParameterKind::Rate,
        ParameterKind::Amount,
        ParameterKind::Ladder,
        ParameterKind::Period,
        ParameterKind::Condition,
        ParameterKind::Reference,
        ParameterKind::Bounds,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParameterKind::Rate => "rate",
            ParameterKind::Amount => "amount",
            ParameterKind::Ladder => "ladder",
            ParameterKind::Period => "period",
            ParameterKind::Condition => "condition",
            ParameterKind::Reference => "reference",
            ParameterKind::Bounds => "bounds",
        }
    }
}

impl fmt::Display for ParameterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named, typed parameter required to implement a trait, subtrait or category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterSpec {
    pub name: String,
    pub kind: ParameterKind,
    #[serde(default)]
    pub description: String,
}

impl ParameterSpec {
    pub fn new(name: impl Into<String>, kind: ParameterKind) -> Self {
        Self {
            name: name.into(),
            kind,
            description: String::new(),
        }
    }
}

/// One mutually exclusive option of a categorical trait.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubtraitDef {
    pub id: SubtraitId,
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub parameters: Vec<ParameterSpec>,
}

/// A property of a cash flow, participant or instrument whose implementation
/// forms an atomic policy.
///
/// When `subtraits` is non-empty the trait is categorical: an implementation
/// selects exactly one subtrait.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraitDef {
    pub id: TraitId,
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub parameters: Vec<ParameterSpec>,
    #[serde(default)]
    pub subtraits: Vec<SubtraitDef>,
}

impl TraitDef {
    pub fn is_categorical(&self) -> bool {
        !self.subtraits.is_empty()
    }

    pub fn subtrait(&self, id: &str) -> Option<&SubtraitDef> {
        self.subtraits.iter().find(|s| s.id == id)
    }
}

/// Which income statement a transaction channel belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Authority {
    Government,
    MonetaryAuthority,
}

/// Top-level sections allowed as the first element of a statement path.
pub const STATEMENT_SECTIONS: [&str; 3] = ["Operating Income", "Non-Operating Income", "Irregular Items"];

/// A revenue or expense item on a government or central bank income statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransactionChannel {
    pub id: ChannelId,
    pub authority: Authority,
    /// Ancestors of this item on the statement, starting at a statement section.
    pub statement_path: Vec<String>,
    pub name: String,
    #[serde(default)]
    pub description: String,
}

/// A taxonomy leaf such as a tax type, subsidy type or market operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyCategory {
    pub id: CategoryId,
    pub name: String,
    pub description: String,
    pub own_parameters: Vec<ParameterSpec>,
    /// Group labels from the root down to the category's parent node.
    pub group_path: Vec<String>,
    pub cross_tags: BTreeSet<String>,
    pub implementable_trait_ids: BTreeSet<TraitId>,
    pub channel_ref: Option<ChannelId>,
}

impl PolicyCategory {
    pub fn implements(&self, trait_id: &str) -> bool {
        self.implementable_trait_ids.contains(trait_id)
    }

    pub fn is_trait_less(&self) -> bool {
        self.implementable_trait_ids.is_empty()
    }
}

/// Layout of one checkmark table: which traits are its columns and which
/// categories are its rows. The checkmarks themselves are the categories'
/// `implementable_trait_ids` restricted to the columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraitTable {
    pub id: TableId,
    pub name: String,
    pub columns: Vec<TraitId>,
    pub rows: Vec<CategoryId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Group,
    /// A leaf backed by a category that appears in a trait table.
    Category,
    /// A leaf backed by a category that implements no traits.
    StandalonePolicy,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Group => "group",
            NodeKind::Category => "category",
            NodeKind::StandalonePolicy => "standalone-policy",
        }
    }

    pub fn is_leaf(self) -> bool {
        !matches!(self, NodeKind::Group)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaxonomyNode {
    pub id: NodeId,
    pub label: String,
    pub kind: NodeKind,
    #[serde(default)]
    pub children: Vec<NodeId>,
    #[serde(default, rename = "category", skip_serializing_if = "Option::is_none")]
    pub category_ref: Option<CategoryId>,
    /// Alternative labels accepted by lookups.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
}

/// The taxonomy tree as a node arena addressed by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaxonomyTree {
    pub root: NodeId,
    pub nodes: Vec<TaxonomyNode>,
}

impl TaxonomyTree {
    pub fn node(&self, id: &str) -> Option<&TaxonomyNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    /// Parent of every node reachable as someone's child. Nodes listed under
    /// several parents keep the first one.
    pub fn parents(&self) -> HashMap<&str, &str> {
        let mut parents = HashMap::new();
        for node in &self.nodes {
            for child in &node.children {
                parents.entry(child.as_str()).or_insert(node.id.as_str());
            }
        }
        parents
    }

    /// Labels of the ancestors of `id`, root first, excluding `id` itself.
    /// `None` when the node is unknown or not connected to the root.
    pub fn ancestor_labels(&self, id: &str) -> Option<Vec<String>> {
        let parents = self.parents();
        let by_id: HashMap<&str, &TaxonomyNode> =
            self.nodes.iter().map(|n| (n.id.as_str(), n)).collect();
        by_id.get(id)?;
        let mut labels = Vec::new();
        let mut current = id;
        let mut steps = 0;
        while current != self.root.as_str() {
            let parent = *parents.get(current)?;
            labels.push(by_id.get(parent)?.label.clone());
            current = parent;
            steps += 1;
            if steps > self.nodes.len() {
                return None;
            }
        }
        labels.reverse();
        Some(labels)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default)]
    pub version: String,
    #[serde(default)]
    pub title: String,
    /// Provenance and encoding notes.
    #[serde(default)]
    pub notes: Vec<String>,
}

/// The whole dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaxonomyModel {
    pub metadata: Metadata,
    pub traits: Vec<TraitDef>,
    pub channels: Vec<TransactionChannel>,
    pub categories: Vec<PolicyCategory>,
    pub tables: Vec<TraitTable>,
    pub tree: TaxonomyTree,
}

impl TaxonomyModel {
    pub fn trait_def(&self, id: &str) -> Option<&TraitDef> {
        self.traits.iter().find(|t| t.id == id)
    }

    pub fn category(&self, id: &str) -> Option<&PolicyCategory> {
        self.categories.iter().find(|c| c.id == id)
    }

    pub fn channel(&self, id: &str) -> Option<&TransactionChannel> {
        self.channels.iter().find(|c| c.id == id)
    }

    pub fn table(&self, id: &str) -> Option<&TraitTable> {
        self.tables.iter().find(|t| t.id == id)
    }

    /// The table listing `category`, if any.
    pub fn table_of(&self, category: &str) -> Option<&TraitTable> {
        self.tables
            .iter()
            .find(|t| t.rows.iter().any(|r| r == category))
    }

    pub fn has_checkmark(&self, category: &str, trait_id: &str) -> bool {
        self.category(category).is_some_and(|c| c.implements(trait_id))
    }

    /// Total number of checkmarks across all tables.
    pub fn checkmark_total(&self) -> usize {
        self.tables
            .iter()
            .map(|t| {
                t.rows
                    .iter()
                    .filter_map(|r| self.category(r.as_str()))
                    .map(|c| t.columns.iter().filter(|col| c.implements(col.as_str())).count())
                    .sum::<usize>()
            })
            .sum()
    }

    pub fn trait_less_categories(&self) -> impl Iterator<Item = &PolicyCategory> {
        self.categories.iter().filter(|c| c.is_trait_less())
    }
}
