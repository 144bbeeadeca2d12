//! Atomic-policy enumeration, checkmark counts, the nested taxonomy tree and
//! name lookup.

use std::collections::HashSet;

use crate::atomic::AtomicPolicySchema;
use crate::diagnostic::{Code, Diagnostic};
use crate::model::{CategoryId, NodeId, NodeKind, PolicyCategory, TaxonomyModel, TaxonomyNode, TraitId};

/// Conjunctive restrictions on [`enumerate_schemas`]. Every present field
/// must resolve against the model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumerationFilter {
    /// Table id.
    pub table: Option<String>,
    /// Group labels from the root, e.g. `["Economic Policy", "Stabilization Policy"]`.
    pub group_prefix: Option<Vec<String>>,
    pub cross_tag: Option<String>,
    pub trait_id: Option<String>,
    /// Emit one schema per subtrait instead of one per checkmark.
    pub expand_subtraits: bool,
}

impl EnumerationFilter {
    pub fn table(mut self, table: impl Into<String>) -> Self {
        self.table = Some(table.into());
        self
    }

    pub fn group_prefix<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        self.group_prefix = Some(labels.into_iter().map(Into::into).collect());
        self
    }

    pub fn cross_tag(mut self, tag: impl Into<String>) -> Self {
        self.cross_tag = Some(tag.into());
        self
    }

    pub fn trait_id(mut self, trait_id: impl Into<String>) -> Self {
        self.trait_id = Some(trait_id.into());
        self
    }

    pub fn expand_subtraits(mut self, expand: bool) -> Self {
        self.expand_subtraits = expand;
        self
    }

    /// Checks every present field and returns the group prefix spelled with
    /// canonical node labels.
    fn check(&self, model: &TaxonomyModel) -> Result<Option<Vec<String>>, Diagnostic> {
        if let Some(t) = &self.table {
            if model.table(t).is_none() {
                return Err(bad_filter("table", t, "no such table"));
            }
        }
        let prefix = match &self.group_prefix {
            None => None,
            Some(p) => Some(
                canonical_group_path(model, p)
                    .ok_or_else(|| bad_filter("group", &p.join(" > "), "no such group path"))?,
            ),
        };
        if let Some(tag) = &self.cross_tag {
            if !model.categories.iter().any(|c| c.cross_tags.contains(tag)) {
                return Err(bad_filter("tag", tag, "no category carries this tag"));
            }
        }
        if let Some(t) = &self.trait_id {
            if model.trait_def(t).is_none() {
                return Err(bad_filter("trait", t, "no such trait"));
            }
        }
        Ok(prefix)
    }
}

fn bad_filter(field: &str, value: &str, why: &str) -> Diagnostic {
    Diagnostic::error(Code::BadFilter, format!("--{field}"), format!("`{value}`: {why}"))
}

/// Follows `labels` from the root, matching node labels or aliases
/// case-insensitively, and returns the canonical labels of that path.
fn canonical_group_path(model: &TaxonomyModel, labels: &[String]) -> Option<Vec<String>> {
    let (first, rest) = labels.split_first()?;
    let mut node = model.tree.node(model.tree.root.as_str())?;
    if !label_matches(node, first) {
        return None;
    }
    let mut path = vec![node.label.clone()];
    for label in rest {
        node = node
            .children
            .iter()
            .filter_map(|c| model.tree.node(c.as_str()))
            .find(|c| label_matches(c, label))?;
        path.push(node.label.clone());
    }
    Some(path)
}

fn label_matches(node: &TaxonomyNode, label: &str) -> bool {
    node.label.eq_ignore_ascii_case(label) || node.aliases.iter().any(|a| a.eq_ignore_ascii_case(label))
}

/// Group labels from the root down to and including node `id`.
pub fn node_path(model: &TaxonomyModel, id: &str) -> Option<Vec<String>> {
    let mut path = model.tree.ancestor_labels(id)?;
    path.push(model.tree.node(id)?.label.clone());
    Some(path)
}

/// One schema per checkmark surviving `filter`, in table order, then row
/// order, then column order.
pub fn enumerate_schemas(
    model: &TaxonomyModel,
    filter: &EnumerationFilter,
) -> Result<Vec<AtomicPolicySchema>, Diagnostic> {
    let prefix = filter.check(model)?;
    let admits = |c: &PolicyCategory| {
        prefix.as_ref().is_none_or(|p| c.group_path.starts_with(p))
            && filter.cross_tag.as_ref().is_none_or(|t| c.cross_tags.contains(t))
    };
    let mut out = Vec::new();
    for table in &model.tables {
        if filter.table.as_ref().is_some_and(|t| table.id != t.as_str()) {
            continue;
        }
        for row in &table.rows {
            let Some(category) = model.category(row.as_str()) else {
                continue;
            };
            if !admits(category) {
                continue;
            }
            for column in &table.columns {
                if !category.implements(column.as_str())
                    || filter.trait_id.as_ref().is_some_and(|t| column != t.as_str())
                {
                    continue;
                }
                let subtraits = model
                    .trait_def(column.as_str())
                    .filter(|_| filter.expand_subtraits)
                    .map(|t| t.subtraits.as_slice())
                    .unwrap_or_default();
                if subtraits.is_empty() {
                    out.push(schema(row, column, None));
                } else {
                    out.extend(subtraits.iter().map(|s| schema(row, column, Some(s.id.clone()))));
                }
            }
        }
    }
    Ok(out)
}

fn schema(category: &CategoryId, trait_id: &TraitId, subtrait: Option<crate::model::SubtraitId>) -> AtomicPolicySchema {
    AtomicPolicySchema {
        category_id: category.clone(),
        trait_id: trait_id.clone(),
        subtrait_id: subtrait,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountBy {
    Table,
    Category,
    Trait,
}

impl CountBy {
    pub fn as_str(self) -> &'static str {
        match self {
            CountBy::Table => "table",
            CountBy::Category => "category",
            CountBy::Trait => "trait",
        }
    }
}

/// Checkmark counts keyed by table, category or trait id, in document order.
/// Keys with no checkmarks are listed with 0; the counts sum to
/// [`TaxonomyModel::checkmark_total`].
pub fn count_checkmarks(model: &TaxonomyModel, by: CountBy) -> Vec<(String, usize)> {
    let tabulated = |cat: &PolicyCategory, trait_id: &TraitId| {
        model
            .table_of(cat.id.as_str())
            .is_some_and(|t| t.columns.contains(trait_id))
    };
    match by {
        CountBy::Table => model
            .tables
            .iter()
            .map(|t| {
                let n = t
                    .rows
                    .iter()
                    .filter_map(|r| model.category(r.as_str()))
                    .map(|c| t.columns.iter().filter(|col| c.implements(col.as_str())).count())
                    .sum();
                (t.id.to_string(), n)
            })
            .collect(),
        CountBy::Category => model
            .categories
            .iter()
            .map(|c| {
                let n = c.implementable_trait_ids.iter().filter(|t| tabulated(c, t)).count();
                (c.id.to_string(), n)
            })
            .collect(),
        CountBy::Trait => model
            .traits
            .iter()
            .map(|t| {
                let n = model
                    .categories
                    .iter()
                    .filter(|c| c.implements(t.id.as_str()) && tabulated(c, &t.id))
                    .count();
                (t.id.to_string(), n)
            })
            .collect(),
    }
}

/// Owned, nested view of the taxonomy tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub id: NodeId,
    pub label: String,
    pub kind: NodeKind,
    pub category: Option<CategoryId>,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    /// Number of nodes in this subtree, itself included.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(TreeNode::size).sum::<usize>()
    }

    /// Follows child labels (case-insensitive) from this node.
    pub fn descend(&self, labels: &[&str]) -> Option<&TreeNode> {
        labels.iter().try_fold(self, |node, label| {
            node.children.iter().find(|c| c.label.eq_ignore_ascii_case(label))
        })
    }

    /// Pre-order traversal with depth.
    pub fn walk(&self) -> Vec<(usize, &TreeNode)> {
        let mut out = Vec::new();
        let mut stack = vec![(0, self)];
        while let Some((depth, node)) = stack.pop() {
            out.push((depth, node));
            stack.extend(node.children.iter().rev().map(|c| (depth + 1, c)));
        }
        out
    }

    pub fn leaves(&self) -> Vec<&TreeNode> {
        self.walk()
            .into_iter()
            .map(|(_, n)| n)
            .filter(|n| n.children.is_empty() && n.kind.is_leaf())
            .collect()
    }
}

/// Nests the node arena under the root. Unknown child ids are skipped and a
/// node already placed is not expanded twice, so malformed trees still
/// terminate.
pub fn build_tree(model: &TaxonomyModel) -> Option<TreeNode> {
    let mut seen = HashSet::new();
    nest(model, model.tree.root.as_str(), &mut seen)
}

fn nest<'m>(model: &'m TaxonomyModel, id: &'m str, seen: &mut HashSet<&'m str>) -> Option<TreeNode> {
    let node = model.tree.node(id)?;
    if !seen.insert(node.id.as_str()) {
        return None;
    }
    let children = node
        .children
        .iter()
        .filter_map(|c| nest(model, c.as_str(), seen))
        .collect();
    Some(TreeNode {
        id: node.id.clone(),
        label: node.label.clone(),
        kind: node.kind,
        category: node.category_ref.clone(),
        children,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Found<'m> {
    Category(&'m PolicyCategory),
    Node(&'m TaxonomyNode),
}

impl Found<'_> {
    pub fn id(&self) -> &str {
        match self {
            Found::Category(c) => c.id.as_str(),
            Found::Node(n) => n.id.as_str(),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Found::Category(c) => &c.name,
            Found::Node(n) => &n.label,
        }
    }
}

/// Resolves a category or tree node by, in order: exact category id, exact
/// node id, case-insensitive category name or node label/alias, and
/// case-insensitive name prefix. Several matches at the first matching tier
/// give `E_AMBIGUOUS`; none at all give `E_NOT_FOUND`.
pub fn lookup<'m>(model: &'m TaxonomyModel, query: &str) -> Result<Found<'m>, Diagnostic> {
    if let Some(c) = model.category(query) {
        return Ok(Found::Category(c));
    }
    if let Some(n) = model.tree.node(query) {
        return Ok(Found::Node(n));
    }
    let query_lc = query.trim().to_lowercase();
    let tiers: [&dyn Fn(&str) -> bool; 2] = [&|s| s.to_lowercase() == query_lc, &|s| {
        !query_lc.is_empty() && s.to_lowercase().starts_with(&query_lc)
    }];
    for matches in tiers {
        let mut found: Vec<Found<'m>> = model
            .categories
            .iter()
            .filter(|c| matches(&c.name))
            .map(Found::Category)
            .collect();
        // Leaf nodes stand for their category, which is already covered.
        found.extend(
            model
                .tree
                .nodes
                .iter()
                .filter(|n| n.category_ref.is_none())
                .filter(|n| matches(&n.label) || n.aliases.iter().any(|a| matches(a)))
                .map(Found::Node),
        );
        match found.len() {
            0 => continue,
            1 => return Ok(found[0]),
            _ => {
                let names: Vec<String> = found.iter().map(|f| format!("{} ({})", f.label(), f.id())).collect();
                return Err(Diagnostic::error(
                    Code::Ambiguous,
                    query,
                    format!("{} matches: {}", found.len(), names.join(", ")),
                ));
            }
        }
    }
    Err(Diagnostic::error(Code::NotFound, query, "no category or taxonomy node by that id or name"))
}
