//! Whole-model constraint checking.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::diagnostic::{Code, Diagnostic};
use crate::model::{
    NodeKind, ParameterSpec, TaxonomyModel, TraitDef, ROOT_LABEL, STATEMENT_SECTIONS,
};

/// Lowercase kebab-case: `tax-base`, `gov-personal-income-tax`.
pub fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.split('-').all(|part| {
            !part.is_empty() && part.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit())
        })
}

/// Lowercase snake-case starting with a letter: `tax_rate`.
pub fn is_parameter_name(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b) if b.is_ascii_lowercase())
        && bytes.all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

/// Checks every model invariant and returns all violations, sorted.
///
/// An empty result means the model is valid. Diagnostics are addressed by
/// element id, so permuting the model's lists yields the same output.
pub fn validate_model(model: &TaxonomyModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    check_traits(model, &mut out);
    check_channels(model, &mut out);
    check_categories(model, &mut out);
    check_tables(model, &mut out);
    check_tree(model, &mut out);
    out.sort();
    out
}

fn duplicates<'a>(ids: impl Iterator<Item = &'a str>) -> BTreeMap<&'a str, usize> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for id in ids {
        *counts.entry(id).or_default() += 1;
    }
    counts.retain(|_, n| *n > 1);
    counts
}

fn check_id(out: &mut Vec<Diagnostic>, path: &str, id: &str) {
    if !is_identifier(id) {
        out.push(Diagnostic::error(
            Code::BadIdentifier,
            path,
            format!("`{id}` is not a lowercase kebab-case identifier"),
        ));
    }
}

fn check_parameters(out: &mut Vec<Diagnostic>, owner: &str, params: &[ParameterSpec]) {
    for p in params {
        if !is_parameter_name(&p.name) {
            out.push(Diagnostic::error(
                Code::BadIdentifier,
                format!("{owner}/parameters[{}]", p.name),
                format!("`{}` is not a snake_case parameter name", p.name),
            ));
        }
    }
    for (name, n) in duplicates(params.iter().map(|p| p.name.as_str())) {
        out.push(Diagnostic::error(
            Code::DuplicateParameter,
            format!("{owner}/parameters[{name}]"),
            format!("parameter `{name}` declared {n} times"),
        ));
    }
}

fn check_traits(model: &TaxonomyModel, out: &mut Vec<Diagnostic>) {
    for (id, n) in duplicates(model.traits.iter().map(|t| t.id.as_str())) {
        out.push(Diagnostic::error(
            Code::DuplicateId,
            format!("/traits[{id}]"),
            format!("trait id `{id}` defined {n} times"),
        ));
    }
    let implemented: HashSet<&str> = model
        .categories
        .iter()
        .flat_map(|c| c.implementable_trait_ids.iter().map(|t| t.as_str()))
        .collect();
    for t in &model.traits {
        let path = format!("/traits[{}]", t.id);
        check_id(out, &path, t.id.as_str());
        check_parameters(out, &path, &t.parameters);
        for (id, n) in duplicates(t.subtraits.iter().map(|s| s.id.as_str())) {
            out.push(Diagnostic::error(
                Code::DuplicateId,
                format!("{path}/subtraits[{id}]"),
                format!("subtrait id `{id}` defined {n} times"),
            ));
        }
        for s in &t.subtraits {
            let sub_path = format!("{path}/subtraits[{}]", s.id);
            check_id(out, &sub_path, s.id.as_str());
            check_parameters(out, &sub_path, &s.parameters);
            let trait_names: HashSet<&str> = t.parameters.iter().map(|p| p.name.as_str()).collect();
            for p in &s.parameters {
                if trait_names.contains(p.name.as_str()) {
                    out.push(Diagnostic::error(
                        Code::ParameterCollision,
                        format!("{sub_path}/parameters[{}]", p.name),
                        format!("parameter `{}` is also declared on trait `{}`", p.name, t.id),
                    ));
                }
            }
        }
        if t.subtraits.len() == 1 {
            out.push(Diagnostic::warning(
                Code::SingleSubtrait,
                &path,
                format!("categorical trait `{}` has a single subtrait", t.id),
            ));
        }
        if !implemented.contains(t.id.as_str()) {
            out.push(Diagnostic::warning(
                Code::UnusedTrait,
                &path,
                format!("no category implements trait `{}`", t.id),
            ));
        }
    }
}

fn check_channels(model: &TaxonomyModel, out: &mut Vec<Diagnostic>) {
    for (id, n) in duplicates(model.channels.iter().map(|c| c.id.as_str())) {
        out.push(Diagnostic::error(
            Code::DuplicateId,
            format!("/channels[{id}]"),
            format!("channel id `{id}` defined {n} times"),
        ));
    }
    for c in &model.channels {
        let path = format!("/channels[{}]", c.id);
        check_id(out, &path, c.id.as_str());
        match c.statement_path.first() {
            Some(first) if STATEMENT_SECTIONS.contains(&first.as_str()) => {}
            Some(first) => out.push(Diagnostic::error(
                Code::ChannelPath,
                format!("{path}/statement_path"),
                format!(
                    "statement path starts with `{first}`, expected one of {}",
                    STATEMENT_SECTIONS.join(", ")
                ),
            )),
            None => out.push(Diagnostic::error(
                Code::ChannelPath,
                format!("{path}/statement_path"),
                "statement path is empty",
            )),
        }
    }
}

/// Parameter names an implementation of `t` (with each possible subtrait) adds.
fn implementation_parameter_sets(t: &TraitDef) -> Vec<Vec<&ParameterSpec>> {
    if t.subtraits.is_empty() {
        vec![t.parameters.iter().collect()]
    } else {
        t.subtraits
            .iter()
            .map(|s| t.parameters.iter().chain(&s.parameters).collect())
            .collect()
    }
}

fn check_categories(model: &TaxonomyModel, out: &mut Vec<Diagnostic>) {
    for (id, n) in duplicates(model.categories.iter().map(|c| c.id.as_str())) {
        out.push(Diagnostic::error(
            Code::DuplicateId,
            format!("/categories[{id}]"),
            format!("category id `{id}` defined {n} times"),
        ));
    }
    let traits: HashMap<&str, &TraitDef> = model.traits.iter().map(|t| (t.id.as_str(), t)).collect();
    let channels: HashSet<&str> = model.channels.iter().map(|c| c.id.as_str()).collect();

    for c in &model.categories {
        let path = format!("/categories[{}]", c.id);
        check_id(out, &path, c.id.as_str());
        check_parameters(out, &path, &c.own_parameters);
        for tag in &c.cross_tags {
            check_id(out, &format!("{path}/cross_tags[{tag}]"), tag);
        }
        if let Some(ch) = &c.channel_ref {
            if !channels.contains(ch.as_str()) {
                out.push(Diagnostic::error(
                    Code::UnknownChannel,
                    format!("{path}/channel"),
                    format!("unknown transaction channel `{ch}`"),
                ));
            }
        }
        match c.group_path.first() {
            None => out.push(Diagnostic::error(
                Code::GroupPath,
                format!("{path}/group_path"),
                "group path is empty",
            )),
            Some(first) if first != ROOT_LABEL => out.push(Diagnostic::error(
                Code::GroupPath,
                format!("{path}/group_path"),
                format!("group path starts at `{first}`, expected `{ROOT_LABEL}`"),
            )),
            Some(_) => {}
        }
        let own: HashSet<&str> = c.own_parameters.iter().map(|p| p.name.as_str()).collect();
        for trait_id in &c.implementable_trait_ids {
            let Some(t) = traits.get(trait_id.as_str()) else {
                out.push(Diagnostic::error(
                    Code::UnknownTrait,
                    format!("{path}/implementable_traits[{trait_id}]"),
                    format!("category `{}` lists unknown trait `{trait_id}`", c.id),
                ));
                continue;
            };
            let colliding: BTreeSet<&str> = implementation_parameter_sets(t)
                .into_iter()
                .flatten()
                .map(|p| p.name.as_str())
                .filter(|n| own.contains(n))
                .collect();
            for name in colliding {
                out.push(Diagnostic::error(
                    Code::ParameterCollision,
                    format!("{path}/implementable_traits[{trait_id}]"),
                    format!("own parameter `{name}` collides with a parameter of trait `{trait_id}`"),
                ));
            }
        }
    }
}

fn check_tables(model: &TaxonomyModel, out: &mut Vec<Diagnostic>) {
    for (id, n) in duplicates(model.tables.iter().map(|t| t.id.as_str())) {
        out.push(Diagnostic::error(
            Code::DuplicateId,
            format!("/tables[{id}]"),
            format!("table id `{id}` defined {n} times"),
        ));
    }
    let traits: HashSet<&str> = model.traits.iter().map(|t| t.id.as_str()).collect();
    let categories: HashSet<&str> = model.categories.iter().map(|c| c.id.as_str()).collect();
    let mut placements: BTreeMap<&str, Vec<&str>> = BTreeMap::new();

    for t in &model.tables {
        let path = format!("/tables[{}]", t.id);
        check_id(out, &path, t.id.as_str());
        for (col, n) in duplicates(t.columns.iter().map(|c| c.as_str())) {
            out.push(Diagnostic::error(
                Code::DuplicateColumn,
                format!("{path}/columns[{col}]"),
                format!("column `{col}` appears {n} times"),
            ));
        }
        for col in &t.columns {
            if !traits.contains(col.as_str()) {
                out.push(Diagnostic::error(
                    Code::UnknownTrait,
                    format!("{path}/columns[{col}]"),
                    format!("table column references unknown trait `{col}`"),
                ));
            }
        }
        for row in &t.rows {
            if categories.contains(row.as_str()) {
                placements.entry(row.as_str()).or_default().push(t.id.as_str());
            } else {
                out.push(Diagnostic::error(
                    Code::UnknownCategory,
                    format!("{path}/rows[{row}]"),
                    format!("table row references unknown category `{row}`"),
                ));
            }
        }
    }

    for (category, tables) in &placements {
        if tables.len() > 1 {
            let mut sorted = tables.clone();
            sorted.sort_unstable();
            out.push(Diagnostic::error(
                Code::DuplicateRow,
                format!("/categories[{category}]"),
                format!("category listed in {} table rows ({})", tables.len(), sorted.join(", ")),
            ));
        }
    }

    for c in &model.categories {
        let known: Vec<&str> = c
            .implementable_trait_ids
            .iter()
            .map(|t| t.as_str())
            .filter(|t| traits.contains(t))
            .collect();
        if known.is_empty() {
            continue;
        }
        let path = format!("/categories[{}]", c.id);
        match placements.get(c.id.as_str()).map(Vec::as_slice) {
            None => out.push(Diagnostic::error(
                Code::UntabulatedCheckmark,
                &path,
                format!("category `{}` implements traits but is not a row of any table", c.id),
            )),
            Some([table_id]) => {
                let Some(table) = model.table(table_id) else { continue };
                for t in known {
                    if !table.columns.iter().any(|col| col == t) {
                        out.push(Diagnostic::error(
                            Code::UntabulatedCheckmark,
                            format!("{path}/implementable_traits[{t}]"),
                            format!("trait `{t}` is not a column of table `{table_id}`"),
                        ));
                    }
                }
            }
            Some(_) => {}
        }
    }
}

fn check_tree(model: &TaxonomyModel, out: &mut Vec<Diagnostic>) {
    let tree = &model.tree;
    for (id, n) in duplicates(tree.nodes.iter().map(|n| n.id.as_str())) {
        out.push(Diagnostic::error(
            Code::DuplicateId,
            format!("/tree/nodes[{id}]"),
            format!("node id `{id}` defined {n} times"),
        ));
    }
    let by_id: HashMap<&str, _> = tree.nodes.iter().map(|n| (n.id.as_str(), n)).collect();
    let categories: HashMap<&str, _> = model.categories.iter().map(|c| (c.id.as_str(), c)).collect();

    let Some(root) = by_id.get(tree.root.as_str()) else {
        out.push(Diagnostic::error(
            Code::UnknownNode,
            "/tree/root",
            format!("root node `{}` is not defined", tree.root),
        ));
        return;
    };
    if root.label != ROOT_LABEL {
        out.push(Diagnostic::error(
            Code::GroupPath,
            format!("/tree/nodes[{}]", root.id),
            format!("root is labelled `{}`, expected `{ROOT_LABEL}`", root.label),
        ));
    }

    let mut parents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for node in &tree.nodes {
        let path = format!("/tree/nodes[{}]", node.id);
        check_id(out, &path, node.id.as_str());
        for child in &node.children {
            if by_id.contains_key(child.as_str()) {
                parents.entry(child.as_str()).or_default().push(node.id.as_str());
            } else {
                out.push(Diagnostic::error(
                    Code::UnknownNode,
                    format!("{path}/children[{child}]"),
                    format!("child `{child}` is not a defined node"),
                ));
            }
        }
        match (node.kind, &node.category_ref) {
            (NodeKind::Group, Some(c)) => out.push(Diagnostic::error(
                Code::NodeKind,
                &path,
                format!("group node references category `{c}`"),
            )),
            (NodeKind::Group, None) => {}
            (kind, None) => out.push(Diagnostic::error(
                Code::NodeKind,
                &path,
                format!("{} node has no category reference", kind.as_str()),
            )),
            (kind, Some(c)) => match categories.get(c.as_str()) {
                None => out.push(Diagnostic::error(
                    Code::UnknownCategory,
                    format!("{path}/category"),
                    format!("node references unknown category `{c}`"),
                )),
                Some(cat) => {
                    if kind == NodeKind::Category && cat.is_trait_less() {
                        out.push(Diagnostic::error(
                            Code::NodeKind,
                            &path,
                            format!("category node for `{c}`, which implements no traits"),
                        ));
                    }
                    if kind == NodeKind::StandalonePolicy && !cat.is_trait_less() {
                        out.push(Diagnostic::error(
                            Code::NodeKind,
                            &path,
                            format!("standalone-policy node for `{c}`, which implements traits"),
                        ));
                    }
                }
            },
        }
        if node.kind.is_leaf() && !node.children.is_empty() {
            out.push(Diagnostic::error(
                Code::NodeKind,
                &path,
                format!("{} node has children", node.kind.as_str()),
            ));
        }
    }

    if let Some(ps) = parents.get(root.id.as_str()) {
        out.push(Diagnostic::error(
            Code::NotATree,
            format!("/tree/nodes[{}]", root.id),
            format!("root appears as a child of {}", sorted_join(ps)),
        ));
    }
    for (node, ps) in &parents {
        if ps.len() > 1 && *node != root.id.as_str() {
            out.push(Diagnostic::error(
                Code::NotATree,
                format!("/tree/nodes[{node}]"),
                format!("node has {} parents ({})", ps.len(), sorted_join(ps)),
            ));
        }
    }

    // Reachability from the root; anything else is detached or on a cycle.
    let mut reachable: HashSet<&str> = HashSet::new();
    let mut stack = vec![root.id.as_str()];
    while let Some(id) = stack.pop() {
        if !reachable.insert(id) {
            continue;
        }
        if let Some(n) = by_id.get(id) {
            stack.extend(n.children.iter().map(|c| c.as_str()).filter(|c| by_id.contains_key(c)));
        }
    }
    let detached: BTreeSet<&str> = by_id.keys().copied().filter(|id| !reachable.contains(id)).collect();
    for id in detached {
        out.push(Diagnostic::error(
            Code::NotATree,
            format!("/tree/nodes[{id}]"),
            "node is not reachable from the root",
        ));
    }

    let mut placements: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for node in &tree.nodes {
        if let Some(c) = &node.category_ref {
            placements.entry(c.as_str()).or_default().push(node.id.as_str());
        }
    }
    for c in &model.categories {
        let path = format!("/categories[{}]", c.id);
        match placements.get(c.id.as_str()).map(Vec::as_slice) {
            None => out.push(Diagnostic::error(
                Code::UnplacedCategory,
                &path,
                "category is not a leaf of the taxonomy tree",
            )),
            Some([node_id]) => {
                let single_parent = parents.get(node_id).is_none_or(|ps| ps.len() == 1);
                if !single_parent || !reachable.contains(node_id) || c.group_path.is_empty() {
                    continue;
                }
                if let Some(expected) = tree.ancestor_labels(node_id) {
                    if expected != c.group_path {
                        out.push(Diagnostic::error(
                            Code::GroupPath,
                            format!("{path}/group_path"),
                            format!(
                                "group path `{}` does not match tree position `{}`",
                                c.group_path.join(" > "),
                                expected.join(" > ")
                            ),
                        ));
                    }
                }
            }
            Some(nodes) => out.push(Diagnostic::error(
                Code::UnplacedCategory,
                &path,
                format!("category is placed at {} leaves ({})", nodes.len(), sorted_join(nodes)),
            )),
        }
    }
}

fn sorted_join(items: &[&str]) -> String {
    let mut v = items.to_vec();
    v.sort_unstable();
    v.join(", ")
}
