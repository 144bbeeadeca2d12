//! Additive extension of an existing model.
//!
//! New traits, channels, categories, tables, rows, columns and tree nodes are
//! appended. An id that already exists must carry identical content, except
//! that tables may gain columns and rows (and rows may gain marks) and tree
//! nodes may gain children and aliases.

use crate::diagnostic::{has_errors, Code, Diagnostic};
use crate::model::TaxonomyModel;
use crate::validate::validate_model;

use super::{document_to_model, model_to_document, CategoryDoc, TaxonomyDocument, TreeDoc};

/// Merges `extension` into `base` and re-validates the result.
pub fn merge_extension(base: &TaxonomyModel, extension: &TaxonomyDocument) -> Result<TaxonomyModel, Vec<Diagnostic>> {
    let mut doc = model_to_document(base);
    let mut diagnostics = Vec::new();
    merge_documents(&mut doc, extension, &mut diagnostics);
    if has_errors(&diagnostics) {
        return Err(diagnostics);
    }
    let (model, mut more) = document_to_model(&doc);
    more.extend(validate_model(&model));
    if has_errors(&more) {
        return Err(more);
    }
    Ok(model)
}

fn conflict(section: &str, id: &str) -> Diagnostic {
    Diagnostic::error(
        Code::Conflict,
        format!("/{section}[{id}]"),
        format!("`{id}` is already defined in {section} with different content"),
    )
}

/// Appends `ext` items whose key is new; identical redefinitions are no-ops.
fn merge_keyed<T: Clone + PartialEq>(
    base: &mut Vec<T>,
    ext: &[T],
    section: &str,
    key: impl Fn(&T) -> &str,
    out: &mut Vec<Diagnostic>,
) {
    for item in ext {
        match base.iter().find(|b| key(b) == key(item)) {
            Some(existing) if existing == item => {}
            Some(_) => out.push(conflict(section, key(item))),
            None => base.push(item.clone()),
        }
    }
}

fn merge_documents(base: &mut TaxonomyDocument, ext: &TaxonomyDocument, out: &mut Vec<Diagnostic>) {
    if let (Some(meta), Some(ext_meta)) = (base.meta.as_mut(), &ext.meta) {
        for note in &ext_meta.notes {
            if !meta.notes.contains(note) {
                meta.notes.push(note.clone());
            }
        }
    }
    if let Some(traits) = &ext.traits {
        merge_keyed(base.traits.get_or_insert_with(Vec::new), traits, "traits", |t| t.id.as_str(), out);
    }
    if let Some(channels) = &ext.channels {
        merge_keyed(base.channels.get_or_insert_with(Vec::new), channels, "channels", |c| c.id.as_str(), out);
    }
    if let Some(categories) = &ext.categories {
        merge_categories(base.categories.get_or_insert_with(Vec::new), categories, out);
    }
    if let Some(tables) = &ext.tables {
        let base_tables = base.tables.get_or_insert_with(Vec::new);
        for t in tables {
            match base_tables.iter_mut().find(|b| b.id == t.id) {
                None if t.name.is_none() => out.push(Diagnostic::error(
                    Code::Schema,
                    format!("/tables[{}]/name", t.id),
                    "a new table needs a name",
                )),
                None => base_tables.push(t.clone()),
                Some(existing) => {
                    if t.name.as_ref().is_some_and(|n| Some(n) != existing.name.as_ref()) {
                        out.push(conflict("tables", t.id.as_str()));
                        continue;
                    }
                    for col in &t.columns {
                        if !existing.columns.contains(col) {
                            existing.columns.push(col.clone());
                        }
                    }
                    for row in &t.rows {
                        match existing.rows.iter_mut().find(|r| r.category == row.category) {
                            Some(r) => {
                                for m in &row.marks {
                                    if !r.marks.contains(m) {
                                        r.marks.push(m.clone());
                                    }
                                }
                            }
                            None => existing.rows.push(row.clone()),
                        }
                    }
                }
            }
        }
    }
    if let Some(tree) = &ext.tree {
        merge_tree(base.tree.get_or_insert_with(|| TreeDoc { root: None, nodes: Vec::new() }), tree, out);
    }
}

fn merge_categories(base: &mut Vec<CategoryDoc>, ext: &[CategoryDoc], out: &mut Vec<Diagnostic>) {
    for c in ext {
        match base.iter_mut().find(|b| b.id == c.id) {
            None => base.push(c.clone()),
            Some(existing) if existing.core() == c.core() => {
                // Inline fields are re-checked against the merged tables and tree.
                if c.implementable_traits.is_some() {
                    existing.implementable_traits = c.implementable_traits.clone();
                }
                if c.group_path.is_some() {
                    existing.group_path = c.group_path.clone();
                }
            }
            Some(_) => out.push(conflict("categories", c.id.as_str())),
        }
    }
}

fn merge_tree(base: &mut TreeDoc, ext: &TreeDoc, out: &mut Vec<Diagnostic>) {
    match (&base.root, &ext.root) {
        (Some(b), Some(e)) if b != e => {
            out.push(Diagnostic::error(
                Code::Conflict,
                "/tree/root",
                format!("extension root `{e}` differs from base root `{b}`"),
            ));
            return;
        }
        (None, Some(e)) => base.root = Some(e.clone()),
        _ => {}
    }
    for node in &ext.nodes {
        match base.nodes.iter_mut().find(|b| b.id == node.id) {
            None => base.nodes.push(node.clone()),
            Some(existing) => {
                if existing.label != node.label || existing.kind != node.kind || existing.category_ref != node.category_ref {
                    out.push(conflict("tree/nodes", node.id.as_str()));
                    continue;
                }
                for child in &node.children {
                    if !existing.children.contains(child) {
                        existing.children.push(child.clone());
                    }
                }
                for alias in &node.aliases {
                    if !existing.aliases.contains(alias) {
                        existing.aliases.push(alias.clone());
                    }
                }
            }
        }
    }
}
