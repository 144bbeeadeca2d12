//! Loading, writing and extending taxonomy-definition files.

mod document;
mod merge;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::diagnostic::{has_errors, Code, Diagnostic};
use crate::model::{PolicyCategory, TaxonomyModel, TaxonomyTree, TraitId, TraitTable};
use crate::validate::validate_model;

pub use document::{CategoryDoc, RowDoc, TableDoc, TaxonomyDocument, TreeDoc, SCHEMA_VERSION};
pub use merge::merge_extension;

/// Where the bundled dataset lives relative to the workspace root.
pub const BUNDLED_RESOURCE_PATH: &str = "data/paper-dataset.taxonomy.json";

/// The bundled dataset, compiled into the binary.
pub const BUNDLED_DATASET: &str = include_str!("../../../../data/paper-dataset.taxonomy.json");

/// A model that loaded without errors, plus any warnings.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub model: TaxonomyModel,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Error)]
#[error("taxonomy document rejected with {} error(s)", self.error_count())]
pub struct LoadError {
    /// Whatever could be materialized; `None` for syntax and schema failures.
    pub partial: Option<Box<TaxonomyModel>>,
    pub diagnostics: Vec<Diagnostic>,
}

impl LoadError {
    pub fn error_count(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.is_error()).count()
    }

    pub fn has_code(&self, code: Code) -> bool {
        self.diagnostics.iter().any(|d| d.code == code)
    }
}

/// Parses the bundled dataset. It is checked by the test suite, so failure
/// here is a build defect.
pub fn bundled_model() -> TaxonomyModel {
    match parse_taxonomy_document(BUNDLED_DATASET) {
        Ok(loaded) => loaded.model,
        Err(e) => panic!("bundled dataset is invalid: {:?}", e.diagnostics),
    }
}

/// Deserializes document text without enforcing required sections.
pub fn read_document(text: &str) -> Result<TaxonomyDocument, Vec<Diagnostic>> {
    let text = if text.trim().is_empty() { "{}" } else { text };
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: TaxonomyDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let element = e.path().to_string();
        let inner = e.into_inner();
        vec![json_diagnostic(&inner, &element)]
    })?;
    de.end().map_err(|e| vec![json_diagnostic(&e, ".")])?;
    if let Some(v) = &doc.schema_version {
        if v != SCHEMA_VERSION {
            return Err(vec![Diagnostic::error(
                Code::Schema,
                "/schema_version",
                format!("unsupported schema version `{v}`, expected `{SCHEMA_VERSION}`"),
            )]);
        }
    }
    Ok(doc)
}

fn json_diagnostic(e: &serde_json::Error, element: &str) -> Diagnostic {
    use serde_json::error::Category;
    let code = match e.classify() {
        Category::Syntax | Category::Eof | Category::Io => Code::Syntax,
        Category::Data => Code::Schema,
    };
    Diagnostic::error(code, format!("@{}:{} {element}", e.line(), e.column()), e.to_string())
}

/// Parses a complete taxonomy document into a validated model.
pub fn parse_taxonomy_document(text: &str) -> Result<Loaded, LoadError> {
    let doc = read_document(text).map_err(|diagnostics| LoadError {
        partial: None,
        diagnostics,
    })?;
    let missing = missing_sections(&doc);
    if !missing.is_empty() {
        return Err(LoadError {
            partial: None,
            diagnostics: missing,
        });
    }
    let (model, mut diagnostics) = document_to_model(&doc);
    diagnostics.extend(validate_model(&model));
    if has_errors(&diagnostics) {
        Err(LoadError {
            partial: Some(Box::new(model)),
            diagnostics,
        })
    } else {
        Ok(Loaded {
            model,
            warnings: diagnostics,
        })
    }
}

fn missing_sections(doc: &TaxonomyDocument) -> Vec<Diagnostic> {
    let present = [
        ("schema_version", doc.schema_version.is_some()),
        ("meta", doc.meta.is_some()),
        ("traits", doc.traits.is_some()),
        ("channels", doc.channels.is_some()),
        ("categories", doc.categories.is_some()),
        ("tables", doc.tables.is_some()),
        ("tree", doc.tree.is_some()),
    ];
    let mut out: Vec<Diagnostic> = present
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| {
            Diagnostic::error(Code::Schema, format!("/{name}"), format!("missing required section `{name}`"))
        })
        .collect();
    if let Some(tree) = &doc.tree {
        if tree.root.is_none() {
            out.push(Diagnostic::error(Code::Schema, "/tree/root", "missing tree root"));
        }
    }
    if let Some(tables) = &doc.tables {
        for t in tables.iter().filter(|t| t.name.is_none()) {
            out.push(Diagnostic::error(
                Code::Schema,
                format!("/tables[{}]/name", t.id),
                "table has no name",
            ));
        }
    }
    out
}

/// Materializes a model from a document: checkmarks from tables, group paths
/// from the tree. Returns load-level diagnostics; model invariants are left
/// to [`validate_model`].
pub fn document_to_model(doc: &TaxonomyDocument) -> (TaxonomyModel, Vec<Diagnostic>) {
    let mut diagnostics = Vec::new();
    let tables_doc = doc.tables.as_deref().unwrap_or_default();

    let mut marks: HashMap<&str, BTreeSet<TraitId>> = HashMap::new();
    let mut tables = Vec::with_capacity(tables_doc.len());
    for t in tables_doc {
        for row in &t.rows {
            let entry = marks.entry(row.category.as_str()).or_default();
            for m in &row.marks {
                if t.columns.contains(m) {
                    entry.insert(m.clone());
                } else {
                    diagnostics.push(Diagnostic::error(
                        Code::UnknownColumn,
                        format!("/tables[{}]/rows[{}]/marks[{m}]", t.id, row.category),
                        format!("mark `{m}` is not a column of table `{}`", t.id),
                    ));
                }
            }
        }
        tables.push(TraitTable {
            id: t.id.clone(),
            name: t.name.clone().unwrap_or_default(),
            columns: t.columns.clone(),
            rows: t.rows.iter().map(|r| r.category.clone()).collect(),
        });
    }

    let (root, nodes) = match &doc.tree {
        Some(tree) => (tree.root.clone().unwrap_or_else(|| "".into()), tree.nodes.clone()),
        None => ("".into(), Vec::new()),
    };
    let tree = TaxonomyTree { root, nodes };
    let mut leaf_of: HashMap<&str, &str> = HashMap::new();
    for node in &tree.nodes {
        if let Some(c) = &node.category_ref {
            leaf_of.entry(c.as_str()).or_insert(node.id.as_str());
        }
    }

    let categories = doc
        .categories
        .as_deref()
        .unwrap_or_default()
        .iter()
        .map(|c| {
            let implementable = marks.get(c.id.as_str()).cloned().unwrap_or_default();
            if let Some(inline) = &c.implementable_traits {
                let inline: BTreeSet<TraitId> = inline.iter().cloned().collect();
                if inline != implementable {
                    diagnostics.push(Diagnostic::error(
                        Code::CheckmarkConflict,
                        format!("/categories[{}]/implementable_traits", c.id),
                        format!(
                            "inline traits [{}] disagree with table checkmarks [{}]",
                            join(&inline),
                            join(&implementable)
                        ),
                    ));
                }
            }
            let group_path = leaf_of
                .get(c.id.as_str())
                .and_then(|node| tree.ancestor_labels(node))
                .unwrap_or_default();
            if let Some(inline) = &c.group_path {
                if *inline != group_path {
                    diagnostics.push(Diagnostic::error(
                        Code::GroupPath,
                        format!("/categories[{}]/group_path", c.id),
                        format!(
                            "inline group path `{}` disagrees with tree position `{}`",
                            inline.join(" > "),
                            group_path.join(" > ")
                        ),
                    ));
                }
            }
            PolicyCategory {
                id: c.id.clone(),
                name: c.name.clone(),
                description: c.description.clone(),
                own_parameters: c.own_parameters.clone(),
                group_path,
                cross_tags: c.cross_tags.iter().cloned().collect(),
                implementable_trait_ids: implementable,
                channel_ref: c.channel.clone(),
            }
        })
        .collect();

    let model = TaxonomyModel {
        metadata: doc.meta.clone().unwrap_or_default(),
        traits: doc.traits.clone().unwrap_or_default(),
        channels: doc.channels.clone().unwrap_or_default(),
        categories,
        tables,
        tree,
    };
    (model, diagnostics)
}

fn join(ids: &BTreeSet<TraitId>) -> String {
    ids.iter().map(TraitId::as_str).collect::<Vec<_>>().join(", ")
}

/// Canonical document for a model: derivable fields (inline checkmarks and
/// group paths) are omitted, list order follows the model.
pub fn model_to_document(model: &TaxonomyModel) -> TaxonomyDocument {
    let categories = model
        .categories
        .iter()
        .map(|c| CategoryDoc {
            id: c.id.clone(),
            name: c.name.clone(),
            description: c.description.clone(),
            own_parameters: c.own_parameters.clone(),
            cross_tags: c.cross_tags.iter().cloned().collect(),
            channel: c.channel_ref.clone(),
            group_path: None,
            implementable_traits: None,
        })
        .collect();
    let tables = model
        .tables
        .iter()
        .map(|t| TableDoc {
            id: t.id.clone(),
            name: Some(t.name.clone()),
            columns: t.columns.clone(),
            rows: t
                .rows
                .iter()
                .map(|r| RowDoc {
                    category: r.clone(),
                    marks: t
                        .columns
                        .iter()
                        .filter(|col| model.has_checkmark(r.as_str(), col.as_str()))
                        .cloned()
                        .collect(),
                })
                .collect(),
        })
        .collect();
    TaxonomyDocument {
        schema_version: Some(SCHEMA_VERSION.to_owned()),
        meta: Some(model.metadata.clone()),
        traits: Some(model.traits.clone()),
        channels: Some(model.channels.clone()),
        categories: Some(categories),
        tables: Some(tables),
        tree: Some(TreeDoc {
            root: Some(model.tree.root.clone()),
            nodes: model.tree.nodes.clone(),
        }),
    }
}

/// Writes a document as pretty JSON with two-space indentation and a
/// trailing newline. Output is a pure function of the input.
pub fn write_document(doc: &TaxonomyDocument) -> String {
    let mut buf = Vec::new();
    let formatter = serde_json::ser::PrettyFormatter::with_indent(b"  ");
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, formatter);
    doc.serialize(&mut ser).expect("document serialization is infallible");
    let mut text = String::from_utf8(buf).expect("serde_json writes UTF-8");
    text.push('\n');
    text
}

/// Canonical text for a model; `parse_taxonomy_document` inverts it.
pub fn serialize_taxonomy_document(model: &TaxonomyModel) -> String {
    write_document(&model_to_document(model))
}

/// Reads an extension document: any subset of sections.
pub fn parse_extension_document(text: &str) -> Result<TaxonomyDocument, Vec<Diagnostic>> {
    read_document(text)
}
