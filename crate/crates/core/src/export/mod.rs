//! Deterministic text exports: DOT graphs, CSV matrices, markdown tables,
//! schema lists and an indented text tree.

mod dot;
mod markdown;
mod matrix_csv;

use std::fmt::Write as _;

use crate::atomic::AtomicPolicySchema;
use crate::enumerate::build_tree;
use crate::model::TaxonomyModel;

pub use dot::{export_mst_dot, export_tree_dot};
pub use markdown::export_markdown_tables;
pub use matrix_csv::{export_matrix_csv, MatrixRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArtifactKind {
    DotTree,
    DotMst,
    CsvMatrix,
    CsvCorrelation,
    CsvDistance,
    MarkdownTable,
    SchemaList,
}

impl ArtifactKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ArtifactKind::DotTree => "dot-tree",
            ArtifactKind::DotMst => "dot-mst",
            ArtifactKind::CsvMatrix => "csv-matrix",
            ArtifactKind::CsvCorrelation => "csv-correlation",
            ArtifactKind::CsvDistance => "csv-distance",
            ArtifactKind::MarkdownTable => "markdown-table",
            ArtifactKind::SchemaList => "schema-list",
        }
    }
}

/// An export payload tagged with its format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportArtifact {
    pub kind: ArtifactKind,
    pub payload: String,
}

impl ExportArtifact {
    pub fn bytes(&self) -> &[u8] {
        self.payload.as_bytes()
    }
}

/// A DOT-safe identifier: ASCII alphanumerics kept, everything else `_`,
/// prefixed with `n_` when it would start with a digit.
pub fn slug(id: &str) -> String {
    let mut out: String = id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if out.is_empty() || out.starts_with(|c: char| c.is_ascii_digit()) {
        out.insert_str(0, "n_");
    }
    out
}

/// One schema per line: `category<TAB>trait[<TAB>subtrait]`.
pub fn export_schema_list(schemas: &[AtomicPolicySchema]) -> ExportArtifact {
    let mut payload = String::new();
    for s in schemas {
        let _ = writeln!(payload, "{s}");
    }
    ExportArtifact {
        kind: ArtifactKind::SchemaList,
        payload,
    }
}

/// The tree with two spaces of indentation per level and a `(kind)` suffix.
pub fn export_tree_text(model: &TaxonomyModel) -> String {
    let mut out = String::new();
    if let Some(tree) = build_tree(model) {
        for (depth, node) in tree.walk() {
            let _ = writeln!(out, "{:indent$}{} ({})", "", node.label, node.kind.as_str(), indent = depth * 2);
        }
    }
    out
}
