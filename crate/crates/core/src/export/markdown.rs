use std::fmt::Write as _;

use crate::model::{TaxonomyModel, TraitTable};

use super::{ArtifactKind, ExportArtifact};

fn cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn write_table(out: &mut String, model: &TaxonomyModel, table: &TraitTable) {
    let _ = writeln!(out, "## {}\n", cell(&table.name));
    let headers: Vec<String> = table
        .columns
        .iter()
        .map(|c| cell(model.trait_def(c.as_str()).map_or(c.as_str(), |t| t.name.as_str())))
        .collect();
    let _ = writeln!(out, "| Category | {} | tags |", headers.join(" | "));
    let _ = writeln!(out, "|---|{}---|", "---|".repeat(headers.len()));
    for row in &table.rows {
        let Some(category) = model.category(row.as_str()) else {
            continue;
        };
        let marks: Vec<&str> = table
            .columns
            .iter()
            .map(|c| if category.implements(c.as_str()) { "✓" } else { " " })
            .collect();
        let tags: Vec<&str> = category.cross_tags.iter().map(String::as_str).collect();
        let _ = writeln!(out, "| {} | {} | {} |", cell(&category.name), marks.join(" | "), cell(&tags.join(", ")));
    }
}

/// Pipe tables mirroring the trait tables, one `✓` per checkmark and a
/// trailing `tags` column carrying cross tags. `only` restricts output to
/// one table id.
pub fn export_markdown_tables(model: &TaxonomyModel, only: Option<&str>) -> ExportArtifact {
    let mut out = String::new();
    for table in model.tables.iter().filter(|t| only.is_none_or(|id| t.id == id)) {
        if !out.is_empty() {
            out.push('\n');
        }
        write_table(&mut out, model, table);
    }
    ExportArtifact {
        kind: ArtifactKind::MarkdownTable,
        payload: out,
    }
}
