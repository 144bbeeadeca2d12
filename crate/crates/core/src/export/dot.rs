use std::collections::HashSet;
use std::fmt::Write as _;

use crate::analytics::MstResult;
use crate::enumerate::build_tree;
use crate::model::{NodeKind, TaxonomyModel, INTERNATIONAL_TRADE_TAG};

use super::{slug, ArtifactKind, ExportArtifact};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The taxonomy as a DOT digraph. Groups are boxes, leaves plain text;
/// leaves whose category carries the international-trade tag are filled
/// yellow. Nodes are listed in pre-order, then one edge per parent-child
/// pair.
pub fn export_tree_dot(model: &TaxonomyModel) -> ExportArtifact {
    let mut out = String::from("digraph taxonomy {\n  rankdir=LR;\n");
    let mut edges = Vec::new();
    if let Some(tree) = build_tree(model) {
        let tagged: HashSet<&str> = model
            .categories
            .iter()
            .filter(|c| c.cross_tags.contains(INTERNATIONAL_TRADE_TAG))
            .map(|c| c.id.as_str())
            .collect();
        for (_, node) in tree.walk() {
            let id = slug(node.id.as_str());
            let mut attrs = format!("label={}", quote(&node.label));
            if node.kind == NodeKind::Group {
                attrs.push_str(", shape=box");
            } else {
                attrs.push_str(", shape=plain");
            }
            if node.category.as_ref().is_some_and(|c| tagged.contains(c.as_str())) {
                attrs.push_str(", style=filled, fillcolor=yellow");
            }
            let _ = writeln!(out, "  {id} [{attrs}];");
            for child in &node.children {
                edges.push(format!("  {id} -> {};", slug(child.id.as_str())));
            }
        }
    }
    for e in edges {
        out.push_str(&e);
        out.push('\n');
    }
    out.push_str("}\n");
    ExportArtifact {
        kind: ArtifactKind::DotTree,
        payload: out,
    }
}

/// The spanning tree as an undirected DOT graph. `names` supplies display
/// labels parallel to `mst.labels`; when its length differs the ids are
/// used. Weights are written with six decimals.
pub fn export_mst_dot(mst: &MstResult, names: &[String]) -> ExportArtifact {
    let mut out = String::from("graph mst {\n");
    for (i, label) in mst.labels.iter().enumerate() {
        let name = if names.len() == mst.labels.len() { &names[i] } else { label };
        let _ = writeln!(out, "  {} [label={}];", slug(label), quote(name));
    }
    for e in &mst.edges {
        let _ = writeln!(
            out,
            "  {} -- {} [weight={:.6}];",
            slug(&mst.labels[e.i]),
            slug(&mst.labels[e.j]),
            e.weight
        );
    }
    out.push_str("}\n");
    ExportArtifact {
        kind: ArtifactKind::DotMst,
        payload: out,
    }
}
