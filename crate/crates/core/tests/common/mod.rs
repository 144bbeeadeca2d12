//! Helpers shared by the integration tests: sample bindings, independent
//! oracles, a CSV importer and a generator of small valid models.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use polytax::atomic::{Bindings, LadderBand, ParameterValue, Period, PeriodUnit};
use polytax::ingest::{RowDoc, TableDoc, TaxonomyDocument, TreeDoc, SCHEMA_VERSION};
use polytax::model::{
    Authority, Metadata, NodeId, NodeKind, ParameterKind, ParameterSpec, SubtraitDef, TaxonomyModel, TaxonomyNode,
    TraitDef, TransactionChannel, STATEMENT_SECTIONS,
};
use polytax::ingest::CategoryDoc;
use proptest::prelude::*;

pub const EPS: f64 = 1e-9;

/// A well-formed value of each parameter kind.
pub fn sample_value(kind: ParameterKind) -> ParameterValue {
    match kind {
        ParameterKind::Rate => ParameterValue::Rate(0.2),
        ParameterKind::Amount => ParameterValue::Amount(1_000.0),
        ParameterKind::Ladder => ParameterValue::Ladder(vec![
            LadderBand { threshold: 0.0, rate: 0.1 },
            LadderBand { threshold: 50_000.0, rate: 0.3 },
        ]),
        ParameterKind::Period => ParameterValue::Period(Period { count: 1, unit: PeriodUnit::Year }),
        ParameterKind::Condition => ParameterValue::Condition("resident taxpayer".into()),
        ParameterKind::Reference => ParameterValue::Reference("bread".into()),
        ParameterKind::Bounds => ParameterValue::Bounds { lower: Some(0.0), upper: Some(0.05) },
    }
}

pub fn bindings_for(specs: &[&ParameterSpec]) -> Bindings {
    specs.iter().map(|s| (s.name.clone(), sample_value(s.kind))).collect()
}

/// The model with every list sorted by id, for order-insensitive equality.
pub fn normalized(model: &TaxonomyModel) -> TaxonomyModel {
    let mut m = model.clone();
    m.traits.sort_by(|a, b| a.id.cmp(&b.id));
    m.channels.sort_by(|a, b| a.id.cmp(&b.id));
    m.categories.sort_by(|a, b| a.id.cmp(&b.id));
    m.tables.sort_by(|a, b| a.id.cmp(&b.id));
    for t in &mut m.tables {
        t.rows.sort();
        t.columns.sort();
    }
    m.tree.nodes.sort_by(|a, b| a.id.cmp(&b.id));
    for n in &mut m.tree.nodes {
        n.children.sort();
    }
    m.metadata.notes.sort();
    m
}

// ---------------------------------------------------------------------------
// Oracles

/// Phi coefficient from the 2x2 contingency table of two 0/1 rows; this is
/// Pearson r for binary data. `None` when a marginal is zero.
pub fn phi(x: &[bool], y: &[bool]) -> Option<f64> {
    let (mut n11, mut n10, mut n01, mut n00) = (0f64, 0f64, 0f64, 0f64);
    for (&a, &b) in x.iter().zip(y) {
        match (a, b) {
            (true, true) => n11 += 1.0,
            (true, false) => n10 += 1.0,
            (false, true) => n01 += 1.0,
            (false, false) => n00 += 1.0,
        }
    }
    let denom = (n11 + n10) * (n01 + n00) * (n11 + n01) * (n10 + n00);
    if denom == 0.0 {
        return None;
    }
    Some((n11 * n00 - n10 * n01) / denom.sqrt())
}

/// Textbook sample Pearson r with explicit means and (n-1) normalization.
pub fn pearson_textbook(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / (n - 1.0);
    let sx = (x.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let sy = (y.iter().map(|b| (b - my).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    if sx == 0.0 || sy == 0.0 {
        None
    } else {
        Some(cov / (sx * sy))
    }
}

pub fn hamming(x: &[bool], y: &[bool]) -> usize {
    x.iter().zip(y).filter(|(a, b)| a != b).count()
}

/// Decodes a Prüfer sequence over `n` labels into the edges of a tree.
pub fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).expect("a leaf always exists");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Every spanning tree of the complete graph on `n >= 2` nodes, one per
/// Prüfer sequence (n^(n-2) of them).
pub fn all_spanning_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(n >= 2);
    let len = n - 2;
    let total = n.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let seq: Vec<usize> = (0..len)
                .map(|_| {
                    let d = code % n;
                    code /= n;
                    d
                })
                .collect();
            prufer_edges(&seq, n)
        })
        .collect()
}

/// Minimum total weight over all spanning trees.
pub fn brute_force_mst_weight(cells: &[Vec<f64>]) -> f64 {
    let n = cells.len();
    if n < 2 {
        return 0.0;
    }
    all_spanning_trees(n)
        .iter()
        .map(|edges| edges.iter().map(|&(i, j)| cells[i][j]).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// True if `edges` form a spanning tree on `n` nodes (checked by DFS, not
/// union-find).
pub fn is_spanning_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    if edges.len() + 1 != n {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

// ---------------------------------------------------------------------------
// CSV import

/// Parses a labelled CSV grid back into (row labels, column labels, cells).
pub fn import_csv(text: &str) -> (Vec<String>, Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    let mut records = reader.records().map(|r| r.expect("valid csv"));
    let header = records.next().expect("header row");
    assert_eq!(&header[0], "", "corner cell is empty");
    let cols: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for rec in records {
        rows.push(rec[0].to_owned());
        cells.push(rec.iter().skip(1).map(str::to_owned).collect());
    }
    (rows, cols, cells)
}

pub fn import_bool_csv(text: &str) -> (Vec<String>, Vec<String>, Vec<Vec<bool>>) {
    let (rows, cols, cells) = import_csv(text);
    let cells = cells
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| match v.as_str() {
                    "1" => true,
                    "0" => false,
                    other => panic!("not a boolean cell: {other:?}"),
                })
                .collect()
        })
        .collect();
    (rows, cols, cells)
}

pub fn import_optional_f64_csv(text: &str) -> (Vec<String>, Vec<String>, Vec<Vec<Option<f64>>>) {
    let (rows, cols, cells) = import_csv(text);
    let cells = cells
        .into_iter()
        .map(|r| r.into_iter().map(|v| if v.is_empty() { None } else { Some(v.parse().unwrap()) }).collect())
        .collect();
    (rows, cols, cells)
}

// ---------------------------------------------------------------------------
// Generated models

fn params(prefix: &str, kinds: &[ParameterKind]) -> Vec<ParameterSpec> {
    kinds
        .iter()
        .enumerate()
        .map(|(i, &k)| ParameterSpec::new(format!("{prefix}{i}"), k))
        .collect()
}

fn kind() -> impl Strategy<Value = ParameterKind> {
    prop::sample::select(ParameterKind::ALL.to_vec())
}

fn trait_def(i: usize) -> impl Strategy<Value = TraitDef> {
    (
        prop::collection::vec(kind(), 0..3),
        prop_oneof![Just(0usize), 2usize..4],
        prop::collection::vec(prop::collection::vec(kind(), 0..3), 3),
    )
        .prop_map(move |(trait_kinds, n_sub, sub_kinds)| TraitDef {
            id: format!("trait-{i}").into(),
            name: format!("Trait {i}"),
            description: String::new(),
            parameters: params("tp_", &trait_kinds),
            subtraits: (0..n_sub)
                .map(|s| SubtraitDef {
                    id: format!("trait-{i}-option-{s}").into(),
                    name: format!("Option {s}"),
                    description: String::new(),
                    parameters: params("sp_", &sub_kinds[s]),
                })
                .collect(),
        })
}

/// Shape of one generated category.
#[derive(Debug, Clone)]
struct CategoryPlan {
    /// Table index, or `None` for a trait-less standalone policy.
    table: Option<usize>,
    /// Bitmask over the table's columns.
    marks: u32,
    group: usize,
    own: Vec<ParameterKind>,
    tagged: bool,
    channel: bool,
}

/// A small valid taxonomy document.
pub fn arb_document() -> impl Strategy<Value = TaxonomyDocument> {
    (1usize..5, 1usize..4, 0usize..9, 1usize..4, 0usize..3)
        .prop_flat_map(|(n_traits, n_tables, n_cats, n_groups, n_channels)| {
            let traits = (0..n_traits).map(trait_def).collect::<Vec<_>>();
            // Non-empty column subset per table.
            let columns = prop::collection::vec(1u32..(1 << n_traits), n_tables);
            let cats = prop::collection::vec(
                (
                    prop::option::of(0..n_tables),
                    1u32..(1 << n_traits),
                    0..n_groups,
                    prop::collection::vec(kind(), 0..2),
                    any::<bool>(),
                    any::<bool>(),
                )
                    .prop_map(|(table, marks, group, own, tagged, channel)| CategoryPlan {
                        table,
                        marks,
                        group,
                        own,
                        tagged,
                        channel,
                    }),
                n_cats,
            );
            // Parent of group g (g >= 1) is some earlier group or the root.
            let group_parents = prop::collection::vec(any::<prop::sample::Index>(), n_groups);
            (traits, columns, cats, group_parents, Just(n_channels))
        })
        .prop_map(|(traits, columns, cats, group_parents, n_channels)| {
            build_document(traits, columns, cats, group_parents, n_channels)
        })
}

fn build_document(
    traits: Vec<TraitDef>,
    columns: Vec<u32>,
    plans: Vec<CategoryPlan>,
    group_parents: Vec<prop::sample::Index>,
    n_channels: usize,
) -> TaxonomyDocument {
    let channels: Vec<TransactionChannel> = (0..n_channels)
        .map(|i| TransactionChannel {
            id: format!("channel-{i}").into(),
            authority: if i % 2 == 0 { Authority::Government } else { Authority::MonetaryAuthority },
            statement_path: vec![STATEMENT_SECTIONS[i % 3].to_owned(), format!("Item {i}")],
            name: format!("Item {i}"),
            description: String::new(),
        })
        .collect();

    let table_columns: Vec<Vec<usize>> = columns
        .iter()
        .map(|&mask| (0..traits.len()).filter(|b| mask & (1 << b) != 0).collect())
        .collect();

    let mut categories = Vec::new();
    let mut rows: Vec<Vec<RowDoc>> = vec![Vec::new(); columns.len()];
    let mut leaves: Vec<(usize, TaxonomyNode)> = Vec::new();
    for (i, plan) in plans.iter().enumerate() {
        let id = format!("category-{i}");
        let mut kind = NodeKind::StandalonePolicy;
        if let Some(t) = plan.table {
            let cols = &table_columns[t];
            let picked: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|(bit, _)| plan.marks & (1 << bit) != 0)
                .map(|(_, &c)| c)
                .collect();
            // At least one mark, so tabulated rows are never trait-less.
            let picked = if picked.is_empty() { vec![cols[0]] } else { picked };
            rows[t].push(RowDoc {
                category: id.clone().into(),
                marks: picked.iter().map(|&c| traits[c].id.clone()).collect(),
            });
            kind = NodeKind::Category;
        }
        categories.push(CategoryDoc {
            id: id.clone().into(),
            name: format!("Category {i}"),
            description: String::new(),
            own_parameters: params("op_", &plan.own),
            cross_tags: if plan.tagged { vec!["international-trade".to_owned()] } else { Vec::new() },
            channel: (plan.channel && n_channels > 0).then(|| format!("channel-{}", i % n_channels).into()),
            group_path: None,
            implementable_traits: None,
        });
        leaves.push((
            plan.group,
            TaxonomyNode {
                id: id.clone().into(),
                label: format!("Category {i}"),
                kind,
                children: Vec::new(),
                category_ref: Some(id.into()),
                aliases: Vec::new(),
            },
        ));
    }

    let tables = table_columns
        .iter()
        .zip(rows)
        .enumerate()
        .map(|(i, (cols, rows))| TableDoc {
            id: format!("table-{i}").into(),
            name: Some(format!("Table {i}")),
            columns: cols.iter().map(|&c| traits[c].id.clone()).collect(),
            rows,
        })
        .collect();

    let n_groups = group_parents.len();
    let mut groups: Vec<TaxonomyNode> = (0..n_groups)
        .map(|g| TaxonomyNode {
            id: format!("group-{g}").into(),
            label: format!("Group {g}"),
            kind: NodeKind::Group,
            children: Vec::new(),
            category_ref: None,
            aliases: Vec::new(),
        })
        .collect();
    let mut root = TaxonomyNode {
        id: "economic-policy".into(),
        label: "Economic Policy".into(),
        kind: NodeKind::Group,
        children: Vec::new(),
        category_ref: None,
        aliases: Vec::new(),
    };
    for (g, idx) in group_parents.iter().enumerate() {
        // Index 0 stands for the root, k for group k-1, restricted to earlier groups.
        let parent = idx.index(g + 1);
        let child: NodeId = format!("group-{g}").into();
        if parent == 0 {
            root.children.push(child);
        } else {
            groups[parent - 1].children.push(child);
        }
    }
    for (g, leaf) in &leaves {
        groups[*g].children.push(leaf.id.clone());
    }
    let mut nodes = vec![root];
    nodes.extend(groups);
    nodes.extend(leaves.into_iter().map(|(_, n)| n));

    TaxonomyDocument {
        schema_version: Some(SCHEMA_VERSION.to_owned()),
        meta: Some(Metadata {
            version: "0.0.1".into(),
            title: "generated".into(),
            notes: Vec::new(),
        }),
        traits: Some(traits),
        channels: Some(channels),
        categories: Some(categories),
        tables: Some(tables),
        tree: Some(TreeDoc {
            root: Some("economic-policy".into()),
            nodes,
        }),
    }
}

/// A small valid model.
pub fn arb_model() -> impl Strategy<Value = TaxonomyModel> {
    arb_document().prop_map(|doc| {
        let (model, load) = polytax::ingest::document_to_model(&doc);
        assert!(load.is_empty(), "{load:?}");
        model
    })
}

/// Reverses every list in the model.
pub fn reversed(model: &TaxonomyModel) -> TaxonomyModel {
    let mut m = model.clone();
    m.traits.reverse();
    m.channels.reverse();
    m.categories.reverse();
    m.tables.reverse();
    for t in &mut m.tables {
        t.rows.reverse();
        t.columns.reverse();
    }
    m.tree.nodes.reverse();
    for n in &mut m.tree.nodes {
        n.children.reverse();
    }
    m
}

/// Total checkmarks per table id, for golden comparisons.
pub fn per_table(model: &TaxonomyModel) -> BTreeMap<String, usize> {
    polytax::enumerate::count_checkmarks(model, polytax::enumerate::CountBy::Table)
        .into_iter()
        .collect()
}

pub fn ids<T, F: Fn(&T) -> String>(items: &[T], f: F) -> BTreeSet<String> {
    items.iter().map(f).collect()
}
