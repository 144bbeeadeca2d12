//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach the output, and exits non-zero
//! if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::EPS;
use polytax::analytics::{
    build_trait_matrix, euclidean_distance, kruskal_mst, pearson_correlation, NullMode, TraitMatrix, NULL_POLICY_NAME,
};
use polytax::atomic::{instantiate_atomic_policy, required_parameters, Bindings};
use polytax::enumerate::{enumerate_schemas, EnumerationFilter};
use polytax::export::{export_matrix_csv, export_mst_dot, export_tree_dot, MatrixRef};
use polytax::ingest::{
    bundled_model, merge_extension, parse_extension_document, parse_taxonomy_document, serialize_taxonomy_document,
    BUNDLED_DATASET,
};
use polytax::{validate_model, Code, TaxonomyModel};
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("took {spent:?}, limit {limit:?}"))?;
    Ok(spent)
}

const GOLDEN: [(&str, usize); 9] = [
    ("income-tax", 37),
    ("property-tax", 73),
    ("sales-tax", 59),
    ("other-taxes", 44),
    ("government-goods-and-services", 4),
    ("other-expenses", 7),
    ("open-market-operations", 10),
    ("debt-and-credit", 22),
    ("financial-markets", 6),
];

fn dataset_fidelity() -> Check {
    let start = Instant::now();
    let model = parse_taxonomy_document(BUNDLED_DATASET)
        .map_err(|e| format!("bundled dataset rejected: {:?}", e.diagnostics))?
        .model;
    ensure(model.traits.len() == 23, || format!("{} traits", model.traits.len()))?;
    let counts = common::per_table(&model);
    let golden: BTreeMap<String, usize> = GOLDEN.iter().map(|&(k, v)| (k.to_owned(), v)).collect();
    ensure(counts == golden, || format!("per-table counts {counts:?}"))?;
    let spent = within(Duration::from_secs(1), start)?;
    Ok(format!("23 traits, per-table counts match, {spent:?}"))
}

fn enumeration() -> Check {
    let start = Instant::now();
    let model = bundled_model();
    let all = enumerate_schemas(&model, &EnumerationFilter::default()).map_err(|d| d.to_string())?;
    let golden_total: usize = GOLDEN.iter().map(|(_, n)| n).sum();
    ensure(all.len() == golden_total, || format!("{} schemas, expected {golden_total}", all.len()))?;
    let mut pairs = 0;
    for category in &model.categories {
        for t in &model.traits {
            pairs += 1;
            let sub = t.subtraits.first().map(|s| s.id.as_str());
            let bindings = required_parameters(&model, category.id.as_str(), t.id.as_str(), sub)
                .map(|specs| common::bindings_for(&specs))
                .unwrap_or_else(|_| Bindings::new());
            let result = instantiate_atomic_policy(&model, category.id.as_str(), t.id.as_str(), sub, bindings);
            let checkmark = model.has_checkmark(category.id.as_str(), t.id.as_str());
            match (&result, checkmark) {
                (Ok(_), true) => {}
                (Err(e), false) if e.code() == Code::NotImplementable => {}
                _ => return Err(format!("{} x {}: checkmark={checkmark}, got {result:?}", category.id, t.id)),
            }
        }
    }
    let spent = within(Duration::from_secs(1), start)?;
    Ok(format!("{} schemas, {pairs} pairs swept, {spent:?}", all.len()))
}

fn correlation() -> Check {
    let model = bundled_model();
    let m = build_trait_matrix(&model, NullMode::Include);
    let c = pearson_correlation(&m);
    let constant: Vec<bool> = m.cells.iter().map(|r| r.iter().all(|&b| b == r[0])).collect();
    for i in 0..m.rows() {
        for j in 0..m.rows() {
            ensure(c.cells[i][j] == c.cells[j][i], || format!("asymmetric at {i},{j}"))?;
            ensure(c.cells[i][j].is_none() == (constant[i] || constant[j]), || {
                format!("definedness wrong at {},{}", m.row_labels[i], m.row_labels[j])
            })?;
        }
        if !constant[i] {
            let d = c.cells[i][i].unwrap();
            ensure((d - 1.0).abs() < EPS, || format!("diagonal {d} at {}", m.row_labels[i]))?;
        }
    }
    for (a, b) in [("inheritance-tax", "estate-tax"), ("inheritance-tax", "gift-tax"), ("estate-tax", "gift-tax")] {
        let r = c.get(a, b).flatten().ok_or_else(|| format!("r({a},{b}) undefined"))?;
        ensure((r - 1.0).abs() < EPS, || format!("r({a},{b}) = {r}"))?;
    }
    let undefined = constant.iter().filter(|&&k| k).count();
    Ok(format!("{} rows, {undefined} constant, identical tax rows at r=1", m.rows()))
}

fn random_matrix(rng: &mut impl Rng, n: usize) -> TraitMatrix {
    let cols = rng.gen_range(1..=8);
    TraitMatrix {
        row_labels: (0..n).map(|i| format!("r{i}")).collect(),
        row_names: (0..n).map(|i| format!("R{i}")).collect(),
        col_labels: (0..cols).map(|j| format!("c{j}")).collect(),
        cells: (0..n).map(|_| (0..cols).map(|_| rng.gen_bool(0.5)).collect()).collect(),
    }
}

fn mst() -> Check {
    let start = Instant::now();
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    for case in 0..200 {
        let n = rng.gen_range(2..=6);
        let d = euclidean_distance(&random_matrix(&mut rng, n));
        let tree = kruskal_mst(&d).map_err(|e| e.to_string())?;
        let oracle = common::brute_force_mst_weight(&d.cells);
        ensure((tree.total_weight() - oracle).abs() < EPS, || {
            format!("case {case}: kruskal {} vs brute force {oracle}", tree.total_weight())
        })?;
    }
    let model = bundled_model();
    for mode in NullMode::ALL {
        let m = build_trait_matrix(&model, mode);
        let tree = kruskal_mst(&euclidean_distance(&m)).map_err(|e| e.to_string())?;
        let edges: Vec<(usize, usize)> = tree.edges.iter().map(|e| (e.i, e.j)).collect();
        ensure(edges.len() + 1 == m.rows(), || format!("{mode}: {} edges for {} nodes", edges.len(), m.rows()))?;
        ensure(common::is_spanning_tree(m.rows(), &edges), || format!("{mode}: not a spanning tree"))?;
    }
    let spent = within(Duration::from_secs(10), start)?;
    Ok(format!("200 random instances match brute force, bundled trees valid in 3 modes, {spent:?}"))
}

fn null_modes() -> Check {
    let model = bundled_model();
    let rows = |mode| build_trait_matrix(&model, mode).rows();
    let (include, collapse, exclude) = (rows(NullMode::Include), rows(NullMode::Collapse), rows(NullMode::Exclude));
    let trait_less = model.trait_less_categories().count();
    ensure(exclude < collapse && collapse < include, || format!("{exclude} / {collapse} / {include}"))?;
    ensure(collapse == include - trait_less + 1, || format!("collapse {collapse} != {include} - {trait_less} + 1"))?;
    let m = build_trait_matrix(&model, NullMode::Collapse);
    let zero: Vec<usize> = (0..m.rows()).filter(|&i| m.cells[i].iter().all(|&b| !b)).collect();
    ensure(zero.len() == 1, || format!("{} all-zero rows", zero.len()))?;
    ensure(m.row_names[zero[0]] == NULL_POLICY_NAME, || format!("zero row named {}", m.row_names[zero[0]]))?;
    Ok(format!("exclude {exclude} < collapse {collapse} < include {include}, {trait_less} trait-less"))
}

fn determinism() -> Check {
    let model = bundled_model();
    let text = serialize_taxonomy_document(&model);
    ensure(text == BUNDLED_DATASET, || "serialize(parse(file)) differs from the file".into())?;
    let again = parse_taxonomy_document(&text).map_err(|e| format!("{:?}", e.diagnostics))?.model;
    ensure(again == model, || "parse(serialize(model)) differs".into())?;

    ensure(export_tree_dot(&model) == export_tree_dot(&model), || "tree DOT differs".into())?;
    for mode in NullMode::ALL {
        let m = build_trait_matrix(&model, mode);
        let d = euclidean_distance(&m);
        let c = pearson_correlation(&m);
        let tree = kruskal_mst(&d).map_err(|e| e.to_string())?;
        let twice = |f: &dyn Fn() -> String| f() == f();
        ensure(
            twice(&|| export_matrix_csv(MatrixRef::Trait(&m)).payload)
                && twice(&|| export_matrix_csv(MatrixRef::Correlation(&c)).payload)
                && twice(&|| export_matrix_csv(MatrixRef::Distance(&d)).payload)
                && twice(&|| export_mst_dot(&tree, &m.row_names).payload),
            || format!("{mode}: repeated export differs"),
        )?;
        let rebuilt = kruskal_mst(&euclidean_distance(&build_trait_matrix(&model, mode))).map_err(|e| e.to_string())?;
        ensure(export_mst_dot(&rebuilt, &m.row_names) == export_mst_dot(&tree, &m.row_names), || {
            format!("{mode}: MST DOT differs across rebuilds")
        })?;
    }

    let mut runner = TestRunner::new(Config { cases: 500, failure_persistence: None, ..Config::default() });
    runner
        .run(&common::arb_model(), |generated: TaxonomyModel| {
            let text = serialize_taxonomy_document(&generated);
            let back = parse_taxonomy_document(&text).map_err(|e| {
                proptest::test_runner::TestCaseError::fail(format!("round trip rejected: {:?}", e.diagnostics))
            })?;
            proptest::prop_assert_eq!(&back.model, &generated);
            proptest::prop_assert_eq!(serialize_taxonomy_document(&back.model), text);
            let first = validate_model(&generated);
            proptest::prop_assert_eq!(&first, &validate_model(&generated));
            proptest::prop_assert_eq!(&first, &validate_model(&common::reversed(&generated)));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("bundled file is canonical, exports repeat byte for byte, 500 generated models round-trip".into())
}

fn extendability() -> Check {
    let base = bundled_model();
    let tabulated: Vec<(String, String)> = base
        .tables
        .iter()
        .flat_map(|t| t.rows.iter().map(move |r| (t.id.to_string(), r.to_string())))
        .collect();
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let mut sizes = Vec::new();
    for case in 0..40 {
        let k = rng.gen_range(0..=tabulated.len());
        let mut picked: Vec<&(String, String)> = tabulated.iter().collect();
        for i in (1..picked.len()).rev() {
            picked.swap(i, rng.gen_range(0..=i));
        }
        picked.truncate(k);
        let mut by_table: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (table, row) in &picked {
            by_table.entry(table).or_default().push(row);
        }
        let id = format!("generated-trait-{case}");
        let tables: Vec<String> = by_table
            .iter()
            .map(|(table, rows)| {
                let rows: Vec<String> =
                    rows.iter().map(|r| format!(r#"{{"category": "{r}", "marks": ["{id}"]}}"#)).collect();
                format!(r#"{{"id": "{table}", "columns": ["{id}"], "rows": [{}]}}"#, rows.join(", "))
            })
            .collect();
        let text = format!(
            r#"{{"traits": [{{"id": "{id}", "name": "Generated {case}", "parameters": [{{"name": "level", "kind": "amount"}}]}}],
                "tables": [{}]}}"#,
            tables.join(", ")
        );
        let ext = parse_extension_document(&text).map_err(|d| format!("{d:?}"))?;
        let merged = merge_extension(&base, &ext).map_err(|d| format!("case {case}: {d:?}"))?;
        ensure(merged.traits.len() == base.traits.len() + 1, || format!("case {case}: trait count"))?;
        ensure(merged.checkmark_total() == base.checkmark_total() + k, || {
            format!("case {case}: {} checkmarks, expected {} + {k}", merged.checkmark_total(), base.checkmark_total())
        })?;
        sizes.push(k);
    }
    Ok(format!(
        "40 generated extensions, k from {} to {}",
        sizes.iter().min().unwrap(),
        sizes.iter().max().unwrap()
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("dataset fidelity", dataset_fidelity),
        ("atomic-policy enumeration", enumeration),
        ("correlation semantics", correlation),
        ("MST correctness", mst),
        ("null-mode algebra", null_modes),
        ("determinism and round-trip", determinism),
        ("extendability", extendability),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
