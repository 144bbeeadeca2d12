//! The `polytax` command line.
//!
//! Exit status: 0 on success, 1 when the input fails to load or validate (or
//! a file cannot be read or written), 2 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::analytics::{build_trait_matrix, euclidean_distance, kruskal_mst, pearson_correlation, NullMode};
use crate::diagnostic::{Code, Diagnostic};
use crate::enumerate::{count_checkmarks, enumerate_schemas, lookup, node_path, CountBy, EnumerationFilter, Found};
use crate::export::{
    export_markdown_tables, export_matrix_csv, export_mst_dot, export_schema_list, export_tree_dot, export_tree_text,
    MatrixRef,
};
use crate::ingest::{
    merge_extension, parse_extension_document, parse_taxonomy_document, serialize_taxonomy_document, BUNDLED_DATASET,
};
use crate::model::TaxonomyModel;

/// Overrides the bundled dataset when `--input` is absent.
pub const DATA_ENV: &str = "POLYTAX_DATA";

#[derive(Debug, Parser)]
#[command(name = "polytax", version, about = "Economic-policy taxonomy: validation, enumeration and trait analytics")]
struct Cli {
    /// Taxonomy file to read instead of the bundled dataset.
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a taxonomy file.
    Validate {
        /// Defaults to the input dataset.
        file: Option<PathBuf>,
    },
    /// Print the taxonomy tree.
    Tree {
        #[arg(long, value_enum, default_value_t = TreeFormat::Text)]
        format: TreeFormat,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// List or count atomic-policy schemas.
    #[command(subcommand)]
    Policies(PoliciesCommand),
    /// Render the trait tables as markdown.
    Tables {
        /// Table id; all tables when absent.
        #[arg(long)]
        table: Option<String>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Find a category or taxonomy node by id or name.
    Lookup { query: String },
    /// Boolean category-by-trait matrix as CSV.
    Matrix(AnalyticsArgs),
    /// Pearson correlation between categories as CSV.
    Corr(AnalyticsArgs),
    /// Euclidean distance between categories as CSV.
    Dist(AnalyticsArgs),
    /// Minimum spanning tree over category distances.
    Mst {
        #[command(flatten)]
        args: AnalyticsArgs,
        #[arg(long, value_enum, default_value_t = MstFormat::Dot)]
        format: MstFormat,
        /// With `--format csv`, write the 0/1 adjacency matrix instead of pruned distances.
        #[arg(long)]
        adjacency: bool,
    },
    /// Apply an extension document to a base taxonomy file.
    Merge {
        base: PathBuf,
        extension: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum PoliciesCommand {
    /// One schema per line: category, trait and optional subtrait, tab separated.
    List {
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Number of schemas, optionally broken down.
    Count {
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long, value_enum)]
        by: Option<CountKey>,
    },
}

#[derive(Debug, Args)]
struct FilterArgs {
    /// Table id.
    #[arg(long)]
    table: Option<String>,
    /// Cross tag, e.g. international-trade.
    #[arg(long)]
    tag: Option<String>,
    /// Trait id.
    #[arg(long = "trait", value_name = "TRAIT")]
    trait_id: Option<String>,
    /// Group node id, or labels from the root joined by `>`.
    #[arg(long)]
    group: Option<String>,
    /// One schema per subtrait.
    #[arg(long)]
    expand_subtraits: bool,
}

#[derive(Debug, Args)]
struct AnalyticsArgs {
    #[arg(long, value_enum, default_value_t = NullModeArg::Include)]
    null_mode: NullModeArg,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TreeFormat {
    Dot,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MstFormat {
    Dot,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CountKey {
    Table,
    Category,
    Trait,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NullModeArg {
    Include,
    Collapse,
    Exclude,
}

impl From<NullModeArg> for NullMode {
    fn from(m: NullModeArg) -> Self {
        match m {
            NullModeArg::Include => NullMode::Include,
            NullModeArg::Collapse => NullMode::Collapse,
            NullModeArg::Exclude => NullMode::Exclude,
        }
    }
}

enum Failure {
    /// Bad input data or I/O; exit 1.
    Data(Vec<String>),
    /// Bad arguments that clap could not catch; exit 2.
    Usage(Diagnostic),
}

type Outcome = Result<(), Failure>;

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Data(vec![format!("{}: {e}", path.display())])
}

/// Runs the CLI on `argv` (program name first) and returns the exit status.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                if !text.contains("Usage:") {
                    let _ = writeln!(stderr, "\n{}", Cli::command().render_usage());
                }
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let mut ctx = Ctx { input: cli.input, stdout };
    match ctx.dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Data(lines)) => {
            for l in lines {
                let _ = writeln!(stderr, "{l}");
            }
            1
        }
        Err(Failure::Usage(d)) => {
            let _ = writeln!(stderr, "{d}");
            let _ = writeln!(stderr, "{}", Cli::command().render_usage());
            2
        }
    }
}

struct Ctx<'a> {
    input: Option<PathBuf>,
    stdout: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn dispatch(&mut self, command: Command) -> Outcome {
        match command {
            Command::Validate { file } => self.validate(file),
            Command::Tree { format, out } => {
                let model = self.model()?;
                let text = match format {
                    TreeFormat::Dot => export_tree_dot(&model).payload,
                    TreeFormat::Text => export_tree_text(&model),
                };
                self.emit(out.as_deref(), &text)
            }
            Command::Policies(PoliciesCommand::List { filter, out }) => {
                let model = self.model()?;
                let schemas = self.schemas(&model, &filter)?;
                self.emit(out.as_deref(), &export_schema_list(&schemas).payload)
            }
            Command::Policies(PoliciesCommand::Count { filter, by }) => {
                let model = self.model()?;
                let schemas = self.schemas(&model, &filter)?;
                let text = match by {
                    None => format!("{}\n", schemas.len()),
                    Some(key) => breakdown(&model, &schemas, key),
                };
                self.emit(None, &text)
            }
            Command::Tables { table, out } => {
                let model = self.model()?;
                if let Some(t) = &table {
                    if model.table(t).is_none() {
                        return Err(Failure::Usage(Diagnostic::error(
                            Code::BadFilter,
                            "--table",
                            format!("`{t}`: no such table"),
                        )));
                    }
                }
                self.emit(out.as_deref(), &export_markdown_tables(&model, table.as_deref()).payload)
            }
            Command::Lookup { query } => {
                let model = self.model()?;
                let text = match lookup(&model, &query).map_err(|d| Failure::Data(vec![d.to_string()]))? {
                    Found::Category(c) => {
                        let traits: Vec<&str> = c.implementable_trait_ids.iter().map(|t| t.as_str()).collect();
                        format!(
                            "category\t{}\t{}\n  path: {}\n  traits: {}\n",
                            c.id,
                            c.name,
                            c.group_path.join(" > "),
                            traits.join(", ")
                        )
                    }
                    Found::Node(n) => {
                        let path = node_path(&model, n.id.as_str()).unwrap_or_default();
                        format!("node\t{}\t{}\n  path: {}\n  kind: {}\n", n.id, n.label, path.join(" > "), n.kind.as_str())
                    }
                };
                self.emit(None, &text)
            }
            Command::Matrix(args) => {
                let model = self.model()?;
                let m = build_trait_matrix(&model, args.null_mode.into());
                self.emit(args.out.as_deref(), &export_matrix_csv(MatrixRef::Trait(&m)).payload)
            }
            Command::Corr(args) => {
                let model = self.model()?;
                let c = pearson_correlation(&build_trait_matrix(&model, args.null_mode.into()));
                self.emit(args.out.as_deref(), &export_matrix_csv(MatrixRef::Correlation(&c)).payload)
            }
            Command::Dist(args) => {
                let model = self.model()?;
                let d = euclidean_distance(&build_trait_matrix(&model, args.null_mode.into()));
                self.emit(args.out.as_deref(), &export_matrix_csv(MatrixRef::Distance(&d)).payload)
            }
            Command::Mst { args, format, adjacency } => {
                let model = self.model()?;
                let m = build_trait_matrix(&model, args.null_mode.into());
                let mst = kruskal_mst(&euclidean_distance(&m)).map_err(|d| Failure::Data(vec![d.to_string()]))?;
                let text = match (format, adjacency) {
                    (MstFormat::Dot, _) => export_mst_dot(&mst, &m.row_names).payload,
                    (MstFormat::Csv, false) => export_matrix_csv(MatrixRef::Pruned(&mst)).payload,
                    (MstFormat::Csv, true) => export_matrix_csv(MatrixRef::Adjacency(&mst)).payload,
                };
                self.emit(args.out.as_deref(), &text)
            }
            Command::Merge { base, extension, out } => {
                let model = load_file(&base)?;
                let ext_text = fs::read_to_string(&extension).map_err(|e| io_failure(&extension, e))?;
                let ext = parse_extension_document(&ext_text).map_err(|ds| located(&extension, &ds))?;
                let merged = merge_extension(&model, &ext).map_err(|ds| located(&extension, &ds))?;
                self.emit(out.as_deref(), &serialize_taxonomy_document(&merged))
            }
        }
    }

    fn validate(&mut self, file: Option<PathBuf>) -> Outcome {
        let (name, text) = match file.or_else(|| self.input_path()) {
            Some(path) => {
                let text = fs::read_to_string(&path).map_err(|e| io_failure(&path, e))?;
                (path.display().to_string(), text)
            }
            None => ("<bundled>".to_owned(), BUNDLED_DATASET.to_owned()),
        };
        match parse_taxonomy_document(&text) {
            Ok(loaded) => {
                let m = &loaded.model;
                let mut report: String = loaded.warnings.iter().map(|w| format!("{name}: {w}\n")).collect();
                report.push_str(&format!(
                    "{name}: ok ({} traits, {} categories, {} checkmarks)\n",
                    m.traits.len(),
                    m.categories.len(),
                    m.checkmark_total()
                ));
                self.emit(None, &report)
            }
            Err(e) => {
                let mut lines: Vec<String> = e.diagnostics.iter().map(|d| format!("{name}: {d}")).collect();
                lines.push(format!("{name}: {} error(s)", e.error_count()));
                Err(Failure::Data(lines))
            }
        }
    }

    fn input_path(&self) -> Option<PathBuf> {
        self.input
            .clone()
            .or_else(|| std::env::var_os(DATA_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
    }

    fn model(&self) -> Result<TaxonomyModel, Failure> {
        match self.input_path() {
            Some(path) => load_file(&path),
            None => parse_taxonomy_document(BUNDLED_DATASET)
                .map(|l| l.model)
                .map_err(|e| located(Path::new("<bundled>"), &e.diagnostics)),
        }
    }

    fn schemas(
        &self,
        model: &TaxonomyModel,
        args: &FilterArgs,
    ) -> Result<Vec<crate::atomic::AtomicPolicySchema>, Failure> {
        let group_prefix = args.group.as_deref().map(|g| {
            node_path(model, g).unwrap_or_else(|| g.split('>').map(|s| s.trim().to_owned()).collect())
        });
        let filter = EnumerationFilter {
            table: args.table.clone(),
            group_prefix,
            cross_tag: args.tag.clone(),
            trait_id: args.trait_id.clone(),
            expand_subtraits: args.expand_subtraits,
        };
        enumerate_schemas(model, &filter).map_err(Failure::Usage)
    }

    fn emit(&mut self, out: Option<&Path>, text: &str) -> Outcome {
        match out {
            Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
            None => self
                .stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Data(vec![format!("<stdout>: {e}")])),
        }
    }
}

fn located(path: &Path, diagnostics: &[Diagnostic]) -> Failure {
    Failure::Data(diagnostics.iter().map(|d| format!("{}: {d}", path.display())).collect())
}

fn load_file(path: &Path) -> Result<TaxonomyModel, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    parse_taxonomy_document(&text)
        .map(|l| l.model)
        .map_err(|e| located(path, &e.diagnostics))
}

/// `key<TAB>count` lines for every table, category or trait in model order.
fn breakdown(model: &TaxonomyModel, schemas: &[crate::atomic::AtomicPolicySchema], key: CountKey) -> String {
    let by = match key {
        CountKey::Table => CountBy::Table,
        CountKey::Category => CountBy::Category,
        CountKey::Trait => CountBy::Trait,
    };
    let mut out = String::new();
    for (id, _) in count_checkmarks(model, by) {
        let n = schemas
            .iter()
            .filter(|s| match by {
                CountBy::Table => model.table_of(s.category_id.as_str()).is_some_and(|t| t.id == id.as_str()),
                CountBy::Category => s.category_id == id.as_str(),
                CountBy::Trait => s.trait_id == id.as_str(),
            })
            .count();
        out.push_str(&format!("{id}\t{n}\n"));
    }
    out
}
