use crate::analytics::{CorrelationMatrix, DistanceMatrix, MstResult, TraitMatrix};

use super::{ArtifactKind, ExportArtifact};

/// Any of the analytics grids that export as CSV.
#[derive(Debug, Clone, Copy)]
pub enum MatrixRef<'a> {
    Trait(&'a TraitMatrix),
    Correlation(&'a CorrelationMatrix),
    Distance(&'a DistanceMatrix),
    /// Tree-edge distances, other cells empty.
    Pruned(&'a MstResult),
    /// 0/1 tree adjacency.
    Adjacency(&'a MstResult),
}

fn float(v: f64) -> String {
    format!("{v}")
}

/// Header row of column labels after an empty corner cell, then one row per
/// label. Booleans are 0/1, absent values are empty cells, lines end in LF
/// and fields are quoted only when needed.
pub fn export_matrix_csv(matrix: MatrixRef<'_>) -> ExportArtifact {
    let (kind, cols, rows, cells): (ArtifactKind, &[String], &[String], Vec<Vec<String>>) = match matrix {
        MatrixRef::Trait(m) => (
            ArtifactKind::CsvMatrix,
            &m.col_labels,
            &m.row_labels,
            m.cells
                .iter()
                .map(|r| r.iter().map(|&b| if b { "1" } else { "0" }.to_owned()).collect())
                .collect(),
        ),
        MatrixRef::Correlation(m) => (
            ArtifactKind::CsvCorrelation,
            &m.labels,
            &m.labels,
            m.cells
                .iter()
                .map(|r| r.iter().map(|v| v.map(float).unwrap_or_default()).collect())
                .collect(),
        ),
        MatrixRef::Distance(m) => (
            ArtifactKind::CsvDistance,
            &m.labels,
            &m.labels,
            m.cells.iter().map(|r| r.iter().copied().map(float).collect()).collect(),
        ),
        MatrixRef::Pruned(m) => (
            ArtifactKind::CsvDistance,
            &m.labels,
            &m.labels,
            m.pruned
                .iter()
                .map(|r| r.iter().map(|v| v.map(float).unwrap_or_default()).collect())
                .collect(),
        ),
        MatrixRef::Adjacency(m) => (
            ArtifactKind::CsvMatrix,
            &m.labels,
            &m.labels,
            m.adjacency.iter().map(|r| r.iter().map(u8::to_string).collect()).collect(),
        ),
    };

    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let header = std::iter::once("").chain(cols.iter().map(String::as_str));
    writer.write_record(header).expect("writing to memory");
    for (label, row) in rows.iter().zip(cells) {
        let record = std::iter::once(label.clone()).chain(row);
        writer.write_record(record).expect("writing to memory");
    }
    let bytes = writer.into_inner().expect("flushing to memory");
    ExportArtifact {
        kind,
        payload: String::from_utf8(bytes).expect("csv of UTF-8 fields is UTF-8"),
    }
}
