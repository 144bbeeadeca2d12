use super::TraitMatrix;

/// Pairwise Pearson r between matrix rows. `None` marks pairs where either
/// row is constant.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<Option<f64>> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.cells[i][j])
    }
}

/// Sample Pearson correlation over the 0/1 rows.
///
/// For binary data the sums are integers, so r is computed from exact
/// integer moments: r = (n·Σxy − Σx·Σy) / sqrt((n·Σx − (Σx)²)(n·Σy − (Σy)²)).
/// The (n−1) normalizations of sample covariance and deviation cancel.
/// Only the upper triangle is computed; the lower is mirrored.
pub fn pearson_correlation(matrix: &TraitMatrix) -> CorrelationMatrix {
    let n = matrix.col_labels.len() as i64;
    let sums: Vec<i64> = matrix
        .cells
        .iter()
        .map(|row| row.iter().filter(|&&b| b).count() as i64)
        .collect();
    let spread: Vec<i64> = sums.iter().map(|&s| n * s - s * s).collect();
    let size = matrix.rows();
    let mut cells = vec![vec![None; size]; size];
    for i in 0..size {
        for j in i..size {
            if spread[i] == 0 || spread[j] == 0 {
                continue;
            }
            let both = matrix.cells[i]
                .iter()
                .zip(&matrix.cells[j])
                .filter(|(a, b)| **a && **b)
                .count() as i64;
            let num = (n * both - sums[i] * sums[j]) as f64;
            let r = if i == j {
                1.0
            } else {
                (num / ((spread[i] as f64) * (spread[j] as f64)).sqrt()).clamp(-1.0, 1.0)
            };
            cells[i][j] = Some(r);
            cells[j][i] = Some(r);
        }
    }
    CorrelationMatrix {
        labels: matrix.row_labels.clone(),
        cells,
    }
}
