use super::TraitMatrix;

/// Pairwise Euclidean distances between matrix rows.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.cells[i][j])
    }
}

/// For 0/1 rows the distance is the square root of the Hamming distance.
pub fn euclidean_distance(matrix: &TraitMatrix) -> DistanceMatrix {
    let size = matrix.rows();
    let mut cells = vec![vec![0.0; size]; size];
    for (i, a) in matrix.cells.iter().enumerate() {
        for (j, b) in matrix.cells.iter().enumerate().skip(i + 1) {
            let differing = a
                .iter()
                .zip(b)
                .filter(|(a, b)| a != b)
                .count();
            let d = (differing as f64).sqrt();
            cells[i][j] = d;
            cells[j][i] = d;
        }
    }
    DistanceMatrix {
        labels: matrix.row_labels.clone(),
        cells,
    }
}
