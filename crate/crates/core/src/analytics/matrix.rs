use std::fmt;
use std::str::FromStr;

use crate::diagnostic::{Code, Diagnostic};
use crate::model::TaxonomyModel;

pub const NULL_POLICY_ID: &str = "null-policy";
pub const NULL_POLICY_NAME: &str = "Null Policy";

/// How categories that implement no traits enter the matrix.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum NullMode {
    /// One all-zero row per trait-less category.
    #[default]
    Include,
    /// A single all-zero `null-policy` row, appended last.
    Collapse,
    /// No all-zero rows.
    Exclude,
}

impl NullMode {
    pub const ALL: [NullMode; 3] = [NullMode::Include, NullMode::Collapse, NullMode::Exclude];

    pub fn as_str(self) -> &'static str {
        match self {
            NullMode::Include => "include",
            NullMode::Collapse => "collapse",
            NullMode::Exclude => "exclude",
        }
    }
}

impl fmt::Display for NullMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NullMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NullMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown null mode `{s}` (expected include, collapse or exclude)"))
    }
}

/// Categories by traits; `cells[i][j]` is true iff row `i` implements column `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraitMatrix {
    /// Category ids, or [`NULL_POLICY_ID`] for the collapsed row.
    pub row_labels: Vec<String>,
    /// Display names, parallel to `row_labels`.
    pub row_names: Vec<String>,
    /// Trait ids in model order.
    pub col_labels: Vec<String>,
    pub cells: Vec<Vec<bool>>,
}

impl TraitMatrix {
    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.row_labels.iter().position(|l| l == label)
    }

    pub fn row(&self, label: &str) -> Option<&[bool]> {
        self.row_index(label).map(|i| self.cells[i].as_slice())
    }
}

/// Builds the matrix with one column per top-level trait, rows in category
/// order.
pub fn build_trait_matrix(model: &TaxonomyModel, null_mode: NullMode) -> TraitMatrix {
    let col_labels: Vec<String> = model.traits.iter().map(|t| t.id.to_string()).collect();
    let mut matrix = TraitMatrix {
        row_labels: Vec::new(),
        row_names: Vec::new(),
        col_labels,
        cells: Vec::new(),
    };
    let mut any_null = false;
    for category in &model.categories {
        let row: Vec<bool> = model.traits.iter().map(|t| category.implements(t.id.as_str())).collect();
        if !row.contains(&true) && null_mode != NullMode::Include {
            any_null = true;
            continue;
        }
        matrix.row_labels.push(category.id.to_string());
        matrix.row_names.push(category.name.clone());
        matrix.cells.push(row);
    }
    if null_mode == NullMode::Collapse && any_null {
        matrix.row_labels.push(NULL_POLICY_ID.to_owned());
        matrix.row_names.push(NULL_POLICY_NAME.to_owned());
        matrix.cells.push(vec![false; matrix.col_labels.len()]);
    }
    matrix
}

/// A category's row as 0/1 values in column order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignalSeries {
    pub category_id: String,
    pub values: Vec<u8>,
}

impl SignalSeries {
    pub fn ones(&self) -> usize {
        self.values.iter().filter(|&&v| v == 1).count()
    }
}

pub fn signal_series(matrix: &TraitMatrix, category_id: &str) -> Result<SignalSeries, Diagnostic> {
    let row = matrix.row(category_id).ok_or_else(|| {
        Diagnostic::error(Code::NotFound, category_id, "not a row of the trait matrix")
    })?;
    Ok(SignalSeries {
        category_id: category_id.to_owned(),
        values: row.iter().map(|&b| u8::from(b)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::bundled_model;

    #[test]
    fn null_mode_parses() {
        for mode in NullMode::ALL {
            assert_eq!(mode.as_str().parse::<NullMode>().unwrap(), mode);
        }
        assert!("drop".parse::<NullMode>().is_err());
    }

    #[test]
    fn row_counts_per_mode() {
        let model = bundled_model();
        let rows = |m| build_trait_matrix(&model, m).rows();
        assert_eq!(rows(NullMode::Include), 97);
        assert_eq!(rows(NullMode::Collapse), 56);
        assert_eq!(rows(NullMode::Exclude), 55);
    }

    #[test]
    fn collapse_without_trait_less_rows_adds_nothing() {
        let mut model = bundled_model();
        model.categories.retain(|c| !c.is_trait_less());
        let include = build_trait_matrix(&model, NullMode::Include);
        assert_eq!(build_trait_matrix(&model, NullMode::Collapse), include);
    }

    #[test]
    fn unknown_series_is_not_found() {
        let model = bundled_model();
        let m = build_trait_matrix(&model, NullMode::Exclude);
        assert_eq!(signal_series(&m, "tax-amnesty").unwrap_err().code, Code::NotFound);
    }
}
