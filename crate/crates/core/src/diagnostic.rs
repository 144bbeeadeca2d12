//! Structured diagnostics reported by validation, loading and merging.
//!
//! Diagnostics are data: a validator collects every problem it finds and
//! never stops at the first one.

use std::fmt;

/// Stable diagnostic and error codes. This is the closed set of codes the
/// crate ever emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    /// Malformed document text.
    Syntax,
    /// Unknown keys, wrong value kinds, missing sections, bad schema version.
    Schema,
    BadIdentifier,
    DuplicateId,
    /// Two parameters with the same name on one owner.
    DuplicateParameter,
    /// Category parameters collide with the parameters of a trait it implements.
    ParameterCollision,
    UnknownTrait,
    UnknownCategory,
    UnknownChannel,
    UnknownNode,
    /// A table row marks a trait that is not one of the table's columns.
    UnknownColumn,
    DuplicateColumn,
    /// A category listed more than once across trait tables.
    DuplicateRow,
    /// A category implements a trait outside its table, or sits in no table.
    UntabulatedCheckmark,
    /// Inline implementable traits disagree with the tables.
    CheckmarkConflict,
    NotATree,
    /// Node kind inconsistent with its children or category reference.
    NodeKind,
    /// A category without exactly one leaf node.
    UnplacedCategory,
    GroupPath,
    ChannelPath,
    /// An extension redefines an existing id with different content.
    Conflict,
    NotImplementable,
    Exclusivity,
    Binding,
    UnknownSubtrait,
    BadFilter,
    NotFound,
    Ambiguous,
    Empty,
    /// A trait no category implements.
    UnusedTrait,
    /// A categorical trait with a single subtrait.
    SingleSubtrait,
}

impl Code {
    pub const fn as_str(self) -> &'static str {
        match self {
            Code::Syntax => "E_SYNTAX",
            Code::Schema => "E_SCHEMA",
            Code::BadIdentifier => "E_BAD_IDENTIFIER",
            Code::DuplicateId => "E_DUPLICATE_ID",
            Code::DuplicateParameter => "E_DUPLICATE_PARAMETER",
            Code::ParameterCollision => "E_PARAMETER_COLLISION",
            Code::UnknownTrait => "E_UNKNOWN_TRAIT",
            Code::UnknownCategory => "E_UNKNOWN_CATEGORY",
            Code::UnknownChannel => "E_UNKNOWN_CHANNEL",
            Code::UnknownNode => "E_UNKNOWN_NODE",
            Code::UnknownColumn => "E_UNKNOWN_COLUMN",
            Code::DuplicateColumn => "E_DUPLICATE_COLUMN",
            Code::DuplicateRow => "E_DUPLICATE_ROW",
            Code::UntabulatedCheckmark => "E_UNTABULATED_CHECKMARK",
            Code::CheckmarkConflict => "E_CHECKMARK_CONFLICT",
            Code::NotATree => "E_NOT_A_TREE",
            Code::NodeKind => "E_NODE_KIND",
            Code::UnplacedCategory => "E_UNPLACED_CATEGORY",
            Code::GroupPath => "E_GROUP_PATH",
            Code::ChannelPath => "E_CHANNEL_PATH",
            Code::Conflict => "E_CONFLICT",
            Code::NotImplementable => "E_NOT_IMPLEMENTABLE",
            Code::Exclusivity => "E_EXCLUSIVITY",
            Code::Binding => "E_BINDING",
            Code::UnknownSubtrait => "E_UNKNOWN_SUBTRAIT",
            Code::BadFilter => "E_BAD_FILTER",
            Code::NotFound => "E_NOT_FOUND",
            Code::Ambiguous => "E_AMBIGUOUS",
            Code::Empty => "E_EMPTY",
            Code::UnusedTrait => "W_UNUSED_TRAIT",
            Code::SingleSubtrait => "W_SINGLE_SUBTRAIT",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

/// One validation finding.
///
/// `path` locates the element by id rather than by list index
/// (`/categories[personal-income-tax]/implementable_traits[tax-base]`), so
/// reordering a model's lists never changes its diagnostics. Syntax and
/// schema errors use `line:column` locators instead.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: Code, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code,
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn warning(code: Code, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code,
            severity: Severity::Warning,
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}] {}: {}",
            self.severity.as_str(),
            self.code,
            self.path,
            self.message
        )
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}
