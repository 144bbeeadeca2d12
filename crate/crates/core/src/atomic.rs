//! Atomic policies: a category implementing one trait (and at most one of its
//! subtraits) with every required parameter bound to a typed value.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::diagnostic::Code;
use crate::model::{CategoryId, ParameterKind, ParameterSpec, SubtraitId, TaxonomyModel, TraitId};

/// An implementable (category, trait, optional subtrait) combination.
///
/// Holding a single optional subtrait makes selecting two subtraits of one
/// trait unrepresentable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomicPolicySchema {
    pub category_id: CategoryId,
    pub trait_id: TraitId,
    pub subtrait_id: Option<SubtraitId>,
}

impl fmt::Display for AtomicPolicySchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.category_id, self.trait_id)?;
        if let Some(s) = &self.subtrait_id {
            write!(f, "\t{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PeriodUnit {
    Day,
    Week,
    Month,
    Quarter,
    Year,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Period {
    pub count: u32,
    pub unit: PeriodUnit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderBand {
    pub threshold: f64,
    pub rate: f64,
}

/// A concrete value bound to a parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum ParameterValue {
    Rate(f64),
    Amount(f64),
    Ladder(Vec<LadderBand>),
    Period(Period),
    /// Opaque predicate text; only its presence is checked.
    Condition(String),
    Reference(String),
    Bounds { lower: Option<f64>, upper: Option<f64> },
}

impl ParameterValue {
    pub fn kind(&self) -> ParameterKind {
        match self {
            ParameterValue::Rate(_) => ParameterKind::Rate,
            ParameterValue::Amount(_) => ParameterKind::Amount,
            ParameterValue::Ladder(_) => ParameterKind::Ladder,
            ParameterValue::Period(_) => ParameterKind::Period,
            ParameterValue::Condition(_) => ParameterKind::Condition,
            ParameterValue::Reference(_) => ParameterKind::Reference,
            ParameterValue::Bounds { .. } => ParameterKind::Bounds,
        }
    }

    /// Checks the value is well formed for its own kind.
    pub fn check(&self) -> Result<(), String> {
        match self {
            ParameterValue::Rate(v) | ParameterValue::Amount(v) if !v.is_finite() => {
                Err(format!("{v} is not a finite number"))
            }
            ParameterValue::Rate(_) | ParameterValue::Amount(_) | ParameterValue::Condition(_) => Ok(()),
            ParameterValue::Ladder(bands) => {
                if bands.is_empty() {
                    return Err("ladder needs at least one band".into());
                }
                if bands.iter().any(|b| !b.threshold.is_finite() || !b.rate.is_finite()) {
                    return Err("ladder bands must be finite".into());
                }
                if bands.windows(2).any(|w| w[0].threshold >= w[1].threshold) {
                    return Err("ladder thresholds must be strictly increasing".into());
                }
                Ok(())
            }
            ParameterValue::Period(p) if p.count == 0 => Err("period must be positive".into()),
            ParameterValue::Period(_) => Ok(()),
            ParameterValue::Reference(r) if r.trim().is_empty() => Err("reference is empty".into()),
            ParameterValue::Reference(_) => Ok(()),
            ParameterValue::Bounds { lower, upper } => {
                if lower.iter().chain(upper.iter()).any(|v| !v.is_finite()) {
                    return Err("bounds must be finite".into());
                }
                match (lower, upper) {
                    (Some(l), Some(u)) if l > u => Err(format!("lower bound {l} exceeds upper bound {u}")),
                    _ => Ok(()),
                }
            }
        }
    }
}

pub type Bindings = BTreeMap<String, ParameterValue>;

/// A schema with complete, type-checked parameter bindings.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicPolicy {
    pub schema: AtomicPolicySchema,
    pub bindings: Bindings,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("unknown trait `{0}`")]
    UnknownTrait(String),
    #[error("trait `{trait_id}` has no subtrait `{subtrait_id}`")]
    UnknownSubtrait { trait_id: String, subtrait_id: String },
    #[error("category `{category_id}` cannot implement trait `{trait_id}`")]
    NotImplementable { category_id: String, trait_id: String },
    #[error("trait `{0}` requires exactly one subtrait")]
    SubtraitRequired(String),
    #[error("trait `{0}` has no subtraits but one was given")]
    SubtraitNotAllowed(String),
    #[error("missing parameter `{0}`")]
    MissingBinding(String),
    #[error("unexpected parameter `{0}`")]
    ExtraBinding(String),
    #[error("parameter `{name}` expects {expected}, got {found}")]
    WrongKind {
        name: String,
        expected: ParameterKind,
        found: ParameterKind,
    },
    #[error("parameter `{name}`: {reason}")]
    InvalidValue { name: String, reason: String },
}

impl InstantiateError {
    pub fn code(&self) -> Code {
        match self {
            InstantiateError::UnknownCategory(_) => Code::UnknownCategory,
            InstantiateError::UnknownTrait(_) => Code::UnknownTrait,
            InstantiateError::UnknownSubtrait { .. } => Code::UnknownSubtrait,
            InstantiateError::NotImplementable { .. } => Code::NotImplementable,
            InstantiateError::SubtraitRequired(_) | InstantiateError::SubtraitNotAllowed(_) => {
                Code::Exclusivity
            }
            InstantiateError::MissingBinding(_)
            | InstantiateError::ExtraBinding(_)
            | InstantiateError::WrongKind { .. }
            | InstantiateError::InvalidValue { .. } => Code::Binding,
        }
    }
}

/// The parameters an implementation must bind: the category's own
/// parameters, then the trait's, then the selected subtrait's.
pub fn required_parameters<'m>(
    model: &'m TaxonomyModel,
    category_id: &str,
    trait_id: &str,
    subtrait_id: Option<&str>,
) -> Result<Vec<&'m ParameterSpec>, InstantiateError> {
    let category = model
        .category(category_id)
        .ok_or_else(|| InstantiateError::UnknownCategory(category_id.to_owned()))?;
    let trait_def = model
        .trait_def(trait_id)
        .ok_or_else(|| InstantiateError::UnknownTrait(trait_id.to_owned()))?;
    if !category.implements(trait_id) {
        return Err(InstantiateError::NotImplementable {
            category_id: category_id.to_owned(),
            trait_id: trait_id.to_owned(),
        });
    }
    let subtrait = match (trait_def.is_categorical(), subtrait_id) {
        (true, None) => return Err(InstantiateError::SubtraitRequired(trait_id.to_owned())),
        (false, Some(_)) => return Err(InstantiateError::SubtraitNotAllowed(trait_id.to_owned())),
        (false, None) => None,
        (true, Some(s)) => Some(trait_def.subtrait(s).ok_or_else(|| InstantiateError::UnknownSubtrait {
            trait_id: trait_id.to_owned(),
            subtrait_id: s.to_owned(),
        })?),
    };
    Ok(category
        .own_parameters
        .iter()
        .chain(&trait_def.parameters)
        .chain(subtrait.into_iter().flat_map(|s| &s.parameters))
        .collect())
}

/// Builds a fully bound atomic policy, checking the checkmark, subtrait
/// exclusivity and binding completeness and types.
pub fn instantiate_atomic_policy(
    model: &TaxonomyModel,
    category_id: &str,
    trait_id: &str,
    subtrait_id: Option<&str>,
    bindings: Bindings,
) -> Result<AtomicPolicy, InstantiateError> {
    let required = required_parameters(model, category_id, trait_id, subtrait_id)?;
    for spec in &required {
        let value = bindings
            .get(&spec.name)
            .ok_or_else(|| InstantiateError::MissingBinding(spec.name.clone()))?;
        if value.kind() != spec.kind {
            return Err(InstantiateError::WrongKind {
                name: spec.name.clone(),
                expected: spec.kind,
                found: value.kind(),
            });
        }
        value.check().map_err(|reason| InstantiateError::InvalidValue {
            name: spec.name.clone(),
            reason,
        })?;
    }
    if let Some(extra) = bindings.keys().find(|k| !required.iter().any(|s| &s.name == *k)) {
        return Err(InstantiateError::ExtraBinding(extra.clone()));
    }
    Ok(AtomicPolicy {
        schema: AtomicPolicySchema {
            category_id: category_id.into(),
            trait_id: trait_id.into(),
            subtrait_id: subtrait_id.map(SubtraitId::from),
        },
        bindings,
    })
}
