//! Weighted multi-term orderings `T = ½ Σ wᵢ m^αᵢ p m^βᵢ p m^γᵢ` and the
//! forward map to the linear ambiguity parameters.
//!
//! Any such ordering equals
//!
//! ```text
//! ½ p (1/m) p + η (iħ/2) (1/m)' p + (ħ²/2) [ ξ (1/m)'' + ζ ((1/m)')² / (1/m) ]
//! ```
//!
//! with `ξ = mean(γ)`, `ζ = mean(αγ)` and `η = mean(γ) − mean(α)`, all means
//! taken with the weights `wᵢ`. The operator is Hermitian exactly when `η = 0`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{OrderingError, ValidationErrors};
use crate::scalar::Scalar;

/// One term `w · m^α p m^β p m^γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct BuildingBlock<S> {
    pub weight: S,
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
}

impl<S: Scalar> BuildingBlock<S> {
    pub fn new(weight: S, alpha: S, beta: S, gamma: S) -> Self {
        BuildingBlock {
            weight,
            alpha,
            beta,
            gamma,
        }
    }

    /// Term with `β` fixed by the classical-limit constraint `α + β + γ = −1`.
    pub fn closed(weight: S, alpha: S, gamma: S) -> Self {
        let beta = -S::one() - alpha.clone() - gamma.clone();
        BuildingBlock::new(weight, alpha, beta, gamma)
    }

    /// The symmetric term `m^α p m^(−1−2α) p m^α`.
    pub fn mirrored(weight: S, alpha: S) -> Self {
        BuildingBlock::closed(weight, alpha.clone(), alpha)
    }

    pub fn exponent_sum(&self) -> S {
        self.alpha.clone() + self.beta.clone() + self.gamma.clone()
    }

    fn triple_cmp(&self, other: &Self) -> Ordering {
        let cmp = |a: &S, b: &S| a.partial_cmp(b).unwrap_or(Ordering::Equal);
        cmp(&self.alpha, &other.alpha)
            .then_with(|| cmp(&self.beta, &other.beta))
            .then_with(|| cmp(&self.gamma, &other.gamma))
    }

    fn same_triple(&self, other: &Self) -> bool {
        self.alpha == other.alpha && self.beta == other.beta && self.gamma == other.gamma
    }

    /// Lifts the term into another scalar type.
    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> BuildingBlock<T> {
        BuildingBlock {
            weight: f(&self.weight),
            alpha: f(&self.alpha),
            beta: f(&self.beta),
            gamma: f(&self.gamma),
        }
    }
}

/// Which per-term quantity a weighted mean averages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    Alpha,
    Gamma,
    AlphaGamma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Alpha,
    Beta,
    Gamma,
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exponent::Alpha => "alpha",
            Exponent::Beta => "beta",
            Exponent::Gamma => "gamma",
        })
    }
}

/// An exponent outside `[−1, 0]`. Conventional, not required, so it never
/// fails validation.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundsWarning<S> {
    pub term: usize,
    pub exponent: Exponent,
    pub value: S,
}

impl<S: fmt::Display> fmt::Display for BoundsWarning<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "term {}: {} = {} outside [-1, 0]",
            self.term, self.exponent, self.value
        )
    }
}

/// Successful validation, possibly with bounds warnings.
#[derive(Clone, Debug, PartialEq)]
pub struct Validation<S> {
    pub warnings: Vec<BoundsWarning<S>>,
}

/// `(ξ, ζ, η)`: the weighted means `mean(γ)`, `mean(αγ)` and the Hermiticity
/// defect `mean(γ) − mean(α)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearParams<S> {
    pub xi: S,
    pub zeta: S,
    pub eta: S,
}

impl<S: Scalar> LinearParams<S> {
    pub fn new(xi: S, zeta: S, eta: S) -> Self {
        LinearParams { xi, zeta, eta }
    }

    pub fn hermitian(xi: S, zeta: S) -> Self {
        LinearParams::new(xi, zeta, S::zero())
    }

    pub fn is_hermitian(&self) -> bool {
        self.eta.is_zero()
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> LinearParams<T> {
        LinearParams {
            xi: f(&self.xi),
            zeta: f(&self.zeta),
            eta: f(&self.eta),
        }
    }
}

/// A weighted sum of building blocks. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderingSpec<S> {
    terms: Vec<BuildingBlock<S>>,
    name: Option<String>,
}

impl<S: Scalar> OrderingSpec<S> {
    /// Builds a spec without checking it; see [`OrderingSpec::validate`].
    pub fn new(terms: Vec<BuildingBlock<S>>) -> Self {
        OrderingSpec { terms, name: None }
    }

    pub fn named(name: impl Into<String>, terms: Vec<BuildingBlock<S>>) -> Self {
        OrderingSpec {
            terms,
            name: Some(name.into()),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn terms(&self) -> &[BuildingBlock<S>] {
        &self.terms
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weight_sum(&self) -> S {
        self.terms
            .iter()
            .fold(S::zero(), |acc, t| acc + t.weight.clone())
    }

    /// Checks `Σ wᵢ = 1` and `αᵢ + βᵢ + γᵢ = −1` for every term, collecting
    /// all violations. Exponents outside `[−1, 0]` are reported as warnings.
    pub fn validate(&self) -> Result<Validation<S>, ValidationErrors> {
        let mut errors = Vec::new();
        if self.terms.is_empty() {
            errors.push(OrderingError::Empty);
        }
        let minus_one = -S::one();
        for (i, t) in self.terms.iter().enumerate() {
            let sum = t.exponent_sum();
            if !sum.coincides(&minus_one) {
                errors.push(OrderingError::ConstraintViolation {
                    term: i,
                    sum: sum.to_string(),
                });
            }
        }
        let total = self.weight_sum();
        if !self.terms.is_empty() && !total.coincides(&S::one()) {
            errors.push(OrderingError::WeightSumViolation {
                sum: total.to_string(),
            });
        }
        if !errors.is_empty() {
            return Err(ValidationErrors(errors));
        }
        let mut warnings = Vec::new();
        for (i, t) in self.terms.iter().enumerate() {
            for (which, v) in [
                (Exponent::Alpha, &t.alpha),
                (Exponent::Beta, &t.beta),
                (Exponent::Gamma, &t.gamma),
            ] {
                if *v > S::zero() || *v < minus_one {
                    warnings.push(BoundsWarning {
                        term: i,
                        exponent: which,
                        value: v.clone(),
                    });
                }
            }
        }
        Ok(Validation { warnings })
    }

    pub fn weighted_mean(&self, selector: Selector) -> S {
        self.terms.iter().fold(S::zero(), |acc, t| {
            let x = match selector {
                Selector::Alpha => t.alpha.clone(),
                Selector::Gamma => t.gamma.clone(),
                Selector::AlphaGamma => t.alpha.clone() * t.gamma.clone(),
            };
            acc + t.weight.clone() * x
        })
    }

    pub fn linear_params(&self) -> Result<LinearParams<S>, ValidationErrors> {
        self.validate()?;
        Ok(self.linear_params_unchecked())
    }

    pub(crate) fn linear_params_unchecked(&self) -> LinearParams<S> {
        let xi = self.weighted_mean(Selector::Gamma);
        let zeta = self.weighted_mean(Selector::AlphaGamma);
        let eta = xi.clone() - self.weighted_mean(Selector::Alpha);
        LinearParams { xi, zeta, eta }
    }

    pub fn is_hermitian(&self) -> bool {
        self.weighted_mean(Selector::Alpha) == self.weighted_mean(Selector::Gamma)
    }

    /// True when the term list is closed under `α ↔ γ` with matching weights,
    /// which makes every discretization built from it exactly symmetric.
    pub fn is_mirrored(&self) -> bool {
        let canon = self.canonical();
        canon.terms.iter().all(|t| {
            canon.terms.iter().any(|u| {
                u.alpha == t.gamma && u.gamma == t.alpha && u.beta == t.beta && u.weight == t.weight
            })
        })
    }

    /// Terms sorted lexicographically by `(α, β, γ)`, equal triples merged by
    /// summing weights, zero-weight terms dropped. Order of terms never
    /// changes the operator, so this is the identity used for comparisons
    /// and printing.
    pub fn canonical(&self) -> Self {
        let mut sorted = self.terms.clone();
        sorted.sort_by(|a, b| a.triple_cmp(b));
        let mut merged: Vec<BuildingBlock<S>> = Vec::with_capacity(sorted.len());
        for t in sorted {
            match merged.last_mut() {
                Some(last) if last.same_triple(&t) => {
                    last.weight = last.weight.clone() + t.weight;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.weight.is_zero());
        OrderingSpec {
            terms: merged,
            name: self.name.clone(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> OrderingSpec<T> {
        OrderingSpec {
            terms: self.terms.iter().map(|t| t.map(&f)).collect(),
            name: self.name.clone(),
        }
    }

    /// Float copy, for discretization.
    pub fn to_f64(&self) -> OrderingSpec<f64> {
        self.map(|v| v.to_f64())
    }
}

impl<S: Scalar> fmt::Display for OrderingSpec<S> {
    /// Same layout as the canonical text form, with exponents printed via
    /// the scalar's own `Display`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render(self))
    }
}
