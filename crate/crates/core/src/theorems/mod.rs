//! Machine-checkable catalogue of comparison results for second-order statistics.
//!
//! Each [`TheoremSpec`] bundles hypothesis clauses (parameter constraints, chain
//! requirements, majorization relations, baseline shape conditions, generator conditions)
//! and a conclusion. [`verify`] evaluates every clause and the conclusion on a grid and
//! reports whether the pair is consistent: hypotheses passing while the conclusion fails
//! is the one outcome that is never expected.

mod bounds;
mod hypotheses;
mod lemma;
pub mod sweep;

use serde::Serialize;

pub use bounds::{eval_bound, pareto_hazard_lower, pareto_hazard_lower_as_printed, BoundKind, BoundReport};
pub use hypotheses::{check_hypotheses, verify, ClauseResult, TheoremReport};
pub use lemma::{lemma_claims, omega, omega_kernel, LemmaClaims};

use crate::baseline::ShapeCondition;
use crate::error::{Error, Result};
use crate::majorize::MajorKind;
use crate::stochorder::{Direction, OrderRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dependence {
    Independent,
    CommonCopula,
    TwoCopulas,
}

/// Parameter constraints between the two batches (`A` has `λ, θ, α`; `B` has `μ, δ, β`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamConstraint {
    /// `θ = δ` componentwise.
    ScaleVectorsEqual,
    /// All scales share one value.
    ScalesCommonScalar,
    /// `λ = μ` componentwise.
    LocationVectorsEqual,
    /// All locations share one value.
    LocationsCommonScalar,
    /// `α = β = α_1 1` with `α_1 <= 1`.
    ShapesCommonAtMostOne,
    /// `α = β = 1`.
    ShapesUnit,
    /// `μ` is a constant vector.
    BLocationsConstant,
    /// `δ` is a constant vector.
    BScalesConstant,
    /// `λ` is constant and equal to `max_i (1 + μ_i) / 2`.
    ALocationHalfShiftMaxOfB,
    /// `max μ <= 1`.
    BLocationsAtMostOne,
    /// `n μ <= sum λ_i`.
    NBLocationAtMostSumA,
    /// `n / δ >= sum 1 / θ_i`.
    NOverBScaleAtLeastSumRecipA,
    /// `n δ <= sum θ_i`.
    NBScaleAtMostSumA,
    /// `μ = sum λ_i / n`.
    BLocationIsMeanOfA,
    /// `1 / δ = sum 1 / (n θ_i)`.
    BRecipScaleIsMeanOfA,
}

impl ParamConstraint {
    pub fn describe(self) -> &'static str {
        match self {
            ParamConstraint::ScaleVectorsEqual => "θ = δ",
            ParamConstraint::ScalesCommonScalar => "θ = δ = common scalar",
            ParamConstraint::LocationVectorsEqual => "λ = μ",
            ParamConstraint::LocationsCommonScalar => "λ = μ = common scalar",
            ParamConstraint::ShapesCommonAtMostOne => "α = β = α·1, α ≤ 1",
            ParamConstraint::ShapesUnit => "α = β = 1",
            ParamConstraint::BLocationsConstant => "μ constant",
            ParamConstraint::BScalesConstant => "δ constant",
            ParamConstraint::ALocationHalfShiftMaxOfB => "λ = max_i (1 + μ_i)/2",
            ParamConstraint::BLocationsAtMostOne => "max μ ≤ 1",
            ParamConstraint::NBLocationAtMostSumA => "n μ ≤ Σ λ_i",
            ParamConstraint::NOverBScaleAtLeastSumRecipA => "n/δ ≥ Σ 1/θ_i",
            ParamConstraint::NBScaleAtMostSumA => "n δ ≤ Σ θ_i",
            ParamConstraint::BLocationIsMeanOfA => "μ = Σ λ_i / n",
            ParamConstraint::BRecipScaleIsMeanOfA => "1/δ = Σ 1/(n θ_i)",
        }
    }
}

/// Parameter vectors named in chain requirements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorRef {
    LocA,
    LocB,
    ScaleA,
    ScaleB,
}

impl VectorRef {
    pub fn symbol(self) -> &'static str {
        match self {
            VectorRef::LocA => "λ",
            VectorRef::LocB => "μ",
            VectorRef::ScaleA => "θ",
            VectorRef::ScaleB => "δ",
        }
    }
}

/// Vectors compared by majorization relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Derived {
    LocA,
    LocB,
    RecipScaleA,
    RecipScaleB,
}

impl Derived {
    pub fn symbol(self) -> &'static str {
        match self {
            Derived::LocA => "λ",
            Derived::LocB => "μ",
            Derived::RecipScaleA => "1/θ",
            Derived::RecipScaleB => "1/δ",
        }
    }
}

/// `lesser ⪯ greater` under `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MajorRequirement {
    pub kind: MajorKind,
    pub greater: Derived,
    pub lesser: Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorCondition {
    /// The common generator is log-concave.
    LogConcavePsi,
    /// At least one of the two generators is log-concave.
    LogConcaveEither,
    /// `φ_B ∘ ψ_A` is sub-additive.
    SubAdditiveComposition,
    /// `φ_B ∘ ψ_A` is super-additive.
    SuperAdditiveComposition,
}

impl GeneratorCondition {
    pub fn describe(self) -> &'static str {
        match self {
            GeneratorCondition::LogConcavePsi => "ψ log-concave",
            GeneratorCondition::LogConcaveEither => "ψ_A or ψ_B log-concave",
            GeneratorCondition::SubAdditiveComposition => "φ_B∘ψ_A sub-additive",
            GeneratorCondition::SuperAdditiveComposition => "φ_B∘ψ_A super-additive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Conclusion {
    pub relation: OrderRelation,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremSpec {
    pub id: &'static str,
    pub dependence: Dependence,
    pub params: &'static [ParamConstraint],
    /// Vectors that must be jointly ascending or jointly descending.
    pub chain: &'static [VectorRef],
    pub relations: &'static [MajorRequirement],
    pub shapes: &'static [ShapeCondition],
    pub generator: &'static [GeneratorCondition],
    pub conclusion: Conclusion,
}

impl TheoremSpec {
    /// One-line summary of hypotheses and conclusion.
    pub fn digest(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        parts.push(
            match self.dependence {
                Dependence::Independent => "independent",
                Dependence::CommonCopula => "common copula",
                Dependence::TwoCopulas => "two copulas",
            }
            .to_string(),
        );
        parts.extend(self.params.iter().map(|p| p.describe().to_string()));
        if !self.chain.is_empty() {
            let names: Vec<&str> = self.chain.iter().map(|v| v.symbol()).collect();
            parts.push(format!("{} jointly monotone", names.join(",")));
        }
        for r in self.relations {
            parts.push(format!("{} {} {}", r.lesser.symbol(), r.kind.symbol(), r.greater.symbol()));
        }
        parts.extend(self.shapes.iter().map(|s| s.describe().to_string()));
        parts.extend(self.generator.iter().map(|g| g.describe().to_string()));
        let concl = match self.conclusion.direction {
            Direction::AGeB => format!("X ≥{} Y", self.conclusion.relation.as_str()),
            Direction::BGeA => format!("X ≤{} Y", self.conclusion.relation.as_str()),
            Direction::Equal => format!("X ={} Y", self.conclusion.relation.as_str()),
        };
        format!("{} ⇒ {}", parts.join("; "), concl)
    }
}

use Derived as D;
use GeneratorCondition as G;
use MajorKind as K;
use ParamConstraint as P;
use ShapeCondition as S;
use VectorRef as V;

const fn rel(kind: MajorKind, greater: Derived, lesser: Derived) -> MajorRequirement {
    MajorRequirement { kind, greater, lesser }
}

const ST_A: Conclusion = Conclusion { relation: OrderRelation::St, direction: Direction::AGeB };
const ST_B: Conclusion = Conclusion { relation: OrderRelation::St, direction: Direction::BGeA };
const HR_A: Conclusion = Conclusion { relation: OrderRelation::Hr, direction: Direction::AGeB };
const HR_B: Conclusion = Conclusion { relation: OrderRelation::Hr, direction: Direction::BGeA };

const IND: Dependence = Dependence::Independent;
const COM: Dependence = Dependence::CommonCopula;
const TWO: Dependence = Dependence::TwoCopulas;

const LOC_WSUB: MajorRequirement = rel(K::WeakSub, D::LocA, D::LocB);
const LOC_WSUB_REV: MajorRequirement = rel(K::WeakSub, D::LocB, D::LocA);
const REC_WSUP: MajorRequirement = rel(K::WeakSuper, D::RecipScaleA, D::RecipScaleB);
const REC_WSUP_REV: MajorRequirement = rel(K::WeakSuper, D::RecipScaleB, D::RecipScaleA);
const REC_RM: MajorRequirement = rel(K::Reciprocal, D::RecipScaleA, D::RecipScaleB);

const HR_CONVEX: &[ShapeCondition] = &[S::HazardDecreasingConvex, S::GIncreasingConvex, S::GSecondDecreasing];
const HR_CONCAVE: &[ShapeCondition] = &[S::WHazardIncreasingConcave, S::GIncreasingConcave, S::WGPrimeConvex];

static REGISTRY: [TheoremSpec; 27] = [
    TheoremSpec {
        id: "T3.1",
        dependence: IND,
        params: &[P::ScaleVectorsEqual, P::ShapesCommonAtMostOne],
        chain: &[V::LocA, V::ScaleA, V::LocB],
        relations: &[LOC_WSUB],
        shapes: &[S::WHazardDecreasing],
        generator: &[],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.1*",
        dependence: IND,
        params: &[P::ScalesCommonScalar, P::ShapesCommonAtMostOne],
        chain: &[V::LocA, V::LocB],
        relations: &[LOC_WSUB],
        shapes: &[S::HazardDecreasing],
        generator: &[],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.2",
        dependence: IND,
        params: &[P::LocationVectorsEqual, P::ShapesCommonAtMostOne],
        chain: &[V::LocA, V::ScaleA, V::ScaleB],
        relations: &[REC_WSUP],
        shapes: &[S::WHazardDecreasing],
        generator: &[],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.2*",
        dependence: IND,
        params: &[P::LocationsCommonScalar, P::ShapesCommonAtMostOne],
        chain: &[V::ScaleA, V::ScaleB],
        relations: &[REC_WSUP],
        shapes: &[S::HazardDecreasing],
        generator: &[],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.3",
        dependence: IND,
        params: &[P::LocationVectorsEqual, P::ShapesCommonAtMostOne],
        chain: &[V::LocA, V::ScaleA, V::ScaleB],
        relations: &[REC_RM],
        shapes: &[S::W2HazardDecreasing],
        generator: &[],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.4i",
        dependence: IND,
        params: &[P::ShapesCommonAtMostOne],
        chain: &[V::LocA, V::LocB, V::ScaleA, V::ScaleB],
        relations: &[LOC_WSUB, REC_WSUP],
        shapes: &[S::WHazardDecreasing],
        generator: &[],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.4ii",
        dependence: IND,
        params: &[P::ShapesCommonAtMostOne],
        chain: &[V::LocA, V::LocB, V::ScaleA, V::ScaleB],
        relations: &[LOC_WSUB, REC_RM],
        shapes: &[S::WHazardDecreasing, S::W2HazardDecreasing],
        generator: &[],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.5",
        dependence: IND,
        params: &[P::ScalesCommonScalar, P::ShapesUnit],
        chain: &[V::LocA, V::LocB],
        relations: &[rel(K::Majorization, D::LocA, D::LocB)],
        shapes: HR_CONVEX,
        generator: &[],
        conclusion: HR_B,
    },
    TheoremSpec {
        id: "T3.6",
        dependence: IND,
        params: &[P::ScaleVectorsEqual, P::ShapesUnit],
        chain: &[V::LocA, V::ScaleA, V::LocB],
        relations: &[rel(K::Majorization, D::LocA, D::LocB)],
        shapes: &[
            S::HazardDecreasing,
            S::W2HazardPrimeIncreasing,
            S::GIncreasingConvex,
            S::W2GSecondDecreasing,
        ],
        generator: &[],
        conclusion: HR_B,
    },
    TheoremSpec {
        id: "T3.7",
        dependence: IND,
        params: &[P::LocationsCommonScalar, P::ShapesUnit],
        chain: &[V::ScaleA, V::ScaleB],
        relations: &[rel(K::Majorization, D::RecipScaleA, D::RecipScaleB)],
        shapes: HR_CONCAVE,
        generator: &[],
        conclusion: HR_A,
    },
    TheoremSpec {
        id: "T3.8",
        dependence: COM,
        params: &[P::ShapesCommonAtMostOne, P::ScaleVectorsEqual],
        chain: &[V::LocA, V::ScaleA, V::LocB],
        relations: &[LOC_WSUB],
        shapes: &[S::WHazardDecreasing],
        generator: &[G::LogConcavePsi],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.8*",
        dependence: COM,
        params: &[P::ShapesCommonAtMostOne, P::ScalesCommonScalar],
        chain: &[V::LocA, V::LocB],
        relations: &[LOC_WSUB],
        shapes: &[S::HazardDecreasing],
        generator: &[G::LogConcavePsi],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.9",
        dependence: COM,
        params: &[P::LocationVectorsEqual, P::ShapesCommonAtMostOne],
        chain: &[V::LocA, V::ScaleA, V::ScaleB],
        relations: &[REC_RM],
        shapes: &[S::W2HazardDecreasing],
        generator: &[G::LogConcavePsi],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.10",
        dependence: COM,
        params: &[P::LocationVectorsEqual, P::ShapesCommonAtMostOne],
        chain: &[V::LocA, V::ScaleA, V::ScaleB],
        relations: &[REC_WSUP],
        shapes: &[S::WHazardDecreasing],
        generator: &[G::LogConcavePsi],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.14",
        dependence: COM,
        params: &[P::LocationsCommonScalar, P::ShapesCommonAtMostOne],
        chain: &[V::ScaleA, V::ScaleB],
        relations: &[REC_WSUP],
        shapes: &[S::HazardDecreasing],
        generator: &[G::LogConcavePsi],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.15i",
        dependence: TWO,
        params: &[P::ShapesCommonAtMostOne, P::ScaleVectorsEqual],
        chain: &[V::LocA, V::ScaleA, V::LocB],
        relations: &[LOC_WSUB],
        shapes: &[S::WHazardDecreasing],
        generator: &[G::LogConcaveEither, G::SubAdditiveComposition],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.15ii",
        dependence: TWO,
        params: &[P::ShapesCommonAtMostOne, P::ScaleVectorsEqual],
        chain: &[V::LocA, V::ScaleA, V::LocB],
        relations: &[LOC_WSUB_REV],
        shapes: &[S::WHazardDecreasing],
        generator: &[G::LogConcaveEither, G::SuperAdditiveComposition],
        conclusion: ST_B,
    },
    TheoremSpec {
        id: "T3.16i",
        dependence: TWO,
        params: &[P::ShapesCommonAtMostOne, P::LocationVectorsEqual],
        chain: &[V::LocA, V::ScaleA, V::ScaleB],
        relations: &[REC_WSUP],
        shapes: &[S::WHazardDecreasing],
        generator: &[G::LogConcaveEither, G::SubAdditiveComposition],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "T3.16ii",
        dependence: TWO,
        params: &[P::ShapesCommonAtMostOne, P::LocationVectorsEqual],
        chain: &[V::LocA, V::ScaleA, V::ScaleB],
        relations: &[REC_WSUP_REV],
        shapes: &[S::WHazardDecreasing],
        generator: &[G::LogConcaveEither, G::SuperAdditiveComposition],
        conclusion: ST_B,
    },
    TheoremSpec {
        id: "T3.17",
        dependence: TWO,
        params: &[P::ShapesCommonAtMostOne, P::ScalesCommonScalar],
        chain: &[V::LocA, V::LocB],
        relations: &[LOC_WSUB_REV],
        shapes: &[S::HazardDecreasing],
        generator: &[G::LogConcaveEither, G::SuperAdditiveComposition],
        conclusion: ST_B,
    },
    TheoremSpec {
        id: "T3.18",
        dependence: TWO,
        params: &[P::ShapesCommonAtMostOne, P::LocationsCommonScalar],
        chain: &[V::ScaleA, V::ScaleB],
        relations: &[REC_WSUP_REV],
        shapes: &[S::HazardDecreasing],
        generator: &[G::LogConcaveEither, G::SuperAdditiveComposition],
        conclusion: ST_B,
    },
    TheoremSpec {
        id: "C3.1",
        dependence: IND,
        params: &[
            P::ScalesCommonScalar,
            P::ShapesCommonAtMostOne,
            P::ALocationHalfShiftMaxOfB,
            P::BLocationsAtMostOne,
        ],
        chain: &[V::LocB],
        relations: &[LOC_WSUB],
        shapes: &[S::WHazardDecreasing],
        generator: &[],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "C3.2",
        dependence: IND,
        params: &[
            P::ScaleVectorsEqual,
            P::ShapesCommonAtMostOne,
            P::BLocationsConstant,
            P::NBLocationAtMostSumA,
        ],
        chain: &[V::LocA, V::ScaleA, V::LocB],
        relations: &[],
        shapes: &[S::WHazardDecreasing],
        generator: &[],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "C3.3",
        dependence: IND,
        params: &[
            P::LocationsCommonScalar,
            P::ShapesCommonAtMostOne,
            P::BScalesConstant,
            P::NOverBScaleAtLeastSumRecipA,
        ],
        chain: &[V::ScaleA],
        relations: &[],
        shapes: &[S::WHazardDecreasing],
        generator: &[],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "C3.4",
        dependence: IND,
        params: &[
            P::LocationVectorsEqual,
            P::ShapesCommonAtMostOne,
            P::BScalesConstant,
            P::NBScaleAtMostSumA,
        ],
        chain: &[V::LocA, V::ScaleA],
        relations: &[],
        shapes: &[S::W2HazardDecreasing],
        generator: &[],
        conclusion: ST_A,
    },
    TheoremSpec {
        id: "C3.5",
        dependence: IND,
        params: &[P::ScalesCommonScalar, P::ShapesUnit, P::BLocationsConstant, P::BLocationIsMeanOfA],
        chain: &[V::LocA],
        relations: &[],
        shapes: HR_CONVEX,
        generator: &[],
        conclusion: HR_B,
    },
    TheoremSpec {
        id: "C3.6",
        dependence: IND,
        params: &[P::LocationsCommonScalar, P::ShapesUnit, P::BScalesConstant, P::BRecipScaleIsMeanOfA],
        chain: &[V::ScaleA],
        relations: &[],
        shapes: HR_CONCAVE,
        generator: &[],
        conclusion: HR_A,
    },
];

pub fn list_theorems() -> &'static [TheoremSpec] {
    &REGISTRY
}

pub fn theorem_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|t| t.id).collect()
}

pub fn lookup(id: &str) -> Result<&'static TheoremSpec> {
    REGISTRY.iter().find(|t| t.id == id).ok_or_else(|| Error::UnknownTheorem {
        id: id.to_string(),
        valid: theorem_ids().join(", "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn registry_has_unique_ids() {
        let ids = theorem_ids();
        assert_eq!(ids.len(), 27);
        let set: HashSet<_> = ids.iter().collect();
        assert_eq!(set.len(), 27);
        for id in ["T3.1*", "T3.4ii", "T3.16ii", "C3.6"] {
            assert!(set.contains(&id));
        }
    }

    #[test]
    fn lookup_t314() {
        let t = lookup("T3.14").unwrap();
        assert_eq!(t.dependence, Dependence::CommonCopula);
        assert_eq!(t.relations[0].kind, MajorKind::WeakSuper);
        assert_eq!(t.relations[0].greater, Derived::RecipScaleA);
        assert_eq!(t.conclusion, ST_A);
        assert!(t.digest().contains("1/δ ⪯^w 1/θ"));
    }

    #[test]
    fn unknown_id_lists_valid_ids() {
        match lookup("T9.9") {
            Err(Error::UnknownTheorem { valid, .. }) => assert!(valid.contains("C3.5")),
            other => panic!("{other:?}"),
        }
    }
}
