//! JSON scenario files: two batch descriptors, an optional grid and an optional theorem id.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::baseline::BaselineFamily;
use crate::copula::Generator;
use crate::error::{Error, Result};
use crate::numeric::Grid;
use crate::orderstat::ElsBatch;
use crate::stochorder::{default_grid, Direction, OrderRelation};

pub const SCHEMA_VERSION: u32 = 1;

/// A scalar broadcast to every component, or one value per component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamVec {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl ParamVec {
    fn len(&self) -> Option<usize> {
        match self {
            ParamVec::Scalar(_) => None,
            ParamVec::Vector(v) => Some(v.len()),
        }
    }

    fn expand(&self, n: usize) -> Vec<f64> {
        match self {
            ParamVec::Scalar(s) => vec![*s; n],
            ParamVec::Vector(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// `(w, F)` nodes for the tabulated family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// `(x, psi)` nodes for the tabulated family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSpec {
    pub baseline: BaselineSpec,
    pub location: ParamVec,
    pub scale: ParamVec,
    pub shape: ParamVec,
    /// Component count when every parameter is a scalar.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub v: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    pub batch_a: BatchSpec,
    pub batch_b: BatchSpec,
}

fn param(params: &BTreeMap<String, f64>, family: &str, key: &str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| Error::Scenario(format!("family '{family}' needs parameter '{key}'")))
}

impl BaselineSpec {
    pub fn build(&self) -> Result<BaselineFamily> {
        let p = |k| param(&self.params, &self.family, k);
        match self.family.as_str() {
            "pareto" => BaselineFamily::pareto(p("a")?),
            "burr" => BaselineFamily::burr(p("c")?, p("k")?),
            "pgw" => BaselineFamily::power_gen_weibull(p("c")?, p("k")?),
            "expweibull" => BaselineFamily::exp_weibull(p("d")?, p("c")?),
            "truncweibull" => BaselineFamily::trunc_weibull(p("a")?),
            "ratio" => Ok(BaselineFamily::ratio_pareto()),
            "tabulated" => match &self.points {
                Some(pts) => BaselineFamily::tabulated(pts.clone()),
                None => Err(Error::Scenario("tabulated baseline needs 'points'".into())),
            },
            other => Err(Error::UnknownTag(other.to_string())),
        }
    }
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<Generator> {
        let p = |k| param(&self.params, &self.family, k);
        match self.family.as_str() {
            "independence" => Ok(Generator::Independence),
            "gumbel_frailty" => Generator::gumbel_frailty(p("a")?),
            "gumbel_hougaard" => Generator::gumbel_hougaard(p("a")?),
            "clayton" => Generator::clayton(p("c")?),
            "tabulated" => match &self.points {
                Some(pts) => Generator::tabulated(pts.clone()),
                None => Err(Error::Scenario("tabulated generator needs 'points'".into())),
            },
            other => Err(Error::UnknownTag(other.to_string())),
        }
    }
}

impl BatchSpec {
    pub fn build(&self) -> Result<ElsBatch> {
        let lens: Vec<usize> = [&self.location, &self.scale, &self.shape].iter().filter_map(|v| v.len()).collect();
        let n = match (lens.first(), self.n) {
            (Some(&n), _) => n,
            (None, Some(n)) => n,
            (None, None) => return Err(Error::Scenario("all parameters are scalars and 'n' is missing".into())),
        };
        for &l in lens.iter().chain(self.n.as_ref()) {
            if l != n {
                return Err(Error::LengthMismatch { left: n, right: l });
            }
        }
        let generator = self.generator.as_ref().map(GeneratorSpec::build).transpose()?;
        ElsBatch::new(
            self.baseline.build()?,
            self.location.expand(n),
            self.scale.expand(n),
            self.shape.expand(n),
            generator,
        )
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        if s.v != SCHEMA_VERSION {
            return Err(Error::Scenario(format!("unsupported schema version {}", s.v)));
        }
        if let Some(g) = &s.grid {
            g.validate()?;
        }
        Ok(s)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn batches(&self) -> Result<(ElsBatch, ElsBatch)> {
        let a = self.batch_a.build()?;
        let b = self.batch_b.build()?;
        if a.n() != b.n() {
            return Err(Error::LengthMismatch { left: a.n(), right: b.n() });
        }
        Ok((a, b))
    }

    /// Points of the explicit grid, or of `override_grid`, or the default grid for `relation`.
    pub fn grid_points(&self, override_grid: Option<&Grid>, relation: OrderRelation) -> Result<Vec<f64>> {
        match override_grid.or(self.grid.as_ref()) {
            Some(g) => {
                g.validate()?;
                Ok(g.points())
            }
            None => {
                let (a, b) = self.batches()?;
                default_grid(&a, &b, relation)
            }
        }
    }
}

/// Shipped scenarios by name.
pub const FIXTURES: [(&str, &str); 8] = [
    ("example_3_1", include_str!("../fixtures/example_3_1.json")),
    ("example_3_2", include_str!("../fixtures/example_3_2.json")),
    ("example_3_3", include_str!("../fixtures/example_3_3.json")),
    ("example_3_4", include_str!("../fixtures/example_3_4.json")),
    ("example_3_5", include_str!("../fixtures/example_3_5.json")),
    ("example_3_6", include_str!("../fixtures/example_3_6.json")),
    ("cex_3_1", include_str!("../fixtures/cex_3_1.json")),
    ("cex_3_2", include_str!("../fixtures/cex_3_2.json")),
];

pub fn fixture(name: &str) -> Result<Scenario> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownTag(name.to_string()))
        .and_then(|(_, text)| Scenario::from_json(text))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureOutcome {
    /// Usual stochastic dominance in the given direction.
    Dominance(Direction),
    /// The survival curves cross.
    Crossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure {
    pub id: &'static str,
    pub fixture: &'static str,
    pub grid: Grid,
    pub expected: FigureOutcome,
}

/// Survival-curve figures with their plotted ranges: from just above the largest location to 60.
pub const FIGURES: [Figure; 4] = [
    Figure {
        id: "1a",
        fixture: "example_3_1",
        grid: Grid { lo: 9.001, hi: 60.0, n: 512, spacing: crate::numeric::Spacing::Linear },
        expected: FigureOutcome::Dominance(Direction::AGeB),
    },
    Figure {
        id: "1b",
        fixture: "example_3_5",
        grid: Grid { lo: 5.001, hi: 60.0, n: 512, spacing: crate::numeric::Spacing::Linear },
        expected: FigureOutcome::Dominance(Direction::AGeB),
    },
    Figure {
        id: "2a",
        fixture: "cex_3_1",
        grid: Grid { lo: 8.001, hi: 60.0, n: 512, spacing: crate::numeric::Spacing::Linear },
        expected: FigureOutcome::Crossing,
    },
    Figure {
        id: "2b",
        fixture: "cex_3_2",
        grid: Grid { lo: 5.001, hi: 60.0, n: 512, spacing: crate::numeric::Spacing::Linear },
        expected: FigureOutcome::Crossing,
    },
];

pub fn figure(id: &str) -> Result<&'static Figure> {
    FIGURES.iter().find(|f| f.id == id).ok_or_else(|| Error::UnknownTag(id.to_string()))
}

/// First index `i` where `d[i-1]` and `d[i]` have strictly opposite signs beyond `slack`,
/// ignoring points inside the slack band.
pub fn first_sign_change(d: &[f64], slack: f64) -> Option<usize> {
    let mut last: Option<f64> = None;
    for (i, &v) in d.iter().enumerate() {
        if v.abs() <= slack {
            continue;
        }
        let s = v.signum();
        if let Some(p) = last {
            if p != s {
                return Some(i);
            }
        }
        last = Some(s);
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineInfo {
    pub tag: &'static str,
    pub params: &'static [&'static str],
    pub formula: &'static str,
    pub support: &'static str,
}

pub const BASELINES: [BaselineInfo; 7] = [
    BaselineInfo { tag: "pareto", params: &["a"], formula: "1 - w^-a", support: "w >= 1" },
    BaselineInfo { tag: "burr", params: &["c", "k"], formula: "1 - (1 + w^c)^-k", support: "w >= 0" },
    BaselineInfo { tag: "pgw", params: &["c", "k"], formula: "1 - exp(1 - (1 + w^c)^(1/k))", support: "w >= 0" },
    BaselineInfo { tag: "expweibull", params: &["d", "c"], formula: "(1 - exp(-w^d))^c", support: "w >= 0" },
    BaselineInfo { tag: "truncweibull", params: &["a"], formula: "1 - exp(1 - w^a)", support: "w >= 1" },
    BaselineInfo { tag: "ratio", params: &[], formula: "(w - 1) / (w + 1)", support: "w >= 1" },
    BaselineInfo { tag: "tabulated", params: &[], formula: "monotone interpolation of (w, F) points", support: "first node" },
];

pub const GENERATORS: [BaselineInfo; 4] = [
    BaselineInfo { tag: "independence", params: &[], formula: "exp(-x)", support: "x >= 0" },
    BaselineInfo { tag: "gumbel_frailty", params: &["a"], formula: "exp((1 - e^x) / a), 0 < a <= 1", support: "x >= 0" },
    BaselineInfo { tag: "gumbel_hougaard", params: &["a"], formula: "exp(-x^(1/a)), a >= 1", support: "x >= 0" },
    BaselineInfo { tag: "clayton", params: &["c"], formula: "(1 + c x)^(-1/c), c > 0", support: "x >= 0" },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_parse() {
        for (name, _) in FIXTURES {
            let s = fixture(name).unwrap();
            assert_eq!(s.name, name);
            let (a, b) = s.batches().unwrap();
            assert_eq!(a.n(), 3);
            assert_eq!(b.n(), 3);
        }
    }

    #[test]
    fn scalars_broadcast() {
        let s = fixture("example_3_4").unwrap();
        let (a, _) = s.batches().unwrap();
        assert_eq!(a.scale(), &[5.0, 5.0, 5.0]);
        assert!(a.generator().is_some());
    }

    #[test]
    fn rejects_bad_input() {
        let base = fixture("example_3_1").unwrap();
        let mut s = base.clone();
        s.batch_a.baseline.family = "weibull".into();
        assert!(matches!(s.batches(), Err(Error::UnknownTag(_))));
        let mut s = base.clone();
        s.batch_a.scale = ParamVec::Vector(vec![1.0, 2.0]);
        assert!(matches!(s.batches(), Err(Error::LengthMismatch { .. })));
        let mut s = base.clone();
        s.batch_a.baseline.params.clear();
        assert!(matches!(s.batches(), Err(Error::Scenario(_))));
        let mut text = base.to_json().unwrap();
        text = text.replacen("\"v\": 1", "\"v\": 2", 1);
        assert!(Scenario::from_json(&text).is_err());
        assert!(Scenario::from_json("{").is_err());
    }

    #[test]
    fn all_scalar_needs_n() {
        let mut s = fixture("example_3_4").unwrap();
        s.batch_a.location = ParamVec::Scalar(1.0);
        assert!(s.batch_a.build().is_err());
        s.batch_a.n = Some(3);
        assert_eq!(s.batch_a.build().unwrap().n(), 3);
    }

    #[test]
    fn json_roundtrip() {
        let s = fixture("cex_3_2").unwrap();
        assert_eq!(Scenario::from_json(&s.to_json().unwrap()).unwrap(), s);
    }

    #[test]
    fn sign_change() {
        assert_eq!(first_sign_change(&[1.0, 0.5, 0.0, -0.1], 1e-9), Some(3));
        assert_eq!(first_sign_change(&[1.0, 1e-12, -1e-12, 2.0], 1e-9), None);
        assert_eq!(first_sign_change(&[], 0.0), None);
    }
}
