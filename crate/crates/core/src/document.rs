//! TOML documents describing a parabolic ruled surface.
//!
//! ```toml
//! genus = 0
//! model = "trivial-p1"
//! points = ["1:0", "0:1"]       # base coordinates, or free labels
//! weights = ["1/2", "1/2"]
//! incidence = ["1:0", "0:1"]    # fiber coordinates, or section ids
//! extra_points = ["1:1"]        # optional
//!
//! [[sections]]                  # optional; required for model = "sections"
//! id = "S1"
//! self_intersection = 0
//! contains = ["P1"]             # optional, completed from `incidence`
//! disjoint_from = ["S2"]
//! ```

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parabolic::{
    parse_fraction, BundleModel, Incidence, MarkedPoint, ParabolicSurface, ProjPoint, SectionData,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDocument {
    pub genus: u32,
    pub model: String,
    #[serde(default)]
    pub points: Vec<String>,
    #[serde(default)]
    pub weights: Vec<String>,
    #[serde(default)]
    pub incidence: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_points: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<SectionDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionDocument {
    pub id: String,
    pub self_intersection: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contains: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub disjoint_from: Vec<String>,
}

/// A surface together with the optional extra blow-up points.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceInput {
    pub surface: ParabolicSurface,
    pub extra_points: Vec<ProjPoint>,
}

impl SurfaceDocument {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("documents always serialize")
    }

    pub fn build(&self) -> Result<SurfaceInput> {
        let model = match self.model.as_str() {
            "trivial-p1" => BundleModel::TrivialP1,
            "sections" => BundleModel::Sections,
            other => {
                return Err(Error::Parse(format!(
                    "model must be \"trivial-p1\" or \"sections\", got {other:?}"
                )))
            }
        };
        let n = self.points.len();
        for (key, len) in [
            ("weights", self.weights.len()),
            ("incidence", self.incidence.len()),
        ] {
            if len != n {
                return Err(Error::Parse(format!(
                    "{key} has {len} entries but points has {n}"
                )));
            }
        }
        let mut points = Vec::with_capacity(n);
        for (j, label) in self.points.iter().enumerate() {
            let weight = parse_fraction(&self.weights[j])
                .map_err(|e| Error::Parse(format!("weights[{j}]: {e}")))?;
            let incidence = match model {
                BundleModel::TrivialP1 => Incidence::Fiber(
                    self.incidence[j]
                        .parse()
                        .map_err(|e| Error::Parse(format!("incidence[{j}]: {e}")))?,
                ),
                BundleModel::Sections => Incidence::Section(self.incidence[j].trim().to_string()),
            };
            points.push(MarkedPoint {
                label: label.trim().to_string(),
                base: label.parse().ok(),
                weight,
                incidence,
            });
        }
        let mut sections = Vec::with_capacity(self.sections.len());
        for s in &self.sections {
            let mut contains = BTreeSet::new();
            for name in &s.contains {
                let idx = self
                    .points
                    .iter()
                    .position(|p| p.trim() == name.trim())
                    .ok_or_else(|| {
                        Error::Parse(format!(
                            "section {:?} contains unknown point {name:?}",
                            s.id
                        ))
                    })?;
                contains.insert(idx);
            }
            sections.push(SectionData {
                id: s.id.clone(),
                self_intersection: s.self_intersection,
                contains,
                disjoint_from: s.disjoint_from.iter().cloned().collect(),
            });
        }
        let surface = ParabolicSurface::new(self.genus, model, points, sections)?;
        let extra_points = self
            .extra_points
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.parse()
                    .map_err(|e| Error::Parse(format!("extra_points[{i}]: {e}")))
            })
            .collect::<Result<_>>()?;
        Ok(SurfaceInput {
            surface,
            extra_points,
        })
    }

    pub fn from_input(input: &SurfaceInput) -> Self {
        let s = &input.surface;
        let labels: Vec<String> = s.points().iter().map(|p| p.label.clone()).collect();
        SurfaceDocument {
            genus: s.genus(),
            model: match s.model() {
                BundleModel::TrivialP1 => "trivial-p1".into(),
                BundleModel::Sections => "sections".into(),
            },
            points: labels.clone(),
            weights: s.points().iter().map(|p| p.weight.to_string()).collect(),
            incidence: s
                .points()
                .iter()
                .map(|p| match &p.incidence {
                    Incidence::Fiber(w) => w.to_string(),
                    Incidence::Section(id) => id.clone(),
                })
                .collect(),
            extra_points: input.extra_points.iter().map(|p| p.to_string()).collect(),
            sections: s
                .sections()
                .iter()
                .map(|sec| SectionDocument {
                    id: sec.id.clone(),
                    self_intersection: sec.self_intersection,
                    contains: sec.contains.iter().map(|&j| labels[j].clone()).collect(),
                    disjoint_from: sec.disjoint_from.iter().cloned().collect(),
                })
                .collect(),
        }
    }
}

/// Parses a TOML surface document.
pub fn parse_surface(text: &str) -> Result<SurfaceInput> {
    SurfaceDocument::from_toml(text)?.build()
}

/// Writes a surface back out as TOML.
pub fn serialize_surface(input: &SurfaceInput) -> String {
    SurfaceDocument::from_input(input).to_toml()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Fraction;

    const COR_D: &str = r#"
genus = 0
model = "trivial-p1"
points = ["1:0", "0:1", "1:1", "-1:1"]
weights = ["1/2", "1/2", "1/3", "1/3"]
incidence = ["1:0", "0:1", "1:0", "0:1"]
"#;

    #[test]
    fn parses_trivial_bundle() {
        let input = parse_surface(COR_D).unwrap();
        assert_eq!(input.surface.points().len(), 4);
        assert_eq!(input.surface.points()[2].weight, Fraction::new(1, 3));
        assert!(input.extra_points.is_empty());
    }

    #[test]
    fn round_trip() {
        let input = parse_surface(COR_D).unwrap();
        let text = serialize_surface(&input);
        assert_eq!(parse_surface(&text).unwrap(), input);
    }

    #[test]
    fn sections_round_trip_with_completion() {
        let doc = r#"
genus = 1
model = "sections"
points = ["P1", "P2"]
weights = ["2/5", "4/10"]
incidence = ["S1", "S2"]
extra_points = ["0.5:1"]

[[sections]]
id = "S1"
self_intersection = 0
disjoint_from = ["S2"]

[[sections]]
id = "S2"
self_intersection = 0
"#;
        let input = parse_surface(doc).unwrap();
        let s2 = &input.surface.sections()[1];
        assert!(s2.contains.contains(&1) && s2.disjoint_from.contains("S1"));
        assert_eq!(input.surface.points()[1].weight, Fraction::new(2, 5));
        assert_eq!(input.extra_points[0], "1:2".parse().unwrap());
        let again = parse_surface(&serialize_surface(&input)).unwrap();
        assert_eq!(again, input);
    }

    #[test]
    fn diagnostics() {
        let err =
            parse_surface("genus = 0\nmodel = \"trivial-p1\"\npoints = [\"1:0\"\n").unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
        let err = parse_surface(
            "genus = 0\nmodel = \"cone\"\npoints = []\nweights = []\nincidence = []\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("model"));
        let err = parse_surface(
            "genus = 0\nmodel = \"trivial-p1\"\npoints = [\"1:0\"]\nweights = [\"3/2\"]\nincidence = [\"1:0\"]\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::WeightOutOfRange(_)));
        let err = parse_surface(
            "genus = 0\nmodel = \"trivial-p1\"\npoints = [\"1:0\"]\nweights = [\"1/2\", \"1/3\"]\nincidence = [\"1:0\"]\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("weights"));
    }
}
