//! Radius-indexed scalar curves with per-sample exactness tags.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dist::Dist;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Expansion,
    Properness,
    Ql,
    App,
    Qproper,
    Closeness,
    Uniformization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    LowerBound,
    UpperBound,
}

impl Exactness {
    pub fn as_str(self) -> &'static str {
        match self {
            Exactness::Exact => "exact",
            Exactness::LowerBound => "lower_bound",
            Exactness::UpperBound => "upper_bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub radius: Dist,
    pub value: Dist,
    pub exactness: Exactness,
    /// Opposite end of the bracket when the value is not exact.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Dist>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub kind: ProfileKind,
    pub samples: Vec<ProfileSample>,
}

impl Profile {
    pub fn new(kind: ProfileKind) -> Self {
        Profile {
            kind,
            samples: Vec::new(),
        }
    }

    pub fn push_exact(&mut self, radius: Dist, value: Dist) {
        self.samples.push(ProfileSample {
            radius,
            value,
            exactness: Exactness::Exact,
            bound: None,
        });
    }

    pub fn push(&mut self, sample: ProfileSample) {
        self.samples.push(sample);
    }

    pub fn values(&self) -> Vec<Dist> {
        self.samples.iter().map(|s| s.value).collect()
    }

    pub fn value_at(&self, radius: Dist) -> Option<Dist> {
        self.samples
            .iter()
            .find(|s| s.radius == radius)
            .map(|s| s.value)
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|s| s.value.is_finite())
    }

    /// Whether the values move in the direction the kind dictates as the
    /// radius grows. Only exact samples are compared.
    pub fn is_monotone(&self) -> bool {
        let mut exact: Vec<&ProfileSample> = self
            .samples
            .iter()
            .filter(|s| s.exactness == Exactness::Exact)
            .collect();
        exact.sort_by_key(|s| s.radius);
        let pairs = exact.windows(2);
        match self.kind {
            ProfileKind::Expansion | ProfileKind::Properness => {
                pairs.into_iter().all(|w| w[0].value <= w[1].value)
            }
            ProfileKind::Ql | ProfileKind::App => {
                pairs.into_iter().all(|w| w[0].value >= w[1].value)
            }
            _ => true,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,value,exactness,bound\n");
        for s in &self.samples {
            let bound = s.bound.map(|b| b.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{}",
                s.radius,
                s.value,
                s.exactness.as_str(),
                bound
            );
        }
        out
    }
}
