//! Text formats for instances and problem descriptions (TOML).
//!
//! Generic instance file:
//!
//! ```toml
//! [meta]
//! n = 2
//! m = 3
//! constant = 0.0
//! description = "free text"
//! penalty = 10.0            # optional, used as default penalty weight
//!
//! [linear]
//! entries = [[0, 1, 2.5]]   # [variable, value, cost]
//!
//! [quadratic]
//! entries = [[0, 1, 2, 2, 4.0]]   # [i, j, v, w, cost]
//!
//! [labels]
//! values = ["a", "b", "c"]
//! variables = ["x", "y"]
//!
//! [constraints]
//! forbidden_pairs = [[0, 1, 2, 2]]   # s_i = v and s_j = w is infeasible
//! forbidden_values = [[1, 0]]        # s_i = v is infeasible
//! ```
//!
//! Problem files carry a top-level `problem = "gap" | "mkcs" | "ip"` key and
//! the tables of the respective generator; see [`GapFile`], [`MkcsFile`] and
//! [`IpFile`].

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{gap_instance, mkcs_instance, CopInstance, GapData, IpData, Passengers};
use super::ip::PairConstraint;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct InstanceDoc {
    meta: Meta,
    #[serde(default)]
    linear: LinearSection,
    #[serde(default)]
    quadratic: QuadraticSection,
    #[serde(default)]
    labels: Labels,
    #[serde(default)]
    constraints: ConstraintSection,
}

#[derive(Debug, Serialize, Deserialize)]
struct Meta {
    n: usize,
    m: usize,
    #[serde(default)]
    constant: f64,
    #[serde(default)]
    description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    penalty: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct LinearSection {
    #[serde(default)]
    entries: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct QuadraticSection {
    #[serde(default)]
    entries: Vec<(usize, usize, usize, usize, f64)>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Labels {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variables: Option<Vec<String>>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct ConstraintSection {
    #[serde(default)]
    forbidden_pairs: Vec<(usize, usize, usize, usize)>,
    #[serde(default)]
    forbidden_values: Vec<(usize, usize)>,
    #[serde(default)]
    unsatisfiable: bool,
}

fn toml_error(e: impl std::fmt::Display) -> Error {
    Error::Format(e.to_string())
}

/// Serializes an instance; only nonzero coefficients are written.
pub fn write_instance(inst: &CopInstance) -> String {
    let m = inst.m();
    let mut linear = Vec::new();
    for i in 0..inst.n() {
        for v in 0..m {
            let c = inst.linear(i, v);
            if c != 0.0 {
                linear.push((i, v, c));
            }
        }
    }
    let mut quadratic = Vec::new();
    for ((i, j), block) in inst.quadratic_blocks() {
        for v in 0..m {
            for w in 0..m {
                let c = block[v * m + w];
                if c != 0.0 {
                    quadratic.push((i, j, v, w, c));
                }
            }
        }
    }
    let mut forbidden_pairs = Vec::new();
    for ((i, j), bad) in inst.constraints().pairs() {
        forbidden_pairs.extend(bad.iter().map(|&(v, w)| (i, j, v, w)));
    }
    let mut forbidden_values = Vec::new();
    for (i, bad) in inst.constraints().unary() {
        forbidden_values.extend(bad.iter().map(|&v| (i, v)));
    }
    let doc = InstanceDoc {
        meta: Meta {
            n: inst.n(),
            m,
            constant: inst.constant(),
            description: inst.metadata().to_string(),
            penalty: inst.base_penalty,
        },
        linear: LinearSection { entries: linear },
        quadratic: QuadraticSection { entries: quadratic },
        labels: Labels {
            values: inst.value_labels().map(<[String]>::to_vec),
            variables: inst.variable_labels().map(<[String]>::to_vec),
        },
        constraints: ConstraintSection {
            forbidden_pairs,
            forbidden_values,
            unsatisfiable: inst.constraints().is_unsatisfiable(),
        },
    };
    toml::to_string(&doc).expect("instance documents always serialize")
}

pub fn parse_instance(text: &str) -> Result<CopInstance> {
    let doc: InstanceDoc = toml::from_str(text).map_err(toml_error)?;
    let mut inst = CopInstance::new(doc.meta.n, doc.meta.m)?;
    inst.add_constant(doc.meta.constant);
    for (i, v, c) in doc.linear.entries {
        inst.add_linear(i, v, c)?;
    }
    for (i, j, v, w, c) in doc.quadratic.entries {
        inst.add_quadratic(i, j, v, w, c)?;
    }
    for (i, j, v, w) in doc.constraints.forbidden_pairs {
        inst.forbid_pair(i, j, v, w)?;
    }
    for (i, v) in doc.constraints.forbidden_values {
        inst.forbid_value(i, v)?;
    }
    inst.constraints.unsatisfiable = doc.constraints.unsatisfiable;
    inst.base_penalty = doc.meta.penalty;
    if let Some(labels) = doc.labels.values {
        inst = inst.with_value_labels(labels)?;
    }
    if let Some(labels) = doc.labels.variables {
        inst = inst.with_variable_labels(labels)?;
    }
    Ok(inst.with_metadata(doc.meta.description))
}

/// Gate assignment tables. Give either `passengers` (arriving plus
/// departing, requires `walk_arr == walk_dep`) or `arriving` and `departing`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapFile {
    pub walk_arr: Vec<f64>,
    pub walk_dep: Vec<f64>,
    pub walk_trans: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passengers: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arriving: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub departing: Option<Vec<f64>>,
    /// `[flight_i, flight_j, passengers]`
    #[serde(default)]
    pub transfers: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub conflicts: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty: Option<f64>,
}

impl GapFile {
    pub fn from_data(data: &GapData) -> Self {
        let (passengers, arriving, departing) = match &data.passengers {
            Passengers::Combined(c) => (Some(c.clone()), None, None),
            Passengers::Split { arriving, departing } => {
                (None, Some(arriving.clone()), Some(departing.clone()))
            }
        };
        Self {
            walk_arr: data.walk_arr.clone(),
            walk_dep: data.walk_dep.clone(),
            walk_trans: data.walk_trans.clone(),
            passengers,
            arriving,
            departing,
            transfers: data.transfers.iter().map(|(&(i, j), &p)| (i, j, p)).collect(),
            conflicts: data.conflicts.iter().copied().collect(),
            penalty: None,
        }
    }

    pub fn to_data(&self) -> Result<GapData> {
        let passengers = match (&self.passengers, &self.arriving, &self.departing) {
            (Some(c), None, None) => Passengers::Combined(c.clone()),
            (None, Some(a), Some(d)) => Passengers::Split {
                arriving: a.clone(),
                departing: d.clone(),
            },
            _ => {
                return Err(Error::InvalidInstance(
                    "give either `passengers` or both `arriving` and `departing`".into(),
                ))
            }
        };
        let n = match &passengers {
            Passengers::Combined(c) => c.len(),
            Passengers::Split { arriving, .. } => arriving.len(),
        };
        let norm = |i: usize, j: usize| if i < j { (i, j) } else { (j, i) };
        let mut transfers = BTreeMap::new();
        for &(i, j, p) in &self.transfers {
            *transfers.entry(norm(i, j)).or_insert(0.0) += p;
        }
        let conflicts: BTreeSet<_> = self.conflicts.iter().map(|&(i, j)| norm(i, j)).collect();
        let data = GapData {
            walk_arr: self.walk_arr.clone(),
            walk_dep: self.walk_dep.clone(),
            walk_trans: self.walk_trans.clone(),
            passengers,
            transfers,
            conflicts,
            gate_labels: (1..=self.walk_arr.len()).map(|g| format!("gate {g}")).collect(),
            flight_labels: (0..n).map(|f| format!("flight {f}")).collect(),
        };
        data.validate()?;
        Ok(data)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MkcsFile {
    pub vertices: usize,
    pub colors: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IpFile {
    pub q: Vec<f64>,
    #[serde(rename = "Q")]
    pub q_matrix: Vec<Vec<f64>>,
    pub domain: Vec<i64>,
    #[serde(default)]
    pub constraints: Vec<PairConstraint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty: Option<f64>,
}

impl IpFile {
    pub fn from_data(data: &IpData) -> Self {
        Self {
            q: data.q.clone(),
            q_matrix: data.q_matrix.clone(),
            domain: data.domain.clone(),
            constraints: data.constraints.clone(),
            penalty: None,
        }
    }

    pub fn to_data(&self) -> IpData {
        IpData {
            q: self.q.clone(),
            q_matrix: self.q_matrix.clone(),
            domain: self.domain.clone(),
            constraints: self.constraints.clone(),
        }
    }
}

/// A problem description in one of the generator formats.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "lowercase")]
pub enum ProblemFile {
    Gap(GapFile),
    Mkcs(MkcsFile),
    Ip(IpFile),
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(toml_error)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem files always serialize")
    }

    pub fn instance(&self) -> Result<CopInstance> {
        match self {
            ProblemFile::Gap(f) => gap_instance(&f.to_data()?, f.penalty),
            ProblemFile::Mkcs(f) => mkcs_instance(&f.edges, f.vertices, f.colors),
            ProblemFile::Ip(f) => f.to_data().instance(f.penalty),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cop::{builtin_gap_benchmark, ip_benchmark, mkcs_benchmark_instance};

    #[test]
    fn instance_text_round_trip() {
        let inst = gap_instance(&builtin_gap_benchmark(), None)
            .unwrap()
            .fix_variable(4, 1)
            .unwrap();
        let text = write_instance(&inst);
        assert!(text.contains("[meta]") && text.contains("[linear]"));
        assert!(text.contains("[quadratic]") && text.contains("[labels]"));
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn hand_written_instance() {
        let text = r#"
            [meta]
            n = 2
            m = 2
            constant = 1

            [linear]
            entries = [[0, 1, 2], [1, 0, 0.5]]

            [quadratic]
            entries = [[1, 0, 1, 0, -3]]
        "#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.evaluate(&[0, 1]).unwrap(), 1.0 - 3.0);
        assert_eq!(inst.evaluate(&[1, 0]).unwrap(), 1.0 + 2.0 + 0.5);
    }

    #[test]
    fn malformed_instance_is_rejected() {
        assert!(parse_instance("[meta]\nn = 2\n").is_err());
        assert!(parse_instance("[meta]\nn = 1\nm = 2\n[linear]\nentries = [[3, 0, 1.0]]").is_err());
    }

    #[test]
    fn problem_files_round_trip() {
        let gap = ProblemFile::Gap(GapFile::from_data(&builtin_gap_benchmark()));
        let text = gap.to_toml();
        assert!(text.starts_with("problem = \"gap\""));
        let a = ProblemFile::parse(&text).unwrap().instance().unwrap();
        let b = gap_instance(&builtin_gap_benchmark(), None).unwrap();
        assert_eq!(a.evaluate(&[0, 1, 2, 3, 0]).unwrap(), b.evaluate(&[0, 1, 2, 3, 0]).unwrap());

        let ip = ProblemFile::Ip(IpFile::from_data(&ip_benchmark()));
        let inst = ProblemFile::parse(&ip.to_toml()).unwrap().instance().unwrap();
        assert_eq!(inst, ip_benchmark().instance(None).unwrap());

        let mk = ProblemFile::parse(
            "problem = \"mkcs\"\nvertices = 5\ncolors = 4\nedges = [[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4]]",
        )
        .unwrap();
        assert_eq!(mk.instance().unwrap(), mkcs_benchmark_instance());
    }
}
