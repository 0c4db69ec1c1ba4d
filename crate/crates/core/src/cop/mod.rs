//! Assignment-form combinatorial optimization problems.
//!
//! A [`CopInstance`] has `n` variables, each taking one of `m` values, and an
//! objective made of a constant, per-(variable, value) linear costs and
//! per-(pair, value pair) quadratic costs. Constraints are enforced as
//! penalties on the quadratic coefficients; the raw constraint is kept
//! alongside in [`Constraints`] so feasibility can be checked without looking
//! at penalty magnitudes.
//!
//! All indices are 0-based. Labels keep external names for display.

mod format;
mod gap;
mod ip;
mod ladder;
mod mkcs;

pub use format::{parse_instance, write_instance, GapFile, IpFile, MkcsFile, ProblemFile};
pub use gap::{builtin_gap_benchmark, gap_instance, GapData, Passengers};
pub use ip::{ip_benchmark, ip_instance, CompareOp, IpData, PairConstraint};
pub use ladder::{size_ladder, Reduction};
pub use mkcs::{mkcs_benchmark_edges, mkcs_benchmark_instance, mkcs_instance};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};

/// A value index for every variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Assignment(Vec<usize>);

impl Assignment {
    pub fn new(values: Vec<usize>) -> Self {
        Self(values)
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    /// Inserts `value` at position `index`, undoing a [`CopInstance::fix_variable`].
    pub fn inserted(&self, index: usize, value: usize) -> Self {
        let mut values = self.0.clone();
        values.insert(index, value);
        Self(values)
    }
}

impl Deref for Assignment {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Assignment {
    fn from(values: Vec<usize>) -> Self {
        Self(values)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Raw constraints: forbidden value pairs for variable pairs and forbidden
/// values for single variables (the latter appear when a variable that
/// shared a constraint is fixed).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Constraints {
    pairs: BTreeMap<(usize, usize), BTreeSet<(usize, usize)>>,
    unary: BTreeMap<usize, BTreeSet<usize>>,
    unsatisfiable: bool,
}

impl Constraints {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty() && self.unary.is_empty() && !self.unsatisfiable
    }

    /// Forbids `(s_i, s_j) = (v, w)`. The pair is stored with `i < j`.
    pub fn forbid_pair(&mut self, i: usize, j: usize, v: usize, w: usize) {
        let (key, values) = if i < j { ((i, j), (v, w)) } else { ((j, i), (w, v)) };
        self.pairs.entry(key).or_default().insert(values);
    }

    pub fn forbid_value(&mut self, i: usize, v: usize) {
        self.unary.entry(i).or_default().insert(v);
    }

    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), &BTreeSet<(usize, usize)>)> {
        self.pairs.iter().map(|(k, v)| (*k, v))
    }

    pub fn unary(&self) -> impl Iterator<Item = (usize, &BTreeSet<usize>)> {
        self.unary.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_unsatisfiable(&self) -> bool {
        self.unsatisfiable
    }

    pub fn num_forbidden_pairs(&self) -> usize {
        self.pairs.values().map(BTreeSet::len).sum()
    }

    pub fn is_satisfied(&self, s: &[usize]) -> bool {
        if self.unsatisfiable {
            return false;
        }
        let pairs_ok = self
            .pairs
            .iter()
            .all(|(&(i, j), bad)| !bad.contains(&(s[i], s[j])));
        pairs_ok && self.unary.iter().all(|(&i, bad)| !bad.contains(&s[i]))
    }

    /// A one-line summary used in reports.
    pub fn describe(&self) -> String {
        if self.is_empty() {
            return "all assignments feasible".to_string();
        }
        let mut text = format!(
            "{} forbidden value pairs over {} variable pairs",
            self.num_forbidden_pairs(),
            self.pairs.len()
        );
        let unary: usize = self.unary.values().map(BTreeSet::len).sum();
        if unary > 0 {
            text.push_str(&format!(", {unary} forbidden single values"));
        }
        if self.unsatisfiable {
            text.push_str(", unsatisfiable");
        }
        text
    }

    fn without_variable(&self, i: usize, fixed: Option<usize>) -> Self {
        let shift = |j: usize| if j > i { j - 1 } else { j };
        let mut out = Constraints {
            unsatisfiable: self.unsatisfiable,
            ..Default::default()
        };
        for (&(a, b), bad) in &self.pairs {
            if a == i || b == i {
                let Some(v) = fixed else { continue };
                for &(x, y) in bad {
                    if a == i && x == v {
                        out.forbid_value(shift(b), y);
                    } else if b == i && y == v {
                        out.forbid_value(shift(a), x);
                    }
                }
            } else {
                for &(x, y) in bad {
                    out.forbid_pair(shift(a), shift(b), x, y);
                }
            }
        }
        for (&a, bad) in &self.unary {
            if a == i {
                if fixed.is_some_and(|v| bad.contains(&v)) {
                    out.unsatisfiable = true;
                }
            } else {
                for &x in bad {
                    out.forbid_value(shift(a), x);
                }
            }
        }
        out
    }
}

/// A combinatorial optimization problem in assignment form.
#[derive(Debug, Clone, PartialEq)]
pub struct CopInstance {
    n: usize,
    m: usize,
    linear: Vec<f64>,
    quadratic: BTreeMap<(usize, usize), Vec<f64>>,
    constant: f64,
    value_labels: Option<Vec<String>>,
    variable_labels: Option<Vec<String>>,
    metadata: String,
    constraints: Constraints,
    base_penalty: Option<f64>,
}

impl CopInstance {
    /// An all-zero instance with `n` variables and `m` values.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInstance("m must be positive".into()));
        }
        Ok(Self {
            n,
            m,
            linear: vec![0.0; n * m],
            quadratic: BTreeMap::new(),
            constant: 0.0,
            value_labels: None,
            variable_labels: None,
            metadata: String::new(),
            constraints: Constraints::default(),
            base_penalty: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    pub fn value_labels(&self) -> Option<&[String]> {
        self.value_labels.as_deref()
    }

    pub fn variable_labels(&self) -> Option<&[String]> {
        self.variable_labels.as_deref()
    }

    pub fn constraints(&self) -> &Constraints {
        &self.constraints
    }

    pub fn linear(&self, i: usize, v: usize) -> f64 {
        self.linear[i * self.m + v]
    }

    /// Row of linear costs for variable `i`.
    pub fn linear_row(&self, i: usize) -> &[f64] {
        &self.linear[i * self.m..(i + 1) * self.m]
    }

    /// Quadratic cost `c2(i, j, v, w)`; the orientation of the pair does not matter.
    pub fn quadratic(&self, i: usize, j: usize, v: usize, w: usize) -> f64 {
        let (key, v, w) = if i < j { ((i, j), v, w) } else { ((j, i), w, v) };
        self.quadratic
            .get(&key)
            .map_or(0.0, |block| block[v * self.m + w])
    }

    /// Stored `m × m` blocks (row = value of the lower variable), keyed by `(i, j)` with `i < j`.
    pub fn quadratic_blocks(&self) -> impl Iterator<Item = ((usize, usize), &[f64])> {
        self.quadratic.iter().map(|(k, b)| (*k, b.as_slice()))
    }

    /// Number of nonzero `c2` entries.
    pub fn nonzero_quadratic_count(&self) -> usize {
        self.quadratic
            .values()
            .map(|b| b.iter().filter(|c| **c != 0.0).count())
            .sum()
    }

    pub fn with_metadata(mut self, metadata: impl Into<String>) -> Self {
        self.metadata = metadata.into();
        self
    }

    pub fn with_value_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.m {
            return Err(Error::InvalidInstance(format!(
                "{} value labels for m = {}",
                labels.len(),
                self.m
            )));
        }
        self.value_labels = Some(labels);
        Ok(self)
    }

    pub fn with_variable_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidInstance(format!(
                "{} variable labels for n = {}",
                labels.len(),
                self.n
            )));
        }
        self.variable_labels = Some(labels);
        Ok(self)
    }

    pub fn with_base_penalty(mut self, penalty: f64) -> Self {
        self.base_penalty = Some(penalty);
        self
    }

    fn check_var(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::InvalidInstance(format!(
                "variable {i} out of range 0..{}",
                self.n
            )));
        }
        Ok(())
    }

    fn check_value(&self, v: usize) -> Result<()> {
        if v >= self.m {
            return Err(Error::InvalidInstance(format!(
                "value {v} out of range 0..{}",
                self.m
            )));
        }
        Ok(())
    }

    pub fn add_constant(&mut self, c: f64) {
        self.constant += c;
    }

    pub fn add_linear(&mut self, i: usize, v: usize, c: f64) -> Result<()> {
        self.check_var(i)?;
        self.check_value(v)?;
        self.linear[i * self.m + v] += c;
        Ok(())
    }

    pub fn add_quadratic(&mut self, i: usize, j: usize, v: usize, w: usize, c: f64) -> Result<()> {
        if i == j {
            return Err(Error::InvalidPair(i, j));
        }
        self.check_var(i)?;
        self.check_var(j)?;
        self.check_value(v)?;
        self.check_value(w)?;
        if c == 0.0 {
            return Ok(());
        }
        let (key, v, w) = if i < j { ((i, j), v, w) } else { ((j, i), w, v) };
        let m = self.m;
        self.quadratic.entry(key).or_insert_with(|| vec![0.0; m * m])[v * m + w] += c;
        Ok(())
    }

    /// Records a raw constraint without touching the objective.
    pub fn forbid_pair(&mut self, i: usize, j: usize, v: usize, w: usize) -> Result<()> {
        if i == j {
            return Err(Error::InvalidPair(i, j));
        }
        self.check_var(i)?;
        self.check_var(j)?;
        self.check_value(v)?;
        self.check_value(w)?;
        self.constraints.forbid_pair(i, j, v, w);
        Ok(())
    }

    pub fn forbid_value(&mut self, i: usize, v: usize) -> Result<()> {
        self.check_var(i)?;
        self.check_value(v)?;
        self.constraints.forbid_value(i, v);
        Ok(())
    }

    pub fn check_assignment(&self, s: &[usize]) -> Result<()> {
        if s.len() != self.n {
            return Err(Error::AssignmentLength {
                expected: self.n,
                got: s.len(),
            });
        }
        if let Some((index, &value)) = s.iter().enumerate().find(|(_, &v)| v >= self.m) {
            return Err(Error::AssignmentValue {
                index,
                value,
                m: self.m,
            });
        }
        Ok(())
    }

    /// `C(s)`: constant plus linear and quadratic contributions, penalties included.
    pub fn evaluate(&self, s: &[usize]) -> Result<f64> {
        self.check_assignment(s)?;
        Ok(self.evaluate_unchecked(s))
    }

    pub(crate) fn evaluate_unchecked(&self, s: &[usize]) -> f64 {
        let m = self.m;
        let linear: f64 = s
            .iter()
            .enumerate()
            .map(|(i, &v)| self.linear[i * m + v])
            .sum();
        let quadratic: f64 = self
            .quadratic
            .iter()
            .map(|(&(i, j), block)| block[s[i] * m + s[j]])
            .sum();
        self.constant + linear + quadratic
    }

    pub fn is_feasible(&self, s: &[usize]) -> bool {
        self.constraints.is_satisfied(s)
    }

    /// Multiplies every coefficient, the constant included, by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.constant *= alpha;
        out.linear.iter_mut().for_each(|c| *c *= alpha);
        for block in out.quadratic.values_mut() {
            block.iter_mut().for_each(|c| *c *= alpha);
        }
        out.base_penalty = self.base_penalty.map(|p| p * alpha.abs());
        out
    }

    pub fn max_abs_linear(&self) -> f64 {
        self.linear.iter().fold(0.0, |a, c| a.max(c.abs()))
    }

    pub fn max_abs_quadratic(&self) -> f64 {
        self.quadratic
            .values()
            .flatten()
            .fold(0.0, |a, c| a.max(c.abs()))
    }

    /// Penalty weight used when none is given: the builder's recorded value,
    /// else `2 (max |c1| + max |c2|)`, else 1 for an all-zero instance.
    pub fn suggested_penalty(&self) -> f64 {
        if let Some(p) = self.base_penalty {
            return p;
        }
        let p = 2.0 * (self.max_abs_linear() + self.max_abs_quadratic());
        if p > 0.0 {
            p
        } else {
            1.0
        }
    }

    /// Adds `lambda` to `c2(i, j, v, v)` for every pair and value and records
    /// the `s_i != s_j` constraints.
    pub fn add_not_equal_penalty(&self, pairs: &[(usize, usize)], lambda: f64) -> Result<Self> {
        check_penalty(lambda)?;
        let mut out = self.clone();
        for &(i, j) in pairs {
            if i == j || i >= self.n || j >= self.n {
                return Err(Error::InvalidPair(i, j));
            }
            for v in 0..self.m {
                out.add_quadratic(i, j, v, v, lambda)?;
                out.constraints.forbid_pair(i, j, v, v);
            }
        }
        Ok(out)
    }

    /// Adds `lambda` to `c2(i, j, v, w)` for each listed violating value pair
    /// and records them as forbidden.
    pub fn add_pair_violations(
        &self,
        violations: &[(usize, usize, usize, usize)],
        lambda: f64,
    ) -> Result<Self> {
        check_penalty(lambda)?;
        let mut out = self.clone();
        for &(i, j, v, w) in violations {
            out.add_quadratic(i, j, v, w, lambda)?;
            out.constraints.forbid_pair(i, j, v, w);
        }
        Ok(out)
    }

    /// Eliminates variable `i` by fixing it to value `v`.
    ///
    /// Its linear cost moves into the constant and its couplings become linear
    /// costs of the remaining variables, which are renumbered to close the gap.
    /// Constraints against the fixed variable turn into forbidden values.
    pub fn fix_variable(&self, i: usize, v: usize) -> Result<Self> {
        self.check_var(i)?;
        self.check_value(v)?;
        let m = self.m;
        let shift = |j: usize| if j > i { j - 1 } else { j };
        let mut out = Self::new(self.n - 1, m)?;
        out.constant = self.constant + self.linear(i, v);
        for j in (0..self.n).filter(|&j| j != i) {
            out.linear[shift(j) * m..(shift(j) + 1) * m].copy_from_slice(self.linear_row(j));
        }
        for (&(a, b), block) in &self.quadratic {
            if a == i {
                for w in 0..m {
                    out.linear[shift(b) * m + w] += block[v * m + w];
                }
            } else if b == i {
                for w in 0..m {
                    out.linear[shift(a) * m + w] += block[w * m + v];
                }
            } else {
                out.quadratic.insert((shift(a), shift(b)), block.clone());
            }
        }
        out.constraints = self.constraints.without_variable(i, Some(v));
        out.value_labels = self.value_labels.clone();
        out.variable_labels = self.variable_labels.as_ref().map(|labels| {
            let mut labels = labels.clone();
            labels.remove(i);
            labels
        });
        out.base_penalty = self.base_penalty;
        let name = self.variable_name(i);
        out.metadata = append_note(&self.metadata, &format!("fixed {name} = {v}"));
        Ok(out)
    }

    /// Removes variable `i` together with every cost and constraint touching it.
    pub fn delete_variable(&self, i: usize) -> Result<Self> {
        self.check_var(i)?;
        let m = self.m;
        let shift = |j: usize| if j > i { j - 1 } else { j };
        let mut out = Self::new(self.n - 1, m)?;
        out.constant = self.constant;
        for j in (0..self.n).filter(|&j| j != i) {
            out.linear[shift(j) * m..(shift(j) + 1) * m].copy_from_slice(self.linear_row(j));
        }
        for (&(a, b), block) in &self.quadratic {
            if a != i && b != i {
                out.quadratic.insert((shift(a), shift(b)), block.clone());
            }
        }
        out.constraints = self.constraints.without_variable(i, None);
        out.value_labels = self.value_labels.clone();
        out.variable_labels = self.variable_labels.as_ref().map(|labels| {
            let mut labels = labels.clone();
            labels.remove(i);
            labels
        });
        out.base_penalty = self.base_penalty;
        let name = self.variable_name(i);
        out.metadata = append_note(&self.metadata, &format!("deleted {name}"));
        Ok(out)
    }

    fn variable_name(&self, i: usize) -> String {
        match &self.variable_labels {
            Some(labels) => labels[i].clone(),
            None => format!("x{i}"),
        }
    }

    /// `m^n` as a float, so huge spaces do not overflow.
    pub fn search_space_size(&self) -> f64 {
        (self.m as f64).powi(self.n as i32)
    }

    /// Iterates over all `m^n` assignments in lexicographic order.
    pub fn assignments(&self) -> AssignmentIter {
        AssignmentIter {
            current: vec![0; self.n],
            m: self.m,
            done: false,
        }
    }
}

fn append_note(metadata: &str, note: &str) -> String {
    if metadata.is_empty() {
        note.to_string()
    } else {
        format!("{metadata}; {note}")
    }
}

fn check_penalty(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidPenalty(lambda))
    }
}

/// Odometer over `{0..m}^n`, last variable fastest.
pub struct AssignmentIter {
    current: Vec<usize>,
    m: usize,
    done: bool,
}

impl Iterator for AssignmentIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut k = self.current.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.current[k] += 1;
            if self.current[k] < self.m {
                break;
            }
            self.current[k] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CopInstance {
        let mut inst = CopInstance::new(3, 3).unwrap();
        for i in 0..3 {
            for v in 0..3 {
                inst.add_linear(i, v, (i * 3 + v) as f64 * 0.5 - 1.0).unwrap();
            }
        }
        inst.add_quadratic(0, 1, 0, 2, 3.0).unwrap();
        inst.add_quadratic(2, 0, 1, 1, -2.0).unwrap();
        inst.add_quadratic(1, 2, 2, 2, 1.5).unwrap();
        inst.add_constant(0.25);
        inst
    }

    #[test]
    fn zero_instance_evaluates_to_zero() {
        let inst = CopInstance::new(4, 3).unwrap();
        for s in inst.assignments() {
            assert_eq!(inst.evaluate(&s).unwrap(), 0.0);
        }
    }

    #[test]
    fn evaluate_rejects_bad_assignments() {
        let inst = small();
        assert!(matches!(
            inst.evaluate(&[0, 1]),
            Err(Error::AssignmentLength { expected: 3, got: 2 })
        ));
        assert!(matches!(
            inst.evaluate(&[0, 3, 1]),
            Err(Error::AssignmentValue { index: 1, value: 3, m: 3 })
        ));
    }

    #[test]
    fn quadratic_orientation_is_normalized() {
        let inst = small();
        assert_eq!(inst.quadratic(0, 2, 1, 1), -2.0);
        assert_eq!(inst.quadratic(2, 0, 1, 1), -2.0);
        assert_eq!(inst.quadratic(1, 0, 2, 0), 3.0);
        assert_eq!(inst.quadratic(0, 1, 2, 0), 0.0);
    }

    #[test]
    fn not_equal_penalty_single_hit() {
        let inst = CopInstance::new(2, 2).unwrap();
        let pen = inst.add_not_equal_penalty(&[(0, 1)], 5.0).unwrap();
        assert_eq!(pen.evaluate(&[0, 0]).unwrap() - inst.evaluate(&[0, 0]).unwrap(), 5.0);
        assert_eq!(pen.evaluate(&[0, 1]).unwrap(), 0.0);
        assert!(!pen.is_feasible(&[1, 1]));
        assert!(pen.is_feasible(&[1, 0]));
    }

    #[test]
    fn not_equal_penalty_empty_and_errors() {
        let inst = small();
        assert_eq!(inst.add_not_equal_penalty(&[], 3.0).unwrap(), inst);
        assert!(matches!(
            inst.add_not_equal_penalty(&[(1, 1)], 3.0),
            Err(Error::InvalidPair(1, 1))
        ));
        assert!(matches!(
            inst.add_not_equal_penalty(&[(0, 1)], 0.0),
            Err(Error::InvalidPenalty(_))
        ));
    }

    #[test]
    fn penalty_leaves_satisfying_assignments_alone() {
        let inst = small();
        let pen = inst.add_not_equal_penalty(&[(0, 1), (1, 2)], 7.0).unwrap();
        for s in inst.assignments() {
            if s[0] != s[1] && s[1] != s[2] {
                assert_eq!(pen.evaluate(&s).unwrap(), inst.evaluate(&s).unwrap());
                assert!(pen.is_feasible(&s));
            } else {
                assert!(!pen.is_feasible(&s));
            }
        }
    }

    #[test]
    fn scaling_scales_evaluate() {
        let inst = small();
        let scaled = inst.scaled(-2.5);
        for s in inst.assignments() {
            let a = inst.evaluate(&s).unwrap();
            let b = scaled.evaluate(&s).unwrap();
            assert!((b + 2.5 * a).abs() < 1e-12);
        }
    }

    #[test]
    fn fix_variable_commutes_with_evaluate() {
        let inst = small().add_not_equal_penalty(&[(0, 2)], 4.0).unwrap();
        for i in 0..3 {
            for v in 0..3 {
                let fixed = inst.fix_variable(i, v).unwrap();
                assert_eq!(fixed.n(), 2);
                for s in fixed.assignments() {
                    let full = Assignment::new(s.clone()).inserted(i, v);
                    let a = fixed.evaluate(&s).unwrap();
                    let b = inst.evaluate(&full).unwrap();
                    assert!((a - b).abs() < 1e-12);
                    assert_eq!(fixed.is_feasible(&s), inst.is_feasible(&full));
                }
            }
        }
    }

    #[test]
    fn fix_last_variable_leaves_constant() {
        let mut inst = CopInstance::new(1, 3).unwrap();
        inst.add_linear(0, 2, 4.0).unwrap();
        let fixed = inst.fix_variable(0, 2).unwrap();
        assert_eq!(fixed.n(), 0);
        assert_eq!(fixed.evaluate(&[]).unwrap(), 4.0);
        assert_eq!(fixed.assignments().count(), 1);
    }

    #[test]
    fn fix_in_zero_instance_stays_zero() {
        let inst = CopInstance::new(3, 2).unwrap();
        let fixed = inst.fix_variable(1, 1).unwrap();
        assert_eq!(fixed, CopInstance::new(2, 2).unwrap().with_metadata("fixed x1 = 1"));
    }

    #[test]
    fn fixing_a_forbidden_value_is_unsatisfiable() {
        let mut inst = CopInstance::new(2, 2).unwrap();
        inst.forbid_value(0, 1).unwrap();
        let fixed = inst.fix_variable(0, 1).unwrap();
        assert!(fixed.constraints().is_unsatisfiable());
        assert!(!fixed.is_feasible(&[0]));
    }

    #[test]
    fn delete_variable_drops_couplings() {
        let inst = small();
        let del = inst.delete_variable(0).unwrap();
        assert_eq!(del.n(), 2);
        assert_eq!(del.quadratic(0, 1, 2, 2), 1.5);
        assert_eq!(del.quadratic_blocks().count(), 1);
        assert_eq!(del.linear(0, 0), inst.linear(1, 0));
    }

    #[test]
    fn assignment_iterator_is_exhaustive() {
        let inst = CopInstance::new(3, 4).unwrap();
        let all: Vec<_> = inst.assignments().collect();
        assert_eq!(all.len(), 64);
        assert_eq!(all[0], vec![0, 0, 0]);
        assert_eq!(all[1], vec![0, 0, 1]);
        assert_eq!(all[63], vec![3, 3, 3]);
    }

    #[test]
    fn suggested_penalty_formula() {
        let inst = small();
        let expected = 2.0 * (inst.max_abs_linear() + inst.max_abs_quadratic());
        assert_eq!(inst.suggested_penalty(), expected);
        assert_eq!(CopInstance::new(2, 2).unwrap().suggested_penalty(), 1.0);
        assert_eq!(inst.with_base_penalty(9.0).suggested_penalty(), 9.0);
    }
}
