use std::collections::BTreeSet;

use super::CopInstance;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompareOp {
    Le,
    Ge,
    Eq,
    Ne,
}

impl CompareOp {
    fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            CompareOp::Le => lhs <= rhs,
            CompareOp::Ge => lhs >= rhs,
            CompareOp::Eq => lhs == rhs,
            CompareOp::Ne => lhs != rhs,
        }
    }
}

/// `a · u_i + b · u_j (op) rhs` over two integer variables.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PairConstraint {
    pub i: usize,
    pub j: usize,
    pub a: f64,
    pub b: f64,
    pub op: CompareOp,
    pub rhs: f64,
}

impl PairConstraint {
    /// All value-index pairs `(v, w)` for which the constraint fails.
    pub fn violations(&self, domain: &[i64]) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for (v, &yv) in domain.iter().enumerate() {
            for (w, &yw) in domain.iter().enumerate() {
                let lhs = self.a * yv as f64 + self.b * yw as f64;
                if !self.op.holds(lhs, self.rhs) {
                    out.push((self.i, self.j, v, w));
                }
            }
        }
        out
    }
}

/// Integer program over a shared finite domain with pairwise constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct IpData {
    pub q: Vec<f64>,
    pub q_matrix: Vec<Vec<f64>>,
    pub domain: Vec<i64>,
    pub constraints: Vec<PairConstraint>,
}

impl IpData {
    pub fn violations(&self) -> Vec<(usize, usize, usize, usize)> {
        self.constraints
            .iter()
            .flat_map(|c| c.violations(&self.domain))
            .collect()
    }

    pub fn instance(&self, penalty: Option<f64>) -> Result<CopInstance> {
        for c in &self.constraints {
            if c.i == c.j || c.i >= self.q.len() || c.j >= self.q.len() {
                return Err(Error::InvalidPair(c.i, c.j));
            }
        }
        ip_instance(&self.q, &self.q_matrix, &self.domain, &self.violations(), penalty)
    }
}

/// Assignment form of `q·u + uᵀ Q u`: `c1(i, v) = q_i y_v + Q_ii y_v²` and
/// `c2(i, j, v, w) = (Q_ij + Q_ji) y_v y_w`, plus `penalty` on every listed
/// violating value pair. `penalty = None` uses `2 (max |c1| + max |c2|)`.
pub fn ip_instance(
    q: &[f64],
    q_matrix: &[Vec<f64>],
    domain: &[i64],
    violations: &[(usize, usize, usize, usize)],
    penalty: Option<f64>,
) -> Result<CopInstance> {
    let n = q.len();
    let m = domain.len();
    if q_matrix.len() != n || q_matrix.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInstance(format!("Q must be {n}×{n}")));
    }
    if domain.iter().collect::<BTreeSet<_>>().len() != m {
        return Err(Error::InvalidInstance("domain values must be distinct".into()));
    }
    if let Some(&(i, j, v, w)) = violations
        .iter()
        .find(|&&(i, j, v, w)| v >= m || w >= m || i >= n || j >= n || i == j)
    {
        return Err(Error::InvalidInstance(format!(
            "violation ({i}, {j}, {v}, {w}) does not fit {n} variables over {m} values"
        )));
    }
    let mut inst = CopInstance::new(n, m)?;
    for i in 0..n {
        for (v, &y) in domain.iter().enumerate() {
            let y = y as f64;
            inst.add_linear(i, v, q[i] * y + q_matrix[i][i] * y * y)?;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let coupling = q_matrix[i][j] + q_matrix[j][i];
            if coupling == 0.0 {
                continue;
            }
            for (v, &yv) in domain.iter().enumerate() {
                for (w, &yw) in domain.iter().enumerate() {
                    inst.add_quadratic(i, j, v, w, coupling * (yv * yw) as f64)?;
                }
            }
        }
    }
    let lambda = penalty.unwrap_or_else(|| inst.suggested_penalty());
    let inst = if violations.is_empty() {
        inst
    } else {
        inst.add_pair_violations(violations, lambda)?
    };
    let labels = domain.iter().map(|y| y.to_string()).collect();
    let names = (0..n).map(|i| format!("u{i}")).collect();
    Ok(inst
        .with_base_penalty(lambda)
        .with_value_labels(labels)?
        .with_variable_labels(names)?
        .with_metadata(format!(
            "integer program: {n} variables over {m} values, {} violating pairs",
            violations.len()
        )))
}

/// Synthetic four-variable benchmark over `{0, 1, 2, 3}`: couplings on the
/// pairs (0, 1) and (2, 3) and two linear constraints on (0, 2) and (1, 3),
/// giving 36 nonzero quadratic coefficients.
pub fn ip_benchmark() -> IpData {
    let mut q_matrix = vec![vec![0.0; 4]; 4];
    q_matrix[0][1] = -1.5;
    q_matrix[2][3] = -1.0;
    IpData {
        q: vec![1.0, -2.0, -1.0, 2.0],
        q_matrix,
        domain: vec![0, 1, 2, 3],
        constraints: vec![
            PairConstraint { i: 0, j: 2, a: 1.0, b: 1.0, op: CompareOp::Le, rhs: 2.0 },
            PairConstraint { i: 1, j: 3, a: 1.0, b: 2.0, op: CompareOp::Le, rhs: 4.0 },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_program_is_zero() {
        let inst = ip_instance(&[0.0; 3], &vec![vec![0.0; 3]; 3], &[0, 1], &[], None).unwrap();
        assert!(inst.assignments().all(|s| inst.evaluate(&s).unwrap() == 0.0));
    }

    #[test]
    fn direct_arithmetic() {
        let q_matrix = vec![vec![0.0, 2.0], vec![0.0, 0.0]];
        let inst = ip_instance(&[1.0, -1.0], &q_matrix, &[0, 1], &[], None).unwrap();
        // values index 1 ↦ y = 1 for both variables
        assert_eq!(inst.evaluate(&[1, 1]).unwrap(), 2.0);
        assert_eq!(inst.evaluate(&[1, 0]).unwrap(), 1.0);
    }

    #[test]
    fn rejects_duplicate_domain_and_bad_violation() {
        let z = vec![vec![0.0; 2]; 2];
        assert!(ip_instance(&[0.0; 2], &z, &[1, 1], &[], None).is_err());
        assert!(ip_instance(&[0.0; 2], &z, &[0, 1], &[(0, 1, 2, 0)], None).is_err());
    }

    #[test]
    fn constraint_violation_counts() {
        let data = ip_benchmark();
        assert_eq!(data.constraints[0].violations(&data.domain).len(), 10);
        assert_eq!(data.constraints[1].violations(&data.domain).len(), 8);
        let inst = data.instance(None).unwrap();
        assert_eq!(inst.nonzero_quadratic_count(), 36);
        for s in inst.assignments() {
            let y: Vec<f64> = s.iter().map(|&v| data.domain[v] as f64).collect();
            let ok = y[0] + y[2] <= 2.0 && y[1] + 2.0 * y[3] <= 4.0;
            assert_eq!(inst.is_feasible(&s), ok);
        }
    }

    #[test]
    fn objective_matches_quadratic_form() {
        let data = ip_benchmark();
        let inst = data.instance(Some(50.0)).unwrap();
        for s in inst.assignments().filter(|s| inst.is_feasible(s)) {
            let y: Vec<f64> = s.iter().map(|&v| data.domain[v] as f64).collect();
            let mut c: f64 = (0..4).map(|i| data.q[i] * y[i]).sum();
            for i in 0..4 {
                for j in 0..4 {
                    c += data.q_matrix[i][j] * y[i] * y[j];
                }
            }
            assert!((inst.evaluate(&s).unwrap() - c).abs() < 1e-12);
        }
    }
}
