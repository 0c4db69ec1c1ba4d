use std::collections::{BTreeMap, BTreeSet};

use super::CopInstance;
use crate::error::{Error, Result};

/// Passenger counts per flight.
#[derive(Debug, Clone, PartialEq)]
pub enum Passengers {
    /// Separate arriving and departing counts.
    Split { arriving: Vec<f64>, departing: Vec<f64> },
    /// Arriving plus departing, usable only when arrival and departure walking
    /// times coincide for every gate.
    Combined(Vec<f64>),
}

impl Passengers {
    fn len(&self) -> usize {
        match self {
            Passengers::Split { arriving, .. } => arriving.len(),
            Passengers::Combined(c) => c.len(),
        }
    }

    /// Arriving plus departing passengers of flight `i`.
    pub fn combined(&self, i: usize) -> f64 {
        match self {
            Passengers::Split { arriving, departing } => arriving[i] + departing[i],
            Passengers::Combined(c) => c[i],
        }
    }
}

/// Walking times and passenger flows of a gate assignment instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GapData {
    /// Check-in to gate, minutes.
    pub walk_arr: Vec<f64>,
    /// Gate to luggage claim, minutes.
    pub walk_dep: Vec<f64>,
    /// Gate to gate, minutes; symmetric with zero diagonal.
    pub walk_trans: Vec<Vec<f64>>,
    pub passengers: Passengers,
    /// Transfer passengers per unordered flight pair, stored as `(min, max)`.
    pub transfers: BTreeMap<(usize, usize), f64>,
    /// Temporally overlapping flight pairs, stored as `(min, max)`.
    pub conflicts: BTreeSet<(usize, usize)>,
    pub gate_labels: Vec<String>,
    pub flight_labels: Vec<String>,
}

impl GapData {
    pub fn num_flights(&self) -> usize {
        self.passengers.len()
    }

    pub fn num_gates(&self) -> usize {
        self.walk_arr.len()
    }

    /// Every passenger counted once: arriving, departing and transferring.
    pub fn total_passengers(&self) -> f64 {
        let local: f64 = (0..self.num_flights()).map(|i| self.passengers.combined(i)).sum();
        local + self.transfers.values().sum::<f64>()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.num_gates();
        let n = self.num_flights();
        let bad = |msg: String| Err(Error::InvalidInstance(msg));
        if m == 0 || n == 0 {
            return bad("GAP needs at least one flight and one gate".into());
        }
        if self.walk_dep.len() != m || self.walk_trans.len() != m {
            return bad("walking-time tables disagree on the number of gates".into());
        }
        for (v, row) in self.walk_trans.iter().enumerate() {
            if row.len() != m {
                return bad(format!("walk_trans row {v} has {} entries", row.len()));
            }
            if row[v] != 0.0 {
                return bad(format!("walk_trans diagonal entry {v} is nonzero"));
            }
            for (w, &t) in row.iter().enumerate() {
                if t != self.walk_trans[w][v] {
                    return bad(format!("walk_trans not symmetric at ({v}, {w})"));
                }
            }
        }
        match &self.passengers {
            Passengers::Split { arriving, departing } => {
                if arriving.len() != departing.len() {
                    return bad("arriving and departing counts differ in length".into());
                }
            }
            Passengers::Combined(_) => {
                if self.walk_arr != self.walk_dep {
                    return bad("combined passenger counts need equal arrival/departure walks".into());
                }
            }
        }
        let counts_ok = (0..n).all(|i| match &self.passengers {
            Passengers::Split { arriving, departing } => arriving[i] >= 0.0 && departing[i] >= 0.0,
            Passengers::Combined(c) => c[i] >= 0.0,
        });
        if !counts_ok || self.transfers.values().any(|&p| p < 0.0) {
            return bad("passenger counts must be non-negative".into());
        }
        for &(i, j) in self.transfers.keys().chain(self.conflicts.iter()) {
            if i >= j || j >= n {
                return bad(format!("flight pair ({i}, {j}) is invalid"));
            }
        }
        if self.gate_labels.len() != m || self.flight_labels.len() != n {
            return bad("label counts do not match the instance".into());
        }
        Ok(())
    }
}

/// The five-flight, four-gate benchmark: walking times, combined passenger
/// counts, two transfer flows and four overlapping flight pairs.
pub fn builtin_gap_benchmark() -> GapData {
    let walk = vec![10.0, 10.0, 20.0, 20.0];
    let walk_trans = vec![
        vec![0.0, 20.0, 20.0, 20.0],
        vec![20.0, 0.0, 20.0, 20.0],
        vec![20.0, 20.0, 0.0, 1.0],
        vec![20.0, 20.0, 1.0, 0.0],
    ];
    GapData {
        walk_arr: walk.clone(),
        walk_dep: walk,
        walk_trans,
        passengers: Passengers::Combined(vec![75.0, 74.0, 62.0, 88.0, 61.0]),
        transfers: BTreeMap::from([((1, 4), 13.0), ((0, 2), 29.0)]),
        conflicts: BTreeSet::from([(0, 1), (1, 2), (2, 3), (3, 4)]),
        gate_labels: (1..=4).map(|g| format!("gate {g}")).collect(),
        flight_labels: (0..5).map(|f| format!("flight {f}")).collect(),
    }
}

/// Builds the GAP objective: `p_arr t_arr + p_dep t_dep` per flight and gate,
/// `p_trans t_trans` per transfer pair, plus not-equal penalties for
/// conflicting flights. `penalty = None` uses `2 (max |c1| + max |c2|)` of the
/// unpenalized objective.
pub fn gap_instance(data: &GapData, penalty: Option<f64>) -> Result<CopInstance> {
    data.validate()?;
    let n = data.num_flights();
    let m = data.num_gates();
    let mut inst = CopInstance::new(n, m)?;
    for i in 0..n {
        for v in 0..m {
            let c = match &data.passengers {
                Passengers::Split { arriving, departing } => {
                    arriving[i] * data.walk_arr[v] + departing[i] * data.walk_dep[v]
                }
                Passengers::Combined(c) => c[i] * data.walk_arr[v],
            };
            inst.add_linear(i, v, c)?;
        }
    }
    for (&(i, j), &p) in &data.transfers {
        for v in 0..m {
            for w in 0..m {
                inst.add_quadratic(i, j, v, w, p * data.walk_trans[v][w])?;
            }
        }
    }
    let lambda = penalty.unwrap_or_else(|| inst.suggested_penalty());
    let pairs: Vec<_> = data.conflicts.iter().copied().collect();
    let inst = inst.add_not_equal_penalty(&pairs, lambda)?;
    Ok(inst
        .with_base_penalty(lambda)
        .with_value_labels(data.gate_labels.clone())?
        .with_variable_labels(data.flight_labels.clone())?
        .with_metadata(format!(
            "gate assignment: {n} flights, {m} gates, {} transfer pairs, {} conflicts",
            data.transfers.len(),
            data.conflicts.len()
        )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_tables() {
        let data = builtin_gap_benchmark();
        data.validate().unwrap();
        assert_eq!(data.walk_trans[2][3], 1.0);
        assert_eq!(data.walk_trans[3][2], 1.0);
        assert_eq!(data.passengers.combined(3), 88.0);
        assert_eq!(data.transfers[&(1, 4)], 13.0);
        assert_eq!(data.transfers[&(0, 2)], 29.0);
        assert_eq!(data.total_passengers(), 402.0);
    }

    #[test]
    fn builtin_instance_shape() {
        let inst = gap_instance(&builtin_gap_benchmark(), None).unwrap();
        assert_eq!((inst.n(), inst.m()), (5, 4));
        // 16 conflict entries plus 12 nonzero transfer entries per transfer pair.
        assert_eq!(inst.constraints().num_forbidden_pairs(), 16);
        assert_eq!(inst.nonzero_quadratic_count(), 16 + 24);
        assert_eq!(inst.linear(3, 2), 88.0 * 20.0);
        assert_eq!(inst.quadratic(0, 2, 2, 3), 29.0);
        // 2 (max c1 + max c2) = 2 (88·20 + 29·20)
        assert_eq!(inst.suggested_penalty(), 4680.0);
    }

    #[test]
    fn zero_passengers_give_zero_instance() {
        let mut data = builtin_gap_benchmark();
        data.passengers = Passengers::Combined(vec![0.0; 5]);
        data.transfers.clear();
        data.conflicts.clear();
        let inst = gap_instance(&data, Some(1.0)).unwrap();
        for s in inst.assignments() {
            assert_eq!(inst.evaluate(&s).unwrap(), 0.0);
        }
    }

    #[test]
    fn split_matches_combined_when_walks_coincide() {
        let data = builtin_gap_benchmark();
        let Passengers::Combined(c) = &data.passengers else { unreachable!() };
        let mut split = data.clone();
        split.passengers = Passengers::Split {
            arriving: c.iter().map(|x| (x / 2.0).floor()).collect(),
            departing: c.iter().map(|x| x - (x / 2.0).floor()).collect(),
        };
        let a = gap_instance(&data, Some(100.0)).unwrap();
        let b = gap_instance(&split, Some(100.0)).unwrap();
        for s in a.assignments() {
            assert_eq!(a.evaluate(&s).unwrap(), b.evaluate(&s).unwrap());
        }
    }

    #[test]
    fn rejects_asymmetric_walks() {
        let mut data = builtin_gap_benchmark();
        data.walk_trans[0][1] = 5.0;
        assert!(gap_instance(&data, None).is_err());
    }
}
