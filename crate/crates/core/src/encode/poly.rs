use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::wht::butterfly;
use crate::error::{Error, Result};

/// Largest width for which dense diagonals and statevectors are built.
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// A diagonal Hamiltonian `Σ_T J_T Π_{t∈T} Z_t`.
///
/// Keys are sorted, duplicate-free qubit lists; the empty key holds the
/// identity coefficient. Exact zeros are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliPolynomial {
    num_qubits: usize,
    terms: BTreeMap<Vec<usize>, f64>,
}

impl PauliPolynomial {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Adds `c · Π Z_q`. Repeated indices cancel in pairs since `Z² = I`.
    pub fn add_term(&mut self, qubits: impl IntoIterator<Item = usize>, c: f64) -> Result<()> {
        let mut key: Vec<usize> = qubits.into_iter().collect();
        if let Some(&q) = key.iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::QubitIndex {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        key.sort_unstable();
        let mut canonical = Vec::with_capacity(key.len());
        for q in key {
            if canonical.last() == Some(&q) {
                canonical.pop();
            } else {
                canonical.push(q);
            }
        }
        self.add_canonical(canonical, c);
        Ok(())
    }

    pub(crate) fn add_canonical(&mut self, key: Vec<usize>, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0.0 {
                    e.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, qubits: &[usize]) -> f64 {
        self.terms.get(qubits).copied().unwrap_or(0.0)
    }

    /// Identity coefficient.
    pub fn constant(&self) -> f64 {
        self.coefficient(&[])
    }

    /// All stored terms in lexicographic key order, identity first.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    pub fn non_identity_terms(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.terms().filter(|(k, _)| !k.is_empty())
    }

    /// Number of stored terms, identity included.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_non_identity_terms(&self) -> usize {
        self.terms.len() - usize::from(self.terms.contains_key(&[][..]))
    }

    /// Term count per order `|T|` (identity excluded).
    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (k, _) in self.non_identity_terms() {
            *out.entry(k.len()).or_insert(0) += 1;
        }
        out
    }

    pub fn max_order(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Largest `|J_T|` over non-identity terms, 0 if there are none.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.non_identity_terms().fold(0.0, |a, (_, c)| a.max(c.abs()))
    }

    /// Drops every term with `|J| < rel · max |J|` (maximum over all terms).
    pub fn prune(&mut self, rel: f64) {
        let max = self.terms.values().fold(0.0f64, |a, c| a.max(c.abs()));
        let cut = rel * max;
        self.terms.retain(|_, c| c.abs() >= cut && *c != 0.0);
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let mut out = Self::new(self.num_qubits);
        for (k, &c) in &self.terms {
            out.add_canonical(k.clone(), alpha * c);
        }
        out
    }

    /// Eigenvalue on the basis state whose qubit `q` is bit `q` of `b`.
    pub fn energy(&self, b: usize) -> f64 {
        self.terms
            .iter()
            .map(|(k, &c)| {
                let parity = k.iter().filter(|&&q| b >> q & 1 == 1).count() % 2;
                if parity == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// Serializes as a header line plus one `[i,j,...] coefficient` line per
    /// term in key order; coefficients round-trip exactly.
    pub fn to_dump(&self) -> String {
        let mut out = format!("# qubits {}\n", self.num_qubits);
        for (k, c) in self.terms() {
            let idx: Vec<String> = k.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "[{}] {}", idx.join(","), c);
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Self> {
        let mut poly: Option<Self> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |message: &str| Error::Parse {
                line: n + 1,
                message: message.to_string(),
            };
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(q) = rest.trim().strip_prefix("qubits") {
                    let q = q.trim().parse().map_err(|_| err("bad qubit count"))?;
                    poly = Some(Self::new(q));
                }
                continue;
            }
            let p = poly.as_mut().ok_or_else(|| err("term before `# qubits` header"))?;
            let open = line.strip_prefix('[').ok_or_else(|| err("expected `[`"))?;
            let (idx, coeff) = open.split_once(']').ok_or_else(|| err("expected `]`"))?;
            let qubits = idx
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| err("bad qubit index")))
                .collect::<Result<Vec<_>>>()?;
            let c: f64 = coeff.trim().parse().map_err(|_| err("bad coefficient"))?;
            p.add_term(qubits, c).map_err(|e| err(&e.to_string()))?;
        }
        poly.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing `# qubits` header".into(),
        })
    }
}

/// Dense diagonal `E_b = Σ_T J_T (−1)^{Σ_{t∈T} b_t}` over all `2^q` basis
/// states, obtained from one Walsh–Hadamard pass over the coefficient table.
pub fn diagonal_of(poly: &PauliPolynomial, cap: usize) -> Result<Vec<f64>> {
    let q = poly.num_qubits();
    if q > cap {
        return Err(Error::QubitCap { qubits: q, cap });
    }
    let mut table = vec![0.0; 1usize << q];
    for (k, c) in poly.terms() {
        let mask = k.iter().fold(0usize, |m, &t| m | 1 << t);
        table[mask] += c;
    }
    butterfly(&mut table);
    Ok(table)
}
