//! Finite distance monoids `(R, ⊕, ≤, 0)`.
//!
//! Elements are addressed by index; index order is the order of the monoid,
//! so index 0 is the zero and the last index is the maximum.

use serde::{Deserialize, Serialize};

use crate::atp::atp;
use crate::equiv::EquivRelDescriptor;
use crate::error::{Error, Result};
use crate::structure::{FinStructure, Signature};

/// On-disk form: `{"elements":["0","1","3","4"],"plus":[[..],..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidFile {
    pub elements: Vec<String>,
    pub plus: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistanceMonoid {
    labels: Vec<String>,
    plus: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoidVerdict {
    Valid(DistanceMonoid),
    Invalid(Vec<Violation>),
}

/// Validates a candidate table. Each failing axiom is reported once, with
/// its lexicographically first witness. Dimension problems are errors.
pub fn check_monoid(file: &MonoidFile) -> Result<MonoidVerdict> {
    let n = file.elements.len();
    if n == 0 {
        return Err(Error::Malformed(
            "a monoid needs at least the zero element".into(),
        ));
    }
    if file.plus.len() != n || file.plus.iter().any(|row| row.len() != n) {
        return Err(Error::Malformed(format!("operation table must be {n}x{n}")));
    }
    if let Some(&bad) = file.plus.iter().flatten().find(|&&v| v >= n) {
        return Err(Error::Malformed(format!(
            "table entry {bad} is not an element index"
        )));
    }
    for (i, l) in file.elements.iter().enumerate() {
        if file.elements[..i].contains(l) {
            return Err(Error::Malformed(format!("element `{l}` is listed twice")));
        }
    }
    let p = &file.plus;
    let name = |idx: &[usize]| {
        idx.iter()
            .map(|&i| file.elements[i].clone())
            .collect::<Vec<_>>()
    };
    let mut violations = Vec::new();
    let mut first = |axiom: &'static str, found: Option<Vec<usize>>| {
        if let Some(w) = found {
            violations.push(Violation {
                axiom,
                witness: name(&w),
            });
        }
    };
    let pairs = || (0..n).flat_map(move |r| (0..n).map(move |s| (r, s)));
    let triples = || pairs().flat_map(move |(r, s)| (0..n).map(move |t| (r, s, t)));
    first(
        "identity",
        (0..n)
            .find(|&r| p[0][r] != r || p[r][0] != r)
            .map(|r| vec![r]),
    );
    first(
        "commutativity",
        pairs()
            .find(|&(r, s)| p[r][s] != p[s][r])
            .map(|(r, s)| vec![r, s]),
    );
    first(
        "associativity",
        triples()
            .find(|&(r, s, t)| p[p[r][s]][t] != p[r][p[s][t]])
            .map(|(r, s, t)| vec![r, s, t]),
    );
    first(
        "monotonicity",
        triples()
            .find(|&(r, s, t)| r <= s && p[r][t] > p[s][t])
            .map(|(r, s, t)| vec![r, s, t]),
    );
    if violations.is_empty() {
        Ok(MonoidVerdict::Valid(DistanceMonoid {
            labels: file.elements.clone(),
            plus: file.plus.clone(),
        }))
    } else {
        Ok(MonoidVerdict::Invalid(violations))
    }
}

/// `r ⊕ s = max{x ∈ R : x ≤ r + s}` on a finite set of non-negative reals
/// containing 0. Rejected with an associativity witness when the result is
/// not a monoid.
pub fn truncated_monoid(values: &[f64]) -> Result<DistanceMonoid> {
    let mut vals: Vec<f64> = values.to_vec();
    if vals.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Malformed(
            "values must be finite and non-negative".into(),
        ));
    }
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    if vals.first() != Some(&0.0) {
        return Err(Error::Malformed("values must contain 0".into()));
    }
    let n = vals.len();
    let eps = 1e-9 * vals[n - 1].max(1.0);
    let plus = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .rev()
                        .find(|&x| vals[x] <= vals[i] + vals[j] + eps)
                        .unwrap_or(0)
                })
                .collect()
        })
        .collect();
    let file = MonoidFile {
        elements: vals.iter().map(|v| format!("{v}")).collect(),
        plus,
    };
    match check_monoid(&file)? {
        MonoidVerdict::Valid(m) => Ok(m),
        MonoidVerdict::Invalid(v) => {
            let first = v.into_iter().next().expect("nonempty");
            Err(Error::Axiom {
                axiom: first.axiom.into(),
                witness: first.witness,
            })
        }
    }
}

impl DistanceMonoid {
    pub fn from_file(file: &MonoidFile) -> Result<Self> {
        match check_monoid(file)? {
            MonoidVerdict::Valid(m) => Ok(m),
            MonoidVerdict::Invalid(v) => {
                let first = v.into_iter().next().expect("nonempty");
                Err(Error::Axiom {
                    axiom: first.axiom.into(),
                    witness: first.witness,
                })
            }
        }
    }

    pub fn to_file(&self) -> MonoidFile {
        MonoidFile {
            elements: self.labels.clone(),
            plus: self.plus.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn max(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, r: usize) -> &str {
        &self.labels[r]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn plus(&self, r: usize, s: usize) -> usize {
        self.plus[r][s]
    }

    /// `2r`, i.e. `r ⊕ r`.
    #[inline]
    pub fn double(&self, r: usize) -> usize {
        self.plus[r][r]
    }

    /// For all `r ≤ s`: `r ⊕ r ⊕ s = r ⊕ s`.
    pub fn is_simple(&self) -> bool {
        self.simplicity_witness().is_none()
    }

    pub fn simplicity_witness(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|r| (r..n).map(move |s| (r, s)))
            .find(|&(r, s)| self.plus(self.double(r), s) != self.plus(r, s))
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&r| self.double(r) == r).collect()
    }

    pub fn su_rank(&self) -> usize {
        self.idempotents()
            .into_iter()
            .filter(|&r| r != self.max())
            .count()
    }

    /// Non-maximal idempotents in descending order; ends with 0 unless empty.
    pub fn coordinatization_chain(&self) -> Vec<usize> {
        let mut chain: Vec<usize> = self
            .idempotents()
            .into_iter()
            .filter(|&r| r != self.max())
            .collect();
        chain.reverse();
        chain
    }

    /// Relation name used for "distance is exactly `r`" in metric structures.
    pub fn relation_name(&self, r: usize) -> String {
        format!("d={}", self.labels[r])
    }

    /// One binary relation per nonzero distance.
    pub fn signature(&self) -> Signature {
        let names: Vec<String> = (1..self.len()).map(|r| self.relation_name(r)).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Signature::binary(&refs)
    }

    /// Atomic type of a pair at distance `r > 0` in the metric signature.
    pub fn pair_type(&self, r: usize) -> crate::atp::AtomicType {
        let mut s = FinStructure::new(self.signature(), 2);
        let rel = s
            .rel_index(&self.relation_name(r))
            .expect("relation exists");
        s.set(rel, &[0, 1], true);
        s.set(rel, &[1, 0], true);
        atp(&s, &[0, 1], &[]).expect("in range")
    }

    /// `d(x, y) ≤ r` for each idempotent `r`, largest first.
    pub fn definable_equivalences(&self) -> Vec<EquivRelDescriptor> {
        let mut out: Vec<EquivRelDescriptor> = self
            .idempotents()
            .into_iter()
            .map(|r| {
                let accepted = (1..=r).map(|t| self.pair_type(t)).collect();
                EquivRelDescriptor::new(format!("d_{}", self.labels[r]), accepted)
            })
            .collect();
        out.reverse();
        out
    }
}
