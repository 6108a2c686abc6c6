//! Quantifier-free (atomic) types of tuples over parameters.
//!
//! A type lists every atomic formula over its positions exactly once,
//! signed. Positions `0..width` are the free variables, positions
//! `width..width + params.len()` are the parameters. The literal list is
//! kept sorted, so two types are equal iff their literal lists are equal.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::structure::FinStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Atom {
    /// `x_i = x_j` with `i < j`.
    Eq(u32, u32),
    /// Unary relation (by signature index) at a position.
    Rel1(u32, u32),
    /// Binary relation (by signature index) at an ordered pair of positions.
    Rel2(u32, u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub atom: Atom,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomicType {
    pub width: usize,
    pub params: Vec<usize>,
    pub literals: Vec<Literal>,
}

impl AtomicType {
    /// Compares the literal lists only, ignoring which parameters were used.
    pub fn same_shape(&self, other: &AtomicType) -> bool {
        self.width == other.width && self.literals == other.literals
    }

    /// Whether position `i` is asserted equal to position `j`.
    pub fn equal_positions(&self, i: usize, j: usize) -> bool {
        if i == j {
            return true;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.literals
            .iter()
            .any(|l| l.holds && l.atom == Atom::Eq(a as u32, b as u32))
    }

    pub fn positive(&self) -> impl Iterator<Item = &Atom> {
        self.literals.iter().filter(|l| l.holds).map(|l| &l.atom)
    }
}

impl fmt::Display for AtomicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .literals
            .iter()
            .filter(|l| l.holds)
            .map(|l| match l.atom {
                Atom::Eq(i, j) => format!("x{i}=x{j}"),
                Atom::Rel1(r, i) => format!("R{r}(x{i})"),
                Atom::Rel2(r, i, j) => format!("R{r}(x{i},x{j})"),
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Atomic type of the tuple `free` over `params`.
pub fn atp(s: &FinStructure, free: &[usize], params: &[usize]) -> Result<AtomicType> {
    for &e in free.iter().chain(params) {
        s.check_element(e)?;
    }
    let positions: Vec<usize> = free.iter().chain(params).copied().collect();
    Ok(AtomicType {
        width: free.len(),
        params: params.to_vec(),
        literals: literals_of(s, &positions),
    })
}

/// Literal list for an already-validated position vector.
pub(crate) fn literals_of(s: &FinStructure, positions: &[usize]) -> Vec<Literal> {
    let k = positions.len();
    let sig = s.signature();
    let mut out = Vec::with_capacity(k * k * (sig.len() + 1));
    for i in 0..k {
        for j in i + 1..k {
            out.push(Literal {
                atom: Atom::Eq(i as u32, j as u32),
                holds: positions[i] == positions[j],
            });
        }
    }
    for rel in 0..sig.len() {
        if s.arity(rel) == 1 {
            for (i, &x) in positions.iter().enumerate() {
                out.push(Literal {
                    atom: Atom::Rel1(rel as u32, i as u32),
                    holds: s.holds1(rel, x),
                });
            }
        } else {
            for (i, &x) in positions.iter().enumerate() {
                for (j, &y) in positions.iter().enumerate() {
                    out.push(Literal {
                        atom: Atom::Rel2(rel as u32, i as u32, j as u32),
                        holds: s.holds2(rel, x, y),
                    });
                }
            }
        }
    }
    out.sort();
    out
}

/// Number of elements `x` (outside `params`) with `atp(x/params) = atp(b/params)`.
pub fn realizations(s: &FinStructure, b: usize, params: &[usize]) -> Result<usize> {
    let target = atp(s, &[b], params)?;
    let mut count = 0;
    for x in 0..s.size() {
        if params.contains(&x) {
            continue;
        }
        if atp(s, &[x], params)? == target {
            count += 1;
        }
    }
    Ok(count)
}

/// Finite stand-in for algebraicity: `b` counts as algebraic over `params`
/// when its atomic type over them has fewer than `m` realizations.
pub fn approx_algebraic(s: &FinStructure, b: usize, params: &[usize], m: usize) -> Result<bool> {
    if params.contains(&b) {
        return Ok(true);
    }
    Ok(realizations(s, b, params)? < m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Signature;

    fn two_classes() -> FinStructure {
        let mut s = FinStructure::new(Signature::binary(&["E"]), 3);
        for (x, y) in [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)] {
            s.insert("E", &[x, y]).unwrap();
        }
        s
    }

    #[test]
    fn symmetric_pairs_share_a_type() {
        let s = two_classes();
        assert_eq!(
            atp(&s, &[0, 1], &[]).unwrap(),
            atp(&s, &[1, 0], &[]).unwrap()
        );
        assert_ne!(
            atp(&s, &[0, 1], &[]).unwrap(),
            atp(&s, &[0, 2], &[]).unwrap()
        );
    }

    #[test]
    fn every_atom_appears_once() {
        let s = two_classes();
        let t = atp(&s, &[0], &[1, 2]).unwrap();
        // 3 equalities + 9 ordered pairs for E.
        assert_eq!(t.literals.len(), 3 + 9);
        let mut atoms: Vec<_> = t.literals.iter().map(|l| l.atom).collect();
        atoms.dedup();
        assert_eq!(atoms.len(), t.literals.len());
    }

    #[test]
    fn out_of_range() {
        let s = two_classes();
        assert!(atp(&s, &[3], &[]).is_err());
    }

    #[test]
    fn algebraic_approximation() {
        let s = two_classes();
        // 2 is the only element outside the E-class of 0.
        assert!(approx_algebraic(&s, 2, &[0], 2).unwrap());
        assert_eq!(realizations(&s, 1, &[0]).unwrap(), 1);
    }
}
