//! One entry point for the saturating builders of every family.

use crate::distmonoid::{build_urysohn, DistanceMonoid};
use crate::error::{Error, Result};
use crate::families::{build_bipede, build_omegapede, Crosscut, CrosscutSpec};
use crate::structure::FinStructure;

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyHandle {
    /// Metric spaces over a distance monoid; `max_size` caps the search.
    Urysohn {
        monoid: DistanceMonoid,
        max_size: usize,
    },
    Bipede,
    /// `cell_size` F-points in each of the two cells of a class.
    Omegapede {
        cell_size: usize,
    },
    Crosscut,
}

impl FamilyHandle {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyHandle::Urysohn { .. } => "urysohn",
            FamilyHandle::Bipede => "bipede",
            FamilyHandle::Omegapede { .. } => "omegapede",
            FamilyHandle::Crosscut => "crosscut",
        }
    }
}

/// Builds a fragment with the `(k, m)`-extension property of the family.
///
/// `n` is the number of points for Urysohn spaces, the number of feet whose
/// patterns are saturated for bipedes, the number of classes and of points
/// for ω-pedes, and a lower bound on the size for crosscuts (whose side
/// length is at least `k + m`).
pub fn generic_extend(family: &FamilyHandle, n: usize, k: usize, m: usize) -> Result<FinStructure> {
    if k == 0 || m == 0 {
        return Err(Error::Malformed("k and m must be at least 1".into()));
    }
    Ok(match family {
        FamilyHandle::Urysohn { monoid, max_size } => {
            build_urysohn(monoid, n, k, m, *max_size)?.to_structure()
        }
        FamilyHandle::Bipede => build_bipede(n, k, m).to_structure(),
        FamilyHandle::Omegapede { cell_size } => {
            build_omegapede(n, *cell_size, n, k, m).to_structure()
        }
        FamilyHandle::Crosscut => {
            let mut side = k + m;
            while side * side * side < n {
                side += 1;
            }
            Crosscut::build(CrosscutSpec {
                n_p: side,
                n_q: side,
                cell: side,
            })
            .to_structure()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipede_feet_have_both_colours() {
        let s = generic_extend(&FamilyHandle::Bipede, 10, 1, 3).unwrap();
        let (l, b) = (s.rel_index("L").unwrap(), s.rel_index("B").unwrap());
        let bodies: Vec<usize> = (0..s.size())
            .filter(|&x| !s.holds1(s.rel_index("F").unwrap(), x))
            .collect();
        for a in 0..10 {
            let joined: Vec<usize> = bodies
                .iter()
                .copied()
                .filter(|&x| s.holds2(l, x, a))
                .collect();
            let blue = joined.iter().filter(|&&x| s.holds2(b, x, a)).count();
            assert!(blue >= 3 && joined.len() - blue >= 3);
        }
    }

    #[test]
    fn deterministic() {
        for h in [
            FamilyHandle::Bipede,
            FamilyHandle::Omegapede { cell_size: 2 },
            FamilyHandle::Crosscut,
        ] {
            let a = generic_extend(&h, 4, 1, 2).unwrap().to_json();
            assert_eq!(
                a,
                generic_extend(&h, 4, 1, 2).unwrap().to_json(),
                "{}",
                h.name()
            );
        }
    }

    #[test]
    fn rejects_level_zero() {
        assert!(generic_extend(&FamilyHandle::Bipede, 4, 0, 2).is_err());
    }
}
