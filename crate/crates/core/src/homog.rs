//! Finite proxies for homogeneity and the amalgamation property.

use std::collections::HashMap;

use serde::Serialize;

use crate::atp::{atp, AtomicType};
use crate::embed::{automorphism_mapping, embeddings_with, find_embeddings};
use crate::error::{Error, Result};
use crate::structure::FinStructure;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Homogeneity {
    Homogeneous,
    /// Two tuples with the same atomic type that no automorphism links.
    Witness {
        left: Vec<usize>,
        right: Vec<usize>,
    },
}

impl Homogeneity {
    pub fn is_homogeneous(&self) -> bool {
        matches!(self, Homogeneity::Homogeneous)
    }
}

/// Checks that every isomorphism between substructures of size `<= k`
/// extends to an automorphism. Tuples are visited shortest first and in
/// lexicographic order; each is compared against the first tuple seen with
/// the same atomic type, so the reported witness is minimal in that order.
pub fn is_homogeneous_upto(s: &FinStructure, k: usize) -> Result<Homogeneity> {
    if k > s.size() {
        return Err(Error::Malformed(format!(
            "k = {k} exceeds the structure size {}",
            s.size()
        )));
    }
    for len in 1..=k {
        let mut reps: HashMap<AtomicType, Vec<usize>> = HashMap::new();
        let mut tuple = Vec::with_capacity(len);
        if let Some(w) = scan(s, len, &mut tuple, &mut reps)? {
            return Ok(w);
        }
    }
    Ok(Homogeneity::Homogeneous)
}

fn scan(
    s: &FinStructure,
    len: usize,
    tuple: &mut Vec<usize>,
    reps: &mut HashMap<AtomicType, Vec<usize>>,
) -> Result<Option<Homogeneity>> {
    if tuple.len() == len {
        let ty = atp(s, tuple, &[])?;
        match reps.get(&ty) {
            None => {
                reps.insert(ty, tuple.clone());
            }
            Some(rep) => {
                if automorphism_mapping(s, rep, tuple)?.is_none() {
                    return Ok(Some(Homogeneity::Witness {
                        left: rep.clone(),
                        right: tuple.clone(),
                    }));
                }
            }
        }
        return Ok(None);
    }
    for x in 0..s.size() {
        if tuple.contains(&x) {
            continue;
        }
        tuple.push(x);
        let found = scan(s, len, tuple, reps)?;
        tuple.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// A span `B1 <- A -> B2` with no amalgam among the supplied instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmalgamationFailure {
    pub base: usize,
    pub left: usize,
    pub right: usize,
    pub left_embedding: Vec<usize>,
    pub right_embedding: Vec<usize>,
}

/// Searches `instances` for amalgams of every span over structures of size
/// `<= k`. Amalgams may identify points outside the image of the base.
pub fn amalgamation_check(
    instances: &[FinStructure],
    k: usize,
) -> Result<Vec<AmalgamationFailure>> {
    if let Some(first) = instances.first() {
        if instances.iter().any(|s| s.signature() != first.signature()) {
            return Err(Error::SignatureMismatch);
        }
    }
    let small: Vec<usize> = (0..instances.len())
        .filter(|&i| instances[i].size() <= k)
        .collect();
    let mut failures = Vec::new();
    for &ai in &small {
        let a = &instances[ai];
        for &l in &small {
            let left_maps = find_embeddings(a, &instances[l], usize::MAX)?;
            if left_maps.is_empty() {
                continue;
            }
            for &r in small.iter().filter(|&&r| r >= l) {
                let right_maps = find_embeddings(a, &instances[r], usize::MAX)?;
                for f1 in &left_maps {
                    for f2 in &right_maps {
                        if !has_amalgam(instances, &instances[l], &instances[r], f1, f2)? {
                            failures.push(AmalgamationFailure {
                                base: ai,
                                left: l,
                                right: r,
                                left_embedding: f1.clone(),
                                right_embedding: f2.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(failures)
}

fn has_amalgam(
    instances: &[FinStructure],
    b1: &FinStructure,
    b2: &FinStructure,
    f1: &[usize],
    f2: &[usize],
) -> Result<bool> {
    for c in instances {
        if c.size() < b1.size().max(b2.size()) {
            continue;
        }
        for g1 in find_embeddings(b1, c, usize::MAX)? {
            let fixed: Vec<(usize, usize)> =
                f2.iter().zip(f1).map(|(&y2, &y1)| (y2, g1[y1])).collect();
            if !embeddings_with(b2, c, &fixed, 1)?.is_empty() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Signature;

    fn complete(n: usize) -> FinStructure {
        let mut s = FinStructure::new(Signature::binary(&["E"]), n);
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    s.insert("E", &[x, y]).unwrap();
                }
            }
        }
        s
    }

    /// Every labelled graph on `n` vertices.
    pub(crate) fn all_graphs(n: usize) -> Vec<FinStructure> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .collect();
        (0..1usize << pairs.len())
            .map(|mask| {
                let mut s = FinStructure::new(Signature::binary(&["E"]), n);
                for (i, &(x, y)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        s.insert("E", &[x, y]).unwrap();
                        s.insert("E", &[y, x]).unwrap();
                    }
                }
                s
            })
            .collect()
    }

    #[test]
    fn complete_graph_is_homogeneous() {
        assert!(is_homogeneous_upto(&complete(4), 3)
            .unwrap()
            .is_homogeneous());
    }

    #[test]
    fn path_is_not_homogeneous() {
        let mut p = FinStructure::new(Signature::binary(&["E"]), 3);
        for (x, y) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
            p.insert("E", &[x, y]).unwrap();
        }
        assert_eq!(
            is_homogeneous_upto(&p, 1).unwrap(),
            Homogeneity::Witness {
                left: vec![0],
                right: vec![1]
            }
        );
    }

    #[test]
    fn k_too_large() {
        assert!(is_homogeneous_upto(&complete(2), 3).is_err());
    }

    #[test]
    fn graphs_amalgamate() {
        let instances: Vec<_> = (1..=3).flat_map(all_graphs).collect();
        assert!(amalgamation_check(&instances, 2).unwrap().is_empty());
    }

    #[test]
    fn missing_size_three_fails() {
        let instances: Vec<_> = (1..=2).flat_map(all_graphs).collect();
        assert!(!amalgamation_check(&instances, 2).unwrap().is_empty());
    }
}
