//! Strong embeddings between finite structures.
//!
//! The search assigns the elements of the source in index order and tries
//! target candidates in increasing order, so results come out in
//! lexicographic order of the image vectors. Candidate domains are pruned by
//! forward checking after every assignment.

use crate::error::{Error, Result};
use crate::structure::FinStructure;

/// All strong embeddings `a -> b`, up to `limit` of them.
pub fn find_embeddings(
    a: &FinStructure,
    b: &FinStructure,
    limit: usize,
) -> Result<Vec<Vec<usize>>> {
    embeddings_with(a, b, &[], limit)
}

/// Strong embeddings `a -> b` that extend the partial map `fixed`.
pub fn embeddings_with(
    a: &FinStructure,
    b: &FinStructure,
    fixed: &[(usize, usize)],
    limit: usize,
) -> Result<Vec<Vec<usize>>> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch);
    }
    for &(x, y) in fixed {
        a.check_element(x)?;
        b.check_element(y)?;
    }
    let mut search = Search {
        a,
        b,
        limit,
        found: Vec::new(),
        assignment: vec![usize::MAX; a.size()],
    };
    let mut domains: Vec<Vec<usize>> = (0..a.size())
        .map(|x| {
            (0..b.size())
                .filter(|&y| search.locally_compatible(x, y))
                .collect()
        })
        .collect();
    for &(x, y) in fixed {
        domains[x].retain(|&c| c == y);
    }
    if limit > 0 {
        search.run(0, domains);
    }
    Ok(search.found)
}

/// An automorphism of `s` sending `from[i]` to `to[i]`, if one exists.
pub fn automorphism_mapping(
    s: &FinStructure,
    from: &[usize],
    to: &[usize],
) -> Result<Option<Vec<usize>>> {
    if from.len() != to.len() {
        return Err(Error::Malformed("tuples of different length".into()));
    }
    let fixed: Vec<(usize, usize)> = from.iter().copied().zip(to.iter().copied()).collect();
    Ok(embeddings_with(s, s, &fixed, 1)?.into_iter().next())
}

/// Whether `map` (indexed by elements of `a`) is a strong embedding into `b`.
pub fn is_strong_embedding(a: &FinStructure, b: &FinStructure, map: &[usize]) -> bool {
    if map.len() != a.size() || a.signature() != b.signature() {
        return false;
    }
    for (i, &x) in map.iter().enumerate() {
        if x >= b.size() || map[..i].contains(&x) {
            return false;
        }
    }
    for rel in 0..a.signature().len() {
        for x in 0..a.size() {
            if a.arity(rel) == 1 {
                if a.holds1(rel, x) != b.holds1(rel, map[x]) {
                    return false;
                }
                continue;
            }
            for y in 0..a.size() {
                if a.holds2(rel, x, y) != b.holds2(rel, map[x], map[y]) {
                    return false;
                }
            }
        }
    }
    true
}

struct Search<'s> {
    a: &'s FinStructure,
    b: &'s FinStructure,
    limit: usize,
    found: Vec<Vec<usize>>,
    assignment: Vec<usize>,
}

impl Search<'_> {
    /// Unary facts and loops must agree.
    fn locally_compatible(&self, x: usize, y: usize) -> bool {
        (0..self.a.signature().len()).all(|rel| {
            if self.a.arity(rel) == 1 {
                self.a.holds1(rel, x) == self.b.holds1(rel, y)
            } else {
                self.a.holds2(rel, x, x) == self.b.holds2(rel, y, y)
            }
        })
    }

    fn pair_compatible(&self, x: usize, y: usize, x2: usize, y2: usize) -> bool {
        if y == y2 {
            return false;
        }
        (0..self.a.signature().len()).all(|rel| {
            self.a.arity(rel) == 1
                || (self.a.holds2(rel, x, x2) == self.b.holds2(rel, y, y2)
                    && self.a.holds2(rel, x2, x) == self.b.holds2(rel, y2, y))
        })
    }

    fn run(&mut self, level: usize, domains: Vec<Vec<usize>>) {
        if level == self.a.size() {
            self.found.push(self.assignment.clone());
            return;
        }
        for &y in &domains[level] {
            let mut next = domains.clone();
            let mut wiped = false;
            for (x2, dom) in next.iter_mut().enumerate().skip(level + 1) {
                dom.retain(|&y2| self.pair_compatible(level, y, x2, y2));
                if dom.is_empty() {
                    wiped = true;
                    break;
                }
            }
            if wiped {
                continue;
            }
            self.assignment[level] = y;
            self.run(level + 1, next);
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Signature;

    pub(crate) fn graph(n: usize, edges: &[(usize, usize)]) -> FinStructure {
        let mut s = FinStructure::new(Signature::binary(&["E"]), n);
        for &(x, y) in edges {
            s.insert("E", &[x, y]).unwrap();
            s.insert("E", &[y, x]).unwrap();
        }
        s
    }

    #[test]
    fn point_into_three_points() {
        let a = graph(1, &[]);
        let b = graph(3, &[]);
        assert_eq!(find_embeddings(&a, &b, usize::MAX).unwrap().len(), 3);
    }

    #[test]
    fn edge_into_triangle() {
        let a = graph(2, &[(0, 1)]);
        let b = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let all = find_embeddings(&a, &b, usize::MAX).unwrap();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 2],
                vec![2, 0],
                vec![2, 1]
            ]
        );
        assert!(all.iter().all(|m| is_strong_embedding(&a, &b, m)));
    }

    #[test]
    fn strong_means_non_edges_preserved() {
        let a = graph(2, &[]);
        let b = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(find_embeddings(&a, &b, usize::MAX).unwrap().is_empty());
    }

    #[test]
    fn limit_and_signature_mismatch() {
        let a = graph(1, &[]);
        let b = graph(3, &[]);
        assert_eq!(find_embeddings(&a, &b, 2).unwrap().len(), 2);
        let c = FinStructure::new(Signature::binary(&["P"]), 3);
        assert!(matches!(
            find_embeddings(&a, &c, 1),
            Err(Error::SignatureMismatch)
        ));
    }

    #[test]
    fn automorphisms_of_a_path() {
        let p = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(
            automorphism_mapping(&p, &[0], &[2]).unwrap(),
            Some(vec![2, 1, 0])
        );
        assert_eq!(automorphism_mapping(&p, &[0], &[1]).unwrap(), None);
    }
}
