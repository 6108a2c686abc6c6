//! Definable equivalence relations: descriptors, evaluation, and discovery.
//!
//! Discovery works on the atomic 2-types realized by distinct pairs. Each
//! type is grouped with its transpose; a union of such groups (plus the
//! diagonal) is symmetric and reflexive by construction, and it is
//! transitive on the structure exactly when it is closed under the
//! composition table of realized triples. Closed unions are enumerated with
//! Ganter's NextClosure, so the cost is proportional to the number of
//! closed sets rather than to all subsets.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::atp::{atp, AtomicType};
use crate::error::Result;
use crate::structure::FinStructure;

/// A binary relation given as the diagonal plus a union of atomic 2-types.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EquivRelDescriptor {
    pub name: String,
    pub accepted: Vec<AtomicType>,
}

impl EquivRelDescriptor {
    pub fn new(name: impl Into<String>, mut accepted: Vec<AtomicType>) -> Self {
        accepted.sort();
        accepted.dedup();
        Self {
            name: name.into(),
            accepted,
        }
    }

    pub fn relates(&self, s: &FinStructure, x: usize, y: usize) -> Result<bool> {
        if x == y {
            s.check_element(x)?;
            return Ok(true);
        }
        let t = atp(s, &[x, y], &[])?;
        Ok(self.accepted.binary_search(&t).is_ok())
    }

    /// The matrix of the relation on `s`.
    pub fn matrix(&self, s: &FinStructure) -> Result<Vec<Vec<bool>>> {
        let n = s.size();
        let mut m = vec![vec![false; n]; n];
        for (x, row) in m.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                *cell = self.relates(s, x, y)?;
            }
        }
        Ok(m)
    }

    /// Classes on `s` when the relation is an equivalence there, `None` otherwise.
    pub fn classes(&self, s: &FinStructure) -> Result<Option<Vec<Vec<usize>>>> {
        Ok(partition_of(&self.matrix(s)?))
    }
}

/// Classes of an equivalence relation given as a matrix, or `None` if the
/// matrix is not reflexive, symmetric and transitive.
pub fn partition_of(m: &[Vec<bool>]) -> Option<Vec<Vec<usize>>> {
    let n = m.len();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if !m[x][x] {
            return None;
        }
        if class_of[x] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&y| m[x][y]).collect();
        for &y in &members {
            if class_of[y] != usize::MAX || !m[y][x] {
                return None;
            }
            class_of[y] = classes.len();
        }
        classes.push(members);
    }
    // Transitivity: every related pair must lie in one class and classes are cliques.
    for x in 0..n {
        for y in 0..n {
            if m[x][y] != (class_of[x] == class_of[y]) {
                return None;
            }
        }
    }
    Some(classes)
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn empty(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64).max(1)])
    }
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn insert(&mut self, i: usize) -> bool {
        let had = self.contains(i);
        self.0[i / 64] |= 1 << (i % 64);
        !had
    }
    fn union_with(&mut self, other: &BitSet) -> bool {
        let mut changed = false;
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            let next = *a | *b;
            changed |= next != *a;
            *a = next;
        }
        changed
    }
    fn iter(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..n).filter(|&i| self.contains(i))
    }
    fn prefix(&self, i: usize, n: usize) -> BitSet {
        let mut out = BitSet::empty(n);
        for j in self.iter(i) {
            out.insert(j);
        }
        out
    }
}

struct TypeTable {
    /// Symmetric groups of realized pair types, each with its pair count.
    groups: Vec<(Vec<AtomicType>, usize)>,
    /// comp[g][h]: groups realized by (x, z) when (x, y) is in g and (y, z) in h.
    comp: Vec<Vec<BitSet>>,
}

fn type_table(s: &FinStructure) -> Result<TypeTable> {
    let n = s.size();
    let mut ids: BTreeMap<AtomicType, usize> = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            if x != y {
                ids.entry(atp(s, &[x, y], &[])?).or_insert(0);
            }
        }
    }
    for (i, v) in ids.values_mut().enumerate() {
        *v = i;
    }
    let mut pair = vec![usize::MAX; n * n];
    for x in 0..n {
        for y in 0..n {
            if x != y {
                pair[x * n + y] = ids[&atp(s, &[x, y], &[])?];
            }
        }
    }
    // Group each type with its transpose.
    let mut group_of_type = vec![usize::MAX; ids.len()];
    let mut groups: Vec<(Vec<AtomicType>, usize)> = Vec::new();
    let types: Vec<&AtomicType> = ids.keys().collect();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let (p, q) = (pair[x * n + y], pair[y * n + x]);
            if group_of_type[p] == usize::MAX {
                let g = if group_of_type[q] != usize::MAX {
                    group_of_type[q]
                } else {
                    groups.len()
                };
                if g == groups.len() {
                    groups.push((Vec::new(), 0));
                }
                group_of_type[p] = g;
                groups[g].0.push(types[p].clone());
            }
            groups[group_of_type[p]].1 += 1;
        }
    }
    let gcount = groups.len();
    let mut comp = vec![vec![BitSet::empty(gcount); gcount]; gcount];
    let g = |x: usize, y: usize| group_of_type[pair[x * n + y]];
    for y in 0..n {
        for x in 0..n {
            if x == y {
                continue;
            }
            let gx = g(x, y);
            for z in 0..n {
                if z == y || z == x {
                    continue;
                }
                let target = g(x, z);
                comp[gx][g(y, z)].insert(target);
            }
        }
    }
    for (types, _) in &mut groups {
        types.sort();
    }
    Ok(TypeTable { groups, comp })
}

fn closure(table: &TypeTable, seed: &BitSet) -> BitSet {
    let n = table.groups.len();
    let mut set = seed.clone();
    loop {
        let members: Vec<usize> = set.iter(n).collect();
        let mut changed = false;
        for &p in &members {
            for &q in &members {
                changed |= set.union_with(&table.comp[p][q]);
            }
        }
        if !changed {
            return set;
        }
    }
}

/// Unions of atomic 2-types that are nontrivial equivalence relations on
/// `s`: at least two classes and at least one class with two elements.
/// Results hold on this structure only and are ordered by the number of
/// related pairs.
pub fn discover_equiv_relations(s: &FinStructure) -> Result<Vec<EquivRelDescriptor>> {
    let table = type_table(s)?;
    let n = table.groups.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut closed_sets = Vec::new();
    let mut current = closure(&table, &BitSet::empty(n));
    closed_sets.push(current.clone());
    'next: loop {
        for i in (0..n).rev() {
            if current.contains(i) {
                continue;
            }
            let mut seed = current.prefix(i, n);
            seed.insert(i);
            let candidate = closure(&table, &seed);
            if candidate.prefix(i, n) == current.prefix(i, n) {
                current = candidate;
                closed_sets.push(current.clone());
                continue 'next;
            }
        }
        break;
    }
    let mut found: Vec<(usize, Vec<AtomicType>)> = closed_sets
        .into_iter()
        .filter(|set| {
            let k = set.iter(n).count();
            k > 0 && k < n
        })
        .map(|set| {
            let pairs = set.iter(n).map(|g| table.groups[g].1).sum();
            let accepted = set
                .iter(n)
                .flat_map(|g| table.groups[g].0.iter().cloned())
                .collect();
            (pairs, accepted)
        })
        .collect();
    found.sort();
    Ok(found
        .into_iter()
        .enumerate()
        .map(|(i, (_, accepted))| EquivRelDescriptor::new(format!("E{i}"), accepted))
        .collect())
}

/// Keys each element by its class under every relation, for quick
/// extensional comparison in tests and reports.
pub fn class_signature(s: &FinStructure, rels: &[EquivRelDescriptor]) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for r in rels {
        let classes = r.classes(s)?.unwrap_or_default();
        let mut label: HashMap<usize, usize> = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                label.insert(x, i);
            }
        }
        out.push(
            (0..s.size())
                .map(|x| label.get(&x).copied().unwrap_or(usize::MAX))
                .collect(),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{RelationSymbol, Signature};

    #[test]
    fn unary_colouring_and_empty_signature() {
        let sig = Signature::new([RelationSymbol::new("U", 1)]).unwrap();
        let mut s = FinStructure::new(sig, 4);
        s.insert("U", &[0]).unwrap();
        s.insert("U", &[1]).unwrap();
        // Both in U, both outside U, and same colour.
        let rels = discover_equiv_relations(&s).unwrap();
        assert_eq!(rels.len(), 3);
        assert_eq!(
            rels[2].classes(&s).unwrap(),
            Some(vec![vec![0, 1], vec![2, 3]])
        );
        // With no relations only the trivial ones are definable.
        let bare = FinStructure::new(Signature::default(), 4);
        assert!(discover_equiv_relations(&bare).unwrap().is_empty());
    }

    #[test]
    fn single_equivalence_is_found() {
        let mut s = FinStructure::new(Signature::binary(&["E"]), 4);
        for (x, y) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            s.insert("E", &[x, y]).unwrap();
        }
        let rels = discover_equiv_relations(&s).unwrap();
        assert_eq!(rels.len(), 1);
        assert_eq!(
            rels[0].classes(&s).unwrap(),
            Some(vec![vec![0, 1], vec![2, 3]])
        );
    }

    #[test]
    fn partition_rejects_non_transitive() {
        let m = vec![
            vec![true, true, false],
            vec![true, true, true],
            vec![false, true, true],
        ];
        assert!(partition_of(&m).is_none());
    }
}
