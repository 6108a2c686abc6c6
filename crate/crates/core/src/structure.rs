//! Finite binary relational structures and their JSON file format.
//!
//! The universe of a [`FinStructure`] is always `0..size`. Relations are
//! stored densely (a bit per element for unary relations, a bit per ordered
//! pair for binary ones), which keeps membership queries O(1) for the
//! exhaustive searches built on top of this module.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

impl RelationSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self {
            name: name.into(),
            arity,
        }
    }
}

/// A relational vocabulary with unary and binary symbols only.
///
/// Symbols are kept sorted by name, so the index of a symbol is stable and
/// two signatures with the same symbols compare equal regardless of the
/// order they were declared in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    relations: Vec<RelationSymbol>,
}

impl Signature {
    pub fn new(relations: impl IntoIterator<Item = RelationSymbol>) -> Result<Self> {
        let mut relations: Vec<RelationSymbol> = relations.into_iter().collect();
        relations.sort();
        for rel in &relations {
            if rel.arity != 1 && rel.arity != 2 {
                return Err(Error::BadArity {
                    name: rel.name.clone(),
                    arity: rel.arity,
                });
            }
        }
        for pair in relations.windows(2) {
            if pair[0].name == pair[1].name {
                return Err(Error::DuplicateRelation(pair[0].name.clone()));
            }
        }
        Ok(Self { relations })
    }

    /// Shorthand for a signature made only of binary symbols.
    pub fn binary(names: &[&str]) -> Self {
        Self::new(names.iter().map(|n| RelationSymbol::new(*n, 2))).expect("valid binary signature")
    }

    pub fn relations(&self) -> &[RelationSymbol] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations
            .binary_search_by(|r| r.name.as_str().cmp(name))
            .ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Table {
    Unary(Vec<bool>),
    Binary(Vec<bool>),
}

/// A finite structure over a binary [`Signature`] with universe `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinStructure {
    signature: Signature,
    size: usize,
    tables: Vec<Table>,
}

impl FinStructure {
    /// An empty-relation structure of the given size.
    pub fn new(signature: Signature, size: usize) -> Self {
        let tables = signature
            .relations()
            .iter()
            .map(|r| match r.arity {
                1 => Table::Unary(vec![false; size]),
                _ => Table::Binary(vec![false; size * size]),
            })
            .collect();
        Self {
            signature,
            size,
            tables,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn check_element(&self, e: usize) -> Result<()> {
        if e < self.size {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                index: e,
                size: self.size,
            })
        }
    }

    pub fn rel_index(&self, name: &str) -> Result<usize> {
        self.signature
            .index_of(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))
    }

    /// Sets a tuple of relation `rel` (by index). Panics on a width mismatch;
    /// builders use this internally with tuples they constructed themselves.
    pub fn set(&mut self, rel: usize, tuple: &[usize], value: bool) {
        let n = self.size;
        match &mut self.tables[rel] {
            Table::Unary(bits) => {
                assert_eq!(tuple.len(), 1);
                bits[tuple[0]] = value;
            }
            Table::Binary(bits) => {
                assert_eq!(tuple.len(), 2);
                bits[tuple[0] * n + tuple[1]] = value;
            }
        }
    }

    pub fn insert(&mut self, name: &str, tuple: &[usize]) -> Result<()> {
        let rel = self.rel_index(name)?;
        if tuple.len() != self.signature.relations()[rel].arity {
            return Err(Error::TupleWidth {
                name: name.to_string(),
                tuple: tuple.to_vec(),
            });
        }
        for &e in tuple {
            self.check_element(e)?;
        }
        self.set(rel, tuple, true);
        Ok(())
    }

    #[inline]
    pub fn holds1(&self, rel: usize, x: usize) -> bool {
        match &self.tables[rel] {
            Table::Unary(bits) => bits[x],
            Table::Binary(_) => false,
        }
    }

    #[inline]
    pub fn holds2(&self, rel: usize, x: usize, y: usize) -> bool {
        match &self.tables[rel] {
            Table::Binary(bits) => bits[x * self.size + y],
            Table::Unary(_) => false,
        }
    }

    pub fn holds(&self, name: &str, tuple: &[usize]) -> Result<bool> {
        let rel = self.rel_index(name)?;
        for &e in tuple {
            self.check_element(e)?;
        }
        Ok(match tuple {
            [x] => self.holds1(rel, *x),
            [x, y] => self.holds2(rel, *x, *y),
            _ => {
                return Err(Error::TupleWidth {
                    name: name.to_string(),
                    tuple: tuple.to_vec(),
                })
            }
        })
    }

    pub fn arity(&self, rel: usize) -> usize {
        self.signature.relations()[rel].arity
    }

    /// All tuples of relation `rel` in lexicographic order.
    pub fn tuples(&self, rel: usize) -> Vec<Vec<usize>> {
        let n = self.size;
        match &self.tables[rel] {
            Table::Unary(bits) => (0..n).filter(|&x| bits[x]).map(|x| vec![x]).collect(),
            Table::Binary(bits) => (0..n * n)
                .filter(|&i| bits[i])
                .map(|i| vec![i / n, i % n])
                .collect(),
        }
    }

    /// The substructure induced on `elements`, renumbered in the given order.
    pub fn induced(&self, elements: &[usize]) -> Result<FinStructure> {
        for &e in elements {
            self.check_element(e)?;
        }
        let mut sub = FinStructure::new(self.signature.clone(), elements.len());
        for rel in 0..self.signature.len() {
            for (i, &x) in elements.iter().enumerate() {
                if self.arity(rel) == 1 {
                    if self.holds1(rel, x) {
                        sub.set(rel, &[i], true);
                    }
                    continue;
                }
                for (j, &y) in elements.iter().enumerate() {
                    if self.holds2(rel, x, y) {
                        sub.set(rel, &[i, j], true);
                    }
                }
            }
        }
        Ok(sub)
    }

    pub fn to_file(&self) -> StructureFile {
        let relations = self
            .signature
            .relations()
            .iter()
            .enumerate()
            .map(|(i, r)| (r.name.clone(), self.tuples(i)))
            .collect();
        StructureFile {
            signature: self.signature.relations().to_vec(),
            size: self.size,
            relations,
        }
    }

    pub fn from_file(file: StructureFile) -> Result<Self> {
        let signature = Signature::new(file.signature)?;
        let mut s = FinStructure::new(signature, file.size);
        for (name, tuples) in &file.relations {
            for t in tuples {
                s.insert(name, t)?;
            }
        }
        Ok(s)
    }

    /// Compact JSON with relation names and tuples in lexicographic order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("structure serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }
}

/// On-disk form: `{"signature":[..], "size": n, "relations": {"P": [[0,1], ..]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFile {
    pub signature: Vec<RelationSymbol>,
    pub size: usize,
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FinStructure {
        let sig =
            Signature::new([RelationSymbol::new("Q", 2), RelationSymbol::new("F", 1)]).unwrap();
        let mut s = FinStructure::new(sig, 3);
        s.insert("Q", &[2, 0]).unwrap();
        s.insert("Q", &[0, 1]).unwrap();
        s.insert("F", &[1]).unwrap();
        s
    }

    #[test]
    fn json_is_sorted_and_round_trips() {
        let s = sample();
        let text = s.to_json();
        assert_eq!(
            text,
            r#"{"signature":[{"name":"F","arity":1},{"name":"Q","arity":2}],"size":3,"relations":{"F":[[1]],"Q":[[0,1],[2,0]]}}"#
        );
        let back = FinStructure::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Signature::new([RelationSymbol::new("T", 3)]),
            Err(Error::BadArity { .. })
        ));
        assert!(matches!(
            Signature::new([RelationSymbol::new("E", 2), RelationSymbol::new("E", 1)]),
            Err(Error::DuplicateRelation(_))
        ));
        let mut s = sample();
        assert!(matches!(
            s.insert("Q", &[0, 3]),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            s.insert("F", &[0, 1]),
            Err(Error::TupleWidth { .. })
        ));
        assert!(matches!(
            s.insert("Z", &[0]),
            Err(Error::UnknownRelation(_))
        ));
    }

    #[test]
    fn induced_renumbers() {
        let s = sample();
        let sub = s.induced(&[2, 0]).unwrap();
        assert!(sub.holds("Q", &[0, 1]).unwrap());
        assert!(!sub.holds("F", &[0]).unwrap());
    }
}
