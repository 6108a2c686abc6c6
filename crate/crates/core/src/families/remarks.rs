//! Two non-homogeneous graphs on 2-element sets, adjacent when they meet
//! in exactly one point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{FinStructure, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Remark {
    /// All 2-subsets of `{1..n}`.
    #[serde(rename = "4.1")]
    R41,
    /// Pairs `{even, odd}` from `{1..n}`.
    #[serde(rename = "4.6")]
    R46,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemarkFixture {
    pub structure: FinStructure,
    /// The 2-set behind each vertex.
    pub labels: Vec<[usize; 2]>,
    /// Two tuples with the same atomic type and different types.
    pub witnesses: (Vec<usize>, Vec<usize>),
}

impl RemarkFixture {
    pub fn vertex(&self, pair: [usize; 2]) -> Option<usize> {
        let key = [pair[0].min(pair[1]), pair[0].max(pair[1])];
        self.labels.iter().position(|&l| l == key)
    }
}

pub fn remark_fixture(which: Remark, ground: usize) -> Result<RemarkFixture> {
    let min = match which {
        Remark::R41 => 4,
        Remark::R46 => 8,
    };
    if ground < min {
        return Err(Error::Malformed(format!(
            "ground size {ground} is below {min}"
        )));
    }
    let labels: Vec<[usize; 2]> = (1..=ground)
        .flat_map(|u| (u + 1..=ground).map(move |v| [u, v]))
        .filter(|&[u, v]| which == Remark::R41 || (u + v) % 2 == 1)
        .collect();
    let mut structure = FinStructure::new(Signature::binary(&["E"]), labels.len());
    for (x, a) in labels.iter().enumerate() {
        for (y, b) in labels.iter().enumerate() {
            let shared = a.iter().filter(|u| b.contains(u)).count();
            structure.set(0, &[x, y], shared == 1);
        }
    }
    let tuples: (&[[usize; 2]], &[[usize; 2]]) = match which {
        Remark::R41 => (&[[1, 2], [2, 3], [1, 3]], &[[1, 2], [1, 3], [1, 4]]),
        Remark::R46 => (
            &[[1, 2], [1, 4], [3, 6], [3, 8]],
            &[[1, 2], [1, 4], [3, 6], [5, 6]],
        ),
    };
    let index = |ps: &[[usize; 2]]| -> Vec<usize> {
        ps.iter()
            .map(|p| {
                labels
                    .iter()
                    .position(|l| l == p)
                    .expect("pair in ground set")
            })
            .collect()
    };
    let witnesses = (index(tuples.0), index(tuples.1));
    Ok(RemarkFixture {
        structure,
        labels,
        witnesses,
    })
}
