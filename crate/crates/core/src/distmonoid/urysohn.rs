//! Deterministic finite approximations of the R-Urysohn space.
//!
//! A space has the `(k, m)`-extension property when every admissible
//! one-point extension of every subset of at most `k` points is realized by
//! at least `m` points outside the subset. The builder appends one point at
//! a time: the new point realizes the first deficient demand, and each of
//! its remaining distances is the value that serves the most other
//! deficient demands (smallest value on ties). For `k >= 2` the score also
//! counts pairs `{new point, x}` still short of witnesses, otherwise the
//! newest point's own pairs are never covered and the chase does not end.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::monoid::DistanceMonoid;
use super::space::RMetricSpace;
use crate::error::{Error, Result};

/// An extension demand over `subset`: a point at `dist[i]` from `subset[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Demand {
    pub subset: Vec<usize>,
    pub dist: Vec<usize>,
}

fn triangle(m: &DistanceMonoid, x: usize, y: usize, z: usize) -> bool {
    x <= m.plus(y, z) && y <= m.plus(x, z) && z <= m.plus(x, y)
}

/// Subsets of `0..n` of size `1..=k` in size-then-lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=k.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.clone());
            let Some(i) = (0..size).rev().find(|&i| idx[i] < n - size + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// Distance vectors from a new point to `subset` that keep the space metric.
fn admissible(space: &RMetricSpace, subset: &[usize]) -> Vec<Vec<usize>> {
    let m = space.monoid();
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for (i, &a) in subset.iter().enumerate() {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 1..m.len() {
                if subset[..i]
                    .iter()
                    .zip(prefix)
                    .all(|(&b, &w)| triangle(m, v, w, space.d(a, b)))
                {
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
        }
        out = next;
    }
    out
}

fn realization_counts(space: &RMetricSpace, k: usize) -> HashMap<Demand, usize> {
    let n = space.size();
    let mut counts = HashMap::new();
    for x in 0..n {
        let others: Vec<usize> = (0..n).filter(|&y| y != x).collect();
        for pick in subsets(others.len(), k) {
            let subset: Vec<usize> = pick.iter().map(|&i| others[i]).collect();
            let dist = subset.iter().map(|&a| space.d(x, a)).collect();
            *counts.entry(Demand { subset, dist }).or_insert(0) += 1;
        }
    }
    counts
}

/// Demands with fewer than `m` realizations, in canonical order.
pub fn extension_deficits(space: &RMetricSpace, k: usize, m: usize) -> Vec<Demand> {
    let counts = realization_counts(space, k);
    let mut out = Vec::new();
    for subset in subsets(space.size(), k) {
        for dist in admissible(space, &subset) {
            let demand = Demand {
                subset: subset.clone(),
                dist,
            };
            if counts.get(&demand).copied().unwrap_or(0) < m {
                out.push(demand);
            }
        }
    }
    out
}

/// Builds a space with the `(k, m)`-extension property and at least
/// `min_size` points. Fails if that needs more than `max_size` points.
pub fn build_urysohn(
    monoid: &DistanceMonoid,
    min_size: usize,
    k: usize,
    m: usize,
    max_size: usize,
) -> Result<RMetricSpace> {
    let mut space = RMetricSpace::new(monoid.clone(), Vec::new())?;
    loop {
        let deficits = extension_deficits(&space, k, m);
        if deficits.is_empty() && space.size() >= min_size {
            return Ok(space);
        }
        if space.size() >= max_size {
            let demand = match deficits.first() {
                Some(d) => format!(
                    "point at distances {:?} from {:?}",
                    labels(monoid, &d.dist),
                    d.subset
                ),
                None => format!("{min_size} points"),
            };
            return Err(Error::Infeasible {
                limit: max_size,
                demand,
            });
        }
        let row = next_row(
            &space,
            deficits.first(),
            &deficits.iter().cloned().collect(),
            k,
            m,
        );
        space = space.with_point(&row)?;
    }
}

fn labels(m: &DistanceMonoid, d: &[usize]) -> Vec<String> {
    d.iter().map(|&r| m.label(r).to_string()).collect()
}

fn next_row(
    space: &RMetricSpace,
    forced: Option<&Demand>,
    open: &HashSet<Demand>,
    k: usize,
    m_target: usize,
) -> Vec<usize> {
    let n = space.size();
    let m = space.monoid();
    let mut row: Vec<Option<usize>> = vec![None; n];
    if let Some(d) = forced {
        for (&a, &v) in d.subset.iter().zip(&d.dist) {
            row[a] = Some(v);
        }
    }
    // seen[x][(v, w)]: points y already placed with d(p,y) = v and d(x,y) = w.
    let mut seen: Vec<HashMap<(usize, usize), usize>> = vec![HashMap::new(); n];
    let witness = |seen: &mut Vec<HashMap<(usize, usize), usize>>, y: usize, v: usize| {
        for (x, counts) in seen.iter_mut().enumerate() {
            if x != y {
                *counts.entry((v, space.d(x, y))).or_insert(0) += 1;
            }
        }
    };
    for (y, v) in row.iter().enumerate() {
        if let Some(v) = *v {
            witness(&mut seen, y, v);
        }
    }
    for y in 0..n {
        if row[y].is_some() {
            continue;
        }
        let assigned: Vec<usize> = (0..n).filter(|&x| row[x].is_some()).collect();
        let mut best: Option<(usize, usize)> = None;
        for v in 1..m.len() {
            if !assigned
                .iter()
                .all(|&x| triangle(m, v, row[x].unwrap(), space.d(x, y)))
            {
                continue;
            }
            let mut score = 0;
            for pick in
                std::iter::once(Vec::new()).chain(subsets(assigned.len(), k.saturating_sub(1)))
            {
                let mut members: Vec<(usize, usize)> = pick
                    .iter()
                    .map(|&i| (assigned[i], row[assigned[i]].unwrap()))
                    .collect();
                members.push((y, v));
                members.sort();
                let demand = Demand {
                    subset: members.iter().map(|p| p.0).collect(),
                    dist: members.iter().map(|p| p.1).collect(),
                };
                score += usize::from(open.contains(&demand));
            }
            // Pairs {new point, x} are served by y as a future witness.
            if k >= 2 {
                score += (0..n)
                    .filter(|&x| {
                        x != y && seen[x].get(&(v, space.d(x, y))).copied().unwrap_or(0) < m_target
                    })
                    .count();
            }
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, v));
            }
        }
        let (_, v) = best.expect("free amalgamation always leaves a value");
        row[y] = Some(v);
        witness(&mut seen, y, v);
    }
    row.into_iter().map(|v| v.expect("assigned")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distmonoid::truncated_monoid;

    #[test]
    fn subsets_in_order() {
        assert_eq!(
            subsets(3, 2),
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2]
            ]
        );
    }

    #[test]
    fn one_extension_saturates() {
        let m = truncated_monoid(&[0.0, 1.0, 3.0, 4.0]).unwrap();
        let s = build_urysohn(&m, 1, 1, 2, 64).unwrap();
        assert!(extension_deficits(&s, 1, 2).is_empty());
        // each point sees 3 nonzero distances at least twice
        assert!(s.size() >= 7);
    }

    #[test]
    fn cap_is_reported() {
        let m = truncated_monoid(&[0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            build_urysohn(&m, 1, 2, 3, 5),
            Err(Error::Infeasible { limit: 5, .. })
        ));
    }
}
