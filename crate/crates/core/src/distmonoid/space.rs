//! Finite R-metric spaces and the closed-form independence calculus for
//! simple distance monoids.

use serde::{Deserialize, Serialize};

use super::monoid::{DistanceMonoid, MonoidFile};
use crate::error::{Error, Result};
use crate::structure::FinStructure;

/// On-disk form: `{"monoid":{..},"size":n,"dist":[[..],..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub monoid: MonoidFile,
    pub size: usize,
    pub dist: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RMetricSpace {
    monoid: DistanceMonoid,
    dist: Vec<Vec<usize>>,
}

impl RMetricSpace {
    pub fn new(monoid: DistanceMonoid, dist: Vec<Vec<usize>>) -> Result<Self> {
        let n = dist.len();
        if dist.iter().any(|row| row.len() != n) {
            return Err(Error::Malformed(format!("distance matrix must be {n}x{n}")));
        }
        if let Some(&bad) = dist.iter().flatten().find(|&&v| v >= monoid.len()) {
            return Err(Error::Malformed(format!(
                "distance {bad} is not an element index"
            )));
        }
        let space = Self { monoid, dist };
        if let Some((axiom, w)) = space.first_violation() {
            return Err(Error::Axiom {
                axiom: axiom.into(),
                witness: w.iter().map(|x| x.to_string()).collect(),
            });
        }
        Ok(space)
    }

    fn first_violation(&self) -> Option<(&'static str, Vec<usize>)> {
        let n = self.size();
        let d = &self.dist;
        for (a, row) in d.iter().enumerate() {
            if row[a] != 0 {
                return Some(("zero diagonal", vec![a]));
            }
            for (b, &ab) in row.iter().enumerate() {
                if ab != d[b][a] {
                    return Some(("symmetry", vec![a, b]));
                }
                if a != b && ab == 0 {
                    return Some(("separation", vec![a, b]));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if d[a][c] > self.monoid.plus(d[a][b], d[b][c]) {
                        return Some(("triangle", vec![a, b, c]));
                    }
                }
            }
        }
        None
    }

    pub fn monoid(&self) -> &DistanceMonoid {
        &self.monoid
    }

    pub fn size(&self) -> usize {
        self.dist.len()
    }

    #[inline]
    pub fn d(&self, a: usize, b: usize) -> usize {
        self.dist[a][b]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.dist
    }

    pub fn check_element(&self, e: usize) -> Result<()> {
        if e < self.size() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                index: e,
                size: self.size(),
            })
        }
    }

    /// Appends a point at the given distances from the existing points.
    pub fn with_point(&self, row: &[usize]) -> Result<Self> {
        let n = self.size();
        if row.len() != n {
            return Err(Error::Malformed("distance row has the wrong length".into()));
        }
        let mut dist = self.dist.clone();
        for (i, r) in dist.iter_mut().enumerate() {
            r.push(row[i]);
        }
        let mut last = row.to_vec();
        last.push(0);
        dist.push(last);
        Self::new(self.monoid.clone(), dist)
    }

    /// The space as a relational structure with one relation per nonzero distance.
    pub fn to_structure(&self) -> FinStructure {
        let mut s = FinStructure::new(self.monoid.signature(), self.size());
        let rels: Vec<usize> = (0..self.monoid.len())
            .map(|r| {
                if r == 0 {
                    usize::MAX
                } else {
                    s.rel_index(&self.monoid.relation_name(r)).expect("exists")
                }
            })
            .collect();
        for a in 0..self.size() {
            for b in 0..self.size() {
                if a != b {
                    s.set(rels[self.d(a, b)], &[a, b], true);
                }
            }
        }
        s
    }

    pub fn to_file(&self) -> SpaceFile {
        SpaceFile {
            monoid: self.monoid.to_file(),
            size: self.size(),
            dist: self.dist.clone(),
        }
    }

    pub fn from_file(file: &SpaceFile) -> Result<Self> {
        if file.dist.len() != file.size {
            return Err(Error::Malformed(
                "size does not match the distance matrix".into(),
            ));
        }
        Self::new(DistanceMonoid::from_file(&file.monoid)?, file.dist.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("space serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}

/// Fills the unknown entries of an `n`-point distance matrix so that every
/// triangle holds. Unknown pairs are assigned in lexicographic order,
/// smallest distance first, so the result is the least completion in that
/// order. `known` lists `(i, j, r)` with `i != j`.
pub fn metric_completion_feasible(
    monoid: &DistanceMonoid,
    n: usize,
    known: &[(usize, usize, usize)],
) -> Result<Option<Vec<Vec<usize>>>> {
    const UNKNOWN: usize = usize::MAX;
    let mut dist = vec![vec![UNKNOWN; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(i, j, r) in known {
        if i >= n || j >= n {
            return Err(Error::OutOfRange {
                index: i.max(j),
                size: n,
            });
        }
        if r >= monoid.len() {
            return Err(Error::Malformed(format!(
                "distance {r} is not an element index"
            )));
        }
        if i == j {
            if r != 0 {
                return Ok(None);
            }
            continue;
        }
        if r == 0 || (dist[i][j] != UNKNOWN && dist[i][j] != r) {
            return Ok(None);
        }
        dist[i][j] = r;
        dist[j][i] = r;
    }
    let unknown: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| dist[i][j] == UNKNOWN)
        .collect();
    let mut domains: Vec<Vec<usize>> = vec![(1..monoid.len()).collect(); unknown.len()];
    let slot = |i: usize, j: usize| unknown.iter().position(|&p| p == (i.min(j), i.max(j)));
    let ok = |x: usize, y: usize, z: usize| {
        x <= monoid.plus(y, z) && y <= monoid.plus(x, z) && z <= monoid.plus(x, y)
    };
    // Known triangles and pairs with both other sides known.
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (x, y, z) = (dist[a][b], dist[a][c], dist[b][c]);
                match (x == UNKNOWN, y == UNKNOWN, z == UNKNOWN) {
                    (false, false, false) if !ok(x, y, z) => return Ok(None),
                    (true, false, false) => domains[slot(a, b).unwrap()].retain(|&v| ok(v, y, z)),
                    (false, true, false) => domains[slot(a, c).unwrap()].retain(|&v| ok(v, x, z)),
                    (false, false, true) => domains[slot(b, c).unwrap()].retain(|&v| ok(v, x, y)),
                    _ => {}
                }
            }
        }
    }
    let mut search = Completion {
        monoid,
        n,
        unknown: &unknown,
        dist,
    };
    Ok(search.run(0, domains).then_some(search.dist))
}

struct Completion<'a> {
    monoid: &'a DistanceMonoid,
    n: usize,
    unknown: &'a [(usize, usize)],
    dist: Vec<Vec<usize>>,
}

impl Completion<'_> {
    fn run(&mut self, level: usize, domains: Vec<Vec<usize>>) -> bool {
        if level == self.unknown.len() {
            return true;
        }
        let (i, j) = self.unknown[level];
        for &v in &domains[level] {
            let mut next = domains.clone();
            let mut wiped = false;
            for k in 0..self.n {
                if k == i || k == j {
                    continue;
                }
                let (dik, djk) = (self.dist[i][k], self.dist[j][k]);
                let m = self.monoid;
                let ok = |x: usize, y: usize, z: usize| {
                    x <= m.plus(y, z) && y <= m.plus(x, z) && z <= m.plus(x, y)
                };
                let later = |a: usize, b: usize| {
                    self.unknown[level + 1..]
                        .iter()
                        .position(|&p| p == (a.min(b), a.max(b)))
                        .map(|p| p + level + 1)
                };
                match (dik == usize::MAX, djk == usize::MAX) {
                    (false, false) => {
                        if !ok(v, dik, djk) {
                            wiped = true;
                        }
                    }
                    (true, false) => {
                        if let Some(s) = later(i, k) {
                            next[s].retain(|&w| ok(v, w, djk));
                            wiped = next[s].is_empty();
                        }
                    }
                    (false, true) => {
                        if let Some(s) = later(j, k) {
                            next[s].retain(|&w| ok(v, dik, w));
                            wiped = next[s].is_empty();
                        }
                    }
                    (true, true) => {}
                }
                if wiped {
                    break;
                }
            }
            if wiped {
                continue;
            }
            self.dist[i][j] = v;
            self.dist[j][i] = v;
            if self.run(level + 1, next) {
                return true;
            }
            self.dist[i][j] = usize::MAX;
            self.dist[j][i] = usize::MAX;
        }
        false
    }
}

/// `tp(a/b, base)` divides over `base`: `2d(a,b) < 2d(a,c)` for every
/// `c` in `base`, or `2d(a,b) < max` when the base is empty. A query with
/// `b` in the base never divides.
pub fn divides_urysohn(space: &RMetricSpace, a: usize, b: usize, base: &[usize]) -> Result<bool> {
    for &x in [a, b].iter().chain(base) {
        space.check_element(x)?;
    }
    if base.contains(&b) {
        return Ok(false);
    }
    let m = space.monoid();
    let ab = m.double(space.d(a, b));
    if base.is_empty() {
        return Ok(ab < m.max());
    }
    Ok(base.iter().all(|&c| ab < m.double(space.d(a, c))))
}

/// Dividing over the class of `c` under `d ≤ r` (`r` idempotent):
/// `2d(a,b) < r` or `2d(a,b) < 2d(a,c)`.
pub fn divides_over_class(
    space: &RMetricSpace,
    a: usize,
    b: usize,
    c: usize,
    r: usize,
) -> Result<bool> {
    for x in [a, b, c] {
        space.check_element(x)?;
    }
    let m = space.monoid();
    if r >= m.len() || m.double(r) != r {
        return Err(Error::Malformed(format!("{r} is not an idempotent")));
    }
    let ab = m.double(space.d(a, b));
    Ok(ab < r || ab < m.double(space.d(a, c)))
}

/// The least `2d(c, d)` over `d` in `dbar`; the maximum when `dbar` is empty.
pub fn find_independence_distance(space: &RMetricSpace, c: usize, dbar: &[usize]) -> Result<usize> {
    space.check_element(c)?;
    let m = space.monoid();
    let mut best = m.max();
    for &d in dbar {
        space.check_element(d)?;
        best = best.min(m.double(space.d(c, d)));
    }
    Ok(best)
}

/// What `x` sees of the `d ≤ r` class of `c` and of every coarser class:
/// the distances from `x` realized inside the ball in the generic space,
/// then membership in each larger idempotent ball.
pub fn class_type_key(space: &RMetricSpace, x: usize, c: usize, r: usize) -> Vec<usize> {
    let m = space.monoid();
    let u = space.d(x, c);
    let ok =
        |p: usize, q: usize, s: usize| p <= m.plus(q, s) && q <= m.plus(p, s) && s <= m.plus(p, q);
    let mut key: Vec<usize> = (0..m.len())
        .filter(|&t| (0..=r).any(|rr| ok(t, u, rr)))
        .collect();
    key.push(usize::MAX);
    key.extend(
        m.idempotents()
            .into_iter()
            .filter(|&s| s > r)
            .map(|s| usize::from(u <= s)),
    );
    key
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distmonoid::truncated_monoid;

    fn r0134() -> DistanceMonoid {
        truncated_monoid(&[0.0, 1.0, 3.0, 4.0]).unwrap()
    }

    #[test]
    fn completion_examples() {
        let m = r0134();
        let done = metric_completion_feasible(&m, 3, &[(0, 1, 1), (1, 2, 1)])
            .unwrap()
            .unwrap();
        assert_eq!(done[0][2], 1);
        assert!(
            metric_completion_feasible(&m, 3, &[(0, 1, 3), (1, 2, 1), (0, 2, 1)])
                .unwrap()
                .is_none()
        );
        let pair = metric_completion_feasible(&m, 2, &[]).unwrap().unwrap();
        assert_eq!(pair[0][1], 1);
    }

    #[test]
    fn rejects_bad_spaces() {
        let m = r0134();
        assert!(
            RMetricSpace::new(m.clone(), vec![vec![0, 3, 1], vec![3, 0, 1], vec![1, 1, 0]])
                .is_err()
        );
        assert!(RMetricSpace::new(m.clone(), vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(RMetricSpace::new(m, vec![vec![0, 1], vec![2, 0]]).is_err());
    }

    #[test]
    fn dividing_examples() {
        let m = r0134();
        // points a, b, c with d(a,b)=1, d(a,c)=3, d(b,c)=3
        let s = RMetricSpace::new(m.clone(), vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]])
            .unwrap();
        assert!(divides_urysohn(&s, 0, 1, &[2]).unwrap());
        // d(a,b)=3, d(a,c)=3
        let t = RMetricSpace::new(m, vec![vec![0, 2, 2], vec![2, 0, 2], vec![2, 2, 0]]).unwrap();
        assert!(!divides_urysohn(&t, 0, 1, &[2]).unwrap());
        assert!(!divides_urysohn(&t, 0, 1, &[1]).unwrap());

        let rado = truncated_monoid(&[0.0, 1.0, 2.0]).unwrap();
        let e = RMetricSpace::new(rado, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(!divides_urysohn(&e, 0, 1, &[]).unwrap());
    }

    #[test]
    fn independence_distance() {
        let m = r0134();
        let s = RMetricSpace::new(m, vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]]).unwrap();
        assert_eq!(find_independence_distance(&s, 0, &[1]).unwrap(), 1);
        assert_eq!(find_independence_distance(&s, 0, &[1, 2]).unwrap(), 1);
        assert_eq!(find_independence_distance(&s, 0, &[2]).unwrap(), 3);
        assert_eq!(find_independence_distance(&s, 0, &[]).unwrap(), 3);
    }

    #[test]
    fn json_round_trip() {
        let s = RMetricSpace::new(r0134(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let text = s.to_json();
        assert_eq!(RMetricSpace::from_json(&text).unwrap(), s);
    }
}
