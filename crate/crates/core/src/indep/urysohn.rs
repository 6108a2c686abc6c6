use serde::Serialize;

use super::{CopyConfig, Family, Target};
use crate::distmonoid::{
    class_type_key, divides_over_class, divides_urysohn, DistanceMonoid, RMetricSpace,
};
use crate::error::{Error, Result};

/// `d(e, params[pos]) = dist`; distance 0 means equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DistLit {
    pub pos: usize,
    pub dist: usize,
}

fn triangle(m: &DistanceMonoid, x: usize, y: usize, z: usize) -> bool {
    x <= m.plus(y, z) && y <= m.plus(x, z) && z <= m.plus(x, y)
}

impl RMetricSpace {
    fn class_index(&self, rel: &str) -> Result<usize> {
        let m = self.monoid();
        rel.strip_prefix("d_")
            .and_then(|l| m.index_of(l))
            .filter(|&r| m.double(r) == r)
            .ok_or_else(|| {
                Error::Unsupported(format!(
                    "`{rel}` is not a definable equivalence of this space"
                ))
            })
    }
}

impl Family for RMetricSpace {
    type Lit = DistLit;
    /// Distances from the new point to each existing point.
    type Fresh = Vec<usize>;

    fn size(&self) -> usize {
        RMetricSpace::size(self)
    }

    fn describe(&self, x: usize, params: &[usize]) -> Vec<DistLit> {
        let mut out: Vec<DistLit> = params
            .iter()
            .enumerate()
            .map(|(pos, &p)| DistLit {
                pos,
                dist: self.d(x, p),
            })
            .collect();
        out.sort();
        out
    }

    fn fresh(&self, targets: &[Target<DistLit>]) -> Option<Vec<usize>> {
        let m = self.monoid();
        let n = RMetricSpace::size(self);
        let mut row: Vec<Option<usize>> = vec![None; n];
        for t in targets {
            for l in &t.lits {
                let p = t.params[l.pos];
                if l.dist == 0 || row[p].is_some_and(|v| v != l.dist) {
                    return None;
                }
                row[p] = Some(l.dist);
            }
        }
        let fixed: Vec<(usize, usize)> = row
            .iter()
            .enumerate()
            .filter_map(|(p, v)| v.map(|v| (p, v)))
            .collect();
        for (i, &(p, u)) in fixed.iter().enumerate() {
            if fixed[..i]
                .iter()
                .any(|&(q, v)| !triangle(m, u, v, self.d(p, q)))
            {
                return None;
            }
        }
        // Free amalgamation: shortest path through a constrained point.
        let out: Vec<usize> = (0..n)
            .map(|y| {
                row[y].unwrap_or_else(|| {
                    fixed
                        .iter()
                        .map(|&(p, u)| m.plus(u, self.d(p, y)))
                        .fold(m.max(), usize::min)
                })
            })
            .collect();
        self.with_point(&out).ok().map(|_| out)
    }

    fn adjoin(&self, fresh: &Vec<usize>) -> (Self, usize) {
        (
            self.with_point(fresh).expect("fresh rows are metric"),
            RMetricSpace::size(self),
        )
    }

    fn copy_configs(&self, b: usize, base: &[usize], m: usize) -> Vec<CopyConfig<Self>> {
        let k = base.len();
        let mut out = Vec::new();
        for delta in 1..self.monoid().len() {
            let mut dist = vec![vec![0; k + m]; k + m];
            for i in 0..k + m {
                for j in 0..k + m {
                    dist[i][j] = match (i < k, j < k) {
                        _ if i == j => 0,
                        (true, true) => self.d(base[i], base[j]),
                        (true, false) => self.d(base[i], b),
                        (false, true) => self.d(b, base[j]),
                        (false, false) => delta,
                    };
                }
            }
            if let Ok(model) = RMetricSpace::new(self.monoid().clone(), dist) {
                out.push(CopyConfig {
                    model,
                    base: (0..k).collect(),
                    copies: (k..k + m).collect(),
                });
            }
        }
        out
    }

    fn show(&self, lit: &DistLit, params: &[String]) -> String {
        format!(
            "d(e,{}) = {}",
            params[lit.pos],
            self.monoid().label(lit.dist)
        )
    }

    fn base_facts(
        &self,
        conflict: &[Target<DistLit>],
        name: &dyn Fn(usize) -> String,
    ) -> Vec<String> {
        let mut params: Vec<usize> = conflict
            .iter()
            .flat_map(|t| t.lits.iter().map(|l| t.params[l.pos]))
            .collect();
        params.sort();
        params.dedup();
        let mut out = Vec::new();
        for (i, &x) in params.iter().enumerate() {
            for &y in &params[i + 1..] {
                out.push(format!(
                    "d({},{}) = {}",
                    name(x),
                    name(y),
                    self.monoid().label(self.d(x, y))
                ));
            }
        }
        out
    }

    fn relations(&self) -> Vec<String> {
        self.monoid()
            .definable_equivalences()
            .into_iter()
            .map(|e| e.name)
            .collect()
    }

    fn divides_over_class(&self, a: usize, b: usize, c: usize, rel: &str) -> Result<bool> {
        divides_over_class(self, a, b, c, self.class_index(rel)?)
    }

    fn acl_key(&self, x: usize, c: usize, rel: &str) -> Result<Vec<i64>> {
        let r = self.class_index(rel)?;
        self.check_element(x)?;
        self.check_element(c)?;
        Ok(class_type_key(self, x, c, r)
            .into_iter()
            .map(|v| if v == usize::MAX { -1 } else { v as i64 })
            .collect())
    }

    fn closed_form_divides(&self, a: usize, b: usize, base: &[usize]) -> bool {
        divides_urysohn(self, a, b, base).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distmonoid::{build_urysohn, truncated_monoid};
    use crate::indep::{divides_bruteforce, extension_solve, Dividing, Solution};

    fn space() -> RMetricSpace {
        let m = truncated_monoid(&[0.0, 1.0, 3.0, 4.0]).unwrap();
        build_urysohn(&m, 1, 1, 3, 64).unwrap()
    }

    #[test]
    fn repeated_base_points_count_once() {
        let s = space();
        for (a, b, c) in [(0, 1, 2), (3, 1, 0), (2, 4, 5)] {
            assert_eq!(
                divides_bruteforce(&s, a, b, &[c, c]),
                divides_bruteforce(&s, a, b, &[c])
            );
        }
    }

    #[test]
    fn oracle_matches_closed_form_over_points() {
        let s = space();
        let n = Family::size(&s);
        for a in 0..n.min(6) {
            for b in 0..n.min(6) {
                for c in 0..n.min(6) {
                    let want = s.closed_form_divides(a, b, &[c]);
                    let got = divides_bruteforce(&s, a, b, &[c]);
                    assert_eq!(got == Dividing::Divides, want, "a={a} b={b} c={c}");
                }
                let got = divides_bruteforce(&s, a, b, &[]);
                assert_eq!(
                    got == Dividing::Divides,
                    s.closed_form_divides(a, b, &[]),
                    "a={a} b={b}"
                );
            }
        }
    }

    #[test]
    fn fresh_rejects_broken_triangle() {
        let s = space();
        let (x, y) = (0..Family::size(&s))
            .flat_map(|x| (0..Family::size(&s)).map(move |y| (x, y)))
            .find(|&(x, y)| s.d(x, y) == 3)
            .unwrap();
        let t = vec![Target {
            params: vec![x, y],
            lits: vec![DistLit { pos: 0, dist: 1 }, DistLit { pos: 1, dist: 1 }],
        }];
        assert!(s.fresh(&t).is_none());
        let sol = extension_solve(&s, x, x, x, &[y]);
        assert!(matches!(sol, Solution::Sat { .. }));
    }

    #[test]
    fn unknown_relation_is_rejected() {
        let s = space();
        assert!(s.divides_over_class(0, 1, 0, "d_3").is_err());
        assert!(s.divides_over_class(0, 1, 0, "d_1").is_ok());
    }
}
