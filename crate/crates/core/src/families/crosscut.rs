//! Two equivalence relations P and Q whose intersection splits every class
//! of either into cells, all of the same size.

use serde::{Deserialize, Serialize};

use super::{claim, NamedElement, ScenarioReport, ScenarioVerdict};
use crate::error::{Error, Result};
use crate::indep::{solve_named, CopyConfig, Family, Solution, Target};
use crate::structure::{FinStructure, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CrosscutSpec {
    pub n_p: usize,
    pub n_q: usize,
    pub cell: usize,
}

/// Each element is recorded by its P-class and Q-class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crosscut {
    classes: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CrossAtom {
    Eq,
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CrosscutLit {
    pub pos: usize,
    pub atom: CrossAtom,
    pub holds: bool,
}

/// Relations usable as imaginary bases, finest first.
pub const CROSSCUT_RELATIONS: [&str; 5] = ["=", "PQ", "P", "Q", "total"];

pub fn build_crosscut(spec: CrosscutSpec) -> FinStructure {
    Crosscut::build(spec).to_structure()
}

impl Crosscut {
    pub fn build(spec: CrosscutSpec) -> Self {
        let mut classes = Vec::new();
        for p in 0..spec.n_p {
            for q in 0..spec.n_q {
                classes.extend(std::iter::repeat_n((p, q), spec.cell));
            }
        }
        Self { classes }
    }

    pub fn from_classes(classes: Vec<(usize, usize)>) -> Self {
        Self { classes }
    }

    pub fn classes(&self) -> &[(usize, usize)] {
        &self.classes
    }

    pub fn p(&self, x: usize, y: usize) -> bool {
        self.classes[x].0 == self.classes[y].0
    }

    pub fn q(&self, x: usize, y: usize) -> bool {
        self.classes[x].1 == self.classes[y].1
    }

    pub fn to_structure(&self) -> FinStructure {
        let mut s = FinStructure::new(Signature::binary(&["P", "Q"]), self.classes.len());
        let n = self.classes.len();
        for x in 0..n {
            for y in 0..n {
                s.set(0, &[x, y], self.p(x, y));
                s.set(1, &[x, y], self.q(x, y));
            }
        }
        s
    }

    fn holds(&self, rel: &str, x: usize, y: usize) -> Result<bool> {
        Ok(match rel {
            "=" => x == y,
            "PQ" => self.p(x, y) && self.q(x, y),
            "P" => self.p(x, y),
            "Q" => self.q(x, y),
            "total" => true,
            _ => {
                return Err(Error::Unsupported(format!(
                    "`{rel}` is not a relation of the crosscut family"
                )))
            }
        })
    }

    /// Whether `R ⊆ E` for two of the named relations.
    fn refines(rel: &str, e: &str) -> bool {
        match rel {
            "=" => true,
            "PQ" => e != "=",
            "P" | "Q" => e == rel || e == "total",
            _ => e == "total",
        }
    }

    fn check(&self, xs: &[usize]) -> Result<()> {
        match xs.iter().find(|&&x| x >= self.classes.len()) {
            Some(&x) => Err(Error::OutOfRange {
                index: x,
                size: self.classes.len(),
            }),
            None => Ok(()),
        }
    }

    /// Divides iff `a = b`, or `a` shares its P- or Q-class with `b` but
    /// with no element of the base.
    pub fn divides(&self, a: usize, b: usize, base: &[usize]) -> Result<bool> {
        self.check(&[a, b])?;
        self.check(base)?;
        if base.contains(&b) {
            return Ok(false);
        }
        Ok(a == b
            || (self.p(a, b) && !base.iter().any(|&c| self.p(a, c)))
            || (self.q(a, b) && !base.iter().any(|&c| self.q(a, c))))
    }

    /// The scenario with `a ∈ X1∩Y1`, `b ∈ X2∩Y1`, `c ∈ X1∩Y2`, `d ∈ X2∩Y2`
    /// over the Q-class of `c`.
    pub fn counterexample(&self) -> ScenarioReport {
        let find = |p: usize, q: usize| self.classes.iter().position(|&c| c == (p, q));
        let (Some(a), Some(b), Some(c), Some(d)) = (find(0, 0), find(1, 0), find(0, 1), find(1, 1))
        else {
            return ScenarioReport::inapplicable("needs two P-classes and two Q-classes");
        };
        let ind = |x: usize, y: usize| !self.divides_over_class(x, y, c, "Q").expect("valid");
        let claims = vec![
            claim("c ⫫_{c_Q} d", ind(c, d), true),
            claim("a ⫫_{c_Q} c", ind(a, c), false),
            claim("b ⫫_{c_Q} d", ind(b, d), false),
        ];
        let names = |ps: &[usize]| {
            ps.iter()
                .map(|&x| {
                    ["a", "b", "c", "d"][[a, b, c, d].iter().position(|&y| y == x).unwrap_or(0)]
                        .to_string()
                })
                .collect()
        };
        let solution = solve_named(self, a, c, b, &[d], &names);
        let (verdict, conflict_trace) = match solution {
            Solution::Sat { .. } => (ScenarioVerdict::Sat, Vec::new()),
            Solution::Unsat { mut conflict } => {
                if conflict.iter().any(|l| l == "P(e,c)") && conflict.iter().any(|l| l == "P(e,d)")
                {
                    conflict.push("P(e,c) ∧ P(e,d) forces P(c,d)".into());
                }
                (ScenarioVerdict::Unsat, conflict)
            }
        };
        let show = |x: usize| format!("P{} Q{}", self.classes[x].0 + 1, self.classes[x].1 + 1);
        let witnesses = [("a", a), ("b", b), ("c", c), ("d", d)]
            .iter()
            .map(|&(n, x)| NamedElement {
                name: n.into(),
                index: x,
                element: show(x),
            })
            .collect();
        ScenarioReport {
            verdict,
            witnesses,
            claims,
            conflict_trace,
        }
    }
}

impl Family for Crosscut {
    type Lit = CrosscutLit;
    /// The P-class and Q-class of the new element; unused ids are new classes.
    type Fresh = (usize, usize);

    fn size(&self) -> usize {
        self.classes.len()
    }

    fn describe(&self, x: usize, params: &[usize]) -> Vec<CrosscutLit> {
        let mut out = Vec::with_capacity(3 * params.len());
        for (pos, &y) in params.iter().enumerate() {
            out.push(CrosscutLit {
                pos,
                atom: CrossAtom::Eq,
                holds: x == y,
            });
            out.push(CrosscutLit {
                pos,
                atom: CrossAtom::P,
                holds: self.p(x, y),
            });
            out.push(CrosscutLit {
                pos,
                atom: CrossAtom::Q,
                holds: self.q(x, y),
            });
        }
        out.sort();
        out
    }

    fn fresh(&self, targets: &[Target<CrosscutLit>]) -> Option<(usize, usize)> {
        let lits = || {
            targets
                .iter()
                .flat_map(|t| t.lits.iter().map(|l| (l, t.params[l.pos])))
        };
        if lits().any(|(l, _)| l.atom == CrossAtom::Eq && l.holds) {
            return None;
        }
        let pick =
            |atom: CrossAtom, class: &dyn Fn(usize) -> usize, fresh: usize| -> Option<usize> {
                let mut chosen: Option<usize> = None;
                for (_, y) in lits().filter(|(l, _)| l.atom == atom && l.holds) {
                    if chosen.is_some_and(|c| c != class(y)) {
                        return None;
                    }
                    chosen = Some(class(y));
                }
                let chosen = chosen.unwrap_or(fresh);
                let clash = lits().any(|(l, y)| l.atom == atom && !l.holds && class(y) == chosen);
                (!clash).then_some(chosen)
            };
        let new_p = self.classes.iter().map(|c| c.0 + 1).max().unwrap_or(0);
        let new_q = self.classes.iter().map(|c| c.1 + 1).max().unwrap_or(0);
        let p = pick(CrossAtom::P, &|y| self.classes[y].0, new_p)?;
        let q = pick(CrossAtom::Q, &|y| self.classes[y].1, new_q)?;
        Some((p, q))
    }

    fn adjoin(&self, fresh: &(usize, usize)) -> (Self, usize) {
        let mut next = self.clone();
        next.classes.push(*fresh);
        (next, self.classes.len())
    }

    fn copy_configs(&self, b: usize, base: &[usize], m: usize) -> Vec<CopyConfig<Self>> {
        let fresh_id = self
            .classes
            .iter()
            .map(|c| c.0.max(c.1) + 1)
            .max()
            .unwrap_or(0);
        // For each coordinate: `None` is one new class per copy, `Some(id)` a common class.
        let options = |forced: bool, own: usize| -> Vec<Option<usize>> {
            if forced {
                vec![Some(own)]
            } else {
                vec![Some(fresh_id + m), None]
            }
        };
        let p_forced = base.iter().any(|&c| self.p(b, c));
        let q_forced = base.iter().any(|&c| self.q(b, c));
        let mut out = Vec::new();
        for po in options(p_forced, self.classes[b].0) {
            for qo in options(q_forced, self.classes[b].1) {
                let mut classes: Vec<(usize, usize)> =
                    base.iter().map(|&c| self.classes[c]).collect();
                for i in 0..m {
                    classes.push((po.unwrap_or(fresh_id + i), qo.unwrap_or(fresh_id + i)));
                }
                out.push(CopyConfig {
                    model: Crosscut { classes },
                    base: (0..base.len()).collect(),
                    copies: (base.len()..base.len() + m).collect(),
                });
            }
        }
        out
    }

    fn show(&self, lit: &CrosscutLit, params: &[String]) -> String {
        let y = &params[lit.pos];
        match (lit.atom, lit.holds) {
            (CrossAtom::Eq, true) => format!("e = {y}"),
            (CrossAtom::Eq, false) => format!("e ≠ {y}"),
            (atom, true) => format!("{atom:?}(e,{y})"),
            (atom, false) => format!("¬{atom:?}(e,{y})"),
        }
    }

    fn base_facts(
        &self,
        conflict: &[Target<CrosscutLit>],
        name: &dyn Fn(usize) -> String,
    ) -> Vec<String> {
        let mut out = Vec::new();
        for atom in [CrossAtom::P, CrossAtom::Q] {
            let mut ys: Vec<usize> = conflict
                .iter()
                .flat_map(|t| {
                    t.lits
                        .iter()
                        .filter(|l| l.atom == atom && l.holds)
                        .map(|l| t.params[l.pos])
                })
                .collect();
            ys.sort();
            ys.dedup();
            for (i, &x) in ys.iter().enumerate() {
                for &y in &ys[i + 1..] {
                    let holds = if atom == CrossAtom::P {
                        self.p(x, y)
                    } else {
                        self.q(x, y)
                    };
                    let neg = if holds { "" } else { "¬" };
                    out.push(format!("{neg}{atom:?}({},{})", name(x), name(y)));
                }
            }
        }
        out
    }

    fn relations(&self) -> Vec<String> {
        CROSSCUT_RELATIONS.iter().map(|r| r.to_string()).collect()
    }

    fn divides_over_class(&self, a: usize, b: usize, c: usize, rel: &str) -> Result<bool> {
        self.check(&[a, b, c])?;
        self.holds(rel, a, b)?;
        let known = |e: &str| Self::refines(rel, e) && self.holds(e, a, c).expect("known relation");
        Ok((a == b && !known("="))
            || (self.p(a, b) && !known("P"))
            || (self.q(a, b) && !known("Q")))
    }

    fn acl_key(&self, x: usize, c: usize, rel: &str) -> Result<Vec<i64>> {
        self.check(&[x, c])?;
        self.holds(rel, x, c)?;
        Ok(["=", "P", "Q"]
            .iter()
            .filter(|e| Self::refines(rel, e))
            .map(|e| i64::from(self.holds(e, x, c).expect("known relation")))
            .collect())
    }

    fn closed_form_divides(&self, a: usize, b: usize, base: &[usize]) -> bool {
        self.divides(a, b, base).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::discover_equiv_relations;
    use crate::indep::{divides_bruteforce, Dividing};

    fn spec(n_p: usize, n_q: usize, cell: usize) -> CrosscutSpec {
        CrosscutSpec { n_p, n_q, cell }
    }

    #[test]
    fn sizes() {
        let s = build_crosscut(spec(2, 2, 2));
        assert_eq!(s.size(), 8);
        let c = Crosscut::build(spec(2, 2, 2));
        let cells = (0..8).filter(|&y| c.p(0, y) && c.q(0, y)).count();
        assert_eq!(cells, 2);
    }

    #[test]
    fn three_equivalences() {
        let found = discover_equiv_relations(&build_crosscut(spec(3, 3, 3))).unwrap();
        assert_eq!(found.len(), 3);
    }

    #[test]
    fn scenario_is_unsat() {
        for n in [2, 3] {
            let r = Crosscut::build(spec(n, n, n)).counterexample();
            assert!(r.reproduced(), "{r:?}");
            assert!(r
                .conflict_trace
                .contains(&"P(e,c) ∧ P(e,d) forces P(c,d)".to_string()));
        }
        let r = Crosscut::build(spec(1, 2, 2)).counterexample();
        assert_eq!(r.verdict, ScenarioVerdict::Inapplicable);
    }

    #[test]
    fn oracle_agrees() {
        let c = Crosscut::build(spec(3, 3, 2));
        let n = c.size();
        for a in 0..n {
            for b in 0..n {
                for base in [vec![], vec![0], vec![4], vec![1, 9], vec![3, 7]] {
                    let want = c.closed_form_divides(a, b, &base);
                    let got = divides_bruteforce(&c, a, b, &base);
                    assert_ne!(got, Dividing::Inconclusive);
                    assert_eq!(got == Dividing::Divides, want, "a={a} b={b} base={base:?}");
                }
            }
        }
    }
}
