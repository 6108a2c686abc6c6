//! ω-pedes: F-points split into E0-classes of two E1-cells each, and
//! non-F points, all in one E1-class, each L-related to exactly one cell of
//! every E0-class.

use std::collections::BTreeMap;

use serde::Serialize;

use super::saturate::{deficits, next_witness};
use super::{claim, splitmix, NamedElement, ScenarioReport, ScenarioVerdict};
use crate::error::{Error, Result};
use crate::indep::{solve_named, CopyConfig, Family, Solution, Target};
use crate::structure::{FinStructure, RelationSymbol, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// A point outside F.
    Point,
    F {
        class: usize,
        cell: u8,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Omegapede {
    kinds: Vec<Kind>,
    n_classes: usize,
    /// `(point, class) -> cell` the point is L-related to; 0 when absent.
    pattern: BTreeMap<(usize, usize), u8>,
}

/// Literals about `e`; `LTo` is `L(e, y)` and `LFrom` is `L(y, e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OmegaLit {
    F(bool),
    Eq(usize, bool),
    E0(usize, bool),
    E1(usize, bool),
    LTo(usize, bool),
    LFrom(usize, bool),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaFresh {
    /// An F-point; `pattern` fixes the cells chosen by points when `class` is new.
    F {
        class: usize,
        cell: u8,
        pattern: Vec<(usize, u8)>,
    },
    /// A point with the given cell in each listed class, 0 elsewhere.
    Point { pattern: Vec<(usize, u8)> },
}

pub const OMEGAPEDE_RELATIONS: [&str; 4] = ["=", "E1", "E0", "total"];

/// Classes `0..n_classes` with two cells of `cell_size` F-points each, then
/// points until every pattern over at most `k` of those classes has `m`
/// points (and there are at least `n_points`), then classes until every
/// pattern over at most `k` of the first `n_points` points has `m` classes.
pub fn build_omegapede(
    n_classes: usize,
    cell_size: usize,
    n_points: usize,
    k: usize,
    m: usize,
) -> Omegapede {
    let mut o = Omegapede {
        kinds: Vec::new(),
        n_classes: 0,
        pattern: BTreeMap::new(),
    };
    for _ in 0..n_classes {
        o.push_class(cell_size);
    }
    let free = |a: u64, b: usize| (splitmix(a.wrapping_mul(0x1_0000_0001) ^ b as u64) & 1) as u8;
    loop {
        let points = o.points();
        let ws: Vec<Vec<Option<u8>>> = points
            .iter()
            .map(|&p| (0..n_classes).map(|x| Some(o.cell_of(p, x))).collect())
            .collect();
        let open = deficits(n_classes, k, m, &ws);
        if open.is_empty() && points.len() >= n_points {
            break;
        }
        let id = o.kinds.len() as u64;
        let row = next_witness(n_classes, &open, &|x| free(id, x));
        let p = o.kinds.len();
        o.kinds.push(Kind::Point);
        for (x, v) in row.into_iter().enumerate() {
            o.pattern.insert((p, x), v);
        }
    }
    let first: Vec<usize> = o.points().into_iter().take(n_points).collect();
    loop {
        let ws: Vec<Vec<Option<u8>>> = (0..o.n_classes)
            .map(|x| first.iter().map(|&p| Some(o.cell_of(p, x))).collect())
            .collect();
        let open = deficits(first.len(), k, m, &ws);
        if open.is_empty() {
            break;
        }
        let x = o.n_classes as u64;
        let row = next_witness(first.len(), &open, &|i| free(x, i));
        let class = o.push_class(cell_size);
        for (i, &p) in first.iter().enumerate() {
            o.pattern.insert((p, class), row[i]);
        }
        for p in o.points().into_iter().skip(first.len()) {
            o.pattern.insert((p, class), free(p as u64, class));
        }
    }
    o
}

impl Omegapede {
    fn push_class(&mut self, cell_size: usize) -> usize {
        let class = self.n_classes;
        self.n_classes += 1;
        for cell in 0..2 {
            self.kinds
                .extend(std::iter::repeat_n(Kind::F { class, cell }, cell_size));
        }
        class
    }

    pub fn kinds(&self) -> &[Kind] {
        &self.kinds
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn points(&self) -> Vec<usize> {
        (0..self.kinds.len())
            .filter(|&x| self.kinds[x] == Kind::Point)
            .collect()
    }

    pub fn is_f(&self, x: usize) -> bool {
        matches!(self.kinds[x], Kind::F { .. })
    }

    /// The cell of `class` that point `p` is L-related to.
    pub fn cell_of(&self, p: usize, class: usize) -> u8 {
        self.pattern.get(&(p, class)).copied().unwrap_or(0)
    }

    pub fn e0(&self, x: usize, y: usize) -> bool {
        match (self.kinds[x], self.kinds[y]) {
            (Kind::Point, Kind::Point) => true,
            (Kind::F { class: a, .. }, Kind::F { class: b, .. }) => a == b,
            _ => false,
        }
    }

    pub fn e1(&self, x: usize, y: usize) -> bool {
        match (self.kinds[x], self.kinds[y]) {
            (Kind::Point, Kind::Point) => true,
            (Kind::F { class: a, cell: c }, Kind::F { class: b, cell: d }) => a == b && c == d,
            _ => false,
        }
    }

    pub fn l(&self, x: usize, y: usize) -> bool {
        match (self.kinds[x], self.kinds[y]) {
            (Kind::Point, Kind::F { class, cell }) => self.cell_of(x, class) == cell,
            _ => false,
        }
    }

    pub fn to_structure(&self) -> FinStructure {
        let sig = Signature::new([
            RelationSymbol::new("F", 1),
            RelationSymbol::new("E0", 2),
            RelationSymbol::new("E1", 2),
            RelationSymbol::new("L", 2),
        ])
        .expect("distinct names");
        let n = self.kinds.len();
        let mut s = FinStructure::new(sig, n);
        let [f, e0, e1, l] = ["F", "E0", "E1", "L"].map(|r| s.rel_index(r).expect("declared"));
        for x in 0..n {
            s.set(f, &[x], self.is_f(x));
            for y in 0..n {
                s.set(e0, &[x, y], self.e0(x, y));
                s.set(e1, &[x, y], self.e1(x, y));
                s.set(l, &[x, y], self.l(x, y));
            }
        }
        s
    }

    /// Checks the axioms: E1 refines E0, L only from points to F, and
    /// every point L-related to exactly one cell of every class.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.kinds.len();
        for x in 0..n {
            for y in 0..n {
                if self.e1(x, y) && !self.e0(x, y) {
                    return Err(Error::Axiom {
                        axiom: "E1 ⊆ E0".into(),
                        witness: vec![x.to_string(), y.to_string()],
                    });
                }
                if self.l(x, y) && (self.is_f(x) || !self.is_f(y)) {
                    return Err(Error::Axiom {
                        axiom: "L ⊆ ¬F × F".into(),
                        witness: vec![x.to_string(), y.to_string()],
                    });
                }
            }
        }
        for p in self.points() {
            for class in 0..self.n_classes {
                let cells: Vec<u8> = (0..n)
                    .filter_map(|y| match self.kinds[y] {
                        Kind::F { class: c, cell } if c == class && self.l(p, y) => Some(cell),
                        _ => None,
                    })
                    .collect();
                if cells.windows(2).any(|w| w[0] != w[1]) {
                    return Err(Error::Axiom {
                        axiom: "one cell per class".into(),
                        witness: vec![p.to_string()],
                    });
                }
            }
        }
        Ok(())
    }

    fn check(&self, xs: &[usize]) -> Result<()> {
        match xs.iter().find(|&&x| x >= self.kinds.len()) {
            Some(&x) => Err(Error::OutOfRange {
                index: x,
                size: self.kinds.len(),
            }),
            None => Ok(()),
        }
    }

    fn check_rel(rel: &str) -> Result<()> {
        if OMEGAPEDE_RELATIONS.contains(&rel) {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "`{rel}` is not a relation of the ω-pede family"
            )))
        }
    }

    /// Divides iff `a = b`, or `a` is an F-point E0-related to `b` but to
    /// no element of the base.
    pub fn divides(&self, a: usize, b: usize, base: &[usize]) -> Result<bool> {
        self.check(&[a, b])?;
        self.check(base)?;
        if base.contains(&b) {
            return Ok(false);
        }
        Ok(a == b || (self.is_f(a) && self.e0(a, b) && !base.iter().any(|&c| self.e0(a, c))))
    }

    /// The type of `x` over the class of `c` alone: F and membership.
    pub fn plain_key(&self, x: usize, c: usize) -> Vec<i64> {
        vec![i64::from(self.is_f(x)), i64::from(self.e0(x, c))]
    }

    /// The scenario with F-points `c`, `d` in one class but different
    /// cells and points `a`, `b` with `L(a, c)` and `L(b, d)`.
    pub fn counterexample(&self) -> ScenarioReport {
        let n = self.kinds.len();
        let pair = (0..n).filter(|&c| self.is_f(c)).find_map(|c| {
            let d = (0..n).find(|&d| self.is_f(d) && self.e0(c, d) && !self.e1(c, d))?;
            let a = (0..n).find(|&a| self.l(a, c))?;
            let b = (0..n).find(|&b| self.l(b, d))?;
            Some((a, b, c, d))
        });
        let Some((a, b, c, d)) = pair else {
            return ScenarioReport::inapplicable("no two cells of one class with L-witnesses");
        };
        let names = |ps: &[usize]| {
            ps.iter()
                .map(|&x| {
                    ["a", "b", "c", "d"][[a, b, c, d].iter().position(|&y| y == x).unwrap_or(0)]
                        .to_string()
                })
                .collect()
        };
        let acl = |x: usize| self.acl_key(x, c, "E0").expect("valid");
        let claims = vec![
            claim(
                "tp(a/c_E0) = tp(b/c_E0)",
                self.plain_key(a, c) == self.plain_key(b, c),
                true,
            ),
            claim("tp(a/acl(c_E0)) = tp(b/acl(c_E0))", acl(a) == acl(b), false),
        ];
        let (verdict, conflict_trace) = match solve_named(self, a, c, b, &[d], &names) {
            Solution::Sat { .. } => (ScenarioVerdict::Sat, Vec::new()),
            Solution::Unsat { conflict } => (ScenarioVerdict::Unsat, conflict),
        };
        let show = |x: usize| match self.kinds[x] {
            Kind::Point => "point".to_string(),
            Kind::F { class, cell } => format!("F class {class} cell {cell}"),
        };
        let witnesses = [("a", a), ("b", b), ("c", c), ("d", d)]
            .iter()
            .map(|&(nm, x)| NamedElement {
                name: nm.into(),
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

    /// The literals of a candidate fresh element, or `None` on a clash.
    fn try_f(&self, class: usize, cell: u8, lits: &[(OmegaLit, usize)]) -> Option<OmegaFresh> {
        let new = class >= self.n_classes;
        let mut chosen: BTreeMap<usize, u8> = BTreeMap::new();
        for &(lit, y) in lits {
            let ok = match lit {
                OmegaLit::F(v) => v,
                OmegaLit::Eq(_, v) | OmegaLit::LTo(_, v) => !v,
                OmegaLit::E0(_, v) => {
                    v == matches!(self.kinds[y], Kind::F { class: c, .. } if c == class)
                }
                OmegaLit::E1(_, v) => v == (self.kinds[y] == Kind::F { class, cell }),
                OmegaLit::LFrom(_, v) => match self.kinds[y] {
                    Kind::F { .. } => !v,
                    Kind::Point if new => {
                        let want = if v { cell } else { 1 - cell };
                        *chosen.entry(y).or_insert(want) == want
                    }
                    Kind::Point => v == (self.cell_of(y, class) == cell),
                },
            };
            if !ok {
                return None;
            }
        }
        Some(OmegaFresh::F {
            class,
            cell,
            pattern: chosen.into_iter().collect(),
        })
    }

    fn try_point(&self, lits: &[(OmegaLit, usize)]) -> Option<OmegaFresh> {
        let mut chosen: BTreeMap<usize, u8> = BTreeMap::new();
        for &(lit, y) in lits {
            let ok = match lit {
                OmegaLit::F(v) | OmegaLit::Eq(_, v) | OmegaLit::LFrom(_, v) => !v,
                OmegaLit::E0(_, v) | OmegaLit::E1(_, v) => v == !self.is_f(y),
                OmegaLit::LTo(_, v) => match self.kinds[y] {
                    Kind::Point => !v,
                    Kind::F { class, cell } => {
                        let want = if v { cell } else { 1 - cell };
                        *chosen.entry(class).or_insert(want) == want
                    }
                },
            };
            if !ok {
                return None;
            }
        }
        Some(OmegaFresh::Point {
            pattern: chosen.into_iter().collect(),
        })
    }
}

impl Family for Omegapede {
    type Lit = OmegaLit;
    type Fresh = OmegaFresh;

    fn size(&self) -> usize {
        self.kinds.len()
    }

    fn describe(&self, x: usize, params: &[usize]) -> Vec<OmegaLit> {
        let mut out = vec![OmegaLit::F(self.is_f(x))];
        for (i, &y) in params.iter().enumerate() {
            out.push(OmegaLit::Eq(i, x == y));
            out.push(OmegaLit::E0(i, self.e0(x, y)));
            out.push(OmegaLit::E1(i, self.e1(x, y)));
            out.push(OmegaLit::LTo(i, self.l(x, y)));
            out.push(OmegaLit::LFrom(i, self.l(y, x)));
        }
        out.sort();
        out
    }

    fn fresh(&self, targets: &[Target<OmegaLit>]) -> Option<OmegaFresh> {
        let lits: Vec<(OmegaLit, usize)> = targets
            .iter()
            .flat_map(|t| {
                t.lits.iter().map(|&l| {
                    let y = match l {
                        OmegaLit::F(_) => usize::MAX,
                        OmegaLit::Eq(i, _)
                        | OmegaLit::E0(i, _)
                        | OmegaLit::E1(i, _)
                        | OmegaLit::LTo(i, _)
                        | OmegaLit::LFrom(i, _) => t.params[i],
                    };
                    (l, y)
                })
            })
            .collect();
        (0..=self.n_classes)
            .flat_map(|class| (0..2).map(move |cell| (class, cell)))
            .find_map(|(class, cell)| self.try_f(class, cell, &lits))
            .or_else(|| self.try_point(&lits))
    }

    fn adjoin(&self, fresh: &OmegaFresh) -> (Self, usize) {
        let mut next = self.clone();
        let e = self.kinds.len();
        match fresh {
            OmegaFresh::F {
                class,
                cell,
                pattern,
            } => {
                next.kinds.push(Kind::F {
                    class: *class,
                    cell: *cell,
                });
                next.n_classes = next.n_classes.max(class + 1);
                for &(p, v) in pattern {
                    next.pattern.insert((p, *class), v);
                }
            }
            OmegaFresh::Point { pattern } => {
                next.kinds.push(Kind::Point);
                for &(class, v) in pattern {
                    next.pattern.insert((e, class), v);
                }
            }
        }
        (next, e)
    }

    fn copy_configs(&self, b: usize, base: &[usize], m: usize) -> Vec<CopyConfig<Self>> {
        let k = base.len();
        let fresh_class = self.n_classes;
        // Placements of the copies. Two copies in different cells of one
        // class are not offered: no third copy could join them.
        let mut placements: Vec<Vec<Kind>> = Vec::new();
        match self.kinds[b] {
            Kind::Point => placements.push(vec![Kind::Point; m]),
            Kind::F { class, cell } => {
                if base.iter().any(|&c| self.e0(b, c)) {
                    placements.push(vec![Kind::F { class, cell }; m]);
                } else {
                    placements.push(vec![
                        Kind::F {
                            class: fresh_class,
                            cell: 0
                        };
                        m
                    ]);
                    placements.push(
                        (0..m)
                            .map(|i| Kind::F {
                                class: fresh_class + i,
                                cell: 0,
                            })
                            .collect(),
                    );
                }
            }
        }
        let mut out = Vec::new();
        for copies in placements {
            let mut kinds: Vec<Kind> = base.iter().map(|&c| self.kinds[c]).collect();
            kinds.extend(copies.iter().copied());
            let mut pattern = BTreeMap::new();
            for (i, &y) in base.iter().enumerate() {
                if self.kinds[y] != Kind::Point {
                    continue;
                }
                for class in 0..self.n_classes {
                    pattern.insert((i, class), self.cell_of(y, class));
                }
                // New classes: the point relates to each copy as to `b`.
                for copy in &copies {
                    if let Kind::F { class, cell } = *copy {
                        if class >= self.n_classes {
                            pattern.insert((i, class), if self.l(y, b) { cell } else { 1 - cell });
                        }
                    }
                }
            }
            for (j, copy) in copies.iter().enumerate() {
                if *copy == Kind::Point {
                    for class in 0..self.n_classes {
                        pattern.insert((k + j, class), self.cell_of(b, class));
                    }
                }
            }
            let model = Omegapede {
                kinds,
                n_classes: fresh_class + m,
                pattern,
            };
            out.push(CopyConfig {
                model,
                base: (0..k).collect(),
                copies: (k..k + m).collect(),
            });
        }
        out
    }

    fn show(&self, lit: &OmegaLit, params: &[String]) -> String {
        let (text, v) = match *lit {
            OmegaLit::F(v) => ("F(e)".to_string(), v),
            OmegaLit::Eq(i, v) => (format!("e = {}", params[i]), v),
            OmegaLit::E0(i, v) => (format!("E_0(e,{})", params[i]), v),
            OmegaLit::E1(i, v) => (format!("E_1(e,{})", params[i]), v),
            OmegaLit::LTo(i, v) => (format!("L(e,{})", params[i]), v),
            OmegaLit::LFrom(i, v) => (format!("L({},e)", params[i]), v),
        };
        if v {
            text
        } else {
            format!("¬{text}")
        }
    }

    fn base_facts(
        &self,
        conflict: &[Target<OmegaLit>],
        name: &dyn Fn(usize) -> String,
    ) -> Vec<String> {
        let mut ys: Vec<usize> = conflict
            .iter()
            .flat_map(|t| {
                t.lits.iter().filter_map(|l| match *l {
                    OmegaLit::LTo(i, true) => Some(t.params[i]),
                    _ => None,
                })
            })
            .collect();
        ys.sort();
        ys.dedup();
        let mut out = Vec::new();
        for (i, &x) in ys.iter().enumerate() {
            for &y in &ys[i + 1..] {
                for (rel, holds) in [("E_0", self.e0(x, y)), ("E_1", self.e1(x, y))] {
                    out.push(format!(
                        "{}{rel}({},{})",
                        if holds { "" } else { "¬" },
                        name(x),
                        name(y)
                    ));
                }
            }
        }
        out
    }

    fn relations(&self) -> Vec<String> {
        OMEGAPEDE_RELATIONS.iter().map(|r| r.to_string()).collect()
    }

    fn divides_over_class(&self, a: usize, b: usize, c: usize, rel: &str) -> Result<bool> {
        self.check(&[a, b, c])?;
        Self::check_rel(rel)?;
        if a == b {
            return Ok(!(rel == "=" && a == c));
        }
        Ok(self.is_f(a) && self.e0(a, b) && !(self.is_f(c) && rel != "total" && self.e0(a, c)))
    }

    /// Over `acl(c_R)`: for F-points `c` and `R` below the total relation
    /// this holds the class of `c` and both of its cells.
    fn acl_key(&self, x: usize, c: usize, rel: &str) -> Result<Vec<i64>> {
        self.check(&[x, c])?;
        Self::check_rel(rel)?;
        let mut key = vec![i64::from(self.is_f(x))];
        if rel == "=" {
            key.extend(
                [
                    x == c,
                    self.e0(x, c),
                    self.e1(x, c),
                    self.l(x, c),
                    self.l(c, x),
                ]
                .map(i64::from),
            );
        }
        if let (Kind::F { class, cell }, true) = (self.kinds[c], rel != "total") {
            key.extend([self.e0(x, c), self.e1(x, c)].map(i64::from));
            if !self.is_f(x) {
                key.push(i64::from(self.cell_of(x, class) == cell));
            }
        }
        Ok(key)
    }

    fn closed_form_divides(&self, a: usize, b: usize, base: &[usize]) -> bool {
        self.divides(a, b, base).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indep::{divides_bruteforce, Dividing};

    fn small() -> Omegapede {
        build_omegapede(3, 2, 3, 2, 2)
    }

    #[test]
    fn builder_meets_axioms() {
        let o = small();
        o.check_axioms().unwrap();
        let s = o.to_structure();
        for x in 0..s.size() {
            assert_eq!(s.holds("F", &[x]).unwrap(), o.is_f(x));
            for y in 0..s.size() {
                assert_eq!(s.holds("L", &[x, y]).unwrap(), o.l(x, y));
                assert_eq!(s.holds("E1", &[x, y]).unwrap(), o.e1(x, y));
            }
        }
        assert!(o.points().len() >= 3);
        assert!(o.n_classes() >= 3);
    }

    #[test]
    fn lemma_examples() {
        let o = small();
        let f = (0..o.size()).find(|&x| o.is_f(x)).unwrap();
        let g = (0..o.size()).find(|&y| y != f && o.e0(f, y)).unwrap();
        assert!(o.divides(f, g, &[]).unwrap());
        assert!(!o.divides(f, g, &[g]).unwrap());
    }

    #[test]
    fn scenario() {
        let r = small().counterexample();
        assert!(r.reproduced(), "{r:?}");
        assert_eq!(
            r.conflict_trace,
            ["L(e,c)", "L(e,d)", "E_0(c,d)", "¬E_1(c,d)"]
        );
    }

    #[test]
    fn oracle_agrees() {
        let o = small();
        let n = o.size();
        let samples = [vec![], vec![0], vec![n - 1], vec![1, n - 2], vec![5, 12]];
        for a in 0..n {
            for b in 0..n {
                for base in &samples {
                    let got = divides_bruteforce(&o, a, b, base);
                    assert_ne!(got, Dividing::Inconclusive);
                    assert_eq!(
                        got == Dividing::Divides,
                        o.closed_form_divides(a, b, base),
                        "a={a} b={b} base={base:?}"
                    );
                }
            }
        }
    }
}
