//! Bipedes: every pair of feet has one body, and each body has one blue
//! and one red leg. The model for independence questions is the set of
//! bodies, with the types they have in the full structure of feet and
//! bodies.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::saturate::{deficits, next_witness};
use super::{claim, splitmix, NamedElement, ScenarioReport, ScenarioVerdict};
use crate::error::{Error, Result};
use crate::indep::{solve_named, CopyConfig, Family, Solution, Target};
use crate::structure::{FinStructure, RelationSymbol, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Role {
    B,
    R,
}

const ROLES: [Role; 2] = [Role::B, Role::R];

/// How `e` relates to the body at `params[pos]`, leg by leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BipedeLit {
    Eq(usize),
    /// The `r`-foot of `e` is the `s`-foot of the parameter.
    FootEq(usize, Role, Role),
    /// The feet differ, and the body joining them is blue at the foot of `e`
    /// iff the flag is set.
    Cross(usize, Role, Role, bool),
}

/// An element of the full structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Elem {
    Foot(usize),
    Body(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FootRef {
    Old(usize),
    New(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BipedeFresh {
    pub blue: FootRef,
    pub red: FootRef,
    /// `(new foot, old foot, blue at the new foot)` for demanded bodies.
    pub colours: Vec<(usize, usize, bool)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipede {
    n_feet: usize,
    /// Per body: (blue foot, red foot).
    bodies: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

pub const BIPEDE_RELATIONS: [&str; 4] = ["=", "E_B", "E_R", "total"];

/// Starts with `n_feet` feet and appends feet until, for every set `A` of at
/// most `k` of the first `n_feet` feet and every colour pattern on `A`, at
/// least `m` feet outside `A` have a body towards each `a ∈ A` coloured as
/// demanded at their own end.
pub fn build_bipede(n_feet: usize, k: usize, m: usize) -> Bipede {
    let mut g = Bipede {
        n_feet: 0,
        bodies: Vec::new(),
        index: HashMap::new(),
    };
    let coin = |u: usize, v: usize| splitmix(((u as u64) << 32) ^ v as u64) & 1 == 0;
    for _ in 0..n_feet {
        let f = g.n_feet;
        let row: Vec<bool> = (0..f).map(|u| coin(u, f)).collect();
        g.push_foot(&row);
    }
    loop {
        let ws: Vec<Vec<Option<u8>>> = (0..g.n_feet)
            .map(|b| {
                (0..n_feet)
                    .map(|a| (a != b).then(|| u8::from(!g.blue_at(g.body_of(a, b), b))))
                    .collect()
            })
            .collect();
        let open = deficits(n_feet, k, m, &ws);
        if open.is_empty() {
            return g;
        }
        let f = g.n_feet;
        let first = next_witness(n_feet, &open, &|a| u8::from(!coin(a, f)));
        let row: Vec<bool> = (0..f)
            .map(|u| {
                if u < n_feet {
                    first[u] == 0
                } else {
                    coin(u, f)
                }
            })
            .collect();
        g.push_foot(&row);
    }
}

impl Bipede {
    /// Adds a foot; `blue_at_new[u]` colours its body towards foot `u`.
    fn push_foot(&mut self, blue_at_new: &[bool]) -> usize {
        let f = self.n_feet;
        self.n_feet += 1;
        for (u, &blue) in blue_at_new.iter().enumerate() {
            let body = if blue { (f, u) } else { (u, f) };
            self.index.insert((u.min(f), u.max(f)), self.bodies.len());
            self.bodies.push(body);
        }
        f
    }

    pub fn n_feet(&self) -> usize {
        self.n_feet
    }

    pub fn n_bodies(&self) -> usize {
        self.bodies.len()
    }

    /// Blue and red foot of a body.
    pub fn legs(&self, body: usize) -> (usize, usize) {
        self.bodies[body]
    }

    pub fn foot(&self, body: usize, r: Role) -> usize {
        match r {
            Role::B => self.bodies[body].0,
            Role::R => self.bodies[body].1,
        }
    }

    pub fn feet_of(&self, body: usize) -> [usize; 2] {
        let (b, r) = self.bodies[body];
        [b, r]
    }

    /// The body with feet `u` and `v`.
    pub fn body_of(&self, u: usize, v: usize) -> usize {
        self.index[&(u.min(v), u.max(v))]
    }

    pub fn find_body(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn blue_at(&self, body: usize, foot: usize) -> bool {
        self.bodies[body].0 == foot
    }

    pub fn e_b(&self, x: usize, y: usize) -> bool {
        self.bodies[x].0 == self.bodies[y].0
    }

    pub fn e_r(&self, x: usize, y: usize) -> bool {
        self.bodies[x].1 == self.bodies[y].1
    }

    /// The full structure: feet `0..n_feet`, then bodies, with F, L, B, R.
    pub fn to_structure(&self) -> FinStructure {
        let sig = Signature::new([
            RelationSymbol::new("F", 1),
            RelationSymbol::new("L", 2),
            RelationSymbol::new("B", 2),
            RelationSymbol::new("R", 2),
        ])
        .expect("distinct names");
        let nf = self.n_feet;
        let mut s = FinStructure::new(sig, nf + self.bodies.len());
        let [f_rel, l_rel, b_rel, r_rel] =
            ["F", "L", "B", "R"].map(|r| s.rel_index(r).expect("declared"));
        for f in 0..nf {
            s.set(f_rel, &[f], true);
        }
        for (i, &(b, r)) in self.bodies.iter().enumerate() {
            for (rel, foot) in [(b_rel, b), (r_rel, r)] {
                s.set(l_rel, &[nf + i, foot], true);
                s.set(rel, &[nf + i, foot], true);
            }
        }
        s
    }

    /// Literals of the pair `(x, p)` as seen from `x`, at position `pos`.
    fn pair_lits(&self, x: usize, p: usize, pos: usize, out: &mut Vec<BipedeLit>) {
        if x == p {
            out.push(BipedeLit::Eq(pos));
            return;
        }
        for r in ROLES {
            for s in ROLES {
                let (u, v) = (self.foot(x, r), self.foot(p, s));
                if u == v {
                    out.push(BipedeLit::FootEq(pos, r, s));
                } else {
                    out.push(BipedeLit::Cross(
                        pos,
                        r,
                        s,
                        self.blue_at(self.body_of(u, v), u),
                    ));
                }
            }
        }
    }

    /// Checks the full structure: each body has two feet, one blue leg and
    /// one red leg, and each pair of feet carries exactly one body.
    pub fn check_axioms(&self) -> Result<()> {
        let s = self.to_structure();
        let nf = self.n_feet;
        let fail = |axiom: &str, w: Vec<usize>| Error::Axiom {
            axiom: axiom.into(),
            witness: w.iter().map(usize::to_string).collect(),
        };
        let mut seen: HashMap<[usize; 2], usize> = HashMap::new();
        for x in nf..s.size() {
            let legs = |rel: usize| (0..nf).filter(|&f| s.holds2(rel, x, f)).collect::<Vec<_>>();
            let (l, b, r) = (
                legs(s.rel_index("L")?),
                legs(s.rel_index("B")?),
                legs(s.rel_index("R")?),
            );
            if l.len() != 2 || b.len() != 1 || r.len() != 1 || b[0] == r[0] {
                return Err(fail("one blue and one red leg", vec![x]));
            }
            if let Some(y) = seen.insert([l[0], l[1]], x) {
                return Err(fail("one body per pair of feet", vec![y, x]));
            }
        }
        if seen.len() != nf * nf.saturating_sub(1) / 2 {
            return Err(fail("every pair of feet has a body", vec![]));
        }
        Ok(())
    }

    /// The relations of the reduct on bodies: one per realized pair type.
    pub fn reduct(&self) -> FinStructure {
        let n = self.bodies.len();
        let mut ids: HashMap<Vec<BipedeLit>, usize> = HashMap::new();
        let mut table = vec![vec![usize::MAX; n]; n];
        for (x, row) in table.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                if x != y {
                    let d = self.describe(x, &[y]);
                    let next = ids.len();
                    *cell = *ids.entry(d).or_insert(next);
                }
            }
        }
        // Name relations in the order of their descriptors.
        let mut sorted: Vec<(Vec<BipedeLit>, usize)> = ids.into_iter().collect();
        sorted.sort();
        let mut rename = vec![0; sorted.len()];
        for (new, (_, old)) in sorted.iter().enumerate() {
            rename[*old] = new;
        }
        let width = sorted.len().to_string().len();
        let names: Vec<String> = (0..sorted.len()).map(|i| format!("p{i:0width$}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut s = FinStructure::new(Signature::binary(&refs), n);
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    s.set(rename[table[x][y]], &[x, y], true);
                }
            }
        }
        s
    }

    fn check_elem(&self, a: Elem) -> Result<()> {
        match a {
            Elem::Foot(f) if f >= self.n_feet => Err(Error::OutOfRange {
                index: f,
                size: self.n_feet,
            }),
            Elem::Body(b) if b >= self.bodies.len() => Err(Error::OutOfRange {
                index: b,
                size: self.bodies.len(),
            }),
            _ => Ok(()),
        }
    }

    /// Feet of all bodies in `a`, then the body of every pair of feet.
    pub fn cl(&self, a: &BTreeSet<Elem>) -> Result<BTreeSet<Elem>> {
        for &x in a {
            self.check_elem(x)?;
        }
        let mut out = a.clone();
        for &x in a {
            if let Elem::Body(b) = x {
                out.extend(self.feet_of(b).map(Elem::Foot));
            }
        }
        let feet: Vec<usize> = out
            .iter()
            .filter_map(|x| {
                if let Elem::Foot(f) = x {
                    Some(*f)
                } else {
                    None
                }
            })
            .collect();
        for (i, &u) in feet.iter().enumerate() {
            for &v in &feet[i + 1..] {
                out.insert(Elem::Body(self.body_of(u, v)));
            }
        }
        Ok(out)
    }

    fn feet_of_all(&self, bodies: &[usize]) -> BTreeSet<usize> {
        bodies.iter().flat_map(|&b| self.feet_of(b)).collect()
    }

    fn check(&self, xs: &[usize]) -> Result<()> {
        match xs.iter().find(|&&x| x >= self.bodies.len()) {
            Some(&x) => Err(Error::OutOfRange {
                index: x,
                size: self.bodies.len(),
            }),
            None => Ok(()),
        }
    }

    /// `ā` divides from `b̄` over `c̄` iff some `a ∈ ā` and `b ∈ b̄` share a
    /// foot that is not a foot of any body in `c̄`.
    pub fn divides(&self, abar: &[usize], bbar: &[usize], cbar: &[usize]) -> Result<bool> {
        self.check(abar)?;
        self.check(bbar)?;
        self.check(cbar)?;
        let base = self.feet_of_all(cbar);
        Ok(abar.iter().any(|&a| {
            bbar.iter().any(|&b| {
                self.feet_of(a)
                    .iter()
                    .any(|f| self.feet_of(b).contains(f) && !base.contains(f))
            })
        }))
    }

    /// Feet of the base `c_R` for the relation `rel`.
    fn base_feet(&self, c: usize, rel: &str) -> Result<Vec<usize>> {
        let (b, r) = self.bodies[c];
        Ok(match rel {
            "=" => vec![b, r],
            "E_B" => vec![b],
            "E_R" => vec![r],
            "total" => vec![],
            _ => {
                return Err(Error::Unsupported(format!(
                    "`{rel}` is not a relation of the bipede family"
                )))
            }
        })
    }

    /// Feet `i, j, k, l, m` with `a = {i,j}`, `b = {k,l}`, `c = {j,l}`,
    /// `d = {l,m}`, `B(a,j)`, `R(c,j)`, `B(b,l)`, `R(d,l)`, over the
    /// `E_B`-class of `c`.
    pub fn counterexample(&self) -> ScenarioReport {
        let Some(feet) = self.find_pattern() else {
            return ScenarioReport::inapplicable("no five feet with the demanded leg colours");
        };
        let [i, j, k, l, m] = feet;
        let (a, b, c, d) = (
            self.body_of(i, j),
            self.body_of(k, l),
            self.body_of(j, l),
            self.body_of(l, m),
        );
        let ind = |x: usize, y: usize| !self.divides_over_class(x, y, c, "E_B").expect("valid");
        let n = self.bodies.len();
        let meet_is_eq =
            (0..n).all(|x| (0..n).all(|y| (self.e_b(x, y) && self.e_r(x, y)) == (x == y)));
        let claims = vec![
            claim("c ⫫_{c_E_B} d", ind(c, d), true),
            claim("b ⫫_{c_E_B} d", ind(b, d), true),
            claim("a ⫫_{c_E_B} c", ind(a, c), false),
            claim("E_B ∩ E_R is equality", meet_is_eq, true),
        ];
        let letters = ["a", "b", "c", "d"];
        let names = |ps: &[usize]| {
            ps.iter()
                .map(|&x| {
                    letters[[a, b, c, d].iter().position(|&y| y == x).unwrap_or(0)].to_string()
                })
                .collect()
        };
        let (verdict, mut conflict_trace) = match solve_named(self, a, c, b, &[d], &names) {
            Solution::Sat { .. } => (ScenarioVerdict::Sat, Vec::new()),
            Solution::Unsat { conflict } => (ScenarioVerdict::Unsat, conflict),
        };
        if verdict == ScenarioVerdict::Unsat {
            let mut trace = self.derivation([i, j, k, l, m], b, d);
            trace.append(&mut conflict_trace);
            conflict_trace = trace;
        }
        let mut witnesses: Vec<NamedElement> = ["i", "j", "k", "l", "m"]
            .iter()
            .zip(feet)
            .map(|(nm, f)| NamedElement {
                name: nm.to_string(),
                index: f,
                element: format!("foot {f}"),
            })
            .collect();
        for (nm, x) in letters.iter().zip([a, b, c, d]) {
            let (bl, rd) = self.bodies[x];
            witnesses.push(NamedElement {
                name: nm.to_string(),
                index: x,
                element: format!("{{{bl},{rd}}} blue at {bl}"),
            });
        }
        ScenarioReport {
            verdict,
            witnesses,
            claims,
            conflict_trace,
        }
    }

    fn find_pattern(&self) -> Option<[usize; 5]> {
        let nf = self.n_feet;
        for l in 0..nf {
            for j in (0..nf).filter(|&j| j != l && self.blue_at(self.body_of(j, l), l)) {
                for m in
                    (0..nf).filter(|&m| m != l && m != j && !self.blue_at(self.body_of(l, m), l))
                {
                    let Some(k) = (0..nf)
                        .find(|&k| ![j, l, m].contains(&k) && self.blue_at(self.body_of(k, l), l))
                    else {
                        continue;
                    };
                    let Some(i) = (0..nf).find(|&i| {
                        ![j, k, l, m].contains(&i) && self.blue_at(self.body_of(i, j), j)
                    }) else {
                        continue;
                    };
                    return Some([i, j, k, l, m]);
                }
            }
        }
        None
    }

    /// The forced shape of a solution and why it fails, checked step by step.
    fn derivation(&self, [_, _, _, l, m]: [usize; 5], b: usize, d: usize) -> Vec<String> {
        let (b_blue, b_red) = self.bodies[b];
        let d_blue = self.bodies[d].0;
        let mut out = vec![
            "tp(e,c) = tp(a,c) forces j ∈ e with B(e,j)".to_string(),
            "e ≠ c forces l ∉ e".to_string(),
        ];
        if b_blue == l && d_blue == m {
            out.push("b ∩ d ≠ ∅ forces e ∩ d ≠ ∅, so m ∈ e".into());
            out.push("e = {j,m}, and B(e,j) gives R(e,m)".into());
            if b_red != d_blue {
                out.push("R(e,m) ∧ B(d,m) but ¬∃x(R(b,x) ∧ B(d,x))".into());
                out.push("R(e,m) contradicts tp(e,d)=tp(b,d)".into());
            }
        }
        out
    }
}

impl Family for Bipede {
    type Lit = BipedeLit;
    type Fresh = BipedeFresh;

    fn size(&self) -> usize {
        self.bodies.len()
    }

    fn describe(&self, x: usize, params: &[usize]) -> Vec<BipedeLit> {
        let mut out = Vec::with_capacity(4 * params.len());
        for (pos, &p) in params.iter().enumerate() {
            self.pair_lits(x, p, pos, &mut out);
        }
        out.sort();
        out
    }

    fn fresh(&self, targets: &[Target<BipedeLit>]) -> Option<BipedeFresh> {
        let nf = self.n_feet;
        let lits: Vec<(BipedeLit, usize)> = targets
            .iter()
            .flat_map(|t| {
                t.lits.iter().map(|&l| {
                    let pos = match l {
                        BipedeLit::Eq(p) | BipedeLit::FootEq(p, ..) | BipedeLit::Cross(p, ..) => p,
                    };
                    (l, t.params[pos])
                })
            })
            .collect();
        if lits.iter().any(|(l, _)| matches!(l, BipedeLit::Eq(_))) {
            return None;
        }
        let mut candidates: Vec<(FootRef, FootRef)> = Vec::new();
        for u in 0..nf {
            candidates.push((FootRef::Old(u), FootRef::New(0)));
            candidates.push((FootRef::New(0), FootRef::Old(u)));
        }
        candidates.push((FootRef::New(0), FootRef::New(1)));
        'next: for (blue, red) in candidates {
            let foot = |r: Role| if r == Role::B { blue } else { red };
            let mut colours: HashMap<(usize, usize), bool> = HashMap::new();
            for &(lit, p) in &lits {
                match lit {
                    BipedeLit::Eq(_) => continue 'next,
                    BipedeLit::FootEq(_, r, s) => {
                        if foot(r) != FootRef::Old(self.foot(p, s)) {
                            continue 'next;
                        }
                    }
                    BipedeLit::Cross(_, r, s, want) => {
                        let v = self.foot(p, s);
                        let other = foot(if r == Role::B { Role::R } else { Role::B });
                        match foot(r) {
                            FootRef::Old(u) if u == v => continue 'next,
                            FootRef::Old(u) => {
                                if self.blue_at(self.body_of(u, v), u) != want {
                                    continue 'next;
                                }
                            }
                            // The body towards the other foot of `e` is `e` itself.
                            FootRef::New(_) if other == FootRef::Old(v) => {
                                if (r == Role::B) != want {
                                    continue 'next;
                                }
                            }
                            FootRef::New(n) => {
                                if *colours.entry((n, v)).or_insert(want) != want {
                                    continue 'next;
                                }
                            }
                        }
                    }
                }
            }
            let mut colours: Vec<(usize, usize, bool)> =
                colours.into_iter().map(|((n, v), w)| (n, v, w)).collect();
            colours.sort();
            return Some(BipedeFresh { blue, red, colours });
        }
        None
    }

    fn adjoin(&self, fresh: &BipedeFresh) -> (Self, usize) {
        let mut next = self.clone();
        let demanded: HashMap<(usize, usize), bool> =
            fresh.colours.iter().map(|&(n, v, w)| ((n, v), w)).collect();
        let n_new = [fresh.blue, fresh.red]
            .iter()
            .filter(|f| matches!(f, FootRef::New(_)))
            .count();
        let mut ids = Vec::new();
        for n in 0..n_new {
            let f = next.n_feet;
            let mut row: Vec<bool> = (0..f)
                .map(|u| {
                    demanded
                        .get(&(n, u))
                        .copied()
                        .unwrap_or(splitmix(((u as u64) << 32) ^ f as u64) & 1 == 0)
                })
                .collect();
            // The body between two new feet is the new element itself.
            if n == 1 {
                row[ids[0]] = fresh.red == FootRef::New(0);
            }
            ids.push(next.push_foot(&row));
        }
        let resolve = |r: FootRef| match r {
            FootRef::Old(u) => u,
            FootRef::New(n) => ids[n],
        };
        let (bf, rf) = (resolve(fresh.blue), resolve(fresh.red));
        let e = next.body_of(bf, rf);
        // A single new foot: orient its body towards the old foot as `e`.
        next.bodies[e] = (bf, rf);
        (next, e)
    }

    fn copy_configs(&self, b: usize, base: &[usize], m: usize) -> Vec<CopyConfig<Self>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Place {
            Base(usize),
            Shared,
            PerCopy,
        }
        let base_feet: Vec<usize> = self.feet_of_all(base).into_iter().collect();
        let options = |r: Role| -> Vec<Place> {
            let f = self.foot(b, r);
            match base_feet.iter().position(|&x| x == f) {
                Some(i) => vec![Place::Base(i)],
                None => vec![Place::PerCopy, Place::Shared],
            }
        };
        let mut out = Vec::new();
        for pb in options(Role::B) {
            for pr in options(Role::R) {
                if !matches!(pb, Place::PerCopy) && !matches!(pr, Place::PerCopy) {
                    continue;
                }
                let places = [pb, pr];
                // Orientation bits: per-copy/per-copy pairs by (lower role, upper role),
                // then shared/per-copy pairs.
                let per: Vec<usize> = (0..2).filter(|&i| places[i] == Place::PerCopy).collect();
                let shared: Vec<usize> = (0..2).filter(|&i| places[i] == Place::Shared).collect();
                let n_bits = per.len() * per.len() + shared.len() * per.len();
                for bits in 0..1u32 << n_bits {
                    out.push(self.copy_model(
                        b,
                        base,
                        &base_feet,
                        m,
                        places.map(|p| match p {
                            Place::Base(i) => Some(i),
                            _ => None,
                        }),
                        places.map(|p| p == Place::Shared),
                        bits,
                    ));
                }
            }
        }
        out
    }

    fn show(&self, lit: &BipedeLit, params: &[String]) -> String {
        let leg = |r: Role| if r == Role::B { "blue" } else { "red" };
        match *lit {
            BipedeLit::Eq(p) => format!("e = {}", params[p]),
            BipedeLit::FootEq(p, r, s) => {
                format!("{} foot of e = {} foot of {}", leg(r), leg(s), params[p])
            }
            BipedeLit::Cross(p, r, s, w) => format!(
                "{} foot of e ≠ {} foot of {}, joined {} at e's end",
                leg(r),
                leg(s),
                params[p],
                if w { "blue" } else { "red" }
            ),
        }
    }

    fn relations(&self) -> Vec<String> {
        BIPEDE_RELATIONS.iter().map(|r| r.to_string()).collect()
    }

    fn divides_over_class(&self, a: usize, b: usize, c: usize, rel: &str) -> Result<bool> {
        self.check(&[a, b, c])?;
        let base = self.base_feet(c, rel)?;
        let fb = self.feet_of(b);
        Ok(self
            .feet_of(a)
            .iter()
            .any(|f| fb.contains(f) && !base.contains(f)))
    }

    /// Over `acl(c_R)`: the pair type with `c` for equality, how `x` meets
    /// the base foot for `E_B` and `E_R`, nothing for the total relation.
    fn acl_key(&self, x: usize, c: usize, rel: &str) -> Result<Vec<i64>> {
        self.check(&[x, c])?;
        let base = self.base_feet(c, rel)?;
        if rel == "=" {
            return Ok(self
                .describe(x, &[c])
                .into_iter()
                .flat_map(|l| match l {
                    BipedeLit::Eq(_) => [0, 0, 0, 0],
                    BipedeLit::FootEq(_, r, s) => [1, r as i64, s as i64, 0],
                    BipedeLit::Cross(_, r, s, w) => [2, r as i64, s as i64, i64::from(w)],
                })
                .collect());
        }
        // Per leg of `x`: 2 if it stands on the base foot, else the colour at
        // its end of the body joining it to the base foot.
        Ok(base
            .iter()
            .flat_map(|&f| {
                self.feet_of(x).map(|u| {
                    if u == f {
                        2
                    } else {
                        i64::from(self.blue_at(self.body_of(u, f), u))
                    }
                })
            })
            .collect())
    }

    fn closed_form_divides(&self, a: usize, b: usize, base: &[usize]) -> bool {
        self.divides(&[a], &[b], base).unwrap_or(false)
    }

    fn in_closure(&self, b: usize, base: &[usize]) -> bool {
        let feet = self.feet_of_all(base);
        self.feet_of(b).iter().all(|f| feet.contains(f))
    }
}

impl Bipede {
    /// The model on the base feet and the copies' feet. `forced[r]` is the
    /// base foot index of role `r` if fixed, `shared[r]` marks one new foot
    /// for all copies, and `bits` orients the bodies between copies.
    #[allow(clippy::too_many_arguments)]
    fn copy_model(
        &self,
        b: usize,
        base: &[usize],
        base_feet: &[usize],
        m: usize,
        forced: [Option<usize>; 2],
        shared: [bool; 2],
        bits: u32,
    ) -> CopyConfig<Self> {
        let nb = base_feet.len();
        // Foot ids in the model: base feet, then shared feet, then per-copy feet.
        let mut next = nb;
        let mut shared_id = [usize::MAX; 2];
        for r in 0..2 {
            if shared[r] {
                shared_id[r] = next;
                next += 1;
            }
        }
        let mut copy_feet = vec![[usize::MAX; 2]; m];
        for feet in copy_feet.iter_mut() {
            for r in 0..2 {
                feet[r] = match (forced[r], shared[r]) {
                    (Some(f), _) => f,
                    (None, true) => shared_id[r],
                    (None, false) => {
                        next += 1;
                        next - 1
                    }
                };
            }
        }
        let total = next;
        // Which original foot and which copy each model foot stands for.
        let orig = |f: usize| -> Option<usize> { (f < nb).then(|| base_feet[f]) };
        let role_of = |f: usize| -> Option<(usize, usize)> {
            (0..m)
                .flat_map(|i| (0..2).map(move |r| (i, r)))
                .find(|&(i, r)| copy_feet[i][r] == f)
        };
        let b_feet = [self.foot(b, Role::B), self.foot(b, Role::R)];
        let mut bit = 0;
        let mut orient: HashMap<(usize, usize), bool> = HashMap::new();
        let mut take = || {
            let v = bits >> bit & 1 == 1;
            bit += 1;
            v
        };
        // Per-copy pairs: body between lower copy's role r and upper copy's role s.
        let per: Vec<usize> = (0..2)
            .filter(|&r| forced[r].is_none() && !shared[r])
            .collect();
        for &r in &per {
            for &s in &per {
                orient.insert((r, s), take());
            }
        }
        let sh: Vec<usize> = (0..2).filter(|&r| shared[r]).collect();
        let mut shared_orient: HashMap<(usize, usize), bool> = HashMap::new();
        for &r in &sh {
            for &s in &per {
                shared_orient.insert((r, s), take());
            }
        }
        let mut g = Bipede {
            n_feet: 0,
            bodies: Vec::new(),
            index: HashMap::new(),
        };
        for f in 0..total {
            let row: Vec<bool> = (0..f)
                .map(|u| {
                    // Is the body {u, f} blue at f?
                    match (orig(u), orig(f)) {
                        (Some(x), Some(y)) => self.blue_at(self.body_of(x, y), y),
                        (Some(x), None) => {
                            let (_, r) = role_of(f).expect("copy foot");
                            self.blue_at(self.body_of(x, b_feet[r]), b_feet[r])
                        }
                        (None, Some(_)) => unreachable!("base feet come first"),
                        (None, None) => {
                            let (iu, ru) = role_of(u).expect("copy foot");
                            let (iv, rv) = role_of(f).expect("copy foot");
                            let own = |i: usize| {
                                copy_feet[i][0] == u && copy_feet[i][1] == f
                                    || copy_feet[i][1] == u && copy_feet[i][0] == f
                            };
                            if let Some(i) = (0..m).find(|&i| own(i)) {
                                // The copy itself: blue at its B-foot.
                                return copy_feet[i][0] == f;
                            }
                            if shared[ru] {
                                return !shared_orient[&(ru, rv)];
                            }
                            if shared[rv] {
                                return shared_orient[&(rv, ru)];
                            }
                            let (lo_r, hi_r, f_is_lo) = if iu < iv {
                                (ru, rv, false)
                            } else {
                                (rv, ru, true)
                            };
                            orient[&(lo_r, hi_r)] == f_is_lo
                        }
                    }
                })
                .collect();
            g.push_foot(&row);
        }
        let base_bodies: Vec<usize> = base
            .iter()
            .map(|&x| {
                let [p, q] = self.feet_of(x);
                let pi = base_feet.iter().position(|&f| f == p).expect("base foot");
                let qi = base_feet.iter().position(|&f| f == q).expect("base foot");
                g.body_of(pi, qi)
            })
            .collect();
        let copies = copy_feet.iter().map(|f| g.body_of(f[0], f[1])).collect();
        CopyConfig {
            model: g,
            base: base_bodies,
            copies,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indep::{divides_bruteforce, Dividing};

    fn set(xs: &[Elem]) -> BTreeSet<Elem> {
        xs.iter().copied().collect()
    }

    #[test]
    fn legs_are_bicoloured() {
        let g = build_bipede(6, 1, 3);
        g.check_axioms().unwrap();
        for x in 0..g.n_bodies() {
            let (b, r) = g.legs(x);
            assert_ne!(b, r);
            assert!(g.blue_at(x, b) && !g.blue_at(x, r));
        }
        for a in 0..6 {
            for want in [true, false] {
                let n = (0..g.n_feet())
                    .filter(|&f| f != a && g.blue_at(g.body_of(a, f), f) == want)
                    .count();
                assert!(n >= 3);
            }
        }
    }

    #[test]
    fn closure_examples() {
        let g = build_bipede(5, 1, 1);
        let b12 = g.body_of(1, 2);
        let got = g.cl(&set(&[Elem::Body(b12)])).unwrap();
        assert_eq!(got, set(&[Elem::Body(b12), Elem::Foot(1), Elem::Foot(2)]));
        let got = g.cl(&set(&[Elem::Foot(1), Elem::Foot(2)])).unwrap();
        assert_eq!(got, set(&[Elem::Body(b12), Elem::Foot(1), Elem::Foot(2)]));
        let b34 = g.body_of(3, 4);
        let got = g.cl(&set(&[Elem::Body(b12), Elem::Body(b34)])).unwrap();
        assert_eq!(got.len(), 4 + 6);
    }

    #[test]
    fn dividing_examples() {
        let g = build_bipede(6, 1, 1);
        let (a, b) = (g.body_of(1, 2), g.body_of(2, 3));
        assert!(g.divides(&[a], &[b], &[]).unwrap());
        assert!(!g.divides(&[a], &[b], &[g.body_of(2, 5)]).unwrap());
        assert!(!g.divides(&[a], &[b], &[a]).unwrap());
        // Foot 2 is shared and not a base foot, though a meets the base.
        assert!(g.divides(&[a], &[b], &[g.body_of(1, 5)]).unwrap());
        assert_eq!(
            divides_bruteforce(&g, a, b, &[g.body_of(1, 5)]),
            Dividing::Divides
        );
        assert_eq!(
            divides_bruteforce(&g, a, b, &[g.body_of(2, 5)]),
            Dividing::Independent
        );
    }

    #[test]
    fn scenario() {
        let g = build_bipede(6, 2, 2);
        let r = g.counterexample();
        assert!(r.reproduced(), "{r:?}");
        assert!(r
            .conflict_trace
            .iter()
            .any(|l| l == "R(e,m) contradicts tp(e,d)=tp(b,d)"));
    }

    #[test]
    fn reduct_has_two_equivalences() {
        let g = build_bipede(4, 2, 3);
        let m = g.reduct();
        let found = crate::equiv::discover_equiv_relations(&m).unwrap();
        let n = g.n_bodies();
        let mats: Vec<Vec<Vec<bool>>> = found.iter().map(|d| d.matrix(&m).unwrap()).collect();
        let eb: Vec<Vec<bool>> = (0..n)
            .map(|x| (0..n).map(|y| g.e_b(x, y)).collect())
            .collect();
        let er: Vec<Vec<bool>> = (0..n)
            .map(|x| (0..n).map(|y| g.e_r(x, y)).collect())
            .collect();
        assert_eq!(mats.len(), 2);
        assert!(mats.contains(&eb) && mats.contains(&er));
    }

    #[test]
    fn adjoin_realizes_fresh() {
        let g = build_bipede(4, 1, 1);
        let (a, c, b, d) = (
            g.body_of(0, 1),
            g.body_of(1, 2),
            g.body_of(0, 3),
            g.body_of(2, 3),
        );
        let targets = vec![
            Target {
                params: vec![c],
                lits: g.describe(a, &[c]),
            },
            Target {
                params: vec![d],
                lits: g.describe(b, &[d]),
            },
        ];
        if let Some(fresh) = g.fresh(&targets) {
            let (h, e) = g.adjoin(&fresh);
            assert_eq!(h.describe(e, &[c]), g.describe(a, &[c]));
            assert_eq!(h.describe(e, &[d]), g.describe(b, &[d]));
        }
    }

    #[test]
    fn oracle_agrees_on_small_fragment() {
        let g = build_bipede(5, 1, 2);
        let bodies: Vec<usize> = (0..5)
            .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
            .map(|(u, v)| g.body_of(u, v))
            .collect();
        for &a in &bodies {
            for &b in &bodies {
                for base in [vec![], vec![bodies[0]], vec![bodies[4], bodies[9]]] {
                    let got = divides_bruteforce(&g, a, b, &base);
                    assert_ne!(got, Dividing::Inconclusive, "a={a} b={b} base={base:?}");
                    assert_eq!(
                        got == Dividing::Divides,
                        g.closed_form_divides(a, b, &base),
                        "a={a} b={b} base={base:?}"
                    );
                }
            }
        }
    }
}
