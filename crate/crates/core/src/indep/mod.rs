//! Family-generic independence machinery: a brute-force dividing oracle,
//! the two-type extension solver, the reduction of general extension
//! problems to two-type ones, and the premise checker.
//!
//! A family is anything implementing [`Family`]: it can describe an
//! element relative to a parameter tuple by position-relative literals,
//! decide whether a fresh element could satisfy a set of such literals, and
//! build extensions holding copies of an element over a base.

mod premises;
mod reduce;
mod urysohn;

use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

pub use premises::{check_premises, PremiseReport};
pub use reduce::{
    reduce_extension_problem, solve_chain, ChainOutcome, ExtensionProblem, Part, ProblemTarget,
    Reduction, Ref, Step, StepConflict,
};
pub use urysohn::DistLit;

/// Literals an element must satisfy relative to `params`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Target<L> {
    pub params: Vec<usize>,
    pub lits: Vec<L>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness<X> {
    Existing(usize),
    Fresh(X),
}

/// An extension of a model holding `copies` of some element over `base`.
#[derive(Clone, Debug)]
pub struct CopyConfig<F> {
    pub model: F,
    pub base: Vec<usize>,
    pub copies: Vec<usize>,
}

pub trait Family: Clone {
    type Lit: Clone + Debug + Eq + Hash + Ord;
    type Fresh: Clone + Debug + PartialEq + Serialize;

    fn size(&self) -> usize;

    /// Every literal relating `x` to the positions of `params`, sorted.
    fn describe(&self, x: usize, params: &[usize]) -> Vec<Self::Lit>;

    /// A fresh element (outside the model) satisfying every target, if one
    /// exists in some one-point extension.
    fn fresh(&self, targets: &[Target<Self::Lit>]) -> Option<Self::Fresh>;

    /// The model with the fresh element added, and its index.
    fn adjoin(&self, fresh: &Self::Fresh) -> (Self, usize);

    /// Candidate extensions with `m` copies of `b` over `base`. They are
    /// verified by the caller, so candidates may be over-generated.
    fn copy_configs(&self, b: usize, base: &[usize], m: usize) -> Vec<CopyConfig<Self>>;

    /// A literal with the solution written `e` and parameters by name.
    fn show(&self, lit: &Self::Lit, params: &[String]) -> String;

    /// Facts among the parameters that explain a minimized conflict.
    fn base_facts(
        &self,
        _conflict: &[Target<Self::Lit>],
        _name: &dyn Fn(usize) -> String,
    ) -> Vec<String> {
        Vec::new()
    }

    /// Whether `b` is algebraic over `base`, so that nothing divides against it.
    fn in_closure(&self, b: usize, base: &[usize]) -> bool {
        base.contains(&b)
    }

    /// Names of the definable equivalence relations usable as imaginary bases.
    fn relations(&self) -> Vec<String>;

    /// Whether `tp(a / b, c_R)` divides over the class of `c` under `rel`.
    fn divides_over_class(&self, a: usize, b: usize, c: usize, rel: &str) -> crate::Result<bool>;

    /// A key such that equal keys mean equal types over `acl(c_R)`.
    fn acl_key(&self, x: usize, c: usize, rel: &str) -> crate::Result<Vec<i64>>;

    /// The family's closed-form dividing rule for real parameters.
    fn closed_form_divides(&self, a: usize, b: usize, base: &[usize]) -> bool;
}

fn satisfies<F: Family>(model: &F, e: usize, targets: &[Target<F::Lit>]) -> bool {
    targets.iter().all(|t| {
        let have = model.describe(e, &t.params);
        t.lits.iter().all(|l| have.binary_search(l).is_ok())
    })
}

/// The first existing element satisfying all targets, else a fresh one.
pub fn realize<F: Family>(model: &F, targets: &[Target<F::Lit>]) -> Option<Witness<F::Fresh>> {
    (0..model.size())
        .find(|&e| satisfies(model, e, targets))
        .map(Witness::Existing)
        .or_else(|| model.fresh(targets).map(Witness::Fresh))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dividing {
    Divides,
    Independent,
    Inconclusive,
}

/// Searches for `m ∈ {2, 3, 4}` copies of `b` over `base`, all with the type
/// of `b` over `base` and with one common pairwise type, such that no
/// element has the type of `a` over every copy together with the base.
pub fn divides_bruteforce<F: Family>(model: &F, a: usize, b: usize, base: &[usize]) -> Dividing {
    let mut base = base.to_vec();
    base.sort_unstable();
    base.dedup();
    let base = &base[..];
    if model.in_closure(b, base) {
        return Dividing::Independent;
    }
    let mut params = vec![b];
    params.extend_from_slice(base);
    let a_lits = model.describe(a, &params);
    let b_over_base = model.describe(b, base);
    let mut verified_any = false;
    for m in 2..=4 {
        for cfg in model.copy_configs(b, base, m) {
            if !verify_copies(&cfg, &b_over_base) {
                continue;
            }
            verified_any = true;
            let targets: Vec<Target<F::Lit>> = cfg
                .copies
                .iter()
                .map(|&bi| {
                    let mut p = vec![bi];
                    p.extend_from_slice(&cfg.base);
                    Target {
                        params: p,
                        lits: a_lits.clone(),
                    }
                })
                .collect();
            if realize(&cfg.model, &targets).is_none() {
                return Dividing::Divides;
            }
        }
    }
    if verified_any {
        Dividing::Independent
    } else {
        Dividing::Inconclusive
    }
}

fn verify_copies<F: Family>(cfg: &CopyConfig<F>, b_over_base: &[F::Lit]) -> bool {
    let model = &cfg.model;
    if cfg
        .copies
        .iter()
        .any(|&c| model.describe(c, &cfg.base) != b_over_base)
    {
        return false;
    }
    let pair = |i: usize, j: usize| {
        let mut p = vec![cfg.copies[j]];
        p.extend_from_slice(&cfg.base);
        model.describe(cfg.copies[i], &p)
    };
    let first = pair(0, 1);
    let n = cfg.copies.len();
    (0..n).all(|i| (i + 1..n).all(|j| pair(i, j) == first))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "UPPERCASE")]
pub enum Solution<X> {
    Sat { witness: Witness<X> },
    Unsat { conflict: Vec<String> },
}

impl<X> Solution<X> {
    pub fn is_sat(&self) -> bool {
        matches!(self, Solution::Sat { .. })
    }
}

/// The two-type problem: is there `e` with `tp(e, c) = tp(a, c)` and
/// `tp(e, d̄) = tp(b, d̄)`? Unsatisfiable problems come with a conflict
/// minimized by dropping one literal at a time.
pub fn extension_solve<F: Family>(
    model: &F,
    a: usize,
    c: usize,
    b: usize,
    dbar: &[usize],
) -> Solution<F::Fresh> {
    let names = |ps: &[usize]| ps.iter().map(|p| format!("#{p}")).collect::<Vec<_>>();
    solve_named(model, a, c, b, dbar, &names)
}

/// As [`extension_solve`], with a naming function for parameters in the conflict.
pub fn solve_named<F: Family>(
    model: &F,
    a: usize,
    c: usize,
    b: usize,
    dbar: &[usize],
    names: &dyn Fn(&[usize]) -> Vec<String>,
) -> Solution<F::Fresh> {
    let targets = vec![
        Target {
            params: vec![c],
            lits: model.describe(a, &[c]),
        },
        Target {
            params: dbar.to_vec(),
            lits: model.describe(b, dbar),
        },
    ];
    solve_targets(model, &targets, names)
}

pub fn solve_targets<F: Family>(
    model: &F,
    targets: &[Target<F::Lit>],
    names: &dyn Fn(&[usize]) -> Vec<String>,
) -> Solution<F::Fresh> {
    if let Some(w) = realize(model, targets) {
        return Solution::Sat { witness: w };
    }
    let mut kept: Vec<(usize, F::Lit)> = targets
        .iter()
        .enumerate()
        .flat_map(|(i, t)| t.lits.iter().map(move |l| (i, l.clone())))
        .collect();
    let build = |kept: &[(usize, F::Lit)]| -> Vec<Target<F::Lit>> {
        targets
            .iter()
            .enumerate()
            .map(|(i, t)| Target {
                params: t.params.clone(),
                lits: kept
                    .iter()
                    .filter(|(j, _)| *j == i)
                    .map(|(_, l)| l.clone())
                    .collect(),
            })
            .collect()
    };
    let mut i = 0;
    while i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        if realize(model, &build(&trial)).is_none() {
            kept = trial;
        } else {
            i += 1;
        }
    }
    let minimal = build(&kept);
    let mut conflict: Vec<String> = kept
        .iter()
        .map(|(i, l)| model.show(l, &names(&targets[*i].params)))
        .collect();
    let name = |x: usize| names(&[x]).remove(0);
    let nonempty: Vec<Target<F::Lit>> =
        minimal.into_iter().filter(|t| !t.lits.is_empty()).collect();
    conflict.extend(model.base_facts(&nonempty, &name));
    Solution::Unsat { conflict }
}
