//! Reduction of an extension problem `tp(ē, b̄_i) = tp(ā_i, b̄_i)` to a
//! chain of problems in which a single element is placed against at most
//! two types, one of them over a single parameter.
//!
//! Coordinates of `ē` are placed one at a time; coordinate `j` is solved
//! over `b̄_i` together with the coordinates already placed. Within a
//! coordinate, the last target is the seed. Each parameter of every other
//! target is merged into it by one step, and the step's solution becomes the
//! new seed over the enlarged parameter list.

use serde::{Deserialize, Serialize};

use super::{solve_targets, Family, Solution, Target};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemTarget {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionProblem {
    pub targets: Vec<ProblemTarget>,
}

/// An element of the original model or the solution of an earlier step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ref {
    Elem(usize),
    Solution(usize),
}

/// The type of `elem` over `src`, demanded of the step's solution over `dst`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Part {
    pub elem: Ref,
    pub src: Vec<Ref>,
    pub dst: Vec<Ref>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub parts: Vec<Part>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub steps: Vec<Step>,
    /// Where each coordinate of the solution ends up.
    pub solution: Vec<Ref>,
}

pub fn reduce_extension_problem(problem: &ExtensionProblem) -> Result<Reduction> {
    let Some(last) = problem.targets.last() else {
        return Err(Error::Malformed(
            "an extension problem needs at least one target".into(),
        ));
    };
    let len = last.a.len();
    if problem.targets.iter().any(|t| t.a.len() != len) {
        return Err(Error::Malformed(
            "all solution tuples must have the same length".into(),
        ));
    }
    let elems = |v: &[usize]| v.iter().map(|&x| Ref::Elem(x)).collect::<Vec<_>>();
    let mut steps: Vec<Step> = Vec::new();
    let mut solution: Vec<Ref> = Vec::new();
    for j in 0..len {
        // Parameters of target i in the original and in the solution.
        let src = |t: &ProblemTarget| [elems(&t.b), elems(&t.a[..j])].concat();
        let dst = |t: &ProblemTarget| [elems(&t.b), solution.clone()].concat();
        let mut seed = Part {
            elem: Ref::Elem(last.a[j]),
            src: src(last),
            dst: dst(last),
        };
        for t in &problem.targets[..problem.targets.len() - 1] {
            for (s, d) in src(t).into_iter().zip(dst(t)) {
                let single = Part {
                    elem: Ref::Elem(t.a[j]),
                    src: vec![s],
                    dst: vec![d],
                };
                steps.push(Step {
                    parts: vec![single, seed.clone()],
                });
                let mut params = seed.dst.clone();
                params.push(d);
                seed = Part {
                    elem: Ref::Solution(steps.len() - 1),
                    src: params.clone(),
                    dst: params,
                };
            }
        }
        if seed.src == seed.dst {
            solution.push(seed.elem);
        } else {
            steps.push(Step { parts: vec![seed] });
            solution.push(Ref::Solution(steps.len() - 1));
        }
    }
    Ok(Reduction { steps, solution })
}

/// The model after replaying a chain, with each step's solution.
#[derive(Clone, Debug)]
pub struct ChainOutcome<F> {
    pub model: F,
    pub step_solutions: Vec<usize>,
    pub solution: Vec<usize>,
}

/// The index of an unsatisfiable step and its conflict.
pub type StepConflict = (usize, Vec<String>);

/// Solves the steps in order, adjoining fresh solutions to the model.
/// Fails with the first unsatisfiable step and its conflict.
pub fn solve_chain<F: Family>(
    model: &F,
    reduction: &Reduction,
) -> Result<std::result::Result<ChainOutcome<F>, StepConflict>> {
    let mut model = model.clone();
    let mut sols: Vec<usize> = Vec::new();
    let check = |r: &Ref, sols: &[usize], size: usize| -> Result<usize> {
        match *r {
            Ref::Elem(x) if x < size => Ok(x),
            Ref::Elem(x) => Err(Error::OutOfRange { index: x, size }),
            Ref::Solution(k) => sols
                .get(k)
                .copied()
                .ok_or_else(|| Error::Malformed(format!("step {k} is not solved yet"))),
        }
    };
    let original = model.size();
    for (k, step) in reduction.steps.iter().enumerate() {
        let mut targets = Vec::new();
        for part in &step.parts {
            let elem = check(&part.elem, &sols, original)?;
            let src = part
                .src
                .iter()
                .map(|r| check(r, &sols, original))
                .collect::<Result<Vec<_>>>()?;
            let dst = part
                .dst
                .iter()
                .map(|r| check(r, &sols, original))
                .collect::<Result<Vec<_>>>()?;
            targets.push(Target {
                params: dst,
                lits: model.describe(elem, &src),
            });
        }
        let names = |ps: &[usize]| ps.iter().map(|p| format!("#{p}")).collect::<Vec<_>>();
        match solve_targets(&model, &targets, &names) {
            Solution::Sat {
                witness: super::Witness::Existing(e),
            } => sols.push(e),
            Solution::Sat {
                witness: super::Witness::Fresh(x),
            } => {
                let (next, e) = model.adjoin(&x);
                model = next;
                sols.push(e);
            }
            Solution::Unsat { conflict } => return Ok(Err((k, conflict))),
        }
    }
    let solution = reduction
        .solution
        .iter()
        .map(|r| check(r, &sols, original))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ok(ChainOutcome {
        model,
        step_solutions: sols,
        solution,
    }))
}
