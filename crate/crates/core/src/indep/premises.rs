use serde::Serialize;

use super::Family;
use crate::error::{Error, Result};

/// The hypotheses under which the two-type problem `tp(a, c)`, `tp(b, d̄)`
/// is guaranteed a solution, evaluated over the class of `c` under `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PremiseReport {
    /// `c` is independent from `d̄` over `c_R`.
    pub base_indep: bool,
    /// `a` is independent from `c` over `c_R`.
    pub a_indep: bool,
    /// `b` is independent from `d̄` over `c_R`.
    pub b_indep: bool,
    /// `a` and `b` have the same type over `acl(c_R)`.
    pub type_eq: bool,
}

impl PremiseReport {
    pub fn all(&self) -> bool {
        self.base_indep && self.a_indep && self.b_indep && self.type_eq
    }
}

pub fn check_premises<F: Family>(
    model: &F,
    a: usize,
    b: usize,
    c: usize,
    dbar: &[usize],
    rel: &str,
) -> Result<PremiseReport> {
    if !model.relations().iter().any(|r| r == rel) {
        return Err(Error::Unsupported(format!(
            "no dividing rule over classes of `{rel}` for this family"
        )));
    }
    for &x in [a, b, c].iter().chain(dbar) {
        if x >= model.size() {
            return Err(Error::OutOfRange {
                index: x,
                size: model.size(),
            });
        }
    }
    let mut base_indep = true;
    let mut b_indep = true;
    for &d in dbar {
        base_indep &= !model.divides_over_class(c, d, c, rel)?;
        b_indep &= !model.divides_over_class(b, d, c, rel)?;
    }
    Ok(PremiseReport {
        base_indep,
        a_indep: !model.divides_over_class(a, c, c, rel)?,
        b_indep,
        type_eq: model.acl_key(a, c, rel)? == model.acl_key(b, c, rel)?,
    })
}
