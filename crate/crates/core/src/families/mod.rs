//! Deterministic finite fragments of three counterexample families
//! (cross-cutting equivalences, bipedes, ω-pedes), their closed-form
//! dividing rules and extension-problem scenarios, and two small
//! non-homogeneous fixtures.

pub mod bipede;
pub mod crosscut;
pub mod omegapede;
pub mod remarks;
mod saturate;

use serde::Serialize;

pub use bipede::{build_bipede, Bipede, BipedeLit};
pub use crosscut::{build_crosscut, Crosscut, CrosscutLit, CrosscutSpec};
pub use omegapede::{build_omegapede, OmegaLit, Omegapede};
pub use remarks::{remark_fixture, Remark, RemarkFixture};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ScenarioVerdict {
    Sat,
    Unsat,
    /// The fragment does not contain the configuration the scenario needs.
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedElement {
    pub name: String,
    pub index: usize,
    pub element: String,
}

/// A side condition of a scenario and whether it came out as expected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub claim: String,
    pub holds: bool,
    pub expected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScenarioReport {
    pub verdict: ScenarioVerdict,
    pub witnesses: Vec<NamedElement>,
    pub claims: Vec<Claim>,
    pub conflict_trace: Vec<String>,
}

impl ScenarioReport {
    pub fn inapplicable(reason: impl Into<String>) -> Self {
        Self {
            verdict: ScenarioVerdict::Inapplicable,
            witnesses: Vec::new(),
            claims: Vec::new(),
            conflict_trace: vec![reason.into()],
        }
    }

    /// UNSAT with every side condition as expected.
    pub fn reproduced(&self) -> bool {
        self.verdict == ScenarioVerdict::Unsat && self.claims.iter().all(|c| c.holds == c.expected)
    }
}

/// A fixed bit mixer for free choices in the greedy builders.
fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn claim(text: impl Into<String>, holds: bool, expected: bool) -> Claim {
    Claim {
        claim: text.into(),
        holds,
        expected,
    }
}
