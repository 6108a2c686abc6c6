//! Finite workbench for binary homogeneous structures.

pub mod atp;
pub mod distmonoid;
pub mod embed;
pub mod equiv;
pub mod error;
pub mod families;
pub mod generic;
pub mod homog;
pub mod indep;
pub mod structure;

pub use atp::{approx_algebraic, atp, realizations, Atom, AtomicType, Literal};
pub use embed::{automorphism_mapping, embeddings_with, find_embeddings, is_strong_embedding};
pub use equiv::{discover_equiv_relations, partition_of, EquivRelDescriptor};
pub use error::{Error, Result};
pub use families::{
    build_bipede, build_crosscut, build_omegapede, remark_fixture, Bipede, Crosscut, CrosscutSpec,
    Omegapede, Remark, RemarkFixture, ScenarioReport, ScenarioVerdict,
};
pub use generic::{generic_extend, FamilyHandle};
pub use homog::{amalgamation_check, is_homogeneous_upto, AmalgamationFailure, Homogeneity};
pub use indep::{
    check_premises, divides_bruteforce, extension_solve, reduce_extension_problem, solve_chain,
    Dividing, ExtensionProblem, Family, PremiseReport, Solution,
};
pub use structure::{FinStructure, RelationSymbol, Signature, StructureFile};
