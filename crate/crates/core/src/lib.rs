//! Verification, derivation and classification of finite metacyclic group
//! actions on closed orientable surfaces, in terms of cyclic and metacyclic
//! data sets.

pub mod apps;
pub mod arith;
pub mod classify;
pub mod cyclic;
pub mod derive;
pub mod error;
pub mod group;
pub mod meta;
mod scan;

pub use cyclic::{Cone, CyclicCondition, CyclicDataSet, CyclicVerdict};
pub use error::{Error, ParamError, Result};
pub use group::{Elem, GroupElement, GroupParams, MetacyclicGroup};
pub use meta::{
    validate_meta_literal, validate_meta_oracle, MetaCondition, MetacyclicDataSet, Method,
    SearchBounds, Triple, ValidationReport, Verdict, WitnessBundle,
};
pub use derive::{derive_all, derive_df, derive_dg, derive_dgbar, fixed_point_count, Derived, FixedPointTable};
pub use classify::{
    enumerate_meta, equivalent, query_pair, ClassificationTable, ClassifyOptions, EquivalenceMode,
    EquivalenceWitness,
};

pub use apps::{
    bound_check, dicyclic_exists, lift_to_split, lifts, BoundReport, DicyclicClause, DicyclicDecision,
    DicyclicForm, LiftResult,
};

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "mcg/1";
