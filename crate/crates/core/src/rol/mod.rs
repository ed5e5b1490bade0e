//! Reverse-order-law laboratory: instance generators, checkers for each
//! theorem's hypotheses and conclusion, and a seeded suite runner.

pub mod bundle;
pub mod checks;
pub mod report;
pub mod suite;

pub use bundle::{generate_instance, Family, InstanceBundle, ShapeProfile, WeightProfile};
pub use checks::{
    check_iff_mixed_first, check_iff_mixed_second, check_iff_projector_form, check_iff_single,
    check_iff_two_condition, check_iff_weighted_adjoint, check_rol_implies_commute,
    check_square_sufficient, check_theorem, check_weighted_identities, rol_holds, SquareVariant,
    TheoremId,
};
pub use report::{Combine, ConditionEntry, ConditionReport, LogicalForm, Thresholds, Verdict};
pub use suite::{run_suite, SuiteConfig, SuiteSummary, TheoremSummary};
