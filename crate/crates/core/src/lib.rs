//! A laboratory for untyped λ-terms, System F witnesses, numeral systems and
//! storage operators.

pub mod defs;
pub mod gen;
pub mod numeral;
pub mod reduce;
pub mod registry;
pub mod report;
pub mod syntax;
pub mod term;
pub mod typed;
pub mod types;
pub mod zoo;

pub use defs::{check_definitions, parse_definitions, Definitions, TdefCheck};
pub use numeral::{
    check_adequate, check_numeral_system, check_storage, check_typed_storage,
    storage_from_adequacy, theta_variants, NumeralSystem, StorageCheck, TypedLayer,
};
pub use reduce::{
    beta_equiv, head_common_reduct, head_normal_form, head_reduce, head_step, normal_form,
    normalize, EquivVerdict, ReductionTrace, Strategy, TraceStatus, DEFAULT_FUEL,
};
pub use report::{ClaimReport, Status};
pub use syntax::{
    parse_term, parse_type, parse_typed, print_term, print_type, print_typed, ParseError,
};
pub use term::{alpha_eq, iter_apply, Term, TermKind};
pub use typed::{check, erase, Context, TypeError, TypedKind, TypedTerm};
pub use types::{godel_star, type_subst, Type, TypeKind};
pub use zoo::{church, Zoo, ZooEntry};
