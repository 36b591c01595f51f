//! Reduction workloads shared by the benchmarks.

use lamlab_core::numeral::storage_from_adequacy;
use lamlab_core::zoo::{church, e_numeral, system_church, system_e, Zoo};
use lamlab_core::Term;

/// `(op θ f)` for the named storage operator and numeral.
pub fn storage_input(op: &str, theta: Term) -> Term {
    let zoo = Zoo::get(false);
    Term::apps(zoo.term(op), [theta, Term::var("f")])
}

/// `(S (S … 0))` with `n` successors, normalized by the benchmarks.
pub fn successor_chain(n: usize) -> Term {
    let s = Zoo::get(false).term("S");
    (0..n).fold(church(0), |acc, _| Term::app(s.clone(), acc))
}

/// `(P n̄)` for the Church predecessor.
pub fn church_predecessor(n: usize) -> Term {
    Term::app(Zoo::get(false).term("P"), church(n))
}

/// `(Pe e_n)` for the system-e predecessor.
pub fn e_predecessor(n: usize) -> Term {
    Term::app(Zoo::get(false).term("Pe"), e_numeral(n))
}

/// The fixed-point storage operator over Church numerals applied to `n̄`.
pub fn fixed_point_church(n: usize) -> Term {
    let op = storage_from_adequacy(&system_church(false)).expect("church is adequate");
    Term::apps(op, [church(n), Term::var("f")])
}

/// The fixed-point storage operator over system e applied to `e_n`.
pub fn fixed_point_e(n: usize) -> Term {
    let op = storage_from_adequacy(&system_e(false)).expect("system e is adequate");
    Term::apps(op, [e_numeral(n), Term::var("f")])
}
