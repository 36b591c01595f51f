//! Numeral systems and storage operators: law checks, θ-sampling, storage
//! checks and the fixed-point storage operator built from a predecessor.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::reduce::{beta_equiv, head_normal_form, normal_form, EquivVerdict, TraceStatus};
use crate::report::ClaimReport;
use crate::syntax::print_term_folded;
use crate::term::{Term, TermKind};
use crate::typed::{check, Context, TypedTerm};
use crate::types::Type;
use crate::zoo;

pub type NumeralFn = Arc<dyn Fn(usize) -> Term + Send + Sync>;
pub type WitnessFn = Arc<dyn Fn(usize) -> TypedTerm + Send + Sync>;

/// Typing evidence for a numeral system: the data type `D`, witnesses for the
/// numerals at `D` and at `D*`, and named operator witnesses.
#[derive(Clone)]
pub struct TypedLayer {
    pub data_type: Type,
    pub numeral_witness: WitnessFn,
    pub star_witness: WitnessFn,
    pub storage_witness: Option<TypedTerm>,
    /// name → (claimed type, witness)
    pub witnesses: BTreeMap<String, (Type, TypedTerm)>,
}

#[derive(Clone)]
pub struct NumeralSystem {
    pub name: String,
    pub numeral: NumeralFn,
    pub successor: Term,
    pub zero_test: Option<Term>,
    pub predecessor: Option<Term>,
    pub storage: Option<Term>,
    pub typed_layer: Option<TypedLayer>,
}

impl NumeralSystem {
    pub fn numeral(&self, n: usize) -> Term {
        (self.numeral)(n)
    }
}

impl fmt::Debug for NumeralSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumeralSystem")
            .field("name", &self.name)
            .field("successor", &self.successor)
            .field("zero_test", &self.zero_test)
            .field("predecessor", &self.predecessor)
            .field("storage", &self.storage)
            .field("typed", &self.typed_layer.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("numeral system `{system}` has no {component}")]
pub struct MissingComponent {
    pub system: String,
    pub component: &'static str,
}

/// Prints a term with the zoo's names folded in, for report details.
pub fn show(t: &Term) -> String {
    print_term_folded(t, zoo::shared_folding())
}

/// `Ok(steps)` when `input ≃β expected`, otherwise the failing report.
fn law(id: &str, input: &Term, expected: &Term, n: usize, fuel: u64) -> Result<u64, ClaimReport> {
    let a = normal_form(input, fuel);
    let b = normal_form(expected, fuel);
    let spent = a.steps + b.steps;
    if !(a.finished() && b.finished()) {
        return Err(ClaimReport::unknown(
            id,
            format!("{} vs {}: fuel exhausted", show(input), show(expected)),
        )
        .with_n(n as u64)
        .with_fuel(spent));
    }
    if a.term != b.term {
        return Err(ClaimReport::fail(
            id,
            format!(
                "{} normalizes to {}, expected {}",
                show(input),
                show(&a.term),
                show(expected)
            ),
        )
        .with_n(n as u64)
        .with_fuel(spent));
    }
    Ok(spent)
}

/// Checks `input(n) ≃β expected(n)` for every `n` in `range`.
pub fn check_law(
    id: &str,
    range: impl IntoIterator<Item = usize>,
    fuel: u64,
    mut case: impl FnMut(usize) -> (Term, Term),
) -> ClaimReport {
    let mut last = 0;
    let mut spent = 0;
    for n in range {
        let (input, expected) = case(n);
        match law(id, &input, &expected, n, fuel) {
            Ok(k) => spent += k,
            Err(bad) => {
                let total = bad.fuel_used + spent;
                return bad.with_fuel(total);
            }
        }
        last = n;
    }
    ClaimReport::pass(id).with_n(last as u64).with_fuel(spent)
}

/// Numerals closed, normal and pairwise distinct; successor law; zero-test
/// law. One report per law.
pub fn check_numeral_system(sys: &NumeralSystem, max_n: usize, fuel: u64) -> Vec<ClaimReport> {
    let mut out = Vec::new();
    let id = format!("{}.numerals", sys.name);
    let mut seen = HashSet::new();
    let mut numerals = ClaimReport::pass(&id).with_n(max_n as u64);
    for n in 0..=max_n {
        let t = sys.numeral(n);
        let problem = if !t.is_closed() {
            Some("is not closed")
        } else if !t.is_normal() {
            Some("is not normal")
        } else if !seen.insert(t.clone()) {
            Some("repeats an earlier numeral")
        } else {
            None
        };
        if let Some(p) = problem {
            numerals =
                ClaimReport::fail(&id, format!("numeral {n} = {} {p}", show(&t))).with_n(n as u64);
            break;
        }
    }
    out.push(numerals);

    let s = &sys.successor;
    out.push(check_law(
        &format!("{}.successor", sys.name),
        0..=max_n,
        fuel,
        |n| (Term::app(s.clone(), sys.numeral(n)), sys.numeral(n + 1)),
    ));

    if let Some(z) = &sys.zero_test {
        out.push(check_law(
            &format!("{}.zero-test", sys.name),
            0..=max_n + 1,
            fuel,
            |n| {
                let expected = if n == 0 { zoo::tt() } else { zoo::ff() };
                (Term::app(z.clone(), sys.numeral(n)), expected)
            },
        ));
    }
    out
}

/// The predecessor law `(P numeral(n+1)) ≃β numeral(n)` for `n ≤ max_n`.
pub fn check_adequate(sys: &NumeralSystem, max_n: usize, fuel: u64) -> ClaimReport {
    let id = format!("{}.predecessor", sys.name);
    match &sys.predecessor {
        None => ClaimReport::unknown(id, "not applicable: no predecessor registered"),
        Some(p) => check_law(&id, 0..=max_n, fuel, |n| {
            (Term::app(p.clone(), sys.numeral(n + 1)), sys.numeral(n))
        }),
    }
}

pub fn identity() -> Term {
    Term::lam("z", Term::var("z"))
}

pub fn wrap(t: Term) -> Term {
    Term::app(identity(), t)
}

/// Puts a redex `(λz.z) body` under the numeral's leading binders.
pub fn wrap_under_binders(t: &Term) -> Option<Term> {
    let (binders, head, args) = t.decompose();
    if binders.is_empty() {
        return None;
    }
    let body = Term::compose(&[], head, args);
    Some(Term::compose(&binders, wrap(body), []))
}

fn successor_chain(sys: &NumeralSystem, n: usize, j: usize) -> Term {
    (0..j).fold(sys.numeral(n - j), |acc, _| {
        Term::app(sys.successor.clone(), acc)
    })
}

/// Closed terms β-equivalent to `numeral(n)`, in a fixed order: the numeral,
/// an identity wrap, one successor step, a redex under the binders,
/// predecessor of successor, nested wraps, longer successor chains, then
/// wrapped chains. Candidates the oracle cannot confirm are skipped.
pub fn theta_variants(sys: &NumeralSystem, n: usize, count: usize, fuel: u64) -> Vec<Term> {
    let base = sys.numeral(n);
    let mut cands = vec![base.clone(), wrap(base.clone())];
    if n >= 1 {
        cands.push(successor_chain(sys, n, 1));
    }
    cands.extend(wrap_under_binders(&base));
    if let Some(p) = &sys.predecessor {
        cands.push(Term::app(
            p.clone(),
            Term::app(sys.successor.clone(), base.clone()),
        ));
    }
    cands.push(wrap(wrap(base.clone())));
    for j in 2..=n {
        cands.push(successor_chain(sys, n, j));
    }
    if n >= 1 {
        cands.push(wrap(successor_chain(sys, n, 1)));
        cands.push(Term::app(sys.successor.clone(), wrap(sys.numeral(n - 1))));
    }

    let mut out = Vec::new();
    for c in cands {
        if out.len() == count {
            break;
        }
        if c.is_closed() && beta_equiv(&c, &base, fuel) == EquivVerdict::Equal {
            out.push(c);
        }
    }
    out
}

/// The outcome of [`check_storage`]: one report per `n`, plus the extracted
/// `τ_n` (absent where extraction failed).
#[derive(Clone, Debug)]
pub struct StorageCheck {
    pub reports: Vec<ClaimReport>,
    pub taus: Vec<Option<Term>>,
}

impl StorageCheck {
    pub fn summary(&self, id: &str) -> ClaimReport {
        ClaimReport::combine(id, self.reports.clone())
    }
}

/// A variable name not free in any of `terms`.
pub fn fresh_var(base: &str, terms: &[&Term]) -> String {
    let used: BTreeSet<_> = terms.iter().flat_map(|t| t.free_vars()).collect();
    let mut name = base.to_string();
    while used.iter().any(|u| **u == *name) {
        name.push('\'');
    }
    name
}

enum Stored {
    Tau(Term, u64),
    Bad(String, u64),
    OutOfFuel(u64),
}

/// Head-reduces `(op θ f)` and extracts `τ` from a head normal form `(f τ)`.
fn store(op: &Term, theta: &Term, f: &str, fuel: u64) -> Stored {
    let input = Term::apps(op.clone(), [theta.clone(), Term::var(f)]);
    let r = head_normal_form(&input, fuel);
    if r.status == TraceStatus::FuelExhausted {
        return Stored::OutOfFuel(r.steps);
    }
    if let TermKind::App(head, tau) = r.term.kind() {
        if matches!(head.kind(), TermKind::Free(x) if **x == *f) {
            if !tau.is_closed() {
                return Stored::Bad(format!("stored value {} is not closed", show(tau)), r.steps);
            }
            return Stored::Tau(tau.clone(), r.steps);
        }
    }
    Stored::Bad(
        format!(
            "head normal form {} is not of the form ({f} t)",
            show(&r.term)
        ),
        r.steps,
    )
}

/// Checks that `op` behaves as a storage operator for `n ≤ max_n` on
/// `variants` sampled θ each: `(op θ f)` head-reduces to `(f τ_n)` with
/// `τ_n` closed, `τ_n ≃β numeral(n)`, and the same `τ_n` for every θ.
pub fn check_storage(
    claim_id: &str,
    sys: &NumeralSystem,
    op: &Term,
    max_n: usize,
    variants: usize,
    fuel: u64,
) -> StorageCheck {
    check_storage_with(claim_id, sys, op, max_n, variants, fuel, "f")
}

/// As [`check_storage`] with a chosen base name for the continuation.
pub fn check_storage_with(
    claim_id: &str,
    sys: &NumeralSystem,
    op: &Term,
    max_n: usize,
    variants: usize,
    fuel: u64,
    f_base: &str,
) -> StorageCheck {
    let mut reports = Vec::new();
    let mut taus = Vec::new();
    for n in 0..=max_n {
        let thetas = theta_variants(sys, n, variants.max(1), fuel);
        let mut refs: Vec<&Term> = thetas.iter().collect();
        refs.push(op);
        let f = fresh_var(f_base, &refs);
        let (report, tau) = check_stored(claim_id, op, n, &thetas, &sys.numeral(n), &f, fuel);
        reports.push(report);
        taus.push(tau);
    }
    StorageCheck { reports, taus }
}

/// The storage check for one value: `thetas[0]` is the canonical input whose
/// stored value must be `≃β expected`; every other θ must store the same
/// term. `f` must not occur free in `op` or any θ.
pub fn check_stored(
    id: &str,
    op: &Term,
    n: usize,
    thetas: &[Term],
    expected: &Term,
    f: &str,
    fuel: u64,
) -> (ClaimReport, Option<Term>) {
    let nn = n as u64;
    let mut spent = 0;
    let canonical = &thetas[0];
    let tau = match store(op, canonical, f, fuel) {
        Stored::Tau(t, k) => {
            spent += k;
            t
        }
        Stored::Bad(msg, k) => {
            let d = format!("theta={}: {msg}", show(canonical));
            return (ClaimReport::fail(id, d).with_n(nn).with_fuel(k), None);
        }
        Stored::OutOfFuel(k) => {
            let d = format!("theta={}: no head normal form within fuel", show(canonical));
            return (ClaimReport::unknown(id, d).with_n(nn).with_fuel(k), None);
        }
    };
    match beta_equiv(&tau, expected, fuel) {
        EquivVerdict::Equal => {}
        EquivVerdict::Distinct => {
            let d = format!(
                "stored value {} differs from {}",
                show(&tau),
                show(expected)
            );
            return (
                ClaimReport::fail(id, d).with_n(nn).with_fuel(spent),
                Some(tau),
            );
        }
        EquivVerdict::Unknown(k) => {
            let d = format!(
                "stored value {} vs {}: fuel exhausted",
                show(&tau),
                show(expected)
            );
            return (
                ClaimReport::unknown(id, d).with_n(nn).with_fuel(spent + k),
                Some(tau),
            );
        }
    }
    for theta in &thetas[1..] {
        match store(op, theta, f, fuel) {
            Stored::Tau(t, k) => {
                spent += k;
                if t != tau {
                    let d = format!(
                        "stored value depends on theta: theta={} gives {} but the numeral gives {}",
                        show(theta),
                        show(&t),
                        show(&tau)
                    );
                    return (
                        ClaimReport::fail(id, d).with_n(nn).with_fuel(spent),
                        Some(tau),
                    );
                }
            }
            Stored::Bad(msg, k) => {
                let d = format!("theta={}: {msg}", show(theta));
                return (
                    ClaimReport::fail(id, d).with_n(nn).with_fuel(spent + k),
                    Some(tau),
                );
            }
            Stored::OutOfFuel(k) => {
                let d = format!("theta={}: no head normal form within fuel", show(theta));
                return (
                    ClaimReport::unknown(id, d).with_n(nn).with_fuel(spent + k),
                    Some(tau),
                );
            }
        }
    }
    let report = ClaimReport::pass(id)
        .with_n(nn)
        .with_fuel(spent)
        .with_detail(format!("{} variants", thetas.len()));
    (report, Some(tau))
}

/// Checks `⊢ op : D* → ¬¬D` and that each numeral up to `max_n` has a
/// witness at `D*` erasing to it.
pub fn check_typed_storage(
    claim_id: &str,
    sys: &NumeralSystem,
    op_witness: &TypedTerm,
    max_n: usize,
) -> ClaimReport {
    let Some(layer) = &sys.typed_layer else {
        return ClaimReport::unknown(claim_id, format!("system {} has no typed layer", sys.name));
    };
    let d = &layer.data_type;
    let expected = Type::arrow(d.godel_star(), Type::not(Type::not(d.clone())));
    match check(&Context::new(), op_witness) {
        Ok(ty) if ty == expected => {}
        Ok(ty) => {
            return ClaimReport::fail(
                claim_id,
                format!("witness has type {ty}, expected {expected}"),
            )
        }
        Err(e) => return ClaimReport::fail(claim_id, format!("witness does not check: {e}")),
    }
    let star = d.godel_star();
    for n in 0..=max_n {
        let w = (layer.star_witness)(n);
        let ok = check(&Context::new(), &w)
            .map(|t| t == star)
            .unwrap_or(false);
        if !ok || w.erase() != sys.numeral(n) {
            return ClaimReport::fail(claim_id, format!("numeral {n} has no witness at {star}"))
                .with_n(n as u64);
        }
    }
    ClaimReport::pass(claim_id).with_n(max_n as u64)
}

/// The fixed-point storage operator `Θ H` with
/// `H = λh.λn.λf. (Z n) (f numeral(0)) (h (P n) λx.(f (S x)))`.
pub fn storage_from_adequacy(sys: &NumeralSystem) -> Result<Term, MissingComponent> {
    let missing = |component| MissingComponent {
        system: sys.name.clone(),
        component,
    };
    let z = sys.zero_test.clone().ok_or_else(|| missing("zero test"))?;
    let p = sys
        .predecessor
        .clone()
        .ok_or_else(|| missing("predecessor"))?;
    let s = sys.successor.clone();
    let (h, n, f, x) = (
        Term::var("h"),
        Term::var("n"),
        Term::var("f"),
        Term::var("x"),
    );
    let step = Term::apps(
        h,
        [
            Term::app(p, n.clone()),
            Term::lam("x", Term::app(f.clone(), Term::app(s, x))),
        ],
    );
    let body = Term::apps(z, [n, Term::app(f, sys.numeral(0)), step]);
    let big_h = Term::lams(&["h", "n", "f"], body);
    let u = Term::lams(
        &["x", "f"],
        Term::app(
            Term::var("f"),
            Term::apps(Term::var("x"), [Term::var("x"), Term::var("f")]),
        ),
    );
    let theta = Term::app(u.clone(), u);
    Ok(Term::app(theta, big_h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::DEFAULT_FUEL;
    use crate::report::Status;
    use crate::zoo::{church, system_church, system_d, system_e};

    #[test]
    fn church_laws_hold() {
        let sys = system_church(false);
        for r in check_numeral_system(&sys, 6, DEFAULT_FUEL) {
            assert!(r.passed(), "{r}");
        }
        assert!(check_adequate(&sys, 6, DEFAULT_FUEL).passed());
    }

    #[test]
    fn sabotaged_zero_test_fails_at_one() {
        let mut sys = system_church(false);
        sys.zero_test = Some(Term::lam("n", zoo::tt()));
        let reports = check_numeral_system(&sys, 4, DEFAULT_FUEL);
        let z = reports
            .iter()
            .find(|r| r.claim_id == "church.zero-test")
            .unwrap();
        assert_eq!(z.status, Status::Fail);
        assert_eq!(z.n, 1);
    }

    #[test]
    fn predecessor_absent_is_not_applicable() {
        let r = check_adequate(&system_d(), 3, DEFAULT_FUEL);
        assert_eq!(r.status, Status::Unknown);
    }

    #[test]
    fn theta_variant_order() {
        let sys = system_church(false);
        let v = theta_variants(&sys, 2, 3, DEFAULT_FUEL);
        assert_eq!(v[0], church(2));
        assert_eq!(v[1], wrap(church(2)));
        assert_eq!(v[2], Term::app(sys.successor.clone(), church(1)));
        assert_eq!(
            theta_variants(&sys, 0, 2, DEFAULT_FUEL),
            vec![church(0), wrap(church(0))]
        );
        let e = system_e(false);
        assert_eq!(theta_variants(&e, 0, 1, DEFAULT_FUEL), vec![e.numeral(0)]);
    }

    #[test]
    fn church_storage_stores_successor_chains() {
        let sys = system_church(false);
        let op = sys.storage.clone().unwrap();
        let res = check_storage("church.storage", &sys, &op, 4, 4, DEFAULT_FUEL);
        for r in &res.reports {
            assert!(r.passed(), "{r}");
        }
        let s = &sys.successor;
        for (n, tau) in res.taus.iter().enumerate() {
            let expected = (0..n).fold(church(0), |acc, _| Term::app(s.clone(), acc));
            assert_eq!(tau.as_ref().unwrap(), &expected);
        }
    }

    #[test]
    fn naive_operator_is_theta_dependent() {
        let sys = system_church(false);
        let naive = Term::lams(&["n", "f"], Term::app(Term::var("f"), Term::var("n")));
        let res = check_storage("naive", &sys, &naive, 3, 2, DEFAULT_FUEL);
        assert!(res.reports[0]
            .detail
            .as_ref()
            .unwrap()
            .contains("depends on theta"));
        assert_eq!(res.summary("naive").status, Status::Fail);
    }

    #[test]
    fn continuation_name_does_not_matter() {
        let sys = system_church(false);
        let op = sys.storage.clone().unwrap();
        let a = check_storage_with("s", &sys, &op, 3, 3, DEFAULT_FUEL, "f");
        let b = check_storage_with("s", &sys, &op, 3, 3, DEFAULT_FUEL, "k");
        assert_eq!(a.taus, b.taus);
    }

    #[test]
    fn fixed_point_operator_needs_a_predecessor() {
        assert!(storage_from_adequacy(&system_d()).is_err());
        assert!(storage_from_adequacy(&system_church(false)).is_ok());
    }

    #[test]
    fn typed_storage() {
        let sys = system_church(false);
        let w = sys
            .typed_layer
            .as_ref()
            .unwrap()
            .storage_witness
            .clone()
            .unwrap();
        assert!(check_typed_storage("t", &sys, &w, 4).passed());
        let z = zoo::Zoo::get(false).witness("Z").unwrap().clone();
        assert_eq!(check_typed_storage("t", &sys, &z, 4).status, Status::Fail);
    }
}
