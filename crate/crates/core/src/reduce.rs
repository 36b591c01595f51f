//! Head reduction, leftmost normalization and the β-equivalence oracles.
//!
//! All reducers take an explicit fuel budget counted in β-contractions.
//! Running out of fuel is a status, never an error and never a verdict.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::term::{Name, Term, TermKind};

/// Default step budget for every oracle.
pub const DEFAULT_FUEL: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TraceStatus {
    HeadNormalForm,
    NormalForm,
    FuelExhausted,
}

impl fmt::Display for TraceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceStatus::HeadNormalForm => "head normal form",
            TraceStatus::NormalForm => "normal form",
            TraceStatus::FuelExhausted => "fuel exhausted",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Contract the head redex only.
    Head,
    /// Leftmost-outermost, reaches the β-normal form when one exists.
    Normal,
}

/// Every intermediate term of a reduction.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub initial: Term,
    /// `steps[i]` is obtained from its predecessor by one contraction.
    pub steps: Vec<Term>,
    pub status: TraceStatus,
    pub fuel_used: u64,
}

impl ReductionTrace {
    pub fn last(&self) -> &Term {
        self.steps.last().unwrap_or(&self.initial)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        std::iter::once(&self.initial).chain(self.steps.iter())
    }
}

/// Result of a reduction run that does not keep intermediate terms.
#[derive(Clone, Debug)]
pub struct Reduct {
    pub term: Term,
    pub steps: u64,
    pub status: TraceStatus,
}

impl Reduct {
    pub fn finished(&self) -> bool {
        self.status != TraceStatus::FuelExhausted
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivVerdict {
    Equal,
    Distinct,
    /// Fuel ran out before a decision; carries the fuel spent.
    Unknown(u64),
}

impl fmt::Display for EquivVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivVerdict::Equal => f.write_str("Equal"),
            EquivVerdict::Distinct => f.write_str("Distinct"),
            EquivVerdict::Unknown(spent) => write!(f, "Unknown (fuel spent {spent})"),
        }
    }
}

/// Head reduction state: `λbinders. (head args…)`, with `args` stored in
/// reverse so the first argument sits on top of the stack. Every argument
/// lives under all of `binders`, which is why `instantiate` needs no extra
/// shifting.
struct HeadMachine {
    binders: Vec<Name>,
    head: Term,
    args: Vec<Term>,
}

impl HeadMachine {
    fn new(t: &Term) -> HeadMachine {
        HeadMachine {
            binders: Vec::new(),
            head: t.clone(),
            args: Vec::new(),
        }
    }

    /// Unwinds until the head is either a redex or a variable. Returns true
    /// when a head redex is ready.
    fn seek(&mut self) -> bool {
        loop {
            let next = match self.head.kind() {
                TermKind::App(f, a) => {
                    self.args.push(a.clone());
                    f.clone()
                }
                TermKind::Lam(h, b) => {
                    if !self.args.is_empty() {
                        return true;
                    }
                    self.binders.push(h.clone());
                    b.clone()
                }
                TermKind::Bound(_) | TermKind::Free(_) => return false,
            };
            self.head = next;
        }
    }

    /// Contracts the head redex found by `seek`.
    fn contract(&mut self) {
        let TermKind::Lam(_, body) = self.head.kind() else {
            unreachable!("contract called without a head redex")
        };
        let arg = self.args.pop().expect("head redex has an argument");
        self.head = body.instantiate(&arg);
    }

    fn rebuild(&self) -> Term {
        Term::compose(
            &self.binders,
            self.head.clone(),
            self.args.iter().rev().cloned(),
        )
    }
}

/// One head-reduction step, or `None` when `t` is in head normal form.
pub fn head_step(t: &Term) -> Option<Term> {
    let mut m = HeadMachine::new(t);
    if m.seek() {
        m.contract();
        Some(m.rebuild())
    } else {
        None
    }
}

/// Iterates [`head_step`], recording every intermediate term.
pub fn head_reduce(t: &Term, fuel: u64) -> ReductionTrace {
    let mut m = HeadMachine::new(t);
    let mut steps = Vec::new();
    let mut used = 0;
    let status = loop {
        if !m.seek() {
            break TraceStatus::HeadNormalForm;
        }
        if used == fuel {
            break TraceStatus::FuelExhausted;
        }
        m.contract();
        used += 1;
        steps.push(m.rebuild());
    };
    ReductionTrace {
        initial: t.clone(),
        steps,
        status,
        fuel_used: used,
    }
}

/// Same reduction as [`head_reduce`] without keeping the trace.
pub fn head_normal_form(t: &Term, fuel: u64) -> Reduct {
    let mut m = HeadMachine::new(t);
    let mut used = 0;
    let status = loop {
        if !m.seek() {
            break TraceStatus::HeadNormalForm;
        }
        if used == fuel {
            break TraceStatus::FuelExhausted;
        }
        m.contract();
        used += 1;
    };
    Reduct {
        term: m.rebuild(),
        steps: used,
        status,
    }
}

/// Contracts the leftmost-outermost redex.
pub fn leftmost_step(t: &Term) -> Option<Term> {
    if t.is_normal() {
        return None;
    }
    Some(match t.kind() {
        TermKind::App(f, a) => match f.kind() {
            TermKind::Lam(_, body) => body.instantiate(a),
            _ if !f.is_normal() => Term::app(leftmost_step(f)?, a.clone()),
            _ => Term::app(f.clone(), leftmost_step(a)?),
        },
        TermKind::Lam(h, b) => Term::abs(h.clone(), leftmost_step(b)?),
        TermKind::Bound(_) | TermKind::Free(_) => return None,
    })
}

/// Leftmost-outermost normalization with a full trace.
pub fn normalize(t: &Term, fuel: u64) -> ReductionTrace {
    let mut steps: Vec<Term> = Vec::new();
    let mut used = 0;
    let status = loop {
        let cur = steps.last().unwrap_or(t);
        if cur.is_normal() {
            break TraceStatus::NormalForm;
        }
        if used == fuel {
            break TraceStatus::FuelExhausted;
        }
        let next = leftmost_step(cur).expect("non-normal term has a redex");
        steps.push(next);
        used += 1;
    };
    ReductionTrace {
        initial: t.clone(),
        steps,
        status,
        fuel_used: used,
    }
}

pub fn reduce(t: &Term, strategy: Strategy, fuel: u64) -> ReductionTrace {
    match strategy {
        Strategy::Head => head_reduce(t, fuel),
        Strategy::Normal => normalize(t, fuel),
    }
}

/// Leftmost-outermost normalization without a trace.
///
/// Performs exactly the contractions of [`normalize`], in the same order:
/// head-reduce to a head normal form, then normalize the arguments from left
/// to right.
pub fn normal_form(t: &Term, fuel: u64) -> Reduct {
    let mut used = 0;
    let (term, complete) = nf(t, fuel, &mut used);
    Reduct {
        term,
        steps: used,
        status: if complete {
            TraceStatus::NormalForm
        } else {
            TraceStatus::FuelExhausted
        },
    }
}

fn nf(t: &Term, fuel: u64, used: &mut u64) -> (Term, bool) {
    if t.is_normal() {
        return (t.clone(), true);
    }
    let mut m = HeadMachine::new(t);
    loop {
        if !m.seek() {
            break;
        }
        if *used == fuel {
            return (m.rebuild(), false);
        }
        m.contract();
        *used += 1;
    }
    let mut args: Vec<Term> = m.args.iter().rev().cloned().collect();
    for i in 0..args.len() {
        let (a, done) = nf(&args[i], fuel, used);
        args[i] = a;
        if !done {
            return (Term::compose(&m.binders, m.head.clone(), args), false);
        }
    }
    (Term::compose(&m.binders, m.head.clone(), args), true)
}

/// Contracts the `k`-th redex in pre-order (the node itself, then its
/// function part, then its argument).
fn contract_nth(t: &Term, mut k: u64) -> Term {
    match t.kind() {
        TermKind::App(f, a) => {
            if let TermKind::Lam(_, body) = f.kind() {
                if k == 0 {
                    return body.instantiate(a);
                }
                k -= 1;
            }
            let in_f = f.redex_count();
            if k < in_f {
                Term::app(contract_nth(f, k), a.clone())
            } else {
                Term::app(f.clone(), contract_nth(a, k - in_f))
            }
        }
        TermKind::Lam(h, b) => Term::abs(h.clone(), contract_nth(b, k)),
        TermKind::Bound(_) | TermKind::Free(_) => unreachable!("no redex left to contract"),
    }
}

/// Contracts a uniformly chosen redex.
pub fn random_step<R: Rng>(t: &Term, rng: &mut R) -> Option<Term> {
    let count = t.redex_count();
    if count == 0 {
        return None;
    }
    Some(contract_nth(t, rng.gen_range(0..count)))
}

/// Normalizes by contracting randomly chosen redexes (seeded, reproducible).
pub fn random_normal_form(t: &Term, fuel: u64, seed: u64) -> Reduct {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = t.clone();
    let mut used = 0;
    loop {
        if cur.is_normal() {
            return Reduct {
                term: cur,
                steps: used,
                status: TraceStatus::NormalForm,
            };
        }
        if used == fuel {
            return Reduct {
                term: cur,
                steps: used,
                status: TraceStatus::FuelExhausted,
            };
        }
        cur = random_step(&cur, &mut rng).expect("non-normal term has a redex");
        used += 1;
    }
}

/// Tri-state β-equivalence: definitive only when both sides reach a normal
/// form within `fuel` (each).
pub fn beta_equiv(t: &Term, u: &Term, fuel: u64) -> EquivVerdict {
    let a = normal_form(t, fuel);
    let b = normal_form(u, fuel);
    match (a.finished(), b.finished()) {
        (true, true) if a.term == b.term => EquivVerdict::Equal,
        (true, true) => EquivVerdict::Distinct,
        _ => EquivVerdict::Unknown(a.steps + b.steps),
    }
}

/// Decides `t ∼ u` (a common head reduct) on the fuel-bounded head chains.
pub fn head_common_reduct(t: &Term, u: &Term, fuel: u64) -> EquivVerdict {
    let a = head_reduce(t, fuel);
    let b = head_reduce(u, fuel);
    let both_hnf =
        a.status == TraceStatus::HeadNormalForm && b.status == TraceStatus::HeadNormalForm;
    if both_hnf {
        // Head reduction is deterministic, so once the chains meet they end
        // at the same head normal form.
        return if a.last() == b.last() {
            EquivVerdict::Equal
        } else {
            EquivVerdict::Distinct
        };
    }
    let seen: HashSet<&Term> = a.terms().collect();
    if b.terms().any(|x| seen.contains(x)) {
        EquivVerdict::Equal
    } else {
        EquivVerdict::Unknown(a.fuel_used + b.fuel_used)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    fn id() -> Term {
        Term::lam("x", v("x"))
    }

    fn omega() -> Term {
        let d = Term::lam("x", Term::app(v("x"), v("x")));
        Term::app(d.clone(), d)
    }

    fn tt() -> Term {
        Term::lams(&["x", "y"], v("x"))
    }

    fn ff() -> Term {
        Term::lams(&["x", "y"], v("y"))
    }

    #[test]
    fn head_step_contracts_the_head_redex() {
        assert_eq!(head_step(&Term::app(id(), v("y"))), Some(v("y")));
        assert_eq!(head_step(&Term::lam("z", Term::app(v("z"), v("a")))), None);
    }

    #[test]
    fn head_step_under_binders_keeps_them() {
        // λz. (λx.x) z w  →  λz. z w
        let t = Term::lam("z", Term::apps(id(), [v("z"), v("w")]));
        assert_eq!(
            head_step(&t),
            Some(Term::lam("z", Term::app(v("z"), v("w"))))
        );
    }

    #[test]
    fn omega_exhausts_fuel() {
        let tr = head_reduce(&omega(), 50);
        assert_eq!(tr.status, TraceStatus::FuelExhausted);
        assert_eq!(tr.fuel_used, 50);
        assert_eq!(tr.steps.len(), 50);
        assert_eq!(normal_form(&omega(), 30).status, TraceStatus::FuelExhausted);
    }

    #[test]
    fn normalize_on_normal_term_takes_no_steps() {
        let tr = normalize(&tt(), 10);
        assert_eq!(tr.status, TraceStatus::NormalForm);
        assert!(tr.steps.is_empty());
    }

    #[test]
    fn traces_are_prefixes_under_more_fuel() {
        let t = Term::apps(
            Term::lams(&["x", "y"], Term::app(v("x"), v("y"))),
            [id(), id()],
        );
        let short = head_reduce(&t, 1);
        let long = head_reduce(&t, 10);
        assert_eq!(short.steps[..], long.steps[..1]);
        assert_eq!(long.status, TraceStatus::HeadNormalForm);
    }

    #[test]
    fn verdicts() {
        assert_eq!(beta_equiv(&tt(), &ff(), 100), EquivVerdict::Distinct);
        assert_eq!(
            beta_equiv(&Term::app(id(), tt()), &tt(), 100),
            EquivVerdict::Equal
        );
        let lam_omega = Term::lam("x", omega());
        assert!(matches!(
            beta_equiv(&omega(), &lam_omega, 100),
            EquivVerdict::Unknown(_)
        ));
    }

    #[test]
    fn common_head_reduct() {
        let a = Term::app(id(), tt());
        let b = Term::app(Term::lam("x", tt()), ff());
        assert_eq!(head_common_reduct(&a, &b, 100), EquivVerdict::Equal);
        assert_eq!(
            head_common_reduct(&tt(), &ff(), 100),
            EquivVerdict::Distinct
        );
        assert!(matches!(
            head_common_reduct(&omega(), &tt(), 20),
            EquivVerdict::Unknown(_)
        ));
        // a diverging term still shares reducts with its own reducts
        let o1 = head_step(&omega()).unwrap();
        assert_eq!(head_common_reduct(&omega(), &o1, 20), EquivVerdict::Equal);
    }

    #[test]
    fn leftmost_and_fast_normalizers_agree() {
        let two = Term::lams(&["x", "f"], Term::app(v("f"), Term::app(v("f"), v("x"))));
        let t = Term::apps(
            two,
            [
                Term::app(id(), v("a")),
                Term::lam("y", Term::app(id(), v("y"))),
            ],
        );
        let slow = normalize(&t, 100);
        let fast = normal_form(&t, 100);
        assert_eq!(slow.status, TraceStatus::NormalForm);
        assert_eq!(slow.last(), &fast.term);
        assert_eq!(slow.fuel_used, fast.steps);
    }

    #[test]
    fn random_strategy_reaches_the_normal_form() {
        let t = Term::apps(
            Term::lam("x", Term::app(v("x"), v("x"))),
            [Term::app(id(), id())],
        );
        for seed in 0..8 {
            let r = random_normal_form(&t, 100, seed);
            assert_eq!(r.status, TraceStatus::NormalForm);
            assert_eq!(r.term, id());
        }
    }
}
