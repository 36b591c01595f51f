//! The claim registry: every checkable statement about the zoo, grouped
//! into suites.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::gen::{random_closed, random_with_head_redex};
use crate::numeral::{
    check_adequate, check_law, check_numeral_system, check_storage, check_stored,
    check_typed_storage, fresh_var, show, storage_from_adequacy, wrap, wrap_under_binders,
    NumeralSystem,
};
use crate::reduce::{
    beta_equiv, head_common_reduct, head_reduce, head_step, normal_form, normalize,
    random_normal_form, EquivVerdict, TraceStatus, DEFAULT_FUEL,
};
use crate::report::{ClaimReport, Status};
use crate::syntax::{parse_term, print_term};
use crate::term::Term;
use crate::typed::{check, sn_probe_seeds, subject_reduction_probe, Context, TypedTerm};
use crate::types::Type;
use crate::zoo::{
    church, d_numeral, dpair, e_numeral, ff, p_prime, system_church, system_d, system_e, tt,
    typed_bool_star, typed_church, typed_church_star, typed_d_star, typed_e_star, Zoo,
};

/// Knobs shared by every claim.
#[derive(Clone, Debug)]
pub struct Params {
    pub max_n: usize,
    pub fuel: u64,
    /// Fuel for the fixed-point storage operators.
    pub fixpoint_fuel: u64,
    /// θ variants sampled per numeral in storage checks.
    pub variants: usize,
    pub as_printed: bool,
}

impl Default for Params {
    fn default() -> Params {
        Params {
            max_n: 10,
            fuel: DEFAULT_FUEL,
            fixpoint_fuel: 1_000_000,
            variants: 4,
            as_printed: false,
        }
    }
}

/// Largest index used by the storage and fixed-point checks.
pub const STORAGE_MAX_N: usize = 8;

pub struct ClaimEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub suites: &'static [&'static str],
    pub run: fn(&Params) -> ClaimReport,
}

pub const SUITES: [&str; 8] = [
    "church",
    "bool",
    "system-d",
    "system-e",
    "fixpoint",
    "counterexample",
    "kernel",
    "all",
];

const E_SUITES: &[&str] = &["system-e", "counterexample"];

pub fn registry() -> Vec<ClaimEntry> {
    vec![
        ClaimEntry {
            id: "church.numerals",
            description: "Church numerals are closed, normal and pairwise distinct",
            suites: &["church"],
            run: |p| law_report(&system_church(p.as_printed), p, "numerals"),
        },
        ClaimEntry {
            id: "church.successor",
            description: "(S n) = n+1",
            suites: &["church"],
            run: |p| law_report(&system_church(p.as_printed), p, "successor"),
        },
        ClaimEntry {
            id: "church.zero-test",
            description: "(Z 0) = T and (Z n+1) = F",
            suites: &["church"],
            run: |p| law_report(&system_church(p.as_printed), p, "zero-test"),
        },
        ClaimEntry {
            id: "church.predecessor",
            description: "(P n+1) = n",
            suites: &["church"],
            run: |p| check_adequate(&system_church(p.as_printed), p.max_n, p.fuel),
        },
        ClaimEntry {
            id: "church.storage",
            description: "(O_N theta f) head-reduces to (f (S^n 0)) for every sampled theta",
            suites: &["church"],
            run: church_storage,
        },
        ClaimEntry {
            id: "church.typing",
            description:
                "witnesses for T, F : B, n : N, S : N->N, Z : N->B, P : N->N, O_N : N*->~~N",
            suites: &["church"],
            run: church_typing,
        },
        ClaimEntry {
            id: "church.typed-storage",
            description: "O_N : N* -> ~~N and every numeral has a witness at N*",
            suites: &["church"],
            run: |p| typed_storage("church.typed-storage", &system_church(p.as_printed), p),
        },
        ClaimEntry {
            id: "bool.typing",
            description: "O_B : B* -> ~~B",
            suites: &["bool"],
            run: bool_typing,
        },
        ClaimEntry {
            id: "bool.storage",
            description: "(O_B theta f) head-reduces to (f b) for b in {T, F}",
            suites: &["bool", "counterexample"],
            run: bool_storage,
        },
        ClaimEntry {
            id: "d.numerals",
            description: "d_n = \\a.n are closed, normal and pairwise distinct",
            suites: &["system-d"],
            run: |p| law_report(&system_d(), p, "numerals"),
        },
        ClaimEntry {
            id: "d.successor",
            description: "(Sd d_n) = d_n+1",
            suites: &["system-d"],
            run: |p| law_report(&system_d(), p, "successor"),
        },
        ClaimEntry {
            id: "d.successor-iterate",
            description: "(Sd^n d0) = d_n",
            suites: &["system-d"],
            run: d_iterate,
        },
        ClaimEntry {
            id: "d.storage",
            description: "(Od theta f) head-reduces to (f (Sd^n d0)) for every sampled theta",
            suites: &["system-d", "counterexample"],
            run: d_storage,
        },
        ClaimEntry {
            id: "d.peirce",
            description: "tP : P* with erasure \\x y. x (\\z a. z y) y",
            suites: &["system-d"],
            run: d_peirce,
        },
        ClaimEntry {
            id: "d.tp-type",
            description: "TP checks at (Q->P)* = Q*->P*; the reversed arrow P*->Q* is not its type",
            suites: &["system-d"],
            run: d_tp_type,
        },
        ClaimEntry {
            id: "d.typing",
            description: "witnesses for d_n : D, Sd : D->D, TP : (Q->P)*, Od : D*->~~D",
            suites: &["system-d"],
            run: d_typing,
        },
        ClaimEntry {
            id: "d.typed-storage",
            description: "Od : D* -> ~~D and every d_n has a witness at D*",
            suites: &["system-d", "counterexample"],
            run: |p| typed_storage("d.typed-storage", &system_d(), p),
        },
        ClaimEntry {
            id: "e.numerals",
            description: "e_n are closed, normal and pairwise distinct",
            suites: E_SUITES,
            run: |p| law_report(&system_e(p.as_printed), p, "numerals"),
        },
        ClaimEntry {
            id: "e.parity",
            description: "e_n = <<b, d_k>> with b = F iff n is odd and k = (n-1)/2",
            suites: E_SUITES,
            run: e_parity,
        },
        ClaimEntry {
            id: "e.successor",
            description: "(Se e_n) = e_n+1",
            suites: E_SUITES,
            run: |p| law_report(&system_e(p.as_printed), p, "successor"),
        },
        ClaimEntry {
            id: "e.zero-test",
            description: "(Ze e0) = T and (Ze e_n+1) = F",
            suites: E_SUITES,
            run: |p| law_report(&system_e(p.as_printed), p, "zero-test"),
        },
        ClaimEntry {
            id: "e.storage",
            description:
                "(Oe theta f) head-reduces to (f tau_n) with tau_0 = e0 and tau_n = <<b, Sd^k d0>>",
            suites: E_SUITES,
            run: e_storage,
        },
        ClaimEntry {
            id: "e.typing",
            description: "witnesses for e_n : E, Ze : E->B, Se : E->E, Oe : E*->~~E",
            suites: E_SUITES,
            run: e_typing,
        },
        ClaimEntry {
            id: "e.typed-storage",
            description: "Oe : E* -> ~~E and every e_n has a witness at E*",
            suites: E_SUITES,
            run: |p| typed_storage("e.typed-storage", &system_e(p.as_printed), p),
        },
        ClaimEntry {
            id: "e.predecessor-untyped",
            description: "the untyped Pe satisfies (Pe e_n+1) = e_n",
            suites: E_SUITES,
            run: |p| {
                check_adequate(&system_e(p.as_printed), p.max_n, p.fuel)
                    .with_id("e.predecessor-untyped")
            },
        },
        ClaimEntry {
            id: "e.p-prime",
            description: "(P' d0) = F, (P' d1) = T, hence P' separates d0 from d1",
            suites: E_SUITES,
            run: e_p_prime,
        },
        ClaimEntry {
            id: "fixpoint.zero-reduct",
            description: "(Z ((\\z.z) 0)) and T have a common head reduct",
            suites: &["fixpoint"],
            run: zero_reduct,
        },
        ClaimEntry {
            id: "fixpoint.church",
            description:
                "the fixed-point operator built from S, Z, P stores Church numerals as S^n 0",
            suites: &["fixpoint"],
            run: fixpoint_church,
        },
        ClaimEntry {
            id: "fixpoint.e",
            description: "the fixed-point operator built from Se, Ze, Pe stores e_n",
            suites: &["fixpoint"],
            run: fixpoint_e,
        },
        ClaimEntry {
            id: "counterexample.no-typed-predecessor",
            description:
                "informational: no System F witness for a predecessor of system e is registered",
            suites: &["counterexample"],
            run: no_typed_predecessor,
        },
        ClaimEntry {
            id: "typing.star-aliases",
            description: "the starred aliases equal the translation of their base types",
            suites: &["kernel"],
            run: star_aliases,
        },
        ClaimEntry {
            id: "typing.subject-reduction",
            description:
                "types are preserved along typed reduction of every witness and applied instances",
            suites: &["kernel"],
            run: subject_reduction,
        },
        ClaimEntry {
            id: "typing.strong-normalization",
            description: "erasures of witnesses reach normal form under random strategies",
            suites: &["kernel"],
            run: strong_normalization,
        },
        ClaimEntry {
            id: "kernel.round-trip",
            description: "parsing the printed form gives back every zoo term",
            suites: &["kernel"],
            run: round_trip,
        },
        ClaimEntry {
            id: "kernel.omega",
            description: "Omega exhausts the fuel and never gets a verdict",
            suites: &["kernel"],
            run: omega,
        },
        ClaimEntry {
            id: "kernel.confluence",
            description: "leftmost and random strategies agree on 500 random terms of size <= 10",
            suites: &["kernel"],
            run: |_| confluence(500, 10, 10_000),
        },
        ClaimEntry {
            id: "kernel.head-substitution",
            description: "a head step t -> t' gives t[u/x] -> t'[u/x] on 200 random cases",
            suites: &["kernel"],
            run: |_| head_substitution(200, 12),
        },
        ClaimEntry {
            id: "kernel.context-stability",
            description: "a common head reduct of u and v persists for (u w) and (v w)",
            suites: &["kernel"],
            run: |_| context_stability(200, 10, 1_000),
        },
    ]
}

/// The entries of `suite`, sorted by claim id; `None` for an unknown suite.
pub fn suite(name: &str) -> Option<Vec<ClaimEntry>> {
    if !SUITES.contains(&name) {
        return None;
    }
    let mut entries: Vec<ClaimEntry> = registry()
        .into_iter()
        .filter(|e| name == "all" || e.suites.contains(&name))
        .collect();
    entries.sort_by_key(|e| e.id);
    Some(entries)
}

/// Runs every claim of `suite` concurrently; reports come back in claim-id
/// order.
pub fn run_suite(name: &str, params: &Params) -> Option<Vec<ClaimReport>> {
    let entries = suite(name)?;
    Some(
        entries
            .par_iter()
            .map(|e| (e.run)(params).with_id(e.id))
            .collect(),
    )
}

pub fn run_claim(id: &str, params: &Params) -> Option<ClaimReport> {
    registry()
        .into_iter()
        .find(|e| e.id == id)
        .map(|e| (e.run)(params).with_id(e.id))
}

// ------------------------------------------------------------------ laws

fn law_report(sys: &NumeralSystem, p: &Params, law: &str) -> ClaimReport {
    let id = format!("{}.{law}", sys.name);
    check_numeral_system(sys, p.max_n, p.fuel)
        .into_iter()
        .find(|r| r.claim_id == id)
        .unwrap_or_else(|| ClaimReport::unknown(id, "law not applicable"))
}

fn iterate(f: &Term, n: usize, x: Term) -> Term {
    (0..n).fold(x, |acc, _| Term::app(f.clone(), acc))
}

fn d_iterate(p: &Params) -> ClaimReport {
    let sd = Zoo::get(false).term("Sd");
    check_law("d.successor-iterate", 0..=p.max_n, p.fuel, |n| {
        (iterate(&sd, n, d_numeral(0)), d_numeral(n))
    })
}

fn e_parity(p: &Params) -> ClaimReport {
    let zoo = Zoo::get(false);
    let top = p.max_n.max(crate::zoo::NAMED_NUMERALS);
    for n in 1..=top {
        let bit = if n % 2 == 1 { ff() } else { tt() };
        let expected = dpair(&bit, &d_numeral((n - 1) / 2));
        let named = zoo.entry(&format!("e{n}")).map(|e| e.term.clone());
        let ok = e_numeral(n) == expected && named.is_none_or(|t| t == expected);
        if !ok {
            return ClaimReport::fail("e.parity", format!("e{n} is not {}", show(&expected)))
                .with_n(n as u64);
        }
    }
    if e_numeral(0) != ff() {
        return ClaimReport::fail("e.parity", "e0 is not F");
    }
    ClaimReport::pass("e.parity").with_n(top as u64)
}

fn e_p_prime(p: &Params) -> ClaimReport {
    let pp = p_prime(p.as_printed).term;
    let mut parts = Vec::new();
    for (k, expected) in [(0, ff()), (1, tt())] {
        let input = Term::app(pp.clone(), d_numeral(k));
        parts.push(check_law("e.p-prime", [k], p.fuel, |_| {
            (input.clone(), expected.clone())
        }));
    }
    let a = Term::app(pp.clone(), d_numeral(0));
    let b = Term::app(pp, d_numeral(1));
    parts.push(match beta_equiv(&a, &b, p.fuel) {
        EquivVerdict::Distinct => ClaimReport::pass("e.p-prime").with_n(1),
        EquivVerdict::Equal => ClaimReport::fail("e.p-prime", "(P' d0) = (P' d1)").with_n(1),
        EquivVerdict::Unknown(k) => {
            ClaimReport::unknown("e.p-prime", "fuel exhausted").with_fuel(k)
        }
    });
    ClaimReport::combine("e.p-prime", parts)
}

// --------------------------------------------------------------- storage

/// Checks the extracted stored values against `expected(n)` syntactically.
fn expect_taus(
    id: &str,
    taus: &[Option<Term>],
    mut expected: impl FnMut(usize) -> Term,
) -> Option<ClaimReport> {
    for (n, tau) in taus.iter().enumerate() {
        if let Some(tau) = tau {
            let want = expected(n);
            if *tau != want {
                return Some(
                    ClaimReport::fail(
                        id,
                        format!("stored value {} is not {}", show(tau), show(&want)),
                    )
                    .with_n(n as u64),
                );
            }
        }
    }
    None
}

fn storage_claim(
    id: &str,
    sys: &NumeralSystem,
    op: &Term,
    max_n: usize,
    p: &Params,
    fuel: u64,
    expected: impl FnMut(usize) -> Term,
) -> ClaimReport {
    let res = check_storage(id, sys, op, max_n, p.variants, fuel);
    let summary = res.summary(id);
    if summary.status == Status::Fail {
        return summary;
    }
    expect_taus(id, &res.taus, expected)
        .map(|r| r.with_fuel(summary.fuel_used))
        .unwrap_or(summary)
}

fn church_storage(p: &Params) -> ClaimReport {
    let sys = system_church(p.as_printed);
    let op = Zoo::get(p.as_printed).term("O_N");
    // O_N uses the corrected successor internally
    let s = Zoo::get(false).term("S");
    storage_claim("church.storage", &sys, &op, p.max_n, p, p.fuel, |n| {
        iterate(&s, n, church(0))
    })
}

fn d_storage(p: &Params) -> ClaimReport {
    let sys = system_d();
    let op = Zoo::get(false).term("Od");
    let sd = sys.successor.clone();
    let max_n = p.max_n.min(STORAGE_MAX_N);
    storage_claim("d.storage", &sys, &op, max_n, p, p.fuel, |n| {
        iterate(&sd, n, d_numeral(0))
    })
}

fn e_storage(p: &Params) -> ClaimReport {
    let sys = system_e(p.as_printed);
    let op = Zoo::get(false).term("Oe");
    let sd = Zoo::get(false).term("Sd");
    let max_n = p.max_n.min(STORAGE_MAX_N);
    storage_claim("e.storage", &sys, &op, max_n, p, p.fuel, |n| {
        if n == 0 {
            e_numeral(0)
        } else {
            let bit = if n % 2 == 1 { ff() } else { tt() };
            dpair(&bit, &iterate(&sd, (n - 1) / 2, d_numeral(0)))
        }
    })
}

fn bool_storage(p: &Params) -> ClaimReport {
    let id = "bool.storage";
    let op = Zoo::get(false).term("OB");
    let mut parts = Vec::new();
    for (i, b) in [tt(), ff()].into_iter().enumerate() {
        let mut thetas = vec![b.clone(), wrap(b.clone())];
        thetas.extend(wrap_under_binders(&b));
        thetas.push(wrap(wrap(b.clone())));
        thetas.truncate(p.variants.max(3));
        let refs: Vec<&Term> = thetas.iter().chain([&op]).collect();
        let f = fresh_var("f", &refs);
        let (report, tau) = check_stored(id, &op, i, &thetas, &b, &f, p.fuel);
        let report = match tau {
            Some(t) if report.passed() && t != b => {
                ClaimReport::fail(id, format!("stored {} instead of {}", show(&t), show(&b)))
                    .with_n(i as u64)
            }
            _ => report,
        };
        parts.push(report);
    }
    ClaimReport::combine(id, parts)
}

fn zero_reduct(p: &Params) -> ClaimReport {
    let id = "fixpoint.zero-reduct";
    let z = system_church(p.as_printed)
        .zero_test
        .expect("church zero test");
    let input = Term::app(z, wrap(church(0)));
    match head_common_reduct(&input, &tt(), p.fuel) {
        EquivVerdict::Equal => ClaimReport::pass(id),
        EquivVerdict::Distinct => ClaimReport::fail(id, format!("{} and T differ", show(&input))),
        EquivVerdict::Unknown(k) => ClaimReport::unknown(id, "fuel exhausted").with_fuel(k),
    }
}

fn fixpoint(id: &str, sys: &NumeralSystem, p: &Params) -> (ClaimReport, Vec<Option<Term>>) {
    let op = match storage_from_adequacy(sys) {
        Ok(op) => op,
        Err(e) => return (ClaimReport::fail(id, e.to_string()), Vec::new()),
    };
    let max_n = p.max_n.min(STORAGE_MAX_N);
    let res = check_storage(id, sys, &op, max_n, p.variants, p.fixpoint_fuel);
    (res.summary(id), res.taus)
}

fn fixpoint_church(p: &Params) -> ClaimReport {
    let id = "fixpoint.church";
    let sys = system_church(p.as_printed);
    let (summary, taus) = fixpoint(id, &sys, p);
    if summary.status == Status::Fail {
        return summary;
    }
    let s = sys.successor.clone();
    expect_taus(id, &taus, |n| iterate(&s, n, church(0))).unwrap_or(summary)
}

fn fixpoint_e(p: &Params) -> ClaimReport {
    fixpoint("fixpoint.e", &system_e(p.as_printed), p).0
}

fn no_typed_predecessor(p: &Params) -> ClaimReport {
    let id = "counterexample.no-typed-predecessor";
    let zoo = Zoo::get(p.as_printed);
    let e = zoo.ty("E");
    let endo = Type::arrow(e.clone(), e);
    let pe = zoo.term("Pe");
    let offending: Vec<&str> = zoo
        .entries()
        .iter()
        .filter(|x| {
            x.witness.as_ref().is_some_and(|w| {
                check(&Context::new(), w).is_ok_and(|t| t == endo)
                    && x.term != zoo.term("Se")
                    && (x.term == pe || x.name.starts_with("Pe"))
            })
        })
        .map(|x| x.name.as_str())
        .collect();
    if !offending.is_empty() {
        return ClaimReport::fail(id, format!("typed predecessor registered: {offending:?}"));
    }
    ClaimReport::pass(id).with_detail(
        "informational: Pe has no witness at E->E; non-existence is a meta-theorem and is not machine-checked",
    )
}

// ---------------------------------------------------------------- typing

struct Obligation {
    label: String,
    expected: Type,
    witness: TypedTerm,
    term: Term,
}

fn obligation(
    label: impl Into<String>,
    expected: Type,
    witness: TypedTerm,
    term: Term,
) -> Obligation {
    Obligation {
        label: label.into(),
        expected,
        witness,
        term,
    }
}

fn named(zoo: &Zoo, name: &str, expected: Type) -> Obligation {
    let e = zoo
        .entry(name)
        .unwrap_or_else(|| panic!("no zoo entry {name}"));
    let w = e
        .witness
        .clone()
        .unwrap_or_else(|| panic!("no witness for {name}"));
    obligation(name, expected, w, e.term.clone())
}

fn discharge(id: &str, obligations: Vec<Obligation>) -> ClaimReport {
    for (i, o) in obligations.iter().enumerate() {
        match check(&Context::new(), &o.witness) {
            Err(e) => return ClaimReport::fail(id, format!("{}: {e}", o.label)).with_n(i as u64),
            Ok(ty) if ty != o.expected => {
                return ClaimReport::fail(
                    id,
                    format!("{} has type {ty}, expected {}", o.label, o.expected),
                )
                .with_n(i as u64)
            }
            Ok(_) => {}
        }
        if o.witness.erase() != o.term {
            return ClaimReport::fail(
                id,
                format!(
                    "{} erases to {}, not {}",
                    o.label,
                    show(&o.witness.erase()),
                    show(&o.term)
                ),
            )
            .with_n(i as u64);
        }
    }
    ClaimReport::pass(id)
        .with_n(obligations.len() as u64)
        .with_detail(format!("{} witnesses", obligations.len()))
}

fn arrow(a: &Type, b: &Type) -> Type {
    Type::arrow(a.clone(), b.clone())
}

fn notnot(a: &Type) -> Type {
    Type::not(Type::not(a.clone()))
}

/// `A* → ¬¬A`
fn storage_type(a: &Type) -> Type {
    Type::arrow(a.godel_star(), notnot(a))
}

fn church_typing(p: &Params) -> ClaimReport {
    let zoo = Zoo::get(p.as_printed);
    let (b, n) = (zoo.ty("B"), zoo.ty("N"));
    let mut obs = vec![
        named(zoo, "T", b.clone()),
        named(zoo, "F", b.clone()),
        named(zoo, "S", arrow(&n, &n)),
        named(zoo, "Z", arrow(&n, &b)),
        named(zoo, "P", arrow(&n, &n)),
        named(zoo, "O_N", storage_type(&n)),
    ];
    for k in 0..=p.max_n {
        obs.push(obligation(
            format!("{k}"),
            n.clone(),
            typed_church(k),
            church(k),
        ));
    }
    discharge("church.typing", obs)
}

fn bool_typing(_: &Params) -> ClaimReport {
    let zoo = Zoo::get(false);
    let b = zoo.ty("B");
    discharge("bool.typing", vec![named(zoo, "OB", storage_type(&b))])
}

fn d_peirce(_: &Params) -> ClaimReport {
    let zoo = Zoo::get(false);
    let expected_erasure = parse_term(r"\x y. x (\z a. z y) y").expect("literal parses");
    let w = zoo.witness("tP").expect("tP witness").clone();
    discharge(
        "d.peirce",
        vec![obligation(
            "tP",
            zoo.ty("P").godel_star(),
            w,
            expected_erasure,
        )],
    )
}

fn d_tp_type(_: &Params) -> ClaimReport {
    let id = "d.tp-type";
    let zoo = Zoo::get(false);
    let (pp, q) = (zoo.ty("P"), zoo.ty("Q"));
    let w = zoo.witness("TP").expect("TP witness");
    let ty = match check(&Context::new(), w) {
        Ok(ty) => ty,
        Err(e) => return ClaimReport::fail(id, e.to_string()),
    };
    let translated = arrow(&q, &pp).godel_star();
    let reversed = arrow(&pp.godel_star(), &q.godel_star());
    if ty != translated {
        return ClaimReport::fail(id, format!("TP has type {ty}, expected {translated}"));
    }
    if ty == reversed {
        return ClaimReport::fail(id, "TP unexpectedly has type P* -> Q*");
    }
    ClaimReport::pass(id).with_detail("TP : Q* -> P*; P* -> Q* is not its type")
}

fn d_typing(p: &Params) -> ClaimReport {
    let zoo = Zoo::get(false);
    let (pp, q, d) = (zoo.ty("P"), zoo.ty("Q"), zoo.ty("D"));
    let sys = system_d();
    let layer = sys.typed_layer.as_ref().expect("typed layer");
    let mut obs = vec![
        named(zoo, "Sd", arrow(&d, &d)),
        named(zoo, "TP", arrow(&q, &pp).godel_star()),
        named(zoo, "Od", storage_type(&d)),
    ];
    for k in 0..=p.max_n {
        obs.push(obligation(
            format!("d{k}"),
            d.clone(),
            (layer.numeral_witness)(k),
            d_numeral(k),
        ));
    }
    discharge("d.typing", obs)
}

fn e_typing(p: &Params) -> ClaimReport {
    let zoo = Zoo::get(p.as_printed);
    let (b, e) = (zoo.ty("B"), zoo.ty("E"));
    let sys = system_e(p.as_printed);
    let layer = sys.typed_layer.as_ref().expect("typed layer");
    let mut obs = vec![
        named(zoo, "Ze", arrow(&e, &b)),
        named(zoo, "Se", arrow(&e, &e)),
        named(zoo, "Oe", storage_type(&e)),
    ];
    for k in 0..=p.max_n {
        obs.push(obligation(
            format!("e{k}"),
            e.clone(),
            (layer.numeral_witness)(k),
            e_numeral(k),
        ));
    }
    discharge("e.typing", obs)
}

fn typed_storage(id: &str, sys: &NumeralSystem, p: &Params) -> ClaimReport {
    let Some(w) = sys
        .typed_layer
        .as_ref()
        .and_then(|l| l.storage_witness.clone())
    else {
        return ClaimReport::unknown(id, "no storage witness");
    };
    check_typed_storage(id, sys, &w, p.max_n)
}

fn star_aliases(_: &Params) -> ClaimReport {
    let id = "typing.star-aliases";
    let zoo = Zoo::get(false);
    let pairs = [
        ("Bs", "B"),
        ("Ns", "N"),
        ("Ps", "P"),
        ("Qs", "Q"),
        ("Ds", "D"),
        ("Es", "E"),
    ];
    for (star, base) in pairs {
        if zoo.ty(star) != zoo.ty(base).godel_star() {
            return ClaimReport::fail(id, format!("{star} is not {base}*"));
        }
    }
    ClaimReport::pass(id).with_n(pairs.len() as u64)
}

/// Every witness, plus witnesses applied to numerals (with a free
/// continuation `f : ¬D` for storage operators).
fn typed_instances() -> Vec<(String, Context, TypedTerm)> {
    let zoo = Zoo::get(false);
    let w = |n: &str| {
        zoo.witness(n)
            .unwrap_or_else(|| panic!("witness {n}"))
            .clone()
    };
    let empty = Context::new;
    let with_f = |ty: &str| {
        Context::new()
            .with("f", Type::not(zoo.ty(ty)))
            .expect("fresh context")
    };
    let app = |f: TypedTerm, args: Vec<TypedTerm>| TypedTerm::apps(f, args);
    let e_w = |n: usize| zoo.witness(&format!("e{n}")).expect("e witness").clone();
    let d_w = |n: usize| zoo.witness(&format!("d{n}")).expect("d witness").clone();
    let f = || TypedTerm::var("f");
    let mut out: Vec<(String, Context, TypedTerm)> = zoo
        .entries()
        .iter()
        .filter_map(|e| Some((e.name.clone(), empty(), e.witness.clone()?)))
        .collect();
    out.extend([
        ("S 3".into(), empty(), app(w("S"), vec![typed_church(3)])),
        ("Z 2".into(), empty(), app(w("Z"), vec![typed_church(2)])),
        ("P 3".into(), empty(), app(w("P"), vec![typed_church(3)])),
        (
            "O_N 3 f".into(),
            with_f("N"),
            app(w("O_N"), vec![typed_church_star(3), f()]),
        ),
        ("Sd d2".into(), empty(), app(w("Sd"), vec![d_w(2)])),
        (
            "Od d3 f".into(),
            with_f("D"),
            app(w("Od"), vec![typed_d_star(3), f()]),
        ),
        (
            "OB T f".into(),
            with_f("B"),
            app(w("OB"), vec![typed_bool_star(true), f()]),
        ),
        ("Ze e3".into(), empty(), app(w("Ze"), vec![e_w(3)])),
        ("Se e4".into(), empty(), app(w("Se"), vec![e_w(4)])),
        (
            "Oe e5 f".into(),
            with_f("E"),
            app(w("Oe"), vec![typed_e_star(5), f()]),
        ),
    ]);
    out
}

fn subject_reduction(p: &Params) -> ClaimReport {
    let id = "typing.subject-reduction";
    let steps = 200;
    let mut parts = Vec::new();
    let mut longest = 0;
    for (label, ctx, t) in typed_instances() {
        let r = subject_reduction_probe(id, &ctx, &t, steps);
        longest = longest.max(r.n);
        if !r.passed() {
            let detail = format!("{label}: {}", r.detail.clone().unwrap_or_default());
            return r.with_detail(detail);
        }
        parts.push(r);
    }
    let _ = p;
    let count = parts.len();
    ClaimReport::combine(id, parts)
        .with_n(longest)
        .with_detail(format!(
            "{count} typed terms, longest reduction {longest} steps"
        ))
}

fn strong_normalization(p: &Params) -> ClaimReport {
    let id = "typing.strong-normalization";
    let mut parts = Vec::new();
    for (label, ctx, t) in typed_instances() {
        let r = sn_probe_seeds(id, &ctx, &t, p.fuel, 3);
        if !r.passed() {
            let detail = format!("{label}: {}", r.detail.clone().unwrap_or_default());
            return r.with_detail(detail);
        }
        parts.push(r);
    }
    let count = parts.len();
    ClaimReport::combine(id, parts).with_detail(format!("{count} erasures, 3 seeds each"))
}

// ---------------------------------------------------------------- kernel

fn round_trip(_: &Params) -> ClaimReport {
    let id = "kernel.round-trip";
    let zoo = Zoo::get(false);
    for e in zoo.entries() {
        let printed = print_term(&e.term);
        match parse_term(&printed) {
            Ok(t) if t == e.term => {}
            Ok(t) => {
                return ClaimReport::fail(id, format!("{}: reparsed as {}", e.name, print_term(&t)))
            }
            Err(err) => return ClaimReport::fail(id, format!("{}: {err}", e.name)),
        }
    }
    ClaimReport::pass(id).with_n(zoo.entries().len() as u64)
}

fn omega(p: &Params) -> ClaimReport {
    let id = "kernel.omega";
    let half = Term::lam("x", Term::app(Term::var("x"), Term::var("x")));
    let om = Term::app(half.clone(), half);
    let fuel = p.fuel.min(10_000);
    let h = head_reduce(&om, 50);
    if h.status != TraceStatus::FuelExhausted || h.fuel_used != 50 {
        return ClaimReport::fail(id, "head reduction of Omega stopped");
    }
    if normalize(&om, 50).status != TraceStatus::FuelExhausted {
        return ClaimReport::fail(id, "normalization of Omega stopped");
    }
    let spent = match beta_equiv(&om, &Term::lam("y", om.clone()), fuel) {
        EquivVerdict::Unknown(k) => k,
        v => return ClaimReport::fail(id, format!("Omega got the verdict {v}")),
    };
    match head_common_reduct(&om, &tt(), fuel) {
        EquivVerdict::Unknown(k) => ClaimReport::pass(id).with_fuel(spent + k),
        v => ClaimReport::fail(id, format!("Omega ~ T got the verdict {v}")),
    }
}

/// Leftmost normal forms agree with random-strategy normal forms.
pub fn confluence(samples: usize, size: usize, fuel: u64) -> ClaimReport {
    let id = "kernel.confluence";
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut compared = 0;
    let mut spent = 0;
    for i in 0..samples {
        let t = loop {
            let t = crate::gen::random_term(&mut rng, size, 0, &["a", "b"]);
            if t.size() as usize <= size {
                break t;
            }
        };
        let a = normal_form(&t, fuel);
        let b = random_normal_form(&t, fuel, i as u64);
        spent += a.steps + b.steps;
        if a.finished() && b.finished() {
            compared += 1;
            if a.term != b.term {
                return ClaimReport::fail(
                    id,
                    format!(
                        "{} has normal forms {} and {}",
                        show(&t),
                        show(&a.term),
                        show(&b.term)
                    ),
                )
                .with_n(i as u64);
            }
        }
    }
    if compared == 0 {
        return ClaimReport::unknown(id, "no sample normalized").with_fuel(spent);
    }
    ClaimReport::pass(id)
        .with_n(samples as u64)
        .with_fuel(spent)
        .with_detail(format!(
            "{compared} of {samples} normalized under both strategies"
        ))
}

/// A head step `t → t'` gives `t[u/x] → t'[u/x]`.
pub fn head_substitution(samples: usize, size: usize) -> ClaimReport {
    let id = "kernel.head-substitution";
    let mut rng = ChaCha8Rng::seed_from_u64(0xbeef);
    let mut done = 0;
    for i in 0..samples {
        let Some(t) = random_with_head_redex(&mut rng, size, &["x", "y"], 1000) else {
            continue;
        };
        let t1 = head_step(&t).expect("has a head redex");
        let u = random_closed(&mut rng, 6);
        let (st, st1) = (t.substitute("x", &u), t1.substitute("x", &u));
        let chain = head_reduce(&st, 8);
        if !chain.terms().any(|c| *c == st1) {
            return ClaimReport::fail(
                id,
                format!(
                    "t={} u={}: head chain misses {}",
                    show(&t),
                    show(&u),
                    show(&st1)
                ),
            )
            .with_n(i as u64);
        }
        done += 1;
    }
    ClaimReport::pass(id).with_n(done)
}

/// `u ∼ v` implies `(u w⃗) ∼ (v w⃗)` within four times the fuel.
pub fn context_stability(samples: usize, size: usize, fuel: u64) -> ClaimReport {
    let id = "kernel.context-stability";
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0de);
    let mut checked = 0;
    for i in 0..samples {
        let Some(u) = random_with_head_redex(&mut rng, size, &["a"], 1000) else {
            continue;
        };
        let steps = 1 + (i % 3);
        let chain = head_reduce(&u, steps as u64);
        let v = chain.last().clone();
        if head_common_reduct(&u, &v, fuel) != EquivVerdict::Equal {
            continue;
        }
        let k = i % 4;
        let ws: Vec<Term> = (0..k).map(|_| random_closed(&mut rng, 5)).collect();
        let (uw, vw) = (Term::apps(u.clone(), ws.clone()), Term::apps(v, ws));
        if head_common_reduct(&uw, &vw, 4 * fuel) != EquivVerdict::Equal {
            return ClaimReport::fail(id, format!("u={} with {k} arguments", show(&u)))
                .with_n(i as u64);
        }
        checked += 1;
    }
    ClaimReport::pass(id).with_n(checked)
}

/// Claim ids registered in more than one place, for sanity checks.
pub fn duplicate_ids() -> BTreeSet<&'static str> {
    let mut seen = BTreeSet::new();
    let mut dup = BTreeSet::new();
    for e in registry() {
        if !seen.insert(e.id) {
            dup.insert(e.id);
        }
    }
    dup
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_suites_known() {
        assert!(duplicate_ids().is_empty());
        for e in registry() {
            for s in e.suites {
                assert!(SUITES.contains(s), "{} names unknown suite {s}", e.id);
            }
        }
        assert!(suite("nope").is_none());
        assert_eq!(suite("all").unwrap().len(), registry().len());
    }

    #[test]
    fn counterexample_bundle_contains_system_e() {
        let ids: Vec<_> = suite("counterexample")
            .unwrap()
            .iter()
            .map(|e| e.id)
            .collect();
        assert!(ids.contains(&"e.storage"));
        assert!(ids.contains(&"counterexample.no-typed-predecessor"));
    }

    #[test]
    fn church_suite_passes_at_small_n() {
        let p = Params {
            max_n: 3,
            ..Params::default()
        };
        for r in run_suite("church", &p).unwrap() {
            assert!(r.passed(), "{r}");
        }
    }
}
