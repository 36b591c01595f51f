//! One line per acceptance criterion. Every verdict is exact (α-equality
//! or a β-equivalence verdict), so the only pinned tolerances are the
//! bounds below.

use lamlab_core::numeral::{check_storage, theta_variants};
use lamlab_core::reduce::{head_reduce, normalize, TraceStatus};
use lamlab_core::registry::{run_claim, Params};
use lamlab_core::zoo::{system_church, Zoo};
use lamlab_core::{check, parse_term, ClaimReport, Context, Status, Term, Type};

/// Largest Church numeral for the arithmetic laws.
const LAW_MAX_N: usize = 20;
/// Per-law fuel bound.
const LAW_FUEL: u64 = 100_000;
/// Largest numeral for storage of Church numerals and for system e.
const STORAGE_N: usize = 10;
/// Largest numeral for the fixed-point and system d storage checks.
const FIXPOINT_N: usize = 8;
const FIXPOINT_FUEL: u64 = 1_000_000;
/// θ-variants per numeral.
const MIN_VARIANTS: usize = 3;
/// Subject reduction must follow at least this many steps on some witness.
const MIN_SR_STEPS: u64 = 10;

struct Outcome {
    number: u32,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn params(max_n: usize) -> Params {
    Params {
        max_n,
        fuel: LAW_FUEL,
        fixpoint_fuel: FIXPOINT_FUEL,
        variants: MIN_VARIANTS + 1,
        as_printed: false,
    }
}

fn claims(ids: &[&str], p: &Params) -> Vec<ClaimReport> {
    ids.iter()
        .map(|id| run_claim(id, p).unwrap_or_else(|| panic!("unregistered claim {id}")))
        .collect()
}

fn from_reports(number: u32, title: &'static str, reports: Vec<ClaimReport>) -> Outcome {
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| r.status != Status::Pass)
        .map(|r| r.line())
        .collect();
    Outcome {
        number,
        title,
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{} claims", reports.len())
        } else {
            bad.join("; ")
        },
    }
}

fn church_laws() -> Outcome {
    let p = params(LAW_MAX_N);
    let ids = ["church.successor", "church.zero-test", "church.predecessor"];
    from_reports(
        1,
        "Church successor, zero test and predecessor up to 20",
        claims(&ids, &p),
    )
}

fn church_storage() -> Outcome {
    let p = params(STORAGE_N);
    let sys = system_church(false);
    let mut reports = claims(&["church.storage"], &p);
    for n in 0..=STORAGE_N {
        let k = theta_variants(&sys, n, p.variants, p.fuel).len();
        if k < MIN_VARIANTS {
            reports.push(ClaimReport::fail("variants", format!("only {k} for n={n}")));
        }
    }
    from_reports(2, "O_N stores every theta as S^n 0", reports)
}

fn fixpoint() -> Outcome {
    let p = params(FIXPOINT_N);
    from_reports(
        3,
        "fixed-point storage over Church numerals and system e",
        claims(&["fixpoint.church", "fixpoint.e"], &p),
    )
}

fn system_d() -> Outcome {
    let ids = ["d.successor", "d.successor-iterate", "d.storage"];
    from_reports(
        4,
        "system d successor and storage",
        claims(&ids, &params(STORAGE_N)),
    )
}

fn booleans() -> Outcome {
    from_reports(
        5,
        "O_B stores T and F",
        claims(&["bool.storage"], &params(1)),
    )
}

fn system_e() -> Outcome {
    let ids = [
        "e.zero-test",
        "e.successor",
        "e.storage",
        "e.predecessor-untyped",
        "e.p-prime",
    ];
    from_reports(6, "system e computations", claims(&ids, &params(STORAGE_N)))
}

/// The reversed-arrow typing of TP is checked literally. It cannot hold:
/// TP = λa.tP has type A → P* for any A, and Q* is not inhabited.
fn typing() -> Outcome {
    let p = params(5);
    let ids = [
        "church.typing",
        "bool.typing",
        "d.peirce",
        "d.typing",
        "e.typing",
    ];
    let mut out = from_reports(
        7,
        "typing witnesses with coherent erasure",
        claims(&ids, &p),
    );
    let zoo = Zoo::get(false);
    let tp = check(&Context::new(), zoo.witness("TP").expect("TP witness")).expect("TP checks");
    let literal = Type::arrow(zoo.ty("P").godel_star(), zoo.ty("Q").godel_star());
    if tp != literal {
        out.pass = false;
        out.detail = format!(
            "TP : P* -> Q* does not hold, TP synthesizes {tp}; other witnesses: {}",
            out.detail
        );
    }
    out
}

fn properties() -> Outcome {
    let p = params(STORAGE_N);
    let ids = [
        "typing.subject-reduction",
        "typing.strong-normalization",
        "kernel.confluence",
        "kernel.head-substitution",
    ];
    let mut reports = claims(&ids, &p);
    if reports[0].n < MIN_SR_STEPS {
        reports.push(ClaimReport::fail(
            "subject-reduction",
            format!("longest reduction only {} steps", reports[0].n),
        ));
    }
    from_reports(
        8,
        "subject reduction, normalization, confluence, substitution",
        reports,
    )
}

fn negatives() -> Outcome {
    let mut problems = Vec::new();
    let printed = Params {
        as_printed: true,
        ..params(LAW_MAX_N)
    };
    for id in ["church.successor", "church.predecessor"] {
        let r = run_claim(id, &printed).unwrap();
        if r.status != Status::Fail || r.detail.is_none() {
            problems.push(format!("as printed {id} did not fail: {r}"));
        }
    }
    let sabotaged = parse_term(r"\n f. f n").unwrap();
    let sys = system_church(false);
    let r = check_storage("sabotaged", &sys, &sabotaged, 3, MIN_VARIANTS + 1, LAW_FUEL)
        .summary("sabotaged");
    let theta_dependent = r
        .detail
        .as_deref()
        .is_some_and(|d| d.contains("depends on theta"));
    if r.status != Status::Fail || !theta_dependent {
        problems.push(format!("sabotaged operator: {r}"));
    }
    let half = Term::lam("x", Term::app(Term::var("x"), Term::var("x")));
    let omega = Term::app(half.clone(), half);
    if head_reduce(&omega, 1000).status != TraceStatus::FuelExhausted
        || normalize(&omega, 1000).status != TraceStatus::FuelExhausted
    {
        problems.push("Omega stopped".into());
    }
    let om = run_claim("kernel.omega", &params(1)).unwrap();
    if om.status != Status::Pass {
        problems.push(om.line());
    }
    Outcome {
        number: 9,
        title: "printed variants, sabotaged storage and Omega fail as expected",
        pass: problems.is_empty(),
        detail: if problems.is_empty() {
            "4 negative checks".into()
        } else {
            problems.join("; ")
        },
    }
}

/// Criteria known not to hold as stated, with the reason printed.
const UNATTAINABLE: &[u32] = &[7];

#[test]
fn acceptance() {
    let outcomes = [
        church_laws(),
        church_storage(),
        fixpoint(),
        system_d(),
        booleans(),
        system_e(),
        typing(),
        properties(),
        negatives(),
    ];
    for o in &outcomes {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict} {}: {}", o.number, o.title, o.detail);
    }
    for o in &outcomes {
        if UNATTAINABLE.contains(&o.number) {
            // only the reversed TP arrow may fail
            assert!(
                o.pass || o.detail.ends_with("other witnesses: 5 claims"),
                "criterion {}: {}",
                o.number,
                o.detail
            );
        } else {
            assert!(o.pass, "criterion {}: {}", o.number, o.detail);
        }
    }
}
