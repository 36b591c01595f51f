//! The named terms, types and typing witnesses, and the numeral systems built
//! from them.
//!
//! The definitions live in `data/zoo.lam` (untyped) and `data/zoo.tlam`
//! (types and System F witnesses). Numeral families are also generated
//! directly in Rust so that the shipped files can be cross-checked.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::defs::{parse_definitions, Definitions};
use crate::numeral::{NumeralSystem, TypedLayer};
use crate::syntax::{Folding, Scope};
use crate::term::{iter_apply, Term};
use crate::typed::TypedTerm;
use crate::types::Type;

pub const ZOO_LAM: &str = include_str!("../data/zoo.lam");
pub const ZOO_TLAM: &str = include_str!("../data/zoo.tlam");

/// Largest numeral index with a named definition in the shipped files.
pub const NAMED_NUMERALS: usize = 20;

/// `n̄ = λx.λf. fⁿ x`.
pub fn church(n: usize) -> Term {
    Term::lams(&["x", "f"], iter_apply(&Term::var("f"), n, &Term::var("x")))
}

/// `λx.λy.x`
pub fn tt() -> Term {
    Term::lams(&["x", "y"], Term::var("x"))
}

/// `λx.λy.y`
pub fn ff() -> Term {
    Term::lams(&["x", "y"], Term::var("y"))
}

/// `⟨u,v⟩ = λx.(x u v)`
pub fn pair(u: &Term, v: &Term) -> Term {
    Term::lam("x", Term::apps(Term::var("x"), [u.clone(), v.clone()]))
}

/// `⟪u,v⟫ = λx.λy.(x u v)`
pub fn dpair(u: &Term, v: &Term) -> Term {
    Term::lams(
        &["x", "y"],
        Term::apps(Term::var("x"), [u.clone(), v.clone()]),
    )
}

/// `d_n = λa. n̄`
pub fn d_numeral(n: usize) -> Term {
    Term::lam("a", church(n))
}

/// `e₀ = F`, `e_{2k+1} = ⟪F, d_k⟫`, `e_{2k+2} = ⟪T, d_k⟫`.
pub fn e_numeral(n: usize) -> Term {
    if n == 0 {
        return ff();
    }
    let k = (n - 1) / 2;
    let bit = if n % 2 == 1 { ff() } else { tt() };
    dpair(&bit, &d_numeral(k))
}

/// `∀X. X → (X → X) → X`
pub fn nat_type() -> Type {
    let x = Type::var("X");
    Type::forall(
        "X",
        Type::arrows([x.clone(), Type::arrow(x.clone(), x.clone())], x),
    )
}

/// `∀X. X → X → X`
pub fn bool_type() -> Type {
    let x = Type::var("X");
    Type::forall("X", Type::arrows([x.clone(), x.clone()], x))
}

/// `ΛX. λx:A. λf:A→A. fⁿ x` with `A = dom(X)`.
fn typed_iterate(n: usize, dom: impl Fn(Type) -> Type) -> TypedTerm {
    let a = dom(Type::var("X"));
    let mut body = TypedTerm::var("x");
    for _ in 0..n {
        body = TypedTerm::app(TypedTerm::var("f"), body);
    }
    let inner = TypedTerm::lam("f", Type::arrow(a.clone(), a.clone()), body);
    TypedTerm::ty_lam("X", TypedTerm::lam("x", a, inner))
}

/// The Church numeral as a witness at `N`.
pub fn typed_church(n: usize) -> TypedTerm {
    typed_iterate(n, |x| x)
}

/// The Church numeral as a witness at `N*`.
pub fn typed_church_star(n: usize) -> TypedTerm {
    typed_iterate(n, Type::not)
}

/// A boolean selector as a witness at `B*`.
pub fn typed_bool_star(value: bool) -> TypedTerm {
    let nx = Type::not(Type::var("X"));
    let pick = if value { "x" } else { "y" };
    TypedTerm::ty_lam(
        "X",
        TypedTerm::lam(
            "x",
            nx.clone(),
            TypedTerm::lam("y", nx, TypedTerm::var(pick)),
        ),
    )
}

fn typed_zoo() -> &'static Definitions {
    static TYPED: OnceLock<Definitions> = OnceLock::new();
    TYPED.get_or_init(|| parse_definitions(ZOO_TLAM, None).expect("zoo.tlam parses"))
}

fn alias(name: &str) -> Type {
    typed_zoo()
        .ty(name)
        .unwrap_or_else(|| panic!("type alias {name} missing from zoo.tlam"))
        .clone()
}

/// `d_n` as a witness at `D*`: `λa:Q*→P*. n̄*`.
pub fn typed_d_star(n: usize) -> TypedTerm {
    let dom = Type::arrow(alias("Qs"), alias("Ps"));
    TypedTerm::lam("a", dom, typed_church_star(n))
}

/// `e_n` as a witness at `E*`.
pub fn typed_e_star(n: usize) -> TypedTerm {
    let nx = Type::not(Type::var("X"));
    let sel = Type::arrows([alias("Bs"), alias("Ds")], nx.clone());
    let body = if n == 0 {
        TypedTerm::var("y")
    } else {
        let k = (n - 1) / 2;
        TypedTerm::apps(
            TypedTerm::var("x"),
            [typed_bool_star(n.is_multiple_of(2)), typed_d_star(k)],
        )
    };
    TypedTerm::ty_lam("X", TypedTerm::lam("x", sel, TypedTerm::lam("y", nx, body)))
}

/// A named term, with its System F witness when it has one.
#[derive(Clone, Debug)]
pub struct ZooEntry {
    pub name: String,
    pub term: Term,
    pub claimed_type: Option<Type>,
    pub witness: Option<TypedTerm>,
    pub anchor: String,
}

fn describe(name: &str) -> String {
    let fixed = match name {
        "T" => "boolean true, first projection",
        "F" => "boolean false, second projection",
        "U" => "half of the Turing fixed point",
        "Theta" => "Turing fixed point U U",
        "S" => "Church successor",
        "Z" => "Church zero test",
        "Upred" => "predecessor step: shifts a pair of numerals",
        "P" => "Church predecessor",
        "J" => "continuation step of the Church storage operator",
        "O_N" => "storage operator for Church numerals",
        "S_printed" => "Church successor, typeset form",
        "U_printed" => "predecessor step, typeset form",
        "P_printed" => "Church predecessor, typeset form",
        "tP" => "proof of the translated Peirce law",
        "TP" => "constant function returning tP",
        "Sd" => "successor of system d",
        "hd0" => "stored zero of system d",
        "hSd" => "storage step of system d",
        "Od" => "storage operator of system d",
        "OB" => "storage operator for booleans",
        "Ze" => "zero test of system e",
        "Se" => "successor of system e",
        "hSe" => "storage step of system e",
        "he0" => "stored zero of system e",
        "Oe" => "storage operator of system e",
        "Pe" => "untyped predecessor of system e",
        "Pe_printed" => "untyped predecessor of system e, typeset form",
        "Pprime" => "parity probe built from the predecessor of system e",
        _ => "",
    };
    if !fixed.is_empty() {
        return fixed.to_string();
    }
    if let Some(k) = name.strip_prefix('d').and_then(|s| s.parse::<usize>().ok()) {
        return format!("numeral {k} of system d");
    }
    if let Some(k) = name.strip_prefix('e').and_then(|s| s.parse::<usize>().ok()) {
        return format!("numeral {k} of system e");
    }
    String::new()
}

/// Names whose exposed variant changes under `as_printed`.
pub const PRINTED_VARIANTS: [(&str, &str); 3] =
    [("S", "S_printed"), ("P", "P_printed"), ("Pe", "Pe_printed")];

/// The full collection of named terms.
pub struct Zoo {
    pub as_printed: bool,
    untyped: Definitions,
    entries: Vec<ZooEntry>,
    index: BTreeMap<String, usize>,
    prelude: Scope,
}

impl Zoo {
    fn build(as_printed: bool) -> Zoo {
        let untyped = parse_definitions(ZOO_LAM, None).expect("zoo.lam parses");
        let typed = typed_zoo();
        let mut prelude = untyped.scope.clone();
        prelude.types = typed.scope.types.clone();
        prelude.typed = typed.scope.typed.clone();
        let claims: BTreeMap<&str, (&Type, &TypedTerm)> =
            typed.tdefs().map(|(n, ty, w)| (&**n, (ty, w))).collect();
        let mut entries = Vec::new();
        let mut index = BTreeMap::new();
        for (name, term) in untyped.defs() {
            let mut term = term.clone();
            if as_printed {
                if let Some((_, printed)) = PRINTED_VARIANTS.iter().find(|(n, _)| **n == **name) {
                    term = untyped.term(printed).expect("printed variant").clone();
                    prelude.terms.insert(name.clone(), term.clone());
                }
            }
            let (claimed_type, witness) = match claims.get(&**name) {
                Some((ty, w)) => (Some((*ty).clone()), Some((*w).clone())),
                None => (None, None),
            };
            index.insert(name.to_string(), entries.len());
            entries.push(ZooEntry {
                name: name.to_string(),
                term,
                claimed_type,
                witness,
                anchor: describe(name),
            });
        }
        Zoo {
            as_printed,
            untyped,
            entries,
            index,
            prelude,
        }
    }

    /// The shared zoo; `as_printed` swaps in the typeset successor,
    /// predecessor and system-e predecessor.
    pub fn get(as_printed: bool) -> &'static Zoo {
        static CORRECTED: OnceLock<Zoo> = OnceLock::new();
        static PRINTED: OnceLock<Zoo> = OnceLock::new();
        if as_printed {
            PRINTED.get_or_init(|| Zoo::build(true))
        } else {
            CORRECTED.get_or_init(|| Zoo::build(false))
        }
    }

    pub fn entries(&self) -> &[ZooEntry] {
        &self.entries
    }

    pub fn entry(&self, name: &str) -> Option<&ZooEntry> {
        self.index.get(name).map(|&i| &self.entries[i])
    }

    /// The term named `name`; panics if there is none.
    pub fn term(&self, name: &str) -> Term {
        self.entry(name)
            .unwrap_or_else(|| panic!("no zoo entry named {name}"))
            .term
            .clone()
    }

    /// The definitions as written, ignoring `as_printed`.
    pub fn definitions(&self) -> &Definitions {
        &self.untyped
    }

    pub fn typed_definitions(&self) -> &'static Definitions {
        typed_zoo()
    }

    pub fn ty(&self, name: &str) -> Type {
        alias(name)
    }

    pub fn witness(&self, name: &str) -> Option<&TypedTerm> {
        self.entry(name).and_then(|e| e.witness.as_ref())
    }

    /// Name-resolution scope for parsing user input against the zoo.
    pub fn prelude(&self) -> &Scope {
        &self.prelude
    }

    /// Abbreviations for printing: every named closed term and the Church
    /// numerals up to [`NAMED_NUMERALS`].
    pub fn folding(&self) -> Folding {
        let mut f = Folding::new();
        for e in &self.entries {
            f.add(&e.name, &e.term);
        }
        for n in 0..=NAMED_NUMERALS {
            f.add(&n.to_string(), &church(n));
        }
        f
    }
}

/// [`Zoo::folding`] of the corrected zoo, built once.
pub fn shared_folding() -> &'static Folding {
    static FOLDING: OnceLock<Folding> = OnceLock::new();
    FOLDING.get_or_init(|| Zoo::get(false).folding())
}

/// The Church successor, zero test and predecessor.
#[derive(Clone, Debug)]
pub struct ChurchOps {
    pub s: Term,
    pub z: Term,
    pub p: Term,
}

pub fn church_ops(as_printed: bool) -> ChurchOps {
    let zoo = Zoo::get(as_printed);
    ChurchOps {
        s: zoo.term("S"),
        z: zoo.term("Z"),
        p: zoo.term("P"),
    }
}

fn witnesses(zoo: &Zoo, names: &[&str]) -> BTreeMap<String, (Type, TypedTerm)> {
    names
        .iter()
        .filter_map(|n| {
            let e = zoo.entry(n)?;
            Some((n.to_string(), (e.claimed_type.clone()?, e.witness.clone()?)))
        })
        .collect()
}

pub fn system_church(as_printed: bool) -> NumeralSystem {
    let zoo = Zoo::get(as_printed);
    let ops = church_ops(as_printed);
    NumeralSystem {
        name: "church".into(),
        numeral: Arc::new(church),
        successor: ops.s,
        zero_test: Some(ops.z),
        predecessor: Some(ops.p),
        storage: Some(zoo.term("O_N")),
        typed_layer: Some(TypedLayer {
            data_type: alias("N"),
            numeral_witness: Arc::new(typed_church),
            star_witness: Arc::new(typed_church_star),
            storage_witness: zoo.witness("O_N").cloned(),
            witnesses: witnesses(zoo, &["S", "Z", "P", "J", "O_N"]),
        }),
    }
}

pub fn system_d() -> NumeralSystem {
    let zoo = Zoo::get(false);
    NumeralSystem {
        name: "d".into(),
        numeral: Arc::new(d_numeral),
        successor: zoo.term("Sd"),
        zero_test: None,
        predecessor: None,
        storage: Some(zoo.term("Od")),
        typed_layer: Some(TypedLayer {
            data_type: alias("D"),
            numeral_witness: Arc::new(|n| {
                let zoo = Zoo::get(false);
                match zoo.witness(&format!("d{n}")) {
                    Some(w) => w.clone(),
                    None => {
                        TypedTerm::lam("a", Type::arrow(alias("Q"), alias("P")), typed_church(n))
                    }
                }
            }),
            star_witness: Arc::new(typed_d_star),
            storage_witness: zoo.witness("Od").cloned(),
            witnesses: witnesses(zoo, &["tP", "TP", "Sd", "hd0", "hSd", "Od"]),
        }),
    }
}

/// The boolean storage operator with its witness.
pub fn bool_storage() -> ZooEntry {
    Zoo::get(false).entry("OB").expect("OB").clone()
}

pub fn system_e(as_printed: bool) -> NumeralSystem {
    let zoo = Zoo::get(as_printed);
    NumeralSystem {
        name: "e".into(),
        numeral: Arc::new(e_numeral),
        successor: zoo.term("Se"),
        zero_test: Some(zoo.term("Ze")),
        predecessor: Some(zoo.term("Pe")),
        storage: Some(zoo.term("Oe")),
        typed_layer: Some(TypedLayer {
            data_type: alias("E"),
            numeral_witness: Arc::new(|n| {
                let zoo = Zoo::get(false);
                zoo.witness(&format!("e{n}"))
                    .cloned()
                    .unwrap_or_else(|| typed_e(n))
            }),
            star_witness: Arc::new(typed_e_star),
            storage_witness: zoo.witness("Oe").cloned(),
            witnesses: witnesses(zoo, &["Ze", "Se", "hSe", "he0", "Oe"]),
        }),
    }
}

/// `e_n` as a witness at `E`, for indices past the named ones.
fn typed_e(n: usize) -> TypedTerm {
    let x = Type::var("X");
    let sel = Type::arrows([alias("B"), alias("D")], x.clone());
    let body = if n == 0 {
        TypedTerm::var("y")
    } else {
        let k = (n - 1) / 2;
        let bit = Zoo::get(false)
            .witness(if n.is_multiple_of(2) { "T" } else { "F" })
            .expect("boolean witness")
            .clone();
        let d = TypedTerm::lam("a", Type::arrow(alias("Q"), alias("P")), typed_church(k));
        TypedTerm::apps(TypedTerm::var("x"), [bit, d])
    };
    TypedTerm::ty_lam("X", TypedTerm::lam("x", sel, TypedTerm::lam("y", x, body)))
}

/// `P′ = λn. (P_e ⟪F, n⟫ T F)` over the exposed system-e predecessor.
pub fn p_prime(as_printed: bool) -> ZooEntry {
    let zoo = Zoo::get(as_printed);
    let pe = zoo.term("Pe");
    let body = Term::apps(pe, [dpair(&ff(), &Term::var("n")), tt(), ff()]);
    ZooEntry {
        name: "Pprime".into(),
        term: Term::lam("n", body),
        claimed_type: None,
        witness: None,
        anchor: describe("Pprime"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::{beta_equiv, normal_form, EquivVerdict, DEFAULT_FUEL};

    #[test]
    fn church_numerals() {
        assert_eq!(church(0), Term::lams(&["x", "f"], Term::var("x")));
        assert_eq!(church(0).to_string(), r"\x.\f.x");
        assert_eq!(church(3).to_string(), r"\x.\f.f (f (f x))");
    }

    #[test]
    fn shipped_numerals_match_generators() {
        let zoo = Zoo::get(false);
        for k in 0..=NAMED_NUMERALS {
            assert_eq!(zoo.term(&format!("d{k}")), d_numeral(k), "d{k}");
            assert_eq!(zoo.term(&format!("e{k}")), e_numeral(k), "e{k}");
        }
    }

    #[test]
    fn every_entry_is_closed() {
        for e in Zoo::get(false).entries() {
            assert!(e.term.is_closed(), "{} is not closed", e.name);
        }
    }

    #[test]
    fn as_printed_swaps_only_three_entries() {
        let (a, b) = (Zoo::get(false), Zoo::get(true));
        assert_eq!(a.entries().len(), b.entries().len());
        for (x, y) in a.entries().iter().zip(b.entries()) {
            let swapped = PRINTED_VARIANTS.iter().any(|(n, _)| *n == x.name);
            assert_eq!(x.term != y.term, swapped, "{}", x.name);
        }
    }

    #[test]
    fn p_prime_matches_shipped_definition() {
        assert_eq!(p_prime(false).term, Zoo::get(false).term("Pprime"));
    }

    #[test]
    fn church_ops_oracle() {
        let ops = church_ops(false);
        let v = beta_equiv(
            &Term::app(ops.s.clone(), church(4)),
            &church(5),
            DEFAULT_FUEL,
        );
        assert_eq!(v, EquivVerdict::Equal);
        let printed = church_ops(true);
        let v = beta_equiv(&Term::app(printed.p, church(1)), &church(0), DEFAULT_FUEL);
        assert_eq!(v, EquivVerdict::Distinct);
        let nf = normal_form(&Term::app(ops.p, church(3)), DEFAULT_FUEL);
        assert_eq!(nf.term, church(2));
    }
}
