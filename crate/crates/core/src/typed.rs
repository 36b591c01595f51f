//! Church-style System F terms, the syntax-directed checker and erasure.
//!
//! A checked [`TypedTerm`] together with its erasure is the evidence used for a
//! Curry-style judgment `⊢ t : A`: the checker follows the five typing rules
//! one node at a time, type abstractions and instantiations being explicit.
//!
//! Term variables use de Bruijn indices like [`Term`]. Type variables keep
//! their names inside terms (`ΛX` binds the free type variable `X` of its
//! body) so that the freeness side condition of `∀`-introduction is checked
//! literally against the context.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::reduce::{self, TraceStatus};
use crate::report::ClaimReport;
use crate::term::{Name, Term};
use crate::types::{Type, TypeKind};

#[derive(Clone)]
pub struct TypedTerm(Arc<TypedKind>);

pub enum TypedKind {
    Bound(u32),
    Free(Name),
    /// `λx:A. body`, body open in index 0.
    Lam(Name, Type, TypedTerm),
    App(TypedTerm, TypedTerm),
    /// `ΛX. body`, where `X` appears free (by name) in the body's types.
    TyLam(Name, TypedTerm),
    /// `t [G]`
    TyApp(TypedTerm, Type),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error(
        "argument type mismatch: function expects `{expected}` but argument has type `{found}`"
    )]
    DomainMismatch { expected: Type, found: Type },
    #[error("cannot apply a term of non-arrow type `{0}`")]
    NotAFunction(Type),
    #[error("cannot instantiate a term of non-universal type `{0}`")]
    NotPolymorphic(Type),
    #[error("duplicate context variable `{0}`")]
    DuplicateVariable(String),
    #[error("malformed term: dangling index {0}")]
    DanglingIndex(u32),
}

/// `x₁ : A₁, …, xₙ : Aₙ` with pairwise distinct names.
#[derive(Clone, Debug, Default)]
pub struct Context {
    entries: Vec<(Name, Type)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn with(mut self, name: &str, ty: Type) -> Result<Context, TypeError> {
        if self.entries.iter().any(|(n, _)| &**n == name) {
            return Err(TypeError::DuplicateVariable(name.to_string()));
        }
        self.entries.push((name.into(), ty));
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Type> {
        self.entries
            .iter()
            .find(|(n, _)| &**n == name)
            .map(|(_, t)| t)
    }

    pub fn entries(&self) -> &[(Name, Type)] {
        &self.entries
    }

    /// `Aᵢ[G/X]` for every entry.
    pub fn subst_type(&self, x: &str, g: &Type) -> Context {
        Context {
            entries: self
                .entries
                .iter()
                .map(|(n, t)| (n.clone(), t.subst(x, g)))
                .collect(),
        }
    }

    fn mentions(&self, x: &str) -> bool {
        self.entries.iter().any(|(_, t)| t.occurs_free(x))
    }

    fn free_type_vars(&self) -> BTreeSet<Name> {
        self.entries
            .iter()
            .flat_map(|(_, t)| t.free_vars())
            .collect()
    }
}

impl TypedTerm {
    fn mk(kind: TypedKind) -> TypedTerm {
        TypedTerm(Arc::new(kind))
    }

    pub fn var(name: &str) -> TypedTerm {
        TypedTerm::mk(TypedKind::Free(name.into()))
    }

    pub fn bound(index: u32) -> TypedTerm {
        TypedTerm::mk(TypedKind::Bound(index))
    }

    /// `λname:ty. body`, binding the free term variable `name` of `body`.
    pub fn lam(name: &str, ty: Type, body: TypedTerm) -> TypedTerm {
        let body = body.close(name, 0);
        TypedTerm::mk(TypedKind::Lam(name.into(), ty, body))
    }

    pub fn lam_open(hint: Name, ty: Type, body: TypedTerm) -> TypedTerm {
        TypedTerm::mk(TypedKind::Lam(hint, ty, body))
    }

    pub fn app(f: TypedTerm, a: TypedTerm) -> TypedTerm {
        TypedTerm::mk(TypedKind::App(f, a))
    }

    pub fn apps<I: IntoIterator<Item = TypedTerm>>(f: TypedTerm, args: I) -> TypedTerm {
        args.into_iter().fold(f, TypedTerm::app)
    }

    pub fn ty_lam(x: &str, body: TypedTerm) -> TypedTerm {
        TypedTerm::mk(TypedKind::TyLam(x.into(), body))
    }

    pub fn ty_app(f: TypedTerm, g: Type) -> TypedTerm {
        TypedTerm::mk(TypedKind::TyApp(f, g))
    }

    pub fn kind(&self) -> &TypedKind {
        &self.0
    }

    fn close(&self, name: &str, depth: u32) -> TypedTerm {
        match self.kind() {
            TypedKind::Free(n) if &**n == name => TypedTerm::bound(depth),
            TypedKind::Free(_) | TypedKind::Bound(_) => self.clone(),
            TypedKind::Lam(h, a, b) => {
                TypedTerm::lam_open(h.clone(), a.clone(), b.close(name, depth + 1))
            }
            TypedKind::App(f, a) => TypedTerm::app(f.close(name, depth), a.close(name, depth)),
            TypedKind::TyLam(x, b) => TypedTerm::ty_lam(x, b.close(name, depth)),
            TypedKind::TyApp(f, g) => TypedTerm::ty_app(f.close(name, depth), g.clone()),
        }
    }

    /// Drops every piece of type information.
    pub fn erase(&self) -> Term {
        match self.kind() {
            TypedKind::Bound(i) => Term::bound(*i),
            TypedKind::Free(n) => Term::free(n.clone()),
            TypedKind::Lam(h, _, b) => Term::abs(h.clone(), b.erase()),
            TypedKind::App(f, a) => Term::app(f.erase(), a.erase()),
            TypedKind::TyLam(_, b) => b.erase(),
            TypedKind::TyApp(f, _) => f.erase(),
        }
    }

    /// Free type variables: names in annotations not bound by an enclosing `Λ`.
    pub fn free_type_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_ftv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_ftv(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        let mut add = |t: &Type, bound: &Vec<Name>| {
            for v in t.free_vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self.kind() {
            TypedKind::Bound(_) | TypedKind::Free(_) => {}
            TypedKind::Lam(_, a, b) => {
                add(a, bound);
                b.collect_ftv(bound, out);
            }
            TypedKind::App(f, a) => {
                f.collect_ftv(bound, out);
                a.collect_ftv(bound, out);
            }
            TypedKind::TyLam(x, b) => {
                bound.push(x.clone());
                b.collect_ftv(bound, out);
                bound.pop();
            }
            TypedKind::TyApp(f, g) => {
                add(g, bound);
                f.collect_ftv(bound, out);
            }
        }
    }

    fn shift(&self, by: u32, cutoff: u32) -> TypedTerm {
        match self.kind() {
            TypedKind::Bound(i) if *i >= cutoff => TypedTerm::bound(i + by),
            TypedKind::Bound(_) | TypedKind::Free(_) => self.clone(),
            TypedKind::Lam(h, a, b) => {
                TypedTerm::lam_open(h.clone(), a.clone(), b.shift(by, cutoff + 1))
            }
            TypedKind::App(f, a) => TypedTerm::app(f.shift(by, cutoff), a.shift(by, cutoff)),
            TypedKind::TyLam(x, b) => TypedTerm::ty_lam(x, b.shift(by, cutoff)),
            TypedKind::TyApp(f, g) => TypedTerm::ty_app(f.shift(by, cutoff), g.clone()),
        }
    }

    /// Term-level β: substitutes `arg` for index 0 of this open body.
    /// Type binders of the body that would capture a free type variable of
    /// `arg` are renamed.
    pub fn instantiate(&self, arg: &TypedTerm) -> TypedTerm {
        let ftv = arg.free_type_vars();
        self.instantiate_at(arg, &ftv, 0)
    }

    fn instantiate_at(&self, arg: &TypedTerm, ftv: &BTreeSet<Name>, depth: u32) -> TypedTerm {
        match self.kind() {
            TypedKind::Bound(i) if *i == depth => arg.shift(depth, 0),
            TypedKind::Bound(i) if *i > depth => TypedTerm::bound(i - 1),
            TypedKind::Bound(_) | TypedKind::Free(_) => self.clone(),
            TypedKind::Lam(h, a, b) => {
                TypedTerm::lam_open(h.clone(), a.clone(), b.instantiate_at(arg, ftv, depth + 1))
            }
            TypedKind::App(f, a) => TypedTerm::app(
                f.instantiate_at(arg, ftv, depth),
                a.instantiate_at(arg, ftv, depth),
            ),
            TypedKind::TyLam(x, b) => {
                let (x, b) = if ftv.contains(x) {
                    b.rename_binder(x, ftv)
                } else {
                    (x.clone(), b.clone())
                };
                TypedTerm::ty_lam(&x, b.instantiate_at(arg, ftv, depth))
            }
            TypedKind::TyApp(f, g) => {
                TypedTerm::ty_app(f.instantiate_at(arg, ftv, depth), g.clone())
            }
        }
    }

    /// Renames the type variable `x` (bound just above `self`) to a name
    /// avoiding `avoid` and the free type variables of `self`.
    fn rename_binder(&self, x: &Name, avoid: &BTreeSet<Name>) -> (Name, TypedTerm) {
        let mut used = self.free_type_vars();
        used.extend(avoid.iter().cloned());
        let fresh = fresh_name(x, &used);
        let body = self.subst_type(x, &Type::var(&fresh));
        (fresh, body)
    }

    /// `t[G/X]` on every annotation, capture-avoiding.
    pub fn subst_type(&self, x: &str, g: &Type) -> TypedTerm {
        let ftv = g.free_vars();
        self.subst_type_with(x, g, &ftv)
    }

    fn subst_type_with(&self, x: &str, g: &Type, ftv: &BTreeSet<Name>) -> TypedTerm {
        match self.kind() {
            TypedKind::Bound(_) | TypedKind::Free(_) => self.clone(),
            TypedKind::Lam(h, a, b) => {
                TypedTerm::lam_open(h.clone(), a.subst(x, g), b.subst_type_with(x, g, ftv))
            }
            TypedKind::App(f, a) => {
                TypedTerm::app(f.subst_type_with(x, g, ftv), a.subst_type_with(x, g, ftv))
            }
            TypedKind::TyLam(y, _) if &**y == x => self.clone(),
            TypedKind::TyLam(y, b) => {
                let (y, b) = if ftv.contains(y) {
                    let mut avoid = ftv.clone();
                    avoid.insert(x.into());
                    b.rename_binder(y, &avoid)
                } else {
                    (y.clone(), b.clone())
                };
                TypedTerm::ty_lam(&y, b.subst_type_with(x, g, ftv))
            }
            TypedKind::TyApp(f, h) => {
                TypedTerm::ty_app(f.subst_type_with(x, g, ftv), h.subst(x, g))
            }
        }
    }

    /// One leftmost-outermost step over the annotated syntax; contracts both
    /// `(λx:A. t) u` and `(ΛX. t) [G]`.
    pub fn step(&self) -> Option<TypedTerm> {
        match self.kind() {
            TypedKind::App(f, a) => {
                if let TypedKind::Lam(_, _, body) = f.kind() {
                    return Some(body.instantiate(a));
                }
                if let Some(f2) = f.step() {
                    return Some(TypedTerm::app(f2, a.clone()));
                }
                a.step().map(|a2| TypedTerm::app(f.clone(), a2))
            }
            TypedKind::TyApp(f, g) => {
                if let TypedKind::TyLam(x, body) = f.kind() {
                    return Some(body.subst_type(x, g));
                }
                f.step().map(|f2| TypedTerm::ty_app(f2, g.clone()))
            }
            TypedKind::Lam(h, a, b) => b
                .step()
                .map(|b2| TypedTerm::lam_open(h.clone(), a.clone(), b2)),
            TypedKind::TyLam(x, b) => b.step().map(|b2| TypedTerm::ty_lam(x, b2)),
            TypedKind::Bound(_) | TypedKind::Free(_) => None,
        }
    }
}

pub(crate) fn fresh_name(base: &str, used: &BTreeSet<Name>) -> Name {
    let mut candidate = format!("{base}'");
    while used.iter().any(|u| **u == *candidate) {
        candidate.push('\'');
    }
    candidate.into()
}

impl fmt::Debug for TypedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TypedTerm({})", crate::syntax::print_typed(self))
    }
}

impl fmt::Display for TypedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_typed(self))
    }
}

/// Synthesizes the unique type of `t` in `ctx`.
///
/// A `ΛX` whose `X` is free in the context is α-renamed before
/// generalizing, so the side condition on generalization always holds for
/// the renamed binder.
pub fn check(ctx: &Context, t: &TypedTerm) -> Result<Type, TypeError> {
    let mut locals = Vec::new();
    synth(ctx, &mut locals, t)
}

fn synth(ctx: &Context, locals: &mut Vec<Type>, t: &TypedTerm) -> Result<Type, TypeError> {
    match t.kind() {
        TypedKind::Bound(i) => {
            let i = *i as usize;
            if i >= locals.len() {
                return Err(TypeError::DanglingIndex(i as u32));
            }
            Ok(locals[locals.len() - 1 - i].clone())
        }
        TypedKind::Free(n) => ctx
            .get(n)
            .cloned()
            .ok_or_else(|| TypeError::UnboundVariable(n.to_string())),
        TypedKind::Lam(_, a, body) => {
            locals.push(a.clone());
            let b = synth(ctx, locals, body);
            locals.pop();
            Ok(Type::arrow(a.clone(), b?))
        }
        TypedKind::App(f, a) => {
            let tf = synth(ctx, locals, f)?;
            let ta = synth(ctx, locals, a)?;
            match tf.kind() {
                TypeKind::Arrow(dom, cod) => {
                    if *dom == ta {
                        Ok(cod.clone())
                    } else {
                        Err(TypeError::DomainMismatch {
                            expected: dom.clone(),
                            found: ta,
                        })
                    }
                }
                _ => Err(TypeError::NotAFunction(tf)),
            }
        }
        TypedKind::TyLam(x, body) => {
            if ctx.mentions(x) || locals.iter().any(|l| l.occurs_free(x)) {
                let mut avoid = ctx.free_type_vars();
                avoid.extend(locals.iter().flat_map(|l| l.free_vars()));
                let (fresh, body) = body.rename_binder(x, &avoid);
                let a = synth(ctx, locals, &body)?;
                return Ok(Type::forall(&fresh, a));
            }
            let a = synth(ctx, locals, body)?;
            Ok(Type::forall(x, a))
        }
        TypedKind::TyApp(f, g) => {
            let tf = synth(ctx, locals, f)?;
            match tf.kind() {
                TypeKind::Forall(_, body) => Ok(body.open(g)),
                _ => Err(TypeError::NotPolymorphic(tf)),
            }
        }
    }
}

pub fn erase(t: &TypedTerm) -> Term {
    t.erase()
}

/// Reduces the annotated term step by step and re-checks it after each step;
/// fails at the first step whose synthesized type differs from the original.
pub fn subject_reduction_probe(
    claim_id: &str,
    ctx: &Context,
    t: &TypedTerm,
    steps: u64,
) -> ClaimReport {
    let original = match check(ctx, t) {
        Ok(ty) => ty,
        Err(e) => return ClaimReport::fail(claim_id, format!("does not check: {e}")),
    };
    let mut cur = t.clone();
    let mut done = 0;
    while done < steps {
        let Some(next) = cur.step() else { break };
        done += 1;
        match check(ctx, &next) {
            Ok(ty) if ty == original => {}
            Ok(ty) => {
                return ClaimReport::fail(
                    claim_id,
                    format!(
                        "step {done}: type `{ty}` differs from `{original}` at {}",
                        next.erase()
                    ),
                )
                .with_n(done)
                .with_fuel(done)
            }
            Err(e) => {
                return ClaimReport::fail(claim_id, format!("step {done}: {e} at {}", next.erase()))
                    .with_n(done)
                    .with_fuel(done)
            }
        }
        cur = next;
    }
    ClaimReport::pass(claim_id)
        .with_n(done)
        .with_fuel(done)
        .with_detail(format!("type {original} preserved over {done} steps"))
}

/// Normalizes the erasure of a checked term under a randomized redex choice.
pub fn sn_probe(claim_id: &str, ctx: &Context, t: &TypedTerm, fuel: u64, seed: u64) -> ClaimReport {
    if let Err(e) = check(ctx, t) {
        return ClaimReport::fail(claim_id, format!("does not check: {e}"));
    }
    let r = reduce::random_normal_form(&t.erase(), fuel, seed);
    match r.status {
        TraceStatus::NormalForm => ClaimReport::pass(claim_id).with_fuel(r.steps),
        _ => ClaimReport::unknown(claim_id, format!("no normal form within {fuel} steps"))
            .with_fuel(r.steps),
    }
}

/// Like [`sn_probe`] but tries several seeds.
pub fn sn_probe_seeds(
    claim_id: &str,
    ctx: &Context,
    t: &TypedTerm,
    fuel: u64,
    seeds: u64,
) -> ClaimReport {
    let parts = (0..seeds)
        .map(|s| sn_probe(claim_id, ctx, t, fuel, s))
        .collect();
    ClaimReport::combine(claim_id, parts)
}

/// A seeded RNG shared by the probes and property checks.
pub fn probe_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Type {
        Type::var("X")
    }

    fn bool_ty() -> Type {
        Type::forall("X", Type::arrows([x(), x()], x()))
    }

    fn typed_true() -> TypedTerm {
        TypedTerm::ty_lam(
            "X",
            TypedTerm::lam("x", x(), TypedTerm::lam("y", x(), TypedTerm::var("x"))),
        )
    }

    #[test]
    fn church_true_checks_at_bool() {
        let ty = check(&Context::new(), &typed_true()).unwrap();
        assert_eq!(ty, bool_ty());
        assert_eq!(
            typed_true().erase(),
            Term::lams(&["x", "y"], Term::var("x"))
        );
    }

    #[test]
    fn self_application_is_rejected() {
        let t = TypedTerm::lam(
            "x",
            x(),
            TypedTerm::app(TypedTerm::var("x"), TypedTerm::var("x")),
        );
        assert!(matches!(
            check(&Context::new(), &t),
            Err(TypeError::NotAFunction(_))
        ));
        let f = TypedTerm::lam(
            "f",
            Type::arrow(x(), x()),
            TypedTerm::app(TypedTerm::var("f"), TypedTerm::var("f")),
        );
        assert!(matches!(
            check(&Context::new(), &f),
            Err(TypeError::DomainMismatch { .. })
        ));
    }

    #[test]
    fn generalization_never_captures_a_context_variable() {
        // y : X ⊢ ΛX. y  has type ∀X'. X, never ∀X. X
        let ctx = Context::new().with("y", x()).unwrap();
        let t = TypedTerm::ty_lam("X", TypedTerm::var("y"));
        let vacuous = Type::forall("X'", x());
        assert_eq!(check(&ctx, &t), Ok(vacuous.clone()));
        assert_ne!(check(&ctx, &t), Ok(Type::forall("X", x())));
        let local = TypedTerm::lam("y", x(), TypedTerm::ty_lam("X", TypedTerm::var("y")));
        assert_eq!(
            check(&Context::new(), &local),
            Ok(Type::arrow(x(), vacuous))
        );
    }

    #[test]
    fn renamed_binder_still_binds_its_own_occurrences() {
        // y : X ⊢ ΛX. λz:X. z  has type ∀X'. X' → X'
        let ctx = Context::new().with("y", x()).unwrap();
        let t = TypedTerm::ty_lam("X", TypedTerm::lam("z", x(), TypedTerm::var("z")));
        assert_eq!(
            check(&ctx, &t),
            Ok(Type::forall("X", Type::arrow(x(), x())))
        );
    }

    #[test]
    fn unbound_and_non_polymorphic() {
        assert!(matches!(
            check(&Context::new(), &TypedTerm::var("z")),
            Err(TypeError::UnboundVariable(_))
        ));
        let t = TypedTerm::ty_app(TypedTerm::lam("x", x(), TypedTerm::var("x")), x());
        assert!(matches!(
            check(&Context::new(), &t),
            Err(TypeError::NotPolymorphic(_))
        ));
        assert!(Context::new()
            .with("a", x())
            .unwrap()
            .with("a", x())
            .is_err());
    }

    #[test]
    fn instantiation_substitutes_the_type() {
        let t = TypedTerm::ty_app(typed_true(), Type::bottom());
        let ty = check(&Context::new(), &t).unwrap();
        assert_eq!(
            ty,
            Type::arrows([Type::bottom(), Type::bottom()], Type::bottom())
        );
        let stepped = t.step().unwrap();
        assert_eq!(check(&Context::new(), &stepped).unwrap(), ty);
    }

    #[test]
    fn type_substitution_renames_clashing_binders() {
        // ΛY. λy:Y. λz:X. y   with X := Y must not capture
        let t = TypedTerm::ty_lam(
            "Y",
            TypedTerm::lam(
                "y",
                Type::var("Y"),
                TypedTerm::lam("z", x(), TypedTerm::var("y")),
            ),
        );
        let s = t.subst_type("X", &Type::var("Y"));
        let ty = check(&Context::new(), &s).unwrap();
        let expected = Type::forall(
            "Z",
            Type::arrows([Type::var("Z"), Type::var("Y")], Type::var("Z")),
        );
        assert_eq!(ty, expected);
    }

    #[test]
    fn identity_applied_to_true_preserves_bool() {
        let id_b = TypedTerm::lam("b", bool_ty(), TypedTerm::var("b"));
        let t = TypedTerm::app(id_b, typed_true());
        let r = subject_reduction_probe("id", &Context::new(), &t, 10);
        assert!(r.passed(), "{r}");
        assert_eq!(r.n, 1);
        let sn = sn_probe("id", &Context::new(), &t, 100, 1);
        assert!(sn.passed());
    }
}
