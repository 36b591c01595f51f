//! System F types: type variables, `⊥`, arrows and `∀`.
//!
//! Same locally-nameless convention as [`crate::term`]: binders are de Bruijn
//! indices, free type variables are names, hints only matter for printing.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::term::Name;

#[derive(Clone)]
pub struct Type(Arc<TypeKind>);

pub enum TypeKind {
    Bound(u32),
    Var(Name),
    Bottom,
    Arrow(Type, Type),
    /// The body is open; index 0 refers to this binder.
    Forall(Name, Type),
}

impl Type {
    fn mk(kind: TypeKind) -> Type {
        Type(Arc::new(kind))
    }

    pub fn var(name: &str) -> Type {
        Type::mk(TypeKind::Var(name.into()))
    }

    pub fn bound(index: u32) -> Type {
        Type::mk(TypeKind::Bound(index))
    }

    pub fn bottom() -> Type {
        Type::mk(TypeKind::Bottom)
    }

    pub fn arrow(domain: Type, codomain: Type) -> Type {
        Type::mk(TypeKind::Arrow(domain, codomain))
    }

    /// `F₁, …, Fₙ → G`, i.e. `F₁ → (… → (Fₙ → G))`.
    pub fn arrows<I>(domains: I, codomain: Type) -> Type
    where
        I: IntoIterator<Item = Type>,
        I::IntoIter: DoubleEndedIterator,
    {
        domains
            .into_iter()
            .rev()
            .fold(codomain, |acc, d| Type::arrow(d, acc))
    }

    /// `¬A = A → ⊥`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Type) -> Type {
        Type::arrow(a, Type::bottom())
    }

    /// `∀name. body`, binding the free variable `name` of `body`.
    pub fn forall(name: &str, body: Type) -> Type {
        let body = body.close(name, 0);
        Type::mk(TypeKind::Forall(name.into(), body))
    }

    pub fn forall_open(hint: Name, body: Type) -> Type {
        Type::mk(TypeKind::Forall(hint, body))
    }

    pub fn kind(&self) -> &TypeKind {
        &self.0
    }

    pub fn ptr_eq(&self, other: &Type) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn close(&self, name: &str, depth: u32) -> Type {
        match self.kind() {
            TypeKind::Var(n) if &**n == name => Type::bound(depth),
            TypeKind::Var(_) | TypeKind::Bound(_) | TypeKind::Bottom => self.clone(),
            TypeKind::Arrow(a, b) => Type::arrow(a.close(name, depth), b.close(name, depth)),
            TypeKind::Forall(h, b) => Type::forall_open(h.clone(), b.close(name, depth + 1)),
        }
    }

    fn shift(&self, by: u32, cutoff: u32) -> Type {
        match self.kind() {
            TypeKind::Bound(i) if *i >= cutoff => Type::bound(i + by),
            TypeKind::Bound(_) | TypeKind::Var(_) | TypeKind::Bottom => self.clone(),
            TypeKind::Arrow(a, b) => Type::arrow(a.shift(by, cutoff), b.shift(by, cutoff)),
            TypeKind::Forall(h, b) => Type::forall_open(h.clone(), b.shift(by, cutoff + 1)),
        }
    }

    /// Instantiates the body of a `∀`: `A[G/X]` where `X` is index 0.
    pub fn open(&self, g: &Type) -> Type {
        self.open_at(g, 0)
    }

    fn open_at(&self, g: &Type, depth: u32) -> Type {
        match self.kind() {
            TypeKind::Bound(i) if *i == depth => g.shift(depth, 0),
            TypeKind::Bound(i) if *i > depth => Type::bound(i - 1),
            TypeKind::Bound(_) | TypeKind::Var(_) | TypeKind::Bottom => self.clone(),
            TypeKind::Arrow(a, b) => Type::arrow(a.open_at(g, depth), b.open_at(g, depth)),
            TypeKind::Forall(h, b) => Type::forall_open(h.clone(), b.open_at(g, depth + 1)),
        }
    }

    /// Capture-avoiding substitution `A[G/X]` for a free type variable `X`.
    pub fn subst(&self, x: &str, g: &Type) -> Type {
        self.subst_at(x, g, 0)
    }

    fn subst_at(&self, x: &str, g: &Type, depth: u32) -> Type {
        match self.kind() {
            TypeKind::Var(n) if &**n == x => g.shift(depth, 0),
            TypeKind::Var(_) | TypeKind::Bound(_) | TypeKind::Bottom => self.clone(),
            TypeKind::Arrow(a, b) => Type::arrow(a.subst_at(x, g, depth), b.subst_at(x, g, depth)),
            TypeKind::Forall(h, b) => Type::forall_open(h.clone(), b.subst_at(x, g, depth + 1)),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        match self.kind() {
            TypeKind::Var(n) => {
                out.insert(n.clone());
            }
            TypeKind::Bound(_) | TypeKind::Bottom => {}
            TypeKind::Arrow(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            TypeKind::Forall(_, b) => b.collect_free(out),
        }
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        match self.kind() {
            TypeKind::Var(n) => &**n == x,
            TypeKind::Bound(_) | TypeKind::Bottom => false,
            TypeKind::Arrow(a, b) => a.occurs_free(x) || b.occurs_free(x),
            TypeKind::Forall(_, b) => b.occurs_free(x),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// The Gödel translation: each type variable `X` becomes `¬X`; homomorphic
    /// on `⊥`, `→` and `∀`.
    pub fn godel_star(&self) -> Type {
        match self.kind() {
            TypeKind::Bottom => self.clone(),
            TypeKind::Var(_) | TypeKind::Bound(_) => Type::not(self.clone()),
            TypeKind::Arrow(a, b) => Type::arrow(a.godel_star(), b.godel_star()),
            TypeKind::Forall(h, b) => Type::forall_open(h.clone(), b.godel_star()),
        }
    }

    /// Splits `A₁ → … → Aₙ → C` into the domains and the final codomain.
    pub fn split_arrows(&self) -> (Vec<Type>, Type) {
        let mut doms = Vec::new();
        let mut t = self.clone();
        while let TypeKind::Arrow(a, b) = t.kind() {
            doms.push(a.clone());
            let b = b.clone();
            t = b;
        }
        (doms, t)
    }
}

pub fn godel_star(a: &Type) -> Type {
    a.godel_star()
}

pub fn type_subst(a: &Type, x: &str, g: &Type) -> Type {
    a.subst(x, g)
}

impl PartialEq for Type {
    fn eq(&self, other: &Type) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (self.kind(), other.kind()) {
            (TypeKind::Bound(i), TypeKind::Bound(j)) => i == j,
            (TypeKind::Var(a), TypeKind::Var(b)) => a == b,
            (TypeKind::Bottom, TypeKind::Bottom) => true,
            (TypeKind::Arrow(a1, b1), TypeKind::Arrow(a2, b2)) => a1 == a2 && b1 == b2,
            (TypeKind::Forall(_, b1), TypeKind::Forall(_, b2)) => b1 == b2,
            _ => false,
        }
    }
}

impl Eq for Type {}

impl Hash for Type {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self.kind() {
            TypeKind::Bound(i) => {
                state.write_u8(0);
                state.write_u32(*i);
            }
            TypeKind::Var(n) => {
                state.write_u8(1);
                n.hash(state);
            }
            TypeKind::Bottom => state.write_u8(2),
            TypeKind::Arrow(a, b) => {
                state.write_u8(3);
                a.hash(state);
                b.hash(state);
            }
            TypeKind::Forall(_, b) => {
                state.write_u8(4);
                b.hash(state);
            }
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Type({})", crate::syntax::print_type(self))
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_type(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Type {
        Type::var("X")
    }

    #[test]
    fn substitution_replaces_free_occurrences() {
        let b = Type::var("B");
        let id = Type::arrow(x(), x());
        assert_eq!(id.subst("X", &b), Type::arrow(b.clone(), b));
    }

    #[test]
    fn substitution_leaves_binders_alone() {
        let n = Type::var("N");
        let t = Type::forall("X", Type::arrow(x(), Type::var("Y")));
        assert_eq!(
            t.subst("Y", &n),
            Type::forall("X", Type::arrow(x(), n.clone()))
        );
        // the bound X is not touched
        assert_eq!(t.subst("X", &n), t);
    }

    #[test]
    fn substitution_avoids_capture() {
        // (∀Y. X → Y)[Y/X] = ∀Z. Y → Z
        let t = Type::forall("Y", Type::arrow(x(), Type::var("Y")));
        let r = t.subst("X", &Type::var("Y"));
        assert_eq!(
            r,
            Type::forall("Z", Type::arrow(Type::var("Y"), Type::var("Z")))
        );
    }

    #[test]
    fn open_instantiates_the_binder() {
        let poly_id = Type::forall("X", Type::arrow(x(), x()));
        let TypeKind::Forall(_, body) = poly_id.kind() else {
            unreachable!()
        };
        let b = Type::var("B");
        assert_eq!(body.open(&b), Type::arrow(b.clone(), b));
    }

    #[test]
    fn godel_star_clauses() {
        assert_eq!(Type::bottom().godel_star(), Type::bottom());
        assert_eq!(x().godel_star(), Type::not(x()));
        let nat = Type::forall("X", Type::arrows([x(), Type::arrow(x(), x())], x()));
        let nx = Type::not(x());
        let expected = Type::forall(
            "X",
            Type::arrows([nx.clone(), Type::arrow(nx.clone(), nx.clone())], nx),
        );
        assert_eq!(nat.godel_star(), expected);
    }

    #[test]
    fn closedness() {
        assert!(Type::forall("X", x()).is_closed());
        assert!(!Type::arrow(x(), Type::bottom()).is_closed());
    }
}
