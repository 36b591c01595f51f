//! Pure λ-terms.
//!
//! Bound variables are de Bruijn indices and free variables are names, so two
//! α-equivalent terms have the same internal shape. Binder names are kept only
//! as printing hints and are ignored by `==` and `Hash`.
//!
//! Every node caches its structural hash, its size, the number of β-redexes it
//! contains and how far its loose indices reach, which keeps equality tests,
//! substitution and redex search cheap on the large terms produced while
//! running storage operators.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub type Name = Arc<str>;

#[derive(Clone)]
pub struct Term(Arc<Node>);

struct Node {
    kind: TermKind,
    hash: u64,
    /// One more than the largest loose de Bruijn index, 0 when there is none.
    loose: u32,
    size: u64,
    redexes: u64,
    has_free: bool,
}

/// The shape of one node. The body of a `Lam` is an open term whose index 0
/// refers to that binder.
pub enum TermKind {
    Bound(u32),
    Free(Name),
    Lam(Name, Term),
    App(Term, Term),
}

const TAG_BOUND: u64 = 0x9e37_79b9_7f4a_7c15;
const TAG_FREE: u64 = 0xc2b2_ae3d_27d4_eb4f;
const TAG_LAM: u64 = 0x1656_67b1_9e37_79f9;
const TAG_APP: u64 = 0x85eb_ca77_c2b2_ae63;

fn mix(a: u64, b: u64) -> u64 {
    let x = (a ^ b.rotate_left(23)).wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^ (x >> 29)
}

fn name_hash(name: &str) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    name.hash(&mut h);
    h.finish()
}

impl Term {
    fn from_kind(kind: TermKind) -> Term {
        let node = match &kind {
            TermKind::Bound(i) => Node {
                hash: mix(TAG_BOUND, *i as u64),
                loose: i + 1,
                size: 1,
                redexes: 0,
                has_free: false,
                kind,
            },
            TermKind::Free(n) => Node {
                hash: mix(TAG_FREE, name_hash(n)),
                loose: 0,
                size: 1,
                redexes: 0,
                has_free: true,
                kind,
            },
            TermKind::Lam(_, b) => Node {
                hash: mix(TAG_LAM, b.0.hash),
                loose: b.0.loose.saturating_sub(1),
                size: b.0.size.saturating_add(1),
                redexes: b.0.redexes,
                has_free: b.0.has_free,
                kind,
            },
            TermKind::App(f, a) => {
                let here = u64::from(matches!(f.kind(), TermKind::Lam(..)));
                Node {
                    hash: mix(mix(TAG_APP, f.0.hash), a.0.hash),
                    loose: f.0.loose.max(a.0.loose),
                    size: f.0.size.saturating_add(a.0.size).saturating_add(1),
                    redexes: f.0.redexes.saturating_add(a.0.redexes).saturating_add(here),
                    has_free: f.0.has_free || a.0.has_free,
                    kind,
                }
            }
        };
        Term(Arc::new(node))
    }

    /// A free variable.
    pub fn var(name: &str) -> Term {
        Term::from_kind(TermKind::Free(name.into()))
    }

    pub fn free(name: Name) -> Term {
        Term::from_kind(TermKind::Free(name))
    }

    /// A de Bruijn index. Only meaningful underneath enough binders.
    pub fn bound(index: u32) -> Term {
        Term::from_kind(TermKind::Bound(index))
    }

    /// Wraps an open body (index 0 bound here) in a binder with the given hint.
    pub fn abs(hint: Name, body: Term) -> Term {
        Term::from_kind(TermKind::Lam(hint, body))
    }

    /// `λname. body`, binding every free occurrence of `name` in `body`.
    pub fn lam(name: &str, body: Term) -> Term {
        let body = body.close(name, 0);
        Term::abs(name.into(), body)
    }

    /// `λx₁ … λxₙ. body`.
    pub fn lams(names: &[&str], body: Term) -> Term {
        names.iter().rev().fold(body, |acc, n| Term::lam(n, acc))
    }

    pub fn app(function: Term, argument: Term) -> Term {
        Term::from_kind(TermKind::App(function, argument))
    }

    /// Left-associated application `(f a₁ … aₙ)`.
    pub fn apps<I: IntoIterator<Item = Term>>(function: Term, args: I) -> Term {
        args.into_iter().fold(function, Term::app)
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// Number of β-redexes occurring anywhere in the term (saturating).
    pub fn redex_count(&self) -> u64 {
        self.0.redexes
    }

    pub fn is_normal(&self) -> bool {
        self.0.redexes == 0
    }

    /// True when no de Bruijn index escapes the term.
    pub fn is_locally_closed(&self) -> bool {
        self.0.loose == 0
    }

    pub(crate) fn loose(&self) -> u32 {
        self.0.loose
    }

    pub fn has_free_vars(&self) -> bool {
        self.0.has_free
    }

    pub fn is_closed(&self) -> bool {
        self.0.loose == 0 && !self.0.has_free
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        if !self.0.has_free {
            return;
        }
        match self.kind() {
            TermKind::Free(n) => {
                out.insert(n.clone());
            }
            TermKind::Bound(_) => {}
            TermKind::Lam(_, b) => b.collect_free(out),
            TermKind::App(f, a) => {
                f.collect_free(out);
                a.collect_free(out);
            }
        }
    }

    pub fn occurs_free(&self, name: &str) -> bool {
        if !self.0.has_free {
            return false;
        }
        match self.kind() {
            TermKind::Free(n) => &**n == name,
            TermKind::Bound(_) => false,
            TermKind::Lam(_, b) => b.occurs_free(name),
            TermKind::App(f, a) => f.occurs_free(name) || a.occurs_free(name),
        }
    }

    /// Replaces the free name `name` by the index `depth` (adjusted under binders).
    pub(crate) fn close(&self, name: &str, depth: u32) -> Term {
        if !self.0.has_free {
            return self.clone();
        }
        match self.kind() {
            TermKind::Free(n) if &**n == name => Term::bound(depth),
            TermKind::Free(_) | TermKind::Bound(_) => self.clone(),
            TermKind::Lam(h, b) => Term::abs(h.clone(), b.close(name, depth + 1)),
            TermKind::App(f, a) => Term::app(f.close(name, depth), a.close(name, depth)),
        }
    }

    /// Adds `by` to every index `>= cutoff`.
    pub(crate) fn shift(&self, by: u32, cutoff: u32) -> Term {
        if by == 0 || self.0.loose <= cutoff {
            return self.clone();
        }
        match self.kind() {
            TermKind::Bound(i) => Term::bound(i + by),
            TermKind::Free(_) => self.clone(),
            TermKind::Lam(h, b) => Term::abs(h.clone(), b.shift(by, cutoff + 1)),
            TermKind::App(f, a) => Term::app(f.shift(by, cutoff), a.shift(by, cutoff)),
        }
    }

    /// β-contraction body: substitutes `arg` for index 0 of `self` (the body of
    /// an abstraction) and lowers the remaining loose indices by one. `arg`
    /// lives in the context outside the binder.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.instantiate_at(arg, 0)
    }

    fn instantiate_at(&self, arg: &Term, depth: u32) -> Term {
        if self.0.loose <= depth {
            return self.clone();
        }
        match self.kind() {
            TermKind::Bound(i) => {
                if *i == depth {
                    arg.shift(depth, 0)
                } else {
                    Term::bound(i - 1)
                }
            }
            TermKind::Free(_) => self.clone(),
            TermKind::Lam(h, b) => Term::abs(h.clone(), b.instantiate_at(arg, depth + 1)),
            TermKind::App(f, a) => {
                Term::app(f.instantiate_at(arg, depth), a.instantiate_at(arg, depth))
            }
        }
    }

    /// Capture-avoiding substitution of `u` for the free variable `x`.
    ///
    /// Binders never capture because bound variables are indices; a binder
    /// whose hint collides with a free name of `u` is renamed when printed.
    pub fn substitute(&self, x: &str, u: &Term) -> Term {
        self.substitute_at(x, u, 0)
    }

    fn substitute_at(&self, x: &str, u: &Term, depth: u32) -> Term {
        if !self.0.has_free {
            return self.clone();
        }
        match self.kind() {
            TermKind::Free(n) if &**n == x => u.shift(depth, 0),
            TermKind::Free(_) | TermKind::Bound(_) => self.clone(),
            TermKind::Lam(h, b) => Term::abs(h.clone(), b.substitute_at(x, u, depth + 1)),
            TermKind::App(f, a) => {
                Term::app(f.substitute_at(x, u, depth), a.substitute_at(x, u, depth))
            }
        }
    }

    /// Simultaneous substitution of closed terms for free names.
    pub fn substitute_all(&self, map: &[(Name, Term)]) -> Term {
        map.iter()
            .fold(self.clone(), |acc, (x, u)| acc.substitute(x, u))
    }

    /// Equality that also compares binder hints.
    pub fn eq_with_hints(&self, other: &Term) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (self.kind(), other.kind()) {
            (TermKind::Bound(i), TermKind::Bound(j)) => i == j,
            (TermKind::Free(a), TermKind::Free(b)) => a == b,
            (TermKind::Lam(h1, b1), TermKind::Lam(h2, b2)) => h1 == h2 && b1.eq_with_hints(b2),
            (TermKind::App(f1, a1), TermKind::App(f2, a2)) => {
                f1.eq_with_hints(f2) && a1.eq_with_hints(a2)
            }
            _ => false,
        }
    }

    /// Splits `λx₁…λxₙ. (h a₁ … aₘ)` into its binder hints, head and arguments.
    pub fn decompose(&self) -> (Vec<Name>, Term, Vec<Term>) {
        let mut binders = Vec::new();
        let mut t = self.clone();
        while let TermKind::Lam(h, b) = t.kind() {
            binders.push(h.clone());
            let b = b.clone();
            t = b;
        }
        let mut args = Vec::new();
        while let TermKind::App(f, a) = t.kind() {
            args.push(a.clone());
            let f = f.clone();
            t = f;
        }
        args.reverse();
        (binders, t, args)
    }

    /// Rebuilds `λx₁…λxₙ. (h a₁ … aₘ)` from its parts.
    pub fn compose(binders: &[Name], head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        let body = Term::apps(head, args);
        binders
            .iter()
            .rev()
            .fold(body, |acc, h| Term::abs(h.clone(), acc))
    }

    /// True when the term has the shape `λx₁…λxₙ(x v₁…vₘ)`.
    pub fn is_head_normal(&self) -> bool {
        let mut t = self;
        while let TermKind::Lam(_, b) = t.kind() {
            t = b;
        }
        while let TermKind::App(f, _) = t.kind() {
            t = f;
        }
        !matches!(t.kind(), TermKind::Lam(..))
    }
}

/// `(uⁿ v)`: `(u⁰ v) = v` and `(uⁿ⁺¹ v) = (u (uⁿ v))`.
pub fn iter_apply(u: &Term, n: usize, v: &Term) -> Term {
    (0..n).fold(v.clone(), |acc, _| Term::app(u.clone(), acc))
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.size != other.0.size {
            return false;
        }
        match (self.kind(), other.kind()) {
            (TermKind::Bound(i), TermKind::Bound(j)) => i == j,
            (TermKind::Free(a), TermKind::Free(b)) => a == b,
            (TermKind::Lam(_, b1), TermKind::Lam(_, b2)) => b1 == b2,
            (TermKind::App(f1, a1), TermKind::App(f2, a2)) => f1 == f2 && a1 == a2,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({})", crate::syntax::print_term(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}

/// Alias for `==`: identity up to renaming of bound variables.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    t == u
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(x: &str) -> Term {
        Term::lam(x, Term::var(x))
    }

    #[test]
    fn alpha_equivalent_terms_compare_equal() {
        assert_eq!(id("x"), id("y"));
        let t = Term::lams(&["x", "y"], Term::var("x"));
        let f = Term::lams(&["x", "y"], Term::var("y"));
        assert_ne!(t, f);
        assert!(!t.eq_with_hints(&Term::lams(&["a", "b"], Term::var("a"))));
    }

    #[test]
    fn substitution_of_a_variable() {
        let t = Term::lams(&["x", "y"], Term::var("x"));
        assert_eq!(Term::var("x").substitute("x", &t), t);
    }

    #[test]
    fn substitution_does_not_capture() {
        // (λy.x)[y/x] must not become λy.y
        let t = Term::lam("y", Term::var("x"));
        let r = t.substitute("x", &Term::var("y"));
        assert!(r.occurs_free("y"));
        assert_ne!(r, id("y"));
        assert_eq!(r, Term::lam("z", Term::var("y")));
    }

    #[test]
    fn instantiate_lowers_outer_indices() {
        // body of λx. λy. (x y z_outer) with an extra loose index
        let body = Term::abs(
            "y".into(),
            Term::apps(Term::bound(1), [Term::bound(0), Term::bound(2)]),
        );
        let r = body.instantiate(&Term::var("a"));
        assert_eq!(
            r,
            Term::abs(
                "y".into(),
                Term::apps(Term::var("a"), [Term::bound(0), Term::bound(1)])
            )
        );
    }

    #[test]
    fn instantiate_shifts_open_arguments() {
        // (λx. λy. x) applied to an argument that mentions an outer binder.
        let body = Term::abs("y".into(), Term::bound(1));
        let r = body.instantiate(&Term::bound(0));
        assert_eq!(r, Term::abs("y".into(), Term::bound(1)));
    }

    #[test]
    fn metadata_is_tracked() {
        let omega_half = Term::lam("x", Term::app(Term::var("x"), Term::var("x")));
        let omega = Term::app(omega_half.clone(), omega_half.clone());
        assert_eq!(omega.redex_count(), 1);
        assert!(omega.is_closed());
        assert!(omega_half.is_normal());
        assert_eq!(omega.size(), 9);
        assert!(!Term::var("z").is_closed());
    }

    #[test]
    fn iterated_application() {
        let f = Term::var("f");
        let x = Term::var("x");
        assert_eq!(iter_apply(&f, 0, &x), x);
        assert_eq!(
            iter_apply(&f, 2, &x),
            Term::app(f.clone(), Term::app(f.clone(), x.clone()))
        );
    }

    #[test]
    fn decompose_and_compose_round_trip() {
        let t = Term::lams(
            &["x", "y"],
            Term::apps(Term::var("x"), [Term::var("y"), Term::var("z")]),
        );
        let (b, h, a) = t.decompose();
        assert_eq!(b.len(), 2);
        assert_eq!(a.len(), 2);
        assert!(t.is_head_normal());
        assert_eq!(Term::compose(&b, h, a), t);
    }
}
