//! Seeded random terms for the property claims.

use rand::Rng;

use crate::reduce::head_step;
use crate::term::Term;

/// A random term with at most `size` nodes. Leaves are drawn from the
/// `depth` enclosing binders and the names in `free`.
pub fn random_term<R: Rng>(rng: &mut R, size: usize, depth: u32, free: &[&str]) -> Term {
    let leaves = depth as usize + free.len();
    if size <= 2 || (size <= 3 && leaves > 0 && rng.gen_bool(0.5)) {
        if leaves == 0 {
            return Term::lam("x", Term::bound(0));
        }
        let k = rng.gen_range(0..leaves);
        return if k < depth as usize {
            Term::bound(k as u32)
        } else {
            Term::var(free[k - depth as usize])
        };
    }
    let hints = ["x", "y", "z", "w"];
    match rng.gen_range(0..3) {
        0 => {
            let body = random_term(rng, size - 1, depth + 1, free);
            Term::abs(hints[depth as usize % hints.len()].into(), body)
        }
        1 => {
            // a redex: (λ. body) arg
            let rest = size - 2;
            let left = rng.gen_range(1..rest.max(2));
            let body = random_term(rng, left, depth + 1, free);
            let arg = random_term(rng, rest.saturating_sub(left).max(1), depth, free);
            Term::app(
                Term::abs(hints[depth as usize % hints.len()].into(), body),
                arg,
            )
        }
        _ => {
            let rest = size - 1;
            let left = rng.gen_range(1..rest.max(2));
            let f = random_term(rng, left, depth, free);
            let a = random_term(rng, rest.saturating_sub(left).max(1), depth, free);
            Term::app(f, a)
        }
    }
}

pub fn random_closed<R: Rng>(rng: &mut R, size: usize) -> Term {
    random_term(rng, size, 0, &[])
}

/// A random term over `free` that has a head redex, or `None` after
/// `tries` attempts.
pub fn random_with_head_redex<R: Rng>(
    rng: &mut R,
    size: usize,
    free: &[&str],
    tries: usize,
) -> Option<Term> {
    (0..tries)
        .map(|_| random_term(rng, size, 0, free))
        .find(|t| head_step(t).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_terms_respect_the_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let t = random_term(&mut rng, 10, 0, &["a"]);
            assert!(t.size() <= 12, "{t} has size {}", t.size());
            assert!(t.is_locally_closed());
            assert!(t.free_vars().iter().all(|v| &**v == "a"));
            assert!(random_closed(&mut rng, 8).is_closed());
        }
    }

    #[test]
    fn head_redexes_are_found() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = random_with_head_redex(&mut rng, 10, &["x"], 100).unwrap();
        assert!(head_step(&t).is_some());
    }
}
