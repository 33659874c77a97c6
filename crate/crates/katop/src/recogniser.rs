//! Transition-monoid recognisers of guarded-string languages.
//!
//! A recogniser folds the pairs of a guarded string through the homomorphism
//! `h(alpha, a) = delta(alpha)* . delta(a)` into the monoid of boolean
//! matrices of the backing automaton, then applies an acceptance predicate on
//! (matrix, final atom). Three predicates are provided:
//!
//! * `Base` accepts exactly the guarded-string language of the expression;
//! * `EClosed` accepts `{ w | exists n, (w top)^n w in [e] }`, the closure
//!   used by the relational theory;
//! * `Sqrt` accepts `{ w | w w in [e] }` (single-atom alphabets only).

use thiserror::Error;

use crate::automata::{build_nfa, BoolMatrix, Nfa};
use crate::gstring::GuardedString;
use crate::syntax::{Alphabet, AtomId, Expr, Sym};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Base,
    EClosed,
    Sqrt,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecogniserError {
    #[error("the square-root transform needs a single-atom alphabet, got {0} atoms")]
    MultipleAtoms(usize),
}

/// A guarded-string recogniser backed by the transition monoid of an NFA.
#[derive(Debug, Clone)]
pub struct Recogniser {
    nfa: Nfa,
    mode: Mode,
    n_letters: usize,
    /// `delta(alpha)*` per atom.
    atom_star: Vec<BoolMatrix>,
    /// `delta(alpha)* . delta(top)` per atom; appears in the E-closed
    /// acceptance formula.
    top_after: Vec<BoolMatrix>,
    /// `h(alpha, a)` per atom and extended letter (letters first, top last).
    h: Vec<Vec<BoolMatrix>>,
}

impl Recogniser {
    fn build(e: &Expr, alphabet: &Alphabet, mode: Mode) -> Recogniser {
        let nfa = build_nfa(e, alphabet);
        let atom_star: Vec<BoolMatrix> = alphabet
            .atom_ids()
            .map(|a| nfa.delta_atom(a).star())
            .collect();
        let top_after: Vec<BoolMatrix> = alphabet
            .atom_ids()
            .map(|a| atom_star[a.0].mul(nfa.delta_sym(Sym::Top)))
            .collect();
        let h = alphabet
            .atom_ids()
            .map(|a| {
                alphabet
                    .syms()
                    .map(|s| atom_star[a.0].mul(nfa.delta_sym(s)))
                    .collect()
            })
            .collect();
        Recogniser {
            nfa,
            mode,
            n_letters: alphabet.letter_count(),
            atom_star,
            top_after,
            h,
        }
    }

    /// Recogniser for the guarded-string language of `e`.
    pub fn make_base(e: &Expr, alphabet: &Alphabet) -> Recogniser {
        Self::build(e, alphabet, Mode::Base)
    }

    /// Recogniser for `{ w | exists n, (w top)^n w in [e] }`.
    pub fn make_eclosed(e: &Expr, alphabet: &Alphabet) -> Recogniser {
        Self::build(e, alphabet, Mode::EClosed)
    }

    /// Recogniser for `{ w | w w in [e] }`. Restricted to single-atom
    /// alphabets, where guarded strings are plain words and squaring needs no
    /// boundary-atom bookkeeping.
    pub fn make_sqrt(e: &Expr, alphabet: &Alphabet) -> Result<Recogniser, RecogniserError> {
        if alphabet.atom_count() != 1 {
            return Err(RecogniserError::MultipleAtoms(alphabet.atom_count()));
        }
        Ok(Self::build(e, alphabet, Mode::Sqrt))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.nfa.n_states()
    }

    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    /// The monoid unit.
    pub fn unit(&self) -> BoolMatrix {
        BoolMatrix::identity(self.dim())
    }

    fn sym_index(&self, s: Sym) -> usize {
        match s {
            Sym::Letter(l) => l.0,
            Sym::Top => self.n_letters,
        }
    }

    /// The image `h(alpha, a)` of one (atom, symbol) pair.
    pub fn h(&self, alpha: AtomId, a: Sym) -> &BoolMatrix {
        &self.h[alpha.0][self.sym_index(a)]
    }

    /// Extend a monoid element by one (atom, symbol) pair.
    pub fn step(&self, x: &BoolMatrix, alpha: AtomId, a: Sym) -> BoolMatrix {
        x.mul(self.h(alpha, a))
    }

    /// Fold the pairs of a guarded string through `h`.
    pub fn image(&self, u: &GuardedString) -> BoolMatrix {
        let mut x = self.unit();
        for (a, s) in &u.pairs {
            x = self.step(&x, *a, *s);
        }
        x
    }

    /// The acceptance predicate on (monoid element, final atom).
    pub fn accept(&self, x: &BoolMatrix, alpha: AtomId) -> bool {
        match self.mode {
            Mode::Base => self.nfa.hits(&x.mul(&self.atom_star[alpha.0])),
            Mode::EClosed => {
                // (x . T_alpha)* . x . delta(alpha)*, then test against
                // initial/final: equivalent to trying every number of
                // (w top) repetitions at once.
                let loops = x.mul(&self.top_after[alpha.0]).star();
                self.nfa.hits(&loops.mul(x).mul(&self.atom_star[alpha.0]))
            }
            Mode::Sqrt => self.nfa.hits(&x.mul(x).mul(&self.atom_star[alpha.0])),
        }
    }

    /// Membership of a guarded string in the recognised language.
    pub fn accepts(&self, u: &GuardedString) -> bool {
        self.accept(&self.image(u), u.last)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gstring::{denote_bounded, GuardedString};
    use crate::syntax::reduce_top;

    fn gs(text: &str, alphabet: &Alphabet) -> GuardedString {
        GuardedString::parse(text, alphabet).unwrap()
    }

    #[test]
    fn base_accepts_paper_example() {
        let al = Alphabet::new(["a", "b"], ["alpha", "beta", "gamma"]).unwrap();
        let e = Expr::parse("(@alpha a @beta + @beta b @gamma)*", &al).unwrap();
        let r = Recogniser::make_base(&e, &al);
        assert!(r.accepts(&gs("alpha a beta b gamma", &al)));
        assert!(!r.accepts(&gs("alpha a gamma", &al)));
        assert!(r.accepts(&gs("beta", &al)));
    }

    #[test]
    fn base_top_is_a_letter() {
        let al = Alphabet::new(["a"], ["alpha", "beta"]).unwrap();
        let r = Recogniser::make_base(&Expr::Top, &al);
        assert!(r.accepts(&gs("alpha T beta", &al)));
        assert!(!r.accepts(&gs("alpha a beta", &al)));
        assert!(!r.accepts(&gs("alpha", &al)));
    }

    #[test]
    fn base_one_and_zero() {
        let al = Alphabet::new(["a"], ["alpha", "beta"]).unwrap();
        let one = Recogniser::make_base(&Expr::One, &al);
        for name in ["alpha", "beta"] {
            assert!(one.accepts(&gs(name, &al)));
        }
        assert!(!one.accepts(&gs("alpha a beta", &al)));
        let zero = Recogniser::make_base(&Expr::Zero, &al);
        assert!(!zero.accepts(&gs("alpha", &al)));
        let full = Recogniser::make_base(&crate::syntax::full_top(&al), &al);
        for text in ["alpha", "beta a alpha", "alpha T beta", "alpha a alpha a alpha"] {
            assert!(full.accepts(&gs(text, &al)));
        }
    }

    #[test]
    fn eclosed_matches_star_example() {
        // (aaa)*;top;(aa)* + (aa)*;a;top;(aaa)*: the top-free strings of its
        // E-closure are exactly the multiples of three.
        let al = Alphabet::single_atom(["a"]).unwrap();
        let e = Expr::parse("(a a a)* top (a a)* + (a a)* a top (a a a)*", &al).unwrap();
        let r = Recogniser::make_eclosed(&e, &al);
        for i in 0..=12usize {
            let u = gs(&"a ".repeat(i), &al);
            assert_eq!(r.accepts(&u), i % 3 == 0, "a^{i}");
        }
        // Strings already in [e] stay accepted (n = 0).
        assert!(r.accepts(&gs("a a a T a a", &al)));
    }

    #[test]
    fn eclosed_of_plain_letter_adds_nothing() {
        let al = Alphabet::single_atom(["a"]).unwrap();
        let e = Expr::parse("a", &al).unwrap();
        let r = Recogniser::make_eclosed(&e, &al);
        assert!(r.accepts(&gs("a", &al)));
        assert!(!r.accepts(&gs("T", &al)));
        assert!(!r.accepts(&gs("", &al)));
    }

    #[test]
    fn sqrt_needs_single_atom() {
        let al = Alphabet::new(["a"], ["alpha", "beta"]).unwrap();
        assert_eq!(
            Recogniser::make_sqrt(&Expr::One, &al).unwrap_err(),
            RecogniserError::MultipleAtoms(2)
        );
    }

    #[test]
    fn sqrt_examples() {
        let al = Alphabet::single_atom(["a"]).unwrap();
        // w^2 is always even, so sqrt((aa)*) is everything.
        let even = Expr::parse("(a a)*", &al).unwrap();
        let r = Recogniser::make_sqrt(&even, &al).unwrap();
        for i in 0..=6usize {
            assert!(r.accepts(&gs(&"a ".repeat(i), &al)), "a^{i}");
        }
        // sqrt(a;a*) = nonempty words.
        let plus = Expr::parse("a;a*", &al).unwrap();
        let r = Recogniser::make_sqrt(&plus, &al).unwrap();
        assert!(!r.accepts(&gs("", &al)));
        assert!(r.accepts(&gs("a", &al)));
        // sqrt(1) = the empty word only.
        let r = Recogniser::make_sqrt(&Expr::One, &al).unwrap();
        assert!(r.accepts(&gs("", &al)));
        assert!(!r.accepts(&gs("a", &al)));
    }

    #[test]
    fn fold_is_homomorphic() {
        let al = Alphabet::new(["a", "b"], ["alpha", "beta"]).unwrap();
        let e = Expr::parse("(a;top+b)*;@alpha", &al).unwrap();
        let r = Recogniser::make_base(&e, &al);
        let u = gs("alpha a beta T alpha", &al);
        let v = gs("alpha b beta", &al);
        let uv = u.coalesce(&v).unwrap();
        assert_eq!(r.image(&uv), r.image(&u).mul(&r.image(&v)));
    }

    #[test]
    fn step_composes() {
        let al = Alphabet::new(["a"], ["alpha", "beta"]).unwrap();
        let e = Expr::parse("a;a", &al).unwrap();
        let r = Recogniser::make_base(&e, &al);
        let alpha = al.atom("alpha").unwrap();
        let beta = al.atom("beta").unwrap();
        let a = Sym::Letter(al.letter("a").unwrap());
        let one = r.step(&r.unit(), alpha, a);
        assert_eq!(one, *r.h(alpha, a));
        let two = r.step(&one, beta, a);
        assert_eq!(two, r.h(alpha, a).mul(r.h(beta, a)));
    }

    #[test]
    fn base_agrees_with_bounded_denotation() {
        let al = Alphabet::new(["a"], ["alpha", "beta"]).unwrap();
        for text in ["(a;a)*", "@alpha;a;@beta", "top;a", "(a+top)*", "1+a;a"] {
            let e = Expr::parse(text, &al).unwrap();
            let r = Recogniser::make_base(&e, &al);
            let lang = denote_bounded(&e, 3, &al);
            for u in all_strings(&al, 3) {
                assert_eq!(r.accepts(&u), lang.contains(&u), "{text} on {}", u.display(&al));
            }
        }
    }

    #[test]
    fn eclosed_of_reduced_equals_base_on_top_free_expression() {
        // E adds nothing to a closed top-free language.
        let al = Alphabet::new(["a"], ["alpha", "beta"]).unwrap();
        let e = Expr::parse("(a;a)*", &al).unwrap();
        let base = Recogniser::make_base(&reduce_top(&e, &al), &al);
        let eclosed = Recogniser::make_eclosed(&reduce_top(&e, &al), &al);
        for u in all_strings(&al, 3) {
            assert_eq!(base.accepts(&u), eclosed.accepts(&u), "{}", u.display(&al));
        }
    }

    fn all_strings(alphabet: &Alphabet, max_len: usize) -> Vec<GuardedString> {
        let mut all: Vec<GuardedString> =
            alphabet.atom_ids().map(GuardedString::atom).collect();
        let mut frontier = all.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for u in &frontier {
                for s in alphabet.syms() {
                    for b in alphabet.atom_ids() {
                        let mut pairs = u.pairs.clone();
                        pairs.push((u.last, s));
                        next.push(GuardedString::new(pairs, b));
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all
    }
}
