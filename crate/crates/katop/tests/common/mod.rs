//! Shared fixtures for the integration suites: the expression corpus, small
//! exhaustive enumerations, an independent word-membership oracle, and a
//! seeded expression generator.

#![allow(dead_code)]

use katop::automata::BoolMatrix;
use katop::gstring::GuardedString;
use katop::syntax::{Alphabet, AtomId, Expr, ExtSym};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The right-hand side of the starred inequation exercise, single atom.
pub const STAR_RHS: &str = "(a;a;a)*;top;(a;a)* + (a;a)*;a;top;(a;a;a)*";

/// A 25-expression corpus spread over four alphabets; the workhorse of the
/// cross-checking suites.
pub fn corpus() -> Vec<(Alphabet, Expr, String)> {
    let a1 = Alphabet::single_atom(["a"]).unwrap();
    let a2 = Alphabet::new(["a"], ["alpha", "beta"]).unwrap();
    let b2 = Alphabet::single_atom(["a", "b"]).unwrap();
    let ab2 = Alphabet::new(["a", "b"], ["alpha", "beta"]).unwrap();
    let groups: Vec<(Alphabet, Vec<&str>)> = vec![
        (
            a1,
            vec![
                "0",
                "1",
                "top",
                "a",
                "a*",
                "(a;a)*",
                "(a;a;a)*",
                "a;a*",
                "top;a;top",
                "a;top;a",
                "(a;top)*",
                "a+1",
                STAR_RHS,
                "a;top;a;top;a",
            ],
        ),
        (
            a2,
            vec![
                "@alpha",
                "@alpha;a;@beta",
                "(@alpha;a;@beta + @beta;a;@alpha)*",
                "top;@beta;top",
                "a;(@alpha;a)*",
            ],
        ),
        (b2, vec!["(a+b)*", "(a*;b)*;a*", "a;top;b", "b;(a;b)*"]),
        (ab2, vec!["(@alpha;a;@beta + @beta;b;@alpha)*", "a;top;a + b"]),
    ];
    let mut corpus = Vec::new();
    for (alphabet, texts) in groups {
        for text in texts {
            let e = Expr::parse(text, &alphabet).expect(text);
            corpus.push((alphabet.clone(), e, text.to_string()));
        }
    }
    assert_eq!(corpus.len(), 25);
    corpus
}

/// Every guarded string of length at most `max_len` over the alphabet, in
/// length-lexicographic order.
pub fn all_strings(alphabet: &Alphabet, max_len: usize) -> Vec<GuardedString> {
    let mut all: Vec<GuardedString> = alphabet.atom_ids().map(GuardedString::atom).collect();
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

/// Every word of length at most `max_len` over the full word alphabet
/// (atoms and extended letters).
pub fn all_words(alphabet: &Alphabet, max_len: usize) -> Vec<Vec<ExtSym>> {
    let symbols: Vec<ExtSym> = alphabet
        .atom_ids()
        .map(ExtSym::Atom)
        .chain(alphabet.syms().map(ExtSym::Sym))
        .collect();
    let mut all: Vec<Vec<ExtSym>> = vec![Vec::new()];
    let mut frontier = all.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &s in &symbols {
                let mut w = w.clone();
                w.push(s);
                next.push(w);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// Direct recursive word membership in the plain regular language of an
/// expression over the word alphabet, memoised on (subterm, word range).
/// Independent of the automata path.
pub struct WordOracle<'a> {
    word: &'a [ExtSym],
    memo: std::collections::HashMap<(usize, usize, usize), bool>,
}

impl<'a> WordOracle<'a> {
    pub fn contains(e: &Expr, word: &'a [ExtSym]) -> bool {
        let mut oracle = WordOracle { word, memo: Default::default() };
        oracle.run(e, 0, word.len())
    }

    fn run(&mut self, e: &Expr, start: usize, end: usize) -> bool {
        let key = (e as *const Expr as usize, start, end);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let result = match e {
            Expr::Zero => false,
            Expr::One => start == end,
            Expr::Top | Expr::Atom(_) | Expr::Letter(_) => {
                start + 1 == end && leaf_matches(e, self.word[start])
            }
            Expr::Plus(l, r) => self.run(l, start, end) || self.run(r, start, end),
            Expr::Dot(l, r) => {
                (start..=end).any(|k| self.run(l, start, k) && self.run(r, k, end))
            }
            Expr::Star(inner) => {
                start == end
                    || (start + 1..=end)
                        .any(|k| self.run(inner, start, k) && self.run(e, k, end))
            }
        };
        self.memo.insert(key, result);
        result
    }
}

fn leaf_matches(e: &Expr, x: ExtSym) -> bool {
    match (e, x) {
        (Expr::Top, ExtSym::Sym(katop::syntax::Sym::Top)) => true,
        (Expr::Atom(a), ExtSym::Atom(b)) => *a == b,
        (Expr::Letter(l), ExtSym::Sym(katop::syntax::Sym::Letter(m))) => *l == m,
        _ => false,
    }
}

/// Seeded random expression with roughly `budget` nodes.
pub fn random_expr(rng: &mut ChaCha8Rng, alphabet: &Alphabet, budget: usize, allow_top: bool) -> Expr {
    if budget <= 1 {
        let roll = rng.random_range(0..100);
        return if roll < 5 {
            Expr::Zero
        } else if roll < 20 {
            Expr::One
        } else if roll < 40 && allow_top {
            Expr::Top
        } else if roll < 75 && alphabet.letter_count() > 0 {
            Expr::Letter(katop::syntax::LetterId(
                rng.random_range(0..alphabet.letter_count()),
            ))
        } else {
            Expr::Atom(AtomId(rng.random_range(0..alphabet.atom_count())))
        };
    }
    match rng.random_range(0..10) {
        0..=3 => {
            let left = rng.random_range(1..budget);
            Expr::plus(
                random_expr(rng, alphabet, left, allow_top),
                random_expr(rng, alphabet, budget - left, allow_top),
            )
        }
        4..=7 => {
            let left = rng.random_range(1..budget);
            Expr::dot(
                random_expr(rng, alphabet, left, allow_top),
                random_expr(rng, alphabet, budget - left, allow_top),
            )
        }
        _ => Expr::star(random_expr(rng, alphabet, budget - 1, allow_top)),
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entry-wise subset test for boolean matrices.
pub fn submatrix(a: &BoolMatrix, b: &BoolMatrix) -> bool {
    a.or(b) == *b
}
