//! Guarded strings, their coalesced product, and a bounded denotational
//! semantics of expressions used as a ground-truth oracle throughout the
//! test suite.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{Alphabet, AtomId, Expr, ExtSym, Sym};

/// A guarded string: an alternating sequence of atoms and extended letters,
/// beginning and ending with an atom. Stored as the (atom, symbol) pairs
/// followed by the final atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuardedString {
    pub pairs: Vec<(AtomId, Sym)>,
    pub last: AtomId,
}

impl GuardedString {
    pub fn new(pairs: Vec<(AtomId, Sym)>, last: AtomId) -> Self {
        GuardedString { pairs, last }
    }

    /// The length-zero guarded string consisting of a single atom.
    pub fn atom(a: AtomId) -> Self {
        GuardedString { pairs: Vec::new(), last: a }
    }

    /// Number of extended letters (the length of the guarded string).
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn first_atom(&self) -> AtomId {
        self.pairs.first().map(|p| p.0).unwrap_or(self.last)
    }

    /// Atom at vertex `i`, for `0 <= i <= len`.
    pub fn atom_at(&self, i: usize) -> AtomId {
        if i < self.pairs.len() {
            self.pairs[i].0
        } else {
            self.last
        }
    }

    /// Symbol between vertices `i` and `i + 1`.
    pub fn sym_at(&self, i: usize) -> Sym {
        self.pairs[i].1
    }

    pub fn contains_top(&self) -> bool {
        self.pairs.iter().any(|(_, s)| *s == Sym::Top)
    }

    pub fn count_top(&self) -> usize {
        self.pairs.iter().filter(|(_, s)| *s == Sym::Top).count()
    }

    /// Coalesced product: defined when the last atom of `self` equals the
    /// first atom of `other`, merging the two boundary atoms.
    pub fn coalesce(&self, other: &GuardedString) -> Option<GuardedString> {
        if self.last != other.first_atom() {
            return None;
        }
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        Some(GuardedString { pairs, last: other.last })
    }

    /// The sub-guarded-string from vertex `i` to vertex `j` (inclusive ends).
    pub fn segment(&self, i: usize, j: usize) -> GuardedString {
        debug_assert!(i <= j && j <= self.len());
        GuardedString {
            pairs: self.pairs[i..j].to_vec(),
            last: self.atom_at(j),
        }
    }

    /// `(u top)^n u`: `n + 1` copies of `self` chained with `top`.
    pub fn top_chain(&self, n: usize) -> GuardedString {
        let mut pairs = Vec::with_capacity((self.len() + 1) * (n + 1) - 1);
        for k in 0..=n {
            pairs.extend_from_slice(&self.pairs);
            if k < n {
                pairs.push((self.last, Sym::Top));
            }
        }
        GuardedString { pairs, last: self.last }
    }

    /// The canonical word over atoms and extended letters spelling this
    /// guarded string (every atom run has length one).
    pub fn word(&self) -> Vec<ExtSym> {
        let mut word = Vec::with_capacity(2 * self.len() + 1);
        for (a, s) in &self.pairs {
            word.push(ExtSym::Atom(*a));
            word.push(ExtSym::Sym(*s));
        }
        word.push(ExtSym::Atom(self.last));
        word
    }

    /// The expression whose language is exactly this guarded string.
    pub fn to_expr(&self) -> Expr {
        let mut e = None;
        for (a, s) in &self.pairs {
            let sym = match s {
                Sym::Letter(l) => Expr::Letter(*l),
                Sym::Top => Expr::Top,
            };
            e = Some(match e {
                None => Expr::dot(Expr::Atom(*a), sym),
                Some(acc) => Expr::dot(Expr::dot(acc, Expr::Atom(*a)), sym),
            });
        }
        match e {
            None => Expr::Atom(self.last),
            Some(acc) => Expr::dot(acc, Expr::Atom(self.last)),
        }
    }

    pub fn in_alphabet(&self, alphabet: &Alphabet) -> bool {
        self.last.0 < alphabet.atom_count()
            && self.pairs.iter().all(|(a, s)| {
                a.0 < alphabet.atom_count()
                    && match s {
                        Sym::Letter(l) => l.0 < alphabet.letter_count(),
                        Sym::Top => true,
                    }
            })
    }

    /// Textual form: atoms and symbols interleaved, with `T` for top, e.g.
    /// `alpha a beta T gamma`.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayGs { gs: self, alphabet }
    }

    /// Parse the textual form. In single-atom alphabets the atoms may be
    /// omitted entirely, so a plain word like `a a` also parses.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<GuardedString, GsParseError> {
        let mut items = Vec::new();
        for raw in text.split_whitespace() {
            let item = if raw == "T" || raw == "top" {
                ExtSym::Sym(Sym::Top)
            } else if let Some(a) = alphabet.atom(raw) {
                ExtSym::Atom(a)
            } else if let Some(l) = alphabet.letter(raw) {
                ExtSym::Sym(Sym::Letter(l))
            } else {
                return Err(GsParseError::UnknownToken(raw.to_string()));
            };
            items.push(item);
        }
        // Strict alternating reading first.
        if items.len() % 2 == 1 {
            let ok = items.iter().enumerate().all(|(i, item)| match item {
                ExtSym::Atom(_) => i % 2 == 0,
                ExtSym::Sym(_) => i % 2 == 1,
            });
            if ok {
                let mut pairs = Vec::new();
                let mut k = 0;
                while k + 1 < items.len() {
                    let (ExtSym::Atom(a), ExtSym::Sym(s)) = (items[k], items[k + 1]) else {
                        unreachable!()
                    };
                    pairs.push((a, s));
                    k += 2;
                }
                let ExtSym::Atom(last) = items[items.len() - 1] else {
                    unreachable!()
                };
                return Ok(GuardedString { pairs, last });
            }
        }
        // With a single atom, accept a plain word and insert the atom.
        if alphabet.atom_count() == 1 {
            let a = AtomId(0);
            let pairs = items
                .into_iter()
                .filter_map(|item| match item {
                    ExtSym::Sym(s) => Some((a, s)),
                    ExtSym::Atom(_) => None,
                })
                .collect();
            return Ok(GuardedString { pairs, last: a });
        }
        Err(GsParseError::NotAlternating)
    }
}

// Ordered by length first, then pointwise; this is the order used for
// deterministic language listings.
impl Ord for GuardedString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.pairs.cmp(&other.pairs))
            .then_with(|| self.last.cmp(&other.last))
    }
}

impl PartialOrd for GuardedString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct DisplayGs<'a> {
    gs: &'a GuardedString,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayGs<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, s) in &self.gs.pairs {
            write!(f, "{} ", self.alphabet.atom_name(*a))?;
            match s {
                Sym::Letter(l) => write!(f, "{} ", self.alphabet.letter_name(*l))?,
                Sym::Top => write!(f, "T ")?,
            }
        }
        write!(f, "{}", self.alphabet.atom_name(self.gs.last))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GsParseError {
    #[error("unknown token `{0}` in guarded string")]
    UnknownToken(String),
    #[error("tokens do not alternate atoms and symbols")]
    NotAlternating,
}

/// A finite guarded-string language, all of whose members have length at
/// most `bound`. Elements are kept in canonical sorted order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsLang {
    elems: BTreeSet<GuardedString>,
    bound: usize,
}

impl GsLang {
    pub fn empty(bound: usize) -> Self {
        GsLang { elems: BTreeSet::new(), bound }
    }

    pub fn from_iter<I: IntoIterator<Item = GuardedString>>(bound: usize, iter: I) -> Self {
        GsLang {
            elems: iter.into_iter().filter(|u| u.len() <= bound).collect(),
            bound,
        }
    }

    /// All guarded strings of a single atom (the unit language).
    pub fn unit(alphabet: &Alphabet, bound: usize) -> Self {
        GsLang::from_iter(bound, alphabet.atom_ids().map(GuardedString::atom))
    }

    /// `{alpha s beta}` over all atom pairs, for one extended letter `s`.
    pub fn letter(sym: Sym, alphabet: &Alphabet, bound: usize) -> Self {
        let mut elems = BTreeSet::new();
        if bound >= 1 {
            for a in alphabet.atom_ids() {
                for b in alphabet.atom_ids() {
                    elems.insert(GuardedString::new(vec![(a, sym)], b));
                }
            }
        }
        GsLang { elems, bound }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, u: &GuardedString) -> bool {
        self.elems.contains(u)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GuardedString> {
        self.elems.iter()
    }

    pub fn insert(&mut self, u: GuardedString) -> bool {
        if u.len() <= self.bound {
            self.elems.insert(u)
        } else {
            false
        }
    }

    pub fn union(&self, other: &GsLang) -> GsLang {
        let bound = self.bound.max(other.bound);
        GsLang {
            elems: self.elems.union(&other.elems).cloned().collect(),
            bound,
        }
    }

    /// Coalesced concatenation, truncated to `bound`.
    pub fn concat(&self, other: &GsLang, bound: usize) -> GsLang {
        let mut elems = BTreeSet::new();
        for u in &self.elems {
            for v in &other.elems {
                if u.len() + v.len() > bound {
                    continue;
                }
                if let Some(w) = u.coalesce(v) {
                    elems.insert(w);
                }
            }
        }
        GsLang { elems, bound }
    }

    /// Restriction to strings of length at most `bound`.
    pub fn restrict(&self, bound: usize) -> GsLang {
        GsLang {
            elems: self.elems.iter().filter(|u| u.len() <= bound).cloned().collect(),
            bound,
        }
    }
}

/// The guarded strings of length at most `bound` in the language of `e`,
/// computed compositionally; the star iterates concatenation to a fixpoint,
/// which terminates because coalescing never shortens strings.
pub fn denote_bounded(e: &Expr, bound: usize, alphabet: &Alphabet) -> GsLang {
    match e {
        Expr::Zero => GsLang::empty(bound),
        Expr::One => GsLang::unit(alphabet, bound),
        Expr::Top => GsLang::letter(Sym::Top, alphabet, bound),
        Expr::Letter(l) => GsLang::letter(Sym::Letter(*l), alphabet, bound),
        Expr::Atom(a) => GsLang::from_iter(bound, [GuardedString::atom(*a)]),
        Expr::Plus(l, r) => {
            denote_bounded(l, bound, alphabet).union(&denote_bounded(r, bound, alphabet))
        }
        Expr::Dot(l, r) => {
            denote_bounded(l, bound, alphabet).concat(&denote_bounded(r, bound, alphabet), bound)
        }
        Expr::Star(inner) => {
            let base = denote_bounded(inner, bound, alphabet);
            let mut result = GsLang::unit(alphabet, bound);
            loop {
                let next = result.union(&result.concat(&base, bound));
                if next == result {
                    return result;
                }
                result = next;
            }
        }
    }
}

/// Does `word` spell the guarded string `u`? True when `word` equals `u`
/// with every atom position expanded to some run of that atom, possibly of
/// length zero.
pub fn gs_matches(word: &[ExtSym], u: &GuardedString) -> bool {
    let mut k = 0;
    for i in 0..=u.len() {
        let atom = u.atom_at(i);
        while k < word.len() && word[k] == ExtSym::Atom(atom) {
            k += 1;
        }
        if i < u.len() {
            if k >= word.len() || word[k] != ExtSym::Sym(u.sym_at(i)) {
                return false;
            }
            k += 1;
        }
    }
    k == word.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::LetterId;

    fn abg() -> Alphabet {
        Alphabet::new(["a", "b"], ["alpha", "beta", "gamma"]).unwrap()
    }

    fn gs(text: &str, alphabet: &Alphabet) -> GuardedString {
        GuardedString::parse(text, alphabet).unwrap()
    }

    #[test]
    fn coalesce_examples() {
        let al = abg();
        let u = gs("alpha a beta", &al);
        let v = gs("beta b gamma", &al);
        assert_eq!(u.coalesce(&v), Some(gs("alpha a beta b gamma", &al)));
        let w = gs("gamma", &al);
        assert_eq!(u.coalesce(&w), None);
        let a = gs("alpha", &al);
        assert_eq!(a.coalesce(&a), Some(a.clone()));
    }

    #[test]
    fn coalesce_associative_where_defined() {
        let al = abg();
        let u = gs("alpha a beta", &al);
        let v = gs("beta b gamma", &al);
        let w = gs("gamma a alpha", &al);
        let left = u.coalesce(&v).and_then(|uv| uv.coalesce(&w));
        let right = v.coalesce(&w).and_then(|vw| u.coalesce(&vw));
        assert_eq!(left, right);
        assert!(left.is_some());
    }

    #[test]
    fn denote_paper_example() {
        // (alpha a beta + beta b gamma)* truncated at length 2.
        let al = abg();
        let e = Expr::parse("@alpha a @beta + @beta b @gamma", &al).unwrap();
        let lang = denote_bounded(&Expr::star(e), 2, &al);
        let expected: BTreeSet<_> = ["alpha", "beta", "gamma", "alpha a beta", "beta b gamma", "alpha a beta b gamma"]
            .iter()
            .map(|t| gs(t, &al))
            .collect();
        assert_eq!(lang.iter().cloned().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn denote_top_is_one_letter() {
        let al = abg();
        let lang = denote_bounded(&Expr::Top, 1, &al);
        assert_eq!(lang.len(), 9);
        assert!(lang.contains(&gs("alpha T beta", &al)));
        assert!(!lang.contains(&gs("alpha", &al)));
    }

    #[test]
    fn denote_zero_empty() {
        let al = abg();
        assert!(denote_bounded(&Expr::Zero, 5, &al).is_empty());
    }

    #[test]
    fn truncation_coherence() {
        let al = abg();
        let e = Expr::parse("(a+b;top)*", &al).unwrap();
        let big = denote_bounded(&e, 4, &al);
        let small = denote_bounded(&e, 2, &al);
        assert_eq!(big.restrict(2), small);
    }

    #[test]
    fn gs_matches_runs() {
        let al = abg();
        let u = gs("alpha a beta", &al);
        let a = ExtSym::Sym(Sym::Letter(LetterId(0)));
        let alpha = ExtSym::Atom(AtomId(0));
        let beta = ExtSym::Atom(AtomId(1));
        assert!(gs_matches(&[a], &u));
        assert!(gs_matches(&[alpha, alpha, a, beta], &u));
        assert!(!gs_matches(&[beta, a], &u));
        assert!(gs_matches(&u.word(), &u));
    }

    #[test]
    fn top_chain_shape() {
        let al = abg();
        let u = gs("alpha a beta", &al);
        assert_eq!(u.top_chain(0), u);
        let chained = u.top_chain(2);
        assert_eq!(chained.len(), 3 * u.len() + 2);
        assert_eq!(chained, gs("alpha a beta T alpha a beta T alpha a beta", &al));
    }

    #[test]
    fn single_atom_word_form() {
        let al = Alphabet::single_atom(["a", "b"]).unwrap();
        let u = gs("a b a", &al);
        assert_eq!(u.len(), 3);
        assert_eq!(u.display(&al).to_string(), "alpha a alpha b alpha a alpha");
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let al = abg();
        let u = gs("alpha a beta T gamma", &al);
        assert_eq!(u.display(&al).to_string(), "alpha a beta T gamma");
        assert_eq!(gs(&u.display(&al).to_string(), &al), u);
    }

    #[test]
    fn to_expr_denotes_singleton() {
        let al = abg();
        let u = gs("alpha a beta T gamma", &al);
        let lang = denote_bounded(&u.to_expr(), u.len(), &al);
        assert_eq!(lang.len(), 1);
        assert!(lang.contains(&u));
    }
}
