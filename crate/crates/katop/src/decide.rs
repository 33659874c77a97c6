//! End-to-end decision procedures for the three theories, with witness
//! extraction and countermodel verification.
//!
//! Equivalence is decided by breadth-first search over pairs of transition
//! monoid elements of the two recognisers: a mismatch of the acceptance
//! predicates at some reachable pair yields a shortest counterexample
//! guarded string; exhausting the reachable pairs proves equivalence. For
//! the relational theory the witness is additionally turned into a finite
//! countermodel (the word model of the witness) and re-checked by direct
//! evaluation before the verdict is emitted.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::automata::BoolMatrix;
use crate::gstring::GuardedString;
use crate::recogniser::Recogniser;
use crate::relmodel::{word_model, RelModel};
use crate::syntax::{reduce_top, Alphabet, AtomId, Expr, Sym};

/// The equational theory to decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theory {
    /// Plain guarded-string languages; `top` is an ordinary letter.
    Kat,
    /// Guarded-string languages with `top` as greatest element.
    KatT,
    /// Binary relations with `top` as the full relation.
    KatF,
}

impl Theory {
    pub fn name(self) -> &'static str {
        match self {
            Theory::Kat => "kat",
            Theory::KatT => "katt",
            Theory::KatF => "katf",
        }
    }
}

/// Which side of the query holds the witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Holder {
    Left,
    Right,
}

/// A verified countermodel for a failed relational equation: the word model
/// of the witness, the designated pair, and the two membership results at
/// that pair.
#[derive(Debug, Clone)]
pub struct Countermodel {
    pub model: RelModel,
    pub pair: (usize, usize),
    pub in_left: bool,
    pub in_right: bool,
}

/// Outcome of a decision.
#[derive(Debug, Clone)]
pub enum Verdict {
    Equal,
    NotEqual {
        witness: GuardedString,
        holder: Holder,
        countermodel: Option<Countermodel>,
    },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

/// A verdict together with search statistics.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub verdict: Verdict,
    pub visited: usize,
}

/// Resource limits for the search.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Maximum number of distinct configurations (monoid element pairs).
    pub visited_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { visited_cap: 1 << 20 }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecideError {
    #[error("inconclusive: visited {visited} configurations, cap is {cap}")]
    ResourceLimit { visited: usize, cap: usize },
    #[error("expression uses letters or atoms outside the given alphabet")]
    AlphabetMismatch,
    #[error("countermodel verification failed: {0}")]
    CountermodelRejected(String),
}

/// Decide `e = f` in the given theory. `NotEqual` verdicts carry a shortest
/// witness (fewest symbols, then lexicographic in declared symbol order);
/// under the relational theory the witness comes with a countermodel that
/// has been re-checked by evaluation.
pub fn decide(
    e: &Expr,
    f: &Expr,
    theory: Theory,
    alphabet: &Alphabet,
    limits: Limits,
) -> Result<Outcome, DecideError> {
    if !e.in_alphabet(alphabet) || !f.in_alphabet(alphabet) {
        return Err(DecideError::AlphabetMismatch);
    }
    let (left, right) = recognisers(e, f, theory, alphabet);
    let (found, visited) = product_bfs(&left, &right, alphabet, limits)?;
    let verdict = match found {
        None => Verdict::Equal,
        Some((witness, holder)) => {
            debug_assert_eq!(left.accepts(&witness), holder == Holder::Left);
            debug_assert_eq!(right.accepts(&witness), holder == Holder::Right);
            let countermodel = match theory {
                Theory::KatF => Some(verify_countermodel(e, f, &witness, holder, alphabet)?),
                Theory::Kat | Theory::KatT => None,
            };
            Verdict::NotEqual { witness, holder, countermodel }
        }
    };
    Ok(Outcome { verdict, visited })
}

/// Decide the inequation `e <= f`, encoded as the equation `e + f = f`.
pub fn leq(
    e: &Expr,
    f: &Expr,
    theory: Theory,
    alphabet: &Alphabet,
    limits: Limits,
) -> Result<Outcome, DecideError> {
    decide(&Expr::plus(e.clone(), f.clone()), f, theory, alphabet, limits)
}

/// Membership of a guarded string in the language deciding the theory:
/// `[e]` for plain KAT, its `top`-closure for KAT with greatest element, and
/// the relational closure for KAT with full element.
pub fn member(
    e: &Expr,
    u: &GuardedString,
    theory: Theory,
    alphabet: &Alphabet,
) -> Result<bool, DecideError> {
    if !e.in_alphabet(alphabet) || !u.in_alphabet(alphabet) {
        return Err(DecideError::AlphabetMismatch);
    }
    Ok(theory_recogniser(e, theory, alphabet).accepts(u))
}

fn theory_recogniser(e: &Expr, theory: Theory, alphabet: &Alphabet) -> Recogniser {
    match theory {
        Theory::Kat => Recogniser::make_base(e, alphabet),
        Theory::KatT => Recogniser::make_base(&reduce_top(e, alphabet), alphabet),
        Theory::KatF => Recogniser::make_eclosed(&reduce_top(e, alphabet), alphabet),
    }
}

fn recognisers(
    e: &Expr,
    f: &Expr,
    theory: Theory,
    alphabet: &Alphabet,
) -> (Recogniser, Recogniser) {
    (
        theory_recogniser(e, theory, alphabet),
        theory_recogniser(f, theory, alphabet),
    )
}

/// Breadth-first search over pairs of monoid elements. Successors are
/// enumerated in declared symbol order (atoms outer, letters then `top`
/// inner) and acceptance is tested at dequeue time for every atom in
/// declared order, so the first mismatch yields the minimal witness.
fn product_bfs(
    left: &Recogniser,
    right: &Recogniser,
    alphabet: &Alphabet,
    limits: Limits,
) -> Result<(Option<(GuardedString, Holder)>, usize), DecideError> {
    let init = (left.unit(), right.unit());
    let mut configs: Vec<(BoolMatrix, BoolMatrix)> = vec![init.clone()];
    let mut index: HashMap<(BoolMatrix, BoolMatrix), usize> = HashMap::from([(init, 0)]);
    let mut parent: Vec<Option<(usize, AtomId, Sym)>> = vec![None];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);

    while let Some(at) = queue.pop_front() {
        let (x, y) = configs[at].clone();
        for alpha in alphabet.atom_ids() {
            let p = left.accept(&x, alpha);
            let q = right.accept(&y, alpha);
            if p != q {
                let witness = reconstruct(&parent, at, alpha);
                let holder = if p { Holder::Left } else { Holder::Right };
                return Ok((Some((witness, holder)), configs.len()));
            }
        }
        for alpha in alphabet.atom_ids() {
            for sym in alphabet.syms() {
                let next = (left.step(&x, alpha, sym), right.step(&y, alpha, sym));
                if let Entry::Vacant(slot) = index.entry(next.clone()) {
                    if configs.len() >= limits.visited_cap {
                        return Err(DecideError::ResourceLimit {
                            visited: configs.len(),
                            cap: limits.visited_cap,
                        });
                    }
                    slot.insert(configs.len());
                    configs.push(next);
                    parent.push(Some((at, alpha, sym)));
                    queue.push_back(configs.len() - 1);
                }
            }
        }
    }
    Ok((None, configs.len()))
}

fn reconstruct(
    parent: &[Option<(usize, AtomId, Sym)>],
    mut at: usize,
    last: AtomId,
) -> GuardedString {
    let mut pairs = Vec::new();
    while let Some((prev, alpha, sym)) = parent[at] {
        pairs.push((alpha, sym));
        at = prev;
    }
    pairs.reverse();
    GuardedString::new(pairs, last)
}

/// Build the word model of the witness and check by direct evaluation that
/// the two expressions differ at the designated pair, on the side the
/// search claimed.
fn verify_countermodel(
    e: &Expr,
    f: &Expr,
    witness: &GuardedString,
    holder: Holder,
    alphabet: &Alphabet,
) -> Result<Countermodel, DecideError> {
    let (model, pair) = word_model(witness, alphabet);
    let reject = |msg: String| DecideError::CountermodelRejected(msg);
    let in_left = model
        .eval(e)
        .map_err(|err| reject(err.to_string()))?
        .get(pair.0, pair.1);
    let in_right = model
        .eval(f)
        .map_err(|err| reject(err.to_string()))?
        .get(pair.0, pair.1);
    let expected = match holder {
        Holder::Left => (true, false),
        Holder::Right => (false, true),
    };
    if (in_left, in_right) != expected {
        return Err(reject(format!(
            "witness evaluates to (left: {in_left}, right: {in_right}), expected {expected:?}"
        )));
    }
    Ok(Countermodel { model, pair, in_left, in_right })
}
