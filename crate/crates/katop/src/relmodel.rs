//! Finite relational models: expression evaluation, the word model used as
//! countermodel for failed relational equations, and seeded random model
//! sampling for soundness fuzzing.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::automata::BoolMatrix;
use crate::graphs::Graph;
use crate::gstring::GuardedString;
use crate::syntax::{Alphabet, AtomId, Expr, Sym};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("relation for letter {0} has dimension {1}, carrier is {2}")]
    DimensionMismatch(usize, usize, usize),
    #[error("letter {0} is not interpreted in this model")]
    UninterpretedLetter(usize),
    #[error("the carrier must be nonempty")]
    EmptyCarrier,
}

/// A finite relational model: a carrier partitioned into atoms, and one
/// relation per letter. Relations are boolean matrices over the carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelModel {
    atom_of: Vec<AtomId>,
    rels: Vec<BoolMatrix>,
}

impl RelModel {
    pub fn new(atom_of: Vec<AtomId>, rels: Vec<BoolMatrix>) -> Result<Self, ModelError> {
        if atom_of.is_empty() {
            return Err(ModelError::EmptyCarrier);
        }
        let n = atom_of.len();
        for (i, r) in rels.iter().enumerate() {
            if r.dim() != n {
                return Err(ModelError::DimensionMismatch(i, r.dim(), n));
            }
        }
        Ok(RelModel { atom_of, rels })
    }

    pub fn carrier(&self) -> usize {
        self.atom_of.len()
    }

    pub fn atom_of(&self, x: usize) -> AtomId {
        self.atom_of[x]
    }

    pub fn relation(&self, letter: usize) -> Option<&BoolMatrix> {
        self.rels.get(letter)
    }

    /// Evaluate an expression to a relation: union, relational composition,
    /// reflexive-transitive closure; `top` is the full relation, atoms are
    /// the sub-identities selecting their partition class.
    pub fn eval(&self, e: &Expr) -> Result<BoolMatrix, ModelError> {
        let n = self.carrier();
        Ok(match e {
            Expr::Zero => BoolMatrix::zero(n),
            Expr::One => BoolMatrix::identity(n),
            Expr::Top => BoolMatrix::full(n),
            Expr::Atom(a) => BoolMatrix::diagonal(n, |x| self.atom_of[x] == *a),
            Expr::Letter(l) => self
                .rels
                .get(l.0)
                .cloned()
                .ok_or(ModelError::UninterpretedLetter(l.0))?,
            Expr::Plus(l, r) => self.eval(l)?.or(&self.eval(r)?),
            Expr::Dot(l, r) => self.eval(l)?.mul(&self.eval(r)?),
            Expr::Star(inner) => self.eval(inner)?.star(),
        })
    }

    /// The graph of this model's valuation with the given input and output,
    /// in the sense of the graph module.
    pub fn to_graph(&self, input: usize, output: usize) -> Graph {
        let mut edges = Vec::new();
        for (l, rel) in self.rels.iter().enumerate() {
            for (x, y) in rel.pairs() {
                edges.push((x, crate::syntax::LetterId(l), y));
            }
        }
        edges.sort();
        Graph { labels: self.atom_of.clone(), edges, input, output }
    }

    /// Textual dump: carrier size, atom labelling, relation pair lists.
    pub fn dump(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        writeln!(out, "carrier {}", self.carrier()).unwrap();
        let labels: Vec<String> = self
            .atom_of
            .iter()
            .map(|a| alphabet.atom_name(*a).to_string())
            .collect();
        writeln!(out, "atoms {}", labels.join(" ")).unwrap();
        for l in alphabet.letter_ids() {
            let pairs: Vec<String> = self.rels[l.0]
                .pairs()
                .into_iter()
                .map(|(x, y)| format!("({x},{y})"))
                .collect();
            writeln!(out, "{} {{{}}}", alphabet.letter_name(l), pairs.join(" ")).unwrap();
        }
        out
    }
}

/// The word model of a guarded string `u` of length `n`: carrier `0..=n`,
/// element `i` labelled with the `i`-th atom, and each plain letter at
/// position `i` contributing the single pair `(i, i+1)`. `top` positions
/// contribute nothing. Returns the model together with the designated pair
/// `(0, n)`.
pub fn word_model(u: &GuardedString, alphabet: &Alphabet) -> (RelModel, (usize, usize)) {
    let n = u.len();
    let atom_of: Vec<AtomId> = (0..=n).map(|i| u.atom_at(i)).collect();
    let mut rels = vec![BoolMatrix::zero(n + 1); alphabet.letter_count()];
    for i in 0..n {
        if let Sym::Letter(l) = u.sym_at(i) {
            rels[l.0].set(i, i + 1);
        }
    }
    let model = RelModel { atom_of, rels };
    (model, (0, n))
}

/// A deterministic stream of random models: carrier size uniform in
/// `1..=max_carrier`, uniform atom labelling, each relation pair included
/// independently with probability 1/2.
pub fn sample_models(
    alphabet: &Alphabet,
    max_carrier: usize,
    count: usize,
    seed: u64,
) -> Vec<RelModel> {
    assert!(max_carrier >= 1, "max_carrier must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=max_carrier);
            let atom_of = (0..n)
                .map(|_| AtomId(rng.random_range(0..alphabet.atom_count())))
                .collect();
            let rels = (0..alphabet.letter_count())
                .map(|_| {
                    let mut m = BoolMatrix::zero(n);
                    for i in 0..n {
                        for j in 0..n {
                            if rng.random_bool(0.5) {
                                m.set(i, j);
                            }
                        }
                    }
                    m
                })
                .collect();
            RelModel { atom_of, rels }
        })
        .collect()
}
