//! Boolean matrices with bitset rows, and nondeterministic automata over the
//! word alphabet of atoms and extended letters, built by partial
//! derivatives.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::syntax::{Alphabet, Expr, ExtSym, Sym};

/// A square 0/1 matrix with rows stored as bitsets. These are both the
/// transition relations of automata and the elements of the transition
/// monoid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    dim: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zero(dim: usize) -> Self {
        let words_per_row = dim.div_ceil(64).max(1);
        BoolMatrix { dim, words_per_row, bits: vec![0; dim.max(1) * words_per_row] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i);
        }
        m
    }

    pub fn full(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j);
            }
        }
        m
    }

    pub fn from_pairs(dim: usize, pairs: &[(usize, usize)]) -> Self {
        let mut m = Self::zero(dim);
        for &(i, j) in pairs {
            m.set(i, j);
        }
        m
    }

    /// Diagonal matrix selecting the elements satisfying `pred`.
    pub fn diagonal(dim: usize, pred: impl Fn(usize) -> bool) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            if pred(i) {
                m.set(i, i);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    /// Boolean matrix product.
    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = BoolMatrix::zero(self.dim);
        for i in 0..self.dim {
            let row = self.row(i);
            let out_row = i * out.words_per_row;
            for (w, &word) in row.iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    let j = w * 64 + word.trailing_zeros() as usize;
                    word &= word - 1;
                    let other_row = j * other.words_per_row;
                    for k in 0..self.words_per_row {
                        out.bits[out_row + k] |= other.bits[other_row + k];
                    }
                }
            }
        }
        out
    }

    /// Pointwise union.
    pub fn or(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (w, &word) in other.bits.iter().enumerate() {
            out.bits[w] |= word;
        }
        out
    }

    /// Reflexive-transitive closure (Warshall with bitset rows).
    pub fn star(&self) -> BoolMatrix {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.set(i, i);
        }
        for k in 0..self.dim {
            let row_k = k * out.words_per_row;
            for i in 0..self.dim {
                if out.get(i, k) {
                    let row_i = i * out.words_per_row;
                    for w in 0..out.words_per_row {
                        let word = out.bits[row_k + w];
                        out.bits[row_i + w] |= word;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// All set entries, row-major.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.get(i, j) {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }
}

/// A nondeterministic finite automaton over the word alphabet of atoms and
/// extended letters, with one transition matrix per symbol.
#[derive(Debug, Clone)]
pub struct Nfa {
    n_states: usize,
    initial: Vec<usize>,
    final_mask: Vec<u64>,
    delta_atoms: Vec<BoolMatrix>,
    delta_syms: Vec<BoolMatrix>,
}

impl Nfa {
    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.final_mask[state / 64] >> (state % 64) & 1 == 1
    }

    /// Transition matrix of a symbol of the word alphabet.
    pub fn delta(&self, x: ExtSym) -> &BoolMatrix {
        match x {
            ExtSym::Atom(a) => &self.delta_atoms[a.0],
            ExtSym::Sym(s) => self.delta_sym(s),
        }
    }

    pub fn delta_atom(&self, a: crate::syntax::AtomId) -> &BoolMatrix {
        &self.delta_atoms[a.0]
    }

    pub fn delta_sym(&self, s: Sym) -> &BoolMatrix {
        match s {
            Sym::Letter(l) => &self.delta_syms[l.0],
            Sym::Top => &self.delta_syms[self.delta_syms.len() - 1],
        }
    }

    /// Does the product of a relation with the initial/final sets meet?
    /// I.e. is there an initial `i` and final `f` with `m[i][f]`?
    pub fn hits(&self, m: &BoolMatrix) -> bool {
        self.initial.iter().any(|&i| {
            let row = &m.bits[i * m.words_per_row..(i + 1) * m.words_per_row];
            row.iter().zip(&self.final_mask).any(|(r, f)| r & f != 0)
        })
    }

    /// Word acceptance by state-set simulation.
    pub fn accepts_word(&self, word: &[ExtSym]) -> bool {
        let mut current: Vec<u64> = vec![0; self.final_mask.len()];
        for &i in &self.initial {
            current[i / 64] |= 1 << (i % 64);
        }
        for &x in word {
            let m = self.delta(x);
            let mut next = vec![0u64; current.len()];
            for (w, &word_bits) in current.iter().enumerate() {
                let mut word_bits = word_bits;
                while word_bits != 0 {
                    let i = w * 64 + word_bits.trailing_zeros() as usize;
                    word_bits &= word_bits - 1;
                    for (k, n) in next.iter_mut().enumerate() {
                        *n |= m.row(i)[k];
                    }
                }
            }
            current = next;
        }
        current.iter().zip(&self.final_mask).any(|(c, f)| c & f != 0)
    }

    /// Plain-text description: initial and final state lists, then one edge
    /// per line (`src symbol dst`).
    pub fn export_text(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        let initial: Vec<String> = self.initial.iter().map(|i| i.to_string()).collect();
        writeln!(out, "states {}", self.n_states).unwrap();
        writeln!(out, "initial {}", initial.join(" ")).unwrap();
        let finals: Vec<String> = (0..self.n_states)
            .filter(|&i| self.is_final(i))
            .map(|i| i.to_string())
            .collect();
        writeln!(out, "final {}", finals.join(" ")).unwrap();
        let mut edge = |name: &str, m: &BoolMatrix| {
            for (i, j) in m.pairs() {
                writeln!(out, "{i} {name} {j}").unwrap();
            }
        };
        for a in alphabet.atom_ids() {
            edge(alphabet.atom_name(a), &self.delta_atoms[a.0]);
        }
        for s in alphabet.syms() {
            edge(alphabet.sym_name(s), self.delta_sym(s));
        }
        out
    }
}

fn nullable(e: &Expr) -> bool {
    match e {
        Expr::One | Expr::Star(_) => true,
        Expr::Zero | Expr::Top | Expr::Atom(_) | Expr::Letter(_) => false,
        Expr::Plus(l, r) => nullable(l) || nullable(r),
        Expr::Dot(l, r) => nullable(l) && nullable(r),
    }
}

fn leaf_matches(e: &Expr, x: ExtSym) -> bool {
    matches!(
        (e, x),
        (Expr::Top, ExtSym::Sym(Sym::Top))
    ) || match (e, x) {
        (Expr::Atom(a), ExtSym::Atom(b)) => *a == b,
        (Expr::Letter(l), ExtSym::Sym(Sym::Letter(m))) => *l == m,
        _ => false,
    }
}

fn seq(l: Expr, r: &Expr) -> Expr {
    match l {
        Expr::One => r.clone(),
        l => Expr::dot(l, r.clone()),
    }
}

/// Antimirov partial derivatives of `e` along symbol `x`.
fn derivatives(e: &Expr, x: ExtSym, out: &mut Vec<Expr>) {
    match e {
        Expr::Zero | Expr::One => {}
        Expr::Top | Expr::Atom(_) | Expr::Letter(_) => {
            if leaf_matches(e, x) {
                out.push(Expr::One);
            }
        }
        Expr::Plus(l, r) => {
            derivatives(l, x, out);
            derivatives(r, x, out);
        }
        Expr::Dot(l, r) => {
            let mut left = Vec::new();
            derivatives(l, x, &mut left);
            for d in left {
                out.push(seq(d, r));
            }
            if nullable(l) {
                derivatives(r, x, out);
            }
        }
        Expr::Star(inner) => {
            let mut left = Vec::new();
            derivatives(inner, x, &mut left);
            for d in left {
                out.push(seq(d, e));
            }
        }
    }
}

/// Build the partial-derivative automaton of `e` over the word alphabet of
/// atoms and extended letters. Epsilon-free, with at most `size(e) + 1`
/// states; a word is accepted exactly when it is in the plain regular
/// language of `e` read over that alphabet.
pub fn build_nfa(e: &Expr, alphabet: &Alphabet) -> Nfa {
    let symbols: Vec<ExtSym> = alphabet
        .atom_ids()
        .map(ExtSym::Atom)
        .chain(alphabet.syms().map(ExtSym::Sym))
        .collect();

    let mut states: Vec<Expr> = vec![e.clone()];
    let mut index: HashMap<Expr, usize> = HashMap::from([(e.clone(), 0)]);
    let mut edges: Vec<(usize, ExtSym, usize)> = Vec::new();
    let mut work = 0;
    while work < states.len() {
        let src = states[work].clone();
        for &x in &symbols {
            let mut targets = Vec::new();
            derivatives(&src, x, &mut targets);
            for t in targets {
                let dst = *index.entry(t.clone()).or_insert_with(|| {
                    states.push(t);
                    states.len() - 1
                });
                edges.push((work, x, dst));
            }
        }
        work += 1;
    }

    let n = states.len();
    let mut delta_atoms = vec![BoolMatrix::zero(n); alphabet.atom_count()];
    let mut delta_syms = vec![BoolMatrix::zero(n); alphabet.sym_count()];
    for (src, x, dst) in edges {
        match x {
            ExtSym::Atom(a) => delta_atoms[a.0].set(src, dst),
            ExtSym::Sym(s) => delta_syms[alphabet.sym_index(s)].set(src, dst),
        }
    }
    let mut final_mask = vec![0u64; n.div_ceil(64).max(1)];
    for (i, s) in states.iter().enumerate() {
        if nullable(s) {
            final_mask[i / 64] |= 1 << (i % 64);
        }
    }
    Nfa { n_states: n, initial: vec![0], final_mask, delta_atoms, delta_syms }
}
