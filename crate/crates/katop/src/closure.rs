//! Brute-force semantic oracles for the rewrite closures of the two `top`
//! axioms: single rewrite steps, substitution-based membership in the
//! `top`-replacement closure of a finite language, and bounded search in the
//! full closure. These never enter the decision path; they exist to
//! cross-check it.

use std::collections::{BTreeSet, VecDeque};

use crate::gstring::{GsLang, GuardedString};
use crate::syntax::Sym;

/// All guarded strings obtainable from `u` by one T-step: pick a coalesced
/// factorisation `u = l <> w <> r` and replace the middle by a single `top`.
/// Always nonempty (take `w` to be all of `u`).
pub fn rewrites_t(u: &GuardedString) -> BTreeSet<GuardedString> {
    let n = u.len();
    let mut out = BTreeSet::new();
    for i in 0..=n {
        for j in i..=n {
            // l = u[0..i], w = u[i..j], r = u[j..n]; the result is l top r.
            let mut pairs = u.pairs[..i].to_vec();
            pairs.push((u.atom_at(i), Sym::Top));
            pairs.extend_from_slice(&u.pairs[j..]);
            out.insert(GuardedString::new(pairs, u.last));
        }
    }
    out
}

/// All guarded strings obtainable from `u` by one F-step: the T-steps, plus
/// every expansion of a guarded substring `w` of `u` into `w top w`
/// (including length-zero `w`, a single atom).
pub fn rewrites_f(u: &GuardedString) -> BTreeSet<GuardedString> {
    let n = u.len();
    let mut out = rewrites_t(u);
    for i in 0..=n {
        for j in i..=n {
            // u = l w r with w from vertex i to vertex j; the result is
            // l w top w r.
            let mut pairs = u.pairs[..j].to_vec();
            pairs.push((u.atom_at(j), Sym::Top));
            pairs.extend_from_slice(&u.pairs[i..j]);
            pairs.extend_from_slice(&u.pairs[j..]);
            out.insert(GuardedString::new(pairs, u.last));
        }
    }
    out
}

/// Does `u` match `v` under the substitution reading: every `top` of `v`
/// maps to a (possibly empty) guarded string with matching boundary atoms,
/// all other symbols preserved in order. Decides membership of `u` in the
/// T-closure of the singleton `{v}`.
pub fn ct_matches(u: &GuardedString, v: &GuardedString) -> bool {
    let nu = u.len();
    let nv = v.len();
    // match_from[vi][ui]: can v from vertex vi match u from vertex ui?
    // Computed right to left.
    let mut table = vec![vec![false; nu + 1]; nv + 1];
    for vi in (0..=nv).rev() {
        for ui in (0..=nu).rev() {
            if v.atom_at(vi) != u.atom_at(ui) {
                continue;
            }
            table[vi][ui] = if vi == nv {
                ui == nu
            } else {
                match v.sym_at(vi) {
                    Sym::Top => (ui..=nu).any(|uj| table[vi + 1][uj]),
                    sym => ui < nu && u.sym_at(ui) == sym && table[vi + 1][ui + 1],
                }
            };
        }
    }
    table[0][0]
}

/// Membership of `u` in the T-closure of the finite language `lang`.
pub fn ct_member_lang(u: &GuardedString, lang: &GsLang) -> bool {
    lang.iter().any(|v| ct_matches(u, v))
}

/// Membership of `u` in `E(C_T {v})`: is there an `n` with `(u top)^n u` in
/// the T-closure of `{v}`? It suffices to try `n` up to the number of `top`
/// occurrences in `v`, since each chaining `top` must be consumed by one of
/// them.
pub fn e_ct_member(u: &GuardedString, v: &GuardedString) -> bool {
    (0..=v.count_top()).any(|n| ct_matches(&u.top_chain(n), v))
}

/// Bounded search for a rewrite path from `u` into `lang` using F-steps.
/// Sound semi-decision: `true` only when a path exists; `false` means none
/// was found within the length and depth budget.
pub fn cf_member_search(
    u: &GuardedString,
    lang: &GsLang,
    max_len: usize,
    max_depth: usize,
) -> bool {
    let mut seen = BTreeSet::from([u.clone()]);
    let mut queue = VecDeque::from([(u.clone(), 0usize)]);
    while let Some((w, depth)) = queue.pop_front() {
        if lang.contains(&w) {
            return true;
        }
        if depth == max_depth {
            continue;
        }
        for next in rewrites_f(&w) {
            if next.len() <= max_len && seen.insert(next.clone()) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    false
}
