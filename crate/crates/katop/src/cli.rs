//! Command-line front end: equivalence and inequation checks, membership,
//! closure exploration, homomorphism queries, and the incorrectness-triple
//! encoding.
//!
//! Exit codes: 0 for equal/holds/true, 1 for not-equal/fails/false, 2 for
//! errors and inconclusive searches.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::closure::{rewrites_f, rewrites_t};
use crate::decide::{decide, leq, member, Countermodel, DecideError, Limits, Outcome, Theory, Verdict};
use crate::graphs::dominated;
use crate::gstring::GuardedString;
use crate::syntax::{elaborate_test, Alphabet, Expr, TestExpr};

#[derive(Parser, Debug)]
#[command(
    name = "katop",
    version,
    about = "Equivalence checker for Kleene algebra with tests and a top constant",
    long_about = "Decides equations and inequations of regular expressions with tests and a \
                  top constant, under guarded-string language semantics (kat), language \
                  semantics with top as greatest element (katt), or relational semantics with \
                  top as the full relation (katf). Inequivalence verdicts come with a witness \
                  guarded string and, for katf, a machine-checked countermodel."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether two expressions are equal.
    Eq {
        /// Left expression (or @file).
        lhs: String,
        /// Right expression (or @file).
        rhs: String,
        #[command(flatten)]
        opts: Options,
    },
    /// Decide the inequation `lhs <= rhs` (as `lhs + rhs = rhs`).
    Leq {
        lhs: String,
        rhs: String,
        #[command(flatten)]
        opts: Options,
    },
    /// Is a guarded string in the deciding language of an expression?
    Member {
        /// Expression (or @file).
        expr: String,
        /// Guarded string, e.g. `alpha a beta`; with a single atom a plain
        /// word like `a b` also works.
        string: String,
        #[command(flatten)]
        opts: Options,
    },
    /// Enumerate rewrites of a guarded string up to a depth.
    Closure {
        /// Starting guarded string.
        string: String,
        /// Number of rewrite steps to apply.
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Rewrite rule: `t` replaces a factor by top, `f` additionally
        /// duplicates around top.
        #[arg(long, value_enum, default_value_t = RuleArg::F)]
        rule: RuleArg,
        /// Drop rewrites longer than this.
        #[arg(long)]
        maxlen: Option<usize>,
        #[command(flatten)]
        opts: Options,
    },
    /// Does the graph of the second string map homomorphically onto the
    /// first (g(u) <| g(v))?
    Hom {
        u: String,
        v: String,
        #[command(flatten)]
        opts: Options,
    },
    /// Check an incorrectness triple [pre] prog [post], encoded as
    /// `post <= top;pre;prog` in the relational theory.
    Triple {
        /// Pre-test: a test formula, an atom name, `0` or `1`.
        pre: String,
        /// Program expression (or @file).
        prog: String,
        /// Post-test, like the pre-test.
        post: String,
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(Args, Debug)]
pub struct Options {
    /// Letters of the alphabet (default: inferred from the arguments).
    #[arg(long, value_delimiter = ',')]
    pub letters: Option<Vec<String>>,
    /// Atom names (default: the single atom `alpha`).
    #[arg(long, value_delimiter = ',', conflicts_with = "tests")]
    pub atoms: Option<Vec<String>>,
    /// Test variables; atoms become their valuations, named `v<bits>`.
    #[arg(long, value_delimiter = ',')]
    pub tests: Option<Vec<String>>,
    /// Theory to decide in.
    #[arg(long, value_enum, default_value_t = TheoryArg::Katf)]
    pub theory: TheoryArg,
    /// Emit the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Cap on visited search configurations; exceeding it is reported as
    /// inconclusive.
    #[arg(long, default_value_t = 1 << 20)]
    pub cap: usize,
    /// Seed for randomised diagnostics (reserved).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoryArg {
    Kat,
    Katt,
    Katf,
}

impl From<TheoryArg> for Theory {
    fn from(t: TheoryArg) -> Theory {
        match t {
            TheoryArg::Kat => Theory::Kat,
            TheoryArg::Katt => Theory::KatT,
            TheoryArg::Katf => Theory::KatF,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleArg {
    T,
    F,
}

/// Stable report shape; `witness`, `holder` and `countermodel` are present
/// only when applicable.
#[derive(Serialize, Debug)]
pub struct Report {
    pub verdict: String,
    pub theory: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holder: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<CountermodelReport>,
    pub stats: Stats,
}

#[derive(Serialize, Debug)]
pub struct CountermodelReport {
    pub carrier: usize,
    pub atoms: Vec<String>,
    pub relations: BTreeMap<String, Vec<(usize, usize)>>,
    pub pair: (usize, usize),
    pub in_left: bool,
    pub in_right: bool,
}

#[derive(Serialize, Debug)]
pub struct Stats {
    pub visited: usize,
    pub millis: u128,
}

#[derive(Serialize, Debug)]
pub struct ClosureReport {
    pub strings: Vec<String>,
    pub stats: Stats,
}

impl Report {
    fn render_text(&self) -> String {
        let mut out = format!("verdict: {}\ntheory: {}\n", self.verdict, self.theory);
        if let Some(w) = &self.witness {
            out.push_str(&format!("witness: {w}\n"));
        }
        if let Some(h) = &self.holder {
            out.push_str(&format!("holder: {h}\n"));
        }
        if let Some(cm) = &self.countermodel {
            out.push_str("countermodel:\n");
            out.push_str(&format!("  carrier {}\n", cm.carrier));
            out.push_str(&format!("  atoms {}\n", cm.atoms.join(" ")));
            for (name, pairs) in &cm.relations {
                let pairs: Vec<String> =
                    pairs.iter().map(|(x, y)| format!("({x},{y})")).collect();
                out.push_str(&format!("  {name} {{{}}}\n", pairs.join(" ")));
            }
            out.push_str(&format!("  pair ({},{})\n", cm.pair.0, cm.pair.1));
            out.push_str(&format!("  left contains pair: {}\n", cm.in_left));
            out.push_str(&format!("  right contains pair: {}\n", cm.in_right));
        }
        out.push_str(&format!(
            "stats: visited={} millis={}\n",
            self.stats.visited, self.stats.millis
        ));
        out
    }
}

/// Build the report for an equivalence-style outcome. The verdict words are
/// `equal`/`not-equal` for equations and `holds`/`fails` for inequations.
pub fn check_report(
    outcome: &Outcome,
    theory: Theory,
    alphabet: &Alphabet,
    inequation: bool,
    millis: u128,
) -> (i32, Report) {
    let stats = Stats { visited: outcome.visited, millis };
    match &outcome.verdict {
        Verdict::Equal => (
            0,
            Report {
                verdict: if inequation { "holds" } else { "equal" }.into(),
                theory: theory.name().into(),
                witness: None,
                holder: None,
                countermodel: None,
                stats,
            },
        ),
        Verdict::NotEqual { witness, holder, countermodel } => (
            1,
            Report {
                verdict: if inequation { "fails" } else { "not-equal" }.into(),
                theory: theory.name().into(),
                witness: Some(witness.display(alphabet).to_string()),
                holder: Some(
                    match holder {
                        crate::decide::Holder::Left => "left",
                        crate::decide::Holder::Right => "right",
                    }
                    .into(),
                ),
                countermodel: countermodel
                    .as_ref()
                    .map(|cm| countermodel_report(cm, alphabet)),
                stats,
            },
        ),
    }
}

fn countermodel_report(cm: &Countermodel, alphabet: &Alphabet) -> CountermodelReport {
    let atoms = (0..cm.model.carrier())
        .map(|x| alphabet.atom_name(cm.model.atom_of(x)).to_string())
        .collect();
    let relations = alphabet
        .letter_ids()
        .map(|l| {
            (
                alphabet.letter_name(l).to_string(),
                cm.model.relation(l.0).map(|m| m.pairs()).unwrap_or_default(),
            )
        })
        .collect();
    CountermodelReport {
        carrier: cm.model.carrier(),
        atoms,
        relations,
        pair: cm.pair,
        in_left: cm.in_left,
        in_right: cm.in_right,
    }
}

fn inconclusive_report(theory: Theory, visited: usize, cap: usize, millis: u128) -> Report {
    Report {
        verdict: "inconclusive".into(),
        theory: theory.name().into(),
        witness: None,
        holder: None,
        countermodel: None,
        stats: Stats { visited: visited.max(cap), millis },
    }
}

fn bool_report(value: bool, theory: Theory, millis: u128) -> (i32, Report) {
    (
        i32::from(!value),
        Report {
            verdict: value.to_string(),
            theory: theory.name().into(),
            witness: None,
            holder: None,
            countermodel: None,
            stats: Stats { visited: 0, millis },
        },
    )
}

/// Resolve an `@file` argument to the file contents; other arguments pass
/// through. To write an expression that starts with an atom constant, wrap
/// it in parentheses.
fn resolve_arg(arg: &str) -> Result<String, String> {
    if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| {
                format!(
                    "cannot read `{path}`: {e} (expressions starting with an atom constant \
                     must be parenthesised, e.g. \"(@{path})\")"
                )
            })
    } else {
        Ok(arg.to_string())
    }
}

/// Letters mentioned in the argument texts that are not reserved words,
/// atoms or test variables, in first-occurrence order. `@`-prefixed atom
/// references and bracketed test formulas are skipped.
fn infer_letters(texts: &[&str], excluded: &BTreeSet<String>) -> Vec<String> {
    let mut letters = Vec::new();
    for text in texts {
        let bytes = text.as_bytes();
        let mut i = 0;
        let mut after_at = false;
        let mut bracket_depth = 0usize;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_alphanumeric() || c == '_' {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let skip = after_at
                    || bracket_depth > 0
                    || matches!(word, "0" | "1" | "top" | "T")
                    || excluded.contains(word)
                    || letters.iter().any(|l| l == word);
                if !skip {
                    letters.push(word.to_string());
                }
                after_at = false;
                continue;
            }
            match c {
                '@' => after_at = true,
                '[' => {
                    bracket_depth += 1;
                    after_at = false;
                }
                ']' => {
                    bracket_depth = bracket_depth.saturating_sub(1);
                    after_at = false;
                }
                ' ' | '\t' | '\n' | '\r' => {}
                _ => after_at = false,
            }
            i += 1;
        }
    }
    letters
}

fn build_alphabet(opts: &Options, texts: &[&str]) -> Result<Alphabet, String> {
    let mut excluded: BTreeSet<String> = BTreeSet::new();
    if let Some(atoms) = &opts.atoms {
        excluded.extend(atoms.iter().cloned());
    } else if opts.tests.is_none() {
        excluded.insert("alpha".to_string());
    }
    if let Some(tests) = &opts.tests {
        excluded.extend(tests.iter().cloned());
    }
    let letters = match &opts.letters {
        Some(letters) => letters.clone(),
        None => infer_letters(texts, &excluded),
    };
    let result = if let Some(tests) = &opts.tests {
        Alphabet::with_tests(letters, tests.clone())
    } else {
        let atoms = opts
            .atoms
            .clone()
            .unwrap_or_else(|| vec!["alpha".to_string()]);
        Alphabet::new(letters, atoms)
    };
    result.map_err(|e| e.to_string())
}

/// Parse a triple pre/post argument: a test formula when tests are
/// declared, otherwise `0`, `1`, or an atom name (optionally `@`-prefixed).
/// Surrounding brackets are allowed either way.
fn parse_test_arg(text: &str, alphabet: &Alphabet) -> Result<Expr, String> {
    let inner = text.trim();
    let inner = inner
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(inner)
        .trim();
    if alphabet.tests().is_some() {
        let t = TestExpr::parse(inner, alphabet).map_err(|e| e.to_string())?;
        elaborate_test(&t, alphabet).map_err(|e| e.to_string())
    } else {
        match inner {
            "0" => Ok(Expr::Zero),
            "1" => Ok(Expr::One),
            name => {
                let name = name.strip_prefix('@').unwrap_or(name);
                alphabet
                    .atom(name)
                    .map(Expr::Atom)
                    .ok_or_else(|| format!("`{name}` is not a declared atom"))
            }
        }
    }
}

fn emit(report: &Report, json: bool, out: &mut dyn Write) {
    if json {
        let _ = writeln!(out, "{}", serde_json::to_string(report).expect("serialisable"));
    } else {
        let _ = write!(out, "{}", report.render_text());
    }
}

fn run_check(
    lhs: &str,
    rhs: &str,
    opts: &Options,
    inequation: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let (lhs, rhs) = match (resolve_arg(lhs), resolve_arg(rhs)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let alphabet = match build_alphabet(opts, &[&lhs, &rhs]) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let theory = Theory::from(opts.theory);
    let (e, f) = match (Expr::parse(&lhs, &alphabet), Expr::parse(&rhs, &alphabet)) {
        (Ok(e), Ok(f)) => (e, f),
        (Err(e), _) | (_, Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let limits = Limits { visited_cap: opts.cap };
    let start = Instant::now();
    let outcome = if inequation {
        leq(&e, &f, theory, &alphabet, limits)
    } else {
        decide(&e, &f, theory, &alphabet, limits)
    };
    let millis = start.elapsed().as_millis();
    match outcome {
        Ok(outcome) => {
            let (code, report) = check_report(&outcome, theory, &alphabet, inequation, millis);
            emit(&report, opts.json, out);
            code
        }
        Err(DecideError::ResourceLimit { visited, cap }) => {
            let report = inconclusive_report(theory, visited, cap, millis);
            emit(&report, opts.json, out);
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Run the CLI on the given arguments (the first argument is the program
/// name), writing reports to `out` and errors to `err`; returns the exit
/// code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match &cli.command {
        Command::Eq { lhs, rhs, opts } => run_check(lhs, rhs, opts, false, out, err),
        Command::Leq { lhs, rhs, opts } => run_check(lhs, rhs, opts, true, out, err),
        Command::Member { expr, string, opts } => {
            let (expr_text, gs_text) = match (resolve_arg(expr), resolve_arg(string)) {
                (Ok(l), Ok(r)) => (l, r),
                (Err(e), _) | (_, Err(e)) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let alphabet = match build_alphabet(opts, &[&expr_text, &gs_text]) {
                Ok(a) => a,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let theory = Theory::from(opts.theory);
            let parsed = Expr::parse(&expr_text, &alphabet)
                .map_err(|e| e.to_string())
                .and_then(|e| {
                    GuardedString::parse(&gs_text, &alphabet)
                        .map(|u| (e, u))
                        .map_err(|e| e.to_string())
                });
            let (e, u) = match parsed {
                Ok(p) => p,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let start = Instant::now();
            match member(&e, &u, theory, &alphabet) {
                Ok(value) => {
                    let (code, report) =
                        bool_report(value, theory, start.elapsed().as_millis());
                    emit(&report, opts.json, out);
                    code
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    2
                }
            }
        }
        Command::Closure { string, steps, rule, maxlen, opts } => {
            let alphabet = match build_alphabet(opts, &[string]) {
                Ok(a) => a,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let u = match GuardedString::parse(string, &alphabet) {
                Ok(u) => u,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let start = Instant::now();
            let mut reached: BTreeSet<GuardedString> = BTreeSet::from([u]);
            for _ in 0..*steps {
                let mut next = reached.clone();
                for w in &reached {
                    let rewrites = match rule {
                        RuleArg::T => rewrites_t(w),
                        RuleArg::F => rewrites_f(w),
                    };
                    next.extend(
                        rewrites
                            .into_iter()
                            .filter(|v| maxlen.is_none_or(|cap| v.len() <= cap)),
                    );
                }
                if next == reached {
                    break;
                }
                reached = next;
            }
            let strings: Vec<String> = reached
                .iter()
                .map(|w| w.display(&alphabet).to_string())
                .collect();
            if opts.json {
                let report = ClosureReport {
                    strings,
                    stats: Stats { visited: reached.len(), millis: start.elapsed().as_millis() },
                };
                let _ = writeln!(out, "{}", serde_json::to_string(&report).expect("serialisable"));
            } else {
                for s in &strings {
                    let _ = writeln!(out, "{s}");
                }
            }
            0
        }
        Command::Hom { u, v, opts } => {
            let alphabet = match build_alphabet(opts, &[u, v]) {
                Ok(a) => a,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let parsed = GuardedString::parse(u, &alphabet).and_then(|pu| {
                GuardedString::parse(v, &alphabet).map(|pv| (pu, pv))
            });
            let (u, v) = match parsed {
                Ok(p) => p,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let start = Instant::now();
            let value = dominated(&u, &v);
            let (code, report) =
                bool_report(value, Theory::from(opts.theory), start.elapsed().as_millis());
            emit(&report, opts.json, out);
            code
        }
        Command::Triple { pre, prog, post, opts } => {
            let prog_text = match resolve_arg(prog) {
                Ok(p) => p,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let alphabet = match build_alphabet(opts, &[&prog_text]) {
                Ok(a) => a,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let parsed = parse_test_arg(pre, &alphabet).and_then(|pre_e| {
                parse_test_arg(post, &alphabet).map(|post_e| (pre_e, post_e))
            });
            let (pre_e, post_e) = match parsed {
                Ok(p) => p,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            let prog_e = match Expr::parse(&prog_text, &alphabet) {
                Ok(e) => e,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            };
            // [pre] prog [post] is valid exactly when post <= top;pre;prog
            // holds with top as the full relation.
            let rhs = Expr::dot(Expr::dot(Expr::Top, pre_e), prog_e);
            let limits = Limits { visited_cap: opts.cap };
            let start = Instant::now();
            match leq(&post_e, &rhs, Theory::KatF, &alphabet, limits) {
                Ok(outcome) => {
                    let (code, report) = check_report(
                        &outcome,
                        Theory::KatF,
                        &alphabet,
                        true,
                        start.elapsed().as_millis(),
                    );
                    emit(&report, opts.json, out);
                    code
                }
                Err(DecideError::ResourceLimit { visited, cap }) => {
                    let report = inconclusive_report(
                        Theory::KatF,
                        visited,
                        cap,
                        start.elapsed().as_millis(),
                    );
                    emit(&report, opts.json, out);
                    2
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    2
                }
            }
        }
    }
}
