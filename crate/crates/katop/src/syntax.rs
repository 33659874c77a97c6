//! Expression syntax: alphabets, regular expressions over letters, atoms and
//! `top`, Boolean test elaboration into atoms, and the reduction that
//! eliminates the special status of `top`.

use std::fmt;

use thiserror::Error;

/// Index of a letter in its governing [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetterId(pub usize);

/// Index of an atom in its governing [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub usize);

/// A symbol of the extended letter set: a plain letter or `top`.
///
/// Guarded strings alternate atoms with these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Letter(LetterId),
    Top,
}

/// A symbol of the word alphabet underlying guarded strings: an atom or a
/// [`Sym`]. Automata over this alphabet treat atoms as ordinary symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtSym {
    Atom(AtomId),
    Sym(Sym),
}

/// Names reserved by the concrete syntax.
const RESERVED: &[&str] = &["0", "1", "top", "T"];

/// Errors raised when constructing an [`Alphabet`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("the atom set must be nonempty")]
    EmptyAtoms,
    #[error("`{0}` is a reserved name")]
    ReservedName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("`{0}` is not a valid identifier")]
    InvalidName(String),
    #[error("too many test variables ({0}); at most 16 are supported")]
    TooManyTests(usize),
}

/// The symbol universe of a problem instance: letters, atoms, and optionally
/// the test variables the atoms were generated from.
///
/// When the alphabet is built from test variables, the atoms are exactly the
/// `2^n` valuations of the tests, named `v` followed by the valuation bits in
/// declaration order (`v10` makes the first test true and the second false).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<String>,
    atoms: Vec<String>,
    tests: Option<Vec<String>>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    /// Alphabet with explicitly named atoms.
    pub fn new<L, A>(letters: L, atoms: A) -> Result<Self, AlphabetError>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        A: IntoIterator,
        A::Item: Into<String>,
    {
        let alphabet = Alphabet {
            letters: letters.into_iter().map(Into::into).collect(),
            atoms: atoms.into_iter().map(Into::into).collect(),
            tests: None,
        };
        alphabet.validate()?;
        Ok(alphabet)
    }

    /// Alphabet whose atoms are the valuations of the given test variables.
    pub fn with_tests<L, T>(letters: L, tests: T) -> Result<Self, AlphabetError>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        T: IntoIterator,
        T::Item: Into<String>,
    {
        let tests: Vec<String> = tests.into_iter().map(Into::into).collect();
        if tests.len() > 16 {
            return Err(AlphabetError::TooManyTests(tests.len()));
        }
        let n = tests.len();
        let atoms = (0..1usize << n)
            .map(|bits| {
                let mut name = String::from("v");
                for j in 0..n {
                    name.push(if bits >> (n - 1 - j) & 1 == 1 { '1' } else { '0' });
                }
                name
            })
            .collect();
        let alphabet = Alphabet {
            letters: letters.into_iter().map(Into::into).collect(),
            atoms,
            tests: Some(tests),
        };
        alphabet.validate()?;
        Ok(alphabet)
    }

    /// Alphabet with a single atom named `alpha`: guarded strings are then in
    /// one-to-one correspondence with plain words.
    pub fn single_atom<L>(letters: L) -> Result<Self, AlphabetError>
    where
        L: IntoIterator,
        L::Item: Into<String>,
    {
        Self::new(letters, ["alpha"])
    }

    fn validate(&self) -> Result<(), AlphabetError> {
        if self.atoms.is_empty() {
            return Err(AlphabetError::EmptyAtoms);
        }
        let mut seen = std::collections::HashSet::new();
        let tests = self.tests.as_deref().unwrap_or(&[]);
        for name in self.letters.iter().chain(&self.atoms).chain(tests) {
            if RESERVED.contains(&name.as_str()) {
                return Err(AlphabetError::ReservedName(name.clone()));
            }
            if !valid_name(name) {
                return Err(AlphabetError::InvalidName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(AlphabetError::DuplicateName(name.clone()));
            }
        }
        Ok(())
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn tests(&self) -> Option<&[String]> {
        self.tests.as_deref()
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn letter(&self, name: &str) -> Option<LetterId> {
        self.letters.iter().position(|l| l == name).map(LetterId)
    }

    pub fn atom(&self, name: &str) -> Option<AtomId> {
        self.atoms.iter().position(|a| a == name).map(AtomId)
    }

    pub fn letter_name(&self, id: LetterId) -> &str {
        &self.letters[id.0]
    }

    pub fn atom_name(&self, id: AtomId) -> &str {
        &self.atoms[id.0]
    }

    /// Name of a symbol; `top` for [`Sym::Top`].
    pub fn sym_name(&self, sym: Sym) -> &str {
        match sym {
            Sym::Letter(l) => self.letter_name(l),
            Sym::Top => "top",
        }
    }

    pub fn atom_ids(&self) -> impl Iterator<Item = AtomId> {
        (0..self.atoms.len()).map(AtomId)
    }

    pub fn letter_ids(&self) -> impl Iterator<Item = LetterId> {
        (0..self.letters.len()).map(LetterId)
    }

    /// The extended letter set, letters in declaration order then `top`.
    pub fn syms(&self) -> impl Iterator<Item = Sym> {
        let n = self.letters.len();
        (0..n).map(LetterId).map(Sym::Letter).chain([Sym::Top])
    }

    /// Dense index of a symbol: letters first, `top` last.
    pub fn sym_index(&self, sym: Sym) -> usize {
        match sym {
            Sym::Letter(l) => l.0,
            Sym::Top => self.letters.len(),
        }
    }

    /// Number of symbols in the extended letter set.
    pub fn sym_count(&self) -> usize {
        self.letters.len() + 1
    }

    /// The valuation of the test variables named by an atom, when the
    /// alphabet was built from tests.
    pub fn valuation(&self, atom: AtomId) -> Option<Vec<bool>> {
        let tests = self.tests.as_deref()?;
        let n = tests.len();
        Some((0..n).map(|j| atom.0 >> (n - 1 - j) & 1 == 1).collect())
    }
}

/// Regular expressions over letters, atom constants and `top`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Zero,
    One,
    Top,
    Atom(AtomId),
    Letter(LetterId),
    Plus(Box<Expr>, Box<Expr>),
    Dot(Box<Expr>, Box<Expr>),
    Star(Box<Expr>),
}

impl Expr {
    pub fn plus(l: Expr, r: Expr) -> Expr {
        Expr::Plus(Box::new(l), Box::new(r))
    }

    pub fn dot(l: Expr, r: Expr) -> Expr {
        Expr::Dot(Box::new(l), Box::new(r))
    }

    pub fn star(e: Expr) -> Expr {
        Expr::Star(Box::new(e))
    }

    /// Node count; at least 1.
    pub fn size(&self) -> usize {
        match self {
            Expr::Zero | Expr::One | Expr::Top | Expr::Atom(_) | Expr::Letter(_) => 1,
            Expr::Plus(l, r) | Expr::Dot(l, r) => 1 + l.size() + r.size(),
            Expr::Star(e) => 1 + e.size(),
        }
    }

    pub fn is_top_free(&self) -> bool {
        match self {
            Expr::Top => false,
            Expr::Zero | Expr::One | Expr::Atom(_) | Expr::Letter(_) => true,
            Expr::Plus(l, r) | Expr::Dot(l, r) => l.is_top_free() && r.is_top_free(),
            Expr::Star(e) => e.is_top_free(),
        }
    }

    /// True when every letter and atom index is in range for `alphabet`.
    pub fn in_alphabet(&self, alphabet: &Alphabet) -> bool {
        match self {
            Expr::Zero | Expr::One | Expr::Top => true,
            Expr::Atom(a) => a.0 < alphabet.atom_count(),
            Expr::Letter(l) => l.0 < alphabet.letter_count(),
            Expr::Plus(l, r) | Expr::Dot(l, r) => {
                l.in_alphabet(alphabet) && r.in_alphabet(alphabet)
            }
            Expr::Star(e) => e.in_alphabet(alphabet),
        }
    }

    /// Parse the concrete syntax; see the module documentation for the
    /// grammar.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Expr, ParseError> {
        Parser::new(text, alphabet)?.parse_whole_expr()
    }

    /// Render in concrete syntax; the output reparses to a structurally
    /// equal expression.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayExpr { expr: self, alphabet }
    }
}

struct DisplayExpr<'a> {
    expr: &'a Expr,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayExpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self.expr, self.alphabet, 0, f)
    }
}

// Precedence levels: 0 sum, 1 sequence, 2 star, 3 leaf. A node is wrapped in
// parentheses when it appears in a context of strictly higher precedence;
// right operands of the binary nodes use the next level up, so parsing
// (which is left-associative) reconstructs the same tree.
fn fmt_prec(e: &Expr, alphabet: &Alphabet, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let this = match e {
        Expr::Plus(..) => 0,
        Expr::Dot(..) => 1,
        Expr::Star(_) => 2,
        _ => 3,
    };
    let parens = this < prec;
    if parens {
        f.write_str("(")?;
    }
    match e {
        Expr::Zero => f.write_str("0")?,
        Expr::One => f.write_str("1")?,
        Expr::Top => f.write_str("top")?,
        Expr::Atom(a) => write!(f, "@{}", alphabet.atom_name(*a))?,
        Expr::Letter(l) => f.write_str(alphabet.letter_name(*l))?,
        Expr::Plus(l, r) => {
            fmt_prec(l, alphabet, 0, f)?;
            f.write_str("+")?;
            fmt_prec(r, alphabet, 1, f)?;
        }
        Expr::Dot(l, r) => {
            fmt_prec(l, alphabet, 1, f)?;
            f.write_str(";")?;
            fmt_prec(r, alphabet, 2, f)?;
        }
        Expr::Star(e) => {
            fmt_prec(e, alphabet, 2, f)?;
            f.write_str("*")?;
        }
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}

/// Boolean formulas over the test variables of an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TestExpr {
    True,
    False,
    Var(String),
    Not(Box<TestExpr>),
    And(Box<TestExpr>, Box<TestExpr>),
    Or(Box<TestExpr>, Box<TestExpr>),
}

impl TestExpr {
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<TestExpr, ParseError> {
        Parser::new(text, alphabet)?.parse_whole_test()
    }

    /// Evaluate under a valuation of the test variables, given in the order
    /// of `tests`.
    pub fn eval(&self, tests: &[String], valuation: &[bool]) -> Result<bool, ElaborateError> {
        Ok(match self {
            TestExpr::True => true,
            TestExpr::False => false,
            TestExpr::Var(name) => {
                let i = tests
                    .iter()
                    .position(|t| t == name)
                    .ok_or_else(|| ElaborateError::UnknownVariable(name.clone()))?;
                valuation[i]
            }
            TestExpr::Not(t) => !t.eval(tests, valuation)?,
            TestExpr::And(l, r) => l.eval(tests, valuation)? && r.eval(tests, valuation)?,
            TestExpr::Or(l, r) => l.eval(tests, valuation)? || r.eval(tests, valuation)?,
        })
    }
}

/// Errors raised while elaborating a test into a sum of atoms.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElaborateError {
    #[error("the alphabet declares no test variables")]
    NoTests,
    #[error("unknown test variable `{0}`")]
    UnknownVariable(String),
}

/// Expand a Boolean test into the sum of the atoms (valuations) satisfying
/// it, in canonical atom order; `0` when unsatisfiable.
pub fn elaborate_test(t: &TestExpr, alphabet: &Alphabet) -> Result<Expr, ElaborateError> {
    let tests: Vec<String> = alphabet.tests().ok_or(ElaborateError::NoTests)?.to_vec();
    let mut sum: Option<Expr> = None;
    for atom in alphabet.atom_ids() {
        let valuation = alphabet.valuation(atom).expect("tests are declared");
        if t.eval(&tests, &valuation)? {
            let term = Expr::Atom(atom);
            sum = Some(match sum {
                None => term,
                Some(acc) => Expr::plus(acc, term),
            });
        }
    }
    Ok(sum.unwrap_or(Expr::Zero))
}

/// An expression denoting the full guarded-string language: the star of the
/// sum of all extended letters. Atom leaves are unnecessary because the
/// guarded-string reading of a word permits zero-length atom runs.
pub fn full_top(alphabet: &Alphabet) -> Expr {
    let mut sum: Option<Expr> = None;
    for sym in alphabet.syms() {
        let leaf = match sym {
            Sym::Letter(l) => Expr::Letter(l),
            Sym::Top => Expr::Top,
        };
        sum = Some(match sum {
            None => leaf,
            Some(acc) => Expr::plus(acc, leaf),
        });
    }
    Expr::star(sum.expect("at least the top symbol"))
}

/// Replace every `top` leaf by [`full_top`], leaving all other structure
/// unchanged. The result denotes the same language as the closure of the
/// original under replacing `top` by arbitrary guarded strings.
pub fn reduce_top(e: &Expr, alphabet: &Alphabet) -> Expr {
    match e {
        Expr::Top => full_top(alphabet),
        Expr::Zero | Expr::One | Expr::Atom(_) | Expr::Letter(_) => e.clone(),
        Expr::Plus(l, r) => Expr::plus(reduce_top(l, alphabet), reduce_top(r, alphabet)),
        Expr::Dot(l, r) => Expr::dot(reduce_top(l, alphabet), reduce_top(r, alphabet)),
        Expr::Star(inner) => Expr::star(reduce_top(inner, alphabet)),
    }
}

/// Parse errors, with byte positions into the input.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at offset {pos}{hint}")]
    UnknownIdent {
        pos: usize,
        name: String,
        hint: String,
    },
    #[error("`[...]` tests need test variables declared in the alphabet (offset {pos})")]
    NoTests { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    At,
    Plus,
    Semi,
    Star,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Amp,
    Pipe,
    Bang,
    Eof,
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    alphabet: &'a Alphabet,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            ';' => Tok::Semi,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            '!' => Tok::Bang,
            '@' => Tok::At,
            c if c.is_ascii_alphanumeric() || c == '_' => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Word(text[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        i += 1;
        toks.push((tok, start));
    }
    toks.push((Tok::Eof, bytes.len()));
    Ok(toks)
}

impl<'a> Parser<'a> {
    fn new(text: &str, alphabet: &'a Alphabet) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, alphabet })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<usize, ParseError> {
        if self.peek() == &tok {
            Ok(self.bump().1)
        } else {
            Err(self.syntax(format!("expected {what}")))
        }
    }

    fn syntax(&self, msg: String) -> ParseError {
        ParseError::Syntax { pos: self.here(), msg }
    }

    fn parse_whole_expr(&mut self) -> Result<Expr, ParseError> {
        let e = self.parse_expr()?;
        if self.peek() != &Tok::Eof {
            return Err(self.syntax("expected end of input".into()));
        }
        Ok(e)
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.parse_term()?;
        while self.peek() == &Tok::Plus {
            self.bump();
            e = Expr::plus(e, self.parse_term()?);
        }
        Ok(e)
    }

    fn starts_base(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Word(_) | Tok::At | Tok::LParen | Tok::LBracket
        )
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.parse_factor()?;
        loop {
            if self.peek() == &Tok::Semi {
                self.bump();
                e = Expr::dot(e, self.parse_factor()?);
            } else if self.starts_base() {
                e = Expr::dot(e, self.parse_factor()?);
            } else {
                break;
            }
        }
        Ok(e)
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.parse_base()?;
        while self.peek() == &Tok::Star {
            self.bump();
            e = Expr::star(e);
        }
        Ok(e)
    }

    fn parse_base(&mut self) -> Result<Expr, ParseError> {
        match self.bump() {
            (Tok::Word(w), pos) => match w.as_str() {
                "0" => Ok(Expr::Zero),
                "1" => Ok(Expr::One),
                "top" => Ok(Expr::Top),
                name => match self.alphabet.letter(name) {
                    Some(l) => Ok(Expr::Letter(l)),
                    None => {
                        let hint = if self.alphabet.atom(name).is_some() {
                            " (atom constants are written `@name`)".to_string()
                        } else {
                            String::new()
                        };
                        Err(ParseError::UnknownIdent { pos, name: name.to_string(), hint })
                    }
                },
            },
            (Tok::At, _) => match self.bump() {
                (Tok::Word(name), pos) => match self.alphabet.atom(&name) {
                    Some(a) => Ok(Expr::Atom(a)),
                    None => Err(ParseError::UnknownIdent { pos, name, hint: String::new() }),
                },
                (_, pos) => Err(ParseError::Syntax {
                    pos,
                    msg: "expected an atom name after `@`".into(),
                }),
            },
            (Tok::LParen, _) => {
                let e = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            (Tok::LBracket, pos) => {
                if self.alphabet.tests().is_none() {
                    return Err(ParseError::NoTests { pos });
                }
                let t = self.parse_test_or()?;
                self.expect(Tok::RBracket, "`]`")?;
                elaborate_test(&t, self.alphabet).map_err(|e| ParseError::Syntax {
                    pos,
                    msg: e.to_string(),
                })
            }
            (_, pos) => Err(ParseError::Syntax {
                pos,
                msg: "expected an expression".into(),
            }),
        }
    }

    fn parse_whole_test(&mut self) -> Result<TestExpr, ParseError> {
        let t = self.parse_test_or()?;
        if self.peek() != &Tok::Eof {
            return Err(self.syntax("expected end of input".into()));
        }
        Ok(t)
    }

    fn parse_test_or(&mut self) -> Result<TestExpr, ParseError> {
        let mut t = self.parse_test_and()?;
        while self.peek() == &Tok::Pipe {
            self.bump();
            t = TestExpr::Or(Box::new(t), Box::new(self.parse_test_and()?));
        }
        Ok(t)
    }

    fn parse_test_and(&mut self) -> Result<TestExpr, ParseError> {
        let mut t = self.parse_test_atom()?;
        while self.peek() == &Tok::Amp {
            self.bump();
            t = TestExpr::And(Box::new(t), Box::new(self.parse_test_atom()?));
        }
        Ok(t)
    }

    fn parse_test_atom(&mut self) -> Result<TestExpr, ParseError> {
        match self.bump() {
            (Tok::Bang, _) => Ok(TestExpr::Not(Box::new(self.parse_test_atom()?))),
            (Tok::LParen, _) => {
                let t = self.parse_test_or()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            (Tok::Word(w), pos) => match w.as_str() {
                "1" => Ok(TestExpr::True),
                "0" => Ok(TestExpr::False),
                name => {
                    let tests = self.alphabet.tests().unwrap_or(&[]);
                    if tests.iter().any(|t| t == name) {
                        Ok(TestExpr::Var(name.to_string()))
                    } else {
                        Err(ParseError::UnknownIdent {
                            pos,
                            name: name.to_string(),
                            hint: " (not a declared test variable)".to_string(),
                        })
                    }
                }
            },
            (_, pos) => Err(ParseError::Syntax {
                pos,
                msg: "expected a test".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"], ["alpha", "beta"]).unwrap()
    }

    #[test]
    fn parse_star_of_sum() {
        let alphabet = ab();
        let e = Expr::parse("(a+b)*", &alphabet).unwrap();
        assert_eq!(
            e,
            Expr::star(Expr::plus(Expr::Letter(LetterId(0)), Expr::Letter(LetterId(1))))
        );
    }

    #[test]
    fn parse_top_sequence() {
        let alphabet = ab();
        let e = Expr::parse("top ; a ; top", &alphabet).unwrap();
        assert_eq!(
            e,
            Expr::dot(Expr::dot(Expr::Top, Expr::Letter(LetterId(0))), Expr::Top)
        );
    }

    #[test]
    fn juxtaposition_is_dot() {
        let alphabet = ab();
        let e = Expr::parse("@alpha a @beta", &alphabet).unwrap();
        assert_eq!(
            e,
            Expr::dot(
                Expr::dot(Expr::Atom(AtomId(0)), Expr::Letter(LetterId(0))),
                Expr::Atom(AtomId(1))
            )
        );
    }

    #[test]
    fn print_examples() {
        let alphabet = ab();
        let cases = [
            (Expr::star(Expr::Letter(LetterId(0))), "a*"),
            (Expr::plus(Expr::Zero, Expr::One), "0+1"),
            (Expr::dot(Expr::Top, Expr::Letter(LetterId(0))), "top;a"),
        ];
        for (e, want) in cases {
            assert_eq!(e.display(&alphabet).to_string(), want);
        }
    }

    #[test]
    fn print_parses_back() {
        let alphabet = ab();
        for text in [
            "(a+b)*",
            "a;(b;a)",
            "a;b;a",
            "a**",
            "(a;b)*+1",
            "top;a;top",
            "@alpha;(a+0)*;@beta",
            "a+(b+a)",
        ] {
            let e = Expr::parse(text, &alphabet).unwrap();
            let printed = e.display(&alphabet).to_string();
            let reparsed = Expr::parse(&printed, &alphabet).unwrap();
            assert_eq!(e, reparsed, "round-trip of {text} via {printed}");
            assert_eq!(printed, reparsed.display(&alphabet).to_string());
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let alphabet = ab();
        match Expr::parse("a + c", &alphabet) {
            Err(ParseError::UnknownIdent { pos: 4, name, .. }) => assert_eq!(name, "c"),
            other => panic!("expected unknown identifier, got {other:?}"),
        }
        match Expr::parse("a + ", &alphabet) {
            Err(ParseError::Syntax { pos: 4, .. }) => {}
            other => panic!("expected syntax error, got {other:?}"),
        }
        match Expr::parse("alpha", &alphabet) {
            Err(ParseError::UnknownIdent { hint, .. }) => assert!(hint.contains("@name")),
            other => panic!("expected hint about atoms, got {other:?}"),
        }
    }

    #[test]
    fn elaborate_single_test() {
        let alphabet = Alphabet::with_tests(["a"], ["t"]).unwrap();
        // Atoms are v0 (t false) and v1 (t true).
        let t = TestExpr::Var("t".into());
        let e = elaborate_test(&t, &alphabet).unwrap();
        assert_eq!(e, Expr::Atom(alphabet.atom("v1").unwrap()));
        let tautology = TestExpr::Or(
            Box::new(TestExpr::Var("t".into())),
            Box::new(TestExpr::Not(Box::new(TestExpr::Var("t".into())))),
        );
        let e = elaborate_test(&tautology, &alphabet).unwrap();
        assert_eq!(
            e,
            Expr::plus(Expr::Atom(AtomId(0)), Expr::Atom(AtomId(1)))
        );
    }

    #[test]
    fn elaborate_minterm() {
        let alphabet = Alphabet::with_tests(["a"], ["t1", "t2"]).unwrap();
        let t = TestExpr::And(
            Box::new(TestExpr::Var("t1".into())),
            Box::new(TestExpr::Not(Box::new(TestExpr::Var("t2".into())))),
        );
        let e = elaborate_test(&t, &alphabet).unwrap();
        assert_eq!(e, Expr::Atom(alphabet.atom("v10").unwrap()));
    }

    #[test]
    fn embedded_test_parses() {
        let alphabet = Alphabet::with_tests(["a"], ["t1", "t2"]).unwrap();
        let e = Expr::parse("[t1 & !t2];a", &alphabet).unwrap();
        assert_eq!(
            e,
            Expr::dot(Expr::Atom(alphabet.atom("v10").unwrap()), Expr::Letter(LetterId(0)))
        );
        let unsat = Expr::parse("[t1 & !t1]", &alphabet).unwrap();
        assert_eq!(unsat, Expr::Zero);
    }

    #[test]
    fn reduce_top_examples() {
        let alphabet = ab();
        let full = full_top(&alphabet);
        assert_eq!(full.display(&alphabet).to_string(), "(a+b+top)*");
        assert_eq!(reduce_top(&Expr::Top, &alphabet), full);
        let a = Expr::Letter(LetterId(0));
        assert_eq!(reduce_top(&a, &alphabet), a);
        let e = Expr::dot(a.clone(), Expr::Top);
        assert_eq!(reduce_top(&e, &alphabet), Expr::dot(a, full));
    }

    #[test]
    fn reduce_top_identity_on_top_free() {
        let alphabet = ab();
        let e = Expr::parse("(a;b+@alpha)*;1", &alphabet).unwrap();
        assert_eq!(reduce_top(&e, &alphabet), e);
    }

    #[test]
    fn reduce_top_size_linear() {
        let alphabet = ab();
        let e = Expr::parse("top;a;top", &alphabet).unwrap();
        let r = reduce_top(&e, &alphabet);
        assert!(r.size() <= e.size() * (2 * alphabet.sym_count()));
    }

    #[test]
    fn alphabet_validation() {
        assert_eq!(
            Alphabet::new(["a"], Vec::<String>::new()),
            Err(AlphabetError::EmptyAtoms)
        );
        assert_eq!(
            Alphabet::new(["top"], ["alpha"]),
            Err(AlphabetError::ReservedName("top".into()))
        );
        assert_eq!(
            Alphabet::new(["a"], ["a"]),
            Err(AlphabetError::DuplicateName("a".into()))
        );
        assert!(Alphabet::new(["a b"], ["alpha"]).is_err());
    }

    #[test]
    fn size_counts_nodes() {
        let alphabet = ab();
        let e = Expr::parse("(a+b)*", &alphabet).unwrap();
        assert_eq!(e.size(), 4);
        assert_eq!(Expr::Zero.size(), 1);
    }
}
