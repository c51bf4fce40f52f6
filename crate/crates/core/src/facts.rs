//! Ground-fact instances.
//!
//! An instance is a set of period-terminated ground atoms such as
//! `edge(a,b).` or `root.`; `%` starts a comment running to the end of
//! the line. Variables, rules and nested terms are rejected.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A ground term: an identifier (`[a-z][A-Za-z0-9_]*`) or a non-negative
/// integer literal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constant(String);

impl Constant {
    pub fn new(text: impl Into<String>) -> Result<Self, InvalidConstant> {
        let text = text.into();
        if is_identifier(&text) || is_integer(&text) {
            Ok(Constant(text))
        } else {
            Err(InvalidConstant(text))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Constant {
    type Err = InvalidConstant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Constant::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not a valid constant")]
pub struct InvalidConstant(pub String);

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_integer(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// A predicate name together with its arity, e.g. `edge/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredicateKey {
    pub name: String,
    pub arity: usize,
}

impl PredicateKey {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        PredicateKey {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for PredicateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl FromStr for PredicateKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, arity) = s
            .rsplit_once('/')
            .ok_or_else(|| format!("expected `name/arity`, got `{s}`"))?;
        if !is_identifier(name) {
            return Err(format!("`{name}` is not a valid predicate name"));
        }
        let arity = arity
            .parse()
            .map_err(|_| format!("`{arity}` is not a valid arity"))?;
        Ok(PredicateKey::new(name, arity))
    }
}

/// A ground atom `predicate(arg, ...)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fact {
    predicate: String,
    args: Vec<Constant>,
}

impl Fact {
    pub fn new(predicate: impl Into<String>, args: Vec<Constant>) -> Result<Self, InvalidConstant> {
        let predicate = predicate.into();
        if !is_identifier(&predicate) {
            return Err(InvalidConstant(predicate));
        }
        Ok(Fact { predicate, args })
    }

    /// Builds a fact from string arguments, validating each of them.
    pub fn parse_args(predicate: &str, args: &[&str]) -> Result<Self, InvalidConstant> {
        let args = args
            .iter()
            .map(|a| Constant::new(*a))
            .collect::<Result<Vec<_>, _>>()?;
        Fact::new(predicate, args)
    }

    pub fn predicate(&self) -> &str {
        &self.predicate
    }

    pub fn args(&self) -> &[Constant] {
        &self.args
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn key(&self) -> PredicateKey {
        PredicateKey::new(self.predicate.clone(), self.args.len())
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, arg) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                f.write_str(arg.as_str())?;
            }
            f.write_str(")")?;
        }
        f.write_str(".")
    }
}

/// A set of ground facts with a predicate/arity index.
///
/// Facts keep their first-appearance order; equality is set equality.
#[derive(Clone, Debug, Default)]
pub struct Instance {
    facts: Vec<Fact>,
    seen: HashSet<Fact>,
    index: HashMap<PredicateKey, Vec<usize>>,
}

impl Instance {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a fact, returning `false` if it was already present.
    pub fn insert(&mut self, fact: Fact) -> bool {
        if self.seen.contains(&fact) {
            return false;
        }
        self.index
            .entry(fact.key())
            .or_default()
            .push(self.facts.len());
        self.seen.insert(fact.clone());
        self.facts.push(fact);
        true
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.seen.contains(fact)
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Facts with the given predicate and arity, in first-appearance order.
    pub fn facts_of(&self, predicate: &str, arity: usize) -> Vec<&Fact> {
        match self.index.get(&PredicateKey::new(predicate, arity)) {
            Some(ids) => ids.iter().map(|&i| &self.facts[i]).collect(),
            None => Vec::new(),
        }
    }

    /// Every predicate/arity pair occurring in the instance.
    pub fn predicates(&self) -> impl Iterator<Item = &PredicateKey> {
        self.index.keys()
    }

    /// True if some fact uses `name` with any arity.
    pub fn mentions_predicate(&self, name: &str) -> bool {
        self.index.keys().any(|k| k.name == name)
    }
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.seen == other.seen
    }
}

impl Eq for Instance {}

impl Extend<Fact> for Instance {
    fn extend<T: IntoIterator<Item = Fact>>(&mut self, iter: T) {
        for fact in iter {
            self.insert(fact);
        }
    }
}

impl FromIterator<Fact> for Instance {
    fn from_iter<T: IntoIterator<Item = Fact>>(iter: T) -> Self {
        let mut instance = Instance::new();
        instance.extend(iter);
        instance
    }
}

/// One fact per line, in first-appearance order.
impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fact in &self.facts {
            writeln!(f, "{fact}")?;
        }
        Ok(())
    }
}

impl FromStr for Instance {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_instance(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("variable `{0}` is not allowed in an instance")]
    Variable(String),
    #[error("expected a predicate name, found {0}")]
    ExpectedPredicate(String),
    #[error("empty argument")]
    EmptyArgument,
    #[error("unclosed argument list")]
    UnclosedArguments,
    #[error("unbalanced parentheses")]
    UnbalancedParens,
    #[error("nested terms are not allowed in an instance")]
    NestedTerm,
    #[error("fact is not terminated by `.`")]
    Unterminated,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Integer(String),
    Variable(String),
    LParen,
    RParen,
    Comma,
    Period,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) | Token::Integer(s) | Token::Variable(s) => format!("`{s}`"),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Comma => "`,`".into(),
            Token::Period => "`.`".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line, column, kind }
    }

    /// Next token with its starting position, or `None` at end of input.
    fn next_token(&mut self) -> Result<Option<(Token, usize, usize)>, ParseError> {
        loop {
            match self.chars.peek() {
                None => return Ok(None),
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some(_) => break,
            }
        }
        let (line, column) = (self.line, self.column);
        let c = self.bump().expect("peeked");
        let token = match c {
            '(' => Token::LParen,
            ')' => Token::RParen,
            ',' => Token::Comma,
            '.' => Token::Period,
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut text = String::from(c);
                while let Some(&n) = self.chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' {
                        text.push(n);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if c.is_ascii_lowercase() {
                    Token::Ident(text)
                } else if is_integer(&text) {
                    Token::Integer(text)
                } else if c.is_ascii_uppercase() || c == '_' {
                    Token::Variable(text)
                } else {
                    // digits followed by letters, e.g. `12ab`
                    return Err(self.error(line, column, ParseErrorKind::UnexpectedChar(c)));
                }
            }
            other => return Err(self.error(line, column, ParseErrorKind::UnexpectedChar(other))),
        };
        Ok(Some((token, line, column)))
    }
}

/// Parses an instance made of ground facts.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut instance = Instance::new();

    while let Some((token, line, column)) = lexer.next_token()? {
        let predicate = match token {
            Token::Ident(name) => name,
            Token::Variable(name) => {
                return Err(lexer.error(line, column, ParseErrorKind::Variable(name)))
            }
            Token::RParen => return Err(lexer.error(line, column, ParseErrorKind::UnbalancedParens)),
            other => {
                return Err(lexer.error(
                    line,
                    column,
                    ParseErrorKind::ExpectedPredicate(other.describe()),
                ))
            }
        };

        let mut args = Vec::new();
        let eof = |lx: &Lexer<'_>, kind| lx.error(lx.line, lx.column, kind);
        match lexer.next_token()? {
            None => return Err(eof(&lexer, ParseErrorKind::Unterminated)),
            Some((Token::Period, _, _)) => {}
            Some((Token::LParen, _, _)) => {
                loop {
                    match lexer.next_token()? {
                        None => return Err(eof(&lexer, ParseErrorKind::UnclosedArguments)),
                        Some((Token::Ident(t) | Token::Integer(t), _, _)) => {
                            args.push(Constant(t));
                        }
                        Some((Token::Variable(v), l, c)) => {
                            return Err(lexer.error(l, c, ParseErrorKind::Variable(v)))
                        }
                        Some((Token::Comma | Token::RParen, l, c)) => {
                            return Err(lexer.error(l, c, ParseErrorKind::EmptyArgument))
                        }
                        Some((Token::LParen, l, c)) => {
                            return Err(lexer.error(l, c, ParseErrorKind::NestedTerm))
                        }
                        Some((Token::Period, l, c)) => {
                            return Err(lexer.error(l, c, ParseErrorKind::UnclosedArguments))
                        }
                    }
                    match lexer.next_token()? {
                        None => return Err(eof(&lexer, ParseErrorKind::UnclosedArguments)),
                        Some((Token::Comma, _, _)) => continue,
                        Some((Token::RParen, _, _)) => break,
                        Some((Token::LParen, l, c)) => {
                            return Err(lexer.error(l, c, ParseErrorKind::NestedTerm))
                        }
                        Some((_, l, c)) => {
                            return Err(lexer.error(l, c, ParseErrorKind::UnclosedArguments))
                        }
                    }
                }
                match lexer.next_token()? {
                    None => return Err(eof(&lexer, ParseErrorKind::Unterminated)),
                    Some((Token::Period, _, _)) => {}
                    Some((Token::RParen, l, c)) => {
                        return Err(lexer.error(l, c, ParseErrorKind::UnbalancedParens))
                    }
                    Some((_, l, c)) => return Err(lexer.error(l, c, ParseErrorKind::Unterminated)),
                }
            }
            Some((Token::RParen, l, c)) => {
                return Err(lexer.error(l, c, ParseErrorKind::UnbalancedParens))
            }
            Some((_, l, c)) => return Err(lexer.error(l, c, ParseErrorKind::Unterminated)),
        }
        instance.insert(Fact { predicate, args });
    }
    Ok(instance)
}
