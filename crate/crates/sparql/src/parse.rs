//! Recursive-descent parser for the SPARQL subset.
//!
//! Anything outside the subset fails loudly: known SPARQL 1.1 keywords
//! produce an "unsupported construct" error naming the keyword, everything
//! else a positioned parse error.

use owlbase_rdf::term::{Literal, Term};
use owlbase_rdf::Iri;

use crate::ast::{
    CompareOp, Comparison, Group, Operand, Query, TermPattern, TriplePattern, ValuesClause,
};
use crate::error::SparqlError;

/// Keywords of full SPARQL that the subset deliberately excludes.
const UNSUPPORTED: &[&str] = &[
    "PREFIX", "BASE", "ASK", "CONSTRUCT", "DESCRIBE", "OPTIONAL", "UNION", "MINUS", "GRAPH",
    "SERVICE", "BIND", "ORDER", "GROUP", "HAVING", "OFFSET", "REDUCED", "FROM", "EXISTS",
    "REGEX", "OPTIONS",
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Keyword(String),
    Var(String),
    Iri(String),
    Literal {
        lexical: String,
        lang: Option<String>,
        datatype: Option<String>,
    },
    Int(u64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Dot,
    Star,
    Eq,
    Ne,
    Lt,
    /// Only appears in prefixed names, which the subset rejects; kept as
    /// a token so the parser can name the enclosing construct instead of
    /// failing at the colon.
    Colon,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> SparqlError {
        SparqlError::parse(self.line, self.column, message)
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, SparqlError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            if self.peek() == Some('#') {
                while !matches!(self.peek(), None | Some('\n')) {
                    self.bump();
                }
                continue;
            }
            let (line, column) = (self.line, self.column);
            let Some(c) = self.peek() else {
                out.push(Spanned { tok: Tok::Eof, line, column });
                return Ok(out);
            };
            let tok = match c {
                '{' => {
                    self.bump();
                    Tok::LBrace
                }
                '}' => {
                    self.bump();
                    Tok::RBrace
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                ':' => {
                    self.bump();
                    Tok::Colon
                }
                '*' => {
                    self.bump();
                    Tok::Star
                }
                '=' => {
                    self.bump();
                    Tok::Eq
                }
                '<' => self.lex_angle()?,
                '!' => {
                    self.bump();
                    if self.peek() == Some('=') {
                        self.bump();
                        Tok::Ne
                    } else {
                        return Err(self.error("expected '=' after '!'"));
                    }
                }
                '?' | '$' => {
                    self.bump();
                    let name = self.lex_name();
                    if name.is_empty() {
                        return Err(self.error("empty variable name"));
                    }
                    Tok::Var(name)
                }
                '"' | '\'' => self.lex_string()?,
                c if c.is_ascii_digit() => {
                    let mut n: u64 = 0;
                    while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                        n = n
                            .saturating_mul(10)
                            .saturating_add(self.bump().unwrap() as u64 - '0' as u64);
                    }
                    Tok::Int(n)
                }
                c if c.is_alphabetic() => {
                    let word = self.lex_name();
                    Tok::Keyword(word.to_ascii_uppercase())
                }
                other => return Err(self.error(format!("unexpected character '{other}'"))),
            };
            out.push(Spanned { tok, line, column });
        }
    }

    /// '<' begins either an IRI reference or the less-than operator.
    /// IRI references never contain whitespace and always close on the
    /// same token, so scan ahead for '>' before any space.
    fn lex_angle(&mut self) -> Result<Tok, SparqlError> {
        let mut ahead = self.pos + 1;
        let mut is_iri = false;
        while let Some(&c) = self.chars.get(ahead) {
            if c == '>' {
                is_iri = true;
                break;
            }
            if c.is_whitespace() || c == '"' {
                break;
            }
            ahead += 1;
        }
        self.bump();
        if !is_iri {
            return Ok(Tok::Lt);
        }
        let mut iri = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(Tok::Iri(iri)),
                Some(c) => iri.push(c),
                None => return Err(self.error("unterminated IRI reference")),
            }
        }
    }

    fn lex_name(&mut self) -> String {
        let mut name = String::new();
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_' || c == '-') {
            name.push(self.bump().unwrap());
        }
        name
    }

    fn lex_string(&mut self) -> Result<Tok, SparqlError> {
        let quote = self.bump().unwrap();
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated string literal")),
                Some(c) if c == quote => break,
                Some('\\') => match self.bump() {
                    Some('t') => lexical.push('\t'),
                    Some('n') => lexical.push('\n'),
                    Some('r') => lexical.push('\r'),
                    Some('b') => lexical.push('\u{8}'),
                    Some('f') => lexical.push('\u{c}'),
                    Some('"') => lexical.push('"'),
                    Some('\'') => lexical.push('\''),
                    Some('\\') => lexical.push('\\'),
                    Some('u') | Some('U') => {
                        return Err(self.error("unicode escapes are not supported here"))
                    }
                    other => {
                        return Err(self.error(format!("invalid string escape {other:?}")))
                    }
                },
                Some(c) => lexical.push(c),
            }
        }
        let mut lang = None;
        let mut datatype = None;
        if self.peek() == Some('@') {
            self.bump();
            let tag = self.lex_name();
            if tag.is_empty() {
                return Err(self.error("empty language tag"));
            }
            lang = Some(tag);
        } else if self.peek() == Some('^') {
            self.bump();
            if self.bump() != Some('^') {
                return Err(self.error("expected '^^' before datatype IRI"));
            }
            match self.lex_angle()? {
                Tok::Iri(iri) => datatype = Some(iri),
                _ => return Err(self.error("expected datatype IRI after '^^'")),
            }
        }
        Ok(Tok::Literal { lexical, lang, datatype })
    }
}

pub fn parse_query(src: &str) -> Result<Query, SparqlError> {
    let tokens = Lexer::new(src).tokens()?;
    let mut parser = Parser { tokens, pos: 0 };
    let query = parser.query()?;
    parser.expect_eof()?;
    Ok(query)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn current(&self) -> &Spanned {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.current().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> SparqlError {
        let t = self.current();
        SparqlError::parse(t.line, t.column, message)
    }

    /// Raise the dedicated error when the word is a known SPARQL keyword
    /// outside the subset.
    fn check_unsupported(&self, word: &str) -> Result<(), SparqlError> {
        if UNSUPPORTED.contains(&word) {
            return Err(SparqlError::Unsupported {
                construct: word.to_owned(),
            });
        }
        Ok(())
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), SparqlError> {
        match &self.current().tok {
            Tok::Keyword(k) if k == kw => {
                self.bump();
                Ok(())
            }
            Tok::Keyword(k) => {
                let k = k.clone();
                self.check_unsupported(&k)?;
                Err(self.error_here(format!("expected {kw}, found {k}")))
            }
            _ => Err(self.error_here(format!("expected {kw}"))),
        }
    }

    fn expect_eof(&mut self) -> Result<(), SparqlError> {
        match &self.current().tok {
            Tok::Eof => Ok(()),
            Tok::Keyword(k) => {
                let k = k.clone();
                self.check_unsupported(&k)?;
                Err(self.error_here(format!("unexpected trailing {k}")))
            }
            _ => Err(self.error_here("unexpected trailing input")),
        }
    }

    fn query(&mut self) -> Result<Query, SparqlError> {
        self.expect_keyword("SELECT")?;
        let mut distinct = false;
        if matches!(&self.current().tok, Tok::Keyword(k) if k == "DISTINCT") {
            self.bump();
            distinct = true;
        }
        let mut projection = Vec::new();
        loop {
            match &self.current().tok {
                Tok::Var(v) => {
                    projection.push(v.clone());
                    self.bump();
                }
                Tok::Star if projection.is_empty() => {
                    self.bump();
                    break;
                }
                _ => break,
            }
        }
        if projection.is_empty() && !matches!(&self.tokens[self.pos - 1].tok, Tok::Star) {
            return Err(self.error_here("SELECT needs variables or *"));
        }
        self.expect_keyword("WHERE")?;
        let body = self.group()?;
        let mut limit = None;
        if matches!(&self.current().tok, Tok::Keyword(k) if k == "LIMIT") {
            self.bump();
            match self.bump().tok {
                Tok::Int(n) => limit = Some(n as usize),
                _ => return Err(self.error_here("LIMIT needs an integer")),
            }
        }
        Ok(Query { distinct, projection, body, limit })
    }

    fn group(&mut self) -> Result<Group, SparqlError> {
        if !matches!(self.current().tok, Tok::LBrace) {
            return Err(self.error_here("expected '{'"));
        }
        self.bump();
        let mut group = Group::default();
        loop {
            match &self.current().tok {
                Tok::RBrace => {
                    self.bump();
                    return Ok(group);
                }
                Tok::Eof => return Err(self.error_here("unexpected end of query in group")),
                Tok::Keyword(k) if k == "FILTER" => {
                    self.bump();
                    self.filter(&mut group)?;
                    self.eat_dot();
                }
                Tok::Keyword(k) if k == "VALUES" => {
                    self.bump();
                    if group.values.is_some() {
                        return Err(SparqlError::Unsupported {
                            construct: "multiple VALUES clauses".to_owned(),
                        });
                    }
                    group.values = Some(self.values_clause()?);
                    self.eat_dot();
                }
                Tok::Keyword(k) => {
                    let k = k.clone();
                    self.check_unsupported(&k)?;
                    return Err(self.error_here(format!("unexpected {k} in group")));
                }
                _ => {
                    let pattern = self.triple_pattern()?;
                    group.patterns.push(pattern);
                    self.eat_dot();
                }
            }
        }
    }

    fn eat_dot(&mut self) {
        if matches!(self.current().tok, Tok::Dot) {
            self.bump();
        }
    }

    fn filter(&mut self, group: &mut Group) -> Result<(), SparqlError> {
        if matches!(&self.current().tok, Tok::Keyword(k) if k == "NOT") {
            self.bump();
            match &self.current().tok {
                Tok::Keyword(k) if k == "EXISTS" => {
                    self.bump();
                }
                _ => return Err(self.error_here("expected EXISTS after NOT")),
            }
            group.not_exists.push(self.group()?);
            return Ok(());
        }
        if !matches!(self.current().tok, Tok::LParen) {
            return Err(self.error_here("expected '(' or NOT EXISTS after FILTER"));
        }
        self.bump();
        let lhs = self.operand()?;
        let op = match self.bump().tok {
            Tok::Eq => CompareOp::Eq,
            Tok::Ne => CompareOp::Ne,
            Tok::Lt => CompareOp::Lt,
            _ => return Err(self.error_here("expected =, != or < in FILTER")),
        };
        let rhs = self.operand()?;
        if !matches!(self.current().tok, Tok::RParen) {
            return Err(self.error_here("expected ')' closing FILTER"));
        }
        self.bump();
        group.filters.push(Comparison { lhs, op, rhs });
        Ok(())
    }

    fn operand(&mut self) -> Result<Operand, SparqlError> {
        match &self.current().tok {
            Tok::Keyword(k) if k == "STR" => {
                self.bump();
                if !matches!(self.current().tok, Tok::LParen) {
                    return Err(self.error_here("expected '(' after STR"));
                }
                self.bump();
                let var = match self.bump().tok {
                    Tok::Var(v) => v,
                    _ => return Err(self.error_here("STR takes a variable")),
                };
                if !matches!(self.current().tok, Tok::RParen) {
                    return Err(self.error_here("expected ')' after STR argument"));
                }
                self.bump();
                Ok(Operand::Str(var))
            }
            Tok::Keyword(k) => {
                let k = k.clone();
                self.check_unsupported(&k)?;
                Err(self.error_here(format!("unexpected {k} in FILTER")))
            }
            Tok::Var(v) => {
                let v = v.clone();
                self.bump();
                Ok(Operand::Var(v))
            }
            _ => Ok(Operand::Constant(self.term()?)),
        }
    }

    fn triple_pattern(&mut self) -> Result<TriplePattern, SparqlError> {
        let subject = self.term_pattern()?;
        let predicate = self.term_pattern()?;
        let object = self.term_pattern()?;
        Ok(TriplePattern { subject, predicate, object })
    }

    fn term_pattern(&mut self) -> Result<TermPattern, SparqlError> {
        match &self.current().tok {
            Tok::Var(v) => {
                let v = v.clone();
                self.bump();
                Ok(TermPattern::Var(v))
            }
            Tok::Keyword(k) => {
                let k = k.clone();
                self.check_unsupported(&k)?;
                if k == "A" {
                    return Err(SparqlError::Unsupported {
                        construct: "'a' type shorthand".to_owned(),
                    });
                }
                Err(self.error_here(format!("unexpected {k} in triple pattern")))
            }
            _ => Ok(match self.term()? {
                Term::Iri(iri) => TermPattern::Iri(iri),
                Term::Literal(lit) => TermPattern::Literal(lit),
                Term::Blank(_) => unreachable!("term() never returns blanks"),
            }),
        }
    }

    /// A constant term: IRI, string literal, or integer.
    fn term(&mut self) -> Result<Term, SparqlError> {
        let spanned = self.bump();
        match spanned.tok {
            Tok::Iri(raw) => {
                let iri = Iri::new(raw)
                    .map_err(|e| SparqlError::parse(spanned.line, spanned.column, e))?;
                Ok(Term::Iri(iri))
            }
            Tok::Literal { lexical, lang, datatype } => {
                let lit = match (lang, datatype) {
                    (Some(lang), _) => Literal::lang(lexical, lang),
                    (None, Some(dt)) => {
                        let dt = Iri::new(dt)
                            .map_err(|e| SparqlError::parse(spanned.line, spanned.column, e))?;
                        Literal::typed(lexical, dt)
                            .map_err(|e| SparqlError::parse(spanned.line, spanned.column, e))?
                    }
                    (None, None) => Literal::string(lexical),
                };
                Ok(Term::Literal(lit))
            }
            Tok::Int(n) => Ok(Term::Literal(
                Literal::typed(
                    n.to_string(),
                    Iri::from_static("http://www.w3.org/2001/XMLSchema#integer"),
                )
                .expect("integer literal is valid"),
            )),
            _ => Err(SparqlError::parse(
                spanned.line,
                spanned.column,
                "expected an IRI, literal, or variable",
            )),
        }
    }

    fn values_clause(&mut self) -> Result<ValuesClause, SparqlError> {
        match &self.current().tok {
            Tok::Var(v) => {
                let var = v.clone();
                self.bump();
                if !matches!(self.current().tok, Tok::LBrace) {
                    return Err(self.error_here("expected '{' after VALUES variable"));
                }
                self.bump();
                let mut rows = Vec::new();
                while !matches!(self.current().tok, Tok::RBrace) {
                    if matches!(self.current().tok, Tok::Eof) {
                        return Err(self.error_here("unterminated VALUES block"));
                    }
                    rows.push(vec![self.term()?]);
                }
                self.bump();
                Ok(ValuesClause { variables: vec![var], rows })
            }
            Tok::LParen => {
                self.bump();
                let mut variables = Vec::new();
                while let Tok::Var(v) = &self.current().tok {
                    variables.push(v.clone());
                    self.bump();
                }
                if !matches!(self.current().tok, Tok::RParen) {
                    return Err(self.error_here("expected ')' after VALUES variables"));
                }
                self.bump();
                if !matches!(self.current().tok, Tok::LBrace) {
                    return Err(self.error_here("expected '{' after VALUES variables"));
                }
                self.bump();
                let mut rows = Vec::new();
                while !matches!(self.current().tok, Tok::RBrace) {
                    if !matches!(self.current().tok, Tok::LParen) {
                        return Err(self.error_here("expected '(' opening a VALUES row"));
                    }
                    self.bump();
                    let mut row = Vec::new();
                    while !matches!(self.current().tok, Tok::RParen) {
                        row.push(self.term()?);
                    }
                    self.bump();
                    if row.len() != variables.len() {
                        return Err(self.error_here("VALUES row arity mismatch"));
                    }
                    rows.push(row);
                }
                self.bump();
                Ok(ValuesClause { variables, rows })
            }
            _ => Err(self.error_here("expected variable or '(' after VALUES")),
        }
    }
}
