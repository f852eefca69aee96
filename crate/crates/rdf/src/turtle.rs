//! Turtle parser and writer.
//!
//! Covers the Turtle constructs that OWL exports actually use: prefix and
//! base directives (both `@` and SPARQL forms), predicate-object lists,
//! the `a` keyword, all four string quoting forms with escapes, numeric
//! and boolean shorthand, anonymous and labeled blank nodes, and
//! collections. Errors carry the line and column of the offending token.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::document::OntologyDocument;
use crate::error::RdfError;
use crate::term::{Iri, Literal, Node, Term, Triple};
use crate::vocab;

pub fn parse(text: &str) -> Result<OntologyDocument, RdfError> {
    Parser::new(text).run()
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    doc: OntologyDocument,
    blank_counter: usize,
    // user labels remapped to document-unique ids so they can never
    // collide with the ids we mint for [] and ( ) nodes
    blank_labels: BTreeMap<String, String>,
}

impl Parser {
    fn new(text: &str) -> Parser {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            doc: OntologyDocument::new(),
            blank_counter: 0,
            blank_labels: BTreeMap::new(),
        }
    }

    fn run(mut self) -> Result<OntologyDocument, RdfError> {
        loop {
            self.skip_ws();
            if self.at_end() {
                return Ok(self.doc);
            }
            if self.try_directive()? {
                continue;
            }
            self.parse_triples()?;
        }
    }

    // ---- character machinery ----

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
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

    fn err(&self, message: impl Into<String>) -> RdfError {
        RdfError::syntax(self.line, self.column, message)
    }

    fn expect(&mut self, c: char) -> Result<(), RdfError> {
        match self.peek() {
            Some(found) if found == c => {
                self.bump();
                Ok(())
            }
            Some(found) => Err(self.err(format!("expected '{c}', found '{found}'"))),
            None => Err(self.err(format!("expected '{c}', found end of input"))),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    /// True if the upcoming input is `word` followed by a non-name character.
    fn at_keyword(&self, word: &str) -> bool {
        let mut offset = 0;
        for expected in word.chars() {
            match self.peek_at(offset) {
                Some(c) if c.eq_ignore_ascii_case(&expected) => offset += 1,
                _ => return false,
            }
        }
        match self.peek_at(offset) {
            None => true,
            Some(c) => !c.is_alphanumeric() && c != '_' && c != '-' && c != ':',
        }
    }

    fn consume_word(&mut self, word: &str) {
        for _ in word.chars() {
            self.bump();
        }
    }

    // ---- directives ----

    fn try_directive(&mut self) -> Result<bool, RdfError> {
        if self.peek() == Some('@') {
            if self.at_keyword("@prefix") {
                self.consume_word("@prefix");
                self.parse_prefix()?;
                self.skip_ws();
                self.expect('.')?;
                return Ok(true);
            }
            if self.at_keyword("@base") {
                self.consume_word("@base");
                self.parse_base()?;
                self.skip_ws();
                self.expect('.')?;
                return Ok(true);
            }
            return Err(self.err("unknown directive"));
        }
        if self.at_keyword("PREFIX") {
            self.consume_word("PREFIX");
            self.parse_prefix()?;
            return Ok(true);
        }
        if self.at_keyword("BASE") {
            self.consume_word("BASE");
            self.parse_base()?;
            return Ok(true);
        }
        Ok(false)
    }

    fn parse_prefix(&mut self) -> Result<(), RdfError> {
        self.skip_ws();
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if c.is_whitespace() {
                return Err(self.err("prefix name must end with ':'"));
            }
            name.push(c);
            self.bump();
        }
        self.expect(':')?;
        self.skip_ws();
        let iri = self.parse_iri_ref()?;
        self.doc.prefix_map.insert(name, iri);
        Ok(())
    }

    fn parse_base(&mut self) -> Result<(), RdfError> {
        self.skip_ws();
        let iri = self.parse_iri_ref()?;
        self.doc.base_iri = Some(iri);
        Ok(())
    }

    // ---- triples ----

    fn parse_triples(&mut self) -> Result<(), RdfError> {
        let subject = if self.peek() == Some('[') {
            let node = self.parse_blank_node_property_list()?;
            self.skip_ws();
            // a bare "[ ... ] ." statement list is allowed
            if self.peek() == Some('.') {
                self.bump();
                return Ok(());
            }
            node
        } else {
            self.parse_subject()?
        };
        self.parse_predicate_object_list(&subject)?;
        self.skip_ws();
        self.expect('.')?;
        Ok(())
    }

    fn parse_subject(&mut self) -> Result<Node, RdfError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Node::Iri(self.parse_iri_ref()?)),
            Some('_') => self.parse_blank_label(),
            Some('(') => self.parse_collection().map(|t| match t {
                Term::Iri(iri) => Node::Iri(iri),
                Term::Blank(b) => Node::Blank(b),
                Term::Literal(_) => unreachable!("collections are nodes"),
            }),
            Some(_) => Ok(Node::Iri(self.parse_prefixed_name()?)),
            None => Err(self.err("expected subject, found end of input")),
        }
    }

    fn parse_predicate_object_list(&mut self, subject: &Node) -> Result<(), RdfError> {
        loop {
            self.skip_ws();
            let predicate = self.parse_predicate()?;
            loop {
                self.skip_ws();
                let object = self.parse_object()?;
                self.doc
                    .insert(Triple::new(subject.clone(), predicate.clone(), object));
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            if self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
                // dangling ';' before '.' is permitted
                if matches!(self.peek(), Some('.') | Some(']')) {
                    return Ok(());
                }
            } else {
                return Ok(());
            }
        }
    }

    fn parse_predicate(&mut self) -> Result<Iri, RdfError> {
        // the type shorthand is lowercase only, unlike the directives
        if self.peek() == Some('a')
            && !matches!(self.peek_at(1), Some(c) if c.is_alphanumeric() || c == '_' || c == '-' || c == ':')
        {
            self.bump();
            return Ok(vocab::rdf::type_());
        }
        match self.peek() {
            Some('<') => self.parse_iri_ref(),
            Some(_) => self.parse_prefixed_name(),
            None => Err(self.err("expected predicate, found end of input")),
        }
    }

    fn parse_object(&mut self) -> Result<Term, RdfError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.parse_iri_ref()?)),
            Some('_') => Ok(self.parse_blank_label()?.into()),
            Some('[') => Ok(self.parse_blank_node_property_list()?.into()),
            Some('(') => self.parse_collection(),
            Some('"') | Some('\'') => Ok(Term::Literal(self.parse_string_literal()?)),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => {
                Ok(Term::Literal(self.parse_numeric_literal()?))
            }
            Some(_) if self.at_keyword("true") => {
                self.consume_word("true");
                Ok(Term::Literal(self.boolean("true")))
            }
            Some(_) if self.at_keyword("false") => {
                self.consume_word("false");
                Ok(Term::Literal(self.boolean("false")))
            }
            Some(_) => Ok(Term::Iri(self.parse_prefixed_name()?)),
            None => Err(self.err("expected object, found end of input")),
        }
    }

    fn boolean(&self, lexical: &str) -> Literal {
        Literal::typed(lexical, vocab::xsd::boolean()).expect("boolean datatype")
    }

    // ---- blank nodes and collections ----

    fn fresh_blank(&mut self) -> String {
        self.blank_counter += 1;
        format!("g{}", self.blank_counter)
    }

    fn parse_blank_label(&mut self) -> Result<Node, RdfError> {
        self.expect('_')?;
        self.expect(':')?;
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' || c == '.' {
                // a trailing '.' terminates the statement, not the label
                if c == '.' && !matches!(self.peek_at(1), Some(n) if n.is_alphanumeric() || n == '_') {
                    break;
                }
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if label.is_empty() {
            return Err(self.err("blank node label must not be empty"));
        }
        if !self.blank_labels.contains_key(&label) {
            self.blank_counter += 1;
            let id = format!("u{}", self.blank_counter);
            self.blank_labels.insert(label.clone(), id);
        }
        Ok(Node::Blank(self.blank_labels[&label].clone()))
    }

    fn parse_blank_node_property_list(&mut self) -> Result<Node, RdfError> {
        self.expect('[')?;
        let node = Node::Blank(self.fresh_blank());
        self.skip_ws();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(node);
        }
        self.parse_predicate_object_list(&node)?;
        self.skip_ws();
        self.expect(']')?;
        Ok(node)
    }

    fn parse_collection(&mut self) -> Result<Term, RdfError> {
        self.expect('(')?;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() == Some(')') {
                self.bump();
                break;
            }
            if self.at_end() {
                return Err(self.err("unterminated collection"));
            }
            items.push(self.parse_object()?);
        }
        if items.is_empty() {
            return Ok(Term::Iri(vocab::rdf::nil()));
        }
        let mut head = Term::Iri(vocab::rdf::nil());
        for item in items.into_iter().rev() {
            let cell = Node::Blank(self.fresh_blank());
            self.doc
                .insert(Triple::new(cell.clone(), vocab::rdf::first(), item));
            self.doc
                .insert(Triple::new(cell.clone(), vocab::rdf::rest(), head));
            head = cell.into();
        }
        Ok(head)
    }

    // ---- IRIs ----

    fn parse_iri_ref(&mut self) -> Result<Iri, RdfError> {
        let (start_line, start_col) = (self.line, self.column);
        self.expect('<')?;
        let mut value = String::new();
        loop {
            match self.peek() {
                Some('>') => {
                    self.bump();
                    break;
                }
                Some('\n') | None => {
                    return Err(RdfError::syntax(
                        start_line,
                        start_col,
                        "unterminated IRI reference",
                    ));
                }
                Some('\\') => {
                    self.bump();
                    match self.peek() {
                        Some('u') | Some('U') => {
                            let c = self.parse_unicode_escape()?;
                            value.push(c);
                        }
                        _ => return Err(self.err("invalid escape in IRI")),
                    }
                }
                Some(c) => {
                    value.push(c);
                    self.bump();
                }
            }
        }
        self.resolve_iri(&value)
    }

    fn resolve_iri(&self, value: &str) -> Result<Iri, RdfError> {
        if value.contains(':') {
            return Iri::new(value).map_err(|e| self.err(e));
        }
        let base = self
            .doc
            .base_iri
            .as_ref()
            .ok_or_else(|| self.err(format!("relative IRI <{value}> without a base")))?;
        Ok(resolve_relative(base, value))
    }

    fn parse_prefixed_name(&mut self) -> Result<Iri, RdfError> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if c.is_alphanumeric() || c == '_' || c == '-' || c == '.' {
                prefix.push(c);
                self.bump();
            } else {
                return Err(self.err(format!("unexpected character '{c}' in prefixed name")));
            }
        }
        self.expect(':')?;
        let mut local = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' || c == '%' {
                local.push(c);
                self.bump();
            } else if c == '.' {
                // '.' is part of the local name only when followed by a name char
                match self.peek_at(1) {
                    Some(n) if n.is_alphanumeric() || n == '_' || n == '-' => {
                        local.push(c);
                        self.bump();
                    }
                    _ => break,
                }
            } else if c == '\\' {
                // PN_LOCAL_ESC
                self.bump();
                match self.bump() {
                    Some(esc) => local.push(esc),
                    None => return Err(self.err("dangling escape in local name")),
                }
            } else {
                break;
            }
        }
        let namespace = self
            .doc
            .prefix_map
            .get(&prefix)
            .ok_or_else(|| self.err(format!("undeclared prefix '{prefix}:'")))?;
        Iri::new(format!("{}{}", namespace.as_str(), local)).map_err(|e| self.err(e))
    }

    // ---- literals ----

    fn parse_string_literal(&mut self) -> Result<Literal, RdfError> {
        let lexical = self.parse_string_body()?;
        match self.peek() {
            Some('@') => {
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        tag.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if tag.is_empty() {
                    return Err(self.err("empty language tag"));
                }
                Ok(Literal::lang(lexical, tag))
            }
            Some('^') => {
                self.bump();
                self.expect('^')?;
                let datatype = match self.peek() {
                    Some('<') => self.parse_iri_ref()?,
                    _ => self.parse_prefixed_name()?,
                };
                if datatype == vocab::rdf::lang_string() {
                    return Err(self.err("rdf:langString literals need a language tag"));
                }
                Literal::typed(lexical, datatype).map_err(|e| self.err(e))
            }
            _ => Ok(Literal::string(lexical)),
        }
    }

    fn parse_string_body(&mut self) -> Result<String, RdfError> {
        let quote = self.peek().expect("caller checked quote");
        let long = self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote);
        self.bump();
        if long {
            self.bump();
            self.bump();
        } else if self.peek() == Some(quote) {
            // empty short string
            self.bump();
            return Ok(String::new());
        }
        let (start_line, start_col) = (self.line, self.column);
        let mut out = String::new();
        loop {
            match self.peek() {
                None => {
                    return Err(RdfError::syntax(start_line, start_col, "unterminated string"));
                }
                Some('\n') if !long => {
                    return Err(RdfError::syntax(start_line, start_col, "unterminated string"));
                }
                Some('\\') => {
                    self.bump();
                    let c = match self.peek() {
                        Some('t') => '\t',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('b') => '\u{8}',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') | Some('U') => {
                            let c = self.parse_unicode_escape()?;
                            out.push(c);
                            continue;
                        }
                        _ => return Err(self.err("invalid string escape")),
                    };
                    self.bump();
                    out.push(c);
                }
                Some(c) if c == quote => {
                    if long {
                        if self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
                            self.bump();
                            self.bump();
                            self.bump();
                            return Ok(out);
                        }
                        out.push(c);
                        self.bump();
                    } else {
                        self.bump();
                        return Ok(out);
                    }
                }
                Some(c) => {
                    out.push(c);
                    self.bump();
                }
            }
        }
    }

    fn parse_unicode_escape(&mut self) -> Result<char, RdfError> {
        let kind = self.bump().expect("caller checked u/U");
        let len = if kind == 'u' { 4 } else { 8 };
        let mut code = 0u32;
        for _ in 0..len {
            let c = self
                .peek()
                .ok_or_else(|| self.err("truncated unicode escape"))?;
            let digit = c
                .to_digit(16)
                .ok_or_else(|| self.err("invalid hex digit in unicode escape"))?;
            code = code * 16 + digit;
            self.bump();
        }
        char::from_u32(code).ok_or_else(|| self.err("escape is not a valid code point"))
    }

    fn parse_numeric_literal(&mut self) -> Result<Literal, RdfError> {
        let mut lexical = String::new();
        if matches!(self.peek(), Some('+') | Some('-')) {
            lexical.push(self.bump().unwrap());
        }
        let mut saw_dot = false;
        let mut saw_exp = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                lexical.push(c);
                self.bump();
            } else if c == '.' && !saw_dot && !saw_exp {
                // a '.' not followed by a digit ends the statement instead
                match self.peek_at(1) {
                    Some(n) if n.is_ascii_digit() => {
                        saw_dot = true;
                        lexical.push(c);
                        self.bump();
                    }
                    _ => break,
                }
            } else if (c == 'e' || c == 'E') && !saw_exp {
                saw_exp = true;
                lexical.push(c);
                self.bump();
                if matches!(self.peek(), Some('+') | Some('-')) {
                    lexical.push(self.bump().unwrap());
                }
            } else {
                break;
            }
        }
        if lexical.is_empty() || !lexical.chars().any(|c| c.is_ascii_digit()) {
            return Err(self.err("malformed numeric literal"));
        }
        let datatype = if saw_exp {
            vocab::xsd::double()
        } else if saw_dot {
            vocab::xsd::decimal()
        } else {
            vocab::xsd::integer()
        };
        Literal::typed(lexical, datatype).map_err(|e| self.err(e))
    }
}

/// Minimal RFC 3986 reference resolution, sufficient for fragment and
/// relative-path references against an absolute base.
pub(crate) fn resolve_relative(base: &Iri, reference: &str) -> Iri {
    let base_str = base.as_str();
    if reference.is_empty() {
        return base.clone();
    }
    if let Some(fragment) = reference.strip_prefix('#') {
        let stem = match base_str.find('#') {
            Some(idx) => &base_str[..idx],
            None => base_str,
        };
        return checked_iri(format!("{stem}#{fragment}"));
    }
    if reference.starts_with("//") {
        let scheme_end = base_str.find(':').unwrap_or(base_str.len());
        return checked_iri(format!("{}:{}", &base_str[..scheme_end], reference));
    }
    if let Some(rest) = reference.strip_prefix('/') {
        // replace the whole path
        let authority_end = authority_end(base_str);
        return checked_iri(format!("{}/{}", &base_str[..authority_end], rest));
    }
    // relative path: replace the last segment
    let cut = base_str.rfind('/').map(|i| i + 1).unwrap_or(base_str.len());
    checked_iri(format!("{}{}", &base_str[..cut], reference))
}

fn checked_iri(value: String) -> Iri {
    Iri::new(value).unwrap_or_else(|_| Iri::from_static("urn:invalid"))
}

fn authority_end(base: &str) -> usize {
    if let Some(after_scheme) = base.find("://").map(|i| i + 3) {
        match base[after_scheme..].find('/') {
            Some(idx) => after_scheme + idx,
            None => base.len(),
        }
    } else {
        base.len()
    }
}

// ---- writer ----

/// Serialize a document as Turtle, reusing its prefix map where possible.
pub fn write(doc: &OntologyDocument) -> String {
    let mut out = String::new();
    for (prefix, iri) in &doc.prefix_map {
        let _ = writeln!(out, "@prefix {}: <{}> .", prefix, escape_iri(iri.as_str()));
    }
    if !doc.prefix_map.is_empty() {
        out.push('\n');
    }

    // group by subject for readable output
    let mut by_subject: BTreeMap<&Node, Vec<&Triple>> = BTreeMap::new();
    for triple in doc.triples() {
        by_subject.entry(&triple.subject).or_default().push(triple);
    }
    for (subject, triples) in by_subject {
        let _ = write!(out, "{}", node_text(subject, doc));
        let mut first = true;
        let mut last_predicate: Option<&Iri> = None;
        for triple in triples {
            if last_predicate == Some(&triple.predicate) {
                out.push_str(" ,\n        ");
            } else {
                if !first {
                    out.push_str(" ;\n    ");
                } else {
                    out.push(' ');
                    first = false;
                }
                let _ = write!(out, "{} ", predicate_text(&triple.predicate, doc));
                last_predicate = Some(&triple.predicate);
            }
            let _ = write!(out, "{}", term_text(&triple.object, doc));
        }
        out.push_str(" .\n");
    }
    out
}

fn predicate_text(iri: &Iri, doc: &OntologyDocument) -> String {
    if *iri == vocab::rdf::type_() {
        return "a".to_string();
    }
    iri_text(iri, doc)
}

fn iri_text(iri: &Iri, doc: &OntologyDocument) -> String {
    let s = iri.as_str();
    let mut best: Option<(&String, &Iri)> = None;
    for (prefix, ns) in &doc.prefix_map {
        if s.starts_with(ns.as_str()) {
            let local = &s[ns.as_str().len()..];
            if is_safe_local(local) {
                match best {
                    Some((_, cur)) if cur.as_str().len() >= ns.as_str().len() => {}
                    _ => best = Some((prefix, ns)),
                }
            }
        }
    }
    match best {
        Some((prefix, ns)) => format!("{}:{}", prefix, &s[ns.as_str().len()..]),
        None => format!("<{}>", escape_iri(s)),
    }
}

fn is_safe_local(local: &str) -> bool {
    !local.is_empty()
        && !local.starts_with('.')
        && !local.ends_with('.')
        && local
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
}

fn node_text(node: &Node, doc: &OntologyDocument) -> String {
    match node {
        Node::Iri(iri) => iri_text(iri, doc),
        Node::Blank(id) => format!("_:{id}"),
    }
}

fn term_text(term: &Term, doc: &OntologyDocument) -> String {
    match term {
        Term::Iri(iri) => iri_text(iri, doc),
        Term::Blank(id) => format!("_:{id}"),
        Term::Literal(lit) => literal_text(lit, doc),
    }
}

fn literal_text(lit: &Literal, doc: &OntologyDocument) -> String {
    let body = format!("\"{}\"", escape_string(lit.lexical()));
    if let Some(lang) = lit.language() {
        return format!("{body}@{lang}");
    }
    if *lit.datatype() == vocab::xsd::string() {
        return body;
    }
    format!("{body}^^{}", iri_text(lit.datatype(), doc))
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn escape_iri(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\' => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c if (c as u32) <= 0x20 => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn empty_document_has_no_triples() {
        let doc = parse("").unwrap();
        assert_eq!(doc.triple_count(), 0);
        let doc = parse("# only a comment\n").unwrap();
        assert_eq!(doc.triple_count(), 0);
    }

    #[test]
    fn single_triple_with_absolute_iris() {
        let doc = parse("<http://e/s> <http://e/p> <http://e/o> .").unwrap();
        assert_eq!(doc.triple_count(), 1);
        assert!(doc.contains(&Triple::new(
            Node::Iri(iri("http://e/s")),
            iri("http://e/p"),
            Term::Iri(iri("http://e/o")),
        )));
    }

    #[test]
    fn prefixes_and_type_shorthand() {
        let doc = parse(
            "@prefix ex: <http://e/> .\n\
             PREFIX owl: <http://www.w3.org/2002/07/owl#>\n\
             ex:Thing a owl:Class .",
        )
        .unwrap();
        assert!(doc.contains(&Triple::new(
            Node::Iri(iri("http://e/Thing")),
            vocab::rdf::type_(),
            Term::Iri(vocab::owl::class()),
        )));
        assert_eq!(doc.prefix_map.len(), 2);
    }

    #[test]
    fn base_resolves_relative_iris() {
        let doc = parse("@base <http://e/dir/> .\n<s> <#p> <../o> .").unwrap();
        let t = doc.triples().next().unwrap();
        assert_eq!(t.subject, Node::Iri(iri("http://e/dir/s")));
        assert_eq!(t.predicate, iri("http://e/dir/#p"));
        assert_eq!(t.object, Term::Iri(iri("http://e/dir/../o")));
    }

    #[test]
    fn predicate_and_object_lists() {
        let doc = parse(
            "@prefix ex: <http://e/> .\n\
             ex:s ex:p ex:a , ex:b ;\n\
                  ex:q \"v\" ; .",
        )
        .unwrap();
        assert_eq!(doc.triple_count(), 3);
    }

    #[test]
    fn string_forms_and_escapes() {
        let doc = parse(
            r#"@prefix ex: <http://e/> .
ex:s ex:a "plain" ;
     ex:b 'single' ;
     ex:c """long
line""" ;
     ex:d '''other''' ;
     ex:e "tab\there\n" ;
     ex:f "A\U00000042" .
"#,
        )
        .unwrap();
        let values: Vec<String> = doc
            .triples()
            .filter_map(|t| t.object.as_literal().map(|l| l.lexical().to_string()))
            .collect();
        assert!(values.contains(&"plain".to_string()));
        assert!(values.contains(&"single".to_string()));
        assert!(values.contains(&"long\nline".to_string()));
        assert!(values.contains(&"tab\there\n".to_string()));
        assert!(values.contains(&"AB".to_string()));
    }

    #[test]
    fn language_and_datatype_literals() {
        let doc = parse(
            "@prefix ex: <http://e/> .\n\
             @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\
             ex:s ex:p \"hello\"@EN ; ex:q \"5\"^^xsd:integer .",
        )
        .unwrap();
        let mut literals: Vec<&Literal> =
            doc.triples().filter_map(|t| t.object.as_literal()).collect();
        literals.sort();
        assert_eq!(literals[0].lexical(), "5");
        assert_eq!(*literals[0].datatype(), vocab::xsd::integer());
        // language tags are normalized to lowercase
        assert_eq!(literals[1].language(), Some("en"));
    }

    #[test]
    fn numeric_and_boolean_shorthand() {
        let doc = parse(
            "@prefix ex: <http://e/> .\n\
             ex:s ex:a 42 ; ex:b -3.5 ; ex:c 1.0e3 ; ex:d true .",
        )
        .unwrap();
        let datatypes: Vec<Iri> = doc
            .triples()
            .filter_map(|t| t.object.as_literal().map(|l| l.datatype().clone()))
            .collect();
        assert!(datatypes.contains(&vocab::xsd::integer()));
        assert!(datatypes.contains(&vocab::xsd::decimal()));
        assert!(datatypes.contains(&vocab::xsd::double()));
        assert!(datatypes.contains(&vocab::xsd::boolean()));
    }

    #[test]
    fn blank_nodes_and_property_lists() {
        let doc = parse(
            "@prefix ex: <http://e/> .\n\
             _:x ex:p ex:o .\n\
             ex:s ex:q _:x .\n\
             ex:s ex:r [ ex:inner \"v\" ] .",
        )
        .unwrap();
        assert_eq!(doc.triple_count(), 4);
        // both _:x occurrences resolve to the same id
        let subject_blank = doc
            .triples()
            .find_map(|t| match (&t.subject, &t.object) {
                (Node::Blank(id), Term::Iri(_)) => Some(id.clone()),
                _ => None,
            })
            .unwrap();
        assert!(doc.triples().any(
            |t| matches!(&t.object, Term::Blank(id) if *id == subject_blank)
        ));
    }

    #[test]
    fn collections_expand_to_first_rest_chains() {
        let doc = parse(
            "@prefix ex: <http://e/> .\n\
             ex:s ex:p (ex:a ex:b) .\n\
             ex:t ex:q () .",
        )
        .unwrap();
        // 1 link triple + 2 cells of first/rest, plus the empty list triple
        assert_eq!(doc.triple_count(), 6);
        assert!(doc.contains(&Triple::new(
            Node::Iri(iri("http://e/t")),
            iri("http://e/q"),
            Term::Iri(vocab::rdf::nil()),
        )));
        let firsts = doc
            .triples()
            .filter(|t| t.predicate == vocab::rdf::first())
            .count();
        assert_eq!(firsts, 2);
    }

    #[test]
    fn unterminated_iri_reports_position() {
        let err = parse("<http://e/s> <http://e/p\n<http://e/o> .").unwrap_err();
        match err {
            RdfError::Syntax { line, message, .. } => {
                assert_eq!(line, 1);
                assert!(message.contains("unterminated IRI"), "{message}");
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn undeclared_prefix_is_an_error() {
        let err = parse("ex:s ex:p ex:o .").unwrap_err();
        assert!(err.to_string().contains("undeclared prefix"), "{err}");
    }

    #[test]
    fn unterminated_string_is_an_error() {
        let err = parse("@prefix ex: <http://e/> .\nex:s ex:p \"oops .").unwrap_err();
        assert!(err.to_string().contains("unterminated string"), "{err}");
    }

    #[test]
    fn duplicate_statements_collapse() {
        let doc = parse(
            "@prefix ex: <http://e/> .\n\
             ex:s ex:p ex:o .\n\
             ex:s ex:p ex:o .",
        )
        .unwrap();
        assert_eq!(doc.triple_count(), 1);
    }

    #[test]
    fn writer_round_trips_a_small_document() {
        let source = "@prefix ex: <http://e/> .\n\
                      ex:s a ex:T ; ex:p \"v\"@en , 42 ; ex:q [ ex:r ex:o ] .";
        let doc = parse(source).unwrap();
        let text = write(&doc);
        let reparsed = parse(&text).unwrap();
        assert!(crate::document::isomorphic(&doc, &reparsed), "{text}");
    }
}
