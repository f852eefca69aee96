//! RDF/XML reader and writer.
//!
//! The reader accepts the shapes OWL exports produce: an `rdf:RDF`
//! envelope holding `rdf:Description` or typed node elements, identified
//! by `rdf:about`, `rdf:ID` or `rdf:nodeID`, with property elements that
//! carry `rdf:resource`, `rdf:nodeID`, `rdf:datatype`, `xml:lang`,
//! property attributes, nested node elements, and `rdf:parseType="Resource"`.
//! The writer emits plain `rdf:Description` blocks and fails with
//! [`RdfError::UnserializableIri`] when a predicate cannot be split into a
//! namespace and an XML name.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use quick_xml::escape::{escape, unescape};
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::document::OntologyDocument;
use crate::error::RdfError;
use crate::term::{Iri, Literal, Node, Term, Triple};
use crate::turtle::resolve_relative;
use crate::vocab::{self, RDF_NS};

const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";

pub fn parse(text: &str) -> Result<OntologyDocument, RdfError> {
    XmlParser::new(text).run()
}

#[derive(Clone, Default)]
struct Scope {
    namespaces: BTreeMap<String, String>,
    lang: Option<String>,
    base: Option<Iri>,
}

struct XmlParser<'a> {
    reader: Reader<&'a [u8]>,
    src: &'a str,
    scopes: Vec<Scope>,
    doc: OntologyDocument,
    blank_counter: usize,
    blank_labels: BTreeMap<String, String>,
}

impl<'a> XmlParser<'a> {
    fn new(text: &'a str) -> XmlParser<'a> {
        let mut reader = Reader::from_str(text);
        reader.config_mut().expand_empty_elements = true;
        XmlParser {
            reader,
            src: text,
            scopes: vec![Scope::default()],
            doc: OntologyDocument::new(),
            blank_counter: 0,
            blank_labels: BTreeMap::new(),
        }
    }

    fn position(&self) -> (usize, usize) {
        let offset = (self.reader.buffer_position() as usize).min(self.src.len());
        let before = &self.src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
        (line, column)
    }

    fn err(&self, message: impl Into<String>) -> RdfError {
        let (line, column) = self.position();
        RdfError::syntax(line, column, message)
    }

    fn next_event(&mut self) -> Result<Event<'static>, RdfError> {
        match self.reader.read_event() {
            Ok(event) => Ok(event.into_owned()),
            Err(e) => Err(self.err(e.to_string())),
        }
    }

    fn run(mut self) -> Result<OntologyDocument, RdfError> {
        loop {
            match self.next_event()? {
                Event::Start(e) => {
                    let name = self.push_scope_and_resolve(&e)?;
                    if name == format!("{RDF_NS}RDF") {
                        if let Some(base) = self.scope().base.clone() {
                            self.doc.base_iri = Some(base);
                        }
                        self.parse_rdf_children()?;
                    } else {
                        self.parse_node_element_body(&e, &name)?;
                    }
                }
                Event::Eof => return Ok(self.doc),
                Event::Decl(_) | Event::Comment(_) | Event::DocType(_) | Event::PI(_) => {}
                Event::Text(t) => {
                    let raw = String::from_utf8_lossy(t.as_ref()).to_string();
                    if !raw.trim().is_empty() {
                        return Err(self.err("unexpected text outside an element"));
                    }
                }
                _ => return Err(self.err("unexpected content at document level")),
            }
        }
    }

    fn parse_rdf_children(&mut self) -> Result<(), RdfError> {
        loop {
            match self.next_event()? {
                Event::Start(e) => {
                    let name = self.push_scope_and_resolve(&e)?;
                    self.parse_node_element_body(&e, &name)?;
                }
                Event::End(_) => {
                    self.scopes.pop();
                    return Ok(());
                }
                Event::Text(t) => self.require_whitespace(&t)?,
                Event::Comment(_) | Event::PI(_) => {}
                Event::Eof => return Err(self.err("unclosed rdf:RDF element")),
                _ => return Err(self.err("unexpected content inside rdf:RDF")),
            }
        }
    }

    /// Parse a node element whose Start event has already been consumed and
    /// whose scope has been pushed. Returns the node it described.
    fn parse_node_element_body(&mut self, e: &BytesStart<'_>, name: &str) -> Result<Node, RdfError> {
        let mut subject: Option<Node> = None;
        let mut property_attrs: Vec<(Iri, String)> = Vec::new();

        for attr in e.attributes() {
            let attr = attr.map_err(|e| self.err(e.to_string()))?;
            let key = String::from_utf8_lossy(attr.key.as_ref()).to_string();
            if key == "xmlns" || key.starts_with("xmlns:") || key.starts_with("xml:") {
                continue;
            }
            let value = self.attr_value(&attr.value)?;
            let resolved = self.resolve_attr_name(&key)?;
            match resolved.as_deref() {
                Some(k) if k == format!("{RDF_NS}about") => {
                    subject = Some(Node::Iri(self.resolve_reference(&value)?));
                }
                Some(k) if k == format!("{RDF_NS}ID") => {
                    subject = Some(Node::Iri(self.resolve_reference(&format!("#{value}"))?));
                }
                Some(k) if k == format!("{RDF_NS}nodeID") => {
                    subject = Some(Node::Blank(self.user_blank(&value)));
                }
                Some(k) if k.starts_with(RDF_NS) => {
                    return Err(self.err(format!("unsupported attribute rdf:{}", &k[RDF_NS.len()..])));
                }
                Some(k) => {
                    property_attrs.push((Iri::new(k).map_err(|m| self.err(m))?, value));
                }
                None => {}
            }
        }

        let subject = subject.unwrap_or_else(|| Node::Blank(self.fresh_blank()));

        if name != format!("{RDF_NS}Description") {
            let type_iri = Iri::new(name).map_err(|m| self.err(m))?;
            self.doc
                .insert(Triple::new(subject.clone(), vocab::rdf::type_(), type_iri));
        }
        let lang = self.scope().lang.clone();
        for (predicate, value) in property_attrs {
            let literal = match &lang {
                Some(tag) => Literal::lang(value, tag),
                None => Literal::string(value),
            };
            self.doc
                .insert(Triple::new(subject.clone(), predicate, literal));
        }

        loop {
            match self.next_event()? {
                Event::Start(e) => {
                    let pred_name = self.push_scope_and_resolve(&e)?;
                    self.parse_property_element(&e, &pred_name, &subject)?;
                }
                Event::End(_) => {
                    self.scopes.pop();
                    return Ok(subject);
                }
                Event::Text(t) => self.require_whitespace(&t)?,
                Event::Comment(_) | Event::PI(_) => {}
                Event::Eof => return Err(self.err("unclosed node element")),
                _ => return Err(self.err("unexpected content in node element")),
            }
        }
    }

    fn parse_property_element(
        &mut self,
        e: &BytesStart<'_>,
        name: &str,
        subject: &Node,
    ) -> Result<(), RdfError> {
        let predicate = Iri::new(name).map_err(|m| self.err(m))?;
        let mut resource: Option<Iri> = None;
        let mut node_id: Option<String> = None;
        let mut datatype: Option<Iri> = None;
        let mut parse_type: Option<String> = None;

        for attr in e.attributes() {
            let attr = attr.map_err(|e| self.err(e.to_string()))?;
            let key = String::from_utf8_lossy(attr.key.as_ref()).to_string();
            if key == "xmlns" || key.starts_with("xmlns:") || key.starts_with("xml:") {
                continue;
            }
            let value = self.attr_value(&attr.value)?;
            let resolved = self.resolve_attr_name(&key)?;
            match resolved.as_deref() {
                Some(k) if k == format!("{RDF_NS}resource") => {
                    resource = Some(self.resolve_reference(&value)?);
                }
                Some(k) if k == format!("{RDF_NS}nodeID") => node_id = Some(value),
                Some(k) if k == format!("{RDF_NS}datatype") => {
                    datatype = Some(Iri::new(value).map_err(|m| self.err(m))?);
                }
                Some(k) if k == format!("{RDF_NS}parseType") => parse_type = Some(value),
                Some(k) => {
                    return Err(self.err(format!("unsupported attribute {k} on a property element")));
                }
                None => {}
            }
        }

        if let Some(kind) = parse_type {
            if kind != "Resource" {
                return Err(self.err(format!("rdf:parseType=\"{kind}\" is not supported")));
            }
            let inner = Node::Blank(self.fresh_blank());
            self.doc.insert(Triple::new(
                subject.clone(),
                predicate,
                Term::from(inner.clone()),
            ));
            loop {
                match self.next_event()? {
                    Event::Start(e) => {
                        let pred_name = self.push_scope_and_resolve(&e)?;
                        self.parse_property_element(&e, &pred_name, &inner)?;
                    }
                    Event::End(_) => {
                        self.scopes.pop();
                        return Ok(());
                    }
                    Event::Text(t) => self.require_whitespace(&t)?,
                    Event::Comment(_) | Event::PI(_) => {}
                    Event::Eof => return Err(self.err("unclosed property element")),
                    _ => return Err(self.err("unexpected content in property element")),
                }
            }
        }

        let mut text = String::new();
        let mut nested: Option<Node> = None;
        loop {
            match self.next_event()? {
                Event::Start(e) => {
                    if nested.is_some() || resource.is_some() || node_id.is_some() {
                        return Err(self.err("property element holds more than one object"));
                    }
                    let node_name = self.push_scope_and_resolve(&e)?;
                    nested = Some(self.parse_node_element_body(&e, &node_name)?);
                }
                Event::Text(t) => {
                    let raw = String::from_utf8_lossy(t.as_ref()).to_string();
                    let unescaped = unescape(&raw).map_err(|e| self.err(e.to_string()))?;
                    text.push_str(&unescaped);
                }
                Event::CData(t) => {
                    text.push_str(&String::from_utf8_lossy(t.as_ref()));
                }
                Event::GeneralRef(r) => {
                    let entity = String::from_utf8_lossy(r.as_ref()).to_string();
                    text.push(resolve_entity(&entity).ok_or_else(|| {
                        self.err(format!("unknown entity reference &{entity};"))
                    })?);
                }
                Event::Comment(_) | Event::PI(_) => {}
                Event::End(_) => break,
                Event::Eof => return Err(self.err("unclosed property element")),
                _ => return Err(self.err("unexpected content in property element")),
            }
        }

        let object: Term = if let Some(iri) = resource {
            if nested.is_some() || !text.trim().is_empty() {
                return Err(self.err("rdf:resource does not allow element content"));
            }
            iri.into()
        } else if let Some(label) = node_id {
            if nested.is_some() || !text.trim().is_empty() {
                return Err(self.err("rdf:nodeID does not allow element content"));
            }
            Node::Blank(self.user_blank(&label)).into()
        } else if let Some(node) = nested {
            if !text.trim().is_empty() {
                return Err(self.err("mixed text and element content"));
            }
            node.into()
        } else if let Some(dt) = datatype {
            Literal::typed(text, dt).map_err(|m| self.err(m))?.into()
        } else {
            match self.scope().lang.clone() {
                Some(tag) => Literal::lang(text, tag).into(),
                None => Literal::string(text).into(),
            }
        };

        self.scopes.pop();
        self.doc.insert(Triple::new(subject.clone(), predicate, object));
        Ok(())
    }

    // ---- names, scopes, helpers ----

    /// Push a scope for the element and return its expanded name.
    fn push_scope_and_resolve(&mut self, e: &BytesStart<'_>) -> Result<String, RdfError> {
        let mut scope = self.scope().clone();
        for attr in e.attributes() {
            let attr = attr.map_err(|e| self.err(e.to_string()))?;
            let key = String::from_utf8_lossy(attr.key.as_ref()).to_string();
            let value = self.attr_value(&attr.value)?;
            if key == "xmlns" {
                scope.namespaces.insert(String::new(), value);
            } else if let Some(prefix) = key.strip_prefix("xmlns:") {
                scope.namespaces.insert(prefix.to_string(), value);
            } else if key == "xml:lang" {
                scope.lang = if value.is_empty() {
                    None
                } else {
                    Some(value.to_lowercase())
                };
            } else if key == "xml:base" {
                scope.base = Some(Iri::new(value).map_err(|m| self.err(m))?);
            }
        }
        self.scopes.push(scope);

        let raw = String::from_utf8_lossy(e.name().as_ref()).to_string();
        let (prefix, local) = match raw.split_once(':') {
            Some((p, l)) => (p.to_string(), l.to_string()),
            None => (String::new(), raw),
        };
        let ns = self
            .scope()
            .namespaces
            .get(&prefix)
            .ok_or_else(|| self.err(format!("undeclared XML namespace prefix '{prefix}'")))?;
        Ok(format!("{ns}{local}"))
    }

    /// Expand an attribute name. Unprefixed attributes have no namespace
    /// and are skipped by the callers (None).
    fn resolve_attr_name(&self, key: &str) -> Result<Option<String>, RdfError> {
        let Some((prefix, local)) = key.split_once(':') else {
            return Ok(None);
        };
        if prefix == "xml" {
            return Ok(Some(format!("{XML_NS}{local}")));
        }
        let ns = self
            .scope()
            .namespaces
            .get(prefix)
            .ok_or_else(|| self.err(format!("undeclared XML namespace prefix '{prefix}'")))?;
        Ok(Some(format!("{ns}{local}")))
    }

    fn scope(&self) -> &Scope {
        self.scopes.last().expect("scope stack is never empty")
    }

    fn attr_value(&self, raw: &[u8]) -> Result<String, RdfError> {
        let s = String::from_utf8_lossy(raw).to_string();
        unescape(&s)
            .map(|c| c.to_string())
            .map_err(|e| self.err(e.to_string()))
    }

    fn resolve_reference(&self, value: &str) -> Result<Iri, RdfError> {
        if value.contains(':') {
            return Iri::new(value).map_err(|m| self.err(m));
        }
        let base = self
            .scope()
            .base
            .clone()
            .or_else(|| self.doc.base_iri.clone())
            .ok_or_else(|| self.err(format!("relative reference '{value}' without xml:base")))?;
        Ok(resolve_relative(&base, value))
    }

    fn fresh_blank(&mut self) -> String {
        self.blank_counter += 1;
        format!("g{}", self.blank_counter)
    }

    fn user_blank(&mut self, label: &str) -> String {
        if !self.blank_labels.contains_key(label) {
            self.blank_counter += 1;
            self.blank_labels
                .insert(label.to_string(), format!("u{}", self.blank_counter));
        }
        self.blank_labels[label].clone()
    }

    fn require_whitespace(&self, t: &quick_xml::events::BytesText<'_>) -> Result<(), RdfError> {
        let raw = String::from_utf8_lossy(t.as_ref());
        if raw.trim().is_empty() {
            Ok(())
        } else {
            Err(self.err("unexpected text between elements"))
        }
    }
}

fn resolve_entity(entity: &str) -> Option<char> {
    match entity {
        "amp" => Some('&'),
        "lt" => Some('<'),
        "gt" => Some('>'),
        "apos" => Some('\''),
        "quot" => Some('"'),
        _ => {
            let rest = entity.strip_prefix('#')?;
            let code = match rest.strip_prefix(['x', 'X']) {
                Some(hex) => u32::from_str_radix(hex, 16).ok()?,
                None => rest.parse().ok()?,
            };
            char::from_u32(code)
        }
    }
}

// ---- writer ----

/// Serialize as RDF/XML with one rdf:Description block per subject.
pub fn write(doc: &OntologyDocument) -> Result<String, RdfError> {
    let mut namespaces: BTreeSet<String> = BTreeSet::new();
    let mut splits: BTreeMap<&Iri, (String, String)> = BTreeMap::new();
    for triple in doc.triples() {
        if splits.contains_key(&triple.predicate) {
            continue;
        }
        let (ns, local) = split_for_xml(&triple.predicate)
            .ok_or_else(|| RdfError::UnserializableIri(triple.predicate.clone()))?;
        namespaces.insert(ns.clone());
        splits.insert(&triple.predicate, (ns, local));
    }

    let mut prefix_of: BTreeMap<String, String> = BTreeMap::new();
    prefix_of.insert(RDF_NS.to_string(), "rdf".to_string());
    let mut counter = 0;
    for ns in &namespaces {
        if prefix_of.contains_key(ns) {
            continue;
        }
        let reused = doc
            .prefix_map
            .iter()
            .find(|(p, iri)| {
                iri.as_str() == ns
                    && is_xml_name(p)
                    && *p != "rdf"
                    && *p != "xml"
                    && !prefix_of.values().any(|v| v == *p)
            })
            .map(|(p, _)| p.clone());
        let prefix = reused.unwrap_or_else(|| loop {
            counter += 1;
            let candidate = format!("ns{counter}");
            if !prefix_of.values().any(|v| v == &candidate) {
                break candidate;
            }
        });
        prefix_of.insert(ns.clone(), prefix);
    }

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<rdf:RDF");
    let mut decls: Vec<(&String, &String)> = prefix_of.iter().map(|(ns, p)| (p, ns)).collect();
    decls.sort();
    for (prefix, ns) in decls {
        let _ = write!(out, "\n    xmlns:{}=\"{}\"", prefix, escape(ns.as_str()));
    }
    out.push_str(">\n");

    let mut by_subject: BTreeMap<&Node, Vec<&Triple>> = BTreeMap::new();
    for triple in doc.triples() {
        by_subject.entry(&triple.subject).or_default().push(triple);
    }
    for (subject, triples) in by_subject {
        match subject {
            Node::Iri(iri) => {
                let _ = writeln!(out, "  <rdf:Description rdf:about=\"{}\">", escape(iri.as_str()));
            }
            Node::Blank(id) => {
                let _ = writeln!(out, "  <rdf:Description rdf:nodeID=\"{}\">", escape(id));
            }
        }
        for triple in triples {
            let (ns, local) = &splits[&triple.predicate];
            let qname = format!("{}:{}", prefix_of[ns], local);
            match &triple.object {
                Term::Iri(iri) => {
                    let _ = writeln!(out, "    <{qname} rdf:resource=\"{}\"/>", escape(iri.as_str()));
                }
                Term::Blank(id) => {
                    let _ = writeln!(out, "    <{qname} rdf:nodeID=\"{}\"/>", escape(id));
                }
                Term::Literal(lit) => {
                    let body = escape(lit.lexical());
                    if let Some(lang) = lit.language() {
                        let _ = writeln!(out, "    <{qname} xml:lang=\"{lang}\">{body}</{qname}>");
                    } else if *lit.datatype() == vocab::xsd::string() {
                        let _ = writeln!(out, "    <{qname}>{body}</{qname}>");
                    } else {
                        let _ = writeln!(
                            out,
                            "    <{qname} rdf:datatype=\"{}\">{body}</{qname}>",
                            escape(lit.datatype().as_str())
                        );
                    }
                }
            }
        }
        out.push_str("  </rdf:Description>\n");
    }
    out.push_str("</rdf:RDF>\n");
    Ok(out)
}

/// Split an IRI into a namespace part and a local part usable as an XML
/// element name. Returns None when no split yields a valid name.
fn split_for_xml(iri: &Iri) -> Option<(String, String)> {
    let s = iri.as_str();
    let bytes: Vec<char> = s.chars().collect();
    let mut cut = bytes.len();
    while cut > 0 {
        let c = bytes[cut - 1];
        if c.is_alphanumeric() || c == '_' || c == '-' || c == '.' {
            cut -= 1;
        } else {
            break;
        }
    }
    // the local part must start with a name start character
    let mut start = cut;
    while start < bytes.len() && !(bytes[start].is_alphabetic() || bytes[start] == '_') {
        start += 1;
    }
    if start >= bytes.len() || start == 0 {
        return None;
    }
    let ns: String = bytes[..start].iter().collect();
    let local: String = bytes[start..].iter().collect();
    if local.is_empty() {
        return None;
    }
    Some((ns, local))
}

fn is_xml_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
}
