//! Well-known vocabulary IRIs.

use crate::term::Iri;

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";

/// Namespaces treated as structural vocabulary rather than domain content.
pub const STRUCTURAL_NAMESPACES: [&str; 4] = [RDF_NS, RDFS_NS, OWL_NS, XSD_NS];

pub mod rdf {
    use super::*;

    pub fn type_() -> Iri {
        Iri::from_static("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
    }
    pub fn lang_string() -> Iri {
        Iri::from_static("http://www.w3.org/1999/02/22-rdf-syntax-ns#langString")
    }
    pub fn first() -> Iri {
        Iri::from_static("http://www.w3.org/1999/02/22-rdf-syntax-ns#first")
    }
    pub fn rest() -> Iri {
        Iri::from_static("http://www.w3.org/1999/02/22-rdf-syntax-ns#rest")
    }
    pub fn nil() -> Iri {
        Iri::from_static("http://www.w3.org/1999/02/22-rdf-syntax-ns#nil")
    }
}

pub mod rdfs {
    use super::*;

    pub fn label() -> Iri {
        Iri::from_static("http://www.w3.org/2000/01/rdf-schema#label")
    }
    pub fn comment() -> Iri {
        Iri::from_static("http://www.w3.org/2000/01/rdf-schema#comment")
    }
    pub fn sub_class_of() -> Iri {
        Iri::from_static("http://www.w3.org/2000/01/rdf-schema#subClassOf")
    }
    pub fn class() -> Iri {
        Iri::from_static("http://www.w3.org/2000/01/rdf-schema#Class")
    }
}

pub mod owl {
    use super::*;

    pub fn class() -> Iri {
        Iri::from_static("http://www.w3.org/2002/07/owl#Class")
    }
    pub fn object_property() -> Iri {
        Iri::from_static("http://www.w3.org/2002/07/owl#ObjectProperty")
    }
    pub fn annotation_property() -> Iri {
        Iri::from_static("http://www.w3.org/2002/07/owl#AnnotationProperty")
    }
    pub fn datatype_property() -> Iri {
        Iri::from_static("http://www.w3.org/2002/07/owl#DatatypeProperty")
    }
    pub fn named_individual() -> Iri {
        Iri::from_static("http://www.w3.org/2002/07/owl#NamedIndividual")
    }
    pub fn ontology() -> Iri {
        Iri::from_static("http://www.w3.org/2002/07/owl#Ontology")
    }
}

pub mod xsd {
    use super::*;

    pub fn string() -> Iri {
        Iri::from_static("http://www.w3.org/2001/XMLSchema#string")
    }
    pub fn integer() -> Iri {
        Iri::from_static("http://www.w3.org/2001/XMLSchema#integer")
    }
    pub fn decimal() -> Iri {
        Iri::from_static("http://www.w3.org/2001/XMLSchema#decimal")
    }
    pub fn double() -> Iri {
        Iri::from_static("http://www.w3.org/2001/XMLSchema#double")
    }
    pub fn boolean() -> Iri {
        Iri::from_static("http://www.w3.org/2001/XMLSchema#boolean")
    }
    pub fn date_time() -> Iri {
        Iri::from_static("http://www.w3.org/2001/XMLSchema#dateTime")
    }
}
