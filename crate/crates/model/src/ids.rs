//! Wikibase entity and property identifiers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::MapError;

macro_rules! wikibase_id {
    ($name:ident, $letter:literal, $doc:literal) => {
        #[doc = $doc]
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(u64);

        impl $name {
            /// Build from the numeric part, which must be at least 1.
            pub fn new(n: u64) -> $name {
                assert!(n >= 1, "identifier numbers start at 1");
                $name(n)
            }

            pub fn number(self) -> u64 {
                self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{}", $letter, self.0)
            }
        }

        impl FromStr for $name {
            type Err = MapError;

            /// Accepts only the canonical form: the letter followed by a
            /// positive integer without leading zeros.
            fn from_str(s: &str) -> Result<$name, MapError> {
                let malformed = || MapError::MalformedId { raw: s.to_string() };
                let digits = s.strip_prefix($letter).ok_or_else(malformed)?;
                if digits.is_empty() || digits.starts_with('0') {
                    return Err(malformed());
                }
                let n: u64 = digits.parse().map_err(|_| malformed())?;
                Ok($name(n))
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<$name, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

wikibase_id!(EntityId, "Q", "An item identifier: \"Q\" plus a positive integer.");
wikibase_id!(PropertyId, "P", "A property identifier: \"P\" plus a positive integer.");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms_round_trip() {
        for raw in ["Q1", "Q42", "Q100000"] {
            let id: EntityId = raw.parse().unwrap();
            assert_eq!(id.to_string(), raw);
        }
        let p: PropertyId = "P7".parse().unwrap();
        assert_eq!(p.number(), 7);
    }

    #[test]
    fn malformed_forms_are_rejected() {
        for raw in ["Q0", "Q01", "P", "Q-3", "X5", "q5", "Q5x", ""] {
            assert!(raw.parse::<EntityId>().is_err(), "{raw} should not parse");
        }
        assert!("Q5".parse::<PropertyId>().is_err());
    }

    #[test]
    fn serde_uses_the_string_form() {
        let id = EntityId::new(9);
        assert_eq!(serde_json::to_string(&id).unwrap(), "\"Q9\"");
        let back: EntityId = serde_json::from_str("\"Q9\"").unwrap();
        assert_eq!(back, id);
    }
}
