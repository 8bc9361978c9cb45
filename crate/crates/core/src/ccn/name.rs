//! Hierarchical content names.
//!
//! A name is an ordered list of non-empty byte-string components. Chunked
//! content carries a trailing segment component rendered as `s<decimal>`,
//! e.g. `/video/movie/s17`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// One name component. Never empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component(Box<[u8]>);

impl Component {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Self, NameError> {
        let bytes = bytes.into();
        if bytes.is_empty() {
            return Err(NameError::EmptyComponent);
        }
        Ok(Component(bytes.into_boxed_slice()))
    }

    pub fn segment(number: u64) -> Self {
        Component(format!("s{number}").into_bytes().into_boxed_slice())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// The segment number, if this component is a canonical `s<decimal>`.
    pub fn as_segment(&self) -> Option<u64> {
        let digits = self.0.strip_prefix(b"s")?;
        if digits.is_empty() || !digits.iter().all(u8::is_ascii_digit) {
            return None;
        }
        if digits.len() > 1 && digits[0] == b'0' {
            return None;
        }
        std::str::from_utf8(digits).ok()?.parse().ok()
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.0.iter() {
            if b.is_ascii_alphanumeric() || b"-._~+=:@,".contains(&b) {
                write!(f, "{}", b as char)?;
            } else {
                write!(f, "%{b:02X}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("name must have at least one component")]
    Empty,
    #[error("name components must be non-empty")]
    EmptyComponent,
    #[error("name must start with '/'")]
    MissingLeadingSlash,
    #[error("invalid percent escape in name component")]
    BadEscape,
}

/// A hierarchical content name. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name {
    components: Arc<[Component]>,
}

impl Name {
    pub fn from_components(components: Vec<Component>) -> Result<Self, NameError> {
        if components.is_empty() {
            return Err(NameError::Empty);
        }
        Ok(Name { components: components.into() })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// This name extended by one segment component.
    pub fn with_segment(&self, number: u64) -> Name {
        let mut v = self.components.to_vec();
        v.push(Component::segment(number));
        Name { components: v.into() }
    }

    pub fn segment(&self) -> Option<u64> {
        self.components.last().and_then(Component::as_segment)
    }

    /// True when `self` is a component-wise prefix of `other` (or equal).
    pub fn is_prefix_of(&self, other: &Name) -> bool {
        self.len() <= other.len() && other.components[..self.len()] == self.components[..]
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.components.iter() {
            write!(f, "/{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Name({self})")
    }
}

impl FromStr for Name {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rest = s.strip_prefix('/').ok_or(NameError::MissingLeadingSlash)?;
        let rest = rest.strip_suffix('/').unwrap_or(rest);
        if rest.is_empty() {
            return Err(NameError::Empty);
        }
        let components = rest
            .split('/')
            .map(|raw| Component::new(unescape(raw)?))
            .collect::<Result<Vec<_>, _>>()?;
        Name::from_components(components)
    }
}

fn unescape(raw: &str) -> Result<Vec<u8>, NameError> {
    let bytes = raw.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            let hex = bytes.get(i + 1..i + 3).ok_or(NameError::BadEscape)?;
            let hex = std::str::from_utf8(hex).map_err(|_| NameError::BadEscape)?;
            out.push(u8::from_str_radix(hex, 16).map_err(|_| NameError::BadEscape)?);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    Ok(out)
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Name {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_segment_as_s_decimal() {
        let n: Name = "/video/movie".parse().unwrap();
        let seg = n.with_segment(17);
        assert_eq!(seg.to_string(), "/video/movie/s17");
        assert_eq!(seg.segment(), Some(17));
        assert_eq!(n.segment(), None);
    }

    #[test]
    fn rejects_malformed_text() {
        assert_eq!("video".parse::<Name>(), Err(NameError::MissingLeadingSlash));
        assert_eq!("/".parse::<Name>(), Err(NameError::Empty));
        assert_eq!("/a//b".parse::<Name>(), Err(NameError::EmptyComponent));
        assert_eq!("/a/%G1".parse::<Name>(), Err(NameError::BadEscape));
    }

    #[test]
    fn non_canonical_segments_are_plain_components() {
        let n: Name = "/a/s007".parse().unwrap();
        assert_eq!(n.segment(), None);
        assert_eq!(n.to_string(), "/a/s007");
        let n: Name = "/a/s".parse().unwrap();
        assert_eq!(n.segment(), None);
    }

    #[test]
    fn prefix_relation() {
        let a: Name = "/a".parse().unwrap();
        let ab: Name = "/a/b".parse().unwrap();
        assert!(a.is_prefix_of(&ab));
        assert!(ab.is_prefix_of(&ab));
        assert!(!ab.is_prefix_of(&a));
        let abc: Name = "/ab".parse().unwrap();
        assert!(!a.is_prefix_of(&abc));
    }

    fn arb_component() -> impl Strategy<Value = Component> {
        prop::collection::vec(any::<u8>(), 1..6).prop_map(|b| Component::new(b).unwrap())
    }

    proptest! {
        #[test]
        fn text_round_trip(comps in prop::collection::vec(arb_component(), 1..5), seg in prop::option::of(any::<u64>())) {
            let base = Name::from_components(comps).unwrap();
            let name = match seg { Some(s) => base.with_segment(s), None => base };
            let parsed: Name = name.to_string().parse().unwrap();
            prop_assert_eq!(&parsed, &name);
            if let Some(s) = seg {
                prop_assert_eq!(parsed.segment(), Some(s));
            }
        }
    }
}
