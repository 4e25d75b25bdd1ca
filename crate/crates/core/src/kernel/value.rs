//! Tagged dynamic payloads exchanged between nodes.

use std::any::Any;
use std::fmt;
use std::sync::Arc;

/// Identifies a value kind (a belief space, an observation space, ...).
///
/// Tags are compared by string equality; the kernel checks them at every
/// operator boundary and never looks inside the payload.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag(Arc<str>);

impl Tag {
    pub fn new(name: impl AsRef<str>) -> Self {
        Tag(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tag({})", self.0)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Tag {
    fn from(s: &str) -> Self {
        Tag::new(s)
    }
}

/// Object-safe view of a payload: comparable and printable, otherwise opaque.
pub trait Payload: Any + fmt::Debug + Send + Sync {
    fn as_any(&self) -> &dyn Any;
    fn eq_payload(&self, other: &dyn Payload) -> bool;
}

impl<T> Payload for T
where
    T: Any + fmt::Debug + PartialEq + Send + Sync,
{
    fn as_any(&self) -> &dyn Any {
        self
    }

    fn eq_payload(&self, other: &dyn Payload) -> bool {
        other
            .as_any()
            .downcast_ref::<T>()
            .is_some_and(|o| self == o)
    }
}

/// An immutable tagged payload. Cloning is cheap (shared pointer).
#[derive(Clone)]
pub struct Value {
    tag: Tag,
    payload: Arc<dyn Payload>,
}

impl Value {
    pub fn new<T>(tag: impl Into<Tag>, payload: T) -> Self
    where
        T: Any + fmt::Debug + PartialEq + Send + Sync,
    {
        Value {
            tag: tag.into(),
            payload: Arc::new(payload),
        }
    }

    pub fn tag(&self) -> &Tag {
        &self.tag
    }

    pub fn downcast_ref<T: Any>(&self) -> Option<&T> {
        self.payload.as_any().downcast_ref::<T>()
    }

    /// Like [`Value::downcast_ref`] but reports a readable error naming the
    /// expected Rust type.
    pub fn expect_ref<T: Any>(&self) -> Result<&T, super::OperatorError> {
        self.downcast_ref::<T>().ok_or_else(|| {
            super::OperatorError::Payload(format!(
                "value tagged `{}` does not hold a {}",
                self.tag,
                std::any::type_name::<T>()
            ))
        })
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && self.payload.eq_payload(other.payload.as_ref())
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:?}", self.tag, self.payload)
    }
}

/// A multiset of values. Order follows edge declaration order and is
/// deterministic, but operators should not rely on it for meaning.
pub type ValueSet = Vec<Value>;
