//! Three-valued logic: `0`, `1` and the unset value `*`.

use core::fmt;

/// A value in three-valued strategy logic. `Star` means "no decision yet";
/// it is compatible with everything under the join.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TriVal {
    False,
    True,
    Star,
}

impl TriVal {
    pub fn from_bool(b: bool) -> TriVal {
        if b {
            TriVal::True
        } else {
            TriVal::False
        }
    }

    /// Concrete boolean value, if set.
    pub fn as_bool(self) -> Option<bool> {
        match self {
            TriVal::False => Some(false),
            TriVal::True => Some(true),
            TriVal::Star => None,
        }
    }

    pub fn is_star(self) -> bool {
        self == TriVal::Star
    }

    /// Two values are consistent unless one is `0` and the other `1`.
    pub fn consistent(self, other: TriVal) -> bool {
        match (self.as_bool(), other.as_bool()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    /// Pointwise join: `*` is the identity, equal values are idempotent,
    /// and a `0`/`1` clash has no join.
    pub fn join(self, other: TriVal) -> Option<TriVal> {
        match (self, other) {
            (TriVal::Star, v) => Some(v),
            (v, TriVal::Star) => Some(v),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for TriVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriVal::False => write!(f, "0"),
            TriVal::True => write!(f, "1"),
            TriVal::Star => write!(f, "*"),
        }
    }
}
