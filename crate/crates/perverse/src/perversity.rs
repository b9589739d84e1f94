//! Perversity functions and their arithmetic.
//!
//! A perversity assigns an integer to each codimension `k >= 1` subject to
//! the growth condition `p(k) <= p(k+1) <= p(k) + 1`.  We store the values on
//! `1..=n` and extend to all integers: flat above `n`, and below `1` either
//! with slope one (`p(k) = p(1) + k - 1`, the default) or flat
//! (`p(k) = p(1)`).  The flat lower extension arises exactly as the dual of a
//! slope-one perversity, and vice versa, which makes dualization an
//! involution on the nose.
//!
//! Superperversities are those with `p(2) > 0`; they escape the classical
//! growth range at codimension two, which is what makes the sheaf-theoretic
//! axioms sensitive to the chosen stratification.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PerversityError {
    #[error("perversity needs at least one value")]
    Empty,
    #[error("growth condition violated at codimension {k}: {prev} -> {next} (allowed: {prev} or {})", prev + 1)]
    Growth { k: usize, prev: i64, next: i64 },
    #[error("unknown perversity preset `{0}` (expected zero, top, or ultra)")]
    UnknownPreset(String),
}

/// Extended integer used for perversity inverses and dimension bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    NegInf,
    Finite(i64),
    PosInf,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::PosInf => write!(f, "+inf"),
        }
    }
}

/// Serialized as a plain integer, or the strings `"-inf"` / `"+inf"`.
impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::NegInf => s.serialize_str("-inf"),
            Bound::Finite(v) => s.serialize_i64(*v),
            Bound::PosInf => s.serialize_str("+inf"),
        }
    }
}

impl Bound {
    /// `n - self`, flipping infinities.
    pub fn sub_from(self, n: i64) -> Bound {
        match self {
            Bound::NegInf => Bound::PosInf,
            Bound::Finite(v) => Bound::Finite(n - v),
            Bound::PosInf => Bound::NegInf,
        }
    }

    /// Shift a finite value; infinities absorb.
    pub fn offset(self, d: i64) -> Bound {
        match self {
            Bound::Finite(v) => Bound::Finite(v + d),
            other => other,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Bound::Finite(_))
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Bound::Finite(v)),
            Raw::Str(s) if s == "inf" || s == "+inf" => Ok(Bound::PosInf),
            Raw::Str(s) if s == "-inf" => Ok(Bound::NegInf),
            Raw::Str(s) => Err(D::Error::custom(format!("invalid bound `{s}`"))),
        }
    }
}

/// How a perversity continues below codimension one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LowerExtension {
    /// `p(k) = p(1) + k - 1` for `k <= 1`.
    #[default]
    Slope1,
    /// `p(k) = p(1)` for `k <= 1`.
    Flat,
}

/// Exclusive classification by the values at codimensions one and two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerversityClass {
    /// `p(2) < 0`
    Sub,
    /// `p(1) = p(2) = 0`
    Traditional,
    /// `p(2) > 0`
    Super,
    /// `p(2) = 0`, `p(1) != 0`
    Other,
}

/// A perversity with values stored on codimensions `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Perversity {
    values: Vec<i64>,
    #[serde(default, skip_serializing_if = "is_default_lower")]
    lower: LowerExtension,
}

fn is_default_lower(l: &LowerExtension) -> bool {
    *l == LowerExtension::Slope1
}

impl<'de> Deserialize<'de> for Perversity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Values(Vec<i64>),
            Full { values: Vec<i64>, #[serde(default)] lower: LowerExtension },
        }
        let (values, lower) = match Raw::deserialize(d)? {
            Raw::Values(v) => (v, LowerExtension::Slope1),
            Raw::Full { values, lower } => (values, lower),
        };
        Perversity::with_lower(values, lower).map_err(D::Error::custom)
    }
}

impl fmt::Display for Perversity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl Perversity {
    /// Values indexed by codimension `1..=n`, with the slope-one lower
    /// extension.  Validates the growth condition.
    pub fn new(values: Vec<i64>) -> Result<Perversity, PerversityError> {
        Perversity::with_lower(values, LowerExtension::Slope1)
    }

    pub fn with_lower(
        values: Vec<i64>,
        lower: LowerExtension,
    ) -> Result<Perversity, PerversityError> {
        if values.is_empty() {
            return Err(PerversityError::Empty);
        }
        for k in 1..values.len() {
            let (prev, next) = (values[k - 1], values[k]);
            if next < prev || next > prev + 1 {
                return Err(PerversityError::Growth { k: k + 1, prev, next });
            }
        }
        Ok(Perversity { values, lower })
    }

    /// Values indexed from codimension two (the classical convention); the
    /// codimension-one value is back-filled as `p(2) - 1`.
    pub fn from_codim2(values: Vec<i64>) -> Result<Perversity, PerversityError> {
        if values.is_empty() {
            return Err(PerversityError::Empty);
        }
        let mut full = Vec::with_capacity(values.len() + 1);
        full.push(values[0] - 1);
        full.extend(values);
        Perversity::new(full)
    }

    /// The zero perversity `p(k) = 0` on `1..=n`.
    pub fn zero(n: usize) -> Perversity {
        Perversity { values: vec![0; n.max(1)], lower: LowerExtension::Slope1 }
    }

    /// The top perversity `p(k) = k - 2`.
    pub fn top(n: usize) -> Perversity {
        Perversity {
            values: (1..=n.max(1) as i64).map(|k| k - 2).collect(),
            lower: LowerExtension::Slope1,
        }
    }

    /// The maximal superperversity `p(k) = k - 1`.
    pub fn ultra(n: usize) -> Perversity {
        Perversity {
            values: (1..=n.max(1) as i64).map(|k| k - 1).collect(),
            lower: LowerExtension::Slope1,
        }
    }

    /// Parse a preset name (`zero`, `top`, `ultra`) at length `n`.
    pub fn preset(name: &str, n: usize) -> Result<Perversity, PerversityError> {
        match name {
            "zero" => Ok(Perversity::zero(n)),
            "top" => Ok(Perversity::top(n)),
            "ultra" => Ok(Perversity::ultra(n)),
            other => Err(PerversityError::UnknownPreset(other.to_string())),
        }
    }

    /// Number of stored codimensions.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn lower(&self) -> LowerExtension {
        self.lower
    }

    /// Evaluate the extension at any integer codimension.
    pub fn at(&self, k: i64) -> i64 {
        let n = self.values.len() as i64;
        if k >= n {
            self.values[(n - 1) as usize]
        } else if k >= 1 {
            self.values[(k - 1) as usize]
        } else {
            match self.lower {
                LowerExtension::Slope1 => self.values[0] + (k - 1),
                LowerExtension::Flat => self.values[0],
            }
        }
    }

    pub fn classify(&self) -> PerversityClass {
        let p2 = self.at(2);
        if p2 > 0 {
            PerversityClass::Super
        } else if p2 < 0 {
            PerversityClass::Sub
        } else if self.at(1) == 0 {
            PerversityClass::Traditional
        } else {
            PerversityClass::Other
        }
    }

    pub fn is_superperversity(&self) -> bool {
        self.classify() == PerversityClass::Super
    }

    /// The dual perversity `q(k) = k - 2 - p(k)`, with the lower extension
    /// flavor flipped so that dualization is an involution.
    pub fn dual(&self) -> Perversity {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| (i as i64 + 1) - 2 - v)
            .collect();
        let lower = match self.lower {
            LowerExtension::Slope1 => LowerExtension::Flat,
            LowerExtension::Flat => LowerExtension::Slope1,
        };
        Perversity { values, lower }
    }

    /// Galois inverse: the least codimension `c` with `p(c) >= j`, as a
    /// `Bound` (`-inf` when the lower extension already satisfies `j`,
    /// `inf` when even the flat top never reaches `j`).
    ///
    /// Satisfies `p(k) >= j  <=>  k >= inverse(j)` for all integers `k`.
    pub fn inverse(&self, j: i64) -> Bound {
        let n = self.values.len() as i64;
        if self.values[(n - 1) as usize] < j {
            return Bound::PosInf;
        }
        if self.at(1) >= j {
            match self.lower {
                // p(k) = p(1) + k - 1 >= j first holds at k = j - p(1) + 1.
                LowerExtension::Slope1 => return Bound::Finite(j - self.values[0] + 1),
                LowerExtension::Flat => return Bound::NegInf,
            }
        }
        for k in 2..=n {
            if self.at(k) >= j {
                return Bound::Finite(k);
            }
        }
        unreachable!("p(n) >= j guarantees a finite inverse")
    }

    /// The least codimension where the dual perversity is non-negative, i.e.
    /// where `p(k) <= k - 2` first holds.  Below this threshold the
    /// perversity exceeds the classical range.
    pub fn codim_threshold(&self) -> Bound {
        self.dual().inverse(0)
    }
}
