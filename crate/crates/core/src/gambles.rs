//! Possibility spaces, gambles, gamble sets and assessments.
//!
//! Everything here is exact: entries are arbitrary-precision rationals and
//! every set type keeps its members sorted and deduplicated, so two values
//! that are equal as mathematical sets are equal as Rust values and
//! serialize to the same bytes.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GambleError {
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gamble set mixes gambles of different lengths")]
    RaggedSet,
    #[error("duplicate state label {0:?}")]
    DuplicateLabel(String),
    #[error("possibility space must have at least one state")]
    EmptySpace,
    #[error("invalid document: {0}")]
    Json(String),
}

/// Parses `"p/q"` or `"p"` into a rational in lowest terms.
pub fn parse_rational(text: &str) -> Result<Rational, GambleError> {
    let malformed = || GambleError::MalformedRational(text.to_string());
    let parse_int = |s: &str| -> Result<BigInt, GambleError> {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        s.parse::<BigInt>().map_err(|_| malformed())
    };
    match text.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(text)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            if den.starts_with(['-', '+']) {
                return Err(malformed());
            }
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(GambleError::ZeroDenominator(text.to_string()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Canonical text form: lowest terms, `p` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    if value.denom() == &BigInt::from(1) {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Serde adapter for rational vectors written as canonical strings.
pub mod rational_strings {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<String> = values.iter().map(format_rational).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let text = Vec::<String>::deserialize(d)?;
        text.iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// The finite set of states. Labels only matter for I/O.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PossibilitySpace {
    labels: Vec<String>,
}

impl PossibilitySpace {
    pub fn new(labels: Vec<String>) -> Result<Self, GambleError> {
        if labels.is_empty() {
            return Err(GambleError::EmptySpace);
        }
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(GambleError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// A space of `size` states labelled `x1`, `x2`, ...
    pub fn with_size(size: usize) -> Result<Self, GambleError> {
        Self::new((1..=size).map(|i| format!("x{i}")).collect())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn check_gamble(&self, gamble: &Gamble) -> Result<(), GambleError> {
        if gamble.dim() != self.size() {
            return Err(GambleError::DimensionMismatch {
                expected: self.size(),
                found: gamble.dim(),
            });
        }
        Ok(())
    }

    pub fn check_set(&self, set: &GambleSet) -> Result<(), GambleError> {
        set.iter().try_for_each(|g| self.check_gamble(g))
    }
}

/// A reward vector, one exact rational per state.
///
/// Ordering is lexicographic on entries, which is the canonical member order
/// of every [`GambleSet`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Gamble(Vec<Rational>);

impl Gamble {
    pub fn new(values: Vec<Rational>) -> Self {
        Self(values)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self(values.iter().map(|&v| integer(v)).collect())
    }

    pub fn parse<S: AsRef<str>>(values: &[S]) -> Result<Self, GambleError> {
        values
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    /// The indicator of state `state`: one there, zero elsewhere.
    pub fn indicator(dim: usize, state: usize) -> Self {
        let mut values = vec![Rational::zero(); dim];
        values[state] = integer(1);
        Self(values)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Membership in the strictly positive gambles: `u >= 0` and `u != 0`.
    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative()) && self.0.iter().any(Signed::is_positive)
    }

    /// Membership in the non-positive gambles: `u <= 0`.
    pub fn is_nonpositive(&self) -> bool {
        self.0.iter().all(|v| !v.is_positive())
    }

    /// Entrywise `self >= other`.
    pub fn dominates(&self, other: &Gamble) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn scale(&self, factor: &Rational) -> Gamble {
        Gamble(self.0.iter().map(|v| v * factor).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }

    fn check_same_dim(&self, other: &Gamble) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "arithmetic on gambles of different dimension"
        );
    }
}

impl Add for &Gamble {
    type Output = Gamble;

    fn add(self, rhs: &Gamble) -> Gamble {
        self.check_same_dim(rhs);
        Gamble(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Gamble {
    type Output = Gamble;

    fn sub(self, rhs: &Gamble) -> Gamble {
        self.check_same_dim(rhs);
        Gamble(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl TryFrom<Vec<String>> for Gamble {
    type Error = GambleError;

    fn try_from(values: Vec<String>) -> Result<Self, Self::Error> {
        Gamble::parse(&values)
    }
}

impl From<Gamble> for Vec<String> {
    fn from(gamble: Gamble) -> Self {
        gamble.to_strings()
    }
}

impl fmt::Display for Gamble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

/// A finite set of gambles, kept sorted and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Gamble>", into = "Vec<Gamble>")]
pub struct GambleSet {
    members: Vec<Gamble>,
}

impl GambleSet {
    /// Builds a set; duplicates are merged. Fails if lengths differ.
    pub fn new<I: IntoIterator<Item = Gamble>>(gambles: I) -> Result<Self, GambleError> {
        let members: BTreeSet<Gamble> = gambles.into_iter().collect();
        let mut dims = members.iter().map(Gamble::dim);
        if let Some(first) = dims.next() {
            if dims.any(|d| d != first) {
                return Err(GambleError::RaggedSet);
            }
        }
        Ok(Self {
            members: members.into_iter().collect(),
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(gamble: Gamble) -> Self {
        Self {
            members: vec![gamble],
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, GambleError> {
        Self::new(rows.iter().map(|r| Gamble::from_ints(r)))
    }

    pub fn members(&self) -> &[Gamble] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Gamble> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Common length of the members, `None` for the empty set.
    pub fn dim(&self) -> Option<usize> {
        self.members.first().map(Gamble::dim)
    }

    pub fn contains(&self, gamble: &Gamble) -> bool {
        self.position(gamble).is_some()
    }

    /// Index of `gamble` in canonical order.
    pub fn position(&self, gamble: &Gamble) -> Option<usize> {
        self.members.binary_search(gamble).ok()
    }

    pub fn is_subset(&self, other: &GambleSet) -> bool {
        self.members.iter().all(|g| other.contains(g))
    }

    /// The members that are not non-positive.
    pub fn strip_nonpositive(&self) -> GambleSet {
        GambleSet {
            members: self
                .members
                .iter()
                .filter(|g| !g.is_nonpositive())
                .cloned()
                .collect(),
        }
    }

    /// `{w - u : w in self}`.
    pub fn shift(&self, u: &Gamble) -> Result<GambleSet, GambleError> {
        if let Some(dim) = self.dim() {
            if dim != u.dim() {
                return Err(GambleError::DimensionMismatch {
                    expected: dim,
                    found: u.dim(),
                });
            }
        }
        GambleSet::new(self.members.iter().map(|w| w - u))
    }

    pub fn without(&self, gamble: &Gamble) -> GambleSet {
        GambleSet {
            members: self
                .members
                .iter()
                .filter(|g| *g != gamble)
                .cloned()
                .collect(),
        }
    }

    pub fn with(&self, gamble: Gamble) -> Result<GambleSet, GambleError> {
        GambleSet::new(self.members.iter().cloned().chain(Some(gamble)))
    }

    pub fn union(&self, other: &GambleSet) -> Result<GambleSet, GambleError> {
        GambleSet::new(self.members.iter().chain(other.iter()).cloned())
    }
}

impl TryFrom<Vec<Gamble>> for GambleSet {
    type Error = GambleError;

    fn try_from(gambles: Vec<Gamble>) -> Result<Self, Self::Error> {
        GambleSet::new(gambles)
    }
}

impl From<GambleSet> for Vec<Gamble> {
    fn from(set: GambleSet) -> Self {
        set.members
    }
}

impl<'a> IntoIterator for &'a GambleSet {
    type Item = &'a Gamble;
    type IntoIter = std::slice::Iter<'a, Gamble>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl fmt::Display for GambleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(Gamble::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A finite set of gamble sets over one possibility space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assessment {
    space: PossibilitySpace,
    sets: Vec<GambleSet>,
}

impl Assessment {
    pub fn new<I>(space: PossibilitySpace, sets: I) -> Result<Self, GambleError>
    where
        I: IntoIterator<Item = GambleSet>,
    {
        let sets: BTreeSet<GambleSet> = sets.into_iter().collect();
        for set in &sets {
            space.check_set(set)?;
        }
        Ok(Self {
            space,
            sets: sets.into_iter().collect(),
        })
    }

    /// An assessment over the default space of `dim` states.
    pub fn with_dim<I>(dim: usize, sets: I) -> Result<Self, GambleError>
    where
        I: IntoIterator<Item = GambleSet>,
    {
        Self::new(PossibilitySpace::with_size(dim)?, sets)
    }

    pub fn space(&self) -> &PossibilitySpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.size()
    }

    pub fn sets(&self) -> &[GambleSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, set: &GambleSet) -> bool {
        self.sets.binary_search(set).is_ok()
    }

    pub fn position_of_empty(&self) -> Option<usize> {
        self.sets.iter().position(GambleSet::is_empty)
    }

    /// The number of selections, `None` if it overflows `usize`.
    pub fn selection_count(&self) -> Option<usize> {
        self.sets
            .iter()
            .try_fold(1usize, |acc, set| acc.checked_mul(set.len()))
    }

    /// A new assessment with `set` added.
    pub fn with_set(&self, set: GambleSet) -> Result<Self, GambleError> {
        Self::new(
            self.space.clone(),
            self.sets.iter().cloned().chain(Some(set)),
        )
    }

    pub fn from_json(text: &str) -> Result<Self, GambleError> {
        let doc: AssessmentDocument =
            serde_json::from_str(text).map_err(|e| GambleError::Json(e.to_string()))?;
        doc.into_assessment()
    }

    /// Byte-exact canonical form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&AssessmentDocument::from(self)).expect("assessment serializes")
    }
}

/// The on-disk shape of an assessment file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssessmentDocument {
    pub space: Vec<String>,
    pub assessment: Vec<GambleSet>,
}

impl AssessmentDocument {
    pub fn into_assessment(self) -> Result<Assessment, GambleError> {
        Assessment::new(PossibilitySpace::new(self.space)?, self.assessment)
    }
}

impl From<&Assessment> for AssessmentDocument {
    fn from(a: &Assessment) -> Self {
        Self {
            space: a.space.labels.clone(),
            assessment: a.sets.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(values: &[i64]) -> Gamble {
        Gamble::from_ints(values)
    }

    #[test]
    fn strict_positivity() {
        assert!(g(&[1, 0]).is_strictly_positive());
        assert!(!g(&[0, 0]).is_strictly_positive());
        let half = Gamble::new(vec![integer(1), rational(-1, 2)]);
        assert!(!half.is_strictly_positive());
    }

    #[test]
    fn nonpositivity() {
        assert!(g(&[0, 0]).is_nonpositive());
        assert!(g(&[-1, -2]).is_nonpositive());
        assert!(!g(&[1, -1]).is_nonpositive());
    }

    #[test]
    fn strip() {
        let a = GambleSet::from_ints(&[&[1, -1], &[-1, 0], &[0, 0]]).unwrap();
        assert_eq!(
            a.strip_nonpositive(),
            GambleSet::from_ints(&[&[1, -1]]).unwrap()
        );
        assert_eq!(GambleSet::empty().strip_nonpositive(), GambleSet::empty());
        let b = GambleSet::from_ints(&[&[2, 3]]).unwrap();
        assert_eq!(b.strip_nonpositive(), b);
    }

    #[test]
    fn shift() {
        let a = GambleSet::from_ints(&[&[1, 1], &[0, 0]]).unwrap();
        assert_eq!(a.shift(&g(&[0, 0])).unwrap(), a);
        assert_eq!(
            a.shift(&g(&[1, 1])).unwrap(),
            GambleSet::from_ints(&[&[0, 0], &[-1, -1]]).unwrap()
        );
        let b = GambleSet::from_ints(&[&[2, 0]]).unwrap();
        assert_eq!(
            b.shift(&g(&[2, 0])).unwrap(),
            GambleSet::from_ints(&[&[0, 0]]).unwrap()
        );
        assert!(matches!(
            b.shift(&g(&[1, 1, 1])),
            Err(GambleError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rational_text() {
        let q = parse_rational("3/4").unwrap();
        assert_eq!(q, rational(3, 4));
        assert_eq!(format_rational(&q), "3/4");
        let q = parse_rational("-2").unwrap();
        assert_eq!(q, integer(-2));
        assert_eq!(format_rational(&q), "-2");
        assert!(matches!(
            parse_rational("1/0"),
            Err(GambleError::ZeroDenominator(_))
        ));
        for bad in ["", "1.5", "a", "1/", "/2", "1/2/3", "- 1", "2/-3"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
        assert_eq!(format_rational(&parse_rational("6/8").unwrap()), "3/4");
        assert_eq!(format_rational(&parse_rational("-6/3").unwrap()), "-2");
    }

    #[test]
    fn sets_are_canonical() {
        let a = GambleSet::from_ints(&[&[1, 0], &[-1, 2], &[1, 0]]).unwrap();
        assert_eq!(a.members(), &[g(&[-1, 2]), g(&[1, 0])]);
        assert!(matches!(
            GambleSet::from_ints(&[&[1, 0], &[1]]),
            Err(GambleError::RaggedSet)
        ));
    }

    #[test]
    fn space_validation() {
        assert_eq!(PossibilitySpace::new(vec![]), Err(GambleError::EmptySpace));
        assert_eq!(
            PossibilitySpace::new(vec!["a".into(), "a".into()]),
            Err(GambleError::DuplicateLabel("a".into()))
        );
    }

    #[test]
    fn assessment_json() {
        let text = r#"{"space": ["x1","x2"], "assessment": [[["2/2","-1"],["-1","1"]], [], [["1", "-1"], ["-1", "1"]]]}"#;
        let a = Assessment::from_json(text).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a.position_of_empty(), Some(0));
        assert_eq!(
            a.to_json(),
            r#"{"space":["x1","x2"],"assessment":[[],[["-1","1"],["1","-1"]]]}"#
        );

        let ragged = r#"{"space": ["x1","x2"], "assessment": [[["1","-1"],["1"]]]}"#;
        assert!(Assessment::from_json(ragged).is_err());
        let wrong_dim = r#"{"space": ["x1","x2"], "assessment": [[["1"]]]}"#;
        assert!(Assessment::from_json(wrong_dim).is_err());
        let dup = r#"{"space": ["x","x"], "assessment": []}"#;
        assert!(Assessment::from_json(dup).is_err());
        let zero_den = r#"{"space": ["x"], "assessment": [[["1/0"]]]}"#;
        assert!(Assessment::from_json(zero_den).is_err());
    }
}
