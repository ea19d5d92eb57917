use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::IssnError;

/// Normalized ISSN, `NNNN-NNNC` with an uppercase `X` check character.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Issn(String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IssnPolicy {
    #[default]
    Strict,
    /// Accept a wrong check digit; the caller gets the failure back as a warning.
    Lax,
}

/// Check character for the first seven digits: weights 8..2, mod 11, 10 is `X`.
pub fn check_character(digits: &[u8; 7]) -> char {
    let sum: u32 = digits
        .iter()
        .zip((2..=8u32).rev())
        .map(|(d, w)| u32::from(*d) * w)
        .sum();
    match (11 - sum % 11) % 11 {
        10 => 'X',
        c => char::from_digit(c, 10).expect("single digit"),
    }
}

fn split(raw: &str) -> Result<([u8; 7], char), IssnError> {
    let compact: Vec<char> = raw
        .chars()
        .filter(|c| *c != '-' && !c.is_whitespace())
        .map(|c| c.to_ascii_uppercase())
        .collect();
    if compact.len() != 8 {
        return Err(IssnError::Malformed(raw.to_string()));
    }
    let mut digits = [0u8; 7];
    for (slot, c) in digits.iter_mut().zip(&compact[..7]) {
        *slot = c.to_digit(10).ok_or_else(|| IssnError::Malformed(raw.to_string()))? as u8;
    }
    let check = compact[7];
    if !(check.is_ascii_digit() || check == 'X') {
        return Err(IssnError::Malformed(raw.to_string()));
    }
    Ok((digits, check))
}

fn render(digits: &[u8; 7], check: char) -> String {
    let mut s = String::with_capacity(9);
    for (i, d) in digits.iter().enumerate() {
        if i == 4 {
            s.push('-');
        }
        s.push(char::from(b'0' + d));
    }
    s.push(check);
    s
}

/// Strip hyphens and whitespace, uppercase, validate, and re-insert the hyphen.
pub fn normalize_issn(raw: &str) -> Result<Issn, IssnError> {
    let (digits, check) = split(raw)?;
    let expected = check_character(&digits);
    if check != expected {
        return Err(IssnError::ChecksumFailure {
            raw: raw.to_string(),
            expected,
        });
    }
    Ok(Issn(render(&digits, check)))
}

/// Like [`normalize_issn`]; under [`IssnPolicy::Lax`] a checksum failure is
/// returned alongside the normalized value instead of as an error.
pub fn normalize_issn_with(raw: &str, policy: IssnPolicy) -> Result<(Issn, Option<IssnError>), IssnError> {
    match normalize_issn(raw) {
        Ok(issn) => Ok((issn, None)),
        Err(e @ IssnError::ChecksumFailure { .. }) if policy == IssnPolicy::Lax => {
            let (digits, check) = split(raw)?;
            Ok((Issn(render(&digits, check)), Some(e)))
        }
        Err(e) => Err(e),
    }
}

impl Issn {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for Issn {
    type Err = IssnError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        normalize_issn(s)
    }
}

impl TryFrom<String> for Issn {
    type Error = IssnError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        normalize_issn(&value)
    }
}

impl From<Issn> for String {
    fn from(value: Issn) -> Self {
        value.0
    }
}

impl fmt::Display for Issn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalizes_known_issns() {
        assert_eq!(normalize_issn("2041-1723").unwrap().as_str(), "2041-1723");
        assert_eq!(normalize_issn("20411723").unwrap().as_str(), "2041-1723");
        assert_eq!(normalize_issn(" 2041 1723 ").unwrap().as_str(), "2041-1723");
        assert_eq!(normalize_issn("2434-561x").unwrap().as_str(), "2434-561X");
    }

    #[test]
    fn rejects_bad_check_digit() {
        assert_eq!(
            normalize_issn("1234-5678"),
            Err(IssnError::ChecksumFailure {
                raw: "1234-5678".into(),
                expected: '9'
            })
        );
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "2041-172", "2041-17233", "20A1-1723", "2041-172Y", "X041-1723"] {
            assert!(matches!(normalize_issn(bad), Err(IssnError::Malformed(_))), "{bad:?}");
        }
    }

    #[test]
    fn lax_policy_keeps_value() {
        let (issn, warning) = normalize_issn_with("12345678", IssnPolicy::Lax).unwrap();
        assert_eq!(issn.as_str(), "1234-5678");
        assert!(warning.is_some());
        assert!(normalize_issn_with("12345678", IssnPolicy::Strict).is_err());
        assert!(normalize_issn_with("123", IssnPolicy::Lax).is_err());
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(digits in proptest::array::uniform7(0u8..10), hyphen in any::<bool>()) {
            let check = check_character(&digits);
            let body: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
            let raw = if hyphen { format!("{}-{}{}", &body[..4], &body[4..], check) } else { format!("{body}{check}") };
            let once = normalize_issn(&raw).unwrap();
            let twice = normalize_issn(once.as_str()).unwrap();
            prop_assert_eq!(once, twice);
        }
    }
}
