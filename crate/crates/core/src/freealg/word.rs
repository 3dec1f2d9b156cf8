use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered list of distinct generator names.
///
/// Cloning is cheap; equality compares the names.
#[derive(Clone)]
pub struct Alphabet {
    names: Arc<Vec<String>>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub const MAX_LEN: usize = 255;

    pub fn new<I, S>(names: I) -> Result<Alphabet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidAlphabet("no generators".into()));
        }
        if names.len() > Self::MAX_LEN {
            return Err(Error::InvalidAlphabet(format!(
                "{} generators exceed the limit of {}",
                names.len(),
                Self::MAX_LEN
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::InvalidAlphabet(format!("`{n}` is not an identifier")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidAlphabet(format!("duplicate generator `{n}`")));
            }
        }
        Ok(Alphabet {
            names: Arc::new(names),
        })
    }

    /// `x, y, z`
    pub fn xyz() -> Alphabet {
        Alphabet::new(["x", "y", "z"]).expect("valid")
    }

    /// `x, y, z, t`
    pub fn xyzt() -> Alphabet {
        Alphabet::new(["x", "y", "z", "t"]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The alphabet with `name` appended.
    pub fn extended(&self, name: &str) -> Result<Alphabet> {
        if self.index_of(name).is_some() {
            return Err(Error::NameClash(name.to_string()));
        }
        let mut names = self.names.as_ref().clone();
        names.push(name.to_string());
        Alphabet::new(names)
    }

    pub(crate) fn check(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Alphabet) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for Alphabet {}

impl std::hash::Hash for Alphabet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.names.hash(state)
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(","))
    }
}

/// A word in the free monoid, stored as generator indices.
///
/// Words order by length first, then lexicographically by index.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(index: usize) -> Word {
        Word(vec![index as u8])
    }

    pub fn from_letters<I: IntoIterator<Item = usize>>(letters: I) -> Word {
        Word(letters.into_iter().map(|i| i as u8).collect())
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&b| b as usize)
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().map(|&b| b as usize)
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().map(|&b| b as usize)
    }

    pub fn uses(&self, index: usize) -> bool {
        self.0.contains(&(index as u8))
    }

    pub fn count(&self, index: usize) -> usize {
        self.0.iter().filter(|&&b| b as usize == index).count()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Number of leading copies of `index`.
    pub fn leading_run(&self, index: usize) -> usize {
        self.0.iter().take_while(|&&b| b as usize == index).count()
    }

    pub fn suffix(&self, start: usize) -> Word {
        Word(self.0[start..].to_vec())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(["x", "x"]).is_err());
        assert!(Alphabet::new(["1x"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        let a = Alphabet::xyz().extended("t").unwrap();
        assert_eq!(a, Alphabet::xyzt());
        assert_eq!(
            Alphabet::xyzt().extended("t"),
            Err(Error::NameClash("t".into()))
        );
    }

    #[test]
    fn degree_then_lex() {
        let a = Word::from_letters([2]);
        let b = Word::from_letters([0, 0]);
        let c = Word::from_letters([0, 1]);
        assert!(Word::empty() < a && a < b && b < c);
    }
}
