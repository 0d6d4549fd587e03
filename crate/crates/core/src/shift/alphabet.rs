use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a symbol in an [`Alphabet`]. Symbol order is the order of the
/// (sorted) names, so lexicographic order on words agrees with string order
/// of their single-character renderings.
pub type Symbol = u16;

pub type Word = Vec<Symbol>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// Sorts and deduplicates the names.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        if names.iter().any(|n| n.is_empty()) {
            return Err(Error::Parse("empty symbol name".into()));
        }
        if names.len() > Symbol::MAX as usize {
            return Err(Error::Parse("alphabet too large".into()));
        }
        Ok(Alphabet { names })
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

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s as usize]
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| i as Symbol)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.names.len() as Symbol
    }

    fn single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Splits `text` into symbols. Whitespace-separated input is read token
    /// by token; otherwise the longest matching symbol name is taken greedily.
    pub fn tokenize(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.contains(char::is_whitespace) {
            return text
                .split_whitespace()
                .map(|t| self.symbol(t).ok_or_else(|| Error::UnknownSymbol(t.to_string())))
                .collect();
        }
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let best = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            match best {
                Some((i, n)) => {
                    out.push(i as Symbol);
                    rest = &rest[n.len()..];
                }
                None => return Err(Error::UnknownSymbol(text.to_string())),
            }
        }
        Ok(out)
    }

    pub fn render(&self, word: &[Symbol]) -> String {
        let parts = word.iter().map(|&s| self.name(s));
        if self.single_char() {
            parts.collect()
        } else {
            parts.collect::<Vec<_>>().join(" ")
        }
    }
}
