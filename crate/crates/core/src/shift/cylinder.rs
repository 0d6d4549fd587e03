use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::alphabet::{Symbol, Word};
use super::point::Dist;
use super::presentation::SftPresentation;
use crate::error::{Error, Result};

/// The clopen set `[w]` of points starting with a legal nonempty word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cylinder {
    word: Word,
}

impl Cylinder {
    pub fn new(x: &SftPresentation, word: Word) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        if !x.is_legal(&word) {
            return Err(Error::IllegalWord(x.render(&word)));
        }
        Ok(Cylinder { word })
    }

    pub fn parse(x: &SftPresentation, text: &str) -> Result<Self> {
        Self::new(x, x.parse_word(text)?)
    }

    pub fn word(&self) -> &[Symbol] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Result of pushing a cylinder forward by `σ^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftImage {
    /// `σ^k [w] = [w[k..]]`.
    Within(Cylinder),
    /// `k >= |w|`: the image is not inside any proper cylinder determined by `w`.
    TooShort,
}

pub fn shift_image(w: &Cylinder, k: usize) -> ShiftImage {
    if w.word.len() > k {
        ShiftImage::Within(Cylinder {
            word: w.word[k..].to_vec(),
        })
    } else {
        ShiftImage::TooShort
    }
}

/// Exact diameter of `[w]`: `2^-b` where `b` is the first index at which
/// two points of the cylinder can differ, or `0` for a singleton.
pub fn cylinder_diam(x: &SftPresentation, w: &Cylinder) -> Dist {
    let mut set = x.reach(&w.word);
    let mut depth = w.word.len();
    let mut seen = HashSet::new();
    loop {
        let syms = x.symbols_from(&set);
        if syms.len() >= 2 {
            return Dist::pow(depth as u32);
        }
        if !seen.insert(set.clone()) {
            return Dist::ZERO;
        }
        set = x.step(&set, syms[0]);
        depth += 1;
    }
}
