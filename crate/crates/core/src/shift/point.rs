use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::alphabet::{Symbol, Word};
use crate::graph::lcm;

/// An exact distance in the shift metric: either `0` or `2^-k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dist(Option<u32>);

impl Dist {
    pub const ZERO: Dist = Dist(None);

    /// `2^-k`.
    pub fn pow(k: u32) -> Dist {
        Dist(Some(k))
    }

    pub fn is_zero(self) -> bool {
        self.0.is_none()
    }

    /// The exponent `k` of `2^-k`, or `None` for zero.
    pub fn exponent(self) -> Option<u32> {
        self.0
    }

    /// `self < 2^-e`.
    pub fn lt_pow(self, e: u32) -> bool {
        match self.0 {
            None => true,
            Some(k) => k > e,
        }
    }

    /// `self >= 2^-e`.
    pub fn ge_pow(self, e: u32) -> bool {
        !self.lt_pow(e)
    }

    /// `self < 1/n` for a positive integer `n`.
    pub fn lt_reciprocal(self, n: u64) -> bool {
        match self.0 {
            None => true,
            Some(k) => k >= 64 || (1u64 << k) > n,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.0 {
            None => 0.0,
            Some(k) => 0.5f64.powi(k as i32),
        }
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => write!(f, "0"),
            Some(k) => write!(f, "2^-{k}"),
        }
    }
}

impl FromStr for Dist {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Dist::ZERO);
        }
        if s == "1" {
            return Ok(Dist::pow(0));
        }
        s.strip_prefix("2^-")
            .and_then(|k| k.parse().ok())
            .map(Dist::pow)
            .ok_or_else(|| format!("bad distance `{s}`"))
    }
}

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The eventually periodic sequence `preperiod · period^∞`.
///
/// Construction normalizes: the period is reduced to its primitive root and
/// the preperiod is shortened as far as possible, so two representations
/// denote the same sequence iff they are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct PointRep {
    preperiod: Word,
    period: Word,
}

#[derive(Deserialize)]
struct RawPoint {
    preperiod: Word,
    period: Word,
}

impl TryFrom<RawPoint> for PointRep {
    type Error = String;

    fn try_from(raw: RawPoint) -> Result<Self, Self::Error> {
        PointRep::new(raw.preperiod, raw.period).ok_or_else(|| "empty period".to_string())
    }
}

/// Length of the primitive root of `w` (smallest `p` dividing `|w|` with
/// `w` = root^(|w|/p)).
pub fn primitive_root_len(w: &[Symbol]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&p| n % p == 0 && (p..n).all(|i| w[i] == w[i - p]))
        .unwrap_or(n)
}

/// Least rotation of `w` in lexicographic order.
pub fn least_rotation(w: &[Symbol]) -> Word {
    (0..w.len())
        .map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Word>())
        .min()
        .unwrap_or_default()
}

impl PointRep {
    /// `None` when the period is empty.
    pub fn new(mut preperiod: Word, mut period: Word) -> Option<Self> {
        if period.is_empty() {
            return None;
        }
        period.truncate(primitive_root_len(&period));
        while let (Some(&a), Some(&b)) = (preperiod.last(), period.last()) {
            if a != b {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        Some(PointRep { preperiod, period })
    }

    pub fn periodic(period: Word) -> Option<Self> {
        Self::new(Vec::new(), period)
    }

    pub fn preperiod(&self) -> &[Symbol] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Symbol] {
        &self.period
    }

    pub fn is_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    pub fn symbol_at(&self, i: usize) -> Symbol {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        (0..n).map(|i| self.symbol_at(i)).collect()
    }

    /// The point `σ^k x`.
    pub fn shift(&self, k: usize) -> PointRep {
        if k <= self.preperiod.len() {
            PointRep {
                preperiod: self.preperiod[k..].to_vec(),
                period: self.period.clone(),
            }
        } else {
            let r = (k - self.preperiod.len()) % self.period.len();
            let mut period = self.period.clone();
            period.rotate_left(r);
            PointRep {
                preperiod: Vec::new(),
                period,
            }
        }
    }
}

/// Exact shift-metric distance `2^-i` with `i` the first disagreement index.
///
/// Two eventually periodic sequences that agree on the first
/// `max(preperiods) + lcm(periods)` indices agree everywhere.
pub fn dist(x: &PointRep, y: &PointRep) -> Dist {
    let bound = x.preperiod.len().max(y.preperiod.len()) + lcm(x.period.len(), y.period.len());
    (0..bound)
        .find(|&i| x.symbol_at(i) != y.symbol_at(i))
        .map_or(Dist::ZERO, |i| Dist::pow(i as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(pre: &[Symbol], per: &[Symbol]) -> PointRep {
        PointRep::new(pre.to_vec(), per.to_vec()).unwrap()
    }

    #[test]
    fn normalization_is_canonical() {
        assert_eq!(pt(&[0, 1], &[0, 1, 0, 1]), pt(&[], &[0, 1]));
        assert_eq!(pt(&[1, 0, 0], &[0]), pt(&[1], &[0]));
        assert_eq!(pt(&[], &[1, 1, 1]).period(), &[1]);
        assert!(PointRep::new(vec![0], vec![]).is_none());
    }

    #[test]
    fn spec_distance_examples() {
        assert_eq!(dist(&pt(&[], &[0]), &pt(&[], &[0])), Dist::ZERO);
        assert_eq!(dist(&pt(&[], &[0]), &pt(&[1], &[0])), Dist::pow(0));
        // 00(01)^∞ = 0 0 0 1 0 1 ..., first disagreement with 0^∞ at index 3
        assert_eq!(dist(&pt(&[0, 0], &[0, 1]), &pt(&[], &[0])), Dist::pow(3));
    }

    #[test]
    fn shift_matches_symbolwise() {
        let x = pt(&[1, 1, 0], &[0, 1, 1]);
        for k in 0..12 {
            let s = x.shift(k);
            for i in 0..20 {
                assert_eq!(s.symbol_at(i), x.symbol_at(i + k));
            }
        }
    }

    #[test]
    fn dist_order_and_thresholds() {
        assert!(Dist::ZERO < Dist::pow(10));
        assert!(Dist::pow(3) < Dist::pow(2));
        assert!(Dist::pow(5).lt_pow(4));
        assert!(!Dist::pow(4).lt_pow(4));
        assert!(Dist::pow(2).lt_reciprocal(3));
        assert!(!Dist::pow(2).lt_reciprocal(4));
        assert_eq!("2^-7".parse::<Dist>().unwrap(), Dist::pow(7));
        assert_eq!(Dist::pow(7).to_string(), "2^-7");
    }

    #[test]
    fn rotations() {
        assert_eq!(least_rotation(&[1, 0, 1, 1]), vec![0, 1, 1, 1]);
        assert_eq!(primitive_root_len(&[0, 1, 0, 1]), 2);
        assert_eq!(primitive_root_len(&[0, 1, 1]), 3);
    }
}
