use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// One bit per global cluster label; bit `i` set means cluster `i` is
/// selected. Rendered with label 0 leftmost, so `Ord` is lexicographic on
/// the text form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring(Vec<bool>);

impl Bitstring {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    /// Label `i` is taken from bit `i` of `mask`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        assert!(n <= 64);
        Self((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.0.len() <= 64);
        self.0
            .iter()
            .enumerate()
            .fold(0, |m, (i, &b)| if b { m | 1 << i } else { m })
    }

    /// Statevector basis index with qubit 0 as the most significant bit.
    pub fn from_basis_index(index: usize, n: usize) -> Self {
        Self((0..n).map(|i| index >> (n - 1 - i) & 1 == 1).collect())
    }

    pub fn to_basis_index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| acc << 1 | b as usize)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Bitstring)
    }
}

impl Serialize for Bitstring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bitstring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_is_label_zero_leftmost() {
        let b: Bitstring = "101001".parse().unwrap();
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert_eq!(b.to_string(), "101001");
        assert_eq!(b.to_mask(), 0b100101);
        assert_eq!(Bitstring::from_mask(0b100101, 6), b);
        assert_eq!(b.to_basis_index(), 0b101001);
        assert_eq!(Bitstring::from_basis_index(0b101001, 6), b);
    }

    #[test]
    fn ordering_is_lexicographic() {
        let a: Bitstring = "011".parse().unwrap();
        let b: Bitstring = "100".parse().unwrap();
        assert!(a < b);
    }

    #[test]
    fn rejects_garbage() {
        assert!("10x".parse::<Bitstring>().is_err());
    }
}
