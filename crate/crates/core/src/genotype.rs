//! Sequence spaces and the mixed-radix genotype codec.
//!
//! A genotype is stored as a single integer whose digit `i` (in base `m_i`)
//! is the allele index at locus `i`, with locus 0 as the least significant
//! digit. Symbol vectors only appear at the I/O boundary.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mixed-radix index of a genotype within its [`SequenceSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GenotypeCode(pub u64);

impl fmt::Display for GenotypeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Built-in per-locus alphabets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alphabet {
    Binary,
    Dna,
    Rna,
    Protein,
}

impl Alphabet {
    pub fn symbols(self) -> &'static [&'static str] {
        match self {
            Alphabet::Binary => &["0", "1"],
            Alphabet::Dna => &["A", "C", "G", "T"],
            Alphabet::Rna => &["A", "C", "G", "U"],
            Alphabet::Protein => &[
                "A", "C", "D", "E", "F", "G", "H", "I", "K", "L", "M", "N", "P", "Q", "R", "S",
                "T", "V", "W", "Y",
            ],
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "binary" => Some(Alphabet::Binary),
            "dna" => Some(Alphabet::Dna),
            "rna" => Some(Alphabet::Rna),
            "protein" => Some(Alphabet::Protein),
            _ => None,
        }
    }
}

/// A fixed-length substitution space with an independent alphabet per locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSpace {
    alphabets: Vec<Vec<String>>,
    radix: Vec<u64>,
    stride: Vec<u64>,
    total: u64,
}

impl SequenceSpace {
    pub fn new(alphabets: Vec<Vec<String>>) -> Result<Self> {
        if alphabets.is_empty() {
            return Err(Error::NoLoci);
        }
        let mut radix = Vec::with_capacity(alphabets.len());
        let mut stride = Vec::with_capacity(alphabets.len());
        let mut total: u64 = 1;
        for (locus, symbols) in alphabets.iter().enumerate() {
            if symbols.len() < 2 {
                return Err(Error::AlphabetTooSmall {
                    locus,
                    size: symbols.len(),
                });
            }
            let mut seen = HashSet::with_capacity(symbols.len());
            for s in symbols {
                if !seen.insert(s.as_str()) {
                    return Err(Error::DuplicateAllele {
                        locus,
                        symbol: s.clone(),
                    });
                }
            }
            stride.push(total);
            radix.push(symbols.len() as u64);
            total = total
                .checked_mul(symbols.len() as u64)
                .filter(|t| *t <= i64::MAX as u64)
                .ok_or(Error::SpaceTooLarge)?;
        }
        Ok(Self {
            alphabets,
            radix,
            stride,
            total,
        })
    }

    /// `n` loci sharing one preset alphabet.
    pub fn uniform(alphabet: Alphabet, n: usize) -> Result<Self> {
        let symbols: Vec<String> = alphabet.symbols().iter().map(|s| s.to_string()).collect();
        Self::new(vec![symbols; n])
    }

    /// A space with anonymous allele symbols `0..m_i` per locus.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let alphabets = sizes
            .iter()
            .map(|&m| (0..m).map(allele_label).collect())
            .collect();
        Self::new(alphabets)
    }

    pub fn n_loci(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[Vec<String>] {
        &self.alphabets
    }

    pub fn alphabet(&self, locus: usize) -> &[String] {
        &self.alphabets[locus]
    }

    pub fn radix(&self, locus: usize) -> usize {
        self.radix[locus] as usize
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.radix.iter().map(|&m| m as usize).collect()
    }

    pub fn total_size(&self) -> u64 {
        self.total
    }

    /// Σ (m_i − 1): the number of single-mutation neighbors of any genotype.
    pub fn neighbor_count(&self) -> usize {
        self.radix.iter().map(|&m| m as usize - 1).sum()
    }

    pub fn is_binary(&self) -> bool {
        self.radix.iter().all(|&m| m == 2)
    }

    /// True when every allele symbol is a single character, so sequences
    /// can be written as plain strings.
    pub fn single_char_symbols(&self) -> bool {
        self.alphabets
            .iter()
            .flatten()
            .all(|s| s.chars().count() == 1)
    }

    pub fn check(&self, code: GenotypeCode) -> Result<()> {
        if code.0 < self.total {
            Ok(())
        } else {
            Err(Error::CodeOutOfRange {
                code: code.0,
                size: self.total,
            })
        }
    }

    pub fn encode<S: AsRef<str>>(&self, alleles: &[S]) -> Result<GenotypeCode> {
        if alleles.len() != self.n_loci() {
            return Err(Error::LengthMismatch {
                expected: self.n_loci(),
                found: alleles.len(),
            });
        }
        let mut code = 0u64;
        for (locus, symbol) in alleles.iter().enumerate() {
            let symbol = symbol.as_ref();
            let idx = self.alphabets[locus]
                .iter()
                .position(|s| s == symbol)
                .ok_or_else(|| Error::UnknownAllele {
                    locus,
                    symbol: symbol.to_string(),
                })?;
            code += idx as u64 * self.stride[locus];
        }
        Ok(GenotypeCode(code))
    }

    pub fn encode_indices(&self, indices: &[usize]) -> Result<GenotypeCode> {
        if indices.len() != self.n_loci() {
            return Err(Error::LengthMismatch {
                expected: self.n_loci(),
                found: indices.len(),
            });
        }
        let mut code = 0u64;
        for (locus, &idx) in indices.iter().enumerate() {
            if idx as u64 >= self.radix[locus] {
                return Err(Error::UnknownAllele {
                    locus,
                    symbol: idx.to_string(),
                });
            }
            code += idx as u64 * self.stride[locus];
        }
        Ok(GenotypeCode(code))
    }

    pub fn decode(&self, code: GenotypeCode) -> Result<Vec<&str>> {
        self.check(code)?;
        Ok((0..self.n_loci())
            .map(|locus| self.alphabets[locus][self.digit(code, locus)].as_str())
            .collect())
    }

    pub fn decode_indices(&self, code: GenotypeCode) -> Result<Vec<usize>> {
        self.check(code)?;
        Ok((0..self.n_loci()).map(|l| self.digit(code, l)).collect())
    }

    /// Allele index at `locus`. The code is assumed valid.
    #[inline]
    pub fn digit(&self, code: GenotypeCode, locus: usize) -> usize {
        ((code.0 / self.stride[locus]) % self.radix[locus]) as usize
    }

    /// `code` with the allele at `locus` replaced. The code is assumed valid.
    #[inline]
    pub fn with_digit(&self, code: GenotypeCode, locus: usize, allele: usize) -> GenotypeCode {
        let current = self.digit(code, locus) as u64;
        let s = self.stride[locus];
        GenotypeCode(code.0 - current * s + allele as u64 * s)
    }

    pub fn hamming(&self, a: GenotypeCode, b: GenotypeCode) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.hamming_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn hamming_unchecked(&self, a: GenotypeCode, b: GenotypeCode) -> usize {
        if self.is_binary() {
            return (a.0 ^ b.0).count_ones() as usize;
        }
        (0..self.n_loci())
            .filter(|&l| self.digit(a, l) != self.digit(b, l))
            .count()
    }

    pub fn neighbors(&self, code: GenotypeCode) -> Result<Vec<GenotypeCode>> {
        self.check(code)?;
        let mut out = Vec::with_capacity(self.neighbor_count());
        self.for_each_neighbor(code, |_, _, nb| out.push(nb));
        Ok(out)
    }

    /// Visits every single-mutation neighbor as `(locus, allele, code)` in
    /// locus-major, allele-index order. The code is assumed valid.
    #[inline]
    pub fn for_each_neighbor(
        &self,
        code: GenotypeCode,
        mut visit: impl FnMut(usize, usize, GenotypeCode),
    ) {
        for locus in 0..self.n_loci() {
            self.for_each_locus_neighbor(code, locus, |allele, nb| visit(locus, allele, nb));
        }
    }

    /// Visits the `m_i − 1` neighbors that differ at `locus` only.
    #[inline]
    pub fn for_each_locus_neighbor(
        &self,
        code: GenotypeCode,
        locus: usize,
        mut visit: impl FnMut(usize, GenotypeCode),
    ) {
        let s = self.stride[locus];
        let m = self.radix[locus];
        let current = (code.0 / s) % m;
        let base = code.0 - current * s;
        for a in 0..m {
            if a != current {
                visit(a as usize, GenotypeCode(base + a * s));
            }
        }
    }

    /// Order of genotypes as sequences: allele indices compared locus 0 first.
    pub fn sequence_cmp(&self, a: GenotypeCode, b: GenotypeCode) -> Ordering {
        for locus in 0..self.n_loci() {
            match self.digit(a, locus).cmp(&self.digit(b, locus)) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    /// Renders a genotype; symbols are concatenated when `delimiter` is empty.
    pub fn format(&self, code: GenotypeCode, delimiter: &str) -> String {
        (0..self.n_loci())
            .map(|l| self.alphabets[l][self.digit(code, l)].as_str())
            .collect::<Vec<_>>()
            .join(delimiter)
    }
}

fn allele_label(index: usize) -> String {
    const DIGITS: &[u8] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    if index < DIGITS.len() {
        (DIGITS[index] as char).to_string()
    } else {
        format!("a{index}")
    }
}

/// Splits a sequence cell into per-locus symbols.
pub fn split_sequence<'a>(sequence: &'a str, delimiter: Option<&str>) -> Vec<&'a str> {
    match delimiter {
        Some(d) if !d.is_empty() => sequence.split(d).collect(),
        _ => sequence
            .char_indices()
            .map(|(i, c)| &sequence[i..i + c.len_utf8()])
            .collect(),
    }
}
