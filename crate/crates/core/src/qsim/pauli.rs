use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::linalg::{identity, kron_all, mat2, c, CMatrix, I, ONE, ZERO};
use super::LocalOp;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => identity(2),
            Pauli::X => mat2(ZERO, ONE, ONE, ZERO),
            Pauli::Y => mat2(ZERO, -I, I, ZERO),
            Pauli::Z => mat2(ONE, ZERO, ZERO, -ONE),
        }
    }

    /// Single-letter Paulis anticommute iff both are non-identity and differ.
    pub fn anticommutes_with(self, other: Pauli) -> bool {
        self != Pauli::I && other != Pauli::I && self != other
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(ch: char) -> Option<Pauli> {
        match ch.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// All `4^k` Pauli words of length `k`, identity first.
    pub fn words(k: usize) -> Vec<Vec<Pauli>> {
        let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        (0..4usize.pow(k as u32))
            .map(|mut idx| {
                let mut word = vec![Pauli::I; k];
                for slot in word.iter_mut().rev() {
                    *slot = all[idx % 4];
                    idx /= 4;
                }
                word
            })
            .collect()
    }
}

/// A signed tensor product of Pauli letters, one letter per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
    negative: bool,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters, negative: false }
    }

    pub fn with_sign(letters: Vec<Pauli>, sign: i8) -> Self {
        Self { letters, negative: sign < 0 }
    }

    /// Single non-identity letter on `qubit` of an `n`-qubit register.
    pub fn single(n: usize, qubit: usize, letter: Pauli) -> Self {
        let mut letters = vec![Pauli::I; n];
        letters[qubit] = letter;
        Self::new(letters)
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn negated(&self) -> Self {
        Self { letters: self.letters.clone(), negative: !self.negative }
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|p| **p != Pauli::I).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| a.anticommutes_with(**b))
            .count();
        anti % 2 == 0
    }

    pub fn to_matrix(&self) -> CMatrix {
        let mats: Vec<CMatrix> = self.letters.iter().map(|p| p.matrix()).collect();
        kron_all(&mats) * c(self.sign() as f64)
    }

    /// Non-identity letters as single-qubit local operators. The sign is
    /// not included.
    pub fn local_factors(&self) -> Vec<LocalOp> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .map(|(q, p)| LocalOp::new_unchecked(p.matrix(), vec![q]))
            .collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        for p in &self.letters {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        if body.is_empty() {
            return Err(Error::InvalidPauli(s.to_string()));
        }
        let letters = body
            .chars()
            .map(|ch| Pauli::from_char(ch).ok_or_else(|| Error::InvalidPauli(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { letters, negative })
    }
}
