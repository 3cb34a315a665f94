//! Phase-free Pauli words over Z₂^{2N}.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitVec;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// A Pauli operator modulo phase: the pair `(x | z)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliWord {
    x: BitVec,
    z: BitVec,
}

impl PauliWord {
    pub fn identity(n: usize) -> Self {
        Self { x: BitVec::zeros(n), z: BitVec::zeros(n) }
    }

    pub fn from_bits(x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch(x.len(), z.len()));
        }
        Ok(Self { x, z })
    }

    /// Single-site word `letter` on `site`.
    pub fn single(n: usize, site: usize, letter: Letter) -> Self {
        let mut w = Self::identity(n);
        w.set(site, letter);
        w
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut w = Self::identity(letters.len());
        for (i, &l) in letters.iter().enumerate() {
            w.set(i, l);
        }
        w
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub fn letter(&self, site: usize) -> Letter {
        Letter::from_bits(self.x.get(site), self.z.get(site))
    }

    pub fn set(&mut self, site: usize, letter: Letter) {
        let (x, z) = letter.bits();
        self.x.set(site, x);
        self.z.set(site, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        self.x.words().iter().zip(self.z.words()).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    /// Sites carrying a non-identity letter, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&i| self.x.get(i) || self.z.get(i))
    }

    #[inline]
    pub fn anticommutes(&self, other: &PauliWord) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    pub fn compose_assign(&mut self, other: &PauliWord) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    pub fn compose(&self, other: &PauliWord) -> PauliWord {
        let mut w = self.clone();
        w.compose_assign(other);
        w
    }

    /// Packed index `x | z << n`; requires `n <= 32`.
    pub fn index(&self) -> u64 {
        let n = self.n();
        assert!(n <= 32, "word index needs n <= 32");
        self.x.to_u64() | (self.z.to_u64() << n)
    }

    pub fn from_index(n: usize, index: u64) -> Self {
        assert!(n <= 32, "word index needs n <= 32");
        let m = if n == 0 { 0 } else { (1u64 << n) - 1 };
        Self { x: BitVec::from_u64(n, index & m), z: BitVec::from_u64(n, (index >> n) & m) }
    }

    /// The 2N-bit vector `(x | z)`.
    pub fn to_bitvec(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    pub fn from_bitvec(v: &BitVec) -> Self {
        let n = v.len() / 2;
        Self { x: v.slice(0, n), z: v.slice(n, n) }
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            fmt::Write::write_char(f, self.letter(i).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check(a: &PauliWord, b: &PauliWord) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::LengthMismatch(a.n(), b.n()));
    }
    Ok(())
}

/// `(⟨a^x, b^z⟩ + ⟨a^z, b^x⟩) mod 2`.
pub fn symplectic_parity(a: &PauliWord, b: &PauliWord) -> Result<bool> {
    check(a, b)?;
    Ok(a.anticommutes(b))
}

/// `θ_{a,b}`: +1 when the operators commute, −1 otherwise.
pub fn commutation_sign(a: &PauliWord, b: &PauliWord) -> Result<i8> {
    Ok(if symplectic_parity(a, b)? { -1 } else { 1 })
}

pub fn compose(a: &PauliWord, b: &PauliWord) -> Result<PauliWord> {
    check(a, b)?;
    Ok(a.compose(b))
}

pub fn parse_pauli(text: &str) -> Result<PauliWord> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut letters = Vec::with_capacity(text.len());
    for (i, c) in text.chars().enumerate() {
        letters.push(match c.to_ascii_uppercase() {
            'I' => Letter::I,
            'X' => Letter::X,
            'Y' => Letter::Y,
            'Z' => Letter::Z,
            _ => return Err(Error::InvalidLetter(c, i)),
        });
    }
    Ok(PauliWord::from_letters(&letters))
}

pub fn format_pauli(w: &PauliWord) -> String {
    use alloc::string::ToString;
    w.to_string()
}

pub fn weight(w: &PauliWord) -> usize {
    w.weight()
}

/// W₁: the 3N weight-one words, ordered X_i, Y_i, Z_i per site.
#[derive(Clone, Debug)]
pub struct WeightOneSet {
    words: Vec<PauliWord>,
}

impl WeightOneSet {
    pub fn new(n: usize) -> Self {
        let mut words = Vec::with_capacity(3 * n);
        for site in 0..n {
            for l in [Letter::X, Letter::Y, Letter::Z] {
                words.push(PauliWord::single(n, site, l));
            }
        }
        Self { words }
    }

    pub fn words(&self) -> &[PauliWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Position of a weight-one word in the ordering.
    pub fn position(site: usize, letter: Letter) -> Option<usize> {
        match letter {
            Letter::I => None,
            Letter::X => Some(3 * site),
            Letter::Y => Some(3 * site + 1),
            Letter::Z => Some(3 * site + 2),
        }
    }

    pub fn site_of(pos: usize) -> usize {
        pos / 3
    }
}
