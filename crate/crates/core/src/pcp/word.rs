use std::fmt;

/// One syllable `g^e` of a word. Generator indices are 0-based throughout the
/// crate; only the text format and `Display` use the 1-based `g1, g2, ...`
/// convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub exp: i64,
}

/// A product of generator powers, read left to right. The empty word is the
/// identity. Exponents may be negative; collection resolves inverses through
/// the power relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn from_pairs(pairs: &[(usize, i64)]) -> Self {
        Word {
            letters: pairs
                .iter()
                .filter(|(_, e)| *e != 0)
                .map(|&(gen, exp)| Letter { gen, exp })
                .collect(),
        }
    }

    pub(crate) fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn push(&mut self, gen: usize, exp: i64) {
        if exp != 0 {
            self.letters.push(Letter { gen, exp });
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Formal inverse: letters reversed, exponents negated.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen,
                    exp: -l.exp,
                })
                .collect(),
        }
    }

    /// Concatenation (free product of the two words).
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    pub fn min_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).min()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.exp == 1 {
                write!(f, "g{}", l.gen + 1)?;
            } else {
                write!(f, "g{}^{}", l.gen + 1, l.exp)?;
            }
        }
        Ok(())
    }
}
