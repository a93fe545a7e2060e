//! Words over a finite alphabet and their conjugacy classes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Letter = u8;

/// Largest supported alphabet; letters are stored as bytes.
pub const MAX_ALPHABET: usize = 256;

/// A non-empty word. Letters are indices into the alphabet, `0` printing as
/// `a` and `1` as `b` in the two-letter text form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument("words must have length at least 1".into()));
        }
        Ok(Word(letters))
    }

    /// Parses the text form: a string over `a`/`b` (alphabets of size 2) or
    /// comma-separated letter indices (any alphabet).
    pub fn parse(text: &str, alphabet: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::InvalidArgument("empty word".into()));
        }
        let letters: Vec<usize> = if text.contains(',') || text.bytes().all(|c| c.is_ascii_digit()) {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidArgument(format!("bad letter index {t:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| match c {
                    'a'..='z' => Ok(c as usize - 'a' as usize),
                    _ => Err(Error::InvalidArgument(format!("bad letter {c:?}"))),
                })
                .collect::<Result<_>>()?
        };
        for &l in &letters {
            if l >= alphabet || l >= MAX_ALPHABET {
                return Err(Error::LetterOutOfRange { letter: l, alphabet });
            }
        }
        Word::new(letters.into_iter().map(|l| l as Letter).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Letter read at congruence `r`, i.e. the letter applied when leaving a
    /// thread position congruent to `r`.
    #[inline]
    pub fn at(&self, r: usize) -> Letter {
        self.0[r % self.0.len()]
    }

    pub fn max_letter(&self) -> Letter {
        *self.0.iter().max().expect("non-empty")
    }

    /// `self` repeated `times` times.
    pub fn power(&self, times: usize) -> Result<Word> {
        Word::new(self.0.repeat(times))
    }

    /// Cyclic rotation by `shift` positions to the left.
    pub fn rotate(&self, shift: usize) -> Word {
        let mut v = self.0.clone();
        let len = v.len();
        v.rotate_left(shift % len);
        Word(v)
    }

    /// True iff some nontrivial rotation of the word equals itself,
    /// equivalently the word is a proper power.
    pub fn is_self_conjugate(&self) -> bool {
        let k = self.len();
        (1..k).filter(|p| k.is_multiple_of(*p)).any(|p| (p..k).all(|i| self.0[i] == self.0[i - p]))
    }

    pub fn is_conjugate_to(&self, other: &Word) -> bool {
        are_conjugate(self, other)
    }

    /// `a`/`b` string for two-letter alphabets, comma-separated indices
    /// otherwise.
    pub fn to_text(&self, alphabet: usize) -> String {
        if alphabet <= 2 {
            self.0.iter().map(|&l| (b'a' + l) as char).collect()
        } else {
            self.0.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alphabet = if self.max_letter() < 2 { 2 } else { MAX_ALPHABET };
        f.write_str(&self.to_text(alphabet))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

pub fn are_conjugate(w1: &Word, w2: &Word) -> bool {
    w1.len() == w2.len() && (0..w1.len()).any(|s| w1.rotate(s) == *w2)
}

/// Lexicographic iterator over the words of length `k` on `alphabet`
/// letters that are not self-conjugate.
#[derive(Clone, Debug)]
pub struct NcWords {
    alphabet: usize,
    next: Option<Vec<Letter>>,
    keep_self_conjugate: bool,
}

impl NcWords {
    /// Every word of length `k`, self-conjugate ones included.
    pub fn all(k: usize, alphabet: usize) -> Result<Self> {
        Ok(NcWords { keep_self_conjugate: true, ..Self::new(k, alphabet)? })
    }

    pub fn new(k: usize, alphabet: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("word length must be at least 1".into()));
        }
        if alphabet == 0 || alphabet > MAX_ALPHABET {
            return Err(Error::InvalidArgument(format!("unsupported alphabet size {alphabet}")));
        }
        Ok(NcWords { alphabet, next: Some(vec![0; k]), keep_self_conjugate: false })
    }
}

impl Iterator for NcWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            let cur = self.next.take()?;
            let mut succ = cur.clone();
            let mut i = succ.len();
            let mut carried = true;
            while i > 0 && carried {
                i -= 1;
                if (succ[i] as usize) + 1 < self.alphabet {
                    succ[i] += 1;
                    carried = false;
                } else {
                    succ[i] = 0;
                }
            }
            if !carried {
                self.next = Some(succ);
            }
            let w = Word(cur);
            if self.keep_self_conjugate || !w.is_self_conjugate() {
                return Some(w);
            }
        }
    }
}

/// All non-self-conjugate words of length `k`, in lexicographic order.
pub fn enumerate_nc_words(k: usize, alphabet: usize) -> Result<Vec<Word>> {
    Ok(NcWords::new(k, alphabet)?.collect())
}

/// The first two non-conjugate words of `enumerate_nc_words(k, alphabet)`.
pub fn first_non_conjugate_pair(k: usize, alphabet: usize) -> Option<(Word, Word)> {
    let mut words = NcWords::new(k, alphabet).ok()?;
    let w1 = words.next()?;
    let w2 = words.find(|w| !are_conjugate(&w1, w))?;
    Some((w1, w2))
}
