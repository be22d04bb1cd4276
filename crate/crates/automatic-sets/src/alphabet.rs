//! Digit-tuple alphabets.
//!
//! An automaton in this crate reads symbols that are `tracks`-tuples of
//! base-`radix` digits. A symbol is stored as a single integer id in
//! `0..radix^tracks`; track `t` carries the digit `(id / radix^t) % radix`.

use crate::error::AutomatonError;

/// A symbol id. For single-track automata the id *is* the digit.
pub type Symbol = u32;

/// A word over an automaton's alphabet, most significant symbol first.
pub type Word = Vec<Symbol>;

/// The alphabet of `tracks`-tuples over digits `0..radix`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    radix: u32,
    tracks: usize,
}

impl Alphabet {
    pub fn new(radix: u32, tracks: usize) -> Result<Self, AutomatonError> {
        if radix < 2 {
            return Err(AutomatonError::InvalidRadix(radix));
        }
        if tracks == 0 {
            return Err(AutomatonError::InvalidTracks(tracks));
        }
        // symbol ids must fit in u32
        let count = (radix as u64).checked_pow(tracks as u32);
        match count {
            Some(c) if c <= u32::MAX as u64 => Ok(Alphabet { radix, tracks }),
            _ => Err(AutomatonError::AlphabetTooLarge { radix, tracks }),
        }
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn tracks(&self) -> usize {
        self.tracks
    }

    /// Number of symbols, `radix^tracks`.
    pub fn symbol_count(&self) -> u32 {
        (self.radix as u64).pow(self.tracks as u32) as u32
    }

    /// All symbol ids in increasing order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.symbol_count()
    }

    /// Encode a digit tuple (one digit per track) as a symbol id.
    pub fn encode(&self, digits: &[u32]) -> Result<Symbol, AutomatonError> {
        if digits.len() != self.tracks {
            return Err(AutomatonError::BadTupleWidth {
                expected: self.tracks,
                got: digits.len(),
            });
        }
        let mut id: u32 = 0;
        let mut weight: u32 = 1;
        for (t, &d) in digits.iter().enumerate() {
            if d >= self.radix {
                return Err(AutomatonError::DigitOutOfRange { digit: d, radix: self.radix });
            }
            let _ = t;
            id += d * weight;
            weight = weight.saturating_mul(self.radix);
        }
        Ok(id)
    }

    /// Decode a symbol id into its digit tuple.
    pub fn decode(&self, sym: Symbol) -> Vec<u32> {
        let mut digits = Vec::with_capacity(self.tracks);
        let mut rest = sym;
        for _ in 0..self.tracks {
            digits.push(rest % self.radix);
            rest /= self.radix;
        }
        digits
    }

    /// Digit on one track of a symbol.
    pub fn track_digit(&self, sym: Symbol, track: usize) -> u32 {
        (sym / self.radix.pow(track as u32)) % self.radix
    }

    /// The all-zeros symbol (used as the padding symbol for relations).
    pub fn zero_symbol(&self) -> Symbol {
        0
    }

    /// Symbol obtained by deleting one track.
    pub fn project_symbol(&self, sym: Symbol, track: usize) -> Symbol {
        let mut digits = self.decode(sym);
        digits.remove(track);
        let smaller = Alphabet { radix: self.radix, tracks: self.tracks - 1 };
        smaller.encode(&digits).expect("projection keeps digits in range")
    }

    /// Symbol obtained by inserting a digit at a track position.
    pub fn insert_track_digit(&self, sym: Symbol, track: usize, digit: u32) -> Symbol {
        let mut digits = self.decode(sym);
        digits.insert(track, digit);
        let bigger = Alphabet { radix: self.radix, tracks: self.tracks + 1 };
        bigger.encode(&digits).expect("insertion keeps digits in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_encode_decode() {
        let alph = Alphabet::new(3, 2).unwrap();
        for sym in alph.symbols() {
            let digits = alph.decode(sym);
            assert_eq!(alph.encode(&digits).unwrap(), sym);
        }
        assert_eq!(alph.symbol_count(), 9);
    }

    #[test]
    fn rejects_bad_digits() {
        let alph = Alphabet::new(2, 1).unwrap();
        assert!(alph.encode(&[2]).is_err());
        assert!(alph.encode(&[0, 1]).is_err());
    }

    #[test]
    fn single_track_symbol_is_digit() {
        let alph = Alphabet::new(5, 1).unwrap();
        for d in 0..5 {
            assert_eq!(alph.encode(&[d]).unwrap(), d);
        }
    }
}
