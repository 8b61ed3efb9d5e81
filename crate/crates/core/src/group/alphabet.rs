use crate::error::{Error, Result};

pub type Symbol = u8;

pub(crate) const MAX_LETTERS: usize = 26;

/// Symmetric generating alphabet. Each generator letter contributes itself
/// and its formal inverse (written with a `'` suffix), except involutions,
/// which contribute a single self-inverse symbol.
///
/// The symbol order is fixed: `a, a', b, b', ...`. Shortlex tie-breaking
/// everywhere in the crate depends on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<char>,
    involution: Vec<bool>,
    symbols: Vec<(usize, bool)>,
    by_letter: Vec<[Symbol; 2]>,
    inverse: Vec<Symbol>,
}

impl Alphabet {
    /// Letters `a, b, c, ...` with the given involution flags.
    pub fn standard(n: usize, involution: &[bool]) -> Result<Self> {
        let letters: Vec<char> = (0..n).map(|i| (b'a' + i as u8) as char).collect();
        Self::build(letters, involution.to_vec())
    }

    pub fn from_names(generators: &[String], inverses: &[String]) -> Result<Self> {
        if generators.len() != inverses.len() {
            return Err(Error::InvalidSpec(
                "generators and inverses must have equal length".into(),
            ));
        }
        if generators.is_empty() || generators.len() > MAX_LETTERS {
            return Err(Error::InvalidSpec(format!(
                "need 1..={MAX_LETTERS} generators"
            )));
        }
        let mut letters = Vec::new();
        let mut invol = Vec::new();
        for (g, inv) in generators.iter().zip(inverses) {
            let mut chars = g.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(Error::InvalidSpec(format!(
                    "generator name {g:?} must be a single letter"
                )));
            };
            if !c.is_ascii_alphabetic() {
                return Err(Error::InvalidSpec(format!(
                    "generator name {g:?} must be a letter"
                )));
            }
            if letters.contains(&c) {
                return Err(Error::InvalidSpec(format!("duplicate generator {g:?}")));
            }
            let involution = if inv == g {
                true
            } else if *inv == format!("{g}'") {
                false
            } else {
                return Err(Error::InvalidSpec(format!(
                    "inverse of {g:?} must be {g:?} (involution) or \"{g}'\", got {inv:?}"
                )));
            };
            letters.push(c);
            invol.push(involution);
        }
        Self::build(letters, invol)
    }

    fn build(letters: Vec<char>, involution: Vec<bool>) -> Result<Self> {
        let mut symbols = Vec::new();
        let mut by_letter = Vec::new();
        let mut inverse = Vec::new();
        for (i, &inv) in involution.iter().enumerate() {
            let g = symbols.len() as Symbol;
            symbols.push((i, false));
            if inv {
                inverse.push(g);
                by_letter.push([g, g]);
            } else {
                symbols.push((i, true));
                inverse.push(g + 1);
                inverse.push(g);
                by_letter.push([g, g + 1]);
            }
        }
        Ok(Alphabet {
            letters,
            involution,
            symbols,
            by_letter,
            inverse,
        })
    }

    /// Number of symbols (`|S|`).
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + Clone {
        0..self.symbols.len() as Symbol
    }

    /// The positive generator symbols, one per letter.
    pub fn generators(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.by_letter.iter().map(|s| s[0])
    }

    pub fn is_involution(&self, letter: usize) -> bool {
        self.involution[letter]
    }

    pub fn symbol(&self, letter: usize, inverse: bool) -> Symbol {
        self.by_letter[letter][usize::from(inverse)]
    }

    pub fn lookup(&self, ch: char, inverse: bool) -> Option<Symbol> {
        let letter = self.letters.iter().position(|&c| c == ch)?;
        Some(self.symbol(letter, inverse))
    }

    pub fn letter_of(&self, sym: Symbol) -> (usize, bool) {
        self.symbols[sym as usize]
    }

    pub fn letter_char(&self, letter: usize) -> char {
        self.letters[letter]
    }

    pub fn inverse(&self, sym: Symbol) -> Symbol {
        self.inverse[sym as usize]
    }

    pub fn invert_word(&self, word: &[Symbol]) -> Vec<Symbol> {
        word.iter().rev().map(|&s| self.inverse(s)).collect()
    }

    pub fn name(&self, sym: Symbol) -> String {
        let (letter, inv) = self.symbols[sym as usize];
        if inv {
            format!("{}'", self.letters[letter])
        } else {
            self.letters[letter].to_string()
        }
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.letters.iter().map(|c| c.to_string()).collect()
    }

    /// Parses `"aba'"`-style words. Whitespace is ignored; `'` inverts the
    /// preceding letter (a no-op on involutions).
    pub fn parse_word(&self, text: &str) -> Result<Vec<Symbol>> {
        let mut out = Vec::new();
        let mut chars = text.chars().filter(|c| !c.is_whitespace()).peekable();
        while let Some(c) = chars.next() {
            let inv = chars.peek() == Some(&'\'');
            if inv {
                chars.next();
            }
            let sym = self
                .lookup(c, inv)
                .ok_or_else(|| Error::UnknownSymbol(c.to_string()))?;
            out.push(sym);
        }
        Ok(out)
    }

    pub fn format_word(&self, word: &[Symbol]) -> String {
        word.iter().map(|&s| self.name(s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involution_is_its_own_inverse() {
        let a = Alphabet::standard(2, &[true, false]).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.inverse(0), 0);
        assert_eq!(a.inverse(1), 2);
        assert_eq!(a.parse_word("a'b'").unwrap(), vec![0, 2]);
    }

    #[test]
    fn names_round_trip() {
        let a = Alphabet::from_names(&["x".into(), "y".into()], &["x'".into(), "y'".into()]).unwrap();
        let w = a.parse_word("xy'x'").unwrap();
        assert_eq!(a.format_word(&w), "xy'x'");
        assert!(Alphabet::from_names(&["x".into()], &["X".into()]).is_err());
        assert!(Alphabet::from_names(&["xy".into()], &["xy'".into()]).is_err());
    }
}
