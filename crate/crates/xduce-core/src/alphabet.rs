//! Finite alphabets, words over them, free-monoid morphisms and DFAs.
//!
//! Symbols are arbitrary strings. Words store symbol *indices* into a shared
//! alphabet so letter comparisons are cheap; converting back to symbols only
//! happens at display/serialization boundaries. Derived alphabets use fixed
//! name mangling so that constructions stay printable:
//!
//! * underlined copy of `x` is `_x`,
//! * disjoint union tags are `L:x` / `R:x`,
//! * product pairs `(i, x)` are `i:x`.

use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

#[derive(Debug)]
struct AlphabetInner {
    symbols: Vec<String>,
    index: HashMap<String, u32>,
}

/// An ordered finite set of distinct symbols. Cheap to clone (shared).
#[derive(Clone, Debug)]
pub struct Alphabet(Arc<AlphabetInner>);

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.symbols == other.0.symbols
    }
}
impl Eq for Alphabet {}

impl std::hash::Hash for Alphabet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.symbols.hash(state);
    }
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Alphabet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), i as u32).is_some() {
                return Err(Error::Invalid(format!("duplicate symbol {s:?} in alphabet")));
            }
        }
        Ok(Alphabet(Arc::new(AlphabetInner { symbols, index })))
    }

    pub fn empty() -> Alphabet {
        Alphabet::new(Vec::<String>::new()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.0.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.symbols.is_empty()
    }

    pub fn symbol(&self, i: u32) -> &str {
        &self.0.symbols[i as usize]
    }

    pub fn index_of(&self, symbol: &str) -> Option<u32> {
        self.0.index.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.0.index.contains_key(symbol)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.0.symbols.iter().map(|s| s.as_str())
    }

    pub fn symbol_vec(&self) -> Vec<String> {
        self.0.symbols.clone()
    }

    /// `_x` for every symbol `x`.
    pub fn underlined(&self) -> Alphabet {
        Alphabet::new(self.symbols().map(|s| format!("_{s}"))).unwrap()
    }

    pub fn underline_symbol(s: &str) -> String {
        format!("_{s}")
    }

    /// Tagged disjoint union: `L:x` for the left operand, `R:x` for the right.
    pub fn disjoint_union(&self, other: &Alphabet) -> Alphabet {
        let syms = self
            .symbols()
            .map(|s| format!("L:{s}"))
            .chain(other.symbols().map(|s| format!("R:{s}")))
            .collect::<Vec<_>>();
        Alphabet::new(syms).unwrap()
    }

    /// Plain union; errors if the name sets overlap (callers that want
    /// overlap-safe unions should mangle first).
    pub fn union(&self, other: &Alphabet) -> Result<Alphabet> {
        Alphabet::new(
            self.symbols()
                .chain(other.symbols())
                .map(str::to_owned)
                .collect::<Vec<_>>(),
        )
    }

    /// Adjoin one fresh symbol at the end.
    pub fn adjoin(&self, symbol: &str) -> Result<Alphabet> {
        Alphabet::new(
            self.symbols()
                .chain(std::iter::once(symbol))
                .map(str::to_owned)
                .collect::<Vec<_>>(),
        )
    }

    /// Product alphabet with pairs `(a, b)` named `a:b`, ordered
    /// lexicographically by (left index, right index).
    pub fn product(&self, other: &Alphabet) -> Alphabet {
        let mut syms = Vec::with_capacity(self.len() * other.len());
        for a in self.symbols() {
            for b in other.symbols() {
                syms.push(format!("{a}:{b}"));
            }
        }
        Alphabet::new(syms).unwrap()
    }

    /// `{0..n-1} x self`, the product with a numeric level alphabet. Empty
    /// when `n = 0`.
    pub fn leveled(&self, n: usize) -> Alphabet {
        let levels = Alphabet::new((0..n).map(|i| i.to_string())).unwrap();
        levels.product(self)
    }

    /// Words over this alphabet of length `0..=max_len`, in length-lex order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty(self.clone())];
        let mut layer = vec![Word::empty(self.clone())];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.len());
            for w in &layer {
                for c in 0..self.len() as u32 {
                    let mut v = w.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// The sub-alphabet of the first `n` symbols (or all of them if fewer).
    pub fn prefix(&self, n: usize) -> Alphabet {
        Alphabet::new(self.symbols().take(n).map(str::to_owned).collect::<Vec<_>>()).unwrap()
    }
}

/// A word: a sequence of letters from a fixed alphabet.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<u32>,
}

impl Word {
    pub fn empty(alphabet: Alphabet) -> Word {
        Word { alphabet, letters: Vec::new() }
    }

    pub fn from_indices(alphabet: Alphabet, letters: Vec<u32>) -> Word {
        debug_assert!(letters.iter().all(|&i| (i as usize) < alphabet.len()));
        Word { alphabet, letters }
    }

    pub fn from_symbols<I, S>(alphabet: &Alphabet, symbols: I) -> Result<Word>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut letters = Vec::new();
        for s in symbols {
            let s = s.as_ref();
            let i = alphabet
                .index_of(s)
                .ok_or_else(|| Error::UnknownSymbol(s.to_owned()))?;
            letters.push(i);
        }
        Ok(Word { alphabet: alphabet.clone(), letters })
    }

    /// Parse a whitespace-separated list of symbols. The empty string parses
    /// to the empty word.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Word> {
        Word::from_symbols(alphabet, text.split_whitespace())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, i: usize) -> u32 {
        self.letters[i]
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn symbol_at(&self, i: usize) -> &str {
        self.alphabet.symbol(self.letters[i])
    }

    pub fn push(&mut self, letter: u32) {
        debug_assert!((letter as usize) < self.alphabet.len());
        self.letters.push(letter);
    }

    pub fn extend(&mut self, other: &Word) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "cannot concatenate word over {:?} with word over {:?}",
                self.alphabet.symbol_vec(),
                other.alphabet.symbol_vec()
            )));
        }
        self.letters.extend_from_slice(&other.letters);
        Ok(())
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        let mut w = self.clone();
        w.extend(other)?;
        Ok(w)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word {
            alphabet: self.alphabet.clone(),
            letters: self.letters[range].to_vec(),
        }
    }

    pub fn repeat(&self, n: usize) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() * n);
        for _ in 0..n {
            letters.extend_from_slice(&self.letters);
        }
        Word { alphabet: self.alphabet.clone(), letters }
    }

    pub fn reversed(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word { alphabet: self.alphabet.clone(), letters }
    }

    /// Number of occurrences of the given letter.
    pub fn count_letter(&self, letter: u32) -> usize {
        self.letters.iter().filter(|&&x| x == letter).count()
    }

    /// Number of occurrences of letters from the set.
    pub fn count_letters_in(&self, set: &BTreeSet<u32>) -> usize {
        self.letters.iter().filter(|x| set.contains(x)).count()
    }

    /// Re-express this word over another alphabet containing the same symbol
    /// names (indices are remapped by name).
    pub fn reindex(&self, target: &Alphabet) -> Result<Word> {
        Word::from_symbols(target, self.letters.iter().map(|&i| self.alphabet.symbol(i)))
    }
}

impl fmt::Display for Word {
    /// Space-separated symbols, which is also the CLI's word syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &i) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.alphabet.symbol(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// A morphism between free monoids, given by the images of the source
/// letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeMorphism {
    source: Alphabet,
    target: Alphabet,
    image: Vec<Word>,
}

impl FreeMorphism {
    pub fn new(source: Alphabet, target: Alphabet, image: Vec<Word>) -> Result<FreeMorphism> {
        if image.len() != source.len() {
            return Err(Error::Invalid(format!(
                "morphism needs {} images, got {}",
                source.len(),
                image.len()
            )));
        }
        for w in &image {
            if *w.alphabet() != target {
                return Err(Error::AlphabetMismatch(
                    "morphism image word not over the target alphabet".into(),
                ));
            }
        }
        Ok(FreeMorphism { source, target, image })
    }

    pub fn identity(alphabet: &Alphabet) -> FreeMorphism {
        let image = (0..alphabet.len() as u32)
            .map(|i| Word::from_indices(alphabet.clone(), vec![i]))
            .collect();
        FreeMorphism {
            source: alphabet.clone(),
            target: alphabet.clone(),
            image,
        }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn image_of(&self, letter: u32) -> &Word {
        &self.image[letter as usize]
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if *w.alphabet() != self.source {
            return Err(Error::AlphabetMismatch(
                "morphism applied to word over the wrong alphabet".into(),
            ));
        }
        let mut out = Word::empty(self.target.clone());
        for &c in w.letters() {
            out.extend(&self.image[c as usize])?;
        }
        Ok(out)
    }
}

/// A complete deterministic finite automaton.
#[derive(Clone, Debug, PartialEq)]
pub struct Dfa {
    pub alphabet: Alphabet,
    pub states: Vec<String>,
    pub initial: usize,
    pub accepting: BTreeSet<usize>,
    /// `delta[state][letter]`
    pub delta: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn validate(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(Error::Invalid("DFA needs at least one state".into()));
        }
        if self.initial >= self.states.len() {
            return Err(Error::Invalid("DFA initial state out of range".into()));
        }
        if self.delta.len() != self.states.len() {
            return Err(Error::Invalid("DFA transition table must cover every state".into()));
        }
        for row in &self.delta {
            if row.len() != self.alphabet.len() {
                return Err(Error::Invalid("DFA transition row must cover every letter".into()));
            }
            if row.iter().any(|&q| q >= self.states.len()) {
                return Err(Error::Invalid("DFA transition target out of range".into()));
            }
        }
        if self.accepting.iter().any(|&q| q >= self.states.len()) {
            return Err(Error::Invalid("DFA accepting state out of range".into()));
        }
        Ok(())
    }

    pub fn step(&self, q: usize, letter: u32) -> usize {
        self.delta[q][letter as usize]
    }

    pub fn run(&self, w: &Word) -> Result<usize> {
        if *w.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch("DFA run on word over wrong alphabet".into()));
        }
        let mut q = self.initial;
        for &c in w.letters() {
            q = self.step(q, c);
        }
        Ok(q)
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        Ok(self.accepting.contains(&self.run(w)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn alphabet_rejects_duplicates() {
        assert!(Alphabet::new(["a", "a"]).is_err());
    }

    #[test]
    fn mangling_schemes() {
        let g = ab();
        assert_eq!(g.underlined().symbol_vec(), vec!["_a", "_b"]);
        assert_eq!(
            g.disjoint_union(&g).symbol_vec(),
            vec!["L:a", "L:b", "R:a", "R:b"]
        );
        assert_eq!(g.leveled(2).symbol_vec(), vec!["0:a", "0:b", "1:a", "1:b"]);
        assert!(g.leveled(0).is_empty());
    }

    #[test]
    fn word_parse_display_roundtrip() {
        let g = ab();
        let w = Word::parse(&g, "a b b a").unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.to_string(), "a b b a");
        assert_eq!(Word::parse(&g, "").unwrap().len(), 0);
        assert!(Word::parse(&g, "a c").is_err());
    }

    #[test]
    fn words_up_to_counts() {
        let g = ab();
        // 1 + 2 + 4 + 8
        assert_eq!(g.words_up_to(3).len(), 15);
    }

    #[test]
    fn morphism_applies_letterwise() {
        let g = ab();
        let h = FreeMorphism::new(
            g.clone(),
            g.clone(),
            vec![Word::parse(&g, "a b").unwrap(), Word::empty(g.clone())],
        )
        .unwrap();
        let w = Word::parse(&g, "a b a").unwrap();
        assert_eq!(h.apply(&w).unwrap().to_string(), "a b a b");
    }

    #[test]
    fn dfa_even_length() {
        let g = ab();
        let dfa = Dfa {
            alphabet: g.clone(),
            states: vec!["even".into(), "odd".into()],
            initial: 0,
            accepting: [0].into_iter().collect(),
            delta: vec![vec![1, 1], vec![0, 0]],
        };
        dfa.validate().unwrap();
        assert!(dfa.accepts(&Word::parse(&g, "a b").unwrap()).unwrap());
        assert!(!dfa.accepts(&Word::parse(&g, "a b a").unwrap()).unwrap());
    }
}
