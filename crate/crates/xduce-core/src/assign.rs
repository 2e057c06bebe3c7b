//! Register assignments, the substitution monoid they form, shapes (erased
//! assignments), wreath products with finite state maps, and idempotent
//! powers.
//!
//! An assignment over registers `R` and output alphabet `S` maps each
//! register to a word over `R + S`. Composition is substitution,
//!
//! `(a . b)(r) = a'(b(r))`
//!
//! where `a'` is `a` extended to fix output letters. Applying an assignment
//! to concrete register values (`dagger`) reverses the order:
//! `(a . b)+ = b+ o a+`, so reading an input word left to right multiplies
//! the per-letter assignments left to right.

use crate::alphabet::{Alphabet, Word};
use crate::{Error, Result};

/// One token of an assignment image: a register or an output letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tok {
    Reg(u32),
    Out(u32),
}

/// A word over `R + S`, stored as raw tokens. Alphabet context lives in the
/// owning [`RegAssignment`] (or SST).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MixedWord(pub Vec<Tok>);

impl MixedWord {
    pub fn empty() -> MixedWord {
        MixedWord(Vec::new())
    }

    pub fn registers(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().filter_map(|t| match t {
            Tok::Reg(r) => Some(*r),
            Tok::Out(_) => None,
        })
    }

    /// Parse from symbol names, trying registers first (they are required to
    /// be disjoint from output symbols).
    pub fn from_symbols<I, S>(registers: &Alphabet, output: &Alphabet, symbols: I) -> Result<MixedWord>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut toks = Vec::new();
        for s in symbols {
            let s = s.as_ref();
            if let Some(r) = registers.index_of(s) {
                toks.push(Tok::Reg(r));
            } else if let Some(c) = output.index_of(s) {
                toks.push(Tok::Out(c));
            } else {
                return Err(Error::UnknownSymbol(s.to_owned()));
            }
        }
        Ok(MixedWord(toks))
    }

    pub fn to_symbols(&self, registers: &Alphabet, output: &Alphabet) -> Vec<String> {
        self.0
            .iter()
            .map(|t| match t {
                Tok::Reg(r) => registers.symbol(*r).to_owned(),
                Tok::Out(c) => output.symbol(*c).to_owned(),
            })
            .collect()
    }
}

/// Elements of monoids we iterate and compose. `mul` must be associative.
pub trait Monoid: Clone + PartialEq {
    fn mul(&self, rhs: &Self) -> Self;
}

/// A register assignment `R -> (R + S)*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegAssignment {
    pub registers: Alphabet,
    pub output: Alphabet,
    /// indexed by register
    pub image: Vec<MixedWord>,
}

impl RegAssignment {
    pub fn new(registers: Alphabet, output: Alphabet, image: Vec<MixedWord>) -> Result<RegAssignment> {
        if image.len() != registers.len() {
            return Err(Error::Invalid(format!(
                "assignment needs {} images, got {}",
                registers.len(),
                image.len()
            )));
        }
        let a = RegAssignment { registers, output, image };
        a.check_tokens()?;
        Ok(a)
    }

    fn check_tokens(&self) -> Result<()> {
        for w in &self.image {
            for t in &w.0 {
                match *t {
                    Tok::Reg(r) if (r as usize) >= self.registers.len() => {
                        return Err(Error::Invalid("register token out of range".into()))
                    }
                    Tok::Out(c) if (c as usize) >= self.output.len() => {
                        return Err(Error::Invalid("output token out of range".into()))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn identity(registers: &Alphabet, output: &Alphabet) -> RegAssignment {
        RegAssignment {
            registers: registers.clone(),
            output: output.clone(),
            image: (0..registers.len() as u32)
                .map(|r| MixedWord(vec![Tok::Reg(r)]))
                .collect(),
        }
    }

    pub fn image_of(&self, r: u32) -> &MixedWord {
        &self.image[r as usize]
    }

    /// Substitution product `self . rhs`: first `self`, then `rhs`, in the
    /// sense that `(self . rhs)+ = rhs+ o self+`.
    pub fn compose(&self, rhs: &RegAssignment) -> RegAssignment {
        assert_eq!(self.registers, rhs.registers, "assignment register mismatch");
        assert_eq!(self.output, rhs.output, "assignment output mismatch");
        let image = rhs
            .image
            .iter()
            .map(|w| {
                let mut out = Vec::new();
                for t in &w.0 {
                    match *t {
                        Tok::Reg(r) => out.extend_from_slice(&self.image[r as usize].0),
                        Tok::Out(c) => out.push(Tok::Out(c)),
                    }
                }
                MixedWord(out)
            })
            .collect();
        RegAssignment {
            registers: self.registers.clone(),
            output: self.output.clone(),
            image,
        }
    }

    /// Apply to concrete register contents: the new value of `r` is the image
    /// word with register tokens replaced by the old values.
    pub fn dagger(&self, values: &[Word]) -> Result<Vec<Word>> {
        assert_eq!(values.len(), self.registers.len());
        self.image
            .iter()
            .map(|w| substitute_mixed(w, values, &self.output))
            .collect()
    }

    /// Forget output letters, keeping only the register skeleton.
    pub fn erase(&self) -> Shape {
        Shape {
            registers: self.registers.clone(),
            image: self
                .image
                .iter()
                .map(|w| w.registers().collect())
                .collect(),
        }
    }

    /// Copyless: every register occurs at most once across *all* images.
    pub fn is_copyless(&self) -> bool {
        self.erase().is_copyless()
    }

    /// Total occurrence count of register `r` across all images.
    pub fn occurrences(&self, r: u32) -> usize {
        self.image
            .iter()
            .map(|w| w.registers().filter(|&x| x == r).count())
            .sum()
    }
}

impl Monoid for RegAssignment {
    fn mul(&self, rhs: &Self) -> Self {
        self.compose(rhs)
    }
}

/// Substitute register tokens in a mixed word by concrete values.
pub fn substitute_mixed(w: &MixedWord, values: &[Word], output: &Alphabet) -> Result<Word> {
    let mut out = Word::empty(output.clone());
    for t in &w.0 {
        match *t {
            Tok::Reg(r) => out.extend(&values[r as usize])?,
            Tok::Out(c) => out.push(c),
        }
    }
    Ok(out)
}

/// An erased assignment `R -> R*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub registers: Alphabet,
    pub image: Vec<Vec<u32>>,
}

impl Shape {
    pub fn identity(registers: &Alphabet) -> Shape {
        Shape {
            registers: registers.clone(),
            image: (0..registers.len() as u32).map(|r| vec![r]).collect(),
        }
    }

    pub fn image_of(&self, r: u32) -> &[u32] {
        &self.image[r as usize]
    }

    pub fn compose(&self, rhs: &Shape) -> Shape {
        assert_eq!(self.registers, rhs.registers, "shape register mismatch");
        let image = rhs
            .image
            .iter()
            .map(|w| {
                let mut out = Vec::new();
                for &r in w {
                    out.extend_from_slice(&self.image[r as usize]);
                }
                out
            })
            .collect();
        Shape { registers: self.registers.clone(), image }
    }

    pub fn is_copyless(&self) -> bool {
        let mut seen = vec![false; self.registers.len()];
        for w in &self.image {
            for &r in w {
                if seen[r as usize] {
                    return false;
                }
                seen[r as usize] = true;
            }
        }
        true
    }

    /// Registers with empty image (`shape^{-1}(empty)`).
    pub fn dead_registers(&self) -> Vec<u32> {
        (0..self.registers.len() as u32)
            .filter(|&r| self.image[r as usize].is_empty())
            .collect()
    }
}

impl Monoid for Shape {
    fn mul(&self, rhs: &Self) -> Self {
        self.compose(rhs)
    }
}

/// An element of the wreath product `M wr Q`: a map sending each state to a
/// (next state, payload) pair. Composition threads states left to right and
/// multiplies payloads along the way.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Wreath<M> {
    /// indexed by state
    pub map: Vec<(usize, M)>,
}

impl<M> Wreath<M> {
    pub fn apply(&self, q: usize) -> (usize, &M) {
        let (q2, ref m) = self.map[q];
        (q2, m)
    }

    pub fn state_of(&self, q: usize) -> usize {
        self.map[q].0
    }
}

impl<M: Monoid> Wreath<M> {
    pub fn identity(states: usize, unit: M) -> Wreath<M> {
        Wreath {
            map: (0..states).map(|q| (q, unit.clone())).collect(),
        }
    }
}

impl<M: Monoid> Monoid for Wreath<M> {
    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.map.len(), rhs.map.len(), "wreath state count mismatch");
        let map = self
            .map
            .iter()
            .map(|(q1, m1)| {
                let (q2, ref m2) = rhs.map[*q1];
                (q2, m1.mul(m2))
            })
            .collect();
        Wreath { map }
    }
}

/// `m^n` with `n >= 1` by iterated multiplication.
pub fn monoid_power<M: Monoid>(m: &M, n: u64) -> M {
    assert!(n >= 1);
    let mut acc = m.clone();
    for _ in 1..n {
        acc = acc.mul(m);
    }
    acc
}

/// Least `n >= 1` with `m^n` idempotent, together with `m^n`. In a finite
/// monoid this always exists; `cap` guards against runaway iteration when
/// the ambient monoid is (erroneously) infinite.
pub fn idempotent_power<M: Monoid>(m: &M, cap: u64) -> Result<(u64, M)> {
    let mut acc = m.clone();
    for n in 1..=cap {
        if acc.mul(&acc) == acc {
            return Ok((n, acc));
        }
        acc = acc.mul(m);
    }
    Err(Error::Bound(format!("no idempotent power below {cap}")))
}

/// An assignment split into its shape and the constant label words between
/// register occurrences: if `a(r) = w_0 r_1 w_1 ... r_n w_n` then
/// `labels[r] = [w_0, ..., w_n]` and `shape(r) = r_1 ... r_n`. The pair
/// determines the assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeLabels {
    pub output: Alphabet,
    pub shape: Shape,
    pub labels: Vec<Vec<Word>>,
}

pub fn shape_label_split(a: &RegAssignment) -> ShapeLabels {
    let mut shape_image = Vec::with_capacity(a.image.len());
    let mut labels = Vec::with_capacity(a.image.len());
    for w in &a.image {
        let mut regs = Vec::new();
        let mut segs = vec![Word::empty(a.output.clone())];
        for t in &w.0 {
            match *t {
                Tok::Out(c) => segs.last_mut().unwrap().push(c),
                Tok::Reg(r) => {
                    regs.push(r);
                    segs.push(Word::empty(a.output.clone()));
                }
            }
        }
        shape_image.push(regs);
        labels.push(segs);
    }
    ShapeLabels {
        output: a.output.clone(),
        shape: Shape { registers: a.registers.clone(), image: shape_image },
        labels,
    }
}

pub fn shape_label_join(sl: &ShapeLabels) -> Result<RegAssignment> {
    let mut image = Vec::with_capacity(sl.shape.image.len());
    for (r, regs) in sl.shape.image.iter().enumerate() {
        let segs = &sl.labels[r];
        if segs.len() != regs.len() + 1 {
            return Err(Error::Invalid(format!(
                "register {} needs {} label segments, got {}",
                sl.shape.registers.symbol(r as u32),
                regs.len() + 1,
                segs.len()
            )));
        }
        let mut toks = Vec::new();
        for (i, seg) in segs.iter().enumerate() {
            toks.extend(seg.letters().iter().map(|&c| Tok::Out(c)));
            if i < regs.len() {
                toks.push(Tok::Reg(regs[i]));
            }
        }
        image.push(MixedWord(toks));
    }
    RegAssignment::new(sl.shape.registers.clone(), sl.output.clone(), image)
}

/// Enumeration bound for [`enumerate_copyless_shapes`]; the count grows
/// super-exponentially in `|R|`.
pub const SHAPE_ENUM_BOUND: usize = 4;

/// All copyless shapes over the given registers. There are 11 of them for
/// `|R| = 2`.
pub fn enumerate_copyless_shapes(registers: &Alphabet) -> Result<Vec<Shape>> {
    if registers.len() > SHAPE_ENUM_BOUND {
        return Err(Error::Bound(format!(
            "copyless shape enumeration limited to {SHAPE_ENUM_BOUND} registers, got {}",
            registers.len()
        )));
    }
    let n = registers.len();
    let mut out = Vec::new();
    let mut image: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut used = vec![false; n];
    // Pick the image of each register in turn; each image is an ordered
    // sequence of distinct still-unused letters.
    fn rec(
        registers: &Alphabet,
        r: usize,
        image: &mut Vec<Vec<u32>>,
        used: &mut Vec<bool>,
        out: &mut Vec<Shape>,
    ) {
        let n = image.len();
        if r == n {
            out.push(Shape { registers: registers.clone(), image: image.clone() });
            return;
        }
        // either close this image now...
        rec(registers, r + 1, image, used, out);
        // ...or extend it with any unused letter
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                image[r].push(x as u32);
                rec(registers, r, image, used, out);
                image[r].pop();
                used[x] = false;
            }
        }
    }
    rec(registers, 0, &mut image, &mut used, &mut out);
    Ok(out)
}
