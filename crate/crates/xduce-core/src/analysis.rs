//! Producing triples over the finite quotient `M^cl01 ≀ Q`.
//!
//! A 1-split `(u, v, w)` of an input is *producing* for an output letter `c`
//! when deleting `v` strictly decreases the number of `c`s in the output;
//! otherwise the count is unchanged. Whether a split is producing depends
//! only on the images of `u`, `v`, `w` in `N(f) = M^cl01 ≀ Q`, where `M^cl01`
//! remembers a copyless shape plus, per register, the *set* of output letters
//! appended (multiplicities dropped, hence "01"). This module builds that
//! quotient, the morphism `ν_f`, the producing-triple table, the r-split
//! machinery on top, and a brute-force dichotomy checker.

use crate::alphabet::{Alphabet, Word};
use crate::assign::{Monoid, RegAssignment, Shape, Wreath};
use crate::sst::{check_copyless, letter_psi, run_sst, Sst};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// An element of `M^cl01`: a copyless shape together with the set of output
/// letters present in each register image.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cl01Element {
    pub shape: Shape,
    /// per register, the output letters occurring in the image
    pub presence: Vec<BTreeSet<u32>>,
}

impl Cl01Element {
    pub fn from_assignment(a: &RegAssignment) -> Cl01Element {
        let presence = (0..a.registers.len() as u32)
            .map(|r| {
                a.image_of(r)
                    .0
                    .iter()
                    .filter_map(|t| match t {
                        crate::assign::Tok::Out(c) => Some(*c),
                        crate::assign::Tok::Reg(_) => None,
                    })
                    .collect()
            })
            .collect();
        Cl01Element { shape: a.erase(), presence }
    }

    pub fn identity(registers: &Alphabet) -> Cl01Element {
        Cl01Element {
            shape: Shape::identity(registers),
            presence: vec![BTreeSet::new(); registers.len()],
        }
    }
}

impl Monoid for Cl01Element {
    /// `self` is applied first: the composite image of `r` is `rhs`'s image
    /// with registers replaced by `self`'s images, so the letters present are
    /// `rhs`'s plus those of every register `rhs` mentions.
    fn mul(&self, rhs: &Cl01Element) -> Cl01Element {
        let presence = (0..rhs.presence.len())
            .map(|r| {
                let mut set = rhs.presence[r].clone();
                for &r2 in rhs.shape.image_of(r as u32) {
                    set.extend(self.presence[r2 as usize].iter().copied());
                }
                set
            })
            .collect();
        Cl01Element { shape: self.shape.mul(&rhs.shape), presence }
    }
}

/// `ν_f(c)` for a single input letter.
pub fn nu_letter(t: &Sst, c: u32) -> Wreath<Cl01Element> {
    let psi = letter_psi(t, c);
    Wreath {
        map: psi
            .map
            .iter()
            .map(|(q, a)| (*q, Cl01Element::from_assignment(a)))
            .collect(),
    }
}

/// `ν_f(w)`, the image of a word (identity on `ε`).
pub fn nu_image(t: &Sst, w: &Word) -> Result<Wreath<Cl01Element>> {
    if *w.alphabet() != t.input {
        return Err(Error::AlphabetMismatch("ν image of a word over the wrong alphabet".into()));
    }
    let mut acc = Wreath::identity(t.states.len(), Cl01Element::identity(&t.registers));
    for &c in w.letters() {
        acc = acc.mul(&nu_letter(t, c));
    }
    Ok(acc)
}

/// Is the abstract triple producing for output letter `c`? Follows the
/// dichotomy criterion: with `q′` the state reached through `m_u`, `β` the
/// class of the middle at `q′` and `(q″, γ)` the landing data of `m_w`,
/// the triple produces `c` iff some register pumped by the middle (`c`
/// present in `β(r)`) survives into `γ`-substituted `F(q″)`.
pub fn is_producing(
    t: &Sst,
    m_u: &Wreath<Cl01Element>,
    m_v: &Wreath<Cl01Element>,
    m_w: &Wreath<Cl01Element>,
    c: u32,
) -> bool {
    let q1 = m_u.state_of(t.initial);
    let (q2, gamma) = m_w.apply(q1);
    let beta = &m_v.apply(q1).1;
    // |ω′|_r: occurrences of r once γ's shape is substituted into F(q″)
    let mut omega_count = vec![0usize; t.registers.len()];
    for tok in &t.output_fn[q2].0 {
        if let crate::assign::Tok::Reg(r) = tok {
            for &r2 in gamma.shape.image_of(*r) {
                omega_count[r2 as usize] += 1;
            }
        }
    }
    (0..t.registers.len()).any(|r| omega_count[r] > 0 && beta.presence[r].contains(&c))
}

/// Explored submonoid cap for [`build_triple_table`].
pub const TRIPLE_ELEMENT_BOUND: usize = 200;

#[derive(Clone, Debug)]
pub struct TripleTable {
    /// reachable ν-images, deduplicated; index 0 is `ν(ε)`
    pub elements: Vec<Wreath<Cl01Element>>,
    /// a witness word per element
    pub witnesses: Vec<Word>,
    /// per input letter, the element index of `ν(c)`
    pub letter_map: Vec<usize>,
    /// per output letter, the set of producing element-index triples
    pub producing: Vec<BTreeSet<(usize, usize, usize)>>,
}

impl TripleTable {
    pub fn index_of(&self, m: &Wreath<Cl01Element>) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }
}

/// Explore the submonoid generated by `ν_f(Γ)` and tabulate `P(f,c)` over
/// all triples of reachable elements.
pub fn build_triple_table(t: &Sst) -> Result<TripleTable> {
    t.validate()?;
    if !check_copyless(t) {
        return Err(Error::Inapplicable("producing triples need a copyless machine".into()));
    }
    let letters: Vec<Wreath<Cl01Element>> = (0..t.input.len() as u32).map(|c| nu_letter(t, c)).collect();
    let mut elements = vec![Wreath::identity(t.states.len(), Cl01Element::identity(&t.registers))];
    let mut witnesses = vec![Word::empty(t.input.clone())];
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let key = |m: &Wreath<Cl01Element>| format!("{m:?}");
    index.insert(key(&elements[0]), 0);
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for (c, mc) in letters.iter().enumerate() {
            let next = elements[i].mul(mc);
            let k = key(&next);
            if !index.contains_key(&k) {
                if elements.len() >= TRIPLE_ELEMENT_BOUND {
                    return Err(Error::Bound(format!(
                        "more than {TRIPLE_ELEMENT_BOUND} reachable ν-images"
                    )));
                }
                let mut w = witnesses[i].clone();
                w.push(c as u32);
                index.insert(k, elements.len());
                frontier.push(elements.len());
                elements.push(next);
                witnesses.push(w);
            }
        }
    }
    let letter_map = letters.iter().map(|m| index[&key(m)]).collect();
    let mut producing = vec![BTreeSet::new(); t.output.len()];
    for (i, mu) in elements.iter().enumerate() {
        for (j, mv) in elements.iter().enumerate() {
            for (k, mw) in elements.iter().enumerate() {
                for c in 0..t.output.len() as u32 {
                    if is_producing(t, mu, mv, mw, c) {
                        producing[c as usize].insert((i, j, k));
                    }
                }
            }
        }
    }
    Ok(TripleTable { elements, witnesses, letter_map, producing })
}

/// Does `cuts` describe an r-split of `s` under the morphism `phi`?
/// `cuts[0..=r]` are the boundaries of `s = u v₁ … v_r w`; all `vᵢ` must be
/// nonempty and the products must satisfy
/// `φ(u) = φ(uv₁) = … ` and `φ(w) = φ(v_r w) = …`.
pub fn is_r_split<M, F>(s: &Word, cuts: &[usize], mut phi: F) -> Result<bool>
where
    M: PartialEq,
    F: FnMut(&Word) -> Result<M>,
{
    if cuts.is_empty() {
        return Err(Error::Invalid("an r-split needs r+1 ≥ 2 cut positions".into()));
    }
    if cuts.iter().any(|&i| i > s.len()) || cuts.windows(2).any(|p| p[0] > p[1]) {
        return Err(Error::Invalid("cut positions must be ordered within the word".into()));
    }
    if cuts.windows(2).any(|p| p[0] == p[1]) {
        return Ok(false); // some vᵢ empty
    }
    let first = cuts[0];
    let last = *cuts.last().unwrap();
    let left = phi(&s.slice(0..first))?;
    for &i in cuts {
        if phi(&s.slice(0..i))? != left {
            return Ok(false);
        }
    }
    let right = phi(&s.slice(last..s.len()))?;
    for &i in cuts {
        if phi(&s.slice(i..s.len()))? != right {
            return Ok(false);
        }
    }
    Ok(true)
}

pub const SPLIT_ENUM_BOUND: usize = 14;

/// All cut tuples forming an r-split of `s` under `phi`.
pub fn enumerate_r_splits<M, F>(s: &Word, r: usize, mut phi: F) -> Result<Vec<Vec<usize>>>
where
    M: PartialEq,
    F: FnMut(&Word) -> Result<M>,
{
    if s.len() > SPLIT_ENUM_BOUND {
        return Err(Error::Bound(format!("split enumeration capped at length {SPLIT_ENUM_BOUND}")));
    }
    if r == 0 {
        return Err(Error::Invalid("r-splits need r ≥ 1".into()));
    }
    let mut out = Vec::new();
    let mut cuts = vec![0usize; r + 1];
    enumerate_rec(s, 0, 0, &mut cuts, &mut out, &mut phi)?;
    Ok(out)
}

fn enumerate_rec<M, F>(
    s: &Word,
    depth: usize,
    min: usize,
    cuts: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    phi: &mut F,
) -> Result<()>
where
    M: PartialEq,
    F: FnMut(&Word) -> Result<M>,
{
    if depth == cuts.len() {
        if is_r_split(s, cuts, &mut *phi)? {
            out.push(cuts.clone());
        }
        return Ok(());
    }
    // interior boundaries must strictly increase so the vᵢ are nonempty
    let lo = if depth == 0 { 0 } else { min + 1 };
    for i in lo..=s.len() {
        cuts[depth] = i;
        enumerate_rec(s, depth + 1, i, cuts, out, phi)?;
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct DichotomyReport {
    pub words_checked: usize,
    pub splits_checked: usize,
    pub producing_splits: usize,
    /// `None` means every split obeyed the dichotomy.
    pub failure: Option<String>,
}

impl DichotomyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Exhaustively verify the producing-triple dichotomy for output letter `c`:
/// over every word of length ≤ `max_len` and every 1-split of it, a
/// producing split must strictly increase the `c`-count relative to deleting
/// the middle, and a non-producing one must leave it unchanged.
pub fn check_dichotomy(t: &Sst, c: &str, max_len: usize) -> Result<DichotomyReport> {
    let c = t
        .output
        .index_of(c)
        .ok_or_else(|| Error::UnknownSymbol(c.to_owned()))?;
    let mut report = DichotomyReport {
        words_checked: 0,
        splits_checked: 0,
        producing_splits: 0,
        failure: None,
    };
    'words: for s in t.input.words_up_to(max_len) {
        report.words_checked += 1;
        for i in 0..=s.len() {
            for j in i + 1..=s.len() {
                let (u, v, w) = (s.slice(0..i), s.slice(i..j), s.slice(j..s.len()));
                let (mu, mv, mw) = (nu_image(t, &u)?, nu_image(t, &v)?, nu_image(t, &w)?);
                if mu.mul(&mv) != mu || mv.mul(&mw) != mw {
                    continue; // not a 1-split under ν_f
                }
                report.splits_checked += 1;
                let produced = is_producing(t, &mu, &mv, &mw, c);
                let full = run_sst(t, &s)?.count_letter(c);
                let dropped = run_sst(t, &u.concat(&w)?)?.count_letter(c);
                let ok = if produced { full > dropped } else { full == dropped };
                if produced {
                    report.producing_splits += 1;
                }
                if !ok {
                    report.failure = Some(format!(
                        "split u={u} v={v} w={w}: producing={produced}, |f(uvw)|_c={full}, |f(uw)|_c={dropped}"
                    ));
                    break 'words;
                }
            }
        }
    }
    Ok(report)
}

/// Is there an r-split of `s` whose r inner triples are all producing for
/// some letter of `pi`? Decides membership in the pumping language per word.
pub fn has_producing_r_split(t: &Sst, s: &Word, pi: &BTreeSet<u32>, r: usize) -> Result<bool> {
    if r == 0 || r > s.len() {
        return Ok(false);
    }
    let splits = enumerate_r_splits(s, r, |x| nu_image(t, x))?;
    for cuts in splits {
        let all_producing = (0..r).all(|i| {
            let u = s.slice(0..cuts[i]);
            let v = s.slice(cuts[i]..cuts[i + 1]);
            let w = s.slice(cuts[i + 1]..s.len());
            let (mu, mv, mw) = (
                nu_image(t, &u).unwrap(),
                nu_image(t, &v).unwrap(),
                nu_image(t, &w).unwrap(),
            );
            pi.iter().any(|&c| is_producing(t, &mu, &mv, &mw, c))
        });
        if all_producing {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines;

    #[test]
    fn quotient_projection_is_multiplicative() {
        let g = Alphabet::new(["a", "b", "#"]).unwrap();
        let t = machines::idreverse_sst();
        for u in g.words_up_to(2) {
            for v in g.words_up_to(2) {
                let uv = u.concat(&v).unwrap();
                assert_eq!(
                    nu_image(&t, &uv).unwrap(),
                    nu_image(&t, &u).unwrap().mul(&nu_image(&t, &v).unwrap()),
                    "u={u} v={v}"
                );
            }
        }
    }

    #[test]
    fn constant_machine_has_no_producing_triples() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let t = machines::const_sst(&g, &Word::parse(&g, "a b").unwrap());
        let table = build_triple_table(&t).unwrap();
        assert!(table.producing.iter().all(BTreeSet::is_empty));
        let report = check_dichotomy(&t, "a", 4).unwrap();
        assert!(report.passed());
        assert_eq!(report.producing_splits, 0);
    }

    #[test]
    fn identity_splits_always_produce() {
        let g = Alphabet::new(["a"]).unwrap();
        let t = machines::identity_sst(&g);
        let s = Word::parse(&g, "a a a a").unwrap();
        for i in 0..=s.len() {
            for j in i + 1..=s.len() {
                let mu = nu_image(&t, &s.slice(0..i)).unwrap();
                let mv = nu_image(&t, &s.slice(i..j)).unwrap();
                let mw = nu_image(&t, &s.slice(j..s.len())).unwrap();
                assert!(is_producing(&t, &mu, &mv, &mw, 0));
            }
        }
        // ν(ε) ≠ ν(aᵏ), so the chains force u and w nonempty: a 2-split
        // needs four letters and a 3-split five.
        assert!(has_producing_r_split(&t, &s, &BTreeSet::from([0]), 2).unwrap());
        assert!(!has_producing_r_split(&t, &s, &BTreeSet::from([0]), 3).unwrap());
        assert!(!has_producing_r_split(&t, &s, &BTreeSet::from([0]), 5).unwrap());
    }

    #[test]
    fn dichotomy_on_iterated_reverse() {
        let t = machines::idreverse_sst();
        for c in ["#", "a"] {
            let report = check_dichotomy(&t, c, 4).unwrap();
            assert!(report.passed(), "letter {c}: {:?}", report.failure);
        }
    }

    #[test]
    fn trivial_monoid_split_count() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let s = Word::parse(&g, "a b a").unwrap();
        let splits = enumerate_r_splits(&s, 1, |_| Ok(())).unwrap();
        assert_eq!(splits.len(), 6);
        assert!(enumerate_r_splits(&Word::empty(g), 1, |_| Ok(())).unwrap().is_empty());
    }
}
