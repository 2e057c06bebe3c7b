//! HDT0L systems: iterated morphisms with a final projection.
//!
//! A system over input Gamma, output Sigma and working alphabet Delta maps
//! `w_1 ... w_n` to `h'(h_{w_1}(... h_{w_n}(d) ...))`: the *last* input
//! letter acts on the seed word first. On unary inputs this is just a power
//! of one morphism, which is what the pumping analysis exploits.
//!
//! The translations here are the two halves of the SST correspondence
//! (`k`-layered SSTs match `(k+1)`-layered systems) plus the single-state
//! embedding of an arbitrary system into an SST, and the `map` combinator
//! that applies a system blockwise between separators.

use crate::alphabet::{Alphabet, FreeMorphism, Word};
use crate::assign::{MixedWord, Monoid, RegAssignment, Shape, Tok};
use crate::sst::{check_layered, Sst};
use crate::{Error, Result};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Hdt0lSystem {
    pub input: Alphabet,
    pub output: Alphabet,
    pub working: Alphabet,
    pub initial_word: Word,
    /// per input letter, an endomorphism of the working alphabet
    pub rules: Vec<FreeMorphism>,
    /// the final projection into the output alphabet
    pub final_rule: FreeMorphism,
}

impl Hdt0lSystem {
    pub fn validate(&self) -> Result<()> {
        if self.rules.len() != self.input.len() {
            return Err(Error::Invalid("one rule per input letter required".into()));
        }
        for h in &self.rules {
            if *h.source() != self.working || *h.target() != self.working {
                return Err(Error::AlphabetMismatch(
                    "rule must be an endomorphism of the working alphabet".into(),
                ));
            }
        }
        if *self.final_rule.source() != self.working || *self.final_rule.target() != self.output {
            return Err(Error::AlphabetMismatch(
                "final rule must map working to output".into(),
            ));
        }
        if *self.initial_word.alphabet() != self.working {
            return Err(Error::AlphabetMismatch("initial word not over working alphabet".into()));
        }
        Ok(())
    }
}

pub fn run_hdt0l(sys: &Hdt0lSystem, w: &Word) -> Result<Word> {
    if *w.alphabet() != sys.input {
        return Err(Error::AlphabetMismatch("HDT0L run on word over wrong alphabet".into()));
    }
    let mut v = sys.initial_word.clone();
    for &c in w.letters().iter().rev() {
        v = sys.rules[c as usize].apply(&v)?;
    }
    sys.final_rule.apply(&v)
}

/// Layering for HDT0L systems: an ordered partition of the working alphabet
/// such that every rule keeps letter images inside the lower-closed layers
/// and is copyless within each layer. The seed word and final rule are
/// unconstrained.
pub fn check_layered_hdt0l(sys: &Hdt0lSystem, blocks: &[Vec<u32>]) -> Result<bool> {
    let n = sys.working.len();
    let mut layer = vec![usize::MAX; n];
    for (i, block) in blocks.iter().enumerate() {
        for &x in block {
            if (x as usize) >= n {
                return Err(Error::Invalid("layer block letter out of range".into()));
            }
            if layer[x as usize] != usize::MAX {
                return Err(Error::Invalid("layer blocks must be disjoint".into()));
            }
            layer[x as usize] = i;
        }
    }
    if layer.iter().any(|&l| l == usize::MAX) {
        return Err(Error::Invalid("layer blocks must cover the working alphabet".into()));
    }
    for h in &sys.rules {
        for x in 0..n {
            let lx = layer[x];
            if h.image_of(x as u32).letters().iter().any(|&y| layer[y as usize] > lx) {
                return Ok(false);
            }
        }
        for i in 0..blocks.len() {
            let mut seen = vec![false; n];
            for x in 0..n {
                if layer[x] != i {
                    continue;
                }
                for &y in h.image_of(x as u32).letters() {
                    if layer[y as usize] == i {
                        if seen[y as usize] {
                            return Ok(false);
                        }
                        seen[y as usize] = true;
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Working-alphabet bound for [`infer_layering_hdt0l`]'s exhaustive search.
pub const HDT0L_LAYER_SEARCH_BOUND: usize = 8;

/// Search for an ordered partition of the working alphabet into `j + 1`
/// blocks witnessing that the system is `j`-layered. Exhaustive over layer
/// assignments, so bounded to [`HDT0L_LAYER_SEARCH_BOUND`] working letters;
/// returns the first witness in lexicographic order, or `None`.
pub fn infer_layering_hdt0l(sys: &Hdt0lSystem, j: usize) -> Result<Option<Vec<Vec<u32>>>> {
    let n = sys.working.len();
    if n > HDT0L_LAYER_SEARCH_BOUND {
        return Err(Error::Bound(format!(
            "HDT0L layering search limited to {HDT0L_LAYER_SEARCH_BOUND} working letters, got {n}"
        )));
    }
    let num_blocks = j + 1;
    let mut assignment = vec![0usize; n];
    loop {
        let blocks: Vec<Vec<u32>> = (0..num_blocks)
            .map(|i| (0..n as u32).filter(|&x| assignment[x as usize] == i).collect())
            .collect();
        if check_layered_hdt0l(sys, &blocks)? {
            return Ok(Some(blocks));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if assignment[i] + 1 < num_blocks {
                assignment[i] += 1;
                assignment[i + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

fn make_disjoint(mut names: Vec<String>, other: &Alphabet) -> Vec<String> {
    while names.iter().any(|n| other.contains(n)) {
        names = names.into_iter().map(|n| format!("#{n}")).collect();
    }
    names
}

/// Embed an arbitrary HDT0L system into a single-state SST: one register per
/// working letter, updated by the rules read as register assignments, seeded
/// with the final images and finished with the seed word.
pub fn hdt0l_to_sst(sys: &Hdt0lSystem) -> Result<Sst> {
    sys.validate()?;
    let registers = Alphabet::new(make_disjoint(sys.working.symbol_vec(), &sys.output))?;
    let transitions = vec![sys
        .rules
        .iter()
        .map(|h| {
            let image = (0..sys.working.len() as u32)
                .map(|x| MixedWord(h.image_of(x).letters().iter().map(|&y| Tok::Reg(y)).collect()))
                .collect();
            (
                0usize,
                RegAssignment::new(registers.clone(), sys.output.clone(), image).unwrap(),
            )
        })
        .collect()];
    let initial_values = (0..sys.working.len() as u32)
        .map(|x| sys.final_rule.image_of(x).clone())
        .collect();
    let output_fn = vec![MixedWord(
        sys.initial_word.letters().iter().map(|&x| Tok::Reg(x)).collect(),
    )];
    let t = Sst {
        input: sys.input.clone(),
        output: sys.output.clone(),
        registers,
        states: vec!["q".into()],
        initial: 0,
        initial_values,
        transitions,
        output_fn,
    };
    t.validate()?;
    Ok(t)
}

/// Translate a `k`-layered SST (witnessed by `blocks`) into a
/// `(k+1)`-layered HDT0L system. Returns the system together with its layer
/// partition: a fresh bottom layer of underlined output letters (named
/// `u:c`), then the SST layers, everything paired with the states (`r@q`).
pub fn sst_to_hdt0l(t: &Sst, blocks: &[Vec<u32>]) -> Result<(Hdt0lSystem, Vec<Vec<u32>>)> {
    t.validate()?;
    if !check_layered(t, blocks)? {
        return Err(Error::Inapplicable(
            "sst_to_hdt0l needs a layering witness that actually checks out".into(),
        ));
    }
    let nq = t.states.len();
    let nsig = t.output.len();
    // R' = underlined output letters + original registers
    let rp_names: Vec<String> = t
        .output
        .symbols()
        .map(|c| format!("u:{c}"))
        .chain(t.registers.symbols().map(str::to_owned))
        .collect();
    let nrp = rp_names.len();
    // working letters (r', q), grouped by r' then q
    let working = Alphabet::new(make_disjoint(
        rp_names
            .iter()
            .flat_map(|r| t.states.iter().map(move |q| format!("{r}@{q}")))
            .collect(),
        &t.output,
    ))?;
    let pair = |rp: usize, q: usize| -> u32 { (rp * nq + q) as u32 };

    // images of T' (underline output letters inside register words)
    let underline_mixed = |w: &MixedWord| -> Vec<usize> {
        w.0.iter()
            .map(|tok| match *tok {
                Tok::Out(c) => c as usize,
                Tok::Reg(r) => nsig + r as usize,
            })
            .collect()
    };

    // block order for d: initial state first, then the rest in index order
    let state_order: Vec<usize> = std::iter::once(t.initial)
        .chain((0..nq).filter(|&q| q != t.initial))
        .collect();
    let mut d = Word::empty(working.clone());
    for &q in &state_order {
        for &rp in &underline_mixed(&t.output_fn[q]) {
            d.push(pair(rp, q));
        }
    }

    let rules = (0..t.input.len())
        .map(|c| {
            let mut image = Vec::with_capacity(working.len());
            for rp in 0..nrp {
                for q in 0..nq {
                    let mut w = Word::empty(working.clone());
                    // predecessors of q under c, in state order
                    for p in 0..nq {
                        let (next, a) = &t.transitions[p][c];
                        if *next != q {
                            continue;
                        }
                        if rp < nsig {
                            // underlined letters are fixed by T'
                            w.push(pair(rp, p));
                        } else {
                            for &x in &underline_mixed(&a.image[rp - nsig]) {
                                w.push(pair(x, p));
                            }
                        }
                    }
                    image.push(w);
                }
            }
            FreeMorphism::new(working.clone(), working.clone(), image).unwrap()
        })
        .collect();

    let mut final_image = Vec::with_capacity(working.len());
    for rp in 0..nrp {
        for q in 0..nq {
            if q != t.initial {
                final_image.push(Word::empty(t.output.clone()));
            } else if rp < nsig {
                final_image.push(Word::from_indices(t.output.clone(), vec![rp as u32]));
            } else {
                final_image.push(t.initial_values[rp - nsig].clone());
            }
        }
    }
    let final_rule = FreeMorphism::new(working.clone(), t.output.clone(), final_image)?;

    // layer partition: underlined letters at the bottom, then the SST layers
    let mut out_blocks: Vec<Vec<u32>> = Vec::with_capacity(blocks.len() + 1);
    out_blocks.push(
        (0..nsig)
            .flat_map(|rp| (0..nq).map(move |q| pair(rp, q)))
            .collect(),
    );
    for block in blocks {
        out_blocks.push(
            block
                .iter()
                .flat_map(|&r| (0..nq).map(move |q| pair(nsig + r as usize, q)))
                .collect(),
        );
    }

    let sys = Hdt0lSystem {
        input: t.input.clone(),
        output: t.output.clone(),
        working,
        initial_word: d,
        rules,
        final_rule,
    };
    sys.validate()?;
    Ok((sys, out_blocks))
}

/// Cap on the reachable shape space of [`layered_hdt0l_to_sst`].
pub const HDT0L_SHAPE_BOUND: usize = 100_000;

/// Translate a `(k+1)`-layered HDT0L system (witnessed by `blocks`, whose
/// first block is the bottom layer `Delta_0`) into a `k`-layered SST.
/// States are the shapes over `Delta_0` reachable by composing the rules,
/// registers are the remaining working letters.
pub fn layered_hdt0l_to_sst(sys: &Hdt0lSystem, blocks: &[Vec<u32>]) -> Result<Sst> {
    sys.validate()?;
    if blocks.is_empty() {
        return Err(Error::Invalid("need at least one layer block".into()));
    }
    if !check_layered_hdt0l(sys, blocks)? {
        return Err(Error::Inapplicable(
            "layered_hdt0l_to_sst needs a layering witness that actually checks out".into(),
        ));
    }

    let delta0_global: Vec<u32> = blocks[0].clone();
    let delta0 = Alphabet::new(
        delta0_global
            .iter()
            .map(|&x| sys.working.symbol(x).to_owned())
            .collect::<Vec<_>>(),
    )?;
    let mut local_of = HashMap::new(); // working index -> delta0 index
    for (i, &x) in delta0_global.iter().enumerate() {
        local_of.insert(x, i as u32);
    }

    // registers: everything outside the bottom layer, in layer order
    let reg_global: Vec<u32> = blocks[1..].iter().flatten().copied().collect();
    let registers = Alphabet::new(make_disjoint(
        reg_global
            .iter()
            .map(|&x| sys.working.symbol(x).to_owned())
            .collect(),
        &sys.output,
    ))?;
    let mut reg_of = HashMap::new(); // working index -> register index
    for (i, &x) in reg_global.iter().enumerate() {
        reg_of.insert(x, i as u32);
    }

    // the rule of c restricted to the bottom layer, as a shape over delta0
    let rule_shape = |c: usize| -> Shape {
        Shape {
            registers: delta0.clone(),
            image: delta0_global
                .iter()
                .map(|&x| {
                    sys.rules[c]
                        .image_of(x)
                        .letters()
                        .iter()
                        .map(|&y| local_of[&y])
                        .collect()
                })
                .collect(),
        }
    };
    let letter_shapes: Vec<Shape> = (0..sys.input.len()).map(rule_shape).collect();

    // reachable shapes
    let id = Shape::identity(&delta0);
    let mut shapes = vec![id.clone()];
    let mut shape_index = HashMap::from([(id, 0usize)]);
    let mut frontier = vec![0usize];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    while let Some(n) = frontier.pop() {
        let mut row = Vec::with_capacity(sys.input.len());
        for ls in &letter_shapes {
            let s2 = shapes[n].mul(ls);
            let m = match shape_index.get(&s2) {
                Some(&m) => m,
                None => {
                    let m = shapes.len();
                    if m >= HDT0L_SHAPE_BOUND {
                        return Err(Error::Bound("too many reachable bottom-layer shapes".into()));
                    }
                    shapes.push(s2.clone());
                    shape_index.insert(s2, m);
                    frontier.push(m);
                    m
                }
            };
            row.push(m);
        }
        while edges.len() <= n {
            edges.push(Vec::new());
        }
        edges[n] = row;
    }

    // substitute a bottom-layer letter by its finalized value under the
    // current shape
    let finalize = |shape: &Shape, x: u32| -> Word {
        let mut w = Word::empty(sys.output.clone());
        for &y in shape.image_of(local_of[&x]) {
            w.extend(sys.final_rule.image_of(delta0_global[y as usize]))
                .unwrap();
        }
        w
    };

    let states: Vec<String> = (0..shapes.len()).map(|i| format!("s{i}")).collect();
    let mut transitions = Vec::with_capacity(shapes.len());
    for (n, shape) in shapes.iter().enumerate() {
        let mut row = Vec::with_capacity(sys.input.len());
        for c in 0..sys.input.len() {
            let image = reg_global
                .iter()
                .map(|&x| {
                    let mut toks = Vec::new();
                    for &y in sys.rules[c].image_of(x).letters() {
                        match reg_of.get(&y) {
                            Some(&r) => toks.push(Tok::Reg(r)),
                            None => {
                                for &s in finalize(shape, y).letters() {
                                    toks.push(Tok::Out(s));
                                }
                            }
                        }
                    }
                    MixedWord(toks)
                })
                .collect();
            row.push((
                edges[n][c],
                RegAssignment::new(registers.clone(), sys.output.clone(), image)?,
            ));
        }
        transitions.push(row);
    }

    let output_fn = shapes
        .iter()
        .map(|shape| {
            let mut toks = Vec::new();
            for &x in sys.initial_word.letters() {
                match reg_of.get(&x) {
                    Some(&r) => toks.push(Tok::Reg(r)),
                    None => {
                        for &s in finalize(shape, x).letters() {
                            toks.push(Tok::Out(s));
                        }
                    }
                }
            }
            MixedWord(toks)
        })
        .collect();

    let initial_values = reg_global
        .iter()
        .map(|&x| sys.final_rule.image_of(x).clone())
        .collect();

    let t = Sst {
        input: sys.input.clone(),
        output: sys.output.clone(),
        registers,
        states,
        initial: 0,
        initial_values,
        transitions,
        output_fn,
    };
    t.validate()?;
    Ok(t)
}

/// `map f` over separator-delimited blocks: the result sends
/// `u_1 sep u_2 sep ... u_m` to `f(u_1) sep f(u_2) sep ... f(u_m)`.
///
/// The seed word is first disjointified (one tagged copy of the working
/// alphabet per seed position) so that the construction preserves layering;
/// the returned partition puts output letters and the separator at the
/// bottom and the restart letter on top. Pass the system's layer blocks to
/// get the corresponding blocks of the result, or `None` to skip that.
pub fn map_hdt0l(
    sys: &Hdt0lSystem,
    sep: &str,
    blocks: Option<&[Vec<u32>]>,
) -> Result<(Hdt0lSystem, Option<Vec<Vec<u32>>>)> {
    sys.validate()?;
    if sys.input.contains(sep) || sys.output.contains(sep) {
        return Err(Error::Invalid(format!(
            "separator {sep:?} must be fresh for input and output"
        )));
    }
    let input = sys.input.adjoin(sep)?;
    let output = sys.output.adjoin(sep)?;
    let n = sys.initial_word.len();
    let nw = sys.working.len();

    // tagged copies of the working alphabet, one per seed position
    let tagged_names: Vec<String> = (0..n)
        .flat_map(|i| sys.working.symbols().map(move |x| format!("{}:{x}", i + 1)))
        .collect();
    let tagged_names = make_disjoint(tagged_names, &output);
    let mut restart = "X".to_owned();
    while output.contains(&restart) || tagged_names.contains(&restart) {
        restart.push('\'');
    }
    let working = Alphabet::new(
        tagged_names
            .iter()
            .cloned()
            .chain(output.symbols().map(str::to_owned))
            .chain(std::iter::once(restart.clone()))
            .collect::<Vec<_>>(),
    )?;
    let tag = |i: usize, x: u32| -> u32 { (i * nw + x as usize) as u32 };
    let out_letter = |c: u32| -> u32 { (n * nw) as u32 + c };
    let restart_letter = (n * nw + output.len()) as u32;
    let sep_out = output.index_of(sep).unwrap();

    // seed: restart letter followed by the disjointified seed word
    let mut seed = Word::empty(working.clone());
    seed.push(restart_letter);
    for (i, &x) in sys.initial_word.letters().iter().enumerate() {
        seed.push(tag(i, x));
    }

    let tag_word = |i: usize, w: &Word| -> Vec<u32> {
        w.letters().iter().map(|&x| tag(i, x)).collect()
    };
    let embed_output = |w: &Word| -> Vec<u32> {
        w.letters()
            .iter()
            .map(|&c| out_letter(output.index_of(sys.output.symbol(c)).unwrap()))
            .collect()
    };

    let mut rules = Vec::with_capacity(input.len());
    for c in 0..input.len() {
        let is_sep = input.symbol(c as u32) == sep;
        let mut image = Vec::with_capacity(working.len());
        for i in 0..n {
            for x in 0..nw as u32 {
                let w = if is_sep {
                    // finalize the running block
                    embed_output(sys.final_rule.image_of(x))
                } else {
                    let orig = sys.input.index_of(input.symbol(c as u32)).unwrap();
                    tag_word(i, sys.rules[orig as usize].image_of(x))
                };
                image.push(Word::from_indices(working.clone(), w));
            }
        }
        for s in 0..output.len() as u32 {
            image.push(Word::from_indices(working.clone(), vec![out_letter(s)]));
        }
        // restart letter: on a separator, re-emit a fresh seed after itself
        let restart_image = if is_sep {
            let mut w = vec![restart_letter];
            w.extend(seed.letters()[1..].iter().copied());
            w.push(out_letter(sep_out));
            w
        } else {
            vec![restart_letter]
        };
        image.push(Word::from_indices(working.clone(), restart_image));
        rules.push(FreeMorphism::new(working.clone(), working.clone(), image)?);
    }

    let mut final_image = Vec::with_capacity(working.len());
    for _i in 0..n {
        for x in 0..nw as u32 {
            final_image.push(Word::from_indices(
                output.clone(),
                sys.final_rule
                    .image_of(x)
                    .letters()
                    .iter()
                    .map(|&s| output.index_of(sys.output.symbol(s)).unwrap())
                    .collect(),
            ));
        }
    }
    for s in 0..output.len() as u32 {
        final_image.push(Word::from_indices(output.clone(), vec![s]));
    }
    final_image.push(Word::empty(output.clone()));
    let final_rule = FreeMorphism::new(working.clone(), output.clone(), final_image)?;

    let out_blocks = blocks.map(|blocks| {
        let mut out: Vec<Vec<u32>> = Vec::with_capacity(blocks.len() + 1);
        out.push((0..output.len() as u32).map(out_letter).collect());
        for block in blocks {
            out.push(
                block
                    .iter()
                    .flat_map(|&x| (0..n).map(move |i| tag(i, x)))
                    .collect(),
            );
        }
        out.last_mut().unwrap().push(restart_letter);
        out
    });

    let mapped = Hdt0lSystem {
        input,
        output,
        working,
        initial_word: seed,
        rules,
        final_rule,
    };
    mapped.validate()?;
    Ok((mapped, out_blocks))
}

/// Reference semantics for `map`: split, apply, rejoin.
pub fn map_reference(sys: &Hdt0lSystem, sep: &str, w: &Word) -> Result<Word> {
    let output = sys.output.adjoin(sep)?;
    let sep_in = w
        .alphabet()
        .index_of(sep)
        .ok_or_else(|| Error::UnknownSymbol(sep.to_owned()))?;
    let mut blocks: Vec<Vec<u32>> = vec![Vec::new()];
    for &c in w.letters() {
        if c == sep_in {
            blocks.push(Vec::new());
        } else {
            blocks.last_mut().unwrap().push(c);
        }
    }
    let mut out = Word::empty(output.clone());
    let sep_out = output.index_of(sep).unwrap();
    for (i, block) in blocks.iter().enumerate() {
        if i > 0 {
            out.push(sep_out);
        }
        let u = Word::from_symbols(
            &sys.input,
            block.iter().map(|&c| w.alphabet().symbol(c)),
        )?;
        out.extend(&run_hdt0l(sys, &u)?.reindex(&output)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines;
    use crate::sst::{run_sst, infer_layering};

    #[test]
    fn unary_squaring_system() {
        let sys = machines::squaring_unary_hdt0l();
        sys.validate().unwrap();
        for n in 0..6 {
            let w = Word::from_indices(sys.input.clone(), vec![0; n]);
            assert_eq!(run_hdt0l(&sys, &w).unwrap().len(), n * n);
        }
    }

    #[test]
    fn layering_inference_finds_minimal_witness() {
        let sys = machines::squaring_unary_hdt0l();
        assert!(infer_layering_hdt0l(&sys, 1).unwrap().is_none());
        let blocks = infer_layering_hdt0l(&sys, 2).unwrap().expect("two-layered");
        assert!(check_layered_hdt0l(&sys, &blocks).unwrap());
    }

    #[test]
    fn hdt0l_embeds_into_single_state_sst() {
        let sys = machines::squaring_unary_hdt0l();
        let t = hdt0l_to_sst(&sys).unwrap();
        assert_eq!(t.states.len(), 1);
        for n in 0..6 {
            let w = Word::from_indices(sys.input.clone(), vec![0; n]);
            assert_eq!(run_sst(&t, &w).unwrap(), run_hdt0l(&sys, &w).unwrap());
        }
    }

    #[test]
    fn sst_roundtrip_through_hdt0l() {
        let t = machines::idreverse_sst();
        let blocks = infer_layering(&t, 0).unwrap().expect("copyless");
        let (sys, sys_blocks) = sst_to_hdt0l(&t, &blocks).unwrap();
        assert!(check_layered_hdt0l(&sys, &sys_blocks).unwrap());
        let back = layered_hdt0l_to_sst(&sys, &sys_blocks).unwrap();
        for w in t.input.words_up_to(4) {
            let want = run_sst(&t, &w).unwrap();
            assert_eq!(run_hdt0l(&sys, &w).unwrap(), want, "forward on {w:?}");
            assert_eq!(run_sst(&back, &w).unwrap(), want, "roundtrip on {w:?}");
        }
    }

    #[test]
    fn map_applies_blockwise() {
        let sys = machines::squaring_unary_hdt0l();
        let blocks = [vec![0], vec![1], vec![2]];
        assert!(check_layered_hdt0l(&sys, &blocks).unwrap());
        let (mapped, mapped_blocks) = map_hdt0l(&sys, "#", Some(&blocks)).unwrap();
        assert!(check_layered_hdt0l(&mapped, mapped_blocks.as_ref().unwrap()).unwrap());
        for w in mapped.input.words_up_to(4) {
            assert_eq!(
                run_hdt0l(&mapped, &w).unwrap(),
                map_reference(&sys, "#", &w).unwrap(),
                "on {w:?}"
            );
        }
    }
}
