//! A small zoo of named machines used across tests, docs and the corpus.
//!
//! Everything here is built through the public constructors, so these also
//! serve as worked examples of the data model.

use crate::alphabet::{Alphabet, Dfa, Word};
use crate::assign::{MixedWord, RegAssignment};
use crate::cfpt::{Cfpt, CfptRule, StackAction};
use crate::hdt0l::Hdt0lSystem;
use crate::sst::{SequentialTransducer, Sst};
use std::collections::{BTreeMap, BTreeSet};

/// The output alphabet `Γ ∪ Γ̲` shared by the squaring-style machines.
pub fn with_underlined(g: &Alphabet) -> Alphabet {
    g.union(&g.underlined()).expect("underlining is collision-free")
}

/// A register name that avoids every listed alphabet.
fn fresh(base: &str, avoid: &[&Alphabet]) -> String {
    let mut name = base.to_owned();
    while avoid.iter().any(|a| a.contains(&name)) {
        name = format!("#{name}");
    }
    name
}

/// Reversed prefixes with underlined heads:
/// `1234 ↦ 4̲321 3̲21 2̲1 1̲`. Single state, one-layered, not copyless
/// (the prefix register feeds both itself and the accumulator).
pub fn prefixes_sst(g: &Alphabet) -> Sst {
    let output = with_underlined(g);
    let x = fresh("X", &[&output]);
    let y = fresh("Y", &[&output]);
    let registers = Alphabet::new([x.as_str(), y.as_str()]).unwrap();
    let transitions: Vec<(usize, RegAssignment)> = g
        .symbols()
        .map(|c| {
            let a = RegAssignment::new(
                registers.clone(),
                output.clone(),
                vec![
                    MixedWord::from_symbols(&registers, &output, [c, &x]).unwrap(),
                    MixedWord::from_symbols(
                        &registers,
                        &output,
                        [Alphabet::underline_symbol(c).as_str(), &x, &y],
                    )
                    .unwrap(),
                ],
            )
            .unwrap();
            (0, a)
        })
        .collect();
    Sst {
        input: g.clone(),
        output: output.clone(),
        registers: registers.clone(),
        states: vec!["q".into()],
        initial: 0,
        initial_values: vec![Word::empty(output.clone()), Word::empty(output.clone())],
        transitions: vec![transitions],
        output_fn: vec![MixedWord::from_symbols(&registers, &output, [y.as_str()]).unwrap()],
    }
}

/// The second stage of the squaring decomposition: reads the output of
/// [`prefixes_sst`] and produces `squaring_Γ`, e.g.
/// `4̲321 3̲21 2̲1 1̲ ↦ 1̲234 12̲34 123̲4 1234̲`.
pub fn squaring_stage2(g: &Alphabet) -> Sst {
    let inout = with_underlined(g);
    let x = fresh("X", &[&inout]);
    let y = fresh("Y", &[&inout]);
    let registers = Alphabet::new([x.as_str(), y.as_str()]).unwrap();
    let mut transitions = Vec::with_capacity(inout.len());
    for s in inout.symbols() {
        let images = if let Some(plain) = s.strip_prefix('_') {
            // underlined head: restart the running prefix, flush the block
            vec![
                MixedWord::from_symbols(&registers, &inout, [plain, &x]).unwrap(),
                MixedWord::from_symbols(&registers, &inout, [s, &x, &y]).unwrap(),
            ]
        } else {
            vec![
                MixedWord::from_symbols(&registers, &inout, [x.as_str()]).unwrap(),
                MixedWord::from_symbols(&registers, &inout, [s, &y]).unwrap(),
            ]
        };
        transitions.push((0, RegAssignment::new(registers.clone(), inout.clone(), images).unwrap()));
    }
    Sst {
        input: inout.clone(),
        output: inout.clone(),
        registers: registers.clone(),
        states: vec!["q".into()],
        initial: 0,
        initial_values: vec![Word::empty(inout.clone()), Word::empty(inout.clone())],
        transitions: vec![transitions],
        output_fn: vec![MixedWord::from_symbols(&registers, &inout, [y.as_str()]).unwrap()],
    }
}

/// Iterated reverse over `g ∪ {#}`: reverses every `#`-separated block in
/// place. Copyless with two registers.
pub fn idreverse_over(letters: &Alphabet) -> Sst {
    let sep = fresh("#", &[letters]);
    let g = letters.adjoin(&sep).unwrap();
    let x = fresh("X", &[&g]);
    let y = fresh("Y", &[&g]);
    let registers = Alphabet::new([x.as_str(), y.as_str()]).unwrap();
    let mk = |images: [&[&str]; 2]| {
        RegAssignment::new(
            registers.clone(),
            g.clone(),
            images
                .iter()
                .map(|syms| MixedWord::from_symbols(&registers, &g, syms.iter().copied()).unwrap())
                .collect(),
        )
        .unwrap()
    };
    let mut row: Vec<(usize, RegAssignment)> = letters
        .symbols()
        .map(|c| (0, mk([&[x.as_str()], &[c, y.as_str()]])))
        .collect();
    row.push((0, mk([&[x.as_str(), y.as_str(), sep.as_str()], &[]])));
    Sst {
        input: g.clone(),
        output: g.clone(),
        registers: registers.clone(),
        states: vec!["q".into()],
        initial: 0,
        initial_values: vec![Word::empty(g.clone()), Word::empty(g.clone())],
        transitions: vec![row],
        output_fn: vec![MixedWord::from_symbols(&registers, &g, [x.as_str(), y.as_str()])
            .unwrap()],
    }
}

/// [`idreverse_over`] on `{a, b}`, the variant most tests use.
pub fn idreverse_sst() -> Sst {
    idreverse_over(&Alphabet::new(["a", "b"]).unwrap())
}

/// The two-state sequential transducer echoing the last seen letter class:
/// `a`/`b` pass through, `c` repeats the current class (`acbc ↦ aabb`).
pub fn fig2_sequential() -> SequentialTransducer {
    let g = Alphabet::new(["a", "b", "c"]).unwrap();
    let w = |s: &str| Word::parse(&g, s).unwrap();
    SequentialTransducer {
        input: g.clone(),
        output: g.clone(),
        states: vec!["qa".into(), "qb".into()],
        initial: 0,
        transitions: vec![
            vec![(0, w("a")), (1, w("b")), (0, w("a"))],
            vec![(0, w("a")), (1, w("b")), (1, w("b"))],
        ],
        final_out: vec![Word::empty(g.clone()), Word::empty(g)],
    }
}

/// Single-state copyless SST appending `images[c]` per input letter.
pub fn relabel_sst(input: &Alphabet, output: &Alphabet, images: Vec<Word>) -> Sst {
    assert_eq!(images.len(), input.len());
    let acc = fresh("acc", &[output]);
    let registers = Alphabet::new([acc.as_str()]).unwrap();
    let transitions = vec![images
        .into_iter()
        .map(|im| {
            let mut toks = vec![crate::assign::Tok::Reg(0)];
            toks.extend(im.letters().iter().map(|&c| crate::assign::Tok::Out(c)));
            (0, RegAssignment::new(registers.clone(), output.clone(), vec![MixedWord(toks)]).unwrap())
        })
        .collect()];
    Sst {
        input: input.clone(),
        output: output.clone(),
        registers,
        states: vec!["q".into()],
        initial: 0,
        initial_values: vec![Word::empty(output.clone())],
        transitions,
        output_fn: vec![MixedWord(vec![crate::assign::Tok::Reg(0)])],
    }
}

/// The identity function as a copyless SST.
pub fn identity_sst(g: &Alphabet) -> Sst {
    let images = (0..g.len() as u32)
        .map(|c| Word::from_indices(g.clone(), vec![c]))
        .collect();
    relabel_sst(g, g, images)
}

/// The full reverse as a copyless SST (prepends instead of appending).
pub fn reverse_sst(g: &Alphabet) -> Sst {
    let acc = fresh("acc", &[g]);
    let registers = Alphabet::new([acc.as_str()]).unwrap();
    let transitions = vec![(0..g.len() as u32)
        .map(|c| {
            let toks = vec![crate::assign::Tok::Out(c), crate::assign::Tok::Reg(0)];
            (0, RegAssignment::new(registers.clone(), g.clone(), vec![MixedWord(toks)]).unwrap())
        })
        .collect()];
    Sst {
        input: g.clone(),
        output: g.clone(),
        registers,
        states: vec!["q".into()],
        initial: 0,
        initial_values: vec![Word::empty(g.clone())],
        transitions,
        output_fn: vec![MixedWord(vec![crate::assign::Tok::Reg(0)])],
    }
}

/// The constant function as an SST without registers.
pub fn const_sst(input: &Alphabet, value: &Word) -> Sst {
    let registers = Alphabet::empty();
    let a = RegAssignment::new(registers.clone(), value.alphabet().clone(), vec![]).unwrap();
    Sst {
        input: input.clone(),
        output: value.alphabet().clone(),
        registers,
        states: vec!["q".into()],
        initial: 0,
        initial_values: vec![],
        transitions: vec![vec![(0, a); input.len()]],
        output_fn: vec![MixedWord(
            value.letters().iter().map(|&c| crate::assign::Tok::Out(c)).collect(),
        )],
    }
}

/// Words of even length.
pub fn even_length_dfa(g: &Alphabet) -> Dfa {
    Dfa {
        alphabet: g.clone(),
        states: vec!["even".into(), "odd".into()],
        initial: 0,
        accepting: BTreeSet::from([0]),
        delta: vec![vec![1; g.len()], vec![0; g.len()]],
    }
}

/// Words with an even number of occurrences of `letter`.
pub fn even_count_dfa(g: &Alphabet, letter: &str) -> Dfa {
    let c = g.index_of(letter).expect("letter in alphabet") as usize;
    let mut delta = vec![vec![0; g.len()], vec![1; g.len()]];
    delta[0][c] = 1;
    delta[1][c] = 0;
    Dfa {
        alphabet: g.clone(),
        states: vec!["even".into(), "odd".into()],
        initial: 0,
        accepting: BTreeSet::from([0]),
        delta,
    }
}

/// Unary squaring `aⁿ ↦ a^{n²}` as an HDT0L system: the seed grows by one
/// fresh block of `2n−1` letters per step through a linear auxiliary letter.
pub fn squaring_unary_hdt0l() -> Hdt0lSystem {
    let input = Alphabet::new(["a"]).unwrap();
    let output = Alphabet::new(["a"]).unwrap();
    let working = Alphabet::new(["a", "u", "v"]).unwrap();
    let w = |s: &str| Word::parse(&working, s).unwrap();
    let rule = crate::alphabet::FreeMorphism::new(
        working.clone(),
        working.clone(),
        vec![w("a"), w("u a"), w("v u u a")],
    )
    .unwrap();
    let final_rule = crate::alphabet::FreeMorphism::new(
        working.clone(),
        output.clone(),
        vec![
            Word::parse(&output, "a").unwrap(),
            Word::empty(output.clone()),
            Word::empty(output.clone()),
        ],
    )
    .unwrap();
    Hdt0lSystem {
        input,
        output,
        working: working.clone(),
        initial_word: w("v"),
        rules: vec![rule],
        final_rule,
    }
}

/// The unary witness sequence `aⁿ ↦ b aⁿ⁻¹ b aⁿ⁻² … b a b`: reversed
/// prefixes over a one-letter alphabet, with `b` playing the underlined head.
pub fn witness_71i_hdt0l() -> Hdt0lSystem {
    let input = Alphabet::new(["a"]).unwrap();
    let output = Alphabet::new(["a", "b"]).unwrap();
    let working = Alphabet::new(["a", "b", "X", "Y"]).unwrap();
    let w = |s: &str| Word::parse(&working, s).unwrap();
    let rule = crate::alphabet::FreeMorphism::new(
        working.clone(),
        working.clone(),
        vec![w("a"), w("b"), w("X a"), w("b X Y")],
    )
    .unwrap();
    let final_rule = crate::alphabet::FreeMorphism::new(
        working.clone(),
        output.clone(),
        vec![
            Word::parse(&output, "a").unwrap(),
            Word::parse(&output, "b").unwrap(),
            Word::empty(output.clone()),
            Word::empty(output.clone()),
        ],
    )
    .unwrap();
    Hdt0lSystem {
        input,
        output,
        working: working.clone(),
        initial_word: w("Y"),
        rules: vec![rule],
        final_rule,
    }
}

/// Single-state sequential transducer emitting `images[c]` per letter.
pub fn seq_per_letter(
    input: &Alphabet,
    output: &Alphabet,
    images: Vec<Word>,
) -> SequentialTransducer {
    assert_eq!(images.len(), input.len());
    SequentialTransducer {
        input: input.clone(),
        output: output.clone(),
        states: vec!["q".into()],
        initial: 0,
        transitions: vec![images.into_iter().map(|w| (0, w)).collect()],
        final_out: vec![Word::empty(output.clone())],
    }
}

/// One-pebble CFPT walking left to right and emitting `images[c]` under
/// each letter.
pub fn cfpt_per_letter(input: &Alphabet, output: &Alphabet, images: Vec<Word>) -> Cfpt {
    assert_eq!(images.len(), input.len());
    let mut table = BTreeMap::new();
    table.insert(
        (0, vec![0u32]),
        CfptRule { next: 0, action: StackAction::Right, emit: Word::empty(output.clone()) },
    );
    table.insert(
        (0, vec![1u32]),
        CfptRule { next: 0, action: StackAction::Pop, emit: Word::empty(output.clone()) },
    );
    for (c, im) in images.into_iter().enumerate() {
        table.insert(
            (0, vec![c as u32 + 2]),
            CfptRule { next: 0, action: StackAction::Right, emit: im },
        );
    }
    Cfpt {
        input: input.clone(),
        output: output.clone(),
        k: 1,
        states: vec!["q".into()],
        initial: 0,
        tables: vec![table],
    }
}

/// The identity function as a one-pebble CFPT.
pub fn cfpt_identity(g: &Alphabet) -> Cfpt {
    let images = (0..g.len() as u32)
        .map(|c| Word::from_indices(g.clone(), vec![c]))
        .collect();
    cfpt_per_letter(g, g, images)
}

/// The reverse function as a one-pebble CFPT: run to the right marker, then
/// emit on the way back.
pub fn cfpt_reverse(g: &Alphabet) -> Cfpt {
    let mut fwd = BTreeMap::new();
    let empty = Word::empty(g.clone());
    fwd.insert((0, vec![0u32]), CfptRule { next: 0, action: StackAction::Right, emit: empty.clone() });
    fwd.insert((0, vec![1u32]), CfptRule { next: 1, action: StackAction::Left, emit: empty.clone() });
    for c in 0..g.len() as u32 {
        fwd.insert(
            (0, vec![c + 2]),
            CfptRule { next: 0, action: StackAction::Right, emit: empty.clone() },
        );
        fwd.insert(
            (1, vec![c + 2]),
            CfptRule {
                next: 1,
                action: StackAction::Left,
                emit: Word::from_indices(g.clone(), vec![c]),
            },
        );
    }
    fwd.insert((1, vec![0u32]), CfptRule { next: 1, action: StackAction::Pop, emit: empty });
    Cfpt {
        input: g.clone(),
        output: g.clone(),
        k: 1,
        states: vec!["fwd".into(), "back".into()],
        initial: 0,
        tables: vec![fwd],
    }
}

/// Emits the full name word (here two letters) under every input letter;
/// exercises emission splitting in the silent normal form.
pub fn cfpt_echo(g: &Alphabet, names: &Alphabet) -> Cfpt {
    let all = Word::from_indices(names.clone(), (0..names.len() as u32).collect());
    cfpt_per_letter(g, names, vec![all; g.len()])
}

/// The constant function as a one-pebble CFPT: emit and pop immediately.
pub fn cfpt_const(input: &Alphabet, value: &Word) -> Cfpt {
    let mut table = BTreeMap::new();
    table.insert(
        (0, vec![0u32]),
        CfptRule { next: 0, action: StackAction::Pop, emit: value.clone() },
    );
    Cfpt {
        input: input.clone(),
        output: value.alphabet().clone(),
        k: 1,
        states: vec!["q".into()],
        initial: 0,
        tables: vec![table],
    }
}

/// `cfsquaring_Γ` as a two-pebble CFPT, assembled by substitution from
/// one-pebble parts: the outer machine emits `c̲ ◆` under every letter, each
/// `c̲` substitutes its constant and `◆` the identity (into `Γ ∪ Γ̲`).
pub fn cfpt_cfsquaring(g: &Alphabet) -> Cfpt {
    use crate::cfpt::cbs_compose_cfpt;
    let out = with_underlined(g);
    let diamond = fresh("*", &[&out]);
    let mut names: Vec<String> = g.symbols().map(Alphabet::underline_symbol).collect();
    names.push(diamond.clone());
    let names = Alphabet::new(names).unwrap();
    let images = g
        .symbols()
        .map(|c| {
            Word::from_symbols(&names, [Alphabet::underline_symbol(c).as_str(), &diamond])
                .unwrap()
        })
        .collect();
    let outer = cfpt_per_letter(g, &names, images);
    let plain = (0..g.len() as u32)
        .map(|c| Word::from_symbols(&out, [g.symbol(c)]).unwrap())
        .collect();
    let mut subs: Vec<(String, Cfpt)> = g
        .symbols()
        .map(|c| {
            let bar = Word::from_symbols(&out, [Alphabet::underline_symbol(c).as_str()]).unwrap();
            (Alphabet::underline_symbol(c), cfpt_const(g, &bar))
        })
        .collect();
    subs.push((diamond, cfpt_per_letter(g, &out, plain)));
    let borrowed: Vec<(String, &Cfpt)> = subs.iter().map(|(n, t)| (n.clone(), t)).collect();
    cbs_compose_cfpt(&outer, &borrowed).expect("the parts cover the outer alphabet")
}
