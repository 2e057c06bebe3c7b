//! Streaming string transducers and sequential (Mealy-style) transducers.
//!
//! An SST reads its input left to right, updating a bank of registers by
//! substitution at every step; the final output re-combines register values
//! through a per-state output word. No copylessness is built into the type:
//! `check_copyless` / `check_layered` classify machines after the fact, and
//! the constructions that need a restriction state it in their preconditions.

use crate::alphabet::{Alphabet, Dfa, Word};
use crate::assign::{
    shape_label_split, substitute_mixed, MixedWord, Monoid, RegAssignment, Shape, Tok, Wreath,
};
use crate::{Error, Result};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Sst {
    pub input: Alphabet,
    pub output: Alphabet,
    pub registers: Alphabet,
    pub states: Vec<String>,
    pub initial: usize,
    /// per register, a word over the output alphabet
    pub initial_values: Vec<Word>,
    /// `transitions[state][letter] = (next state, register assignment)`
    pub transitions: Vec<Vec<(usize, RegAssignment)>>,
    /// per state, a word over output letters and registers
    pub output_fn: Vec<MixedWord>,
}

impl Sst {
    pub fn validate(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(Error::Invalid("SST needs at least one state".into()));
        }
        if self.initial >= self.states.len() {
            return Err(Error::Invalid("SST initial state out of range".into()));
        }
        for r in self.registers.symbols() {
            if self.output.contains(r) {
                return Err(Error::Invalid(format!(
                    "register name {r:?} collides with an output letter"
                )));
            }
        }
        if self.initial_values.len() != self.registers.len() {
            return Err(Error::Invalid("one initial value per register required".into()));
        }
        for v in &self.initial_values {
            if *v.alphabet() != self.output {
                return Err(Error::AlphabetMismatch(
                    "initial register value not over the output alphabet".into(),
                ));
            }
        }
        if self.transitions.len() != self.states.len() {
            return Err(Error::Invalid("transition table must cover every state".into()));
        }
        for row in &self.transitions {
            if row.len() != self.input.len() {
                return Err(Error::Invalid("transition row must cover every input letter".into()));
            }
            for (next, a) in row {
                if *next >= self.states.len() {
                    return Err(Error::Invalid("transition target out of range".into()));
                }
                if a.registers != self.registers || a.output != self.output {
                    return Err(Error::AlphabetMismatch(
                        "transition assignment over wrong alphabets".into(),
                    ));
                }
                if a.image.len() != self.registers.len() {
                    return Err(Error::Invalid("assignment must cover every register".into()));
                }
            }
        }
        if self.output_fn.len() != self.states.len() {
            return Err(Error::Invalid("output function must cover every state".into()));
        }
        for w in &self.output_fn {
            for t in &w.0 {
                match *t {
                    Tok::Reg(r) if (r as usize) >= self.registers.len() => {
                        return Err(Error::Invalid("output function register out of range".into()))
                    }
                    Tok::Out(c) if (c as usize) >= self.output.len() => {
                        return Err(Error::Invalid("output function letter out of range".into()))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }
}

/// Run the machine on a word.
pub fn run_sst(t: &Sst, w: &Word) -> Result<Word> {
    if *w.alphabet() != t.input {
        return Err(Error::AlphabetMismatch("SST run on word over wrong alphabet".into()));
    }
    let mut q = t.initial;
    let mut values = t.initial_values.clone();
    for &c in w.letters() {
        let (next, a) = &t.transitions[q][c as usize];
        values = a.dagger(&values)?;
        q = *next;
    }
    substitute_mixed(&t.output_fn[q], &values, &t.output)
}

/// The wreath-product element of a single letter: states paired with full
/// register assignments.
pub fn letter_psi(t: &Sst, c: u32) -> Wreath<RegAssignment> {
    Wreath {
        map: t
            .transitions
            .iter()
            .map(|row| {
                let (next, a) = &row[c as usize];
                (*next, a.clone())
            })
            .collect(),
    }
}

/// Same with output letters erased: states paired with shapes.
pub fn letter_phi(t: &Sst, c: u32) -> Wreath<Shape> {
    Wreath {
        map: t
            .transitions
            .iter()
            .map(|row| {
                let (next, a) = &row[c as usize];
                (*next, a.erase())
            })
            .collect(),
    }
}

/// Image of a word under the transition morphism, with labels kept.
pub fn psi_image(t: &Sst, w: &Word) -> Result<Wreath<RegAssignment>> {
    if *w.alphabet() != t.input {
        return Err(Error::AlphabetMismatch("psi image of word over wrong alphabet".into()));
    }
    let mut acc = Wreath::identity(
        t.states.len(),
        RegAssignment::identity(&t.registers, &t.output),
    );
    for &c in w.letters() {
        acc = acc.mul(&letter_psi(t, c));
    }
    Ok(acc)
}

/// Image of a word under the erased transition morphism.
pub fn phi_image(t: &Sst, w: &Word) -> Result<Wreath<Shape>> {
    if *w.alphabet() != t.input {
        return Err(Error::AlphabetMismatch("phi image of word over wrong alphabet".into()));
    }
    let mut acc = Wreath::identity(t.states.len(), Shape::identity(&t.registers));
    for &c in w.letters() {
        acc = acc.mul(&letter_phi(t, c));
    }
    Ok(acc)
}

/// Run through the wreath product instead of stepping; used to cross-check
/// the monoid laws against the direct semantics.
pub fn run_sst_via_monoid(t: &Sst, w: &Word) -> Result<Word> {
    let psi = psi_image(t, w)?;
    let (q, a) = psi.apply(t.initial);
    let values = a.dagger(&t.initial_values)?;
    substitute_mixed(&t.output_fn[q], &values, &t.output)
}

pub fn check_copyless(t: &Sst) -> bool {
    t.transitions
        .iter()
        .flatten()
        .all(|(_, a)| a.is_copyless())
}

/// Check the layering conditions for an explicit ordered partition of the
/// registers (`blocks[i]` is layer `i`): images of layer-`i` registers only
/// use letters from layers `<= i`, and within each layer the update is
/// copyless (lower layers may be copied freely upward).
pub fn check_layered(t: &Sst, blocks: &[Vec<u32>]) -> Result<bool> {
    let layer = layer_map(t.registers.len(), blocks)?;
    Ok(t.transitions
        .iter()
        .flatten()
        .all(|(_, a)| assignment_is_layered(a, &layer, blocks.len())))
}

fn layer_map(num_registers: usize, blocks: &[Vec<u32>]) -> Result<Vec<usize>> {
    let mut layer = vec![usize::MAX; num_registers];
    for (i, block) in blocks.iter().enumerate() {
        for &r in block {
            if (r as usize) >= num_registers {
                return Err(Error::Invalid("layer block register out of range".into()));
            }
            if layer[r as usize] != usize::MAX {
                return Err(Error::Invalid("layer blocks must be disjoint".into()));
            }
            layer[r as usize] = i;
        }
    }
    if layer.iter().any(|&l| l == usize::MAX) {
        return Err(Error::Invalid("layer blocks must cover every register".into()));
    }
    Ok(layer)
}

fn assignment_is_layered(a: &RegAssignment, layer: &[usize], num_layers: usize) -> bool {
    // images stay within the lower-closed set of layers
    for (r, w) in a.image.iter().enumerate() {
        let lr = layer[r];
        if w.registers().any(|x| layer[x as usize] > lr) {
            return false;
        }
    }
    // within each layer, copyless
    for i in 0..num_layers {
        let mut seen = vec![false; layer.len()];
        for (r, w) in a.image.iter().enumerate() {
            if layer[r] != i {
                continue;
            }
            for x in w.registers() {
                if layer[x as usize] == i {
                    if seen[x as usize] {
                        return false;
                    }
                    seen[x as usize] = true;
                }
            }
        }
    }
    true
}

/// Register-count bound for [`infer_layering`]'s exhaustive search.
pub const LAYER_SEARCH_BOUND: usize = 6;

/// Search for an ordered partition into `k + 1` layers witnessing
/// `k`-layeredness. Exhaustive over layer assignments, so bounded to
/// [`LAYER_SEARCH_BOUND`] registers. Returns the first witness found (layer
/// assignments are scanned lexicographically), or `None`.
pub fn infer_layering(t: &Sst, k: usize) -> Result<Option<Vec<Vec<u32>>>> {
    let n = t.registers.len();
    if n > LAYER_SEARCH_BOUND {
        return Err(Error::Bound(format!(
            "layering search limited to {LAYER_SEARCH_BOUND} registers, got {n}"
        )));
    }
    let num_layers = k + 1;
    let mut assignment = vec![0usize; n];
    loop {
        let blocks: Vec<Vec<u32>> = (0..num_layers)
            .map(|i| {
                (0..n as u32)
                    .filter(|&r| assignment[r as usize] == i)
                    .collect()
            })
            .collect();
        if t.transitions
            .iter()
            .flatten()
            .all(|(_, a)| assignment_is_layered(a, &assignment, num_layers))
        {
            return Ok(Some(blocks));
        }
        // next assignment in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if assignment[i] + 1 < num_layers {
                assignment[i] += 1;
                assignment[i + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

/// A sequential transducer: a DFA that appends a word to the log on every
/// step and one more word (per final state) at the end.
#[derive(Clone, Debug, PartialEq)]
pub struct SequentialTransducer {
    pub input: Alphabet,
    pub output: Alphabet,
    pub states: Vec<String>,
    pub initial: usize,
    /// `transitions[state][letter] = (next state, emitted word)`
    pub transitions: Vec<Vec<(usize, Word)>>,
    /// appended once the input is exhausted
    pub final_out: Vec<Word>,
}

impl SequentialTransducer {
    pub fn validate(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(Error::Invalid("sequential transducer needs a state".into()));
        }
        if self.initial >= self.states.len()
            || self.transitions.len() != self.states.len()
            || self.final_out.len() != self.states.len()
        {
            return Err(Error::Invalid("sequential transducer tables malformed".into()));
        }
        for row in &self.transitions {
            if row.len() != self.input.len() {
                return Err(Error::Invalid("sequential transition row incomplete".into()));
            }
            for (next, w) in row {
                if *next >= self.states.len() || *w.alphabet() != self.output {
                    return Err(Error::Invalid("sequential transition malformed".into()));
                }
            }
        }
        Ok(())
    }
}

pub fn run_sequential(s: &SequentialTransducer, w: &Word) -> Result<Word> {
    if *w.alphabet() != s.input {
        return Err(Error::AlphabetMismatch(
            "sequential run on word over wrong alphabet".into(),
        ));
    }
    let mut q = s.initial;
    let mut out = Word::empty(s.output.clone());
    for &c in w.letters() {
        let (next, emit) = &s.transitions[q][c as usize];
        out.extend(emit)?;
        q = *next;
    }
    out.extend(&s.final_out[q])?;
    Ok(out)
}

/// Prefix every name with `#` until none collides with the other alphabet.
fn make_disjoint(mut names: Vec<String>, other: &Alphabet) -> Vec<String> {
    while names.iter().any(|n| other.contains(n)) {
        names = names.into_iter().map(|n| format!("#{n}")).collect();
    }
    names
}

/// View a sequential transducer as a single-register copyless SST that
/// appends each emission to an accumulator.
pub fn sequential_to_sst(s: &SequentialTransducer) -> Sst {
    let reg_names = make_disjoint(vec!["acc".to_owned()], &s.output);
    let registers = Alphabet::new(reg_names).unwrap();
    let transitions = s
        .transitions
        .iter()
        .map(|row| {
            row.iter()
                .map(|(next, emit)| {
                    let mut toks = vec![Tok::Reg(0)];
                    toks.extend(emit.letters().iter().map(|&c| Tok::Out(c)));
                    (
                        *next,
                        RegAssignment::new(
                            registers.clone(),
                            s.output.clone(),
                            vec![MixedWord(toks)],
                        )
                        .unwrap(),
                    )
                })
                .collect()
        })
        .collect();
    let output_fn = s
        .final_out
        .iter()
        .map(|w| {
            let mut toks = vec![Tok::Reg(0)];
            toks.extend(w.letters().iter().map(|&c| Tok::Out(c)));
            MixedWord(toks)
        })
        .collect();
    Sst {
        input: s.input.clone(),
        output: s.output.clone(),
        registers: registers.clone(),
        states: s.states.clone(),
        initial: s.initial,
        initial_values: vec![Word::empty(s.output.clone())],
        transitions,
        output_fn,
    }
}

fn shift_mixed(w: &MixedWord, offset: u32) -> MixedWord {
    MixedWord(
        w.0.iter()
            .map(|t| match *t {
                Tok::Reg(r) => Tok::Reg(r + offset),
                Tok::Out(c) => Tok::Out(c),
            })
            .collect(),
    )
}

/// Product machine with both register banks live; the regular language `l`
/// decides at the end which bank's output word is used. Preserves
/// copylessness and layering of the operands.
pub fn conditional_combine(f: &Sst, g: &Sst, l: &Dfa) -> Result<Sst> {
    if f.input != g.input || f.input != l.alphabet {
        return Err(Error::AlphabetMismatch(
            "conditional combine needs one shared input alphabet".into(),
        ));
    }
    if f.output != g.output {
        return Err(Error::AlphabetMismatch(
            "conditional combine needs one shared output alphabet".into(),
        ));
    }
    let (states, transitions, banks, initial) = product_parts(f, g, Some(l))?;
    let nf = f.registers.len() as u32;
    let output_fn = states
        .iter()
        .map(|&(qf, qg, ql)| {
            if l.accepting.contains(&ql.unwrap()) {
                shift_mixed(&f.output_fn[qf], 0)
            } else {
                shift_mixed(&g.output_fn[qg], nf)
            }
        })
        .collect();
    assemble_product(f, g, states, transitions, banks, initial, output_fn)
}

/// Product machine computing `w -> f(w) g(w)`.
pub fn concat_combine(f: &Sst, g: &Sst) -> Result<Sst> {
    if f.input != g.input {
        return Err(Error::AlphabetMismatch(
            "concat combine needs one shared input alphabet".into(),
        ));
    }
    if f.output != g.output {
        return Err(Error::AlphabetMismatch(
            "concat combine needs one shared output alphabet".into(),
        ));
    }
    let (states, transitions, banks, initial) = product_parts(f, g, None)?;
    let nf = f.registers.len() as u32;
    let output_fn = states
        .iter()
        .map(|&(qf, qg, _)| {
            let mut toks = f.output_fn[qf].0.clone();
            toks.extend(shift_mixed(&g.output_fn[qg], nf).0);
            MixedWord(toks)
        })
        .collect();
    assemble_product(f, g, states, transitions, banks, initial, output_fn)
}

type ProductState = (usize, usize, Option<usize>);

fn product_parts(
    f: &Sst,
    g: &Sst,
    l: Option<&Dfa>,
) -> Result<(
    Vec<ProductState>,
    Vec<Vec<(usize, RegAssignment)>>,
    Alphabet,
    usize,
)> {
    f.validate()?;
    g.validate()?;
    if let Some(l) = l {
        l.validate()?;
    }
    let bank_names = make_disjoint(
        f.registers
            .symbols()
            .map(|r| format!("L:{r}"))
            .chain(g.registers.symbols().map(|r| format!("R:{r}")))
            .collect(),
        &f.output,
    );
    let banks = Alphabet::new(bank_names)?;
    let nf = f.registers.len() as u32;

    let mut states = Vec::new();
    let mut index = HashMap::new();
    for qf in 0..f.states.len() {
        for qg in 0..g.states.len() {
            match l {
                Some(l) => {
                    for ql in 0..l.states.len() {
                        index.insert((qf, qg, Some(ql)), states.len());
                        states.push((qf, qg, Some(ql)));
                    }
                }
                None => {
                    index.insert((qf, qg, None), states.len());
                    states.push((qf, qg, None));
                }
            }
        }
    }

    let transitions = states
        .iter()
        .map(|&(qf, qg, ql)| {
            (0..f.input.len())
                .map(|c| {
                    let (nf_state, fa) = &f.transitions[qf][c];
                    let (ng_state, ga) = &g.transitions[qg][c];
                    let nl = ql.map(|ql| l.unwrap().delta[ql][c]);
                    let mut image: Vec<MixedWord> =
                        fa.image.iter().map(|w| shift_mixed(w, 0)).collect();
                    image.extend(ga.image.iter().map(|w| shift_mixed(w, nf)));
                    let a = RegAssignment::new(banks.clone(), f.output.clone(), image).unwrap();
                    (index[&(*nf_state, *ng_state, nl)], a)
                })
                .collect()
        })
        .collect();

    let initial = index[&(f.initial, g.initial, l.map(|l| l.initial))];
    Ok((states, transitions, banks, initial))
}

fn assemble_product(
    f: &Sst,
    g: &Sst,
    states: Vec<ProductState>,
    transitions: Vec<Vec<(usize, RegAssignment)>>,
    banks: Alphabet,
    initial: usize,
    output_fn: Vec<MixedWord>,
) -> Result<Sst> {
    let mut initial_values = f.initial_values.clone();
    initial_values.extend(g.initial_values.iter().cloned());
    let state_names = states
        .iter()
        .map(|&(qf, qg, ql)| match ql {
            Some(ql) => format!("{}|{}|{}", f.states[qf], g.states[qg], ql),
            None => format!("{}|{}", f.states[qf], g.states[qg]),
        })
        .collect();
    let t = Sst {
        input: f.input.clone(),
        output: f.output.clone(),
        registers: banks,
        states: state_names,
        initial,
        initial_values,
        transitions,
        output_fn,
    };
    t.validate()?;
    Ok(t)
}

/// Bound on distinct reachable shapes tracked by the extractor construction.
pub const EXTRACTOR_SHAPE_BOUND: usize = 10_000;

/// Build a copyless SST that outputs, on input `s`, the `j`-th constant label
/// of register `r_tgt` in the accumulated assignment of `s` started at state
/// `q0`, provided the accumulated *shape* equals `alpha`; otherwise it
/// outputs the empty word.
///
/// States are (state of `t`, accumulated shape) pairs; registers come in one
/// bank per reachable shape, with bank `s` holding the label segments of
/// every register under shape `s`. Only the target bank of a transition is
/// written, which keeps the machine globally copyless.
pub fn shape_label_extractor(
    t: &Sst,
    q0: usize,
    r_tgt: u32,
    alpha: &Shape,
    j: usize,
) -> Result<Sst> {
    t.validate()?;
    if !check_copyless(t) {
        return Err(Error::Inapplicable("label extractor needs a copyless machine".into()));
    }
    if alpha.registers != t.registers {
        return Err(Error::AlphabetMismatch("target shape over wrong registers".into()));
    }
    if (r_tgt as usize) >= t.registers.len() {
        return Err(Error::Invalid("target register out of range".into()));
    }
    if j > alpha.image_of(r_tgt).len() {
        return Err(Error::Invalid(format!(
            "label index {j} out of range for a shape image of length {}",
            alpha.image_of(r_tgt).len()
        )));
    }

    // discover reachable (state, shape) nodes
    let id = Shape::identity(&t.registers);
    let mut shapes: Vec<Shape> = vec![id.clone()];
    let mut shape_index: HashMap<Shape, usize> = HashMap::from([(id, 0)]);
    let mut nodes: Vec<(usize, usize)> = vec![(q0, 0)];
    let mut node_index: HashMap<(usize, usize), usize> = HashMap::from([((q0, 0), 0)]);
    // per node and letter: (target node, target shape, assignment of t)
    let mut edges: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut frontier = vec![0usize];
    while let Some(n) = frontier.pop() {
        let (p, si) = nodes[n];
        let mut row = Vec::with_capacity(t.input.len());
        for c in 0..t.input.len() {
            let (p2, a) = &t.transitions[p][c];
            let s2 = shapes[si].mul(&a.erase());
            let s2i = match shape_index.get(&s2) {
                Some(&i) => i,
                None => {
                    let i = shapes.len();
                    if i >= EXTRACTOR_SHAPE_BOUND {
                        return Err(Error::Bound("too many reachable shapes".into()));
                    }
                    shapes.push(s2.clone());
                    shape_index.insert(s2, i);
                    i
                }
            };
            let key = (*p2, s2i);
            let m = match node_index.get(&key) {
                Some(&m) => m,
                None => {
                    let m = nodes.len();
                    nodes.push(key);
                    node_index.insert(key, m);
                    frontier.push(m);
                    m
                }
            };
            row.push((m, s2i));
        }
        while edges.len() <= n {
            edges.push(Vec::new());
        }
        edges[n] = row;
    }

    // one register bank per shape: (r, seg) for 0 <= seg <= |shape(r)|
    let mut bank_start: Vec<Vec<u32>> = Vec::new(); // [shape][register] -> first bank slot
    let mut reg_names: Vec<String> = Vec::new();
    for (si, s) in shapes.iter().enumerate() {
        let mut starts = Vec::with_capacity(t.registers.len());
        for r in 0..t.registers.len() {
            starts.push(reg_names.len() as u32);
            for seg in 0..=s.image[r].len() {
                reg_names.push(format!("b{si}:{}:{seg}", t.registers.symbol(r as u32)));
            }
        }
        bank_start.push(starts);
    }
    let ex_registers = Alphabet::new(make_disjoint(reg_names, &t.output))?;
    let bank_slot =
        |si: usize, r: u32, seg: usize| -> u32 { bank_start[si][r as usize] + seg as u32 };

    let ex_states: Vec<String> = nodes
        .iter()
        .map(|&(p, si)| format!("{}@{si}", t.states[p]))
        .collect();

    let mut ex_transitions = Vec::with_capacity(nodes.len());
    for (n, &(p, si)) in nodes.iter().enumerate() {
        let s = &shapes[si];
        let mut row = Vec::with_capacity(t.input.len());
        for c in 0..t.input.len() {
            let (_, a) = &t.transitions[p][c];
            let (m, s2i) = edges[n][c];
            let mut image = vec![MixedWord::empty(); ex_registers.len()];
            // walk each image of the step assignment, splitting the old
            // bank's labels at shape letters
            for r2 in 0..t.registers.len() {
                let mut segs: Vec<MixedWord> = vec![MixedWord::empty()];
                for tok in &a.image[r2].0 {
                    match *tok {
                        Tok::Out(d) => segs.last_mut().unwrap().0.push(Tok::Out(d)),
                        Tok::Reg(rp) => {
                            segs.last_mut()
                                .unwrap()
                                .0
                                .push(Tok::Reg(bank_slot(si, rp, 0)));
                            for seg in 0..s.image[rp as usize].len() {
                                segs.push(MixedWord(vec![Tok::Reg(bank_slot(si, rp, seg + 1))]));
                            }
                        }
                    }
                }
                debug_assert_eq!(segs.len(), shapes[s2i].image[r2].len() + 1);
                for (seg, wseg) in segs.into_iter().enumerate() {
                    image[bank_slot(s2i, r2 as u32, seg) as usize] = wseg;
                }
            }
            let asg = RegAssignment::new(ex_registers.clone(), t.output.clone(), image)?;
            row.push((m, asg));
        }
        ex_transitions.push(row);
    }

    let target_shape_idx = shape_index.get(alpha).copied();
    let ex_output_fn = nodes
        .iter()
        .map(|&(_, si)| match target_shape_idx {
            Some(ti) if si == ti => MixedWord(vec![Tok::Reg(bank_slot(si, r_tgt, j))]),
            _ => MixedWord::empty(),
        })
        .collect();

    let ex = Sst {
        input: t.input.clone(),
        output: t.output.clone(),
        registers: ex_registers.clone(),
        states: ex_states,
        initial: 0,
        initial_values: vec![Word::empty(t.output.clone()); ex_registers.len()],
        transitions: ex_transitions,
        output_fn: ex_output_fn,
    };
    ex.validate()?;
    debug_assert!(check_copyless(&ex));
    Ok(ex)
}

/// Reference value for the extractor: the label directly computed from the
/// accumulated assignment.
pub fn shape_label_reference(
    t: &Sst,
    q0: usize,
    r_tgt: u32,
    alpha: &Shape,
    j: usize,
    w: &Word,
) -> Result<Word> {
    let psi = psi_image(t, w)?;
    let (_, a) = psi.apply(q0);
    let sl = shape_label_split(a);
    if sl.shape == *alpha {
        Ok(sl.labels[r_tgt as usize][j].clone())
    } else {
        Ok(Word::empty(t.output.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines;

    #[test]
    fn prefixes_machine_matches_worked_example() {
        let g = Alphabet::new(["1", "2", "3", "4"]).unwrap();
        let t = machines::prefixes_sst(&g);
        t.validate().unwrap();
        let input = Word::parse(&g, "1 2 3 4").unwrap();
        let out = run_sst(&t, &input).unwrap();
        assert_eq!(out.to_string(), "_4 3 2 1 _3 2 1 _2 1 _1");
        assert_eq!(run_sst_via_monoid(&t, &input).unwrap(), out);
    }

    #[test]
    fn prefixes_is_one_layered_not_copyless() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let t = machines::prefixes_sst(&g);
        assert!(!check_copyless(&t));
        assert_eq!(infer_layering(&t, 0).unwrap(), None);
        let blocks = infer_layering(&t, 1).unwrap().expect("1-layered");
        assert!(check_layered(&t, &blocks).unwrap());
    }

    #[test]
    fn iterated_reverse_is_copyless() {
        let t = machines::idreverse_sst();
        t.validate().unwrap();
        assert!(check_copyless(&t));
        let g = t.input.clone();
        let w = Word::parse(&g, "a b # b b").unwrap();
        assert_eq!(run_sst(&t, &w).unwrap().to_string(), "b a # b b");
    }

    #[test]
    fn sequential_embedding_agrees() {
        let s = machines::fig2_sequential();
        let t = sequential_to_sst(&s);
        t.validate().unwrap();
        assert!(check_copyless(&t));
        let w = Word::parse(&s.input, "a c b c").unwrap();
        assert_eq!(run_sequential(&s, &w).unwrap().to_string(), "a a b b");
        assert_eq!(run_sst(&t, &w).unwrap(), run_sequential(&s, &w).unwrap());
    }

    #[test]
    fn conditional_picks_branch_by_language() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let f = machines::identity_sst(&g);
        let r = machines::reverse_sst(&g);
        let even = machines::even_length_dfa(&g);
        let t = conditional_combine(&f, &r, &even).unwrap();
        assert!(check_copyless(&t));
        let w1 = Word::parse(&g, "a b b a b b").unwrap(); // even: identity
        let w2 = Word::parse(&g, "a b b").unwrap(); // odd: reverse
        assert_eq!(run_sst(&t, &w1).unwrap(), w1);
        assert_eq!(run_sst(&t, &w2).unwrap(), w2.reversed());
    }

    #[test]
    fn concat_combines_outputs() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let f = machines::identity_sst(&g);
        let r = machines::reverse_sst(&g);
        let t = concat_combine(&f, &r).unwrap();
        let w = Word::parse(&g, "a a b").unwrap();
        assert_eq!(run_sst(&t, &w).unwrap().to_string(), "a a b b a a");
    }

    #[test]
    fn extractor_matches_reference_on_reverse() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let t = machines::reverse_sst(&g);
        // accumulated shape of any nonempty run of reverse: r -> r (identity)
        let alpha = Shape::identity(&t.registers);
        for j in 0..=1 {
            let ex = shape_label_extractor(&t, t.initial, 0, &alpha, j).unwrap();
            for w in g.words_up_to(4) {
                let got = run_sst(&ex, &w).unwrap();
                let want = shape_label_reference(&t, t.initial, 0, &alpha, j, &w).unwrap();
                assert_eq!(got, want, "word {w:?} label {j}");
            }
        }
    }
}
