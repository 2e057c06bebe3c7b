//! Comparison-free pebble transducers.
//!
//! A `k`-CFPT walks over `< w >` (end markers included) with a stack of at
//! most `k` pebbles; the transition table at stack height `p` sees the state
//! and the letters under all `p` pebbles, and may move the top pebble, push
//! a fresh pebble onto the left marker, or pop. "Comparison-free" is baked
//! into the shape of the table: positions are never compared, only letters
//! are read. Output is a log appended on every step; the run ends when the
//! stack empties.
//!
//! Runs take an explicit step budget so that ill-formed machines cannot
//! hang the host.

use crate::alphabet::{Alphabet, Word};
use crate::{Error, Result};
use std::collections::BTreeMap;

pub const MARKER_LEFT: &str = "<";
pub const MARKER_RIGHT: &str = ">";

/// Default step budget for CFPT runs (overridable per call, and by
/// `XDUCE_BUDGET` in the CLI).
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StackAction {
    Stay,
    Left,
    Right,
    Push,
    Pop,
}

impl StackAction {
    pub fn name(self) -> &'static str {
        match self {
            StackAction::Stay => "stay",
            StackAction::Left => "left",
            StackAction::Right => "right",
            StackAction::Push => "push",
            StackAction::Pop => "pop",
        }
    }

    pub fn from_name(s: &str) -> Result<StackAction> {
        Ok(match s {
            "stay" => StackAction::Stay,
            "left" => StackAction::Left,
            "right" => StackAction::Right,
            "push" => StackAction::Push,
            "pop" => StackAction::Pop,
            _ => return Err(Error::Parse(format!("unknown stack action {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CfptRule {
    pub next: usize,
    pub action: StackAction,
    pub emit: Word,
}

/// Extended-letter code: 0 is `<`, 1 is `>`, input letter `c` is `c + 2`.
pub fn ext_code_of_letter(c: u32) -> u32 {
    c + 2
}

pub fn ext_symbol(input: &Alphabet, code: u32) -> String {
    match code {
        0 => MARKER_LEFT.to_owned(),
        1 => MARKER_RIGHT.to_owned(),
        c => input.symbol(c - 2).to_owned(),
    }
}

pub fn ext_parse(input: &Alphabet, s: &str) -> Result<u32> {
    match s {
        MARKER_LEFT => Ok(0),
        MARKER_RIGHT => Ok(1),
        _ => input
            .index_of(s)
            .map(ext_code_of_letter)
            .ok_or_else(|| Error::UnknownSymbol(s.to_owned())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cfpt {
    pub input: Alphabet,
    pub output: Alphabet,
    pub k: usize,
    pub states: Vec<String>,
    pub initial: usize,
    /// `tables[p-1]` is the table at stack height `p`, keyed by state and
    /// the extended letters under pebbles 1 (oldest) through `p` (top).
    pub tables: Vec<BTreeMap<(usize, Vec<u32>), CfptRule>>,
}

impl Cfpt {
    /// Basic well-formedness (ranges and alphabets); legality of actions is
    /// reported separately by [`validate_cfpt`].
    pub fn validate(&self) -> Result<()> {
        if self.states.is_empty() || self.initial >= self.states.len() {
            return Err(Error::Invalid("CFPT states malformed".into()));
        }
        if self.k == 0 {
            return Err(Error::Invalid("CFPT needs at least one pebble".into()));
        }
        if self.tables.len() != self.k {
            return Err(Error::Invalid("CFPT needs one table per stack height".into()));
        }
        if self.input.contains(MARKER_LEFT) || self.input.contains(MARKER_RIGHT) {
            return Err(Error::Invalid(
                "CFPT input alphabet must not contain the end markers".into(),
            ));
        }
        let max_code = self.input.len() as u32 + 2;
        for (pi, table) in self.tables.iter().enumerate() {
            for ((q, vec), rule) in table {
                if *q >= self.states.len() || rule.next >= self.states.len() {
                    return Err(Error::Invalid("CFPT rule state out of range".into()));
                }
                if vec.len() != pi + 1 {
                    return Err(Error::Invalid(format!(
                        "table at height {} keyed by a vector of length {}",
                        pi + 1,
                        vec.len()
                    )));
                }
                if vec.iter().any(|&c| c >= max_code) {
                    return Err(Error::Invalid("CFPT rule letter code out of range".into()));
                }
                if *rule.emit.alphabet() != self.output {
                    return Err(Error::AlphabetMismatch(
                        "CFPT rule emits over the wrong alphabet".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Legality of every table entry: no left move on `<`, no right move on `>`,
/// no push at full height. Returns human-readable violations; empty means
/// legal.
pub fn validate_cfpt(t: &Cfpt) -> Vec<String> {
    let mut out = Vec::new();
    if let Err(e) = t.validate() {
        out.push(e.to_string());
        return out;
    }
    for (pi, table) in t.tables.iter().enumerate() {
        let p = pi + 1;
        for ((q, vec), rule) in table {
            let top = *vec.last().unwrap();
            let place = || {
                format!(
                    "state {} at height {p} on ({})",
                    t.states[*q],
                    vec.iter()
                        .map(|&c| ext_symbol(&t.input, c))
                        .collect::<Vec<_>>()
                        .join(",")
                )
            };
            match rule.action {
                StackAction::Left if top == 0 => {
                    out.push(format!("{}: left move on the left marker", place()))
                }
                StackAction::Right if top == 1 => {
                    out.push(format!("{}: right move on the right marker", place()))
                }
                StackAction::Push if p == t.k => {
                    out.push(format!("{}: push at full stack height", place()))
                }
                _ => {}
            }
        }
    }
    out
}

/// Run with a step budget. Every fired transition costs one step.
pub fn run_cfpt(t: &Cfpt, w: &Word, budget: u64) -> Result<Word> {
    if *w.alphabet() != t.input {
        return Err(Error::AlphabetMismatch("CFPT run on word over wrong alphabet".into()));
    }
    let right_marker = w.len() + 1;
    let ext_at = |pos: usize| -> u32 {
        if pos == 0 {
            0
        } else if pos == right_marker {
            1
        } else {
            ext_code_of_letter(w.letter(pos - 1))
        }
    };
    let mut q = t.initial;
    let mut stack: Vec<usize> = vec![0];
    let mut out = Word::empty(t.output.clone());
    let mut steps = 0u64;
    while let Some(&top) = stack.last() {
        if steps >= budget {
            return Err(Error::Budget(budget));
        }
        steps += 1;
        let p = stack.len();
        let vec: Vec<u32> = stack.iter().map(|&pos| ext_at(pos)).collect();
        let rule = t.tables[p - 1].get(&(q, vec.clone())).ok_or_else(|| {
            Error::Invalid(format!(
                "no rule for state {} at height {p} on ({})",
                t.states[q],
                vec.iter()
                    .map(|&c| ext_symbol(&t.input, c))
                    .collect::<Vec<_>>()
                    .join(",")
            ))
        })?;
        out.extend(&rule.emit)?;
        match rule.action {
            StackAction::Stay => {}
            StackAction::Left => {
                if top == 0 {
                    return Err(Error::Invalid("left move on the left marker".into()));
                }
                *stack.last_mut().unwrap() -= 1;
            }
            StackAction::Right => {
                if top == right_marker {
                    return Err(Error::Invalid("right move on the right marker".into()));
                }
                *stack.last_mut().unwrap() += 1;
            }
            StackAction::Push => {
                if p == t.k {
                    return Err(Error::Invalid("push at full stack height".into()));
                }
                stack.push(0);
            }
            StackAction::Pop => {
                stack.pop();
            }
        }
        q = rule.next;
    }
    Ok(out)
}

/// Silent normal form: every rule either emits nothing, or emits exactly one
/// letter and stays put. States are annotated with their stack height (which
/// is well-defined along any run); multi-letter emissions are split through
/// chains of intermediate states. Returns the machine and the height of each
/// state.
pub fn silent_normal_form(t: &Cfpt) -> Result<(Cfpt, Vec<usize>)> {
    t.validate()?;
    let states: Vec<String> = Vec::new();
    let heights: Vec<usize> = Vec::new();
    let index: BTreeMap<(usize, usize), usize> = BTreeMap::new(); // (orig q, height)
    let mut tables: Vec<BTreeMap<(usize, Vec<u32>), CfptRule>> =
        vec![BTreeMap::new(); t.k];

    struct Nodes {
        index: BTreeMap<(usize, usize), usize>,
        states: Vec<String>,
        heights: Vec<usize>,
        frontier: Vec<(usize, usize)>,
    }
    impl Nodes {
        fn node(&mut self, names: &[String], q: usize, h: usize) -> usize {
            *self.index.entry((q, h)).or_insert_with(|| {
                self.states.push(format!("{}~{h}", names[q]));
                self.heights.push(h);
                self.frontier.push((q, h));
                self.states.len() - 1
            })
        }
    }
    let mut nodes = Nodes { index, states, heights, frontier: Vec::new() };
    let initial = nodes.node(&t.states, t.initial, 1);

    while let Some((q, h)) = nodes.frontier.pop() {
        let from = nodes.index[&(q, h)];
        let rules: Vec<(Vec<u32>, CfptRule)> = t.tables[h - 1]
            .iter()
            .filter(|((q2, _), _)| *q2 == q)
            .map(|((_, vec), rule)| (vec.clone(), rule.clone()))
            .collect();
        for (vec, rule) in rules {
            let next_h = match rule.action {
                StackAction::Push => h + 1,
                StackAction::Pop => h.saturating_sub(1).max(1),
                _ => h,
            };
            // a pop from height 1 terminates; the successor node is inert
            let next_h = if rule.action == StackAction::Pop && h == 1 { 1 } else { next_h };
            let target = nodes.node(&t.states, rule.next, next_h);
            let m = rule.emit.len();
            if m == 0 || (m == 1 && rule.action == StackAction::Stay) {
                tables[h - 1].insert((from, vec), CfptRule { next: target, ..rule.clone() });
                continue;
            }
            // split: emit letters one at a time in place, then act
            let mut cur = from;
            for i in 0..m {
                let chain_name = format!(
                    "{}~{h}!{}#{i}",
                    t.states[q],
                    vec.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
                );
                nodes.states.push(chain_name);
                nodes.heights.push(h);
                let chain = nodes.states.len() - 1;
                tables[h - 1].insert(
                    (cur, vec.clone()),
                    CfptRule {
                        next: chain,
                        action: StackAction::Stay,
                        emit: rule.emit.slice(i..i + 1),
                    },
                );
                cur = chain;
            }
            tables[h - 1].insert(
                (cur, vec.clone()),
                CfptRule {
                    next: target,
                    action: rule.action,
                    emit: Word::empty(t.output.clone()),
                },
            );
        }
    }

    let normal = Cfpt {
        input: t.input.clone(),
        output: t.output.clone(),
        k: t.k,
        states: nodes.states,
        initial,
        tables,
    };
    normal.validate()?;
    Ok((normal, nodes.heights))
}

fn ext_codes(n_letters: usize) -> Vec<u32> {
    (0..n_letters as u32 + 2).collect()
}

fn all_vectors(codes: &[u32], len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * codes.len());
        for v in &out {
            for &c in codes {
                let mut v2 = v.clone();
                v2.push(c);
                next.push(v2);
            }
        }
        out = next;
    }
    out
}

/// Composition by substitution at the machine level: run the outer machine
/// `f`, and whenever it would emit the letter `i`, run `subs[i]` on the whole
/// input instead (with fresh pebbles pushed on top of `f`'s). `f` must output
/// only letters named by `subs`; all substituted machines share `f`'s input
/// alphabet and one output alphabet.
///
/// The outer machine's state advance on an emitting step is deferred until
/// the substituted machine pops its last pebble, which is why the outer
/// machine is first brought into silent normal form (emitting steps stay
/// put). The result is a `(k_f + max k_i)`-CFPT.
pub fn cbs_compose_cfpt(f: &Cfpt, subs: &[(String, &Cfpt)]) -> Result<Cfpt> {
    f.validate()?;
    let mut sub_of = vec![None; f.output.len()];
    for (name, sub) in subs {
        sub.validate()?;
        if sub.input != f.input {
            return Err(Error::AlphabetMismatch(
                "substituted machine reads a different input alphabet".into(),
            ));
        }
        let i = f
            .output
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
        sub_of[i as usize] = Some(sub);
    }
    if sub_of.iter().any(Option::is_none) {
        return Err(Error::Inapplicable(
            "every outer output letter needs a substituted machine".into(),
        ));
    }
    let output = subs
        .first()
        .map(|(_, s)| s.output.clone())
        .ok_or_else(|| Error::Inapplicable("composition needs at least one machine".into()))?;
    if subs.iter().any(|(_, s)| s.output != output) {
        return Err(Error::AlphabetMismatch(
            "substituted machines must share an output alphabet".into(),
        ));
    }

    let (nf, heights) = silent_normal_form(f)?;
    let k = f.k + subs.iter().map(|(_, s)| s.k).max().unwrap();
    let codes = ext_codes(f.input.len());

    // states: outer states, then (outer state, sub, sub state) triples
    let mut states: Vec<String> = nf.states.iter().map(|s| format!("f:{s}")).collect();
    let mut inner_index: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for q in 0..nf.states.len() {
        for (si, (name, sub)) in subs.iter().enumerate() {
            for r in 0..sub.states.len() {
                inner_index.insert((q, si, r), states.len());
                states.push(format!("{}*{name}:{}", nf.states[q], sub.states[r]));
            }
        }
    }
    let sub_index_of_letter = |i: usize| -> usize {
        subs.iter()
            .position(|(name, _)| f.output.symbol(i as u32) == name)
            .unwrap()
    };

    let mut tables: Vec<BTreeMap<(usize, Vec<u32>), CfptRule>> = vec![BTreeMap::new(); k];

    // outer rules
    for (pi, table) in nf.tables.iter().enumerate() {
        for ((q, vec), rule) in table {
            if rule.emit.is_empty() {
                tables[pi].insert(
                    (*q, vec.clone()),
                    CfptRule {
                        next: rule.next,
                        action: rule.action,
                        emit: Word::empty(output.clone()),
                    },
                );
            } else {
                // single letter, stay: push into the substituted machine
                let si = sub_index_of_letter(rule.emit.letter(0) as usize);
                let sub = sub_of[rule.emit.letter(0) as usize].unwrap();
                tables[pi].insert(
                    (*q, vec.clone()),
                    CfptRule {
                        next: inner_index[&(*q, si, sub.initial)],
                        action: StackAction::Push,
                        emit: Word::empty(output.clone()),
                    },
                );
            }
        }
    }

    // inner rules, one copy per emitting outer configuration's prefix
    for (&(q, si, r), &state) in &inner_index {
        let p_f = heights[q];
        let sub = subs[si].1;
        for h in 1..=sub.k {
            let rules: Vec<(Vec<u32>, CfptRule)> = sub.tables[h - 1]
                .iter()
                .filter(|((r2, _), _)| *r2 == r)
                .map(|((_, v), rule)| (v.clone(), rule.clone()))
                .collect();
            if rules.is_empty() {
                continue;
            }
            for prefix in all_vectors(&codes, p_f) {
                // only prefixes on which the outer machine emits this sub
                let outer = match nf.tables[p_f - 1].get(&(q, prefix.clone())) {
                    Some(rule)
                        if !rule.emit.is_empty()
                            && sub_index_of_letter(rule.emit.letter(0) as usize) == si =>
                    {
                        rule
                    }
                    _ => continue,
                };
                for (subvec, rule) in &rules {
                    let mut vec = prefix.clone();
                    vec.extend_from_slice(subvec);
                    let composed = if rule.action == StackAction::Pop && h == 1 {
                        // return to the outer machine's deferred move
                        CfptRule {
                            next: outer.next,
                            action: StackAction::Pop,
                            emit: rule.emit.clone(),
                        }
                    } else {
                        CfptRule {
                            next: inner_index[&(q, si, rule.next)],
                            action: rule.action,
                            emit: rule.emit.clone(),
                        }
                    };
                    tables[p_f + h - 1].insert((state, vec), composed);
                }
            }
        }
    }

    let composed = Cfpt {
        input: f.input.clone(),
        output,
        k,
        states,
        initial: nf.initial,
        tables,
    };
    composed.validate()?;
    Ok(composed)
}

/// Reference semantics for machine-level composition by substitution.
pub fn cbs_cfpt_reference(
    f: &Cfpt,
    subs: &[(String, &Cfpt)],
    w: &Word,
    budget: u64,
) -> Result<Word> {
    let outer = run_cfpt(f, w, budget)?;
    let output = subs
        .first()
        .map(|(_, s)| s.output.clone())
        .ok_or_else(|| Error::Inapplicable("composition needs at least one machine".into()))?;
    let mut out = Word::empty(output);
    for i in 0..outer.len() {
        let name = outer.symbol_at(i);
        let (_, sub) = subs
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_owned()))?;
        out.extend(&run_cfpt(sub, w, budget)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines;

    #[test]
    fn identity_and_reverse_walk() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let id = machines::cfpt_identity(&g);
        let rev = machines::cfpt_reverse(&g);
        assert!(validate_cfpt(&id).is_empty());
        assert!(validate_cfpt(&rev).is_empty());
        let w = Word::parse(&g, "a b b").unwrap();
        assert_eq!(run_cfpt(&id, &w, DEFAULT_BUDGET).unwrap(), w);
        assert_eq!(run_cfpt(&rev, &w, DEFAULT_BUDGET).unwrap(), w.reversed());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let id = machines::cfpt_identity(&g);
        let w = Word::parse(&g, "a b b a").unwrap();
        match run_cfpt(&id, &w, 3) {
            Err(Error::Budget(3)) => {}
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn normal_form_preserves_semantics() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let rev = machines::cfpt_reverse(&g);
        let (normal, heights) = silent_normal_form(&rev).unwrap();
        assert!(validate_cfpt(&normal).is_empty());
        assert_eq!(heights[normal.initial], 1);
        for w in g.words_up_to(4) {
            assert_eq!(
                run_cfpt(&normal, &w, DEFAULT_BUDGET).unwrap(),
                run_cfpt(&rev, &w, DEFAULT_BUDGET).unwrap()
            );
        }
    }

    #[test]
    fn composition_matches_reference() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        let names = Alphabet::new(["i", "r"]).unwrap();
        // outer: emit "i r" per input letter
        let f = machines::cfpt_echo(&g, &names);
        let id = machines::cfpt_identity(&g);
        let rev = machines::cfpt_reverse(&g);
        let subs = vec![("i".to_owned(), &id), ("r".to_owned(), &rev)];
        let composed = cbs_compose_cfpt(&f, &subs).unwrap();
        assert!(validate_cfpt(&composed).is_empty());
        assert_eq!(composed.k, 2);
        for w in g.words_up_to(3) {
            assert_eq!(
                run_cfpt(&composed, &w, DEFAULT_BUDGET).unwrap(),
                cbs_cfpt_reference(&f, &subs, &w, DEFAULT_BUDGET).unwrap(),
                "on {w:?}"
            );
        }
    }
}
