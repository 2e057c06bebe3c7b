//! Composition by substitution over copyless register machines.
//!
//! `Cbs(f, (g_i))` replaces every letter `i` of `f(w)` by `g_i(w)`; the class
//! generated from copyless SSTs by this operator (plus regular conditionals
//! and concatenation, which do not raise the rank) is the comparison-free
//! polyregular functions. This module holds the expression algebra, the
//! named constructions (`cfsquaring`, `cfpow`, the squaring pipeline and the
//! `cfpow` stripping pipeline) and an exact growth-degree probe.

use crate::alphabet::{Alphabet, Dfa, Word};
use crate::hdt0l::{run_hdt0l, Hdt0lSystem};
use crate::machines;
use crate::sst::{
    check_copyless, run_sequential, run_sst, sequential_to_sst, SequentialTransducer, Sst,
};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum CfpExpr {
    /// A regular base function, given by a copyless SST.
    Reg(Sst),
    /// Composition by substitution: the outer expression names which
    /// substituted expression to evaluate at each output position.
    Cbs { outer: Box<CfpExpr>, subs: Vec<(String, CfpExpr)> },
    /// Regular conditional: evaluate one branch depending on membership.
    Cond { dfa: Dfa, then: Box<CfpExpr>, otherwise: Box<CfpExpr> },
    /// Concatenation of two expressions on the same input.
    Concat(Box<CfpExpr>, Box<CfpExpr>),
}

impl CfpExpr {
    pub fn input_alphabet(&self) -> &Alphabet {
        match self {
            CfpExpr::Reg(t) => &t.input,
            CfpExpr::Cbs { outer, .. } => outer.input_alphabet(),
            CfpExpr::Cond { then, .. } => then.input_alphabet(),
            CfpExpr::Concat(l, _) => l.input_alphabet(),
        }
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        match self {
            CfpExpr::Reg(t) => &t.output,
            CfpExpr::Cbs { subs, .. } => subs[0].1.output_alphabet(),
            CfpExpr::Cond { then, .. } => then.output_alphabet(),
            CfpExpr::Concat(l, _) => l.output_alphabet(),
        }
    }
}

pub fn validate_cfp(e: &CfpExpr) -> Result<()> {
    match e {
        CfpExpr::Reg(t) => {
            t.validate()?;
            if !check_copyless(t) {
                return Err(Error::Invalid("base machines must be copyless".into()));
            }
        }
        CfpExpr::Cbs { outer, subs } => {
            validate_cfp(outer)?;
            if subs.is_empty() {
                return Err(Error::Invalid("substitution needs at least one name".into()));
            }
            let names = outer.output_alphabet().clone();
            if names.len() != subs.len()
                || subs.iter().any(|(n, _)| !names.contains(n))
                || (1..subs.len()).any(|i| subs[..i].iter().any(|(n, _)| n == &subs[i].0))
            {
                return Err(Error::Invalid(
                    "substitutions must cover the outer output alphabet exactly".into(),
                ));
            }
            let out = subs[0].1.output_alphabet().clone();
            for (_, sub) in subs {
                validate_cfp(sub)?;
                if sub.input_alphabet() != e.input_alphabet() {
                    return Err(Error::AlphabetMismatch(
                        "substituted expression reads a different input".into(),
                    ));
                }
                if *sub.output_alphabet() != out {
                    return Err(Error::AlphabetMismatch(
                        "substituted expressions must share an output alphabet".into(),
                    ));
                }
            }
        }
        CfpExpr::Cond { dfa, then, otherwise } => {
            dfa.validate()?;
            validate_cfp(then)?;
            validate_cfp(otherwise)?;
            if dfa.alphabet != *then.input_alphabet()
                || then.input_alphabet() != otherwise.input_alphabet()
                || then.output_alphabet() != otherwise.output_alphabet()
            {
                return Err(Error::AlphabetMismatch("conditional branches disagree".into()));
            }
        }
        CfpExpr::Concat(l, r) => {
            validate_cfp(l)?;
            validate_cfp(r)?;
            if l.input_alphabet() != r.input_alphabet()
                || l.output_alphabet() != r.output_alphabet()
            {
                return Err(Error::AlphabetMismatch("concatenation branches disagree".into()));
            }
        }
    }
    Ok(())
}

pub fn eval_cfp(e: &CfpExpr, w: &Word) -> Result<Word> {
    match e {
        CfpExpr::Reg(t) => run_sst(t, w),
        CfpExpr::Cbs { outer, subs } => {
            let plan = eval_cfp(outer, w)?;
            let mut out = Word::empty(subs[0].1.output_alphabet().clone());
            for i in 0..plan.len() {
                let name = plan.symbol_at(i);
                let (_, sub) = subs
                    .iter()
                    .find(|(n, _)| n == name)
                    .ok_or_else(|| Error::UnknownSymbol(name.to_owned()))?;
                out.extend(&eval_cfp(sub, w)?)?;
            }
            Ok(out)
        }
        CfpExpr::Cond { dfa, then, otherwise } => {
            if dfa.accepts(w)? {
                eval_cfp(then, w)
            } else {
                eval_cfp(otherwise, w)
            }
        }
        CfpExpr::Concat(l, r) => eval_cfp(l, w)?.concat(&eval_cfp(r, w)?),
    }
}

/// Upper bound on the rank: base machines are rank 0, a substitution costs
/// one plus both sides, conditionals and concatenation are free.
pub fn rank_bound(e: &CfpExpr) -> usize {
    match e {
        CfpExpr::Reg(_) => 0,
        CfpExpr::Cbs { outer, subs } => {
            1 + rank_bound(outer) + subs.iter().map(|(_, s)| rank_bound(s)).max().unwrap_or(0)
        }
        CfpExpr::Cond { then, otherwise, .. } => rank_bound(then).max(rank_bound(otherwise)),
        CfpExpr::Concat(l, r) => rank_bound(l).max(rank_bound(r)),
    }
}

fn fresh_symbol(base: &str, avoid: &Alphabet) -> String {
    let mut s = base.to_owned();
    while avoid.contains(&s) {
        s = format!("#{s}");
    }
    s
}

/// `cfsquaring_Γ(w) = w̲₁ w w̲₂ w … w̲ₙ w`: one substitution over the marker
/// sequence `w₁# … wₙ#`, with `#` standing for the identity and each letter
/// for its underlined constant.
pub fn build_cfsquaring(g: &Alphabet) -> CfpExpr {
    let out = machines::with_underlined(g);
    let sep = fresh_symbol("#", g);
    let names = g.adjoin(&sep).unwrap();
    let images = g
        .symbols()
        .map(|c| Word::from_symbols(&names, [c, sep.as_str()]).unwrap())
        .collect();
    let outer = sequential_to_sst(&machines::seq_per_letter(g, &names, images));
    let mut subs: Vec<(String, CfpExpr)> = g
        .symbols()
        .map(|c| {
            let bar = Word::from_symbols(&out, [Alphabet::underline_symbol(c).as_str()]).unwrap();
            (c.to_owned(), CfpExpr::Reg(machines::const_sst(g, &bar)))
        })
        .collect();
    let embed = (0..g.len() as u32)
        .map(|c| Word::from_symbols(&out, [g.symbol(c)]).unwrap())
        .collect();
    subs.push((sep, CfpExpr::Reg(machines::relabel_sst(g, &out, embed))));
    CfpExpr::Cbs { outer: Box::new(CfpExpr::Reg(outer)), subs }
}

/// `w ↦ w^{|w|}` as a single substitution: the outer function lays down one
/// marker per letter, each marker substitutes the identity.
pub fn build_wpow(g: &Alphabet) -> CfpExpr {
    let marker = Alphabet::new(["@"]).unwrap();
    let images = vec![Word::from_symbols(&marker, ["@"]).unwrap(); g.len()];
    let outer = sequential_to_sst(&machines::seq_per_letter(g, &marker, images));
    CfpExpr::Cbs {
        outer: Box::new(CfpExpr::Reg(outer)),
        subs: vec![("@".into(), CfpExpr::Reg(machines::identity_sst(g)))],
    }
}

/// `cfpow⁽ᵏ⁾_Γ`, the level-`k` power function over `{0,…,k−1}×Γ`:
/// `cfpow⁽ⁿ⁺¹⁾(w) = (n,w₁)·cfpow⁽ⁿ⁾(w)·…·(n,w_{|w|})·cfpow⁽ⁿ⁾(w)` with
/// `cfpow⁽⁰⁾ ≡ ε`. Every recursion level costs one substitution, so the
/// rank bound is `max(k−1, 0)`.
pub fn build_cfpow(k: usize, g: &Alphabet) -> CfpExpr {
    let out = g.leveled(k);
    cfpow_expr(k, g, &out)
}

fn cfpow_expr(j: usize, g: &Alphabet, out: &Alphabet) -> CfpExpr {
    if j == 0 {
        return CfpExpr::Reg(machines::const_sst(g, &Word::empty(out.clone())));
    }
    let level = |c: &str| format!("{}:{c}", j - 1);
    if j == 1 {
        let images = g
            .symbols()
            .map(|c| Word::from_symbols(out, [level(c).as_str()]).unwrap())
            .collect();
        return CfpExpr::Reg(machines::relabel_sst(g, out, images));
    }
    let heads = Alphabet::new(g.symbols().map(|c| level(c)).collect::<Vec<_>>()).unwrap();
    let marker = fresh_symbol("@", &heads);
    let names = heads.adjoin(&marker).unwrap();
    let images = g
        .symbols()
        .map(|c| Word::from_symbols(&names, [level(c).as_str(), marker.as_str()]).unwrap())
        .collect();
    let outer = sequential_to_sst(&machines::seq_per_letter(g, &names, images));
    let mut subs: Vec<(String, CfpExpr)> = g
        .symbols()
        .map(|c| {
            let head = Word::from_symbols(out, [level(c).as_str()]).unwrap();
            (level(c), CfpExpr::Reg(machines::const_sst(g, &head)))
        })
        .collect();
    subs.push((marker, cfpow_expr(j - 1, g, out)));
    CfpExpr::Cbs { outer: Box::new(CfpExpr::Reg(outer)), subs }
}

/// One stage of a semantic composition chain.
#[derive(Clone, Debug, PartialEq)]
pub enum Stage {
    Sst(Sst),
    Hdt0l(Hdt0lSystem),
    Seq(SequentialTransducer),
    Expr(CfpExpr),
}

impl Stage {
    pub fn input_alphabet(&self) -> &Alphabet {
        match self {
            Stage::Sst(t) => &t.input,
            Stage::Hdt0l(s) => &s.input,
            Stage::Seq(s) => &s.input,
            Stage::Expr(e) => e.input_alphabet(),
        }
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        match self {
            Stage::Sst(t) => &t.output,
            Stage::Hdt0l(s) => &s.output,
            Stage::Seq(s) => &s.output,
            Stage::Expr(e) => e.output_alphabet(),
        }
    }

    pub fn eval(&self, w: &Word) -> Result<Word> {
        match self {
            Stage::Sst(t) => run_sst(t, w),
            Stage::Hdt0l(s) => run_hdt0l(s, w),
            Stage::Seq(s) => run_sequential(s, w),
            Stage::Expr(e) => eval_cfp(e, w),
        }
    }
}

/// A function given as a composition chain; composition is semantic only
/// (stages are run in order), no machine product is built.
#[derive(Clone, Debug, PartialEq)]
pub struct Pipeline {
    pub stages: Vec<Stage>,
}

pub fn validate_pipeline(p: &Pipeline) -> Result<()> {
    if p.stages.is_empty() {
        return Err(Error::Invalid("pipeline needs at least one stage".into()));
    }
    for pair in p.stages.windows(2) {
        if pair[0].output_alphabet() != pair[1].input_alphabet() {
            return Err(Error::AlphabetMismatch(format!(
                "stage output {:?} does not feed the next stage input {:?}",
                pair[0].output_alphabet().symbol_vec(),
                pair[1].input_alphabet().symbol_vec()
            )));
        }
    }
    Ok(())
}

pub fn eval_pipeline(p: &Pipeline, w: &Word) -> Result<Word> {
    let mut v = w.clone();
    for stage in &p.stages {
        v = stage.eval(&v)?;
    }
    Ok(v)
}

/// `squaring_Γ` as two single-state one-layered SSTs: reversed prefixes with
/// underlined heads, then block-wise re-expansion.
pub fn build_squaring_pipeline(g: &Alphabet) -> Pipeline {
    Pipeline {
        stages: vec![
            Stage::Sst(machines::prefixes_sst(g)),
            Stage::Sst(machines::squaring_stage2(g)),
        ],
    }
}

/// The two-state stripping transducer: reads
/// `cfsquaring_{{0..m}×Γ}(cfpow⁽ᵐ⁺¹⁾(w))` and keeps exactly the blocks whose
/// underlined head sits on the top level `m`, relabelling that head to level
/// `m+1`; blocks with lower heads are skipped.
pub fn stripping_transducer(m: usize, g: &Alphabet) -> SequentialTransducer {
    let inner = g.leveled(m + 1);
    let input = machines::with_underlined(&inner);
    let output = g.leveled(m + 2);
    let top = |s: &str| s.starts_with(&format!("{m}:"));
    let promote = |s: &str| {
        let c = s.split_once(':').unwrap().1;
        Word::from_symbols(&output, [format!("{}:{c}", m + 1).as_str()]).unwrap()
    };
    let mut keep = Vec::with_capacity(input.len()); // state o: inside a kept block
    let mut skip = Vec::with_capacity(input.len()); // state i: inside a skipped block
    for s in input.symbols() {
        if let Some(plain) = s.strip_prefix('_') {
            if top(plain) {
                keep.push((0, promote(plain)));
                skip.push((0, promote(plain)));
            } else {
                keep.push((1, Word::empty(output.clone())));
                skip.push((1, Word::empty(output.clone())));
            }
        } else {
            keep.push((0, Word::from_symbols(&output, [s]).unwrap()));
            skip.push((1, Word::empty(output.clone())));
        }
    }
    SequentialTransducer {
        input,
        output: output.clone(),
        states: vec!["o".into(), "i".into()],
        initial: 0,
        transitions: vec![keep, skip],
        final_out: vec![Word::empty(output.clone()), Word::empty(output)],
    }
}

/// `cfpow⁽ᵏ⁾` as a pipeline of sequential stages and `cfsquaring` stages:
/// relabel to level 0, then `k−1` rounds of squaring followed by stripping.
pub fn build_cfpow_pipeline(k: usize, g: &Alphabet) -> Pipeline {
    if k == 0 {
        let images = vec![Word::empty(g.leveled(0)); g.len()];
        return Pipeline {
            stages: vec![Stage::Seq(machines::seq_per_letter(g, &g.leveled(0), images))],
        };
    }
    let lev1 = g.leveled(1);
    let images = g
        .symbols()
        .map(|c| Word::from_symbols(&lev1, [format!("0:{c}").as_str()]).unwrap())
        .collect();
    let mut stages = vec![Stage::Seq(machines::seq_per_letter(g, &lev1, images))];
    for j in 1..k {
        stages.push(Stage::Expr(build_cfsquaring(&g.leveled(j))));
        stages.push(Stage::Seq(stripping_transducer(j - 1, g)));
    }
    Pipeline { stages }
}

/// Exact growth probe: output lengths on a sample family with strictly
/// increasing input lengths, plus the least order of finite difference that
/// settles to a constant (over the second half of the samples).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    pub input_lengths: Vec<usize>,
    pub output_lengths: Vec<usize>,
    /// `None` means no polynomial degree up to [`GROWTH_DEGREE_MAX`] fits.
    pub degree: Option<usize>,
}

pub const GROWTH_DEGREE_MAX: usize = 6;

/// Default family `a, aa, aaa, …` over the first letter, `n = 1..=16`.
pub fn default_samples(g: &Alphabet) -> Vec<Word> {
    (1..=16).map(|n| Word::from_indices(g.clone(), vec![0; n])).collect()
}

pub fn growth_degree<F>(mut f: F, samples: &[Word]) -> Result<GrowthReport>
where
    F: FnMut(&Word) -> Result<Word>,
{
    if samples.len() < 4 {
        return Err(Error::Invalid("growth probe needs at least four samples".into()));
    }
    if samples.windows(2).any(|p| p[0].len() >= p[1].len()) {
        return Err(Error::Invalid("sample lengths must be strictly increasing".into()));
    }
    let input_lengths: Vec<usize> = samples.iter().map(Word::len).collect();
    let mut output_lengths = Vec::with_capacity(samples.len());
    for w in samples {
        output_lengths.push(f(w)?.len());
    }
    let mut diffs: Vec<i64> = output_lengths.iter().map(|&n| n as i64).collect();
    let mut degree = None;
    for d in 0..=GROWTH_DEGREE_MAX {
        let tail_start = diffs.len() / 2;
        if diffs.len() - tail_start >= 3 && diffs[tail_start..].iter().all(|&x| x == diffs[tail_start]) {
            degree = Some(d);
            break;
        }
        if diffs.len() < 2 {
            break;
        }
        diffs = diffs.windows(2).map(|p| p[1] - p[0]).collect();
    }
    Ok(GrowthReport { input_lengths, output_lengths, degree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn cfsquaring_matches_the_pattern() {
        let g = Alphabet::new(["1", "2", "3"]).unwrap();
        let e = build_cfsquaring(&g);
        validate_cfp(&e).unwrap();
        assert_eq!(rank_bound(&e), 1);
        let w = Word::parse(&g, "1 2 3").unwrap();
        assert_eq!(
            eval_cfp(&e, &w).unwrap().to_string(),
            "_1 1 2 3 _2 1 2 3 _3 1 2 3"
        );
        let g2 = ab();
        let e2 = build_cfsquaring(&g2);
        assert_eq!(
            eval_cfp(&e2, &Word::parse(&g2, "a b").unwrap()).unwrap().to_string(),
            "_a a b _b a b"
        );
        assert!(eval_cfp(&e2, &Word::empty(g2)).unwrap().is_empty());
    }

    #[test]
    fn word_power_expression() {
        let g = ab();
        let e = build_wpow(&g);
        validate_cfp(&e).unwrap();
        assert_eq!(rank_bound(&e), 1);
        assert_eq!(
            eval_cfp(&e, &Word::parse(&g, "a b").unwrap()).unwrap().to_string(),
            "a b a b"
        );
    }

    #[test]
    fn cfpow_base_cases_and_rank() {
        let g = ab();
        for k in 0..4 {
            validate_cfp(&build_cfpow(k, &g)).unwrap();
        }
        let w = Word::parse(&g, "a b").unwrap();
        assert!(eval_cfp(&build_cfpow(0, &g), &w).unwrap().is_empty());
        assert_eq!(eval_cfp(&build_cfpow(1, &g), &w).unwrap().to_string(), "0:a 0:b");
        assert_eq!(
            eval_cfp(&build_cfpow(2, &g), &w).unwrap().to_string(),
            "1:a 0:a 0:b 1:b 0:a 0:b"
        );
        assert_eq!(rank_bound(&build_cfpow(3, &g)), 2);
        assert_eq!(rank_bound(&build_cfpow(0, &g)), 0);
        assert_eq!(rank_bound(&build_cfpow(1, &g)), 0);
    }

    #[test]
    fn cfpow_satisfies_the_recursion() {
        let g = ab();
        for k in 0..3 {
            let low = build_cfpow(k, &g);
            let high = build_cfpow(k + 1, &g);
            let out = g.leveled(k + 1);
            for w in g.words_up_to(3) {
                let mut want = Word::empty(out.clone());
                let sub = eval_cfp(&low, &w).unwrap().reindex(&out).unwrap();
                for i in 0..w.len() {
                    let head =
                        Word::from_symbols(&out, [format!("{k}:{}", w.symbol_at(i)).as_str()])
                            .unwrap();
                    want.extend(&head).unwrap();
                    want.extend(&sub).unwrap();
                }
                assert_eq!(eval_cfp(&high, &w).unwrap(), want, "k={k} w={w:?}");
            }
        }
    }

    #[test]
    fn squaring_pipeline_matches_worked_example() {
        let g = Alphabet::new(["1", "2", "3", "4"]).unwrap();
        let p = build_squaring_pipeline(&g);
        validate_pipeline(&p).unwrap();
        let w = Word::parse(&g, "1 2 3 4").unwrap();
        assert_eq!(
            eval_pipeline(&p, &w).unwrap().to_string(),
            "_1 2 3 4 1 _2 3 4 1 2 _3 4 1 2 3 _4"
        );
        let g2 = ab();
        let p2 = build_squaring_pipeline(&g2);
        assert_eq!(
            eval_pipeline(&p2, &Word::parse(&g2, "a b").unwrap()).unwrap().to_string(),
            "_a b a _b"
        );
        assert!(eval_pipeline(&p2, &Word::empty(g2)).unwrap().is_empty());
    }

    #[test]
    fn cfpow_pipeline_agrees_with_recursion() {
        let g = ab();
        for k in 0..4 {
            let p = build_cfpow_pipeline(k, &g);
            validate_pipeline(&p).unwrap();
            let e = build_cfpow(k, &g);
            for w in g.words_up_to(if k == 3 { 4 } else { 3 }) {
                assert_eq!(
                    eval_pipeline(&p, &w).unwrap(),
                    eval_cfp(&e, &w).unwrap().reindex(eval_pipeline(&p, &w).unwrap().alphabet()).unwrap(),
                    "k={k} w={w:?}"
                );
            }
        }
    }

    #[test]
    fn growth_degrees_on_the_default_family() {
        let g = ab();
        let id = machines::identity_sst(&g);
        let samples = default_samples(&g);
        assert_eq!(growth_degree(|w| run_sst(&id, w), &samples).unwrap().degree, Some(1));
        let sq = build_cfsquaring(&g);
        assert_eq!(growth_degree(|w| eval_cfp(&sq, w), &samples).unwrap().degree, Some(2));
        let p3 = build_cfpow(3, &g);
        assert_eq!(growth_degree(|w| eval_cfp(&p3, w), &samples).unwrap().degree, Some(3));
        let c = machines::const_sst(&g, &Word::parse(&g, "a").unwrap());
        assert_eq!(growth_degree(|w| run_sst(&c, w), &samples).unwrap().degree, Some(0));
    }
}
