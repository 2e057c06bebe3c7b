//! End-to-end acceptance battery. Runs without the test harness so that the
//! verdict for every criterion is always printed, one line each; exits
//! nonzero if any criterion fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xduce_core::alphabet::{Alphabet, Word};
use xduce_core::analysis::{check_dichotomy, is_producing, nu_image};
use xduce_core::assign::{MixedWord, Monoid, RegAssignment, Tok, Wreath};
use xduce_core::cfp::{
    build_cfpow, build_cfpow_pipeline, build_cfsquaring, default_samples, eval_cfp,
    eval_pipeline, growth_degree, rank_bound, CfpExpr,
};
use xduce_core::cfpt::{cbs_cfpt_reference, cbs_compose_cfpt, run_cfpt, DEFAULT_BUDGET};
use xduce_core::corpus;
use xduce_core::hdt0l::{
    check_layered_hdt0l, hdt0l_to_sst, layered_hdt0l_to_sst, map_hdt0l, map_reference,
    run_hdt0l, sst_to_hdt0l, Hdt0lSystem,
};
use xduce_core::json::Document;
use xduce_core::machines;
use xduce_core::sequences::{
    beta_blocks, eval_family, eval_pwe, extract_cfp_family, extract_pumping_family,
    family_uniform_sets, poly_uniform_sets, PumpingFamily,
};
use xduce_core::sst::{
    infer_layering, phi_image, run_sequential, run_sst, sequential_to_sst,
    shape_label_extractor, shape_label_reference, Sst,
};

type Verdict = Result<(), String>;

fn main() {
    let checks: &[(&str, fn() -> Verdict)] = &[
        ("reversed-prefixes worked example", c01_prefixes),
        ("squaring worked examples (expression and pipeline)", c02_squaring),
        ("translation round trips across the corpus", c03_translations),
        ("layer offset of the HDT0L translation", c04_layer_offset),
        ("map construction agrees blockwise", c05_map),
        ("CFPT composition by substitution", c06_cfpt_cbs),
        ("producing-triple dichotomy, exhaustive", c07_dichotomy),
        ("pumping family extraction", c08_pumping),
        ("growth degrees 1, 2 and 3", c09_growth),
        ("polynomial uniformity and the block-growth witness", c10_uniformity),
        ("power pipeline equals the recursion", c11_cfpow),
        ("shape-label extractor equals its reference", c12_extractor),
        ("randomized monoid laws", c13_monoid_laws),
    ];
    let mut failed = 0;
    for (i, (label, check)) in checks.iter().enumerate() {
        match check() {
            Ok(()) => println!("{:2} PASS  {label}", i + 1),
            Err(e) => {
                failed += 1;
                println!("{:2} FAIL  {label}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", checks.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", checks.len());
}

fn expect<T: PartialEq + std::fmt::Debug>(got: T, want: T, ctx: &str) -> Verdict {
    if got == want {
        Ok(())
    } else {
        Err(format!("{ctx}: got {got:?}, want {want:?}"))
    }
}

fn ensure(cond: bool, ctx: impl Into<String>) -> Verdict {
    if cond {
        Ok(())
    } else {
        Err(ctx.into())
    }
}

fn er(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn corpus_doc(name: &str) -> Document {
    corpus::all()
        .into_iter()
        .find(|nd| nd.name.as_deref() == Some(name))
        .unwrap_or_else(|| panic!("no corpus document named {name}"))
        .doc
}

fn corpus_sst(name: &str) -> Sst {
    match corpus_doc(name) {
        Document::Sst(t) => t,
        Document::Sequential(s) => sequential_to_sst(&s),
        other => panic!("{name} is a {} document", other.type_tag()),
    }
}

fn corpus_expr(name: &str) -> CfpExpr {
    match corpus_doc(name) {
        Document::CfpExpr(e) => e,
        other => panic!("{name} is a {} document", other.type_tag()),
    }
}

fn corpus_hdt0l(name: &str) -> Hdt0lSystem {
    match corpus_doc(name) {
        Document::Hdt0l(s) => s,
        other => panic!("{name} is a {} document", other.type_tag()),
    }
}

fn unary(g: &Alphabet, n: usize) -> Word {
    Word::from_indices(g.clone(), vec![0; n])
}

// 1. prefixes on 1234, exact output string
fn c01_prefixes() -> Verdict {
    let g = Alphabet::new(["1", "2", "3", "4"]).map_err(er)?;
    let t = machines::prefixes_sst(&g);
    let w = Word::parse(&g, "1 2 3 4").map_err(er)?;
    expect(
        run_sst(&t, &w).map_err(er)?.to_string(),
        "_4 3 2 1 _3 2 1 _2 1 _1".to_owned(),
        "prefixes(1234)",
    )
}

// 2. cfsquaring on 123 and the squaring pipeline on 1234, exact strings
fn c02_squaring() -> Verdict {
    let e = corpus_expr("cfsquaring");
    let g = e.input_alphabet().clone();
    let w = Word::parse(&g, "1 2 3").map_err(er)?;
    expect(
        eval_cfp(&e, &w).map_err(er)?.to_string(),
        "_1 1 2 3 _2 1 2 3 _3 1 2 3".to_owned(),
        "cfsquaring(123)",
    )?;
    let Document::Pipeline(p) = corpus_doc("squaring_pipeline") else {
        return Err("squaring_pipeline is not a pipeline".into());
    };
    let g = p.stages[0].input_alphabet().clone();
    let w = Word::parse(&g, "1 2 3 4").map_err(er)?;
    expect(
        eval_pipeline(&p, &w).map_err(er)?.to_string(),
        "_1 2 3 4 1 _2 3 4 1 2 _3 4 1 2 3 _4".to_owned(),
        "squaring(1234)",
    )
}

/// All words of length ≤ `max` over the first and last letter of `g`.
fn two_letter_words(g: &Alphabet, max: usize) -> Vec<Word> {
    let letters: Vec<u32> =
        if g.len() <= 1 { vec![0] } else { vec![0, g.len() as u32 - 1] };
    let mut words = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &layer {
            for &c in &letters {
                let mut v = w.clone();
                v.push(c);
                words.push(v.clone());
                next.push(v);
            }
        }
        layer = next;
    }
    words.into_iter().map(|v| Word::from_indices(g.clone(), v)).collect()
}

fn small_blocks(t: &Sst) -> Result<Vec<Vec<u32>>, String> {
    for k in 0..=3 {
        if let Some(blocks) = infer_layering(t, k).map_err(er)? {
            return Ok(blocks);
        }
    }
    Err("no layering with at most 4 layers".into())
}

// 3. every corpus machine survives the round trip through the other model
fn c03_translations() -> Verdict {
    let mut machines_seen = 0;
    for nd in &corpus::all() {
        let name = nd.name.as_deref().unwrap();
        let sst = match &nd.doc {
            Document::Sst(t) => Some(t.clone()),
            Document::Sequential(s) => Some(sequential_to_sst(s)),
            _ => None,
        };
        if let Some(t) = sst {
            machines_seen += 1;
            let blocks = small_blocks(&t).map_err(|e| format!("{name}: {e}"))?;
            let (sys, sys_blocks) = sst_to_hdt0l(&t, &blocks).map_err(er)?;
            let back = layered_hdt0l_to_sst(&sys, &sys_blocks).map_err(er)?;
            for w in two_letter_words(&t.input, 5) {
                let want = run_sst(&t, &w).map_err(er)?;
                expect(run_hdt0l(&sys, &w).map_err(er)?, want.clone(), &format!("{name} on {w}"))?;
                expect(run_sst(&back, &w).map_err(er)?, want, &format!("{name} back on {w}"))?;
            }
        }
        if let Document::Hdt0l(sys) = &nd.doc {
            machines_seen += 1;
            let t = hdt0l_to_sst(sys).map_err(er)?;
            for w in two_letter_words(&sys.input, 5) {
                expect(
                    run_sst(&t, &w).map_err(er)?,
                    run_hdt0l(sys, &w).map_err(er)?,
                    &format!("{name} on {w}"),
                )?;
            }
        }
    }
    ensure(machines_seen >= 10, format!("only {machines_seen} machines exercised"))
}

// 4. k-layered machine -> (k+1)-layered system (k+2 blocks), and back
fn c04_layer_offset() -> Verdict {
    let ab = Alphabet::new(["a", "b"]).map_err(er)?;
    for (name, t, k) in [
        ("idreverse", machines::idreverse_sst(), 0),
        ("prefixes", machines::prefixes_sst(&ab), 1),
    ] {
        let blocks = infer_layering(&t, k)
            .map_err(er)?
            .ok_or_else(|| format!("{name} is not {k}-layered"))?;
        let (sys, sys_blocks) = sst_to_hdt0l(&t, &blocks).map_err(er)?;
        expect(sys_blocks.len(), k + 2, &format!("{name} block count"))?;
        ensure(
            check_layered_hdt0l(&sys, &sys_blocks).map_err(er)?,
            format!("{name}: translated system rejects its layering witness"),
        )?;
        let back = layered_hdt0l_to_sst(&sys, &sys_blocks).map_err(er)?;
        for w in t.input.words_up_to(4) {
            expect(
                run_sst(&back, &w).map_err(er)?,
                run_sst(&t, &w).map_err(er)?,
                &format!("{name} round trip on {w}"),
            )?;
        }
    }
    Ok(())
}

// 5. map construction vs blockwise semantics, ≤3 blocks of length ≤3
fn c05_map() -> Verdict {
    for name in ["squaring_hdt0l", "witness_71i"] {
        let sys = corpus_hdt0l(name);
        let (mapped, _) = map_hdt0l(&sys, "#", None).map_err(er)?;
        let g = mapped.input.clone();
        let sep = g.index_of("#").ok_or("mapped input lost the separator")?;
        let mut inputs = vec![Vec::new()];
        for parts in 1..=3u32 {
            for code in 0..4u32.pow(parts) {
                let mut v: Vec<u32> = Vec::new();
                let mut x = code;
                for i in 0..parts {
                    if i > 0 {
                        v.push(sep);
                    }
                    v.extend(std::iter::repeat(0).take((x % 4) as usize));
                    x /= 4;
                }
                inputs.push(v);
            }
        }
        for v in inputs {
            let w = Word::from_indices(g.clone(), v);
            expect(
                run_hdt0l(&mapped, &w).map_err(er)?,
                map_reference(&sys, "#", &w).map_err(er)?,
                &format!("{name} map on {w}"),
            )?;
        }
    }
    Ok(())
}

// 6. CFPT composition vs recursive evaluation, three cases, words ≤ 4
fn c06_cfpt_cbs() -> Verdict {
    let g = Alphabet::new(["a", "b"]).map_err(er)?;
    // echo with identity and reverse parts
    let names = Alphabet::new(["i", "r"]).map_err(er)?;
    let echo = machines::cfpt_echo(&g, &names);
    let id = machines::cfpt_identity(&g);
    let rev = machines::cfpt_reverse(&g);
    let subs = vec![("i".to_owned(), &id), ("r".to_owned(), &rev)];
    let composed = cbs_compose_cfpt(&echo, &subs).map_err(er)?;
    expect(composed.k, 2, "echo composition pebble count")?;
    for w in g.words_up_to(4) {
        expect(
            run_cfpt(&composed, &w, DEFAULT_BUDGET).map_err(er)?,
            cbs_cfpt_reference(&echo, &subs, &w, DEFAULT_BUDGET).map_err(er)?,
            &format!("echo case on {w}"),
        )?;
    }
    // the two-pebble squaring machine vs the expression
    let sq = machines::cfpt_cfsquaring(&g);
    expect(sq.k, 2, "squaring pebble count")?;
    let e = build_cfsquaring(&g);
    for w in g.words_up_to(4) {
        expect(
            run_cfpt(&sq, &w, DEFAULT_BUDGET).map_err(er)?,
            eval_cfp(&e, &w).map_err(er)?,
            &format!("squaring case on {w}"),
        )?;
    }
    // an asymmetric outer with constant and reverse parts
    let images =
        vec![Word::parse(&names, "i").map_err(er)?, Word::parse(&names, "r i").map_err(er)?];
    let outer = machines::cfpt_per_letter(&g, &names, images);
    let konst = machines::cfpt_const(&g, &Word::parse(&g, "b a").map_err(er)?);
    let subs = vec![("i".to_owned(), &konst), ("r".to_owned(), &rev)];
    let composed = cbs_compose_cfpt(&outer, &subs).map_err(er)?;
    for w in g.words_up_to(4) {
        expect(
            run_cfpt(&composed, &w, DEFAULT_BUDGET).map_err(er)?,
            cbs_cfpt_reference(&outer, &subs, &w, DEFAULT_BUDGET).map_err(er)?,
            &format!("asymmetric case on {w}"),
        )?;
    }
    Ok(())
}

// 7. dichotomy with zero exceptions, words ≤ 7 over two letters, plus the
// pumping consequence on every producing split of words ≤ 4
fn c07_dichotomy() -> Verdict {
    let ab = Alphabet::new(["a", "b"]).map_err(er)?;
    let a = Alphabet::new(["a"]).map_err(er)?;
    let cases: Vec<(&str, Sst)> = vec![
        ("identity", machines::identity_sst(&ab)),
        ("reverse", machines::reverse_sst(&ab)),
        ("constant", machines::const_sst(&ab, &Word::parse(&ab, "a b").map_err(er)?)),
        ("idreverse-unary", machines::idreverse_over(&a)),
    ];
    let mut producing_seen = 0;
    let mut pumped_checks = 0;
    for (name, t) in &cases {
        ensure(t.input.len() == 2, format!("{name} is not over two letters"))?;
        for c in t.output.symbol_vec() {
            let report = check_dichotomy(t, &c, 7).map_err(er)?;
            ensure(
                report.passed(),
                format!("{name}/{c}: {}", report.failure.clone().unwrap_or_default()),
            )?;
            producing_seen += report.producing_splits;
        }
        // every producing split pumps at least one occurrence per round
        for s in t.input.words_up_to(4) {
            for i in 0..=s.len() {
                for j in i + 1..=s.len() {
                    let u = s.slice(0..i);
                    let v = s.slice(i..j);
                    let w = s.slice(j..s.len());
                    let (mu, mv, mw) = (
                        nu_image(t, &u).map_err(er)?,
                        nu_image(t, &v).map_err(er)?,
                        nu_image(t, &w).map_err(er)?,
                    );
                    if mu.mul(&mv) != mu || mv.mul(&mw) != mw {
                        continue;
                    }
                    for c in 0..t.output.len() as u32 {
                        if !is_producing(t, &mu, &mv, &mw, c) {
                            continue;
                        }
                        for n in 0..=6usize {
                            let pumped =
                                u.concat(&v.repeat(n)).map_err(er)?.concat(&w).map_err(er)?;
                            let count = run_sst(t, &pumped).map_err(er)?.count_letter(c);
                            ensure(
                                count >= n,
                                format!(
                                    "{name}: f({u} ({v})^{n} {w}) has only {count} of letter {c}"
                                ),
                            )?;
                            pumped_checks += 1;
                        }
                    }
                }
            }
        }
    }
    // the constant machine has no producing splits; the others must
    ensure(producing_seen > 0, "no producing split in the whole scan")?;
    ensure(pumped_checks > 0, "the pumping consequence was never exercised")?;
    Ok(())
}

// 8. pumping families: exact match against direct evaluation, star heights
fn c08_pumping() -> Verdict {
    for name in ["identity_unary", "reverse_unary", "constant_unary"] {
        let t = corpus_sst(name);
        let fam = extract_pumping_family(&t).map_err(|e| format!("{name}: {e}"))?;
        ensure(fam.max_star_height() <= 1, format!("{name}: star height too big"))?;
        for n in 0..=8 {
            expect(
                eval_family(&fam, n).map_err(er)?,
                run_sst(&t, &unary(&t.input, n)).map_err(er)?,
                &format!("{name} at {n}"),
            )?;
        }
    }
    for name in ["cfsquaring_unary", "cond_unary", "concat_unary"] {
        let e = corpus_expr(name);
        let fam = extract_cfp_family(&e).map_err(|err| format!("{name}: {err}"))?;
        ensure(
            fam.max_star_height() <= rank_bound(&e) + 1,
            format!("{name}: star height beyond rank bound"),
        )?;
        let g = e.input_alphabet().clone();
        for n in 0..=6 {
            expect(
                eval_family(&fam, n).map_err(er)?,
                eval_cfp(&e, &unary(&g, n)).map_err(er)?,
                &format!("{name} at {n}"),
            )?;
        }
    }
    Ok(())
}

// 9. growth degrees by exact finite differences on first-letter powers
fn c09_growth() -> Verdict {
    let degree_of = |doc: &Document| -> Result<Option<usize>, String> {
        let g = match doc {
            Document::Sst(t) => t.input.clone(),
            Document::Sequential(s) => s.input.clone(),
            Document::CfpExpr(e) => e.input_alphabet().clone(),
            Document::Pipeline(p) => p.stages[0].input_alphabet().clone(),
            _ => return Err("not a machine".into()),
        };
        let report = growth_degree(
            |w| match doc {
                Document::Sst(t) => run_sst(t, w),
                Document::Sequential(s) => run_sequential(s, w),
                Document::CfpExpr(e) => eval_cfp(e, w),
                Document::Pipeline(p) => eval_pipeline(p, w),
                _ => unreachable!(),
            },
            &default_samples(&g),
        )
        .map_err(er)?;
        Ok(report.degree)
    };
    for name in ["identity", "reverse", "idreverse", "fig2"] {
        expect(degree_of(&corpus_doc(name))?, Some(1), name)?;
    }
    expect(degree_of(&corpus_doc("cfsquaring"))?, Some(2), "cfsquaring")?;
    expect(degree_of(&corpus_doc("cfpow_pipeline3"))?, Some(3), "cfpow_pipeline3")
}

// 10. uniform polynomial sets cover every observed block length; the witness
// sequence's count of block lengths grows with n
fn c10_uniformity() -> Verdict {
    for name in ["pwe_block", "pwe_seam"] {
        let Document::Pwe(e) = corpus_doc(name) else {
            return Err(format!("{name} is not a pwe document"));
        };
        for c in e.alphabet().symbol_vec() {
            let sets = poly_uniform_sets(&e, &c).map_err(er)?;
            for n in 0..=10 {
                let blocks = beta_blocks(&eval_pwe(&e, n), &c).map_err(er)?;
                ensure(
                    sets.covers(n, &blocks),
                    format!("{name}/{c} at n={n}: {blocks:?} not covered"),
                )?;
            }
        }
    }
    let mut fams: Vec<(String, PumpingFamily, Box<dyn Fn(usize) -> Word>)> = Vec::new();
    for name in ["identity_unary", "reverse_unary", "constant_unary"] {
        let t = corpus_sst(name);
        let fam = extract_pumping_family(&t).map_err(er)?;
        fams.push((
            name.to_owned(),
            fam,
            Box::new(move |n| run_sst(&t, &unary(&t.input, n)).unwrap()),
        ));
    }
    for name in ["cfsquaring_unary", "cond_unary", "concat_unary"] {
        let e = corpus_expr(name);
        let fam = extract_cfp_family(&e).map_err(er)?;
        let g = e.input_alphabet().clone();
        fams.push((
            name.to_owned(),
            fam,
            Box::new(move |n| eval_cfp(&e, &unary(&g, n)).unwrap()),
        ));
    }
    for (name, fam, direct) in &fams {
        for c in fam.alphabet.symbol_vec() {
            let sets = family_uniform_sets(fam, &c).map_err(er)?;
            for n in 0..=10 {
                let blocks = beta_blocks(&direct(n), &c).map_err(er)?;
                ensure(
                    sets.covers(n, &blocks),
                    format!("{name}/{c} at n={n}: {blocks:?} not covered"),
                )?;
            }
        }
    }
    let witness = corpus_hdt0l("witness_71i");
    for n in 2..=10 {
        let out = run_hdt0l(&witness, &unary(&witness.input, n)).map_err(er)?;
        let blocks = beta_blocks(&out, "a").map_err(er)?;
        ensure(
            blocks.len() >= n - 1,
            format!("witness at n={n}: only {} block lengths", blocks.len()),
        )?;
    }
    Ok(())
}

// 11. the stripping pipeline computes the same function as the recursion
fn c11_cfpow() -> Verdict {
    let g = Alphabet::new(["a", "b"]).map_err(er)?;
    for k in 0..=3 {
        let pipeline = build_cfpow_pipeline(k, &g);
        let expr = build_cfpow(k, &g);
        for w in g.words_up_to(4) {
            expect(
                eval_pipeline(&pipeline, &w).map_err(er)?,
                eval_cfp(&expr, &w).map_err(er)?,
                &format!("k={k} on {w}"),
            )?;
        }
    }
    Ok(())
}

// 12. shape-label extractor vs direct reference, all words ≤ 5
fn c12_extractor() -> Verdict {
    for name in ["reverse", "idreverse"] {
        let t = corpus_sst(name);
        let mut alphas = Vec::new();
        for w in t.input.words_up_to(2) {
            let wr = phi_image(&t, &w).map_err(er)?;
            let (_, shape) = wr.apply(t.initial);
            if !alphas.contains(shape) {
                alphas.push(shape.clone());
            }
        }
        for alpha in &alphas {
            for j in 0..=alpha.image_of(0).len() {
                let ex = shape_label_extractor(&t, t.initial, 0, alpha, j).map_err(er)?;
                for w in t.input.words_up_to(5) {
                    expect(
                        run_sst(&ex, &w).map_err(er)?,
                        shape_label_reference(&t, t.initial, 0, alpha, j, &w).map_err(er)?,
                        &format!("{name} label {j} on {w}"),
                    )?;
                }
            }
        }
    }
    Ok(())
}

// 13. monoid laws on random register assignments, ≥ 10³ cases each
fn c13_monoid_laws() -> Verdict {
    let regs = Alphabet::new(["X", "Y"]).map_err(er)?;
    let out = Alphabet::new(["a", "b"]).map_err(er)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let random_assignment = |rng: &mut ChaCha8Rng| {
        let images = (0..2)
            .map(|_| {
                let len = rng.gen_range(0..4);
                MixedWord(
                    (0..len)
                        .map(|_| {
                            if rng.gen_bool(0.5) {
                                Tok::Reg(rng.gen_range(0..2))
                            } else {
                                Tok::Out(rng.gen_range(0..2))
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        RegAssignment::new(regs.clone(), out.clone(), images).unwrap()
    };
    let random_wreath = |rng: &mut ChaCha8Rng| Wreath {
        map: (0..2).map(|_| (rng.gen_range(0..2), random_assignment(rng))).collect(),
    };
    for case in 0..1000 {
        let a = random_assignment(&mut rng);
        let b = random_assignment(&mut rng);
        let c = random_assignment(&mut rng);
        expect(a.mul(&b).mul(&c), a.mul(&b.mul(&c)), &format!("associativity, case {case}"))?;
        expect(
            a.mul(&b).erase(),
            a.erase().mul(&b.erase()),
            &format!("erase morphism, case {case}"),
        )?;
        let values: Vec<Word> = (0..2)
            .map(|_| {
                let len = rng.gen_range(0..3);
                Word::from_indices(out.clone(), (0..len).map(|_| rng.gen_range(0..2)).collect())
            })
            .collect();
        expect(
            a.mul(&b).dagger(&values).map_err(er)?,
            b.dagger(&a.dagger(&values).map_err(er)?).map_err(er)?,
            &format!("dagger law, case {case}"),
        )?;
        let wa = random_wreath(&mut rng);
        let wb = random_wreath(&mut rng);
        let wc = random_wreath(&mut rng);
        expect(
            wa.mul(&wb).mul(&wc),
            wa.mul(&wb.mul(&wc)),
            &format!("wreath associativity, case {case}"),
        )?;
    }
    Ok(())
}
