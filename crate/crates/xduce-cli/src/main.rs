//! `xduce`: run, check, translate and analyze transducer documents from the
//! shell.
//!
//! Exit codes: 0 success, 1 malformed or invalid document, 2 request
//! inapplicable to the document (wrong model, missing symbol, alphabet
//! mismatch), 3 step budget exhausted, 4 a requested check FAILed.
//! Words on the command line are space-separated symbol tokens, so
//! multi-character symbols like `_a` or `1:b` need no quoting tricks.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use xduce_core::alphabet::Alphabet;
use xduce_core::analysis::{check_dichotomy, enumerate_r_splits, is_producing, nu_image};
use xduce_core::cfp::{
    eval_cfp, eval_pipeline, growth_degree, rank_bound, validate_cfp, CfpExpr,
};
use xduce_core::cfpt::{cbs_compose_cfpt, run_cfpt, Cfpt, DEFAULT_BUDGET};
use xduce_core::hdt0l::{
    hdt0l_to_sst, infer_layering_hdt0l, layered_hdt0l_to_sst, run_hdt0l, sst_to_hdt0l,
};
use xduce_core::json::{parse_document, serialize_document, Document, NamedDocument};
use xduce_core::sequences::{
    eval_family, eval_pwe, extract_cfp_family, extract_pumping_family, PumpingFamily,
};
use xduce_core::sst::{
    check_copyless, infer_layering, run_sequential, run_sst, sequential_to_sst,
};
use xduce_core::{Error, Result, Word};

#[derive(Parser)]
#[command(name = "xduce", version, about = "word transducers with polynomial-size output")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a document on an input word (or at a sequence index)
    Run(RunArgs),
    /// Check a structural property: copyless, layered:K or cfpt-legal
    Check(CheckArgs),
    /// Translate between machine models
    Translate(TranslateArgs),
    /// Assemble a composition by substitution from named parts
    Cbs(CbsArgs),
    /// Extract the pumping family of a unary-input machine or expression
    SeqExtract(SeqExtractArgs),
    /// Probe output growth on powers of the first input letter
    Growth(GrowthArgs),
    /// Verify the producing-triple dichotomy exhaustively
    Triples(TriplesArgs),
    /// Print the rank bound of an expression document
    Rank(RankArgs),
    /// Look for a producing r-split of one input word
    SplitScan(SplitScanArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match cli.cmd {
        Cmd::Run(a) => cmd_run(a),
        Cmd::Check(a) => cmd_check(a),
        Cmd::Translate(a) => cmd_translate(a),
        Cmd::Cbs(a) => cmd_cbs(a),
        Cmd::SeqExtract(a) => cmd_seq_extract(a),
        Cmd::Growth(a) => cmd_growth(a),
        Cmd::Triples(a) => cmd_triples(a),
        Cmd::Rank(a) => cmd_rank(a),
        Cmd::SplitScan(a) => cmd_split_scan(a),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("xduce: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Invalid(_) | Error::Bound(_) | Error::SelfCheck(_) => 1,
        Error::UnknownSymbol(_) | Error::AlphabetMismatch(_) | Error::Inapplicable(_) => 2,
        Error::Budget(_) => 3,
    }
}

/// Read and parse a document; every defect of the file itself (including
/// validation failures) is a parse error for exit-code purposes.
fn load(path: &Path) -> Result<NamedDocument> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => Error::Parse(format!("{}: {other}", path.display())),
    })
}

fn budget(flag: Option<u64>) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("XDUCE_BUDGET") {
        Ok(s) => s
            .parse()
            .map_err(|_| Error::Parse(format!("XDUCE_BUDGET is not a number: {s:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn input_alphabet(doc: &Document) -> Result<&Alphabet> {
    match doc {
        Document::Sst(t) => Ok(&t.input),
        Document::Sequential(s) => Ok(&s.input),
        Document::Hdt0l(s) => Ok(&s.input),
        Document::Cfpt(t) => Ok(&t.input),
        Document::Dfa(d) => Ok(&d.alphabet),
        Document::CfpExpr(e) => Ok(e.input_alphabet()),
        Document::Pipeline(p) => Ok(p.stages[0].input_alphabet()),
        Document::Pwe(_) | Document::Family(_) => Err(Error::Inapplicable(
            "sequence documents take --at N, not an input word".into(),
        )),
    }
}

/// Evaluate any word-to-word document. Acceptors and sequence documents are
/// not word-to-word and are rejected here.
fn eval_doc(doc: &Document, w: &Word, budget: u64) -> Result<Word> {
    match doc {
        Document::Sst(t) => run_sst(t, w),
        Document::Sequential(s) => run_sequential(s, w),
        Document::Hdt0l(s) => run_hdt0l(s, w),
        Document::Cfpt(t) => run_cfpt(t, w, budget),
        Document::CfpExpr(e) => eval_cfp(e, w),
        Document::Pipeline(p) => eval_pipeline(p, w),
        _ => Err(Error::Inapplicable(format!(
            "cannot evaluate a {} document on a word",
            doc.type_tag()
        ))),
    }
}

// ---------------------------------------------------------------- run

#[derive(Args)]
struct RunArgs {
    /// Document to evaluate
    file: PathBuf,
    /// Input word as space-separated symbols (may be empty)
    #[arg(long, allow_hyphen_values = true)]
    input: Option<String>,
    /// Sequence index, for pwe and family documents
    #[arg(long)]
    at: Option<usize>,
    /// CFPT step budget (overrides XDUCE_BUDGET)
    #[arg(long)]
    budget: Option<u64>,
}

fn cmd_run(a: RunArgs) -> Result<u8> {
    let nd = load(&a.file)?;
    let out = match &nd.doc {
        Document::Pwe(e) => eval_pwe(e, need_at(a.at)?),
        Document::Family(f) => eval_family(f, need_at(a.at)?)?,
        Document::Dfa(d) => {
            let w = parse_input(&d.alphabet, a.input.as_deref())?;
            println!("{}", if d.accepts(&w)? { "accept" } else { "reject" });
            return Ok(0);
        }
        doc => {
            let w = parse_input(input_alphabet(doc)?, a.input.as_deref())?;
            eval_doc(doc, &w, budget(a.budget)?)?
        }
    };
    println!("{out}");
    Ok(0)
}

fn need_at(at: Option<usize>) -> Result<usize> {
    at.ok_or_else(|| Error::Invalid("sequence documents need --at N".into()))
}

fn parse_input(g: &Alphabet, input: Option<&str>) -> Result<Word> {
    let s = input.ok_or_else(|| Error::Invalid("this document needs --input WORD".into()))?;
    Word::parse(g, s)
}

// ---------------------------------------------------------------- check

#[derive(Args)]
struct CheckArgs {
    /// Machine document
    file: PathBuf,
    /// One of: copyless, layered:K, cfpt-legal
    #[arg(long)]
    property: String,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
}

fn cmd_check(a: CheckArgs) -> Result<u8> {
    let nd = load(&a.file)?;
    let (pass, witnesses, blocks) = match (a.property.as_str(), &nd.doc) {
        ("copyless", Document::Sst(t)) => {
            let mut witnesses = Vec::new();
            for (qi, row) in t.transitions.iter().enumerate() {
                for (ci, (_, assign)) in row.iter().enumerate() {
                    for r in 0..t.registers.len() as u32 {
                        let n = assign.occurrences(r);
                        if n > 1 {
                            witnesses.push(format!(
                                "register {} used {n} times in the image of δ({}, {})",
                                t.registers.symbol(r),
                                t.states[qi],
                                t.input.symbol(ci as u32),
                            ));
                        }
                    }
                }
            }
            (check_copyless(t), witnesses, None)
        }
        (p, Document::Sst(t)) if p.starts_with("layered:") => {
            let k = parse_layer_count(p)?;
            match infer_layering(t, k)? {
                Some(blocks) => (true, Vec::new(), Some(blocks_str(&t.registers, &blocks))),
                None => (
                    false,
                    vec![format!("no ordered partition into {} layers", k + 1)],
                    None,
                ),
            }
        }
        (p, Document::Hdt0l(sys)) if p.starts_with("layered:") => {
            let k = parse_layer_count(p)?;
            match infer_layering_hdt0l(sys, k)? {
                Some(blocks) => (true, Vec::new(), Some(blocks_str(&sys.working, &blocks))),
                None => (
                    false,
                    vec![format!("no ordered partition into {} blocks", k + 1)],
                    None,
                ),
            }
        }
        ("cfpt-legal", Document::Cfpt(t)) => {
            let violations = xduce_core::cfpt::validate_cfpt(t);
            (violations.is_empty(), violations, None)
        }
        (p, doc) if is_known_property(p) => {
            return Err(Error::Inapplicable(format!(
                "property {p:?} does not apply to a {} document",
                doc.type_tag()
            )));
        }
        (p, _) => {
            return Err(Error::Invalid(format!(
                "unknown property {p:?}; expected copyless, layered:K or cfpt-legal"
            )));
        }
    };
    if a.json {
        println!(
            "{}",
            json!({
                "property": a.property,
                "pass": pass,
                "witnesses": witnesses,
                "blocks": blocks,
            })
        );
    } else {
        println!("{}", if pass { "PASS" } else { "FAIL" });
        if let Some(b) = &blocks {
            println!("layers: {b}");
        }
        for w in &witnesses {
            println!("  {w}");
        }
    }
    Ok(if pass { 0 } else { 4 })
}

fn is_known_property(p: &str) -> bool {
    p == "copyless" || p == "cfpt-legal" || p.starts_with("layered:")
}

fn parse_layer_count(p: &str) -> Result<usize> {
    p.strip_prefix("layered:")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Invalid(format!("bad layer count in {p:?}")))
}

fn blocks_str(names: &Alphabet, blocks: &[Vec<u32>]) -> String {
    blocks
        .iter()
        .map(|b| {
            let inner: Vec<&str> = b.iter().map(|&x| names.symbol(x)).collect();
            format!("{{{}}}", inner.join(" "))
        })
        .collect::<Vec<_>>()
        .join("|")
}

// ---------------------------------------------------------------- translate

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Sst,
    Hdt0l,
}

#[derive(Args)]
struct TranslateArgs {
    /// Machine document
    file: PathBuf,
    /// Target model
    #[arg(long, value_enum)]
    to: Model,
    /// Use the layered translation with this layer count
    #[arg(long)]
    layers: Option<usize>,
}

fn cmd_translate(a: TranslateArgs) -> Result<u8> {
    let nd = load(&a.file)?;
    let (doc, note) = match (&nd.doc, a.to) {
        (Document::Sst(t), Model::Hdt0l) => {
            let blocks = sst_blocks(t, a.layers)?;
            let (sys, sys_blocks) = sst_to_hdt0l(t, &blocks)?;
            let note = format!("layer blocks: {}", blocks_str(&sys.working, &sys_blocks));
            (Document::Hdt0l(sys), note)
        }
        (Document::Sequential(s), Model::Sst) => {
            (Document::Sst(sequential_to_sst(s)), "from a sequential transducer".into())
        }
        (Document::Sequential(s), Model::Hdt0l) => {
            let t = sequential_to_sst(s);
            let blocks = sst_blocks(&t, a.layers)?;
            let (sys, sys_blocks) = sst_to_hdt0l(&t, &blocks)?;
            let note = format!("layer blocks: {}", blocks_str(&sys.working, &sys_blocks));
            (Document::Hdt0l(sys), note)
        }
        (Document::Hdt0l(sys), Model::Sst) => match a.layers {
            None => (Document::Sst(hdt0l_to_sst(sys)?), "single-state embedding".into()),
            Some(j) => {
                let blocks = infer_layering_hdt0l(sys, j)?.ok_or_else(|| {
                    Error::Inapplicable(format!("the system is not {j}-layered"))
                })?;
                let note = format!("from blocks {}", blocks_str(&sys.working, &blocks));
                (Document::Sst(layered_hdt0l_to_sst(sys, &blocks)?), note)
            }
        },
        (doc, _) => {
            return Err(Error::Inapplicable(format!(
                "no translation from a {} document to that model",
                doc.type_tag()
            )));
        }
    };
    smoke_check(&nd.doc, &doc)?;
    let out = NamedDocument {
        name: nd.name.clone(),
        description: Some(note),
        doc,
    };
    print!("{}", serialize_document(&out));
    Ok(0)
}

/// A layering witness for an SST: the requested layer count, or the smallest
/// k ≤ 3 that works.
fn sst_blocks(t: &xduce_core::Sst, layers: Option<usize>) -> Result<Vec<Vec<u32>>> {
    match layers {
        Some(k) => infer_layering(t, k)?
            .ok_or_else(|| Error::Inapplicable(format!("the machine is not {k}-layered"))),
        None => {
            for k in 0..=3 {
                if let Some(blocks) = infer_layering(t, k)? {
                    return Ok(blocks);
                }
            }
            Err(Error::Inapplicable("no layering with at most 4 layers found".into()))
        }
    }
}

/// Translations must preserve the function; verified on all short words.
fn smoke_check(before: &Document, after: &Document) -> Result<()> {
    let g = input_alphabet(before)?;
    for w in g.words_up_to(3).into_iter().take(200) {
        let want = eval_doc(before, &w, DEFAULT_BUDGET)?;
        let got = eval_doc(after, &w, DEFAULT_BUDGET)?;
        if want != got {
            return Err(Error::SelfCheck(format!(
                "translation changed the function at {w:?}: {want:?} vs {got:?}"
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- cbs

#[derive(Clone, Copy, ValueEnum)]
enum ComposedModel {
    Cfpt,
}

#[derive(Args)]
struct CbsArgs {
    /// Outer document
    outer: PathBuf,
    /// Substitution, one NAME=FILE per outer output symbol
    #[arg(long = "sub", value_name = "NAME=FILE")]
    subs: Vec<String>,
    /// Compose machines of this model instead of building an expression
    #[arg(long = "as", value_name = "MODEL", value_enum)]
    as_model: Option<ComposedModel>,
}

fn cmd_cbs(a: CbsArgs) -> Result<u8> {
    let outer = load(&a.outer)?;
    let mut subs = Vec::new();
    for spec in &a.subs {
        let (name, path) = spec
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("bad --sub {spec:?}, expected NAME=FILE")))?;
        if subs.iter().any(|(n, _)| n == name) {
            return Err(Error::Invalid(format!("duplicate substitution for {name:?}")));
        }
        subs.push((name.to_owned(), load(Path::new(path))?));
    }
    let outer_output = match &outer.doc {
        Document::Sst(t) => &t.output,
        Document::Sequential(s) => &s.output,
        Document::Cfpt(t) => &t.output,
        Document::CfpExpr(e) => e.output_alphabet(),
        doc => {
            return Err(Error::Inapplicable(format!(
                "a {} document cannot be the outer part of a substitution",
                doc.type_tag()
            )));
        }
    };
    let missing: Vec<&str> = outer_output
        .symbols()
        .filter(|c| !subs.iter().any(|(n, _)| n.as_str() == *c))
        .collect();
    if let Some(c) = missing.first() {
        return Err(Error::Inapplicable(format!("no substitution for output symbol {c:?}")));
    }
    let doc = match a.as_model {
        Some(ComposedModel::Cfpt) => {
            let outer_t = as_cfpt(&outer)?;
            let parts: Vec<(String, &Cfpt)> = subs
                .iter()
                .map(|(n, nd)| Ok((n.clone(), as_cfpt(nd)?)))
                .collect::<Result<_>>()?;
            Document::Cfpt(cbs_compose_cfpt(outer_t, &parts)?)
        }
        None => {
            let expr = CfpExpr::Cbs {
                outer: Box::new(as_expr(&outer)?),
                subs: subs
                    .iter()
                    .map(|(n, nd)| Ok((n.clone(), as_expr(nd)?)))
                    .collect::<Result<_>>()?,
            };
            validate_cfp(&expr)?;
            Document::CfpExpr(expr)
        }
    };
    print!(
        "{}",
        serialize_document(&NamedDocument { name: None, description: None, doc })
    );
    Ok(0)
}

fn as_cfpt(nd: &NamedDocument) -> Result<&Cfpt> {
    match &nd.doc {
        Document::Cfpt(t) => Ok(t),
        doc => Err(Error::Inapplicable(format!(
            "--as cfpt needs CFPT parts, got a {} document",
            doc.type_tag()
        ))),
    }
}

fn as_expr(nd: &NamedDocument) -> Result<CfpExpr> {
    match &nd.doc {
        Document::Sst(t) => Ok(CfpExpr::Reg(t.clone())),
        Document::Sequential(s) => Ok(CfpExpr::Reg(sequential_to_sst(s))),
        Document::CfpExpr(e) => Ok(e.clone()),
        doc => Err(Error::Inapplicable(format!(
            "a {} document has no expression form",
            doc.type_tag()
        ))),
    }
}

// ---------------------------------------------------------------- seq-extract

#[derive(Args)]
struct SeqExtractArgs {
    /// Unary-input machine or expression document
    file: PathBuf,
    /// Verify the family against direct evaluation up to this index
    #[arg(long)]
    max_check: Option<usize>,
}

fn cmd_seq_extract(a: SeqExtractArgs) -> Result<u8> {
    let nd = load(&a.file)?;
    let (fam, default_check): (PumpingFamily, usize) = match &nd.doc {
        Document::Sst(t) => (extract_pumping_family(t)?, 8),
        Document::CfpExpr(e) => (extract_cfp_family(e)?, 6),
        doc => {
            return Err(Error::Inapplicable(format!(
                "cannot extract a family from a {} document",
                doc.type_tag()
            )));
        }
    };
    let g = input_alphabet(&nd.doc)?.clone();
    let hi = a.max_check.unwrap_or(default_check).max(fam.period);
    let mut pass = true;
    for n in 0..=hi {
        let w = Word::from_indices(g.clone(), vec![0; n]);
        let direct = eval_doc(&nd.doc, &w, DEFAULT_BUDGET)?;
        if eval_family(&fam, n)? != direct {
            eprintln!("mismatch at n={n}");
            pass = false;
        }
    }
    eprintln!(
        "{}: period {}, star height {}, checked n <= {hi}",
        if pass { "PASS" } else { "FAIL" },
        fam.period,
        fam.max_star_height(),
    );
    let name = nd.name.as_deref().map(|n| format!("{n}-family"));
    print!(
        "{}",
        serialize_document(&NamedDocument {
            name,
            description: None,
            doc: Document::Family(fam),
        })
    );
    Ok(if pass { 0 } else { 4 })
}

// ---------------------------------------------------------------- growth

#[derive(Args)]
struct GrowthArgs {
    /// Word-to-word document
    file: PathBuf,
    /// Largest input length sampled
    #[arg(long, default_value_t = 16)]
    max_n: usize,
    /// CFPT step budget (overrides XDUCE_BUDGET)
    #[arg(long)]
    budget: Option<u64>,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
}

fn cmd_growth(a: GrowthArgs) -> Result<u8> {
    let nd = load(&a.file)?;
    let g = input_alphabet(&nd.doc)?.clone();
    if g.is_empty() {
        return Err(Error::Inapplicable("growth probe needs a nonempty input alphabet".into()));
    }
    let b = budget(a.budget)?;
    let samples: Vec<Word> =
        (1..=a.max_n).map(|n| Word::from_indices(g.clone(), vec![0; n])).collect();
    let report = growth_degree(|w| eval_doc(&nd.doc, w, b), &samples)?;
    if a.json {
        println!(
            "{}",
            json!({
                "letter": g.symbol(0),
                "input_lengths": report.input_lengths,
                "output_lengths": report.output_lengths,
                "degree": report.degree,
            })
        );
    } else {
        match report.degree {
            Some(d) => println!("degree: {d}"),
            None => println!("degree: none found (differences do not settle)"),
        }
        println!(
            "lengths on {}^n: {:?}",
            g.symbol(0),
            report.output_lengths
        );
    }
    Ok(0)
}

// ---------------------------------------------------------------- triples

#[derive(Args)]
struct TriplesArgs {
    /// Copyless SST document
    file: PathBuf,
    /// Output letter whose production is checked
    #[arg(long)]
    letter: String,
    /// Check every 1-split of every word up to this length
    #[arg(long, default_value_t = 4)]
    max_len: usize,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
}

fn cmd_triples(a: TriplesArgs) -> Result<u8> {
    let nd = load(&a.file)?;
    let Document::Sst(t) = &nd.doc else {
        return Err(Error::Inapplicable(format!(
            "the dichotomy check needs an sst document, got {}",
            nd.doc.type_tag()
        )));
    };
    let report = check_dichotomy(t, &a.letter, a.max_len)?;
    if a.json {
        println!(
            "{}",
            json!({
                "letter": a.letter,
                "pass": report.passed(),
                "words_checked": report.words_checked,
                "splits_checked": report.splits_checked,
                "producing_splits": report.producing_splits,
                "failure": report.failure,
            })
        );
    } else if report.passed() {
        println!(
            "PASS: {} words, {} 1-splits, {} producing",
            report.words_checked, report.splits_checked, report.producing_splits
        );
    } else {
        println!("FAIL: {}", report.failure.as_deref().unwrap_or("?"));
    }
    Ok(if report.passed() { 0 } else { 4 })
}

// ---------------------------------------------------------------- rank

#[derive(Args)]
struct RankArgs {
    /// Expression document (machines count as rank 0)
    file: PathBuf,
}

fn cmd_rank(a: RankArgs) -> Result<u8> {
    let nd = load(&a.file)?;
    let rank = match &nd.doc {
        Document::CfpExpr(e) => rank_bound(e),
        Document::Sst(_) | Document::Sequential(_) => 0,
        doc => {
            return Err(Error::Inapplicable(format!(
                "no rank bound for a {} document",
                doc.type_tag()
            )));
        }
    };
    println!("{rank}");
    Ok(0)
}

// ---------------------------------------------------------------- split-scan

#[derive(Args)]
struct SplitScanArgs {
    /// Copyless SST document
    file: PathBuf,
    /// Input word as space-separated symbols
    #[arg(long, allow_hyphen_values = true)]
    input: String,
    /// Comma-separated output letters the split must produce
    #[arg(long)]
    letters: String,
    /// Number of pumpable middle factors
    #[arg(short, long)]
    r: usize,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
}

fn cmd_split_scan(a: SplitScanArgs) -> Result<u8> {
    let nd = load(&a.file)?;
    let Document::Sst(t) = &nd.doc else {
        return Err(Error::Inapplicable(format!(
            "split scanning needs an sst document, got {}",
            nd.doc.type_tag()
        )));
    };
    let s = Word::parse(&t.input, &a.input)?;
    let mut pi = BTreeSet::new();
    for name in a.letters.split(',').filter(|p| !p.is_empty()) {
        pi.insert(
            t.output
                .index_of(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_owned()))?,
        );
    }
    if pi.is_empty() {
        return Err(Error::Invalid("--letters needs at least one output symbol".into()));
    }
    // list every r-split and flag the all-producing ones
    let mut found = Vec::new();
    if a.r >= 1 && a.r <= s.len() {
        for cuts in enumerate_r_splits(&s, a.r, |x| nu_image(t, x))? {
            let producing = (0..a.r).all(|i| {
                let mu = nu_image(t, &s.slice(0..cuts[i])).unwrap();
                let mv = nu_image(t, &s.slice(cuts[i]..cuts[i + 1])).unwrap();
                let mw = nu_image(t, &s.slice(cuts[i + 1]..s.len())).unwrap();
                pi.iter().any(|&c| is_producing(t, &mu, &mv, &mw, c))
            });
            found.push((cuts, producing));
        }
    }
    let hit = found.iter().any(|(_, p)| *p);
    if a.json {
        let splits: Vec<_> = found
            .iter()
            .map(|(cuts, p)| json!({ "cuts": cuts, "producing": p }))
            .collect();
        println!(
            "{}",
            json!({ "r": a.r, "splits": splits, "producing_split_found": hit })
        );
    } else {
        println!(
            "{} {}-splits, producing {}-split {}",
            found.len(),
            a.r,
            a.r,
            if hit { "found" } else { "none" }
        );
        for (cuts, producing) in &found {
            if *producing {
                println!("  cuts {cuts:?}");
            }
        }
    }
    Ok(0)
}
