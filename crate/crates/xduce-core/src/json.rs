//! JSON documents for every machine and expression kind.
//!
//! A document is one JSON object with a `type` tag, optional `name` and
//! `description`, and the payload fields of its kind. States and letters are
//! referenced by *name* everywhere, which keeps hand-written files readable
//! and makes mangled alphabets (`a:b`, `_a`, `L:x`) unambiguous: words are
//! arrays of symbol strings, never joined text.
//!
//! Parsing validates through the module constructors, and serialization is
//! deterministic (sorted keys), so parse → serialize → parse is identity.

use crate::alphabet::{Alphabet, Dfa, FreeMorphism, Word};
use crate::assign::{MixedWord, RegAssignment};
use crate::cfp::{validate_cfp, validate_pipeline, CfpExpr, Pipeline, Stage};
use crate::cfpt::{ext_parse, ext_symbol, Cfpt, CfptRule, StackAction};
use crate::hdt0l::Hdt0lSystem;
use crate::sequences::{validate_pwe, PolyWordExpr, PumpingFamily};
use crate::sst::{SequentialTransducer, Sst};
use crate::{Error, Result};
use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Sst(Sst),
    Sequential(SequentialTransducer),
    Hdt0l(Hdt0lSystem),
    Cfpt(Cfpt),
    Dfa(Dfa),
    CfpExpr(CfpExpr),
    Pipeline(Pipeline),
    Pwe(PolyWordExpr),
    Family(PumpingFamily),
}

impl Document {
    pub fn type_tag(&self) -> &'static str {
        match self {
            Document::Sst(_) => "sst",
            Document::Sequential(_) => "sequential",
            Document::Hdt0l(_) => "hdt0l",
            Document::Cfpt(_) => "cfpt",
            Document::Dfa(_) => "dfa",
            Document::CfpExpr(_) => "cfp_expr",
            Document::Pipeline(_) => "pipeline",
            Document::Pwe(_) => "pwe",
            Document::Family(_) => "family",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedDocument {
    pub name: Option<String>,
    pub description: Option<String>,
    pub doc: Document,
}

pub fn parse_document(text: &str) -> Result<NamedDocument> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let m = obj(&v)?;
    Ok(NamedDocument {
        name: opt_str(m, "name")?,
        description: opt_str(m, "description")?,
        doc: document_from_value(&v)?,
    })
}

pub fn serialize_document(nd: &NamedDocument) -> String {
    let mut v = document_to_value(&nd.doc);
    let m = v.as_object_mut().unwrap();
    if let Some(name) = &nd.name {
        m.insert("name".into(), json!(name));
    }
    if let Some(d) = &nd.description {
        m.insert("description".into(), json!(d));
    }
    let mut s = serde_json::to_string_pretty(&v).unwrap();
    s.push('\n');
    s
}

pub fn document_from_value(v: &Value) -> Result<Document> {
    let m = obj(v)?;
    let doc = match str_field(m, "type")? {
        "sst" => Document::Sst(sst_from(m)?),
        "sequential" => Document::Sequential(sequential_from(m)?),
        "hdt0l" => Document::Hdt0l(hdt0l_from(m)?),
        "cfpt" => Document::Cfpt(cfpt_from(m)?),
        "dfa" => Document::Dfa(dfa_from(m)?),
        "cfp_expr" => {
            let e = expr_from(v)?;
            validate_cfp(&e)?;
            Document::CfpExpr(e)
        }
        "pipeline" => {
            let p = pipeline_from(m)?;
            validate_pipeline(&p)?;
            Document::Pipeline(p)
        }
        "pwe" => {
            let alphabet = alphabet_field(m, "alphabet")?;
            let e = pwe_from(v, &alphabet)?;
            validate_pwe(&e)?;
            Document::Pwe(e)
        }
        "family" => Document::Family(family_from(m)?),
        other => return Err(Error::Parse(format!("unknown document type {other:?}"))),
    };
    Ok(doc)
}

pub fn document_to_value(doc: &Document) -> Value {
    match doc {
        Document::Sst(t) => sst_to(t),
        Document::Sequential(t) => sequential_to(t),
        Document::Hdt0l(s) => hdt0l_to(s),
        Document::Cfpt(t) => cfpt_to(t),
        Document::Dfa(d) => dfa_to(d),
        Document::CfpExpr(e) => {
            let mut v = expr_to(e);
            v.as_object_mut().unwrap().insert("type".into(), json!("cfp_expr"));
            v
        }
        Document::Pipeline(p) => pipeline_to(p),
        Document::Pwe(e) => {
            let mut v = pwe_to(e);
            let m = v.as_object_mut().unwrap();
            m.insert("type".into(), json!("pwe"));
            m.insert("alphabet".into(), alphabet_to(e.alphabet()));
            v
        }
        Document::Family(f) => family_to(f),
    }
}

// ---- plumbing ----------------------------------------------------------

fn obj(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".into()))
}

fn get<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn str_field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    get(m, key)?
        .as_str()
        .ok_or_else(|| Error::Parse(format!("field {key:?} must be a string")))
}

fn opt_str(m: &Map<String, Value>, key: &str) -> Result<Option<String>> {
    match m.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(Error::Parse(format!("field {key:?} must be a string"))),
    }
}

fn usize_field(m: &Map<String, Value>, key: &str) -> Result<usize> {
    get(m, key)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::Parse(format!("field {key:?} must be a non-negative integer")))
}

fn str_array(v: &Value, what: &str) -> Result<Vec<String>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array of strings")))?;
    arr.iter()
        .map(|x| {
            x.as_str()
                .map(str::to_owned)
                .ok_or_else(|| Error::Parse(format!("{what} must contain only strings")))
        })
        .collect()
}

fn alphabet_field(m: &Map<String, Value>, key: &str) -> Result<Alphabet> {
    Alphabet::new(str_array(get(m, key)?, key)?)
}

fn alphabet_to(a: &Alphabet) -> Value {
    json!(a.symbol_vec())
}

fn word_from(v: &Value, alphabet: &Alphabet, what: &str) -> Result<Word> {
    Word::from_symbols(alphabet, str_array(v, what)?)
}

fn word_to(w: &Word) -> Value {
    json!((0..w.len()).map(|i| w.symbol_at(i)).collect::<Vec<_>>())
}

fn object_field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Map<String, Value>> {
    obj(get(m, key)?)
}

/// Look up a named state in the declared list.
fn state_index(states: &[String], name: &str) -> Result<usize> {
    states
        .iter()
        .position(|s| s == name)
        .ok_or_else(|| Error::Parse(format!("unknown state {name:?}")))
}

fn states_field(m: &Map<String, Value>, key: &str) -> Result<Vec<String>> {
    let states = str_array(get(m, key)?, key)?;
    if states.is_empty() {
        return Err(Error::Parse("state list must be nonempty".into()));
    }
    Ok(states)
}

// ---- assignments -------------------------------------------------------

fn assignment_from(
    v: &Value,
    registers: &Alphabet,
    output: &Alphabet,
) -> Result<RegAssignment> {
    let m = obj(v)?;
    let image = registers
        .symbols()
        .map(|r| {
            let img = m
                .get(r)
                .ok_or_else(|| Error::Parse(format!("assignment misses register {r:?}")))?;
            MixedWord::from_symbols(registers, output, str_array(img, "assignment image")?)
        })
        .collect::<Result<Vec<_>>>()?;
    if m.len() != registers.len() {
        return Err(Error::Parse("assignment names an undeclared register".into()));
    }
    RegAssignment::new(registers.clone(), output.clone(), image)
}

fn assignment_to(a: &RegAssignment) -> Value {
    let mut m = Map::new();
    for (r, img) in a.registers.symbols().zip(&a.image) {
        m.insert(r.to_owned(), json!(img.to_symbols(&a.registers, &a.output)));
    }
    Value::Object(m)
}

// ---- sst / sequential --------------------------------------------------

fn sst_from(m: &Map<String, Value>) -> Result<Sst> {
    let input = alphabet_field(m, "input_alphabet")?;
    let output = alphabet_field(m, "output_alphabet")?;
    let registers = alphabet_field(m, "registers")?;
    let states = states_field(m, "states")?;
    let initial = state_index(&states, str_field(m, "initial")?)?;
    let iv = object_field(m, "initial_values")?;
    let initial_values = registers
        .symbols()
        .map(|r| {
            let v = iv
                .get(r)
                .ok_or_else(|| Error::Parse(format!("initial_values misses register {r:?}")))?;
            word_from(v, &output, "initial value")
        })
        .collect::<Result<Vec<_>>>()?;
    let tr = object_field(m, "transitions")?;
    let transitions = states
        .iter()
        .map(|q| {
            let row = obj(tr
                .get(q)
                .ok_or_else(|| Error::Parse(format!("transitions miss state {q:?}")))?)?;
            input
                .symbols()
                .map(|c| {
                    let rule = obj(row.get(c).ok_or_else(|| {
                        Error::Parse(format!("state {q:?} misses letter {c:?}"))
                    })?)?;
                    let next = state_index(&states, str_field(rule, "next")?)?;
                    let assign = assignment_from(get(rule, "assign")?, &registers, &output)?;
                    Ok((next, assign))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let of = object_field(m, "output")?;
    let output_fn = states
        .iter()
        .map(|q| {
            let w = of
                .get(q)
                .ok_or_else(|| Error::Parse(format!("output function misses state {q:?}")))?;
            MixedWord::from_symbols(&registers, &output, str_array(w, "output word")?)
        })
        .collect::<Result<Vec<_>>>()?;
    let t = Sst {
        input,
        output,
        registers,
        states,
        initial,
        initial_values,
        transitions,
        output_fn,
    };
    t.validate()?;
    Ok(t)
}

fn sst_to(t: &Sst) -> Value {
    let mut transitions = Map::new();
    for (q, row) in t.states.iter().zip(&t.transitions) {
        let mut by_letter = Map::new();
        for (c, (next, assign)) in t.input.symbols().zip(row) {
            by_letter.insert(
                c.to_owned(),
                json!({"next": t.states[*next], "assign": assignment_to(assign)}),
            );
        }
        transitions.insert(q.clone(), Value::Object(by_letter));
    }
    let mut initial_values = Map::new();
    for (r, w) in t.registers.symbols().zip(&t.initial_values) {
        initial_values.insert(r.to_owned(), word_to(w));
    }
    let mut output = Map::new();
    for (q, w) in t.states.iter().zip(&t.output_fn) {
        output.insert(q.clone(), json!(w.to_symbols(&t.registers, &t.output)));
    }
    json!({
        "type": "sst",
        "input_alphabet": alphabet_to(&t.input),
        "output_alphabet": alphabet_to(&t.output),
        "registers": alphabet_to(&t.registers),
        "states": t.states,
        "initial": t.states[t.initial],
        "initial_values": initial_values,
        "transitions": transitions,
        "output": output,
    })
}

fn sequential_from(m: &Map<String, Value>) -> Result<SequentialTransducer> {
    let input = alphabet_field(m, "input_alphabet")?;
    let output = alphabet_field(m, "output_alphabet")?;
    let states = states_field(m, "states")?;
    let initial = state_index(&states, str_field(m, "initial")?)?;
    let tr = object_field(m, "transitions")?;
    let transitions = states
        .iter()
        .map(|q| {
            let row = obj(tr
                .get(q)
                .ok_or_else(|| Error::Parse(format!("transitions miss state {q:?}")))?)?;
            input
                .symbols()
                .map(|c| {
                    let rule = obj(row.get(c).ok_or_else(|| {
                        Error::Parse(format!("state {q:?} misses letter {c:?}"))
                    })?)?;
                    let next = state_index(&states, str_field(rule, "next")?)?;
                    let emit = word_from(get(rule, "emit")?, &output, "emit")?;
                    Ok((next, emit))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let fin = object_field(m, "final")?;
    let final_out = states
        .iter()
        .map(|q| {
            let w = fin
                .get(q)
                .ok_or_else(|| Error::Parse(format!("final output misses state {q:?}")))?;
            word_from(w, &output, "final output")
        })
        .collect::<Result<Vec<_>>>()?;
    let t = SequentialTransducer { input, output, states, initial, transitions, final_out };
    t.validate()?;
    Ok(t)
}

fn sequential_to(t: &SequentialTransducer) -> Value {
    let mut transitions = Map::new();
    for (q, row) in t.states.iter().zip(&t.transitions) {
        let mut by_letter = Map::new();
        for (c, (next, emit)) in t.input.symbols().zip(row) {
            by_letter.insert(c.to_owned(), json!({"next": t.states[*next], "emit": word_to(emit)}));
        }
        transitions.insert(q.clone(), Value::Object(by_letter));
    }
    let mut fin = Map::new();
    for (q, w) in t.states.iter().zip(&t.final_out) {
        fin.insert(q.clone(), word_to(w));
    }
    json!({
        "type": "sequential",
        "input_alphabet": alphabet_to(&t.input),
        "output_alphabet": alphabet_to(&t.output),
        "states": t.states,
        "initial": t.states[t.initial],
        "transitions": transitions,
        "final": fin,
    })
}

// ---- hdt0l -------------------------------------------------------------

fn morphism_from(
    v: &Value,
    source: &Alphabet,
    target: &Alphabet,
    what: &str,
) -> Result<FreeMorphism> {
    let m = obj(v)?;
    let image = source
        .symbols()
        .map(|d| {
            let w = m
                .get(d)
                .ok_or_else(|| Error::Parse(format!("{what} misses letter {d:?}")))?;
            word_from(w, target, what)
        })
        .collect::<Result<Vec<_>>>()?;
    FreeMorphism::new(source.clone(), target.clone(), image)
}

fn morphism_to(h: &FreeMorphism) -> Value {
    let mut m = Map::new();
    for (i, d) in h.source().symbols().enumerate() {
        m.insert(d.to_owned(), word_to(h.image_of(i as u32)));
    }
    Value::Object(m)
}

fn hdt0l_from(m: &Map<String, Value>) -> Result<Hdt0lSystem> {
    let input = alphabet_field(m, "input_alphabet")?;
    let output = alphabet_field(m, "output_alphabet")?;
    let working = alphabet_field(m, "working_alphabet")?;
    let initial_word = word_from(get(m, "initial_word")?, &working, "initial word")?;
    let rules_obj = object_field(m, "rules")?;
    let rules = input
        .symbols()
        .map(|c| {
            let v = rules_obj
                .get(c)
                .ok_or_else(|| Error::Parse(format!("rules miss input letter {c:?}")))?;
            morphism_from(v, &working, &working, "rule")
        })
        .collect::<Result<Vec<_>>>()?;
    let final_rule = morphism_from(get(m, "final")?, &working, &output, "final rule")?;
    let sys = Hdt0lSystem { input, output, working, initial_word, rules, final_rule };
    sys.validate()?;
    Ok(sys)
}

fn hdt0l_to(s: &Hdt0lSystem) -> Value {
    let mut rules = Map::new();
    for (c, h) in s.input.symbols().zip(&s.rules) {
        rules.insert(c.to_owned(), morphism_to(h));
    }
    json!({
        "type": "hdt0l",
        "input_alphabet": alphabet_to(&s.input),
        "output_alphabet": alphabet_to(&s.output),
        "working_alphabet": alphabet_to(&s.working),
        "initial_word": word_to(&s.initial_word),
        "rules": rules,
        "final": morphism_to(&s.final_rule),
    })
}

// ---- cfpt --------------------------------------------------------------

fn cfpt_from(m: &Map<String, Value>) -> Result<Cfpt> {
    let input = alphabet_field(m, "input_alphabet")?;
    let output = alphabet_field(m, "output_alphabet")?;
    let k = usize_field(m, "k")?;
    let states = states_field(m, "states")?;
    let initial = state_index(&states, str_field(m, "initial")?)?;
    let tables_obj = object_field(m, "tables")?;
    let mut tables = vec![std::collections::BTreeMap::new(); k];
    for (p_key, by_state) in tables_obj {
        let p: usize = p_key
            .parse()
            .ok()
            .filter(|p| (1..=k).contains(p))
            .ok_or_else(|| Error::Parse(format!("table height {p_key:?} out of 1..=k")))?;
        for (q, by_ext) in obj(by_state)? {
            let q = state_index(&states, q)?;
            for (ext_key, rule) in obj(by_ext)? {
                let codes = if ext_key.is_empty() {
                    return Err(Error::Parse("empty extended-letter key".into()));
                } else {
                    ext_key
                        .split(',')
                        .map(|s| ext_parse(&input, s))
                        .collect::<Result<Vec<_>>>()?
                };
                if codes.len() != p {
                    return Err(Error::Parse(format!(
                        "key {ext_key:?} has {} letters at height {p}",
                        codes.len()
                    )));
                }
                let rm = obj(rule)?;
                let parsed = CfptRule {
                    next: state_index(&states, str_field(rm, "next")?)?,
                    action: StackAction::from_name(str_field(rm, "action")?)?,
                    emit: word_from(get(rm, "emit")?, &output, "emit")?,
                };
                if tables[p - 1].insert((q, codes), parsed).is_some() {
                    return Err(Error::Parse(format!("duplicate rule for {ext_key:?}")));
                }
            }
        }
    }
    let t = Cfpt { input, output, k, states, initial, tables };
    t.validate()?;
    Ok(t)
}

fn cfpt_to(t: &Cfpt) -> Value {
    let mut tables = Map::new();
    for (pi, table) in t.tables.iter().enumerate() {
        if table.is_empty() {
            continue;
        }
        let mut by_state = Map::new();
        for ((q, codes), rule) in table {
            let key = codes
                .iter()
                .map(|&c| ext_symbol(&t.input, c))
                .collect::<Vec<_>>()
                .join(",");
            by_state
                .entry(t.states[*q].clone())
                .or_insert_with(|| Value::Object(Map::new()))
                .as_object_mut()
                .unwrap()
                .insert(
                    key,
                    json!({
                        "next": t.states[rule.next],
                        "action": rule.action.name(),
                        "emit": word_to(&rule.emit),
                    }),
                );
        }
        tables.insert((pi + 1).to_string(), Value::Object(by_state));
    }
    json!({
        "type": "cfpt",
        "input_alphabet": alphabet_to(&t.input),
        "output_alphabet": alphabet_to(&t.output),
        "k": t.k,
        "states": t.states,
        "initial": t.states[t.initial],
        "tables": tables,
    })
}

// ---- dfa ---------------------------------------------------------------

fn dfa_from(m: &Map<String, Value>) -> Result<Dfa> {
    let alphabet = alphabet_field(m, "alphabet")?;
    let states = states_field(m, "states")?;
    let initial = state_index(&states, str_field(m, "initial")?)?;
    let accepting = str_array(get(m, "accepting")?, "accepting")?
        .iter()
        .map(|q| state_index(&states, q))
        .collect::<Result<_>>()?;
    let tr = object_field(m, "delta")?;
    let delta = states
        .iter()
        .map(|q| {
            let row = obj(tr
                .get(q)
                .ok_or_else(|| Error::Parse(format!("delta misses state {q:?}")))?)?;
            alphabet
                .symbols()
                .map(|c| {
                    let next = row
                        .get(c)
                        .and_then(Value::as_str)
                        .ok_or_else(|| Error::Parse(format!("state {q:?} misses letter {c:?}")))?;
                    state_index(&states, next)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let d = Dfa { alphabet, states, initial, accepting, delta };
    d.validate()?;
    Ok(d)
}

fn dfa_to(d: &Dfa) -> Value {
    let mut delta = Map::new();
    for (q, row) in d.states.iter().zip(&d.delta) {
        let mut by_letter = Map::new();
        for (c, next) in d.alphabet.symbols().zip(row) {
            by_letter.insert(c.to_owned(), json!(d.states[*next]));
        }
        delta.insert(q.clone(), Value::Object(by_letter));
    }
    json!({
        "type": "dfa",
        "alphabet": alphabet_to(&d.alphabet),
        "states": d.states,
        "initial": d.states[d.initial],
        "accepting": d.accepting.iter().map(|&q| d.states[q].clone()).collect::<Vec<_>>(),
        "delta": delta,
    })
}

// ---- cfp expressions and pipelines -------------------------------------

fn expr_from(v: &Value) -> Result<CfpExpr> {
    let m = obj(v)?;
    Ok(match str_field(m, "node")? {
        "reg" => match document_from_value(get(m, "machine")?)? {
            Document::Sst(t) => CfpExpr::Reg(t),
            other => {
                return Err(Error::Parse(format!(
                    "reg node embeds a {:?} document, expected an SST",
                    other.type_tag()
                )))
            }
        },
        "cbs" => {
            let subs_arr = get(m, "subs")?
                .as_array()
                .ok_or_else(|| Error::Parse("subs must be an array".into()))?;
            let subs = subs_arr
                .iter()
                .map(|s| {
                    let sm = obj(s)?;
                    Ok((str_field(sm, "name")?.to_owned(), expr_from(get(sm, "expr")?)?))
                })
                .collect::<Result<Vec<_>>>()?;
            CfpExpr::Cbs { outer: Box::new(expr_from(get(m, "outer")?)?), subs }
        }
        "cond" => CfpExpr::Cond {
            dfa: dfa_from(object_field(m, "dfa")?)?,
            then: Box::new(expr_from(get(m, "then")?)?),
            otherwise: Box::new(expr_from(get(m, "otherwise")?)?),
        },
        "concat" => CfpExpr::Concat(
            Box::new(expr_from(get(m, "left")?)?),
            Box::new(expr_from(get(m, "right")?)?),
        ),
        other => return Err(Error::Parse(format!("unknown cfp node {other:?}"))),
    })
}

fn expr_to(e: &CfpExpr) -> Value {
    match e {
        CfpExpr::Reg(t) => json!({"node": "reg", "machine": sst_to(t)}),
        CfpExpr::Cbs { outer, subs } => {
            let subs = subs
                .iter()
                .map(|(name, s)| json!({"name": name, "expr": expr_to(s)}))
                .collect::<Vec<_>>();
            json!({"node": "cbs", "outer": expr_to(outer), "subs": subs})
        }
        CfpExpr::Cond { dfa, then, otherwise } => {
            let mut d = dfa_to(dfa);
            d.as_object_mut().unwrap().remove("type");
            json!({"node": "cond", "dfa": d, "then": expr_to(then), "otherwise": expr_to(otherwise)})
        }
        CfpExpr::Concat(l, r) => json!({"node": "concat", "left": expr_to(l), "right": expr_to(r)}),
    }
}

fn pipeline_from(m: &Map<String, Value>) -> Result<Pipeline> {
    let stages = get(m, "stages")?
        .as_array()
        .ok_or_else(|| Error::Parse("stages must be an array".into()))?
        .iter()
        .map(|v| {
            Ok(match document_from_value(v)? {
                Document::Sst(t) => Stage::Sst(t),
                Document::Sequential(t) => Stage::Seq(t),
                Document::Hdt0l(s) => Stage::Hdt0l(s),
                Document::CfpExpr(e) => Stage::Expr(e),
                other => {
                    return Err(Error::Parse(format!(
                        "a pipeline cannot contain a {:?} document",
                        other.type_tag()
                    )))
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Pipeline { stages })
}

fn pipeline_to(p: &Pipeline) -> Value {
    let stages = p
        .stages
        .iter()
        .map(|s| match s {
            Stage::Sst(t) => sst_to(t),
            Stage::Seq(t) => sequential_to(t),
            Stage::Hdt0l(h) => hdt0l_to(h),
            Stage::Expr(e) => {
                let mut v = expr_to(e);
                v.as_object_mut().unwrap().insert("type".into(), json!("cfp_expr"));
                v
            }
        })
        .collect::<Vec<_>>();
    json!({"type": "pipeline", "stages": stages})
}

// ---- polynomial word expressions and families --------------------------

fn pwe_from(v: &Value, alphabet: &Alphabet) -> Result<PolyWordExpr> {
    let m = obj(v)?;
    Ok(match str_field(m, "node")? {
        "lit" => PolyWordExpr::Lit(word_from(get(m, "word")?, alphabet, "literal")?),
        "cat" => PolyWordExpr::cat(
            pwe_from(get(m, "left")?, alphabet)?,
            pwe_from(get(m, "right")?, alphabet)?,
        ),
        "star" => PolyWordExpr::star(pwe_from(get(m, "inner")?, alphabet)?),
        other => return Err(Error::Parse(format!("unknown pwe node {other:?}"))),
    })
}

fn pwe_to(e: &PolyWordExpr) -> Value {
    match e {
        PolyWordExpr::Lit(w) => json!({"node": "lit", "word": word_to(w)}),
        PolyWordExpr::Cat(a, b) => json!({"node": "cat", "left": pwe_to(a), "right": pwe_to(b)}),
        PolyWordExpr::Star(a) => json!({"node": "star", "inner": pwe_to(a)}),
    }
}

fn family_from(m: &Map<String, Value>) -> Result<PumpingFamily> {
    let alphabet = alphabet_field(m, "alphabet")?;
    let period = usize_field(m, "period")?;
    let initial = get(m, "initial")?
        .as_array()
        .ok_or_else(|| Error::Parse("initial must be an array of words".into()))?
        .iter()
        .map(|w| word_from(w, &alphabet, "initial word"))
        .collect::<Result<Vec<_>>>()?;
    let exprs = get(m, "exprs")?
        .as_array()
        .ok_or_else(|| Error::Parse("exprs must be an array".into()))?
        .iter()
        .map(|e| pwe_from(e, &alphabet))
        .collect::<Result<Vec<_>>>()?;
    let fam = PumpingFamily { alphabet, period, initial, exprs };
    fam.validate()?;
    Ok(fam)
}

fn family_to(f: &PumpingFamily) -> Value {
    json!({
        "type": "family",
        "alphabet": alphabet_to(&f.alphabet),
        "period": f.period,
        "initial": f.initial.iter().map(word_to).collect::<Vec<_>>(),
        "exprs": f.exprs.iter().map(pwe_to).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfp::{build_cfsquaring, build_squaring_pipeline};
    use crate::machines;
    use crate::sequences::extract_pumping_family;

    fn round_trip(doc: Document) {
        let nd = NamedDocument { name: Some("t".into()), description: None, doc };
        let text = serialize_document(&nd);
        let back = parse_document(&text).unwrap();
        assert_eq!(back, nd, "document changed across parse/serialize:\n{text}");
        assert_eq!(serialize_document(&back), text);
    }

    #[test]
    fn machines_round_trip() {
        let g = Alphabet::new(["a", "b"]).unwrap();
        round_trip(Document::Sst(machines::prefixes_sst(&g)));
        round_trip(Document::Sst(machines::idreverse_sst()));
        round_trip(Document::Sequential(machines::fig2_sequential()));
        round_trip(Document::Hdt0l(machines::squaring_unary_hdt0l()));
        round_trip(Document::Cfpt(machines::cfpt_reverse(&g)));
        round_trip(Document::Dfa(machines::even_length_dfa(&g)));
        round_trip(Document::CfpExpr(build_cfsquaring(&g)));
        round_trip(Document::Pipeline(build_squaring_pipeline(&g)));
    }

    #[test]
    fn families_round_trip() {
        let g = Alphabet::new(["a"]).unwrap();
        let fam = extract_pumping_family(&machines::reverse_sst(&g)).unwrap();
        round_trip(Document::Pwe(fam.exprs[0].clone()));
        round_trip(Document::Family(fam));
        // a star-height-2 family exercises nested nodes
        let sq = crate::sequences::extract_cfp_family(&crate::cfp::build_cfsquaring(&g)).unwrap();
        round_trip(Document::Family(sq));
    }

    #[test]
    fn hand_written_sst_parses() {
        let text = r#"{
            "type": "sst",
            "input_alphabet": ["a"],
            "output_alphabet": ["a"],
            "registers": ["X"],
            "states": ["q"],
            "initial": "q",
            "initial_values": {"X": []},
            "transitions": {"q": {"a": {"next": "q", "assign": {"X": ["X", "a"]}}}},
            "output": {"q": ["X"]}
        }"#;
        let nd = parse_document(text).unwrap();
        let Document::Sst(t) = &nd.doc else { panic!("not an sst") };
        let w = Word::parse(&t.input, "a a a").unwrap();
        assert_eq!(crate::sst::run_sst(t, &w).unwrap().to_string(), "a a a");
    }

    #[test]
    fn parse_errors_are_reported() {
        assert!(matches!(parse_document("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_document(r#"{"type": "nope"}"#),
            Err(Error::Parse(_))
        ));
        // total transition tables are required
        let text = r#"{
            "type": "sst",
            "input_alphabet": ["a", "b"],
            "output_alphabet": ["a"],
            "registers": ["X"],
            "states": ["q"],
            "initial": "q",
            "initial_values": {"X": []},
            "transitions": {"q": {"a": {"next": "q", "assign": {"X": ["X"]}}}},
            "output": {"q": ["X"]}
        }"#;
        assert!(parse_document(text).is_err());
    }
}
