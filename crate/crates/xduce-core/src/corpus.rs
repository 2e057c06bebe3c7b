//! The bundled document corpus. `gen-corpus` serializes these into the
//! repository's `corpus/` directory; tests and the CLI examples refer to
//! them by name, and a test pins the checked-in files to this list.

use crate::alphabet::{Alphabet, Word};
use crate::cfp::{
    build_cfpow, build_cfpow_pipeline, build_cfsquaring, build_squaring_pipeline, build_wpow,
    stripping_transducer, CfpExpr,
};
use crate::json::{Document, NamedDocument};
use crate::machines;
use crate::sequences::{extract_pumping_family, PolyWordExpr};

fn named(name: &str, description: &str, doc: Document) -> NamedDocument {
    NamedDocument {
        name: Some(name.to_owned()),
        description: Some(description.to_owned()),
        doc,
    }
}

/// Every bundled document, in file order. Names are unique and double as
/// file stems.
pub fn all() -> Vec<NamedDocument> {
    let ab = Alphabet::new(["a", "b"]).unwrap();
    let unary = Alphabet::new(["a"]).unwrap();
    let digits = Alphabet::new(["1", "2", "3", "4"]).unwrap();
    let digits3 = Alphabet::new(["1", "2", "3"]).unwrap();
    let parse = |g: &Alphabet, s: &str| Word::parse(g, s).unwrap();

    vec![
        named(
            "prefixes",
            "reversed prefixes with underlined heads: 1 2 3 4 maps to _4 3 2 1 _3 2 1 _2 1 _1",
            Document::Sst(machines::prefixes_sst(&digits)),
        ),
        named(
            "idreverse",
            "reverses every #-separated block in place",
            Document::Sst(machines::idreverse_over(
                &Alphabet::new(["a", "b", "c", "d"]).unwrap(),
            )),
        ),
        named(
            "fig2",
            "two-state sequential transducer: a and b pass through, c repeats the current class",
            Document::Sequential(machines::fig2_sequential()),
        ),
        named("identity", "echoes its input", Document::Sst(machines::identity_sst(&ab))),
        named("reverse", "mirrors its input", Document::Sst(machines::reverse_sst(&ab))),
        named(
            "constant",
            "ignores its input and outputs a b",
            Document::Sst(machines::const_sst(&ab, &parse(&ab, "a b"))),
        ),
        named(
            "identity_unary",
            "the identity on powers of a",
            Document::Sst(machines::identity_sst(&unary)),
        ),
        named(
            "reverse_unary",
            "reverse on powers of a (prepend instead of append)",
            Document::Sst(machines::reverse_sst(&unary)),
        ),
        named(
            "constant_unary",
            "every input maps to a a",
            Document::Sst(machines::const_sst(&unary, &parse(&unary, "a a"))),
        ),
        named(
            "cond_unary",
            "even-length inputs pass through, odd-length ones collapse to a",
            Document::CfpExpr(CfpExpr::Cond {
                dfa: machines::even_length_dfa(&unary),
                then: Box::new(CfpExpr::Reg(machines::identity_sst(&unary))),
                otherwise: Box::new(CfpExpr::Reg(machines::const_sst(
                    &unary,
                    &parse(&unary, "a"),
                ))),
            }),
        ),
        named(
            "concat_unary",
            "input followed by its reverse",
            Document::CfpExpr(CfpExpr::Concat(
                Box::new(CfpExpr::Reg(machines::identity_sst(&unary))),
                Box::new(CfpExpr::Reg(machines::reverse_sst(&unary))),
            )),
        ),
        named(
            "cfsquaring",
            "comparison-free squaring: each letter's underlined copy followed by the whole input",
            Document::CfpExpr(build_cfsquaring(&digits3)),
        ),
        named(
            "cfsquaring_unary",
            "comparison-free squaring restricted to powers of a",
            Document::CfpExpr(build_cfsquaring(&unary)),
        ),
        named(
            "wpow",
            "w maps to w repeated |w| times, one marker substitution",
            Document::CfpExpr(build_wpow(&ab)),
        ),
        named(
            "cfpow3",
            "level-3 power function over {0,1,2}xGamma, cubic growth",
            Document::CfpExpr(build_cfpow(3, &ab)),
        ),
        named(
            "squaring_pipeline",
            "squaring as two chained one-layered machines: 1 2 3 4 maps to _1 2 3 4 1 _2 3 4 ...",
            Document::Pipeline(build_squaring_pipeline(&digits)),
        ),
        named(
            "cfpow_pipeline3",
            "the level-3 power function via repeated squaring and stripping stages",
            Document::Pipeline(build_cfpow_pipeline(3, &ab)),
        ),
        named(
            "strip1",
            "keeps blocks headed by a level-1 letter and promotes the head to level 2",
            Document::Sequential(stripping_transducer(1, &ab)),
        ),
        named(
            "squaring_hdt0l",
            "a^n maps to a^(n*n): three working letters, one per layer",
            Document::Hdt0l(machines::squaring_unary_hdt0l()),
        ),
        named(
            "witness_71i",
            "a^n maps to b a^(n-1) b a^(n-2) ... b a b; its maximal a-block lengths grow without bound",
            Document::Hdt0l(machines::witness_71i_hdt0l()),
        ),
        named(
            "cfpt_identity",
            "one-pebble sweep emitting each letter",
            Document::Cfpt(machines::cfpt_identity(&ab)),
        ),
        named(
            "cfpt_reverse",
            "one pebble to the right marker, emit on the way back",
            Document::Cfpt(machines::cfpt_reverse(&ab)),
        ),
        named(
            "cfpt_echo",
            "emits i r under every input letter; outer part of a substitution",
            Document::Cfpt(machines::cfpt_echo(&ab, &Alphabet::new(["i", "r"]).unwrap())),
        ),
        named(
            "cfpt_cfsquaring",
            "comparison-free squaring as a two-pebble machine, composed from one-pebble parts",
            Document::Cfpt(machines::cfpt_cfsquaring(&ab)),
        ),
        named(
            "even_dfa",
            "accepts the even-length words",
            Document::Dfa(machines::even_length_dfa(&ab)),
        ),
        named(
            "pwe_block",
            "a b followed by n copies of b a",
            Document::Pwe(PolyWordExpr::cat(
                PolyWordExpr::lit(parse(&ab, "a b")),
                PolyWordExpr::star(PolyWordExpr::lit(parse(&ab, "b a"))),
            )),
        ),
        named(
            "pwe_seam",
            "n copies of a b a; consecutive copies merge their a-runs",
            Document::Pwe(PolyWordExpr::star(PolyWordExpr::lit(parse(&ab, "a b a")))),
        ),
        named(
            "reverse_family",
            "the pumping family extracted from reverse_unary",
            Document::Family(
                extract_pumping_family(&machines::reverse_sst(&unary))
                    .expect("reverse is copyless and unary"),
            ),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::json::{parse_document, serialize_document};
    use std::collections::BTreeSet;

    #[test]
    fn corpus_names_are_unique_file_stems() {
        let docs = all();
        let names: BTreeSet<&str> = docs.iter().map(|d| d.name.as_deref().unwrap()).collect();
        assert_eq!(names.len(), docs.len());
        for n in names {
            assert!(n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'), "{n:?}");
        }
    }

    #[test]
    fn corpus_documents_round_trip() {
        for nd in &all() {
            let text = serialize_document(nd);
            let back = parse_document(&text).unwrap_or_else(|e| {
                panic!("{}: {e}", nd.name.as_deref().unwrap());
            });
            assert_eq!(&back, nd, "{}", nd.name.as_deref().unwrap());
            assert_eq!(serialize_document(&back), text, "{}", nd.name.as_deref().unwrap());
        }
    }
}
