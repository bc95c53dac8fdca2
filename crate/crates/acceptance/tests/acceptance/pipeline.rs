use std::cell::Cell;
use std::sync::OnceLock;

use anyhow::{anyhow, Result};
use proptest::prelude::*;
use proptest::sample::select;
use proptest::test_runner::{Config, TestRunner};
use retriever_core::text::{
    correct_spelling, extract_keywords, normalize, pos_tag, tokenize, LexEntry, Lexicon, PosTag,
};

use crate::support::fixtures;

const CASES: u32 = 1000;

fn lexicon() -> &'static Lexicon {
    static L: OnceLock<Lexicon> = OnceLock::new();
    L.get_or_init(|| Lexicon::load(&fixtures("thai").join("lexicon.tsv")).expect("fixture lexicon"))
}

fn text_char() -> impl Strategy<Value = char> {
    prop_oneof![
        4 => (0x0E01u32..=0x0E2E).prop_map(|c| char::from_u32(c).unwrap()),
        2 => select(vec!['\u{0E31}', '\u{0E34}', '\u{0E35}', '\u{0E38}', '\u{0E47}', '\u{0E48}', '\u{0E49}', '\u{0E4C}']),
        1 => select(vec!['ๆ', '?', 'า', 'เ', 'แ', 'โ']),
        2 => select(vec![' ', ' ', '\t', '\n', '\u{00A0}', '\u{3000}']),
        1 => select(vec!['a', 'q', 'Z', '5', '.']),
    ]
}

fn text() -> impl Strategy<Value = String> {
    proptest::collection::vec(text_char(), 0..64).prop_map(|cs| cs.into_iter().collect())
}

/// Mostly lexicon words, so segmentation and tagging have something to find.
fn lexical_text() -> impl Strategy<Value = String> {
    let words: Vec<String> = lexicon().words().map(str::to_owned).collect();
    let piece = prop_oneof![
        6 => select(words),
        1 => text_char().prop_map(String::from),
    ];
    proptest::collection::vec(piece, 0..14).prop_map(|ps| ps.concat())
}

/// Runs `check` over `CASES` generated inputs and reports how many ran.
fn run<S: Strategy>(strategy: S, check: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<String> {
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    let count = Cell::new(0u32);
    runner
        .run(&strategy, |v| {
            count.set(count.get() + 1);
            check(v)
        })
        .map_err(|e| anyhow!("{e}"))?;
    Ok(format!("{} inputs, 0 violations", count.get()))
}

pub fn normalize_idempotent() -> Result<String> {
    run(prop_oneof![text(), lexical_text()], |s| {
        let once = normalize(&s);
        prop_assert_eq!(normalize(&once), once);
        Ok(())
    })
}

pub fn tokenize_partition() -> Result<String> {
    run(prop_oneof![text(), lexical_text()], |s| {
        let tokens = tokenize(&s, lexicon());
        let expected: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(tokens.concat(), expected);
        prop_assert!(tokens
            .iter()
            .all(|t| !t.is_empty() && !t.chars().any(char::is_whitespace)));
        Ok(())
    })
}

fn random_lexicon() -> impl Strategy<Value = Lexicon> {
    let alphabet = vec!['ก', 'า', 'ร', 'น', '\u{0E49}', 'x'];
    let word =
        proptest::collection::vec(select(alphabet.clone()), 1..7).prop_map(|cs| cs.into_iter().collect::<String>());
    proptest::collection::btree_map(word, (1u64..100, select(PosTag::ALL.to_vec())), 1..30).prop_map(move |m| {
        let entries = m
            .into_iter()
            .map(|(w, (frequency, tag))| (w, LexEntry { frequency, tag }));
        Lexicon::new(entries, alphabet.clone()).unwrap()
    })
}

pub fn spelling_identity() -> Result<String> {
    let fixture_words = lexicon()
        .words()
        .filter(|w| correct_spelling(w, lexicon()) != *w)
        .count();
    if fixture_words > 0 {
        return Err(anyhow!("{fixture_words} fixture lexicon words were rewritten"));
    }
    run(random_lexicon(), |lex| {
        for w in lex.words() {
            prop_assert_eq!(correct_spelling(w, &lex), w);
        }
        Ok(())
    })
}

pub fn keywords_subsequence() -> Result<String> {
    run(prop_oneof![lexical_text(), text()], |s| {
        let tokens = tokenize(&normalize(&s), lexicon());
        let tagged = pos_tag(&tokens, lexicon());
        let keywords = extract_keywords(&tagged);
        let mut rest = tokens.iter();
        for k in &keywords {
            prop_assert!(rest.any(|t| t == k), "{} not in order within {:?}", k, tokens);
        }
        Ok(())
    })
}
