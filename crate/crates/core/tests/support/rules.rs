//! Runs the hand-written rule cases through the built-in filters.

use corpusforge_core::corpus_io::RawDocument;
use corpusforge_core::document_filters::dedup_pass;
use corpusforge_core::histogram::Reason;
use corpusforge_core::pipeline::Filters;
use corpusforge_core::segmenter::SentenceRecord;
use corpusforge_core::sentence_filters::judge_sentence;
use corpusforge_testkit::cases::{Case, Level};

/// Reason name the filters give the case's last input, `None` when kept.
pub fn verdict(filters: &Filters, case: &Case) -> Option<&'static str> {
    match case.level {
        Level::Sentence => {
            let s = SentenceRecord::new(&case.inputs[0]);
            judge_sentence(&s, &filters.badwords, &filters.boilerplate).reason.map(Reason::name)
        }
        Level::Document => {
            let last = case.inputs.len() - 1;
            let mut judged = Vec::new();
            for (i, text) in case.inputs.iter().enumerate() {
                let raw = RawDocument { text: text.clone(), ..Default::default() };
                judged.push(filters.process(&raw, 0, i as u64).verdict);
            }
            let accepted: Vec<_> = judged.iter().filter_map(|v| v.as_ref().ok().cloned()).collect();
            match &judged[last] {
                Err(r) => Some(r.name()),
                Ok(_) => dedup_pass(accepted).last().and_then(|v| v.err()).map(|(_, r)| r.name()),
            }
        }
    }
}

/// Cases whose verdict differs from the expectation, described.
pub fn failures(filters: &Filters, cases: &[Case]) -> Vec<String> {
    cases
        .iter()
        .filter_map(|c| {
            let got = verdict(filters, c);
            (got != c.expect).then(|| format!("{} [{}]: expected {:?}, got {:?}", c.name, c.rule, c.expect, got))
        })
        .collect()
}
