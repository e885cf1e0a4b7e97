//! Translation-pair mining inside bilingual instances.
//!
//! A bilingual instance is split into sentences, each sentence gets a
//! language by majority vote over its token tags, the sentences form two
//! pools (the language with fewer sentences is the embedded one), and every
//! embedded sentence is paired with its nearest primary sentence by cosine
//! distance. Pairs under the distance threshold then face the filter suite;
//! survivors are accepted translation pairs.

pub mod embed;
pub mod sentences;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use embed::{
    cosine_distance, normalize_for_embedding, EmbedError, FixtureEmbedder, SentenceEmbedder,
    ServiceEmbedder,
};
pub use sentences::SentenceSplitter;

use crate::corpus::{DefaultTokenizer, Instance, Span, Tokenizer};
use crate::detector::{BilingualAnnotation, Verdict};
use crate::filters::{apply_filters, FilterConfig, FilterVerdicts};
use crate::langid::{Lang, SequenceLid, Tag, TagSequence};

#[derive(Debug, Error)]
pub enum MinerError {
    #[error("instance {instance} is not bilingual (verdict {verdict:?})")]
    NotBilingual { instance: String, verdict: Verdict },
    #[error("instance {instance}: {tags} tags for {tokens} tokens")]
    TagMismatch { instance: String, tags: usize, tokens: usize },
    #[error("cosine-distance threshold {0} must lie in (0, 2)")]
    BadThreshold(f64),
}

/// One sentence of an instance, with its language vote.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sentence {
    pub instance: String,
    /// Byte range within the instance text (label prefixes excluded).
    pub span: Span,
    /// Token index range `[start, end)` within the instance.
    pub tokens: (u32, u32),
    pub text: String,
    pub language: Lang,
}

/// Candidate sentences of a bilingual instance, pooled by language.
/// `embedded` is always the pool of the language with fewer sentences.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SentencePools {
    pub instance: String,
    pub primary_lang: Lang,
    pub embedded_lang: Lang,
    pub primary: Vec<Sentence>,
    pub embedded: Vec<Sentence>,
}

/// A nearest-neighbor match under the distance threshold, with its filter
/// audit. `accepted` holds iff the distance beat the threshold and every
/// filter passed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TranslationPair {
    pub embedded: Sentence,
    pub primary: Sentence,
    pub distance: f64,
    pub verdicts: FilterVerdicts,
    pub accepted: bool,
}

/// Mining result for one instance.
#[derive(Clone, Debug, Default)]
pub struct MineOutcome {
    pub pairs: Vec<TranslationPair>,
    /// Sentences dropped because the embedder failed on them.
    pub skipped: usize,
}

/// Strict-majority language over the defined tags of a sentence; `None`
/// when undefined tags are all there is, or no language clears half.
fn vote(tags: &[Tag]) -> Option<Lang> {
    let mut counts = [0usize; Lang::COUNT];
    let mut defined = 0usize;
    for tag in tags {
        if let Tag::Lang(lang) = tag {
            counts[lang.index()] += 1;
            defined += 1;
        }
    }
    let (best, n) = Lang::ALL
        .into_iter()
        .map(|l| (l, counts[l.index()]))
        .max_by_key(|&(_, n)| n)?;
    (n * 2 > defined).then_some(best)
}

/// Strip a leading `word:` label (any non-whitespace run ending in a colon)
/// from a sentence span, returning the possibly narrowed span.
fn strip_label(text: &str, span: Span) -> Span {
    let s = &text[span.range()];
    let label_len = s.split_whitespace().next().map_or(0, |first| {
        if first.len() >= 2 && first.ends_with(':') {
            first.len()
        } else {
            0
        }
    });
    if label_len == 0 {
        return span;
    }
    let rest = &s[label_len..];
    let skipped = rest.len() - rest.trim_start().len();
    Span::new(span.start as usize + label_len + skipped, span.end as usize)
}

fn token_range(tokens: &[Span], span: Span) -> (u32, u32) {
    let start = tokens.partition_point(|t| t.start < span.start);
    let end = tokens.partition_point(|t| t.end <= span.end);
    (start as u32, end.max(start) as u32)
}

/// Split a bilingual instance into language-voted sentence pools.
///
/// Sentences are dropped when they are label-only, have no strict-majority
/// language, or vote for a language outside the instance's pair. An empty
/// embedded pool is a valid result: the instance simply yields no pairs.
pub fn build_pools(
    instance: &Instance,
    tags: &TagSequence,
    annotation: &BilingualAnnotation,
    splitter: &SentenceSplitter,
) -> Result<SentencePools, MinerError> {
    if annotation.verdict != Verdict::Bilingual {
        return Err(MinerError::NotBilingual {
            instance: instance.id.clone(),
            verdict: annotation.verdict,
        });
    }
    if tags.tags.len() != instance.tokens.len() {
        return Err(MinerError::TagMismatch {
            instance: instance.id.clone(),
            tags: tags.tags.len(),
            tokens: instance.tokens.len(),
        });
    }
    let primary = annotation.primary.expect("bilingual annotation names a primary");
    let embedded = annotation.embedded.expect("bilingual annotation names an embedded");

    let mut of_primary = Vec::new();
    let mut of_embedded = Vec::new();
    for raw in splitter.split(&instance.text, Some(primary)) {
        let span = strip_label(&instance.text, raw);
        if span.is_empty() {
            continue;
        }
        let (t0, t1) = token_range(&instance.tokens, span);
        if t0 == t1 {
            continue;
        }
        let Some(language) = vote(&tags.tags[t0 as usize..t1 as usize]) else {
            continue;
        };
        if language != primary && language != embedded {
            continue;
        }
        let sentence = Sentence {
            instance: instance.id.clone(),
            span,
            tokens: (t0, t1),
            text: instance.text[span.range()].to_string(),
            language,
        };
        if language == primary {
            of_primary.push(sentence);
        } else {
            of_embedded.push(sentence);
        }
    }

    // The language with fewer sentences is the embedded one; a tie keeps
    // the annotation's roles.
    let (primary_lang, embedded_lang, primary_pool, embedded_pool) =
        if of_primary.len() < of_embedded.len() {
            (embedded, primary, of_embedded, of_primary)
        } else {
            (primary, embedded, of_primary, of_embedded)
        };

    Ok(SentencePools {
        instance: instance.id.clone(),
        primary_lang,
        embedded_lang,
        primary: primary_pool,
        embedded: embedded_pool,
    })
}

/// Pair every embedded sentence with its nearest primary sentence.
///
/// The match is kept when its cosine distance is strictly under `threshold`,
/// then audited by the filter suite; at most one pair per embedded sentence,
/// argmin ties going to the lowest primary index. Sentences the embedder
/// fails on are skipped and counted.
pub fn mine_pairs(
    pools: &SentencePools,
    embedder: &dyn SentenceEmbedder,
    threshold: f64,
    filters: &FilterConfig,
    lid: &dyn SequenceLid,
) -> Result<MineOutcome, MinerError> {
    if !(threshold > 0.0 && threshold < 2.0) {
        return Err(MinerError::BadThreshold(threshold));
    }
    let mut outcome = MineOutcome::default();
    if pools.primary.is_empty() || pools.embedded.is_empty() {
        return Ok(outcome);
    }

    let primary_texts: Vec<&str> = pools.primary.iter().map(|s| s.text.as_str()).collect();
    let mut primary_vecs = Vec::new();
    for (i, result) in embedder.embed_batch(&primary_texts).into_iter().enumerate() {
        match result {
            Ok(v) => primary_vecs.push((i, v)),
            Err(err) => {
                log::debug!("skipping primary sentence of {}: {err}", pools.instance);
                outcome.skipped += 1;
            }
        }
    }
    let embedded_texts: Vec<&str> = pools.embedded.iter().map(|s| s.text.as_str()).collect();
    let embedded_vecs = embedder.embed_batch(&embedded_texts);

    let tokenizer = DefaultTokenizer;
    for (ei, result) in embedded_vecs.into_iter().enumerate() {
        let evec = match result {
            Ok(v) => v,
            Err(err) => {
                log::debug!("skipping embedded sentence of {}: {err}", pools.instance);
                outcome.skipped += 1;
                continue;
            }
        };
        let mut best: Option<(usize, f64)> = None;
        for (pi, pvec) in &primary_vecs {
            let d = cosine_distance(&evec, pvec);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((*pi, d));
            }
        }
        let Some((pi, distance)) = best else { continue };
        if distance >= threshold {
            continue;
        }
        let e = &pools.embedded[ei];
        let p = &pools.primary[pi];
        let e_spans = tokenizer.tokenize(&e.text).expect("sentence fits span limits");
        let p_spans = tokenizer.tokenize(&p.text).expect("sentence fits span limits");
        let e_tokens: Vec<&str> = e_spans.iter().map(|s| &e.text[s.range()]).collect();
        let p_tokens: Vec<&str> = p_spans.iter().map(|s| &p.text[s.range()]).collect();
        let verdicts = apply_filters(&e_tokens, &p_tokens, &e.text, &p.text, filters, lid);
        outcome.pairs.push(TranslationPair {
            embedded: e.clone(),
            primary: p.clone(),
            distance,
            verdicts,
            accepted: verdicts.accepted(),
        });
    }
    Ok(outcome)
}

/// An instance is a translation instance when it yielded at least one
/// accepted pair.
pub fn is_translation_instance(pairs: &[TranslationPair]) -> bool {
    pairs.iter().any(|p| p.accepted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Source;
    use std::collections::HashMap;

    fn make_instance(text: &str) -> Instance {
        Instance {
            id: "doc#0".into(),
            doc: "doc".into(),
            source: Source::Web,
            example: 0,
            text: text.into(),
            tokens: DefaultTokenizer.tokenize(text).unwrap(),
        }
    }

    /// Tags assigned per sentence: every token of sentence i gets codes[i].
    fn tag_by_sentence(instance: &Instance, codes: &[&str]) -> TagSequence {
        let splitter = SentenceSplitter::builtin();
        let spans = splitter.split(&instance.text, None);
        assert_eq!(spans.len(), codes.len(), "sentence count mismatch in fixture");
        let mut tags = vec![Tag::Undefined; instance.tokens.len()];
        for (span, code) in spans.iter().zip(codes) {
            let tag = match *code {
                "und" => Tag::Undefined,
                c => Tag::Lang(Lang::from_code(c).unwrap()),
            };
            let (t0, t1) = token_range(&instance.tokens, *span);
            for t in t0..t1 {
                tags[t as usize] = tag;
            }
        }
        TagSequence { instance_id: instance.id.clone(), tags }
    }

    fn bilingual(primary: Lang, embedded: Lang) -> BilingualAnnotation {
        BilingualAnnotation {
            instance: "doc#0".into(),
            verdict: Verdict::Bilingual,
            primary: Some(primary),
            embedded: Some(embedded),
            undef_frac: 0.0,
            segments: vec![],
            primary_tie: false,
            embedded_tie: false,
        }
    }

    fn pools_for(text: &str, codes: &[&str], p: Lang, e: Lang) -> SentencePools {
        let instance = make_instance(text);
        let tags = tag_by_sentence(&instance, codes);
        build_pools(&instance, &tags, &bilingual(p, e), &SentenceSplitter::builtin()).unwrap()
    }

    /// Embedder with preset vectors, keyed by exact text.
    struct MapEmbedder {
        dim: usize,
        map: HashMap<String, Vec<f32>>,
    }

    impl MapEmbedder {
        fn new(entries: &[(&str, Vec<f32>)]) -> Self {
            let dim = entries.first().map_or(2, |(_, v)| v.len());
            MapEmbedder {
                dim,
                map: entries.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            }
        }
    }

    impl SentenceEmbedder for MapEmbedder {
        fn dim(&self) -> usize {
            self.dim
        }
        fn embed(&self, text: &str) -> Result<Vec<f32>, EmbedError> {
            self.map
                .get(text)
                .cloned()
                .ok_or_else(|| EmbedError::Service(format!("no vector for {text:?}")))
        }
    }

    /// Test LID: first letter f → French, t/a/i → English, else undefined.
    struct StubLid;
    impl SequenceLid for StubLid {
        fn identify(&self, text: &str) -> Tag {
            match text.chars().next() {
                Some('f') => Tag::Lang(Lang::Fr),
                Some('t' | 'a' | 'i') => Tag::Lang(Lang::En),
                _ => Tag::Undefined,
            }
        }
    }

    #[test]
    fn pools_follow_fewer_sentences_rule() {
        let pools = pools_for(
            "The house is large. The garden is green. The road is long. La maison est grande.",
            &["en", "en", "en", "fr"],
            Lang::En,
            Lang::Fr,
        );
        assert_eq!(pools.primary_lang, Lang::En);
        assert_eq!(pools.embedded_lang, Lang::Fr);
        assert_eq!(pools.primary.len(), 3);
        assert_eq!(pools.embedded.len(), 1);
        assert_eq!(pools.embedded[0].text, "La maison est grande.");
    }

    #[test]
    fn pool_sizes_override_annotation_roles() {
        // Annotation says English primary, but English has fewer sentences.
        let pools = pools_for(
            "Un texte court. Encore une phrase. Et une autre phrase. All the English here.",
            &["fr", "fr", "fr", "en"],
            Lang::En,
            Lang::Fr,
        );
        assert_eq!(pools.primary_lang, Lang::Fr);
        assert_eq!(pools.embedded_lang, Lang::En);
        assert_eq!(pools.embedded.len(), 1);
    }

    #[test]
    fn pool_size_tie_keeps_annotation_embedded() {
        let pools = pools_for(
            "A first sentence. A second sentence. Une première phrase. Une seconde phrase.",
            &["en", "en", "fr", "fr"],
            Lang::En,
            Lang::Fr,
        );
        assert_eq!(pools.primary_lang, Lang::En);
        assert_eq!(pools.embedded_lang, Lang::Fr);
        assert_eq!(pools.primary.len(), 2);
        assert_eq!(pools.embedded.len(), 2);
    }

    #[test]
    fn vote_requires_strict_majority() {
        let text = "alpha beta gamma delta epsilon zeta. The next sentence is fine here. Une phrase en plus ici.";
        let instance = make_instance(text);
        let mut tags = tag_by_sentence(&instance, &["en", "en", "fr"]);
        // Rewrite the first sentence's six tokens to a 3/3 split.
        for t in 0..3 {
            tags.tags[t] = Tag::Lang(Lang::En);
        }
        for t in 3..6 {
            tags.tags[t] = Tag::Lang(Lang::Fr);
        }
        let pools = build_pools(
            &instance,
            &tags,
            &bilingual(Lang::En, Lang::Fr),
            &SentenceSplitter::builtin(),
        )
        .unwrap();
        // The tied sentence is dropped: one English, one French remain.
        assert_eq!(pools.primary.len(), 1);
        assert_eq!(pools.embedded.len(), 1);
        assert_eq!(pools.primary[0].text, "The next sentence is fine here.");
    }

    #[test]
    fn third_language_and_undefined_sentences_are_dropped() {
        let pools = pools_for(
            "An English sentence sits here. Ein deutscher Satz steht hier. Une phrase française ici. ??? !!!",
            &["en", "de", "fr", "und", "und"],
            Lang::En,
            Lang::Fr,
        );
        assert_eq!(pools.primary.len(), 1);
        assert_eq!(pools.embedded.len(), 1);
        assert!(pools.primary[0].text.starts_with("An English"));
        assert!(pools.embedded[0].text.starts_with("Une phrase"));
    }

    #[test]
    fn label_prefixes_are_stripped() {
        let text = "French: Bonjour tout le monde entier\nEnglish: Hello to the whole wide world";
        let instance = make_instance(text);
        let tags = tag_by_sentence(&instance, &["fr", "en"]);
        let pools = build_pools(
            &instance,
            &tags,
            &bilingual(Lang::En, Lang::Fr),
            &SentenceSplitter::builtin(),
        )
        .unwrap();
        assert_eq!(pools.embedded[0].text, "Bonjour tout le monde entier");
        assert_eq!(pools.primary[0].text, "Hello to the whole wide world");
        // Spans still index the instance text, past the labels.
        let span = pools.embedded[0].span;
        assert_eq!(&instance.text[span.range()], "Bonjour tout le monde entier");
        // The label tokens are outside the sentence's token range.
        let (t0, _) = pools.embedded[0].tokens;
        assert_eq!(&instance.text[instance.tokens[t0 as usize].range()], "Bonjour");
    }

    #[test]
    fn label_only_sentences_are_dropped() {
        let text = "French:\nBonjour tout le monde entier\nEnglish:\nHello to the whole wide world";
        let instance = make_instance(text);
        let tags = tag_by_sentence(&instance, &["en", "fr", "en", "en"]);
        let pools = build_pools(
            &instance,
            &tags,
            &bilingual(Lang::En, Lang::Fr),
            &SentenceSplitter::builtin(),
        )
        .unwrap();
        assert_eq!(pools.primary.len(), 1);
        assert_eq!(pools.embedded.len(), 1);
        assert_eq!(pools.primary[0].text, "Hello to the whole wide world");
        assert_eq!(pools.embedded[0].text, "Bonjour tout le monde entier");
    }

    #[test]
    fn non_bilingual_instances_are_rejected() {
        let instance = make_instance("Just one language here.");
        let tags = tag_by_sentence(&instance, &["en"]);
        let mut ann = bilingual(Lang::En, Lang::Fr);
        ann.verdict = Verdict::Monolingual;
        let err = build_pools(&instance, &tags, &ann, &SentenceSplitter::builtin());
        assert!(matches!(err, Err(MinerError::NotBilingual { .. })));
    }

    fn simple_pools(embedded: &[&str], primary: &[&str]) -> SentencePools {
        let sent = |text: &str, lang: Lang| Sentence {
            instance: "doc#0".into(),
            span: Span::new(0, text.len()),
            tokens: (0, 0),
            text: text.into(),
            language: lang,
        };
        SentencePools {
            instance: "doc#0".into(),
            primary_lang: Lang::En,
            embedded_lang: Lang::Fr,
            primary: primary.iter().map(|t| sent(t, Lang::En)).collect(),
            embedded: embedded.iter().map(|t| sent(t, Lang::Fr)).collect(),
        }
    }

    #[test]
    fn threshold_is_strict_and_validated() {
        let pools = simple_pools(&["france aaa bbb"], &["top qqq bbb"]);
        // Orthogonal unit vectors → distance exactly 1.0.
        let emb = MapEmbedder::new(&[
            ("france aaa bbb", vec![1.0, 0.0]),
            ("top qqq bbb", vec![0.0, 1.0]),
        ]);
        let cfg = FilterConfig::default();
        let at = mine_pairs(&pools, &emb, 1.0, &cfg, &StubLid).unwrap();
        assert!(at.pairs.is_empty(), "distance 1.0 is not < 1.0");
        let above = mine_pairs(&pools, &emb, 1.001, &cfg, &StubLid).unwrap();
        assert_eq!(above.pairs.len(), 1);
        assert_eq!(above.pairs[0].distance, 1.0);
        assert!(above.pairs[0].accepted);

        assert!(matches!(
            mine_pairs(&pools, &emb, 0.0, &cfg, &StubLid),
            Err(MinerError::BadThreshold(_))
        ));
        assert!(matches!(
            mine_pairs(&pools, &emb, 2.0, &cfg, &StubLid),
            Err(MinerError::BadThreshold(_))
        ));
    }

    #[test]
    fn identical_embeddings_pair_at_distance_zero() {
        let mut emb = FixtureEmbedder::new(FixtureEmbedder::DEFAULT_DIM);
        emb.align("le chat est noir", "the cat is black");
        let pools = simple_pools(&["le chat est noir"], &["the cat is black", "a dog was here"]);
        let out =
            mine_pairs(&pools, &emb, 0.6, &FilterConfig::default(), &crate::langid::Tagger::builtin())
                .unwrap();
        assert_eq!(out.pairs.len(), 1);
        let pair = &out.pairs[0];
        assert!(pair.distance < 1e-9);
        assert_eq!(pair.primary.text, "the cat is black");
        assert!(pair.accepted, "verdicts: {:?}", pair.verdicts);
    }

    #[test]
    fn argmin_tie_picks_lowest_index() {
        let v = vec![1.0f32, 0.0];
        let emb = MapEmbedder::new(&[
            ("fff aaa bbb", v.clone()),
            ("ttt aaa bbb", v.clone()),
            ("tt2 aaa bbb", v.clone()),
        ]);
        let pools = simple_pools(&["fff aaa bbb"], &["ttt aaa bbb", "tt2 aaa bbb"]);
        let out = mine_pairs(&pools, &emb, 0.5, &FilterConfig::default(), &StubLid).unwrap();
        assert_eq!(out.pairs.len(), 1);
        assert_eq!(out.pairs[0].primary.text, "ttt aaa bbb");
    }

    #[test]
    fn embedder_failures_skip_and_count() {
        let emb = MapEmbedder::new(&[
            ("fff aaa bbb", vec![1.0, 0.0]),
            ("ttt aaa bbb", vec![1.0, 0.0]),
            // "fff ccc ddd" and "ttt eee" missing on purpose.
        ]);
        let pools =
            simple_pools(&["fff aaa bbb", "fff ccc ddd"], &["ttt aaa bbb", "ttt eee"]);
        let out = mine_pairs(&pools, &emb, 0.5, &FilterConfig::default(), &StubLid).unwrap();
        assert_eq!(out.skipped, 2);
        assert_eq!(out.pairs.len(), 1);
        assert_eq!(out.pairs[0].embedded.text, "fff aaa bbb");
    }

    #[test]
    fn empty_pools_yield_nothing() {
        let pools = simple_pools(&[], &["ttt aaa bbb"]);
        let emb = MapEmbedder::new(&[("ttt aaa bbb", vec![1.0, 0.0])]);
        let out = mine_pairs(&pools, &emb, 0.5, &FilterConfig::default(), &StubLid).unwrap();
        assert!(out.pairs.is_empty());
        assert!(!is_translation_instance(&out.pairs));
    }

    #[test]
    fn embedded_sentences_pair_at_most_once() {
        // Two embedded, three primary; every vector identical → each
        // embedded pairs exactly once, both with primary index 0.
        let v = vec![0.6f32, 0.8];
        let texts =
            ["fff one aaa", "fff two bbb", "ttt one aaa", "ttt two bbb", "ttt three ccc"];
        let entries: Vec<(&str, Vec<f32>)> = texts.iter().map(|t| (*t, v.clone())).collect();
        let emb = MapEmbedder::new(&entries);
        let pools = simple_pools(&texts[..2], &texts[2..]);
        let out = mine_pairs(&pools, &emb, 0.5, &FilterConfig::default(), &StubLid).unwrap();
        assert_eq!(out.pairs.len(), 2);
        let mut seen = std::collections::HashSet::new();
        for pair in &out.pairs {
            assert!(seen.insert(pair.embedded.text.clone()), "embedded side repeated");
            assert_eq!(pair.primary.text, "ttt one aaa");
        }
    }

    #[test]
    fn monotone_in_threshold() {
        // Three embedded at staggered distances from one primary.
        let prim = vec![1.0f32, 0.0];
        let mk = |cos: f32| vec![cos, (1.0 - cos * cos).sqrt()];
        let emb = MapEmbedder::new(&[
            ("ttt base xxx", prim.clone()),
            ("fff near xxx", mk(0.9)),
            ("fff mid xxx", mk(0.5)),
            ("fff far xxx", mk(0.1)),
        ]);
        let pools = simple_pools(&["fff near xxx", "fff mid xxx", "fff far xxx"], &["ttt base xxx"]);
        let mut last = 0;
        for t in [0.05, 0.2, 0.6, 1.0, 1.5] {
            let out = mine_pairs(&pools, &emb, t, &FilterConfig::default(), &StubLid).unwrap();
            assert!(out.pairs.len() >= last, "threshold {t} lost pairs");
            last = out.pairs.len();
        }
        assert_eq!(last, 3);
    }
}
