//! Synthetic corpora with planted bilingual structure.
//!
//! Generation is deterministic for a given spec: vocabulary comes from the
//! shipped lexicons (plus small curated word lists for the languages whose
//! script alone identifies them), every document is built to an exact token
//! budget, and the ground truth of what was planted where comes back with
//! the documents. Planted translation pairs are registered in an alignment
//! table a [`FixtureEmbedder`] can load, so the detect → mine chain can
//! recover the plant exactly; everything else embeds far apart.
//!
//! Document layouts, all padded with English filler to the token budget:
//!
//! * English and non-English monolingual documents are filler only.
//! * Bilingual documents carry three embedded-language sentences that are
//!   translations of nothing.
//! * Translation documents carry two embedded context sentences plus one
//!   source sentence aligned to an English target sentence, optionally
//!   introduced by `Language:` prompt labels in one of several styles.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{DefaultTokenizer, Document, Source, Tokenizer};
use crate::langid::{Lang, Lexicons, Tag, Tagger};
use crate::miner::{normalize_for_embedding, FixtureEmbedder};
use crate::prompts::PromptLexicon;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid spec: {0}")]
    BadSpec(String),
    #[error("only {usable} usable words for {}; at least 8 are needed", lang.code())]
    ThinVocabulary { lang: Lang, usable: usize },
    #[error("failed to write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// How a planted translation pair is introduced in the text.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LabelStyle {
    /// `French:` / `English:`.
    EnglishName,
    /// `fr:` / `en:`.
    IsoCode,
    /// `français:` / `Translation:`.
    NativeName,
    /// No labels at all.
    Unlabeled,
}

const STYLE_CYCLE: [LabelStyle; 4] = [
    LabelStyle::EnglishName,
    LabelStyle::IsoCode,
    LabelStyle::NativeName,
    LabelStyle::Unlabeled,
];

/// Everything a generation run is allowed to vary.
#[derive(Clone, Debug)]
pub struct SynthSpec {
    pub seed: u64,
    /// Total documents; each tokenizes to exactly `doc_tokens`.
    pub docs: usize,
    pub doc_tokens: usize,
    /// Example width the corpus is meant to be packed at. Must be a
    /// multiple of `doc_tokens` so documents never straddle examples and
    /// every document becomes exactly one instance.
    pub example_len: usize,
    /// Bilingual documents, translation ones included.
    pub bilingual: usize,
    /// Bilingual documents carrying one planted translation pair.
    pub translation: usize,
    pub non_english_monolingual: usize,
    /// Languages the non-English material cycles through, weighted towards
    /// the front of the list.
    pub embedded_languages: Vec<Lang>,
}

impl SynthSpec {
    pub const DEFAULT_EMBEDDED: [Lang; 15] = [
        Lang::Fr,
        Lang::De,
        Lang::Es,
        Lang::It,
        Lang::Pt,
        Lang::Ru,
        Lang::Zh,
        Lang::Ja,
        Lang::Ar,
        Lang::Ko,
        Lang::Vi,
        Lang::Uk,
        Lang::Hi,
        Lang::Th,
        Lang::El,
    ];

    pub fn validate(&self) -> Result<(), SynthError> {
        let fail = |msg: String| Err(SynthError::BadSpec(msg));
        if self.doc_tokens < 96 {
            return fail(format!("doc_tokens must be at least 96, got {}", self.doc_tokens));
        }
        if self.example_len == 0 || self.example_len % self.doc_tokens != 0 {
            return fail(format!(
                "example_len {} must be a positive multiple of doc_tokens {}",
                self.example_len, self.doc_tokens
            ));
        }
        if self.translation > self.bilingual {
            return fail(format!(
                "translation count {} exceeds bilingual count {}",
                self.translation, self.bilingual
            ));
        }
        if self.bilingual + self.non_english_monolingual > self.docs {
            return fail(format!(
                "{} bilingual + {} non-English documents exceed {} total",
                self.bilingual, self.non_english_monolingual, self.docs
            ));
        }
        if self.embedded_languages.is_empty()
            && (self.bilingual > 0 || self.non_english_monolingual > 0)
        {
            return fail("embedded_languages is empty but non-English documents were requested".into());
        }
        if self.embedded_languages.contains(&Lang::En) {
            return fail("embedded_languages must not contain the anchor language".into());
        }
        let mut seen = BTreeSet::new();
        for lang in &self.embedded_languages {
            if !seen.insert(lang) {
                return fail(format!("duplicate embedded language {}", lang.code()));
            }
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<SynthCorpus, SynthError> {
        self.validate()?;
        Generator::new(self)?.run()
    }
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            seed: 42,
            docs: 10_000,
            doc_tokens: 256,
            example_len: 2048,
            bilingual: 140,
            translation: 34,
            non_english_monolingual: 860,
            embedded_languages: Self::DEFAULT_EMBEDDED.to_vec(),
        }
    }
}

/// What was planted where, keyed by instance id (`<doc id>#0`).
#[derive(Clone, Debug, Default)]
pub struct GroundTruth {
    /// All planted bilingual instances, translation ones included.
    pub bilingual: BTreeSet<String>,
    pub translation: BTreeSet<String>,
    /// Label style of each translation instance.
    pub label_style: BTreeMap<String, LabelStyle>,
    /// Embedded language of each bilingual instance.
    pub embedded_language: BTreeMap<String, Lang>,
    /// Language of each non-English monolingual instance.
    pub monolingual_language: BTreeMap<String, Lang>,
}

/// A generated corpus: the documents, the planted alignment table, and the
/// ground truth to score recovery against.
#[derive(Clone, Debug)]
pub struct SynthCorpus {
    pub documents: Vec<Document>,
    /// (embedded sentence, English sentence) planted translation pairs.
    pub alignments: Vec<(String, String)>,
    pub truth: GroundTruth,
}

impl SynthCorpus {
    /// Fixture embedder preloaded with the planted alignments.
    pub fn embedder(&self, dim: usize) -> FixtureEmbedder {
        let mut embedder = FixtureEmbedder::new(dim);
        for (a, b) in &self.alignments {
            embedder.align(a, b);
        }
        embedder
    }

    /// Write the documents as JSON lines.
    pub fn write_documents(&self, path: &Path) -> Result<(), SynthError> {
        let io_err = |source| SynthError::Io { path: path.display().to_string(), source };
        let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
        for doc in &self.documents {
            let line = serde_json::to_string(doc).expect("documents serialize");
            writeln!(out, "{line}").map_err(io_err)?;
        }
        out.flush().map_err(io_err)
    }

    /// Write the alignment table as `embedded<TAB>english` lines, the format
    /// [`FixtureEmbedder::load_alignments`] reads.
    pub fn write_alignments(&self, path: &Path) -> Result<(), SynthError> {
        let io_err = |source| SynthError::Io { path: path.display().to_string(), source };
        let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
        for (a, b) in &self.alignments {
            writeln!(out, "{a}\t{b}").map_err(io_err)?;
        }
        out.flush().map_err(io_err)
    }
}

/// Largest-remainder apportionment of `total` over `weights`; remainder
/// ties go to the earlier index.
fn apportion(total: u64, weights: &[u64]) -> Vec<u64> {
    if total == 0 || weights.is_empty() {
        return vec![0; weights.len()];
    }
    let sum: u128 = weights.iter().map(|&w| w as u128).sum();
    assert!(sum > 0, "apportioning {total} over all-zero weights");
    let mut out = Vec::with_capacity(weights.len());
    let mut remainders = Vec::with_capacity(weights.len());
    for (i, &w) in weights.iter().enumerate() {
        let scaled = total as u128 * w as u128;
        out.push((scaled / sum) as u64);
        remainders.push((scaled % sum, i));
    }
    let assigned: u64 = out.iter().sum();
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for k in 0..(total - assigned) as usize {
        out[remainders[k].1] += 1;
    }
    out
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    English,
    Monolingual(Lang),
    Bilingual(Lang),
    Translation { lang: Lang, style: LabelStyle },
}

/// Sentence terminator in this language's convention.
fn terminal(lang: Lang) -> &'static str {
    if lang.is_cjk() {
        "。"
    } else {
        "."
    }
}

/// Curated words for the languages the shipped lexicons do not cover; their
/// script alone tags them. CJK entries are single characters so that every
/// pool word is exactly one token.
fn curated(lang: Lang) -> &'static [&'static str] {
    match lang {
        Lang::Zh => &[
            "水", "火", "山", "川", "日", "月", "人", "天", "地", "书", "城", "国", "语", "海",
            "花", "鸟",
        ],
        Lang::Ja => &[
            "こ", "ん", "に", "ち", "さ", "く", "ら", "み", "ず", "そ", "ひ", "か", "わ", "と",
            "ね", "い", "ぬ", "や", "ま", "た",
        ],
        Lang::Ko => &[
            "물", "집", "해", "달", "책", "도", "시", "나", "라", "언", "어", "하", "늘", "강",
            "바", "다",
        ],
        Lang::El => &[
            "νερό", "σπίτι", "ήλιος", "φεγγάρι", "βιβλίο", "πόλη", "χώρα", "γλώσσα", "ουρανός",
            "θάλασσα", "δρόμος", "παιδί",
        ],
        Lang::Th => &[
            "น้ำ", "บ้าน", "เมือง", "ประเทศ", "ภาษา", "หนังสือ", "ท้องฟ้า", "แม่น้ำ", "ดวงจันทร์",
            "ถนน", "เด็ก", "ทะเล",
        ],
        Lang::Iw => &[
            "מים", "בית", "שמש", "ירח", "ספר", "עיר", "ארץ", "שפה", "שמים", "נהר", "ילד", "דרך",
        ],
        Lang::Bn => &[
            "পানি", "বাড়ি", "সূর্য", "চাঁদ", "বই", "শহর", "দেশ", "ভাষা", "আকাশ", "নদী", "শিশু",
            "রাস্তা",
        ],
        Lang::Pa => &[
            "ਪਾਣੀ", "ਘਰ", "ਸੂਰਜ", "ਚੰਦ", "ਕਿਤਾਬ", "ਸ਼ਹਿਰ", "ਦੇਸ਼", "ਭਾਸ਼ਾ", "ਅਸਮਾਨ", "ਨਦੀ", "ਬੱਚਾ",
            "ਸੜਕ",
        ],
        Lang::Gu => &[
            "પાણી", "ઘર", "સૂરજ", "ચંદ્ર", "પુસ્તક", "શહેર", "દેશ", "ભાષા", "આકાશ", "નદી", "બાળક",
            "રસ્તો",
        ],
        Lang::Ta => &[
            "தண்ணீர்", "வீடு", "சூரியன்", "நிலவு", "புத்தகம்", "நகரம்", "நாடு", "மொழி", "வானம்",
            "நதி", "குழந்தை", "சாலை",
        ],
        Lang::Te => &[
            "నీరు", "ఇల్లు", "సూర్యుడు", "చంద్రుడు", "పుస్తకం", "నగరం", "దేశం", "భాష", "ఆకాశం",
            "నది", "పిల్లవాడు", "దారి",
        ],
        Lang::Kn => &[
            "ನೀರು", "ಮನೆ", "ಸೂರ್ಯ", "ಚಂದ್ರ", "ಪುಸ್ತಕ", "ನಗರ", "ದೇಶ", "ಭಾಷೆ", "ಆಕಾಶ", "ನದಿ", "ಮಗು",
            "ದಾರಿ",
        ],
        Lang::Ml => &[
            "വെള്ളം", "വീട്", "സൂര്യൻ", "ചന്ദ്രൻ", "പുസ്തകം", "നഗരം", "രാജ്യം", "ഭാഷ", "ആകാശം",
            "നദി", "കുട്ടി", "വഴി",
        ],
        Lang::Hy => &[
            "ջուր", "տուն", "արեւ", "լուսին", "գիրք", "քաղաք", "երկիր", "լեզու", "երկինք", "գետ",
            "երեխա", "ճանապարհ",
        ],
        Lang::Ka => &[
            "წყალი", "სახლი", "მზე", "მთვარე", "წიგნი", "ქალაქი", "ქვეყანა", "ენა", "ცა",
            "მდინარე", "ბავშვი", "გზა",
        ],
        Lang::Am => &[
            "ሰላም", "ውሃ", "ቤት", "ፀሐይ", "ጨረቃ", "መጽሐፍ", "ከተማ", "አገር", "ቋንቋ", "ሰማይ", "ወንዝ", "መንገድ",
        ],
        Lang::Km => &[
            "ទឹក", "ផ្ទះ", "ថ្ងៃ", "ខែ", "សៀវភៅ", "ទីក្រុង", "ប្រទេស", "ភាសា", "មេឃ", "ទន្លេ",
            "ក្មេង", "ផ្លូវ",
        ],
        Lang::Lo => &[
            "ນ້ຳ", "ເຮືອນ", "ເດືອນ", "ປຶ້ມ", "ເມືອງ", "ປະເທດ", "ພາສາ", "ທ້ອງຟ້າ", "ແມ່ນ້ຳ", "ເດັກ",
            "ທາງ", "ທະເລ",
        ],
        Lang::My => &[
            "ရေ", "အိမ်", "နေ", "လ", "စာအုပ်", "မြို့", "နိုင်ငံ", "ဘာသာ", "ကောင်းကင်", "မြစ်",
            "ကလေး", "လမ်း",
        ],
        _ => &[],
    }
}

/// One-token words of a language, verified against the tokenizer, the
/// tagger, and the sentence splitter's abbreviation list.
pub fn vocabulary(lang: Lang) -> Result<Vec<String>, SynthError> {
    let lexicons = Lexicons::builtin();
    let tagger = Tagger::builtin();
    build_pool(lang, &lexicons, &tagger, &abbreviation_set())
}

fn abbreviation_set() -> HashSet<String> {
    include_str!("../data/abbreviations.txt")
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn build_pool(
    lang: Lang,
    lexicons: &Lexicons,
    tagger: &Tagger,
    abbreviations: &HashSet<String>,
) -> Result<Vec<String>, SynthError> {
    let tokenizer = DefaultTokenizer;
    let from_lexicon = lexicons.tokens_for(lang);
    let candidates: Vec<String> = if from_lexicon.is_empty() {
        curated(lang).iter().map(|w| w.to_string()).collect()
    } else {
        from_lexicon.into_iter().map(String::from).collect()
    };
    let mut pool: Vec<String> = candidates
        .into_iter()
        .filter(|w| {
            if !lang.is_cjk() && w.chars().count() < 2 {
                return false;
            }
            if abbreviations.contains(&w.to_lowercase()) {
                return false;
            }
            let spans = match tokenizer.tokenize(w) {
                Ok(spans) => spans,
                Err(_) => return false,
            };
            if spans.len() != 1 || spans[0].start != 0 || spans[0].end as usize != w.len() {
                return false;
            }
            tagger.tag_token(w) == Tag::Lang(lang)
        })
        .collect();
    pool.sort_unstable();
    pool.dedup();
    if pool.len() < 8 {
        return Err(SynthError::ThinVocabulary { lang, usable: pool.len() });
    }
    Ok(pool)
}

struct SentenceFactory {
    pools: BTreeMap<Lang, Vec<String>>,
    used: HashSet<String>,
}

impl SentenceFactory {
    fn new(languages: &[Lang]) -> Result<Self, SynthError> {
        let lexicons = Lexicons::builtin();
        let tagger = Tagger::builtin();
        let abbreviations = abbreviation_set();
        let mut pools = BTreeMap::new();
        for &lang in languages.iter().chain([Lang::En].iter()) {
            pools.insert(lang, build_pool(lang, &lexicons, &tagger, &abbreviations)?);
        }
        Ok(SentenceFactory { pools, used: HashSet::new() })
    }

    /// A sentence of exactly `words` pool words (so exactly `words` tokens).
    /// With `unique`, the sentence is rejection-sampled until its normalized
    /// form has never been produced before, making it safe as an alignment
    /// key.
    fn sentence(&mut self, rng: &mut ChaCha8Rng, lang: Lang, words: usize, unique: bool) -> String {
        let pool = &self.pools[&lang];
        for _ in 0..1000 {
            let mut s = String::new();
            for k in 0..words {
                if k > 0 {
                    s.push(' ');
                }
                s.push_str(&pool[rng.random_range(0..pool.len())]);
            }
            s.push_str(terminal(lang));
            if !unique {
                return s;
            }
            if self.used.insert(normalize_for_embedding(&s)) {
                return s;
            }
        }
        panic!(
            "could not sample a fresh {}-word {} sentence from a pool of {}",
            words,
            lang.code(),
            pool.len()
        );
    }
}

/// Accumulates one document's text while tracking its exact token count.
/// Pieces are joined with single spaces, which never merges tokens across
/// pieces, so piece token counts add exactly.
struct DocBuilder {
    text: String,
    tokens: usize,
}

impl DocBuilder {
    fn new() -> Self {
        DocBuilder { text: String::new(), tokens: 0 }
    }

    fn push(&mut self, piece: &str) {
        let n = DefaultTokenizer.tokenize(piece).expect("piece fits span limits").len();
        if !self.text.is_empty() {
            self.text.push(' ');
        }
        self.text.push_str(piece);
        self.tokens += n;
    }
}

fn prompt_labels(
    style: LabelStyle,
    lang: Lang,
    lexicon: &PromptLexicon,
) -> Option<(String, String)> {
    let entry = lexicon.get(lang)?;
    match style {
        LabelStyle::Unlabeled => None,
        LabelStyle::EnglishName => {
            Some((format!("{}:", entry.english_name), "English:".to_string()))
        }
        LabelStyle::IsoCode => Some((format!("{}:", entry.iso_codes[0]), "en:".to_string())),
        LabelStyle::NativeName => {
            let native =
                entry.native_names.first().map(String::as_str).unwrap_or(&entry.english_name);
            Some((format!("{native}:"), "Translation:".to_string()))
        }
    }
}

const SOURCES: [Source; 5] =
    [Source::Web, Source::Wiki, Source::Conversation, Source::Book, Source::News];

struct Generator<'a> {
    spec: &'a SynthSpec,
    factory: SentenceFactory,
    prompt_lexicon: PromptLexicon,
}

impl<'a> Generator<'a> {
    fn new(spec: &'a SynthSpec) -> Result<Self, SynthError> {
        Ok(Generator {
            spec,
            factory: SentenceFactory::new(&spec.embedded_languages)?,
            prompt_lexicon: PromptLexicon::builtin(),
        })
    }

    fn kinds(&self, rng: &mut ChaCha8Rng) -> Vec<Kind> {
        let spec = self.spec;
        let langs = &spec.embedded_languages;
        let weights: Vec<u64> =
            (0..langs.len()).map(|i| ((langs.len() - i) as u64).pow(2)).collect();
        let mono = apportion(spec.non_english_monolingual as u64, &weights);
        let bilingual = apportion(spec.bilingual as u64, &weights);
        let translation = apportion(spec.translation as u64, &bilingual);

        let mut kinds = Vec::with_capacity(spec.docs);
        let mut style = 0usize;
        for (i, &lang) in langs.iter().enumerate() {
            for _ in 0..translation[i] {
                kinds.push(Kind::Translation { lang, style: STYLE_CYCLE[style % STYLE_CYCLE.len()] });
                style += 1;
            }
            for _ in translation[i]..bilingual[i] {
                kinds.push(Kind::Bilingual(lang));
            }
            for _ in 0..mono[i] {
                kinds.push(Kind::Monolingual(lang));
            }
        }
        kinds.resize(spec.docs, Kind::English);
        kinds.shuffle(rng);
        kinds
    }

    fn pad_english(&mut self, rng: &mut ChaCha8Rng, builder: &mut DocBuilder) {
        while builder.tokens < self.spec.doc_tokens {
            let n = (self.spec.doc_tokens - builder.tokens).min(12);
            let s = self.factory.sentence(rng, Lang::En, n, false);
            builder.push(&s);
        }
    }

    fn run(mut self) -> Result<SynthCorpus, SynthError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.spec.seed);
        let kinds = self.kinds(&mut rng);
        let mut documents = Vec::with_capacity(kinds.len());
        let mut alignments = Vec::new();
        let mut truth = GroundTruth::default();

        for (i, &kind) in kinds.iter().enumerate() {
            let id = format!("d{i:06}");
            let instance_id = format!("{id}#0");
            let mut builder = DocBuilder::new();
            match kind {
                Kind::English => self.pad_english(&mut rng, &mut builder),
                Kind::Monolingual(lang) => {
                    while builder.tokens < self.spec.doc_tokens {
                        let n = (self.spec.doc_tokens - builder.tokens).min(8);
                        let s = self.factory.sentence(&mut rng, lang, n, false);
                        builder.push(&s);
                    }
                    truth.monolingual_language.insert(instance_id.clone(), lang);
                }
                Kind::Bilingual(lang) => {
                    for _ in 0..2 {
                        let s = self.factory.sentence(&mut rng, Lang::En, 12, false);
                        builder.push(&s);
                    }
                    for _ in 0..3 {
                        let s = self.factory.sentence(&mut rng, lang, 8, true);
                        builder.push(&s);
                    }
                    self.pad_english(&mut rng, &mut builder);
                    truth.bilingual.insert(instance_id.clone());
                    truth.embedded_language.insert(instance_id.clone(), lang);
                }
                Kind::Translation { lang, style } => {
                    for _ in 0..2 {
                        let s = self.factory.sentence(&mut rng, Lang::En, 12, false);
                        builder.push(&s);
                    }
                    for _ in 0..2 {
                        let s = self.factory.sentence(&mut rng, lang, 8, true);
                        builder.push(&s);
                    }
                    let source = self.factory.sentence(&mut rng, lang, 6, true);
                    let target = self.factory.sentence(&mut rng, Lang::En, 11, true);
                    match prompt_labels(style, lang, &self.prompt_lexicon) {
                        Some((source_label, target_label)) => {
                            builder.push(&source_label);
                            builder.push(&source);
                            builder.push(&target_label);
                            builder.push(&target);
                        }
                        None => {
                            builder.push(&source);
                            builder.push(&target);
                        }
                    }
                    self.pad_english(&mut rng, &mut builder);
                    alignments.push((source, target));
                    truth.bilingual.insert(instance_id.clone());
                    truth.translation.insert(instance_id.clone());
                    truth.label_style.insert(instance_id.clone(), style);
                    truth.embedded_language.insert(instance_id.clone(), lang);
                }
            }
            debug_assert_eq!(
                DefaultTokenizer.tokenize(&builder.text).unwrap().len(),
                self.spec.doc_tokens,
                "document {id} missed its token budget"
            );
            documents.push(Document {
                id,
                source: SOURCES[i % SOURCES.len()],
                text: builder.text,
            });
        }
        Ok(SynthCorpus { documents, alignments, truth })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{assemble_examples, split_instances, Instance};
    use crate::detector::{detect, FocusPolicy, RunThresholds, Verdict};
    use crate::filters::FilterConfig;
    use crate::miner::{
        build_pools, is_translation_instance, mine_pairs, SentenceEmbedder, SentenceSplitter,
    };
    use crate::prompts::{classify_prompt, extract_prefixes, PromptSide, PromptType};

    fn small_spec() -> SynthSpec {
        SynthSpec {
            seed: 7,
            docs: 400,
            doc_tokens: 128,
            example_len: 512,
            bilingual: 12,
            translation: 5,
            non_english_monolingual: 40,
            embedded_languages: vec![Lang::Fr, Lang::Ru, Lang::Zh, Lang::Ja],
        }
    }

    #[test]
    fn apportion_is_exact_and_deterministic() {
        assert_eq!(apportion(7, &[5, 3, 2]), vec![4, 2, 1]);
        assert_eq!(apportion(2, &[2, 1, 1]), vec![1, 1, 0]);
        assert_eq!(apportion(0, &[5, 3]), vec![0, 0]);
        let out = apportion(1400, &[225, 196, 169, 144]);
        assert_eq!(out.iter().sum::<u64>(), 1400);
    }

    #[test]
    fn every_language_has_a_usable_vocabulary() {
        for lang in Lang::ALL {
            if lang == Lang::En {
                continue;
            }
            let pool = vocabulary(lang).unwrap();
            assert!(pool.len() >= 8, "{}: {}", lang.code(), pool.len());
        }
        assert!(vocabulary(Lang::En).unwrap().len() >= 8);
    }

    #[test]
    fn documents_hit_their_exact_token_budget() {
        let corpus = small_spec().generate().unwrap();
        assert_eq!(corpus.documents.len(), 400);
        let tokenizer = DefaultTokenizer;
        for doc in &corpus.documents {
            assert_eq!(
                tokenizer.tokenize(&doc.text).unwrap().len(),
                128,
                "document {}",
                doc.id
            );
        }
        assert_eq!(corpus.truth.bilingual.len(), 12);
        assert_eq!(corpus.truth.translation.len(), 5);
        assert_eq!(corpus.truth.monolingual_language.len(), 40);
        assert_eq!(corpus.alignments.len(), 5);
        assert!(corpus.truth.translation.is_subset(&corpus.truth.bilingual));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = small_spec().generate().unwrap();
        let b = small_spec().generate().unwrap();
        assert_eq!(a.documents.len(), b.documents.len());
        for (x, y) in a.documents.iter().zip(&b.documents) {
            assert_eq!(x.id, y.id);
            assert_eq!(x.text, y.text);
        }
        assert_eq!(a.alignments, b.alignments);

        let mut other = small_spec();
        other.seed = 8;
        let c = other.generate().unwrap();
        assert!(
            a.documents.iter().zip(&c.documents).any(|(x, y)| x.text != y.text),
            "a different seed must change the text"
        );
    }

    fn instances(corpus: &SynthCorpus) -> Vec<Instance> {
        let out =
            assemble_examples(corpus.documents.iter().cloned(), &DefaultTokenizer, 512).unwrap();
        assert!(out.report.skipped.is_empty());
        out.examples.iter().flat_map(split_instances).collect()
    }

    #[test]
    fn detection_recovers_exactly_the_planted_bilingual_instances() {
        let corpus = small_spec().generate().unwrap();
        let tagger = Tagger::builtin();
        let thresholds = RunThresholds::default();
        let focus = FocusPolicy::all_languages();

        let mut found = BTreeSet::new();
        let mut embedded = BTreeMap::new();
        let mut seen = 0usize;
        for instance in instances(&corpus) {
            seen += 1;
            let tags = tagger.tag_instance(&instance);
            let annotation = detect(&tags, &thresholds, &focus);
            match annotation.verdict {
                Verdict::Bilingual => {
                    embedded.insert(instance.id.clone(), annotation.embedded.unwrap());
                    found.insert(instance.id);
                }
                Verdict::Monolingual => {
                    if let Some(&lang) = corpus.truth.monolingual_language.get(&instance.id) {
                        assert_eq!(annotation.primary, Some(lang), "{}", instance.id);
                    } else {
                        assert_eq!(annotation.primary, Some(Lang::En), "{}", instance.id);
                    }
                }
                other => panic!("unexpected verdict {other:?} for {}", instance.id),
            }
        }
        assert_eq!(seen, 400, "every document is exactly one instance");
        assert_eq!(found, corpus.truth.bilingual);
        assert_eq!(embedded, corpus.truth.embedded_language);
    }

    #[test]
    fn mining_recovers_exactly_the_planted_translation_pairs() {
        let corpus = small_spec().generate().unwrap();
        let tagger = Tagger::builtin();
        let thresholds = RunThresholds::default();
        let focus = FocusPolicy::all_languages();
        let splitter = SentenceSplitter::builtin();
        let embedder = corpus.embedder(FixtureEmbedder::DEFAULT_DIM);
        let filters = FilterConfig::default();

        let mut translations = BTreeSet::new();
        for instance in instances(&corpus) {
            let tags = tagger.tag_instance(&instance);
            let annotation = detect(&tags, &thresholds, &focus);
            if annotation.verdict != Verdict::Bilingual {
                continue;
            }
            let pools = build_pools(&instance, &tags, &annotation, &splitter).unwrap();
            let outcome = mine_pairs(&pools, &embedder, 0.6, &filters, &tagger).unwrap();
            assert_eq!(outcome.skipped, 0, "{}", instance.id);
            if is_translation_instance(&outcome.pairs) {
                let accepted: Vec<_> = outcome.pairs.iter().filter(|p| p.accepted).collect();
                assert_eq!(accepted.len(), 1, "{}", instance.id);
                assert!(accepted[0].distance < 1e-9);
                translations.insert(instance.id.clone());
            }
        }
        assert_eq!(translations, corpus.truth.translation);
    }

    #[test]
    fn planted_labels_classify_by_their_style() {
        let corpus = small_spec().generate().unwrap();
        let tagger = Tagger::builtin();
        let thresholds = RunThresholds::default();
        let focus = FocusPolicy::all_languages();
        let splitter = SentenceSplitter::builtin();
        let embedder = corpus.embedder(FixtureEmbedder::DEFAULT_DIM);
        let filters = FilterConfig::default();
        let lexicon = PromptLexicon::builtin();

        let mut styles_seen = BTreeSet::new();
        for instance in instances(&corpus) {
            let Some(&style) = corpus.truth.label_style.get(&instance.id) else { continue };
            let tags = tagger.tag_instance(&instance);
            let annotation = detect(&tags, &thresholds, &focus);
            let pools = build_pools(&instance, &tags, &annotation, &splitter).unwrap();
            let outcome = mine_pairs(&pools, &embedder, 0.6, &filters, &tagger).unwrap();
            let records = extract_prefixes(&instance, &outcome.pairs);
            let expect = match style {
                LabelStyle::EnglishName => Some((PromptType::Default, PromptType::Default)),
                LabelStyle::IsoCode => Some((PromptType::Code, PromptType::Code)),
                LabelStyle::NativeName => Some((PromptType::Native, PromptType::Translation)),
                LabelStyle::Unlabeled => None,
            };
            match expect {
                None => assert!(records.is_empty(), "{}: {records:?}", instance.id),
                Some((source_type, target_type)) => {
                    assert_eq!(records.len(), 2, "{}: {records:?}", instance.id);
                    for record in &records {
                        let got = classify_prompt(record, &lexicon);
                        let want = match record.side {
                            PromptSide::SourceSide => source_type,
                            PromptSide::TargetSide => target_type,
                        };
                        assert_eq!(got, want, "{}: {record:?}", instance.id);
                    }
                }
            }
            styles_seen.insert(format!("{style:?}"));
        }
        assert_eq!(styles_seen.len(), 4, "all four label styles planted: {styles_seen:?}");
    }

    #[test]
    fn alignment_file_reloads_into_an_equivalent_embedder() {
        let corpus = small_spec().generate().unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("alignment.tsv");
        corpus.write_alignments(&path).unwrap();

        let mut reloaded = FixtureEmbedder::new(64);
        assert_eq!(reloaded.load_alignments(&path).unwrap(), corpus.alignments.len());
        for (a, b) in &corpus.alignments {
            let va = reloaded.embed(a).unwrap();
            let vb = reloaded.embed(b).unwrap();
            assert!(crate::miner::cosine_distance(&va, &vb) < 1e-9);
        }

        let docs_path = dir.path().join("docs.jsonl");
        corpus.write_documents(&docs_path).unwrap();
        let text = std::fs::read_to_string(&docs_path).unwrap();
        assert_eq!(text.lines().count(), corpus.documents.len());
        let first: Document = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first.id, corpus.documents[0].id);
        assert_eq!(first.text, corpus.documents[0].text);
    }

    #[test]
    fn spec_validation_rejects_bad_shapes() {
        let base = small_spec();
        let mut spec = base.clone();
        spec.doc_tokens = 64;
        assert!(matches!(spec.generate(), Err(SynthError::BadSpec(_))));

        let mut spec = base.clone();
        spec.example_len = 500;
        assert!(matches!(spec.generate(), Err(SynthError::BadSpec(_))));

        let mut spec = base.clone();
        spec.translation = spec.bilingual + 1;
        assert!(matches!(spec.generate(), Err(SynthError::BadSpec(_))));

        let mut spec = base.clone();
        spec.docs = 10;
        assert!(matches!(spec.generate(), Err(SynthError::BadSpec(_))));

        let mut spec = base.clone();
        spec.embedded_languages = vec![Lang::Fr, Lang::En];
        assert!(matches!(spec.generate(), Err(SynthError::BadSpec(_))));

        let mut spec = base.clone();
        spec.embedded_languages = vec![Lang::Fr, Lang::Fr];
        assert!(matches!(spec.generate(), Err(SynthError::BadSpec(_))));

        let mut spec = base;
        spec.embedded_languages.clear();
        assert!(matches!(spec.generate(), Err(SynthError::BadSpec(_))));
    }
}
