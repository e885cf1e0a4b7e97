//! Natural translation-prompt discovery.
//!
//! Materialized translation pairs are often introduced by a short label —
//! `French:`, `FR:`, `Français:`, `Traduction:` — and those labels are
//! exactly the prompts a model sees during pretraining. This module scans
//! the text immediately preceding each side of every accepted pair for the
//! colon pattern (a non-whitespace run ending in `:`), keeps the exact
//! prefix, and classifies it against a per-language lexicon.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Instance;
use crate::langid::Lang;
use crate::miner::TranslationPair;
use crate::stats::ResourceGroup;

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("failed to read prompt lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse prompt lexicon {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("prompt lexicon {path}: unknown language code {code:?}")]
    UnknownLanguage { path: String, code: String },
    #[error("prompt lexicon {path}: language {code} lacks {field}")]
    MissingField { path: String, code: &'static str, field: &'static str },
}

/// Which member of the pair the prefix precedes, by text order: the side
/// appearing first in the instance is the source, the later the target.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptSide {
    SourceSide,
    TargetSide,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptType {
    /// The language's English name: `French:`.
    Default,
    /// An ISO code: `FR:`, `fra:`.
    Code,
    /// The language's name in itself: `Français:`.
    Native,
    /// The word "translation" in the target language: `Traduction:`.
    Translation,
    Other,
}

impl PromptType {
    pub const ALL: [PromptType; 5] = [
        PromptType::Default,
        PromptType::Code,
        PromptType::Native,
        PromptType::Translation,
        PromptType::Other,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PromptType::Default => "default",
            PromptType::Code => "code",
            PromptType::Native => "native",
            PromptType::Translation => "translation",
            PromptType::Other => "other",
        }
    }

    /// Position of this type in [`PromptType::ALL`]-ordered arrays such as
    /// [`PromptCounts::total`].
    pub fn index(self) -> usize {
        self as usize
    }
}

/// One discovered prefix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PromptRecord {
    /// `<instance id>:<pair ordinal>`.
    pub pair_id: String,
    pub side: PromptSide,
    /// The exact matched text, colon included.
    pub prefix: String,
    /// (source language, target language) in text order.
    pub language_pair: (Lang, Lang),
    /// Language of the sentence this prefix precedes.
    pub language: Lang,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PromptEntry {
    pub english_name: String,
    #[serde(default)]
    pub native_names: Vec<String>,
    pub iso_codes: Vec<String>,
    #[serde(default)]
    pub translation_words: Vec<String>,
}

/// Per-language names and codes backing prompt classification. Shipped as
/// an editable JSON data file covering every supported language.
pub struct PromptLexicon {
    entries: HashMap<Lang, PromptEntry>,
}

impl PromptLexicon {
    pub fn builtin() -> Self {
        let data = include_str!("../data/prompt_lexicon.json");
        Self::parse(data, "<builtin>").expect("shipped prompt lexicon is valid")
    }

    pub fn from_path(path: &Path) -> Result<Self, PromptError> {
        let text = std::fs::read_to_string(path).map_err(|source| PromptError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    fn parse(text: &str, path: &str) -> Result<Self, PromptError> {
        let raw: BTreeMap<String, PromptEntry> =
            serde_json::from_str(text).map_err(|source| PromptError::Parse {
                path: path.to_string(),
                source,
            })?;
        let mut entries = HashMap::new();
        for (code, entry) in raw {
            let lang = Lang::from_code(&code).ok_or_else(|| PromptError::UnknownLanguage {
                path: path.to_string(),
                code: code.clone(),
            })?;
            if entry.english_name.is_empty() {
                return Err(PromptError::MissingField {
                    path: path.to_string(),
                    code: lang.code(),
                    field: "english_name",
                });
            }
            if entry.iso_codes.is_empty() {
                return Err(PromptError::MissingField {
                    path: path.to_string(),
                    code: lang.code(),
                    field: "iso_codes",
                });
            }
            entries.insert(lang, entry);
        }
        Ok(PromptLexicon { entries })
    }

    pub fn get(&self, lang: Lang) -> Option<&PromptEntry> {
        self.entries.get(&lang)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Scan backwards from `start` for the colon pattern: optional whitespace
/// containing at most one newline, then a non-whitespace run ending in `:`.
fn preceding_prefix(text: &str, start: usize) -> Option<String> {
    let mut newlines = 0usize;
    let mut end = None;
    let mut begin = start;
    for (i, c) in text[..start].char_indices().rev() {
        if c.is_whitespace() {
            if end.is_some() {
                break;
            }
            if c == '\n' {
                newlines += 1;
                if newlines > 1 {
                    return None;
                }
            }
        } else {
            if end.is_none() {
                end = Some(i + c.len_utf8());
            }
            begin = i;
        }
    }
    let end = end?;
    let run = &text[begin..end];
    (run.len() >= 2 && run.ends_with(':')).then(|| run.to_string())
}

/// Discover prompt prefixes around the accepted pairs of one instance. Each
/// pair contributes at most two records (one per side); most pairs yield
/// none. Extraction is read-only: pair acceptance is never touched.
pub fn extract_prefixes(instance: &Instance, pairs: &[TranslationPair]) -> Vec<PromptRecord> {
    let mut records = Vec::new();
    for (ordinal, pair) in pairs.iter().filter(|p| p.accepted).enumerate() {
        let (source, target) = if pair.embedded.span.start <= pair.primary.span.start {
            (&pair.embedded, &pair.primary)
        } else {
            (&pair.primary, &pair.embedded)
        };
        let language_pair = (source.language, target.language);
        for (side, sentence) in
            [(PromptSide::SourceSide, source), (PromptSide::TargetSide, target)]
        {
            if let Some(prefix) = preceding_prefix(&instance.text, sentence.span.start as usize) {
                records.push(PromptRecord {
                    pair_id: format!("{}:{}", instance.id, ordinal),
                    side,
                    prefix,
                    language_pair,
                    language: sentence.language,
                });
            }
        }
    }
    records
}

/// Classify one record. Matching is case-insensitive on the prefix with the
/// trailing colon removed; the classes are checked in order — English name,
/// ISO code, native name, then (target side only) the translation word —
/// and anything left is `Other`. A language absent from the lexicon logs a
/// warning and classifies as `Other`.
pub fn classify_prompt(record: &PromptRecord, lexicon: &PromptLexicon) -> PromptType {
    let stripped = record
        .prefix
        .strip_suffix(':')
        .unwrap_or(&record.prefix)
        .trim()
        .to_lowercase();
    let Some(entry) = lexicon.get(record.language) else {
        log::warn!("prompt lexicon has no entry for {}", record.language.code());
        return PromptType::Other;
    };
    let matches = |options: &[String]| options.iter().any(|o| o.to_lowercase() == stripped);
    if entry.english_name.to_lowercase() == stripped {
        PromptType::Default
    } else if matches(&entry.iso_codes) {
        PromptType::Code
    } else if matches(&entry.native_names) {
        PromptType::Native
    } else if record.side == PromptSide::TargetSide && matches(&entry.translation_words) {
        PromptType::Translation
    } else {
        PromptType::Other
    }
}

/// Prompt counts by language, by resource group, and in total. Rows are
/// keyed by the non-English member of the record's language pair, and the
/// per-type group columns always sum to the total row.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PromptCounts {
    pub by_language: BTreeMap<Lang, [u64; 5]>,
    pub by_group: BTreeMap<ResourceGroup, [u64; 5]>,
    pub total: [u64; 5],
}

impl PromptCounts {
    pub fn add(&mut self, language: Lang, prompt_type: PromptType) {
        let i = prompt_type.index();
        self.by_language.entry(language).or_default()[i] += 1;
        if let Some(group) = ResourceGroup::of(language) {
            self.by_group.entry(group).or_default()[i] += 1;
        } else {
            log::warn!("prompt record keyed by ungrouped language {}", language.code());
        }
        self.total[i] += 1;
    }

    pub fn merge(&mut self, other: &PromptCounts) {
        for (lang, counts) in &other.by_language {
            let row = self.by_language.entry(*lang).or_default();
            for (a, b) in row.iter_mut().zip(counts) {
                *a += b;
            }
        }
        for (group, counts) in &other.by_group {
            let row = self.by_group.entry(*group).or_default();
            for (a, b) in row.iter_mut().zip(counts) {
                *a += b;
            }
        }
        for (a, b) in self.total.iter_mut().zip(&other.total) {
            *a += b;
        }
    }
}

/// Classify and tally a record set. The keying language of a record is the
/// non-English member of its language pair.
pub fn aggregate_prompts(records: &[PromptRecord], lexicon: &PromptLexicon) -> PromptCounts {
    let mut counts = PromptCounts::default();
    for record in records {
        let keyed = if record.language_pair.0 == Lang::En {
            record.language_pair.1
        } else {
            record.language_pair.0
        };
        counts.add(keyed, classify_prompt(record, lexicon));
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DefaultTokenizer, Source, Span, Tokenizer};
    use crate::filters::FilterVerdicts;
    use crate::miner::Sentence;
    use proptest::prelude::*;

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

    fn sentence(instance: &Instance, text: &str, language: Lang) -> Sentence {
        let start = instance.text.find(text).expect("sentence text present");
        Sentence {
            instance: instance.id.clone(),
            span: Span::new(start, start + text.len()),
            tokens: (0, 0),
            text: text.into(),
            language,
        }
    }

    fn pair(instance: &Instance, embedded: (&str, Lang), primary: (&str, Lang)) -> TranslationPair {
        TranslationPair {
            embedded: sentence(instance, embedded.0, embedded.1),
            primary: sentence(instance, primary.0, primary.1),
            distance: 0.0,
            verdicts: FilterVerdicts { length: true, ratio: true, edit: true, language: true },
            accepted: true,
        }
    }

    fn record(prefix: &str, side: PromptSide, lang: Lang) -> PromptRecord {
        PromptRecord {
            pair_id: "doc#0:0".into(),
            side,
            prefix: prefix.into(),
            language_pair: if lang == Lang::En { (Lang::Fr, Lang::En) } else { (Lang::En, lang) },
            language: lang,
        }
    }

    #[test]
    fn extracts_prefixes_on_both_sides() {
        let text = "French: Bonjour tout le monde\nEnglish: Hello everyone out there";
        let instance = make_instance(text);
        let p = pair(
            &instance,
            ("Bonjour tout le monde", Lang::Fr),
            ("Hello everyone out there", Lang::En),
        );
        let records = extract_prefixes(&instance, &[p]);
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].prefix, "French:");
        assert_eq!(records[0].side, PromptSide::SourceSide);
        assert_eq!(records[0].language, Lang::Fr);
        assert_eq!(records[1].prefix, "English:");
        assert_eq!(records[1].side, PromptSide::TargetSide);
        assert_eq!(records[0].language_pair, (Lang::Fr, Lang::En));
        assert_eq!(records[0].pair_id, "doc#0:0");
    }

    #[test]
    fn source_and_target_follow_text_order() {
        // The primary (English) sentence comes first in the text here.
        let text = "English: Hello everyone out there\nFrench: Bonjour tout le monde";
        let instance = make_instance(text);
        let p = pair(
            &instance,
            ("Bonjour tout le monde", Lang::Fr),
            ("Hello everyone out there", Lang::En),
        );
        let records = extract_prefixes(&instance, &[p]);
        assert_eq!(records[0].side, PromptSide::SourceSide);
        assert_eq!(records[0].language, Lang::En);
        assert_eq!(records[1].side, PromptSide::TargetSide);
        assert_eq!(records[1].language, Lang::Fr);
        assert_eq!(records[1].language_pair, (Lang::En, Lang::Fr));
    }

    #[test]
    fn prose_without_colon_yields_nothing() {
        let text = "Some text then Bonjour tout le monde and Hello everyone out there";
        let instance = make_instance(text);
        let p = pair(
            &instance,
            ("Bonjour tout le monde", Lang::Fr),
            ("Hello everyone out there", Lang::En),
        );
        assert!(extract_prefixes(&instance, &[p]).is_empty());
    }

    #[test]
    fn gap_of_more_than_one_newline_breaks_adjacency() {
        let text = "French:\n\nBonjour tout le monde\nEnglish: Hello everyone out there";
        let instance = make_instance(text);
        let p = pair(
            &instance,
            ("Bonjour tout le monde", Lang::Fr),
            ("Hello everyone out there", Lang::En),
        );
        let records = extract_prefixes(&instance, &[p]);
        assert_eq!(records.len(), 1, "only the English side is prefixed");
        assert_eq!(records[0].prefix, "English:");
    }

    #[test]
    fn rejected_pairs_are_ignored() {
        let text = "French: Bonjour tout le monde\nEnglish: Hello everyone out there";
        let instance = make_instance(text);
        let mut p = pair(
            &instance,
            ("Bonjour tout le monde", Lang::Fr),
            ("Hello everyone out there", Lang::En),
        );
        p.accepted = false;
        assert!(extract_prefixes(&instance, &[p]).is_empty());
    }

    #[test]
    fn classification_order_and_cases() {
        let lexicon = PromptLexicon::builtin();
        assert_eq!(lexicon.len(), Lang::COUNT);
        let cases = [
            ("French:", PromptSide::SourceSide, Lang::Fr, PromptType::Default),
            ("french:", PromptSide::SourceSide, Lang::Fr, PromptType::Default),
            ("FR:", PromptSide::SourceSide, Lang::Fr, PromptType::Code),
            ("fra:", PromptSide::TargetSide, Lang::Fr, PromptType::Code),
            ("Français:", PromptSide::SourceSide, Lang::Fr, PromptType::Native),
            ("FRANÇAIS:", PromptSide::SourceSide, Lang::Fr, PromptType::Native),
            ("Traduction:", PromptSide::TargetSide, Lang::Fr, PromptType::Translation),
            ("Translation:", PromptSide::TargetSide, Lang::En, PromptType::Translation),
            ("Source:", PromptSide::SourceSide, Lang::Fr, PromptType::Other),
            ("日本語:", PromptSide::SourceSide, Lang::Ja, PromptType::Native),
            ("翻訳:", PromptSide::TargetSide, Lang::Ja, PromptType::Translation),
        ];
        for (prefix, side, lang, expected) in cases {
            let r = record(prefix, side, lang);
            assert_eq!(classify_prompt(&r, &lexicon), expected, "{prefix} ({lang:?})");
        }
    }

    #[test]
    fn translation_words_only_count_on_the_target_side() {
        let lexicon = PromptLexicon::builtin();
        let r = record("Traduction:", PromptSide::SourceSide, Lang::Fr);
        assert_eq!(classify_prompt(&r, &lexicon), PromptType::Other);
        let r = record("Traduction:", PromptSide::TargetSide, Lang::Fr);
        assert_eq!(classify_prompt(&r, &lexicon), PromptType::Translation);
    }

    #[test]
    fn missing_language_falls_back_to_other() {
        let lexicon = PromptLexicon::parse(
            r#"{"en": {"english_name": "English", "iso_codes": ["en"]}}"#,
            "<test>",
        )
        .unwrap();
        let r = record("Français:", PromptSide::SourceSide, Lang::Fr);
        assert_eq!(classify_prompt(&r, &lexicon), PromptType::Other);
    }

    #[test]
    fn lexicon_validation() {
        assert!(matches!(
            PromptLexicon::parse(r#"{"zz": {"english_name": "X", "iso_codes": ["zz"]}}"#, "<t>"),
            Err(PromptError::UnknownLanguage { .. })
        ));
        assert!(matches!(
            PromptLexicon::parse(r#"{"fr": {"english_name": "", "iso_codes": ["fr"]}}"#, "<t>"),
            Err(PromptError::MissingField { field: "english_name", .. })
        ));
        assert!(matches!(
            PromptLexicon::parse(r#"{"fr": {"english_name": "French", "iso_codes": []}}"#, "<t>"),
            Err(PromptError::MissingField { field: "iso_codes", .. })
        ));
    }

    #[test]
    fn aggregation_keys_on_the_non_english_member() {
        let lexicon = PromptLexicon::builtin();
        let records = vec![
            record("French:", PromptSide::SourceSide, Lang::Fr),
            // English target side of the same pair still keys on French.
            PromptRecord {
                pair_id: "doc#0:0".into(),
                side: PromptSide::TargetSide,
                prefix: "English:".into(),
                language_pair: (Lang::Fr, Lang::En),
                language: Lang::En,
            },
            record("RU:", PromptSide::SourceSide, Lang::Ru),
        ];
        let counts = aggregate_prompts(&records, &lexicon);
        let fr = counts.by_language[&Lang::Fr];
        assert_eq!(fr[PromptType::Default.index()], 2);
        let ru = counts.by_language[&Lang::Ru];
        assert_eq!(ru[PromptType::Code.index()], 1);
        assert_eq!(counts.by_group[&ResourceGroup::High][PromptType::Default.index()], 2);
        assert_eq!(counts.by_group[&ResourceGroup::Medium][PromptType::Code.index()], 1);
        assert_eq!(counts.total[PromptType::Default.index()], 2);
    }

    proptest! {
        #[test]
        fn group_rows_sum_to_total(langs in prop::collection::vec(0usize..Lang::COUNT, 0..60),
                                   types in prop::collection::vec(0usize..5, 0..60)) {
            let lexicon = PromptLexicon::builtin();
            let records: Vec<PromptRecord> = langs
                .iter()
                .zip(&types)
                .filter(|&(l, _)| Lang::ALL[*l] != Lang::En)
                .map(|(l, t)| {
                    let lang = Lang::ALL[*l];
                    let prefix = match t {
                        0 => format!("{}:", lexicon.get(lang).unwrap().english_name),
                        1 => format!("{}:", lexicon.get(lang).unwrap().iso_codes[0]),
                        _ => "Whatever:".to_string(),
                    };
                    record(&prefix, PromptSide::SourceSide, lang)
                })
                .collect();
            let counts = aggregate_prompts(&records, &lexicon);
            for i in 0..5 {
                let group_sum: u64 = counts.by_group.values().map(|row| row[i]).sum();
                prop_assert_eq!(group_sum, counts.total[i]);
                let lang_sum: u64 = counts.by_language.values().map(|row| row[i]).sum();
                prop_assert_eq!(lang_sum, counts.total[i]);
            }
            let n: u64 = counts.total.iter().sum();
            prop_assert_eq!(n, records.len() as u64);
        }
    }
}
