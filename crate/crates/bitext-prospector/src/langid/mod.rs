//! Token-level language identification.
//!
//! Tokens are first partitioned by Unicode script; scripts used by a single
//! supported language resolve immediately, while shared scripts (Latin,
//! Cyrillic, Arabic, Devanagari) fall through to frequency-lexicon lookup.
//! Tokens that stay unresolved are tagged [`Tag::Undefined`] rather than
//! guessed.

mod lexicon;
mod script;

pub use lexicon::{LexiconError, Lexicons, LEXICON_LANGS};
pub use script::{classify_char, Script};

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::corpus::Instance;

/// The 45 supported languages: English plus the 44 focus languages.
#[repr(u8)]
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Lang {
    Am, Ar, Be, Bg, Bn, De, El, En, Es, Fa, Fr, Gu, Hi, Hy, Id, It, Iw, Ja,
    Ka, Kk, Km, Kn, Ko, Ky, Lo, Mk, Ml, Mn, Mr, My, Ne, Pa, Ps, Pt, Ru, Sd,
    Sr, Ta, Te, Tg, Th, Uk, Ur, Vi, Zh,
}

impl Lang {
    pub const COUNT: usize = 45;

    pub const ALL: [Lang; Lang::COUNT] = [
        Lang::Am, Lang::Ar, Lang::Be, Lang::Bg, Lang::Bn, Lang::De, Lang::El,
        Lang::En, Lang::Es, Lang::Fa, Lang::Fr, Lang::Gu, Lang::Hi, Lang::Hy,
        Lang::Id, Lang::It, Lang::Iw, Lang::Ja, Lang::Ka, Lang::Kk, Lang::Km,
        Lang::Kn, Lang::Ko, Lang::Ky, Lang::Lo, Lang::Mk, Lang::Ml, Lang::Mn,
        Lang::Mr, Lang::My, Lang::Ne, Lang::Pa, Lang::Ps, Lang::Pt, Lang::Ru,
        Lang::Sd, Lang::Sr, Lang::Ta, Lang::Te, Lang::Tg, Lang::Th, Lang::Uk,
        Lang::Ur, Lang::Vi, Lang::Zh,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Lang::Am => "am", Lang::Ar => "ar", Lang::Be => "be", Lang::Bg => "bg",
            Lang::Bn => "bn", Lang::De => "de", Lang::El => "el", Lang::En => "en",
            Lang::Es => "es", Lang::Fa => "fa", Lang::Fr => "fr", Lang::Gu => "gu",
            Lang::Hi => "hi", Lang::Hy => "hy", Lang::Id => "id", Lang::It => "it",
            Lang::Iw => "iw", Lang::Ja => "ja", Lang::Ka => "ka", Lang::Kk => "kk",
            Lang::Km => "km", Lang::Kn => "kn", Lang::Ko => "ko", Lang::Ky => "ky",
            Lang::Lo => "lo", Lang::Mk => "mk", Lang::Ml => "ml", Lang::Mn => "mn",
            Lang::Mr => "mr", Lang::My => "my", Lang::Ne => "ne", Lang::Pa => "pa",
            Lang::Ps => "ps", Lang::Pt => "pt", Lang::Ru => "ru", Lang::Sd => "sd",
            Lang::Sr => "sr", Lang::Ta => "ta", Lang::Te => "te", Lang::Tg => "tg",
            Lang::Th => "th", Lang::Uk => "uk", Lang::Ur => "ur", Lang::Vi => "vi",
            Lang::Zh => "zh",
        }
    }

    pub fn from_code(code: &str) -> Option<Lang> {
        Lang::ALL.iter().copied().find(|l| l.code() == code)
    }

    /// Languages whose tokens are single characters (token-level tagging is
    /// effectively character-level for these).
    pub fn is_cjk(self) -> bool {
        matches!(self, Lang::Zh | Lang::Ja | Lang::Ko)
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for Lang {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for Lang {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let code = String::deserialize(d)?;
        Lang::from_code(&code)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown language code {code:?}")))
    }
}

/// Per-token language tag. `Undefined` covers digits, unresolvable tokens and
/// unsupported scripts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Tag {
    Lang(Lang),
    Undefined,
}

impl Tag {
    pub fn lang(self) -> Option<Lang> {
        match self {
            Tag::Lang(l) => Some(l),
            Tag::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, Tag::Lang(_))
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Lang(l) => f.write_str(l.code()),
            Tag::Undefined => f.write_str("und"),
        }
    }
}

impl Serialize for Tag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Tag::Lang(l) => l.serialize(s),
            Tag::Undefined => s.serialize_str("und"),
        }
    }
}

impl<'de> Deserialize<'de> for Tag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let code = String::deserialize(d)?;
        if code == "und" {
            return Ok(Tag::Undefined);
        }
        Lang::from_code(&code)
            .map(Tag::Lang)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown tag {code:?}")))
    }
}

/// Set of languages, used to restrict tagging to a permitted subset.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LangSet(u64);

impl LangSet {
    pub fn empty() -> Self {
        LangSet(0)
    }

    pub fn all() -> Self {
        LangSet((1u64 << Lang::COUNT) - 1)
    }

    pub fn insert(&mut self, lang: Lang) {
        self.0 |= 1 << lang.index();
    }

    pub fn contains(self, lang: Lang) -> bool {
        self.0 & (1 << lang.index()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Lang> {
        Lang::ALL.into_iter().filter(move |l| self.contains(*l))
    }
}

impl FromIterator<Lang> for LangSet {
    fn from_iter<I: IntoIterator<Item = Lang>>(iter: I) -> Self {
        let mut set = LangSet::empty();
        for lang in iter {
            set.insert(lang);
        }
        set
    }
}

/// Tag sequence aligned 1:1 with an instance's tokens.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TagSequence {
    pub instance_id: String,
    pub tags: Vec<Tag>,
}

/// Token-level tagger over a fixed language inventory.
pub struct Tagger {
    lexicons: Lexicons,
    permitted: LangSet,
}

impl Tagger {
    /// Tagger over the built-in lexicons, permitting every supported language.
    pub fn builtin() -> Self {
        Tagger { lexicons: Lexicons::builtin(), permitted: LangSet::all() }
    }

    pub fn new(lexicons: Lexicons, permitted: LangSet) -> Self {
        Tagger { lexicons, permitted }
    }

    pub fn with_permitted(mut self, permitted: LangSet) -> Self {
        self.permitted = permitted;
        self
    }

    /// Tag a single token.
    pub fn tag_token(&self, token: &str) -> Tag {
        let script = match token.chars().find_map(|c| {
            let s = classify_char(c);
            (s != Script::Inherited).then_some(s)
        }) {
            Some(s) => s,
            None => return Tag::Undefined,
        };
        let candidates = script.candidates();
        match candidates {
            [] => Tag::Undefined,
            [single] => {
                if self.permitted.contains(*single) {
                    Tag::Lang(*single)
                } else {
                    Tag::Undefined
                }
            }
            _ => self.lookup(token, candidates),
        }
    }

    fn lookup(&self, token: &str, candidates: &[Lang]) -> Tag {
        let entries = match self.lexicons.entries(token) {
            Some(e) => e,
            None => return Tag::Undefined,
        };
        let mut best: Option<(Lang, u32)> = None;
        for &(lang, freq) in entries {
            if !self.permitted.contains(lang) || !candidates.contains(&lang) {
                continue;
            }
            best = match best {
                None => Some((lang, freq)),
                Some((bl, bf)) => {
                    if freq > bf || (freq == bf && lang.code() < bl.code()) {
                        Some((lang, freq))
                    } else {
                        Some((bl, bf))
                    }
                }
            };
        }
        match best {
            Some((lang, _)) => Tag::Lang(lang),
            None => Tag::Undefined,
        }
    }

    /// Tag every token of an instance. The result is aligned 1:1 with
    /// `instance.tokens`.
    pub fn tag_instance(&self, instance: &Instance) -> TagSequence {
        let tags = instance
            .token_texts()
            .map(|tok| self.tag_token(tok))
            .collect();
        TagSequence { instance_id: instance.id.clone(), tags }
    }

    /// Tag a span-sliced list of token texts.
    pub fn tag_tokens<'a>(&self, tokens: impl Iterator<Item = &'a str>) -> Vec<Tag> {
        tokens.map(|t| self.tag_token(t)).collect()
    }

    /// Sequence-level identification: majority vote over defined token tags.
    ///
    /// Returns `Tag::Undefined` when no token resolves or when the top
    /// language holds less than 60% of the defined tags.
    pub fn identify_sequence(&self, text: &str) -> Tag {
        let tokenizer = crate::corpus::DefaultTokenizer;
        let spans = match crate::corpus::Tokenizer::tokenize(&tokenizer, text) {
            Ok(s) => s,
            Err(_) => return Tag::Undefined,
        };
        let mut counts = [0usize; Lang::COUNT];
        let mut defined = 0usize;
        for span in &spans {
            if let Tag::Lang(l) = self.tag_token(&text[span.range()]) {
                counts[l.index()] += 1;
                defined += 1;
            }
        }
        if defined == 0 {
            return Tag::Undefined;
        }
        let (mut top, mut top_count) = (Lang::ALL[0], 0usize);
        for lang in Lang::ALL {
            if counts[lang.index()] > top_count {
                top = lang;
                top_count = counts[lang.index()];
            }
        }
        if top_count * 5 >= defined * 3 {
            Tag::Lang(top)
        } else {
            Tag::Undefined
        }
    }
}

/// Sequence-level language identification, used by the pair filters.
pub trait SequenceLid: Send + Sync {
    fn identify(&self, text: &str) -> Tag;
}

impl SequenceLid for Tagger {
    fn identify(&self, text: &str) -> Tag {
        self.identify_sequence(text)
    }
}
