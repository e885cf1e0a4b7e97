use std::collections::HashMap;
use std::path::Path;

use thiserror::Error;

use super::Lang;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("failed to read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed lexicon entry {entry:?}")]
    Malformed { path: String, line: usize, entry: String },
    #[error("lexicon file {path} does not match any supported language code")]
    UnknownLanguage { path: String },
}

/// Frequency lexicons for the languages whose script is shared.
///
/// Entries are stored in one merged map from lowercase token to the languages
/// listing it, so tagging costs a single lookup per token.
pub struct Lexicons {
    entries: HashMap<Box<str>, Vec<(Lang, u32)>>,
}

/// Languages that ship a built-in lexicon: every language written in one of
/// the shared scripts (Latin, Cyrillic, Arabic, Devanagari).
pub const LEXICON_LANGS: [Lang; 26] = [
    Lang::En, Lang::Fr, Lang::De, Lang::Es, Lang::It, Lang::Pt, Lang::Id,
    Lang::Vi, Lang::Ru, Lang::Uk, Lang::Bg, Lang::Sr, Lang::Mk, Lang::Be,
    Lang::Kk, Lang::Ky, Lang::Tg, Lang::Mn, Lang::Ar, Lang::Fa, Lang::Ps,
    Lang::Ur, Lang::Sd, Lang::Hi, Lang::Mr, Lang::Ne,
];

macro_rules! builtin_lexicons {
    ($(($lang:ident, $file:literal)),+ $(,)?) => {
        &[$((Lang::$lang, include_str!(concat!("../../data/lexicons/", $file)))),+]
    };
}

const BUILTIN: &[(Lang, &str)] = builtin_lexicons![
    (En, "en.txt"), (Fr, "fr.txt"), (De, "de.txt"), (Es, "es.txt"),
    (It, "it.txt"), (Pt, "pt.txt"), (Id, "id.txt"), (Vi, "vi.txt"),
    (Ru, "ru.txt"), (Uk, "uk.txt"), (Bg, "bg.txt"), (Sr, "sr.txt"),
    (Mk, "mk.txt"), (Be, "be.txt"), (Kk, "kk.txt"), (Ky, "ky.txt"),
    (Tg, "tg.txt"), (Mn, "mn.txt"), (Ar, "ar.txt"), (Fa, "fa.txt"),
    (Ps, "ps.txt"), (Ur, "ur.txt"), (Sd, "sd.txt"), (Hi, "hi.txt"),
    (Mr, "mr.txt"), (Ne, "ne.txt"),
];

impl Lexicons {
    /// The lexicons compiled into the binary.
    pub fn builtin() -> Self {
        let mut lex = Lexicons { entries: HashMap::new() };
        for (lang, text) in BUILTIN {
            lex.ingest(*lang, text, &format!("builtin:{}", lang.code()))
                .expect("built-in lexicons are well-formed");
        }
        lex
    }

    /// Load every `<code>.txt` file in a directory.
    pub fn from_dir(dir: &Path) -> Result<Self, LexiconError> {
        let mut lex = Lexicons { entries: HashMap::new() };
        let read_dir = std::fs::read_dir(dir).map_err(|source| LexiconError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let mut paths: Vec<_> = read_dir
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "txt"))
            .collect();
        paths.sort();
        for path in paths {
            let display = path.display().to_string();
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
            let lang = Lang::from_code(stem)
                .ok_or_else(|| LexiconError::UnknownLanguage { path: display.clone() })?;
            let text = std::fs::read_to_string(&path)
                .map_err(|source| LexiconError::Io { path: display.clone(), source })?;
            lex.ingest(lang, &text, &display)?;
        }
        Ok(lex)
    }

    fn ingest(&mut self, lang: Lang, text: &str, path: &str) -> Result<(), LexiconError> {
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (token, freq) = line
                .split_once('\t')
                .or_else(|| line.rsplit_once(' '))
                .ok_or_else(|| LexiconError::Malformed {
                    path: path.to_string(),
                    line: idx + 1,
                    entry: line.to_string(),
                })?;
            let freq: u32 = freq.trim().parse().map_err(|_| LexiconError::Malformed {
                path: path.to_string(),
                line: idx + 1,
                entry: line.to_string(),
            })?;
            let token = token.trim().to_lowercase();
            self.entries
                .entry(token.into_boxed_str())
                .or_default()
                .push((lang, freq));
        }
        Ok(())
    }

    /// Look up the languages listing a token. Uppercase tokens are folded.
    pub fn entries(&self, token: &str) -> Option<&[(Lang, u32)]> {
        if let Some(e) = self.entries.get(token) {
            return Some(e.as_slice());
        }
        if token.chars().any(char::is_uppercase) {
            let folded = token.to_lowercase();
            return self.entries.get(folded.as_str()).map(|e| e.as_slice());
        }
        None
    }

    /// Tokens listed for one language, used by fixtures and tests.
    pub fn tokens_for(&self, lang: Lang) -> Vec<&str> {
        let mut toks: Vec<&str> = self
            .entries
            .iter()
            .filter(|(_, langs)| langs.iter().any(|(l, _)| *l == lang))
            .map(|(tok, _)| tok.as_ref())
            .collect();
        toks.sort();
        toks
    }
}
