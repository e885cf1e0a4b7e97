use super::Lang;

/// Unicode script buckets relevant to the supported languages.
///
/// `Inherited` covers combining marks and joiners that extend whatever token
/// they appear in without deciding its script; `Other` is everything the
/// toolkit does not recognize (punctuation, symbols, unsupported scripts).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Script {
    Latin,
    Greek,
    Cyrillic,
    Armenian,
    Hebrew,
    Arabic,
    Devanagari,
    Bengali,
    Gurmukhi,
    Gujarati,
    Tamil,
    Telugu,
    Kannada,
    Malayalam,
    Thai,
    Lao,
    Myanmar,
    Georgian,
    Ethiopic,
    Khmer,
    Han,
    Hiragana,
    Katakana,
    Hangul,
    Digit,
    Inherited,
    Other,
}

impl Script {
    /// Languages that may be written in this script. A single-candidate
    /// script resolves a token directly; shared scripts defer to lexicons.
    pub fn candidates(self) -> &'static [Lang] {
        match self {
            Script::Latin => &[
                Lang::En, Lang::Fr, Lang::De, Lang::Es, Lang::It, Lang::Pt,
                Lang::Id, Lang::Vi,
            ],
            Script::Cyrillic => &[
                Lang::Ru, Lang::Uk, Lang::Bg, Lang::Sr, Lang::Mk, Lang::Be,
                Lang::Kk, Lang::Ky, Lang::Tg, Lang::Mn,
            ],
            Script::Arabic => &[Lang::Ar, Lang::Fa, Lang::Ps, Lang::Ur, Lang::Sd],
            Script::Devanagari => &[Lang::Hi, Lang::Mr, Lang::Ne],
            Script::Greek => &[Lang::El],
            Script::Armenian => &[Lang::Hy],
            Script::Hebrew => &[Lang::Iw],
            Script::Bengali => &[Lang::Bn],
            Script::Gurmukhi => &[Lang::Pa],
            Script::Gujarati => &[Lang::Gu],
            Script::Tamil => &[Lang::Ta],
            Script::Telugu => &[Lang::Te],
            Script::Kannada => &[Lang::Kn],
            Script::Malayalam => &[Lang::Ml],
            Script::Thai => &[Lang::Th],
            Script::Lao => &[Lang::Lo],
            Script::Myanmar => &[Lang::My],
            Script::Georgian => &[Lang::Ka],
            Script::Ethiopic => &[Lang::Am],
            Script::Khmer => &[Lang::Km],
            Script::Han => &[Lang::Zh],
            Script::Hiragana | Script::Katakana => &[Lang::Ja],
            Script::Hangul => &[Lang::Ko],
            Script::Digit | Script::Inherited | Script::Other => &[],
        }
    }

    /// CJK scripts tokenize one character per token.
    pub fn is_cjk(self) -> bool {
        matches!(
            self,
            Script::Han | Script::Hiragana | Script::Katakana | Script::Hangul
        )
    }
}

/// Classify a single character by Unicode block.
pub fn classify_char(c: char) -> Script {
    match c as u32 {
        0x0030..=0x0039 => Script::Digit,
        0x0041..=0x005A | 0x0061..=0x007A => Script::Latin,
        0x00C0..=0x00FF if c.is_alphabetic() => Script::Latin,
        0x0100..=0x024F => Script::Latin,
        0x0300..=0x036F => Script::Inherited,
        0x0370..=0x03FF | 0x1F00..=0x1FFF => Script::Greek,
        0x0400..=0x04FF | 0x0500..=0x052F => Script::Cyrillic,
        0x0530..=0x058F => Script::Armenian,
        0x0590..=0x05FF => Script::Hebrew,
        0x0600..=0x06FF | 0x0750..=0x077F | 0x08A0..=0x08FF => Script::Arabic,
        0xFB50..=0xFDFF | 0xFE70..=0xFEFF => Script::Arabic,
        0x0900..=0x097F => Script::Devanagari,
        0x0980..=0x09FF => Script::Bengali,
        0x0A00..=0x0A7F => Script::Gurmukhi,
        0x0A80..=0x0AFF => Script::Gujarati,
        0x0B80..=0x0BFF => Script::Tamil,
        0x0C00..=0x0C7F => Script::Telugu,
        0x0C80..=0x0CFF => Script::Kannada,
        0x0D00..=0x0D7F => Script::Malayalam,
        0x0E00..=0x0E7F => Script::Thai,
        0x0E80..=0x0EFF => Script::Lao,
        0x1000..=0x109F => Script::Myanmar,
        0x10A0..=0x10FF | 0x1C90..=0x1CBF => Script::Georgian,
        0x1200..=0x137F => Script::Ethiopic,
        0x1780..=0x17FF => Script::Khmer,
        0x1E00..=0x1EFF => Script::Latin,
        0x200C..=0x200D => Script::Inherited,
        0x3040..=0x309F => Script::Hiragana,
        0x30A0..=0x30FF | 0x31F0..=0x31FF => Script::Katakana,
        0x3400..=0x4DBF | 0x4E00..=0x9FFF | 0xF900..=0xFAFF => Script::Han,
        0x1100..=0x11FF | 0x3130..=0x318F | 0xAC00..=0xD7AF => Script::Hangul,
        _ => Script::Other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_classification() {
        assert_eq!(classify_char('a'), Script::Latin);
        assert_eq!(classify_char('Z'), Script::Latin);
        assert_eq!(classify_char('7'), Script::Digit);
        assert_eq!(classify_char(' '), Script::Other);
        assert_eq!(classify_char('.'), Script::Other);
        assert_eq!(classify_char(':'), Script::Other);
    }

    #[test]
    fn accented_latin_is_latin() {
        for c in "éàçñöüßướệ".chars() {
            assert_eq!(classify_char(c), Script::Latin, "{c:?}");
        }
        // U+00D7 multiplication sign sits in the Latin-1 block but is not a letter.
        assert_eq!(classify_char('×'), Script::Other);
    }

    #[test]
    fn major_scripts() {
        assert_eq!(classify_char('я'), Script::Cyrillic);
        assert_eq!(classify_char('ќ'), Script::Cyrillic);
        assert_eq!(classify_char('ω'), Script::Greek);
        assert_eq!(classify_char('ش'), Script::Arabic);
        assert_eq!(classify_char('ک'), Script::Arabic);
        assert_eq!(classify_char('ہ'), Script::Arabic);
        assert_eq!(classify_char('ڻ'), Script::Arabic);
        assert_eq!(classify_char('א'), Script::Hebrew);
        assert_eq!(classify_char('ա'), Script::Armenian);
        assert_eq!(classify_char('ქ'), Script::Georgian);
        assert_eq!(classify_char('ह'), Script::Devanagari);
        assert_eq!(classify_char('া'), Script::Bengali);
        assert_eq!(classify_char('ਪ'), Script::Gurmukhi);
        assert_eq!(classify_char('ગ'), Script::Gujarati);
        assert_eq!(classify_char('த'), Script::Tamil);
        assert_eq!(classify_char("తెలుగు".chars().next().unwrap()), Script::Telugu);
        assert_eq!(classify_char('ಕ'), Script::Kannada);
        assert_eq!(classify_char('മ'), Script::Malayalam);
        assert_eq!(classify_char('ไ'), Script::Thai);
        assert_eq!(classify_char('ລ'), Script::Lao);
        assert_eq!(classify_char('မ'), Script::Myanmar);
        assert_eq!(classify_char('አ'), Script::Ethiopic);
        assert_eq!(classify_char('ក'), Script::Khmer);
    }

    #[test]
    fn cjk_scripts() {
        assert_eq!(classify_char('漢'), Script::Han);
        assert_eq!(classify_char('ひ'), Script::Hiragana);
        assert_eq!(classify_char('カ'), Script::Katakana);
        assert_eq!(classify_char('한'), Script::Hangul);
        assert!(classify_char('漢').is_cjk());
        assert!(!classify_char('a').is_cjk());
        // CJK punctuation is not a word character.
        assert_eq!(classify_char('。'), Script::Other);
        assert_eq!(classify_char('、'), Script::Other);
    }

    #[test]
    fn single_candidate_scripts_cover_exactly_one_language() {
        for script in [
            Script::Greek, Script::Armenian, Script::Hebrew, Script::Bengali,
            Script::Gurmukhi, Script::Gujarati, Script::Tamil, Script::Telugu,
            Script::Kannada, Script::Malayalam, Script::Thai, Script::Lao,
            Script::Myanmar, Script::Georgian, Script::Ethiopic, Script::Khmer,
            Script::Han, Script::Hiragana, Script::Katakana, Script::Hangul,
        ] {
            assert_eq!(script.candidates().len(), 1, "{script:?}");
        }
        assert_eq!(Script::Latin.candidates().len(), 8);
        assert_eq!(Script::Cyrillic.candidates().len(), 10);
        assert_eq!(Script::Arabic.candidates().len(), 5);
        assert_eq!(Script::Devanagari.candidates().len(), 3);
        assert!(Script::Other.candidates().is_empty());
    }

    #[test]
    fn every_language_reachable_from_some_script() {
        let mut seen = std::collections::BTreeSet::new();
        for script in [
            Script::Latin, Script::Greek, Script::Cyrillic, Script::Armenian,
            Script::Hebrew, Script::Arabic, Script::Devanagari, Script::Bengali,
            Script::Gurmukhi, Script::Gujarati, Script::Tamil, Script::Telugu,
            Script::Kannada, Script::Malayalam, Script::Thai, Script::Lao,
            Script::Myanmar, Script::Georgian, Script::Ethiopic, Script::Khmer,
            Script::Han, Script::Hiragana, Script::Katakana, Script::Hangul,
        ] {
            seen.extend(script.candidates().iter().copied());
        }
        assert_eq!(seen.len(), Lang::COUNT);
    }
}
