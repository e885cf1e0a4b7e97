//! Sentence splitting.
//!
//! A lightweight rule-based breaker: `.`, `!`, `?` and `;` end a sentence
//! when followed by whitespace (closing quotes and brackets may intervene),
//! the CJK full stops `。`, `！`, `？` end one unconditionally, and any
//! newline is a hard break. A trailing period after a known abbreviation or
//! a single-letter initial does not split. Text without a terminator is one
//! sentence. Colons never split, so inline labels like `French:` stay glued
//! to the sentence they introduce.

use std::collections::HashSet;

use crate::corpus::Span;
use crate::langid::Lang;

pub struct SentenceSplitter {
    abbreviations: HashSet<String>,
}

fn is_closing(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '}' | '»' | '”' | '’' | '」' | '』')
}

impl SentenceSplitter {
    pub fn new(abbreviations: impl IntoIterator<Item = String>) -> Self {
        SentenceSplitter {
            abbreviations: abbreviations
                .into_iter()
                .map(|a| a.trim().to_lowercase())
                .filter(|a| !a.is_empty())
                .collect(),
        }
    }

    /// Splitter with the shipped abbreviation list.
    pub fn builtin() -> Self {
        let data = include_str!("../../data/abbreviations.txt");
        Self::new(
            data.lines()
                .map(|l| l.trim())
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from),
        )
    }

    fn is_abbreviation(&self, chars: &[(usize, char)], dot: usize) -> bool {
        let mut j = dot;
        while j > 0 && (chars[j - 1].1.is_alphanumeric() || chars[j - 1].1 == '.') {
            j -= 1;
        }
        if j == dot {
            return false;
        }
        let word: String = chars[j..dot].iter().map(|&(_, c)| c).collect();
        if word.chars().count() == 1 && word.chars().next().unwrap().is_alphabetic() {
            return true;
        }
        self.abbreviations.contains(&word.to_lowercase())
    }

    /// Byte spans of the sentences of `text`, in order, trimmed, non-empty.
    /// The optional language hint disables abbreviation handling for CJK
    /// text, where the list does not apply.
    pub fn split(&self, text: &str, language: Option<Lang>) -> Vec<Span> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let n = chars.len();
        let check_abbrev = language.map_or(true, |l| !l.is_cjk());
        let mut spans = Vec::new();
        let mut start: Option<usize> = None;

        let emit = |spans: &mut Vec<Span>, from: usize, to: usize| {
            let mut end = to;
            while end > from && chars[end - 1].1.is_whitespace() {
                end -= 1;
            }
            if end > from {
                let lo = chars[from].0;
                let last = chars[end - 1];
                spans.push(Span::new(lo, last.0 + last.1.len_utf8()));
            }
        };

        let mut i = 0usize;
        while i < n {
            let c = chars[i].1;
            if start.is_none() {
                if c.is_whitespace() {
                    i += 1;
                    continue;
                }
                start = Some(i);
            }
            match c {
                '\n' | '\r' => {
                    if let Some(s) = start.take() {
                        emit(&mut spans, s, i);
                    }
                    i += 1;
                }
                '。' | '！' | '？' => {
                    let mut j = i + 1;
                    while j < n && is_closing(chars[j].1) {
                        j += 1;
                    }
                    if let Some(s) = start.take() {
                        emit(&mut spans, s, j);
                    }
                    i = j;
                }
                '.' | '!' | '?' | ';' => {
                    // A dot inside an ellipsis run never ends a sentence.
                    if c == '.' && i > 0 && chars[i - 1].1 == '.' {
                        i += 1;
                        continue;
                    }
                    if c == '.' && check_abbrev && self.is_abbreviation(&chars, i) {
                        i += 1;
                        continue;
                    }
                    let mut j = i + 1;
                    while j < n && is_closing(chars[j].1) {
                        j += 1;
                    }
                    if j == n || chars[j].1.is_whitespace() {
                        if let Some(s) = start.take() {
                            emit(&mut spans, s, j);
                        }
                        i = j;
                    } else {
                        i += 1;
                    }
                }
                _ => i += 1,
            }
        }
        if let Some(s) = start {
            emit(&mut spans, s, n);
        }
        spans
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts<'a>(text: &'a str, lang: Option<Lang>) -> Vec<&'a str> {
        SentenceSplitter::builtin()
            .split(text, lang)
            .into_iter()
            .map(|s| &text[s.range()])
            .collect()
    }

    #[test]
    fn terminators_need_following_whitespace() {
        assert_eq!(texts("Bonjour. Hello.", None), vec!["Bonjour.", "Hello."]);
        assert_eq!(texts("Pi is 3.14 exactly.", None), vec!["Pi is 3.14 exactly."]);
        assert_eq!(
            texts("One thing; another thing.", None),
            vec!["One thing;", "another thing."]
        );
    }

    #[test]
    fn cjk_terminators_are_unconditional() {
        assert_eq!(texts("你好。世界。", Some(Lang::Zh)), vec!["你好。", "世界。"]);
        assert_eq!(texts("どうも！元気？はい", Some(Lang::Ja)), vec!["どうも！", "元気？", "はい"]);
    }

    #[test]
    fn newlines_always_break() {
        assert_eq!(
            texts("French:\nBonjour le monde\nEnglish:\nHello world", None),
            vec!["French:", "Bonjour le monde", "English:", "Hello world"]
        );
        assert_eq!(texts("a b\r\nc d", None), vec!["a b", "c d"]);
    }

    #[test]
    fn colon_does_not_break() {
        assert_eq!(
            texts("French: Bonjour le monde. English: Hello world.", None),
            vec!["French: Bonjour le monde.", "English: Hello world."]
        );
    }

    #[test]
    fn abbreviations_and_initials_do_not_break() {
        assert_eq!(
            texts("Dr. Smith met J. K. Rowling. They talked.", None),
            vec!["Dr. Smith met J. K. Rowling.", "They talked."]
        );
        assert_eq!(
            texts("Nouns, verbs, etc. are words. True.", None),
            vec!["Nouns, verbs, etc. are words.", "True."]
        );
        assert_eq!(
            texts("Use markers, e.g. arrows. Fine.", None),
            vec!["Use markers, e.g. arrows.", "Fine."]
        );
    }

    #[test]
    fn closing_quotes_attach_to_the_sentence() {
        assert_eq!(
            texts("She said \"stop.\" He did.", None),
            vec!["She said \"stop.\"", "He did."]
        );
        assert_eq!(texts("(Wait!) Sure.", None), vec!["(Wait!)", "Sure."]);
    }

    #[test]
    fn ellipsis_stays_whole() {
        assert_eq!(texts("Well... maybe. Yes.", None), vec!["Well... maybe.", "Yes."]);
    }

    #[test]
    fn untterminated_tail_is_one_sentence() {
        assert_eq!(texts("no terminator here", None), vec!["no terminator here"]);
        assert_eq!(texts("", None), Vec::<&str>::new());
        assert_eq!(texts("   \n  ", None), Vec::<&str>::new());
    }

    #[test]
    fn hand_labeled_fixture_paragraph() {
        let text = "Prof. Lane arrived at 9 a.m. with Dr. Wu; they reviewed fig. 3 \
                    and eq. 7 carefully. \"Done?\" she asked. Vol. 2 (pp. 10-12) was \
                    next... then lunch.\nA new paragraph starts here.";
        assert_eq!(
            texts(text, Some(Lang::En)),
            vec![
                "Prof. Lane arrived at 9 a.m. with Dr. Wu;",
                "they reviewed fig. 3 and eq. 7 carefully.",
                "\"Done?\"",
                "she asked.",
                "Vol. 2 (pp. 10-12) was next... then lunch.",
                "A new paragraph starts here.",
            ]
        );
    }

    #[test]
    fn spans_are_ordered_and_non_overlapping() {
        let text = "One. Two! Three? 四。 Five";
        let spans = SentenceSplitter::builtin().split(text, None);
        for w in spans.windows(2) {
            assert!(w[0].end <= w[1].start);
        }
        assert_eq!(spans.len(), 5);
    }
}
