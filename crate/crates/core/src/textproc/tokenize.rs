//! Tweet tokenizer.
//!
//! Recognition order at each position: placeholder literal (`[url]`,
//! `[hashtag]`, `[at]`, `[num]`), URL, @-mention, hashtag, emoticon,
//! number, word, punctuation run, any other single character.
//!
//! * URL: `https?://` or `www.` followed by non-space characters; trailing
//!   `.,;:!?)]}'"` are given back to the stream.
//! * mention: `@[A-Za-z0-9_]+`; hashtag: `#` followed by letters, digits or `_`.
//! * number: `\d+([.,:/]\d+)*(st|nd|rd|th)?` not followed by a letter or digit.
//!   Spelled-out numbers are ordinary words.
//! * word: letters/digits/underscore, joined by internal apostrophes or hyphens.
//! * punctuation: a run of one repeated character (`!!!`, `...`) is one token.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::Tag;

pub const URL_NORM: &str = "[url]";
pub const HASHTAG_NORM: &str = "[hashtag]";
pub const MENTION_NORM: &str = "[at]";
pub const NUMBER_NORM: &str = "[num]";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Url,
    Mention,
    Hashtag,
    Number,
    Emoticon,
    Word,
    Punctuation,
    Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub norm: String,
    pub kind: TokenKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<Tag>,
}

impl Token {
    fn new(surface: &str, kind: TokenKind) -> Token {
        let norm = match kind {
            TokenKind::Url => URL_NORM.to_string(),
            TokenKind::Mention => MENTION_NORM.to_string(),
            TokenKind::Hashtag => HASHTAG_NORM.to_string(),
            TokenKind::Number => NUMBER_NORM.to_string(),
            _ if surface.bytes().any(|b| b.is_ascii_uppercase() || b >= 0x80) => surface.to_lowercase(),
            _ => surface.to_string(),
        };
        Token {
            surface: surface.to_string(),
            norm,
            kind,
            tag: None,
        }
    }

    /// True for tokens normalized to one of the four placeholders.
    pub fn is_placeholder(&self) -> bool {
        matches!(
            self.kind,
            TokenKind::Url | TokenKind::Mention | TokenKind::Hashtag | TokenKind::Number
        )
    }

    /// A URL span from the original text (not a literal `[url]`).
    pub fn is_real_url(&self) -> bool {
        self.kind == TokenKind::Url && self.surface != URL_NORM
    }

    /// Tag forced regardless of the tagger model, if any.
    pub fn forced_tag(&self) -> Option<Tag> {
        match self.kind {
            TokenKind::Url => Some(Tag::Url),
            TokenKind::Hashtag => Some(Tag::Hashtag),
            TokenKind::Mention => Some(Tag::Mention),
            _ => None,
        }
    }
}

struct Patterns {
    placeholder: Regex,
    url: Regex,
    mention: Regex,
    hashtag: Regex,
    emoticon: Regex,
    number: Regex,
    word: Regex,
}

fn patterns() -> &'static Patterns {
    static P: OnceLock<Patterns> = OnceLock::new();
    P.get_or_init(|| Patterns {
        placeholder: Regex::new(r"^\[(?:url|hashtag|at|num)\]").unwrap(),
        url: Regex::new(r"^(?i:https?://|www\.)\S+").unwrap(),
        mention: Regex::new(r"^@[A-Za-z0-9_]+").unwrap(),
        hashtag: Regex::new(r"^#[\p{L}\p{N}_]+").unwrap(),
        emoticon: Regex::new(r"^(?i:<3|\^_\^|-_-|:'\(|[:;=8][\-o\*']?[\)\]\(\[dp/\\|3])").unwrap(),
        number: Regex::new(r"^\d+(?:[.,:/]\d+)*(?:st|nd|rd|th)?").unwrap(),
        word: Regex::new(r"^[\p{L}\p{N}_]+(?:['’\-][\p{L}\p{N}_]+)*").unwrap(),
    })
}

/// Characters that can begin an emoticon.
const EMOTICON_START: &str = "<^-:;=8";

const URL_TRAILING: &[char] = &['.', ',', ';', ':', '!', '?', ')', ']', '}', '\'', '"'];

/// Split `text` into untagged tokens.
pub fn tokenize(text: &str) -> Vec<Token> {
    split(text, true)
}

fn split(text: &str, fast: bool) -> Vec<Token> {
    let p = patterns();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < text.len() {
        let rest = &text[pos..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        let scanned = if fast && c.is_ascii() { scan_ascii(rest) } else { None };
        let (len, kind) = scanned.unwrap_or_else(|| match_regex(p, rest, c));
        out.push(Token::new(&rest[..len], kind));
        pos += len;
    }
    out
}

fn match_regex(p: &Patterns, rest: &str, c: char) -> (usize, TokenKind) {
    let try_re = |re: &Regex, first: bool| if first { re.find(rest) } else { None };
    if let Some(m) = try_re(&p.placeholder, c == '[') {
        (m.end(), placeholder_kind(m.as_str()))
    } else if let Some(m) = try_re(&p.url, matches!(c, 'h' | 'H' | 'w' | 'W')) {
        let trimmed = m.as_str().trim_end_matches(URL_TRAILING);
        (trimmed.len().max(1), TokenKind::Url)
    } else if let Some(m) = try_re(&p.mention, c == '@') {
        (m.end(), TokenKind::Mention)
    } else if let Some(m) = try_re(&p.hashtag, c == '#') {
        (m.end(), TokenKind::Hashtag)
    } else if let Some(m) = try_re(&p.emoticon, EMOTICON_START.contains(c)) {
        (m.end(), TokenKind::Emoticon)
    } else if let Some(m) = if c.is_ascii_digit() { number_match(p, rest) } else { None } {
        (m, TokenKind::Number)
    } else if let Some(m) = try_re(&p.word, c.is_alphanumeric() || c == '_') {
        (m.end(), TokenKind::Word)
    } else {
        punct_or_symbol(rest, c)
    }
}

fn placeholder_kind(s: &str) -> TokenKind {
    match s {
        URL_NORM => TokenKind::Url,
        HASHTAG_NORM => TokenKind::Hashtag,
        MENTION_NORM => TokenKind::Mention,
        _ => TokenKind::Number,
    }
}

fn punct_or_symbol(rest: &str, c: char) -> (usize, TokenKind) {
    if is_punct(c) {
        let run = rest.chars().take_while(|&x| x == c).count();
        (run * c.len_utf8(), TokenKind::Punctuation)
    } else {
        (c.len_utf8(), TokenKind::Symbol)
    }
}

/// Hand-written equivalent of the patterns for ASCII input. `None` means a
/// non-ASCII byte influenced the decision and the regexes must settle it.
fn scan_ascii(rest: &str) -> Option<(usize, TokenKind)> {
    let b = rest.as_bytes();
    let at = |i: usize| b.get(i).copied();
    let is_word = |x: u8| x.is_ascii_alphanumeric() || x == b'_';
    // End of a run of `class` bytes from `i`; `None` if it stops on non-ASCII.
    let run = |mut i: usize, class: &dyn Fn(u8) -> bool| -> Option<usize> {
        while let Some(x) = at(i) {
            if class(x) {
                i += 1;
            } else if x >= 0x80 {
                return None;
            } else {
                break;
            }
        }
        Some(i)
    };
    let c = b[0];

    if c == b'[' {
        for ph in [URL_NORM, HASHTAG_NORM, MENTION_NORM, NUMBER_NORM] {
            if rest.starts_with(ph) {
                return Some((ph.len(), placeholder_kind(ph)));
            }
        }
    }
    if matches!(c, b'h' | b'H' | b'w' | b'W') {
        if let Some(prefix) = url_prefix(b)? {
            let body: usize = rest[prefix..]
                .chars()
                .take_while(|ch| !ch.is_whitespace())
                .map(char::len_utf8)
                .sum();
            if body > 0 {
                let m = &rest[..prefix + body];
                let trimmed = m.trim_end_matches(URL_TRAILING);
                return Some((trimmed.len().max(1), TokenKind::Url));
            }
        }
    }
    if c == b'@' {
        let end = rest[1..]
            .bytes()
            .take_while(|&x| is_word(x))
            .count();
        if end > 0 {
            return Some((end + 1, TokenKind::Mention));
        }
    }
    if c == b'#' {
        let end = run(1, &is_word)?;
        if end > 1 {
            return Some((end, TokenKind::Hashtag));
        }
    }
    if EMOTICON_START.as_bytes().contains(&c) {
        if let Some(len) = emoticon(b) {
            return Some((len, TokenKind::Emoticon));
        }
    }
    if c.is_ascii_digit() {
        let mut end = run(0, &|x: u8| x.is_ascii_digit())?;
        while matches!(at(end), Some(b'.' | b',' | b':' | b'/')) {
            match at(end + 1) {
                Some(x) if x.is_ascii_digit() => end = run(end + 1, &|x: u8| x.is_ascii_digit())?,
                Some(x) if x >= 0x80 => return None,
                _ => break,
            }
        }
        if matches!(
            (at(end), at(end + 1)),
            (Some(b's'), Some(b't')) | (Some(b'n'), Some(b'd')) | (Some(b'r'), Some(b'd')) | (Some(b't'), Some(b'h'))
        ) {
            end += 2;
        }
        match at(end) {
            Some(x) if x >= 0x80 => return None,
            Some(x) if is_word(x) => {}
            _ => return Some((end, TokenKind::Number)),
        }
    }
    if is_word(c) {
        let mut end = run(0, &is_word)?;
        while matches!(at(end), Some(b'\'' | b'-')) {
            match at(end + 1) {
                Some(x) if is_word(x) => end = run(end + 1, &is_word)?,
                Some(x) if x >= 0x80 => return None,
                _ => break,
            }
        }
        // A word may continue with the typographic apostrophe.
        if at(end).is_some_and(|x| x >= 0x80) {
            return None;
        }
        return Some((end, TokenKind::Word));
    }
    Some(punct_or_symbol(rest, c as char))
}

/// Length of a `http://`, `https://` or `www.` prefix. The outer `None`
/// defers to the regexes (a non-ASCII byte where case folding could apply).
fn url_prefix(b: &[u8]) -> Option<Option<usize>> {
    for lit in ["https://", "http://", "www."] {
        let mut ok = true;
        for (i, l) in lit.bytes().enumerate() {
            match b.get(i) {
                Some(x) if x.eq_ignore_ascii_case(&l) => {}
                Some(x) if *x >= 0x80 => return None,
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some(Some(lit.len()));
        }
    }
    Some(None)
}

fn emoticon(b: &[u8]) -> Option<usize> {
    let lower = |i: usize| b.get(i).map(u8::to_ascii_lowercase);
    for lit in ["<3", "^_^", "-_-", ":'("] {
        if b.starts_with(lit.as_bytes()) {
            return Some(lit.len());
        }
    }
    if !matches!(b[0], b':' | b';' | b'=' | b'8') {
        return None;
    }
    let mouth = |x: Option<u8>| matches!(x, Some(b')' | b']' | b'(' | b'[' | b'd' | b'p' | b'/' | b'\\' | b'|' | b'3'));
    if matches!(lower(1), Some(b'-' | b'o' | b'*' | b'\'')) && mouth(lower(2)) {
        return Some(3);
    }
    mouth(lower(1)).then_some(2)
}

fn number_match(p: &Patterns, rest: &str) -> Option<usize> {
    let m = p.number.find(rest)?;
    match rest[m.end()..].chars().next() {
        Some(next) if next.is_alphanumeric() || next == '_' => None,
        _ => Some(m.end()),
    }
}

fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '…' | '“' | '”' | '‘' | '’' | '–' | '—' | '«' | '»' | '¡' | '¿' | '•'
        )
}

/// Canonical form used to decide whether two URLs are "the same": scheme and
/// host lowercased, trailing slashes removed. Shortened links are compared
/// verbatim.
pub fn canonical_url(url: &str) -> String {
    let (scheme, rest) = match url.find("://") {
        Some(i) => (url[..i].to_lowercase() + "://", &url[i + 3..]),
        None => (String::new(), url),
    };
    let host_end = rest.find(['/', '?', '#']).unwrap_or(rest.len());
    let mut s = scheme;
    s.push_str(&rest[..host_end].to_lowercase());
    s.push_str(&rest[host_end..]);
    while s.ends_with('/') {
        s.pop();
    }
    s
}

/// Distinct canonical URLs of `text`, in order of first appearance.
pub fn extract_urls(tokens: &[Token]) -> Vec<String> {
    let mut urls: Vec<String> = Vec::new();
    for t in tokens.iter().filter(|t| t.is_real_url()) {
        let c = canonical_url(&t.surface);
        if !urls.contains(&c) {
            urls.push(c);
        }
    }
    urls
}

/// Norms of `tokens`, in order.
pub fn norms(tokens: &[Token]) -> Vec<&str> {
    tokens.iter().map(|t| t.norm.as_str()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn scanner_agrees_with_patterns(s in "([a-zA-Z0-9_ @#:;=8<^()\\[\\]\\-'’.,/!?*|\\\\]|http://|https://|www\\.|HTTP://|ſ|é|ß|١|\\[url\\]|\\[num\\]|3rd|st|nd|th| ){0,40}") {
            prop_assert_eq!(split(&s, true), split(&s, false));
        }
    }

    fn n(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.norm).collect()
    }

    #[test]
    fn request_with_url() {
        assert_eq!(n("Please RT http://t.co/x"), ["please", "rt", "[url]"]);
    }

    #[test]
    fn mention_number_hashtag() {
        assert_eq!(
            n("@ABC wins 40 times #win"),
            ["[at]", "wins", "[num]", "times", "[hashtag]"]
        );
    }

    #[test]
    fn empty_text() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t\n").is_empty());
    }

    #[test]
    fn url_gives_back_trailing_punctuation() {
        let toks = tokenize("see http://ex.com/a.");
        assert_eq!(toks[1].surface, "http://ex.com/a");
        assert_eq!(toks[2].norm, ".");
    }

    #[test]
    fn numbers_versus_words() {
        assert_eq!(n("3rd 1,000 12:30 3.5"), ["[num]"; 4]);
        assert_eq!(n("1990s 3D"), ["1990s", "3d"]);
        assert_eq!(n("forty"), ["forty"]);
    }

    #[test]
    fn punctuation_runs_and_emoticons() {
        assert_eq!(n("wow!!! ok... :) <3"), ["wow", "!!!", "ok", "...", ":)", "<3"]);
        assert_eq!(n("Yes:D"), ["yes", ":d"]);
    }

    #[test]
    fn contractions_and_hyphens_stay_whole() {
        assert_eq!(n("I'm well-known"), ["i'm", "well-known"]);
    }

    #[test]
    fn placeholders_reparse() {
        assert_eq!(n("[url] [at] [hashtag] [num]"), ["[url]", "[at]", "[hashtag]", "[num]"]);
        let t = tokenize("[url]");
        assert!(!t[0].is_real_url());
    }

    #[test]
    fn canonical_url_rules() {
        assert_eq!(canonical_url("HTTP://Example.COM/Path/"), "http://example.com/Path");
        assert_eq!(canonical_url("http://bit.ly/AbC"), "http://bit.ly/AbC");
        assert_eq!(canonical_url("www.X.com//"), "www.x.com");
    }

    #[test]
    fn urls_deduplicated() {
        let toks = tokenize("a http://x.com/ b http://X.com c http://y.com");
        assert_eq!(extract_urls(&toks), ["http://x.com", "http://y.com"]);
    }
}
