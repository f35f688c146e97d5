//! Message records and the corpus file format.
//!
//! A corpus file is UTF-8 text. The first line may be the header
//! `#wording-corpus v1`; other lines starting with `#` and blank lines are
//! ignored. Every remaining line is one record made of TAB-separated
//! `key=value` fields:
//!
//! | key              | value                                   |
//! |------------------|-----------------------------------------|
//! | `id`             | unique message id                       |
//! | `author_id`      | author id                               |
//! | `timestamp`      | integer seconds since the Unix epoch    |
//! | `retweet_count`  | non-negative integer                    |
//! | `follower_count` | non-negative integer                    |
//! | `is_retweet`     | `true`/`false`/`1`/`0` (optional, false) |
//! | `text`           | message text                            |
//!
//! Values escape TAB, newline, carriage return and backslash as `\t`, `\n`,
//! `\r` and `\\`. Field order is free; unknown or repeated keys make the line
//! malformed. Records repeating an earlier id are dropped and counted.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::{extract_urls, tokenize};

pub const CORPUS_SCHEMA: &str = "v1";
pub const CORPUS_HEADER: &str = "#wording-corpus v1";

/// Fraction of malformed records above which ingest fails.
pub const MAX_MALFORMED_FRACTION: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub id: String,
    pub author_id: String,
    pub timestamp: i64,
    pub text: String,
    pub retweet_count: u64,
    pub follower_count: u64,
    pub is_retweet: bool,
    pub urls: Vec<String>,
}

impl Message {
    pub fn new(
        id: impl Into<String>,
        author_id: impl Into<String>,
        timestamp: i64,
        text: impl Into<String>,
        retweet_count: u64,
        follower_count: u64,
        is_retweet: bool,
    ) -> Message {
        let text = text.into();
        let urls = extract_urls(&tokenize(&text));
        Message {
            id: id.into(),
            author_id: author_id.into(),
            timestamp,
            text,
            retweet_count,
            follower_count,
            is_retweet,
            urls,
        }
    }

    /// Flagged as a retweet or written in the manual `RT @user` style.
    pub fn is_retweet_like(&self) -> bool {
        self.is_retweet || self.text.starts_with("RT @")
    }

    /// Replies start by addressing another user.
    pub fn is_reply(&self) -> bool {
        self.text.trim_start().starts_with('@')
    }
}

/// Messages read from a corpus file plus ingest diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub messages: Vec<Message>,
    pub malformed: usize,
    pub duplicates: usize,
    /// Line number and reason for each malformed record.
    pub malformed_lines: Vec<(usize, String)>,
}

impl Corpus {
    pub fn from_messages(messages: Vec<Message>) -> Corpus {
        let mut seen = HashSet::new();
        let mut duplicates = 0;
        let mut kept = Vec::with_capacity(messages.len());
        for m in messages {
            if seen.insert(m.id.clone()) {
                kept.push(m);
            } else {
                duplicates += 1;
            }
        }
        Corpus {
            messages: kept,
            duplicates,
            ..Corpus::default()
        }
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }
}

/// Read and validate a corpus file.
pub fn ingest(path: impl AsRef<Path>, schema: &str) -> Result<Corpus> {
    let path = path.as_ref();
    if schema != CORPUS_SCHEMA {
        return Err(Error::Schema(schema.to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text).map_err(|e| match e {
        Error::TooManyMalformed {
            malformed,
            total,
            first_line,
            first_reason,
            ..
        } => Error::TooManyMalformed {
            path: path.to_path_buf(),
            malformed,
            total,
            first_line,
            first_reason,
        },
        other => other,
    })
}

/// Parse corpus text. See the module docs for the format.
pub fn parse_corpus(text: &str) -> Result<Corpus> {
    let mut messages = Vec::new();
    let mut malformed_lines = Vec::new();
    let mut total = 0usize;
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        total += 1;
        match parse_record(line) {
            Ok(m) => messages.push(m),
            Err(reason) => malformed_lines.push((i + 1, reason)),
        }
    }
    if total > 0 && malformed_lines.len() as f64 > MAX_MALFORMED_FRACTION * total as f64 {
        let (first_line, first_reason) = malformed_lines[0].clone();
        return Err(Error::TooManyMalformed {
            path: "<memory>".into(),
            malformed: malformed_lines.len(),
            total,
            first_line,
            first_reason,
        });
    }
    let mut corpus = Corpus::from_messages(messages);
    corpus.malformed = malformed_lines.len();
    corpus.malformed_lines = malformed_lines;
    Ok(corpus)
}

fn parse_record(line: &str) -> std::result::Result<Message, String> {
    let mut id = None;
    let mut author = None;
    let mut ts = None;
    let mut rt = None;
    let mut followers = None;
    let mut is_rt = None;
    let mut text = None;
    for field in line.split('\t') {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| format!("field {field:?} is not key=value"))?;
        let v = unescape(v)?;
        let slot = match k {
            "id" => &mut id,
            "author_id" => &mut author,
            "timestamp" => &mut ts,
            "retweet_count" => &mut rt,
            "follower_count" => &mut followers,
            "is_retweet" => &mut is_rt,
            "text" => &mut text,
            _ => return Err(format!("unknown key {k:?}")),
        };
        if slot.replace(v).is_some() {
            return Err(format!("repeated key {k:?}"));
        }
    }
    let id = id.filter(|s| !s.is_empty()).ok_or("missing id")?;
    let author = author.filter(|s| !s.is_empty()).ok_or("missing author_id")?;
    let ts: i64 = ts
        .ok_or("missing timestamp")?
        .parse()
        .map_err(|_| "timestamp is not an integer")?;
    let rt: u64 = rt
        .ok_or("missing retweet_count")?
        .parse()
        .map_err(|_| "retweet_count is not a non-negative integer")?;
    let followers: u64 = followers
        .ok_or("missing follower_count")?
        .parse()
        .map_err(|_| "follower_count is not a non-negative integer")?;
    let is_rt = match is_rt.as_deref() {
        None | Some("false") | Some("0") => false,
        Some("true") | Some("1") => true,
        Some(other) => return Err(format!("is_retweet {other:?} is not a boolean")),
    };
    let text = text.ok_or("missing text")?;
    Ok(Message::new(id, author, ts, text, rt, followers, is_rt))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            _ => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(o) => return Err(format!("bad escape \\{o}")),
            None => return Err("dangling backslash".to_string()),
        }
    }
    Ok(out)
}

pub fn format_record(m: &Message) -> String {
    format!(
        "id={}\tauthor_id={}\ttimestamp={}\tretweet_count={}\tfollower_count={}\tis_retweet={}\ttext={}",
        escape(&m.id),
        escape(&m.author_id),
        m.timestamp,
        m.retweet_count,
        m.follower_count,
        m.is_retweet,
        escape(&m.text)
    )
}

/// Serialize messages, header first.
pub fn format_corpus<'a>(messages: impl IntoIterator<Item = &'a Message>) -> String {
    let mut s = String::from(CORPUS_HEADER);
    s.push('\n');
    for m in messages {
        s.push_str(&format_record(m));
        s.push('\n');
    }
    s
}

pub fn save_corpus<'a>(
    path: impl AsRef<Path>,
    messages: impl IntoIterator<Item = &'a Message>,
) -> Result<()> {
    crate::io::write_atomic(path, format_corpus(messages).as_bytes())
}
