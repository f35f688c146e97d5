//! Template grammar producing tagged tweet-like sentences and headlines.
//!
//! Every generated word carries its gold tag, so the same grammar feeds the
//! tagger fixture, the synthetic corpora, and the headline file.

use std::collections::HashSet;
use std::sync::OnceLock;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::textproc::Tag;

pub(crate) type Tagged = Vec<(String, Tag)>;

const NOUNS: &[&str] = &[
    "news", "story", "video", "photo", "report", "game", "team", "season", "album", "song",
    "show", "deal", "plan", "budget", "storm", "market", "school", "book", "film", "interview",
    "recipe", "phone", "app", "price", "job", "study", "vote", "bill", "law", "coach", "city",
    "night", "week", "weekend", "list", "guide", "review", "event", "sale", "update", "trailer",
    "episode", "series", "project", "company", "office", "family", "world", "music", "food",
    "coffee", "water", "health", "money", "life", "home", "car", "road", "weather", "match",
    "race", "win", "love", "watch", "check", "look", "call", "post", "help", "start", "work",
    "play", "share", "gift", "party", "concert", "debate", "speech", "launch", "result",
];

const PLURALS: &[&str] = &[
    "fans", "players", "people", "students", "kids", "tips", "tickets", "photos", "videos",
    "stories", "games", "songs", "deals", "jobs", "results", "votes", "highlights", "details",
    "friends", "teams", "cities", "ideas", "questions", "answers", "days",
];

const VERB_BASE: &[&str] = &[
    "watch", "read", "check", "join", "see", "get", "make", "help", "find", "share", "vote",
    "try", "love", "need", "want", "start", "win", "call", "look", "play", "work", "post",
    "update", "show", "tell", "meet", "hear", "buy", "visit", "follow",
];

const VERB_3SG: &[&str] = &[
    "wins", "launches", "announces", "reveals", "drops", "hits", "opens", "breaks", "takes",
    "gets", "makes", "shows", "says", "needs", "wants", "helps", "finds", "shares", "looks",
    "comes", "goes", "calls", "starts", "loves", "plans", "releases", "signs", "leads",
];

const VERB_PAST: &[&str] = &[
    "won", "launched", "announced", "revealed", "dropped", "hit", "opened", "broke", "took",
    "got", "made", "showed", "said", "found", "shared", "called", "started", "lost",
    "released", "posted", "signed", "played", "watched", "missed", "loved",
];

const VERB_ING: &[&str] = &[
    "watching", "reading", "playing", "working", "getting", "heading", "looking", "waiting",
    "coming", "talking", "voting", "listening",
];

const ADJECTIVES: &[&str] = &[
    "new", "big", "official", "first", "last", "free", "live", "full", "latest", "huge",
    "local", "top", "early", "major", "next", "real", "final", "special", "little", "old",
    "young", "public", "national", "global", "famous", "fresh", "short", "long", "simple",
    "quick", "easy", "hard", "strong", "happy", "great", "good", "bad", "best", "epic",
    "classic", "historic", "iconic", "fantastic", "dramatic", "electric", "magic", "tragic",
    "exclusive", "important", "beautiful", "funny", "crazy",
];

const ADVERBS: &[&str] = &[
    "now", "today", "just", "really", "officially", "finally", "still", "never", "again",
    "soon", "here", "also", "already", "always", "even", "only", "very", "so", "too",
    "tonight", "yesterday", "tomorrow", "right", "back",
];

const PROPER: &[&str] = &[
    "NASA", "Obama", "Apple", "Google", "London", "Texas", "Yankees", "Lakers", "Bieber",
    "Twitter", "Chicago", "Paris", "Congress", "Netflix", "Boston", "Seattle", "Microsoft",
    "Amazon", "CNN", "NBA", "NFL", "Tesla", "Houston", "Brooklyn", "Spotify", "BBC", "ESPN",
    "Disney", "Samsung", "Denver", "Ohio", "Europe", "Friday", "Monday", "November",
];

const PROPER_POSS: &[&str] = &["NASA's", "Apple's", "Google's", "Obama's", "Disney's", "Boston's"];

const NOUN_POSS: &[&str] = &["team's", "world's", "city's", "year's", "school's", "company's"];

const SUBJECT_PRONOUNS: &[&str] = &["I", "we", "you", "they", "he", "she"];
const OBJECT_PRONOUNS: &[&str] = &["me", "us", "you", "them", "him", "her", "it"];
const POSSESSIVES: &[&str] = &["my", "our", "your", "their", "his", "her", "its"];
const NOMINAL_VERBAL: &[&str] = &["i'm", "we're", "you're", "they're", "it's", "that's", "he's"];
const DETERMINERS: &[&str] = &["the", "the", "the", "a", "this", "that", "every", "some", "no"];
const PREPOSITIONS: &[&str] = &[
    "in", "on", "at", "for", "from", "with", "of", "to", "about", "after", "by", "before",
    "into", "over", "via",
];
const INTERJECTIONS: &[&str] = &["wow", "omg", "lol", "yes", "haha", "yay", "ugh", "oh", "hey", "ok"];
const EMOTICONS: &[&str] = &[":)", ":(", ":D", "<3", ";)"];
const HASHTAGS: &[&str] = &[
    "#news", "#win", "#music", "#sports", "#tech", "#love", "#nfl", "#election", "#food",
    "#travel", "#ff", "#tbt", "#breaking", "#health",
];
const MENTIONS: &[&str] = &[
    "@nytimes", "@cnn", "@espn", "@bbcnews", "@nasa", "@barackobama", "@apple", "@google",
    "@youtube", "@twitter",
];

const TEMPLATES: &[&str] = &[
    "PROPER VBZ DET ADJ NOUN PREP DET NOUN .",
    "DET NOUN PREP PROPER is/V ADJ .",
    "VB DET ADJ NOUN PREP PROPER .",
    "VB out/T DET ADJ NOUN !",
    "SUBJ VBD DET ADJ NOUN PREP DET NOUN .",
    "there/X is/V DET ADJ NOUN PREP PROPER ADV .",
    "there's/Y DET ADJ NOUN PREP PROPER !",
    "INTJ ,/, DET NOUN was/V ADV ADJ !",
    "DET NOUN VBD PREP DET ADJ NOUN and/& VBD DET NOUN .",
    "NUM PLURAL PREP DET ADJ NOUN :/, VB DET NOUN .",
    "ADV VBD :/, DET ADJ NOUN PREP PROPER .",
    "PROPPOSS ADJ NOUN is/V ADV ADJ .",
    "NOUNPOSS ADJ NOUN VBZ ADV .",
    "NV ADV VBG PREP DET ADJ NOUN .",
    "do/V you/O VB DET ADJ NOUN ?/,",
    "POSS ADJ NOUN VBZ PREP PROPER ADV .",
    "PROPER and/& PROPER VBD DET NOUN PREP NUM .",
    "ADJ NOUN :/, PROPER VBZ DET NOUN ADV .",
    "SUBJ can't/V VB DET ADJ NOUN !!!/,",
    "DET ADJ PLURAL are/V ADV ADJ .",
    "VB DET NOUN PREP OBJ ,/, it's/L ADJ .",
    "SUBJ VBD OBJ DET ADJ NOUN PREP PROPER .",
    "MENTION VBZ DET ADJ NOUN ADV .",
    "ADJ NOUN PREP PROPER :/, NUM PLURAL VBD ADV .",
    "what/O a/D ADJ NOUN PREP PROPER !",
    "SUBJ VBD DET ADJ NOUN ,/, but/& DET NOUN is/V ADJ .",
    "VB up/T PREP DET ADJ NOUN PREP PROPER .",
    "DET NOUN is/V ADV ADJ EMO",
];

const REQUESTS: &[&str] = &[
    "please/V rt/V",
    "pls/V retweet/V",
    "please/V retweet/V",
    "plz/V rt/V",
    "please/V spread/V the/D word/N",
    "rt/V if/P you/O agree/V",
    "retweet/V to/P help/V",
    "please/V share/V",
    "spread/V the/D news/N",
];

const HEADLINE_TEMPLATES: &[&str] = &[
    "PROPER VBZ ADJ NOUN PREP PROPER",
    "ADJ NOUN VBZ PROPER",
    "PROPER VBZ PREP ADJ NOUN",
    "NUM PLURAL PREP DET ADJ NOUN",
    "DET ADJ NOUN PREP PROPER",
    "PROPPOSS ADJ NOUN VBZ ADJ PLURAL",
    "PROPER and/& PROPER VB PREP NOUN",
];

pub(crate) fn pick<'a, R: Rng>(rng: &mut R, xs: &[&'a str]) -> &'a str {
    xs.choose(rng).copied().unwrap()
}

fn number<R: Rng>(rng: &mut R) -> String {
    match rng.random_range(0..4) {
        0 => rng.random_range(2..=12).to_string(),
        1 => rng.random_range(13..=100).to_string(),
        2 => format!("{}", rng.random_range(2005..=2014)),
        _ => {
            let n = rng.random_range(1..=9);
            let suffix = match n {
                1 => "st",
                2 => "nd",
                3 => "rd",
                _ => "th",
            };
            format!("{n}{suffix}")
        }
    }
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
        None => String::new(),
    }
}

/// Position of an adjective slot in a generated sentence.
pub(crate) type AdjSlot = Option<usize>;

fn expand<R: Rng>(template: &str, rng: &mut R, out: &mut Tagged) -> AdjSlot {
    let mut adj_slot = None;
    for item in template.split(' ') {
        if let Some((w, t)) = item.rsplit_once('/') {
            if !w.is_empty() && t.parse::<Tag>().is_ok() {
                out.push((w.to_string(), t.parse().unwrap()));
                continue;
            }
        }
        let (w, t) = match item {
            "NOUN" => (pick(rng, NOUNS).to_string(), Tag::CommonNoun),
            "PLURAL" => (pick(rng, PLURALS).to_string(), Tag::CommonNoun),
            "VB" => (pick(rng, VERB_BASE).to_string(), Tag::Verb),
            "VBZ" => (pick(rng, VERB_3SG).to_string(), Tag::Verb),
            "VBD" => (pick(rng, VERB_PAST).to_string(), Tag::Verb),
            "VBG" => (pick(rng, VERB_ING).to_string(), Tag::Verb),
            "ADJ" => {
                if adj_slot.is_none() {
                    adj_slot = Some(out.len());
                }
                (pick(rng, ADJECTIVES).to_string(), Tag::Adjective)
            }
            "ADV" => (pick(rng, ADVERBS).to_string(), Tag::Adverb),
            "PROPER" => (pick(rng, PROPER).to_string(), Tag::ProperNoun),
            "PROPPOSS" => (pick(rng, PROPER_POSS).to_string(), Tag::ProperPossessive),
            "NOUNPOSS" => (pick(rng, NOUN_POSS).to_string(), Tag::NominalPossessive),
            "SUBJ" => (pick(rng, SUBJECT_PRONOUNS).to_string(), Tag::Pronoun),
            "OBJ" => (pick(rng, OBJECT_PRONOUNS).to_string(), Tag::Pronoun),
            "POSS" => (pick(rng, POSSESSIVES).to_string(), Tag::Determiner),
            "NV" => (pick(rng, NOMINAL_VERBAL).to_string(), Tag::NominalVerbal),
            "DET" => (pick(rng, DETERMINERS).to_string(), Tag::Determiner),
            "PREP" => (pick(rng, PREPOSITIONS).to_string(), Tag::Preposition),
            "INTJ" => (pick(rng, INTERJECTIONS).to_string(), Tag::Interjection),
            "EMO" => (pick(rng, EMOTICONS).to_string(), Tag::Emoticon),
            "NUM" => (number(rng), Tag::Numeral),
            "MENTION" => (pick(rng, MENTIONS).to_string(), Tag::Mention),
            "." | "!" | "?" => (item.to_string(), Tag::Punctuation),
            other => panic!("unknown template item {other:?}"),
        };
        out.push((w, t));
    }
    fix_articles(out);
    if let Some((w, _)) = out.first_mut() {
        if !w.starts_with('@') {
            *w = capitalize(w);
        }
    }
    adj_slot
}

fn fix_articles(out: &mut Tagged) {
    for i in 0..out.len().saturating_sub(1) {
        if out[i].0 == "a" || out[i].0 == "an" {
            let vowel = out[i + 1]
                .0
                .chars()
                .next()
                .is_some_and(|c| "aeiouAEIOU".contains(c));
            out[i].0 = if vowel { "an" } else { "a" }.to_string();
        }
    }
}

/// A tweet-like sentence, possibly decorated with a request, hashtag,
/// mention or emoticon.
pub(crate) fn sentence<R: Rng>(rng: &mut R) -> Tagged {
    let mut out = Vec::new();
    if rng.random_bool(0.1) {
        out.push((pick(rng, INTERJECTIONS).to_string(), Tag::Interjection));
        out.push((",".to_string(), Tag::Punctuation));
    }
    let mut body = Vec::new();
    expand(pick(rng, TEMPLATES), rng, &mut body);
    if !out.is_empty() {
        body[0].0 = body[0].0.to_lowercase();
        if body[0].0 == "i" || body[0].0.starts_with("i'") {
            body[0].0 = capitalize(&body[0].0);
        }
    }
    out.extend(body);
    if rng.random_bool(0.15) {
        expand_literal(pick(rng, REQUESTS), &mut out);
    }
    if rng.random_bool(0.2) {
        out.push((pick(rng, HASHTAGS).to_string(), Tag::Hashtag));
    }
    if rng.random_bool(0.1) {
        out.push((pick(rng, EMOTICONS).to_string(), Tag::Emoticon));
    }
    out
}

/// A plain sentence with the position of its first adjective, if any.
pub(crate) fn sentence_with_adjective<R: Rng>(rng: &mut R) -> (Tagged, usize) {
    loop {
        let mut out = Vec::new();
        if let Some(slot) = expand(pick(rng, TEMPLATES), rng, &mut out) {
            return (out, slot);
        }
    }
}

pub(crate) fn headline<R: Rng>(rng: &mut R) -> Tagged {
    let mut out = Vec::new();
    expand(pick(rng, HEADLINE_TEMPLATES), rng, &mut out);
    for (w, t) in out.iter_mut() {
        if !matches!(t, Tag::Preposition | Tag::Conjunction | Tag::Determiner) {
            *w = capitalize(w);
        }
    }
    out
}

pub(crate) fn hashtag<R: Rng>(rng: &mut R) -> String {
    pick(rng, HASHTAGS).to_string()
}

fn expand_literal(template: &str, out: &mut Tagged) {
    for item in template.split(' ') {
        let (w, t) = item.rsplit_once('/').unwrap();
        out.push((w.to_string(), t.parse().unwrap()));
    }
}

/// Render tagged words as tweet text: single spaces, no space before
/// sentence punctuation.
pub(crate) fn render(words: &Tagged) -> String {
    let mut s = String::new();
    for (i, (w, t)) in words.iter().enumerate() {
        let attach = *t == Tag::Punctuation && matches!(w.as_str(), "." | "!" | "?" | "," | ":" | "!!!");
        if i > 0 && !attach {
            s.push(' ');
        }
        s.push_str(w);
    }
    s
}

/// A random URL that no other call in the same run is likely to produce.
pub(crate) fn url<R: Rng>(rng: &mut R) -> String {
    const ALPHA: &[u8] = b"abcdefghijkmnopqrstuvwxyzABCDEFGHJKLMNPQRSTUVWXYZ23456789";
    let code: String = (0..10)
        .map(|_| ALPHA[rng.random_range(0..ALPHA.len())] as char)
        .collect();
    format!("http://t.co/{code}")
}

/// A made-up adjective: three consonant-vowel syllables and "ic".
pub(crate) fn nonce<R: Rng>(rng: &mut R) -> String {
    const C: &[u8] = b"bdfgklmnprstvz";
    const V: &[u8] = b"aiou";
    let mut w = String::with_capacity(8);
    for _ in 0..3 {
        w.push(C[rng.random_range(0..C.len())] as char);
        w.push(V[rng.random_range(0..V.len())] as char);
    }
    w.push_str("ic");
    w
}

pub(crate) fn is_lexicon_word(w: &str) -> bool {
    static WORDS: OnceLock<HashSet<String>> = OnceLock::new();
    let words = WORDS.get_or_init(|| {
        [
            NOUNS, PLURALS, VERB_BASE, VERB_3SG, VERB_PAST, VERB_ING, ADJECTIVES, ADVERBS,
            SUBJECT_PRONOUNS, OBJECT_PRONOUNS, POSSESSIVES, DETERMINERS, PREPOSITIONS, INTERJECTIONS,
            PROPER,
        ]
        .iter()
        .flat_map(|list| list.iter().map(|x| x.to_lowercase()))
        .collect()
    });
    words.contains(&w.to_lowercase())
}
