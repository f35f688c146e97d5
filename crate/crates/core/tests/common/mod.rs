#![allow(dead_code)]

pub mod oracles;
pub mod pair_oracle;

use rand::seq::IndexedRandom;
use rand::Rng;
use wording::corpus::Message;

const WORDS: &[&str] = &[
    "the", "big", "news", "today", "check", "this", "out", "please", "rt", "new", "video",
    "game", "wow", "is", "a", "great", "day", "#win", "@bob", "40", "love", "it", "!", ".",
];

/// Random messages with plenty of shared (author, url) groups, near and
/// exact duplicates, retweets, and URL-less or multi-URL texts.
pub fn random_corpus<R: Rng>(rng: &mut R, n: usize) -> Vec<Message> {
    let authors = rng.random_range(6..16);
    let follower_base: Vec<u64> = (0..authors).map(|_| rng.random_range(3000..9000)).collect();
    let urls_per_author = (n / (authors * 3)).max(1);
    let mut out: Vec<Message> = Vec::with_capacity(n);
    for i in 0..n {
        let mut a = rng.random_range(0..authors);
        let url = format!("http://t.co/a{a}u{}", rng.random_range(0..urls_per_author));
        let text = if !out.is_empty() && rng.random_bool(0.15) {
            let prev: &Message = out.choose(rng).unwrap();
            a = prev.author_id[1..].parse().unwrap();
            prev.text.replacen(' ', "  ", 1)
        } else {
            let len = rng.random_range(1..8);
            let mut words: Vec<&str> = (0..len).map(|_| *WORDS.choose(rng).unwrap()).collect();
            if rng.random_bool(0.2) {
                words[0] = "The";
            }
            let mut t = words.join(" ");
            match rng.random_range(0..20) {
                0 => {}
                1 => t = format!("{t} {url} http://other.com/x"),
                2 => t = format!("RT @x: {t} {url}"),
                _ => t = format!("{t} {url}"),
            }
            t
        };
        let followers = if rng.random_bool(0.1) {
            rng.random_range(4000..6000)
        } else {
            follower_base[a]
        };
        let ts = rng.random_range(0..30 * 3600);
        let rt = if rng.random_bool(0.5) { rng.random_range(0..5) } else { rng.random_range(0..60) };
        out.push(Message::new(
            format!("m{i:04}"),
            format!("u{a}"),
            ts,
            text,
            rt,
            followers,
            rng.random_bool(0.03),
        ));
    }
    out
}
