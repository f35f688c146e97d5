//! Rewrites `data/tagged_tweets.tsv` from the generator grammar.

fn main() {
    let data = wording::eval::synth::tagger_fixture(580, 2013);
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/tagged_tweets.tsv");
    std::fs::write(path, wording::textproc::write_annotated(&data)).expect("write fixture");
    let tokens: usize = data.iter().map(Vec::len).sum();
    println!("{} sentences, {tokens} tokens", data.len());
}
