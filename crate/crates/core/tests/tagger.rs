use wording::textproc::{accuracy, analyze, read_annotated, tokenize, train_tagger, Tag, TaggerModel};

const FIXTURE: &str = include_str!("../data/tagged_tweets.tsv");

fn split() -> (Vec<Vec<(String, Tag)>>, Vec<Vec<(String, Tag)>>) {
    let data = read_annotated(FIXTURE).unwrap();
    let cut = data.len() * 4 / 5;
    (data[..cut].to_vec(), data[cut..].to_vec())
}

#[test]
fn fixture_has_five_thousand_tokens() {
    let data = read_annotated(FIXTURE).unwrap();
    let n: usize = data.iter().map(Vec::len).sum();
    assert!(n >= 5000, "{n} tokens");
}

#[test]
fn heldout_accuracy_is_high() {
    let (train, test) = split();
    let m = train_tagger(&train, 5, 0).unwrap();
    let acc = accuracy(&m, &test).unwrap();
    eprintln!("held-out accuracy {acc}");
    assert!(acc >= 0.85, "held-out accuracy {acc}");
}

#[test]
fn heldout_accuracy_is_stable_across_seeds() {
    let (train, test) = split();
    let accs: Vec<f64> = (0..5)
        .map(|s| accuracy(&train_tagger(&train, 5, s).unwrap(), &test).unwrap())
        .collect();
    let lo = accs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = accs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(hi - lo <= 0.04, "{accs:?}");
    let mean = accs.iter().sum::<f64>() / accs.len() as f64;
    assert!(accs.iter().all(|a| (a - mean).abs() <= 0.02), "{accs:?}");
}

#[test]
fn training_is_byte_deterministic() {
    let data = read_annotated(FIXTURE).unwrap();
    let a = serde_json::to_vec(&train_tagger(&data, 5, 7).unwrap()).unwrap();
    let b = serde_json::to_vec(&train_tagger(&data, 5, 7).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn builtin_tags_request_words_as_verbs() {
    let m = TaggerModel::builtin();
    let toks = analyze("Please retweet this", &m).unwrap();
    assert_eq!(toks[0].tag, Some(Tag::Verb));
    assert_eq!(toks[1].tag, Some(Tag::Verb));
}

#[test]
fn builtin_output_length_matches_input() {
    let m = TaggerModel::builtin();
    for text in ["", "wow", "[at] thanks", "NASA launches a new probe http://t.co/x #space"] {
        let toks = tokenize(text);
        let tagged = wording::textproc::tag(&toks, &m).unwrap();
        assert_eq!(tagged.len(), toks.len());
        assert!(tagged.iter().all(|t| t.tag.is_some()));
    }
    let toks = analyze("[at] thanks", &m).unwrap();
    assert_eq!(toks[0].tag, Some(Tag::Mention));
}
