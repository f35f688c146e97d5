use std::collections::HashMap;

/// Cosine of the term-frequency vectors of two token multisets; 0 when
/// either side is empty.
pub fn tf_cosine<S: AsRef<str>>(a: &[S], b: &[S]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let (ta, tb) = (term_frequencies(a), term_frequencies(b));
    let dot: f64 = ta.iter().filter_map(|(k, v)| tb.get(k).map(|w| v * w)).sum();
    let na: f64 = ta.values().map(|v| v * v).sum::<f64>().sqrt();
    let nb: f64 = tb.values().map(|v| v * v).sum::<f64>().sqrt();
    (dot / (na * nb)).clamp(0.0, 1.0)
}

fn term_frequencies<S: AsRef<str>>(xs: &[S]) -> HashMap<&str, f64> {
    let mut m = HashMap::new();
    for x in xs {
        *m.entry(x.as_ref()).or_insert(0.0) += 1.0;
    }
    m
}
