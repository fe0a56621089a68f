//! Sentence-level string similarity: BLEU-4 and ROUGE-L.
//!
//! Both operate on whitespace tokens of the raw strings.

use std::collections::HashMap;

const MAX_ORDER: usize = 4;
const SMOOTHING: f64 = 1e-9;
const ROUGE_BETA: f64 = 1.2;

fn ngram_counts<'a, 'b>(tokens: &'b [&'a str], n: usize) -> HashMap<&'b [&'a str], usize> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// Sentence BLEU-4 with uniform weights.
///
/// Modified n-gram precisions with zero matches are replaced by `1e-9`.
/// Orders for which the candidate has no n-grams at all are left out of the
/// geometric mean, so `bleu(x, x) == 1` for short `x` too. The brevity
/// penalty is `exp(1 - r/c)` when the candidate is shorter.
pub fn bleu(candidate: &str, reference: &str) -> f64 {
    let cand: Vec<&str> = candidate.split_whitespace().collect();
    let refs: Vec<&str> = reference.split_whitespace().collect();
    if cand.is_empty() {
        return 0.0;
    }
    let mut log_sum = 0.0;
    let mut orders = 0;
    for n in 1..=MAX_ORDER.min(cand.len()) {
        let cand_counts = ngram_counts(&cand, n);
        let ref_counts = ngram_counts(&refs, n);
        let total: usize = cand_counts.values().sum();
        let clipped: usize = cand_counts
            .iter()
            .map(|(gram, &c)| c.min(ref_counts.get(gram).copied().unwrap_or(0)))
            .sum();
        let precision = if clipped == 0 {
            SMOOTHING
        } else {
            clipped as f64 / total as f64
        };
        log_sum += precision.ln();
        orders += 1;
    }
    let (c, r) = (cand.len() as f64, refs.len() as f64);
    let brevity = if c < r { (1.0 - r / c).exp() } else { 1.0 };
    brevity * (log_sum / orders as f64).exp()
}

fn lcs_len(a: &[&str], b: &[&str]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

/// ROUGE-L F-measure with `beta = 1.2`.
pub fn rouge_l(candidate: &str, reference: &str) -> f64 {
    let cand: Vec<&str> = candidate.split_whitespace().collect();
    let refs: Vec<&str> = reference.split_whitespace().collect();
    if cand.is_empty() || refs.is_empty() {
        return 0.0;
    }
    let lcs = lcs_len(&cand, &refs);
    if lcs == 0 {
        return 0.0;
    }
    let p = lcs as f64 / cand.len() as f64;
    let r = lcs as f64 / refs.len() as f64;
    let b2 = ROUGE_BETA * ROUGE_BETA;
    (1.0 + b2) * p * r / (r + b2 * p)
}

/// 1 when the prediction equals any of the gold phrases.
pub fn task1_accuracy<S: AsRef<str>>(predicted: &str, gold: &[S]) -> f64 {
    let pred = crate::graph::normalize_phrase(predicted);
    if gold
        .iter()
        .any(|g| crate::graph::normalize_phrase(g.as_ref()) == pred)
    {
        1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bleu_identity_and_disjoint() {
        assert_eq!(bleu("a b c d e", "a b c d e"), 1.0);
        assert_eq!(bleu("x", "x"), 1.0);
        assert!(bleu("p q r s", "a b c d") < 1e-8);
        assert_eq!(bleu("", "a b"), 0.0);
    }

    #[test]
    fn bleu_brevity_case() {
        // All four precisions are 1; the penalty is exp(1 - 5/4).
        let v = bleu("a b c d", "a b c d e");
        assert!((v - 0.778_800_783_071_404_9).abs() < 1e-12, "{v}");
    }

    #[test]
    fn bleu_clips_repeated_tokens() {
        // Unigram precision 2/7 from clipping "the" to two reference uses;
        // higher orders all miss.
        let v = bleu("the the the the the the the", "the cat is on the mat");
        let expected = ((2.0f64 / 7.0).ln() + 3.0 * SMOOTHING.ln()) / 4.0;
        assert!((v - expected.exp()).abs() < 1e-15);
    }

    #[test]
    fn rouge_examples() {
        assert_eq!(rouge_l("a b c", "a b c"), 1.0);
        assert_eq!(rouge_l("a b c", "x y z"), 0.0);
        assert_eq!(rouge_l("", "x"), 0.0);
        let v = rouge_l("a b c", "a x c");
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        // P = 2/2, R = 2/4.
        let (p, r, b2) = (1.0, 0.5, 1.44);
        let expected = (1.0 + b2) * p * r / (r + b2 * p);
        assert!((rouge_l("a c", "a b c d") - expected).abs() < 1e-12);
    }

    #[test]
    fn accuracy_any_match() {
        assert_eq!(
            task1_accuracy("he was acquitted", &["he was acquitted"]),
            1.0
        );
        assert_eq!(task1_accuracy("he was acquitted", &["he was charged"]), 0.0);
        assert_eq!(
            task1_accuracy("he was acquitted", &["he was charged", "He  was acquitted"]),
            1.0
        );
        assert_eq!(task1_accuracy::<&str>("x", &[]), 0.0);
    }
}
