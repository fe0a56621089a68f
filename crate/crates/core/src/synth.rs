//! Deterministic synthetic corpora for tests and benchmarks.
//!
//! Each event gets a hidden time interval, so every non-vague label drawn
//! from the intervals is mutually consistent. Events are grouped into
//! clusters of neighbouring sentences and links stay inside a cluster, which
//! gives the community detector something to find. Noise that pruning must
//! remove (banned verbs, missing arguments, vague and low-confidence links,
//! links to time expressions) is injected at configurable rates.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{
    AnnotatedDocument, RawEvent, RawLink, LIGHT_VERBS, LOW_IDF_VERBS, REPORTING_VERBS,
};
use crate::graph::{Origin, RelationLabel};

const VERBS: [&str; 24] = [
    "arrested",
    "charged",
    "fired",
    "announced",
    "signed",
    "visited",
    "attacked",
    "launched",
    "won",
    "lost",
    "opened",
    "closed",
    "approved",
    "rejected",
    "bought",
    "sold",
    "hired",
    "sued",
    "met",
    "joined",
    "raised",
    "built",
    "destroyed",
    "released",
];

const SUBJECTS: [&str; 16] = [
    "police",
    "company",
    "court",
    "minister",
    "team",
    "union",
    "bank",
    "army",
    "council",
    "senator",
    "board",
    "committee",
    "mayor",
    "agency",
    "coach",
    "driver",
];

const OBJECTS: [&str; 16] = [
    "suspect", "contract", "plan", "deal", "report", "player", "office", "bridge", "bill",
    "factory", "loan", "verdict", "budget", "match", "station", "manager",
];

const TIMEX: [&str; 6] = ["monday", "tuesday", "yesterday", "today", "march", "noon"];

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub docs: usize,
    /// Mean number of events per document; actual counts vary by ±50%.
    pub events_per_doc: usize,
    /// Probability of a link between two events of the same cluster.
    pub edge_density: f64,
    /// Probability that an event's verb is drawn from the banned lists.
    pub banned_verb_rate: f64,
    pub missing_argument_rate: f64,
    /// Probability that a link is relabelled vague.
    pub vague_rate: f64,
    /// Probability that a link is statistical rather than rule-based.
    pub statistical_rate: f64,
    /// Among statistical links, probability of a confidence below 0.5.
    pub low_confidence_rate: f64,
    /// Probability per document event of an extra link to a time expression.
    pub timex_rate: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            docs: 100,
            events_per_doc: 10,
            edge_density: 0.5,
            banned_verb_rate: 0.15,
            missing_argument_rate: 0.1,
            vague_rate: 0.1,
            statistical_rate: 0.4,
            low_confidence_rate: 0.3,
            timex_rate: 0.1,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy)]
struct Interval(u32, u32);

/// Relation of `a` to `b` read off their intervals.
fn relation(a: Interval, b: Interval) -> RelationLabel {
    use RelationLabel::*;
    if a.0 == b.0 && a.1 == b.1 {
        Simultaneous
    } else if a.1 < b.0 {
        Before
    } else if b.1 < a.0 {
        After
    } else if a.0 <= b.0 && b.1 <= a.1 {
        Includes
    } else if b.0 <= a.0 && a.1 <= b.1 {
        IsIncluded
    } else {
        Vague
    }
}

fn banned_verbs() -> Vec<&'static str> {
    let mut v: Vec<&str> = LOW_IDF_VERBS
        .iter()
        .chain(&LIGHT_VERBS)
        .chain(&REPORTING_VERBS)
        .copied()
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Generates document `index` of the corpus described by `cfg`. Each
/// document has its own random stream, so documents can be produced
/// independently and in any order.
pub fn synth_document(cfg: &SynthConfig, index: usize) -> AnnotatedDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let banned = banned_verbs();

    let mean = cfg.events_per_doc.max(2);
    let n = rng.gen_range(mean.div_ceil(2)..=mean + mean / 2).max(2);
    let clusters = rng.gen_range(1..=n.div_ceil(4).clamp(1, 3));

    let mut sentences: Vec<Vec<String>> = Vec::new();
    let mut events: Vec<RawEvent> = Vec::new();
    let mut intervals = Vec::new();
    let mut cluster_of = Vec::new();
    let mut timex_tokens = Vec::new();
    let mut offset = 0;
    for e in 0..n {
        let cluster = e * clusters / n;
        if e > 0 && cluster != cluster_of[e - 1] {
            // Filler between clusters keeps their sentence windows apart.
            for _ in 0..2 {
                let day = TIMEX[rng.gen_range(0..TIMEX.len())];
                let tokens = ["it", "was", day, "."];
                timex_tokens.push(offset + 2);
                offset += tokens.len();
                sentences.push(tokens.iter().map(|t| t.to_string()).collect());
            }
        }
        let verb = if rng.gen_bool(cfg.banned_verb_rate) {
            banned[rng.gen_range(0..banned.len())]
        } else {
            VERBS[rng.gen_range(0..VERBS.len())]
        };
        let subject = SUBJECTS[rng.gen_range(0..SUBJECTS.len())];
        let object = OBJECTS[rng.gen_range(0..OBJECTS.len())];
        let tokens = ["the", subject, verb, "the", object, "."];
        let (mut subj, mut obj) = (
            Some(format!("the {subject}")),
            Some(format!("the {object}")),
        );
        if rng.gen_bool(cfg.missing_argument_rate) {
            if rng.gen_bool(0.5) {
                subj = None;
            } else {
                obj = None;
            }
        }
        events.push(RawEvent {
            verb: verb.to_string(),
            sentence_index: sentences.len(),
            token_index: offset + 2,
            subject: subj,
            object: obj,
        });
        offset += tokens.len();
        sentences.push(tokens.iter().map(|t| t.to_string()).collect());

        let start = (cluster as u32) * 100 + rng.gen_range(0..20);
        let len = if rng.gen_bool(0.3) {
            0
        } else {
            rng.gen_range(1..6)
        };
        intervals.push(Interval(start, start + len));
        cluster_of.push(cluster);
    }

    let mut tlinks = Vec::new();
    let mut link = |rng: &mut ChaCha8Rng, source: usize, target: usize, label: RelationLabel| {
        let label = if rng.gen_bool(cfg.vague_rate) {
            RelationLabel::Vague
        } else {
            label
        };
        let (origin, confidence) = if rng.gen_bool(cfg.statistical_rate) {
            let c = if rng.gen_bool(cfg.low_confidence_rate) {
                rng.gen_range(0.0..0.5)
            } else if rng.gen_bool(0.1) {
                0.5
            } else {
                rng.gen_range(0.5..=1.0)
            };
            (Origin::Statistical, c)
        } else {
            (Origin::Rule, 1.0)
        };
        tlinks.push(RawLink {
            source,
            target,
            label,
            origin,
            confidence,
        });
    };
    for i in 0..n {
        for j in i + 1..n {
            if cluster_of[i] != cluster_of[j] {
                continue;
            }
            let adjacent = j == i + 1;
            if adjacent || rng.gen_bool(cfg.edge_density) {
                let (s, t) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
                let label = relation(intervals[s], intervals[t]);
                link(
                    &mut rng,
                    events[s].token_index,
                    events[t].token_index,
                    label,
                );
            }
        }
        if !timex_tokens.is_empty() && rng.gen_bool(cfg.timex_rate) {
            let &t = timex_tokens.choose(&mut rng).expect("non-empty");
            link(
                &mut rng,
                events[i].token_index,
                t,
                RelationLabel::IsIncluded,
            );
        }
    }

    AnnotatedDocument {
        doc_id: format!("doc{index:05}"),
        sentences,
        events,
        tlinks,
    }
}

pub fn synth_corpus(cfg: &SynthConfig) -> Vec<AnnotatedDocument> {
    (0..cfg.docs).map(|i| synth_document(cfg, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PruneConfig;

    #[test]
    fn documents_are_valid_and_deterministic() {
        let cfg = SynthConfig {
            docs: 50,
            ..SynthConfig::default()
        };
        let a = synth_corpus(&cfg);
        assert_eq!(a, synth_corpus(&cfg));
        for d in &a {
            d.validate().unwrap();
        }
        assert_eq!(a[7], synth_document(&cfg, 7));
        let other = synth_corpus(&SynthConfig { seed: 1, ..cfg });
        assert_ne!(a, other);
    }

    #[test]
    fn noise_is_injected() {
        let docs = synth_corpus(&SynthConfig::default());
        let cfg = PruneConfig::default();
        let events = docs.iter().flat_map(|d| &d.events);
        assert!(events.clone().any(|e| cfg.is_banned(&e.verb)));
        assert!(events.clone().any(|e| !e.has_subject_and_object()));
        let links: Vec<_> = docs.iter().flat_map(|d| &d.tlinks).collect();
        assert!(links.iter().any(|l| l.label == RelationLabel::Vague));
        assert!(links
            .iter()
            .any(|l| l.origin == Origin::Statistical && l.confidence < 0.5));
        assert!(links
            .iter()
            .any(|l| l.origin == Origin::Statistical && l.confidence == 0.5));
        let timex = docs.iter().any(|d| {
            let ev = d.event_tokens();
            d.tlinks.iter().any(|l| !ev.contains(&l.target))
        });
        assert!(timex);
    }

    #[test]
    fn interval_relations() {
        use RelationLabel::*;
        let r = |a: (u32, u32), b: (u32, u32)| relation(Interval(a.0, a.1), Interval(b.0, b.1));
        assert_eq!(r((0, 1), (2, 3)), Before);
        assert_eq!(r((2, 3), (0, 1)), After);
        assert_eq!(r((0, 5), (1, 2)), Includes);
        assert_eq!(r((1, 2), (0, 5)), IsIncluded);
        assert_eq!(r((1, 2), (1, 2)), Simultaneous);
        assert_eq!(r((0, 2), (1, 3)), Vague);
    }
}
