use std::collections::BTreeSet;

use super::{AnnotatedDocument, PruneConfig};
use crate::graph::{Event, Origin, RelationLabel};

/// Removes noisy events and links.
///
/// Events go when their verb is banned or, if required, when they lack a
/// subject or object. Links go when an endpoint is not a surviving event
/// (this also drops event/time-expression links), when they are vague, or
/// when they are statistical with confidence below the threshold. Rule
/// links are kept whatever their confidence.
pub fn prune(doc: &AnnotatedDocument, cfg: &PruneConfig) -> AnnotatedDocument {
    let events: Vec<_> = doc
        .events
        .iter()
        .filter(|e| !cfg.is_banned(&e.verb))
        .filter(|e| !cfg.require_subject_and_object || e.has_subject_and_object())
        .cloned()
        .collect();
    let kept: BTreeSet<usize> = events.iter().map(|e| e.token_index).collect();
    let tlinks = doc
        .tlinks
        .iter()
        .filter(|l| kept.contains(&l.source) && kept.contains(&l.target))
        .filter(|l| l.source != l.target)
        .filter(|l| !(cfg.drop_vague && l.label == RelationLabel::Vague))
        .filter(|l| l.origin == Origin::Rule || l.confidence >= cfg.min_statistical_confidence)
        .cloned()
        .collect();
    AnnotatedDocument {
        doc_id: doc.doc_id.clone(),
        sentences: doc.sentences.clone(),
        events,
        tlinks,
    }
}

/// Turns each raw event into an augmented event phrase
/// `subject verb object`.
pub fn augment(doc: &AnnotatedDocument) -> Vec<Event> {
    doc.events
        .iter()
        .map(|e| {
            Event::new(
                e.subject.as_deref().unwrap_or(""),
                &e.verb,
                e.object.as_deref().unwrap_or(""),
                e.sentence_index,
                e.token_index,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixtures::doc;
    use Origin::*;
    use RelationLabel::*;

    #[test]
    fn removes_reporting_verbs() {
        let d = doc(
            "d",
            &["officials said police shot a man"],
            &[
                (0, 1, Some("officials"), Some("police")),
                (0, 3, Some("police"), Some("a man")),
            ],
            &[(1, 3, Before, Rule, 1.0)],
        );
        let p = prune(&d, &PruneConfig::default());
        assert_eq!(p.events.len(), 1);
        assert_eq!(p.events[0].verb, "shot");
        assert!(p.tlinks.is_empty());
    }

    #[test]
    fn confidence_threshold_is_strict_below() {
        let d = doc(
            "d",
            &["a hit b", "b hit c", "c hit d", "d hit e"],
            &[
                (0, 1, Some("a"), Some("b")),
                (1, 1, Some("b"), Some("c")),
                (2, 1, Some("c"), Some("d")),
                (3, 1, Some("d"), Some("e")),
            ],
            &[
                (1, 4, Before, Statistical, 0.49),
                (4, 7, Before, Statistical, 0.50),
                (7, 10, Before, Rule, 0.10),
            ],
        );
        let p = prune(&d, &PruneConfig::default());
        let kept: Vec<_> = p.tlinks.iter().map(|l| (l.source, l.target)).collect();
        assert_eq!(kept, vec![(4, 7), (7, 10)]);
    }

    #[test]
    fn keeps_complete_events_and_drops_incomplete() {
        let d = doc(
            "d",
            &["a shot b", "x fled", "y arrived"],
            &[
                (0, 1, Some("a"), Some("b")),
                (1, 1, Some("x"), None),
                (2, 1, Some("  "), Some("z")),
            ],
            &[],
        );
        let p = prune(&d, &PruneConfig::default());
        assert_eq!(p.events.len(), 1);
        assert_eq!(p.events[0].verb, "shot");

        let lax = PruneConfig {
            require_subject_and_object: false,
            ..PruneConfig::default()
        };
        assert_eq!(prune(&d, &lax).events.len(), 3);
    }

    #[test]
    fn drops_vague_and_time_links() {
        // Token 3 is "monday", not an event.
        let d = doc(
            "d",
            &["a hit b monday", "b hit c"],
            &[(0, 1, Some("a"), Some("b")), (1, 1, Some("b"), Some("c"))],
            &[
                (1, 5, Vague, Rule, 1.0),
                (1, 3, Includes, Rule, 1.0),
                (5, 1, After, Rule, 1.0),
            ],
        );
        let p = prune(&d, &PruneConfig::default());
        assert_eq!(p.tlinks.len(), 1);
        assert_eq!(p.tlinks[0].label, After);
        let keep_vague = PruneConfig {
            drop_vague: false,
            ..PruneConfig::default()
        };
        assert_eq!(prune(&d, &keep_vague).tlinks.len(), 2);
    }

    #[test]
    fn prune_is_idempotent_on_fixture() {
        let d = doc(
            "d",
            &["a hit b", "she said it", "c hit d"],
            &[
                (0, 1, Some("a"), Some("b")),
                (1, 1, Some("she"), Some("it")),
                (2, 1, Some("c"), Some("d")),
            ],
            &[
                (1, 4, Before, Rule, 1.0),
                (1, 7, Before, Statistical, 0.9),
                (4, 7, Vague, Rule, 1.0),
            ],
        );
        let cfg = PruneConfig::default();
        let once = prune(&d, &cfg);
        assert_eq!(prune(&once, &cfg), once);
    }

    #[test]
    fn augmentation_examples() {
        let d = doc(
            "d",
            &["A called B , after which B called C"],
            &[(0, 1, Some("A"), Some("B")), (0, 7, Some("B"), Some("C"))],
            &[(1, 7, After, Rule, 1.0)],
        );
        let events = augment(&prune(&d, &PruneConfig::default()));
        assert_eq!(events[0].phrase, "a called b");
        assert_eq!(events[1].phrase, "b called c");

        let d = doc(
            "d",
            &["the police arrested two men"],
            &[(0, 2, Some("the police"), Some("two men"))],
            &[],
        );
        assert_eq!(augment(&d)[0].phrase, "the police arrested two men");
    }

    #[test]
    fn same_verb_in_two_sentences_gives_two_phrases() {
        let d = doc(
            "d",
            &[
                "the guard fired a warning shot",
                "the company fired the guard",
            ],
            &[
                (0, 2, Some("the guard"), Some("a warning shot")),
                (1, 2, Some("the company"), Some("the guard")),
            ],
            &[],
        );
        let events = augment(&d);
        assert_eq!(events.len(), 2);
        assert_eq!(events[0].verb, events[1].verb);
        assert_ne!(events[0].phrase, events[1].phrase);
    }
}
