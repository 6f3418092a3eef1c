use skipsig::attribution::{evaluate, vectorize, EvaluationConfig};
use skipsig::signature::{build_signatures, initial_signature, mine_corpus, reference_patterns, ClassDocuments};
use skipsig::synthetic::{generate, SyntheticConfig};
use skipsig::MiningParams;

fn small(n_classes: usize, seed: u64) -> SyntheticConfig {
    SyntheticConfig { n_classes, docs_per_class: 8, sentences_per_doc: 20, seed, ..Default::default() }
}

#[test]
fn training_document_has_every_initial_pattern() {
    let corpus = generate(&small(2, 4));
    let mined = mine_corpus(&corpus.classes, &MiningParams::default()).unwrap();
    let docs = &mined.classes[0].documents;
    let sig = initial_signature("c0", docs, 1.0).unwrap();
    assert!(!sig.is_empty());
    for doc in docs {
        let (_, y) = vectorize(&sig, doc).unwrap();
        assert!(y.values.iter().all(|&v| v > 0.0));
    }
}

#[test]
fn reference_total_counts_every_document_pattern() {
    let corpus = generate(&small(3, 5));
    let mined = mine_corpus(&corpus.classes, &MiningParams::default()).unwrap();
    let others: Vec<&[_]> = mined.classes[1..].iter().map(|c| c.documents.as_slice()).collect();
    let reference = reference_patterns(&others);
    let expected: usize = mined.classes[1..].iter().flat_map(|c| &c.documents).map(|d| d.len()).sum();
    assert_eq!(reference.total, expected);
    assert!(reference.len() <= expected);
    let built = build_signatures(&mined.classes, &mined.dictionary, 1.0).unwrap();
    assert_eq!(built[0].stats.n_reference, expected);
}

#[test]
fn identical_classes_have_empty_revised_signatures() {
    let corpus = generate(&small(1, 6));
    let twin = ClassDocuments { class_id: "twin".into(), documents: corpus.classes[0].documents.clone() };
    let classes = vec![corpus.classes[0].clone(), twin];
    let mined = mine_corpus(&classes, &MiningParams::default()).unwrap();
    let built = build_signatures(&mined.classes, &mined.dictionary, 1.0).unwrap();
    assert!(built.iter().all(|b| b.revised.is_empty() && !b.initial.is_empty()));
}

#[test]
fn two_disjoint_classes_are_separated() {
    let corpus = generate(&small(2, 7));
    let report = evaluate(&corpus.classes, &MiningParams::default(), &EvaluationConfig::default()).unwrap();
    assert!(report.per_class.iter().all(|c| c.n_test > 0 && c.n_correct == c.n_test));
}

#[test]
fn evaluation_is_reproducible() {
    let corpus = generate(&small(3, 8));
    let cfg = EvaluationConfig::default();
    let params = MiningParams::default();
    let render = || {
        let report = evaluate(&corpus.classes, &params, &cfg).unwrap();
        let mut out = Vec::new();
        report.write_table(&mut out).unwrap();
        report.write_scores(&mut out).unwrap();
        out
    };
    assert_eq!(render(), render());
}
