mod common;

use common::{exponent_value, fixture, pairs_of, verify_witness, witness_fixture};
use pssk::learning::{indefiniteness_search, retrieval_eval, SearchOptions, SquareMatrix};
use pssk::matching::Exponent;

#[test]
fn retrieval_matches_scripted_fixture() {
    let text = fixture("retrieval_4x5.txt");
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    let mut expected = std::collections::HashMap::new();
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let (key, rest) = line.split_once(' ').unwrap();
        match key {
            "labels" => labels = rest.split_whitespace().map(|v| v.parse::<i64>().unwrap()).collect(),
            "row" => rows.push(rest.split_whitespace().map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>()),
            _ => {
                expected.insert(key.to_string(), rest.parse::<f64>().unwrap());
            }
        }
    }
    let d = SquareMatrix::from_rows(&rows).unwrap();
    let s = retrieval_eval(&d, &labels).unwrap();
    let got = [("nn", Some(s.nn)), ("t1", s.t1), ("t2", s.t2), ("em", s.em), ("dcg", s.dcg)];
    for (name, value) in got {
        let want = expected[name];
        assert!((value.unwrap() - want).abs() < 1e-12, "{name}: {value:?} vs {want}");
    }
}

#[test]
fn witnesses_match_fixture() {
    let (seed, records) = witness_fixture();
    for rec in records {
        let exponent = match exponent_value(&rec.p) {
            Some(p) => Exponent::Finite(p),
            None => Exponent::Infinity,
        };
        let w = indefiniteness_search(&SearchOptions::new(exponent, seed)).unwrap();
        assert_eq!(w.trial, rec.trial, "p = {}", rec.p);
        assert_eq!(w.kept, rec.kept, "p = {}", rec.p);
        assert_eq!(w.certifying_xi, rec.certifying_xi, "p = {}", rec.p);
        assert_eq!((w.report_minus_d.n_positive, w.report_minus_d.n_negative), (rec.positive, rec.negative));

        let pairs: Vec<_> = w.diagrams.iter().map(pairs_of).collect();
        let (pos, neg, exp_negative) = verify_witness(&pairs, exponent_value(&rec.p), w.certifying_xi, 1e-6);
        assert!(pos >= 2 && neg >= 2, "p = {}: inertia ({pos}, {neg})", rec.p);
        assert!(exp_negative, "p = {}: exp(-xi d) is positive semidefinite", rec.p);
    }
}
