use std::sync::Arc;

use divlab_core::io::{
    admissible_to_string, canonical_order, diversity_to_string, parse_admissible, parse_diversity, parse_policy,
    parse_query, parse_tower, pretty, query_to_value, tower_to_value,
};
use divlab_core::tower::grow;
use divlab_core::{fixtures, kappa, rat, Error, GrowthPolicy, PointId, Rat, SubsetKey, TowerState};

#[test]
fn canonical_order_is_by_size_then_index() {
    let order: Vec<Vec<usize>> = canonical_order(3).iter().map(|s| s.indices()).collect();
    assert_eq!(
        order,
        vec![vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
    );
}

#[test]
fn serialized_diversity_is_stable() {
    let d = fixtures::unit_triangle(rat(2, 1));
    let expected = r#"{
  "points": [
    "a",
    "b",
    "c"
  ],
  "values": {
    "a b": "1",
    "a c": "1",
    "b c": "1",
    "a b c": "2"
  }
}
"#;
    assert_eq!(diversity_to_string(&d), expected);
    let shuffled = r#"{"values": {"c b a": "4/2", "c a": "1", "b c": "1", "b a": "1"}, "points": ["a", "b", "c"]}"#;
    assert_eq!(diversity_to_string(&parse_diversity(shuffled).unwrap()), expected);
}

#[test]
fn unknown_fields_and_bad_values_are_rejected() {
    assert!(matches!(
        parse_diversity(r#"{"points": ["a"], "values": {}, "extra": 1}"#),
        Err(Error::Parse { .. })
    ));
    assert!(matches!(parse_diversity(r#"{"points": ["a","b"], "values": {"a b": "x"}}"#), Err(Error::Parse { .. })));
    assert!(matches!(
        parse_diversity(r#"{"points": ["a","b"], "values": {"a b": "-1"}}"#),
        Err(Error::NegativeValue { .. })
    ));
    assert!(matches!(parse_diversity(r#"{"points": ["a","a"], "values": {}}"#), Err(Error::DuplicateLabel(_))));
}

#[test]
fn admissible_base_may_be_a_path() {
    let dir = std::env::temp_dir().join(format!("divlab-formats-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let base = fixtures::unit_triangle(rat(2, 1));
    std::fs::write(dir.join("base.json"), diversity_to_string(&base)).unwrap();
    let text = r#"{"base": "base.json", "values": {"": "0", "a": "0", "b": "1", "c": "1", "a b": "1", "a c": "1", "b c": "2", "a b c": "2"}, "support": "a"}"#;
    let f = parse_admissible(text, Some(&dir)).unwrap();
    let base = Arc::new(base);
    assert_eq!(f, kappa(&base, PointId(0)));
    assert_eq!(f.support(), Some(SubsetKey::from_indices(&[0])));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn inadmissible_values_are_reported() {
    let text = r#"{"base": {"points": ["a","b"], "values": {"a b": "2"}}, "values": {"": "0", "a": "1", "b": "1", "a b": "3"}}"#;
    assert!(matches!(parse_admissible(text, None), Err(Error::NotAdmissible(_))));
    let missing = r#"{"base": {"points": ["a","b"], "values": {"a b": "2"}}, "values": {"a": "1", "b": "1", "a b": "2"}}"#;
    assert_eq!(parse_admissible(missing, None), Err(Error::MissingSubsets(vec!["".into()])));
}

#[test]
fn query_round_trip() {
    let host = Arc::new(fixtures::unit_triangle(rat(2, 1)));
    let text = r#"{"subset": "a b", "values": {"": "0", "a": "1", "b": "1", "a b": "2"}, "epsilon": "0"}"#;
    let q = parse_query(text, &host).unwrap();
    assert_eq!(q.subset, SubsetKey::from_indices(&[0, 1]));
    let again = parse_query(&pretty(&query_to_value(&q)), &host).unwrap();
    assert_eq!(again.f, q.f);
    assert_eq!(again.epsilon, Rat::ZERO);
}

#[test]
fn policy_defaults_fill_missing_fields() {
    let p = parse_policy(r#"{"rounds": 5, "generator_mix": {"hub": 3, "rejection": 1}}"#).unwrap();
    assert_eq!(p.rounds, 5);
    assert_eq!(p.value_granularity, rat(1, 8));
    assert_eq!(p.generator_mix.hub, 3);
    assert!(matches!(parse_policy(r#"{"value_granularity": "0"}"#), Err(Error::InvalidPolicy(_))));
    assert!(matches!(parse_policy(r#"{"star": 1}"#), Err(Error::Parse { .. })));
}

#[test]
fn tower_file_round_trip_is_byte_stable() {
    let policy = GrowthPolicy { rounds: 5, ..GrowthPolicy::default() };
    let t = grow(&TowerState::single_point(11), &policy).unwrap();
    let text = pretty(&tower_to_value(&t, Some(&policy)));
    let (back, p) = parse_tower(&text).unwrap();
    assert_eq!(back, t);
    assert_eq!(pretty(&tower_to_value(&back, p.as_ref())), text);
}

#[test]
fn admissible_text_round_trip() {
    let d = Arc::new(fixtures::unit_triangle(Rat::ONE));
    let f = kappa(&d, PointId(2));
    let text = admissible_to_string(&f);
    assert_eq!(admissible_to_string(&parse_admissible(&text, None).unwrap()), text);
}
