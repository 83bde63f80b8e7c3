use divlab_bench::{diversity, extension_input, family, metric};
use divlab_core::{is_admissible, validate};

#[test]
fn inputs_are_valid_and_fixed() {
    for n in [4, 6, 8] {
        assert!(validate(&diversity(n)).ok);
        assert_eq!(diversity(n), diversity(n));
        assert_eq!(metric(n), metric(n));
    }
    let (d, members) = family(6, 4);
    assert_eq!(members.len(), 4);
    assert!(members.iter().all(|f| is_admissible(&d, f.table()).unwrap().ok));
    let (d, s, f) = extension_input(8, 4);
    assert_eq!(s.len(), 4);
    assert_eq!(f.base(), &d.restrict(s).unwrap());
}
