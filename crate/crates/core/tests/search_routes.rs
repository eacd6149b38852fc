use cmap_core::constructions::theta_transversal_witness;
use cmap_core::families::Sd32Variant;
use cmap_core::fixtures::{FixtureRecord, FixtureStore};
use cmap_core::mapping::{is_complete_mapping, restrict_to_subgroup};
use cmap_core::search::{
    derive_witness_from_complement, derive_witness_from_quotient, enumerate_cms, lift_cm_with,
    property_p_report, random_cm, LiftMode, Method, Predicate, SearchBudget, Verdict,
};
use cmap_core::selector::resolve_group;
use cmap_core::Parity;

#[test]
fn theta_lifts_restrict_to_the_inner_mapping() {
    for v in [Sd32Variant::I2, Sd32Variant::I6] {
        let (g, w) = theta_transversal_witness(v).unwrap();
        let (hg, _) = g.subgroup_as_group(&w.subgroup).unwrap();
        for h in enumerate_cms(&hg, &Predicate::any(), Some(20), false).unwrap().found {
            let (f, mode) = lift_cm_with(&g, &w, &h, &SearchBudget::default()).unwrap();
            assert!(is_complete_mapping(&g, &f).unwrap());
            assert_eq!(restrict_to_subgroup(&f, &w.subgroup).unwrap(), h, "{v:?} {mode:?}");
        }
    }
}

#[test]
fn quotient_route_decides_larger_two_groups() {
    let budget = SearchBudget::with_seed(5);
    for sel in ["2group:D:5", "2group:Q:5", "elem:2:5"] {
        let g = resolve_group(sel).unwrap();
        let r = property_p_report(&g, &budget, None).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{sel}");
        assert!(r.trace.iter().any(|e| matches!(e.method, Method::Lifting | Method::Random)));
    }
}

#[test]
fn order_eight_elementary_is_only_even() {
    let g = resolve_group("elem:2:3").unwrap();
    let r = property_p_report(&g, &SearchBudget::default(), None).unwrap();
    assert_eq!(r.verdict, Verdict::FailsOnlyEven);
}

#[test]
fn complement_witness_on_a_product() {
    let g = resolve_group("cyclic:3*elem:2:2").unwrap();
    // index g·4 + h: the C3 factor and the Klein factor
    let h = g.generate(&[1, 2]);
    let k = g.generate(&[4]);
    let w = derive_witness_from_complement(&g, &h, &k, &SearchBudget::default())
        .unwrap()
        .unwrap();
    assert!(w.verify(&g));
    assert!(derive_witness_from_complement(&g, &h, &h, &SearchBudget::default()).is_err());
    let (hg, _) = g.subgroup_as_group(&h).unwrap();
    let inner = enumerate_cms(&hg, &Predicate::any(), Some(1), false).unwrap().found.remove(0);
    let (f, _) = lift_cm_with(&g, &w, &inner, &SearchBudget::default()).unwrap();
    assert!(is_complete_mapping(&g, &f).unwrap());
}

#[test]
fn block_lifting_for_normal_subgroups() {
    let g = resolve_group("elem:2:4").unwrap();
    let n = g.generate(&[1, 2]);
    let w = derive_witness_from_quotient(&g, &n, &SearchBudget::default()).unwrap().unwrap();
    let (ng, _) = g.subgroup_as_group(&n).unwrap();
    let inner = enumerate_cms(&ng, &Predicate::any(), Some(1), false).unwrap().found.remove(0);
    let (_, mode) = lift_cm_with(&g, &w, &inner, &SearchBudget::default()).unwrap();
    assert_eq!(mode, LiftMode::Blocks);
}

#[test]
fn random_search_reproducible_across_runs() {
    let g = resolve_group("cyclic:21").unwrap();
    let b = SearchBudget::with_seed(99);
    let first = random_cm(&g, &Predicate::parity(Parity::Even), &b).unwrap();
    for _ in 0..3 {
        assert_eq!(random_cm(&g, &Predicate::parity(Parity::Even), &b).unwrap(), first);
    }
}

#[test]
fn fixture_witnesses_are_used_first() {
    let store = FixtureStore::builtin();
    let g = resolve_group("small16:4").unwrap();
    let r = property_p_report(&g, &SearchBudget::default(), Some(&store)).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    assert!(r.trace.iter().all(|e| e.method == Method::Fixture));
}

#[test]
fn fixture_store_appends_to_file() {
    let dir = std::env::temp_dir().join(format!("cmap-fixtures-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fixtures.txt");
    std::fs::write(&path, FixtureStore::builtin().to_text()).unwrap();
    let mut store = FixtureStore::open(&path).unwrap();
    let g = resolve_group("cyclic:7").unwrap();
    let f = random_cm(&g, &Predicate::parity(Parity::Odd), &SearchBudget::default()).unwrap();
    assert!(store.append(FixtureRecord::new("cyclic:7", &f, "search")).unwrap());
    assert!(!store.append(FixtureRecord::new("cyclic:7", &f, "search")).unwrap());
    let reread = FixtureStore::open(&path).unwrap();
    assert_eq!(reread.find("cyclic:7", Parity::Odd).unwrap().perm(7).unwrap(), f);
    std::fs::remove_dir_all(&dir).unwrap();
}
