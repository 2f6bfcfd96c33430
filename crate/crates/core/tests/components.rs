use jordanlab::albert::{seeded_values, Backend, DEFAULT_SEED};
use jordanlab::cache::DiskCache;
use jordanlab::component::{Engine, EngineConfig};
use jordanlab::identities::{catalog_entry, commutator_identity, xy_commutator};
use jordanlab::lift::LiftTable;
use jordanlab::magma::gamma;
use jordanlab::parse::parse_jordan;
use jordanlab::tideal::t_membership;
use jordanlab::{Error, MultiDegree};

fn cached_engine(dir: &std::path::Path) -> Engine {
    Engine::new(EngineConfig {
        cache: Some(DiskCache::new(dir)),
        ..EngineConfig::default()
    })
}

#[test]
fn two_variable_components_have_no_s_identities() {
    let mut e = Engine::default();
    for counts in [vec![2, 1], vec![3, 2], vec![4, 2], vec![1, 1, 0]] {
        assert_eq!(e.space(&MultiDegree::new(counts)).unwrap().s_dim(), 0);
    }
}

#[test]
fn dimensions_of_small_components() {
    let mut e = Engine::default();
    let s = e.space(&MultiDegree::new(vec![2, 2, 2])).unwrap();
    assert_eq!((s.basis_size(), s.quotient_dim(), s.s_dim()), (168, 48, 0));
    assert!(s.all_rows_verified);
    assert_eq!(s.gamma_rank(), s.quotient_dim());
}

#[test]
fn cache_is_reused_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let d = MultiDegree::new(vec![2, 2, 1]);
    let first = cached_engine(dir.path()).space(&d).unwrap().report();
    let mut warm = cached_engine(dir.path());
    let second = warm.space(&d).unwrap().report();
    assert_eq!(warm.stats.cache_hits, 1);
    assert_eq!(serde_json::to_string(&first).unwrap(), serde_json::to_string(&second).unwrap());

    let path = DiskCache::new(dir.path()).path_for("component:2,2,1");
    let text = std::fs::read_to_string(&path).unwrap();
    let tampered = text.replacen("\\\"1\\\"", "\\\"2\\\"", 1);
    assert_ne!(tampered, text);
    std::fs::write(&path, tampered).unwrap();
    assert!(matches!(cached_engine(dir.path()).space(&d), Err(Error::CacheCorrupt { .. })));

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["format_version"] = 999.into();
    std::fs::write(&path, v.to_string()).unwrap();
    let mut stale = cached_engine(dir.path());
    assert_eq!(stale.space(&d).unwrap().s_dim(), 0);
    assert_eq!(stale.stats.warnings.len(), 1);
}

#[test]
fn resource_caps_are_reported() {
    let mut e = Engine::new(EngineConfig {
        max_cols: 50,
        ..EngineConfig::default()
    });
    assert!(matches!(e.space(&MultiDegree::new(vec![2, 2, 2])), Err(Error::ResourceCap(_))));
}

#[test]
fn low_degree_commutator_identities_vanish() {
    let mut t = LiftTable::new();
    let mut e = Engine::default();
    let g = commutator_identity(&mut t, &xy_commutator()).unwrap();
    assert!(gamma(&g).is_zero());
    assert!(e.is_zero_in_j(&g).unwrap().zero);
    let f1 = catalog_entry(&mut t, "f1").unwrap().unwrap().value;
    assert!(e.is_zero_in_j(&f1).unwrap().zero);
}

#[test]
fn nonassociativity_is_visible_to_the_zero_test() {
    let mut e = Engine::default();
    let f = parse_jordan("(x*x)*y - x*(x*y)").unwrap();
    let v = e.is_zero_in_j(&f).unwrap();
    assert!(!v.zero);
    assert!(!v.slices[0].witness.is_empty());
    let vals = seeded_values(&f, Backend::Symmetric { k: 2 }, DEFAULT_SEED, 4).unwrap();
    assert!(vals.iter().any(|p| !p.zero));
}

#[test]
fn membership_rejects_outsiders() {
    let mut t = LiftTable::new();
    let mut e = Engine::default();
    let jordan = catalog_entry(&mut t, "jordan").unwrap().unwrap().value;
    let g = parse_jordan("(x*x)*(y*x) - ((x*x)*y)*x").unwrap();
    let m = t_membership(&mut e, &g, &[("jordan".into(), jordan.clone())]).unwrap();
    // The relation is zero in J, so it is trivially a member.
    assert!(m.member);
    let f = parse_jordan("(x*x)*(y*x)").unwrap();
    let m = t_membership(&mut e, &f, &[("jordan".into(), jordan)]).unwrap();
    assert!(!m.member);
    assert!(m.certificate.is_none());
}
