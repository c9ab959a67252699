use std::fs;

use ogclab_core::enumerate::{
    generate_marked, generate_oriented, standard_labels, GraphCatalog, INDEX_FILE,
};
use ogclab_core::graph::StabilityProfile;

fn catalogs() -> Vec<GraphCatalog> {
    let labels = standard_labels(3);
    vec![
        generate_marked(1, &labels, StabilityProfile::marked(), Default::default()).unwrap(),
        generate_oriented(1, &labels, StabilityProfile::oriented(), Default::default()).unwrap(),
        generate_oriented(
            1,
            &labels,
            StabilityProfile::oriented_strict(),
            Default::default(),
        )
        .unwrap(),
    ]
}

#[test]
fn save_and_load_round_trip() {
    for c in catalogs() {
        let dir = tempfile::tempdir().unwrap();
        c.save(dir.path()).unwrap();
        let back = GraphCatalog::load(dir.path()).unwrap();
        assert_eq!(back.flavor(), c.flavor());
        assert_eq!(back.profile(), c.profile());
        assert_eq!(back.counts(), c.counts());
        assert_eq!(back.generator_version(), c.generator_version());
        for (a, b) in back.entries().zip(c.entries()) {
            assert_eq!(a.graph, b.graph);
            assert_eq!(a.key, b.key);
            assert_eq!((a.zero, a.automorphisms), (b.zero, b.automorphisms));
        }
        // saving again is byte-identical
        let again = tempfile::tempdir().unwrap();
        back.save(again.path()).unwrap();
        for entry in fs::read_dir(dir.path()).unwrap() {
            let name = entry.unwrap().file_name();
            assert_eq!(
                fs::read(dir.path().join(&name)).unwrap(),
                fs::read(again.path().join(&name)).unwrap()
            );
        }
    }
}

#[test]
fn every_entry_is_found_by_its_key() {
    for c in catalogs() {
        c.check_invariants().unwrap();
        for d in c.degrees() {
            for (i, e) in c.stratum(d).iter().enumerate() {
                assert_eq!(c.lookup(&e.key), Some((d, i)));
            }
        }
    }
}

#[test]
fn corrupted_files_are_named() {
    let c = &catalogs()[1];
    let dir = tempfile::tempdir().unwrap();
    c.save(dir.path()).unwrap();
    let victim = dir.path().join("stratum-04.jsonl");
    let text = fs::read_to_string(&victim).unwrap();
    // reverse the first edge of the first graph
    let broken = text.replacen("\"dir\":0", "\"dir\":1", 1);
    assert_ne!(broken, text);
    fs::write(&victim, broken).unwrap();
    let err = GraphCatalog::load(dir.path()).unwrap_err();
    assert!(err.to_string().contains("stratum-04.jsonl") || err.to_string().contains(INDEX_FILE));

    fs::write(&victim, "{not json\n").unwrap();
    let err = GraphCatalog::load(dir.path()).unwrap_err();
    assert_eq!(err.path, victim);

    fs::remove_file(&victim).unwrap();
    let err = GraphCatalog::load(dir.path()).unwrap_err();
    assert_eq!(err.path, victim);

    fs::write(dir.path().join(INDEX_FILE), "[]").unwrap();
    let err = GraphCatalog::load(dir.path()).unwrap_err();
    assert_eq!(err.path, dir.path().join(INDEX_FILE));
}

#[test]
fn strict_profile_is_a_subcatalog() {
    let all = catalogs();
    let (loose, strict) = (&all[1], &all[2]);
    assert!(strict.len() < loose.len());
    for e in strict.entries() {
        assert!(loose.lookup(&e.key).is_some());
    }
}
