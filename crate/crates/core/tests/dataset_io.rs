use std::fs;

use pmcw_onebit::dataset::{self, DatasetManifest, MANIFEST_FILE, RECORDS_FILE};
use pmcw_onebit::interchange::read_array;
use pmcw_onebit::quantize::one_bit;
use pmcw_onebit::scene::synthesize;
use pmcw_onebit::{CodeConfig, CorpusSpec, Error, RadarConfig};

fn small_config() -> RadarConfig {
    RadarConfig {
        m_raw: 200,
        ..RadarConfig::default()
    }
}

fn build(spec: &CorpusSpec) -> (tempfile::TempDir, DatasetManifest) {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset::generate_corpus(&small_config(), &CodeConfig::default(), spec, dir.path()).unwrap();
    (dir, manifest)
}

#[test]
fn records_round_trip() {
    let spec = CorpusSpec::new(2, vec![10.0, 20.0], 5);
    let (dir, manifest) = build(&spec);
    assert_eq!(manifest.record_count, 4);
    assert_eq!(manifest.stored_matrices, 8);
    assert_eq!(DatasetManifest::read(dir.path()).unwrap(), manifest);

    let config = small_config();
    let code = CodeConfig::default().build().unwrap();
    for id in 0..4 {
        let loaded = dataset::load_record(dir.path(), id).unwrap();
        let plan = spec.plan_record(&config, id);
        assert_eq!(loaded.plan, plan);
        let expected = one_bit(&synthesize(&config, &code, &plan.scene).unwrap()).unwrap();
        assert_eq!(loaded.onebit_cube, expected);
        assert!(loaded.pairing_error(&code).unwrap() < 1e-6);
        assert_eq!(loaded.plan.scene.snr_db, Some(if id < 2 { 10.0 } else { 20.0 }));
    }
}

#[test]
fn corrupted_byte_fails_checksum() {
    let (dir, _) = build(&CorpusSpec::new(1, vec![10.0], 9));
    let path = dir.path().join(RECORDS_FILE);
    let mut bytes = fs::read(&path).unwrap();
    // header 16 + frame 16 + a few payload bytes in
    bytes[40] ^= 0x01;
    fs::write(&path, bytes).unwrap();
    match dataset::load_record(dir.path(), 0) {
        Err(Error::Checksum { record_id: 0, .. }) => {}
        other => panic!("expected checksum error, got {other:?}"),
    }
}

#[test]
fn newer_manifest_version_is_refused() {
    let (dir, manifest) = build(&CorpusSpec::new(1, vec![10.0], 9));
    let path = dir.path().join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).unwrap();
    let bumped = text.replace(
        &format!("version = {}", manifest.version),
        &format!("version = {}", manifest.version + 1),
    );
    assert_ne!(text, bumped);
    fs::write(&path, bumped).unwrap();
    assert!(matches!(
        DatasetManifest::read(dir.path()),
        Err(Error::VersionMismatch { found: 2, expected: 1 })
    ));
}

#[test]
fn newer_records_version_is_refused() {
    let (dir, _) = build(&CorpusSpec::new(1, vec![10.0], 9));
    let path = dir.path().join(RECORDS_FILE);
    let mut bytes = fs::read(&path).unwrap();
    bytes[8] += 1;
    fs::write(&path, bytes).unwrap();
    assert!(matches!(
        dataset::load_record(dir.path(), 0),
        Err(Error::VersionMismatch { .. })
    ));
}

#[test]
fn out_of_range_id() {
    let (dir, _) = build(&CorpusSpec::new(1, vec![10.0], 9));
    assert!(matches!(
        dataset::load_record(dir.path(), 1),
        Err(Error::OutOfRange { index: 1, len: 1 })
    ));
}

#[test]
fn zero_count_fails_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("corpus");
    let spec = CorpusSpec::new(0, vec![10.0], 1);
    assert!(dataset::generate_corpus(&small_config(), &CodeConfig::default(), &spec, &out).is_err());
    assert!(!out.exists());
}

#[test]
fn regeneration_is_byte_identical() {
    let spec = CorpusSpec::new(3, vec![10.0], 77);
    let (a, _) = build(&spec);
    let (b, _) = build(&spec);
    for file in [MANIFEST_FILE, RECORDS_FILE] {
        assert_eq!(fs::read(a.path().join(file)).unwrap(), fs::read(b.path().join(file)).unwrap());
    }
    let other = build(&CorpusSpec::new(3, vec![10.0], 78)).0;
    assert_ne!(
        fs::read(a.path().join(RECORDS_FILE)).unwrap(),
        fs::read(other.path().join(RECORDS_FILE)).unwrap()
    );
}

#[test]
fn sign_bits_are_balanced() {
    let (dir, _) = build(&CorpusSpec::new(2, vec![10.0], 3));
    for id in 0..2 {
        let record = dataset::load_record(dir.path(), id).unwrap();
        let data = record.onebit_cube.data();
        let negative = data.iter().map(|z| (z.re < 0.0) as usize + (z.im < 0.0) as usize).sum::<usize>();
        let fraction = negative as f64 / (2 * data.len()) as f64;
        assert!((0.4..0.6).contains(&fraction), "record {id}: {fraction}");
    }
}

#[test]
fn export_round_trip() {
    let (dir, _) = build(&CorpusSpec::new(1, vec![20.0], 4));
    let out = tempfile::tempdir().unwrap();
    assert_eq!(dataset::export_dataset(dir.path(), out.path()).unwrap(), 1);
    let record = dataset::load_record(dir.path(), 0).unwrap();
    let cube = read_array(&out.path().join("record_000000_onebit.arr")).unwrap();
    assert_eq!(cube.dims, vec![128, 200, 2]);
    assert_eq!(&cube.to_complex_matrix().unwrap(), record.onebit_cube.data());
    let map = read_array(&out.path().join("record_000000_reference.arr")).unwrap();
    assert_eq!(map.dims, vec![128, 10, 2]);
    assert_eq!(&map.to_complex_matrix().unwrap(), record.reference_map.data());
}
