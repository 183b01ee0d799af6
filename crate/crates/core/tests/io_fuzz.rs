use std::path::Path;

use boostlets::io::{decode_wavefield, encode_wavefield, import_csv, WVF_HEADER_LEN};
use boostlets::{Error, WavefieldGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample(seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (nx, nt) = (2 * rng.random_range(4..6), 2 * rng.random_range(4..6));
    let data = (0..nx * nt).map(|_| rng.random_range(-1e3..1e3)).collect();
    encode_wavefield(&WavefieldGrid::make(nx, nt, 0.03, 1e-4, data).unwrap()).unwrap()
}

#[test]
fn every_truncation_is_rejected() {
    let origin = Path::new("cut.wvf");
    for seed in 0..5 {
        let bytes = sample(seed);
        for len in 0..bytes.len() {
            let err = decode_wavefield(&bytes[..len], origin).unwrap_err();
            if len >= 4 {
                assert!(matches!(err, Error::Truncated { .. }), "len {len}: {err}");
            }
        }
        decode_wavefield(&bytes, origin).unwrap();
    }
}

#[test]
fn corrupted_magic_is_rejected() {
    let bytes = sample(9);
    for i in 0..4 {
        for bit in 0..8 {
            let mut bad = bytes.clone();
            bad[i] ^= 1 << bit;
            assert!(matches!(decode_wavefield(&bad, Path::new("m")), Err(Error::Format(_))));
        }
    }
}

#[test]
fn random_garbage_never_panics() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let len = rng.random_range(0..80);
        let mut bytes: Vec<u8> = (0..len).map(|_| rng.random()).collect();
        if rng.random_bool(0.5) && bytes.len() >= 4 {
            bytes[..4].copy_from_slice(b"WVF1");
        }
        let _ = decode_wavefield(&bytes, Path::new("garbage"));
    }
}

#[test]
fn bad_header_values_are_rejected() {
    let mut bytes = sample(1);
    // Zero spatial extent.
    bytes[4..8].copy_from_slice(&0u32.to_le_bytes());
    bytes.truncate(WVF_HEADER_LEN as usize);
    assert!(decode_wavefield(&bytes, Path::new("z")).is_err());

    let mut bytes = sample(1);
    bytes[12..20].copy_from_slice(&f64::NAN.to_le_bytes());
    assert!(decode_wavefield(&bytes, Path::new("nan")).is_err());

    let mut bytes = sample(2);
    let last = bytes.len() - 8;
    bytes[last..].copy_from_slice(&f64::INFINITY.to_le_bytes());
    assert!(decode_wavefield(&bytes, Path::new("inf")).is_err());
}

#[test]
fn csv_import_errors_point_at_the_cell() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("y.csv");

    let rows: Vec<String> = (0..8)
        .map(|i| (0..10).map(|j| format!(" {}", 10 * i + j)).collect::<Vec<_>>().join(","))
        .collect();
    std::fs::write(&path, rows.join("\n")).unwrap();
    let y = import_csv(&path, 0.03, 1e-4).unwrap();
    assert_eq!((y.nx(), y.nt()), (8, 10));
    assert!(y.as_slice().iter().enumerate().all(|(i, &v)| v == i as f64));

    std::fs::write(&path, "1,2,3\n4,5\n").unwrap();
    let msg = import_csv(&path, 0.03, 1e-4).unwrap_err().to_string();
    assert!(msg.contains("row 1 has 2 fields, expected 3"), "{msg}");

    std::fs::write(&path, "1,2\n3,x\n").unwrap();
    let msg = import_csv(&path, 0.03, 1e-4).unwrap_err().to_string();
    assert!(msg.contains("row 1, column 1"), "{msg}");

    std::fs::write(&path, "").unwrap();
    assert!(import_csv(&path, 0.03, 1e-4).is_err());
}
