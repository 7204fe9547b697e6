mod common;

use common::npy_bytes;
use seis::io::npy::{decode, encode};
use seis::io::{read_tensor, write_tensor};
use seis::{ActivationTensor, Dims, SeisError};

const SHAPE: [usize; 4] = [2, 3, 4, 5];

fn value(i: usize, j: usize, y: usize, x: usize) -> f64 {
    (i * 1000 + j * 100 + y * 10 + x) as f64 + 0.25
}

fn expected() -> ActivationTensor {
    ActivationTensor::from_fn(Dims::new(2, 3, 4, 5).unwrap(), value).unwrap()
}

fn c_order() -> Vec<f64> {
    let mut v = Vec::new();
    for i in 0..SHAPE[0] {
        for j in 0..SHAPE[1] {
            for y in 0..SHAPE[2] {
                for x in 0..SHAPE[3] {
                    v.push(value(i, j, y, x));
                }
            }
        }
    }
    v
}

fn fortran_order() -> Vec<f64> {
    let mut v = Vec::new();
    for x in 0..SHAPE[3] {
        for y in 0..SHAPE[2] {
            for j in 0..SHAPE[1] {
                for i in 0..SHAPE[0] {
                    v.push(value(i, j, y, x));
                }
            }
        }
    }
    v
}

fn le8(v: &[f64]) -> Vec<u8> {
    v.iter().flat_map(|x| x.to_le_bytes()).collect()
}

#[test]
fn writer_matches_reference_layout_byte_for_byte() {
    let reference = npy_bytes("<f8", false, &SHAPE, &le8(&c_order()));
    assert_eq!(encode(&expected()), reference);
    assert_eq!(reference.len() % 16, 0);
}

#[test]
fn reads_c_and_fortran_order_identically() {
    let c = decode(&npy_bytes("<f8", false, &SHAPE, &le8(&c_order()))).unwrap();
    let f = decode(&npy_bytes("<f8", true, &SHAPE, &le8(&fortran_order()))).unwrap();
    assert_eq!(c, expected());
    assert_eq!(f, expected());
}

#[test]
fn reads_big_endian_and_single_precision() {
    let be: Vec<u8> = c_order().iter().flat_map(|x| x.to_be_bytes()).collect();
    assert_eq!(decode(&npy_bytes(">f8", false, &SHAPE, &be)).unwrap(), expected());
    let f4: Vec<u8> = c_order().iter().flat_map(|x| (*x as f32).to_le_bytes()).collect();
    assert_eq!(decode(&npy_bytes("<f4", false, &SHAPE, &f4)).unwrap(), expected());
}

#[test]
fn rejects_integer_dtype_and_three_dims() {
    let ints = vec![0u8; 120 * 8];
    assert!(matches!(decode(&npy_bytes("<i8", false, &SHAPE, &ints)), Err(SeisError::Dtype(_))));
    assert!(matches!(
        decode(&npy_bytes("<f8", false, &[6, 4, 5], &ints)),
        Err(SeisError::Shape(_))
    ));
}

#[test]
fn file_round_trip_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.npy");
    write_tensor(&expected(), &path).unwrap();
    assert_eq!(read_tensor(&path).unwrap(), expected());
    let err = read_tensor(dir.path().join("absent.npy")).unwrap_err();
    assert!(matches!(err, SeisError::Io { .. }));
    assert!(err.to_string().contains("absent.npy"));
}
